"""Stateless resumption tokens.

Wire format (ASCII)::

    token   = body "." mac
    body    = base64url-nopad( "v1" US verb US snapshot US cursor US expiry US prefix US from US until US set )
    mac     = first 16 hex digits of HMAC-SHA256(secret, body)

``US`` is the unit separator byte 0x1F. ``verb`` is ``ListRecords`` or
``ListIdentifiers``; ``expiry`` is RFC3339 UTC with seconds; empty strings
mean an absent ``from``/``until``/``set``.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import hmac
from dataclasses import dataclass
from datetime import datetime, timezone

VERSION = "v1"
_US = "\x1f"
_MAC_HEX = 16


class TokenError(ValueError):
    pass


def _stamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class ResumptionToken:
    verb: str
    snapshot: str
    cursor: int
    expiry: datetime
    prefix: str
    from_: str = ""
    until: str = ""
    set: str = ""

    def __post_init__(self):
        if self.cursor < 0:
            raise TokenError("cursor must be non-negative")
        for name in ("verb", "snapshot", "prefix", "from_", "until", "set"):
            if _US in getattr(self, name):
                raise TokenError(f"{name} contains a separator byte")


def _mac(secret: bytes, body: str) -> str:
    return hmac.new(secret, body.encode("ascii"), hashlib.sha256).hexdigest()[:_MAC_HEX]


def encode_token(tok: ResumptionToken, secret: bytes) -> str:
    fields = [VERSION, tok.verb, tok.snapshot, str(tok.cursor), _stamp(tok.expiry), tok.prefix, tok.from_,
              tok.until, tok.set]
    body = base64.urlsafe_b64encode(_US.join(fields).encode("utf-8")).decode("ascii").rstrip("=")
    return f"{body}.{_mac(secret, body)}"


def decode_token(text: str, secret: bytes) -> ResumptionToken:
    body, dot, mac = text.partition(".")
    if not dot or not body:
        raise TokenError("token is not body.mac")
    try:
        body.encode("ascii")
    except UnicodeEncodeError:
        raise TokenError("token is not ASCII") from None
    if not hmac.compare_digest(mac, _mac(secret, body)):
        raise TokenError("token checksum mismatch")
    try:
        raw = base64.urlsafe_b64decode(body + "=" * (-len(body) % 4)).decode("utf-8")
    except (binascii.Error, UnicodeDecodeError, ValueError):
        raise TokenError("token body is not base64url") from None
    fields = raw.split(_US)
    if len(fields) != 9 or fields[0] != VERSION:
        raise TokenError("unknown token layout")
    _, verb, snapshot, cursor, expiry, prefix, from_, until, set_ = fields
    if not cursor.isdigit():
        raise TokenError("cursor is not a non-negative integer")
    try:
        exp = datetime.strptime(expiry, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
    except ValueError:
        raise TokenError("bad expiry") from None
    return ResumptionToken(verb, snapshot, int(cursor), exp, prefix, from_, until, set_)
