"""Injectable clocks. ``DCATFORGE_NOW`` pins every clock to one RFC3339 instant."""

from __future__ import annotations

import os
from collections.abc import Callable
from datetime import datetime, timezone

ENV_VAR = "DCATFORGE_NOW"

Clock = Callable[[], datetime]


def parse_instant(text: str) -> datetime:
    dt = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if dt.tzinfo is None:
        raise ValueError(f"{text!r} has no UTC offset")
    return dt.astimezone(timezone.utc)


def fixed_clock(instant: datetime) -> Clock:
    return lambda: instant


def system_clock() -> datetime:
    return datetime.now(timezone.utc)


def clock_from_env(environ=os.environ) -> Clock:
    value = environ.get(ENV_VAR)
    if value:
        return fixed_clock(parse_instant(value))
    return system_clock
