"""OAI-PMH v2 server and harvesting client for DCAT-AP records."""

from .harvest import (
    HarvestError,
    HttpTransport,
    LoopbackTransport,
    OaiRecord,
    ProtocolError,
    Transport,
    TransportError,
    harvest,
    harvest_pages,
)
from .http import OAI_PATH, OaiHTTPServer, make_server, serve_in_thread
from .server import (
    ERROR_CODES,
    METADATA_FORMATS,
    OAI_NS,
    OaiConfig,
    OaiError,
    OaiRequest,
    OaiResponse,
    Repository,
    handle_request,
)
from .token import ResumptionToken, TokenError, decode_token, encode_token

__all__ = [
    "HarvestError", "HttpTransport", "LoopbackTransport", "OaiRecord", "ProtocolError", "Transport",
    "TransportError", "harvest", "harvest_pages", "OAI_PATH", "OaiHTTPServer", "make_server",
    "serve_in_thread", "ERROR_CODES", "METADATA_FORMATS", "OAI_NS", "OaiConfig", "OaiError", "OaiRequest",
    "OaiResponse", "Repository", "handle_request", "ResumptionToken", "TokenError", "decode_token",
    "encode_token",
]
