"""Control-system boundary: wire protocol, session, live service, headless runner."""

from .headless import run_headless
from .protocol import (
    CLIENT_TYPES,
    MESSAGE_TYPES,
    PROTOCOL_VERSION,
    SERVER_TYPES,
    WireMessage,
    decode,
    encode,
    error_reply,
    ok_reply,
    validate_payload,
)
from .service import SessionLoop, SessionService
from .session import Session

__all__ = [
    "CLIENT_TYPES",
    "MESSAGE_TYPES",
    "PROTOCOL_VERSION",
    "SERVER_TYPES",
    "Session",
    "SessionLoop",
    "SessionService",
    "WireMessage",
    "decode",
    "encode",
    "error_reply",
    "ok_reply",
    "run_headless",
    "validate_payload",
]
