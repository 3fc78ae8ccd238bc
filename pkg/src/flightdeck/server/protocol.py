"""Wire protocol: versioned JSON messages, one per frame.

Every frame is a UTF-8 JSON object {v, type, seq, payload}.  Encoding is
canonical (sorted keys, compact separators) so identical messages are
byte-identical, which the golden-file and replay tests rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from numbers import Real
from typing import Optional

from ..errors import ProtocolError

PROTOCOL_VERSION = 1

CLIENT_TYPES = frozenset(
    {
        "hello",
        "add_waypoint",
        "add_waypoint_indirect",
        "move_waypoint",
        "delete_waypoint",
        "takeoff",
        "land",
        "joystick",
        "start_trial",
    }
)
SERVER_TYPES = frozenset({"ok", "error", "env", "path", "state"})
MESSAGE_TYPES = CLIENT_TYPES | SERVER_TYPES


@dataclass(frozen=True)
class WireMessage:
    type: str
    seq: int
    payload: dict
    v: int = PROTOCOL_VERSION


def encode(msg: WireMessage) -> str:
    return json.dumps(
        {"v": msg.v, "type": msg.type, "seq": msg.seq, "payload": msg.payload},
        sort_keys=True,
        separators=(",", ":"),
    )


def _require_vec3(payload: dict, key: str) -> None:
    v = payload.get(key)
    if not (isinstance(v, (list, tuple)) and len(v) == 3 and all(isinstance(c, Real) for c in v)):
        raise ProtocolError(f"{key} must be a list of 3 numbers", "bad_payload")


def _require_ray(payload: dict, key: str) -> None:
    r = payload.get(key)
    if not isinstance(r, dict):
        raise ProtocolError(f"{key} must be an object with origin and direction", "bad_payload")
    _require_vec3(r, "origin")
    _require_vec3(r, "direction")


def _require_number(payload: dict, key: str) -> None:
    if not isinstance(payload.get(key), Real):
        raise ProtocolError(f"{key} must be a number", "bad_payload")


def _require_int(payload: dict, key: str) -> None:
    v = payload.get(key)
    if not (isinstance(v, int) and not isinstance(v, bool)):
        raise ProtocolError(f"{key} must be an integer", "bad_payload")


def validate_payload(msg_type: str, payload: dict) -> None:
    """Structural checks for client payloads; semantic checks happen in the session."""
    if msg_type == "hello":
        token = payload.get("token")
        if token is not None and not isinstance(token, str):
            raise ProtocolError("token must be a string", "bad_payload")
    elif msg_type == "add_waypoint":
        _require_vec3(payload, "pos")
        if "after" in payload and payload["after"] is not None:
            _require_int(payload, "after")
    elif msg_type == "add_waypoint_indirect":
        _require_ray(payload, "pick_ray")
        _require_ray(payload, "tilt_ray")
    elif msg_type == "move_waypoint":
        _require_int(payload, "id")
        _require_vec3(payload, "pos")
    elif msg_type == "delete_waypoint":
        _require_int(payload, "id")
    elif msg_type == "joystick":
        for k in ("dx", "dy", "dz"):
            _require_number(payload, k)
    elif msg_type == "start_trial":
        seq = payload.get("sequence")
        if not (isinstance(seq, list) and seq and all(isinstance(s, str) for s in seq)):
            raise ProtocolError("sequence must be a nonempty list of labels", "bad_payload")
        if not isinstance(payload.get("interface_tag", "VR"), str):
            raise ProtocolError("interface_tag must be a string", "bad_payload")
    # takeoff/land carry empty payloads; server types are produced locally.


def decode(text: str | bytes) -> WireMessage:
    """Parse and validate one frame; raises ProtocolError with a seq when known."""
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"invalid JSON frame: {exc}", "bad_frame") from exc
    if not isinstance(data, dict):
        raise ProtocolError("frame must be a JSON object", "bad_frame")
    seq = data.get("seq")
    seq = seq if isinstance(seq, int) and not isinstance(seq, bool) else None
    err_seq = seq if seq is not None else 0

    if data.get("v") != PROTOCOL_VERSION:
        exc = ProtocolError(f"unsupported protocol version {data.get('v')!r}", "bad_version")
        exc.seq = err_seq
        raise exc
    msg_type = data.get("type")
    if msg_type not in MESSAGE_TYPES:
        exc = ProtocolError(f"unknown message type {msg_type!r}", "unknown_type")
        exc.seq = err_seq
        raise exc
    if seq is None:
        exc = ProtocolError("seq must be an integer", "bad_payload")
        exc.seq = 0
        raise exc
    payload = data.get("payload")
    if not isinstance(payload, dict):
        exc = ProtocolError("payload must be an object", "bad_payload")
        exc.seq = seq
        raise exc
    try:
        validate_payload(msg_type, payload)
    except ProtocolError as exc:
        exc.seq = seq
        raise
    return WireMessage(type=msg_type, seq=seq, payload=payload)


def ok_reply(seq: int, extra: Optional[dict] = None) -> WireMessage:
    return WireMessage("ok", seq, {"seq": seq, **(extra or {})})


def error_reply(seq: int, code: str, detail: str) -> WireMessage:
    return WireMessage("error", seq, {"seq": seq, "code": code, "detail": detail})
