import json
from pathlib import Path

import pytest

from flightdeck.errors import ProtocolError
from flightdeck.server.protocol import (
    CLIENT_TYPES,
    MESSAGE_TYPES,
    SERVER_TYPES,
    WireMessage,
    decode,
    encode,
    error_reply,
    ok_reply,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


def golden_files():
    files = sorted(GOLDEN_DIR.glob("*.json"))
    assert files, "golden frames missing"
    return files


class TestGoldenRoundTrip:
    @pytest.mark.parametrize("path", golden_files(), ids=lambda p: p.stem)
    def test_decode_encode_is_bit_exact(self, path):
        raw = path.read_text(encoding="utf-8").strip()
        msg = decode(raw)
        assert msg.type == path.stem
        assert encode(msg) == raw

    def test_every_message_type_has_a_golden_frame(self):
        covered = {p.stem for p in golden_files()}
        assert covered == set(MESSAGE_TYPES)

    @pytest.mark.parametrize("path", golden_files(), ids=lambda p: p.stem)
    def test_payload_survives_reparse_as_equal_value(self, path):
        raw = path.read_text(encoding="utf-8").strip()
        msg = decode(raw)
        again = decode(encode(msg))
        assert again == msg


class TestDecodeErrors:
    def test_unknown_type_carries_offending_seq(self):
        frame = json.dumps({"v": 1, "type": "warp_drive", "seq": 77, "payload": {}})
        with pytest.raises(ProtocolError) as exc_info:
            decode(frame)
        assert exc_info.value.code == "unknown_type"
        assert exc_info.value.seq == 77

    def test_bad_version_rejected(self):
        frame = json.dumps({"v": 2, "type": "takeoff", "seq": 5, "payload": {}})
        with pytest.raises(ProtocolError) as exc_info:
            decode(frame)
        assert exc_info.value.code == "bad_version"

    def test_invalid_json_rejected(self):
        with pytest.raises(ProtocolError) as exc_info:
            decode("{nope")
        assert exc_info.value.code == "bad_frame"

    def test_missing_seq_rejected(self):
        frame = json.dumps({"v": 1, "type": "takeoff", "payload": {}})
        with pytest.raises(ProtocolError) as exc_info:
            decode(frame)
        assert exc_info.value.code == "bad_payload"

    def test_malformed_position_rejected(self):
        frame = json.dumps(
            {"v": 1, "type": "add_waypoint", "seq": 3, "payload": {"pos": [1.0, 2.0]}}
        )
        with pytest.raises(ProtocolError) as exc_info:
            decode(frame)
        assert exc_info.value.code == "bad_payload"
        assert exc_info.value.seq == 3

    def test_malformed_ray_rejected(self):
        frame = json.dumps(
            {
                "v": 1,
                "type": "add_waypoint_indirect",
                "seq": 4,
                "payload": {"pick_ray": {"origin": [0, 0, 1]}, "tilt_ray": {}},
            }
        )
        with pytest.raises(ProtocolError):
            decode(frame)

    def test_joystick_requires_numbers(self):
        frame = json.dumps(
            {"v": 1, "type": "joystick", "seq": 5, "payload": {"dx": "left", "dy": 0, "dz": 0}}
        )
        with pytest.raises(ProtocolError):
            decode(frame)

    def test_empty_trial_sequence_rejected(self):
        frame = json.dumps(
            {"v": 1, "type": "start_trial", "seq": 6, "payload": {"sequence": []}}
        )
        with pytest.raises(ProtocolError):
            decode(frame)


class TestReplies:
    def test_ok_reply_echoes_seq(self):
        msg = ok_reply(41, {"revision": 2})
        assert msg.type == "ok"
        assert msg.seq == 41
        assert msg.payload == {"seq": 41, "revision": 2}

    def test_error_reply_structure(self):
        msg = error_reply(9, "unknown_waypoint", "no waypoint with id 99")
        decoded = decode(encode(msg))
        assert decoded.payload["code"] == "unknown_waypoint"
        assert decoded.payload["seq"] == 9

    def test_type_partition(self):
        assert CLIENT_TYPES.isdisjoint(SERVER_TYPES)
        assert CLIENT_TYPES | SERVER_TYPES == MESSAGE_TYPES
