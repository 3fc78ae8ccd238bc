"""Exception types shared across the package.

Every domain error derives from FlightdeckError so callers (and the wire
protocol layer) can map failures to structured replies in one place.
"""


class FlightdeckError(Exception):
    """Base class for all domain errors."""

    code = "error"


class DegenerateRay(FlightdeckError):
    """Ray has no usable horizontal component for the requested operation."""

    code = "degenerate_ray"


class DegenerateGesture(FlightdeckError):
    """Two-hand gesture with a vanishing initial separation."""

    code = "degenerate_gesture"


class NoGroundHit(FlightdeckError):
    """Pick ray does not meet the ground plane in front of the controller."""

    code = "no_ground_hit"


class OutOfBounds(FlightdeckError):
    """Position outside the lab bounds while clamping is disabled."""

    code = "out_of_bounds"


class UnknownWaypoint(FlightdeckError):
    """Waypoint id does not exist in the path."""

    code = "unknown_waypoint"


class PathLimitExceeded(FlightdeckError):
    """Path already holds the maximum number of waypoints."""

    code = "path_limit"


class EmptyPath(FlightdeckError):
    """Trajectory planning requires at least one waypoint."""

    code = "empty_path"


class InvalidTimestep(FlightdeckError):
    """Simulation step outside the supported (0, 0.05] second range."""

    code = "invalid_timestep"


class UnstableGains(FlightdeckError):
    """Tracker gains violate the stability invariants."""

    code = "unstable_gains"


class NotFlying(FlightdeckError):
    """Manual control input while the vehicle is not in flight."""

    code = "not_flying"


class InvalidModeTransition(FlightdeckError):
    """Launch/land command outside the allowed mode cycle."""

    code = "invalid_mode_transition"


class IncompleteLog(FlightdeckError):
    """Trial log has no end event; metrics are undefined."""

    code = "incomplete_log"


class ZeroTotalVariance(FlightdeckError):
    """Cronbach's alpha is undefined when the score totals do not vary."""

    code = "zero_total_variance"


class ConfigError(FlightdeckError):
    """Malformed environment or trial configuration."""

    code = "config_error"


class ProtocolError(FlightdeckError):
    """Malformed or unknown wire message."""

    code = "protocol_error"

    def __init__(self, detail: str, code: str = "protocol_error"):
        super().__init__(detail)
        self.code = code
        self.detail = detail
