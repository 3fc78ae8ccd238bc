"""Pure-Python tracking-episode kernel.

Fallback used when the compiled extension is unavailable.  The arithmetic
here mirrors ``_csim.pyx`` operation for operation so both backends produce
bit-identical trajectories; keep the two in sync when touching either.
"""

from __future__ import annotations

import math

BACKEND = "python"


def episode_max_deviation(p0, v0, ref_pos, ref_vel, dist, kp, kd, accel_max, dt):
    """Run one tracking episode and return the peak deviation from the reference.

    p0, v0: initial position/velocity, length-3 sequences.
    ref_pos: (n+1, 3) reference positions at each step boundary.
    ref_vel: (n, 3) reference velocities over each step.
    dist: (n, 3) disturbance accelerations over each step.
    """
    rp = ref_pos.tolist() if hasattr(ref_pos, "tolist") else [list(r) for r in ref_pos]
    rv = ref_vel.tolist() if hasattr(ref_vel, "tolist") else [list(r) for r in ref_vel]
    dd = dist.tolist() if hasattr(dist, "tolist") else [list(r) for r in dist]
    n = len(rv)
    if len(rp) != n + 1 or len(dd) != n:
        raise ValueError("ref_pos must have one more row than ref_vel/dist")

    px, py, pz = float(p0[0]), float(p0[1]), float(p0[2])
    vx, vy, vz = float(v0[0]), float(v0[1]), float(v0[2])
    kp = float(kp)
    kd = float(kd)
    amax = float(accel_max)
    dt = float(dt)
    worst = 0.0

    for i in range(n):
        r = rp[i]
        w = rv[i]
        d = dd[i]

        ax = kp * (r[0] - px) + kd * (w[0] - vx)
        ay = kp * (r[1] - py) + kd * (w[1] - vy)
        az = kp * (r[2] - pz) + kd * (w[2] - vz)
        if ax > amax:
            ax = amax
        elif ax < -amax:
            ax = -amax
        if ay > amax:
            ay = amax
        elif ay < -amax:
            ay = -amax
        if az > amax:
            az = amax
        elif az < -amax:
            az = -amax

        vx = vx + (ax + d[0]) * dt
        vy = vy + (ay + d[1]) * dt
        vz = vz + (az + d[2]) * dt
        px = px + vx * dt
        py = py + vy * dt
        pz = pz + vz * dt

        nxt = rp[i + 1]
        ex = px - nxt[0]
        ey = py - nxt[1]
        ez = pz - nxt[2]
        dev = math.sqrt(ex * ex + ey * ey + ez * ez)
        if dev > worst:
            worst = dev

    return worst
