# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tracking-episode kernel.

Must stay arithmetically identical to ``pysim.py`` (same operations in the
same order) so the two backends are bit-equal.
"""

from libc.math cimport sqrt

BACKEND = "compiled"


def episode_max_deviation(p0, v0, double[:, ::1] ref_pos, double[:, ::1] ref_vel,
                          double[:, ::1] dist, double kp, double kd,
                          double accel_max, double dt):
    """See pysim.episode_max_deviation."""
    cdef Py_ssize_t n = ref_vel.shape[0]
    if ref_pos.shape[0] != n + 1 or dist.shape[0] != n:
        raise ValueError("ref_pos must have one more row than ref_vel/dist")

    cdef double px = p0[0], py = p0[1], pz = p0[2]
    cdef double vx = v0[0], vy = v0[1], vz = v0[2]
    cdef double amax = accel_max
    cdef double worst = 0.0
    cdef double ax, ay, az, ex, ey, ez, dev
    cdef Py_ssize_t i

    with nogil:
        for i in range(n):
            ax = kp * (ref_pos[i, 0] - px) + kd * (ref_vel[i, 0] - vx)
            ay = kp * (ref_pos[i, 1] - py) + kd * (ref_vel[i, 1] - vy)
            az = kp * (ref_pos[i, 2] - pz) + kd * (ref_vel[i, 2] - vz)
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

            vx = vx + (ax + dist[i, 0]) * dt
            vy = vy + (ay + dist[i, 1]) * dt
            vz = vz + (az + dist[i, 2]) * dt
            px = px + vx * dt
            py = py + vy * dt
            pz = pz + vz * dt

            ex = px - ref_pos[i + 1, 0]
            ey = py - ref_pos[i + 1, 1]
            ez = pz - ref_pos[i + 1, 2]
            dev = sqrt(ex * ex + ey * ey + ez * ez)
            if dev > worst:
                worst = dev

    return worst
