"""Rotation helpers on SO(3): hat/vee maps, exponential map, conversions."""

import math

import numpy as np


def hat(w):
    """Skew-symmetric matrix of a 3-vector, so that hat(w) @ v == cross(w, v)."""
    wx, wy, wz = float(w[0]), float(w[1]), float(w[2])
    return np.array([
        [0.0, -wz, wy],
        [wz, 0.0, -wx],
        [-wy, wx, 0.0],
    ])


def vee(W):
    """Inverse of hat for a skew-symmetric matrix."""
    return np.array([W[2, 1], W[0, 2], W[1, 0]])


def cross(a, b):
    # np.cross has high overhead for single 3-vectors; this sits in hot loops.
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def exp_so3(w):
    """Matrix exponential of hat(w) by the Rodrigues formula.

    Exact identity for ``w == 0``. Near zero the sin/cos coefficients are
    evaluated by series so the result stays accurate to machine precision.
    """
    wx, wy, wz = float(w[0]), float(w[1]), float(w[2])
    t2 = wx * wx + wy * wy + wz * wz
    if t2 == 0.0:
        return np.eye(3)
    t = math.sqrt(t2)
    if t < 1e-4:
        # sin(t)/t and (1-cos(t))/t^2 via series; relative error below 1e-16
        a = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
        b = 0.5 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0))
    else:
        a = math.sin(t) / t
        b = (1.0 - math.cos(t)) / t2
    W = hat((wx, wy, wz))
    return np.eye(3) + a * W + b * (W @ W)


def log_so3(R):
    """Rotation vector of R (inverse of exp_so3), for angles below pi.

    The small-angle branch reads the skew part directly, which is exact to
    first order and avoids the 0/0 in the general formula.
    """
    tr = float(R[0, 0] + R[1, 1] + R[2, 2])
    cos_t = min(1.0, max(-1.0, 0.5 * (tr - 1.0)))
    t = math.acos(cos_t)
    w = 0.5 * np.array(
        [R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]]
    )
    if t < 1e-7:
        return w
    if t > math.pi - 1e-6:
        raise ValueError("rotation angle too close to pi for the log map")
    return w * (t / math.sin(t))


def rot_x(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def from_rpy(roll, pitch, yaw):
    """Rotation matrix from Z-Y-X intrinsic Euler angles (yaw about world z)."""
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def to_rpy(R):
    """Z-Y-X Euler angles (roll, pitch, yaw) of a rotation matrix."""
    pitch = math.asin(max(-1.0, min(1.0, -float(R[2, 0]))))
    if abs(R[2, 0]) < 1.0 - 1e-12:
        roll = math.atan2(float(R[2, 1]), float(R[2, 2]))
        yaw = math.atan2(float(R[1, 0]), float(R[0, 0]))
    else:
        # gimbal lock: distribute the remaining rotation into yaw
        roll = 0.0
        yaw = math.atan2(-float(R[0, 1]), float(R[1, 1]))
    return roll, pitch, yaw


def to_quat(R):
    """Unit quaternion (w, x, y, z) with w >= 0 from a rotation matrix.

    Uses Shepperd's branch selection so the largest component is computed
    first; deterministic for any valid input.
    """
    tr = float(R[0, 0] + R[1, 1] + R[2, 2])
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        w = 0.25 * s
        x = (R[2, 1] - R[1, 2]) / s
        y = (R[0, 2] - R[2, 0]) / s
        z = (R[1, 0] - R[0, 1]) / s
    elif R[0, 0] >= R[1, 1] and R[0, 0] >= R[2, 2]:
        s = math.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        w = (R[2, 1] - R[1, 2]) / s
        x = 0.25 * s
        y = (R[0, 1] + R[1, 0]) / s
        z = (R[0, 2] + R[2, 0]) / s
    elif R[1, 1] >= R[2, 2]:
        s = math.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        w = (R[0, 2] - R[2, 0]) / s
        x = (R[0, 1] + R[1, 0]) / s
        y = 0.25 * s
        z = (R[1, 2] + R[2, 1]) / s
    else:
        s = math.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        w = (R[1, 0] - R[0, 1]) / s
        x = (R[0, 2] + R[2, 0]) / s
        y = (R[1, 2] + R[2, 1]) / s
        z = 0.25 * s
    q = np.array([w, x, y, z])
    q /= math.sqrt(float(q @ q))
    if q[0] < 0.0:
        q = -q
    return q


def from_quat(q):
    """Rotation matrix from a unit quaternion (w, x, y, z)."""
    w, x, y, z = (float(v) for v in q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def orthonormality_defect(R):
    """Frobenius norm of R^T R - I; zero for an exact rotation matrix."""
    E = R.T @ R - np.eye(3)
    return float(np.sqrt((E * E).sum()))
