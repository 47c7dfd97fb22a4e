import numpy as np


def polyline_distance(points, polyline) -> np.ndarray:
    """Distance from each point to a polyline (segments between consecutive vertices)"""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    v = np.atleast_1d(np.asarray(polyline, dtype=complex))
    if v.size == 0:
        return np.full(z.shape, np.inf)
    if v.size == 1:
        return np.abs(z - v[0])

    p, q = v[:-1], v[1:]
    d = q - p
    length2 = np.abs(d) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(length2 > 0, ((z[:, None] - p[None, :]) * np.conj(d)[None, :]).real / length2[None, :], 0.0)
    s = np.clip(s, 0.0, 1.0)
    nearest = p[None, :] + s * d[None, :]
    return np.abs(z[:, None] - nearest).min(axis=1)
