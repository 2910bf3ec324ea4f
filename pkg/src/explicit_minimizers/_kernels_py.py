"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled versions are tested against.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_SIGMA = 0.25
_MAX_LEVELS = 60


def _levels(theta_star: np.ndarray) -> np.ndarray:
    """Number of geometric refinement levels toward theta=0."""
    with np.errstate(divide="ignore"):
        lev = np.ceil(np.log(math.pi / theta_star) / -math.log(_SIGMA))
    lev = np.where(theta_star > 0.0, lev, _MAX_LEVELS)
    return np.clip(lev, 0, _MAX_LEVELS).astype(np.int64)


def angular_kernel(d, p, is_log, r, s, gl_x, gl_w, sphere_lower):
    """Integral over S^{d-1} of |r e - s w|^p (or its log) for each s, d >= 2.

    ``sphere_lower`` is |S^{d-2}|; ``gl_x``/``gl_w`` a Gauss-Legendre rule on [-1, 1].
    Points with r == 0 or s == 0 must be handled by the caller.
    """
    s = np.asarray(s, dtype=float)
    delta = np.abs(r - s)
    rs = r * s
    x = delta * delta / (2.0 * rs)
    theta_star = np.log1p(x + np.sqrt(x * (x + 2.0)))
    lev = _levels(theta_star)
    npan = lev + 1
    owner = np.repeat(np.arange(s.size), npan)
    # panel j of point i spans [pi*sigma^(j+1), pi*sigma^j], the last one ends at 0
    start = np.cumsum(npan) - npan
    j = np.arange(owner.size) - np.repeat(start, npan)
    hi = math.pi * _SIGMA ** j
    lo = np.where(j == np.repeat(lev, npan), 0.0, hi * _SIGMA)
    half = 0.5 * (hi - lo)
    theta = (0.5 * (hi + lo))[:, None] + half[:, None] * gl_x[None, :]
    w = half[:, None] * gl_w[None, :]
    sh = np.sin(0.5 * theta)
    q2 = (delta * delta)[owner][:, None] + 4.0 * rs[owner][:, None] * sh * sh
    if is_log:
        f = 0.5 * np.log(q2)
    else:
        f = q2 ** (0.5 * p)
    if d != 2:
        f = f * np.sin(theta) ** (d - 2)
    vals = np.bincount(owner, weights=(f * w).sum(axis=1), minlength=s.size)
    return sphere_lower * vals


def pair_energy(x, a, b):
    """Sum over ordered pairs i != j of W(x_i - x_j), W = r^a/a - r^b/b (0 means log)."""
    x = np.asarray(x, dtype=float)
    diff = x[:, None, :] - x[None, :, :]
    r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    iu = np.triu_indices(x.shape[0], 1)
    rr = r[iu]
    with np.errstate(divide="ignore"):
        wa = np.log(rr) if a == 0 else rr**a / a
        wb = np.log(rr) if b == 0 else rr**b / b
    return 2.0 * float(np.sum(wa - wb))


def pair_energy_grad(x, a, b):
    """Ordered-pair energy sum and its gradient with respect to every point."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    diff = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r2, 1.0)
    r = np.sqrt(r2)
    with np.errstate(divide="ignore"):
        wa = np.log(r) if a == 0 else r**a / a
        wb = np.log(r) if b == 0 else r**b / b
        coef = r ** (a - 2.0) - r ** (b - 2.0)
    w = wa - wb
    np.fill_diagonal(w, 0.0)
    np.fill_diagonal(coef, 0.0)
    e = float(np.sum(w))
    g = 2.0 * np.einsum("ij,ijk->ik", coef, diff)
    if n == 1:
        g[:] = 0.0
    return e, g
