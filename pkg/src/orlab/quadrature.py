"""Vectorised adaptive Gauss-Legendre quadrature for positive integrands."""

from __future__ import annotations

import numpy as np

DEFAULT_RTOL = 1e-10

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class QuadratureError(RuntimeError):
    pass


def gauss_legendre(phi, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    return half * (phi(x.ravel()).reshape(x.shape) @ _GL_W)


def adaptive_gl(phi, a, b, rtol: float = DEFAULT_RTOL, max_depth: int = 50) -> np.ndarray:
    """Integrate ``phi`` over each [a_i, b_i], halving panels until the
    16-point rule and its two-panel refinement agree to ``rtol``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    total = np.zeros(len(a))
    owner = np.arange(len(a))
    coarse = gauss_legendre(phi, a, b)
    for _ in range(max_depth):
        if a.size == 0:
            return total
        mid = 0.5 * (a + b)
        left = gauss_legendre(phi, a, mid)
        right = gauss_legendre(phi, mid, b)
        fine = left + right
        ok = np.abs(fine - coarse) <= rtol * np.abs(fine) + 1e-300
        np.add.at(total, owner[ok], fine[ok])
        bad = ~ok
        a = np.concatenate([a[bad], mid[bad]])
        b = np.concatenate([mid[bad], b[bad]])
        owner = np.concatenate([owner[bad], owner[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    raise QuadratureError(f"{a.size} panels failed to converge, e.g. [{a[0]:.4g}, {b[0]:.4g}]")


def integrate_to_infinity(phi, x0: float, direction: float, x_limit: float, rtol: float = DEFAULT_RTOL):
    """Integral of positive ``phi`` from x0 toward +inf (direction=+1) or -inf (-1).

    Panels double in width; once phi has decayed, the remainder is closed with
    an exponential tail phi(x)/|d log phi/dx|.  Returns (value, x_reached).
    Raises QuadratureError if phi is not decaying at ``x_limit``.
    """
    acc = 0.0
    width = 1.0
    near = x0
    while True:
        far = near + direction * width
        far = min(far, x_limit) if direction > 0 else max(far, x_limit)
        acc += float(adaptive_gl(phi, np.array([min(near, far)]), np.array([max(near, far)]), rtol)[0])
        p_far, p_back = phi(np.array([far, far - direction]))
        if p_far == 0:
            return acc, far
        decay = np.log(p_back / p_far)
        if decay <= 1e-12:
            if far == x_limit:
                raise QuadratureError("integrand is not decaying; integral diverges")
        else:
            tail = p_far / decay
            if tail <= 1e-3 * rtol * acc or far == x_limit:
                return acc + tail, far
        near = far
        width *= 2.0
