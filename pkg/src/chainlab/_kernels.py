"""Hot numeric kernels: leapfrog stepping and oscillatory sums.

Each kernel has a compiled (numba ``@njit``) and a vectorized pure-NumPy
implementation with identical semantics; ``_accel.USE_NUMBA`` selects which
one the package-level aliases point at.  Both variants stay importable so the
benchmark can compare them directly.
"""

import numpy as np

from ._accel import USE_NUMBA, njit


# ---------------------------------------------------------------------------
# velocity-Verlet advance on a finite window with hard-zero walls
#
# Site layout: arrays of length W cover consecutive lattice sites; gam has
# length W+1 and gam[i] is the bond between site i-1 and site i (ghost sites
# outside the window are clamped to zero displacement).


def _force_numpy(u, mu, gam, out):
    W = u.shape[0]
    e = np.empty(W + 1)
    e[0] = u[0]
    np.subtract(u[1:], u[:-1], out=e[1:W])
    e[W] = -u[W - 1]
    np.multiply(gam, e, out=e)
    np.subtract(e[1:], e[:-1], out=out)
    out -= mu * u
    return out


def _advance_numpy(u, v, f, minv, mu, gam, dt, nsteps):
    half = 0.5 * dt
    for _ in range(nsteps):
        v += half * f
        u += dt * v * minv
        _force_numpy(u, mu, gam, f)
        v += half * f


@njit(cache=True)
def _advance_numba(u, v, f, minv, mu, gam, dt, nsteps):  # pragma: no cover
    W = u.shape[0]
    half = 0.5 * dt
    for _ in range(nsteps):
        for i in range(W):
            v[i] += half * f[i]
        for i in range(W):
            u[i] += dt * v[i] * minv[i]
        for i in range(W):
            left = u[i - 1] if i > 0 else 0.0
            right = u[i + 1] if i < W - 1 else 0.0
            f[i] = gam[i + 1] * (right - u[i]) - gam[i] * (u[i] - left) - mu[i] * u[i]
        for i in range(W):
            v[i] += half * f[i]


def force_into(u, mu, gam, out):
    """Lattice force with hard-zero ghost sites, written into ``out``."""
    return _force_numpy(u, mu, gam, out)


advance = _advance_numba if USE_NUMBA else _advance_numpy


# ---------------------------------------------------------------------------
# oscillatory mixing: out[k] = sum_j coef[j] * trig(omega[j] * t[k])
#
# This is the time-side assembly of every band-jump quadrature; node counts
# reach a few thousand and time grids a few thousand points.

_MIX_CHUNK = 256


def _mix_numpy(kind, coef, omega, t):
    out = np.empty(t.shape[0])
    trig = np.sin if kind == 0 else np.cos
    for lo in range(0, t.shape[0], _MIX_CHUNK):
        hi = min(lo + _MIX_CHUNK, t.shape[0])
        out[lo:hi] = trig(np.outer(t[lo:hi], omega)) @ coef
    return out


@njit(cache=True)
def _mix_numba(kind, coef, omega, t):  # pragma: no cover
    K = t.shape[0]
    M = omega.shape[0]
    out = np.empty(K)
    for k in range(K):
        acc = 0.0
        tk = t[k]
        if kind == 0:
            for j in range(M):
                acc += coef[j] * np.sin(omega[j] * tk)
        else:
            for j in range(M):
                acc += coef[j] * np.cos(omega[j] * tk)
        out[k] = acc
    return out


def _mix_dispatch_numba(kind, coef, omega, t):
    return _mix_numba(kind, np.ascontiguousarray(coef),
                      np.ascontiguousarray(omega), np.ascontiguousarray(t))


mix = _mix_dispatch_numba if USE_NUMBA else _mix_numpy
