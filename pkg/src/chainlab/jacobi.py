"""The tridiagonal symbol of the defect block and its minor algebra.

For the Fourier-Laplace transformed defect equations the block unknowns
satisfy D(omega) r = rhs with a complex symmetric tridiagonal (N+1)x(N+1)
matrix

    D_00 = mu_0 - m_0 w^2 + gamma_-(1 - e^{i theta_-(w)}) + gamma_0
    D_nn = mu_n - m_n w^2 + gamma_n + gamma_{n-1}          (0 < n < N)
    D_NN = mu_N - m_N w^2 + gamma_+(1 - e^{i theta_+(w)}) + gamma_{N-1}
    D_{n,n+1} = D_{n+1,n} = -gamma_n

(for N = 0 the single entry carries both boundary terms).  Determinants are
evaluated through the leading/trailing minor recurrences

    alpha_i = d_i alpha_{i-1} - gamma_{i-1}^2 alpha_{i-2}
    beta_i  = d_i beta_{i+1}  - gamma_i^2     beta_{i+2}

and the inverse in closed form from the minor products (Usmani's formula).
Dense elimination exists only as a test oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionBranch, INTERIOR, exp_itheta
from .errors import (PivotBreakdownError, SingularFrameError,
                     UnsupportedConfigurationError)

MODE_ANALYTIC = "analytic"
MODE_AT_KAPPA = "at_kappa"   # omega = kappa with e^{i theta(kappa)} := 1
MODE_AT_TOP = "at_a"         # omega = a with e^{i theta(a)} := -1

_SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class TridiagonalFrame:
    """Symbol matrix at one evaluation point, stored as diagonal + couplings.

    ``gamma[i]`` is the positive coupling of bond (i, i+1); the matrix
    off-diagonal entries are ``-gamma[i]``.
    """

    diag: np.ndarray
    gamma: np.ndarray
    omega: complex
    mode: str = MODE_ANALYTIC

    @property
    def size(self):
        return len(self.diag)

    def dense(self):
        n = self.size
        mat = np.zeros((n, n), dtype=self.diag.dtype)
        mat[np.arange(n), np.arange(n)] = self.diag
        if n > 1:
            idx = np.arange(n - 1)
            mat[idx, idx + 1] = -self.gamma
            mat[idx + 1, idx] = -self.gamma
        return mat

    def scale(self):
        """Relative gauge Prod max(1, |d_n|) for singularity thresholds."""
        return float(np.prod(np.maximum(1.0, np.abs(self.diag))))


def assemble_frame(chain, omega=None, mode=MODE_ANALYTIC, side=INTERIOR):
    """Build the symbol matrix of ``chain`` at one evaluation point.

    ``mode="analytic"`` evaluates the branch factors at complex ``omega``
    (``side`` selects interior or a boundary limit for real omega).  The
    substitution modes ``at_kappa``/``at_a`` build the real matrices used by
    the sign tests at the band edges of a uniform bulk; they fix the branch
    factor to +1/-1 and require identical bulk halves.
    """
    N = chain.n_defects
    bm, bp = chain.bulk_minus, chain.bulk_plus

    if mode == MODE_ANALYTIC:
        if omega is None:
            raise ValueError("analytic mode requires omega")
        br_minus = DispersionBranch.from_side(bm)
        br_plus = DispersionBranch.from_side(bp)
        z_minus = exp_itheta(br_minus, omega, side)
        z_plus = exp_itheta(br_plus, omega, side)
        w = complex(omega)
    elif mode in (MODE_AT_KAPPA, MODE_AT_TOP):
        if not chain.is_uniform_bulk:
            raise UnsupportedConfigurationError(
                "substitution modes require identical bulk halves")
        if mode == MODE_AT_KAPPA:
            w = bm.kappa
            z_minus = z_plus = 1.0
        else:
            w = bm.band_top
            z_minus = z_plus = -1.0
        if omega is not None and not math.isclose(abs(omega), abs(w), rel_tol=1e-12):
            raise ValueError(f"mode {mode} evaluates at omega = {w}, got {omega}")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    w2 = w * w
    diag = np.empty(N + 1, dtype=complex)
    gamma = np.array([chain.bond_coupling(n) for n in range(N)], dtype=float)

    boundary_minus = bm.coupling * (1.0 - z_minus)
    boundary_plus = bp.coupling * (1.0 - z_plus)
    if N == 0:
        diag[0] = (chain.defect_pinning[0] - chain.defect_mass[0] * w2
                   + boundary_minus + boundary_plus)
    else:
        diag[0] = (chain.defect_pinning[0] - chain.defect_mass[0] * w2
                   + boundary_minus + chain.defect_coupling[0])
        for n in range(1, N):
            diag[n] = (chain.defect_pinning[n] - chain.defect_mass[n] * w2
                       + chain.defect_coupling[n] + chain.defect_coupling[n - 1])
        diag[N] = (chain.defect_pinning[N] - chain.defect_mass[N] * w2
                   + boundary_plus + chain.defect_coupling[N - 1])

    if np.max(np.abs(diag.imag)) == 0.0:
        diag = diag.real.astype(complex)
    return TridiagonalFrame(diag=diag, gamma=gamma, omega=complex(w), mode=mode)


# ---------------------------------------------------------------------------
# minor ladders


def leading_minors(frame):
    """alpha_0..alpha_N (alpha_N = det), via the three-term recurrence."""
    d, g = frame.diag, frame.gamma
    alpha = np.empty(frame.size, dtype=complex)
    prev2, prev1 = 0.0, 1.0      # alpha_{-2}, alpha_{-1}
    for i in range(frame.size):
        g2 = g[i - 1] ** 2 if i >= 1 else 0.0
        alpha[i] = d[i] * prev1 - g2 * prev2
        prev2, prev1 = prev1, alpha[i]
    return alpha


def trailing_minors(frame):
    """beta_0..beta_N (beta_0 = det), recursing from the lower-right corner."""
    d, g = frame.diag, frame.gamma
    n = frame.size
    beta = np.empty(n, dtype=complex)
    next2, next1 = 0.0, 1.0      # beta_{N+2}, beta_{N+1}
    for i in range(n - 1, -1, -1):
        g2 = g[i] ** 2 if i <= n - 2 else 0.0
        beta[i] = d[i] * next1 - g2 * next2
        next2, next1 = next1, beta[i]
    return beta


def frame_det(frame):
    """(det, scale) with det from the leading-minor ladder."""
    return complex(leading_minors(frame)[-1]), frame.scale()


def pivots(frame):
    """Forward pivots c_n and backward pivots e_n of the LDL sweeps.

    c_0 = d_0, c_n = d_n - gamma_{n-1}^2 / c_{n-1};
    e_N = d_N, e_n = d_n - gamma_n^2 / e_{n+1}.
    Products of either sequence reproduce the determinant.  A vanishing pivot
    raises :class:`PivotBreakdownError` naming the index (the determinant is
    still reachable through the minor recurrences).
    """
    d, g = frame.diag, frame.gamma
    n = frame.size
    c = np.empty(n, dtype=complex)
    for i in range(n):
        c[i] = d[i] if i == 0 else d[i] - g[i - 1] ** 2 / c[i - 1]
        if abs(c[i]) < 1e-13 * max(1.0, abs(d[i])):
            raise PivotBreakdownError(i, "forward")
    e = np.empty(n, dtype=complex)
    for i in range(n - 1, -1, -1):
        e[i] = d[i] if i == n - 1 else d[i] - g[i] ** 2 / e[i + 1]
        if abs(e[i]) < 1e-13 * max(1.0, abs(d[i])):
            raise PivotBreakdownError(i, "backward")
    return c, e


@dataclass(frozen=True)
class MinorLadder:
    alpha: np.ndarray
    beta: np.ndarray
    c: np.ndarray
    e: np.ndarray


def minor_ladder(frame):
    return MinorLadder(leading_minors(frame), trailing_minors(frame), *pivots(frame))


def inner_minor(frame, j, k):
    """Determinant of the interior block with rows/columns j..k (1-based defect
    indices, 1 <= j <= k <= N-1).

    Interior diagonal entries carry no branch factor, so the block is real
    for real omega.  The degenerate conventions Delta_{j-1}^j = 1 and
    Delta_{j-2}^j = 0 of the recurrences are honored for k = j-1, j-2.
    """
    N = frame.size - 1
    if N < 2:
        raise ValueError("inner minors require N >= 2")
    if not (1 <= j <= N - 1):
        raise ValueError(f"j = {j} out of range 1..{N - 1}")
    if k == j - 1:
        return 1.0 + 0.0j
    if k == j - 2:
        return 0.0 + 0.0j
    if not (j <= k <= N - 1):
        raise ValueError(f"k = {k} out of range {j - 1}..{N - 1}")
    d, g = frame.diag, frame.gamma
    prev2, prev1 = 0.0, 1.0
    val = 1.0
    for i in range(j, k + 1):
        g2 = g[i - 1] ** 2 if i > j else 0.0
        val = d[i] * prev1 - g2 * prev2
        prev2, prev1 = prev1, val
    return complex(val)


def invert_usmani(frame):
    """Closed-form inverse from the minor ladders.

    N_ij = gamma_j ... gamma_{i-1} alpha_{j-1} beta_{i+1} / alpha_N for
    j < i, with the diagonal alpha_{i-1} beta_{i+1} / alpha_N; symmetric by
    construction.  Raises :class:`SingularFrameError` when |det| falls below
    1e-12 times the frame scale.
    """
    n = frame.size
    alpha = leading_minors(frame)
    beta = trailing_minors(frame)
    det = alpha[-1]
    scale = frame.scale()
    if abs(det) < _SINGULAR_RTOL * max(1.0, scale):
        raise SingularFrameError(det, scale, frame.omega)

    def al(i):
        return alpha[i] if i >= 0 else 1.0

    def be(i):
        return beta[i] if i <= n - 1 else 1.0

    inv = np.empty((n, n), dtype=complex)
    g = frame.gamma
    for i in range(n):
        inv[i, i] = al(i - 1) * be(i + 1) / det
        prod = 1.0
        for j in range(i - 1, -1, -1):
            prod *= g[j]
            inv[i, j] = prod * al(j - 1) * be(i + 1) / det
            inv[j, i] = inv[i, j]
    return inv


# ---------------------------------------------------------------------------
# vectorized ladders over evaluation-point arrays (quadrature support)


def boundary_diagonals(chain, omega, side):
    """Diagonals of the boundary frames over an array of real omega.

    Returns ``(diag, gamma)`` with ``diag`` of shape (N+1, len(omega)).
    """
    omega = np.asarray(omega, dtype=float)
    N = chain.n_defects
    bm, bp = chain.bulk_minus, chain.bulk_plus
    z_minus = exp_itheta(DispersionBranch.from_side(bm), omega, side)
    z_plus = exp_itheta(DispersionBranch.from_side(bp), omega, side)
    w2 = omega.astype(complex) ** 2

    diag = np.empty((N + 1, len(omega)), dtype=complex)
    if N == 0:
        diag[0] = (chain.defect_pinning[0] - chain.defect_mass[0] * w2
                   + bm.coupling * (1.0 - z_minus) + bp.coupling * (1.0 - z_plus))
    else:
        diag[0] = (chain.defect_pinning[0] - chain.defect_mass[0] * w2
                   + bm.coupling * (1.0 - z_minus) + chain.defect_coupling[0])
        for n in range(1, N):
            diag[n] = (chain.defect_pinning[n] - chain.defect_mass[n] * w2
                       + chain.defect_coupling[n] + chain.defect_coupling[n - 1])
        diag[N] = (chain.defect_pinning[N] - chain.defect_mass[N] * w2
                   + bp.coupling * (1.0 - z_plus) + chain.defect_coupling[N - 1])
    gamma = np.array([chain.bond_coupling(n) for n in range(N)], dtype=float)
    return diag, gamma


def ladder_inverse_entries(diag, gamma):
    """All entries of the Usmani inverse over an evaluation-point array.

    ``diag`` has shape (N+1, M); returns shape (N+1, N+1, M).
    """
    n, m = diag.shape
    alpha = np.empty((n + 1, m), dtype=complex)   # alpha[-1] stored at index 0
    alpha[0] = 1.0
    prev2 = np.zeros(m, dtype=complex)
    for i in range(n):
        g2 = gamma[i - 1] ** 2 if i >= 1 else 0.0
        alpha[i + 1] = diag[i] * alpha[i] - g2 * prev2
        prev2 = alpha[i]
    beta = np.empty((n + 1, m), dtype=complex)    # beta[N+1] stored at index n
    beta[n] = 1.0
    next2 = np.zeros(m, dtype=complex)
    for i in range(n - 1, -1, -1):
        g2 = gamma[i] ** 2 if i <= n - 2 else 0.0
        beta[i] = diag[i] * beta[i + 1] - g2 * next2
        next2 = beta[i + 1]
    det = alpha[n]

    inv = np.empty((n, n, m), dtype=complex)
    for i in range(n):
        inv[i, i] = alpha[i] * beta[i + 1] / det
        prod = 1.0
        for j in range(i - 1, -1, -1):
            prod *= gamma[j]
            inv[i, j] = prod * alpha[j] * beta[i + 1] / det
            inv[j, i] = inv[i, j]
    return inv
