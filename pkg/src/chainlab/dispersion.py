"""Dispersion relation of a homogeneous half and its inverse branch.

For one bulk side with constants (nu, kappa) the plane-wave frequency is
phi(theta) = sqrt(nu^2 (2 - 2 cos theta) + kappa^2), with propagation band
[kappa, a], a = sqrt(kappa^2 + 4 nu^2).  The inverse branch theta(omega) is
the unique solution of

    nu^2 (2 - 2 cos theta) + kappa^2 = omega^2

with Im theta > 0 and Re theta in (-pi, pi], analytic off the two-sided cut
Lambda = [-a, -kappa] u [kappa, a].

Everything is implemented on z = exp(i theta), which solves

    z^2 - (2 + (kappa^2 - omega^2)/nu^2) z + 1 = 0.

The two roots multiply to one, so off the cut exactly one satisfies |z| < 1
and it is the branch value; on the cut both roots sit on the unit circle and
the boundary value omega +/- i0 is fixed by sign(sin theta(omega + i0)) =
sign(omega).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import OnCutError

# interior points whose small root lands this close to the unit circle are
# indistinguishable from cut points in double precision
_CUT_BAND = 1e-13

PLUS_I0 = "plus_i0"
MINUS_I0 = "minus_i0"
INTERIOR = "interior"


@dataclass(frozen=True)
class DispersionBranch:
    nu: float
    kappa: float

    @property
    def band_top(self):
        return math.sqrt(self.kappa ** 2 + 4.0 * self.nu ** 2)

    @classmethod
    def from_side(cls, side):
        return cls(nu=side.nu, kappa=side.kappa)

    def on_cut(self, omega, tol=0.0):
        """True for real omega inside the closed band [kappa, a] (either sign)."""
        a = abs(omega)
        return self.kappa - tol <= a <= self.band_top + tol

    def phi(self, theta):
        """Plane-wave frequency; range [kappa, band_top] for real theta."""
        theta = np.asarray(theta, dtype=float)
        val = np.sqrt(self.nu ** 2 * (2.0 - 2.0 * np.cos(theta)) + self.kappa ** 2)
        return val if val.ndim else float(val)


def _small_root_interior(branch, omega):
    """Root with |z| < 1 of the quadratic, vectorized over complex omega."""
    omega = np.asarray(omega, dtype=complex)
    s = 2.0 + (branch.kappa ** 2 - omega ** 2) / branch.nu ** 2
    sq = np.sqrt(s * s - 4.0)
    # pick the square root lying in the same half plane as s, so s + sq is
    # the larger-magnitude root and never suffers cancellation
    flip = (s.real * sq.real + s.imag * sq.imag) < 0.0
    sq = np.where(flip, -sq, sq)
    big = 0.5 * (s + sq)
    z = 1.0 / big
    # canonicalize a signed-zero imaginary part so negative real roots map to
    # Re theta = +pi (the principal strip is (-pi, pi])
    z = np.where(z.imag == 0.0, z.real + 0.0j, z)
    return z


def exp_itheta(branch, omega, side=INTERIOR):
    """exp(i theta(omega)) for the requested branch side.

    ``side="interior"`` accepts complex omega off the cut and raises
    :class:`OnCutError` when the point is numerically on it.  The boundary
    sides accept real omega and return the limit from above/below; at the
    band edges they return the substitution values +1 (at kappa) and -1
    (at the band top).
    """
    if side == INTERIOR:
        z = _small_root_interior(branch, omega)
        bad = np.abs(1.0 - np.abs(z)) < _CUT_BAND
        if np.any(bad):
            raise OnCutError(
                "omega lies on the spectral cut; request side 'plus_i0' or "
                "'minus_i0' for the boundary value")
        return z if z.ndim else complex(z)
    if side not in (PLUS_I0, MINUS_I0):
        raise ValueError(f"unknown side {side!r}")

    omega = np.asarray(omega, dtype=float)
    nu2 = branch.nu ** 2
    q = (omega ** 2 - branch.kappa ** 2) / (2.0 * nu2)   # = 1 - cos(theta) on the band
    z = np.empty(omega.shape, dtype=complex)

    inside = (np.abs(omega) >= branch.kappa) & (np.abs(omega) <= branch.band_top)
    # on the band: |z| = 1, cos = 1 - q, sin fixed by the sign rule
    c = 1.0 - q[inside]
    sin2 = q[inside] * (2.0 - q[inside])
    s = np.sqrt(np.maximum(sin2, 0.0))
    sgn = np.sign(omega[inside])
    sgn = np.where(sgn == 0.0, 1.0, sgn)
    if side == MINUS_I0:
        sgn = -sgn
    z[inside] = c + 1j * sgn * s

    # off the band the limit is real; reuse the interior root
    if np.any(~inside):
        z[~inside] = _small_root_interior(branch, omega[~inside].astype(complex))
    return z if z.ndim else complex(z)


def theta_branch(branch, omega, side=INTERIOR):
    """theta(omega) with Im theta > 0 (interior) and Re theta in (-pi, pi]."""
    z = exp_itheta(branch, omega, side)
    z = np.asarray(z, dtype=complex)
    th = -1j * np.log(z)
    th = np.where(th.real <= -math.pi, th + 2.0 * math.pi, th)
    return th if th.ndim else complex(th)


def dispersion_residual(branch, omega, theta):
    """|nu^2 (2 - 2 cos theta) + kappa^2 - omega^2| for contract checks."""
    omega = np.asarray(omega, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    res = np.abs(branch.nu ** 2 * (2.0 - 2.0 * np.cos(theta))
                 + branch.kappa ** 2 - omega ** 2)
    return res if res.ndim else float(res)


# ---------------------------------------------------------------------------
# band-edge (Puiseux) expansions of exp(i theta(omega))

EDGE_KAPPA = "kappa"
EDGE_TOP = "a"
EDGE_ZERO = "zero"


@dataclass(frozen=True)
class EdgeSeries:
    """First terms of exp(i theta) in the local edge variable w.

    ``coefficients[k]`` multiplies w^k, where w is sqrt(omega^2 - kappa^2)
    near the lower edge, sqrt(a^2 - omega^2) near the band top, and omega
    itself at the acoustic edge (kappa = 0).  The branch of the square root
    follows sign(Re w) = sign(Re omega) for omega in the upper half plane.
    """

    edge: str
    edge_value: float
    coefficients: tuple

    def local_variable(self, omega):
        omega = np.asarray(omega, dtype=complex)
        if self.edge == EDGE_ZERO:
            w = omega
        elif self.edge == EDGE_KAPPA:
            w = np.sqrt(omega ** 2 - self.edge_value ** 2)
        else:
            w = np.sqrt(self.edge_value ** 2 - omega ** 2)
        flip = np.sign(w.real) * np.sign(omega.real) < 0.0
        w = np.where(flip, -w, w)
        return w if w.ndim else complex(w)

    def evaluate(self, omega):
        w = np.asarray(self.local_variable(omega), dtype=complex)
        acc = np.zeros_like(w)
        for k, ck in enumerate(self.coefficients):
            acc = acc + ck * w ** k
        return acc if acc.ndim else complex(acc)


def edge_series(branch, edge):
    """3-term expansion of exp(i theta) at a band edge."""
    nu = branch.nu
    if edge == EDGE_KAPPA:
        return EdgeSeries(edge, branch.kappa,
                          (1.0, 1j / nu, -1.0 / (2.0 * nu ** 2)))
    if edge == EDGE_TOP:
        return EdgeSeries(edge, branch.band_top,
                          (-1.0, 1j / nu, 1.0 / (2.0 * nu ** 2)))
    if edge == EDGE_ZERO:
        if branch.kappa != 0.0:
            raise ValueError("edge 'zero' requires kappa = 0")
        return EdgeSeries(edge, 0.0,
                          (1.0, 1j / nu, -1.0 / (2.0 * nu ** 2)))
    raise ValueError(f"unknown edge {edge!r}")


def exp_itheta_at_zero(branch):
    """exp(i theta(0)) for kappa > 0, in closed form.

    Equals 4 (kappa/nu + sqrt(4 + kappa^2/nu^2))^{-2}; reduces to the small
    quadratic root at omega = 0.
    """
    x = branch.kappa / branch.nu
    return 4.0 / (x + math.sqrt(4.0 + x * x)) ** 2
