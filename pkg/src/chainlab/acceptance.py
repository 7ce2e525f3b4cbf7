"""The acceptance battery: every gate criterion as a callable check.

Each criterion returns a :class:`CriterionResult` with a pass flag and the
measured quantities; ``run_battery`` executes them in order and prints one
line per criterion.  The same functions back ``tests/test_acceptance.py``
and the ``chainlab reproduce`` subcommand.

Shared full-horizon simulations (T = 400, unit momentum impulse at site 0,
default time step) are cached per bundled chain so the energy, decay and
resonance criteria reuse a single run.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import BUNDLED_CHAINS, bundled_chain
from .chain import SideParams, state_from_dict
from .classify import KIND_C, KIND_C0, classify, classify_n0
from .decay import fit_decay, resonance_witness
from .dispersion import (DispersionBranch, EDGE_KAPPA, EDGE_TOP, EDGE_ZERO,
                         PLUS_I0, dispersion_residual, edge_series,
                         exp_itheta, theta_branch)
from .jacobi import (MODE_AT_KAPPA, MODE_AT_TOP, assemble_frame, frame_det,
                     inner_minor, invert_usmani, leading_minors, pivots,
                     trailing_minors)
from .propagator import gamma_kernel, kernel_N
from .simulate import boundary_feeds, defect_response, evolve

HORIZON = 400.0
FIT_ALPHA = -2.0   # site weight <n>^{-4}, i.e. ||.||_{-alpha} with alpha = 2


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    runtime: float
    details: dict = field(default_factory=dict)

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"[{mark}] criterion {self.cid}: {self.name} ({self.runtime:.1f}s) {parts}"


class Battery:
    """Shared state (cached simulations) across the criteria."""

    def __init__(self):
        self._trajectories = {}

    def trajectory(self, name):
        if name not in self._trajectories:
            chain = bundled_chain(name)
            y0 = state_from_dict({0: (0.0, 1.0)})
            self._trajectories[name] = evolve(chain, y0, HORIZON,
                                              sample_dt=0.1, alphas=(FIT_ALPHA,))
        return self._trajectories[name]


def _fmt(x):
    return f"{x:.3g}" if isinstance(x, float) else x


# ---------------------------------------------------------------------------


def _random_chain_spec(rng, n_defects, uniform=False, unit_masses=False,
                       unpinned_bulk=False):
    from .chain import build_chain

    def side():
        return {"mass": 1.0 if unit_masses else float(rng.uniform(0.5, 2.0)),
                "coupling": float(rng.uniform(0.4, 2.0)),
                "pinning": 0.0 if unpinned_bulk
                else float(rng.choice([0.0, rng.uniform(0.1, 2.0)]))}

    minus = side()
    plus = dict(minus) if uniform else side()
    return build_chain({
        "bulk_minus": minus,
        "bulk_plus": plus,
        "defect_mass": [1.0 if unit_masses else float(rng.uniform(0.3, 3.0))
                        for _ in range(n_defects + 1)],
        "defect_pinning": [float(rng.choice([0.0, rng.uniform(0.1, 3.0)]))
                           for _ in range(n_defects + 1)],
        "defect_coupling": [float(rng.uniform(0.4, 2.5))
                            for _ in range(n_defects)],
    })


def criterion_1_jacobi_exactness(batt):
    """Minor ladders, pivots, inner minors and the closed-form inverse agree
    with dense linear algebra on 500 random complex frames."""
    rng = np.random.default_rng(12345)
    worst = {"det": 0.0, "pivots": 0.0, "inverse": 0.0, "inner": 0.0,
             "identity": 0.0}
    for _ in range(500):
        n_def = int(rng.integers(0, 9))
        chain = _random_chain_spec(rng, n_def)
        w = complex(rng.uniform(-4, 4), rng.uniform(0.05, 3.0))
        fr = assemble_frame(chain, w)
        dense = fr.dense()
        det_dense = np.linalg.det(dense)
        alpha = leading_minors(fr)
        beta = trailing_minors(fr)
        worst["det"] = max(worst["det"],
                           abs(alpha[-1] - det_dense) / abs(det_dense),
                           abs(beta[0] - det_dense) / abs(det_dense))
        c, e = pivots(fr)
        worst["pivots"] = max(worst["pivots"],
                              abs(np.prod(c) - det_dense) / abs(det_dense),
                              abs(np.prod(e) - det_dense) / abs(det_dense))
        inv = invert_usmani(fr)
        inv_dense = np.linalg.inv(dense)
        scale_inv = np.max(np.abs(inv_dense))
        worst["inverse"] = max(worst["inverse"],
                               float(np.max(np.abs(inv - inv_dense))) / scale_inv)
        if n_def >= 3:
            N = n_def
            for j, k in ((1, N - 1), (2, N - 1), (1, N - 2)):
                sub = np.linalg.det(dense[j:k + 1, j:k + 1])
                val = inner_minor(fr, j, k)
                worst["inner"] = max(worst["inner"],
                                     abs(val - sub) / max(1.0, abs(sub)))
            t1 = inner_minor(fr, 2, N - 1) * inner_minor(fr, 1, N - 2)
            t2 = inner_minor(fr, 2, N - 2) * inner_minor(fr, 1, N - 1)
            rhs = complex(np.prod(fr.gamma[1:N - 1] ** 2))
            gauge = max(abs(t1), abs(t2), abs(rhs))
            worst["identity"] = max(worst["identity"],
                                    abs((t1 - t2) - rhs) / gauge)
    passed = all(v <= 1e-11 for v in worst.values())
    return passed, {k: _fmt(v) for k, v in worst.items()}


def criterion_2_branch_correctness(batt):
    """Dispersion residual, branch positivity, boundary sign rule and edge
    expansions on a 10^4-point grid."""
    branches = [DispersionBranch(1.0, 0.0), DispersionBranch(1.0, 1.0),
                DispersionBranch(0.7, 0.3), DispersionBranch(1.4, 2.2)]
    rng = np.random.default_rng(7)
    max_resid = 0.0
    min_imag = math.inf
    sign_ok = True
    for br in branches:
        pts = []
        while len(pts) < 2500:
            w = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            if abs(w.imag) < 5e-2 and br.kappa - 0.1 <= abs(w.real) <= br.band_top + 0.1:
                continue
            if abs(w.imag) < 1e-2:
                continue
            pts.append(w)
        pts = np.array(pts)
        th = np.asarray(theta_branch(br, pts))
        max_resid = max(max_resid, float(np.max(dispersion_residual(br, pts, th))))
        min_imag = min(min_imag, float(np.min(th.imag)))
        band = np.linspace(br.kappa + 1e-9 + 1e-3, br.band_top - 1e-3, 200)
        for sgn in (1.0, -1.0):
            thb = np.asarray(theta_branch(br, sgn * band, PLUS_I0))
            sign_ok = sign_ok and bool(np.all(np.sign(np.sin(thb.real)) == sgn))
    edge_err = 0.0
    for br in branches:
        edges = [EDGE_KAPPA, EDGE_TOP] if br.kappa > 0 else [EDGE_ZERO, EDGE_TOP]
        for edge in edges:
            ser = edge_series(br, edge)
            w0 = ser.edge_value
            omega = (w0 if w0 else 0.0) + 1e-4 * (1.0 + 1.0j)
            exact = exp_itheta(br, omega)
            edge_err = max(edge_err, abs(ser.evaluate(omega) - exact) / abs(exact))
    passed = (max_resid < 1e-12 and min_imag > 0.0 and sign_ok
              and edge_err < 1e-5)
    return passed, {"max_residual": _fmt(max_resid), "min_im_theta": _fmt(min_imag),
                    "sign_rule": sign_ok, "edge_series_rel": _fmt(edge_err)}


def criterion_3_upper_half_nonvanishing(batt):
    """min |det D| over an upper-half-plane grid is strictly positive for
    every bundled chain."""
    worst = math.inf
    for name in BUNDLED_CHAINS:
        chain = bundled_chain(name)
        a = chain.band_top_max
        for y in np.geomspace(1e-2, 10.0, 13):
            for x in np.linspace(-2 * a, 2 * a, 25):
                det, scale = frame_det(assemble_frame(chain, complex(x, y)))
                worst = min(worst, abs(det))
    return worst > 0.0, {"min_abs_det": _fmt(worst)}


def criterion_4_classifier_equivalences(batt):
    """Minor-ladder/eigenvalue/grid formulations agree; specialized N = 0
    criteria agree with the general test; necessary mass bounds hold."""
    rng = np.random.default_rng(2024)
    mismatches = 0
    mass_ok = True
    c_seen = 0
    for _ in range(200):
        n_def = int(rng.integers(1, 6))
        chain = _random_chain_spec(rng, n_def, uniform=True)
        a_frame = assemble_frame(chain, mode=MODE_AT_TOP)
        a2 = bool(np.max(np.linalg.eigvalsh(a_frame.dense().real)) <= 0.0)
        a = chain.bulk_minus.band_top
        a3 = True
        for w in np.linspace(a + 1e-9, 2 * a + 1.0, 80):
            alpha = leading_minors(assemble_frame(chain, w, side=PLUS_I0)).real
            if np.any(alpha * (-1.0) ** np.arange(len(alpha)) >= 0.0):
                a3 = False
                break
        alpha_e = leading_minors(a_frame).real
        n = len(alpha_e) - 1
        a6 = bool(np.all(alpha_e[:-1] * (-1.0) ** np.arange(n) < 0.0)
                  and alpha_e[-1] * (-1.0) ** n <= 0.0)
        if not (a2 == a3 == a6):
            mismatches += 1
        if chain.bulk_minus.kappa > 0.0:
            k_frame = assemble_frame(chain, mode=MODE_AT_KAPPA)
            b2 = bool(np.min(np.linalg.eigvalsh(k_frame.dense().real)) >= 0.0)
            b3 = True
            for w in np.linspace(0.0, chain.bulk_minus.kappa - 1e-9, 80):
                alpha = leading_minors(assemble_frame(chain, w, side=PLUS_I0)).real
                if np.any(alpha <= 0.0):
                    b3 = False
                    break
            alpha_k = leading_minors(k_frame).real
            b6 = bool(np.all(alpha_k[:-1] > 0.0) and alpha_k[-1] >= 0.0)
            if not (b2 == b3 == b6):
                mismatches += 1
        verdict = classify(chain)
        if verdict.kind in (KIND_C, KIND_C0):
            c_seen += 1
            m = chain.bulk_minus.mass
            mass_ok = mass_ok and (chain.defect_mass[0] > 0.5 * m
                                   and chain.defect_mass[-1] > 0.5 * m)

    specialized = 0
    for _ in range(170):
        specialized += 1
        classify_n0(_random_chain_spec(rng, 0, uniform=True))       # P1
    for _ in range(170):
        specialized += 1
        classify_n0(_random_chain_spec(rng, 0, unit_masses=True))   # P2
    for _ in range(160):
        specialized += 1
        classify_n0(_random_chain_spec(rng, 0, unpinned_bulk=True)) # P3
    passed = mismatches == 0 and mass_ok and c_seen > 0
    return passed, {"ladder_mismatches": mismatches,
                    "specialized_checked": specialized,
                    "mass_bounds": mass_ok, "definite_cases": c_seen}


def criterion_5_energy_conservation(batt):
    """Every bundled simulation conserves energy to relative 1e-8 over T=400."""
    worst = 0.0
    worst_name = ""
    for name in BUNDLED_CHAINS:
        traj = batt.trajectory(name)
        drift = float(np.max(np.abs(traj.energy - traj.energy[0])) / traj.energy[0])
        if drift > worst:
            worst, worst_name = drift, name
    return worst < 1e-8, {"max_rel_drift": _fmt(worst), "worst_chain": worst_name}


def criterion_6_condition_c_decay(batt):
    """Condition C: weighted-norm and kernel envelopes decay like t^{-3/2}."""
    details = {}
    ok = True
    for name in ("p1_condition_c", "p2_condition_c"):
        chain = bundled_chain(name)
        traj = batt.trajectory(name)
        fit = fit_decay(traj.t, traj.norms[FIT_ALPHA], window=(40.0, HORIZON),
                        bin_width=math.pi / chain.band_top_max)
        details[f"norm_slope[{name}]"] = _fmt(fit.slope)
        ok = ok and -1.7 < fit.slope < -1.3
        verdict = classify(chain)
        t = np.linspace(0.25, HORIZON, 6400)
        ker = kernel_N(chain, verdict, t, orders=(0,))
        kfit = fit_decay(t, np.abs(ker.entry(0, 0, 0)), window=(20.0, HORIZON),
                         bin_width=math.pi / chain.band_top_max)
        details[f"kernel_slope[{name}]"] = _fmt(kfit.slope)
        ok = ok and -1.7 < kfit.slope < -1.3
    return ok, details


def criterion_7_condition_c0_decay(batt):
    """Condition C0: weighted norm decays like t^{-1/2}."""
    chain = bundled_chain("p1_c0_ii")
    traj = batt.trajectory("p1_c0_ii")
    fit = fit_decay(traj.t, traj.norms[FIT_ALPHA], window=(40.0, HORIZON),
                    bin_width=math.pi / chain.band_top_max)
    return -0.65 < fit.slope < -0.35, {"norm_slope": _fmt(fit.slope)}


def criterion_8_halfline_bound(batt):
    """(1+t)^{3/2} |Gamma_1(t)| carries no increasing trend on [20, 200]."""
    side = SideParams(mass=1.0, coupling=1.0, pinning=0.0)
    t = np.linspace(20.0, 200.0, 2400)
    g = gamma_kernel(side, 1, t)
    weighted = np.abs(g.values) * (1.0 + t) ** 1.5
    split = math.sqrt(20.0 * 200.0)
    first = float(np.max(weighted[t <= split]))
    last = float(np.max(weighted[t >= split]))
    return last <= 1.2 * first, {"first_half_max": _fmt(first),
                                 "last_half_max": _fmt(last),
                                 "ratio": _fmt(last / first)}


def criterion_9_resonance_limits(batt):
    """Zero-mode displacement limits and the periodic real-zero witness."""
    details = {}
    ok = True
    for name in ("r1_zero_mode", "r1_zero_mode_n1"):
        traj = batt.trajectory(name)
        idx = int(np.argmin(np.abs(traj.t - 200.0)))
        u200 = float(traj.defect_u[0, idx])
        rel = abs(u200 / 0.5 - 1.0)
        details[f"u0_at_200[{name}]"] = _fmt(u200)
        ok = ok and rel <= 0.05
    chain = bundled_chain("r2_real_zero")
    verdict = classify(chain)
    rep = resonance_witness(chain, verdict, horizon=HORIZON)
    resid_rel = rep.prediction["pde_residual"] / max(1.0, rep.prediction["profile_norm"])
    details["witness_pde_residual"] = _fmt(rep.prediction["pde_residual"])
    details["witness_slope"] = _fmt(rep.verification["envelope_slope"])
    ok = ok and resid_rel < 1e-8 and abs(rep.verification["envelope_slope"]) < 0.05
    return ok, details


def criterion_10_cross_representation(batt):
    """Kernel-formula block response matches the simulation to 1e-4."""
    details = {}
    ok = True
    for name in ("p1_condition_c", "p1_c0_ii", "r1_zero_mode"):
        chain = bundled_chain(name)
        verdict = classify(chain)
        y0 = state_from_dict({-2: (0.3, 0.0), 0: (0.1, 1.0), 1: (-0.2, 0.2)},
                             n_lo=-2, n_hi=max(1, chain.n_defects))
        traj = evolve(chain, y0, 80.0, dt=2.5e-4, sample_dt=5e-3)
        kernels = kernel_N(chain, verdict, traj.t, orders=(0, 1))
        fm, fp = boundary_feeds(chain, y0, traj.t)
        r = defect_response(chain, y0, kernels, fm, fp)
        err = float(np.max(np.abs(r - traj.defect_u)))
        details[f"max_err[{name}]"] = _fmt(err)
        ok = ok and err < 1e-4
    return ok, details


CRITERIA = (
    (1, "jacobi algebra exactness", criterion_1_jacobi_exactness),
    (2, "dispersion branch correctness", criterion_2_branch_correctness),
    (3, "upper-half-plane nonvanishing", criterion_3_upper_half_nonvanishing),
    (4, "classifier equivalences", criterion_4_classifier_equivalences),
    (5, "energy conservation", criterion_5_energy_conservation),
    (6, "condition C decay (beta = 3)", criterion_6_condition_c_decay),
    (7, "condition C0 decay (beta = 1)", criterion_7_condition_c0_decay),
    (8, "half-line kernel bound", criterion_8_halfline_bound),
    (9, "resonance limits", criterion_9_resonance_limits),
    (10, "cross-representation consistency", criterion_10_cross_representation),
)


def run_criterion(cid, batt=None):
    batt = batt or Battery()
    for k, name, fn in CRITERIA:
        if k == cid:
            start = time.perf_counter()
            passed, details = fn(batt)
            return CriterionResult(cid=k, name=name, passed=passed,
                                   runtime=time.perf_counter() - start,
                                   details=details)
    raise ValueError(f"no criterion {cid}")


def run_battery(printer=print):
    batt = Battery()
    results = []
    for cid, name, fn in CRITERIA:
        res = run_criterion(cid, batt)
        results.append(res)
        if printer is not None:
            printer(res.line())
    return results
