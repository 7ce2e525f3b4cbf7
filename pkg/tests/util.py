"""Shared chain builders for the test suite."""

from chainlab.chain import build_chain


def make_chain(m_minus=1.0, g_minus=1.0, mu_minus=0.0,
               m_plus=None, g_plus=None, mu_plus=None,
               defect_mass=(1.0,), defect_pinning=(0.0,), defect_coupling=(),
               label=""):
    spec = {
        "bulk_minus": {"mass": m_minus, "coupling": g_minus, "pinning": mu_minus},
        "bulk_plus": {"mass": m_minus if m_plus is None else m_plus,
                      "coupling": g_minus if g_plus is None else g_plus,
                      "pinning": mu_minus if mu_plus is None else mu_plus},
        "defect_mass": list(defect_mass),
        "defect_pinning": list(defect_pinning),
        "defect_coupling": list(defect_coupling),
    }
    return build_chain(spec, label=label)


def uniform_chain(m=1.0, gamma=1.0, mu=0.0, defect_mass=(1.0,),
                  defect_pinning=(0.0,), defect_coupling=(), label=""):
    return make_chain(m_minus=m, g_minus=gamma, mu_minus=mu,
                      defect_mass=defect_mass, defect_pinning=defect_pinning,
                      defect_coupling=defect_coupling, label=label)


def random_uniform_chain(rng, n_defects, pinned_bulk=None):
    if pinned_bulk is None:
        pinned_bulk = bool(rng.integers(0, 2))
    mu = float(rng.uniform(0.2, 1.5)) if pinned_bulk else 0.0
    return uniform_chain(
        m=float(rng.uniform(0.5, 2.0)),
        gamma=float(rng.uniform(0.5, 2.0)),
        mu=mu,
        defect_mass=[float(rng.uniform(0.3, 3.0)) for _ in range(n_defects + 1)],
        defect_pinning=[float(rng.choice([0.0, rng.uniform(0.1, 3.0)]))
                        for _ in range(n_defects + 1)],
        defect_coupling=[float(rng.uniform(0.4, 2.5)) for _ in range(n_defects)],
    )
