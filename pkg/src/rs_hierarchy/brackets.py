"""Poisson bracket evaluators on the four charts, the bracket pencil and a
finite-difference Jacobi-identity defect.

All evaluators return the same bracket normalization; the Ruijsenaars-chart
formula is stated in the source with a factor 2 on the left-hand side, which
is absorbed here (pass raw=True to get the unhalved right-hand side).
"""

from __future__ import annotations

import numpy as np

from . import phase
from .algebra import comm, pairing, r_apply, r_bracket, split_ub
from .config import FD_OUTER_STEP_SCALE
from .phase import Observable, grad_full, grad_red, grad_rs, grad_suth


def pb1_full(F: Observable, H: Observable, x, step: float | None = None) -> float:
    """First (cotangent-bundle) bracket on U(n) x Herm(n)."""
    gF = grad_full(F, x, step)
    gH = grad_full(H, x, step)
    return (pairing(gF.D1, gH.d2) - pairing(gH.D1, gF.d2)
            + pairing(x.L, comm(gF.d2, gH.d2)))


def pb2_full(F: Observable, H: Observable, x, step: float | None = None) -> float:
    """Second (Heisenberg-double) bracket on U(n) x Herm(n)."""
    gF = grad_full(F, x, step)
    gH = grad_full(H, x, step)
    LdF = x.L @ gF.d2
    LdH = x.L @ gH.d2
    ginv = x.g.conj().T
    return (pairing(gF.D1, LdH) - pairing(gH.D1, LdF)
            + 2.0 * pairing(LdF, split_ub(LdH)[0])
            - 0.5 * pairing(gF.D1p, ginv @ gH.D1 @ x.g))


def pb1_red(f: Observable, h: Observable, x, step: float | None = None) -> float:
    """Reduced first bracket on T^n_reg x Herm(n)."""
    gf = grad_red(f, x, step)
    gh = grad_red(h, x, step)
    return (pairing(gf.D1, gh.d2) - pairing(gh.D1, gf.d2)
            + pairing(x.L, r_bracket(x.Q, gf.d2, gh.d2)))


def pb2_red(f: Observable, h: Observable, x, step: float | None = None) -> float:
    """Reduced second bracket on T^n_reg x Herm(n)."""
    gf = grad_red(f, x, step)
    gh = grad_red(h, x, step)
    Ldf = x.L @ gf.d2
    Ldh = x.L @ gh.d2
    return (pairing(gf.D1, Ldh) - pairing(gh.D1, Ldf)
            + 2.0 * pairing(Ldf, r_apply(x.Q, Ldh)))


def pb_rs(F: Observable, H: Observable, x, step: float | None = None,
          raw: bool = False) -> float:
    """Second bracket in the Ruijsenaars variables (Q, p, lambda); valid on
    the conjugation-invariant function family."""
    gF = grad_rs(F, x, step)
    gH = grad_rs(H, x, step)
    lam_inv = np.linalg.inv(x.lam)
    rhs = (pairing(gF.DQ, gH.dp) - pairing(gH.DQ, gF.dp)
           + pairing(gF.Dlamp, lam_inv @ gH.Dlam @ x.lam))
    return rhs if raw else 0.5 * rhs


def pb_suth(F: Observable, H: Observable, x, step: float | None = None) -> float:
    """First bracket in the Sutherland variables (Q, p, phi)."""
    gF = grad_suth(F, x, step)
    gH = grad_suth(H, x, step)
    return (pairing(gF.DQ, gH.dp) - pairing(gH.DQ, gF.dp)
            + pairing(x.phi, comm(gF.dphi, gH.dphi)))


def pencil(s: float):
    """Bracket pencil pb1 + s*pb2 on the full chart; every member is Poisson
    by compatibility of the two brackets."""
    def evaluator(F, H, x, step=None):
        return pb1_full(F, H, x, step) + s * pb2_full(F, H, x, step)
    evaluator.__name__ = f"pencil({s})"
    return evaluator


CHART_OF_BRACKET = {
    pb1_full: "full", pb2_full: "full",
    pb1_red: "red", pb2_red: "red",
    pb_rs: "rs", pb_suth: "suth",
}


def _bracket_observable(bracket, F: Observable, H: Observable, chart: str) -> Observable:
    """Pointwise bracket value as a new observable, memoized per point."""
    cache: dict[bytes, float] = {}

    def value(y):
        key = phase.point_key(y)
        if key not in cache:
            cache[key] = bracket(F, H, y)
        return cache[key]

    return Observable(chart, value, name=f"{{{F.name},{H.name}}}")


def jacobi_defect(bracket, F: Observable, G: Observable, H: Observable, x) -> float:
    """Cyclic sum {F,{G,H}} + {G,{H,F}} + {H,{F,G}}.

    Inner brackets are evaluated pointwise as observables; the outer bracket
    differentiates them with a larger step, since their values carry O(h^2)
    finite-difference noise.
    """
    chart = F.chart
    if not (G.chart == chart == H.chart):
        raise ValueError("observables live on different charts")
    h_outer = FD_OUTER_STEP_SCALE * (1.0 + phase.point_norm(x))
    gh = _bracket_observable(bracket, G, H, chart)
    hf = _bracket_observable(bracket, H, F, chart)
    fg = _bracket_observable(bracket, F, G, chart)
    return (bracket(F, gh, x, h_outer)
            + bracket(G, hf, x, h_outer)
            + bracket(H, fg, x, h_outer))
