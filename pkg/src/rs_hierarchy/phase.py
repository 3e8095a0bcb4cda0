"""Chart point types, observables and the directional-derivative engine.

Four charts are in play: the unreduced phase space U(n) x Herm(n) ("full"),
the reduced chart T^n_reg x Herm(n) ("red"), the Ruijsenaars chart
(Q, p, lambda) ("rs") and the Sutherland chart (Q, p, phi) ("suth").
Each chart has its own derivative signature, obtained by pairing directional
derivatives along a basis of displacement directions with the dual basis
under <X,Y> = Im tr(XY).

Group-valued displacements use exact one-parameter subgroups: the standard
u(n) generators exponentiate in closed form (plane rotations / single
phases), and strictly upper generators are nilpotent of order two.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from . import algebra
from .algebra import TorusReg, pairing
from .config import FD_STEP_SCALE, REGULARITY_GAP

CHARTS = ("full", "red", "rs", "suth")


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class FullPoint:
    """Point (g, L) of the unreduced phase space U(n) x Herm(n)."""
    g: np.ndarray
    L: np.ndarray

    @property
    def n(self) -> int:
        return self.g.shape[0]


@dataclass(frozen=True)
class RedPoint:
    """Point (Q, L) of the reduced chart T^n_reg x Herm(n)."""
    Q: TorusReg
    L: np.ndarray

    @property
    def n(self) -> int:
        return self.Q.n


@dataclass(frozen=True)
class RSPoint:
    """Point (Q, p, lambda) of the Ruijsenaars chart; lam is unit-diagonal
    upper triangular."""
    Q: TorusReg
    p: np.ndarray
    lam: np.ndarray

    @property
    def n(self) -> int:
        return self.Q.n


@dataclass(frozen=True)
class SuthPoint:
    """Point (Q, p, phi) of the Sutherland chart; phi is Hermitian with
    exactly zero diagonal."""
    Q: TorusReg
    p: np.ndarray
    phi: np.ndarray

    @property
    def n(self) -> int:
        return self.Q.n


def point_norm(x) -> float:
    if isinstance(x, FullPoint):
        return float(np.sqrt(np.linalg.norm(x.g) ** 2 + np.linalg.norm(x.L) ** 2))
    if isinstance(x, RedPoint):
        return float(np.sqrt(np.linalg.norm(x.Q.q) ** 2 + np.linalg.norm(x.L) ** 2))
    if isinstance(x, RSPoint):
        return float(np.sqrt(np.linalg.norm(x.Q.q) ** 2
                             + np.linalg.norm(x.p) ** 2
                             + np.linalg.norm(x.lam) ** 2))
    if isinstance(x, SuthPoint):
        return float(np.sqrt(np.linalg.norm(x.Q.q) ** 2
                             + np.linalg.norm(x.p) ** 2
                             + np.linalg.norm(x.phi) ** 2))
    raise TypeError(f"not a chart point: {type(x)!r}")


def point_key(x) -> bytes:
    """Stable byte key of a point, used for memoization."""
    if isinstance(x, FullPoint):
        return b"F" + x.g.tobytes() + x.L.tobytes()
    if isinstance(x, RedPoint):
        return b"R" + x.Q.q.tobytes() + x.L.tobytes()
    if isinstance(x, RSPoint):
        return b"S" + x.Q.q.tobytes() + x.p.tobytes() + x.lam.tobytes()
    if isinstance(x, SuthPoint):
        return b"T" + x.Q.q.tobytes() + x.p.tobytes() + x.phi.tobytes()
    raise TypeError(f"not a chart point: {type(x)!r}")


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True)
class Observable:
    """Real-valued function on one chart.

    `grad`, when present, returns the chart's full derivative tuple (same
    shape as the corresponding grad_* result) and is preferred over finite
    differences.
    """
    chart: str
    value: Callable
    grad: Callable | None = None
    name: str = ""

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise ValueError(f"unknown chart {self.chart!r}")

    def __call__(self, x) -> float:
        return float(self.value(x))


def combine(a: float, F: Observable, b: float, H: Observable) -> Observable:
    """Linear combination a*F + b*H on a shared chart (finite differences)."""
    if F.chart != H.chart:
        raise ValueError("observables live on different charts")
    return Observable(F.chart, lambda x: a * F(x) + b * H(x),
                      name=f"{a}*{F.name}+{b}*{H.name}")


def product(F: Observable, H: Observable) -> Observable:
    if F.chart != H.chart:
        raise ValueError("observables live on different charts")
    return Observable(F.chart, lambda x: F(x) * H(x), name=f"{F.name}*{H.name}")


# ---------------------------------------------------------------------------
# displacement directions with exact one-parameter subgroups


class Direction(NamedTuple):
    mat: np.ndarray
    exp: Callable[[float], np.ndarray]


def _diag_phase_exp(n, j):
    def f(t):
        M = np.eye(n, dtype=complex)
        M[j, j] = np.exp(1j * t)
        return M
    return f


def _rotation_exp(n, j, k, X):
    # X^2 = -(E_jj + E_kk) for both off-diagonal u(n) generator types.
    def f(t):
        M = np.eye(n, dtype=complex) + np.sin(t) * X
        c = np.cos(t) - 1.0
        M[j, j] += c
        M[k, k] += c
        return M
    return f


def _nilpotent_exp(n, X):
    def f(t):
        return np.eye(n, dtype=complex) + t * X
    return f


@lru_cache(maxsize=None)
def u_directions(n: int) -> tuple[Direction, ...]:
    """Basis of u(n), each with its exact exponential (same ordering as
    algebra.basis('u', n))."""
    out = []
    for j in range(n):
        X = 1j * algebra._E(n, j, j)
        out.append(Direction(X, _diag_phase_exp(n, j)))
    for j in range(n):
        for k in range(j + 1, n):
            A = algebra._E(n, j, k) - algebra._E(n, k, j)
            out.append(Direction(A, _rotation_exp(n, j, k, A)))
            S = 1j * (algebra._E(n, j, k) + algebra._E(n, k, j))
            out.append(Direction(S, _rotation_exp(n, j, k, S)))
    return tuple(out)


@lru_cache(maxsize=None)
def bplus_directions(n: int) -> tuple[Direction, ...]:
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            for X in (algebra._E(n, j, k), 1j * algebra._E(n, j, k)):
                out.append(Direction(X, _nilpotent_exp(n, X)))
    return tuple(out)


def _dual_stack(space: str, n: int) -> np.ndarray:
    _, duals = algebra.dual_basis(space, n)
    return np.stack(duals)


# ---------------------------------------------------------------------------
# derivative engine


class FullGrad(NamedTuple):
    D1: np.ndarray    # b(n)-valued (left displacement)
    D1p: np.ndarray   # b(n)-valued (right displacement)
    d2: np.ndarray    # u(n)-valued (L displacement)


class RedGrad(NamedTuple):
    D1: np.ndarray    # b(n)_0-valued
    d2: np.ndarray    # u(n)-valued


class RSGrad(NamedTuple):
    DQ: np.ndarray    # b(n)_0-valued
    dp: np.ndarray    # u(n)_0-valued
    Dlam: np.ndarray  # u(n)_perp-valued (left displacement of lambda)
    Dlamp: np.ndarray # u(n)_perp-valued (right displacement of lambda)


class SuthGrad(NamedTuple):
    DQ: np.ndarray
    dp: np.ndarray
    dphi: np.ndarray  # u(n)_perp-valued


def fd_step(x, step: float | None = None) -> float:
    return step if step is not None else FD_STEP_SCALE * (1.0 + point_norm(x))


def _central(values: Callable[[float], float], h: float) -> float:
    return (values(h) - values(-h)) / (2.0 * h)


def _assemble(derivs: np.ndarray, dual_stack: np.ndarray) -> np.ndarray:
    return np.tensordot(derivs, dual_stack, axes=(0, 0))


def grad_full(F: Observable, x: FullPoint, step: float | None = None) -> FullGrad:
    """Derivatives (D1 F, D1' F, d2 F) defined by
    d/dt|0 F(e^{tX} g e^{tX'}, L + tY) = <D1F,X> + <D1'F,X'> + <d2F,Y>."""
    if F.chart != "full":
        raise ValueError("observable is not on the full chart")
    if F.grad is not None:
        return FullGrad(*F.grad(x))
    h = fd_step(x, step)
    n = x.n
    dirs = u_directions(n)
    d1 = np.array([_central(lambda t, D=D: F(FullPoint(D.exp(t) @ x.g, x.L)), h)
                   for D in dirs])
    d1p = np.array([_central(lambda t, D=D: F(FullPoint(x.g @ D.exp(t), x.L)), h)
                    for D in dirs])
    herm = algebra.basis("herm", n)
    d2 = np.array([_central(lambda t, Y=Y: F(FullPoint(x.g, x.L + t * Y)), h)
                   for Y in herm])
    return FullGrad(_assemble(d1, _dual_stack("u", n)),
                    _assemble(d1p, _dual_stack("u", n)),
                    _assemble(d2, _dual_stack("herm", n)))


def grad_red(f: Observable, x: RedPoint, step: float | None = None) -> RedGrad:
    """Derivatives (D1 f, d2 f) defined by
    d/dt|0 f(e^{tX} Q, L + tY) = <D1f,X> + <d2f,Y>, X in u(n)_0."""
    if f.chart != "red":
        raise ValueError("observable is not on the reduced chart")
    if f.grad is not None:
        return RedGrad(*f.grad(x))
    h = fd_step(x, step)
    n = x.n
    # u(n)_0 displacement of Q is a phase shift of the angles.
    e = np.eye(n)
    d1 = np.array([_central(lambda t, j=j: f(RedPoint(x.Q.shifted(t * e[j]), x.L)), h)
                   for j in range(n)])
    herm = algebra.basis("herm", n)
    d2 = np.array([_central(lambda t, Y=Y: f(RedPoint(x.Q, x.L + t * Y)), h)
                   for Y in herm])
    return RedGrad(_assemble(d1, _dual_stack("u0", n)),
                   _assemble(d2, _dual_stack("herm", n)))


def grad_rs(F: Observable, x: RSPoint, step: float | None = None) -> RSGrad:
    """Derivatives (DQ, dp, Dlam, Dlam') defined by
    d/dt|0 F(e^{tX0} Q, p + tY0, e^{tX+} lam e^{tY+})
      = <DQ,X0> + <dp,Y0> + <Dlam,X+> + <Dlam',Y+>."""
    if F.chart != "rs":
        raise ValueError("observable is not on the rs chart")
    if F.grad is not None:
        return RSGrad(*F.grad(x))
    h = fd_step(x, step)
    n = x.n
    e = np.eye(n)
    dq = np.array([_central(lambda t, j=j: F(RSPoint(x.Q.shifted(t * e[j]), x.p, x.lam)), h)
                   for j in range(n)])
    dp = np.array([_central(lambda t, j=j: F(RSPoint(x.Q, x.p + t * e[j], x.lam)), h)
                   for j in range(n)])
    nil = bplus_directions(n)
    dl = np.array([_central(lambda t, D=D: F(RSPoint(x.Q, x.p, D.exp(t) @ x.lam)), h)
                   for D in nil])
    dlp = np.array([_central(lambda t, D=D: F(RSPoint(x.Q, x.p, x.lam @ D.exp(t))), h)
                    for D in nil])
    return RSGrad(_assemble(dq, _dual_stack("u0", n)),
                  _assemble(dp, _dual_stack("b0", n)),
                  _assemble(dl, _dual_stack("bplus", n)),
                  _assemble(dlp, _dual_stack("bplus", n)))


def grad_suth(F: Observable, x: SuthPoint, step: float | None = None) -> SuthGrad:
    """Derivatives (DQ, dp, dphi) defined by
    d/dt|0 F(e^{tX} Q, p + tY0, phi + tYperp)
      = <DQ,X> + <dp,Y0> + <dphi,Yperp>."""
    if F.chart != "suth":
        raise ValueError("observable is not on the suth chart")
    if F.grad is not None:
        return SuthGrad(*F.grad(x))
    h = fd_step(x, step)
    n = x.n
    e = np.eye(n)
    dq = np.array([_central(lambda t, j=j: F(SuthPoint(x.Q.shifted(t * e[j]), x.p, x.phi)), h)
                   for j in range(n)])
    dp = np.array([_central(lambda t, j=j: F(SuthPoint(x.Q, x.p + t * e[j], x.phi)), h)
                   for j in range(n)])
    hp = algebra.basis("hermperp", n)
    dphi = np.array([_central(lambda t, Y=Y: F(SuthPoint(x.Q, x.p, x.phi + t * Y)), h)
                     for Y in hp])
    return SuthGrad(_assemble(dq, _dual_stack("u0", n)),
                    _assemble(dp, _dual_stack("herm0", n)),
                    _assemble(dphi, _dual_stack("hermperp", n)))


GRAD_FUNCS = {"full": grad_full, "red": grad_red, "rs": grad_rs, "suth": grad_suth}


def grad(F: Observable, x, step: float | None = None):
    return GRAD_FUNCS[F.chart](F, x, step)


# ---------------------------------------------------------------------------
# invariant observable family


def _matpow(A: np.ndarray, m: int) -> np.ndarray:
    return np.linalg.matrix_power(A, m)


def invariant_observable(m: int, k: int, part: str = "re",
                         chart: str = "full") -> Observable:
    """Conjugation-invariant trace observable Re/Im tr(g^m L^k), together
    with its restriction to each chart through the coordinate maps."""
    if m < 0 or k < 0 or (m, k) == (0, 0):
        raise ValueError("need m, k >= 0 with (m, k) != (0, 0)")
    if part not in ("re", "im"):
        raise ValueError(f"unknown part {part!r}")
    take = np.real if part == "re" else np.imag

    def tr_val(U, L):
        return float(take(np.trace(_matpow(U, m) @ _matpow(L, k))))

    name = f"{part}-tr(g^{m} L^{k})[{chart}]"
    if chart == "full":
        return Observable("full", lambda x: tr_val(x.g, x.L), name=name)
    if chart == "red":
        return Observable("red", lambda x: tr_val(x.Q.matrix(), x.L), name=name)
    if chart == "rs":
        from . import coords

        def val_rs(x):
            y = coords.from_rs(x)
            return tr_val(y.Q.matrix(), y.L)
        return Observable("rs", val_rs, name=name)
    if chart == "suth":
        from . import coords

        def val_suth(x):
            y = coords.from_suth(x)
            return tr_val(y.Q.matrix(), y.L)
        return Observable("suth", val_suth, name=name)
    raise ValueError(f"unknown chart {chart!r}")


def hamiltonian_observable(k: int, chart: str = "full") -> Observable:
    """Free Hamiltonian H_k = tr(L^k)/k with its analytic gradient
    (d2 H_k = i L^{k-1}, all group-direction derivatives zero)."""
    if k < 1:
        raise ValueError("need k >= 1")

    def val(x):
        return float(np.real(np.trace(_matpow(x.L, k)))) / k

    if chart == "full":
        def g(x):
            z = np.zeros_like(x.L)
            return FullGrad(z, z, 1j * _matpow(x.L, k - 1))
        return Observable("full", val, grad=g, name=f"H_{k}[full]")
    if chart == "red":
        def g(x):
            return RedGrad(np.zeros_like(x.L), 1j * _matpow(x.L, k - 1))
        return Observable("red", val, grad=g, name=f"H_{k}[red]")
    raise ValueError("analytic Hamiltonians live on the full or reduced chart")


# ---------------------------------------------------------------------------
# sampling


_CHART_CODE = {"full": 11, "red": 13, "rs": 17, "suth": 19}
_REDRAW_BUDGET = 1000


def _rng(chart: str, n: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([_CHART_CODE[chart], n, seed])


def _haar_unitary(rng, n):
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Qm, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Qm * (d / np.abs(d))


def _gaussian_hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return algebra.make_hermitian(A)


# Sampled points keep a healthy margin above the chart-existence gap so that
# finite differences stay well conditioned near the R-operator poles.
_SAMPLING_GAP = 0.1


def _regular_torus(rng, n, seed, gap=REGULARITY_GAP):
    margin = max(gap, _SAMPLING_GAP)
    for _ in range(_REDRAW_BUDGET):
        q = rng.uniform(0.0, 2.0 * np.pi, size=n)
        try:
            Q = TorusReg(q, gap)
        except algebra.RegularityError:
            continue
        if Q.min_gap() > margin:
            return Q
    raise RuntimeError(f"regularity re-draw budget exceeded (seed {seed})")


def sample_point(chart: str, n: int, seed: int):
    """Deterministic random point of a chart: Haar g, Gaussian Hermitian L,
    uniform regular torus phases, Gaussian strictly-upper lambda, Gaussian
    off-diagonal Hermitian phi."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = _rng(chart, n, seed)
    if chart == "full":
        return FullPoint(_haar_unitary(rng, n), _gaussian_hermitian(rng, n))
    if chart == "red":
        Q = _regular_torus(rng, n, seed)
        return RedPoint(Q, _gaussian_hermitian(rng, n))
    if chart == "rs":
        Q = _regular_torus(rng, n, seed)
        p = rng.standard_normal(n)
        lam = np.eye(n, dtype=complex)
        iu = np.triu_indices(n, 1)
        lam[iu] = rng.standard_normal(len(iu[0])) + 1j * rng.standard_normal(len(iu[0]))
        return RSPoint(Q, p, lam)
    if chart == "suth":
        Q = _regular_torus(rng, n, seed)
        p = rng.standard_normal(n)
        phi = _gaussian_hermitian(rng, n)
        phi = phi - np.diag(np.diag(phi))
        return SuthPoint(Q, p, phi)
    raise ValueError(f"unknown chart {chart!r}")
