"""Tripartite Minkowski trace inequality, von Neumann entropy, strong subadditivity,
and the finite-difference bridge connecting the two."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotADensityMatrix, NotBipartite, NotTripartite
from .functionals import ExponentPair
from .linalg import DEFAULT_TOL, Tolerances, matrix_power, trace_x_log_x, validate_psd
from .tensorops import LabeledMatrix, labeled, partial_trace_dims

__all__ = [
    "MinkowskiVerdict",
    "entropy",
    "ssa_gap",
    "ssa_bridge_slopes",
    "minkowski_sides",
    "minkowski_two_space",
    "reduced_state",
]


@dataclass(frozen=True)
class MinkowskiVerdict:
    """Both sides of the tripartite inequality plus the directed margin.

    direction is "LE" (lhs <= rhs claimed) for 1 <= q <= p <= 2, "GE" for
    0 < p <= 1, q >= p, and "UNCHECKED" outside both regimes. The margin is
    rhs - lhs for LE and lhs - rhs for GE (nonnegative when the claim holds).
    """

    lhs: float
    rhs: float
    p: float
    q: float
    direction: str
    margin: float

    def to_json(self, seed: int | None = None) -> dict:
        out = {
            "p": self.p,
            "q": self.q,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "direction": self.direction,
            "margin": self.margin,
        }
        if seed is not None:
            out["seed"] = seed
        return out


def _direction(p: float, q: float) -> str:
    if 1.0 <= q <= p <= 2.0:
        return "LE"
    if 0.0 < p <= 1.0 and q >= p:
        return "GE"
    return "UNCHECKED"


def minkowski_sides(
    lm: LabeledMatrix, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL
) -> MinkowskiVerdict:
    """Evaluate both sides of

        Tr3 (Tr2 [(Tr1 A^q)^(p/q)])^(q/p)  vs  Tr3 (Tr1 [(Tr2 A^p)^(q/p)])

    for PSD A on a three-factor space. The subscripts name the original factors,
    so each partial trace below is taken on the current leading axis explicitly.
    """
    if len(lm.factors) != 3:
        raise NotTripartite(f"expected 3 factors, got {lm.factors}")
    p, q = exps.p, exps.q
    d1, d2, d3 = lm.factors
    a = lm.mat

    # lhs: A^q -> trace out 1 -> power p/q on (2,3) -> trace out 2 -> power q/p -> Tr
    aq = matrix_power(a, q, tol)
    on23 = partial_trace_dims(aq, (d1, d2, d3), 0)
    on23 = matrix_power(on23, p / q, tol)
    on3 = partial_trace_dims(on23, (d2, d3), 0)
    lhs = float(np.trace(matrix_power(on3, q / p, tol)).real)

    # rhs: A^p -> trace out 2 -> power q/p on (1,3) -> trace out 1 -> Tr
    ap = matrix_power(a, p, tol)
    on13 = partial_trace_dims(ap, (d1, d2, d3), 1)
    on13 = matrix_power(on13, q / p, tol)
    on3b = partial_trace_dims(on13, (d1, d3), 0)
    rhs = float(np.trace(on3b).real)

    direction = _direction(p, q)
    if direction == "GE":
        margin = lhs - rhs
    else:  # LE and UNCHECKED both report rhs - lhs
        margin = rhs - lhs
    return MinkowskiVerdict(lhs=lhs, rhs=rhs, p=p, q=q, direction=direction, margin=margin)


def minkowski_two_space(
    lm: LabeledMatrix, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL
) -> MinkowskiVerdict:
    """Two-factor version, realized exactly as the trivial-third-factor lift."""
    if len(lm.factors) != 2:
        raise NotBipartite(f"expected 2 factors, got {lm.factors}")
    lifted = labeled(lm.mat, (*lm.factors, 1))
    return minkowski_sides(lifted, exps, tol)


def entropy(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Von Neumann entropy -Tr(rho ln rho) in nats; requires unit trace."""
    rho = np.asarray(rho, dtype=complex)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-10:
        raise NotADensityMatrix(f"trace {tr!r} differs from 1 beyond 1e-10")
    rho = validate_psd(rho, tol)
    return -trace_x_log_x(rho, tol)


def reduced_state(lm: LabeledMatrix, keep: tuple[int, ...]) -> np.ndarray:
    """Reduction onto the named (1-based) factors, tracing the others out."""
    dims = list(lm.factors)
    mat = lm.mat
    # trace out unwanted axes from the right so earlier indices stay valid
    for axis in sorted(range(len(dims)), reverse=True):
        if axis + 1 in keep:
            continue
        mat = partial_trace_dims(mat, tuple(dims), axis)
        del dims[axis]
    return mat


def ssa_gap(lm: LabeledMatrix, tol: Tolerances = DEFAULT_TOL) -> float:
    """S(rho_13) + S(rho_23) - S(rho_123) - S(rho_3) for a tripartite density matrix."""
    if len(lm.factors) != 3:
        raise NotTripartite(f"expected 3 factors, got {lm.factors}")
    s123 = entropy(lm.mat, tol)
    s13 = entropy(reduced_state(lm, (1, 3)), tol)
    s23 = entropy(reduced_state(lm, (2, 3)), tol)
    s3 = entropy(reduced_state(lm, (3,)), tol)
    return s13 + s23 - s123 - s3


def ssa_bridge_slopes(
    lm: LabeledMatrix, eps: float, tol: Tolerances = DEFAULT_TOL
) -> tuple[float, float]:
    """Finite-difference slopes of the two Minkowski-side quantities at exponent 1+eps.

    F1(eps) = Tr[(Tr2 rho^(1+eps))^(1/(1+eps))]   (trace over factors 1 and 3)
    F2(eps) = Tr[(Tr2 rho_23^(1+eps))^(1/(1+eps))] (trace over factor 3)

    Returns ((F1-1)/eps, (F2-1)/eps), which converge to S(rho_13) - S(rho) and
    S(rho_3) - S(rho_23) with O(eps) error.
    """
    if len(lm.factors) != 3:
        raise NotTripartite(f"expected 3 factors, got {lm.factors}")
    if not (0.0 < eps <= 0.1):
        raise ValueError(f"eps must lie in (0, 0.1], got {eps}")
    d1, d2, d3 = lm.factors
    rho = lm.mat

    pw = matrix_power(rho, 1.0 + eps, tol)
    on13 = partial_trace_dims(pw, (d1, d2, d3), 1)
    f1 = float(np.trace(matrix_power(on13, 1.0 / (1.0 + eps), tol)).real)

    rho23 = reduced_state(lm, (2, 3))
    pw23 = matrix_power(rho23, 1.0 + eps, tol)
    on3 = partial_trace_dims(pw23, (d2, d3), 0)
    f2 = float(np.trace(matrix_power(on3, 1.0 / (1.0 + eps), tol)).real)

    return (f1 - 1.0) / eps, (f2 - 1.0) / eps
