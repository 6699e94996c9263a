"""Randomized midpoint-convexity certification across the (p, q) plane, and the
constructive two-sided refutation search for p > 2."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BadRegime, SearchExhausted
from .linalg import DEFAULT_TOL, Tolerances, matrix_power, schatten_norm
from .functionals import (
    ExponentPair,
    Regime,
    joint_power_trace,
    partial_power_norm,
    power_sum_norm,
    sandwiched_power_trace,
    skew_information,
)
from .sampling import (
    rand_density,
    rand_hermitian,
    rand_psd,
    rng_for_trial,
    trial_seed,
)
from .tensorops import labeled

__all__ = [
    "FUNCTIONALS",
    "Verdict",
    "GapReport",
    "Counterexample",
    "midpoint_gap",
    "claimed_regime",
    "certify_regime",
    "count_violations",
    "taylor_gap_prediction",
    "pair_gap",
    "find_counterexample",
    "small_t_bridge",
    "joint_power_trace_gap",
    "variational_core",
]

FUNCTIONALS = ("phi", "psi", "upsilon", "joint_trace", "skew")


class Verdict:
    CONSISTENT_CONVEX = "CONSISTENT_CONVEX"
    CONSISTENT_CONCAVE = "CONSISTENT_CONCAVE"
    VIOLATION = "VIOLATION"


@dataclass(frozen=True)
class GapReport:
    """Outcome of one midpoint-convexity probe."""

    functional: str
    p: float
    q: float
    dim: int
    seed: int
    gap: float
    scale: float
    verdict: str

    def to_json(self) -> dict:
        # wire schema is fixed; scale stays internal
        return {
            "functional": self.functional,
            "p": self.p,
            "q": self.q,
            "dim": self.dim,
            "seed": self.seed,
            "gap": self.gap,
            "verdict": self.verdict,
        }


def midpoint_gap(f, x0, x1) -> float:
    """(f(x0) + f(x1))/2 - f((x0 + x1)/2), componentwise midpoint for tuples."""
    gap, _ = _gap_and_scale(f, x0, x1)
    return gap


def _gap_and_scale(f, x0, x1):
    if not isinstance(x0, tuple):
        x0, x1 = (x0,), (x1,)
    mid = tuple((a + b) / 2 for a, b in zip(x0, x1))
    v0, v1, vm = f(*x0), f(*x1), f(*mid)
    scale = max(abs(v0), abs(v1), abs(vm))
    return 0.5 * v0 + 0.5 * v1 - vm, scale


def claimed_regime(functional: str, exps: ExponentPair) -> Regime:
    """Regime the theory claims for the functional at (p, q).

    phi/psi/upsilon follow the main (p, q) classification; the joint trace form
    (A, B) -> Tr A^p K* B^(1-r) K is convex for 1 <= r <= p <= 2 and concave for
    0 < p <= r <= 1 (r = p/q); skew information is always convex.
    """
    if functional in ("phi", "psi", "upsilon"):
        return exps.regime()
    if functional == "joint_trace":
        r = exps.r
        if 1.0 <= r <= exps.p <= 2.0:
            return Regime.CONVEX
        if 0.0 < exps.p <= r <= 1.0:
            return Regime.CONCAVE
        return Regime.NEITHER
    if functional == "skew":
        return Regime.CONVEX
    raise ValueError(f"unknown functional {functional!r}")


def _verdict(gap: float, scale: float, regime: Regime, tol: Tolerances) -> str:
    cut = tol.gap * scale
    if regime is Regime.CONVEX:
        return Verdict.CONSISTENT_CONVEX if gap >= -cut else Verdict.VIOLATION
    if regime is Regime.CONCAVE:
        return Verdict.CONSISTENT_CONCAVE if gap <= cut else Verdict.VIOLATION
    return Verdict.CONSISTENT_CONVEX if gap >= 0 else Verdict.CONSISTENT_CONCAVE


def _trial_inputs(functional: str, rng, dim: int, m: int, factors, shift: float):
    """Two independent input tuples plus the per-trial evaluator."""
    if functional == "phi":
        x0 = tuple(rand_psd(rng, dim) for _ in range(m))
        x1 = tuple(rand_psd(rng, dim) for _ in range(m))
        return x0, x1, None
    if functional == "psi":
        f = factors if factors is not None else (dim, dim)
        n = int(np.prod(f))
        return (rand_psd(rng, n),), (rand_psd(rng, n),), ("psi", tuple(f))
    if functional == "upsilon":
        b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return (rand_psd(rng, dim),), (rand_psd(rng, dim),), ("upsilon", b)
    if functional == "joint_trace":
        k = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        x0 = (rand_psd(rng, dim), rand_psd(rng, dim, shift=shift))
        x1 = (rand_psd(rng, dim), rand_psd(rng, dim, shift=shift))
        return x0, x1, ("joint_trace", k)
    if functional == "skew":
        k = rand_hermitian(rng, dim)
        return (rand_density(rng, dim),), (rand_density(rng, dim),), ("skew", k)
    raise ValueError(f"unknown functional {functional!r}")


def certify_regime(
    functional: str,
    exps: ExponentPair,
    trials: int = 200,
    dim: int = 3,
    m: int = 2,
    factors=None,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    jobs: int = 1,
) -> list[GapReport]:
    """Run seeded midpoint-gap trials on Wishart inputs and report per-trial verdicts.

    Trials are independent under derived seeds, so serial and parallel execution
    produce identical report lists.
    """
    regime = claimed_regime(functional, exps)
    shift = 1e-6 if (functional == "joint_trace" and 1.0 - exps.r < 0) else 0.0

    def one(i: int) -> GapReport:
        rng = rng_for_trial(seed, i)
        x0, x1, ctx = _trial_inputs(functional, rng, dim, m, factors, shift)
        f = _evaluator(functional, exps, ctx, tol)
        gap, scale = _gap_and_scale(f, x0, x1)
        rep_dim = int(np.prod(factors)) if (functional == "psi" and factors) else dim
        return GapReport(
            functional=functional,
            p=exps.p,
            q=exps.q,
            dim=rep_dim,
            seed=trial_seed(seed, i),
            gap=gap,
            scale=scale,
            verdict=_verdict(gap, scale, regime, tol),
        )

    if jobs <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(one, i) for i in range(trials)]
        return [f.result() for f in futures]


def _evaluator(functional: str, exps: ExponentPair, ctx, tol: Tolerances):
    if functional == "phi":
        return lambda *mats: power_sum_norm(mats, exps, tol)
    if functional == "psi":
        _, f = ctx
        return lambda a: partial_power_norm(labeled(a, f), exps, tol)
    if functional == "upsilon":
        _, b = ctx
        return lambda a: sandwiched_power_trace(a, b, exps, tol)
    if functional == "joint_trace":
        _, k = ctx
        return lambda a, b: joint_power_trace(
            a, b, k, exps.p, 1.0 - exps.r, tol, check_vectorized=False
        )
    if functional == "skew":
        _, k = ctx
        return lambda rho: skew_information(rho, k, tol)
    raise ValueError(f"unknown functional {functional!r}")


def count_violations(reports) -> int:
    return sum(1 for r in reports if r.verdict == Verdict.VIOLATION)


def taylor_gap_prediction(
    a1, a2, b, exps: ExponentPair, t: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Leading-order midpoint gap of the pair functional at (t*A, B):

    (t^p / p) ||B||_q^(1-q) [ Tr(A1^p B^(q-p))/2 + Tr(A2^p B^(q-p))/2
                              - Tr(((A1+A2)/2)^p B^(q-p)) ]
    with remainder O(t^(2p)) for strictly positive B.
    """
    p, q = exps.p, exps.q
    bq = schatten_norm(np.asarray(b, dtype=complex), q)
    bpow = matrix_power(b, q - p, tol)

    def bracket_term(a):
        return float(np.trace(matrix_power(a, p, tol) @ bpow).real)

    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    bracket = (
        0.5 * bracket_term(a1) + 0.5 * bracket_term(a2) - bracket_term((a1 + a2) / 2)
    )
    return (t ** p / p) * bq ** (1.0 - q) * bracket


def pair_gap(a1, a2, b, exps: ExponentPair, t: float, tol: Tolerances = DEFAULT_TOL):
    """Midpoint gap of A -> ||((tA)^p + B^p)^(1/p)||_q at A1, A2 with B held fixed.

    Returns (gap, scale); the scale is the largest of the three evaluations.
    """

    def f(a):
        return power_sum_norm((t * a, b), exps, tol)

    return _gap_and_scale(f, (np.asarray(a1, complex),), (np.asarray(a2, complex),))


@dataclass(frozen=True)
class Counterexample:
    """Two sign witnesses showing the pair functional is neither convex nor concave."""

    exps: ExponentPair
    a1: np.ndarray
    a2: np.ndarray
    v: np.ndarray
    w: np.ndarray
    b_negative: np.ndarray
    b_positive: np.ndarray
    t_negative: float
    t_positive: float
    gap_negative: float
    gap_positive: float
    epsilon: float

    def to_json(self) -> dict:
        from .matio import matrix_to_obj

        return {
            "p": self.exps.p,
            "q": self.exps.q,
            "a1": matrix_to_obj(self.a1),
            "a2": matrix_to_obj(self.a2),
            "v": [[z.real, z.imag] for z in self.v],
            "w": [[z.real, z.imag] for z in self.w],
            "b_negative": matrix_to_obj(self.b_negative),
            "b_positive": matrix_to_obj(self.b_positive),
            "t_negative": self.t_negative,
            "t_positive": self.t_positive,
            "gap_negative": self.gap_negative,
            "gap_positive": self.gap_positive,
            "epsilon": self.epsilon,
        }


_T_SCHEDULE = [0.5 * 2.0 ** (-k) for k in range(12)]  # 0.5 down to 2^-12


def _witness_scan(a1, a2, b, exps, sign: int, tol: Tolerances):
    """First t in the geometric schedule whose gap has the wanted sign with margin
    10x above gap_tol; returns (t, gap) or None."""
    for t in _T_SCHEDULE:
        gap, scale = pair_gap(a1, a2, b, exps, t, tol)
        if sign * gap > 10.0 * tol.gap * scale:
            return t, gap
    return None


def find_counterexample(
    exps: ExponentPair,
    dim: int = 2,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    max_pairs: int = 100,
) -> Counterexample:
    """Search for matrices and vectors witnessing both gap signs for p > 2, q != p.

    Strategy: for random A1, A2 the matrix
        M = A1^p/2 + A2^p/2 - ((A1+A2)/2)^p
    has a negative direction exactly when p-th power convexity fails pointwise; its
    extreme eigenvectors give the vectors v (negative) and w (positive, guaranteed
    because Tr M >= 0). A rank-one B on v (or a near-projection inverse when q < p)
    turns the sign of <v, M v> into the sign of the small-t midpoint gap.
    """
    p, q = exps.p, exps.q
    if not (p > 2.0) or q == p:
        raise BadRegime(f"counterexample search needs p > 2 and q != p, got ({p}, {q})")
    for pair_index in range(max_pairs):
        rng = rng_for_trial(seed, pair_index)
        a1 = rand_psd(rng, dim)
        a2 = rand_psd(rng, dim)
        m = (
            0.5 * matrix_power(a1, p, tol)
            + 0.5 * matrix_power(a2, p, tol)
            - matrix_power((a1 + a2) / 2, p, tol)
        )
        wvals, wvecs = np.linalg.eigh(m)
        if wvals[0] >= 0:
            continue
        v = wvecs[:, 0]
        w = wvecs[:, -1]
        if wvals[-1] <= 0:
            continue
        for eps in (1e-3, 1e-4, 1e-5, 1e-6):
            b_neg = _counterexample_b(v, q, p, eps)
            b_pos = _counterexample_b(w, q, p, eps)
            neg = _witness_scan(a1, a2, b_neg, exps, -1, tol)
            pos = _witness_scan(a1, a2, b_pos, exps, +1, tol)
            if neg is not None and pos is not None:
                return Counterexample(
                    exps=exps,
                    a1=a1,
                    a2=a2,
                    v=v,
                    w=w,
                    b_negative=b_neg,
                    b_positive=b_pos,
                    t_negative=neg[0],
                    t_positive=pos[0],
                    gap_negative=neg[1],
                    gap_positive=pos[1],
                    epsilon=eps if q < p else 0.0,
                )
            if q > p:
                break  # rank-one B has no epsilon to refine
    raise SearchExhausted(
        f"no two-sided witness after {max_pairs} matrix pairs at dim {dim}"
    )


def _counterexample_b(vec: np.ndarray, q: float, p: float, eps: float) -> np.ndarray:
    proj = np.outer(vec, vec.conj())
    if q > p:
        return proj
    n = vec.shape[0]
    return np.linalg.inv(eps * np.eye(n) + proj)


def small_t_bridge(
    a1, a2, b1, b2, p: float, t: float, tol: Tolerances = DEFAULT_TOL
):
    """Midpoint gap of the q = 1 pair functional at (t A_i, B_i) and its leading
    prediction (t^p / p) * midpoint gap of (A, B) -> Tr A^p B^(1-p).

    The two share a sign for small t, which transfers convexity/concavity between
    the pair functional and the bilinear trace form. Returns (gap, prediction).
    """
    exps = ExponentPair(p, 1.0)

    def f(a, b):
        return power_sum_norm((t * a, b), exps, tol)

    gap, _ = _gap_and_scale(f, (a1, b1), (a2, b2))

    def g(a, b):
        return float(
            np.trace(matrix_power(a, p, tol) @ matrix_power(b, 1.0 - p, tol)).real
        )

    pred_gap, _ = _gap_and_scale(g, (a1, b1), (a2, b2))
    return gap, (t ** p / p) * pred_gap


def joint_power_trace_gap(
    a1, b1, a2, b2, k, p: float, r: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Midpoint gap of (A, B) -> Tr A^p K* B^(1-r) K (convex for 1<=r<=p<=2,
    concave for 0<=p<=r<=1)."""

    def f(a, b):
        return joint_power_trace(a, b, k, p, 1.0 - r, tol, check_vectorized=False)

    gap, _ = _gap_and_scale(f, (a1, b1), (a2, b2))
    return gap


def variational_core(a, x, b, p: float, r: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr(A^(p/2) B X^(1-r) B* A^(p/2)), the joint objective under the variational
    representation; jointly convex/concave in (A, X) on the same regimes as the
    joint power trace."""
    half = matrix_power(a, p / 2.0, tol)
    m = half @ np.asarray(b, complex) @ matrix_power(x, 1.0 - r, tol) @ np.asarray(b, complex).conj().T @ half
    return float(np.trace(m).real)
