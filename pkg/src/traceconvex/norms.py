"""Decomposition-infimum norms built from the bipartite functional: the self-adjoint
norm over positive splittings, the block embedding extending it to general operators,
and the identities used to certify both."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import BadRegime, DimMismatch
from .functionals import ExponentPair, Regime, partial_power_norm, power_sum_norm
from .linalg import DEFAULT_TOL, Tolerances, matrix_power, require_hermitian
from .sampling import rand_psd, rand_unit_vector, rng_for_trial
from .tensorops import LabeledMatrix, labeled, partial_trace_dims, permute_factors

__all__ = [
    "OptimizerBudget",
    "Decomposition",
    "BlockEmbedding",
    "jordan_decomposition",
    "decomposition_objective",
    "lqlp_selfadjoint_norm",
    "block_embed",
    "induced_block_decomposition",
    "lqlp_general_norm",
    "unitary_mix_deviation",
    "find_nonmonotone_pair",
]


@dataclass(frozen=True)
class OptimizerBudget:
    """Budget for the projected-descent search over residuals."""

    max_iters: int = 500
    grad_tol: float = 1e-7
    time_cap: float | None = None  # seconds per call


DEFAULT_BUDGET = OptimizerBudget()


@dataclass(frozen=True)
class Decomposition:
    """X = pos - neg with pos = X+ + residual, neg = X- + residual."""

    pos: np.ndarray
    neg: np.ndarray
    residual: np.ndarray


def jordan_decomposition(x, tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Canonical split X = X+ - X- with X+ X- = 0 (residual zero)."""
    x = require_hermitian(x, tol)
    w, v = np.linalg.eigh(x)
    pos = (v * np.clip(w, 0.0, None)) @ v.conj().T
    neg = (v * np.clip(-w, 0.0, None)) @ v.conj().T
    zero = np.zeros_like(x)
    return Decomposition(pos=(pos + pos.conj().T) / 2, neg=(neg + neg.conj().T) / 2, residual=zero)


def decomposition_objective(
    dec: Decomposition, factors, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Objective value Psi(pos) + Psi(neg) of one feasible decomposition."""
    return partial_power_norm(labeled(dec.pos, factors), exps, tol) + partial_power_norm(
        labeled(dec.neg, factors), exps, tol
    )


_BASIS_CACHE: dict[int, list[np.ndarray]] = {}


def _hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of n x n Hermitian matrices, fixed order."""
    if n not in _BASIS_CACHE:
        basis = []
        for i in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, i] = 1.0
            basis.append(e)
        inv_rt2 = 1.0 / np.sqrt(2.0)
        for i in range(n):
            for j in range(i + 1, n):
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = inv_rt2
                e[j, i] = inv_rt2
                basis.append(e)
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = 1j * inv_rt2
                e[j, i] = -1j * inv_rt2
                basis.append(e)
        _BASIS_CACHE[n] = basis
    return _BASIS_CACHE[n]


def _clamp_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def lqlp_selfadjoint_norm(
    lm: LabeledMatrix,
    exps: ExponentPair,
    budget: OptimizerBudget = DEFAULT_BUDGET,
    tol: Tolerances = DEFAULT_TOL,
    candidates=(),
    return_history: bool = False,
):
    """Upper bound on inf { Psi(A) + Psi(B) : X = A - B, A >= 0, B >= 0 }.

    Feasible points are parameterized as (X+ + R, X- + R) over PSD residuals R and
    minimized by projected descent: central-difference gradient (step 1e-5 * scale),
    eigenvalue-clamp projection, backtracking line search. The reported value is the
    best feasible objective seen, so it never exceeds Psi(X+) + Psi(X-), and extra
    `candidates` (pairs (A, B) with A - B = X) are evaluated and folded into the
    minimum. Returns (value, Decomposition), plus the list of accepted objective
    values when return_history is set.
    """
    if exps.regime() is not Regime.CONVEX:
        raise BadRegime(
            f"norm is defined on the convex regime 1 <= p <= 2, q >= 1; got "
            f"({exps.p}, {exps.q})"
        )
    factors = lm.factors
    if len(factors) != 2:
        raise DimMismatch(f"expected a bipartite labeled matrix, got {factors}")
    x = require_hermitian(lm.mat, tol)
    base = jordan_decomposition(x, tol)
    scale = float(np.abs(np.linalg.eigvalsh(x)).max()) if x.size else 0.0
    zero = np.zeros_like(x)
    if scale == 0.0:
        out = (0.0, Decomposition(pos=zero, neg=zero, residual=zero))
        return (*out, [0.0]) if return_history else out

    def objective(r: np.ndarray) -> float:
        # finite-difference probes may dip just outside the cone; clamping here is
        # the same eigenvalue projection the iterates themselves go through
        return decomposition_objective(
            Decomposition(
                pos=_clamp_psd(base.pos + r), neg=_clamp_psd(base.neg + r), residual=r
            ),
            factors,
            exps,
            tol,
        )

    n = x.shape[0]
    basis = _hermitian_basis(n)
    h = 1e-5 * scale
    deadline = None if budget.time_cap is None else time.monotonic() + budget.time_cap

    r = zero
    f_cur = objective(r)
    history = [f_cur]
    for _ in range(budget.max_iters):
        if deadline is not None and time.monotonic() > deadline:
            break
        grad = np.zeros_like(x)
        for e in basis:
            g = (objective(r + h * e) - objective(r - h * e)) / (2.0 * h)
            grad = grad + g * e
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= budget.grad_tol:
            break
        alpha = scale / max(gnorm, 1e-300)
        improved = False
        while alpha > 1e-14 * scale:
            trial = _clamp_psd(r - alpha * grad)
            f_trial = objective(trial)
            if f_trial < f_cur:
                r, f_cur = trial, f_trial
                history.append(f_cur)
                improved = True
                break
            alpha /= 2.0
        if not improved:
            break
        if len(history) >= 3 and history[-3] - history[-1] < 1e-13 * max(1.0, abs(f_cur)):
            break

    best_val = f_cur
    best = Decomposition(pos=base.pos + r, neg=base.neg + r, residual=r)
    for cand in candidates:
        a, b = (cand.pos, cand.neg) if isinstance(cand, Decomposition) else cand
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        if np.abs((a - b) - x).max() > 1e-8 * max(scale, 1.0):
            raise DimMismatch("candidate pair does not decompose X")
        dec = Decomposition(pos=a, neg=b, residual=a - base.pos)
        val = decomposition_objective(dec, factors, exps, tol)
        if val < best_val:
            best_val, best = val, dec
    out = (best_val, best)
    return (*out, history) if return_history else out


@dataclass(frozen=True)
class BlockEmbedding:
    """Self-adjoint doubling [[0, A], [A*, 0]] of a bipartite operator.

    grouping "second" views the doubled space as H1 (x) (H2 (x) C2) — the default —
    while "first" views it as (C2 (x) H1) (x) H2; the embedded matrix is labeled
    accordingly.
    """

    source: LabeledMatrix
    embedded: LabeledMatrix
    grouping: str


def _block_order(a: np.ndarray) -> np.ndarray:
    zero = np.zeros_like(a)
    return np.block([[zero, a], [a.conj().T, zero]])


def block_embed(lm: LabeledMatrix, grouping: str = "second") -> BlockEmbedding:
    """Embed a general bipartite operator as a self-adjoint one on the doubled space.

    The spectrum of the embedding is the symmetric set {+/- sigma_i(A)}.
    """
    if len(lm.factors) != 2:
        raise DimMismatch(f"expected a bipartite labeled matrix, got {lm.factors}")
    d1, d2 = lm.factors
    big = _block_order(lm.mat)  # factor order (2, d1, d2)
    tri = labeled(big, (2, d1, d2))
    if grouping == "second":
        tri = permute_factors(tri, (2, 3, 1))  # -> (d1, d2, 2)
        emb = labeled(tri.mat, (d1, d2 * 2))
    elif grouping == "first":
        emb = labeled(tri.mat, (2 * d1, d2))
    else:
        raise ValueError(f"grouping must be 'second' or 'first', got {grouping!r}")
    return BlockEmbedding(source=lm, embedded=emb, grouping=grouping)


def induced_block_decomposition(
    b, c, space_factors, grouping: str = "second"
) -> tuple[np.ndarray, np.ndarray]:
    """Decomposition of the embedding induced by X = B - C:

        [[0, X], [X, 0]] = (1/2) [[B+C, B-C], [B-C, B+C]] - (1/2) [[B+C, C-B], [C-B, B+C]]

    Returns the pair as matrices aligned with the embedded labeling, for use as
    optimizer candidates on the doubled space.
    """
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    d1, d2 = space_factors
    s, d = b + c, b - c
    pos = 0.5 * np.block([[s, d], [d, s]])
    neg = 0.5 * np.block([[s, -d], [-d, s]])
    if grouping == "second":
        pos = permute_factors(labeled(pos, (2, d1, d2)), (2, 3, 1)).mat
        neg = permute_factors(labeled(neg, (2, d1, d2)), (2, 3, 1)).mat
    return pos, neg


def lqlp_general_norm(
    lm: LabeledMatrix,
    exps: ExponentPair,
    budget: OptimizerBudget = DEFAULT_BUDGET,
    tol: Tolerances = DEFAULT_TOL,
    grouping: str = "second",
    candidates=(),
) -> float:
    """Half the self-adjoint norm of the block embedding of a general operator."""
    emb = block_embed(lm, grouping)
    value, _ = lqlp_selfadjoint_norm(emb.embedded, exps, budget, tol, candidates=candidates)
    return 0.5 * value


def _psi(mat: np.ndarray, factors, exps: ExponentPair, tol: Tolerances) -> float:
    return partial_power_norm(labeled(mat, factors), exps, tol)


def unitary_mix_deviation(
    b_lm: LabeledMatrix, c_lm: LabeledMatrix, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Max deviation across the block-mixing identities for PSD B, C.

    Checked as equalities (all provable):
      * U [[B+C, B-C], [B-C, B+C]] U* = 2 diag(B, C) and the mirrored variant,
        with U = (1/sqrt 2) [[I, I], [I, -I]];
      * Psi of the mixed matrix equals 2 Psi(diag(B, C)) (locality of U plus
        degree-one homogeneity);
      * Psi(diag(B, C)) equals the two-argument functional of the reduced roots
        S_B = (Tr_2 B^p)^(1/p), S_C likewise.
    The sum Psi(B) + Psi(C) only bounds 2 Psi(diag(B,C))/2 from above (subadditivity),
    so the hinge max(0, Psi(diag) - Psi(B) - Psi(C)) is folded into the deviation.
    """
    if b_lm.factors != c_lm.factors:
        raise DimMismatch(f"factor mismatch {b_lm.factors} vs {c_lm.factors}")
    d1, d2 = b_lm.factors
    b, c = b_lm.mat, c_lm.mat
    n = d1 * d2
    eye = np.eye(n)
    u = np.block([[eye, eye], [eye, -eye]]) / np.sqrt(2.0)
    s, d = b + c, b - c
    mixed_pos = np.block([[s, d], [d, s]])
    mixed_neg = np.block([[s, -d], [-d, s]])
    diag_bc = np.block([[b, np.zeros_like(b)], [np.zeros_like(b), c]])
    diag_cb = np.block([[c, np.zeros_like(b)], [np.zeros_like(b), b]])
    scale = max(float(np.abs(diag_bc).max()), 1e-300)
    dev = max(
        float(np.abs(u @ mixed_pos @ u.conj().T - 2.0 * diag_bc).max()) / scale,
        float(np.abs(u @ mixed_neg @ u.conj().T - 2.0 * diag_cb).max()) / scale,
    )

    def grouped(mat):
        return permute_factors(labeled(mat, (2, d1, d2)), (2, 3, 1)).mat

    fac = (d1, d2 * 2)
    psi_mixed = _psi(grouped(mixed_pos), fac, exps, tol)
    psi_diag = _psi(grouped(diag_bc), fac, exps, tol)
    vscale = max(psi_mixed, psi_diag, 1e-300)
    dev = max(dev, abs(psi_mixed - 2.0 * psi_diag) / vscale)

    root_b = matrix_power(partial_trace_dims(matrix_power(b, exps.p, tol), (d1, d2), 1), 1.0 / exps.p, tol)
    root_c = matrix_power(partial_trace_dims(matrix_power(c, exps.p, tol), (d1, d2), 1), 1.0 / exps.p, tol)
    phi_roots = power_sum_norm((root_b, root_c), exps, tol)
    dev = max(dev, abs(psi_diag - phi_roots) / vscale)

    psi_sum = _psi(b, (d1, d2), exps, tol) + _psi(c, (d1, d2), exps, tol)
    dev = max(dev, max(0.0, psi_diag - psi_sum) / vscale)
    return dev


def find_nonmonotone_pair(
    exps: ExponentPair,
    factors=(2, 2),
    seed: int = 0,
    trials: int = 2000,
    margin: float = 1e-4,
    tol: Tolerances = DEFAULT_TOL,
):
    """Best-effort search for PSD A <= A' with Psi(A) > Psi(A') (non-monotonicity).

    Tries random PSD A with rank-one increments at several sizes and returns the
    first pair whose relative drop exceeds `margin`, or None when the budget is
    exhausted.
    """
    d1, d2 = factors
    n = d1 * d2
    for i in range(trials):
        rng = rng_for_trial(seed, i)
        a = rand_psd(rng, n)
        va = _psi(a, factors, exps, tol)
        u = rand_unit_vector(rng, n)
        bump = np.outer(u, u.conj())
        for size in (0.1, 0.5, 1.0, 4.0):
            ap = a + size * bump
            vap = _psi(ap, factors, exps, tol)
            if va - vap > margin * max(va, 1e-300):
                return a, ap
    return None
