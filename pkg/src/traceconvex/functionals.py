"""The three trace functionals on positive matrices, their variational forms with
closed-form optimizers, and the auxiliary bilinear trace forms.

All evaluators are regime-agnostic: they compute values for any positive exponents
and leave convexity claims to the certification layer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    CertificationError,
    DimMismatch,
    NotAContraction,
    NotBipartite,
    SingularCore,
    SingularPower,
    SingularProbe,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    matrix_power,
    require_hermitian,
    schatten_norm,
    support_power,
    validate_density,
)
from .sampling import rand_psd
from .tensorops import LabeledMatrix, partial_trace_dims

__all__ = [
    "Regime",
    "ExponentPair",
    "power_sum_norm",
    "partial_power_norm",
    "sandwiched_power_trace",
    "variational_objective",
    "variational_minimizer",
    "joint_power_trace",
    "vectorized_power_trace",
    "dilate_contraction",
    "skew_information",
    "skew_information_commutator",
]


class Regime(enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    NEITHER = "neither"


@dataclass(frozen=True)
class ExponentPair:
    """Exponents (p, q) with the derived ratio r = p/q and regime classification."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError(f"exponents must be positive, got p={self.p}, q={self.q}")

    @property
    def r(self) -> float:
        return self.p / self.q

    def regime(self) -> Regime:
        # the two branches overlap at p = q = 1 where the functionals are linear;
        # CONVEX takes precedence there
        if 1.0 <= self.p <= 2.0 and self.q >= 1.0:
            return Regime.CONVEX
        if 0.0 < self.p <= self.q <= 1.0:
            return Regime.CONCAVE
        return Regime.NEITHER


def power_sum_norm(mats, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL) -> float:
    """|| (sum_j A_j^p)^(1/p) ||_q for a tuple of same-dim PSD matrices."""
    mats = [np.asarray(a, dtype=complex) for a in mats]
    if not mats:
        raise DimMismatch("need at least one matrix")
    n = mats[0].shape[0]
    if any(a.shape != (n, n) for a in mats):
        raise DimMismatch("all matrices must share one dimension")
    total = sum(matrix_power(a, exps.p, tol) for a in mats)
    return schatten_norm(matrix_power(total, 1.0 / exps.p, tol), exps.q)


def partial_power_norm(lm: LabeledMatrix, exps: ExponentPair, tol: Tolerances = DEFAULT_TOL) -> float:
    """|| (Tr_2 A^p)^(1/p) ||_q for a PSD matrix on a bipartite space."""
    if len(lm.factors) != 2:
        raise NotBipartite(f"expected 2 factors, got {lm.factors}")
    ap = matrix_power(lm.mat, exps.p, tol)
    reduced = partial_trace_dims(ap, lm.factors, 1)
    return schatten_norm(matrix_power(reduced, 1.0 / exps.p, tol), exps.q)


def sandwiched_power_trace(
    a,
    b,
    exps: ExponentPair,
    tol: Tolerances = DEFAULT_TOL,
    form: str = "conjugated",
) -> float:
    """Tr[(B* A^p B)^(q/p)] for PSD A and arbitrary B.

    form="conjugated" evaluates the definition; form="symmetric" evaluates the
    same-spectrum variant Tr[(A^(p/2) B B* A^(p/2))^(q/p)].
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    if form == "conjugated":
        core = b.conj().T @ matrix_power(a, exps.p, tol) @ b
    elif form == "symmetric":
        half = matrix_power(a, exps.p / 2.0, tol)
        hb = half @ b
        core = hb @ hb.conj().T
    else:
        raise ValueError(f"unknown form {form!r}")
    core = (core + core.conj().T) / 2
    return float(np.trace(matrix_power(core, exps.q / exps.p, tol)).real)


def variational_objective(
    a, b, exps: ExponentPair, x, tol: Tolerances = DEFAULT_TOL
) -> float:
    """(1/r) Tr[A^(p/2) B X^(1-r) B* A^(p/2) + (r-1) X] at the probe point X."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x = np.asarray(x, dtype=complex)
    r = exps.r
    try:
        x_pow = matrix_power(x, 1.0 - r, tol)
    except SingularPower as exc:
        raise SingularProbe(str(exc)) from exc
    half = matrix_power(a, exps.p / 2.0, tol)
    m = half @ b @ x_pow @ b.conj().T @ half
    return float((np.trace(m) + (r - 1.0) * np.trace(x)).real / r)


def variational_minimizer(
    a,
    b,
    exps: ExponentPair,
    tol: Tolerances = DEFAULT_TOL,
    regularize: bool = False,
    details: bool = False,
    certify_probes: int = 0,
    seed: int = 0,
):
    """Closed-form optimizer X* = (B* A^p B)^(1/r) of the variational objective.

    For r > 1 the objective is minimized at X*, for r < 1 maximized; either way the
    value there equals the sandwiched power trace. When B* A^p B is singular,
    `regularize=True` shifts A by 1e-10 * lmax(A) * I (SingularCore otherwise).
    With certify_probes > 0, that many random strictly positive probes are checked
    against X* and CertificationError is raised if any beats it beyond 1e-8 * scale.

    Returns X*, or (X*, shift_used) when details=True.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    r = exps.r
    if r == 1.0:
        raise ValueError("r = p/q must differ from 1 for the variational form")
    shift = 0.0
    core = b.conj().T @ matrix_power(a, exps.p, tol) @ b
    core = (core + core.conj().T) / 2
    w = np.linalg.eigvalsh(core)
    lmax = float(np.abs(w).max()) if w.size else 0.0
    if w.min() <= tol.singular * lmax or lmax == 0.0:
        if not regularize:
            raise SingularCore(
                "B*A^pB has an eigenvalue at numerical zero; pass regularize=True"
            )
        a_max = float(np.linalg.eigvalsh(require_hermitian(a, tol)).max())
        shift = 1e-10 * max(a_max, 1.0)
        core = b.conj().T @ matrix_power(a + shift * np.eye(a.shape[0]), exps.p, tol) @ b
        core = (core + core.conj().T) / 2
    x_star = matrix_power(core, 1.0 / r, tol)

    if certify_probes > 0:
        best = variational_objective(a, b, exps, x_star, tol)
        rng = np.random.default_rng(seed)
        n = a.shape[0]
        scale = max(abs(best), 1.0)
        for _ in range(certify_probes):
            probe = rand_psd(rng, n, shift=1e-6)
            val = variational_objective(a, b, exps, probe, tol)
            beat = best - val if r > 1.0 else val - best
            if beat > 1e-8 * scale:
                raise CertificationError(
                    f"probe beat the closed-form optimizer by {beat:.3e}"
                )
    return (x_star, shift) if details else x_star


def joint_power_trace(
    a,
    b,
    k,
    s: float,
    t: float,
    tol: Tolerances = DEFAULT_TOL,
    check_vectorized: bool = True,
) -> float:
    """Tr(A^s K* B^t K); negative exponents require strict positivity.

    By default cross-checks the vectorized tensor form (1e-9 agreement); hot loops
    pass check_vectorized=False.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    k = np.asarray(k, dtype=complex)
    a_s = matrix_power(a, s, tol)
    b_t = matrix_power(b, t, tol)
    val = float(np.trace(a_s @ k.conj().T @ b_t @ k).real)
    if check_vectorized:
        vec = _vectorized_power_trace(a_s, b_t, k)
        if abs(val - vec) > 1e-9 * max(abs(val), abs(vec), 1.0):
            raise CertificationError(
                f"vectorized form {vec!r} disagrees with trace form {val!r}"
            )
    return val


def _vectorized_power_trace(a_s, b_t, k) -> float:
    # convention (frozen): rows of M = K* are stacked, and the second tensor slot
    # carries a transpose; then <vec, (A^s (x) (B^t)^T) vec> = Tr(A^s K* B^t K)
    m = np.asarray(k, dtype=complex).conj().T
    vec = m.reshape(-1)
    return float((vec.conj() @ np.kron(a_s, b_t.T) @ vec).real)


def vectorized_power_trace(a, b, k, s: float, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr(A^s K* B^t K) evaluated through the row-stacked vectorization identity."""
    a_s = matrix_power(np.asarray(a, dtype=complex), s, tol)
    b_t = matrix_power(np.asarray(b, dtype=complex), t, tol)
    return _vectorized_power_trace(a_s, b_t, k)


def _polar_unitary(k: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Deterministic unitary polar factor of K = U |K|.

    Built on the spectral decomposition of K*K; null-space image columns are
    completed by Gram-Schmidt over the standard basis in a fixed order, so
    singular K still maps to one well-defined unitary.
    """
    n = k.shape[0]
    gram = k.conj().T @ k
    w, v = np.linalg.eigh((gram + gram.conj().T) / 2)
    sv = np.sqrt(np.clip(w, 0.0, None))
    top = float(sv.max()) if n else 0.0
    floor = tol.singular * top
    images: dict[int, np.ndarray] = {}
    used: list[np.ndarray] = []
    order = range(n - 1, -1, -1)  # largest singular value first
    for i in order:
        if sv[i] > floor:
            col = k @ v[:, i] / sv[i]
            images[i] = col
            used.append(col)
    basis = iter(range(n))
    for i in order:
        if i in images:
            continue
        while True:
            cand = np.zeros(n, dtype=complex)
            cand[next(basis)] = 1.0
            for c in used:
                cand = cand - c * (c.conj() @ cand)
            norm = float(np.linalg.norm(cand))
            if norm > 1e-8:
                images[i] = cand / norm
                used.append(images[i])
                break
    return sum(np.outer(images[i], v[:, i].conj()) for i in range(n))


def dilate_contraction(k, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unitary dilation W = [[K, L], [-L, K]] of a contraction, L = U (I - |K|^2)^(1/2).

    W acts on the doubled space and reproduces traces of A^s K B^t K* against
    zero-padded operators there.
    """
    k = np.asarray(k, dtype=complex)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise DimMismatch(f"expected square contraction, got {k.shape}")
    n = k.shape[0]
    top = float(np.linalg.svd(k, compute_uv=False).max()) if n else 0.0
    if top > 1.0 + 1e-12:
        raise NotAContraction(f"operator norm {top!r} exceeds 1")
    u = _polar_unitary(k, tol)
    gram = (k.conj().T @ k + (k.conj().T @ k).conj().T) / 2
    w, v = np.linalg.eigh(gram)
    w = np.clip(1.0 - np.clip(w, 0.0, None), 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    ell = u @ root
    return np.block([[k, ell], [-ell, k]])


def skew_information(rho, k, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr(K^2 rho) - Tr(sqrt(rho) K sqrt(rho) K) for a density matrix and Hermitian K.

    The commutator form -Tr([sqrt(rho), K]^2) equals exactly twice this quantity;
    both are computed and cross-checked to 1e-9 before returning the difference form.
    """
    rho = validate_density(rho, tol)
    k = require_hermitian(k, tol)
    diff = _skew_difference(rho, k, tol)
    comm = skew_information_commutator(rho, k, tol)
    scale = max(abs(diff), abs(comm), 1e-12)
    if abs(comm - 2.0 * diff) > 1e-9 * scale:
        raise CertificationError(
            f"commutator form {comm!r} is not twice the difference form {diff!r}"
        )
    return diff


def _skew_difference(rho: np.ndarray, k: np.ndarray, tol: Tolerances) -> float:
    root = matrix_power(rho, 0.5, tol)
    return float((np.trace(k @ k @ rho) - np.trace(root @ k @ root @ k)).real)


def skew_information_commutator(rho, k, tol: Tolerances = DEFAULT_TOL) -> float:
    """-Tr([sqrt(rho), K]^2); exactly twice the difference form for Hermitian K."""
    rho = validate_density(rho, tol)
    k = require_hermitian(k, tol)
    root = matrix_power(rho, 0.5, tol)
    comm = root @ k - k @ root
    return float(-np.trace(comm @ comm).real)
