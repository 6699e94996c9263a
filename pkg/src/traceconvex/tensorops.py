"""Tensor-product structure: Kronecker products, partial traces, factor permutations,
and signed-permutation group averages realizing the normalized partial trace."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadFactorIndex, DimMismatch, GroupTooLarge
from .linalg import DEFAULT_TOL, Tolerances

__all__ = [
    "TensorSpace",
    "LabeledMatrix",
    "kron",
    "kron_labeled",
    "partial_trace_dims",
    "partial_trace",
    "lift",
    "conjugate_factor",
    "permute_factors",
    "SignedPermutation",
    "signed_permutations",
    "signed_perm_group_size",
    "average_over_signed_perms",
    "sampled_average_over_signed_perms",
]

MAX_EXHAUSTIVE_FACTOR = 4  # 2^4 * 4! = 384 elements


@dataclass(frozen=True)
class TensorSpace:
    """Factor dimensions (d1, d2[, d3]) attached to a matrix on their product."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= len(self.factors) <= 3:
            raise DimMismatch(f"expected 1 to 3 factors, got {self.factors}")
        if any(int(d) != d or d < 1 for d in self.factors):
            raise DimMismatch(f"factor dims must be positive integers: {self.factors}")
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))

    @property
    def dim(self) -> int:
        return int(np.prod(self.factors))


@dataclass(frozen=True)
class LabeledMatrix:
    """A square matrix together with the factor structure of its index space."""

    space: TensorSpace
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.space.dim:
            raise DimMismatch(
                f"matrix dim {m.shape[0]} != product of factors {self.space.factors}"
            )
        object.__setattr__(self, "mat", m)

    @property
    def factors(self) -> tuple[int, ...]:
        return self.space.factors

    @property
    def dim(self) -> int:
        return self.space.dim


def labeled(mat, factors) -> LabeledMatrix:
    return LabeledMatrix(TensorSpace(tuple(factors)), mat)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_labeled(a, b) -> LabeledMatrix:
    """Kronecker product labeled with the two factor dimensions."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return labeled(np.kron(a, b), (a.shape[0], b.shape[0]))


def _check_axis(dims, axis):
    if not 0 <= axis < len(dims):
        raise BadFactorIndex(f"factor index {axis + 1} outside 1..{len(dims)}")


def partial_trace_dims(mat, dims, axis: int) -> np.ndarray:
    """Trace out the (0-based) axis of a matrix on the product of dims."""
    dims = tuple(int(d) for d in dims)
    _check_axis(dims, axis)
    mat = np.asarray(mat, dtype=complex)
    k = len(dims)
    arr = mat.reshape(*dims, *dims)
    out = np.trace(arr, axis1=axis, axis2=axis + k)
    rest = [d for i, d in enumerate(dims) if i != axis]
    n = int(np.prod(rest)) if rest else 1
    return out.reshape(n, n)


def partial_trace(lm: LabeledMatrix, factor: int) -> LabeledMatrix:
    """Trace out the given factor (1-based, leftmost = 1) of a labeled matrix.

    Satisfies Tr[(result) B] = Tr[lm.mat * lift(B)] for every B on the remaining
    space, and preserves the trace.
    """
    dims = lm.factors
    _check_axis(dims, factor - 1)
    rest = tuple(d for i, d in enumerate(dims) if i != factor - 1)
    out = partial_trace_dims(lm.mat, dims, factor - 1)
    return labeled(out, rest if rest else (1,))


def lift(op, dims, slot: int) -> np.ndarray:
    """I (x) ... (x) op (x) ... (x) I with op at the (0-based) slot of dims."""
    dims = tuple(int(d) for d in dims)
    _check_axis(dims, slot)
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[slot], dims[slot]):
        raise DimMismatch(f"operator shape {op.shape} != factor dim {dims[slot]}")
    left = int(np.prod(dims[:slot])) if slot else 1
    right = int(np.prod(dims[slot + 1:])) if slot + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def conjugate_factor(lm: LabeledMatrix, op, factor: int) -> LabeledMatrix:
    """Conjugate by (I (x) op (x) I): returns E* A E with op in the given 1-based slot."""
    e = lift(op, lm.factors, factor - 1)
    return labeled(e.conj().T @ lm.mat @ e, lm.factors)


def permute_factors(lm: LabeledMatrix, order: tuple[int, ...]) -> LabeledMatrix:
    """Relabel the matrix with factors reordered per `order` (1-based source indices)."""
    dims = lm.factors
    k = len(dims)
    if sorted(order) != list(range(1, k + 1)):
        raise BadFactorIndex(f"order {order} is not a permutation of 1..{k}")
    src = [i - 1 for i in order]
    arr = lm.mat.reshape(*dims, *dims)
    arr = arr.transpose(src + [i + k for i in src])
    new_dims = tuple(dims[i] for i in src)
    n = int(np.prod(new_dims))
    return labeled(arr.reshape(n, n), new_dims)


@dataclass(frozen=True)
class SignedPermutation:
    """W e_j = (-1)^bits[j] e_perm[j]; perm and bits are 0-based tuples."""

    perm: tuple[int, ...]
    bits: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        n = len(self.perm)
        w = np.zeros((n, n))
        for j, (pj, bj) in enumerate(zip(self.perm, self.bits)):
            w[pj, j] = -1.0 if bj else 1.0
        return w


def signed_perm_group_size(n: int) -> int:
    return (2 ** n) * math.factorial(n)


def signed_permutations(n: int):
    """Yield every signed permutation on n letters exactly once (n <= 4)."""
    if n > MAX_EXHAUSTIVE_FACTOR:
        raise GroupTooLarge(
            f"exhaustive enumeration capped at n = {MAX_EXHAUSTIVE_FACTOR} "
            f"(2^n n! = {signed_perm_group_size(n)} for n = {n}); "
            "use sampled_average_over_signed_perms instead"
        )
    for perm in itertools.permutations(range(n)):
        for bits in itertools.product((0, 1), repeat=n):
            yield SignedPermutation(perm=perm, bits=bits)


def average_over_signed_perms(lm: LabeledMatrix, factor: int = 2) -> LabeledMatrix:
    """Exact group average (1/|G|) sum_W E(W)* A E(W) over the traced-out slot.

    Equals (1/n) (Tr_factor A) (x) I placed back at that slot; the commutant of the
    signed permutations contains only multiples of the identity, which is what makes
    the average collapse to the normalized partial trace.
    """
    dims = lm.factors
    _check_axis(dims, factor - 1)
    n = dims[factor - 1]
    if n > MAX_EXHAUSTIVE_FACTOR:
        raise GroupTooLarge(f"factor dim {n} > {MAX_EXHAUSTIVE_FACTOR}")
    acc = np.zeros_like(lm.mat)
    count = 0
    for sp in signed_permutations(n):
        e = lift(sp.matrix(), dims, factor - 1)
        acc += e.conj().T @ lm.mat @ e
        count += 1
    return labeled(acc / count, dims)


def sampled_average_over_signed_perms(
    lm: LabeledMatrix,
    factor: int = 2,
    seed: int = 0,
    draws: int | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> LabeledMatrix:
    """Seeded Monte-Carlo stand-in for the exact average when the factor dim exceeds 4.

    Defaults to 10 * 2^n * n! uniform draws; the estimate carries O(1/sqrt(draws))
    error and is meant for exploratory runs only, never for certification.
    """
    del tol
    dims = lm.factors
    _check_axis(dims, factor - 1)
    n = dims[factor - 1]
    if draws is None:
        draws = 10 * signed_perm_group_size(n)
    rng = np.random.default_rng(seed)
    acc = np.zeros_like(lm.mat)
    for _ in range(draws):
        perm = tuple(rng.permutation(n))
        bits = tuple(int(b) for b in rng.integers(0, 2, size=n))
        e = lift(SignedPermutation(perm, bits).matrix(), dims, factor - 1)
        acc += e.conj().T @ lm.mat @ e
    return labeled(acc / draws, dims)
