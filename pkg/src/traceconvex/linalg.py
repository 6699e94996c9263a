"""Dense Hermitian matrix arithmetic: spectral functions, Schatten norms, tolerances.

Everything downstream funnels through `matrix_power` and `schatten_norm`, so the
eigenvalue clamping and singularity conventions live here in one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NonHermitianInput,
    NotADensityMatrix,
    NotPositiveSemidefinite,
    SingularPower,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "hermitian_deviation",
    "require_hermitian",
    "eigh",
    "validate_psd",
    "validate_density",
    "matrix_power",
    "support_power",
    "support_projector",
    "schatten_norm",
    "trace_x_log_x",
]


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances shared by the whole call chain.

    herm     -- allowed |A - A*| deviation, relative to max |entry|
    psd      -- eigenvalue clamp window [-psd*lmax, 0), relative to largest eigenvalue
    singular -- strict-positivity floor, relative to largest eigenvalue
    gap      -- midpoint-gap tolerance, relative to the scale of the evaluations
    """

    herm: float = 1e-12
    psd: float = 1e-10
    singular: float = 1e-12
    gap: float = 1e-9

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(
            herm=self.herm * factor,
            psd=self.psd * factor,
            singular=self.singular * factor,
            gap=self.gap * factor,
        )


DEFAULT_TOL = Tolerances()

_TINY = 1e-300  # guards 0/0 in relative comparisons


def _as_complex(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_deviation(a) -> float:
    """max |A - A*| relative to max |entry| (0 for the zero matrix)."""
    a = _as_complex(a)
    scale = np.abs(a).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(a - a.conj().T).max() / scale)


def require_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate A = A* within tol.herm and return the symmetrized copy."""
    a = _as_complex(a)
    dev = hermitian_deviation(a)
    if dev > tol.herm:
        raise NonHermitianInput(f"Hermitian deviation {dev:.3e} exceeds {tol.herm:.3e}")
    return (a + a.conj().T) / 2


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, fn) -> np.ndarray:
        """U diag(fn(lambda)) U*, hermitized."""
        v = self.eigenvectors
        return _hermitize((v * fn(self.eigenvalues)) @ v.conj().T)


def eigh(a, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix."""
    a = require_hermitian(a, tol)
    w, v = np.linalg.eigh(a)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def _clamped_psd_eigenvalues(w: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Clamp round-off negatives to 0; eigenvalues below the window are a hard error."""
    lmax = float(np.abs(w).max()) if w.size else 0.0
    floor = -tol.psd * lmax
    wmin = float(w.min()) if w.size else 0.0
    if wmin < floor:
        raise NotPositiveSemidefinite(
            f"eigenvalue {wmin:.6e} below clamp window {floor:.6e}"
        )
    return np.clip(w, 0.0, None)


def validate_psd(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate positive semidefiniteness and return the eigenvalue-clamped matrix."""
    dec = eigh(a, tol)
    w = _clamped_psd_eigenvalues(dec.eigenvalues, tol)
    return _hermitize((dec.eigenvectors * w) @ dec.eigenvectors.conj().T)


def validate_density(rho, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate a density matrix (PSD, unit trace within 1e-10)."""
    rho = validate_psd(rho, tol)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-10:
        raise NotADensityMatrix(f"trace {tr!r} differs from 1 beyond 1e-10")
    return rho


def _power_eigenvalues(w: np.ndarray, s: float, tol: Tolerances, pseudo: bool) -> np.ndarray:
    w = _clamped_psd_eigenvalues(w, tol)
    lmax = float(w.max()) if w.size else 0.0
    floor = tol.singular * lmax
    if s == 0.0:
        return (w > floor).astype(float)
    if s < 0.0:
        small = w <= floor
        if small.any() and not pseudo:
            raise SingularPower(
                f"negative power {s} of a matrix with eigenvalue <= {floor:.3e}"
            )
        out = np.zeros_like(w)
        np.power(w, s, where=~small, out=out)
        return out
    # 0**s == 0 for s > 0; silence the 0**fractional warning path explicitly
    out = np.zeros_like(w)
    np.power(w, s, where=w > 0, out=out)
    return out


def matrix_power(a, s: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A^s for PSD A via the spectral calculus.

    s = 0 returns the support projector; s < 0 requires all eigenvalues above
    the relative floor tol.singular * lmax (SingularPower otherwise).
    """
    dec = eigh(a, tol)
    ws = _power_eigenvalues(dec.eigenvalues, float(s), tol, pseudo=False)
    return dec.apply(lambda _: ws)


def support_power(a, s: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A^s on the support of A: eigenvalues at numerical zero stay zero for every s."""
    dec = eigh(a, tol)
    ws = _power_eigenvalues(dec.eigenvalues, float(s), tol, pseudo=True)
    return dec.apply(lambda _: ws)


def support_projector(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the support (range) of PSD A."""
    return matrix_power(a, 0.0, tol)


def schatten_norm(a, q: float) -> float:
    """(sum sigma_i^q)^(1/q) over singular values; q = inf gives the operator norm.

    A norm for q >= 1; still evaluated for 0 < q < 1 (quasi-norm).
    """
    a = _as_complex(a)
    if not (q > 0.0) and not np.isinf(q):
        raise ValueError(f"Schatten exponent must be positive or inf, got {q}")
    if hermitian_deviation(a) <= 1e-10:
        sv = np.abs(np.linalg.eigvalsh(_hermitize(a)))
    else:
        sv = np.linalg.svd(a, compute_uv=False)
    top = float(sv.max()) if sv.size else 0.0
    if np.isinf(q):
        return top
    if top == 0.0:
        return 0.0
    # factor out the largest value so big q cannot overflow
    return top * float(((sv / top) ** q).sum() ** (1.0 / q))


def trace_x_log_x(a, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr(A ln A) for PSD A with the 0 ln 0 = 0 convention."""
    w = np.linalg.eigvalsh(require_hermitian(a, tol))
    w = _clamped_psd_eigenvalues(w, tol)
    lmax = float(w.max()) if w.size else 0.0
    live = w > tol.singular * lmax
    if not live.any():
        return 0.0
    wl = w[live]
    return float((wl * np.log(wl)).sum())
