"""Seeded random matrix ensembles used by the certification campaigns.

Per-trial generators are derived from (master_seed, trial_index) so trials are
reproducible independently of execution order or parallelism.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "trial_seed",
    "rng_for_trial",
    "complex_gaussian",
    "rand_hermitian",
    "rand_psd",
    "rand_density",
    "rand_unitary",
    "rand_contraction",
    "rand_unit_vector",
]


def trial_seed(master_seed: int, index: int) -> int:
    """Deterministic 32-bit seed for one trial of a campaign."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1)[0])


def rng_for_trial(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed(master_seed, index))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = complex_gaussian(rng, (n, n))
    return (g + g.conj().T) / 2


def rand_psd(rng: np.random.Generator, n: int, shift: float = 0.0) -> np.ndarray:
    """Wishart-style G G* for complex Gaussian G, optionally shifted by shift * I."""
    g = complex_gaussian(rng, (n, n))
    m = g @ g.conj().T
    if shift:
        m = m + shift * np.eye(n)
    return (m + m.conj().T) / 2


def rand_density(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit-trace Wishart sample (Hilbert-Schmidt ensemble)."""
    m = rand_psd(rng, n)
    return m / float(np.trace(m).real)


def rand_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar unitary via QR with the phase convention fixed."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def rand_contraction(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random matrix rescaled so the operator norm lies in (0, 1]."""
    g = complex_gaussian(rng, (n, n))
    top = np.linalg.svd(g, compute_uv=False).max()
    return g * (rng.uniform(0.2, 1.0) / top)


def rand_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = complex_gaussian(rng, n)
    return v / np.linalg.norm(v)
