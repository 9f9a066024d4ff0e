"""Seeded random draws shared by the optimizers and the test-suite."""

from __future__ import annotations

import math

import numpy as np

from .operators import HermitianOperator, ProductVector

__all__ = [
    "random_density",
    "random_hermitian",
    "random_product_mixture",
    "random_product_vector",
    "random_unit_vector",
    "rng_for",
]


def rng_for(seed, stream=0):
    """Deterministic generator keyed by (seed, stream index)."""
    return np.random.default_rng([int(seed) % 2**63, int(stream)])


def random_unit_vector(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_product_vector(rng, dims):
    d_a, d_b = dims
    return ProductVector(random_unit_vector(rng, d_a), random_unit_vector(rng, d_b))


def random_hermitian(rng, dims, scale=1.0):
    side = math.prod(dims)
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    return HermitianOperator(dims, scale * (g + g.conj().T) / 2.0)


def random_density(rng, dims):
    """Unit-trace PSD matrix (Hilbert-Schmidt style G G^dag / tr)."""
    side = math.prod(dims)
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    rho = g @ g.conj().T
    return HermitianOperator(dims, rho / rho.trace().real)


def random_product_mixture(rng, dims, n_terms, weights=None):
    """Separable matrix: positive combination of product projectors."""
    side = math.prod(dims)
    out = np.zeros((side, side), dtype=np.complex128)
    if weights is None:
        weights = rng.uniform(0.5, 1.5, size=n_terms)
    for k in range(n_terms):
        w = random_product_vector(rng, dims).kron()
        out += weights[k] * np.outer(w, w.conj())
    return HermitianOperator(dims, out)
