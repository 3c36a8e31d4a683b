"""Adjacency spectra and the Ramanujan certificate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, eigsh

from .cayley import CayleyGraph, two_coloring

DENSE_LIMIT = 5000


def adjacency(G: CayleyGraph) -> sp.csr_matrix:
    n, k = G.adj.shape
    rows = np.repeat(np.arange(n), k)
    return sp.csr_matrix((np.ones(n * k), (rows, G.adj.reshape(-1))), shape=(n, n))


def spectrum(G: CayleyGraph | np.ndarray) -> np.ndarray:
    """All adjacency eigenvalues, ascending (dense solver)."""
    A = G if isinstance(G, np.ndarray) else adjacency(G)
    n = A.shape[0]
    if n > DENSE_LIMIT:
        raise MemoryError(f"dense spectrum of a {n}-vertex graph refused (limit {DENSE_LIMIT})")
    A = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    return np.linalg.eigh(A)[0]


def second_eigenvalue(A) -> float:
    """Largest eigenvalue strictly below the top one (which is k for a regular graph)."""
    ev = spectrum(A)
    return float(ev[-2])


@dataclass
class SpectralReport:
    k: int
    n: int
    lambda2: float  # largest eigenvalue below k
    nontrivial_radius: float  # max |lambda| over nontrivial eigenvalues
    bound: float  # 2 sqrt(k - 1)
    bipartite: bool
    symmetric_spectrum: bool | None
    method: str
    residual: float

    @property
    def ramanujan(self) -> bool:
        return self.nontrivial_radius <= self.bound + 1e-6


def spectral_report(G: CayleyGraph, tol: float = 1e-8) -> SpectralReport:
    """Ramanujan check; the eigenvalues +-k of a connected (bipartite) graph are trivial."""
    k = G.degree
    bip = two_coloring(G) is not None
    bound = 2 * np.sqrt(k - 1)
    if G.n <= DENSE_LIMIT:
        ev = spectrum(G)
        rest = ev[:-1]
        if bip:
            rest = rest[1:]
        pairing = bool(np.allclose(ev, -ev[::-1], atol=1e-8)) if bip else None
        return SpectralReport(k, G.n, float(ev[-2]), float(np.abs(rest).max()), bound, bip, pairing, "dense", 0.0)
    A = adjacency(G)
    n = G.n
    ones = np.full(n, 1 / np.sqrt(n))
    sign = None
    if bip:
        par = two_coloring(G)
        sign = np.where(par == 0, 1.0, -1.0) / np.sqrt(n)

    def deflated(x):
        y = A @ x - k * ones * (ones @ x)
        if sign is not None:
            y += k * sign * (sign @ x)
        return y

    op = LinearOperator((n, n), matvec=deflated, dtype=float)
    vals, vecs = eigsh(op, k=2, which="LM", tol=tol)
    i = int(np.argmax(np.abs(vals)))
    v = vecs[:, i]
    residual = float(np.linalg.norm(deflated(v) - vals[i] * v))
    top, _ = eigsh(op, k=1, which="LA", tol=tol)
    return SpectralReport(k, n, float(top[0]), float(abs(vals[i])), bound, bip, None, "eigsh", residual)


__all__ = ["DENSE_LIMIT", "SpectralReport", "adjacency", "second_eigenvalue", "spectral_report", "spectrum"]
