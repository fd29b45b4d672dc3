"""Quantum cohomology of partial flag varieties: Schubert basis over the
minimal coset representatives, quantum Chevalley multiplication by the
divisor classes, the first Chern class, and its operator spectrum at numeric
quantum parameters.

The general (non-Grassmannian) quantum Chevalley rule used here: for each
transposition t_{ab} with a <= n_j < b, the quantum part contributes
q^{d(a,b)} sigma_{w'} where d(a,b)_m = 1 iff a <= n_m < b and w' is the
minimal representative of w t_{ab} W_P, subject to
l(w') = l(w) + 1 - sum_m d_m (n_{m+1} - n_{m-1}).  It is cross-checked
against the Grassmannian quantum Pieri rule, the classical limit and the
mirror spectrum tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinat import FlagShape, Permutation, is_minimal_rep, min_rep_of, minimal_reps
from .errors import NotMinimalRep
from .exactalg import MPoly, VarTable, complex_to_json, eigenvalues
from .schubring import QHClass, _length_jump

__all__ = [
    "partial_q_table",
    "PartialRing",
    "partial_ring",
    "chevalley_multiply",
    "c1_class",
    "c1_matrix",
    "c1_spectrum",
    "spectrum_report",
]


@lru_cache(maxsize=None)
def partial_q_table(shape: FlagShape) -> VarTable:
    """q_{n_1}..q_{n_r}, with weights the Fano degrees n_{j+1} - n_{j-1}."""
    return VarTable.make([
        (f"q{shape.nj(j)}", "q", shape.qdegs[j - 1]) for j in range(1, shape.r + 1)
    ])


def _chevalley_terms(w: Permutation, j: int, shape: FlagShape):
    """Yield (target permutation, q-exponent vector) of sigma_{s_{n_j}} * sigma_w."""
    n, r = shape.n, shape.r
    nj = shape.nj(j)
    ol = w.oneline
    qdegs = shape.qdegs
    for a in range(1, nj + 1):  # 1-based a <= n_j < b
        for b in range(nj + 1, n + 1):
            jump = _length_jump(ol, a - 1, b - 1)
            if jump == 1:
                wt = w.times_transposition(a - 1, b - 1)
                if is_minimal_rep(wt, shape):
                    yield wt, (0,) * r
            d = tuple(1 if a <= shape.nj(m) < b else 0 for m in range(1, r + 1))
            drop = sum(dm * qd for dm, qd in zip(d, qdegs))
            wmin = min_rep_of(w.times_transposition(a - 1, b - 1), shape)
            if wmin.length == w.length + 1 - drop:
                yield wmin, d


def chevalley_multiply(w: Permutation, j: int, shape: FlagShape) -> QHClass:
    """sigma_{s_{n_j}} * sigma_w in QH*(Fl(n_bullet)) for w in W^P."""
    if not is_minimal_rep(w, shape):
        raise NotMinimalRep(f"{w} is not a minimal representative for {shape}")
    qt = partial_q_table(shape)
    terms: dict[Permutation, MPoly] = {}
    for wt, d in _chevalley_terms(w, j, shape):
        add = MPoly.monomial(qt, d)
        terms[wt] = terms.get(wt, MPoly.zero(qt)) + add
    return QHClass(shape, terms)


@dataclass(frozen=True)
class PartialRing:
    """Schubert basis and divisor multiplication matrices for one shape."""

    shape: FlagShape
    basis: tuple[Permutation, ...]
    chevalley_cols: tuple  # per j: dict col -> ((row, qexp), ...)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, w: Permutation) -> int:
        return self.basis.index(w)

    def chevalley_matrix(self, j: int, q) -> np.ndarray:
        """Numeric matrix of multiplication by sigma_{s_{n_j}} at the given q."""
        q = [complex(v) for v in q]
        dim = self.dim
        M = np.zeros((dim, dim), dtype=complex)
        for col, entries in self.chevalley_cols[j - 1].items():
            for row, d in entries:
                val = 1.0 + 0j
                for dm, qv in zip(d, q):
                    if dm:
                        val *= qv ** dm
                M[row, col] += val
        return M


@lru_cache(maxsize=None)
def partial_ring(shape: FlagShape) -> PartialRing:
    basis = minimal_reps(shape)
    index = {w: i for i, w in enumerate(basis)}
    cols = []
    for j in range(1, shape.r + 1):
        colmap: dict[int, tuple] = {}
        for ci, w in enumerate(basis):
            colmap[ci] = tuple((index[wt], d) for wt, d in _chevalley_terms(w, j, shape))
        cols.append(colmap)
    return PartialRing(shape=shape, basis=basis, chevalley_cols=tuple(cols))


def c1_class(shape: FlagShape) -> QHClass:
    """First Chern class: sum_j (n_{j+1} - n_{j-1}) sigma_{s_{n_j}}."""
    qt = partial_q_table(shape)
    terms = {}
    for j in range(1, shape.r + 1):
        nj = shape.nj(j)
        w = Permutation.identity(shape.n).times_s(nj)
        terms[w] = MPoly.const(qt, Fraction(shape.nj(j + 1) - shape.nj(j - 1)))
    return QHClass(shape, terms)


def c1_matrix(shape: FlagShape, q) -> np.ndarray:
    """Matrix of quantum multiplication by c_1 at numeric q on the Schubert basis."""
    ring = partial_ring(shape)
    M = np.zeros((ring.dim, ring.dim), dtype=complex)
    for j in range(1, shape.r + 1):
        M += (shape.nj(j + 1) - shape.nj(j - 1)) * ring.chevalley_matrix(j, q)
    return M


def c1_spectrum(shape: FlagShape, q) -> np.ndarray:
    """Eigenvalues (with multiplicity) of quantum multiplication by c_1."""
    q = [complex(v) for v in q]
    if any(v == 0 for v in q):
        raise ValueError("all quantum parameters must be nonzero")
    return eigenvalues(c1_matrix(shape, q))


def spectrum_report(shape: FlagShape, q) -> dict:
    vals = sorted(c1_spectrum(shape, q), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return {
        "shape": shape.to_string(),
        "q": [complex_to_json(v) for v in q],
        "eigenvalues": [complex_to_json(v) for v in vals],
        "dim": partial_ring(shape).dim,
    }
