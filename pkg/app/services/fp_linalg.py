"""Linear algebra over the prime field F_p.

Arithmetic runs on ``galois`` field arrays; results are handed back as plain
int64 numpy arrays with entries in ``0..p-1``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Optional

import galois
import numpy as np


@lru_cache(maxsize=None)
def field(p: int):
    return galois.GF(p)


def to_field(A, p: int):
    return field(p)(np.asarray(A, dtype=np.int64) % p)


def _plain(A) -> np.ndarray:
    return np.asarray(A.view(np.ndarray), dtype=np.int64)


def row_space(A, p: int, dim: int) -> np.ndarray:
    """Reduced row-echelon basis of the row space of ``A``, zero rows dropped."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0 or dim == 0:
        return np.zeros((0, dim), dtype=np.int64)
    A = A.reshape(-1, dim)
    R = _plain(to_field(A, p).row_reduce())
    return R[R.any(axis=1)]


def rank(A, p: int) -> int:
    if np.size(A) == 0:
        return 0
    return int(np.linalg.matrix_rank(to_field(A, p)))


def is_invertible(A, p: int) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix is not square: {A.shape}")
    if A.shape[0] == 0:
        return A.copy()
    try:
        return _plain(np.linalg.inv(to_field(A, p)))
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"matrix is singular mod {p}") from exc


def all_vectors(p: int, dim: int, skip_zero: bool = True) -> Iterator[np.ndarray]:
    """Every vector of F_p^dim in lexicographic order."""
    for entries in itertools.product(range(p), repeat=dim):
        if skip_zero and not any(entries):
            continue
        yield np.array(entries, dtype=np.int64)


class Subspace:
    """Subspace of F_p^dim held as its reduced row-echelon basis."""

    def __init__(self, p: int, dim: int, vectors: Optional[np.ndarray] = None):
        self.p = p
        self.dim = dim
        self.rows = row_space(vectors if vectors is not None else np.zeros((0, dim)), p, dim)

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def full(self) -> bool:
        return len(self) == self.dim

    def join(self, vectors: np.ndarray) -> "Subspace":
        return Subspace(self.p, self.dim, np.vstack([self.rows, np.asarray(vectors, dtype=np.int64).reshape(-1, self.dim)]))

    def matrix(self) -> np.ndarray:
        return self.rows
