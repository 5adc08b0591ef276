"""Character tables by the class-sum method, faithfulness decisions and explicit irreducible matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import linalg
from scipy.spatial.distance import pdist

from app.core.config import settings
from app.core.exceptions import CharacterTableError, RepresentationError
from app.core.logging import get_logger
from app.services.group_core import ConjugacyClasses, ElementAction, FiniteGroup, Subgroup

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    classes: ConjugacyClasses
    degrees: tuple
    table: np.ndarray
    tolerance: float = 1e-8

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array(self.classes.sizes, dtype=np.float64)

    def values(self, row: int) -> np.ndarray:
        """The character of ``row`` on every element."""
        return self.table[row, self.classes.class_of]

    def kernel(self, row: int) -> Subgroup:
        values = self.values(row)
        return Subgroup.from_mask(np.abs(values - self.degrees[row]) < settings.KERNEL_TOLERANCE)

    def row_orthogonality_error(self) -> float:
        n = self.group.order
        gram = (self.table * self.class_sizes) @ self.table.conj().T / n
        return float(np.max(np.abs(gram - np.eye(len(self.degrees)))))

    def column_orthogonality_error(self) -> float:
        n = self.group.order
        sizes = self.class_sizes
        gram = self.table.conj().T @ self.table * np.sqrt(np.outer(sizes, sizes)) / n
        return float(np.max(np.abs(gram - np.eye(len(sizes)))))

    def verify(self) -> None:
        n = self.group.order
        if self.table.shape != (len(self.classes), len(self.classes)):
            raise CharacterTableError("table is not square", {"shape": list(self.table.shape)})
        if sum(d * d for d in self.degrees) != n:
            raise CharacterTableError("squared degrees do not sum to the group order", {"degrees": list(self.degrees)})
        if np.max(np.abs(self.table[:, 0] - np.array(self.degrees))) > self.tolerance:
            raise CharacterTableError("identity column differs from the degrees")
        for name, err in (("row", self.row_orthogonality_error()), ("column", self.column_orthogonality_error())):
            if err > self.tolerance:
                raise CharacterTableError(f"{name} orthogonality off by {err:.3e}", {"error": err})

    def to_dict(self) -> Dict:
        return {"degrees": list(self.degrees), "class_sizes": self.classes.sizes}


def class_sum_matrix(G: FiniteGroup, classes: ConjugacyClasses, weights: np.ndarray) -> np.ndarray:
    """sum_j weights[j] * a[j], where a[j, l, m] = #{x in C_j : x^-1 z_m in C_l} for a fixed z_m in C_m.

    Classes are folded in one at a time, so only a k x k buffer is held.
    """
    k = len(classes)
    reps = np.array([c[0] for c in classes.classes], dtype=np.int64)
    columns = np.arange(k)
    M = np.zeros((k, k), dtype=np.result_type(np.asarray(weights), np.float64))
    for j, cls in enumerate(classes.classes):
        if weights[j] == 0:
            continue
        landing = classes.class_of[G.mul[np.ix_(G.inv[np.array(cls)], reps)]]
        np.add.at(M, (landing, np.broadcast_to(columns, landing.shape)), weights[j])
    return M


def character_table(G: FiniteGroup, tolerance: Optional[float] = None) -> CharacterTable:
    """Irreducible characters from common eigenvectors of the class-sum matrices."""
    tolerance = tolerance if tolerance is not None else settings.TOLERANCE
    classes = G.conjugacy_classes
    sizes = np.array(classes.sizes, dtype=np.float64)
    n, k = G.order, len(classes)
    rng = np.random.default_rng(settings.RANDOM_SEED)

    for attempt in range(settings.EIGEN_RETRIES):
        M = class_sum_matrix(G, classes, rng.standard_normal(k))
        eigenvalues, vectors = np.linalg.eig(M)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))
        gaps = np.abs(eigenvalues[:, None] - eigenvalues[None, :]) + np.eye(k) * scale
        if k == 1 or gaps.min() > 1e-6 * scale:
            break
        logger.debug(f"Class-sum eigenvalues not separated for '{G.name}' (attempt {attempt + 1}).")
    else:
        raise CharacterTableError(
            f"eigenvalues did not separate after {settings.EIGEN_RETRIES} attempts", {"group": G.name}
        )

    w = vectors / vectors[0, :]
    rows = []
    for r in range(k):
        wr = w[:, r]
        degree = np.sqrt(n / np.sum(np.abs(wr) ** 2 / sizes))
        d = int(round(degree))
        if abs(degree - d) > 1e-4:
            raise CharacterTableError(f"non-integral degree {degree:.6f}", {"group": G.name})
        rows.append((d, d * wr / sizes))

    def sort_key(item):
        d, chi = item
        rounded = np.round(chi, 6)
        return (d, tuple(v for z in rounded for v in (-z.real, -z.imag)))

    rows.sort(key=sort_key)
    table = CharacterTable(
        group=G,
        classes=classes,
        degrees=tuple(d for d, _ in rows),
        table=np.array([chi for _, chi in rows], dtype=np.complex128).reshape(k, k),
        tolerance=tolerance,
    )
    table.verify()
    logger.debug(f"Character table of '{G.name}': degrees {table.degrees}.")
    return table


def kernel_core(action: ElementAction, K: Subgroup) -> Subgroup:
    """Intersection of the images of K under the acting group: the union of orbits inside K."""
    orbits = action.orbits
    inside = np.bincount(orbits.class_of, weights=K.mask(action.group.order).astype(np.float64), minlength=len(orbits))
    full = np.isclose(inside, np.array(orbits.sizes))
    return Subgroup.from_mask(full[orbits.class_of])


def has_faithful_irreducible(G: FiniteGroup, autos=None, table: Optional[CharacterTable] = None) -> Optional[int]:
    """First row whose kernel (or kernel core under ``autos``) is trivial."""
    table = table or character_table(G)
    action = getattr(autos, "action", autos)
    for row in range(len(table.degrees)):
        K = table.kernel(row)
        if action is not None:
            K = kernel_core(action, K)
        if K.order == 1:
            return row
    return None


@dataclass(frozen=True, eq=False)
class IrrepMatrices:
    row: int
    degree: int
    images: np.ndarray
    character: np.ndarray
    commutant_dimension: int
    faithful: bool

    def to_json_pairs(self) -> List[List[List[List[float]]]]:
        """Row-major [re, im] pairs, 12 significant digits."""
        def pair(z: complex) -> List[float]:
            return [float(f"{z.real:.12g}"), float(f"{z.imag:.12g}")]

        return [[[pair(z) for z in row] for row in matrix] for matrix in self.images]

    def to_dict(self) -> Dict:
        return {
            "row": self.row,
            "degree": self.degree,
            "faithful": self.faithful,
            "commutant_dimension": self.commutant_dimension,
            "matrices": self.to_json_pairs(),
        }


def scalar_distance(matrix: np.ndarray) -> float:
    """Frobenius distance of the normalized matrix from the line of scalar matrices."""
    matrix = np.asarray(matrix)
    norm = np.linalg.norm(matrix)
    if norm == 0:
        return 0.0
    d = matrix.shape[0]
    c = np.trace(matrix) / d
    return float(np.linalg.norm(matrix - c * np.eye(d)) / norm)


def commutant_dimension(images: np.ndarray, generators) -> int:
    d = images.shape[1]
    eye = np.eye(d)
    system = np.vstack([np.kron(eye, images[g]) - np.kron(images[g].T, eye) for g in generators]) if len(generators) else np.zeros((1, d * d))
    return int(linalg.null_space(system, rcond=1e-9).shape[1])


def _split(T_r: np.ndarray, d: int):
    eigenvalues, vectors = linalg.eigh(T_r)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    groups = eigenvalues.reshape(d, d)
    if np.max(groups.max(axis=1) - groups.min(axis=1)) > 1e-7 * scale:
        return None
    if d > 1 and np.min(groups[1:, 0] - groups[:-1, -1]) < 1e-4 * scale:
        return None
    return vectors[:, :d]


def construct_irreducible_rep(
    G: FiniteGroup,
    row: int,
    table: Optional[CharacterTable] = None,
    tolerance: Optional[float] = None,
    max_order: Optional[int] = None,
) -> IrrepMatrices:
    """Explicit unitary matrices for the irreducible character ``row``.

    Projects the regular representation onto the isotypic component, splits the
    multiplicity space with a random Hermitian element of the commutant, and
    certifies the block: commutant dimension 1, unitarity, multiplicativity and
    traces.
    """
    n = G.order
    max_order = max_order or settings.REP_MAX_ORDER
    if n > max_order:
        raise RepresentationError(f"order {n} exceeds {max_order}", {"order": n})
    table = table or character_table(G)
    if not 0 <= row < len(table.degrees):
        raise RepresentationError(f"no character row {row}", {"rows": len(table.degrees)})
    d = table.degrees[row]
    chi = table.values(row)
    mul = G.mul.astype(np.int64)
    inv = G.inv.astype(np.int64)

    projector = (d / n) * np.conj(chi[mul[:, inv]])
    eigenvalues, vectors = linalg.eigh(projector)
    Q = vectors[:, eigenvalues > 0.5]
    if Q.shape[1] != d * d:
        raise RepresentationError(f"isotypic component has dimension {Q.shape[1]}, expected {d * d}")

    rng = np.random.default_rng(settings.RANDOM_SEED)
    W = None
    for attempt in range(settings.SPLIT_RETRIES):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c = a + np.conj(a[inv])
        T_full = c[mul[inv[:, None], np.arange(n)[None, :]]]
        W = _split(Q.conj().T @ T_full @ Q, d)
        if W is not None:
            break
        logger.debug(f"Commutant split failed for '{G.name}' row {row} (attempt {attempt + 1}).")
    if W is None:
        raise RepresentationError(f"commutant did not split after {settings.SPLIT_RETRIES} attempts", {"row": row})

    B = Q @ W
    images = np.einsum("yi,gyj->gij", B.conj(), B[mul[inv, :]])

    tol = tolerance if tolerance is not None else settings.TOLERANCE
    eye = np.eye(d)
    if np.max(np.abs(np.einsum("gji,gjk->gik", images.conj(), images) - eye)) > tol:
        raise RepresentationError("images are not unitary")
    if n <= settings.ASSOCIATIVITY_EXHAUSTIVE_LIMIT:
        x, y = np.divmod(np.arange(n * n), n)
    else:
        x, y = rng.integers(0, n, size=(2, settings.ASSOCIATIVITY_SAMPLES))
    if np.max(np.abs(images[x] @ images[y] - images[mul[x, y]])) > tol:
        raise RepresentationError("images are not multiplicative")
    if np.max(np.abs(np.einsum("gii->g", images) - chi)) > settings.KERNEL_TOLERANCE:
        raise RepresentationError("traces do not match the character")
    dim = commutant_dimension(images, G.generators)
    if dim != 1:
        raise RepresentationError(f"commutant has dimension {dim}", {"dimension": dim})

    flat = images.reshape(n, -1)
    faithful = bool(n == 1 or pdist(np.hstack([flat.real, flat.imag])).min() > settings.KERNEL_TOLERANCE)
    if faithful != (table.kernel(row).order == 1):
        raise RepresentationError("faithfulness of the matrices differs from the character kernel")
    logger.info(f"Constructed degree-{d} representation of '{G.name}' (row {row}, faithful={faithful}).")
    return IrrepMatrices(row, d, images, table.table[row].copy(), dim, faithful)
