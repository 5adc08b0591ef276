"""Fully enumerated finite groups and the subgroup / conjugacy machinery.

Elements are the indices ``0..order-1`` with ``0`` the identity. Multiplication
and inversion are dense numpy tables; every derived structure (classes,
closures, actions) works on indices only.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from sympy.combinatorics import Permutation

from app.core.config import settings
from app.core.exceptions import ConsistencyError, GroupOrderExceededError, InvalidActionError
from app.core.logging import get_logger
from app.services.group_spec import (
    FamilySpec,
    GroupSpec,
    PermSpec,
    ProductSpec,
    SemidirectSpec,
    format_permutation,
    format_spec,
    permutation_from_cycles,
)

logger = get_logger(__name__)


def _table_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


def _frozen(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=_table_dtype(n))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ConjugacyClasses:
    """A partition of the element set into orbits, ordered by least member."""

    classes: Tuple[Tuple[int, ...], ...]
    class_of: np.ndarray

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> List[int]:
        return [len(c) for c in self.classes]


@dataclass(frozen=True)
class Subgroup:
    """Sorted member indices of a subgroup of some parent group."""

    members: Tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "Subgroup":
        return cls(tuple(int(x) for x in np.flatnonzero(mask)))

    @classmethod
    def trivial(cls) -> "Subgroup":
        return cls((0,))

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[self.array] = True
        return out

    def __contains__(self, x: int) -> bool:
        return int(x) in self.member_set

    def issubset(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def key(self) -> Tuple[int, int]:
        """Deterministic ordering key: (order, least non-identity member)."""
        return (self.order, self.members[1] if self.order > 1 else 0)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    mul: np.ndarray
    inv: np.ndarray
    generators: Tuple[int, ...]
    labels: Tuple[str, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)
    identity: int = 0

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        idx = np.arange(n)
        power = idx.copy()
        k = 1
        while True:
            hit = (power == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                return orders
            power = self.mul[power, idx]
            k += 1

    @cached_property
    def spanning_tree(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """BFS tree over right multiplication by generators: (visit order, parent, generator position)."""
        n = self.order
        parent = np.full(n, -1, dtype=np.int64)
        via = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[self.identity] = True
        visit = [self.identity]
        for i in visit:
            for k, g in enumerate(self.generators):
                j = int(self.mul[i, g])
                if not seen[j]:
                    seen[j] = True
                    parent[j], via[j] = i, k
                    visit.append(j)
        if len(visit) != n:
            raise ConsistencyError("generators generate the group", {"reached": len(visit), "order": n})
        return np.array(visit, dtype=np.int64), parent, via

    def conjugation_map(self, g: int) -> np.ndarray:
        """x -> g x g^-1 as an index array."""
        return self.mul[self.mul[g, :], self.inv[g]].astype(np.int64)

    @cached_property
    def inner_action(self) -> "ElementAction":
        return ElementAction(self, tuple(self.conjugation_map(g) for g in self.generators), kind="inner")

    @cached_property
    def conjugacy_classes(self) -> ConjugacyClasses:
        return self.inner_action.orbits

    def subgroup_group(self, H: Subgroup, name: Optional[str] = None) -> "FiniteGroup":
        """``H`` as a group in its own right; element ``i`` is ``H.members[i]``."""
        members = H.array
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[members] = np.arange(members.size)
        mul = pos[self.mul[np.ix_(members, members)]]
        inv = pos[self.inv[members]]
        gens = tuple(int(pos[g]) for g in greedy_generators(self, members))
        labels = tuple(self.label(x) for x in members) if self.labels else ()
        n = members.size
        return FiniteGroup(
            name=name or f"{self.name}|{n}",
            mul=_frozen(mul, n),
            inv=_frozen(inv, n),
            generators=gens,
            labels=labels,
            metadata={"parent": self.name, "embedding": tuple(int(x) for x in members)},
        )

    def verify(self) -> None:
        """Check identity, inverses, associativity and generation; raise ConsistencyError on failure."""
        n = self.order
        idx = np.arange(n)
        e = self.identity
        if not (np.array_equal(self.mul[e, :], idx) and np.array_equal(self.mul[:, e], idx)):
            raise ConsistencyError("identity row and column", {"group": self.name})
        if not (np.all(self.mul[idx, self.inv] == e) and np.all(self.mul[self.inv, idx] == e)):
            raise ConsistencyError("inverse table", {"group": self.name})
        if n <= settings.ASSOCIATIVITY_EXHAUSTIVE_LIMIT:
            ab = self.mul.astype(np.int64)
            left = ab[ab[:, :, None], idx[None, None, :]]
            right = ab[idx[:, None, None], ab[None, :, :]]
            ok = np.array_equal(left, right)
        else:
            rng = np.random.default_rng(settings.RANDOM_SEED)
            a, b, c = rng.integers(0, n, size=(3, settings.ASSOCIATIVITY_SAMPLES))
            ok = np.array_equal(self.mul[self.mul[a, b], c], self.mul[a, self.mul[b, c]])
        if not ok:
            raise ConsistencyError("associativity", {"group": self.name})
        if subgroup_closure(self, self.generators).order != n:
            raise ConsistencyError("generators generate the group", {"group": self.name})


# construction

def _enumerate(
    name: str,
    identity: Hashable,
    gens: Sequence[Hashable],
    mul_fn: Callable[[Any, Any], Hashable],
    max_order: int,
    label_fn: Callable[[Any], str] = str,
    metadata: Optional[Dict[str, Any]] = None,
) -> FiniteGroup:
    """Breadth-first closure of ``gens`` under right multiplication."""
    elements: List[Hashable] = [identity]
    index: Dict[Hashable, int] = {identity: 0}
    parent: List[Tuple[int, int]] = [(-1, -1)]
    right: List[List[int]] = [[] for _ in gens]
    for i, x in enumerate(elements):
        for k, g in enumerate(gens):
            y = mul_fn(x, g)
            j = index.get(y)
            if j is None:
                if len(elements) >= max_order:
                    raise GroupOrderExceededError(max_order, f"group '{name}'")
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append((i, k))
            right[k].append(j)

    n = len(elements)
    dtype = _table_dtype(n)
    R = [np.array(r, dtype=np.int64) for r in right]
    mul = np.empty((n, n), dtype=dtype)
    mul[:, 0] = np.arange(n)
    for j in range(1, n):
        i, k = parent[j]
        # x * j = (x * i) * g_k
        mul[:, j] = R[k][mul[:, i]]
    rows, cols = np.nonzero(mul == 0)
    inv = np.empty(n, dtype=np.int64)
    inv[rows] = cols
    return FiniteGroup(
        name=name,
        mul=_frozen(mul, n),
        inv=_frozen(inv, n),
        generators=tuple(index[g] for g in gens),
        labels=tuple(label_fn(x) for x in elements),
        metadata=metadata or {},
    )


def permutation_group(name: str, degree: int, generators: Sequence[Permutation], max_order: int) -> FiniteGroup:
    return _enumerate(
        name,
        Permutation(list(range(degree))),
        list(generators),
        operator.mul,
        max_order,
        format_permutation,
        {"degree": degree},
    )


def _family_group(spec: FamilySpec, max_order: int) -> FiniteGroup:
    name = format_spec(spec)
    family, args = spec.family, spec.args
    if family == "cyclic":
        n = args[0]
        gens = [1] if n > 1 else []
        return _enumerate(name, 0, gens, lambda a, b: (a + b) % n, max_order)
    if family == "dihedral":
        r = args[0] // 2

        def dihedral_mul(a, b):
            (k1, e1), (k2, e2) = a, b
            return ((k1 + (-k2 if e1 else k2)) % r, e1 ^ e2)

        gens = ([(1, 0)] if r > 1 else []) + [(0, 1)]
        label = lambda x: f"r{x[0]}" + ("s" if x[1] else "")
        return _enumerate(name, (0, 0), gens, dihedral_mul, max_order, label)
    if family == "quaternion":
        n = args[0] // 4
        m = 2 * n

        def dicyclic_mul(a, b):
            (k1, e1), (k2, e2) = a, b
            if not e1:
                return ((k1 + k2) % m, e2)
            if not e2:
                return ((k1 - k2) % m, 1)
            return ((k1 - k2 + n) % m, 0)

        label = lambda x: f"a{x[0]}" + ("b" if x[1] else "")
        return _enumerate(name, (0, 0), [(1, 0), (0, 1)], dicyclic_mul, max_order, label)
    if family == "symmetric":
        n = args[0]
        if n <= 1:
            gens = []
        elif n == 2:
            gens = [permutation_from_cycles(2, [[0, 1]])]
        else:
            gens = [permutation_from_cycles(n, [[0, 1]]), permutation_from_cycles(n, [list(range(n))])]
        return permutation_group(name, max(n, 1), gens, max_order)
    if family == "alternating":
        n = args[0]
        gens = [permutation_from_cycles(n, [[0, 1, i]]) for i in range(2, n)]
        return permutation_group(name, max(n, 1), gens, max_order)
    if family == "elemabelian":
        p, n = args
        if p ** n > max_order:
            raise GroupOrderExceededError(max_order, f"group '{name}'")
        units = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        label = lambda v: "(" + ",".join(map(str, v)) + ")"
        return _enumerate(
            name,
            (0,) * n,
            units,
            lambda a, b: tuple((x + y) % p for x, y in zip(a, b)),
            max_order,
            label,
        )
    raise ValueError(f"unknown family {family!r}")


def direct_product(G: FiniteGroup, H: FiniteGroup, max_order: Optional[int] = None, name: Optional[str] = None) -> FiniteGroup:
    """G x H with element (a, b) at index a*|H| + b."""
    max_order = max_order or settings.MAX_ORDER
    m = H.order
    n = G.order * m
    if n > max_order:
        raise GroupOrderExceededError(max_order, "direct product")
    gm = G.mul.astype(np.int64)
    hm = H.mul.astype(np.int64)
    mul = (gm[:, None, :, None] * m + hm[None, :, None, :]).reshape(n, n)
    inv = (G.inv.astype(np.int64)[:, None] * m + H.inv.astype(np.int64)[None, :]).reshape(n)
    gens = tuple(int(g) * m for g in G.generators) + tuple(int(h) for h in H.generators)
    labels = tuple(f"({G.label(a)}, {H.label(b)})" for a in range(G.order) for b in range(m))
    return FiniteGroup(
        name=name or f"product ({G.name}) ({H.name})",
        mul=_frozen(mul, n),
        inv=_frozen(inv, n),
        generators=gens,
        labels=labels,
        metadata={
            "factors": (G.name, H.name),
            "left_embedding": tuple(a * m for a in range(G.order)),
            "right_embedding": tuple(range(m)),
        },
    )


def _vector_codes(p: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    vectors = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vectors, weights


def extend_matrix_action(H: FiniteGroup, p: int, matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Extend generator matrices to every element of H and check the homomorphism property."""
    if len(matrices) != len(H.generators):
        raise InvalidActionError(
            f"{len(matrices)} matrices given for {len(H.generators)} generators of {H.name}",
            {"matrices": len(matrices), "generators": len(H.generators)},
        )
    n = matrices[0].shape[0] if matrices else 0
    visit, parent, via = H.spanning_tree
    P = np.zeros((H.order, n, n), dtype=np.int64)
    P[H.identity] = np.eye(n, dtype=np.int64)
    for j in visit[1:]:
        P[j] = (P[parent[j]] @ matrices[via[j]]) % p
    for x in range(H.order):
        if not np.array_equal((P[x][None, :, :] @ P) % p, P[H.mul[x].astype(np.int64)]):
            raise InvalidActionError(
                "matrices do not respect the relations of the acting group",
                {"element": H.label(x)},
            )
    return P


def semidirect_product(
    p: int,
    n: int,
    H: FiniteGroup,
    matrices: Sequence[np.ndarray],
    max_order: Optional[int] = None,
    name: Optional[str] = None,
) -> FiniteGroup:
    """(F_p)^n x| H with (u1, h1)(u2, h2) = (u1 + h1.u2, h1 h2); element (h, u) at index h*p^n + code(u)."""
    max_order = max_order or settings.MAX_ORDER
    q = p ** n
    order = H.order * q
    if order > max_order:
        raise GroupOrderExceededError(max_order, "semidirect product")
    P = extend_matrix_action(H, p, [np.asarray(M, dtype=np.int64) % p for M in matrices])
    if not matrices:
        P = np.broadcast_to(np.eye(n, dtype=np.int64), (H.order, n, n))
    vectors, weights = _vector_codes(p, n)
    add = (((vectors[:, None, :] + vectors[None, :, :]) % p) @ weights).astype(np.int64)
    hm = H.mul.astype(np.int64)
    mul = np.empty((order, order), dtype=np.int64)
    for h1 in range(H.order):
        image = ((vectors @ P[h1].T) % p) @ weights
        block = hm[h1][None, :, None] * q + add[:, image][:, None, :]
        mul[h1 * q:(h1 + 1) * q, :] = block.reshape(q, order)
    rows, cols = np.nonzero(mul == 0)
    inv = np.empty(order, dtype=np.int64)
    inv[rows] = cols
    faithful = bool(all(not np.array_equal(P[h], np.eye(n, dtype=np.int64)) for h in range(1, H.order)))
    if not faithful:
        logger.warning(f"Semidirect action of {H.name} on (F_{p})^{n} is not faithful.")
    units = [int(weights[i]) for i in range(n)]
    gens = tuple(int(g) * q for g in H.generators) + tuple(units)
    labels = tuple(
        f"({H.label(h)}; {''.join(map(str, vectors[c]))})" for h in range(H.order) for c in range(q)
    )
    return FiniteGroup(
        name=name or f"semidirect {p} {n} ({H.name})",
        mul=_frozen(mul, order),
        inv=_frozen(inv, order),
        generators=gens,
        labels=labels,
        metadata={
            "prime": p,
            "dimension": n,
            "faithful_action": faithful,
            "normal_subgroup": tuple(range(q)),
        },
    )


def build_group(spec: GroupSpec, max_order: Optional[int] = None) -> FiniteGroup:
    """Realize a parsed spec as a verified, fully enumerated group."""
    max_order = max_order or settings.MAX_ORDER
    if isinstance(spec, FamilySpec):
        group = _family_group(spec, max_order)
    elif isinstance(spec, PermSpec):
        group = permutation_group(format_spec(spec), spec.degree, spec.generators, max_order)
    elif isinstance(spec, ProductSpec):
        group = direct_product(build_group(spec.left, max_order), build_group(spec.right, max_order), max_order, format_spec(spec))
    elif isinstance(spec, SemidirectSpec):
        acting = build_group(spec.acting, max_order)
        group = semidirect_product(spec.p, spec.n, acting, spec.matrix_arrays(), max_order, format_spec(spec))
    else:
        raise TypeError(f"not a group spec: {spec!r}")
    group.verify()
    logger.debug(f"Built '{group.name}' of order {group.order} with {len(group.generators)} generators.")
    return group


# closures and orbits

def _grow(G: FiniteGroup, mask: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    gens_arr = np.asarray(gens, dtype=np.int64)
    frontier = np.flatnonzero(mask)
    while frontier.size:
        nxt = np.unique(G.mul[np.ix_(frontier, gens_arr)])
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def _closure_with_generators(G: FiniteGroup, seed: Iterable[int]) -> Tuple[np.ndarray, List[int]]:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    gens: List[int] = []
    for x in sorted({int(x) for x in seed}):
        if mask[x]:
            continue
        gens.append(x)
        mask = _grow(G, mask, gens)
    return mask, gens


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup of G containing ``seed``."""
    return Subgroup.from_mask(_closure_with_generators(G, seed)[0])


def greedy_generators(G: FiniteGroup, members: Iterable[int]) -> List[int]:
    """Generators picked in index order, each one enlarging the span so far."""
    return _closure_with_generators(G, members)[1]


def orbit_partition(order: int, maps: Sequence[np.ndarray]) -> ConjugacyClasses:
    """Orbits of the group generated by ``maps`` on ``0..order-1``."""
    idx = np.arange(order)
    if maps:
        rows = np.concatenate([idx] * len(maps))
        cols = np.concatenate([np.asarray(m, dtype=np.int64) for m in maps])
    else:
        rows = cols = idx
    graph = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(order, order))
    _, labels = connected_components(graph, directed=True, connection="weak")
    _, first = np.unique(labels, return_index=True)
    relabel = np.empty(first.size, dtype=np.int64)
    relabel[np.argsort(first)] = np.arange(first.size)
    class_of = relabel[labels]
    sort = np.argsort(class_of, kind="stable")
    bounds = np.flatnonzero(np.diff(class_of[sort])) + 1
    classes = tuple(tuple(int(x) for x in chunk) for chunk in np.split(sort, bounds))
    class_of.setflags(write=False)
    return ConjugacyClasses(classes, class_of)


def conjugacy_classes(G: FiniteGroup) -> ConjugacyClasses:
    return G.conjugacy_classes


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of G containing ``seed``."""
    return G.inner_action.closure(seed)


def center(G: FiniteGroup) -> Subgroup:
    return Subgroup.from_mask(np.all(G.mul == G.mul.T, axis=1))


@dataclass(frozen=True, eq=False)
class ElementAction:
    """A group acting on the elements of ``group`` by automorphisms, given by generator maps."""

    group: FiniteGroup
    maps: Tuple[np.ndarray, ...]
    kind: str = "inner"

    @property
    def is_inner(self) -> bool:
        return self.kind == "inner"

    @cached_property
    def orbits(self) -> ConjugacyClasses:
        return orbit_partition(self.group.order, self.maps)

    def orbit(self, x: int) -> Tuple[int, ...]:
        return self.orbits.classes[int(self.orbits.class_of[x])]

    def closure(self, seed: Iterable[int]) -> Subgroup:
        """Smallest invariant subgroup containing ``seed``."""
        points = set()
        for x in seed:
            points.update(self.orbit(int(x)))
        return subgroup_closure(self.group, points)

    def is_invariant(self, H: Subgroup) -> bool:
        mask = H.mask(self.group.order)
        return all(bool(mask[m[H.array]].all()) for m in self.maps)

    def restrict(self, H: Subgroup, sub: FiniteGroup) -> "ElementAction":
        """The action on an invariant subgroup, in the indexing of ``sub = group.subgroup_group(H)``."""
        pos = np.full(self.group.order, -1, dtype=np.int64)
        pos[H.array] = np.arange(H.order)
        maps = tuple(pos[m[H.array]] for m in self.maps)
        if any((m < 0).any() for m in maps):
            raise ConsistencyError("restricted subgroup is invariant", {"order": H.order})
        return ElementAction(sub, maps, kind=self.kind)
