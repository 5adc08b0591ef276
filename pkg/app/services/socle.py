"""Feet (minimal invariant subgroups), their classification and the minisocle decomposition.

Every function takes an optional :class:`ElementAction`; the default is
conjugation, which gives the ordinary feet. Passing an automorphism action
gives the invariant-subgroup version used for automorphism groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from app.core.exceptions import ConsistencyError, NotMinimalNormalError
from app.core.logging import get_logger
from app.services.group_core import ElementAction, FiniteGroup, Subgroup, greedy_generators, subgroup_closure

logger = get_logger(__name__)


@dataclass(frozen=True)
class AbelianFoot:
    p: int
    rank: int
    basis: Tuple[int, ...]


@dataclass(frozen=True)
class NonabelianFoot:
    simple_feet: Tuple[Subgroup, ...]


@dataclass(frozen=True)
class Foot:
    carrier: Subgroup
    kind: Union[AbelianFoot, NonabelianFoot]

    @property
    def is_abelian(self) -> bool:
        return isinstance(self.kind, AbelianFoot)

    @property
    def order(self) -> int:
        return self.carrier.order

    def to_dict(self) -> Dict:
        if self.is_abelian:
            return {
                "order": self.order,
                "kind": "abelian",
                "p": self.kind.p,
                "rank": self.kind.rank,
                "basis": list(self.kind.basis),
            }
        return {
            "order": self.order,
            "kind": "nonabelian",
            "simple_feet": [S.order for S in self.kind.simple_feet],
        }


def _action(G: FiniteGroup, action: Optional[ElementAction]) -> ElementAction:
    return action if action is not None else G.inner_action


def minimal_invariant_subgroups(action: ElementAction) -> List[Subgroup]:
    """Inclusion-minimal closures of the nontrivial orbits, sorted by (order, least element)."""
    closures: Dict[Tuple[int, ...], Subgroup] = {}
    for orbit in action.orbits.classes:
        if orbit[0] == action.group.identity:
            continue
        H = action.closure(orbit[:1])
        closures.setdefault(H.members, H)
    ordered = sorted(closures.values(), key=lambda H: H.key)
    return [H for H in ordered if not any(K.order < H.order and K.issubset(H) for K in ordered)]


def minimal_normal_subgroups(G: FiniteGroup) -> List[Subgroup]:
    return minimal_invariant_subgroups(G.inner_action)


def socle(G: FiniteGroup, action: Optional[ElementAction] = None) -> Subgroup:
    """Subgroup generated by all feet."""
    feet = minimal_invariant_subgroups(_action(G, action))
    return subgroup_closure(G, [x for M in feet for x in M.members])


def is_simple(G: FiniteGroup, H: Subgroup) -> bool:
    if H.order == 1:
        return False
    sub = G.subgroup_group(H)
    return all(
        sub.inner_action.closure(c[:1]).order == sub.order for c in sub.conjugacy_classes.classes[1:]
    )


def _commute(G: FiniteGroup, A: Subgroup, B: Subgroup) -> bool:
    return bool(np.array_equal(G.mul[np.ix_(A.array, B.array)], G.mul[np.ix_(B.array, A.array)].T))


def _image(G: FiniteGroup, H: Subgroup, m: np.ndarray) -> Subgroup:
    return Subgroup(tuple(sorted(int(x) for x in m[H.array])))


def _is_direct(G: FiniteGroup, parts: Sequence[Subgroup], span: Subgroup) -> bool:
    return int(np.prod([P.order for P in parts], dtype=object)) == span.order


def classify_foot(G: FiniteGroup, M: Subgroup, action: Optional[ElementAction] = None) -> Foot:
    """Certify that ``M`` is a foot and split it into its elementary abelian or simple pieces."""
    action = _action(G, action)
    if M.order == 1:
        raise NotMinimalNormalError(1, 1)
    for cls in sorted({int(action.orbits.class_of[x]) for x in M.members[1:]}):
        rep = action.orbits.classes[cls][0]
        closure = action.closure([rep])
        if closure != M:
            raise NotMinimalNormalError(M.order, closure.order)

    sub = G.subgroup_group(M)
    if sub.is_abelian:
        orders = set(int(k) for k in G.element_orders[M.array[1:]])
        p = orders.pop()
        if orders or not isprime(p):
            raise ConsistencyError("abelian foot is elementary abelian", {"order": M.order})
        basis = tuple(greedy_generators(G, M.members))
        if p ** len(basis) != M.order:
            raise ConsistencyError("abelian foot basis is independent", {"order": M.order, "basis": basis})
        return Foot(M, AbelianFoot(p, len(basis), basis))

    embed = M.array
    inner_feet = [Subgroup(tuple(sorted(int(embed[i]) for i in S.members))) for S in minimal_invariant_subgroups(sub.inner_action)]
    first = inner_feet[0]
    conjugates = {first.members: first}
    frontier = [first]
    while frontier:
        nxt = []
        for S in frontier:
            for m in action.maps:
                T = _image(G, S, m)
                if T.members not in conjugates:
                    conjugates[T.members] = T
                    nxt.append(T)
        frontier = nxt

    family: List[Subgroup] = []
    span = Subgroup.trivial()
    for S in sorted(conjugates.values(), key=lambda H: H.key):
        if len(span.member_set & S.member_set) == 1:
            family.append(S)
            span = subgroup_closure(G, span.members + S.members)
    if span != M:
        raise ConsistencyError("simple feet generate the foot", {"order": M.order, "span": span.order})
    if not _is_direct(G, family, span):
        raise ConsistencyError("simple feet form a direct sum", {"order": M.order})
    for i, S in enumerate(family):
        if not is_simple(G, S):
            raise ConsistencyError("simple feet are simple", {"order": S.order})
        if any(not _commute(G, S, T) for T in family[i + 1:]):
            raise ConsistencyError("simple feet commute", {"order": S.order})
    if {S.members for S in family} != {S.members for S in inner_feet}:
        raise ConsistencyError("simple feet are all the feet of the foot", {"order": M.order})
    return Foot(M, NonabelianFoot(tuple(family)))


def _check_foot_against(G: FiniteGroup, M: Subgroup, N: Subgroup) -> None:
    """Either M lies in N, or M and N generate their internal direct sum."""
    if M.issubset(N):
        return
    joined = subgroup_closure(G, M.members + N.members)
    if len(M.member_set & N.member_set) != 1 or joined.order != M.order * N.order or not _commute(G, M, N):
        raise ConsistencyError(
            "foot either lies in or is complementary to an invariant subgroup",
            {"foot": M.order, "subgroup": N.order},
        )


@dataclass(frozen=True, eq=False)
class MinisocleDecomposition:
    group: FiniteGroup
    feet: Tuple[Foot, ...]
    ma_summands: Tuple[Foot, ...]
    mh_feet: Tuple[Foot, ...]
    ma: Subgroup
    mh: Subgroup
    ms: Subgroup
    factorization: np.ndarray
    kind: str = "inner"

    @property
    def summands(self) -> Tuple[Foot, ...]:
        return self.ma_summands + self.mh_feet

    def factor(self, x: int) -> Tuple[int, ...]:
        """Unique factorization of an MS element over the summands (abelian first)."""
        pos = int(np.searchsorted(self.ms.array, x))
        if pos >= self.ms.order or self.ms.members[pos] != x:
            raise ValueError(f"element {x} is not in the minisocle")
        return tuple(int(y) for y in self.factorization[pos])

    def to_dict(self) -> Dict:
        return {
            "feet": [f.to_dict() for f in self.feet],
            "ma_summands": [f.order for f in self.ma_summands],
            "mh_feet": [f.order for f in self.mh_feet],
            "ma_order": self.ma.order,
            "mh_order": self.mh.order,
            "ms_order": self.ms.order,
        }


def factorization_table(G: FiniteGroup, parts: Sequence[Subgroup], ms: Subgroup) -> np.ndarray:
    """Rows aligned with ``ms.members``: the unique factors of each element over ``parts``."""
    products = np.array([G.identity], dtype=np.int64)
    factors = np.zeros((1, 0), dtype=np.int64)
    for P in parts:
        products = G.mul[np.ix_(products, P.array)].astype(np.int64).ravel()
        factors = np.hstack([np.repeat(factors, P.order, axis=0), np.tile(P.array, factors.shape[0])[:, None]])
    order = np.argsort(products, kind="stable")
    products, factors = products[order], factors[order]
    if products.size != ms.order or not np.array_equal(products, ms.array):
        raise ConsistencyError("minisocle elements factor uniquely", {"products": int(np.unique(products).size), "ms": ms.order})
    factors.setflags(write=False)
    return factors


def minisocle_decomposition(
    G: FiniteGroup, action: Optional[ElementAction] = None, decomposition_cls=MinisocleDecomposition
) -> MinisocleDecomposition:
    """Greedy maximal direct family of abelian feet, all nonabelian feet, and their sum."""
    action = _action(G, action)
    feet = tuple(classify_foot(G, M, action) for M in minimal_invariant_subgroups(action))

    ma_summands: List[Foot] = []
    ma = Subgroup.trivial()
    for f in (f for f in feet if f.is_abelian):
        _check_foot_against(G, f.carrier, ma)
        if not f.carrier.issubset(ma):
            ma_summands.append(f)
            ma = subgroup_closure(G, ma.members + f.carrier.members)
    mh_feet = [f for f in feet if not f.is_abelian]
    mh = Subgroup.trivial()
    for f in mh_feet:
        _check_foot_against(G, f.carrier, mh)
        mh = subgroup_closure(G, mh.members + f.carrier.members)
    if not _is_direct(G, [f.carrier for f in ma_summands], ma) or not _is_direct(G, [f.carrier for f in mh_feet], mh):
        raise ConsistencyError("feet form direct sums", {"ma": ma.order, "mh": mh.order})

    ms = subgroup_closure(G, ma.members + mh.members)
    if ms.order != ma.order * mh.order or len(ma.member_set & mh.member_set) != 1:
        raise ConsistencyError("minisocle is the direct sum of its abelian and nonabelian parts", {"ms": ms.order})

    simple = [S for f in mh_feet for S in f.kind.simple_feet]
    if simple:
        sub = G.subgroup_group(ms)
        embed = ms.array
        simple_keys = {S.members for S in simple}
        for K in minimal_invariant_subgroups(sub.inner_action):
            members = Subgroup(tuple(sorted(int(embed[i]) for i in K.members)))
            if members.members not in simple_keys and not members.issubset(ma):
                raise ConsistencyError("every foot of the minisocle is a simple foot or lies in its abelian part", {"foot": members.order})

    factorization = factorization_table(G, [f.carrier for f in ma_summands] + [f.carrier for f in mh_feet], ms)
    logger.debug(
        f"Minisocle of '{G.name}' ({action.kind}): |MA|={ma.order} |MH|={mh.order} |MS|={ms.order}, {len(feet)} feet."
    )
    return decomposition_cls(
        group=G,
        feet=feet,
        ma_summands=tuple(ma_summands),
        mh_feet=tuple(mh_feet),
        ma=ma,
        mh=mh,
        ms=ms,
        factorization=factorization,
        kind=action.kind,
    )
