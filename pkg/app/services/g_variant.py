"""Automorphism groups containing the inner automorphisms, their invariant feet and faithfulness criterion."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConsistencyError, GroupOrderExceededError, InvalidAutomorphismError
from app.core.logging import get_logger
from app.services.char_oracle import CharacterTable, character_table, has_faithful_irreducible
from app.services.criterion import (
    condition_iv,
    condition_v,
    faithful_character_search,
    ms_character_scan,
    ms_faithful_rep,
)
from app.services.group_core import ElementAction, FiniteGroup, Subgroup
from app.services.group_spec import AutoSpec, Word
from app.services.socle import MinisocleDecomposition, minimal_invariant_subgroups, minisocle_decomposition

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AutoGroup:
    """Automorphism group given by generator maps on element indices."""

    group: FiniteGroup
    generator_maps: Tuple[np.ndarray, ...]
    extra_count: int
    order: int

    @cached_property
    def action(self) -> ElementAction:
        return ElementAction(self.group, self.generator_maps, kind="automorphism" if self.extra_count else "inner")

    def maps(self) -> List[np.ndarray]:
        """Every element of the group as an index map; identity first."""
        identity = np.arange(self.group.order)
        seen = {identity.tobytes(): identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for alpha in frontier:
                for m in self.generator_maps:
                    beta = m[alpha]
                    key = beta.tobytes()
                    if key not in seen:
                        seen[key] = beta
                        nxt.append(beta)
            frontier = nxt
        return list(seen.values())


def evaluate_word(G: FiniteGroup, word: Word, index: int = 0) -> int:
    x = G.identity
    for k, e in word:
        if k >= len(G.generators):
            raise InvalidAutomorphismError(index, f"g{k} is not a generator of {G.name}")
        g = G.generators[k]
        if e < 0:
            g, e = int(G.inv[g]), -e
        for _ in range(e % int(G.element_orders[g])):
            x = int(G.mul[x, g])
    return x


def extend_automorphism(G: FiniteGroup, images: Sequence[int], index: int = 0) -> np.ndarray:
    """Extend generator images along the spanning tree and check that the result is an automorphism."""
    n = G.order
    visit, parent, via = G.spanning_tree
    alpha = np.zeros(n, dtype=np.int64)
    alpha[G.identity] = G.identity
    for j in visit[1:]:
        alpha[j] = G.mul[alpha[parent[j]], images[via[j]]]
    if np.unique(alpha).size != n:
        raise InvalidAutomorphismError(index, "the extended map is not bijective")
    if n <= settings.ASSOCIATIVITY_EXHAUSTIVE_LIMIT:
        ok = np.array_equal(alpha[G.mul], G.mul[alpha[:, None], alpha[None, :]])
    else:
        rng = np.random.default_rng(settings.RANDOM_SEED)
        x, y = rng.integers(0, n, size=(2, settings.ASSOCIATIVITY_SAMPLES))
        ok = np.array_equal(alpha[G.mul[x, y]], G.mul[alpha[x], alpha[y]])
    if not ok:
        raise InvalidAutomorphismError(index, "the extended map does not respect multiplication")
    return alpha


def automorphism_from_spec(G: FiniteGroup, spec: AutoSpec, index: int = 0) -> np.ndarray:
    images = [int(g) for g in G.generators]
    for target, word in spec.assignments:
        if target >= len(images):
            raise InvalidAutomorphismError(index, f"g{target} is not a generator of {G.name}")
        images[target] = evaluate_word(G, word, index)
    return extend_automorphism(G, images, index)


def _tuple_orbit_size(G: FiniteGroup, maps: Sequence[np.ndarray], cap: int) -> int:
    # automorphisms act freely on generating tuples
    start = tuple(int(g) for g in G.generators)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for t in frontier:
            for m in maps:
                image = tuple(int(m[x]) for x in t)
                if image not in seen:
                    if len(seen) >= cap:
                        raise GroupOrderExceededError(cap, "automorphism group")
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return len(seen)


def close_auto_group(G: FiniteGroup, extra: Sequence = (), cap: Optional[int] = None) -> AutoGroup:
    """Inner automorphisms by the generators plus ``extra`` (AutoSpec or generator-image lists)."""
    cap = cap or settings.AUTO_GROUP_CAP
    extras = []
    for index, item in enumerate(extra):
        if isinstance(item, AutoSpec):
            extras.append(automorphism_from_spec(G, item, index))
        else:
            extras.append(extend_automorphism(G, [int(x) for x in item], index))
    maps = tuple(G.conjugation_map(g) for g in G.generators) + tuple(extras)
    order = _tuple_orbit_size(G, maps, cap)
    logger.debug(f"Automorphism group of '{G.name}' with {len(extras)} extra maps has order {order}.")
    return AutoGroup(G, maps, len(extras), order)


def restrict_auto_group(A: AutoGroup, H: Subgroup) -> AutoGroup:
    """The action of A on an invariant subgroup H, as automorphisms of H in its own indexing."""
    sub = A.group.subgroup_group(H)
    restricted = A.action.restrict(H, sub)
    return AutoGroup(sub, restricted.maps, A.extra_count, _tuple_orbit_size(sub, restricted.maps, settings.AUTO_GROUP_CAP))


def g_minimal_invariant_subgroups(G: FiniteGroup, A: AutoGroup) -> List[Subgroup]:
    return minimal_invariant_subgroups(A.action)


class GMinisocle(MinisocleDecomposition):
    @property
    def g_feet(self):
        return self.feet

    @property
    def ga_summands(self):
        return self.ma_summands


def g_minisocle(G: FiniteGroup, A: AutoGroup) -> GMinisocle:
    deco = minisocle_decomposition(G, A.action, decomposition_cls=GMinisocle)
    inner = G.inner_action
    for foot in deco.feet:
        if not inner.is_invariant(foot.carrier):
            raise ConsistencyError("invariant feet are normal", {"order": foot.order})
    return deco


@dataclass(frozen=True, eq=False)
class GVariantReport:
    auto_order: int
    deco: GMinisocle
    conditions: Dict[str, bool]
    witness: Optional[int]
    ms_witness: Optional[int]
    oracle_row: Optional[int]
    ms_in_ms_g: bool
    ms_g_in_ms: bool

    @property
    def verdict(self) -> bool:
        return self.conditions["v"]

    @property
    def agree(self) -> bool:
        return len(set(self.conditions.values())) == 1

    def to_dict(self, G: Optional[FiniteGroup] = None) -> Dict:
        label = (lambda x: None if x is None else G.label(x)) if G is not None else (lambda x: x)
        return {
            "auto_order": self.auto_order,
            "verdict": self.verdict,
            "agree": self.agree,
            "conditions": dict(self.conditions),
            "witness": label(self.witness),
            "ms_witness": label(self.ms_witness),
            "oracle_row": self.oracle_row,
            "g_feet": [f.to_dict() for f in self.deco.feet],
            "ma_g_order": self.deco.ma.order,
            "mh_g_order": self.deco.mh.order,
            "ms_g_order": self.deco.ms.order,
            "ms_in_ms_g": self.ms_in_ms_g,
            "ms_g_in_ms": self.ms_g_in_ms,
        }


def decide_g_faithful(
    G: FiniteGroup,
    A: AutoGroup,
    table: Optional[CharacterTable] = None,
    plain: Optional[MinisocleDecomposition] = None,
) -> GVariantReport:
    """Evaluate the invariant-feet conditions for A and cross-check them against the character table."""
    action = A.action
    gdeco = g_minisocle(G, A)
    plain = plain if plain is not None else minisocle_decomposition(G)

    chi = faithful_character_search(G, plain, action=action)
    chi_g = faithful_character_search(G, gdeco, action=action)
    iii = ms_faithful_rep(G, plain, chi, action=action) is not None if chi is not None else ms_character_scan(G, plain, action) is not None
    iii_g = ms_faithful_rep(G, gdeco, chi_g, action=action) is not None if chi_g is not None else ms_character_scan(G, gdeco, action) is not None
    x = condition_iv(G, gdeco, action)
    z = condition_v(G, gdeco, action)
    row = has_faithful_irreducible(G, A, table or character_table(G))

    report = GVariantReport(
        auto_order=A.order,
        deco=gdeco,
        conditions={
            "i": row is not None,
            "ii": chi is not None,
            "ii_prime": chi_g is not None,
            "iii": iii,
            "iii_prime": iii_g,
            "iv": x is not None,
            "v": z is not None,
        },
        witness=x,
        ms_witness=z,
        oracle_row=row,
        ms_in_ms_g=plain.ms.issubset(gdeco.ms),
        ms_g_in_ms=gdeco.ms.issubset(plain.ms),
    )
    if not report.agree:
        logger.error(f"Automorphism-group conditions disagree on '{G.name}': {report.conditions}.")
    return report
