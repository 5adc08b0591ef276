"""Equivalent conditions for a finite group to have a faithful irreducible representation.

The abelian part MA of the minisocle is read as a direct sum of F_p-modules,
one per prime. The group (or an automorphism group) acts on each of them by
matrices; the conditions below are evaluated on those modules, on orbits of
MA and MS, and on the character of a representation of MS built as a tensor
product of a character of MA with nontrivial irreducibles of the simple feet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConditionDisagreementError, ConsistencyError
from app.core.logging import get_logger
from app.services import fp_linalg
from app.services.char_oracle import character_table, has_faithful_irreducible, kernel_core
from app.services.group_core import ElementAction, FiniteGroup, Subgroup, subgroup_closure
from app.services.socle import MinisocleDecomposition, factorization_table, minisocle_decomposition

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class FpModule:
    p: int
    dim: int
    matrices: Tuple[np.ndarray, ...]
    basis: Tuple[int, ...] = ()
    element_coords: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    blocks: Tuple[Tuple[int, int], ...] = ()

    def dual(self) -> "FpModule":
        return FpModule(
            self.p,
            self.dim,
            tuple(fp_linalg.inverse(M, self.p).T.copy() for M in self.matrices),
            self.basis,
            self.element_coords,
            self.blocks,
        )

    def submodule(self, vectors: Sequence[np.ndarray]) -> fp_linalg.Subspace:
        """Smallest invariant subspace containing ``vectors`` (spinning)."""
        space = fp_linalg.Subspace(self.p, self.dim, np.asarray(vectors, dtype=np.int64))
        while self.matrices:
            grown = space.join(np.vstack([(space.rows @ M.T) % self.p for M in self.matrices]))
            if len(grown) == len(space):
                break
            space = grown
        return space

    def generates(self, v: np.ndarray) -> bool:
        return self.submodule([v]).full

    def submodules(self) -> List[np.ndarray]:
        """Every invariant subspace, as echelon row matrices, smallest first."""
        found: Dict[bytes, np.ndarray] = {}

        def remember(space: fp_linalg.Subspace):
            rows = space.matrix()
            found.setdefault(rows.tobytes() + bytes([rows.shape[0]]), rows)

        remember(fp_linalg.Subspace(self.p, self.dim))
        for v in fp_linalg.all_vectors(self.p, self.dim):
            remember(self.submodule([v]))
        changed = True
        while changed:
            changed = False
            current = list(found.values())
            for A, B in itertools.combinations(current, 2):
                key_count = len(found)
                remember(self.submodule(list(A) + list(B)))
                changed = changed or len(found) != key_count
        return sorted(found.values(), key=lambda rows: rows.shape[0])

    def is_semisimple(self) -> bool:
        """Every invariant subspace has an invariant complement."""
        subs = self.submodules()
        for W in subs:
            k = W.shape[0]
            if k in (0, self.dim):
                continue
            if not any(
                U.shape[0] == self.dim - k and fp_linalg.rank(np.vstack([W, U]), self.p) == self.dim for U in subs
            ):
                return False
        return True

    def matrix_for_map(self, m: np.ndarray) -> np.ndarray:
        """Matrix of an element map restricted to the carried subgroup."""
        columns = [self.element_coords[int(m[b])] for b in self.basis]
        return np.array(columns, dtype=np.int64).T.reshape(self.dim, self.dim)

    def coords_array(self) -> Tuple[np.ndarray, np.ndarray]:
        elements = np.array(list(self.element_coords), dtype=np.int64)
        coords = np.array([self.element_coords[int(x)] for x in elements], dtype=np.int64).reshape(-1, self.dim)
        return elements, coords


def random_semisimple_module(rng: np.random.Generator, p: int, dim: int, generators: int) -> FpModule:
    """Random invertible generator matrices, redrawn until the module is semisimple."""
    while True:
        matrices = []
        while len(matrices) < generators:
            M = rng.integers(0, p, size=(dim, dim))
            if fp_linalg.is_invertible(M, p):
                matrices.append(M.astype(np.int64))
        module = FpModule(p, dim, tuple(matrices))
        if module.is_semisimple():
            return module


def _coordinates(G: FiniteGroup, basis: Sequence[int], p: int) -> Dict[int, Tuple[int, ...]]:
    elements = np.array([G.identity], dtype=np.int64)
    for b in basis:
        powers = [G.identity]
        for _ in range(p - 1):
            powers.append(int(G.mul[powers[-1], b]))
        elements = G.mul[np.ix_(elements, np.array(powers))].astype(np.int64).ravel()
    vectors = itertools.product(range(p), repeat=len(basis))
    coords = {int(x): tuple(v) for x, v in zip(elements, vectors)}
    if len(coords) != p ** len(basis):
        raise ConsistencyError("module basis is independent", {"p": p, "dim": len(basis)})
    return coords


def ma_fp_modules(
    G: FiniteGroup, deco: MinisocleDecomposition, action: Optional[ElementAction] = None
) -> List[FpModule]:
    """One F_p-module per prime dividing |MA|, bases concatenated from the abelian summands."""
    action = action if action is not None else G.inner_action
    modules = []
    for p in sorted({f.kind.p for f in deco.ma_summands}):
        basis: List[int] = []
        blocks = []
        for f in deco.ma_summands:
            if f.kind.p == p:
                blocks.append((len(basis), len(basis) + f.kind.rank))
                basis.extend(f.kind.basis)
        coords = _coordinates(G, basis, p)
        shell = FpModule(p, len(basis), (), tuple(basis), coords, tuple(blocks))
        matrices = tuple(shell.matrix_for_map(m) for m in action.maps)
        modules.append(FpModule(p, len(basis), matrices, tuple(basis), coords, tuple(blocks)))
    return modules


def _random_maps(action: ElementAction, rng: np.random.Generator, count: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Pairs of acting maps for the homomorphism spot check."""
    G = action.group
    if action.is_inner:
        for g, h in rng.integers(0, G.order, size=(count, 2)):
            yield G.conjugation_map(int(g)), G.conjugation_map(int(h))
        return
    identity = np.arange(G.order)
    if not action.maps:
        for _ in range(count):
            yield identity, identity
        return
    for _ in range(count):
        pair = []
        for _ in range(2):
            word = identity
            for k in rng.integers(0, len(action.maps), size=rng.integers(0, 5)):
                word = action.maps[k][word]
            pair.append(word)
        yield pair[0], pair[1]


def verify_fp_module(module: FpModule, action: ElementAction) -> None:
    """Invertible matrices, a homomorphic action and additive coordinates, on fixed-seed samples."""
    G = action.group
    p = module.p
    if not all(fp_linalg.is_invertible(M, p) for M in module.matrices):
        raise ConsistencyError("module matrices are invertible", {"p": p})
    if module.dim == 0:
        return
    rng = np.random.default_rng(settings.RANDOM_SEED)
    for a, b in _random_maps(action, rng, settings.MODULE_CHECK_PAIRS):
        composed = a[b]
        if not np.array_equal((module.matrix_for_map(a) @ module.matrix_for_map(b)) % p, module.matrix_for_map(composed)):
            raise ConsistencyError("module action is a homomorphism", {"p": p})
    elements, coords = module.coords_array()
    for i, j in rng.integers(0, elements.size, size=(settings.MODULE_CHECK_PAIRS, 2)):
        xy = int(G.mul[elements[i], elements[j]])
        if tuple((coords[i] + coords[j]) % p) != module.element_coords[xy]:
            raise ConsistencyError("module coordinates are additive", {"p": p})


@dataclass(frozen=True)
class OrbitCheck:
    primal: bool
    dual: bool
    sampled: bool
    primal_witness: Optional[Tuple[int, ...]] = None
    dual_witness: Optional[Tuple[int, ...]] = None


def _candidate_vectors(module: FpModule) -> Tuple[Iterator[np.ndarray], bool]:
    p, dim = module.p, module.dim
    if p ** dim <= settings.EXHAUSTIVE_SEARCH_LIMIT:
        return fp_linalg.all_vectors(p, dim), False

    def sampled() -> Iterator[np.ndarray]:
        for start, stop in module.blocks or ((0, dim),):
            if p ** (stop - start) > settings.EXHAUSTIVE_SEARCH_LIMIT:
                continue
            for local in fp_linalg.all_vectors(p, stop - start):
                v = np.zeros(dim, dtype=np.int64)
                v[start:stop] = local
                yield v
        rng = np.random.default_rng(settings.RANDOM_SEED)
        for _ in range(settings.SAMPLED_VECTOR_COUNT):
            yield rng.integers(0, p, size=dim)

    return sampled(), True


def _find_generator(module: FpModule) -> Tuple[Optional[Tuple[int, ...]], bool]:
    if module.dim == 0:
        return (), False
    candidates, sampled = _candidate_vectors(module)
    for v in candidates:
        if v.any() and module.generates(v):
            return tuple(int(x) for x in v), sampled
    return None, sampled


def lemma14_orbit_check(module: FpModule) -> OrbitCheck:
    """Whether some vector's orbit spans the module, and the same on the dual module."""
    primal, sampled_p = _find_generator(module)
    dual, sampled_d = _find_generator(module.dual())
    return OrbitCheck(primal is not None, dual is not None, sampled_p or sampled_d, primal, dual)


@dataclass(frozen=True)
class DualCharacter:
    """A character of MA: one covector per prime module, evaluated on module coordinates."""

    covectors: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def exponents(self, coords: Sequence[Tuple[int, ...]]) -> List[int]:
        return [int(np.dot(phi, c)) % p for (p, phi), c in zip(self.covectors, coords)]

    def value(self, coords: Sequence[Tuple[int, ...]]) -> complex:
        angle = sum(e / p for e, (p, _) in zip(self.exponents(coords), self.covectors))
        return complex(np.exp(2j * np.pi * angle))

    def is_trivial_at(self, coords: Sequence[Tuple[int, ...]]) -> bool:
        return not any(self.exponents(coords))

    def to_dict(self) -> Dict:
        return {"covectors": [{"p": p, "covector": list(phi)} for p, phi in self.covectors]}


def ma_coordinates(G: FiniteGroup, modules: Sequence[FpModule]) -> Dict[int, Tuple[Tuple[int, ...], ...]]:
    """Per-prime coordinates of every MA element."""
    table: Dict[int, Tuple[Tuple[int, ...], ...]] = {G.identity: ()}
    for module in modules:
        table = {
            int(G.mul[x, y]): coords + (c,)
            for x, coords in table.items()
            for y, c in module.element_coords.items()
        }
    return table


def _character_kernel_core(G: FiniteGroup, chi: DualCharacter, coords: Dict, action: ElementAction) -> Subgroup:
    kernel = Subgroup(tuple(sorted(x for x, c in coords.items() if chi.is_trivial_at(c))))
    return kernel_core(action, kernel)


def _check_character_homomorphism(G: FiniteGroup, chi: DualCharacter, coords: Dict) -> None:
    elements = np.array(sorted(coords), dtype=np.int64)
    if elements.size > 256:
        rng = np.random.default_rng(settings.RANDOM_SEED)
        pairs = rng.integers(0, elements.size, size=(settings.MODULE_CHECK_PAIRS, 2))
    else:
        pairs = itertools.product(range(elements.size), repeat=2)
    values = {int(x): chi.value(coords[int(x)]) for x in elements}
    for i, j in pairs:
        x, y = int(elements[i]), int(elements[j])
        if abs(values[int(G.mul[x, y])] - values[x] * values[y]) > settings.TOLERANCE:
            raise ConsistencyError("character of MA is a homomorphism")


def faithful_character_search(
    G: FiniteGroup,
    deco: MinisocleDecomposition,
    modules: Optional[Sequence[FpModule]] = None,
    action: Optional[ElementAction] = None,
) -> Optional[DualCharacter]:
    """A character of MA whose kernels under the acting group intersect trivially, if one exists."""
    action = action if action is not None else G.inner_action
    modules = modules if modules is not None else ma_fp_modules(G, deco, action)
    covectors = []
    for module in modules:
        witness, sampled = _find_generator(module.dual())
        if witness is None:
            logger.debug(f"No faithful covector mod {module.p} (dim {module.dim}, sampled={sampled}).")
            return None
        covectors.append((module.p, witness))
    chi = DualCharacter(tuple(covectors))
    coords = ma_coordinates(G, modules)
    _check_character_homomorphism(G, chi, coords)
    core = _character_kernel_core(G, chi, coords, action)
    if core.order != 1:
        raise ConsistencyError("faithful character witness re-verifies", {"kernel_core": core.order})
    return chi


def _orbit_bfs(action: ElementAction, x: int) -> List[int]:
    seen = {int(x)}
    frontier = [int(x)]
    while frontier:
        frontier = [y for y in {int(m[z]) for z in frontier for m in action.maps} if y not in seen]
        seen.update(frontier)
    return sorted(seen)


def _generating_element(action: ElementAction, target: Subgroup) -> Optional[int]:
    tried = set()
    for x in target.members:
        cls = int(action.orbits.class_of[x])
        if cls in tried:
            continue
        tried.add(cls)
        if action.closure([x]) == target:
            # independent recomputation of the orbit
            if subgroup_closure(action.group, _orbit_bfs(action, x)) != target:
                raise ConsistencyError("orbit witness re-verifies", {"element": x})
            return x
    return None


def condition_iv(G: FiniteGroup, deco: MinisocleDecomposition, action: Optional[ElementAction] = None) -> Optional[int]:
    """Least element of MA whose orbit generates MA."""
    return _generating_element(action if action is not None else G.inner_action, deco.ma)


def condition_v(G: FiniteGroup, deco: MinisocleDecomposition, action: Optional[ElementAction] = None) -> Optional[int]:
    """Least element of MS whose orbit generates MS."""
    return _generating_element(action if action is not None else G.inner_action, deco.ms)


@dataclass(frozen=True, eq=False)
class MSRepresentation:
    chi: DualCharacter
    degree: int
    simple_rows: Tuple[Tuple[int, int, int], ...]
    character: np.ndarray
    kernel_core_order: int

    def to_dict(self) -> Dict:
        return {
            "degree": self.degree,
            "chi": self.chi.to_dict(),
            "simple_factors": [{"order": o, "row": r, "degree": d} for o, r, d in self.simple_rows],
            "kernel_core_order": self.kernel_core_order,
        }


def ms_faithful_rep(
    G: FiniteGroup,
    deco: MinisocleDecomposition,
    chi: DualCharacter,
    modules: Optional[Sequence[FpModule]] = None,
    action: Optional[ElementAction] = None,
) -> MSRepresentation:
    """Character of chi tensored with a nontrivial irreducible of each simple foot, certified faithful."""
    action = action if action is not None else G.inner_action
    modules = modules if modules is not None else ma_fp_modules(G, deco, action)
    coords = ma_coordinates(G, modules)
    simple = [S for f in deco.mh_feet for S in f.kind.simple_feet]
    table = factorization_table(G, [deco.ma] + simple, deco.ms)

    theta = np.array([chi.value(coords[int(a)]) for a in table[:, 0]], dtype=np.complex128)
    degree = 1
    rows = []
    for i, S in enumerate(simple, start=1):
        sub = G.subgroup_group(S)
        sub_table = character_table(sub)
        row = min(range(1, len(sub_table.degrees)), key=lambda r: (sub_table.degrees[r], r))
        d = sub_table.degrees[row]
        psi = sub_table.values(row)
        if np.sum(np.abs(np.abs(psi[1:]) - d) < settings.KERNEL_TOLERANCE):
            raise ConsistencyError("no nontrivial element of a simple foot acts as a scalar", {"order": S.order})
        theta = theta * psi[np.searchsorted(S.array, table[:, i])]
        degree *= d
        rows.append((S.order, row, d))

    norm = float(np.sum(np.abs(theta) ** 2) / deco.ms.order)
    if abs(norm - 1) > settings.KERNEL_TOLERANCE:
        raise ConsistencyError("tensor character is irreducible", {"norm": norm})
    kernel = Subgroup.from_mask(np.isin(np.arange(G.order), deco.ms.array[np.abs(theta - degree) < settings.KERNEL_TOLERANCE]))
    core = kernel_core(action, kernel)
    if core.order != 1:
        raise ConsistencyError("tensor representation of the minisocle is faithful", {"kernel_core": core.order})
    return MSRepresentation(chi, degree, tuple(rows), theta, core.order)


def ms_character_scan(G: FiniteGroup, deco: MinisocleDecomposition, action: Optional[ElementAction] = None) -> Optional[int]:
    """Row of the character table of MS whose kernel core under the acting group is trivial."""
    action = action if action is not None else G.inner_action
    sub = G.subgroup_group(deco.ms)
    return has_faithful_irreducible(sub, action.restrict(deco.ms, sub))


@dataclass(frozen=True, eq=False)
class CriterionReport:
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    cond_v: bool
    cond_iv_witness: Optional[int] = None
    cond_v_witness: Optional[int] = None
    cond_ii_witness: Optional[DualCharacter] = None
    cond_iii_witness: Optional[MSRepresentation] = None
    cond_iii_row: Optional[int] = None
    short_circuit: bool = False
    modules: Tuple[Dict, ...] = ()
    bridge: bool = True
    sampled: bool = False

    @property
    def verdict(self) -> bool:
        return self.cond_v

    @property
    def verdicts(self) -> Dict[str, bool]:
        return {"ii": self.cond_ii, "iii": self.cond_iii, "iv": self.cond_iv, "v": self.cond_v}

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) == 1 and self.bridge and (self.cond_v or not self.short_circuit)

    def raise_for_disagreement(self) -> None:
        if not self.agree:
            raise ConditionDisagreementError({**self.verdicts, "bridge": self.bridge})

    def to_dict(self, G: Optional[FiniteGroup] = None) -> Dict:
        label = (lambda x: None if x is None else G.label(x)) if G is not None else (lambda x: x)
        return {
            "verdict": self.verdict,
            "agree": self.agree,
            "short_circuit": self.short_circuit,
            "conditions": self.verdicts,
            "witnesses": {
                "ii": self.cond_ii_witness.to_dict() if self.cond_ii_witness else None,
                "iii": self.cond_iii_witness.to_dict() if self.cond_iii_witness else (
                    {"ms_row": self.cond_iii_row} if self.cond_iii_row is not None else None
                ),
                "iv": label(self.cond_iv_witness),
                "v": label(self.cond_v_witness),
            },
            "modules": list(self.modules),
            "bridge": self.bridge,
            "sampled": self.sampled,
        }


def decide_irreducibly_represented(
    G: FiniteGroup, deco: Optional[MinisocleDecomposition] = None, action: Optional[ElementAction] = None
) -> CriterionReport:
    """Evaluate every condition on MA and MS and report whether they agree."""
    action = action if action is not None else G.inner_action
    deco = deco if deco is not None else minisocle_decomposition(G, action)
    modules = ma_fp_modules(G, deco, action)
    summaries = []
    for module in modules:
        verify_fp_module(module, action)
        check = lemma14_orbit_check(module)
        if check.primal != check.dual and not check.sampled:
            raise ConsistencyError("orbit generation holds on a module iff on its dual", {"p": module.p})
        summaries.append({"p": module.p, "dim": module.dim, "primal": check.primal, "dual": check.dual, "sampled": check.sampled})

    chi = faithful_character_search(G, deco, modules, action)
    rep = ms_faithful_rep(G, deco, chi, modules, action) if chi is not None else None
    ms_row = ms_character_scan(G, deco, action) if chi is None else None
    x_iv = condition_iv(G, deco, action)
    z_v = condition_v(G, deco, action)

    report = CriterionReport(
        cond_ii=chi is not None,
        cond_iii=rep is not None or ms_row is not None,
        cond_iv=x_iv is not None,
        cond_v=z_v is not None,
        cond_iv_witness=x_iv,
        cond_v_witness=z_v,
        cond_ii_witness=chi,
        cond_iii_witness=rep,
        cond_iii_row=ms_row,
        short_circuit=deco.ma.order == 1,
        modules=tuple(summaries),
        bridge=(chi is not None) == all(s["dual"] for s in summaries),
        sampled=any(s["sampled"] for s in summaries),
    )
    if not report.agree:
        logger.error(f"Conditions disagree on '{G.name}': {report.verdicts} (bridge={report.bridge}).")
        report.raise_for_disagreement()
    else:
        logger.debug(f"Conditions on '{G.name}' ({action.kind}): verdict {report.verdict}.")
    return report
