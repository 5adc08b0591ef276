"""Group description DSL: AST types and the pyparsing grammar.

Grammar (whitespace-insensitive)::

    spec       := family | "perm" INT ":" cycles ("," cycles)*
                | "product" "(" spec ")" "(" spec ")"
                | "semidirect" INT INT "(" spec ")" matrices
    family     := NAME INT INT?
    cycles     := ("(" INT* ")")+      # "()" is the identity
    matrices   := "[" row (";" row)* "]" ("," "[" row (";" row)* "]")*

An optional ``autos:`` block may follow the group spec. Each automorphism is
one line (or one ``|``-separated segment) of ``gK -> word`` assignments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pyparsing as pp
from sympy import isprime
from sympy.combinatorics import Permutation

from app.core.exceptions import GroupSpecParseError
from app.services import fp_linalg

FAMILIES = {
    "cyclic": 1,
    "dihedral": 1,
    "quaternion": 1,
    "symmetric": 1,
    "alternating": 1,
    "elemabelian": 2,
}


def permutation_from_cycles(degree: int, cycles: Sequence[Sequence[int]]) -> Permutation:
    """Permutation of {0, ..., degree-1} from disjoint cycles; ``()`` alone is the identity."""
    seen = set()
    for cycle in cycles:
        for point in cycle:
            if point < 0 or point >= degree:
                raise ValueError(f"point {point} outside 0..{degree - 1}")
            if point in seen:
                raise ValueError(f"point {point} appears twice; cycles must be disjoint")
            seen.add(point)
    nontrivial = [list(c) for c in cycles if len(c) > 1]
    if not nontrivial:
        return Permutation(list(range(degree)))
    return Permutation(nontrivial, size=degree)


def format_permutation(p: Permutation) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in p.cyclic_form) or "()"


@dataclass(frozen=True)
class FamilySpec:
    family: str
    args: Tuple[int, ...]


@dataclass(frozen=True)
class PermSpec:
    degree: int
    generators: Tuple[Permutation, ...]


@dataclass(frozen=True)
class ProductSpec:
    left: "GroupSpec"
    right: "GroupSpec"


@dataclass(frozen=True)
class SemidirectSpec:
    p: int
    n: int
    acting: "GroupSpec"
    matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def matrix_arrays(self) -> List[np.ndarray]:
        return [np.array(m, dtype=np.int64).reshape(self.n, self.n) % self.p for m in self.matrices]


GroupSpec = Union[FamilySpec, PermSpec, ProductSpec, SemidirectSpec]

Word = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class AutoSpec:
    """One automorphism given by generator images; unassigned generators are fixed."""

    assignments: Tuple[Tuple[int, Word], ...]
    line: int = 1


def format_spec(spec: GroupSpec) -> str:
    if isinstance(spec, FamilySpec):
        return " ".join([spec.family, *map(str, spec.args)])
    if isinstance(spec, PermSpec):
        gens = ", ".join(format_permutation(g) for g in spec.generators)
        return f"perm {spec.degree}: {gens}"
    if isinstance(spec, ProductSpec):
        return f"product ({format_spec(spec.left)}) ({format_spec(spec.right)})"
    matrices = ", ".join(
        "[" + "; ".join(" ".join(map(str, row)) for row in m) + "]" for m in spec.matrices
    )
    return f"semidirect {spec.p} {spec.n} ({format_spec(spec.acting)}) {matrices}"


# grammar

def _fatal(s: str, loc: int, message: str):
    raise pp.ParseFatalException(s, loc, message)


INT = pp.Word(pp.nums).set_name("integer").set_parse_action(lambda t: int(t[0]))
SIGNED_INT = pp.Regex(r"[+-]?\d+").set_name("signed integer").set_parse_action(lambda t: int(t[0]))
LPAR, RPAR, LBRACK, RBRACK, COLON, COMMA, SEMI = map(pp.Suppress, "()[]:,;")

PERM_KW = pp.Keyword("perm")
PRODUCT_KW = pp.Keyword("product")
SEMIDIRECT_KW = pp.Keyword("semidirect")


def _perm_action(s: str, loc: int, toks):
    degree = toks[0]
    generators = []
    for cycles in toks[1]:
        try:
            generators.append(permutation_from_cycles(degree, [list(c) for c in cycles]))
        except ValueError as exc:
            _fatal(s, loc, f"degree mismatch in perm spec: {exc}")
    return PermSpec(degree, tuple(generators))


def _family_action(s: str, loc: int, toks):
    name = toks[0].lower()
    args = tuple(toks[1:])
    if name not in FAMILIES:
        _fatal(s, loc, f"unknown family name '{toks[0]}'")
    if len(args) != FAMILIES[name]:
        _fatal(s, loc, f"family '{name}' takes {FAMILIES[name]} integer argument(s), got {len(args)}")
    if name == "dihedral" and (args[0] < 2 or args[0] % 2):
        _fatal(s, loc, "dihedral order must be an even integer >= 2")
    if name == "quaternion" and (args[0] < 4 or args[0] % 4):
        _fatal(s, loc, "quaternion order must be a multiple of 4")
    if name == "cyclic" and args[0] < 1:
        _fatal(s, loc, "cyclic order must be positive")
    if name == "elemabelian" and not isprime(args[0]):
        _fatal(s, loc, f"elemabelian needs a prime, got {args[0]}")
    return FamilySpec(name, args)


def _semidirect_action(s: str, loc: int, toks):
    p, n, acting = toks[0], toks[1], toks[2]
    raw = toks[3] if len(toks) > 3 else []
    if not isprime(p):
        _fatal(s, loc, f"semidirect modulus must be prime, got {p}")
    if n < 1:
        _fatal(s, loc, "semidirect dimension must be positive")
    matrices = []
    for k, rows in enumerate(raw):
        rows = [tuple(int(x) % p for x in row) for row in rows]
        if len(rows) != n or any(len(row) != n for row in rows):
            _fatal(s, loc, f"matrix #{k} is not {n}x{n}")
        if not fp_linalg.is_invertible(np.array(rows), p):
            _fatal(s, loc, f"matrix #{k} is not invertible mod {p}")
        matrices.append(tuple(rows))
    return SemidirectSpec(p, n, acting, tuple(matrices))


def _build_grammar() -> pp.ParserElement:
    spec = pp.Forward().set_name("group spec")
    cycle = pp.Group(LPAR + pp.ZeroOrMore(INT) + RPAR)
    cycles = pp.Group(pp.OneOrMore(cycle))
    perm = (PERM_KW.suppress() + INT + COLON + pp.Group(pp.DelimitedList(cycles, delim=","))).set_parse_action(_perm_action)
    product = (PRODUCT_KW.suppress() + LPAR + spec + RPAR + LPAR + spec + RPAR).set_parse_action(
        lambda t: ProductSpec(t[0], t[1])
    )
    row = pp.Group(pp.OneOrMore(INT))
    matrix = pp.Group(LBRACK + pp.DelimitedList(row, delim=";") + RBRACK)
    matrices = pp.Group(pp.DelimitedList(matrix, delim=","))
    semidirect = (SEMIDIRECT_KW.suppress() + INT + INT + LPAR + spec + RPAR + pp.Optional(matrices)).set_parse_action(
        _semidirect_action
    )
    family = (~(PERM_KW | PRODUCT_KW | SEMIDIRECT_KW) + pp.Word(pp.alphas) + INT + pp.Optional(INT)).set_parse_action(
        _family_action
    )
    spec <<= perm | product | semidirect | family
    return spec


def _build_auto_grammar() -> pp.ParserElement:
    gen_ref = pp.Regex(r"g\d+").set_name("generator").set_parse_action(lambda t: int(t[0][1:]))
    factor = pp.Group(gen_ref + pp.Optional(pp.Suppress("^") + SIGNED_INT, default=1))
    word = pp.Group(pp.Keyword("e").suppress()) | pp.Group(pp.OneOrMore(factor))
    assignment = pp.Group(gen_ref + pp.Suppress("->") + word)
    return pp.DelimitedList(assignment, delim=",")


SPEC_GRAMMAR = _build_grammar()
AUTO_GRAMMAR = _build_auto_grammar()

_AUTOS_HEADER = re.compile(r"\bautos\s*:")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a group DSL string into its AST."""
    try:
        return (SPEC_GRAMMAR + pp.StringEnd()).parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise GroupSpecParseError(exc.msg, exc.lineno, exc.col) from exc


def parse_auto_lines(text: str, first_line: int = 1) -> List[AutoSpec]:
    """Parse automorphism lines; blank lines and segments are skipped."""
    autos: List[AutoSpec] = []
    for offset, line in enumerate(text.splitlines()):
        for segment in line.split("|"):
            if not segment.strip():
                continue
            try:
                parsed = (AUTO_GRAMMAR + pp.StringEnd()).parse_string(segment, parse_all=True)
            except pp.ParseBaseException as exc:
                raise GroupSpecParseError(exc.msg, first_line + offset, exc.col) from exc
            assignments = []
            seen = set()
            for target, word in parsed:
                if target in seen:
                    raise GroupSpecParseError(f"generator g{target} assigned twice", first_line + offset, 1)
                seen.add(target)
                assignments.append((target, tuple((g, e) for g, e in word)))
            autos.append(AutoSpec(tuple(assignments), first_line + offset))
    return autos


def parse_analysis_input(text: str, autos_text: Optional[str] = None) -> Tuple[GroupSpec, List[AutoSpec]]:
    """Split a spec text into the group part and its optional ``autos:`` block."""
    match = _AUTOS_HEADER.search(text)
    group_text, autos_block = (text, "") if match is None else (text[: match.start()], text[match.end():])
    spec = parse_group_spec(group_text)
    first_line = group_text.count("\n") + 1
    autos = parse_auto_lines(autos_block, first_line) if autos_block.strip() else []
    if autos_text:
        extra = _AUTOS_HEADER.sub("", autos_text, count=1)
        autos.extend(parse_auto_lines(extra))
    return spec, autos
