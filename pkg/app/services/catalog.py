"""Named test groups and the catalog file format.

A catalog file holds one entry per line::

    name := <spec> [autos: <auto> | <auto> ...] [expect true|false] [expect-g true|false]

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import pyparsing as pp

from app.core.exceptions import CatalogError


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec_text: str
    expected: Optional[bool] = None
    expected_g: Optional[bool] = None
    note: str = ""
    tags: Tuple[str, ...] = ()

    def __post_init__(self):
        for flag in ("expected", "expected_g"):
            value = getattr(self, flag)
            if value is not None and not isinstance(value, bool):
                raise CatalogError(f"entry '{self.name}': {flag} must be true, false or unset, got {value!r}")
        if not isinstance(self.note, str) or not all(isinstance(t, str) for t in self.tags):
            raise CatalogError(f"entry '{self.name}': note must be text and tags a sequence of names")

    @property
    def has_autos(self) -> bool:
        return "autos:" in self.spec_text

    def to_line(self) -> str:
        parts = [f"{self.name} := {self.spec_text}"]
        if self.expected is not None:
            parts.append(f"expect {str(self.expected).lower()}")
        if self.expected_g is not None:
            parts.append(f"expect-g {str(self.expected_g).lower()}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "spec": self.spec_text,
            "expected": self.expected,
            "expected_g": self.expected_g,
            "note": self.note,
            "tags": list(self.tags),
        }


def _entry(name, spec, expected=None, *, expected_g=None, note="", tags=()):
    return CatalogEntry(name, spec, expected, expected_g, note, tuple(tags))


def build_catalog() -> List[CatalogEntry]:
    """The built-in corpus."""
    entries = []
    for n in list(range(1, 13)) + [16, 27]:
        entries.append(_entry(f"cyclic{n}", f"cyclic {n}", True, note="abelian groups: irreducibly represented iff cyclic", tags=("abelian", "cyclic", "nilpotent")))
    entries += [
        _entry("klein4", "elemabelian 2 2", False, note="abelian, not cyclic", tags=("abelian", "nilpotent")),
        _entry("elemabelian2_3", "elemabelian 2 3", False, note="abelian, not cyclic", tags=("abelian", "nilpotent")),
        _entry("elemabelian3_2", "elemabelian 3 2", False, note="abelian, not cyclic", tags=("abelian", "nilpotent")),
        _entry("z2xz4", "product (cyclic 2) (cyclic 4)", False, note="centre contains a non-cyclic subgroup", tags=("abelian", "nilpotent")),
        _entry("dihedral6", "dihedral 6", True, note="Sym(3)"),
        _entry("dihedral8", "dihedral 8", True, note="socle is the centre", tags=("nilpotent",)),
        _entry("dihedral10", "dihedral 10", True),
        _entry("dihedral12", "dihedral 12", True),
        _entry("quaternion8", "quaternion 8", True, note="minisocle is the centre of order 2", tags=("nilpotent",)),
        _entry("sym3", "symmetric 3", True, note="socle Alt(3)"),
        _entry("sym4", "symmetric 4", True, note="socle is the Vierergruppe"),
        _entry("sym5", "symmetric 5", True, note="socle Alt(5)"),
        _entry("sym6", "symmetric 6", True, note="socle Alt(6)"),
        _entry("alt4", "alternating 4", True, note="unique foot is the Vierergruppe"),
        _entry("alt5", "alternating 5", True, note="simple"),
        _entry("alt6", "alternating 6", True, note="simple"),
        _entry("z3xalt5", "product (cyclic 3) (alternating 5)", True, note="minisocle is the whole group"),
        _entry("alt5xalt5", "product (alternating 5) (alternating 5)", True, note="minisocle is the whole group"),
        _entry("sym3_f2sq", "semidirect 2 2 (symmetric 3) [0 1; 1 0], [0 1; 1 1]", True, note="socle is the normal subgroup U"),
        _entry(
            "alt5xalt5_swap",
            "product (alternating 5) (alternating 5) autos: g0->g3, g1->g4, g2->g5, g3->g0, g4->g1, g5->g2",
            True,
            expected_g=True,
            note="the swap fuses both factors into one invariant foot",
            tags=("g",),
        ),
        _entry(
            "klein4_gl2",
            "elemabelian 2 2 autos: g0->g1, g1->g0 | g0->g0, g1->g0 g1",
            False,
            expected_g=True,
            note="every nonzero vector has a spanning orbit under GL(2,2)",
            tags=("abelian", "nilpotent", "g"),
        ),
        _entry(
            "elemabelian2_3_sym3",
            "elemabelian 2 3 autos: g0->g1, g1->g0, g2->g2 | g0->g1, g1->g2, g2->g0",
            False,
            expected_g=True,
            note="not irreducibly represented, but has a faithful irreducible character for the coordinate permutations",
            tags=("abelian", "nilpotent", "g"),
        ),
    ]
    return entries


_NAME = pp.Word(pp.alphanums + "_-.").set_name("entry name")
_BOOL = pp.one_of("true false").set_parse_action(lambda t: t[0] == "true")
_EXPECT_G = pp.Group(pp.Literal("expect-g").suppress() + _BOOL)("expect_g")
_EXPECT = pp.Group(pp.Keyword("expect").suppress() + ~pp.Literal("-") + _BOOL)("expect")
_CLAUSES = pp.ZeroOrMore(_EXPECT_G | _EXPECT)
_LINE = (
    _NAME("name")
    + pp.Suppress(":=")
    + pp.SkipTo(pp.Literal("expect-g") | pp.Keyword("expect") | pp.StringEnd())("body")
    + _CLAUSES
    + pp.StringEnd()
)


def parse_catalog(text: str) -> List[CatalogEntry]:
    entries: List[CatalogEntry] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            parsed = _LINE.parse_string(line, parse_all=True)
        except pp.ParseBaseException as exc:
            raise CatalogError(f"malformed catalog line: {exc.msg}", lineno) from exc
        name = parsed["name"]
        if name in seen:
            raise CatalogError(f"duplicate entry name '{name}'", lineno)
        seen.add(name)
        body = parsed["body"].strip()
        if not body:
            raise CatalogError(f"entry '{name}' has no group spec", lineno)
        expected = parsed["expect"][0] if "expect" in parsed else None
        expected_g = parsed["expect_g"][0] if "expect_g" in parsed else None
        entries.append(CatalogEntry(name, body, expected, expected_g))
    return entries


def load_catalog(source: Union[str, Path, None] = None) -> List[CatalogEntry]:
    """Entries from a catalog file, or the built-in corpus when ``source`` is None."""
    if source is None:
        return build_catalog()
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog '{path}': {exc}") from exc
    return parse_catalog(text)


def dump_catalog(entries: Iterable[CatalogEntry]) -> str:
    return "\n".join(e.to_line() for e in entries) + "\n"
