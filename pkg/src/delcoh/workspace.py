"""Workspace files: one JSON object per line describing complexes, maps, characters and cycles.

Rationals are written as strings ("3/4", "-1", "0").  Cochains and chains are
sparse lists of ``[simplex, value]`` pairs; a simplex given in a non-sorted
vertex order picks up the sign of the sorting permutation.  Names starting
with ``@`` refer to the built-in fixtures and need no entry in the file.
See docs/workspace.md for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .characters import CharacterRep, RelCharacterRep, make_character, make_relative
from .simplicial import Chain, RelativeCycle, SimplicialComplex, SimplicialMap, _sort_with_sign

EXIT_OK, EXIT_INVALID, EXIT_UNKNOWN, EXIT_MATH = 0, 1, 2, 3


class WorkspaceError(Exception):
    """Error with an exit code and an optional file location."""

    def __init__(self, message: str, code: int = EXIT_INVALID, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.code = code


def parse_rational(x, where: str = "") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise WorkspaceError(f"expected an integer or a 'num/den' string, got {x!r}", EXIT_INVALID, where)
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise WorkspaceError(f"bad rational {x!r}", EXIT_INVALID, where) from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _vertex(v):
    return tuple(v) if isinstance(v, list) else v


def _dense(K: SimplicialComplex, n: int, entries, where: str, integer: bool = False) -> list:
    out = [Fraction(0)] * K.count(n)
    if entries is None:
        return [0] * len(out) if integer else out
    if not isinstance(entries, list):
        raise WorkspaceError("cochain must be a list of [simplex, value] pairs", EXIT_INVALID, where)
    for item in entries:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise WorkspaceError(f"bad cochain entry {item!r}", EXIT_INVALID, where)
        simplex = [_vertex(v) for v in item[0]]
        if len(simplex) != n + 1:
            raise WorkspaceError(f"simplex {item[0]} has the wrong dimension (expected {n})", EXIT_INVALID, where)
        key, sign = _sort_with_sign(simplex)
        if key not in K:
            raise WorkspaceError(f"simplex {item[0]} is not in {K.name or 'the complex'}", EXIT_INVALID, where)
        out[K.index(key)] += sign * parse_rational(item[1], where)
    if integer:
        for i, q in enumerate(out):
            if q.denominator != 1:
                raise WorkspaceError(f"non-integer value {q} on {K.simplices[n][i]}", EXIT_INVALID, where)
        return [int(q) for q in out]
    return out


def sparse(K: SimplicialComplex, n: int, values) -> list:
    """Inverse of the dense conversion, for writing files."""
    if n < 0 or n > K.dim:
        return []
    return [[list(s), format_rational(v)] for s, v in zip(K.simplices[n], values) if v]


@dataclass
class Workspace:
    complexes: dict[str, SimplicialComplex] = field(default_factory=dict)
    maps: dict[str, SimplicialMap] = field(default_factory=dict)
    characters: dict[str, CharacterRep | RelCharacterRep] = field(default_factory=dict)
    cycles: dict[str, RelativeCycle | Chain] = field(default_factory=dict)
    source: str = ""

    # -- lookups -----------------------------------------------------------

    def complex(self, name: str) -> SimplicialComplex:
        if name in self.complexes:
            return self.complexes[name]
        if name.startswith("@") and name[1:] in fixtures.COMPLEXES:
            return fixtures.COMPLEXES[name[1:]]()
        raise WorkspaceError(f"unknown complex {name!r}", EXIT_UNKNOWN)

    def map(self, name: str) -> SimplicialMap:
        if name in self.maps:
            return self.maps[name]
        if name.startswith("@") and name[1:] in fixtures.PAIRS:
            return fixtures.PAIRS[name[1:]]()
        raise WorkspaceError(f"unknown map {name!r}", EXIT_UNKNOWN)

    def character(self, name: str):
        if name not in self.characters:
            raise WorkspaceError(f"unknown character {name!r}", EXIT_UNKNOWN)
        return self.characters[name]

    def cycle(self, name: str):
        if name not in self.cycles:
            raise WorkspaceError(f"unknown cycle {name!r}", EXIT_UNKNOWN)
        return self.cycles[name]

    # -- loading -----------------------------------------------------------

    def _add(self, obj: dict, where: str) -> None:
        kind = obj.get("kind")
        name = obj.get("name")
        if not isinstance(name, str) or not name or name.startswith("@"):
            raise WorkspaceError("every entry needs a 'name' string not starting with '@'", EXIT_INVALID, where)
        if any(name in d for d in (self.complexes, self.maps, self.characters, self.cycles)):
            raise WorkspaceError(f"duplicate name {name!r}", EXIT_INVALID, where)
        try:
            if kind == "complex":
                simplices = obj.get("simplices")
                if not isinstance(simplices, list):
                    raise WorkspaceError("complex needs a 'simplices' list", EXIT_INVALID, where)
                self.complexes[name] = SimplicialComplex([[_vertex(v) for v in s] for s in simplices], name)
            elif kind == "map":
                src, tgt = self._ref_complex(obj, "source", where), self._ref_complex(obj, "target", where)
                pairs = obj.get("vertex_map")
                if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
                    raise WorkspaceError("'vertex_map' must be a list of [source, target] pairs", EXIT_INVALID, where)
                self.maps[name] = SimplicialMap(src, tgt, {_vertex(a): _vertex(b) for a, b in pairs}, name)
            elif kind == "character":
                self.characters[name] = self._character(obj, where)
            elif kind == "cycle":
                self.cycles[name] = self._cycle(obj, where)
            else:
                raise WorkspaceError(f"unknown entry kind {kind!r}", EXIT_INVALID, where)
        except WorkspaceError:
            raise
        except ValueError as e:
            raise WorkspaceError(str(e), EXIT_INVALID, where) from None

    def _ref_complex(self, obj, key, where):
        ref = obj.get(key)
        if not isinstance(ref, str):
            raise WorkspaceError(f"missing '{key}' reference", EXIT_INVALID, where)
        try:
            return self.complex(ref)
        except WorkspaceError as e:
            raise WorkspaceError(str(e), e.code, where) from None

    def _ref_map(self, obj, where):
        ref = obj.get("map")
        if not isinstance(ref, str):
            raise WorkspaceError("missing 'map' reference", EXIT_INVALID, where)
        try:
            return self.map(ref)
        except WorkspaceError as e:
            raise WorkspaceError(str(e), e.code, where) from None

    def _degree(self, obj, where) -> int:
        p = obj.get("degree")
        if not isinstance(p, int) or isinstance(p, bool) or p < 0:
            raise WorkspaceError("'degree' must be a nonnegative integer", EXIT_INVALID, where)
        return p

    def _character(self, obj, where):
        p = self._degree(obj, where)
        if "map" in obj:
            f = self._ref_map(obj, where)
            X, Y = f.target, f.source
            return make_relative(
                f, p,
                _dense(X, p, obj.get("T_X"), where), _dense(Y, p - 1, obj.get("T_Y"), where),
                _dense(X, p + 1, obj.get("c_X"), where, True), _dense(Y, p, obj.get("c_Y"), where, True),
                obj.get("type", "II"),
            )
        K = self._ref_complex(obj, "complex", where)
        return make_character(K, p, _dense(K, p, obj.get("T"), where), _dense(K, p + 1, obj.get("c"), where, True))

    def _cycle(self, obj, where):
        p = self._degree(obj, where)
        if "map" in obj:
            f = self._ref_map(obj, where)
            C = Chain(f.target, p, tuple(_dense(f.target, p, obj.get("C"), where, True)))
            Cp = Chain(f.source, p - 1, tuple(_dense(f.source, p - 1, obj.get("C_prime"), where, True)))
            try:
                return RelativeCycle(f, C, Cp)
            except ValueError as e:
                raise WorkspaceError(f"invalid relative cycle: {e}", EXIT_MATH, where) from None
        K = self._ref_complex(obj, "complex", where)
        return Chain(K, p, tuple(_dense(K, p, obj.get("chain"), where, True)))


def load_workspace(path: str | Path) -> Workspace:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise WorkspaceError(f"cannot read workspace: {e.strerror}", EXIT_INVALID, str(path)) from None
    ws = Workspace(source=str(path))
    for lineno, line in enumerate(text.splitlines(), 1):
        where = f"{path}:{lineno}"
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise WorkspaceError(f"malformed JSON ({e.msg})", EXIT_INVALID, where) from None
        if not isinstance(obj, dict):
            raise WorkspaceError("each line must be a JSON object", EXIT_INVALID, where)
        ws._add(obj, where)
    return ws


def dump_entries(entries: list[dict]) -> str:
    return "".join(json.dumps(e, sort_keys=True, ensure_ascii=False) + "\n" for e in entries)


def complex_entry(name: str, K: SimplicialComplex) -> dict:
    return {"kind": "complex", "name": name, "simplices": [list(s) for s in K.facets()]}


def map_entry(name: str, f: SimplicialMap, source: str, target: str) -> dict:
    return {"kind": "map", "name": name, "source": source, "target": target,
            "vertex_map": [[a, b] for a, b in sorted(f.vertex_map.items(), key=lambda kv: str(kv[0]))]}


def character_entry(name: str, r, map_name: str | None = None, complex_name: str | None = None) -> dict:
    if isinstance(r, RelCharacterRep):
        X, Y, p = r.X, r.Y, r.p
        return {"kind": "character", "name": name, "map": map_name, "degree": p, "type": r.type_tag,
                "T_X": sparse(X, p, r.T_X), "T_Y": sparse(Y, p - 1, r.T_Y),
                "c_X": sparse(X, p + 1, r.c_X), "c_Y": sparse(Y, p, r.c_Y)}
    return {"kind": "character", "name": name, "complex": complex_name, "degree": r.p,
            "T": sparse(r.K, r.p, r.T), "c": sparse(r.K, r.p + 1, r.c)}
