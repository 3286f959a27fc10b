"""Manifest files: an algebra, a split and a section jet as JSON.

    {
      "name": "sl2 A",
      "dim": 3,
      "v_dim": 2,
      "names": ["e1", "e2", "e3"],          optional
      "brackets": [[1, 2, 3, "1"], [3, 1, 1, "2"], [3, 2, 2, "-2"]],
      "R": [[1, 1, 3, "1"]],
      "S": [[1, 1, 2, 3, "1/3"]]
    }

Indices are 1-based; the first v_dim basis vectors span V and the rest span h.
A bracket entry (i, j, k, c) means [e_i, e_j] has c on e_k; the mirror entry
[e_j, e_i] = -c is filled in unless it is given. R entries (j, k, alpha, c) and
S entries (j, k, l, alpha, c) need j, k, l <= v_dim < alpha and are symmetrized.
Coefficients are strings "p/q" or "p"; numbers with a decimal point are refused.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import LieAlgebra, Split
from .fixtures import Instance
from .loops import SectionJet
from .report import fmt_rat

RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
KEYS = ("name", "dim", "v_dim", "names", "brackets", "R", "S")


class ManifestError(ValueError):
    """Input error with a location: `field` is a path like "R[2][3]", `line` a 1-based line."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.message, self.field, self.line = message, field, line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True)
class Manifest:
    name: str
    dim: int
    v_dim: int
    brackets: tuple[tuple[int, int, int, Fraction], ...]
    R: tuple[tuple[int, int, int, Fraction], ...] = ()
    S: tuple[tuple[int, int, int, int, Fraction], ...] = ()
    names: tuple[str, ...] | None = None

    @property
    def labels(self) -> tuple[str, ...]:
        return self.names or tuple(f"e{i + 1}" for i in range(self.dim))

    def algebra(self) -> LieAlgebra:
        return LieAlgebra.from_brackets(self.dim, [(i - 1, j - 1, k - 1, c) for i, j, k, c in self.brackets],
                                        self.labels)

    def instance(self) -> Instance:
        split = Split(self.algebra(), self.v_dim)
        section = SectionJet.from_entries(
            split,
            [(j - 1, k - 1, a - 1, c) for j, k, a, c in self.R],
            [(j - 1, k - 1, l - 1, a - 1, c) for j, k, l, a, c in self.S],
        )
        return Instance(self.name, split, section, self.labels)


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _rational(value, field: str, line) -> Fraction:
    if not isinstance(value, str) or not RATIONAL.match(value):
        raise ManifestError(f"malformed rational {value!r}; use a string \"p/q\"", field, line)
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise ManifestError(f"malformed rational {value!r}: zero denominator", field, line) from None


def _index(value, lo: int, hi: int, field: str, line) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestError(f"index must be an integer, got {value!r}", field, line)
    if not lo <= value <= hi:
        raise ManifestError(f"index out of range: {value} not in {lo}..{hi}", field, line)
    return value


def _int_field(data: dict, key: str, text: str, lo: int) -> int:
    if key not in data:
        raise ManifestError(f"missing field {key!r}", key)
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ManifestError(f"{key} must be an integer >= {lo}, got {v!r}", key, _line_of(text, key))
    return v


def _entries(data: dict, key: str, text: str, ranges) -> list[tuple]:
    """Rows of len(ranges) indices plus a coefficient, validated."""
    rows = data.get(key, [])
    line = _line_of(text, key)
    if not isinstance(rows, list):
        raise ManifestError(f"{key} must be a list of entries", key, line)
    out = []
    for r, row in enumerate(rows):
        where = f"{key}[{r}]"
        if not isinstance(row, list) or len(row) != len(ranges) + 1:
            raise ManifestError(f"entry must have {len(ranges)} indices and a coefficient", where, line)
        idx = tuple(_index(v, lo, hi, f"{where}[{p}]", line) for p, (v, (lo, hi)) in enumerate(zip(row, ranges)))
        out.append(idx + (_rational(row[-1], f"{where}[{len(ranges)}]", line),))
    return out


def _merge(rows: list[tuple], key: str, canonical, text: str) -> tuple:
    """One entry per canonical index tuple; equal duplicates collapse, conflicting ones are errors."""
    seen: dict = {}
    for r, row in enumerate(rows):
        idx, c = canonical(row[:-1]), row[-1]
        if idx in seen and seen[idx][0] != c:
            raise ManifestError(f"conflicting duplicate entries for {list(idx)}: {seen[idx][0]} and {c}",
                                f"{key}[{r}]", _line_of(text, key))
        seen.setdefault(idx, (c, r))
    return tuple(idx + (c,) for idx, (c, _) in sorted(seen.items()))


def _sorted_slots(count: int):
    return lambda idx: tuple(sorted(idx[:count])) + tuple(idx[count:])


def parse_manifest(text: str) -> Manifest:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"syntax error: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise ManifestError(f"unknown field {unknown[0]!r}", unknown[0], _line_of(text, unknown[0]))
    N = _int_field(data, "dim", text, 1)
    n = _int_field(data, "v_dim", text, 1)
    if n > N:
        raise ManifestError(f"v_dim {n} exceeds dim {N}", "v_dim", _line_of(text, "v_dim"))
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ManifestError("name must be a string", "name", _line_of(text, "name"))
    names = data.get("names")
    if names is not None:
        if (not isinstance(names, list) or len(names) != N or not all(isinstance(s, str) and s for s in names)
                or len(set(names)) != N):
            raise ManifestError(f"names must be {N} distinct non-empty strings", "names", _line_of(text, "names"))
        names = tuple(names)
    brackets = _merge(_entries(data, "brackets", text, [(1, N)] * 3), "brackets", tuple, text)
    if n == N and (data.get("R") or data.get("S")):
        raise ManifestError("R and S need a nonzero h (v_dim < dim)", "R" if data.get("R") else "S",
                          _line_of(text, "R" if data.get("R") else "S"))
    R = _merge(_entries(data, "R", text, [(1, n)] * 2 + [(n + 1, N)]), "R", _sorted_slots(2), text)
    S = _merge(_entries(data, "S", text, [(1, n)] * 3 + [(n + 1, N)]), "S", _sorted_slots(3), text)
    return Manifest(name, N, n, brackets, R, S, names)


def emit(manifest: Manifest) -> str:
    """Canonical text; parse_manifest(emit(m)) == m."""

    def rows(entries):
        return [list(e[:-1]) + [fmt_rat(e[-1])] for e in entries]

    data = {"name": manifest.name, "dim": manifest.dim, "v_dim": manifest.v_dim}
    if manifest.names is not None:
        data["names"] = list(manifest.names)
    data["brackets"] = rows(manifest.brackets)
    data["R"] = rows(manifest.R)
    data["S"] = rows(manifest.S)
    lines = ["{"]
    items = list(data.items())
    for p, (key, value) in enumerate(items):
        comma = "," if p < len(items) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], list):
            body = ",\n".join("    " + json.dumps(v) for v in value)
            lines.append(f'  "{key}": [\n{body}\n  ]{comma}')
        else:
            lines.append(f'  "{key}": {json.dumps(value)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_manifest(path) -> Manifest:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc.strerror}") from None
    return parse_manifest(text)


def manifest_from_instance(inst: Instance) -> Manifest:
    """Serialize an instance (structure constants and section jet) back to a manifest."""
    sp = inst.split
    c = sp.algebra.constants
    N, n = sp.dim, sp.n
    brackets = tuple((i + 1, j + 1, k + 1, c[i, j, k]) for i, j, k in itertools.product(range(N), repeat=3)
                     if i < j and c[i, j, k] != 0)
    R = tuple((j + 1, k + 1, a + 1, inst.section.R.data[j, k, a])
              for j, k in itertools.combinations_with_replacement(range(n), 2) for a in range(n, N)
              if inst.section.R.data[j, k, a] != 0)
    S = tuple((j + 1, k + 1, l + 1, a + 1, inst.section.S.data[j, k, l, a])
              for j, k, l in itertools.combinations_with_replacement(range(n), 3) for a in range(n, N)
              if inst.section.S.data[j, k, l, a] != 0)
    return Manifest(inst.name, N, n, brackets, R, S, tuple(inst.labels))


__all__ = ["Manifest", "ManifestError", "parse_manifest", "emit", "load_manifest", "manifest_from_instance"]
