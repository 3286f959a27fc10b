"""Exact Lie-algebra arithmetic over the rationals and the adapted splitting G = V + h."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Vec = tuple  # tuple of Fraction, length N


def rat(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"malformed rational {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def zero_vec(dim: int) -> Vec:
    return (Fraction(0),) * dim


def unit_vec(dim: int, index: int) -> Vec:
    v = [Fraction(0)] * dim
    v[index] = Fraction(1)
    return tuple(v)


def as_vec(x, dim: int | None = None) -> Vec:
    out = tuple(rat(c) for c in x)
    if dim is not None and len(out) != dim:
        raise ValueError(f"expected a vector of length {dim}, got {len(out)}")
    return out


def vec_add(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(alpha, x: Vec) -> Vec:
    return tuple(alpha * a for a in x)


def is_zero(x) -> bool:
    return not any(x)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k (0-based)."""

    constants: np.ndarray
    names: tuple[str, ...] = ()
    _table: tuple = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.constants, dtype=object)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise ValueError("structure constants must have shape (N, N, N) with N >= 1")
        c = np.vectorize(rat, otypes=[object])(c)
        object.__setattr__(self, "constants", c)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(c.shape[0])))
        # sparse bracket table: table[i][j] = ((k, c), ...)
        n = c.shape[0]
        table = tuple(
            tuple(tuple((k, c[i, j, k]) for k in range(n) if c[i, j, k] != 0) for j in range(n))
            for i in range(n)
        )
        object.__setattr__(self, "_table", table)

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, entries: Iterable, names: Sequence[str] = ()) -> "LieAlgebra":
        """Build from (i, j, k, coef) entries (0-based), completing [e_j, e_i] = -[e_i, e_j].

        Entries given explicitly are kept as given; only missing mirror entries are filled.
        """
        c = np.full((dim, dim, dim), Fraction(0), dtype=object)
        given = set()
        for i, j, k, coef in entries:
            c[i, j, k] = rat(coef)
            given.add((i, j, k))
        for i, j, k in list(given):
            if (j, i, k) not in given:
                c[j, i, k] = -c[i, j, k]
        return cls(c, tuple(names))

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(np.full((dim, dim, dim), Fraction(0), dtype=object))

    def basis(self, index: int) -> Vec:
        return unit_vec(self.dim, index)

    def bracket(self, x, y) -> Vec:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"dimension mismatch: algebra has dim {self.dim}, got {len(x)} and {len(y)}")
        out = [Fraction(0)] * self.dim
        table = self._table
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                w = xi * yj
                for k, ck in row[j]:
                    out[k] += w * ck
        return tuple(out)

    def bracket_terms(self, i: int, j: int):
        """Nonzero (k, c) pairs of [e_i, e_j]."""
        return self._table[i][j]

    def is_abelian(self) -> bool:
        return all(not entry for row in self._table for entry in row)

    def change_basis(self, basis: Sequence[Sequence], names: Sequence[str] = ()) -> "LieAlgebra":
        """Structure constants in a new basis given by the rows of `basis` (old coordinates)."""
        b = [as_vec(v, self.dim) for v in basis]
        if len(b) != self.dim:
            raise ValueError("need exactly N basis vectors")
        inv = matrix_inverse([list(v) for v in b])  # columns of b^T
        c = np.full((self.dim,) * 3, Fraction(0), dtype=object)
        for i, j in itertools.product(range(self.dim), repeat=2):
            w = self.bracket(b[i], b[j])
            # coordinates of w in the new basis: w = sum_k coords[k] b[k]
            coords = [sum(w[m] * inv[m][k] for m in range(self.dim)) for k in range(self.dim)]
            for k in range(self.dim):
                c[i, j, k] = coords[k]
        return LieAlgebra(c, tuple(names))


def matrix_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan; raises ValueError if singular."""
    n = len(rows)
    aug = [[rat(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q, via reduced row echelon form."""
    a = [[rat(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for row_index, pcol in enumerate(pivots):
            x[pcol] = -a[row_index][fcol]
        basis.append(x)
    return basis


def rank(rows: list[list[Fraction]], ncols: int) -> int:
    return ncols - len(nullspace(rows, ncols)) if rows else 0


@dataclass(frozen=True, eq=False)
class Split:
    """Adapted splitting: V = span(e_1..e_n), h = span(e_{n+1}..e_N).

    n == N is allowed and means h = {0}, the loop is then the group itself.
    """

    algebra: LieAlgebra
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= self.algebra.dim:
            raise ValueError(f"V dimension must satisfy 1 <= n <= N={self.algebra.dim}, got {self.n}")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def proj_V(self, x) -> Vec:
        n = self.n
        return tuple(c if i < n else Fraction(0) for i, c in enumerate(x))

    def proj_h(self, x) -> Vec:
        n = self.n
        return tuple(Fraction(0) if i < n else c for i, c in enumerate(x))

    def in_V(self, x) -> bool:
        return all(c == 0 for c in x[self.n:])

    def in_h(self, x) -> bool:
        return all(c == 0 for c in x[: self.n])

    def embed(self, v) -> Vec:
        """V-coordinates (length n) to G-coordinates (length N)."""
        v = as_vec(v)
        if len(v) == self.dim:
            return v
        if len(v) != self.n:
            raise ValueError(f"expected {self.n} V-coordinates")
        return v + zero_vec(self.dim - self.n)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def check_antisymmetry(algebra: LieAlgebra) -> Check:
    c = algebra.constants
    for i, j, k in itertools.product(range(algebra.dim), repeat=3):
        if c[i, j, k] != -c[j, i, k]:
            return Check("antisymmetry", False, (i + 1, j + 1, k + 1),
                         f"c[{i + 1}][{j + 1}][{k + 1}]={c[i, j, k]} but c[{j + 1}][{i + 1}][{k + 1}]={c[j, i, k]}")
    return Check("antisymmetry", True)


def check_jacobi(algebra: LieAlgebra) -> Check:
    e = [algebra.basis(i) for i in range(algebra.dim)]
    br = algebra.bracket
    for i, j, k in itertools.product(range(algebra.dim), repeat=3):
        total = vec_add(vec_add(br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i])), br(br(e[k], e[i]), e[j]))
        if not is_zero(total):
            return Check("jacobi", False, (i + 1, j + 1, k + 1), f"cyclic sum = {fmt_vec(total)}")
    return Check("jacobi", True)


def check_subalgebra(split: Split) -> Check:
    alg, n = split.algebra, split.n
    for i, j in itertools.product(range(n, alg.dim), repeat=2):
        w = alg.bracket(alg.basis(i), alg.basis(j))
        if not split.in_h(w):
            k = next(k for k in range(n) if w[k] != 0)
            return Check("subalgebra", False, (i + 1, j + 1, k + 1),
                         f"[e{i + 1},e{j + 1}] = {fmt_vec(w)} has a V-component")
    return Check("subalgebra", True)


def validate(algebra: LieAlgebra, split: Split | None = None) -> ValidationReport:
    checks = [check_antisymmetry(algebra), check_jacobi(algebra)]
    if split is not None:
        checks.append(check_subalgebra(split))
    return ValidationReport(tuple(checks))


def fmt_vec(x, names: Sequence[str] | None = None) -> str:
    names = names or [f"e{i + 1}" for i in range(len(x))]
    parts = []
    for c, name in zip(x, names):
        if c == 0:
            continue
        if c == 1:
            parts.append(f"+{name}")
        elif c == -1:
            parts.append(f"-{name}")
        else:
            s = str(c)
            parts.append(f"{'+' if c > 0 else ''}{s}*{name}")
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out
