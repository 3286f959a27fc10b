"""Truncated formal series with Lie-algebra-valued coefficients.

A series is a polynomial in scalar variables (typically the coordinates x^1..x^n,
y^1..y^n of two V-valued arguments) whose coefficients are vectors of the Lie
algebra. Everything of total degree > 4 is discarded. An optional nilpotent
parameter t (t*t = 0) supports exact first derivatives; it counts towards the
total degree, so a series is exact through degree 3 in the other variables at
first order in t.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import LieAlgebra, Vec, as_vec, is_zero, rat, vec_add, zero_vec

MAX_DEGREE = 4

Mono = tuple  # exponent tuple, one entry per ring variable


@dataclass(frozen=True)
class Ring:
    """Variables of a series. `parameter` is the index of the nilpotent variable, if any."""

    names: tuple[str, ...]
    parameter: int | None = None

    @property
    def nvars(self) -> int:
        return len(self.names)

    def one(self) -> Mono:
        return (0,) * self.nvars

    def var(self, index: int) -> Mono:
        m = [0] * self.nvars
        m[index] = 1
        return tuple(m)

    def mul(self, m1: Mono, m2: Mono) -> Mono | None:
        m = tuple(a + b for a, b in zip(m1, m2))
        if sum(m) > MAX_DEGREE:
            return None
        if self.parameter is not None and m[self.parameter] > 1:
            return None
        return m

    def index(self, name: str) -> int:
        return self.names.index(name)

    def with_parameter(self, name: str = "t") -> "Ring":
        if self.parameter is not None:
            raise ValueError("ring already has a parameter")
        return Ring(self.names + (name,), len(self.names))

    def embed(self, mono: Mono, target: "Ring") -> Mono:
        """Map a monomial into a ring that extends this one by trailing variables."""
        return tuple(mono) + (0,) * (target.nvars - self.nvars)


def loop_ring(n: int, parameter: bool = False) -> Ring:
    names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{i + 1}" for i in range(n))
    ring = Ring(names)
    return ring.with_parameter("t") if parameter else ring


# scalar polynomials: dict Mono -> Fraction

def poly_mul(ring: Ring, p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = ring.mul(m1, m2)
            if m is None:
                continue
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def poly_var(ring: Ring, index: int) -> dict:
    return {ring.var(index): Fraction(1)}


class Series:
    """Truncated polynomial map with coefficients in a Lie algebra of dimension `dim`."""

    __slots__ = ("ring", "dim", "terms")

    def __init__(self, ring: Ring, dim: int, terms: dict | None = None):
        self.ring = ring
        self.dim = dim
        clean = {}
        for m, v in (terms or {}).items():
            if len(m) != ring.nvars:
                raise ValueError("monomial does not match ring")
            if sum(m) > MAX_DEGREE or (ring.parameter is not None and m[ring.parameter] > 1):
                continue
            if not is_zero(v):
                clean[m] = tuple(v)
        self.terms = clean

    # construction

    @classmethod
    def zero(cls, ring: Ring, dim: int) -> "Series":
        return cls(ring, dim)

    @classmethod
    def constant(cls, ring: Ring, vec) -> "Series":
        v = as_vec(vec)
        return cls(ring, len(v), {ring.one(): v})

    @classmethod
    def linear(cls, ring: Ring, variables: Sequence[int], dim: int) -> "Series":
        """The vector variable sum_i v_i e_i built from ring variables `variables`."""
        terms = {}
        for i, var in enumerate(variables):
            v = [Fraction(0)] * dim
            v[i] = Fraction(1)
            terms[ring.var(var)] = tuple(v)
        return cls(ring, dim, terms)

    @classmethod
    def scaled(cls, ring: Ring, var: int, vec) -> "Series":
        """vec times one scalar variable."""
        v = as_vec(vec)
        return cls(ring, len(v), {ring.var(var): v})

    @classmethod
    def from_coordinates(cls, ring: Ring, coords: Sequence[dict], dim: int) -> "Series":
        terms: dict = {}
        for i, p in enumerate(coords):
            for m, c in p.items():
                v = terms.setdefault(m, [Fraction(0)] * dim)
                v[i] += c
        return cls(ring, dim, {m: tuple(v) for m, v in terms.items()})

    # arithmetic

    def _check(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise TypeError("expected a Series")
        if other.ring != self.ring or other.dim != self.dim:
            raise ValueError("series signature mismatch (ring or dimension differ)")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        terms = dict(self.terms)
        for m, v in other.terms.items():
            terms[m] = vec_add(terms[m], v) if m in terms else v
        return Series(self.ring, self.dim, terms)

    def __neg__(self) -> "Series":
        return Series(self.ring, self.dim, {m: tuple(-c for c in v) for m, v in self.terms.items()})

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, alpha) -> "Series":
        alpha = rat(alpha)
        if alpha == 0:
            return Series(self.ring, self.dim)
        return Series(self.ring, self.dim, {m: tuple(alpha * c for c in v) for m, v in self.terms.items()})

    def __rmul__(self, alpha) -> "Series":
        return self.scale(alpha)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"Series({len(self.terms)} terms over {self.ring.names})"

    def bracket(self, other: "Series", algebra: LieAlgebra) -> "Series":
        self._check(other)
        ring = self.ring
        right = sorted(other.terms.items(), key=lambda kv: sum(kv[0]))
        right_deg = [sum(m) for m, _ in right]
        out: dict = {}
        for m1, v1 in self.terms.items():
            room = MAX_DEGREE - sum(m1)
            for (m2, v2), d2 in zip(right, right_deg):
                if d2 > room:
                    break
                m = ring.mul(m1, m2)
                if m is None:
                    continue
                w = algebra.bracket(v1, v2)
                if m in out:
                    out[m] = vec_add(out[m], w)
                else:
                    out[m] = w
        return Series(ring, self.dim, out)

    def map_coefficients(self, f: Callable[[Vec], Vec], dim: int | None = None) -> "Series":
        """Apply a linear map to every coefficient."""
        return Series(self.ring, dim or self.dim, {m: f(v) for m, v in self.terms.items()})

    def select(self, pred: Callable[[Mono], bool]) -> "Series":
        return Series(self.ring, self.dim, {m: v for m, v in self.terms.items() if pred(m)})

    def degree_part(self, degree: int) -> "Series":
        return self.select(lambda m: sum(m) == degree)

    def min_degree(self) -> int | None:
        return min((sum(m) for m in self.terms), default=None)

    def coordinate(self, i: int) -> dict:
        return {m: v[i] for m, v in self.terms.items() if v[i] != 0}

    def coordinates(self, count: int | None = None) -> list[dict]:
        return [self.coordinate(i) for i in range(count if count is not None else self.dim)]

    def evaluate(self, point: Sequence) -> Vec:
        """Numeric value at a point (one rational per ring variable)."""
        point = [rat(p) for p in point]
        out = zero_vec(self.dim)
        for m, v in self.terms.items():
            w = Fraction(1)
            for p, e in zip(point, m):
                if e:
                    w *= p ** e
            if w:
                out = vec_add(out, tuple(w * c for c in v))
        return out

    def substitute(self, values: Sequence[dict], ring: Ring) -> "Series":
        """Replace each variable of self.ring by a scalar polynomial over `ring`."""
        if len(values) != self.ring.nvars:
            raise ValueError("need one value per variable")
        if self.ring.parameter is not None:
            # only the identity on t is allowed, so t*t = 0 survives the substitution
            if ring.parameter is None or values[self.ring.parameter] != {ring.var(ring.parameter): Fraction(1)}:
                raise ValueError("a series carrying a parameter can only be substituted with t -> t")
        cache: dict = {self.ring.one(): {ring.one(): Fraction(1)}}

        def power(m: Mono) -> dict:
            if m in cache:
                return cache[m]
            i = next(k for k, e in enumerate(m) if e)
            rest = list(m)
            rest[i] -= 1
            p = poly_mul(ring, power(tuple(rest)), values[i])
            cache[m] = p
            return p

        out: dict = {}
        for m in sorted(self.terms, key=sum):
            v = self.terms[m]
            for mm, c in power(m).items():
                w = tuple(c * a for a in v)
                out[mm] = vec_add(out[mm], w) if mm in out else w
        return Series(ring, self.dim, out)

    def lift(self, ring: Ring) -> "Series":
        """View this series in a ring with extra trailing variables."""
        return Series(ring, self.dim, {self.ring.embed(m, ring): v for m, v in self.terms.items()})

    # parameter handling

    def parameter_free(self) -> "Series":
        p = self._param()
        return self.select(lambda m: m[p] == 0)

    def _param(self) -> int:
        if self.ring.parameter is None:
            raise ValueError("series carries no formal parameter")
        return self.ring.parameter

    def times_parameter(self) -> "Series":
        """t * self (terms already containing t drop out)."""
        p = self._param()
        out = {}
        for m, v in self.terms.items():
            if m[p] == 0:
                mm = list(m)
                mm[p] = 1
                out[tuple(mm)] = v
        return Series(self.ring, self.dim, out)

    def extract_parameter_derivative(self) -> "Series":
        """Coefficient of t, i.e. the exact derivative at t = 0 (same ring, t-free)."""
        p = self._param()
        out = {}
        for m, v in self.terms.items():
            if m[p] == 1:
                mm = list(m)
                mm[p] = 0
                out[tuple(mm)] = v
        return Series(self.ring, self.dim, out)


def series_combine(alpha, a: Series, beta, b: Series) -> Series:
    return a.scale(alpha) + b.scale(beta)


def series_bracket(a: Series, b: Series, algebra: LieAlgebra) -> Series:
    return a.bracket(b, algebra)


def extract_parameter_derivative(a: Series) -> Series:
    return a.extract_parameter_derivative()


def bch4(a: Series, b: Series, algebra: LieAlgebra) -> Series:
    """Group product in normal coordinates, truncated at degree 4."""
    ab = a.bracket(b, algebra)
    a_ab = a.bracket(ab, algebra)
    b_ab = b.bracket(ab, algebra)
    b_a_ab = b.bracket(a_ab, algebra)
    a_b_ab = a.bracket(b_ab, algebra)
    # [b,[b,a]] = -[b,[a,b]]
    return (a + b + ab.scale(Fraction(1, 2)) + a_ab.scale(Fraction(1, 12)) - b_ab.scale(Fraction(1, 12))
            - b_a_ab.scale(Fraction(1, 48)) - a_b_ab.scale(Fraction(1, 48)))


def bch4_vec(a, b, algebra: LieAlgebra) -> Vec:
    """The truncated group law on plain vectors (no truncation by degree applies)."""
    br = algebra.bracket
    a, b = as_vec(a, algebra.dim), as_vec(b, algebra.dim)
    ab = br(a, b)
    a_ab, b_ab = br(a, ab), br(b, ab)
    terms = [(1, a), (1, b), (Fraction(1, 2), ab), (Fraction(1, 12), a_ab), (Fraction(-1, 12), b_ab),
             (Fraction(-1, 48), br(b, a_ab)), (Fraction(-1, 48), br(a, b_ab))]
    out = zero_vec(algebra.dim)
    for c, v in terms:
        out = vec_add(out, tuple(c * x for x in v))
    return out


def bch4_inverse(a):
    """Group inverse in normal coordinates is negation."""
    if isinstance(a, Series):
        return -a
    return tuple(-rat(c) for c in a)


class Dual:
    """a + b*t with t*t = 0; scalars for first-order parameter derivatives of tensors."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = rat(a) if not isinstance(a, Fraction) else a
        self.b = rat(b) if not isinstance(b, Fraction) else b

    @staticmethod
    def _parts(x):
        if isinstance(x, Dual):
            return x.a, x.b
        return x, 0

    def __add__(self, other):
        a, b = self._parts(other)
        return Dual(self.a + a, self.b + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        return Dual(self.a - a, self.b - b)

    def __rsub__(self, other):
        a, b = self._parts(other)
        return Dual(a - self.a, b - self.b)

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __mul__(self, other):
        a, b = self._parts(other)
        return Dual(self.a * a, self.a * b + self.b * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            raise TypeError("division by a dual number is not needed here")
        return Dual(self.a / other, self.b / other)

    def __eq__(self, other):
        a, b = self._parts(other)
        return self.a == a and self.b == b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


def dual_parts(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split an object array of Duals/Fractions into value and t-coefficient arrays."""
    val = np.empty(arr.shape, dtype=object)
    der = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        a, b = Dual._parts(x)
        val[idx] = rat(a)
        der[idx] = rat(b)
    return val, der


def _zero_like(shape) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


class MultilinearMap:
    """Dense multilinear map: data[i_1, ..., i_k, :] is the value on basis vectors.

    `symmetric` lists groups of slot positions; the data is symmetrized over each
    group on construction.
    """

    __slots__ = ("data", "symmetric")

    def __init__(self, data, symmetric: Sequence[Sequence[int]] = ()):
        data = np.asarray(data, dtype=object)
        if data.ndim < 1:
            raise ValueError("data must have at least the value axis")
        self.symmetric = tuple(tuple(g) for g in symmetric)
        for group in self.symmetric:
            data = _symmetrize(data, group)
        self.data = data

    @property
    def arity(self) -> int:
        return self.data.ndim - 1

    @property
    def arg_dims(self) -> tuple[int, ...]:
        return self.data.shape[:-1]

    @property
    def value_dim(self) -> int:
        return self.data.shape[-1]

    @classmethod
    def zero(cls, arg_dims: Sequence[int], value_dim: int, symmetric=()) -> "MultilinearMap":
        return cls(_zero_like(tuple(arg_dims) + (value_dim,)), symmetric)

    @classmethod
    def from_function(cls, arg_dims: Sequence[int], value_dim: int, f, symmetric=()) -> "MultilinearMap":
        data = np.empty(tuple(arg_dims) + (value_dim,), dtype=object)
        for idx in itertools.product(*(range(d) for d in arg_dims)):
            data[idx] = np.array(list(f(*idx)), dtype=object)
        return cls(data, symmetric)

    def __call__(self, *args) -> np.ndarray:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        res = self.data
        for arg, d in zip(args, self.arg_dims):
            v = _restrict(arg, d)
            res = np.tensordot(v, res, axes=(0, 0))
        return res

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearMap):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def apply_series(self, *args: Series) -> Series:
        """Formal composition with series arguments, truncated."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        ring = args[0].ring
        coords = []
        for a, d in zip(args, self.arg_dims):
            if a.ring != ring:
                raise ValueError("series arguments live in different rings")
            if a.dim != d and any(a.coordinate(i) for i in range(d, a.dim)):
                raise ValueError("series argument has components outside the domain slot")
            coords.append(a.coordinates(d))
        out: dict = {}
        prefix_cache: dict = {(): {ring.one(): Fraction(1)}}

        def prefix(idx):
            if idx not in prefix_cache:
                prefix_cache[idx] = poly_mul(ring, prefix(idx[:-1]), coords[len(idx) - 1][idx[-1]])
            return prefix_cache[idx]

        for idx in itertools.product(*(range(d) for d in self.arg_dims)):
            v = self.data[idx]
            if not any(v):
                continue
            p = prefix(idx)
            for m, c in p.items():
                w = tuple(c * x for x in v)
                out[m] = vec_add(out[m], w) if m in out else w
        return Series(ring, self.value_dim, out)

    def restrict_values(self, dim: int) -> "MultilinearMap":
        return MultilinearMap(self.data[..., :dim], self.symmetric)

    def permute(self, order: Sequence[int]) -> "MultilinearMap":
        """New map whose slot s reads argument order[s] of this one."""
        return MultilinearMap(np.transpose(self.data, tuple(order) + (self.arity,)))

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        return MultilinearMap(self.data + other.data)

    def __sub__(self, other: "MultilinearMap") -> "MultilinearMap":
        return MultilinearMap(self.data - other.data)

    def scale(self, alpha) -> "MultilinearMap":
        return MultilinearMap(self.data * alpha)


def _restrict(arg, d: int) -> np.ndarray:
    v = np.asarray(list(arg), dtype=object)
    if v.shape[0] == d:
        return v
    if v.shape[0] > d and not any(v[d:]):
        return v[:d]
    raise ValueError(f"argument of length {v.shape[0]} does not fit a slot of dimension {d}")


def _symmetrize(data: np.ndarray, group: Sequence[int]) -> np.ndarray:
    group = list(group)
    if len(group) < 2:
        return data
    k = data.ndim
    perms = list(itertools.permutations(group))
    total = None
    for perm in perms:
        axes = list(range(k))
        for src, dst in zip(group, perm):
            axes[src] = dst
        t = np.transpose(data, axes)
        total = t if total is None else total + t
    return total / len(perms)


def polarize(component: Series, groups: Sequence[Sequence[int]], degrees: Sequence[int]) -> MultilinearMap:
    """Symmetric polarization of a multi-homogeneous series component.

    groups[g] lists the ring variables of vector argument g (its coordinates),
    degrees[g] the degree in that argument. Slots come out grouped in order.
    """
    dims = [len(g) for g in groups]
    slots = [d for d, deg in zip(dims, degrees) for _ in range(deg)]
    data = _zero_like(tuple(slots) + (component.dim,))
    var_of = [g for g, deg in zip(groups, degrees) for _ in range(deg)]
    for idx in itertools.product(*(range(d) for d in slots)):
        mono = [0] * component.ring.nvars
        for var_group, i in zip(var_of, idx):
            mono[var_group[i]] += 1
        v = component.terms.get(tuple(mono))
        if v is None:
            continue
        weight = 1
        start = 0
        for deg in degrees:
            weight *= multinomial(Counter(idx[start:start + deg]).values())
            start += deg
        data[idx] = np.array([c / weight for c in v], dtype=object)
    symmetric = []
    start = 0
    for deg in degrees:
        if deg > 1:
            symmetric.append(tuple(range(start, start + deg)))
        start += deg
    return MultilinearMap(data, symmetric)
