"""Loop composition of a coset section, to order 4.

The product x*y of the section Q = {exp(xi + phi(xi))} is defined by

    exp(z + phi(z)) = exp(x + phi(x)) . exp(y + phi(y)) . exp(h),   z in V, h in h,

and solved degree by degree (`solve_loop_oracle`). `closed_form_expansion`
evaluates the published coefficient formulas for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .algebra import LieAlgebra, Split, Vec, as_vec, check_subalgebra, zero_vec
from .jets import (
    MAX_DEGREE,
    Dual,
    MultilinearMap,
    Ring,
    Series,
    bch4,
    loop_ring,
    polarize,
)

HALF = Fraction(1, 2)


class InvalidSplit(ValueError):
    """The complement h is not a subalgebra; the loop is undefined."""


@dataclass(frozen=True, eq=False)
class SectionJet:
    """phi(xi) = R(xi, xi) + S(xi, xi, xi) with values in h; data in G-coordinates."""

    R: MultilinearMap
    S: MultilinearMap

    def __post_init__(self):
        if self.R.arity != 2 or self.S.arity != 3:
            raise ValueError("R must be bilinear and S trilinear")
        object.__setattr__(self, "R", MultilinearMap(self.R.data, [(0, 1)]))
        object.__setattr__(self, "S", MultilinearMap(self.S.data, [(0, 1, 2)]))

    @classmethod
    def zero(cls, split: Split) -> "SectionJet":
        n, N = split.n, split.dim
        return cls(MultilinearMap.zero((n, n), N), MultilinearMap.zero((n, n, n), N))

    @classmethod
    def from_entries(cls, split: Split, R_entries=(), S_entries=()) -> "SectionJet":
        """Entries are (j, k, alpha, coef) and (j, k, l, alpha, coef), 0-based; symmetrized."""
        n, N = split.n, split.dim
        R = np.full((n, n, N), Fraction(0), dtype=object)
        S = np.full((n, n, n, N), Fraction(0), dtype=object)
        # one representative per unordered index set; all its orderings get the value
        for j, k, alpha, coef in R_entries:
            for a, b in {(j, k), (k, j)}:
                R[a, b, alpha] = Fraction(coef)
        import itertools

        for j, k, l, alpha, coef in S_entries:
            for perm in set(itertools.permutations((j, k, l))):
                S[perm + (alpha,)] = Fraction(coef)
        return cls(MultilinearMap(R), MultilinearMap(S))

    def check_values_in(self, split: Split) -> None:
        n = split.n
        if any(self.R.data[..., :n].ravel()) or any(self.S.data[..., :n].ravel()):
            raise ValueError("R and S must take values in h")

    def phi(self, xi: Series) -> Series:
        return self.R.apply_series(xi, xi) + self.S.apply_series(xi, xi, xi)

    def phi_vec(self, xi) -> Vec:
        return tuple(self.R(xi, xi) + self.S(xi, xi, xi))


def _x_y(split: Split, ring: Ring) -> tuple[Series, Series]:
    n, N = split.n, split.dim
    return Series.linear(ring, range(n), N), Series.linear(ring, range(n, 2 * n), N)


# bidegree in (x, y) of each named coefficient, and the series it lives in
COEFFICIENTS = {
    "K": ("z", 1, 1),
    "L": ("z", 2, 1),
    "M": ("z", 1, 2),
    "P": ("z", 3, 1),
    "Q": ("z", 2, 2),
    "U": ("z", 1, 3),
    "h2": ("h", 1, 1),
    "E": ("h", 2, 1),
    "F": ("h", 1, 2),
}


@dataclass(frozen=True, eq=False)
class LoopExpansion:
    """z(x, y) (V-valued) and h(x, y) (h-valued) as series in x1..xn, y1..yn.

    The degree-4 part of h depends on the unspecified quartic term of phi and is
    only meaningful for that convention (quartic term = 0); z is exact through degree 4.
    Derived loops carry the parameter t and no h-series.
    """

    split: Split
    section: SectionJet
    z: Series
    h: Series | None = None
    label: str = "solver"

    @property
    def ring(self) -> Ring:
        return self.z.ring

    @property
    def n(self) -> int:
        return self.split.n

    def bidegree(self, series: Series, p: int, q: int) -> Series:
        n = self.n
        return series.select(lambda m: sum(m[:n]) == p and sum(m[n:2 * n]) == q)

    def component(self, name: str) -> Series:
        which, p, q = COEFFICIENTS[name]
        series = self.z if which == "z" else self.h
        if series is None:
            raise ValueError(f"{self.label} expansion has no {which}-series")
        return self.bidegree(series, p, q)

    def coefficient_map(self, name: str) -> MultilinearMap:
        """Polarized coefficient: x-slots first, then y-slots. Dual-valued if t is present."""
        which, p, q = COEFFICIENTS[name]
        comp = self.component(name)
        n = self.n
        groups = [list(range(n)), list(range(n, 2 * n))]
        if self.ring.parameter is None:
            return polarize(comp, groups, [p, q])
        base = polarize(comp.parameter_free(), groups, [p, q])
        der = polarize(comp.extract_parameter_derivative(), groups, [p, q])
        data = np.empty(base.data.shape, dtype=object)
        for idx in np.ndindex(base.data.shape):
            data[idx] = Dual(base.data[idx], der.data[idx])
        return MultilinearMap(data)

    def compose(self, x, y) -> Vec:
        """Numeric value of the truncated product at V-vectors x, y."""
        if self.ring.parameter is not None:
            raise ValueError("numeric composition needs a parameter-free expansion")
        xs, ys = self._v_coords(x), self._v_coords(y)
        return self.z.evaluate(list(xs) + list(ys))

    def _v_coords(self, v) -> Vec:
        v = as_vec(v)
        n, N = self.n, self.split.dim
        if len(v) == N:
            if any(v[n:]):
                raise ValueError("argument is not in V")
            return v[:n]
        if len(v) != n:
            raise ValueError(f"expected a vector in V (length {n} or {N})")
        return v

    def compose_series(self, a: Series, b: Series) -> Series:
        """Formal product of two V-valued series (any ring), truncated."""
        if self.ring.parameter is not None:
            raise ValueError("composition uses the parameter-free expansion")
        n = self.n
        for s in (a, b):
            if not all(v[n:] == (0,) * (len(v) - n) for v in s.terms.values()):
                raise ValueError("argument series is not V-valued")
        return self.z.substitute(a.coordinates(n) + b.coordinates(n), a.ring)

    def left_divide_series(self, u: Series, w: Series) -> Series:
        """s with u*s = w, by fixed-point iteration; each pass gains one order."""
        s = w
        for _ in range(2 * MAX_DEGREE + 2):
            err = w - self.compose_series(u, s)
            if err.is_zero():
                return s
            s = s + err
        raise ArithmeticError("left division did not converge")

    def right_divide_series(self, w: Series, v: Series) -> Series:
        """s with s*v = w."""
        s = w
        for _ in range(2 * MAX_DEGREE + 2):
            err = w - self.compose_series(s, v)
            if err.is_zero():
                return s
            s = s + err
        raise ArithmeticError("right division did not converge")

    @cached_property
    def _left_division(self) -> Series:
        x, y = _x_y(self.split, self.ring)
        return self.left_divide_series(x, y)

    @cached_property
    def _right_division(self) -> Series:
        x, y = _x_y(self.split, self.ring)
        return self.right_divide_series(x, y)

    def left_divide(self, u, w) -> Vec:
        """u \\ w, evaluated from the truncated division series."""
        return self._left_division.evaluate(list(self._v_coords(u)) + list(self._v_coords(w)))

    def right_divide(self, w, v) -> Vec:
        """w / v, evaluated from the truncated division series."""
        return self._right_division.evaluate(list(self._v_coords(w)) + list(self._v_coords(v)))

    def group_point(self, xi: Series) -> Series:
        """Normal coordinates xi + phi(xi) of the section point with coordinate xi."""
        return xi + self.section.phi(xi)


def solve_loop_oracle(split: Split, section: SectionJet | None = None) -> LoopExpansion:
    """Solve the projection equation order by order; the defining computation of x*y."""
    check = check_subalgebra(split)
    if not check.passed:
        raise InvalidSplit(f"h is not a subalgebra: {check.detail}")
    section = section or SectionJet.zero(split)
    section.check_values_in(split)
    alg = split.algebra
    ring = loop_ring(split.n)
    x, y = _x_y(split, ring)
    phi = section.phi
    w = bch4(x + phi(x), y + phi(y), alg)
    z = Series.zero(ring, split.dim)
    h = Series.zero(ring, split.dim)
    for degree in range(1, MAX_DEGREE + 1):
        defect = (bch4(w, h, alg) - (z + phi(z))).degree_part(degree)
        # z_d - h_d = defect, split along V + h
        z = z + defect.map_coefficients(split.proj_V)
        h = h - defect.map_coefficients(split.proj_h)
    residual = bch4(w, h, alg) - (z + phi(z))
    if not residual.is_zero():
        raise ArithmeticError("order-by-order solve left a residual")
    return LoopExpansion(split, section, z, h, "solver")


class _Ops:
    """Series-level bracket, projections and R, S for transcribing closed formulas."""

    def __init__(self, split: Split, section: SectionJet):
        self.split, self.section, self.alg = split, section, split.algebra

    def br(self, a: Series, b: Series) -> Series:
        return a.bracket(b, self.alg)

    def Pi(self, a: Series) -> Series:
        return a.map_coefficients(self.split.proj_V)

    def Lam(self, a: Series) -> Series:
        return a.map_coefficients(self.split.proj_h)

    def R(self, a: Series, b: Series) -> Series:
        return self.section.R.apply_series(a, b)

    def S(self, a: Series, b: Series, c: Series) -> Series:
        return self.section.S.apply_series(a, b, c)


PRINTED_INNER = Fraction(-1, 12)
ALTERNATE_INNER = Fraction(-1, 2)


def closed_form_terms(split: Split, section: SectionJet | None = None,
                      inner: Fraction = PRINTED_INNER, completed: bool = False) -> dict[str, Series]:
    """Coefficient series K, L, M, h2, E, F, P, Q, U from the published formulas.

    `inner` is the coefficient of Lam[x, y] inside the double brackets of P and U
    (printed as -1/12; the derivation just above them uses -1/2). With
    `completed`, P and U also get the terms 1/12 Pi[x,[R(x,x),y]] + 1/12 Pi[R(x,x),[x,y]]
    (and mirror) that come from 1/12 [X,[X,Y]] of the group law and are absent in print.
    """
    section = section or SectionJet.zero(split)
    o = _Ops(split, section)
    br, Pi, Lam, R, S = o.br, o.Pi, o.Lam, o.R, o.S
    x, y = _x_y(split, loop_ring(split.n))
    xy = br(x, y)
    yx = br(y, x)
    Pxy = Pi(xy)
    t = {}
    t["K"] = Pxy.scale(HALF)
    t["L"] = (Pi(br(x, xy)).scale(Fraction(-1, 6)) + Pi(br(R(x, x), y)).scale(HALF)
              + Pi(br(x, Pxy)).scale(Fraction(1, 4)) + Pi(br(x, R(x, y))))
    t["M"] = (Pi(br(y, yx)).scale(Fraction(1, 3)) + Pi(br(x, R(y, y))).scale(HALF)
              - Pi(br(y, Pi(yx))).scale(Fraction(1, 4)) + Pi(br(y, R(x, y))))
    t["h2"] = xy.scale(-HALF) + Pxy.scale(HALF) + R(x, y).scale(2)
    E = (R(x, Pxy) + S(x, x, y).scale(3) + Lam(br(x, xy)).scale(Fraction(1, 6))
         - Lam(br(x, Pxy)).scale(Fraction(1, 4)) - Lam(br(R(x, x), y)).scale(HALF) - Lam(br(x, R(x, y))))
    F = (R(y, Pxy) + S(x, y, y).scale(3) - Lam(br(y, yx)).scale(Fraction(1, 3))
         + Lam(br(y, Pi(yx))).scale(Fraction(1, 4)) - Lam(br(x, R(y, y))).scale(HALF) - Lam(br(y, R(x, y))))
    t["E"], t["F"] = E, F
    inner_pu = Lam(xy).scale(inner) + R(x, y).scale(2)
    inner_q = Lam(xy).scale(-HALF) + R(x, y).scale(2)
    t["P"] = (Pi(br(y, S(x, x, x))).scale(-HALF) + Pi(br(x, br(x, inner_pu))).scale(Fraction(1, 12))
              + Pi(br(x, E)).scale(HALF))
    t["U"] = (Pi(br(x, S(y, y, y))).scale(HALF) + Pi(br(y, br(y, inner_pu))).scale(Fraction(1, 12))
              + Pi(br(y, F)).scale(HALF))
    if completed:
        t["P"] = t["P"] + (Pi(br(x, br(R(x, x), y))) + Pi(br(R(x, x), xy))).scale(Fraction(1, 12))
        t["U"] = t["U"] + (Pi(br(y, br(R(y, y), x))) + Pi(br(R(y, y), yx))).scale(Fraction(1, 12))
    t["Q"] = (Pi(br(y, E)).scale(HALF) + Pi(br(x, F)).scale(HALF) - Pi(br(Pxy, xy)).scale(Fraction(1, 8))
              + Pi(br(Pxy, R(x, y))).scale(HALF) + Pi(br(x, br(y, inner_q))).scale(Fraction(1, 12))
              + Pi(br(y, br(x, inner_q))).scale(Fraction(1, 12)) + Pi(br(x, br(x, R(y, y)))).scale(Fraction(1, 12))
              + Pi(br(y, br(y, R(x, x)))).scale(Fraction(1, 12))
              - Pi(br(y, br(x, xy))).scale(Fraction(1, 48)) - Pi(br(x, br(y, xy))).scale(Fraction(1, 48)))
    return t


def closed_form_expansion(split: Split, section: SectionJet | None = None,
                          inner: Fraction = PRINTED_INNER, completed: bool = False) -> LoopExpansion:
    section = section or SectionJet.zero(split)
    t = closed_form_terms(split, section, inner, completed)
    x, y = _x_y(split, loop_ring(split.n))
    z = x + y
    for name in ("K", "L", "M", "P", "Q", "U"):
        z = z + t[name]
    h = t["h2"] + t["E"] + t["F"]
    return LoopExpansion(split, section, z, h, "closed-form")


def phi_series(section: SectionJet, xi: Series) -> Series:
    return section.phi(xi)


def _direction(split: Split, ring: Ring, zeta) -> Series:
    n, _N = split.n, split.dim
    zeta = split.embed(zeta)
    if any(zeta[n:]):
        raise ValueError("direction must lie in V")
    return Series.scaled(ring, ring.parameter, zeta)


def derived_loop_u(base: LoopExpansion, zeta) -> LoopExpansion:
    """x ._u y = u \\ ((u*x)*y) with u = t*zeta, t*t = 0."""
    split = base.split
    ring = loop_ring(split.n, parameter=True)
    x, y = _x_y(split, ring)
    u = _direction(split, ring, zeta)
    uxy = base.compose_series(base.compose_series(u, x), y)
    z = base.left_divide_series(u, uxy)
    return LoopExpansion(split, base.section, z, None, f"derived-u{tuple(zeta)}")


def derived_loop_v(base: LoopExpansion, tau) -> LoopExpansion:
    """x (1/v) y = (x*(y*v)) / v with v = t*tau, t*t = 0."""
    split = base.split
    ring = loop_ring(split.n, parameter=True)
    x, y = _x_y(split, ring)
    v = _direction(split, ring, tau)
    xyv = base.compose_series(x, base.compose_series(y, v))
    z = base.right_divide_series(xyv, v)
    return LoopExpansion(split, base.section, z, None, f"derived-v{tuple(tau)}")


def isomorphism_defect_u(base: LoopExpansion, zeta) -> Series:
    """Pi-part of u^-1 C^-1 A B u, where A, B, C are Psi_u of x, y and x ._u y.

    Zero exactly when Psi_u(x) = (u*x) u^-1 carries ._u to the product of the
    section Q u^-1 taken along u H u^-1.
    """
    split, alg = base.split, base.split.algebra
    ring = loop_ring(split.n, parameter=True)
    x, y = _x_y(split, ring)
    u = _direction(split, ring, zeta)
    g = base.group_point
    U = g(u)
    derived = derived_loop_u(base, zeta)
    xy = derived.z

    def psi(p: Series) -> Series:
        return bch4(g(base.compose_series(u, p)), -U, alg)

    A, B, C = psi(x), psi(y), psi(xy)
    total = bch4(-U, bch4(-C, bch4(A, bch4(B, U, alg), alg), alg), alg)
    return total.map_coefficients(split.proj_V)


def projection_defect_v(base: LoopExpansion, tau) -> Series:
    """Pi-part of v^-1 (x (1/v) y)^-1 x y v; zero when the derived product is the projection along v H v^-1."""
    split, alg = base.split, base.split.algebra
    ring = loop_ring(split.n, parameter=True)
    x, y = _x_y(split, ring)
    v = _direction(split, ring, tau)
    g = base.group_point
    V = g(v)
    w = g(derived_loop_v(base, tau).z)
    total = bch4(-V, bch4(-w, bch4(g(x), bch4(g(y), V, alg), alg), alg), alg)
    return total.map_coefficients(split.proj_V)


def _quadratic(q0: MultilinearMap, q1: MultilinearMap | None, a: Series, b: Series) -> Series:
    """q(a, b) with q = q0 + t q1."""
    out = q0.apply_series(a, b)
    if q1 is not None:
        out = out + q1.apply_series(a, b).times_parameter()
    return out


def change_coordinates(exp: LoopExpansion, q) -> LoopExpansion:
    """The same loop in coordinates x' = x + q(x, x).

    q is a symmetric bilinear V x V -> V map (values in G-coordinates, V-part only),
    Fraction- or Dual-valued. The h-series is dropped: it belongs to the original chart.
    """
    split, ring = exp.split, exp.ring
    n, _N = split.n, split.dim
    data = q.data if isinstance(q, MultilinearMap) else np.asarray(q, dtype=object)
    if any(x != 0 for x in data[..., n:].ravel()):
        raise ValueError("q must take values in V")
    if any(isinstance(x, Dual) for x in data.ravel()):
        if ring.parameter is None:
            raise ValueError("a t-dependent change needs an expansion carrying t")
        q0 = MultilinearMap(np.vectorize(lambda x: Dual._parts(x)[0], otypes=[object])(data), [(0, 1)])
        q1 = MultilinearMap(np.vectorize(lambda x: Fraction(Dual._parts(x)[1]), otypes=[object])(data), [(0, 1)])
    else:
        q0, q1 = MultilinearMap(data, [(0, 1)]), None

    x, y = _x_y(split, ring)

    def inverse(v: Series) -> Series:
        # psi = v - q(psi, psi), iterated to the truncation order
        psi = v
        for _ in range(MAX_DEGREE):
            psi = v - _quadratic(q0, q1, psi, psi)
        return psi

    psi_x, psi_y = inverse(x), inverse(y)
    values = psi_x.coordinates(n) + psi_y.coordinates(n)
    if ring.parameter is not None:
        values.append({ring.var(ring.parameter): Fraction(1)})
    w = exp.z.substitute(values, ring)
    z = w + _quadratic(q0, q1, w, w)
    return LoopExpansion(split, exp.section, z, None, f"{exp.label}-recoordinated")


def skew_normalized(exp: LoopExpansion) -> LoopExpansion:
    """Recoordinate so that the quadratic term K is skew (x*x = 2x to second order).

    In such coordinates the torsion is -K and the curvature formula in K, L, M applies.
    """
    K = exp.coefficient_map("K").data
    sym = (K + np.swapaxes(K, 0, 1)) * Fraction(1, 2)
    if not any(x != 0 for x in sym.ravel()):
        return exp
    return change_coordinates(exp, sym * Fraction(-1, 2))


def group_expansion(algebra: LieAlgebra) -> Series:
    """bch4(x, y) in loop coordinates with V = G; the loop of the trivial split."""
    split = Split(algebra, algebra.dim)
    x, y = _x_y(split, loop_ring(algebra.dim))
    return bch4(x, y, algebra)


def embed_v(split: Split, v) -> Vec:
    out = split.embed(v)
    if any(out[split.n:]):
        raise ValueError("vector is not in V")
    return out


__all__ = [
    "SectionJet", "LoopExpansion", "InvalidSplit", "solve_loop_oracle", "closed_form_terms",
    "closed_form_expansion", "derived_loop_u", "derived_loop_v", "isomorphism_defect_u",
    "projection_defect_v", "group_expansion", "change_coordinates", "skew_normalized", "PRINTED_INNER", "ALTERNATE_INNER", "COEFFICIENTS",
    "zero_vec",
]
