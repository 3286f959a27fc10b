"""Web structure tensors of the loop at the identity.

Arrays are numpy object arrays indexed by V-basis slots, with a final axis of
G-coordinates (the V-part carries the value; the h-part is zero):

    a[j, k]          a(e_j, e_k)
    b[j, k, l]       b(e_j, e_k, e_l)
    c[j, k, l, m]    c(e_j, e_k, e_l, e_m) = derivative of b(e_j, e_k, e_l) along e_m, first foliation
    d[j, k, l, m]    same along the second foliation
    nabla1_a[j, k, l], nabla2_a[j, k, l]: derivative of a(e_j, e_k) along e_l

Two routes are provided: the generic formulas in terms of the expansion
coefficients K, L, M, P, Q, and the closed forms in terms of brackets, Pi and R.
The derivative route differentiates the tensors of the derived loops in t.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Split, unit_vec
from .jets import MultilinearMap, Series, dual_parts
from .report import FAIL, INFO, PASS, Record
from .loops import LoopExpansion, SectionJet, derived_loop_u, derived_loop_v, skew_normalized

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def _zeros(shape) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


def _table(n: int, N: int, arity: int, f) -> np.ndarray:
    out = np.empty((n,) * arity + (N,), dtype=object)
    for idx in itertools.product(range(n), repeat=arity):
        out[idx] = np.asarray(f(*idx), dtype=object)
    return out


@dataclass
class _Coefficients:
    """Polarized coefficient maps of one loop (possibly Dual-valued) as callables."""

    K: MultilinearMap
    L: MultilinearMap
    M: MultilinearMap
    P: MultilinearMap | None = None
    Q: MultilinearMap | None = None

    @classmethod
    def of(cls, exp: LoopExpansion, quartic: bool = False) -> "_Coefficients":
        get = exp.coefficient_map
        if quartic:
            return cls(get("K"), get("L"), get("M"), get("P"), get("Q"))
        return cls(get("K"), get("L"), get("M"))


# generic route: tensors from expansion coefficients

def _a_from(co: _Coefficients):
    return lambda x, y: -co.K(x, y)


def _B_from(co: _Coefficients):
    K, L, M = co.K, co.L, co.M
    return lambda x, y, z: 2 * L(x, y, z) - 2 * M(x, y, z) - K(x, K(y, z)) + K(K(x, y), z)


def _b_from(co: _Coefficients):
    B = _B_from(co)
    return lambda x, y, z: -B(y, x, z)


def _basis(exp_or_split, dual: bool = False):
    split = exp_or_split if isinstance(exp_or_split, Split) else exp_or_split.split
    n, N = split.n, split.dim
    return [np.asarray(unit_vec(N, i), dtype=object) for i in range(n)], n, N


def tensor_a_generic(exp: LoopExpansion) -> np.ndarray:
    e, n, N = _basis(exp)
    a = _a_from(_Coefficients.of(exp))
    return _table(n, N, 2, lambda j, k: a(e[j], e[k]))


def tensor_B(exp: LoopExpansion) -> np.ndarray:
    e, n, N = _basis(exp)
    B = _B_from(_Coefficients.of(exp))
    return _table(n, N, 3, lambda j, k, l: B(e[j], e[k], e[l]))


def tensor_b_generic(exp: LoopExpansion) -> np.ndarray:
    e, n, N = _basis(exp)
    b = _b_from(_Coefficients.of(exp))
    return _table(n, N, 3, lambda j, k, l: b(e[j], e[k], e[l]))


def tensor_c(exp: LoopExpansion) -> np.ndarray:
    """c from the coefficient formula built on 4Q - 6P and L."""
    co = _Coefficients.of(exp, quartic=True)
    a, b, L, P, Q = _a_from(co), _b_from(co), co.L, co.P, co.Q
    e, n, N = _basis(exp)

    def c(x, y, z, t):
        return (4 * Q(y, t, x, z) - 6 * P(y, t, x, z) + a(t, b(x, y, z)) + a(y, b(x, t, z))
                - b(x, a(t, y), z) + a(2 * L(y, t, x), z) - 2 * L(a(x, y), t, z)
                - 2 * L(y, a(x, t), z) - 2 * L(y, t, a(x, z)))

    return _table(n, N, 4, lambda j, k, l, m: c(e[j], e[k], e[l], e[m]))


def tensor_d_generic(exp: LoopExpansion, variant: str = "printed") -> np.ndarray:
    """d from the coefficient formula built on M and the quartic coefficients.

    "printed": (4Q - 6P)(y,x,z,t) - a(b(x,y,z),t) - ... as usually quoted.
    "corrected": the mirror image of the c formula under x*y -> y*x, which has the
    opposite overall sign and 6U(y,z,t,x) in place of 6P(y,x,z,t); it is the one
    that agrees with the derivative of the curvature along the second foliation.
    """
    if variant not in ("printed", "corrected"):
        raise ValueError(f"unknown variant {variant!r}")
    co = _Coefficients.of(exp, quartic=True)
    a, b, M, P, Q = _a_from(co), _b_from(co), co.M, co.P, co.Q
    U = exp.coefficient_map("U")
    e, n, N = _basis(exp)

    def lower(x, y, z, t):
        return (-a(b(x, y, z), t) - a(b(x, y, t), z) + b(x, y, a(z, t)) + a(y, 2 * M(x, z, t))
                - 2 * M(a(y, x), z, t) - 2 * M(y, a(z, x), t) - 2 * M(y, z, a(t, x)))

    if variant == "printed":
        def d(x, y, z, t):
            return 4 * Q(y, x, z, t) - 6 * P(y, x, z, t) + lower(x, y, z, t)
    else:
        def d(x, y, z, t):
            return -4 * Q(y, x, z, t) + 6 * U(y, z, t, x) - lower(x, y, z, t)

    return _table(n, N, 4, lambda j, k, l, m: d(e[j], e[k], e[l], e[m]))


def opposite_loop(exp: LoopExpansion) -> LoopExpansion:
    """x o y = y * x: the same web with the first two foliations exchanged."""
    n = exp.n
    z = Series(exp.ring, exp.z.dim, {m[n:2 * n] + m[:n] + m[2 * n:]: v for m, v in exp.z.terms.items()})
    return LoopExpansion(exp.split, exp.section, z, None, f"{exp.label}-opposite")


# derivative route: differentiate the tensors of the derived loops

def _derived_tensor(exp: LoopExpansion, side: str, which: str) -> np.ndarray:
    e, n, N = _basis(exp)
    make = derived_loop_u if side == "u" else derived_loop_v
    arity = 2 if which == "a" else 3
    out = np.empty((n,) * (arity + 1) + (N,), dtype=object)
    for m in range(n):
        # derived loops need not have skew K; torsion is -K only once it is
        derived = skew_normalized(make(exp, unit_vec(n, m)))
        co = _Coefficients.of(derived)
        f = _a_from(co) if which == "a" else _b_from(co)
        for idx in itertools.product(range(n), repeat=arity):
            value = np.asarray(f(*(e[i] for i in idx)), dtype=object)
            _, der = dual_parts(value)
            out[idx + (m,)] = der
    return out


def nabla1_a_derivative(exp: LoopExpansion) -> np.ndarray:
    return _derived_tensor(exp, "u", "a")


def nabla2_a_derivative(exp: LoopExpansion) -> np.ndarray:
    return _derived_tensor(exp, "v", "a")


def c_derivative(exp: LoopExpansion) -> np.ndarray:
    return _derived_tensor(exp, "u", "b")


def d_derivative(exp: LoopExpansion) -> np.ndarray:
    return _derived_tensor(exp, "v", "b")


# closed forms

class _Vec:
    """Bracket, projections and R on plain vectors of one split."""

    def __init__(self, split: Split, section: SectionJet | None):
        self.split = split
        self.section = section or SectionJet.zero(split)
        self.alg = split.algebra

    def br(self, x, y):
        return np.asarray(self.alg.bracket(tuple(x), tuple(y)), dtype=object)

    def Pi(self, x):
        return np.asarray(self.split.proj_V(tuple(x)), dtype=object)

    def R(self, x, y):
        return self.section.R(x, y)


def tensor_a_closed(split: Split) -> np.ndarray:
    o = _Vec(split, None)
    e, n, N = _basis(split)
    return _table(n, N, 2, lambda j, k: -HALF * o.Pi(o.br(e[j], e[k])))


def _b_closed_fn(o: _Vec, middle=HALF, r_coef=Fraction(-2)):
    br, Pi, R = o.br, o.Pi, o.R
    return lambda x, y, z: (-HALF * Pi(br(br(x, y), z)) + middle * Pi(br(Pi(br(x, y)), z))
                            + r_coef * Pi(br(R(x, y), z)))


def tensor_b_closed(split: Split, section: SectionJet | None = None, variant: str = "statement") -> np.ndarray:
    """Closed-form curvature. variant "statement" is the formula as stated;
    "proof" is the sign pattern of the last line of its proof (-1/2 on the middle term)."""
    o = _Vec(split, section)
    middle = HALF if variant == "statement" else -HALF
    b = _b_closed_fn(o, middle)
    e, n, N = _basis(split)
    return _table(n, N, 3, lambda j, k, l: b(e[j], e[k], e[l]))


def tensor_B_closed(split: Split, section: SectionJet | None = None) -> np.ndarray:
    """The intermediate B of the proof: -1/2 Pi[[x,y],z] + 1/2 Pi[Pi[x,y],z] + 2 Pi[R(x,y),z]."""
    o = _Vec(split, section)
    B = _b_closed_fn(o, HALF, Fraction(2))
    e, n, N = _basis(split)
    return _table(n, N, 3, lambda j, k, l: B(e[j], e[k], e[l]))


def nabla2_a(split: Split, section: SectionJet | None = None) -> np.ndarray:
    """-1/2 Pi[[xi,eta],zeta] + 1/2 Pi[Pi[xi,eta],zeta], indexed [xi, eta, zeta]."""
    o = _Vec(split, section)
    br, Pi = o.br, o.Pi
    e, n, N = _basis(split)
    return _table(n, N, 3, lambda j, k, l: -HALF * Pi(br(br(e[j], e[k]), e[l]))
                  + HALF * Pi(br(Pi(br(e[j], e[k])), e[l])))


def nabla1_a(split: Split, section: SectionJet | None = None) -> np.ndarray:
    o = _Vec(split, section)
    br, Pi, R = o.br, o.Pi, o.R
    e, n, N = _basis(split)

    def f(xi, eta, zeta):
        return (-QUARTER * Pi(br(br(xi, zeta), eta)) + QUARTER * Pi(br(Pi(br(xi, zeta)), eta))
                - Pi(br(R(xi, zeta), eta)) + QUARTER * Pi(br(br(eta, zeta), xi))
                - QUARTER * Pi(br(Pi(br(eta, zeta)), xi)) + Pi(br(R(eta, zeta), xi)))

    return _table(n, N, 3, lambda j, k, l: f(e[j], e[k], e[l]))


def tensor_d_closed(split: Split, section: SectionJet | None = None) -> np.ndarray:
    """The nine-term closed form for d = nabla2 b."""
    o = _Vec(split, section)
    br, Pi, R = o.br, o.Pi, o.R
    e, n, N = _basis(split)

    def d(xi, eta, zeta, tau):
        xe = br(xi, eta)
        Rxe = R(xi, eta)
        return (HALF * Pi(br(tau, br(xe, zeta))) - HALF * Pi(br(tau, Pi(br(xe, zeta))))
                - HALF * Pi(br(tau, br(Pi(xe), zeta))) + HALF * Pi(br(tau, Pi(br(Pi(xe), zeta))))
                - HALF * Pi(br(Pi(br(tau, xe)), zeta)) + HALF * Pi(br(Pi(br(tau, Pi(xe))), zeta))
                + 2 * Pi(br(tau, br(Rxe, zeta))) - 2 * Pi(br(tau, Pi(br(Rxe, zeta))))
                - 2 * Pi(br(Pi(br(tau, Rxe)), zeta)))

    return _table(n, N, 4, lambda j, k, l, m: d(e[j], e[k], e[l], e[m]))


# alternations and symmetrizations

def alternate_first_two(t: np.ndarray) -> np.ndarray:
    """T_[jk]l = 1/2 (T_jkl - T_kjl)."""
    return (t - np.swapaxes(t, 0, 1)) * HALF


def alternate_outer(t: np.ndarray) -> np.ndarray:
    """T_[j|l|k]: reindexed as [j, k, l] -> 1/2 (T[j, l, k] - T[k, l, j])."""
    n = t.shape[0]
    out = np.empty(t.shape, dtype=object)
    for j, k, l in itertools.product(range(n), repeat=3):
        out[j, k, l] = (t[j, l, k] - t[k, l, j]) * HALF
    return out


def cyclic_part(t: np.ndarray) -> np.ndarray:
    """1/3 (T_jkl + T_klj + T_ljk) over the first three slots."""
    rest = tuple(range(3, t.ndim))
    return (t + np.transpose(t, (1, 2, 0) + rest) + np.transpose(t, (2, 0, 1) + rest)) * Fraction(1, 3)


def symmetric_part(t: np.ndarray) -> np.ndarray:
    """Average over all permutations of the first three slots."""
    rest = tuple(range(3, t.ndim))
    total = None
    for perm in itertools.permutations(range(3)):
        p = np.transpose(t, perm + rest)
        total = p if total is None else total + p
    return total * Fraction(1, 6)


@dataclass
class WebTensorSet:
    a: np.ndarray
    b: np.ndarray
    B: np.ndarray
    c: np.ndarray
    d: np.ndarray
    nabla1_a: np.ndarray
    nabla2_a: np.ndarray
    n: int = field(default=0)

    @classmethod
    def from_expansion(cls, exp: LoopExpansion) -> "WebTensorSet":
        """Ground-truth set: generic a, b, B and derivative-route c, d, nabla a."""
        return cls(tensor_a_generic(exp), tensor_b_generic(exp), tensor_B(exp), c_derivative(exp),
                   d_derivative(exp), nabla1_a_derivative(exp), nabla2_a_derivative(exp), exp.n)


def is_zero_tensor(t: np.ndarray) -> bool:
    return not any(x != 0 for x in t.ravel())


def first_difference(t1: np.ndarray, t2: np.ndarray):
    """First basis tuple (1-based) where two tensors differ, with both values."""
    if t1.shape != t2.shape:
        raise ValueError("shape mismatch")
    for idx in itertools.product(*(range(s) for s in t1.shape[:-1])):
        if any(t1[idx] != t2[idx]):
            return tuple(i + 1 for i in idx), tuple(t1[idx]), tuple(t2[idx])
    return None


def d_alternation_defect(tensors: WebTensorSet) -> np.ndarray:
    """1/2 (d(x,y,z,t) - d(x,y,t,z)) + b(x, y, a(z, t)); zero when the identity holds."""
    d, b, a = tensors.d, tensors.b, tensors.a
    n = d.shape[0]
    out = np.empty(d.shape, dtype=object)
    for j, k, l, m in itertools.product(range(n), repeat=4):
        a_lm = a[l, m][:n]
        bterm = sum((b[j, k, p] * a_lm[p] for p in range(n)), _zeros(d.shape[-1]))
        out[j, k, l, m] = (d[j, k, l, m] - d[j, k, m, l]) * HALF + bterm
    return out


def cyclic_R_sum(split: Split, section: SectionJet) -> np.ndarray:
    """Pi[R(xi,eta),zeta] + Pi[R(eta,zeta),xi] + Pi[R(zeta,xi),eta] on basis triples."""
    o = _Vec(split, section)
    br, Pi = o.br, o.Pi
    e, n, N = _basis(split)
    Rd = o.section.R.data

    def f(j, k, l):
        return Pi(br(Rd[j, k], e[l])) + Pi(br(Rd[k, l], e[j])) + Pi(br(Rd[l, j], e[k]))

    return _table(n, N, 3, f)


def _first_nonzero(t: np.ndarray):
    for idx in itertools.product(*(range(s) for s in t.shape[:-1])):
        if any(x != 0 for x in t[idx]):
            return tuple(i + 1 for i in idx), tuple(t[idx])
    return None


@dataclass(frozen=True)
class Hexagonality:
    """Verdicts of the three readings; `hexagonal` is the cyclic R-condition.

    b_(jkl) is evaluated both as the full symmetrization and as the cyclic
    average. The bracket part of b alternates in its first two slots, so the full
    symmetrization reduces exactly to the R-condition; the cyclic average keeps
    the cyclic sum of Pi[Pi[x,y],z], which need not vanish once dim V >= 3.
    """

    hexagonal: bool
    witness: tuple | None
    value: tuple | None
    full_symmetric: bool
    cyclic: bool
    cyclic_witness: tuple | None
    witnesses: tuple = ()

    def value_at(self, triple) -> tuple | None:
        """Cyclic R-sum at a 1-based triple (any order; the sum is symmetric), None if zero."""
        return dict(self.witnesses).get(tuple(sorted(triple)))

    @property
    def agree(self) -> bool:
        return self.hexagonal == self.full_symmetric == self.cyclic


def hexagonality(split: Split, section: SectionJet | None = None, b: np.ndarray | None = None) -> Hexagonality:
    section = section or SectionJet.zero(split)
    if b is None:
        b = tensor_b_closed(split, section)
    sums = cyclic_R_sum(split, section)
    # symmetric in the triple when R is, so sorted triples cover every witness
    witnesses = tuple(
        (tuple(i + 1 for i in idx), tuple(sums[idx]))
        for idx in itertools.combinations_with_replacement(range(split.n), 3)
        if any(x != 0 for x in sums[idx])
    )
    hit = witnesses[0] if witnesses else None
    cyc = _first_nonzero(cyclic_part(b))
    return Hexagonality(
        hexagonal=hit is None,
        witness=hit and hit[0],
        value=hit and hit[1],
        full_symmetric=is_zero_tensor(symmetric_part(b)),
        cyclic=cyc is None,
        cyclic_witness=cyc and cyc[0],
        witnesses=witnesses,
    )


def hexagonal_d_terms(split: Split, section: SectionJet | None = None) -> np.ndarray:
    """Cyclic sum over (xi,eta,zeta) of Pi{[tau,[R(xi,eta),zeta]] - [Pi[tau,R(xi,eta)],zeta]}, indexed [xi,eta,zeta,tau]."""
    o = _Vec(split, section)
    br, Pi = o.br, o.Pi
    e, n, N = _basis(split)
    Rd = o.section.R.data

    def f(j, k, l, m):
        total = _zeros(N)
        for p, q, r in ((j, k, l), (k, l, j), (l, j, k)):
            total = total + Pi(br(e[m], br(Rd[p, q], e[r])) - br(Pi(br(e[m], Rd[p, q])), e[r]))
        return total

    return _table(n, N, 4, f)


def check_d_alternation(tensors: WebTensorSet) -> Record:
    defect = d_alternation_defect(tensors)
    hit = first_difference(np.zeros_like(defect), defect)
    if hit is None:
        return Record("d-alternation", PASS)
    return Record("d-alternation", FAIL, hit[0], hit[1], hit[2])


def symmetrized_d_closed(split: Split, section: SectionJet | None = None) -> np.ndarray:
    """Full symmetrization of d over its first three slots, from the closed form.

    The bracket-only terms alternate in the first two slots and drop out; the R-terms
    give 2/3 of the cyclic d-terms minus 2/3 Pi[tau, cyclic R-sum].
    """
    o = _Vec(split, section)
    dterms = hexagonal_d_terms(split, o.section)
    sums = cyclic_R_sum(split, o.section)
    e, n, N = _basis(split)
    out = np.empty(dterms.shape, dtype=object)
    for j, k, l, m in itertools.product(range(n), repeat=4):
        out[j, k, l, m] = (dterms[j, k, l, m] - o.Pi(o.br(e[m], sums[j, k, l]))) * Fraction(2, 3)
    return out


def check_hexagonal_d(split: Split, section: SectionJet | None = None) -> Record:
    """The cyclic condition on the R-terms of d.

    It holds on hexagonal webs. The cyclic condition on R alone only makes b_(jkl)
    vanish at the identity, so a failure there is a verdict on the input (hexagonal
    to first order only), reported as info; on inputs failing that condition too the
    record is a diagnostic.
    """
    terms = hexagonal_d_terms(split, section)
    hit = first_difference(np.zeros_like(terms), terms)
    if hit is None:
        return Record("hexagonal-d", PASS)
    if hexagonality(split, section).hexagonal:
        return Record("hexagonal-d", INFO, hit[0], hit[1], hit[2],
                      "hexagonal to first order only: the second-order condition fails")
    return Record("hexagonal-d", INFO, hit[0], hit[1], hit[2], "input is not hexagonal")


__all__ = [
    "symmetrized_d_closed",
    "check_d_alternation",
    "check_hexagonal_d",
    "tensor_a_generic",
    "tensor_B",
    "tensor_b_generic",
    "tensor_c",
    "tensor_d_generic",
    "opposite_loop",
    "nabla1_a_derivative",
    "nabla2_a_derivative",
    "c_derivative",
    "d_derivative",
    "tensor_a_closed",
    "tensor_b_closed",
    "tensor_B_closed",
    "nabla2_a",
    "nabla1_a",
    "tensor_d_closed",
    "alternate_first_two",
    "alternate_outer",
    "cyclic_part",
    "symmetric_part",
    "WebTensorSet",
    "is_zero_tensor",
    "first_difference",
    "d_alternation_defect",
    "cyclic_R_sum",
    "Hexagonality",
    "hexagonality",
    "hexagonal_d_terms",
]
