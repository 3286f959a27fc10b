"""Random exact instances: nilpotent matrix Lie algebras, adapted splits, section jets.

Algebras are Lie closures of a few random strictly upper-triangular rational
matrices, so Jacobi holds by construction and every 5-fold bracket vanishes
(the order-4 group law is then exact).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from .algebra import LieAlgebra, Split, nullspace, rank
from .fixtures import Instance
from .jets import MultilinearMap, Series, loop_ring
from .loops import LoopExpansion, SectionJet, skew_normalized


def _rand_rat(rng: random.Random, lo=-3, hi=3, den=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(den))


def random_rational_vector(rng: random.Random, dim: int) -> tuple:
    return tuple(_rand_rat(rng) for _ in range(dim))


def _commutator(a, b, m):
    out = [Fraction(0)] * (m * m)
    for i, j, k in itertools.product(range(m), repeat=3):
        out[i * m + k] += a[i * m + j] * b[j * m + k] - b[i * m + j] * a[j * m + k]
    return tuple(out)


class _Echelon:
    """Reduced row echelon basis; coordinates of a vector in the span are read at pivots."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, c in enumerate(v) if c), None)
        if p is None:
            return False
        v = [c / v[p] for c in v]
        for k, row in enumerate(self.rows):
            if row[p]:
                f = row[p]
                self.rows[k] = [a - f * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    def coords(self, v):
        if any(self.reduce(v)):
            raise ValueError("vector not in span")
        return [v[p] for p in self.pivots]


def random_nilpotent_algebra(rng: random.Random, max_dim: int = 8, size: int | None = None) -> LieAlgebra:
    """Lie closure of 2-3 random strictly upper-triangular matrices (dim 2..max_dim)."""
    while True:
        m = size or rng.choice([3, 4, 4, 5])
        gens = []
        for _ in range(rng.choice([2, 2, 3])):
            a = [Fraction(0)] * (m * m)
            for i in range(m):
                for j in range(i + 1, m):
                    if rng.random() < 0.6:
                        a[i * m + j] = Fraction(rng.randint(-2, 2))
            gens.append(tuple(a))
        ech = _Echelon(m * m)
        basis = []
        for g in gens:
            if ech.add(g):
                basis.append(g)
        k = 0
        while k < len(basis) and len(basis) <= max_dim:
            for j in range(k + 1):
                w = _commutator(basis[j], basis[k], m)
                if ech.add(w):
                    basis.append(w)
            k += 1
        if not 2 <= len(basis) <= max_dim:
            continue
        # structure constants in the echelon basis
        rows = ech.rows
        dim = len(rows)
        c = np.full((dim, dim, dim), Fraction(0), dtype=object)
        for i, j in itertools.product(range(dim), repeat=2):
            w = _commutator(tuple(rows[i]), tuple(rows[j]), m)
            for kk, val in enumerate(ech.coords(w)):
                c[i, j, kk] = val
        alg = LieAlgebra(c)
        if not alg.is_abelian():
            return alg


def _closure(algebra: LieAlgebra, vectors) -> list[tuple]:
    ech = _Echelon(algebra.dim)
    basis = [v for v in vectors if ech.add(v)]
    k = 0
    while k < len(basis):
        for j in range(k + 1):
            w = algebra.bracket(basis[j], basis[k])
            if ech.add(w):
                basis.append(w)
        k += 1
    return [tuple(r) for r in ech.rows]


def random_split(rng: random.Random, algebra: LieAlgebra, max_v: int = 3) -> Split:
    """Adapted split with h the closure of 1-2 random elements and V a random complement."""
    N = algebra.dim
    for _ in range(100):
        seeds = [random_rational_vector(rng, N) for _ in range(rng.choice([1, 1, 2]))]
        h_basis = _closure(algebra, seeds)
        n = N - len(h_basis)
        if not 1 <= n <= max_v:
            continue
        v_basis = []
        while len(v_basis) < n:
            cand = random_rational_vector(rng, N)
            trial = v_basis + [cand] + h_basis
            if rank([list(r) for r in trial], N) == len(trial):
                v_basis.append(cand)
        names = [f"v{i + 1}" for i in range(n)] + [f"h{i + 1}" for i in range(N - n)]
        return Split(algebra.change_basis(v_basis + h_basis, names), n)
    raise RuntimeError("could not find a split with a small V")


def random_section(rng: random.Random, split: Split, with_S: bool = True, density: float = 0.6) -> SectionJet:
    n, N = split.n, split.dim
    R = np.full((n, n, N), Fraction(0), dtype=object)
    S = np.full((n, n, n, N), Fraction(0), dtype=object)
    if N > n:
        for j, k in itertools.combinations_with_replacement(range(n), 2):
            for a in range(n, N):
                if rng.random() < density:
                    R[j, k, a] = R[k, j, a] = _rand_rat(rng)
        if with_S:
            for idx in itertools.combinations_with_replacement(range(n), 3):
                for a in range(n, N):
                    if rng.random() < density:
                        val = _rand_rat(rng)
                        for perm in set(itertools.permutations(idx)):
                            S[perm + (a,)] = val
    return SectionJet(MultilinearMap(R), MultilinearMap(S))


def _unit_sections(split: Split):
    """Symmetric R (S = 0) running over a basis of V x V -> h, with the builder for combinations."""
    n, N = split.n, split.dim
    unknowns = [(p, a) for p in itertools.combinations_with_replacement(range(n), 2) for a in range(n, N)]

    def R_of(vec):
        R = np.full((n, n, N), Fraction(0), dtype=object)
        for ((j, k), a), val in zip(unknowns, vec):
            R[j, k, a] = R[k, j, a] = val
        return R

    units = [R_of([Fraction(int(u == w)) for w in range(len(unknowns))]) for u in range(len(unknowns))]
    zero_S = np.full((n, n, n, N), Fraction(0), dtype=object)
    return unknowns, R_of, [SectionJet(MultilinearMap(R), MultilinearMap(zero_S)) for R in units]


def hexagonal_R_basis(split: Split, order: int = 1) -> list[np.ndarray]:
    """Basis of symmetric R: V x V -> h satisfying the cyclic condition on Pi[R(xi, eta), zeta].

    With order=2 the cyclic condition on the R-terms of the second-foliation
    derivative of b is imposed as well (hexagonal to the next order).
    """
    from .tensors import cyclic_R_sum, hexagonal_d_terms

    n = split.n
    unknowns, R_of, sections = _unit_sections(split)
    if not unknowns:
        return []
    # both conditions are linear in R: one column per unit R
    columns = []
    for sec in sections:
        col = list(cyclic_R_sum(split, sec)[..., :n].ravel())
        if order >= 2:
            col += list(hexagonal_d_terms(split, sec)[..., :n].ravel())
        columns.append(col)
    rows = [list(r) for r in zip(*columns)]
    return [R_of(v) for v in nullspace(rows, len(unknowns))]


def random_hexagonal_section(rng: random.Random, split: Split, order: int = 1) -> SectionJet | None:
    basis = hexagonal_R_basis(split, order)
    if not basis:
        return None
    n, N = split.n, split.dim
    R = np.full((n, n, N), Fraction(0), dtype=object)
    while not any(R.ravel()):
        for b in basis:
            R = R + b * _rand_rat(rng)
    S = random_section(rng, split).S.data
    return SectionJet(MultilinearMap(R), MultilinearMap(S))


def random_instance(rng: random.Random, max_dim: int = 6, max_v: int = 3, with_S: bool = True,
                    name: str = "random") -> Instance:
    while True:
        alg = random_nilpotent_algebra(rng, max_dim)
        if alg.dim < 2:
            continue
        try:
            split = random_split(rng, alg, max_v)
        except RuntimeError:
            continue
        return Instance(name, split, random_section(rng, split, with_S), split.algebra.names)


def _R_is_inert(split: Split, R: np.ndarray) -> bool:
    """True when Pi[R(e_j, e_k), e_l] vanishes for all j, k, l (the cyclic condition is then empty)."""
    n = split.n
    alg = split.algebra
    for j, k, l in itertools.product(range(n), repeat=3):
        if any(alg.bracket(tuple(R[j, k]), alg.basis(l))[:n]):
            return False
    return True


def random_affine_split(rng: random.Random) -> Split:
    """h = gl2 inside gl2 acting on the plane, V = span(t1 + g1, t2 + g2) with random g_i in gl2."""
    from .fixtures import affine_plane

    alg = affine_plane()
    h_basis = [alg.basis(i) for i in range(2, 6)]
    v_basis = [tuple(Fraction(int(i == j)) if i < 2 else _rand_rat(rng, -1, 1, (1, 2)) for i in range(6))
               for j in range(2)]
    return Split(alg.change_basis(v_basis + h_basis, ["v1", "v2", "h1", "h2", "h3", "h4"]), 2)


def random_hexagonal_instance(rng: random.Random, order: int = 1, max_dim: int = 8, max_v: int = 2,
                              name: str = "hexagonal", tries: int = 2000) -> Instance:
    """Random instance with nonzero R satisfying the cyclic condition(s), on a split where they bite.

    order=1: R is not inert, so the cyclic condition on R is a real constraint.
    order=2: some R of the first kind violates the second condition on this split,
    so the sampled R satisfies a constraint that does not hold automatically.
    """
    for _ in range(tries):
        if order == 1:
            # nilpotent splits with dim V = 2 never carry a non-inert cyclic R
            split = random_affine_split(rng)
            inst = Instance(name, split, random_section(rng, split), split.algebra.names)
        else:
            inst = random_instance(rng, max_dim, max_v, name=name)
        split = inst.split
        if split.n < 2:
            continue
        first = hexagonal_R_basis(split, 1)
        if order == 1:
            if not any(not _R_is_inert(split, R) for R in first):
                continue
        else:
            second = hexagonal_R_basis(split, 2)
            if not second or len(second) == len(first):
                continue
        section = random_hexagonal_section(rng, split, order)
        if order == 1 and _R_is_inert(split, section.R.data):
            continue
        return Instance(name, split, section, inst.labels)
    raise RuntimeError("no hexagonal instance found")


def random_generic_loop(rng: random.Random, n: int, zero_quartic: bool = False) -> LoopExpansion:
    """A loop with random z-coefficients on R^n (no coset behind it), in skew-K coordinates.

    Every monomial x^p y^q with p, q >= 1 and p + q <= 4 gets a random coefficient;
    the unit laws hold by construction.
    """
    split = Split(LieAlgebra.abelian(n), n)
    ring = loop_ring(n)
    terms = {}
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        terms[tuple(int(j == i) for j in range(2 * n))] = e
        terms[tuple(int(j == n + i) for j in range(2 * n))] = e
    for m in itertools.product(range(4), repeat=2 * n):
        p, q = sum(m[:n]), sum(m[n:])
        if p >= 1 and q >= 1 and p + q <= 4 and not (zero_quartic and p + q == 4):
            terms[m] = tuple(_rand_rat(rng) for _ in range(n))
    exp = LoopExpansion(split, SectionJet.zero(split), Series(ring, n, terms), None, "generic")
    return skew_normalized(exp)
