"""Named test instances: an algebra, an adapted split and a section jet.

sl2 uses E, F, H with [E,F] = H, [H,E] = 2E, [H,F] = -2F, labelled e1, e2, e3.
Splits that put e2 in h reorder the basis so V comes first; `index` maps the
sl2 labels to positions in the adapted basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LieAlgebra, Split, unit_vec
from .loops import SectionJet

SL2_BRACKETS = [(1, 2, 3, 1), (3, 1, 1, 2), (3, 2, 2, -2)]


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    split: Split
    section: SectionJet
    labels: tuple[str, ...] = field(default=())

    @property
    def algebra(self) -> LieAlgebra:
        return self.split.algebra

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def e(self, label: str):
        return unit_vec(self.split.dim, self.index(label))


def _relabelled(entries, order):
    """Bracket entries (1-based sl2 labels) rewritten in the basis `order` of labels."""
    pos = {label: i for i, label in enumerate(order)}
    return [(pos[i], pos[j], pos[k], c) for i, j, k, c in entries]


def sl2(order=(1, 2, 3)) -> LieAlgebra:
    return LieAlgebra.from_brackets(3, _relabelled(SL2_BRACKETS, order), [f"e{i}" for i in order])


def _instance(name, algebra, n, R=(), S=(), labels=None) -> Instance:
    split = Split(algebra, n)
    labels = tuple(labels or algebra.names)
    pos = {label: i for i, label in enumerate(labels)}
    R_entries = [(pos[j], pos[k], pos[a], Fraction(c)) for j, k, a, c in R]
    S_entries = [(pos[j], pos[k], pos[l], pos[a], Fraction(c)) for j, k, l, a, c in S]
    return Instance(name, split, SectionJet.from_entries(split, R_entries, S_entries), labels)


def fixture_a() -> Instance:
    """sl2, V = <e1, e2>, h = <e3>, R = S = 0."""
    return _instance("A", sl2(), 2)


def fixture_b(R=()) -> Instance:
    """sl2, V = <e1, e3>, h = <e2> (adapted order e1, e3, e2)."""
    return _instance("B" if not R else "B_R", sl2((1, 3, 2)), 2, R)


def fixture_b_r() -> Instance:
    """Fixture B with R(e1, e1) = e2."""
    return fixture_b(R=[("e1", "e1", "e2", 1)])


def fixture_sl2r() -> Instance:
    """Fixture A with R(e1, e1) = e3."""
    return _instance("SL2R", sl2(), 2, R=[("e1", "e1", "e3", 1)])


def fixture_sl2rs() -> Instance:
    """Fixture A with a full section jet, exercising every R and S term."""
    return _instance("SL2RS", sl2(), 2,
                     R=[("e1", "e1", "e3", 1), ("e1", "e2", "e3", Fraction(1, 2)), ("e2", "e2", "e3", -2)],
                     S=[("e1", "e1", "e2", "e3", 1), ("e2", "e2", "e2", "e3", Fraction(1, 3))])


def heisenberg() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1)])


def fixture_heisenberg() -> Instance:
    """[e1, e2] = e3, V = <e1, e2>, h = <e3> central, with R and S."""
    return _instance("Heisenberg", heisenberg(), 2,
                     R=[("e1", "e1", "e3", 1), ("e1", "e2", "e3", -1)],
                     S=[("e1", "e2", "e2", "e3", 2)])


def affine_plane() -> LieAlgebra:
    """gl2 acting on the plane: t1, t2, E11, E12, E21, E22 with [E_ij, t_k] = delta_jk t_i."""
    E = {(i, j): 2 + 2 * i + j for i in range(2) for j in range(2)}
    entries = []
    for (i, j), a in E.items():
        entries.append((a, j, i, 1))
        for (k, l), b in E.items():
            if a >= b:
                continue
            # [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
            if j == k:
                entries.append((a, b, E[(i, l)], 1))
            if l == i:
                entries.append((a, b, E[(k, j)], -1))
    merged: dict = {}
    for a, b, c, v in entries:
        merged[(a, b, c)] = merged.get((a, b, c), 0) + v
    return LieAlgebra.from_brackets(6, [(a, b, c, v) for (a, b, c), v in merged.items() if v],
                                    ["t1", "t2", "E11", "E12", "E21", "E22"])


def fixture_abelian() -> Instance:
    """Abelian of dimension 3, V = <e1, e2>, h = <e3>, with R and S."""
    return _instance("abelian", LieAlgebra.abelian(3), 2,
                     R=[("e1", "e2", "e3", 3)], S=[("e1", "e1", "e1", "e3", -1)])


def fixture_group() -> Instance:
    """sl2 with h = {0}: the loop is the group itself."""
    return _instance("group", sl2(), 3)


def all_fixtures() -> list[Instance]:
    return [fixture_a(), fixture_b(), fixture_b_r(), fixture_sl2r(), fixture_sl2rs(),
            fixture_heisenberg(), fixture_abelian(), fixture_group()]
