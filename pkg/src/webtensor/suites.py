"""Check suites behind the command-line front end.

Each suite turns one instance into a list of records. Binding checks (solver
against a formula that must hold) fail on mismatch; a printed formula that is
known to deviate from the solver is reported as an erratum instead, together
with a binding check of its corrected form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import tensors as T
from .algebra import validate
from .fixtures import Instance
from .loops import (
    ALTERNATE_INNER,
    PRINTED_INNER,
    LoopExpansion,
    closed_form_expansion,
    solve_loop_oracle,
)
from .report import ERRATUM, FAIL, INFO, PASS, Record

DEGREE_23 = ("K", "L", "M", "h2", "E", "F")
DEGREE_4 = ("P", "Q", "U")


@dataclass
class Workbench:
    """Lazily computed expansions and tensors of one instance."""

    instance: Instance

    @property
    def split(self):
        return self.instance.split

    @property
    def section(self):
        return self.instance.section

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.instance.labels)

    @cached_property
    def solver(self) -> LoopExpansion:
        return solve_loop_oracle(self.split, self.section)

    @cached_property
    def printed(self) -> LoopExpansion:
        return closed_form_expansion(self.split, self.section, PRINTED_INNER, completed=False)

    @cached_property
    def corrected(self) -> LoopExpansion:
        return closed_form_expansion(self.split, self.section, ALTERNATE_INNER, completed=True)

    @cached_property
    def tensors(self) -> T.WebTensorSet:
        return T.WebTensorSet.from_expansion(self.solver)

    def names(self, idx) -> tuple[str, ...] | None:
        return None if idx is None else tuple(self.labels[i - 1] for i in idx)


def compare(bench: Workbench, check: str, reference: np.ndarray, candidate: np.ndarray,
            on_mismatch: str = FAIL, detail: str = "") -> Record:
    """pass, or `on_mismatch` at the first basis tuple where the arrays differ."""
    diff = T.first_difference(reference, candidate)
    if diff is None:
        return Record(check, PASS, detail=detail)
    idx, ref, got = diff
    return Record(check, on_mismatch, bench.names(idx), ref, got, detail)


def entries(bench: Workbench, check: str, tensor: np.ndarray) -> list[Record]:
    """One info record per nonzero entry (a single zero record if there are none)."""
    out = []
    for idx in itertools.product(*(range(s) for s in tensor.shape[:-1])):
        v = tensor[idx]
        if any(x != 0 for x in v):
            out.append(Record(check, INFO, bench.names(tuple(i + 1 for i in idx)), actual=tuple(v)))
    return out or [Record(check, INFO, detail="identically zero")]


# suites

def suite_validate(bench: Workbench) -> list[Record]:
    report = validate(bench.split.algebra, bench.split)
    out = []
    for c in report.checks:
        witness = None
        if c.witness is not None:
            witness = tuple(bench.labels[i - 1] for i in c.witness)
        out.append(Record(c.name, PASS if c.passed else FAIL, witness, detail=c.detail))
    n = bench.split.n
    in_h = not (any(bench.section.R.data[..., :n].ravel()) or any(bench.section.S.data[..., :n].ravel()))
    out.append(Record("section-values-in-h", PASS if in_h else FAIL))
    return out


def _coef(exp: LoopExpansion, name: str) -> np.ndarray:
    return exp.coefficient_map(name).data


def suite_expand(bench: Workbench) -> list[Record]:
    out = []
    for name in DEGREE_23 + DEGREE_4:
        out.extend(entries(bench, f"coefficient.{name}", _coef(bench.solver, name)))
    out.extend(coefficient_agreement(bench))
    return out


def coefficient_agreement(bench: Workbench) -> list[Record]:
    out = []
    for name in DEGREE_23:
        out.append(compare(bench, f"closed-form.{name}", _coef(bench.solver, name), _coef(bench.printed, name)))
    for name in DEGREE_4:
        out.append(compare(bench, f"closed-form.{name}.printed", _coef(bench.solver, name),
                           _coef(bench.printed, name), ERRATUM))
    for name in DEGREE_4:
        out.append(compare(bench, f"closed-form.{name}.corrected", _coef(bench.solver, name),
                           _coef(bench.corrected, name),
                           detail="inner coefficient -1/2 and the two missing R-bracket terms"))
    return out


TENSOR_FIELDS = ("a", "b", "c", "d", "nabla1_a", "nabla2_a")


def suite_tensors(bench: Workbench) -> list[Record]:
    ts = bench.tensors
    out = []
    for name in TENSOR_FIELDS:
        out.extend(entries(bench, f"tensor.{name}", getattr(ts, name)))
    return out


def suite_identities(bench: Workbench) -> list[Record]:
    sp, sec, ts = bench.split, bench.section, bench.tensors
    out = [
        compare(bench, "identity.nabla1-a", T.alternate_outer(ts.b), T.nabla1_a(sp, sec)),
        compare(bench, "identity.nabla2-a", T.alternate_first_two(ts.b), T.nabla2_a(sp, sec)),
        compare(bench, "identity.nabla1-a.derivative", T.alternate_outer(ts.b), ts.nabla1_a),
        compare(bench, "identity.nabla2-a.derivative", T.alternate_first_two(ts.b), ts.nabla2_a),
        compare(bench, "identity.d-alternation", np.zeros_like(ts.d), T.d_alternation_defect(ts),
                detail="1/2(d(x,y,z,t) - d(x,y,t,z)) + b(x,y,a(z,t))"),
    ]
    out.extend(path_agreement(bench))
    return out


def path_agreement(bench: Workbench) -> list[Record]:
    sp, sec, ts, exp = bench.split, bench.section, bench.tensors, bench.solver
    return [
        compare(bench, "path.a", ts.a, T.tensor_a_closed(sp)),
        compare(bench, "path.b", ts.b, T.tensor_b_closed(sp, sec)),
        compare(bench, "path.c", ts.c, T.tensor_c(exp), detail="coefficient formula vs derivative"),
        compare(bench, "path.d.printed", ts.d, T.tensor_d_generic(exp, "printed"), ERRATUM),
        compare(bench, "path.d.corrected", ts.d, T.tensor_d_generic(exp, "corrected"),
                detail="mirror of the c formula"),
        compare(bench, "path.d.closed", ts.d, T.tensor_d_closed(sp, sec)),
    ]


def suite_hexagonal(bench: Workbench) -> list[Record]:
    sp, sec = bench.split, bench.section
    b = T.tensor_b_closed(sp, sec)
    hx = T.hexagonality(sp, sec, b)
    if hx.hexagonal:
        verdict = Record("hexagonal", PASS, detail="hexagonal")
    else:
        others = " ".join("(" + ",".join(bench.names(w)) + ")" for w, _ in hx.witnesses[1:])
        verdict = Record("hexagonal", PASS, bench.names(hx.witness), tuple(0 for _ in hx.value), hx.value,
                         "not hexagonal; actual is the cyclic R-sum at the witness"
                         + (f"; other witnesses {others}" if others else ""))
    out = [verdict,
           Record("hexagonal.symmetrized-b", PASS if hx.full_symmetric == hx.hexagonal else FAIL,
                  detail="full symmetrization of b agrees" if hx.full_symmetric == hx.hexagonal
                  else "full symmetrization of b disagrees")]
    if hx.cyclic == hx.hexagonal:
        out.append(Record("hexagonal.cyclic-b", PASS, detail="cyclic average of b agrees"))
    else:
        out.append(Record("hexagonal.cyclic-b", ERRATUM, bench.names(hx.cyclic_witness),
                          detail="cyclic average of b disagrees with the R-condition"))
    d_record = T.check_hexagonal_d(sp, sec)
    out.append(Record("hexagonal.d-condition", d_record.status, bench.names(d_record.witness),
                      d_record.expected, d_record.actual, d_record.detail))
    out.append(compare(bench, "hexagonal.symmetrized-d", T.symmetric_part(bench.tensors.d),
                       T.symmetrized_d_closed(sp, sec),
                       detail="full symmetrization of d against its R-term reduction"))
    return out


def suite_oracle_check(bench: Workbench) -> list[Record]:
    sp, sec, ts = bench.split, bench.section, bench.tensors
    out = coefficient_agreement(bench)
    out += [
        compare(bench, "closed-form.a", ts.a, T.tensor_a_closed(sp)),
        compare(bench, "closed-form.b", ts.b, T.tensor_b_closed(sp, sec)),
        compare(bench, "closed-form.b.proof-line", ts.b, T.tensor_b_closed(sp, sec, "proof"), ERRATUM),
        compare(bench, "closed-form.B", ts.B, T.tensor_B_closed(sp, sec)),
        compare(bench, "closed-form.nabla1-a", ts.nabla1_a, T.nabla1_a(sp, sec)),
        compare(bench, "closed-form.nabla2-a", ts.nabla2_a, T.nabla2_a(sp, sec)),
    ]
    out += path_agreement(bench)
    return out


SUITES = {
    "validate": suite_validate,
    "expand": suite_expand,
    "tensors": suite_tensors,
    "identities": suite_identities,
    "hexagonal": suite_hexagonal,
    "oracle-check": suite_oracle_check,
}

__all__ = ["Workbench", "SUITES", "compare", "entries", "suite_validate", "suite_expand", "suite_tensors",
           "suite_identities", "suite_hexagonal", "suite_oracle_check", "coefficient_agreement", "path_agreement"]
