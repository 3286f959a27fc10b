import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from webtensor.fixtures import all_fixtures
from webtensor.loops import solve_loop_oracle
from webtensor.manifest import ManifestError, emit, load_manifest, manifest_from_instance, parse_manifest
from webtensor.randomized import random_instance

MANIFESTS = Path(__file__).resolve().parents[1] / "src" / "webtensor" / "manifests"

SL2_A = """{
  "name": "A",
  "dim": 3,
  "v_dim": 2,
  "brackets": [[1, 2, 3, "1"], [3, 1, 1, "2"], [3, 2, 2, "-2"]]
}"""


def test_parse_fixture_a():
    m = parse_manifest(SL2_A)
    assert (m.dim, m.v_dim) == (3, 2)
    assert m.labels == ("e1", "e2", "e3")
    g = m.algebra()
    assert g.bracket(g.basis(0), g.basis(1)) == (0, 0, 1)
    assert g.bracket(g.basis(1), g.basis(0)) == (0, 0, -1)


@pytest.mark.parametrize("path", sorted(MANIFESTS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_manifests_round_trip(path):
    m = load_manifest(path)
    assert parse_manifest(emit(m)) == m
    assert path.read_text() == emit(m)


def test_shipped_manifests_match_fixtures():
    by_name = {load_manifest(p).name: load_manifest(p) for p in MANIFESTS.glob("*.json")}
    for f in all_fixtures():
        m = by_name[f.name]
        assert m == manifest_from_instance(f)
        inst = m.instance()
        assert solve_loop_oracle(inst.split, inst.section).z == solve_loop_oracle(f.split, f.section).z


def error_of(text):
    with pytest.raises(ManifestError) as info:
        parse_manifest(text)
    return info.value


def test_syntax_error_has_line():
    err = error_of('{\n  "dim": 3,\n  "v_dim": 2\n  "brackets": []\n}')
    assert "syntax" in err.message and err.line == 4


def test_unknown_field():
    err = error_of('{"dim": 3, "v_dim": 2, "bracket": []}')
    assert err.field == "bracket"


def test_index_out_of_range():
    err = error_of('{"dim": 3, "v_dim": 2, "brackets": [[1, 4, 3, "1"]]}')
    assert "out of range" in err.message and err.field == "brackets[0][1]"


def test_R_target_must_be_in_h():
    err = error_of('{"dim": 3, "v_dim": 2, "brackets": [], "R": [[1, 1, 2, "1"]]}')
    assert "out of range" in err.message and err.field == "R[0][2]"


@pytest.mark.parametrize("bad", ['0.5', '"0.5"', '"1/0"', '"x"', '1'])
def test_malformed_rational(bad):
    err = error_of('{"dim": 3, "v_dim": 2, "brackets": [[1, 2, 3, %s]]}' % bad)
    assert "malformed rational" in err.message


def test_conflicting_duplicates():
    err = error_of('{"dim": 3, "v_dim": 2, "brackets": [], "R": [[1, 2, 3, "1"], [2, 1, 3, "2"]]}')
    assert "conflicting" in err.message
    m = parse_manifest('{"dim": 3, "v_dim": 2, "brackets": [], "R": [[1, 2, 3, "1"], [2, 1, 3, "1"]]}')
    assert m.R == ((1, 2, 3, Fraction(1)),)


def test_missing_and_bad_dims():
    assert error_of('{"v_dim": 2}').field == "dim"
    assert error_of('{"dim": 2, "v_dim": 3}').field == "v_dim"
    assert error_of('{"dim": 2, "v_dim": 2, "R": [[1, 1, 2, "1"]]}').field == "R"


def test_names_must_be_distinct():
    assert error_of('{"dim": 2, "v_dim": 1, "names": ["a", "a"]}').field == "names"


def test_unreadable_file(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(tmp_path / "missing.json")


@given(st.integers(0, 10 ** 6))
def test_random_instances_round_trip(seed):
    inst = random_instance(random.Random(seed), max_dim=5, max_v=2)
    m = manifest_from_instance(inst)
    assert parse_manifest(emit(m)) == m
    back = m.instance()
    assert (back.split.algebra.constants == inst.split.algebra.constants).all()
    assert (back.section.R.data == inst.section.R.data).all()
    assert (back.section.S.data == inst.section.S.data).all()
