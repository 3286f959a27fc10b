"""Regenerate the manifests shipped in src/webtensor/manifests from the fixtures."""

import json
import random
from pathlib import Path

from webtensor import fixtures
from webtensor.fixtures import Instance
from webtensor.loops import SectionJet
from webtensor.manifest import emit, manifest_from_instance, parse_manifest
from webtensor.randomized import random_instance

OUT = Path(__file__).resolve().parents[1] / "src" / "webtensor" / "manifests"

FILES = {
    "fixture_a.json": fixtures.fixture_a,
    "fixture_b.json": fixtures.fixture_b,
    "fixture_b_r.json": fixtures.fixture_b_r,
    "sl2r.json": fixtures.fixture_sl2r,
    "sl2rs.json": fixtures.fixture_sl2rs,
    "heisenberg.json": fixtures.fixture_heisenberg,
    "abelian.json": fixtures.fixture_abelian,
    "group.json": fixtures.fixture_group,
}

# [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e1 breaks Jacobi
NOT_LIE = {"name": "not a Lie algebra", "dim": 3, "v_dim": 2,
           "brackets": [[1, 2, 3, "1"], [2, 3, 1, "1"], [3, 1, 1, "1"]], "R": [], "S": []}




def cyclic_split() -> Instance:
    """A dim V = 3 split with R = 0 where the cyclic average of b is nonzero."""
    inst = random_instance(random.Random(7), max_dim=5, max_v=3, with_S=False)
    return Instance("cyclic reading", inst.split, SectionJet.zero(inst.split), inst.labels)


def main():
    OUT.mkdir(exist_ok=True)
    for fname, make in FILES.items():
        (OUT / fname).write_text(emit(manifest_from_instance(make())))
        print("wrote", fname)
    (OUT / "cyclic_split.json").write_text(emit(manifest_from_instance(cyclic_split())))
    print("wrote cyclic_split.json")
    (OUT / "not_lie.json").write_text(emit(parse_manifest(json.dumps(NOT_LIE))))
    print("wrote not_lie.json")


if __name__ == "__main__":
    main()
