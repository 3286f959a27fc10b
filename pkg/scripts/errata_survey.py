"""Where do the printed quartic terms, the printed generic d and the proof-line b deviate?

Runs the oracle-check suite on every shipped manifest and on random instances and
tabulates erratum records by check name.
"""

import argparse
import random
from collections import Counter
from pathlib import Path

from webtensor.manifest import load_manifest, manifest_from_instance
from webtensor.randomized import random_instance
from webtensor.cli import run

MANIFESTS = Path(__file__).resolve().parents[1] / "src" / "webtensor" / "manifests"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--random", type=int, default=10, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    manifests = [load_manifest(path) for path in sorted(MANIFESTS.glob("*.json")) if path.stem != "not_lie"]
    rng = random.Random(args.seed)
    manifests += [manifest_from_instance(random_instance(rng, max_dim=6, max_v=2, name=f"random-{i}"))
                  for i in range(args.random)]
    tally, failures = Counter(), 0
    for m in manifests:
        report, _ = run("oracle-check", m)
        hits = [r.check for r in report.errata()]
        failures += len(report.failures())
        tally.update(hits)
        print(f"{m.name:20s} {len(hits)} errata  {' '.join(hits)}")
    print()
    for check, count in sorted(tally.items()):
        print(f"{check:28s} {count}/{len(manifests)}")
    print(f"binding failures: {failures}")


if __name__ == "__main__":
    main()
