"""Run every identity and path check on a batch of random instances.

Prints one line per instance: sizes, whether R and S are live, and the number of
pass / fail / erratum records of the identities suite.
"""

import argparse
import random
import time

from webtensor.randomized import random_instance
from webtensor.report import ERRATUM, FAIL, PASS
from webtensor.suites import Workbench, suite_identities


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--max-v", type=int, default=2)
    args = p.parse_args()

    rng = random.Random(args.seed)
    bad = 0
    for i in range(args.count):
        inst = random_instance(rng, args.max_dim, args.max_v, name=f"random-{i}")
        t0 = time.perf_counter()
        records = suite_identities(Workbench(inst))
        counts = {s: sum(r.status == s for r in records) for s in (PASS, FAIL, ERRATUM)}
        bad += counts[FAIL]
        live = "R" * any(inst.section.R.data.ravel()) + "S" * any(inst.section.S.data.ravel())
        print(f"{inst.name:10s} N={inst.split.dim} n={inst.split.n} {live or '-':2s}  "
              f"{counts[PASS]} pass {counts[FAIL]} fail {counts[ERRATUM]} erratum  "
              f"{time.perf_counter() - t0:.1f}s")
        for r in records:
            if r.status == FAIL:
                print("   ", r.human())
    print(f"failures: {bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
