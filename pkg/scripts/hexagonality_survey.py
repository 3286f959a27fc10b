"""How often do the readings of hexagonality agree, and when does the d-condition hold?

For random sections on random splits: the cyclic R-condition, the full
symmetrization of b and the cyclic average of b. For sampled hexagonal R of first
and second order: the d-condition and the derivative-route symmetrization of d.
"""

import argparse
import random
from collections import Counter

from webtensor import tensors as T
from webtensor.loops import SectionJet, solve_loop_oracle
from webtensor.randomized import random_hexagonal_instance, random_instance
from webtensor.report import PASS


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)

    readings = Counter()
    for _ in range(args.count):
        inst = random_instance(rng, max_dim=6, max_v=3)
        for label, section in (("random R", inst.section), ("R = 0", SectionJet.zero(inst.split))):
            hx = T.hexagonality(inst.split, section)
            readings[(label, inst.split.n, hx.hexagonal, hx.full_symmetric, hx.cyclic)] += 1
    print("section  dim V  R-condition  full-sym b  cyclic b  count")
    for (label, n, h, f, c), k in sorted(readings.items()):
        print(f"{label:8s} {n:5d}  {h!s:11s}  {f!s:10s}  {c!s:8s}  {k}")

    print()
    for order in (1, 2):
        passed = zero_sym = 0
        for _ in range(args.count // 2):
            inst = random_hexagonal_instance(rng, order)
            passed += T.check_hexagonal_d(inst.split, inst.section).status == PASS
            d = T.d_derivative(solve_loop_oracle(inst.split, inst.section))
            zero_sym += T.is_zero_tensor(T.symmetric_part(d))
        print(f"hexagonal R of order {order}: d-condition {passed}/{args.count // 2}, "
              f"symmetrized d zero {zero_sym}/{args.count // 2}")


if __name__ == "__main__":
    main()
