"""Restrict a regular cone to a finite-index subgroup and check the result.

Defaults to the Klein bottle group with the cone <a, b>+ and the index-two
subgroup <a^2, b>. ``--group gamma:2 --subgroup mod:6:a=4,b=1 -R 1`` runs the
kernel instance (the derived constant 2 does not fit in memory there).
"""

import argparse
import time

from ordercone.cli import parse_language
from ordercone.convexity import parse_subgroup
from ordercone.groups import preset_oracle
from ordercone.pipeline import PipelineConfig, finite_index_pipeline


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--group", default="klein_bottle")
    p.add_argument("--subgroup", default="pattern:even_a")
    p.add_argument("-R", type=int, default=None)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--compare", default=None)
    p.add_argument("--compare-cap", type=int, default=None)
    args = p.parse_args()

    oracle = preset_oracle(args.group)
    L = parse_language("positive", oracle)
    h = parse_subgroup(args.subgroup, oracle)
    config = PipelineConfig(args.radius, args.cap, args.R, compare=args.compare, compare_cap=args.compare_cap)
    start = time.perf_counter()
    report = finite_index_pipeline(oracle, L, h, config)
    print("coset representatives:", ", ".join(oracle.format(r) for r in report.coset_reps))
    print(f"derived R = {report.derived_R}, used R = {report.R}")
    print(f"L_H: {report.states} states, bound {report.bound}")
    print(f"cone on subgroup ball({args.radius}): partition={report.cone.partition} "
          f"semigroup={report.cone.semigroup_ok} positives={report.cone.positives}/{report.cone.checked}")
    if report.agreement is not None:
        print(f"agreement with {args.compare}: {report.agreement}")
    print(f"{time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
