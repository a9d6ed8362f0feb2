"""Check the seven-generator cone of F2 x Z on ball(2) over a range of search caps.

The generator y needs 13 letters as a positive word, so elements such as y^2
only become classified once the cap reaches the low twenties.
"""

import argparse
import time

from ordercone.cones import PSI_Y, registry, verify_cone
from ordercone.groups import gamma


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--caps", type=int, nargs="+", default=[14, 16, 18, 20, 22])
    args = p.parse_args()

    cone = registry("f2xz_psiY")
    F = cone.oracle
    print("generators:", ", ".join(PSI_Y))
    for cap in args.caps:
        start = time.perf_counter()
        report = verify_cone(cone, args.radius, cap)
        unknown = ", ".join(F.format(g) for g in report.unknown) or "-"
        print(
            f"cap {cap:>3}: partition={report.partition:<12} semigroup={report.semigroup_ok} "
            f"positives={report.positives}/{report.checked} unknown=[{unknown}] "
            f"({time.perf_counter() - start:.1f}s)"
        )

    # the map x -> ab^2, y -> a^2 b^2 a^2, z -> a^3 back into Gamma_2
    G = gamma(2)
    images = {"x": G.parse("abb"), "y": G.parse("aabbaa"), "z": G.parse("aaa")}
    for text, y in zip(PSI_Y, registry("gamma:2:kernel_cone").generators):
        word = ()
        for s in F.parse(text):
            name = F.alphabet.names[s]
            base = images[name.lower()]
            word += base if name.islower() else G.alphabet.inverse_word(base)
        same = G.normal_form(word) == G.normal_form(y)
        print(f"{text:<22} -> {G.format(y):<10} {'ok' if same else 'MISMATCH'}")


if __name__ == "__main__":
    main()
