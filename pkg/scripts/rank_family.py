"""Abelianizations and cone ranks for the kernels of a, b -> 1 mod m in Gamma_(m-1+mt)."""

import argparse

from ordercone.groups import gamma
from ordercone.schreier import (
    ModHom,
    Transversal,
    abelian_invariants,
    abelianization,
    h_presentation_closed_form,
    match_presentations,
    rank_certificate,
    subgroup_presentation,
)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--t-max", type=int, default=3)
    args = p.parse_args()

    print(f"{'m':>2} {'t':>2} {'n':>3}  {'matches':<8} {'invariants':<20} rank")
    for m in range(2, args.m_max + 1):
        for t in range(1, args.t_max + 1):
            n = m - 1 + m * t
            closed = h_presentation_closed_form(m, t)
            G = gamma(n)
            hom = ModHom.of(m, {"a": 1, "b": 1})
            sp = subgroup_presentation(G, hom, Transversal.a_powers(hom, G.alphabet))
            matched = match_presentations(sp, closed) is not None
            inv = abelian_invariants(abelianization(closed))
            rank = rank_certificate(m, t) if t % 2 else "-"
            print(f"{m:>2} {t:>2} {n:>3}  {str(matched):<8} {str(inv):<20} {rank}")


if __name__ == "__main__":
    main()
