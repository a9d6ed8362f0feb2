"""Fellow-traveller pair automata and the fellow-travelling closure of a language."""

from __future__ import annotations

from .fsa import Fsa, all_words, intersect, minimize, pad_language, product, project
from .groups import GroupOracle


def build_LM(oracle: GroupOracle, M: int) -> Fsa:
    """Pairs ``(u, v)`` over ``X^$ x X^$`` that synchronously M-fellow-travel and evaluate equally.

    States are the elements of the ball of radius ``M`` (numbered in shortlex
    order of their geodesics, identity first) plus a fail state ``rho`` last.
    Reading ``(x, y)`` in state ``g`` moves to ``x^-1 g y`` or to ``rho``.
    """
    if M < 0:
        raise ValueError("M must be non-negative")
    ball = oracle.ball(M)
    elements = sorted(ball.members, key=lambda g: (len(ball.members[g]), ball.members[g]))
    index = {g: i for i, g in enumerate(elements)}
    rho = len(elements)
    letters = oracle.padded_alphabet
    pair_alphabet = letters.product(letters)
    k = len(letters)
    inverse_letter = [() if s == letters.padding else (letters.inverses[s],) for s in range(k)]
    rows = []
    for g in elements:
        row = []
        for x in range(k):
            left = oracle.normal_form(inverse_letter[x] + g)
            for y in range(k):
                h = oracle.step(left, y)
                row.append(index.get(h, rho))
        rows.append(tuple(row))
    rows.append((rho,) * (k * k))
    identity = index[()]
    return Fsa(pair_alphabet, tuple(rows), frozenset({identity}), identity)


def build_tilde_L(L: Fsa, oracle: GroupOracle, M: int) -> Fsa:
    """Words over ``X^$`` that M-fellow-travel some padded word of ``L`` and evaluate equally.

    Composes ``L' = L^$ x (X^$)*``, ``L'' = L_M & L'`` and the second
    projection; the result is minimized.
    """
    return minimize(project(fellow_pairs(L, oracle, M), 2))


def fellow_pairs(L: Fsa, oracle: GroupOracle, M: int) -> Fsa:
    """``L'' = L_M & (L^$ x (X^$)*)``: pairs whose first coordinate is a padded word of L."""
    if L.alphabet != oracle.alphabet:
        raise ValueError("L must be over the group's unpadded alphabet")
    padded = pad_language(L)
    l_prime = product(padded, all_words(padded.alphabet))
    return minimize(intersect(build_LM(oracle, M), l_prime))
