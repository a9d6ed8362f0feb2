import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fsa, words
from ordercone import fsa as F
from ordercone.fsa import Alphabet, Fsa

AB = Alphabet.plain("ab")
GROUP = Alphabet.group("ab")


def lang(fsa, n):
    return set(F.enumerate_words(fsa, n))


# alphabets and words


def test_group_alphabet_order_and_inverses():
    assert GROUP.names == ("a", "A", "b", "B")
    assert GROUP.inverses == (1, 0, 3, 2)
    assert GROUP.generators == [0, 2]


def test_multichar_generator_names():
    alpha = Alphabet.group(["x0", "x1"])
    assert alpha.names == ("x0", "x0^-1", "x1", "x1^-1")
    assert alpha.parse("x0 x1^-1 x0^2") == (0, 3, 0, 0)


def test_parse_forms():
    assert GROUP.parse("b a^2 b a^-1") == (2, 0, 0, 2, 1)
    assert GROUP.parse("baabA") == (2, 0, 0, 2, 1)
    assert GROUP.parse("") == ()
    with pytest.raises(ValueError):
        GROUP.parse("c")


def test_product_alphabet_is_row_major():
    pad = GROUP.padded()
    pairs = pad.product(pad)
    assert len(pairs) == 25
    assert pairs.pair(1, 3) == 1 * 5 + 3
    assert pairs.split(8) == (1, 3)
    assert pairs.parse("ab|ba") == (pairs.pair(0, 2), pairs.pair(2, 0))
    assert pairs.format(pairs.parse("a$|$b")) == "a$|$b"


def test_padding_is_last_without_inverse():
    pad = GROUP.padded()
    assert pad.padding == 4 and pad.names[4] == "$"
    assert pad.inverses[4] is None
    assert pad.unpadded() == GROUP


def test_bad_involution_rejected():
    with pytest.raises(ValueError):
        Alphabet(("a", "b", "c"), (1, 2, 0))


# accepts and the basic automata


def test_semigroup_automaton():
    fsa = F.semigroup_automaton(AB)
    assert fsa.num_states == 2
    assert fsa.accepts(AB.parse("ab"))
    assert not fsa.accepts(())
    assert F.minimize(fsa).num_states == 2


def test_semigroup_automaton_single_letter():
    fsa = F.semigroup_automaton(Alphabet.plain("a"))
    assert F.enumerate_words(fsa, 3) == [(0,), (0, 0), (0, 0, 0)]


def test_semigroup_automaton_empty_alphabet():
    with pytest.raises(ValueError):
        F.semigroup_automaton(Alphabet.plain(""))


def test_accepts_symbol_outside_alphabet():
    with pytest.raises(ValueError):
        F.semigroup_automaton(AB).accepts((0, 5))


def test_transitions_must_be_total():
    with pytest.raises(ValueError):
        Fsa(AB, ((0,),), frozenset(), 0)


def test_empty_language_enumerates_nothing():
    assert F.enumerate_words(F.empty_language(AB), 5) == []


# padding


def test_pad_language_examples():
    L = F.finite_language(AB, [(0, 1)])
    P = F.pad_language(L)
    pad = P.alphabet
    for text in ("a$b", "$ab$", "ab", "$$a$$b$$"):
        assert P.accepts(pad.parse(text))
    assert not P.accepts(pad.parse("a$"))
    assert P.num_states == L.num_states
    got = [pad.format(w) for w in F.enumerate_words(P, 3)]
    assert set(got) == {"ab", "$ab", "a$b", "ab$"}
    # padding is the last symbol, so it sorts last
    assert got == ["ab", "ab$", "a$b", "$ab"]


def test_pad_empty_word_language():
    P = F.pad_language(F.finite_language(AB, [()]))
    assert lang(P, 4) == {(2,) * n for n in range(5)}


@settings(max_examples=40, deadline=None)
@given(random_fsa(AB))
def test_padding_strips_back(fsa):
    padded = F.pad_language(fsa)
    stripped = {padded.alphabet.strip_padding(w) for w in F.enumerate_words(padded, 6)}
    assert stripped == lang(fsa, 6)


# closure operations


@settings(max_examples=60, deadline=None)
@given(random_fsa(AB), random_fsa(AB))
def test_intersect_union_complement(A, B):
    I, U, C = F.intersect(A, B), F.union(A, B), F.complement(A)
    for w in words(2, 8):
        assert I.accepts(w) == (A.accepts(w) and B.accepts(w))
        assert U.accepts(w) == (A.accepts(w) or B.accepts(w))
        assert C.accepts(w) != A.accepts(w)


@settings(max_examples=40, deadline=None)
@given(random_fsa(AB), random_fsa(AB))
def test_product_accepts_pairs(A, B):
    P = F.product(A, B)
    pairs = P.alphabet
    assert P.num_states <= A.num_states * B.num_states
    for p in words(4, 5):
        u = tuple(pairs.split(x)[0] for x in p)
        v = tuple(pairs.split(x)[1] for x in p)
        assert P.accepts(p) == (A.accepts(u) and B.accepts(v))


@settings(max_examples=40, deadline=None)
@given(random_fsa(AB.product(AB), max_states=4))
def test_project_matches_existential(C):
    pairs = C.alphabet
    proj = F.project(C, 2)
    for v in words(2, 5):
        exists = any(
            C.accepts(tuple(pairs.pair(i, j) for i, j in zip(u, v)))
            for u in words(2, len(v))
            if len(u) == len(v)
        )
        assert proj.accepts(v) == exists
    assert 1 <= F.minimize(proj).num_states <= 2 ** C.num_states


def test_product_examples():
    a, b = F.finite_language(AB, [(0,)]), F.finite_language(AB, [(1,)])
    P = F.product(a, b)
    assert F.enumerate_words(P, 3) == [(P.alphabet.pair(0, 1),)]
    everything = F.product(F.all_words(AB), F.all_words(AB))
    assert len(F.enumerate_words(everything, 2)) == 1 + 4 + 16


def test_project_of_product_with_all_words():
    L = F.finite_language(AB, [(0,), (0, 1), (1, 1, 0)])
    proj = F.project(F.product(L, F.all_words(AB)), 1)
    assert lang(proj, 8) == lang(L, 8)


def test_project_needs_pairs():
    with pytest.raises(ValueError):
        F.project(F.all_words(AB), 1)


def test_alphabet_mismatch():
    with pytest.raises(ValueError):
        F.intersect(F.all_words(AB), F.all_words(GROUP))


@settings(max_examples=30, deadline=None)
@given(random_fsa(AB.product(AB), max_states=3), random_fsa(AB))
def test_intersect_projection_is_fused(pairs, other):
    fused = F.intersect_projection(pairs, 2, other)
    assert F.equivalent(fused, F.intersect(F.project(pairs, 2), other))


# star of words


def factorizable(w, pieces):
    ok = [True] + [False] * len(w)
    for i in range(1, len(w) + 1):
        ok[i] = any(len(p) <= i and ok[i - len(p)] and w[i - len(p):i] == p for p in pieces)
    return ok[len(w)]


def test_star_examples():
    S = F.star_of_words(AB, [(0, 1)])
    assert S.accepts(()) and S.accepts((0, 1)) and S.accepts((0, 1, 0, 1))
    assert not S.accepts((0,))
    T = F.star_of_words(AB, [(0,), (1, 0)])
    assert T.accepts(AB.parse("baaba"))


def test_star_rejects_empty_word():
    with pytest.raises(ValueError):
        F.star_of_words(AB, [(0,), ()])
    with pytest.raises(ValueError):
        F.star_of_words(AB, [])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple), min_size=1, max_size=4))
def test_star_matches_factorization_oracle(pieces):
    S = F.star_of_words(AB, pieces)
    for w in words(2, 10):
        assert S.accepts(w) == factorizable(w, pieces)
    # trie with return edges: one state per proper prefix before determinization
    assert F.minimize(S).num_states <= 2 ** F.trie_size(pieces) + 1
    assert F.trie_size(pieces) <= 1 + sum(len(p) - 1 for p in pieces)


# minimization and enumeration


@settings(max_examples=60, deadline=None)
@given(random_fsa(AB, max_states=6))
def test_minimize_preserves_language(fsa):
    m = F.minimize(fsa)
    assert m.num_states <= fsa.num_states
    assert lang(m, 10) == lang(fsa, 10)
    assert F.minimize(m) == m


def test_minimize_detects_equivalence():
    # two different presentations of "even number of a's"
    A = Fsa(AB, ((1, 0), (0, 1)), frozenset({0}), 0)
    B = Fsa(AB, ((1, 2), (0, 1), (1, 2)), frozenset({0, 2}), 0)
    assert F.equivalent(A, B)
    assert F.minimize(B).num_states == 2


def test_enumerate_is_shortlex():
    got = F.enumerate_words(F.all_words(AB), 2)
    assert got == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_negative_length():
    with pytest.raises(ValueError):
        F.enumerate_words(F.all_words(AB), -1)


# serialization


@settings(max_examples=30, deadline=None)
@given(random_fsa(GROUP.padded()))
def test_json_round_trip(fsa):
    data = json.loads(json.dumps(F.to_json(fsa)))
    assert F.from_json(data) == fsa


def test_json_layout():
    data = F.to_json(F.pad_language(F.semigroup_automaton(GROUP)))
    assert data["alphabet"]["names"] == ["a", "A", "b", "B", "$"]
    assert data["alphabet"]["inverses"] == [[0, 1], [2, 3]]
    assert data["alphabet"]["padding"] == 4
    assert data["accept"] == [1]
    assert data["transitions"][0] == [1, 1, 1, 1, 0]


def test_dot_export():
    fsa = F.words_over(AB, [0])
    dot = F.to_dot(fsa)
    assert dot.count("shape=doublecircle") == 1
    assert dot.count("[shape=circle") == 2
    # the sink's edges are hidden by default
    assert "q2 ->" not in dot and "-> q2" not in dot
    assert "-> q2" in F.to_dot(fsa, show_sink=True)
