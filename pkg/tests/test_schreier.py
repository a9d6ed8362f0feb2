import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from ordercone.fsa import Alphabet
from ordercone.groups import free_abelian, gamma, gamma_presentation
from ordercone.schreier import (
    ModHom,
    SchreierSystem,
    SubgroupPresentation,
    Transversal,
    abelian_invariants,
    abelianization,
    canonical_relator,
    congruence_holds,
    gamma_star,
    h_presentation_closed_form,
    match_presentations,
    navas_cone_generators,
    rank_certificate,
    relation_matrix,
    smith_normal_form,
    subgroup_presentation,
    tau_rewrite,
)

G2 = gamma(2)
G3 = gamma(3)
HOM6 = ModHom.of(6, {"a": 4, "b": 1})
T6 = Transversal.b_powers(HOM6, G2.alphabet)
Y_TEXT = ["ab^2", "b^-1ab^3", "b^-2ab^4", "b^-3ab^5", "b^-4a", "b^-5ab", "b^6"]


def parse(oracle, text):
    return oracle.parse(text.replace("b^-", " b^-").replace("a", " a ").strip())


Y = [parse(G2, w) for w in Y_TEXT]


# homomorphisms and transversals


def test_modhom_parse_and_check():
    h = ModHom.parse("mod:6:a=4,b=1")
    assert h == HOM6 and h.describe() == "mod:6:a=4,b=1"
    h.check(gamma_presentation(2))
    with pytest.raises(ValueError):
        ModHom.parse("mod:6:a=1,b=1").check(gamma_presentation(2))
    for bad in ("mod:x:a=1", "hom:6:a=1", "mod:1:a=0"):
        with pytest.raises(ValueError):
            ModHom.parse(bad)
    with pytest.raises(ValueError):
        ModHom.of(2, {"c": 1}).weights(G2.alphabet)


@pytest.mark.parametrize(
    "oracle, hom, kind",
    [(G2, HOM6, "b_powers"), (G3, ModHom.of(2, {"a": 1, "b": 1}), "a_powers"), (G2, HOM6, "a_powers")],
)
def test_transversal_presets_valid(oracle, hom, kind):
    if kind == "a_powers" and hom.m == 6:
        # a has order 3 in Z/6 under this map, so its powers miss cosets
        with pytest.raises(ValueError):
            Transversal.named(kind, hom, oracle.alphabet)
        return
    T = Transversal.named(kind, hom, oracle.alphabet)
    assert T.kind == kind
    assert sorted(hom.value(r, oracle.alphabet) for r in T.reps) == list(range(hom.m))
    assert all(r[:i] in T.reps for r in T.reps for i in range(len(r)))


def test_transversal_rejects_bad_reps():
    hom = ModHom.of(2, {"a": 1, "b": 1})
    alpha = G3.alphabet
    with pytest.raises(ValueError):
        Transversal(((), (0, 2)), hom, alpha)  # not prefix-closed, same coset
    with pytest.raises(ValueError):
        Transversal(((), (2, 3, 0)), hom, alpha)  # not freely reduced
    with pytest.raises(ValueError):
        Transversal(((),), hom, alpha)
    with pytest.raises(ValueError):
        Transversal.named("c_powers", hom, alpha)


# gamma and tau


def test_gamma_star_examples():
    b = G2.alphabet.index("b")
    assert gamma_star((), b, T6, G2) == G2.parse("b^6")
    assert gamma_star(G2.parse("B"), b, T6, G2) == ()
    hom = ModHom.of(2, {"a": 1, "b": 1})
    Ta = Transversal.a_powers(hom, G3.alphabet)
    assert gamma_star(G3.parse("a"), 0, Ta, G3) == G3.parse("aa")
    with pytest.raises(ValueError):
        gamma_star(G2.parse("b"), b, T6, G2)


def test_schreier_generators_are_the_cone_generators():
    system = SchreierSystem.build(G2, T6)
    assert system.embeddings == Y
    assert navas_cone_generators(2, 6, 4) == Y


def test_tau_examples():
    x0, system = tau_rewrite(G2.parse("abb"), G2, T6)
    assert x0 == system.alphabet.parse("x0")
    assert system.rewrite(()) == ()
    w = G2.parse("b^6 a b^2")
    assert system.rewrite(w) == system.alphabet.parse("x6 x0")
    with pytest.raises(ValueError):
        system.rewrite(G2.parse("a"))


def random_kernel_word(rng, oracle, hom, max_len):
    alpha = oracle.alphabet
    while True:
        w = tuple(rng.randrange(4) for _ in range(rng.randrange(max_len + 1)))
        if not hom.value(w, alpha):
            return w


@pytest.mark.parametrize(
    "oracle, hom, kind",
    [
        (G2, HOM6, "b_powers"),
        (G3, ModHom.of(2, {"a": 1, "b": 1}), "a_powers"),
        (G3, ModHom.of(2, {"a": 1, "b": 1}), "b_powers"),
        (gamma(5), ModHom.of(3, {"a": 1, "b": 1}), "a_powers"),
    ],
)
def test_tau_soundness(oracle, hom, kind):
    T = Transversal.named(kind, hom, oracle.alphabet)
    system = SchreierSystem.build(oracle, T)
    sp = system.presentation([])
    rng = random.Random(7)
    for _ in range(150):
        w = random_kernel_word(rng, oracle, hom, 8)
        assert oracle.normal_form(sp.embed(system.rewrite(w))) == oracle.normal_form(w)


# presentations


def test_gamma3_presentation():
    hom = ModHom.parse("mod:2:a=1,b=1")
    sp = subgroup_presentation(G3, hom, Transversal.a_powers(hom, G3.alphabet))
    assert len(sp.generators) == 3 and len(sp.relators) == 2
    assert sp.relators_trivial()
    assert {G3.format(e) for _, e in sp.generators} == {"bA", "ab", "aa"}


@pytest.mark.parametrize("m, t", [(2, 1), (3, 1)])
def test_matches_closed_form(m, t):
    closed = h_presentation_closed_form(m, t)
    n = m - 1 + m * t
    G = gamma(n)
    hom = ModHom.of(m, {"a": 1, "b": 1})
    sp = subgroup_presentation(G, hom, Transversal.a_powers(hom, G.alphabet))
    assert len(sp.generators) == m + 1 and len(sp.relators) == m
    assert match_presentations(sp, closed) is not None
    assert sp.relators_trivial() and closed.relators_trivial()
    for g, e in zip(sp.alphabet.generators, sp.embeddings):
        assert G.normal_form(sp.embed((g,))) == G.normal_form(e)


def test_closed_form_literal():
    sp = h_presentation_closed_form(2, 1)
    assert [sp.alphabet.format(r) for r in sp.relators] == ["x0 x2 x2 x0", "x1 x2 x1 x2^-1"]
    assert [sp.parent.format(e) for _, e in sp.generators] == ["bA", "ab", "aa"]
    assert sp.parent.name == gamma(3).name
    with pytest.raises(ValueError):
        h_presentation_closed_form(1, 1)


@pytest.mark.parametrize("m, t", [(2, 1), (3, 1), (2, 2), (4, 1), (3, 2)])
def test_closed_form_relators_trivial(m, t):
    assert h_presentation_closed_form(m, t).relators_trivial()


def test_match_rejects_wrong_relators():
    closed = h_presentation_closed_form(2, 1)
    broken = SubgroupPresentation(closed.alphabet, closed.embeddings, closed.relators[:1] * 2, closed.parent)
    assert match_presentations(broken, closed) is None


def test_canonical_relator_invariance():
    alpha = Alphabet.group(["x0", "x1", "x2"])
    r = alpha.parse("x0 x2 x2 x0")
    rotated = alpha.parse("x2 x0 x0 x2")
    assert canonical_relator(r, alpha) == canonical_relator(rotated, alpha)
    assert canonical_relator(r, alpha) == canonical_relator(alpha.inverse_word(r), alpha)
    assert canonical_relator(alpha.parse("x1 x0 x2 x2 x0 x1^-1"), alpha) == canonical_relator(r, alpha)


def test_presentation_json():
    data = h_presentation_closed_form(2, 1).to_json()
    assert data["relators"] == ["x0 x2 x2 x0", "x1 x2 x1 x2^-1"]
    assert data["generators"][2] == {"name": "x2", "embedding": "aa"}


def test_z2_index_two_subgroup():
    Z = free_abelian(2)
    hom = ModHom.of(2, {"a": 1, "b": 0})
    sp = subgroup_presentation(Z, hom, Transversal.a_powers(hom, Z.alphabet))
    assert sp.relators_trivial()
    assert abelian_invariants(abelianization(sp)) == [0, 0]


# cone generators


def test_cone_generator_lists():
    assert [G2.format(w) for w in navas_cone_generators(2, 6, 4)] == [
        "abb", "Babbb", "BBabbbb", "BBBabbbbb", "BBBBa", "BBBBBab", "bbbbbb"
    ]
    assert [G3.format(w) for w in navas_cone_generators(3, 2, 0)] == ["a", "Bab", "bb"]
    assert len(navas_cone_generators(5, 3, 1)) == 4
    assert congruence_holds(2, 6, 4) and not congruence_holds(2, 6, 3)
    with pytest.raises(ValueError, match="mod m"):
        navas_cone_generators(2, 6, 3)


@pytest.mark.parametrize("n, m, mu", [(2, 6, 4), (3, 2, 0), (3, 4, 1), (5, 3, 1)])
def test_cone_generators_in_kernel(n, m, mu):
    G = gamma(n)
    hom = ModHom.of(m, {"a": mu, "b": 1})
    for w in navas_cone_generators(n, m, mu):
        assert hom.value(w, G.alphabet) == 0


# abelianization


@pytest.mark.parametrize("m, factors", [(2, [2, 2, 0]), (3, [2, 2, 2, 0]), (4, [2, 2, 2, 2, 0])])
def test_abelianization_odd_t(m, factors):
    assert abelianization(h_presentation_closed_form(m, 1)) == factors


def test_abelianization_even_t_reported_as_is():
    sp = h_presentation_closed_form(2, 2)
    assert relation_matrix(sp) == [[2, 0, 3], [0, 2, 1]]
    assert abelianization(sp) == [1, 2, 0]
    assert abelian_invariants([1, 2, 0]) == [2, 0]


def sympy_diagonal(matrix):
    snf = sympy_snf(sympy.Matrix(matrix), domain=sympy.ZZ)
    return [abs(int(snf[i, i])) for i in range(min(snf.shape))]


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=1, max_size=4)
    )
)
def test_smith_form_matches_sympy(matrix):
    ours = smith_normal_form(matrix)
    theirs = [d for d in sympy_diagonal(matrix) if d]
    assert ours == theirs
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))


def conjugate(word, by, alpha):
    return by + tuple(word) + alpha.inverse_word(by)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_abelianization_invariant_under_relator_moves(data):
    sp = h_presentation_closed_form(data.draw(st.integers(2, 4)), data.draw(st.integers(1, 3)))
    alpha = sp.alphabet
    base = abelianization(sp)
    perm = data.draw(st.permutations(sp.relators))
    rels = []
    for r in perm:
        by = tuple(data.draw(st.lists(st.integers(0, len(alpha) - 1), max_size=4)))
        rels.append(conjugate(r, by, alpha))
    moved = SubgroupPresentation(alpha, sp.embeddings, rels, sp.parent)
    assert abelianization(moved) == base


# rank


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_rank_certificate(m):
    assert rank_certificate(m, 1) == m + 1


def test_rank_certificate_needs_odd_t():
    with pytest.raises(ValueError, match="odd"):
        rank_certificate(2, 2)
