"""Checking positive-cone axioms on balls, and a registry of concrete cones.

A cone is given by a regular language over the group alphabet. Positivity of
an element is witnessed by an accepted word of length at most ``search_cap``,
so an element with neither itself nor its inverse witnessed is reported as
unknown rather than as a failure.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Callable

from .convexity import SubgroupSpec, kernel_mod, pattern
from .fsa import Fsa, Word, minimize, minus_empty_word, star_of_words, words_over
from .groups import CapacityError, GroupOracle, f2xz, free_abelian, gamma, klein_bottle, language_image
from .schreier import navas_cone_generators

POSITIVE = "positive"
NEGATIVE = "negative"
IDENTITY = "identity"
UNKNOWN = "unknown"
CONFLICT = "conflict"

VERIFIED = "verified"
FAILED = "failed"
INCONCLUSIVE = "inconclusive"


@dataclass
class ConeSpec:
    oracle: GroupOracle
    language: Fsa
    name: str = "cone"
    generators: list[Word] | None = None
    subgroup: SubgroupSpec | None = None
    note: str = ""
    expected: str | None = None

    def __post_init__(self):
        size = len(self.language.alphabet)
        if size not in (len(self.oracle.alphabet), len(self.oracle.alphabet) + 1):
            raise ValueError("cone language alphabet does not match the group alphabet")


@dataclass
class ConeReport:
    radius: int
    search_cap: int
    semigroup_ok: bool
    partition: str
    semigroup_witness: tuple[Word, Word] | None = None
    witnesses: list[Word] = field(default_factory=list)
    unknown: list[Word] = field(default_factory=list)
    positives: int = 0
    checked: int = 0
    identity_word: Word | None = None  # accepted word evaluating to 1

    @property
    def verified(self) -> bool:
        return self.semigroup_ok and self.partition == VERIFIED

    @property
    def exit_code(self) -> int:
        if not self.semigroup_ok or self.partition == FAILED:
            return 2
        if self.partition == INCONCLUSIVE:
            return 3
        return 0

    def to_json(self, oracle: GroupOracle, preset: str = "", citation: str = "") -> dict:
        def fmt(g):
            return oracle.format(oracle.geodesic(g))

        witnesses = [fmt(g) for g in self.witnesses]
        if self.identity_word is not None:
            witnesses.append(oracle.format(self.identity_word) + " = 1")
        elif self.semigroup_witness is not None:
            witnesses.append(" * ".join(fmt(g) for g in self.semigroup_witness))
        return {
            "preset": preset,
            "radius": self.radius,
            "cap": self.search_cap,
            "semigroup_ok": self.semigroup_ok,
            "partition": self.partition,
            "witnesses": witnesses,
            "unknown_count": len(self.unknown),
            "unknown": [fmt(g) for g in self.unknown],
            "positives": self.positives,
            "checked": self.checked,
            "citation": citation,
        }


def cone_from_generators(
    oracle: GroupOracle, gens: list[Word], name: str = "cone", **kwargs
) -> ConeSpec:
    """Language of nonempty concatenations of the generator words, i.e. ``<gens>+``."""
    gens = [tuple(g) for g in gens]
    if not gens or any(not g for g in gens):
        raise ValueError("cone generators must be nonempty words")
    language = minimize(minus_empty_word(star_of_words(oracle.alphabet, gens)))
    return ConeSpec(oracle, language, name, gens, **kwargs)


def _domain(oracle: GroupOracle, radius: int, subgroup: SubgroupSpec | None) -> dict[Word, Word]:
    if subgroup is not None:
        return subgroup.elements_in_ball(radius)
    return dict(oracle.ball(radius).members)


def positive_witnesses(cone: ConeSpec, search_cap: int) -> dict[Word, Word]:
    """Elements with an accepted word of length at most ``search_cap``, with one such word.

    Cones built from generator words are searched over products of the
    generators, weighted by word length; the accepted words of their language
    are exactly these concatenations, so the set of elements is the same as a
    letter-by-letter search, found with far fewer states.
    """
    if cone.generators is not None:
        return _generator_search(cone.oracle, cone.generators, search_cap)
    return language_image(cone.language, cone.oracle, search_cap)


def _generator_search(oracle: GroupOracle, gens: list[Word], cap: int) -> dict[Word, Word]:
    # Dijkstra over elements; a witness is any shortest concatenation
    budget = oracle.budget * 4
    values = [oracle.normal_form(g) for g in gens]
    best: dict[Word, int] = {}
    parent: dict[Word, tuple[Word | None, int]] = {}
    heap: list[tuple[int, Word]] = []
    for i, (g, w) in enumerate(zip(values, gens)):
        if len(w) <= cap and len(w) < best.get(g, cap + 1):
            best[g] = len(w)
            parent[g] = (None, i)
            heapq.heappush(heap, (len(w), g))
    while heap:
        d, g = heapq.heappop(heap)
        if d > best[g]:
            continue
        for i, (v, w) in enumerate(zip(values, gens)):
            nd = d + len(w)
            if nd > cap:
                continue
            h = oracle.multiply(g, v)
            if nd < best.get(h, cap + 1):
                best[h] = nd
                parent[h] = (g, i)
                heapq.heappush(heap, (nd, h))
                if len(best) > budget:
                    raise CapacityError(f"cone search exceeds budget {budget}", len(best))
    out = {}
    for g in best:
        pieces = []
        x: Word | None = g
        while x is not None:
            prev, i = parent[x]
            pieces.append(gens[i])
            x = prev
        out[g] = tuple(s for piece in reversed(pieces) for s in piece)
    return out


def classify_ball(
    cone: ConeSpec,
    radius: int,
    search_cap: int,
    subgroup: SubgroupSpec | None = None,
    positives: dict[Word, Word] | None = None,
) -> dict[Word, str]:
    """Label every element of the ball (or of its intersection with ``subgroup``)."""
    oracle = cone.oracle
    subgroup = subgroup if subgroup is not None else cone.subgroup
    if positives is None:
        positives = positive_witnesses(cone, search_cap)
    labels = {}
    for g in _domain(oracle, radius, subgroup):
        if not g:
            labels[g] = IDENTITY
            continue
        pos = g in positives
        neg = oracle.inverse(g) in positives
        if pos and neg:
            labels[g] = CONFLICT
        elif pos:
            labels[g] = POSITIVE
        elif neg:
            labels[g] = NEGATIVE
        else:
            labels[g] = UNKNOWN
    return labels


def verify_cone(
    cone: ConeSpec,
    radius: int,
    search_cap: int | None = None,
    subgroup: SubgroupSpec | None = None,
) -> ConeReport:
    """Semigroup and partition axioms on the ball, at the given search depth.

    ``search_cap`` defaults to three times the radius.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cap = search_cap if search_cap is not None else 3 * radius
    if cap <= 0:
        raise ValueError("search cap must be positive")
    oracle = cone.oracle
    positives = positive_witnesses(cone, cap)
    labels = classify_ball(cone, radius, cap, subgroup, positives)
    order = sorted(labels, key=lambda g: (oracle.length(g), oracle.geodesic(g)))

    semigroup_ok = True
    semigroup_witness = None
    identity_word = positives.get(())
    if identity_word is not None:
        semigroup_ok = False
    else:
        pos = [g for g in order if labels[g] == POSITIVE]
        for g in pos:
            for h in pos:
                gh = oracle.multiply(g, h)
                if labels.get(gh) in (NEGATIVE, IDENTITY, CONFLICT):
                    semigroup_ok = False
                    semigroup_witness = (g, h)
                    break
            if not semigroup_ok:
                break

    conflicts = [g for g in order if labels[g] == CONFLICT]
    unknown = [g for g in order if labels[g] == UNKNOWN]
    if conflicts:
        partition = FAILED
    elif unknown:
        partition = INCONCLUSIVE
    else:
        partition = VERIFIED
    return ConeReport(
        radius,
        cap,
        semigroup_ok,
        partition,
        semigroup_witness,
        conflicts,
        unknown,
        sum(1 for g in labels if labels[g] in (POSITIVE, CONFLICT)),
        len(labels),
        identity_word,
    )


# registry

PSI_Y = [
    "x",
    "y x z^-1",
    "x^-1 y x z^-1",
    "x^-1 y^-1 x^-1 y x",
    "x^-1 y^-1 z^2",
    "x^-1 y^-1 x z^2",
    "y^-1 x^-1 y x z^-1",
]


def _positive_words_cone(oracle: GroupOracle, name: str, note: str, **kwargs) -> ConeSpec:
    gens = [oracle.alphabet.index(g) for g in ("a", "b")]
    language = minimize(words_over(oracle.alphabet, gens))
    return ConeSpec(oracle, language, name, [(g,) for g in gens], note=note, **kwargs)


def _k2_positive() -> ConeSpec:
    return _positive_words_cone(
        klein_bottle(),
        "k2_positive",
        "Klein bottle group <a, b | a^-1 b a = b^-1>, cone <a, b>+",
        expected=VERIFIED,
    )


def _k2_subgroup_restriction() -> ConeSpec:
    K = klein_bottle()
    return _positive_words_cone(
        K,
        "k2_subgroup_restriction",
        "cone <a, b>+ of the Klein bottle group restricted to <a^2, b> (a copy of Z^2)",
        subgroup=pattern(K, "even_a"),
        expected=VERIFIED,
    )


def _k2_subgroup_fg_candidate() -> ConeSpec:
    K = klein_bottle()
    return cone_from_generators(
        K,
        [K.parse("a a"), K.parse("b")],
        "k2_subgroup_fg_candidate",
        subgroup=pattern(K, "even_a"),
        note="finitely generated candidate <a^2, b>+ inside <a^2, b>; not a cone",
        expected=INCONCLUSIVE,
    )


def _z2_candidate() -> ConeSpec:
    Z = free_abelian(2)
    return cone_from_generators(
        Z,
        [Z.parse("a"), Z.parse("b")],
        "z2_ab_candidate",
        note="finitely generated candidate <a, b>+ in Z^2; a b^-1 is never classified",
        expected=INCONCLUSIVE,
    )


def _f2xz_psi_y() -> ConeSpec:
    F = f2xz()
    return cone_from_generators(
        F,
        [F.parse(w) for w in PSI_Y],
        "f2xz_psiY",
        note="seven-generator cone of F2 x Z = <x, y, z | [x,z], [y,z]>, "
        "image of the kernel cone of Gamma_2 (m=6, mu=4)",
        expected=VERIFIED,
    )


def _gamma_positive(n: int) -> ConeSpec:
    return _positive_words_cone(
        gamma(n),
        f"gamma:{n}:positive",
        f"Gamma_{n} = <a, b | b a^{n} b = a>, cone <a, b>+",
        expected=VERIFIED,
    )


def _gamma_kernel_cone(n: int, m: int, mu: int) -> ConeSpec:
    G = gamma(n)
    Y = navas_cone_generators(n, m, mu)
    H = kernel_mod(G, m, {"a": mu, "b": 1})
    return cone_from_generators(
        G,
        Y,
        f"gamma:{n}:kernel_cone",
        subgroup=H,
        note=f"kernel of Gamma_{n} -> Z/{m} (a -> {mu}, b -> 1) with its {m + 1}-generator cone",
        expected=VERIFIED,
    )


def _default_mu(n: int, m: int) -> int:
    for mu in range(m):
        if ((n - 1) * mu + 2) % m == 0:
            return mu
    raise ValueError(f"no mu with (n-1) mu = -2 mod {m} for n={n}")


REGISTRY: dict[str, Callable[[], ConeSpec]] = {
    "k2_positive": _k2_positive,
    "k2_subgroup_restriction": _k2_subgroup_restriction,
    "k2_subgroup_fg_candidate": _k2_subgroup_fg_candidate,
    "z2_ab_candidate": _z2_candidate,
    "f2xz_psiY": _f2xz_psi_y,
    "gamma:2:positive": lambda: _gamma_positive(2),
    "gamma:2:kernel_cone": lambda: _gamma_kernel_cone(2, 6, 4),
}


def registry(name: str) -> ConeSpec:
    """Look up a named cone. ``gamma:N:positive`` and ``gamma:N:kernel_cone[:M[:MU]]`` are parametric."""
    if name in REGISTRY:
        return REGISTRY[name]()
    parts = name.split(":")
    if parts[0] == "gamma" and len(parts) >= 3:
        try:
            n = int(parts[1])
            if parts[2] == "positive" and len(parts) == 3:
                return _gamma_positive(n)
            if parts[2] == "kernel_cone":
                m = int(parts[3]) if len(parts) > 3 else 6
                mu = int(parts[4]) if len(parts) > 4 else _default_mu(n, m)
                return _gamma_kernel_cone(n, m, mu)
        except ValueError as exc:
            raise ValueError(f"bad cone preset {name!r}: {exc}") from None
    raise ValueError(f"unknown cone preset {name!r}; known: {', '.join(sorted(REGISTRY))}")


def report_json(report: ConeReport, cone: ConeSpec) -> str:
    return json.dumps(report.to_json(cone.oracle, cone.name, cone.note), indent=2, sort_keys=True)
