"""Language-convex subgroups and the regular language for ``H & pi(L)``.

``check_convexity`` is bounded evidence only: it looks at words of ``L`` up to
a length cap. The convexity parameter ``R`` handed to ``build_LH`` is taken on
trust from the caller (or from ``finite_index_transfer``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .fsa import Fsa, Word, intersect_projection, minimize, pad_language, star_of_words, enumerate_words
from .groups import GroupOracle, free_reduce
from .traveller import fellow_pairs


@dataclass
class SubgroupSpec:
    parent: GroupOracle
    membership: Callable[[Word], bool]
    kind: str
    description: str
    coset_reps: list[Word] | None = None
    modulus: int | None = None
    weights: tuple[int, ...] | None = None

    def __contains__(self, nf: Word) -> bool:
        return self.membership(nf)

    def contains_word(self, word: Sequence[int]) -> bool:
        return self.membership(self.parent.normal_form(word))

    def elements_in_ball(self, radius: int) -> dict[Word, Word]:
        ball = self.parent.ball(radius)
        return {g: w for g, w in ball.members.items() if self.membership(g)}

    def growth(self, n: int) -> int:
        return len(self.elements_in_ball(n))


def hom_value(word: Sequence[int], weights: Sequence[int], m: int) -> int:
    """Value mod ``m`` of the homomorphism sending generator ``i`` to ``weights[i]``."""
    total = 0
    for s in word:
        g, inv = divmod(s, 2)
        if g < len(weights):
            total += -weights[g] if inv else weights[g]
    return total % m


def kernel_mod(
    oracle: GroupOracle,
    m: int,
    assignment: dict[str, int],
    coset_reps: list[Word] | None = None,
) -> SubgroupSpec:
    """Kernel of ``G -> Z/m`` given on generators; checked against the relators."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    gens = [oracle.alphabet.names[i] for i in oracle.alphabet.generators]
    unknown = set(assignment) - set(gens)
    if unknown:
        raise ValueError(f"unknown generators in assignment: {sorted(unknown)}")
    weights = [assignment.get(g, 0) % m for g in gens]
    if oracle.presentation is not None:
        for r in oracle.presentation.relators:
            if hom_value(r, weights, m):
                raise ValueError(
                    f"assignment is not a homomorphism: relator {oracle.format(r)} maps to "
                    f"{hom_value(r, weights, m)} mod {m}"
                )
    text = ",".join(f"{g}={w}" for g, w in zip(gens, weights))
    return SubgroupSpec(
        oracle,
        lambda nf: hom_value(nf, weights, m) == 0,
        "kernel_mod",
        f"mod:{m}:{text}",
        coset_reps,
        m,
        tuple(weights),
    )


def pattern(oracle: GroupOracle, name: str) -> SubgroupSpec:
    """Built-in normal-form predicates: ``even_a``, ``trivial``, ``whole``."""
    if name == "even_a":
        a, A = 0, 1
        return SubgroupSpec(
            oracle,
            lambda nf: (nf.count(a) - nf.count(A)) % 2 == 0,
            "normal_form_pattern",
            "pattern:even_a",
            [(), (a,)],
        )
    if name == "trivial":
        return SubgroupSpec(oracle, lambda nf: not nf, "normal_form_pattern", "pattern:trivial")
    if name == "whole":
        return SubgroupSpec(oracle, lambda nf: True, "normal_form_pattern", "pattern:whole", [()])
    raise ValueError(f"unknown subgroup pattern {name!r}")


def generated(oracle: GroupOracle, generators: Sequence[Word], radius: int) -> SubgroupSpec:
    """Subgroup generated by words, known only inside the ball of the given radius.

    Membership is decided by enumerating products of the generators whose
    partial products stay within ``2 * radius``; it is exact for elements the
    enumeration reaches and may miss elements needing longer detours.
    """
    gens = [oracle.normal_form(g) for g in generators]
    gens += [oracle.inverse(g) for g in gens]
    ball = oracle.ball(2 * radius)
    found = {()}
    queue = deque([()])
    while queue:
        g = queue.popleft()
        for h in gens:
            gh = oracle.multiply(g, h)
            if gh in ball and gh not in found:
                found.add(gh)
                queue.append(gh)
    names = ", ".join(oracle.format(g) for g in generators)
    return SubgroupSpec(oracle, found.__contains__, "generated", f"<{names}>")


def parse_subgroup(spec: str, oracle: GroupOracle) -> SubgroupSpec:
    """``mod:6:a=4,b=1`` or ``pattern:even_a``."""
    kind, _, rest = spec.partition(":")
    if kind == "mod":
        m_text, _, assign_text = rest.partition(":")
        try:
            m = int(m_text)
            assignment = {}
            for item in assign_text.split(","):
                if item.strip():
                    g, _, v = item.partition("=")
                    assignment[g.strip()] = int(v)
        except ValueError:
            raise ValueError(f"bad subgroup spec {spec!r}; expected mod:M:a=I,b=J") from None
        return kernel_mod(oracle, m, assignment)
    if kind == "pattern":
        return pattern(oracle, rest)
    raise ValueError(f"bad subgroup spec {spec!r}; expected mod:... or pattern:...")


def derive_coset_reps(h: SubgroupSpec, max_radius: int = 10) -> list[Word]:
    """Shortlex-least geodesic representative of each right coset ``H g``, for kernels."""
    m = h.modulus
    if m is None:
        raise ValueError("coset representatives can only be derived for kernel subgroups")
    weights = h.weights
    reps: dict[int, Word] = {}
    for r in range(max_radius + 1):
        ball = h.parent.ball(r)
        for g, w in sorted(ball.members.items(), key=lambda p: (len(p[1]), p[1])):
            reps.setdefault(hom_value(g, weights, m), w)
        if len(reps) == m:
            return [reps[i] for i in range(m)]
    raise ValueError(f"homomorphism onto Z/{m} not surjective within radius {max_radius}")


# distances and convexity


def distance_to_subgroup(g: Word, h: SubgroupSpec, cap: int) -> int | None:
    """Least ``k <= cap`` with ``g w`` in ``H`` for some ``|w| = k``; ``None`` if exceeded."""
    oracle = h.parent
    g = oracle.normal_form(g)
    seen = {g}
    frontier = [g]
    for k in range(cap + 1):
        if any(x in h for x in frontier):
            return k
        nxt = []
        for x in frontier:
            for s in oracle.symbols:
                y = oracle.step(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return None


@dataclass
class ConvexityReport:
    checked_length: int
    R: int
    words_checked: int
    max_observed_R: int
    witness: tuple[Word, int, int | None] | None = None  # word, prefix length, distance

    @property
    def ok(self) -> bool:
        return self.witness is None


def check_convexity(
    L: Fsa, h: SubgroupSpec, R: int, max_len: int, distance_cap: int | None = None
) -> ConvexityReport:
    """Prefix distances to ``H`` for every ``w`` in ``L`` with ``|w| <= max_len`` evaluating into ``H``.

    A distance beyond ``distance_cap`` is recorded as ``None`` in the witness.
    """
    oracle = h.parent
    cap = distance_cap if distance_cap is not None else max(R, max_len)
    cache: dict[Word, int | None] = {}
    checked = 0
    worst = 0
    witness = None
    for w in enumerate_words(L, max_len):
        if not h.contains_word(w):
            continue
        checked += 1
        g: Word = ()
        for i in range(len(w) + 1):
            if i:
                g = oracle.step(g, w[i - 1])
            if g not in cache:
                cache[g] = distance_to_subgroup(g, h, cap)
            d = cache[g]
            worst = max(worst, cap + 1 if d is None else d)
            if witness is None and (d is None or d > R):
                witness = (w, i, d)
    return ConvexityReport(max_len, R, checked, worst, witness)


# the subgroup language


def build_Y(h: SubgroupSpec, R: int) -> list[tuple[Word, Word]]:
    """Non-identity elements of ``H`` of length at most ``2R + 1`` with their geodesics."""
    if R < 0:
        raise ValueError("R must be non-negative")
    members = h.elements_in_ball(2 * R + 1)
    out = [(g, w) for g, w in members.items() if g]
    out.sort(key=lambda p: (len(p[1]), p[1]))
    return out


def build_LH(L: Fsa, h: SubgroupSpec, R: int, pad_star: bool = True) -> Fsa:
    """Regular language over ``X^$`` evaluating onto ``H & pi(L)``.

    Intersects the star of geodesic representatives of ``Y`` (padded when
    ``pad_star``) with the ``3R + 1`` fellow-travelling closure of ``L``.
    """
    oracle = h.parent
    Y = build_Y(h, R)
    star = star_of_words(oracle.alphabet, [w for _, w in Y])
    if pad_star:
        star = pad_language(star)
    else:
        star = _widen(star, oracle.padded_alphabet)
    pairs = fellow_pairs(L, oracle, 3 * R + 1)
    return minimize(intersect_projection(pairs, 2, star))


def _widen(fsa: Fsa, alphabet) -> Fsa:
    # same language, padding symbol sent to a fresh sink
    sink = fsa.num_states
    rows = tuple(row + (sink,) for row in fsa.transitions) + ((sink,) * len(alphabet),)
    return Fsa(alphabet, rows, fsa.accept, fsa.initial)


def state_bound(R: int, states_L: int, growth_H: int, growth_G: int) -> int:
    """``(2R + 1) * |A(L)| * gamma_H(2R + 1) * (gamma_G(3R + 1) + 1)``."""
    if min(R, states_L, growth_H, growth_G) < 0:
        raise ValueError("state_bound inputs must be non-negative")
    return (2 * R + 1) * states_L * growth_H * (growth_G + 1)


def lh_state_bound(L: Fsa, h: SubgroupSpec, R: int) -> int:
    return state_bound(
        R,
        minimize(L).num_states,
        h.growth(2 * R + 1),
        h.parent.growth(3 * R + 1),
    )


def finite_index_transfer(R: int, k: SubgroupSpec, coset_reps: Sequence[Word] | None = None) -> int:
    """Convexity parameter ``R + R'`` for a finite-index subgroup ``K`` of a convex ``H``.

    ``R'`` is the largest word length among the coset representatives of ``K``
    in ``H``.
    """
    reps = coset_reps if coset_reps is not None else k.coset_reps
    if not reps:
        raise ValueError("finite_index_transfer needs coset representatives")
    oracle = k.parent
    return R + max(oracle.length(free_reduce(r, oracle.alphabet)) for r in reps)
