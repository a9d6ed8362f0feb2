"""Word-problem oracles for finitely generated groups.

A :class:`GroupOracle` wraps a canonical normal form on words over an
involutive alphabet. Everything else (balls, growth, word length, images of
regular languages) is computed from that normal form by breadth-first search.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .fsa import Alphabet, Fsa, Word
from .rewriting import RewritingSystem, knuth_bendix

DEFAULT_BALL_BUDGET = 200_000


class CapacityError(RuntimeError):
    """A search exceeded its element budget."""

    def __init__(self, message: str, partial: int):
        super().__init__(f"{message} (partial count {partial})")
        self.partial = partial


class CompletionError(RuntimeError):
    """Knuth-Bendix completion hit its caps before becoming confluent."""


def ball_budget() -> int:
    value = os.environ.get("ORDERCONE_MAX_BALL")
    return int(value) if value else DEFAULT_BALL_BUDGET


def free_reduce(word: Sequence[int], alphabet: Alphabet) -> Word:
    inverses = alphabet.inverses
    pad = alphabet.padding
    out: list[int] = []
    for s in word:
        if s == pad:
            continue
        if out and inverses[out[-1]] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def cyclically_reduce(word: Sequence[int], alphabet: Alphabet) -> Word:
    w = free_reduce(word, alphabet)
    i, j = 0, len(w)
    while j - i >= 2 and alphabet.inverses[w[i]] == w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        alphabet = self.alphabet
        reduced = []
        for r in self.relators:
            r = free_reduce(alphabet.check_word(r), alphabet)
            if not r:
                raise ValueError("relators must be nonempty after free reduction")
            reduced.append(r)
        object.__setattr__(self, "relators", tuple(reduced))

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.group(self.generators)

    @classmethod
    def from_strings(cls, generators: Iterable[str], relators: Iterable[str]) -> Presentation:
        generators = tuple(generators)
        alphabet = Alphabet.group(generators)
        return cls(generators, tuple(alphabet.parse(r) for r in relators))

    @classmethod
    def parse(cls, text: str) -> Presentation:
        """Read ``gens: a, b`` and ``rels: b a^2 b a^-1`` lines.

        Several relators go on one ``rels:`` line separated by ``;`` or ``,``,
        or on repeated ``rels:`` lines.
        """
        gens: list[str] = []
        rels: list[str] = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"expected 'gens:' or 'rels:' line, got {raw!r}")
            key = key.strip().lower()
            items = [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]
            if key in ("gens", "generators"):
                gens.extend(items)
            elif key in ("rels", "relators"):
                rels.extend(items)
            else:
                raise ValueError(f"unknown presentation key {key!r}")
        if not gens:
            raise ValueError("presentation has no generators")
        return cls.from_strings(gens, rels)

    def format(self) -> str:
        fmt = self.alphabet.format
        return f"gens: {', '.join(self.generators)}\nrels: {'; '.join(fmt(r) for r in self.relators)}\n"


@dataclass(frozen=True)
class Element:
    """A group element, identified by its normal form."""

    nf: Word
    oracle: GroupOracle = field(compare=False, repr=False)

    def __mul__(self, other: Element) -> Element:
        return self.oracle.evaluate(self.nf + other.nf)

    def inverse(self) -> Element:
        return self.oracle.evaluate(self.oracle.alphabet.inverse_word(self.nf))

    @property
    def is_identity(self) -> bool:
        return not self.nf

    def __str__(self) -> str:
        return self.oracle.alphabet.format(self.nf)


@dataclass
class Ball:
    radius: int
    members: dict[Word, Word]  # normal form -> shortlex-least geodesic

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, nf) -> bool:
        return nf in self.members

    def length(self, nf: Word) -> int:
        return len(self.members[nf])


class GroupOracle:
    """Evaluation map ``X* -> G`` through a canonical normal form.

    ``normal_form`` receives words with padding already removed.
    """

    def __init__(
        self,
        name: str,
        alphabet: Alphabet,
        normal_form: Callable[[Word], Word],
        presentation: Presentation | None = None,
        budget: int | None = None,
    ):
        if alphabet.padding is not None or alphabet.product_of is not None:
            raise ValueError("group alphabet must be plain and unpadded")
        if any(inv is None for inv in alphabet.inverses):
            raise ValueError("group alphabet must be closed under inversion")
        self.name = name
        self.alphabet = alphabet
        self.padded_alphabet = alphabet.padded()
        self.presentation = presentation
        self.budget = budget if budget is not None else ball_budget()
        self._nf = normal_form
        self._geodesics: dict[Word, Word] = {(): ()}
        self._levels: list[list[tuple[Word, Word]]] = [[((), ())]]
        self._balls: dict[int, Ball] = {}
        self._mul_cache: dict[tuple[Word, int], Word] = {}

    def __repr__(self) -> str:
        return f"GroupOracle({self.name!r})"

    # evaluation

    def normal_form(self, word: Sequence[int]) -> Word:
        pad = len(self.alphabet)
        return self._nf(tuple(s for s in word if s != pad))

    def evaluate(self, word: Sequence[int]) -> Element:
        return Element(self.normal_form(word), self)

    def parse(self, text: str) -> Word:
        return self.padded_alphabet.parse(text)

    def element(self, text: str) -> Element:
        return self.evaluate(self.parse(text))

    def format(self, word: Sequence[int]) -> str:
        return self.padded_alphabet.format(word)

    @property
    def identity(self) -> Element:
        return Element((), self)

    def multiply(self, g: Word, h: Sequence[int]) -> Word:
        return self.normal_form(g + tuple(h))

    def step(self, g: Word, symbol: int) -> Word:
        """Normal form of ``g`` times one (possibly padding) symbol."""
        if symbol == len(self.alphabet):
            return g
        key = (g, symbol)
        out = self._mul_cache.get(key)
        if out is None:
            if len(self._mul_cache) > 2_000_000:
                self._mul_cache.clear()
            out = self._mul_cache[key] = self._nf(g + (symbol,))
        return out

    def inverse(self, g: Word) -> Word:
        return self.normal_form(self.alphabet.inverse_word(g))

    def conjugate_by(self, g: Word, h: Word) -> Word:
        return self.normal_form(self.alphabet.inverse_word(h) + g + h)

    # balls and lengths

    @property
    def symbols(self) -> range:
        return range(len(self.alphabet))

    def _grow(self) -> None:
        new: list[tuple[Word, Word]] = []
        geodesics = self._geodesics
        for w, g in self._levels[-1]:
            for x in self.symbols:
                h = self.step(g, x)
                if h not in geodesics:
                    geodesics[h] = w + (x,)
                    new.append((w + (x,), h))
                    if len(geodesics) > self.budget:
                        raise CapacityError(
                            f"ball of {self.name} exceeds budget {self.budget}",
                            len(geodesics),
                        )
        self._levels.append(new)

    @property
    def _radius(self) -> int:
        return len(self._levels) - 1

    def ball(self, radius: int) -> Ball:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        if radius in self._balls:
            return self._balls[radius]
        while self._radius < radius:
            self._grow()
        members = {g: w for level in self._levels[: radius + 1] for w, g in level}
        ball = self._balls[radius] = Ball(radius, members)
        return ball

    def growth(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be non-negative")
        while self._radius < n:
            self._grow()
        return sum(len(level) for level in self._levels[: n + 1])

    def geodesic(self, g: Word, max_radius: int | None = None) -> Word:
        """Shortlex-least geodesic word for the element with normal form ``g``."""
        while g not in self._geodesics:
            if max_radius is not None and self._radius >= max_radius:
                raise CapacityError(
                    f"element not found within radius {max_radius}", len(self._geodesics)
                )
            self._grow()
        return self._geodesics[g]

    def length(self, g: Word, max_radius: int | None = None) -> int:
        return len(self.geodesic(self.normal_form(g), max_radius))

    def distance(self, g: Word, h: Word, max_radius: int | None = None) -> int:
        return self.length(self.inverse(g) + h, max_radius)


# normal forms


def _free_normal_form(alphabet: Alphabet):
    return lambda w: free_reduce(w, alphabet)


def _abelian_normal_form(rank: int):
    def nf(word: Word) -> Word:
        exps = [0] * rank
        for s in word:
            g, inv = divmod(s, 2)
            exps[g] += -1 if inv else 1
        out: list[int] = []
        for g, e in enumerate(exps):
            out += [2 * g] * e if e > 0 else [2 * g + 1] * (-e)
        return tuple(out)

    return nf


def _klein_normal_form(word: Word) -> Word:
    # a^p b^q; conjugating b by a inverts it
    p = q = 0
    for s in word:
        if s == 0:
            p, q = p + 1, -q
        elif s == 1:
            p, q = p - 1, -q
        elif s == 2:
            q += 1
        else:
            q -= 1
    return (0,) * p + (1,) * -p + (2,) * q + (3,) * -q


def _f2xz_normal_form(word: Word) -> Word:
    # symbols x X y Y z Z; z is central
    stack: list[int] = []
    k = 0
    for s in word:
        if s == 4:
            k += 1
        elif s == 5:
            k -= 1
        elif stack and stack[-1] == s ^ 1:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack) + (4,) * k + (5,) * -k


class TorusNormalForm:
    """Normal form for ``<x, y | x^p = y^q>`` presented on other generators.

    ``delta = x^p = y^q`` is central and the quotient by it is the free product
    ``Z/p * Z/q``, so every element is uniquely ``delta^k`` times an alternating
    product of syllables ``x^i`` (0 < i < p) and ``y^j`` (0 < j < q). Each
    alphabet letter is given as a product of powers of x and y; the canonical
    word is rebuilt from given words for x, y and delta, then freely reduced.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        p: int,
        q: int,
        letters: dict[int, list[tuple[str, int]]],
        x_word: Word,
        y_word: Word,
        delta_word: Word,
    ):
        self.alphabet = alphabet
        self.order = {"x": p, "y": q}
        self.letters = letters
        self.syllable_words = {
            "x": [x_word * i for i in range(p)],
            "y": [y_word * j for j in range(q)],
        }
        self.delta_word = delta_word
        self.delta_inverse = alphabet.inverse_word(delta_word)

    def canonical(self, word: Word) -> tuple[int, tuple[tuple[str, int], ...]]:
        k = 0
        stack: list[tuple[str, int]] = []
        order = self.order
        for s in word:
            for kind, e in self.letters[s]:
                n = order[kind]
                if stack and stack[-1][0] == kind:
                    e += stack.pop()[1]
                carry, e = divmod(e, n)
                k += carry
                if e:
                    stack.append((kind, e))
        return k, tuple(stack)

    def __call__(self, word: Word) -> Word:
        k, syllables = self.canonical(word)
        out: list[int] = list(self.delta_word * k if k >= 0 else self.delta_inverse * -k)
        for kind, e in syllables:
            out.extend(self.syllable_words[kind][e])
        return free_reduce(out, self.alphabet)


# presets


def free(n: int) -> GroupOracle:
    gens = [chr(ord("a") + i) for i in range(n)]
    alphabet = Alphabet.group(gens)
    return GroupOracle(f"free:{n}", alphabet, _free_normal_form(alphabet), Presentation(tuple(gens), ()))


def free_abelian(n: int) -> GroupOracle:
    gens = [chr(ord("a") + i) for i in range(n)]
    alphabet = Alphabet.group(gens)
    pres = Presentation.from_strings(
        gens, [f"{g}{h}{g.upper()}{h.upper()}" for i, g in enumerate(gens) for h in gens[i + 1 :]]
    )
    return GroupOracle(f"free_abelian:{n}", alphabet, _abelian_normal_form(n), pres)


def klein_bottle() -> GroupOracle:
    pres = Presentation.from_strings("ab", ["Abab"])
    return GroupOracle("klein_bottle", pres.alphabet, _klein_normal_form, pres)


def f2xz() -> GroupOracle:
    pres = Presentation.from_strings("xyz", ["xzXZ", "yzYZ"])
    return GroupOracle("f2xz", pres.alphabet, _f2xz_normal_form, pres)


def gamma_presentation(n: int) -> Presentation:
    return Presentation.from_strings("ab", ["b" + "a" * n + "bA"])


def gamma(n: int) -> GroupOracle:
    """``<a, b | b a^n b = a>`` through ``x = a b^-1``, ``y = a``, ``x^2 = y^(n+1)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    pres = gamma_presentation(n)
    a, A, b, B = range(4)
    letters = {
        a: [("y", 1)],
        A: [("y", -1)],
        b: [("x", -1), ("y", 1)],
        B: [("y", -1), ("x", 1)],
    }
    nf = TorusNormalForm(pres.alphabet, 2, n + 1, letters, (a, B), (a,), (a,) * (n + 1))
    return GroupOracle(f"gamma:{n}", pres.alphabet, nf, pres)


def braid3() -> GroupOracle:
    """Three-strand braids on ``s = sigma_1``, ``t = sigma_2``.

    Uses ``x = sts``, ``y = st`` with ``x^2 = y^3``; then ``s = y^-1 x`` and
    ``t = x^-1 y^2``.
    """
    pres = Presentation.from_strings("st", ["stsTST"])
    s, S, t, T = range(4)
    letters = {
        s: [("y", -1), ("x", 1)],
        S: [("x", -1), ("y", 1)],
        t: [("x", -1), ("y", 2)],
        T: [("y", -2), ("x", 1)],
    }
    nf = TorusNormalForm(pres.alphabet, 2, 3, letters, (s, t, s), (s, t), (s, t) * 3)
    return GroupOracle("b3", pres.alphabet, nf, pres)


def from_presentation(
    pres: Presentation, name: str = "presentation", max_rules: int = 500, max_len: int = 40
) -> GroupOracle:
    system = knuth_bendix(pres.alphabet, pres.relators, max_rules=max_rules, max_len=max_len)
    if not system.confluent:
        raise CompletionError(
            f"Knuth-Bendix completion for {name} did not finish within "
            f"{max_rules} rules / length {max_len}"
        )
    oracle = GroupOracle(name, pres.alphabet, system.reduce, pres)
    oracle.rewriting_system = system
    return oracle


def preset_oracle(spec: str) -> GroupOracle:
    """``klein_bottle | free:N | free_abelian:N | f2xz | gamma:N | b3 | file:PATH``."""
    name, _, arg = spec.partition(":")
    if name == "klein_bottle" and not arg:
        return klein_bottle()
    if name == "f2xz" and not arg:
        return f2xz()
    if name == "b3" and not arg:
        return braid3()
    if name in ("free", "free_abelian", "gamma"):
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"group preset {spec!r} needs an integer parameter") from None
        return {"free": free, "free_abelian": free_abelian, "gamma": gamma}[name](n)
    if name == "file" and arg:
        return from_presentation(Presentation.parse(Path(arg).read_text()), name=spec)
    raise ValueError(f"unknown group preset {spec!r}")


def substitute(word: Sequence[int], images: dict[int, Word], alphabet: Alphabet) -> Word:
    """Monoid homomorphism given on generators; inverse letters map to inverse images."""
    out: list[int] = []
    for s in word:
        if s in images:
            out.extend(images[s])
        else:
            out.extend(alphabet.inverse_word(images[alphabet.inverses[s]]))
    return tuple(out)


def check_b3_identification(images: dict[str, str] | None = None, n: int = 2) -> bool:
    """Is the image of the relator of ``Gamma_n`` trivial in B3 under ``images``?

    Default images are ``a -> st`` and ``b -> t^-1``.
    """
    b3 = braid3()
    src = gamma_presentation(n)
    images = images or {"a": "s t", "b": "t^-1"}
    table = {src.alphabet.index(g): b3.parse(w) for g, w in images.items()}
    image = substitute(src.relators[0], table, b3.alphabet)
    return b3.normal_form(image) == ()


# images of regular languages


def language_image(
    fsa: Fsa, oracle: GroupOracle, max_len: int, budget: int | None = None
) -> dict[Word, Word]:
    """Elements represented by accepted words of length at most ``max_len``.

    Returns normal form -> shortlex-least accepted word. The search runs over
    pairs (automaton state, element), keeping only the first (least) word that
    reaches each pair; any extension of a later word is beaten by the same
    extension of the earlier one.
    """
    if len(fsa.alphabet) not in (len(oracle.alphabet), len(oracle.alphabet) + 1):
        raise ValueError("automaton alphabet does not match the group alphabet")
    budget = budget if budget is not None else oracle.budget * 4
    live = fsa.live_states()
    result: dict[Word, Word] = {}
    if fsa.initial not in live:
        return result
    seen = {(fsa.initial, ())}
    frontier: list[tuple[Word, int, Word]] = [((), fsa.initial, ())]
    table, accept = fsa.transitions, fsa.accept
    k = len(fsa.alphabet)
    for length in range(max_len + 1):
        for w, s, g in frontier:
            if s in accept and g not in result:
                result[g] = w
        if length == max_len:
            break
        nxt = []
        for w, s, g in frontier:
            row = table[s]
            for x in range(k):
                t = row[x]
                if t not in live:
                    continue
                h = oracle.step(g, x)
                if (t, h) in seen:
                    continue
                seen.add((t, h))
                nxt.append((w + (x,), t, h))
        if len(seen) > budget:
            raise CapacityError(f"language image search exceeds budget {budget}", len(seen))
        frontier = nxt
    return result
