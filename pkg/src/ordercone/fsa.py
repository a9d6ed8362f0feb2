"""Deterministic finite automata over small indexed alphabets.

Words are tuples of symbol indices. Every automaton is stored complete and
deterministic: a transition table ``transitions[state][symbol]`` with an
explicit sink state whenever one is needed. Constructions that are naturally
nondeterministic (projection, star of a word list) are determinized by the
subset construction before they are returned.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[int, ...]

PADDING_NAME = "$"


def _inverse_name(name: str) -> str:
    if len(name) == 1 and name.islower():
        return name.upper()
    return name + "^-1"


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol names, an optional formal inversion, an optional padding symbol.

    A product alphabet enumerates pairs ``(i, j)`` of its two factors row-major:
    the pair symbol index is ``i * len(second) + j``.
    """

    names: tuple[str, ...]
    inverses: tuple[int | None, ...] = ()
    padding: int | None = None
    product_of: tuple[Alphabet, Alphabet] | None = None
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.inverses:
            object.__setattr__(self, "inverses", (None,) * len(self.names))
        if len(self.inverses) != len(self.names):
            raise ValueError("inverse table length does not match alphabet size")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate symbol names in {self.names}")
        for i, j in enumerate(self.inverses):
            if j is not None and self.inverses[j] != i:
                raise ValueError(f"inverse is not an involution at {self.names[i]!r}")
        if self.padding is not None and self.inverses[self.padding] is not None:
            raise ValueError("padding symbol cannot have an inverse")
        if self.product_of is not None:
            first, second = self.product_of
            if len(self.names) != len(first) * len(second):
                raise ValueError("product alphabet must enumerate all pairs")
        object.__setattr__(self, "_lookup", {n: i for i, n in enumerate(self.names)})

    # constructors

    @classmethod
    def plain(cls, names: Iterable[str]) -> Alphabet:
        return cls(tuple(names))

    @classmethod
    def group(cls, generators: Iterable[str]) -> Alphabet:
        """Generators interleaved with their formal inverses: ``a, A, b, B, ...``."""
        names: list[str] = []
        inverses: list[int] = []
        for g in generators:
            k = len(names)
            names += [g, _inverse_name(g)]
            inverses += [k + 1, k]
        return cls(tuple(names), tuple(inverses))

    def padded(self) -> Alphabet:
        """``X^$``: this alphabet with a padding symbol appended."""
        if self.padding is not None:
            return self
        if self.product_of is not None:
            raise ValueError("cannot pad a product alphabet")
        return Alphabet(self.names + (PADDING_NAME,), self.inverses + (None,), len(self.names))

    def unpadded(self) -> Alphabet:
        if self.padding is None:
            return self
        if self.padding != len(self.names) - 1:
            raise ValueError("padding symbol must be last to be removed")
        return Alphabet(self.names[:-1], self.inverses[:-1])

    def product(self, other: Alphabet) -> Alphabet:
        names = tuple(f"({x},{y})" for x in self.names for y in other.names)
        return Alphabet(names, product_of=(self, other))

    # queries

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._lookup[name]
        except KeyError:
            raise ValueError(f"unknown symbol {name!r}") from None

    @property
    def is_product(self) -> bool:
        return self.product_of is not None

    @property
    def generators(self) -> list[int]:
        """Symbols that are not padding and come first in their inverse pair."""
        out = []
        for i, j in enumerate(self.inverses):
            if i == self.padding:
                continue
            if j is None or i <= j:
                out.append(i)
        return out

    def pair(self, i: int, j: int) -> int:
        return i * len(self.product_of[1]) + j

    def split(self, k: int) -> tuple[int, int]:
        return divmod(k, len(self.product_of[1]))

    def inverse_word(self, word: Sequence[int]) -> Word:
        out = []
        for s in reversed(word):
            if s == self.padding:
                continue
            inv = self.inverses[s]
            if inv is None:
                raise ValueError(f"symbol {self.names[s]!r} has no inverse")
            out.append(inv)
        return tuple(out)

    def strip_padding(self, word: Sequence[int]) -> Word:
        if self.padding is None:
            return tuple(word)
        return tuple(s for s in word if s != self.padding)

    def check_word(self, word: Sequence[int]) -> Word:
        n = len(self.names)
        for s in word:
            if not (isinstance(s, int) and 0 <= s < n):
                raise ValueError(f"symbol {s!r} outside alphabet of size {n}")
        return tuple(word)

    # text

    def _token_pattern(self):
        names = sorted(self.names, key=len, reverse=True)
        alt = "|".join(re.escape(n) for n in names)
        return re.compile(rf"\s*({alt})(?:\^(-?\d+))?")

    def parse(self, text: str) -> Word:
        """Parse ``"b a^2 b a^-1"``, ``"baabA"`` or, for product alphabets, ``"ab|ba"``."""
        text = text.strip()
        if self.product_of is not None:
            first, second = self.product_of
            left, sep, right = text.partition("|")
            if not sep:
                raise ValueError("pair words are written 'u|v'")
            u, v = first.parse(left), second.parse(right)
            if len(u) != len(v):
                raise ValueError("pair word coordinates must have equal length")
            return tuple(self.pair(i, j) for i, j in zip(u, v))
        if text in ("", "1", "e", "ε"):
            return ()
        pattern = self._token_pattern()
        pos, out = 0, []
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = pattern.match(text, pos)
            if m is None:
                raise ValueError(f"cannot parse {text[pos:]!r} as a word")
            s = self.index(m.group(1))
            power = int(m.group(2)) if m.group(2) is not None else 1
            if power < 0:
                inv = self.inverses[s]
                if inv is None:
                    raise ValueError(f"symbol {m.group(1)!r} has no inverse")
                s, power = inv, -power
            out.extend([s] * power)
            pos = m.end()
        return tuple(out)

    def format(self, word: Sequence[int]) -> str:
        if self.product_of is not None:
            first, second = self.product_of
            pairs = [self.split(k) for k in word]
            return first.format([p[0] for p in pairs]) + "|" + second.format([p[1] for p in pairs])
        if not word:
            return "ε"
        names = [self.names[s] for s in word]
        if all(len(n) == 1 for n in self.names):
            return "".join(names)
        return " ".join(names)

    # serialization

    def to_json(self) -> dict:
        data: dict = {"names": list(self.names)}
        pairs = [[i, j] for i, j in enumerate(self.inverses) if j is not None and i < j]
        data["inverses"] = pairs
        if self.padding is not None:
            data["padding"] = self.padding
        if self.product_of is not None:
            data["product_of"] = [a.to_json() for a in self.product_of]
        return data

    @classmethod
    def from_json(cls, data: dict) -> Alphabet:
        names = tuple(data["names"])
        inverses: list[int | None] = [None] * len(names)
        for i, j in data.get("inverses", []):
            inverses[i], inverses[j] = j, i
        product_of = None
        if data.get("product_of"):
            a, b = data["product_of"]
            product_of = (cls.from_json(a), cls.from_json(b))
        return cls(names, tuple(inverses), data.get("padding"), product_of)


@dataclass(frozen=True)
class Fsa:
    """Complete deterministic automaton ``(S, X, tau, A, s0)``."""

    alphabet: Alphabet
    transitions: tuple[tuple[int, ...], ...]
    accept: frozenset[int]
    initial: int = 0

    def __post_init__(self):
        n, k = len(self.transitions), len(self.alphabet)
        if n == 0:
            raise ValueError("automaton needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        object.__setattr__(self, "accept", frozenset(self.accept))
        if any(not 0 <= s < n for s in self.accept):
            raise ValueError("accept state out of range")
        for row in self.transitions:
            if len(row) != k or any(not 0 <= t < n for t in row):
                raise ValueError("transition table must be total over the alphabet")

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    def run(self, word: Sequence[int], state: int | None = None) -> int:
        s = self.initial if state is None else state
        table = self.transitions
        k = len(self.alphabet)
        for x in word:
            if not 0 <= x < k:
                raise ValueError(f"symbol {x!r} outside alphabet of size {k}")
            s = table[s][x]
        return s

    def accepts(self, word: Sequence[int]) -> bool:
        return self.run(word) in self.accept

    def accepts_text(self, text: str) -> bool:
        return self.accepts(self.alphabet.parse(text))

    def live_states(self) -> set[int]:
        """States from which some accept state is reachable."""
        preds: list[set[int]] = [set() for _ in self.transitions]
        for s, row in enumerate(self.transitions):
            for t in row:
                preds[t].add(s)
        live = set(self.accept)
        queue = deque(live)
        while queue:
            t = queue.popleft()
            for s in preds[t]:
                if s not in live:
                    live.add(s)
                    queue.append(s)
        return live

    def sink_states(self) -> set[int]:
        return {
            s
            for s, row in enumerate(self.transitions)
            if s not in self.accept and all(t == s for t in row)
        }

    def is_empty(self) -> bool:
        return self.initial not in self.live_states()


# basic automata


def _check_alphabet(alphabet: Alphabet) -> None:
    if len(alphabet) == 0:
        raise ValueError("alphabet is empty")


def semigroup_automaton(alphabet: Alphabet) -> Fsa:
    """Two states, ``s0`` initial and rejecting, every letter leads to accepting ``s1``."""
    _check_alphabet(alphabet)
    k = len(alphabet)
    return Fsa(alphabet, ((1,) * k, (1,) * k), frozenset({1}), 0)


def all_words(alphabet: Alphabet) -> Fsa:
    _check_alphabet(alphabet)
    return Fsa(alphabet, ((0,) * len(alphabet),), frozenset({0}), 0)


def empty_language(alphabet: Alphabet) -> Fsa:
    _check_alphabet(alphabet)
    return Fsa(alphabet, ((0,) * len(alphabet),), frozenset(), 0)


def words_over(alphabet: Alphabet, symbols: Iterable[int], nonempty: bool = True) -> Fsa:
    """``S^+`` (or ``S^*``) for a subset ``S`` of the alphabet; other symbols go to a sink."""
    _check_alphabet(alphabet)
    allowed = set(symbols)
    k = len(alphabet)
    # states: 0 start, 1 inside, 2 sink
    row0 = tuple(1 if x in allowed else 2 for x in range(k))
    return Fsa(
        alphabet,
        (row0, row0, (2,) * k),
        frozenset({1} if nonempty else {0, 1}),
        0,
    )


def finite_language(alphabet: Alphabet, words: Iterable[Sequence[int]]) -> Fsa:
    _check_alphabet(alphabet)
    k = len(alphabet)
    trie: list[dict[int, int]] = [{}]
    accept = set()
    for w in words:
        node = 0
        for x in alphabet.check_word(w):
            if x not in trie[node]:
                trie[node][x] = len(trie)
                trie.append({})
            node = trie[node][x]
        accept.add(node)
    sink = len(trie)
    rows = [tuple(edges.get(x, sink) for x in range(k)) for edges in trie]
    rows.append((sink,) * k)
    return Fsa(alphabet, tuple(rows), frozenset(accept), 0)


# determinization


def determinize(
    alphabet: Alphabet,
    delta: Sequence[Sequence[Iterable[int]]],
    initial: Iterable[int],
    accepting: Iterable[int],
) -> Fsa:
    """Subset construction. ``delta[q][x]`` is the set of successors of NFA state ``q``."""
    k = len(alphabet)
    accepting = frozenset(accepting)
    start = frozenset(initial)
    index = {start: 0}
    order = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        subset = order[i]
        row = []
        for x in range(k):
            nxt: set[int] = set()
            for q in subset:
                nxt.update(delta[q][x])
            key = frozenset(nxt)
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    accept = frozenset(j for j, sub in enumerate(order) if sub & accepting)
    return Fsa(alphabet, tuple(rows), accept, 0)


# closure operations


def _reachable_product(a: Fsa, b: Fsa, alphabet: Alphabet, step, accepting) -> Fsa:
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for x in range(len(alphabet)):
            nxt = step(p, q, x)
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    accept = frozenset(j for j, (p, q) in enumerate(order) if accepting(p, q))
    return Fsa(alphabet, tuple(rows), accept, 0)


def intersect(l1: Fsa, l2: Fsa) -> Fsa:
    if l1.alphabet != l2.alphabet:
        raise ValueError("intersection needs automata over the same alphabet")
    t1, t2 = l1.transitions, l2.transitions
    return _reachable_product(
        l1,
        l2,
        l1.alphabet,
        lambda p, q, x: (t1[p][x], t2[q][x]),
        lambda p, q: p in l1.accept and q in l2.accept,
    )


def union(l1: Fsa, l2: Fsa) -> Fsa:
    if l1.alphabet != l2.alphabet:
        raise ValueError("union needs automata over the same alphabet")
    t1, t2 = l1.transitions, l2.transitions
    return _reachable_product(
        l1,
        l2,
        l1.alphabet,
        lambda p, q, x: (t1[p][x], t2[q][x]),
        lambda p, q: p in l1.accept or q in l2.accept,
    )


def complement(fsa: Fsa) -> Fsa:
    return Fsa(
        fsa.alphabet,
        fsa.transitions,
        frozenset(range(fsa.num_states)) - fsa.accept,
        fsa.initial,
    )


def product(l1: Fsa, l2: Fsa) -> Fsa:
    """Equal-length pair words ``(u, v)`` with ``u`` in ``l1`` and ``v`` in ``l2``."""
    if l1.alphabet != l2.alphabet:
        raise ValueError("product needs automata over the same alphabet")
    pair_alphabet = l1.alphabet.product(l2.alphabet)
    width = len(l2.alphabet)
    t1, t2 = l1.transitions, l2.transitions
    return _reachable_product(
        l1,
        l2,
        pair_alphabet,
        lambda p, q, x: (t1[p][x // width], t2[q][x % width]),
        lambda p, q: p in l1.accept and q in l2.accept,
    )


def project(fsa: Fsa, coord: int) -> Fsa:
    """Projection of a pair-word language onto coordinate 1 or 2, determinized."""
    if fsa.alphabet.product_of is None:
        raise ValueError("projection needs an automaton over a product alphabet")
    if coord not in (1, 2):
        raise ValueError("coordinate must be 1 or 2")
    first, second = fsa.alphabet.product_of
    target = first if coord == 1 else second
    width = len(second)
    k = len(target)
    delta: list[list[set[int]]] = [[set() for _ in range(k)] for _ in range(fsa.num_states)]
    for s, row in enumerate(fsa.transitions):
        for sym, t in enumerate(row):
            i, j = divmod(sym, width)
            delta[s][i if coord == 1 else j].add(t)
    # states that cannot reach acceptance only bloat the subsets
    live = fsa.live_states()
    delta = [[{t for t in succ if t in live} for succ in row] for row in delta]
    initial = {fsa.initial} if fsa.initial in live else set()
    return determinize(target, delta, initial, fsa.accept)


def intersect_projection(pairs: Fsa, coord: int, other: Fsa) -> Fsa:
    """``project(pairs, coord) & other`` without determinizing the projection on its own.

    The subset construction only explores subsets paired with states of the
    deterministic ``other``, which keeps it small when ``other`` is restrictive.
    """
    if pairs.alphabet.product_of is None:
        raise ValueError("intersect_projection needs a pair automaton")
    first, second = pairs.alphabet.product_of
    target = first if coord == 1 else second
    if target != other.alphabet:
        raise ValueError("projected alphabet does not match the other automaton")
    width = len(second)
    k = len(target)
    live = pairs.live_states()
    delta: list[list[set[int]]] = [[set() for _ in range(k)] for _ in range(pairs.num_states)]
    for s, row in enumerate(pairs.transitions):
        for sym, t in enumerate(row):
            if t in live:
                i, j = divmod(sym, width)
                delta[s][i if coord == 1 else j].add(t)
    start = (other.initial, frozenset({pairs.initial} & live))
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        q, subset = order[i]
        row = []
        for x in range(k):
            nxt: set[int] = set()
            for s in subset:
                nxt.update(delta[s][x])
            key = (other.transitions[q][x], frozenset(nxt))
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    accept = frozenset(
        j for j, (q, subset) in enumerate(order) if q in other.accept and subset & pairs.accept
    )
    return Fsa(target, tuple(rows), accept, 0)


def pad_language(fsa: Fsa) -> Fsa:
    """Loop the padding symbol on every state; same state count."""
    if fsa.alphabet.padding is not None or fsa.alphabet.product_of is not None:
        raise ValueError("pad_language needs an automaton over a plain unpadded alphabet")
    alphabet = fsa.alphabet.padded()
    rows = tuple(row + (s,) for s, row in enumerate(fsa.transitions))
    return Fsa(alphabet, rows, fsa.accept, fsa.initial)


def star_of_words(alphabet: Alphabet, words: Sequence[Sequence[int]]) -> Fsa:
    """All concatenations of the given words, the empty concatenation included.

    Built as a trie whose last letters return to the root, then determinized.
    """
    _check_alphabet(alphabet)
    if not words:
        raise ValueError("star_of_words needs at least one word")
    k = len(alphabet)
    root = 0
    children: list[dict[int, int]] = [{}]
    returns: list[set[int]] = [set()]  # symbols leading back to the root
    for w in words:
        w = alphabet.check_word(w)
        if not w:
            raise ValueError("star_of_words does not accept the empty word")
        node = root
        for x in w[:-1]:
            nxt = children[node].get(x)
            if nxt is None:
                nxt = children[node][x] = len(children)
                children.append({})
                returns.append(set())
            node = nxt
        returns[node].add(w[-1])
    delta = []
    for node in range(len(children)):
        row = []
        for x in range(k):
            succ = set()
            if x in children[node]:
                succ.add(children[node][x])
            if x in returns[node]:
                succ.add(root)
            row.append(succ)
        delta.append(row)
    return determinize(alphabet, delta, {root}, {root})


def trie_size(words: Sequence[Sequence[int]]) -> int:
    """Node count of the return-edge trie used by :func:`star_of_words`."""
    prefixes = {tuple(w[:i]) for w in words for i in range(len(w))}
    return len(prefixes)


def minus_empty_word(fsa: Fsa) -> Fsa:
    return intersect(fsa, semigroup_automaton(fsa.alphabet))


# minimization


def reachable(fsa: Fsa) -> Fsa:
    """Restrict to reachable states, renumbered in breadth-first order."""
    index = {fsa.initial: 0}
    order = [fsa.initial]
    i = 0
    while i < len(order):
        for t in fsa.transitions[order[i]]:
            if t not in index:
                index[t] = len(order)
                order.append(t)
        i += 1
    rows = tuple(tuple(index[t] for t in fsa.transitions[s]) for s in order)
    accept = frozenset(index[s] for s in order if s in fsa.accept)
    return Fsa(fsa.alphabet, rows, accept, 0)


def minimize(fsa: Fsa) -> Fsa:
    """Minimal complete DFA by Moore partition refinement.

    The result is numbered in breadth-first order from the initial state, so two
    automata over the same alphabet recognize the same language exactly when
    their minimized forms compare equal.
    """
    fsa = reachable(fsa)
    n = fsa.num_states
    labels: dict[bool, int] = {}
    block = [labels.setdefault(s in fsa.accept, len(labels)) for s in range(n)]
    count = len(labels)
    while True:
        signatures = {}
        new_block = []
        for s in range(n):
            sig = (block[s], tuple(block[t] for t in fsa.transitions[s]))
            new_block.append(signatures.setdefault(sig, len(signatures)))
        if len(signatures) == count:
            break
        block, count = new_block, len(signatures)
    rows: dict[int, tuple[int, ...]] = {}
    for s in range(n):
        if block[s] not in rows:
            rows[block[s]] = tuple(block[t] for t in fsa.transitions[s])
    quotient = Fsa(
        fsa.alphabet,
        tuple(rows[b] for b in range(count)),
        frozenset(block[s] for s in fsa.accept),
        block[fsa.initial],
    )
    return reachable(quotient)


def equivalent(a: Fsa, b: Fsa) -> bool:
    return minimize(a) == minimize(b)


# enumeration


def enumerate_words(fsa: Fsa, max_len: int) -> list[Word]:
    """All accepted words of length at most ``max_len`` in shortlex order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    live = fsa.live_states()
    if fsa.initial not in live:
        return []
    out: list[Word] = []
    frontier: list[tuple[Word, int]] = [((), fsa.initial)]
    k = len(fsa.alphabet)
    for length in range(max_len + 1):
        out.extend(w for w, s in frontier if s in fsa.accept)
        if length == max_len:
            break
        nxt = []
        for w, s in frontier:
            row = fsa.transitions[s]
            for x in range(k):
                t = row[x]
                if t in live:
                    nxt.append((w + (x,), t))
        frontier = nxt
    return out


def all_words_up_to(alphabet: Alphabet, max_len: int) -> list[Word]:
    return enumerate_words(all_words(alphabet), max_len)


# serialization


def to_json(fsa: Fsa) -> dict:
    return {
        "alphabet": fsa.alphabet.to_json(),
        "initial": fsa.initial,
        "accept": sorted(fsa.accept),
        "transitions": [list(row) for row in fsa.transitions],
    }


def from_json(data: dict) -> Fsa:
    return Fsa(
        Alphabet.from_json(data["alphabet"]),
        tuple(tuple(row) for row in data["transitions"]),
        frozenset(data["accept"]),
        data["initial"],
    )


def to_dot(fsa: Fsa, show_sink: bool = False, name: str = "fsa") -> str:
    sinks = set() if show_sink else fsa.sink_states()
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in range(fsa.num_states):
        shape = "doublecircle" if s in fsa.accept else "circle"
        lines.append(f'  q{s} [shape={shape}, label="{s}"];')
    lines.append(f"  __start -> q{fsa.initial};")
    for s, row in enumerate(fsa.transitions):
        if s in sinks:
            continue
        for x, t in enumerate(row):
            if t in sinks:
                continue
            label = fsa.alphabet.names[x].replace('"', r"\"")
            lines.append(f'  q{s} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
