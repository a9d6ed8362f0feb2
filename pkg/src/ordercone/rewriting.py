"""Shortlex Knuth-Bendix completion for group presentations.

Symbols are encoded as single characters whose code points follow the
alphabet order, so Python string comparison is the lexicographic part of the
shortlex order and ``str.replace`` does the rewriting.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .fsa import Alphabet, Word

_BASE = 0x4E00


def _encode(word) -> str:
    return "".join(chr(_BASE + s) for s in word)


def _decode(text: str) -> Word:
    return tuple(ord(c) - _BASE for c in text)


def _shortlex_key(s: str):
    return (len(s), s)


def _orient(u: str, v: str) -> tuple[str, str]:
    return (u, v) if _shortlex_key(u) > _shortlex_key(v) else (v, u)


def _reduce(w: str, rules: dict[str, str]) -> str:
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules.items():
            if lhs in w:
                w = w.replace(lhs, rhs)
                changed = True
    return w


@dataclass
class RewritingSystem:
    alphabet: Alphabet
    rules: list[tuple[Word, Word]]
    confluent: bool
    _pattern: re.Pattern | None = field(default=None, init=False, repr=False)
    _table: dict[str, str] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for lhs, rhs in self.rules:
            if _shortlex_key(_encode(lhs)) <= _shortlex_key(_encode(rhs)):
                raise ValueError("every rule must strictly decrease shortlex order")
        self._table = {_encode(l): _encode(r) for l, r in self.rules}
        if self._table:
            alternation = "|".join(
                re.escape(l) for l in sorted(self._table, key=len, reverse=True)
            )
            self._pattern = re.compile(alternation)

    def reduce(self, word) -> Word:
        """Rewrite to an irreducible word; unique when the system is confluent."""
        if self._pattern is None:
            return tuple(word)
        text = _encode(word)
        table, pattern = self._table, self._pattern
        while True:
            new = pattern.sub(lambda m: table[m.group(0)], text)
            if new == text:
                return _decode(text)
            text = new

    def format_rules(self) -> list[str]:
        fmt = self.alphabet.format
        return [f"{fmt(l)} -> {fmt(r)}" for l, r in self.rules]


def knuth_bendix(
    alphabet: Alphabet,
    relators,
    max_rules: int = 500,
    max_len: int = 40,
) -> RewritingSystem:
    """Complete ``x x^-1 = 1`` plus ``r = 1`` for each relator under shortlex.

    On hitting either cap the partial system is returned with
    ``confluent=False``; its rules are still valid equalities in the group.
    """
    equations: deque[tuple[str, str]] = deque()
    for s, inv in enumerate(alphabet.inverses):
        if inv is not None:
            equations.append((_encode((s, inv)), ""))
    for r in relators:
        equations.append((_encode(r), ""))

    rules: dict[str, str] = {}
    processed: set[str] = set()
    confluent = True

    while True:
        while equations:
            u, v = equations.popleft()
            u, v = _reduce(u, rules), _reduce(v, rules)
            if u == v:
                continue
            lhs, rhs = _orient(u, v)
            for old in [l for l in rules if lhs in l]:
                equations.append((old, rules.pop(old)))
                processed.discard(old)
            rules[lhs] = rhs
            for l in rules:
                rules[l] = _reduce(rules[l], rules)
            if len(rules) > max_rules or len(lhs) > max_len:
                confluent = False
                equations.clear()
                break
        if not confluent:
            break
        todo = [l for l in rules if l not in processed]
        if not todo:
            break
        new = min(todo, key=_shortlex_key)
        processed.add(new)
        for other in list(processed):
            for a, b in ((new, other), (other, new)):
                ra, rb = rules[a], rules[b]
                for k in range(1, min(len(a), len(b))):
                    if a[-k:] == b[:k]:
                        equations.append((ra + b[k:], a[:-k] + rb))

    ordered = sorted(rules.items(), key=lambda p: _shortlex_key(p[0]))
    return RewritingSystem(
        alphabet,
        [(_decode(l), _decode(r)) for l, r in ordered],
        confluent,
    )
