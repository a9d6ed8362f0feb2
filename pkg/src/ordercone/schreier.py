"""Reidemeister-Schreier presentations for kernels of maps onto ``Z/m``.

Subgroups here are kernels of homomorphisms ``G -> Z/m`` given on generators,
with a Schreier transversal made of powers of a single generator. Also holds
the closed-form presentations and cone generators for kernels in ``Gamma_n``,
and abelianization through the Smith normal form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .fsa import Alphabet, Word
from .groups import GroupOracle, Presentation, cyclically_reduce, free_reduce, gamma


@dataclass(frozen=True)
class ModHom:
    """A homomorphism from a free group to ``Z/m``, given by residues of the generators."""

    m: int
    assignment: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(
            self, "assignment", tuple((g, v % self.m) for g, v in self.assignment)
        )

    @classmethod
    def of(cls, m: int, assignment: dict[str, int]) -> ModHom:
        return cls(m, tuple(assignment.items()))

    @classmethod
    def parse(cls, text: str) -> ModHom:
        """``mod:M:a=I,b=J``."""
        kind, _, rest = text.partition(":")
        m_text, _, assign_text = rest.partition(":")
        if kind != "mod":
            raise ValueError(f"bad homomorphism {text!r}; expected mod:M:a=I,b=J")
        try:
            pairs = []
            for item in assign_text.split(","):
                if item.strip():
                    g, _, v = item.partition("=")
                    pairs.append((g.strip(), int(v)))
            return cls(int(m_text), tuple(pairs))
        except ValueError:
            raise ValueError(f"bad homomorphism {text!r}; expected mod:M:a=I,b=J") from None

    def weights(self, alphabet: Alphabet) -> list[int]:
        """Residue of every symbol of ``alphabet``; unassigned generators map to 0."""
        table = dict(self.assignment)
        unknown = set(table) - {alphabet.names[g] for g in alphabet.generators}
        if unknown:
            raise ValueError(f"unknown generators in homomorphism: {sorted(unknown)}")
        out = [0] * len(alphabet)
        for g in alphabet.generators:
            v = table.get(alphabet.names[g], 0)
            out[g] = v
            out[alphabet.inverses[g]] = -v % self.m
        return out

    def value(self, word: Sequence[int], alphabet: Alphabet) -> int:
        w = self.weights(alphabet)
        return sum(w[s] for s in word if s != alphabet.padding) % self.m

    def check(self, pres: Presentation) -> None:
        """Raise unless every relator maps to 0."""
        for r in pres.relators:
            v = self.value(r, pres.alphabet)
            if v:
                raise ValueError(
                    f"homomorphism not well defined: relator {pres.alphabet.format(r)} "
                    f"maps to {v} mod {self.m}"
                )

    def describe(self) -> str:
        return f"mod:{self.m}:" + ",".join(f"{g}={v}" for g, v in self.assignment)


@dataclass(frozen=True)
class Transversal:
    """Coset representatives, one per residue, listed in construction order."""

    reps: tuple[Word, ...]
    hom: ModHom
    alphabet: Alphabet
    kind: str = "custom"

    def __post_init__(self):
        m = self.hom.m
        if len(self.reps) != m:
            raise ValueError(f"transversal needs {m} representatives, got {len(self.reps)}")
        residues = [self.hom.value(r, self.alphabet) for r in self.reps]
        if len(set(residues)) != m:
            raise ValueError("transversal representatives must lie in distinct cosets")
        members = set(self.reps)
        for r in self.reps:
            if free_reduce(r, self.alphabet) != r:
                raise ValueError(f"representative {self.alphabet.format(r)} is not freely reduced")
            if any(r[:i] not in members for i in range(len(r))):
                raise ValueError(f"transversal is not prefix-closed at {self.alphabet.format(r)}")

    @classmethod
    def powers(cls, hom: ModHom, alphabet: Alphabet, generator: str, sign: int = 1) -> Transversal:
        """``{1, g^sign, g^(2 sign), ..., g^((m-1) sign)}``."""
        g = alphabet.index(generator)
        if sign < 0:
            g = alphabet.inverses[g]
        kind = {"a": "a_powers", "b": "b_powers"}.get(generator, "custom")
        return cls(tuple((g,) * k for k in range(hom.m)), hom, alphabet, kind)

    @classmethod
    def b_powers(cls, hom: ModHom, alphabet: Alphabet) -> Transversal:
        """``{b^0, b^-1, ..., b^-(m-1)}``."""
        return cls.powers(hom, alphabet, "b", -1)

    @classmethod
    def a_powers(cls, hom: ModHom, alphabet: Alphabet) -> Transversal:
        """``{1, a, ..., a^(m-1)}``."""
        return cls.powers(hom, alphabet, "a", 1)

    @classmethod
    def named(cls, name: str, hom: ModHom, alphabet: Alphabet) -> Transversal:
        if name == "a_powers":
            return cls.a_powers(hom, alphabet)
        if name == "b_powers":
            return cls.b_powers(hom, alphabet)
        raise ValueError(f"unknown transversal {name!r}; expected a_powers or b_powers")

    def rep(self, residue: int) -> Word:
        for r in self.reps:
            if self.hom.value(r, self.alphabet) == residue % self.hom.m:
                return r
        raise AssertionError("unreachable: transversal covers every residue")

    def coset_rep(self, word: Sequence[int]) -> Word:
        return self.rep(self.hom.value(word, self.alphabet))


def gamma_star(t: Word, x: int, T: Transversal, oracle: GroupOracle | None = None) -> Word:
    """``t x (rep of t x)^-1``, freely reduced; empty when the oracle says it is trivial."""
    alphabet = T.alphabet
    t = tuple(t)
    if t not in T.reps:
        raise ValueError(f"{alphabet.format(t)} is not in the transversal")
    if x == alphabet.padding or not 0 <= x < len(alphabet):
        raise ValueError(f"symbol {x} is not a generator or inverse")
    bar = T.coset_rep(t + (x,))
    word = free_reduce(t + (x,) + alphabet.inverse_word(bar), alphabet)
    if oracle is not None and not oracle.normal_form(word):
        return ()
    return word


@dataclass
class SubgroupPresentation:
    """``<generators | relators>`` with an embedding of each generator into the parent."""

    alphabet: Alphabet
    embeddings: list[Word]
    relators: list[Word]
    parent: GroupOracle | None = None

    def __post_init__(self):
        if len(self.embeddings) != len(self.alphabet.generators):
            raise ValueError("one embedding per generator is required")

    @property
    def generators(self) -> list[tuple[str, Word]]:
        return [(self.alphabet.names[g], e) for g, e in zip(self.alphabet.generators, self.embeddings)]

    def embed(self, word: Sequence[int]) -> Word:
        if self.parent is None:
            raise ValueError("embedding needs a parent group")
        parent = self.parent.alphabet
        images = {}
        for g, e in zip(self.alphabet.generators, self.embeddings):
            images[g] = tuple(e)
            images[self.alphabet.inverses[g]] = parent.inverse_word(e)
        return tuple(s for x in word for s in images[x])

    def relators_trivial(self) -> bool:
        return all(not self.parent.normal_form(self.embed(r)) for r in self.relators)

    def format(self) -> str:
        p = self.parent
        lines = [f"gens: {', '.join(n for n, _ in self.generators)}"]
        lines += [f"  {n} -> {p.format(e) if p else e}" for n, e in self.generators]
        lines.append("rels: " + "; ".join(self.alphabet.format(r) for r in self.relators))
        return "\n".join(lines)

    def to_json(self) -> dict:
        p = self.parent
        return {
            "parent": p.name if p else None,
            "generators": [
                {"name": n, "embedding": p.format(e) if p else list(e)} for n, e in self.generators
            ],
            "relators": [self.alphabet.format(r) for r in self.relators],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass
class SchreierSystem:
    """The nontrivial Schreier generators of a transversal, with a lookup for rewriting."""

    oracle: GroupOracle
    T: Transversal
    alphabet: Alphabet
    embeddings: list[Word]
    index: dict[tuple[Word, int], int]  # (t, generator symbol) -> subgroup generator symbol

    @classmethod
    def build(cls, oracle: GroupOracle, T: Transversal, prefix: str = "x") -> SchreierSystem:
        parent = oracle.alphabet
        if T.alphabet != parent:
            raise ValueError("transversal is over a different alphabet")
        found: list[tuple[Word, int, Word]] = []
        for x in parent.generators:
            for t in T.reps:
                g = gamma_star(t, x, T, oracle)
                if g:
                    found.append((t, x, g))
        alphabet = Alphabet.group([f"{prefix}{i}" for i in range(len(found))])
        index = {(t, x): alphabet.generators[i] for i, (t, x, _) in enumerate(found)}
        return cls(oracle, T, alphabet, [g for _, _, g in found], index)

    def rewrite(self, word: Sequence[int]) -> Word:
        parent, T = self.oracle.alphabet, self.T
        hom = T.hom
        if hom.value(word, parent):
            raise ValueError(
                f"{parent.format(word)} is not in the kernel of {hom.describe()}"
            )
        out: list[int] = []
        prefix: list[int] = []
        for y in word:
            if y == parent.padding:
                continue
            t = T.coset_rep(prefix)
            if parent.inverses[y] is not None and y not in parent.generators:
                x = parent.inverses[y]
                s = self.index.get((T.coset_rep(t + (y,)), x))
                if s is not None:
                    out.append(self.alphabet.inverses[s])
            else:
                s = self.index.get((t, y))
                if s is not None:
                    out.append(s)
            prefix.append(y)
        return free_reduce(out, self.alphabet)

    def presentation(self, relators: Sequence[Word]) -> SubgroupPresentation:
        return SubgroupPresentation(self.alphabet, list(self.embeddings), list(relators), self.oracle)


def tau_rewrite(w: Sequence[int], oracle: GroupOracle, T: Transversal) -> tuple[Word, SchreierSystem]:
    """Rewrite a kernel word as a word in the Schreier generators.

    Returns the rewritten word together with the generator system it is over.
    """
    system = SchreierSystem.build(oracle, T)
    return system.rewrite(w), system


def subgroup_presentation(oracle: GroupOracle, hom: ModHom, T: Transversal) -> SubgroupPresentation:
    """Generators: nontrivial ``gamma(t, x)``; relators: ``tau(t r t^-1)`` for ``t`` in ``T``, ``r`` a relator."""
    pres = oracle.presentation
    if pres is None:
        raise ValueError("the parent group has no presentation")
    hom.check(pres)
    if T.hom != hom:
        raise ValueError("transversal was built for a different homomorphism")
    system = SchreierSystem.build(oracle, T)
    relators = []
    for t in T.reps:
        for r in pres.relators:
            rel = system.rewrite(t + tuple(r) + pres.alphabet.inverse_word(t))
            if rel:
                relators.append(rel)
    return system.presentation(relators)


# closed forms for Gamma_n


def congruence_holds(n: int, m: int, mu: int) -> bool:
    return ((n - 1) * mu + 2) % m == 0


def navas_cone_generators(n: int, m: int, mu: int) -> list[Word]:
    """Cone generators of the kernel of ``a -> mu, b -> 1`` in ``Gamma_n``.

    ``b^-s a b^(s + m - mu)`` for ``s < mu``, ``b^-s a b^(s - mu)`` for ``s >= mu``, then ``b^m``.
    """
    if n < 1 or m < 2 or not 0 <= mu < m:
        raise ValueError("need n >= 1, m >= 2 and 0 <= mu < m")
    if not congruence_holds(n, m, mu):
        raise ValueError(f"condition (n-1)*mu = -2 mod m fails for n={n}, m={m}, mu={mu}")
    a, b, B = 0, 2, 3
    out = []
    for s in range(m):
        k = s + (m - mu) if s < mu else s - mu
        out.append((B,) * s + (a,) + (b,) * k)
    out.append((b,) * m)
    return out


def h_presentation_closed_form(m: int, t: int) -> SubgroupPresentation:
    """Kernel of ``a, b -> 1`` mod ``m`` in ``Gamma_(m-1+mt)`` on ``x_0, ..., x_m``.

    ``x_i -> a^i b a^-(i+1)`` for ``i <= m-2``, ``x_(m-1) -> a^(m-1) b``, ``x_m -> a^m``;
    relators ``x_i x_m^(t+1) x_i`` and ``x_(m-1) x_m^t x_(m-1) x_m^-1``.
    """
    if m < 2 or t < 0:
        raise ValueError("need m >= 2 and t >= 0")
    n = m - 1 + m * t
    a, A, b = 0, 1, 2
    alphabet = Alphabet.group([f"x{i}" for i in range(m + 1)])
    embeddings = [(a,) * i + (b,) + (A,) * (i + 1) for i in range(m - 1)]
    embeddings += [(a,) * (m - 1) + (b,), (a,) * m]
    x = alphabet.generators
    xm, Xm = x[m], alphabet.inverses[x[m]]
    relators = [(x[i],) + (xm,) * (t + 1) + (x[i],) for i in range(m - 1)]
    relators.append((x[m - 1],) + (xm,) * t + (x[m - 1], Xm))
    return SubgroupPresentation(alphabet, embeddings, relators, gamma(n))


# matching presentations


def canonical_relator(word: Sequence[int], alphabet: Alphabet) -> Word:
    """Least cyclic rotation of the word or its inverse, after cyclic reduction."""
    w = cyclically_reduce(word, alphabet)
    if not w:
        return ()
    candidates = []
    for v in (w, alphabet.inverse_word(w)):
        candidates += [v[i:] + v[:i] for i in range(len(v))]
    return min(candidates)


def rename(word: Sequence[int], mapping: dict[int, int], alphabet: Alphabet) -> Word:
    """Apply a generator bijection (inverses follow)."""
    out = []
    for s in word:
        if s in mapping:
            out.append(mapping[s])
        else:
            out.append(alphabet.inverses[mapping[alphabet.inverses[s]]])
    return tuple(out)


def match_presentations(sp: SubgroupPresentation, target: SubgroupPresentation) -> dict[int, int] | None:
    """Generator map ``sp -> target`` by equal freely reduced embeddings, if relators then agree.

    Relators are compared as multisets up to cyclic rotation and inversion.
    Returns ``None`` when the generators or relators do not correspond.
    """
    parent = sp.parent.alphabet
    by_embedding = {
        free_reduce(e, parent): g for g, e in zip(target.alphabet.generators, target.embeddings)
    }
    mapping = {}
    for g, e in zip(sp.alphabet.generators, sp.embeddings):
        h = by_embedding.get(free_reduce(e, parent))
        if h is None:
            return None
        mapping[g] = h
    if len(set(mapping.values())) != len(target.embeddings):
        return None
    ours = sorted(canonical_relator(rename(r, mapping, target.alphabet), target.alphabet) for r in sp.relators)
    theirs = sorted(canonical_relator(r, target.alphabet) for r in target.relators)
    return mapping if ours == theirs else None


# abelianization


def relation_matrix(sp: SubgroupPresentation) -> list[list[int]]:
    """Exponent sums, one row per relator and one column per generator."""
    gens = sp.alphabet.generators
    col = {g: j for j, g in enumerate(gens)}
    rows = []
    for r in sp.relators:
        row = [0] * len(gens)
        for s in r:
            if s in col:
                row[col[s]] += 1
            else:
                row[col[sp.alphabet.inverses[s]]] -= 1
        rows.append(row)
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form, non-negative, each entry dividing the next.

    The pivot is always an entry of least absolute value in the remaining block.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    for k in range(min(rows, cols)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            a[k], a[pi] = a[pi], a[k]
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            p = a[k][k]
            done = True
            for i in range(k + 1, rows):
                q = a[i][k] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                done &= a[i][k] == 0
            for j in range(k + 1, cols):
                q = a[k][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[k]
                done &= a[k][j] == 0
            if not done:
                continue
            bad = [(i, j) for i in range(k + 1, rows) for j in range(k + 1, cols) if a[i][j] % p]
            if not bad:
                break
            # fold a row with an entry not divisible by the pivot into row k
            i = bad[0][0]
            a[k] = [x + y for x, y in zip(a[k], a[i])]
        if k >= rows or not any(a[i][j] for i in range(k, rows) for j in range(k, cols)):
            break
        diag.append(abs(a[k][k]))
    return diag


def abelianization(sp: SubgroupPresentation) -> list[int]:
    """Invariant factors of the abelianization, one per generator.

    Units are kept (``1`` for a trivial cyclic factor) and free rank shows as ``0``.
    """
    n = len(sp.alphabet.generators)
    matrix = relation_matrix(sp)
    diag = smith_normal_form(matrix) if matrix else []
    return diag + [0] * (n - len(diag))


def abelian_invariants(factors: Sequence[int]) -> list[int]:
    """Drop the unit factors: ``(1, 2, 0) -> (2, 0)``."""
    return [d for d in factors if d != 1]


def rank_certificate(m: int, t: int) -> int:
    """Rank ``m + 1`` of the cone of the kernel in ``Gamma_(m-1+mt)``, for odd ``t``.

    Checks that the abelianization needs ``m + 1`` generators (a lower bound on
    the rank) and that the cone has ``m + 1`` generators (an upper bound).
    """
    if t % 2 == 0:
        raise ValueError(f"rank certificate needs t odd, got t={t}")
    if m < 2:
        raise ValueError("need m >= 2")
    n = m - 1 + m * t
    sp = h_presentation_closed_form(m, t)
    lower = len(abelian_invariants(abelianization(sp)))
    mu = next(mu for mu in range(m) if congruence_holds(n, m, mu))
    Y = navas_cone_generators(n, m, mu)
    hom = ModHom.of(m, {"a": mu, "b": 1})
    G = sp.parent
    if any(hom.value(y, G.alphabet) for y in Y):
        raise AssertionError("cone generator outside the kernel")
    upper = len(Y)
    if lower != m + 1 or upper != m + 1:
        raise AssertionError(f"rank bounds disagree: lower {lower}, upper {upper}")
    return m + 1
