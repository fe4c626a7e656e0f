"""The algebra f (and its free cover) as combinations of divided-power words.

A word is a tuple of ``(node_index, multiplicity)`` letters with no two
adjacent letters on the same node; it stands for the monomial
``theta_{i1}^{(a1)} ... theta_{in}^{(an)}``.

Equality in f is decided through *path coordinates*: for a node sequence
``s = (s1, ..., sn)`` the scalar ``_{sn}r(... _{s1}r(x))``. Since the only
element of positive degree killed by every ``_ir`` is zero, these scalars
determine ``x``; on the integral form they are Laurent polynomials, so no
rational arithmetic is needed to compare elements. They are also the values
of the bilinear form against undivided monomials, up to an explicit factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .cartan import CartanDatum, Node
from .coeff import (
    ONE,
    ZERO,
    Coeff,
    LaurentPoly,
    RationalFunc,
    as_coeff,
    quantum_binomial,
    quantum_factorial,
    simplify,
)
from . import linalg

Word = tuple  # ((node_index, multiplicity), ...)

__all__ = [
    "Word",
    "FreeElement",
    "GramTable",
    "normalize_letters",
    "word_weight",
    "word_degree",
    "expand_word",
    "format_word",
    "parse_word",
    "multiply",
    "i_r",
    "r_i",
    "comult",
    "bilinear_form",
    "self_pairing_divided",
    "path_coordinate",
    "character",
    "gram",
    "equals_in_f",
    "serre_element",
    "sigma",
    "bar_f",
    "words_of_weight",
    "sequences_of_weight",
]

_MEMO_LIMIT = 3_000_000


def _memo(datum: CartanDatum, name: str) -> dict:
    table = datum.memo.get(name)
    if table is None:
        table = datum.memo.setdefault(name, {})
    elif len(table) > _MEMO_LIMIT:
        table.clear()
    return table


# words ------------------------------------------------------------------

def normalize_letters(letters: Iterable[tuple]) -> tuple:
    """Merge adjacent letters on the same node; return ``(coefficient, word)``.

    ``theta^(a) theta^(b) = [a+b choose a] theta^(a+b)``.
    """
    out: list = []
    coeff = ONE
    for node, mult in letters:
        if mult == 0:
            continue
        if mult < 0:
            raise ValueError("letter multiplicities must be nonnegative")
        if out and out[-1][0] == node:
            prev = out[-1][1]
            coeff = coeff * quantum_binomial(prev + mult, mult)
            out[-1] = (node, prev + mult)
        else:
            out.append((node, mult))
    return coeff, tuple(out)


def word_weight(word: Word, rank: int) -> tuple:
    w = [0] * rank
    for node, mult in word:
        w[node] += mult
    return tuple(w)


def word_degree(word: Word) -> int:
    return sum(m for _, m in word)


def expand_word(word: Word) -> tuple:
    """Undivided node sequence, e.g. ``i(2).j`` -> ``(i, i, j)``."""
    return tuple(n for n, m in word for _ in range(m))


def divided_scale(word: Word) -> LaurentPoly:
    """``prod [a_k]!``: the undivided monomial equals this times the word."""
    out = ONE
    for _, m in word:
        if m > 1:
            out = out * quantum_factorial(m)
    return out


def format_word(word: Word, datum: CartanDatum) -> str:
    if not word:
        return "1"
    parts = []
    for node, mult in word:
        name = str(datum.nodes[node])
        parts.append(name if mult == 1 else f"{name}({mult})")
    return ".".join(parts)


def parse_word(text: str, datum: CartanDatum) -> "FreeElement":
    """Parse ``i(2).i'(3).i(1)``; adjacent equal nodes merge with a binomial."""
    text = text.strip()
    if text in ("", "1"):
        return FreeElement.one(datum)
    letters = []
    for chunk in text.split("."):
        chunk = chunk.strip()
        if "(" in chunk:
            if not chunk.endswith(")"):
                raise ValueError(f"malformed letter {chunk!r}")
            name, mult = chunk[:-1].split("(", 1)
            mult = int(mult)
        else:
            name, mult = chunk, 1
        letters.append((datum.index(Node.parse(name)), mult))
    c, w = normalize_letters(letters)
    return FreeElement(datum, {w: c})


def words_of_weight(datum: CartanDatum, nu: Sequence[int], raw: bool = False) -> list:
    """All divided-power words of weight ``nu`` in lexicographic order.

    With ``raw`` adjacent letters may share a node (unmerged compositions);
    such sequences are returned as letter tuples that are not normal words.
    """
    nu = tuple(nu)
    out: list = []

    def rec(rem: list, prefix: list, last: int):
        if not any(rem):
            out.append(tuple(prefix))
            return
        for node in range(len(rem)):
            if rem[node] == 0 or (node == last and not raw):
                continue
            for mult in range(1, rem[node] + 1):
                rem[node] -= mult
                prefix.append((node, mult))
                rec(rem, prefix, node)
                prefix.pop()
                rem[node] += mult

    rec(list(nu), [], -1)
    out.sort(key=lambda w: (tuple(n for n, _ in w), tuple(m for _, m in w)))
    return out


def sequences_of_weight(nu: Sequence[int]) -> list:
    """All node sequences with content ``nu`` (distinct permutations), sorted."""
    base = [k for k, x in enumerate(nu) for _ in range(x)]
    return sorted(set(itertools.permutations(base))) if len(base) <= 8 else _multiset_perms(base)


def _multiset_perms(items: list) -> list:
    counts: dict = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    out: list = []
    n = len(items)
    prefix: list = []

    def rec():
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                rec()
                prefix.pop()
                counts[k] += 1

    rec()
    return out


# elements ----------------------------------------------------------------

class FreeElement:
    """A finite combination of words with exact coefficients over one datum."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: CartanDatum, terms: Mapping[Word, Coeff] | None = None):
        self.datum = datum
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                c = simplify(as_coeff(c))
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def _raw(cls, datum: CartanDatum, terms: dict) -> "FreeElement":
        obj = cls.__new__(cls)
        obj.datum = datum
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, datum: CartanDatum) -> "FreeElement":
        return cls._raw(datum, {})

    @classmethod
    def one(cls, datum: CartanDatum) -> "FreeElement":
        return cls._raw(datum, {(): ONE})

    @classmethod
    def letter(cls, datum: CartanDatum, node: "int | str | Node", mult: int = 1) -> "FreeElement":
        idx = node if isinstance(node, int) else datum.index(node)
        if mult == 0:
            return cls.one(datum)
        return cls._raw(datum, {((idx, mult),): ONE})

    @classmethod
    def from_word(cls, datum: CartanDatum, word: Word, coeff: "Coeff | int" = 1) -> "FreeElement":
        c, w = normalize_letters(word)
        return cls(datum, {w: c * as_coeff(coeff)})

    @classmethod
    def parse(cls, datum: CartanDatum, text: str) -> "FreeElement":
        return parse_word(text, datum)

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, word: Word) -> Coeff:
        return self.terms.get(tuple(word), ZERO)

    def weights(self) -> set:
        r = self.datum.rank
        return {word_weight(w, r) for w in self.terms}

    def weight(self) -> tuple:
        """The weight of a nonzero homogeneous element (``ValueError`` otherwise)."""
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("element is not homogeneous" if ws else "zero element has no weight")
        return next(iter(ws))

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        r = self.datum.rank
        for w, c in self.terms.items():
            parts.setdefault(word_weight(w, r), {})[w] = c
        return {k: FreeElement._raw(self.datum, v) for k, v in parts.items()}

    def _check(self, other: "FreeElement"):
        if other.datum is not self.datum and other.datum != self.datum:
            raise ValueError("elements live over different Cartan data")

    def __add__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else simplify(s + c)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return FreeElement._raw(self.datum, out)

    def __neg__(self):
        return FreeElement._raw(self.datum, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c: "Coeff | int") -> "FreeElement":
        c = as_coeff(c)
        if not c:
            return FreeElement.zero(self.datum)
        out = {}
        for w, x in self.terms.items():
            y = simplify(x * c)
            if y:
                out[w] = y
        return FreeElement._raw(self.datum, out)

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            return multiply(self, other)
        if isinstance(other, (int, LaurentPoly, RationalFunc)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly, RationalFunc)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        """Structural equality of word expansions; see ``equals_in_f`` for equality in f."""
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.datum == other.datum and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def bar(self) -> "FreeElement":
        return bar_f(self)

    def sigma(self) -> "FreeElement":
        return sigma(self)

    def is_integral(self) -> bool:
        return all(isinstance(c, LaurentPoly) for c in self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (word_weight(w, self.datum.rank), w)):
            c = self.terms[w]
            ws = format_word(w, self.datum)
            if c == ONE:
                parts.append(ws)
            elif c == -1:
                parts.append("-" + ws)
            else:
                parts.append(f"({c})*{ws}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FreeElement({self})"


# multiplication and involutions -------------------------------------------

def _concat(w1: Word, w2: Word) -> tuple:
    if w1 and w2 and w1[-1][0] == w2[0][0]:
        a, b = w1[-1][1], w2[0][1]
        return quantum_binomial(a + b, a), w1[:-1] + ((w1[-1][0], a + b),) + w2[1:]
    return ONE, w1 + w2


def multiply(x: FreeElement, y: FreeElement) -> FreeElement:
    """Bilinear extension of word concatenation (with divided-power merging)."""
    x._check(y)
    out: dict = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            b, w = _concat(w1, w2)
            c = c1 * c2 if b == ONE else c1 * c2 * b
            s = out.get(w)
            out[w] = c if s is None else s + c
    return FreeElement._raw(x.datum, {w: simplify(c) for w, c in out.items() if c})


def sigma(x: FreeElement) -> FreeElement:
    """The anti-automorphism fixing every ``theta_i``: reverse each word."""
    return FreeElement._raw(x.datum, {tuple(reversed(w)): c for w, c in x.terms.items()})


def bar_f(x: FreeElement) -> FreeElement:
    """Bar involution: words are fixed, coefficients go ``v -> 1/v``."""
    return FreeElement._raw(x.datum, {w: c.bar() for w, c in x.terms.items()})


# derivations ---------------------------------------------------------------

def _drop(word: Word, k: int) -> tuple:
    node, mult = word[k]
    if mult > 1:
        return ONE, word[:k] + ((node, mult - 1),) + word[k + 1:]
    left, right = word[:k], word[k + 1:]
    if left and right and left[-1][0] == right[0][0]:
        a, b = left[-1][1], right[0][1]
        return quantum_binomial(a + b, a), left[:-1] + ((left[-1][0], a + b),) + right[1:]
    return ONE, left + right


def _collect(pairs: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for c, w in pairs:
        s = acc.get(w)
        acc[w] = c if s is None else s + c
    return tuple((c, w) for w, c in acc.items() if c)


def _derivation_terms(datum: CartanDatum, word: Word, i: int, left: bool) -> tuple:
    """Terms ``(coefficient, word')`` of ``_ir(word)`` (left) or ``r_i(word)``."""
    table = _memo(datum, "ir" if left else "ri")
    key = (word, i)
    hit = table.get(key)
    if hit is not None:
        return hit
    row = datum.pairing[i]
    pairs = []
    acc = 0
    order = range(len(word)) if left else range(len(word) - 1, -1, -1)
    for k in order:
        node, mult = word[k]
        if node == i:
            b, w2 = _drop(word, k)
            c = LaurentPoly.monomial(acc + mult - 1)
            pairs.append((c if b == ONE else c * b, w2))
        acc += mult * row[node]
    res = _collect(pairs)
    table[key] = res
    return res


def _apply_terms(x: FreeElement, terms: Callable[[Word], tuple]) -> FreeElement:
    out: dict = {}
    for w, c in x.terms.items():
        for t, w2 in terms(w):
            s = out.get(w2)
            v = c * t
            out[w2] = v if s is None else s + v
    return FreeElement._raw(x.datum, {w: simplify(c) for w, c in out.items() if c})


def i_r(i: "int | str | Node", x: FreeElement) -> FreeElement:
    """``_ir``: ``_ir(xy) = _ir(x) y + v^{|x|.i} x _ir(y)``."""
    idx = i if isinstance(i, int) else x.datum.index(i)
    return _apply_terms(x, lambda w: _derivation_terms(x.datum, w, idx, True))


def r_i(i: "int | str | Node", x: FreeElement) -> FreeElement:
    """``r_i``: ``r_i(xy) = v^{|y|.i} r_i(x) y + x r_i(y)``."""
    idx = i if isinstance(i, int) else x.datum.index(i)
    return _apply_terms(x, lambda w: _derivation_terms(x.datum, w, idx, False))


# comultiplication ---------------------------------------------------------

def comult(x: FreeElement) -> dict:
    """``r(x)`` as a map ``(word1, word2) -> coefficient`` in the twisted square.

    The twisted product is ``(x1 (x) x2)(y1 (x) y2) = v^{|x2|.|y1|} x1 y1 (x) x2 y2``.
    """
    datum = x.datum
    out: dict = {}
    for w, c in x.terms.items():
        for (w1, w2), t in _comult_word(datum, w).items():
            key = (w1, w2)
            s = out.get(key)
            v = c * t
            out[key] = v if s is None else s + v
    return {k: simplify(c) for k, c in out.items() if c}


def _comult_word(datum: CartanDatum, word: Word) -> dict:
    table = _memo(datum, "comult")
    hit = table.get(word)
    if hit is not None:
        return hit
    rank = datum.rank
    cur: dict = {((), ()): ONE}
    for node, mult in word:
        nxt: dict = {}
        row = datum.pairing[node]
        for (w1, w2), c in cur.items():
            wt2 = word_weight(w2, rank)
            d = sum(row[k] * wt2[k] for k in range(rank) if wt2[k])
            for t in range(mult + 1):
                # r(theta^(a)) = sum_t v^{t(a-t)} theta^(t) (x) theta^(a-t)
                b1, n1 = _concat(w1, ((node, t),) if t else ())
                b2, n2 = _concat(w2, ((node, mult - t),) if mult - t else ())
                coef = c * LaurentPoly.monomial(t * (mult - t) + d * t) * b1 * b2
                s = nxt.get((n1, n2))
                nxt[(n1, n2)] = coef if s is None else s + coef
        cur = {k: v for k, v in nxt.items() if v}
    table[word] = cur
    return cur


# path coordinates -----------------------------------------------------------

def _path_word(datum: CartanDatum, word: Word, seq: tuple) -> LaurentPoly:
    """``_{s_n}r(... _{s_1}r(word))`` for a node sequence of matching content."""
    table = _memo(datum, "path")
    key = (word, seq)
    hit = table.get(key)
    if hit is not None:
        return hit
    if not seq:
        val = ONE if not word else ZERO
    else:
        val = ZERO
        head, tail = seq[0], seq[1:]
        for c, w2 in _derivation_terms(datum, word, head, True):
            sub = _path_word(datum, w2, tail)
            if sub:
                val = val + c * sub
    table[key] = val
    return val


def path_coordinate(x: FreeElement, seq: Sequence[int]) -> Coeff:
    """The scalar ``_{s_n}r(... _{s_1}r(x))`` (zero when weights differ)."""
    seq = tuple(seq)
    total: Coeff = ZERO
    target = None
    for w, c in x.terms.items():
        if target is None:
            target = tuple(sorted(seq))
        if tuple(sorted(expand_word(w))) != target:
            continue
        p = _path_word(x.datum, w, seq)
        if p:
            total = total + c * p
    return simplify(total)


def character(x: FreeElement) -> dict:
    """All nonzero path coordinates of ``x``: a complete invariant of ``x`` in f."""
    out: dict = {}
    datum = x.datum

    def dfs(prefix: tuple, elem: dict, remaining: list):
        if not any(remaining):
            c = elem.get((), ZERO)
            if c:
                out[prefix] = simplify(c)
            return
        for i in range(len(remaining)):
            if not remaining[i]:
                continue
            nxt: dict = {}
            for w, c in elem.items():
                for t, w2 in _derivation_terms(datum, w, i, True):
                    s = nxt.get(w2)
                    v = c * t
                    nxt[w2] = v if s is None else s + v
            nxt = {w: c for w, c in nxt.items() if c}
            if nxt:
                remaining[i] -= 1
                dfs(prefix + (i,), nxt, remaining)
                remaining[i] += 1

    for nu, part in x.homogeneous_parts().items():
        dfs((), dict(part.terms), list(nu))
    return out


def equals_in_f(x: FreeElement, y: FreeElement) -> bool:
    """Equality in f (the Serre quotient): all path coordinates of ``x - y`` vanish."""
    return not character(x - y)


# bilinear form -------------------------------------------------------------

_ONE_MINUS_VM2 = ONE - LaurentPoly.monomial(-2)


def self_pairing_divided(mult: int) -> RationalFunc:
    """``(theta^(a), theta^(a)) = prod_{s=1}^{a} 1/(1 - v^{-2s})``."""
    den = ONE
    for s in range(1, mult + 1):
        den = den * (ONE - LaurentPoly.monomial(-2 * s))
    return RationalFunc.from_laurent(ONE, den)


def _word_form_factor(word: Word) -> LaurentPoly:
    """Denominator linking ``(word, y)`` to the path coordinate along ``expand(word)``."""
    return divided_scale(word) * _ONE_MINUS_VM2 ** word_degree(word)


def bilinear_form(x: FreeElement, y: FreeElement) -> RationalFunc:
    """The symmetric form with ``(theta_i, theta_j) = delta / (1 - v^-2)``.

    Peel-off: ``(theta_i w, y) = (theta_i, theta_i) (w, _ir y)``, so a word pairs
    with ``y`` through the iterated ``_ir`` along its undivided node sequence.
    """
    x._check(y)
    total = RationalFunc.from_laurent(0)
    groups: dict = {}
    for w, c in x.terms.items():
        p = path_coordinate(y, expand_word(w))
        if not p:
            continue
        f = _word_form_factor(w)
        groups.setdefault(f, []).append(c * p)
    for f, vals in groups.items():
        s = vals[0]
        for t in vals[1:]:
            s = s + t
        total = total + RationalFunc.coerce(s) / RationalFunc.coerce(f)
    return total


# Gram tables ---------------------------------------------------------------

@dataclass(frozen=True)
class GramTable:
    weight: tuple
    labels: tuple          # letter tuples (possibly unmerged)
    elements: tuple        # the corresponding FreeElements
    matrix: tuple          # RationalFunc entries
    rank: int
    kernel: tuple          # relations: dicts label-index -> Coeff


def gram(datum: CartanDatum, nu: Sequence[int], raw: bool = True) -> GramTable:
    """Pairing matrix of all monomials of weight ``nu`` with its rank and kernel.

    With ``raw`` (the default) unmerged compositions such as ``theta_i theta_i``
    are listed alongside ``theta_i^(2)``.
    """
    nu = tuple(nu)
    table = _memo(datum, "gram")
    key = (nu, raw)
    hit = table.get(key)
    if hit is not None:
        return hit
    labels = words_of_weight(datum, nu, raw=raw)
    elems = [FreeElement.from_word(datum, lab) for lab in labels]
    n = len(elems)
    mat = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            val = bilinear_form(elems[a], elems[b])
            mat[a][b] = mat[b][a] = val
    rows = [{b: mat[a][b] for b in range(n) if mat[a][b]} for a in range(n)]
    rk = linalg.rank(rows) if n else 0
    # relations among the monomials themselves, via their path coordinates
    seqs = sequences_of_weight(nu)
    chvecs = [{s: path_coordinate(e, s) for s in seqs} for e in elems]
    chvecs = [{s: c for s, c in v.items() if c} for v in chvecs]
    kern = tuple(linalg.kernel_relations(chvecs)) if n else ()
    out = GramTable(nu, tuple(labels), tuple(elems), tuple(tuple(r) for r in mat), rk, kern)
    table[key] = out
    return out


# Serre elements ------------------------------------------------------------

def serre_element(datum: CartanDatum, i: "int | str", j: "int | str") -> FreeElement:
    """``sum_n (-1)^n theta_i^(n) theta_j theta_i^(1 - i.j - n)``."""
    a = i if isinstance(i, int) else datum.index(i)
    b = j if isinstance(j, int) else datum.index(j)
    if a == b:
        raise ValueError("Serre element needs two distinct nodes")
    top = 1 - datum.dot(a, b)
    out = FreeElement.zero(datum)
    for n in range(top + 1):
        term = FreeElement.from_word(datum, ((a, n), (b, 1), (a, top - n)))
        out = out + term.scale(-1 if n % 2 else 1)
    return out
