"""Canonical bases of f in types A1 and A2, coordinates, and string statistics.

In both types every canonical basis element is a divided-power monomial. For
A2 with nodes ``(a, b)`` (``i, j`` for the built-in datum, ``i, i'`` for the
framed A1 datum) the elements are

* ``Left(p, q, r)  = theta_a^(p) theta_b^(q) theta_a^(r)`` with ``q >= p + r``;
* ``Right(p, q, r) = theta_b^(r) theta_a^(q) theta_b^(p)`` with ``q >= p + r``;

and the two families overlap exactly when ``q = p + r``.

Coordinates of an element of ``f_nu`` are found by evaluating the path
functionals along the expanded words of the basis elements themselves: the
resulting square matrix is (up to diagonal factors) the Gram matrix of the
basis, hence invertible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cartan import CartanDatum, Node, Weight, cartan_type
from .coeff import (
    ONE,
    ZERO,
    Coeff,
    Lattice,
    LaurentPoly,
    lattice_test,
    positivity_test,
    simplify,
)
from . import falg, linalg
from .falg import FreeElement, Word

__all__ = [
    "UnsupportedTypeError",
    "CBIndex",
    "A1",
    "A2Left",
    "A2Right",
    "CanonicalExpansion",
    "basis_type",
    "cb_list",
    "cb_word_form",
    "cb_element",
    "expand_cb",
    "coordinates",
    "t_stats",
    "t_left",
    "t_right",
    "b_lambda_subset",
    "b_lambda_by_weight",
    "all_indices_up_to",
    "parse_index_list",
    "sigma_index",
    "weights_of_degree",
]


class UnsupportedTypeError(ValueError):
    """Raised when a canonical basis is requested outside types A1 and A2."""


# indices ---------------------------------------------------------------------

_FAMILIES = ("A1", "A2L", "A2R")
_INDEX_RE = re.compile(r"^\s*(A1|A2L|A2R)\[([0-9,\s]*)\]\s*$")


@dataclass(frozen=True, order=True)
class CBIndex:
    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown canonical-basis family {self.family!r}")
        want = 1 if self.family == "A1" else 3
        if len(self.params) != want or any(x < 0 for x in self.params):
            raise ValueError(f"bad parameters {self.params} for {self.family}")
        if self.family != "A1":
            p, q, r = self.params
            if q < p + r:
                raise ValueError(f"{self.family}{list(self.params)} violates q >= p + r")
            if self.family == "A2R" and q == p + r:
                raise ValueError("on q = p + r use the Left representative")

    def __str__(self) -> str:
        return f"{self.family}[{','.join(str(x) for x in self.params)}]"

    @classmethod
    def parse(cls, text: str) -> "CBIndex":
        m = _INDEX_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse canonical-basis index {text!r}")
        params = tuple(int(x) for x in m.group(2).split(",") if x.strip())
        if m.group(1) == "A2R":
            return A2Right(*params)
        return cls(m.group(1), params)

    @property
    def type(self) -> str:
        return "A1" if self.family == "A1" else "A2"

    def word(self) -> Word:
        """The defining monomial as a word over node indices 0 and 1."""
        if self.family == "A1":
            k = self.params[0]
            return ((0, k),) if k else ()
        p, q, r = self.params
        if self.family == "A2L":
            letters = [(0, p), (1, q), (0, r)]
        else:
            letters = [(1, r), (0, q), (1, p)]
        coeff, word = falg.normalize_letters(letters)
        assert coeff == ONE
        return word

    def weight(self) -> tuple:
        if self.family == "A1":
            return (self.params[0],)
        p, q, r = self.params
        return (p + r, q) if self.family == "A2L" else (q, p + r)

    def degree(self) -> int:
        return sum(self.weight())


def A1(k: int) -> CBIndex:
    return CBIndex("A1", (k,))


def A2Left(p: int, q: int, r: int) -> CBIndex:
    return CBIndex("A2L", (p, q, r))


def A2Right(p: int, q: int, r: int) -> CBIndex:
    """``theta_b^(r) theta_a^(q) theta_b^(p)``; returns the Left index when ``q = p + r``."""
    if q == p + r:
        return CBIndex("A2L", (p, q, r))
    return CBIndex("A2R", (p, q, r))


def sigma_index(b: CBIndex) -> CBIndex:
    """Index of ``sigma(b)`` (word reversal maps the basis to itself)."""
    if b.family == "A1":
        return b
    p, q, r = b.params
    return CBIndex(b.family, (r, q, p))


# types ----------------------------------------------------------------------

def basis_type(datum: CartanDatum) -> str:
    """``"A1"`` or ``"A2"`` when the datum has a known canonical basis."""
    if datum.rank == 1:
        return "A1"
    if datum.rank == 2 and datum.pairing[0][1] == -1:
        return "A2"
    raise UnsupportedTypeError(
        "canonical bases are only available in types A1 and A2; "
        f"got a rank-{datum.rank} datum with pairing {datum.pairing}"
    )


def _resolve(type_or_datum: "str | CartanDatum") -> CartanDatum:
    if isinstance(type_or_datum, CartanDatum):
        basis_type(type_or_datum)
        return type_or_datum
    name = str(type_or_datum).upper()
    if name not in ("A1", "A2"):
        raise UnsupportedTypeError(f"canonical bases are only available in types A1 and A2; got {type_or_datum!r}")
    return cartan_type(name)


def _check_type(datum: CartanDatum, type_token: "str | None"):
    kind = basis_type(datum)
    if type_token is not None and str(type_token).upper() != kind:
        raise UnsupportedTypeError(f"element lives in type {kind}, not {type_token}")
    return kind


# enumeration ----------------------------------------------------------------

def _indices(kind: str, nu: tuple) -> list:
    if kind == "A1":
        if len(nu) != 1:
            raise ValueError("A1 weights have one component")
        return [A1(nu[0])]
    if len(nu) != 2:
        raise ValueError("A2 weights have two components")
    a, b = nu
    out = []
    if b >= a:
        for p in range(a + 1):
            out.append(A2Left(p, b, a - p))
    else:
        for p in range(b + 1):
            out.append(A2Right(p, a, b - p))
    return out


def cb_list(type_or_datum: "str | CartanDatum", nu: Sequence[int]) -> list:
    """All canonical-basis indices of weight ``nu`` (overlaps listed once)."""
    datum = _resolve(type_or_datum)
    nu = tuple(int(x) for x in nu)
    if any(x < 0 for x in nu):
        return []
    return _indices(basis_type(datum), nu)


def cb_word_form(b: CBIndex, datum: "CartanDatum | None" = None) -> FreeElement:
    """The defining divided-power monomial of ``b``."""
    if datum is None:
        datum = cartan_type(b.type)
    elif basis_type(datum) != b.type:
        raise UnsupportedTypeError(f"index {b} does not belong to type {basis_type(datum)}")
    return FreeElement.from_word(datum, b.word())


cb_element = cb_word_form


def weights_of_degree(rank: int, degree: int) -> list:
    """All ``nu`` in N^rank with ``tr nu = degree``, lexicographically."""
    out = []
    for parts in itertools.product(range(degree + 1), repeat=rank):
        if sum(parts) == degree:
            out.append(tuple(parts))
    return out


# coordinates ----------------------------------------------------------------

@dataclass(frozen=True)
class _WeightSystem:
    indices: tuple
    sequences: tuple
    system: "linalg.SquareSystem | None"


def _system(datum: CartanDatum, nu: tuple) -> _WeightSystem:
    table = datum.memo.setdefault("cb_system", {})
    hit = table.get(nu)
    if hit is not None:
        return hit
    idx = tuple(_indices(basis_type(datum), nu))
    seqs = tuple(falg.expand_word(b.word()) for b in idx)
    mat = [[falg._path_word(datum, b.word(), s) for b in idx] for s in seqs]
    sysm = linalg.SquareSystem(mat) if idx else None
    out = _WeightSystem(idx, seqs, sysm)
    table[nu] = out
    return out


@dataclass(frozen=True)
class CanonicalExpansion:
    """Coordinates of an element of ``f`` in the canonical basis."""

    coords: dict = field(default_factory=dict)

    def __getitem__(self, b: CBIndex) -> Coeff:
        return self.coords.get(b, ZERO)

    def items(self):
        return sorted(self.coords.items(), key=lambda kv: (kv[0].weight(), kv[0]))

    def support(self) -> list:
        return [b for b, _ in self.items()]

    def is_integral(self) -> bool:
        return all(isinstance(simplify(c), LaurentPoly) for c in self.coords.values())

    def is_positive(self) -> bool:
        return all(isinstance(c, LaurentPoly) and positivity_test(c) for c in self.coords.values())

    def in_lattice(self) -> bool:
        """Membership in the ``Z[v^-1]``-span of the basis."""
        return all(lattice_test(c, Lattice.ZV_INV) for c in self.coords.values())

    def congruent(self, other: "CanonicalExpansion") -> bool:
        """Congruence modulo ``v^-1`` times the lattice (both sides in the lattice)."""
        keys = set(self.coords) | set(other.coords)
        return all(lattice_test(simplify(self[k] - other[k]), Lattice.VINV_ZV_INV) for k in keys)

    def leading(self) -> "CanonicalExpansion":
        """The ``v^0`` part of a lattice element (its image in lattice / v^-1 lattice)."""
        out = {}
        for b, c in self.coords.items():
            c0 = c.coefficient(0) if isinstance(c, LaurentPoly) else None
            if c0 is None:
                raise ValueError("leading part requested for a non-Laurent coordinate")
            if c0:
                out[b] = LaurentPoly.from_int(c0)
        return CanonicalExpansion(out)

    def __add__(self, other: "CanonicalExpansion") -> "CanonicalExpansion":
        return CanonicalExpansion(linalg.vec_add(self.coords, other.coords))

    def __sub__(self, other: "CanonicalExpansion") -> "CanonicalExpansion":
        return CanonicalExpansion(linalg.vec_sub(self.coords, other.coords))

    def scale(self, c) -> "CanonicalExpansion":
        return CanonicalExpansion(linalg.vec_scale(self.coords, c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalExpansion):
            return NotImplemented
        return linalg.vec_is_zero(linalg.vec_sub(self.coords, other.coords))

    def __hash__(self):
        return hash(frozenset((b, c) for b, c in self.coords.items() if c))

    def to_element(self, datum: CartanDatum) -> FreeElement:
        out = FreeElement.zero(datum)
        for b, c in self.coords.items():
            out = out + cb_word_form(b, datum).scale(c)
        return out

    def to_json(self) -> dict:
        return {str(b): c.to_json() for b, c in self.items()}

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(f"({c})*{b}" for b, c in self.items())


def coordinates(x: FreeElement, verify: bool = False) -> CanonicalExpansion:
    """Canonical-basis coordinates of ``x`` (any weights) in its own datum.

    With ``verify`` the residual ``x - sum c_b b`` is checked to vanish in f.
    """
    datum = x.datum
    basis_type(datum)
    coords: dict = {}
    for nu, part in x.homogeneous_parts().items():
        ws = _system(datum, nu)
        rhs = [falg.path_coordinate(part, s) for s in ws.sequences]
        sol = ws.system.solve(rhs)
        for b, c in zip(ws.indices, sol):
            if c:
                coords[b] = c
    out = CanonicalExpansion(coords)
    if verify:
        residual = x - out.to_element(datum)
        if not falg.equals_in_f(residual, FreeElement.zero(datum)):
            raise linalg.SolveFailure("canonical-basis expansion left a nonzero residual")
    return out


def expand_cb(x: FreeElement, type_token: "str | None" = None, verify: bool = True) -> CanonicalExpansion:
    """Unique coordinates of ``x`` in the canonical basis, checked by default."""
    _check_type(x.datum, type_token)
    return coordinates(x, verify=verify)


# string statistics ----------------------------------------------------------

def _node_index(datum: CartanDatum, i: "int | str | Node") -> int:
    return i if isinstance(i, int) else datum.index(i)


def _divisible(datum: CartanDatum, b: CBIndex, i: int, n: int, left: bool) -> bool:
    """Whether ``b`` lies in ``theta_i^n f`` (left) or ``f theta_i^n`` (right)."""
    nu = b.weight()
    rest = list(nu)
    rest[i] -= n
    if rest[i] < 0:
        return False
    power = FreeElement.from_word(datum, ((i, n),))
    vectors = []
    for b2 in _indices(basis_type(datum), tuple(rest)):
        e = cb_word_form(b2, datum)
        prod = power * e if left else e * power
        vectors.append(coordinates(prod).coords)
    target = {b: ONE}
    return linalg.solve_in_span(vectors, target) is not None


def _t_stat(datum: CartanDatum, b: CBIndex, i: int, left: bool) -> int:
    table = datum.memo.setdefault("t_stat", {})
    key = (b, i, left)
    hit = table.get(key)
    if hit is not None:
        return hit
    t = 0
    for n in range(1, b.weight()[i] + 1):
        if _divisible(datum, b, i, n, left):
            t = n
        else:
            break
    table[key] = t
    return t


def t_left(b: CBIndex, i: "int | str | Node", datum: "CartanDatum | None" = None) -> int:
    """``t_i(b)``: the largest ``n`` with ``b`` in ``theta_i^n f``."""
    datum = datum or cartan_type(b.type)
    return _t_stat(datum, b, _node_index(datum, i), True)


def t_right(b: CBIndex, i: "int | str | Node", datum: "CartanDatum | None" = None) -> int:
    """``t_i^sigma(b)``: the largest ``n`` with ``b`` in ``f theta_i^n``."""
    datum = datum or cartan_type(b.type)
    return _t_stat(datum, b, _node_index(datum, i), False)


def t_stats(b: CBIndex, i: "int | str | Node", datum: "CartanDatum | None" = None) -> tuple:
    """``(t_i(b), t_i^sigma(b))`` by rank tests in canonical coordinates."""
    return t_left(b, i, datum), t_right(b, i, datum)


def b_lambda_subset(lam: Weight, type_token: "str | None" = None) -> list:
    """``B(lambda)``: indices with ``t_i^sigma(b) <= <i, lambda>`` for every node."""
    datum = lam.datum
    _check_type(datum, type_token)
    if not lam.is_dominant():
        raise ValueError(f"weight {lam} is not dominant")
    out = []
    degree = 0
    while True:
        level = []
        for nu in weights_of_degree(datum.rank, degree):
            for b in _indices(basis_type(datum), nu):
                if all(t_right(b, i, datum) <= lam.pairings[i] for i in range(datum.rank)):
                    level.append(b)
        if not level:
            # the module is generated by the F's, so an empty degree ends it
            return out
        out.extend(level)
        degree += 1


def b_lambda_by_weight(lam: Weight) -> dict:
    """``B(lambda)`` grouped by weight ``nu`` (so ``lambda - nu`` is the module weight)."""
    table = lam.datum.memo.setdefault("b_lambda", {})
    hit = table.get(lam.pairings)
    if hit is not None:
        return hit
    groups: dict = {}
    for b in b_lambda_subset(lam):
        groups.setdefault(b.weight(), []).append(b)
    out = {nu: tuple(bs) for nu, bs in groups.items()}
    table[lam.pairings] = out
    return out


def parse_index_list(text: str) -> list:
    return [CBIndex.parse(t) for t in re.findall(r"A1\[[^\]]*\]|A2[LR]\[[^\]]*\]", text)]


def all_indices_up_to(type_or_datum: "str | CartanDatum", max_degree: int) -> Iterable:
    datum = _resolve(type_or_datum)
    for d in range(max_degree + 1):
        for nu in weights_of_degree(datum.rank, d):
            yield from _indices(basis_type(datum), nu)
