"""Verma modules and their integrable quotients, acting on carriers in f.

An element ``x^- eta`` of ``M_lambda`` is stored through its carrier ``x``.
``F_i`` multiplies on the left. ``E_i`` is computed letter by letter from the
commutation of ``E_i`` past a divided power: moving ``E_i`` across
``F_i^(a)`` acting on a vector of weight ``mu`` leaves
``[<i, mu> - a + 1] F_i^(a-1)``.

Zero in ``Lambda_lambda`` is decided with the *E-path* scalars
``d_s(x)``: apply ``E_{s1}``, then ``E_{s2}``, ..., and read off the multiple of
``eta``. The quotient is simple, so a vector is zero exactly when all of these
scalars vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cartan import CartanDatum, Node, Weight
from .coeff import (
    ONE,
    ZERO,
    Coeff,
    LaurentPoly,
    RationalFunc,
    quantum_factorial,
    quantum_integer,
    simplify,
)
from . import canonical, falg, linalg
from .canonical import CanonicalExpansion, CBIndex
from .falg import FreeElement, Word

__all__ = [
    "HighestWeightModule",
    "HWElement",
    "act_F",
    "act_E",
    "act_E_divided",
    "act_E_via_derivations",
    "act_K",
    "equals_in_Lambda",
    "admissible_form",
    "cb_of_Lambda",
    "in_defining_ideal",
]


def _node(datum: CartanDatum, i: "int | str | Node") -> int:
    return i if isinstance(i, int) else datum.index(i)


class HighestWeightModule:
    """``Lambda_lambda`` (and the Verma module above it) for a datum and weight."""

    def __init__(self, datum: CartanDatum, lam: "Weight | Sequence[int]"):
        if not isinstance(lam, Weight):
            lam = datum.weight(lam)
        if lam.datum != datum:
            raise ValueError("weight belongs to a different datum")
        if not lam.is_dominant():
            raise ValueError(f"weight {lam} is not dominant")
        self.datum = datum
        self.lam = lam
        self._key = lam.pairings

    def __eq__(self, other) -> bool:
        return isinstance(other, HighestWeightModule) and self.datum == other.datum and self.lam == other.lam

    def __hash__(self):
        return hash((self.datum, self.lam.pairings))

    def __repr__(self) -> str:
        return f"HighestWeightModule(lambda={self.lam})"

    # elements ---------------------------------------------------------------

    def element(self, x: "FreeElement | str") -> "HWElement":
        if isinstance(x, str):
            x = FreeElement.parse(self.datum, x)
        if x.datum != self.datum:
            raise ValueError("carrier lives on a different datum")
        return HWElement(self, x)

    def eta(self) -> "HWElement":
        return HWElement(self, FreeElement.one(self.datum))

    def zero(self) -> "HWElement":
        return HWElement(self, FreeElement.zero(self.datum))

    def weight_of(self, nu: Sequence[int]) -> tuple:
        """Pairings of ``lambda - nu``."""
        return tuple(self.lam.pair_minus(a, nu) for a in range(self.datum.rank))

    # the E action on words ---------------------------------------------------

    def _e_terms(self, word: Word, i: int) -> tuple:
        table = self.datum.memo.setdefault("hw_e", {})
        key = (self._key, word, i)
        hit = table.get(key)
        if hit is not None:
            return hit
        row = self.datum.pairing[i]
        pairs = []
        pair_i = self.lam.pairings[i]  # <i, weight right of position k>
        for k in range(len(word) - 1, -1, -1):
            node, mult = word[k]
            if node == i:
                c = quantum_integer(pair_i - mult + 1)
                if c:
                    b, w2 = falg._drop(word, k)
                    pairs.append((c if b == ONE else c * b, w2))
            pair_i -= mult * row[node]
        res = falg._collect(pairs)
        table[key] = res
        return res

    def _apply_e(self, i: int, x: FreeElement) -> FreeElement:
        return falg._apply_terms(x, lambda w: self._e_terms(w, i))

    def path_scalar_word(self, word: Word, seq: tuple) -> LaurentPoly:
        """``d_seq(word)``: the multiple of ``eta`` in ``E_{sn} ... E_{s1} word^- eta``."""
        table = self.datum.memo.setdefault("hw_path", {})
        key = (self._key, word, seq)
        hit = table.get(key)
        if hit is not None:
            return hit
        if not seq:
            val = ONE if not word else ZERO
        else:
            val = ZERO
            for c, w2 in self._e_terms(word, seq[0]):
                sub = self.path_scalar_word(w2, seq[1:])
                if sub:
                    val = val + c * sub
        table[key] = val
        return val

    def path_scalar(self, x: FreeElement, seq: Sequence[int]) -> Coeff:
        seq = tuple(seq)
        target = tuple(sorted(seq))
        total: Coeff = ZERO
        for w, c in x.terms.items():
            if tuple(sorted(falg.expand_word(w))) != target:
                continue
            p = self.path_scalar_word(w, seq)
            if p:
                total = total + c * p
        return simplify(total)

    def path_vector(self, x: FreeElement) -> dict:
        """All nonzero ``d_s(x)``; empty exactly when ``x^- eta = 0`` in the quotient."""
        out: dict = {}

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
                    for t, w2 in self._e_terms(w, i):
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

    # canonical basis (types A1, A2) ---------------------------------------------

    def has_canonical_basis(self) -> bool:
        try:
            canonical.basis_type(self.datum)
            return True
        except canonical.UnsupportedTypeError:
            return False

    def basis_indices(self, nu: "Sequence[int] | None" = None):
        """``B(lambda)`` as a flat list, or its part of weight ``nu``."""
        groups = canonical.b_lambda_by_weight(self.lam)
        if nu is None:
            return [b for key in sorted(groups, key=lambda k: (sum(k), k)) for b in groups[key]]
        return list(groups.get(tuple(nu), ()))

    def _system(self, nu: tuple):
        table = self.datum.memo.setdefault("hw_system", {})
        key = (self._key, nu)
        hit = table.get(key)
        if hit is not None:
            return hit
        idx = tuple(self.basis_indices(nu))
        seqs = tuple(falg.expand_word(b.word()) for b in idx)
        mat = [[self.path_scalar_word(b.word(), s) for b in idx] for s in seqs]
        res = (idx, seqs, linalg.SquareSystem(mat) if idx else None)
        table[key] = res
        return res

    def coordinates(self, m: "HWElement | FreeElement") -> CanonicalExpansion:
        """Coordinates of ``m`` in ``B(Lambda_lambda)``."""
        x = m.carrier if isinstance(m, HWElement) else m
        coords: dict = {}
        for nu, part in x.homogeneous_parts().items():
            idx, seqs, sysm = self._system(nu)
            if not idx:
                continue
            rhs = [self.path_scalar(part, s) for s in seqs]
            for b, c in zip(idx, sysm.solve(rhs)):
                if c:
                    coords[b] = c
        return CanonicalExpansion(coords)

    def basis_element(self, b: CBIndex) -> "HWElement":
        return HWElement(self, canonical.cb_word_form(b, self.datum))

    def from_coordinates(self, coords: "CanonicalExpansion | dict") -> "HWElement":
        items = coords.coords.items() if isinstance(coords, CanonicalExpansion) else coords.items()
        out = FreeElement.zero(self.datum)
        for b, c in items:
            out = out + canonical.cb_word_form(b, self.datum).scale(c)
        return HWElement(self, out)

    # dimensions -------------------------------------------------------------

    def dimension(self, nu: Sequence[int]) -> int:
        """``dim Lambda_{lambda - nu}`` as the rank of the E-path vectors of all words."""
        nu = tuple(nu)
        table = self.datum.memo.setdefault("hw_dim", {})
        key = (self._key, nu)
        hit = table.get(key)
        if hit is not None:
            return hit
        words = falg.words_of_weight(self.datum, nu)
        vecs = [self.path_vector(FreeElement.from_word(self.datum, w)) for w in words]
        d = linalg.rank(vecs) if vecs else 0
        table[key] = d
        return d

    def weights(self, max_degree: int = 64) -> list:
        """``[(nu, dim)]`` for every nonzero weight space ``lambda - nu``."""
        out = []
        for degree in range(max_degree + 1):
            level = []
            for nu in canonical.weights_of_degree(self.datum.rank, degree):
                if self.has_canonical_basis():
                    d = len(self.basis_indices(nu))
                else:
                    d = self.dimension(nu)
                if d:
                    level.append((nu, d))
            if not level:
                break
            out.extend(level)
        return out


@dataclass(frozen=True)
class HWElement:
    """``carrier^- eta_lambda`` in ``Lambda_lambda``."""

    module: HighestWeightModule
    carrier: FreeElement

    def _same(self, other: "HWElement"):
        if not isinstance(other, HWElement) or other.module != self.module:
            raise ValueError("elements of different modules")

    def __add__(self, other: "HWElement") -> "HWElement":
        self._same(other)
        return HWElement(self.module, self.carrier + other.carrier)

    def __sub__(self, other: "HWElement") -> "HWElement":
        self._same(other)
        return HWElement(self.module, self.carrier - other.carrier)

    def __neg__(self) -> "HWElement":
        return HWElement(self.module, -self.carrier)

    def scale(self, c) -> "HWElement":
        return HWElement(self.module, self.carrier.scale(c))

    def bar(self) -> "HWElement":
        return HWElement(self.module, self.carrier.bar())

    def depths(self) -> set:
        return self.carrier.weights()

    def weight(self) -> tuple:
        """Pairings ``<i, lambda - |x|>`` (element must be homogeneous)."""
        return self.module.weight_of(self.carrier.weight())

    def is_zero(self) -> bool:
        return not self.module.path_vector(self.carrier)

    def coordinates(self) -> CanonicalExpansion:
        return self.module.coordinates(self)

    def __str__(self) -> str:
        return f"{self.carrier} - eta[{self.module.lam.label()}]"


# module-level operations ------------------------------------------------------

def act_F(i: "int | str | Node", a: int, m: HWElement) -> HWElement:
    """``F_i^(a) m``: left multiplication of the carrier by ``theta_i^(a)``."""
    if a < 0:
        raise ValueError("divided power exponent must be >= 0")
    if a == 0:
        return m
    datum = m.module.datum
    return HWElement(m.module, FreeElement.from_word(datum, ((_node(datum, i), a),)) * m.carrier)


def act_E(i: "int | str | Node", m: HWElement) -> HWElement:
    return HWElement(m.module, m.module._apply_e(_node(m.module.datum, i), m.carrier))


def act_E_divided(i: "int | str | Node", a: int, m: HWElement) -> HWElement:
    """``E_i^(a) = E_i^a / [a]!``."""
    out = m
    for _ in range(a):
        out = act_E(i, out)
    if a > 1:
        inv = RationalFunc.from_laurent(ONE, quantum_factorial(a))
        out = HWElement(m.module, out.carrier.scale(inv))
    return out


def act_E_via_derivations(i: "int | str | Node", m: HWElement) -> HWElement:
    """The same action from the twisted derivations ``_ir`` and ``r_i``.

    ``E_i x = (v^{<i, lambda - |x|> + 2} _ir(x) - v^{-<i, lambda>} r_i(x)) / (v - v^-1)``,
    applied weight by weight. Used as an independent cross-check.
    """
    module = m.module
    idx = _node(module.datum, i)
    out = FreeElement.zero(module.datum)
    den = RationalFunc.from_laurent(LaurentPoly({1: 1, -1: -1}))
    for nu, part in m.carrier.homogeneous_parts().items():
        left = falg.i_r(idx, part).scale(LaurentPoly.monomial(module.lam.pair_minus(idx, nu) + 2))
        right = falg.r_i(idx, part).scale(LaurentPoly.monomial(-module.lam.pairings[idx]))
        out = out + (left - right).scale(RationalFunc.from_laurent(ONE) / den)
    return HWElement(module, out)


def act_K(mu: Sequence[int], m: HWElement) -> HWElement:
    """``K_mu`` multiplies the weight-``lambda - nu`` part by ``v^{<mu, lambda - nu>}``."""
    module = m.module
    mu = tuple(mu)
    out = FreeElement.zero(module.datum)
    for nu, part in m.carrier.homogeneous_parts().items():
        out = out + part.scale(LaurentPoly.monomial(module.lam.pair_root(mu, nu)))
    return HWElement(module, out)


def equals_in_Lambda(m: HWElement, m2: HWElement) -> bool:
    """Equality in the integrable quotient."""
    m._same(m2)
    return (m - m2).is_zero()


def in_defining_ideal(module: HighestWeightModule, x: FreeElement) -> bool:
    """Whether ``x`` lies in ``sum_i f theta_i^(<i,lambda>+1)``, by a span test in f.

    This is the direct definition of the quotient and serves as an oracle for
    :func:`equals_in_Lambda`.
    """
    datum = module.datum
    for nu, part in x.homogeneous_parts().items():
        spanning = []
        for i in range(datum.rank):
            n = module.lam.pairings[i] + 1
            rest = list(nu)
            rest[i] -= n
            if rest[i] < 0:
                continue
            tail = FreeElement.from_word(datum, ((i, n),))
            for w in falg.words_of_weight(datum, rest):
                spanning.append(falg.character(FreeElement.from_word(datum, w) * tail))
        target = falg.character(part)
        if not target:
            continue
        if not spanning or linalg.solve_in_span(spanning, target) is None:
            return False
    return True


def admissible_form(m: HWElement, m2: HWElement) -> Coeff:
    """The admissible form with ``(eta, eta) = 1``.

    Each divided-power letter of the left carrier is moved across with
    ``rho(F_i^(a)) = v^{a^2} K_{-ai} E_i^(a)``.
    """
    m._same(m2)
    module = m.module
    datum = module.datum
    parts2 = m2.carrier.homogeneous_parts()
    total: Coeff = ZERO
    for nu, part in m.carrier.homogeneous_parts().items():
        y = parts2.get(nu)
        if y is None:
            continue
        for w, c in part.terms.items():
            d = module.path_scalar(y, falg.expand_word(w))
            if not d:
                continue
            # weight after E_{j_k}^{(a_k)}: lambda - nu + sum_{l <= k} a_l j_l
            rem = list(nu)
            shift = 0
            for node, mult in w:
                rem[node] -= mult
                shift += mult * mult - mult * module.lam.pair_minus(node, rem)
            fac = falg.divided_scale(w)
            val = c * d * LaurentPoly.monomial(shift)
            total = total + (val / fac if fac != ONE else val)
    return simplify(total)


def cb_of_Lambda(lam: Weight, type_token: "str | None" = None) -> list:
    """``B(Lambda_lambda)`` as module elements, in degree order."""
    canonical._check_type(lam.datum, type_token)
    module = HighestWeightModule(lam.datum, lam)
    out = [module.basis_element(b) for b in module.basis_indices()]
    # distinct weight spaces are trivially distinct; within one weight the
    # coordinate system is nonsingular, which separates the elements
    for nu in {b.weight() for b in module.basis_indices()}:
        module._system(nu)
    return out
