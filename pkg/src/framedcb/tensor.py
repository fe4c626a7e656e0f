"""Tensor products of two integrable modules in canonical coordinates.

Elements of ``Lambda_xi (x) Lambda_lambda`` are stored as coordinates on pure
tensors ``b1 (x) b2`` of canonical basis elements. Since the canonical basis
vectors are bar-invariant, the componentwise bar involution is coefficient
bar in these coordinates.

``Theta`` is assembled from the canonical basis of f and its dual basis under
the bilinear form; ``Psi = Theta o bar``. The canonical basis of the tensor
product is found weight space by weight space by a triangular fixed-point
solve, ordering pure tensors by the depth of the right factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cartan import CartanDatum, Node, Weight
from .coeff import (
    ONE,
    ZERO,
    Coeff,
    Lattice,
    LaurentPoly,
    RationalFunc,
    lattice_test,
    positivity_test,
    simplify,
)
from . import canonical, falg, linalg
from .canonical import CBIndex
from .falg import FreeElement, Word
from .hwmodule import HighestWeightModule, HWElement, act_E, act_E_divided

__all__ = [
    "TensorModule",
    "TensorElement",
    "DualBasisTable",
    "DiamondTable",
    "TriangularityError",
    "dual_basis_table",
    "delta_act",
    "quasi_R",
    "psi",
    "diamond_basis",
    "tensor_form",
]


class TriangularityError(RuntimeError):
    """The Psi matrix or a fixed-point equation broke the expected triangular shape."""


def _node(datum: CartanDatum, i) -> int:
    return i if isinstance(i, int) else datum.index(i)


def _tr(nu: Sequence[int]) -> int:
    return sum(nu)


def _vplus(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _vminus(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


# dual bases ------------------------------------------------------------------

@dataclass(frozen=True)
class DualBasisTable:
    """Per weight: ``b* = sum_{b'} inverse_gram[b'][b] b'``, so ``(b*, b'') = delta``."""

    weight: tuple
    indices: tuple
    gram: tuple
    inverse_gram: tuple

    def dual(self, b: CBIndex, datum: CartanDatum) -> FreeElement:
        k = self.indices.index(b)
        out = FreeElement.zero(datum)
        for j, b2 in enumerate(self.indices):
            c = self.inverse_gram[j][k]
            if c:
                out = out + canonical.cb_word_form(b2, datum).scale(c)
        return out


def dual_basis_table(datum: CartanDatum, nu: Sequence[int]) -> DualBasisTable:
    nu = tuple(nu)
    table = datum.memo.setdefault("dual_basis", {})
    hit = table.get(nu)
    if hit is not None:
        return hit
    idx = tuple(canonical.cb_list(datum, nu))
    elems = [canonical.cb_word_form(b, datum) for b in idx]
    g = [[falg.bilinear_form(x, y) for y in elems] for x in elems]
    inv = linalg.invert_matrix(g)
    out = DualBasisTable(nu, idx, tuple(tuple(r) for r in g), tuple(tuple(r) for r in inv))
    table[nu] = out
    return out


# the tensor module -----------------------------------------------------------

class TensorModule:
    """``Lambda_xi (x) Lambda_lambda`` for a datum of type A1 or A2."""

    def __init__(self, datum: CartanDatum, xi, lam):
        canonical.basis_type(datum)
        self.datum = datum
        self.left = HighestWeightModule(datum, xi)
        self.right = HighestWeightModule(datum, lam)
        self.xi = self.left.lam
        self.lam = self.right.lam
        self._plus: dict = {}
        self._minus: dict = {}
        self._action: dict = {}
        self._psi: dict = {}
        self._forms: dict = {}
        self._diamond: "DiamondTable | None" = None

    def __repr__(self) -> str:
        return f"TensorModule(xi={self.xi}, lambda={self.lam})"

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorModule) and (self.datum, self.xi, self.lam) == (other.datum, other.xi, other.lam)

    def __hash__(self):
        return hash((self.datum, self.xi.pairings, self.lam.pairings))

    # bases ---------------------------------------------------------------

    def pure_tensors(self) -> list:
        return [(b1, b2) for b1 in self.left.basis_indices() for b2 in self.right.basis_indices()]

    def depth(self, pair: tuple) -> tuple:
        return _vplus(pair[0].weight(), pair[1].weight())

    def weight_spaces(self) -> dict:
        """Total depth ``nu1 + nu2`` -> pure tensors, each sorted by the solver order."""
        groups: dict = {}
        for pair in self.pure_tensors():
            groups.setdefault(self.depth(pair), []).append(pair)
        return {nu: sorted(ps, key=self.order_key) for nu, ps in sorted(groups.items(), key=lambda kv: (_tr(kv[0]), kv[0]))}

    @staticmethod
    def order_key(pair: tuple) -> tuple:
        b1, b2 = pair
        return (_tr(b2.weight()), b2.weight(), _tr(b1.weight()), b1, b2)

    def element(self, coords: dict) -> "TensorElement":
        return TensorElement(self, {k: simplify(c) for k, c in coords.items() if c})

    def pure(self, b1: CBIndex, b2: CBIndex, coeff=ONE) -> "TensorElement":
        return self.element({(b1, b2): coeff})

    def eta(self) -> "TensorElement":
        one = canonical.cb_list(self.datum, (0,) * self.datum.rank)[0]
        return self.pure(one, one)

    def from_factors(self, m1: HWElement, m2: HWElement) -> "TensorElement":
        c1 = self.left.coordinates(m1).coords
        c2 = self.right.coordinates(m2).coords
        return self.element({(a, b): x * y for a, x in c1.items() for b, y in c2.items()})

    # factor actions (cached in coordinates) ---------------------------------

    def _factor(self, side: int) -> HighestWeightModule:
        return self.left if side == 0 else self.right

    def factor_action(self, side: int, gen: str, i: int, b: CBIndex) -> dict:
        key = (side, gen, i, b)
        hit = self._action.get(key)
        if hit is not None:
            return hit
        mod = self._factor(side)
        m = mod.basis_element(b)
        if gen == "F":
            img = HWElement(mod, FreeElement.letter(self.datum, i) * m.carrier)
        else:
            img = act_E(i, m)
        res = mod.coordinates(img).coords
        self._action[key] = res
        return res

    def minus_action(self, side: int, word: Word, b: CBIndex) -> dict:
        """Coordinates of ``word^- b`` (left multiplication of the carrier)."""
        key = (side, word, b)
        hit = self._minus.get(key)
        if hit is not None:
            return hit
        mod = self._factor(side)
        carrier = FreeElement.from_word(self.datum, word) * canonical.cb_word_form(b, self.datum)
        res = mod.coordinates(carrier).coords
        self._minus[key] = res
        return res

    def plus_action(self, side: int, word: Word, b: CBIndex) -> dict:
        """Coordinates of ``word^+ b``: ``E_{j1}^(a1) ... E_{jn}^(an)``, rightmost first."""
        key = (side, word, b)
        hit = self._plus.get(key)
        if hit is not None:
            return hit
        mod = self._factor(side)
        m = mod.basis_element(b)
        for node, mult in reversed(word):
            m = act_E_divided(node, mult, m)
            if not m.carrier:
                break
        res = mod.coordinates(m).coords if m.carrier else {}
        self._plus[key] = res
        return res

    def factor_form(self, side: int, b: CBIndex, b2: CBIndex) -> Coeff:
        key = (side, b, b2) if b <= b2 else (side, b2, b)
        hit = self._forms.get(key)
        if hit is not None:
            return hit
        from .hwmodule import admissible_form

        mod = self._factor(side)
        val = admissible_form(mod.basis_element(b), mod.basis_element(b2)) if b.weight() == b2.weight() else ZERO
        self._forms[key] = val
        return val

    # Theta and Psi on pure tensors ------------------------------------------------

    def theta_pure(self, b1: CBIndex, b2: CBIndex) -> dict:
        key = ("theta", b1, b2)
        hit = self._psi.get(key)
        if hit is not None:
            return hit
        acc: dict = {}
        depth2 = b2.weight()
        rank = self.datum.rank
        for degree in range(_tr(depth2) + 1):
            for nu in canonical.weights_of_degree(rank, degree):
                if any(x > y for x, y in zip(nu, depth2)):
                    continue
                dual = dual_basis_table(self.datum, nu)
                sign = LaurentPoly.monomial(degree, -1 if degree % 2 else 1)
                for k, b in enumerate(dual.indices):
                    left = self.minus_action(0, b.word(), b1)
                    if not left:
                        continue
                    for j, bp in enumerate(dual.indices):
                        g = dual.inverse_gram[j][k]
                        if not g:
                            continue
                        right = self.plus_action(1, bp.word(), b2)
                        if not right:
                            continue
                        scale = g * sign
                        for a1, c1 in left.items():
                            for a2, c2 in right.items():
                                k2 = (a1, a2)
                                v = scale * c1 * c2
                                s = acc.get(k2)
                                acc[k2] = v if s is None else s + v
        res = {k: simplify(c) for k, c in acc.items() if c}
        res = {k: c for k, c in res.items() if c}
        self._psi[key] = res
        return res

    # canonical basis ----------------------------------------------------------

    def diamond(self) -> "DiamondTable":
        if self._diamond is None:
            self._diamond = _solve_diamond(self)
        return self._diamond


@dataclass(frozen=True)
class TensorElement:
    module: TensorModule
    coords: dict = field(default_factory=dict)

    def _same(self, other: "TensorElement"):
        if not isinstance(other, TensorElement) or other.module is not self.module and other.module != self.module:
            raise ValueError("elements of different tensor modules")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._same(other)
        return TensorElement(self.module, linalg.vec_add(self.coords, other.coords))

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        self._same(other)
        return TensorElement(self.module, linalg.vec_sub(self.coords, other.coords))

    def __neg__(self) -> "TensorElement":
        return self.scale(-1)

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.module, {k: simplify(x) for k, x in linalg.vec_scale(self.coords, c).items()})

    def bar(self) -> "TensorElement":
        return TensorElement(self.module, {k: c.bar() for k, c in self.coords.items()})

    def __getitem__(self, pair: tuple) -> Coeff:
        return self.coords.get(pair, ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.module == other.module and linalg.vec_is_zero(linalg.vec_sub(self.coords, other.coords))

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def is_zero(self) -> bool:
        return linalg.vec_is_zero(self.coords)

    def items(self) -> list:
        return sorted(self.coords.items(), key=lambda kv: TensorModule.order_key(kv[0]))

    def in_lattice(self) -> bool:
        return all(lattice_test(c, Lattice.ZV_INV) for c in self.coords.values())

    def congruent(self, other: "TensorElement") -> bool:
        diff = self - other
        return all(lattice_test(c, Lattice.VINV_ZV_INV) for c in diff.coords.values())

    def to_json(self) -> list:
        return [[[str(b1), str(b2)], simplify(c).to_json()] for (b1, b2), c in self.items()]

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(f"({c})*{b1}(x){b2}" for (b1, b2), c in self.items())


# actions ---------------------------------------------------------------------

def delta_act(gen: str, i, t: TensorElement) -> TensorElement:
    """Apply ``E_i``, ``F_i`` (``i`` a node) or ``K_mu`` (``i`` a vector) through the coproduct.

    ``Delta(F_i) = 1 (x) F_i + F_i (x) K_{-i}``, ``Delta(E_i) = E_i (x) 1 + K_i (x) E_i``.
    """
    mod = t.module
    gen = gen.upper()
    acc: dict = {}

    def add(key, val):
        s = acc.get(key)
        acc[key] = val if s is None else s + val

    if gen == "K":
        mu = tuple(i)
        for (b1, b2), c in t.coords.items():
            e = mod.xi.pair_root(mu, b1.weight()) + mod.lam.pair_root(mu, b2.weight())
            add((b1, b2), c * LaurentPoly.monomial(e))
        return mod.element(acc)
    idx = _node(mod.datum, i)
    if gen == "F":
        for (b1, b2), c in t.coords.items():
            for a2, c2 in mod.factor_action(1, "F", idx, b2).items():
                add((b1, a2), c * c2)
            k = LaurentPoly.monomial(-mod.lam.pair_minus(idx, b2.weight()))
            for a1, c1 in mod.factor_action(0, "F", idx, b1).items():
                add((a1, b2), c * c1 * k)
        return mod.element(acc)
    if gen == "E":
        for (b1, b2), c in t.coords.items():
            for a1, c1 in mod.factor_action(0, "E", idx, b1).items():
                add((a1, b2), c * c1)
            k = LaurentPoly.monomial(mod.xi.pair_minus(idx, b1.weight()))
            for a2, c2 in mod.factor_action(1, "E", idx, b2).items():
                add((b1, a2), c * c2 * k)
        return mod.element(acc)
    raise ValueError(f"unknown generator {gen!r}; expected E, F or K")


def quasi_R(t: TensorElement) -> TensorElement:
    """``Theta(m1 (x) m2) = sum_nu (-v)^{tr nu} sum_b b^- m1 (x) b*^+ m2``."""
    mod = t.module
    acc: dict = {}
    for (b1, b2), c in t.coords.items():
        for k, x in mod.theta_pure(b1, b2).items():
            v = c * x
            s = acc.get(k)
            acc[k] = v if s is None else s + v
    return mod.element(acc)


def psi(t: TensorElement) -> TensorElement:
    """``Psi(m) = Theta(bar m)``."""
    return quasi_R(t.bar())


def tensor_form(t: TensorElement, t2: TensorElement) -> Coeff:
    """Product of the admissible forms on the factors, extended bilinearly."""
    t._same(t2)
    mod = t.module
    total: Coeff = ZERO
    for (a1, a2), c in t.coords.items():
        for (b1, b2), d in t2.coords.items():
            if a1.weight() != b1.weight() or a2.weight() != b2.weight():
                continue
            f1 = mod.factor_form(0, a1, b1)
            if not f1:
                continue
            f2 = mod.factor_form(1, a2, b2)
            if f2:
                total = total + c * d * f1 * f2
    return simplify(total)


# the triangular solve ----------------------------------------------------------

@dataclass(frozen=True)
class DiamondTable:
    module: TensorModule
    elements: dict  # (b1, b2) -> TensorElement

    def __getitem__(self, pair: tuple) -> TensorElement:
        return self.elements[pair]

    def __len__(self) -> int:
        return len(self.elements)

    def items(self) -> list:
        return sorted(self.elements.items(), key=lambda kv: TensorModule.order_key(kv[0]))

    def express(self, t: TensorElement) -> dict:
        """Coordinates of ``t`` in the diamond basis (unitriangular back-substitution)."""
        rest = dict(t.coords)
        out: dict = {}
        while True:
            rest = {k: simplify(c) for k, c in rest.items() if c}
            rest = {k: c for k, c in rest.items() if c}
            if not rest:
                return out
            top = max(rest, key=TensorModule.order_key)
            c = rest[top]
            out[top] = c
            for k, x in self.elements[top].coords.items():
                rest[k] = rest.get(k, ZERO) - c * x

    def off_leading_positive(self) -> list:
        """Pairs ``(leading, other)`` whose coordinate is not in ``v^-1 N[v^-1]``."""
        bad = []
        for lead, elem in self.items():
            for k, c in elem.coords.items():
                if k == lead:
                    continue
                if not (isinstance(c, LaurentPoly) and positivity_test(c) and lattice_test(c, Lattice.VINV_ZV_INV)):
                    bad.append((lead, k))
        return bad


def _split_negative(r: LaurentPoly) -> LaurentPoly:
    if r.coefficient(0):
        raise TriangularityError(f"fixed-point equation has a nonzero constant term: {r}")
    if r + r.bar():
        raise TriangularityError(f"fixed-point equation is not antisymmetric under bar: {r}")
    return LaurentPoly({e: c for e, c in r.items() if e < 0})


def psi_matrix(mod: TensorModule, pairs: list) -> dict:
    """``A[(row, col)]``: coordinate of ``row`` in ``Psi(col)`` on one weight space."""
    index = set(pairs)
    out = {}
    for col in pairs:
        for row, c in mod.theta_pure(*col).items():
            if row not in index:
                raise TriangularityError("Psi left its weight space")
            c = simplify(c)
            if not isinstance(c, LaurentPoly):
                raise TriangularityError(f"Psi entry {c} is not a Laurent polynomial")
            out[(row, col)] = c
    return out


def _check_triangular(mod: TensorModule, pairs: list, mat: dict):
    depth = {p: _tr(p[1].weight()) for p in pairs}
    for (row, col), c in mat.items():
        if row == col:
            if c != ONE:
                raise TriangularityError(f"diagonal entry at {col} is {c}, not 1")
        elif depth[row] >= depth[col]:
            raise TriangularityError(f"entry at ({row}, {col}) breaks the right-factor depth order")


def _solve_diamond(mod: TensorModule) -> DiamondTable:
    elements = {}
    for nu, pairs in mod.weight_spaces().items():
        mat = psi_matrix(mod, pairs)
        _check_triangular(mod, pairs, mat)
        depth = {p: _tr(p[1].weight()) for p in pairs}
        for col in pairs:
            sol = {col: ONE}
            lower = sorted((p for p in pairs if depth[p] < depth[col]), key=mod.order_key, reverse=True)
            for row in lower:
                r = ZERO
                for src, val in sol.items():
                    a = mat.get((row, src))
                    if a is not None and depth[src] > depth[row]:
                        r = r + a * val.bar()
                r = simplify(r)
                if r:
                    p = _split_negative(r)
                    if p:
                        sol[row] = p
            elements[col] = mod.element(sol)
    return DiamondTable(mod, elements)


def diamond_basis(datum: CartanDatum, xi, lam, type_token: "str | None" = None) -> DiamondTable:
    """The canonical basis ``{b1 <> b2}`` of ``Lambda_xi (x) Lambda_lambda``."""
    canonical._check_type(datum, type_token)
    return TensorModule(datum, xi, lam).diamond()
