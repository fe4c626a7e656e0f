"""Kashiwara operators on f and on integrable modules, with lattice checks.

On ``f`` every homogeneous ``x`` splits uniquely as ``sum_n theta_i^(n) x_n``
with ``_ir(x_n) = 0``. The top part is read off directly: if ``N`` is the
largest power with ``_ir^N(x) != 0`` then ``_ir^N(x) = v^{N(N-1)/2} x_N``,
because ``_ir(theta_i^(n) y) = v^{n-1} theta_i^(n-1) y`` when ``_ir(y) = 0``.
Subtracting ``theta_i^(N) x_N`` lowers ``N`` and the extraction repeats.

Modules are handled the same way with ``E_i`` in place of ``_ir``: for an
``E_i``-killed vector ``u`` of ``i``-weight ``h``,
``E_i^(N) F_i^(N) u = [h choose N] u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from . import canonical, falg
from .canonical import CanonicalExpansion, CBIndex
from .cartan import CartanDatum, cartan_type
from .coeff import (
    ONE,
    ZERO,
    Lattice,
    LaurentPoly,
    RationalFunc,
    lattice_test,
    quantum_binomial,
    quantum_factorial,
    simplify,
)
from .falg import FreeElement
from .framed import FramedConstruction
from .hwmodule import HWElement, act_E, act_F
from .report import Report
from .tensor import TensorElement, TensorModule, delta_act, tensor_form

__all__ = [
    "StringDecomposition",
    "string_decompose",
    "phi_tilde",
    "eps_tilde",
    "module_string_decompose",
    "F_tilde",
    "E_tilde",
    "lattice_coordinates",
    "lattice_member",
    "congruent",
    "crystal_image",
    "check_eps_phi",
    "check_theta_lambda_embedding",
    "check_projection_commutes",
    "check_reachability",
    "check_adjoint_tensor",
    "SUITES",
    "run_suite",
]

ModuleElement = Union[HWElement, TensorElement]


def _node(datum: CartanDatum, i) -> int:
    return i if isinstance(i, int) else datum.index(i)


def _divided(datum: CartanDatum, i: int, n: int) -> FreeElement:
    return FreeElement.from_word(datum, ((i, n),))


def _f_is_zero(x: FreeElement) -> bool:
    return not falg.character(x)


def _clean(x: FreeElement) -> FreeElement:
    return FreeElement(x.datum, {w: simplify(c) for w, c in x.items() if c})


# strings in f ------------------------------------------------------------------

@dataclass(frozen=True)
class StringDecomposition:
    """``x = sum_n theta_i^(n) parts[n]`` with every part killed by ``_ir``."""

    node: int
    parts: dict = field(default_factory=dict)
    datum: "CartanDatum | None" = None

    def reassemble(self) -> FreeElement:
        out = FreeElement.zero(self.datum)
        for n, xn in self.parts.items():
            out = out + _divided(self.datum, self.node, n) * xn
        return out

    def top(self) -> int:
        return max(self.parts, default=-1)

    def shifted(self, step: int) -> FreeElement:
        out = FreeElement.zero(self.datum)
        for n, xn in self.parts.items():
            if n + step >= 0:
                out = out + _divided(self.datum, self.node, n + step) * xn
        return out


def string_decompose(i, x: FreeElement) -> StringDecomposition:
    """Split a homogeneous ``x`` along the ``theta_i``-strings."""
    datum = x.datum
    i = _node(datum, i)
    if len(x.weights()) > 1:
        raise ValueError("string decomposition needs a homogeneous element")
    parts: dict = {}
    rest = x
    prev_top = None
    while not _f_is_zero(rest):
        powers = [rest]
        while True:
            nxt = falg.i_r(i, powers[-1])
            if _f_is_zero(nxt):
                break
            powers.append(nxt)
        top = len(powers) - 1
        if prev_top is not None and top >= prev_top:
            raise RuntimeError(f"string extraction did not descend ({top} after {prev_top})")
        xn = _clean(powers[top].scale(LaurentPoly.monomial(-top * (top - 1) // 2)))
        parts[top] = xn
        rest = rest - _divided(datum, i, top) * xn
        prev_top = top
    return StringDecomposition(i, parts, datum)


def _on_parts(i, x: FreeElement, step: int) -> FreeElement:
    out = FreeElement.zero(x.datum)
    for part in x.homogeneous_parts().values():
        out = out + string_decompose(i, part).shifted(step)
    return _clean(out)


def phi_tilde(i, x: FreeElement) -> FreeElement:
    """``sum theta_i^(n+1) x_n``."""
    return _on_parts(i, x, 1)


def eps_tilde(i, x: FreeElement) -> FreeElement:
    """``sum_{n >= 1} theta_i^(n-1) x_n``."""
    return _on_parts(i, x, -1)


# strings in modules -----------------------------------------------------------------

class _Ops:
    """The few operations the module string extraction needs."""

    def __init__(self, sample: ModuleElement):
        self.tensor = isinstance(sample, TensorElement)

    def is_zero(self, m) -> bool:
        return m.is_zero()

    def e(self, i, m):
        return delta_act("E", i, m) if self.tensor else act_E(i, m)

    def f_divided(self, i, n, m):
        if not self.tensor:
            return act_F(i, n, m)
        out = m
        for _ in range(n):
            out = delta_act("F", i, out)
        if n > 1:
            out = out.scale(RationalFunc.from_laurent(ONE, quantum_factorial(n)))
        return out

    def pairing(self, i, m) -> int:
        if not self.tensor:
            return m.weight()[i]
        mod = m.module
        vals = {mod.xi.pair_minus(i, b1.weight()) + mod.lam.pair_minus(i, b2.weight()) for b1, b2 in m.coords}
        if len(vals) != 1:
            raise ValueError("tensor element is not homogeneous")
        return vals.pop()

    def parts(self, m) -> list:
        if not self.tensor:
            return [HWElement(m.module, p) for p in m.carrier.homogeneous_parts().values()]
        groups: dict = {}
        for (b1, b2), c in m.coords.items():
            key = tuple(a + b for a, b in zip(b1.weight(), b2.weight()))
            groups.setdefault(key, {})[(b1, b2)] = c
        return [m.module.element(g) for g in groups.values()]

    def zero_like(self, m):
        return m.module.element({}) if self.tensor else m.module.zero()


def module_string_decompose(i, m: ModuleElement) -> dict:
    """``n -> m_n`` with ``m = sum F_i^(n) m_n`` and ``E_i m_n = 0`` (homogeneous ``m``)."""
    ops = _Ops(m)
    datum = m.module.datum
    i = _node(datum, i)
    parts: dict = {}
    rest = m
    prev_top = None
    while not ops.is_zero(rest):
        powers = [rest]
        while True:
            nxt = ops.e(i, powers[-1])
            if ops.is_zero(nxt):
                break
            powers.append(nxt)
        top = len(powers) - 1
        if prev_top is not None and top >= prev_top:
            raise RuntimeError(f"string extraction did not descend ({top} after {prev_top})")
        h = ops.pairing(i, rest) + 2 * top
        denom = quantum_factorial(top) * quantum_binomial(h, top)
        mn = powers[top].scale(RationalFunc.from_laurent(ONE, denom)) if top else powers[0]
        parts[top] = mn
        rest = rest - ops.f_divided(i, top, mn)
        prev_top = top
    return parts


def _module_shift(i, m: ModuleElement, step: int) -> ModuleElement:
    ops = _Ops(m)
    i = _node(m.module.datum, i)
    out = ops.zero_like(m)
    for part in ops.parts(m):
        for n, mn in module_string_decompose(i, part).items():
            if n + step >= 0:
                out = out + ops.f_divided(i, n + step, mn)
    return out


def F_tilde(i, m: ModuleElement) -> ModuleElement:
    return _module_shift(i, m, 1)


def E_tilde(i, m: ModuleElement) -> ModuleElement:
    return _module_shift(i, m, -1)


# lattices ------------------------------------------------------------------------

def lattice_coordinates(x) -> dict:
    """Coordinates in the relevant canonical (or pure tensor) basis."""
    if isinstance(x, CanonicalExpansion):
        return dict(x.coords)
    if isinstance(x, FreeElement):
        return dict(canonical.coordinates(x).coords)
    if isinstance(x, HWElement):
        return dict(x.module.coordinates(x).coords)
    if isinstance(x, TensorElement):
        return dict(x.coords)
    if isinstance(x, dict):
        return dict(x)
    raise TypeError(f"no basis context for {type(x).__name__}")


def lattice_member(x, flavor: "Lattice | str" = Lattice.ZV_INV) -> bool:
    """Membership in the ``Z[v^-1]``-span (``Zv_inv``) or ``A``-span (``A_ring``) of the basis."""
    flavor = Lattice(flavor)
    if flavor not in (Lattice.ZV_INV, Lattice.A_RING):
        raise ValueError("lattice flavor must be Zv_inv or A_ring")
    return all(lattice_test(c, flavor) for c in lattice_coordinates(x).values())


def congruent(x, y, flavor: "Lattice | str" = Lattice.ZV_INV) -> bool:
    """``x = y`` modulo ``v^-1`` times the lattice of the given flavor."""
    flavor = Lattice(flavor)
    small = Lattice.VINV_ZV_INV if flavor is Lattice.ZV_INV else Lattice.VINV_A
    cx, cy = lattice_coordinates(x), lattice_coordinates(y)
    return all(lattice_test(simplify(cx.get(k, ZERO) - cy.get(k, ZERO)), small) for k in set(cx) | set(cy))


def crystal_image(x) -> "dict | None":
    """The ``v^0`` part of a ``Z[v^-1]``-lattice element, or ``None`` if outside the lattice."""
    coords = lattice_coordinates(x)
    if not all(lattice_test(c, Lattice.ZV_INV) for c in coords.values()):
        return None
    out = {}
    for k, c in coords.items():
        c0 = simplify(c).coefficient(0)
        if c0:
            out[k] = c0
    return out


def _single(image: "dict | None"):
    """The basis element ``b`` when ``image`` is exactly ``1 * b``."""
    if image is None or len(image) != 1:
        return None
    (k, c), = image.items()
    return k if c == 1 else None


# property suites -------------------------------------------------------------------

def check_eps_phi(type_token: str = "A2", max_degree: int = 5) -> Report:
    """``eps~ phi~ = id`` on the canonical basis, with the string statistics shifting by one."""
    datum = cartan_type(type_token)
    rep = Report("crystal:eps-phi", meta={"type": type_token, "max_degree": max_degree})
    count = 0
    for b in canonical.all_indices_up_to(datum, max_degree):
        x = canonical.cb_word_form(b, datum)
        for i in range(datum.rank):
            count += 1
            name = f"{b}/node{i}"
            y = phi_tilde(i, x)
            b1 = _single(crystal_image(y))
            ok = b1 is not None and lattice_member(y)
            witness = None
            if ok:
                t0, t1 = canonical.t_left(b, i, datum), canonical.t_left(b1, i, datum)
                back = eps_tilde(i, canonical.cb_word_form(b1, datum))
                ok = t1 == t0 + 1 and congruent(back, x) and congruent(eps_tilde(i, y), x)
                witness = {"image": str(b1), "t_before": t0, "t_after": t1}
            e = eps_tilde(i, x)
            e_img = crystal_image(e)
            if canonical.t_left(b, i, datum) == 0:
                e_ok = e_img == {}
            else:
                e_ok = _single(e_img) is not None
            rep.add(name, ok and e_ok, witness if ok and e_ok else {"phi": str(y), "eps": str(e)})
    rep.data["elements_checked"] = count
    return rep


def _a1_framed(n: int, xi: int = 0) -> FramedConstruction:
    return FramedConstruction(cartan_type("A1"), (xi,), (n,))


def check_theta_lambda_embedding(n_max: int = 4, extra_degree: int = 2) -> Report:
    """Left multiplication by ``theta_lambda`` on the A1 basis, base A1."""
    rep = Report("crystal:theta-lambda", meta={"n_max": n_max, "extra_degree": extra_degree})
    for n in range(n_max + 1):
        fc = _a1_framed(n)
        top = n + extra_degree
        images = {}
        for k in range(top + 1):
            b0 = canonical.A1(k)
            y = fc.theta_element() * fc.embed(canonical.cb_word_form(b0, fc.base))
            img = _single(crystal_image(canonical.coordinates(y)))
            ok = img is not None and canonical.coordinates(y) == CanonicalExpansion({img: ONE})
            ok = ok and img in fc.fthetaf_basis((k,))
            ok = ok and canonical.t_right(img, 0, fc.full) == canonical.t_right(b0, 0, fc.base)
            images[k] = img
            rep.add(f"lambda={n}/k={k}/image", ok, {"image": str(img)})
        rep.add(f"lambda={n}/injective", len(set(images.values())) == len(images))
        expected = sorted(images[k] for k in range(n + 1))
        found = sorted(
            b
            for d in range(top + 1)
            for b in fc.fthetaf_basis((d,))
            if canonical.t_left(b, 0, fc.full) == 0
        )
        rep.add(
            f"lambda={n}/head-set",
            expected == found,
            {"expected": [str(b) for b in expected], "found": [str(b) for b in found]},
        )
    return rep


def check_projection_commutes(m_max: int = 3, n_max: int = 3) -> Report:
    """``pi phi~_i = F~_i pi`` and ``pi eps~_i = E~_i pi`` modulo ``v^-1 L``, base A1.

    Both lattice flavors are evaluated; any disagreement between them is
    recorded under ``data["flavor_disagreements"]``.
    """
    rep = Report("crystal:projection", meta={"m_max": m_max, "n_max": n_max})
    disagreements = []
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            fc = _a1_framed(n, m)
            mod = fc.framed_module
            in_b = set(fc.b_xi_lambda())
            for d in range(fc.max_depth() + 1):
                for b in fc.fthetaf_basis((d,)):
                    x = canonical.cb_word_form(b, fc.full)
                    pix = mod.element(x)
                    cases = [("F", mod.element(phi_tilde(0, x)), F_tilde(0, pix))]
                    if b in in_b and d > 0:
                        cases.append(("E", mod.element(eps_tilde(0, x)), E_tilde(0, pix)))
                    for label, lhs, rhs in cases:
                        strict = congruent(lhs, rhs, Lattice.ZV_INV)
                        loose = congruent(lhs, rhs, Lattice.A_RING)
                        if strict != loose:
                            disagreements.append(f"({m},{n})/{b}/{label}")
                        rep.add(
                            f"({m},{n})/{b}/{label}",
                            loose and lattice_member(rhs, Lattice.A_RING),
                            None if loose else {"lhs": str(lhs.coordinates()), "rhs": str(rhs.coordinates())},
                        )
    rep.data["flavor_disagreements"] = disagreements
    return rep


def check_reachability(lams: Sequence[int] = (0, 1, 2, 3), max_degree: int = 5) -> Report:
    """Every element of ``B(f theta_lambda f)`` up to base degree ``max_degree`` is reached
    from ``theta_lambda sigma(B(lambda))`` by ``phi~`` modulo ``v^-1 L`` (base A1)."""
    rep = Report("crystal:reachability", meta={"lambdas": list(lams), "max_degree": max_degree})
    for n in lams:
        fc = _a1_framed(n)
        frontier = []
        for k in range(min(n, max_degree) + 1):
            y = fc.theta_element() * fc.embed(canonical.cb_word_form(canonical.A1(k), fc.base))
            frontier.append(_single(crystal_image(y)))
        reached = set(frontier)
        steps_ok = True
        while frontier:
            nxt = []
            for b in frontier:
                if b is None or b.weight()[0] >= max_degree:
                    continue
                img = _single(crystal_image(phi_tilde(0, canonical.cb_word_form(b, fc.full))))
                if img is None:
                    steps_ok = False
                    continue
                if img not in reached:
                    reached.add(img)
                    nxt.append(img)
            frontier = nxt
        target = {b for d in range(max_degree + 1) for b in fc.fthetaf_basis((d,))}
        rep.add(f"lambda={n}/single-steps", steps_ok and None not in reached)
        rep.add(
            f"lambda={n}/reached-all",
            reached == target,
            {"missing": sorted(str(b) for b in target - reached), "extra": sorted(str(b) for b in reached - target if b)},
        )
        rep.data[f"lambda={n}/size"] = len(target)
    return rep


def check_adjoint_tensor(type_token: str, xi: Sequence[int], lam: Sequence[int]) -> Report:
    """``(F~_i m, m') = (m, E~_i m')`` modulo ``v^-1 A`` on pure tensors of basis elements."""
    datum = cartan_type(type_token)
    tm = TensorModule(datum, tuple(xi), tuple(lam))
    rep = Report("crystal:adjoint-tensor", meta={"type": type_token, "xi": list(xi), "lambda": list(lam)})
    pairs = tm.pure_tensors()
    for i in range(datum.rank):
        step = tuple(1 if k == i else 0 for k in range(datum.rank))
        ftil = {p: F_tilde(i, tm.pure(*p)) for p in pairs}
        etil = {p: E_tilde(i, tm.pure(*p)) for p in pairs}
        for p in pairs:
            for q in pairs:
                if tm.depth(q) != tuple(a + b for a, b in zip(tm.depth(p), step)):
                    continue
                left = tensor_form(ftil[p], tm.pure(*q))
                right = tensor_form(tm.pure(*p), etil[q])
                ok = lattice_test(simplify(left - right), Lattice.VINV_A)
                rep.add(f"node{i}/{p[0]}(x){p[1]}|{q[0]}(x){q[1]}", ok, None if ok else {"left": str(left), "right": str(right)})
        for p in pairs:
            rep.add(f"node{i}/{p[0]}(x){p[1]}/stable", lattice_member(ftil[p], Lattice.A_RING) and lattice_member(etil[p], Lattice.A_RING))
    return rep


def _adjoint_default() -> Report:
    rep = Report("crystal:adjoint-tensor")
    for m in range(4):
        for n in range(4):
            rep.extend(check_adjoint_tensor("A1", (m,), (n,)), prefix=f"A1({m},{n})/")
    for xi in ((1, 0), (0, 1)):
        for lam in ((1, 0), (0, 1)):
            rep.extend(check_adjoint_tensor("A2", xi, lam), prefix=f"A2{xi}{lam}/")
    return rep


SUITES: dict = {
    "eps-phi": check_eps_phi,
    "theta-lambda": check_theta_lambda_embedding,
    "projection": check_projection_commutes,
    "reachability": check_reachability,
    "adjoint-tensor": _adjoint_default,
}


def run_suite(name: str) -> Report:
    if name == "all":
        rep = Report("crystal:all")
        for key, fn in SUITES.items():
            rep.extend(fn(), prefix=key + "/")
        return rep
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown crystal suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return fn()
