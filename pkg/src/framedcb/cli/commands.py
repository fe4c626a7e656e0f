"""Subcommand implementations. Each returns a ``Report``."""

from __future__ import annotations

from typing import Sequence

from .. import canonical, crystal, falg, linalg
from ..canonical import CBIndex
from ..cartan import CartanDatum, frame
from ..coeff import Lattice, LaurentPoly, lattice_test, simplify
from ..falg import FreeElement
from ..framed import (
    FramedConstruction,
    closed_form_element,
    verify_cb_correspondence,
    verify_positivity,
    verify_two_pairings,
)
from ..hwmodule import HighestWeightModule, admissible_form
from ..report import Report
from ..tensor import TensorModule, diamond_basis, psi, quasi_R
from .cache import TableCache
from .config import ConfigError, DatumConfig


def _parse_nu(text: str, rank: int) -> tuple:
    try:
        vals = tuple(int(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError:
        raise ConfigError(f"--nu expects comma-separated integers, got {text!r}") from None
    if len(vals) != rank or any(v < 0 for v in vals):
        raise ConfigError(f"--nu needs {rank} nonnegative entries")
    return vals


def _matrix(datum: CartanDatum) -> dict:
    return {"nodes": datum.node_names(), "matrix": [list(r) for r in datum.pairing]}


def _coeff(c) -> dict:
    return simplify(c).to_json()


# datum -------------------------------------------------------------------------

def datum_frame(cfg: DatumConfig, generations: int = 1) -> Report:
    if generations < 1:
        raise ConfigError("--generations must be at least 1")
    fd = frame(cfg.datum)
    for _ in range(generations - 1):
        fd = frame(fd)
    rep = Report("datum frame")
    full, base = fd.full, cfg.datum
    rep.add("framed matrix restricts to the base matrix",
            all(full.pairing[a][b] == base.pairing[a][b] for a in range(base.rank) for b in range(base.rank)))
    newest = fd.generations
    bad = []
    for a, (ba, ga) in enumerate(fd.tagging):
        if ga != newest:
            continue
        for b, (bb, gb) in enumerate(fd.tagging):
            if gb == 0:
                want = -1 if ba == bb else 0
            elif gb == newest:
                want = 2 if ba == bb else 0
            else:
                want = 0
            if full.pairing[a][b] != want:
                bad.append([str(full.nodes[a]), str(full.nodes[b])])
    rep.add("framing rule on the new nodes", not bad, bad or None)
    rep.data.update({"base": _matrix(base), "framed": _matrix(full), "text": str(full)})
    try:
        rep.data["framed_type"] = canonical.basis_type(full)
    except canonical.UnsupportedTypeError:
        rep.data["framed_type"] = None
    return rep


def datum_show(cfg: DatumConfig) -> Report:
    rep = Report("datum show")
    rep.data.update(_matrix(cfg.datum))
    rep.data["fingerprint"] = cfg.datum.fingerprint()
    rep.data["text"] = str(cfg.datum)
    rep.data["weights"] = {k: list(w.pairings) for k, w in sorted(cfg.weights.items())}
    rep.add("named weights are dominant", all(w.is_dominant() for w in cfg.weights.values()))
    return rep


# falg ----------------------------------------------------------------------------

def _character_rank(datum: CartanDatum, nu: tuple) -> int:
    words = falg.words_of_weight(datum, nu)
    vecs = [falg.character(FreeElement.from_word(datum, w)) for w in words]
    return linalg.rank(vecs) if vecs else 0


def falg_dim(cfg: DatumConfig, cache: TableCache, nu_text: str) -> Report:
    datum = cfg.datum
    nu = _parse_nu(nu_text, datum.rank)
    rep = Report("falg dim")
    table = cache.gram(datum, nu)
    char_rank = _character_rank(datum, nu)
    rep.add("Gram rank equals the rank of path coordinates", table.rank == char_rank,
            {"gram_rank": table.rank, "path_rank": char_rank})
    try:
        count = len(canonical.cb_list(datum, nu))
        rep.add("dimension equals the canonical basis count", count == table.rank, {"cb_count": count})
    except canonical.UnsupportedTypeError:
        pass
    rep.data.update({"weight": list(nu), "dim": table.rank})
    return rep


def falg_gram(cfg: DatumConfig, cache: TableCache, nu_text: str, merged: bool = False) -> Report:
    datum = cfg.datum
    nu = _parse_nu(nu_text, datum.rank)
    rep = Report("falg gram")
    table = cache.gram(datum, nu, raw=not merged)
    n = len(table.labels)
    rep.add("matrix is symmetric",
            all(not simplify(table.matrix[a][b] - table.matrix[b][a]) for a in range(n) for b in range(a)))
    rep.add("kernel size plus rank equals the number of words", len(table.kernel) + table.rank == n,
            {"rank": table.rank, "kernel": len(table.kernel), "words": n})
    rep.data.update({
        "weight": list(nu),
        "labels": [falg.format_word(lab, datum) for lab in table.labels],
        "matrix": [[_coeff(c) for c in row] for row in table.matrix],
        "rank": table.rank,
        "kernel": [{falg.format_word(table.labels[k], datum): _coeff(c) for k, c in sorted(rel.items())}
                   for rel in table.kernel],
    })
    return rep


def falg_serre_check(cfg: DatumConfig, cache: TableCache, max_degree: int = 6) -> Report:
    datum = cfg.datum
    rep = Report("falg serre-check")
    checked = 0
    for a in range(datum.rank):
        for b in range(datum.rank):
            if a == b:
                continue
            s = falg.serre_element(datum, a, b)
            deg = 1 - datum.dot(a, b) + 1
            if deg > max_degree:
                continue
            name = f"{datum.nodes[a]},{datum.nodes[b]}"
            nu = s.weight()
            table = cache.gram(datum, nu)
            pairings = [falg.bilinear_form(s, e) for e in table.elements]
            rep.add(f"serre({name}) pairs to zero with every word", not any(simplify(p) for p in pairings))
            bad = []
            for d in range(max_degree - deg + 1):
                for mu in canonical.weights_of_degree(datum.rank, d):
                    for w in falg.words_of_weight(datum, mu):
                        x = FreeElement.from_word(datum, w)
                        for prod in (x * s, s * x):
                            checked += 1
                            if falg.character(prod):
                                bad.append(falg.format_word(w, datum))
            rep.add(f"serre({name}) multiples up to degree {max_degree} vanish in f", not bad, bad or None)
    rep.data["products_checked"] = checked
    return rep


# cb ----------------------------------------------------------------------------------

def cb_list(cfg: DatumConfig, cache: TableCache, nu_text: "str | None", max_degree: "int | None") -> Report:
    datum = cfg.datum
    canonical.basis_type(datum)
    rep = Report("cb list")
    if nu_text is not None:
        weights = [_parse_nu(nu_text, datum.rank)]
    else:
        top = 3 if max_degree is None else max_degree
        weights = [nu for d in range(top + 1) for nu in canonical.weights_of_degree(datum.rank, d)]
    listing = {}
    for nu in weights:
        idx = canonical.cb_list(datum, nu)
        listing[",".join(map(str, nu))] = [
            {"index": str(b), "word": falg.format_word(b.word(), datum)} for b in idx
        ]
        rk = cache.gram(datum, nu).rank
        rep.add(f"count at {','.join(map(str, nu))} equals Gram rank", rk == len(idx), {"count": len(idx), "rank": rk})
    rep.data["basis"] = listing
    return rep


def cb_expand(cfg: DatumConfig, word: str) -> Report:
    datum = cfg.datum
    canonical.basis_type(datum)
    rep = Report("cb expand")
    x = falg.parse_word(word, datum)
    exp = canonical.coordinates(x)
    rep.add("expansion reassembles the input", falg.equals_in_f(exp.to_element(datum), x))
    rep.add("coordinates are Laurent polynomials", exp.is_integral())
    rep.data.update({"input": word, "coordinates": exp.to_json(), "text": str(exp)})
    return rep


# module --------------------------------------------------------------------------------

def module_weights(cfg: DatumConfig, lam_text: str, max_degree: int = 64) -> Report:
    lam = cfg.weight(lam_text)
    mod = HighestWeightModule(cfg.datum, lam)
    rep = Report("module weights")
    rows = []
    for nu, d in mod.weights(max_degree):
        entry = {"nu": list(nu), "weight": list(mod.weight_of(nu)), "dim": d}
        if mod.has_canonical_basis():
            rk = mod.dimension(nu)
            rep.add(f"dim at {','.join(map(str, nu))} matches the E-path rank", rk == d, {"basis": d, "rank": rk})
        rows.append(entry)
    rep.data.update({"lambda": list(lam.pairings), "weights": rows, "total_dim": sum(r["dim"] for r in rows)})
    return rep


def module_form(cfg: DatumConfig, lam_text: str, x_text: str, y_text: str) -> Report:
    lam = cfg.weight(lam_text)
    mod = HighestWeightModule(cfg.datum, lam)
    rep = Report("module form")
    x, y = mod.element(x_text), mod.element(y_text)
    val = simplify(admissible_form(x, y))
    rev = simplify(admissible_form(y, x))
    rep.add("form is symmetric", not simplify(val - rev))
    rep.data.update({"x": str(x), "y": str(y), "value": val.to_json(), "text": str(val)})
    return rep


# tensor -------------------------------------------------------------------------------

def _pair_text(pair) -> list:
    return [str(pair[0]), str(pair[1])]


def tensor_diamond(cfg: DatumConfig, xi_text: str, lam_text: str) -> Report:
    datum = cfg.datum
    xi, lam = cfg.weight(xi_text), cfg.weight(lam_text)
    kind = canonical.basis_type(datum)
    table = diamond_basis(datum, xi.pairings, lam.pairings)
    rep = Report("tensor diamond")
    not_fixed, bad_lead = [], []
    out = {}
    m = xi.pairings[0]
    n = lam.pairings[0]
    for pair, elem in table.items():
        if psi(elem) != elem:
            not_fixed.append(_pair_text(pair))
        if elem[pair] != LaurentPoly.from_int(1):
            bad_lead.append(_pair_text(pair))
        key = f"({m - pair[0].params[0]},{pair[1].params[0]})" if kind == "A1" else f"({pair[0]},{pair[1]})"
        out[key] = elem.to_json()
    rep.add("every element is Psi-fixed", not not_fixed, not_fixed or None)
    rep.add("leading coefficient is 1", not bad_lead, bad_lead or None)
    off = table.off_leading_positive()
    rep.add("off-leading coordinates lie in v^-1 N[v^-1]", not off,
            [[_pair_text(a), _pair_text(b)] for a, b in off] or None)
    if kind == "A1":
        tm = table.module
        wrong = []
        for k in range(m + 1):
            for l in range(n + 1):
                pair = (canonical.A1(m - k), canonical.A1(l))
                if table[pair] != closed_form_element(tm, m, n, k, l):
                    wrong.append(f"({k},{l})")
        rep.add("table equals the alpha/beta closed forms", not wrong, wrong or None)
    rep.data.update({"xi": list(xi.pairings), "lambda": list(lam.pairings), "size": len(table), "table": out})
    return rep


def tensor_theta(cfg: DatumConfig, xi_text: str, lam_text: str, b1: str, b2: str) -> Report:
    datum = cfg.datum
    xi, lam = cfg.weight(xi_text), cfg.weight(lam_text)
    tm = TensorModule(datum, xi.pairings, lam.pairings)
    i1, i2 = CBIndex.parse(b1), CBIndex.parse(b2)
    if i1 not in tm.left.basis_indices() or i2 not in tm.right.basis_indices():
        raise ConfigError(f"{b1} (x) {b2} is not a basis tensor of this module")
    t = tm.pure(i1, i2)
    img = quasi_R(t)
    rep = Report("tensor theta")
    rep.add("Psi is an involution on this input", psi(psi(t)) == t)
    rep.data.update({"input": [b1, b2], "image": img.to_json(), "text": str(img)})
    return rep


# framed ---------------------------------------------------------------------------------

def _a1_pair(cfg: DatumConfig, m: int, n: int):
    if canonical.basis_type(cfg.datum) != "A1":
        raise canonical.UnsupportedTypeError("this command needs a base of type A1 (framed type A2)")
    if m < 0 or n < 0:
        raise ConfigError("--m and --n must be nonnegative")


def framed_verify_cb(cfg: DatumConfig, m: int, n: int) -> Report:
    _a1_pair(cfg, m, n)
    return verify_cb_correspondence(m, n)


def framed_verify_pairings(cfg: DatumConfig, m: int, n: int, max_degree: int) -> Report:
    _a1_pair(cfg, m, n)
    return verify_two_pairings(m, n, max_degree)


def framed_verify_positivity(cfg: DatumConfig, xi_text: str, lam_text: str,
                             framed_side: bool = True, tensor_side: bool = True) -> Report:
    xi, lam = cfg.weight(xi_text), cfg.weight(lam_text)
    return verify_positivity(cfg.datum, xi, lam, framed_side=framed_side, tensor_side=tensor_side)


def framed_phi(cfg: DatumConfig, xi_text: str, lam_text: str, word: str) -> Report:
    xi, lam = cfg.weight(xi_text), cfg.weight(lam_text)
    fc = FramedConstruction(cfg.datum, xi, lam)
    x = falg.parse_word(word, fc.full)
    rep = Report("framed phi")
    try:
        img = fc.phi(x)
    except ValueError as exc:
        rep.add("input lies in f theta_lambda f", False, {"reason": str(exc)})
        return rep
    rep.add("input lies in f theta_lambda f", True)
    rep.add("image lies in the tensor lattice over Z[v^-1]", img.in_lattice())
    rep.data.update({"input": word, "theta_lambda": falg.format_word(fc.theta, fc.full),
                     "image": img.to_json(), "text": str(img)})
    return rep


# crystal ---------------------------------------------------------------------------------

def crystal_check(suite: str) -> Report:
    return crystal.run_suite(suite)
