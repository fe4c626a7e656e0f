"""Certified linear algebra over Q(v) for sparse vectors with Laurent entries.

Strategy: choose pivots by evaluating at a random point modulo a large prime,
solve the resulting square system exactly with fraction-free elimination, then
check the answer exactly on every coordinate. A nonzero minor modulo p proves
independence; exact verification proves membership. An unlucky evaluation
point only costs a retry, never a wrong answer.
"""

from __future__ import annotations

import random
from typing import Hashable, Sequence

from ._backend import kernels
from .coeff import ONE, ZERO, Coeff, LaurentPoly, RationalFunc, poly_gcd, simplify

PRIME = (1 << 61) - 1
_MAX_TRIES = 6

Vector = dict  # Hashable key -> Coeff

__all__ = [
    "PRIME",
    "Vector",
    "SolveFailure",
    "rank",
    "solve_in_span",
    "independent_subset",
    "kernel_relations",
    "determinant",
    "SquareSystem",
    "invert_matrix",
    "vec_add",
    "vec_scale",
    "vec_sub",
    "vec_is_zero",
]

_rng = random.Random(20250101)


class SolveFailure(RuntimeError):
    """Raised when exact verification keeps failing; indicates a bug, not bad luck."""


# small vector helpers ----------------------------------------------------

def vec_add(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(a: Vector, c) -> Vector:
    if not c:
        return {}
    out = {}
    for k, x in a.items():
        y = x * c
        if y:
            out[k] = y
    return out


def vec_sub(a: Vector, b: Vector) -> Vector:
    return vec_add(a, vec_scale(b, -1))


def vec_is_zero(a: Vector) -> bool:
    return not any(a.values())


# denominators -------------------------------------------------------------

def _laurentize(vec: Vector) -> tuple:
    """Return ``(D, w)`` with ``D`` a Laurent polynomial and ``w = D * vec`` Laurent."""
    dens = [x.den for x in vec.values() if isinstance(x, RationalFunc) and x.try_laurent() is None]
    if not dens:
        return ONE, {k: simplify(x) for k, x in vec.items() if x}
    lcm: tuple = (1,)
    for d in dens:
        g = poly_gcd(lcm, d)
        prod = kernels.poly_mul(lcm, d)
        lp = LaurentPoly({i: c for i, c in enumerate(prod)}).exact_div(
            LaurentPoly({i: c for i, c in enumerate(g)})
        )
        lcm = tuple(lp.coefficient(i) for i in range(lp.max_exp() + 1))
    scale = LaurentPoly({i: c for i, c in enumerate(lcm)})
    out = {}
    for k, x in vec.items():
        y = simplify(x * scale)
        if not isinstance(y, LaurentPoly):  # pragma: no cover - lcm guarantees this
            raise AssertionError("denominator clearing failed")
        if y:
            out[k] = y
    return scale, out


# modular evaluation -------------------------------------------------------

class _Point:
    def __init__(self):
        self.x = _rng.randrange(2, PRIME - 1)
        self.xinv = pow(self.x, PRIME - 2, PRIME)

    def ev(self, c: LaurentPoly) -> int:
        return kernels.lp_eval_mod(c._t, self.x, self.xinv, PRIME)


def _modular_rows(vectors: Sequence[Vector], keys: list, pt: _Point) -> list:
    index = {k: j for j, k in enumerate(keys)}
    rows = []
    for vec in vectors:
        row = [0] * len(keys)
        for k, c in vec.items():
            row[index[k]] = pt.ev(c)
        rows.append(row)
    return rows


# exact determinants -------------------------------------------------------

def determinant(matrix: list) -> LaurentPoly:
    """Bareiss fraction-free determinant of a square Laurent matrix."""
    n = len(matrix)
    if n == 0:
        return ONE
    m = [[simplify(x) if not isinstance(x, int) else LaurentPoly.from_int(x) for x in row] for row in matrix]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev) if prev != ONE else num
            m[i][k] = ZERO
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _cramer(cols: list, rhs: list) -> tuple:
    """Solve ``sum_j x_j cols[j] = rhs`` for a nonsingular square system.

    Returns ``(det, numerators)`` so that ``x_j = numerators[j] / det``.
    """
    r = len(cols)
    mat = [[cols[j][i] for j in range(r)] for i in range(r)]
    det = determinant(mat)
    if not det:
        raise SolveFailure("pivot minor vanished exactly")
    nums = []
    for j in range(r):
        mj = [row[:] for row in mat]
        for i in range(r):
            mj[i][j] = rhs[i]
        nums.append(determinant(mj))
    return det, nums


def _quotient(num: LaurentPoly, den: LaurentPoly) -> Coeff:
    if not num:
        return ZERO
    try:
        return num.exact_div(den)
    except ArithmeticError:
        return simplify(RationalFunc.from_laurent(num, den))


class SquareSystem:
    """A nonsingular square Laurent matrix prepared for repeated exact solves.

    ``matrix[a][b]`` is row ``a``, column ``b``; ``solve(rhs)`` returns ``x``
    with ``matrix @ x == rhs`` using the adjugate, so each solve costs only
    a matrix-vector product and ``r`` divisions by the determinant.
    """

    def __init__(self, matrix: list):
        self.size = len(matrix)
        self.matrix = [[simplify(x) if not isinstance(x, int) else LaurentPoly.from_int(x) for x in row]
                       for row in matrix]
        self.det = determinant(self.matrix)
        if not self.det:
            raise SolveFailure("square system is singular")
        r = self.size
        adj = [[ZERO] * r for _ in range(r)]
        if r == 1:
            adj[0][0] = ONE
        else:
            for a in range(r):
                for b in range(r):
                    minor = [row[:b] + row[b + 1:] for k, row in enumerate(self.matrix) if k != a]
                    d = determinant(minor)
                    adj[b][a] = d if (a + b) % 2 == 0 else -d
        self.adjugate = adj

    def solve(self, rhs: Sequence) -> list:
        out = []
        for row in self.adjugate:
            acc = ZERO
            for c, y in zip(row, rhs):
                if c and y:
                    acc = acc + c * y
            acc = simplify(acc)
            if isinstance(acc, LaurentPoly):
                out.append(_quotient(acc, self.det))
            else:
                out.append(simplify(acc / RationalFunc.coerce(self.det)))
        return out


def invert_matrix(matrix: list) -> list:
    """Inverse of a square matrix over Q(v) by Gauss-Jordan elimination.

    Raises :class:`SolveFailure` if the matrix is singular.
    """
    n = len(matrix)
    rows = [[RationalFunc.coerce(x) for x in row] + [RationalFunc.coerce(1 if a == b else 0) for b in range(n)]
            for a, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise SolveFailure("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = RationalFunc.coerce(1) / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [[simplify(x) for x in row[n:]] for row in rows]


# public API ---------------------------------------------------------------

def _all_keys(vectors: Sequence[Vector]) -> list:
    keys = set()
    for vec in vectors:
        keys.update(k for k, c in vec.items() if c)
    return sorted(keys, key=_sort_key)


def _sort_key(k: Hashable):
    return (repr(type(k)), k) if not isinstance(k, tuple) else ("", k)


def independent_subset(vectors: Sequence[Vector]) -> tuple:
    """Return ``(indices, pivot_keys)``: a certified-independent subset.

    Independence is proven by a nonzero minor modulo p; maximality is not
    proven here (see ``rank``).
    """
    lvecs = [_laurentize(v)[1] for v in vectors]
    keys = _all_keys(lvecs)
    if not keys:
        return [], []
    pt = _Point()
    rows = _modular_rows(lvecs, keys, pt)
    prow, pcol = kernels.echelon_mod_p(rows, PRIME)
    return list(prow), [keys[j] for j in pcol]


class _Basis:
    """An independent subset with its pivot minor, ready for exact solves."""

    def __init__(self, lvecs: list, indices: list, pivot_keys: list):
        self.lvecs = lvecs
        self.indices = indices
        self.pivot_keys = pivot_keys
        self.cols = [[lvecs[j].get(k, ZERO) for k in pivot_keys] for j in indices]

    def express(self, target: Vector) -> tuple | None:
        """Exact coefficients of a Laurent ``target`` in this subset, or ``None``."""
        if not self.indices:
            return (ONE, []) if vec_is_zero(target) else None
        rhs = [target.get(k, ZERO) for k in self.pivot_keys]
        det, nums = _cramer(self.cols, rhs)
        # exact check: det * target == sum nums_j * vec_j on every key
        acc: dict = {}
        for k, c in target.items():
            acc[k] = c * det
        for n, j in zip(nums, self.indices):
            if not n:
                continue
            for k, c in self.lvecs[j].items():
                s = acc.get(k, ZERO) - n * c
                acc[k] = s
        if any(acc.values()):
            return None
        return det, nums


def _build_basis(vectors: Sequence[Vector], certify: bool) -> tuple:
    scales_l = [_laurentize(v) for v in vectors]
    lvecs = [w for _, w in scales_l]
    keys = _all_keys(lvecs)
    for _ in range(_MAX_TRIES):
        if not keys:
            return scales_l, _Basis(lvecs, [], [])
        pt = _Point()
        rows = _modular_rows(lvecs, keys, pt)
        prow, pcol = kernels.echelon_mod_p(rows, PRIME)
        basis = _Basis(lvecs, list(prow), [keys[j] for j in pcol])
        if not certify:
            return scales_l, basis
        chosen = set(prow)
        ok = True
        for j, w in enumerate(lvecs):
            if j in chosen:
                continue
            if basis.express(w) is None:
                ok = False
                break
        if ok:
            return scales_l, basis
    raise SolveFailure("could not certify a basis after repeated evaluation points")


def rank(vectors: Sequence[Vector]) -> int:
    """Exact rank over Q(v) (lower bound by a modular minor, upper bound by exact solves)."""
    _, basis = _build_basis(vectors, certify=True)
    return len(basis.indices)


def solve_in_span(vectors: Sequence[Vector], target: Vector, certify: bool = True) -> list | None:
    """Coefficients ``c`` with ``sum c_j vectors[j] == target``, or ``None``.

    Coefficients on vectors outside the chosen independent subset are zero.
    With ``certify`` the negative answer is exact; without it, a ``None`` can
    only be trusted when the vectors are independent.
    """
    scales_l, basis = _build_basis(vectors, certify=certify)
    tscale, tl = _laurentize(target)
    for attempt in range(_MAX_TRIES):
        res = basis.express(tl)
        if res is not None:
            det, nums = res
            coeffs: list = [ZERO] * len(vectors)
            for n, j in zip(nums, basis.indices):
                # vectors[j] = lvecs[j] / scale_j and target = tl / tscale
                c = _quotient(n, det)
                scale_j = scales_l[j][0]
                if scale_j != ONE or tscale != ONE:
                    c = simplify(RationalFunc.coerce(c) * RationalFunc.coerce(scale_j) / RationalFunc.coerce(tscale))
                coeffs[j] = c
            return coeffs
        if certify:
            return None
        # uncertified basis: retry with a fresh point before giving up
        scales_l, basis = _build_basis(vectors, certify=attempt == _MAX_TRIES - 2)
    return None


def kernel_relations(vectors: Sequence[Vector]) -> list:
    """A basis of linear relations among ``vectors`` (each a dict index -> Coeff)."""
    scales_l, basis = _build_basis(vectors, certify=True)
    chosen = set(basis.indices)
    rels = []
    for j, w in enumerate(basis.lvecs):
        if j in chosen:
            continue
        det, nums = basis.express(w)
        # det * lvec_j - sum nums_k lvec_k = 0 ; lvec = scale * vec
        rel = {j: det * scales_l[j][0]}
        for n, k in zip(nums, basis.indices):
            if n:
                rel[k] = -(n * scales_l[k][0])
        rels.append(rel)
    return rels
