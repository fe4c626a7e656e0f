"""Exact coefficients: Laurent polynomials in ``v`` and rational functions of ``v``.

``LaurentPoly`` is the ring Z[v, 1/v]; ``RationalFunc`` is the field Q(v).
Mixed arithmetic promotes to ``RationalFunc``; ``simplify`` demotes back when
the denominator is a monomial.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

from ._backend import kernels

__all__ = [
    "LaurentPoly",
    "RationalFunc",
    "Coeff",
    "V",
    "ONE",
    "ZERO",
    "Lattice",
    "quantum_integer",
    "quantum_factorial",
    "quantum_binomial",
    "bar",
    "lattice_test",
    "positivity_test",
    "simplify",
    "as_coeff",
    "coeff_is_zero",
    "coeff_from_json",
]


class LaurentPoly:
    """Element of Z[v, 1/v] stored as a sparse exponent -> coefficient map."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[int, int] | None = None):
        if terms is None:
            self._t: dict = {}
        else:
            self._t = {int(e): int(c) for e, c in terms.items() if c}
        self._h = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._t = terms
        obj._h = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coefficient} if coefficient else {})

    @classmethod
    def from_int(cls, n: int) -> "LaurentPoly":
        return cls._raw({0: n} if n else {})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coefficient(self, exponent: int) -> int:
        return self._t.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def min_exp(self) -> int:
        if not self._t:
            raise ValueError("zero polynomial has no exponents")
        return min(self._t)

    def max_exp(self) -> int:
        if not self._t:
            raise ValueError("zero polynomial has no exponents")
        return max(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly._raw(kernels.lp_add(self._t, other._t))
        if isinstance(other, int):
            return LaurentPoly._raw(kernels.lp_add(self._t, {0: other} if other else {}))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly._raw(kernels.lp_mul(self._t, other._t))
        if isinstance(other, int):
            return LaurentPoly._raw(kernels.lp_scale(self._t, other, 0))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (e, c), = self._t.items()
                if abs(c) == 1:
                    return LaurentPoly._raw({e * n: c ** (-n)})
            raise ValueError("negative power of a non-unit Laurent polynomial")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if isinstance(other, LaurentPoly):
            return RationalFunc.from_laurent(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return RationalFunc.from_laurent(LaurentPoly.from_int(other), self)
        return NotImplemented

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        return LaurentPoly._raw(kernels.lp_scale(self._t, 1, k))

    def exact_div(self, other: "LaurentPoly | int") -> "LaurentPoly":
        """Quotient in Z[v, 1/v]; raises ``ArithmeticError`` when not exact."""
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not other:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self:
            return ZERO
        a_lo, b_lo = self.min_exp(), other.min_exp()
        a = _dense(self._t, a_lo)
        b = _dense(other._t, b_lo)
        q, r = _pdivmod(a, b)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return LaurentPoly._raw({i + a_lo - b_lo: c for i, c in enumerate(q) if c})

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.exact_div(self)
        except ArithmeticError:
            return False
        return True

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: c for e, c in self._t.items()})

    def eval_mod(self, x: int, xinv: int, p: int) -> int:
        return kernels.lp_eval_mod(self._t, x, xinv, p)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        if isinstance(other, RationalFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {str(e): str(c) for e, c in sorted(self._t.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data.items()})

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t, reverse=True):
            c = self._t[e]
            if e == 0:
                mono = str(abs(c))
            else:
                base = "v" if e == 1 else f"v^{e}"
                mono = base if abs(c) == 1 else f"{abs(c)}*{base}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out


ZERO = LaurentPoly()
ONE = LaurentPoly.from_int(1)
V = LaurentPoly.monomial(1)


# dense polynomial helpers (ascending coefficient tuples) -----------------

def _dense(terms: Mapping[int, int], lo: int) -> tuple:
    hi = max(terms)
    out = [0] * (hi - lo + 1)
    for e, c in terms.items():
        out[e - lo] = c
    return tuple(out)


def _trim(a: list) -> tuple:
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _padd(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return _trim(out)


def _psub(a: tuple, b: tuple) -> tuple:
    return _padd(a, tuple(-x for x in b))


def _pscale(a: tuple, c: int) -> tuple:
    return tuple(x * c for x in a) if c else ()


def _pdivmod(a: tuple, b: tuple) -> tuple:
    """Division in Q[v] restricted to integer results; remainder nonzero if inexact."""
    if not b:
        raise ZeroDivisionError
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return (), tuple(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        if c % lead:
            return (), (1,)
        f = c // lead
        q[k - db] = f
        for j, y in enumerate(b):
            a[k - db + j] -= f * y
    return _trim(q), _trim(a[:db])


def _content(a: tuple) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def _primpart(a: tuple) -> tuple:
    if not a:
        return a
    c = _content(a)
    if a[-1] < 0:
        c = -c
    return tuple(x // c for x in a)


def _prem(a: tuple, b: tuple) -> tuple:
    """Pseudo-remainder of ``a`` by ``b`` in Z[v]."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [x * lead for x in a]
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        a = list(_trim(a))
    return tuple(a)


def poly_gcd(a: tuple, b: tuple) -> tuple:
    """Greatest common divisor in Z[v] with positive leading coefficient."""
    if not a:
        return _primpart(b) if not b else tuple(x * (1 if b[-1] > 0 else -1) for x in b)
    if not b:
        return tuple(x * (1 if a[-1] > 0 else -1) for x in a)
    # Factor out powers of v first; this is the common case.
    za = next(i for i, x in enumerate(a) if x)
    zb = next(i for i, x in enumerate(b) if x)
    z = min(za, zb)
    a, b = a[za:], b[zb:]
    c = gcd(_content(a), _content(b))
    if len(a) == 1 or len(b) == 1:
        return (0,) * z + (c,)
    a, b = _primpart(a), _primpart(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primpart(r) if r else ()
    g = _primpart(a)
    return (0,) * z + tuple(x * c for x in g)


class RationalFunc:
    """Element of Q(v) as a reduced pair of integer polynomials in ``v``."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, numerator: Iterable[int], denominator: Iterable[int] = (1,)):
        num = _trim(list(numerator))
        den = _trim(list(denominator))
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)
        self._h = None

    @classmethod
    def _raw(cls, num: tuple, den: tuple) -> "RationalFunc":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        obj._h = None
        return obj

    @classmethod
    def from_laurent(cls, num: LaurentPoly | int, den: LaurentPoly | int = 1) -> "RationalFunc":
        if isinstance(num, int):
            num = LaurentPoly.from_int(num)
        if isinstance(den, int):
            den = LaurentPoly.from_int(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls._raw((), (1,))
        lo_n, lo_d = num.min_exp(), den.min_exp()
        n = _dense(num._t, lo_n)
        d = _dense(den._t, lo_d)
        shift = lo_n - lo_d
        if shift > 0:
            n = (0,) * shift + n
        elif shift < 0:
            d = (0,) * (-shift) + d
        return cls(n, d)

    @classmethod
    def coerce(cls, x: "Coeff | int") -> "RationalFunc":
        if isinstance(x, RationalFunc):
            return x
        return cls.from_laurent(x)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunc(_padd(self.num, o.num), self.den)
        n = _padd(kernels.poly_mul(self.num, o.den), kernels.poly_mul(o.num, self.den))
        return RationalFunc(n, kernels.poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc._raw(tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return RationalFunc(kernels.poly_mul(self.num, o.num), kernels.poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(kernels.poly_mul(self.num, o.den), kernels.poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunc(self.den, self.num) ** (-n)
        out = RationalFunc._raw((1,), (1,))
        for _ in range(n):
            out = out * self
        return out

    def bar(self) -> "RationalFunc":
        # f(1/v) / g(1/v) = v^(deg g - deg f) * rev(f) / rev(g)
        if not self.num:
            return self
        shift = (len(self.den) - 1) - (len(self.num) - 1)
        n = tuple(reversed(self.num))
        d = tuple(reversed(self.den))
        if shift > 0:
            n = (0,) * shift + n
        elif shift < 0:
            d = (0,) * (-shift) + d
        return RationalFunc(n, d)

    def degree(self) -> int:
        """``deg(num) - deg(den)``: the order of growth at ``v -> infinity``."""
        if not self.num:
            raise ValueError("zero has no degree")
        return (len(self.num) - 1) - (len(self.den) - 1)

    def as_laurent(self) -> LaurentPoly:
        """Return the equal Laurent polynomial; ``ArithmeticError`` if there is none."""
        out = self.try_laurent()
        if out is None:
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return out

    def try_laurent(self) -> LaurentPoly | None:
        d = self.den
        if len(d) - 1 != next(i for i, x in enumerate(d) if x):
            return None
        k = len(d) - 1
        c = d[-1]
        if any(x % c for x in self.num):
            return None
        return LaurentPoly._raw({i - k: x // c for i, x in enumerate(self.num) if x})

    def __eq__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._h is None:
            lp = self.try_laurent()
            self._h = hash(lp) if lp is not None else hash((self.num, self.den))
        return self._h

    def __repr__(self):
        return f"RationalFunc({self})"

    def __str__(self):
        lp = self.try_laurent()
        if lp is not None:
            return str(lp)
        n = LaurentPoly({i: c for i, c in enumerate(self.num)})
        d = LaurentPoly({i: c for i, c in enumerate(self.den)})
        return f"({n})/({d})"

    def to_json(self) -> dict:
        return {
            "num": LaurentPoly({i: c for i, c in enumerate(self.num)}).to_json(),
            "den": LaurentPoly({i: c for i, c in enumerate(self.den)}).to_json(),
        }


def _reduce(num: tuple, den: tuple) -> tuple:
    if not num:
        return (), (1,)
    g = poly_gcd(num, den)
    if g != (1,):
        num, r1 = _pdivmod(num, g)
        den, r2 = _pdivmod(den, g)
        assert not r1 and not r2
    if den[-1] < 0:
        num = tuple(-x for x in num)
        den = tuple(-x for x in den)
    return num, den


def _as_rf(x) -> RationalFunc | None:
    if isinstance(x, RationalFunc):
        return x
    if isinstance(x, (LaurentPoly, int)):
        return RationalFunc.from_laurent(x)
    return None


Coeff = Union[LaurentPoly, RationalFunc]


def simplify(x: "Coeff | int") -> Coeff:
    """Demote to ``LaurentPoly`` whenever the value lies in Z[v, 1/v]."""
    if isinstance(x, int):
        return LaurentPoly.from_int(x)
    if isinstance(x, RationalFunc):
        lp = x.try_laurent()
        return lp if lp is not None else x
    return x


def as_coeff(x) -> Coeff:
    if isinstance(x, (LaurentPoly, RationalFunc)):
        return x
    if isinstance(x, int):
        return LaurentPoly.from_int(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def coeff_is_zero(x) -> bool:
    return not x


def coeff_from_json(data: Mapping) -> Coeff:
    """Inverse of ``to_json`` for either coefficient type."""
    if "num" in data and "den" in data:
        num = LaurentPoly.from_json(data["num"])
        den = LaurentPoly.from_json(data["den"])
        if (num and num.min_exp() < 0) or den.min_exp() < 0:
            raise ValueError("rational function parts must be ordinary polynomials")
        num_list = [num.coefficient(e) for e in range(num.max_exp() + 1)] if num else []
        den_list = [den.coefficient(e) for e in range(den.max_exp() + 1)]
        return RationalFunc(num_list, den_list)
    return LaurentPoly.from_json(data)


# quantum combinatorics ----------------------------------------------------

@lru_cache(maxsize=None)
def quantum_integer(n: int) -> LaurentPoly:
    """``[n] = (v^n - v^-n) / (v - v^-1)``."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    m = abs(n)
    return LaurentPoly._raw({m - 1 - 2 * k: sign for k in range(m)})


@lru_cache(maxsize=None)
def quantum_factorial(m: int) -> LaurentPoly:
    if m < 0:
        raise ValueError("quantum factorial of a negative integer")
    out = ONE
    for k in range(1, m + 1):
        out = out * quantum_integer(k)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(n: int, m: int) -> LaurentPoly:
    """Gaussian binomial, computed by exact division of the defining products."""
    if m < 0:
        raise ValueError("lower index of a quantum binomial must be nonnegative")
    num = ONE
    den = ONE
    for k in range(m):
        num = num * (LaurentPoly.monomial(n - k) - LaurentPoly.monomial(-n + k))
    for k in range(1, m + 1):
        den = den * (LaurentPoly.monomial(k) - LaurentPoly.monomial(-k))
    try:
        return num.exact_div(den)
    except ArithmeticError as exc:  # pragma: no cover - would contradict integrality
        raise AssertionError(f"quantum binomial ({n}, {m}) left a remainder") from exc


def bar(x):
    """The ring involution ``v -> 1/v``."""
    if isinstance(x, int):
        return x
    return x.bar()


class Lattice(str, enum.Enum):
    ZV_INV = "Zv_inv"          # Z[1/v]
    VINV_ZV_INV = "vinvZv_inv"  # (1/v) Z[1/v]
    A_RING = "A_ring"          # Q(v) regular at v = infinity
    VINV_A = "vinvA"           # vanishing at v = infinity


def lattice_test(x: "Coeff | int", which: Lattice | str) -> bool:
    which = Lattice(which)
    x = simplify(as_coeff(x) if isinstance(x, int) else x)
    if isinstance(x, LaurentPoly):
        if not x:
            return True
        top = x.max_exp()
        if which in (Lattice.ZV_INV, Lattice.A_RING):
            return top <= 0
        return top < 0
    # genuinely rational: never in Z[1/v]
    if which in (Lattice.ZV_INV, Lattice.VINV_ZV_INV):
        return False
    if not x:
        return True
    d = x.degree()
    return d <= 0 if which is Lattice.A_RING else d < 0


def positivity_test(x: LaurentPoly) -> bool:
    """True iff every coefficient is nonnegative, i.e. ``x`` lies in N[v, 1/v]."""
    x = simplify(x)
    if not isinstance(x, LaurentPoly):
        return False
    return all(c > 0 for _, c in x.items())
