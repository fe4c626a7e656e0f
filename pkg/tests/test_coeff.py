import sympy
from hypothesis import given, strategies as st

from framedcb.coeff import (
    ONE,
    V,
    ZERO,
    Lattice,
    LaurentPoly,
    RationalFunc,
    bar,
    coeff_from_json,
    lattice_test,
    positivity_test,
    quantum_binomial,
    quantum_factorial,
    quantum_integer,
    simplify,
)

v = sympy.Symbol("v")

laurent = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)
nonzero_laurent = laurent.filter(bool)


def to_sympy(x):
    if isinstance(x, LaurentPoly):
        return sum((c * v**e for e, c in x.items()), sympy.Integer(0))
    num = sum((c * v**k for k, c in enumerate(x.num)), sympy.Integer(0))
    den = sum((c * v**k for k, c in enumerate(x.den)), sympy.Integer(0))
    return num / den


# quantum numbers --------------------------------------------------------------

def test_quantum_integer_values():
    assert quantum_integer(0) == ZERO
    assert quantum_integer(1) == ONE
    assert quantum_integer(3) == LaurentPoly({2: 1, 0: 1, -2: 1})
    assert quantum_integer(-2) == -quantum_integer(2)


def test_quantum_binomial_values():
    assert quantum_binomial(7, 0) == ONE
    assert quantum_binomial(2, 1) == LaurentPoly({1: 1, -1: 1})
    assert quantum_binomial(4, 2) == LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})


def test_quantum_binomial_against_sympy_product_formula():
    for n in range(7):
        for k in range(n + 1):
            def qint(m):
                return (v**m - v**-m) / (v - 1 / v)

            num = sympy.prod([qint(n - j) for j in range(k)])
            den = sympy.prod([qint(j) for j in range(1, k + 1)])
            assert sympy.simplify(to_sympy(quantum_binomial(n, k)) - num / den) == 0


def test_quantum_binomial_negative_top():
    # [-1 choose 2] = [-1][-2]/[2]! = [1][2]/[2] = 1 after the sign cancels
    assert quantum_binomial(-1, 2) == ONE


def test_quantum_factorial_is_product():
    assert quantum_factorial(3) == quantum_integer(2) * quantum_integer(3)


# bar ------------------------------------------------------------------------

def test_bar_examples():
    assert bar(LaurentPoly({2: 1, -1: 3})) == LaurentPoly({-2: 1, 1: 3})
    assert bar(quantum_integer(5)) == quantum_integer(5)
    x = RationalFunc.from_laurent(V, ONE - LaurentPoly.monomial(-2))
    want = RationalFunc.from_laurent(LaurentPoly.monomial(-1), ONE - LaurentPoly.monomial(2))
    assert bar(x) == want


@given(laurent, nonzero_laurent)
def test_bar_is_an_involutive_field_map(a, b):
    r = a / b
    assert bar(bar(r)) == r
    assert bar(a * b) == bar(a) * bar(b)
    assert bar(r) == bar(a) / bar(b)


@given(laurent, nonzero_laurent)
def test_rational_bar_matches_substitution(a, b):
    r = a / b
    expected = sympy.simplify(to_sympy(r).subs(v, 1 / v))
    assert sympy.simplify(to_sympy(bar(r)) - expected) == 0


# arithmetic against sympy ---------------------------------------------------------

@given(laurent, laurent)
def test_laurent_ring_ops(a, b):
    assert sympy.expand(to_sympy(a + b) - to_sympy(a) - to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a - b) - to_sympy(a) + to_sympy(b)) == 0


@given(laurent, nonzero_laurent, laurent, nonzero_laurent)
def test_rational_field_ops(a, b, c, d):
    x, y = a / b, c / d
    sx, sy = to_sympy(x), to_sympy(y)
    assert sympy.simplify(to_sympy(x + y) - (sx + sy)) == 0
    assert sympy.simplify(to_sympy(x * y) - sx * sy) == 0
    if y:
        assert sympy.simplify(to_sympy(x / y) - sx / sy) == 0


@given(laurent, nonzero_laurent)
def test_rational_is_reduced(a, b):
    r = a / b
    num = sympy.Poly(list(reversed(r.num)) or [0], v)
    den = sympy.Poly(list(reversed(r.den)), v)
    assert sympy.gcd(num, den).degree() == 0
    assert r.den[-1] > 0


@given(laurent, nonzero_laurent)
def test_exact_division_roundtrip(a, b):
    assert (a * b).exact_div(b) == a
    assert simplify((a * b) / b) == a


@given(laurent, nonzero_laurent)
def test_equal_values_hash_alike(a, b):
    r = (a * b) / b
    assert r == a
    assert hash(r) == hash(a)


@given(laurent, nonzero_laurent)
def test_json_roundtrip(a, b):
    assert coeff_from_json(a.to_json()) == a
    r = a / b
    assert coeff_from_json(r.to_json()) == r


# lattices and positivity -------------------------------------------------------

def test_lattice_examples():
    assert lattice_test(LaurentPoly({0: 1, -1: 1}), Lattice.ZV_INV)
    assert not lattice_test(quantum_integer(2), Lattice.VINV_ZV_INV)
    r = RationalFunc.from_laurent(ONE, ONE - LaurentPoly.monomial(-2))
    assert lattice_test(r, Lattice.A_RING)
    assert not lattice_test(r, Lattice.VINV_A)
    assert not lattice_test(r, Lattice.ZV_INV)
    assert lattice_test(0, Lattice.VINV_ZV_INV)


def test_positivity_examples():
    assert positivity_test(quantum_binomial(4, 2))
    assert not positivity_test(LaurentPoly({1: 1, -1: -1}))
    assert positivity_test(ZERO)


@given(laurent)
def test_lattice_flavors_nest(a):
    if lattice_test(a, Lattice.VINV_ZV_INV):
        assert lattice_test(a, Lattice.ZV_INV)
    if lattice_test(a, Lattice.ZV_INV):
        assert lattice_test(a, Lattice.A_RING)
    if lattice_test(a, Lattice.VINV_A):
        assert lattice_test(a, Lattice.A_RING)


def test_string_forms():
    assert str(LaurentPoly({2: 1, 0: -3, -1: 1})) == "v^2 - 3 + v^-1"
    assert str(ZERO) == "0"
