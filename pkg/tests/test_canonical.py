import pytest
from hypothesis import given, strategies as st

from framedcb import canonical, falg
from framedcb.canonical import A1, A2Left, A2Right, CBIndex, UnsupportedTypeError, cb_list, cb_word_form, expand_cb
from framedcb.cartan import cartan_type, frame
from framedcb.coeff import ONE, Lattice, LaurentPoly, lattice_test, positivity_test, quantum_binomial, simplify
from framedcb.falg import FreeElement, bilinear_form

TA1 = cartan_type("A1")
TA2 = cartan_type("A2")
FRAMED = frame(TA1).full  # nodes i, i'


def word(datum, text):
    return FreeElement.parse(datum, text)


def weyl_dimension_a2(a, b):
    return (a + 1) * (b + 1) * (a + b + 2) // 2


# indices and enumeration --------------------------------------------------------

def test_cb_list_examples():
    assert cb_list("A1", (3,)) == [A1(3)]
    assert cb_list("A2", (1, 1)) == [A2Left(0, 1, 1), A2Left(1, 1, 0)]
    assert cb_list("A2", (0, 0)) == [A2Left(0, 0, 0)]


def test_overlap_uses_left_representative():
    assert A2Right(1, 2, 1) == A2Left(1, 2, 1)
    with pytest.raises(ValueError):
        CBIndex("A2R", (1, 2, 1))
    with pytest.raises(ValueError):
        A2Left(2, 1, 0)


def test_index_text_roundtrip():
    for b in (A1(4), A2Left(1, 3, 2), A2Right(0, 2, 1)):
        assert CBIndex.parse(str(b)) == b


def test_word_forms():
    assert cb_word_form(A1(2)) == word(TA1, "i(2)")
    assert cb_word_form(A2Left(1, 2, 1), FRAMED) == word(FRAMED, "i.i'(2).i")
    for n in range(4):
        assert cb_word_form(A2Right(0, n, 0), FRAMED) == (word(FRAMED, f"i({n})") if n else FreeElement.one(FRAMED))


def test_unsupported_type():
    with pytest.raises(UnsupportedTypeError):
        cb_list("A3", (1, 0, 0))
    with pytest.raises(UnsupportedTypeError):
        canonical.coordinates(word(cartan_type("A3"), "i"))


# expansion ----------------------------------------------------------------------

def test_expand_unit_coordinates():
    for b in canonical.all_indices_up_to("A2", 5):
        assert expand_cb(cb_word_form(b)).coords == {b: ONE}


def test_expand_iji():
    exp = expand_cb(word(TA2, "i.j.i"))
    assert exp.coords == {A2Right(0, 2, 1): ONE, A2Right(1, 2, 0): ONE}


@pytest.mark.parametrize("m,n", [(1, 0), (2, 0), (2, 1), (3, 1), (3, 0), (4, 2)])
def test_expansion_of_non_basis_monomial_matches_binomial_formula(m, n):
    # theta_i^(l) theta_i'^(n) theta_i^(m-k) with n < l + m - k is not a basis element
    for k in range(m + 1):
        for l in range(n + 1):
            if n >= l + m - k:
                continue
            x = word(FRAMED, f"i({l}).i'({n}).i({m - k})")
            want = {}
            for s in range(m - k + 1):
                left, right = m - k - s, -m + n + k + s
                if left < 0 or right < 0:
                    continue
                c = quantum_binomial(m - n - k + l, s)
                if c:
                    b = A2Right(right, m - k + l, left)
                    want[b] = want.get(b, 0) + c
            got = expand_cb(x).coords
            assert {b: simplify(c) for b, c in got.items()} == want


def test_expansion_is_verified_in_f():
    x = word(TA2, "j.i(2).j") + word(TA2, "i.j(2).i").scale(LaurentPoly.monomial(-1))
    exp = expand_cb(x)
    assert falg.equals_in_f(exp.to_element(TA2), x)


# string statistics -----------------------------------------------------------------

def test_t_stats_examples():
    for k in range(5):
        assert canonical.t_stats(A1(k), "i") == (k, k)
    assert canonical.t_stats(A2Left(0, 0, 0), "i") == (0, 0)
    for b in canonical.all_indices_up_to("A2", 5):
        if b.family == "A2L":
            assert canonical.t_left(b, "i") == b.params[0]


def test_t_stats_respect_sigma():
    for b in canonical.all_indices_up_to("A2", 5):
        s = canonical.sigma_index(b)
        assert cb_word_form(s) == cb_word_form(b).sigma()
        for i in range(2):
            assert canonical.t_left(b, i) == canonical.t_right(s, i)


def test_b_lambda_examples():
    for n in range(5):
        assert canonical.b_lambda_subset(TA1.weight((n,))) == [A1(k) for k in range(n + 1)]
    assert canonical.b_lambda_subset(TA2.weight((0, 0))) == [A2Left(0, 0, 0)]
    assert len(canonical.b_lambda_subset(TA2.weight((1, 0)))) == 3
    assert [str(b) for b in canonical.b_lambda_subset(TA2.weight((1, 1)))] == [
        "A2L[0,0,0]", "A2L[0,1,0]", "A2R[0,1,0]", "A2L[0,1,1]", "A2L[1,1,0]", "A2L[0,2,1]", "A2R[1,2,0]", "A2L[1,2,1]",
    ]


@pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (0, 3)])
def test_b_lambda_size_is_weyl_dimension(a, b):
    assert len(canonical.b_lambda_subset(TA2.weight((a, b)))) == weyl_dimension_a2(a, b)


# structural properties ------------------------------------------------------------

PAIRS_UP_TO_6 = [
    (b1, b2)
    for b1 in canonical.all_indices_up_to("A2", 6)
    for b2 in canonical.all_indices_up_to("A2", 6)
    if b1.degree() + b2.degree() <= 6 and b1.degree() and b2.degree()
]


def test_products_are_positive():
    for b1, b2 in PAIRS_UP_TO_6:
        exp = canonical.coordinates(cb_word_form(b1) * cb_word_form(b2))
        assert exp.is_positive(), (b1, b2, exp)


def test_comultiplication_is_positive():
    for b in canonical.all_indices_up_to("A2", 6):
        coords = {}
        for (w1, w2), c in falg.comult(cb_word_form(b)).items():
            e1 = canonical.coordinates(FreeElement.from_word(TA2, w1)).coords
            e2 = canonical.coordinates(FreeElement.from_word(TA2, w2)).coords
            for a1, x1 in e1.items():
                for a2, x2 in e2.items():
                    coords[(a1, a2)] = coords.get((a1, a2), 0) + c * x1 * x2
        for key, c in coords.items():
            c = simplify(c)
            assert not c or positivity_test(c), (b, key, c)


def test_leading_term_property():
    for b in canonical.all_indices_up_to("A2", 4):
        for i in range(2):
            if canonical.t_left(b, i):
                continue
            for n in range(1, 4):
                prod = FreeElement.from_word(TA2, ((i, n),)) * cb_word_form(b)
                exp = canonical.coordinates(prod)
                assert exp.is_positive()
                exact = [b2 for b2 in exp.support() if canonical.t_left(b2, i) == n]
                assert len(exact) == 1 and exp[exact[0]] == ONE
                assert all(canonical.t_left(b2, i) >= n for b2 in exp.support())


@pytest.mark.parametrize("degree", range(6))
def test_almost_orthonormal(degree):
    for nu in canonical.weights_of_degree(2, degree):
        idx = cb_list("A2", nu)
        for b1 in idx:
            for b2 in idx:
                val = bilinear_form(cb_word_form(b1), cb_word_form(b2))
                delta = 1 if b1 == b2 else 0
                assert lattice_test(simplify(val - delta), Lattice.VINV_A)


def test_basis_elements_are_bar_invariant():
    for b in canonical.all_indices_up_to("A2", 5):
        x = cb_word_form(b)
        assert x.bar() == x


@given(st.sampled_from(list(canonical.all_indices_up_to("A2", 4))), st.sampled_from(list(canonical.all_indices_up_to("A2", 3))))
def test_expansions_roundtrip_through_f(b1, b2):
    x = cb_word_form(b1) * cb_word_form(b2).scale(LaurentPoly({1: 2, -1: -1}))
    exp = canonical.coordinates(x, verify=True)
    assert exp.is_integral()
