import pytest
from hypothesis import assume, given, strategies as st

from framedcb import canonical, falg
from framedcb.cartan import cartan_type, frame, odot
from framedcb.coeff import ONE, Lattice, LaurentPoly, lattice_test, positivity_test, quantum_binomial, quantum_integer, simplify
from framedcb.falg import FreeElement
from framedcb.hwmodule import (
    HighestWeightModule,
    act_E,
    act_E_divided,
    act_E_via_derivations,
    act_F,
    act_K,
    admissible_form,
    cb_of_Lambda,
    equals_in_Lambda,
    in_defining_ideal,
)

TA1 = cartan_type("A1")
TA2 = cartan_type("A2")
V = LaurentPoly.monomial(1)


def mono(e):
    return LaurentPoly.monomial(e)


def a1_module(n):
    return HighestWeightModule(TA1, (n,))


# actions --------------------------------------------------------------------------

def test_F_examples():
    for n in range(5):
        M = a1_module(n)
        assert equals_in_Lambda(act_F("i", n + 1, M.eta()), M.zero())
        assert not equals_in_Lambda(act_F("i", n, M.eta()), M.zero())
    M = a1_module(3)
    assert act_F("i", 0, M.eta()).carrier == M.eta().carrier
    twice = act_F("i", 1, act_F("i", 1, M.eta()))
    assert equals_in_Lambda(twice, act_F("i", 2, M.eta()).scale(quantum_integer(2)))


def test_E_examples():
    for n in range(5):
        M = a1_module(n)
        assert act_E("i", M.eta()).is_zero()
        for k in range(1, n + 1):
            lhs = act_E("i", act_F("i", k, M.eta()))
            rhs = act_F("i", k - 1, M.eta()).scale(quantum_integer(n - k + 1))
            assert equals_in_Lambda(lhs, rhs)


def test_E_commutes_with_theta_lambda():
    base = TA2
    fd = frame(base)
    for lam in ((1, 0), (2, 1)):
        big = odot(base.zero_weight(), base.weight(lam), fd)
        framed_mod = HighestWeightModule(fd.full, big)
        base_mod = HighestWeightModule(base, (0, 0))
        theta = FreeElement.from_word(fd.full, tuple((fd.frame_index(i), a) for i, a in enumerate(lam) if a))
        for nu in ((1, 0), (1, 1), (2, 1)):
            for w in falg.words_of_weight(base, nu):
                y = FreeElement.from_word(base, w)
                lifted = FreeElement._raw(fd.full, dict(y.terms))
                for i in range(base.rank):
                    lhs = act_E(i, framed_mod.element(theta * lifted)).carrier
                    ey = act_E(i, base_mod.element(y)).carrier
                    rhs = theta * FreeElement._raw(fd.full, dict(ey.terms))
                    assert falg.equals_in_f(lhs, rhs)


def test_K_examples():
    for n in range(4):
        M = a1_module(n)
        m = act_F("i", 1, M.eta())
        assert act_K((0,), m).carrier == m.carrier
        assert act_K((1,), M.eta()).carrier == M.eta().carrier.scale(mono(n))
        assert act_K((-1,), m).carrier == m.carrier.scale(mono(-(n - 2)))


def test_E_agrees_with_derivation_formula():
    M = HighestWeightModule(TA2, (2, 1))
    for d in range(5):
        for nu in canonical.weights_of_degree(2, d):
            for w in falg.words_of_weight(TA2, nu):
                m = M.element(FreeElement.from_word(TA2, w))
                for i in range(2):
                    a = act_E(i, m).carrier
                    b = act_E_via_derivations(i, m).carrier
                    assert falg.equals_in_f(a, b)


# quotient equality ------------------------------------------------------------------

def test_quotient_examples():
    for n in range(4):
        M = a1_module(n)
        top = FreeElement.from_word(TA1, ((0, n + 1),))
        assert equals_in_Lambda(M.element(top), M.zero())
        assert not equals_in_Lambda(M.eta(), M.zero())
    fd = frame(TA1)
    for m, n in ((1, 1), (2, 0), (0, 2)):
        Mf = HighestWeightModule(fd.full, odot(TA1.weight((m,)), TA1.weight((n,)), fd))
        x = FreeElement.from_word(fd.full, ((0, m + 1),))
        assert equals_in_Lambda(Mf.element(x), Mf.zero())


def test_distinct_weights_are_never_equal():
    M = a1_module(2)
    assert not equals_in_Lambda(M.eta(), act_F("i", 1, M.eta()))


@pytest.mark.parametrize("lam", [(1, 0), (1, 1), (2, 1)])
def test_quotient_test_matches_ideal_span(lam):
    M = HighestWeightModule(TA2, lam)
    for d in range(1, 5):
        for nu in canonical.weights_of_degree(2, d):
            for w in falg.words_of_weight(TA2, nu):
                x = FreeElement.from_word(TA2, w)
                assert M.element(x).is_zero() == in_defining_ideal(M, x)
            words = falg.words_of_weight(TA2, nu)
            if len(words) > 1:
                x = FreeElement.from_word(TA2, words[0]) - FreeElement.from_word(TA2, words[-1]).scale(V)
                assert M.element(x).is_zero() == in_defining_ideal(M, x)


# the form -----------------------------------------------------------------------

# frozen output of the peel-off recursion: (F^(k) eta, F^(k) eta) in Lambda_n of type A1
A1_FORM_TABLE = {
    (2, 1): {0: 1, -2: 1},
    (3, 1): {0: 1, -2: 1, -4: 1},
    (3, 2): {0: 1, -2: 1, -4: 1},
    (4, 2): {0: 1, -2: 1, -4: 2, -6: 1, -8: 1},
    (5, 2): {0: 1, -2: 1, -4: 2, -6: 2, -8: 2, -10: 1, -12: 1},
}


def test_form_examples():
    M = a1_module(3)
    assert admissible_form(M.eta(), M.eta()) == ONE
    assert admissible_form(M.eta(), act_F("i", 1, M.eta())) == 0
    for (n, k), terms in A1_FORM_TABLE.items():
        M = a1_module(n)
        m = act_F("i", k, M.eta())
        assert admissible_form(m, m) == LaurentPoly(terms)


def test_form_on_a1_divided_powers_is_a_shifted_binomial():
    for n in range(7):
        M = a1_module(n)
        for k in range(n + 1):
            m = act_F("i", k, M.eta())
            assert admissible_form(m, m) == mono(-k * (n - k)) * quantum_binomial(n, k)


@pytest.mark.parametrize("lam", [(1, 0), (1, 1), (2, 1)])
def test_form_is_symmetric_and_admissible(lam):
    M = HighestWeightModule(TA2, lam)
    elems = []
    for d in range(4):
        for nu in canonical.weights_of_degree(2, d):
            for w in falg.words_of_weight(TA2, nu):
                elems.append(M.element(FreeElement.from_word(TA2, w)))
    for a in elems:
        for b in elems:
            if a.carrier.weight() != b.carrier.weight():
                continue
            assert simplify(admissible_form(a, b) - admissible_form(b, a)) == 0
    for a in elems:
        for b in elems:
            for i in range(2):
                unit = tuple(1 if k == i else 0 for k in range(2))
                neg = tuple(-x for x in unit)
                fa = act_F(i, 1, a)
                if fa.carrier.weight() == b.carrier.weight():
                    rhs = act_K(neg, act_E(i, b)).scale(V)
                    assert simplify(admissible_form(fa, b) - admissible_form(a, rhs)) == 0
                ea = act_E(i, a)
                if ea.carrier and ea.carrier.weight() == b.carrier.weight():
                    rhs = act_K(unit, act_F(i, 1, b)).scale(V)
                    assert simplify(admissible_form(ea, b) - admissible_form(a, rhs)) == 0


# the canonical basis of the module ------------------------------------------------

def test_cb_of_lambda_examples():
    for n in range(5):
        basis = cb_of_Lambda(TA1.weight((n,)))
        assert [b.carrier for b in basis] == [FreeElement.from_word(TA1, ((0, k),) if k else ()) for k in range(n + 1)]
    assert len(cb_of_Lambda(TA2.weight((0, 0)))) == 1
    assert len(cb_of_Lambda(TA2.weight((1, 0)))) == 3


@pytest.mark.parametrize("lam", [(1, 0), (1, 1), (2, 1), (0, 2)])
def test_cb_of_lambda_almost_orthonormal_and_positive(lam):
    weight = TA2.weight(lam)
    basis = cb_of_Lambda(weight)
    M = basis[0].module
    for a in basis:
        for b in basis:
            if a.carrier.weight() != b.carrier.weight():
                continue
            delta = 1 if a is b else 0
            assert lattice_test(simplify(admissible_form(a, b) - delta), Lattice.VINV_ZV_INV)
    for a in basis:
        for i in range(2):
            for img in (act_F(i, 1, a), act_E(i, a)):
                for c in M.coordinates(img).coords.values():
                    assert isinstance(c, LaurentPoly) and positivity_test(c)


def test_dimension_matches_basis():
    M = HighestWeightModule(TA2, (2, 1))
    total = sum(M.dimension(nu) for nu, _ in M.weights())
    assert total == len(cb_of_Lambda(TA2.weight((2, 1)))) == 15


# random elements --------------------------------------------------------------------

MOD = HighestWeightModule(TA2, (2, 1))
coeffs = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), min_size=1, max_size=2).map(LaurentPoly).filter(bool)


@st.composite
def module_elements(draw):
    nu = (draw(st.integers(0, 2)), draw(st.integers(0, 2)))
    words = falg.words_of_weight(TA2, nu)
    out = FreeElement.zero(TA2)
    for w in draw(st.lists(st.sampled_from(words), min_size=1, max_size=3)):
        out = out + FreeElement.from_word(TA2, w).scale(draw(coeffs))
    assume(out)  # terms may cancel, and zero has no weight
    return MOD.element(out)


@given(module_elements(), st.integers(0, 1), st.integers(0, 1), st.integers(1, 2), st.integers(1, 2))
def test_commutation_of_divided_powers(m, i, j, a, b):
    lhs = act_E_divided(i, a, act_F(j, b, m))
    if i != j:
        rhs = act_F(j, b, act_E_divided(i, a, m))
    else:
        h = m.weight()[i]
        rhs = MOD.zero()
        for t in range(min(a, b) + 1):
            rhs = rhs + act_F(i, b - t, act_E_divided(i, a - t, m)).scale(quantum_binomial(a - b + h, t))
    assert equals_in_Lambda(lhs, rhs)


@given(module_elements(), st.integers(0, 1), st.integers(0, 2))
def test_bar_compatibility(m, i, a):
    assert equals_in_Lambda(act_F(i, a, m).bar(), act_F(i, a, m.bar()))
    assert equals_in_Lambda(act_E(i, m).bar(), act_E(i, m.bar()))


@given(module_elements())
def test_coordinates_reconstruct_the_element(m):
    back = MOD.from_coordinates(MOD.coordinates(m))
    assert equals_in_Lambda(back, m)
