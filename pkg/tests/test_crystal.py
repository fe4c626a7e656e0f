import pytest
from hypothesis import given, strategies as st

from framedcb import canonical, falg
from framedcb.canonical import A1
from framedcb.cartan import cartan_type
from framedcb.coeff import ONE, Lattice, LaurentPoly, RationalFunc
from framedcb.crystal import (
    E_tilde,
    F_tilde,
    check_adjoint_tensor,
    check_eps_phi,
    check_projection_commutes,
    check_reachability,
    check_theta_lambda_embedding,
    congruent,
    crystal_image,
    eps_tilde,
    lattice_member,
    module_string_decompose,
    phi_tilde,
    run_suite,
    string_decompose,
)
from framedcb.falg import FreeElement
from framedcb.hwmodule import HighestWeightModule, act_E, act_F, equals_in_Lambda
from framedcb.tensor import TensorModule, delta_act

TA1 = cartan_type("A1")
TA2 = cartan_type("A2")


def word(datum, text):
    return FreeElement.parse(datum, text)


# strings in f -------------------------------------------------------------------

def test_divided_power_is_a_single_string():
    d = string_decompose("i", word(TA1, "i(3)"))
    assert list(d.parts) == [3]
    assert d.parts[3] == FreeElement.one(TA1)


def test_element_killed_by_ir_has_a_length_zero_string():
    x = word(TA2, "j")
    d = string_decompose("i", x)
    assert d.parts == {0: x}


@pytest.mark.parametrize("text", ["i.j", "j.i", "i.j.i", "j.i(2)", "i(2).j(2)"])
def test_parts_reassemble_and_are_killed(text):
    x = word(TA2, text)
    for node in range(2):
        d = string_decompose(node, x)
        assert falg.equals_in_f(d.reassemble(), x)
        for part in d.parts.values():
            assert not falg.character(falg.i_r(node, part))


def test_operator_examples():
    one = FreeElement.one(TA2)
    assert phi_tilde("i", one) == word(TA2, "i")
    assert eps_tilde("i", one).is_zero()
    assert falg.equals_in_f(eps_tilde("i", phi_tilde("i", word(TA2, "j"))), word(TA2, "j"))


def test_inhomogeneous_input_is_rejected():
    with pytest.raises(ValueError):
        string_decompose("i", word(TA2, "i") + word(TA2, "j"))


@given(st.sampled_from(list(canonical.all_indices_up_to("A2", 4))), st.integers(0, 1))
def test_eps_undoes_phi_on_the_basis(b, i):
    x = canonical.cb_word_form(b)
    assert congruent(eps_tilde(i, phi_tilde(i, x)), x)


# strings in modules -----------------------------------------------------------------

def test_module_operator_examples():
    M = HighestWeightModule(TA1, (3,))
    eta = M.eta()
    assert equals_in_Lambda(F_tilde(0, eta), act_F(0, 1, eta))
    assert E_tilde(0, eta).is_zero()
    top = act_F(0, 3, eta)
    assert F_tilde(0, top).is_zero()


def test_module_parts_reassemble():
    M = HighestWeightModule(TA2, (2, 1))
    m = M.element(word(TA2, "i.j") + word(TA2, "j.i").scale(LaurentPoly.monomial(1)))
    for node in range(2):
        parts = module_string_decompose(node, m)
        total = M.zero()
        for n, mn in parts.items():
            assert act_E(node, mn).is_zero()
            total = total + act_F(node, n, mn)
        assert equals_in_Lambda(total, m)


def test_tensor_parts_reassemble():
    tm = TensorModule(TA1, (1,), (1,))
    t = delta_act("F", 0, tm.eta())
    parts = module_string_decompose(0, t)
    total = tm.element({})
    for n, tn in parts.items():
        assert delta_act("E", 0, tn).is_zero()
        out = tn
        for _ in range(n):
            out = delta_act("F", 0, out)
        total = total + out
    assert total == t
    image = F_tilde(0, tm.eta())
    assert lattice_member(image, Lattice.ZV_INV)
    assert crystal_image(image) in ({(A1(0), A1(1)): 1}, {(A1(1), A1(0)): 1})


# lattices --------------------------------------------------------------------------

def test_lattice_examples():
    b = canonical.cb_word_form(canonical.A2Left(0, 1, 1))
    assert lattice_member(b)
    assert not lattice_member(b.scale(LaurentPoly.monomial(1)))
    assert not lattice_member(b.scale(LaurentPoly.monomial(1)), Lattice.A_RING)
    regular = RationalFunc.from_laurent(ONE, ONE - LaurentPoly.monomial(-2))
    assert lattice_member(b.scale(regular), Lattice.A_RING)
    assert not lattice_member(b.scale(regular))
    assert congruent(b + b.scale(LaurentPoly.monomial(-1)), b)
    assert not congruent(b.scale(LaurentPoly({0: 2})), b)
    with pytest.raises(ValueError):
        lattice_member(b, Lattice.VINV_A)
    assert crystal_image(b.scale(LaurentPoly({0: 1, -1: 4}))) == {canonical.A2Left(0, 1, 1): ONE}


# small instances of the suites ------------------------------------------------------

def test_eps_phi_small():
    rep = check_eps_phi("A2", 3)
    assert rep.passed, rep.failures()
    assert rep.data["elements_checked"] == 2 * len(list(canonical.all_indices_up_to("A2", 3)))


def test_theta_lambda_small():
    rep = check_theta_lambda_embedding(2, 1)
    assert rep.passed, rep.failures()


def test_projection_small():
    rep = check_projection_commutes(1, 1)
    assert rep.passed, rep.failures()


def test_reachability_small():
    rep = check_reachability((0, 1, 2), 3)
    assert rep.passed, rep.failures()


def test_adjoint_small():
    assert check_adjoint_tensor("A1", (1,), (2,)).passed
    assert check_adjoint_tensor("A2", (1, 0), (0, 1)).passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nonsense")
