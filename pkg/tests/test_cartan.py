import pytest

from framedcb.cartan import CartanDatum, Node, cartan_type, frame, odot, odot_iterated, theta_lambda_weight
from framedcb.cli.config import ConfigError, parse_config


def test_framing_a1_gives_a2():
    fd = frame(cartan_type("A1"))
    assert [str(n) for n in fd.full.nodes] == ["i", "i'"]
    assert fd.full.pairing == ((2, -1), (-1, 2))


def test_framing_a2_is_a_path():
    fd = frame(cartan_type("A2"))
    full = fd.full
    names = [str(n) for n in full.nodes]
    assert names == ["i", "j", "i'", "j'"]
    edges = {frozenset((names[a], names[b])) for a in range(4) for b in range(a + 1, 4) if full.pairing[a][b]}
    assert edges == {frozenset(p) for p in (("i'", "i"), ("i", "j"), ("j", "j'"))}
    assert all(full.pairing[a][b] == -1 for a in range(4) for b in range(4) if a != b and full.pairing[a][b])


def test_double_framing():
    fd2 = frame(frame(cartan_type("A1")))
    full = fd2.full
    i, i1, i2 = (full.index(n) for n in ("i", "i'", "i''"))
    assert full.dot(i2, i) == -1
    assert full.dot(i2, i1) == 0
    assert full.dot(i2, i2) == 2


def test_frame_is_cached():
    assert frame(cartan_type("A2")) is frame(cartan_type("A2"))


def test_odot_pairings():
    a1 = cartan_type("A1")
    fd = frame(a1)
    w = odot(a1.weight((3,)), a1.weight((2,)), fd)
    assert w["i"] == 3 and w["i'"] == 2
    z = odot(a1.zero_weight(), a1.zero_weight(), fd)
    assert z.pairings == (0, 0)


def test_odot_iterated_three_factors():
    a1 = cartan_type("A1")
    fd2 = frame(frame(a1))
    w = odot_iterated([a1.weight((1,)), a1.weight((2,)), a1.weight((4,))], fd2)
    assert (w["i"], w["i'"], w["i''"]) == (1, 2, 4)


def test_theta_lambda_weight():
    a1, a2 = cartan_type("A1"), cartan_type("A2")
    assert theta_lambda_weight(a1.weight((0,)), frame(a1)) == (0, 0)
    assert theta_lambda_weight(a1.weight((5,)), frame(a1)) == (0, 5)
    assert theta_lambda_weight(a2.weight((2, 3)), frame(a2)) == (0, 0, 2, 3)


def test_odot_rejects_non_dominant():
    a1 = cartan_type("A1")
    with pytest.raises(ValueError):
        odot(a1.weight((-1,)), a1.weight((0,)), frame(a1))


@pytest.mark.parametrize(
    "matrix",
    [((2, 1), (1, 2)), ((2, -1), (0, 2)), ((1, -1), (-1, 2))],
)
def test_datum_validation(matrix):
    with pytest.raises(ValueError):
        CartanDatum.build(["a", "b"], matrix)


def test_node_names():
    assert Node.parse("i''") == Node("i", 2)
    assert str(Node("j", 1)) == "j'"


def test_fingerprint_depends_on_matrix_only_through_content():
    assert cartan_type("A2").fingerprint() == CartanDatum.build(["i", "j"], [[2, -1], [-1, 2]]).fingerprint()
    assert cartan_type("A2").fingerprint() != cartan_type("A1").fingerprint()


# the datum file ----------------------------------------------------------------

def test_config_matrix_and_weights():
    cfg = parse_config(
        """
        [datum]
        nodes = a b
        a = 2 -1
        b = -1 2

        [weights]
        xi = 1 0
        lam = 0,1
        """
    )
    assert cfg.datum.pairing == ((2, -1), (-1, 2))
    assert cfg.weight("xi").pairings == (1, 0)
    assert cfg.weight("lam").pairings == (0, 1)
    assert cfg.weight("2,2").pairings == (2, 2)


def test_config_builtin_type():
    cfg = parse_config("[datum]\ntype = A1\n")
    assert cfg.datum is cartan_type("A1")


@pytest.mark.parametrize(
    "text",
    [
        "[weights]\nx = 1\n",
        "[datum]\nnodes = a b\na = 2 -1\n",
        "[datum]\nnodes = a\na = 2 0\n",
        "[datum]\nnodes = a b\na = 2 1\nb = 1 2\n",
        "[datum]\ntype = A1\n[weights]\nx = -1\n",
        "[datum]\ntype = A1\n[weights]\nx = one\n",
        "not an ini file",
    ],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_config_rejects_non_dominant_literal():
    cfg = parse_config("[datum]\ntype = A2\n")
    with pytest.raises(ConfigError):
        cfg.weight("1,-1")
