import json
from fractions import Fraction
from itertools import product

import pytest

from hv.frobenius import (
    BUILTIN_NAMES,
    ModelError,
    SurfaceModel,
    builtin_model,
    load_model,
    parse_coeff,
)


@pytest.fixture(scope="module")
def p2():
    return builtin_model("p2")


@pytest.fixture(scope="module")
def torus():
    return builtin_model("torus")


def test_parse_coeff():
    assert parse_coeff("3") == 3
    assert parse_coeff("-4/7") == Fraction(-4, 7)
    with pytest.raises(ModelError):
        parse_coeff("4/-7")
    with pytest.raises(ModelError):
        parse_coeff("2/4")  # not lowest terms
    with pytest.raises(ModelError):
        parse_coeff("x")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_models_validate(name):
    report = builtin_model(name).validate()
    assert report.ok, report.lines()


def test_broken_product_fails_nondegeneracy():
    # the projective-plane table with h*h dropped has a zero Gram row
    m = SurfaceModel(
        "p2broken",
        basis=[("one", 0), ("h", 2), ("x", 4)],
        unit="one",
        products=[("h", "h", []), ("h", "x", []), ("x", "x", [])],
        integral=[("x", 1)],
        canonical=[("h", -3)],
    )
    report = m.validate()
    failed = {cid for cid, ok, _ in report.checks if not ok}
    assert failed == {"nondegenerate_pairing"}


def test_schema_errors():
    with pytest.raises(ModelError, match="duplicate"):
        SurfaceModel("m", [("a", 0), ("a", 2)], "a", [], [], [])
    with pytest.raises(ModelError, match="unit"):
        SurfaceModel("m", [("a", 0)], "b", [], [], [])
    with pytest.raises(ModelError, match="left index"):
        SurfaceModel(
            "m",
            [("one", 0), ("a", 2), ("b", 2)],
            "one",
            [("b", "a", [("one", 1)])],
            [],
            [],
        )
    with pytest.raises(ModelError, match="coeff"):
        SurfaceModel(
            "m",
            [("one", 0), ("a", 2)],
            "one",
            [("a", "a", [("one", "1.5")])],
            [],
            [],
        )
    with pytest.raises(ModelError, match="degree"):
        SurfaceModel("m", [("one", 0), ("a", 7)], "one", [], [], [])


def test_mul_examples(p2, torus):
    h, x, one = p2.cls("h"), p2.cls("x"), p2.one()
    assert h * h == x
    assert one * h == h and x * one == x
    assert not (h * x)  # degree 6 truncates
    e1 = torus.cls("e1")
    assert not (e1 * e1)
    assert torus.cls("e2") * torus.cls("e1") == -1 * torus.cls("e12")


def test_mixed_model_operands(p2, torus):
    with pytest.raises(ModelError, match="mixed-model"):
        p2.mul(p2.cls("h"), torus.cls("e1"))


def test_integrate(p2):
    x, h = p2.cls("x"), p2.cls("h")
    assert p2.integrate(x) == 1
    assert p2.integrate(h) == 0
    assert p2.integrate(Fraction(3, 2) * x + h) == Fraction(3, 2)


def test_diag_push_examples(p2):
    x, one = p2.cls("x"), p2.one()
    t1 = p2.diag_push(x, 1)
    assert t1.terms == {(p2.index["x"],): 1}
    t2 = p2.diag_push(x, 2)
    xi = p2.index["x"]
    assert t2.terms == {(xi, xi): 1}
    t2u = p2.diag_push(one, 2)
    oi, hi = p2.index["one"], p2.index["h"]
    assert t2u.terms == {(oi, xi): 1, (hi, hi): 1, (xi, oi): 1}
    with pytest.raises(ModelError):
        p2.diag_push(x, 0)


@pytest.mark.parametrize("name,chi", [("p2", 3), ("p1xp1", 4), ("torus", 0), ("evenk0", 4)])
def test_euler_class(name, chi):
    m = builtin_model(name)
    e = m.euler_class()
    assert m.integrate(e) == chi
    if chi == 0:
        assert not e


@pytest.mark.parametrize("name", ["p2", "p1xp1", "evenk0"])
def test_pairing_identity_exhaustive(name):
    # integral_k(tau_k(a) * (b1 x..x bk)) == integral(a*b1*..*bk)
    m = builtin_model(name)
    for k in (2, 3):
        for c in range(m.dim):
            alpha = m.cls_basis(c)
            tk = m.diag_push(alpha, k)
            for legs in product(range(m.dim), repeat=k):
                prod_cls = alpha
                for i in legs:
                    prod_cls = prod_cls * m.cls_basis(i)
                assert tk.mul_decomposable(legs).integrate() == m.integrate(prod_cls)


def test_pairing_identity_torus_k2(torus):
    m = torus
    for c in range(m.dim):
        alpha = m.cls_basis(c)
        t2 = m.diag_push(alpha, 2)
        for legs in product(range(m.dim), repeat=2):
            prod_cls = alpha * m.cls_basis(legs[0]) * m.cls_basis(legs[1])
            assert t2.mul_decomposable(legs).integrate() == m.integrate(prod_cls)


def test_coassociativity(torus, p2):
    for m in (p2, torus):
        for c in range(m.dim):
            t3 = m.diag_push(m.cls_basis(c), 3)
            alt = {}
            for (i, j), tc in m.diag_push(m.cls_basis(c), 2).terms.items():
                for (j1, j2), tc2 in m.diag_push(m.cls_basis(j), 2).terms.items():
                    key = (i, j1, j2)
                    alt[key] = alt.get(key, 0) + tc * tc2
            assert {k: v for k, v in alt.items() if v} == t3.terms


def test_tau2_supersymmetry(torus):
    par = torus.par
    for c in range(torus.dim):
        t2 = torus.diag_push(torus.cls_basis(c), 2).terms
        swapped = {}
        for (i, j), tc in t2.items():
            s = -1 if (par[i] and par[j]) else 1
            swapped[(j, i)] = swapped.get((j, i), 0) + s * tc
        assert swapped == t2


def test_json_round_trip(tmp_path, p2, torus):
    for m in (p2, torus):
        path = tmp_path / ("%s.json" % m.name)
        path.write_text(json.dumps(m.to_json()))
        again = load_model(str(path))
        assert again.labels == m.labels
        assert again.degs == m.degs
        assert again.mul_ci == m.mul_ci
        assert again.integral_vec == m.integral_vec
        assert again.canonical.coeffs == {
            i: c for i, c in m.canonical.coeffs.items()
        }
        assert again.validate().ok


def test_load_errors(tmp_path):
    with pytest.raises(ModelError, match="builtin"):
        load_model("builtin:nope")
    with pytest.raises(ModelError, match="read"):
        load_model(str(tmp_path / "absent.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ModelError, match="JSON"):
        load_model(str(bad))
    nofield = tmp_path / "nofield.json"
    nofield.write_text(json.dumps({"name": "m"}))
    with pytest.raises(ModelError, match="missing field"):
        load_model(str(nofield))


def test_class_arithmetic(p2):
    h, x = p2.cls("h"), p2.cls("x")
    v = Fraction(3, 2) * x + h - h
    assert v.coeffs == {p2.index["x"]: Fraction(3, 2)}
    assert (h + x).degree() is None
    assert (h + x).degrees() == [2, 4]
    assert h.degree() == 2 and h.parity() == 0
    assert (h + x).homogeneous_part(4) == x


def test_unit_row_autofill():
    # products involving the unit may be omitted from the table
    m = SurfaceModel(
        "tiny",
        basis=[("one", 0), ("t", 4)],
        unit="one",
        products=[("t", "t", [])],
        integral=[("t", 1)],
        canonical=[],
    )
    assert m.mul(m.one(), m.cls("t")) == m.cls("t")
    assert m.validate().ok
