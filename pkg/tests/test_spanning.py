from fractions import Fraction

import pytest

from reference import level_dim

from hv.fock import basis, create, mono_cohdeg, pair_fock, vacuum
from hv.frobenius import ModelError, builtin_model
from hv.spanning import check_generation, generators, span_closure, unit_vector


@pytest.fixture(scope="module")
def p2():
    return builtin_model("p2")


def test_unit_vector(p2):
    assert unit_vector(0, p2) == vacuum(p2)
    v = unit_vector(2, p2)
    oi = p2.index["one"]
    assert v.terms == {((1, oi), (1, oi)): Fraction(1, 2)}
    # pairing of the level-1 fundamental class against the point class
    pt = create(1, p2.cls("x"), vacuum(p2))
    assert pair_fock(unit_vector(1, p2), pt) == 1


def test_generator_family(p2):
    assert len(generators(1, p2)) == 3
    assert len(generators(3, p2)) == 9
    with pytest.raises(ModelError):
        generators(0, p2)
    # -W^2_0(1) acts on the level-n piece as n * Id
    op = generators(1, p2)[p2.unit]
    for n in (0, 1, 2, 3):
        for wd in basis(n, p2):
            img = op.apply_word(wd)
            want = {wd: n} if n else {}
            assert {k: v for k, v in img.items() if v} == want


def test_span_closure_no_ops(p2):
    rows, rep = span_closure([unit_vector(2, p2)], [], 2, p2)
    assert rep.achieved == 1 and not rep.ok
    assert rep.rounds == 0


def test_span_closure_wrong_level(p2):
    with pytest.raises(ModelError):
        span_closure([unit_vector(1, p2)], [], 2, p2)


def test_generation_small(p2):
    for n, dim in ((1, 3), (2, 9), (3, 22)):
        rep = check_generation(n, p2)
        assert rep.ok and rep.achieved == dim == rep.ambient
        assert rep.ambient == level_dim(p2, n)
        assert rep.rounds <= dim


def test_generation_p1xp1_evenk0():
    for name in ("p1xp1", "evenk0"):
        m = builtin_model(name)
        for n in (1, 2, 4):
            rep = check_generation(n, m)
            assert rep.ok, rep.line()


def test_generation_p2_n4():
    rep = check_generation(4, builtin_model("p2"))
    assert rep.ok and rep.achieved == 51


def test_monotonicity(p2):
    # enlarging the operator set never decreases the achieved dimension
    ops = generators(2, p2)
    dims = []
    for i in range(len(ops) + 1):
        _, rep = span_closure([unit_vector(2, p2)], ops[:i], 2, p2)
        dims.append(rep.achieved)
    assert dims == sorted(dims)
    assert dims[-1] == 9


def test_closure_rows_homogeneous(p2):
    # homogeneous seed + homogeneous operators => homogeneous closure rows
    rows, rep = span_closure([unit_vector(3, p2)], generators(3, p2), 3, p2)
    assert rep.ok
    for row in rows:
        degs = {mono_cohdeg(wd, p2) for wd in row.terms}
        assert len(degs) == 1


def test_report_json(p2):
    rep = check_generation(2, p2)
    js = rep.to_json()
    assert js["status"] == "PASS" and js["achieved"] == js["ambient"] == 9
    assert js["generators"] == 6
