from fractions import Fraction

import pytest

from reference import virasoro_literal, w_naive

from hv.frobenius import builtin_model
from hv.fock import FockVector, basis_up_to, create, mono_cohdeg, mono_level, pair_fock, vacuum
from hv.operators import (
    MemoOp,
    NormalWord,
    OperatorError,
    ScaleOp,
    _clean,
    adjoint,
    boundary,
    commutator,
    derive,
    equal_up_to,
    identity,
    leading_term,
    normal_order_word,
    q,
    virasoro,
    w,
    zero,
)


@pytest.fixture(scope="module")
def p2():
    return builtin_model("p2")


@pytest.fixture(scope="module")
def torus():
    return builtin_model("torus")


def test_q_basics(p2):
    vac = vacuum(p2)
    h = p2.cls("h")
    assert not q(0, h).apply(vac)
    assert q(1, h).apply(vac) == create(1, h, vac)
    v = q(-1, h).apply(q(1, h).apply(vac))
    assert v == -1 * vac
    assert q(1, h).bidegree == (1, 2)
    assert q(-2, h).bidegree == (-2, -4)
    assert q(1, h).parity == 0


def test_virasoro_examples(p2):
    vac = vacuum(p2)
    one, h, x = p2.one(), p2.cls("h"), p2.cls("x")
    v3 = create(3, h, vac)
    assert virasoro(0, one).apply(v3) == -3 * v3
    assert not virasoro(1, h).apply(vac)
    got = virasoro(2, x).apply(vac)
    xi = p2.index["x"]
    assert got.terms == {((1, xi), (1, xi)): Fraction(1, 2)}
    assert virasoro(1, h).bidegree == (1, 4)


def test_virasoro_matches_literal_sum(p2, torus):
    for mdl, N, classes, nrange in (
        (p2, 3, range(3), range(-3, 4)),
        (torus, 2, (0, 1, 6, 15), range(-2, 3)),
    ):
        words = basis_up_to(N, mdl)
        for n in nrange:
            for ci in classes:
                a = mdl.cls_basis(ci)
                op = virasoro(n, a)
                for wd in words:
                    assert _clean(dict(op.apply_word(wd))) == _clean(
                        virasoro_literal(mdl, n, a, wd)
                    ), (mdl.name, n, ci, wd)


def test_w_matches_naive(p2, torus):
    for mdl, N, krange, nrange, classes in (
        (p2, 2, (1, 2, 3), range(-2, 3), range(3)),
        (torus, 2, (2, 3), (-1, 0, 1), (0, 3, 15)),
    ):
        words = basis_up_to(N, mdl)
        for k in krange:
            for n in nrange:
                for ci in classes:
                    a = mdl.cls_basis(ci)
                    op = w(k, n, a)
                    for wd in words:
                        assert _clean(dict(op.apply_word(wd))) == _clean(
                            w_naive(mdl, k, n, a, wd)
                        ), (mdl.name, k, n, ci, wd)


def test_w4_spot_naive(p2):
    a = p2.cls("h")
    for n in (-1, 0, 2):
        op = w(4, n, a)
        for wd in basis_up_to(2, p2):
            assert _clean(dict(op.apply_word(wd))) == _clean(w_naive(p2, 4, n, a, wd))


def test_w_basics(p2):
    vac = vacuum(p2)
    one = p2.one()
    assert not w(3, 0, one).apply(vac)
    with pytest.raises(OperatorError):
        w(0, 1, one)
    assert w(3, 1, one).bidegree == (1, 4)
    ok, _ = equal_up_to(w(1, 2, p2.cls("h")), q(2, p2.cls("h")), 4)
    assert ok


def test_boundary_examples(p2):
    d = boundary(p2)
    vac = vacuum(p2)
    assert not d.apply(vac)
    assert not d.apply(create(1, p2.cls("h"), vac))
    got = d.apply(create(2, p2.one(), vac))
    oi, hi, xi = p2.index["one"], p2.index["h"], p2.index["x"]
    assert got.terms == {
        ((1, oi), (1, xi)): 2,
        ((1, hi), (1, hi)): 1,
        ((2, hi),): -3,
    }
    assert d.bidegree == (0, 2)


def test_commutator_examples(p2):
    h, x, one = p2.cls("h"), p2.cls("x"), p2.one()
    ok, _ = equal_up_to(commutator(q(1, h), q(1, h)), zero(p2), 3)
    assert ok
    ok, _ = equal_up_to(commutator(q(2, one), q(-2, x)), ScaleOp(2, identity(p2)), 3)
    assert ok
    ok, _ = equal_up_to(commutator(virasoro(1, h), q(1, h)), ScaleOp(-1, q(2, x)), 3)
    assert ok


def test_commutator_parity_error(torus):
    mixed = q(1, torus.cls("e1")) + q(1, torus.cls("e12"))
    assert mixed.parity is None
    with pytest.raises(OperatorError, match="parity"):
        commutator(mixed, q(1, torus.one()))


def test_equal_up_to_witness(p2):
    ok, wit = equal_up_to(q(1, p2.cls("h")), q(2, p2.cls("h")), 2)
    assert not ok
    word, lhs, rhs = wit
    assert word == ()  # the vacuum witnesses the difference
    assert lhs != rhs


def test_adjoint_rules(p2, torus):
    h = p2.cls("h")
    fa = adjoint(q(3, h))
    ok, _ = equal_up_to(fa, ScaleOp(-1, q(-3, h)), 3)
    assert ok
    assert adjoint(identity(p2)) is identity(p2)
    # spec example: adjoint of a product of two odd creations
    e1, e2 = torus.cls("e1"), torus.cls("e2")
    fa = adjoint(q(1, e1) * q(1, e2))
    want = ScaleOp(-1, q(-1, e2) * q(-1, e1))
    ok, _ = equal_up_to(fa, want, 3)
    assert ok


def _pairing_sound(model, f, N, sample=50):
    fa = adjoint(f)
    words = basis_up_to(N, model)[:sample]
    mshift = f.bidegree[1] & 1 if f.bidegree else (f.parity or 0)
    for u in words:
        for v in words:
            fu = FockVector(model, {u: 1})
            fv = FockVector(model, {v: 1})
            s = -1 if (mshift and mono_cohdeg(u, model) & 1) else 1
            if pair_fock(f.apply(fu), fv) != s * pair_fock(fu, fa.apply(fv)):
                return False
    return True


def test_adjoint_pairing_regressions(p2, torus):
    # frozen adjoint conventions: L_n+ = (-1)^n L_{-n}, W+ likewise, d+ = d
    assert _pairing_sound(p2, virasoro(1, p2.cls("h")), 3)
    assert _pairing_sound(p2, virasoro(-2, p2.one()), 3)
    assert _pairing_sound(p2, w(3, 1, p2.one()), 3)
    assert _pairing_sound(p2, boundary(p2), 3)
    assert _pairing_sound(torus, virasoro(2, torus.cls("e1")), 2)
    assert _pairing_sound(torus, w(3, -1, torus.one()), 2)
    assert _pairing_sound(torus, boundary(torus), 2)


def test_adjoint_involution(p2):
    f = commutator(virasoro(1, p2.cls("h")), q(1, p2.cls("h")))
    ok, _ = equal_up_to(adjoint(adjoint(f)), f, 3)
    assert ok


def test_derive_examples(p2):
    h = p2.cls("h")
    ok, _ = equal_up_to(derive(q(1, h)), virasoro(1, h), 3)
    assert ok
    ok, _ = equal_up_to(derive(identity(p2)), zero(p2), 3)
    assert ok
    # n = -1: a real test, the boundary operator is defined through n > 0
    ok, _ = equal_up_to(derive(q(-1, h)), ScaleOp(-1, virasoro(-1, h)), 3)
    assert ok


def test_normal_order_word(p2, torus):
    hi = p2.index["h"]
    nw = normal_order_word([(1, "h"), (-2, "h")], p2)
    assert nw.terms == {((1, hi), (-2, hi)): 1}
    nw = normal_order_word([(-1, "h"), (1, "h")], p2)
    assert nw.terms == {((1, hi), (-1, hi)): 1, (): -1}
    e1, e2 = torus.index["e1"], torus.index["e2"]
    nw = normal_order_word([(-1, "e1"), (1, "e2")], torus)
    assert nw.terms == {((1, e2), (-1, e1)): -1}
    assert not normal_order_word([(1, "h"), (0, "h")], p2)


def test_normal_order_matches_operator(p2):
    # Wick normal ordering preserves the operator it rewrites
    word = [(-1, "h"), (2, "one"), (-2, "x"), (1, "h")]
    nw = normal_order_word(word, p2)
    symbols = [(n, p2.index[lbl]) for n, lbl in word]
    from reference import apply_q_word

    for wd in basis_up_to(3, p2):
        direct = apply_q_word(p2, symbols, wd)
        via = {}
        for term, c in nw.terms.items():
            for w2, c2 in apply_q_word(p2, list(term), wd).items():
                via[w2] = via.get(w2, 0) + c * c2
        assert _clean(direct) == _clean(via)


def test_leading_term(p2):
    nw = normal_order_word([(-1, "h"), (1, "h")], p2)
    lt = leading_term(nw)
    hi = p2.index["h"]
    assert lt.terms == {((1, hi), (-1, hi)): 1}
    single = normal_order_word([(2, "h")], p2)
    assert leading_term(single) == single
    assert not leading_term(NormalWord(p2))


def test_operator_combinators(p2):
    h = p2.cls("h")
    f = q(1, h)
    g = q(2, h)
    s = f + g
    assert s.bidegree is None and s.parity == 0
    comp = f * g
    assert comp.bidegree == (3, 6)
    sc = Fraction(1, 2) * f
    assert sc.bidegree == f.bidegree
    memo = MemoOp(f)
    vac = vacuum(p2)
    assert memo.apply(vac) == f.apply(vac)
    assert memo.apply(vac) == f.apply(vac)  # cached path


def test_generator_bidegree_shifts(p2):
    # every generator maps graded pieces exactly as declared
    ops = [q(2, p2.cls("h")), q(-1, p2.cls("x")), virasoro(1, p2.one()),
           w(3, -1, p2.cls("h")), boundary(p2)]
    for f in ops:
        dl, dm = f.bidegree
        for wd in basis_up_to(3, p2):
            for w2 in f.apply_word(wd):
                assert mono_level(w2) == mono_level(wd) + dl
                assert mono_cohdeg(w2, p2) == mono_cohdeg(wd, p2) + dm
