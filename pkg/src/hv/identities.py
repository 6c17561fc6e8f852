"""Executable identity suite: each named check instantiates one operator
identity over bounded indices/levels and compares both sides exactly.

Checks enumerate every index tuple within the bound B and, by default,
every tuple of basis classes.  On large models (the 16-dimensional torus)
the multilinear class slots of the heavier checks are sampled
deterministically instead; the report records the policy.  Commutator
arguments in the nested checks supercommute up to central terms, so only
sorted argument multisets are evaluated.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial

from hv.fock import (
    FockVector,
    ann_word,
    basis,
    basis_up_to,
    cre_word,
    mono_cohdeg,
    mono_level,
    pair_fock,
)
from hv.operators import (
    BracketOp,
    ScaleOp,
    SumOp,
    ZeroOp,
    adjoint,
    boundary,
    commutator,
    derive,
    equal_up_to,
    identity,
    q,
    virasoro,
    w,
)

CHECK_IDS = (
    "heisenberg",
    "virasoro_q",
    "virasoro_virasoro",
    "qprime_neg",
    "qprime_q",
    "nested_37",
    "nested_39",
    "transfer_317",
    "w_q_46",
    "nested_w_410a",
    "nested_w_410b",
    "w1_eq_q",
    "w2_eq_L",
    "g0_unit_56",
    "g0_is_minusW2_513iv",
    "d_eq_minusW03_514",
    "adjoint_28",
    "d_selfadjoint",
    "pairing_nondegenerate",
    "coassoc_tau",
)

DEFAULT_N = 3
DEFAULT_B = 2
DEFAULT_KMAX = 3
DEFAULT_BUDGET = 300


@dataclass
class CheckSpec:
    id: str
    model: object
    level: int = DEFAULT_N
    index_bound: int = DEFAULT_B
    kmax: int = DEFAULT_KMAX
    budget: int = DEFAULT_BUDGET  # max class tuples per slot family; 0 = unlimited
    seed: int = 0
    max_seconds: float = None  # wall-clock bound; exceeding it yields INCOMPLETE


class _Deadline:
    "Cheap periodic wall-clock poll for long-running checks."

    def __init__(self, limit):
        self.limit = limit
        self.t0 = time.time()

    def hit(self, count, stride=256):
        if self.limit is None or count % stride:
            return False
        return time.time() - self.t0 > self.limit


def _incomplete(spec, count, sampled=False):
    return CheckReport(spec.id, _params(spec, sampled), "INCOMPLETE",
                       witness="resource bound exceeded", instances=count)


@dataclass
class CheckReport:
    id: str
    params: dict
    status: str  # PASS | FAIL | SKIP
    witness: str = None
    seconds: float = 0.0
    instances: int = 0

    def line(self):
        ps = ",".join("%s=%s" % (k, v) for k, v in sorted(self.params.items()))
        out = "CHECK %s %s %s" % (self.id, ps, self.status)
        if self.witness and self.status in ("FAIL", "INCOMPLETE"):
            out += " witness=%s" % self.witness
        return out

    def to_json(self):
        return {
            "id": self.id,
            "params": self.params,
            "status": self.status,
            "witness": self.witness,
            "seconds": round(self.seconds, 3),
            "instances": self.instances,
        }


class CheckError(Exception):
    pass


def _id(model, scalar=1):
    return ZeroOp(model) if not scalar else ScaleOp(scalar, identity(model))


def _wit(word, model, lhs, rhs, ctx):
    wv = FockVector(model, {word: 1}) if not isinstance(word, str) else word
    return "%s | on %s | lhs=%s rhs=%s" % (ctx, wv, lhs, rhs)


def _basis_classes(model):
    return [model.cls_basis(i) for i in range(model.dim)]


def _class_tuples(model, slots, budget, seed):
    """Deterministic class-tuple enumeration: exhaustive when it fits the
    budget, else a seeded sample that always covers unit/top/odd corners."""
    D = model.dim
    total = D**slots
    if budget == 0 or total <= budget:
        return list(product(range(D), repeat=slots)), False
    rng = random.Random("%s|%s|%s" % (seed, slots, model.name))
    picked = set()
    picked.add((model.unit,) * slots)
    top = max(range(D), key=lambda i: (model.degs[i], -i))
    picked.add((top,) + (model.unit,) * (slots - 1))
    odd = [i for i in range(D) if model.par[i]]
    if odd:
        base = (odd * slots)[:slots]
        picked.add(tuple(base))
        picked.add(tuple(reversed(base)))
    while len(picked) < budget:
        picked.add(tuple(rng.randrange(D) for _ in range(slots)))
    return sorted(picked), True


def _q_prime(n, alpha, order=1):
    """Interned, memoized k-th derivative of a Heisenberg generator."""
    from hv.operators import MemoOp, _cls_key, _interned

    model = alpha.model

    def build():
        op = q(n, alpha)
        for _ in range(order):
            op = derive(op)
        return MemoOp(op)

    return _interned(model, ("qprime", order, n, _cls_key(alpha)), build)


def _nested(op, args):
    for nn, aa in args:
        op = BracketOp(op, q(nn, aa))
    return op


def run_check(spec):
    """Run a single named check; deterministic for fixed spec."""
    if spec.id not in CHECK_IDS:
        raise CheckError("unknown check id %r" % (spec.id,))
    fn = globals()["_check_" + spec.id]
    t0 = time.time()
    rep = fn(spec)
    rep.seconds = time.time() - t0
    return rep


def run_suite(ids, model, level=DEFAULT_N, index_bound=DEFAULT_B, kmax=DEFAULT_KMAX,
              budget=DEFAULT_BUDGET, seed=0, max_seconds=None):
    """Run checks in canonical order; exit status 0 iff no FAIL."""
    if ids in ("all", None):
        ids = CHECK_IDS
    reports = []
    for cid in ids:
        spec = CheckSpec(cid, model, level, index_bound, kmax, budget, seed, max_seconds)
        reports.append(run_check(spec))
    status = 0 if all(r.status != "FAIL" for r in reports) else 1
    return reports, status


# -- the checks ----------------------------------------------------------------


def _check_heisenberg(spec):
    """[q_n(a), q_m(b)] = n delta_{n+m} integral(ab) Id on every basis word.

    Tight kernel over the fock primitives; unordered symbol pairs only,
    since the bracket of the swapped pair is computed from the same two
    compositions.  Words are pre-indexed by part size so annihilator
    configurations skip words they cannot touch.
    """
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    par, gram = model.par, model.gram
    words = basis_up_to(N, model)
    has = {}
    has2 = {}
    for s in range(1, max(N, B) + 1):
        has[s] = [wd for wd in words if any(n == s for n, _ in wd)]
        has2[s] = [wd for wd in words if sum(1 for n, _ in wd if n == s) >= 2]
    # first-level application tables; reduced words stay inside the level
    # bound, so annihilation composes through table lookups
    cre_tab = {}
    ann_tab = {}
    for n in range(1, B + 1):
        for ci in range(model.dim):
            cre_tab[(n, ci)] = {wd: cre_word(n, ci, wd, par) for wd in words}
            row = gram[ci]
            ann_tab[(n, ci)] = {wd: ann_word(n, ci, wd, par, row) for wd in has[n]}
    syms = [(n, ci) for n in range(-B, B + 1) if n for ci in range(model.dim)]
    syms.sort()
    count = 0
    fail = None

    for a_i, (n1, c1) in enumerate(syms):
        if fail:
            break
        for n2, c2 in syms[a_i:]:
            sgn = -1 if (par[c1] and par[c2]) else 1
            scalar = n1 * gram[c1][c2] if n1 + n2 == 0 else 0
            if n1 > 0 and n2 > 0:
                # pure creations: both orders give the same word, so the
                # bracket reduces to a sign comparison
                t1 = cre_tab[(n1, c1)]
                t2 = cre_tab[(n2, c2)]
                count += len(words)
                if dl.hit(count, 1):
                    return _incomplete(spec, count)
                for wd in words:
                    rb = t2[wd]
                    ra = t1[wd]
                    rab = cre_word(n1, c1, rb[1], par) if rb else None
                    rba = cre_word(n2, c2, ra[1], par) if ra else None
                    if rab is None and rba is None:
                        continue
                    if (
                        rab is None
                        or rba is None
                        or rab[1] != rba[1]
                        or rab[0] * rb[0] != sgn * rba[0] * ra[0]
                    ):
                        fail = (n1, c1, n2, c2, wd)
                        break
                if fail:
                    break
                continue
            if n1 < 0 and n2 < 0:
                if n1 == n2:
                    cand = has2[-n1]
                else:
                    cand = [wd for wd in has[-n1] if any(n == -n2 for n, _ in wd)]
                t1 = ann_tab[(-n1, c1)]
                t2 = ann_tab[(-n2, c2)]
                for wd in cand:
                    count += 1
                    if dl.hit(count, 4096):
                        return _incomplete(spec, count)
                    out = {}
                    for cb, wb in t2[wd]:
                        for ca, wa in t1.get(wb) or ann_word(-n1, c1, wb, par, gram[c1]):
                            v = out.get(wa, 0) + ca * cb
                            if v:
                                out[wa] = v
                            elif wa in out:
                                del out[wa]
                    for cb, wb in t1[wd]:
                        for ca, wa in t2.get(wb) or ann_word(-n2, c2, wb, par, gram[c2]):
                            v = out.get(wa, 0) - sgn * ca * cb
                            if v:
                                out[wa] = v
                            elif wa in out:
                                del out[wa]
                    if out:
                        fail = (n1, c1, n2, c2, wd)
                        break
                if fail:
                    break
                continue
            # mixed pair: sorted symbol order puts the annihilator first,
            # so the bracket is [q_{-s}(c1), q_{n_cre}(c2)]
            s, c_ann = -n1, c1
            n_cre, c_cre = n2, c2
            tc = cre_tab[(n_cre, c_cre)]
            ta = ann_tab[(s, c_ann)]
            grow = gram[c_ann]
            for wd in (words if s == n_cre else has[s]):
                count += 1
                if dl.hit(count, 4096):
                    return _incomplete(spec, count)
                out = {}
                # annihilate(create wd)
                r = tc[wd]
                if r is not None:
                    for ca, wa in ann_word(s, c_ann, r[1], par, grow):
                        v = out.get(wa, 0) + ca * r[0]
                        if v:
                            out[wa] = v
                        elif wa in out:
                            del out[wa]
                # - sgn * create(annihilate wd)
                for cb, wb in ta.get(wd, ()):
                    r2 = cre_word(n_cre, c_cre, wb, par)
                    if r2 is not None:
                        v = out.get(r2[1], 0) - sgn * r2[0] * cb
                        if v:
                            out[r2[1]] = v
                        elif r2[1] in out:
                            del out[r2[1]]
                if scalar:
                    v = out.get(wd, 0) - scalar
                    if v:
                        out[wd] = v
                    elif wd in out:
                        del out[wd]
                if out:
                    fail = (n1, c1, n2, c2, wd)
                    break
            if fail:
                break

    if fail:
        n1, c1, n2, c2, wd = fail
        lhs = commutator(q(n1, model.cls_basis(c1)), q(n2, model.cls_basis(c2)))
        scalar = n1 * gram[c1][c2] if n1 + n2 == 0 else 0
        return CheckReport(
            spec.id,
            _params(spec),
            "FAIL",
            _wit(wd, model, lhs.apply(FockVector(model, {wd: 1})), "%s*input" % scalar,
                 "n=%d,m=%d,a=%s,b=%s" % (n1, n2, model.labels[c1], model.labels[c2])),
            instances=count,
        )
    # q_0 = 0 spot checks
    one = model.one()
    z = q(0, one)
    for wd in words[: 5]:
        count += 1
        if z.apply_word(wd):
            return CheckReport(spec.id, _params(spec), "FAIL", "q(0,one) != 0", instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_virasoro_q(spec):
    """[L_n(a), q_m(b)] = -m q_{n+m}(ab)."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    tuples, sampled = _class_tuples(model, 2, spec.budget, spec.seed)
    count = 0
    for n in range(-B, B + 1):
        for m in range(-B, B + 1):
            if m == 0:
                continue
            for ci, cj in tuples:
                a, b = model.cls_basis(ci), model.cls_basis(cj)
                lhs = commutator(virasoro(n, a), q(m, b))
                ab = a * b
                rhs = ScaleOp(-m, q(n + m, ab)) if ab else _id(model, 0)
                ok, witdata = equal_up_to(lhs, rhs, N)
                count += 1
                if dl.hit(count, 16):
                    return _incomplete(spec, count, sampled)
                if not ok:
                    wd, l, r = witdata
                    return CheckReport(
                        spec.id, _params(spec, sampled), "FAIL",
                        _wit(wd, model, l, r, "n=%d,m=%d,a=%s,b=%s"
                             % (n, m, model.labels[ci], model.labels[cj])),
                        instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _check_virasoro_virasoro(spec):
    """[L_n(a), L_m(b)] = (n-m) L_{n+m}(ab) - (n^3-n)/12 delta integral(e ab) Id."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    e = model.euler_class()
    tuples, sampled = _class_tuples(model, 2, spec.budget, spec.seed)
    count = 0
    for n in range(-B, B + 1):
        for m in range(n, B + 1):
            for ci, cj in tuples:
                a, b = model.cls_basis(ci), model.cls_basis(cj)
                lhs = commutator(virasoro(n, a), virasoro(m, b))
                ab = a * b
                terms = []
                if ab and n != m:
                    terms.append(ScaleOp(n - m, virasoro(n + m, ab)))
                if n + m == 0:
                    c = Fraction(-(n**3 - n), 12) * model.integrate(e * ab)
                    if c:
                        terms.append(_id(model, c))
                rhs = SumOp(terms) if terms else _id(model, 0)
                ok, witdata = equal_up_to(lhs, rhs, N)
                count += 1
                if dl.hit(count, 16):
                    return _incomplete(spec, count, sampled)
                if not ok:
                    wd, l, r = witdata
                    return CheckReport(
                        spec.id, _params(spec, sampled), "FAIL",
                        _wit(wd, model, l, r, "n=%d,m=%d,a=%s,b=%s"
                             % (n, m, model.labels[ci], model.labels[cj])),
                        instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _qprime_rhs(model, n, a):
    terms = [ScaleOp(n, virasoro(n, a))]
    ka = model.canonical * a
    c = Fraction(n * (abs(n) - 1), 2)
    if ka and c:
        terms.append(ScaleOp(c, q(n, ka)))
    return SumOp(terms)


def _check_qprime_neg(spec):
    """[d, q_n(a)] = n L_n(a) + n(|n|-1)/2 q_n(K a) for n < 0.

    The n > 0 case is the definition of d; the negative case is the
    nontrivial consistency of the Leibniz extension.
    """
    model, N, B = spec.model, spec.level, spec.index_bound
    count = 0
    for n in range(-B, 0):
        for a in _basis_classes(model):
            ok, witdata = equal_up_to(derive(q(n, a)), _qprime_rhs(model, n, a), N)
            count += 1
            if not ok:
                wd, l, r = witdata
                return CheckReport(spec.id, _params(spec), "FAIL",
                                   _wit(wd, model, l, r, "n=%d,a=%s" % (n, a)),
                                   instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_qprime_q(spec):
    """[q'_n(a), q_m(b)] = -nm { q_{n+m}(ab) + (|n|-1)/2 delta integral(K ab) Id }."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    K = model.canonical
    tuples, sampled = _class_tuples(model, 2, spec.budget, spec.seed)
    count = 0
    for n in range(-B, B + 1):
        if n == 0:
            continue
        for m in range(-B, B + 1):
            if m == 0:
                continue
            for ci, cj in tuples:
                a, b = model.cls_basis(ci), model.cls_basis(cj)
                lhs = commutator(derive(q(n, a)), q(m, b))
                ab = a * b
                terms = []
                if ab:
                    terms.append(ScaleOp(-n * m, q(n + m, ab)))
                if n + m == 0:
                    c = Fraction(-n * m * (abs(n) - 1), 2) * model.integrate(K * ab)
                    if c:
                        terms.append(_id(model, c))
                rhs = SumOp(terms) if terms else _id(model, 0)
                ok, witdata = equal_up_to(lhs, rhs, N)
                count += 1
                if dl.hit(count, 16):
                    return _incomplete(spec, count, sampled)
                if not ok:
                    wd, l, r = witdata
                    return CheckReport(
                        spec.id, _params(spec, sampled), "FAIL",
                        _wit(wd, model, l, r, "n=%d,m=%d,a=%s,b=%s"
                             % (n, m, model.labels[ci], model.labels[cj])),
                        instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _arg_multisets(model, slots, B, budget, seed):
    """Sorted multisets of (index, class) commutator arguments; arguments
    supercommute up to central terms (Jacobi + Heisenberg), so permuted
    tuples are equivalent instances."""
    syms = [(n, ci) for n in range(-B, B + 1) if n for ci in range(model.dim)]
    all_ms = list(combinations_with_replacement(syms, slots))
    if budget == 0 or len(all_ms) <= budget:
        return all_ms, False
    rng = random.Random("%s|args|%s" % (seed, slots))
    picked = set()
    picked.add(tuple(((1, model.unit),) * slots))
    while len(picked) < budget:
        ms = tuple(sorted(rng.choice(syms) for _ in range(slots)))
        picked.add(ms)
    return sorted(picked), True


def _prod_class(model, classes):
    out = model.one()
    for c in classes:
        out = out * c
        if not out:
            break
    return out


def _check_nested_37(spec):
    """k-fold nested bracket of the k-th derivative:
    [..[q^(k)_{n0}(a0), q_{n1}(a1)],..., q_{nk}(ak)]
      = (-1)^k k! n0^k n1..nk q_{sum}(prod a)  { + b integral(K prod a) Id },
    asserted where the central part is pinned: sum(n) != 0, or the
    K-integral vanishes."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    K = model.canonical
    count = 0
    sampled_any = False
    for k in range(0, spec.kmax + 1):
        for n0 in range(-B, B + 1):
            if n0 == 0:
                continue
            for c0 in range(model.dim):
                a0 = model.cls_basis(c0)
                args_list, sampled = _arg_multisets(
                    model, k, B, spec.budget, spec.seed + k)
                sampled_any = sampled_any or sampled
                base = _q_prime(n0, a0, order=k)
                for args in args_list:
                    total = n0 + sum(nn for nn, _ in args)
                    prod_a = _prod_class(
                        model, [a0] + [model.cls_basis(ci) for _, ci in args])
                    if total == 0 and model.integrate(K * prod_a):
                        continue  # central constant not pinned here
                    coef = (-1) ** k
                    for nn, _ in args:
                        coef *= nn
                    coef *= factorial(k) * n0**k
                    lhs = _nested(base, [(nn, model.cls_basis(ci)) for nn, ci in args])
                    rhs = ScaleOp(coef, q(total, prod_a)) if (prod_a and total) else _id(model, 0)
                    ok, witdata = equal_up_to(lhs, rhs, N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled_any), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n0=%d,a0=%s,args=%s"
                                 % (k, n0, model.labels[c0], args)),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled_any), "PASS", instances=count)


def _check_nested_39(spec):
    """(k+1)-fold nested bracket of the k-th derivative is the central
    constant k! n0^k prod(-n_l) delta_{sum n} integral(prod a) Id."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    count = 0
    sampled_any = False
    for k in range(0, spec.kmax + 1):
        for n0 in range(-B, B + 1):
            if n0 == 0:
                continue
            for c0 in range(model.dim):
                a0 = model.cls_basis(c0)
                args_list, sampled = _arg_multisets(
                    model, k + 1, B, spec.budget, spec.seed + 10 * k)
                sampled_any = sampled_any or sampled
                base = _q_prime(n0, a0, order=k)
                for args in args_list:
                    total = n0 + sum(nn for nn, _ in args)
                    scalar = 0
                    if total == 0:
                        prod_a = _prod_class(
                            model, [a0] + [model.cls_basis(ci) for _, ci in args])
                        scalar = factorial(k) * n0**k * model.integrate(prod_a)
                        for nn, _ in args:
                            scalar *= -nn
                    lhs = _nested(base, [(nn, model.cls_basis(ci)) for nn, ci in args])
                    ok, witdata = equal_up_to(lhs, _id(model, scalar), N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled_any)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled_any), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n0=%d,a0=%s,args=%s"
                                 % (k, n0, model.labels[c0], args)),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled_any), "PASS", instances=count)


def _check_transfer_317(spec):
    """[q^(k)_{n0}(a0), q_{n1}(a1)] depends only on a0*a1 (both transfers)."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    one = model.one()
    tuples, sampled = _class_tuples(model, 2, spec.budget, spec.seed)
    count = 0
    for k in range(0, spec.kmax + 1):
        for n0 in range(-B, B + 1):
            if n0 == 0:
                continue
            for n1 in range(-B, B + 1):
                if n1 == 0:
                    continue
                for ci, cj in tuples:
                    a0, a1 = model.cls_basis(ci), model.cls_basis(cj)
                    prod = a0 * a1
                    lhs = BracketOp(_q_prime(n0, a0, k), q(n1, a1))
                    mid = (BracketOp(_q_prime(n0, one, k), q(n1, prod))
                           if prod else _id(model, 0))
                    rgt = (BracketOp(_q_prime(n0, prod, k), q(n1, one))
                           if prod else _id(model, 0))
                    ok, witdata = equal_up_to(lhs, mid, N)
                    if ok:
                        ok, witdata = equal_up_to(lhs, rgt, N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n0=%d,n1=%d,a0=%s,a1=%s"
                                 % (k, n0, n1, model.labels[ci], model.labels[cj])),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _check_w_q_46(spec):
    """[W^k_n(a), q_m(b)] = -m W^{k-1}_{n+m}(ab) for k >= 2."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    tuples, sampled = _class_tuples(model, 2, spec.budget, spec.seed)
    count = 0
    for k in range(2, max(spec.kmax, 2) + 1):
        for n in range(-B, B + 1):
            for m in range(-B, B + 1):
                if m == 0:
                    continue
                for ci, cj in tuples:
                    a, b = model.cls_basis(ci), model.cls_basis(cj)
                    ab = a * b
                    lhs = commutator(w(k, n, a), q(m, b))
                    rhs = ScaleOp(-m, w(k - 1, n + m, ab)) if ab else _id(model, 0)
                    ok, witdata = equal_up_to(lhs, rhs, N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n=%d,m=%d,a=%s,b=%s"
                                 % (k, n, m, model.labels[ci], model.labels[cj])),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _check_nested_w_410a(spec):
    """(k-1)-fold nested bracket of W^k with Heisenberg generators gives
    prod(-n_l) q_{sum}(prod a)."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    count = 0
    sampled_any = False
    for k in range(1, max(spec.kmax, 1) + 1):
        for n0 in range(-B, B + 1):
            for c0 in range(model.dim):
                a0 = model.cls_basis(c0)
                args_list, sampled = _arg_multisets(model, k - 1, B, spec.budget, spec.seed + k)
                sampled_any = sampled_any or sampled
                for args in args_list:
                    total = n0 + sum(nn for nn, _ in args)
                    prod_a = _prod_class(model, [a0] + [model.cls_basis(ci) for _, ci in args])
                    coef = 1
                    for nn, _ in args:
                        coef *= -nn
                    lhs = _nested(w(k, n0, a0), [(nn, model.cls_basis(ci)) for nn, ci in args])
                    rhs = ScaleOp(coef, q(total, prod_a)) if (prod_a and total) else _id(model, 0)
                    ok, witdata = equal_up_to(lhs, rhs, N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled_any), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n0=%d,a0=%s,args=%s"
                                 % (k, n0, model.labels[c0], args)),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled_any), "PASS", instances=count)


def _check_nested_w_410b(spec):
    """k-fold nested bracket of W^k is central:
    prod(-n_l) delta_{sum n} integral(prod a) Id."""
    model, N, B = spec.model, spec.level, spec.index_bound
    dl = _Deadline(spec.max_seconds)
    count = 0
    sampled_any = False
    for k in range(1, max(spec.kmax, 1) + 1):
        for n0 in range(-B, B + 1):
            for c0 in range(model.dim):
                a0 = model.cls_basis(c0)
                args_list, sampled = _arg_multisets(model, k, B, spec.budget, spec.seed + k)
                sampled_any = sampled_any or sampled
                for args in args_list:
                    total = n0 + sum(nn for nn, _ in args)
                    scalar = 0
                    if total == 0:
                        prod_a = _prod_class(
                            model, [a0] + [model.cls_basis(ci) for _, ci in args])
                        scalar = model.integrate(prod_a)
                        for nn, _ in args:
                            scalar *= -nn
                    lhs = _nested(w(k, n0, a0), [(nn, model.cls_basis(ci)) for nn, ci in args])
                    ok, witdata = equal_up_to(lhs, _id(model, scalar), N)
                    count += 1
                    if dl.hit(count, 16):
                        return _incomplete(spec, count, sampled_any)
                    if not ok:
                        wd, l, r = witdata
                        return CheckReport(
                            spec.id, _params(spec, sampled_any), "FAIL",
                            _wit(wd, model, l, r, "k=%d,n0=%d,a0=%s,args=%s"
                                 % (k, n0, model.labels[c0], args)),
                            instances=count)
    return CheckReport(spec.id, _params(spec, sampled_any), "PASS", instances=count)


def _check_w1_eq_q(spec):
    model, N, B = spec.model, spec.level, spec.index_bound
    count = 0
    for n in range(-B, B + 1):
        for a in _basis_classes(model):
            ok, witdata = equal_up_to(w(1, n, a), q(n, a), N)
            count += 1
            if not ok:
                wd, l, r = witdata
                return CheckReport(spec.id, _params(spec), "FAIL",
                                   _wit(wd, model, l, r, "n=%d,a=%s" % (n, a)),
                                   instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_w2_eq_L(spec):
    model, N, B = spec.model, spec.level, spec.index_bound
    count = 0
    for n in range(-B, B + 1):
        for a in _basis_classes(model):
            ok, witdata = equal_up_to(w(2, n, a), virasoro(n, a), N)
            count += 1
            if not ok:
                wd, l, r = witdata
                return CheckReport(spec.id, _params(spec), "FAIL",
                                   _wit(wd, model, l, r, "n=%d,a=%s" % (n, a)),
                                   instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_g0_unit_56(spec):
    """-W^2_0(1) acts on the level-n piece as n * Id."""
    model, N = spec.model, spec.level
    op = ScaleOp(-1, w(2, 0, model.one()))
    count = 0
    for n in range(N + 1):
        for wd in basis(n, model):
            count += 1
            img = op.apply_word(wd)
            want = {wd: n} if n else {}
            if {k: v for k, v in img.items() if v} != want:
                return CheckReport(
                    spec.id, _params(spec), "FAIL",
                    _wit(wd, model, FockVector(model, img), "%d*input" % n, "n=%d" % n),
                    instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_g0_is_minusW2_513iv(spec):
    """The weight-2 degree-zero generator family: -W^2_0(c) = -L_0(c)."""
    model, N = spec.model, spec.level
    count = 0
    for a in _basis_classes(model):
        ok, witdata = equal_up_to(ScaleOp(-1, w(2, 0, a)), ScaleOp(-1, virasoro(0, a)), N)
        count += 1
        if not ok:
            wd, l, r = witdata
            return CheckReport(spec.id, _params(spec), "FAIL",
                               _wit(wd, model, l, r, "a=%s" % a), instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_d_eq_minusW03_514(spec):
    """d = -W^3_0(1) when the canonical class vanishes; SKIP otherwise."""
    model, N = spec.model, spec.level
    if model.canonical:
        return CheckReport(spec.id, _params(spec), "SKIP", witness="K != 0")
    ok, witdata = equal_up_to(boundary(model), ScaleOp(-1, w(3, 0, model.one())), N)
    if not ok:
        wd, l, r = witdata
        return CheckReport(spec.id, _params(spec), "FAIL", _wit(wd, model, l, r, ""),
                           instances=1)
    return CheckReport(spec.id, _params(spec), "PASS", instances=1)


def _adjoint_battery(model, B):
    one = model.one()
    top = model.cls_basis(max(range(model.dim), key=lambda i: model.degs[i]))
    mid = model.cls_basis(min(1, model.dim - 1))
    ops = [boundary(model)]
    for n in range(-B, B + 1):
        if n:
            ops.append(q(n, mid))
            ops.append(virasoro(n, top))
        ops.append(w(3, n, one))
    ops.append(virasoro(0, mid))
    ops.append(q(1, mid) * q(1, top))
    ops.append(commutator(virasoro(1, mid), q(1, mid)))
    ops.append(q(1, mid) + ScaleOp(Fraction(3, 2), q(1, mid)))
    if any(model.par):
        oddc = model.cls_basis(next(i for i in range(model.dim) if model.par[i]))
        ops.append(q(1, oddc))
        ops.append(q(1, oddc) * q(2, oddc))
    return ops


def _check_adjoint_28(spec):
    """<f u, v> = (-1)^{shift(f) |u|} <u, adj(f) v> for an expression battery,
    plus involutivity of the rewrite."""
    model, N, B = spec.model, spec.level, spec.index_bound
    words = basis_up_to(N, model)
    if len(words) > 120:
        rng = random.Random("%s|adj" % spec.seed)
        words = sorted(rng.sample(words, 120))
        sampled = True
    else:
        sampled = False
    count = 0
    for f in _adjoint_battery(model, B):
        fa = adjoint(f)
        ok, witdata = equal_up_to(adjoint(fa), f, min(N, 2))
        if not ok:
            wd, l, r = witdata
            return CheckReport(spec.id, _params(spec, sampled), "FAIL",
                               _wit(wd, model, l, r, "adj(adj(%r))" % f), instances=count)
        mshift = f.bidegree[1] & 1 if f.bidegree else (f.parity or 0)
        lshift = f.bidegree[0] if f.bidegree else None
        for u in words:
            for v in words:
                if lshift is not None and mono_level(u) + lshift != mono_level(v):
                    continue
                fu = FockVector(model, {u: 1})
                fv = FockVector(model, {v: 1})
                lhs = pair_fock(f(fu), fv)
                s = -1 if (mshift and mono_cohdeg(u, model) & 1) else 1
                rhs = s * pair_fock(fu, fa(fv))
                count += 1
                if lhs != rhs:
                    return CheckReport(
                        spec.id, _params(spec, sampled), "FAIL",
                        "f=%r u=%s v=%s lhs=%s rhs=%s"
                        % (f, FockVector(model, {u: 1}), FockVector(model, {v: 1}), lhs, rhs),
                        instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _check_d_selfadjoint(spec):
    """<d u, v> = <u, d v> on all same-level basis pairs up to the bound."""
    model, N = spec.model, spec.level
    d = boundary(model)
    count = 0
    for n in range(N + 1):
        words = basis(n, model)
        if len(words) > 150:
            rng = random.Random("%s|dselfadj|%s" % (spec.seed, n))
            words = sorted(rng.sample(words, 150))
            sampled = True
        else:
            sampled = False
        by_deg = {}
        for wd in words:
            by_deg.setdefault(mono_cohdeg(wd, model), []).append(wd)
        for wd in words:
            # d has cohomological shift 2: only pairs of complementary degree
            partners = by_deg.get(4 * n - mono_cohdeg(wd, model) - 2, [])
            for v in partners:
                fu = FockVector(model, {wd: 1})
                fv = FockVector(model, {v: 1})
                count += 1
                if pair_fock(d(fu), fv) != pair_fock(fu, d(fv)):
                    return CheckReport(
                        spec.id, _params(spec), "FAIL",
                        "u=%s v=%s" % (fu, fv), instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _check_pairing_nondegenerate(spec):
    """The Gram matrix of each level piece is invertible.

    The pairing of two words vanishes unless their part-size multisets
    agree and their degrees are complementary, so the Gram matrix splits
    into small blocks indexed by (size multiset, degree)."""
    model, N = spec.model, spec.level
    count = 0
    for n in range(N + 1):
        words = basis(n, model)
        groups = {}
        for wd in words:
            sizes = tuple(sorted((p for p, _ in wd), reverse=True))
            groups.setdefault((sizes, mono_cohdeg(wd, model)), []).append(wd)
        done = set()
        for (sizes, deg), rows in sorted(groups.items()):
            comp = 4 * n - deg
            key = (sizes, min(deg, comp))
            if key in done:
                continue
            done.add(key)
            cols = groups.get((sizes, comp), []) if comp != deg else rows
            if len(rows) != len(cols):
                return CheckReport(
                    spec.id, _params(spec), "FAIL",
                    "level %d sizes=%s deg %d/%d blocks %dx%d not square"
                    % (n, sizes, deg, comp, len(rows), len(cols)), instances=count)
            mat = [
                [pair_fock(FockVector(model, {u: 1}), FockVector(model, {v: 1}))
                 for v in cols]
                for u in rows
            ]
            count += 1
            if _rank(mat) != len(rows):
                return CheckReport(
                    spec.id, _params(spec), "FAIL",
                    "level %d sizes=%s deg %d block singular" % (n, sizes, deg),
                    instances=count)
    return CheckReport(spec.id, _params(spec), "PASS", instances=count)


def _rank(mat):
    m = [row[:] for row in mat]
    rank = 0
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for r in range(rank + 1, rows):
            if m[r][c]:
                f = Fraction(m[r][c], 1) / pv
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _check_coassoc_tau(spec):
    """Diagonal pushforward laws: coassociativity at k = 3, leg symmetry of
    tau_2, and the defining pairing identity for k <= 3."""
    model = spec.model
    count = 0
    par = model.par
    # coassociativity: expand first leg vs last leg of tau_2, compare at k=3
    for c in range(model.dim):
        t3 = model.diag_push(model.cls_basis(c), 3)
        alt = {}
        for (i, j), tc in model.diag_push(model.cls_basis(c), 2).terms.items():
            for (j1, j2), tc2 in model.diag_push(model.cls_basis(j), 2).terms.items():
                t = (i, j1, j2)
                alt[t] = alt.get(t, 0) + tc * tc2
        count += 1
        if {k: v for k, v in alt.items() if v} != t3.terms:
            return CheckReport(spec.id, _params(spec), "FAIL",
                               "coassociativity fails on %s" % model.labels[c],
                               instances=count)
    # super-symmetry of tau_2
    for c in range(model.dim):
        t2 = model.diag_push(model.cls_basis(c), 2).terms
        swapped = {}
        for (i, j), tc in t2.items():
            s = -1 if (par[i] and par[j]) else 1
            swapped[(j, i)] = swapped.get((j, i), 0) + s * tc
        count += 1
        if {k: v for k, v in swapped.items() if v} != t2:
            return CheckReport(spec.id, _params(spec), "FAIL",
                               "tau_2 leg symmetry fails on %s" % model.labels[c],
                               instances=count)
    # pairing identity
    for k in (2, 3):
        tuples, sampled = _class_tuples(model, k, spec.budget, spec.seed + k)
        for c in range(model.dim):
            alpha = model.cls_basis(c)
            tk = model.diag_push(alpha, k)
            for tup in tuples:
                lhs = tk.mul_decomposable(tup).integrate()
                prod = _prod_class(model, [alpha] + [model.cls_basis(i) for i in tup])
                rhs = model.integrate(prod)
                count += 1
                if lhs != rhs:
                    return CheckReport(
                        spec.id, _params(spec, sampled), "FAIL",
                        "pairing identity fails: k=%d alpha=%s legs=%s lhs=%s rhs=%s"
                        % (k, model.labels[c], [model.labels[i] for i in tup],
                           lhs, rhs),
                        instances=count)
    return CheckReport(spec.id, _params(spec, sampled), "PASS", instances=count)


def _params(spec, sampled=False):
    p = {"model": spec.model.name, "N": spec.level, "B": spec.index_bound}
    if spec.id in ("nested_37", "nested_39", "transfer_317", "w_q_46",
                   "nested_w_410a", "nested_w_410b"):
        p["kmax"] = spec.kmax
    if sampled:
        p["classes"] = "sampled:%d" % spec.budget
    return p
