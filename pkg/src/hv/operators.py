"""The operator algebra acting on the Fock space.

Generators:

  q(n, a)        Heisenberg: creation for n > 0, annihilation for n < 0
                 (adjoint convention q(n,a)^+ = (-1)^n q(-n,a)), q(0,.) = 0.
  virasoro(n, a) quadratic generator  (1/2) sum_m q_m q_{n-m} tau_2(a),
                 normally ordered for n = 0.
  w(k, n, a)     the z^(n-k) coefficient of the arity-k normally ordered
                 product of the diagonal field of a, scaled by 1/k!.
                 w(1,.) and w(2,.) reproduce q and virasoro on every
                 finite level.
  boundary()     the degree-(0,2) operator fixed by d|0> = 0 and the
                 Leibniz rule with q_n(b) |-> n L_n(b) + n(n-1)/2 q_n(K b).

Operators are closed under +, scalar *, composition (*), superbracket,
adjoint and derivative ad(boundary).  Application is exact over Q and
lazily truncated: on an input of bounded level only finitely many modes
of any generator survive.

Sign conventions are concentrated in three places: cre_word / ann_word
(fock module), the first-leg expansion of the diagonal tensors
(frobenius module), and the normally ordered split a_+ b + (-1)^{ab} b a_-
used by the arity recursion here.
"""

import weakref
from fractions import Fraction
from math import factorial

from hv.frobenius import GradedClass, ModelError, _norm
from hv.fock import (
    FockVector,
    ann_word,
    basis,
    cre_word,
    mono_level,
    sort_word_sign,
)


class OperatorError(Exception):
    pass


def _acc(out, w, c):
    v = out.get(w, 0) + c
    if v:
        out[w] = v
    elif w in out:
        del out[w]


def _clean(d):
    return {w: _norm(c) for w, c in d.items() if c}


class Operator:
    """Base: a locally finite endomorphism with bidegree/parity metadata."""

    model = None
    bidegree = None  # (level shift, cohomological shift) or None
    parity = None  # 0, 1, or None when not parity-homogeneous

    def apply_word(self, word):
        raise NotImplementedError

    def apply_dict(self, d):
        out = {}
        for w, c in d.items():
            img = self.apply_word(w)
            for w2, c2 in img.items():
                _acc(out, w2, c * c2)
        return out

    def apply(self, v):
        return FockVector(self.model, self.apply_dict(v.terms), _clean=False)

    def __call__(self, v):
        return self.apply(v)

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return SumOp((self, other))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, Operator):
            return ComposeOp(self, other)
        return ScaleOp(other, self)

    def __rmul__(self, scalar):
        return ScaleOp(scalar, self)


class ZeroOp(Operator):
    def __init__(self, model):
        self.model = model
        self.bidegree = None
        self.parity = 0

    def apply_word(self, word):
        return {}

    def __repr__(self):
        return "0"


class IdOp(Operator):
    def __init__(self, model):
        self.model = model
        self.bidegree = (0, 0)
        self.parity = 0

    def apply_word(self, word):
        return {word: 1}

    def __repr__(self):
        return "Id"


def _cls_key(alpha):
    return tuple(sorted(alpha.coeffs.items()))


def _cls_parity(model, coeffs):
    ps = {model.par[ci] for ci, _ in coeffs}
    if not ps:
        return 0
    return ps.pop() if len(ps) == 1 else None


def _cls_degree(model, coeffs):
    ds = {model.degs[ci] for ci, _ in coeffs}
    if not ds:
        return 0
    return ds.pop() if len(ds) == 1 else None


class QGen(Operator):
    """Heisenberg generator for a fixed class expansion."""

    def __init__(self, model, n, coeffs):
        self.model = model
        self.n = n
        self.coeffs = coeffs
        d = _cls_degree(model, coeffs)
        self.bidegree = (n, 2 * n - 2 + d) if d is not None else None
        self.parity = _cls_parity(model, coeffs)
        self._memo = {}

    def apply_word(self, word):
        got = self._memo.get(word)
        if got is None:
            got = _q_word(self.model, self.n, self.coeffs, word)
            if len(self._memo) > 150000:
                self._memo.clear()
            self._memo[word] = got
        return got

    def __repr__(self):
        return "q(%d,%s)" % (self.n, _cls_repr(self.model, self.coeffs))


def _q_word(model, n, coeffs, word):
    out = {}
    par = model.par
    if n > 0:
        for ci, c in coeffs:
            r = cre_word(n, ci, word, par)
            if r is not None:
                _acc(out, r[1], r[0] * c)
    elif n < 0:
        gram = model.gram
        for ci, c in coeffs:
            for cc, w2 in ann_word(-n, ci, word, par, gram[ci]):
                _acc(out, w2, cc * c)
    return out


class LGen(Operator):
    """Virasoro generator, evaluated through the contraction-collapsed form.

    The defining bilateral mode sum regroups exactly (supercommuting
    equal-sign factors, symmetric diagonal tensor) into

        L_n(a) = 1/2 sum_{0<m<n}   q_m q_{n-m} tau_2(a)      [n >= 2]
               +     sum_{s>=1}    q_{n+s} q_{-s} tau_2(a)   [n+s != 0]
               + 1/2 sum_{n<m<0}   q_m q_{n-m} tau_2(a)      [n <= -2]

    and in the middle block the contraction of the second tensor leg
    against a word symbol q_s(b) collapses to the single class a*b.
    The regrouping is validated against the literal mode sum in the tests.
    """

    def __init__(self, model, n, coeffs):
        self.model = model
        self.n = n
        self.coeffs = coeffs
        d = _cls_degree(model, coeffs)
        self.bidegree = (n, 2 * n + d) if d is not None else None
        self.parity = _cls_parity(model, coeffs)
        self._memo = {}
        self._tau2 = None

    def _tau2_terms(self):
        if self._tau2 is None:
            alpha = GradedClass(self.model, dict(self.coeffs))
            t = self.model.diag_push(alpha, 2)
            self._tau2 = tuple(sorted(t.terms.items()))
        return self._tau2

    def apply_word(self, word):
        got = self._memo.get(word)
        if got is not None:
            return got
        model, n = self.model, self.n
        par, gram = model.par, model.gram
        out = {}
        # mixed block q_{n+s} q_{-s} with n+s >= 1: the annihilator contracts
        # a word symbol q_s(b) and the second tensor leg collapses to a*b
        neg = 0
        for t, (sz, cp) in enumerate(word):
            m = n + sz
            if m >= 1:
                kappa = -1 if (par[cp] and neg & 1) else 1
                w2 = word[:t] + word[t + 1 :]
                base = -sz * kappa
                for ck, c in model.mul_coeffs(self.coeffs, cp):
                    r = cre_word(m, ck, w2, par)
                    if r is not None:
                        _acc(out, r[1], r[0] * base * c)
            neg += par[cp]
        # double creation / double annihilation blocks
        if n >= 2 or n <= -2:
            half = Fraction(1, 2)
            rng = range(1, n) if n >= 2 else range(n + 1, 0)
            for (c1, c2), tc in self._tau2_terms():
                wt = half * tc
                for m in rng:
                    inner = _q_word(model, n - m, ((c2, 1),), word)
                    for w2, cc in inner.items():
                        for w3, cc2 in _q_word(model, m, ((c1, 1),), w2).items():
                            _acc(out, w3, wt * cc * cc2)
        got = _clean(out)
        if len(self._memo) > 60000:
            self._memo.clear()
        self._memo[word] = got
        return got

    def __repr__(self):
        return "L(%d,%s)" % (self.n, _cls_repr(self.model, self.coeffs))


class WGen(Operator):
    """Mode n of the arity-k normally ordered diagonal field, over k!.

    Evaluation peels the outermost tensor leg per the recursive normal
    ordering split a_+ B + (-1)^{ab} B a_-, with the annihilation side
    collapsed against word symbols through the first-leg expansion of the
    diagonal tensors.  Cross-checked in the tests against the literal
    composition-sum evaluation.
    """

    def __init__(self, model, k, n, coeffs):
        if k < 1:
            raise OperatorError("w: conformal index k must be >= 1")
        self.model = model
        self.k = k
        self.n = n
        self.coeffs = coeffs
        d = _cls_degree(model, coeffs)
        self.bidegree = (n, 2 * n + 2 * k - 4 + d) if d is not None else None
        self.parity = _cls_parity(model, coeffs)
        self._inv_fact = Fraction(1, factorial(k))
        self._memo = {}

    def apply_word(self, word):
        got = self._memo.get(word)
        if got is None:
            st = _engine(self.model)
            out = {}
            for ci, c in self.coeffs:
                sub = _w_mode(self.model, st, self.k, ci, self.n, word)
                f = c * self._inv_fact
                for w2, c2 in sub.items():
                    _acc(out, w2, f * c2)
            got = _clean(out)
            if len(self._memo) > 60000:
                self._memo.clear()
            self._memo[word] = got
        return got

    def __repr__(self):
        return "W(%d,%d,%s)" % (self.k, self.n, _cls_repr(self.model, self.coeffs))


class _EngineState:
    __slots__ = ("w_memo",)

    def __init__(self):
        self.w_memo = {}


_ENGINES = weakref.WeakKeyDictionary()


def _engine(model):
    st = _ENGINES.get(model)
    if st is None:
        st = _EngineState()
        _ENGINES[model] = st
    return st


def _w_mode(model, st, k, c, p, word):
    """Mode p of the arity-k normally ordered field of tau_k(b_c), applied."""
    if k == 1:
        return _q_word(model, p, ((c, 1),), word)
    level = mono_level(word)
    if p < -level:
        return {}
    key = (k, c, p, word)
    memo = st.w_memo
    got = memo.get(key)
    if got is not None:
        return got
    par = model.par
    out = {}
    # creation side: first leg q_m(b_i) with m >= 1 lands on the left
    for i, s, _ann, rest in model._first_leg[c]:
        for m in range(1, p + level + 1):
            pm = p - m
            for c2, rc in rest:
                sub = _w_mode(model, st, k - 1, c2, pm, word)
                if not sub:
                    continue
                f = s * rc
                for w2, c3 in sub.items():
                    r = cre_word(m, i, w2, par)
                    if r is not None:
                        _acc(out, r[1], r[0] * f * c3)
    # annihilation side: first leg contracts a word symbol before the rest acts
    fmap = model._first_leg_map[c]
    neg = 0
    for t, (sz, cp) in enumerate(word):
        kappa = -1 if (par[cp] and neg & 1) else 1
        w2 = word[:t] + word[t + 1 :]
        pp = p + sz
        for i, g in model.partners_of[cp]:
            fl = fmap.get(i)
            if fl is None:
                continue
            s, ann, rest = fl
            base = s * ann * kappa * (-sz) * g
            for c2, rc in rest:
                sub = _w_mode(model, st, k - 1, c2, pp, w2)
                f = base * rc
                for w3, c3 in sub.items():
                    _acc(out, w3, f * c3)
        neg += par[cp]
    out = _clean(out)
    if len(memo) > 400000:
        memo.clear()
    memo[key] = out
    return out


class DGen(Operator):
    """Boundary operator: d|0> = 0 plus the Leibniz sum replacing each
    creation symbol q_n(b) by n L_n(b) + n(n-1)/2 q_n(K b)."""

    def __init__(self, model):
        self.model = model
        self.bidegree = (0, 2)
        self.parity = 0
        self._memo = {(): {}}
        self._lgen = {}

    def _l(self, n, ci):
        op = self._lgen.get((n, ci))
        if op is None:
            key = ("L", n, ((ci, 1),))
            op = _interned(self.model, key, lambda: LGen(self.model, n, ((ci, 1),)))
            self._lgen[(n, ci)] = op
        return op

    def apply_word(self, word):
        got = self._memo.get(word)
        if got is not None:
            return got
        model = self.model
        par = model.par
        n, ci = word[0]
        rest = word[1:]
        out = {}
        for w2, c in self._l(n, ci).apply_word(rest).items():
            _acc(out, w2, n * c)
        if n > 1 and model.kx[ci]:
            f = n * (n - 1) // 2
            for w2, c in _q_word(model, n, model.kx[ci], rest).items():
                _acc(out, w2, f * c)
        for w2, c in self.apply_word(rest).items():
            r = cre_word(n, ci, w2, par)
            if r is not None:
                _acc(out, r[1], r[0] * c)
        got = _clean(out)
        if len(self._memo) > 100000:
            self._memo.clear()
            self._memo[()] = {}
        self._memo[word] = got
        return got

    def __repr__(self):
        return "d"


class SumOp(Operator):
    def __init__(self, ops):
        flat = []
        for op in ops:
            if isinstance(op, SumOp):
                flat.extend(op.ops)
            else:
                flat.append(op)
        self.ops = tuple(flat)
        self.model = self.ops[0].model
        bids = {op.bidegree for op in self.ops}
        self.bidegree = bids.pop() if len(bids) == 1 else None
        pars = {op.parity for op in self.ops}
        self.parity = pars.pop() if len(pars) == 1 else None

    def apply_word(self, word):
        out = {}
        for op in self.ops:
            for w2, c in op.apply_word(word).items():
                _acc(out, w2, c)
        return out

    def apply_dict(self, d):
        out = {}
        for op in self.ops:
            for w2, c in op.apply_dict(d).items():
                _acc(out, w2, c)
        return out

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.ops)) + ")"


class ScaleOp(Operator):
    def __init__(self, scalar, op):
        self.model = op.model
        self.scalar = scalar
        self.op = op
        self.bidegree = op.bidegree
        self.parity = op.parity

    def apply_word(self, word):
        s = self.scalar
        if not s:
            return {}
        return {w: s * c for w, c in self.op.apply_word(word).items()}

    def apply_dict(self, d):
        s = self.scalar
        if not s:
            return {}
        return {w: s * c for w, c in self.op.apply_dict(d).items()}

    def __repr__(self):
        from hv.frobenius import coeff_str

        return "%s*%r" % (coeff_str(self.scalar), self.op)


class ComposeOp(Operator):
    """f * g applies g first."""

    def __init__(self, f, g):
        self.model = f.model
        self.f = f
        self.g = g
        if f.bidegree is not None and g.bidegree is not None:
            self.bidegree = (f.bidegree[0] + g.bidegree[0], f.bidegree[1] + g.bidegree[1])
        else:
            self.bidegree = None
        if f.parity is not None and g.parity is not None:
            self.parity = f.parity ^ g.parity
        else:
            self.parity = None

    def apply_word(self, word):
        return self.f.apply_dict(self.g.apply_word(word))

    def apply_dict(self, d):
        return self.f.apply_dict(self.g.apply_dict(d))

    def __repr__(self):
        return "%r*%r" % (self.f, self.g)


class BracketOp(Operator):
    """Superbracket [f, g] = f g - (-1)^{parity f * parity g} g f."""

    def __init__(self, f, g):
        if f.parity is None or g.parity is None:
            raise OperatorError("commutator requires parity-homogeneous operators")
        self.model = f.model
        self.f = f
        self.g = g
        self.sign = -1 if (f.parity and g.parity) else 1
        if f.bidegree is not None and g.bidegree is not None:
            self.bidegree = (f.bidegree[0] + g.bidegree[0], f.bidegree[1] + g.bidegree[1])
        else:
            self.bidegree = None
        self.parity = f.parity ^ g.parity

    def apply_word(self, word):
        out = self.f.apply_dict(self.g.apply_word(word))
        back = self.g.apply_dict(self.f.apply_word(word))
        s = -self.sign
        for w2, c in back.items():
            _acc(out, w2, s * c)
        return out

    def apply_dict(self, d):
        out = self.f.apply_dict(self.g.apply_dict(d))
        back = self.g.apply_dict(self.f.apply_dict(d))
        s = -self.sign
        for w2, c in back.items():
            _acc(out, w2, s * c)
        return out

    def __repr__(self):
        return "[%r,%r]" % (self.f, self.g)


def _cls_repr(model, coeffs):
    if not coeffs:
        return "0"
    if len(coeffs) == 1 and coeffs[0][1] == 1:
        return model.labels[coeffs[0][0]]
    return "(" + repr(GradedClass(model, dict(coeffs))) + ")"


class MemoOp(Operator):
    """Caches apply_word of a wrapped operator (for reused bracket trees)."""

    def __init__(self, op):
        self.model = op.model
        self.op = op
        self.bidegree = op.bidegree
        self.parity = op.parity
        self._memo = {}

    def apply_word(self, word):
        got = self._memo.get(word)
        if got is None:
            got = _clean(self.op.apply_word(word))
            if len(self._memo) > 200000:
                self._memo.clear()
            self._memo[word] = got
        return got

    def __repr__(self):
        return repr(self.op)


# -- public constructors -------------------------------------------------------


def q(n, alpha):
    """Heisenberg generator q_n(alpha); q_0 is the zero operator."""
    model = alpha.model
    if n == 0 or not alpha:
        return ZeroOp(model)
    return _interned(model, ("q", n, _cls_key(alpha)), lambda: QGen(model, n, _cls_key(alpha)))


def virasoro(n, alpha):
    model = alpha.model
    if not alpha:
        return ZeroOp(model)
    return _interned(model, ("L", n, _cls_key(alpha)), lambda: LGen(model, n, _cls_key(alpha)))


def w(k, n, alpha):
    model = alpha.model
    if k < 1:
        raise OperatorError("w: conformal index k must be >= 1")
    if not alpha:
        return ZeroOp(model)
    return _interned(
        model, ("W", k, n, _cls_key(alpha)), lambda: WGen(model, k, n, _cls_key(alpha))
    )


def boundary(model):
    return _interned(model, ("d",), lambda: DGen(model))


def identity(model):
    return _interned(model, ("Id",), lambda: IdOp(model))


def zero(model):
    return ZeroOp(model)


_GEN_CACHE = weakref.WeakKeyDictionary()


def _interned(model, key, build):
    cache = _GEN_CACHE.get(model)
    if cache is None:
        cache = {}
        _GEN_CACHE[model] = cache
    op = cache.get(key)
    if op is None:
        op = build()
        cache[key] = op
    return op


def commutator(f, g):
    """Superbracket with the sign fixed by cohomological parities."""
    return BracketOp(f, g)


def derive(f):
    """ad(boundary): f' = [d, f]."""
    return BracketOp(boundary(f.model), f)


def adjoint(f):
    """Rewrite an operator expression tree into its adjoint.

    Generator rules: q_n(a)+ = (-1)^n q_{-n}(a), and the empirically fixed
    L_n(a)+ = (-1)^n L_{-n}(a), W^k_n(a)+ = (-1)^n W^k_{-n}(a), d+ = d
    (each frozen by a pairing regression test).  Composites follow
    (fg)+ = (-1)^{pf pg} g+ f+ and [f,g]+ = -[f+, g+].
    """
    model = f.model
    if isinstance(f, QGen):
        alpha = GradedClass(model, dict(f.coeffs))
        op = q(-f.n, alpha)
        return op if f.n % 2 == 0 else ScaleOp(-1, op)
    if isinstance(f, LGen):
        alpha = GradedClass(model, dict(f.coeffs))
        op = virasoro(-f.n, alpha)
        return op if f.n % 2 == 0 else ScaleOp(-1, op)
    if isinstance(f, WGen):
        alpha = GradedClass(model, dict(f.coeffs))
        op = w(f.k, -f.n, alpha)
        return op if f.n % 2 == 0 else ScaleOp(-1, op)
    if isinstance(f, (DGen, IdOp, ZeroOp)):
        return f
    if isinstance(f, SumOp):
        return SumOp(tuple(adjoint(op) for op in f.ops))
    if isinstance(f, ScaleOp):
        return ScaleOp(f.scalar, adjoint(f.op))
    if isinstance(f, ComposeOp):
        if f.f.parity is None or f.g.parity is None:
            raise OperatorError("adjoint of a composition needs parity-homogeneous factors")
        s = -1 if (f.f.parity and f.g.parity) else 1
        op = ComposeOp(adjoint(f.g), adjoint(f.f))
        return op if s == 1 else ScaleOp(-1, op)
    if isinstance(f, BracketOp):
        return ScaleOp(-1, BracketOp(adjoint(f.f), adjoint(f.g)))
    raise OperatorError("no adjoint rule for %r" % (type(f).__name__,))


# -- normally ordered words ----------------------------------------------------


class NormalWord:
    """Rational combination of normally ordered q-words.

    Each word is a tuple of (n, ci) symbols with every negative n to the
    right of every positive n, both blocks canonically sorted.
    """

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None, _clean=True):
        self.model = model
        terms = terms or {}
        if _clean:
            terms = {w: _norm(c) for w, c in terms.items() if c}
        self.terms = terms

    def __eq__(self, other):
        return (
            isinstance(other, NormalWord)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            elif w in out:
                del out[w]
        return NormalWord(self.model, out, _clean=False)

    def __rmul__(self, scalar):
        return NormalWord(self.model, {w: scalar * c for w, c in self.terms.items()})

    def max_len(self):
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        from hv.frobenius import coeff_str

        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (-len(w), w)):
            sym = "*".join("q(%d,%s)" % (n, self.model.labels[ci]) for n, ci in w) or "Id"
            bits.append("%s*%s" % (coeff_str(self.terms[w]), sym))
        return " + ".join(bits)


def normal_order_word(word, model):
    """Wick normal ordering of a finite word of q_{+-n}(label) symbols.

    Annihilators move right past creators with the Koszul sign, emitting
    the contraction n * delta * integral(ab) on the remaining word.
    """
    resolved = []
    for n, b in word:
        if isinstance(b, str):
            if b not in model.index:
                raise ModelError("unknown basis label %r" % (b,))
            b = model.index[b]
        if n == 0:
            return NormalWord(model)  # q_0 = 0 kills the whole word
        resolved.append((n, b))
    par, gram = model.par, model.gram
    out = {}
    stack = [(1, tuple(resolved))]
    while stack:
        coeff, wd = stack.pop()
        for t in range(len(wd) - 1):
            (a, ci), (b, cj) = wd[t], wd[t + 1]
            if a < 0 and b > 0:
                sgn = -1 if (par[ci] and par[cj]) else 1
                stack.append((coeff * sgn, wd[:t] + ((b, cj), (a, ci)) + wd[t + 2 :]))
                if a + b == 0:
                    g = gram[ci][cj]
                    if g:
                        stack.append((coeff * a * g, wd[:t] + wd[t + 2 :]))
                break
        else:
            r = sort_word_sign(wd, par)
            if r is not None:
                _acc(out, r[1], r[0] * coeff)
    return NormalWord(model, out)


def leading_term(nw):
    """Restriction of a NormalWord to its maximal-length words."""
    top = nw.max_len()
    return NormalWord(
        nw.model, {w: c for w, c in nw.terms.items() if len(w) == top}, _clean=False
    )


def equal_up_to(f, g, n_max, model=None):
    """Extensional equality on every basis word of level <= n_max.

    Returns (True, None) or (False, (word, f image, g image)).
    """
    model = model or f.model
    for level in range(n_max + 1):
        for wd in basis(level, model):
            a = f.apply_word(wd)
            b = g.apply_word(wd)
            if _clean(a) != _clean(b):
                return False, (
                    wd,
                    FockVector(model, a),
                    FockVector(model, b),
                )
    return True, None
