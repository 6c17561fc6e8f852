"""Finite graded Frobenius algebra models of a surface cohomology ring.

A surface model is a finite-dimensional graded algebra over Q with degrees
in 0..4, together with an integral functional supported in degree 4 whose
pairing (a, b) -> integral(a*b) is nondegenerate, and a distinguished
degree-2 "canonical" class.  Multiplication is supercommutative: odd
degree classes anticommute.  Products whose total degree exceeds 4
truncate to zero.

The diagonal pushforwards tau_k : model -> model^{tensor k} are determined
by the pairing identity

    integral_k( tau_k(a) * (b_1 x ... x b_k) ) = integral( a*b_1*...*b_k )

and are realized here through dual bases of the Gram matrix.
"""

import json
from fractions import Fraction

BUILTIN_NAMES = ("p2", "p1xp1", "torus", "evenk0")


class ModelError(Exception):
    """Schema or usage error in surface-model data; message names the field."""


def parse_coeff(s):
    """Parse a rational written as 'p' or 'p/q' (q > 0, lowest terms)."""
    if isinstance(s, int):
        return s
    if not isinstance(s, str):
        raise ModelError("coeff: expected string rational, got %r" % (s,))
    txt = s.strip()
    try:
        if "/" in txt:
            p, q = txt.split("/")
            num, den = int(p), int(q)
        else:
            num, den = int(txt), 1
    except ValueError:
        raise ModelError("coeff: %r is not a rational 'p' or 'p/q'" % (s,)) from None
    if den <= 0:
        raise ModelError("coeff: %r has nonpositive denominator" % (s,))
    c = Fraction(num, den)
    if c.denominator != den:
        raise ModelError("coeff: %r is not in lowest terms" % (s,))
    return _norm(c)


def coeff_str(c):
    """Inverse of parse_coeff."""
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def _norm(c):
    """Collapse integral Fractions back to int (ints multiply ~30x faster)."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class GradedClass:
    """Element of the model algebra: rational coefficients per basis label."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model, coeffs):
        self.model = model
        self.coeffs = {i: _norm(c) for i, c in coeffs.items() if c}

    def __bool__(self):
        return bool(self.coeffs)

    def _same(self, other):
        if not isinstance(other, GradedClass) or other.model is not self.model:
            raise ModelError("mixed-model operands")

    def __eq__(self, other):
        return (
            isinstance(other, GradedClass)
            and self.model is other.model
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return GradedClass(self.model, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        return GradedClass(self.model, {i: scalar * c for i, c in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.model.mul(self, other)

    def degrees(self):
        return sorted({self.model.degs[i] for i in self.coeffs})

    def degree(self):
        """Degree of a homogeneous class (None for 0 or mixed)."""
        ds = self.degrees()
        return ds[0] if len(ds) == 1 else None

    def parity(self):
        """0/1 parity of a parity-homogeneous class, else None."""
        ps = {self.model.degs[i] & 1 for i in self.coeffs}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def homogeneous_part(self, d):
        return GradedClass(
            self.model, {i: c for i, c in self.coeffs.items() if self.model.degs[i] == d}
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for i in sorted(self.coeffs):
            c = self.coeffs[i]
            bits.append("%s*%s" % (coeff_str(c), self.model.labels[i]))
        return " + ".join(bits)


class TensorClass:
    """Element of the k-fold tensor power, as label-tuple terms.

    Multiplication of decomposables uses the Koszul rule: pulling each
    right-hand leg into place contributes (-1) per odd-odd transposition.
    The integral of a decomposable is the product of the leg integrals.
    """

    __slots__ = ("model", "k", "terms")

    def __init__(self, model, k, terms):
        if k < 1:
            raise ModelError("tensor arity k must be >= 1")
        self.model = model
        self.k = k
        self.terms = {t: _norm(c) for t, c in terms.items() if c}

    def __eq__(self, other):
        return (
            isinstance(other, TensorClass)
            and self.model is other.model
            and self.k == other.k
            and self.terms == other.terms
        )

    def __add__(self, other):
        if self.k != other.k:
            raise ModelError("tensor arity mismatch")
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + c
        return TensorClass(self.model, self.k, out)

    def __rmul__(self, scalar):
        return TensorClass(self.model, self.k, {t: scalar * c for t, c in self.terms.items()})

    def mul_decomposable(self, legs):
        """Multiply by b_{legs[0]} x ... x b_{legs[k-1]} on the right."""
        m = self.model
        par = m.par
        out = {}
        for t, c in self.terms.items():
            cur = {t: c}
            # leg j crosses the original legs j+1..k-1 of self on its way in
            tail_par = [0] * (self.k + 1)
            for j in range(self.k - 1, -1, -1):
                tail_par[j] = tail_par[j + 1] ^ par[t[j]]
            for j in range(self.k - 1, -1, -1):
                lj = legs[j]
                s = -1 if (par[lj] and tail_par[j + 1]) else 1
                nxt = {}
                for tt, cc in cur.items():
                    for kk, mc in m.mul_ci[tt[j]][lj]:
                        t2 = tt[:j] + (kk,) + tt[j + 1 :]
                        nxt[t2] = nxt.get(t2, 0) + s * cc * mc
                cur = nxt
            for tt, cc in cur.items():
                out[tt] = out.get(tt, 0) + cc
        return TensorClass(self.model, self.k, out)

    def integrate(self):
        m = self.model
        total = 0
        for t, c in self.terms.items():
            p = c
            for i in t:
                p = p * m.integral_vec[i]
                if not p:
                    break
            total += p
        return _norm(total)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for t in sorted(self.terms):
            lbl = "(x)".join(self.model.labels[i] for i in t)
            bits.append("%s*%s" % (coeff_str(self.terms[t]), lbl))
        return " + ".join(bits)


class ModelReport:
    """Outcome of validate(): named invariant checks with witnesses."""

    def __init__(self, name, checks):
        self.name = name
        self.checks = checks  # list of (check id, ok, witness or None)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def lines(self):
        out = []
        for cid, ok, witness in self.checks:
            line = "MODEL %s %s %s" % (self.name, cid, "PASS" if ok else "FAIL")
            if witness and not ok:
                line += " witness=%s" % witness
            out.append(line)
        return out

    def to_json(self):
        return {
            "model": self.name,
            "ok": self.ok,
            "checks": [
                {"id": cid, "status": "PASS" if ok else "FAIL", "witness": witness}
                for cid, ok, witness in self.checks
            ],
        }


class SurfaceModel:
    """Graded Frobenius algebra with integral and canonical class."""

    def __init__(self, name, basis, unit, products, integral, canonical):
        """
        basis:     list of (label, degree), degree in 0..4
        unit:      label of the degree-0 unit
        products:  list of (left, right, [(label, coeff), ...]) with
                   index(left) <= index(right); unit rows may be omitted
        integral:  list of (label, coeff)
        canonical: list of (label, coeff)
        """
        if not basis:
            raise ModelError("basis: empty")
        self.name = name
        self.labels = [lbl for lbl, _ in basis]
        self.degs = tuple(d for _, d in basis)
        if len(set(self.labels)) != len(self.labels):
            dup = sorted({l for l in self.labels if self.labels.count(l) > 1})
            raise ModelError("basis: duplicate labels %s" % ", ".join(dup))
        for lbl, d in basis:
            if not isinstance(d, int) or not (0 <= d <= 4):
                raise ModelError("basis: label %r has degree %r outside 0..4" % (lbl, d))
        self.dim = len(self.labels)
        self.index = {lbl: i for i, lbl in enumerate(self.labels)}
        self.par = tuple(d & 1 for d in self.degs)
        if unit not in self.index:
            raise ModelError("unit: label %r not in basis" % (unit,))
        self.unit = self.index[unit]

        table = [[None] * self.dim for _ in range(self.dim)]
        for left, right, result in products:
            if left not in self.index:
                raise ModelError("products: unknown label %r" % (left,))
            if right not in self.index:
                raise ModelError("products: unknown label %r" % (right,))
            i, j = self.index[left], self.index[right]
            if i > j:
                raise ModelError(
                    "products: entry (%s, %s) must be listed with left index <= right index"
                    % (left, right)
                )
            if table[i][j] is not None:
                raise ModelError("products: duplicate entry (%s, %s)" % (left, right))
            row = {}
            for lbl, c in result:
                if lbl not in self.index:
                    raise ModelError("products: unknown result label %r" % (lbl,))
                c = parse_coeff(c)
                if c:
                    row[self.index[lbl]] = row.get(self.index[lbl], 0) + c
            table[i][j] = row
        u = self.unit
        for j in range(self.dim):
            if table[min(u, j)][max(u, j)] is None:
                table[min(u, j)][max(u, j)] = {j: 1}
        # derive the reverse order by the Koszul sign; absent entries are zero
        full = [[{} for _ in range(self.dim)] for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i, self.dim):
                row = table[i][j] or {}
                full[i][j] = dict(row)
                if i != j:
                    sgn = -1 if (self.par[i] and self.par[j]) else 1
                    full[j][i] = {k: sgn * c for k, c in row.items()}
        self.mul_ci = tuple(
            tuple(tuple(sorted(full[i][j].items())) for j in range(self.dim))
            for i in range(self.dim)
        )

        vec = [0] * self.dim
        for lbl, c in integral:
            if lbl not in self.index:
                raise ModelError("integral: unknown label %r" % (lbl,))
            vec[self.index[lbl]] = parse_coeff(c)
        self.integral_vec = tuple(vec)

        kvec = {}
        for lbl, c in canonical:
            if lbl not in self.index:
                raise ModelError("canonical: unknown label %r" % (lbl,))
            c = parse_coeff(c)
            if c:
                kvec[self.index[lbl]] = c
        self.canonical = GradedClass(self, kvec)

        self._finish_tables()

    # -- construction helpers ------------------------------------------------

    def _finish_tables(self):
        D = self.dim
        self.gram = tuple(
            tuple(self._integrate_ci(self.mul_ci[i][j]) for j in range(D)) for i in range(D)
        )
        self.gram_inv = _invert(self.gram)  # None when degenerate
        if self.gram_inv is not None:
            H = self.gram_inv
            # e^j = sum_u H[u][j] b_u satisfies integral(b_i * e^j) = delta_ij
            self.duals = tuple(
                GradedClass(self, {u: H[u][j] for u in range(D)}) for j in range(D)
            )
            # partners_of[c]: the i with integral(b_i * b_c) != 0, with values
            self.partners_of = tuple(
                tuple((i, self.gram[i][c]) for i in range(D) if self.gram[i][c])
                for c in range(D)
            )
            self._first_leg = tuple(self._first_leg_row(c) for c in range(D))
            self._first_leg_map = tuple(
                {i: (s, ann, rest) for i, s, ann, rest in row} for row in self._first_leg
            )
        else:
            self.duals = None
            self.partners_of = None
            self._first_leg = None
            self._first_leg_map = None
        K = self.canonical
        self.kx = tuple(
            tuple(sorted(self.mul(K, self.cls_basis(c)).coeffs.items())) for c in range(D)
        )
        self._tau_cache = {}
        self._basis_cache = {}
        self._mulvec_cache = {}

    def mul_coeffs(self, coeffs, cp):
        """(sum coeffs) * b_cp as a tuple of (ck, coeff); coeffs is hashable."""
        key = (coeffs, cp)
        got = self._mulvec_cache.get(key)
        if got is None:
            acc = {}
            for ci, c in coeffs:
                for ck, mc in self.mul_ci[ci][cp]:
                    acc[ck] = acc.get(ck, 0) + c * mc
            got = tuple(sorted((k, _norm(v)) for k, v in acc.items() if v))
            self._mulvec_cache[key] = got
        return got

    def _first_leg_row(self, c):
        """First-leg expansion of tau_k(b_c), shared by every arity k >= 2.

        tau_k(b_c) = sum_i  b_i (x) s(i,c) * tau_{k-1}(b_c * e^i)
        with s(i,c) = (-1)^{|b_i|(|b_c|+1)}.  Entries carry the creation-side
        sign folded in, plus the extra (-1)^{|b_i|(|b_c|+|b_i|)} parity factor
        the annihilation branch of a normally ordered product needs.
        """
        out = []
        pc = self.par[c]
        for i in range(self.dim):
            rest = self.mul(self.cls_basis(c), self.duals[i])
            if not rest:
                continue
            s = -1 if (self.par[i] and (pc ^ 1)) else 1
            ann = -1 if (self.par[i] and (pc ^ self.par[i])) else 1
            out.append((i, s, ann, tuple(sorted(rest.coeffs.items()))))
        return tuple(out)

    def _integrate_ci(self, entry):
        total = 0
        for k, c in entry:
            total += c * self.integral_vec[k]
        return _norm(total)

    # -- element constructors ------------------------------------------------

    def cls_basis(self, i):
        return GradedClass(self, {i: 1})

    def cls(self, label):
        if label not in self.index:
            raise ModelError("unknown basis label %r" % (label,))
        return self.cls_basis(self.index[label])

    def one(self):
        return self.cls_basis(self.unit)

    def zero_cls(self):
        return GradedClass(self, {})

    # -- ring operations -----------------------------------------------------

    def mul(self, a, b):
        """Supercommutative cup product (degree > 4 truncates to zero)."""
        if a.model is not self or b.model is not self:
            raise ModelError("mixed-model operands")
        out = {}
        for i, ca in a.coeffs.items():
            row = self.mul_ci[i]
            for j, cb in b.coeffs.items():
                c = ca * cb
                for k, mc in row[j]:
                    out[k] = out.get(k, 0) + c * mc
        return GradedClass(self, out)

    def integrate(self, a):
        """Rational value of the integral on the degree-4 part; linear."""
        total = 0
        vec = self.integral_vec
        for i, c in a.coeffs.items():
            total += c * vec[i]
        return _norm(total)

    def diag_push(self, alpha, k):
        """Diagonal pushforward tau_k(alpha) as a TensorClass.

        Characterized by integral_k(tau_k(a) * (b_1 x...x b_k)) =
        integral(a*b_1*...*b_k); computed from dual bases, iterating the
        two-fold expansion on the first leg.
        """
        if k < 1:
            raise ModelError("diag_push: k must be >= 1")
        if self.gram_inv is None:
            raise ModelError("diag_push: degenerate pairing")
        out = {}
        for c, coeff in alpha.coeffs.items():
            for t, tc in self._tau_basis(c, k).items():
                out[t] = out.get(t, 0) + coeff * tc
        return TensorClass(self, k, out)

    def _tau_basis(self, c, k):
        key = (k, c)
        cached = self._tau_cache.get(key)
        if cached is not None:
            return cached
        if k == 1:
            terms = {(c,): 1}
        else:
            terms = {}
            for i, s, _ann, rest in self._first_leg[c]:
                for c2, rc in rest:
                    for t, tc in self._tau_basis(c2, k - 1).items():
                        t2 = (i,) + t
                        v = terms.get(t2, 0) + s * rc * tc
                        if v:
                            terms[t2] = v
                        elif t2 in terms:
                            del terms[t2]
        self._tau_cache[key] = terms
        return terms

    def euler_class(self):
        """Multiplied diagonal m(tau_2(1)); plays the role of c_2 of the surface."""
        t2 = self.diag_push(self.one(), 2)
        out = self.zero_cls()
        for (i, j), c in t2.terms.items():
            out = out + c * self.mul(self.cls_basis(i), self.cls_basis(j))
        return out

    # -- validation ----------------------------------------------------------

    def validate(self):
        checks = []
        lab = self.labels

        deg0 = [i for i in range(self.dim) if self.degs[i] == 0]
        ok = deg0 == [self.unit]
        checks.append(
            ("unit_unique", ok, None if ok else ",".join(lab[i] for i in deg0) or "(none)")
        )

        bad = None
        u = self.one()
        for j in range(self.dim):
            b = self.cls_basis(j)
            if self.mul(u, b) != b or self.mul(b, u) != b:
                bad = lab[j]
                break
        checks.append(("unit_law", bad is None, bad))

        bad = None
        for i in range(self.dim):
            for j in range(self.dim):
                sgn = -1 if (self.par[i] and self.par[j]) else 1
                left = dict(self.mul_ci[i][j])
                right = {k: sgn * c for k, c in self.mul_ci[j][i]}
                if left != right:
                    bad = "%s*%s" % (lab[i], lab[j])
                    break
            if bad:
                break
        checks.append(("supercommutative", bad is None, bad))

        bad = None
        for i in range(self.dim):
            for j in range(self.dim):
                d = self.degs[i] + self.degs[j]
                for k, c in self.mul_ci[i][j]:
                    if d > 4 or self.degs[k] != d:
                        bad = "%s*%s" % (lab[i], lab[j])
                        break
                if bad:
                    break
            if bad:
                break
        checks.append(("degree_additive", bad is None, bad))

        bad = None
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    bi, bj, bk = map(self.cls_basis, (i, j, k))
                    if self.mul(self.mul(bi, bj), bk) != self.mul(bi, self.mul(bj, bk)):
                        bad = "(%s,%s,%s)" % (lab[i], lab[j], lab[k])
                        break
                if bad:
                    break
            if bad:
                break
        checks.append(("associative", bad is None, bad))

        ok = self.gram_inv is not None
        witness = None
        if not ok:
            for i in range(self.dim):
                if not any(self.gram[i]):
                    witness = lab[i]
                    break
            witness = witness or "singular Gram matrix"
        checks.append(("nondegenerate_pairing", ok, witness))

        bad = None
        for i in range(self.dim):
            if self.integral_vec[i] and self.degs[i] != 4:
                bad = lab[i]
                break
        checks.append(("integral_degree_4", bad is None, bad))

        kd = self.canonical.degrees()
        ok = kd in ([], [2])
        checks.append(("canonical_degree_2", ok, None if ok else "degrees %s" % kd))

        return ModelReport(self.name, checks)

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        products = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                entry = self.mul_ci[i][j]
                if entry:
                    products.append(
                        {
                            "left": self.labels[i],
                            "right": self.labels[j],
                            "result": [
                                {"label": self.labels[k], "coeff": coeff_str(c)}
                                for k, c in entry
                            ],
                        }
                    )
        return {
            "name": self.name,
            "basis": [{"label": l, "degree": d} for l, d in zip(self.labels, self.degs)],
            "unit": self.labels[self.unit],
            "products": products,
            "integral": [
                {"label": self.labels[i], "coeff": coeff_str(c)}
                for i, c in enumerate(self.integral_vec)
                if c
            ],
            "canonical": [
                {"label": self.labels[i], "coeff": coeff_str(c)}
                for i, c in sorted(self.canonical.coeffs.items())
            ],
        }

    def __repr__(self):
        return "SurfaceModel(%s, dim=%d)" % (self.name, self.dim)


def _invert(mat):
    """Exact inverse of a square rational matrix, or None if singular."""
    n = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return None
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(n):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        row += 1
    if row < n:
        return None
    return tuple(tuple(_norm(a[i][n + j]) for j in range(n)) for i in range(n))


# -- built-in models ----------------------------------------------------------


def _p2():
    return SurfaceModel(
        "p2",
        basis=[("one", 0), ("h", 2), ("x", 4)],
        unit="one",
        products=[("h", "h", [("x", 1)]), ("h", "x", []), ("x", "x", [])],
        integral=[("x", 1)],
        canonical=[("h", -3)],
    )


def _p1xp1():
    return SurfaceModel(
        "p1xp1",
        basis=[("one", 0), ("f1", 2), ("f2", 2), ("x", 4)],
        unit="one",
        products=[
            ("f1", "f1", []),
            ("f1", "f2", [("x", 1)]),
            ("f2", "f2", []),
            ("f1", "x", []),
            ("f2", "x", []),
            ("x", "x", []),
        ],
        integral=[("x", 1)],
        canonical=[("f1", -2), ("f2", -2)],
    )


def _evenk0():
    # Not the cohomology of an actual surface: a hyperbolic plane in degree
    # 2 with trivial canonical class.  The algebra axioms hold, which is all
    # the engine needs.
    return SurfaceModel(
        "evenk0",
        basis=[("one", 0), ("a", 2), ("b", 2), ("x", 4)],
        unit="one",
        products=[
            ("a", "a", []),
            ("a", "b", [("x", 1)]),
            ("b", "b", []),
            ("a", "x", []),
            ("b", "x", []),
            ("x", "x", []),
        ],
        integral=[("x", 1)],
        canonical=[],
    )


def _torus():
    # Exterior algebra on four degree-1 generators e1..e4; label a product
    # of generators by the sorted index string, the top class by "pt".
    subsets = _subsets(4)

    def lbl(s):
        if not s:
            return "one"
        if len(s) == 4:
            return "pt"
        return "e" + "".join(str(i + 1) for i in s)

    basis = [(lbl(s), len(s)) for s in subsets]
    idx = {tuple(s): n for n, s in enumerate(subsets)}
    products = []
    for a in range(len(subsets)):
        for b in range(a, len(subsets)):
            sa, sb = subsets[a], subsets[b]
            if set(sa) & set(sb):
                products.append((lbl(sa), lbl(sb), []))
                continue
            sign = _shuffle_sign(sa, sb)
            merged = tuple(sorted(sa + sb))
            products.append((lbl(sa), lbl(sb), [(lbl(subsets[idx[merged]]), sign)]))
    return SurfaceModel(
        "torus",
        basis=basis,
        unit="one",
        products=products,
        integral=[("pt", 1)],
        canonical=[],
    )


def _subsets(n):
    out = [()]
    for i in range(n):
        out += [s + (i,) for s in out]
    return sorted(out, key=lambda s: (len(s), s))


def _shuffle_sign(sa, sb):
    """Sign of sorting the concatenation of two disjoint increasing tuples."""
    inv = sum(1 for x in sa for y in sb if x > y)
    return -1 if inv & 1 else 1


_BUILTIN_BUILDERS = {"p2": _p2, "p1xp1": _p1xp1, "torus": _torus, "evenk0": _evenk0}
_builtin_cache = {}


def builtin_model(name):
    if name not in _BUILTIN_BUILDERS:
        raise ModelError(
            "unknown builtin model %r (have: %s)" % (name, ", ".join(BUILTIN_NAMES))
        )
    if name not in _builtin_cache:
        _builtin_cache[name] = _BUILTIN_BUILDERS[name]()
    return _builtin_cache[name]


def model_from_json(data):
    for field in ("name", "basis", "unit", "products", "integral", "canonical"):
        if field not in data:
            raise ModelError("missing field %r" % (field,))
    try:
        basis = [(b["label"], b["degree"]) for b in data["basis"]]
    except (TypeError, KeyError):
        raise ModelError("basis: entries need 'label' and 'degree'") from None
    try:
        products = [
            (p["left"], p["right"], [(r["label"], r["coeff"]) for r in p["result"]])
            for p in data["products"]
        ]
    except (TypeError, KeyError):
        raise ModelError("products: entries need 'left', 'right', 'result'") from None
    try:
        integral = [(e["label"], e["coeff"]) for e in data["integral"]]
        canonical = [(e["label"], e["coeff"]) for e in data["canonical"]]
    except (TypeError, KeyError):
        raise ModelError("integral/canonical: entries need 'label' and 'coeff'") from None
    return SurfaceModel(data["name"], basis, data["unit"], products, integral, canonical)


def load_model(spec):
    """Load 'builtin:<name>' or a JSON model file path."""
    if spec.startswith("builtin:"):
        return builtin_model(spec[len("builtin:") :])
    try:
        with open(spec) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ModelError("cannot read model file %s: %s" % (spec, e)) from None
    except json.JSONDecodeError as e:
        raise ModelError("model file %s: invalid JSON (%s)" % (spec, e)) from None
    return model_from_json(data)
