"""Fock space over a surface model.

States are rational linear combinations of canonical creation words

    q_{n_1}(b_1) ... q_{n_k}(b_k) |0>,   n_1 >= n_2 >= ... >= n_k >= 1,

with ties broken by ascending basis index, and a word vanishing whenever
an odd-degree symbol repeats.  A word is stored as a tuple of (n, ci)
pairs where ci indexes the model basis; the empty tuple is the vacuum.

Reordering two adjacent symbols with odd classes costs a sign; all sign
bookkeeping lives in the two primitives cre_word / ann_word.
"""

from collections import namedtuple

from hv.frobenius import ModelError, _norm

Bidegree = namedtuple("Bidegree", "level cohdeg")


def mono_level(word):
    return sum(n for n, _ in word)


def mono_cohdeg(word, model):
    degs = model.degs
    return sum(2 * n - 2 + degs[c] for n, c in word)


def mono_parity(word, par):
    p = 0
    for _, c in word:
        p ^= par[c]
    return p


def mono_bidegree(word, model):
    return Bidegree(mono_level(word), mono_cohdeg(word, model))


def cre_word(n, ci, word, par):
    """q_n(b_ci) applied to a canonical word: (sign, word) or None if zero.

    The new symbol starts at the left and moves right past every symbol of
    strictly smaller key (descending n, ascending ci), picking up -1 per
    odd-odd transposition.
    """
    odd = par[ci]
    pos = 0
    cross = 0
    for m, cj in word:
        if m > n or (m == n and cj < ci):
            cross += par[cj]
            pos += 1
        else:
            if odd and m == n and cj == ci:
                return None
            break
    sgn = -1 if (odd and cross & 1) else 1
    return sgn, word[:pos] + ((n, ci),) + word[pos:]


def ann_word(s, ci, word, par, gramrow):
    """q_{-s}(b_ci) applied to a canonical word: list of (coeff, word).

    Wick contraction: walking right past q_m(b) costs the Koszul sign, and
    each symbol of size s with integral(b_ci * b) nonzero contributes the
    contraction (-s) * integral(b_ci * b) on the remaining word.
    """
    out = []
    odd = par[ci]
    neg = False
    for t, (m, cj) in enumerate(word):
        if m == s:
            g = gramrow[cj]
            if g:
                c = s * g if (odd and neg) else -s * g
                out.append((c, word[:t] + word[t + 1 :]))
        if odd and par[cj]:
            neg = not neg
    return out


def sort_word_sign(word, par):
    """Canonicalize a creation-only (or annihilation-only block) word.

    Stable insertion by key with Koszul signs; None when an odd symbol
    repeats.  Keys never move an annihilator past a creator because
    negative n sorts after every positive n.
    """
    sgn = 1
    sorted_word = ()
    for n, ci in word:
        odd = par[ci]
        pos = 0
        cross = 0
        for m, cj in sorted_word:
            if -m < -n or (m == n and cj < ci):
                cross += par[cj]
                pos += 1
            else:
                break
        # moving the new symbol left past the tail it does NOT cross
        tail_odd = sum(par[cj] for m, cj in sorted_word[pos:])
        if odd:
            if tail_odd & 1:
                sgn = -sgn
            if pos < len(sorted_word) and sorted_word[pos] == (n, ci):
                return None
        sorted_word = sorted_word[:pos] + ((n, ci),) + sorted_word[pos:]
    return sgn, sorted_word


class FockVector:
    """Finite rational combination of canonical words (no zero terms)."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None, _clean=True):
        self.model = model
        if terms is None:
            terms = {}
        if _clean:
            terms = {w: _norm(c) for w, c in terms.items() if c}
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, FockVector)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            elif w in out:
                del out[w]
        return FockVector(self.model, out, _clean=False)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        if not scalar:
            return FockVector(self.model, {}, _clean=False)
        return FockVector(
            self.model, {w: _norm(scalar * c) for w, c in self.terms.items()}, _clean=False
        )

    def levels(self):
        return sorted({mono_level(w) for w in self.terms})

    def sorted_terms(self):
        m = self.model
        return sorted(
            self.terms.items(), key=lambda it: (mono_level(it[0]), mono_cohdeg(it[0], m), it[0])
        )

    def __str__(self):
        from hv.frobenius import coeff_str

        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            word = "*".join("q(%d,%s)" % (n, self.model.labels[ci]) for n, ci in w)
            word = word + "*vac" if word else "vac"
            if not bits:
                bits.append("%s*%s" % (coeff_str(c), word))
            else:
                sign = " + " if (c > 0) else " - "
                bits.append("%s%s*%s" % (sign, coeff_str(abs(c)), word))
        return "".join(bits)

    __repr__ = __str__


def vacuum(model):
    return FockVector(model, {(): 1}, _clean=False)


def state(model, word, coeff=1):
    """FockVector from an explicit (possibly unordered) creation word."""
    sw = normalize(word, model)
    if sw is None:
        return FockVector(model)
    sgn, mono = sw
    return FockVector(model, {mono: sgn * coeff})


def normalize(word, model):
    """Canonical form of a creation word given as (n, label-or-index) pairs.

    Returns (sign, word) or None when an odd symbol repeats.
    """
    resolved = []
    for n, b in word:
        if not isinstance(n, int) or n < 1:
            raise ModelError("creation index must be a positive integer, got %r" % (n,))
        if isinstance(b, str):
            if b not in model.index:
                raise ModelError("unknown basis label %r" % (b,))
            b = model.index[b]
        elif not (0 <= b < model.dim):
            raise ModelError("basis index %r out of range" % (b,))
        resolved.append((n, b))
    return sort_word_sign(tuple(resolved), model.par)


def create(n, alpha, v, model=None):
    """q_n(alpha) for n >= 1 applied to a FockVector."""
    model = model or v.model
    if n < 1:
        raise ModelError("create: n must be >= 1")
    par = model.par
    out = {}
    for ci, cc in alpha.coeffs.items():
        for w, c in v.terms.items():
            r = cre_word(n, ci, w, par)
            if r is None:
                continue
            sgn, w2 = r
            val = out.get(w2, 0) + sgn * cc * c
            if val:
                out[w2] = val
            elif w2 in out:
                del out[w2]
    return FockVector(model, out)


def annihilate(n, alpha, v, model=None):
    """q_{-n}(alpha) for n >= 1 applied to a FockVector."""
    model = model or v.model
    if n < 1:
        raise ModelError("annihilate: n must be >= 1")
    par = model.par
    out = {}
    for ci, cc in alpha.coeffs.items():
        row = model.gram[ci]
        for w, c in v.terms.items():
            for coeff, w2 in ann_word(n, ci, w, par, row):
                val = out.get(w2, 0) + coeff * cc * c
                if val:
                    out[w2] = val
                elif w2 in out:
                    del out[w2]
    return FockVector(model, out)


def basis(level, model):
    """All canonical words of the given level, in deterministic order."""
    if level < 0:
        raise ModelError("basis: level must be >= 0")
    cache = model._basis_cache
    got = cache.get(level)
    if got is not None:
        return got
    par = model.par
    D = model.dim
    out = []

    def rec(prefix, remaining, last_n, last_ci):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        n0 = min(remaining, last_n)
        for n in range(n0, 0, -1):
            ci0 = last_ci if n == last_n else 0
            for ci in range(ci0, D):
                if par[ci] and prefix and prefix[-1] == (n, ci):
                    continue
                prefix.append((n, ci))
                rec(prefix, remaining - n, n, ci)
                prefix.pop()

    rec([], level, level, 0)
    out = tuple(out)
    cache[level] = out
    return out


def basis_up_to(level, model):
    out = []
    for n in range(level + 1):
        out.extend(basis(n, model))
    return out


def poincare(level, model):
    """Coefficients of the Poincare polynomial of the level piece, low to high."""
    coeffs = [0] * (4 * level + 1)
    for w in basis(level, model):
        coeffs[mono_cohdeg(w, model)] += 1
    return coeffs


def pair_fock(u, v, model=None):
    """Bilinear form fixed by <vac,vac> = 1 and the adjoint rewriting rule

        <q_n(a) u', v> = (-1)^{|a| |u'|} (-1)^n <u', q_{-n}(a) v>.
    """
    model = model or u.model
    total = 0
    for w, c in u.terms.items():
        p = _pair_word(w, v.terms, model)
        if p:
            total += c * p
    return _norm(total)


def _pair_word(word, terms, model):
    if not word:
        return terms.get((), 0)
    n, ci = word[0]
    rest = word[1:]
    par = model.par
    row = model.gram[ci]
    nxt = {}
    for w, c in terms.items():
        for coeff, w2 in ann_word(n, ci, w, par, row):
            v = nxt.get(w2, 0) + coeff * c
            if v:
                nxt[w2] = v
            elif w2 in nxt:
                del nxt[w2]
    if not nxt:
        return 0
    sgn = -1 if (n & 1) else 1
    if par[ci] and mono_parity(rest, par):
        sgn = -sgn
    return sgn * _pair_word(rest, nxt, model)
