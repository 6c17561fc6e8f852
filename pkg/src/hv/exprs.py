"""Operator expression language and state syntax.

Grammar (1-based source positions, errors carry position + expectation):

    expr := sum
    sum  := ['-'] prod (('+'|'-') prod)*
    prod := atom ('*' atom)*
    atom := RATIONAL | GEN | '[' expr ',' expr ']' | '(' expr ')'
          | 'adj' '(' expr ')' | 'D' '(' expr ')'
    GEN  := 'q' '(' INT ',' LABEL ')' | 'L' '(' INT ',' LABEL ')'
          | 'W' '(' INT ',' INT ',' LABEL ')' | 'd'

W takes the conformal index first; D is the derivative ad(d); RATIONAL is
p or p/q.  A bare rational elaborates as a multiple of the identity.

States:  state := ['-'] sterm (('+'|'-') sterm)*
         sterm := (RATIONAL '*')? (Q '*')* 'vac'     with Q := q(n,label), n >= 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from hv.fock import FockVector, normalize
from hv.frobenius import coeff_str
from hv.operators import adjoint, boundary, commutator, derive, identity, q, virasoro, w


class ParseError(Exception):
    def __init__(self, msg, pos):
        super().__init__("syntax error at position %d: %s" % (pos, msg))
        self.pos = pos


class ElabError(Exception):
    def __init__(self, msg, pos):
        super().__init__("error at position %d: %s" % (pos, msg))
        self.pos = pos


# -- AST -----------------------------------------------------------------------


@dataclass
class Rat:
    value: Fraction
    pos: int = 0

    def key(self):
        return ("rat", self.value)


@dataclass
class Gen:
    kind: str  # q | L | W | d
    args: tuple  # ints (n,) or (k, n)
    label: str  # basis label, "" for d
    pos: int = 0
    label_pos: int = 0

    def key(self):
        return ("gen", self.kind, self.args, self.label)


@dataclass
class Sum:
    items: tuple  # of (sign +1/-1, node)
    pos: int = 0

    def key(self):
        return ("sum",) + tuple((s, n.key()) for s, n in self.items)


@dataclass
class Prod:
    factors: tuple
    pos: int = 0

    def key(self):
        return ("prod",) + tuple(f.key() for f in self.factors)


@dataclass
class Brk:
    left: object
    right: object
    pos: int = 0

    def key(self):
        return ("brk", self.left.key(), self.right.key())


@dataclass
class Adj:
    arg: object
    pos: int = 0

    def key(self):
        return ("adj", self.arg.key())


@dataclass
class Der:
    arg: object
    pos: int = 0

    def key(self):
        return ("der", self.arg.key())


# -- tokenizer -----------------------------------------------------------------

_PUNCT = "()[],*+-/"


def _tokens(text):
    """Yield (kind, value, 1-based position); kinds: int, ident, punct, end."""
    i = 0
    n = len(text)
    out = []
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], i + 1))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("ident", text[i:j], i + 1))
            i = j
            continue
        if ch in _PUNCT:
            out.append(("punct", ch, i + 1))
            i += 1
            continue
        raise ParseError("unexpected character %r" % ch, i + 1)
    out.append(("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_punct(self, *alts):
        kind, val, pos = self.peek()
        if kind == "punct" and val in alts:
            return self.next()
        raise ParseError("expected %s" % " or ".join("'%s'" % a for a in alts), pos)

    def fail(self, what):
        kind, val, pos = self.peek()
        raise ParseError(what, pos)

    # expr := sum
    def parse_expr(self):
        node = self.parse_sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError("expected '+', '-', '*' or end of input", pos)
        return node

    def parse_sum(self):
        items = []
        kind, val, pos0 = self.peek()
        sign = 1
        if kind == "punct" and val == "-":
            self.next()
            sign = -1
        items.append((sign, self.parse_prod()))
        while True:
            kind, val, pos = self.peek()
            if kind == "punct" and val in "+-":
                self.next()
                items.append((1 if val == "+" else -1, self.parse_prod()))
            else:
                break
        if len(items) == 1 and items[0][0] == 1:
            return items[0][1]
        return Sum(tuple(items), pos0)

    def parse_prod(self):
        factors = [self.parse_atom()]
        while True:
            kind, val, pos = self.peek()
            if kind == "punct" and val == "*":
                self.next()
                factors.append(self.parse_atom())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return Prod(tuple(factors), factors[0].pos)

    def parse_atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            return self.parse_rational()
        if kind == "punct" and val == "(":
            self.next()
            node = self.parse_sum()
            self.expect_punct(")")
            return node
        if kind == "punct" and val == "[":
            self.next()
            left = self.parse_sum()
            self.expect_punct(",")
            right = self.parse_sum()
            self.expect_punct("]")
            return Brk(left, right, pos)
        if kind == "ident":
            if val in ("q", "L"):
                self.next()
                self.expect_punct("(")
                n = self.parse_int()
                self.expect_punct(",")
                label, lpos = self.parse_label()
                self.expect_punct(")")
                return Gen(val, (n,), label, pos, lpos)
            if val == "W":
                self.next()
                self.expect_punct("(")
                k = self.parse_int()
                self.expect_punct(",")
                n = self.parse_int()
                self.expect_punct(",")
                label, lpos = self.parse_label()
                self.expect_punct(")")
                return Gen("W", (k, n), label, pos, lpos)
            if val == "d":
                self.next()
                return Gen("d", (), "", pos, pos)
            if val == "adj":
                self.next()
                self.expect_punct("(")
                node = self.parse_sum()
                self.expect_punct(")")
                return Adj(node, pos)
            if val == "D":
                self.next()
                self.expect_punct("(")
                node = self.parse_sum()
                self.expect_punct(")")
                return Der(node, pos)
            raise ParseError(
                "expected a rational, generator, '[', '(', 'adj' or 'D'", pos
            )
        raise ParseError("expected a rational, generator, '[', '(', 'adj' or 'D'", pos)

    def parse_int(self):
        kind, val, pos = self.peek()
        sign = 1
        if kind == "punct" and val == "-":
            self.next()
            sign = -1
            kind, val, pos = self.peek()
        if kind != "int":
            raise ParseError("expected an integer", pos)
        self.next()
        return sign * int(val)

    def parse_rational(self):
        kind, val, pos = self.peek()
        if kind != "int":
            raise ParseError("expected an integer", pos)
        self.next()
        num = int(val)
        kind, val, pos2 = self.peek()
        if kind == "punct" and val == "/":
            self.next()
            kind, val, pos3 = self.peek()
            if kind != "int":
                raise ParseError("expected a denominator", pos3)
            self.next()
            den = int(val)
            if den == 0:
                raise ParseError("zero denominator", pos3)
            return Rat(Fraction(num, den), pos)
        return Rat(Fraction(num), pos)

    def parse_label(self):
        kind, val, pos = self.peek()
        if kind != "ident":
            raise ParseError("expected a basis label", pos)
        self.next()
        return val, pos


def parse_expr(text):
    """Parse an operator expression into its AST."""
    return _Parser(text).parse_expr()


def print_expr(node):
    """Canonical text form; parse(print_expr(parse(s))) == parse(s)."""
    if isinstance(node, Rat):
        return coeff_str(node.value)
    if isinstance(node, Gen):
        if node.kind == "d":
            return "d"
        args = ",".join(str(a) for a in node.args)
        return "%s(%s,%s)" % (node.kind, args, node.label)
    if isinstance(node, Sum):
        bits = []
        for i, (sign, item) in enumerate(node.items):
            txt = _paren_for_sum(item)
            if i == 0:
                bits.append(txt if sign == 1 else "-" + txt)
            else:
                bits.append((" + " if sign == 1 else " - ") + txt)
        return "".join(bits)
    if isinstance(node, Prod):
        return "*".join(_paren_for_prod(f) for f in node.factors)
    if isinstance(node, Brk):
        return "[%s, %s]" % (print_expr(node.left), print_expr(node.right))
    if isinstance(node, Adj):
        return "adj(%s)" % print_expr(node.arg)
    if isinstance(node, Der):
        return "D(%s)" % print_expr(node.arg)
    raise TypeError("not an expression node: %r" % (node,))


def _paren_for_sum(node):
    return print_expr(node)


def _paren_for_prod(node):
    txt = print_expr(node)
    if isinstance(node, Sum):
        return "(" + txt + ")"
    return txt


def elaborate(node, model):
    """Resolve an AST against a model, producing an Operator."""
    if isinstance(node, Rat):
        return node.value * identity(model)
    if isinstance(node, Gen):
        if node.kind == "d":
            return boundary(model)
        if node.label not in model.index:
            raise ElabError("unknown basis label %r" % node.label, node.label_pos)
        alpha = model.cls(node.label)
        if node.kind == "q":
            return q(node.args[0], alpha)
        if node.kind == "L":
            return virasoro(node.args[0], alpha)
        k, n = node.args
        if k < 1:
            raise ElabError("conformal index k must be >= 1", node.pos)
        return w(k, n, alpha)
    if isinstance(node, Sum):
        out = None
        for sign, item in node.items:
            op = elaborate(item, model)
            op = op if sign == 1 else -op
            out = op if out is None else out + op
        return out
    if isinstance(node, Prod):
        ops = [elaborate(f, model) for f in node.factors]
        out = ops[0]
        for op in ops[1:]:
            out = out * op
        return out
    if isinstance(node, Brk):
        return commutator(elaborate(node.left, model), elaborate(node.right, model))
    if isinstance(node, Adj):
        return adjoint(elaborate(node.arg, model))
    if isinstance(node, Der):
        return derive(elaborate(node.arg, model))
    raise TypeError("not an expression node: %r" % (node,))


# -- states --------------------------------------------------------------------


def parse_state(text, model):
    """Parse a state `c*q(n,label)*...*vac +- ...` into a FockVector."""
    p = _Parser(text)
    total = FockVector(model, {})
    sign = 1
    kind, val, pos = p.peek()
    if kind == "punct" and val == "-":
        p.next()
        sign = -1
    while True:
        total = total + _parse_sterm(p, model, sign)
        kind, val, pos = p.peek()
        if kind == "punct" and val in "+-":
            p.next()
            sign = 1 if val == "+" else -1
            continue
        if kind == "end":
            return total
        raise ParseError("expected '+', '-' or end of input", pos)


def _parse_sterm(p, model, sign):
    coeff = Fraction(sign)
    word = []
    kind, val, pos = p.peek()
    if kind == "int":
        coeff *= p.parse_rational().value
        p.expect_punct("*")
    while True:
        kind, val, pos = p.peek()
        if kind == "ident" and val == "vac":
            p.next()
            sw = normalize(word, model)
            if sw is None:
                return FockVector(model, {})
            sgn, mono = sw
            return FockVector(model, {mono: sgn * coeff})
        if kind == "ident" and val == "q":
            p.next()
            p.expect_punct("(")
            _, _, npos = p.peek()
            n = p.parse_int()
            if n < 1:
                raise ParseError("state symbols must have n >= 1", npos)
            p.expect_punct(",")
            label, lpos = p.parse_label()
            if label not in model.index:
                raise ElabError("unknown basis label %r" % label, lpos)
            p.expect_punct(")")
            p.expect_punct("*")
            word.append((n, label))
            continue
        raise ParseError("expected 'q' or 'vac'", pos)


def format_state(v):
    return str(v)
