"""Operator-level generation: the degree-zero weight-(2..n+1) normally
ordered diagonal operators, applied to the fundamental class of the
level-n piece, span the whole piece.

The closure is a fixed-point computation: apply every generator to every
new vector, reduce by exact Gaussian elimination with a deterministic
pivot order (lowest basis-word index first), stop when nothing new
appears.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from hv.fock import FockVector, basis
from hv.frobenius import ModelError, _norm
from hv.operators import ScaleOp, w


@dataclass
class SpanReport:
    n: int
    generator_count: int
    achieved: int
    ambient: int
    rounds: int
    model: str = ""

    @property
    def ok(self):
        return self.achieved == self.ambient

    def line(self):
        return "%s %d/%d n=%d generators=%d rounds=%d" % (
            "PASS" if self.ok else "FAIL",
            self.achieved,
            self.ambient,
            self.n,
            self.generator_count,
            self.rounds,
        )

    def to_json(self):
        return {
            "model": self.model,
            "n": self.n,
            "generators": self.generator_count,
            "achieved": self.achieved,
            "ambient": self.ambient,
            "rounds": self.rounds,
            "status": "PASS" if self.ok else "FAIL",
        }


def unit_vector(n, model):
    """The fundamental class of the level-n piece: 1/n! q_1(1)^n |0>."""
    if n < 0:
        raise ModelError("unit_vector: n must be >= 0")
    word = ((1, model.unit),) * n
    return FockVector(model, {word: Fraction(1, factorial(n))})


def generators(n, model):
    """The n * dim(model) spanning operators -W^{k+2}_0(c), 0 <= k < n."""
    if n < 1:
        raise ModelError("generators: n must be >= 1")
    ops = []
    for k in range(n):
        for ci in range(model.dim):
            ops.append(ScaleOp(-1, w(k + 2, 0, model.cls_basis(ci))))
    return ops


class _Eliminator:
    """Incremental row reduction over Q with fixed pivot order."""

    def __init__(self):
        self.pivots = {}  # pivot index -> reduced row (dict idx -> coeff)

    def reduce(self, row):
        """Reduce a dict row against the pivots; returns the residual dict."""
        row = dict(row)
        while row:
            j = min(row)
            piv = self.pivots.get(j)
            if piv is None:
                return row
            f = row[j]
            for jj, c in piv.items():
                v = row.get(jj, 0) - f * c
                if v:
                    row[jj] = v
                elif jj in row:
                    del row[jj]
        return row

    def add(self, row):
        """Reduce and, if independent, normalize and store; True if added."""
        row = self.reduce(row)
        if not row:
            return False, None
        j = min(row)
        inv = Fraction(1, 1) / row[j]
        row = {jj: _norm(inv * c) for jj, c in row.items()}
        self.pivots[j] = row
        return True, row

    @property
    def rank(self):
        return len(self.pivots)


def span_closure(seeds, ops, n, model):
    """Smallest subspace of the level-n piece containing the seeds and
    closed under the level-preserving operators; returns (rows, SpanReport).
    """
    words = basis(n, model)
    index = {wd: i for i, wd in enumerate(words)}
    elim = _Eliminator()
    frontier = []
    for v in seeds:
        row = {}
        for wd, c in v.terms.items():
            i = index.get(wd)
            if i is None:
                raise ModelError("span_closure: seed has a term outside level %d" % n)
            row[i] = c
        added, red = elim.add(row)
        if added:
            frontier.append(red)
    rounds = 0
    while frontier and ops and elim.rank < len(words):
        new_frontier = []
        for row in frontier:
            vec = FockVector(model, {words[i]: c for i, c in row.items()}, _clean=False)
            for op in ops:
                img = op.apply_dict(vec.terms)
                if not img:
                    continue
                added, red = elim.add({index[wd]: c for wd, c in img.items() if c})
                if added:
                    new_frontier.append(red)
                    if elim.rank == len(words):
                        break
            if elim.rank == len(words):
                break
        if new_frontier:
            rounds += 1
        frontier = new_frontier
    rows = [
        FockVector(model, {words[i]: c for i, c in elim.pivots[j].items()}, _clean=False)
        for j in sorted(elim.pivots)
    ]
    report = SpanReport(
        n=n,
        generator_count=len(ops),
        achieved=elim.rank,
        ambient=len(words),
        rounds=rounds,
        model=model.name,
    )
    return rows, report


def check_generation(n, model):
    """PASS iff the closure of the fundamental class under the spanning
    operators is the whole level-n piece."""
    rows, report = span_closure([unit_vector(n, model)], generators(n, model), n, model)
    return report
