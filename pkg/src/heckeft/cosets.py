"""Explicit right-coset representatives for GL_r(A) \\ GL_r(A) d GL_r(A),
d = diag(p, 1, ..., 1) with p irreducible.

The representatives are the upper-triangular matrices that equal the
identity except in one column m, which carries p on the diagonal and
arbitrary entries of degree < deg p above it.  Each representative is its
own Hermite label, so coset equality is decided by label equality and
classification is a single Hermite reduction.
"""

from dataclasses import dataclass, field

from .errors import HeckeftError
from .lattice import LatticeMatrix, elementary_divisors, hermite_normal_form
from .polyring import PolyA, is_irreducible, polys_below


class CosetRep:
    """beta_{m,b}: pivot column m (1-based), entries b_1..b_{m-1} above p."""

    __slots__ = ("m", "b", "matrix")

    def __init__(self, ctx, r, p, m, b):
        if not 1 <= m <= r:
            raise HeckeftError("pivot column out of range")
        b = tuple(b)
        if len(b) != m - 1:
            raise HeckeftError("need %d entries above the pivot" % (m - 1))
        p = p.monic()
        for entry in b:
            if entry and entry.deg >= p.deg:
                raise HeckeftError("entries above the pivot must have degree < deg p")
        one, zero = PolyA.one(ctx), PolyA.zero(ctx)
        rows = [[one if i == j else zero for j in range(r)] for i in range(r)]
        for i in range(m - 1):
            rows[i][m - 1] = b[i]
        rows[m - 1][m - 1] = p
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "matrix", LatticeMatrix(ctx, rows))

    def __setattr__(self, *a):
        raise AttributeError("CosetRep is immutable")

    def __eq__(self, other):
        return isinstance(other, CosetRep) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __str__(self):
        return "beta(m=%d, b=[%s])" % (self.m, ",".join(str(x) for x in self.b))

    __repr__ = __str__

    def to_json(self):
        return {"m": self.m, "b": [str(x) for x in self.b],
                "matrix": self.matrix.to_json()["rows"]}


def enumerate_reps(ctx, r, p):
    """All sum_m q^(d(m-1)) representatives, ordered by (m, entries).

    The entries above the pivot are reduced modulo p; reducing those
    entries (rather than anything below the diagonal, which is zero by
    shape) is what makes the labels distinct.
    """
    p = p.monic()
    if not is_irreducible(p):
        raise HeckeftError("p must be irreducible")
    d = int(p.deg)
    out = []
    for m in range(1, r + 1):
        tuples = [()]
        for _ in range(m - 1):
            tuples = [tb + (extra,) for tb in tuples
                      for extra in polys_below(ctx, d)]
        tuples.sort(key=lambda tb: tuple(x.sort_key() for x in tb))
        for b in tuples:
            out.append(CosetRep(ctx, r, p, m, b))
    return out


def classify(gamma, p):
    """The unique representative whose coset contains gamma.

    Requires det(gamma) = unit * p.  The Hermite label of gamma has
    exactly one diagonal entry equal to p (the others are 1), and the
    entries above that pivot are already reduced, so the label IS the
    representative.
    """
    p = p.monic()
    det = gamma.det()
    if not det or (det.monic() != p):
        raise HeckeftError("determinant is not a unit times p")
    h = hermite_normal_form(gamma)
    r = gamma.r
    m = None
    for i in range(r):
        if h.rows[i][i].deg > 0:
            m = i + 1
            break
    assert m is not None and h.rows[m - 1][m - 1] == p
    b = tuple(h.rows[i][m - 1] for i in range(m - 1))
    rep = CosetRep(gamma.ctx, r, p, m, b)
    assert rep.matrix == h
    return rep


@dataclass
class PartitionReport:
    r: int
    p: str
    samples: int
    classified: int
    hits: dict = field(default_factory=dict)    # str(rep) -> count
    failures: list = field(default_factory=list)

    def ok(self):
        return not self.failures and self.classified == self.samples

    def to_json(self):
        return {"r": self.r, "p": self.p, "samples": self.samples,
                "classified": self.classified, "distinct_labels": len(self.hits),
                "hits": dict(sorted(self.hits.items())),
                "failures": list(self.failures)}


def verify_partition(ctx, r, p, samples, rng):
    """Randomised check that the representatives partition the double coset.

    Draws gamma = g1 * diag(p,1,...,1) * g2 with random g_i in GL_r(A),
    classifies each, and tallies per-representative hit counts.  Failures
    are reported, not raised.
    """
    from .lattice import random_gl

    p = p.monic()
    delta = LatticeMatrix.diagonal(
        ctx, [p] + [PolyA.one(ctx)] * (r - 1))
    report = PartitionReport(r=r, p=str(p), samples=samples, classified=0)
    enumerated = {rep.matrix: rep for rep in enumerate_reps(ctx, r, p)}
    for i in range(samples):
        gamma = random_gl(ctx, r, rng) * delta * random_gl(ctx, r, rng)
        try:
            rep = classify(gamma, p)
        except Exception as exc:  # record, never raise
            report.failures.append("sample %d: %s" % (i, exc))
            continue
        if rep.matrix not in enumerated:
            report.failures.append("sample %d: label outside the enumeration" % i)
            continue
        if elementary_divisors(rep.matrix).divisors[0] != p:
            report.failures.append("sample %d: wrong divisor type" % i)
            continue
        report.classified += 1
        key = str(rep)
        report.hits[key] = report.hits.get(key, 0) + 1
    return report
