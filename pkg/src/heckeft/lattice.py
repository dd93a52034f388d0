"""Full-rank lattices in A^r: matrices over F_q[t], Hermite and Smith
normal forms, A-indices of nested lattices, and exhaustive sublattice
enumeration by elementary-divisor type.

A lattice M of rank r inside F^r is represented by a row-basis matrix;
its label is the row-style Hermite normal form (upper triangular, monic
diagonal, entries above a pivot reduced modulo that pivot), which is the
unique canonical representative of the GL_r(A)-row-span.
"""

import itertools

from .budgets import DEFAULT_BUDGET
from .errors import HeckeftError, NotSublatticeError, SingularMatrixError
from .polyring import PolyA, monic_divisors, polys_below


class LatticeMatrix:
    __slots__ = ("ctx", "r", "rows")

    def __init__(self, ctx, rows):
        rows = tuple(tuple(row) for row in rows)
        r = len(rows)
        if r < 1 or any(len(row) != r for row in rows):
            raise HeckeftError("matrix must be square, r >= 1")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("LatticeMatrix is immutable")

    @classmethod
    def identity(cls, ctx, r):
        one, zero = PolyA.one(ctx), PolyA.zero(ctx)
        return cls(ctx, [[one if i == j else zero for j in range(r)]
                         for i in range(r)])

    @classmethod
    def diagonal(cls, ctx, divisors):
        r = len(divisors)
        zero = PolyA.zero(ctx)
        return cls(ctx, [[divisors[i] if i == j else zero for j in range(r)]
                         for i in range(r)])

    @classmethod
    def parse_rows(cls, ctx, rows_text):
        return cls(ctx, [[PolyA.parse(ctx, s) for s in row] for row in rows_text])

    def to_json(self):
        return {"r": self.r, "rows": [[str(e) for e in row] for row in self.rows]}

    @classmethod
    def from_json(cls, ctx, data):
        return cls.parse_rows(ctx, data["rows"])

    def __eq__(self, other):
        return (isinstance(other, LatticeMatrix) and self.ctx == other.ctx
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ctx.q, self.rows))

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in row) for row in self.rows) + "]"

    __repr__ = __str__

    def sort_key(self):
        return tuple(e.sort_key() for row in self.rows for e in row)

    def __mul__(self, other):
        r = self.r
        zero = PolyA.zero(self.ctx)
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = zero
                for k in range(r):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return LatticeMatrix(self.ctx, out)

    def det(self):
        return _det(self.ctx, [list(row) for row in self.rows])

    def adjugate(self):
        r = self.r
        if r == 1:
            return LatticeMatrix(self.ctx, [[PolyA.one(self.ctx)]])
        rows = [list(row) for row in self.rows]
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                minor = [[rows[a][b] for b in range(r) if b != i]
                         for a in range(r) if a != j]
                c = _det(self.ctx, minor)
                if (i + j) % 2:
                    c = -c
                row.append(c)
            out.append(row)
        return LatticeMatrix(self.ctx, out)


def _det(ctx, rows):
    r = len(rows)
    if r == 1:
        return rows[0][0]
    if r == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = PolyA.zero(ctx)
    for j in range(r):
        if rows[0][j]:
            minor = [[rows[i][b] for b in range(r) if b != j] for i in range(1, r)]
            term = rows[0][j] * _det(ctx, minor)
            acc = acc + (term if j % 2 == 0 else -term)
    return acc


def hermite_normal_form(m):
    """Row-style HNF: the canonical label of the coset GL_r(A) * m.

    Upper triangular, monic diagonal, entries above a pivot reduced modulo
    the pivot of their column.  Left multiplication by GL_r(A) does not
    change the output; singular input raises.
    """
    ctx = m.ctx
    r = m.r
    rows = [list(row) for row in m.rows]
    pivot = 0
    for col in range(r):
        # gcd-reduce the entries of this column at or below the pivot row
        while True:
            live = [i for i in range(pivot, r) if rows[i][col]]
            if not live:
                raise SingularMatrixError("matrix has zero determinant")
            best = min(live, key=lambda i: rows[i][col].deg)
            if best != pivot:
                rows[pivot], rows[best] = rows[best], rows[pivot]
            done = True
            for i in range(pivot + 1, r):
                if rows[i][col]:
                    quo = rows[i][col] // rows[pivot][col]
                    rows[i] = [a - quo * b for a, b in zip(rows[i], rows[pivot])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        c = ctx.inv(rows[pivot][col].lc)
        rows[pivot] = [e.scale(c) for e in rows[pivot]]
        pivot += 1
    # reduce entries above each pivot
    for col in range(r):
        piv = rows[col][col]
        for i in range(col):
            if rows[i][col] and rows[i][col].deg >= piv.deg:
                quo = rows[i][col] // piv
                rows[i] = [a - quo * b for a, b in zip(rows[i], rows[col])]
    return LatticeMatrix(ctx, rows)


class IndexType:
    """An elementary-divisor tuple (a_1, ..., a_r), monic, a_r | ... | a_1."""

    __slots__ = ("divisors",)

    def __init__(self, divisors):
        divisors = tuple(divisors)
        if not divisors:
            raise HeckeftError("empty index type")
        for d in divisors:
            if not d or not d.is_monic():
                raise HeckeftError("divisors must be nonzero and monic")
        for hi, lo in zip(divisors, divisors[1:]):
            if hi % lo:
                raise HeckeftError("divisor chain broken: %s does not divide %s"
                                   % (lo, hi))
        object.__setattr__(self, "divisors", divisors)

    def __setattr__(self, *a):
        raise AttributeError("IndexType is immutable")

    @property
    def r(self):
        return len(self.divisors)

    @property
    def ctx(self):
        return self.divisors[0].ctx

    def det(self):
        acc = PolyA.one(self.ctx)
        for d in self.divisors:
            acc = acc * d
        return acc

    def is_identity(self):
        return all(d.deg == 0 for d in self.divisors)

    def __eq__(self, other):
        return isinstance(other, IndexType) and self.divisors == other.divisors

    def __hash__(self):
        return hash(self.divisors)

    def sort_key(self):
        return tuple(d.sort_key() for d in self.divisors)

    def __str__(self):
        return "(" + ",".join(str(d) for d in self.divisors) + ")"

    __repr__ = __str__

    def to_json(self):
        return {"divisors": [str(d) for d in self.divisors]}

    @classmethod
    def from_json(cls, ctx, data):
        return cls([PolyA.parse(ctx, s).monic() for s in data["divisors"]])

    @classmethod
    def identity(cls, ctx, r):
        return cls([PolyA.one(ctx)] * r)

    @classmethod
    def prime_power(cls, p, exponents):
        """diag type (p^e_1, ..., p^e_r) from a nonincreasing exponent list."""
        return cls([p ** e for e in exponents])


def elementary_divisors(m):
    """The Smith normal form divisor chain of m, largest first."""
    if not m.det():
        raise SingularMatrixError("matrix has zero determinant")
    ctx = m.ctx
    r = m.r
    rows = [list(row) for row in m.rows]
    divs = []
    for top in range(r):
        while True:
            # find the minimal-degree nonzero entry in the working block
            best = None
            for i in range(top, r):
                for j in range(top, r):
                    e = rows[i][j]
                    if e and (best is None or e.deg < rows[best[0]][best[1]].deg):
                        best = (i, j)
            bi, bj = best
            if bi != top:
                rows[top], rows[bi] = rows[bi], rows[top]
            if bj != top:
                for row in rows:
                    row[top], row[bj] = row[bj], row[top]
            pivot = rows[top][top]
            dirty = False
            for i in range(top + 1, r):
                if rows[i][top]:
                    quo = rows[i][top] // pivot
                    rows[i] = [a - quo * b for a, b in zip(rows[i], rows[top])]
                    if rows[i][top]:
                        dirty = True
            for j in range(top + 1, r):
                if rows[top][j]:
                    quo = rows[top][j] // pivot
                    for i in range(top, r):
                        rows[i][j] = rows[i][j] - quo * rows[i][top]
                    if rows[top][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the remaining block; if not, merge and retry
            offender = None
            for i in range(top + 1, r):
                for j in range(top + 1, r):
                    if rows[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            rows[top] = [a + b for a, b in zip(rows[top], rows[offender])]
        divs.append(rows[top][top].monic())
    divs.reverse()  # largest first, per the (a_1, ..., a_r) convention
    return IndexType(divs)


def change_of_basis(l, m):
    """X with X*l = m and entries in A, when rowspan(m) <= rowspan(l)."""
    det = l.det()
    if not det:
        raise SingularMatrixError("ambient matrix is singular")
    adj = l.adjugate()
    r = l.r
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = PolyA.zero(l.ctx)
            for k in range(r):
                acc = acc + m.rows[i][k] * adj.rows[k][j]
            quo, rem = divmod(acc, det)
            if rem:
                raise NotSublatticeError("row span is not contained")
            row.append(quo)
        out.append(row)
    return LatticeMatrix(l.ctx, out)


def a_index(l, m):
    """[L:M]_A for nested row-span lattices L >= M."""
    return elementary_divisors(change_of_basis(l, m))


def contains(l, m):
    try:
        change_of_basis(l, m)
        return True
    except NotSublatticeError:
        return False


def _ordered_factorizations(det, r):
    """All r-tuples of monic polynomials with the given monic product."""
    if r == 1:
        yield (det,)
        return
    for d in monic_divisors(det):
        for rest in _ordered_factorizations(det // d, r - 1):
            yield (d,) + rest


def enumerate_hnf_with_det(ctx, r, det, budget=DEFAULT_BUDGET):
    """Every Hermite-canonical matrix with the given (monic) determinant."""
    det = det.monic()
    count = 0
    for diag in _ordered_factorizations(det, r):
        size = 1
        for j, d in enumerate(diag):
            size *= ctx.q ** (j * int(d.deg))
        count += size
    budget.check_enumeration(count, "HNF enumeration with det %s" % det)
    out = []
    zero = PolyA.zero(ctx)
    for diag in _ordered_factorizations(det, r):
        pools = []
        for j, d in enumerate(diag):
            pools.append(list(itertools.product(
                *[list(polys_below(ctx, int(d.deg))) for _ in range(j)])))
        for cols in itertools.product(*pools):
            rows = [[zero] * r for _ in range(r)]
            for j in range(r):
                rows[j][j] = diag[j]
                for i in range(j):
                    rows[i][j] = cols[j][i]
            out.append(LatticeMatrix(ctx, rows))
    out.sort(key=LatticeMatrix.sort_key)
    return out


def enumerate_sublattices(ctx, r, idx, budget=DEFAULT_BUDGET):
    """One HNF representative per sublattice M <= A^r with [A^r:M]_A = idx.

    Exhaustive: all Hermite forms with the forced determinant, filtered by
    Smith type.  Deterministic lexicographic order.
    """
    if idx.r != r:
        raise HeckeftError("rank mismatch")
    return [h for h in enumerate_hnf_with_det(ctx, r, idx.det(), budget)
            if elementary_divisors(h) == idx]


def random_gl(ctx, r, rng, steps=8):
    """A random element of GL_r(A): a word in elementary matrices."""
    m = LatticeMatrix.identity(ctx, r)
    rows = [list(row) for row in m.rows]
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(r)
        j = rng.randrange(r)
        if kind == 0 and i != j:        # row add
            a = PolyA.random(ctx, rng, rng.randrange(3))
            rows[i] = [x + a * y for x, y in zip(rows[i], rows[j])]
        elif kind == 1 and i != j:      # swap
            rows[i], rows[j] = rows[j], rows[i]
        else:                           # unit scaling
            c = rng.randrange(1, ctx.q)
            rows[i] = [x.scale(c) for x in rows[i]]
    return LatticeMatrix(ctx, rows)
