"""Truncated Laurent series in 1/t: the completion F_q((1/t)).

A series is a sparse dict {exponent: coefficient} plus an absolute
``cutoff``: the coefficient of t^e is known exactly for every e > cutoff
and unknown at or below it.  cutoff None means the value is exact (a
polynomial in t, or an exactly-known finite tail).  Precision is absolute
rather than relative so that sums of series with different valuations
keep a common guarantee.

All values are immutable; operations are pure functions.
"""

from .errors import (HeckeftError, NonConvergentProductError, PrecisionError,
                     ZeroInversionError)
from .polyring import PolyA


def _worse(*cutoffs):
    """Combine cutoffs: the larger (less precise) wins; None is exact."""
    known = [c for c in cutoffs if c is not None]
    return max(known) if known else None


class LaurentSeries:
    __slots__ = ("ctx", "coeffs", "cutoff")

    def __init__(self, ctx, coeffs, cutoff=None):
        cs = {e: c for e, c in coeffs.items()
              if c and (cutoff is None or e > cutoff)}
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "cutoff", cutoff)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx, cutoff=None):
        return cls(ctx, {}, cutoff)

    @classmethod
    def one(cls, ctx):
        return cls(ctx, {0: 1})

    @classmethod
    def constant(cls, ctx, c):
        return cls(ctx, {0: c % ctx.q})

    @classmethod
    def t_power(cls, ctx, n, c=1):
        return cls(ctx, {n: c % ctx.q})

    @classmethod
    def from_poly(cls, p):
        return cls(p.ctx, {i: c for i, c in enumerate(p.coeffs) if c})

    @classmethod
    def from_rational(cls, rf, cutoff):
        num = cls.from_poly(rf.num)
        if rf.den.deg == 0:
            return num
        return num * cls.from_poly(rf.den).inv(cutoff)

    # -- queries ----------------------------------------------------------

    @property
    def valuation(self):
        """Top t-exponent of the known part, or None if none is known."""
        return max(self.coeffs) if self.coeffs else None

    def constant_term(self):
        return self.coeffs.get(0, 0)

    def coeff(self, e):
        if self.cutoff is not None and e <= self.cutoff:
            raise PrecisionError("coefficient of t^%d is below the cutoff" % e)
        return self.coeffs.get(e, 0)

    def is_exact_zero(self):
        return not self.coeffs and self.cutoff is None

    def __bool__(self):
        """True iff the series is nonzero within its precision window."""
        return bool(self.coeffs)

    def is_one(self):
        return self.coeffs == {0: 1}

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries) and self.ctx == other.ctx
                and self.coeffs == other.coeffs and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash((self.ctx.q, tuple(sorted(self.coeffs.items())), self.cutoff))

    def agrees(self, other):
        """Equality of all coefficients above the combined cutoff."""
        c = _worse(self.cutoff, other.cutoff)
        for e in set(self.coeffs) | set(other.coeffs):
            if c is not None and e <= c:
                continue
            if self.coeffs.get(e, 0) != other.coeffs.get(e, 0):
                return False
        return True

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        ctx = self.ctx
        cut = _worse(self.cutoff, other.cutoff)
        out = dict(self.coeffs)
        add = ctx.add
        for e, c in other.coeffs.items():
            s = add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentSeries(ctx, out, cut)

    def __neg__(self):
        neg = self.ctx.neg
        return LaurentSeries(self.ctx, {e: neg(c) for e, c in self.coeffs.items()},
                             self.cutoff)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero(ctx)
        va = self.valuation if self.coeffs else self.cutoff
        vb = other.valuation if other.coeffs else other.cutoff
        cands = []
        if self.cutoff is not None:
            cands.append(self.cutoff + (vb if vb is not None else 0))
        if other.cutoff is not None:
            cands.append(other.cutoff + (va if va is not None else 0))
        if self.cutoff is not None and other.cutoff is not None:
            cands.append(self.cutoff + other.cutoff)
        cut = max(cands) if cands else None
        mul, add = ctx.mul, ctx.add
        out = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if cut is not None and e <= cut:
                    continue
                s = add(out.get(e, 0), mul(ca, cb))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentSeries(ctx, out, cut)

    def scale_fq(self, c):
        if not c % self.ctx.q:
            return LaurentSeries.zero(self.ctx, self.cutoff)
        mul = self.ctx.mul
        return LaurentSeries(self.ctx, {e: mul(c, x) for e, x in self.coeffs.items()},
                             self.cutoff)

    def truncate(self, cutoff):
        return LaurentSeries(self.ctx, self.coeffs, _worse(self.cutoff, cutoff))

    def inv(self, cutoff=None):
        """Multiplicative inverse, exact down to cutoff.

        An exact input that is a single monomial inverts exactly; any other
        exact input needs an explicit cutoff since its inverse has an
        infinite tail.
        """
        if not self.coeffs:
            raise ZeroInversionError("inversion of (apparent) zero series")
        ctx = self.ctx
        v = self.valuation
        lead = self.coeffs[v]
        if self.cutoff is None and len(self.coeffs) == 1:
            out = LaurentSeries(ctx, {-v: ctx.inv(lead)})
            return out if cutoff is None else out.truncate(cutoff)
        intrinsic = None if self.cutoff is None else self.cutoff - 2 * v
        target = _worse(intrinsic, cutoff)
        if target is None:
            raise PrecisionError(
                "inverse of a non-monomial exact series needs a cutoff")
        # self = lead * t^v * (1 + w) with w strictly below order 0
        inv_lead = ctx.inv(lead)
        w = LaurentSeries(ctx, {e - v: ctx.mul(inv_lead, c)
                                for e, c in self.coeffs.items() if e != v},
                          target + v)
        geom = LaurentSeries.one(ctx).truncate(target + v)
        term = -w
        while term.coeffs:
            geom = geom + term
            term = (term * (-w)).truncate(target + v)
        return LaurentSeries(ctx, {e - v: ctx.mul(inv_lead, c)
                                   for e, c in geom.coeffs.items()},
                             target)

    def __pow__(self, n):
        return self.pow(n)

    def pow(self, n, cutoff=None):
        if n < 0:
            return self.inv(cutoff).pow(-n, cutoff)
        r = LaurentSeries.one(self.ctx)
        base = self if cutoff is None else self.truncate(cutoff)
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        if cutoff is not None:
            r = r.truncate(cutoff)
        return r

    def frobenius_q(self):
        """The q-power map; exact on known coefficients in characteristic p."""
        q = self.ctx.q
        cut = None if self.cutoff is None else self.cutoff * q
        return LaurentSeries(self.ctx, {e * q: c for e, c in self.coeffs.items()},
                             cut)

    def pow_q(self, i):
        out = self
        for _ in range(i):
            out = out.frobenius_q()
        return out

    # -- text and JSON ----------------------------------------------------

    def __str__(self):
        ctx = self.ctx
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            cs = ctx.format_element(c)
            wrap = ("+" in cs or "-" in cs)
            if e == 0:
                parts.append("(%s)" % cs if wrap else cs)
            else:
                var = "t^%d" % e if e != 1 else "t"
                if c == 1:
                    parts.append(var)
                else:
                    parts.append(("(%s)*" % cs if wrap else "%s*" % cs) + var)
        if self.cutoff is not None:
            parts.append("O(t^%d)" % self.cutoff)
        if not parts:
            return "0"
        return " + ".join(parts)

    __repr__ = __str__

    @classmethod
    def parse(cls, ctx, text):
        text = text.strip().replace(" ", "")
        if text == "0":
            return cls.zero(ctx)
        coeffs = {}
        cutoff = None
        for chunk in _split_plus(text):
            if chunk.startswith("O("):
                inner = chunk[2:-1]
                if inner == "1":
                    cutoff = 0
                else:
                    tail = inner[1:]
                    cutoff = int(tail[1:]) if tail.startswith("^") else 1
                continue
            if "t" in chunk:
                head, _, tail = chunk.partition("t")
                head = head.rstrip("*")
                e = int(tail[1:]) if tail.startswith("^") else 1
                c = ctx.parse_element(head) if head else 1
            else:
                c, e = ctx.parse_element(chunk), 0
            s = ctx.add(coeffs.get(e, 0), c)
            if s:
                coeffs[e] = s
            else:
                coeffs.pop(e, None)
        return cls(ctx, coeffs, cutoff)


def _split_plus(text):
    """Split at top-level '+' only (parenthesis aware, '^-' kept intact)."""
    chunks, cur, depth = [], "", 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            if cur:
                chunks.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        chunks.append(cur)
    return chunks


def laurent_from_product(ctx, factors, cutoff):
    """Product of the given factors, exact modulo the cutoff.

    Every factor must be a unit of the shape 1 + (lower order terms); a
    factor whose valuation is nonzero or whose constant term vanishes
    breaks convergence of the products this models and raises.  The result
    does not depend on the factor order.
    """
    acc = LaurentSeries.one(ctx).truncate(cutoff)
    n = 0
    for f in factors:
        n += 1
        v = f.valuation
        if v is None or v != 0 or f.coeffs.get(0, 0) == 0:
            raise NonConvergentProductError(
                "factor %d is not 1 + (lower order): %s" % (n, f))
        acc = (acc * f).truncate(cutoff)
    return acc
