"""The polynomial ring A = F_q[t] and its fraction field F_q(t).

PolyA is a dense, immutable coefficient tuple (low to high, no trailing
zeros); the zero polynomial is the empty tuple with degree -inf.
RationalFunction keeps a reduced fraction with monic denominator.
"""

from .errors import HeckeftError, ZeroInversionError
from .fq import FqContext

NEG_INF = float("-inf")


class PolyA:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("PolyA is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (1,))

    @classmethod
    def t(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def constant(cls, ctx, c):
        return cls(ctx, (c % ctx.q,))

    @classmethod
    def monomial(cls, ctx, c, n):
        return cls(ctx, (0,) * n + (c,))

    @classmethod
    def random(cls, ctx, rng, maxdeg):
        return cls(ctx, [rng.randrange(ctx.q) for _ in range(maxdeg + 1)])

    # -- basic queries ----------------------------------------------------

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self):
        if not self.coeffs:
            raise HeckeftError("leading coefficient of 0")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_unit(self):
        return len(self.coeffs) == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, PolyA) and self.ctx == other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx.q, self.coeffs))

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = ctx.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return PolyA(ctx, out)

    def __neg__(self):
        neg = self.ctx.neg
        return PolyA(self.ctx, [neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyA.zero(ctx)
        mul, add = ctx.mul, ctx.add
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return PolyA(ctx, out)

    def scale(self, c):
        mul = self.ctx.mul
        return PolyA(self.ctx, [mul(c, x) for x in self.coeffs])

    def shift(self, n):
        """Multiply by t**n."""
        if not self.coeffs:
            return self
        return PolyA(self.ctx, (0,) * n + self.coeffs)

    def __divmod__(self, other):
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        ctx = self.ctx
        rem = list(self.coeffs)
        db = other.deg
        inv_lc = ctx.inv(other.lc)
        quot = [0] * max(len(rem) - db, 0)
        mul, sub = ctx.mul, ctx.sub
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                f = mul(c, inv_lc)
                quot[i - db] = f
                for j, bcj in enumerate(bc):
                    rem[i - db + j] = sub(rem[i - db + j], mul(f, bcj))
        return PolyA(ctx, quot), PolyA(ctx, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n):
        if n < 0:
            raise HeckeftError("negative power of a polynomial")
        r = PolyA.one(self.ctx)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def pow_mod(self, n, mod):
        r = PolyA.one(self.ctx) % mod
        base = self % mod
        while n:
            if n & 1:
                r = (r * base) % mod
            base = (base * base) % mod
            n >>= 1
        return r

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.ctx.inv(self.lc))

    @staticmethod
    def gcd(a, b):
        while b:
            a, b = b, a % b
        return a.monic()

    def evaluate(self, x, embed):
        """Horner evaluation in any commutative ring.

        ``embed`` maps an F_q element code into the target ring; ``x`` is a
        ring element supporting + and *.
        """
        if not self.coeffs:
            return embed(0)
        acc = embed(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + embed(c)
        return acc

    # -- text -------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        ctx = self.ctx
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if not c:
                continue
            cs = ctx.format_element(c)
            wrap = ("+" in cs or "-" in cs)
            if i == 0:
                parts.append("(%s)" % cs if wrap else cs)
            else:
                var = "t^%d" % i if i > 1 else "t"
                if c == 1:
                    parts.append(var)
                elif wrap:
                    parts.append("(%s)*%s" % (cs, var))
                else:
                    parts.append("%s*%s" % (cs, var))
        return "+".join(parts)

    __repr__ = __str__

    @classmethod
    def parse(cls, ctx, text):
        text = text.strip().replace(" ", "")
        if not text or text == "0":
            return cls.zero(ctx)
        out = cls.zero(ctx)
        for term in _split_top(text):
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            coef_txt, exp = term, 0
            if "t" in term:
                head, _, tail = term.partition("t")
                coef_txt = head.rstrip("*")
                if tail.startswith("^"):
                    exp = int(tail[1:])
                elif tail:
                    raise HeckeftError("bad polynomial term %r" % term)
                else:
                    exp = 1
            c = ctx.parse_element(coef_txt) if coef_txt else 1
            if sign < 0:
                c = ctx.neg(c)
            if c:
                out = out + cls.monomial(ctx, c, exp)
        return out


def _split_top(text):
    """Split a sum at top-level +/- (parenthesis aware)."""
    terms, cur, depth = [], "", 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "^*+-(":
            terms.append(cur)
            cur = "-" if ch == "-" else ""
        else:
            if not (ch == "+" and i == 0):
                cur += ch
    terms.append(cur)
    return [t for t in terms if t]


# -- irreducibility and factorization -------------------------------------

def element_class(a):
    """One of 'zero', 'unit', 'irreducible', 'reducible'."""
    if not a:
        return "zero"
    if a.deg == 0:
        return "unit"
    return "irreducible" if is_irreducible(a) else "reducible"


def is_irreducible(a):
    """Deterministic distinct-degree test via iterated q-power Frobenius.

    Constants and the zero polynomial return False (units are flagged by
    element_class).
    """
    if not a or a.deg < 1:
        return False
    n = int(a.deg)
    if n == 1:
        return True
    ctx = a.ctx
    t = PolyA.t(ctx)
    # t^(q^i) mod a, by repeated q-th powering
    fr = t.pow_mod(ctx.q, a)
    powers = {1: fr}
    cur = fr
    for i in range(2, n + 1):
        cur = cur.pow_mod(ctx.q, a)
        powers[i] = cur
    if powers[n] != (t % a):
        return False
    for ell in _prime_divisors(n):
        g = PolyA.gcd(powers[n // ell] - t, a)
        if g.deg != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def monic_polys(ctx, deg):
    """All monic polynomials of exact degree deg (deterministic order)."""
    q = ctx.q
    for code in range(q ** deg):
        cs = []
        m = code
        for _ in range(deg):
            cs.append(m % q)
            m //= q
        yield PolyA(ctx, cs + [1])


def polys_below(ctx, deg):
    """All polynomials of degree < deg, zero included."""
    q = ctx.q
    for code in range(q ** deg):
        cs = []
        m = code
        for _ in range(deg):
            cs.append(m % q)
            m //= q
        yield PolyA(ctx, cs)


def monic_irreducibles(ctx, deg):
    for f in monic_polys(ctx, deg):
        if is_irreducible(f):
            yield f


def factorize(a):
    """Monic irreducible factors with multiplicity, plus the unit.

    Returns (unit_code, [(prime, exponent), ...]) sorted deterministically.
    Trial division; intended for desk-scale degrees only.
    """
    if not a:
        raise HeckeftError("cannot factor 0")
    ctx = a.ctx
    unit = a.lc
    rem = a.monic()
    factors = []
    d = 1
    while rem.deg >= 1:
        if 2 * d > rem.deg:
            factors.append((rem, 1))
            break
        for p in monic_irreducibles(ctx, d):
            e = 0
            while not rem % p:
                rem = rem // p
                e += 1
            if e:
                factors.append((p, e))
        d += 1
    factors.sort(key=lambda pe: pe[0].sort_key())
    return unit, factors


def monic_divisors(a):
    """All monic divisors of a, deterministically ordered."""
    _, factors = factorize(a)
    divs = [PolyA.one(a.ctx)]
    for p, e in factors:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    divs.sort(key=PolyA.sort_key)
    return divs


# -- the fraction field ----------------------------------------------------

class RationalFunction:
    """Reduced fraction num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = PolyA.one(num.ctx)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = PolyA.gcd(num, den)
        if g.deg > 0:
            num, den = num // g, den // g
        if not den.is_monic():
            c = den.ctx.inv(den.lc)
            num, den = num.scale(c), den.scale(c)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def zero(cls, ctx):
        return cls(PolyA.zero(ctx))

    @classmethod
    def one(cls, ctx):
        return cls(PolyA.one(ctx))

    @classmethod
    def constant(cls, ctx, c):
        return cls(PolyA.constant(ctx, c))

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @property
    def ctx(self):
        return self.num.ctx

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def inv(self):
        if not self.num:
            raise ZeroInversionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        r = RationalFunction.one(self.ctx)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def scale_fq(self, c):
        return RationalFunction(self.num.scale(c), self.den)

    def is_polynomial(self):
        return self.den.deg == 0

    def __str__(self):
        if self.den.deg == 0 and self.den.coeffs == (1,):
            return str(self.num)
        return "%s/%s" % (_maybe_paren(str(self.num)), _maybe_paren(str(self.den)))

    __repr__ = __str__


def _maybe_paren(s):
    return "(%s)" % s if ("+" in s or "-" in s or "*" in s or "/" in s) else s
