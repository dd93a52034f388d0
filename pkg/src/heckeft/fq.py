"""Exact arithmetic in F_q, q = p^e.

Elements are plain ints in [0, q).  For a prime field the int is the
residue; for an extension field it encodes the base-p digits of a
polynomial in the generator ``g`` modulo a fixed irreducible modulus,
so 5 over F_9 (p = 3) means g + 2.  All arithmetic is table-driven for
the desk-scale fields used here.

Values are immutable and contexts are safe for concurrent reads.
"""

from .errors import HeckeftError, ZeroInversionError

# Default moduli for the extension fields the CLI supports out of the box,
# as low-to-high coefficient tuples over the prime field (monic implied).
DEFAULT_MODULI = {
    4: (1, 1, 1),      # g^2 + g + 1
    8: (1, 1, 0, 1),   # g^3 + g + 1
    9: (1, 0, 1),      # g^2 + 1
}

_TABLE_CAP = 512


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_prime_power(q):
    """Split q into (p, e) or raise if q is not a prime power."""
    if q < 2:
        raise HeckeftError("q must be at least 2, got %d" % q)
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise HeckeftError("q = %d is not a prime power" % q)
            return p, e
    raise HeckeftError("q = %d is not a prime power" % q)


class FqContext:
    """The field F_q together with encode/decode and arithmetic tables."""

    def __init__(self, p, e=1, modulus=None):
        if not _is_prime(p):
            raise HeckeftError("characteristic %d is not prime" % p)
        if e < 1:
            raise HeckeftError("extension degree must be >= 1")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = DEFAULT_MODULI.get(self.q)
                if modulus is None:
                    raise HeckeftError(
                        "no default modulus for q = %d; supply one" % self.q)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise HeckeftError("modulus must be monic of degree %d" % e)
            if not _modulus_irreducible(p, modulus):
                raise HeckeftError("modulus is reducible over F_%d" % p)
            self.modulus = modulus
        if self.q > _TABLE_CAP:
            raise HeckeftError("q = %d exceeds the table cap %d" % (self.q, _TABLE_CAP))
        self._build_tables()

    # -- encoding ---------------------------------------------------------

    def digits(self, a):
        """Base-p digits (length e, low first) of the element code a."""
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds):
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + (d % self.p)
        return v

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self._add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self._neg = [(-a) % p for a in range(p)]
        else:
            self._add = [[self.from_digits(
                (x + y) % p for x, y in zip(self.digits(a), self.digits(b)))
                for b in range(q)] for a in range(q)]
            self._neg = [self.from_digits((-x) % p for x in self.digits(a))
                         for a in range(q)]
            self._mul = [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def _mul_raw(self, a, b):
        p = self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce modulo the (monic) modulus
        for i in range(len(prod) - 1, self.e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, m in enumerate(self.modulus[:-1]):
                    prod[i - self.e + j] = (prod[i - self.e + j] - c * m) % p
        return self.from_digits(prod[: self.e])

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroInversionError("inverse of 0 in F_%d" % self.q)
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            if n < 0:
                raise ZeroInversionError("0 ** %d in F_%d" % (n, self.q))
            return 0 if n else 1
        n %= self.q - 1
        r = 1
        base = a
        while n:
            if n & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            n >>= 1
        return r

    def embed_int(self, n):
        """The image of the rational integer n in F_q (prime subfield)."""
        return n % self.p

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    # -- misc -------------------------------------------------------------

    def key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FqContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "FqContext(q=%d)" % self.q

    # -- text -------------------------------------------------------------

    def format_element(self, a):
        if self.e == 1:
            return str(a)
        parts = []
        for i in reversed(range(self.e)):
            d = self.digits(a)[i]
            if not d:
                continue
            if i == 0:
                parts.append(str(d))
            else:
                head = "" if d == 1 else "%d*" % d
                parts.append("%sg^%d" % (head, i) if i > 1 else "%sg" % head)
        return "+".join(parts) if parts else "0"

    def parse_element(self, text):
        text = text.strip().replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        if self.e == 1:
            return int(text) % self.p
        total = 0
        for term in _split_sum(text):
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            elif term.startswith("+"):
                term = term[1:]
            if "g" in term:
                coef, _, tail = term.partition("g")
                coef = coef.rstrip("*")
                c = int(coef) if coef else 1
                exp = int(tail[1:]) if tail.startswith("^") else (1 if not tail else int(tail))
            else:
                c = int(term)
                exp = 0
            digit = (sign * c) % self.p
            ds = [0] * self.e
            if exp >= self.e:
                raise HeckeftError("generator power %d out of range" % exp)
            ds[exp] = digit
            total = self.add(total, self.from_digits(ds))
        return total


def _split_sum(text):
    """Split a sum at top-level + and - signs (no parentheses expected)."""
    terms, cur = [], ""
    for i, ch in enumerate(text):
        if ch in "+-" and i > 0 and text[i - 1] not in "+-^*":
            terms.append(cur)
            cur = ch if ch == "-" else ""
        elif not (ch == "+" and i == 0):
            cur += ch
    terms.append(cur)
    return [t for t in terms if t]


def _modulus_irreducible(p, modulus):
    """Brute irreducibility of a monic modulus over F_p (degree <= 6)."""
    deg = len(modulus) - 1
    if deg == 1:
        return True

    def poly_mod(num, den):
        num = list(num)
        while len(num) >= len(den) and any(num):
            while num and num[-1] == 0:
                num.pop()
            if len(num) < len(den):
                break
            shift = len(num) - len(den)
            c = num[-1]
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - c * d) % p
            while num and num[-1] == 0:
                num.pop()
        return num

    def monic_polys(d):
        for code in range(p ** d):
            cs = []
            m = code
            for _ in range(d):
                cs.append(m % p)
                m //= p
            yield cs + [1]

    for d in range(1, deg // 2 + 1):
        for cand in monic_polys(d):
            if not poly_mod(modulus, cand):
                return False
    return True


def context_for_q(q, modulus_text=None):
    """FqContext from a prime power, optionally with a modulus in g-notation."""
    p, e = factor_prime_power(q)
    if modulus_text is None or e == 1:
        return FqContext(p, e)
    probe = FqContext(p, e)  # to reuse the element parser for the modulus
    coeffs = [0] * (e + 1)
    for term in _split_sum(modulus_text.replace(" ", "")):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if "g" in term:
            coef, _, tail = term.partition("g")
            coef = coef.rstrip("*")
            c = int(coef) if coef else 1
            exp = int(tail[1:]) if tail.startswith("^") else 1
        else:
            c, exp = int(term), 0
        if exp > e:
            raise HeckeftError("modulus degree exceeds %d" % e)
        coeffs[exp] = (coeffs[exp] + sign * c) % p
    del probe
    return FqContext(p, e, tuple(coeffs))
