"""The double-coset Hecke algebra R_Gamma for Gamma = GL_r(A).

Elements are integer-linear combinations of symbols T(a_1,...,a_r), one
per elementary-divisor type.  The product (T_alpha)(T_beta) is computed by
brute-force lattice counting: the structure constant m(alpha, beta, xi) is
the number of sublattices M <= A^r with [A^r:M] = beta and [M:A^r xi] =
alpha, and xi ranges over the divisor chains whose determinant is
det(alpha) det(beta).
"""

from .budgets import DEFAULT_BUDGET
from .errors import HeckeftError
from .lattice import (IndexType, LatticeMatrix, a_index, contains,
                      enumerate_sublattices)
from .polyring import PolyA, factorize, is_irreducible, monic_divisors

_sublattice_cache = {}


def cached_sublattices(ctx, r, idx, budget=DEFAULT_BUDGET):
    key = (ctx.key(), r, idx)
    if key not in _sublattice_cache:
        _sublattice_cache[key] = tuple(enumerate_sublattices(ctx, r, idx, budget))
    return _sublattice_cache[key]


def q_binomial(n, k, base):
    """Number of k-dimensional subspaces of an n-space over F_base."""
    if k < 0 or n < 0 or k > n:
        raise HeckeftError("q_binomial needs 0 <= k <= n")
    num = den = 1
    for i in range(k):
        num *= base ** n - base ** i
        den *= base ** k - base ** i
    assert num % den == 0
    return num // den


def divisor_chains(ctx, det, r):
    """All r-term monic chains a_r | ... | a_1 with product det."""
    det = det.monic()
    out = []

    def rec(d, rr):
        if rr == 1:
            yield (d,)
            return
        for a_last in monic_divisors(d):
            power = a_last ** rr
            quo, rem = divmod(d, power)
            if rem:
                continue
            for inner in rec(quo, rr - 1):
                yield tuple(x * a_last for x in inner) + (a_last,)

    for chain in rec(det, r):
        out.append(IndexType(chain))
    out.sort(key=IndexType.sort_key)
    return out


_mult_cache = {}


def multiplicity(alpha, beta, xi, budget=DEFAULT_BUDGET):
    """The structure constant m(alpha, beta, xi) by lattice counting."""
    r = alpha.r
    if beta.r != r or xi.r != r:
        raise HeckeftError("rank mismatch in multiplicity")
    if xi.det() != (alpha.det() * beta.det()).monic():
        return 0
    key = (alpha.ctx.key(), alpha, beta, xi)
    hit = _mult_cache.get(key)
    if hit is not None:
        return hit
    ctx = alpha.ctx
    xi_mat = LatticeMatrix.diagonal(ctx, list(xi.divisors))
    count = 0
    for m in cached_sublattices(ctx, r, beta, budget):
        if contains(m, xi_mat) and a_index(m, xi_mat) == alpha:
            count += 1
    _mult_cache[key] = count
    return count


class HeckeElement:
    """A finite integer combination of double-coset symbols of one rank."""

    __slots__ = ("ctx", "r", "terms")

    def __init__(self, ctx, r, terms=None):
        clean = {}
        for idx, c in (terms or {}).items():
            if idx.r != r:
                raise HeckeftError("term rank mismatch")
            if c:
                clean[idx] = int(c)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("HeckeElement is immutable")

    @classmethod
    def single(cls, idx, coeff=1):
        return cls(idx.ctx, idx.r, {idx: coeff})

    @classmethod
    def identity(cls, ctx, r):
        return cls.single(IndexType.identity(ctx, r))

    @classmethod
    def zero(cls, ctx, r):
        return cls(ctx, r, {})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, HeckeElement) and self.r == other.r
                and self.ctx == other.ctx and self.terms == other.terms)

    def __hash__(self):
        return hash((self.r, tuple(sorted(self.terms.items(),
                                          key=lambda kv: kv[0].sort_key()))))

    def __add__(self, other):
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0) + c
        return HeckeElement(self.ctx, self.r, out)

    def __neg__(self):
        return HeckeElement(self.ctx, self.r,
                            {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n):
        return HeckeElement(self.ctx, self.r,
                            {i: n * c for i, c in self.terms.items()})

    def reduce_mod_char(self):
        """The mod-p view of the coefficients (p the field characteristic)."""
        p = self.ctx.p
        return HeckeElement(self.ctx, self.r,
                            {i: c % p for i, c in self.terms.items()})

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, n):
        acc = HeckeElement.identity(self.ctx, self.r)
        for _ in range(n):
            acc = acc * self
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, c in self.sorted_terms():
            body = "T" + str(idx)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%d*%s" % (c, body))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self):
        return {"r": self.r,
                "terms": [{"coeff": c, "divisors": [str(d) for d in idx.divisors]}
                          for idx, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, ctx, data):
        terms = {}
        for item in data["terms"]:
            idx = IndexType([PolyA.parse(ctx, s).monic() for s in item["divisors"]])
            terms[idx] = terms.get(idx, 0) + int(item["coeff"])
        return cls(ctx, data["r"], terms)


def multiply(x, y, budget=DEFAULT_BUDGET):
    """Bilinear extension of the double-coset product."""
    if x.r != y.r or x.ctx != y.ctx:
        raise HeckeftError("rank or field mismatch in product")
    ctx, r = x.ctx, x.r
    out = {}
    for a_idx, ca in x.terms.items():
        for b_idx, cb in y.terms.items():
            det = (a_idx.det() * b_idx.det()).monic()
            for xi in divisor_chains(ctx, det, r):
                m = multiplicity(a_idx, b_idx, xi, budget)
                if m:
                    out[xi] = out.get(xi, 0) + ca * cb * m
    return HeckeElement(ctx, r, out)


def coset_degree(x, budget=DEFAULT_BUDGET):
    """Total number of right cosets, counted with coefficients.

    For a single symbol this is the number of sublattices of its type.
    """
    total = 0
    for idx, c in x.terms.items():
        total += c * len(cached_sublattices(x.ctx, x.r, idx, budget))
    return total


def psi_map(x):
    """The rank-lowering homomorphism: drop a trailing unit divisor.

    Terms whose last divisor is not a unit map to zero.
    """
    if x.r < 2:
        raise HeckeftError("psi needs rank >= 2")
    out = {}
    for idx, c in x.terms.items():
        if idx.divisors[-1].deg == 0:
            kept = IndexType(idx.divisors[:-1])
            out[kept] = out.get(kept, 0) + c
    return HeckeElement(x.ctx, x.r - 1, out)


def t_generator(ctx, r, p, i):
    """T_i = T(p,...,p,1,...,1) with i copies of the irreducible p."""
    if not 1 <= i <= r:
        raise HeckeftError("need 1 <= i <= r")
    p = p.monic()
    if not is_irreducible(p):
        raise HeckeftError("p must be irreducible")
    one = PolyA.one(ctx)
    return HeckeElement.single(IndexType([p] * i + [one] * (r - i)))


def _exponent_chains(n, r):
    """Nonincreasing exponent tuples of length r summing to n."""
    def rec(n, r, cap):
        if r == 0:
            if n == 0:
                yield ()
            return
        for e in range(min(n, cap), -1, -1):
            if n - e <= e * (r - 1):
                for rest in rec(n - e, r - 1, e):
                    yield (e,) + rest
    return list(rec(n, r, n))


def script_t_prime_power(ctx, r, p, n):
    """The summed operator: all double cosets of determinant p^n."""
    p = p.monic()
    if not is_irreducible(p):
        raise HeckeftError("p must be irreducible")
    terms = {}
    for exps in _exponent_chains(n, r):
        terms[IndexType.prime_power(p, exps)] = 1
    return HeckeElement(ctx, r, terms)


def script_t(ctx, r, modulus, budget=DEFAULT_BUDGET):
    """The composite operator for a general modulus N = prod p_i^{k_i}.

    Defined as the product of the prime-power operators; well defined
    because coprime double cosets multiply with coefficient one.
    """
    unit, factors = factorize(modulus)
    del unit
    acc = HeckeElement.identity(ctx, r)
    for p, k in factors:
        acc = multiply(acc, script_t_prime_power(ctx, r, p, k), budget)
    return acc


# -- expressing elements in the generators T_1 ... T_r ---------------------

class FormalPoly:
    """Integer polynomial in the formal generators T1..Tr.

    Keys are exponent tuples (e_1, ..., e_r).
    """

    __slots__ = ("r", "terms")

    def __init__(self, r, terms=None):
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != r:
                raise HeckeftError("exponent arity mismatch")
            if c:
                clean[exps] = int(c)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("FormalPoly is immutable")

    @classmethod
    def zero(cls, r):
        return cls(r, {})

    @classmethod
    def generator(cls, r, i):
        exps = [0] * r
        exps[i - 1] = 1
        return cls(r, {tuple(exps): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, FormalPoly) and self.r == other.r
                and self.terms == other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return FormalPoly(self.r, out)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return FormalPoly(self.r, out)

    def scale(self, n):
        return FormalPoly(self.r, {e: n * c for e, c in self.terms.items()})

    def widen(self, r):
        """Reinterpret in a larger rank (T_i keeps its subscript)."""
        return FormalPoly(r, {e + (0,) * (r - self.r): c
                              for e, c in self.terms.items()})

    def evaluate(self, ctx, p, budget=DEFAULT_BUDGET):
        """Substitute the concrete generators of rank r at the prime p."""
        gens = [t_generator(ctx, self.r, p, i + 1) for i in range(self.r)]
        acc = HeckeElement.zero(ctx, self.r)
        for exps, c in self.terms.items():
            term = HeckeElement.identity(ctx, self.r)
            for g, e in zip(gens, exps):
                for _ in range(e):
                    term = multiply(term, g, budget)
            acc = acc + term.scale(c)
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        def mono(exps):
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append("T%d" % (i + 1))
                elif e > 1:
                    factors.append("T%d^%d" % (i + 1, e))
            return "*".join(factors) if factors else "1"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[exps]
            m = mono(exps)
            if m == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append("%d*%s" % (c, m))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _p_power_exponents(idx, p):
    exps = []
    for d in idx.divisors:
        e = 0
        while d.deg > 0:
            quo, rem = divmod(d, p)
            if rem:
                raise HeckeftError("support is not a power of %s" % p)
            d = quo
            e += 1
        exps.append(e)
    return tuple(exps)


def express_in_generators(x, p, budget=DEFAULT_BUDGET):
    """Write a p-power supported element as a polynomial in T_1..T_r.

    Follows the structure theorem: push down along psi, subtract, factor
    out T_r (which divides what remains), recurse.  The returned
    polynomial reproduces x exactly under FormalPoly.evaluate.
    """
    p = p.monic()
    if not is_irreducible(p):
        raise HeckeftError("p must be irreducible")
    ctx, r = x.ctx, x.r
    for idx in x.terms:
        _p_power_exponents(idx, p)  # validates support

    if r == 1:
        out = FormalPoly.zero(1)
        for idx, c in x.terms.items():
            (e,) = _p_power_exponents(idx, p)
            out = out + FormalPoly(1, {(e,): c})
        return out

    if x.is_zero():
        return FormalPoly.zero(r)

    down = express_in_generators(psi_map(x), p, budget)
    head = down.widen(r)
    rem = x - head.evaluate(ctx, p, budget)
    # every remaining term has a p in its last slot; divide by T_r
    quotient_terms = {}
    for idx, c in rem.terms.items():
        exps = _p_power_exponents(idx, p)
        if exps[-1] < 1:
            raise HeckeftError("kernel division failed; term %s" % idx)
        quotient_terms[IndexType.prime_power(p, tuple(e - 1 for e in exps))] = c
    tail = express_in_generators(HeckeElement(ctx, r, quotient_terms), p, budget)
    return head + FormalPoly.generator(r, r) * tail
