"""Rank-2 analytic layer: u-expansions and the Hecke action.

Everything lives over F_q((1/t)) at a fixed absolute precision.  The
rank-1 building blocks (exponential coefficients of the lattice A, the
modules phi_a, the substitution series u_a) feed the Eisenstein
u-expansions; inverting the Eisenstein generating series recovers the
exponential coefficients of the rank-2 lattice, from which the
coefficient forms g_1 and g_2 = Delta are solved.  The Hecke operator at
an irreducible p acts on a u-expansion f of weight k by

    T f = sum_n f_n u_p^n  +  sum_{n>=1} p^(n-k) f_n G_{n,L}(u),

where u_p = u_subst(p), L = e_{pA}(A) is the p-torsion space of the
rank-1 module of the lattice pA, and the sum over translation cosets is
absorbed into the Goss polynomial exactly once (emitting q^deg(p) copies
would kill the second summand in characteristic p).  With the table
convention G_0 = 0 the constant term of T f is f_0.
"""

from dataclasses import dataclass

import itertools
from .budgets import DEFAULT_BUDGET
from .errors import HeckeftError, OracleDisagreementError, PrecisionError
from .goss import ExpCoeffs, FiniteLattice, goss_polynomials
from .goss import goss_for_finite_lattice
from .laurent import LaurentSeries, laurent_from_product
from .polyring import PolyA, is_irreducible, monic_polys, polys_below

_CERT_MARGIN = 4


def _live(c):
    """A coefficient that may carry content: nonzero or windowed zero.

    Exact zeros can be skipped in convolutions; a zero-within-precision
    value still carries its O(t^cutoff) window and must propagate.
    """
    return bool(c) or c.cutoff is not None


class USeries:
    """Truncated expansion sum f_n u^n with Laurent coefficients.

    Coefficients are known exactly for n <= trunc (each within its own
    Laurent precision).  ``weight`` is metadata carried by modular forms;
    plain series use None.
    """

    __slots__ = ("ctx", "coeffs", "trunc", "weight")

    def __init__(self, ctx, coeffs, trunc, weight=None):
        coeffs = list(coeffs)[: trunc + 1]
        while len(coeffs) < trunc + 1:
            coeffs.append(LaurentSeries.zero(ctx))
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, *a):
        raise AttributeError("USeries is immutable")

    @classmethod
    def zero(cls, ctx, trunc, weight=None):
        return cls(ctx, [], trunc, weight)

    @classmethod
    def constant(cls, ctx, value, trunc, weight=None):
        return cls(ctx, [value], trunc, weight)

    @classmethod
    def u_power(cls, ctx, n, trunc):
        cs = [LaurentSeries.zero(ctx)] * n + [LaurentSeries.one(ctx)]
        return cls(ctx, cs, trunc)

    def with_weight(self, k):
        return USeries(self.ctx, self.coeffs, self.trunc, k)

    @property
    def u_order(self):
        """Least n with a known-nonzero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def _first_live(self):
        """Least n whose coefficient is not an exact zero (for precision
        bookkeeping: windowed zeros may hide content)."""
        for n, c in enumerate(self.coeffs):
            if _live(c):
                return n
        return self.trunc + 1

    def coeff(self, n):
        if n > self.trunc:
            raise PrecisionError("u^%d is beyond the truncation %d" % (n, self.trunc))
        return self.coeffs[n]

    def truncate(self, M):
        return USeries(self.ctx, self.coeffs[: M + 1], min(self.trunc, M),
                       self.weight)

    def is_zero_within(self):
        return all(not c for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero_within()

    def _merge_weight(self, other):
        if self.weight is None:
            return other.weight
        if other.weight is None:
            return self.weight
        if self.weight != other.weight:
            raise HeckeftError("adding forms of different weights %s, %s"
                               % (self.weight, other.weight))
        return self.weight

    def __add__(self, other):
        trunc = min(self.trunc, other.trunc)
        cs = [self.coeffs[n] + other.coeffs[n] for n in range(trunc + 1)]
        return USeries(self.ctx, cs, trunc, self._merge_weight(other))

    def __neg__(self):
        return USeries(self.ctx, [-c for c in self.coeffs], self.trunc, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        oa = self._first_live()
        ob = other._first_live()
        trunc = min(self.trunc + ob, other.trunc + oa, self.trunc + other.trunc)
        w = None
        if self.weight is not None and other.weight is not None:
            w = self.weight + other.weight
        zero = LaurentSeries.zero(self.ctx)
        out = [zero] * (trunc + 1)
        left = [(n, c) for n, c in enumerate(self.coeffs) if _live(c)]
        right = [(n, c) for n, c in enumerate(other.coeffs) if _live(c)]
        for n1, c1 in left:
            for n2, c2 in right:
                n = n1 + n2
                if n <= trunc:
                    out[n] = out[n] + c1 * c2
        return USeries(self.ctx, out, trunc, w)

    def scale(self, ls):
        return USeries(self.ctx, [c * ls for c in self.coeffs], self.trunc,
                       self.weight)

    def scale_fq(self, c):
        return USeries(self.ctx, [x.scale_fq(c) for x in self.coeffs],
                       self.trunc, self.weight)

    def __pow__(self, n):
        if n < 0:
            raise HeckeftError("negative USeries power; use inv")
        acc = USeries.constant(self.ctx, LaurentSeries.one(self.ctx), self.trunc)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def inv(self):
        """Inverse of a series with invertible constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise HeckeftError("inverting a series with zero constant term")
        c0_inv = c0.inv()
        zero = LaurentSeries.zero(self.ctx)
        out = [c0_inv] + [zero] * self.trunc
        for n in range(1, self.trunc + 1):
            acc = zero
            for i in range(1, n + 1):
                if self.coeffs[i] and out[n - i]:
                    acc = acc + self.coeffs[i] * out[n - i]
            out[n] = -(c0_inv * acc)
        return USeries(self.ctx, out, self.trunc)

    def frobenius_q(self):
        q = self.ctx.q
        trunc = (self.trunc + 1) * q - 1
        zero = LaurentSeries.zero(self.ctx)
        out = [zero] * (trunc + 1)
        for n, c in enumerate(self.coeffs):
            if c:
                out[n * q] = c.frobenius_q()
        return USeries(self.ctx, out, trunc)

    def pow_q(self, i):
        out = self
        for _ in range(i):
            out = out.frobenius_q()
        return out

    def agrees(self, other):
        trunc = min(self.trunc, other.trunc)
        return all(self.coeffs[n].agrees(other.coeffs[n]) for n in range(trunc + 1))

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            head = "(%s)" % c
            parts.append(head if n == 0 else
                         "%s*u^%d" % (head, n) if n > 1 else "%s*u" % head)
        parts.append("O(u^%d)" % (self.trunc + 1))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return {"weight": self.weight, "truncation": self.trunc,
                "coeffs": [{"n": n, "value": str(c)}
                           for n, c in enumerate(self.coeffs) if c]}

    @classmethod
    def from_json(cls, ctx, data):
        cs = [LaurentSeries.zero(ctx)] * (data["truncation"] + 1)
        for item in data["coeffs"]:
            cs[item["n"]] = LaurentSeries.parse(ctx, item["value"])
        return cls(ctx, cs, data["truncation"], data.get("weight"))


@dataclass(frozen=True)
class HeckePrime:
    """A monic irreducible p together with its degree."""
    p: PolyA
    d: int

    @classmethod
    def make(cls, p):
        p = p.monic()
        if not is_irreducible(p):
            raise HeckeftError("%s is not irreducible" % p)
        return cls(p, int(p.deg))


@dataclass(frozen=True)
class USubst:
    """u_a together with the polynomial h_a and the leading Delta_a."""
    u: USeries
    h: USeries
    delta: LaurentSeries


class Rank1Module:
    """phi_a(X) = a X + g_1 X^q + ... for the rank-1 lattice A."""

    __slots__ = ("a", "gs", "delta")

    def __init__(self, a, gs):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "gs", tuple(gs))
        object.__setattr__(self, "delta",
                           gs[-1] if gs else LaurentSeries.from_poly(a))

    def __setattr__(self, *a):
        raise AttributeError("Rank1Module is immutable")

    def coefficient(self, i):
        """Coefficient of X^(q^i); i = 0 gives the scalar a itself."""
        if i == 0:
            return LaurentSeries.from_poly(self.a)
        return self.gs[i - 1]

    @property
    def degree(self):
        return len(self.gs)


def _solve_module_coefficients(a_elem, a_pows, alphas, count, frobenius, mul):
    """Coefficients g_1..g_count of a module from its functional equation.

    The relation matched at X^(q^i) is
        a^(q^i) alpha_i = a alpha_i + sum_{j=1..i} g_j * alpha_{i-j}^(q^j),
    with alpha_0 = 1, so g_i = (a^(q^i) - a) alpha_i - sum_{j<i} ... in
    increasing i.  Generic over the coefficient ring: ``alphas(i)``
    returns alpha_i, ``frobenius(x, j)`` the q^j power map.
    """
    gs = []
    for i in range(1, count + 1):
        acc = None
        for j in range(1, i):
            term = mul(gs[j - 1], frobenius(alphas(i - j), j))
            acc = term if acc is None else acc + term
        lead = mul(a_pows(i) - a_elem, alphas(i))
        gs.append(lead if acc is None else lead - acc)
    return gs


class ExpansionContext:
    """Shared cache for one (F_q, Laurent precision, u-truncation)."""

    def __init__(self, ctx, prec=60, M=20, budget=DEFAULT_BUDGET):
        self.ctx = ctx
        self.prec = prec
        self.cutoff = -prec
        self.M = M
        self.budget = budget
        self._alphaA = None          # list, alpha_i(A) for i >= 1
        self._alphaA_product = None  # the independently computed low ones
        self._r1_modules = {}
        self._usubst = {}
        self._eis = {}
        self._goss_A = None
        self._lattice_alphas = None
        self._forms = {}
        self._torsion = {}
        self._goss_L = {}

    # -- rank-1 exponential coefficients of the lattice A -------------------

    def _alpha_by_product(self, imax):
        """Method (a): truncated subspace products with a tail certificate.

        The F_q-span of 1, t, ..., t^D exhausts the degree filtration of
        A; the first omitted generator contributes corrections of
        valuation (q-1) v(mu) with mu = e_span(t^(D+1)), so D grows until
        that clears the precision window.
        """
        ctx, q = self.ctx, self.ctx.q
        D = 0
        while True:
            mu = self._span_exponential_value(
                [PolyA.monomial(ctx, 1, j) for j in range(D + 1)],
                PolyA.monomial(ctx, 1, D + 1))
            v = mu.valuation
            if v is not None and (q - 1) * v > self.prec + _CERT_MARGIN:
                break
            D += 1
            if D > 12:
                raise PrecisionError("subspace certificate did not converge")
        # expand e_span as a polynomial in X, truncated above X^(q^imax)
        xb = q ** imax
        one = LaurentSeries.one(ctx)
        poly = {1: one}
        for a in polys_below(ctx, D + 1):
            if not a:
                continue
            inv_a = LaurentSeries.from_poly(a).inv(self.cutoff)
            new = {}
            for e, c in poly.items():
                if e <= xb:
                    new[e] = (new[e] + c) if e in new else c
                    ep = e + 1
                    if ep <= xb:
                        term = -(c * inv_a)
                        new[ep] = (new[ep] + term) if ep in new else term
            poly = {e: c for e, c in new.items() if c}
        alphas = []
        for i in range(1, min(imax, D + 1) + 1):
            alphas.append(poly.get(q ** i, LaurentSeries.zero(ctx, self.cutoff)))
        return alphas

    def _span_exponential_value(self, basis, arg):
        """e_span(arg) for the F_q-span of the given polynomials.

        When every span element dominates arg in degree the factors are
        units 1 + (lower order) and the certified product applies; the
        certificate evaluations themselves (arg above the span) fall back
        to a plain finite product.
        """
        ctx = self.ctx
        arg_ls = LaurentSeries.from_poly(arg)
        factors = []
        near_one = True
        for combo in _nonzero_combos(ctx, basis):
            f = (LaurentSeries.one(ctx)
                 - arg_ls * LaurentSeries.from_poly(combo).inv(self.cutoff))
            near_one = near_one and f.valuation == 0
            factors.append(f)
        if near_one:
            return arg_ls * laurent_from_product(ctx, factors, self.cutoff)
        acc = arg_ls
        for f in factors:
            acc = acc * f
        return acc

    def alpha_A(self, i):
        """alpha_i(A), certified by two independent computations."""
        if i == 0:
            return LaurentSeries.one(self.ctx)
        self._ensure_alphaA(i)
        return self._alphaA[i - 1]

    def _ensure_alphaA(self, imax):
        ctx, q = self.ctx, self.ctx.q
        if self._alphaA is None:
            low = self._alpha_by_product(3)
            self._alphaA_product = low
            self._alphaA = [low[0]]
        t = PolyA.t(ctx)
        while len(self._alphaA) < imax:
            i = len(self._alphaA) + 1
            g = self.rank1_module(t).coefficient(1)
            prev = self._alphaA[i - 2]
            scal = (LaurentSeries.from_poly(t ** (q ** i))
                    - LaurentSeries.from_poly(t)).inv(self.cutoff)
            alpha_i = g * prev.frobenius_q() * scal
            self._alphaA.append(alpha_i.truncate(self.cutoff))
            if i <= len(self._alphaA_product):
                if not self._alphaA[i - 1].agrees(self._alphaA_product[i - 1]):
                    raise OracleDisagreementError(
                        "alpha_%d(A): product and functional methods differ" % i)

    def rank1_exponential_coeffs(self, imax=6):
        self._ensure_alphaA(imax)
        return ExpCoeffs(self.ctx.q, LaurentSeries.one(self.ctx),
                         self._alphaA[:imax])

    # -- rank-1 modules and the substitution series -------------------------

    def rank1_module(self, a):
        """phi_a for the rank-1 lattice A, from the functional equation."""
        if not a:
            raise HeckeftError("rank-1 module of 0")
        a = a.monic() if not a.is_monic() else a
        if a in self._r1_modules:
            return self._r1_modules[a]
        ctx, q = self.ctx, self.ctx.q
        deg = int(a.deg) if a.deg > 0 else 0
        if deg == 0:
            mod = Rank1Module(a, [])
        else:
            self._ensure_alphaA(deg)
            a_ls = LaurentSeries.from_poly(a)
            gs = _solve_module_coefficients(
                a_elem=a_ls,
                a_pows=lambda i: LaurentSeries.from_poly(a ** (q ** i)),
                alphas=self.alpha_A,
                count=deg,
                frobenius=lambda x, j: x.pow_q(j),
                mul=lambda x, y: x * y,
            )
            mod = Rank1Module(a, gs)
        self._r1_modules[a] = mod
        return mod

    def u_subst(self, a, M=None):
        """u_a = Delta_a^{-1} u^(q^deg a) h_a(u)^{-1}, with h_a exposed."""
        M = self.M if M is None else M
        if not a:
            raise HeckeftError("u_subst needs a nonzero a")
        key = (a, M)
        if key in self._usubst:
            return self._usubst[key]
        ctx, q = self.ctx, self.ctx.q
        unit = a.lc
        mon = a.monic()
        if mon.deg == 0:
            u = USeries.u_power(ctx, 1, M).scale_fq(ctx.inv(unit))
            out = USubst(u, USeries.constant(ctx, LaurentSeries.one(ctx), M),
                         LaurentSeries.constant(ctx, unit))
        else:
            modl = self.rank1_module(mon)
            d = modl.degree
            delta = modl.delta
            delta_inv = delta.inv()
            zero = LaurentSeries.zero(ctx)
            h_coeffs = [zero] * (M + 1)
            for i in range(d + 1):
                e = q ** d - q ** i
                if e <= M:
                    h_coeffs[e] = delta_inv * modl.coefficient(i)
            h = USeries(ctx, h_coeffs, M)
            u_mon = (USeries.u_power(ctx, q ** d, M) * h.inv()).scale(delta_inv)
            if unit != 1:
                u_full = u_mon.scale_fq(ctx.inv(unit))
            else:
                u_full = u_mon
            out = USubst(u_full, h, delta)
        self._usubst[key] = out
        return out

    # -- Eisenstein series ---------------------------------------------------

    def rank1_eisenstein(self, k):
        """The full lattice sum over A of a^{-k}, via the 1/e expansion.

        Zero unless (q-1) | k.  E(k) is read off the inverse of
        B(z) = 1 + alpha_1 z^(q-1) + alpha_2 z^(q^2-1) + ... as
        -[z^k] B^{-1}.
        """
        ctx, q = self.ctx, self.ctx.q
        if k < 1:
            raise HeckeftError("Eisenstein weight must be positive")
        if k % (q - 1) and q > 2:
            return LaurentSeries.zero(ctx)
        imax = 0
        while q ** (imax + 1) - 1 <= k:
            imax += 1
        self._ensure_alphaA(max(imax, 1))
        zero = LaurentSeries.zero(ctx)
        B = [zero] * (k + 1)
        B[0] = LaurentSeries.one(ctx)
        for i in range(1, imax + 1):
            B[q ** i - 1] = self.alpha_A(i)
        inv = [LaurentSeries.one(ctx)] + [zero] * k
        for n in range(1, k + 1):
            acc = zero
            for i in range(1, n + 1):
                if _live(B[i]) and _live(inv[n - i]):
                    acc = acc + B[i] * inv[n - i]
            inv[n] = -acc
        return -inv[k]

    def _direct_rank1_eisenstein(self, k, degree_cap):
        """Test oracle: literal truncated sum over all a with deg <= cap."""
        ctx, q = self.ctx, self.ctx.q
        total = LaurentSeries.zero(ctx, self.cutoff)
        for a in polys_below(ctx, degree_cap + 1):
            if a:
                total = total + LaurentSeries.from_poly(a).inv(self.cutoff).pow(
                    k, self.cutoff)
        return total

    def goss_table_A(self, K):
        if self._goss_A is None or self._goss_A.K < K:
            q = self.ctx.q
            imax = 0
            while q ** (imax + 1) < max(K, 2):
                imax += 1
            self._goss_A = goss_polynomials(self.rank1_exponential_coeffs(
                max(imax, 1)), K)
        return self._goss_A

    def eisenstein(self, k, M=None):
        """The weight-k Eisenstein u-expansion.

        Constant term from the rank-1 lattice sum; each monic a
        contributes -G_{k,A}(u_a) (the unit multiples are summed via the
        congruence of Goss exponents mod q-1).
        """
        M = self.M if M is None else M
        key = (k, M)
        if key in self._eis:
            return self._eis[key]
        ctx, q = self.ctx, self.ctx.q
        out = USeries.constant(ctx, self.rank1_eisenstein(k), M, weight=k)
        if k % (q - 1) == 0:
            table = self.goss_table_A(k)
            G = table[k]
            deg = 0
            while q ** deg <= M:
                for mon in _monic_of_degree(ctx, deg):
                    ua = self.u_subst(mon, M).u
                    jmax = M // (q ** deg)
                    acc = USeries.zero(ctx, M)
                    pows = {1: ua}
                    for j in sorted(e for e in G.coeffs if e <= jmax):
                        if j not in pows:
                            half = max(p for p in pows if p <= j)
                            pw = pows[half]
                            for _ in range(j - half):
                                pw = pw * ua
                            pows[j] = pw
                        acc = acc + pows[j].scale(G.coeffs[j])
                    out = out + (-acc).with_weight(k)
                deg += 1
        self._eis[key] = out
        return out

    # -- rank-2 lattice coefficients and the coefficient forms --------------

    def lattice_alphas(self, imax, M=None):
        """alpha_i of the rank-2 lattice as u-series.

        alpha_1 and alpha_2 come from inverting the Eisenstein generating
        series; higher ones extend by the functional equation of phi_t
        (checked against the rank-1 constant terms).
        """
        M = self.M if M is None else M
        if self._lattice_alphas is None:
            q = self.ctx.q
            eis = [self.eisenstein(j * (q - 1), M) for j in range(1, q + 2)]
            base = lattice_series_inversion(eis, 2)
            self._lattice_alphas = list(base)
        while len(self._lattice_alphas) < imax:
            i = len(self._lattice_alphas) + 1
            self._lattice_alphas.append(self._extend_alpha(i, M))
        for i, al in enumerate(self._lattice_alphas[:imax], start=1):
            if not al.coeff(0).agrees(self.alpha_A(i)):
                raise OracleDisagreementError(
                    "alpha_%d constant term disagrees with the rank-1 value" % i)
        return self._lattice_alphas[:imax]

    def _extend_alpha(self, i, M):
        ctx, q = self.ctx, self.ctx.q
        t = PolyA.t(ctx)
        forms = self.coefficient_forms(t, M)
        alphas = self._lattice_alphas
        scal = (LaurentSeries.from_poly(t ** (q ** i))
                - LaurentSeries.from_poly(t)).inv(self.cutoff)
        acc = forms[0] * alphas[i - 2].pow_q(1)
        if i >= 3:
            acc = acc + forms[1] * alphas[i - 3].pow_q(2)
        else:
            raise HeckeftError("extension starts at alpha_3")
        return acc.scale(scal).truncate(M).with_weight(None)

    def coefficient_forms(self, a, M=None):
        """g_1(a), ..., g_{2 deg a}(a) as u-series of weight q^i - 1."""
        M = self.M if M is None else M
        if a.deg < 1:
            raise HeckeftError("coefficient forms need a outside F_q")
        a = a.monic()
        key = (a, M)
        if key in self._forms:
            return self._forms[key]
        ctx, q = self.ctx, self.ctx.q
        count = 2 * int(a.deg)
        if a == PolyA.t(ctx):
            alphas = self._base_lattice_alphas(M)
        else:
            alphas = self.lattice_alphas(count, M)

        def alpha_of(i):
            if i == 0:
                return USeries.constant(ctx, LaurentSeries.one(ctx), M)
            return alphas[i - 1]

        a_ls = USeries.constant(ctx, LaurentSeries.from_poly(a), M)
        gs = _solve_module_coefficients(
            a_elem=a_ls,
            a_pows=lambda i: USeries.constant(
                ctx, LaurentSeries.from_poly(a ** (q ** i)), M),
            alphas=alpha_of,
            count=count,
            frobenius=lambda x, j: x.pow_q(j).truncate(M),
            mul=lambda x, y: (x * y).truncate(M),
        )
        gs = [g.truncate(M).with_weight(q ** (i + 1) - 1) for i, g in enumerate(gs)]
        self._forms[key] = gs
        return gs

    def _base_lattice_alphas(self, M):
        """alpha_1, alpha_2 only (enough for phi_t), avoiding recursion."""
        if self._lattice_alphas is None:
            self.lattice_alphas(2, M)
        return [self._lattice_alphas[0], self._lattice_alphas[1]]

    def g1(self, M=None):
        return self.coefficient_forms(PolyA.t(self.ctx), M)[0]

    def delta_form(self, M=None):
        return self.coefficient_forms(PolyA.t(self.ctx), M)[1]

    # -- torsion lattices and the Hecke action -------------------------------

    def torsion_lattice(self, p):
        """L = e_{pA}(A): basis e_{pA}(t^i), 0 <= i < deg p.

        Each basis element is a certified truncated product over the
        subspace filtration of pA; the certificate checks that every
        element is killed by phi_p of the rank-1 module of the lattice pA.
        """
        hp = HeckePrime.make(p)
        if hp in self._torsion:
            return self._torsion[hp]
        ctx, q = self.ctx, self.ctx.q
        d = hp.d
        D = 0
        while True:
            mu = self._span_exponential_value(
                [hp.p * PolyA.monomial(ctx, 1, j) for j in range(D + 1)],
                hp.p * PolyA.monomial(ctx, 1, D + 1))
            v = mu.valuation
            if v is not None and (q - 1) * v > self.prec + d + _CERT_MARGIN:
                break
            D += 1
            if D > 12:
                raise PrecisionError("torsion certificate did not converge")
        basis_polys = [hp.p * PolyA.monomial(ctx, 1, j) for j in range(D + 1)]
        lams = [self._span_exponential_value(basis_polys, PolyA.monomial(ctx, 1, i))
                for i in range(d)]
        self._certify_torsion(hp, lams)
        lat = FiniteLattice(ctx, lams, self.budget)
        self._torsion[hp] = lat
        return lat

    def _certify_torsion(self, hp, lams):
        """phi^{pA}_p(lam) must vanish within precision for each basis lam."""
        ctx, q = self.ctx, self.ctx.q
        p_ls = LaurentSeries.from_poly(hp.p)
        alphas_pA = {}

        def alpha_pA(i):
            if i == 0:
                return LaurentSeries.one(ctx)
            if i not in alphas_pA:
                alphas_pA[i] = (self.alpha_A(i)
                                * p_ls.pow(1 - q ** i, self.cutoff))
            return alphas_pA[i]

        gs = _solve_module_coefficients(
            a_elem=p_ls,
            a_pows=lambda i: LaurentSeries.from_poly(hp.p ** (q ** i)),
            alphas=alpha_pA,
            count=hp.d,
            frobenius=lambda x, j: x.pow_q(j),
            mul=lambda x, y: x * y,
        )
        tol = self.cutoff + hp.d + _CERT_MARGIN
        for lam in lams:
            acc = p_ls * lam
            for j, g in enumerate(gs, start=1):
                acc = acc + g * lam.pow_q(j)
            top = acc.valuation
            if top is not None and top > tol:
                raise OracleDisagreementError(
                    "torsion certificate failed: residual valuation %d" % top)

    def goss_table_torsion(self, p, K):
        hp = HeckePrime.make(p)
        cached = self._goss_L.get(hp)
        if cached is None or cached.K < K:
            lat = self.torsion_lattice(p)
            cached = goss_for_finite_lattice(lat, K)
            self._goss_L[hp] = cached
        return cached

    def hecke_action(self, f, p, M_out=None):
        """T f by the double-coset sum, sound to the returned truncation."""
        if f.weight is None:
            raise HeckeftError("the Hecke action needs a weight tag")
        hp = HeckePrime.make(p)
        ctx, q = self.ctx, self.ctx.q
        k = f.weight
        sound = (f.trunc + 1) // (q ** hp.d)
        if M_out is None:
            M_out = sound
        if M_out > sound:
            raise PrecisionError(
                "output truncation %d exceeds the sound bound %d" % (M_out, sound))
        p_ls = LaurentSeries.from_poly(hp.p)
        # first summand: f_n u_p^n
        up = self.u_subst(hp.p, M_out).u
        first = USeries.zero(ctx, M_out)
        pw = None
        for n in range(0, f.trunc + 1):
            if n * q ** hp.d > M_out:
                break
            if n == 0:
                pw = USeries.constant(ctx, LaurentSeries.one(ctx), M_out)
            else:
                pw = pw * up
            if _live(f.coeffs[n]):
                first = first + pw.scale(f.coeffs[n])
        # second summand: p^(n-k) f_n G_{n,L}(u), one Goss term per n
        table = self.goss_table_torsion(p, max(f.trunc, 1))
        second = USeries.zero(ctx, M_out)
        zero = LaurentSeries.zero(ctx)
        for n in range(1, f.trunc + 1):
            fn = f.coeffs[n]
            if not _live(fn):
                continue
            G = table[n]
            cs = [zero] * (M_out + 1)
            hit = False
            for e, c in G.coeffs.items():
                if e <= M_out:
                    cs[e] = c
                    hit = True
            if not hit:
                continue
            scal = fn * p_ls.pow(n - k, self.cutoff)
            second = second + USeries(ctx, cs, M_out).scale(scal)
        return (first + second).with_weight(k).truncate(M_out)

    def nonexample_report(self, M=None):
        """The u^(q-1) coefficient of T_t(g_2^2) and its closed form.

        The closed form is t^((2q-2) - 2(q^2-1)) * f_{2q-2} * (-2 alpha)
        with alpha = -lambda^(1-q) for the torsion generator lambda; it
        vanishes exactly in characteristic 2.
        """
        ctx, q = self.ctx, self.ctx.q
        M = self.M if M is None else M
        t = PolyA.t(ctx)
        delta = self.delta_form(M)
        f = (delta * delta).truncate(M)
        tf = self.hecke_action(f, t)
        got = tf.coeff(q - 1)
        lam = self.torsion_lattice(t).basis[0]
        alpha = -(lam.pow(1 - q, self.cutoff))
        k = 2 * (q * q - 1)
        n = 2 * q - 2
        scal = LaurentSeries.from_poly(t).pow(n - k, self.cutoff)
        rhs = scal * f.coeff(n) * (-(alpha + alpha))
        return got, rhs, tf, f


def _nonzero_combos(ctx, basis):
    for combo in itertools.product(range(ctx.q), repeat=len(basis)):
        if not any(combo):
            continue
        acc = PolyA.zero(ctx)
        for c, b in zip(combo, basis):
            if c:
                acc = acc + b.scale(c)
        yield acc


def _monic_of_degree(ctx, deg):
    return monic_polys(ctx, deg)


def lattice_series_inversion(eis, imax):
    """Exponential coefficients of the rank-2 lattice from its Eisenstein
    series: invert 1/e = (1/z)(1 - sum_j E^{j(q-1)} z^{j(q-1)}).

    ``eis`` lists E^{j(q-1)} for j = 1..J as u-series; J must reach
    (q^imax - 1)/(q - 1).  alpha_i is the z^(q^i - 1) coefficient of
    1/(1 - S) = 1 + S + S^2 + ...
    """
    if not eis:
        raise HeckeftError("need at least one Eisenstein series")
    ctx = eis[0].ctx
    q = ctx.q
    J = len(eis)
    need = (q ** imax - 1) // (q - 1)
    if J < need:
        raise HeckeftError("insufficient Eisenstein input: J=%d < %d" % (J, need))
    zcap = q ** imax - 1
    M = min(e.trunc for e in eis)
    S = {}
    for j, E in enumerate(eis, start=1):
        e = j * (q - 1)
        if e <= zcap:
            S[e] = E.with_weight(None)
    one = USeries.constant(ctx, LaurentSeries.one(ctx), M)
    total = {0: one}
    cur = dict(S)
    while cur:
        for e, c in cur.items():
            total[e] = (total[e] + c) if e in total else c
        nxt = {}
        for e1, c1 in cur.items():
            for e2, c2 in S.items():
                e = e1 + e2
                if e <= zcap:
                    prod = (c1 * c2).truncate(M)
                    nxt[e] = (nxt[e] + prod) if e in nxt else prod
        cur = nxt
    out = []
    for i in range(1, imax + 1):
        e = q ** i - 1
        out.append(total.get(e, USeries.zero(ctx, M)))
    return out


def eigenvalue_of(f, tf):
    """c with tf = c f coefficient-wise within truncation, or None."""
    trunc = min(f.trunc, tf.trunc)
    pivot = None
    for n in range(trunc + 1):
        if f.coeffs[n]:
            pivot = n
            break
    if pivot is None:
        raise HeckeftError("eigenvalue of a zero series")
    c = tf.coeffs[pivot] * f.coeffs[pivot].inv()
    for n in range(trunc + 1):
        if not (c * f.coeffs[n]).agrees(tf.coeffs[n]):
            return None
    return c


def eigen_report(f, tf, p):
    """(c, c * p^k): the raw ratio and its p^k-rescaled normalisation."""
    c = eigenvalue_of(f, tf)
    if c is None:
        return None
    return c, c * LaurentSeries.from_poly(p ** f.weight)


def eisenstein_relation_report(ws, k, M=None):
    """Empirical status of the Eisenstein / coefficient-form relations.

    Checks, for a = t and the given k: the printed folklore relation
    (a - a^(q^k)) E^(q^k-1) = sum_{i=1}^{k-1} E^(q^i-1) g_{k-i}^(q^i),
    the functional-equation identity
    (a^(q^k) - a) alpha_k = sum_{j=1}^{k} g_j alpha_{k-j}^(q^j),
    and the two candidate scalars between g_1 and E^(q-1).
    """
    ctx, q = ws.ctx, ws.ctx.q
    M = ws.M if M is None else M
    t = PolyA.t(ctx)
    forms = ws.coefficient_forms(t, M)
    alphas = ws.lattice_alphas(k, M)

    def alpha_of(i):
        if i == 0:
            return USeries.constant(ctx, LaurentSeries.one(ctx), M)
        return alphas[i - 1]

    tk = LaurentSeries.from_poly(t ** (q ** k))
    t_ls = LaurentSeries.from_poly(t)
    E_top = ws.eisenstein(q ** k - 1, M)
    lhs_printed = E_top.scale(t_ls - tk)
    rhs_printed = USeries.zero(ctx, M)
    for i in range(1, k):
        Ei = ws.eisenstein(q ** i - 1, M)
        g = forms[k - i - 1] if k - i <= len(forms) else None
        if g is None:
            continue
        rhs_printed = rhs_printed + (Ei * g.pow_q(i)).truncate(M).with_weight(None)
    lhs_printed = lhs_printed.with_weight(None)

    lhs_fe = alpha_of(k).scale(tk - t_ls).with_weight(None)
    rhs_fe = USeries.zero(ctx, M)
    for j in range(1, min(k, len(forms)) + 1):
        term = (forms[j - 1] * alpha_of(k - j).pow_q(j)).truncate(M)
        rhs_fe = rhs_fe + term.with_weight(None)

    g1 = forms[0]
    E1 = ws.eisenstein(q - 1, M)
    scal = LaurentSeries.from_poly(t ** q) - t_ls
    forward = E1.scale(scal).with_weight(None).agrees(g1.with_weight(None))
    backward = E1.scale(scal.inv(ws.cutoff)).with_weight(None).agrees(
        g1.with_weight(None))
    return {
        "printed_relation": lhs_printed.agrees(rhs_printed),
        "functional_relation": lhs_fe.agrees(rhs_fe),
        "g1_equals_(t^q-t)_times_E": forward,
        "g1_equals_(t^q-t)_inverse_times_E": backward,
    }
