"""One-shot verification suite behind the ``verify`` CLI subcommand.

Each check is a named invariant of one module, scaled by the budget
preset; the CLI prints one row per check.  The ids are stable anchors
for scripting.
"""

import random
from dataclasses import dataclass

from .budgets import Budget
from .fq import FqContext
from .polyring import PolyA, RationalFunction, is_irreducible
from .laurent import LaurentSeries, laurent_from_product
from .lattice import (IndexType, LatticeMatrix, a_index, elementary_divisors,
                      enumerate_hnf_with_det, enumerate_sublattices,
                      hermite_normal_form, random_gl)
from . import hecke as hk
from . import cosets as cs
from .goss import (ExpCoeffs, FiniteLattice, XPoly, goss_for_finite_lattice,
                   goss_polynomials, lattice_log, power_sum_matches_goss,
                   ring_pow)
from .expansion import ExpansionContext, eigen_report, eigenvalue_of


@dataclass
class CheckResult:
    check_id: str
    description: str
    ok: bool
    detail: str = ""


def _sizes(budget_name):
    # (random samples, partition samples, laurent precision, u-truncation factor)
    return {"small": (30, 40, 24, 1),
            "default": (100, 150, 40, 1),
            "large": (300, 500, 60, 1)}[budget_name]


def run_all(q=2, seed=0, budget_name="small", budget=None, modulus=None):
    from .fq import context_for_q
    ctx = context_for_q(q, modulus)
    rng = random.Random(seed)
    budget = budget or Budget()
    samples, part_samples, prec, _ = _sizes(budget_name)
    results = []

    def check(check_id, description, fn):
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, "error: %s" % exc
        results.append(CheckResult(check_id, description, bool(ok), detail))

    t = PolyA.t(ctx)
    one = PolyA.one(ctx)

    # ---- base algebra ----
    def field_axioms():
        for _ in range(samples):
            a, b, c = (rng.randrange(ctx.q) for _ in range(3))
            if ctx.mul(a, ctx.add(b, c)) != ctx.add(ctx.mul(a, b), ctx.mul(a, c)):
                return False, "distributivity"
            if a and ctx.mul(a, ctx.inv(a)) != 1:
                return False, "inverses"
        for _ in range(samples):
            f = RationalFunction(PolyA.random(ctx, rng, 2),
                                 _random_nonzero_poly(ctx, rng, 2))
            g = RationalFunction(PolyA.random(ctx, rng, 2),
                                 _random_nonzero_poly(ctx, rng, 2))
            h = RationalFunction(PolyA.random(ctx, rng, 2), one)
            if (f + g) * h != f * h + g * h:
                return False, "rational distributivity"
            if f and (f * f.inv()) != RationalFunction.one(ctx):
                return False, "rational inverse"
        return True, ""
    check("base.field-axioms", "field axioms on random triples", field_axioms)

    def frobenius():
        p = ctx.p
        for _ in range(samples):
            x = PolyA.random(ctx, rng, 3)
            y = PolyA.random(ctx, rng, 3)
            if (x + y) ** p != x ** p + y ** p:
                return False, str((x, y))
        return True, ""
    check("base.frobenius-additivity", "(x+y)^p = x^p + y^p", frobenius)

    def laurent_precision():
        for _ in range(samples // 2):
            a = _random_laurent(ctx, rng, -prec)
            b = _random_laurent(ctx, rng, -prec)
            hi_a, hi_b = a.truncate(-prec), b.truncate(-prec)
            for op in ("add", "mul"):
                lo = (a + b) if op == "add" else (a * b)
                hi = (hi_a + hi_b) if op == "add" else (hi_a * hi_b)
                if not lo.agrees(hi):
                    return False, op
        return True, ""
    check("base.laurent-precision", "results agree with higher-precision reruns",
          laurent_precision)

    def product_permutation():
        factors = []
        for _ in range(6):
            f = LaurentSeries.one(ctx) + _random_laurent(
                ctx, rng, -prec, top=-1)
            factors.append(f)
        a = laurent_from_product(ctx, factors, -prec)
        rng.shuffle(factors)
        b = laurent_from_product(ctx, factors, -prec)
        return a == b, ""
    check("base.product-permutation", "truncated products ignore factor order",
          product_permutation)

    # ---- lattices ----
    def hnf_invariance():
        for _ in range(samples // 3):
            m = _random_nonsingular(ctx, rng, 2)
            h = hermite_normal_form(m)
            g = random_gl(ctx, 2, rng)
            if hermite_normal_form(g * m) != h:
                return False, str(m)
            if hermite_normal_form(h) != h:
                return False, "idempotence"
        return True, ""
    check("lattice.hnf-invariance", "Hermite label is a left-coset invariant",
          hnf_invariance)

    def snf_invariance():
        for _ in range(samples // 3):
            m = _random_nonsingular(ctx, rng, 2)
            d = elementary_divisors(m)
            g, h = random_gl(ctx, 2, rng), random_gl(ctx, 2, rng)
            if elementary_divisors(g * m * h) != d:
                return False, str(m)
        return True, ""
    check("lattice.snf-bi-invariance", "divisor chain is a two-sided invariant",
          snf_invariance)

    def enumeration_complete():
        for det in (t * t, t * (t + one), t ** 3):
            all_hnf = set(enumerate_hnf_with_det(ctx, 2, det, budget))
            byidx = []
            for chain in hk.divisor_chains(ctx, det, 2):
                byidx.extend(enumerate_sublattices(ctx, 2, chain, budget))
            if len(byidx) != len(set(byidx)) or set(byidx) != all_hnf:
                return False, str(det)
        return True, ""
    check("lattice.enumeration-complete",
          "sublattice enumeration partitions the Hermite forms",
          enumeration_complete)

    def index_chain():
        for _ in range(samples // 5):
            l = _random_nonsingular(ctx, rng, 2)
            m = _random_nonsingular(ctx, rng, 2) * l
            n = _random_nonsingular(ctx, rng, 2) * m
            lhs = a_index(l, n).det()
            rhs = (a_index(l, m).det() * a_index(m, n).det()).monic()
            if lhs != rhs:
                return False, "chain"
        return True, ""
    check("lattice.index-chain", "A-indices multiply along towers", index_chain)

    # ---- Hecke algebra ----
    def t1_square():
        T1 = hk.t_generator(ctx, 2, t, 1)
        got = hk.multiply(T1, T1, budget)
        want = (hk.HeckeElement.single(IndexType([t * t, one]))
                + hk.HeckeElement.single(IndexType([t, t])).scale(ctx.q + 1))
        return got == want, str(got)
    check("hecke.t1-square", "T(p,1)^2 = T(p^2,1) + (q+1) T(p,p)", t1_square)

    def commutativity():
        pool = [IndexType([t, one]), IndexType([t * t, t]), IndexType([t, t])]
        for _ in range(4):
            x = hk.HeckeElement.single(rng.choice(pool), rng.randrange(1, 3))
            y = hk.HeckeElement.single(rng.choice(pool), rng.randrange(1, 3))
            if hk.multiply(x, y, budget) != hk.multiply(y, x, budget):
                return False, "%s, %s" % (x, y)
        return True, ""
    check("hecke.commutativity", "double cosets commute", commutativity)

    def coprime():
        a = IndexType([t, one])
        b = IndexType([t + one, one])
        got = hk.multiply(hk.HeckeElement.single(a), hk.HeckeElement.single(b),
                          budget)
        want = hk.HeckeElement.single(IndexType([t * (t + one), one]))
        return got == want, str(got)
    check("hecke.coprime-multiplicativity",
          "coprime determinants multiply to a single coset", coprime)

    def psi_hom():
        for _ in range(3):
            e1 = sorted((rng.randrange(2), rng.randrange(2)), reverse=True)
            x = hk.HeckeElement.single(IndexType.prime_power(t, tuple(e1) + (0,)))
            y = hk.HeckeElement.single(IndexType.prime_power(t, (1, 0, 0)))
            lhs = hk.psi_map(hk.multiply(x, y, budget))
            rhs = hk.multiply(hk.psi_map(x), hk.psi_map(y), budget)
            if lhs != rhs:
                return False, "%s * %s" % (x, y)
        return True, ""
    check("hecke.psi-homomorphism", "rank-lowering map respects products", psi_hom)

    def degree_law():
        for r in (2, 3):
            for i in range(1, r + 1):
                got = hk.coset_degree(hk.t_generator(ctx, r, t, i), budget)
                if got != hk.q_binomial(r, i, ctx.q):
                    return False, "r=%d i=%d" % (r, i)
        return True, ""
    check("hecke.degree-law", "degree of T_i counts subspaces", degree_law)

    def qbinom_inversion():
        for base in (2, 3, 4, 8, 9):
            for k in range(1, 6):
                s = sum((-1) ** i * base ** (i * (i - 1) // 2)
                        * hk.q_binomial(k, i, base) for i in range(k + 1))
                if s != 0:
                    return False, "base=%d k=%d" % (base, k)
        return True, ""
    check("hecke.qbinom-inversion", "alternating q-binomial sums vanish",
          qbinom_inversion)

    def recurrence():
        r = 2
        for k in (r, r + 1):
            lhs = hk.script_t_prime_power(ctx, r, t, k)
            rhs = hk.HeckeElement.zero(ctx, r)
            for i in range(1, r + 1):
                if k - i < 0:
                    continue
                term = hk.multiply(hk.t_generator(ctx, r, t, i),
                                   hk.script_t_prime_power(ctx, r, t, k - i),
                                   budget)
                rhs = rhs + term.scale((-1) ** (i + 1) * ctx.q ** (i * (i - 1) // 2))
            if lhs != rhs:
                return False, "k=%d" % k
        return True, ""
    check("hecke.summed-operator-recurrence",
          "script T_(p^k) satisfies the generator recurrence", recurrence)

    def mod_char():
        r, p_char = 2, ctx.p
        for k in (2, 3):
            lhs = hk.script_t_prime_power(ctx, r, t, k)
            rhs = hk.multiply(hk.script_t_prime_power(ctx, r, t, 1),
                              hk.script_t_prime_power(ctx, r, t, k - 1), budget)
            if (lhs - rhs).reduce_mod_char() != hk.HeckeElement.zero(ctx, r):
                return False, "k=%d" % k
        return True, ""
    check("hecke.mod-char-collapse",
          "summed operators become multiplicative mod the characteristic",
          mod_char)

    def express_roundtrip():
        for exps in ((1, 0), (1, 1), (2, 0), (2, 1)):
            x = hk.HeckeElement.single(IndexType.prime_power(t, exps))
            poly = hk.express_in_generators(x, t, budget)
            if poly.evaluate(ctx, t, budget) != x:
                return False, str(exps)
        return True, ""
    check("hecke.express-roundtrip",
          "generator expressions evaluate back exactly", express_roundtrip)

    # ---- coset representatives ----
    def count_law():
        for r in (2, 3):
            for p in (t, _first_irreducible_deg2(ctx)):
                n = len(cs.enumerate_reps(ctx, r, p))
                if n != hk.q_binomial(r, 1, ctx.q ** int(p.deg)):
                    return False, "r=%d p=%s" % (r, p)
        return True, ""
    check("cosets.count-law", "representative counts match subspace counts",
          count_law)

    def partition():
        rep = cs.verify_partition(ctx, 2, t, part_samples, rng)
        if not rep.ok():
            return False, "; ".join(rep.failures[:2])
        reps = cs.enumerate_reps(ctx, 2, t)
        if any(cs.classify(r.matrix, t) != r for r in reps):
            return False, "fixed point"
        labels = {hermite_normal_form(r.matrix) for r in reps}
        return len(labels) == len(reps), "label collision"
    check("cosets.partition", "random double-coset elements classify uniquely",
          partition)

    # ---- Goss polynomials ----
    def goss_properties():
        p_char = ctx.p
        gen = ExpCoeffs.generic(ctx.q, p_char, 4)
        K = min(ctx.q ** 3, 30)
        tab = goss_polynomials(gen, K + 1)
        for k in range(1, K):
            G = tab[k]
            if G.degree != k or not _is_one(G.coeffs[k]):
                return False, "monic k=%d" % k
            if 0 in G.coeffs:
                return False, "G(0) k=%d" % k
            if k >= 2 and 1 in G.coeffs:
                return False, "X^2 divides, k=%d" % k
            if k <= ctx.q and set(G.coeffs) != {k}:
                return False, "small k=%d" % k
            if any((e - k) % (ctx.q - 1) for e in G.coeffs) and ctx.q > 2:
                return False, "congruence k=%d" % k
            if p_char * k <= K:
                if tab[p_char * k] != ring_pow(G, p_char):
                    return False, "frobenius k=%d" % k
            dcheck = tab[k].derivative().shift(2)
            target = XPoly({e: _int_times(c, k) for e, c in tab[k + 1].coeffs.items()})
            if dcheck != target:
                return False, "derivative k=%d" % k
        return True, ""
    check("goss.recurrence-properties",
          "generic tables: monic, divisibility, Frobenius, derivative",
          goss_properties)

    def goss_log():
        gen = ExpCoeffs.generic(ctx.q, ctx.p, 4)
        K = 3
        tab = goss_polynomials(gen, ctx.q ** K)
        withlog = lattice_log(gen, K + 1)
        for m in (1, 2, 3):
            k = ctx.q ** m - 1
            want = XPoly({ctx.q ** m - ctx.q ** i: withlog.beta(i)
                          for i in range(m)})
            if tab[k] != want:
                return False, "m=%d" % m
        return True, ""
    check("goss.log-identity",
          "G at q^m - 1 is the logarithm coefficient sum", goss_log)

    def goss_oracle():
        fails = power_sum_matches_goss(ctx, [one], 8, budget)
        fails += power_sum_matches_goss(ctx, [one, t], 6, budget)
        return not fails, str(fails)
    check("goss.power-sum-oracle",
          "brute-force power sums equal Goss evaluations", goss_oracle)

    def goss_rescale():
        from .goss import rescale_lattice_goss
        lat = FiniteLattice(ctx, [RationalFunction.one(ctx)], budget)
        tab = goss_for_finite_lattice(lat, 6)
        c = RationalFunction.from_poly(t)
        resc = rescale_lattice_goss(lat, c, tab)
        direct = goss_for_finite_lattice(lat.scaled(c), 6)
        return all(resc[k] == direct[k] for k in range(1, 7)), ""
    check("goss.rescale", "lattice rescaling transforms tables covariantly",
          goss_rescale)

    # ---- rank-2 expansions ----
    if ctx.q in (2, 3):
        M = 3 * (ctx.q ** 2 - 1)
        ws = ExpansionContext(ctx, prec=max(prec, 40), M=M, budget=budget)

        def dual_alphas():
            ws.alpha_A(3)  # triggers the product/functional cross-check
            return True, ""
        check("exp.dual-method-alphas",
              "exponential coefficients agree across two computations",
              dual_alphas)

        def u_subst_identity():
            for a in (t, t + one, t * t):
                us = ws.u_subst(a.monic())
                d = int(a.deg)
                lhs = (us.u * us.h).scale(us.delta)
                from .expansion import USeries as US
                if not lhs.agrees(US.u_power(ctx, ctx.q ** d, lhs.trunc)):
                    return False, str(a)
            return True, ""
        check("exp.u-subst-identity",
              "u_a inverts the module polynomial formally", u_subst_identity)

        def congruence_sieve():
            q = ctx.q
            series = [ws.eisenstein(q - 1), ws.eisenstein(q * q - 1),
                      ws.g1(), ws.delta_form()]
            for f in series:
                for n, c in enumerate(f.coeffs):
                    if c and (n % (q - 1) or n % q not in (0, q - 1)):
                        return False, "u^%d" % n
            return True, ""
        check("exp.congruence-sieve",
              "expansion exponents satisfy both congruences", congruence_sieve)

        def eigenforms():
            q = ctx.q
            for p in (t, t + one):
                for f, name in ((ws.g1(), "g1"), (ws.delta_form(), "delta")):
                    tf = ws.hecke_action(f, p)
                    rep = eigen_report(f.truncate(tf.trunc), tf, p)
                    if rep is None:
                        return False, name
                    want = LaurentSeries.from_poly(p ** (q - 1))
                    if not rep[1].agrees(want):
                        return False, "%s eigenvalue" % name
            return True, ""
        check("exp.eigenforms", "g_1 and the discriminant are eigenforms",
              eigenforms)

        def cusp_preservation():
            delta = ws.delta_form()
            d2 = (delta * delta).truncate(ws.M)
            for f, low in ((delta, 1), (d2, 2)):
                tf = ws.hecke_action(f, t)
                o = tf.u_order
                if o is not None and o < low:
                    return False, "order %s" % o
                for n in range(min(low, tf.trunc + 1)):
                    if tf.coeffs[n]:
                        return False, "u^%d" % n
            return True, ""
        check("exp.cusp-preservation",
              "the action preserves cusp and double-cusp orders",
              cusp_preservation)

        def nonexample():
            got, rhs, tf, f = ws.nonexample_report()
            if ctx.p == 2:
                return (not got), "expected exact zero"
            ok = bool(got) and got.agrees(rhs)
            ok = ok and eigenvalue_of(f.truncate(tf.trunc), tf) is None
            return ok, ""
        check("exp.square-discriminant",
              "the discriminant square behaves as computed in closed form",
              nonexample)

    return results


def _is_one(c):
    try:
        return bool(c == c * c) and bool(c)
    except Exception:
        return False


def _int_times(c, n):
    from .goss import int_times
    return int_times(c, n)


def _random_laurent(ctx, rng, cutoff, top=2):
    coeffs = {}
    for e in range(cutoff + 1, top + 1):
        c = rng.randrange(ctx.q)
        if c:
            coeffs[e] = c
    return LaurentSeries(ctx, coeffs, cutoff)


def _random_nonzero_poly(ctx, rng, maxdeg):
    while True:
        p = PolyA.random(ctx, rng, maxdeg)
        if p:
            return p


def _random_nonsingular(ctx, rng, r):
    while True:
        m = LatticeMatrix(ctx, [[PolyA.random(ctx, rng, 2) for _ in range(r)]
                                for _ in range(r)])
        if m.det():
            return m


def _first_irreducible_deg2(ctx):
    from .polyring import monic_irreducibles
    return next(iter(monic_irreducibles(ctx, 2)))
