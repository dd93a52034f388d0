"""Kronecker-packed arithmetic over F_q for the brute-force oracles.

A polynomial over F_p is packed into one Python int, 32 bits per
coefficient, so products are single bigint multiplies; an F_{p^e}
polynomial is a tuple of e component ints (one per power of the field
generator), multiplied through the modulus reduction table.  Limb values
are allowed to drift above p between operations; callers track a dirt
bound and renormalise (vectorised, modulo p) before it can overflow.
"""

import numpy as np

from .errors import HeckeftError
from .polyring import PolyA

LIMB_BYTES = 4
LIMB_BITS = 8 * LIMB_BYTES
LIMB_CAP = 1 << LIMB_BITS


class PackedContext:
    """Packing metadata for one F_q, with the generator reduction table."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.p = ctx.p
        self.e = ctx.e
        # conv blow-up factor: component pairs times reduction digits
        self.blow = 1 if ctx.e == 1 else (ctx.p - 1) * ctx.e * ctx.e
        self.red = []
        if ctx.e == 1:
            self.red.append([1])
        else:
            g = ctx.from_digits([0, 1] + [0] * (ctx.e - 2))
            acc = 1
            for _ in range(2 * ctx.e - 1):
                self.red.append(ctx.digits(acc))
                acc = ctx.mul(acc, g)
        self.zero_cell = (0,) * self.e

    # -- cells: one packed F_q[t] polynomial -------------------------------

    def pack_poly(self, poly):
        if poly.ctx != self.ctx:
            raise HeckeftError("field mismatch in packing")
        coeffs = list(poly.coeffs) or [0]
        comps = []
        for comp in range(self.e):
            buf = bytearray(LIMB_BYTES * len(coeffs))
            for i, a in enumerate(coeffs):
                d = self.ctx.digits(a)[comp]
                if d:
                    buf[LIMB_BYTES * i] = d
            comps.append(int.from_bytes(bytes(buf), "little"))
        return tuple(comps)

    def normalize(self, cell):
        out = []
        for v in cell:
            if not v:
                out.append(0)
                continue
            nbytes = -(-v.bit_length() // 8)
            nbytes += (-nbytes) % LIMB_BYTES
            raw = v.to_bytes(nbytes, "little")
            limbs = np.frombuffer(raw, dtype="<u4") % self.p
            out.append(int.from_bytes(limbs.astype("<u4").tobytes(), "little"))
        return tuple(out)

    def mul(self, a, b):
        if self.e == 1:
            return (a[0] * b[0],)
        acc = [0] * self.e
        for i in range(self.e):
            if not a[i]:
                continue
            for j in range(self.e):
                if not b[j]:
                    continue
                prod = a[i] * b[j]
                for comp, digit in enumerate(self.red[i + j]):
                    if digit:
                        acc[comp] += digit * prod
        return tuple(acc)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def scale_small(self, cell, n):
        return tuple(n * v for v in cell)

    def neg(self, cell):
        return cell if self.p == 2 else self.scale_small(cell, self.p - 1)

    def is_zero(self, cell):
        return all(v == 0 for v in self.normalize(cell))

    def eq(self, a, b):
        return self.normalize(a) == self.normalize(b)

    def limbs(self, cell):
        """Upper bound on the packed length, in limbs."""
        return max((v.bit_length() + LIMB_BITS - 1) // LIMB_BITS for v in cell) or 1

    def to_poly(self, cell):
        cell = self.normalize(cell)
        n = self.limbs(cell)
        coeffs = []
        for i in range(n):
            digits = [(v >> (LIMB_BITS * i)) & (LIMB_CAP - 1) for v in cell]
            coeffs.append(self.ctx.from_digits(digits))
        return PolyA(self.ctx, coeffs)


class ZPoly:
    """A polynomial in z with packed F_q[t] cells as coefficients.

    ``dirt`` bounds every limb value across all cells; operations check the
    bound against the limb capacity and renormalise first when needed.
    """

    __slots__ = ("pc", "cells", "dirt")

    def __init__(self, pc, cells, dirt):
        self.pc = pc
        self.cells = cells
        self.dirt = dirt

    @classmethod
    def from_polys(cls, pc, polys):
        return cls(pc, [pc.pack_poly(p) for p in polys], pc.p - 1)

    @classmethod
    def constant(cls, pc, poly):
        return cls.from_polys(pc, [poly])

    def normalized(self):
        if self.dirt < self.pc.p:
            return self
        return ZPoly(self.pc, [self.pc.normalize(c) for c in self.cells],
                     self.pc.p - 1)

    def max_limbs(self):
        return max(self.pc.limbs(c) for c in self.cells)

    def __len__(self):
        return len(self.cells)


def z_mul(a, b):
    """Full z-convolution; inputs are renormalised so sums cannot overflow."""
    pc = a.pc
    a = a.normalized()
    b = b.normalized()
    bound = ((pc.p - 1) ** 2 * pc.blow
             * min(a.max_limbs(), b.max_limbs())
             * min(len(a), len(b)))
    if bound >= LIMB_CAP:
        raise HeckeftError("z_mul exceeds the limb capacity: %d" % bound)
    out = [pc.zero_cell] * (len(a) + len(b) - 1)
    mul, add = pc.mul, pc.add
    bcells = b.cells
    for i, ac in enumerate(a.cells):
        if ac == pc.zero_cell:
            continue
        for j, bc in enumerate(bcells):
            if bc == pc.zero_cell:
                continue
            out[i + j] = add(out[i + j], mul(ac, bc))
    return ZPoly(pc, out, bound)


def z_scale(zp, cell_norm, cell_limbs):
    """Multiply every cell by one normalised packed polynomial."""
    pc = zp.pc
    zp = zp.normalized()
    bound = (pc.p - 1) ** 2 * pc.blow * min(cell_limbs, zp.max_limbs())
    if bound >= LIMB_CAP:
        raise HeckeftError("z_scale exceeds the limb capacity")
    return ZPoly(pc, [pc.mul(cell_norm, c) for c in zp.cells], bound)


def z_add(a, b):
    pc = a.pc
    if a.dirt + b.dirt >= LIMB_CAP:
        a, b = a.normalized(), b.normalized()
    cells = list(a.cells) if len(a) >= len(b) else list(b.cells)
    other = b.cells if len(a) >= len(b) else a.cells
    for i, c in enumerate(other):
        cells[i] = pc.add(cells[i], c)
    return ZPoly(pc, cells, a.dirt + b.dirt)


def z_div_linear(zp, lam_norm, lam_limbs):
    """Divide by (z + lam); the remainder must vanish.

    lam must be normalised.  The rolling value is renormalised whenever the
    per-step dirt growth approaches the limb capacity.
    """
    pc = zp.pc
    zp = zp.normalized()
    if lam_norm is None:  # division by z
        if not pc.is_zero(zp.cells[0]):
            raise HeckeftError("z does not divide")
        return ZPoly(pc, zp.cells[1:], zp.dirt)
    lam_neg = pc.normalize(pc.neg(lam_norm))
    growth = (pc.p - 1) ** 2 * pc.blow * lam_limbs
    n = len(zp) - 1
    quot = [None] * n
    cur = zp.cells[n]
    dirt = pc.p - 1
    quot[n - 1] = cur
    mul, add, norm = pc.mul, pc.add, pc.normalize
    for i in range(n - 2, -1, -1):
        nxt = dirt * growth + (pc.p - 1)
        if nxt >= LIMB_CAP:
            cur = norm(cur)
            dirt = pc.p - 1
            nxt = dirt * growth + (pc.p - 1)
        cur = add(zp.cells[i + 1], mul(lam_neg, cur))
        dirt = nxt
        quot[i] = cur
    rem = add(zp.cells[0], mul(lam_neg, cur))
    if not pc.is_zero(rem):
        raise HeckeftError("linear division left a remainder")
    return ZPoly(pc, quot, dirt * growth + (pc.p - 1))


def z_eq(a, b):
    pc = a.pc
    a = a.normalized()
    b = b.normalized()
    la, lb = len(a), len(b)
    for i in range(max(la, lb)):
        x = a.cells[i] if i < la else pc.zero_cell
        y = b.cells[i] if i < lb else pc.zero_cell
        if x != y:
            return False
    return True
