"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Scalars are represented in the power basis 1, z, ..., z^(phi(L)-1) of the
primitive L-th root of unity z, with integer coefficient vectors over a
common positive denominator.  All operations are exact; the conductor L is
fixed per computation and must be divisible by 4 so that i = z^(L/4) is
available.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def euler_phi(n: int) -> int:
    count = 0
    for k in range(1, n + 1):
        if gcd(k, n) == 1:
            count += 1
    return count


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials; den must be monic up to sign
    # and must divide num exactly wherever we use this.
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quot = [0] * max(len(num) - dd, 0)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % lead == 0
        q = c // lead
        quot[i - dd] = q
        for j, d in enumerate(den):
            num[i - dd + j] -= q * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0] = -1
    poly[n] = 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert rem == [0]
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(L: int) -> tuple[tuple[int, ...], ...]:
    """z^k mod Phi_L for k = 0..2L-1, as integer coefficient rows of length phi(L)."""
    phi = len(cyclotomic_polynomial(L)) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * phi
    cur[0] = 1
    phi_poly = cyclotomic_polynomial(L)
    for _ in range(2 * L):
        rows.append(tuple(cur))
        # multiply by z and reduce
        carry = cur[-1]
        nxt = [0] + cur[:-1]
        if carry:
            for j in range(phi):
                nxt[j] -= carry * phi_poly[j]
        cur = nxt
    return tuple(rows)


def conductor_degree(L: int) -> int:
    return len(cyclotomic_polynomial(L)) - 1


class Cyc:
    """An element of Q(zeta_L), stored as integer coefficients over a common denominator."""

    __slots__ = ("L", "num", "den")

    def __init__(self, L: int, num: tuple[int, ...], den: int, _normalize: bool = True):
        if L % 4 != 0:
            raise ValueError("conductor must be divisible by 4")
        if _normalize and den != 1:
            if den < 0:
                den = -den
                num = tuple(-c for c in num)
            g = den
            for c in num:
                if c:
                    g = gcd(g, c)
                    if g == 1:
                        break
            if g > 1:
                den //= g
                num = tuple(c // g for c in num)
            if den != 1 and not any(num):
                den = 1
        self.L = L
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(L: int) -> "Cyc":
        return Cyc(L, (0,) * conductor_degree(L), 1, _normalize=False)

    @staticmethod
    def one(L: int) -> "Cyc":
        return Cyc.rational(L, 1)

    @staticmethod
    def rational(L: int, q) -> "Cyc":
        q = Fraction(q)
        phi = conductor_degree(L)
        num = [0] * phi
        num[0] = q.numerator
        return Cyc(L, tuple(num), q.denominator)

    @staticmethod
    def zeta(L: int, k: int = 1) -> "Cyc":
        """The root of unity zeta_L ** k."""
        row = _power_table(L)[k % L]
        return Cyc(L, row, 1)

    @staticmethod
    def i(L: int) -> "Cyc":
        return Cyc.zeta(L, L // 4)

    @staticmethod
    def sqrt2(L: int) -> "Cyc":
        if L % 8 != 0:
            raise ValueError("sqrt(2) needs conductor divisible by 8")
        e = L // 8
        return Cyc.zeta(L, e) + Cyc.zeta(L, -e)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "Cyc":
        if isinstance(other, Cyc):
            if other.L != self.L:
                raise ValueError(f"conductor mismatch: {self.L} vs {other.L}")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc.rational(self.L, other)
        return NotImplemented

    def __add__(self, other) -> "Cyc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self, o
        if a.den == b.den:
            return Cyc(a.L, tuple(x + y for x, y in zip(a.num, b.num)), a.den)
        return Cyc(
            a.L,
            tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num)),
            a.den * b.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Cyc":
        return Cyc(self.L, tuple(-c for c in self.num), self.den, _normalize=False)

    def __sub__(self, other) -> "Cyc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other) -> "Cyc":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Cyc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.num, o.num
        phi = len(a)
        if phi == 2:
            # conductor 4: Gaussian rationals, Phi_4 = x^2 + 1
            a0, a1 = a
            b0, b1 = b
            return Cyc(self.L, (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0), self.den * o.den)
        conv = [0] * (2 * phi - 1)
        for ia, ca in enumerate(a):
            if ca == 0:
                continue
            for ib, cb in enumerate(b):
                if cb:
                    conv[ia + ib] += ca * cb
        table = _power_table(self.L)
        out = list(conv[:phi])
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c == 0:
                continue
            row = table[k]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
        return Cyc(self.L, tuple(out), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Cyc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "Cyc":
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic scalar")
        # extended gcd of self.num (as Q-polynomial) and Phi_L
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.L)]
        a = [Fraction(c, self.den) for c in self.num]
        r0, r1 = phi_poly, a
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def deg(p):
            for k in range(len(p) - 1, -1, -1):
                if p[k]:
                    return k
            return -1

        def shrink(p):
            d = deg(p)
            return p[: d + 1] if d >= 0 else [Fraction(0)]

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            q = [Fraction(0)] * (d0 - d1 + 1)
            rem = list(r0)
            for i in range(d0, d1 - 1, -1):
                c = rem[i] / r1[d1]
                q[i - d1] = c
                if c:
                    for j in range(d1 + 1):
                        rem[i - d1 + j] -= c * r1[j]
            new_s = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - 1 - len(s0))
            for iq, cq in enumerate(q):
                if cq:
                    for js, cs in enumerate(s1):
                        new_s[iq + js] -= cq * cs
            r0, r1 = shrink(r1), shrink(rem)
            s0, s1 = s1, shrink(new_s)
        if deg(r1) != 0 or r1[0] == 0:
            raise ZeroDivisionError("scalar is a zero divisor (not a unit)")
        c = r1[0]
        inv = [s / c for s in s1]
        phi = conductor_degree(self.L)
        inv += [Fraction(0)] * (phi - len(inv))
        den = 1
        for f in inv:
            den = den * f.denominator // gcd(den, f.denominator)
        return Cyc(self.L, tuple(int(f * den) for f in inv[:phi]), den)

    def __pow__(self, k: int) -> "Cyc":
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyc.one(self.L)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and maps -----------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.L, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.L == other.L and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.L, self.num, self.den))

    def galois(self, a: int) -> "Cyc":
        """Apply the Galois automorphism zeta -> zeta**a (a coprime to L)."""
        if gcd(a, self.L) != 1:
            raise ValueError("galois exponent must be coprime to the conductor")
        table = _power_table(self.L)
        phi = conductor_degree(self.L)
        out = [0] * phi
        for k, c in enumerate(self.num):
            if c == 0:
                continue
            row = table[(a * k) % self.L]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
        return Cyc(self.L, tuple(out), self.den)

    def conj(self) -> "Cyc":
        """Complex conjugation zeta -> zeta**-1."""
        return self.galois(self.L - 1)

    def is_real(self) -> bool:
        return self == self.conj()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational scalar: {self}")
        return Fraction(self.num[0], self.den)

    def lift(self, L2: int) -> "Cyc":
        """Embed into Q(zeta_L2) for a conductor multiple L2."""
        if L2 == self.L:
            return self
        if L2 % self.L != 0:
            raise ValueError("target conductor must be a multiple")
        step = L2 // self.L
        table = _power_table(L2)
        phi2 = conductor_degree(L2)
        out = [0] * phi2
        for k, c in enumerate(self.num):
            if c == 0:
                continue
            row = table[(k * step) % L2]
            for j in range(phi2):
                if row[j]:
                    out[j] += c * row[j]
        return Cyc(L2, tuple(out), self.den)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.num):
            if c == 0:
                continue
            q = Fraction(c, self.den)
            terms.append(f"{q}*z^{k}" if k else f"{q}")
        return " + ".join(terms) if terms else "0"


def sqrt_rational(L: int, q) -> Cyc:
    """An exact square root of a positive rational, as a cyclotomic scalar.

    Requires the conductor to contain Q(sqrt(r)) for the squarefree part r of q,
    i.e. 4r | L (Gauss sums realise sqrt(p) inside Q(zeta_4p)).
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("need a positive rational")
    n = q.numerator * q.denominator
    # peel off the square part of n
    square = 1
    r = 1
    k = 2
    m = n
    while k * k <= m:
        e = 0
        while m % k == 0:
            m //= k
            e += 1
        square *= k ** (e // 2)
        if e % 2:
            r *= k
        k += 1
    if m > 1:
        r *= m
    out = Cyc.rational(L, Fraction(square, q.denominator))
    if r % 2 == 0:
        out = out * Cyc.sqrt2(L)
        r //= 2
    # r is now odd squarefree; build sqrt(p) per prime factor via Gauss sums
    p = 3
    while r > 1:
        if r % p == 0:
            r //= p
            if L % p != 0:
                raise ValueError(f"conductor {L} lacks sqrt({p}); need 4*{p} | L")
            g = Cyc.zero(L)
            for k2 in range(1, p):
                legendre = pow(k2, (p - 1) // 2, p)
                sign = 1 if legendre == 1 else -1
                g = g + sign * Cyc.zeta(L, (L // p) * k2)
            if p % 4 == 3:
                g = g * Cyc.i(L).inverse()  # g = i*sqrt(p) when p = 3 mod 4
            out = out * g
        p += 2
    if not (out * out == Cyc.rational(L, q)):
        out = -out
    assert out * out == Cyc.rational(L, q)
    return out


@lru_cache(maxsize=None)
def _sympy_field(L: int):
    import sympy

    z = sympy.exp(2 * sympy.I * sympy.pi / L)
    field = sympy.QQ.algebraic_field(z)
    # sanity: the primitive element must be zeta_L itself in the power basis
    mod = [int(c) for c in reversed(cyclotomic_polynomial(L))]
    if [int(c) for c in field.mod.to_list()] != mod:
        raise RuntimeError("unexpected primitive element for the cyclotomic field")
    return field


def cyc_sqrt(x: Cyc):
    """An exact square root of x inside its own field, or None if there is none."""
    if x.is_zero():
        return Cyc.zero(x.L)
    if x.is_rational():
        f = x.as_fraction()
        if f > 0:
            ns, ds = _isqrt_exact(f.numerator), _isqrt_exact(f.denominator)
            if ns is not None and ds is not None:
                return Cyc.rational(x.L, Fraction(ns, ds))
    import sympy

    field = _sympy_field(x.L)
    phi = conductor_degree(x.L)
    # field elements are polynomials in the generator, coefficients high to low
    xel = field([sympy.Rational(x.num[k], x.den) for k in reversed(range(phi))])
    y = sympy.Dummy("y")
    poly = sympy.Poly([field.one, field.zero, -xel], y, domain=field)
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            const = factor.rep.to_list()[-1]  # monic linear factor y + const
            rep = list(reversed(const.to_list()))  # low to high
            rep += [0] * (phi - len(rep))
            den = 1
            for c in rep:
                q = int(sympy.Rational(c).q)
                den = den * q // gcd(den, q)
            out = -Cyc(x.L, tuple(int(sympy.Rational(c) * den) for c in rep[:phi]), den)
            if out * out == x:
                return out
    return None


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


def working_conductor(*orders: int, sqrt2: bool = False) -> int:
    """Smallest conductor holding i, the needed root-of-unity orders, and optionally sqrt 2."""
    L = 8 if sqrt2 else 4
    for n in orders:
        g = gcd(L, 2 * n)
        L = L * (2 * n) // g
    return L


# -- matrices over a cyclotomic field ---------------------------------------

Matrix = tuple  # tuple of row tuples of Cyc


def mat_zero(L: int, n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    z = Cyc.zero(L)
    return tuple(tuple(z for _ in range(m)) for _ in range(n))


def mat_identity(L: int, n: int) -> Matrix:
    one = Cyc.one(L)
    z = Cyc.zero(L)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(c: Cyc, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise ValueError("matrix dimension mismatch")
    L = a[0][0].L if n and len(a[0]) else 4
    zero = Cyc.zero(L)
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(j, c) for j, c in enumerate(row) if c]
        out_row = []
        for col in bt:
            acc = zero
            for j, c in nz:
                e = col[j]
                if e:
                    acc = acc + c * e
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_conj(a: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in row) for row in a)


def mat_transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_conj_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in col) for col in zip(*a))


def mat_trace(a: Matrix) -> Cyc:
    t = Cyc.zero(a[0][0].L)
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mat_lift(a: Matrix, L2: int) -> Matrix:
    return tuple(tuple(x.lift(L2) for x in row) for row in a)


def mat_from_rows(L: int, rows) -> Matrix:
    """Build a matrix from nested rationals / Cyc entries."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, Cyc):
                r.append(x.lift(L) if x.L != L else x)
            else:
                r.append(Cyc.rational(L, x))
        out.append(tuple(r))
    return tuple(out)


def mat_pow(a: Matrix, k: int) -> Matrix:
    out = mat_identity(a[0][0].L, len(a))
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the cyclotomic field."""
    n = len(a)
    L = a[0][0].L
    work = [list(row) + list(idrow) for row, idrow in zip(a, mat_identity(L, n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * x for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)
