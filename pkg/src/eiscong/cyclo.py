"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q(zeta_N) = Q[z]/Phi_N(z) as an integer numerator vector over a common
positive denominator.  Mixed-level operations happen at the lcm level.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import re

import mpmath

from .errors import (
    DenominatorNotCoprime,
    DivisionByZero,
    LevelMismatch,
    RamifiedPrime,
    ZeroInput,
    MalformedValue,
)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both low->high, den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic level must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j is z^j reduced modulo Phi_n, for 0 <= j < n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg > 0 else []
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by z and reduce
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(rows)


def _fold(level: int, coeffs: dict[int, int] | list[int]) -> list[int]:
    """Reduce sum c_j z^j (any exponents) to the power basis of level."""
    table = _power_table(level)
    deg = euler_phi(level)
    out = [0] * deg
    items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
    for j, c in items:
        if not c:
            continue
        row = table[j % level]
        for i in range(deg):
            if row[i]:
                out[i] += c * row[i]
    return out


class CycloNumber:
    """An element of Q(zeta_level) with canonical reduced numerator/denominator."""

    __slots__ = ("level", "num", "den", "_hash")

    def __init__(self, level: int, num, den: int = 1):
        if level < 1:
            raise ValueError("level must be positive")
        num = list(num)
        deg = euler_phi(level)
        if len(num) != deg:
            num = _fold(level, num)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            den = 1
        self.level = level
        self.num = tuple(num)
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, q, level: int = 1) -> "CycloNumber":
        q = Fraction(q)
        return cls(level, [q.numerator] + [0] * (euler_phi(level) - 1), q.denominator)

    @classmethod
    def zero(cls, level: int = 1) -> "CycloNumber":
        return cls(level, [0] * euler_phi(level))

    @classmethod
    def one(cls, level: int = 1) -> "CycloNumber":
        return cls.rational(1, level)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycloNumber":
        """zeta_n ** k with zeta_n = exp(2 pi i / n)."""
        return cls(n, _power_table(n)[k % n])

    @classmethod
    def from_exponent_counts(cls, level: int, counts, den: int = 1) -> "CycloNumber":
        """sum_j counts[j] * zeta_level**j / den; counts is a dict or list."""
        return cls(level, _fold(level, counts), den)

    # -- coercion -----------------------------------------------------
    def to_level(self, level: int) -> "CycloNumber":
        if level == self.level:
            return self
        if level % self.level:
            raise LevelMismatch(f"cannot coerce level {self.level} into {level}")
        step = level // self.level
        counts = {}
        for j, c in enumerate(self.num):
            if c:
                counts[j * step] = counts.get(j * step, 0) + c
        return CycloNumber(level, _fold(level, counts), self.den)

    def _common(self, other):
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(Fraction(other), self.level)
        if other.level == self.level:
            return self, other
        lv = _lcm(self.level, other.level)
        return self.to_level(lv), other.to_level(lv)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycloNumber(a.level, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.level, [-c for c in self.num], self.den)

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloNumber(self.level, [c * q.numerator for c in self.num], self.den * q.denominator)
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        n = a.level
        acc = [0] * n
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        acc[(i + j) % n] += x * y
        return CycloNumber(n, _fold(n, acc), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero cyclotomic number")
        if self.is_rational():
            return CycloNumber.rational(1 / self.to_fraction(), self.level)
        inv = _poly_inverse_mod([Fraction(c) for c in self.num], list(cyclotomic_poly(self.level)))
        den = 1
        for c in inv:
            den = _lcm(den, c.denominator)
        num = [int(c * den) for c in inv]
        return CycloNumber(self.level, num + [0] * (euler_phi(self.level) - len(num)), den) * self.den

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNumber.rational(Fraction(other), self.level) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNumber.one(self.level)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- predicates and comparisons -----------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0] if self.num else 0, self.den)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        if self._hash is None:
            m = self.min_level()
            self._hash = hash((m.level, m.num, m.den))
        return self._hash

    # -- Galois action --------------------------------------------------
    def galois(self, a: int) -> "CycloNumber":
        """Apply zeta -> zeta**a (a coprime to the level)."""
        if gcd(a, self.level) != 1:
            raise ValueError("Galois exponent must be a unit")
        counts = {}
        for j, c in enumerate(self.num):
            if c:
                k = (a * j) % self.level
                counts[k] = counts.get(k, 0) + c
        return CycloNumber(self.level, _fold(self.level, counts), self.den)

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1)

    def min_level(self) -> "CycloNumber":
        """The same number written at the smallest level that contains it."""
        n = self.level
        for m in _divisors(n):
            if m == n:
                return self
            if m % 4 == 2:
                continue
            fixing = [a for a in range(1, n) if gcd(a, n) == 1 and a % m == 1 % m]
            if all(self.galois(a) == self for a in fixing):
                return _solve_descent(self, m)
        return self

    # -- numerics and text form -----------------------------------------
    def embed(self, prec: int = 53):
        """Complex value under zeta_N -> exp(2 pi i / N).

        Returns a Python complex for prec <= 53, an mpmath mpc otherwise.
        """
        with mpmath.workprec(max(prec, 53) + 20):
            z = mpmath.mpc(0)
            n = self.level
            for j, c in enumerate(self.num):
                if c:
                    z += c * mpmath.expjpi(mpmath.mpf(2 * j) / n)
            z /= self.den
            if prec <= 53:
                return complex(z)
            return +z

    def __str__(self):
        return f"{self.level}:[{','.join(str(c) for c in self.num)}]/{self.den}"

    def __repr__(self):
        return f"CycloNumber({self})"

    def pretty(self) -> str:
        """Human form: a plain fraction when rational, else the serialization."""
        if self.is_rational():
            q = self.to_fraction()
            return str(q)
        m = self.min_level()
        if m.is_rational():
            return str(m.to_fraction())
        return str(m)


_SERIAL = re.compile(r"^\s*(\d+)\s*:\s*\[([^\]]*)\]\s*(?:/\s*(\d+))?\s*$")


def parse_cyclo(text: str) -> CycloNumber:
    """Inverse of ``str(CycloNumber)``; bare rationals like ``28/5`` are also accepted."""
    m = _SERIAL.match(text)
    if m:
        level = int(m.group(1))
        body = m.group(2).strip()
        coeffs = [int(c) for c in body.split(",")] if body else []
        den = int(m.group(3) or 1)
        if level < 1 or len(coeffs) != euler_phi(level) or den < 1:
            raise MalformedValue(f"bad cyclotomic serialization {text!r}")
        return CycloNumber(level, coeffs, den)
    try:
        return CycloNumber.rational(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedValue(f"bad cyclotomic serialization {text!r}") from exc


def _solve_descent(x: CycloNumber, m: int) -> CycloNumber:
    # find y in Q(zeta_m) with y == x, by exact Gaussian elimination
    n = x.level
    step = n // m
    cols = [_power_table(n)[(j * step) % n] for j in range(euler_phi(m))]
    rows = len(x.num)
    ncol = len(cols)
    mat = [[Fraction(cols[j][i]) for j in range(ncol)] + [Fraction(x.num[i], x.den)] for i in range(rows)]
    piv_row = 0
    pivots = []
    for c in range(ncol):
        r = next((r for r in range(piv_row, rows) if mat[r][c] != 0), None)
        if r is None:
            continue
        mat[piv_row], mat[r] = mat[r], mat[piv_row]
        inv = 1 / mat[piv_row][c]
        mat[piv_row] = [v * inv for v in mat[piv_row]]
        for r2 in range(rows):
            if r2 != piv_row and mat[r2][c] != 0:
                f = mat[r2][c]
                mat[r2] = [v - f * w for v, w in zip(mat[r2], mat[piv_row])]
        pivots.append(c)
        piv_row += 1
    sol = [Fraction(0)] * ncol
    for r, c in enumerate(pivots):
        sol[c] = mat[r][ncol]
    den = 1
    for s in sol:
        den = _lcm(den, s.denominator)
    return CycloNumber(m, [int(s * den) for s in sol], den)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_poly_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_inverse_mod(a, modulus):
    """Inverse of a modulo an irreducible modulus, over Q (extended Euclid)."""
    r0, r1 = [Fraction(c) for c in modulus], _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1 or (len(r1) == 1 and False):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, _poly_trim(r)
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("not invertible")
    c = r1[0]
    return [x / c for x in s1]


# ---------------------------------------------------------------------------
# reduction modulo a prime above p


def _fp_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _fp_mod(a, f, p):
    """a mod (f, p) with f monic; lists low->high."""
    a = [c % p for c in a]
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i]
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return a[:df] + [0] * max(0, df - len(a))


def _fp_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


class ResidueElement:
    """An element of F_p[z]/(factor), printed as a polynomial in z."""

    __slots__ = ("rmap", "coeffs")

    def __init__(self, rmap: "ResidueMap", coeffs):
        self.rmap = rmap
        self.coeffs = tuple(coeffs)

    def _wrap(self, coeffs):
        return ResidueElement(self.rmap, _fp_mod(coeffs, self.rmap.factor, self.rmap.p))

    def __add__(self, other):
        p = self.rmap.p
        return ResidueElement(self.rmap, [(a + b) % p for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        p = self.rmap.p
        return ResidueElement(self.rmap, [(a - b) % p for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        p = self.rmap.p
        return ResidueElement(self.rmap, [(-a) % p for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.rmap.p
            return ResidueElement(self.rmap, [(a * other) % p for a in self.coeffs])
        return self._wrap(_fp_mul(list(self.coeffs), list(other.coeffs), self.rmap.p))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.rmap.constant(other)
        return isinstance(other, ResidueElement) and self.coeffs == other.coeffs and self.rmap.p == other.rmap.p

    def __hash__(self):
        return hash((self.rmap.p, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    __repr__ = __str__


class ResidueMap:
    """Reduction Z[zeta_N] -> F_p[z]/(f) for a chosen irreducible factor f of Phi_N mod p.

    The factor is the lexicographically least coefficient vector (constant
    term first, entries in [0, p)) among the irreducible factors.
    """

    def __init__(self, p: int, level: int):
        if level % p == 0:
            raise RamifiedPrime(f"{p} ramifies in Q(zeta_{level})")
        self.p = p
        self.level = level
        factors = _factor_mod_p(cyclotomic_poly(level), p)
        self.all_factors = sorted(factors)
        self.factor = list(self.all_factors[0])
        self.degree = len(self.factor) - 1
        self.size = p ** self.degree
        # integer lift of Phi_N / factor: lies in every other prime above p
        self._cofactor = _cofactor(cyclotomic_poly(level), self.factor, p)

    def with_factor(self, index: int) -> "ResidueMap":
        other = object.__new__(ResidueMap)
        other.p, other.level = self.p, self.level
        other.all_factors = self.all_factors
        other.factor = list(self.all_factors[index])
        other.degree = self.degree
        other.size = self.size
        other._cofactor = _cofactor(cyclotomic_poly(self.level), other.factor, self.p)
        return other

    def describe(self) -> dict:
        return {"p": self.p, "level": self.level, "factor": list(self.factor), "residue_field_size": self.size}

    def constant(self, c: int) -> ResidueElement:
        return ResidueElement(self, [c % self.p] + [0] * (self.degree - 1))

    def __call__(self, x: CycloNumber) -> ResidueElement:
        return reduce_mod_p(x, self)

    def __repr__(self):
        return f"ResidueMap(p={self.p}, level={self.level}, factor={self.factor})"


def _cofactor(phi, factor, p):
    q = list(phi)
    q = [c % p for c in q]
    out = [0] * (len(q) - len(factor) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = q[i + len(factor) - 1] % p
        out[i] = c
        if c:
            for j, fj in enumerate(factor):
                q[i + j] = (q[i + j] - c * fj) % p
    assert not any(c % p for c in q)
    return out


@lru_cache(maxsize=None)
def _factor_mod_p(phi: tuple[int, ...], p: int) -> tuple[tuple[int, ...], ...]:
    from sympy import Poly, symbols

    x = symbols("x")
    poly = Poly(list(reversed(phi)), x, modulus=p)
    out = []
    for fac, mult in poly.factor_list()[1]:
        assert mult == 1
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        lead = coeffs[-1]
        if lead != 1:
            inv = pow(lead, -1, p)
            coeffs = [(c * inv) % p for c in coeffs]
        out.append(tuple(coeffs))
    return tuple(out)


def _coerce_for(x: CycloNumber, rm: ResidueMap) -> CycloNumber:
    if rm.level % x.level == 0:
        return x.to_level(rm.level)
    m = x.min_level()
    if rm.level % m.level == 0:
        return m.to_level(rm.level)
    raise LevelMismatch(f"value of level {x.level} does not live in Q(zeta_{rm.level})")


def reduce_mod_p(x: CycloNumber, rm: ResidueMap) -> ResidueElement:
    x = _coerce_for(x, rm)
    if x.den % rm.p == 0:
        raise DenominatorNotCoprime(f"denominator {x.den} divisible by {rm.p}")
    inv = pow(x.den, -1, rm.p)
    coeffs = _fp_mod([c * inv for c in x.num], rm.factor, rm.p)
    return ResidueElement(rm, coeffs)


def valuation_at_p(x: CycloNumber, p: int, rm: ResidueMap | None = None) -> int:
    """Valuation at the prime of ``rm`` above p, normalized so that v(p) = 1."""
    if x.is_zero():
        raise ZeroInput("valuation of zero")
    if rm is None:
        if x.level % p == 0:
            x = x.min_level()
        rm = ResidueMap(p, x.level)
    x = _coerce_for(x, rm)
    v = 0
    den = x.den
    while den % p == 0:
        den //= p
        v -= 1
    a = list(x.num)
    n = rm.level
    while True:
        if any(c % p for c in _fp_mod(a, rm.factor, p)):
            return v
        # a lies in the chosen prime; a * cofactor lies in p O, so divide by p
        acc = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(rm._cofactor):
                    if bj:
                        acc[(i + j) % n] += ai * bj
        prod = _fold(n, acc)
        assert all(c % p == 0 for c in prod)
        a = [c // p for c in prod]
        v += 1


def lcm_levels(*levels: int) -> int:
    out = 1
    for lv in levels:
        out = _lcm(out, lv)
    return out


def cyclo_arith(x: CycloNumber, y: CycloNumber, op: str) -> CycloNumber:
    """x op y for op in add, mul, div, reduced to the smallest level."""
    if op == "add":
        out = x + y
    elif op == "mul":
        out = x * y
    elif op == "div":
        out = x / y
    else:
        raise ValueError(f"unknown operation {op!r}")
    return out.min_level()


def kronecker_symbol(D: int, n: int) -> int:
    """(D/n) for n > 0."""
    from sympy import jacobi_symbol

    out = 1
    while n % 2 == 0:
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
        n //= 2
    if n == 1:
        return out
    return out * jacobi_symbol(D % n, n)


def sqrt_disc(F) -> CycloNumber:
    """The positive square root of disc(F), as a quadratic Gauss sum."""
    D = F.disc
    counts = {a: kronecker_symbol(D, a) for a in range(1, D) if gcd(a, D) == 1}
    g = CycloNumber.from_exponent_counts(D, counts).to_level(_lcm(8, D))
    if g.embed().real < 0:
        g = -g
    return g
