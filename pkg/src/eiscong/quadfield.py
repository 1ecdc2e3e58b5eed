"""Real quadratic fields of narrow class number one.

Elements are a + b*w in the integral basis (1, w), where w = (1+sqrt d)/2
when d = 1 mod 4 and w = sqrt d otherwise, so that w^2 = t*w + n.
Ideals are stored in Hermite normal form: Z*a + Z*(b + c*w), scaled by 1/den.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, sqrt
import re

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .errors import (
    LevelNotCoprime,
    MalformedValue,
    NarrowClassNumberNotOne,
    NotIntegral,
    NotSquarefree,
    ZeroIdeal,
)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _sign_of(u: Fraction, v: Fraction, d: int) -> int:
    """Exact sign of u + v*sqrt(d)."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    cmp = u * u - v * v * d
    return su if cmp > 0 else sv


class FieldElement:
    __slots__ = ("F", "a", "b")

    def __init__(self, F: "QuadField", a, b=0):
        self.F = F
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.F, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.F, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.F, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.F, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t, n = self.F.t, self.F.n
        bd = self.b * o.b
        return FieldElement(self.F, self.a * o.a + bd * n, self.a * o.b + self.b * o.a + bd * t)

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        return FieldElement(self.F, self.a + self.b * self.F.t, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.F.t * self.a * self.b - self.F.n * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.F.t * self.b

    def inverse(self) -> "FieldElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero field element")
        c = self.conj()
        return FieldElement(self.F, c.a / nm, c.b / nm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = FieldElement(self.F, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def _uv(self):
        # self = u + v*sqrt(d)
        if self.F.t:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def signs(self) -> tuple[int, int]:
        u, v = self._uv()
        return _sign_of(u, v, self.F.d), _sign_of(u, -v, self.F.d)

    def is_totally_positive(self) -> bool:
        return self.signs() == (1, 1)

    def embeddings(self) -> tuple[float, float]:
        u, v = self._uv()
        r = sqrt(self.F.d)
        return float(u) + float(v) * r, float(u) - float(v) * r

    def coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise NotIntegral(f"{self} is not integral")
        return int(self.a), int(self.b)

    def __str__(self):
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        bs = "" if b == 1 else "-" if b == -1 else str(b) + "*"
        if a == 0:
            return f"{bs}w"
        sign = "+" if b > 0 else "-"
        babs = abs(b)
        bs = "" if babs == 1 else str(babs) + "*"
        return f"{a}{sign}{bs}w"

    def __repr__(self):
        return f"FieldElement({self.F.d}; {self})"


class OIdeal:
    """A nonzero fractional ideal in canonical Hermite normal form."""

    __slots__ = ("F", "a", "b", "c", "den", "_hash")

    def __init__(self, F: "QuadField", a: int, b: int, c: int, den: int = 1):
        self.F = F
        self.a, self.b, self.c, self.den = a, b, c, den
        self._hash = None

    @classmethod
    def from_lattice(cls, F: "QuadField", vectors, den: int = 1) -> "OIdeal":
        a, b, c = _hnf2(vectors)
        g = gcd(gcd(gcd(a, b), c), den)
        if g > 1:
            a, b, c, den = a // g, b // g, c // g, den // g
        return cls(F, a, b, c, den)

    @property
    def hnf(self):
        return [[self.a, self.b], [0, self.c]]

    def key(self):
        return (self.a, self.b, self.c, self.den)

    def __eq__(self, other):
        return isinstance(other, OIdeal) and self.F.d == other.F.d and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.F.d,) + self.key())
        return self._hash

    def __lt__(self, other):
        return (self.norm(), self.key()) < (other.norm(), other.key())

    def __str__(self):
        return f"[[{self.a},{self.b}],[0,{self.c}]]/{self.den}"

    def __repr__(self):
        return f"OIdeal({self})"

    def label(self) -> str:
        if self.is_unit():
            return "O_F"
        return str(self)

    def basis(self) -> list[FieldElement]:
        F = self.F
        return [FieldElement(F, Fraction(self.a, self.den)), FieldElement(F, Fraction(self.b, self.den), Fraction(self.c, self.den))]

    def _int_gens(self):
        # integer coordinate vectors of den*I as an O-module spanning set
        F = self.F
        g1 = (self.a, 0)
        g2 = (self.b, self.c)
        out = []
        for x, y in (g1, g2):
            out.append((x, y))
            # (x + y w) * w = y*n + (x + y*t) w
            out.append((y * F.n, x + y * F.t))
        return out

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit(self) -> bool:
        return self.key() == (1, 0, 1, 1)

    def __mul__(self, other):
        if isinstance(other, OIdeal):
            t, n = self.F.t, self.F.n
            vecs = []
            for x1, y1 in ((self.a, 0), (self.b, self.c)):
                for x2, y2 in ((other.a, 0), (other.b, other.c)):
                    yy = y1 * y2
                    X = x1 * x2 + yy * n
                    Y = x1 * y2 + x2 * y1 + yy * t
                    vecs.append((X, Y))
                    vecs.append((Y * n, X + Y * t))
            return OIdeal.from_lattice(self.F, vecs, self.den * other.den)
        if isinstance(other, (FieldElement, int, Fraction)):
            return self * self.F.principal(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.F.unit_ideal()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __add__(self, other: "OIdeal") -> "OIdeal":
        """Ideal sum (the gcd)."""
        D = self.den * other.den // gcd(self.den, other.den)
        vecs = [(x * (D // self.den), y * (D // self.den)) for x, y in self._int_gens()]
        vecs += [(x * (D // other.den), y * (D // other.den)) for x, y in other._int_gens()]
        return OIdeal.from_lattice(self.F, vecs, D)

    def conj(self) -> "OIdeal":
        vecs = []
        for x, y in ((self.a, 0), (self.b, self.c)):
            e = FieldElement(self.F, x, y).conj()
            vecs.append((int(e.a), int(e.b)))
        vecs += [(int(v.a), int(v.b)) for v in (FieldElement(self.F, x, y).conj() * self.F.w for x, y in ((self.a, 0), (self.b, self.c)))]
        return OIdeal.from_lattice(self.F, vecs, self.den)

    def inverse(self) -> "OIdeal":
        return self.conj().scale(1 / self.norm())

    def __truediv__(self, other: "OIdeal") -> "OIdeal":
        return self * other.inverse()

    def scale(self, q) -> "OIdeal":
        q = Fraction(q)
        if q == 0:
            raise ZeroIdeal("scaling by zero")
        p, r = abs(q.numerator), q.denominator
        vecs = [(x * p, y * p) for x, y in ((self.a, 0), (self.b, self.c))]
        vecs += [(x * p, y * p) for x, y in self._int_gens()]
        return OIdeal.from_lattice(self.F, vecs, self.den * r)

    def lcm(self, other: "OIdeal") -> "OIdeal":
        return (self * other) / (self + other)

    def contains(self, x) -> bool:
        if not isinstance(x, FieldElement):
            x = FieldElement(self.F, x)
        X, Y = x.a * self.den, x.b * self.den
        if X.denominator != 1 or Y.denominator != 1:
            return False
        X, Y = int(X), int(Y)
        if Y % self.c:
            return False
        return (X - (Y // self.c) * self.b) % self.a == 0

    __contains__ = contains

    def divides(self, other: "OIdeal") -> bool:
        return all(self.contains(g) for g in other.basis())

    def coprime_to(self, other: "OIdeal") -> bool:
        return (self + other).is_unit()

    def reduce(self, x) -> tuple[int, int]:
        """Canonical representative of an integral element modulo this integral ideal."""
        if not isinstance(x, FieldElement):
            x = FieldElement(self.F, x)
        X, Y = x.coords()
        q, Y = divmod(Y, self.c)
        X = (X - q * self.b) % self.a
        return X, Y

    def residue_count(self) -> int:
        return self.a * self.c

    def residues(self):
        """All residue classes of O modulo this integral ideal, as coordinate pairs."""
        for y in range(self.c):
            for x in range(self.a):
                yield x, y

    def factor(self) -> dict["OIdeal", int]:
        """Prime factorization, valid for fractional ideals (negative exponents)."""
        if not self.is_integral():
            num = self.scale(self.den)
            out = num.factor()
            for P, e in self.F.principal(self.den).factor().items():
                out[P] = out.get(P, 0) - e
            return {P: e for P, e in out.items() if e}
        out = {}
        N = self.a * self.c
        for p in sorted(factorint(N)):
            for P in self.F.primes_above(p):
                e = 0
                cur = self
                while True:
                    if not P.divides(cur):
                        break
                    cur = cur / P
                    e += 1
                if e:
                    out[P] = e
        return dict(sorted(out.items(), key=lambda kv: (kv[0].norm(), kv[0].key())))


def _hnf2(vectors) -> tuple[int, int, int]:
    """Column HNF (a, b, c) of a full-rank lattice in Z^2 given by spanning vectors."""
    a = 0
    px, py = 0, 0
    for x, y in vectors:
        if y == 0:
            a = gcd(a, x)
            continue
        if py == 0:
            a = gcd(a, px) if px else a
            px, py = x, y
            continue
        g, s, t = _xgcd(py, y)
        nx = s * px + t * x
        a = gcd(a, (y // g) * px - (py // g) * x)
        px, py = nx, g
    if py < 0:
        px, py = -px, -py
    if a == 0 or py == 0:
        raise ZeroIdeal("lattice is not of full rank")
    return a, px % a, py


def _int_bezout(vectors, target):
    """Integer coefficients l with sum l_i v_i = target, or None."""
    k = len(vectors)
    rows = [list(v) + [1 if j == i else 0 for j in range(k)] for i, v in enumerate(vectors)]
    # echelon on the first two coordinates
    out = []
    for col in range(2):
        live = [r for r in rows if r[col] != 0]
        dead = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] != 0 else dead).append(r)
            live = nxt
        if live:
            out.append(live[0])
        rows = dead
    # out[0] has pivot in col 0, out[1] (if any) pivot in col 1 with col0 == 0
    tx, ty = target
    coeff = [0] * k
    r0 = out[0] if out and out[0][0] != 0 else None
    r1 = next((r for r in out if r[0] == 0 and r[1] != 0), None)
    if r0 is None or tx % r0[0]:
        return None
    q0 = tx // r0[0]
    rem_y = ty - q0 * r0[1]
    if r1 is None:
        if rem_y:
            return None
        q1 = 0
    else:
        if rem_y % r1[1]:
            return None
        q1 = rem_y // r1[1]
    for i in range(k):
        coeff[i] = q0 * r0[2 + i] + (q1 * r1[2 + i] if r1 else 0)
    return coeff


class Cusp:
    __slots__ = ("alpha", "label", "orbit_key")

    def __init__(self, alpha, label: str, orbit_key):
        self.alpha = alpha
        self.label = label
        self.orbit_key = orbit_key

    @property
    def x(self):
        return self.alpha[0][0]

    @property
    def y(self):
        return self.alpha[1][0]

    def value(self):
        if self.y.is_zero():
            return None
        return self.x / self.y

    def __repr__(self):
        return f"Cusp({self.label}; x={self.x}, y={self.y})"


class QuadField:
    """Q(sqrt d) with h_F^+ = 1 verified at construction."""

    def __init__(self, d: int):
        if d <= 1 or any(e > 1 for e in factorint(d).values()):
            raise NotSquarefree(f"d={d} is not a squarefree integer > 1")
        self.d = d
        if d % 4 == 1:
            self.t, self.n, self.disc = 1, (d - 1) // 4, d
        else:
            self.t, self.n, self.disc = 0, d, 4 * d
        self.w = FieldElement(self, 0, 1)
        self.fund_unit = self._find_fund_unit()
        self.unit_norm = int(self.fund_unit.norm())
        self.tp_unit = self.fund_unit if self.unit_norm == 1 else self.fund_unit * self.fund_unit
        self.sqrt_d = FieldElement(self, -1, 2) if self.t else FieldElement(self, 0, 1)
        self.different_gen = self.sqrt_d if self.t else self.sqrt_d * 2
        self._gen_cache: dict = {}
        self._check_narrow_class_number()

    # -- construction helpers ------------------------------------------
    def _find_fund_unit(self) -> FieldElement:
        d = self.d
        if self.t:
            y = 1
            while True:
                for target in (-4, 4):
                    x2 = d * y * y + target
                    x = isqrt(x2) if x2 >= 0 else -1
                    if x >= 0 and x * x == x2 and (x - y) % 2 == 0:
                        return FieldElement(self, (x - y) // 2, y)
                y += 1
        y = 1
        while True:
            for target in (-1, 1):
                x2 = d * y * y + target
                x = isqrt(x2)
                if x * x == x2:
                    return FieldElement(self, x, y)
            y += 1

    def _check_narrow_class_number(self):
        if self.unit_norm != -1:
            raise NarrowClassNumberNotOne(f"Q(sqrt {self.d}): fundamental unit has norm +1")
        bound = isqrt(self.disc // 4) + 1
        for p in range(2, bound + 1):
            if all(p % q for q in range(2, isqrt(p) + 1)):
                for P in self.primes_above(p):
                    if P.norm() > bound * bound:
                        continue
                    if self._find_generator(P) is None:
                        raise NarrowClassNumberNotOne(f"Q(sqrt {self.d}): prime {P} is not principal")

    # -- descriptors ----------------------------------------------------
    def __repr__(self):
        return f"QF(d={self.d})"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self):
        return hash(("QF", self.d))

    def describe(self) -> dict:
        return {
            "field": str(self),
            "disc": self.disc,
            "omega": "(1+sqrt d)/2" if self.t else "sqrt d",
            "fund_unit": str(self.fund_unit),
            "fund_unit_norm": self.unit_norm,
            "tp_unit": str(self.tp_unit),
            "different_gen": str(self.different_gen),
            "t1": "d_F^-1",
        }

    # -- constructors for elements and ideals ---------------------------
    def element(self, a, b=0) -> FieldElement:
        return FieldElement(self, a, b)

    def unit_ideal(self) -> OIdeal:
        return OIdeal(self, 1, 0, 1, 1)

    def principal(self, x) -> OIdeal:
        if not isinstance(x, FieldElement):
            x = FieldElement(self, x)
        if x.is_zero():
            raise ZeroIdeal("the zero ideal is not supported")
        D = x.a.denominator * x.b.denominator // gcd(x.a.denominator, x.b.denominator)
        y = x * D
        xw = y * self.w
        return OIdeal.from_lattice(self, [(int(y.a), int(y.b)), (int(xw.a), int(xw.b))], D)

    def ideal(self, *gens) -> OIdeal:
        gens = [g if isinstance(g, FieldElement) else FieldElement(self, g) for g in gens]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ZeroIdeal("the zero ideal is not supported")
        out = self.principal(gens[0])
        for g in gens[1:]:
            out = out + self.principal(g)
        return out

    def different(self) -> OIdeal:
        return self.principal(self.different_gen)

    def t1(self) -> OIdeal:
        """The chosen class representative [t_1], namely d_F^{-1}."""
        return self.different().inverse()

    def parse_ideal(self, text: str) -> OIdeal:
        m = re.match(r"^\s*\[\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*0\s*,\s*(-?\d+)\s*\]\s*\]\s*(?:/\s*(\d+))?\s*$", text)
        if text.strip() == "O_F":
            return self.unit_ideal()
        if not m:
            raise MalformedValue(f"bad ideal serialization {text!r}")
        a, b, c = int(m.group(1)), int(m.group(2)), int(m.group(3))
        den = int(m.group(4) or 1)
        I = OIdeal.from_lattice(self, [(a, 0), (b, c)], den)
        # must be closed under multiplication by w
        if not all(I.contains(g * self.w) for g in I.basis()):
            raise MalformedValue(f"{text!r} is not an ideal")
        return I

    # -- primes -----------------------------------------------------------
    def splitting_type(self, p: int) -> str:
        if self.disc % p == 0:
            return "ramified"
        if p == 2:
            return "split" if self.d % 8 == 1 else "inert"
        return "split" if pow(self.disc % p, (p - 1) // 2, p) == 1 else "inert"

    @lru_cache(maxsize=None)
    def primes_above(self, p: int) -> tuple[OIdeal, ...]:
        kind = self.splitting_type(p)
        if kind == "inert":
            return (self.principal(p),)
        # roots of x^2 - t x - n mod p
        if p == 2:
            roots = [r for r in range(2) if (r * r - self.t * r - self.n) % 2 == 0]
        else:
            inv2 = pow(2, -1, p)
            sq = sqrt_mod((self.t * self.t + 4 * self.n) % p, p, all_roots=True)
            roots = sorted({((self.t + s) * inv2) % p for s in sq})
        out = [OIdeal.from_lattice(self, [(p, 0), (-r, 1), (self.n, -r + self.t)]) for r in roots]
        out = sorted(set(out), key=lambda I: I.key())
        return tuple(out)

    def factor_rational_prime(self, p: int) -> dict:
        primes = self.primes_above(p)
        kind = self.splitting_type(p)
        degrees = [2 if kind == "inert" else 1 for _ in primes]
        return {"type": kind, "primes": list(primes), "residue_degrees": degrees}

    def primes_up_to(self, B: int) -> list[OIdeal]:
        out = []
        for p in _rational_primes(B):
            for P in self.primes_above(p):
                if P.norm() <= B:
                    out.append(P)

        def key(P):
            g = self.tp_generator(P)
            return (P.norm(), g.trace(), g.b, g.a)

        return sorted(out, key=key)

    # -- generators ---------------------------------------------------------
    def _find_generator(self, I: OIdeal):
        """Some generator of I (None if I is not principal), by bounded search."""
        if not I.is_integral():
            J = I.scale(I.den)
            g = self._find_generator(J)
            return None if g is None else g * Fraction(1, I.den)
        N = I.a * I.c
        eps = max(abs(x) for x in self.fund_unit.embeddings())
        B = sqrt(N * eps) * (1 + 1e-9) + 1e-6
        r = sqrt(self.d)
        w1 = (self.t + r) / 2 if self.t else r
        sqD = sqrt(self.disc)
        jmax = int(2 * B / (I.c * sqD)) + 1
        best = None
        for j in range(-jmax, jmax + 1):
            base = j * (I.b + I.c * w1)
            lo = int((-B - base) // I.a) - 1
            hi = int((B - base) // I.a) + 1
            for i in range(lo, hi + 1):
                x = i * I.a + j * I.b
                y = j * I.c
                if x == 0 and y == 0:
                    continue
                nm = x * x + self.t * x * y - self.n * y * y
                if abs(nm) == N:
                    cand = FieldElement(self, x, y)
                    k = (abs(x) + abs(y), x, y)
                    if best is None or k < best[0]:
                        best = (k, cand)
        return None if best is None else best[1]

    def tp_generator(self, I: OIdeal) -> FieldElement:
        """Canonical totally positive generator of I (min trace, then b, then a)."""
        g = self._gen_cache.get(I)
        if g is not None:
            return g
        g = self._find_generator(I)
        if g is None:
            raise NarrowClassNumberNotOne(f"{I} is not principal")
        s = g.signs()
        if s[0] != s[1]:
            g = g * self.fund_unit
            s = g.signs()
        if s[0] < 0:
            g = -g
        e = self.tp_unit
        einv = e.conj()
        cur = g
        best = (cur.trace(), cur.b, cur.a)
        for step in (e, einv):
            cand = cur * step
            while True:
                k = (cand.trace(), cand.b, cand.a)
                if k < best:
                    best, g = k, cand
                    cand = cand * step
                else:
                    break
        self._gen_cache[I] = g
        return g

    # -- ideal enumeration -------------------------------------------------------
    def ideals_up_to(self, X: int) -> list[tuple[OIdeal, dict]]:
        """All integral ideals of norm <= X with their prime factorizations."""
        primes = self.primes_up_to(X)
        out = []

        def rec(start, cur, norm, fac):
            out.append((cur, dict(fac)))
            for i in range(start, len(primes)):
                P = primes[i]
                q = int(P.norm())
                if norm * q > X:
                    break
                nxt = cur
                nn = norm
                e = 0
                while nn * q <= X:
                    nn *= q
                    e += 1
                    nxt = nxt * P
                    fac[P] = e
                    rec(i + 1, nxt, nn, fac)
                del fac[P]

        rec(0, self.unit_ideal(), 1, {})
        out.sort(key=lambda t: (t[0].norm(), t[0].key()))
        return out

    # -- cusps ---------------------------------------------------------------------
    def cusp_representatives(self, level: OIdeal) -> list[Cusp]:
        return cusp_representatives(self, level)


def _rational_primes(B: int) -> list[int]:
    if B < 2:
        return []
    sieve = bytearray([1]) * (B + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(B) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, B + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


@lru_cache(maxsize=None)
def make_field(d: int) -> QuadField:
    return QuadField(d)


def ideal_norm(I: OIdeal) -> Fraction:
    if I is None:
        raise ZeroIdeal("the zero ideal has no norm")
    return I.norm()


def factor_rational_prime(F: QuadField, p: int) -> dict:
    return F.factor_rational_prime(p)


def primes_up_to(F: QuadField, B: int) -> list[OIdeal]:
    return F.primes_up_to(B)


def mul_mod(F: QuadField, n: OIdeal, u, v) -> tuple[int, int]:
    """Product of two residues (coordinate pairs) modulo n."""
    x = FieldElement(F, u[0], u[1]) * FieldElement(F, v[0], v[1])
    return n.reduce(x)


def is_unit_mod(F: QuadField, n: OIdeal, u) -> bool:
    x = FieldElement(F, u[0], u[1])
    return all(not P.contains(x) for P in n.factor())


def cusp_representatives(F: QuadField, level: OIdeal) -> list[Cusp]:
    """One SL_2(O) matrix per cusp of Gamma_1(O, level).

    Orbits of unimodular pairs (x, y) mod level under x -> x + b*y,
    x -> eps_+ * x, and (x, y) -> u*(x, y) for units u.
    """
    if not level.is_integral():
        raise NotIntegral("level must be integral")
    if not level.coprime_to(F.principal(6 * F.disc)):
        raise LevelNotCoprime(f"level {level} is not coprime to 6*disc")
    one, zero = F.element(1), F.element(0)
    inf_alpha = ((one, zero), (zero, one))
    if level.is_unit():
        return [Cusp(inf_alpha, "inf", ((0, 0), (0, 0)))]
    n = level
    primes = list(n.factor())

    def unimodular(x, y):
        ex, ey = F.element(*x), F.element(*y)
        return all(not (P.contains(ex) and P.contains(ey)) for P in primes)

    res = list(n.residues())
    pairs = [(x, y) for x in res for y in res if unimodular(x, y)]
    e0 = F.fund_unit.coords()
    ep = F.tp_unit.coords()
    w = (0, 1)
    onec = n.reduce(one)
    seen: dict = {}
    orbits = []
    for start in pairs:
        if start in seen:
            continue
        idx = len(orbits)
        orbit = [start]
        seen[start] = idx
        queue = deque([start])
        while queue:
            x, y = queue.popleft()
            nbrs = [
                (n.reduce(F.element(*x) + F.element(*y)), y),
                (n.reduce(F.element(*x) + F.element(*w) * F.element(*y)), y),
                (mul_mod(F, n, ep, x), y),
                (n.reduce(-F.element(*x)), n.reduce(-F.element(*y))),
                (mul_mod(F, n, e0, x), mul_mod(F, n, e0, y)),
            ]
            for v in nbrs:
                if v not in seen:
                    seen[v] = idx
                    orbit.append(v)
                    queue.append(v)
        orbits.append(sorted(orbit))
    zero_r = n.reduce(zero)
    inf_idx = seen[(onec, zero_r)]
    zero_idx = seen[(zero_r, onec)]
    order = [inf_idx, zero_idx] + sorted(
        (i for i in range(len(orbits)) if i not in (inf_idx, zero_idx)), key=lambda i: orbits[i][0]
    )
    out = []
    for rank, i in enumerate(order):
        if i == inf_idx:
            out.append(Cusp(inf_alpha, "inf", orbits[i][0]))
            continue
        if i == zero_idx:
            out.append(Cusp(((zero, -one), (one, zero)), "0", orbits[i][0]))
            continue
        alpha = _lift_orbit(F, n, orbits[i])
        out.append(Cusp(alpha, f"c{rank}", orbits[i][0]))
    return out


def _lift_orbit(F: QuadField, n: OIdeal, orbit):
    """Complete some lift of an orbit member to a matrix in SL_2(O)."""
    shifts = [(i, j) for r in range(0, 4) for i in range(-r, r + 1) for j in range(-r, r + 1) if max(abs(i), abs(j)) == r]
    gen1 = F.element(n.a)
    gen2 = F.element(n.b, n.c)
    for x0, y0 in orbit:
        for i, j in shifts:
            y = F.element(*y0) + gen1 * i + gen2 * j
            if y.is_zero():
                continue
            for k, l in shifts:
                x = F.element(*x0) + gen1 * k + gen2 * l
                if x.is_zero():
                    continue
                if not F.ideal(x, y).is_unit():
                    continue
                xw, yw = x * F.w, y * F.w
                vecs = [x.coords(), xw.coords(), y.coords(), yw.coords()]
                coeff = _int_bezout(vecs, (1, 0))
                if coeff is None:
                    continue
                u = F.element(coeff[0]) + F.w * coeff[1]
                v = F.element(coeff[2]) + F.w * coeff[3]
                # x*u + y*v = 1  =>  alpha = (x, -v; y, u)
                assert x * u + y * v == 1
                return ((x, -v), (y, u))
    raise RuntimeError("could not lift cusp orbit")
