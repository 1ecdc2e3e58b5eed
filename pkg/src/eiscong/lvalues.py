"""Hecke L-values of narrow ray class characters.

Exact values at s = 1-k come from Shintani's cone decomposition with the
cone spanned by 1 and eps_+.  A numerical continuation through the
functional equation serves as an independent check.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd

import mpmath
import numpy as np
from scipy.special import k0

from .cyclo import CycloNumber, kronecker_symbol
from .errors import NotPrimitive, UnsupportedArgument
from .quadfield import FieldElement, OIdeal, QuadField, make_field
from .rayclass import RayCharacter, gauss_sum, ray_class_group


# -- Bernoulli polynomials -------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, j) * bernoulli_number(j) for j in range(n)) / (n + 1)


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(x), lowest degree first."""
    return tuple(comb(n, j) * bernoulli_number(n - j) for j in range(n + 1))


def _gbinom(e: int, j: int) -> int:
    if e >= 0:
        return comb(e, j) if j <= e else 0
    # e == -1 is the only negative exponent that occurs
    return (-1) ** j


@lru_cache(maxsize=None)
def shintani_poly(d: int, k: int) -> dict[tuple[int, int], Fraction]:
    """P with zeta(1-k, x) = P(x1, x2) for the cone (1, eps_+).

    P(x) = ((k-1)!)^2 / 2 * sum over l1 + l2 = 2k of
           B_l1(x1) B_l2(x2) / (l1! l2!) * Tr(coef of y^(k-1) in
           (1+y)^(l1-1) (e + e' y)^(l2-1)),  e = eps_+, e' its conjugate.
    """
    F = make_field(d)
    e = F.tp_unit
    eb = e.conj()
    out: dict[tuple[int, int], Fraction] = {}
    pref = Fraction(factorial(k - 1) ** 2, 2)
    for l1 in range(2 * k + 1):
        l2 = 2 * k - l1
        c = FieldElement(F, 0)
        for i in range(k):
            j = k - 1 - i
            b1 = _gbinom(l1 - 1, i)
            b2 = _gbinom(l2 - 1, j)
            if b1 and b2:
                c = c + (e ** (l2 - 1 - j)) * (eb ** j) * (b1 * b2)
        tr = c.trace()
        if tr == 0:
            continue
        w = pref * tr / (factorial(l1) * factorial(l2))
        for i1, a1 in enumerate(bernoulli_poly(l1)):
            if not a1:
                continue
            for i2, a2 in enumerate(bernoulli_poly(l2)):
                if a2:
                    out[(i1, i2)] = out.get((i1, i2), Fraction(0)) + w * a1 * a2
    return {m: v for m, v in out.items() if v}


def shintani_zeta(F: QuadField, k: int, x1: Fraction, x2: Fraction) -> Fraction:
    """zeta(1-k, x) = sum over n1, n2 >= 0 of N((x1+n1) + (x2+n2) eps_+)^(k-1)."""
    P = shintani_poly(F.d, k)
    return sum((c * x1**i * x2**j for (i, j), c in P.items()), Fraction(0))


def cone_points(F: QuadField, a: int):
    """Integral beta = s + t*w with beta/a in the half-open parallelogram
    {x1 + x2 eps_+ : 0 < x1 <= 1, 0 <= x2 < 1}; yields (s, t, X1, X2) where
    x1 = X1/(e2*a), x2 = X2/(e2*a)."""
    e1, e2 = F.tp_unit.coords()
    for t in range(a * e2):
        # s*e2 - e1*t in (0, e2*a]
        lo = (e1 * t) // e2 + 1
        for s in range(lo, lo + a):
            X1 = s * e2 - e1 * t
            if 0 < X1 <= e2 * a:
                yield s, t, X1, t
        # the range above has exactly a members with X1 in (0, e2 a]


@lru_cache(maxsize=None)
def partial_zetas(d: int, mkey: tuple, k: int) -> dict[tuple, Fraction]:
    """Sum of N(alpha)^(k-1) over totally positive alpha in each narrow ray
    class mod m, regularized at s = 1-k; keyed by dlog vector."""
    F = make_field(d)
    m = OIdeal(F, *mkey)
    G = ray_class_group(F, m)
    a = m.a
    e1, e2 = F.tp_unit.coords()
    D = e2 * a
    P = shintani_poly(d, k)
    maxi = max((i for i, _ in P), default=0)
    maxj = max((j for _, j in P), default=0)
    sums: dict[tuple, list] = {}
    for s, t, X1, X2 in cone_points(F, a):
        z = m.reduce(FieldElement(F, s, t))
        if not G._is_unit(z):
            continue
        cls = G.dlog_element(z + (0, 0))
        acc = sums.get(cls)
        if acc is None:
            acc = [[0] * (maxj + 1) for _ in range(maxi + 1)]
            sums[cls] = acc
        p1 = 1
        for i in range(maxi + 1):
            p2 = p1
            row = acc[i]
            for j in range(maxj + 1):
                row[j] += p2
                p2 *= X2
            p1 *= X1
    scale = Fraction(a) ** (2 * k - 2)
    out = {}
    for cls, acc in sums.items():
        v = sum((c * Fraction(acc[i][j], D ** (i + j)) for (i, j), c in P.items()), Fraction(0))
        out[cls] = v * scale
    return out


def _check_s(chi: RayCharacter, s: int) -> int:
    if s > 0 or int(s) != s:
        raise UnsupportedArgument(f"exact values only at non-positive integers, got s={s}")
    if s == 0 and chi.is_trivial():
        raise UnsupportedArgument("the trivial character is not supported at s=0")
    return 1 - int(s)


def l_value_at_modulus(chi: RayCharacter, s: int) -> CycloNumber:
    """L(s, chi) with chi viewed at its own modulus (Euler factors at the
    modulus removed when chi is imprimitive)."""
    k = _check_s(chi, s)
    F = chi.F
    Z = partial_zetas(F.d, chi.modulus.key(), k)
    level = chi.order
    acc: dict[int, Fraction] = {}
    for cls, v in Z.items():
        j = int(chi.angle_dlog(cls) * level) % level
        acc[j] = acc.get(j, Fraction(0)) + v
    den = 1
    for v in acc.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return CycloNumber.from_exponent_counts(level, {j: int(v * den) for j, v in acc.items()}, den)


def l_value_nonpositive(chi: RayCharacter, s: int) -> CycloNumber:
    """Exact L(s, chi) for the primitive character attached to chi, s <= 0."""
    _check_s(chi, s)
    return l_value_at_modulus(chi.primitive(), s)


def euler_factor_removed(chi: RayCharacter, s: int, modulus: OIdeal) -> CycloNumber:
    """prod over primes q | modulus, q not dividing the conductor, of (1 - chi(q) N(q)^-s)."""
    prim = chi.primitive()
    out = CycloNumber.one(prim.order)
    for q in modulus.factor():
        if not q.coprime_to(prim.modulus):
            continue
        out = out * (1 - prim.value(q) * Fraction(q.norm()) ** (-s))
    return out


# -- numerical oracle -------------------------------------------------------
# Double precision throughout: the oracle only has to certify agreement to
# about 1e-8, and the Bessel tables below are cheap in numpy.

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(30)
_U_MAX = 13.0  # exp(-2 pi u) < 1e-35 beyond this


def _prime_value(prim: RayCharacter, P) -> complex:
    ang = prim.angle_ideal(P)
    if ang is None:
        return 0j
    return complex(np.exp(2j * np.pi * float(ang)))


def dirichlet_coefficients(chi: RayCharacter, N: int, values=None) -> np.ndarray:
    """a_n = sum over N(I) = n of chi(I), n <= N, by multiplying out Euler factors.

    ``values`` optionally maps a prime ideal to the complex value used there.
    """
    prim = chi.primitive()
    a = np.zeros(N + 1, dtype=complex)
    if N >= 1:
        a[1] = 1
    for P in chi.F.primes_up_to(N):
        q = int(P.norm())
        c = values(P) if values is not None else _prime_value(prim, P)
        if c == 0:
            continue
        for n in range(q, N + 1, q):
            a[n] += c * a[n // q]
    return a


def direct_coefficients(chi: RayCharacter, N: int) -> np.ndarray:
    """a_n = sum over ideals of norm n of chi(I), by enumerating ideals."""
    prim = chi.primitive()
    a = np.zeros(N + 1, dtype=complex)
    cache = {}
    for I, fac in chi.F.ideals_up_to(N):
        ang = Fraction(0)
        for P, e in fac.items():
            if P not in cache:
                cache[P] = prim.angle_ideal(P)
            if cache[P] is None:
                break
            ang += cache[P] * e
        else:
            a[int(I.norm())] += np.exp(2j * np.pi * float(ang))
    return a


def _gamma_type(r) -> str:
    return {(0, 0): "even", (1, 1): "odd"}.get(tuple(r), "mixed")


def _gamma_pole(kind: str, s: complex) -> bool:
    def at_pole(z):
        return z.imag == 0 and z.real <= 0 and z.real == int(z.real)

    if kind == "even":
        return at_pole(s / 2)
    if kind == "odd":
        return at_pole((s + 1) / 2)
    return at_pole(s)


def _gamma_factor(kind: str, s: complex) -> complex:
    s = mpmath.mpmathify(s)
    if kind == "even":
        v = mpmath.pi ** (-s) * mpmath.gamma(s / 2) ** 2
    elif kind == "odd":
        v = mpmath.pi ** (-s - 1) * mpmath.gamma((s + 1) / 2) ** 2
    else:
        v = 2 * (2 * mpmath.pi) ** (-s) * mpmath.gamma(s)
    return complex(v)


def _phi(kind: str, u: np.ndarray) -> np.ndarray:
    if kind == "even":
        return 4 * k0(2 * np.pi * u)
    if kind == "odd":
        return 4 * u * k0(2 * np.pi * u)
    return 2 * np.exp(-2 * np.pi * u)


def incomplete_table(kind: str, s: complex, step: float, N: int) -> np.ndarray:
    """G[n] = int_{n*step}^inf phi(u) u^(s-1) du for 1 <= n <= N (G[0] unused)."""
    M = max(N, int(np.ceil(_U_MAX / step)) + 1)
    left = step * np.arange(1, M + 1)
    half = step / 2
    u = (left + half)[:, None] + half * _GL_NODES[None, :]
    vals = _phi(kind, u) * u ** (complex(s) - 1)
    pieces = half * (vals @ _GL_WEIGHTS)
    # G[n] = sum of pieces from interval n onward
    tail = np.cumsum(pieces[::-1])[::-1]
    out = np.zeros(N + 1, dtype=complex)
    out[1:] = tail[:N]
    return out


def root_number(chi: RayCharacter) -> complex:
    """W in Lambda(s, chi) = W Lambda(1-s, conj chi), from the Gauss sum."""
    prim = chi.primitive()
    if prim.is_trivial():
        return 1 + 0j
    tau = gauss_sum(prim).embed()
    Nf = int(prim.modulus.norm())
    r = sum(prim.sign)
    return tau / (1j**r * np.sqrt(Nf))


def completed_l_value(chi: RayCharacter, s: complex, t0: float = 1.0, W=None, terms: int | None = None) -> complex:
    """Lambda(s, chi) for primitive nontrivial chi, split at t0.

    terms caps the number of Dirichlet coefficients used.
    """
    prim = chi.primitive()
    A = prim.F.disc * int(prim.modulus.norm())
    sqA = np.sqrt(A)
    kind = _gamma_type(prim.sign)
    if W is None:
        W = root_number(prim)
    N = int(np.ceil(_U_MAX * sqA / min(t0, 1 / t0))) + 1
    if terms is not None:
        N = max(1, min(N, terms))
    a = dirichlet_coefficients(prim, N)
    n = np.arange(1, N + 1)
    G1 = incomplete_table(kind, s, t0 / sqA, N)[1:]
    G2 = incomplete_table(kind, 1 - s, 1 / (t0 * sqA), N)[1:]
    S1 = np.sum(a[1:] * (sqA / n) ** complex(s) * G1)
    S2 = np.sum(np.conj(a[1:]) * (sqA / n) ** complex(1 - s) * G2)
    return S1 + W * S2


def l_value_continued(chi: RayCharacter, s, terms: int | None = None) -> tuple[complex, float]:
    """Numerical L(s, chi_prim) via the functional equation.

    Returns (value, error estimate); the estimate is the spread between the
    splitting points t0 = 1 and t0 = 1.2.
    """
    prim = chi.primitive()
    if prim.is_trivial():
        return _dedekind_zeta_numeric(prim.F, s)
    s = complex(s)
    kind = _gamma_type(prim.sign)
    A = prim.F.disc * int(prim.modulus.norm())
    lam1 = completed_l_value(prim, s, 1.0, terms=terms)
    lam2 = completed_l_value(prim, s, 1.2, terms=terms)
    if _gamma_pole(kind, s):
        # Lambda is finite there, so L vanishes
        return 0j, float(abs(lam1 - lam2))
    gam = A ** (s / 2) * _gamma_factor(kind, s)
    return lam1 / gam, float(abs(lam1 - lam2) / abs(gam))


def _dedekind_zeta_numeric(F: QuadField, s, dps: int = 30) -> tuple[complex, float]:
    """zeta_F(s) = zeta(s) L(s, chi_D), the latter through Hurwitz zeta."""
    with mpmath.workdps(dps):
        s = mpmath.mpmathify(s)
        D = F.disc
        L = sum(kronecker_symbol(D, a) * mpmath.zeta(s, mpmath.mpf(a) / D) for a in range(1, D + 1))
        v = mpmath.zeta(s) * L * mpmath.mpf(D) ** (-s)
        return complex(v), 0.0


def rational_reconstruction(x: float, max_den: int = 360, tol: float = 1e-9):
    """The fraction with denominator dividing max_den closest to x, or None."""
    q = Fraction(round(x * max_den), max_den)
    return q if abs(float(q) - x) < tol else None


def l_value_numeric(chi: RayCharacter, s, terms: int = 10**4, method: str = "auto"):
    """Numerical L(s, chi).

    method 'direct' returns the partial sum over ideals of norm <= terms
    (Re s > 1); 'continued' uses the functional equation.  'auto' picks
    direct when Re s > 1.  Returns (value, error estimate).
    """
    s_c = complex(s)
    if method == "auto":
        method = "direct" if s_c.real > 1 else "continued"
    if method == "direct":
        if s_c.real <= 1:
            raise UnsupportedArgument("direct summation needs Re(s) > 1")
        if terms <= 0:
            return 0j, 0.0
        a = direct_coefficients(chi, terms)
        n = np.arange(1, terms + 1, dtype=float)
        tot = complex(np.sum(a[1:] * n ** (-s_c)))
        # crude tail bound: sum over n > terms of d(n) n^-sigma
        sig = s_c.real
        tail = 2 * (1 + np.log(terms)) * terms ** (1 - sig) / (sig - 1)
        return tot, float(tail)
    if not chi.is_primitive() and not chi.is_trivial():
        raise NotPrimitive("the functional-equation path needs a primitive character")
    return l_value_continued(chi, s_c)
