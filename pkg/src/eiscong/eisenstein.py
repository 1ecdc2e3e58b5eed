"""Hilbert Eisenstein series E_k(phi, psi) over a real quadratic field.

Coefficients C(m) = sum over c | m of phi(m/c) psi(c) N(c)^(k-1), Hecke
eigenvalues, and constant terms at the cusps of Gamma_1(n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .cyclo import CycloNumber, valuation_at_p
from .errors import (
    NotIntegral,
    OddWeightUnsupported,
    ParityMismatch,
    PreconditionError,
    ZeroIdeal,
)
from .lvalues import direct_coefficients, euler_factor_removed, l_value_nonpositive
from .quadfield import Cusp, FieldElement, OIdeal
from .rayclass import RayCharacter, gauss_sum


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class _AngleCache:
    """chi(I) as an angle in Q/Z (None off the conductor), memoized per ideal."""

    def __init__(self, chi: RayCharacter):
        self.chi = chi
        self._memo: dict = {}

    def __call__(self, I: OIdeal):
        key = I.key()
        if key not in self._memo:
            self._memo[key] = self.chi.angle_ideal(I)
        return self._memo[key]


def divisors(fac: dict) -> list[tuple[OIdeal, dict]]:
    """All integral divisors of an ideal given its factorization."""
    primes = list(fac.items())
    out = []
    for exps in product(*(range(e + 1) for _, e in primes)):
        out.append({P: x for (P, _), x in zip(primes, exps) if x})
    return out


_PRODUCT_MEMO: dict = {}


def _ideal_from(F, fac: dict) -> OIdeal:
    key = (F.d,) + tuple(sorted((P.key(), e) for P, e in fac.items()))
    I = _PRODUCT_MEMO.get(key)
    if I is None:
        I = F.unit_ideal()
        for P, e in fac.items():
            I = I * (P**e)
        _PRODUCT_MEMO[key] = I
    return I


@dataclass
class ConstantTermReport:
    cusp: Cusp
    value: CycloNumber
    case: str
    valuation: int | None = None

    def to_json(self) -> dict:
        x, y = self.cusp.x, self.cusp.y
        return {
            "cusp": self.cusp.label,
            "alpha": [[str(self.cusp.alpha[0][0]), str(self.cusp.alpha[0][1])], [str(y), str(self.cusp.alpha[1][1])]],
            "value": str(self.value),
            "pretty": self.value.pretty(),
            "case": self.case,
            "valuation": self.valuation,
        }


class EisensteinSeries:
    """E_k(phi, psi) of level n = m_phi m_psi."""

    def __init__(self, phi: RayCharacter, psi: RayCharacter, k: int = 2, scale=1):
        if k < 1:
            raise ValueError("weight must be positive")
        self.F = phi.F
        self.phi = phi.primitive()
        self.psi = psi.primitive()
        self.k = k
        self.scale = scale if isinstance(scale, CycloNumber) else CycloNumber.rational(Fraction(scale))
        q, r = self.phi.sign, self.psi.sign
        if any((q[i] + r[i] - k) % 2 for i in range(2)):
            raise ParityMismatch(f"(k,k) = ({k},{k}) is not congruent to q + r = {q} + {r} mod 2")
        mphi, mpsi = self.phi.modulus, self.psi.modulus
        self.level = mphi * mpsi
        self.chi = self.phi * self.psi
        if self.chi.conductor != self.level:
            raise PreconditionError("the conductor of phi*psi must equal m_phi * m_psi")
        self._phi_angle = _AngleCache(self.phi)
        self._psi_angle = _AngleCache(self.psi)
        self.value_level = _lcm(self.phi.order, self.psi.order)
        self._cache: dict = {}

    def __repr__(self):
        return f"E_{self.k}({self.phi.label()}, {self.psi.label()})"

    def scaled(self, c) -> "EisensteinSeries":
        c = c if isinstance(c, CycloNumber) else CycloNumber.rational(Fraction(c))
        return EisensteinSeries(self.phi, self.psi, self.k, self.scale * c)

    def _bucket(self, buckets, angle, weight):
        L = self.value_level
        j = int(angle * L) % L
        buckets[j] = buckets.get(j, 0) + weight

    # -- Fourier coefficients ---------------------------------------------------
    def coefficient(self, m: OIdeal, fac: dict | None = None) -> CycloNumber:
        """C(m, E) by the divisor sum; fac may supply the factorization of m."""
        if not m.is_integral():
            raise NotIntegral(f"{m} is not integral")
        key = m.key()
        if key in self._cache:
            return self._cache[key]
        if fac is None:
            fac = m.factor()
        F = self.F
        buckets: dict[int, int] = {}
        for cfac in divisors(fac):
            c = _ideal_from(F, cfac)
            quo = _ideal_from(F, {P: e - cfac.get(P, 0) for P, e in fac.items() if e - cfac.get(P, 0)})
            a1 = self._phi_angle(quo)
            if a1 is None:
                continue
            a2 = self._psi_angle(c)
            if a2 is None:
                continue
            self._bucket(buckets, a1 + a2, int(c.norm()) ** (self.k - 1))
        val = CycloNumber.from_exponent_counts(self.value_level, buckets) * self.scale
        self._cache[key] = val
        return val

    def eigenvalue(self, P: OIdeal) -> CycloNumber:
        """phi(P) + psi(P) N(P)^(k-1)."""
        out = CycloNumber.zero(self.value_level)
        for chi, w, ang in ((self.phi, 1, self._phi_angle), (self.psi, int(P.norm()) ** (self.k - 1), self._psi_angle)):
            a = ang(P)
            if a is not None:
                out = out + CycloNumber.zeta(self.value_level, int(a * self.value_level)) * w
        return out

    def hecke_eigenvalues(self, B: int) -> dict[OIdeal, CycloNumber]:
        return {P: self.eigenvalue(P) for P in self.F.primes_up_to(B)}

    def nebentypus_value(self, P: OIdeal) -> CycloNumber:
        """(phi psi)(P) N(P)^(k-1), the coefficient in the Hecke recursion."""
        a1, a2 = self._phi_angle(P), self._psi_angle(P)
        if a1 is None or a2 is None:
            return CycloNumber.zero(self.value_level)
        L = self.value_level
        return CycloNumber.zeta(L, int((a1 + a2) * L)) * (int(P.norm()) ** (self.k - 1))

    def q_expansion(self, B: int) -> list[tuple[OIdeal, CycloNumber]]:
        return [(I, self.coefficient(I, fac)) for I, fac in self.F.ideals_up_to(B)]

    # -- constant terms -----------------------------------------------------------
    def l_factor(self) -> CycloNumber:
        """L(1-k, phi^-1 psi)."""
        return l_value_nonpositive(self.phi.inverse() * self.psi, 1 - self.k)

    def constant_term_infinity(self) -> CycloNumber:
        """2^-2 phi^-1([t_1]) L(1-k, phi^-1 psi), zero unless m_phi = O.

        With [t_1] = d_F^-1 and phi trivial the character factor is 1.
        """
        if not self.phi.modulus.is_unit():
            return CycloNumber.zero()
        return self.l_factor() * Fraction(1, 4) * self.scale

    def constant_term_at_cusp(self, c: Cusp, p: int | None = None) -> ConstantTermReport:
        k = self.k
        if k % 2:
            raise OddWeightUnsupported("constant terms at cusps need even weight")
        F = self.F
        x, y = c.x, c.y
        mpsi = self.psi.modulus
        if not self.psi.is_trivial() and not mpsi.contains(y):
            rep = ConstantTermReport(c, CycloNumber.zero(), "vanishing")
            return rep
        eta = self.phi * self.psi.inverse()  # phi psi^-1
        eta_p = eta.primitive()
        mphi = self.phi.modulus
        # rational prefactor N(d_F)^(-k/2) / 4 * (N(m_psi)/N(m_eta))^k
        pref = Fraction(1, F.disc ** (k // 2) * 4) * (Fraction(mpsi.norm()) / Fraction(eta_p.modulus.norm())) ** k
        val = gauss_sum(eta_p) / gauss_sum(self.psi.inverse())
        # sgn(-y)^q phi(-y m_psi^-1) = phi_f(-y / g_psi)
        val = val * self._phi_sign_factor(-y)
        # sgn(-x)^r psi^-1(-x) = conj(psi)_f(-x)
        val = val * self._psi_sign_factor(-x)
        # Euler factors at q | m_phi m_psi, q not dividing m_eta
        for q in (mphi * mpsi).factor():
            if not q.coprime_to(eta_p.modulus):
                continue
            val = val * (1 - eta_p.value(q) * Fraction(q.norm()) ** (-k))
        val = val * self.l_factor() * pref * self.scale
        rep = ConstantTermReport(c, val, "formula")
        if p is not None and not val.is_zero():
            rep.valuation = valuation_at_p(val, p)
        return rep

    def _phi_sign_factor(self, my: FieldElement) -> CycloNumber:
        phi = self.phi
        if my.is_zero():
            return CycloNumber.one() if phi.is_trivial() else CycloNumber.zero()
        if phi.is_trivial():
            return CycloNumber.one()
        g = self.F.tp_generator(self.psi.modulus)
        beta = my / g
        if not beta.is_integral():
            return CycloNumber.zero()
        z = phi.modulus.reduce(beta)
        if not phi.group._is_unit(z):
            return CycloNumber.zero()
        return phi.finite_value(z)

    def _psi_sign_factor(self, mx: FieldElement) -> CycloNumber:
        psi = self.psi
        if psi.is_trivial():
            return CycloNumber.one()
        z = psi.modulus.reduce(mx)
        if not psi.group._is_unit(z):
            return CycloNumber.zero()
        return psi.inverse().finite_value(z)

    def constant_terms(self, p: int | None = None) -> list[ConstantTermReport]:
        return [self.constant_term_at_cusp(c, p) for c in self.F.cusp_representatives(self.level)]

    # -- Dirichlet series ------------------------------------------------------------
    def dirichlet_factorization_check(self, s: int, terms: int) -> float:
        """|sum_{N(m) <= X} C(m) N(m)^-s - (L_phi * L_psi(. - k + 1))_{<= X}(s)|.

        The left side sums divisor-sum coefficients ideal by ideal; the right
        side is the Dirichlet convolution of the two partial L-series,
        truncated at the same X, from coefficients counted by norm.
        """
        if terms <= 0:
            return 0.0
        lhs = 0j
        for I, fac in self.F.ideals_up_to(terms):
            lhs += self.coefficient(I, fac).embed() * float(I.norm()) ** (-s)
        a = direct_coefficients(self.phi, terms)
        b = direct_coefficients(self.psi, terms)
        n = np.arange(terms + 1, dtype=float)
        b = b * n ** (self.k - 1)
        conv = np.zeros(terms + 1, dtype=complex)
        for i in range(1, terms + 1):
            if a[i] == 0:
                continue
            conv[i::i] += a[i] * b[1 : terms // i + 1]
        rhs = complex(np.sum(conv[1:] * n[1:] ** (-float(s)))) * self.scale.embed()
        return float(abs(lhs - rhs))


def hecke_coefficient_from_primes(fac: dict, prime_values, nebentypus) -> CycloNumber:
    """Coefficient of a normalized eigenform at prod P^e from prime data.

    a(P^(e+1)) = a(P) a(P^e) - nebentypus(P) a(P^(e-1)).
    """
    out = None
    for P, e in fac.items():
        ap = prime_values(P)
        chi = nebentypus(P)
        prev, cur = CycloNumber.one(), ap
        for _ in range(e - 1):
            prev, cur = cur, ap * cur - chi * prev
        out = cur if out is None else out * cur
    return CycloNumber.one() if out is None else out


def eis_coefficient(E: EisensteinSeries, m: OIdeal) -> CycloNumber:
    return E.coefficient(m)


def hecke_eigenvalues(E: EisensteinSeries, B: int) -> dict:
    return E.hecke_eigenvalues(B)


def constant_term_infinity(E: EisensteinSeries) -> CycloNumber:
    return E.constant_term_infinity()


def constant_term_at_cusp(E: EisensteinSeries, c: Cusp, p: int | None = None) -> ConstantTermReport:
    return E.constant_term_at_cusp(c, p)


def dirichlet_factorization_check(E: EisensteinSeries, s: int, terms: int) -> float:
    return E.dirichlet_factorization_check(s, terms)
