"""Critical values of Eisenstein series twisted by a finite-order character.

For E = E_2(phi, psi) of level n and a character theta with conductor prime
to n, set eta = theta phi^-1 psi^-1.  Then

    D(s, E, eta) = sum C(m, E) eta(m) N(m)^-s
                 = L^S(s, theta psi^-1) L^S(s - 1, theta phi^-1),

where S is the set of primes dividing m_theta n and L^S drops the Euler
factors at S.  The exact side below is an algebraic expression in Gauss
sums and L-values at s = 0; the numeric side evaluates
-tau(eta^-1) D(1, E, eta) / (2 pi)^2 with the functional-equation oracle.

The closed form in primitive L-values (paper_value) does not see the
Euler factors at S that D loses.  The corrected value multiplies in

    prod_{q in S} (1 - theta psi^-1(q) N(q)^-1) (1 - theta phi^-1(q))

with both characters primitive, so only primes of n off their conductors
contribute.  The numeric side agrees with the corrected value.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cyclo import CycloNumber, parse_cyclo, sqrt_disc, valuation_at_p
from .eisenstein import EisensteinSeries
from .errors import ConductorNotCoprime, ParityMismatch
from .lvalues import l_value_continued, l_value_nonpositive
from .rayclass import RayCharacter, gauss_sum


@dataclass
class SpecialValueRecord:
    E: EisensteinSeries
    theta: RayCharacter
    eta: RayCharacter
    value: CycloNumber
    paper_value: CycloNumber
    euler_correction: CycloNumber
    residual: float | None = None
    nonvanishing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "phi": self.E.phi.label(),
            "psi": self.E.psi.label(),
            "theta": self.theta.label(),
            "eta": self.eta.label(),
            "eta_sign": list(self.eta.sign),
            "value": str(self.value),
            "pretty": self.value.pretty(),
            "paper_value": str(self.paper_value),
            "euler_correction": str(self.euler_correction),
            "numeric": repr(complex(self.value.embed())),
            "residual": self.residual,
            "nonvanishing": {str(p): v for p, v in self.nonvanishing.items()},
        }

    @staticmethod
    def value_from_json(data: dict) -> CycloNumber:
        return parse_cyclo(data["value"])


def admissible(E: EisensteinSeries, theta: RayCharacter) -> bool:
    """theta psi^-1 and theta phi^-1 both totally odd, m_theta prime to n."""
    th = theta.primitive()
    if not th.modulus.coprime_to(E.level):
        return False
    return (th * E.psi.inverse()).is_totally_odd() and (th * E.phi.inverse()).is_totally_odd()


def _twists(E: EisensteinSeries, th: RayCharacter):
    a = (th * E.psi.inverse()).primitive()
    b = (th * E.phi.inverse()).primitive()
    return a, b


def eisenstein_special_value(E: EisensteinSeries, theta: RayCharacter, debug: bool = False) -> SpecialValueRecord:
    """Exact special value attached to (E, theta).

    With debug=True the parity condition is not enforced; the value is then
    typically 0 because one of the L-values at s = 0 vanishes.
    """
    if E.k != 2:
        raise ParityMismatch("only parallel weight 2 is supported")
    th = theta.primitive()
    n = E.level
    if not th.modulus.coprime_to(n):
        raise ConductorNotCoprime(f"conductor of theta {th.modulus} is not prime to the level {n}")
    a, b = _twists(E, th)
    if not debug and not (a.is_totally_odd() and b.is_totally_odd()):
        raise ParityMismatch(f"theta psi^-1 has sign {a.sign}, theta phi^-1 has sign {b.sign}; both must be (1, 1)")
    phi, psi = E.phi, E.psi
    chi = E.chi.primitive()
    mt = th.modulus
    num = gauss_sum(chi) * chi.value(mt) * th.value(psi.modulus)
    den = gauss_sum(psi) * psi.value(mt) * th.value(chi.modulus)
    # L(0, theta^-1 psi) is the conjugate character of a
    L1 = l_value_nonpositive(a.inverse(), 0)
    L2 = l_value_nonpositive(b, 0)
    paper_value = (num / den * L1 * L2 / (4 * sqrt_disc(E.F))).min_level()
    corr = euler_correction(E, th)
    eta = (th * chi.inverse()).primitive()
    return SpecialValueRecord(E, th, eta, (paper_value * corr).min_level(), paper_value, corr)


def euler_correction(E: EisensteinSeries, theta: RayCharacter) -> CycloNumber:
    """Ratio D(1)-closed-form / paper closed form, from the Euler factors at S."""
    th = theta.primitive()
    a, b = _twists(E, th)
    out = CycloNumber.one()
    for q in (th.modulus * E.level).factor():
        out = out * (1 - a.value(q) / int(q.norm())) * (1 - b.value(q))
    return out.min_level()


def _partial_l(chi: RayCharacter, s: int, S, terms: int) -> complex:
    """L(s, chi) with the Euler factors at the primes in S removed."""
    val, _ = l_value_continued(chi, s, terms=terms)
    for q in S:
        v = chi.value(q)
        if not v.is_zero():
            val *= 1 - complex(v.embed()) * float(q.norm()) ** (-s)
    return val


def special_value_numeric(rec: SpecialValueRecord, terms: int = 10**4) -> complex:
    E, th = rec.E, rec.theta
    a, b = _twists(E, th)
    S = list((th.modulus * E.level).factor())
    D1 = _partial_l(a, 1, S, terms) * _partial_l(b, 0, S, terms)
    tau = complex(gauss_sum(rec.eta.inverse()).embed())
    return -tau * D1 / (2 * np.pi) ** 2


def verify_special_value_numeric(rec: SpecialValueRecord, terms: int = 10**4) -> float:
    """|numeric - exact| for the record; also stored on it."""
    if terms < 10**3:
        raise ValueError("terms must be at least 1000")
    num = special_value_numeric(rec, terms)
    rec.residual = float(abs(num - complex(rec.value.embed())))
    return rec.residual


def mod_p_nonvanishing(rec: SpecialValueRecord, p: int) -> bool:
    """True iff the exact value is a unit at the chosen prime above p."""
    ok = valuation_at_p(rec.value, p) == 0
    rec.nonvanishing[p] = ok
    return ok
