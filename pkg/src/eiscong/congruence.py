"""Mod-p checks: C-constant, congruence module order, Fourier-coefficient
congruences against eigenform data, and the criterion conditions."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .cyclo import CycloNumber, ResidueMap, lcm_levels, reduce_mod_p, valuation_at_p
from .eisenstein import EisensteinSeries, hecke_coefficient_from_primes
from .errors import (
    AllConstantTermsZero,
    DataMismatch,
    MissingEigenvalue,
    PreconditionError,
)
from .quadfield import Cusp, OIdeal
from .rayclass import unit_index

REPORT_SCHEMA = "eiscong.report.v1"
TORSION_NOTE = "hypothesis - user-asserted"


@dataclass
class CuspFormData:
    d: int
    level: OIdeal
    weight: int
    character: str
    eigenvalues: dict  # prime OIdeal -> CycloNumber
    provenance: dict = field(default_factory=dict)
    bound: int = 0

    def __eq__(self, other):
        if not isinstance(other, CuspFormData):
            return NotImplemented
        return (
            self.d == other.d
            and self.level == other.level
            and self.weight == other.weight
            and self.character == other.character
            and self.eigenvalues == other.eigenvalues
            and self.provenance == other.provenance
            and self.bound == other.bound
        )

    def value_level(self) -> int:
        return lcm_levels(1, *(v.min_level().level for v in self.eigenvalues.values()))


def eisenstein_as_data(E: EisensteinSeries, B: int) -> CuspFormData:
    """The Hecke eigenvalues of E packaged like eigenform data."""
    return CuspFormData(
        d=E.F.d,
        level=E.level,
        weight=E.k,
        character=E.chi.primitive().label(),
        eigenvalues=E.hecke_eigenvalues(B),
        provenance={"source": f"eisenstein series {E!r}"},
        bound=B,
    )


def _check_p(E: EisensteinSeries, p: int):
    F = E.F
    if (6 * F.disc) % p == 0 or int(E.level.norm()) % p == 0:
        raise PreconditionError(f"p={p} must not divide 6 * N(n) * disc")


@dataclass
class CConstant:
    cusp: Cusp
    value: CycloNumber
    valuation: float
    table: list

    def to_json(self) -> dict:
        return {
            "cusp": self.cusp.label,
            "value": str(self.value),
            "pretty": self.value.pretty(),
            "valuation": self.valuation,
            "constant_terms": [r.to_json() for r in self.table],
        }


def constant_term_level(E: EisensteinSeries, values) -> int:
    return lcm_levels(E.value_level, *(v.min_level().level for v in values if not v.is_zero()))


def c_constant(E: EisensteinSeries, p: int) -> CConstant:
    """The cusp whose constant term has least p-adic valuation, and that term."""
    _check_p(E, p)
    reports = E.constant_terms()
    nonzero = [r for r in reports if not r.value.is_zero()]
    if not nonzero:
        raise AllConstantTermsZero("every cusp constant term vanishes")
    rm = ResidueMap(p, constant_term_level(E, [r.value for r in nonzero]))
    best = None
    for r in reports:
        if r.value.is_zero():
            r.valuation = None
            continue
        r.valuation = valuation_at_p(r.value, p, rm)
        if best is None or r.valuation < best.valuation:
            best = r
    return CConstant(best.cusp, best.value, best.valuation, reports)


def congruence_module_order(E: EisensteinSeries, p: int) -> int:
    """|O/C| = (residue field size)^v_p(C)."""
    cc = c_constant(E, p)
    nonzero = [r.value for r in cc.table if not r.value.is_zero()]
    rm = ResidueMap(p, constant_term_level(E, nonzero))
    return rm.size ** cc.valuation


@dataclass
class CongruenceReport:
    p: int
    residue_map: dict
    rows: list
    verdict: bool
    first_mismatch: dict | None

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "p": self.p,
            "residue_map": self.residue_map,
            "rows": self.rows,
            "verdict": self.verdict,
            "first_mismatch": self.first_mismatch,
        }


def check_fourier_congruence(E: EisensteinSeries, f: CuspFormData, p: int, B: int, rm: ResidueMap | None = None) -> CongruenceReport:
    """Compare C(m, E) and a_m(f) modulo a prime above p for N(m) <= B."""
    F = E.F
    if f.d != F.d:
        raise DataMismatch(f"field mismatch: data over Q(sqrt {f.d})")
    if f.level != E.level:
        raise DataMismatch(f"level mismatch: {f.level} vs {E.level}")
    if f.weight != E.k:
        raise DataMismatch(f"weight mismatch: {f.weight} vs {E.k}")
    if f.character != E.chi.primitive().label():
        raise DataMismatch(f"character mismatch: {f.character} vs {E.chi.primitive().label()}")
    _check_p(E, p)
    primes = F.primes_up_to(B)
    for P in primes:
        if P not in f.eigenvalues:
            raise MissingEigenvalue(f"no eigenvalue for the prime {P} (norm {P.norm()})")
    if rm is None:
        rm = ResidueMap(p, lcm_levels(E.value_level, f.value_level()))
    e_prime = {P: E.eigenvalue(P) for P in primes}
    rows = []
    first = None
    for I, fac in F.ideals_up_to(B):
        ce = hecke_coefficient_from_primes(fac, e_prime.__getitem__, E.nebentypus_value)
        cf = hecke_coefficient_from_primes(fac, f.eigenvalues.__getitem__, E.nebentypus_value)
        re_, rf = reduce_mod_p(ce, rm), reduce_mod_p(cf, rm)
        ok = re_ == rf
        row = {"ideal": I.label(), "norm": int(I.norm()), "eisenstein": str(re_), "form": str(rf), "match": ok}
        rows.append(row)
        if not ok and first is None:
            first = row
    return CongruenceReport(p, rm.describe(), rows, first is None, first)


def _norm_tp_unit_minus_one(E: EisensteinSeries) -> int:
    return int((E.F.tp_unit - 1).norm())


def criterion_report(E: EisensteinSeries, p: int, f: CuspFormData | None = None, mu_zero: bool | None = None) -> dict:
    """Evaluate the desk-computable conditions of the congruence criterion."""
    F = E.F
    n = E.level
    Nn = int(n.norm())
    rows = []

    ok = gcd(p, 6 * Nn) == 1
    rows.append({"id": "p_coprime_6n", "condition": "p does not divide 6n", "status": "pass" if ok else "fail",
                 "witness": {"p": p, "6N(n)": 6 * Nn}})

    j0 = unit_index(F, n)
    rows.append({"id": "i_unit_index", "condition": "p does not divide #(O_+^x / O_{F,n}^{x2})",
                 "status": "pass" if j0 % p else "fail", "witness": {"unit_index": j0}})

    primes_n = list(n.factor().items())
    n_prime = len(primes_n) == 1 and primes_n[0][1] == 1
    coprime = n.coprime_to(F.principal(6 * F.disc))
    neps = _norm_tp_unit_minus_one(E)
    ok = n_prime and coprime and neps % p != 0
    rows.append({"id": "ii_unit_norm", "condition": "n prime, prime to 6 disc, p does not divide N(eps_+ - 1)",
                 "status": "pass" if ok else "fail",
                 "witness": {"n_prime": n_prime, "coprime_to_6disc": coprime, "N(eps_+ - 1)": neps,
                             "eps_+": str(F.tp_unit)}})

    # (iii): some q | n with C(q, E) != N(q) mod the prime
    rm = ResidueMap(p, E.value_level)
    wit = []
    found = False
    for q, _ in primes_n:
        c = E.coefficient(q)
        Nq = int(q.norm())
        same = reduce_mod_p(c, rm) == reduce_mod_p(CycloNumber.rational(Nq), rm)
        wit.append({"q": q.label(), "C(q,E)": c.pretty(), "N(q)": Nq,
                    "computation": f"{c.pretty()} {'==' if same else '!='} {Nq} mod {p}"})
        found = found or not same
    row = {"id": "iii_eigenvalue_vs_norm", "condition": "exists q | n with C(q,E) != N(q) mod p",
           "status": "pass" if found else "fail", "witness": wit}
    if not found:
        row["flag"] = "discrepancy: the worked example asserts this condition, the literal computation contradicts it"
    rows.append(row)

    try:
        cc = c_constant(E, p)
        v = cc.valuation
        ok = 0 < v
        rows.append({"id": "iv_c_constant", "condition": "(C) != 0, O, i.e. 0 < v_p(C) < infinity",
                     "status": "pass" if ok else "fail",
                     "witness": {"cusp": cc.cusp.label, "C": cc.value.pretty(), "v_p(C)": v}})
    except AllConstantTermsZero:
        rows.append({"id": "iv_c_constant", "condition": "(C) != 0, O", "status": "fail",
                     "witness": {"C": "undefined: all constant terms vanish"}})
    except PreconditionError as exc:
        rows.append({"id": "iv_c_constant", "condition": "(C) != 0, O", "status": "not-computable",
                     "witness": {"reason": str(exc)}})

    report = {
        "schema": REPORT_SCHEMA,
        "field": str(F),
        "level": n.label(),
        "p": p,
        "series": repr(E),
        "t1": "d_F^-1",
        "rows": rows,
        "mu_invariants_zero": "not supplied" if mu_zero is None else bool(mu_zero),
        "torsion_free_hypotheses": TORSION_NOTE,
    }
    if f is not None:
        rep = check_fourier_congruence(E, f, p, f.bound or 100)
        report["fourier_congruence"] = {"verdict": rep.verdict, "first_mismatch": rep.first_mismatch}
    return report
