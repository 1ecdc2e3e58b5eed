import json
import random
from fractions import Fraction

import pytest

from eiscong.congruence import (
    CuspFormData,
    c_constant,
    check_fourier_congruence,
    congruence_module_order,
    criterion_report,
    eisenstein_as_data,
)
from eiscong.cyclo import CycloNumber, ResidueMap, lcm_levels
from eiscong.errors import DataMismatch, MissingEigenvalue, PreconditionError, RamifiedPrime
from eiscong.store import load_fixture

PRIMES = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]


def _valid_primes(E, primes=PRIMES):
    out = []
    for p in primes:
        if (6 * E.F.disc * int(E.level.norm())) % p == 0 or E.value_level % p == 0:
            continue
        out.append(p)
    return out


def test_c_constant_example(E):
    cc = c_constant(E, 7)
    assert cc.cusp.label == "0"
    assert cc.value == Fraction(7, 5000)
    assert cc.valuation == 1
    assert len(cc.table) == 4


def test_c_constant_dual(E_dual):
    cc = c_constant(E_dual, 7)
    assert cc.cusp.label == "inf"
    assert cc.valuation == 1


def test_c_constant_precondition(E):
    for p in (2, 3, 5):
        with pytest.raises(PreconditionError):
            c_constant(E, p)


def test_congruence_module_order(E):
    assert congruence_module_order(E, 7) == 7
    assert congruence_module_order(E, 11) == 1
    assert congruence_module_order(E.scaled(7), 7) == 49


@pytest.mark.property
def test_c_constant_scaling_invariance(E, E_dual):
    rng = random.Random(11)
    for E_ in (E, E_dual):
        base = c_constant(E_, 7).valuation
        for _ in range(50):
            num = rng.choice([x for x in range(-60, 61) if x and x % 7])
            den = rng.choice([x for x in range(1, 61) if x % 7])
            assert c_constant(E_.scaled(Fraction(num, den)), 7).valuation == base


@pytest.mark.property
def test_self_congruence(family2):
    for E_ in family2:
        data = eisenstein_as_data(E_, 60)
        for p in _valid_primes(E_)[:3]:
            rep = check_fourier_congruence(E_, data, p, 60)
            assert rep.verdict and rep.first_mismatch is None
            assert all(r["match"] for r in rep.rows)


def test_self_congruence_example(E):
    rep = check_fourier_congruence(E, eisenstein_as_data(E, 100), 7, 100)
    assert rep.verdict


def test_fixture_congruence_p7(E):
    f = load_fixture()
    rep = check_fourier_congruence(E, f, 7, 100)
    assert rep.verdict
    assert rep.first_mismatch is None
    norms = {r["norm"] for r in rep.rows}
    assert max(norms) <= 100 and 25 in norms


def test_fixture_congruence_p11_fails(E):
    rep = check_fourier_congruence(E, load_fixture(), 11, 100)
    assert not rep.verdict
    assert rep.first_mismatch is not None
    assert rep.first_mismatch["norm"] == 2
    assert rep.to_json()["schema"] == "eiscong.report.v1"
    json.dumps(rep.to_json())


def test_data_mismatch(E, E_dual):
    f = load_fixture()
    for bad in (
        CuspFormData(5, f.level, f.weight, f.character, f.eigenvalues, f.provenance, f.bound),
        CuspFormData(f.d, E.F.principal(7), f.weight, f.character, f.eigenvalues, f.provenance, f.bound),
        CuspFormData(f.d, f.level, f.weight, "F2-m[[1,0],[0,1]]/1-e-r00", f.eigenvalues, f.provenance, f.bound),
    ):
        with pytest.raises(DataMismatch):
            check_fourier_congruence(E, bad, 7, 100)
    g = CuspFormData(f.d, f.level, 4, f.character, f.eigenvalues, f.provenance, f.bound)
    with pytest.raises(DataMismatch):
        check_fourier_congruence(E, g, 7, 100)


def test_missing_eigenvalue(E):
    f = load_fixture()
    with pytest.raises(MissingEigenvalue):
        check_fourier_congruence(E, f, 7, 200)
    trimmed = dict(f.eigenvalues)
    trimmed.pop(next(iter(trimmed)))
    g = CuspFormData(f.d, f.level, f.weight, f.character, trimmed, f.provenance, f.bound)
    with pytest.raises(MissingEigenvalue):
        check_fourier_congruence(E, g, 7, 100)


def test_p_dividing_level_rejected(E):
    with pytest.raises(PreconditionError):
        check_fourier_congruence(E, eisenstein_as_data(E, 30), 5, 30)


def _perturbed(E_, B, rng, p):
    data = eisenstein_as_data(E_, B)
    eig = dict(data.eigenvalues)
    P = rng.choice(sorted(eig, key=lambda I: I.key()))
    shift = rng.choice([p * rng.randint(1, 5), 1, 2])
    eig[P] = eig[P] + shift
    return CuspFormData(data.d, data.level, data.weight, data.character, eig, data.provenance, B)


@pytest.mark.property
def test_residue_map_independence(family2):
    rng = random.Random(2024)
    configs = 0
    for E_ in rng.sample(family2, len(family2)):
        for p in _valid_primes(E_):
            L = E_.value_level
            try:
                rm = ResidueMap(p, L)
            except RamifiedPrime:
                continue
            if len(rm.all_factors) < 2:
                continue
            data = _perturbed(E_, 40, rng, p)
            verdicts = {check_fourier_congruence(E_, data, p, 40, rm.with_factor(i)).verdict
                        for i in range(len(rm.all_factors))}
            assert len(verdicts) == 1
            configs += 1
            break
        if configs >= 20:
            break
    assert configs >= 20


def test_fixture_verdict_depends_on_prime_above_7(E):
    # the fixture eigenvalues generate Q(sqrt -6), in which 7 splits; the
    # congruence holds modulo one of the two primes only
    f = load_fixture()
    rm = ResidueMap(7, lcm_levels(E.value_level, f.value_level()))
    verdicts = [check_fourier_congruence(E, f, 7, 100, rm.with_factor(i)).verdict for i in range(len(rm.all_factors))]
    assert verdicts[0] and not all(verdicts)
    for p in (11, 13):
        rm = ResidueMap(p, 24)
        assert not any(check_fourier_congruence(E, f, p, 100, rm.with_factor(i)).verdict
                       for i in range(len(rm.all_factors)))


def test_criterion_report_example(E):
    rep = criterion_report(E, 7)
    rows = {r["id"]: r for r in rep["rows"]}
    assert list(rows) == ["p_coprime_6n", "i_unit_index", "ii_unit_norm", "iii_eigenvalue_vs_norm", "iv_c_constant"]
    assert rows["p_coprime_6n"]["status"] == "pass"
    assert rows["i_unit_index"]["status"] == "pass" and rows["i_unit_index"]["witness"]["unit_index"] == 6
    assert rows["ii_unit_norm"]["status"] == "pass"
    assert rows["ii_unit_norm"]["witness"]["N(eps_+ - 1)"] == -4
    iii = rows["iii_eigenvalue_vs_norm"]
    assert iii["status"] == "fail"
    assert iii["witness"][0]["computation"] == "25 == 25 mod 7"
    assert "discrepancy" in iii["flag"]
    assert rows["iv_c_constant"]["status"] == "pass"
    assert rows["iv_c_constant"]["witness"]["v_p(C)"] == 1
    assert rep["torsion_free_hypotheses"] == "hypothesis - user-asserted"
    assert rep["mu_invariants_zero"] == "not supplied"
    assert rep["t1"] == "d_F^-1"
    json.dumps(rep)


def test_criterion_report_with_data(E):
    rep = criterion_report(E, 7, f=load_fixture(), mu_zero=True)
    assert rep["fourier_congruence"]["verdict"] is True
    assert rep["mu_invariants_zero"] is True


def test_criterion_report_bad_p(E):
    rep = criterion_report(E, 5)
    rows = {r["id"]: r for r in rep["rows"]}
    assert rows["p_coprime_6n"]["status"] == "fail"
    assert rows["iv_c_constant"]["status"] == "not-computable"


def test_cusp_form_data_value_level():
    f = load_fixture()
    assert f.value_level() == 24
    assert all(isinstance(v, CycloNumber) for v in f.eigenvalues.values())
