from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eiscong.errors import LevelNotCoprime, NarrowClassNumberNotOne, NotSquarefree, ZeroIdeal
from eiscong.quadfield import (
    cusp_representatives,
    factor_rational_prime,
    ideal_norm,
    make_field,
    primes_up_to,
)

SETTINGS = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_q2_constants(F2):
    assert F2.disc == 8
    assert F2.fund_unit == F2.element(1, 1)
    assert F2.fund_unit.norm() == -1
    assert F2.tp_unit == F2.element(3, 2)
    assert all(x > 0 for x in F2.tp_unit.embeddings())
    # different_gen^2 generates (disc)
    assert F2.principal(F2.different_gen ** 2) == F2.principal(F2.disc)


def _smallest_unit_pell(d):
    # exhaustive search for the smallest unit > 1 in O_F, d = 1 mod 4
    best = None
    for y in range(1, 50):
        for target in (-4, 4):
            x2 = d * y * y + target
            if x2 >= 0 and isqrt(x2) ** 2 == x2:
                x = isqrt(x2)
                val = (x + y * d ** 0.5) / 2
                if best is None or val < best[0]:
                    best = (val, x, y)
        if best:
            return best


def test_q5_unit(F5):
    val, x, y = _smallest_unit_pell(5)
    assert (x, y) == (1, 1)
    # (1 + sqrt 5)/2 is the basis element w
    assert F5.fund_unit == F5.w
    assert F5.disc == 5
    assert F5.principal(F5.different_gen ** 2) == F5.principal(5)


def test_not_squarefree():
    with pytest.raises(NotSquarefree):
        make_field(4)
    with pytest.raises(NotSquarefree):
        make_field(1)


def test_narrow_class_number_checked():
    with pytest.raises(NarrowClassNumberNotOne):
        make_field(3)


def test_ideal_norm_examples(F2):
    assert ideal_norm(F2.principal(5)) == 25
    assert ideal_norm(F2.unit_ideal()) == 1
    assert ideal_norm(F2.principal(F2.w)) == 2
    with pytest.raises(ZeroIdeal):
        F2.principal(0)


def test_fractional_ideals(F2):
    d = F2.different()
    assert d.norm() == 8
    t1 = F2.t1()
    assert (t1 * d) == F2.unit_ideal()
    assert t1.norm() == Fraction(1, 8)
    assert str(F2) == "QF(d=2)"
    assert str(F2.principal(5)) == "[[5,0],[0,5]]/1"
    assert F2.parse_ideal(str(t1)) == t1


def _squares_mod(p):
    return {x * x % p for x in range(p)}


def test_factor_rational_prime_examples(F2):
    # 2 is a non-residue mod 5, a residue mod 7 (3^2 = 9 = 2)
    assert 2 not in _squares_mod(5)
    assert {x for x in range(7) if x * x % 7 == 2} == {3, 4}
    r5 = factor_rational_prime(F2, 5)
    assert r5["type"] == "inert" and [P.norm() for P in r5["primes"]] == [25]
    r2 = factor_rational_prime(F2, 2)
    assert r2["type"] == "ramified"
    (P,) = r2["primes"]
    assert P ** 2 == F2.principal(2) and P == F2.principal(F2.w)
    r7 = factor_rational_prime(F2, 7)
    assert r7["type"] == "split" and [P.norm() for P in r7["primes"]] == [7, 7]
    assert r7["primes"][0] * r7["primes"][1] == F2.principal(7)


@pytest.mark.property
@pytest.mark.parametrize("d", [2, 5])
def test_residue_degrees(d):
    F = make_field(d)
    for p in range(3, 101):
        if any(p % q == 0 for q in range(2, p)):
            continue
        info = factor_rational_prime(F, p)
        if info["type"] == "ramified":
            continue
        total = sum(info["residue_degrees"]) if info["type"] == "inert" else len(info["primes"])
        assert total == 2, p
        assert all(P.norm() == p ** deg for P, deg in zip(info["primes"], info["residue_degrees"]))


def test_primes_up_to_examples(F2):
    ps = primes_up_to(F2, 3)
    assert len(ps) == 1 and ps[0].norm() == 2
    assert primes_up_to(F2, 1) == []
    ps30 = primes_up_to(F2, 30)
    assert sum(1 for P in ps30 if P.norm() == 25) == 1
    norms = [P.norm() for P in ps30]
    assert norms == sorted(norms)


def test_cusps_unit_level(F2):
    cs = cusp_representatives(F2, F2.unit_ideal())
    assert len(cs) == 1 and cs[0].y.is_zero()


def test_cusps_level5(F2):
    cs = cusp_representatives(F2, F2.principal(5))
    # 2 cusps with y in (5) and 2 with y a unit mod 5: (O/5)^x has order 24 and
    # the image of {+-1} x <eps_0> has order 12
    assert len(cs) == 4
    labels = [c.label for c in cs]
    assert "inf" in labels and "0" in labels
    for c in cs:
        (x, b), (y, dd) = c.alpha
        assert x * dd - b * y == 1
        assert all(e.is_integral() for e in (x, b, y, dd))
    assert [c.label for c in cusp_representatives(F2, F2.principal(5))] == labels


def test_cusps_level_not_coprime(F2):
    with pytest.raises(LevelNotCoprime):
        cusp_representatives(F2, F2.principal(2))


@pytest.mark.property
def test_tp_unit_minus_one_norm(F2):
    assert (F2.tp_unit - 1).norm() == -4
    assert F2.tp_unit - 1 == F2.element(2, 2)


@pytest.mark.property
@pytest.mark.parametrize("d", [2, 5])
def test_tp_generators_up_to_500(d):
    F = make_field(d)
    for I, _ in F.ideals_up_to(500):
        g = F.tp_generator(I)
        assert g.is_totally_positive()
        assert F.principal(g) == I


@pytest.fixture(scope="module")
def ideal_pool():
    F = make_field(2)
    return F, [I for I, _ in F.ideals_up_to(400)]


@pytest.mark.property
@settings(max_examples=1000, **SETTINGS)
@given(st.data())
def test_norm_multiplicative(ideal_pool, data):
    F, pool = ideal_pool
    I = data.draw(st.sampled_from(pool))
    J = data.draw(st.sampled_from(pool))
    inv = data.draw(st.booleans())
    if inv:
        J = J.inverse()
    assert ideal_norm(I * J) == ideal_norm(I) * ideal_norm(J)


@pytest.mark.property
@settings(max_examples=200, **SETTINGS)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_element_norm_trace(a, b):
    F = make_field(5)
    x = F.element(a, b)
    e1, e2 = x.embeddings()
    assert abs(float(x.norm()) - e1 * e2) < 1e-6 * max(1, abs(e1 * e2))
    assert abs(float(x.trace()) - (e1 + e2)) < 1e-9 * max(1, abs(e1) + abs(e2))
    if a or b:
        s = x.signs()
        assert s == tuple(1 if e > 0 else -1 for e in (e1, e2))
