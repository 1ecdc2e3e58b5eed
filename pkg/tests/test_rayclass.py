import cmath
import random
from itertools import product

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eiscong.cyclo import CycloNumber
from eiscong.errors import NotPrimitive, ZeroModulus
from eiscong.quadfield import make_field
from eiscong.rayclass import (
    all_primitive_characters,
    characters_of_conductor,
    chi_eval,
    conductor,
    gauss_generator,
    gauss_sum,
    named_character,
    ray_class_group,
    unit_index,
)

SETTINGS = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])


def brute_ray_class_order(F, mod: int) -> int:
    """|(O/mod)^x x {+-1}^2 / <-1, eps_0>| by enumeration."""
    t, n = F.t, F.n

    def mul(x, y):
        a, b = x
        c, e = y
        return ((a * c + b * e * n) % mod, (a * e + b * c + b * e * t) % mod)

    elems = [(a, b) for a in range(mod) for b in range(mod)]
    one = (1 % mod, 0)
    units = [x for x in elems if any(mul(x, y) == one for y in elems)]
    e0 = F.fund_unit.coords()
    gens = [(((-1) % mod, 0), (-1, -1)), ((e0[0] % mod, e0[1] % mod), F.fund_unit.signs())]
    H = {(one, (1, 1))}
    while True:
        new = H | {(mul(h[0], g[0]), (h[1][0] * g[1][0], h[1][1] * g[1][1])) for h in H for g in gens}
        if new == H:
            break
        H = new
    return 4 * len(units) // len(H)


def brute_unit_index(F, mod: int) -> int:
    # smallest k with eps_0^k = +-1 mod n; N(eps_0) = -1 so the index is k
    cur = F.element(1)
    k = 0
    while True:
        k += 1
        cur = cur * F.fund_unit
        a, b = cur.coords()
        if b % mod == 0 and (a % mod in (1 % mod, (-1) % mod)):
            return k


def test_trivial_group(F2):
    assert ray_class_group(F2, F2.unit_ideal()).order == 1


@pytest.mark.parametrize("d,m", [(2, 5), (5, 2), (2, 25), (5, 11)])
def test_group_order_matches_brute_force(d, m):
    F = make_field(d)
    G = ray_class_group(F, F.principal(m))
    assert G.order == brute_ray_class_order(F, m)
    prod = 1
    for dv in G.invariants:
        prod *= dv
    assert prod == G.order


def test_group_order_pins(F2, F5):
    assert ray_class_group(F2, F2.principal(5)).order == 4
    assert ray_class_group(F5, F5.principal(2)).order == 1


def test_chi5_index_two_kernel(F2, chi5):
    G = ray_class_group(F2, F2.principal(5))
    classes = G.class_elements()
    kernel = [g for _, g in classes if chi5.angle_element(g) == 0]
    assert len(kernel) * 2 == len(classes)
    assert chi5.order == 2 and chi5.is_totally_even()


def test_zero_modulus(F2):
    with pytest.raises(ZeroModulus):
        ray_class_group(F2, None)


@pytest.mark.property
def test_generators_dlog_basis(F2):
    for m in (5, 25, 7, 12):
        G = ray_class_group(F2, F2.principal(m))
        for i, g in enumerate(G.generators):
            e = [0] * len(G.invariants)
            e[i] = 1 % G.invariants[i]
            assert G.dlog(g) == tuple(e)


@pytest.fixture(scope="module")
def coprime_pool():
    F = make_field(2)
    m = F.principal(35)
    G = ray_class_group(F, m)
    pool = [I for I, _ in F.ideals_up_to(600) if I.coprime_to(m)]
    return F, G, pool


@pytest.mark.property
@settings(max_examples=500, **SETTINGS)
@given(st.data())
def test_dlog_homomorphism(coprime_pool, data):
    F, G, pool = coprime_pool
    I = data.draw(st.sampled_from(pool))
    J = data.draw(st.sampled_from(pool))
    lhs = G.dlog(I * J)
    rhs = tuple((a + b) % dv for a, b, dv in zip(G.dlog(I), G.dlog(J), G.invariants))
    assert lhs == rhs


@pytest.mark.property
@settings(max_examples=500, **SETTINGS)
@given(st.data())
def test_chi_eval_multiplicative(coprime_pool, data):
    F, G, pool = coprime_pool
    chi = data.draw(st.sampled_from(G.characters()))
    I = data.draw(st.sampled_from(pool))
    J = data.draw(st.sampled_from(pool))
    assert chi_eval(chi, I * J) == chi_eval(chi, I) * chi_eval(chi, J)


@pytest.mark.property
def test_chi_on_alpha_congruent_to_one():
    rng = random.Random(1)
    F = make_field(2)
    for m in (5, 7, 9):
        M = F.principal(m)
        for chi in ray_class_group(F, M).characters():
            for _ in range(100 // 3 + 1):
                x = F.element(rng.randint(-30, 30), rng.randint(-30, 30))
                alpha = 1 + x * m
                if alpha.is_zero():
                    continue
                s = alpha.signs()
                expected = (s[0] if chi.sign[0] else 1) * (s[1] if chi.sign[1] else 1)
                assert chi.value(F.principal(alpha)) == expected


def test_chi_eval_examples(F2, chi5, triv2):
    assert chi_eval(triv2, F2.principal(7)) == 1
    assert chi_eval(chi5, F2.principal(5)).is_zero()
    assert chi_eval(chi5, F2.principal(F2.w)) == -1


def test_chi5_is_quadratic_residue_symbol(F2, chi5):
    # chi5(P) = g^12 mod 5 for any generator g of P: the quadratic symbol in F_25
    M = F2.principal(5)

    def pow_mod(g, e):
        out = M.reduce(F2.element(1))
        base = M.reduce(g)
        one = F2.element(1)
        acc = one
        b = F2.element(*base)
        while e:
            if e & 1:
                acc = F2.element(*M.reduce(acc * b))
            b = F2.element(*M.reduce(b * b))
            e >>= 1
        return M.reduce(acc)

    for P in F2.primes_up_to(300):
        if not P.coprime_to(M):
            continue
        g = F2.tp_generator(P)
        r = pow_mod(g, 12)
        expected = 1 if r == M.reduce(F2.element(1)) else -1
        assert chi5.value(P) == expected


def test_conductor_examples(F2, chi5):
    G = ray_class_group(F2, F2.principal(5))
    assert conductor(G.trivial_character()) == F2.unit_ideal()
    assert conductor(chi5) == F2.principal(5)
    lifted = chi5.extend_to(F2.principal(25))
    assert lifted.modulus == F2.principal(25)
    assert conductor(lifted) == F2.principal(5)
    prim = lifted.primitive()
    assert prim.primitive() is prim
    assert prim == chi5


@pytest.mark.property
@pytest.mark.parametrize("d", [2, 5])
def test_conductor_divides_modulus_and_sign(d):
    F = make_field(d)
    for m in (12, 25, 35):
        for chi in ray_class_group(F, F.principal(m)).characters():
            assert chi.conductor.divides(chi.modulus)
            assert chi.primitive().sign == chi.sign
            assert chi.is_totally_even() == (chi.sign == (0, 0))


@pytest.mark.property
@pytest.mark.parametrize("d", [2, 5])
def test_orthogonality(d):
    F = make_field(d)
    for I, _ in F.ideals_up_to(200):
        G = ray_class_group(F, I)
        classes = G.class_elements()
        assert len(classes) == G.order
        for chi in G.characters():
            if chi.is_trivial():
                continue
            s = CycloNumber.zero()
            for _, g in classes:
                k = chi.angle_element(g) * chi.order
                s = s + CycloNumber.zeta(chi.order, int(k))
            assert s.is_zero(), chi.label()


def test_gauss_sum_trivial(triv2):
    assert gauss_sum(triv2) == 1


def test_gauss_sum_chi5(F2, chi5):
    tau = gauss_sum(chi5)
    assert tau == 5
    # direct numeric sum with the quadratic symbol z^12 in F_25
    M = F2.principal(5)
    g = gauss_generator(chi5)
    one = M.reduce(F2.element(1))
    total = 0j
    for a, b in product(range(5), repeat=2):
        z = F2.element(a, b)
        if (a, b) == (0, 0):
            continue
        acc = F2.element(1)
        for _ in range(12):
            acc = F2.element(*M.reduce(acc * z))
        sym = 1 if M.reduce(acc) == one else -1
        total += sym * cmath.exp(2j * cmath.pi * float((z / g).trace()))
    assert abs(total - 5) < 1e-9


def test_gauss_sum_needs_primitive(F2, chi5):
    with pytest.raises(NotPrimitive):
        gauss_sum(chi5.extend_to(F2.principal(25)))


@pytest.mark.property
def test_gauss_sum_identities_q2(F2):
    chars = [c for c in all_primitive_characters(F2, 200) if not c.is_trivial()]
    assert len(chars) > 100
    for psi in chars:
        N = int(psi.modulus.norm())
        t = gauss_sum(psi)
        assert abs(abs(t.embed()) ** 2 - N) < 1e-10 * N
        minus_one = psi.finite_value(psi.modulus.reduce(F2.element(-1)))
        assert t * gauss_sum(psi.inverse()) == minus_one * N


def test_gauss_sum_norm_q5(F5):
    for psi in all_primitive_characters(F5, 200):
        if psi.is_trivial():
            continue
        assert abs(abs(gauss_sum(psi).embed()) ** 2 - float(psi.modulus.norm())) < 1e-8


@pytest.mark.parametrize("d,m,expected", [(2, 1, 1), (2, 5, 6), (5, 11, 10)])
def test_unit_index(d, m, expected):
    F = make_field(d)
    assert unit_index(F, F.principal(m)) == expected
    if m > 1:
        assert brute_unit_index(F, m) == expected


@pytest.mark.property
def test_sign_invariance_for_even_characters():
    rng = random.Random(7)
    F = make_field(2)
    evens = [c for c in all_primitive_characters(F, 100) if c.is_totally_even()]
    units = [F.fund_unit, -F.fund_unit, F.tp_unit, F.element(-1)]
    for _ in range(200):
        chi = rng.choice(evens)
        alpha = F.element(rng.randint(-40, 40), rng.randint(-40, 40))
        if alpha.is_zero() or not F.principal(alpha).coprime_to(chi.modulus):
            continue
        beta = alpha * rng.choice(units)
        # same ideal, so values agree; and the finite part is unit-invariant too
        assert chi.value(F.principal(alpha)) == chi.value(F.principal(beta))
        fa = chi.finite_value(chi.modulus.reduce(alpha))
        fb = chi.finite_value(chi.modulus.reduce(beta))
        assert fa == fb


def test_labels_stable(F2, chi5):
    assert chi5.label() == "F2-m[[5,0],[0,5]]/1-e2-r00"
    again = named_character(make_field(2), "chi5")
    assert again.label() == chi5.label()
    assert [c.label() for c in characters_of_conductor(F2, F2.principal(5))] == [
        "F2-m[[5,0],[0,5]]/1-e1-r11",
        "F2-m[[5,0],[0,5]]/1-e2-r00",
        "F2-m[[5,0],[0,5]]/1-e3-r11",
    ]
