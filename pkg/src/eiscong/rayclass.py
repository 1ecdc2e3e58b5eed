"""Narrow ray class groups, their characters, conductors and Gauss sums.

With h_F^+ = 1 the narrow ray class group mod m is
((O/m)^x x {+-1}^2) / image of the global units, which is what gets built
here.  Group elements are tuples (x, y, s1, s2): a residue x + y*w mod m and
two sign bits (1 meaning negative at that real place).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from .cyclo import CycloNumber
from .errors import ModulusTooLarge, NotIntegral, NotPrimitive, ZeroModulus
from .quadfield import FieldElement, OIdeal, QuadField

MAX_MODULUS_NORM = 10**5


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _mulred(t: int, n: int, m: OIdeal, u, v):
    x1, y1 = u
    x2, y2 = v
    yy = y1 * y2
    X = x1 * x2 + yy * n
    Y = x1 * y2 + x2 * y1 + yy * t
    q, Y = divmod(Y, m.c)
    return (X - q * m.b) % m.a, Y


def smith_normal_form(rows: list[list[int]], ncols: int):
    """Diagonal d and unimodular V, Vinv with (U R V) = diag(d) for some U."""
    M = [list(r) for r in rows]
    m = len(M)
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    Vinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        for r in M:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]
        Vinv[src] = [a + q * b for a, b in zip(Vinv[src], Vinv[dst])]

    diag = []
    for t in range(min(m, ncols)):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, ncols) if M[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            M[t], M[i] = M[i], M[t]
            if j != t:
                swap_cols(t, j)
            piv = M[t][t]
            done = True
            for i in range(t + 1, m):
                q = M[i][t] // piv
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, ncols):
                q = M[t][j] // piv
                if q:
                    add_col(j, t, q)
                if M[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols) if M[i][j] % piv), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        if t < m and M[t][t] < 0:
            M[t] = [-a for a in M[t]]
        diag.append(M[t][t] if t < m else 0)
    return diag, V, Vinv


class RayClassGroup:
    """Cl^+(m) with explicit generators and discrete logarithm."""

    def __init__(self, F: QuadField, m: OIdeal, max_norm: int = MAX_MODULUS_NORM):
        if m is None:
            raise ZeroModulus("modulus must be a nonzero ideal")
        if not m.is_integral():
            raise NotIntegral("modulus must be integral")
        if m.norm() > max_norm:
            raise ModulusTooLarge(f"N(m) = {m.norm()} exceeds {max_norm}")
        self.F = F
        self.modulus = m
        self._primes = list(m.factor())
        self.units = [z for z in m.residues() if self._is_unit(z)]
        self._build()

    def _is_unit(self, z) -> bool:
        e = FieldElement(self.F, z[0], z[1])
        return all(not P.contains(e) for P in self._primes)

    def mul(self, g, h):
        x = _mulred(self.F.t, self.F.n, self.modulus, g[:2], h[:2])
        return x + (g[2] ^ h[2], g[3] ^ h[3])

    def power(self, g, e: int):
        e %= self._order_bound
        out = self.identity
        base = g
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def element_of(self, alpha: FieldElement):
        """Group element attached to alpha (integral, coprime to m)."""
        x = self.modulus.reduce(alpha)
        s = alpha.signs()
        return x + (int(s[0] < 0), int(s[1] < 0))

    def _build(self):
        m = self.modulus
        one = m.reduce(FieldElement(self.F, 1))
        self.identity = one + (0, 0)
        self._order_bound = 4 * len(self.units)
        gens = []
        S = {self.identity: ()}
        relations = []
        candidates = [one + (1, 0), one + (0, 1)] + [z + (0, 0) for z in self.units]
        for g in candidates:
            if g in S:
                continue
            r = len(gens)
            k = 1
            cur = g
            while cur not in S:
                cur = self.mul(cur, g)
                k += 1
            rel = [-c for c in S[cur]] + [0] * (r - len(S[cur]))
            relations.append(rel + [k])
            newS = dict()
            power = self.identity
            for j in range(k):
                for s, vec in S.items():
                    newS[self.mul(s, power)] = tuple(vec) + (0,) * (r - len(vec)) + (j,)
                power = self.mul(power, g)
            S = newS
            gens.append(g)
        r = len(gens)
        self._raw_gens = gens
        self._raw_dlog = {k: tuple(v) + (0,) * (r - len(v)) for k, v in S.items()}
        rows = [rel + [0] * (r - len(rel)) for rel in relations]
        for u in (FieldElement(self.F, -1), self.F.fund_unit):
            rows.append(list(self._raw_dlog[self.element_of(u)]))
        diag, V, Vinv = smith_normal_form(rows, r) if r else ([], [], [])
        keep = [i for i, dv in enumerate(diag) if dv != 1]
        self.invariants = [diag[i] for i in keep]
        self._V = V
        self._keep = keep
        self._gen_elems = []
        for i in keep:
            el = self.identity
            for j, e in enumerate(Vinv[i]):
                el = self.mul(el, self.power(gens[j], e))
            self._gen_elems.append(el)
        self.order = 1
        for dv in self.invariants:
            self.order *= dv
        self.exponent = 1
        for dv in self.invariants:
            self.exponent = _lcm(self.exponent, dv)
        self._gen_ideals = None

    # -- discrete logarithm ----------------------------------------------
    def dlog_element(self, g) -> tuple[int, ...]:
        raw = self._raw_dlog[g]
        out = []
        for i, dv in zip(self._keep, self.invariants):
            out.append(sum(raw[j] * self._V[j][i] for j in range(len(raw))) % dv)
        return tuple(out)

    def dlog_alpha(self, alpha: FieldElement) -> tuple[int, ...]:
        return self.dlog_element(self.element_of(alpha))

    def dlog(self, I: OIdeal) -> tuple[int, ...]:
        """Exponent vector of the class of I (I coprime to the modulus)."""
        if not I.coprime_to(self.modulus):
            raise ValueError(f"{I} is not coprime to the modulus {self.modulus}")
        if I.is_integral():
            return self.dlog_alpha(self.F.tp_generator(I))
        num = self.dlog(I.scale(I.den))
        den = self.dlog(self.F.principal(I.den))
        return tuple((a - b) % dv for a, b, dv in zip(num, den, self.invariants))

    @property
    def generators(self) -> list[OIdeal]:
        """Ideals representing the SNF generators."""
        if self._gen_ideals is None:
            self._gen_ideals = [self.F.principal(self.lift_element(g)) for g in self._gen_elems]
        return self._gen_ideals

    def lift_element(self, g) -> FieldElement:
        """An integral alpha coprime to m whose group element is g."""
        F = self.F
        base = FieldElement(F, g[0], g[1])
        a = self.modulus.a
        want = (-1 if g[2] else 1, -1 if g[3] else 1)
        units = {(1, 1): FieldElement(F, 1), (-1, -1): FieldElement(F, -1)}
        e0 = F.fund_unit
        units[e0.signs()] = e0
        units[(-e0).signs()] = -e0
        u = units[want]
        M = 1
        while True:
            alpha = base + u * (M * a)
            if alpha.signs() == want:
                return alpha
            M *= 2

    def class_elements(self):
        """One group element per class, as (dlog vector, group element)."""
        seen = {}
        for z in self.units:
            for s in product((0, 1), repeat=2):
                g = z + s
                v = self.dlog_element(g)
                if v not in seen:
                    seen[v] = g
        return sorted(seen.items())

    def characters(self) -> list["RayCharacter"]:
        e = self.exponent
        ranges = [range(0, e, e // dv) for dv in self.invariants]
        return [RayCharacter(self, exps) for exps in product(*ranges)]

    def trivial_character(self) -> "RayCharacter":
        return RayCharacter(self, (0,) * len(self.invariants))

    def __repr__(self):
        return f"RayClassGroup({self.F}, {self.modulus}, {self.invariants})"


@lru_cache(maxsize=None)
def _group_cached(d: int, key) -> RayClassGroup:
    from .quadfield import make_field

    F = make_field(d)
    return RayClassGroup(F, OIdeal(F, *key))


def ray_class_group(F: QuadField, m: OIdeal) -> RayClassGroup:
    if m is None:
        raise ZeroModulus("modulus must be a nonzero ideal")
    if not m.is_integral():
        raise NotIntegral("modulus must be integral")
    if m.norm() > MAX_MODULUS_NORM:
        raise ModulusTooLarge(f"N(m) = {m.norm()} exceeds {MAX_MODULUS_NORM}")
    return _group_cached(F.d, m.key())


class RayCharacter:
    """A character of Cl^+(m): value zeta_e^{exponents_i} on generator i."""

    def __init__(self, group: RayClassGroup, exponents):
        self.group = group
        self.exponents = tuple(int(x) % group.exponent for x in exponents)
        e = group.exponent
        g = e
        for x in self.exponents:
            g = gcd(g, x)
        self.order = e // g
        F = group.F
        self.sign = tuple(
            int(self.angle_element(group.identity[:2] + bits) == Fraction(1, 2))
            for bits in ((1, 0), (0, 1))
        )
        self._conductor = None
        self._primitive = None

    @property
    def F(self) -> QuadField:
        return self.group.F

    @property
    def modulus(self) -> OIdeal:
        return self.group.modulus

    # -- angles: chi = exp(2 pi i * angle) ----------------------------------
    def angle_dlog(self, v) -> Fraction:
        e = self.group.exponent
        return Fraction(sum(a * b for a, b in zip(self.exponents, v)) % e, e)

    def angle_element(self, g) -> Fraction:
        return self.angle_dlog(self.group.dlog_element(g))

    def angle_residue(self, z) -> Fraction:
        """Angle of the finite part at a residue z = (x, y) in (O/m)^x."""
        return self.angle_element(tuple(z) + (0, 0))

    def angle_alpha(self, alpha: FieldElement) -> Fraction:
        return self.angle_element(self.group.element_of(alpha))

    def angle_ideal(self, I: OIdeal):
        """Angle of chi(I), or None when I is not coprime to the modulus."""
        if not I.coprime_to(self.modulus):
            return None
        if self.group.order == 1:
            return Fraction(0)
        return self.angle_dlog(self.group.dlog(I))

    def _root(self, angle: Fraction) -> CycloNumber:
        k = angle * self.order
        assert k.denominator == 1
        return CycloNumber.zeta(self.order, int(k))

    def value(self, I: OIdeal) -> CycloNumber:
        """chi(I) at the modulus of the group: zero when I is not coprime to it."""
        a = self.angle_ideal(I)
        if a is None:
            return CycloNumber.zero(self.order)
        return self._root(a)

    def finite_value(self, z) -> CycloNumber:
        return self._root(self.angle_residue(z))

    # -- structure ---------------------------------------------------------------
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def is_totally_even(self) -> bool:
        return self.sign == (0, 0)

    def is_totally_odd(self) -> bool:
        return self.sign == (1, 1)

    def _factors_through(self, m2: OIdeal) -> bool:
        one = m2.reduce(FieldElement(self.F, 1))
        for z in self.group.units:
            if m2.reduce(FieldElement(self.F, z[0], z[1])) == one and self.angle_residue(z) != 0:
                return False
        return True

    @property
    def conductor(self) -> OIdeal:
        if self._conductor is None:
            cur = self.modulus
            changed = True
            while changed:
                changed = False
                for P in cur.factor():
                    cand = cur / P
                    if self._factors_through(cand):
                        cur = cand
                        changed = True
                        break
            self._conductor = cur
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def restrict_to(self, f: OIdeal) -> "RayCharacter":
        """The character mod f inducing self (f must be divisible by the conductor)."""
        if f == self.modulus:
            return self
        G2 = ray_class_group(self.F, f)
        exps = []
        for g in G2._gen_elems:
            lifted = _lift_unit(self.group, f, g)
            exps.append(self.angle_element(lifted) * G2.exponent)
        assert all(x.denominator == 1 for x in exps)
        return RayCharacter(G2, [int(x) for x in exps])

    def primitive(self) -> "RayCharacter":
        if self._primitive is None:
            self._primitive = self if self.is_primitive() else self.restrict_to(self.conductor)
        return self._primitive

    def extend_to(self, M: OIdeal) -> "RayCharacter":
        """The imprimitive character mod M (a multiple of the modulus) induced by self."""
        if M == self.modulus:
            return self
        if not self.modulus.divides(M):
            raise ValueError("target modulus must be a multiple of the modulus")
        G2 = ray_class_group(self.F, M)
        exps = []
        for g in G2._gen_elems:
            h = self.modulus.reduce(FieldElement(self.F, g[0], g[1])) + g[2:]
            exps.append(self.angle_element(h) * G2.exponent)
        return RayCharacter(G2, [int(x) for x in exps])

    def __mul__(self, other: "RayCharacter") -> "RayCharacter":
        M = self.modulus.lcm(other.modulus)
        a, b = self.extend_to(M), other.extend_to(M)
        return RayCharacter(a.group, [x + y for x, y in zip(a.exponents, b.exponents)])

    def inverse(self) -> "RayCharacter":
        return RayCharacter(self.group, [-x for x in self.exponents])

    conj = inverse

    def __eq__(self, other):
        return isinstance(other, RayCharacter) and self.group is other.group and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.F.d, self.modulus.key(), self.exponents))

    def label(self) -> str:
        return f"F{self.F.d}-m{self.modulus}-e{','.join(map(str, self.exponents))}-r{self.sign[0]}{self.sign[1]}"

    def __repr__(self):
        return f"RayCharacter({self.label()})"

    def summary(self) -> dict:
        return {
            "label": self.label(),
            "modulus": str(self.modulus),
            "order": self.order,
            "sign": list(self.sign),
            "conductor": str(self.conductor),
        }


def _lift_unit(G: RayClassGroup, f: OIdeal, g):
    """A group element of G whose reduction mod f is g."""
    target = tuple(g[:2])
    for z in G.units:
        if f.reduce(FieldElement(G.F, z[0], z[1])) == target:
            return z + tuple(g[2:])
    raise RuntimeError("no unit lift found")


def chi_eval(chi: RayCharacter, I: OIdeal) -> CycloNumber:
    """Value of the primitive character attached to chi; zero off the conductor."""
    return chi.primitive().value(I)


def conductor(chi: RayCharacter) -> OIdeal:
    return chi.conductor


def characters_of_conductor(F: QuadField, f: OIdeal) -> list[RayCharacter]:
    G = ray_class_group(F, f)
    return [chi for chi in G.characters() if chi.is_primitive()]


def all_primitive_characters(F: QuadField, max_norm: int) -> list[RayCharacter]:
    """Primitive characters with conductor norm <= max_norm, sorted by conductor."""
    out = []
    for I, _ in F.ideals_up_to(max_norm):
        out.extend(characters_of_conductor(F, I))
    return out


def named_character(F: QuadField, name: str) -> RayCharacter:
    """Named characters: 'triv', 'chi5', or 'cond=<n>:<index>'."""
    if name in ("triv", "1", "trivial"):
        return ray_class_group(F, F.unit_ideal()).trivial_character()
    if name == "chi5":
        cands = [c for c in characters_of_conductor(F, F.principal(5)) if c.order == 2 and c.is_totally_even()]
        if len(cands) != 1:
            raise ValueError(f"no unique totally even quadratic character of conductor (5) over {F}")
        return cands[0]
    if name.startswith("cond="):
        body = name[5:]
        cond, idx = body.split(":")
        cond_ideal = F.parse_ideal(cond) if cond.startswith("[") else F.principal(int(cond))
        return characters_of_conductor(F, cond_ideal)[int(idx)]
    raise ValueError(f"unknown character name {name!r}")


def gauss_level(psi: RayCharacter) -> int:
    return _lcm(psi.order, psi.modulus.a)


def gauss_sum(psi: RayCharacter) -> CycloNumber:
    """tau(psi) = sum over z in (O/m)^x of psi_f(z) e(Tr(z/g)), g the totally
    positive generator of m*d_F (this fixes the identification of
    m^-1 d^-1 / d^-1 with O/m)."""
    if psi.is_trivial():
        return CycloNumber.one()
    if not psi.is_primitive():
        raise NotPrimitive("Gauss sums are defined for primitive characters")
    F = psi.F
    m = psi.modulus
    g = F.tp_generator(m * F.different())
    gbar = g.conj()
    Ng = g.norm()
    L = gauss_level(psi)
    counts: dict[int, int] = {}
    for z in psi.group.units:
        tr = (FieldElement(F, z[0], z[1]) * gbar).trace() / Ng
        ang = psi.angle_residue(z) + tr
        k = ang * L
        assert k.denominator == 1
        k = int(k) % L
        counts[k] = counts.get(k, 0) + 1
    return CycloNumber.from_exponent_counts(L, counts)


def gauss_generator(psi: RayCharacter) -> FieldElement:
    F = psi.F
    return F.tp_generator(psi.modulus * F.different())


def unit_index(F: QuadField, n: OIdeal) -> int:
    """[O_+^x : O_{F,n}^{x 2}], the order of eps_0 in (O/n)^x / {+-1}."""
    if not n.is_integral():
        raise NotIntegral("level must be integral")
    one = n.reduce(FieldElement(F, 1))
    mone = n.reduce(FieldElement(F, -1))
    cur = F.fund_unit
    j = 1
    while True:
        r = n.reduce(cur)
        if r == one or r == mone:
            return j
        cur = cur * F.fund_unit
        j += 1
