"""Hecke eigenvalues of weight-2 Hilbert cusp forms over Q(sqrt 2) of prime
level (5) with the quadratic nebentypus of conductor (5), computed on the
definite quaternion algebra (-1,-1) over Q(sqrt 2) (ramified only at the two
infinite places, class number one).

Automorphic forms are functions f on GL2(O_F/5) with
    f(rho(u) g) = f(g)          for units u of the maximal order,
    f(g b) = chi(d_b) f(g)      for b upper triangular mod 5,
and the Hecke operators act by
    T_q f(g) = sum over gamma in S_q / O^1 of f(rho(gamma)^-1 g),
    U_5 f(g) = sum over b mod 5 of f(gamma_b^-1 g m_b),  m_b = [[5, b], [0, 1]],
with S_q the elements of reduced norm equal to the totally positive generator
of q.  Run as a script to write the eiscong.hmf.v1 fixture.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction as Fr
from itertools import product
from math import isqrt

import sympy
from sympy import Matrix

from eiscong.cyclo import CycloNumber, ResidueMap, reduce_mod_p
from eiscong.eisenstein import EisensteinSeries
from eiscong.quadfield import make_field
from eiscong.rayclass import named_character

R2 = 2 ** 0.5

# -- Q(sqrt 2) and quaternions; integer pairs (a, b) = a + b sqrt2 ------------

def fmul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def qmul(p, q):
    a0, a1, a2, a3 = p
    b0, b1, b2, b3 = q
    m = fmul

    def s(*t):
        return (sum(u[0] for u in t), sum(u[1] for u in t))

    def n(x):
        return (-x[0], -x[1])

    return (s(m(a0, b0), n(m(a1, b1)), n(m(a2, b2)), n(m(a3, b3))),
            s(m(a0, b1), m(a1, b0), m(a2, b3), n(m(a3, b2))),
            s(m(a0, b2), n(m(a1, b3)), m(a2, b0), m(a3, b1)),
            s(m(a0, b3), m(a1, b2), n(m(a2, b1)), m(a3, b0)))


def qconj(q):
    return (q[0],) + tuple((-x[0], -x[1]) for x in q[1:])


# Z-basis of the maximal order, as 2*x (integral coordinates)
ORDER_BASIS2 = [
    [2, 0, 0, 0, 0, 0, 0, 0], [0, 2, 0, 0, 0, 0, 0, 0], [0, 0, 2, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 2, 0, 0, 0], [0, 1, 0, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0], [0, 1, 0, 0, 0, 0, 0, 1],
]
_BM = Matrix(ORDER_BASIS2).T
_DET = int(_BM.det())
_ADJ = [[int(v) for v in row] for row in (_BM.adjugate()).tolist()]


def in_order(y) -> bool:
    """y = 2x as flat integer 8-vector; is x in the maximal order?"""
    return all(sum(a * b for a, b in zip(row, y)) % _DET == 0 for row in _ADJ)


def flat(q):
    return [c for x in q for c in x]


def unflat(v):
    return tuple((v[2 * i], v[2 * i + 1]) for i in range(4))


def _coord_candidates(A1: float, A2: float):
    """a + b sqrt2 with |a + b r| <= A1, |a - b r| <= A2."""
    out = []
    bmax = int((A1 + A2) / (2 * R2)) + 1
    for b in range(-bmax, bmax + 1):
        lo = max(-A1 - b * R2, -A2 + b * R2)
        hi = min(A1 - b * R2, A2 + b * R2)
        for a in range(int(lo) - 1, int(hi) + 2):
            if abs(a + b * R2) <= A1 + 1e-9 and abs(a - b * R2) <= A2 + 1e-9:
                out.append((a, b))
    return out


def _sqrt_in_ring(t):
    """y in Z[sqrt2] with y^2 = t (one of the two), or None."""
    a, b = t
    # (x + y r)^2 = x^2 + 2y^2 + 2xy r
    N = a * a - 2 * b * b
    if N < 0:
        return None
    s = isqrt(N)
    if s * s != N:
        return None
    for sgn in (s, -s):
        x2 = a + sgn
        if x2 < 0 or x2 % 2:
            continue
        x = isqrt(x2 // 2)
        if 2 * x * x != x2:
            continue
        if x == 0:
            y2 = a // 2 if a % 2 == 0 else None
            if y2 is None or y2 < 0:
                continue
            y = isqrt(y2)
            if 2 * y * y == a and b == 0:
                return (0, y)
            continue
        if b % (2 * x):
            continue
        y = b // (2 * x)
        if (x * x + 2 * y * y, 2 * x * y) == (a, b):
            return (x, y)
    return None


def elements_of_norm(pi):
    """All x in the maximal order with nrd(x) = pi, pi totally positive."""
    target = (4 * pi[0], 4 * pi[1])  # sum of squares of y = 2x
    T1 = target[0] + target[1] * R2
    T2 = target[0] - target[1] * R2
    cands = _coord_candidates(T1 ** 0.5, T2 ** 0.5)
    sq = [(c, fmul(c, c)) for c in cands]
    # meet in the middle on (y0, y1) and (y2, y3)
    pairs: dict = {}
    for c0, s0 in sq:
        for c1, s1 in sq:
            t = (s0[0] + s1[0], s0[1] + s1[1])
            if t[0] + t[1] * R2 > T1 + 1e-9 or t[0] - t[1] * R2 > T2 + 1e-9:
                continue
            pairs.setdefault(t, []).append((c0, c1))
    out = []
    for t, lst in pairs.items():
        rest = (target[0] - t[0], target[1] - t[1])
        other = pairs.get(rest)
        if not other:
            continue
        for c0, c1 in lst:
            for c2, c3 in other:
                y = [*c0, *c1, *c2, *c3]
                if in_order(y):
                    out.append(unflat(y))
    return out


def half(q):
    return tuple((Fr(a, 2), Fr(b, 2)) for a, b in q)


# -- arithmetic mod 25 in Z[sqrt2]/25 and mod 5 -------------------------------

def rmod(x, m):
    return (x[0] % m, x[1] % m)


def rmul(x, y, m):
    return ((x[0] * y[0] + 2 * x[1] * y[1]) % m, (x[0] * y[1] + x[1] * y[0]) % m)


def radd(x, y, m):
    return ((x[0] + y[0]) % m, (x[1] + y[1]) % m)


def rinv5(x):
    for a, b in product(range(5), repeat=2):
        if rmul(x, (a, b), 5) == (1, 0):
            return (a, b)
    raise ZeroDivisionError


def frac_to_ring(x, m):
    """a/den + b/den sqrt2 with den prime to 5, reduced mod m."""
    a, b = Fr(x[0]), Fr(x[1])
    den = a.denominator * b.denominator
    inv = pow(den, -1, m)
    return ((int(a * den) * inv) % m, (int(b * den) * inv) % m)


def mmul(A, B, m):
    return [[radd(rmul(A[i][0], B[0][j], m), rmul(A[i][1], B[1][j], m), m) for j in range(2)] for i in range(2)]


def madd(A, B, m):
    return [[radd(A[i][j], B[i][j], m) for j in range(2)] for i in range(2)]


def mscal(c, A, m):
    return [[rmul(c, A[i][j], m) for j in range(2)] for i in range(2)]


def mdet(A, m):
    return radd(rmul(A[0][0], A[1][1], m), rmul((-A[0][1][0], -A[0][1][1]), A[1][0], m), m)


# splitting: i -> [[0,-1],[1,0]], j -> [[s,0],[0,-s]] with s^2 = -1 mod 25
S = 7
_I = [[(0, 0), (-1, 0)], [(1, 0), (0, 0)]]
_J = [[(S, 0), (0, 0)], [(0, 0), (-S, 0)]]


def rho(q, m):
    """Image of a quaternion with Fraction coordinates in M2(Z[sqrt2]/m)."""
    one = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]]
    I = [[rmod(x, m) for x in r] for r in _I]
    J = [[rmod(x, m) for x in r] for r in _J]
    K = mmul(I, J, m)
    out = [[(0, 0), (0, 0)], [(0, 0), (0, 0)]]
    for c, E in zip(q, (one, I, J, K)):
        out = madd(out, mscal(frac_to_ring(c, m), E, m), m)
    return out


def check_splitting():
    for m in (5, 25):
        I = rho(((0, 0), (1, 0), (0, 0), (0, 0)), m)
        J = rho(((0, 0), (0, 0), (1, 0), (0, 0)), m)
        mone = [[((-1) % m, 0), (0, 0)], [(0, 0), ((-1) % m, 0)]]
        assert mmul(I, I, m) == mone and mmul(J, J, m) == mone
        IJ, JI = mmul(I, J, m), mmul(J, I, m)
        assert madd(IJ, JI, m) == [[(0, 0), (0, 0)], [(0, 0), (0, 0)]]


# -- lines of F25^2 and the function model -------------------------------------

F25 = [(a, b) for a in range(5) for b in range(5)]
F25x = [x for x in F25 if x != (0, 0)]


def chi_quad(d) -> int:
    """Quadratic character of F25^x."""
    r = (1, 0)
    for _ in range(12):
        r = rmul(r, d, 5)
    return 1 if r == (1, 0) else -1


def line_reps():
    reps = [((1, 0), x) for x in F25] + [((0, 0), (1, 0))]
    return [(v[0], v[1]) for v in reps]


LINES = line_reps()  # first column representatives v_L
COMPL = [((0, 0), (1, 0)) if v[0] == (1, 0) else ((1, 0), (0, 0)) for v in LINES]  # w_L


def line_index(v):
    """(index, a) with v = a * v_L."""
    if v[0] != (0, 0):
        a = v[0]
        w = rmul(v[1], rinv5(a), 5)
        return F25.index(w), a
    return 25, v[1]


def g_of(L):
    v, w = LINES[L], COMPL[L]
    return [[v[0], w[0]], [v[1], w[1]]]


def decompose(g, trivial_chi=False):
    """f(g) = chi(d) F(L) for g mod 5 -> (L, chi(d))."""
    c1 = (g[0][0], g[1][0])
    L, a = line_index(c1)
    gl = g_of(L)
    d = rmul(mdet(g, 5), rinv5(rmul(a, mdet(gl, 5), 5)), 5)
    return L, (1 if trivial_chi else chi_quad(d))


def right_orbits(elts2, units2):
    """Orbit representatives of x O^1, on doubled integer coordinates."""
    seen = {}
    for x in elts2:
        key = min(flat(qmul(x, u)) for u in units2)
        seen.setdefault(tuple(key), x)
    return [half(x) for x in seen.values()]


class Brandt:
    def __init__(self, trivial_chi=False):
        check_splitting()
        self.trivial = trivial_chi
        u2 = elements_of_norm((1, 0))
        self.units2 = u2
        self.units = [half(u) for u in u2]
        assert len(self.units) == 48, len(self.units)
        self.invariant_basis = self._invariants()

    def _invariants(self):
        # F lies in V iff F(L) = chi(d) F(L') whenever rho(u) g_L = g_{L'} b
        n = len(LINES)
        rows = []
        for u in self.units:
            ru = rho(u, 5)
            for L in range(n):
                L2, c = decompose(mmul(ru, g_of(L), 5), self.trivial)
                r = [0] * n
                r[L] += 1
                r[L2] -= c
                rows.append(r)
        return Matrix(rows).nullspace()

    def hecke_matrix(self, pi, at_level=False):
        reps = right_orbits(elements_of_norm(pi), self.units2)
        n = len(LINES)
        T = [[0] * n for _ in range(n)]
        if not at_level:
            assert len(reps) == (pi[0] ** 2 - 2 * pi[1] ** 2) + 1, len(reps)
            pinv = rinv5(rmod(pi, 5))
            for gam in reps:
                rinv = mscal(pinv, rho(qconj(gam), 5), 5)
                for L in range(n):
                    L2, c = decompose(mmul(rinv, g_of(L), 5), self.trivial)
                    T[L][L2] += c
            return Matrix(T)
        # U_5: pi = 5
        used = 0
        for L in range(n):
            g = g_of(L)
            for b in F25:
                mb = [[(5, 0), b], [(0, 0), (1, 0)]]
                gm = mmul(g, mb, 25)
                hits = []
                for gam in reps:
                    M = mmul(rho(qconj(gam), 25), gm, 25)
                    if all(x[0] % 5 == 0 and x[1] % 5 == 0 for r in M for x in r):
                        hits.append([[(x[0] // 5, x[1] // 5) for x in r] for r in M])
                assert len(hits) == 1, len(hits)
                L2, c = decompose(hits[0], self.trivial)
                T[L][L2] += c
                used += 1
        return Matrix(T)

    def restrict(self, T):
        """Matrix of T on the invariant subspace, acting on column coordinates."""
        B = Matrix.hstack(*self.invariant_basis)
        # f -> T f with (T f)(L) = sum_L2 T[L][L2] f(L2)
        TB = T * B
        sol = (B.T * B).inv() * B.T * TB
        assert B * sol == TB
        return sol


# -- fixture --------------------------------------------------------------------

def sqrt_m6() -> CycloNumber:
    """i sqrt(6) = (2 zeta_3 + 1)(zeta_8 + zeta_8^-1) in Q(zeta_24)."""
    s3 = CycloNumber.zeta(3) * 2 + 1
    s2 = CycloNumber.zeta(8) + CycloNumber.zeta(8, 7)
    out = s3 * s2
    assert out * out == CycloNumber.rational(-6)
    assert abs(complex(out.embed()) - 6 ** 0.5 * 1j) < 1e-12
    return out


def to_cyclo(expr) -> CycloNumber:
    expr = sympy.nsimplify(sympy.expand(expr))
    r = sympy.sqrt(-6)
    b = sympy.Rational(sympy.expand(expr).coeff(r))
    a = sympy.Rational(sympy.expand(expr - b * r))
    return CycloNumber.rational(Fr(int(a.p), int(a.q))) + sqrt_m6() * Fr(int(b.p), int(b.q))


def eigen_systems(bound: int = 100, trivial_chi: bool = False):
    F = make_field(2)
    B = Brandt(trivial_chi)
    mats = {}
    for P in F.primes_up_to(bound):
        if P.norm() == 25:
            mats[P] = B.restrict(B.hecke_matrix((5, 0), at_level=True))
        else:
            g = F.tp_generator(P)
            a, b = g.coords()
            mats[P] = B.restrict(B.hecke_matrix((int(a), int(b))))
    keys = list(mats)
    assert all(mats[x] * mats[y] == mats[y] * mats[x] for x in keys for y in keys)
    # a generic combination separates the eigenspaces
    gen = sum((mats[P] * (i + 1) for i, P in enumerate(keys)), sympy.zeros(*mats[keys[0]].shape))
    systems = []
    for _, _, vecs in gen.eigenvects():
        for v in vecs:
            i = next(j for j in range(len(v)) if v[j] != 0)
            systems.append({P: sympy.simplify((mats[P] * v)[i] / v[i]) for P in keys})
    return F, systems


def build_fixture(bound: int = 100, p: int = 7) -> dict:
    from eiscong.congruence import CuspFormData, check_fourier_congruence
    from eiscong.store import eigenvalue_data_to_dict

    F, systems = eigen_systems(bound)
    E = EisensteinSeries(named_character(F, "chi5"), named_character(F, "triv"))
    chosen = None
    for sysm in systems:
        eig = {P: to_cyclo(v) for P, v in sysm.items()}
        for P, v in eig.items():
            if P.norm() != 25:
                assert abs(complex(v.embed())) <= 2 * float(P.norm()) ** 0.5 + 1e-9
            else:
                assert (v * v.conjugate()) == CycloNumber.rational(25)
        f = CuspFormData(2, E.level, 2, E.chi.primitive().label(), eig, {}, bound)
        rep = check_fourier_congruence(E, f, p, bound)
        print("system", {str(P.norm()): str(v) for P, v in sysm.items()}, "congruent:", rep.verdict, file=sys.stderr)
        if rep.verdict and chosen is None:
            chosen = f
    if chosen is None:
        raise SystemExit("no eigen-system is congruent to the Eisenstein series")
    chosen.provenance = {
        "source": "computed with tools/brandt_qsqrt2.py",
        "method": ("Hecke operators on automorphic forms of the definite quaternion algebra (-1,-1) over "
                   "Q(sqrt 2) (discriminant 1, class number one), level Gamma_0((5)) with the quadratic "
                   "nebentypus of conductor (5); eigenvalues are exact in Q(sqrt -6), written in Q(zeta_24)"),
        "hecke_field": "Q(sqrt -6)",
        "selection": f"the Galois conjugate congruent to E_2(chi5, 1) under the default residue map at p={p}",
        "date": "2026-10-16",
    }
    return eigenvalue_data_to_dict(chosen)


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "src/eiscong/data/qsqrt2-level25-k2.json"
    doc = build_fixture()
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", out, file=sys.stderr)
