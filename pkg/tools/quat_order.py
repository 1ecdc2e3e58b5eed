"""Maximal order of the Hamilton quaternions over Q(sqrt 2): quick exploration."""
from fractions import Fraction as Fr
from itertools import product
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

def fmul(x, y):  # (a + b r)(c + d r), r^2 = 2
    return (x[0]*y[0] + 2*x[1]*y[1], x[0]*y[1] + x[1]*y[0])
def fadd(x, y): return (x[0]+y[0], x[1]+y[1])
def fneg(x): return (-x[0], -x[1])

def qmul(p, q):
    a0,a1,a2,a3 = p; b0,b1,b2,b3 = q
    m = fmul; s = lambda *t: (sum(u[0] for u in t), sum(u[1] for u in t))
    return (s(m(a0,b0), fneg(m(a1,b1)), fneg(m(a2,b2)), fneg(m(a3,b3))),
            s(m(a0,b1), m(a1,b0), m(a2,b3), fneg(m(a3,b2))),
            s(m(a0,b2), fneg(m(a1,b3)), m(a2,b0), m(a3,b1)),
            s(m(a0,b3), m(a1,b2), fneg(m(a2,b1)), m(a3,b0)))

def flat(q): return [c for x in q for c in x]
def unflat(v): return tuple((v[2*i], v[2*i+1]) for i in range(4))

h = Fr(1, 2)
one = ((1,0),(0,0),(0,0),(0,0)); I = ((0,0),(1,0),(0,0),(0,0)); J = ((0,0),(0,0),(1,0),(0,0)); K = qmul(I, J)
hur = ((h,0),(h,0),(h,0),(h,0))
# (1+i)/sqrt2 = (1+i) * sqrt2/2
a = ((0,h),(0,h),(0,0),(0,0))
b = ((0,h),(0,0),(0,h),(0,0))
r2 = ((0,1),(0,0),(0,0),(0,0))
gens = [one, I, J, K, hur, a, b]
gens = gens + [qmul(r2, g) for g in gens]

def span(vs):
    D = 8
    M = Matrix([[c*D for c in flat(v)] for v in vs]).T
    H = hermite_normal_form(M)
    cols = [tuple(Fr(int(H[i, j]), D) for i in range(8)) for j in range(H.shape[1])]
    return [unflat(c) for c in cols if any(c)]

basis = span(gens)
while True:
    new = span(basis + [qmul(x, y) for x in basis for y in basis])
    if Matrix([flat(v) for v in new]).det() == Matrix([flat(v) for v in basis]).det() and len(new) == len(basis):
        break
    basis = new
print(len(basis))
def trd(q): return (2*q[0][0], 2*q[0][1])
def conjq(q): return (q[0], fneg(q[1]), fneg(q[2]), fneg(q[3]))
def trQ(x): return 2*x[0]
G = Matrix(8, 8, lambda i, j: trQ(trd(qmul(basis[i], conjq(basis[j])))))
print("disc", G.det())
for v in basis:
    n = qmul(v, conjq(v))[0]
    assert all(Fr(c).denominator == 1 for c in n), n
    assert all(Fr(c).denominator == 1 for c in trd(v))
print([flat(v) for v in basis])
