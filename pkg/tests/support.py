"""Hypothesis strategies and small helpers shared by the test modules."""

import itertools

from hypothesis import strategies as st

from fsing import Ideal, RingSpec

RINGS = {
    (p, n): RingSpec(p, tuple(["x", "y", "z", "w"][:n]))
    for p in (2, 3, 5, 7)
    for n in (1, 2, 3)
}


def ring(p, n):
    return RINGS[(p, n)]


@st.composite
def monomials(draw, n, max_deg):
    d = draw(st.integers(0, max_deg))
    exps = [0] * n
    for _ in range(d):
        exps[draw(st.integers(0, n - 1))] += 1
    return tuple(exps)


@st.composite
def polys(draw, R, max_deg=3, max_terms=4, nonzero=False):
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(k):
        terms[draw(monomials(R.nvars, max_deg))] = draw(st.integers(1, R.p - 1))
    f = R.poly(terms)
    if nonzero and not f:
        f = R.monomial(draw(monomials(R.nvars, max_deg)))
    return f


@st.composite
def rings(draw, primes=(2, 3), nvars=(1, 2, 3)):
    return ring(draw(st.sampled_from(primes)), draw(st.sampled_from(nvars)))


@st.composite
def ideals(draw, R, max_gens=3, max_deg=3, max_terms=3):
    k = draw(st.integers(1, max_gens))
    return Ideal(R, [draw(polys(R, max_deg, max_terms, nonzero=True)) for _ in range(k)])


@st.composite
def ring_and_ideal(draw, primes=(2, 3), nvars=(1, 2, 3), max_gens=3, max_deg=3):
    R = draw(rings(primes, nvars))
    return R, draw(ideals(R, max_gens, max_deg))


def all_monomials(n, max_deg):
    return [m for d in range(max_deg + 1) for m in itertools.product(range(d + 1), repeat=n) if sum(m) == d]


def element_of(I, coeffs):
    """Combination sum(c_i * g_i) for the given polynomial multipliers."""
    total = I.ring.zero()
    for g, c in zip(I.generators, coeffs):
        total = total + g * c
    return total


def determinantal_example():
    """2x2 minors of [[x1, x2, x2, x5], [x4, x4, x3, x1]] over F_2 and the
    pre-image (x1, x4, x5) + I of a canonical ideal."""
    R = RingSpec(2, ("x1", "x2", "x3", "x4", "x5"))
    x1, x2, x3, x4, x5 = R.gens()
    M = [[x1, x2, x2, x5], [x4, x4, x3, x1]]
    I = Ideal(R, [M[0][i] * M[1][j] - M[0][j] * M[1][i] for i, j in itertools.combinations(range(4), 2)])
    return I, Ideal(R, [x1, x4, x5]) + I


DETERMINANTAL_U = (
    "x1^3*x2*x3 + x1^3*x2*x4 + x1^2*x3*x4*x5 + x1*x2*x3*x4*x5"
    " + x1*x2*x4^2*x5 + x2^2*x4^2*x5 + x3*x4^2*x5^2 + x4^3*x5^2"
)


@st.composite
def frobenius_pairs(draw, primes=(2, 3), nvars=(1, 2, 3)):
    """(I, u) with u*I ⊆ I^[p]: u is a random element of (I^[p] : I)."""
    from fsing.groebner import frobenius_power_ideal, ideal_colon

    R = draw(rings(primes, nvars))
    kind = draw(st.sampled_from(["principal", "general", "zero"]))
    if kind == "zero":
        I = Ideal(R, [])
    elif kind == "principal":
        I = Ideal(R, [draw(polys(R, 2, 3, nonzero=True))])
    else:
        I = draw(ideals(R, max_gens=2, max_deg=2, max_terms=2))
    if I.is_unit():
        I = Ideal(R, [])
    M = ideal_colon(frobenius_power_ideal(I, 1), I)
    u = R.zero()
    for g in M.gb().elements[:4]:
        u = u + g * draw(polys(R, 1, 2))
    return I, u


ACCEPTANCE_LINES = []
