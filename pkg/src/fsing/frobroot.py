"""Frobenius roots, star closures and the nilpotency chains of a Frobenius map.

A Frobenius action on the injective hull of R/I is encoded, on the dual side,
by a polynomial ``u`` with ``u*I ⊆ I^[p]``; everything here manipulates
ideals of R only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .arith import MAX_EXPONENT, Polynomial, RingSpec
from .errors import ExponentOverflowError, InputError, InternalConsistencyError, IterationCapError
from .groebner import Ideal, frobenius_power_ideal, ideal_colon, ideal_equal, ideal_membership


def nu(e: int, p: int) -> int:
    """``1 + p + ... + p^(e-1)``."""
    if e < 1:
        raise ValueError("e must be >= 1")
    value = (p**e - 1) // (p - 1)
    if value >= 2**63:
        raise OverflowError("nu exceeds 63 bits")
    return value


def _q(ring: RingSpec, e: int) -> int:
    if e < 1:
        raise ValueError("e must be >= 1")
    q = ring.p**e
    if q > MAX_EXPONENT:
        raise ExponentOverflowError(f"p^e = {ring.p}^{e} does not fit in 32 bits")
    return q


def default_cap(ring: RingSpec, e: int = 1) -> int:
    return 10 * max(ring.nvars, 1) * _q(ring, e)


def frobenius_root_poly(g: Polynomial, e: int = 1) -> Ideal:
    """Smallest ideal L with g in L^[p^e].

    Each term ``c*x^a`` lands in the bucket of ``a mod p^e`` with quotient
    ``x^(a div p^e)``; over F_p the coefficient is its own p^e-th root.
    """
    ring = g.ring
    q = _q(ring, e)
    buckets: dict = {}
    for m, c in g.terms:
        r = tuple(a % q for a in m)
        buckets.setdefault(r, {})[tuple(a // q for a in m)] = c
    return Ideal(ring, [Polynomial(ring, b) for b in buckets.values()])


def frobenius_root_ideal(A: Ideal, e: int = 1) -> Ideal:
    """Smallest L with A ⊆ L^[p^e]; additive over the generators of A."""
    gens = []
    for g in A.generators:
        gens.extend(frobenius_root_poly(g, e).generators)
    return Ideal(A.ring, gens)


def _contained(A: Ideal, B: Ideal) -> bool:
    G = B.gb()
    if G.is_unit():
        return True
    return all(ideal_membership(a, B) for a in A.generators)


def star_closure(A: Ideal, u: Polynomial, e: int = 1, cap: int | None = None) -> Ideal:
    """Stable value of ``A_0 = A``, ``A_{i+1} = root_e(u*A_i) + A_i``.

    The result is the smallest ideal containing A with ``u*L ⊆ L^[p^e]``.
    """
    ring = A.ring
    if u.ring != ring:
        raise InputError("u is not over the ideal's ring")
    cap = cap or default_cap(ring, e)
    current = A.reduced()
    for _ in range(cap):
        root = frobenius_root_ideal(current * u, e)
        if _contained(root, current):
            return current
        current = (current + root).reduced()
    raise IterationCapError(f"star closure did not stabilise within {cap} steps")


# --- Frobenius pairs and nilpotency ---------------------------------------


@dataclass(frozen=True)
class FrobeniusPair:
    """Defining ideal ``I`` with a Frobenius structure ``u*I ⊆ I^[p^e]``."""

    I: Ideal
    u: Polynomial
    e: int = 1

    def __post_init__(self):
        if self.u.ring != self.I.ring:
            raise InputError("u is not over the ideal's ring")
        Ipe = frobenius_power_ideal(self.I, self.e)
        for g in self.I.generators:
            if not ideal_membership(g * self.u, Ipe):
                raise InputError(f"u*({g}) is not in I^[p^{self.e}]; not a Frobenius structure")

    @property
    def ring(self) -> RingSpec:
        return self.I.ring

    @property
    def q(self) -> int:
        return self.ring.p**self.e


@dataclass
class NilpotencyReport:
    chain: list
    eta: int
    nil_ideal: Ideal
    torsion_free: bool
    variant: str = "outside"
    variant_mismatch: bool | None = None
    extras: dict = field(default_factory=dict)


def _power_roots(fp: FrobeniusPair, cap: int):
    """Yield ``root_{e*k}(u^{nu_k}) `` for k = 1, 2, ... (with nu taken in base q).

    Uses ``u^{nu_{k+1}} = u^{nu_k} * u^{q^k}``, so the next root is
    ``root_e(u * previous)``; no large power of u is ever formed.
    """
    current = frobenius_root_poly(fp.u, fp.e).reduced()
    for _ in range(cap):
        yield current
        current = frobenius_root_ideal(current * fp.u, fp.e).reduced()


def nilpotency_analysis(
    fp: FrobeniusPair,
    variant: str = "outside",
    cap: int | None = None,
    cross_check: bool = False,
) -> NilpotencyReport:
    """Chain ``J_k``, index of nilpotency and the ideal cutting out Nil(E_S).

    ``variant="outside"``: ``J_k = root(u^{nu_k}) + I``;
    ``variant="inside"``: ``J_k = root(u^{nu_k} R + I) + I``.
    With ``cross_check`` both are computed and ``variant_mismatch`` is set.
    """
    if variant not in ("outside", "inside"):
        raise ValueError(f"unknown variant {variant!r}")
    ring = fp.ring
    cap = cap or default_cap(ring, fp.e)
    I = fp.I

    def chain_for(which):
        chain = []
        for k, root in enumerate(_power_roots(fp, cap), start=1):
            J = root + I
            if which == "inside":
                J = J + frobenius_root_ideal(I, fp.e * k)
            J = J.reduced()
            if chain and ideal_equal(chain[-1], J):
                chain.append(J)
                return chain, k - 1
            chain.append(J)
        raise IterationCapError(f"J_e chain did not stabilise within {cap} steps")

    chain, stable = chain_for(variant)
    nil_ideal = chain[-1]
    torsion_free = chain[0].is_unit()
    # only the outside chain is descending; the inside one may grow to (1)
    if variant == "outside" and torsion_free != nil_ideal.is_unit():
        raise InternalConsistencyError("J_1 and the stable J disagree about torsion-freeness")
    report = NilpotencyReport(
        chain=chain,
        eta=0 if torsion_free else stable,
        nil_ideal=nil_ideal,
        torsion_free=torsion_free,
        variant=variant,
    )
    if cross_check:
        other, _ = chain_for("inside" if variant == "outside" else "outside")
        report.variant_mismatch = not ideal_equal(other[-1], nil_ideal) or len(other) != len(chain)
        report.extras["other_chain"] = other
    return report


def stable_colon_chain(fp: FrobeniusPair, cap: int | None = None, return_chain: bool = False):
    """Stable value of ``L_a = (I^[q^a] : u^{nu_a})``, the largest nilpotent quotient."""
    ring = fp.ring
    cap = cap or default_cap(ring, fp.e)
    I, u = fp.I, fp.u
    chain: list = []
    u_pow = u
    for a in range(1, cap + 1):
        if a > 1:
            u_pow = u_pow * u.frobenius(fp.e * (a - 1))
        L = ideal_colon(frobenius_power_ideal(I, fp.e * a), Ideal(ring, [u_pow])).reduced()
        if chain and not _contained(chain[-1], L):
            raise InternalConsistencyError("L_a chain is not ascending")
        if chain and ideal_equal(chain[-1], L):
            chain.append(L)
            if not (_contained(I, L) and is_es_ideal(L, fp)):
                raise InternalConsistencyError("stable L is not an E_S-ideal")
            return (L, chain) if return_chain else L
        chain.append(L)
    raise IterationCapError(f"L_a chain did not stabilise within {cap} steps")


def is_es_ideal(L: Ideal, fp: FrobeniusPair) -> bool:
    """True iff I ⊆ L and u*L ⊆ L^[q]."""
    if L.ring != fp.ring:
        raise InputError("ideal is not over the pair's ring")
    if not _contained(fp.I, L):
        return False
    Lq = frobenius_power_ideal(L, fp.e)
    return all(ideal_membership(g * fp.u, Lq) for g in L.generators)


@dataclass(frozen=True)
class FedderResult:
    verdict: bool
    u: Polynomial


def fedder_f_injective(regular_sequence: Sequence[Polynomial]) -> FedderResult:
    """F-injectivity of R/(f_1..f_s) for a regular sequence: ``u = (prod f_i)^(p-1) ∉ m^[p]``.

    The regular-sequence hypothesis is not verified.
    """
    if not regular_sequence:
        raise InputError("need at least one polynomial")
    ring = regular_sequence[0].ring
    prod = ring.one()
    for f in regular_sequence:
        prod = prod * f
    u = prod ** (ring.p - 1)
    m_p = Ideal(ring, [x.frobenius(1) for x in ring.gens()])
    return FedderResult(verdict=not ideal_membership(u, m_p), u=u)


# --- matrix version ---------------------------------------------------------


@dataclass
class EntryChain:
    ideals: list
    stabilized: bool


def twisted_matrix_chain(G, e_max: int) -> list[list[EntryChain]]:
    """Root chains of the entries of ``G_e = G * F(G_{e-1})``, ``G_1 = G``.

    ``F`` raises every entry to the p-th power; in the 1x1 case ``G_e`` is
    ``u^{nu_e}``.  Entry chains are ``root_e(g_ij^(e))`` for e = 1..e_max.
    """
    rows = [list(r) for r in (G.entries if hasattr(G, "entries") else G)]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise InputError("twisted_matrix_chain needs a square matrix")
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    if m == 0:
        return []
    ring = rows[0][0].ring
    chains = [[[] for _ in range(m)] for _ in range(m)]
    current = rows
    for e in range(1, e_max + 1):
        if e > 1:
            frob = [[x.frobenius(1) for x in r] for r in current]
            current = [
                [sum((rows[i][k] * frob[k][j] for k in range(m)), ring.zero()) for j in range(m)]
                for i in range(m)
            ]
        for i in range(m):
            for j in range(m):
                chains[i][j].append(frobenius_root_poly(current[i][j], e).reduced())
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            ch = chains[i][j]
            stable = any(ideal_equal(ch[k], ch[k + 1]) for k in range(len(ch) - 1))
            row.append(EntryChain(ideals=ch, stabilized=stable))
        out.append(row)
    return out

