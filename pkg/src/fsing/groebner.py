"""Buchberger engine and ideal operations.

The engine works on vectors of polynomials: a term is a pair
``(position, monomial)`` and terms are compared position-over-term, with
position 0 the largest.  Ideals are the rank-one case.  Everything the
rest of the package needs (normal forms, sums, intersections, colons,
dimension) is built on :class:`Ideal` and its cached reduced basis.
"""

from __future__ import annotations

import heapq
import itertools
import operator
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arith import MonomialOrder, Polynomial, RingSpec, mono_divides, mono_lcm
from .errors import InternalConsistencyError, RingMismatchError

_add = operator.add
_sub = operator.sub


class Engine:
    """Buchberger machinery for one characteristic, variable count and order.

    Elements are lists of ``((pos, mono), coeff)`` sorted descending.
    """

    def __init__(self, p: int, order: MonomialOrder):
        self.p = p
        self.order = order
        self._mkey = order.key
        self._neg_cache: dict = {}

    def neg_key(self, term):
        k = self._neg_cache.get(term)
        if k is None:
            k = (term[0],) + tuple(-a for a in self._mkey(term[1]))
            self._neg_cache[term] = k
        return k

    def sort_terms(self, d: dict) -> list:
        nk = self.neg_key
        return sorted(((t, c) for t, c in d.items() if c), key=lambda tc: nk(tc[0]))

    def monic(self, f: list) -> list:
        c = f[0][1]
        if c == 1:
            return f
        inv = pow(c, -1, self.p)
        p = self.p
        return [(t, a * inv % p) for t, a in f]

    # -- reduction

    def reduce(self, f: dict, basis: Sequence[list], full: bool = True) -> list:
        """Reduce ``f`` (consumed) modulo monic ``basis``; returns sorted terms.

        With ``full=False`` only the leading term is reduced away.
        """
        p = self.p
        nk = self.neg_key
        # every key of f must be on the heap; zero entries mark cancelled terms
        for t in [t for t, c in f.items() if not c]:
            del f[t]
        heap = [(nk(t), t) for t in f]
        heapq.heapify(heap)
        leads = [(g[0][0][0], g[0][0][1], g) for g in basis]
        rem = []
        while heap:
            _, t = heapq.heappop(heap)
            c = f.pop(t)
            if not c:
                continue
            pos, mono = t
            for gpos, glm, g in leads:
                if gpos == pos and all(map(operator.le, glm, mono)):
                    shift = tuple(map(_sub, mono, glm))
                    for (s_pos, s_mono), d in itertools.islice(g, 1, None):
                        nt = (s_pos, tuple(map(_add, s_mono, shift)))
                        old = f.get(nt)
                        if old is None:
                            f[nt] = -c * d % p
                            heapq.heappush(heap, (nk(nt), nt))
                        else:
                            f[nt] = (old - c * d) % p
                    break
            else:
                rem.append((t, c))
                if not full:
                    rem.extend(self.sort_terms(f))
                    return rem
        return rem

    # -- Buchberger

    def groebner(self, gens: Iterable[list], *, rank_one: bool) -> list:
        """Reduced Gröbner basis of the submodule generated by ``gens``.

        Normal strategy (smallest lcm first) with the product criterion
        (ideals only) and Buchberger's chain criterion.
        """
        p = self.p
        nk = self.neg_key
        G: list = []
        pairs: list = []
        pending: set = set()
        counter = itertools.count()

        def add(h):
            j = len(G)
            G.append(h)
            hpos, hm = h[0][0]
            for i, g in enumerate(G[:-1]):
                gpos, gm = g[0][0]
                if gpos != hpos:
                    continue
                lcm = mono_lcm(gm, hm)
                if rank_one and all(a == 0 or b == 0 for a, b in zip(gm, hm)):
                    continue  # coprime leading terms
                heapq.heappush(pairs, (sum(lcm), nk((hpos, lcm)), next(counter), i, j, lcm))
                pending.add((i, j))

        for f in sorted((g for g in gens if g), key=lambda g: nk(g[0][0]), reverse=True):
            r = self.reduce(dict(f), [g for g in G if g is not None])
            if r:
                add(self.monic(r))

        while pairs:
            _, _, _, i, j, lcm = heapq.heappop(pairs)
            pending.discard((i, j))
            gi, gj = G[i], G[j]
            pos = gi[0][0][0]
            if self._chain_skip(G, i, j, pos, lcm, pending):
                continue
            s: dict = {}
            for g, sign in ((gi, 1), (gj, -1)):
                shift = tuple(map(_sub, lcm, g[0][0][1]))
                for (tp, tm), c in itertools.islice(g, 1, None):
                    nt = (tp, tuple(map(_add, tm, shift)))
                    s[nt] = (s.get(nt, 0) + sign * c) % p
            r = self.reduce(s, G)
            if r:
                add(self.monic(r))

        return self.interreduce(G)

    @staticmethod
    def _chain_skip(G, i, j, pos, lcm, pending) -> bool:
        for k, g in enumerate(G):
            if k == i or k == j:
                continue
            kpos, km = g[0][0]
            if kpos != pos or not mono_divides(km, lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                return True
        return False

    def interreduce(self, G: list) -> list:
        """Minimalize then tail-reduce a Gröbner basis; output sorted by leading term."""
        G = sorted(G, key=lambda g: self.neg_key(g[0][0]))
        minimal = []
        for idx, g in enumerate(G):
            pos, m = g[0][0]
            redundant = False
            for jdx, h in enumerate(G):
                if jdx == idx:
                    continue
                hpos, hm = h[0][0]
                if hpos == pos and mono_divides(hm, m) and (hm != m or jdx < idx):
                    redundant = True
                    break
            if not redundant:
                minimal.append(g)
        out = []
        for idx, g in enumerate(minimal):
            others = minimal[:idx] + minimal[idx + 1 :]
            tail = self.reduce(dict(g[1:]), others)
            out.append([g[0]] + tail)
        return out


# --- conversion helpers ----------------------------------------------------


def _poly_to_vec(f: Polynomial, pos: int = 0) -> list:
    return [((pos, m), c) for m, c in f.terms]


def _vec_to_poly(ring: RingSpec, v: list) -> Polynomial:
    return Polynomial._from_sorted(ring, ((m, c) for (_, m), c in v))


_ENGINES: dict = {}
_ENGINE_LOCK = threading.Lock()


def engine_for(ring: RingSpec) -> Engine:
    key = (ring.p, ring.nvars, ring.order)
    with _ENGINE_LOCK:
        eng = _ENGINES.get(key)
        if eng is None:
            eng = _ENGINES[key] = Engine(ring.p, ring.order)
    return eng


# --- ideals ----------------------------------------------------------------


@dataclass(frozen=True)
class GBasis:
    """A reduced Gröbner basis: monic, pairwise distinct leading terms."""

    ring: RingSpec
    elements: tuple

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self) -> list:
        return [g.leading_monomial() for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_unit()


class Ideal:
    """An ideal given by generators, with a lazily cached reduced basis per order."""

    def __init__(self, ring: RingSpec, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if isinstance(g, int):
                g = ring.constant(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} is not over {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring: RingSpec) -> Ideal:
        return cls(ring, [ring.one()])

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators)) or '0'})"

    def __iter__(self):
        return iter(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def gb(self, order: MonomialOrder | None = None) -> GBasis:
        order = order or self.ring.order
        cached = self._gb.get(order)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._gb.get(order)
            if cached is None:
                ring = self.ring if order == self.ring.order else self.ring.with_order(order)
                cached = _compute_gb(ring, [g.change_ring(ring) for g in self.generators])
                self._gb[order] = cached
        return cached

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def contains(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    def __contains__(self, f):
        return ideal_membership(f, self)

    def __add__(self, other: Ideal) -> Ideal:
        return ideal_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.generators])
        return ideal_product(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def issubset(self, other: Ideal) -> bool:
        _same_ring(self, other)
        G = other.gb()
        return all(not normal_form(g, G) for g in self.generators)

    def reduced(self) -> Ideal:
        """The same ideal, generated by its reduced Gröbner basis."""
        out = Ideal(self.ring, self.gb().elements)
        out._gb[self.ring.order] = self.gb()
        return out

    def frobenius(self, e: int = 1) -> Ideal:
        return frobenius_power_ideal(self, e)


def _compute_gb(ring: RingSpec, gens: list[Polynomial]) -> GBasis:
    eng = engine_for(ring)
    vecs = eng.groebner([_poly_to_vec(g) for g in gens], rank_one=True)
    return GBasis(ring, tuple(_vec_to_poly(ring, v) for v in vecs))


def _same_ring(A, B) -> None:
    if A.ring != B.ring:
        raise RingMismatchError(f"ideals over different rings: {A.ring} vs {B.ring}")


def normal_form(f: Polynomial, G: GBasis) -> Polynomial:
    """Fully reduced remainder of ``f`` modulo the basis ``G``."""
    if not f.ring.compatible(G.ring):
        raise RingMismatchError("polynomial and basis over different rings")
    if f.ring.order != G.ring.order:
        f = f.change_ring(G.ring)
    eng = engine_for(G.ring)
    rem = eng.reduce(dict(_poly_to_vec(f)), [_poly_to_vec(g) for g in G.elements])
    return _vec_to_poly(G.ring, rem)


def buchberger(I: Ideal) -> GBasis:
    return I.gb()


def ideal_membership(f: Polynomial, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatchError("polynomial and ideal over different rings")
    if not f:
        return True
    return not normal_form(f, I.gb())


def ideal_sum(A: Ideal, B: Ideal) -> Ideal:
    _same_ring(A, B)
    return Ideal(A.ring, A.generators + B.generators)


def ideal_product(A: Ideal, B: Ideal) -> Ideal:
    _same_ring(A, B)
    return Ideal(A.ring, [a * b for a in A.generators for b in B.generators])


def ideal_equal(A: Ideal, B: Ideal) -> bool:
    _same_ring(A, B)
    return A.gb().elements == B.gb().elements


def frobenius_power_ideal(I: Ideal, e: int) -> Ideal:
    """``I^[p^e]``, generated by the p^e-th powers of the generators."""
    return Ideal(I.ring, [g.frobenius(e) for g in I.generators])


def ideal_intersection(A: Ideal, B: Ideal) -> Ideal:
    """``A ∩ B`` by eliminating ``t`` from ``t*A + (1-t)*B``."""
    _same_ring(A, B)
    ring = A.ring
    if A.is_zero() or B.is_zero():
        return Ideal(ring)
    if A.is_unit():
        return B
    if B.is_unit():
        return A
    n = ring.nvars
    tname = "_t"
    while tname in ring.variables:
        tname += "_"
    big = RingSpec(ring.p, (tname,) + ring.variables, MonomialOrder("elim", 1))
    shift = list(range(1, n + 1))
    t = big.var(0)
    one_minus_t = big.one() - t
    gens = [t * a.change_ring(big, shift) for a in A.gb().elements]
    gens += [one_minus_t * b.change_ring(big, shift) for b in B.gb().elements]
    G = _compute_gb(big, gens)
    out = []
    for g in G.elements:
        if g.leading_monomial()[0] == 0:
            out.append(Polynomial(ring, {m[1:]: c for m, c in g.terms}))
    result = Ideal(ring, out)
    for g in result.generators:
        if not (ideal_membership(g, A) and ideal_membership(g, B)):
            raise InternalConsistencyError(f"intersection generator {g} escapes an operand")
    return result


def _colon_element(A: Ideal, b: Polynomial) -> Ideal:
    ring = A.ring
    if ideal_membership(b, A):
        return Ideal.unit(ring)
    inter = ideal_intersection(A, Ideal(ring, [b]))
    try:
        return Ideal(ring, [g.divide_exact(b) for g in inter.generators])
    except ArithmeticError:
        raise InternalConsistencyError("inexact division while computing a colon ideal") from None


def ideal_colon(A: Ideal, B: Ideal) -> Ideal:
    """``(A : B) = {f | f*B ⊆ A}``; the colon by the zero ideal is the unit ideal."""
    _same_ring(A, B)
    result = Ideal.unit(A.ring)
    for b in B.gb().elements:
        result = ideal_intersection(result, _colon_element(A, b))
    return result


def krull_dimension(I: Ideal) -> int | None:
    """Dimension of R/I, or ``None`` for the unit ideal (empty variety).

    Computed as the largest set of variables containing the support of no
    leading monomial of the basis.
    """
    G = I.gb()
    if G.is_unit():
        return None
    n = I.ring.nvars
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in G.leading_monomials()]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0  # unreachable for a proper ideal: the empty set is independent
