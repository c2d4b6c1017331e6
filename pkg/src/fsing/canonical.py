"""Syzygies, free resolutions, Ext presentations and the Frobenius generator u.

Module elements are column vectors of polynomials.  Syzygies come from a
position-over-term Gröbner basis of the graph module ``(M*e_j, e_j)``:
the basis elements whose first ``rows`` components vanish generate the
syzygy module.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .arith import Polynomial, RingSpec
from .errors import (
    CyclicityError,
    InputError,
    InternalConsistencyError,
    NoTestElementError,
    PreconditionError,
    ResolutionIncompleteError,
    RingMismatchError,
)
from .groebner import (
    Ideal,
    engine_for,
    frobenius_power_ideal,
    ideal_colon,
    ideal_intersection,
    ideal_membership,
    krull_dimension,
    normal_form,
)


class PolyMatrix:
    """A rows x cols matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: RingSpec, entries: Sequence[Sequence[Polynomial]], rows=None, cols=None):
        entries = tuple(tuple(ring.constant(x) if isinstance(x, int) else x for x in r) for r in entries)
        self.rows = len(entries) if rows is None else rows
        if cols is None:
            cols = len(entries[0]) if entries else 0
        self.cols = cols
        if len(entries) != self.rows or any(len(r) != cols for r in entries):
            raise InputError("matrix is not rectangular")
        for r in entries:
            for x in r:
                if x.ring != ring:
                    raise RingMismatchError("matrix entries over different rings")
        self.ring = ring
        self.entries = entries

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def from_columns(cls, ring, rows: int, columns: Sequence[Sequence[Polynomial]]):
        cols = len(columns)
        return cls(ring, [[columns[j][i] for j in range(cols)] for i in range(rows)], rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, [list(c) for c in self.columns()], self.cols, self.rows)

    def __mul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        z = self.ring.zero()
        out = [
            [sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), z) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return PolyMatrix(self.ring, out, self.rows, other.cols)

    def apply(self, v: Sequence[Polynomial]) -> list:
        z = self.ring.zero()
        return [sum((self.entries[i][k] * v[k] for k in range(self.cols)), z) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"

    def __str__(self):
        if not self.rows or not self.cols:
            return f"<{self.rows}x{self.cols} matrix>"
        cells = [[str(x) for x in r] for r in self.entries]
        widths = [max(len(cells[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


@dataclass(frozen=True)
class ResolutionStep:
    differential: PolyMatrix


# --- module Gröbner helpers ------------------------------------------------


def _vec_to_engine(v: Sequence[Polynomial], offset: int = 0) -> list:
    return [((offset + i, m), c) for i, f in enumerate(v) for m, c in f.terms]


def _engine_to_vec(ring: RingSpec, v: list, rank: int, offset: int = 0) -> list:
    buckets = [[] for _ in range(rank)]
    for (pos, m), c in v:
        buckets[pos - offset].append((m, c))
    return [Polynomial._from_sorted(ring, b) for b in buckets]


def module_gb(ring: RingSpec, vectors: Sequence[Sequence[Polynomial]]) -> list:
    eng = engine_for(ring)
    return eng.groebner([_vec_to_engine(v) for v in vectors], rank_one=False)


def module_membership(ring: RingSpec, v: Sequence[Polynomial], gb: list) -> bool:
    eng = engine_for(ring)
    return not eng.reduce(dict(_vec_to_engine(v)), gb)


def _vec_degree(v: Sequence[Polynomial], weights: Sequence[int]) -> int:
    return max((f.degree() + w for f, w in zip(v, weights) if f), default=-1)


def minimize_generators(ring: RingSpec, vectors: Sequence[Sequence[Polynomial]], weights=None) -> list:
    """Drop generators lying in the span of the ones kept before them.

    Candidates are visited by increasing (weighted) degree, which yields a
    minimal generating set for graded modules.
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    weights = weights or [0] * len(vectors[0])
    vectors.sort(key=lambda v: _vec_degree(v, weights))
    kept: list = []
    gb: list = []
    for v in vectors:
        if kept and module_membership(ring, v, gb):
            continue
        kept.append(v)
        gb = module_gb(ring, kept)
    return kept


def minimal_generators(I: Ideal) -> list:
    return [v[0] for v in minimize_generators(I.ring, [[g] for g in I.gb().elements])]


def column_degrees(M: PolyMatrix, row_degrees: Sequence[int] | None = None) -> list:
    """Degrees of the source basis making ``M`` degree-preserving (graded case)."""
    row_degrees = row_degrees or [0] * M.rows
    out = []
    for j in range(M.cols):
        out.append(max((M[i, j].degree() + row_degrees[i] for i in range(M.rows) if M[i, j]), default=0))
    return out


def syzygy_matrix(M: PolyMatrix, row_degrees: Sequence[int] | None = None) -> PolyMatrix:
    """Columns generating ``{v | M v = 0}`` (minimized when graded).

    ``row_degrees`` are the degrees of the target basis, used only to visit
    candidate syzygies in degree order while minimizing.
    """
    ring, r, m = M.ring, M.rows, M.cols
    if m == 0:
        return PolyMatrix.zeros(ring, 0, 0)
    graph = []
    for j in range(m):
        col = M.column(j)
        graph.append(_vec_to_engine(col) + [((r + j, (0,) * ring.nvars), 1)])
    eng = engine_for(ring)
    G = eng.groebner(graph, rank_one=False)
    syz = [_engine_to_vec(ring, g, m, offset=r) for g in G if g[0][0][0] >= r]
    syz = minimize_generators(ring, syz, column_degrees(M, row_degrees))
    for v in syz:
        if any(M.apply(v)):
            raise InternalConsistencyError("computed syzygy is not killed by the matrix")
    return PolyMatrix.from_columns(ring, m, syz)


# --- resolutions -----------------------------------------------------------


def _prune_units(mats: list) -> list:
    """Remove split-exact pieces ``R --unit--> R`` from a complex.

    ``mats[i]`` maps F_{i+1} -> F_i.  A unit entry ``a`` at (r, c) of
    ``mats[i]`` lets us drop basis vector c of F_{i+1} and r of F_i: column
    r of the previous map and row c of the next one disappear and
    ``mats[i]`` is replaced by its Schur complement.
    """
    ring = mats[0].ring
    ranks = [1] + [m.cols for m in mats]
    ds = [[list(row) for row in m.entries] for m in mats]
    changed = True
    while changed:
        changed = False
        for i in range(1, len(ds)):  # the map onto F_0 = R keeps its row
            d = ds[i]
            hit = next(((r, c, x) for r, row in enumerate(d) for c, x in enumerate(row) if x.is_unit()), None)
            if hit is None:
                continue
            r, c, a = hit
            inv = pow(a.leading_coefficient(), -1, ring.p)
            ds[i] = [
                [row[cc] - row[c].scale(inv) * d[r][cc] for cc in range(ranks[i + 1]) if cc != c]
                for rr, row in enumerate(d)
                if rr != r
            ]
            ds[i - 1] = [[x for cc, x in enumerate(row) if cc != r] for row in ds[i - 1]]
            if i + 1 < len(ds):
                ds[i + 1] = [row for rr, row in enumerate(ds[i + 1]) if rr != c]
            ranks[i] -= 1
            ranks[i + 1] -= 1
            changed = True
    return [PolyMatrix(ring, ds[i], ranks[i], ranks[i + 1]) for i in range(len(ds))]


def free_resolution(I: Ideal, max_length: int | None = None) -> list[ResolutionStep]:
    """Minimal free resolution of R/I: ``steps[i]`` is d_{i+1}: F_{i+1} -> F_i."""
    ring = I.ring
    if I.is_unit():
        raise PreconditionError("free_resolution needs a proper ideal")
    max_length = max_length or ring.nvars + 1
    gens = minimal_generators(I)
    if not gens:
        return []
    mats = [PolyMatrix(ring, [gens])]
    degrees = [0]
    while True:
        nxt = syzygy_matrix(mats[-1], degrees)
        degrees = column_degrees(mats[-1], degrees)
        if nxt.cols == 0:
            break
        if len(mats) >= max_length:
            partial = [ResolutionStep(m) for m in mats]
            raise ResolutionIncompleteError(f"resolution longer than {max_length}", partial)
        mats.append(nxt)
    out = []
    for m in _prune_units(mats):
        if m.cols == 0:
            break
        out.append(ResolutionStep(m))
    for a, b in zip(out, out[1:]):
        if not (a.differential * b.differential).is_zero():
            raise InternalConsistencyError("consecutive differentials do not compose to zero")
    return out


def _minimize_presentation(P: PolyMatrix) -> PolyMatrix:
    ring = P.ring
    rows = [list(r) for r in P.entries]
    ncols = P.cols
    while True:
        hit = None
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                if x.is_unit():
                    hit = (r, c, x)
                    break
            if hit:
                break
        if not hit:
            break
        r, c, a = hit
        inv = pow(a.leading_coefficient(), -1, ring.p)
        pivot = rows[r]
        rows = [
            [row[cc] - row[c].scale(inv) * pivot[cc] for cc in range(ncols) if cc != c]
            for rr, row in enumerate(rows)
            if rr != r
        ]
        ncols -= 1
    nrows = len(rows)
    columns = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    columns = minimize_generators(ring, columns)
    return PolyMatrix.from_columns(ring, nrows, columns)


def ext_presentation(I: Ideal, delta: int, resolution: list | None = None) -> PolyMatrix:
    """Minimal presentation matrix of ``Ext^delta_R(R/I, R)``: rows are generators."""
    ring = I.ring
    dim = krull_dimension(I)
    if dim is None:
        raise PreconditionError("Ext of R/R is zero; need a proper ideal")
    if delta < 1 or delta != ring.nvars - dim:
        raise PreconditionError(f"delta must equal dim R - dim R/I = {ring.nvars - dim}, got {delta}")
    res = resolution if resolution is not None else free_resolution(I, max(ring.nvars, delta) + 1)
    ds = [s.differential for s in res]
    if len(ds) < delta:
        return PolyMatrix.zeros(ring, 0, 0)
    d_t = ds[delta - 1].transpose()  # F_{delta-1}^* -> F_delta^*
    if len(ds) == delta:
        return _minimize_presentation(d_t)
    nxt_t = ds[delta].transpose()  # F_delta^* -> F_{delta+1}^*
    K = syzygy_matrix(nxt_t)
    k = K.cols
    big = PolyMatrix(ring, [list(K.entries[i]) + list(d_t.entries[i]) for i in range(K.rows)], K.rows, k + d_t.cols)
    rel = syzygy_matrix(big)
    relations = [col[:k] for col in rel.columns() if any(col[:k])]
    P = PolyMatrix.from_columns(ring, k, relations) if relations else PolyMatrix.zeros(ring, k, 0)
    return _minimize_presentation(P)


# --- the Frobenius generator ------------------------------------------------


def frobenius_map_module(I: Ideal, J: Ideal) -> Ideal:
    """``(I^[p] : I) ∩ (J^[p] : J)``."""
    M = ideal_colon(frobenius_power_ideal(I, 1), I)
    if not J.is_unit():
        M = ideal_intersection(M, ideal_colon(frobenius_power_ideal(J, 1), J))
    return M


def _generates(u: Polynomial, M: Ideal, Ip: Ideal) -> bool:
    target = Ideal(M.ring, [u] + list(Ip.gb().elements))
    return all(ideal_membership(m, target) for m in M.gb().elements)


def u_generator(I: Ideal, J: Ideal | None = None, seed: int = 0, draws: int = 500) -> Polynomial:
    """Generator of ``((I^[p]:I) ∩ (J^[p]:J)) / I^[p]``, in normal form mod I^[p].

    ``J`` is the pre-image of a canonical ideal; ``None`` means J = R.
    """
    ring = I.ring
    J = J if J is not None else Ideal.unit(ring)
    if not I.issubset(J):
        raise InputError("the canonical pre-image J must contain I")
    Ip = frobenius_power_ideal(I, 1)
    Ipgb = Ip.gb()
    M = frobenius_map_module(I, J)
    cands = []
    for g in sorted(M.gb().elements, key=lambda g: (g.degree(), ring.order.key(g.leading_monomial()))):
        nf = normal_form(g, Ipgb)
        if nf:
            cands.append(nf)
    if not cands:
        raise CyclicityError("the Frobenius-map module is zero modulo I^[p]")
    found = next((c for c in cands if _generates(c, M, Ip)), None)
    if found is None:
        rng = random.Random(seed)
        for _ in range(draws):
            combo = sum((c.scale(rng.randrange(ring.p)) for c in cands), ring.zero())
            combo = normal_form(combo, Ipgb)
            if combo and _generates(combo, M, Ip):
                found = combo
                break
    if found is None:
        raise CyclicityError("no cyclic generator found; J may not be a canonical pre-image or R/I is not CM")
    u = found.monic()
    Jp = frobenius_power_ideal(J, 1)
    if not all(ideal_membership(u * g, Ip) for g in I.generators) or not all(
        ideal_membership(u * g, Jp) for g in J.generators
    ):
        raise InternalConsistencyError("u does not map I into I^[p] and J into J^[p]")
    return u


# --- test elements -----------------------------------------------------------


def _det(rows: list) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0].ring.zero()


def jacobian_ideal(I: Ideal) -> Ideal:
    """``I`` plus the codim-sized minors of the Jacobian matrix of I."""
    ring = I.ring
    dim = krull_dimension(I)
    if dim is None:
        raise PreconditionError("the unit ideal has no singular locus")
    h = ring.nvars - dim
    gens = minimal_generators(I)
    if h == 0:
        return Ideal.unit(ring)
    jac = [[g.derivative(i) for i in range(ring.nvars)] for g in gens]
    minors = []
    for rs in itertools.combinations(range(len(gens)), h):
        for cs in itertools.combinations(range(ring.nvars), h):
            d = _det([[jac[r][c] for c in cs] for r in rs])
            if d:
                minors.append(d)
    return (Ideal(ring, minors) + I).reduced()


def is_nonzerodivisor(c: Polynomial, I: Ideal) -> bool:
    """``(I : c) == I``."""
    if not c:
        return False
    return ideal_colon(I, Ideal(I.ring, [c])).issubset(I)


def suggest_test_element(I: Ideal, seed: int = 0, max_draws: int = 200) -> Polynomial:
    """Seeded random element of the Jacobian ideal that is a nonzerodivisor mod I.

    Assumes R/I reduced and equidimensional; not verified.
    """
    ring = I.ring
    if I.is_unit():
        raise PreconditionError("suggest_test_element needs a proper ideal")
    jac = jacobian_ideal(I)
    if jac.is_unit():
        return ring.one()
    Igb = I.gb()
    pool = []
    for g in jac.gb().elements:
        nf = normal_form(g, Igb)
        if nf and nf not in pool:
            pool.append(nf)
    rng = random.Random(seed)
    for _ in range(max_draws):
        c = sum((g.scale(rng.randrange(ring.p)) for g in pool), ring.zero())
        if c and is_nonzerodivisor(c, I):
            return c.monic()
    raise NoTestElementError(
        f"no nonzerodivisor found in the Jacobian ideal after {max_draws} draws; "
        "R/I may be non-reduced, or supply c explicitly"
    )
