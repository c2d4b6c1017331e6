"""Prime fields, monomial orders and sparse polynomials over F_p.

Monomials are plain tuples of non-negative ints.  A :class:`Polynomial`
stores its terms as a tuple of ``(monomial, coefficient)`` pairs sorted
strictly descending in the ring's monomial order, so two equal polynomials
always have identical term tuples.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ExponentOverflowError, InputError, RingMismatchError

Monomial = tuple  # tuple[int, ...]

MAX_EXPONENT = 2**31 - 1
MAX_PRIME = 2**31

LESS, EQUAL, GREATER = -1, 0, 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeFieldElement:
    """An element of F_p; ``value`` is always reduced into ``[0, p)``."""

    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise RingMismatchError("field elements of different characteristic")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.modulus)

    def __pow__(self, n: int):
        return PrimeFieldElement(pow(self.value, n, self.modulus), self.modulus)

    def inverse(self) -> PrimeFieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return PrimeFieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * PrimeFieldElement(o, self.modulus).inverse()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


# --- monomial orders -------------------------------------------------------


def _lex_key(m):
    return m


def _grevlex_key(m):
    return (sum(m),) + tuple(-a for a in reversed(m))


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex`` or ``elim`` (eliminate the first ``k`` variables).

    ``elim`` is a two-block order: grevlex on the first ``k`` variables
    decides, ties are broken by grevlex on the rest.
    """

    kind: str = "grevlex"
    k: int = 0
    key: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "lex":
            key = _lex_key
        elif self.kind == "grevlex":
            key = _grevlex_key
        elif self.kind == "elim":
            if self.k < 1:
                raise InputError("elimination order needs k >= 1")
            k = self.k

            def key(m):
                return _grevlex_key(m[:k]) + _grevlex_key(m[k:])

        else:
            raise InputError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "key", key)

    @classmethod
    def parse(cls, text: str) -> MonomialOrder:
        text = text.strip()
        if text.startswith("elim"):
            arg = text[4:].strip("() ")
            try:
                return cls("elim", int(arg))
            except ValueError:
                raise InputError(f"bad elimination order {text!r}") from None
        return cls(text)

    def __str__(self):
        return f"elim({self.k})" if self.kind == "elim" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def compare_monomials(order: MonomialOrder, a: Monomial, b: Monomial) -> int:
    """Return LESS, EQUAL or GREATER."""
    if len(a) != len(b):
        raise InputError("monomials of different length")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(map(operator.le, a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def _check_exponents(m: Monomial) -> None:
    if m and max(m) > MAX_EXPONENT:
        raise ExponentOverflowError(f"exponent {max(m)} exceeds 32-bit range")


# --- rings -----------------------------------------------------------------


@dataclass(frozen=True)
class RingSpec:
    """The polynomial ring F_p[variables] with a fixed monomial order."""

    p: int
    variables: tuple
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
            raise InputError(f"characteristic must be a prime below 2^31, got {self.p}")
        if len(set(self.variables)) != len(self.variables):
            raise InputError("variable names must be unique")
        if isinstance(self.order, str):
            object.__setattr__(self, "order", MonomialOrder.parse(self.order))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def with_order(self, order: MonomialOrder) -> RingSpec:
        return RingSpec(self.p, self.variables, order)

    def compatible(self, other: RingSpec) -> bool:
        return self.p == other.p and self.variables == other.variables

    def poly(self, terms: Mapping | Iterable = ()) -> Polynomial:
        return Polynomial(self, terms)

    def zero(self) -> Polynomial:
        return Polynomial._from_sorted(self, ())

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c: int) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name_or_index) -> Polynomial:
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial._from_sorted(self, ((tuple(e), 1),))

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c: int = 1) -> Polynomial:
        return Polynomial(self, {tuple(exps): c})

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.variables)}] ({self.order})"


# --- polynomials -----------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial over F_p in canonical (order-sorted) form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | Iterable = ()):
        p, n = ring.p, ring.nvars
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = tuple(m)
            if len(m) != n:
                raise InputError(f"monomial {m} has wrong length for {n} variables")
            if any(a < 0 for a in m):
                raise InputError(f"negative exponent in {m}")
            acc[m] = (acc.get(m, 0) + int(c)) % p
        for m in acc:
            _check_exponents(m)
        key = ring.order.key
        self.ring = ring
        self.terms = tuple(sorted(((m, c) for m, c in acc.items() if c), key=lambda t: key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def _from_sorted(cls, ring: RingSpec, terms) -> Polynomial:
        # terms must already be canonical: nonzero, reduced, descending
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = tuple(terms)
        obj._hash = None
        return obj

    # -- inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def is_unit(self) -> bool:
        return bool(self.terms) and self.is_constant()

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][0]

    def leading_coefficient(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m, _ in self.terms}) <= 1

    def coefficient(self, m: Monomial) -> int:
        return dict(self.terms).get(tuple(m), 0)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def monic(self) -> Polynomial:
        if not self.terms or self.terms[0][1] == 1:
            return self
        return self.scale(pow(self.terms[0][1], -1, self.ring.p))

    # -- arithmetic

    def _check(self, other) -> Polynomial:
        if isinstance(other, int):
            return self.ring.constant(other)
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"polynomials over different rings: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            acc[m] = (acc.get(m, 0) + c) % p
        return Polynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial._from_sorted(self.ring, ((m, p - c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c: int) -> Polynomial:
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial._from_sorted(self.ring, ((m, a * c % p) for m, a in self.terms))

    def mul_term(self, mono: Monomial, c: int = 1) -> Polynomial:
        """Multiply by the single term ``c * x^mono`` (order-preserving)."""
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        out = tuple((mono_mul(m, mono), a * c % p) for m, a in self.terms)
        if out and max(max(m, default=0) for m, _ in out) > MAX_EXPONENT:
            raise ExponentOverflowError("exponent exceeds 32-bit range")
        return Polynomial._from_sorted(self.ring, out)

    def __mul__(self, other):
        other = self._check(other)
        if len(other.terms) == 1:
            return self.mul_term(*other.terms[0])
        if len(self.terms) == 1:
            return other.mul_term(*self.terms[0])
        p = self.ring.p
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(map(operator.add, m1, m2))
                acc[m] = (acc.get(m, 0) + c1 * c2) % p
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        """Power by repeated squaring."""
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        if self.terms and n * self.degree() > MAX_EXPONENT:
            raise ExponentOverflowError(f"power {n} overflows 32-bit exponents")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, e: int = 1) -> Polynomial:
        """Return ``self^(p^e)``: coefficients are fixed by Fermat, exponents scale."""
        if e < 1:
            raise ValueError("e must be >= 1")
        q = self.ring.p**e
        if self.terms and max(max(m, default=0) for m, _ in self.terms) * q > MAX_EXPONENT:
            raise ExponentOverflowError(f"Frobenius power p^{e} overflows 32-bit exponents")
        # scaling every exponent by q preserves the (multiplicative) order
        return Polynomial._from_sorted(self.ring, ((tuple(a * q for a in m), c) for m, c in self.terms))

    def divide_exact(self, g: Polynomial) -> Polynomial:
        """Return ``h`` with ``self == h * g``; raise ArithmeticError otherwise."""
        g = self._check(g)
        if not g.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.ring.p
        lm, inv = g.terms[0][0], pow(g.terms[0][1], -1, p)
        rest = self
        quot: dict = {}
        while rest.terms:
            m, c = rest.terms[0]
            if not mono_divides(lm, m):
                raise ArithmeticError("division is not exact")
            qm = tuple(map(operator.sub, m, lm))
            qc = c * inv % p
            quot[qm] = qc
            rest = rest - g.mul_term(qm, qc)
        return Polynomial(self.ring, quot)

    def derivative(self, i: int) -> Polynomial:
        p = self.ring.p
        acc = {}
        for m, c in self.terms:
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                acc[tuple(mm)] = c * m[i] % p
        return Polynomial(self.ring, acc)

    def change_ring(self, ring: RingSpec, positions: Sequence[int] | None = None) -> Polynomial:
        """Map into ``ring``; variable ``i`` goes to position ``positions[i]``."""
        if ring.p != self.ring.p:
            raise RingMismatchError("cannot change characteristic")
        if positions is None:
            if ring.nvars != self.ring.nvars:
                raise RingMismatchError("variable count differs; give positions")
            if ring.order == self.ring.order:
                return Polynomial._from_sorted(ring, self.terms)
            return Polynomial(ring, self.terms)
        out = {}
        for m, c in self.terms:
            e = [0] * ring.nvars
            for i, a in enumerate(m):
                e[positions[i]] += a
            out[tuple(e)] = c
        return Polynomial(ring, out)

    # -- comparison and display

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.compatible(other.ring) and (
            self.terms == other.terms if self.ring.order == other.ring.order else dict(self.terms) == dict(other.terms)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for m, c in self.terms:
            factors = []
            for name, a in zip(names, m):
                if a == 1:
                    factors.append(name)
                elif a:
                    factors.append(f"{name}^{a}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_arith(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    """Functional form of ``+``, ``-``, ``*``."""
    if f.ring != g.ring:
        raise RingMismatchError("polynomials over different rings")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def frobenius_power_poly(f: Polynomial, e: int) -> Polynomial:
    return f.frobenius(e)
