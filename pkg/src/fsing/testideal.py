"""Parameter test ideals of Cohen-Macaulay quotients R/I.

The pipeline: find the Frobenius structure ``u`` on the dual of the top
local cohomology, make sure it is torsion-free, close ``cJ + I`` under it
and divide by J.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .arith import Polynomial
from .canonical import free_resolution, is_nonzerodivisor, suggest_test_element, u_generator
from .errors import (
    InputError,
    InternalConsistencyError,
    InvalidTestElementError,
    NotCohenMacaulayError,
    NotTorsionFreeError,
)
from .frobroot import (
    FrobeniusPair,
    NilpotencyReport,
    fedder_f_injective,
    is_es_ideal,
    nilpotency_analysis,
    star_closure,
)
from .groebner import Ideal, ideal_colon, ideal_membership, krull_dimension


@dataclass(frozen=True)
class TestIdealReport:
    __test__ = False  # keep pytest from collecting this

    u: Polynomial
    J: Ideal
    c: Polynomial
    star: Ideal
    tau: Ideal
    f_rational: bool
    nilpotency: NilpotencyReport
    seed: int = 0
    timings: dict = field(default_factory=dict, compare=False)


def check_cohen_macaulay(I: Ideal) -> int:
    """Return the codimension of I, raising unless pd(R/I) equals it."""
    dim = krull_dimension(I)
    if dim is None:
        raise InputError("the unit ideal does not define a ring")
    codim = I.ring.nvars - dim
    length = len(free_resolution(I))
    if length != codim:
        raise NotCohenMacaulayError(
            f"R/I is not Cohen-Macaulay: projective dimension {length} but codimension {codim}"
        )
    return codim


def _canonical_ideal(I: Ideal, J, gorenstein: bool) -> Ideal:
    if gorenstein:
        if J is not None:
            raise InputError("give either a canonical ideal or the Gorenstein flag, not both")
        return Ideal.unit(I.ring)
    if J is None:
        raise InputError("a canonical pre-image J is required unless the ring is Gorenstein")
    if J.ring != I.ring:
        raise InputError("J is not over the ring of I")
    return (J + I).reduced()


def parameter_test_ideal(
    I: Ideal,
    J: Ideal | None = None,
    gorenstein: bool = False,
    c: Polynomial | None = None,
    seed: int = 0,
) -> TestIdealReport:
    """Pre-image in R of the parameter test ideal of R/I.

    ``J`` is the pre-image of a canonical ideal of R/I; with ``gorenstein``
    it is taken to be R.  Without ``c`` a test element is drawn from the
    Jacobian ideal using ``seed``.
    """
    ring = I.ring
    timings = {}

    def stage(name, fn, *args, **kw):
        t = time.perf_counter()
        out = fn(*args, **kw)
        timings[name] = time.perf_counter() - t
        return out

    J = _canonical_ideal(I, J, gorenstein)
    stage("cohen_macaulay", check_cohen_macaulay, I)
    u = stage("u_generator", u_generator, I, J, seed=seed)
    fp = FrobeniusPair(I, u)
    nil = stage("nilpotency", nilpotency_analysis, fp)
    if not nil.torsion_free:
        raise NotTorsionFreeError(f"not T-torsion-free (index of nilpotency {nil.eta})")

    if c is None:
        c = stage("test_element", suggest_test_element, I, seed=seed)
    else:
        if c.ring != ring:
            raise InputError("c is not over the ring of I")
        if not is_nonzerodivisor(c, I):
            raise InvalidTestElementError(f"c = {c} is a zero divisor modulo I (or lies in I)")

    start = (Ideal(ring, [c]) * J + I).reduced()
    L = stage("star_closure", star_closure, start, u, 1)
    tau = stage("colon", ideal_colon, L, J).reduced()

    if not ideal_membership(c, tau):
        raise InternalConsistencyError("the test element is not in the computed test ideal")
    if not I.issubset(tau):
        raise InternalConsistencyError("the computed test ideal does not contain I")
    if not is_es_ideal(L, fp):
        raise InternalConsistencyError("the star closure is not stable under u")

    return TestIdealReport(
        u=u,
        J=J,
        c=c,
        star=L,
        tau=tau,
        f_rational=tau.is_unit(),
        nilpotency=nil,
        seed=seed,
        timings=timings,
    )


@dataclass(frozen=True)
class FInjectivityReport:
    verdict: bool
    eta: int
    nil_ideal: Ideal
    u: Polynomial


def f_injectivity_report(
    I: Ideal,
    mode: str = "ci",
    J: Ideal | None = None,
    gorenstein: bool = False,
    seed: int = 0,
) -> FInjectivityReport:
    """Injectivity of the natural Frobenius action on top local cohomology.

    ``mode="ci"`` treats the generators of I as a regular sequence and uses
    ``u = (prod f_i)^(p-1)``; ``mode="general"`` finds u from J.
    """
    if mode == "ci":
        gens = list(I.generators)
        if not gens:
            raise InputError("complete-intersection mode needs at least one generator")
        u = fedder_f_injective(gens).u
    elif mode == "general":
        J = _canonical_ideal(I, J, gorenstein)
        check_cohen_macaulay(I)
        u = u_generator(I, J, seed=seed)
    else:
        raise InputError(f"unknown mode {mode!r}")
    rep = nilpotency_analysis(FrobeniusPair(I, u))
    return FInjectivityReport(verdict=rep.torsion_free, eta=rep.eta, nil_ideal=rep.nil_ideal, u=u)
