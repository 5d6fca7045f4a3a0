"""Plane polynomial endomorphisms: etale test, automorphism decision by
elementary reduction, inversion, and seeded test-map generation.

The decision procedure strips elementary factors: whenever one component's
degree dominates, its leading form must be a scalar multiple of a power of
the other's leading form, and subtracting that multiple lowers the degree.
A map that reduces to an invertible affine map is an automorphism, and the
collected factors reproduce it exactly.  Every plane automorphism is such
a composition of affine and triangular maps, so on a map with constant
nonzero Jacobian the reduction is only allowed to stall if the map is not
an automorphism at all; no such map is known, and the stalled state is
therefore surfaced as a first-class, logged result rather than an error.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import List, Optional, Sequence, Tuple, Union

from .errors import CapExceeded, NotAnAutomorphism, PolyParseError
from .poly import Poly, compose, format_poly, jacobian_det, parse_poly
from .vfield import EtaleMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyMap:
    """An endomorphism candidate: x maps to f, y maps to g."""

    f: Poly
    g: Poly

    def __str__(self) -> str:
        return f"{format_poly(self.f)} ; {format_poly(self.g)}"

    @property
    def is_identity(self) -> bool:
        return self.f == Poly.variable("x") and self.g == Poly.variable("y")

    def max_degree(self) -> int:
        return max(self.f.degree() or 0, self.g.degree() or 0)


def identity_map() -> PolyMap:
    return PolyMap(Poly.variable("x"), Poly.variable("y"))


def parse_poly_map(text: str) -> PolyMap:
    parts = text.split(";")
    if len(parts) != 2:
        raise PolyParseError(text, len(text), "exactly one ';' separating f and g")
    return PolyMap(parse_poly(parts[0]), parse_poly(parts[1]))


def compose_maps(a: Union[PolyMap, EtaleMap], b: Union[PolyMap, EtaleMap]) -> PolyMap:
    """(a o b): substitute b into a's components."""
    return PolyMap(compose(a.f, b.f, b.g), compose(a.g, b.f, b.g))


def is_etale(m: Union[PolyMap, EtaleMap]) -> Optional[EtaleMap]:
    """The validated constant-Jacobian wrapper, or None."""
    j = jacobian_det(m.f, m.g)
    if j.is_zero or not j.is_constant():
        return None
    return EtaleMap(m.f, m.g, j.constant_term)


# ------------------------------------------------------------------- factors

@dataclass(frozen=True)
class LinearFactor:
    """Affine factor (a*x + b*y + t1, c*x + d*y + t2) with invertible matrix."""

    matrix: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]
    translation: Tuple[Fraction, Fraction]

    def as_map(self) -> PolyMap:
        (a, b), (c, d) = self.matrix
        t1, t2 = self.translation
        x, y = Poly.variable("x"), Poly.variable("y")
        return PolyMap(a * x + b * y + t1, c * x + d * y + t2)

    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def inverse(self) -> "LinearFactor":
        (a, b), (c, d) = self.matrix
        det = a * d - b * c
        inv = ((d / det, -b / det), (-c / det, a / det))
        t1, t2 = self.translation
        return LinearFactor(
            inv, (-(inv[0][0] * t1 + inv[0][1] * t2), -(inv[1][0] * t1 + inv[1][1] * t2))
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": "linear",
            "matrix": [[str(v) for v in row] for row in self.matrix],
            "translation": [str(v) for v in self.translation],
        }


@dataclass(frozen=True)
class TriangularFactor:
    """Shear of one variable by a polynomial in the other.

    variable "y" means (x, y + shift(x)); variable "x" means (x + shift(y), y).
    """

    variable: str
    shift: Poly

    def as_map(self) -> PolyMap:
        x, y = Poly.variable("x"), Poly.variable("y")
        if self.variable == "y":
            return PolyMap(x, y + compose(self.shift, x, Poly.zero()))
        return PolyMap(x + compose(self.shift, y, Poly.zero()), y)

    def inverse(self) -> "TriangularFactor":
        return TriangularFactor(self.variable, -self.shift)

    def to_json_dict(self) -> dict:
        return {
            "kind": "triangular",
            "variable": self.variable,
            "shift": format_poly(self.shift),
        }


Factor = Union[LinearFactor, TriangularFactor]


@dataclass
class ElementaryFactorization:
    """Ordered factors whose left-to-right composition is the source map."""

    factors: List[Factor]

    def as_map(self) -> PolyMap:
        acc = identity_map()
        for factor in self.factors:
            acc = compose_maps(acc, factor.as_map())
        return acc

    def inverse_map(self) -> PolyMap:
        acc = identity_map()
        for factor in reversed(self.factors):
            acc = compose_maps(acc, factor.inverse().as_map())
        return acc

    def to_json_dict(self) -> dict:
        return {"factors": [f.to_json_dict() for f in self.factors]}


# ------------------------------------------------------------------ decision

@dataclass
class AutomorphismDecision:
    """Outcome of the reduction: "automorphism", "not_automorphism" or "stuck".

    A stuck state on a constant-Jacobian map would exhibit a plane
    endomorphism outside everything currently known; it is logged and kept
    around for inspection instead of being raised.
    """

    status: str
    factorization: Optional[ElementaryFactorization] = None
    reason: Optional[str] = None
    state: Optional[dict] = None

    @property
    def is_automorphism(self) -> bool:
        return self.status == "automorphism"


def decide_automorphism(m: PolyMap, degree_cap: Optional[int] = None) -> AutomorphismDecision:
    """Factor m into elementary automorphisms or report why that fails.

    degree_cap guards the loop; genuine reduction steps strictly lower
    degrees, so hitting the cap raises CapExceeded only on internal error.
    """
    et = is_etale(m)
    if et is None:
        return AutomorphismDecision(
            "not_automorphism",
            reason=f"not etale: jacobian determinant is {jacobian_det(m.f, m.g)}",
        )
    if degree_cap is None:
        degree_cap = m.max_degree()
    f, g = m.f, m.g
    factors: List[Factor] = []
    while True:
        df = f.degree() or 0
        dg = g.degree() or 0
        if max(df, dg) > degree_cap:
            raise CapExceeded(
                f"component degree {max(df, dg)} exceeded cap {degree_cap}",
                partial={"f": f, "g": g, "factors": factors},
            )
        if df <= 1 and dg <= 1:
            a, b = f.coefficient(1, 0), f.coefficient(0, 1)
            c, d = g.coefficient(1, 0), g.coefficient(0, 1)
            if a * d - b * c == 0:
                return AutomorphismDecision(
                    "not_automorphism", reason="affine endpoint is singular"
                )
            factors.append(
                LinearFactor(((a, b), (c, d)), (f.constant_term, g.constant_term))
            )
            return AutomorphismDecision(
                "automorphism", ElementaryFactorization(factors)
            )
        stripped = False
        if dg >= df:
            shift, g = _strip_component(f, g)
            if shift is not None:
                factors.append(TriangularFactor("y", shift))
                stripped = True
        if not stripped and df >= dg:
            shift, f = _strip_component(g, f)
            if shift is not None:
                factors.append(TriangularFactor("x", shift))
                stripped = True
        if not stripped:
            state = {
                "f": format_poly(f),
                "g": format_poly(g),
                "factors_so_far": [fc.to_json_dict() for fc in factors],
            }
            logger.warning(
                "ANOMALY: elementary reduction stalled on an etale map; "
                "state: %s", json.dumps(state),
            )
            return AutomorphismDecision(
                "stuck",
                reason="reduction stalled on an etale map",
                state=state,
            )


def _strip_component(base: Poly, target: Poly) -> Tuple[Optional[Poly], Poly]:
    """Lower deg(target) by subtracting multiples of powers of base.

    Strips as long as the leading form of target is a scalar multiple of a
    power of the leading form of base and the degree stays at least
    deg(base).  Returns (shift, reduced target) where the shift s is the
    one-variable polynomial with target_reduced = target - s(base), or
    (None, target) when no strip applies.
    """
    shift = Poly.zero()
    while True:
        db = base.degree() or 0
        dt = target.degree() or 0
        if dt < db or dt <= 1:
            break
        if db == 0 or dt % db != 0:
            break
        k = dt // db
        base_form = base.homogeneous_part(db)
        target_form = target.homogeneous_part(dt)
        c = target_form.leading_coefficient() / base_form.leading_coefficient() ** k
        if target_form != (base_form ** k).scale(c):
            break
        target = target - (base ** k).scale(c)
        shift = shift + Poly.monomial(k, 0, c)
    return (None, target) if shift.is_zero else (shift, target)


def invert(m: PolyMap, degree_cap: Optional[int] = None) -> PolyMap:
    """Exact inverse of an automorphism: invert each elementary factor and
    compose in reverse.  Raises NotAnAutomorphism otherwise."""
    decision = decide_automorphism(m, degree_cap)
    if not decision.is_automorphism:
        raise NotAnAutomorphism(decision.reason or decision.status)
    return decision.factorization.inverse_map()


# ----------------------------------------------------------- test generation

def random_automorphism(seed: int, n_factors: int, deg_bound: int) -> PolyMap:
    """Deterministic-from-seed tame automorphism.

    Interleaves n_factors random triangular shears (shift degree between 2
    and deg_bound, alternating direction randomly) with random invertible
    affine maps; n_factors = 0 yields a random affine automorphism.  The
    composite degree is at most the product of the shear degrees.
    """
    if n_factors < 0:
        raise ValueError("n_factors must be nonnegative")
    if n_factors > 0 and deg_bound < 2:
        raise ValueError("deg_bound must be at least 2 when shears are requested")
    rng = Random(seed)
    factors: List[Factor] = [_random_linear(rng)]
    for _ in range(n_factors):
        factors.append(_random_triangular(rng, deg_bound))
        factors.append(_random_linear(rng))
    return ElementaryFactorization(factors).as_map()


def _random_linear(rng: Random) -> LinearFactor:
    while True:
        a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
        if a * d - b * c != 0:
            break
    t1, t2 = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
    return LinearFactor(((a, b), (c, d)), (t1, t2))


def _random_triangular(rng: Random, deg_bound: int) -> TriangularFactor:
    k = rng.randint(2, deg_bound)
    coeffs = {(k, 0): Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))}
    for i in range(k):
        c = rng.randint(-3, 3)
        if c:
            coeffs[(i, 0)] = Fraction(c)
    return TriangularFactor(rng.choice(["x", "y"]), Poly(coeffs))
