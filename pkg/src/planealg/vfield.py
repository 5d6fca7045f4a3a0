"""Polynomial vector fields on the affine plane.

A vector field is a pair (p, q) of polynomials meaning p*d/dx + q*d/dy,
i.e. a derivation of the polynomial ring in x and y.  This module provides
the bracket, divergence, the Euler field, conjugation of fields by an
endomorphism with constant nonzero Jacobian determinant (an etale map),
and the standard finite-dimensional subalgebras used by the classifier.

Text form used by the CLI: ``(p) dx + (q) dy`` with the polynomial grammar
inside the parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .errors import BracketNotConstant, PolyParseError
from .poly import Poly, ScalarLike, compose, format_poly, jacobian_det, parse_poly, partial


@dataclass(frozen=True)
class VectorField:
    p: Poly
    q: Poly

    @property
    def is_zero(self) -> bool:
        return self.p.is_zero and self.q.is_zero

    def degree(self) -> Optional[int]:
        """Max component degree; None for the zero field."""
        degs = [d for d in (self.p.degree(), self.q.degree()) if d is not None]
        return max(degs) if degs else None

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.p, -self.q)

    def __rmul__(self, other: Union[Poly, ScalarLike]) -> "VectorField":
        # scalar or polynomial multiple h*D
        return VectorField(other * self.p, other * self.q)

    def __call__(self, h: Poly) -> Poly:
        """Apply the derivation: p*h_x + q*h_y."""
        return self.p * partial(h, "x") + self.q * partial(h, "y")

    def __str__(self) -> str:
        return format_vector_field(self)

    def __repr__(self) -> str:
        return f"VectorField({format_poly(self.p)!r}, {format_poly(self.q)!r})"


ZERO_FIELD = VectorField(Poly.zero(), Poly.zero())

#: Euler field x*d/dx + y*d/dy, the fixed complement of the divergence-free
#: fields inside the constant-divergence ones.
EULER = VectorField(Poly.variable("x"), Poly.variable("y"))


def apply(d: VectorField, h: Poly) -> Poly:
    return d(h)


def vf_bracket(d1: VectorField, d2: VectorField) -> VectorField:
    """Commutator of derivations, componentwise: [D1,D2] = (D1(p2)-D2(p1), D1(q2)-D2(q1))."""
    return VectorField(d1(d2.p) - d2(d1.p), d1(d2.q) - d2(d1.q))


def divergence(d: VectorField) -> Poly:
    return partial(d.p, "x") + partial(d.q, "y")


def hamiltonian_field(h: Poly) -> VectorField:
    """The divergence-free field h_x*d/dy - h_y*d/dx attached to h."""
    return VectorField(-partial(h, "y"), partial(h, "x"))


@dataclass(frozen=True)
class DivergenceClass:
    """Where a field sits in the divergence filtration.

    kind is "zero", "constant" or "general".  For the first two,
    ``constant`` holds Div D and ``divergence_free_part`` the component D0
    in the decomposition D = D0 + (c/2) * Euler.
    """

    kind: str
    constant: Optional[Fraction] = None
    divergence_free_part: Optional[VectorField] = None


def divergence_class(d: VectorField) -> DivergenceClass:
    div = divergence(d)
    if div.is_zero:
        return DivergenceClass("zero", Fraction(0), d)
    if div.is_constant():
        c = div.constant_term
        d0 = d - VectorField(
            Poly.variable("x").scale(c / 2), Poly.variable("y").scale(c / 2)
        )
        return DivergenceClass("constant", c, d0)
    return DivergenceClass("general")


# ----------------------------------------------------------------- etale maps

@dataclass(frozen=True)
class EtaleMap:
    """An endomorphism candidate (f, g) whose Jacobian determinant is a
    nonzero constant; jac caches that constant."""

    f: Poly
    g: Poly
    jac: Fraction

    @classmethod
    def from_components(cls, f: Poly, g: Poly) -> "EtaleMap":
        j = jacobian_det(f, g)
        if j.is_zero or not j.is_constant():
            raise BracketNotConstant(j)
        return cls(f, g, j.constant_term)

    def __str__(self) -> str:
        return f"{format_poly(self.f)} ; {format_poly(self.g)}"


IDENTITY_ETALE = EtaleMap(Poly.variable("x"), Poly.variable("y"), Fraction(1))


def etale_conjugate(a: EtaleMap, d: VectorField) -> VectorField:
    """Transport a field through an etale map.

    For an automorphism this is the conjugation a o D o a^{-1}; the same
    component formula makes sense for any constant nonzero Jacobian and is
    an injective Lie algebra homomorphism in D.
    """
    fx, fy = partial(a.f, "x"), partial(a.f, "y")
    gx, gy = partial(a.g, "x"), partial(a.g, "y")
    ap = compose(d.p, a.f, a.g)
    aq = compose(d.q, a.f, a.g)
    inv = Fraction(1) / a.jac
    return VectorField(
        (gy * ap - fy * aq).scale(inv),
        (fx * aq - gx * ap).scale(inv),
    )


# --------------------------------------------------------- standard subalgebras

_X = Poly.variable("x")
_Y = Poly.variable("y")
_ONE = Poly.constant(1)
_ZERO = Poly.zero()


def standard_basis(kind: str) -> List[VectorField]:
    """Fixed bases of the classical subalgebras.

    kinds:
      "sl2"           x*dy, y*dx, x*dx - y*dy (traceless linear fields)
      "saff2"         sl2 plus the translations dx, dy
      "aff2"          saff2 plus the Euler field
      "quadratic_sl2" the copy of sl2 generated by the degree-two field
                      x^2*dx - 2xy*dy together with x*dx - y*dy and dx;
                      isomorphic to sl2 but not conjugate to the linear one
    """
    dx = VectorField(_ONE, _ZERO)
    dy = VectorField(_ZERO, _ONE)
    x_dy = VectorField(_ZERO, _X)
    y_dx = VectorField(_Y, _ZERO)
    diag = VectorField(_X, -_Y)
    if kind == "sl2":
        return [x_dy, y_dx, diag]
    if kind == "saff2":
        return [dx, dy, diag, x_dy, y_dx]
    if kind == "aff2":
        return [dx, dy, VectorField(_X, _Y), diag, x_dy, y_dx]
    if kind == "quadratic_sl2":
        quad = VectorField(_X * _X, Poly.monomial(1, 1, -2))
        return [quad, diag, dx]
    raise ValueError(f"unknown basis kind {kind!r}")


def transported_basis(a: EtaleMap, kind: str) -> List[VectorField]:
    """Image of the standard saff2 / aff2 generators under an etale map.

    The generating set is expressed through the pair (f, g); when the
    Jacobian constant is not 1 the second component is divided by it first,
    which leaves the transported span unchanged.
    """
    f = a.f
    g = a.g if a.jac == 1 else a.g.scale(Fraction(1) / a.jac)
    d_f = hamiltonian_field(f)
    d_g = hamiltonian_field(g)
    d_f2 = hamiltonian_field(f * f)
    d_g2 = hamiltonian_field(g * g)
    if kind == "saff2":
        return [d_f, d_g, d_f2, d_g2, hamiltonian_field(f * g)]
    if kind == "aff2":
        return [d_f, d_g, d_f2, d_g2, f * d_g, g * d_f]
    raise ValueError(f"unknown basis kind {kind!r} (want saff2 or aff2)")


# ------------------------------------------------------------------ text form

def format_vector_field(d: VectorField) -> str:
    return f"({format_poly(d.p)}) dx + ({format_poly(d.q)}) dy"


def parse_vector_field(text: str) -> VectorField:
    """Parse ``(p) dx + (q) dy``; signs live inside the parentheses."""
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(token: str) -> None:
        nonlocal pos
        skip_ws()
        if not text.startswith(token, pos):
            raise PolyParseError(text, pos, f"{token!r}")
        pos += len(token)

    def poly_group() -> Poly:
        nonlocal pos
        expect("(")
        close = text.find(")", pos)
        if close < 0:
            raise PolyParseError(text, len(text), "')'")
        inner = text[pos:close]
        try:
            p = parse_poly(inner)
        except PolyParseError as err:
            raise PolyParseError(text, pos + err.position, err.expected) from None
        pos = close + 1
        return p

    p = poly_group()
    expect("dx")
    expect("+")
    q = poly_group()
    expect("dy")
    skip_ws()
    if pos != len(text):
        raise PolyParseError(text, pos, "end of input")
    return VectorField(p, q)
