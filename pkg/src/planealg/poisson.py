"""The Poisson algebra on K[x,y]: bracket {f,g} = f_x g_y - f_y g_x.

The bracket equals the Jacobian determinant, making the polynomial ring a
Lie algebra whose center is the constants.  Each polynomial h induces the
divergence-free field h_x*d/dy - h_y*d/dx (see vfield.hamiltonian_field);
that assignment is a Lie homomorphism and integrate_hamiltonian inverts it
on divergence-free fields, normalized to zero constant term.

Subspaces of polynomials are kept as reduced echelon bases over monomial
coordinates (PolySubspace), which gives canonical bases, exact membership
tests, and span equality by list comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BracketNotConstant,
    CapExceeded,
    DegenerateSpan,
    NonZeroDivergence,
    NotClosed,
    ZeroScale,
)
from .linalg import EchelonSpan, nullspace
from .poly import Monomial, Poly, ScalarLike, grlex_key, partial, jacobian_det
from .vfield import VectorField, divergence, hamiltonian_field


def poisson_bracket(f: Poly, g: Poly) -> Poly:
    return jacobian_det(f, g)


def integrate_hamiltonian(d: VectorField) -> Poly:
    """Return the h with hamiltonian_field(h) = d and h(0,0) = 0.

    Requires zero divergence; h is found by antidifferentiating the second
    component in x and fixing the purely-y remainder from the first.
    """
    div = divergence(d)
    if not div.is_zero:
        raise NonZeroDivergence(div)
    h1 = _antiderivative(d.q, "x")
    remainder = -d.p - partial(h1, "y")
    # div = 0 forces the remainder to depend on y alone
    h2 = _antiderivative(remainder, "y")
    return h1 + h2


def _antiderivative(p: Poly, var: str) -> Poly:
    out: Dict[Monomial, Fraction] = {}
    for (i, j), c in p.terms.items():
        if var == "x":
            out[(i + 1, j)] = c / (i + 1)
        else:
            out[(i, j + 1)] = c / (j + 1)
    return Poly(out)


def graded_rescale(t: ScalarLike, h: Poly) -> Poly:
    """Scale the degree-n homogeneous part by t**(1-n).

    A Lie algebra automorphism of the Poisson bracket for every nonzero t:
    bracketing two homogeneous parts of degrees m and n lands in degree
    m+n-2 and t^(1-m) * t^(1-n) = t^(1-(m+n-2)).
    """
    t = Fraction(t)
    if t == 0:
        raise ZeroScale("graded rescale requires a nonzero parameter")
    return Poly({m: c * t ** (1 - (m[0] + m[1])) for m, c in h.terms.items()})


# ------------------------------------------------------------------ subspaces

class PolySubspace:
    """A subspace of polynomials in reduced echelon form.

    Basis polynomials are pivot-normalized, mutually reduced, and ordered
    with graded-lex increasing leading monomials, so two subspaces are
    equal as sets exactly when their bases are equal as lists.
    """

    def __init__(self, degree_cap: Optional[int] = None):
        self._span = EchelonSpan(grlex_key)
        self.degree_cap = degree_cap

    @classmethod
    def from_polys(cls, polys: Iterable[Poly], degree_cap: Optional[int] = None) -> "PolySubspace":
        sub = cls(degree_cap)
        for p in polys:
            sub.add(p)
        return sub

    def add(self, p: Poly) -> bool:
        d = p.degree()
        if d is not None and self.degree_cap is not None and d > self.degree_cap:
            raise ValueError(
                f"polynomial of degree {d} exceeds subspace cap {self.degree_cap}"
            )
        return self._span.add(p.terms)

    @property
    def dim(self) -> int:
        return self._span.dim

    @property
    def basis(self) -> List[Poly]:
        return [Poly(dict(row)) for row in self._span.rows]

    def contains(self, p: Poly) -> bool:
        return self._span.contains(p.terms)

    def coords(self, p: Poly) -> Optional[List[Fraction]]:
        return self._span.coords(p.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolySubspace):
            return NotImplemented
        return self._span.rows == other._span.rows

    def __repr__(self) -> str:
        return f"PolySubspace(dim={self.dim}, degree_cap={self.degree_cap})"


def centralizer_upto(fs: Sequence[Poly], d: int) -> PolySubspace:
    """Basis of {h : deg h <= d and {h, f} = 0 for every f}, by exact nullspace."""
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    monomials = [(i, j) for n in range(d + 1) for i in range(n + 1) for j in [n - i]]
    monomials.sort(key=grlex_key)
    rows: List[List[Fraction]] = []
    for f in fs:
        brackets = [poisson_bracket(Poly.monomial(i, j), f) for (i, j) in monomials]
        out_monos = sorted({m for b in brackets for m in b.terms}, key=grlex_key)
        for om in out_monos:
            rows.append([b.terms.get(om, Fraction(0)) for b in brackets])
    solutions = nullspace(rows, len(monomials))
    polys = [
        Poly({m: c for m, c in zip(monomials, vec) if c}) for vec in solutions
    ]
    return PolySubspace.from_polys(polys, degree_cap=d)


@dataclass
class LieClosure:
    """Result of a capped bracket-closure computation."""

    subspace: PolySubspace
    closed: bool
    discarded_degree: Optional[int] = None  # degree of a discarded bracket, if any


def lie_closure(gens: Sequence[Poly], degree_cap: int, dim_cap: int) -> LieClosure:
    """Smallest bracket-closed subspace containing gens, within the caps.

    Brackets whose degree exceeds degree_cap are discarded; the result then
    reports closed=False rather than silently truncating.  Exceeding
    dim_cap raises CapExceeded carrying the partial subspace.
    """
    if degree_cap <= 0 or dim_cap <= 0:
        raise ValueError("caps must be positive")
    sub = PolySubspace(degree_cap)
    elements: List[Poly] = []
    pairs: List[Tuple[int, int]] = []
    closed = True
    discarded: Optional[int] = None

    def push(p: Poly) -> None:
        if sub.add(p):
            idx = len(elements)
            elements.append(p)
            pairs.extend((i, idx) for i in range(idx))
            if sub.dim > dim_cap:
                raise CapExceeded(
                    f"closure dimension exceeded cap {dim_cap}", partial=sub
                )

    for g in gens:
        dg = g.degree()
        if dg is not None and dg > degree_cap:
            raise ValueError(f"generator degree {dg} exceeds degree cap {degree_cap}")
        push(g)
    while pairs:
        i, j = pairs.pop()
        b = poisson_bracket(elements[i], elements[j])
        if b.is_zero:
            continue
        deg = b.degree()
        if deg is not None and deg > degree_cap:
            closed = False
            discarded = deg if discarded is None else max(discarded, deg)
            continue
        push(b)
    return LieClosure(sub, closed, discarded)


def quadratic_span(f: Poly, g: Poly) -> PolySubspace:
    """Echelon basis of span{1, f, g, f^2, f*g, g^2} for a pair with
    constant nonzero bracket.

    The span is closed under the bracket and carries the same structure
    constants as span{1, x, y, x^2, xy, y^2} up to the bracket constant;
    closure is verified here, membership bracket by bracket.
    """
    b = poisson_bracket(f, g)
    if b.is_zero or not b.is_constant():
        raise BracketNotConstant(b)
    six = [Poly.constant(1), f, g, f * f, f * g, g * g]
    sub = PolySubspace.from_polys(six)
    if sub.dim != 6:
        raise DegenerateSpan(6, sub.dim)
    for i in range(6):
        for j in range(i + 1, 6):
            br = poisson_bracket(six[i], six[j])
            if not sub.contains(br):
                raise NotClosed(i, j, br)
    return sub
