"""Exact sparse polynomial arithmetic in two variables over the rationals.

A polynomial is a finite map from monomials to nonzero rational
coefficients:

    terms: Dict[(i, j), Fraction]     # the monomial x^i * y^j

The zero polynomial is the empty map.  All operations keep this canonical
form (no stored zero coefficients), so equality is plain structural
equality and identity testing is exact.

Monomials are ordered graded-lexicographically with x > y: first by total
degree, ties broken by the exponent of x.  Printing emits terms in
descending order of that ordering, e.g. ``3/2*x^2*y - y + 1``.

The text grammar accepted by :func:`parse_poly` (and used by the CLI and
golden files) is: terms ``c*x^i*y^j`` joined by ``+`` / ``-``, where ``c``
is an integer or ``n/d``; ``^1`` and a ``*`` after a coefficient of one
may be omitted.  Whitespace is insignificant.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

from .errors import PolyParseError

Monomial = Tuple[int, int]
ScalarLike = Union[int, Fraction]


def grlex_key(m: Monomial) -> Tuple[int, int]:
    """Sort key realizing graded-lex with x > y (larger key = larger monomial)."""
    return (m[0] + m[1], m[0])


class Poly:
    """Immutable sparse bivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None):
        # Trusted constructor: callers must pass a canonical dict.  Use the
        # from_* classmethods or parse_poly for unsanitized input.
        self.terms: Dict[Monomial, Fraction] = terms if terms is not None else {}

    # ---------------------------------------------------------------- builders

    @classmethod
    def zero(cls) -> "Poly":
        return cls({})

    @classmethod
    def constant(cls, c: ScalarLike) -> "Poly":
        c = Fraction(c)
        return cls({} if c == 0 else {(0, 0): c})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        if name == "x":
            return cls({(1, 0): Fraction(1)})
        if name == "y":
            return cls({(0, 1): Fraction(1)})
        raise ValueError(f"unknown variable {name!r}")

    @classmethod
    def monomial(cls, i: int, j: int, c: ScalarLike = 1) -> "Poly":
        if i < 0 or j < 0:
            raise ValueError("monomial exponents must be nonnegative")
        c = Fraction(c)
        return cls({} if c == 0 else {(i, j): c})

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Monomial, ScalarLike]]) -> "Poly":
        acc: Dict[Monomial, Fraction] = {}
        for mono, c in items:
            c = Fraction(c)
            if mono in acc:
                acc[mono] += c
            else:
                acc[mono] = c
        return cls({m: c for m, c in acc.items() if c != 0})

    # ------------------------------------------------------------- inspection

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        """Total degree, or None for the zero polynomial.

        None plays the role of "minus infinity"; callers must treat the
        zero polynomial explicitly instead of comparing against integers.
        """
        if not self.terms:
            return None
        return max(i + j for i, j in self.terms)

    def leading_monomial(self) -> Optional[Monomial]:
        """Graded-lex largest monomial, or None for zero."""
        if not self.terms:
            return None
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        lm = self.leading_monomial()
        if lm is None:
            return Fraction(0)
        return self.terms[lm]

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def homogeneous_part(self, n: int) -> "Poly":
        return Poly({m: c for m, c in self.terms.items() if m[0] + m[1] == n})

    def degree_in(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        idx = _var_index(var)
        if not self.terms:
            return -1
        return max(m[idx] for m in self.terms)

    def evaluate(self, xv: ScalarLike, yv: ScalarLike) -> Fraction:
        xv, yv = Fraction(xv), Fraction(yv)
        total = Fraction(0)
        for (i, j), c in self.terms.items():
            total += c * xv**i * yv**j
        return total

    # ------------------------------------------------------------- arithmetic

    def __add__(self, other: Union["Poly", ScalarLike]) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["Poly", ScalarLike]) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Union["Poly", ScalarLike]) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly({})
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            # Monomial shift fast path; composition and reduction hit this a lot.
            ((i1, j1), c1), = a.items()
            return Poly({(i1 + i2, j1 + j2): c1 * c2 for (i2, j2), c2 in b.items()})
        out: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = (i1 + i2, j1 + j2)
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return Poly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: ScalarLike) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly({})
        return Poly({m: c * v for m, v in self.terms.items()})

    def __truediv__(self, c: ScalarLike) -> "Poly":
        return self.scale(Fraction(1, 1) / Fraction(c))

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    # ------------------------------------------------------------- comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # --------------------------------------------------------------- printing

    def sorted_terms(self) -> Iterator[Tuple[Monomial, Fraction]]:
        for m in sorted(self.terms, key=grlex_key, reverse=True):
            yield m, self.terms[m]

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _coerce(value: Union[Poly, ScalarLike]) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.constant(value)
    return NotImplemented


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"unknown variable {var!r}")


X = Poly.variable("x")
Y = Poly.variable("y")
ONE = Poly.constant(1)
ZERO = Poly.zero()


# ------------------------------------------------------------------ calculus

def partial(p: Poly, var: str) -> Poly:
    """Formal partial derivative with respect to ``"x"`` or ``"y"``."""
    idx = _var_index(var)
    out: Dict[Monomial, Fraction] = {}
    for (i, j), c in p.terms.items():
        e = (i, j)[idx]
        if e == 0:
            continue
        m = (i - 1, j) if idx == 0 else (i, j - 1)
        out[m] = c * e
    return Poly(out)


def compose(p: Poly, f: Poly, g: Poly) -> Poly:
    """Substitute: return p(f, g).

    Bivariate Horner evaluation: p is sliced by x-exponent, each slice is
    evaluated at g by a Horner loop in y, and the slices are combined by a
    Horner loop in x.  Keeps intermediate sizes bounded by the result when
    the inner map has small components.
    """
    if not p.terms:
        return Poly({})
    # slices[i][j] = coefficient of x^i y^j
    slices: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), c in p.terms.items():
        slices.setdefault(i, {})[j] = c
    evaluated: Dict[int, Poly] = {
        i: _horner_one_var(sl, g) for i, sl in slices.items()
    }
    result = Poly({})
    prev: Optional[int] = None
    for i in sorted(evaluated, reverse=True):
        if prev is not None:
            for _ in range(prev - i):
                result = result * f
        result = result + evaluated[i]
        prev = i
    if prev is not None:
        for _ in range(prev):
            result = result * f
    return result


def _horner_one_var(coeffs: Dict[int, Fraction], g: Poly) -> Poly:
    result = Poly({})
    prev: Optional[int] = None
    for j in sorted(coeffs, reverse=True):
        if prev is not None:
            for _ in range(prev - j):
                result = result * g
        result = result + Poly.constant(coeffs[j])
        prev = j
    if prev is not None:
        for _ in range(prev):
            result = result * g
    return result


def jacobian_det(f: Poly, g: Poly) -> Poly:
    """f_x * g_y - f_y * g_x."""
    return partial(f, "x") * partial(g, "y") - partial(f, "y") * partial(g, "x")


# ------------------------------------------------------------ text grammar

def format_poly(p: Poly) -> str:
    """Canonical text form, graded-lex descending."""
    if not p.terms:
        return "0"
    pieces = []
    for (i, j), c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        factors = []
        if mag != 1 or (i == 0 and j == 0):
            factors.append(str(mag))
        if i > 0:
            factors.append("x" if i == 1 else f"x^{i}")
        if j > 0:
            factors.append("y" if j == 1 else f"y^{j}")
        pieces.append((sign, "*".join(factors)))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class _Scanner:
    """Tiny cursor over a polynomial string, tracking position for errors."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def fail(self, expected: str) -> "PolyParseError":
        self.skip_ws()
        return PolyParseError(self.text, self.pos, expected)

    def at_end(self) -> bool:
        return self.peek() == ""

    def read_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.fail("a digit")
        return int(self.text[start:self.pos])

    def read_rational(self) -> Fraction:
        num = self.read_uint()
        if self.peek() == "/":
            self.take()
            den = self.read_uint()
            if den == 0:
                raise self.fail("a nonzero denominator")
            return Fraction(num, den)
        return Fraction(num)


def parse_poly(text: str) -> Poly:
    """Parse the text grammar; raises PolyParseError with position info."""
    sc = _Scanner(text)
    result = _parse_sum(sc)
    if not sc.at_end():
        raise sc.fail("end of input or '+'/'-'")
    return result


def _parse_sum(sc: _Scanner) -> Poly:
    acc = Poly({})
    first = True
    while True:
        sign = 1
        ch = sc.peek()
        if ch == "+" or ch == "-":
            sc.take()
            sign = -1 if ch == "-" else 1
        elif not first:
            break
        acc = acc + _parse_term(sc).scale(sign)
        first = False
        if sc.at_end():
            break
    return acc


def _parse_term(sc: _Scanner) -> Poly:
    coeff = Fraction(1)
    ch = sc.peek()
    if ch.isdigit():
        coeff = sc.read_rational()
        if sc.peek() != "*":
            # coefficient-only term; a bare variable after a number is not
            # in the grammar ("3x" must be written "3*x")
            if sc.peek() in ("x", "y"):
                raise sc.fail("'*' between coefficient and variable")
            return Poly.constant(coeff)
        sc.take()
        if sc.peek() not in ("x", "y"):
            raise sc.fail("a variable after '*'")
    elif ch not in ("x", "y"):
        raise sc.fail("a coefficient or variable")
    i, j = 0, 0
    while True:
        ch = sc.take()
        exp = 1
        if sc.peek() == "^":
            sc.take()
            exp = sc.read_uint()
        if ch == "x":
            i += exp
        else:
            j += exp
        if sc.peek() == "*":
            sc.take()
            if sc.peek() not in ("x", "y"):
                raise sc.fail("a variable after '*'")
        else:
            break
    return Poly.monomial(i, j, coeff)
