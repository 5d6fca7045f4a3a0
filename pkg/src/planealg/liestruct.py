"""Finite-dimensional Lie algebra analysis for spans of plane vector fields.

Spans are echelonized over the coordinates (component, monomial); closed
spans get a structure-constant tensor and Killing form; the solvable
radical is the Killing-orthogonal complement of the derived subalgebra
(characteristic zero), verified solvable by its derived series.

classify() decides whether a span is one of the model algebras:

  * dimension 3 with a rational sl2-triple            -> Sl2
  * dimension 5 shaped like the special affine algebra -> Saff2
  * dimension 6 shaped like the full affine algebra    -> Aff2

and in the last two cases recovers the pair (f, g) of polynomials, with
unit Poisson bracket, whose induced fields generate the span.  Everything
else lands in Other with a diagnostic message; classify never raises.

The recovery route: the radical consists of divergence-free fields, each
integrates to a polynomial, and the resulting pair is rescaled so its
bracket is exactly 1.  Transporting the standard generators through the
recovered pair must reproduce the input span; that final span equality is
the decisive test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BracketNotConstant, NotClosed, PlaneAlgebraError
from .linalg import (
    EchelonSpan,
    Matrix,
    Row,
    identity_matrix,
    mat_inverse,
    mat_mul,
    mat_trace,
    mat_vec,
    nullspace,
    rank,
    rref,
    solve,
)
from .poly import Poly, grlex_key
from .poisson import integrate_hamiltonian, poisson_bracket
from .vfield import (
    EtaleMap,
    VectorField,
    divergence,
    divergence_class,
    standard_basis,
    transported_basis,
    vf_bracket,
)

CoordKey = Tuple[int, Tuple[int, int]]


def _vf_key_order(key: CoordKey):
    comp, mono = key
    return (grlex_key(mono), -comp)


def _field_to_coords(d: VectorField) -> Dict[CoordKey, Fraction]:
    out: Dict[CoordKey, Fraction] = {(0, m): c for m, c in d.p.terms.items()}
    out.update({(1, m): c for m, c in d.q.terms.items()})
    return out


def _coords_to_field(row: Dict[CoordKey, Fraction]) -> VectorField:
    p: Dict[Tuple[int, int], Fraction] = {}
    q: Dict[Tuple[int, int], Fraction] = {}
    for (comp, m), c in row.items():
        (p if comp == 0 else q)[m] = c
    return VectorField(Poly(p), Poly(q))


class VFSubspace:
    """A subspace of vector fields in reduced echelon form.

    Same canonicity contract as PolySubspace: equal spans have equal
    ``basis`` lists.
    """

    def __init__(self, degree_cap: Optional[int] = None):
        self._span = EchelonSpan(_vf_key_order)
        self.degree_cap = degree_cap

    @classmethod
    def from_fields(cls, fields: Sequence[VectorField], degree_cap: Optional[int] = None) -> "VFSubspace":
        sub = cls(degree_cap)
        for d in fields:
            sub.add(d)
        return sub

    def add(self, d: VectorField) -> bool:
        deg = d.degree()
        if deg is not None and self.degree_cap is not None and deg > self.degree_cap:
            raise ValueError(f"field degree {deg} exceeds subspace cap {self.degree_cap}")
        return self._span.add(_field_to_coords(d))

    @property
    def dim(self) -> int:
        return self._span.dim

    @property
    def basis(self) -> List[VectorField]:
        return [_coords_to_field(row) for row in self._span.rows]

    def contains(self, d: VectorField) -> bool:
        return self._span.contains(_field_to_coords(d))

    def coords(self, d: VectorField) -> Optional[List[Fraction]]:
        return self._span.coords(_field_to_coords(d))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VFSubspace):
            return NotImplemented
        return self._span.rows == other._span.rows

    def __repr__(self) -> str:
        return f"VFSubspace(dim={self.dim})"


def span_reduce(fields: Sequence[VectorField]) -> VFSubspace:
    return VFSubspace.from_fields(fields)


# ------------------------------------------------------------- presentations

@dataclass
class LiePresentation:
    """Echelon basis with structure constants and Killing form.

    tensor[i][j][k] is the coefficient of basis[k] in [basis[i], basis[j]];
    killing[i][j] = trace(ad_i * ad_j).
    """

    basis: List[VectorField]
    tensor: List[List[Row]]
    killing: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_coords(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Row:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                cij = self.tensor[i][j]
                ui_vj = u[i] * v[j]
                for k in range(n):
                    if cij[k]:
                        out[k] += ui_vj * cij[k]
        return out

    def ad_matrix(self, z: Sequence[Fraction]) -> Matrix:
        """Matrix of [z, .] in the presentation basis."""
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            col = self.bracket_coords(z, _unit(n, j))
            for k in range(n):
                out[k][j] = col[k]
        return out

    def field_from_coords(self, z: Sequence[Fraction]) -> VectorField:
        acc_p = Poly.zero()
        acc_q = Poly.zero()
        for c, b in zip(z, self.basis):
            if c:
                acc_p = acc_p + b.p.scale(c)
                acc_q = acc_q + b.q.scale(c)
        return VectorField(acc_p, acc_q)

    def validate(self) -> None:
        """Check antisymmetry and the Jacobi identity on the tensor."""
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.tensor[i][j][k] != -self.tensor[j][i][k]:
                        raise PlaneAlgebraError("structure tensor not antisymmetric")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    total = [Fraction(0)] * n
                    for term in (
                        self.bracket_coords(_unit(n, i), self.tensor[j][k]),
                        self.bracket_coords(_unit(n, j), self.tensor[k][i]),
                        self.bracket_coords(_unit(n, k), self.tensor[i][j]),
                    ):
                        total = [a + b for a, b in zip(total, term)]
                    if any(total):
                        raise PlaneAlgebraError("Jacobi identity fails on tensor")


def _unit(n: int, i: int) -> Row:
    row = [Fraction(0)] * n
    row[i] = Fraction(1)
    return row


def structure_constants(sub: VFSubspace) -> LiePresentation:
    """Structure constants of a bracket-closed span.

    Raises NotClosed with the first escaping bracket otherwise.
    """
    basis = sub.basis
    n = len(basis)
    tensor = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = vf_bracket(basis[i], basis[j])
            coords = sub.coords(br)
            if coords is None:
                raise NotClosed(i, j, br)
            tensor[i][j] = coords
            tensor[j][i] = [-c for c in coords]
    pres = LiePresentation(basis, tensor, [])
    ads = [pres.ad_matrix(_unit(n, i)) for i in range(n)]
    pres.killing = [
        [mat_trace(mat_mul(ads[i], ads[j])) for j in range(n)] for i in range(n)
    ]
    return pres


def _derived_coords(pres: LiePresentation) -> List[Row]:
    """RREF coordinate basis of the span of all brackets of basis pairs."""
    n = pres.dim
    rows = [pres.tensor[i][j] for i in range(n) for j in range(i + 1, n)]
    red, pivots = rref(rows) if rows else ([], [])
    return [red[r] for r in range(len(pivots))]


def derived_subalgebra(pres: LiePresentation) -> VFSubspace:
    return VFSubspace.from_fields(
        [pres.field_from_coords(z) for z in _derived_coords(pres)]
    )


def _radical_coords(pres: LiePresentation) -> List[Row]:
    """Killing-orthogonal complement of the derived subalgebra, as RREF rows.

    Equals the solvable radical in characteristic zero; solvability is
    re-verified through the derived series.
    """
    derived = _derived_coords(pres)
    if not derived:
        return [list(r) for r in identity_matrix(pres.dim)]
    equations = [mat_vec(pres.killing, d) for d in derived]
    basis = nullspace(equations, pres.dim)
    red, pivots = rref(basis) if basis else ([], [])
    coords = [red[r] for r in range(len(pivots))]
    _check_solvable(pres, coords)
    return coords


def _check_solvable(pres: LiePresentation, coords: List[Row]) -> None:
    current = coords
    for _ in range(pres.dim + 1):
        if not current:
            return
        brackets = [
            pres.bracket_coords(u, v)
            for a, u in enumerate(current)
            for v in current[a + 1:]
        ]
        red, pivots = rref(brackets) if brackets else ([], [])
        nxt = [red[r] for r in range(len(pivots))]
        if len(nxt) >= len(current):
            break
        current = nxt
    if current:
        raise PlaneAlgebraError("Killing-orthogonal complement is not solvable")


def radical(pres: LiePresentation) -> List[VectorField]:
    return [pres.field_from_coords(z) for z in _radical_coords(pres)]


# ----------------------------------------------------------------- sl2 triples

@dataclass
class Sl2Search:
    """Outcome of the rational sl2-triple search.

    failure distinguishes a structural no (degenerate Killing form, so the
    algebra cannot be sl2) from exhausting the bounded candidate search.
    """

    triple: Optional[Tuple[VectorField, VectorField, VectorField]]
    coords: Optional[Tuple[Row, Row, Row]]
    failure: Optional[str] = None
    candidates_tried: int = 0


_CANDIDATE_RANGE = range(-2, 3)


def find_sl2_triple(pres: LiePresentation) -> Sl2Search:
    """Search a 3-dimensional presentation for (e, h, f) with
    [h,e] = 2e, [h,f] = -2f, [e,f] = h, over the rationals.

    Strategy: scan basis vectors and small integer combinations for an
    ad-nilpotent e, then solve the linear systems for h and f.
    """
    if pres.dim != 3:
        raise ValueError("sl2-triple search requires a 3-dimensional presentation")
    if rank(pres.killing) != 3:
        return Sl2Search(None, None, "killing form degenerate (not semisimple)")
    tried = 0
    candidates = [_unit(3, i) for i in range(3)]
    for a in itertools.product(_CANDIDATE_RANGE, repeat=3):
        if not any(a):
            continue
        first = next(v for v in a if v)
        if first < 0:
            continue  # sign duplicate
        candidates.append([Fraction(v) for v in a])
    for e in candidates:
        tried += 1
        result = _try_triple(pres, e)
        if result is not None:
            h, f = result
            fields = tuple(pres.field_from_coords(z) for z in (e, h, f))
            return Sl2Search(fields, (list(e), h, f), None, tried)
    return Sl2Search(
        None,
        None,
        f"no rational sl2-triple found within search bounds "
        f"(coefficients in {list(_CANDIDATE_RANGE)}, {tried} candidates)",
        tried,
    )


def _try_triple(pres: LiePresentation, e: Row) -> Optional[Tuple[Row, Row]]:
    ad_e = pres.ad_matrix(e)
    if all(v == 0 for row in ad_e for v in row):
        return None
    cube = mat_mul(ad_e, mat_mul(ad_e, ad_e))
    if any(v != 0 for row in cube for v in row):
        return None
    # [h, e] = 2e is linear in h
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        col = pres.bracket_coords(_unit(3, i), e)
        for k in range(3):
            m[k][i] = col[k]
    h = solve(m, [2 * v for v in e])
    if h is None:
        return None
    # [e, f] = h and [h, f] = -2f are jointly linear in f
    ad_h = pres.ad_matrix(h)
    stacked = [list(ad_e[k]) for k in range(3)]
    rhs = list(h)
    for k in range(3):
        row = list(ad_h[k])
        row[k] += 2
        stacked.append(row)
        rhs.append(Fraction(0))
    f = solve(stacked, rhs)
    if f is None:
        return None
    if pres.bracket_coords(h, e) != [2 * v for v in e]:
        return None
    if pres.bracket_coords(h, f) != [-2 * v for v in f]:
        return None
    if pres.bracket_coords(e, f) != list(h):
        return None
    if rank([e, h, f]) != 3:
        return None
    return h, f


# -------------------------------------------------------------- map recovery

def recover_etale(radical_basis: Sequence[VectorField]) -> EtaleMap:
    """Integrate a two-element divergence-free radical basis back to the
    polynomial pair generating the span.

    The second integral is divided by the bracket constant, normalizing
    the pair to unit Poisson bracket.  The generated span only depends on
    the span of {1, f, g}, so any radical basis of the same span gives a
    span-equivalent pair; with the canonical echelon radical the output is
    deterministic.
    """
    if len(radical_basis) != 2:
        raise ValueError("expected exactly two radical fields")
    f0 = integrate_hamiltonian(radical_basis[0])
    g0 = integrate_hamiltonian(radical_basis[1])
    b = poisson_bracket(f0, g0)
    if b.is_zero or not b.is_constant():
        raise BracketNotConstant(b)
    return EtaleMap(f0, g0.scale(Fraction(1) / b.constant_term), Fraction(1))


# ------------------------------------------------------------ classification

@dataclass
class ClassificationReport:
    closed: bool
    dim: int
    radical_basis: List[VectorField]
    levi_basis: List[VectorField]
    type_tag: str  # "Sl2" | "Saff2" | "Aff2" | "Other"
    recovered_map: Optional[EtaleMap]
    diagnostics: str

    def to_json_dict(self) -> dict:
        return {
            "closed": self.closed,
            "dim": self.dim,
            "radical_basis": [str(d) for d in self.radical_basis],
            "levi_basis": [str(d) for d in self.levi_basis],
            "type_tag": self.type_tag,
            "recovered_map": str(self.recovered_map) if self.recovered_map else None,
            "diagnostics": self.diagnostics,
        }


def classify(fields: Sequence[VectorField]) -> ClassificationReport:
    """Full pipeline: reduce, check closure, compute the radical, test the
    three model shapes, recover the generating pair.  Never raises; all
    failures land in type_tag "Other" with diagnostics.
    """
    try:
        return _classify(fields)
    except PlaneAlgebraError as err:  # defensive: keep the no-throw contract
        return ClassificationReport(
            False, 0, [], [], "Other", None, f"internal failure: {err}"
        )


def _classify(fields: Sequence[VectorField]) -> ClassificationReport:
    notes: List[str] = []

    def other(msg: str, closed: bool = False, dim: int = 0,
              rad: Optional[List[VectorField]] = None) -> ClassificationReport:
        notes.append(msg)
        return ClassificationReport(
            closed, dim, rad or [], [], "Other", None, "; ".join(notes)
        )

    sub = span_reduce(list(fields))
    if sub.dim == 0:
        return other("empty span")
    for d in sub.basis:
        if divergence_class(d).kind == "general":
            return other(
                f"member with nonconstant divergence: {d}", dim=sub.dim
            )
    try:
        pres = structure_constants(sub)
    except NotClosed as err:
        return other(
            f"not bracket-closed: bracket of basis {err.i} and {err.j} "
            f"escapes the span",
            dim=sub.dim,
        )

    if sub.dim == 3:
        return _classify_dim3(sub, pres, notes)
    if sub.dim == 5:
        report = _saff2_analysis(sub, pres, notes)
        if isinstance(report, str):
            return other(report, closed=True, dim=5, rad=radical(pres))
        rad_fields, levi, recovered = report
        return ClassificationReport(
            True, 5, rad_fields, levi, "Saff2", recovered, "; ".join(notes)
        )
    if sub.dim == 6:
        return _classify_dim6(sub, pres, notes, other)
    return other(f"dimension {sub.dim} matches none of the model algebras",
                 closed=True, dim=sub.dim, rad=radical(pres))


def _classify_dim3(sub: VFSubspace, pres: LiePresentation,
                   notes: List[str]) -> ClassificationReport:
    search = find_sl2_triple(pres)
    if search.triple is None:
        notes.append(f"sl2 test failed: {search.failure}")
        return ClassificationReport(
            True, 3, radical(pres), [], "Other", None, "; ".join(notes)
        )
    e, h, f = search.triple
    notes.append(f"sl2-triple: e = {e}; h = {h}; f = {f}")
    if sub == span_reduce(standard_basis("sl2")):
        notes.append("span equals the standard linear sl2")
    else:
        notes.append("span is NOT the standard linear sl2")
    return ClassificationReport(
        True, 3, [], [e, h, f], "Sl2", None, "; ".join(notes)
    )


def _saff2_analysis(sub: VFSubspace, pres: LiePresentation, notes: List[str]):
    """Shared 5-dimensional test.  Returns (radical fields, levi fields,
    recovered map) or a failure string."""
    rad_coords = _radical_coords(pres)
    if len(rad_coords) != 2:
        return f"radical has dimension {len(rad_coords)}, need 2"
    r0, r1 = rad_coords
    if any(pres.bracket_coords(r0, r1)):
        return "radical is not abelian"
    quotient = _quotient_presentation(pres, rad_coords)
    if quotient is None:
        return "radical is not an ideal of the span"
    q_pres, action = quotient
    search = find_sl2_triple(q_pres)
    if search.triple is None:
        return f"quotient by the radical is not sl2: {search.failure}"
    # a two-dimensional module over sl2 in characteristic zero is either
    # simple or trivial, so a nonzero action settles simplicity
    action_entries = [v for z in search.coords for row in action(z) for v in row]
    if all(v == 0 for v in action_entries):
        return "radical is a trivial module over the quotient"
    rad_fields = [pres.field_from_coords(z) for z in rad_coords]
    for d in rad_fields:
        if not divergence(d).is_zero:
            return f"radical field has nonzero divergence: {d}"
    try:
        recovered = recover_etale(rad_fields)
    except BracketNotConstant as err:
        return (
            "integrated radical pair has non-constant bracket "
            f"{err.bracket}"
        )
    image = span_reduce(transported_basis(recovered, "saff2"))
    if image != sub:
        return "transported span of the recovered pair differs from the input"
    notes.append(f"recovered pair: {recovered}")
    levi = transported_basis(recovered, "saff2")[2:5]
    return rad_fields, levi, recovered


def _quotient_presentation(pres: LiePresentation, rad_coords: List[Row]):
    """Presentation of span/radical plus the radical action map.

    Returns (quotient presentation, action) where action(z) is the matrix
    of [z~, .] on the radical basis for a quotient coordinate vector z, or
    None when some bracket fails to decompose (radical not an ideal).
    """
    n = pres.dim
    _, pivots = rref(rad_coords)
    complement = [i for i in range(n) if i not in pivots]
    k = len(complement)
    cols: Matrix = [
        [Fraction(1) if r == c else Fraction(0) for r in range(n)]
        for c in complement
    ]
    basis_matrix = [list(col) for col in zip(*(cols + rad_coords))]
    inv = mat_inverse(basis_matrix)
    if inv is None:
        return None

    def decompose(w: Row) -> Tuple[Row, Row]:
        z = mat_vec(inv, w)
        return z[:k], z[k:]

    tensor = [[[Fraction(0)] * k for _ in range(k)] for _ in range(k)]
    ok = True
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            w = pres.bracket_coords(_unit(n, complement[a]), _unit(n, complement[b]))
            q, _ = decompose(w)
            tensor[a][b] = q
    q_basis = [pres.basis[i] for i in complement]  # representatives only
    q_pres = LiePresentation(q_basis, tensor, [])
    ads = [q_pres.ad_matrix(_unit(k, i)) for i in range(k)]
    q_pres.killing = [
        [mat_trace(mat_mul(ads[i], ads[j])) for j in range(k)] for i in range(k)
    ]

    def action(z: Row) -> Matrix:
        nonlocal ok
        lift = [Fraction(0)] * n
        for c, idx in zip(z, complement):
            lift[idx] = c
        out = []
        for r in rad_coords:
            w = pres.bracket_coords(lift, r)
            q, rad_part = decompose(w)
            if any(q):
                ok = False
            out.append(rad_part)
        return [list(col) for col in zip(*out)]

    # the radical must absorb brackets with every complement direction
    for a in range(k):
        action(_unit(k, a))
    if not ok:
        return None
    return q_pres, action


def _classify_dim6(sub: VFSubspace, pres: LiePresentation, notes: List[str],
                   other) -> ClassificationReport:
    derived = derived_subalgebra(pres)
    if derived.dim != 5:
        return other(
            f"derived subalgebra has dimension {derived.dim}, need 5",
            closed=True, dim=6, rad=radical(pres),
        )
    try:
        d_pres = structure_constants(derived)
    except NotClosed:
        return other("derived subalgebra is not bracket-closed", closed=True, dim=6)
    result = _saff2_analysis(derived, d_pres, notes)
    if isinstance(result, str):
        return other(f"derived subalgebra fails the 5-dim test: {result}",
                     closed=True, dim=6, rad=radical(pres))
    rad_fields, levi, recovered = result
    image = span_reduce(transported_basis(recovered, "aff2"))
    if image != sub:
        return other(
            "transported 6-dim span of the recovered pair differs from the input",
            closed=True, dim=6, rad=radical(pres),
        )
    if _euler_element_exists(sub, pres, rad_fields):
        notes.append("found an element acting as -1 on the radical of the derived subalgebra")
    else:
        notes.append("WARNING: no element acts as -1 on the derived radical")
    return ClassificationReport(
        True, 6, radical(pres), levi, "Aff2", recovered, "; ".join(notes)
    )


def _euler_element_exists(sub: VFSubspace, pres: LiePresentation,
                          rad_fields: List[VectorField]) -> bool:
    """Is there z in the span with [z, r] = -r for the given radical fields?"""
    n = pres.dim
    rows: Matrix = []
    rhs: Row = []
    for r in rad_fields:
        r_coords = sub.coords(r)
        if r_coords is None:
            return False
        cols = [pres.bracket_coords(_unit(n, i), r_coords) for i in range(n)]
        for k in range(n):
            rows.append([cols[i][k] for i in range(n)])
            rhs.append(-r_coords[k])
    return solve(rows, rhs) is not None


# -------------------------------------------------------- local finiteness

@dataclass
class GrowthWitness:
    probe: VectorField
    iterates: List[VectorField]
    degrees: List[int]


@dataclass
class LocalFiniteness:
    status: str  # "stabilized" | "exceeded"
    dim: int
    witness: Optional[GrowthWitness] = None


def local_finiteness(d: VectorField, probes: Sequence[VectorField],
                     degree_cap: int = 16, iter_cap: int = 24) -> LocalFiniteness:
    """Bounded probe of whether ad(d) generates a finite-dimensional span.

    Repeatedly brackets d against each new span direction.  "stabilized"
    means the span stopped growing under the caps; "exceeded" reports the
    growing chain.  This is a semi-decision: exceeding generous caps is
    strong evidence of unbounded growth, not a proof.
    """
    if degree_cap <= 0 or iter_cap <= 0:
        raise ValueError("caps must be positive")
    span = EchelonSpan(_vf_key_order)
    queue: List[Tuple[VectorField, VectorField, List[VectorField], int]] = []

    def normalized_new_direction(field: VectorField) -> Optional[VectorField]:
        coords = _field_to_coords(field)
        residual, _ = span.reduce(coords)
        if not residual:
            return None
        pivot = max(residual, key=_vf_key_order)
        lead = residual[pivot]
        span.add(coords)
        return _coords_to_field({k: v / lead for k, v in residual.items()})

    for probe in probes:
        if probe.is_zero:
            continue
        direction = normalized_new_direction(probe)
        if direction is not None:
            queue.append((probe, direction, [], 0))
    while queue:
        probe, current, history, steps = queue.pop(0)
        if steps >= iter_cap:
            return LocalFiniteness(
                "exceeded", span.dim,
                GrowthWitness(probe, history, [h.degree() or 0 for h in history]),
            )
        br = vf_bracket(d, current)
        if br.is_zero:
            continue
        new_history = history + [br]

        def witness() -> GrowthWitness:
            degrees = [h.degree() or 0 for h in new_history]
            return GrowthWitness(probe, new_history, degrees)

        deg = br.degree() or 0
        if deg > degree_cap:
            return LocalFiniteness("exceeded", span.dim, witness())
        direction = normalized_new_direction(br)
        if direction is None:
            continue
        queue.append((probe, direction, new_history, steps + 1))
    return LocalFiniteness("stabilized", span.dim, None)
