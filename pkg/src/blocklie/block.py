"""The centrally extended Block type Lie algebra with two parameters.

Basis L[a,i] for integer grade a and level i >= 0, plus a central element c:

    [L[a,i], L[b,j]] = ((i+q)(b+p) - (j+q)(a+p)) L[a+b,i+j]
                       + delta_{a+b,0} delta_{i,0} delta_{j,0} (a^3-a)/12 c

The delta-free part is polynomial in the indices and is covered by the
engine's grid identity tests (it is the mu=0 affinization of the Witt-type
Novikov product); the Kronecker-delta cocycle is not polynomial, so its
Jacobi contribution gets a dedicated exact check here.

The Laurent realization stores the formal factor t^q unexpanded: monomial
exponents are pairs (q-multiplicity, integer offset) and differentiation
uses (t^(q+n))' = (q+n) t^(q+n-1), so nothing assumes q is an integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .engine import (
    CENTRAL,
    BracketRule,
    Element,
    Graded,
    InsufficientGridError,
    Verdict,
    Window,
    bracket_rule,
)
from .scalars import Poly, Scalar, scalar_is_zero


@dataclass(frozen=True)
class BlockParams:
    """Algebra parameters; a concrete q must be nonzero (q is inverted in the
    Virasoro rescaling).  p = 0 is accepted: it is the regime settled by
    earlier work and is used as the exact cross-check oracle downstream."""

    p: Scalar
    q: Scalar

    def __post_init__(self):
        if not isinstance(self.q, Poly) and Fraction(self.q) == 0:
            raise ValueError("q must be nonzero")


def cocycle_value(grade) -> Fraction:
    """(a^3 - a)/12, the central 2-cocycle evaluated at a grade."""
    return Fraction(grade**3 - grade, 12)


def triangular_part(index) -> str:
    """Triangular slot of a basis label: "negative", "zero" or "positive" by
    grade sign; the central element belongs to the zero part."""
    if index is CENTRAL:
        return "zero"
    if index.grade < 0:
        return "negative"
    return "zero" if index.grade == 0 else "positive"


def structure_coefficient(params: BlockParams, x: Graded, y: Graded) -> Scalar:
    return (x.level + params.q) * (y.grade + params.p) - (y.level + params.q) * (
        x.grade + params.p
    )


def _check_levels(element: Element) -> None:
    for index in element.terms:
        if index is not CENTRAL and index.level < 0:
            raise ValueError(f"negative level in {index}: levels must be >= 0")


def basis_bracket(params: BlockParams, x: Graded, y: Graded) -> Element:
    """Bracket of two basis vectors, cocycle included."""
    out = Element.basis(
        Graded(x.grade + y.grade, x.level + y.level),
        structure_coefficient(params, x, y),
    )
    if x.grade + y.grade == 0 and x.level == 0 and y.level == 0:
        out = out + Element.basis(CENTRAL, cocycle_value(x.grade))
    return out


def block_bracket(params: BlockParams, x: Element, y: Element) -> Element:
    """Bilinear extension of the bracket; c is central, levels must be >= 0."""
    _check_levels(x)
    _check_levels(y)
    out = Element.zero()
    for ix, cx in x.terms.items():
        if ix is CENTRAL:
            continue
        for iy, cy in y.terms.items():
            if iy is CENTRAL:
                continue
            out = out + basis_bracket(params, ix, iy).scaled(cx * cy)
    return out


def block_bracket_rule(params: BlockParams) -> BracketRule:
    """Full bracket (with cocycle) packaged for closure/adjoint machinery.

    Not suitable for grid identity certification: the delta factors are not
    polynomial, so the degree-bound spot check is skipped by design.
    """
    return BracketRule(
        lambda x, y: basis_bracket(params, x, y),
        grade_degree_bound=1,
        level_degree_bound=1,
        grading_law="grade a+b, level i+j, plus c at grade 0",
    )


def delta_free_rule(params: BlockParams) -> BracketRule:
    """The cocycle-free structure constants, valid for all integer levels;
    this is what the engine's grid Jacobi certification runs on."""
    return bracket_rule(
        lambda x, y: Element.basis(
            Graded(x.grade + y.grade, x.level + y.level),
            structure_coefficient(params, x, y),
        ),
        grade_degree_bound=1,
        level_degree_bound=1,
        grading_law="grade a+b, level i+j",
    )


def cocycle_jacobi_check(
    params: BlockParams,
    grade_values: Sequence,
    cocycle: Callable[[int], Scalar] = cocycle_value,
) -> Verdict:
    """Exact check of the cocycle's Jacobi contribution.

    The central component of the Jacobi identity reduces to level-zero
    triples with total grade zero, where it reads

        q(g-b) K(a) + q(a-g) K(b) + q(b-a) K(g) = 0,   g = -a-b.

    The residual is polynomial of per-variable degree 4 when K is the cubic
    cocycle, so a grid of at least 5 distinct values per grade certifies it
    for all integers.  Failures are reported as the residual times c.
    """
    if len(set(grade_values)) != len(grade_values):
        raise InsufficientGridError("grade grid values must be distinct")
    if len(grade_values) < 5:
        raise InsufficientGridError(
            f"grade grid needs at least 5 distinct values, got {len(grade_values)}"
        )
    q = params.q
    for a, b in itertools.product(grade_values, repeat=2):
        g = -a - b
        residual = (
            q * (g - b) * cocycle(a)
            + q * (a - g) * cocycle(b)
            + q * (b - a) * cocycle(g)
        )
        if not scalar_is_zero(residual):
            return Verdict.fails((a, b, g), Element.basis(CENTRAL, residual))
    return Verdict.holds_universally()


def virasoro_embedding_check(params: BlockParams, window: Window) -> Verdict:
    """Verify the Virasoro relations of the rescaled level-zero generators.

    With V_a = q^-1 L[a,0] and k = q^-2 c the claim is
    [V_a, V_b] = (b-a) V_{a+b} + (a^3-a)/12 delta_{a+b,0} k; both sides are
    compared after clearing q^2, so a symbolic q needs no inverse (q is a
    unit).  A concrete q = 0 is already rejected by BlockParams.
    """
    if not isinstance(params.q, Poly) and Fraction(params.q) == 0:
        raise ValueError("q must be nonzero")
    grades = range(window.grade_min, window.grade_max + 1)
    for a, b in itertools.product(grades, repeat=2):
        got = basis_bracket(params, Graded(a, 0), Graded(b, 0))
        expected = Element.basis(Graded(a + b, 0), (b - a) * params.q)
        if a + b == 0:
            expected = expected + Element.basis(CENTRAL, cocycle_value(a))
        if got != expected:
            return Verdict.fails((a, b), got - expected)
    return Verdict.holds_universally()


@dataclass(frozen=True)
class _FormalMonomial:
    """x^grade t^(q_mult*q + offset) with a scalar coefficient; t^q stays formal."""

    grade: int
    q_mult: int
    offset: int
    coeff: Scalar

    def d_dt(self, q: Scalar) -> "_FormalMonomial":
        exponent = self.q_mult * q + self.offset
        return _FormalMonomial(
            self.grade, self.q_mult, self.offset - 1, self.coeff * exponent
        )

    def times_t_power(self, q_mult: int, offset: int) -> "_FormalMonomial":
        return _FormalMonomial(
            self.grade, self.q_mult + q_mult, self.offset + offset, self.coeff
        )


def _residue(mono: _FormalMonomial) -> Scalar:
    # Res_t picks the t^-1 coefficient; with t^q formal that needs q_mult == 0
    if mono.q_mult == 0 and mono.offset == -1:
        return mono.coeff
    return 0


def laurent_realization_check(params: BlockParams, window: Window) -> Verdict:
    """Compare the bracket against its Laurent realization L[a,i] = x^a t^(q+i).

    The realization bracket of monomials f = t^(q+i), g = t^(q+j) is computed
    by formal differentiation,

        x^(a+b) t^(1-q) ((b+p) f' g - (a+p) f g')
        + delta_{a+b,0} (a^3-a)/12 Res_t(t^(-2q-1) f g) c,

    and both routes must agree as Elements for every window index."""
    p, q = params.p, params.q
    grades = range(window.grade_min, window.grade_max + 1)
    levels = range(window.level_max + 1)
    for a, b, i, j in itertools.product(grades, grades, levels, levels):
        f = _FormalMonomial(a, 1, i, 1)
        g = _FormalMonomial(b, 1, j, 1)
        fprime_g = _FormalMonomial(
            a + b, f.q_mult + g.q_mult, f.offset - 1 + g.offset, f.d_dt(q).coeff
        )
        f_gprime = _FormalMonomial(
            a + b, f.q_mult + g.q_mult, f.offset + g.offset - 1, g.d_dt(q).coeff
        )
        realized = Element.zero()
        for mono, factor in ((fprime_g, b + p), (f_gprime, -(a + p))):
            term = mono.times_t_power(-1, 1)  # multiply by t^(1-q)
            if term.q_mult != 1:
                return Verdict.fails((a, i, b, j), "non-canonical t^q multiplicity")
            realized = realized + Element.basis(
                Graded(term.grade, term.offset), factor * term.coeff
            )
        if a + b == 0:
            product = _FormalMonomial(0, 2, i + j, 1).times_t_power(-2, -1)
            res = _residue(product)
            if not scalar_is_zero(res):
                realized = realized + Element.basis(CENTRAL, cocycle_value(a) * res)
        direct = basis_bracket(params, Graded(a, i), Graded(b, j))
        if direct != realized:
            return Verdict.fails((a, i, b, j), direct - realized)
    return Verdict.holds_universally()


def parabolic_degree_zero(
    params: BlockParams, a: Element, level_max: int
) -> list[Element]:
    """Degree-zero slice of the minimal parabolic subalgebra through `a`.

    For a = sum_i c_i L[-1,i] (nonzero, homogeneous of grade -1) the slice is
    spanned by the images w_j = [a, L[1,j]], which come out cocycle-free as

        w_j = sum_i c_i (2q + i + j + p(i-j)) L[0,i+j],   j = 0..level_max.
    """
    if a.is_zero():
        raise ValueError("the grade -1 element must be nonzero")
    for index in a.terms:
        if index is CENTRAL or index.grade != -1 or index.level < 0:
            raise ValueError(f"not homogeneous of grade -1: contains {index}")
    p, q = params.p, params.q
    images = []
    for j in range(level_max + 1):
        w = Element.zero()
        for index, coeff in a.terms.items():
            i = index.level
            w = w + Element.basis(
                Graded(0, i + j), coeff * (2 * q + i + j + p * (i - j))
            )
        images.append(w)
    return images
