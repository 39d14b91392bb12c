"""Generic machinery for graded Lie algebras given by closed-form brackets.

Basis labels are either `Graded(grade, level)` or the central element
`CENTRAL`; an `Element` is a finitely supported linear combination of labels
with exact scalar coefficients (Fraction, or Poly when parameters stay
symbolic).  A `BracketRule` packages the closed-form bracket of two graded
basis labels together with declared per-index degree bounds of its structure
coefficients; those bounds size the grids of `grid_identity_check`, which
turns antisymmetry/Jacobi into deterministic polynomial identity tests: a
residual that vanishes on a grid with more points per variable than the
residual's degree vanishes for all integer indices.

Degree bounds are spot-verified at rule construction by exact finite
differences, so a rule cannot silently understate them.

`subalgebra_closure` works in concrete-parameter mode (all coefficients
rational): it iterates span -> span + [span, span] inside a finite window,
discarding bracket products that land outside, and maintains one reduced
echelon basis over the window coordinates ordered grade asc, level asc,
central last.  The echelon form is canonical, so results are independent of
processing order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence, Union

from .scalars import Poly, Scalar, as_fraction, format_scalar, scalar_is_zero

IndexValue = Union[int, Fraction]


class Graded:
    """Label of a graded basis vector: integer (or grid-rational) grade and level.

    Treat as immutable; the hash is computed once (labels are dict keys in
    every hot loop)."""

    __slots__ = ("grade", "level", "_hash")

    def __init__(self, grade: IndexValue, level: IndexValue):
        self.grade = grade
        self.level = level
        self._hash = hash((grade, level))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Graded)
            and self.grade == other.grade
            and self.level == other.level
        )

    def __repr__(self) -> str:
        return f"Graded({self.grade}, {self.level})"

    def __str__(self) -> str:
        return f"L[{self.grade},{self.level}]"


class _Central:
    """The central basis label; a singleton, written `c`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "c"

    __str__ = __repr__


CENTRAL = _Central()
BasisIndex = Union[Graded, _Central]


def basis_sort_key(index: BasisIndex):
    # grade asc, level asc; the central label sorts after every graded one
    if index is CENTRAL:
        return (1, 0, 0)
    return (0, index.grade, index.level)


class Element:
    """Finitely supported linear combination of basis labels.

    Coefficients are exact scalars; zero coefficients are never stored.
    Treat instances as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BasisIndex, Scalar] | None = None):
        clean: dict[BasisIndex, Scalar] = {}
        if terms:
            for index, coeff in terms.items():
                if not scalar_is_zero(coeff):
                    clean[index] = coeff if isinstance(coeff, Poly) else Fraction(coeff)
        self.terms = clean

    @staticmethod
    def zero() -> "Element":
        return Element()

    @staticmethod
    def basis(index: BasisIndex, coeff: Scalar = 1) -> "Element":
        return Element({index: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def coefficient(self, index: BasisIndex) -> Scalar:
        return self.terms.get(index, Fraction(0))

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        out = dict(self.terms)
        for index, coeff in other.terms.items():
            total = out.get(index, Fraction(0)) + coeff
            if scalar_is_zero(total):
                out.pop(index, None)
            else:
                out[index] = total
        return Element(out)

    def __neg__(self) -> "Element":
        return Element({index: -coeff for index, coeff in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scaled(self, factor: Scalar) -> "Element":
        if scalar_is_zero(factor):
            return Element()
        return Element({index: coeff * factor for index, coeff in self.terms.items()})

    def __rmul__(self, factor: Scalar) -> "Element":
        return self.scaled(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(
            scalar_is_zero(self.terms[k] - other.terms[k]) for k in self.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for index in sorted(self.terms, key=basis_sort_key):
            coeff = self.terms[index]
            if isinstance(coeff, Poly):
                pieces.append(("+", f"({coeff})*{index}"))
            else:
                mag = abs(coeff)
                body = str(index) if mag == 1 else f"{format_scalar(mag)}*{index}"
                pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        text = body if sign == "+" else f"-{body}"
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Element({self})"


@dataclass(frozen=True)
class Window:
    """Finite truncation box: grades in [grade_min, grade_max], levels in [0, level_max]."""

    grade_min: int
    grade_max: int
    level_max: int

    def __post_init__(self):
        if self.grade_min > self.grade_max:
            raise ValueError("grade_min must not exceed grade_max")
        if self.level_max < 0:
            raise ValueError("level_max must be nonnegative")

    def contains(self, index: BasisIndex) -> bool:
        if index is CENTRAL:
            return self.grade_min <= 0 <= self.grade_max
        return (
            self.grade_min <= index.grade <= self.grade_max
            and 0 <= index.level <= self.level_max
        )

    def indices(self) -> list[BasisIndex]:
        """All window labels, grade asc, level asc, central last."""
        out: list[BasisIndex] = [
            Graded(g, l)
            for g in range(self.grade_min, self.grade_max + 1)
            for l in range(self.level_max + 1)
        ]
        if self.grade_min <= 0 <= self.grade_max:
            out.append(CENTRAL)
        return out


def truncate(element: Element, window: Window) -> Element:
    """Drop every term whose label falls outside the window."""
    return Element(
        {i: c for i, c in element.terms.items() if window.contains(i)}
    )


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity check: universal, or a concrete counterexample."""

    holds: bool
    witness: tuple | None = None
    residual: object | None = None

    @staticmethod
    def holds_universally() -> "Verdict":
        return Verdict(True)

    @staticmethod
    def fails(witness: tuple, residual: object) -> "Verdict":
        return Verdict(False, witness, residual)

    def __str__(self) -> str:
        if self.holds:
            return "holds_universally"
        return f"fails(witness={self.witness}, residual={self.residual})"


class InsufficientGridError(ValueError):
    """A grid is too small to certify the identity universally."""


@dataclass(frozen=True)
class BracketRule:
    """Closed-form bracket of two graded basis labels.

    `pair` maps (x, y) to the bracket Element; its structure coefficients
    must be polynomial in the four indices with per-variable degrees at most
    `grade_degree_bound` (in either grade) and `level_degree_bound` (in
    either level).  Output grades/levels must be affine in the inputs, as
    recorded in `grading_law`.
    """

    pair: Callable[[Graded, Graded], Element]
    grade_degree_bound: int
    level_degree_bound: int
    grading_law: str = ""


def bracket_rule(
    pair: Callable[[Graded, Graded], Element],
    grade_degree_bound: int,
    level_degree_bound: int,
    grading_law: str = "",
    spot_check: bool = True,
) -> BracketRule:
    """Build a BracketRule, spot-verifying the declared degree bounds.

    The check takes exact finite differences of the offset-normalized
    structure coefficients along each index at a few deterministic base
    points; the (d+1)-th difference of a degree-<=d polynomial vanishes.
    Rules with non-polynomial parts (delta cocycles) must skip the check.
    """
    rule = BracketRule(pair, grade_degree_bound, level_degree_bound, grading_law)
    if spot_check:
        _spot_check_degree_bounds(rule)
    return rule


def _offset_profile(rule: BracketRule, indices: tuple[int, int, int, int]):
    """Structure coefficients keyed by output offset (grade-ga-gb, level-la-lb)."""
    ga, la, gb, lb = indices
    out: dict[tuple, Scalar] = {}
    for index, coeff in rule.pair(Graded(ga, la), Graded(gb, lb)).terms.items():
        if index is CENTRAL:
            key: tuple = ("c",)
        else:
            key = (index.grade - ga - gb, index.level - la - lb)
        out[key] = out.get(key, Fraction(0)) + coeff
    return out


def _spot_check_degree_bounds(rule: BracketRule) -> None:
    bases = [(0, 0, 1, 0), (2, 1, -1, 3), (-3, 2, 4, 1)]
    bounds = (
        rule.grade_degree_bound,
        rule.level_degree_bound,
        rule.grade_degree_bound,
        rule.level_degree_bound,
    )
    for base in bases:
        for slot, bound in enumerate(bounds):
            order = bound + 1
            acc: dict[tuple, Scalar] = {}
            for t in range(order + 1):
                point = list(base)
                point[slot] += t
                sign = (-1) ** t * comb(order, t)
                for key, coeff in _offset_profile(rule, tuple(point)).items():
                    acc[key] = acc.get(key, Fraction(0)) + sign * coeff
            for key, coeff in acc.items():
                if not scalar_is_zero(coeff):
                    raise ValueError(
                        f"declared degree bound {bound} violated along index slot "
                        f"{slot} at base {base} (output offset {key})"
                    )


def bracket_apply(rule: BracketRule, x: Element, y: Element) -> Element:
    """Bilinear extension of the rule; the central label brackets to zero."""
    out = Element.zero()
    for ix, cx in x.terms.items():
        if ix is CENTRAL:
            continue
        for iy, cy in y.terms.items():
            if iy is CENTRAL:
                continue
            out = out + rule.pair(ix, iy).scaled(cx * cy)
    return out


def _require_grid(name: str, values: Sequence[IndexValue], needed: int) -> None:
    if len(set(values)) != len(values):
        raise InsufficientGridError(f"{name} grid values must be distinct")
    if len(values) < needed:
        raise InsufficientGridError(
            f"{name} grid needs at least {needed} distinct values, got {len(values)}"
        )


def normalize_index_values(values: Sequence[IndexValue]) -> list[IndexValue]:
    """Collapse integral Fractions to ints (same equality class, cheap hash)."""
    return [
        int(v) if isinstance(v, Fraction) and v.denominator == 1 else v
        for v in values
    ]


def grid_identity_check(
    rule: BracketRule,
    identity: str,
    grade_values: Sequence[IndexValue],
    level_values: Sequence[IndexValue],
) -> Verdict:
    """Certify antisymmetry or Jacobi for all integer indices by grid testing.

    Sound whenever the rule's structure coefficients are polynomial in the
    indices within the declared bounds and its grading law is affine: the
    residual's coefficient functions then have per-variable degree at most
    the bound (antisymmetry) or twice it (Jacobi), so vanishing on the grid
    forces vanishing everywhere.
    """
    if identity == "antisymmetry":
        multiplier = 1
    elif identity == "jacobi":
        multiplier = 2
    else:
        raise ValueError(f"unknown identity {identity!r}")
    _require_grid("grade", grade_values, multiplier * rule.grade_degree_bound + 1)
    _require_grid("level", level_values, multiplier * rule.level_degree_bound + 1)

    singles = [
        Graded(g, l)
        for g, l in itertools.product(
            normalize_index_values(grade_values), normalize_index_values(level_values)
        )
    ]
    # basis pairs recur across grid points; cache their bracket terms
    cache: dict[tuple[Graded, Graded], dict] = {}

    def pair_terms(a: Graded, b: Graded) -> dict:
        key = (a, b)
        hit = cache.get(key)
        if hit is None:
            hit = rule.pair(a, b).terms
            cache[key] = hit
        return hit

    if identity == "antisymmetry":
        for x, y in itertools.product(singles, repeat=2):
            acc: dict[BasisIndex, Scalar] = dict(pair_terms(x, y))
            for index, coeff in pair_terms(y, x).items():
                acc[index] = acc.get(index, Fraction(0)) + coeff
            if any(not scalar_is_zero(v) for v in acc.values()):
                return Verdict.fails(((x.grade, x.level), (y.grade, y.level)), Element(acc))
        return Verdict.holds_universally()

    for x, y, z in itertools.product(singles, repeat=3):
        acc = {}
        for outer, inner in ((x, (y, z)), (z, (x, y)), (y, (z, x))):
            for mid, mid_coeff in pair_terms(*inner).items():
                if mid is CENTRAL:
                    continue
                for index, coeff in pair_terms(outer, mid).items():
                    acc[index] = acc.get(index, Fraction(0)) + mid_coeff * coeff
        if any(not scalar_is_zero(v) for v in acc.values()):
            witness = tuple((s.grade, s.level) for s in (x, y, z))
            return Verdict.fails(witness, Element(acc))
    return Verdict.holds_universally()


class ClosureError(ValueError):
    """Raised when closure/membership preconditions are violated."""


@dataclass(frozen=True)
class Closure:
    """Reduced echelon basis of a window-truncated bracket closure."""

    window: Window
    rows: tuple[Element, ...]

    def by_grade(self) -> dict[int, tuple[Element, ...]]:
        """Rows grouped by the grade of their pivot label (central counts as 0)."""
        groups: dict[int, list[Element]] = {}
        for row in self.rows:
            pivot = min(row.terms, key=basis_sort_key)
            grade = 0 if pivot is CENTRAL else int(pivot.grade)
            groups.setdefault(grade, []).append(row)
        return {g: tuple(rows) for g, rows in sorted(groups.items())}

    def dimension(self) -> int:
        return len(self.rows)


def _element_vector(
    element: Element, coord_index: Mapping[BasisIndex, int], *, discard_outside: bool
) -> list[Fraction]:
    vec = [Fraction(0)] * len(coord_index)
    for index, coeff in element.terms.items():
        pos = coord_index.get(index)
        if pos is None:
            if discard_outside:
                continue
            raise ClosureError(f"label {index} lies outside the closure window")
        try:
            vec[pos] = as_fraction(coeff)
        except ValueError:
            raise ClosureError(
                "closure requires concrete rational coefficients, got "
                f"symbolic {coeff} at {index}"
            ) from None
    return vec


class _Echelon:
    """Reduced row echelon accumulator over a fixed coordinate order."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, vec: list[Fraction]) -> list[Fraction]:
        vec = list(vec)
        for row, pivot in zip(self.rows, self.pivots):
            factor = vec[pivot]
            if factor:
                for k in range(pivot, self.width):
                    vec[k] -= factor * row[k]
        return vec

    def insert(self, vec: list[Fraction]) -> bool:
        vec = self.reduce(vec)
        pivot = next((k for k, v in enumerate(vec) if v), None)
        if pivot is None:
            return False
        inv = vec[pivot]
        vec = [v / inv for v in vec]
        for row in self.rows:
            factor = row[pivot]
            if factor:
                for k in range(pivot, self.width):
                    row[k] -= factor * vec[k]
        at = next((i for i, p in enumerate(self.pivots) if p > pivot), len(self.pivots))
        self.rows.insert(at, vec)
        self.pivots.insert(at, pivot)
        return True


def subalgebra_closure(
    rule: BracketRule, generators: Iterable[Element], window: Window
) -> Closure:
    """Smallest window-truncated subspace containing the generators and closed
    under the truncated bracket.

    Concrete-parameter mode only: every coefficient must be a rational
    constant.  Bracket products landing outside the window are discarded.
    """
    coords = window.indices()
    coord_index = {index: pos for pos, index in enumerate(coords)}
    ech = _Echelon(len(coords))
    for gen in generators:
        ech.insert(_element_vector(truncate(gen, window), coord_index, discard_outside=False))

    def row_element(vec: list[Fraction]) -> Element:
        return Element({coords[k]: v for k, v in enumerate(vec) if v})

    while True:
        snapshot = [row_element(r) for r in ech.rows]
        added = False
        for a in range(len(snapshot)):
            for b in range(a + 1, len(snapshot)):
                product = truncate(bracket_apply(rule, snapshot[a], snapshot[b]), window)
                if product.is_zero():
                    continue
                vec = _element_vector(product, coord_index, discard_outside=True)
                if ech.insert(vec):
                    added = True
        if not added:
            break
    return Closure(window, tuple(row_element(r) for r in ech.rows))


def membership(element: Element, closure: Closure) -> bool:
    """True iff the element reduces to zero against the closure's echelon basis."""
    coords = closure.window.indices()
    coord_index = {index: pos for pos, index in enumerate(coords)}
    ech = _Echelon(len(coords))
    for row in closure.rows:
        ech.insert(_element_vector(row, coord_index, discard_outside=False))
    vec = _element_vector(element, coord_index, discard_outside=False)
    return not any(ech.reduce(vec))


def adjoint_chain(
    rule: BracketRule, z1: Element, z2: Element, l1: int, l2: int
) -> Element:
    """ad_{z2}^(l2-1) ad_{z1}^(l1) applied to z2, by iterated brackets."""
    if l1 < 0 or l2 < 1:
        raise ValueError("require l1 >= 0 and l2 >= 1")
    out = z2
    for _ in range(l1):
        out = bracket_apply(rule, z1, out)
    for _ in range(l2 - 1):
        out = bracket_apply(rule, z2, out)
    return out
