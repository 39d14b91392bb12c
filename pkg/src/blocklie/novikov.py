"""Witt-type Novikov algebras and their affinization into graded Lie algebras.

The product family on Witt labels x_a (stored as Graded(a, 0)) is

    x_a * x_b = (b + p) x_{a+b} + mu x_{a+b+theta}

with rational or symbolic p, mu and an integer shift theta.  Affinization
turns any bilinear product rule into a bracket on two-index labels,

    [a[m], b[n]] = (m + q)(a*b)[m+n] - (n + q)(b*a)[m+n],

which is a Lie bracket exactly when the product is Novikov (left-symmetric
plus right-commutative).  `theorem22_probe` observes that biconditional on
grids instead of assuming it, so a counterexample would surface as data.

Axiom checks use the same grid polynomial-identity-testing guarantee as the
engine: residual coefficients are polynomial in the three grade indices with
per-variable degree at most twice the rule's bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .engine import (
    BracketRule,
    Element,
    Graded,
    InsufficientGridError,
    Verdict,
    Window,
    bracket_rule,
    grid_identity_check,
    normalize_index_values,
)
from .scalars import Scalar, scalar_is_zero


@dataclass(frozen=True)
class WittNovikovParams:
    p: Scalar
    mu: Scalar = 0
    theta: int = 0

    def __post_init__(self):
        if not isinstance(self.theta, int):
            raise ValueError("theta must be an integer shift")


@dataclass(frozen=True)
class ProductRule:
    """Closed-form bilinear product of two Witt labels (grades only).

    For `universal` rules the structure coefficients are polynomial in the
    two grades with per-variable degree at most `grade_degree_bound`, so a
    sufficiently large grid verdict extends to all integers.  Table-backed
    rules (see `table_product_rule`) carry `universal=False`: their verdicts
    only ever speak about the tested grid.
    """

    pair: Callable[[int, int], Element]
    grade_degree_bound: int
    label: str = ""
    universal: bool = True


@dataclass(frozen=True)
class AffinizationParams:
    q: Scalar  # q = 0 is permitted here; downstream algebras may restrict it


def witt_novikov_product(params: WittNovikovParams, a, b) -> Element:
    """(b + p) x_{a+b} + mu x_{a+b+theta}, exactly."""
    out = Element.basis(Graded(a + b, 0), b + params.p)
    if not scalar_is_zero(params.mu):
        out = out + Element.basis(Graded(a + b + params.theta, 0), params.mu)
    return out


def witt_product_rule(params: WittNovikovParams) -> ProductRule:
    return ProductRule(
        lambda a, b: witt_novikov_product(params, a, b),
        grade_degree_bound=1,
        label=f"witt(p={params.p}, mu={params.mu}, theta={params.theta})",
    )


def perturbed_witt_rule(
    params: WittNovikovParams,
    target: str,
    exponents: tuple[int, int],
    delta: Scalar,
) -> ProductRule:
    """Witt-type rule with `delta * a^ea * b^eb` added to one coefficient.

    `target` picks the term: "main" perturbs the (b+p) coefficient of
    x_{a+b}, "shift" perturbs the mu coefficient of x_{a+b+theta}.
    """
    if target not in ("main", "shift"):
        raise ValueError(f"unknown perturbation target {target!r}")
    ea, eb = exponents
    if ea < 0 or eb < 0:
        raise ValueError("perturbation exponents must be nonnegative")

    def pair(a, b) -> Element:
        bump = delta * a**ea * b**eb
        out = witt_novikov_product(params, a, b)
        grade = a + b if target == "main" else a + b + params.theta
        return out + Element.basis(Graded(grade, 0), bump)

    return ProductRule(
        pair,
        grade_degree_bound=max(1, ea, eb),
        label=f"perturbed {target} by {delta}*a^{ea}*b^{eb}",
    )


def table_product_rule(
    entries: dict[tuple[int, int], Element], label: str = "table"
) -> ProductRule:
    """Product given extensionally on a small index window.

    Index pairs absent from the table multiply to zero (finite-support
    convention).  No polynomial structure is assumed, so axiom verdicts on
    table rules hold only for the tested grid, never universally.
    """
    table = dict(entries)

    def pair(a, b) -> Element:
        return table.get((a, b), Element.zero())

    return ProductRule(pair, grade_degree_bound=0, label=label, universal=False)


def product_apply(rule: ProductRule, x: Element, y: Element) -> Element:
    """Bilinear extension of a product rule to Witt Elements."""
    out = Element.zero()
    for ix, cx in x.terms.items():
        for iy, cy in y.terms.items():
            out = out + rule.pair(ix.grade, iy.grade).scaled(cx * cy)
    return out


@dataclass(frozen=True)
class NovikovVerdicts:
    left_symmetry: Verdict
    right_commutativity: Verdict

    @property
    def holds(self) -> bool:
        return self.left_symmetry.holds and self.right_commutativity.holds


def novikov_axiom_check(
    rule: ProductRule, grade_values: Sequence
) -> NovikovVerdicts:
    """Grid-certify left symmetry (ab)c - a(bc) = (ba)c - b(ac) and right
    commutativity (ab)c = (ac)b.

    For universal rules, holding on a grid larger than the residual degree
    bounds implies holding for all integer grades; table rules are checked
    verbatim on the grid they were given."""
    if len(set(grade_values)) != len(grade_values):
        raise InsufficientGridError("grade grid values must be distinct")
    if rule.universal:
        needed = 2 * rule.grade_degree_bound + 1
        if len(grade_values) < needed:
            raise InsufficientGridError(
                f"grade grid needs at least {needed} distinct values, "
                f"got {len(grade_values)}"
            )
    grade_values = normalize_index_values(grade_values)

    cache: dict[tuple, dict] = {}

    def prod_terms(a, b) -> dict:
        hit = cache.get((a, b))
        if hit is None:
            hit = rule.pair(a, b).terms
            cache[(a, b)] = hit
        return hit

    def add_assoc(acc: dict, sign: int, first, second, third) -> None:
        # sign * ((x_first x_second) x_third)
        for mid, cm in prod_terms(first, second).items():
            for out, co in prod_terms(mid.grade, third).items():
                acc[out] = acc.get(out, Fraction(0)) + sign * cm * co

    def add_left(acc: dict, sign: int, first, second, third) -> None:
        # sign * (x_first (x_second x_third))
        for mid, cm in prod_terms(second, third).items():
            for out, co in prod_terms(first, mid.grade).items():
                acc[out] = acc.get(out, Fraction(0)) + sign * cm * co

    left = right = None
    for ga, gb, gc in itertools.product(grade_values, repeat=3):
        if left is None:
            acc: dict = {}
            add_assoc(acc, 1, ga, gb, gc)
            add_left(acc, -1, ga, gb, gc)
            add_assoc(acc, -1, gb, ga, gc)
            add_left(acc, 1, gb, ga, gc)
            if any(not scalar_is_zero(v) for v in acc.values()):
                left = Verdict.fails((ga, gb, gc), Element(acc))
        if right is None:
            acc = {}
            add_assoc(acc, 1, ga, gb, gc)
            add_assoc(acc, -1, ga, gc, gb)
            if any(not scalar_is_zero(v) for v in acc.values()):
                right = Verdict.fails((ga, gb, gc), Element(acc))
        if left is not None and right is not None:
            break
    return NovikovVerdicts(
        left or Verdict.holds_universally(), right or Verdict.holds_universally()
    )


def affinize(rule: ProductRule, params: AffinizationParams) -> BracketRule:
    """Bracket [a[m], b[n]] = (m+q)(ab)[m+n] - (n+q)(ba)[m+n] on Graded(grade, m)."""
    q = params.q

    def relevel(product: Element, level) -> Element:
        return Element(
            {Graded(i.grade, level): c for i, c in product.terms.items()}
        )

    def pair(x: Graded, y: Graded) -> Element:
        m, n = x.level, y.level
        ab = rule.pair(x.grade, y.grade)
        ba = rule.pair(y.grade, x.grade)
        return (
            relevel(ab, m + n).scaled(m + q)
            + relevel(ba, m + n).scaled(-(n + q))
        )

    return bracket_rule(
        pair,
        grade_degree_bound=rule.grade_degree_bound,
        level_degree_bound=1,
        grading_law="grades add (plus product shifts); levels add",
    )


@dataclass(frozen=True)
class ProbeReport:
    """Observed data for the Novikov <-> Lie biconditional on one rule."""

    novikov: NovikovVerdicts
    jacobi_of_affinization: Verdict
    equivalence_observed: bool


def theorem22_probe(
    rule: ProductRule,
    params: AffinizationParams,
    grade_values: Sequence,
    level_values: Sequence,
) -> ProbeReport:
    """Check the Novikov axioms and the affinized Jacobi identity on grids and
    report whether the two verdicts agree (they should, for every rule)."""
    axioms = novikov_axiom_check(rule, grade_values)
    jacobi = grid_identity_check(
        affinize(rule, params), "jacobi", grade_values, level_values
    )
    return ProbeReport(axioms, jacobi, axioms.holds == jacobi.holds)


def block_sZ_reindex_check(s: Fraction, window: Window) -> Verdict:
    """Verify that the (p, q, mu, theta) = (1, s-1, -s, 1) bracket, relabeled
    through R[a,i] = L[a-1,i], reproduces

        [R[a,i], R[b,j]] = s(j-i) R[a+b,i+j] + ((i+s-1)b - (j+s-1)a) R[a+b-1,i+j]

    exactly for all window indices."""
    s = Fraction(s)
    rule = affinize(
        witt_product_rule(WittNovikovParams(p=Fraction(1), mu=-s, theta=1)),
        AffinizationParams(q=s - 1),
    )
    grades = range(window.grade_min, window.grade_max + 1)
    levels = range(window.level_max + 1)
    for a, b, i, j in itertools.product(grades, grades, levels, levels):
        got = rule.pair(Graded(a - 1, i), Graded(b - 1, j))
        expected = Element.basis(Graded(a + b - 1, i + j), s * (j - i)) + Element.basis(
            Graded(a + b - 2, i + j), (i + s - 1) * b - (j + s - 1) * a
        )
        if got != expected:
            return Verdict.fails((a, i, b, j), got - expected)
    return Verdict.holds_universally()
