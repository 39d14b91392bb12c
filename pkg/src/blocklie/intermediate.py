"""The three families of intermediate-series modules over the Block algebra.

All three share the basis {v_m | m in Z}; every graded piece is a line, which
is what makes them intermediate series (uniformly bounded with bound 1).
Only the level-zero generators act; L[alpha,i] with i > 0 and the central
element act as zero.  With q the algebra parameter and rational a, b:

    Aab:  L[alpha,0] v_m = q(a + m + b*alpha) v_{alpha+m}
    Aa:   L[alpha,0] v_m = q(m + alpha) v_{alpha+m}        (m != 0)
          L[alpha,0] v_0 = q*alpha(a + alpha) v_alpha
    Ba:   L[alpha,0] v_m = q*m v_{alpha+m}                 (m != -alpha)
          L[alpha,0] v_{-alpha} = -q*alpha(a + alpha) v_0

The parameter p never enters the action; the axiom check ranges over p to
confirm that.  The central element must act as zero: the bracket of opposite
level-zero generators contains the cocycle, and a nonzero central action
breaks the commutator identity (module_axiom_check exhibits the witness).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .block import BlockParams, block_bracket
from .engine import CENTRAL, Element, Graded, Verdict, Window
from .scalars import as_fraction, format_rational

VARIANTS = ("Aab", "Aa", "Ba")


@dataclass(frozen=True)
class IntermediateKind:
    variant: str
    a: Fraction
    b: Fraction | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown intermediate-series variant {self.variant!r}")
        if (self.variant == "Aab") != (self.b is not None):
            raise ValueError("parameter b is required exactly for the Aab family")


def weight_shift_family(a, b) -> IntermediateKind:
    return IntermediateKind("Aab", Fraction(a), Fraction(b))


def zero_exception_family(a) -> IntermediateKind:
    return IntermediateKind("Aa", Fraction(a))


def diagonal_exception_family(a) -> IntermediateKind:
    return IntermediateKind("Ba", Fraction(a))


class ModuleVector:
    """Finitely supported combination of the weight basis v_m, m in Z."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        clean = {}
        if terms:
            for m, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    clean[m] = c
        self.terms = clean

    @staticmethod
    def basis(m: int, coeff=1) -> "ModuleVector":
        return ModuleVector({m: Fraction(coeff)})

    @staticmethod
    def zero() -> "ModuleVector":
        return ModuleVector()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        out = dict(self.terms)
        for m, coeff in other.terms.items():
            total = out.get(m, Fraction(0)) + coeff
            if total == 0:
                out.pop(m, None)
            else:
                out[m] = total
        return ModuleVector(out)

    def __neg__(self) -> "ModuleVector":
        return ModuleVector({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + (-other)

    def scaled(self, factor) -> "ModuleVector":
        factor = Fraction(factor)
        if factor == 0:
            return ModuleVector()
        return ModuleVector({m: c * factor for m, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{format_rational(c)}*v[{m}]" for m, c in sorted(self.terms.items())
        )

    def __repr__(self) -> str:
        return f"ModuleVector({self})"


def _basis_action(
    kind: IntermediateKind, q: Fraction, alpha: int, level, m: int
) -> tuple[Fraction, int] | None:
    if level > 0:
        return None
    if kind.variant == "Aab":
        return q * (kind.a + m + kind.b * alpha), alpha + m
    if kind.variant == "Aa":
        if m != 0:
            return q * (m + alpha), alpha + m
        return q * alpha * (kind.a + alpha), alpha
    if m != -alpha:
        return q * m, alpha + m
    return -q * alpha * (kind.a + alpha), 0


def act(
    kind: IntermediateKind,
    params: BlockParams,
    x: Element,
    v: ModuleVector,
    central_value: Fraction = Fraction(0),
) -> ModuleVector:
    """Linear extension of the family's action formulas.

    `central_value` is the scalar by which c acts; the modules themselves
    require 0 (the default), and the nonzero setting exists so the axiom
    check can demonstrate why."""
    q = as_fraction(params.q)
    out = ModuleVector.zero()
    for index, coeff in x.terms.items():
        scale = as_fraction(coeff)
        if index is CENTRAL:
            if central_value != 0:
                out = out + v.scaled(scale * central_value)
            continue
        for m, vc in v.terms.items():
            hit = _basis_action(kind, q, index.grade, index.level, m)
            if hit is None:
                continue
            value, target = hit
            out = out + ModuleVector.basis(target, scale * vc * value)
    return out


def module_axiom_check(
    kind: IntermediateKind,
    params: BlockParams,
    window: Window,
    weight_range: tuple[int, int],
    central_value: Fraction = Fraction(0),
) -> Verdict:
    """Verify [x,y].v = x.(y.v) - y.(x.v) exactly on all window basis pairs.

    Pairs are scanned with the first grade running from low to high and the
    second grade never above the first (antisymmetry makes that exhaustive),
    then levels, then the weight index; the first failing tuple
    (alpha, beta, i, j, m) is the witness.
    """
    lo, hi = weight_range
    grades = range(window.grade_min, window.grade_max + 1)
    levels = range(window.level_max + 1)
    for alpha in grades:
        for beta in range(window.grade_min, alpha + 1):
            for i, j in itertools.product(levels, repeat=2):
                x = Element.basis(Graded(alpha, i))
                y = Element.basis(Graded(beta, j))
                bracket = block_bracket(params, x, y)
                for m in range(lo, hi + 1):
                    v = ModuleVector.basis(m)
                    lhs = act(kind, params, bracket, v, central_value)
                    rhs = act(kind, params, x, act(kind, params, y, v, central_value), central_value) - act(
                        kind, params, y, act(kind, params, x, v, central_value), central_value
                    )
                    if lhs != rhs:
                        return Verdict.fails((alpha, beta, i, j, m), lhs - rhs)
    return Verdict.holds_universally()


@dataclass(frozen=True)
class BoundednessRecord:
    family: str
    graded_dimension_bound: int
    note: str


def boundedness_report(kind: IntermediateKind) -> BoundednessRecord:
    """Structural fact for the report pipeline: every graded piece is one line."""
    return BoundednessRecord(
        kind.variant,
        1,
        "basis v[m], m in Z; one basis vector per weight index by construction",
    )
