"""Exact scalar arithmetic: arbitrary-precision rationals and sparse
multivariate polynomials over them.

Rationals are `fractions.Fraction` (always normalized: positive denominator,
gcd 1, zero is 0/1).  A polynomial lives in a `PolyRing`, which fixes an
ordered table of symbol names; its terms map exponent tuples (one nonnegative
integer per declared symbol) to nonzero Fraction coefficients:

    ring = PolyRing("p", "q")
    2*p^2*q - 1/3   ->   {(2, 1): Fraction(2), (0, 0): Fraction(-1, 3)}

The zero polynomial has empty support.  All operations are pure and return
new objects; nothing here mutates its inputs, so values are safe to share
across workers.

Two polynomials combine only when they share a symbol table, except that a
constant (no symbol dependence) lifts into any ring.  Division is restricted
to nonzero rational constants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Union

RationalLike = Union[int, Fraction]
Scalar = Union[int, Fraction, "Poly"]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class SymbolTableError(ValueError):
    """Raised when polynomials over incompatible symbol tables are combined."""


def parse_rational(text: str | int) -> Fraction:
    """Parse "a/b" or "a" (decimal digit strings) into an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r} (expected 'a' or 'a/b')")
    return Fraction(s)


def format_rational(value: RationalLike) -> str:
    """Render a rational as "a/b", or "a" when the denominator is 1."""
    return str(Fraction(value))


class PolyRing:
    """Ordered symbol table shared by a family of polynomials."""

    __slots__ = ("symbols", "_index")

    def __init__(self, *symbols: str):
        seen = set()
        for name in symbols:
            if not _NAME_RE.match(name or ""):
                raise ValueError(f"invalid symbol name: {name!r}")
            if name in seen:
                raise ValueError(f"duplicate symbol name: {name!r}")
            seen.add(name)
        self.symbols: tuple[str, ...] = tuple(symbols)
        self._index = {name: i for i, name in enumerate(symbols)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(map(repr, self.symbols))})"

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        if name not in self._index:
            raise SymbolTableError(f"symbol {name!r} not declared in {self!r}")
        return self._index[name]

    def const(self, value: RationalLike) -> "Poly":
        coeff = Fraction(value)
        if coeff == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * len(self.symbols): coeff})

    def var(self, name: str) -> "Poly":
        exps = [0] * len(self.symbols)
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)


class Poly:
    """Sparse multivariate polynomial over the rationals.

    Treat instances as immutable; `terms` is never mutated after construction
    and never stores a zero coefficient.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], RationalLike]):
        width = len(ring.symbols)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in terms.items():
            if len(exps) != width or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r} for {ring!r}")
            c = Fraction(coeff)
            if c != 0:
                clean[tuple(exps)] = c
        self.ring = ring
        self.terms = clean

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial, as a Fraction."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return next(iter(self.terms.values()))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring compatibility --------------------------------------------------

    def _coerce(self, other: Scalar) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented  # type: ignore[return-value]
        if other.ring == self.ring:
            return other
        if other.is_constant():
            return self.ring.const(other.constant_value())
        if self.is_constant():
            # handled by caller promoting self into other's ring
            raise _ConstantPromotion
        for name in other.ring.symbols:
            if name not in self.ring:
                raise SymbolTableError(f"symbol table mismatch: {name!r} not shared")
        raise SymbolTableError("symbol table mismatch: tables ordered differently")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Scalar) -> "Poly":
        try:
            rhs = self._coerce(other)
        except _ConstantPromotion:
            return other + self.constant_value()  # type: ignore[operator]
        if rhs is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in rhs.terms.items():
            total = out.get(exps, Fraction(0)) + coeff
            if total == 0:
                out.pop(exps, None)
            else:
                out[exps] = total
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {exps: -c for exps, c in self.terms.items()})

    def __sub__(self, other: Scalar) -> "Poly":
        return self + (-other if isinstance(other, Poly) else -Fraction(other))

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "Poly":
        try:
            rhs = self._coerce(other)
        except _ConstantPromotion:
            return other * self.constant_value()  # type: ignore[operator]
        if rhs is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in rhs.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                total = out.get(exps, Fraction(0)) + c1 * c2
                if total == 0:
                    out.pop(exps, None)
                else:
                    out[exps] = total
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        if isinstance(other, Poly):
            if not other.is_constant():
                raise ValueError("division is only defined by nonzero rational constants")
            other = other.constant_value()
        divisor = Fraction(other)
        if divisor == 0:
            raise ZeroDivisionError("division by zero scalar")
        return Poly(self.ring, {exps: c / divisor for exps, c in self.terms.items()})

    def __pow__(self, power: int) -> "Poly":
        if not isinstance(power, int) or power < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = self.ring.one
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Poly):
            return NotImplemented
        if self.ring == other.ring:
            return self.terms == other.terms
        if self.is_constant() and other.is_constant():
            return self.constant_value() == other.constant_value()
        return False

    __hash__ = None  # type: ignore[assignment]

    # -- evaluation ----------------------------------------------------------

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "Poly":
        """Evaluate some symbols at rational values; unbound symbols remain.

        This is the evaluation homomorphism: the result lives in the same
        ring, with substituted symbols folded into the coefficients.
        """
        values = {self.ring.index(name): Fraction(v) for name, v in bindings.items()}
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.terms.items():
            new_exps = list(exps)
            factor = coeff
            for pos, value in values.items():
                factor *= value ** exps[pos]
                new_exps[pos] = 0
            key = tuple(new_exps)
            total = out.get(key, Fraction(0)) + factor
            if total == 0:
                out.pop(key, None)
            else:
                out[key] = total
        return Poly(self.ring, out)

    def degree_bound(self, symbol: str) -> int:
        """Exact maximum exponent of `symbol` across the support (0 if absent)."""
        pos = self.ring.index(symbol)
        return max((exps[pos] for exps in self.terms), default=0)

    # -- text form -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.symbols, exps)
                if e > 0
            ]
            if not factors:
                body = format_rational(abs(coeff))
            elif abs(coeff) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(abs(coeff))] + factors)
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        text = body if sign == "+" else f"-{body}"
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly({self})"


class _ConstantPromotion(Exception):
    """Internal: a constant poly must be promoted into the other operand's ring."""


def as_fraction(value: Scalar) -> Fraction:
    """Collapse a scalar to a Fraction; error if it still depends on symbols."""
    if isinstance(value, Poly):
        return value.constant_value()
    return Fraction(value)


def scalar_is_zero(value: Scalar) -> bool:
    if isinstance(value, Poly):
        return value.is_zero()
    return value == 0


def format_scalar(value: Scalar) -> str:
    if isinstance(value, Poly):
        return str(value)
    return format_rational(value)
