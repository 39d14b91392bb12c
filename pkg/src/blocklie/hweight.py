"""Quasifinite highest-weight classification for the Block type algebra.

A weight functional is described by its labels at the degree-zero levels,
Lambda_k = Lambda(L[0,k]), plus a central label.  The classification runs
through the normalized generating series

    c_k = k! [z^k] Delta = (2q + (1 - p^2) k) Lambda_k,

because the irreducible highest-weight module is quasifinite exactly when
Delta is a quasipolynomial, i.e. when the c_k satisfy a constant-coefficient
linear recurrence.  Working with the normalized coefficients turns the
differential-equation criterion into minimal-recurrence synthesis over exact
rationals.

The second, independent criterion looks for a degree -1 singular vector
a = sum_i x_i L[-1,i]: the weight must kill the degree-zero slice of the
minimal parabolic subalgebra through a, giving the exact linear system

    M[j,i] = (2q + i + j + p(i-j)) Lambda_{i+j},        M x = 0.

At p = 0 the matrix rows are shifted series coefficients and the kernel
matches the annihilator; for general nonzero p the two criteria are computed
independently and `criteria_cross_check` reports what it sees.

With only finitely many labels, "not quasifinite" can never be absolute, so
every negative verdict is horizon-qualified.  At singular label indices
(2q + (1-p^2)k = 0) the series carries no information about Lambda_k; label
synthesis applies the convention Lambda_k = 0 there and demands c_k = 0,
else the quasipolynomial is unrealizable.

The central label never enters any verdict: the cocycle vanishes at grade
+-1, so neither Delta nor the singular-vector system sees it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .block import BlockParams
from .scalars import format_rational

Coeffs = tuple[Fraction, ...]


class HorizonError(ValueError):
    """Raised when an operation needs more labels than the weight provides."""


class UnrealizableError(ValueError):
    """A quasipolynomial demanding a nonzero series value at a singular index."""


def _poly_strip(coeffs: Sequence[Fraction]) -> Coeffs:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Coeffs:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _poly_strip(out)


def format_poly(coeffs: Sequence[Fraction], variable: str = "t") -> str:
    """Render an ascending coefficient list as e.g. "t^2 - 2*t + 1"."""
    stripped = _poly_strip(coeffs)
    if not stripped:
        return "0"
    parts = []
    for power in range(len(stripped) - 1, -1, -1):
        coeff = stripped[power]
        if coeff == 0:
            continue
        if power == 0:
            body = format_rational(abs(coeff))
        else:
            var = variable if power == 1 else f"{variable}^{power}"
            body = var if abs(coeff) == 1 else f"{format_rational(abs(coeff))}*{var}"
        parts.append(("-" if coeff < 0 else "+", body))
    sign, body = parts[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class QuasiPolynomial:
    """Finite sum of f_r(z) * exp(b_r z) with rational polynomial f_r and
    pairwise distinct rational bases b_r; canonical: bases sorted, no zero f."""

    terms: tuple[tuple[Coeffs, Fraction], ...]

    @staticmethod
    def of(terms: Sequence[tuple[Sequence, object]]) -> "QuasiPolynomial":
        merged: dict[Fraction, list[Fraction]] = {}
        for coeffs, base in terms:
            base = Fraction(base)
            poly = [Fraction(c) for c in coeffs]
            acc = merged.setdefault(base, [])
            for k, c in enumerate(poly):
                while len(acc) <= k:
                    acc.append(Fraction(0))
                acc[k] += c
        clean = []
        for base in sorted(merged):
            poly = _poly_strip(merged[base])
            if poly:
                clean.append((poly, base))
        return QuasiPolynomial(tuple(clean))

    def is_zero(self) -> bool:
        return not self.terms

    def series(self, horizon: int) -> Coeffs:
        """Normalized coefficients c_k = k! [z^k] of this function, k = 0..horizon."""
        out = [Fraction(0)] * (horizon + 1)
        for coeffs, base in self.terms:
            for d, c in enumerate(coeffs):
                if c == 0:
                    continue
                for k in range(d, horizon + 1):
                    # k! [z^k] z^d e^{bz} = k!/(k-d)! * b^(k-d); 0^0 = 1
                    out[k] += c * Fraction(factorial(k), factorial(k - d)) * base ** (k - d)
        return tuple(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({format_poly(coeffs, 'z')})*exp({format_rational(base)}*z)"
            for coeffs, base in self.terms
        )


def qp_annihilator(qp: QuasiPolynomial) -> Coeffs:
    """Minimal monic constant-coefficient annihilator: prod (t - b)^(deg f + 1)."""
    if qp.is_zero():
        raise ValueError("the zero quasipolynomial has no minimal annihilator")
    out: Coeffs = (Fraction(1),)
    for coeffs, base in qp.terms:
        factor = (-base, Fraction(1))
        for _ in range(len(coeffs)):
            out = _poly_mul(out, factor)
    return out


@dataclass(frozen=True)
class Weight:
    """Highest-weight data: explicit labels up to a horizon, an optional
    quasipolynomial generator that extends them to any horizon, and the
    central label."""

    labels: Coeffs | None = None
    qp: QuasiPolynomial | None = None
    central_label: Fraction = Fraction(0)

    def __post_init__(self):
        if self.labels is None and self.qp is None:
            raise ValueError("a weight needs explicit labels or a generator")

    @staticmethod
    def from_labels(labels: Sequence, central_label=0) -> "Weight":
        return Weight(
            labels=tuple(Fraction(v) for v in labels),
            central_label=Fraction(central_label),
        )


def singular_indices(params: BlockParams, horizon: int) -> tuple[int, ...]:
    """Indices k <= horizon where 2q + (1-p^2)k vanishes (at most one)."""
    p, q = Fraction(params.p), Fraction(params.q)
    out = []
    for k in range(horizon + 1):
        if 2 * q + (1 - p * p) * k == 0:
            out.append(k)
    return tuple(out)


def weight_labels(weight: Weight, params: BlockParams, horizon: int) -> Coeffs:
    """Labels Lambda_0..Lambda_horizon, synthesizing from the generator if needed."""
    if weight.labels is not None and len(weight.labels) > horizon:
        return weight.labels[: horizon + 1]
    if weight.qp is not None:
        return labels_from_quasipolynomial(weight.qp, params, horizon).weight.labels
    have = len(weight.labels) - 1 if weight.labels else -1
    raise HorizonError(
        f"labels required to horizon {horizon}, but only {have} are available"
    )


@dataclass(frozen=True)
class DeltaSeries:
    """Normalized generating-series coefficients c_k = k! [z^k] Delta."""

    coeffs: Coeffs

    @property
    def horizon(self) -> int:
        return len(self.coeffs) - 1


def delta_from_labels(weight: Weight, params: BlockParams, horizon: int) -> DeltaSeries:
    """c_k = (2q + (1-p^2) k) Lambda_k for k = 0..horizon, exactly."""
    labels = weight_labels(weight, params, horizon)
    p, q = Fraction(params.p), Fraction(params.q)
    return DeltaSeries(
        tuple((2 * q + (1 - p * p) * k) * labels[k] for k in range(horizon + 1))
    )


@dataclass(frozen=True)
class LabelSynthesis:
    weight: Weight
    singular: tuple[int, ...]


def labels_from_quasipolynomial(
    qp: QuasiPolynomial, params: BlockParams, horizon: int
) -> LabelSynthesis:
    """Invert the series map: Lambda_k = c_k / (2q + (1-p^2)k) off the singular
    indices; there the convention Lambda_k = 0 applies and realizability
    requires c_k = 0."""
    series = qp.series(horizon)
    p, q = Fraction(params.p), Fraction(params.q)
    labels = []
    singular = []
    for k in range(horizon + 1):
        denom = 2 * q + (1 - p * p) * k
        if denom == 0:
            if series[k] != 0:
                raise UnrealizableError(
                    f"series coefficient must vanish at singular index k={k}, "
                    f"got {series[k]}"
                )
            singular.append(k)
            labels.append(Fraction(0))
        else:
            labels.append(series[k] / denom)
    return LabelSynthesis(
        Weight(labels=tuple(labels), qp=qp), tuple(singular)
    )


@dataclass(frozen=True)
class RecurrenceCertificate:
    """Monic annihilator h with sum_j h_j c_{k+j} = 0 verified for all
    0 <= k <= verified_horizon - deg h."""

    annihilator: Coeffs
    verified_horizon: int

    @property
    def degree(self) -> int:
        return len(self.annihilator) - 1

    def __str__(self) -> str:
        return format_poly(self.annihilator)


def _solve_exact(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction] | None:
    """Canonical solution (free variables zero) of an overdetermined exact
    system, or None if inconsistent."""
    width = len(rows[0]) if rows else 0
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        pivot_row = next((r for r in range(rank, len(aug)) if aug[r][col] != 0), None)
        if pivot_row is None:
            continue
        aug[rank], aug[pivot_row] = aug[pivot_row], aug[rank]
        inv = aug[rank][col]
        aug[rank] = [v / inv for v in aug[rank]]
        for r in range(len(aug)):
            if r != rank and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(aug)):
        if aug[r][width] != 0:
            return None
    solution = [Fraction(0)] * width
    for r, col in enumerate(pivots):
        solution[col] = aug[r][width]
    return solution


def detect_linear_recurrence(
    series: DeltaSeries, max_degree: int | None = None
) -> RecurrenceCertificate | None:
    """Minimal-degree monic recurrence satisfied on the whole horizon, if any.

    Degrees 1..floor(horizon/2) are tried in order; the cap keeps every
    candidate overdetermined (strictly more equations than unknowns), so a
    square fit with zero verification redundancy never counts as detection.
    The verdict is horizon-relative by construction.
    """
    coeffs = series.coeffs
    if len(coeffs) < 2:
        raise ValueError("need at least two series coefficients")
    horizon = series.horizon
    limit = horizon // 2
    if max_degree is not None:
        limit = min(limit, max_degree)
    for degree in range(1, limit + 1):
        rows = [
            [coeffs[k + j] for j in range(degree)]
            for k in range(horizon - degree + 1)
        ]
        rhs = [-coeffs[k + degree] for k in range(horizon - degree + 1)]
        solution = _solve_exact(rows, rhs)
        if solution is not None:
            return RecurrenceCertificate(
                tuple(solution) + (Fraction(1),), horizon
            )
    return None


@dataclass(frozen=True)
class SingularCandidate:
    """Coefficients x_0..x_D of a degree -1 singular-vector candidate
    a = sum_i x_i L[-1,i]; all parabolic degree-zero conditions vanish for
    j = 0..verified_horizon."""

    coefficients: Coeffs
    verified_horizon: int

    def polynomial(self) -> Coeffs:
        """The candidate read as the polynomial sum_i x_i t^i."""
        return _poly_strip(self.coefficients)


def _kernel_basis(rows: list[list[Fraction]], width: int) -> list[Coeffs]:
    """Exact reduced-echelon kernel basis; each vector has entry 1 at its own
    free column and 0 at later free columns (so the last nonzero entry is 1)."""
    aug = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        pivot_row = next((r for r in range(rank, len(aug)) if aug[r][col] != 0), None)
        if pivot_row is None:
            continue
        aug[rank], aug[pivot_row] = aug[pivot_row], aug[rank]
        inv = aug[rank][col]
        aug[rank] = [v / inv for v in aug[rank]]
        for r in range(len(aug)):
            if r != rank and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in range(width):
        if free in pivots:
            continue
        vec = [Fraction(0)] * width
        vec[free] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][free]
        basis.append(tuple(vec))
    return basis


def singular_vector_solve(
    weight: Weight, params: BlockParams, max_level: int, horizon: int
) -> list[SingularCandidate]:
    """Exact kernel of M[j,i] = (2q + i + j + p(i-j)) Lambda_{i+j},
    j = 0..horizon, i = 0..max_level.

    The rows are the weight applied to the parabolic degree-zero images of
    the candidate, so kernel vectors are exactly the degree -1 elements the
    weight kills."""
    labels = weight_labels(weight, params, max_level + horizon)
    p, q = Fraction(params.p), Fraction(params.q)
    rows = [
        [
            (2 * q + i + j + p * (i - j)) * labels[i + j]
            for i in range(max_level + 1)
        ]
        for j in range(horizon + 1)
    ]
    return [
        SingularCandidate(vec, horizon)
        for vec in _kernel_basis(rows, max_level + 1)
    ]


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str  # "quasifinite" | "not_quasifinite_up_to_horizon"
    horizon: int
    certificate: RecurrenceCertificate | None
    annihilator: Coeffs | None  # generator mode only
    certificate_matches_annihilator: bool | None

    @property
    def quasifinite(self) -> bool:
        return self.verdict == "quasifinite"


def classify_quasifinite(
    weight: Weight, params: BlockParams, horizon: int
) -> ClassificationReport:
    """Quasifinite iff the normalized series admits a linear recurrence on the
    horizon; in generator mode the certificate is checked against the
    generator's closed-form annihilator."""
    series = delta_from_labels(weight, params, horizon)
    certificate = detect_linear_recurrence(series)
    annihilator = None
    matches = None
    if weight.qp is not None and not weight.qp.is_zero():
        annihilator = qp_annihilator(weight.qp)
        if certificate is not None:
            matches = certificate.annihilator == annihilator
    return ClassificationReport(
        "quasifinite" if certificate is not None else "not_quasifinite_up_to_horizon",
        horizon,
        certificate,
        annihilator,
        matches,
    )


@dataclass(frozen=True)
class CrossCheckReport:
    """Both criteria side by side; `annihilator_vs_kernel` compares the monic
    recurrence with each kernel candidate's polynomial."""

    delta_route: bool
    kernel_route: bool
    annihilator_vs_kernel: str  # "equal" | "different" | "not_applicable"
    certificate: RecurrenceCertificate | None
    candidates: tuple[SingularCandidate, ...]
    max_level: int
    horizon: int

    @property
    def routes_agree(self) -> bool:
        return self.delta_route == self.kernel_route


def criteria_cross_check(
    weight: Weight, params: BlockParams, max_level: int, horizon: int
) -> CrossCheckReport:
    """Run the recurrence criterion (degree <= max_level, series horizon
    max_level + horizon) and the singular-vector solve, and compare."""
    series = delta_from_labels(weight, params, max_level + horizon)
    certificate = detect_linear_recurrence(series, max_degree=max_level)
    candidates = singular_vector_solve(weight, params, max_level, horizon)
    if certificate is None or not candidates:
        comparison = "not_applicable"
    else:
        comparison = (
            "equal"
            if any(c.polynomial() == certificate.annihilator for c in candidates)
            else "different"
        )
    return CrossCheckReport(
        certificate is not None,
        bool(candidates),
        comparison,
        certificate,
        tuple(candidates),
        max_level,
        horizon,
    )
