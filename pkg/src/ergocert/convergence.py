"""Backward partial products, column support tracking, and contraction
certificates with a geometric envelope.

Products accumulate new factors on the left. With nonnegative entries there
is no cancellation, so no windowed re-association is needed for stability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .digraph import wielandt_bound
from .errors import CertificationRefused, ContractViolation, DimensionError
from .hypotheses import HypothesisReport, MatrixSequence, analyze
from .stochastic import (
    StochasticMatrix,
    identity_matrix,
    matrix_seminorm,
    multiply,
    vector_seminorm,
)

# Slack for exact inequalities; a looser one for length-compounded ones.
EXACT_SLACK = 1e-12
COMPOUND_SLACK = 1e-9


@dataclass(frozen=True)
class ProductState:
    """Running product P(k) = A(k)...A(1) with its cached semi-norm; P(0) = I."""

    k: int
    matrix: StochasticMatrix
    seminorm: float


@dataclass(frozen=True)
class SupportProfile:
    """Per-column supports and support minima of a product matrix.

    ``support(j)`` is the set of rows with a positive entry in column j;
    ``minimum(j)`` is the smallest such entry (None for an empty support,
    which cannot happen for products started from the identity).
    """

    supports: tuple[frozenset[int], ...]
    minima: tuple[float | None, ...]

    def support(self, j: int) -> frozenset[int]:
        return self.supports[j - 1]

    def minimum(self, j: int) -> float | None:
        return self.minima[j - 1]


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Machine-checkable contraction certificate.

    Every saturation_index steps, the product semi-norm shrinks by at least
    the contraction factor 1 - n * entry_floor, giving the geometric
    envelope below. The stored ``contraction`` float rounds to 1.0 once the
    floor drops under machine epsilon, so the envelope is evaluated in log
    space from the exact complement n * entry_floor.
    """

    n: int
    alpha: float
    wielandt: int
    saturation_index: int
    entry_floor: float
    contraction: float
    seminorm_at_saturation: float

    def envelope(self, k: int) -> float:
        """Certified bound contraction ** (k // saturation_index) at step k."""
        blocks = k // self.saturation_index
        return math.exp(blocks * math.log1p(-self.n * self.entry_floor))


@dataclass(frozen=True)
class ColumnOnsets:
    """First-support diagnostics for one column.

    ``first_support[i-1]`` is the least k with row i in the column support
    of P(k), or None if it never joins within the prefix. ``floor_margins``
    checks the support minimum at the m-th onset (onsets sorted ascending)
    against alpha ** ((m-1) * (wielandt + 1)).
    """

    column: int
    first_support: tuple[int | None, ...]
    onsets: tuple[int, ...]
    floor_margins: tuple[float, ...]

    @property
    def floor_satisfied(self) -> bool:
        return all(margin >= -EXACT_SLACK for margin in self.floor_margins)


@dataclass(frozen=True)
class ToleranceRun:
    """Result of iterating products down to a disagreement tolerance."""

    k: int
    state: ProductState
    consensus_row: np.ndarray | None

    @property
    def reached(self) -> bool:
        return self.consensus_row is not None


def iter_products(seq: MatrixSequence) -> Iterator[ProductState]:
    """ProductState for k = 0..L, starting from the identity."""
    current = identity_matrix(seq.n)
    yield ProductState(0, current, matrix_seminorm(current))
    for k, factor in enumerate(seq, start=1):
        current = multiply(factor, current)
        yield ProductState(k, current, matrix_seminorm(current))


def partial_product(seq: MatrixSequence, l: int, k: int) -> StochasticMatrix:
    """The product A(k)...A(l+1); the identity when l == k."""
    if not 0 <= l <= k <= len(seq):
        raise ContractViolation(f"need 0 <= l <= k <= {len(seq)}, got l={l}, k={k}")
    product = identity_matrix(seq.n)
    for m in range(l + 1, k + 1):
        product = multiply(seq.factor(m), product)
    return product


def support_profile(p: StochasticMatrix, tol_pos: float = 0.0) -> SupportProfile:
    """Column supports and support minima of p under the positivity threshold."""
    entries = p.entries
    supports = []
    minima: list[float | None] = []
    for j in range(p.n):
        rows = np.flatnonzero(entries[:, j] > tol_pos)
        supports.append(frozenset(int(i) + 1 for i in rows))
        minima.append(float(entries[rows, j].min()) if rows.size else None)
    return SupportProfile(tuple(supports), tuple(minima))


def saturation_floor(n: int, alpha: float) -> float:
    """alpha ** (n * (wielandt_bound(n) + 1)), the certified entry floor."""
    return alpha ** (n * (wielandt_bound(n) + 1))


def find_saturation_K(seq: MatrixSequence, alpha: float, tol_pos: float = 0.0) -> int | None:
    """Least K in 1..L with every entry of P(K) positive and at the
    saturation floor alpha ** (n * (wielandt + 1)) or above (slack 1e-12).

    alpha must be the realized minimum positive entry or a positive lower
    bound for it. None means the prefix never saturates. Entries must be
    strictly positive as well; otherwise a floor below the slack would let
    zero entries through.
    """
    if alpha <= 0:
        raise ContractViolation("alpha must be positive")
    threshold = saturation_floor(seq.n, alpha) - EXACT_SLACK
    for state in iter_products(seq):
        smallest = state.matrix.entries.min()
        if state.k >= 1 and smallest > tol_pos and smallest >= threshold:
            return state.k
    return None


def contraction_certificate(
    seq: MatrixSequence,
    *,
    alpha: float | None = None,
    tol_pos: float = 0.0,
    report: HypothesisReport | None = None,
) -> ConvergenceCertificate | None:
    """Certify a uniform contraction for the sequence, or refuse.

    Structural condition failures (lower-boundedness, complete reducibility,
    core existence) raise CertificationRefused; eventual positivity that
    merely ran out of prefix is not refuted, so the search proceeds and the
    function returns None when no saturation index exists within the prefix.
    A measured semi-norm check guards the emitted certificate.
    """
    if report is None:
        report = analyze(seq, tol_pos=tol_pos)
    structural = tuple(v for v in report.violations if not v.startswith("eventual-positivity"))
    if structural:
        raise CertificationRefused(structural)
    bound = report.alpha if alpha is None else float(alpha)
    if bound is None or bound <= 0:
        raise ContractViolation("alpha must be positive")
    saturation = find_saturation_K(seq, bound, tol_pos)
    if saturation is None:
        return None
    floor = saturation_floor(seq.n, bound)
    contraction = 1.0 - seq.n * floor
    measured = matrix_seminorm(partial_product(seq, 0, saturation))
    if measured > contraction + EXACT_SLACK:
        raise RuntimeError(
            f"internal error: measured semi-norm {measured} exceeds certified contraction {contraction}"
        )
    return ConvergenceCertificate(
        n=seq.n,
        alpha=bound,
        wielandt=wielandt_bound(seq.n),
        saturation_index=saturation,
        entry_floor=floor,
        contraction=contraction,
        seminorm_at_saturation=measured,
    )


def consensus_row(p: StochasticMatrix) -> np.ndarray:
    """Column-wise midrange: the center of the tightest sup-norm ball holding all rows."""
    entries = p.entries
    return (entries.max(axis=0) + entries.min(axis=0)) / 2.0


def run_to_tolerance(seq: MatrixSequence, epsilon: float) -> ToleranceRun:
    """Iterate P(k) until its semi-norm is at most epsilon or the prefix ends.

    On success the consensus row estimate is within epsilon of every row of
    P(k*) in sup distance; on exhaustion the consensus row is None and the
    final state is returned.
    """
    if epsilon <= 0:
        raise ContractViolation("epsilon must be positive")
    last = None
    for state in iter_products(seq):
        last = state
        if state.seminorm <= epsilon:
            return ToleranceRun(state.k, state, consensus_row(state.matrix))
    assert last is not None
    return ToleranceRun(last.k, last, None)


def disagreement_trajectory(seq: MatrixSequence, x0) -> list[float]:
    """vector_seminorm(P(k).x0) for k = 0..L, iterated as x(k) = A(k).x(k-1)."""
    vec = np.asarray(x0, dtype=float)
    if vec.ndim != 1 or vec.size != seq.n:
        raise DimensionError(f"vector of length {vec.size} does not match dimension {seq.n}")
    values = [vector_seminorm(vec)]
    for factor in seq:
        vec = factor.entries @ vec
        values.append(vector_seminorm(vec))
    return values


def support_onsets(seq: MatrixSequence, alpha: float, tol_pos: float = 0.0) -> tuple[ColumnOnsets, ...]:
    """Per-column first-support indices with the induction floor check.

    Tracks, for every column j, the first k at which each row enters the
    support of P(k), then verifies that the support minimum at the m-th
    onset is at least alpha ** ((m-1) * (wielandt + 1)). This is the
    inductive mechanism behind the saturation guarantee, exposed as a
    diagnostic; the certificate itself locates the saturation index by
    direct scan.
    """
    if alpha <= 0:
        raise ContractViolation("alpha must be positive")
    n = seq.n
    step = wielandt_bound(n) + 1
    first: list[list[int | None]] = [[None] * n for _ in range(n)]  # [column][row]
    minima_history: list[tuple[float | None, ...]] = []
    for state in iter_products(seq):
        profile = support_profile(state.matrix, tol_pos)
        minima_history.append(profile.minima)
        for j in range(1, n + 1):
            for i in profile.support(j):
                if first[j - 1][i - 1] is None:
                    first[j - 1][i - 1] = state.k

    out = []
    for j in range(1, n + 1):
        per_row = tuple(first[j - 1])
        onsets = tuple(sorted(k for k in per_row if k is not None))
        margins = []
        for m, k_m in enumerate(onsets, start=1):
            mu = minima_history[k_m][j - 1]
            assert mu is not None
            margins.append(mu - alpha ** ((m - 1) * step))
        out.append(ColumnOnsets(j, per_row, onsets, tuple(margins)))
    return tuple(out)
