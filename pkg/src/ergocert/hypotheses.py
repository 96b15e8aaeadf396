"""Checks for the four convergence conditions on a finite matrix sequence.

The conditions: (1) positive entries bounded below by some alpha > 0,
(2) eventual positivity of accumulated products from each checked start,
(3) every factor completely reducible, and (4) a common sink-free aperiodic
spanning subgraph (the core) inside every factor's positivity pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .digraph import (
    Digraph,
    intersection,
    strongly_connected_components,
    _component_period,
)
from .errors import ContractViolation, DimensionError
from .stochastic import StochasticMatrix, digraph_of, min_positive_entry


@dataclass(frozen=True)
class MatrixSequence:
    """Ordered factors A(1), ..., A(L) sharing one dimension; indices are 1-based."""

    items: tuple[StochasticMatrix, ...]

    def __init__(self, items: Iterable[StochasticMatrix]) -> None:
        object.__setattr__(self, "items", tuple(items))
        if not self.items:
            raise DimensionError("a sequence needs at least one matrix")
        n = self.items[0].n
        for idx, m in enumerate(self.items, start=1):
            if m.n != n:
                raise DimensionError(f"matrix {idx} has dimension {m.n}, expected {n}")

    @property
    def n(self) -> int:
        return self.items[0].n

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[StochasticMatrix]:
        return iter(self.items)

    def factor(self, k: int) -> StochasticMatrix:
        """A(k), 1-based."""
        if not 1 <= k <= len(self.items):
            raise ContractViolation(f"index k={k} outside 1..{len(self.items)}")
        return self.items[k - 1]


@dataclass(frozen=True)
class CoreSearch:
    """Outcome of the common-pattern core search.

    ``node_periods`` maps every node to the cycle gcd of its strongly
    connected component in the intersection pattern; ``offenders`` are the
    nodes whose component period is not exactly 1.
    """

    intersection: Digraph
    core: Digraph | None
    node_periods: Mapping[int, int]
    offenders: tuple[int, ...]


@dataclass(frozen=True)
class HypothesisReport:
    """Structured result of all four condition checks."""

    alpha: float | None
    reducibility_failures: tuple[int, ...]
    core: Digraph | None
    node_periods: Mapping[int, int]
    core_offenders: tuple[int, ...]
    eventual_positivity: Mapping[int, int | None]
    violations: tuple[str, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "all-conditions-hold" if self.holds else "conditions-violated"


def check_complete_reducibility(seq: MatrixSequence, tol_pos: float = 0.0) -> list[bool]:
    """Per-factor flag: no pattern edge between distinct strongly connected components."""
    flags = []
    for m in seq:
        flags.append(not strongly_connected_components(digraph_of(m, tol_pos)).condensation_edges)
    return flags


def search_aperiodic_core(seq: MatrixSequence, tol_pos: float = 0.0) -> CoreSearch:
    """Search the intersection of all factor patterns for a valid core.

    A sink-free aperiodic spanning subgraph common to all factors exists iff
    every node of the intersection pattern lies in a component whose cycle
    gcd is exactly 1: any common subgraph's cycles sit inside one such
    component, so their lengths are multiples of its period. When the test
    passes, the intersection restricted to intra-component edges is itself
    a valid core (every node of a cycle-carrying component keeps an
    out-edge), and it is the maximal one.
    """
    common = intersection([digraph_of(m, tol_pos) for m in seq])
    partition = strongly_connected_components(common)
    node_periods: dict[int, int] = {}
    for comp in partition.components:
        period = _component_period(common, comp)
        for node in comp:
            node_periods[node] = period
    offenders = tuple(sorted(node for node, p in node_periods.items() if p != 1))
    if offenders:
        return CoreSearch(common, None, node_periods, offenders)
    component_of = partition.component_of
    intra = {(u, v) for (u, v) in common.edges if component_of[u] == component_of[v]}
    return CoreSearch(common, Digraph(common.n, intra), node_periods, ())


def find_aperiodic_core(seq: MatrixSequence, tol_pos: float = 0.0) -> Digraph | None:
    """The maximal common sink-free aperiodic spanning subgraph, or None."""
    return search_aperiodic_core(seq, tol_pos).core


def check_eventual_positivity(seq: MatrixSequence, k: int, tol_pos: float = 0.0) -> int | None:
    """Least K >= k such that sum_{k'=k}^{K} A(k')...A(k) is entrywise positive.

    None if the accumulated sum never fills within the sequence. Once full,
    the sum stays full: the summands are nonnegative.
    """
    if not 1 <= k <= len(seq):
        raise ContractViolation(f"start index k={k} outside 1..{len(seq)}")
    n = seq.n
    running = np.zeros((n, n))
    product = np.eye(n)
    for current in range(k, len(seq) + 1):
        product = seq.factor(current).entries @ product
        running = running + product
        if (running > tol_pos).all():
            return current
    return None


def analyze(
    seq: MatrixSequence,
    positivity_starts: Iterable[int] | None = None,
    tol_pos: float = 0.0,
) -> HypothesisReport:
    """Run all four condition checks and assemble the verdict.

    Condition (1) is reported as the realized lower bound alpha rather than
    pass/fail. Individual failures are report content, not errors.
    """
    starts = sorted(set(positivity_starts)) if positivity_starts is not None else [1]
    for k in starts:
        if not 1 <= k <= len(seq):
            raise ContractViolation(f"positivity start {k} outside 1..{len(seq)}")

    alpha = min_positive_entry(seq.items, tol_pos)
    flags = check_complete_reducibility(seq, tol_pos)
    failures = tuple(k for k, ok in enumerate(flags, start=1) if not ok)
    search = search_aperiodic_core(seq, tol_pos)
    positivity = {k: check_eventual_positivity(seq, k, tol_pos) for k in starts}

    violations: list[str] = []
    if alpha is None:
        violations.append("positive-entries")
    violations.extend(f"eventual-positivity:start={k}" for k in starts if positivity[k] is None)
    violations.extend(f"complete-reducibility:k={k}" for k in failures)
    if search.core is None:
        violations.append("aperiodic-core")

    return HypothesisReport(
        alpha=alpha,
        reducibility_failures=failures,
        core=search.core,
        node_periods=search.node_periods,
        core_offenders=search.offenders,
        eventual_positivity=positivity,
        violations=tuple(violations),
    )
