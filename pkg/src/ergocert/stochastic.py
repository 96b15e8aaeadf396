"""Validated row-stochastic matrices and the disagreement semi-norm calculus.

The semi-norm of a vector is its distance to the constant vectors in the
sup norm, which works out to half its spread. The induced matrix semi-norm
has the closed form of the coefficient of ergodicity: half the largest L1
distance between two rows. Matrices are immutable after validation.
"""

from __future__ import annotations

import numpy as np

from .digraph import Digraph
from .errors import DimensionError, NegativityError, StochasticityError

ROW_SUM_TOL = 1e-9
NEGATIVITY_TOL = 1e-12


class StochasticMatrix:
    """Dense n x n matrix with nonnegative entries and unit row sums.

    Construction validates the input: entries in [-tol_neg, 0) are clamped
    to zero, anything more negative is rejected, each row sum must lie
    within tol_row of 1, and rows are then renormalized to sum to exactly 1
    up to machine rounding. The entry array is read-only afterwards.
    """

    __slots__ = ("_entries",)

    def __init__(self, raw, *, tol_row: float = ROW_SUM_TOL, tol_neg: float = NEGATIVITY_TOL) -> None:
        arr = np.array(raw, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise DimensionError("dimension must be at least 1")
        if not np.all(np.isfinite(arr)):
            raise StochasticityError("all entries must be finite")
        if np.any(arr < -tol_neg):
            i, j = np.argwhere(arr < -tol_neg)[0]
            raise NegativityError(
                f"entry ({i + 1},{j + 1}) = {arr[i, j]} is below the negativity tolerance {-tol_neg}"
            )
        arr[arr < 0] = 0.0
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > tol_row
        if np.any(bad):
            r = int(np.flatnonzero(bad)[0])
            raise StochasticityError(f"row {r + 1} sums to {sums[r]!r}, not 1 within {tol_row}")
        arr /= sums[:, None]
        arr.setflags(write=False)
        self._entries = arr

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """The validated entries, as a read-only array."""
        return self._entries

    def __repr__(self) -> str:
        return f"StochasticMatrix(n={self.n})"


def validate_stochastic(raw, tol_row: float = ROW_SUM_TOL, tol_neg: float = NEGATIVITY_TOL) -> StochasticMatrix:
    """Validate a raw square array as a stochastic matrix."""
    return StochasticMatrix(raw, tol_row=tol_row, tol_neg=tol_neg)


def identity_matrix(n: int) -> StochasticMatrix:
    return StochasticMatrix(np.eye(n))


def multiply(a: StochasticMatrix, b: StochasticMatrix) -> StochasticMatrix:
    """Matrix product a.b, revalidated (row sums of products drift only by rounding)."""
    if a.n != b.n:
        raise DimensionError(f"dimensions differ: {a.n} vs {b.n}")
    return StochasticMatrix(a.entries @ b.entries)


def apply(a: StochasticMatrix, x) -> np.ndarray:
    """The image a.x; averaging never expands the sup norm or the semi-norm."""
    vec = np.asarray(x, dtype=float)
    if vec.ndim != 1 or vec.size != a.n:
        raise DimensionError(f"vector of length {vec.size} does not match dimension {a.n}")
    return a.entries @ vec


def digraph_of(a: StochasticMatrix, tol_pos: float = 0.0) -> Digraph:
    """Positivity pattern of the matrix: edge (i, j) iff entry (i, j) > tol_pos."""
    return Digraph.from_adjacency(a.entries > tol_pos)


def min_positive_entry(matrices, tol_pos: float = 0.0) -> float | None:
    """Smallest entry above tol_pos across all matrices; None if there is none."""
    mats = list(matrices)
    if not mats:
        raise DimensionError("at least one matrix required")
    smallest = None
    for m in mats:
        positive = m.entries[m.entries > tol_pos]
        if positive.size:
            local = float(positive.min())
            smallest = local if smallest is None else min(smallest, local)
    return smallest


def vector_seminorm(x) -> float:
    """Distance of x to the constant vectors in sup norm: (max - min) / 2.

    The optimal constant shift is the midrange, which makes the closed form
    equal the defining infimum.
    """
    vec = np.asarray(x, dtype=float)
    if vec.ndim != 1 or vec.size < 1:
        raise DimensionError("expected a nonempty vector")
    return float(vec.max() - vec.min()) / 2.0


def matrix_seminorm(a: StochasticMatrix) -> float:
    """Coefficient of ergodicity: half the maximum L1 distance between rows.

    Equals the operator semi-norm induced by vector_seminorm; the supremum
    over vectors is attained on 0/1 vectors, which is what the brute-force
    test oracle enumerates.
    """
    e = a.entries
    pairwise = np.abs(e[:, None, :] - e[None, :, :]).sum(axis=2)
    # the exact value is at most 1 for stochastic rows; rounding in the
    # absolute-difference sums can overshoot by a few ulp
    return min(float(pairwise.max()) / 2.0, 1.0)
