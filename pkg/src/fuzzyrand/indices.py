"""Agreement and concordance kernels, and the raw pairwise index.

Two agreement-concordance families are implemented:

* NDC: agreement is 1 minus half the l1 distance between membership
  vectors; concordance is 1 minus the absolute agreement difference.
  Reflexive: identical allocations always score 1.
* Brouwer: agreement is the cosine of the membership vectors; concordance
  is ``a1*a2 + (1-a1)*(1-a2)``. Not reflexive on fuzzy rows.

On hard allocations both reduce to the classic pair-counting Rand index:
agreements become exact 0/1 indicators of co-membership and concordance
becomes the indicator that the two allocations answer the co-membership
question the same way.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import ValidationError
from .membership import MembershipMatrix, require_simplex


class IndexKind(Enum):
    """Which agreement/concordance pair to use."""

    NDC = "ndc"
    BROUWER = "brouwer"


def _as_vector(u) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"membership vector must be 1-D, got ndim={arr.ndim}")
    return arr


def agreement_ndc(u, v) -> float:
    """Agreement as 1 - (l1 distance)/2; 1 for identical vectors, 0 for orthogonal."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return float(np.clip(1.0 - 0.5 * np.abs(u - v).sum(), 0.0, 1.0))


def agreement_brouwer(u, v) -> float:
    """Agreement as cosine similarity; in [0, 1] for nonnegative vectors."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("agreement undefined for a zero membership vector")
    return float(np.clip(float(u @ v) / (nu * nv), 0.0, 1.0))


def concordance(a1: float, a2: float, kind: IndexKind) -> float:
    """Concordance of two pair agreements, each in [0, 1].

    NDC: ``1 - |a1 - a2|``. Brouwer: ``a1*a2 + (1-a1)*(1-a2)``. Both reduce
    to the same 0/1 indicator when the agreements are themselves 0/1.
    """
    if not (0.0 <= a1 <= 1.0 and 0.0 <= a2 <= 1.0):
        raise ValidationError(f"agreements must lie in [0, 1], got {a1}, {a2}")
    if kind is IndexKind.NDC:
        return 1.0 - abs(a1 - a2)
    return a1 * a2 + (1.0 - a1) * (1.0 - a2)


def _agreement_block(kind: IndexKind, u, V, u_norm=None, V_norms=None) -> np.ndarray:
    """Agreements between one row ``u`` and a block of rows ``V``."""
    if kind is IndexKind.NDC:
        a = 1.0 - 0.5 * np.abs(V - u).sum(axis=1)
    else:
        a = (V @ u) / (V_norms * u_norm)
    return np.clip(a, 0.0, 1.0, out=a)


def _agreement_rows(kind: IndexKind, U, V) -> np.ndarray:
    """Row-wise agreements between two equally shaped stacks of vectors."""
    if kind is IndexKind.NDC:
        a = 1.0 - 0.5 * np.abs(U - V).sum(axis=1)
    else:
        nu = np.linalg.norm(U, axis=1)
        nv = np.linalg.norm(V, axis=1)
        if (nu == 0.0).any() or (nv == 0.0).any():
            raise ValidationError("agreement undefined for a zero membership vector")
        a = (U * V).sum(axis=1) / (nu * nv)
    return np.clip(a, 0.0, 1.0, out=a)


def _concordance_values(a1: np.ndarray, a2: np.ndarray, kind: IndexKind) -> np.ndarray:
    if kind is IndexKind.NDC:
        return 1.0 - np.abs(a1 - a2)
    return a1 * a2 + (1.0 - a1) * (1.0 - a2)


def _row_norms(kind: IndexKind, m: MembershipMatrix):
    if kind is not IndexKind.BROUWER:
        return None
    norms = np.linalg.norm(m.values, axis=1)
    if (norms == 0.0).any():
        i = int(np.argmax(norms == 0.0))
        raise ValidationError(f"zero membership vector at row {i}")
    return norms


def pair_agreements(m: MembershipMatrix, kind: IndexKind) -> np.ndarray:
    """Agreements for all N(N-1)/2 unordered point pairs, in (i < j) order."""
    require_simplex(m)
    X = m.values
    n = m.n_points
    norms = _row_norms(kind, m)
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        k = n - 1 - i
        if kind is IndexKind.NDC:
            out[pos : pos + k] = _agreement_block(kind, X[i], X[i + 1 :])
        else:
            out[pos : pos + k] = _agreement_block(
                kind, X[i], X[i + 1 :], u_norm=norms[i], V_norms=norms[i + 1 :]
            )
        pos += k
    return out


def raw_index(c1: MembershipMatrix, c2: MembershipMatrix, kind: IndexKind) -> float:
    """Mean concordance over all unordered point pairs.

    For hard inputs this equals the pair-counting Rand index exactly, for
    either kind. The pair loop accumulates per-row partial sums and
    combines them with exact (fsum) summation, so results are independent
    of how the loop is partitioned.
    """
    require_simplex(c1, "first allocation")
    require_simplex(c2, "second allocation")
    n = c1.n_points
    if c2.n_points != n:
        raise ValidationError(
            f"allocations disagree on point count: {n} vs {c2.n_points}"
        )
    if n < 2:
        raise ValidationError("raw index needs at least 2 points")
    X, Y = c1.values, c2.values
    norms1 = _row_norms(kind, c1)
    norms2 = _row_norms(kind, c2)
    partials = []
    for i in range(n - 1):
        if kind is IndexKind.NDC:
            a1 = _agreement_block(kind, X[i], X[i + 1 :])
            a2 = _agreement_block(kind, Y[i], Y[i + 1 :])
        else:
            a1 = _agreement_block(kind, X[i], X[i + 1 :], norms1[i], norms1[i + 1 :])
            a2 = _agreement_block(kind, Y[i], Y[i + 1 :], norms2[i], norms2[i + 1 :])
        partials.append(float(_concordance_values(a1, a2, kind).sum()))
    return math.fsum(partials) / (n * (n - 1) / 2)
