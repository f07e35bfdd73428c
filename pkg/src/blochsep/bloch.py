"""Correlation tensors of the Bloch expansion and their norm bookkeeping.

For a party subset S = (j_1 < ... < j_k) the tensor entry at multi-index
(i_1, ..., i_k) is Tr(rho * O) where O places generator i_m on party j_m and
the identity elsewhere.  Entries are computed on the reduced state over S,
which is mathematically identical and much cheaper than the full-space trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from string import ascii_letters

import numpy as np

from .errors import DomainError, ResourceError
from .generators import build_generators
from .states import DimsProfile, MultiState, partial_trace

IMAG_TOL = 1e-10
SUBSET_CAP = 6


@lru_cache(maxsize=None)
def _gen_stack(d: int) -> np.ndarray:
    # generator construction is deterministic, so sharing one stack per d is safe
    return build_generators(d).matrices


@dataclass(frozen=True)
class CorrelationTensor:
    """Real tensor T^(S) with its cached squared Frobenius norm.

    ``subset`` holds 0-based party indices; ``entries`` is a read-only float
    array of shape (d_{j1}^2 - 1, ..., d_{jk}^2 - 1) in row-major order.
    """

    subset: tuple[int, ...]
    entries: np.ndarray
    norm_sq: float

    @property
    def shape(self) -> tuple[int, ...]:
        return self.entries.shape

    def validate(self, rel_tol: float = 1e-12) -> None:
        fresh = float(np.sum(np.square(self.entries)))
        if abs(fresh - self.norm_sq) > rel_tol * max(1.0, abs(fresh)):
            raise DomainError("cached norm_sq disagrees with recomputed sum of squares")


@dataclass(frozen=True)
class PurityExpansion:
    """Per-cardinality norm aggregates x_1..x_n of the purity identity.

    x_k collects (prod_{i not in S} 1/d_i) * ||T^(S)||^2 over all |S| = k; the
    constant term is 1/(d_1...d_n).  ``total()`` evaluates
    constant + sum_k x_k / 2^k, which equals Tr(rho^2).
    """

    constant: float
    aggregates: tuple[float, ...]

    def total(self) -> float:
        return self.constant + sum(x / 2.0 ** k for k, x in enumerate(self.aggregates, start=1))


def _normalize_subset(subset, n: int) -> tuple[int, ...]:
    subset = tuple(sorted(set(int(i) for i in subset)))
    if not subset:
        raise DomainError("subset must name at least one party")
    if subset[0] < 0 or subset[-1] >= n:
        raise DomainError(f"party indices out of range for {n} parties: {subset}")
    return subset


def correlation_tensor(state: MultiState, subset) -> CorrelationTensor:
    """Correlation tensor T^(S) of ``state`` for party subset S (0-based)."""
    subset = _normalize_subset(subset, state.n_parties)
    reduced = partial_trace(state, subset)
    dims = reduced.dims
    k = len(dims)

    rows = ascii_letters[:k]
    cols = ascii_letters[k:2 * k]
    outs = ascii_letters[2 * k:3 * k]
    subs = [rows + cols]
    operands = [reduced.matrix.reshape(dims + dims)]
    for m in range(k):
        subs.append(outs[m] + cols[m] + rows[m])
        operands.append(_gen_stack(dims[m]))
    expr = ",".join(subs) + "->" + outs
    raw = np.einsum(expr, *operands, optimize=True)

    residue = float(np.abs(raw.imag).max()) if raw.size else 0.0
    if residue > IMAG_TOL:
        raise DomainError(
            f"correlation tensor has imaginary residue {residue:.3e}; input is not Hermitian enough"
        )
    entries = np.ascontiguousarray(raw.real)
    entries.setflags(write=False)
    norm_sq = float(np.sum(np.square(entries)))
    return CorrelationTensor(subset=subset, entries=entries, norm_sq=norm_sq)


def all_tensors(state: MultiState, *, cap: int = SUBSET_CAP) -> dict[tuple[int, ...], CorrelationTensor]:
    """One tensor per nonempty party subset, keyed by the sorted subset."""
    n = state.n_parties
    if n > cap:
        raise ResourceError(
            f"all_tensors enumerates 2^n - 1 subsets; n={n} exceeds the cap of {cap}"
        )
    out: dict[tuple[int, ...], CorrelationTensor] = {}
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            out[subset] = correlation_tensor(state, subset)
    return out


def _require_complete(tensors, n: int) -> None:
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            if subset not in tensors:
                raise DomainError(f"tensor map is missing subset {subset}")


def purity_expansion(tensors: dict, profile: DimsProfile) -> PurityExpansion:
    """Aggregate tensor norms into the purity identity's x_1..x_n."""
    n = profile.n_parties
    _require_complete(tensors, n)
    dims = profile.dims
    aggregates = [0.0] * n
    for subset, t in tensors.items():
        weight = 1.0
        for i in range(n):
            if i not in subset:
                weight /= dims[i]
        aggregates[len(subset) - 1] += weight * t.norm_sq
    return PurityExpansion(constant=1.0 / profile.total, aggregates=tuple(aggregates))


def reconstruct(tensors: dict, profile: DimsProfile, *, atol: float = 1e-8) -> MultiState:
    """Rebuild the density matrix from a complete tensor map.

    rho = I/D + sum_S 2^{-|S|} (prod_{i not in S} 1/d_i)
              * sum_idx t_idx * (generators on S, identities elsewhere).
    """
    n = profile.n_parties
    _require_complete(tensors, n)
    dims = profile.dims
    D = profile.total

    a = ascii_letters[:n]
    b = ascii_letters[n:2 * n]
    i = ascii_letters[2 * n:3 * n]
    out_subs = a + b

    total = np.zeros(dims + dims, dtype=np.complex128)
    for subset, t in tensors.items():
        coef = 0.5 ** len(subset)
        subs = ["".join(i[j] for j in subset)]
        operands: list[np.ndarray] = [t.entries]
        for j in range(n):
            if j in subset:
                subs.append(i[j] + a[j] + b[j])
                operands.append(_gen_stack(dims[j]))
            else:
                coef /= dims[j]
                subs.append(a[j] + b[j])
                operands.append(np.eye(dims[j]))
        expr = ",".join(subs) + "->" + out_subs
        total += coef * np.einsum(expr, *operands, optimize=True)

    matrix = total.reshape(D, D) + np.eye(D) / D
    return MultiState(profile, matrix, atol=atol)
