"""Closed-form upper bounds on squared correlation-tensor norms.

Three block rules, by block size t:

* t = 1:  2 (d - 1) / d
* t = 2:  4 (m^2 - 1) / m^2 with m the smaller dimension
* t >= 3: the heterogeneous-dimension bound, valid when the largest dimension
  does not exceed the product of the others.

Their product over the blocks of a partition bounds the full-system norm of
any state separable across that partition; the t >= 3 rule applied to the
whole system is the unconditional bound for arbitrary states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError
from .states import MultiState, purity

PURITY_TOL = 1e-9


@dataclass(frozen=True)
class BlockFactor:
    """One evaluated block bound: which rule fired and its value."""

    block_dims: tuple[int, ...]
    rule: str  # "single" | "pair" | "multi"
    value: float


def single_factor(d: int) -> float:
    """Bound 2(d-1)/d on ||T^(j)||^2 for one party of dimension d."""
    if d < 2:
        raise DomainError("local dimension must be at least 2")
    return 2.0 * (d - 1) / d


def pair_factor(d_j: int, d_k: int) -> float:
    """Bound 4(m^2-1)/m^2 on ||T^(jk)||^2, m the smaller dimension."""
    if d_j < 2 or d_k < 2:
        raise DomainError("local dimensions must be at least 2")
    m = min(d_j, d_k)
    return 4.0 * (m * m - 1) / (m * m)


def multi_factor(block_dims) -> float:
    """Heterogeneous bound on ||T^(block)||^2 for a block of size t >= 3.

    2^t * (1 - [sum of (t-1)-fold products - sum of dims + (t-2) e_t]
                / ((t-2) e_1...e_{t-1} e_t^2))

    Requires dims sorted ascending with e_t <= e_1 * ... * e_{t-1}.
    """
    dims = tuple(int(d) for d in block_dims)
    t = len(dims)
    if t < 3:
        raise DomainError("the t >= 3 bound needs at least three parties; use single/pair factors")
    if any(d < 2 for d in dims):
        raise DomainError("local dimensions must be at least 2")
    if any(a > b for a, b in zip(dims, dims[1:])):
        raise DomainError(f"block dimensions must be sorted ascending, got {dims}")
    rest = math.prod(dims[:-1])
    if dims[-1] > rest:
        raise DomainError(
            f"dimension constraint violated: {dims[-1]} > product of the others {rest}"
        )
    prod_sums = sum(math.prod(c) for c in combinations(dims, t - 1))
    numerator = prod_sums - sum(dims) + (t - 2) * dims[-1]
    denominator = (t - 2) * rest * dims[-1] ** 2
    return (2.0 ** t) * (1.0 - numerator / denominator)


def equal_dims_bound(n: int, d: int) -> float:
    """Equal-dimension specialization 2^n [(n-2)d^n - n d^(n-2) + 2] / ((n-2)d^n)."""
    if n < 3:
        raise DomainError("the equal-dimension bound needs n >= 3")
    if d < 2:
        raise DomainError("local dimension must be at least 2")
    return (2.0 ** n) * ((n - 2) * d ** n - n * d ** (n - 2) + 2) / ((n - 2) * d ** n)


def block_factor(block_dims) -> BlockFactor:
    """Dispatch on block size: single, pair, or the t >= 3 rule."""
    dims = tuple(sorted(int(d) for d in block_dims))
    if len(dims) == 1:
        return BlockFactor(dims, "single", single_factor(dims[0]))
    if len(dims) == 2:
        return BlockFactor(dims, "pair", pair_factor(*dims))
    return BlockFactor(dims, "multi", multi_factor(dims))


def entanglement_measure(state: MultiState, *, full_norm_sq: float | None = None) -> float:
    """Tensor-norm entanglement measure for an n-qudit pure state.

    (d/2)^(n/2) ||T^(1..n)|| - (d(d-1)/2)^(n/2).  ``full_norm_sq`` may pass a
    precomputed full-subset squared norm to avoid recomputation.
    """
    dims = state.dims
    d = dims[0]
    n = len(dims)
    if any(x != d for x in dims):
        raise DomainError("E_T is defined for n-qudit pure states (equal local dimensions)")
    if abs(purity(state) - 1.0) > PURITY_TOL:
        raise DomainError("E_T is defined for pure states; input has purity < 1")
    if full_norm_sq is None:
        from .bloch import correlation_tensor

        full_norm_sq = correlation_tensor(state, range(n)).norm_sq
    norm = math.sqrt(full_norm_sq)
    return (d / 2.0) ** (n / 2.0) * norm - (d * (d - 1) / 2.0) ** (n / 2.0)


def entanglement_measure_bound(n: int, d: int) -> float:
    """Upper bound on the measure: (d/2)^(n/2) [sqrt(d^n - n/(n-2) d^(n-2) + 2/(n-2)) - (d-1)^(n/2)]."""
    if n < 3:
        raise DomainError("the measure bound needs n >= 3")
    if d < 2:
        raise DomainError("local dimension must be at least 2")
    radicand = d ** n - (n / (n - 2)) * d ** (n - 2) + 2.0 / (n - 2)
    return (d / 2.0) ** (n / 2.0) * (math.sqrt(radicand) - (d - 1.0) ** (n / 2.0))
