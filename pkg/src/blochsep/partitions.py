"""Partition shapes of n parties and concrete party-to-block assignments.

A shape is a multiset of block sizes written ascending, e.g. (1, 2, 2); an
assignment is a set partition of the parties whose block sizes realize the
shape.  Shapes with a single block are allowed only as the "no split"
baseline and never enter separability verdicts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import factorial, prod

from .errors import DomainError
from .states import DimsProfile


@dataclass(frozen=True)
class PartitionShape:
    """Sorted block sizes (k_1 <= ... <= k_m) summing to n."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted(int(k) for k in self.parts))
        object.__setattr__(self, "parts", parts)
        if not parts or any(k < 1 for k in parts):
            raise DomainError(f"block sizes must be positive, got {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def m(self) -> int:
        return len(self.parts)

    @property
    def is_baseline(self) -> bool:
        """True for the unsplit shape (n), which carries no verdict."""
        return self.m == 1

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def render(self) -> str:
        return "(" + ",".join(str(k) for k in self.parts) + ")"


@dataclass(frozen=True)
class Partition:
    """Concrete disjoint blocks (0-based party indices) covering 0..n-1.

    Blocks are stored sorted by (size, smallest member); ``block_dims`` holds
    each block's local dimensions, sorted ascending.
    """

    blocks: tuple[tuple[int, ...], ...]
    shape: PartitionShape
    block_dims: tuple[tuple[int, ...], ...]

    def render(self, *, labels=None) -> str:
        """E.g. "{1}{2,3}{4,5}" with 1-based party labels.

        ``labels`` optionally maps internal indices to external 1-based ones.
        """
        ext = [tuple(sorted((labels[i] if labels else i + 1) for i in block)) for block in self.blocks]
        ext.sort(key=lambda b: (len(b), b))
        return "".join("{" + ",".join(str(i) for i in b) + "}" for b in ext)


def partition_from_blocks(blocks, profile: DimsProfile) -> Partition:
    """Canonical Partition from raw blocks; validates cover and disjointness."""
    blocks = tuple(sorted((tuple(sorted(int(i) for i in b)) for b in blocks), key=lambda b: (len(b), b)))
    seen = [i for b in blocks for i in b]
    if sorted(seen) != list(range(profile.n_parties)):
        raise DomainError(f"blocks must partition 0..{profile.n_parties - 1}, got {blocks}")
    shape = PartitionShape(tuple(len(b) for b in blocks))
    dims = tuple(tuple(sorted(profile.dims[i] for i in b)) for b in blocks)
    return Partition(blocks=blocks, shape=shape, block_dims=dims)


def enumerate_shapes(n: int, *, include_baseline: bool = False) -> list[PartitionShape]:
    """All shapes with at least two blocks, ordered by m descending then
    lexicographically; the baseline (n) is appended on request."""
    if n < 2:
        raise DomainError("shape enumeration needs at least two parties")

    def parts_ascending(total, minimum):
        if total == 0:
            yield ()
            return
        for first in range(minimum, total + 1):
            for rest in parts_ascending(total - first, first):
                yield (first,) + rest

    shapes = [PartitionShape(p) for p in parts_ascending(n, 1) if len(p) >= 2]
    shapes.sort(key=lambda s: (-s.m, s.parts))
    if include_baseline:
        shapes.append(PartitionShape((n,)))
    return shapes


def enumerate_assignments(shape: PartitionShape, profile: DimsProfile) -> list[Partition]:
    """All set partitions of the parties realizing ``shape``.

    Same-size blocks are deduplicated by anchoring each block at the smallest
    remaining party, so permuting equal-size blocks never double-counts.
    """
    n = profile.n_parties
    if shape.n != n:
        raise DomainError(f"shape {shape.render()} does not sum to {n} parties")

    results: list[Partition] = []

    def grow(remaining: tuple[int, ...], sizes: tuple[int, ...], acc):
        if not remaining:
            results.append(partition_from_blocks(acc, profile))
            return
        anchor, rest = remaining[0], remaining[1:]
        for size in sorted(set(sizes)):
            left = list(sizes)
            left.remove(size)
            for tail in combinations(rest, size - 1):
                block = (anchor,) + tail
                still = tuple(i for i in rest if i not in tail)
                grow(still, tuple(left), acc + [block])

    grow(tuple(range(n)), shape.parts, [])
    results.sort(key=lambda p: p.blocks)
    return results


def assignment_count(shape: PartitionShape) -> int:
    """n! / (prod k_s! * prod (multiplicity of each size)!)."""
    n = shape.n
    denom = prod(factorial(k) for k in shape.parts)
    denom *= prod(factorial(c) for c in shape.multiplicities.values())
    return factorial(n) // denom


def check_block_constraints(partition: Partition) -> list[tuple[tuple[int, ...], bool]]:
    """Per block: does the largest dimension stay within the product of the
    rest?  Blocks of size 1 and 2 always pass."""
    report = []
    for block, dims in zip(partition.blocks, partition.block_dims):
        if len(dims) <= 2:
            ok = True
        else:
            ok = dims[-1] <= prod(dims[:-1])
        report.append((block, ok))
    return report
