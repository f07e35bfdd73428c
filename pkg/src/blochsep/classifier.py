"""Separability exclusion: compare the full tensor norm against block-product
bounds for every partition shape.

Two bound modes per shape:

* ``contiguous`` — the single assignment that fills blocks with consecutive
  parties over ascending-sorted dimensions (the convention the closed-form
  tables use).
* ``max`` — the maximum of the block-factor product over all assignments
  realizing the shape.  A norm above this value excludes separability under
  ANY assignment of the shape, which is the class-safe verdict when local
  dimensions differ.

A verdict only ever says "certainly not separable this way"; nothing here
claims separability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import correlation_tensor
from .bounds import block_factor, single_factor, multi_factor
from .errors import DomainError
from .partitions import (
    Partition,
    PartitionShape,
    check_block_constraints,
    enumerate_assignments,
    enumerate_shapes,
    partition_from_blocks,
)
from .states import DimsProfile, MultiState, StateFamily, permute_parties
from .surd import as_surd

LINEARITY_RTOL = 1e-9
NOTE_RTOL = 1e-12


@dataclass(frozen=True)
class ShapeRow:
    """Bounds and verdicts for one partition shape."""

    shape: PartitionShape
    bound_contiguous: float | None
    bound_max: float | None
    best_partition: Partition | None
    skipped: tuple[Partition, ...]
    excluded_contiguous: bool | None = None
    excluded_any: bool | None = None


@dataclass(frozen=True)
class SeparabilityReport:
    profile: DimsProfile
    party_labels: tuple[int, ...]
    norm_sq: float
    full_bound: float | None
    rows: tuple[ShapeRow, ...]
    notes: tuple[str, ...]

    def excluded_shapes(self, mode: str = "any") -> list[PartitionShape]:
        key = "excluded_any" if mode == "any" else "excluded_contiguous"
        return [r.shape for r in self.rows if getattr(r, key)]

    def to_jsonable(self, mode: str = "both") -> dict:
        shapes = []
        for r in self.rows:
            row = {"shape": r.shape.render()}
            if mode in ("contiguous", "both"):
                row["bound_contiguous"] = r.bound_contiguous
                row["excluded_contiguous"] = r.excluded_contiguous
            if mode in ("max", "both"):
                row["bound_max"] = r.bound_max
                row["best_assignment"] = (
                    r.best_partition.render(labels=self.party_labels) if r.best_partition else None
                )
                row["excluded_any"] = r.excluded_any
                row["skipped_assignments"] = [p.render(labels=self.party_labels) for p in r.skipped]
            shapes.append(row)
        return {
            "dims": list(self.profile.dims),
            "norm_sq": self.norm_sq,
            "full_bound": self.full_bound,
            "shapes": shapes,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class ThresholdRow:
    """Critical x* = sqrt(bound / c) per mode, with vacuity flags."""

    shape: PartitionShape
    bound_contiguous: float | None
    x_star_contiguous: float | None
    vacuous_contiguous: bool | None
    bound_max: float | None
    x_star_max: float | None
    vacuous_max: bool | None
    best_partition: Partition | None
    skipped: tuple[Partition, ...]


@dataclass(frozen=True)
class ThresholdTable:
    profile: DimsProfile
    party_labels: tuple[int, ...]
    coefficient: float
    x_max: float
    rows: tuple[ThresholdRow, ...]
    notes: tuple[str, ...]

    @property
    def never_excluded(self) -> bool:
        """True when the correlated part carries no full-subset correlations."""
        return self.coefficient == 0.0

    def to_jsonable(self, mode: str = "both") -> dict:
        shapes = []
        for r in self.rows:
            row = {"shape": r.shape.render()}
            if self.never_excluded:
                row["never_excluded"] = True
            if mode in ("contiguous", "both"):
                row["bound_contiguous"] = r.bound_contiguous
                row["x_star_contiguous"] = r.x_star_contiguous
                if r.x_star_contiguous is not None:
                    row["x_star_contiguous_surd"] = as_surd(r.x_star_contiguous)
                row["vacuous_contiguous"] = r.vacuous_contiguous
            if mode in ("max", "both"):
                row["bound_max"] = r.bound_max
                row["x_star_max"] = r.x_star_max
                if r.x_star_max is not None:
                    row["x_star_max_surd"] = as_surd(r.x_star_max)
                row["vacuous_max"] = r.vacuous_max
                row["best_assignment"] = (
                    r.best_partition.render(labels=self.party_labels) if r.best_partition else None
                )
            shapes.append(row)
        return {
            "dims": list(self.profile.dims),
            "c": self.coefficient,
            "x_max": self.x_max if math.isfinite(self.x_max) else None,
            "shapes": shapes,
            "notes": list(self.notes),
        }


def _contiguous_partition(shape: PartitionShape, profile: DimsProfile) -> Partition:
    blocks = []
    start = 0
    for k in shape.parts:
        blocks.append(tuple(range(start, start + k)))
        start += k
    return partition_from_blocks(blocks, profile)


def _product_bound(partition: Partition) -> float | None:
    """Block-factor product, or None when some block fails its constraint."""
    if any(not ok for _, ok in check_block_constraints(partition)):
        return None
    value = 1.0
    for dims in partition.block_dims:
        value *= block_factor(dims).value
    return value


def _evaluate_shape(shape: PartitionShape, profile: DimsProfile) -> ShapeRow:
    contiguous = _contiguous_partition(shape, profile)
    bound_contiguous = _product_bound(contiguous)

    bound_max = None
    best = None
    skipped = []
    for partition in enumerate_assignments(shape, profile):
        value = _product_bound(partition)
        if value is None:
            skipped.append(partition)
        elif bound_max is None or value > bound_max:
            bound_max, best = value, partition
    return ShapeRow(
        shape=shape,
        bound_contiguous=bound_contiguous,
        bound_max=bound_max,
        best_partition=best,
        skipped=tuple(skipped),
    )


def shape_bound(shape: PartitionShape, profile: DimsProfile, mode: str = "contiguous") -> float | None:
    """Block-factor product bound for one shape; None marks "no valid assignment".

    ``contiguous`` requires ascending-sorted dimensions and evaluates the
    single contiguous assignment; ``max`` maximizes over all assignments,
    skipping those with failed block constraints.
    """
    if mode not in ("contiguous", "max"):
        raise DomainError(f"unknown bound mode {mode!r}")
    if shape.n != profile.n_parties:
        raise DomainError(f"shape {shape.render()} does not sum to {profile.n_parties} parties")
    if mode == "contiguous":
        if not profile.is_sorted:
            raise DomainError("contiguous bounds require dims sorted ascending")
        return _product_bound(_contiguous_partition(shape, profile))
    row = _evaluate_shape(shape, profile)
    return row.bound_max


def _alt_size3_factor(dims: tuple[int, int, int]) -> float:
    # variant of the size-3 block factor whose numerator uses 2*e3 where the
    # general formula has e1+e2; the two agree only when e1 + e2 == 2*e3
    e1, e2, e3 = dims
    num = e1 * e2 + e1 * e3 + e2 * e3 - 2 * e3
    return 8.0 * (1.0 - num / (e1 * e2 * e3 * e3))


def _sorted_view(state: MultiState) -> tuple[MultiState, tuple[int, ...], list[str]]:
    """Ascending-dimension view plus original 1-based labels per position."""
    dims = state.dims
    order = tuple(int(i) for i in np.argsort(dims, kind="stable"))
    if order == tuple(range(len(dims))):
        return state, tuple(range(1, len(dims) + 1)), []
    labels = tuple(i + 1 for i in order)
    note = (
        "parties reordered to ascending dimension for bound evaluation; "
        "assignments are reported with original party labels"
    )
    return permute_parties(state, order), labels, [note]


def _full_bound_and_notes(profile: DimsProfile) -> tuple[float | None, list[str]]:
    dims = profile.dims
    if dims[-1] > math.prod(dims[:-1]):
        return None, [
            "full-system bound unavailable: the largest dimension exceeds the product of the others"
        ]
    return multi_factor(dims), []


def _variant_13_notes(rows, profile: DimsProfile, coefficient: float | None = None) -> list[str]:
    notes = []
    if profile.n_parties != 4:
        return notes
    for r in rows:
        if r.shape.parts != (1, 3) or r.bound_contiguous is None:
            continue
        alt = single_factor(profile.dims[0]) * _alt_size3_factor(profile.dims[1:])
        if abs(alt - r.bound_contiguous) <= NOTE_RTOL * max(alt, r.bound_contiguous):
            continue
        msg = (
            f"(1,3) contiguous bound follows the general size-3 block formula "
            f"(value {r.bound_contiguous!r}); the alternate four-party table form, whose numerator "
            f"replaces d2+d3 by 2*d4, gives {alt!r}"
        )
        if coefficient:
            x_std = math.sqrt(r.bound_contiguous / coefficient)
            x_alt = math.sqrt(alt / coefficient)
            msg += (
                f"; thresholds {as_surd(x_std) or x_std!r} (general) "
                f"vs {as_surd(x_alt) or x_alt!r} (alternate)"
            )
        msg += "; the two agree only when d2+d3 == 2*d4"
        notes.append(msg)
    return notes


def classify(state: MultiState) -> SeparabilityReport:
    """Exclusion verdicts for every shape: excluded means certainly not
    separable that way (under any assignment for ``excluded_any``, under the
    contiguous assignment for ``excluded_contiguous``)."""
    n = state.n_parties
    if n < 3:
        raise DomainError("classification needs at least three parties")
    state, labels, notes = _sorted_view(state)
    profile = state.profile

    norm_sq = correlation_tensor(state, range(n)).norm_sq
    full_bound, fb_notes = _full_bound_and_notes(profile)
    notes = notes + fb_notes

    rows = []
    for shape in enumerate_shapes(n):
        row = _evaluate_shape(shape, profile)
        rows.append(
            ShapeRow(
                shape=row.shape,
                bound_contiguous=row.bound_contiguous,
                bound_max=row.bound_max,
                best_partition=row.best_partition,
                skipped=row.skipped,
                excluded_contiguous=(None if row.bound_contiguous is None else norm_sq > row.bound_contiguous),
                excluded_any=(None if row.bound_max is None else norm_sq > row.bound_max),
            )
        )
    notes = notes + _variant_13_notes(rows, profile)

    return SeparabilityReport(
        profile=profile,
        party_labels=labels,
        norm_sq=norm_sq,
        full_bound=full_bound,
        rows=tuple(rows),
        notes=tuple(notes),
    )


def noise_thresholds(family: StateFamily) -> ThresholdTable:
    """Critical mixing parameters x* = sqrt(bound / c) for a white-noise family.

    The quadratic coefficient c of the full-subset norm is measured at one
    sample point and verified at a second; a mismatch means the family is not
    white-noise linear and classification at fixed x should be used instead.
    """
    n = family.profile.n_parties
    if n < 3:
        raise DomainError("threshold solving needs at least three parties")

    hi = family.x_max if math.isfinite(family.x_max) else 1.0
    x0, x1 = hi / 2.0, hi / 4.0
    norm0 = correlation_tensor(family.state_at(x0), range(n)).norm_sq
    norm1 = correlation_tensor(family.state_at(x1), range(n)).norm_sq

    if norm0 <= 1e-14 and norm1 <= 1e-14:
        c = 0.0
    else:
        c = norm0 / (x0 * x0)
        predicted = c * x1 * x1
        if abs(norm1 - predicted) > LINEARITY_RTOL * max(predicted, 1e-15):
            raise DomainError("family is not white-noise linear; use classify at fixed x")

    # bounds are evaluated on the ascending-sorted dims; the norm itself is
    # invariant under party relabeling
    sorted_state, labels, notes = _sorted_view(family.state_at(x1))
    profile = sorted_state.profile

    def solve(bound):
        if bound is None or c == 0.0:
            return None, None
        x_star = math.sqrt(bound / c)
        return x_star, x_star > family.x_max

    rows = []
    base_rows = []
    for shape in enumerate_shapes(n):
        row = _evaluate_shape(shape, profile)
        base_rows.append(row)
        xc, vc = solve(row.bound_contiguous)
        xm, vm = solve(row.bound_max)
        rows.append(
            ThresholdRow(
                shape=shape,
                bound_contiguous=row.bound_contiguous,
                x_star_contiguous=xc,
                vacuous_contiguous=vc,
                bound_max=row.bound_max,
                x_star_max=xm,
                vacuous_max=vm,
                best_partition=row.best_partition,
                skipped=row.skipped,
            )
        )
    notes = notes + _variant_13_notes(base_rows, profile, coefficient=c)

    return ThresholdTable(
        profile=profile,
        party_labels=labels,
        coefficient=c,
        x_max=family.x_max,
        rows=tuple(rows),
        notes=tuple(notes),
    )
