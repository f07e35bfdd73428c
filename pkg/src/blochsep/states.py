"""Density matrices over tensor products of heterogeneous local dimensions.

Basis convention: the product basis is ordered lexicographically with party 1
slowest-varying, i.e. the matrix of a product operator A_1 x ... x A_n is
``np.kron(A_1, np.kron(A_2, ...))``.  Party indices are 0-based inside the
library and 1-based in all rendered output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from string import ascii_lowercase, ascii_uppercase

import numpy as np

from .errors import DomainError, ShapeError

DEFAULT_ATOL = 1e-9


@dataclass(frozen=True)
class DimsProfile:
    """Ordered local dimensions (d_1, ..., d_n) of an n-partite system."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 1:
            raise DomainError("a dimension profile needs at least one party")
        if any(d < 2 for d in dims):
            raise DomainError("every local dimension must be at least 2")

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    @property
    def is_sorted(self) -> bool:
        """Whether d_1 <= ... <= d_n (the convention the bounds assume)."""
        return all(a <= b for a, b in zip(self.dims, self.dims[1:]))


class MultiState:
    """A validated density matrix over a :class:`DimsProfile`.

    Validation checks Hermiticity, unit trace and an eigenvalue floor of
    ``-atol`` (positive semidefiniteness up to rounding).  Instances are
    immutable; the matrix is stored read-only.
    """

    __slots__ = ("profile", "matrix", "atol")

    def __init__(self, profile: DimsProfile, matrix: np.ndarray, *, atol: float = DEFAULT_ATOL):
        matrix = np.array(matrix, dtype=np.complex128)
        D = profile.total
        if matrix.shape != (D, D):
            raise ShapeError(f"state matrix must be {D}x{D} for dims {profile.dims}, got {matrix.shape}")
        herm = np.abs(matrix - matrix.conj().T).max()
        if herm > atol:
            raise DomainError(f"state is not Hermitian: max deviation {herm:.3e}")
        tr = np.trace(matrix).real
        if abs(tr - 1.0) > atol:
            raise DomainError(f"state trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(matrix)[0]
        if lo < -atol:
            raise DomainError(f"state is not positive semidefinite: min eigenvalue {lo:.3e}")
        matrix.setflags(write=False)
        self.profile = profile
        self.matrix = matrix
        self.atol = atol

    @property
    def dims(self) -> tuple[int, ...]:
        return self.profile.dims

    @property
    def n_parties(self) -> int:
        return self.profile.n_parties

    def __repr__(self):
        return f"MultiState(dims={self.profile.dims})"


def from_ket(profile: DimsProfile, amplitudes) -> MultiState:
    """Projector onto the normalized amplitude vector."""
    vec = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if vec.shape != (profile.total,):
        raise ShapeError(f"ket must have length {profile.total} for dims {profile.dims}, got {vec.shape[0]}")
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise DomainError("cannot build a state from the zero vector")
    vec = vec / norm
    return MultiState(profile, np.outer(vec, vec.conj()))


def maximally_mixed(profile: DimsProfile) -> MultiState:
    return MultiState(profile, np.eye(profile.total) / profile.total)


def mix(terms, white_noise_weight: float = 0.0, *, profile: DimsProfile | None = None,
        atol: float = DEFAULT_ATOL) -> MultiState:
    """Convex combination of states plus ``white_noise_weight`` of I/D.

    Weights must be nonnegative and sum (noise included) to 1 within ``atol``.
    ``profile`` is only needed when ``terms`` is empty (pure noise).
    """
    terms = list(terms)
    if white_noise_weight < 0 or any(w < 0 for w, _ in terms):
        raise DomainError("mixture weights must be nonnegative")
    total = sum(w for w, _ in terms) + white_noise_weight
    if abs(total - 1.0) > atol:
        raise DomainError(f"mixture weights sum to {total!r}, expected 1")
    if terms:
        profile = terms[0][1].profile
        if any(s.profile.dims != profile.dims for _, s in terms):
            raise ShapeError("all mixture terms must share one dimension profile")
    elif profile is None:
        raise DomainError("a pure-noise mixture needs an explicit profile")
    D = profile.total
    out = np.zeros((D, D), dtype=np.complex128)
    for w, s in terms:
        out += w * s.matrix
    if white_noise_weight:
        out += (white_noise_weight / D) * np.eye(D)
    return MultiState(profile, out, atol=atol)


def _trace_subscripts(n: int, keep: tuple[int, ...]) -> str:
    # one letter per row axis; kept columns get fresh letters, traced columns
    # reuse the row letter so einsum sums over them
    rows = ascii_lowercase[:n]
    cols = []
    fresh = iter(ascii_uppercase)
    for i in range(n):
        cols.append(next(fresh) if i in keep else rows[i])
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    return "".join(rows) + "".join(cols) + "->" + out


def partial_trace(state: MultiState, keep) -> MultiState:
    """Reduced density matrix over the kept parties (0-based indices).

    The kept parties stay in their original relative order, in the induced
    lexicographic product basis.
    """
    n = state.n_parties
    keep = tuple(sorted(set(int(i) for i in keep)))
    if not keep:
        raise DomainError("keep must name at least one party")
    if keep[0] < 0 or keep[-1] >= n:
        raise DomainError(f"party indices out of range for {n} parties: {keep}")
    dims = state.dims
    if len(keep) == n:
        return state
    tensor = state.matrix.reshape(dims + dims)
    reduced = np.einsum(_trace_subscripts(n, keep), tensor)
    kept_dims = tuple(dims[i] for i in keep)
    D = math.prod(kept_dims)
    return MultiState(DimsProfile(kept_dims), reduced.reshape(D, D), atol=state.atol)


def permute_parties(state: MultiState, order) -> MultiState:
    """Reorder parties so that new party s is old party ``order[s]``."""
    n = state.n_parties
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(n)):
        raise DomainError(f"order must be a permutation of 0..{n - 1}, got {order}")
    dims = state.dims
    tensor = state.matrix.reshape(dims + dims)
    axes = order + tuple(n + i for i in order)
    new_dims = tuple(dims[i] for i in order)
    out = tensor.transpose(axes).reshape(state.matrix.shape)
    return MultiState(DimsProfile(new_dims), out, atol=state.atol)


def purity(state: MultiState) -> float:
    """Tr(rho^2)."""
    m = state.matrix
    return float(np.einsum("ij,ji->", m, m).real)


class StateFamily:
    """White-noise family rho(x) = x * sigma + (1 - x*w)/D * I.

    ``sigma`` is an unnormalized sum of weighted projectors with total weight
    ``w``; the identity remainder keeps the trace at 1.  ``x_max`` is the
    largest x for which rho(x) stays positive semidefinite (the family is used
    on [0, x_max]).
    """

    __slots__ = ("profile", "terms", "total_weight", "sigma", "x_max", "atol")

    def __init__(self, profile: DimsProfile, terms, *, atol: float = DEFAULT_ATOL):
        terms = [(float(w), np.asarray(k, dtype=np.complex128).ravel()) for w, k in terms]
        if not terms:
            raise DomainError("a state family needs at least one projector term")
        if any(w < 0 for w, _ in terms):
            raise DomainError("projector weights must be nonnegative")
        D = profile.total
        sigma = np.zeros((D, D), dtype=np.complex128)
        for w, ket in terms:
            proj = from_ket(profile, ket).matrix
            sigma += w * proj
        w_total = sum(w for w, _ in terms)
        sigma.setflags(write=False)

        evals = np.clip(np.linalg.eigvalsh(sigma), 0.0, None)
        slopes = evals - w_total / D
        binding = slopes < 0
        x_max = float(np.min(1.0 / (w_total - evals[binding] * D))) if binding.any() else math.inf

        self.profile = profile
        self.terms = terms
        self.total_weight = w_total
        self.sigma = sigma
        self.x_max = x_max
        self.atol = atol

    def state_at(self, x: float) -> MultiState:
        D = self.profile.total
        noise = (1.0 - x * self.total_weight) / D
        return MultiState(self.profile, x * self.sigma + noise * np.eye(D), atol=self.atol)


def _parse_ket(raw, D: int) -> np.ndarray:
    vec = np.zeros(D, dtype=np.complex128)
    if len(raw) != D:
        raise ShapeError(f"ket must have length {D}, got {len(raw)}")
    for i, a in enumerate(raw):
        if isinstance(a, (int, float)):
            vec[i] = a
        elif isinstance(a, (list, tuple)) and len(a) == 2:
            vec[i] = complex(a[0], a[1])
        else:
            raise ShapeError("ket amplitudes must be numbers or [re, im] pairs")
    return vec


def state_from_spec(spec: dict, *, atol: float = DEFAULT_ATOL) -> MultiState:
    """Build a state from the JSON spec {dims, terms, white_noise}."""
    profile = DimsProfile(tuple(spec["dims"]))
    D = profile.total
    terms = []
    for t in spec.get("terms", []):
        ket = _parse_ket(t["ket"], D)
        terms.append((float(t["weight"]), from_ket(profile, ket)))
    noise = float(spec.get("white_noise", 0.0))
    if not terms:
        if abs(noise - 1.0) > atol:
            raise DomainError("a spec without terms must have white_noise = 1")
        return maximally_mixed(profile)
    return mix(terms, noise, atol=atol)


def family_from_spec(spec: dict, *, atol: float = DEFAULT_ATOL) -> StateFamily:
    """Build a white-noise family from {dims, terms}; weights are relative.

    ``white_noise`` must be absent or 0: the family's noise share is fixed by
    its mixing parameter, not by the spec.
    """
    if float(spec.get("white_noise", 0.0)) != 0.0:
        raise DomainError("family specs must not carry white_noise; it is set by the mixing parameter")
    profile = DimsProfile(tuple(spec["dims"]))
    D = profile.total
    terms = [(float(t["weight"]), _parse_ket(t["ket"], D)) for t in spec.get("terms", [])]
    return StateFamily(profile, terms, atol=atol)
