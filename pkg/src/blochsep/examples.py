"""Built-in regression families for the ``examples`` CLI command.

Family 1: five qubits, correlated part P(ghz) + P(w-like) each with weight 1,
so rho(x) = x (P_psi + P_phi) + (1 - 2x)/32 I; positive for x <= 1/2.

Family 2: dims (2, 3, 4, 5), correlated part the projector onto
(|0,0,0,4> + |1,0,0,0>)/sqrt(2), so rho(x) = x P + (1 - x)/120 I.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .states import DimsProfile, StateFamily


def _basis_ket(dims: tuple[int, ...], levels: tuple[int, ...]) -> np.ndarray:
    index = 0
    for d, l in zip(dims, levels):
        index = index * d + l
    vec = np.zeros(int(np.prod(dims)), dtype=np.complex128)
    vec[index] = 1.0
    return vec


def example1_family() -> StateFamily:
    dims = (2, 2, 2, 2, 2)
    psi = (_basis_ket(dims, (0, 0, 0, 0, 0)) + _basis_ket(dims, (1, 1, 1, 1, 1))) / np.sqrt(2)
    phi = (
        _basis_ket(dims, (0, 0, 0, 0, 1))
        + _basis_ket(dims, (0, 0, 0, 1, 0))
        + _basis_ket(dims, (0, 0, 1, 0, 0))
        + _basis_ket(dims, (0, 1, 0, 0, 0))
    ) / 2.0
    return StateFamily(DimsProfile(dims), [(1.0, psi), (1.0, phi)])


def example2_family() -> StateFamily:
    dims = (2, 3, 4, 5)
    psi = (_basis_ket(dims, (0, 0, 0, 4)) + _basis_ket(dims, (1, 0, 0, 0))) / np.sqrt(2)
    return StateFamily(DimsProfile(dims), [(1.0, psi)])


def example_family(example_id: int) -> StateFamily:
    if example_id == 1:
        return example1_family()
    if example_id == 2:
        return example2_family()
    raise DomainError(f"unknown example id {example_id}; available: 1, 2")
