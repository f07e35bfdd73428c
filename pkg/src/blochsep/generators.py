"""Generalized Gell-Mann generator basis of SU(d).

The basis consists of the d^2 - 1 traceless Hermitian matrices normalized to
Tr(g_i g_j) = 2 delta_ij, in the fixed canonical order:

* symmetric off-diagonal  E_jk + E_kj          for j < k, lexicographic,
* antisymmetric off-diagonal  -i (E_jk - E_kj)  for j < k, lexicographic,
* diagonal  sqrt(2 / (l (l+1))) (sum_{j<=l} E_jj - l E_{l+1,l+1})  for l = 1..d-1.

For d = 2 this is exactly (sigma_x, sigma_y, sigma_z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generator basis for one local dimension.

    ``matrices`` has shape (d^2 - 1, d, d) and is read-only; the stack order
    is the canonical order documented in the module docstring.
    """

    dim: int
    matrices: np.ndarray

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        """Check Hermiticity, tracelessness and Tr(g_i g_j) = 2 delta_ij."""
        d = self.dim
        mats = self.matrices
        if mats.shape != (d * d - 1, d, d):
            raise DomainError(
                f"generator stack for d={d} must have shape {(d * d - 1, d, d)}, "
                f"got {mats.shape}"
            )
        herm = np.abs(mats - mats.conj().transpose(0, 2, 1)).max()
        if herm > tol:
            raise DomainError(f"generators not Hermitian: max deviation {herm:.3e}")
        tr = np.abs(np.trace(mats, axis1=1, axis2=2)).max()
        if tr > tol:
            raise DomainError(f"generators not traceless: max |trace| {tr:.3e}")
        gram = np.einsum("iab,jba->ij", mats, mats)
        dev = np.abs(gram - 2.0 * np.eye(d * d - 1)).max()
        if dev > tol:
            raise DomainError(f"generator Gram matrix is not 2*I: max deviation {dev:.3e}")

    def to_jsonable(self) -> list:
        """Debug dump: nested lists of [re, im] pairs, one per matrix."""
        out = []
        for m in self.matrices:
            out.append([[[float(z.real), float(z.imag)] for z in row] for row in m])
        return out


def build_generators(d: int) -> GeneratorSet:
    """Construct the SU(d) generator basis in canonical order.

    Deterministic: repeated calls with the same ``d`` produce bit-identical
    matrices.
    """
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise DomainError("local dimension must be an integer")
    if d < 2:
        raise DomainError("local dimension must be at least 2")

    mats = np.zeros((d * d - 1, d, d), dtype=np.complex128)
    idx = 0
    for j in range(d):
        for k in range(j + 1, d):
            mats[idx, j, k] = 1.0
            mats[idx, k, j] = 1.0
            idx += 1
    for j in range(d):
        for k in range(j + 1, d):
            mats[idx, j, k] = -1.0j
            mats[idx, k, j] = 1.0j
            idx += 1
    for l in range(1, d):
        coef = np.sqrt(2.0 / (l * (l + 1)))
        for j in range(l):
            mats[idx, j, j] = coef
        mats[idx, l, l] = -l * coef
        idx += 1

    mats.setflags(write=False)
    return GeneratorSet(dim=int(d), matrices=mats)


def decompose_hermitian(h: np.ndarray, gens: GeneratorSet) -> tuple[float, np.ndarray]:
    """Expand a Hermitian matrix as (Tr H / d) I + 1/2 sum_i c_i g_i.

    Returns (Tr H / d, coefficient vector c) with c_i = Tr(H g_i).
    """
    d = gens.dim
    coeffs = np.einsum("ab,iba->i", h, gens.matrices).real
    return float(np.trace(h).real) / d, coeffs
