"""Density-matrix container with Hermiticity/trace/positivity contracts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDensityMatrix

HERMITICITY_RTOL = 1e-8
TRACE_ATOL = 1e-8
MIN_EIGENVALUE = -1e-6


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDensityMatrix("density matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def check(self, trace_preserving: bool = True) -> None:
        """Assert the typed invariants; raises InvalidDensityMatrix."""
        m = self.matrix
        scale = max(np.linalg.norm(m), 1e-300)
        if np.linalg.norm(m - m.conj().T) > HERMITICITY_RTOL * scale:
            raise InvalidDensityMatrix("density matrix is not Hermitian")
        if trace_preserving and abs(self.trace() - 1.0) > TRACE_ATOL:
            raise InvalidDensityMatrix(f"trace {self.trace()} differs from 1")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < MIN_EIGENVALUE:
            raise InvalidDensityMatrix("density matrix has a significant negative eigenvalue")

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def pure_state(vector: np.ndarray, time: float = 0.0) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), time)
