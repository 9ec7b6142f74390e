"""Self-adjoint operators and clustered spectra.

Eigenvalues coming out of the curvature machinery are exact integers or
smooth functions of an angle, so clustering nearby numerical eigenvalues
into multiplicities is safe: the cluster gap (1e-6) sits many orders of
magnitude above eigensolver noise and below any genuine spectral gap used
in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CLUSTER_GAP = 1e-6


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue with its multiplicity and an orthonormal eigenbasis."""

    value: float
    multiplicity: int
    vectors: np.ndarray  # shape (dim, multiplicity), columns are eigenvectors


@dataclass(frozen=True)
class Spectrum:
    """Clustered spectrum of a self-adjoint operator."""

    clusters: tuple[EigenCluster, ...]
    dim: int

    def multiplicities(self) -> dict[float, int]:
        return {c.value: c.multiplicity for c in self.clusters}

    def values(self) -> list[float]:
        return [c.value for c in self.clusters]

    def total_multiplicity(self) -> int:
        return sum(c.multiplicity for c in self.clusters)

    def as_pairs(self) -> list[tuple[float, int]]:
        return [(c.value, c.multiplicity) for c in self.clusters]


@dataclass(frozen=True)
class SelfAdjointOperator:
    """A dense symmetric matrix with verified self-adjointness."""

    matrix: np.ndarray
    symmetry_defect: float = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "symmetry_defect", float(np.max(np.abs(m - m.T))))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def spectrum(self, gap: float = CLUSTER_GAP) -> Spectrum:
        """Eigendecomposition with eigenvalues clustered by the given gap."""
        evals, evecs = np.linalg.eigh(0.5 * (self.matrix + self.matrix.T))
        clusters: list[EigenCluster] = []
        start = 0
        for i in range(1, len(evals) + 1):
            if i == len(evals) or evals[i] - evals[i - 1] > gap:
                block = evecs[:, start:i]
                clusters.append(
                    EigenCluster(
                        value=float(np.mean(evals[start:i])),
                        multiplicity=i - start,
                        vectors=block,
                    )
                )
                start = i
        return Spectrum(clusters=tuple(clusters), dim=self.dim)

    def max_eigen_residual(self, spectrum: Spectrum | None = None) -> float:
        """max over clustered eigenvectors of |K v - lambda v|."""
        spec = spectrum if spectrum is not None else self.spectrum()
        worst = 0.0
        for c in spec.clusters:
            resid = self.matrix @ c.vectors - c.value * c.vectors
            worst = max(worst, float(np.max(np.abs(resid))) if resid.size else 0.0)
        return worst
