"""Curvature of the 16-dimensional octonionic projective plane and its
hyperbolic dual, modelled on pairs of octonions.

Conventions fixed here and relied on everywhere else:

* Tangent vectors are pairs (a, b) of octonions with the product inner
  product; basis index i < 8 is the first slot, i >= 8 the second.
* ``sign=+1`` selects the compact plane, ``sign=-1`` the hyperbolic dual;
  the tensors differ by a global sign.
* The normal Jacobi operator is K_xi(X) = R(X, xi) xi, which makes the
  compact spectrum positive: {4 with multiplicity 7, 1 with multiplicity
  8, 0 on xi itself}.
* METRIC_SCALE = 4 calibrates the raw pair-model tensor so that compact
  sectional curvatures fill [1, 4]: an octonion-line plane such as
  ((1,0), (J1,0)) reaches 4 and a transverse plane such as ((1,0), (0,1))
  reaches 1, and the tube principal-curvature tables then hold verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import octonion as oct
from .errors import DegeneratePlaneError, NormalizationError
from .operators import SelfAdjointOperator, Spectrum

DIM = 16
METRIC_SCALE = 4.0
_GRAM_TOL = 1e-14
_UNIT_TOL = 1e-10


@dataclass(frozen=True)
class TangentPair:
    """Tangent vector (a, b), two octonions."""

    first: oct.Octonion
    second: oct.Octonion

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "TangentPair":
        v = np.asarray(v, dtype=float)
        if v.shape != (DIM,):
            raise NormalizationError(f"tangent vector needs {DIM} components, got {v.shape}")
        return cls(oct.Octonion(v[:8]), oct.Octonion(v[8:]))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.first.coeffs, self.second.coeffs])

    def inner(self, other: "TangentPair") -> float:
        return self.first.inner(other.first) + self.second.inner(other.second)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector()))


def _curvature_vec(x: np.ndarray, y: np.ndarray, z: np.ndarray, sign: int) -> np.ndarray:
    """R(x, y)z on raw 16-vectors; see module docstring for normalization."""
    a, b = x[:8], x[8:]
    c, d = y[:8], y[8:]
    e, f = z[:8], z[8:]
    mul, conj = oct.multiply, oct.conjugate
    ad_cb = mul(a, d) - mul(c, b)
    comp1 = (
        4.0 * (c @ e) * a
        - 4.0 * (a @ e) * c
        + mul(mul(e, d), conj(b))
        - mul(mul(e, b), conj(d))
        + mul(ad_cb, conj(f))
    )
    comp2 = (
        4.0 * (d @ f) * b
        - 4.0 * (b @ f) * d
        + mul(conj(a), mul(c, f))
        - mul(conj(c), mul(a, f))
        - mul(conj(e), ad_cb)
    )
    return (sign * METRIC_SCALE / 4.0) * np.concatenate([comp1, comp2])


def curvature(x: TangentPair, y: TangentPair, z: TangentPair, sign: int = 1) -> TangentPair:
    """Curvature tensor R(x, y)z.

    Args:
        x, y, z: tangent pairs.
        sign: +1 compact, -1 hyperbolic.

    Returns:
        R(x, y)z as a TangentPair.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return TangentPair.from_vector(_curvature_vec(x.vector(), y.vector(), z.vector(), sign))


def _require_unit(v: np.ndarray, what: str) -> None:
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > _UNIT_TOL:
        raise NormalizationError(f"{what} must be a unit vector, |.|={n!r}")


def jacobi_operator(xi: TangentPair, sign: int = 1) -> SelfAdjointOperator:
    """Normal Jacobi operator K_xi = R(., xi) xi as a 16x16 matrix."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    xv = xi.vector()
    _require_unit(xv, "xi")
    cols = [_curvature_vec(np.eye(DIM)[i], xv, xv, sign) for i in range(DIM)]
    return SelfAdjointOperator(np.column_stack(cols))


def sectional_curvature(x: TangentPair, y: TangentPair, sign: int = 1) -> float:
    """Sectional curvature of span{x, y}.

    Raises:
        DegeneratePlaneError: if the Gram determinant of (x, y) is below
            1e-14, i.e. the two vectors do not span a plane numerically.
    """
    xv, yv = x.vector(), y.vector()
    gram = float((xv @ xv) * (yv @ yv) - (xv @ yv) ** 2)
    if gram < _GRAM_TOL:
        raise DegeneratePlaneError(f"plane is degenerate: Gram determinant {gram!r}")
    num = float(_curvature_vec(xv, yv, yv, sign) @ xv)
    return num / gram


@dataclass(frozen=True)
class AdaptedFrame:
    """Eigenframe of K_xi on the complement of xi.

    four_space spans the |4|-eigenvalue directions (dimension 7) and
    one_space the |1|-eigenvalue directions (dimension 8); columns are
    orthonormal.
    """

    xi: TangentPair
    four_space: np.ndarray  # (16, 7)
    one_space: np.ndarray  # (16, 8)
    spectrum: Spectrum


def adapted_frame(xi: TangentPair, sign: int = 1) -> AdaptedFrame:
    """Orthonormal eigenframe of the normal Jacobi operator at xi."""
    op = jacobi_operator(xi, sign)
    spec = op.spectrum()
    by_value = {round(c.value): c for c in spec.clusters}
    four = by_value.get(4 * sign)
    one = by_value.get(1 * sign)
    if four is None or one is None or four.multiplicity != 7 or one.multiplicity != 8:
        raise NormalizationError(
            f"unexpected Jacobi spectrum {spec.as_pairs()!r} at xi={xi.vector()!r}"
        )
    return AdaptedFrame(xi=xi, four_space=four.vectors, one_space=one.vectors, spectrum=spec)


def basis_pair(i: int) -> TangentPair:
    """The i-th standard basis tangent pair, 0 <= i < 16."""
    return TangentPair.from_vector(np.eye(DIM)[i])


def random_unit_pair(rng: np.random.Generator) -> TangentPair:
    v = rng.normal(size=DIM)
    return TangentPair.from_vector(v / np.linalg.norm(v))
