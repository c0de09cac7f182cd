"""Qubit states as three dichotomous probabilities and their triangle geometry.

A qubit density matrix is identified with the probabilities ``(p1, p2, p3)``
of spin projection +1/2 along x, y and z. The three points ``(p_k, 1 - p_k)``
sit on the sides of an equilateral triangle of side sqrt(2); the triangle they
span has sides ``l1, l2, l3`` and the squares on those sides carry the area sum
``S = l1^2 + l2^2 + l3^2``.
"""

from __future__ import annotations

import math
import warnings
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import NotPositiveWarning, OutOfRange
from .numerics import check_density

QUANTUM_TOL = 1e-12
RANGE_TOL = 1e-12

SQRT3 = math.sqrt(3.0)
GLOBAL_MAXIMA = (
    ((3 - SQRT3) / 6,) * 3,
    ((3 + SQRT3) / 6,) * 3,
)
GREAT_CIRCLE_P1_RANGE = ((3 - math.sqrt(6.0)) / 6, (3 + math.sqrt(6.0)) / 6)

AREA_MIN = 1.5
AREA_MAX_QUANTUM = 3.0
AREA_MAX_CLASSICAL = 6.0
AREA_GREAT_CIRCLE = 2.25


class ProbabilityTriple(NamedTuple):
    p1: float
    p2: float
    p3: float

    @property
    def residual(self) -> float:
        """``sum (p_k - 1/2)^2 - 1/4``; non-positive inside the quantum ball."""
        return quantumness_residual(self)

    @property
    def is_quantum(self) -> bool:
        return self.residual <= QUANTUM_TOL


class TriangleGeometry(NamedTuple):
    sides: tuple[float, float, float]
    areas: tuple[float, float, float]
    area_sum: float


class MaximaClass(str, Enum):
    GLOBAL_MAX = "global_max"
    GREAT_CIRCLE_LOCAL_MAX = "great_circle_local_max"
    OTHER_PURE = "other_pure"
    MIXED = "mixed"


def as_triple(p: Sequence[float]) -> ProbabilityTriple:
    """Coerce ``p`` to a :class:`ProbabilityTriple`, rejecting values outside [0, 1]."""
    if isinstance(p, ProbabilityTriple):
        t = p
    else:
        vals = [float(x) for x in p]
        if len(vals) != 3:
            raise OutOfRange(f"expected three probabilities, got {len(vals)}")
        t = ProbabilityTriple(*vals)
    for name, x in zip(t._fields, t):
        if not (-RANGE_TOL <= x <= 1 + RANGE_TOL) or math.isnan(x):
            raise OutOfRange(f"{name}={x!r} is outside [0, 1]")
    return t


def quantumness_residual(p: Sequence[float]) -> float:
    p1, p2, p3 = p
    return (p1 - 0.5) ** 2 + (p2 - 0.5) ** 2 + (p3 - 0.5) ** 2 - 0.25


def is_quantum(p: Sequence[float], tol: float = QUANTUM_TOL) -> bool:
    return quantumness_residual(p) <= tol


def off_diagonal(p1: float, p2: float) -> complex:
    """Upper off-diagonal density-matrix entry carried by the x and y probabilities."""
    return complex(p1 - 0.5, -(p2 - 0.5))


def probabilities_from_entry(rho12: complex, rho11: float) -> ProbabilityTriple:
    """Inverse of the entry map: ``p1 = Re + 1/2``, ``p2 = 1/2 - Im``, ``p3 = rho11``."""
    z = complex(rho12)
    return ProbabilityTriple(z.real + 0.5, 0.5 - z.imag, float(np.real(rho11)))


def qubit_from_probabilities(p: Sequence[float]) -> np.ndarray:
    """Qubit density matrix with the given x, y, z probabilities.

    Triples outside the quantum ball still produce a Hermitian unit-trace
    matrix, but a :class:`~malevich.exceptions.NotPositiveWarning` is issued
    because the matrix then has a negative eigenvalue.
    """
    p = as_triple(p)
    if not p.is_quantum:
        warnings.warn(
            f"{tuple(p)} lies outside the quantum ball (residual {p.residual:.3g})",
            NotPositiveWarning,
            stacklevel=2,
        )
    c = off_diagonal(p.p1, p.p2)
    return np.array([[p.p3, c], [c.conjugate(), 1.0 - p.p3]], dtype=complex)


def probabilities_from_qubit(rho) -> ProbabilityTriple:
    a = check_density(rho, dim=2)
    return probabilities_from_entry(a[0, 1], a[0, 0].real)


def bloch_vector(p: Sequence[float]) -> tuple[float, float, float]:
    p1, p2, p3 = as_triple(p)
    return (2 * p1 - 1, 2 * p2 - 1, 2 * p3 - 1)


def _side_squared(a: float, b: float) -> float:
    return 2 * a * a + 2 * b * b + 2 * a * b - 4 * a - 2 * b + 2


def triangle_sides(p: Sequence[float]) -> TriangleGeometry:
    """Side lengths and square areas of the triangle spanned by the probability points.

    The side index is cyclic: ``l3`` pairs ``p3`` with ``p1``.
    """
    p1, p2, p3 = as_triple(p)
    areas = (_side_squared(p1, p2), _side_squared(p2, p3), _side_squared(p3, p1))
    # the squared sides are sums of squares; clip round-off below zero
    areas = tuple(max(0.0, a) for a in areas)
    sides = tuple(math.sqrt(a) for a in areas)
    return TriangleGeometry(sides, areas, areas[0] + areas[1] + areas[2])


def area_sum(p: Sequence[float]) -> float:
    """Sum of the three Malevich square areas as a polynomial in the probabilities."""
    p1, p2, p3 = as_triple(p)
    return _area_sum(p1, p2, p3)


def _area_sum(p1: float, p2: float, p3: float) -> float:
    # unchecked fast path for the optimizer and grid scans
    return 2 * (
        2 * p1 * p1 + 3 * (1 - p1 - p2 - p3)
        + p1 * p2 + p1 * p3 + 2 * p2 * p2 + p2 * p3 + 2 * p3 * p3
    )


def great_circle_point(p1: float, branch: int = 1) -> ProbabilityTriple:
    """Pure state on the great circle where the area sum equals 9/4.

    ``branch=+1`` takes the ``+sqrt`` root for ``p2``; ``branch=-1`` swaps the
    roots and traces the other half of the circle.
    """
    lo, hi = GREAT_CIRCLE_P1_RANGE
    if not lo - RANGE_TOL <= p1 <= hi + RANGE_TOL:
        raise OutOfRange(f"p1={p1} outside the great-circle range [{lo:.6f}, {hi:.6f}]")
    root = math.sqrt(max(0.0, -1 + 12 * p1 - 12 * p1 * p1))
    a = 0.25 * (3 - 2 * p1 + root)
    b = 0.25 * (3 - 2 * p1 - root)
    return ProbabilityTriple(p1, a, b) if branch >= 0 else ProbabilityTriple(p1, b, a)


def classify_pure_maxima(p: Sequence[float], tol: float = 1e-9) -> MaximaClass:
    """Place a quantum triple among the extremal pure states of the area sum.

    Returns ``GLOBAL_MAX`` at the two permutation-symmetric pure states where
    ``S = 3``, ``GREAT_CIRCLE_LOCAL_MAX`` on the great circle where ``S = 9/4``
    (either root ordering of ``p2, p3``), ``OTHER_PURE`` elsewhere on the
    sphere and ``MIXED`` inside it.
    """
    p = as_triple(p)
    for q in GLOBAL_MAXIMA:
        if max(abs(a - b) for a, b in zip(p, q)) <= tol:
            return MaximaClass.GLOBAL_MAX
    lo, hi = GREAT_CIRCLE_P1_RANGE
    if lo - tol <= p.p1 <= hi + tol:
        p1 = min(max(p.p1, lo), hi)
        for branch in (1, -1):
            q = great_circle_point(p1, branch)
            if abs(q.p2 - p.p2) <= tol and abs(q.p3 - p.p3) <= tol:
                return MaximaClass.GREAT_CIRCLE_LOCAL_MAX
    if abs(p.residual) <= tol:
        return MaximaClass.OTHER_PURE
    return MaximaClass.MIXED


def linear_entropy(p: Sequence[float]) -> float:
    """``2 sum p_j (1 - p_j) - 1``, the fairness form of ``1 - Tr rho^2``."""
    p = as_triple(p)
    return 2 * sum(x * (1 - x) for x in p) - 1


def linear_entropy_triangle(p: Sequence[float]) -> float:
    """``2 - sum [(1 - p_j)^2 + p_{j+1}^2]`` with cyclic index; equal to :func:`linear_entropy`."""
    p = as_triple(p)
    return 2 - sum((1 - p[j]) ** 2 + p[(j + 1) % 3] ** 2 for j in range(3))
