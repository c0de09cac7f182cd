"""Qutrit density matrices decomposed into four component qubits A, B, C, D.

Each component qubit pairs one population of the 3x3 matrix with one
coherence:

====  ==============  ===========
name  p3 (diagonal)   coherence
====  ==============  ===========
A     1 - rho33       rho13
B     1 - rho22       rho12
C     rho11           rho13
D     rho22           rho23
====  ==============  ===========

Only three of them are independent. ``A, B, D`` rebuild the qutrit exactly;
``B, C, D`` is the set used for the area sum.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from . import qubit
from .exceptions import BadDiagonal, InconsistentTriples, OutOfSimplex
from .numerics import PSD_TOL, check_density, min_eigenvalue
from .qubit import ProbabilityTriple, as_triple, off_diagonal, probabilities_from_entry

LINK_TOL = 1e-12

AREA_LOWER_BOUND = 4.5
AREA_UPPER_BOUND = 8.1565
AREA_UPPER_BOUND_ABD = 8.095


class ComponentQubits(NamedTuple):
    A: ProbabilityTriple
    B: ProbabilityTriple
    C: ProbabilityTriple
    D: ProbabilityTriple


class PureQutritParams(NamedTuple):
    """Amplitude moduli and phases of ``sqrt(1 - pb^2 - pg^2)|1> + pb e^{ib}|0> + pg e^{ig}|-1>``."""

    p_beta: float
    p_gamma: float
    beta: float
    gamma: float


class QutritReconstruction(NamedTuple):
    matrix: np.ndarray
    is_psd: bool
    min_eigenvalue: float


def component_qubits(rho) -> ComponentQubits:
    """Split a qutrit density matrix into its four component-qubit triples."""
    r = check_density(rho, dim=3)
    return ComponentQubits(
        A=probabilities_from_entry(r[0, 2], 1.0 - r[2, 2].real),
        B=probabilities_from_entry(r[0, 1], 1.0 - r[1, 1].real),
        C=probabilities_from_entry(r[0, 2], r[0, 0].real),
        D=probabilities_from_entry(r[1, 2], r[1, 1].real),
    )


def component_matrices(rho) -> dict[str, np.ndarray]:
    """The four 2x2 component matrices, each positive semidefinite for a valid qutrit."""
    r = np.asarray(rho, dtype=complex)
    return {
        "A": np.array([[1 - r[2, 2], r[0, 2]], [r[2, 0], r[2, 2]]]),
        "B": np.array([[1 - r[1, 1], r[0, 1]], [r[1, 0], r[1, 1]]]),
        "C": np.array([[r[0, 0], r[0, 2]], [r[2, 0], 1 - r[0, 0]]]),
        "D": np.array([[r[1, 1], r[1, 2]], [r[2, 1], 1 - r[1, 1]]]),
    }


def qutrit_from_probabilities(A: Sequence[float], B: Sequence[float], D: Sequence[float]) -> QutritReconstruction:
    """Rebuild the qutrit from the independent qubits ``A, B, D``.

    Only ``p1, p2`` of ``D`` enter; its population is fixed by ``B``. The
    result is Hermitian with unit trace, and ``is_psd`` reports whether it is
    a valid state.
    """
    A, B, D = as_triple(A), as_triple(B), as_triple(D)
    rho11 = A.p3 + B.p3 - 1.0
    if rho11 < -LINK_TOL:
        raise BadDiagonal(f"p3(A) + p3(B) = {A.p3 + B.p3:.15g} < 1 gives a negative population")
    a = off_diagonal(A.p1, A.p2)
    b = off_diagonal(B.p1, B.p2)
    d = off_diagonal(D.p1, D.p2)
    m = np.array(
        [
            [max(rho11, 0.0), b, a],
            [b.conjugate(), 1.0 - B.p3, d],
            [a.conjugate(), d.conjugate(), 1.0 - A.p3],
        ],
        dtype=complex,
    )
    lowest = min_eigenvalue(m)
    return QutritReconstruction(m, lowest >= -PSD_TOL, lowest)


def _check_link(c: ComponentQubits) -> None:
    if abs(c.D.p3 - (1.0 - c.B.p3)) > LINK_TOL:
        raise InconsistentTriples(f"p3(D) = {c.D.p3!r} but 1 - p3(B) = {1 - c.B.p3!r}")


def qutrit_linear_entropy(c: ComponentQubits) -> float:
    """Linear entropy ``1 - Tr rho^2`` written through the A, B, D probabilities."""
    _check_link(c)
    fair = sum(x * (1 - x) for t in (c.A, c.B, c.D) for x in t)
    return 2 * (fair + c.A.p3 * (1 - c.B.p3) + c.B.p3 ** 2) - 5


def qutrit_linear_entropy_from_qubits(c: ComponentQubits) -> float:
    """Same entropy as the sum of the A, B, D qubit entropies minus their correlation term."""
    _check_link(c)
    total = sum(qubit.linear_entropy(t) for t in (c.A, c.B, c.D))
    return total - 2 * (1 - c.B.p3) * (1 + c.B.p3 - c.A.p3)


def qutrit_area_sum(c: ComponentQubits) -> float:
    """Area sum over the B, C, D qubits, with D's population taken as ``1 - p3(B)``."""
    return (
        qubit.area_sum(c.B)
        + qubit.area_sum(c.C)
        + qubit.area_sum((c.D.p1, c.D.p2, 1.0 - c.B.p3))
    )


def qutrit_area_sum_abd(c: ComponentQubits) -> float:
    """Area sum over the A, B, D qubits (the reconstruction parameterization)."""
    return qubit.area_sum(c.A) + qubit.area_sum(c.B) + qubit.area_sum(c.D)


def pure_qutrit_vector(params: Sequence[float]) -> np.ndarray:
    pb, pg, beta, gamma = (float(x) for x in params)
    if pb < 0 or pg < 0:
        raise OutOfSimplex(f"amplitude moduli must be non-negative, got {pb}, {pg}")
    rest = 1.0 - pb * pb - pg * pg
    if rest < -LINK_TOL:
        raise OutOfSimplex(f"p_beta^2 + p_gamma^2 = {1 - rest:.15g} exceeds 1")
    return np.array(
        [math.sqrt(max(rest, 0.0)), pb * np.exp(1j * beta), pg * np.exp(1j * gamma)],
        dtype=complex,
    )


def pure_qutrit(params: Sequence[float]) -> np.ndarray:
    """Rank-one qutrit density matrix in the basis order (|1>, |0>, |-1>)."""
    psi = pure_qutrit_vector(params)
    return np.outer(psi, psi.conj())

