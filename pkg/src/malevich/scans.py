"""Deterministic point grids behind the figures: qubit sphere, concurrence,
logarithmic negativity, pure-qubit surface and coherent-state areas.

Every scan returns a :class:`Scan` whose rows are produced lazily in
row-major order (first column outer).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Iterator, NamedTuple

import numpy as np

from . import qubit, spin1
from .qubit import ProbabilityTriple, classify_pure_maxima
from .qutrit import ComponentQubits, qutrit_area_sum
from .two_qubit import embed_matrix, negativity

SCAN_TARGETS = (
    "concurrence_fig4a",
    "logneg_fig4b",
    "qubit_sphere_fig2",
    "pure_rep_fig5",
    "coherent_fig6",
)


class Scan(NamedTuple):
    columns: tuple[str, ...]
    rows: Iterable[tuple]


def _axis(resolution: int) -> np.ndarray:
    if int(resolution) != resolution or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    return np.linspace(0.0, 1.0, int(resolution))


def concurrence_fig4a(resolution: int = 201) -> Scan:
    """Center-block concurrence ``2 sqrt((p1 - 1/2)^2 + (p2 - 1/2)^2)`` with ``p3 = 1/2``."""
    axis = _axis(resolution)

    def rows():
        for p1 in axis:
            for p2 in axis:
                value = 2.0 * math.hypot(p1 - 0.5, p2 - 0.5)
                yield float(p1), float(p2), value, qubit.is_quantum((p1, p2, 0.5))

    return Scan(("p1", "p2", "value", "physical"), rows())


def _fig4b_base(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    # qutrit diag(0, 1/2, 1/2) carrying coherence D on its lower block
    n = p1.size
    R = np.zeros((n, 3, 3), dtype=complex)
    d = (p1 - 0.5) - 1j * (p2 - 0.5)
    R[:, 1, 1] = R[:, 2, 2] = 0.5
    R[:, 1, 2] = d
    R[:, 2, 1] = d.conj()
    return R


def logneg_fig4b(resolution: int = 201) -> Scan:
    """Logarithmic negativity of the placement-1 embedding from its partial-transpose spectrum.

    The embedded qutrit is ``diag(0, 1/2, 1/2)`` with coherence ``D`` set by
    ``(p1, p2)``; points with ``|D| > 1/2`` are not states and carry
    ``physical = false``.
    """
    axis = _axis(resolution)

    def rows():
        for p1 in axis:
            col = np.full_like(axis, p1)
            neg = np.asarray(negativity(embed_matrix(_fig4b_base(col, axis), 1)))
            for p2, n in zip(axis, neg):
                n = float(n)
                physical = math.hypot(p1 - 0.5, p2 - 0.5) <= 0.5 + qubit.QUANTUM_TOL
                yield float(p1), float(p2), math.log(2 * n + 1), physical, n

    return Scan(("p1", "p2", "value", "physical", "negativity"), rows())


def qubit_sphere_fig2(resolution: int = 201) -> Scan:
    """Pure-state sphere grid, the ``S = 9/4`` great circle and the two global maxima."""
    n = int(resolution)
    if n != resolution or n < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")

    def emit(p) -> tuple:
        p = ProbabilityTriple(*(min(1.0, max(0.0, float(x))) for x in p))
        return (*p, qubit._area_sum(*p), classify_pure_maxima(p).value)

    def rows():
        for theta in np.linspace(0.0, math.pi, n):
            for phi in np.linspace(0.0, 2 * math.pi, n, endpoint=False):
                yield emit((
                    0.5 + 0.5 * math.sin(theta) * math.cos(phi),
                    0.5 + 0.5 * math.sin(theta) * math.sin(phi),
                    0.5 + 0.5 * math.cos(theta),
                ))
        lo, hi = qubit.GREAT_CIRCLE_P1_RANGE
        for p1 in np.linspace(lo, hi, n):
            for branch in (1, -1):
                yield emit(qubit.great_circle_point(float(p1), branch))
        for p in qubit.GLOBAL_MAXIMA:
            yield emit(p)

    return Scan(("p1", "p2", "p3", "S", "class"), rows())


def pure_rep_fig5(resolution: int = 201) -> Scan:
    """Area sum over the surface where the qutrit and its qubits B, C, D are all pure.

    That surface has ``rho22 = 0``, so ``B = (1/2, 1/2, 1)``,
    ``D = (1/2, 1/2, 0)`` and ``C`` is any pure qubit. ``pC2`` follows from
    ``(pC1, pC3)`` up to the sign ``branch``; points off the disk are skipped.
    """
    axis = _axis(resolution)
    B = ProbabilityTriple(0.5, 0.5, 1.0)
    D = ProbabilityTriple(0.5, 0.5, 0.0)

    def rows():
        for c1 in axis:
            for c3 in axis:
                rad = 0.25 - (c1 - 0.5) ** 2 - (c3 - 0.5) ** 2
                if rad < -qubit.QUANTUM_TOL:
                    continue
                root = math.sqrt(max(rad, 0.0))
                for branch in (1, -1):
                    C = ProbabilityTriple(float(c1), 0.5 + branch * root, float(c3))
                    yield float(c1), float(c3), qutrit_area_sum(ComponentQubits(C, B, C, D)), branch

    return Scan(("pC1", "pC3", "S", "branch"), rows())


def coherent_fig6(resolution: int = 201, jx_sign: int = 1) -> Scan:
    def rows() -> Iterator[tuple]:
        for r in spin1.grid_scan(resolution, jx_sign):
            yield r.jy, r.jz, r.S_A, r.S_B, r.S_D, r.S_total

    return Scan(("jy", "jz", "S_A", "S_B", "S_D", "S_total"), rows())


SCANS: dict[str, Callable[..., Scan]] = {
    "concurrence_fig4a": concurrence_fig4a,
    "logneg_fig4b": logneg_fig4b,
    "qubit_sphere_fig2": qubit_sphere_fig2,
    "pure_rep_fig5": pure_rep_fig5,
    "coherent_fig6": coherent_fig6,
}
