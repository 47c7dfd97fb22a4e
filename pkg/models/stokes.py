from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from models.polynomial import BranchedRadical, ComplexPolynomial


@dataclass(frozen=True)
class SpectralCurve:
    """y(z) = h(z) w(z) with y**2 = y2(z)"""

    W: ComplexPolynomial
    h: ComplexPolynomial
    radical: BranchedRadical
    y2: ComplexPolynomial
    double_roots: Tuple[complex, ...]

    @property
    def simple_roots(self) -> Tuple[complex, ...]:
        return self.radical.endpoints

    @property
    def roots(self) -> Tuple[complex, ...]:
        return self.simple_roots + self.double_roots

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(r) for r in self.roots)


@dataclass(frozen=True)
class Short:
    root: complex


@dataclass(frozen=True)
class Leg:
    angle: float


@dataclass(frozen=True)
class Critical:
    root: complex


Terminal = Union[Short, Leg, Critical]


@dataclass(frozen=True)
class StokesLine:
    origin: complex
    direction_index: int
    direction: float
    samples: np.ndarray
    g_values: np.ndarray
    y_values: np.ndarray
    terminal: Terminal

    @property
    def is_short(self) -> bool:
        return isinstance(self.terminal, Short)


@dataclass(frozen=True)
class StokesGraph:
    curve: SpectralCurve
    lines: Tuple[StokesLine, ...]

    def shorts(self) -> Tuple[StokesLine, ...]:
        return tuple(line for line in self.lines if line.is_short)

    def legs(self) -> Tuple[StokesLine, ...]:
        return tuple(line for line in self.lines if isinstance(line.terminal, Leg))

    def short_between(self, p: complex, q: complex, tol: float) -> Optional[StokesLine]:
        for line in self.shorts():
            end = line.terminal.root
            if (abs(line.origin - p) < tol and abs(end - q) < tol) or (
                abs(line.origin - q) < tol and abs(end - p) < tol
            ):
                return line
        return None


@dataclass(frozen=True)
class SignMap:
    """``signs[iy, ix]`` is sign(Re G) at the centre of cell (ix, iy)"""

    bbox: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    signs: np.ndarray
    values: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def cell_size(self) -> Tuple[float, float]:
        re_min, re_max, im_min, im_max = self.bbox
        nx, ny = self.resolution
        return (re_max - re_min) / nx, (im_max - im_min) / ny

    def centres(self) -> np.ndarray:
        re_min, re_max, im_min, im_max = self.bbox
        nx, ny = self.resolution
        dx, dy = self.cell_size
        xs = re_min + dx * (np.arange(nx) + 0.5)
        ys = im_min + dy * (np.arange(ny) + 0.5)
        return xs[None, :] + 1j * ys[:, None]

    def cell_of(self, z: complex) -> Optional[Tuple[int, int]]:
        re_min, _, im_min, _ = self.bbox
        nx, ny = self.resolution
        dx, dy = self.cell_size
        ix = int(np.floor((z.real - re_min) / dx))
        iy = int(np.floor((z.imag - im_min) / dy))
        if 0 <= ix < nx and 0 <= iy < ny:
            return iy, ix
        return None

    def point_of(self, cell: Tuple[int, int]) -> complex:
        iy, ix = cell
        re_min, _, im_min, _ = self.bbox
        dx, dy = self.cell_size
        return complex(re_min + dx * (ix + 0.5), im_min + dy * (iy + 0.5))


@dataclass(frozen=True)
class CutCandidate:
    line: StokesLine
    points: np.ndarray
    density: np.ndarray
    charge: float
    positive: bool
    nodes: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0, dtype=complex))
    weights: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))

    @property
    def endpoints(self) -> Tuple[complex, complex]:
        return self.line.origin, self.line.terminal.root

    @property
    def polyline(self) -> np.ndarray:
        return self.line.samples


@dataclass(frozen=True)
class EmbeddingReport:
    embeddable: bool
    sectors: Tuple[int, int]
    resolution: Tuple[int, int]
    sector_components: Tuple[int, int] = (0, 0)
    cut_order: Tuple[int, ...] = ()
    polyline: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0, dtype=complex))
    reason: str = ""
