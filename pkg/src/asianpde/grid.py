"""Staggered-grid containers and boundary fills.

Arakawa-C layout: scalars live at cell centres, transport (Courant number)
components on cell faces.  Both carry a halo of ghost cells so that wide
stencils can be evaluated up to the domain edge once a boundary fill has run.

Storage is row-major with the x index on axis 0.  With halo width ``h``:

* scalar cell ``(i, j)``            -> ``values[h + i, h + j]``
* x-face on the *left* edge of cell ``i``  -> ``comp_x[h + i, h + j]``
  (``nx + 1`` interior face columns, the last one at ``h + nx``)
* y-face on the *bottom* edge of cell ``j`` -> ``comp_y[h + i, h + j]``

Fields are single-writer objects: concurrent reads are fine, but a halo fill
must not race an interior update on the same field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

DEFAULT_HALO = 2  # the corrective stencils and the FCT limiter read 2 cells deep


@dataclass(frozen=True)
class GridSpec:
    """Domain extents and resolution in transformed coordinates (x = ln S, y = A)."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ConfigurationError(f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]")
        if not self.y_min < self.y_max:
            raise ConfigurationError(f"y_min must be < y_max, got [{self.y_min}, {self.y_max}]")
        if self.nx < 3 or self.ny < 3:
            raise ConfigurationError(f"need at least 3 cells per dimension, got {self.nx}x{self.ny}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    @property
    def x_centres(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centres(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy


@dataclass
class ScalarField:
    """Cell-centred scalar with a halo ring; interior shape (nx, ny)."""

    values: np.ndarray
    halo: int = DEFAULT_HALO

    @classmethod
    def zeros(cls, spec: GridSpec, halo: int = DEFAULT_HALO) -> "ScalarField":
        h = _checked_halo(halo)
        return cls(np.zeros((spec.nx + 2 * h, spec.ny + 2 * h)), h)

    @property
    def nx(self) -> int:
        return self.values.shape[0] - 2 * self.halo

    @property
    def ny(self) -> int:
        return self.values.shape[1] - 2 * self.halo

    @property
    def interior(self) -> np.ndarray:
        h = self.halo
        return self.values[h:-h, h:-h]

    def copy(self) -> "ScalarField":
        return ScalarField(self.values.copy(), self.halo)


@dataclass
class VectorField:
    """Face-centred vector components on the staggered (Arakawa-C) positions."""

    comp_x: np.ndarray
    comp_y: np.ndarray
    halo: int = DEFAULT_HALO

    @classmethod
    def zeros(cls, spec: GridSpec, halo: int = DEFAULT_HALO) -> "VectorField":
        h = _checked_halo(halo)
        cx = np.zeros((spec.nx + 1 + 2 * h, spec.ny + 2 * h))
        cy = np.zeros((spec.nx + 2 * h, spec.ny + 1 + 2 * h))
        return cls(cx, cy, h)

    @property
    def interior_x(self) -> np.ndarray:
        h = self.halo
        return self.comp_x[h:-h, h:-h]  # (nx + 1, ny)

    @property
    def interior_y(self) -> np.ndarray:
        h = self.halo
        return self.comp_y[h:-h, h:-h]  # (nx, ny + 1)

    def copy(self) -> "VectorField":
        return VectorField(self.comp_x.copy(), self.comp_y.copy(), self.halo)


def _checked_halo(halo: int) -> int:
    if int(halo) != halo or halo < 2:
        raise ConfigurationError(f"halo width must be an integer >= 2, got {halo}")
    return int(halo)


def make_grid(spec: GridSpec, halo: int = DEFAULT_HALO) -> tuple[ScalarField, VectorField]:
    """Allocate a zeroed scalar/vector field pair with consistent shapes."""
    return ScalarField.zeros(spec, halo), VectorField.zeros(spec, halo)


def fill_halos_scalar(fld: ScalarField) -> ScalarField:
    """Fill scalar halos by linear extrapolation from the two nearest interior cells.

    Extrapolation runs dimension by dimension (x first, then y, so corner
    halos pick up the already-extrapolated columns).  Negative extrapolated
    values are clipped to zero to keep the field sign-preserving.  The fill
    is idempotent and runs in place; the field is returned for chaining.
    """
    v = fld.values
    h = fld.halo
    for axis in (0, 1):
        lo0, lo1 = (v[h], v[h + 1]) if axis == 0 else (v[:, h], v[:, h + 1])
        hi0, hi1 = (v[-h - 1], v[-h - 2]) if axis == 0 else (v[:, -h - 1], v[:, -h - 2])
        # walk outward along the line through the two edge cells; the
        # incremental form keeps constant fields bit-exact
        lo, hi = lo0.copy(), hi0.copy()
        lo_slope, hi_slope = lo0 - lo1, hi0 - hi1
        for layer in range(1, h + 1):
            lo += lo_slope
            hi += hi_slope
            lo_clipped = np.maximum(lo, 0.0)
            hi_clipped = np.maximum(hi, 0.0)
            if axis == 0:
                v[h - layer] = lo_clipped
                v[-h - 1 + layer] = hi_clipped
            else:
                v[:, h - layer] = lo_clipped
                v[:, -h - 1 + layer] = hi_clipped
    return fld


def fill_halos_vector(fld: VectorField) -> VectorField:
    """Fill vector halos by zeroth-order (constant) extension of the nearest face.

    Interior faces are never touched.  In place; returns the field.
    """
    for comp in (fld.comp_x, fld.comp_y):
        h = fld.halo
        comp[:h, :] = comp[h, :]
        comp[-h:, :] = comp[-h - 1, :]
        comp[:, :h] = comp[:, h][:, None]
        comp[:, -h:] = comp[:, -h - 1][:, None]
    return fld
