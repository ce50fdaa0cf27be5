"""Solid-body-translation benchmarks for the transport core.

A periodised Gaussian pulse is advected around the unit torus by a constant
Courant field and compared against the exactly translated profile.  Used by
the convergence CLI command and by the scheme-property tests.

The periodic wrap fills below belong to this benchmark/test harness only;
valuations always use the production extrapolation and constant-extension
fills from :mod:`asianpde.grid`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .advection import SolverOptions, mpdata_step
from .grid import DEFAULT_HALO, GridSpec, ScalarField, VectorField

DEFAULT_COURANT = (0.35, 0.35)
DEFAULT_WIDTH = 0.1
DEFAULT_CENTRE = (0.5, 0.5)


def periodic_fill_scalar(fld: ScalarField) -> ScalarField:
    """Wrap scalar halos around the torus (benchmark/test fill, not production)."""
    v, h, nx, ny = fld.values, fld.halo, fld.nx, fld.ny
    v[:h, :] = v[nx:nx + h, :]
    v[nx + h:, :] = v[h:2 * h, :]
    v[:, :h] = v[:, ny:ny + h]
    v[:, ny + h:] = v[:, h:2 * h]
    return fld


def periodic_fill_vector(fld: VectorField) -> VectorField:
    """Wrap face components with the interior period in each axis.

    The first and last interior face columns coincide on the torus; the
    first one wins so that boundary fluxes telescope exactly.
    """
    h = fld.halo
    cx, cy = fld.comp_x, fld.comp_y
    nx, ny = cy.shape[0] - 2 * h, cx.shape[1] - 2 * h
    cx[h + nx, :] = cx[h, :]
    cx[:h, :] = cx[nx:nx + h, :]
    cx[h + nx + 1:, :] = cx[h + 1:2 * h + 1, :]
    cx[:, :h] = cx[:, ny:ny + h]
    cx[:, ny + h:] = cx[:, h:2 * h]
    cy[:, h + ny] = cy[:, h]
    cy[:, :h] = cy[:, ny:ny + h]
    cy[:, h + ny + 1:] = cy[:, h + 1:2 * h + 1]
    cy[:h, :] = cy[nx:nx + h, :]
    cy[nx + h:, :] = cy[h:2 * h, :]
    return fld


PERIODIC_BOUNDARY = (periodic_fill_scalar, periodic_fill_vector)


def unit_square(n: int) -> GridSpec:
    return GridSpec(0.0, 1.0, 0.0, 1.0, n, n)


def gaussian_values(spec: GridSpec, centre, width: float) -> np.ndarray:
    """Periodised Gaussian (sum over the nearest images), smooth on the torus."""
    out = np.zeros((spec.nx, spec.ny))
    for mx in (-1.0, 0.0, 1.0):
        x = spec.x_centres[:, None] - centre[0] - mx
        for my in (-1.0, 0.0, 1.0):
            y = spec.y_centres[None, :] - centre[1] - my
            out += np.exp(-(x**2 + y**2) / (2.0 * width**2))
    return out


def gaussian_field(
    spec: GridSpec, centre=DEFAULT_CENTRE, width: float = DEFAULT_WIDTH, halo: int = DEFAULT_HALO
) -> ScalarField:
    fld = ScalarField.zeros(spec, halo)
    fld.interior[:] = gaussian_values(spec, centre, width)
    return fld


def constant_courant(spec: GridSpec, cx: float, cy: float, halo: int = DEFAULT_HALO) -> VectorField:
    fld = VectorField.zeros(spec, halo)
    fld.comp_x[:] = cx
    fld.comp_y[:] = cy
    return fld


def l2_error(numeric: np.ndarray, exact: np.ndarray, spec: GridSpec) -> float:
    return float(np.sqrt(np.sum((numeric - exact) ** 2) * spec.dx * spec.dy))


@dataclass(frozen=True)
class TranslationResult:
    n: int
    dx: float
    error: float
    n_steps: int


def run_translation(
    n: int,
    opts: SolverOptions,
    courant=DEFAULT_COURANT,
    width: float = DEFAULT_WIDTH,
    displacement: float = 0.25,
    boundary=PERIODIC_BOUNDARY,
    step=None,
) -> TranslationResult:
    """Advect a Gaussian by ~``displacement`` at fixed Courant number.

    The step count scales with resolution so the Courant number stays fixed
    across refinement levels; the analytic solution is the initial profile
    shifted by the exact accumulated displacement.  ``step`` overrides the
    per-step update (same signature as :func:`mpdata_step`), which lets the
    dimensionally split composition reuse this harness.
    """
    spec = unit_square(n)
    c_lead = max(abs(courant[0]), abs(courant[1]))
    n_steps = max(1, round(displacement * n / c_lead)) if c_lead > 0 else 1
    psi = gaussian_field(spec, width=width)
    vec = constant_courant(spec, courant[0], courant[1])
    advance = step or mpdata_step
    for _ in range(n_steps):
        psi = advance(psi, vec, opts, boundary=boundary)
    centre = (
        (DEFAULT_CENTRE[0] + n_steps * courant[0] * spec.dx) % 1.0,
        (DEFAULT_CENTRE[1] + n_steps * courant[1] * spec.dy) % 1.0,
    )
    exact = gaussian_values(spec, centre, width)
    return TranslationResult(n, spec.dx, l2_error(psi.interior, exact, spec), n_steps)


@dataclass(frozen=True)
class ConvergenceLevel:
    n: int
    dx: float
    error: float
    order: float | None  # pairwise estimate vs the previous level


def convergence_study(
    base_n: int,
    levels: int,
    opts: SolverOptions,
    courant=DEFAULT_COURANT,
    width: float = DEFAULT_WIDTH,
) -> list[ConvergenceLevel]:
    """Translation errors at ``levels`` successively doubled resolutions."""
    out: list[ConvergenceLevel] = []
    for lvl in range(levels):
        res = run_translation(base_n * 2**lvl, opts, courant=courant, width=width)
        order = None
        if out and res.error > 0 and out[-1].error > 0:
            order = float(np.log2(out[-1].error / res.error))
        out.append(ConvergenceLevel(res.n, res.dx, res.error, order))
    return out


def observed_order(levels: list[ConvergenceLevel]) -> float:
    """Least-squares slope of log(error) against log(dx)."""
    log_dx = np.log([lvl.dx for lvl in levels])
    log_err = np.log([lvl.error for lvl in levels])
    return float(np.polyfit(log_dx, log_err, 1)[0])


def split_mpdata_step(
    psi: ScalarField, courant: VectorField, opts: SolverOptions, boundary=None
) -> ScalarField:
    """Dimensionally split composition: a 1D x pass followed by a 1D y pass.

    Comparison baseline for the unsplit two-dimensional step; each pass runs
    the full iterative scheme with the transverse component zeroed.
    """
    x_only = VectorField(courant.comp_x.copy(), np.zeros_like(courant.comp_y), courant.halo)
    y_only = VectorField(np.zeros_like(courant.comp_x), courant.comp_y.copy(), courant.halo)
    out = mpdata_step(psi, x_only, opts, boundary=boundary)
    return mpdata_step(out, y_only, opts, boundary=boundary)
