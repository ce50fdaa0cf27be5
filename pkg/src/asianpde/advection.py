"""MPDATA advection core.

One transport step consists of a donor-cell (UPWIND) pass with the physical
Courant field followed by corrective UPWIND passes with an analytically
derived antidiffusive Courant field that cancels the leading-order numerical
diffusion of the previous pass.  An optional flux-corrected-transport (FCT)
limiter keeps the corrective passes from creating new local extrema.

All operations assume the halos of their inputs have been filled; the step
orchestrator refills halos before every pass so the halo requirement stays
independent of the iteration count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, StabilityError
from .grid import ScalarField, VectorField, fill_halos_scalar, fill_halos_vector

_COURANT_TOL = 1e-12  # |C| = 1 exactly (unit-Courant translation) must pass

DEFAULT_EPSILON = 1e-15


@dataclass(frozen=True)
class SolverOptions:
    """Transport-step settings; n_iters=1 is pure UPWIND."""

    n_iters: int = 2
    nonoscillatory: bool = True
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.n_iters < 1:
            raise ConfigurationError(f"n_iters must be >= 1, got {self.n_iters}")
        if not self.epsilon > 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class StabilityReport:
    ok: bool
    max_abs_courant_x: float
    max_abs_courant_y: float
    diffusion_number: float
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()


def check_stability(courant: VectorField, nu: float, dt: float, dx: float) -> StabilityReport:
    """Check the advective (|C| <= 1) and diffusive (2|nu| dt / dx^2 <= 1/2) criteria.

    The half-Courant guideline for divergent flow is reported as a warning
    only: the valuation flow is divergence-free in y and the x component is
    covered by the diffusive criterion.
    """
    max_cx = float(np.max(np.abs(courant.interior_x)))
    max_cy = float(np.max(np.abs(courant.interior_y)))
    diffusion = 2.0 * abs(nu) * abs(dt) / dx**2
    violations = []
    if max_cx > 1.0 + _COURANT_TOL:
        violations.append(f"advective criterion violated in x: max |C_x| = {max_cx:.6g} > 1")
    if max_cy > 1.0 + _COURANT_TOL:
        violations.append(f"advective criterion violated in y: max |C_y| = {max_cy:.6g} > 1")
    if diffusion > 0.5 + _COURANT_TOL:
        violations.append(
            f"diffusive criterion violated: 2|nu| dt / dx^2 = {diffusion:.6g} > 1/2"
        )
    warnings = ()
    if not violations and max(max_cx, max_cy) > 0.5:
        warnings = (
            f"max |C| = {max(max_cx, max_cy):.6g} exceeds the half-Courant guideline "
            "for divergent flow fields",
        )
    return StabilityReport(
        ok=not violations,
        max_abs_courant_x=max_cx,
        max_abs_courant_y=max_cy,
        diffusion_number=diffusion,
        violations=tuple(violations),
        warnings=warnings,
    )


def flux(psi_left, psi_right, courant):
    """Donor-cell flux: max(C, 0) * psi_left + min(C, 0) * psi_right."""
    return np.maximum(courant, 0.0) * psi_left + np.minimum(courant, 0.0) * psi_right


def _guarded_ratio(num: np.ndarray, den: np.ndarray, epsilon: float) -> np.ndarray:
    """num / den, or 0 where |den| < epsilon (vanishing-denominator guard)."""
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=np.abs(den) >= epsilon)
    return out


def factor_a(psi_here, psi_next, epsilon: float = DEFAULT_EPSILON):
    """First antidiffusive factor (psi_next - psi_here) / (psi_next + psi_here).

    Returns 0 where the denominator magnitude falls below ``epsilon``.
    Accepts scalars or arrays.
    """
    num = np.asarray(psi_next, dtype=float) - np.asarray(psi_here, dtype=float)
    den = np.asarray(psi_next, dtype=float) + np.asarray(psi_here, dtype=float)
    out = _guarded_ratio(num, den, epsilon)
    return float(out) if out.ndim == 0 else out


def factor_b(psi: ScalarField, i: int, j: int, d: int, epsilon: float = DEFAULT_EPSILON) -> float:
    """Cross-dimension antidiffusive factor at face (i+1/2, j) of dimension d.

    Half the difference of the two +1-offset transverse neighbour pairs and
    the two -1-offset ones, over their total; 0 on a vanishing denominator.
    Interior cell indices; halos must be filled.
    """
    h = psi.halo
    v = psi.values
    a, b = h + i, h + j
    if d == 0:
        up = v[a + 1, b + 1] + v[a, b + 1]
        dn = v[a + 1, b - 1] + v[a, b - 1]
    elif d == 1:
        up = v[a + 1, b + 1] + v[a + 1, b]
        dn = v[a - 1, b + 1] + v[a - 1, b]
    else:
        raise ConfigurationError(f"dimension must be 0 or 1, got {d}")
    den = up + dn
    if abs(den) < epsilon:
        return 0.0
    return 0.5 * (up - dn) / den


def transverse_mean_courant(courant: VectorField, i: int, j: int, d: int, q: int) -> float:
    """Mean of the four q-component faces surrounding face (i+1/2, j) of dimension d."""
    if {d, q} != {0, 1}:
        raise ConfigurationError(f"need distinct dimensions from (0, 1), got d={d}, q={q}")
    h = courant.halo
    a, b = h + i, h + j
    if d == 0:
        cy = courant.comp_y
        return 0.25 * (cy[a, b] + cy[a + 1, b] + cy[a, b + 1] + cy[a + 1, b + 1])
    cx = courant.comp_x
    return 0.25 * (cx[a, b] + cx[a + 1, b] + cx[a, b + 1] + cx[a + 1, b + 1])


def upwind_step(psi: ScalarField, courant: VectorField) -> ScalarField:
    """One donor-cell pass updating the interior; halos of both inputs must be filled.

    Raises :class:`StabilityError` when any interior |C| exceeds 1.
    """
    report = check_stability(courant, 0.0, 0.0, 1.0)
    if not report.ok:
        raise StabilityError(report)
    h = psi.halo
    nx, ny = psi.nx, psi.ny
    p = psi.values
    fx = flux(p[h - 1:h + nx, h:-h], p[h:h + nx + 1, h:-h], courant.interior_x)
    fy = flux(p[h:-h, h - 1:h + ny], p[h:-h, h:h + ny + 1], courant.interior_y)
    out = psi.copy()
    interior = out.interior
    interior -= (fx[1:, :] - fx[:-1, :]) + (fy[:, 1:] - fy[:, :-1])
    # the scheme is sign-preserving; clip only round-off-level undershoots
    np.maximum(interior, 0.0, out=interior)
    return out


def antidiffusive_courant(
    psi: ScalarField, courant: VectorField, opts: SolverOptions
) -> VectorField:
    """Antidiffusive Courant field from the modified-equation analysis.

    Per face of dimension d: |C| (1 - |C|) A - sum_{q != d} C Cbar_q B, with
    A and B the guarded psi ratios and Cbar the four-face transverse mean.
    Computed on the faces bounding the interior; halos of the result are left
    for the caller to fill.
    """
    h = psi.halo
    nx, ny = psi.nx, psi.ny
    eps = opts.epsilon
    p = psi.values
    cx_all, cy_all = courant.comp_x, courant.comp_y
    out = VectorField(np.zeros_like(cx_all), np.zeros_like(cy_all), h)

    # x faces: donor/receiver cell pairs along axis 0
    pl = p[h - 1:h + nx, h:-h]
    pr = p[h:h + nx + 1, h:-h]
    a_x = _guarded_ratio(pr - pl, pr + pl, eps)
    up = p[h - 1:h + nx, h + 1:h + ny + 1] + p[h:h + nx + 1, h + 1:h + ny + 1]
    dn = p[h - 1:h + nx, h - 1:h + ny - 1] + p[h:h + nx + 1, h - 1:h + ny - 1]
    b_x = 0.5 * _guarded_ratio(up - dn, up + dn, eps)
    cbar_y = 0.25 * (
        cy_all[h - 1:h + nx, h:h + ny]
        + cy_all[h:h + nx + 1, h:h + ny]
        + cy_all[h - 1:h + nx, h + 1:h + ny + 1]
        + cy_all[h:h + nx + 1, h + 1:h + ny + 1]
    )
    cx = courant.interior_x
    out.interior_x[:] = np.abs(cx) * (1.0 - np.abs(cx)) * a_x - cx * cbar_y * b_x

    # y faces: same formulas with the roles of the dimensions swapped
    pd = p[h:-h, h - 1:h + ny]
    pu = p[h:-h, h:h + ny + 1]
    a_y = _guarded_ratio(pu - pd, pu + pd, eps)
    up = p[h + 1:h + nx + 1, h - 1:h + ny] + p[h + 1:h + nx + 1, h:h + ny + 1]
    dn = p[h - 1:h + nx - 1, h - 1:h + ny] + p[h - 1:h + nx - 1, h:h + ny + 1]
    b_y = 0.5 * _guarded_ratio(up - dn, up + dn, eps)
    cbar_x = 0.25 * (
        cx_all[h:h + nx, h - 1:h + ny]
        + cx_all[h + 1:h + nx + 1, h - 1:h + ny]
        + cx_all[h:h + nx, h:h + ny + 1]
        + cx_all[h + 1:h + nx + 1, h:h + ny + 1]
    )
    cy = courant.interior_y
    out.interior_y[:] = np.abs(cy) * (1.0 - np.abs(cy)) * a_y - cy * cbar_x * b_y
    return out


def nonoscillatory_limit(
    psi_before: ScalarField,
    courant_corrective: VectorField,
    epsilon: float = DEFAULT_EPSILON,
) -> VectorField:
    """Scale corrective Courant numbers by FCT ratios.

    Guarantees that the subsequent UPWIND pass keeps every cell within the
    min/max of its face-neighbour stencil in ``psi_before`` (a subset of the
    3x3 neighbourhood).  Halos of both inputs must be filled; halos of the
    result are left for the caller.
    """
    h = psi_before.halo
    nx, ny = psi_before.nx, psi_before.ny
    p = psi_before.values

    # cells of the interior plus a one-cell ring (needed for the boundary faces)
    c0 = p[h - 1:h + nx + 1, h - 1:h + ny + 1]
    xm = p[h - 2:h + nx, h - 1:h + ny + 1]
    xp = p[h:h + nx + 2, h - 1:h + ny + 1]
    ym = p[h - 1:h + nx + 1, h - 2:h + ny]
    yp = p[h - 1:h + nx + 1, h:h + ny + 2]
    psi_max = np.maximum.reduce([c0, xm, xp, ym, yp])
    psi_min = np.minimum.reduce([c0, xm, xp, ym, yp])

    cpx = courant_corrective.comp_x[h - 1:h + nx + 2, h - 1:h + ny + 1]
    cpy = courant_corrective.comp_y[h - 1:h + nx + 1, h - 1:h + ny + 2]
    f_in = (
        np.maximum(cpx[:-1, :], 0.0) * xm
        - np.minimum(cpx[1:, :], 0.0) * xp
        + np.maximum(cpy[:, :-1], 0.0) * ym
        - np.minimum(cpy[:, 1:], 0.0) * yp
    )
    f_out = (
        np.maximum(cpx[1:, :], 0.0) - np.minimum(cpx[:-1, :], 0.0)
        + np.maximum(cpy[:, 1:], 0.0) - np.minimum(cpy[:, :-1], 0.0)
    ) * c0
    beta_up = (psi_max - c0) / (f_in + epsilon)
    beta_dn = (c0 - psi_min) / (f_out + epsilon)

    out = VectorField(
        np.zeros_like(courant_corrective.comp_x),
        np.zeros_like(courant_corrective.comp_y),
        h,
    )
    cpx_f = cpx[1:-1, 1:-1]  # faces bounding the interior, (nx + 1, ny)
    out.interior_x[:] = (
        np.maximum(cpx_f, 0.0)
        * np.minimum(1.0, np.minimum(beta_dn[:-1, 1:-1], beta_up[1:, 1:-1]))
        + np.minimum(cpx_f, 0.0)
        * np.minimum(1.0, np.minimum(beta_dn[1:, 1:-1], beta_up[:-1, 1:-1]))
    )
    cpy_f = cpy[1:-1, 1:-1]  # (nx, ny + 1)
    out.interior_y[:] = (
        np.maximum(cpy_f, 0.0)
        * np.minimum(1.0, np.minimum(beta_dn[1:-1, :-1], beta_up[1:-1, 1:]))
        + np.minimum(cpy_f, 0.0)
        * np.minimum(1.0, np.minimum(beta_dn[1:-1, 1:], beta_up[1:-1, :-1]))
    )
    return out


def mpdata_step(
    psi: ScalarField,
    courant: VectorField,
    opts: SolverOptions,
    boundary=None,
) -> ScalarField:
    """One full transport step: UPWIND plus ``n_iters - 1`` corrective passes.

    Halos are refilled before every pass.  ``boundary`` is an optional
    ``(fill_scalar, fill_vector)`` pair; the production extrapolation /
    constant-extension fills are used by default.  With ``n_iters=1`` the
    result is bit-identical to :func:`upwind_step` on a filled field.
    """
    fill_scalar, fill_vector = boundary or (fill_halos_scalar, fill_halos_vector)
    current = fill_vector(courant.copy())
    out = fill_scalar(psi.copy())
    out = upwind_step(out, current)
    for _ in range(opts.n_iters - 1):
        fill_scalar(out)
        corrective = antidiffusive_courant(out, current, opts)
        fill_vector(corrective)
        if opts.nonoscillatory:
            corrective = nonoscillatory_limit(out, corrective, opts.epsilon)
            fill_vector(corrective)
        out = upwind_step(out, corrective)
        current = corrective
    return out
