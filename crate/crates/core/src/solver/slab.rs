//! Semi-discrete right-hand side on the 1D slab.

use super::bc::{pad_slab, Padded1};
use super::flux::{rusanov, slope, sound_speed, Reconstruction};
use super::{SolverConfig, Tendency};
use crate::grid::Grid;
use crate::state::FluidState;
use crate::viscosity::ViscosityLaw;

/// Convective + viscous + drag tendencies. Returns the tendency and the
/// number of faces violating the pointwise dissipation lower bound (only
/// counted when `cfg.check_dissipation_sign` is set; the bound is also a
/// debug assertion).
pub fn rhs(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> (Tendency, u64) {
    let n = grid.nx;
    let dx = grid.dx;
    let (pr, pm) = pad_slab(grid, &state.rho, &state.mx);

    let mut d_rho = vec![0.0; n];
    let mut d_mx = vec![0.0; n];

    // Limited slopes on the padded cells adjacent to any face.
    let mut s_rho = vec![0.0; n + 2];
    let mut s_mx = vec![0.0; n + 2];
    for p in 0..n + 2 {
        let i = p as isize - 1;
        s_rho[p] = slope(cfg.reconstruction, pr.at(i - 1), pr.at(i), pr.at(i + 1));
        s_mx[p] = slope(cfg.reconstruction, pm.at(i - 1), pm.at(i), pm.at(i + 1));
    }

    // Convective fluxes at the n + 1 faces; face k sits between cells
    // k - 1 and k.
    let recon = |q: &Padded1, s: &[f64], cell: isize, side: f64| -> f64 {
        q.at(cell) + side * 0.5 * s[(cell + 1) as usize]
    };
    let mut flux = vec![[0.0f64; 3]; n + 1];
    for k in 0..=n {
        let lc = k as isize - 1;
        let rc = k as isize;
        let left = [
            recon(&pr, &s_rho, lc, 1.0).max(cfg.rho_floor),
            recon(&pm, &s_mx, lc, 1.0),
            0.0,
        ];
        let right = [
            recon(&pr, &s_rho, rc, -1.0).max(cfg.rho_floor),
            recon(&pm, &s_mx, rc, -1.0),
            0.0,
        ];
        let (f, _) = rusanov(cfg.gas, cfg.rho_floor, left, right);
        flux[k] = f;
    }
    for i in 0..n {
        d_rho[i] = -(flux[i + 1][0] - flux[i][0]) / dx;
        d_mx[i] = -(flux[i + 1][1] - flux[i][1]) / dx;
    }

    // Viscous term: d/dx ( (2 mu + lambda) du/dx ), face-centered.
    let mut violations = 0;
    if cfg.eps > 0.0 {
        let u = |i: isize| pm.at(i) / pr.at(i).max(cfg.rho_floor);
        let mut vflux = vec![0.0; n + 1];
        for k in 0..=n {
            let (lc, rc) = (k as isize - 1, k as isize);
            let du = (u(rc) - u(lc)) / dx;
            let mu_f = 0.5 * (law.mu(pr.at(lc)) + law.mu(pr.at(rc)));
            let lam_f = 0.5 * (law.lambda(pr.at(lc)) + law.lambda(pr.at(rc)));
            if du != 0.0 && !dissipation_bound_holds(mu_f, lam_f, law.nu) {
                debug_assert!(
                    false,
                    "dissipation lower bound violated at face {k}: mu = {mu_f}, lambda = {lam_f}"
                );
                violations += 1;
            }
            vflux[k] = cfg.eps * (2.0 * mu_f + lam_f) * du;
        }
        for i in 0..n {
            d_mx[i] += (vflux[i + 1] - vflux[i]) / dx;
        }
    }

    // Drag source, pointwise.
    if cfg.r1 > 0.0 {
        for i in 0..n {
            let ui = state.mx[i] / state.rho[i].max(cfg.rho_floor);
            d_mx[i] -= cfg.r1 * state.rho[i] * ui.abs() * ui;
        }
    }

    (
        Tendency {
            d_rho,
            d_mx,
            d_my: vec![0.0; n],
        },
        violations,
    )
}

/// In 1D the deviatoric inequality collapses to `(2 - nu) mu + lambda >= 0`:
/// `|D|^2 = |div u|^2 = (du)^2`.
pub fn dissipation_bound_holds(mu_f: f64, lam_f: f64, nu: f64) -> bool {
    2.0 * mu_f + lam_f >= nu * mu_f
}

/// Instantaneous dissipation rates `(eps nu int mu |D|^2, r1 int rho |u|^3)`
/// with the same face-centered gradients the viscous flux uses. Wall faces
/// carry half a cell of measure.
pub fn dissipation_rates(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> (f64, f64) {
    let n = grid.nx;
    let dx = grid.dx;
    let mut visc = 0.0;
    if cfg.eps > 0.0 {
        let (pr, pm) = pad_slab(grid, &state.rho, &state.mx);
        let u = |i: isize| pm.at(i) / pr.at(i).max(cfg.rho_floor);
        for k in 0..=n {
            let (lc, rc) = (k as isize - 1, k as isize);
            let du = (u(rc) - u(lc)) / dx;
            let mu_f = 0.5 * (law.mu(pr.at(lc)) + law.mu(pr.at(rc)));
            let w = if k == 0 || k == n { 0.5 * dx } else { dx };
            visc += cfg.eps * law.nu * mu_f * du * du * w;
        }
    }
    let mut drag = 0.0;
    if cfg.r1 > 0.0 {
        for i in 0..n {
            let ui = (state.mx[i] / state.rho[i].max(cfg.rho_floor)).abs();
            drag += cfg.r1 * state.rho[i] * ui * ui * ui * dx;
        }
    }
    (visc, drag)
}

/// Largest stable time step: CFL on the acoustic bound plus the explicit
/// diffusion constraint `eps (2 mu + |lambda|) dt / (rho dx^2) <= 1/2`.
pub fn max_dt(grid: &Grid, state: &FluidState, law: &ViscosityLaw, cfg: &SolverConfig) -> f64 {
    let mut dt = f64::INFINITY;
    for i in 0..grid.nx {
        let rho = state.rho[i].max(cfg.rho_floor);
        let u = (state.mx[i] / rho).abs();
        let s = u + sound_speed(cfg.gas, rho);
        if s > 0.0 {
            dt = dt.min(cfg.cfl * grid.dx / s);
        }
        if cfg.eps > 0.0 {
            let coeff = 2.0 * law.mu(state.rho[i]) + law.lambda(state.rho[i]).abs();
            if coeff > 0.0 {
                dt = dt.min(0.5 * rho * grid.dx * grid.dx / (cfg.eps * coeff));
            }
        }
    }
    dt
}

/// Gradient blow-up proxy `max |u_{i+1} - u_i|` over all faces.
pub fn gradient_indicator(grid: &Grid, state: &FluidState, cfg: &SolverConfig) -> f64 {
    let (pr, pm) = pad_slab(grid, &state.rho, &state.mx);
    let u = |i: isize| pm.at(i) / pr.at(i).max(cfg.rho_floor);
    let mut m = 0.0f64;
    for k in 0..=grid.nx {
        m = m.max((u(k as isize) - u(k as isize - 1)).abs());
    }
    m
}
