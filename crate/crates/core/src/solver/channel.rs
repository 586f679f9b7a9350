//! Semi-discrete right-hand side on the 2D channel (periodic in `x`,
//! walls at `y = 0` and `y = H`).

use super::bc::{pad_channel, Padded2};
use super::flux::{rusanov, slope, sound_speed};
use super::{SolverConfig, Tendency};
use crate::grid::Grid;
use crate::state::FluidState;
use crate::viscosity::ViscosityLaw;

struct PaddedState {
    rho: Padded2,
    mx: Padded2,
    my: Padded2,
}

impl PaddedState {
    fn u(&self, ix: isize, iy: isize, floor: f64) -> [f64; 2] {
        let d = self.rho.at(ix, iy).max(floor);
        [self.mx.at(ix, iy) / d, self.my.at(ix, iy) / d]
    }
}

pub fn rhs(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> (Tendency, u64) {
    let (nx, ny) = (grid.nx, grid.ny);
    let (dx, dy) = (grid.dx, grid.dy);
    let (pr, pmx, pmy) = pad_channel(grid, &state.rho, &state.mx, &state.my, cfg.wall_bc);
    let p = PaddedState {
        rho: pr,
        mx: pmx,
        my: pmy,
    };

    let mut d_rho = vec![0.0; nx * ny];
    let mut d_mx = vec![0.0; nx * ny];
    let mut d_my = vec![0.0; nx * ny];

    // x-sweep: normal momentum mx, transverse my.
    for iy in 0..ny as isize {
        for k in 0..=nx {
            // Face k between cells k-1 and k of this row.
            let f = x_face_flux(&p, cfg, k as isize, iy);
            if k > 0 {
                let c = grid.index(k - 1, iy as usize);
                d_rho[c] -= f[0] / dx;
                d_mx[c] -= f[1] / dx;
                d_my[c] -= f[2] / dx;
            }
            if k < nx {
                let c = grid.index(k, iy as usize);
                d_rho[c] += f[0] / dx;
                d_mx[c] += f[1] / dx;
                d_my[c] += f[2] / dx;
            }
        }
    }
    // y-sweep: normal momentum my, transverse mx.
    for ix in 0..nx as isize {
        for k in 0..=ny {
            let f = y_face_flux(&p, cfg, ix, k as isize);
            if k > 0 {
                let c = grid.index(ix as usize, k - 1);
                d_rho[c] -= f[0] / dy;
                d_my[c] -= f[1] / dy;
                d_mx[c] -= f[2] / dy;
            }
            if k < ny {
                let c = grid.index(ix as usize, k);
                d_rho[c] += f[0] / dy;
                d_my[c] += f[1] / dy;
                d_mx[c] += f[2] / dy;
            }
        }
    }

    // Viscous stress divergence.
    let mut violations = 0;
    if cfg.eps > 0.0 {
        violations = add_viscous(grid, &p, law, cfg, &mut d_mx, &mut d_my);
    }

    // Drag source.
    if cfg.r1 > 0.0 {
        for c in 0..nx * ny {
            let d = state.rho[c].max(cfg.rho_floor);
            let u = [state.mx[c] / d, state.my[c] / d];
            let speed = (u[0] * u[0] + u[1] * u[1]).sqrt();
            d_mx[c] -= cfg.r1 * state.rho[c] * speed * u[0];
            d_my[c] -= cfg.r1 * state.rho[c] * speed * u[1];
        }
    }

    (Tendency { d_rho, d_mx, d_my }, violations)
}

fn muscl_state(p: &Padded2, recon: super::flux::Reconstruction, c: [isize; 2], dir: usize, side: f64) -> f64 {
    let (lo, hi) = if dir == 0 {
        (p.at(c[0] - 1, c[1]), p.at(c[0] + 1, c[1]))
    } else {
        (p.at(c[0], c[1] - 1), p.at(c[0], c[1] + 1))
    };
    p.at(c[0], c[1]) + side * 0.5 * slope(recon, lo, p.at(c[0], c[1]), hi)
}

/// Returns `(mass, normal momentum, transverse momentum)` flux at the
/// x-face between `(k-1, iy)` and `(k, iy)`.
fn x_face_flux(p: &PaddedState, cfg: &SolverConfig, k: isize, iy: isize) -> [f64; 3] {
    let lc = [k - 1, iy];
    let rc = [k, iy];
    let r = cfg.reconstruction;
    let left = [
        muscl_state(&p.rho, r, lc, 0, 1.0).max(cfg.rho_floor),
        muscl_state(&p.mx, r, lc, 0, 1.0),
        muscl_state(&p.my, r, lc, 0, 1.0),
    ];
    let right = [
        muscl_state(&p.rho, r, rc, 0, -1.0).max(cfg.rho_floor),
        muscl_state(&p.mx, r, rc, 0, -1.0),
        muscl_state(&p.my, r, rc, 0, -1.0),
    ];
    let (f, _) = rusanov(cfg.gas, cfg.rho_floor, left, right);
    f
}

/// Same for the y-face between `(ix, k-1)` and `(ix, k)`; normal = `my`.
fn y_face_flux(p: &PaddedState, cfg: &SolverConfig, ix: isize, k: isize) -> [f64; 3] {
    let lc = [ix, k - 1];
    let rc = [ix, k];
    let r = cfg.reconstruction;
    let left = [
        muscl_state(&p.rho, r, lc, 1, 1.0).max(cfg.rho_floor),
        muscl_state(&p.my, r, lc, 1, 1.0),
        muscl_state(&p.mx, r, lc, 1, 1.0),
    ];
    let right = [
        muscl_state(&p.rho, r, rc, 1, -1.0).max(cfg.rho_floor),
        muscl_state(&p.my, r, rc, 1, -1.0),
        muscl_state(&p.mx, r, rc, 1, -1.0),
    ];
    let (f, _) = rusanov(cfg.gas, cfg.rho_floor, left, right);
    f
}

/// Adds `eps [ div(2 mu D(u)) + grad(lambda div u) ]` via face-centered
/// stress evaluations. Returns the dissipation-bound violation count.
fn add_viscous(
    grid: &Grid,
    p: &PaddedState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
    d_mx: &mut [f64],
    d_my: &mut [f64],
) -> u64 {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let (dx, dy) = (grid.dx, grid.dy);
    let fl = cfg.rho_floor;
    let mut violations = 0;

    // Centered cell derivatives on the first ghost ring, used for the
    // averaged cross terms at faces.
    let dudy = |ix: isize, iy: isize| (p.u(ix, iy + 1, fl)[0] - p.u(ix, iy - 1, fl)[0]) / (2.0 * dy);
    let dvdy = |ix: isize, iy: isize| (p.u(ix, iy + 1, fl)[1] - p.u(ix, iy - 1, fl)[1]) / (2.0 * dy);
    let dudx = |ix: isize, iy: isize| (p.u(ix + 1, iy, fl)[0] - p.u(ix - 1, iy, fl)[0]) / (2.0 * dx);
    let dvdx = |ix: isize, iy: isize| (p.u(ix + 1, iy, fl)[1] - p.u(ix - 1, iy, fl)[1]) / (2.0 * dx);

    let mut check = |mu_f: f64, lam_f: f64, d2: f64, div: f64| {
        if d2 > 0.0 && 2.0 * mu_f * d2 + lam_f * div * div < law.nu * mu_f * d2 {
            debug_assert!(
                false,
                "dissipation lower bound violated: mu = {mu_f}, lambda = {lam_f}"
            );
            violations += 1;
        }
    };

    // x-faces: face k of a row sits between cells (k-1, iy) and (k, iy).
    for iy in 0..ny {
        for k in 0..=nx {
            let (l, r) = ([k - 1, iy], [k, iy]);
            let ul = p.u(l[0], l[1], fl);
            let ur = p.u(r[0], r[1], fl);
            let ddx_u = (ur[0] - ul[0]) / dx;
            let ddx_v = (ur[1] - ul[1]) / dx;
            let ddy_u = 0.5 * (dudy(l[0], l[1]) + dudy(r[0], r[1]));
            let ddy_v = 0.5 * (dvdy(l[0], l[1]) + dvdy(r[0], r[1]));
            let mu_f = 0.5 * (law.mu(p.rho.at(l[0], l[1])) + law.mu(p.rho.at(r[0], r[1])));
            let lam_f =
                0.5 * (law.lambda(p.rho.at(l[0], l[1])) + law.lambda(p.rho.at(r[0], r[1])));
            let div = ddx_u + ddy_v;
            let dxy = 0.5 * (ddy_u + ddx_v);
            check(mu_f, lam_f, ddx_u * ddx_u + ddy_v * ddy_v + 2.0 * dxy * dxy, div);
            let txx = 2.0 * mu_f * ddx_u + lam_f * div;
            let txy = mu_f * (ddy_u + ddx_v);
            // Stress divergence: + (tau_right - tau_left) / dx.
            if k > 0 {
                let c = grid.index((k - 1) as usize, iy as usize);
                d_mx[c] += cfg.eps * txx / dx;
                d_my[c] += cfg.eps * txy / dx;
            }
            if k < nx {
                let c = grid.index(k as usize, iy as usize);
                d_mx[c] -= cfg.eps * txx / dx;
                d_my[c] -= cfg.eps * txy / dx;
            }
        }
    }
    // y-faces.
    for ix in 0..nx {
        for k in 0..=ny {
            let (b, t) = ([ix, k - 1], [ix, k]);
            let ub = p.u(b[0], b[1], fl);
            let ut = p.u(t[0], t[1], fl);
            let ddy_u = (ut[0] - ub[0]) / dy;
            let ddy_v = (ut[1] - ub[1]) / dy;
            let ddx_u = 0.5 * (dudx(b[0], b[1]) + dudx(t[0], t[1]));
            let ddx_v = 0.5 * (dvdx(b[0], b[1]) + dvdx(t[0], t[1]));
            let mu_f = 0.5 * (law.mu(p.rho.at(b[0], b[1])) + law.mu(p.rho.at(t[0], t[1])));
            let lam_f =
                0.5 * (law.lambda(p.rho.at(b[0], b[1])) + law.lambda(p.rho.at(t[0], t[1])));
            let div = ddx_u + ddy_v;
            let dxy = 0.5 * (ddy_u + ddx_v);
            check(mu_f, lam_f, ddx_u * ddx_u + ddy_v * ddy_v + 2.0 * dxy * dxy, div);
            let tyy = 2.0 * mu_f * ddy_v + lam_f * div;
            let txy = mu_f * (ddy_u + ddx_v);
            if k > 0 {
                let c = grid.index(ix as usize, (k - 1) as usize);
                d_my[c] += cfg.eps * tyy / dy;
                d_mx[c] += cfg.eps * txy / dy;
            }
            if k < ny {
                let c = grid.index(ix as usize, k as usize);
                d_my[c] -= cfg.eps * tyy / dy;
                d_mx[c] -= cfg.eps * txy / dy;
            }
        }
    }
    violations
}

/// Dissipation rates with cell-centered symmetric gradients (the slab path
/// is face-exact; the channel uses a consistent cell quadrature).
pub fn dissipation_rates(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> (f64, f64) {
    let vol = grid.cell_volume();
    let mut visc = 0.0;
    if cfg.eps > 0.0 {
        let (pr, pmx, pmy) = pad_channel(grid, &state.rho, &state.mx, &state.my, cfg.wall_bc);
        let p = PaddedState {
            rho: pr,
            mx: pmx,
            my: pmy,
        };
        let fl = cfg.rho_floor;
        for iy in 0..grid.ny as isize {
            for ix in 0..grid.nx as isize {
                let dudx = (p.u(ix + 1, iy, fl)[0] - p.u(ix - 1, iy, fl)[0]) / (2.0 * grid.dx);
                let dvdx = (p.u(ix + 1, iy, fl)[1] - p.u(ix - 1, iy, fl)[1]) / (2.0 * grid.dx);
                let dudy = (p.u(ix, iy + 1, fl)[0] - p.u(ix, iy - 1, fl)[0]) / (2.0 * grid.dy);
                let dvdy = (p.u(ix, iy + 1, fl)[1] - p.u(ix, iy - 1, fl)[1]) / (2.0 * grid.dy);
                let dxy = 0.5 * (dudy + dvdx);
                let d2 = dudx * dudx + dvdy * dvdy + 2.0 * dxy * dxy;
                let c = grid.index(ix as usize, iy as usize);
                visc += cfg.eps * law.nu * law.mu(state.rho[c]) * d2 * vol;
            }
        }
    }
    let mut drag = 0.0;
    if cfg.r1 > 0.0 {
        for c in 0..grid.n_cells() {
            let d = state.rho[c].max(cfg.rho_floor);
            let u2 = (state.mx[c] * state.mx[c] + state.my[c] * state.my[c]) / (d * d);
            drag += cfg.r1 * state.rho[c] * u2.powf(1.5) * vol;
        }
    }
    (visc, drag)
}

pub fn max_dt(grid: &Grid, state: &FluidState, law: &ViscosityLaw, cfg: &SolverConfig) -> f64 {
    let mut dt = f64::INFINITY;
    for c in 0..grid.n_cells() {
        let rho = state.rho[c].max(cfg.rho_floor);
        let u = (state.mx[c] / rho).abs();
        let v = (state.my[c] / rho).abs();
        let cs = sound_speed(cfg.gas, rho);
        let rate = (u + cs) / grid.dx + (v + cs) / grid.dy;
        if rate > 0.0 {
            dt = dt.min(cfg.cfl / rate);
        }
        if cfg.eps > 0.0 {
            let coeff = 2.0 * law.mu(state.rho[c]) + law.lambda(state.rho[c]).abs();
            if coeff > 0.0 {
                let d2 = grid.min_spacing() * grid.min_spacing();
                dt = dt.min(0.25 * rho * d2 / (cfg.eps * coeff));
            }
        }
    }
    dt
}

pub fn gradient_indicator(grid: &Grid, state: &FluidState, cfg: &SolverConfig) -> f64 {
    let (pr, pmx, pmy) = pad_channel(grid, &state.rho, &state.mx, &state.my, cfg.wall_bc);
    let p = PaddedState {
        rho: pr,
        mx: pmx,
        my: pmy,
    };
    let fl = cfg.rho_floor;
    let mut m = 0.0f64;
    for iy in 0..grid.ny as isize {
        for ix in 0..grid.nx as isize {
            let u0 = p.u(ix, iy, fl);
            for (jx, jy) in [(ix + 1, iy), (ix, iy + 1)] {
                let u1 = p.u(jx, jy, fl);
                m = m.max((u1[0] - u0[0]).abs()).max((u1[1] - u0[1]).abs());
            }
        }
    }
    m
}
