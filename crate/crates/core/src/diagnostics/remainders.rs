//! The signed remainder terms of the relative-energy inequality, their
//! sub-splits, and the upper-bound surrogates used to absorb the viscous
//! term.

use super::{grad_h_prime, pressure, s_mu, sym_frob2};
use crate::error::{Error, Result};
use crate::grid::Geometry;
use crate::layer::LayerProfile;
use crate::ops::{frob2, grad_vector};
use crate::state::Trajectory;
use crate::thermo::{pressure_prime, relative_entropy, GasLaw};
use crate::viscosity::{default_rho_samples, ViscosityLaw};

/// Cumulative-in-time remainder integrals at each stored snapshot.
#[derive(Debug, Clone)]
pub struct RemainderSeries {
    pub times: Vec<f64>,
    /// `R_1 ... R_7`, signed.
    pub r: [Vec<f64>; 7],
    /// The four pieces of the corrector transport term.
    pub r6_split: [Vec<f64>; 4],
    /// Strip decomposition of the third piece: `R_6^(c) = tilde + hat`.
    pub r6_tilde: Vec<f64>,
    pub r6_hat: Vec<f64>,
    /// Upper-bound surrogates of the viscous term (reference-gradient and
    /// corrector-gradient parts); `|R_7| <= tilde + hat`.
    pub r7_tilde: Vec<f64>,
    pub r7_hat: Vec<f64>,
    /// The pressure term written through the relative entropy; equals
    /// `R_2` identically.
    pub r2_entropy_route: Vec<f64>,
}

impl RemainderSeries {
    /// Final value of `R_{i+1}`.
    pub fn total(&self, i: usize) -> f64 {
        *self.r[i].last().unwrap()
    }
}

/// Instantaneous space integrals at one snapshot.
#[derive(Debug, Clone, Copy, Default)]
struct Instant {
    r: [f64; 7],
    r6: [f64; 4],
    r6_tilde: f64,
    r6_hat: f64,
    r7_tilde: f64,
    r7_hat: f64,
    r2_entropy: f64,
}

const FLOOR: f64 = 1e-10;

/// Evaluates `R_1 ... R_7` (space-time quadrature, trapezoid in time) for
/// a viscous trajectory against a reference trajectory on the same grid
/// and snapshot schedule, with the corrector fields of `layer`.
pub fn remainder_terms(
    ns: &Trajectory,
    euler: &Trajectory,
    layer: &LayerProfile,
    law: &ViscosityLaw,
    g: GasLaw,
    eps: f64,
    r1: f64,
) -> Result<RemainderSeries> {
    let grid = &ns.grid;
    if euler.grid.nx != grid.nx || euler.grid.ny != grid.ny {
        return Err(Error::Config("remainders need colocated trajectories".into()));
    }
    if ns.len() != euler.len() || ns.len() != layer.times.len() {
        return Err(Error::Config(
            "remainders need matching snapshot schedules (trajectories and layer)".into(),
        ));
    }
    if ns.len() < 2 {
        return Err(Error::Config("remainders need >= 2 snapshots".into()));
    }
    let times = ns.times();
    for (a, b) in times.iter().zip(euler.times()) {
        if (a - b).abs() > 1e-10 * a.abs().max(1.0) {
            return Err(Error::Config("snapshot times differ between trajectories".into()));
        }
    }

    // Constant of the viscous upper bound: |lambda| <= c2 mu plus the
    // trace contractions of the planar embedding.
    let c2 = fitted_c2(law);
    let rank = match grid.geometry {
        Geometry::Slab { .. } => 1.0,
        Geometry::Channel { .. } => 2.0,
    };
    let c7 = 2.0 + rank * c2;

    let n = grid.n_cells();
    let vol = grid.cell_volume();
    let dist: Vec<f64> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.wall_distance(ix, iy))
        .collect();
    let normal: Vec<[f64; 2]> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.nearest_wall_normal(ix, iy))
        .collect();

    let mut inst = Vec::with_capacity(ns.len());
    for k in 0..ns.len() {
        let s = &ns.states[k];
        let se = &euler.states[k];
        let u: Vec<[f64; 2]> = (0..n).map(|i| s.velocity(i, FLOOR)).collect();
        let ue = euler.velocity_field(k, FLOOR);
        let grad_ue = grad_vector(grid, &ue);
        let ghp = grad_h_prime(grid, &se.rho, g);
        let smu = if eps > 0.0 { Some(s_mu(s, law, grid)?) } else { None };

        let mut a = Instant::default();
        for i in 0..n {
            let rho = s.rho[i];
            let rho_e = se.rho[i];
            let vb = layer.v_bl[k][i];
            let ucor = layer.u_corrected[k][i];
            let dvdt = layer.dv_bl_dt[k][i];
            let gvb = &layer.grad_v_bl[k][i];
            let du_ue = [u[i][0] - ue[i][0], u[i][1] - ue[i][1]];
            let du_ucor = [ucor[0] - u[i][0], ucor[1] - u[i][1]];

            // R1: rho (((u - ue) . grad) ue) . (U - u)
            for c in 0..2 {
                let adv = du_ue[0] * grad_ue[i][c][0] + du_ue[1] * grad_ue[i][c][1];
                a.r[0] += rho * adv * du_ucor[c] * vol;
            }

            // R2: -div ue (p(rho) - p(rho_e) - p'(rho_e)(rho - rho_e)),
            // also written through the relative entropy.
            let div_ue = grad_ue[i][0][0] + grad_ue[i][1][1];
            let p_bregman =
                pressure(g, rho) - pressure(g, rho_e) - pressure_prime(g, rho_e) * (rho - rho_e);
            a.r[1] -= div_ue * p_bregman * vol;
            a.r2_entropy -=
                (g.gamma - 1.0) * div_ue * relative_entropy(g, rho, rho_e)? * vol;

            // R3: -(rho_e - rho) v_bl . grad H'(rho_e)
            a.r[2] -= (rho_e - rho) * (vb[0] * ghp[i][0] + vb[1] * ghp[i][1]) * vol;

            // R4: div v_bl (p(rho) - p(rho_e))
            let div_vb = gvb[0][0] + gvb[1][1];
            a.r[3] += div_vb * (pressure(g, rho) - pressure(g, rho_e)) * vol;

            // R5: r1 rho |u| u . U
            let speed = (u[i][0] * u[i][0] + u[i][1] * u[i][1]).sqrt();
            a.r[4] += r1 * rho * speed * (u[i][0] * ucor[0] + u[i][1] * ucor[1]) * vol;

            // R6: -rho (dv_bl/dt + (u . grad) v_bl) . (U - u)
            let mut transport = [0.0f64; 2];
            for c in 0..2 {
                transport[c] = u[i][0] * gvb[c][0] + u[i][1] * gvb[c][1];
            }
            for c in 0..2 {
                a.r[5] -= rho * (dvdt[c] + transport[c]) * du_ucor[c] * vol;
            }

            // The four pieces: U - u = (ue - u) - v_bl together with the
            // transport splitting.
            a.r6[0] += rho * (dvdt[0] * du_ue[0] + dvdt[1] * du_ue[1]) * vol;
            a.r6[1] += rho * (dvdt[0] * vb[0] + dvdt[1] * vb[1]) * vol;
            a.r6[2] -= rho * (transport[0] * ucor[0] + transport[1] * ucor[1]) * vol;
            let mut quad = 0.0;
            for c in 0..2 {
                for d in 0..2 {
                    quad += u[i][c] * u[i][d] * gvb[c][d];
                }
            }
            a.r6[3] += rho * quad * vol;

            // Strip split of the third piece.
            let z = layer.z[i];
            let zt = layer.z_tilde[i];
            let mut adv_ue = [0.0f64; 2];
            for c in 0..2 {
                adv_ue[c] = u[i][0] * grad_ue[i][c][0] + u[i][1] * grad_ue[i][c][1];
            }
            a.r6_tilde -= rho * z * (ucor[0] * adv_ue[0] + ucor[1] * adv_ue[1]) * vol;
            let un = u[i][0] * normal[i][0] + u[i][1] * normal[i][1];
            a.r6_hat +=
                rho * un / dist[i] * zt * (ucor[0] * ue[i][0] + ucor[1] * ue[i][1]) * vol;

            // R7: eps [2 sqrt(mu) S + (lambda/mu) tr(sqrt(mu) S) I] : grad U
            if let Some(smu) = &smu {
                let mu = law.mu(rho);
                let lam = law.lambda(rho);
                let sq = mu.sqrt();
                let a00 = sq * smu[i][0];
                let a01 = sq * smu[i][1];
                let a11 = sq * smu[i][2];
                let tr = a00 + a11;
                let s00 = 2.0 * a00 + (lam / mu) * tr;
                let s11 = 2.0 * a11 + (lam / mu) * tr;
                let s01 = 2.0 * a01;
                let gu = [
                    [grad_ue[i][0][0] - gvb[0][0], grad_ue[i][0][1] - gvb[0][1]],
                    [grad_ue[i][1][0] - gvb[1][0], grad_ue[i][1][1] - gvb[1][1]],
                ];
                a.r[6] += eps
                    * (s00 * gu[0][0] + s01 * 0.5 * (gu[0][1] + gu[1][0]) * 2.0
                        + s11 * gu[1][1])
                    * vol;
                let a_norm = sq * sym_frob2(&smu[i]).sqrt();
                a.r7_tilde += c7 * eps * a_norm * frob2(&grad_ue[i]).sqrt() * vol;
                a.r7_hat += c7 * eps * a_norm * frob2(gvb).sqrt() * vol;
            }
        }
        inst.push(a);
    }

    let cumulative = |f: &dyn Fn(&Instant) -> f64| -> Vec<f64> {
        let mut out = Vec::with_capacity(inst.len());
        let mut total = 0.0;
        out.push(0.0);
        for k in 1..inst.len() {
            total += 0.5 * (times[k] - times[k - 1]) * (f(&inst[k - 1]) + f(&inst[k]));
            out.push(total);
        }
        out
    };

    Ok(RemainderSeries {
        times: times.clone(),
        r: std::array::from_fn(|i| cumulative(&move |a: &Instant| a.r[i])),
        r6_split: std::array::from_fn(|i| cumulative(&move |a: &Instant| a.r6[i])),
        r6_tilde: cumulative(&|a| a.r6_tilde),
        r6_hat: cumulative(&|a| a.r6_hat),
        r7_tilde: cumulative(&|a| a.r7_tilde),
        r7_hat: cumulative(&|a| a.r7_hat),
        r2_entropy_route: cumulative(&|a| a.r2_entropy),
    })
}

/// `sup |lambda| / mu` over the default density samples, inflated by 1%.
pub(crate) fn fitted_c2(law: &ViscosityLaw) -> f64 {
    let mut c2: f64 = 0.0;
    for rho in default_rho_samples(10.0) {
        let mu = law.mu(rho);
        if mu > 0.0 {
            c2 = c2.max(law.lambda(rho).abs() / mu);
        }
    }
    c2 * 1.01
}
