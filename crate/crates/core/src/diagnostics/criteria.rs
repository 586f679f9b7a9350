//! The conditional criterion integrals, evaluated on the boundary strip
//! with trapezoid time quadrature over the stored snapshots.

use std::str::FromStr;

use super::{s_mu, sym_frob2, LayerRegion};
use crate::error::{Error, Result};
use crate::ops::grad_vector;
use crate::state::Trajectory;
use crate::thermo::GasLaw;
use crate::viscosity::ViscosityLaw;

/// The named criterion integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    /// `rho^gamma / eps + eps rho |u|^2 / d^2`.
    Thm1,
    /// `eps rho |u|^2 / d^2 + eps rho (sqrt(rho) u . n)^2 / d^2
    ///  + eps^(1 - (1/gamma)(2/3 + 1/(3 nu))) |S_mu|^2`.
    Thm2,
    /// `eps [ rho |u|^2 / d^2 + rho^2 (u.n)^2 / d^2 + |S(grad u)|^2 ]`
    /// with the constant-coefficient stress (`mu = 1`, `eta = 0`).
    Sueur,
    /// `rho^gamma + eps rho |u|^2 / d^2 + eps |grad u|^2`.
    BardosNguyen,
    /// `rho^gamma / eps + eps^((gamma-1)/gamma) rho |u|^2 / d^2`.
    BiCa,
    /// `eps^((gamma-1)/gamma) |S_mu|^2`.
    Cor,
    /// `eps^((gamma-1)/gamma) rho |u|^2 / d^2`.
    ByeBye,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 7] = [
        CriterionKind::Thm1,
        CriterionKind::Thm2,
        CriterionKind::Sueur,
        CriterionKind::BardosNguyen,
        CriterionKind::BiCa,
        CriterionKind::Cor,
        CriterionKind::ByeBye,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Thm1 => "thm1",
            CriterionKind::Thm2 => "thm2",
            CriterionKind::Sueur => "sueur",
            CriterionKind::BardosNguyen => "bardos_nguyen",
            CriterionKind::BiCa => "bica",
            CriterionKind::Cor => "cor",
            CriterionKind::ByeBye => "byebye",
        }
    }

    fn needs_s_mu(self) -> bool {
        matches!(self, CriterionKind::Thm2 | CriterionKind::Cor)
    }

    fn needs_grad_u(self) -> bool {
        matches!(self, CriterionKind::Sueur | CriterionKind::BardosNguyen)
    }
}

impl FromStr for CriterionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thm1" => Ok(CriterionKind::Thm1),
            "thm2" => Ok(CriterionKind::Thm2),
            "sueur" => Ok(CriterionKind::Sueur),
            "bardos_nguyen" | "bn" => Ok(CriterionKind::BardosNguyen),
            "bica" => Ok(CriterionKind::BiCa),
            "cor" => Ok(CriterionKind::Cor),
            "byebye" => Ok(CriterionKind::ByeBye),
            other => Err(Error::Parameter(format!("unknown criterion '{other}'"))),
        }
    }
}

/// Exponent of the stress weight in the second theorem's criterion:
/// `1 - (1/gamma)(2/3 + 1/(3 nu))`.
pub fn thm2_stress_exponent(gamma: f64, nu: f64) -> f64 {
    1.0 - (2.0 / 3.0 + 1.0 / (3.0 * nu)) / gamma
}

/// Constant-coefficient stress squared at one cell, with the planar flow
/// embedded in three dimensions (the deviatoric part contributes an
/// out-of-plane diagonal entry).
fn constant_stress_frob2(grad: &[[f64; 2]; 2]) -> f64 {
    let div = grad[0][0] + grad[1][1];
    let s00 = 2.0 * grad[0][0] - 2.0 / 3.0 * div;
    let s11 = 2.0 * grad[1][1] - 2.0 / 3.0 * div;
    let s01 = grad[0][1] + grad[1][0];
    let szz = -2.0 / 3.0 * div;
    s00 * s00 + s11 * s11 + 2.0 * s01 * s01 + szz * szz
}

/// Cumulative criterion integral at each stored snapshot time.
pub fn criterion_series(
    kind: CriterionKind,
    traj: &Trajectory,
    region: &LayerRegion,
    law: &ViscosityLaw,
    g: GasLaw,
    eps: f64,
) -> Result<Vec<f64>> {
    if traj.len() < 2 {
        return Err(Error::Config("criterion integrals need >= 2 snapshots".into()));
    }
    let grid = &traj.grid;
    let vol = grid.cell_volume();
    let gamma = g.gamma;
    let rate_exp = thm2_stress_exponent(gamma, law.nu);
    let weight_byebye = eps.powf((gamma - 1.0) / gamma);

    let mut instantaneous = Vec::with_capacity(traj.len());
    for s in &traj.states {
        let smu = if kind.needs_s_mu() {
            Some(s_mu(s, law, grid)?)
        } else {
            None
        };
        let grad_u = if kind.needs_grad_u() {
            let u: Vec<[f64; 2]> = (0..s.n_cells())
                .map(|i| s.velocity(i, super::S_MU_RHO_MIN))
                .collect();
            Some(grad_vector(grid, &u))
        } else {
            None
        };
        let mut acc = 0.0;
        for (j, &cell) in region.cells.iter().enumerate() {
            let rho = s.rho[cell];
            let d = region.dist[j];
            let n = region.normal[j];
            let u = s.velocity(cell, super::S_MU_RHO_MIN);
            let u2 = u[0] * u[0] + u[1] * u[1];
            let kinetic = rho * u2 / (d * d);
            let un = u[0] * n[0] + u[1] * n[1];
            // rho^2 (u.n)^2 read as rho (sqrt(rho) u . n)^2.
            let normal_term = rho * rho * un * un / (d * d);
            let v = match kind {
                CriterionKind::Thm1 => rho.powf(gamma) / eps + eps * kinetic,
                CriterionKind::Thm2 => {
                    let stress = sym_frob2(&smu.as_ref().unwrap()[cell]);
                    eps * kinetic + eps * normal_term + eps.powf(rate_exp) * stress
                }
                CriterionKind::Sueur => {
                    let stress = constant_stress_frob2(&grad_u.as_ref().unwrap()[cell]);
                    eps * (kinetic + normal_term + stress)
                }
                CriterionKind::BardosNguyen => {
                    let gu = &grad_u.as_ref().unwrap()[cell];
                    rho.powf(gamma) + eps * kinetic + eps * crate::ops::frob2(gu)
                }
                CriterionKind::BiCa => rho.powf(gamma) / eps + weight_byebye * kinetic,
                CriterionKind::Cor => {
                    weight_byebye * sym_frob2(&smu.as_ref().unwrap()[cell])
                }
                CriterionKind::ByeBye => weight_byebye * kinetic,
            };
            acc += v * vol;
        }
        instantaneous.push(acc);
    }

    let times = traj.times();
    let mut cumulative = Vec::with_capacity(traj.len());
    let mut total = 0.0;
    cumulative.push(0.0);
    for k in 1..times.len() {
        total += 0.5 * (times[k] - times[k - 1]) * (instantaneous[k - 1] + instantaneous[k]);
        cumulative.push(total);
    }
    Ok(cumulative)
}

/// Space-time criterion integral over the whole stored span.
pub fn criterion(
    kind: CriterionKind,
    traj: &Trajectory,
    region: &LayerRegion,
    law: &ViscosityLaw,
    g: GasLaw,
    eps: f64,
) -> Result<f64> {
    Ok(*criterion_series(kind, traj, region, law, g, eps)?
        .last()
        .unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::layer_region;
    use crate::grid::Grid;
    use crate::solver::snapshot_schedule;
    use crate::state::FluidState;
    use crate::viscosity::MuProfile;
    use approx::assert_relative_eq;

    fn rest_trajectory(grid: &Grid, rho: f64, t_final: f64, n_snap: usize) -> Trajectory {
        let mut traj = Trajectory::new(grid.clone());
        for &t in &snapshot_schedule(t_final, n_snap) {
            let mut s = FluidState::uniform(grid, rho);
            s.t = t;
            traj.push(s, 0.0, 0.0);
        }
        traj
    }

    #[test]
    fn thm1_rest_state_closed_form() {
        // rho = 1, gamma = 2, T = 1, measure 2 c eps: K = 2 c T.
        let grid = Grid::slab(1.0, 100).unwrap();
        let traj = rest_trajectory(&grid, 1.0, 1.0, 6);
        let g = GasLaw::new(2.0).unwrap();
        let law = ViscosityLaw::new(MuProfile::Linear, 0.5, 2.0).unwrap();
        let eps = 0.1;
        let region = layer_region(&grid, 1.0, eps).unwrap();
        let k = criterion(CriterionKind::Thm1, &traj, &region, &law, g, eps).unwrap();
        assert_relative_eq!(k, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn kinetic_terms_vanish_at_rest() {
        let grid = Grid::slab(1.0, 100).unwrap();
        let traj = rest_trajectory(&grid, 1.0, 1.0, 4);
        let g = GasLaw::new(2.0).unwrap();
        let law = ViscosityLaw::new(MuProfile::Linear, 0.5, 2.0).unwrap();
        let eps = 0.1;
        let region = layer_region(&grid, 1.0, eps).unwrap();
        for kind in [CriterionKind::ByeBye, CriterionKind::Cor, CriterionKind::Thm2] {
            let k = criterion(kind, &traj, &region, &law, g, eps).unwrap();
            assert!(k.abs() < 1e-14, "{kind:?} should vanish at rest, got {k}");
        }
        // Criteria with a plain rho^gamma term integrate the background.
        let bn = criterion(CriterionKind::BardosNguyen, &traj, &region, &law, g, eps).unwrap();
        assert_relative_eq!(bn, region.measure * 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thm2_exponent_matches_identity() {
        // gamma = 2, nu = 1/2: 1 - (1/2)(2/3 + 2/3) = 1/3.
        assert_relative_eq!(thm2_stress_exponent(2.0, 0.5), 1.0 / 3.0, epsilon = 1e-15);
        // Equivalent form: (gamma-1)/gamma - (1/gamma)(1-nu)/(3 nu).
        for (gamma, nu) in [(2.0, 0.5), (1.5, 0.6), (3.0, 0.2)] {
            let alt = (gamma - 1.0) / gamma - (1.0 - nu) / (3.0 * nu * gamma);
            assert_relative_eq!(thm2_stress_exponent(gamma, nu), alt, epsilon = 1e-14);
        }
    }

    #[test]
    fn unknown_name_is_parameter_error() {
        assert!("thm3".parse::<CriterionKind>().is_err());
        assert!("sueur".parse::<CriterionKind>().is_ok());
        assert!("bn".parse::<CriterionKind>().is_ok());
    }

    #[test]
    fn near_vacuum_propagates_s_mu_error() {
        let grid = Grid::slab(1.0, 50).unwrap();
        let mut traj = Trajectory::new(grid.clone());
        for &t in &snapshot_schedule(0.1, 3) {
            let mut s = FluidState::uniform(&grid, 1.0);
            s.rho[0] = 1e-12;
            s.t = t;
            traj.push(s, 0.0, 0.0);
        }
        let g = GasLaw::new(2.0).unwrap();
        let law = ViscosityLaw::new(MuProfile::Linear, 0.5, 2.0).unwrap();
        let region = layer_region(&grid, 1.0, 0.1).unwrap();
        assert!(criterion(CriterionKind::Thm2, &traj, &region, &law, g, 0.1).is_err());
        // Criteria that only touch density and velocity still evaluate.
        assert!(criterion(CriterionKind::Thm1, &traj, &region, &law, g, 0.1).is_ok());
    }
}
