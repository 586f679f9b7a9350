//! The wall corrector: a cutoff-shaped copy of the reference velocity
//! supported in the boundary strip, the corrected comparison field, the
//! auxiliary strip functions and the empirical verification of their
//! scaling in the layer width.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fitting::loglog_fit;
use crate::grid::{Geometry, Grid};
use crate::ops::grad_vector;
use crate::state::Trajectory;

/// Smooth cutoff profile: `xi(0) = 1`, `xi(r) = 0` for `r >= 1`, bounded
/// derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    /// Reversed quintic smoothstep, C^2 at both ends.
    QuinticSmoothstep,
    /// Compactly supported C-infinity bump.
    ExpBump,
}

impl Cutoff {
    pub fn xi(self, r: f64) -> f64 {
        if r < 0.0 {
            return 1.0;
        }
        if r >= 1.0 {
            return 0.0;
        }
        match self {
            Cutoff::QuinticSmoothstep => {
                1.0 - (10.0 * r.powi(3) - 15.0 * r.powi(4) + 6.0 * r.powi(5))
            }
            Cutoff::ExpBump => (1.0 - 1.0 / (1.0 - r * r)).exp(),
        }
    }

    pub fn xi_prime(self, r: f64) -> f64 {
        if !(0.0..1.0).contains(&r) {
            return 0.0;
        }
        match self {
            Cutoff::QuinticSmoothstep => -30.0 * r * r * (1.0 - r) * (1.0 - r),
            Cutoff::ExpBump => {
                let q = 1.0 - r * r;
                (1.0 - 1.0 / q).exp() * (-2.0 * r / (q * q))
            }
        }
    }

    /// `max_r r |xi'(r)|`, the bound on the auxiliary strip function.
    pub fn z_tilde_bound(self) -> f64 {
        (0..=10_000)
            .map(|k| {
                let r = k as f64 / 10_000.0;
                r * self.xi_prime(r).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl FromStr for Cutoff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quintic" => Ok(Cutoff::QuinticSmoothstep),
            "bump" => Ok(Cutoff::ExpBump),
            other => Err(Error::Parameter(format!("unknown cutoff '{other}'"))),
        }
    }
}

/// `xi` evaluated as an operation (value of the cutoff at `r >= 0`).
pub fn xi(cutoff: Cutoff, r: f64) -> f64 {
    cutoff.xi(r)
}

/// The corrector and its derived fields on one grid, cached per snapshot
/// of the reference trajectory.
#[derive(Debug, Clone)]
pub struct LayerProfile {
    pub c: f64,
    pub eps: f64,
    pub cutoff: Cutoff,
    pub times: Vec<f64>,
    /// `z(x) = xi(d/(c eps))`.
    pub z: Vec<f64>,
    /// `z~(x) = (d/(c eps)) xi'(d/(c eps))`.
    pub z_tilde: Vec<f64>,
    /// Corrector `v_bl = z u_ref`, per snapshot.
    pub v_bl: Vec<Vec<[f64; 2]>>,
    /// Corrected field `U = u_ref - v_bl`, per snapshot.
    pub u_corrected: Vec<Vec<[f64; 2]>>,
    /// `d v_bl / dt = z d u_ref / dt`, per snapshot.
    pub dv_bl_dt: Vec<Vec<[f64; 2]>>,
    /// `grad v_bl = grad z (x) u_ref + z grad u_ref`; the cutoff part is
    /// analytic, the reference gradient discrete.
    pub grad_v_bl: Vec<Vec<[[f64; 2]; 2]>>,
}

impl LayerProfile {
    pub fn div_v_bl(&self, k: usize, cell: usize) -> f64 {
        let g = &self.grad_v_bl[k][cell];
        g[0][0] + g[1][1]
    }
}

const RHO_FLOOR_FOR_VELOCITY: f64 = 1e-10;

fn half_width(grid: &Grid) -> f64 {
    match grid.geometry {
        Geometry::Slab { length } => 0.5 * length,
        Geometry::Channel { height, .. } => 0.5 * height,
    }
}

/// Builds the corrector from a reference trajectory living on `grid`.
///
/// Fails when the strips from opposite walls would merge past the midline
/// (`c eps >=` half-width).
pub fn build_layer(
    grid: &Grid,
    euler: &Trajectory,
    c: f64,
    eps: f64,
    cutoff: Cutoff,
) -> Result<LayerProfile> {
    if !(c > 0.0) || !(eps > 0.0) {
        return Err(Error::Parameter(format!("need c, eps > 0, got c = {c}, eps = {eps}")));
    }
    if c * eps >= half_width(grid) {
        return Err(Error::Config(format!(
            "layer width c*eps = {} reaches the midline (half-width {})",
            c * eps,
            half_width(grid)
        )));
    }
    if euler.grid.nx != grid.nx || euler.grid.ny != grid.ny {
        return Err(Error::Config("reference trajectory lives on a different grid".into()));
    }
    if euler.len() < 3 {
        return Err(Error::Config("layer construction needs >= 3 snapshots".into()));
    }

    let n = grid.n_cells();
    let mut z = vec![0.0; n];
    let mut z_tilde = vec![0.0; n];
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let i = grid.index(ix, iy);
            let r = grid.wall_distance(ix, iy) / (c * eps);
            z[i] = cutoff.xi(r);
            z_tilde[i] = r * cutoff.xi_prime(r);
        }
    }

    let mut v_bl = Vec::with_capacity(euler.len());
    let mut u_corrected = Vec::with_capacity(euler.len());
    let mut dv_bl_dt = Vec::with_capacity(euler.len());
    let mut grad_v_bl = Vec::with_capacity(euler.len());
    for k in 0..euler.len() {
        let ue = euler.velocity_field(k, RHO_FLOOR_FOR_VELOCITY);
        let due_dt = euler.velocity_time_derivative(k, RHO_FLOOR_FOR_VELOCITY)?;
        let grad_ue = grad_vector(grid, &ue);
        let mut vb = vec![[0.0; 2]; n];
        let mut uc = vec![[0.0; 2]; n];
        let mut dv = vec![[0.0; 2]; n];
        let mut gv = vec![[[0.0; 2]; 2]; n];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let d = grid.wall_distance(ix, iy);
                for comp in 0..2 {
                    vb[i][comp] = z[i] * ue[i][comp];
                    uc[i][comp] = ue[i][comp] - vb[i][comp];
                    dv[i][comp] = z[i] * due_dt[i][comp];
                }
                // grad z = (z~ / d) grad d, exact in the cutoff factor.
                let gd = grid.wall_distance_gradient(ix, iy);
                let gz = [z_tilde[i] / d * gd[0], z_tilde[i] / d * gd[1]];
                for a in 0..2 {
                    for b in 0..2 {
                        gv[i][a][b] = gz[b] * ue[i][a] + z[i] * grad_ue[i][a][b];
                    }
                }
            }
        }
        v_bl.push(vb);
        u_corrected.push(uc);
        dv_bl_dt.push(dv);
        grad_v_bl.push(gv);
    }

    Ok(LayerProfile {
        c,
        eps,
        cutoff,
        times: euler.times(),
        z,
        z_tilde,
        v_bl,
        u_corrected,
        dv_bl_dt,
        grad_v_bl,
    })
}

/// A corrector that is identically zero (`U = u_ref`); used by sanity
/// checks that switch the layer off.
pub fn zero_layer(grid: &Grid, euler: &Trajectory) -> Result<LayerProfile> {
    if euler.len() < 3 {
        return Err(Error::Config("layer construction needs >= 3 snapshots".into()));
    }
    let n = grid.n_cells();
    let zeros_v = vec![[0.0f64; 2]; n];
    let zeros_g = vec![[[0.0f64; 2]; 2]; n];
    let mut u_corrected = Vec::with_capacity(euler.len());
    for k in 0..euler.len() {
        u_corrected.push(euler.velocity_field(k, RHO_FLOOR_FOR_VELOCITY));
    }
    Ok(LayerProfile {
        c: 1.0,
        eps: 0.0,
        cutoff: Cutoff::QuinticSmoothstep,
        times: euler.times(),
        z: vec![0.0; n],
        z_tilde: vec![0.0; n],
        v_bl: vec![zeros_v.clone(); euler.len()],
        u_corrected,
        dv_bl_dt: vec![zeros_v; euler.len()],
        grad_v_bl: vec![zeros_g; euler.len()],
    })
}

/// The layer bounds whose scaling in the layer width is verified
/// empirically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerBound {
    /// Sup norm of the corrector; slope 0.
    Prima,
    /// Sup norm of its gradient; slope -1.
    GradBl,
    /// Sup norm of its divergence; slope 0.
    Dindon,
    /// Distance-weighted L2 of the gradient; slope 1/2.
    DGradL2,
    /// L^p norm of the corrector; slope 1/p.
    BlLp,
    /// L^p norm of its time derivative; slope 1/p.
    BlLpTime,
    /// L^p norm of its divergence; slope 1/p.
    DindonDan,
    /// Sup norm of the distance-squared-weighted gradient; slope 1.
    StimaBella,
    /// Sup norm of the corrected field; slope 0.
    BoundU,
    /// L2 norm of `z~` over the strip; slope 1/2.
    ZTildeL2,
}

impl LayerBound {
    pub const ALL: [LayerBound; 10] = [
        LayerBound::Prima,
        LayerBound::GradBl,
        LayerBound::Dindon,
        LayerBound::DGradL2,
        LayerBound::BlLp,
        LayerBound::BlLpTime,
        LayerBound::DindonDan,
        LayerBound::StimaBella,
        LayerBound::BoundU,
        LayerBound::ZTildeL2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LayerBound::Prima => "prima",
            LayerBound::GradBl => "gradbl",
            LayerBound::Dindon => "dindon",
            LayerBound::DGradL2 => "d_grad_l2",
            LayerBound::BlLp => "bl_lp",
            LayerBound::BlLpTime => "bl_lp_time",
            LayerBound::DindonDan => "dindondan",
            LayerBound::StimaBella => "stimabella",
            LayerBound::BoundU => "bound_u",
            LayerBound::ZTildeL2 => "ztilde_l2",
        }
    }

    pub fn norm_label(self, p: f64) -> String {
        match self {
            LayerBound::Prima => "sup |v_bl|".into(),
            LayerBound::GradBl => "sup |grad v_bl|".into(),
            LayerBound::Dindon => "sup |div v_bl|".into(),
            LayerBound::DGradL2 => "sup_t ||d grad v_bl||_L2".into(),
            LayerBound::BlLp => format!("sup_t ||v_bl||_L{p}"),
            LayerBound::BlLpTime => format!("sup_t ||dt v_bl||_L{p}"),
            LayerBound::DindonDan => format!("sup_t ||div v_bl||_L{p}"),
            LayerBound::StimaBella => "sup |d^2 grad v_bl|".into(),
            LayerBound::BoundU => "sup |U|".into(),
            LayerBound::ZTildeL2 => "||z~||_L2(strip)".into(),
        }
    }

    pub fn target_slope(self, p: f64) -> f64 {
        match self {
            LayerBound::Prima | LayerBound::Dindon | LayerBound::BoundU => 0.0,
            LayerBound::GradBl => -1.0,
            LayerBound::DGradL2 | LayerBound::ZTildeL2 => 0.5,
            LayerBound::BlLp | LayerBound::BlLpTime | LayerBound::DindonDan => 1.0 / p,
            LayerBound::StimaBella => 1.0,
        }
    }
}

/// One row of the scaling table: a bound, one layer width, the measured
/// norm and the across-widths fit.
#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub bound: LayerBound,
    pub norm: String,
    pub eps: f64,
    pub value: f64,
    pub fitted_slope: f64,
    pub target_slope: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Measures every bound for one layer. `p` is the Lebesgue exponent of the
/// integral bounds.
pub fn layer_norms(grid: &Grid, layer: &LayerProfile, p: f64) -> Vec<(LayerBound, f64)> {
    let vol = grid.cell_volume();
    let n = grid.n_cells();
    let vec_norm = |v: &[f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let frob = |m: &[[f64; 2]; 2]| crate::ops::frob2(m).sqrt();

    let mut prima = 0.0f64;
    let mut gradbl = 0.0f64;
    let mut dindon = 0.0f64;
    let mut d_grad_l2 = 0.0f64;
    let mut bl_lp = 0.0f64;
    let mut bl_lp_time = 0.0f64;
    let mut dindondan = 0.0f64;
    let mut stimabella = 0.0f64;
    let mut bound_u = 0.0f64;

    let dist: Vec<f64> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.wall_distance(ix, iy))
        .collect();

    for k in 0..layer.times.len() {
        let mut l2d = 0.0;
        let mut lp = 0.0;
        let mut lpt = 0.0;
        let mut lpd = 0.0;
        for i in 0..n {
            let v = vec_norm(&layer.v_bl[k][i]);
            let g = frob(&layer.grad_v_bl[k][i]);
            let dv = layer.div_v_bl(k, i);
            prima = prima.max(v);
            gradbl = gradbl.max(g);
            dindon = dindon.max(dv.abs());
            stimabella = stimabella.max(dist[i] * dist[i] * g);
            bound_u = bound_u.max(vec_norm(&layer.u_corrected[k][i]));
            l2d += (dist[i] * g).powi(2) * vol;
            lp += v.powf(p) * vol;
            lpt += vec_norm(&layer.dv_bl_dt[k][i]).powf(p) * vol;
            lpd += dv.abs().powf(p) * vol;
        }
        d_grad_l2 = d_grad_l2.max(l2d.sqrt());
        bl_lp = bl_lp.max(lp.powf(1.0 / p));
        bl_lp_time = bl_lp_time.max(lpt.powf(1.0 / p));
        dindondan = dindondan.max(lpd.powf(1.0 / p));
    }

    let strip_l2: f64 = (0..n)
        .map(|i| layer.z_tilde[i] * layer.z_tilde[i] * vol)
        .sum::<f64>()
        .sqrt();

    vec![
        (LayerBound::Prima, prima),
        (LayerBound::GradBl, gradbl),
        (LayerBound::Dindon, dindon),
        (LayerBound::DGradL2, d_grad_l2),
        (LayerBound::BlLp, bl_lp),
        (LayerBound::BlLpTime, bl_lp_time),
        (LayerBound::DindonDan, dindondan),
        (LayerBound::StimaBella, stimabella),
        (LayerBound::BoundU, bound_u),
        (LayerBound::ZTildeL2, strip_l2),
    ]
}

/// Builds layers across the width sweep and fits the log-log slope of
/// every bound. The provider returns the grid and reference trajectory
/// resolving the layer at each width.
pub fn verify_layer_scalings(
    provider: &dyn Fn(f64) -> Result<(Grid, Trajectory)>,
    c: f64,
    eps_list: &[f64],
    cutoff: Cutoff,
    p: f64,
    tolerance: f64,
) -> Result<Vec<ScalingRow>> {
    if eps_list.len() < 4 {
        return Err(Error::Config("scaling fits need at least 4 layer widths".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("layer widths must be strictly decreasing".into()));
    }
    let mut per_eps: Vec<Vec<(LayerBound, f64)>> = Vec::new();
    for &eps in eps_list {
        let (grid, euler) = provider(eps)?;
        if grid.min_spacing() > c * eps / 8.0 + 1e-14 {
            return Err(Error::Config(format!(
                "grid spacing {} does not resolve the layer width {} (need <= c eps / 8)",
                grid.min_spacing(),
                c * eps
            )));
        }
        let layer = build_layer(&grid, &euler, c, eps, cutoff)?;
        per_eps.push(layer_norms(&grid, &layer, p));
    }

    let mut rows = Vec::new();
    for (b_idx, bound) in LayerBound::ALL.iter().enumerate() {
        let values: Vec<f64> = per_eps.iter().map(|v| v[b_idx].1).collect();
        let fit = loglog_fit(eps_list, &values);
        let (slope, pass) = match fit {
            Some(f) => {
                let target = bound.target_slope(p);
                (f.slope, (f.slope - target).abs() <= tolerance)
            }
            None => (f64::NAN, false),
        };
        for (k, &eps) in eps_list.iter().enumerate() {
            rows.push(ScalingRow {
                bound: *bound,
                norm: bound.norm_label(p),
                eps,
                value: values[k],
                fitted_slope: slope,
                target_slope: bound.target_slope(p),
                tolerance,
                pass,
            });
        }
    }
    Ok(rows)
}

/// Emits the scaling table as comma-separated rows.
pub fn scaling_table_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("bound,norm,eps,value,fitted_slope,target_slope,tolerance,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
            r.bound.name(),
            r.norm,
            r.eps,
            r.value,
            r.fitted_slope,
            r.target_slope,
            r.tolerance,
            r.pass
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::FluidState;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_endpoint_values() {
        for cut in [Cutoff::QuinticSmoothstep, Cutoff::ExpBump] {
            assert_eq!(cut.xi(0.0), 1.0);
            assert_eq!(cut.xi(2.0), 0.0);
            assert_eq!(cut.xi(1.0), 0.0);
        }
        // Midpoint symmetry of the quintic profile.
        assert_relative_eq!(Cutoff::QuinticSmoothstep.xi(0.5), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn cutoff_derivative_is_bounded_and_consistent() {
        for cut in [Cutoff::QuinticSmoothstep, Cutoff::ExpBump] {
            for k in 1..100 {
                let r = k as f64 / 100.0;
                let h = 1e-6;
                if r + h < 1.0 {
                    let fd = (cut.xi(r + h) - cut.xi(r - h)) / (2.0 * h);
                    assert!((fd - cut.xi_prime(r)).abs() < 1e-6, "{cut:?} at r = {r}");
                }
                assert!(cut.xi_prime(r).abs() < 10.0);
            }
        }
    }

    #[test]
    fn quintic_z_tilde_bound_matches_closed_form() {
        // max_r 30 r^3 (1-r)^2 at r = 3/5.
        let exact = 30.0 * (0.6f64).powi(3) * (0.4f64).powi(2);
        assert_relative_eq!(
            Cutoff::QuinticSmoothstep.z_tilde_bound(),
            exact,
            epsilon = 1e-6
        );
    }

    fn shear_trajectory(grid: &Grid, n_snap: usize) -> Trajectory {
        let mut traj = Trajectory::new(grid.clone());
        for k in 0..n_snap {
            let t = 0.1 * k as f64;
            let amp = 1.0 + 0.5 * (2.0 * t).sin();
            let mut s = FluidState::uniform(grid, 1.0);
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    let i = grid.index(ix, iy);
                    let (x, y) = grid.center(ix, iy);
                    s.mx[i] = amp * (10.0 * (y - 0.5)).tanh() * (1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin());
                }
            }
            s.t = t;
            traj.push(s, 0.0, 0.0);
        }
        traj
    }

    #[test]
    fn corrector_is_supported_in_the_strip() {
        let grid = Grid::channel(1.0, 1.0, 8, 256).unwrap();
        let euler = shear_trajectory(&grid, 4);
        let layer = build_layer(&grid, &euler, 1.0, 0.05, Cutoff::QuinticSmoothstep).unwrap();
        for k in 0..4 {
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    let i = grid.index(ix, iy);
                    if grid.wall_distance(ix, iy) >= 0.05 {
                        assert_eq!(layer.v_bl[k][i], [0.0, 0.0]);
                        assert_eq!(layer.grad_v_bl[k][i], [[0.0; 2]; 2]);
                    }
                }
            }
        }
    }

    #[test]
    fn corrector_plus_corrected_recovers_reference() {
        let grid = Grid::channel(1.0, 1.0, 8, 128).unwrap();
        let euler = shear_trajectory(&grid, 4);
        let layer = build_layer(&grid, &euler, 1.0, 0.1, Cutoff::QuinticSmoothstep).unwrap();
        let ue = euler.velocity_field(2, 1e-10);
        for i in 0..grid.n_cells() {
            for comp in 0..2 {
                assert_relative_eq!(
                    layer.v_bl[2][i][comp] + layer.u_corrected[2][i][comp],
                    ue[i][comp],
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn trace_matches_reference_at_the_wall() {
        // xi(0) = 1 makes the corrector equal the reference velocity in the
        // trace sense: evaluate the defining formula at d = 0.
        let cut = Cutoff::QuinticSmoothstep;
        let u_wall = 0.73;
        assert_eq!(cut.xi(0.0) * u_wall, u_wall);
    }

    #[test]
    fn merged_layers_are_rejected() {
        let grid = Grid::channel(1.0, 1.0, 8, 64).unwrap();
        let euler = shear_trajectory(&grid, 4);
        assert!(build_layer(&grid, &euler, 1.0, 0.6, Cutoff::QuinticSmoothstep).is_err());
    }

    #[test]
    fn z_fields_are_bounded() {
        let grid = Grid::channel(1.0, 1.0, 8, 512).unwrap();
        let euler = shear_trajectory(&grid, 4);
        let layer = build_layer(&grid, &euler, 1.0, 0.03, Cutoff::QuinticSmoothstep).unwrap();
        let zmax = layer.z.iter().cloned().fold(0.0, f64::max);
        let ztmax = layer.z_tilde.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(zmax <= 1.0 + 1e-14);
        assert!(ztmax <= Cutoff::QuinticSmoothstep.z_tilde_bound() + 1e-12);
    }

    #[test]
    fn under_resolved_fit_is_refused() {
        let provider = |eps: f64| -> crate::error::Result<(Grid, Trajectory)> {
            let grid = Grid::channel(1.0, 1.0, 4, 16).unwrap();
            let euler = shear_trajectory(&grid, 4);
            Ok((grid, euler))
        };
        let eps_list = [0.0625, 0.03125, 0.015625, 0.0078125];
        let err = verify_layer_scalings(
            &provider,
            1.0,
            &eps_list,
            Cutoff::QuinticSmoothstep,
            2.0,
            0.05,
        );
        assert!(err.is_err());
    }
}
