//! Finite-volume time integration of the barotropic system with
//! density-dependent viscosity and drag, plus the inviscid reference
//! solver and the weak-form / energy-budget checks.

pub mod bc;
pub mod channel;
pub mod flux;
pub mod slab;

pub use bc::WallBc;
pub use flux::{FluxScheme, Reconstruction};

use crate::error::{Error, Result};
use crate::grid::{Geometry, Grid};
use crate::state::{FluidState, Trajectory};
use crate::thermo::{pressure, GasLaw};
use crate::viscosity::{MuProfile, ViscosityLaw};

/// Time integrator order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeOrder {
    ForwardEuler,
    /// Two-stage strong-stability-preserving Runge-Kutta (Heun form).
    SspRk2,
}

/// Everything the semi-discrete operator needs to know.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub gas: GasLaw,
    pub eps: f64,
    pub r1: f64,
    /// Acoustic CFL number, in `(0, 1)`.
    pub cfl: f64,
    /// Positivity guard used whenever a velocity is reconstructed.
    pub rho_floor: f64,
    pub flux: FluxScheme,
    pub reconstruction: Reconstruction,
    pub time_order: TimeOrder,
    pub wall_bc: WallBc,
    /// Abort threshold for the time step.
    pub dt_min: f64,
    /// Count violations of the pointwise dissipation lower bound at every
    /// face of every step (always a debug assertion; this makes it a
    /// hard runtime check recorded in the stats).
    pub check_dissipation_sign: bool,
    /// Abort when `max |du| ` exceeds this (smooth-regime guard of the
    /// reference solver).
    pub gradient_guard: Option<f64>,
}

impl SolverConfig {
    pub fn new(gas: GasLaw, eps: f64, r1: f64) -> Self {
        SolverConfig {
            gas,
            eps,
            r1,
            cfl: 0.4,
            rho_floor: 1e-10,
            flux: FluxScheme::Rusanov,
            reconstruction: Reconstruction::MinmodMuscl,
            time_order: TimeOrder::SspRk2,
            wall_bc: WallBc::NoSlip,
            dt_min: 1e-13,
            check_dissipation_sign: false,
            gradient_guard: None,
        }
    }

    /// Configuration of the inviscid reference run: viscosity and drag off,
    /// slip walls, gradient blow-up monitor armed.
    pub fn euler_reference(gas: GasLaw) -> Self {
        let mut cfg = SolverConfig::new(gas, 0.0, 0.0);
        cfg.wall_bc = WallBc::Slip;
        cfg.gradient_guard = Some(0.5);
        cfg
    }

    fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Parameter(format!("CFL must lie in (0,1), got {}", self.cfl)));
        }
        if !(self.rho_floor > 0.0) {
            return Err(Error::Parameter("rho_floor must be positive".into()));
        }
        if self.eps < 0.0 || self.r1 < 0.0 {
            return Err(Error::Parameter("eps and r1 must be non-negative".into()));
        }
        Ok(())
    }
}

/// Semi-discrete tendencies `(d rho/dt, d m/dt)`.
#[derive(Debug, Clone)]
pub struct Tendency {
    pub d_rho: Vec<f64>,
    pub d_mx: Vec<f64>,
    pub d_my: Vec<f64>,
}

/// Integration statistics of one run.
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub steps: usize,
    pub min_dt: f64,
    pub dissipation_sign_violations: u64,
    pub max_gradient_indicator: f64,
}

/// Semi-discrete right-hand side of the viscous system. With `eps = 0`
/// and `r1 = 0` this is bit-identical to the inviscid right-hand side.
pub fn ns_rhs(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> Result<Tendency> {
    let (tendency, _) = rhs_with_checks(grid, state, law, cfg)?;
    Ok(tendency)
}

fn rhs_with_checks(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> Result<(Tendency, u64)> {
    let (tendency, violations) = match grid.geometry {
        Geometry::Slab { .. } => slab::rhs(grid, state, law, cfg),
        Geometry::Channel { .. } => channel::rhs(grid, state, law, cfg),
    };
    for i in 0..tendency.d_rho.len() {
        if !tendency.d_rho[i].is_finite()
            || !tendency.d_mx[i].is_finite()
            || !tendency.d_my[i].is_finite()
        {
            return Err(Error::Integration {
                message: "non-finite flux".into(),
                cell: i,
            });
        }
    }
    Ok((tendency, violations))
}

/// Instantaneous dissipation rates `(eps nu int mu |D(u)|^2, r1 int rho |u|^3)`.
pub fn dissipation_rates(
    grid: &Grid,
    state: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
) -> (f64, f64) {
    match grid.geometry {
        Geometry::Slab { .. } => slab::dissipation_rates(grid, state, law, cfg),
        Geometry::Channel { .. } => channel::dissipation_rates(grid, state, law, cfg),
    }
}

fn stable_dt(grid: &Grid, state: &FluidState, law: &ViscosityLaw, cfg: &SolverConfig) -> f64 {
    match grid.geometry {
        Geometry::Slab { .. } => slab::max_dt(grid, state, law, cfg),
        Geometry::Channel { .. } => channel::max_dt(grid, state, law, cfg),
    }
}

fn gradient_indicator(grid: &Grid, state: &FluidState, cfg: &SolverConfig) -> f64 {
    match grid.geometry {
        Geometry::Slab { .. } => slab::gradient_indicator(grid, state, cfg),
        Geometry::Channel { .. } => channel::gradient_indicator(grid, state, cfg),
    }
}

fn axpy(state: &FluidState, dt: f64, k: &Tendency, t_new: f64) -> FluidState {
    let n = state.n_cells();
    let mut out = FluidState::new(
        t_new,
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for i in 0..n {
        out.rho.push(state.rho[i] + dt * k.d_rho[i]);
        out.mx.push(state.mx[i] + dt * k.d_mx[i]);
        out.my.push(state.my[i] + dt * k.d_my[i]);
    }
    out
}

fn check_positivity(state: &FluidState, floor: f64) -> Result<()> {
    for (i, &r) in state.rho.iter().enumerate() {
        if !r.is_finite() {
            return Err(Error::Integration {
                message: "non-finite density".into(),
                cell: i,
            });
        }
        if r < floor {
            return Err(Error::PositivityLoss { cell: i, rho: r });
        }
    }
    Ok(())
}

/// Uniform snapshot schedule on `[0, t_final]` with `n` snapshots
/// (`n >= 2`), endpoints included.
pub fn snapshot_schedule(t_final: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|k| t_final * k as f64 / (n - 1) as f64)
        .collect()
}

/// Advances the viscous system to the last time of `schedule`, storing a
/// snapshot (and the running dissipation integrals) at every scheduled
/// time. The step size obeys the acoustic CFL bound and the explicit
/// diffusion constraint, and steps are clipped to land exactly on the
/// schedule.
pub fn ns_solve(
    grid: &Grid,
    init: &FluidState,
    law: &ViscosityLaw,
    cfg: &SolverConfig,
    schedule: &[f64],
) -> Result<(Trajectory, SolveStats)> {
    cfg.validate()?;
    init.validate()?;
    if schedule.len() < 2 || schedule[0] != 0.0 {
        return Err(Error::Config("snapshot schedule must start at 0 and have >= 2 entries".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("snapshot schedule must be strictly increasing".into()));
    }
    let t_final = *schedule.last().unwrap();
    let min_rho0 = init.rho.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_rho0 > 0.0) {
        return Err(Error::Config("initial density must be positive".into()));
    }
    if cfg.rho_floor > 0.01 * min_rho0 {
        return Err(Error::Config(format!(
            "rho_floor = {} is not small against the initial density minimum {}",
            cfg.rho_floor, min_rho0
        )));
    }

    let mut traj = Trajectory::new(grid.clone());
    let mut stats = SolveStats {
        min_dt: f64::INFINITY,
        ..Default::default()
    };
    let mut state = init.clone();
    state.t = 0.0;
    let mut visc_cum = 0.0;
    let mut drag_cum = 0.0;
    traj.push(state.clone(), 0.0, 0.0);
    let mut next_snapshot = 1;

    while next_snapshot < schedule.len() {
        let target = schedule[next_snapshot];
        let mut t = state.t;
        if let Some(guard) = cfg.gradient_guard {
            let ind = gradient_indicator(grid, &state, cfg);
            stats.max_gradient_indicator = stats.max_gradient_indicator.max(ind);
            if ind > guard {
                return Err(Error::SmoothRegimeExceeded { t, indicator: ind });
            }
        }
        let mut dt = stable_dt(grid, &state, law, cfg);
        if !dt.is_finite() || dt < cfg.dt_min {
            return Err(Error::TimeStepCollapse { t, dt });
        }
        if t + dt >= target {
            dt = target - t;
        }
        stats.min_dt = stats.min_dt.min(dt);

        let (k1, v1) = rhs_with_checks(grid, &state, law, cfg)?;
        stats.dissipation_sign_violations += v1;
        let (r1_visc, r1_drag) = dissipation_rates(grid, &state, law, cfg);
        state = match cfg.time_order {
            TimeOrder::ForwardEuler => {
                visc_cum += dt * r1_visc;
                drag_cum += dt * r1_drag;
                axpy(&state, dt, &k1, t + dt)
            }
            TimeOrder::SspRk2 => {
                let predictor = axpy(&state, dt, &k1, t + dt);
                check_positivity(&predictor, cfg.rho_floor)?;
                let (k2, v2) = rhs_with_checks(grid, &predictor, law, cfg)?;
                stats.dissipation_sign_violations += v2;
                let (r2_visc, r2_drag) = dissipation_rates(grid, &predictor, law, cfg);
                visc_cum += 0.5 * dt * (r1_visc + r2_visc);
                drag_cum += 0.5 * dt * (r1_drag + r2_drag);
                let mut out = state.clone();
                for i in 0..out.n_cells() {
                    out.rho[i] = state.rho[i] + 0.5 * dt * (k1.d_rho[i] + k2.d_rho[i]);
                    out.mx[i] = state.mx[i] + 0.5 * dt * (k1.d_mx[i] + k2.d_mx[i]);
                    out.my[i] = state.my[i] + 0.5 * dt * (k1.d_my[i] + k2.d_my[i]);
                }
                out.t = t + dt;
                out
            }
        };
        check_positivity(&state, cfg.rho_floor)?;
        stats.steps += 1;
        t += dt;

        if (t - target).abs() <= 1e-12 * t_final.max(1.0) {
            state.t = target;
            traj.push(state.clone(), visc_cum, drag_cum);
            next_snapshot += 1;
        }
    }
    Ok((traj, stats))
}

/// Runs the inviscid reference: same scheme with `eps = 0`, `r1 = 0`,
/// slip walls and the gradient blow-up monitor armed. The caller is
/// expected to hand a grid refined by at least 4x relative to the viscous
/// grids and restrict the result where needed.
pub fn euler_solve(
    grid: &Grid,
    init: &FluidState,
    gas: GasLaw,
    base: &SolverConfig,
    schedule: &[f64],
) -> Result<(Trajectory, SolveStats)> {
    let mut cfg = base.clone();
    cfg.gas = gas;
    cfg.eps = 0.0;
    cfg.r1 = 0.0;
    cfg.wall_bc = WallBc::Slip;
    cfg.gradient_guard = Some(cfg.gradient_guard.unwrap_or(0.5));
    // The law is never evaluated with eps = 0; any admissible one will do.
    let law = ViscosityLaw::new(MuProfile::Linear, 0.5, gas.gamma)?;
    ns_solve(grid, init, &law, &cfg, schedule)
}

/// Energy defect series
/// `defect(tau) = E(tau) + eps nu int int mu |D|^2 + r1 int int rho |u|^3 - E(0)`.
///
/// Non-positive up to discretization error for a stable scheme.
pub fn energy_residual(
    traj: &Trajectory,
    _law: &ViscosityLaw,
    g: GasLaw,
    cfg: &SolverConfig,
) -> Vec<(f64, f64)> {
    if traj.is_empty() {
        return Vec::new();
    }
    let e0 = traj.states[0].total_energy(&traj.grid, g, cfg.rho_floor);
    traj.states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let e = s.total_energy(&traj.grid, g, cfg.rho_floor);
            (
                s.t,
                e + traj.visc_dissipation[k] + traj.drag_dissipation[k] - e0,
            )
        })
        .collect()
}

/// Tolerance for the energy-defect flag: discretization-level slack
/// `C (dt + dx^2) T` scaled by the initial energy.
pub fn energy_defect_tolerance(traj: &Trajectory, g: GasLaw, cfg: &SolverConfig, stats: &SolveStats) -> f64 {
    if traj.is_empty() {
        return 0.0;
    }
    let e0 = traj.states[0].total_energy(&traj.grid, g, cfg.rho_floor).max(1.0);
    let t_final = traj.states.last().unwrap().t;
    let dx = traj.grid.min_spacing();
    10.0 * e0 * (stats.min_dt + dx * dx) * t_final.max(1.0)
}

/// Smooth vector test function with analytic derivatives, compactly
/// supported inside the domain.
pub trait TestField: Sync {
    fn value(&self, t: f64, x: f64, y: f64) -> [f64; 2];
    fn time_derivative(&self, t: f64, x: f64, y: f64) -> [f64; 2];
    /// `grad[i][j] = d phi_i / d x_j`.
    fn gradient(&self, t: f64, x: f64, y: f64) -> [[f64; 2]; 2];
    fn divergence(&self, t: f64, x: f64, y: f64) -> f64 {
        let g = self.gradient(t, x, y);
        g[0][0] + g[1][1]
    }
}

/// Test field assembled from closures.
pub struct ClosureField<V, D, G> {
    pub value: V,
    pub time_derivative: D,
    pub gradient: G,
}

impl<V, D, G> TestField for ClosureField<V, D, G>
where
    V: Fn(f64, f64, f64) -> [f64; 2] + Sync,
    D: Fn(f64, f64, f64) -> [f64; 2] + Sync,
    G: Fn(f64, f64, f64) -> [[f64; 2]; 2] + Sync,
{
    fn value(&self, t: f64, x: f64, y: f64) -> [f64; 2] {
        (self.value)(t, x, y)
    }
    fn time_derivative(&self, t: f64, x: f64, y: f64) -> [f64; 2] {
        (self.time_derivative)(t, x, y)
    }
    fn gradient(&self, t: f64, x: f64, y: f64) -> [[f64; 2]; 2] {
        (self.gradient)(t, x, y)
    }
}

/// Defect of the weak-form momentum identity over the whole stored span,
/// assembled with the stress surrogate form of the viscous term and the
/// drag term. Decays at the scheme order on smooth trajectories.
pub fn weak_form_residual(
    traj: &Trajectory,
    law: &ViscosityLaw,
    g: GasLaw,
    cfg: &SolverConfig,
    test: &dyn TestField,
) -> Result<f64> {
    if traj.len() < 2 {
        return Err(Error::Config("weak form needs at least two snapshots".into()));
    }
    let grid = &traj.grid;
    let times = traj.times();

    // Compact support check: the test function must vanish on the cells
    // adjacent to a wall, at every snapshot time.
    let scale: f64 = 1e-12;
    for &t in &times {
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                if grid.wall_distance(ix, iy) > 1.5 * grid.min_spacing() {
                    continue;
                }
                let (x, y) = grid.center(ix, iy);
                let v = test.value(t, x, y);
                if v[0].abs() > scale || v[1].abs() > scale {
                    return Err(Error::Parameter(
                        "test function support touches the boundary".into(),
                    ));
                }
            }
        }
    }

    let wt = crate::quadrature::trapezoid_weights(&times);
    let vol = grid.cell_volume();
    let mut space_time = 0.0;
    for (k, s) in traj.states.iter().enumerate() {
        let smu = crate::diagnostics::s_mu(s, law, grid)?;
        let mut inner = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let (x, y) = grid.center(ix, iy);
                let t = s.t;
                let phi = test.value(t, x, y);
                let dphi = test.time_derivative(t, x, y);
                let gphi = test.gradient(t, x, y);
                let u = s.velocity(i, cfg.rho_floor);
                let rho = s.rho[i];

                // - rho u . d_t phi
                inner -= rho * (u[0] * dphi[0] + u[1] * dphi[1]);
                // - (sqrt(rho) u (x) sqrt(rho) u) : grad phi
                for a in 0..2 {
                    for b in 0..2 {
                        inner -= rho * u[a] * u[b] * gphi[a][b];
                    }
                }
                // - p div phi
                inner -= pressure(g, rho) * (gphi[0][0] + gphi[1][1]);
                // + eps [ 2 sqrt(mu) S_mu + (lambda/mu) Tr(sqrt(mu) S_mu) I ] : grad phi
                if cfg.eps > 0.0 {
                    let mu = law.mu(rho).max(1e-300);
                    let lam = law.lambda(rho);
                    let sq = mu.sqrt();
                    let a00 = sq * smu[i][0];
                    let a01 = sq * smu[i][1];
                    let a11 = sq * smu[i][2];
                    let tr = a00 + a11;
                    let s00 = 2.0 * a00 + (lam / mu) * tr;
                    let s11 = 2.0 * a11 + (lam / mu) * tr;
                    let s01 = 2.0 * a01;
                    inner += cfg.eps
                        * (s00 * gphi[0][0] + s01 * (gphi[0][1] + gphi[1][0]) + s11 * gphi[1][1]);
                }
                // + r1 |sqrt(rho) u| sqrt(rho) u . phi
                if cfg.r1 > 0.0 {
                    let speed = (u[0] * u[0] + u[1] * u[1]).sqrt();
                    inner += cfg.r1 * rho * speed * (u[0] * phi[0] + u[1] * phi[1]);
                }
            }
        }
        space_time += wt[k] * inner * vol;
    }

    // Boundary terms in time: int rho u . phi |_0 - |_tau.
    let boundary = |k: usize| -> f64 {
        let s = &traj.states[k];
        let mut acc = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let (x, y) = grid.center(ix, iy);
                let phi = test.value(s.t, x, y);
                acc += s.mx[i] * phi[0] + s.my[i] * phi[1];
            }
        }
        acc * vol
    };
    let rhs = boundary(0) - boundary(traj.len() - 1);
    Ok(space_time - rhs)
}

/// Defect of the weak-form continuity identity for a scalar test function
/// given by closures `(value, d/dt, gradient)`.
pub fn weak_form_residual_mass(
    traj: &Trajectory,
    cfg: &SolverConfig,
    phi: &dyn Fn(f64, f64, f64) -> f64,
    dphi_dt: &dyn Fn(f64, f64, f64) -> f64,
    grad_phi: &dyn Fn(f64, f64, f64) -> [f64; 2],
) -> Result<f64> {
    if traj.len() < 2 {
        return Err(Error::Config("weak form needs at least two snapshots".into()));
    }
    let grid = &traj.grid;
    let times = traj.times();
    let wt = crate::quadrature::trapezoid_weights(&times);
    let vol = grid.cell_volume();
    let mut space_time = 0.0;
    for (k, s) in traj.states.iter().enumerate() {
        let mut inner = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let (x, y) = grid.center(ix, iy);
                let u = s.velocity(i, cfg.rho_floor);
                let gp = grad_phi(s.t, x, y);
                inner -= s.rho[i] * dphi_dt(s.t, x, y);
                inner -= s.rho[i] * (u[0] * gp[0] + u[1] * gp[1]);
            }
        }
        space_time += wt[k] * inner * vol;
    }
    let boundary = |k: usize| -> f64 {
        let s = &traj.states[k];
        let mut acc = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let (x, y) = grid.center(ix, iy);
                acc += s.rho[i] * phi(s.t, x, y);
            }
        }
        acc * vol
    };
    Ok(space_time - (boundary(0) - boundary(traj.len() - 1)))
}
