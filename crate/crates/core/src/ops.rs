//! Cell-centered difference operators used by the diagnostics and layer
//! machinery: centered in the interior, second-order one-sided at walls,
//! periodic wrap along the channel's `x` axis.
//!
//! These stencils deliberately avoid ghost cells so diagnostic quantities
//! do not depend on a boundary-condition choice.

use crate::grid::{Geometry, Grid};

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

fn derivative(grid: &Grid, f: &dyn Fn(usize, usize) -> f64, ix: usize, iy: usize, axis: Axis) -> f64 {
    let (n, h, periodic, pos) = match axis {
        Axis::X => (
            grid.nx,
            grid.dx,
            matches!(grid.geometry, Geometry::Channel { .. }),
            ix,
        ),
        Axis::Y => {
            if grid.is_slab() {
                return 0.0;
            }
            (grid.ny, grid.dy, false, iy)
        }
    };
    let get = |p: usize| match axis {
        Axis::X => f(p, iy),
        Axis::Y => f(ix, p),
    };
    if periodic {
        let prev = (pos + n - 1) % n;
        let next = (pos + 1) % n;
        return (get(next) - get(prev)) / (2.0 * h);
    }
    if n == 1 {
        return 0.0;
    }
    if n == 2 {
        return (get(1) - get(0)) / h;
    }
    if pos == 0 {
        (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h)
    } else if pos == n - 1 {
        (get(n - 3) - 4.0 * get(n - 2) + 3.0 * get(n - 1)) / (2.0 * h)
    } else {
        (get(pos + 1) - get(pos - 1)) / (2.0 * h)
    }
}

/// Gradient of a scalar cell field: `[d/dx, d/dy]` per cell.
pub fn grad_scalar(grid: &Grid, f: &[f64]) -> Vec<[f64; 2]> {
    let mut out = vec![[0.0; 2]; grid.n_cells()];
    let getter = |ix: usize, iy: usize| f[grid.index(ix, iy)];
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            out[grid.index(ix, iy)] = [
                derivative(grid, &getter, ix, iy, Axis::X),
                derivative(grid, &getter, ix, iy, Axis::Y),
            ];
        }
    }
    out
}

/// Gradient of a vector cell field: `out[c][i][j] = d u_i / d x_j`.
pub fn grad_vector(grid: &Grid, u: &[[f64; 2]]) -> Vec<[[f64; 2]; 2]> {
    let mut out = vec![[[0.0; 2]; 2]; grid.n_cells()];
    for comp in 0..2 {
        let getter = |ix: usize, iy: usize| u[grid.index(ix, iy)][comp];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let c = grid.index(ix, iy);
                out[c][comp][0] = derivative(grid, &getter, ix, iy, Axis::X);
                out[c][comp][1] = derivative(grid, &getter, ix, iy, Axis::Y);
            }
        }
    }
    out
}

/// Frobenius norm squared of a 2x2 matrix.
pub fn frob2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gradient_exact_on_linear_slab_field() {
        let grid = Grid::slab(2.0, 16).unwrap();
        let f: Vec<f64> = (0..16).map(|i| 3.0 * grid.center(i, 0).0 + 1.0).collect();
        for (i, g) in grad_scalar(&grid, &f).iter().enumerate() {
            assert_relative_eq!(g[0], 3.0, epsilon = 1e-12, max_relative = 1e-12);
            assert_eq!(g[1], 0.0, "slab has no y derivative (cell {i})");
        }
    }

    #[test]
    fn gradient_periodic_in_channel_x() {
        let grid = Grid::channel(1.0, 1.0, 32, 8).unwrap();
        let f: Vec<f64> = (0..grid.n_cells())
            .map(|c| {
                let ix = c % 32;
                let iy = c / 32;
                let (x, _) = grid.center(ix, iy);
                (2.0 * std::f64::consts::PI * x).sin()
            })
            .collect();
        let g = grad_scalar(&grid, &f);
        // Spot-check a few cells against the analytic derivative at 2nd order.
        for ix in [0usize, 7, 31] {
            let (x, _) = grid.center(ix, 3);
            let exact = 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos();
            let got = g[grid.index(ix, 3)][0];
            assert!((got - exact).abs() < 0.05 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn one_sided_stencil_is_second_order_at_walls() {
        let exact_err = |n: usize| {
            let grid = Grid::channel(1.0, 1.0, 4, n).unwrap();
            let f: Vec<f64> = (0..grid.n_cells())
                .map(|c| {
                    let iy = c / 4;
                    let (_, y) = grid.center(c % 4, iy);
                    y * y * y
                })
                .collect();
            let g = grad_scalar(&grid, &f);
            let (_, y0) = grid.center(0, 0);
            (g[grid.index(0, 0)][1] - 3.0 * y0 * y0).abs()
        };
        let e1 = exact_err(32);
        let e2 = exact_err(64);
        let order = (e1 / e2).log2();
        assert!(order > 1.8, "one-sided wall stencil should be 2nd order, got {order}");
    }
}
