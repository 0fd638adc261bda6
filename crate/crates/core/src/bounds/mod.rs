//! Analytic machinery for the extremal area bounds.
//!
//! The upper-bound pipeline works per boundary cell of the covering's Voronoi
//! net. Its ingredients, in the order they appear here:
//!
//! * inscribed regular-polygon areas `K_i = (i/2) sin(2*pi/i)` and the secant
//!   line through `i = 5, 6` that dominates them;
//! * the refined area upper bound `K_6 n - gap(n)` with
//!   `gap(n) = 2 (K_6 - K_5) (sqrt(2n) - 1)`;
//! * the side-count elimination `rho_theta(x)` whose minimum over `x` is
//!   `2 sin(theta/2)` at `x = 4*pi/theta`, and the kernel
//!   `eta(y) = sin y - y cos y` behind its monotonicity;
//! * the per-boundary-cell deficit `cell_deficit(x, y)` in the two boundary
//!   chord lengths, and its cyclically rebalanced twin
//!   `cell_deficit_balanced` (half of the `-(x/4) sqrt(4-x^2)` term shifted to
//!   the neighbor so cyclic sums agree);
//! * the sextic root `u0` locating the optimal common chord length, and
//!   [`constants`] assembling every derived constant;
//! * the grid minimization with a discrete convex envelope in [`envelope`].

mod envelope;

pub use envelope::{envelope_minimization, MinimizationResult};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::map_range;
use crate::numeric::{bisect, guarded_acos, guarded_sqrt};

/// Area of the regular `i`-gon inscribed in the unit circle: `(i/2) sin(2*pi/i)`.
pub fn inscribed_polygon_area(i: u32) -> Result<f64> {
    if i < 3 {
        return Err(Error::Domain(format!("polygon needs at least 3 sides, got {i}")));
    }
    let x = i as f64;
    Ok(0.5 * x * (2.0 * std::f64::consts::PI / x).sin())
}

fn k5() -> f64 {
    inscribed_polygon_area(5).expect("5 >= 3")
}

fn k6() -> f64 {
    inscribed_polygon_area(6).expect("6 >= 3")
}

/// The secant line through `(5, K_5)` and `(6, K_6)`:
/// `(K_6 - K_5) j - 5 K_6 + 6 K_5`. By concavity of `i -> K_i` it dominates
/// `K_j` for every `j >= 3`, with equality exactly at `j = 5, 6`.
pub fn inscribed_area_secant(j: u32) -> Result<f64> {
    if j < 3 {
        return Err(Error::Domain(format!("polygon needs at least 3 sides, got {j}")));
    }
    let (a, b) = (k5(), k6());
    Ok((b - a) * j as f64 - 5.0 * b + 6.0 * a)
}

/// The gap subtracted from `K_6 n` in the refined area upper bound:
/// `2 (K_6 - K_5) (sqrt(2n) - 1)`. Also equals `(K_6 - K_5) * n * s(n)` for
/// the size correction `s(n) = 2 sqrt(2/n) - 2/n`.
pub fn area_upper_gap(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("gap needs n >= 1".into()));
    }
    Ok(2.0 * (k6() - k5()) * ((2.0 * n as f64).sqrt() - 1.0))
}

/// Strict upper bound `K_6 n - gap(n)` on the area any rectangle covered by
/// `n` unit disks can have.
pub fn area_upper_bound(n: usize) -> Result<f64> {
    Ok(k6() * n as f64 - area_upper_gap(n)?)
}

/// Deficit `K_6 n - area` of a covering against the hexagonal density limit.
pub fn area_deficit(n: usize, area: f64) -> Result<f64> {
    if n == 0 || !(area >= 0.0) {
        return Err(Error::Domain(format!(
            "deficit needs n >= 1 and area >= 0, got n = {n}, area = {area}"
        )));
    }
    Ok(k6() * n as f64 - area)
}

/// Improvement factor `(sqrt(psi) + 1/sqrt(psi)) / 2 >= 1` available when the
/// rectangle's aspect ratio tends to `psi`.
pub fn aspect_penalty(psi: f64) -> Result<f64> {
    if !(psi > 0.0 && psi.is_finite()) {
        return Err(Error::Domain(format!("aspect ratio must be positive, got {psi}")));
    }
    let r = psi.sqrt();
    Ok(0.5 * (r + 1.0 / r))
}

/// Kernel `eta(y) = sin y - y cos y`, increasing on `[0, pi]`.
pub fn segment_kernel(y: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&y) {
        return Err(Error::Domain(format!("kernel argument must be in [0, pi], got {y}")));
    }
    Ok(y.sin() - y * y.cos())
}

/// Side-count elimination function
/// `rho_theta(x) = x sin(2*pi/x) - (x - 2) sin((2*pi - theta)/(x - 2))`,
/// for `theta` in `(0, pi]` and real `x >= 3`.
pub fn rho(theta: f64, x: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta must be in (0, pi], got {theta}")));
    }
    if !(x >= 3.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be at least 3, got {x}")));
    }
    let tau = 2.0 * std::f64::consts::PI;
    Ok(x * (tau / x).sin() - (x - 2.0) * ((tau - theta) / (x - 2.0)).sin())
}

/// Location and value of the minimum of `rho_theta` over `x`: the minimum sits
/// at `x = 4*pi/theta` and equals `2 sin(theta/2)` there.
///
/// Both algebraic facts are re-checked numerically; so is the domination
/// `rho_theta(3) >= value` that lets triangles be excluded.
pub fn rho_minimum(theta: f64) -> Result<(f64, f64)> {
    let x_star = 4.0 * std::f64::consts::PI / theta;
    let value = rho(theta, x_star)?;
    let closed_form = 2.0 * (0.5 * theta).sin();
    // The two sine arguments agree in real arithmetic; allow rounding to grow
    // with x_star, which amplifies the argument error.
    if (value - closed_form).abs() > 1e-12 * x_star.max(1.0) {
        return Err(Error::Numeric(format!(
            "rho minimum {value} drifted from 2 sin(theta/2) = {closed_form}"
        )));
    }
    if rho(theta, 3.0)? < value - 1e-12 {
        return Err(Error::Numeric(format!(
            "rho(theta, 3) fell below the minimum value {value}"
        )));
    }
    Ok((x_star, value))
}

/// Numeric minimization of `rho_theta` over `x` in `[4, 200]`.
///
/// Golden-section locates the basin, but in double precision the function is
/// flat to rounding over a plateau of half-width roughly `sqrt(eps / rho'')`
/// around the minimum (tens of microns in `x` for small `theta`), so the
/// argmin is polished with a bisection on the exact derivative
/// `rho' = eta(2 pi / x) - eta((2 pi - theta) / (x - 2))`, which still has a
/// clean sign change there. Returns `(argmin, min)`.
pub fn rho_minimum_numeric(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta must be in (0, pi], got {theta}")));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let (xg, vg) = crate::numeric::golden_min(
        |x| x * (tau / x).sin() - (x - 2.0) * ((tau - theta) / (x - 2.0)).sin(),
        4.0,
        200.0,
        1e-4,
    );
    let eta = |y: f64| y.sin() - y * y.cos();
    let deriv = |x: f64| eta(tau / x) - eta((tau - theta) / (x - 2.0));
    if deriv(200.0) <= 0.0 {
        // The stationary point sits past the right end; the basin result is
        // the boundary minimum.
        return Ok((xg, vg));
    }
    let x = bisect(deriv, 4.0, 200.0, 1e-12)?;
    Ok((x, rho(theta, x)?))
}

fn check_unit_chord(what: &str, l: f64) -> Result<()> {
    if l > 0.0 && l <= 2.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be in (0, 2], got {l}")))
    }
}

/// `cell_deficit_balanced` without domain checks, for dense grid scans.
/// Boundary rounding is clamped exactly like the guarded public version.
pub(crate) fn ft_raw(x: f64, y: f64) -> f64 {
    let sx = (4.0 - x * x).max(0.0).sqrt();
    let sy = (4.0 - y * y).max(0.0).sqrt();
    let rad = 2.0 * (x * x + y * y) - x * x * y * y + x * y * sx * sy;
    let mid = rad.max(0.0).sqrt() / (4.0 * std::f64::consts::SQRT_2);
    let a1 = ((x * y - sx * sy) / 4.0).clamp(-1.0, 1.0).acos();
    let a2 = (1.0 - 0.5 * x * x).clamp(-1.0, 1.0).acos();
    -(x / 8.0) * sx - (y / 8.0) * sy - mid + (0.5 * (a1 + a2)).sin()
}

/// Area deficit of a boundary cell whose own boundary chord has length `x`
/// and whose predecessor's chord has length `y`:
///
/// `f(x, y) = -(x/4) sqrt(4 - x^2)
///            - (1/(4 sqrt 2)) sqrt(2(x^2 + y^2) - x^2 y^2 + x y sqrt((4 - x^2)(4 - y^2)))
///            + sin((arccos((x y - sqrt((4 - x^2)(4 - y^2)))/4) + arccos(1 - x^2/2)) / 2)`.
pub fn cell_deficit(x: f64, y: f64) -> Result<f64> {
    check_unit_chord("first chord", x)?;
    check_unit_chord("second chord", y)?;
    let sx = guarded_sqrt(4.0 - x * x)?;
    let sy = guarded_sqrt(4.0 - y * y)?;
    let rad = 2.0 * (x * x + y * y) - x * x * y * y + x * y * sx * sy;
    let mid = guarded_sqrt(rad)? / (4.0 * std::f64::consts::SQRT_2);
    let a1 = guarded_acos((x * y - sx * sy) / 4.0)?;
    let a2 = guarded_acos(1.0 - 0.5 * x * x)?;
    Ok(-(x / 4.0) * sx - mid + (0.5 * (a1 + a2)).sin())
}

/// The rebalanced deficit: half of each `-(x/4) sqrt(4 - x^2)` term shifted to
/// the neighboring summand, so that cyclic sums of [`cell_deficit`] and of
/// this function agree while each summand becomes (numerically) symmetric:
///
/// `f~(x, y) = -(x/8) sqrt(4 - x^2) - (y/8) sqrt(4 - y^2) - ... ` (same tail).
pub fn cell_deficit_balanced(x: f64, y: f64) -> Result<f64> {
    check_unit_chord("first chord", x)?;
    check_unit_chord("second chord", y)?;
    Ok(ft_raw(x, y))
}

/// Sup over a step-`grid_step` grid of `[0.05, 1.95]^2` of
/// `|f~(x, y) - f~(y, x)|`.
///
/// The sine term can be rewritten through
/// `arccos((xy - sqrt((4-x^2)(4-y^2)))/4) = pi - (theta(x) + theta(y))/2`,
/// which makes it symmetric outright, so the measured deviation sits at
/// rounding level rather than at the 1e-7 scale it is usually quoted at.
pub fn symmetry_deviation(grid_step: f64) -> Result<f64> {
    symmetry_deviation_inner(grid_step, true)
}

/// Sequential twin of [`symmetry_deviation`].
pub fn symmetry_deviation_seq(grid_step: f64) -> Result<f64> {
    symmetry_deviation_inner(grid_step, false)
}

fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let m = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..m).map(|i| lo + i as f64 * step).collect()
}

fn symmetry_deviation_inner(grid_step: f64, parallel: bool) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::Domain(format!(
            "grid step must be in (0, 0.1], got {grid_step}"
        )));
    }
    let ts = grid_points(0.05, 1.95, grid_step);
    let row_sup = map_range(ts.len(), parallel, |i| {
        let x = ts[i];
        let mut sup: f64 = 0.0;
        for &y in &ts {
            sup = sup.max((ft_raw(x, y) - ft_raw(y, x)).abs());
        }
        sup
    });
    Ok(row_sup.into_iter().fold(0.0, f64::max))
}

/// Central-difference check that both partial derivatives of the balanced
/// deficit are negative (up to 1e-9) at every grid point of
/// `{x, y >= 0.05, x + y < 1.95}`.
pub fn negative_gradient_check(grid_step: f64) -> Result<bool> {
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(Error::Domain(format!(
            "grid step must be in (0, 0.05], got {grid_step}"
        )));
    }
    let h = grid_step;
    let ts = grid_points(0.05, 1.95, grid_step);
    let rows_ok = map_range(ts.len(), true, |i| {
        let x = ts[i];
        for &y in &ts {
            if x + y >= 1.95 {
                continue;
            }
            let dx = (ft_raw(x + h, y) - ft_raw(x - h, y)) / (2.0 * h);
            let dy = (ft_raw(x, y + h) - ft_raw(x, y - h)) / (2.0 * h);
            if dx >= 1e-9 || dy >= 1e-9 {
                return false;
            }
        }
        true
    });
    Ok(rows_ok.into_iter().all(|ok| ok))
}

/// Unique root in `(0, 2)` of `u^6 + 4 lambda^2 u^2 - 16 lambda^2`, found by
/// bisection to 1e-12. The polynomial is strictly increasing in `u > 0`
/// (all non-constant terms are), and spans `-16 lambda^2` to `64` over the
/// bracket, so the root exists and is unique.
pub fn solve_u0(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let l2 = lambda * lambda;
    bisect(
        |u| {
            let u2 = u * u;
            u2 * u2 * u2 + 4.0 * l2 * u2 - 16.0 * l2
        },
        0.0,
        2.0,
        1e-12,
    )
}

/// Every derived constant of the two extremal-bound statements.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    /// Inscribed pentagon area.
    pub k5: f64,
    /// Inscribed hexagon area (`3 sqrt 3 / 2`), the per-disk density limit.
    pub k6: f64,
    /// `K_6 - K_5 + 1`.
    pub lambda: f64,
    /// Root of `u^6 + 4 lambda^2 u^2 - 16 lambda^2` in `(0, 2)`: the optimal
    /// common boundary chord length.
    pub u0: f64,
    /// `lambda - (u0/2) sqrt(4 - u0^2)`: deficit contributed per boundary cell
    /// at the optimal chord length.
    pub per_cell_min: f64,
    /// `2 sqrt(K_6) * per_cell_min`: lower constant for the scaled deficit
    /// liminf.
    pub alpha_lower: f64,
    /// `3 / sqrt 2`: upper constant for the liminf (balanced-aspect lattice).
    pub alpha_upper: f64,
    /// Same as `alpha_lower` (the argument bounds liminf and limsup alike).
    pub beta_lower: f64,
    /// `2 + 5 sqrt 3 / 4`: upper constant for the limsup.
    pub beta_upper: f64,
    /// `17 sqrt 3 / 4`: the cruder limsup constant the square-lattice
    /// construction gives before the perfect-square reduction.
    pub beta_upper_coarse: f64,
    /// `2 sqrt 2 (K_6 - K_5)`: the lower constant obtained from the plain
    /// `2n` area bound.
    pub naive_lower: f64,
    /// `2 sqrt(K_6) (K_6 - K_5)`: the same argument fed with the hexagonal
    /// construction's larger areas.
    pub sharper_lower: f64,
}

/// Compute [`ConstantsReport`] from first principles.
pub fn constants() -> ConstantsReport {
    let k5 = k5();
    let k6 = k6();
    let lambda = k6 - k5 + 1.0;
    let u0 = solve_u0(lambda).expect("fixed sign change on (0, 2)");
    let per_cell_min = lambda - 0.5 * u0 * (4.0 - u0 * u0).sqrt();
    let alpha_lower = 2.0 * k6.sqrt() * per_cell_min;
    let s3 = 3.0_f64.sqrt();
    ConstantsReport {
        k5,
        k6,
        lambda,
        u0,
        per_cell_min,
        alpha_lower,
        alpha_upper: 3.0 / std::f64::consts::SQRT_2,
        beta_lower: alpha_lower,
        beta_upper: 2.0 + 1.25 * s3,
        beta_upper_coarse: 4.25 * s3,
        naive_lower: 2.0 * std::f64::consts::SQRT_2 * (k6 - k5),
        sharper_lower: 2.0 * k6.sqrt() * (k6 - k5),
    }
}
