//! Abel's equation `H(ψ(x)) = H(x) + 1` solved by seeding a fundamental
//! interval `[x₀, ψ(x₀))` and transporting the seed along orbits.
//!
//! The seed is the Hermite polynomial of degree `2K+1` that takes the jet
//! `(0, c, 0, ..., 0)` at `x₀` and, at `ψ(x₀)`, the jet forced by
//! `h(ψ(x)) = h(x) + 1`. Symbols below the diagonal are handled through the
//! reflection `σψ(x) = −ψ(−x)`: if `G` solves the equation for `σψ` then
//! `H(x) = G(−x)` solves it for `ψ`, with `H' < 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::classify::{check_abel_growth, check_mixing_grid, DecayProtocol, MixingConfig, Verdict, VerdictKind};
use crate::error::{Error, Result};
use crate::jets::{factorial, jet_compose, jet_invert, Jet, MAX_JET_ORDER};
use crate::numeric::linspace;
use crate::orbits::{inverse_eval, transport_jet};
use crate::schwartz::{seminorm, Weight};
use crate::symbols::{reflect, Displacement, GrowthCertificate, SmoothMap, Symbol};

pub const DEFAULT_ORDER: usize = 4;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const GRID: (f64, f64, usize) = (-20.0, 20.0, 4001);

/// Cap on the number of orbit steps used to reach the fundamental interval.
pub const MAX_STEPS: i64 = 1_000_000;

const MONOTONE_SAMPLES: usize = 2001;

pub const DYNAMICS_STAMP: &str = "hypercyclic and chaotic (Abel solution, numerically evidenced)";

#[derive(Debug, Clone)]
pub struct AbelSolution {
    symbol: Symbol,
    /// symbol the seed was built for: `ψ`, or `σψ` when reflected
    work: Symbol,
    reflected: bool,
    x0: f64,
    x1: f64,
    order: usize,
    slope: f64,
    /// monomial coefficients of the seed in `s = (x − x₀)/(x₁ − x₀)`
    coeffs: Vec<f64>,
}

/// Solves Abel's equation with seed slope `c` (default `1/(ψ(x₀) − x₀)`).
pub fn solve_abel(psi: &Symbol, order: usize, x0: f64, c: Option<f64>) -> Result<AbelSolution> {
    let props = psi.props();
    if !props.strictly_increasing {
        return Err(Error::Usage(format!("{} is not strictly increasing", psi.label())));
    }
    if !props.fixed_point_free || props.displacement == Displacement::HasFixedPoint {
        return Err(Error::Usage(format!("{} has a fixed point", psi.label())));
    }
    if order == 0 || 2 * order + 1 > MAX_JET_ORDER {
        return Err(Error::InvalidParameter(format!("matching order {order} out of range")));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidParameter(format!("x0 = {x0}")));
    }
    let reflected = props.displacement == Displacement::BelowDiagonal;
    let work = if reflected { reflect(psi) } else { psi.clone() };
    let x0w = if reflected { -x0 } else { x0 };
    let x1 = work.eval(x0w);
    let width = x1 - x0w;
    if !(width > 0.0) || !x1.is_finite() {
        return Err(Error::Usage(format!("{} does not move {x0} forward", work.label())));
    }
    let slope = c.unwrap_or(1.0 / width);
    if !(slope > 0.0) || !slope.is_finite() {
        return Err(Error::InvalidParameter(format!("seed slope {slope} must be positive")));
    }

    let mut left = vec![0.0; order + 1];
    left[1] = slope;
    let mut shifted = left.clone();
    shifted[0] = 1.0;
    let inverse = jet_invert(&work.jet_at(x0w, order))?;
    let forced = jet_compose(&Jet::new(x0w, shifted), &inverse)?;
    let right = forced.derivs().to_vec();
    if !(right[1] > 0.0) {
        return Err(Error::SeedInfeasible(format!(
            "forced slope {} at the right end of the fundamental interval",
            right[1]
        )));
    }
    let coeffs = hermite(&left, &right, width)?;
    let solution = AbelSolution { symbol: psi.clone(), work, reflected, x0: x0w, x1, order, slope, coeffs };
    for s in linspace(0.0, 1.0, MONOTONE_SAMPLES) {
        let d = solution.seed_derivative(s);
        if !(d > 0.0) {
            return Err(Error::SeedInfeasible(format!(
                "seed derivative {d} at s = {s}; retry with another slope or order"
            )));
        }
    }
    Ok(solution)
}

/// Monomial coefficients (in `s ∈ [0, 1]`) of the degree `2K+1` polynomial
/// with derivative data `left` at `s = 0` and `right` at `s = 1`, where the
/// data are given in `x` and `x = x₀ + width·s`.
fn hermite(left: &[f64], right: &[f64], width: f64) -> Result<Vec<f64>> {
    let k = left.len() - 1;
    let scale = |d: &[f64]| -> Vec<f64> { d.iter().enumerate().map(|(j, v)| v * width.powi(j as i32)).collect() };
    let (l, r) = (scale(left), scale(right));
    let mut coeffs = vec![0.0; 2 * k + 2];
    for i in 0..=k {
        coeffs[i] = l[i] / factorial(i);
    }
    // d^j/ds^j s^i at s = 1 is i!/(i−j)!
    let falling = |i: usize, j: usize| if j > i { 0.0 } else { factorial(i) / factorial(i - j) };
    let n = k + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for j in 0..n {
        for m in 0..n {
            a[j][m] = falling(k + 1 + m, j);
        }
        a[j][n] = r[j] - (0..=k).map(|i| coeffs[i] * falling(i, j)).sum::<f64>();
    }
    let solved = solve_dense(a)?;
    coeffs[k + 1..].copy_from_slice(&solved);
    Ok(coeffs)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).expect("non-empty");
        if a[pivot][col] == 0.0 {
            return Err(Error::SeedInfeasible("singular Hermite system".into()));
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..=n {
                a[row][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Ok(x)
}

impl AbelSolution {
    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn reflected(&self) -> bool {
        self.reflected
    }

    /// Fundamental interval `[x₀, ψ(x₀))` in the original coordinate.
    pub fn fundamental_interval(&self) -> (f64, f64) {
        if self.reflected {
            (-self.x0, -self.x1)
        } else {
            (self.x0, self.x1)
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn seed_slope(&self) -> f64 {
        self.slope
    }

    pub fn seed_coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    fn seed_derivative(&self, s: f64) -> f64 {
        let d = self.coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, c)| acc * s + i as f64 * c);
        d / self.width()
    }

    /// Jet of the seed polynomial at `u` (work coordinate).
    fn seed_jet(&self, u: f64, order: usize) -> Jet {
        let s = Jet::affine(u, 1.0 / self.width(), -self.x0 / self.width(), order);
        let mut acc = Jet::constant(u, 0.0, order);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * &s).add_const(*c);
        }
        acc
    }

    fn seed_eval(&self, u: f64) -> f64 {
        let s = (u - self.x0) / self.width();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `(ψ_{−n}(u), n)` with `ψ_{−n}(u)` in the fundamental interval.
    fn reduce(&self, u: f64) -> Result<(f64, i64)> {
        if !u.is_finite() {
            return Err(Error::OutOfRange(u));
        }
        let mut y = u;
        let mut n = 0i64;
        while y >= self.x1 {
            y = inverse_eval(&self.work, y)?;
            n += 1;
            if n > MAX_STEPS {
                return Err(Error::OutOfRange(u));
            }
        }
        while y < self.x0 {
            y = self.work.eval(y);
            n -= 1;
            if -n > MAX_STEPS {
                return Err(Error::OutOfRange(u));
            }
        }
        Ok((y, n))
    }

    fn to_work(&self, x: f64) -> f64 {
        if self.reflected {
            -x
        } else {
            x
        }
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        let (y, n) = self.reduce(self.to_work(x))?;
        Ok(self.seed_eval(y) + n as f64)
    }

    /// Jet of `H` at `x`: the seed jet composed with the jet of `ψ_{−n}`.
    pub fn try_jet(&self, x: f64, order: usize) -> Result<Jet> {
        let u = self.to_work(x);
        let (y, n) = self.reduce(u)?;
        let transport = transport_jet(&self.work, -n, u, order)?;
        let inner = transport.jet.expect("transport carries a jet").with_value(y);
        let mut jet = jet_compose(&self.seed_jet(y, order), &inner)?.add_const(n as f64);
        if self.reflected {
            let derivs = jet.derivs().iter().enumerate().map(|(j, d)| if j % 2 == 1 { -d } else { *d }).collect();
            jet = Jet::new(x, derivs);
        }
        Ok(jet)
    }

    pub fn try_derivative(&self, x: f64) -> Result<f64> {
        Ok(self.try_jet(x, 1)?.deriv(1))
    }

    /// Samples `(x, H(x), H'(x))` on an even grid.
    pub fn samples(&self, lo: f64, hi: f64, points: usize) -> Result<Vec<(f64, f64, f64)>> {
        linspace(lo, hi, points)
            .into_iter()
            .map(|x| {
                let jet = self.try_jet(x, 1)?;
                Ok((x, jet.value(), jet.deriv(1)))
            })
            .collect()
    }
}

impl SmoothMap for AbelSolution {
    fn eval(&self, x: f64) -> f64 {
        self.try_eval(x).unwrap_or(f64::NAN)
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        self.try_jet(x, order).unwrap_or_else(|_| Jet::new(x, vec![f64::NAN; order + 1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { lo: GRID.0, hi: GRID.1, points: GRID.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormRow {
    pub weight: String,
    pub m: usize,
    pub value: Option<f64>,
    pub radius: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelReport {
    pub symbol: String,
    pub fundamental_interval: (f64, f64),
    pub order: usize,
    pub seed_slope: f64,
    pub reflected: bool,
    pub grid: GridSpec,
    pub max_residual: f64,
    pub residual_argmax: f64,
    /// `min |H'|` over the grid; `H'` has the sign of `derivative_sign` throughout
    pub min_derivative: f64,
    pub derivative_sign: f64,
    pub monotone: bool,
    pub residual_tol: f64,
    pub within_tolerance: bool,
    pub growth: Option<GrowthCertificate>,
    pub seminorms: Vec<SeminormRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualScan {
    pub max_residual: f64,
    pub argmax: f64,
    /// `min sign·H'` over the grid
    pub min_derivative: f64,
    pub monotone: bool,
}

/// `max |H(ψ(x)) − H(x) − 1|` and `min sign·H'` over the grid for any candidate `H`.
pub fn residual_scan(psi: &Symbol, h: &dyn SmoothMap, sign: f64, grid: &GridSpec) -> ResidualScan {
    let mut scan = ResidualScan { max_residual: 0.0, argmax: grid.lo, min_derivative: f64::INFINITY, monotone: true };
    for x in linspace(grid.lo, grid.hi, grid.points) {
        let jet = h.jet(x, 1);
        let d = sign * jet.deriv(1);
        if !(d > 0.0) {
            scan.monotone = false;
        }
        scan.min_derivative = scan.min_derivative.min(d);
        let residual = (h.eval(psi.eval(x)) - jet.value() - 1.0).abs();
        if !(residual <= scan.max_residual) {
            scan.max_residual = residual;
            scan.argmax = x;
        }
    }
    scan
}

/// Residual `|H(ψ(x)) − H(x) − 1|` and derivative sign on the grid. When
/// `seminorm_order` is given, also fits a growth certificate for `H` and
/// estimates `p_{m,v}(H)` for every weight.
pub fn verify_abel(
    sol: &AbelSolution,
    grid: &GridSpec,
    residual_tol: f64,
    weights: &[Weight],
    seminorm_order: Option<usize>,
) -> AbelReport {
    let sign = if sol.reflected { -1.0 } else { 1.0 };
    let scan = residual_scan(&sol.symbol, sol, sign, grid);
    let mut growth = None;
    let mut seminorms = Vec::new();
    if let Some(m) = seminorm_order {
        let samples = linspace(grid.lo, grid.hi, 401);
        let exponents: Vec<u32> = (0..=m).map(|j| fitted_exponent(sol, j, &samples)).collect();
        let cert = GrowthCertificate::fit(|x| SmoothMap::jet(sol, x, m), &exponents, &samples, 1.1);
        for w in weights {
            let row = match seminorm(sol, &cert, m, w) {
                Ok(est) => SeminormRow {
                    weight: w.label().into(),
                    m,
                    value: Some(est.value),
                    radius: Some(est.radius),
                    error: None,
                },
                Err(e) => {
                    SeminormRow { weight: w.label().into(), m, value: None, radius: None, error: Some(format!("{e}")) }
                }
            };
            seminorms.push(row);
        }
        growth = Some(cert);
    }
    AbelReport {
        symbol: sol.symbol.label().into(),
        fundamental_interval: sol.fundamental_interval(),
        order: sol.order,
        seed_slope: sol.slope,
        reflected: sol.reflected,
        grid: grid.clone(),
        max_residual: scan.max_residual,
        residual_argmax: scan.argmax,
        min_derivative: scan.min_derivative,
        derivative_sign: sign,
        monotone: scan.monotone,
        residual_tol,
        within_tolerance: scan.max_residual <= residual_tol && scan.monotone,
        growth,
        seminorms,
    }
}

/// Smallest `t ≤ 6` with `|H^(j)(x)|/(1+x²)^t` not increasing towards the
/// ends of the sample set.
fn fitted_exponent(sol: &AbelSolution, j: usize, samples: &[f64]) -> u32 {
    let edge = |x: f64| SmoothMap::jet(sol, x, j).deriv(j).abs();
    let (lo, hi) = (samples[0], samples[samples.len() - 1]);
    let inner = 0.5;
    (0..=6u32)
        .find(|&t| {
            let ratio = |x: f64| edge(x) / (1.0 + x * x).powi(t as i32);
            ratio(lo) <= 2.0 * ratio(inner * lo).max(1e-300) && ratio(hi) <= 2.0 * ratio(inner * hi).max(1e-300)
        })
        .unwrap_or(6)
}

/// Least-squares fit `H(x) ≈ a·g(x) + b` on a grid, with the maximum
/// deviation measured against `tol_scale(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
    pub max_deviation: f64,
    /// `max |H − a·g − b| / scale(x)`
    pub max_scaled_deviation: f64,
}

pub fn fit_affine<G: Fn(f64) -> f64, S: Fn(f64) -> f64>(
    sol: &AbelSolution,
    basis: G,
    scale: S,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<AffineFit> {
    let xs = linspace(lo, hi, points);
    let mut gs = Vec::with_capacity(points);
    let mut hs = Vec::with_capacity(points);
    for &x in &xs {
        gs.push(basis(x));
        hs.push(sol.try_eval(x)?);
    }
    let n = points as f64;
    let mg = gs.iter().sum::<f64>() / n;
    let mh = hs.iter().sum::<f64>() / n;
    let sgg: f64 = gs.iter().map(|g| (g - mg) * (g - mg)).sum();
    let sgh: f64 = gs.iter().zip(&hs).map(|(g, h)| (g - mg) * (h - mh)).sum();
    let shh: f64 = hs.iter().map(|h| (h - mh) * (h - mh)).sum();
    let a = sgh / sgg;
    let b = mh - a * mg;
    let mut ss_res = 0.0;
    let mut max_deviation = 0.0f64;
    let mut max_scaled = 0.0f64;
    for ((x, g), h) in xs.iter().zip(&gs).zip(&hs) {
        let e = h - a * g - b;
        ss_res += e * e;
        max_deviation = max_deviation.max(e.abs());
        max_scaled = max_scaled.max(e.abs() / scale(*x));
    }
    Ok(AffineFit { a, b, r_squared: 1.0 - ss_res / shh, max_deviation, max_scaled_deviation: max_scaled })
}

/// A test function for the quasi-conjugacy check together with its Lipschitz constant.
pub struct TestFunction<'a> {
    pub label: String,
    pub f: &'a dyn Fn(f64) -> f64,
    pub lipschitz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyRow {
    pub label: String,
    pub max_discrepancy: f64,
    pub argmax: f64,
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub symbol: String,
    pub max_residual: f64,
    pub rows: Vec<ConjugacyRow>,
}

/// Compares `f(H(x) + 1)` with `f(H(ψ(x)))` for each test function.
pub fn quasi_conjugacy_check(sol: &AbelSolution, fs: &[TestFunction<'_>], grid: &GridSpec) -> Result<ConjugacyReport> {
    let xs = linspace(grid.lo, grid.hi, grid.points);
    let mut pairs = Vec::with_capacity(xs.len());
    let mut max_residual = 0.0f64;
    for &x in &xs {
        let h = sol.try_eval(x)?;
        let h_next = sol.try_eval(sol.symbol.eval(x))?;
        max_residual = max_residual.max((h_next - h - 1.0).abs());
        pairs.push((x, h + 1.0, h_next));
    }
    let rows = fs
        .iter()
        .map(|tf| {
            let mut worst = (grid.lo, 0.0f64);
            for &(x, shifted, next) in &pairs {
                let d = ((tf.f)(shifted) - (tf.f)(next)).abs();
                if d > worst.1 {
                    worst = (x, d);
                }
            }
            let bound = tf.lipschitz * max_residual;
            ConjugacyRow {
                label: tf.label.clone(),
                max_discrepancy: worst.1,
                argmax: worst.0,
                bound,
                within_bound: worst.1 <= bound * (1.0 + 1e-9) + 4.0 * f64::EPSILON,
            }
        })
        .collect();
    Ok(ConjugacyReport { symbol: sol.symbol.label().into(), max_residual, rows })
}

#[derive(Debug, Clone)]
pub struct DynamicsConfig {
    pub mixing: MixingConfig,
    pub a_grid: Vec<f64>,
    pub growth_weights: Vec<Weight>,
    pub growth_n_max: usize,
    pub protocol: DecayProtocol,
    pub order: usize,
    pub x0: f64,
    pub grid: GridSpec,
    pub residual_tol: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            mixing: MixingConfig::default(),
            a_grid: crate::classify::A_GRID.to_vec(),
            growth_weights: Weight::default_family(),
            growth_n_max: 40,
            protocol: DecayProtocol::default(),
            order: DEFAULT_ORDER,
            x0: 0.0,
            grid: GridSpec::default(),
            residual_tol: RESIDUAL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsReport {
    pub symbol: String,
    pub growth: Verdict,
    pub mixing: Verdict,
    pub abel: Option<AbelReport>,
    pub abel_error: Option<String>,
    pub stamped: bool,
    pub stamp: Option<String>,
}

/// Runs the growth check, the mixing check and the Abel solver; stamps the
/// symbol when all three succeed.
pub fn abel_implies_dynamics(psi: &Symbol, cfg: &DynamicsConfig) -> DynamicsReport {
    let growth = check_abel_growth(psi, &cfg.growth_weights, cfg.growth_n_max, &cfg.protocol);
    let mixing = check_mixing_grid(psi, &cfg.a_grid, &cfg.mixing);
    let (abel, abel_error) = match solve_abel(psi, cfg.order, cfg.x0, None) {
        Ok(sol) => (Some(verify_abel(&sol, &cfg.grid, cfg.residual_tol, &[], None)), None),
        Err(e) => (None, Some(format!("{e}"))),
    };
    let abel_ok = abel.as_ref().is_some_and(|r| r.within_tolerance);
    let stamped = growth.kind == VerdictKind::EvidenceHolds && mixing.kind == VerdictKind::EvidenceHolds && abel_ok;
    DynamicsReport {
        symbol: psi.label().into(),
        growth,
        mixing,
        abel,
        abel_error,
        stamped,
        stamp: stamped.then(|| DYNAMICS_STAMP.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{make_exp_double, make_sqrt_glide, make_tiled_3x, make_translation};
    use approx::assert_relative_eq;

    fn small_grid(lo: f64, hi: f64) -> GridSpec {
        GridSpec { lo, hi, points: 801 }
    }

    #[test]
    fn translation_is_exactly_affine() {
        for beta in [1.0, 0.5, -2.0] {
            let psi = make_translation(beta).unwrap();
            let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
            let report = verify_abel(&sol, &GridSpec::default(), RESIDUAL_TOL, &[], None);
            assert!(report.max_residual <= 1e-14, "β = {beta}: {}", report.max_residual);
            for x in [-7.3, -1.0, 0.0, 0.2, 3.9, 15.5] {
                assert_relative_eq!(sol.try_eval(x).unwrap(), x / beta, epsilon = 1e-12);
                assert_relative_eq!(sol.try_derivative(x).unwrap(), 1.0 / beta, epsilon = 1e-12);
            }
            assert_relative_eq!(report.min_derivative, 1.0 / beta.abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn hermite_reproduces_endpoint_data() {
        let left = [0.3, 1.2, -0.5, 2.0];
        let right = [1.7, 0.4, 0.9, -1.1];
        let width = 1.5;
        let c = hermite(&left, &right, width).unwrap();
        let deriv_at = |s: f64, j: usize| -> f64 {
            c.iter()
                .enumerate()
                .filter(|(i, _)| *i >= j)
                .map(|(i, a)| a * factorial(i) / factorial(i - j) * s.powi((i - j) as i32))
                .sum::<f64>()
                / width.powi(j as i32)
        };
        for j in 0..4 {
            assert_relative_eq!(deriv_at(0.0, j), left[j], epsilon = 1e-11);
            assert_relative_eq!(deriv_at(1.0, j), right[j], epsilon = 1e-11);
        }
    }

    #[test]
    fn sqrt_glide_residual_and_cocycle() {
        let psi = make_sqrt_glide();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let report = verify_abel(&sol, &small_grid(-10.0, 10.0), RESIDUAL_TOL, &[], None);
        assert!(report.within_tolerance, "{report:?}");
        for x in [-3.1, -0.4, 0.7, 2.2] {
            let h = sol.try_eval(x).unwrap();
            let mut y = x;
            for n in 1..=20 {
                y = psi.eval(y);
                let e = (sol.try_eval(y).unwrap() - h - n as f64).abs();
                assert!(e <= n as f64 * RESIDUAL_TOL, "x = {x}, n = {n}: {e}");
            }
        }
    }

    #[test]
    fn junctions_are_smooth() {
        // one-sided difference quotients at ψ_n(x₀) agree
        let psi = make_sqrt_glide();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let mut p = 0.0;
        for _ in 0..3 {
            p = psi.eval(p);
            let h = 1e-5;
            let left = (sol.try_eval(p).unwrap() - sol.try_eval(p - h).unwrap()) / h;
            let right = (sol.try_eval(p + h).unwrap() - sol.try_eval(p).unwrap()) / h;
            assert!((left - right).abs() < 1e-3, "at {p}: {left} vs {right}");
            let below = sol.try_jet(p - 1e-9, 2).unwrap();
            let above = sol.try_jet(p + 1e-9, 2).unwrap();
            assert_relative_eq!(below.deriv(2), above.deriv(2), max_relative = 1e-4, epsilon = 1e-6);
        }
    }

    #[test]
    fn exp_double_on_its_range() {
        let psi = make_exp_double();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 1.0, None).unwrap();
        for x in [1.0, 1.3, 1.75, 1.999] {
            let h = sol.try_eval(x).unwrap();
            for n in 1..=8 {
                let y = 2f64.powi(n) * x;
                assert_relative_eq!(sol.try_eval(y).unwrap(), h + n as f64, epsilon = 1e-12);
            }
        }
        let report = verify_abel(&sol, &small_grid(-5.0, 20.0), RESIDUAL_TOL, &[], None);
        assert!(report.within_tolerance, "{report:?}");
    }

    #[derive(Debug)]
    struct Corrupted(AbelSolution);

    impl Corrupted {
        fn bump(x: f64) -> Jet {
            // 0.1·(1 − (x−2)²)⁴ on [1, 3], peak 0.1 at x = 2
            let t = Jet::affine(x, 1.0, -2.0, 2);
            if t.value().abs() >= 1.0 {
                return Jet::constant(x, 0.0, 2);
            }
            let one_minus = (&t * &t).scale(-1.0).add_const(1.0);
            let sq = &one_minus * &one_minus;
            (&sq * &sq).scale(0.1)
        }
    }

    impl SmoothMap for Corrupted {
        fn eval(&self, x: f64) -> f64 {
            SmoothMap::eval(&self.0, x) + Self::bump(x).value()
        }

        fn jet(&self, x: f64, order: usize) -> Jet {
            let base = SmoothMap::jet(&self.0, x, order);
            let bump = Self::bump(x).truncate(order.min(2));
            let derivs =
                base.derivs().iter().enumerate().map(|(j, d)| d + if j <= 2 { bump.deriv(j) } else { 0.0 }).collect();
            Jet::new(x, derivs)
        }
    }

    #[test]
    fn corrupted_solution_is_detected() {
        let psi = make_translation(1.0).unwrap();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let clean = residual_scan(&psi, &sol, 1.0, &small_grid(-5.0, 5.0));
        assert!(clean.max_residual < 1e-14);
        let scan = residual_scan(&psi, &Corrupted(sol), 1.0, &small_grid(-5.0, 5.0));
        assert_relative_eq!(scan.max_residual, 0.1, max_relative = 1e-6);
    }

    #[test]
    fn conjugacy_identity_and_bump() {
        let psi = make_translation(1.0).unwrap();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let id = |t: f64| t;
        let bump = |t: f64| (-t * t).exp();
        let fs = [
            TestFunction { label: "identity".into(), f: &id, lipschitz: 1.0 },
            TestFunction { label: "gaussian".into(), f: &bump, lipschitz: 1.0 },
        ];
        let report = quasi_conjugacy_check(&sol, &fs, &small_grid(-10.0, 10.0)).unwrap();
        assert!(report.rows[1].max_discrepancy < 1e-15);
        assert_eq!(report.rows[0].max_discrepancy, report.max_residual);

        let psi = make_sqrt_glide();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let report = quasi_conjugacy_check(&sol, &fs, &small_grid(-10.0, 10.0)).unwrap();
        assert_eq!(report.rows[0].max_discrepancy, report.max_residual);
        assert!(report.rows.iter().all(|r| r.within_bound), "{report:?}");
        // sup |f'| = √(2/e) for the gaussian
        assert!(report.rows[1].max_discrepancy <= (2.0 / core::f64::consts::E).sqrt() * RESIDUAL_TOL);
    }

    #[test]
    fn seed_infeasible_and_usage_errors() {
        let psi = make_sqrt_glide();
        let err = solve_abel(&psi, DEFAULT_ORDER, 0.0, Some(1e3)).unwrap_err();
        assert!(matches!(err, Error::SeedInfeasible(_)), "{err:?}");
        let fixed = Symbol::new(
            "fixed",
            psi.map().clone(),
            crate::symbols::SymbolProps::increasing_bijection(Displacement::HasFixedPoint),
            psi.growth().clone(),
        );
        assert!(matches!(solve_abel(&fixed, DEFAULT_ORDER, 0.0, None), Err(Error::Usage(_))));
    }

    #[test]
    fn tiled_solver_runs() {
        let psi = make_tiled_3x();
        let sol = solve_abel(&psi, DEFAULT_ORDER, 0.0, None).unwrap();
        let report = verify_abel(&sol, &small_grid(-5.0, 5.0), RESIDUAL_TOL, &[], None);
        assert!(report.within_tolerance, "{report:?}");
    }

    #[test]
    fn translation_is_stamped() {
        let psi = make_translation(1.0).unwrap();
        let cfg = DynamicsConfig { grid: small_grid(-10.0, 10.0), ..DynamicsConfig::default() };
        let report = abel_implies_dynamics(&psi, &cfg);
        assert!(report.stamped, "{report:?}");
        let psi = make_tiled_3x();
        let report = abel_implies_dynamics(&psi, &DynamicsConfig { grid: small_grid(-3.0, 3.0), ..cfg });
        assert!(!report.stamped);
        assert_eq!(report.mixing.kind, VerdictKind::FailsWithWitness);
    }
}
