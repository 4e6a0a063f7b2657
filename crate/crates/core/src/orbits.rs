//! Orbits of a symbol: iterates `ψ_n` for `n ∈ ℤ`, numerical inversion and
//! transport of jets along an orbit.
//!
//! Backward jets are built one step at a time (invert the one-step jet, then
//! compose), so each factor stays moderate even when the product over many
//! steps does not. A running `Σ log|ψ'|` is kept next to the jet so that
//! derivative growth stays readable after the jet itself overflows.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{jet_compose, jet_invert_with_floor, Jet};
use crate::symbols::Symbol;

/// Largest magnitude the inversion bracket may reach.
pub const MAX_RANGE: f64 = 1e12;

const BISECTION_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTransport {
    pub symbol: alloc::string::String,
    pub start: f64,
    pub steps: i64,
    /// `x, ψ_{±1}(x), ..., ψ_n(x)`
    pub points: Vec<f64>,
    pub jet: Option<Jet>,
    /// `Σ log|ψ'|` along the orbit, i.e. `log|(ψ_n)'(x)|`.
    pub log_derivative: Option<f64>,
    pub overflow: bool,
}

impl OrbitTransport {
    pub fn end(&self) -> f64 {
        *self.points.last().expect("orbit holds its start point")
    }
}

/// `ψ^{-1}(y)` by bracketed, safeguarded Newton iteration.
pub fn inverse_eval(psi: &Symbol, y: f64) -> Result<f64> {
    let props = psi.props();
    if !props.strictly_increasing {
        return Err(Error::Usage(alloc::format!("{} is not strictly increasing", psi.label())));
    }
    if !y.is_finite() || !psi.in_range(y) {
        return Err(Error::OutOfRange(y));
    }
    let f = |x: f64| psi.eval(x) - y;
    let (mut lo, mut hi);
    let at_y = f(y);
    if at_y == 0.0 {
        return Ok(y);
    }
    let mut step = 1.0f64.max(y.abs() * 1e-3);
    if at_y > 0.0 {
        hi = y;
        lo = y - step;
        while f(lo) > 0.0 {
            hi = lo;
            step *= 2.0;
            lo = y - step;
            if lo.abs() > MAX_RANGE {
                return Err(Error::OutOfRange(y));
            }
        }
    } else {
        lo = y;
        hi = y + step;
        while f(hi) < 0.0 {
            lo = hi;
            step *= 2.0;
            hi = y + step;
            if hi.abs() > MAX_RANGE {
                return Err(Error::OutOfRange(y));
            }
        }
    }
    // Newton steps kept inside the bracket, bisection otherwise
    let mut x = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, x);
    for _ in 0..400 {
        let fx = f(x);
        if fx.abs() < best.0 {
            best = (fx.abs(), x);
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = psi.slope(x);
        let newton = x - fx / slope;
        if slope > 0.0 && newton > lo && newton < hi {
            let converged = (newton - x).abs() <= 4.0 * f64::EPSILON * x.abs();
            x = newton;
            if converged {
                break;
            }
        } else {
            let floor = BISECTION_WIDTH.max(4.0 * f64::EPSILON * lo.abs().max(hi.abs()));
            if hi - lo <= floor {
                break;
            }
            x = 0.5 * (lo + hi);
        }
    }
    for _ in 0..2 {
        let fx = f(x);
        if fx.abs() < best.0 {
            best = (fx.abs(), x);
        }
        let slope = psi.slope(x);
        if !(slope > 0.0) || fx == 0.0 {
            break;
        }
        x -= fx / slope;
    }
    let x = best.1;
    Ok(x)
}

/// `ψ_n(x)`; negative `n` inverts step by step.
pub fn iterate(psi: &Symbol, n: i64, x: f64) -> Result<f64> {
    let mut y = x;
    if n >= 0 {
        for _ in 0..n {
            y = psi.eval(y);
            if !y.is_finite() {
                break;
            }
        }
    } else {
        for _ in 0..n.unsigned_abs() {
            y = inverse_eval(psi, y)?;
        }
    }
    Ok(y)
}

/// Orbit points `x, ..., ψ_n(x)` without jets.
pub fn orbit(psi: &Symbol, n: i64, x: f64) -> Result<OrbitTransport> {
    let mut points = Vec::with_capacity(n.unsigned_abs() as usize + 1);
    points.push(x);
    let mut y = x;
    let mut overflow = false;
    for _ in 0..n.unsigned_abs() {
        y = if n > 0 { psi.eval(y) } else { inverse_eval(psi, y)? };
        overflow |= !y.is_finite();
        points.push(y);
    }
    Ok(OrbitTransport {
        symbol: psi.label().into(),
        start: x,
        steps: n,
        points,
        jet: None,
        log_derivative: None,
        overflow,
    })
}

/// One entry of a transported orbit: the point `ψ_{±i}(x)`, the jet of
/// `ψ_{±i}` at `x` and `log|(ψ_{±i})'(x)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportStep {
    pub point: f64,
    pub jet: Jet,
    pub log_derivative: f64,
}

/// Jets of `ψ_{±i}` at `x` for `i = 1..=|n|`, built incrementally.
pub fn transport_prefixes(psi: &Symbol, n: i64, x: f64, order: usize) -> Result<Vec<TransportStep>> {
    let steps = n.unsigned_abs() as usize;
    let mut out = Vec::with_capacity(steps);
    let mut jet = Jet::variable(x, order);
    let mut here = x;
    let mut log_derivative = 0.0;
    for _ in 0..steps {
        let next;
        if n > 0 {
            next = psi.eval(here);
            let step = psi.jet_at(here, order.max(1));
            log_derivative += step.deriv(1).abs().ln();
            jet = jet_compose(&step.truncate(order), &jet)?;
        } else {
            next = inverse_eval(psi, here)?;
            let forward = psi.jet_at(next, order.max(1));
            log_derivative -= forward.deriv(1).abs().ln();
            // jet of ψ⁻¹ at ψ(next) ≈ here, re-labelled at the exact orbit point
            let step = jet_invert_with_floor(&forward, 0.0)?.rebased(here).truncate(order);
            jet = jet_compose(&step, &jet)?;
        }
        jet = jet.with_value(next);
        here = next;
        out.push(TransportStep { point: next, jet: jet.clone(), log_derivative });
        if !next.is_finite() {
            break;
        }
    }
    Ok(out)
}

/// Jet of `ψ_n` at `x` up to `order`, chained along the orbit.
pub fn transport_jet(psi: &Symbol, n: i64, x: f64, order: usize) -> Result<OrbitTransport> {
    let prefixes = transport_prefixes(psi, n, x, order)?;
    let mut points = Vec::with_capacity(prefixes.len() + 1);
    points.push(x);
    points.extend(prefixes.iter().map(|s| s.point));
    let (jet, log_derivative) = match prefixes.last() {
        Some(s) => (s.jet.clone(), s.log_derivative),
        None => (Jet::variable(x, order), 0.0),
    };
    let overflow = jet.is_overflow() || points.iter().any(|p| !p.is_finite());
    Ok(OrbitTransport {
        symbol: psi.label().into(),
        start: x,
        steps: n,
        points,
        jet: Some(jet),
        log_derivative: Some(log_derivative),
        overflow,
    })
}

/// `ψ_n([a, b]) = [ψ_n(a), ψ_n(b)]` for increasing `ψ`.
pub fn image_interval(psi: &Symbol, n: i64, interval: (f64, f64)) -> Result<(f64, f64)> {
    let (a, b) = interval;
    if a > b {
        return Err(Error::InvalidParameter(alloc::format!("interval [{a}, {b}] is reversed")));
    }
    if !psi.props().strictly_increasing {
        return Err(Error::Usage(alloc::format!("{} is not strictly increasing", psi.label())));
    }
    Ok((iterate(psi, n, a)?, iterate(psi, n, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{make_exp_double, make_sqrt_glide, make_tiled_3x, make_translation};
    use approx::assert_relative_eq;

    #[test]
    fn translation_iterates() {
        let psi = make_translation(1.0).unwrap();
        assert_eq!(iterate(&psi, 7, 0.0).unwrap(), 7.0);
        assert_eq!(iterate(&psi, 0, 3.5).unwrap(), 3.5);
        assert_relative_eq!(inverse_eval(&psi, 0.0).unwrap(), -1.0, epsilon = 1e-13);
        assert_eq!(image_interval(&psi, 3, (0.0, 1.0)).unwrap(), (3.0, 4.0));
        let t = transport_jet(&psi, 5, 0.25, 4).unwrap();
        assert_eq!(t.jet.unwrap().derivs(), &[5.25, 1.0, 0.0, 0.0, 0.0]);
        let t = transport_jet(&psi, -3, 0.25, 3).unwrap();
        let jet = t.jet.unwrap();
        assert_relative_eq!(jet.value(), -2.75, epsilon = 1e-12);
        assert_relative_eq!(jet.deriv(1), 1.0, epsilon = 1e-12);
        assert!(jet.deriv(2).abs() < 1e-12 && jet.deriv(3).abs() < 1e-12);
    }

    #[test]
    fn sqrt_glide_closed_form_orbits() {
        let psi = make_sqrt_glide();
        assert_relative_eq!(iterate(&psi, -5, -2.0).unwrap(), -3.0, epsilon = 1e-12);
        assert_relative_eq!(inverse_eval(&psi, 0.0).unwrap(), -core::f64::consts::SQRT_2, epsilon = 1e-13);
        let (lo, hi) = image_interval(&psi, -4, (-2.0, -3f64.sqrt())).unwrap();
        assert_relative_eq!(lo, -(8f64).sqrt(), epsilon = 1e-12);
        assert_relative_eq!(hi, -(7f64).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn sqrt_glide_backward_jet_matches_closed_form() {
        // ψ_{-4}(x) = −√(x²+4): first derivative −x/√(x²+4), second −4/(x²+4)^{3/2}
        let psi = make_sqrt_glide();
        let jet = transport_jet(&psi, -4, -2.0, 2).unwrap().jet.unwrap();
        let r = (8f64).sqrt();
        assert_relative_eq!(jet.value(), -r, epsilon = 1e-12);
        assert_relative_eq!(jet.deriv(1), 2.0 / r, epsilon = 1e-10);
        assert_relative_eq!(jet.deriv(2), -4.0 / r.powi(3), epsilon = 1e-10);
    }

    #[test]
    fn exp_double_forward() {
        let psi = make_exp_double();
        assert_eq!(iterate(&psi, 10, 1.0).unwrap(), 1024.0);
        let (lo, hi) = image_interval(&psi, 6, (1.0, 2.0)).unwrap();
        assert_eq!((lo, hi), (64.0, 128.0));
        assert_relative_eq!(iterate(&psi, -6, 96.0).unwrap(), 1.5, epsilon = 1e-13);
        assert!(matches!(inverse_eval(&psi, -1.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn tiled_derivative_powers_of_three() {
        let psi = make_tiled_3x();
        for n in 1..=15 {
            let t = transport_jet(&psi, n, 0.0, 1).unwrap();
            assert_relative_eq!(t.jet.unwrap().deriv(1), 3f64.powi(n as i32), max_relative = 1e-12);
            assert_relative_eq!(t.log_derivative.unwrap(), n as f64 * 3f64.ln(), max_relative = 1e-12);
        }
    }

    #[test]
    fn round_trip_inversion() {
        let psi = make_sqrt_glide();
        for i in 0..100 {
            let y = -30.0 + 0.6 * i as f64 + 0.013;
            let x = inverse_eval(&psi, y).unwrap();
            assert!((psi.eval(x) - y).abs() <= 1e-10, "y = {y}");
        }
    }
}
