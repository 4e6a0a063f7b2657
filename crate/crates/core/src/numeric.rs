//! Small numerical helpers shared across modules: sampling grids and
//! Gauss-Legendre quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

/// `count` Chebyshev-Lobatto points on `[a, b]`, endpoints included, ascending.
pub fn chebyshev_points(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![0.5 * (a + b)],
        _ => {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let last = (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == 0 {
                        a
                    } else if i == count - 1 {
                        b
                    } else {
                        mid - half * (PI * i as f64 / last).cos()
                    }
                })
                .collect()
        }
    }
}

/// Chebyshev points per unit interval over `[a, b]`, blocks glued without duplicates.
pub fn chebyshev_blocks(a: f64, b: f64, per_unit: usize) -> Vec<f64> {
    let blocks = ((b - a).ceil() as usize).max(1);
    let width = (b - a) / blocks as f64;
    let mut out = Vec::with_capacity(blocks * per_unit);
    for i in 0..blocks {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == blocks { b } else { lo + width };
        let pts = chebyshev_points(lo, hi, per_unit);
        let skip = usize::from(i > 0);
        out.extend(pts.into_iter().skip(skip));
    }
    out
}

pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![a];
    }
    let last = (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { b } else { a + (b - a) * (i as f64 / last) }).collect()
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(-x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(mut a: f64, mut b: f64, f: F, iters: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(10);
        let v = gl.integrate(-1.0, 2.0, |x| x.powi(19) - 3.0 * x.powi(4));
        let exact = (2f64.powi(20) - 1.0) / 20.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert_relative_eq!(v, exact, max_relative = 1e-13);
    }

    #[test]
    fn chebyshev_grid_includes_endpoints() {
        let p = chebyshev_points(-2.0, 3.0, 65);
        assert_eq!(p[0], -2.0);
        assert_eq!(p[64], 3.0);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        let b = chebyshev_blocks(0.0, 3.0, 5);
        assert_eq!(b.len(), 13);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, v) = golden_max(0.0, 3.0, |x| x * (-x * x).exp(), 80);
        assert_relative_eq!(x, 0.5f64.sqrt(), epsilon = 1e-7);
        assert_relative_eq!(v, 0.5f64.sqrt() * (-0.5f64).exp(), epsilon = 1e-12);
    }
}
