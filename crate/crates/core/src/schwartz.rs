//! Rapidly decreasing weights `v`, the even monotone majorant of a rapidly
//! decreasing function, weighted seminorms `p_{m,v}` and a sampled
//! rapid-decay test.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{chebyshev_points, golden_max};
use crate::symbols::{cutoff, GrowthCertificate, SmoothMap};

/// Largest polynomial exponent `t` the decay gauges are validated for.
pub const T_MAX: u32 = 6;
pub const TAIL_TOL: f64 = 1e-12;
pub const BOUND_CAP: f64 = 1e9;
pub const MAX_RANGE: f64 = 1e12;
/// Chebyshev points per sampled block.
pub const BLOCK_POINTS: usize = 257;

const MAJORANT_BLOCKS: usize = 64;

/// `2^j` for `j = 0..=20`.
pub fn default_radii() -> Vec<f64> {
    (0..=20).map(|j| (1u64 << j) as f64).collect()
}

#[derive(Debug, Clone)]
enum Shape {
    Gauss(f64),
    ExpCone(f64),
    LeftExp,
    Majorant(Arc<MajorantTable>),
}

#[derive(Debug, Clone)]
pub struct Weight {
    label: String,
    shape: Shape,
}

fn positive(name: &str, a: f64) -> Result<f64> {
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(Error::InvalidParameter(format!("{name} needs a > 0, got {a}")))
    }
}

impl Weight {
    /// `exp(−a x²)`
    pub fn gauss(a: f64) -> Result<Weight> {
        let a = positive("gauss", a)?;
        Ok(Weight { label: format!("gauss({a})"), shape: Shape::Gauss(a) })
    }

    /// `exp(−a √(1+x²))`
    pub fn expcone(a: f64) -> Result<Weight> {
        let a = positive("expcone", a)?;
        Ok(Weight { label: format!("expcone({a})"), shape: Shape::ExpCone(a) })
    }

    /// `exp(−w(|x|)·|x|)`: equal to `e^x` for `x ≤ −1` and `e^{−x}` for `x ≥ 1`.
    pub fn left_exp() -> Weight {
        Weight { label: "left_exp".to_string(), shape: Shape::LeftExp }
    }

    /// `gauss(1), gauss(0.1), expcone(1), left_exp`
    pub fn default_family() -> Vec<Weight> {
        alloc::vec![
            Weight::gauss(1.0).unwrap(),
            Weight::gauss(0.1).unwrap(),
            Weight::expcone(1.0).unwrap(),
            Weight::left_exp(),
        ]
    }

    /// Parses `gauss(a)`, `expcone(a)` or `left_exp`.
    pub fn from_label(label: &str) -> Result<Weight> {
        let label = label.trim();
        if label == "left_exp" {
            return Ok(Weight::left_exp());
        }
        let parse = |prefix: &str| -> Option<Result<f64>> {
            let inner = label.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.trim().parse::<f64>().map_err(|_| Error::UnknownWeight(label.to_string())))
        };
        if let Some(a) = parse("gauss") {
            return Weight::gauss(a?);
        }
        if let Some(a) = parse("expcone") {
            return Weight::expcone(a?);
        }
        Err(Error::UnknownWeight(label.to_string()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gauss(a) => (-a * x * x).exp(),
            Shape::ExpCone(a) => (-a * (1.0 + x * x).sqrt()).exp(),
            Shape::LeftExp => {
                let y = x.abs();
                (-cutoff(y) * y).exp()
            }
            Shape::Majorant(m) => m.eval(x),
        }
    }

    /// Every catalog weight and every majorant is even and unimodal.
    pub fn monotone_shape(&self) -> bool {
        true
    }

    /// Upper bound for `sup_{|x| ≥ radius} v(x)(1+x²)^t`.
    pub fn decay_gauge(&self, radius: f64, t: u32) -> f64 {
        let r = radius.max(0.0);
        let ti = t as i32;
        let bound = match &self.shape {
            Shape::Gauss(a) => {
                let h = |u: f64| (-a * u).exp() * (1.0 + u).powi(ti);
                let peak = t as f64 / a - 1.0;
                h((r * r).max(peak))
            }
            Shape::ExpCone(a) => {
                let h = |s: f64| (-a * s).exp() * s.powi(2 * ti);
                let peak = 2.0 * t as f64 / a;
                h((1.0 + r * r).sqrt().max(peak))
            }
            Shape::LeftExp => {
                let h = |x: f64| (-x).exp() * (1.0 + x * x).powi(ti);
                let start = r.max(1.0);
                let mut best = h(start);
                if t >= 1 {
                    let tf = t as f64;
                    let peak = tf + (tf * tf - 1.0).sqrt();
                    if peak > start {
                        best = best.max(h(peak));
                    }
                }
                if r < 1.0 {
                    best = best.max(2f64.powi(ti));
                }
                best
            }
            Shape::Majorant(m) => m.gauge(r, t),
        };
        bound * (1.0 + 1e-12)
    }
}

#[derive(Debug)]
struct MajorantTable {
    /// `s_n` for `n = 0..=MAJORANT_BLOCKS + 1`
    s: Vec<f64>,
    /// `|f(x)| ≤ tail_c (1+x²)^{−T_MAX}`
    tail_c: f64,
}

impl MajorantTable {
    fn s(&self, n: usize) -> f64 {
        if n < self.s.len() {
            self.s[n]
        } else {
            let r = (n - 1) as f64;
            self.tail_c / (1.0 + r * r).powi(T_MAX as i32)
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let y = x.abs();
        if !y.is_finite() {
            return 0.0;
        }
        let n = y.floor() as usize;
        let (hi, lo) = (self.s(n), self.s(n + 1));
        lo + (hi - lo) * (1.0 - cutoff(y - n as f64))
    }

    fn gauge(&self, r: f64, t: u32) -> f64 {
        let start = r.floor() as usize;
        let mut best: f64 = 0.0;
        for n in start..start + 4096 {
            let edge = (n + 1) as f64;
            best = best.max(self.s(n) * (1.0 + edge * edge).powi(t as i32));
        }
        best
    }
}

/// Sampled sup of `f` on `[a, b]` over Chebyshev points, refined by golden
/// section around the best sample. Returns `(argmax, max)`.
pub fn sampled_sup<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, count: usize) -> (f64, f64) {
    let pts = chebyshev_points(a, b, count);
    let mut best = (pts[0], f64::NEG_INFINITY);
    let mut best_i = 0;
    for (i, &x) in pts.iter().enumerate() {
        let v = f(x);
        if v > best.1 || (best.1.is_nan() && !v.is_nan()) {
            best = (x, v);
            best_i = i;
        }
    }
    if pts.len() > 2 && best.1.is_finite() && best.1 > 0.0 {
        let lo = pts[best_i.saturating_sub(1)];
        let hi = pts[(best_i + 1).min(pts.len() - 1)];
        let (x, v) = golden_max(lo, hi, f, 48);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Sup of `f` over `{r_lo ≤ |x| ≤ r_hi}`.
fn symmetric_sup<F: Fn(f64) -> f64>(f: &F, r_lo: f64, r_hi: f64) -> (f64, f64) {
    let right = sampled_sup(f, r_lo, r_hi, BLOCK_POINTS);
    let left = sampled_sup(f, -r_hi, -r_lo, BLOCK_POINTS);
    if left.1 > right.1 {
        left
    } else {
        right
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: u32,
    pub value: f64,
    pub log_value: f64,
}

/// A sequence indexed from 1, with values kept alongside their logarithms so
/// overflowing entries stay comparable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTable {
    pub label: String,
    pub rows: Vec<DecayRow>,
}

impl DecayTable {
    pub fn new(label: impl Into<String>) -> Self {
        DecayTable { label: label.into(), rows: Vec::new() }
    }

    pub fn from_values(label: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        let mut t = DecayTable::new(label);
        for v in values {
            t.push(v);
        }
        t
    }

    pub fn push(&mut self, value: f64) {
        self.push_with_log(value, value.abs().ln());
    }

    pub fn push_with_log(&mut self, value: f64, log_value: f64) {
        let n = self.rows.len() as u32 + 1;
        self.rows.push(DecayRow { n, value, log_value });
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn log_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.log_value).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRecord {
    pub n: u32,
    /// sup of `(1+x²)^n |f(x)|` per radius block
    pub block_sups: Vec<f64>,
    pub sup: f64,
    pub argmax: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RapidDecayReport {
    pub pass: bool,
    pub records: Vec<DecayRecord>,
    /// `(n, x, value)` of the first failing exponent
    pub witness: Option<(u32, f64, f64)>,
}

/// Samples `(1+x²)^n |f(x)|` on the blocks `r_{j−1} ≤ |x| ≤ r_j` of the radius
/// schedule. Passes iff for every `n ≤ n_max` the block sups stay below
/// [`BOUND_CAP`] and are non-increasing over the second half of the schedule.
pub fn rapid_decay_test<F: Fn(f64) -> f64>(f: &F, n_max: u32, radii: &[f64]) -> RapidDecayReport {
    let mut records = Vec::new();
    let mut witness = None;
    let tail_from = radii.len() / 2;
    for n in 0..=n_max {
        let g = |x: f64| (1.0 + x * x).powi(n as i32) * f(x).abs();
        let mut block_sups = Vec::with_capacity(radii.len());
        let (mut argmax, mut sup) = (0.0, 0.0f64);
        let mut lo = 0.0;
        let mut failed_at = None;
        for &r in radii {
            let (x, v) = symmetric_sup(&g, lo, r);
            let v = if v.is_nan() { f64::INFINITY } else { v };
            if v > sup {
                sup = v;
                argmax = x;
            }
            if v > BOUND_CAP && failed_at.is_none() {
                failed_at = Some((x, v));
            }
            block_sups.push(v);
            lo = r;
        }
        if failed_at.is_none() {
            let tail = &block_sups[tail_from.min(block_sups.len())..];
            if tail.windows(2).any(|w| w[1] > w[0]) {
                failed_at = Some((argmax, sup));
            }
        }
        records.push(DecayRecord { n, block_sups, sup, argmax });
        if let Some((x, v)) = failed_at {
            witness = Some((n, x, v));
            break;
        }
    }
    RapidDecayReport { pass: witness.is_none(), records, witness }
}

/// Even majorant `g ≥ |f|`, non-increasing in `|x|`, built from
/// `s_n = sup_{|x| ≥ n−1} |f|` and `g = s_{n+1} + (s_n − s_{n+1}) φ(|x| − n)`.
pub fn majorant<F: Fn(f64) -> f64>(f: &F, label: impl Into<String>) -> Result<Weight> {
    let report = rapid_decay_test(f, T_MAX, &default_radii());
    if let Some((n, x, _)) = report.witness {
        return Err(Error::DecayValidation { n, x });
    }
    let tail_c = report.records.last().map_or(0.0, |r| r.sup) * 1.01;
    let abs = |x: f64| f(x).abs();
    let blocks: Vec<f64> =
        (0..MAJORANT_BLOCKS).map(|k| symmetric_sup(&abs, k as f64, (k + 1) as f64).1 * (1.0 + 1e-3)).collect();
    let edge = MAJORANT_BLOCKS as f64;
    let tail = tail_c / (1.0 + edge * edge).powi(T_MAX as i32);
    let mut s = alloc::vec![0.0; MAJORANT_BLOCKS + 2];
    let mut running = tail;
    for n in (1..=MAJORANT_BLOCKS + 1).rev() {
        if n - 1 < MAJORANT_BLOCKS {
            running = running.max(blocks[n - 1]);
        }
        s[n] = running;
    }
    s[0] = s[1];
    Ok(Weight { label: label.into(), shape: Shape::Majorant(Arc::new(MajorantTable { s, tail_c })) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub argmax: f64,
    /// sampling radius `R*`
    pub radius: f64,
    /// certified bound for `|x| > R*`
    pub tail_bound: f64,
}

/// `p_{m,v}(f) = sup_x max_{j ≤ m} |v(x) f^{(j)}(x)|`, sampled on `|x| ≤ R*`
/// where the certificate and the weight's gauge push the tail below [`TAIL_TOL`].
pub fn seminorm(f: &dyn SmoothMap, cert: &GrowthCertificate, m: usize, v: &Weight) -> Result<SeminormEstimate> {
    seminorm_with_tol(f, cert, m, v, TAIL_TOL)
}

pub fn seminorm_with_tol(
    f: &dyn SmoothMap,
    cert: &GrowthCertificate,
    m: usize,
    v: &Weight,
    tail_tol: f64,
) -> Result<SeminormEstimate> {
    if m > cert.max_order() {
        return Err(Error::InvalidParameter(format!(
            "certificate covers orders up to {}, seminorm needs {m}",
            cert.max_order()
        )));
    }
    let t = (0..=m).map(|j| cert.bounds[j].1).max().unwrap_or(0);
    let c = cert.max_constant(m);
    let mut radius = 1.0;
    let tail_bound = loop {
        let tail = v.decay_gauge(radius, t) * c;
        if tail < tail_tol {
            break tail;
        }
        radius *= 2.0;
        if radius > MAX_RANGE {
            return Err(Error::UnboundedTail { max_range: MAX_RANGE, tail_tol });
        }
    };
    let g = |x: f64| {
        let jet = f.jet(x, m);
        let w = v.eval(x);
        jet.derivs().iter().map(|d| (w * d).abs()).fold(0.0, f64::max)
    };
    let mut best = symmetric_sup(&g, 0.0, 1.0);
    let mut lo = 1.0;
    while lo < radius {
        let hi = (2.0 * lo).min(radius);
        let cand = symmetric_sup(&g, lo, hi);
        if cand.1 > best.1 {
            best = cand;
        }
        lo = hi;
    }
    Ok(SeminormEstimate { value: best.1, argmax: best.0, radius, tail_bound })
}
