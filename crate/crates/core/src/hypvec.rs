//! Candidate hypercyclic vectors `g = Σ p_n ∘ ψ_{−k_n}` built from a finite
//! list of bump targets, with the orbit `C_ψ^k g` checked against each target
//! at its revisit times.
//!
//! Schedule conditions are checked on transported supports only: off the
//! support the composed bump vanishes, so `|p^(j)(ψ_d(x))| ≤ |x|` reduces to
//! `deriv_bounds[j] ≤` the distance of the transported support from `0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::classify::{check_hypercyclic_sufficient, HypercyclicConfig, VerdictKind};
use crate::error::{Error, Result};
use crate::jets::{jet_compose, jet_invert_with_floor, Jet};
use crate::numeric::{chebyshev_points, linspace};
use crate::orbits::{image_interval, inverse_eval, iterate, transport_jet, transport_prefixes};
use crate::schwartz::{DecayTable, Weight};
use crate::symbols::{reflect, Displacement, GrowthCertificate, SmoothMap, Symbol};

/// Highest derivative order with a stored bound.
pub const BOUND_ORDER: usize = 8;
pub const K_CAP: u64 = 100_000;
pub const SAFETY: f64 = 1.1;
/// Radius of the compact set for the unweighted part of the approach table.
pub const COMPACT_RADIUS: f64 = 8.0;

const BOUND_SAMPLES: usize = 4001;
const SUPPORT_SAMPLES: usize = 129;

pub const SUPPORT_NOTE: &str =
    "bounds |p^(j)(psi_d(x))| <= |x| checked on the transported support only; the composed bump vanishes elsewhere";

/// `p(x) = A·e·exp(−1/(1−t²))` with `t` the affine map of `[l, r]` onto `[−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bump {
    pub label: String,
    pub support: (f64, f64),
    pub amplitude: f64,
    /// `deriv_bounds[j] ≥ sup |p^(j)|`
    pub deriv_bounds: Vec<f64>,
    pub mirrored: bool,
}

impl Bump {
    pub fn new(label: impl Into<String>, l: f64, r: f64, amplitude: f64) -> Result<Bump> {
        if !(l < r) || !l.is_finite() || !r.is_finite() || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!("bump on [{l}, {r}] with amplitude {amplitude}")));
        }
        let mut bump =
            Bump { label: label.into(), support: (l, r), amplitude, deriv_bounds: Vec::new(), mirrored: false };
        bump.deriv_bounds = bump.sampled_bounds().iter().map(|b| b * SAFETY).collect();
        Ok(bump)
    }

    /// Replaces the bounds; each must dominate the sampled supremum.
    pub fn with_bounds(mut self, bounds: Vec<f64>) -> Result<Bump> {
        let sampled = self.sampled_bounds();
        for (j, (b, s)) in bounds.iter().zip(&sampled).enumerate() {
            if b < s {
                return Err(Error::InvalidParameter(format!("bound {b} below sampled sup {s} of derivative {j}")));
            }
        }
        self.deriv_bounds = bounds;
        Ok(self)
    }

    /// `x ↦ p(−x)`.
    pub fn mirrored(&self) -> Bump {
        Bump {
            label: format!("mirror({})", self.label),
            support: (-self.support.1, -self.support.0),
            mirrored: !self.mirrored,
            ..self.clone()
        }
    }

    fn sampled_bounds(&self) -> Vec<f64> {
        let mut sups = vec![0.0f64; BOUND_ORDER + 1];
        for x in linspace(self.support.0, self.support.1, BOUND_SAMPLES) {
            let jet = self.jet(x, BOUND_ORDER);
            for (s, d) in sups.iter_mut().zip(jet.derivs()) {
                *s = s.max(d.abs());
            }
        }
        sups
    }

    /// `max_{j ≤ order} deriv_bounds[j]`
    pub fn bound_up_to(&self, order: usize) -> f64 {
        self.deriv_bounds.iter().take(order + 1).fold(0.0, |a, b| a.max(*b))
    }

    fn profile_jet(&self, z: f64, order: usize) -> Jet {
        let (l, r) = if self.mirrored { (-self.support.1, -self.support.0) } else { self.support };
        let (c, h) = (0.5 * (l + r), 0.5 * (r - l));
        let t = Jet::affine(z, 1.0 / h, -c / h, order);
        let u = (&t * &t).scale(-1.0).add_const(1.0);
        // below 1e-3 the profile and its derivatives are under e^{-1000}
        if !(u.value() > 1e-3) {
            return Jet::constant(z, 0.0, order);
        }
        u.recip().scale(-1.0).exp().scale(self.amplitude * core::f64::consts::E)
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        if !self.mirrored {
            return self.profile_jet(x, order);
        }
        let inner = self.profile_jet(-x, order);
        let derivs = inner.derivs().iter().enumerate().map(|(j, d)| if j % 2 == 1 { -d } else { *d }).collect();
        Jet::new(x, derivs)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.jet(x, 0).value()
    }
}

/// Three bumps on rational supports of length 8, wide enough that the
/// derivative bounds up to order 3 stay below 20.
pub fn default_targets() -> Vec<Bump> {
    vec![
        Bump::new("bump[0,8]", 0.0, 8.0, 1.0).expect("valid bump"),
        Bump::new("bump[-4,4]", -4.0, 4.0, 0.5).expect("valid bump"),
        Bump::new("bump[2,10]", 2.0, 10.0, 2.0).expect("valid bump"),
    ]
}

/// Round-robin repetition `0, 1, ..., t−1, 0, 1, ...` with `repeats` rounds.
pub fn round_robin(targets: usize, repeats: usize) -> Vec<usize> {
    (0..repeats).flat_map(|_| 0..targets).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleEntry {
    /// 1-based position `n`
    pub n: usize,
    pub target: usize,
    pub k: u64,
    /// `None` for `k_1 = 0`, where the conditions are vacuous
    pub margin_a: Option<f64>,
    pub margin_b: Option<f64>,
    pub margin_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    pub symbol: String,
    pub targets: Vec<Bump>,
    pub repetition: Vec<usize>,
    pub entries: Vec<ScheduleEntry>,
    pub j_max: usize,
    pub alpha: f64,
    pub beta: f64,
    pub k_cap: u64,
    /// selected for the reflected symbol with mirrored targets
    pub reflected: bool,
    pub note: String,
}

impl Schedule {
    pub fn ks(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.k).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ScheduleConfig {
    pub j_max: usize,
    pub alpha: f64,
    pub beta: f64,
    pub k_cap: u64,
    /// hypothesis check run before selection; `None` skips it
    pub hypothesis: Option<HypercyclicConfig>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { j_max: 3, alpha: 0.0, beta: 0.0, k_cap: K_CAP, hypothesis: Some(HypercyclicConfig::default()) }
    }
}

/// Points `ψ_{±d}(start)` for `d = 0, 1, ...`, extended on demand.
struct OrbitCache<'a> {
    psi: &'a Symbol,
    forward: bool,
    points: Vec<f64>,
}

impl<'a> OrbitCache<'a> {
    fn new(psi: &'a Symbol, start: f64, forward: bool) -> Self {
        OrbitCache { psi, forward, points: vec![start] }
    }

    fn get(&mut self, d: u64) -> Result<f64> {
        while self.points.len() as u64 <= d {
            let last = *self.points.last().expect("non-empty");
            let next = if self.forward { self.psi.eval(last) } else { inverse_eval(self.psi, last)? };
            self.points.push(next);
        }
        Ok(self.points[d as usize])
    }
}

/// Smallest admissible `k_{n+1} > k_n` for every `n`, with `k_1 = 0`.
pub fn select_schedule(psi: &Symbol, targets: &[Bump], repetition: &[usize], cfg: &ScheduleConfig) -> Result<Schedule> {
    let props = psi.props();
    if !props.strictly_increasing || !props.fixed_point_free || props.displacement == Displacement::HasFixedPoint {
        return Err(Error::Usage(format!("{} is not an increasing fixed-point-free map", psi.label())));
    }
    if repetition.is_empty() || repetition.iter().any(|&t| t >= targets.len()) {
        return Err(Error::InvalidParameter("repetition map refers to missing targets".into()));
    }
    if cfg.j_max > BOUND_ORDER {
        return Err(Error::InvalidParameter(format!("j_max {} exceeds {BOUND_ORDER}", cfg.j_max)));
    }
    if let Some(hc) = &cfg.hypothesis {
        let hc = HypercyclicConfig { j_max: cfg.j_max, alpha: cfg.alpha, beta: cfg.beta, ..hc.clone() };
        let verdict = check_hypercyclic_sufficient(psi, &hc);
        if verdict.kind != VerdictKind::EvidenceHolds {
            return Err(Error::Hypothesis(format!(
                "{} does not meet the sufficient hypotheses ({:?})",
                psi.label(),
                verdict.kind
            )));
        }
    }
    let reflected = props.displacement == Displacement::BelowDiagonal;
    let (work, bumps, alpha, beta) = if reflected {
        (reflect(psi), targets.iter().map(Bump::mirrored).collect::<Vec<_>>(), -cfg.beta, -cfg.alpha)
    } else {
        (psi.clone(), targets.to_vec(), cfg.alpha, cfg.beta)
    };
    let seq: Vec<&Bump> = repetition.iter().map(|&t| &bumps[t]).collect();
    let mut entries =
        vec![ScheduleEntry { n: 1, target: repetition[0], k: 0, margin_a: None, margin_b: None, margin_c: None }];
    let mut backward: Vec<OrbitCache<'_>> = vec![OrbitCache::new(&work, seq[0].support.1, false)];
    for n in 1..seq.len() {
        let next = seq[n];
        let k_n = entries[n - 1].k;
        let prev_end = iterate(&work, k_n as i64, seq[n - 1].support.1)?;
        let mut forward = OrbitCache::new(&work, next.support.0, true);
        let n_f = n as f64;
        let upper = (-n_f - 1.0).min(alpha);
        let lower = (n_f + 1.0).max(beta);
        let jcap = (n + 1).min(cfg.j_max);
        let bound_next = next.bound_up_to(jcap);
        let mut found = None;
        for k in k_n + 1..=cfg.k_cap {
            let a = forward.get(k)? - prev_end;
            if !(a > 0.0) {
                continue;
            }
            let mut b = f64::INFINITY;
            let mut c = f64::INFINITY;
            let mut ok = true;
            for l in 0..n {
                let d = k - entries[l].k;
                let left_end = backward[l].get(d)?;
                let b_support = upper - left_end;
                let b_bound = -left_end - seq[l].bound_up_to(jcap);
                let right_start = forward.get(d)?;
                let c_support = right_start - lower;
                let c_bound = right_start - bound_next;
                if !(b_support > 0.0 && b_bound >= 0.0 && c_support > 0.0 && c_bound >= 0.0) {
                    ok = false;
                    break;
                }
                b = b.min(b_support.min(b_bound));
                c = c.min(c_support.min(c_bound));
            }
            if ok {
                found = Some((k, a, b, c));
                break;
            }
        }
        let (k, a, b, c) = found.ok_or(Error::ScheduleInfeasible { k_cap: cfg.k_cap })?;
        entries.push(ScheduleEntry {
            n: n + 1,
            target: repetition[n],
            k,
            margin_a: Some(a),
            margin_b: Some(b),
            margin_c: Some(c),
        });
        backward.push(OrbitCache::new(&work, next.support.1, false));
    }
    Ok(Schedule {
        symbol: psi.label().into(),
        targets: targets.to_vec(),
        repetition: repetition.to_vec(),
        entries,
        j_max: cfg.j_max,
        alpha: cfg.alpha,
        beta: cfg.beta,
        k_cap: cfg.k_cap,
        reflected,
        note: SUPPORT_NOTE.into(),
    })
}

/// `g = Σ p_n ∘ ψ_{−k_n}` over the schedule entries.
#[derive(Debug, Clone)]
pub struct HyperVector {
    symbol: Symbol,
    bumps: Vec<Bump>,
    ks: Vec<u64>,
    supports: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summand {
    pub n: usize,
    pub target: String,
    pub k: u64,
    pub support: (f64, f64),
}

pub fn assemble_g(psi: &Symbol, schedule: &Schedule) -> Result<HyperVector> {
    let bumps: Vec<Bump> = schedule.repetition.iter().map(|&t| schedule.targets[t].clone()).collect();
    let ks = schedule.ks();
    let mut supports = Vec::with_capacity(ks.len());
    for (bump, &k) in bumps.iter().zip(&ks) {
        supports.push(image_interval(psi, k as i64, bump.support)?);
    }
    let mut order: Vec<usize> = (0..supports.len()).collect();
    order.sort_by(|&i, &j| supports[i].0.total_cmp(&supports[j].0));
    for w in order.windows(2) {
        let (a, b) = (supports[w[0]], supports[w[1]]);
        if !(a.1 < b.0) {
            return Err(Error::ScheduleCorrupt(format!(
                "supports of summands {} and {} overlap: {a:?}, {b:?}",
                w[0] + 1,
                w[1] + 1
            )));
        }
    }
    Ok(HyperVector { symbol: psi.clone(), bumps, ks, supports })
}

impl HyperVector {
    pub fn summands(&self) -> Vec<Summand> {
        (0..self.ks.len())
            .map(|i| Summand {
                n: i + 1,
                target: self.bumps[i].label.clone(),
                k: self.ks[i],
                support: self.supports[i],
            })
            .collect()
    }

    fn summand_at(&self, x: f64) -> Option<usize> {
        self.supports.iter().position(|&(l, r)| x > l && x < r)
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        match self.summand_at(x) {
            Some(i) => Ok(self.bumps[i].eval(iterate(&self.symbol, -(self.ks[i] as i64), x)?)),
            None => Ok(0.0),
        }
    }

    pub fn try_jet(&self, x: f64, order: usize) -> Result<Jet> {
        let Some(i) = self.summand_at(x) else {
            return Ok(Jet::constant(x, 0.0, order));
        };
        let inner = transport_jet(&self.symbol, -(self.ks[i] as i64), x, order)?.jet.expect("transport carries a jet");
        jet_compose(&self.bumps[i].jet(inner.value(), order), &inner)
    }

    /// Growth certificate with exponent 0, fitted on the hull of the supports.
    pub fn growth_certificate(&self, m: usize) -> GrowthCertificate {
        let lo = self.supports.iter().map(|s| s.0).fold(f64::INFINITY, f64::min) - 1.0;
        let hi = self.supports.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let samples = linspace(lo, hi, 4001);
        GrowthCertificate::fit(|x| SmoothMap::jet(self, x, m), &vec![0; m + 1], &samples, SAFETY)
    }
}

impl SmoothMap for HyperVector {
    fn eval(&self, x: f64) -> f64 {
        self.try_eval(x).unwrap_or(f64::NAN)
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        self.try_jet(x, order).unwrap_or_else(|_| Jet::new(x, vec![f64::NAN; order + 1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedValue {
    pub weight: String,
    pub total: f64,
    /// summands placed before the revisit, supported far left
    pub left: f64,
    /// summands placed after the revisit, supported far right
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachRow {
    pub revisit: usize,
    /// 1-based schedule position of the revisit
    pub entry: usize,
    pub k: u64,
    /// `sup_{|x| ≤ COMPACT_RADIUS} max_{j ≤ m} |(C_ψ^k g − p_N)^(j)(x)|`
    pub compact_sup: f64,
    pub values: Vec<GroupedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachReport {
    pub target: usize,
    pub m: usize,
    pub rows: Vec<ApproachRow>,
    pub tables: Vec<DecayTable>,
    pub non_increasing: Vec<bool>,
    /// some table increases across revisits
    pub flagged: bool,
}

/// `p_{m,v}(C_ψ^{k_s} g − p_N)` at every revisit `s` of target `N`.
///
/// `C_ψ^{k_s} g − p_N = Σ_{n≠s} p_n ∘ ψ_{k_s − k_n}`, a sum with disjoint
/// supports, so each seminorm is the largest summand seminorm. Summands are
/// sampled in pulled-back coordinates `y ∈ supp p_n`.
pub fn verify_orbit_approach(
    psi: &Symbol,
    g: &HyperVector,
    schedule: &Schedule,
    target: usize,
    weights: &[Weight],
    m: usize,
) -> Result<ApproachReport> {
    let revisits: Vec<usize> =
        schedule.repetition.iter().enumerate().filter(|(_, &t)| t == target).map(|(i, _)| i).collect();
    if revisits.is_empty() {
        return Err(Error::InvalidParameter(format!("target {target} never occurs in the schedule")));
    }
    let ks = &g.ks;
    let count = ks.len();
    // sup_x v(x)·max_j |(p_n ∘ ψ_d)^(j)(x)| per (summand, revisit, weight), plus the compact part
    let mut weighted = vec![vec![vec![0.0f64; weights.len()]; revisits.len()]; count];
    let mut compact = vec![vec![0.0f64; revisits.len()]; count];
    for n in 0..count {
        let bump = &g.bumps[n];
        let shifts: Vec<(usize, i64)> = revisits
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != n)
            .map(|(i, &s)| (i, ks[s] as i64 - ks[n] as i64))
            .collect();
        let back = shifts.iter().map(|s| s.1).filter(|d| *d > 0).max().unwrap_or(0);
        let fwd = shifts.iter().map(|s| -s.1).filter(|d| *d > 0).max().unwrap_or(0);
        for y in chebyshev_points(bump.support.0, bump.support.1, SUPPORT_SAMPLES) {
            let outer = bump.jet(y, m);
            let backward = if back > 0 { transport_prefixes(psi, -back, y, m)? } else { Vec::new() };
            let forward = if fwd > 0 { transport_prefixes(psi, fwd, y, m)? } else { Vec::new() };
            for &(i, d) in &shifts {
                // jet of ψ_{−d} at y (value x), inverted to the jet of ψ_d at x
                let step = if d > 0 { &backward[(d - 1) as usize] } else { &forward[(-d - 1) as usize] };
                let x = step.point;
                if !x.is_finite() {
                    continue;
                }
                let Ok(inverse) = jet_invert_with_floor(&step.jet, 0.0) else {
                    continue;
                };
                let Ok(composed) = jet_compose(&outer, &inverse.with_value(y)) else {
                    continue;
                };
                let size = composed.derivs().iter().fold(0.0f64, |a, d| a.max(d.abs()));
                if x.abs() <= COMPACT_RADIUS {
                    compact[n][i] = compact[n][i].max(size);
                }
                for (w, weight) in weights.iter().enumerate() {
                    let value = weight.eval(x) * size;
                    if value > weighted[n][i][w] {
                        weighted[n][i][w] = value;
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(revisits.len());
    for (i, &s) in revisits.iter().enumerate() {
        let values = weights
            .iter()
            .enumerate()
            .map(|(w, weight)| {
                let left = (0..s).map(|n| weighted[n][i][w]).fold(0.0, f64::max);
                let right = (s + 1..count).map(|n| weighted[n][i][w]).fold(0.0, f64::max);
                GroupedValue { weight: weight.label().into(), total: left.max(right), left, right }
            })
            .collect();
        let compact_sup = (0..count).filter(|&n| n != s).map(|n| compact[n][i]).fold(0.0, f64::max);
        rows.push(ApproachRow { revisit: i + 1, entry: s + 1, k: ks[s], compact_sup, values });
    }
    let tables: Vec<DecayTable> = weights
        .iter()
        .enumerate()
        .map(|(w, weight)| {
            DecayTable::from_values(format!("p_{{{m},{}}}", weight.label()), rows.iter().map(|r| r.values[w].total))
        })
        .collect();
    let non_increasing: Vec<bool> = tables.iter().map(|t| t.values().windows(2).all(|p| p[1] <= p[0])).collect();
    let flagged = non_increasing.iter().any(|ok| !ok);
    Ok(ApproachReport { target, m, rows, tables, non_increasing, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::make_translation;
    use approx::assert_relative_eq;

    fn no_check(j_max: usize) -> ScheduleConfig {
        ScheduleConfig { j_max, hypothesis: None, ..ScheduleConfig::default() }
    }

    #[test]
    fn bump_profile_and_bounds() {
        let p = Bump::new("unit", 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(p.eval(0.5), 1.0, epsilon = 1e-15);
        assert_eq!(p.eval(-0.1), 0.0);
        assert_eq!(p.eval(1.0), 0.0);
        // p'(x) at t: −2t/(1−t²)²·p, t = 2x − 1, dt/dx = 2
        let x = 0.3;
        let t: f64 = 2.0 * x - 1.0;
        let expected = p.eval(x) * (-2.0 * t / (1.0 - t * t).powi(2)) * 2.0;
        assert_relative_eq!(p.jet(x, 1).deriv(1), expected, max_relative = 1e-12);
        let m = p.mirrored();
        assert_relative_eq!(m.eval(-0.3), p.eval(0.3), epsilon = 1e-15);
        assert_relative_eq!(m.jet(-0.3, 1).deriv(1), -p.jet(0.3, 1).deriv(1), epsilon = 1e-12);
        assert!(Bump::new("unit", 0.0, 1.0, 1.0).unwrap().with_bounds(vec![0.5; 3]).is_err());
    }

    #[test]
    fn single_target_starts_at_zero() {
        let psi = make_translation(1.0).unwrap();
        let targets = vec![Bump::new("unit", 0.0, 1.0, 1.0).unwrap()];
        let s = select_schedule(&psi, &targets, &[0], &no_check(2)).unwrap();
        assert_eq!(s.ks(), vec![0]);
        let g = assemble_g(&psi, &s).unwrap();
        for x in [0.1, 0.5, 0.77] {
            assert_eq!(g.try_eval(x).unwrap(), targets[0].eval(x));
        }
        let report = verify_orbit_approach(&psi, &g, &s, 0, &[Weight::gauss(1.0).unwrap()], 2).unwrap();
        assert_eq!(report.tables[0].values(), vec![0.0]);
    }

    fn ten_bounded_unit() -> Bump {
        let p = Bump::new("unit", 0.0, 1.0, 0.1).unwrap();
        let bounds = p.deriv_bounds.clone();
        assert!(bounds[..3].iter().all(|b| *b <= 10.0), "{bounds:?}");
        p.with_bounds(vec![10.0; 3]).unwrap()
    }

    #[test]
    fn two_unit_bumps_give_eleven() {
        let psi = make_translation(1.0).unwrap();
        let targets = vec![ten_bounded_unit(), ten_bounded_unit()];
        let s = select_schedule(&psi, &targets, &[0, 1], &no_check(2)).unwrap();
        assert_eq!(s.ks(), vec![0, 11]);
        assert!(s.entries[1].margin_b.unwrap() >= 0.0);
        let g = assemble_g(&psi, &s).unwrap();
        let supports: Vec<_> = g.summands().iter().map(|s| s.support).collect();
        assert_eq!(supports, vec![(0.0, 1.0), (11.0, 12.0)]);
    }

    #[test]
    fn infeasible_under_cap() {
        let psi = make_translation(1.0).unwrap();
        let huge = Bump::new("unit", 0.0, 1.0, 1.0).unwrap().with_bounds(vec![1e9; 3]).unwrap();
        let cfg = ScheduleConfig { k_cap: 1000, ..no_check(2) };
        let err = select_schedule(&psi, &[huge.clone(), huge], &[0, 1], &cfg).unwrap_err();
        assert_eq!(err, Error::ScheduleInfeasible { k_cap: 1000 });
    }

    #[test]
    fn corrupted_schedule_is_detected() {
        let psi = make_translation(1.0).unwrap();
        let targets = vec![ten_bounded_unit(), ten_bounded_unit()];
        let mut s = select_schedule(&psi, &targets, &[0, 1], &no_check(2)).unwrap();
        s.entries[1].k = 0;
        assert!(matches!(assemble_g(&psi, &s), Err(Error::ScheduleCorrupt(_))));
    }

    #[test]
    fn reflected_translation_mirrors_schedule() {
        let up = make_translation(1.0).unwrap();
        let down = make_translation(-1.0).unwrap();
        let targets = default_targets();
        let rep = round_robin(3, 2);
        let s_up = select_schedule(&up, &targets, &rep, &no_check(3)).unwrap();
        let mirrored: Vec<Bump> = targets.iter().map(Bump::mirrored).collect();
        let s_down = select_schedule(&down, &mirrored, &rep, &no_check(3)).unwrap();
        assert!(s_down.reflected);
        assert_eq!(s_up.ks(), s_down.ks());
        let g = assemble_g(&down, &s_down).unwrap();
        for summand in g.summands() {
            assert!(summand.support.1 <= 10.0);
        }
    }

    #[test]
    fn translation_approach_decays() {
        let psi = make_translation(1.0).unwrap();
        let s = select_schedule(&psi, &default_targets(), &round_robin(3, 3), &ScheduleConfig::default()).unwrap();
        let g = assemble_g(&psi, &s).unwrap();
        // C^{k_1} g = g agrees with p_1 on its support
        for x in linspace(0.01, 7.99, 50) {
            assert!((g.try_eval(x).unwrap() - s.targets[0].eval(x)).abs() <= 1e-12);
        }
        let weights = [Weight::gauss(1.0).unwrap()];
        for target in 0..3 {
            let report = verify_orbit_approach(&psi, &g, &s, target, &weights, 2).unwrap();
            assert!(!report.flagged, "{report:?}");
            assert!(*report.tables[0].values().last().unwrap() < 1e-3);
        }
    }
}
