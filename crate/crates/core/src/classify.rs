//! Numerical verdicts for the dynamical criteria: necessary conditions,
//! mixing (bijective and non-surjective symbols), the sufficient condition
//! for hypercyclicity, non-transitivity and the orbit growth condition tied
//! to Abel's equation.
//!
//! Limits are judged by an explicit decay protocol on finite tables, so every
//! verdict is evidence relative to the weight family, `k_max`, `n_max` and
//! protocol recorded in it. The one exception is [`check_not_transitive`],
//! whose conclusion follows from its hypotheses.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{jet_invert_with_floor, Jet};
use crate::numeric::{chebyshev_blocks, chebyshev_points, linspace};
use crate::orbits::{iterate, orbit, transport_jet, transport_prefixes};
use crate::schwartz::{
    default_radii, rapid_decay_test, sampled_sup, DecayTable, Weight, BLOCK_POINTS, BOUND_CAP, T_MAX,
};
use crate::symbols::{reflect, Displacement, Symbol};

/// Half-width of the grid used by [`check_necessary`].
pub const PROBE_RADIUS: f64 = 8.0;
pub const PROBE_POINTS: usize = 1601;
/// Default `a`-grid for the mixing criterion.
pub const A_GRID: [f64; 3] = [-2.0, 0.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    EvidenceHolds,
    FailsWithWitness,
    HypothesisViolated,
    Inconclusive,
}

/// What a witness measures, so it can be recomputed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `v(x)·(ψ_n)^{(k)}(x)` with signed `n`
    WeightedDerivative,
    /// `(ψ_n)^{(k)}(x) / (1+x²)^t` with signed `n`
    UniformBound,
    /// `|n|·v(ψ_n(0))`
    OrbitWeight,
    /// `ψ'(x)`
    Slope,
    /// `ψ(x) − x`
    Displacement,
    /// `(1+x²)^n·|ψ(x) − x|`
    Decay,
    /// `|1 + f'(x)|` with `f = ψ − id`
    SlopeFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub quantity: Quantity,
    pub n: i64,
    pub x: f64,
    pub value: f64,
    pub log_value: f64,
    pub weight: Option<String>,
    pub order: usize,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Fact {
    Number(f64),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion_id: String,
    pub symbol: String,
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    pub tables: Vec<DecayTable>,
    pub weight_family: Vec<String>,
    pub params: BTreeMap<String, f64>,
    pub facts: BTreeMap<String, Fact>,
    pub stamp: String,
}

impl Verdict {
    fn new(criterion_id: &str, psi: &Symbol, kind: VerdictKind) -> Self {
        Verdict {
            criterion_id: criterion_id.to_string(),
            symbol: psi.label().to_string(),
            kind,
            witness: None,
            tables: Vec::new(),
            weight_family: Vec::new(),
            params: BTreeMap::new(),
            facts: BTreeMap::new(),
            stamp: String::new(),
        }
    }

    fn fact(&mut self, key: &str, fact: Fact) {
        self.facts.insert(key.to_string(), fact);
    }

    fn param(&mut self, key: &str, value: f64) {
        self.params.insert(key.to_string(), value);
    }

    pub fn holds(&self) -> bool {
        self.kind == VerdictKind::EvidenceHolds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decays,
    Grows,
    Inconclusive,
}

/// Finite rule for reading a table as "→ 0", "→ ∞" or neither.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProtocol {
    pub window: usize,
    pub decay_tol: f64,
    pub blowup_cap: f64,
}

impl Default for DecayProtocol {
    fn default() -> Self {
        DecayProtocol { window: 5, decay_tol: 1e-8, blowup_cap: 1e6 }
    }
}

impl DecayProtocol {
    /// Decays: the last `window` entries are non-increasing and the final one
    /// is below `decay_tol`. Grows: some entry exceeds `blowup_cap`, or the
    /// last `window` log-values increase with positive fitted slope.
    pub fn assess(&self, table: &DecayTable) -> Trend {
        let rows = &table.rows;
        if rows.len() < self.window.max(2) {
            return Trend::Inconclusive;
        }
        let tail = &rows[rows.len() - self.window..];
        let non_increasing = tail.windows(2).all(|w| w[1].log_value <= w[0].log_value || w[1].value <= w[0].value);
        if non_increasing && tail[tail.len() - 1].value < self.decay_tol {
            return Trend::Decays;
        }
        let log_cap = self.blowup_cap.ln();
        if rows.iter().any(|r| r.value > self.blowup_cap || r.log_value > log_cap) {
            return Trend::Grows;
        }
        let logs: Vec<f64> = tail.iter().map(|r| r.log_value).collect();
        if logs.iter().all(|l| l.is_finite()) && logs.windows(2).all(|w| w[1] > w[0]) && fitted_slope(&logs) > 0.0 {
            return Trend::Grows;
        }
        Trend::Inconclusive
    }

    fn describe(&self) -> String {
        format!("protocol(W={}, tol={:e}, cap={:e})", self.window, self.decay_tol, self.blowup_cap)
    }
}

/// Least-squares slope of `ys` against `0, 1, 2, ...`.
pub fn fitted_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        num += dx * (y - my);
        den += dx * dx;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[derive(Debug, Clone)]
pub struct MixingConfig {
    pub k_max: usize,
    pub n_max: usize,
    pub weights: Vec<Weight>,
    /// sample points per transported interval
    pub points: usize,
    pub protocol: DecayProtocol,
}

impl Default for MixingConfig {
    fn default() -> Self {
        MixingConfig {
            k_max: 3,
            n_max: 40,
            weights: Weight::default_family(),
            points: 65,
            protocol: DecayProtocol::default(),
        }
    }
}

impl MixingConfig {
    fn stamp(&self) -> String {
        format!(
            "evidence relative to weights [{}], k_max={}, n_max={}, {}",
            labels(&self.weights).join(", "),
            self.k_max,
            self.n_max,
            self.protocol.describe()
        )
    }
}

fn labels(weights: &[Weight]) -> Vec<String> {
    weights.iter().map(|w| w.label().to_string()).collect()
}

/// Sampled `ψ' > 0` and a fixed-sign displacement `ψ(x) − x` on `[−8, 8]`.
pub fn check_necessary(psi: &Symbol) -> Verdict {
    let mut verdict = Verdict::new("necessary", psi, VerdictKind::EvidenceHolds);
    let xs = linspace(-PROBE_RADIUS, PROBE_RADIUS, PROBE_POINTS);
    let mut min_slope = (0.0, f64::INFINITY);
    let mut min_disp = (0.0, f64::INFINITY);
    let (mut positive, mut negative) = (false, false);
    for &x in &xs {
        let s = psi.slope(x);
        if !(s >= min_slope.1) {
            min_slope = (x, s);
        }
        let d = psi.displacement(x);
        positive |= d > 0.0;
        negative |= d < 0.0;
        if !(d.abs() >= min_disp.1) {
            min_disp = (x, d.abs());
        }
    }
    verdict.param("probe_radius", PROBE_RADIUS);
    verdict.fact("min_slope", Fact::Number(min_slope.1));
    verdict.fact("min_abs_displacement", Fact::Number(min_disp.1));
    let witness = |quantity, (x, value): (f64, f64)| Witness {
        quantity,
        n: 0,
        x,
        value,
        log_value: value.abs().ln(),
        weight: None,
        order: 1,
        exponent: 0,
    };
    if !(min_slope.1 > 0.0) {
        verdict.kind = VerdictKind::FailsWithWitness;
        verdict.witness = Some(witness(Quantity::Slope, min_slope));
    } else if !(min_disp.1 > 0.0) || (positive && negative) {
        verdict.kind = VerdictKind::FailsWithWitness;
        let x = min_disp.0;
        verdict.witness = Some(witness(Quantity::Displacement, (x, psi.displacement(x))));
    }
    verdict.stamp = format!("sampled on [-{PROBE_RADIUS}, {PROBE_RADIUS}] with {PROBE_POINTS} points");
    verdict
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Direction {
    /// `(ψ_n)^{(k)}` on `ψ_{−n}(I)`
    Forward,
    /// `(ψ_{−n})^{(k)}` on `ψ_n(I)`
    Backward,
}

struct SampledTable {
    table: DecayTable,
    argmax: Vec<f64>,
    direction: Direction,
    order: usize,
    weight: usize,
}

impl SampledTable {
    fn witness(&self, weights: &[Weight]) -> Witness {
        let (i, row) = self
            .table
            .rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log_value.partial_cmp(&b.1.log_value).unwrap_or(core::cmp::Ordering::Less))
            .expect("tables are non-empty");
        let n = row.n as i64;
        Witness {
            quantity: Quantity::WeightedDerivative,
            n: if self.direction == Direction::Forward { n } else { -n },
            x: self.argmax[i],
            value: row.value,
            log_value: row.log_value,
            weight: Some(weights[self.weight].label().to_string()),
            order: self.order,
            exponent: 0,
        }
    }
}

/// `log|D|` for the `k`-th derivative of an inverted prefix jet.
fn log_deriv(jet: Option<&Jet>, k: usize, log_first: f64) -> f64 {
    if k == 1 {
        return log_first;
    }
    match jet {
        Some(j) => j.deriv(k).abs().ln(),
        None => f64::INFINITY,
    }
}

fn weighted_tables(
    psi: &Symbol,
    interval: (f64, f64),
    direction: Direction,
    cfg: &MixingConfig,
    tag: &str,
) -> Result<Vec<SampledTable>> {
    let n_max = cfg.n_max;
    let cells = cfg.k_max * cfg.weights.len();
    let mut best = alloc::vec![alloc::vec![(f64::NEG_INFINITY, f64::NAN); n_max]; cells];
    let steps = match direction {
        Direction::Forward => -(n_max as i64),
        Direction::Backward => n_max as i64,
    };
    for y in chebyshev_points(interval.0, interval.1, cfg.points) {
        let prefixes = transport_prefixes(psi, steps, y, cfg.k_max)?;
        for (i, step) in prefixes.iter().enumerate() {
            let x = step.point;
            let inverted = jet_invert_with_floor(&step.jet, 0.0).ok();
            let log_first = -step.log_derivative;
            for (wi, w) in cfg.weights.iter().enumerate() {
                let log_v = w.eval(x).ln();
                for k in 1..=cfg.k_max {
                    let l = log_v + log_deriv(inverted.as_ref(), k, log_first);
                    let l = if l.is_nan() { f64::NEG_INFINITY } else { l };
                    let cell = &mut best[(k - 1) * cfg.weights.len() + wi][i];
                    if l > cell.0 || cell.1.is_nan() {
                        *cell = (l, x);
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(cells);
    let dir = match direction {
        Direction::Forward => "forward",
        Direction::Backward => "backward",
    };
    for k in 1..=cfg.k_max {
        for (wi, w) in cfg.weights.iter().enumerate() {
            let rows = &best[(k - 1) * cfg.weights.len() + wi];
            let mut table = DecayTable::new(format!("{dir} k={k} {} {tag}", w.label()));
            let mut argmax = Vec::with_capacity(rows.len());
            for &(l, x) in rows {
                table.push_with_log(l.exp(), l);
                argmax.push(x);
            }
            out.push(SampledTable { table, argmax, direction, order: k, weight: wi });
        }
    }
    Ok(out)
}

fn judge(mut verdict: Verdict, tables: Vec<SampledTable>, weights: &[Weight], protocol: &DecayProtocol) -> Verdict {
    let trends: Vec<Trend> = tables.iter().map(|t| protocol.assess(&t.table)).collect();
    if let Some(i) = trends.iter().position(|t| *t == Trend::Grows) {
        verdict.kind = VerdictKind::FailsWithWitness;
        verdict.witness = Some(tables[i].witness(weights));
        let logs = tables[i].table.log_values();
        let tail = &logs[logs.len().saturating_sub(protocol.window)..];
        verdict.fact("witness_log_slope", Fact::Number(fitted_slope(tail)));
        verdict.fact("witness_table", Fact::Text(tables[i].table.label.clone()));
    } else if trends.iter().all(|t| *t == Trend::Decays) {
        verdict.kind = VerdictKind::EvidenceHolds;
    } else {
        verdict.kind = VerdictKind::Inconclusive;
        if let Some(i) = trends.iter().position(|t| *t != Trend::Decays) {
            verdict.fact("undecided_table", Fact::Text(tables[i].table.label.clone()));
        }
    }
    verdict.tables = tables.into_iter().map(|t| t.table).collect();
    verdict
}

fn ordered(psi: &Symbol, a: f64) -> (f64, f64) {
    let fa = psi.eval(a);
    (a.min(fa), a.max(fa))
}

fn precondition(verdict: &mut Verdict, psi: &Symbol) -> bool {
    let nec = check_necessary(psi);
    if nec.kind != VerdictKind::EvidenceHolds {
        verdict.kind = VerdictKind::HypothesisViolated;
        verdict.witness = nec.witness;
        verdict.fact("reason", Fact::Text("necessary conditions fail".to_string()));
        return false;
    }
    true
}

/// Sampled sups of `|v(x)(ψ_n)^{(k)}(x)|` over `ψ_{−n}([a, ψ(a)])` and of
/// `|v(x)(ψ_{−n})^{(k)}(x)|` over `ψ_n([b, ψ(b)])`, `1 ≤ k ≤ k_max`.
pub fn check_mixing_bijective(psi: &Symbol, a: f64, b: Option<f64>, cfg: &MixingConfig) -> Verdict {
    let b = b.unwrap_or(a);
    let mut verdict = Verdict::new("mixing_bij", psi, VerdictKind::HypothesisViolated);
    verdict.weight_family = labels(&cfg.weights);
    verdict.param("a", a);
    verdict.param("b", b);
    verdict.param("k_max", cfg.k_max as f64);
    verdict.param("n_max", cfg.n_max as f64);
    verdict.stamp = cfg.stamp();
    let props = psi.props();
    if !(props.bijective && props.strictly_increasing) {
        verdict.fact("reason", Fact::Text("symbol is not an increasing bijection".to_string()));
        return verdict;
    }
    if !precondition(&mut verdict, psi) {
        return verdict;
    }
    let tag = format!("a={a} b={b}");
    let tables = weighted_tables(psi, ordered(psi, a), Direction::Forward, cfg, &tag).and_then(|mut fwd| {
        fwd.extend(weighted_tables(psi, ordered(psi, b), Direction::Backward, cfg, &tag)?);
        Ok(fwd)
    });
    match tables {
        Ok(tables) => judge(verdict, tables, &cfg.weights, &cfg.protocol),
        Err(e) => {
            verdict.kind = VerdictKind::Inconclusive;
            verdict.fact("error", Fact::Text(e.to_string()));
            verdict
        }
    }
}

/// Runs [`check_mixing_bijective`] for every `a` in `grid` (with `b = a`).
/// A witness at any `a` refutes mixing; evidence needs every `a` to agree.
pub fn check_mixing_grid(psi: &Symbol, grid: &[f64], cfg: &MixingConfig) -> Verdict {
    let runs: Vec<Verdict> = grid.iter().map(|&a| check_mixing_bijective(psi, a, None, cfg)).collect();
    let mut combined = Verdict::new("mixing_bij", psi, VerdictKind::EvidenceHolds);
    combined.weight_family = labels(&cfg.weights);
    combined.param("k_max", cfg.k_max as f64);
    combined.param("n_max", cfg.n_max as f64);
    combined.stamp = format!("{}; a-grid {:?}", cfg.stamp(), grid);
    let pick = |kind| runs.iter().find(|r| r.kind == kind);
    let lead = pick(VerdictKind::FailsWithWitness)
        .or_else(|| pick(VerdictKind::HypothesisViolated))
        .or_else(|| pick(VerdictKind::Inconclusive));
    if let Some(lead) = lead {
        combined.kind = lead.kind;
        combined.witness = lead.witness.clone();
        combined.facts = lead.facts.clone();
        combined.param("a", lead.params.get("a").copied().unwrap_or(f64::NAN));
    }
    for r in runs {
        combined.tables.extend(r.tables);
    }
    combined
}

/// Backward condition only: `|v(x)(ψ_{−n})^{(k)}(x)|` over `ψ_n([a, ψ(a)])`
/// for an injective symbol whose range is a half-line.
pub fn check_mixing_nonsurjective(psi: &Symbol, a: f64, cfg: &MixingConfig) -> Verdict {
    let mut verdict = Verdict::new("mixing_nonsurj", psi, VerdictKind::HypothesisViolated);
    verdict.weight_family = labels(&cfg.weights);
    verdict.param("a", a);
    verdict.param("k_max", cfg.k_max as f64);
    verdict.param("n_max", cfg.n_max as f64);
    verdict.stamp = cfg.stamp();
    let props = psi.props();
    let (lo, hi) = props.range;
    let half_line = lo.is_finite() != hi.is_finite();
    if !props.strictly_increasing || props.bijective || !half_line {
        verdict.fact("reason", Fact::Text("symbol is not injective with a half-line range".to_string()));
        return verdict;
    }
    if !precondition(&mut verdict, psi) {
        return verdict;
    }
    match weighted_tables(psi, ordered(psi, a), Direction::Backward, cfg, &format!("a={a}")) {
        Ok(tables) => judge(verdict, tables, &cfg.weights, &cfg.protocol),
        Err(e) => {
            verdict.kind = VerdictKind::Inconclusive;
            verdict.fact("error", Fact::Text(e.to_string()));
            verdict
        }
    }
}

#[derive(Debug, Clone)]
pub struct HypercyclicConfig {
    pub j_max: usize,
    pub n_max: usize,
    pub alpha: f64,
    pub beta: f64,
    /// length of the sampled half-lines `(β, β+span]` and `[α−span, α)`
    pub span: f64,
    pub per_unit: usize,
    pub weights: Vec<Weight>,
    pub protocol: DecayProtocol,
}

impl Default for HypercyclicConfig {
    fn default() -> Self {
        HypercyclicConfig {
            j_max: 3,
            n_max: 40,
            alpha: 0.0,
            beta: 0.0,
            span: 32.0,
            per_unit: 9,
            weights: Weight::default_family(),
            protocol: DecayProtocol::default(),
        }
    }
}

/// Per-point data of `ψ_{±n}` on a grid: `(x, jets, log|(ψ_{±n})'(x)|)`.
struct GridTransport {
    xs: Vec<f64>,
    forward: Vec<Vec<(Jet, f64)>>,
    backward: Vec<Vec<(Jet, f64)>>,
}

fn grid_transport(psi: &Symbol, xs: Vec<f64>, n_max: usize, order: usize) -> Result<GridTransport> {
    let mut forward = Vec::with_capacity(xs.len());
    let mut backward = Vec::with_capacity(xs.len());
    for &x in &xs {
        let f = transport_prefixes(psi, n_max as i64, x, order)?;
        let b = transport_prefixes(psi, -(n_max as i64), x, order)?;
        forward.push(f.into_iter().map(|s| (s.jet, s.log_derivative)).collect());
        backward.push(b.into_iter().map(|s| (s.jet, s.log_derivative)).collect());
    }
    Ok(GridTransport { xs, forward, backward })
}

fn log_abs_deriv(entry: &(Jet, f64), j: usize) -> f64 {
    if j == 1 {
        entry.1
    } else {
        entry.0.deriv(j).abs().ln()
    }
}

/// Fits uniform-in-`n` bounds `|(ψ_{−n})^{(j)}(x)| ≤ C_j(1+x²)^{t_j}` on
/// `(β, ∞)` and `|(ψ_n)^{(j)}(x)| ≤ C_j(1+x²)^{t_j}` on `(−∞, α)`, and reports
/// whether `{(ψ_n)'}` stays bounded in every weighted seminorm of the family.
pub fn check_hypercyclic_sufficient(psi: &Symbol, cfg: &HypercyclicConfig) -> Verdict {
    let mut verdict = Verdict::new("hypercyclic_sufficient", psi, VerdictKind::HypothesisViolated);
    verdict.weight_family = labels(&cfg.weights);
    verdict.param("j_max", cfg.j_max as f64);
    verdict.param("n_max", cfg.n_max as f64);
    verdict.param("alpha", cfg.alpha);
    verdict.param("beta", cfg.beta);
    verdict.stamp = format!(
        "evidence relative to j_max={}, n_max={}, sampled half-lines of length {}, {}",
        cfg.j_max,
        cfg.n_max,
        cfg.span,
        cfg.protocol.describe()
    );
    let props = psi.props();
    if !(props.bijective && props.strictly_increasing) {
        verdict.fact("reason", Fact::Text("symbol is not an increasing bijection".to_string()));
        return verdict;
    }
    if !precondition(&mut verdict, psi) {
        return verdict;
    }
    let (work, alpha, beta) = if props.displacement == Displacement::BelowDiagonal {
        verdict.fact("reflected", Fact::Flag(true));
        (reflect(psi), -cfg.alpha, -cfg.beta)
    } else {
        (psi.clone(), cfg.alpha, cfg.beta)
    };
    let lo = (alpha - cfg.span).min(-cfg.span);
    let hi = (beta + cfg.span).max(cfg.span);
    let grid = match grid_transport(&work, chebyshev_blocks(lo, hi, cfg.per_unit), cfg.n_max, cfg.j_max) {
        Ok(g) => g,
        Err(e) => {
            verdict.kind = VerdictKind::Inconclusive;
            verdict.fact("error", Fact::Text(e.to_string()));
            return verdict;
        }
    };
    verdict.kind = VerdictKind::EvidenceHolds;
    for j in 1..=cfg.j_max {
        let mut accepted = None;
        let mut last = None;
        for t in 0..=T_MAX {
            let mut table = DecayTable::new(format!("uniform bound j={j} t={t}"));
            let mut args = Vec::with_capacity(cfg.n_max);
            for n in 0..cfg.n_max {
                let mut best = (f64::NEG_INFINITY, 0.0, 0i64);
                for (i, &x) in grid.xs.iter().enumerate() {
                    let poly = t as f64 * (1.0 + x * x).ln();
                    if x >= beta {
                        let l = log_abs_deriv(&grid.backward[i][n], j) - poly;
                        if l > best.0 {
                            best = (l, x, -(n as i64 + 1));
                        }
                    }
                    if x <= alpha {
                        let l = log_abs_deriv(&grid.forward[i][n], j) - poly;
                        if l > best.0 {
                            best = (l, x, n as i64 + 1);
                        }
                    }
                }
                table.push_with_log(best.0.exp(), best.0);
                args.push((best.1, best.2));
            }
            let trend = cfg.protocol.assess(&table);
            let max = table.values().into_iter().fold(0.0, f64::max);
            if trend != Trend::Grows && max <= BOUND_CAP {
                accepted = Some((t, max, table));
                break;
            }
            last = Some((t, table, args));
        }
        match accepted {
            Some((t, c, table)) => {
                verdict.fact(&format!("C_{j}"), Fact::Number(c));
                verdict.fact(&format!("t_{j}"), Fact::Number(t as f64));
                verdict.tables.push(table);
            }
            None => {
                let (t, table, args) = last.expect("at least one exponent tried");
                if verdict.kind == VerdictKind::EvidenceHolds {
                    let (i, row) = table
                        .rows
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.log_value.partial_cmp(&b.1.log_value).unwrap_or(core::cmp::Ordering::Less))
                        .unwrap();
                    verdict.kind = VerdictKind::FailsWithWitness;
                    verdict.witness = Some(Witness {
                        quantity: Quantity::UniformBound,
                        n: args[i].1,
                        x: args[i].0,
                        value: row.value,
                        log_value: row.log_value,
                        weight: None,
                        order: j,
                        exponent: t,
                    });
                }
                verdict.tables.push(table);
            }
        }
    }
    // corollary mode: sup_n p_{j_max−1, v}((ψ_n)') across the weight family
    let mut bounded = true;
    for w in &cfg.weights {
        let mut table = DecayTable::new(format!("derivative family {}", w.label()));
        for n in 0..cfg.n_max {
            let mut best = f64::NEG_INFINITY;
            for (i, &x) in grid.xs.iter().enumerate() {
                let lv = w.eval(x).ln();
                for j in 1..=cfg.j_max {
                    best = best
                        .max(lv + log_abs_deriv(&grid.forward[i][n], j))
                        .max(lv + log_abs_deriv(&grid.backward[i][n], j));
                }
            }
            table.push_with_log(best.exp(), best);
        }
        let max = table.values().into_iter().fold(0.0, f64::max);
        bounded &= cfg.protocol.assess(&table) != Trend::Grows && max <= BOUND_CAP;
        verdict.tables.push(table);
    }
    verdict.fact("corollary_bounded", Fact::Flag(bounded));
    verdict
}

/// Hypotheses on `f = ψ − id`: rapid decay, `inf|1 + f'| > 0` and a
/// polynomial growth bound on the derivatives of `f'`.
pub fn check_not_transitive(psi: &Symbol) -> Verdict {
    let mut verdict = Verdict::new("not_transitive", psi, VerdictKind::EvidenceHolds);
    let radii = default_radii();
    let f = |x: f64| psi.displacement(x);

    let decay = rapid_decay_test(&f, T_MAX, &radii);
    verdict.fact("rapid_decay", Fact::Flag(decay.pass));
    let mut failures: Vec<Witness> = Vec::new();
    if let Some((n, x, value)) = decay.witness {
        failures.push(Witness {
            quantity: Quantity::Decay,
            n: n as i64,
            x,
            value,
            log_value: value.ln(),
            weight: None,
            order: 0,
            exponent: n,
        });
    }

    let neg_floor = |x: f64| -(1.0 + psi.displacement_jet(x, 1).deriv(1)).abs();
    let mut floor = (0.0, f64::INFINITY);
    let mut lo = 0.0;
    for &r in &radii {
        for (a, b) in [(lo, r), (-r, -lo)] {
            let (x, v) = sampled_sup(&neg_floor, a, b, BLOCK_POINTS);
            if -v < floor.1 {
                floor = (x, -v);
            }
        }
        lo = r;
    }
    verdict.fact("inf_one_plus_fprime", Fact::Number(floor.1));
    let floor_ok = floor.1 > 1e-8;
    verdict.fact("slope_floor", Fact::Flag(floor_ok));
    if !floor_ok {
        failures.push(Witness {
            quantity: Quantity::SlopeFloor,
            n: 0,
            x: floor.0,
            value: floor.1,
            log_value: floor.1.ln(),
            weight: None,
            order: 1,
            exponent: 0,
        });
    }

    // f' ∈ O_M: for j = 1..4 pick the least t with a bounded, eventually
    // non-increasing profile of |f^{(j)}|/(1+x²)^t along the radius schedule.
    let mut certificate_ok = true;
    for j in 1..=4usize {
        let mut fitted = None;
        for t in 0..=T_MAX {
            let g = |x: f64| psi.displacement_jet(x, j).deriv(j).abs() / (1.0 + x * x).powi(t as i32);
            let mut sups = Vec::with_capacity(radii.len());
            let mut lo = 0.0;
            for &r in &radii {
                let right = sampled_sup(&g, lo, r, BLOCK_POINTS).1;
                let left = sampled_sup(&g, -r, -lo, BLOCK_POINTS).1;
                sups.push(right.max(left));
                lo = r;
            }
            let tail = &sups[sups.len() / 2..];
            let c = sups.iter().copied().fold(0.0, f64::max);
            if c.is_finite() && c <= BOUND_CAP && tail.windows(2).all(|w| w[1] <= w[0]) {
                fitted = Some((c, t));
                break;
            }
        }
        match fitted {
            Some((c, t)) => {
                verdict.fact(&format!("fprime_C_{j}"), Fact::Number(c));
                verdict.fact(&format!("fprime_t_{j}"), Fact::Number(t as f64));
            }
            None => certificate_ok = false,
        }
    }
    verdict.fact("fprime_certificate", Fact::Flag(certificate_ok));

    if decay.pass && floor_ok && certificate_ok {
        verdict.stamp =
            "NOT topologically transitive on O_M(R) (conclusion follows from the verified hypotheses)".to_string();
    } else {
        verdict.kind = VerdictKind::HypothesisViolated;
        verdict.witness = failures.into_iter().next();
        verdict.stamp = "hypotheses not met; no conclusion".to_string();
    }
    verdict
}

/// Tables `n·v(ψ_n(0))` and `n·v(ψ_{−n}(0))`, plus the shortcut
/// `inf |ψ(x) − x| > 0` estimated along the radius schedule.
pub fn check_abel_growth(psi: &Symbol, weights: &[Weight], n_max: usize, protocol: &DecayProtocol) -> Verdict {
    let mut verdict = Verdict::new("abel_growth", psi, VerdictKind::HypothesisViolated);
    verdict.weight_family = labels(weights);
    verdict.param("n_max", n_max as f64);
    verdict.param("x0", 0.0);
    verdict.stamp = format!(
        "evidence relative to weights [{}], n_max={}, {}",
        labels(weights).join(", "),
        n_max,
        protocol.describe()
    );
    let props = psi.props();
    if !(props.bijective && props.strictly_increasing) {
        verdict.fact("reason", Fact::Text("symbol is not an increasing bijection".to_string()));
        return verdict;
    }
    if !precondition(&mut verdict, psi) {
        return verdict;
    }

    let (inf, shortcut) = displacement_floor(psi, protocol.window);
    verdict.fact("inf_displacement", Fact::Number(inf));
    verdict.fact("remark_shortcut", Fact::Flag(shortcut));

    let orbits = orbit(psi, n_max as i64, 0.0).and_then(|f| Ok((f, orbit(psi, -(n_max as i64), 0.0)?)));
    let (fwd, bwd) = match orbits {
        Ok(o) => o,
        Err(e) => {
            verdict.kind = VerdictKind::Inconclusive;
            verdict.fact("error", Fact::Text(e.to_string()));
            return verdict;
        }
    };
    let mut sampled = Vec::new();
    for (wi, w) in weights.iter().enumerate() {
        for (dir, pts, sign) in [("forward", &fwd.points, 1i64), ("backward", &bwd.points, -1i64)] {
            let mut table = DecayTable::new(format!("{dir} n*v(psi_n(0)) {}", w.label()));
            let mut argmax = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                let x = pts[n];
                table.push_with_log(n as f64 * w.eval(x), (n as f64).ln() + w.eval(x).ln());
                argmax.push(x);
            }
            sampled.push((table, argmax, sign, wi));
        }
    }
    let trends: Vec<Trend> = sampled.iter().map(|s| protocol.assess(&s.0)).collect();
    if let Some(i) = trends.iter().position(|t| *t == Trend::Grows) {
        let (table, argmax, sign, wi) = &sampled[i];
        let (r, row) = table
            .rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log_value.partial_cmp(&b.1.log_value).unwrap_or(core::cmp::Ordering::Less))
            .unwrap();
        verdict.kind = VerdictKind::FailsWithWitness;
        verdict.witness = Some(Witness {
            quantity: Quantity::OrbitWeight,
            n: sign * row.n as i64,
            x: argmax[r],
            value: row.value,
            log_value: row.log_value,
            weight: Some(weights[*wi].label().to_string()),
            order: 0,
            exponent: 0,
        });
    } else if trends.iter().all(|t| *t == Trend::Decays) {
        verdict.kind = VerdictKind::EvidenceHolds;
    } else {
        verdict.kind = VerdictKind::Inconclusive;
    }
    verdict.tables = sampled.into_iter().map(|s| s.0).collect();
    verdict
}

/// `inf |ψ(x) − x|` over the radius schedule, and whether the block-wise
/// infima have stopped decreasing (a positive lower bound `β`).
pub fn displacement_floor(psi: &Symbol, window: usize) -> (f64, bool) {
    let neg = |x: f64| -psi.displacement(x).abs();
    let mut lo = 0.0;
    let mut blocks = Vec::new();
    for r in default_radii() {
        let right = -sampled_sup(&neg, lo, r, BLOCK_POINTS).1;
        let left = -sampled_sup(&neg, -r, -lo, BLOCK_POINTS).1;
        blocks.push(right.min(left));
        lo = r;
    }
    let inf = blocks.iter().copied().fold(f64::INFINITY, f64::min);
    let tail = &blocks[blocks.len() - window..];
    let settled = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    (inf, inf > 1e-9 && settled)
}

/// Recomputes a witness from its recorded coordinates, independently of the
/// sampling that found it. Returns `(value, log_value)`.
pub fn recompute_witness(psi: &Symbol, w: &Witness) -> Result<(f64, f64)> {
    let weight = match &w.weight {
        Some(label) => Some(Weight::from_label(label)?),
        None => None,
    };
    let log_weight = |x: f64| weight.as_ref().map_or(0.0, |v| v.eval(x).ln());
    let from_log = |l: f64| Ok((l.exp(), l));
    match w.quantity {
        Quantity::WeightedDerivative | Quantity::UniformBound => {
            let t = transport_jet(psi, w.n, w.x, w.order)?;
            let log_d = if w.order == 1 {
                t.log_derivative.unwrap_or(f64::NAN)
            } else {
                t.jet.as_ref().map_or(f64::NAN, |j| j.deriv(w.order).abs().ln())
            };
            let poly = w.exponent as f64 * (1.0 + w.x * w.x).ln();
            from_log(log_weight(w.x) + log_d - poly)
        }
        Quantity::OrbitWeight => {
            let x = iterate(psi, w.n, 0.0)?;
            from_log((w.n.unsigned_abs() as f64).ln() + log_weight(x))
        }
        Quantity::Slope => {
            let s = psi.slope(w.x);
            Ok((s, s.abs().ln()))
        }
        Quantity::Displacement => {
            let d = psi.displacement(w.x);
            Ok((d, d.abs().ln()))
        }
        Quantity::Decay => {
            let v = (1.0 + w.x * w.x).powi(w.exponent as i32) * psi.displacement(w.x).abs();
            Ok((v, v.ln()))
        }
        Quantity::SlopeFloor => {
            let v = (1.0 + psi.displacement_jet(w.x, 1).deriv(1)).abs();
            Ok((v, v.ln()))
        }
    }
}

/// Parses a criterion id as used in reports and on the command line.
pub fn criterion_ids() -> [&'static str; 6] {
    ["necessary", "mixing_bij", "mixing_nonsurj", "hypercyclic_sufficient", "not_transitive", "abel_growth"]
}

pub fn check_criterion_id(id: &str) -> Result<()> {
    if criterion_ids().contains(&id) {
        Ok(())
    } else {
        Err(Error::Usage(format!("unknown criterion '{id}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{
        make_exp_double, make_gauss_perturbed, make_sqrt_glide, make_tiled_3x, make_translation, GaussianPerturbation,
        GrowthCertificate, SmoothMap, SymbolProps,
    };
    use alloc::sync::Arc;
    use approx::assert_relative_eq;

    fn quick() -> MixingConfig {
        MixingConfig { k_max: 1, n_max: 30, points: 17, ..MixingConfig::default() }
    }

    #[derive(Debug)]
    struct SelfDamped;

    impl SmoothMap for SelfDamped {
        fn eval(&self, x: f64) -> f64 {
            x + x * (-x * x).exp()
        }

        fn jet(&self, x: f64, order: usize) -> Jet {
            let id = Jet::variable(x, order);
            &id + &self.displacement_jet(x, order)
        }

        fn displacement(&self, x: f64) -> f64 {
            x * (-x * x).exp()
        }

        fn displacement_jet(&self, x: f64, order: usize) -> Jet {
            let id = Jet::variable(x, order);
            &id * &(&id * &id).scale(-1.0).exp()
        }
    }

    fn self_damped() -> Symbol {
        Symbol::new(
            "x+x*exp(-x^2)",
            Arc::new(SelfDamped),
            SymbolProps::increasing_bijection(Displacement::HasFixedPoint),
            GrowthCertificate::claimed(alloc::vec![(2.0, 1), (2.0, 0)]),
        )
    }

    #[test]
    fn protocol_reads_tables() {
        let p = DecayProtocol::default();
        let decaying = DecayTable::from_values("d", (1..=10).map(|n| (-(n as f64) * 3.0).exp()));
        assert_eq!(p.assess(&decaying), Trend::Decays);
        let growing = DecayTable::from_values("g", (1..=10).map(|n| 1.1f64.powi(n)));
        assert_eq!(p.assess(&growing), Trend::Grows);
        let flat = DecayTable::from_values("f", core::iter::repeat(1.0).take(10));
        assert_eq!(p.assess(&flat), Trend::Inconclusive);
        let huge = DecayTable::from_values("h", [1.0, 2e6, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(p.assess(&huge), Trend::Grows);
        assert_eq!(p.assess(&DecayTable::from_values("s", [1e-9, 1e-10])), Trend::Inconclusive);
    }

    #[test]
    fn necessary_conditions() {
        assert!(check_necessary(&make_translation(1.0).unwrap()).holds());
        assert!(check_necessary(&make_gauss_perturbed()).holds());
        let v = check_necessary(&self_damped());
        assert_eq!(v.kind, VerdictKind::FailsWithWitness);
        let w = v.witness.unwrap();
        assert_eq!(w.quantity, Quantity::Displacement);
        assert_eq!(w.x, 0.0);
    }

    #[test]
    fn translation_mixes() {
        let psi = make_translation(1.0).unwrap();
        let v = check_mixing_bijective(&psi, 0.0, None, &MixingConfig { k_max: 2, ..quick() });
        assert_eq!(v.kind, VerdictKind::EvidenceHolds, "{:?}", v.facts);
    }

    #[test]
    fn tiled_fails_with_left_exp() {
        let psi = make_tiled_3x();
        let cfg = MixingConfig { weights: alloc::vec![Weight::left_exp()], ..quick() };
        let v = check_mixing_bijective(&psi, 0.0, None, &cfg);
        assert_eq!(v.kind, VerdictKind::FailsWithWitness);
        let w = v.witness.clone().unwrap();
        let (value, log_value) = recompute_witness(&psi, &w).unwrap();
        assert_relative_eq!(value, w.value, max_relative = 1e-2);
        assert_relative_eq!(log_value, w.log_value, max_relative = 1e-2);
        let n = w.n as f64;
        assert_relative_eq!(w.log_value, 1.0 + n * (3f64.ln() - 1.0), max_relative = 1e-6);
    }

    #[test]
    fn reflection_keeps_verdicts() {
        for psi in [make_translation(1.0).unwrap(), make_tiled_3x()] {
            let cfg = quick();
            let plain = check_mixing_grid(&psi, &A_GRID, &cfg).kind;
            let mirrored = check_mixing_grid(&reflect(&psi), &A_GRID, &cfg).kind;
            assert_eq!(plain, mirrored, "{}", psi.label());
        }
    }

    #[test]
    fn nonsurjective_branch() {
        let psi = make_exp_double();
        let cfg = MixingConfig { k_max: 2, ..quick() };
        let v = check_mixing_nonsurjective(&psi, 1.0, &cfg);
        assert_eq!(v.kind, VerdictKind::EvidenceHolds, "{:?}", v.facts);
        let second = v.tables.iter().find(|t| t.label.starts_with("backward k=2 gauss(1)")).unwrap();
        assert!(second.values().iter().all(|x| x.abs() < 1e-12));
        let t = check_mixing_nonsurjective(&make_translation(1.0).unwrap(), 1.0, &cfg);
        assert_eq!(t.kind, VerdictKind::HypothesisViolated);
    }

    #[test]
    fn hypercyclic_sufficient_examples() {
        let cfg = HypercyclicConfig { n_max: 12, per_unit: 3, span: 8.0, ..HypercyclicConfig::default() };
        let v = check_hypercyclic_sufficient(&make_translation(1.0).unwrap(), &cfg);
        assert_eq!(v.kind, VerdictKind::EvidenceHolds);
        assert_eq!(v.facts["C_1"], Fact::Number(1.0));
        assert_eq!(v.facts["t_1"], Fact::Number(0.0));
        assert_eq!(v.facts["C_2"], Fact::Number(0.0));
        assert_eq!(v.facts["corollary_bounded"], Fact::Flag(true));
        let tiled = make_tiled_3x();
        let v = check_hypercyclic_sufficient(&tiled, &cfg);
        assert_eq!(v.kind, VerdictKind::FailsWithWitness);
        assert_eq!(v.facts["corollary_bounded"], Fact::Flag(false));
        let w = v.witness.unwrap();
        let (value, _) = recompute_witness(&tiled, &w).unwrap();
        assert_relative_eq!(value, w.value, max_relative = 1e-2);
        let back = check_hypercyclic_sufficient(&make_translation(-2.0).unwrap(), &cfg);
        assert_eq!(back.kind, VerdictKind::EvidenceHolds);
        assert_eq!(back.facts["reflected"], Fact::Flag(true));
    }

    #[test]
    fn not_transitive_examples() {
        let v = check_not_transitive(&make_gauss_perturbed());
        assert_eq!(v.kind, VerdictKind::EvidenceHolds);
        match v.facts["inf_one_plus_fprime"] {
            Fact::Number(x) => assert!(x >= 0.39 - 1e-3),
            _ => unreachable!(),
        }
        let t = check_not_transitive(&make_translation(1.0).unwrap());
        assert_eq!(t.kind, VerdictKind::HypothesisViolated);
        assert_eq!(t.facts["rapid_decay"], Fact::Flag(false));
        let unit = Symbol::new(
            "x+exp(-x^2)",
            Arc::new(GaussianPerturbation { amplitude: 1.0, sigma: core::f64::consts::FRAC_1_SQRT_2 }),
            SymbolProps::increasing_bijection(Displacement::AboveDiagonal),
            GrowthCertificate::claimed(alloc::vec![(2.0, 1)]),
        );
        assert!(check_not_transitive(&unit).holds());
    }

    #[test]
    fn abel_growth_examples() {
        let p = DecayProtocol::default();
        let g1 = alloc::vec![Weight::gauss(1.0).unwrap()];
        let v = check_abel_growth(&make_sqrt_glide(), &g1, 40, &p);
        assert_eq!(v.kind, VerdictKind::EvidenceHolds);
        let fwd = &v.tables[0];
        let bwd = &v.tables[1];
        for n in 1..=20 {
            let nf = n as f64;
            assert_relative_eq!(fwd.rows[n - 1].value, nf * (-nf).exp(), max_relative = 1e-9);
            assert_relative_eq!(bwd.rows[n - 1].value, nf * (-(nf + 1.0)).exp(), max_relative = 1e-9);
        }
        assert_eq!(v.facts["remark_shortcut"], Fact::Flag(false));
        let t = check_abel_growth(&make_translation(1.0).unwrap(), &g1, 20, &p);
        assert!(t.holds());
        assert_eq!(t.facts["inf_displacement"], Fact::Number(1.0));
        assert_eq!(t.facts["remark_shortcut"], Fact::Flag(true));
    }
}
