//! Subcommand bodies. Each resolves its configuration, runs the core checks
//! and wraps the result in a [`ReportEnvelope`].

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context as _};
use omdyn::abel::{fit_affine, solve_abel, verify_abel, GridSpec, DEFAULT_ORDER, RESIDUAL_TOL};
use omdyn::classify::{
    check_abel_growth, check_criterion_id, check_hypercyclic_sufficient, check_mixing_bijective, check_mixing_grid,
    check_mixing_nonsurjective, check_necessary, check_not_transitive, DecayProtocol, HypercyclicConfig, MixingConfig,
    Verdict, VerdictKind, A_GRID,
};
use omdyn::error::Error;
use omdyn::hypvec::{
    assemble_g, default_targets, round_robin, select_schedule, verify_orbit_approach, Bump, ScheduleConfig, K_CAP,
};
use omdyn::orbits::orbit;
use omdyn::schwartz::Weight;
use omdyn::symbols::{from_label, Symbol};
use serde::Serialize;
use serde_json::json;

use crate::report::{write_rows, write_table, ReportEnvelope};
use crate::{exit, matrix, Outcome, Params};

pub struct Context {
    pub argv: Vec<String>,
    pub emit_csv: Option<PathBuf>,
}

pub const DEFAULT_CRITERIA: &str = "necessary,mixing_bij";

fn symbol(p: &Params) -> anyhow::Result<Symbol> {
    let label = p.symbol.as_deref().context("--symbol is required")?;
    from_label(label).map_err(|e| anyhow::anyhow!("{e}; catalog: {}", omdyn::symbols::CATALOG.join(", ")))
}

fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn weights(p: &Params, default: Vec<Weight>) -> anyhow::Result<Vec<Weight>> {
    match &p.weights {
        Some(list) => split_list(list).iter().map(|w| Weight::from_label(w).map_err(anyhow::Error::msg)).collect(),
        None => Ok(default),
    }
}

fn labels(ws: &[Weight]) -> Vec<String> {
    ws.iter().map(|w| w.label().to_string()).collect()
}

/// 2 on any witness, else 3 on any hypothesis violation, else 4 on any
/// inconclusive verdict, else 0.
pub fn exit_for(kinds: impl IntoIterator<Item = VerdictKind>) -> i32 {
    let kinds: Vec<VerdictKind> = kinds.into_iter().collect();
    if kinds.contains(&VerdictKind::FailsWithWitness) {
        exit::WITNESS
    } else if kinds.contains(&VerdictKind::HypothesisViolated) {
        exit::HYPOTHESIS
    } else if kinds.contains(&VerdictKind::Inconclusive) {
        exit::INCONCLUSIVE
    } else {
        exit::EVIDENCE
    }
}

pub fn kind_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::EvidenceHolds => "EvidenceHolds",
        VerdictKind::FailsWithWitness => "FailsWithWitness",
        VerdictKind::HypothesisViolated => "HypothesisViolated",
        VerdictKind::Inconclusive => "Inconclusive",
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::UnknownSymbol(_) | Error::UnknownWeight(_) | Error::InvalidParameter(_) => exit::USAGE,
        Error::Usage(_) | Error::Hypothesis(_) => exit::HYPOTHESIS,
        Error::ScheduleCorrupt(_) => exit::WITNESS,
        _ => exit::INCONCLUSIVE,
    }
}

fn emit_tables(ctx: &Context, verdicts: &[Verdict]) -> anyhow::Result<()> {
    if let Some(dir) = &ctx.emit_csv {
        for v in verdicts {
            for t in &v.tables {
                write_table(dir, &[&v.symbol, &v.criterion_id], t)?;
            }
        }
    }
    Ok(())
}

pub fn verdict_line(v: &Verdict) -> String {
    let mut line = format!("{:<24} {:<20} {}", v.criterion_id, kind_name(v.kind), v.stamp);
    if let Some(w) = &v.witness {
        line.push_str(&format!(
            "\n{:<24} witness: {:?} n={} x={} value={:e} log={:.6}{}",
            "",
            w.quantity,
            w.n,
            w.x,
            w.value,
            w.log_value,
            w.weight.as_ref().map(|l| format!(" weight={l}")).unwrap_or_default()
        ));
    }
    line
}

#[derive(Debug, Clone, Serialize)]
struct ClassifyConfig {
    symbol: String,
    criteria: Vec<String>,
    weights: Vec<String>,
    k_max: usize,
    n_max: usize,
    points: usize,
    a_grid: Vec<f64>,
    b: Option<f64>,
    nonsurjective_a: f64,
    j_max: usize,
    alpha: f64,
    beta: f64,
    protocol: DecayProtocol,
}

pub fn classify(p: &Params, ctx: &Context) -> anyhow::Result<Outcome> {
    let psi = symbol(p)?;
    let criteria = split_list(p.criteria.as_deref().unwrap_or(DEFAULT_CRITERIA));
    for c in &criteria {
        check_criterion_id(c).map_err(anyhow::Error::msg)?;
    }
    let ws = weights(p, Weight::default_family())?;
    let base = MixingConfig::default();
    let mixing = MixingConfig {
        k_max: p.kmax.unwrap_or(base.k_max),
        n_max: p.nmax.unwrap_or(base.n_max),
        weights: ws.clone(),
        ..base
    };
    let hyp_base = HypercyclicConfig::default();
    let hyp = HypercyclicConfig {
        j_max: p.jmax.unwrap_or(hyp_base.j_max),
        n_max: p.nmax.unwrap_or(hyp_base.n_max),
        alpha: p.alpha.unwrap_or(hyp_base.alpha),
        beta: p.beta.unwrap_or(hyp_base.beta),
        weights: ws.clone(),
        ..hyp_base
    };
    let a_grid = p.a.map_or_else(|| A_GRID.to_vec(), |a| vec![a]);
    let config = ClassifyConfig {
        symbol: psi.label().into(),
        criteria: criteria.clone(),
        weights: labels(&ws),
        k_max: mixing.k_max,
        n_max: mixing.n_max,
        points: mixing.points,
        a_grid: a_grid.clone(),
        b: p.b,
        nonsurjective_a: p.a.unwrap_or(1.0),
        j_max: hyp.j_max,
        alpha: hyp.alpha,
        beta: hyp.beta,
        protocol: mixing.protocol,
    };
    let start = Instant::now();
    let verdicts: Vec<Verdict> = criteria
        .iter()
        .map(|c| match c.as_str() {
            "necessary" => check_necessary(&psi),
            "mixing_bij" => match p.a {
                Some(a) => check_mixing_bijective(&psi, a, p.b, &mixing),
                None => check_mixing_grid(&psi, &a_grid, &mixing),
            },
            "mixing_nonsurj" => check_mixing_nonsurjective(&psi, config.nonsurjective_a, &mixing),
            "hypercyclic_sufficient" => check_hypercyclic_sufficient(&psi, &hyp),
            "not_transitive" => check_not_transitive(&psi),
            "abel_growth" => check_abel_growth(&psi, &ws, mixing.n_max, &mixing.protocol),
            _ => unreachable!("criterion ids are validated"),
        })
        .collect();
    let elapsed = start.elapsed();
    emit_tables(ctx, &verdicts)?;
    let code = exit_for(verdicts.iter().map(|v| v.kind));
    let summary = verdicts.iter().map(verdict_line).collect();
    let envelope = ReportEnvelope::new(
        "classify",
        &ctx.argv,
        serde_json::to_value(&config)?,
        Some(&psi),
        json!({ "verdicts": verdicts, "exit_code": code }),
        elapsed,
    );
    Ok(Outcome { code, envelope: Some(envelope), summary })
}

#[derive(Debug, Clone, Serialize)]
struct AbelConfig {
    symbol: String,
    order: usize,
    x0: f64,
    seed_slope: Option<f64>,
    grid: GridSpec,
    residual_tol: f64,
    seminorm_order: Option<usize>,
    weights: Vec<String>,
    fit_power: Option<f64>,
    cross_reference_a_grid: Vec<f64>,
}

pub fn abel(p: &Params, ctx: &Context) -> anyhow::Result<Outcome> {
    let psi = symbol(p)?;
    let ws = weights(p, Weight::default_family())?;
    let default_grid = GridSpec::default();
    let grid = GridSpec {
        lo: p.lo.unwrap_or(default_grid.lo),
        hi: p.hi.unwrap_or(default_grid.hi),
        points: p.points.unwrap_or(default_grid.points),
    };
    if !(grid.lo < grid.hi) || grid.points < 2 {
        bail!("grid [{}, {}] with {} points is empty", grid.lo, grid.hi, grid.points);
    }
    let config = AbelConfig {
        symbol: psi.label().into(),
        order: p.k_order.unwrap_or(DEFAULT_ORDER),
        x0: p.x0.unwrap_or(0.0),
        seed_slope: p.c,
        grid: grid.clone(),
        residual_tol: RESIDUAL_TOL,
        seminorm_order: (!p.no_seminorms).then_some(1),
        weights: labels(&ws),
        fit_power: p.fit_power,
        cross_reference_a_grid: A_GRID.to_vec(),
    };
    let start = Instant::now();
    let cross = check_mixing_grid(&psi, &A_GRID, &MixingConfig::default());
    let cross_line = format!("cross-reference mixing_bij: {}", kind_name(cross.kind));
    let cross_json = json!({ "criterion": "mixing_bij", "kind": cross.kind, "witness": cross.witness });
    let sol = match solve_abel(&psi, config.order, config.x0, config.seed_slope) {
        Ok(sol) => sol,
        Err(e) => {
            let code = error_code(&e);
            let envelope = ReportEnvelope::new(
                "abel",
                &ctx.argv,
                serde_json::to_value(&config)?,
                Some(&psi),
                json!({ "error": e.to_string(), "cross_reference": cross_json, "exit_code": code }),
                start.elapsed(),
            );
            return Ok(Outcome {
                code,
                envelope: Some(envelope),
                summary: vec![format!("solve_abel: {e}"), cross_line],
            });
        }
    };
    let report = verify_abel(&sol, &grid, config.residual_tol, &ws, config.seminorm_order);
    let fit = match config.fit_power {
        Some(power) => {
            let hi = grid.hi.max(2.0);
            Some(fit_affine(&sol, |x| x.powf(power), |x| 1.0 + x * x, 1.0, hi, 901).map_err(anyhow::Error::msg)?)
        }
        None => None,
    };
    let elapsed = start.elapsed();
    if let Some(dir) = &ctx.emit_csv {
        let samples = sol.samples(grid.lo, grid.hi, grid.points).map_err(anyhow::Error::msg)?;
        let rows: Vec<Vec<String>> =
            samples.iter().map(|(x, h, d)| vec![x.to_string(), h.to_string(), d.to_string()]).collect();
        write_rows(dir, &[psi.label(), "abel_samples"], &["x", "H", "H_prime"], &rows)?;
    }
    let code = if report.within_tolerance { exit::EVIDENCE } else { exit::WITNESS };
    let mut summary = vec![
        format!(
            "residual max {:e} at x={} (tol {:e}); min |H'| {:e}; monotone {}",
            report.max_residual, report.residual_argmax, report.residual_tol, report.min_derivative, report.monotone
        ),
        format!(
            "fundamental interval {:?}, K={}, seed slope {}",
            report.fundamental_interval, report.order, report.seed_slope
        ),
    ];
    for row in &report.seminorms {
        summary.push(match row.value {
            Some(v) => format!("p_{{{},{}}}(H) = {v:e}", row.m, row.weight),
            None => format!("p_{{{},{}}}(H): {}", row.m, row.weight, row.error.as_deref().unwrap_or("unavailable")),
        });
    }
    if let Some(f) = &fit {
        summary.push(format!(
            "fit H = a*x^p + b on [1, {}]: a={} b={} R^2={} max scaled deviation {:e}",
            grid.hi.max(2.0),
            f.a,
            f.b,
            f.r_squared,
            f.max_scaled_deviation
        ));
    }
    summary.push(cross_line);
    let envelope = ReportEnvelope::new(
        "abel",
        &ctx.argv,
        serde_json::to_value(&config)?,
        Some(&psi),
        json!({ "report": report, "fit": fit, "cross_reference": cross_json, "exit_code": code }),
        elapsed,
    );
    Ok(Outcome { code, envelope: Some(envelope), summary })
}

/// `l:r:amplitude` entries separated by `;`, or `default`.
pub fn parse_targets(spec: &str) -> anyhow::Result<Vec<Bump>> {
    if spec.trim() == "default" {
        return Ok(default_targets());
    }
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let parts: Vec<f64> = entry
                .split(':')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("target `{entry}`"))?;
            let [l, r, amp] = parts[..] else {
                bail!("target `{entry}` must be l:r:amplitude");
            };
            Bump::new(format!("bump[{l},{r}]"), l, r, amp).map_err(anyhow::Error::msg)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct HypvecConfig {
    symbol: String,
    targets: Vec<(f64, f64, f64)>,
    repeats: usize,
    j_max: usize,
    alpha: f64,
    beta: f64,
    k_cap: u64,
    weights: Vec<String>,
    m: usize,
}

pub fn hypvec(p: &Params, ctx: &Context) -> anyhow::Result<Outcome> {
    let psi = symbol(p)?;
    let targets = parse_targets(p.targets.as_deref().unwrap_or("default"))?;
    let ws = weights(p, vec![Weight::gauss(1.0).expect("valid weight")])?;
    let base = ScheduleConfig::default();
    let cfg = ScheduleConfig {
        j_max: p.jmax.unwrap_or(base.j_max),
        alpha: p.alpha.unwrap_or(base.alpha),
        beta: p.beta.unwrap_or(base.beta),
        k_cap: K_CAP,
        ..base
    };
    let config = HypvecConfig {
        symbol: psi.label().into(),
        targets: targets.iter().map(|t| (t.support.0, t.support.1, t.amplitude)).collect(),
        repeats: p.repeats.unwrap_or(3),
        j_max: cfg.j_max,
        alpha: cfg.alpha,
        beta: cfg.beta,
        k_cap: cfg.k_cap,
        weights: labels(&ws),
        m: p.m.unwrap_or(2),
    };
    let start = Instant::now();
    let repetition = round_robin(targets.len(), config.repeats);
    let fail = |e: Error, stage: &str| -> anyhow::Result<Outcome> {
        let code = error_code(&e);
        let envelope = ReportEnvelope::new(
            "hypvec",
            &ctx.argv,
            serde_json::to_value(&config)?,
            Some(&psi),
            json!({ "error": e.to_string(), "stage": stage, "exit_code": code }),
            start.elapsed(),
        );
        Ok(Outcome { code, envelope: Some(envelope), summary: vec![format!("{stage}: {e}")] })
    };
    let schedule = match select_schedule(&psi, &targets, &repetition, &cfg) {
        Ok(s) => s,
        Err(e) => return fail(e, "select_schedule"),
    };
    let g = match assemble_g(&psi, &schedule) {
        Ok(g) => g,
        Err(e) => return fail(e, "assemble_g"),
    };
    let mut approaches = Vec::new();
    for t in 0..targets.len() {
        match verify_orbit_approach(&psi, &g, &schedule, t, &ws, config.m) {
            Ok(r) => approaches.push(r),
            Err(e) => return fail(e, "verify_orbit_approach"),
        }
    }
    let elapsed = start.elapsed();
    let flagged = approaches.iter().any(|r| r.flagged);
    let code = if flagged { exit::WITNESS } else { exit::EVIDENCE };
    if let Some(dir) = &ctx.emit_csv {
        let rows: Vec<Vec<String>> = schedule
            .entries
            .iter()
            .map(|e| {
                let m = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                vec![
                    e.n.to_string(),
                    e.target.to_string(),
                    e.k.to_string(),
                    m(e.margin_a),
                    m(e.margin_b),
                    m(e.margin_c),
                ]
            })
            .collect();
        write_rows(dir, &[psi.label(), "schedule"], &["n", "target", "k", "margin_a", "margin_b", "margin_c"], &rows)?;
        for r in &approaches {
            for t in &r.tables {
                write_table(dir, &[psi.label(), "approach", &format!("target{}", r.target)], t)?;
            }
        }
    }
    let mut summary = vec![format!("schedule k = {:?}", schedule.ks())];
    for r in &approaches {
        for (t, ok) in r.tables.iter().zip(&r.non_increasing) {
            summary.push(format!(
                "target {} {}: {:?} {}",
                r.target,
                t.label,
                t.values(),
                if *ok { "non-increasing" } else { "NOT non-increasing" }
            ));
        }
    }
    let envelope = ReportEnvelope::new(
        "hypvec",
        &ctx.argv,
        serde_json::to_value(&config)?,
        Some(&psi),
        json!({ "schedule": schedule, "summands": g.summands(), "approach": approaches, "exit_code": code }),
        elapsed,
    );
    Ok(Outcome { code, envelope: Some(envelope), summary })
}

pub fn iterate(p: &Params, ctx: &Context) -> anyhow::Result<Outcome> {
    let psi = symbol(p)?;
    let x = p.x.unwrap_or(0.0);
    let n = p.n.unwrap_or(10);
    let config = json!({ "symbol": psi.label(), "x": x, "n": n });
    let start = Instant::now();
    let t = match orbit(&psi, n, x) {
        Ok(t) => t,
        Err(e) => {
            let code = error_code(&e);
            return Ok(Outcome { code, envelope: None, summary: vec![format!("iterate: {e}")] });
        }
    };
    let sign = n.signum();
    let rows: Vec<Vec<String>> =
        t.points.iter().enumerate().map(|(i, xn)| vec![(sign * i as i64).to_string(), xn.to_string()]).collect();
    if let Some(dir) = &ctx.emit_csv {
        write_rows(dir, &[psi.label(), "orbit"], &["n", "x_n"], &rows)?;
    }
    let summary = rows.iter().map(|r| format!("{} {}", r[0], r[1])).collect();
    let envelope =
        ReportEnvelope::new("iterate", &ctx.argv, config, Some(&psi), json!({ "orbit": t }), start.elapsed());
    Ok(Outcome { code: exit::EVIDENCE, envelope: Some(envelope), summary })
}

pub fn examples(_p: &Params, ctx: &Context) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let run = matrix::run_matrix()?;
    let elapsed = start.elapsed();
    if let Some(dir) = &ctx.emit_csv {
        emit_tables(ctx, &run.verdicts)?;
        let rows: Vec<Vec<String>> = run
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.example.clone(),
                    r.criterion.clone(),
                    r.expected.clone(),
                    r.observed.clone(),
                    r.matches.to_string(),
                ]
            })
            .collect();
        write_rows(dir, &["examples_matrix"], &["example", "criterion", "expected", "observed", "match"], &rows)?;
    }
    let all = run.rows.iter().all(|r| r.matches);
    let code = if all { exit::EVIDENCE } else { exit::WITNESS };
    let mut summary =
        vec![format!("{:<18} {:<24} {:<20} {:<20} match", "example", "criterion", "expected", "observed")];
    summary.extend(run.rows.iter().map(|r| {
        format!(
            "{:<18} {:<24} {:<20} {:<20} {}",
            r.example,
            r.criterion,
            r.expected,
            r.observed,
            if r.matches { "yes" } else { "NO" }
        )
    }));
    let envelope = ReportEnvelope::new(
        "examples",
        &ctx.argv,
        serde_json::to_value(matrix::matrix_config())?,
        None,
        json!({ "rows": run.rows, "verdicts": run.verdicts, "exit_code": code }),
        elapsed,
    );
    Ok(Outcome { code, envelope: Some(envelope), summary })
}
