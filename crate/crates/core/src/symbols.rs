//! Symbols `ψ` of composition operators: the trait every map implements,
//! the catalog of worked examples, smooth monotone blends between closed-form
//! pieces, and the reflection `σ(ψ)(x) = −ψ(−x)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
use core::fmt;

use serde::Serialize;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::numeric::{chebyshev_blocks, GaussLegendre};

/// A smooth map `ℝ → ℝ` with jet evaluation.
pub trait SmoothMap: Send + Sync + fmt::Debug {
    fn eval(&self, x: f64) -> f64;

    /// Jet of order `order` at `x`.
    fn jet(&self, x: f64, order: usize) -> Jet;

    fn slope(&self, x: f64) -> f64 {
        self.jet(x, 1).deriv(1)
    }

    /// `ψ(x) − x`; maps with a closed-form displacement override this to avoid cancellation.
    fn displacement(&self, x: f64) -> f64 {
        self.eval(x) - x
    }

    /// Jet of `ψ − id`.
    fn displacement_jet(&self, x: f64, order: usize) -> Jet {
        &self.jet(x, order) - &Jet::variable(x, order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Displacement {
    AboveDiagonal,
    BelowDiagonal,
    HasFixedPoint,
}

impl Displacement {
    pub fn flipped(self) -> Self {
        match self {
            Displacement::AboveDiagonal => Displacement::BelowDiagonal,
            Displacement::BelowDiagonal => Displacement::AboveDiagonal,
            Displacement::HasFixedPoint => Displacement::HasFixedPoint,
        }
    }
}

/// Structural flags of a symbol. `range` is the image `ψ(ℝ)` as an open
/// interval (infinite ends for surjective maps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolProps {
    pub strictly_increasing: bool,
    pub bijective: bool,
    pub fixed_point_free: bool,
    pub displacement: Displacement,
    pub range: (f64, f64),
}

impl SymbolProps {
    pub fn increasing_bijection(displacement: Displacement) -> Self {
        SymbolProps {
            strictly_increasing: true,
            bijective: true,
            fixed_point_free: displacement != Displacement::HasFixedPoint,
            displacement,
            range: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// Claimed bounds `|ψ^(j)(x)| ≤ C_j (1+x²)^{t_j}` for `j = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub bounds: Vec<(f64, u32)>,
    pub validation_radius: f64,
    pub validated: bool,
}

/// A sampled point where a growth bound failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthViolation {
    pub order: usize,
    pub x: f64,
    pub value: f64,
    pub bound: f64,
}

impl GrowthCertificate {
    pub fn claimed(bounds: Vec<(f64, u32)>) -> Self {
        GrowthCertificate { bounds, validation_radius: 0.0, validated: false }
    }

    pub fn max_order(&self) -> usize {
        self.bounds.len().saturating_sub(1)
    }

    pub fn max_exponent(&self) -> u32 {
        self.bounds.iter().map(|b| b.1).max().unwrap_or(0)
    }

    pub fn bound(&self, order: usize, x: f64) -> f64 {
        let (c, t) = self.bounds[order];
        c * (1.0 + x * x).powi(t as i32)
    }

    /// Largest `C_j` across orders, used as the tail constant by seminorms.
    pub fn max_constant(&self, up_to: usize) -> f64 {
        self.bounds.iter().take(up_to + 1).map(|b| b.0).fold(0.0, f64::max)
    }

    /// Checks the bound on a Chebyshev grid (`per_unit` points per unit
    /// interval) over `[-radius, radius]`.
    pub fn validate<F: Fn(f64) -> Jet>(
        &self,
        jet_at: F,
        radius: f64,
        per_unit: usize,
    ) -> (GrowthCertificate, Option<GrowthViolation>) {
        let order = self.max_order();
        for x in chebyshev_blocks(-radius, radius, per_unit) {
            let jet = jet_at(x);
            for j in 0..=order.min(jet.order()) {
                let value = jet.deriv(j).abs();
                let bound = self.bound(j, x);
                if !(value <= bound * (1.0 + 1e-12) + 1e-300) {
                    let cert = GrowthCertificate { validation_radius: radius, validated: false, ..self.clone() };
                    return (cert, Some(GrowthViolation { order: j, x, value, bound }));
                }
            }
        }
        (GrowthCertificate { validation_radius: radius, validated: true, ..self.clone() }, None)
    }

    /// Fits `C_j` for the given exponents from samples, inflated by `safety`.
    pub fn fit<F: Fn(f64) -> Jet>(jet_at: F, exponents: &[u32], samples: &[f64], safety: f64) -> Self {
        let mut bounds: Vec<(f64, u32)> = exponents.iter().map(|&t| (0.0, t)).collect();
        for &x in samples {
            let jet = jet_at(x);
            for (j, b) in bounds.iter_mut().enumerate() {
                let ratio = jet.deriv(j).abs() / (1.0 + x * x).powi(b.1 as i32);
                if ratio.is_finite() {
                    b.0 = b.0.max(ratio * safety);
                }
            }
        }
        GrowthCertificate::claimed(bounds)
    }
}

/// A symbol `ψ` with its structural flags and growth certificate.
#[derive(Debug, Clone)]
pub struct Symbol {
    label: String,
    map: Arc<dyn SmoothMap>,
    props: SymbolProps,
    growth: GrowthCertificate,
}

impl Symbol {
    pub fn new(
        label: impl Into<String>,
        map: Arc<dyn SmoothMap>,
        props: SymbolProps,
        growth: GrowthCertificate,
    ) -> Self {
        Symbol { label: label.into(), map, props, growth }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn props(&self) -> &SymbolProps {
        &self.props
    }

    pub fn growth(&self) -> &GrowthCertificate {
        &self.growth
    }

    pub fn map(&self) -> &Arc<dyn SmoothMap> {
        &self.map
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.map.eval(x)
    }

    /// Jet of `ψ` at `x`; its value entry is exactly `eval(x)`.
    pub fn jet_at(&self, x: f64, order: usize) -> Jet {
        self.map.jet(x, order).with_value(self.map.eval(x))
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.map.slope(x)
    }

    pub fn displacement(&self, x: f64) -> f64 {
        self.map.displacement(x)
    }

    pub fn displacement_jet(&self, x: f64, order: usize) -> Jet {
        self.map.displacement_jet(x, order)
    }

    pub fn in_range(&self, y: f64) -> bool {
        y > self.props.range.0 && y < self.props.range.1
    }

    /// Validates the growth certificate on `[-radius, radius]` and stores the outcome.
    pub fn validate_growth(&self, radius: f64, per_unit: usize) -> (Symbol, Option<GrowthViolation>) {
        let order = self.growth.max_order();
        let (cert, violation) = self.growth.validate(|x| self.jet_at(x, order), radius, per_unit);
        (Symbol { growth: cert, ..self.clone() }, violation)
    }
}

/// Closed-form pieces used by the catalog symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Affine {
        slope: f64,
        intercept: f64,
    },
    /// `√(x²+1)`
    UpperHyperbola,
    /// `−√(x²−1)`, defined for `|x| > 1`
    LowerHyperbola,
    Exp,
}

impl Piece {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Piece::Affine { slope, intercept } => slope * x + intercept,
            Piece::UpperHyperbola => (x * x + 1.0).sqrt(),
            Piece::LowerHyperbola => -(x * x - 1.0).sqrt(),
            Piece::Exp => x.exp(),
        }
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        let id = Jet::variable(x, order);
        let jet = match *self {
            Piece::Affine { slope, intercept } => Jet::affine(x, slope, intercept, order),
            Piece::UpperHyperbola => (&id * &id).add_const(1.0).sqrt(),
            Piece::LowerHyperbola => -&(&id * &id).add_const(-1.0).sqrt(),
            Piece::Exp => id.exp(),
        };
        jet.with_value(self.eval(x))
    }

    pub fn slope(&self, x: f64) -> f64 {
        match *self {
            Piece::Affine { slope, .. } => slope,
            Piece::UpperHyperbola => x / (x * x + 1.0).sqrt(),
            Piece::LowerHyperbola => -x / (x * x - 1.0).sqrt(),
            Piece::Exp => x.exp(),
        }
    }
}

const CUTOFF_EDGE: f64 = 1.0 / 700.0;

fn bump_tail(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// `w(t) = B(t)/(B(t)+B(1−t))`, `B(t) = exp(−1/t)`: 0 for `t ≤ 0`, 1 for `t ≥ 1`, flat at both ends.
pub fn cutoff(t: f64) -> f64 {
    if t <= CUTOFF_EDGE {
        0.0
    } else if t >= 1.0 - CUTOFF_EDGE {
        1.0
    } else {
        let a = bump_tail(t);
        a / (a + bump_tail(1.0 - t))
    }
}

pub fn cutoff_jet(t: &Jet) -> Jet {
    let s = t.value();
    if s <= CUTOFF_EDGE {
        Jet::constant(t.base_point(), 0.0, t.order())
    } else if s >= 1.0 - CUTOFF_EDGE {
        Jet::constant(t.base_point(), 1.0, t.order())
    } else {
        let a = (-&t.recip()).exp();
        let one_minus = (-t).add_const(1.0);
        let b = (-&one_minus.recip()).exp();
        &a * &(&a + &b).recip()
    }
}

/// Two closed-form pieces joined by a strictly increasing blend on `window`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionSpec {
    pub left: Piece,
    pub right: Piece,
    pub window: (f64, f64),
}

const BLEND_PANELS: usize = 128;
const BLEND_NODES: usize = 24;

/// Monotone join on `(lo, hi)` with derivative profile
/// `d = (1−u)((1−w) d_L + w d_R) + u c`.
#[derive(Debug, Clone)]
pub struct Blend {
    spec: ExtensionSpec,
    plateau_width: f64,
    plateau_slope: f64,
    start_value: f64,
    cumulative: Vec<f64>,
    rule: GaussLegendre,
}

/// Builds the monotone blend described by `spec`.
pub fn smooth_monotone_extension(spec: &ExtensionSpec) -> Result<Blend> {
    Blend::new(*spec)
}

impl Blend {
    pub fn new(spec: ExtensionSpec) -> Result<Blend> {
        let (lo, hi) = spec.window;
        if !(hi > lo) {
            return Err(Error::InfeasibleExtension(format!("empty window [{lo}, {hi}]")));
        }
        let start_value = spec.left.eval(lo);
        let increment = spec.right.eval(hi) - start_value;
        if !(increment > 0.0) {
            return Err(Error::InfeasibleExtension(format!(
                "left value {start_value} is not below right value {}",
                spec.right.eval(hi)
            )));
        }
        let width = hi - lo;
        let mean_slope = increment / width;
        let rule = GaussLegendre::new(BLEND_NODES);
        let mut blend =
            Blend { spec, plateau_width: 0.25, plateau_slope: 0.0, start_value, cumulative: Vec::new(), rule };
        for x in crate::numeric::linspace(lo, hi, 257) {
            if !(blend.base_slope(x) > 0.0) {
                return Err(Error::InfeasibleExtension(format!("piece slope not positive at {x}")));
            }
        }
        while blend.plateau_width >= 1.0 / 4096.0 {
            // ∫d = ∫(1−u)·base + c·∫u is linear in c.
            let fixed = blend.integrate(|x| (1.0 - blend.plateau(x)) * blend.base_slope(x));
            let weight = blend.integrate(|x| blend.plateau(x));
            let c = (increment - fixed) / weight;
            if c >= 0.25 * mean_slope {
                blend.plateau_slope = c;
                blend.tabulate();
                return Ok(blend);
            }
            blend.plateau_width *= 0.5;
        }
        Err(Error::InfeasibleExtension(format!("increment {increment} too small for a positive derivative profile")))
    }

    pub fn window(&self) -> (f64, f64) {
        self.spec.window
    }

    /// Value of the constant slope on the plateau.
    pub fn plateau_slope(&self) -> f64 {
        self.plateau_slope
    }

    fn unit(&self, x: f64) -> f64 {
        let (lo, hi) = self.spec.window;
        (x - lo) / (hi - lo)
    }

    fn plateau(&self, x: f64) -> f64 {
        let t = self.unit(x);
        cutoff(t / self.plateau_width) * cutoff((1.0 - t) / self.plateau_width)
    }

    fn base_slope(&self, x: f64) -> f64 {
        let w = cutoff(self.unit(x));
        (1.0 - w) * self.spec.left.slope(x) + w * self.spec.right.slope(x)
    }

    /// Derivative profile `ψ'` on the window.
    pub fn profile(&self, x: f64) -> f64 {
        let u = self.plateau(x);
        (1.0 - u) * self.base_slope(x) + u * self.plateau_slope
    }

    fn profile_jet(&self, x: f64, order: usize) -> Jet {
        let (lo, hi) = self.spec.window;
        let width = hi - lo;
        let t = Jet::affine(x, 1.0 / width, -lo / width, order);
        let w = cutoff_jet(&t);
        let p = self.plateau_width;
        let u = &cutoff_jet(&t.scale(1.0 / p)) * &cutoff_jet(&(-&t).add_const(1.0).scale(1.0 / p));
        let left = self.spec.left.jet(x, order + 1).derivative();
        let right = self.spec.right.jet(x, order + 1).derivative();
        let one_minus_w = (-&w).add_const(1.0);
        let base = &(&one_minus_w * &left) + &(&w * &right);
        let one_minus_u = (-&u).add_const(1.0);
        &(&one_minus_u * &base) + &u.scale(self.plateau_slope)
    }

    fn panel_bounds(&self, i: usize) -> (f64, f64) {
        let (lo, hi) = self.spec.window;
        let h = (hi - lo) / BLEND_PANELS as f64;
        let a = lo + i as f64 * h;
        let b = if i + 1 == BLEND_PANELS { hi } else { a + h };
        (a, b)
    }

    fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        (0..BLEND_PANELS)
            .map(|i| {
                let (a, b) = self.panel_bounds(i);
                self.rule.integrate(a, b, &f)
            })
            .sum()
    }

    fn tabulate(&mut self) {
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(BLEND_PANELS + 1);
        cumulative.push(0.0);
        for i in 0..BLEND_PANELS {
            let (a, b) = self.panel_bounds(i);
            acc += self.rule.integrate(a, b, |x| self.profile(x));
            cumulative.push(acc);
        }
        self.cumulative = cumulative;
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.spec.window;
        let x = x.clamp(lo, hi);
        let h = (hi - lo) / BLEND_PANELS as f64;
        let i = (((x - lo) / h) as usize).min(BLEND_PANELS - 1);
        let (a, _) = self.panel_bounds(i);
        self.start_value + self.cumulative[i] + self.rule.integrate(a, x, |s| self.profile(s))
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        if order == 0 {
            return Jet::constant(x, self.eval(x), 0);
        }
        let d = self.profile_jet(x, order - 1);
        let mut derivs = Vec::with_capacity(order + 1);
        derivs.push(self.eval(x));
        derivs.extend_from_slice(d.derivs());
        Jet::new(x, derivs)
    }
}

#[derive(Debug, Clone)]
enum Segment {
    Closed(Piece),
    Blend(Blend),
}

/// Piecewise map: `segments[i]` applies for `x ≤ upper[i]` (last one unbounded).
#[derive(Debug, Clone)]
pub struct PiecewiseMap {
    uppers: Vec<f64>,
    segments: Vec<Segment>,
}

impl PiecewiseMap {
    /// Closed pieces on consecutive intervals with blends on the gaps between them.
    /// `pieces[i]` is used on `[starts[i], ends[i]]`; gaps get a blend.
    fn from_pieces(pieces: &[(f64, f64, Piece)]) -> Result<Self> {
        let mut uppers = Vec::new();
        let mut segments = Vec::new();
        for (i, &(_, end, piece)) in pieces.iter().enumerate() {
            uppers.push(end);
            segments.push(Segment::Closed(piece));
            if let Some(&(next_start, _, next_piece)) = pieces.get(i + 1) {
                let blend = Blend::new(ExtensionSpec { left: piece, right: next_piece, window: (end, next_start) })?;
                uppers.push(next_start);
                segments.push(Segment::Blend(blend));
            }
        }
        Ok(PiecewiseMap { uppers, segments })
    }

    fn segment(&self, x: f64) -> &Segment {
        let idx = self.uppers.iter().position(|&u| x <= u).unwrap_or(self.segments.len() - 1);
        let idx = idx.min(self.segments.len() - 1);
        // closed pieces own their endpoints
        match (&self.segments[idx], idx) {
            (Segment::Blend(_), i) if x >= self.uppers[i] => &self.segments[i + 1],
            (seg, _) => seg,
        }
    }
}

impl SmoothMap for PiecewiseMap {
    fn eval(&self, x: f64) -> f64 {
        match self.segment(x) {
            Segment::Closed(p) => p.eval(x),
            Segment::Blend(b) => b.eval(x),
        }
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        match self.segment(x) {
            Segment::Closed(p) => p.jet(x, order),
            Segment::Blend(b) => b.jet(x, order),
        }
    }

    fn slope(&self, x: f64) -> f64 {
        match self.segment(x) {
            Segment::Closed(p) => p.slope(x),
            Segment::Blend(b) => b.profile(x),
        }
    }
}

/// `ψ(x) = ψ̃(x − n) + n` on `[n, n+1]` for a tile `ψ̃` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct TiledMap {
    tile: PiecewiseMap,
}

impl SmoothMap for TiledMap {
    fn eval(&self, x: f64) -> f64 {
        let n = x.floor();
        self.tile.eval(x - n) + n
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        let n = x.floor();
        let j = self.tile.jet(x - n, order);
        j.rebased(x).with_value(j.value() + n)
    }

    fn slope(&self, x: f64) -> f64 {
        self.tile.slope(x - x.floor())
    }
}

#[derive(Debug, Clone, Copy)]
struct Translation(f64);

impl SmoothMap for Translation {
    fn eval(&self, x: f64) -> f64 {
        x + self.0
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        Jet::affine(x, 1.0, self.0, order)
    }

    fn slope(&self, _x: f64) -> f64 {
        1.0
    }

    fn displacement(&self, _x: f64) -> f64 {
        self.0
    }

    fn displacement_jet(&self, x: f64, order: usize) -> Jet {
        Jet::constant(x, self.0, order)
    }
}

/// `x + amplitude·exp(−x²/(2σ²))`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPerturbation {
    pub amplitude: f64,
    pub sigma: f64,
}

impl SmoothMap for GaussianPerturbation {
    fn eval(&self, x: f64) -> f64 {
        x + self.amplitude * (-x * x / (2.0 * self.sigma * self.sigma)).exp()
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        let id = Jet::variable(x, order);
        &id + &self.displacement_jet(x, order)
    }

    fn displacement(&self, x: f64) -> f64 {
        self.amplitude * (-x * x / (2.0 * self.sigma * self.sigma)).exp()
    }

    fn displacement_jet(&self, x: f64, order: usize) -> Jet {
        let id = Jet::variable(x, order);
        (&id * &id).scale(-1.0 / (2.0 * self.sigma * self.sigma)).exp().scale(self.amplitude)
    }
}

#[derive(Debug)]
struct Reflected(Arc<dyn SmoothMap>);

impl SmoothMap for Reflected {
    fn eval(&self, x: f64) -> f64 {
        -self.0.eval(-x)
    }

    fn jet(&self, x: f64, order: usize) -> Jet {
        // (σψ)^(j)(x) = (−1)^{j−1} ψ^(j)(−x)
        let inner = self.0.jet(-x, order);
        let derivs = inner.derivs().iter().enumerate().map(|(j, d)| if j % 2 == 0 { -d } else { *d }).collect();
        Jet::new(x, derivs)
    }

    fn slope(&self, x: f64) -> f64 {
        self.0.slope(-x)
    }

    fn displacement(&self, x: f64) -> f64 {
        -self.0.displacement(-x)
    }

    fn displacement_jet(&self, x: f64, order: usize) -> Jet {
        let inner = self.0.displacement_jet(-x, order);
        let derivs = inner.derivs().iter().enumerate().map(|(j, d)| if j % 2 == 0 { -d } else { *d }).collect();
        Jet::new(x, derivs)
    }
}

/// `ψ(x) = x + β`.
pub fn make_translation(beta: f64) -> Result<Symbol> {
    if beta == 0.0 {
        return Err(Error::IdentitySymbol);
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("translation amount {beta}")));
    }
    let displacement = if beta > 0.0 { Displacement::AboveDiagonal } else { Displacement::BelowDiagonal };
    let mut bounds = alloc::vec![(1.0 + beta.abs(), 1), (1.0, 0)];
    bounds.extend(core::iter::repeat((0.0, 0)).take(4));
    Ok(Symbol::new(
        format!("translation:{beta}"),
        Arc::new(Translation(beta)),
        SymbolProps::increasing_bijection(displacement),
        GrowthCertificate::claimed(bounds),
    ))
}

/// The mixing example built from `√(x²+1)`, `(√2/2)x + 1` and `−√(x²−1)`.
pub fn make_sqrt_glide() -> Symbol {
    let sqrt3 = 3f64.sqrt();
    let map = PiecewiseMap::from_pieces(&[
        (f64::NEG_INFINITY, -sqrt3, Piece::LowerHyperbola),
        (-SQRT_2, 0.0, Piece::Affine { slope: SQRT_2 / 2.0, intercept: 1.0 }),
        (1.0, f64::INFINITY, Piece::UpperHyperbola),
    ])
    .expect("catalog blend is feasible");
    Symbol::new(
        "sqrt_glide",
        Arc::new(map),
        SymbolProps::increasing_bijection(Displacement::AboveDiagonal),
        GrowthCertificate::claimed(alloc::vec![(2.2, 1), (12.0, 0), (250.0, 0), (1.6e4, 0), (2.0e6, 0), (5.0e8, 0)]),
    )
}

/// Tile `3x+1` on `[0, 1/7]`, `3x−1` on `[6/7, 1]`, blended in between and
/// extended by `ψ(x+1) = ψ(x) + 1`.
pub fn make_tiled_3x() -> Symbol {
    let tile = PiecewiseMap::from_pieces(&[
        (0.0, 1.0 / 7.0, Piece::Affine { slope: 3.0, intercept: 1.0 }),
        (6.0 / 7.0, 1.0, Piece::Affine { slope: 3.0, intercept: -1.0 }),
    ])
    .expect("catalog blend is feasible");
    Symbol::new(
        "tiled_3x",
        Arc::new(TiledMap { tile }),
        SymbolProps::increasing_bijection(Displacement::AboveDiagonal),
        GrowthCertificate::claimed(alloc::vec![(3.0, 1), (6.0, 0), (520.0, 0), (1.1e5, 0), (5.0e7, 0), (3.1e10, 0)]),
    )
}

/// `e^x` on `x ≤ 0`, `2x` on `x ≥ 1`, blended in between. Range `(0, ∞)`.
pub fn make_exp_double() -> Symbol {
    let map = PiecewiseMap::from_pieces(&[
        (f64::NEG_INFINITY, 0.0, Piece::Exp),
        (1.0, f64::INFINITY, Piece::Affine { slope: 2.0, intercept: 0.0 }),
    ])
    .expect("catalog blend is feasible");
    let props = SymbolProps {
        strictly_increasing: true,
        bijective: false,
        fixed_point_free: true,
        displacement: Displacement::AboveDiagonal,
        range: (0.0, f64::INFINITY),
    };
    Symbol::new(
        "exp_double",
        Arc::new(map),
        props,
        GrowthCertificate::claimed(alloc::vec![(2.4, 1), (4.0, 0), (20.0, 0), (400.0, 0), (1.7e4, 0), (1.4e6, 0)]),
    )
}

/// `ψ(x) = x + exp(−x²/2)`.
pub fn make_gauss_perturbed() -> Symbol {
    Symbol::new(
        "gauss_perturbed",
        Arc::new(GaussianPerturbation { amplitude: 1.0, sigma: 1.0 }),
        SymbolProps::increasing_bijection(Displacement::AboveDiagonal),
        GrowthCertificate::claimed(alloc::vec![(2.4, 1), (3.3, 0), (2.0, 0), (2.8, 0), (6.0, 0), (12.0, 0)]),
    )
}

/// `σ(ψ)(x) = −ψ(−x)`.
pub fn reflect(symbol: &Symbol) -> Symbol {
    let props = symbol.props();
    let flipped =
        SymbolProps { displacement: props.displacement.flipped(), range: (-props.range.1, -props.range.0), ..*props };
    let label = match symbol.label().strip_prefix("reflect(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => inner.to_string(),
        None => format!("reflect({})", symbol.label()),
    };
    let map: Arc<dyn SmoothMap> = Arc::new(Reflected(symbol.map().clone()));
    let growth = GrowthCertificate { validated: false, ..symbol.growth().clone() };
    Symbol::new(label, map, flipped, growth)
}

/// Resolves catalog labels: `translation:<β>`, `sqrt_glide`, `tiled_3x`,
/// `exp_double`, `gauss_perturbed`, and `reflect(<label>)`.
pub fn from_label(label: &str) -> Result<Symbol> {
    let label = label.trim();
    if let Some(beta) = label.strip_prefix("translation:") {
        let beta: f64 = beta.trim().parse().map_err(|_| Error::UnknownSymbol(label.to_string()))?;
        return make_translation(beta);
    }
    if let Some(inner) = label.strip_prefix("reflect(").and_then(|s| s.strip_suffix(')')) {
        return from_label(inner).map(|s| reflect(&s));
    }
    match label {
        "sqrt_glide" => Ok(make_sqrt_glide()),
        "tiled_3x" => Ok(make_tiled_3x()),
        "exp_double" => Ok(make_exp_double()),
        "gauss_perturbed" => Ok(make_gauss_perturbed()),
        _ => Err(Error::UnknownSymbol(label.to_string())),
    }
}

/// Labels of the built-in catalog (translation shown with `β = 1`).
pub const CATALOG: [&str; 5] = ["translation:1", "sqrt_glide", "tiled_3x", "exp_double", "gauss_perturbed"];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn translation_basics() {
        let psi = make_translation(1.0).unwrap();
        assert_eq!(psi.eval(3.0), 4.0);
        assert_eq!(psi.jet_at(-2.0, 3).derivs(), &[-1.0, 1.0, 0.0, 0.0]);
        let down = make_translation(-2.0).unwrap();
        assert_eq!(down.props().displacement, Displacement::BelowDiagonal);
        assert_eq!(psi.growth().bounds[1], (1.0, 0));
        assert_eq!(psi.growth().bounds[2], (0.0, 0));
        let (checked, violation) = psi.validate_growth(50.0, 33);
        assert!(checked.growth().validated, "{violation:?}");
        assert_eq!(make_translation(0.0).unwrap_err(), Error::IdentitySymbol);
    }

    #[test]
    fn sqrt_glide_closed_form_values() {
        let psi = make_sqrt_glide();
        assert_relative_eq!(psi.eval(2.0), 5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(psi.eval(-1.0), 1.0 - SQRT_2 / 2.0, epsilon = 1e-15);
        assert_eq!(psi.eval(0.0), 1.0);
        assert_relative_eq!(psi.eval(-SQRT_2), 0.0, epsilon = 1e-15);
        assert_relative_eq!(psi.eval(-2.0), -3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn blend_joins_are_continuous() {
        let psi = make_sqrt_glide();
        let sqrt3 = 3f64.sqrt();
        for &edge in &[-sqrt3, -SQRT_2, 0.0, 1.0] {
            for j in 0..4 {
                let a = psi.jet_at(edge - 1e-9, 4).deriv(j);
                let b = psi.jet_at(edge + 1e-9, 4).deriv(j);
                assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()), "edge {edge} order {j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn tiled_identities() {
        let psi = make_tiled_3x();
        assert_eq!(psi.eval(0.0), 1.0);
        assert_relative_eq!(psi.slope(0.0), 3.0);
        assert_relative_eq!(psi.eval(1.0 / 7.0), 10.0 / 7.0, epsilon = 1e-15);
        for i in 0..1000 {
            let x = -20.0 + 40.0 * (i as f64 + 0.5) / 1000.0;
            assert!((psi.eval(x + 1.0) - psi.eval(x) - 1.0).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn tiled_blend_dips_below_three() {
        let blend = smooth_monotone_extension(&ExtensionSpec {
            left: Piece::Affine { slope: 3.0, intercept: 1.0 },
            right: Piece::Affine { slope: 3.0, intercept: -1.0 },
            window: (1.0 / 7.0, 6.0 / 7.0),
        })
        .unwrap();
        assert!(blend.plateau_slope() < 3.0 && blend.plateau_slope() > 0.0);
        assert_relative_eq!(blend.eval(6.0 / 7.0), 11.0 / 7.0, epsilon = 1e-13);
        for x in crate::numeric::linspace(1.0 / 7.0, 6.0 / 7.0, 2001) {
            assert!(blend.profile(x) > 0.0);
        }
    }

    #[test]
    fn equal_slopes_blend_is_affine() {
        let blend = smooth_monotone_extension(&ExtensionSpec {
            left: Piece::Affine { slope: 1.0, intercept: 2.0 },
            right: Piece::Affine { slope: 1.0, intercept: 2.0 },
            window: (0.0, 1.5),
        })
        .unwrap();
        for x in crate::numeric::linspace(0.0, 1.5, 101) {
            assert!((blend.eval(x) - (x + 2.0)).abs() < 1e-14);
            assert!((blend.profile(x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn infeasible_extension() {
        let err = smooth_monotone_extension(&ExtensionSpec {
            left: Piece::Affine { slope: 1.0, intercept: 5.0 },
            right: Piece::Affine { slope: 1.0, intercept: 0.0 },
            window: (0.0, 1.0),
        })
        .unwrap_err();
        assert!(matches!(err, Error::InfeasibleExtension(_)));
    }

    #[test]
    fn exp_double_pieces() {
        let psi = make_exp_double();
        assert_relative_eq!(psi.eval(-1.0), (-1f64).exp());
        assert_eq!(psi.eval(3.0), 6.0);
        assert!(!psi.props().bijective);
        for x in crate::numeric::linspace(-5.0, 5.0, 501) {
            assert!(psi.eval(x) > x);
            assert!(psi.slope(x) > 0.0);
        }
    }

    #[test]
    fn gauss_perturbed_slope_floor() {
        let psi = make_gauss_perturbed();
        assert_eq!(psi.eval(0.0), 1.0);
        let min =
            crate::numeric::linspace(-6.0, 6.0, 12001).into_iter().map(|x| psi.slope(x)).fold(f64::INFINITY, f64::min);
        assert_relative_eq!(min, 1.0 - (-0.5f64).exp(), epsilon = 1e-6);
        assert!(min > 0.39);
    }

    #[test]
    fn reflection_rules() {
        let psi = make_translation(1.0).unwrap();
        let r = reflect(&psi);
        assert_eq!(r.eval(5.0), 4.0);
        assert_eq!(r.props().displacement, Displacement::BelowDiagonal);
        let glide = make_sqrt_glide();
        let twice = reflect(&reflect(&glide));
        assert_eq!(twice.label(), "sqrt_glide");
        for x in crate::numeric::linspace(-5.0, 5.0, 100) {
            assert_eq!(twice.eval(x), glide.eval(x));
        }
        let rg = reflect(&glide);
        for &x in &[-3.0, -0.5, 0.2, 2.5] {
            let direct = glide.jet_at(-x, 3);
            let refl = rg.jet_at(x, 3);
            for j in 0..=3 {
                let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                assert_eq!(refl.deriv(j), sign * direct.deriv(j));
            }
        }
    }

    #[test]
    fn labels_resolve() {
        for label in CATALOG {
            assert_eq!(from_label(label).unwrap().label(), label);
        }
        assert_eq!(from_label("reflect(sqrt_glide)").unwrap().label(), "reflect(sqrt_glide)");
        assert!(matches!(from_label("nope"), Err(Error::UnknownSymbol(_))));
        assert!(matches!(from_label("translation:x"), Err(Error::UnknownSymbol(_))));
    }
}
