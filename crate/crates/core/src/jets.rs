//! Truncated derivative calculus at a point.
//!
//! A [`Jet`] stores the raw derivatives `f(x), f'(x), ..., f^(m)(x)` of a
//! function at a base point `x`. Composition follows Faà di Bruno's formula,
//! summed explicitly over the partitions `i_1 + 2 i_2 + ... + j i_j = j`.
//! Inverse-function jets are available through two independent routes: the
//! integer polynomials `P_n` with `(ψ⁻¹)^(n) = ψ'^{-(2n-1)} P_n(ψ', ..., ψ^(n))`
//! and an order-by-order solve of `inverse ∘ ψ = id` through partial Bell
//! polynomials.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest order for which `j!` is an exact integer in `f64`.
pub const MAX_JET_ORDER: usize = 20;

/// Default working order of the criteria.
pub const DEFAULT_MAX_ORDER: usize = 8;

/// Relative tolerance when chaining an outer jet onto an inner one.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

/// Default floor on `|ψ'|` below which inversion is refused.
pub const DERIVATIVE_FLOOR: f64 = 1e-12;

const FACTORIALS: [f64; MAX_JET_ORDER + 1] = {
    let mut table = [1.0; MAX_JET_ORDER + 1];
    let mut i = 1;
    while i <= MAX_JET_ORDER {
        table[i] = table[i - 1] * i as f64;
        i += 1;
    }
    table
};

pub fn factorial(n: usize) -> f64 {
    FACTORIALS[n]
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    FACTORIALS[n] / (FACTORIALS[k] * FACTORIALS[n - k])
}

/// Value and raw derivatives of a function at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Jet {
    base_point: f64,
    derivs: Vec<f64>,
    overflow: bool,
}

impl Jet {
    /// Builds a jet from raw derivatives; `derivs[j] = f^(j)(base_point)`.
    pub fn new(base_point: f64, derivs: Vec<f64>) -> Self {
        assert!(!derivs.is_empty(), "a jet carries at least its value");
        assert!(derivs.len() <= MAX_JET_ORDER + 1, "jet order above {MAX_JET_ORDER}");
        let overflow = derivs.iter().any(|d| !d.is_finite());
        Jet { base_point, derivs, overflow }
    }

    pub fn constant(base_point: f64, value: f64, order: usize) -> Self {
        let mut derivs = vec![0.0; order + 1];
        derivs[0] = value;
        Jet::new(base_point, derivs)
    }

    /// Jet of the identity map at `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        let mut derivs = vec![0.0; order + 1];
        derivs[0] = x;
        if order >= 1 {
            derivs[1] = 1.0;
        }
        Jet::new(x, derivs)
    }

    /// Jet of `x ↦ slope·x + intercept` at `x`.
    pub fn affine(x: f64, slope: f64, intercept: f64, order: usize) -> Self {
        let mut derivs = vec![0.0; order + 1];
        derivs[0] = slope * x + intercept;
        if order >= 1 {
            derivs[1] = slope;
        }
        Jet::new(x, derivs)
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.derivs[0]
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn deriv(&self, j: usize) -> f64 {
        self.derivs[j]
    }

    pub fn is_overflow(&self) -> bool {
        self.overflow
    }

    pub fn taylor_coeffs(&self) -> Vec<f64> {
        self.derivs.iter().enumerate().map(|(j, d)| d / FACTORIALS[j]).collect()
    }

    /// Drops derivatives above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order());
        Jet { base_point: self.base_point, derivs: self.derivs[..=order].to_vec(), overflow: self.overflow }
    }

    /// Same derivatives, re-labelled at another base point.
    pub fn rebased(&self, base_point: f64) -> Jet {
        Jet { base_point, ..self.clone() }
    }

    /// The jet of the derivative `f'` (order drops by one).
    pub fn derivative(&self) -> Jet {
        assert!(self.order() >= 1);
        Jet::new(self.base_point, self.derivs[1..].to_vec()).with_overflow(self.overflow)
    }

    fn with_overflow(mut self, flag: bool) -> Jet {
        self.overflow |= flag || self.derivs.iter().any(|d| !d.is_finite());
        self
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet::new(self.base_point, self.derivs.iter().map(|d| c * d).collect()).with_overflow(self.overflow)
    }

    /// Replaces the value entry (used to keep `jet(x).value() == eval(x)` bit-exact).
    pub fn with_value(mut self, value: f64) -> Jet {
        self.derivs[0] = value;
        self.with_overflow(false)
    }

    pub fn add_const(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.derivs[0] += c;
        out.with_overflow(false)
    }

    fn check_pair(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        if !close(self.base_point, other.base_point) {
            return Err(Error::BasePointMismatch { left: self.base_point, right: other.base_point });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_pair(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_pair(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Jet) -> Jet {
        let derivs = self.derivs.iter().zip(&other.derivs).map(|(a, b)| a + b).collect();
        Jet::new(self.base_point, derivs).with_overflow(self.overflow || other.overflow)
    }

    /// Leibniz rule.
    fn mul_unchecked(&self, other: &Jet) -> Jet {
        let m = self.order();
        let derivs =
            (0..=m).map(|j| (0..=j).map(|i| binomial(j, i) * self.derivs[i] * other.derivs[j - i]).sum()).collect();
        Jet::new(self.base_point, derivs).with_overflow(self.overflow || other.overflow)
    }

    /// Applies a scalar function given its derivatives at `self.value()`:
    /// `outer[j] = f^(j)(self.value())`.
    pub fn apply(&self, outer: &[f64]) -> Jet {
        debug_assert_eq!(outer.len(), self.derivs.len());
        faa_di_bruno(self.base_point, outer, &self.derivs, self.overflow)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.apply(&vec![e; self.derivs.len()])
    }

    pub fn ln(&self) -> Jet {
        let u = self.value();
        let outer: Vec<f64> = (0..=self.order())
            .map(|j| match j {
                0 => u.ln(),
                _ => {
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    sign * FACTORIALS[j - 1] / u.powi(j as i32)
                }
            })
            .collect();
        self.apply(&outer)
    }

    /// `u ↦ u^p` for real `p` (requires `u > 0` unless `p` is a small integer).
    pub fn powf(&self, p: f64) -> Jet {
        let u = self.value();
        let mut outer = Vec::with_capacity(self.derivs.len());
        let mut falling = 1.0;
        for j in 0..=self.order() {
            outer.push(falling * u.powf(p - j as f64));
            falling *= p - j as f64;
        }
        self.apply(&outer)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        let u = self.value();
        let outer: Vec<f64> = (0..=self.order())
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * FACTORIALS[j] / u.powi(j as i32 + 1)
            })
            .collect();
        self.apply(&outer)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [s, c, -s, -c];
        let outer: Vec<f64> = (0..=self.order()).map(|j| cycle[j % 4]).collect();
        self.apply(&outer)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [c, -s, -c, s];
        let outer: Vec<f64> = (0..=self.order()).map(|j| cycle[j % 4]).collect();
        self.apply(&outer)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CHAIN_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

impl Add for &Jet {
    type Output = Jet;
    /// Panics on order mismatch; use [`Jet::try_add`] for checked arithmetic.
    fn add(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        self.add_unchecked(rhs)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        self.add_unchecked(&rhs.scale(-1.0))
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Binary jet operations exposed as one checked entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetOp {
    Add,
    Mul,
    Scale(f64),
}

pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet> {
    match op {
        JetOp::Add => a.try_add(b),
        JetOp::Mul => a.try_mul(b),
        JetOp::Scale(c) => Ok(a.scale(c)),
    }
}

/// Walks every multiplicity vector `(i_1, ..., i_j)` with `Σ r·i_r = j`,
/// accumulating `j!/Π i_r! · Π (g^(r)/r!)^{i_r}` and the block count `Σ i_r`.
fn partition_terms(
    part: usize,
    remaining: usize,
    coeff: f64,
    product: f64,
    blocks: usize,
    inner: &[f64],
    visit: &mut dyn FnMut(usize, f64),
) {
    if remaining == 0 {
        visit(blocks, coeff * product);
        return;
    }
    if part == 0 {
        return;
    }
    let scaled = inner[part] / FACTORIALS[part];
    let mut factor = 1.0;
    for count in 0..=remaining / part {
        if count > 0 {
            factor *= scaled;
            if factor == 0.0 {
                break;
            }
        }
        partition_terms(
            part - 1,
            remaining - count * part,
            coeff / FACTORIALS[count],
            product * factor,
            blocks + count,
            inner,
            visit,
        );
    }
}

fn faa_di_bruno(base_point: f64, outer: &[f64], inner: &[f64], overflow: bool) -> Jet {
    let m = inner.len() - 1;
    let mut derivs = alloc::vec![0.0; m + 1];
    derivs[0] = outer[0];
    for (j, slot) in derivs.iter_mut().enumerate().skip(1) {
        let mut total = 0.0;
        partition_terms(j, j, FACTORIALS[j], 1.0, 0, inner, &mut |blocks, term| {
            total += term * outer[blocks];
        });
        *slot = total;
    }
    Jet::new(base_point, derivs).with_overflow(overflow)
}

/// Jet of `f ∘ g` at `x` from the jet of `f` at `g(x)` and the jet of `g` at `x`.
pub fn jet_compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
    if outer.order() != inner.order() {
        return Err(Error::OrderMismatch { left: outer.order(), right: inner.order() });
    }
    if !close(outer.base_point, inner.value()) {
        return Err(Error::ChainMismatch { outer_base: outer.base_point, inner_value: inner.value() });
    }
    Ok(faa_di_bruno(inner.base_point, &outer.derivs, &inner.derivs, outer.overflow || inner.overflow))
}

/// Jet of `ψ⁻¹` at `ψ(x)` by order-by-order solution of `ψ⁻¹ ∘ ψ = id`.
pub fn jet_invert(jet: &Jet) -> Result<Jet> {
    jet_invert_with_floor(jet, DERIVATIVE_FLOOR)
}

pub fn jet_invert_with_floor(jet: &Jet, floor: f64) -> Result<Jet> {
    let slope = jet.deriv_or_zero(1);
    if !(slope.abs() > floor) {
        return Err(Error::CriticalPoint { x: jet.base_point, derivative: slope });
    }
    let m = jet.order();
    let bell = partial_bell_table(&jet.derivs);
    let mut inv = vec![0.0; m + 1];
    inv[0] = jet.base_point;
    for n in 1..=m {
        // (h∘ψ)^(n) = Σ_k h^(k) B_{n,k}; the k = n term is h^(n) ψ'^n.
        let target = if n == 1 { 1.0 } else { 0.0 };
        let lower: f64 = (1..n).map(|k| inv[k] * bell[n][k]).sum();
        inv[n] = (target - lower) / slope.powi(n as i32);
    }
    Ok(Jet::new(jet.value(), inv).with_overflow(jet.overflow))
}

impl Jet {
    fn deriv_or_zero(&self, j: usize) -> f64 {
        self.derivs.get(j).copied().unwrap_or(0.0)
    }
}

/// `table[n][k] = B_{n,k}(x_1, ..., x_{n-k+1})` with `x_i = derivs[i]`.
fn partial_bell_table(derivs: &[f64]) -> Vec<Vec<f64>> {
    let m = derivs.len() - 1;
    let mut table = vec![vec![0.0; m + 1]; m + 1];
    table[0][0] = 1.0;
    for n in 1..=m {
        for k in 1..=n {
            table[n][k] = (1..=n - k + 1).map(|i| binomial(n - 1, i - 1) * derivs[i] * table[n - i][k - 1]).sum();
        }
    }
    table
}

/// Integer polynomial in the variables `a_1, a_2, ...` (`a_i = ψ^(i)`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InversePolynomial {
    terms: BTreeMap<Vec<u32>, i64>,
}

impl InversePolynomial {
    fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), 1);
        InversePolynomial { terms }
    }

    /// The derivation `D(a_i) = a_{i+1}`.
    fn differentiate(&self) -> Self {
        let mut out = BTreeMap::new();
        for (exps, &c) in &self.terms {
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut next = exps.clone();
                next[i] -= 1;
                if next.len() <= i + 1 {
                    next.resize(i + 2, 0);
                }
                next[i + 1] += 1;
                trim(&mut next);
                *out.entry(next).or_insert(0) += c * e as i64;
            }
        }
        out.retain(|_, c| *c != 0);
        InversePolynomial { terms: out }
    }

    fn times_var(&self, var: usize, factor: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(exps, &c)| {
                let mut next = exps.clone();
                if next.len() <= var {
                    next.resize(var + 1, 0);
                }
                next[var] += 1;
                (next, c * factor)
            })
            .collect();
        InversePolynomial { terms }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (exps, &c) in &other.terms {
            *terms.entry(exps.clone()).or_insert(0) -= c;
        }
        terms.retain(|_, c| *c != 0);
        InversePolynomial { terms }
    }

    /// Evaluates with `vars[i] = a_{i+1}`.
    pub fn eval(&self, vars: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, &c)| exps.iter().enumerate().fold(c as f64, |acc, (i, &e)| acc * vars[i].powi(e as i32)))
            .sum()
    }

    /// Iterator over `(exponents, coefficient)`; exponent `i` belongs to `a_{i+1}`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }
}

fn trim(exps: &mut Vec<u32>) {
    while exps.last() == Some(&0) {
        exps.pop();
    }
}

/// `P_1, ..., P_order` from `P_{n+1} = a_1·D(P_n) − (2n−1)·a_2·P_n`.
pub fn inverse_polynomials(order: usize) -> Vec<InversePolynomial> {
    let mut out = Vec::with_capacity(order);
    if order == 0 {
        return out;
    }
    out.push(InversePolynomial::one());
    for n in 1..order {
        let prev = &out[n - 1];
        let lhs = prev.differentiate().times_var(0, 1);
        let rhs = prev.times_var(1, 2 * n as i64 - 1);
        out.push(lhs.sub(&rhs));
    }
    out
}

/// Jet of `ψ⁻¹` at `ψ(x)` via the inverse-derivative polynomials.
pub fn jet_invert_polynomial(jet: &Jet) -> Result<Jet> {
    let slope = jet.deriv_or_zero(1);
    if !(slope.abs() > DERIVATIVE_FLOOR) {
        return Err(Error::CriticalPoint { x: jet.base_point, derivative: slope });
    }
    let m = jet.order();
    let polys = inverse_polynomials(m);
    let vars = &jet.derivs[1..];
    let mut inv = vec![jet.base_point];
    for (idx, p) in polys.iter().enumerate() {
        let n = idx + 1;
        inv.push(p.eval(vars) / slope.powi(2 * n as i32 - 1));
    }
    Ok(Jet::new(jet.value(), inv).with_overflow(jet.overflow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chain_rule_first_order() {
        let inner = Jet::new(0.5, vec![2.0, 3.0]);
        let outer = Jet::new(2.0, vec![7.0, -1.5]);
        let c = jet_compose(&outer, &inner).unwrap();
        assert_eq!(c.derivs(), &[7.0, -4.5]);
    }

    #[test]
    fn square_of_sine_second_derivative() {
        // (sin²x)'' = 2cos 2x, which is 2 at 0.
        let inner = Jet::new(0.0, vec![0.0, 1.0, 0.0]);
        let outer = Jet::new(0.0, vec![0.0, 0.0, 2.0]);
        let c = jet_compose(&outer, &inner).unwrap();
        assert_eq!(c.derivs(), &[0.0, 0.0, 2.0]);
        let via_ops = &Jet::variable(0.3, 4).sin() * &Jet::variable(0.3, 4).sin();
        assert_relative_eq!(via_ops.deriv(2), 2.0 * (0.6f64).cos(), epsilon = 1e-14);
        assert_relative_eq!(via_ops.deriv(3), -4.0 * (0.6f64).sin(), epsilon = 1e-14);
    }

    #[test]
    fn unit_translation_rebases() {
        let x = 1.25;
        let inner = Jet::affine(x, 1.0, 1.0, 4);
        let outer = Jet::new(x + 1.0, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let c = jet_compose(&outer, &inner).unwrap();
        assert_eq!(c.derivs(), outer.derivs());
        assert_eq!(c.base_point(), x);
    }

    #[test]
    fn compose_rejects_bad_chains() {
        let inner = Jet::new(0.0, vec![1.0, 1.0]);
        let outer = Jet::new(1.5, vec![0.0, 1.0]);
        assert!(matches!(jet_compose(&outer, &inner), Err(Error::ChainMismatch { .. })));
        let outer = Jet::new(1.0, vec![0.0, 1.0, 0.0]);
        assert!(matches!(jet_compose(&outer, &inner), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn overflow_is_flagged_not_fatal() {
        let inner = Jet::new(0.0, vec![0.0, 1e200]);
        let outer = Jet::new(0.0, vec![0.0, 1e200]);
        let c = jet_compose(&outer, &inner).unwrap();
        assert!(c.is_overflow());
    }

    #[test]
    fn invert_affine() {
        let (a, b, x) = (2.5, -1.0, 0.7);
        let inv = jet_invert(&Jet::affine(x, a, b, 3)).unwrap();
        assert_eq!(inv.base_point(), a * x + b);
        assert_relative_eq!(inv.value(), x);
        assert_relative_eq!(inv.deriv(1), 1.0 / a);
        assert_eq!(inv.deriv(2), 0.0);
        assert_eq!(inv.deriv(3), 0.0);
    }

    #[test]
    fn invert_cubic() {
        // ψ = x³ + x at 1: jet (2, 4, 6, 6); (ψ⁻¹)'' = −ψ''/ψ'³ = −3/32.
        let jet = Jet::new(1.0, vec![2.0, 4.0, 6.0, 6.0]);
        for inv in [jet_invert(&jet).unwrap(), jet_invert_polynomial(&jet).unwrap()] {
            assert_eq!(inv.base_point(), 2.0);
            assert_relative_eq!(inv.deriv(1), 0.25, epsilon = 1e-15);
            assert_relative_eq!(inv.deriv(2), -3.0 / 32.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn invert_rejects_critical_point() {
        let jet = Jet::new(0.0, vec![0.0, 1e-14, 1.0]);
        assert!(matches!(jet_invert(&jet), Err(Error::CriticalPoint { .. })));
        assert!(matches!(jet_invert_polynomial(&jet), Err(Error::CriticalPoint { .. })));
    }

    #[test]
    fn first_inverse_polynomials() {
        // P_2 = −a_2, P_3 = 3a_2² − a_1 a_3.
        let p = inverse_polynomials(3);
        let vars = [1.7, -0.3, 2.2];
        assert_relative_eq!(p[0].eval(&vars), 1.0);
        assert_relative_eq!(p[1].eval(&vars), 0.3);
        assert_relative_eq!(p[2].eval(&vars), 3.0 * 0.09 - 1.7 * 2.2, epsilon = 1e-14);
    }

    #[test]
    fn arithmetic() {
        let a = Jet::new(0.0, vec![1.0, 2.0]);
        let b = Jet::new(0.0, vec![3.0, 4.0]);
        assert_eq!(jet_arith(&a, &b, JetOp::Add).unwrap().derivs(), &[4.0, 6.0]);
        let x = Jet::variable(3.0, 2);
        assert_eq!(jet_arith(&x, &x, JetOp::Mul).unwrap().derivs(), &[9.0, 6.0, 2.0]);
        let zero = jet_arith(&x, &x, JetOp::Scale(0.0)).unwrap();
        assert!(zero.derivs().iter().all(|d| *d == 0.0));
        let c = Jet::variable(1.0, 2);
        assert!(jet_arith(&a, &c, JetOp::Add).is_err());
        let shifted = Jet::variable(2.0, 1);
        assert!(matches!(jet_arith(&a.truncate(1), &shifted, JetOp::Mul), Err(Error::BasePointMismatch { .. })));
    }

    #[test]
    fn elementary_functions() {
        let x = Jet::variable(0.4, 4);
        let e = x.exp();
        for j in 0..=4 {
            assert_relative_eq!(e.deriv(j), 0.4f64.exp(), epsilon = 1e-14);
        }
        let r = x.recip();
        assert_relative_eq!(r.deriv(3), -6.0 / 0.4f64.powi(4), max_relative = 1e-13);
        let s = x.sqrt();
        assert_relative_eq!(s.deriv(2), -0.25 * 0.4f64.powf(-1.5), max_relative = 1e-13);
        let l = x.ln();
        assert_relative_eq!(l.deriv(2), -1.0 / 0.16, max_relative = 1e-13);
        let c = x.cos();
        assert_relative_eq!(c.deriv(3), 0.4f64.sin(), max_relative = 1e-13);
    }

    #[test]
    fn taylor_conversion() {
        let j = Jet::variable(0.0, 4).exp();
        let t = j.taylor_coeffs();
        assert_relative_eq!(t[4], 1.0 / 24.0);
        assert_eq!(factorial(20), 2432902008176640000.0);
    }
}
