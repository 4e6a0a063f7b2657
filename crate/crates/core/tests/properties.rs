use std::sync::OnceLock;

use omdyn::abel::{solve_abel, AbelSolution, DEFAULT_ORDER};
use omdyn::hypvec::Bump;
use omdyn::jets::{jet_compose, jet_invert, Jet};
use omdyn::orbits::iterate;
use omdyn::schwartz::{majorant, Weight};
use omdyn::symbols::from_label;
use proptest::prelude::*;

fn jet_strategy(order: usize) -> impl Strategy<Value = Jet> {
    (-5.0..5.0f64, -5.0..5.0f64, 0.3..3.0f64, prop::bool::ANY, prop::collection::vec(-3.0..3.0f64, order - 1)).prop_map(
        |(x, value, slope, flip, rest)| {
            let mut d = vec![value, if flip { -slope } else { slope }];
            d.extend(rest);
            Jet::new(x, d)
        },
    )
}

/// Sum of the absolute Faà di Bruno terms of `outer ∘ inner`.
fn term_scale(outer: &Jet, inner: &Jet) -> Jet {
    let od: Vec<f64> = outer.derivs().iter().map(|v| v.abs()).collect();
    let mut id: Vec<f64> = inner.derivs().iter().map(|v| v.abs()).collect();
    id[0] = inner.value();
    jet_compose(&Jet::new(outer.base_point(), od), &Jet::new(inner.base_point(), id)).unwrap()
}

fn chain(outer: Jet, inner: &Jet) -> Jet {
    let mut d = outer.derivs().to_vec();
    d[0] = outer.value();
    Jet::new(inner.value(), d)
}

proptest! {
    #[test]
    fn invert_then_compose_is_identity(j in jet_strategy(5)) {
        let inv = jet_invert(&j).unwrap();
        let left = jet_compose(&inv, &j).unwrap();
        let right = jet_compose(&j, &inv).unwrap();
        let id_x = Jet::variable(j.base_point(), 5);
        let id_y = Jet::variable(j.value(), 5);
        let (sl, sr) = (term_scale(&inv, &j), term_scale(&j, &inv));
        for k in 1..=5 {
            prop_assert!((left.deriv(k) - id_x.deriv(k)).abs() <= 1e-12 * sl.deriv(k).max(1.0), "k={} {:?}", k, left);
            prop_assert!((right.deriv(k) - id_y.deriv(k)).abs() <= 1e-12 * sr.deriv(k).max(1.0), "k={} {:?}", k, right);
        }
        prop_assert!((left.value() - j.base_point()).abs() <= 1e-12 * (1.0 + j.base_point().abs()));
    }

    #[test]
    fn composition_is_associative(a in jet_strategy(4), b in jet_strategy(4), c in jet_strategy(4)) {
        let b = chain(b, &c);
        let a = chain(a, &b);
        let lhs = jet_compose(&jet_compose(&a, &b).unwrap(), &c).unwrap();
        let rhs = jet_compose(&a, &jet_compose(&b, &c).unwrap()).unwrap();
        for k in 0..=4 {
            let scale = 1.0 + lhs.deriv(k).abs();
            prop_assert!((lhs.deriv(k) - rhs.deriv(k)).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn iterates_form_a_group(
        label in prop::sample::select(vec!["translation:1", "translation:-0.5", "sqrt_glide", "tiled_3x", "gauss_perturbed"]),
        n in -8i64..=8,
        m in -8i64..=8,
        x in -5.0..5.0f64,
    ) {
        let psi = from_label(label).unwrap();
        let direct = iterate(&psi, n + m, x).unwrap();
        let stepped = iterate(&psi, n, iterate(&psi, m, x).unwrap()).unwrap();
        prop_assert!((direct - stepped).abs() <= 1e-9 * (1.0 + direct.abs()), "{} vs {}", direct, stepped);
    }

    #[test]
    fn abel_solution_is_a_cocycle(x in -10.0..10.0f64, n in -6i64..=6) {
        let sol = sqrt_glide_solution();
        let psi = sol.symbol();
        let h = sol.try_eval(x).unwrap();
        let moved = sol.try_eval(iterate(psi, n, x).unwrap()).unwrap();
        prop_assert!((moved - h - n as f64).abs() <= 1e-8, "H(psi_n(x)) - H(x) = {}", moved - h);
    }

    #[test]
    fn majorant_dominates(amp in 0.1..5.0f64, b in 0.2..2.0f64, c in 0.0..3.0f64, x in -30.0..30.0f64) {
        let f = move |t: f64| amp * (-b * t * t).exp() * (c * t).cos();
        let g = majorant(&f, "g").unwrap();
        prop_assert!(g.eval(x) >= f(x).abs());
        prop_assert!((g.eval(x) - g.eval(-x)).abs() <= 1e-15 * g.eval(x));
        prop_assert!(g.eval(x.abs() + 0.5) <= g.eval(x));
    }

    #[test]
    fn bump_vanishes_off_its_support(l in -10.0..10.0f64, width in 0.5..8.0f64, amp in 0.1..3.0f64, t in -2.0..2.0f64) {
        let p = Bump::new("p", l, l + width, amp).unwrap();
        let x = l + t * width;
        let jet = p.jet(x, 3);
        if x <= l || x >= l + width {
            prop_assert!(jet.derivs().iter().all(|d| *d == 0.0), "{:?}", jet);
        } else {
            prop_assert!(p.eval(x) >= 0.0 && p.eval(x) <= amp * (1.0 + 1e-12));
        }
    }

    #[test]
    fn weights_are_even_positive_and_unimodal(
        a in 0.05..3.0f64,
        kind in 0usize..3,
        x in -40.0..40.0f64,
        dx in 0.0..5.0f64,
    ) {
        let w = match kind {
            0 => Weight::gauss(a).unwrap(),
            1 => Weight::expcone(a).unwrap(),
            _ => Weight::left_exp(),
        };
        let v = w.eval(x);
        prop_assert_eq!(v, w.eval(-x));
        prop_assert!(v <= 1.0 && v >= 0.0);
        prop_assert!(w.eval(x.abs() + dx) <= v);
    }
}

fn sqrt_glide_solution() -> &'static AbelSolution {
    static SOL: OnceLock<AbelSolution> = OnceLock::new();
    SOL.get_or_init(|| solve_abel(&from_label("sqrt_glide").unwrap(), DEFAULT_ORDER, 0.0, None).unwrap())
}
