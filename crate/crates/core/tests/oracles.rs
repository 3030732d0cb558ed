//! Closed-form and brute-force oracles for traces, moments and dimensions.

use gjs_core::gjs::{GradedElement, Gjs};
use gjs_core::planar::PlanarPairing;
use gjs_core::scalar::{ratio, Scalar};
use gjs_core::verify::{dimension_table, run_suites, Suite, SuiteConfig};
use num_traits::{One, Zero};

fn power(x: &Scalar, k: usize) -> Scalar {
    (0..k).fold(Scalar::one(), |acc, _| acc * x)
}

/// Non-crossing perfect matchings of `0..n` by brute force.
fn nc_matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = partner.iter().position(|&p| p == usize::MAX) else {
            out.push(partner.clone());
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == usize::MAX {
                partner[i] = j;
                partner[j] = i;
                go(partner, out);
                partner[i] = usize::MAX;
                partner[j] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![usize::MAX; n], &mut out);
    out.retain(|p| !(0..n).any(|a| (0..n).any(|c| a < c && c < p[a] && p[a] < p[c])));
    out
}

/// Loops formed by two matchings of the same points.
fn loops(a: &[usize], b: &[usize]) -> usize {
    let mut seen = vec![false; a.len()];
    let mut count = 0;
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut p = start;
        loop {
            seen[p] = true;
            let q = a[p];
            seen[q] = true;
            p = b[q];
            if p == start {
                break;
            }
        }
    }
    count
}

/// Closes a diagram with only bottom points against every non-crossing cup
/// configuration.
fn closed_trace(d: &PlanarPairing, delta: &Scalar) -> Scalar {
    let n = d.bottom();
    let own: Vec<usize> = (0..n).map(|i| d.partner(i)).collect();
    nc_matchings(n).iter().map(|cups| power(delta, loops(&own, cups))).sum()
}

#[test]
fn voiculescu_trace_against_brute_force() {
    let g = Gjs::parse("5/2").unwrap();
    let delta = ratio(5, 2);
    for b in [0, 2, 4, 6] {
        for d in PlanarPairing::enumerate(b, 0) {
            let x = GradedElement::from_pairing(b, 0, 0, d.clone()).unwrap();
            assert_eq!(g.voiculescu_trace(&x), closed_trace(&d, &delta));
        }
    }
}

#[test]
fn arc_moments_are_closed_cup_counts() {
    // the k-th power of the single arc, closed against all cup patterns
    let g = Gjs::parse("7/2").unwrap();
    let delta = ratio(7, 2);
    let arc = GradedElement::from_pairing(2, 0, 0, PlanarPairing::new(2, 0, &[(0, 1)]).unwrap()).unwrap();
    let mut x = GradedElement::unit();
    for k in 0..=4 {
        let own: Vec<usize> = (0..2 * k).map(|i| i ^ 1).collect();
        let expected: Scalar = nc_matchings(2 * k).iter().map(|c| power(&delta, loops(&own, c))).sum();
        assert_eq!(g.voiculescu_trace(&x), expected);
        x = g.wedge(&x, &arc);
    }
}

#[test]
fn strand_products_by_hand() {
    let g = Gjs::parse("5/2").unwrap();
    let xi = GradedElement::strand();
    let arc = GradedElement::from_pairing(2, 0, 0, PlanarPairing::new(2, 0, &[(0, 1)]).unwrap()).unwrap();
    assert_eq!(g.wedge(&xi, &xi.star()), arc);
    let expected = &arc + &GradedElement::unit().scale(&ratio(5, 2));
    assert_eq!(g.walker(&xi, &xi.star()), expected);
    assert_eq!(g.voiculescu_trace(&g.walker(&xi, &xi.star())), ratio(5, 2) + ratio(5, 2));
}

#[test]
fn dimensions_are_catalan() {
    let expected = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
    for row in dimension_table(10).unwrap() {
        let total = row.b + row.l + row.r;
        let want = if total % 2 == 0 { expected[total / 2] } else { 0 };
        assert_eq!(row.dim, want, "{row:?}");
    }
}

#[test]
fn jones_moments_follow_the_closed_form() {
    // e is a projection with tr_2(e) = δ⁻², so every moment is δ⁻² and the
    // estimate at order p is δ^(-1/p)
    let g = Gjs::parse("5/2").unwrap();
    let tl = g.tl();
    let cupcap = tl.compose(&gjs_core::category::Morphism::cup(), &gjs_core::category::Morphism::cap()).unwrap();
    let e = tl.frobenius_reciprocity(&cupcap.scale(g.delta().inverse()));
    assert_eq!(g.wedge(&e, &e), e);
    assert_eq!(g.normalized_trace(&e, 2).unwrap(), ratio(4, 25));
    let estimates = g.norm_estimate(&e, 64).unwrap();
    for m in &estimates {
        let want = (4.0f64 / 25.0).powf(1.0 / (2.0 * m.p as f64));
        assert!((m.estimate - want).abs() < 1e-12, "p = {}: {} vs {}", m.p, m.estimate, want);
    }
    assert!(estimates.last().unwrap().estimate >= 0.97);
}

#[test]
fn zero_has_zero_trace() {
    let g = Gjs::parse("5/2").unwrap();
    assert!(g.voiculescu_trace(&GradedElement::zero()).is_zero());
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig::default().with_suite_names(&["gjs-products", "fock"]).unwrap();
    let a = run_suites(&cfg).unwrap().to_json_lines_untimed();
    let b = run_suites(&cfg).unwrap().to_json_lines_untimed();
    assert_eq!(a, b);
    let other = SuiteConfig { seed: 7, ..cfg };
    let report = run_suites(&other).unwrap();
    assert!(report.gates_pass());
    assert!(report.records.iter().all(|r| matches!(r.suite, Suite::GjsProducts | Suite::Fock)));
}

#[test]
fn other_loop_values() {
    // the 0.97 moment bound needs δ below about 7: tr_2(e)^{1/128} = δ^{-1/64}
    for delta in ["3", "9/4", "4"] {
        let cfg = SuiteConfig::new(delta).unwrap().with_suite_names(&["category-identities", "tower"]).unwrap();
        let report = run_suites(&cfg).unwrap();
        let failing: Vec<_> = report.failures().map(|r| r.name.clone()).collect();
        assert!(failing.is_empty(), "delta {delta}: {failing:?}");
    }
}
