use gjs_core::planar::{enumerate_nc_pairings, PlanarPairing};
use proptest::prelude::*;

/// Catalan numbers from the binomial formula.
fn catalan(n: u64) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// All perfect matchings of `n` points, crossing or not.
fn all_matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(partner: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = partner.iter().position(Option::is_none) else {
            out.push(partner.iter().map(|p| p.unwrap()).collect());
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j].is_none() {
                partner[i] = Some(j);
                partner[j] = Some(i);
                go(partner, out);
                partner[i] = None;
                partner[j] = None;
            }
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        go(&mut vec![None; n], &mut out);
    }
    out
}

fn crosses(partner: &[usize]) -> bool {
    (0..partner.len()).any(|a| {
        let b = partner[a];
        (0..partner.len()).any(|c| {
            let d = partner[c];
            a < c && c < b && b < d
        })
    })
}

/// Stacks `upper` on `lower` by tracing each strand through the middle
/// boundary; returns the outer partner map and the number of closed loops.
fn stack_by_tracing(upper: &PlanarPairing, lower: &PlanarPairing) -> (Vec<usize>, usize) {
    let (lb, m) = (lower.bottom(), lower.top());
    let outer = lb + upper.top();
    // outer index -> (is_upper, local index)
    let locate = |k: usize| if k < lb { (false, k) } else { (true, m + (k - lb)) };
    let mut partner = vec![usize::MAX; outer];
    let mut middle_seen = vec![false; m];
    for k in 0..outer {
        if partner[k] != usize::MAX {
            continue;
        }
        let (mut up, mut p) = locate(k);
        loop {
            let q = if up { upper.partner(p) } else { lower.partner(p) };
            let on_middle = if up { q < m } else { q >= lb };
            if !on_middle {
                let end = if up { lb + q - m } else { q };
                partner[k] = end;
                partner[end] = k;
                break;
            }
            let j = if up { q } else { q - lb };
            middle_seen[j] = true;
            if up {
                up = false;
                p = lb + j;
            } else {
                up = true;
                p = j;
            }
        }
    }
    let mut loops = 0;
    for start in 0..m {
        if middle_seen[start] {
            continue;
        }
        loops += 1;
        let mut j = start;
        loop {
            middle_seen[j] = true;
            let below = lower.partner(lb + j) - lb;
            middle_seen[below] = true;
            j = upper.partner(below);
            if j == start {
                break;
            }
        }
    }
    (partner, loops)
}

fn pairing(bottom: usize, top: usize) -> impl Strategy<Value = PlanarPairing> {
    let all = PlanarPairing::enumerate(bottom, top);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn stack() -> impl Strategy<Value = (PlanarPairing, PlanarPairing, PlanarPairing)> {
    // levels of one parity so that every hom space is nonempty
    (0usize..2, 0usize..3, 0usize..3, 0usize..3, 0usize..3)
        .prop_flat_map(|(p, a, b, c, d)| (pairing(p + 2 * a, p + 2 * b), pairing(p + 2 * b, p + 2 * c), pairing(p + 2 * c, p + 2 * d)))
}

#[test]
fn counts_match_catalan_and_brute_force() {
    for n in 0..=6usize {
        let points = 2 * n;
        let nc = enumerate_nc_pairings(points).unwrap();
        assert_eq!(nc.len() as u64, catalan(n as u64));
        let brute = all_matchings(points).into_iter().filter(|p| !crosses(p)).count();
        assert_eq!(nc.len(), brute);
    }
    assert!(enumerate_nc_pairings(3).is_err());
}

proptest! {
    #[test]
    fn gluing_matches_strand_tracing((f, g, _) in stack()) {
        let glued = g.glue_vertical(&f).unwrap();
        let (partner, loops) = stack_by_tracing(&g, &f);
        prop_assert_eq!(glued.loops, loops);
        let outer = glued.pairing.points();
        prop_assert_eq!(outer, partner.len());
        for (k, p) in partner.into_iter().enumerate() {
            prop_assert_eq!(glued.pairing.partner(k), p);
        }
        prop_assert!(glued.pairing.is_non_crossing());
    }

    #[test]
    fn gluing_is_associative((f, g, h) in stack()) {
        let gf = g.glue_vertical(&f).unwrap();
        let left = h.glue_vertical(&gf.pairing).unwrap();
        let hg = h.glue_vertical(&g).unwrap();
        let right = hg.pairing.glue_vertical(&f).unwrap();
        prop_assert_eq!(&left.pairing, &right.pairing);
        prop_assert_eq!(gf.loops + left.loops, hg.loops + right.loops);
    }

    #[test]
    fn identity_is_neutral(f in (0usize..5, 0usize..3).prop_flat_map(|(b, t)| pairing(b, b % 2 + 2 * t))) {
        let up = PlanarPairing::identity(f.top()).glue_vertical(&f).unwrap();
        let down = f.glue_vertical(&PlanarPairing::identity(f.bottom())).unwrap();
        prop_assert_eq!(&up.pairing, &f);
        prop_assert_eq!(&down.pairing, &f);
        prop_assert_eq!(up.loops + down.loops, 0);
    }

    #[test]
    fn reflections_are_involutions(f in (0usize..5, 0usize..3).prop_flat_map(|(b, t)| pairing(b, b % 2 + 2 * t))) {
        prop_assert_eq!(&f.mirror().mirror(), &f);
        prop_assert_eq!(&f.flip().flip(), &f);
        prop_assert_eq!(&f.rotate_half().rotate_half(), &f);
        prop_assert!(f.mirror().is_non_crossing());
        prop_assert!(f.rotate_half().is_non_crossing());
    }

    #[test]
    fn juxtaposition_interchanges_with_gluing(
        (f, g) in (0usize..3).prop_flat_map(|a| (pairing(a, a % 2 + 2), pairing(a % 2 + 2, a))),
        (h, k) in (0usize..3).prop_flat_map(|a| (pairing(a, a), pairing(a, a))),
    ) {
        let separate = g.glue_vertical(&f).unwrap();
        let other = k.glue_vertical(&h).unwrap();
        let together = g.juxtapose(&k).glue_vertical(&f.juxtapose(&h)).unwrap();
        prop_assert_eq!(together.pairing, separate.pairing.juxtapose(&other.pairing));
        prop_assert_eq!(together.loops, separate.loops + other.loops);
    }

    #[test]
    fn mirror_respects_gluing((f, g, _) in stack()) {
        let glued = g.glue_vertical(&f).unwrap();
        let mirrored = g.mirror().glue_vertical(&f.mirror()).unwrap();
        prop_assert_eq!(mirrored.pairing, glued.pairing.mirror());
        prop_assert_eq!(mirrored.loops, glued.loops);
    }
}
