//! Non-crossing pairings of boundary points and their gluing.
//!
//! A [`PlanarPairing`] has `bottom` points numbered `0..bottom` left to
//! right and `top` points numbered `bottom..bottom + top` left to right.
//! Planarity is tested on the circle that runs along the bottom from left to
//! right and then back along the top from right to left.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarPairing {
    bottom: u16,
    top: u16,
    partner: Vec<u16>,
}

/// A stacked pairing together with the number of closed loops removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingResult {
    pub pairing: PlanarPairing,
    pub loops: usize,
}

impl PlanarPairing {
    /// Builds a pairing from 0-based point pairs, checking that it is a
    /// perfect non-crossing matching.
    pub fn new(bottom: usize, top: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = bottom + top;
        if n % 2 == 1 {
            return Err(Error::OddBoundary(n));
        }
        let mut partner = vec![u16::MAX; n];
        for &(i, j) in pairs {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidPairing(format!("bad pair ({i}, {j}) on {n} points")));
            }
            if partner[i] != u16::MAX || partner[j] != u16::MAX {
                return Err(Error::InvalidPairing(format!("point reused in ({i}, {j})")));
            }
            partner[i] = j as u16;
            partner[j] = i as u16;
        }
        if partner.contains(&u16::MAX) {
            return Err(Error::InvalidPairing("unmatched point".into()));
        }
        let pairing = Self::from_partner(bottom, top, partner);
        if !pairing.is_non_crossing() {
            return Err(Error::InvalidPairing(format!("crossing chords in {pairing:?}")));
        }
        Ok(pairing)
    }

    pub(crate) fn from_partner(bottom: usize, top: usize, partner: Vec<u16>) -> Self {
        debug_assert_eq!(partner.len(), bottom + top);
        Self {
            bottom: bottom as u16,
            top: top as u16,
            partner,
        }
    }

    pub fn empty() -> Self {
        Self::from_partner(0, 0, Vec::new())
    }

    /// `n` vertical strands.
    pub fn identity(n: usize) -> Self {
        let mut partner = vec![0u16; 2 * n];
        for i in 0..n {
            partner[i] = (n + i) as u16;
            partner[n + i] = i as u16;
        }
        Self::from_partner(n, n, partner)
    }

    /// Nested caps closing `2n` bottom points: point `i` meets `2n - 1 - i`.
    pub fn rainbow_cap(n: usize) -> Self {
        let partner = (0..2 * n).map(|i| (2 * n - 1 - i) as u16).collect();
        Self::from_partner(2 * n, 0, partner)
    }

    /// Nested cups on `2n` top points.
    pub fn rainbow_cup(n: usize) -> Self {
        Self::rainbow_cap(n).flip()
    }

    pub fn bottom(&self) -> usize {
        self.bottom as usize
    }

    pub fn top(&self) -> usize {
        self.top as usize
    }

    pub fn points(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    /// Pairs `(i, j)` with `i < j`, sorted by `i`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.points())
            .filter_map(|i| {
                let j = self.partner(i);
                (i < j).then_some((i, j))
            })
            .collect()
    }

    fn circle_index(&self, pos: usize) -> usize {
        let b = self.bottom();
        if pos < b {
            pos
        } else {
            b + self.top() - 1 - (pos - b)
        }
    }

    fn position_of_circle(&self, c: usize) -> usize {
        // the circle map is an involution on the top block
        self.circle_index(c)
    }

    pub fn is_non_crossing(&self) -> bool {
        let mut stack: Vec<usize> = Vec::new();
        for c in 0..self.points() {
            let pos = self.position_of_circle(c);
            let other = self.circle_index(self.partner(pos));
            if other > c {
                stack.push(c);
            } else if stack.pop() != Some(other) {
                return false;
            }
        }
        true
    }

    /// Every non-crossing pairing with the given boundary, in lexicographic
    /// order of the partner map.
    pub fn enumerate(bottom: usize, top: usize) -> Vec<PlanarPairing> {
        let n = bottom + top;
        if n % 2 == 1 {
            return Vec::new();
        }
        let shape = Self::from_partner(bottom, top, vec![0; n]);
        let mut out: Vec<PlanarPairing> = circle_matchings(n)
            .iter()
            .map(|circle| {
                let mut partner = vec![0u16; n];
                for c in 0..n {
                    let pos = shape.position_of_circle(c);
                    partner[pos] = shape.position_of_circle(circle[c] as usize) as u16;
                }
                Self::from_partner(bottom, top, partner)
            })
            .collect();
        out.sort();
        out
    }

    /// Disjoint union, `right` placed to the right of `self`.
    pub fn juxtapose(&self, right: &PlanarPairing) -> PlanarPairing {
        let (lb, lt) = (self.bottom(), self.top());
        let (rb, rt) = (right.bottom(), right.top());
        let left_pos = |p: usize| if p < lb { p } else { lb + rb + (p - lb) };
        let right_pos = |p: usize| if p < rb { lb + p } else { lb + rb + lt + (p - rb) };
        let mut partner = vec![0u16; self.points() + right.points()];
        for p in 0..self.points() {
            partner[left_pos(p)] = left_pos(self.partner(p)) as u16;
        }
        for p in 0..right.points() {
            partner[right_pos(p)] = right_pos(right.partner(p)) as u16;
        }
        Self::from_partner(lb + rb, lt + rt, partner)
    }

    /// Stacks `self` on top of `lower`. The bottom boundary of `self` is
    /// glued to the top boundary of `lower`.
    pub fn glue_vertical(&self, lower: &PlanarPairing) -> Result<GluingResult> {
        if self.bottom() != lower.top() {
            return Err(Error::StrandMismatch {
                left: self.bottom(),
                right: lower.top(),
            });
        }
        let lp = lower.points();
        let mut dsu = Dsu::new(lp + self.points());
        for p in 0..lp {
            dsu.union(p, lower.partner(p));
        }
        for p in 0..self.points() {
            dsu.union(lp + p, lp + self.partner(p));
        }
        for j in 0..self.bottom() {
            dsu.union(lower.bottom() + j, lp + j);
        }

        // outer points, already in output order
        let outer: Vec<usize> = (0..lower.bottom())
            .chain((0..self.top()).map(|j| lp + self.bottom() + j))
            .collect();
        let mut first_seen: Vec<Option<usize>> = vec![None; lp + self.points()];
        let mut partner = vec![0u16; outer.len()];
        for (k, &node) in outer.iter().enumerate() {
            let root = dsu.find(node);
            match first_seen[root] {
                Some(other) => {
                    partner[k] = other as u16;
                    partner[other] = k as u16;
                }
                None => first_seen[root] = Some(k),
            }
        }
        let mut counted = vec![false; lp + self.points()];
        let mut loops = 0;
        for j in 0..self.bottom() {
            let root = dsu.find(lower.bottom() + j);
            if first_seen[root].is_none() && !counted[root] {
                counted[root] = true;
                loops += 1;
            }
        }
        Ok(GluingResult {
            pairing: Self::from_partner(lower.bottom(), self.top(), partner),
            loops,
        })
    }

    /// Reflection in a vertical axis: both boundaries are reversed.
    pub fn mirror(&self) -> PlanarPairing {
        let (b, t) = (self.bottom(), self.top());
        let map = |p: usize| if p < b { b - 1 - p } else { b + (t - 1 - (p - b)) };
        let mut partner = vec![0u16; self.points()];
        for p in 0..self.points() {
            partner[map(p)] = map(self.partner(p)) as u16;
        }
        Self::from_partner(b, t, partner)
    }

    /// Reflection in a horizontal axis: bottom and top are exchanged.
    pub fn flip(&self) -> PlanarPairing {
        let (b, t) = (self.bottom(), self.top());
        let map = |p: usize| if p < b { t + p } else { p - b };
        let mut partner = vec![0u16; self.points()];
        for p in 0..self.points() {
            partner[map(p)] = map(self.partner(p)) as u16;
        }
        Self::from_partner(t, b, partner)
    }

    /// Rotation by a half turn.
    pub fn rotate_half(&self) -> PlanarPairing {
        self.flip().mirror()
    }

    /// Bends every bottom strand up to the left: bottom point `i` becomes
    /// top point `bottom - 1 - i`, the old top follows.
    pub fn fold_bottom_left(&self) -> PlanarPairing {
        let b = self.bottom();
        let map = |p: usize| if p < b { b - 1 - p } else { p };
        let mut partner = vec![0u16; self.points()];
        for p in 0..self.points() {
            partner[map(p)] = map(self.partner(p)) as u16;
        }
        Self::from_partner(0, self.points(), partner)
    }

    /// Inverse of [`fold_bottom_left`](Self::fold_bottom_left): the first
    /// `m` top points are bent down into bottom points.
    pub fn unfold_top_left(&self, m: usize) -> Result<PlanarPairing> {
        if self.bottom() != 0 || m > self.top() {
            return Err(Error::Shape {
                expected: format!("no bottom points and at least {m} top points"),
                found: format!("{} bottom, {} top", self.bottom(), self.top()),
            });
        }
        let map = |p: usize| if p < m { m - 1 - p } else { p };
        let mut partner = vec![0u16; self.points()];
        for p in 0..self.points() {
            partner[map(p)] = map(self.partner(p)) as u16;
        }
        Ok(Self::from_partner(m, self.top() - m, partner))
    }
}

impl fmt::Debug for PlanarPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.bottom, self.top)?;
        for (i, j) in self.pairs() {
            write!(f, "({},{})", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// All non-crossing perfect matchings of `points` points on a line.
///
/// Errors on an odd count. The result has Catalan(`points / 2`) entries.
pub fn enumerate_nc_pairings(points: usize) -> Result<Vec<PlanarPairing>> {
    if points % 2 == 1 {
        return Err(Error::OddBoundary(points));
    }
    Ok(PlanarPairing::enumerate(points, 0))
}

/// Non-crossing pairings of `b` top points, cached; these are the cups
/// summed over by the trace.
pub(crate) fn nc_cups(b: usize) -> &'static [PlanarPairing] {
    const SLOTS: usize = 20;
    static CACHE: [OnceLock<Vec<PlanarPairing>>; SLOTS] = [const { OnceLock::new() }; SLOTS];
    assert!(b % 2 == 0 && b / 2 < SLOTS, "cup enumeration out of range: {b}");
    CACHE[b / 2].get_or_init(|| PlanarPairing::enumerate(0, b))
}

fn circle_matchings(n: usize) -> Vec<Vec<u16>> {
    // the first point of an interval meets a point at odd offset; the
    // inside and the outside of that chord are matched independently
    fn intervals(lo: usize, hi: usize) -> Vec<Vec<(u16, u16)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for j in (lo + 1..hi).step_by(2) {
            let inside = intervals(lo + 1, j);
            let outside = intervals(j + 1, hi);
            for a in &inside {
                for c in &outside {
                    let mut v = Vec::with_capacity(1 + a.len() + c.len());
                    v.push((lo as u16, j as u16));
                    v.extend_from_slice(a);
                    v.extend_from_slice(c);
                    out.push(v);
                }
            }
        }
        out
    }
    intervals(0, n)
        .into_iter()
        .map(|pairs| {
            let mut partner = vec![0u16; n];
            for (i, j) in pairs {
                partner[i as usize] = j;
                partner[j as usize] = i;
            }
            partner
        })
        .collect()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cup() -> PlanarPairing {
        PlanarPairing::new(0, 2, &[(0, 1)]).unwrap()
    }

    fn cap() -> PlanarPairing {
        PlanarPairing::new(2, 0, &[(0, 1)]).unwrap()
    }

    /// Brute force: every perfect matching, keep the ones whose chords do
    /// not interleave on the circle.
    fn brute_force_count(n: usize) -> usize {
        fn all(points: Vec<usize>) -> Vec<Vec<(usize, usize)>> {
            if points.is_empty() {
                return vec![vec![]];
            }
            let first = points[0];
            let mut out = Vec::new();
            for k in 1..points.len() {
                let rest: Vec<usize> = points
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != 0 && i != k)
                    .map(|(_, &p)| p)
                    .collect();
                for mut m in all(rest) {
                    m.push((first, points[k]));
                    out.push(m);
                }
            }
            out
        }
        all((0..n).collect())
            .into_iter()
            .filter(|m| {
                m.iter().all(|&(a, b)| {
                    m.iter().all(|&(c, d)| {
                        let inside = |x: usize| a.min(b) < x && x < a.max(b);
                        inside(c) == inside(d)
                    })
                })
            })
            .count()
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_nc_pairings(0).unwrap(), vec![PlanarPairing::empty()]);
        let four = enumerate_nc_pairings(4).unwrap();
        let pairs: Vec<_> = four.iter().map(|p| p.pairs()).collect();
        assert_eq!(pairs, vec![vec![(0, 1), (2, 3)], vec![(0, 3), (1, 2)]]);
        assert_eq!(brute_force_count(8), 14);
        assert_eq!(enumerate_nc_pairings(8).unwrap().len(), 14);
        assert_eq!(enumerate_nc_pairings(3), Err(Error::OddBoundary(3)));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in (0..=10).step_by(2) {
            assert_eq!(enumerate_nc_pairings(n).unwrap().len(), brute_force_count(n), "n = {n}");
        }
    }

    #[test]
    fn mixed_boundary_enumeration_is_planar() {
        for b in 0..6 {
            for t in 0..6 {
                let all = PlanarPairing::enumerate(b, t);
                assert!(all.iter().all(|p| p.is_non_crossing()));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(PlanarPairing::enumerate(2, 2).len(), 2);
        assert_eq!(PlanarPairing::enumerate(3, 3).len(), 5);
    }

    #[test]
    fn crossing_rejected() {
        assert!(PlanarPairing::new(4, 0, &[(0, 2), (1, 3)]).is_err());
        // bottom 1 to top 2 and bottom 2 to top 1 cross
        assert!(PlanarPairing::new(2, 2, &[(0, 3), (1, 2)]).is_err());
        assert!(PlanarPairing::new(2, 2, &[(0, 2), (1, 3)]).is_ok());
    }

    #[test]
    fn identity_gluing_keeps_pairing() {
        for p in PlanarPairing::enumerate(3, 3) {
            let up = PlanarPairing::identity(3).glue_vertical(&p).unwrap();
            assert_eq!(up, GluingResult { pairing: p.clone(), loops: 0 });
            let down = p.glue_vertical(&PlanarPairing::identity(3)).unwrap();
            assert_eq!(down.pairing, p);
        }
    }

    #[test]
    fn cap_over_cup_is_a_loop() {
        let g = cap().glue_vertical(&cup()).unwrap();
        assert_eq!(g.pairing, PlanarPairing::empty());
        assert_eq!(g.loops, 1);
    }

    #[test]
    fn cup_cap_squared_has_one_loop() {
        let e = cup().glue_vertical(&cap()).unwrap().pairing;
        assert_eq!(e.bottom(), 2);
        assert_eq!(e.top(), 2);
        let sq = e.glue_vertical(&e).unwrap();
        assert_eq!(sq.pairing, e);
        assert_eq!(sq.loops, 1);
    }

    #[test]
    fn strand_mismatch() {
        assert!(cap().glue_vertical(&PlanarPairing::identity(3)).is_err());
    }

    #[test]
    fn juxtaposition() {
        let e = PlanarPairing::empty();
        let p = PlanarPairing::enumerate(2, 4)[3].clone();
        assert_eq!(e.juxtapose(&p), p);
        assert_eq!(p.juxtapose(&e), p);
        let one = PlanarPairing::identity(1);
        assert_eq!(one.juxtapose(&one), PlanarPairing::identity(2));
        let two_cups = cup().juxtapose(&cup());
        assert_eq!(two_cups.pairs(), vec![(0, 1), (2, 3)]);
        assert_eq!(two_cups.top(), 4);
    }

    #[test]
    fn folding_round_trip() {
        for p in PlanarPairing::enumerate(3, 3) {
            let folded = p.fold_bottom_left();
            assert!(folded.is_non_crossing());
            assert_eq!(folded.unfold_top_left(3).unwrap(), p);
        }
    }

    #[test]
    fn rainbows() {
        let cap3 = PlanarPairing::rainbow_cap(3);
        assert_eq!(cap3.pairs(), vec![(0, 5), (1, 4), (2, 3)]);
        assert!(cap3.is_non_crossing());
        let cup2 = PlanarPairing::rainbow_cup(2);
        assert_eq!(cup2.bottom(), 0);
        assert_eq!(cup2.pairs(), vec![(0, 3), (1, 2)]);
        let g = PlanarPairing::rainbow_cap(2).glue_vertical(&cup2).unwrap();
        assert_eq!(g.loops, 2);
    }
}
