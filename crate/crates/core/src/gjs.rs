//! The graded algebra `Gr_∞ = ⊕ V_{b,l,r}` with `V_{b,l,r} = Hom(b, l + r)`.
//!
//! An element of `V_{b,l,r}` is a diagram with `b` bottom strings and
//! `l + r` top strings, the first `l` of which sit left of the marked
//! point. Products glue the right top strings of the first factor to the
//! left top strings of the second with a nested cap; the Walker product
//! additionally joins bottom strings with nested cups.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::category::{Morphism, Tl};
use crate::error::{Error, Result};
use crate::linalg::GramGeometry;
use crate::planar::{nc_cups, PlanarPairing};
use crate::scalar::{ln_positive, to_f64, LoopParameter, Scalar};

/// Default cap on the number of bottom strings a moment computation may
/// create.
pub const DEFAULT_BOTTOM_BUDGET: usize = 24;

/// The grading `(b, l, r)` of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sector {
    pub b: usize,
    pub l: usize,
    pub r: usize,
}

impl Sector {
    pub fn new(b: usize, l: usize, r: usize) -> Self {
        Self { b, l, r }
    }
}

/// A finite sum of homogeneous pieces, stored per sector.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GradedElement {
    terms: BTreeMap<Sector, Morphism>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty diagram `∅ ∈ V_{0,0,0}`, unit of the `(0, 0)` corner.
    pub fn unit() -> Self {
        Self::from_pairing(0, 0, 0, PlanarPairing::empty()).unwrap()
    }

    /// `p_n ∈ V_{0,n,n}`: `n` nested cups straddling the marked point.
    pub fn projection(n: usize) -> Self {
        Self::from_pairing(0, n, n, PlanarPairing::rainbow_cup(n)).unwrap()
    }

    /// The single string `V_{1,0,1}`.
    pub fn strand() -> Self {
        Self::straight(1)
    }

    /// `n` vertical strings viewed in `V_{n,0,n}`.
    pub fn straight(n: usize) -> Self {
        Self::from_pairing(n, 0, n, PlanarPairing::identity(n)).unwrap()
    }

    pub fn from_pairing(b: usize, l: usize, r: usize, p: PlanarPairing) -> Result<Self> {
        Self::from_morphism(b, l, r, Morphism::from_pairing(p))
    }

    pub fn from_morphism(b: usize, l: usize, r: usize, m: Morphism) -> Result<Self> {
        if m.source() != b || m.target() != l + r {
            return Err(Error::Shape {
                expected: format!("a morphism {b} -> {}", l + r),
                found: format!("{} -> {}", m.source(), m.target()),
            });
        }
        let mut x = Self::zero();
        x.insert(Sector::new(b, l, r), m);
        Ok(x)
    }

    fn insert(&mut self, s: Sector, m: Morphism) {
        if m.is_zero() {
            return;
        }
        match self.terms.remove(&s) {
            Some(old) => {
                let sum = &old + &m;
                if !sum.is_zero() {
                    self.terms.insert(s, sum);
                }
            }
            None => {
                self.terms.insert(s, m);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sector(&self, b: usize, l: usize, r: usize) -> Option<&Morphism> {
        self.terms.get(&Sector::new(b, l, r))
    }

    pub fn sectors(&self) -> impl Iterator<Item = Sector> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Sector, &Morphism)> {
        self.terms.iter().map(|(s, m)| (*s, m))
    }

    /// Number of basis diagrams with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.values().map(Morphism::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn max_bottom(&self) -> usize {
        self.terms.keys().map(|s| s.b).max().unwrap_or(0)
    }

    /// The common `(l, r)` of all terms, or `None` for zero and for
    /// elements spread over several corners.
    pub fn corner_shape(&self) -> Option<(usize, usize)> {
        let mut shapes = self.terms.keys().map(|s| (s.l, s.r));
        let first = shapes.next()?;
        shapes.all(|s| s == first).then_some(first)
    }

    /// Zero lies in every corner.
    pub fn lies_in_corner(&self, l: usize, r: usize) -> bool {
        self.terms.keys().all(|s| s.l == l && s.r == r)
    }

    pub fn require_corner(&self, l: usize, r: usize) -> Result<()> {
        if self.lies_in_corner(l, r) {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: format!("corner ({l}, {r})"),
                found: self.describe_shape(),
            })
        }
    }

    pub fn describe_shape(&self) -> String {
        let sectors: Vec<String> = self.terms.keys().map(|s| format!("({}, {}, {})", s.b, s.l, s.r)).collect();
        format!("sectors [{}]", sectors.join(", "))
    }

    /// Keeps the terms whose sector satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Sector) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|(s, _)| keep(**s)).map(|(s, m)| (*s, m.clone())).collect(),
        }
    }

    /// Moves every term to a new sector without touching its diagrams.
    pub(crate) fn regrade(&self, f: impl Fn(Sector) -> Sector) -> Self {
        let mut x = Self::zero();
        for (s, m) in &self.terms {
            let t = f(*s);
            debug_assert_eq!(t.b + t.l + t.r, s.b + s.l + s.r);
            x.insert(t, m.clone());
        }
        x
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut x = Self::zero();
        for (s, m) in &self.terms {
            x.insert(*s, m.scale(c));
        }
        x
    }

    /// The involution: each diagram is mirrored and `(b, l, r)` becomes
    /// `(b, r, l)`. Coefficients are real, so conjugation does nothing.
    pub fn star(&self) -> Self {
        let mut x = Self::zero();
        for (s, m) in &self.terms {
            x.insert(Sector::new(s.b, s.r, s.l), m.mirror());
        }
        x
    }

    /// Coefficient of `∅` in the `(0, 0, 0)` sector.
    pub fn scalar_part(&self) -> Scalar {
        self.sector(0, 0, 0)
            .map(|m| m.coefficient(&PlanarPairing::empty()))
            .unwrap_or_else(Scalar::zero)
    }

    /// `Some(c)` when the element is `c · ∅`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.keys().all(|s| *s == Sector::new(0, 0, 0)) {
            Some(self.scalar_part())
        } else {
            None
        }
    }
}

impl std::fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(s, m)| ((s.b, s.l, s.r), m))).finish()
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;

    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut x = self.clone();
        for (s, m) in &rhs.terms {
            x.insert(*s, m.clone());
        }
        x
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;

    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self + &(-rhs)
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;

    fn neg(self) -> GradedElement {
        self.scale(&-Scalar::one())
    }
}

/// One entry of a moment-based norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub p: usize,
    pub estimate: f64,
}

/// Products, traces and expectations of graded elements at a fixed loop
/// value.
#[derive(Clone, Debug)]
pub struct Gjs {
    tl: Tl,
    bottom_budget: usize,
}

impl Gjs {
    pub fn new(delta: LoopParameter) -> Self {
        Self {
            tl: Tl::new(delta),
            bottom_budget: DEFAULT_BOTTOM_BUDGET,
        }
    }

    pub fn parse(delta: &str) -> Result<Self> {
        Ok(Self::new(LoopParameter::parse(delta)?))
    }

    pub fn with_bottom_budget(mut self, budget: usize) -> Self {
        self.bottom_budget = budget;
        self
    }

    pub fn bottom_budget(&self) -> usize {
        self.bottom_budget
    }

    pub fn tl(&self) -> &Tl {
        &self.tl
    }

    pub fn delta(&self) -> &LoopParameter {
        self.tl.delta()
    }

    /// Glues one homogeneous term of `x` to one of `y`, joining `k` pairs
    /// of bottom strings. `None` when the top strings do not match.
    fn glue_terms(&self, s: Sector, f: &Morphism, t: Sector, g: &Morphism, k: usize) -> Result<Option<(Sector, Morphism)>> {
        if s.r != t.l || k > s.b.min(t.b) {
            return Ok(None);
        }
        let (ev, _) = self.tl.ev_coev(s.r);
        let contraction = Morphism::identity(s.l).tensor(&ev).tensor(&Morphism::identity(t.r));
        let mut glued = self.tl.compose(&contraction, &f.tensor(g))?;
        if k > 0 {
            let (_, coev) = self.tl.ev_coev(k);
            let joins = Morphism::identity(s.b - k).tensor(&coev).tensor(&Morphism::identity(t.b - k));
            glued = self.tl.compose(&glued, &joins)?;
        }
        Ok(Some((Sector::new(s.b + t.b - 2 * k, s.l, t.r), glued)))
    }

    fn bilinear(&self, x: &GradedElement, y: &GradedElement, ks: impl Fn(Sector, Sector) -> Vec<usize>) -> GradedElement {
        let mut out = GradedElement::zero();
        for (s, f) in &x.terms {
            for (t, g) in &y.terms {
                for k in ks(*s, *t) {
                    let glued = self.glue_terms(*s, f, *t, g, k).expect("boundaries agree by construction");
                    if let Some((sector, m)) = glued {
                        out.insert(sector, m);
                    }
                }
            }
        }
        out
    }

    /// The graded product `x ∧ y`.
    pub fn wedge(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        self.bilinear(x, y, |_, _| vec![0])
    }

    /// The summand of the Walker product joining `k` pairs of bottom
    /// strings.
    pub fn walker_term(&self, x: &GradedElement, y: &GradedElement, k: usize) -> GradedElement {
        self.bilinear(x, y, |_, _| vec![k])
    }

    /// The Walker product `x ⋆ y`, summing over all partial joins of the
    /// innermost bottom strings.
    pub fn walker(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        self.bilinear(x, y, |s, t| (0..=s.b.min(t.b)).collect())
    }

    /// Iterated wedge; the empty product is `∅`.
    pub fn wedge_all<'a>(&self, factors: impl IntoIterator<Item = &'a GradedElement>) -> GradedElement {
        let mut acc: Option<GradedElement> = None;
        for f in factors {
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => self.wedge(&a, f),
            });
        }
        acc.unwrap_or_else(GradedElement::unit)
    }

    /// The Voiculescu trace: tops closed by a nested cap, bottoms summed
    /// over every non-crossing pairing.
    pub fn voiculescu_trace(&self, x: &GradedElement) -> Scalar {
        let mut total = Scalar::zero();
        for (s, m) in &x.terms {
            if s.l != s.r {
                continue;
            }
            let (ev, _) = self.tl.ev_coev(s.l);
            let closed = self.tl.compose(&ev, m).expect("cap matches the top boundary");
            for (p, c) in closed.terms() {
                let mut weight = Scalar::zero();
                for cup in nc_cups(s.b) {
                    weight += self.delta().pow(closing_loops(p, cup) as i64);
                }
                total += c * weight;
            }
        }
        total
    }

    /// `tr_n = δ^{-n} Tr` on the corner `(n, n)`; `tr_n(p_n) = 1`.
    pub fn normalized_trace(&self, x: &GradedElement, n: usize) -> Result<Scalar> {
        x.require_corner(n, n)?;
        Ok(self.voiculescu_trace(x) * self.delta().pow(-(n as i64)))
    }

    /// The weight `Φ` on elements without bottom strings.
    pub fn weight_phi(&self, a: &GradedElement) -> Result<Scalar> {
        if let Some(s) = a.sectors().find(|s| s.b > 0) {
            return Err(Error::Shape {
                expected: "no bottom strings".into(),
                found: format!("sector ({}, {}, {})", s.b, s.l, s.r),
            });
        }
        Ok(self.voiculescu_trace(a))
    }

    /// The expectation onto the ground algebra, in the Walker picture:
    /// the component without bottom strings.
    pub fn expectation_onto_a(&self, x: &GradedElement) -> GradedElement {
        x.filter(|s| s.b == 0)
    }

    /// `E_n`: cap the `2n` top strings, weight by `δ^{-n}`, and put a fresh
    /// `p_n` on top.
    pub fn expectation_en(&self, m: &GradedElement, n: usize) -> Result<GradedElement> {
        m.require_corner(n, n)?;
        let (ev, coev) = self.tl.ev_coev(n);
        let weight = self.delta().pow(-(n as i64));
        let mut out = GradedElement::zero();
        for (s, f) in &m.terms {
            let capped = self.tl.compose(&ev, f)?;
            out.insert(*s, capped.tensor(&coev).scale(&weight));
        }
        Ok(out)
    }

    /// `ι_n`: the `(0, 0)` corner into the `(n, n)` corner by placing `n`
    /// nested cups beside the diagram.
    pub fn iota(&self, x: &GradedElement, n: usize) -> Result<GradedElement> {
        x.require_corner(0, 0)?;
        let (_, coev) = self.tl.ev_coev(n);
        let mut out = GradedElement::zero();
        for (s, f) in &x.terms {
            out.insert(Sector::new(s.b, n, n), f.tensor(&coev));
        }
        Ok(out)
    }

    /// Inverse of [`iota`](Self::iota) on its image; errors elsewhere.
    pub fn iota_preimage(&self, y: &GradedElement, n: usize) -> Result<GradedElement> {
        y.require_corner(n, n)?;
        let (ev, _) = self.tl.ev_coev(n);
        let weight = self.delta().pow(-(n as i64));
        let mut x = GradedElement::zero();
        for (s, f) in &y.terms {
            x.insert(Sector::new(s.b, 0, 0), self.tl.compose(&ev, f)?.scale(&weight));
        }
        if self.iota(&x, n)? != *y {
            return Err(Error::Shape {
                expected: format!("an element of the image of iota_{n}"),
                found: y.describe_shape(),
            });
        }
        Ok(x)
    }

    /// Includes `Gr_{0,n}` into `Gr_{0,n+m}` by wrapping `m` nested cups
    /// around every diagram.
    pub fn embed_level(&self, a: &GradedElement, m: usize) -> Result<GradedElement> {
        if let Some(s) = a.sectors().find(|s| s.b > 0) {
            return Err(Error::Shape {
                expected: "no bottom strings".into(),
                found: format!("sector ({}, {}, {})", s.b, s.l, s.r),
            });
        }
        let (_, coev) = self.tl.ev_coev(m);
        let mut out = GradedElement::zero();
        for (s, f) in &a.terms {
            let wrapped = Morphism::identity(m).tensor(f).tensor(&Morphism::identity(m));
            out.insert(Sector::new(0, s.l + m, s.r + m), self.tl.compose(&wrapped, &coev)?);
        }
        Ok(out)
    }

    /// `p_n ∧ x ∧ p_m`.
    pub fn corner_projection(&self, x: &GradedElement, n: usize, m: usize) -> GradedElement {
        let left = self.wedge(&GradedElement::projection(n), x);
        self.wedge(&left, &GradedElement::projection(m))
    }

    /// Moment estimates `tr_n((a* ∧ a)^p)^{1/2p}` for `p = 1, 2, 4, …, p_max`.
    ///
    /// The element must lie in a corner `(n, n)`. Errors before computing
    /// anything if the largest power would need more bottom strings than
    /// the budget allows.
    pub fn norm_estimate(&self, a: &GradedElement, p_max: usize) -> Result<Vec<MomentEstimate>> {
        if p_max == 0 || !p_max.is_power_of_two() {
            return Err(Error::MomentOrder(p_max));
        }
        let n = match a.corner_shape() {
            Some((l, r)) if l == r => l,
            Some(_) | None if a.is_zero() => 0,
            _ => {
                return Err(Error::Shape {
                    expected: "a corner (n, n)".into(),
                    found: a.describe_shape(),
                })
            }
        };
        let square = self.wedge(&a.star(), a);
        let needed = square.max_bottom() * p_max;
        if needed > self.bottom_budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.bottom_budget,
            });
        }
        let mut out = Vec::new();
        let mut power = square;
        let mut p = 1;
        loop {
            let moment = self.normalized_trace(&power, n)?;
            let estimate = if moment.is_positive() {
                (ln_positive(&moment) / (2 * p) as f64).exp()
            } else {
                0.0
            };
            out.push(MomentEstimate { p, estimate });
            if p == p_max {
                break;
            }
            power = self.wedge(&power, &power);
            p *= 2;
        }
        Ok(out)
    }

    /// GNS realization of `Gr_{0,n}` for the inner product `Φ(u* ∧ v)`.
    pub fn ground_gns(&self, level: usize) -> Result<GroundGns> {
        GroundGns::new(self.clone(), level)
    }

    /// Operator norm of `a ∈ Gr_{0,n}` acting by `∧` on `Gr_{0,n}`.
    pub fn ground_operator_norm(&self, a: &GradedElement, level: usize) -> Result<f64> {
        let gns = self.ground_gns(level)?;
        Ok(gns.geometry.operator_norm(&gns.leftmult(a)?))
    }

    /// Smallest eigenvalue of `E_n(b) - c·b` for `b` in `V_{0,n,n}`,
    /// computed in the category GNS representation via `FR⁻¹`.
    pub fn pimsner_popa_margin(&self, b: &GradedElement, n: usize, constant: &Scalar) -> Result<f64> {
        if b.sectors().any(|s| s.b > 0) {
            return Err(Error::Shape {
                expected: format!("an element of V_(0,{n},{n})"),
                found: b.describe_shape(),
            });
        }
        let diff = &self.expectation_en(b, n)? - &b.scale(constant);
        let f = self.tl.frobenius_inverse(&diff, n, n)?;
        let gns = self.tl.gns(n)?;
        let spectrum = gns.geometry().self_adjoint_spectrum(&gns.leftmult(&f)?);
        Ok(spectrum.first().copied().unwrap_or(f64::INFINITY))
    }
}

/// Loops formed by closing a pairing of `b` bottom points (and no top
/// points) against a cup pairing of `b` points.
fn closing_loops(closed: &PlanarPairing, cup: &PlanarPairing) -> usize {
    let b = closed.bottom();
    let mut seen = vec![false; b];
    let mut loops = 0;
    for start in 0..b {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut i = start;
        loop {
            seen[i] = true;
            let j = closed.partner(i);
            seen[j] = true;
            i = cup.partner(j);
            if i == start {
                break;
            }
        }
    }
    loops
}

/// `Gr_{0,n}` acting on itself by `∧`, with basis all diagrams of
/// `V_{0,l,r}` for `l, r ≤ n` and inner product `Φ(u* ∧ v)`.
#[derive(Clone, Debug)]
pub struct GroundGns {
    gjs: Gjs,
    level: usize,
    basis: Vec<(Sector, PlanarPairing)>,
    index: HashMap<(Sector, PlanarPairing), usize>,
    gram: DMatrix<f64>,
    geometry: GramGeometry,
}

impl GroundGns {
    fn new(gjs: Gjs, level: usize) -> Result<Self> {
        let mut basis = Vec::new();
        for l in 0..=level {
            for r in 0..=level {
                if (l + r) % 2 == 0 {
                    for p in PlanarPairing::enumerate(0, l + r) {
                        basis.push((Sector::new(0, l, r), p));
                    }
                }
            }
        }
        let index: HashMap<_, _> = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let elements: Vec<GradedElement> = basis
            .iter()
            .map(|(s, p)| GradedElement::from_pairing(s.b, s.l, s.r, p.clone()).unwrap())
            .collect();
        let d = basis.len();
        let mut gram = DMatrix::zeros(d, d);
        for i in 0..d {
            let ui = elements[i].star();
            for j in i..d {
                let v = to_f64(&gjs.weight_phi(&gjs.wedge(&ui, &elements[j]))?);
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        let geometry = GramGeometry::new(&gram).ok_or(Error::GramNotPositive(level))?;
        Ok(Self {
            gjs,
            level,
            basis,
            index,
            gram,
            geometry,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn geometry(&self) -> &GramGeometry {
        &self.geometry
    }

    /// Matrix of `v ↦ a ∧ v`.
    pub fn leftmult(&self, a: &GradedElement) -> Result<DMatrix<f64>> {
        if let Some(s) = a.sectors().find(|s| s.b > 0 || s.l > self.level || s.r > self.level) {
            return Err(Error::Shape {
                expected: format!("an element of Gr_(0,{})", self.level),
                found: format!("sector ({}, {}, {})", s.b, s.l, s.r),
            });
        }
        let d = self.basis.len();
        let mut m = DMatrix::zeros(d, d);
        for (j, (s, p)) in self.basis.iter().enumerate() {
            let v = GradedElement::from_pairing(s.b, s.l, s.r, p.clone())?;
            for (t, f) in self.gjs.wedge(a, &v).terms() {
                for (q, c) in f.terms() {
                    m[(self.index[&(t, q.clone())], j)] += to_f64(c);
                }
            }
        }
        Ok(m)
    }
}
