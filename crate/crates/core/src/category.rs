//! The Temperley–Lieb category at a rational loop value `δ > 2`.
//!
//! Hom spaces `x^⊗b → x^⊗n` have the non-crossing pairings on `b + n`
//! points as basis. The generating strand is symmetrically self-dual, so
//! duals are half-turn rotations and the pivotal structure is trivial.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gjs::GradedElement;
use crate::linalg::{min_eigenvalue, GramGeometry};
use crate::planar::PlanarPairing;
use crate::scalar::{to_f64, LoopParameter, Scalar};

/// A finite linear combination of pairings with `source` bottom points and
/// `target` top points. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: usize,
    target: usize,
    terms: BTreeMap<PlanarPairing, Scalar>,
}

impl Morphism {
    pub fn zero(source: usize, target: usize) -> Self {
        Self {
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_pairing(pairing: PlanarPairing) -> Self {
        Self::from_term(pairing, Scalar::one())
    }

    pub fn from_term(pairing: PlanarPairing, coeff: Scalar) -> Self {
        let mut m = Self::zero(pairing.bottom(), pairing.top());
        m.add_term(pairing, coeff);
        m
    }

    /// Builds a morphism from terms; every pairing must have the given
    /// boundary.
    pub fn from_terms(
        source: usize,
        target: usize,
        terms: impl IntoIterator<Item = (PlanarPairing, Scalar)>,
    ) -> Result<Self> {
        let mut m = Self::zero(source, target);
        for (p, c) in terms {
            if p.bottom() != source || p.top() != target {
                return Err(Error::Shape {
                    expected: format!("{source} -> {target}"),
                    found: format!("{} -> {}", p.bottom(), p.top()),
                });
            }
            m.add_term(p, c);
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairing(PlanarPairing::identity(n))
    }

    /// The cup `0 → 2`.
    pub fn cup() -> Self {
        Self::from_pairing(PlanarPairing::rainbow_cup(1))
    }

    /// The cap `2 → 0`.
    pub fn cap() -> Self {
        Self::from_pairing(PlanarPairing::rainbow_cap(1))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarPairing, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, pairing: &PlanarPairing) -> Scalar {
        self.terms.get(pairing).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, pairing: PlanarPairing, coeff: Scalar) {
        debug_assert_eq!((pairing.bottom(), pairing.top()), (self.source, self.target));
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(pairing) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        if c.is_zero() {
            return Self::zero(self.source, self.target);
        }
        Self {
            source: self.source,
            target: self.target,
            terms: self.terms.iter().map(|(p, a)| (p.clone(), a * c)).collect(),
        }
    }

    /// Maps every basis pairing, keeping coefficients.
    fn map_pairings(&self, source: usize, target: usize, f: impl Fn(&PlanarPairing) -> PlanarPairing) -> Morphism {
        let mut m = Self::zero(source, target);
        for (p, c) in &self.terms {
            m.add_term(f(p), c.clone());
        }
        m
    }

    /// Vertical reflection with conjugated (here: unchanged) coefficients.
    pub fn dagger(&self) -> Morphism {
        self.map_pairings(self.target, self.source, PlanarPairing::flip)
    }

    /// Reflection in a vertical axis.
    pub fn mirror(&self) -> Morphism {
        self.map_pairings(self.source, self.target, PlanarPairing::mirror)
    }

    /// Bilinear juxtaposition; sources and targets add.
    pub fn tensor(&self, other: &Morphism) -> Morphism {
        let mut m = Self::zero(self.source + other.source, self.target + other.target);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                m.add_term(p.juxtapose(q), a * b);
            }
        }
        m
    }

    pub(crate) fn fold_bottom_left(&self) -> Morphism {
        self.map_pairings(0, self.source + self.target, PlanarPairing::fold_bottom_left)
    }

    pub(crate) fn unfold_top_left(&self, m: usize) -> Result<Morphism> {
        if self.source != 0 || m > self.target {
            return Err(Error::Shape {
                expected: format!("0 -> at least {m}"),
                found: format!("{} -> {}", self.source, self.target),
            });
        }
        let mut out = Self::zero(m, self.target - m);
        for (p, c) in &self.terms {
            out.add_term(p.unfold_top_left(m)?, c.clone());
        }
        Ok(out)
    }

    fn check_same_boundary(&self, other: &Morphism) {
        assert_eq!(
            (self.source, self.target),
            (other.source, other.target),
            "adding morphisms with different boundaries"
        );
    }
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Morphism({} -> {}", self.source, self.target)?;
        for (p, c) in &self.terms {
            write!(f, "; {} {:?}", crate::scalar::format_scalar(c), p)?;
        }
        write!(f, ")")
    }
}

impl Add for &Morphism {
    type Output = Morphism;

    fn add(self, rhs: &Morphism) -> Morphism {
        self.check_same_boundary(rhs);
        let mut m = self.clone();
        for (p, c) in &rhs.terms {
            m.add_term(p.clone(), c.clone());
        }
        m
    }
}

impl Sub for &Morphism {
    type Output = Morphism;

    fn sub(self, rhs: &Morphism) -> Morphism {
        self + &(-rhs)
    }
}

impl Neg for &Morphism {
    type Output = Morphism;

    fn neg(self) -> Morphism {
        self.scale(&-Scalar::one())
    }
}

impl Mul<&Morphism> for &Scalar {
    type Output = Morphism;

    fn mul(self, rhs: &Morphism) -> Morphism {
        rhs.scale(self)
    }
}

/// Which side the strands are closed to in a categorical trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceSide {
    Left,
    Right,
}

/// The Temperley–Lieb category at a fixed loop value. All operations that
/// can produce closed loops go through here.
#[derive(Clone, Debug)]
pub struct Tl {
    delta: LoopParameter,
}

impl Tl {
    pub fn new(delta: LoopParameter) -> Self {
        Self { delta }
    }

    pub fn parse(delta: &str) -> Result<Self> {
        Ok(Self::new(LoopParameter::parse(delta)?))
    }

    pub fn delta(&self) -> &LoopParameter {
        &self.delta
    }

    /// `g ∘ f`: `g` stacked on top of `f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if g.source != f.target {
            return Err(Error::StrandMismatch {
                left: g.source,
                right: f.target,
            });
        }
        let mut acc: BTreeMap<PlanarPairing, Scalar> = BTreeMap::new();
        for (p, a) in &g.terms {
            for (q, b) in &f.terms {
                let glued = p.glue_vertical(q)?;
                let c = a * b * self.delta.pow(glued.loops as i64);
                *acc.entry(glued.pairing).or_insert_with(Scalar::zero) += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Morphism {
            source: f.source,
            target: g.target,
            terms: acc,
        })
    }

    /// Nested cap `ev_n : 2n → 0` and nested cup `coev_n : 0 → 2n`.
    pub fn ev_coev(&self, n: usize) -> (Morphism, Morphism) {
        (
            Morphism::from_pairing(PlanarPairing::rainbow_cap(n)),
            Morphism::from_pairing(PlanarPairing::rainbow_cup(n)),
        )
    }

    /// Coefficient of the empty diagram after closing every strand of an
    /// endomorphism to one side.
    pub fn categorical_trace(&self, f: &Morphism, side: TraceSide) -> Result<Scalar> {
        if f.source != f.target {
            return Err(Error::NotEndomorphism {
                from: f.source,
                to: f.target,
            });
        }
        let n = f.source;
        let (ev, coev) = self.ev_coev(n);
        let id = Morphism::identity(n);
        let opened = match side {
            TraceSide::Right => f.tensor(&id),
            TraceSide::Left => id.tensor(f),
        };
        let closed = self.compose(&ev, &self.compose(&opened, &coev)?)?;
        Ok(closed.coefficient(&PlanarPairing::empty()))
    }

    /// `(ev_n ⊗ id_b) ∘ (id_n ⊗ f ⊗ id_b) ∘ (id_n ⊗ coev_b)` for `f : b → n`.
    pub fn dual_morphism(&self, f: &Morphism) -> Result<Morphism> {
        let (b, n) = (f.source, f.target);
        let (ev_n, _) = self.ev_coev(n);
        let (_, coev_b) = self.ev_coev(b);
        let lower = Morphism::identity(n).tensor(&coev_b);
        let middle = Morphism::identity(n).tensor(f).tensor(&Morphism::identity(b));
        let upper = ev_n.tensor(&Morphism::identity(b));
        self.compose(&upper, &self.compose(&middle, &lower)?)
    }

    /// Bends the `b` bottom strands of `f : b → n` up to the left, giving an
    /// element of `V_{0,b,n}`.
    pub fn frobenius_reciprocity(&self, f: &Morphism) -> GradedElement {
        GradedElement::from_morphism(0, f.source, f.target, f.fold_bottom_left())
            .expect("folded morphism has the advertised shape")
    }

    /// Inverse of [`frobenius_reciprocity`](Self::frobenius_reciprocity) on
    /// the `(0, l, r)` sector.
    pub fn frobenius_inverse(&self, a: &GradedElement, l: usize, r: usize) -> Result<Morphism> {
        let m = a.sector(0, l, r).cloned().unwrap_or_else(|| Morphism::zero(0, l + r));
        if a.sectors().any(|s| (s.b, s.l, s.r) != (0, l, r)) {
            return Err(Error::Shape {
                expected: format!("only the sector (0, {l}, {r})"),
                found: format!("{:?}", a.sectors().collect::<Vec<_>>()),
            });
        }
        m.unfold_top_left(l)
    }

    /// GNS realization of `End(x^⊗n)` for the categorical trace.
    pub fn gns(&self, level: usize) -> Result<GnsRealization> {
        GnsRealization::new(self.clone(), level)
    }

    /// C*-norm of an endomorphism of `x^⊗n`, computed in the GNS
    /// representation of the trace.
    pub fn operator_norm(&self, f: &Morphism, level: usize) -> Result<f64> {
        let gns = self.gns(level)?;
        let m = gns.leftmult(f)?;
        Ok(gns.geometry.operator_norm(&m))
    }
}

/// `End(x^⊗n)` acting on itself by left composition, with inner product
/// `⟨u, v⟩ = Tr(u† ∘ v)`.
#[derive(Clone, Debug)]
pub struct GnsRealization {
    tl: Tl,
    level: usize,
    basis: Vec<PlanarPairing>,
    index: HashMap<PlanarPairing, usize>,
    gram: DMatrix<f64>,
    geometry: GramGeometry,
}

impl GnsRealization {
    fn new(tl: Tl, level: usize) -> Result<Self> {
        let basis = PlanarPairing::enumerate(level, level);
        let index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let d = basis.len();
        let mut gram = DMatrix::zeros(d, d);
        for i in 0..d {
            let ui = Morphism::from_pairing(basis[i].clone()).dagger();
            for j in i..d {
                let prod = tl.compose(&ui, &Morphism::from_pairing(basis[j].clone()))?;
                let v = to_f64(&tl.categorical_trace(&prod, TraceSide::Right)?);
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        let geometry = GramGeometry::new(&gram).ok_or(Error::GramNotPositive(level))?;
        Ok(Self {
            tl,
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

    pub fn basis(&self) -> &[PlanarPairing] {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn geometry(&self) -> &GramGeometry {
        &self.geometry
    }

    pub fn gram_min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.gram)
    }

    /// Matrix of `v ↦ f ∘ v` in the diagram basis.
    pub fn leftmult(&self, f: &Morphism) -> Result<DMatrix<f64>> {
        if f.source != self.level || f.target != self.level {
            return Err(Error::Shape {
                expected: format!("{0} -> {0}", self.level),
                found: format!("{} -> {}", f.source, f.target),
            });
        }
        let d = self.basis.len();
        let mut m = DMatrix::zeros(d, d);
        for (j, v) in self.basis.iter().enumerate() {
            let image = self.tl.compose(f, &Morphism::from_pairing(v.clone()))?;
            for (p, c) in image.terms() {
                m[(self.index[p], j)] += to_f64(c);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use crate::scalar::{int, ratio};

    fn tl() -> Tl {
        Tl::parse("5/2").unwrap()
    }

    fn jones() -> Morphism {
        let t = tl();
        let cupcap = t.compose(&Morphism::cup(), &Morphism::cap()).unwrap();
        cupcap.scale(t.delta().inverse())
    }

    #[test]
    fn identity_composition() {
        let t = tl();
        let mut s = Sampler::new(1);
        for _ in 0..20 {
            let f = s.morphism(2, 4);
            assert_eq!(t.compose(&Morphism::identity(4), &f).unwrap(), f);
            assert_eq!(t.compose(&f, &Morphism::identity(2)).unwrap(), f);
        }
    }

    #[test]
    fn cap_after_cup_is_delta() {
        let t = tl();
        let c = t.compose(&Morphism::cap(), &Morphism::cup()).unwrap();
        assert_eq!(c, Morphism::from_term(PlanarPairing::empty(), ratio(5, 2)));
    }

    #[test]
    fn jones_idempotent() {
        let t = tl();
        let e = jones();
        assert_eq!(t.compose(&e, &e).unwrap(), e);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let t = tl();
        assert!(t.compose(&Morphism::identity(2), &Morphism::identity(3)).is_err());
    }

    #[test]
    fn tensor_units() {
        assert_eq!(Morphism::identity(1).tensor(&Morphism::identity(1)), Morphism::identity(2));
        let mut s = Sampler::new(2);
        let f = s.morphism(3, 1);
        assert_eq!(f.tensor(&Morphism::identity(0)), f);
        assert_eq!(Morphism::identity(0).tensor(&f), f);
    }

    #[test]
    fn dagger_basics() {
        assert_eq!(Morphism::identity(3).dagger(), Morphism::identity(3));
        assert_eq!(Morphism::cup().dagger(), Morphism::cap());
        let t = tl();
        let mut s = Sampler::new(3);
        for _ in 0..20 {
            let f = s.morphism(2, 3);
            let g = s.morphism(3, 1);
            assert_eq!(f.dagger().dagger(), f);
            let lhs = t.compose(&g, &f).unwrap().dagger();
            let rhs = t.compose(&f.dagger(), &g.dagger()).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(f.tensor(&g).dagger(), f.dagger().tensor(&g.dagger()));
        }
    }

    #[test]
    fn zig_zag() {
        let t = tl();
        for n in 0..=5 {
            let (ev, coev) = t.ev_coev(n);
            let id = Morphism::identity(n);
            let lower = id.tensor(&coev);
            let upper = ev.tensor(&id);
            assert_eq!(t.compose(&upper, &lower).unwrap(), id, "n = {n}");
            let loops = t.compose(&ev, &ev.dagger()).unwrap();
            assert_eq!(loops, Morphism::from_term(PlanarPairing::empty(), t.delta().pow(n as i64)));
        }
        let (ev0, coev0) = t.ev_coev(0);
        assert_eq!(ev0, Morphism::identity(0));
        assert_eq!(coev0, Morphism::identity(0));
    }

    #[test]
    fn traces() {
        let t = tl();
        assert_eq!(t.categorical_trace(&Morphism::identity(1), TraceSide::Left).unwrap(), ratio(5, 2));
        for n in 0..5 {
            assert_eq!(
                t.categorical_trace(&Morphism::identity(n), TraceSide::Right).unwrap(),
                t.delta().pow(n as i64)
            );
        }
        let mut s = Sampler::new(4);
        for _ in 0..30 {
            let f = s.morphism(3, 3);
            assert_eq!(
                t.categorical_trace(&f, TraceSide::Left).unwrap(),
                t.categorical_trace(&f, TraceSide::Right).unwrap()
            );
        }
        assert!(t.categorical_trace(&Morphism::cup(), TraceSide::Left).is_err());
    }

    #[test]
    fn duals() {
        let t = tl();
        for n in 0..4 {
            assert_eq!(t.dual_morphism(&Morphism::identity(n)).unwrap(), Morphism::identity(n));
        }
        let mut s = Sampler::new(5);
        for _ in 0..20 {
            let f = s.morphism(2, 2);
            let g = s.morphism(2, 2);
            let h = s.morphism(1, 3);
            let fg = t.compose(&f, &g).unwrap();
            assert_eq!(
                t.dual_morphism(&fg).unwrap(),
                t.compose(&t.dual_morphism(&g).unwrap(), &t.dual_morphism(&f).unwrap()).unwrap()
            );
            assert_eq!(t.dual_morphism(&t.dual_morphism(&h).unwrap()).unwrap(), h);
            assert_eq!(
                t.dual_morphism(&h.dagger()).unwrap(),
                t.dual_morphism(&h).unwrap().dagger()
            );
            let rotated = Morphism::from_terms(3, 1, h.terms().map(|(p, c)| (p.rotate_half(), c.clone())));
            assert_eq!(t.dual_morphism(&h).unwrap(), rotated.unwrap());
        }
    }

    #[test]
    fn frobenius_reciprocity_round_trip() {
        let t = tl();
        assert_eq!(t.frobenius_reciprocity(&Morphism::identity(0)), GradedElement::unit());
        let mut s = Sampler::new(6);
        for _ in 0..10 {
            let f = s.morphism(3, 1);
            let a = t.frobenius_reciprocity(&f);
            assert_eq!(t.frobenius_inverse(&a, 3, 1).unwrap(), f);
        }
    }

    #[test]
    fn norms() {
        let t = tl();
        for n in 0..4 {
            assert!((t.operator_norm(&Morphism::identity(n), n).unwrap() - 1.0).abs() < 1e-9);
        }
        let e = jones();
        assert!((t.operator_norm(&e, 2).unwrap() - 1.0).abs() < 1e-9);
        let cupcap = e.scale(&ratio(5, 2));
        assert!((t.operator_norm(&cupcap, 2).unwrap() - 2.5).abs() < 1e-9);
        assert!(t.operator_norm(&Morphism::cup(), 2).is_err());
        let neg = e.scale(&int(-3));
        assert!((t.operator_norm(&neg, 2).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn gram_positive() {
        let t = tl();
        for n in 0..=4 {
            assert!(t.gns(n).unwrap().gram_min_eigenvalue() > 1e-9, "level {n}");
        }
    }
}
