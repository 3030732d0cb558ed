//! The truncated full Fock module over the ground algebra.
//!
//! Sector `b` holds the elements with exactly `b` bottom strings; gluing
//! sectors side by side is the wedge product, so creation is a left wedge
//! and annihilation joins one bottom string of the symbol with the first
//! bottom string of the vector.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::gjs::{GradedElement, Gjs};
use crate::scalar::Scalar;

pub const DEFAULT_DEPTH: usize = 6;

/// A vector of the Fock module truncated below `depth`.
///
/// `truncated` records that some operator produced a component at or
/// beyond the depth, which was then dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    depth: usize,
    sectors: BTreeMap<usize, GradedElement>,
    truncated: bool,
}

impl FockVector {
    pub fn zero(depth: usize) -> Self {
        Self {
            depth,
            sectors: BTreeMap::new(),
            truncated: false,
        }
    }

    /// `a` placed in sector 0; the terms of `a` must have no bottom strings.
    pub fn vacuum(depth: usize, a: &GradedElement) -> Self {
        Self::from_element(depth, a)
    }

    /// Splits a graded element into sectors by bottom count. Components at
    /// or beyond the depth are dropped and flagged.
    pub fn from_element(depth: usize, x: &GradedElement) -> Self {
        let mut v = Self::zero(depth);
        for (s, m) in x.terms() {
            let piece = GradedElement::from_morphism(s.b, s.l, s.r, m.clone()).expect("term of a valid element");
            v.add_to_sector(s.b, &piece);
        }
        v
    }

    fn add_to_sector(&mut self, b: usize, x: &GradedElement) {
        if x.is_zero() {
            return;
        }
        if b >= self.depth {
            self.truncated = true;
            return;
        }
        let sum = match self.sectors.remove(&b) {
            Some(old) => &old + x,
            None => x.clone(),
        };
        if !sum.is_zero() {
            self.sectors.insert(b, sum);
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn sector(&self, b: usize) -> GradedElement {
        self.sectors.get(&b).cloned().unwrap_or_default()
    }

    pub fn sectors(&self) -> impl Iterator<Item = (usize, &GradedElement)> {
        self.sectors.iter().map(|(b, x)| (*b, x))
    }

    /// All sectors summed back into one graded element.
    pub fn to_element(&self) -> GradedElement {
        self.sectors.values().fold(GradedElement::zero(), |acc, x| &acc + x)
    }

    /// Builds a vector from explicit sectors; each must contain only terms
    /// with its own bottom count.
    pub fn from_sectors(depth: usize, sectors: impl IntoIterator<Item = (usize, GradedElement)>) -> crate::error::Result<Self> {
        let mut v = Self::zero(depth);
        for (b, x) in sectors {
            if let Some(s) = x.sectors().find(|s| s.b != b) {
                return Err(crate::error::Error::Shape {
                    expected: format!("only terms with {b} bottom strings"),
                    found: format!("sector ({}, {}, {})", s.b, s.l, s.r),
                });
            }
            v.add_to_sector(b, &x);
        }
        Ok(v)
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut v = self.clone();
        v.depth = v.depth.min(other.depth);
        v.truncated |= other.truncated;
        for (b, x) in &other.sectors {
            v.add_to_sector(*b, x);
        }
        v
    }
}

/// A symbol with one bottom string, the argument of creation and
/// annihilation operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreationSymbol {
    xi: GradedElement,
    self_adjoint: bool,
}

impl CreationSymbol {
    pub fn new(xi: GradedElement) -> crate::error::Result<Self> {
        if let Some(s) = xi.sectors().find(|s| s.b != 1) {
            return Err(crate::error::Error::Shape {
                expected: "terms with exactly one bottom string".into(),
                found: format!("sector ({}, {}, {})", s.b, s.l, s.r),
            });
        }
        let self_adjoint = xi.star() == xi;
        Ok(Self { xi, self_adjoint })
    }

    pub fn element(&self) -> &GradedElement {
        &self.xi
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }
}

impl Gjs {
    /// The identification of sector `b` glued to sector `b'` with sector
    /// `b + b'`.
    pub fn identify_sectors(&self, xi: &GradedElement, eta: &GradedElement) -> GradedElement {
        self.wedge(xi, eta)
    }

    /// The ground-algebra valued inner product: all bottom strings and the
    /// left top strings of `ξ*` and `η` are joined, leaving `V_{0,r,r'}`.
    pub fn inner_a(&self, xi: &GradedElement, eta: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (s, f) in xi.terms() {
            let x = GradedElement::from_morphism(s.b, s.l, s.r, f.clone()).unwrap().star();
            let matching = eta.filter(|t| t.b == s.b && t.l == s.l);
            out = &out + &self.walker_term(&x, &matching, s.b);
        }
        out
    }

    /// `L(ξ)`: left wedge by the symbol, raising the degree by one.
    pub fn create(&self, xi: &CreationSymbol, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.depth);
        out.truncated = v.truncated;
        for (b, x) in &v.sectors {
            out.add_to_sector(b + 1, &self.wedge(&xi.xi, x));
        }
        out
    }

    /// `L(ξ)*`: joins the string of `ξ*` with the first bottom string of
    /// each sector, lowering the degree by one; sector 0 is killed.
    pub fn annihilate(&self, xi: &CreationSymbol, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.depth);
        out.truncated = v.truncated;
        let adjoint = xi.xi.star();
        for (b, x) in &v.sectors {
            if *b == 0 {
                continue;
            }
            out.add_to_sector(b - 1, &self.walker_term(&adjoint, x, 1));
        }
        out
    }

    /// `Σ_b Φ(⟨v_b | w_b⟩)`.
    pub fn fock_inner(&self, v: &FockVector, w: &FockVector) -> Scalar {
        let mut total = Scalar::zero();
        for (b, x) in &v.sectors {
            if let Some(y) = w.sectors.get(b) {
                total += self.voiculescu_trace(&self.inner_a(x, y));
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;

    fn gjs() -> Gjs {
        Gjs::parse("5/2").unwrap()
    }

    #[test]
    fn create_on_vacuum() {
        let g = gjs();
        let xi = CreationSymbol::new(GradedElement::strand()).unwrap();
        // the strand ends right of the point, so the vacuum is the unit p_1
        let v = FockVector::vacuum(DEFAULT_DEPTH, &GradedElement::projection(1));
        let created = g.create(&xi, &v);
        assert_eq!(created.sector(1), GradedElement::strand());
        assert!(!created.truncated());
        assert!(g.annihilate(&xi, &v).is_zero());
        assert_eq!(g.annihilate(&xi, &created).sector(0), g.inner_a(xi.element(), xi.element()));
    }

    #[test]
    fn truncation_is_flagged() {
        let g = gjs();
        let xi = CreationSymbol::new(GradedElement::strand()).unwrap();
        let v = FockVector::from_element(2, &GradedElement::strand().star());
        let out = g.create(&xi, &v);
        assert!(out.is_zero());
        assert!(out.truncated());
    }

    #[test]
    fn inner_product_of_strand() {
        let g = gjs();
        let xi = GradedElement::strand();
        assert_eq!(g.inner_a(&xi, &xi), GradedElement::projection(1));
    }

    #[test]
    fn symbols_need_one_string() {
        assert!(CreationSymbol::new(GradedElement::projection(1)).is_err());
        let s = GradedElement::strand();
        let sym = CreationSymbol::new(&s + &s.star()).unwrap();
        assert!(sym.is_self_adjoint());
        assert!(!CreationSymbol::new(s).unwrap().is_self_adjoint());
    }

    #[test]
    fn adjointness() {
        let g = gjs();
        let mut s = Sampler::new(21);
        for _ in 0..20 {
            let (_, l, r) = s.even_triple(0, 2, 2);
            let (l, r) = if (1 + l + r) % 2 == 0 { (l, r) } else { (l, r + 1) };
            let xi = CreationSymbol::new(s.sector(1, l, r)).unwrap();
            let v = FockVector::from_element(DEFAULT_DEPTH, &s.graded(2));
            let w = FockVector::from_element(DEFAULT_DEPTH, &s.graded(3));
            let lhs = g.fock_inner(&g.create(&xi, &v), &w);
            let rhs = g.fock_inner(&v, &g.annihilate(&xi, &w));
            assert_eq!(lhs, rhs);
        }
    }
}
