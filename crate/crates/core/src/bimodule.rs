//! Corner bimodules `_lB_r = p_l ∧ B ∧ p_r` over the `(0, 0)` corner `B_0`,
//! and the functor from the diagram category into them.

use crate::category::{Morphism, TraceSide};
use crate::error::{Error, Result};
use crate::gjs::{GradedElement, Gjs, Sector};
use crate::planar::PlanarPairing;
use crate::scalar::Scalar;

/// An element of the corner `(l, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerElement {
    l: usize,
    r: usize,
    payload: GradedElement,
}

impl CornerElement {
    pub fn new(l: usize, r: usize, payload: GradedElement) -> Result<Self> {
        payload.require_corner(l, r)?;
        Ok(Self { l, r, payload })
    }

    pub fn zero(l: usize, r: usize) -> Self {
        Self {
            l,
            r,
            payload: GradedElement::zero(),
        }
    }

    /// The empty diagram as an element of `B_0`.
    pub fn unit() -> Self {
        Self::new(0, 0, GradedElement::unit()).unwrap()
    }

    /// `n` vertical strings in `_0B_n`.
    pub fn straight(n: usize) -> Self {
        Self::new(0, n, GradedElement::straight(n)).unwrap()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.l, self.r)
    }

    pub fn payload(&self) -> &GradedElement {
        &self.payload
    }

    pub fn into_payload(self) -> GradedElement {
        self.payload
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }

    pub fn add(&self, other: &CornerElement) -> Result<CornerElement> {
        same_shape(self, other)?;
        Ok(Self {
            l: self.l,
            r: self.r,
            payload: &self.payload + &other.payload,
        })
    }

    pub fn scale(&self, c: &Scalar) -> CornerElement {
        Self {
            l: self.l,
            r: self.r,
            payload: self.payload.scale(c),
        }
    }

    pub fn star(&self) -> CornerElement {
        Self {
            l: self.r,
            r: self.l,
            payload: self.payload.star(),
        }
    }

    /// Moves the marked point `steps` strings to the right, leaving every
    /// diagram untouched.
    pub fn dot_shift(&self, steps: isize) -> Result<CornerElement> {
        let l = self.l as isize + steps;
        let r = self.r as isize - steps;
        if l < 0 || r < 0 {
            return Err(Error::Shape {
                expected: "non-negative shape after the shift".into(),
                found: format!("({l}, {r})"),
            });
        }
        let (l, r) = (l as usize, r as usize);
        Ok(Self {
            l,
            r,
            payload: self.payload.regrade(|s| Sector::new(s.b, l, r)),
        })
    }

    /// `ξ̄ = φ^{-n}(ξ*)` on `_0B_n`.
    pub fn conjugate(&self) -> Result<CornerElement> {
        require_shape(self, 0, self.r)?;
        self.star().dot_shift(-(self.r as isize))
    }
}

fn same_shape(x: &CornerElement, y: &CornerElement) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::Shape {
            expected: format!("corner {:?}", x.shape()),
            found: format!("corner {:?}", y.shape()),
        });
    }
    Ok(())
}

fn require_shape(x: &CornerElement, l: usize, r: usize) -> Result<()> {
    if x.shape() != (l, r) {
        return Err(Error::Shape {
            expected: format!("corner ({l}, {r})"),
            found: format!("corner {:?}", x.shape()),
        });
    }
    Ok(())
}

/// A subobject of `x^⊗n`, given by a self-adjoint idempotent; its image
/// under the functor is the range of `F(p)` on `_0B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subobject {
    projection: Morphism,
}

impl Subobject {
    pub fn new(gjs: &Gjs, projection: Morphism) -> Result<Self> {
        let n = projection.source();
        if projection.target() != n {
            return Err(Error::NotEndomorphism {
                from: n,
                to: projection.target(),
            });
        }
        let square = gjs.tl().compose(&projection, &projection)?;
        if square != projection || projection.dagger() != projection {
            return Err(Error::Shape {
                expected: "a self-adjoint idempotent".into(),
                found: format!("{projection:?}"),
            });
        }
        Ok(Self { projection })
    }

    pub fn level(&self) -> usize {
        self.projection.source()
    }

    pub fn projection(&self) -> &Morphism {
        &self.projection
    }

    pub fn project(&self, gjs: &Gjs, xi: &CornerElement) -> Result<CornerElement> {
        gjs.functor_on_morphism(&self.projection, xi)
    }

    pub fn contains(&self, gjs: &Gjs, xi: &CornerElement) -> Result<bool> {
        Ok(self.project(gjs, xi)? == *xi)
    }

    /// The subobject `p ⊗ q` of `x^⊗(n+m)`.
    pub fn tensor(&self, gjs: &Gjs, other: &Subobject) -> Result<Subobject> {
        Subobject::new(gjs, self.projection.tensor(&other.projection))
    }
}

impl Gjs {
    fn require_b0(&self, x: &CornerElement) -> Result<()> {
        require_shape(x, 0, 0)
    }

    /// `x ▷ ξ ◁ y = ι_l(x) ∧ ξ ∧ ι_r(y)`.
    pub fn act(&self, x: &CornerElement, xi: &CornerElement, y: &CornerElement) -> Result<CornerElement> {
        self.require_b0(x)?;
        self.require_b0(y)?;
        let left = self.wedge(&self.iota(&x.payload, xi.l)?, &xi.payload);
        let payload = self.wedge(&left, &self.iota(&y.payload, xi.r)?);
        CornerElement::new(xi.l, xi.r, payload)
    }

    pub fn act_left(&self, x: &CornerElement, xi: &CornerElement) -> Result<CornerElement> {
        self.act(x, xi, &CornerElement::unit())
    }

    pub fn act_right(&self, xi: &CornerElement, y: &CornerElement) -> Result<CornerElement> {
        self.act(&CornerElement::unit(), xi, y)
    }

    /// `⟨ξ|η⟩ = δ^r E_r(ξ* ∧ η)`, read back in `B_0`.
    pub fn right_inner(&self, xi: &CornerElement, eta: &CornerElement) -> Result<CornerElement> {
        same_shape(xi, eta)?;
        let r = xi.r;
        let product = self.wedge(&xi.payload.star(), &eta.payload);
        let expected = self.expectation_en(&product, r)?.scale(&self.delta().pow(r as i64));
        CornerElement::new(0, 0, self.iota_preimage(&expected, r)?)
    }

    /// `⟨ξ, η⟩ = δ^l E_l(ξ ∧ η*)`, read back in `B_0`.
    pub fn left_inner(&self, xi: &CornerElement, eta: &CornerElement) -> Result<CornerElement> {
        same_shape(xi, eta)?;
        let l = xi.l;
        let product = self.wedge(&xi.payload, &eta.payload.star());
        let expected = self.expectation_en(&product, l)?.scale(&self.delta().pow(l as i64));
        CornerElement::new(0, 0, self.iota_preimage(&expected, l)?)
    }

    /// `Tr ⟨ξ|η⟩`.
    pub fn l2_inner(&self, xi: &CornerElement, eta: &CornerElement) -> Result<Scalar> {
        Ok(self.voiculescu_trace(&self.right_inner(xi, eta)?.payload))
    }

    /// The fusion map `ξ_1 ⊠ ⋯ ⊠ ξ_k ↦` side-by-side juxtaposition, for
    /// factors of shape `(0, n_i)`.
    pub fn fuse(&self, word: &[CornerElement]) -> Result<CornerElement> {
        let (first, rest) = word.split_first().ok_or_else(|| Error::Shape {
            expected: "a nonempty word".into(),
            found: "no factors".into(),
        })?;
        let mut acc = first.clone();
        require_shape(&acc, 0, acc.r)?;
        for f in rest {
            acc = self.tensorator(&acc, f)?;
        }
        Ok(acc)
    }

    /// `_0B_n ⊠ _0B_m → _0B_{n+m}`: bottoms and tops are concatenated.
    pub fn tensorator(&self, xi: &CornerElement, eta: &CornerElement) -> Result<CornerElement> {
        require_shape(xi, 0, xi.r)?;
        require_shape(eta, 0, eta.r)?;
        let mut payload = GradedElement::zero();
        for (s, f) in xi.payload.terms() {
            for (t, g) in eta.payload.terms() {
                let term = GradedElement::from_morphism(s.b + t.b, 0, s.r + t.r, f.tensor(g))?;
                payload = &payload + &term;
            }
        }
        CornerElement::new(0, xi.r + eta.r, payload)
    }

    /// `F(f)ξ = ξ ∧ FR(f)` for `f : n → m` and `ξ ∈ _0B_n`.
    pub fn functor_on_morphism(&self, f: &Morphism, xi: &CornerElement) -> Result<CornerElement> {
        if xi.shape() != (0, f.source()) {
            return Err(Error::StrandMismatch {
                left: f.source(),
                right: xi.r,
            });
        }
        let payload = self.wedge(&xi.payload, &self.tl().frobenius_reciprocity(f));
        CornerElement::new(0, f.target(), payload)
    }

    /// The conjugation structure of the functor, `η ↦ φ^{-n}(η*)`.
    pub fn conj_structure(&self, xi: &CornerElement) -> Result<CornerElement> {
        xi.conjugate()
    }

    /// Recovers `f` from the functor by evaluating on straight strings.
    pub fn recover_morphism(&self, f: &Morphism) -> Result<Morphism> {
        let n = f.source();
        let image = self.functor_on_morphism(f, &CornerElement::straight(n))?;
        Ok(image
            .payload
            .sector(n, 0, f.target())
            .cloned()
            .unwrap_or_else(|| Morphism::zero(n, f.target())))
    }

    /// Right trace minus left trace of `FR⁻¹(T)` for `T ∈ V_{0,n,n}`; zero
    /// for every `T` is the minimality content of the construction.
    pub fn minimality_defect(&self, t: &GradedElement, n: usize) -> Result<Scalar> {
        let f = self.tl().frobenius_inverse(t, n, n)?;
        Ok(self.tl().categorical_trace(&f, TraceSide::Right)? - self.tl().categorical_trace(&f, TraceSide::Left)?)
    }

    /// `δ · E_1(p_1)`, which equals `δ · p_1` and certifies that the
    /// standard bimodule has index `δ` on both sides.
    pub fn index_surrogate(&self) -> Result<GradedElement> {
        Ok(self
            .expectation_en(&GradedElement::projection(1), 1)?
            .scale(self.delta().value()))
    }

    /// Left and right indices `(Σ ⟨u_i, u_i⟩, Σ ⟨v_j | v_j⟩)` from a right
    /// basis `u` (`ξ = Σ u_i ◁ ⟨u_i|ξ⟩`) and a left basis `v`
    /// (`ξ = Σ ⟨ξ, v_j⟩ ▷ v_j`).
    ///
    /// Both reproduction identities are checked on every diagram of the
    /// basis shape with at most `sample_bottom` bottom strings. Each index
    /// is `None` when its sum is not a multiple of `∅`.
    pub fn index_from_bases(
        &self,
        right_basis: &[CornerElement],
        left_basis: &[CornerElement],
        sample_bottom: usize,
    ) -> Result<(Option<Scalar>, Option<Scalar>)> {
        let shape = right_basis
            .first()
            .or(left_basis.first())
            .map(CornerElement::shape)
            .ok_or_else(|| Error::BasisCheck("empty basis".into()))?;
        for u in right_basis.iter().chain(left_basis) {
            require_shape(u, shape.0, shape.1)?;
        }
        for xi in sample_diagrams(shape, sample_bottom) {
            let mut right = CornerElement::zero(shape.0, shape.1);
            for u in right_basis {
                right = right.add(&self.act_right(u, &self.right_inner(u, &xi)?)?)?;
            }
            if right != xi {
                return Err(Error::BasisCheck(format!("right basis does not reproduce {:?}", xi.payload)));
            }
            let mut left = CornerElement::zero(shape.0, shape.1);
            for v in left_basis {
                left = left.add(&self.act_left(&self.left_inner(&xi, v)?, v)?)?;
            }
            if left != xi {
                return Err(Error::BasisCheck(format!("left basis does not reproduce {:?}", xi.payload)));
            }
        }
        let mut r_ind = GradedElement::zero();
        for u in right_basis {
            r_ind = &r_ind + &self.left_inner(u, u)?.payload;
        }
        let mut l_ind = GradedElement::zero();
        for v in left_basis {
            l_ind = &l_ind + &self.right_inner(v, v)?.payload;
        }
        Ok((r_ind.as_scalar(), l_ind.as_scalar()))
    }
}

/// Every basis diagram of corner `shape` with at most `max_b` bottom strings.
pub fn sample_diagrams(shape: (usize, usize), max_b: usize) -> Vec<CornerElement> {
    let (l, r) = shape;
    let mut out = Vec::new();
    for b in 0..=max_b {
        if (b + l + r) % 2 == 1 {
            continue;
        }
        for p in PlanarPairing::enumerate(b, l + r) {
            out.push(CornerElement::new(l, r, GradedElement::from_pairing(b, l, r, p).unwrap()).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use crate::scalar::{int, ratio};

    fn gjs() -> Gjs {
        Gjs::parse("5/2").unwrap()
    }

    fn strand() -> CornerElement {
        CornerElement::straight(1)
    }

    #[test]
    fn strand_inner_products() {
        let g = gjs();
        let xi = strand();
        assert_eq!(g.l2_inner(&xi, &xi).unwrap(), ratio(5, 2));
        let left = g.left_inner(&xi, &xi).unwrap();
        assert_eq!(left.payload(), &g.wedge(xi.payload(), &xi.payload().star()));
    }

    #[test]
    fn trivial_actions() {
        let g = gjs();
        let mut s = Sampler::new(31);
        let xi = CornerElement::new(1, 2, s.corner(1, 2, 3)).unwrap();
        assert_eq!(g.act(&CornerElement::unit(), &xi, &CornerElement::unit()).unwrap(), xi);
        assert_eq!(xi.dot_shift(0).unwrap(), xi);
        assert_eq!(xi.dot_shift(1).unwrap().dot_shift(-1).unwrap(), xi);
        assert!(xi.dot_shift(-2).is_err());
    }

    #[test]
    fn conjugation() {
        let cup = CornerElement::new(0, 2, GradedElement::from_pairing(0, 0, 2, PlanarPairing::rainbow_cup(1)).unwrap()).unwrap();
        assert_eq!(cup.conjugate().unwrap(), cup);
        let xi = strand();
        assert_eq!(xi.conjugate().unwrap(), xi);
        assert_eq!(xi.conjugate().unwrap().conjugate().unwrap(), xi);
        assert!(CornerElement::new(1, 1, GradedElement::projection(1)).unwrap().conjugate().is_err());
    }

    #[test]
    fn ground_basis_index() {
        let g = gjs();
        let unit = [CornerElement::unit()];
        assert_eq!(g.index_from_bases(&unit, &unit, 4).unwrap(), (Some(int(1)), Some(int(1))));
        let doubled = [CornerElement::unit().scale(&int(2))];
        assert!(matches!(g.index_from_bases(&doubled, &unit, 4), Err(Error::BasisCheck(_))));
        assert_eq!(g.index_surrogate().unwrap(), GradedElement::projection(1).scale(&ratio(5, 2)));
    }

    #[test]
    fn faithful_recovery() {
        let g = gjs();
        let mut s = Sampler::new(32);
        for _ in 0..20 {
            let f = s.morphism(3, 1);
            assert_eq!(g.recover_morphism(&f).unwrap(), f);
        }
    }

    #[test]
    fn subobjects() {
        let g = gjs();
        let tl = g.tl();
        let cupcap = tl.compose(&Morphism::cup(), &Morphism::cap()).unwrap();
        let e = Subobject::new(&g, cupcap.scale(g.delta().inverse())).unwrap();
        let xi = CornerElement::new(0, 2, GradedElement::from_pairing(0, 0, 2, PlanarPairing::rainbow_cup(1)).unwrap()).unwrap();
        assert!(e.contains(&g, &xi).unwrap());
        assert!(!e.contains(&g, &CornerElement::straight(2)).unwrap());
        assert!(Subobject::new(&g, cupcap).is_err());
        let ee = e.tensor(&g, &e).unwrap();
        assert_eq!(ee.level(), 4);
    }
}
