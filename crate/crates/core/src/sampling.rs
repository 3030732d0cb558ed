//! Seeded random test data: morphisms and graded elements with small
//! integer coefficients drawn uniformly from `-2..=2`.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::Morphism;
use crate::gjs::GradedElement;
use crate::planar::PlanarPairing;
use crate::scalar::int;

/// Maximum number of basis terms in one sampled sector.
const MAX_TERMS: usize = 3;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> i64 {
        self.rng.random_range(-2..=2)
    }

    pub fn nonzero_coefficient(&mut self) -> i64 {
        *[-2, -1, 1, 2].choose(&mut self.rng).unwrap()
    }

    pub fn pairing(&mut self, bottom: usize, top: usize) -> PlanarPairing {
        let all = PlanarPairing::enumerate(bottom, top);
        all.choose(&mut self.rng).expect("parity checked by caller").clone()
    }

    /// A random combination of up to three pairings. The first coefficient
    /// is nonzero so the sample is never the zero morphism unless the hom
    /// space itself vanishes.
    pub fn morphism(&mut self, source: usize, target: usize) -> Morphism {
        let mut m = Morphism::zero(source, target);
        if (source + target) % 2 == 1 {
            return m;
        }
        let all = PlanarPairing::enumerate(source, target);
        let count = self.rng.random_range(1..=MAX_TERMS);
        for i in 0..count {
            let p = all.choose(&mut self.rng).unwrap().clone();
            let c = if i == 0 { self.nonzero_coefficient() } else { self.coefficient() };
            m = &m + &Morphism::from_term(p, int(c));
        }
        if m.is_zero() {
            let p = all.choose(&mut self.rng).unwrap().clone();
            m = Morphism::from_pairing(p);
        }
        m
    }

    /// A random element of the single sector `V_{b,l,r}`.
    pub fn sector(&mut self, b: usize, l: usize, r: usize) -> GradedElement {
        let m = self.morphism(b, l + r);
        GradedElement::from_morphism(b, l, r, m).expect("sampled morphism has the sector's boundary")
    }

    /// A random element spread over one to three sectors with every index
    /// bounded by `max`; odd sectors are skipped.
    pub fn graded(&mut self, max: usize) -> GradedElement {
        self.graded_in(max, max, max)
    }

    /// As [`graded`](Self::graded) with separate bounds per index.
    pub fn graded_in(&mut self, max_b: usize, max_l: usize, max_r: usize) -> GradedElement {
        let mut x = GradedElement::zero();
        let count = self.rng.random_range(1..=3);
        while x.is_zero() {
            for _ in 0..count {
                let (b, l, r) = self.even_triple(max_b, max_l, max_r);
                x = &x + &self.sector(b, l, r);
            }
        }
        x
    }

    /// A random element whose terms all lie in the corner `(l, r)`, with at
    /// most `max_b` bottom strands.
    pub fn corner(&mut self, l: usize, r: usize, max_b: usize) -> GradedElement {
        let mut x = GradedElement::zero();
        let count = self.rng.random_range(1..=2);
        while x.is_zero() {
            for _ in 0..count {
                let choices: Vec<usize> = (0..=max_b).filter(|b| (b + l + r) % 2 == 0).collect();
                let b = *choices.choose(&mut self.rng).expect("corner admits some bottom count");
                x = &x + &self.sector(b, l, r);
            }
        }
        x
    }

    /// A triple with each entry below its bound and an even sum.
    pub fn even_triple(&mut self, max_b: usize, max_l: usize, max_r: usize) -> (usize, usize, usize) {
        loop {
            let b = self.rng.random_range(0..=max_b);
            let l = self.rng.random_range(0..=max_l);
            let r = self.rng.random_range(0..=max_r);
            if (b + l + r) % 2 == 0 {
                return (b, l, r);
            }
        }
    }
}
