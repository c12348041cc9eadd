//! Matrix representations of Grassmann algebras built by iterating `mu`.
//!
//! `E^(m)` is identified with `E^(m-1)[w, tau]/(w^2)` by sending `v_m` to `w`,
//! so an element splits as `r_0 + r_1 v_m` with `r_0, r_1` in `E^(m-1)`.
//! Applying `mu` gives a `2 x 2` matrix over `E^(m-1)[z]/(z^2)`; each entry
//! `a + b z` is mapped by the previous representation to `eps(a) + eps(b) z_m`
//! and the blocks are flattened. The target of `eps^(m)` is
//! `M_{2^{m-1}}(Q[z_1, .., z_m]/(z_1^2, .., z_m^2))`.

use num_rational::BigRational;

use super::mu::embed_mu;
use crate::error::{AlgError, Result};
use crate::matrix::{flatten_blocks, rational_rank, trace};
use crate::ring::{Element, Endomorphism, Ring, Value};

/// Default bound on `m`: `16 x 16` matrices over a 32-dimensional ring.
pub const DEFAULT_MAX_TOWER_GENERATORS: usize = 5;

#[derive(Clone, Debug)]
pub struct GrassmannTower {
    m: usize,
    algebra: Ring,
    /// `P_k = Q[z_1, .., z_k]/(z_i^2)` for `k = 1..=m`.
    scalars: Vec<Ring>,
    target: Ring,
    generators: Vec<Element>,
}

impl GrassmannTower {
    pub fn build(m: usize) -> Result<GrassmannTower> {
        GrassmannTower::build_with_limit(m, DEFAULT_MAX_TOWER_GENERATORS)
    }

    pub fn build_with_limit(m: usize, max_generators: usize) -> Result<GrassmannTower> {
        if m == 0 {
            return Err(AlgError::InvalidParameter("tower needs m >= 1".into()));
        }
        if m > max_generators {
            return Err(AlgError::SizeLimitExceeded(format!(
                "tower for E^({m}) exceeds the configured bound m <= {max_generators}"
            )));
        }
        let algebra = Ring::grassmann(m)?;
        let mut scalars = Vec::with_capacity(m);
        let mut ring = Ring::rationals();
        for k in 1..=m {
            ring = Ring::trunc_comm(&ring, 2, &format!("z{k}"))?;
            scalars.push(ring.clone());
        }
        let target = Ring::matrix(&scalars[m - 1], 1 << (m - 1))?;
        let mut tower = GrassmannTower {
            m,
            algebra,
            scalars,
            target,
            generators: Vec::new(),
        };
        tower.generators = (1..=m)
            .map(|i| {
                let v = tower.algebra.generator(i)?;
                tower.apply_recursive(&v)
            })
            .collect::<Result<_>>()?;
        Ok(tower)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn algebra(&self) -> &Ring {
        &self.algebra
    }

    /// `M_{2^{m-1}}(Q[z_1, .., z_m]/(z_i^2))`.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// Scalar ring `Q[z_1, .., z_m]/(z_i^2)` of the target matrices.
    pub fn scalar_ring(&self) -> &Ring {
        &self.scalars[self.m - 1]
    }

    /// Image of `v_i` (1-based).
    pub fn generator_image(&self, i: usize) -> Result<&Element> {
        if i == 0 || i > self.m {
            return Err(AlgError::IndexOutOfRange(format!("generator v{i} of E^({})", self.m)));
        }
        Ok(&self.generators[i - 1])
    }

    pub fn generator_images(&self) -> &[Element] {
        &self.generators
    }

    /// Expands `g` in the subset basis and multiplies generator images in
    /// increasing index order.
    pub fn apply(&self, g: &Element) -> Result<Element> {
        self.algebra.check(g.ring())?;
        let mut acc = self.target.zero();
        for (mask, c) in g.coords().iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            acc = acc.add(&self.monomial_image(mask).scale(c))?;
        }
        Ok(acc)
    }

    /// Image of the basis monomial with the given generator bitmask.
    pub fn monomial_image(&self, mask: usize) -> Element {
        let mut out = self.target.one();
        for (i, gen) in self.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = self.target.wrap(self.target.mul_v(&out.value, &gen.value));
            }
        }
        out
    }

    /// Evaluates the representation by the inductive `mu` construction directly.
    pub fn apply_recursive(&self, g: &Element) -> Result<Element> {
        self.algebra.check(g.ring())?;
        let value = self.eps(self.m, &g.coords())?;
        Ok(self.target.wrap(value))
    }

    /// `eps^(level)` on coordinates of an element of `E^(level)`, as a value of
    /// `M_{2^{level-1}}(P_level)`.
    fn eps(&self, level: usize, coords: &[BigRational]) -> Result<Value> {
        if level == 1 {
            // eps^(1)(a + b v_1) = (a + b z_1)
            let poly = Value::Nested(vec![
                Value::Flat(vec![coords[0].clone()]),
                Value::Flat(vec![coords[1].clone()]),
            ]);
            return Ok(Value::Nested(vec![poly]));
        }
        let lower = Ring::grassmann(level - 1)?;
        let half = 1usize << (level - 1);
        let skew = Ring::trunc_skew(&lower, &Endomorphism::natural(&lower), 2)?;
        let r0 = lower.from_coords(coords[..half].to_vec())?;
        let r1 = lower.from_coords(coords[half..].to_vec())?;
        let image = embed_mu(&skew.poly_from_coeffs(vec![r0, r1])?)?;

        let block_size = 1usize << (level - 2);
        let block_ring = Ring::matrix(&self.scalars[level - 1], block_size)?;
        let mut blocks = Vec::with_capacity(4);
        for entry in image.value.nested() {
            let parts = entry.nested();
            let a = self.eps(level - 1, &flat_coords(&parts[0]))?;
            let b = self.eps(level - 1, &flat_coords(&parts[1]))?;
            let merged: Vec<Value> = a
                .nested()
                .iter()
                .zip(b.nested())
                .map(|(x, y)| Value::Nested(vec![x.clone(), y.clone()]))
                .collect();
            blocks.push(Value::Nested(merged));
        }
        let outer = Ring::matrix(&block_ring, 2)?;
        Ok(flatten_blocks(&outer.wrap(Value::Nested(blocks)))?.value)
    }

    /// `eps(v_i) eps(v_j) + eps(v_j) eps(v_i) = 0` for all `i <= j`.
    pub fn generators_anticommute(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i..] {
                let ab = self.target.mul_v(&a.value, &b.value);
                let ba = self.target.mul_v(&b.value, &a.value);
                if !crate::ring::add_v(&ab, &ba).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Rank over `Q` of the images of the `2^m` basis monomials.
    pub fn basis_image_rank(&self) -> usize {
        let rows = (0..1usize << self.m)
            .map(|mask| self.monomial_image(mask).coords())
            .collect();
        rational_rank(rows)
    }

    /// Whether `tr(eps(g))` is a rational constant.
    pub fn has_constant_trace(&self, g: &Element) -> Result<bool> {
        Ok(trace(&self.apply(g)?)?.is_constant())
    }
}

fn flat_coords(v: &Value) -> Vec<BigRational> {
    let mut out = Vec::new();
    v.coords_into(&mut out);
    out
}

pub fn build_grassmann_tower(m: usize) -> Result<GrassmannTower> {
    GrassmannTower::build(m)
}

pub fn tower_apply(tower: &GrassmannTower, g: &Element) -> Result<Element> {
    tower.apply(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::trial_rng;

    #[test]
    fn base_case() {
        let tower = GrassmannTower::build(1).unwrap();
        let img = tower.generator_image(1).unwrap();
        assert_eq!(img.to_string(), "[[z1 (mod z1^2)]]");
        assert!(img.mul(img).unwrap().is_zero());
    }

    #[test]
    fn m2_generators() {
        let tower = GrassmannTower::build(2).unwrap();
        assert_eq!(tower.target().matrix_size(), Some(2));
        assert!(tower.generators_anticommute());
        assert_eq!(tower.basis_image_rank(), 4);
        let v1 = tower.generator_image(1).unwrap();
        let v2 = tower.generator_image(2).unwrap();
        // v1 sits in the diagonal as diag(z1, -z1); v2 is z2 off the diagonal
        assert_eq!(v1.to_string(), "[[z1 (mod z1^2, z2^2), 0 (mod z1^2, z2^2)], [0 (mod z1^2, z2^2), -z1 (mod z1^2, z2^2)]]");
        assert_eq!(v2.to_string(), "[[0 (mod z1^2, z2^2), z2 (mod z1^2, z2^2)], [z2 (mod z1^2, z2^2), 0 (mod z1^2, z2^2)]]");
    }

    #[test]
    fn recursive_route_matches_generator_products() {
        let tower = GrassmannTower::build(3).unwrap();
        let mut rng = trial_rng(9, 0);
        for _ in 0..20 {
            let g = tower.algebra().random_element(&mut rng);
            assert_eq!(tower.apply(&g).unwrap(), tower.apply_recursive(&g).unwrap());
        }
        let one = tower.algebra().one();
        assert_eq!(tower.apply(&one).unwrap(), tower.target().one());
    }

    #[test]
    fn limits() {
        assert!(matches!(GrassmannTower::build(0), Err(AlgError::InvalidParameter(_))));
        assert!(matches!(GrassmannTower::build(6), Err(AlgError::SizeLimitExceeded(_))));
        assert!(GrassmannTower::build_with_limit(3, 2).is_err());
    }
}
