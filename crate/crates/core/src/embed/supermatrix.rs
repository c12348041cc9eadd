use rand::Rng;

use crate::error::{AlgError, Result};
use crate::matrix::flatten_blocks;
use crate::random::trial_rng;
use crate::ring::{rational, Element, Endomorphism, Ring, RingKind, Value};

/// Block pattern of a `(sigma, n, k)`-supermatrix: `sigma`-fixed entries in the
/// `k x k` and `(n-k) x (n-k)` diagonal blocks, `sigma`-negated entries in
/// the off-diagonal blocks. `k = n` leaves no off-diagonal blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupermatrixShape {
    n: usize,
    k: usize,
    sigma: Endomorphism,
}

impl SupermatrixShape {
    pub fn new(n: usize, k: usize, sigma: &Endomorphism) -> Result<SupermatrixShape> {
        if k == 0 || k > n {
            return Err(AlgError::InvalidParameter(format!(
                "supermatrix shape needs 1 <= k <= n, got n={n}, k={k}"
            )));
        }
        Ok(SupermatrixShape {
            n,
            k,
            sigma: sigma.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> &Endomorphism {
        &self.sigma
    }

    /// The ambient ring `M_n(R)`.
    pub fn ring(&self) -> Result<Ring> {
        Ring::matrix(self.sigma.ring(), self.n)
    }

    /// Whether 0-based position `(i, j)` lies in a diagonal block.
    pub fn in_diagonal_block(&self, i: usize, j: usize) -> bool {
        (i < self.k) == (j < self.k)
    }
}

/// True iff `a` has the block pattern of `shape`.
pub fn is_supermatrix(a: &Element, shape: &SupermatrixShape) -> Result<bool> {
    match a.ring().kind() {
        RingKind::Matrix { n, .. } if *n != shape.n => {
            return Err(AlgError::SizeMismatch(format!(
                "{n}x{n} matrix against an (n={}, k={}) shape",
                shape.n, shape.k
            )))
        }
        _ => shape.ring()?.check(a.ring())?,
    }
    let n = shape.n;
    for (idx, u) in a.value.nested().iter().enumerate() {
        let image = shape.sigma.apply_v(u);
        let ok = if shape.in_diagonal_block(idx / n, idx % n) {
            image == *u
        } else {
            image == u.neg()
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projection `(1/d) sum_k sigma^k(r)` onto the fixed ring, `d` the order of `sigma`.
pub fn fixed_part(sigma: &Endomorphism, r: &Element) -> Result<Element> {
    let d = sigma.order();
    let mut acc = r.ring().zero();
    for k in 0..d {
        acc = acc.add(&sigma.apply_pow(r, k)?)?;
    }
    Ok(acc.scale(&rational(1, d as i64)))
}

/// Projection `(1/d) sum_k (-1)^k sigma^k(r)` onto `{u : sigma(u) = -u}`;
/// that eigenspace is zero when the order `d` is odd.
pub fn anti_part(sigma: &Endomorphism, r: &Element) -> Result<Element> {
    sigma.ring().check(r.ring())?;
    let d = sigma.order();
    if d % 2 == 1 {
        return Ok(r.ring().zero());
    }
    let mut acc = r.ring().zero();
    for k in 0..d {
        let term = sigma.apply_pow(r, k)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc.scale(&rational(1, d as i64)))
}

/// A random matrix conforming to `shape`, by projecting random entries.
pub fn random_supermatrix<R: Rng + ?Sized>(shape: &SupermatrixShape, rng: &mut R) -> Result<Element> {
    let base = shape.sigma.ring();
    let n = shape.n;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let r = base.random_element(rng);
            row.push(if shape.in_diagonal_block(i, j) {
                fixed_part(&shape.sigma, &r)?
            } else {
                anti_part(&shape.sigma, &r)?
            });
        }
        rows.push(row);
    }
    shape.ring()?.matrix_from_rows(rows)
}

/// Draws `trials` random shape-conforming pairs and checks that their sum and
/// product conform as well.
pub fn supermatrix_closure_check(shape: &SupermatrixShape, trials: usize, seed: u64) -> Result<bool> {
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let a = random_supermatrix(shape, &mut rng)?;
        let b = random_supermatrix(shape, &mut rng)?;
        if !is_supermatrix(&a.add(&b)?, shape)? || !is_supermatrix(&a.mul(&b)?, shape)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn theta_value(sigma: &Endomorphism, r: &Value) -> Value {
    let s = sigma.apply_v(r);
    let half = rational(1, 2);
    let plus = crate::ring::add_v(r, &s).scale(&half);
    let minus = crate::ring::sub_v(r, &s).scale(&half);
    Value::Nested(vec![plus.clone(), minus.clone(), minus, plus])
}

/// `Theta(r) = 1/2 [[r + sigma(r), r - sigma(r)], [r - sigma(r), r + sigma(r)]]`.
pub fn embed_theta(sigma: &Endomorphism, r: &Element) -> Result<Element> {
    sigma.ring().check(r.ring())?;
    Ok(Ring::matrix(r.ring(), 2)?.wrap(theta_value(sigma, &r.value)))
}

/// `r = M_11 + M_12` for `M = Theta(r)`; fails with `NotInImage` otherwise.
pub fn theta_preimage(sigma: &Endomorphism, m: &Element) -> Result<Element> {
    Ring::matrix(sigma.ring(), 2)?.check(m.ring())?;
    let r = m.entry(0, 0)?.add(&m.entry(0, 1)?)?;
    if embed_theta(sigma, &r)? == *m {
        Ok(r)
    } else {
        Err(AlgError::NotInImage)
    }
}

/// `Theta` on `M_n(R)` with the entrywise extension of `sigma`, flattened into
/// `M_{2n}(R)`; for an involution the result is a `(sigma, 2n, n)`-supermatrix.
pub fn embed_theta_matrix(sigma: &Endomorphism, a: &Element) -> Result<Element> {
    let lifted = Endomorphism::lift(a.ring(), sigma)?;
    flatten_blocks(&embed_theta(&lifted, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn tau2() -> (Ring, Endomorphism) {
        let e = Ring::grassmann(2).unwrap();
        let tau = Endomorphism::natural(&e);
        (e, tau)
    }

    #[test]
    fn grassmann_block_pattern() {
        let (e, tau) = tau2();
        let shape = SupermatrixShape::new(2, 1, &tau).unwrap();
        let m2 = shape.ring().unwrap();
        let v1 = e.generator(1).unwrap();
        let v2 = e.generator(2).unwrap();
        let v12 = e.grassmann_monomial(&[1, 2]).unwrap();
        let good = m2
            .matrix_from_rows(vec![vec![e.one(), v1.clone()], vec![v2, v12]])
            .unwrap();
        assert!(is_supermatrix(&good, &shape).unwrap());
        let bad = m2
            .matrix_from_rows(vec![vec![v1, e.zero()], vec![e.zero(), e.zero()]])
            .unwrap();
        assert!(!is_supermatrix(&bad, &shape).unwrap());
        assert!(is_supermatrix(&m2.one(), &shape).unwrap());
        assert!(is_supermatrix(&m2.zero(), &shape).unwrap());
    }

    #[test]
    fn degenerate_shape_is_fixed_matrix_ring() {
        let (_, tau) = tau2();
        let shape = SupermatrixShape::new(3, 3, &tau).unwrap();
        assert!(shape.in_diagonal_block(0, 2));
        assert!(SupermatrixShape::new(3, 0, &tau).is_err());
        assert!(SupermatrixShape::new(3, 4, &tau).is_err());
        assert!(supermatrix_closure_check(&shape, 20, 1).unwrap());
    }

    #[test]
    fn wrong_size_rejected() {
        let (e, tau) = tau2();
        let shape = SupermatrixShape::new(2, 1, &tau).unwrap();
        let m3 = Ring::matrix(&e, 3).unwrap().one();
        assert!(matches!(is_supermatrix(&m3, &shape), Err(AlgError::SizeMismatch(_))));
    }

    #[test]
    fn theta_on_gaussian_i() {
        let g = Ring::gaussian();
        let conj = Endomorphism::natural(&g);
        let i = g.gaussian_elem(int(0), int(1)).unwrap();
        let img = embed_theta(&conj, &i).unwrap();
        let expected = Ring::matrix(&g, 2)
            .unwrap()
            .matrix_from_rows(vec![vec![g.zero(), i.clone()], vec![i.clone(), g.zero()]])
            .unwrap();
        assert_eq!(img, expected);
        assert_eq!(theta_preimage(&conj, &img).unwrap(), i);
    }

    #[test]
    fn theta_of_one_and_non_image() {
        let (e, tau) = tau2();
        let m2 = Ring::matrix(&e, 2).unwrap();
        assert_eq!(embed_theta(&tau, &e.one()).unwrap(), m2.one());
        assert_eq!(theta_preimage(&tau, &m2.one()).unwrap(), e.one());
        let m = m2
            .matrix_from_rows(vec![vec![e.one(), e.zero()], vec![e.zero(), e.zero()]])
            .unwrap();
        assert_eq!(theta_preimage(&tau, &m), Err(AlgError::NotInImage));
    }

    #[test]
    fn projections_split_elements() {
        let (e, tau) = tau2();
        let mut rng = trial_rng(11, 0);
        for _ in 0..20 {
            let r = e.random_element(&mut rng);
            let even = fixed_part(&tau, &r).unwrap();
            let odd = anti_part(&tau, &r).unwrap();
            assert_eq!(even.add(&odd).unwrap(), r);
            assert!(tau.fixes(&even).unwrap());
            assert_eq!(tau.apply(&odd).unwrap(), odd.neg());
        }
        let rot = Endomorphism::natural(&Ring::rotation(3).unwrap());
        let r = Ring::rotation(3).unwrap().tuple(vec![int(1), int(2), int(3)]).unwrap();
        assert!(anti_part(&rot, &r).unwrap().is_zero());
    }
}
