//! Multiplication in `R[w, sigma]/(w^t)` and an independent rewriting oracle.
//!
//! Elements are left polynomials `r_0 + r_1 w + .. + r_{t-1} w^{t-1}`. The
//! production kernel lives in [`Ring`]'s multiplication and truncates eagerly;
//! the oracle here expands every monomial product as a word in coefficients
//! and `w`, normalises it with the rule `w r -> sigma(r) w`, and only then
//! drops degrees `>= t`.

use crate::error::{AlgError, Result};
use crate::ring::{Element, Endomorphism, Ring, Value};

/// One letter of a word in the free extension generated by `R` and `w`.
#[derive(Clone, Debug)]
pub enum Letter {
    Coeff(Element),
    W,
}

/// Rewrites a word into the normal form `c * w^k`, returning `(c, k)`.
///
/// Applies `w r -> sigma(r) w` and merges adjacent coefficients until neither
/// rule fires. No truncation happens here.
pub fn normalize_word(sigma: &Endomorphism, word: &[Letter]) -> Result<(Element, usize)> {
    let base = sigma.ring();
    enum Tok {
        C(Value),
        W,
    }
    let mut toks = Vec::with_capacity(word.len());
    for letter in word {
        match letter {
            Letter::Coeff(c) => {
                base.check(c.ring())?;
                toks.push(Tok::C(c.value.clone()));
            }
            Letter::W => toks.push(Tok::W),
        }
    }
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < toks.len() {
            match (&toks[i], &toks[i + 1]) {
                (Tok::W, Tok::C(c)) => {
                    let twisted = sigma.apply_v(c);
                    toks[i] = Tok::C(twisted);
                    toks[i + 1] = Tok::W;
                    changed = true;
                }
                (Tok::C(a), Tok::C(b)) => {
                    let merged = base.mul_v(a, b);
                    toks[i] = Tok::C(merged);
                    toks.remove(i + 1);
                    changed = true;
                    continue;
                }
                _ => {}
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    let mut coeff = base.one_v();
    let mut degree = 0;
    for tok in toks {
        match tok {
            Tok::C(c) => coeff = c,
            Tok::W => degree += 1,
        }
    }
    Ok((base.wrap(coeff), degree))
}

fn skew_ring_parts(f: &Element) -> Result<(Ring, Endomorphism, usize)> {
    match f.ring().skew_parts() {
        Some((base, sigma, t)) => Ok((base.clone(), sigma.clone(), t)),
        None => Err(AlgError::DescriptorMismatch {
            expected: "a truncated skew polynomial ring".into(),
            found: f.ring().to_string(),
        }),
    }
}

/// Product in `R[w, sigma]/(w^t)`: `u_m = sum_{i+j=m} r_i sigma^i(s_j)` for `m < t`.
pub fn skew_mul(f: &Element, g: &Element) -> Result<Element> {
    skew_ring_parts(f)?;
    f.mul(g)
}

/// Same contract as [`skew_mul`], computed by rewriting each monomial product
/// `r_i w^i s_j w^j` in the untruncated ring and truncating at the end.
pub fn skew_mul_oracle(f: &Element, g: &Element) -> Result<Element> {
    let (base, sigma, t) = skew_ring_parts(f)?;
    f.ring().check(g.ring())?;
    let (r, s) = (f.coeffs()?, g.coeffs()?);
    let mut full = vec![base.zero(); 2 * t - 1];
    for (i, ri) in r.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let mut word = vec![Letter::Coeff(ri.clone())];
            word.extend(std::iter::repeat_n(Letter::W, i));
            word.push(Letter::Coeff(sj.clone()));
            word.extend(std::iter::repeat_n(Letter::W, j));
            let (c, k) = normalize_word(&sigma, &word)?;
            full[k] = full[k].add(&c)?;
        }
    }
    full.truncate(t);
    f.ring().poly_from_coeffs(full)
}

/// Checks `w^e r = r w^e` on each sample `r`, by rewriting in the untruncated ring.
///
/// With `e = t` and `sigma^t = 1` this holds for every `r`.
pub fn centrality_check(sigma: &Endomorphism, exponent: usize, samples: &[Element]) -> Result<bool> {
    for r in samples {
        let mut left = vec![Letter::W; exponent];
        left.push(Letter::Coeff(r.clone()));
        let mut right = vec![Letter::Coeff(r.clone())];
        right.extend(std::iter::repeat_n(Letter::W, exponent));
        if normalize_word(sigma, &left)? != normalize_word(sigma, &right)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Constant coset `c + (z^t)`.
pub fn lift_scalar(ring: &Ring, c: &Element) -> Result<Element> {
    ring.constant(c)
}

/// `z^k + (z^t)`, zero once `k >= t`.
pub fn lift_var_power(ring: &Ring, k: usize) -> Result<Element> {
    ring.var_power(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn rot3() -> Ring {
        Ring::rotation(3).unwrap()
    }

    fn tup(ring: &Ring, xs: &[i64]) -> Element {
        ring.tuple(xs.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn w_times_constant_twists() {
        let base = Ring::rotation(2).unwrap();
        let ring = Ring::trunc_skew_natural(&base, 2).unwrap();
        let r = tup(&base, &[1, 2]);
        let w = ring.var_power(1).unwrap();
        let rc = ring.constant(&r).unwrap();
        let prod = skew_mul(&w, &rc).unwrap();
        assert_eq!(prod.coeffs().unwrap(), vec![base.zero(), tup(&base, &[2, 1])]);
    }

    #[test]
    fn w_squared() {
        let ring3 = Ring::trunc_skew_natural(&rot3(), 3).unwrap();
        let w = ring3.var_power(1).unwrap();
        let sq = skew_mul_oracle(&w, &w).unwrap();
        assert_eq!(sq, ring3.var_power(2).unwrap());
        assert_eq!(skew_mul(&w, &w).unwrap(), sq);

        let ring2 = Ring::trunc_skew_natural(&Ring::rotation(2).unwrap(), 2).unwrap();
        let w = ring2.var_power(1).unwrap();
        assert!(skew_mul(&w, &w).unwrap().is_zero());
        assert!(skew_mul_oracle(&w, &w).unwrap().is_zero());
    }

    #[test]
    fn rotation_t3_product_table() {
        // (r0 + r1 w)(s0 + s1 w) = r0 s0 + (r0 s1 + r1 sigma(s0)) w + r1 sigma(s1) w^2
        let base = rot3();
        let ring = Ring::trunc_skew_natural(&base, 3).unwrap();
        let f = ring
            .poly_from_coeffs(vec![tup(&base, &[1, 2, 3]), tup(&base, &[4, 5, 6])])
            .unwrap();
        let g = ring
            .poly_from_coeffs(vec![tup(&base, &[7, 8, 9]), tup(&base, &[1, 0, 2])])
            .unwrap();
        let expected = ring
            .poly_from_coeffs(vec![
                tup(&base, &[7, 16, 27]),
                // (1,0,6) + (4,5,6)*(9,7,8)
                tup(&base, &[37, 35, 54]),
                // (4,5,6)*(2,1,0)
                tup(&base, &[8, 5, 0]),
            ])
            .unwrap();
        assert_eq!(skew_mul(&f, &g).unwrap(), expected);
        assert_eq!(skew_mul_oracle(&f, &g).unwrap(), expected);
    }

    #[test]
    fn unit_laws() {
        let base = rot3();
        let ring = Ring::trunc_skew_natural(&base, 3).unwrap();
        let mut rng = crate::random::trial_rng(3, 0);
        let f = ring.random_element(&mut rng);
        assert_eq!(skew_mul(&f, &ring.one()).unwrap(), f);
        assert_eq!(skew_mul(&ring.one(), &f).unwrap(), f);
    }

    #[test]
    fn centrality() {
        let base = rot3();
        let sigma = Endomorphism::natural(&base);
        let r = tup(&base, &[1, 2, 3]);
        assert!(centrality_check(&sigma, 3, &[r.clone()]).unwrap());
        assert!(!centrality_check(&sigma, 2, &[r.clone()]).unwrap());
        let id = Endomorphism::identity(&base);
        for e in 0..5 {
            assert!(centrality_check(&id, e, &[r.clone()]).unwrap());
        }
    }

    #[test]
    fn lifts() {
        let ring = Ring::trunc_comm(&Ring::rationals(), 2, "z").unwrap();
        assert_eq!(lift_var_power(&ring, 0).unwrap(), ring.one());
        assert!(lift_var_power(&ring, 2).unwrap().is_zero());
        let c = Ring::rationals().from_int(5);
        let lifted = lift_scalar(&ring, &c).unwrap();
        assert_eq!(lifted.coeffs().unwrap(), vec![c, Ring::rationals().zero()]);
    }

    #[test]
    fn rendering() {
        let base = rot3();
        let ring = Ring::trunc_skew_natural(&base, 3).unwrap();
        let f = ring
            .poly_from_coeffs(vec![tup(&base, &[1, 2, 3]), base.zero(), base.one()])
            .unwrap();
        assert_eq!(f.to_string(), "(1, 2, 3) + (1, 1, 1)*w^2 (mod w^3)");
        let q = Ring::trunc_comm(&Ring::rationals(), 3, "z").unwrap();
        let g = q
            .poly_from_coeffs(vec![int(2), int(-1), int(3)].into_iter().map(|x| Ring::rationals().from_rational(&x)).collect())
            .unwrap();
        assert_eq!(g.to_string(), "2 - z + 3*z^2 (mod z^3)");
    }

    #[test]
    fn mismatched_rings_rejected() {
        let a = Ring::trunc_skew_natural(&rot3(), 3).unwrap();
        let b = Ring::trunc_skew_natural(&Ring::rotation(2).unwrap(), 2).unwrap();
        assert!(matches!(
            skew_mul(&a.one(), &b.one()),
            Err(AlgError::DescriptorMismatch { .. })
        ));
    }
}
