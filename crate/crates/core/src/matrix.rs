//! Matrices over any ring descriptor: ring operations, trace, characteristic
//! coefficients through Newton's power-sum recursion, Cayley-Hamilton
//! evaluation, a permutation-expansion determinant, and block flattening.

use num_traits::Zero;

use crate::error::{AlgError, Result};
use crate::perm::for_each_permutation;
use crate::ring::{Element, Rational, Ring, RingKind, Value};

/// Largest size accepted by [`brute_force_det`] (`6! = 720` terms).
pub const BRUTE_FORCE_DET_MAX: usize = 6;

fn matrix_parts(a: &Element) -> Result<(Ring, usize)> {
    match a.ring().kind() {
        RingKind::Matrix { base, n } => Ok((base.clone(), *n)),
        _ => Err(AlgError::DescriptorMismatch {
            expected: "a matrix ring".into(),
            found: a.ring().to_string(),
        }),
    }
}

fn check_sizes(a: &Element, b: &Element) -> Result<()> {
    let (_, n) = matrix_parts(a)?;
    let (_, m) = matrix_parts(b)?;
    if n != m {
        return Err(AlgError::SizeMismatch(format!("{n}x{n} vs {m}x{m}")));
    }
    a.ring().check(b.ring())
}

pub fn identity(base: &Ring, n: usize) -> Result<Element> {
    Ok(Ring::matrix(base, n)?.one())
}

pub fn diag(base: &Ring, entries: &[Element]) -> Result<Element> {
    let ring = Ring::matrix(base, entries.len())?;
    let n = entries.len();
    let mut values = vec![base.zero_v(); n * n];
    for (i, e) in entries.iter().enumerate() {
        base.check(e.ring())?;
        values[i * n + i] = e.value.clone();
    }
    Ok(ring.wrap(Value::Nested(values)))
}

/// Matrix over `Q` from integer rows.
pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Element> {
    let q = Ring::rationals();
    let ring = Ring::matrix(&q, rows.len())?;
    ring.matrix_from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| q.from_int(x)).collect())
            .collect(),
    )
}

pub fn mat_mul(a: &Element, b: &Element) -> Result<Element> {
    check_sizes(a, b)?;
    a.mul(b)
}

pub fn mat_add(a: &Element, b: &Element) -> Result<Element> {
    check_sizes(a, b)?;
    a.add(b)
}

pub fn mat_pow(a: &Element, k: usize) -> Result<Element> {
    matrix_parts(a)?;
    Ok(a.pow(k))
}

/// Sum of the diagonal entries.
pub fn trace(a: &Element) -> Result<Element> {
    let (base, n) = matrix_parts(a)?;
    let entries = a.value.nested();
    let mut acc = base.zero_v();
    for i in 0..n {
        acc.add_assign(&entries[i * n + i]);
    }
    Ok(base.wrap(acc))
}

/// Coefficients `(c_0, .., c_N)` of `x^N + c_1 x^{N-1} + .. + c_N`, `c_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCoefficients(pub Vec<Element>);

impl CharCoefficients {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn ring(&self) -> &Ring {
        self.0[0].ring()
    }
}

/// Newton's formulae: `c_k = -(1/k) (c_{k-1} tr(B) + c_{k-2} tr(B^2) + .. + c_0 tr(B^k))`.
pub fn newton_char_coeffs(b: &Element) -> Result<CharCoefficients> {
    let (base, n) = matrix_parts(b)?;
    let mut power_traces = Vec::with_capacity(n);
    let mut power = b.clone();
    for k in 1..=n {
        if k > 1 {
            power = power.mul(b)?;
        }
        power_traces.push(trace(&power)?);
    }
    let mut c = vec![base.one()];
    for k in 1..=n {
        let mut acc = base.zero();
        for i in 1..=k {
            acc = acc.add(&c[k - i].mul(&power_traces[i - 1])?)?;
        }
        c.push(acc.scale(&-Rational::new(1.into(), (k as i64).into())));
    }
    Ok(CharCoefficients(c))
}

/// Lifts a scalar into the entry ring of a matrix, checking that it acts centrally.
fn central_scalar(entries: &Ring, a: &Element, c: &Element) -> Result<Element> {
    let entry_values = a.value.nested();
    if entries == c.ring() {
        let commutes = entries.is_commutative()
            || entry_values.iter().all(|e| {
                entries.mul_v(&c.value, e) == entries.mul_v(e, &c.value)
            });
        if !commutes {
            return Err(AlgError::ScalarActionUndefined(format!(
                "{c} is not central in {entries}"
            )));
        }
        return Ok(c.clone());
    }
    if let Some((base, sigma, _)) = entries.skew_parts() {
        if base == c.ring() {
            // a constant coset c is central iff sigma(c) = c and c commutes with all coefficients
            let fixed = sigma.fixes(c)?;
            let commutes = base.is_commutative()
                || entry_values.iter().flat_map(|e| e.nested()).all(|r| {
                    base.mul_v(&c.value, r) == base.mul_v(r, &c.value)
                });
            if !(fixed && commutes) {
                return Err(AlgError::ScalarActionUndefined(format!(
                    "{c} is not central in {entries}"
                )));
            }
            return entries.constant(c);
        }
    }
    Err(AlgError::ScalarActionUndefined(format!(
        "coefficients in {} do not act on {}",
        c.ring(),
        entries
    )))
}

/// `sum_k c_k A^{N-k}`; zero exactly when `A` satisfies the polynomial.
///
/// The coefficients may live in the entry ring itself or in the base ring of
/// a truncated polynomial entry ring, where they act as constant cosets.
pub fn cayley_hamilton_eval(a: &Element, c: &CharCoefficients) -> Result<Element> {
    let (entries, n) = matrix_parts(a)?;
    let scalars = c
        .0
        .iter()
        .map(|ck| central_scalar(&entries, a, ck))
        .collect::<Result<Vec<_>>>()?;
    // Horner: ((c_0 A + c_1) A + c_2) ...
    let mut acc = a.ring().zero();
    for (k, ck) in scalars.iter().enumerate() {
        let mut shifted = acc.value.clone();
        if k > 0 {
            shifted = a.ring().mul_v(&shifted, &a.value);
        }
        let scalar_matrix = diag(&entries, &vec![ck.clone(); n])?;
        shifted.add_assign(&scalar_matrix.value);
        acc = a.ring().wrap(shifted);
    }
    Ok(acc)
}

/// `det(xI - B)` by summing over all `N!` permutations, returned in the same
/// layout as [`CharCoefficients`] (entry `k` multiplies `x^{N-k}`).
pub fn brute_force_det(b: &Element) -> Result<CharCoefficients> {
    let (base, n) = matrix_parts(b)?;
    if !base.is_commutative() {
        return Err(AlgError::NotCommutative(base.to_string()));
    }
    if n > BRUTE_FORCE_DET_MAX {
        return Err(AlgError::SizeLimitExceeded(format!(
            "permutation determinant limited to {BRUTE_FORCE_DET_MAX}x{BRUTE_FORCE_DET_MAX}, got {n}x{n}"
        )));
    }
    let entries = b.value.nested();
    // entry (i, j) of xI - B as a polynomial in x, lowest degree first
    let poly_entry = |i: usize, j: usize| -> Vec<Value> {
        let neg = entries[i * n + j].neg();
        if i == j {
            vec![neg, base.one_v()]
        } else {
            vec![neg]
        }
    };
    let poly_mul = |p: &[Value], q: &[Value]| -> Vec<Value> {
        let mut out = vec![base.zero_v(); p.len() + q.len() - 1];
        for (i, x) in p.iter().enumerate() {
            for (j, y) in q.iter().enumerate() {
                out[i + j].add_assign(&base.mul_v(x, y));
            }
        }
        out
    };
    let mut total = vec![base.zero_v(); n + 1];
    for_each_permutation(n, |perm, sign| {
        let mut term = vec![base.one_v()];
        for (i, &j) in perm.iter().enumerate() {
            term = poly_mul(&term, &poly_entry(i, j));
        }
        for (k, v) in term.iter().enumerate() {
            if sign > 0 {
                total[k].add_assign(v);
            } else {
                total[k].sub_assign(v);
            }
        }
    });
    Ok(CharCoefficients(
        total.into_iter().rev().map(|v| base.wrap(v)).collect(),
    ))
}

/// `M_n(M_t(S)) -> M_{tn}(S)`: block `(I, J)` lands at rows `I t ..`, columns `J t ..`.
pub fn flatten_blocks(outer: &Element) -> Result<Element> {
    let (inner_ring, n) = matrix_parts(outer)?;
    let (scalars, t) = match inner_ring.kind() {
        RingKind::Matrix { base, n } => (base.clone(), *n),
        _ => {
            return Err(AlgError::DescriptorMismatch {
                expected: "a matrix ring over a matrix ring".into(),
                found: outer.ring().to_string(),
            })
        }
    };
    let size = n * t;
    let blocks = outer.value.nested();
    let mut values = vec![scalars.zero_v(); size * size];
    for bi in 0..n {
        for bj in 0..n {
            let block = blocks[bi * n + bj].nested();
            for i in 0..t {
                for j in 0..t {
                    values[(bi * t + i) * size + bj * t + j] = block[i * t + j].clone();
                }
            }
        }
    }
    Ok(Ring::matrix(&scalars, size)?.wrap(Value::Nested(values)))
}

/// Inverse of [`flatten_blocks`] for block size `t`.
pub fn unflatten_blocks(flat: &Element, t: usize) -> Result<Element> {
    let (scalars, size) = matrix_parts(flat)?;
    if t == 0 || size % t != 0 {
        return Err(AlgError::SizeMismatch(format!("{size} is not a multiple of {t}")));
    }
    let n = size / t;
    let inner = Ring::matrix(&scalars, t)?;
    let outer = Ring::matrix(&inner, n)?;
    let values = flat.value.nested();
    let mut blocks = Vec::with_capacity(n * n);
    for bi in 0..n {
        for bj in 0..n {
            let mut block = Vec::with_capacity(t * t);
            for i in 0..t {
                for j in 0..t {
                    block.push(values[(bi * t + i) * size + bj * t + j].clone());
                }
            }
            blocks.push(Value::Nested(block));
        }
    }
    Ok(outer.wrap(Value::Nested(blocks)))
}

/// Rank of a list of rational vectors, by fraction-exact Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_row[col];
            for (x, p) in rows[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rational};

    fn q() -> Ring {
        Ring::rationals()
    }

    #[test]
    fn identity_and_powers() {
        let a = from_int_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        let i2 = identity(&q(), 2).unwrap();
        assert_eq!(mat_mul(&i2, &a).unwrap(), a);
        assert_eq!(mat_pow(&a, 0).unwrap(), i2);
        assert_eq!(mat_pow(&a, 3).unwrap(), a.mul(&a).unwrap().mul(&a).unwrap());
    }

    #[test]
    fn diagonal_products() {
        let d1 = diag(&q(), &[q().from_int(2), q().from_int(3)]).unwrap();
        let d2 = diag(&q(), &[q().from_int(4), q().from_int(5)]).unwrap();
        let expected = diag(&q(), &[q().from_int(8), q().from_int(15)]).unwrap();
        assert_eq!(mat_mul(&d1, &d2).unwrap(), expected);
        assert_eq!(trace(&d1).unwrap(), q().from_int(5));
        assert_eq!(trace(&identity(&q(), 4).unwrap()).unwrap(), q().from_int(4));
    }

    #[test]
    fn size_mismatch() {
        let a = identity(&q(), 2).unwrap();
        let b = identity(&q(), 3).unwrap();
        assert!(matches!(mat_mul(&a, &b), Err(AlgError::SizeMismatch(_))));
    }

    fn ints(xs: &[i64]) -> Vec<Element> {
        xs.iter().map(|&x| q().from_int(x)).collect()
    }

    #[test]
    fn newton_small_cases() {
        let d = diag(&q(), &ints(&[2, 3])).unwrap();
        assert_eq!(newton_char_coeffs(&d).unwrap().0, ints(&[1, -5, 6]));
        assert_eq!(brute_force_det(&d).unwrap().0, ints(&[1, -5, 6]));

        let zero = Ring::matrix(&q(), 3).unwrap().zero();
        assert_eq!(newton_char_coeffs(&zero).unwrap().0, ints(&[1, 0, 0, 0]));

        let nil = from_int_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(brute_force_det(&nil).unwrap().0, ints(&[1, 0, 0]));

        // (x - 1)^3 and (x - 1)^4
        let i3 = identity(&q(), 3).unwrap();
        assert_eq!(brute_force_det(&i3).unwrap().0, ints(&[1, -3, 3, -1]));
        assert_eq!(newton_char_coeffs(&i3).unwrap().0, ints(&[1, -3, 3, -1]));
        let i4 = identity(&q(), 4).unwrap();
        assert_eq!(newton_char_coeffs(&i4).unwrap().0, ints(&[1, -4, 6, -4, 1]));
    }

    #[test]
    fn cayley_hamilton_on_diagonal() {
        let d = diag(&q(), &ints(&[2, 3])).unwrap();
        let c = CharCoefficients(ints(&[1, -5, 6]));
        assert!(cayley_hamilton_eval(&d, &c).unwrap().is_zero());
        let zero = Ring::matrix(&q(), 2).unwrap().zero();
        let c0 = newton_char_coeffs(&zero).unwrap();
        assert!(cayley_hamilton_eval(&zero, &c0).unwrap().is_zero());
        let wrong = CharCoefficients(ints(&[1, -5, 7]));
        assert!(!cayley_hamilton_eval(&d, &wrong).unwrap().is_zero());
    }

    #[test]
    fn scalar_action_must_be_central() {
        let base = Ring::rotation(2).unwrap();
        let skew = Ring::trunc_skew_natural(&base, 2).unwrap();
        let a = identity(&skew, 1).unwrap();
        let not_fixed = base.tuple(vec![int(1), int(2)]).unwrap();
        let c = CharCoefficients(vec![base.one(), not_fixed]);
        assert!(matches!(
            cayley_hamilton_eval(&a, &c),
            Err(AlgError::ScalarActionUndefined(_))
        ));
        let c = CharCoefficients(vec![base.one(), base.from_int(-1)]);
        assert!(cayley_hamilton_eval(&a, &c).unwrap().is_zero());
    }

    #[test]
    fn brute_force_limits() {
        let big = identity(&q(), 7).unwrap();
        assert!(matches!(brute_force_det(&big), Err(AlgError::SizeLimitExceeded(_))));
        let e = Ring::grassmann(2).unwrap();
        let m = identity(&e, 2).unwrap();
        assert!(matches!(brute_force_det(&m), Err(AlgError::NotCommutative(_))));
    }

    #[test]
    fn block_flattening_round_trip() {
        let inner = Ring::matrix(&q(), 2).unwrap();
        let outer = Ring::matrix(&inner, 2).unwrap();
        let mut rng = crate::random::trial_rng(5, 0);
        let a = outer.random_element(&mut rng);
        let b = outer.random_element(&mut rng);
        let fa = flatten_blocks(&a).unwrap();
        assert_eq!(unflatten_blocks(&fa, 2).unwrap(), a);
        let fab = flatten_blocks(&a.mul(&b).unwrap()).unwrap();
        assert_eq!(fab, fa.mul(&flatten_blocks(&b).unwrap()).unwrap());
        // block (0, 1) entry (1, 0) sits at flat (1, 2)
        let blk = a.entry(0, 1).unwrap().entry(1, 0).unwrap();
        assert_eq!(fa.entry(1, 2).unwrap(), blk);
    }

    #[test]
    fn rank() {
        let r = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(rational_rank(vec![r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(rational_rank(vec![r(&[1, 2, 0]), r(&[0, 1, 1]), r(&[1, 3, 1])]), 2);
        assert_eq!(
            rational_rank(vec![vec![rational(1, 2), int(0)], vec![int(0), rational(-1, 3)]]),
            2
        );
    }
}
