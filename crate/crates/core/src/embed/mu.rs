use crate::error::{AlgError, Result};
use crate::matrix::flatten_blocks;
use crate::ring::{Element, Endomorphism, Ring, RingKind, Value};

/// Modulo-`t` difference `j (-) i` of 1-based indices: `j - i` if `i <= j`,
/// otherwise `j - i + t`.
pub fn mod_diff(i: usize, j: usize, t: usize) -> Result<usize> {
    if i == 0 || j == 0 || i > t || j > t {
        return Err(AlgError::IndexOutOfRange(format!(
            "indices ({i}, {j}) must lie in 1..={t}"
        )));
    }
    Ok(if i <= j { j - i } else { j + t - i })
}

fn skew_parts(ring: &Ring) -> Result<(Ring, Endomorphism, usize)> {
    match ring.kind() {
        RingKind::TruncSkew { base, sigma, t, .. } => Ok((base.clone(), sigma.clone(), *t)),
        _ => Err(AlgError::DescriptorMismatch {
            expected: "a truncated skew polynomial ring".into(),
            found: ring.to_string(),
        }),
    }
}

/// `M_t(R[z]/(z^t))`, the target of `mu` for `R[w, sigma]/(w^t)`.
pub fn mu_codomain(skew_ring: &Ring) -> Result<Ring> {
    let (base, _, t) = skew_parts(skew_ring)?;
    Ring::matrix(&Ring::trunc_comm(&base, t, "z")?, t)
}

fn mu_value(base: &Ring, sigma: &Endomorphism, t: usize, coeffs: &[Value]) -> Value {
    let mut entries = Vec::with_capacity(t * t);
    for i in 1..=t {
        for j in 1..=t {
            let d = if i <= j { j - i } else { j + t - i };
            let mut poly = vec![base.zero_v(); t];
            poly[d] = sigma.apply_pow_v(&coeffs[d], i - 1);
            entries.push(Value::Nested(poly));
        }
    }
    Value::Nested(entries)
}

/// `mu(r_0 + r_1 w + .. + r_{t-1} w^{t-1})`: the `t x t` matrix whose
/// `(i, j)` entry (1-based) is `sigma^{i-1}(r_{j (-) i}) z^{j (-) i}`.
pub fn embed_mu(f: &Element) -> Result<Element> {
    let (base, sigma, t) = skew_parts(f.ring())?;
    let target = mu_codomain(f.ring())?;
    Ok(target.wrap(mu_value(&base, &sigma, t, f.value.nested())))
}

/// Checks that `tr(mu(f))` is the constant coset of
/// `r_0 + sigma(r_0) + .. + sigma^{t-1}(r_0)` and that this sum is `sigma`-fixed.
pub fn mu_trace_check(f: &Element) -> Result<bool> {
    let (base, sigma, t) = skew_parts(f.ring())?;
    let trace = crate::matrix::trace(&embed_mu(f)?)?;
    let r0 = f.coeff(0)?;
    let mut orbit_sum = base.zero();
    for k in 0..t {
        orbit_sum = orbit_sum.add(&sigma.apply_pow(&r0, k)?)?;
    }
    let expected = trace.ring().constant(&orbit_sum)?;
    Ok(trace == expected && sigma.fixes(&orbit_sum)?)
}

/// Entrywise `mu` on `M_n(R[w, sigma]/(w^t))`, block-flattened into `M_{tn}(R[z]/(z^t))`.
pub fn embed_mu_n(a: &Element) -> Result<Element> {
    let RingKind::Matrix { base: skew, n } = a.ring().kind() else {
        return Err(AlgError::DescriptorMismatch {
            expected: "a matrix ring over a truncated skew polynomial ring".into(),
            found: a.ring().to_string(),
        });
    };
    let (base, sigma, t) = skew_parts(skew)?;
    let blocks = Ring::matrix(&mu_codomain(skew)?, *n)?;
    let values = a
        .value
        .nested()
        .iter()
        .map(|entry| mu_value(&base, &sigma, t, entry.nested()))
        .collect();
    flatten_blocks(&blocks.wrap(Value::Nested(values)))
}

/// Recovers `f` from `mu(f)`: row 1 holds `r_{j-1} z^{j-1}` in column `j`.
/// Returns `None` when `m` is not in the image of `mu`.
pub fn mu_preimage(skew_ring: &Ring, m: &Element) -> Result<Option<Element>> {
    let target = mu_codomain(skew_ring)?;
    target.check(m.ring())?;
    let (_, _, t) = skew_parts(skew_ring)?;
    let entries = m.value.nested();
    let coeffs: Vec<Value> = (0..t).map(|j| entries[j].nested()[j].clone()).collect();
    let candidate = skew_ring.wrap(Value::Nested(coeffs));
    if embed_mu(&candidate)? == *m {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn mod_diff_table() {
        assert_eq!(mod_diff(1, 1, 3).unwrap(), 0);
        assert_eq!(mod_diff(1, 3, 3).unwrap(), 2);
        assert_eq!(mod_diff(2, 1, 3).unwrap(), 2);
        assert_eq!(mod_diff(3, 2, 3).unwrap(), 2);
        assert_eq!(mod_diff(3, 1, 3).unwrap(), 1);
        assert!(matches!(mod_diff(0, 1, 3), Err(AlgError::IndexOutOfRange(_))));
        assert!(matches!(mod_diff(1, 4, 3), Err(AlgError::IndexOutOfRange(_))));
    }

    #[test]
    fn mu_of_one_is_identity() {
        let base = Ring::rotation(3).unwrap();
        let skew = Ring::trunc_skew_natural(&base, 3).unwrap();
        let img = embed_mu(&skew.one()).unwrap();
        assert_eq!(img, mu_codomain(&skew).unwrap().one());
        assert_eq!(mu_preimage(&skew, &img).unwrap(), Some(skew.one()));
    }

    #[test]
    fn t3_second_row() {
        // row 2 = (sigma(r2) z^2, sigma(r0), sigma(r1) z)
        let base = Ring::rotation(3).unwrap();
        let sigma = Endomorphism::natural(&base);
        let skew = Ring::trunc_skew(&base, &sigma, 3).unwrap();
        let r: Vec<Element> = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
            .iter()
            .map(|xs| base.tuple(xs.iter().map(|&x| int(x)).collect()).unwrap())
            .collect();
        let f = skew.poly_from_coeffs(r.clone()).unwrap();
        let img = embed_mu(&f).unwrap();
        let zring = Ring::trunc_comm(&base, 3, "z").unwrap();
        let at = |d: usize, c: &Element| {
            let mut coeffs = vec![base.zero(); 3];
            coeffs[d] = sigma.apply(c).unwrap();
            zring.poly_from_coeffs(coeffs).unwrap()
        };
        assert_eq!(img.entry(1, 0).unwrap(), at(2, &r[2]));
        assert_eq!(img.entry(1, 1).unwrap(), at(0, &r[0]));
        assert_eq!(img.entry(1, 2).unwrap(), at(1, &r[1]));
    }

    #[test]
    fn diagonal_z_is_not_in_image() {
        let skew = Ring::trunc_skew_natural(&Ring::rotation(2).unwrap(), 2).unwrap();
        let target = mu_codomain(&skew).unwrap();
        let zring = target.base().unwrap().clone();
        let z = zring.var_power(1).unwrap();
        let rows = vec![vec![z, zring.zero()], vec![zring.zero(), zring.zero()]];
        let m = target.matrix_from_rows(rows).unwrap();
        assert_eq!(mu_preimage(&skew, &m).unwrap(), None);
    }

    #[test]
    fn trace_of_rotation_constant() {
        let base = Ring::rotation(3).unwrap();
        let skew = Ring::trunc_skew_natural(&base, 3).unwrap();
        let r0 = base.tuple(vec![int(1), int(2), int(3)]).unwrap();
        let f = skew.poly_from_coeffs(vec![r0, base.one()]).unwrap();
        assert!(mu_trace_check(&f).unwrap());
        let tr = crate::matrix::trace(&embed_mu(&f).unwrap()).unwrap();
        assert_eq!(tr.coeff(0).unwrap(), base.from_int(6));
        assert!(mu_trace_check(&skew.var_power(1).unwrap()).unwrap());
        assert!(mu_trace_check(&skew.one()).unwrap());
    }
}
