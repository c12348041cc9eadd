//! Ring descriptors, exact elements and distinguished endomorphisms.
//!
//! Every ring handled by this crate is a finite-dimensional algebra over the
//! rationals, so an element is stored as a tree of rational coordinates
//! ([`Value`]). The leaves are the coordinates of one of the base rings
//! (`Q`, the rotation product `Q^t`, the Gaussian rationals `Q[i]` and the
//! Grassmann algebra `E^(m)`); inner nodes are matrix entries or truncated
//! polynomial coefficients. Addition and the `Q`-action act coordinatewise on
//! the whole tree, only multiplication and endomorphisms look at the
//! descriptor.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{AddAssign, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{AlgError, Result};

pub type Rational = BigRational;

/// Largest number of Grassmann generators accepted (dense storage has `2^m` coordinates).
pub const MAX_GRASSMANN_GENERATORS: usize = 12;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shared, immutable description of a concrete ring.
#[derive(Clone)]
pub struct Ring(Arc<RingKind>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// The field `Q`, with the identity as distinguished endomorphism.
    Rationals,
    /// `Q^t` with `sigma(a_1, .., a_t) = (a_t, a_1, .., a_{t-1})`.
    Rotation { t: usize },
    /// `Q[x]/(x^2 + 1)` with complex conjugation.
    Gaussian,
    /// Grassmann algebra on `m` anticommuting generators with the parity involution.
    Grassmann { m: usize },
    /// Full `n x n` matrix ring.
    Matrix { base: Ring, n: usize },
    /// `base[var, sigma]/(var^t)`; `sigma = identity` gives the commutative
    /// truncated polynomial ring `base[z]/(z^t)`.
    TruncSkew {
        base: Ring,
        sigma: Endomorphism,
        t: usize,
        var: String,
    },
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Rationals => write!(f, "Q"),
            RingKind::Rotation { t } => write!(f, "Q^{t}"),
            RingKind::Gaussian => write!(f, "Q[i]"),
            RingKind::Grassmann { m } => write!(f, "E^({m})"),
            RingKind::Matrix { base, n } => write!(f, "M_{n}({base})"),
            RingKind::TruncSkew { base, sigma, t, var } => {
                if sigma.is_identity() {
                    write!(f, "{base}[{var}]/({var}^{t})")
                } else {
                    write!(f, "{base}[{var},{sigma}]/({var}^{t})")
                }
            }
        }
    }
}

/// Exact coordinates of an element; the shape is dictated by the owning [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Value<S = Rational> {
    Flat(Vec<S>),
    Nested(Vec<Value<S>>),
}

/// Coordinate scalars: the rationals, or the integers once denominators have
/// been cleared.
pub(crate) trait Coord:
    Clone + PartialEq + Zero + One + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Coord for Rational {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Coord for BigInt {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl<S: Coord> Value<S> {
    pub(crate) fn flat(&self) -> &[S] {
        match self {
            Value::Flat(v) => v,
            Value::Nested(_) => unreachable!("expected base-ring coordinates"),
        }
    }

    pub(crate) fn nested(&self) -> &[Value<S>] {
        match self {
            Value::Nested(v) => v,
            Value::Flat(_) => unreachable!("expected compound value"),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Value::Flat(v) => v.iter().all(Zero::is_zero),
            Value::Nested(v) => v.iter().all(Value::is_zero),
        }
    }

    pub(crate) fn add_assign(&mut self, other: &Value<S>) {
        match (self, other) {
            (Value::Flat(a), Value::Flat(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x += y;
                    }
                }
            }
            (Value::Nested(a), Value::Nested(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    x.add_assign(y);
                }
            }
            _ => unreachable!("value shapes differ"),
        }
    }

    pub(crate) fn sub_assign(&mut self, other: &Value<S>) {
        match (self, other) {
            (Value::Flat(a), Value::Flat(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= y;
                    }
                }
            }
            (Value::Nested(a), Value::Nested(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    x.sub_assign(y);
                }
            }
            _ => unreachable!("value shapes differ"),
        }
    }

    pub(crate) fn neg(&self) -> Value<S> {
        match self {
            Value::Flat(v) => Value::Flat(v.iter().map(Coord::negated).collect()),
            Value::Nested(v) => Value::Nested(v.iter().map(Value::neg).collect()),
        }
    }

    pub(crate) fn coords_into(&self, out: &mut Vec<S>) {
        match self {
            Value::Flat(v) => out.extend(v.iter().cloned()),
            Value::Nested(v) => v.iter().for_each(|x| x.coords_into(out)),
        }
    }
}

impl Value {
    /// Least common multiple of all coordinate denominators.
    pub(crate) fn denominator_lcm(&self) -> BigInt {
        match self {
            Value::Flat(v) => v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())),
            Value::Nested(v) => v.iter().fold(BigInt::one(), |l, x| l.lcm(&x.denominator_lcm())),
        }
    }

    /// Integer coordinates of `self * scale`; `scale` must clear every denominator.
    pub(crate) fn to_integral(&self, scale: &BigInt) -> Value<BigInt> {
        match self {
            Value::Flat(v) => Value::Flat(v.iter().map(|x| x.numer() * (scale / x.denom())).collect()),
            Value::Nested(v) => Value::Nested(v.iter().map(|x| x.to_integral(scale)).collect()),
        }
    }

    /// Rational coordinates of `v / divisor`.
    pub(crate) fn from_integral(v: &Value<BigInt>, divisor: &BigInt) -> Value {
        match v {
            Value::Flat(v) => Value::Flat(
                v.iter()
                    .map(|x| Rational::new(x.clone(), divisor.clone()))
                    .collect(),
            ),
            Value::Nested(v) => Value::Nested(v.iter().map(|x| Value::from_integral(x, divisor)).collect()),
        }
    }

    pub(crate) fn scale(&self, q: &Rational) -> Value {
        match self {
            Value::Flat(v) => Value::Flat(v.iter().map(|x| x * q).collect()),
            Value::Nested(v) => Value::Nested(v.iter().map(|x| x.scale(q)).collect()),
        }
    }
}

pub(crate) fn add_v<S: Coord>(a: &Value<S>, b: &Value<S>) -> Value<S> {
    let mut out = a.clone();
    out.add_assign(b);
    out
}

pub(crate) fn sub_v<S: Coord>(a: &Value<S>, b: &Value<S>) -> Value<S> {
    let mut out = a.clone();
    out.sub_assign(b);
    out
}

/// Sign of the product of Grassmann basis monomials `v_a * v_b` (bitmask
/// subsets), or 0 when they share a generator.
pub fn grassmann_sign(a: usize, b: usize) -> i32 {
    if a & b != 0 {
        return 0;
    }
    // every generator of `b` moves left past the larger generators of `a`
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Ring {
    fn build(kind: RingKind) -> Ring {
        Ring(Arc::new(kind))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn rationals() -> Ring {
        Ring::build(RingKind::Rationals)
    }

    pub fn rotation(t: usize) -> Result<Ring> {
        if t == 0 {
            return Err(AlgError::InvalidParameter("rotation ring needs t >= 1".into()));
        }
        Ok(Ring::build(RingKind::Rotation { t }))
    }

    pub fn gaussian() -> Ring {
        Ring::build(RingKind::Gaussian)
    }

    pub fn grassmann(m: usize) -> Result<Ring> {
        if m > MAX_GRASSMANN_GENERATORS {
            return Err(AlgError::InvalidParameter(format!(
                "Grassmann algebra limited to {MAX_GRASSMANN_GENERATORS} generators, got {m}"
            )));
        }
        Ok(Ring::build(RingKind::Grassmann { m }))
    }

    pub fn matrix(base: &Ring, n: usize) -> Result<Ring> {
        if n == 0 {
            return Err(AlgError::InvalidParameter("matrix size n must be >= 1".into()));
        }
        Ok(Ring::build(RingKind::Matrix {
            base: base.clone(),
            n,
        }))
    }

    /// `base[w, sigma]/(w^t)`. Requires `sigma^t = 1`, which makes `w^t` central.
    pub fn trunc_skew(base: &Ring, sigma: &Endomorphism, t: usize) -> Result<Ring> {
        Ring::trunc_skew_named(base, sigma, t, "w")
    }

    pub fn trunc_skew_named(base: &Ring, sigma: &Endomorphism, t: usize, var: &str) -> Result<Ring> {
        if t == 0 {
            return Err(AlgError::InvalidParameter("truncation degree t must be >= 1".into()));
        }
        if sigma.ring() != base {
            return Err(AlgError::DescriptorMismatch {
                expected: base.to_string(),
                found: sigma.ring().to_string(),
            });
        }
        let order = sigma.order();
        if t % order != 0 {
            return Err(AlgError::SigmaOrderMismatch { order, t });
        }
        Ok(Ring::build(RingKind::TruncSkew {
            base: base.clone(),
            sigma: sigma.clone(),
            t,
            var: var.to_string(),
        }))
    }

    /// `base[w, sigma]/(w^t)` with the base ring's natural endomorphism.
    pub fn trunc_skew_natural(base: &Ring, t: usize) -> Result<Ring> {
        Ring::trunc_skew(base, &Endomorphism::natural(base), t)
    }

    /// Commutative truncated ring `base[var]/(var^t)`.
    pub fn trunc_comm(base: &Ring, t: usize, var: &str) -> Result<Ring> {
        Ring::trunc_skew_named(base, &Endomorphism::identity(base), t, var)
    }

    /// `base[z_1, .., z_vars]/(z_1^t, .., z_vars^t)`, built as nested
    /// univariate truncations in `z_1`, then `z_2`, and so on.
    pub fn trunc_poly(base: &Ring, vars: usize, t: usize) -> Result<Ring> {
        let mut ring = base.clone();
        for k in 1..=vars {
            ring = Ring::trunc_comm(&ring, t, &format!("z{k}"))?;
        }
        Ok(ring)
    }

    /// Number of rational coordinates of an element.
    pub fn dimension(&self) -> usize {
        match self.kind() {
            RingKind::Rationals => 1,
            RingKind::Rotation { t } => *t,
            RingKind::Gaussian => 2,
            RingKind::Grassmann { m } => 1 << m,
            RingKind::Matrix { base, n } => n * n * base.dimension(),
            RingKind::TruncSkew { base, t, .. } => t * base.dimension(),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self.kind() {
            RingKind::Rationals | RingKind::Rotation { .. } | RingKind::Gaussian => true,
            RingKind::Grassmann { m } => *m <= 1,
            RingKind::Matrix { base, n } => *n == 1 && base.is_commutative(),
            RingKind::TruncSkew { base, sigma, t, .. } => {
                base.is_commutative() && (*t == 1 || sigma.is_identity())
            }
        }
    }

    /// The base ring of a matrix or truncated polynomial ring.
    pub fn base(&self) -> Option<&Ring> {
        match self.kind() {
            RingKind::Matrix { base, .. } | RingKind::TruncSkew { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn matrix_size(&self) -> Option<usize> {
        match self.kind() {
            RingKind::Matrix { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// `(base, sigma, t)` for a truncated (skew) polynomial ring.
    pub fn skew_parts(&self) -> Option<(&Ring, &Endomorphism, usize)> {
        match self.kind() {
            RingKind::TruncSkew { base, sigma, t, .. } => Some((base, sigma, *t)),
            _ => None,
        }
    }

    pub fn natural_endomorphism(&self) -> Endomorphism {
        Endomorphism::natural(self)
    }

    pub(crate) fn zero_v<S: Coord>(&self) -> Value<S> {
        match self.kind() {
            RingKind::Matrix { base, n } => Value::Nested(vec![base.zero_v(); n * n]),
            RingKind::TruncSkew { base, t, .. } => Value::Nested(vec![base.zero_v(); *t]),
            _ => Value::Flat(vec![S::zero(); self.dimension()]),
        }
    }

    pub(crate) fn one_v<S: Coord>(&self) -> Value<S> {
        match self.kind() {
            RingKind::Rationals => Value::Flat(vec![S::one()]),
            RingKind::Rotation { t } => Value::Flat(vec![S::one(); *t]),
            RingKind::Gaussian => Value::Flat(vec![S::one(), S::zero()]),
            RingKind::Grassmann { m } => {
                let mut v = vec![S::zero(); 1 << m];
                v[0] = S::one();
                Value::Flat(v)
            }
            RingKind::Matrix { base, n } => {
                let n = *n;
                let one = base.one_v();
                let zero = base.zero_v();
                Value::Nested(
                    (0..n * n)
                        .map(|k| if k / n == k % n { one.clone() } else { zero.clone() })
                        .collect(),
                )
            }
            RingKind::TruncSkew { base, t, .. } => {
                let mut v = vec![base.zero_v(); *t];
                v[0] = base.one_v();
                Value::Nested(v)
            }
        }
    }

    pub(crate) fn mul_v<S: Coord>(&self, a: &Value<S>, b: &Value<S>) -> Value<S> {
        match self.kind() {
            RingKind::Rationals | RingKind::Rotation { .. } => Value::Flat(
                a.flat()
                    .iter()
                    .zip(b.flat())
                    .map(|(x, y)| x.times(y))
                    .collect(),
            ),
            RingKind::Gaussian => {
                let (a, b) = (a.flat(), b.flat());
                let mut re = a[0].times(&b[0]);
                re -= &a[1].times(&b[1]);
                let mut im = a[0].times(&b[1]);
                im += &a[1].times(&b[0]);
                Value::Flat(vec![re, im])
            }
            RingKind::Grassmann { m } => {
                let (a, b) = (a.flat(), b.flat());
                let mut out = vec![S::zero(); 1 << m];
                for (sa, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (sb, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        match grassmann_sign(sa, sb) {
                            0 => {}
                            1 => out[sa | sb] += &x.times(y),
                            _ => out[sa | sb] -= &x.times(y),
                        }
                    }
                }
                Value::Flat(out)
            }
            RingKind::Matrix { base, n } => {
                let n = *n;
                let (a, b) = (a.nested(), b.nested());
                let mut out = vec![base.zero_v(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = &a[i * n + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            let bkj = &b[k * n + j];
                            if !bkj.is_zero() {
                                out[i * n + j].add_assign(&base.mul_v(aik, bkj));
                            }
                        }
                    }
                }
                Value::Nested(out)
            }
            RingKind::TruncSkew { base, sigma, t, .. } => {
                // u_m = sum_{i+j=m} r_i sigma^i(s_j); degrees >= t never materialise
                let t = *t;
                let (r, s) = (a.nested(), b.nested());
                let identity = sigma.is_identity();
                let mut out = vec![base.zero_v(); t];
                for (j, sj) in s.iter().enumerate() {
                    if sj.is_zero() {
                        continue;
                    }
                    let mut twisted = sj.clone();
                    for i in 0..t - j {
                        if i > 0 && !identity {
                            twisted = sigma.apply_v(&twisted);
                        }
                        if !r[i].is_zero() {
                            out[i + j].add_assign(&base.mul_v(&r[i], &twisted));
                        }
                    }
                }
                Value::Nested(out)
            }
        }
    }

    pub(crate) fn value_from_coords(&self, coords: &mut impl Iterator<Item = Rational>) -> Value {
        match self.kind() {
            RingKind::Matrix { base, n } => {
                Value::Nested((0..n * n).map(|_| base.value_from_coords(coords)).collect())
            }
            RingKind::TruncSkew { base, t, .. } => {
                Value::Nested((0..*t).map(|_| base.value_from_coords(coords)).collect())
            }
            _ => Value::Flat(coords.take(self.dimension()).collect()),
        }
    }

    pub(crate) fn wrap(&self, value: Value) -> Element {
        Element {
            ring: self.clone(),
            value,
        }
    }

    pub(crate) fn check(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(AlgError::DescriptorMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }

    pub fn zero(&self) -> Element {
        self.wrap(self.zero_v())
    }

    pub fn one(&self) -> Element {
        self.wrap(self.one_v())
    }

    /// Image of a rational under the unital embedding `Q -> R`.
    pub fn from_rational(&self, q: &Rational) -> Element {
        self.wrap(self.one_v().scale(q))
    }

    pub fn from_int(&self, n: i64) -> Element {
        self.from_rational(&int(n))
    }

    /// Rebuilds an element from its flattened rational coordinates.
    pub fn from_coords(&self, coords: Vec<Rational>) -> Result<Element> {
        if coords.len() != self.dimension() {
            return Err(AlgError::SizeMismatch(format!(
                "{} expects {} coordinates, got {}",
                self,
                self.dimension(),
                coords.len()
            )));
        }
        let mut it = coords.into_iter();
        Ok(self.wrap(self.value_from_coords(&mut it)))
    }

    /// Element `(a_1, .., a_t)` of the rotation ring.
    pub fn tuple(&self, parts: Vec<Rational>) -> Result<Element> {
        match self.kind() {
            RingKind::Rotation { t } if *t == parts.len() => Ok(self.wrap(Value::Flat(parts))),
            RingKind::Rotation { t } => Err(AlgError::SizeMismatch(format!(
                "expected {t} components, got {}",
                parts.len()
            ))),
            _ => Err(self.kind_error("a rotation product ring")),
        }
    }

    /// `re + im * i` in the Gaussian rationals.
    pub fn gaussian_elem(&self, re: Rational, im: Rational) -> Result<Element> {
        match self.kind() {
            RingKind::Gaussian => Ok(self.wrap(Value::Flat(vec![re, im]))),
            _ => Err(self.kind_error("Q[i]")),
        }
    }

    /// The Grassmann product `v_{i_1} v_{i_2} ..` of 1-based generator indices,
    /// normalised to increasing order (zero when an index repeats).
    pub fn grassmann_monomial(&self, indices: &[usize]) -> Result<Element> {
        let RingKind::Grassmann { m } = self.kind() else {
            return Err(self.kind_error("a Grassmann algebra"));
        };
        let mut mask = 0usize;
        let mut sign = 1i64;
        for &i in indices {
            if i == 0 || i > *m {
                return Err(AlgError::IndexOutOfRange(format!(
                    "generator v{i} not in E^({m})"
                )));
            }
            let bit = 1usize << (i - 1);
            match grassmann_sign(mask, bit) {
                0 => return Ok(self.zero()),
                s => sign *= s as i64,
            }
            mask |= bit;
        }
        let mut v = vec![Rational::zero(); 1 << m];
        v[mask] = int(sign);
        Ok(self.wrap(Value::Flat(v)))
    }

    /// Generator `v_i` (1-based) of a Grassmann algebra.
    pub fn generator(&self, i: usize) -> Result<Element> {
        self.grassmann_monomial(&[i])
    }

    /// Matrix built from rows of entries over the base ring.
    pub fn matrix_from_rows(&self, rows: Vec<Vec<Element>>) -> Result<Element> {
        let RingKind::Matrix { base, n } = self.kind() else {
            return Err(self.kind_error("a matrix ring"));
        };
        if rows.len() != *n || rows.iter().any(|r| r.len() != *n) {
            return Err(AlgError::SizeMismatch(format!("expected {n}x{n} entries")));
        }
        let mut values = Vec::with_capacity(n * n);
        for e in rows.into_iter().flatten() {
            base.check(&e.ring)?;
            values.push(e.value);
        }
        Ok(self.wrap(Value::Nested(values)))
    }

    /// Coset `c_0 + c_1 w + .. + c_k w^k + (w^t)`; missing coefficients are zero.
    pub fn poly_from_coeffs(&self, coeffs: Vec<Element>) -> Result<Element> {
        let RingKind::TruncSkew { base, t, .. } = self.kind() else {
            return Err(self.kind_error("a truncated polynomial ring"));
        };
        if coeffs.len() > *t {
            return Err(AlgError::SizeMismatch(format!(
                "at most {t} coefficients allowed, got {}",
                coeffs.len()
            )));
        }
        let mut values = vec![base.zero_v(); *t];
        for (slot, c) in values.iter_mut().zip(coeffs) {
            base.check(&c.ring)?;
            *slot = c.value;
        }
        Ok(self.wrap(Value::Nested(values)))
    }

    /// Constant coset `c + (w^t)`.
    pub fn constant(&self, c: &Element) -> Result<Element> {
        self.poly_from_coeffs(vec![c.clone()])
    }

    /// `w^k + (w^t)`; zero for `k >= t`, since `w^t` lies in the ideal.
    pub fn var_power(&self, k: usize) -> Result<Element> {
        let RingKind::TruncSkew { base, t, .. } = self.kind() else {
            return Err(self.kind_error("a truncated polynomial ring"));
        };
        let mut values = vec![base.zero_v(); *t];
        if k < *t {
            values[k] = base.one_v();
        }
        Ok(self.wrap(Value::Nested(values)))
    }

    fn kind_error(&self, wanted: &str) -> AlgError {
        AlgError::DescriptorMismatch {
            expected: wanted.to_string(),
            found: self.to_string(),
        }
    }
}

/// Which map an [`Endomorphism`] performs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndoAction {
    Identity,
    /// Cyclic rotation of the coordinates of `Q^t`.
    Rotation,
    /// Grassmann parity involution: negates odd-degree monomials.
    Parity,
    /// `a + bi -> a - bi` on `Q[i]`.
    Conjugation,
    /// Entrywise (matrices) or coefficientwise (truncated polynomials) extension.
    Lift(Box<Endomorphism>),
}

/// A ring endomorphism of finite order acting on a fixed descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    ring: Ring,
    action: EndoAction,
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.action {
            EndoAction::Identity => write!(f, "id"),
            EndoAction::Rotation => write!(f, "rot"),
            EndoAction::Parity => write!(f, "tau"),
            EndoAction::Conjugation => write!(f, "conj"),
            EndoAction::Lift(inner) => write!(f, "{inner}*"),
        }
    }
}

impl Endomorphism {
    pub fn identity(ring: &Ring) -> Endomorphism {
        Endomorphism {
            ring: ring.clone(),
            action: EndoAction::Identity,
        }
    }

    /// The distinguished endomorphism of a ring: rotation on `Q^t`, parity on
    /// `E^(m)`, conjugation on `Q[i]`, identity on `Q`, and the lift of the
    /// base ring's natural endomorphism on matrix and polynomial rings.
    pub fn natural(ring: &Ring) -> Endomorphism {
        let action = match ring.kind() {
            RingKind::Rationals => EndoAction::Identity,
            RingKind::Rotation { .. } => EndoAction::Rotation,
            RingKind::Gaussian => EndoAction::Conjugation,
            RingKind::Grassmann { .. } => EndoAction::Parity,
            RingKind::Matrix { base, .. } | RingKind::TruncSkew { base, .. } => {
                EndoAction::Lift(Box::new(Endomorphism::natural(base)))
            }
        };
        Endomorphism {
            ring: ring.clone(),
            action,
        }
    }

    /// Extends `inner` (acting on the base ring) entrywise or coefficientwise.
    pub fn lift(ring: &Ring, inner: &Endomorphism) -> Result<Endomorphism> {
        match ring.kind() {
            RingKind::Matrix { base, .. } => base.check(&inner.ring)?,
            RingKind::TruncSkew { base, sigma, .. } => {
                base.check(&inner.ring)?;
                // coefficientwise maps respect w r = sigma(r) w only if they commute with sigma
                if !(inner == sigma || inner.is_identity() || sigma.is_identity()) {
                    return Err(AlgError::InvalidParameter(format!(
                        "{inner} does not commute with {sigma}"
                    )));
                }
            }
            _ => {
                return Err(AlgError::DescriptorMismatch {
                    expected: "a matrix or truncated polynomial ring".into(),
                    found: ring.to_string(),
                })
            }
        }
        Ok(Endomorphism {
            ring: ring.clone(),
            action: EndoAction::Lift(Box::new(inner.clone())),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn action(&self) -> &EndoAction {
        &self.action
    }

    pub fn is_identity(&self) -> bool {
        match &self.action {
            EndoAction::Identity => true,
            EndoAction::Rotation => matches!(self.ring.kind(), RingKind::Rotation { t: 1 }),
            EndoAction::Parity => matches!(self.ring.kind(), RingKind::Grassmann { m: 0 }),
            EndoAction::Conjugation => false,
            EndoAction::Lift(inner) => inner.is_identity(),
        }
    }

    /// Declared order `t` with `sigma^t = identity`.
    pub fn order(&self) -> usize {
        match &self.action {
            _ if self.is_identity() => 1,
            EndoAction::Rotation => match self.ring.kind() {
                RingKind::Rotation { t } => *t,
                _ => unreachable!(),
            },
            EndoAction::Parity | EndoAction::Conjugation => 2,
            EndoAction::Lift(inner) => inner.order(),
            EndoAction::Identity => 1,
        }
    }

    pub(crate) fn apply_v<S: Coord>(&self, v: &Value<S>) -> Value<S> {
        match &self.action {
            EndoAction::Identity => v.clone(),
            EndoAction::Rotation => {
                let a = v.flat();
                let t = a.len();
                Value::Flat((0..t).map(|k| a[(k + t - 1) % t].clone()).collect())
            }
            EndoAction::Conjugation => {
                let a = v.flat();
                Value::Flat(vec![a[0].clone(), a[1].negated()])
            }
            EndoAction::Parity => Value::Flat(
                v.flat()
                    .iter()
                    .enumerate()
                    .map(|(s, x)| if s.count_ones() % 2 == 1 { x.negated() } else { x.clone() })
                    .collect(),
            ),
            EndoAction::Lift(inner) => {
                Value::Nested(v.nested().iter().map(|x| inner.apply_v(x)).collect())
            }
        }
    }

    pub(crate) fn apply_pow_v<S: Coord>(&self, v: &Value<S>, k: usize) -> Value<S> {
        let k = k % self.order();
        let mut out = v.clone();
        for _ in 0..k {
            out = self.apply_v(&out);
        }
        out
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.ring.check(&a.ring)?;
        Ok(self.ring.wrap(self.apply_v(&a.value)))
    }

    /// `sigma^k(a)`.
    pub fn apply_pow(&self, a: &Element, k: usize) -> Result<Element> {
        self.ring.check(&a.ring)?;
        Ok(self.ring.wrap(self.apply_pow_v(&a.value, k)))
    }

    /// Membership in the fixed ring `R^sigma`.
    pub fn fixes(&self, a: &Element) -> Result<bool> {
        self.ring.check(&a.ring)?;
        Ok(self.apply_v(&a.value) == a.value)
    }
}

/// `sigma(a)`.
pub fn apply_endo(sigma: &Endomorphism, a: &Element) -> Result<Element> {
    sigma.apply(a)
}

/// True iff `sigma(a) = a`.
pub fn fixed_ring_member(sigma: &Endomorphism, a: &Element) -> Result<bool> {
    sigma.fixes(a)
}

/// An exact element together with the ring it lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    ring: Ring,
    pub(crate) value: Value,
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.ring.check(&other.ring)?;
        Ok(self.ring.wrap(add_v(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.ring.check(&other.ring)?;
        Ok(self.ring.wrap(sub_v(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.ring.check(&other.ring)?;
        Ok(self.ring.wrap(self.ring.mul_v(&self.value, &other.value)))
    }

    pub fn neg(&self) -> Element {
        self.ring.wrap(self.value.neg())
    }

    /// Action of a rational scalar.
    pub fn scale(&self, q: &Rational) -> Element {
        self.ring.wrap(self.value.scale(q))
    }

    pub fn pow(&self, k: usize) -> Element {
        let mut acc = self.ring.one_v();
        let mut base = self.value.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.ring.mul_v(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.ring.mul_v(&base, &base);
            }
        }
        self.ring.wrap(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value == self.ring.one_v()
    }

    /// Flattened rational coordinates (row-major for matrices, lowest degree
    /// first for polynomials, subset bitmask order for Grassmann elements).
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.ring.dimension());
        self.value.coords_into(&mut out);
        out
    }

    /// Entry `(i, j)` (0-based) of a matrix.
    pub fn entry(&self, i: usize, j: usize) -> Result<Element> {
        let RingKind::Matrix { base, n } = self.ring.kind() else {
            return Err(self.ring.kind_error("a matrix ring"));
        };
        if i >= *n || j >= *n {
            return Err(AlgError::IndexOutOfRange(format!("({i}, {j}) in {n}x{n} matrix")));
        }
        Ok(base.wrap(self.value.nested()[i * n + j].clone()))
    }

    /// Rows of a matrix.
    pub fn rows(&self) -> Result<Vec<Vec<Element>>> {
        let RingKind::Matrix { base, n } = self.ring.kind() else {
            return Err(self.ring.kind_error("a matrix ring"));
        };
        Ok(self
            .value
            .nested()
            .chunks(*n)
            .map(|row| row.iter().map(|v| base.wrap(v.clone())).collect())
            .collect())
    }

    /// Coefficients `(r_0, .., r_{t-1})` of a truncated polynomial.
    pub fn coeffs(&self) -> Result<Vec<Element>> {
        let RingKind::TruncSkew { base, .. } = self.ring.kind() else {
            return Err(self.ring.kind_error("a truncated polynomial ring"));
        };
        Ok(self
            .value
            .nested()
            .iter()
            .map(|v| base.wrap(v.clone()))
            .collect())
    }

    pub fn coeff(&self, k: usize) -> Result<Element> {
        let coeffs = self.coeffs()?;
        let t = coeffs.len();
        coeffs
            .into_iter()
            .nth(k)
            .ok_or_else(|| AlgError::IndexOutOfRange(format!("coefficient {k} of a degree < {t} coset")))
    }

    /// True when all non-constant coefficients vanish, recursively through
    /// nested truncated polynomial rings; a bare element counts as constant.
    pub fn is_constant(&self) -> bool {
        fn walk(ring: &Ring, v: &Value) -> bool {
            match ring.kind() {
                RingKind::TruncSkew { base, .. } => {
                    let c = v.nested();
                    c[1..].iter().all(Value::is_zero) && walk(base, &c[0])
                }
                _ => true,
            }
        }
        walk(&self.ring, &self.value)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.ring, &self.value))
    }
}

/// Product `a * b`, rejecting elements of different rings.
pub fn ring_mul(a: &Element, b: &Element) -> Result<Element> {
    a.mul(b)
}

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

fn scaled_monomial(coeff: &Rational, monomial: &str) -> String {
    if monomial.is_empty() {
        coeff.to_string()
    } else if coeff.is_one() {
        monomial.to_string()
    } else if (-coeff).is_one() {
        format!("-{monomial}")
    } else {
        format!("{coeff}*{monomial}")
    }
}

fn render(ring: &Ring, v: &Value) -> String {
    match ring.kind() {
        RingKind::Rationals => v.flat()[0].to_string(),
        RingKind::Rotation { .. } => {
            let parts: Vec<String> = v.flat().iter().map(ToString::to_string).collect();
            format!("({})", parts.join(", "))
        }
        RingKind::Gaussian => {
            let a = v.flat();
            let mut terms = Vec::new();
            if !a[0].is_zero() {
                terms.push(a[0].to_string());
            }
            if !a[1].is_zero() {
                terms.push(scaled_monomial(&a[1], "i"));
            }
            join_terms(&terms)
        }
        RingKind::Grassmann { .. } => {
            let mut support: Vec<(usize, &Rational)> =
                v.flat().iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            support.sort_by_key(|(s, _)| (s.count_ones(), s.reverse_bits()));
            let terms: Vec<String> = support
                .into_iter()
                .map(|(s, x)| {
                    let monomial: String = (0..usize::BITS as usize)
                        .filter(|b| s >> b & 1 == 1)
                        .map(|b| format!("v{}", b + 1))
                        .collect();
                    scaled_monomial(x, &monomial)
                })
                .collect();
            join_terms(&terms)
        }
        RingKind::Matrix { base, n } => {
            let rows: Vec<String> = v
                .nested()
                .chunks(*n)
                .map(|row| {
                    let cells: Vec<String> = row.iter().map(|x| render(base, x)).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            format!("[{}]", rows.join(", "))
        }
        RingKind::TruncSkew { .. } => {
            let mut terms = Vec::new();
            let mut moduli = Vec::new();
            poly_terms(ring, v, "", &mut terms);
            collect_moduli(ring, &mut moduli);
            let body = join_terms(&terms);
            format!("{body} (mod {})", moduli.join(", "))
        }
    }
}

/// Collects `coefficient*monomial` strings through nested truncated rings.
fn poly_terms(ring: &Ring, v: &Value, suffix: &str, terms: &mut Vec<String>) {
    match ring.kind() {
        RingKind::TruncSkew { base, var, .. } => {
            for (k, c) in v.nested().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let power = match k {
                    0 => String::new(),
                    1 => var.clone(),
                    _ => format!("{var}^{k}"),
                };
                let monomial = match (power.is_empty(), suffix.is_empty()) {
                    (true, _) => suffix.to_string(),
                    (false, true) => power,
                    (false, false) => format!("{power}*{suffix}"),
                };
                poly_terms(base, c, &monomial, terms);
            }
        }
        RingKind::Rationals if !suffix.is_empty() => {
            terms.push(scaled_monomial(&v.flat()[0], suffix))
        }
        _ => {
            let c = render(ring, v);
            if suffix.is_empty() {
                terms.push(c);
            } else if c.contains(" + ") || c.contains(" - ") {
                terms.push(format!("({c})*{suffix}"));
            } else {
                terms.push(format!("{c}*{suffix}"));
            }
        }
    }
}

fn collect_moduli(ring: &Ring, out: &mut Vec<String>) {
    if let RingKind::TruncSkew { base, t, var, .. } = ring.kind() {
        collect_moduli(base, out);
        out.push(format!("{var}^{t}"));
    }
}
