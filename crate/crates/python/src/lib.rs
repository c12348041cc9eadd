//! Python bindings: rings, elements, endomorphisms, the embeddings and the
//! verification suites.
//!
//! Rationals cross the boundary as `fractions.Fraction` on the way out and as
//! anything whose `str()` reads `p` or `p/q` (int, Fraction, str) on the way in.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use skewalg::embed::{self, GrassmannTower as CoreTower, SupermatrixShape};
use skewalg::identities::{self, FactorialBudget};
use skewalg::matrix::{self, CharCoefficients};
use skewalg::suite::{self, RingFamily, RunConfig, Suite};
use skewalg::{skew, AlgError, Rational};

fn err(e: AlgError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.trim()
        .parse::<Rational>()
        .map_err(|_| PyValueError::new_err(format!("not a rational number: {text:?}")))
}

fn to_fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

#[pyclass(name = "Ring", module = "skewalg", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Ring(skewalg::Ring);

#[pyclass(name = "Element", module = "skewalg", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Element(skewalg::Element);

#[pyclass(name = "Endomorphism", module = "skewalg", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Endomorphism(skewalg::Endomorphism);

#[pyclass(name = "GrassmannTower", module = "skewalg", frozen)]
struct GrassmannTower(CoreTower);

fn elements(xs: Vec<skewalg::Element>) -> Vec<Element> {
    xs.into_iter().map(Element).collect()
}

fn unwrap_all(xs: &[Element]) -> Vec<skewalg::Element> {
    xs.iter().map(|x| x.0.clone()).collect()
}

#[pymethods]
impl Ring {
    #[staticmethod]
    fn rationals() -> Ring {
        Ring(skewalg::Ring::rationals())
    }

    #[staticmethod]
    fn rotation(t: usize) -> PyResult<Ring> {
        skewalg::Ring::rotation(t).map(Ring).map_err(err)
    }

    #[staticmethod]
    fn gaussian() -> Ring {
        Ring(skewalg::Ring::gaussian())
    }

    #[staticmethod]
    fn grassmann(m: usize) -> PyResult<Ring> {
        skewalg::Ring::grassmann(m).map(Ring).map_err(err)
    }

    #[staticmethod]
    fn matrix(base: &Ring, n: usize) -> PyResult<Ring> {
        skewalg::Ring::matrix(&base.0, n).map(Ring).map_err(err)
    }

    /// `base[w, sigma]/(w^t)`; `sigma` defaults to the base ring's natural endomorphism.
    #[staticmethod]
    #[pyo3(signature = (base, t, sigma=None))]
    fn trunc_skew(base: &Ring, t: usize, sigma: Option<&Endomorphism>) -> PyResult<Ring> {
        match sigma {
            Some(s) => skewalg::Ring::trunc_skew(&base.0, &s.0, t),
            None => skewalg::Ring::trunc_skew_natural(&base.0, t),
        }
        .map(Ring)
        .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (base, t, var="z"))]
    fn trunc_comm(base: &Ring, t: usize, var: &str) -> PyResult<Ring> {
        skewalg::Ring::trunc_comm(&base.0, t, var).map(Ring).map_err(err)
    }

    #[staticmethod]
    fn trunc_poly(base: &Ring, vars: usize, t: usize) -> PyResult<Ring> {
        skewalg::Ring::trunc_poly(&base.0, vars, t).map(Ring).map_err(err)
    }

    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn is_commutative(&self) -> bool {
        self.0.is_commutative()
    }

    fn base(&self) -> Option<Ring> {
        self.0.base().cloned().map(Ring)
    }

    fn natural_endomorphism(&self) -> Endomorphism {
        Endomorphism(self.0.natural_endomorphism())
    }

    fn zero(&self) -> Element {
        Element(self.0.zero())
    }

    fn one(&self) -> Element {
        Element(self.0.one())
    }

    fn scalar(&self, q: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(Element(self.0.from_rational(&to_rational(q)?)))
    }

    fn from_coords(&self, coords: Vec<Bound<'_, PyAny>>) -> PyResult<Element> {
        let qs = coords.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?;
        self.0.from_coords(qs).map(Element).map_err(err)
    }

    fn tuple(&self, parts: Vec<Bound<'_, PyAny>>) -> PyResult<Element> {
        let qs = parts.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?;
        self.0.tuple(qs).map(Element).map_err(err)
    }

    fn gaussian_elem(&self, re: &Bound<'_, PyAny>, im: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.0
            .gaussian_elem(to_rational(re)?, to_rational(im)?)
            .map(Element)
            .map_err(err)
    }

    fn generator(&self, i: usize) -> PyResult<Element> {
        self.0.generator(i).map(Element).map_err(err)
    }

    fn monomial(&self, indices: Vec<usize>) -> PyResult<Element> {
        self.0.grassmann_monomial(&indices).map(Element).map_err(err)
    }

    fn matrix_from_rows(&self, rows: Vec<Vec<Element>>) -> PyResult<Element> {
        let rows = rows.iter().map(|r| unwrap_all(r)).collect();
        self.0.matrix_from_rows(rows).map(Element).map_err(err)
    }

    fn poly(&self, coeffs: Vec<Element>) -> PyResult<Element> {
        self.0.poly_from_coeffs(unwrap_all(&coeffs)).map(Element).map_err(err)
    }

    fn var_power(&self, k: usize) -> PyResult<Element> {
        self.0.var_power(k).map(Element).map_err(err)
    }

    /// Element drawn from the same generator the verification suites use.
    #[pyo3(signature = (seed, trial=0))]
    fn random(&self, seed: u64, trial: u64) -> Element {
        Element(self.0.random_element(&mut skewalg::random::trial_rng(seed, trial)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ring({})", self.0)
    }
}

#[pymethods]
impl Element {
    fn ring(&self) -> Ring {
        Ring(self.0.ring().clone())
    }

    fn __add__(&self, other: &Element) -> PyResult<Element> {
        self.0.add(&other.0).map(Element).map_err(err)
    }

    fn __sub__(&self, other: &Element) -> PyResult<Element> {
        self.0.sub(&other.0).map(Element).map_err(err)
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        self.0.mul(&other.0).map(Element).map_err(err)
    }

    fn __neg__(&self) -> Element {
        Element(self.0.neg())
    }

    fn __pow__(&self, k: usize, _modulo: Option<usize>) -> Element {
        Element(self.0.pow(k))
    }

    fn scale(&self, q: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(Element(self.0.scale(&to_rational(q)?)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn coords<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.coords().iter().map(|q| to_fraction(py, q)).collect()
    }

    /// Matrix entry, 0-based.
    fn entry(&self, i: usize, j: usize) -> PyResult<Element> {
        self.0.entry(i, j).map(Element).map_err(err)
    }

    fn rows(&self) -> PyResult<Vec<Vec<Element>>> {
        Ok(self.0.rows().map_err(err)?.into_iter().map(elements).collect())
    }

    fn coeffs(&self) -> PyResult<Vec<Element>> {
        self.0.coeffs().map(elements).map_err(err)
    }

    fn coeff(&self, k: usize) -> PyResult<Element> {
        self.0.coeff(k).map(Element).map_err(err)
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.0)
    }
}

#[pymethods]
impl Endomorphism {
    #[staticmethod]
    fn identity(ring: &Ring) -> Endomorphism {
        Endomorphism(skewalg::Endomorphism::identity(&ring.0))
    }

    #[staticmethod]
    fn natural(ring: &Ring) -> Endomorphism {
        Endomorphism(skewalg::Endomorphism::natural(&ring.0))
    }

    /// Entrywise or coefficientwise extension of `inner` to `ring`.
    #[staticmethod]
    fn lift(ring: &Ring, inner: &Endomorphism) -> PyResult<Endomorphism> {
        skewalg::Endomorphism::lift(&ring.0, &inner.0)
            .map(Endomorphism)
            .map_err(err)
    }

    fn ring(&self) -> Ring {
        Ring(self.0.ring().clone())
    }

    fn order(&self) -> usize {
        self.0.order()
    }

    fn __call__(&self, a: &Element) -> PyResult<Element> {
        self.0.apply(&a.0).map(Element).map_err(err)
    }

    fn apply_pow(&self, a: &Element, k: usize) -> PyResult<Element> {
        self.0.apply_pow(&a.0, k).map(Element).map_err(err)
    }

    fn fixes(&self, a: &Element) -> PyResult<bool> {
        self.0.fixes(&a.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Endomorphism({:?} on {})", self.0.action(), self.0.ring())
    }
}

#[pymethods]
impl GrassmannTower {
    #[new]
    fn new(m: usize) -> PyResult<GrassmannTower> {
        CoreTower::build(m).map(GrassmannTower).map_err(err)
    }

    fn m(&self) -> usize {
        self.0.m()
    }

    fn algebra(&self) -> Ring {
        Ring(self.0.algebra().clone())
    }

    fn target(&self) -> Ring {
        Ring(self.0.target().clone())
    }

    fn generator_image(&self, i: usize) -> PyResult<Element> {
        self.0.generator_image(i).cloned().map(Element).map_err(err)
    }

    fn __call__(&self, g: &Element) -> PyResult<Element> {
        self.0.apply(&g.0).map(Element).map_err(err)
    }

    fn generators_anticommute(&self) -> bool {
        self.0.generators_anticommute()
    }

    fn basis_image_rank(&self) -> usize {
        self.0.basis_image_rank()
    }

    fn has_constant_trace(&self, g: &Element) -> PyResult<bool> {
        self.0.has_constant_trace(&g.0).map_err(err)
    }
}

#[pyfunction]
fn skew_mul(f: &Element, g: &Element) -> PyResult<Element> {
    skew::skew_mul(&f.0, &g.0).map(Element).map_err(err)
}

#[pyfunction]
fn skew_mul_oracle(f: &Element, g: &Element) -> PyResult<Element> {
    skew::skew_mul_oracle(&f.0, &g.0).map(Element).map_err(err)
}

#[pyfunction]
fn mod_diff(i: usize, j: usize, t: usize) -> PyResult<usize> {
    embed::mod_diff(i, j, t).map_err(err)
}

#[pyfunction]
fn embed_mu(f: &Element) -> PyResult<Element> {
    embed::embed_mu(&f.0).map(Element).map_err(err)
}

#[pyfunction]
fn embed_mu_n(a: &Element) -> PyResult<Element> {
    embed::embed_mu_n(&a.0).map(Element).map_err(err)
}

/// The preimage of `m` under `mu`, or `None` when `m` is not in the image.
#[pyfunction]
fn mu_preimage(skew_ring: &Ring, m: &Element) -> PyResult<Option<Element>> {
    Ok(embed::mu_preimage(&skew_ring.0, &m.0).map_err(err)?.map(Element))
}

#[pyfunction]
fn mu_trace_check(f: &Element) -> PyResult<bool> {
    embed::mu_trace_check(&f.0).map_err(err)
}

#[pyfunction]
fn embed_theta(sigma: &Endomorphism, r: &Element) -> PyResult<Element> {
    embed::embed_theta(&sigma.0, &r.0).map(Element).map_err(err)
}

#[pyfunction]
fn theta_preimage(sigma: &Endomorphism, m: &Element) -> PyResult<Element> {
    embed::theta_preimage(&sigma.0, &m.0).map(Element).map_err(err)
}

#[pyfunction]
fn embed_theta_matrix(sigma: &Endomorphism, a: &Element) -> PyResult<Element> {
    embed::embed_theta_matrix(&sigma.0, &a.0).map(Element).map_err(err)
}

#[pyfunction]
fn is_supermatrix(a: &Element, n: usize, k: usize, sigma: &Endomorphism) -> PyResult<bool> {
    let shape = SupermatrixShape::new(n, k, &sigma.0).map_err(err)?;
    embed::is_supermatrix(&a.0, &shape).map_err(err)
}

#[pyfunction]
fn trace(a: &Element) -> PyResult<Element> {
    matrix::trace(&a.0).map(Element).map_err(err)
}

/// `[c_0, .., c_N]` with `det(xI - B) = sum_k c_k x^{N-k}` via Newton's formulae.
#[pyfunction]
fn newton_char_coeffs(b: &Element) -> PyResult<Vec<Element>> {
    Ok(elements(matrix::newton_char_coeffs(&b.0).map_err(err)?.0))
}

#[pyfunction]
fn brute_force_det(b: &Element) -> PyResult<Vec<Element>> {
    Ok(elements(matrix::brute_force_det(&b.0).map_err(err)?.0))
}

#[pyfunction]
fn cayley_hamilton_eval(a: &Element, coeffs: Vec<Element>) -> PyResult<Element> {
    matrix::cayley_hamilton_eval(&a.0, &CharCoefficients(unwrap_all(&coeffs)))
        .map(Element)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (args, max_degree=identities::DEFAULT_MAX_DEGREE))]
fn standard_poly_eval(args: Vec<Element>, max_degree: usize) -> PyResult<Element> {
    identities::standard_poly_eval(&unwrap_all(&args), FactorialBudget::new(max_degree))
        .map(Element)
        .map_err(err)
}

/// Runs a verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (
    suite,
    ring="rotation",
    t=2,
    n=None,
    m=None,
    k=None,
    trials=None,
    seed=suite::DEFAULT_SEED,
    max_degree=identities::DEFAULT_MAX_DEGREE,
))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    ring: &str,
    t: usize,
    n: Option<usize>,
    m: Option<usize>,
    k: Option<usize>,
    trials: Option<usize>,
    seed: u64,
    max_degree: usize,
) -> PyResult<String> {
    let config = RunConfig {
        ring: ring.parse::<RingFamily>().map_err(err)?,
        t,
        n,
        m,
        k,
        trials,
        seed,
        budget: FactorialBudget::new(max_degree),
        ..RunConfig::new(suite.parse::<Suite>().map_err(err)?)
    };
    let report = py.detach(|| suite::run_suite(&config)).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
#[pyo3(name = "skewalg")]
fn skewalg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Element>()?;
    m.add_class::<Endomorphism>()?;
    m.add_class::<GrassmannTower>()?;
    m.add_function(wrap_pyfunction!(skew_mul, m)?)?;
    m.add_function(wrap_pyfunction!(skew_mul_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(mod_diff, m)?)?;
    m.add_function(wrap_pyfunction!(embed_mu, m)?)?;
    m.add_function(wrap_pyfunction!(embed_mu_n, m)?)?;
    m.add_function(wrap_pyfunction!(mu_preimage, m)?)?;
    m.add_function(wrap_pyfunction!(mu_trace_check, m)?)?;
    m.add_function(wrap_pyfunction!(embed_theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_preimage, m)?)?;
    m.add_function(wrap_pyfunction!(embed_theta_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(is_supermatrix, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(newton_char_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_det, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_hamilton_eval, m)?)?;
    m.add_function(wrap_pyfunction!(standard_poly_eval, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
