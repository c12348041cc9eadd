//! Verification suites: named groups of randomised checks driven by a
//! [`RunConfig`], producing a [`RunReport`].
//!
//! Every check draws the inputs of trial `i` from `trial_rng(seed, i)`, so a
//! witness is reproduced from the run seed and its trial index alone.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::embed::{
    embed_mu, embed_mu_n, embed_theta, embed_theta_matrix, fixed_part, is_supermatrix, mu_preimage,
    mu_trace_check, random_supermatrix, theta_preimage, GrassmannTower, SupermatrixShape,
};
use crate::error::{AlgError, Result};
use crate::identities::{
    check_pi_instance, check_s2t_on_truncated, check_s2t_transfer, check_s2tn_on_matrices,
    check_standard_identity, find_nonvanishing, FactorialBudget, MAX_DEGREE_ENV,
};
use crate::matrix::{brute_force_det, cayley_hamilton_eval, newton_char_coeffs, trace, CharCoefficients, BRUTE_FORCE_DET_MAX};
use crate::random::{trial_rng, TrialRng};
use crate::report::{timed, CheckReport, RunReport, Verdict, Witness};
use crate::ring::{Element, Endomorphism, Ring};
use crate::skew::{centrality_check, skew_mul, skew_mul_oracle};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Mu,
    Theta,
    Supermatrix,
    CayleyHamilton,
    StandardIdentities,
    GrassmannTower,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Mu,
        Suite::Theta,
        Suite::Supermatrix,
        Suite::CayleyHamilton,
        Suite::StandardIdentities,
        Suite::GrassmannTower,
        Suite::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Mu => "mu",
            Suite::Theta => "theta",
            Suite::Supermatrix => "supermatrix",
            Suite::CayleyHamilton => "cayley-hamilton",
            Suite::StandardIdentities => "standard-identities",
            Suite::GrassmannTower => "grassmann-tower",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| AlgError::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Base ring family, each with its natural endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingFamily {
    /// `Q^t` with the cyclic rotation.
    Rotation,
    /// `E^(m)` with the parity involution.
    Grassmann,
    /// `Q[i]` with conjugation.
    Gaussian,
    /// `Q` with the identity.
    Rationals,
}

impl RingFamily {
    pub const ALL: [RingFamily; 4] = [
        RingFamily::Rotation,
        RingFamily::Grassmann,
        RingFamily::Gaussian,
        RingFamily::Rationals,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RingFamily::Rotation => "rotation",
            RingFamily::Grassmann => "grassmann",
            RingFamily::Gaussian => "gaussian",
            RingFamily::Rationals => "rationals",
        }
    }

    /// The base ring for truncation degree `t` and `m` Grassmann generators.
    pub fn base_ring(self, t: usize, m: usize) -> Result<Ring> {
        match self {
            RingFamily::Rotation => Ring::rotation(t),
            RingFamily::Grassmann => Ring::grassmann(m),
            RingFamily::Gaussian => Ok(Ring::gaussian()),
            RingFamily::Rationals => Ok(Ring::rationals()),
        }
    }
}

impl fmt::Display for RingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingFamily {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<RingFamily> {
        RingFamily::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| AlgError::InvalidParameter(format!("unknown ring family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Json,
}

/// What to run. Unset size parameters take per-suite defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub suite: Suite,
    pub ring: RingFamily,
    pub t: usize,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    /// Overrides every check's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    pub budget: FactorialBudget,
    pub format: OutputFormat,
    pub output: Option<std::path::PathBuf>,
}

impl RunConfig {
    pub fn new(suite: Suite) -> RunConfig {
        RunConfig {
            suite,
            ring: RingFamily::Rotation,
            t: 2,
            n: None,
            m: None,
            k: None,
            trials: None,
            seed: DEFAULT_SEED,
            budget: FactorialBudget::default(),
            format: OutputFormat::Text,
            output: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(match self.suite {
            Suite::Supermatrix | Suite::Theta => 2,
            _ => 1,
        })
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(match self.suite {
            Suite::GrassmannTower => 3,
            _ => 2,
        })
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(1)
    }

    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn base_ring(&self) -> Result<Ring> {
        self.ring.base_ring(self.t, self.m())
    }

    fn skew_ring(&self) -> Result<Ring> {
        Ring::trunc_skew_natural(&self.base_ring()?, self.t)
    }

    /// Rejects parameter combinations the suite cannot run.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(AlgError::InvalidParameter(msg));
        if self.t == 0 {
            return invalid("t must be >= 1".into());
        }
        if self.n() == 0 {
            return invalid("n must be >= 1".into());
        }
        if self.trials == Some(0) {
            return invalid("trials must be >= 1".into());
        }
        if self.ring == RingFamily::Grassmann && self.m() == 0 && self.suite != Suite::GrassmannTower {
            return invalid("a Grassmann base ring needs m >= 1".into());
        }
        match self.suite {
            Suite::All => Ok(()),
            Suite::Mu => self.skew_ring().map(drop),
            Suite::Theta => self.base_ring().map(drop),
            Suite::Supermatrix => {
                let base = self.base_ring()?;
                SupermatrixShape::new(self.n(), self.k(), &Endomorphism::natural(&base)).map(drop)
            }
            Suite::CayleyHamilton | Suite::StandardIdentities => {
                let skew = self.skew_ring()?;
                let base = skew.base().expect("skew ring has a base");
                if base.is_commutative() {
                    Ok(())
                } else {
                    Err(AlgError::NotCommutative(format!(
                        "{} needs a commutative base ring, got {base}",
                        self.suite
                    )))
                }
            }
            Suite::GrassmannTower => GrassmannTower::build(self.m()).map(drop),
        }
    }

    /// The parameters that determine the report's content.
    pub fn echo(&self) -> serde_json::Value {
        let mut echo = json!({
            "suite": self.suite.as_str(),
            "seed": self.seed,
            "trials": self.trials,
            "max_degree": self.budget.max_degree,
            "max_degree_env": MAX_DEGREE_ENV,
        });
        if self.suite != Suite::All {
            let obj = echo.as_object_mut().expect("object literal");
            obj.insert("ring".into(), json!(self.ring.as_str()));
            obj.insert("t".into(), json!(self.t));
            obj.insert("n".into(), json!(self.n()));
            obj.insert("m".into(), json!(self.m()));
            obj.insert("k".into(), json!(self.k()));
        }
        echo
    }
}

/// Validates `config` and runs its suite.
///
/// Invalid configurations are returned as errors. Once running, a check that
/// errors is recorded as a failed check carrying the error message.
pub fn run_suite(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let checks = match config.suite {
        Suite::Mu => mu_suite(config),
        Suite::Theta => theta_suite(config),
        Suite::Supermatrix => supermatrix_suite(config),
        Suite::CayleyHamilton => cayley_hamilton_suite(config),
        Suite::StandardIdentities => standard_identities_suite(config),
        Suite::GrassmannTower => tower_suite(config),
        Suite::All => acceptance_matrix(config),
    };
    let report = RunReport::new(config.echo(), checks);
    log::info!("suite {} finished: {}", config.suite, report.verdict.as_str());
    Ok(report)
}

/// Writes the report to `path`, or to stdout when no path is given.
pub fn emit_report(report: &RunReport, format: OutputFormat, path: Option<&std::path::Path>) -> std::io::Result<()> {
    let body = match format {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Text => report.to_text(),
    };
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

/// A failing trial's rendered inputs and offending value.
type Failure = Option<(Vec<String>, String)>;

fn render(xs: &[&Element]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

/// Runs `body` for every trial and keeps the lowest failing trial as the
/// witness, so the outcome does not depend on the worker count.
fn run_trials<F>(report: CheckReport, trials: usize, seed: u64, body: F) -> Result<CheckReport>
where
    F: Fn(&mut TrialRng) -> Result<Failure> + Sync,
{
    timed(|| {
        let outcomes = (0..trials as u64)
            .into_par_iter()
            .map(|trial| body(&mut trial_rng(seed, trial)))
            .collect::<Result<Vec<Failure>>>()?;
        let mut report = report.param("seed", seed);
        report.trials = trials;
        if let Some((trial, (inputs, value))) = outcomes
            .into_iter()
            .enumerate()
            .find_map(|(i, f)| f.map(|w| (i, w)))
        {
            report.verdict = Verdict::Fail;
            report.witness = Some(Witness {
                seed,
                trial: trial as u64,
                inputs,
                value,
            });
        }
        Ok(report)
    })
}

/// Turns an error raised while running a check into a failed check.
fn settle(name: &str, result: Result<CheckReport>) -> CheckReport {
    match result {
        Ok(report) => report,
        Err(e) => {
            log::warn!("{name}: {e}");
            let mut report = CheckReport::new(name).param("error", e.to_string());
            report.verdict = Verdict::Fail;
            report
        }
    }
}

/// A check that is over the factorial budget is reported, not run.
fn budgeted(name: &str, ring: &Ring, result: Result<CheckReport>) -> CheckReport {
    match result {
        Err(AlgError::BudgetExceeded { degree, max_degree }) => {
            let mut report = CheckReport::new(name)
                .param("ring", ring.to_string())
                .param("degree", degree)
                .param("max_degree", max_degree);
            report.verdict = Verdict::Infeasible;
            report
        }
        other => settle(name, other),
    }
}

fn differs(label: &str, lhs: &Element, rhs: &Element) -> Result<Option<String>> {
    Ok(if lhs == rhs {
        None
    } else {
        Some(format!("{label}: difference {}", lhs.sub(rhs)?))
    })
}

// ---- individual checks -------------------------------------------------

pub fn check_mu_homomorphism(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("mu-homomorphism").param("ring", skew.to_string());
    run_trials(report, trials, seed, |rng| {
        let f = skew.random_element(rng);
        let g = skew.random_element(rng);
        let (mf, mg) = (embed_mu(&f)?, embed_mu(&g)?);
        let sum = differs("mu(f+g) - (mu(f)+mu(g))", &embed_mu(&f.add(&g)?)?, &mf.add(&mg)?)?;
        let prod = differs("mu(fg) - mu(f)mu(g)", &embed_mu(&f.mul(&g)?)?, &mf.mul(&mg)?)?;
        Ok(sum.or(prod).map(|v| (render(&[&f, &g]), v)))
    })
}

pub fn check_skew_mul_oracle(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("skew-mul-matches-rewriting").param("ring", skew.to_string());
    run_trials(report, trials, seed, |rng| {
        let f = skew.random_element(rng);
        let g = skew.random_element(rng);
        let v = differs("fg - oracle(fg)", &skew_mul(&f, &g)?, &skew_mul_oracle(&f, &g)?)?;
        Ok(v.map(|v| (render(&[&f, &g]), v)))
    })
}

pub fn check_mu_injectivity(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("mu-preimage-roundtrip").param("ring", skew.to_string());
    run_trials(report, trials, seed, |rng| {
        let f = skew.random_element(rng);
        let image = embed_mu(&f)?;
        Ok(match mu_preimage(skew, &image)? {
            Some(back) if back == f && (!image.is_zero() || f.is_zero()) => None,
            Some(back) => Some((render(&[&f]), format!("preimage {back}"))),
            None => Some((render(&[&f]), "image not recognised".into())),
        })
    })
}

pub fn check_mu_trace(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("mu-trace-fixed-constant").param("ring", skew.to_string());
    run_trials(report, trials, seed, |rng| {
        let f = skew.random_element(rng);
        Ok(if mu_trace_check(&f)? {
            None
        } else {
            Some((render(&[&f]), format!("trace {}", trace(&embed_mu(&f)?)?)))
        })
    })
}

/// At `t = 2`, `mu(r0 + r1 w)` is `[[r0, r1 z], [sigma(r1) z, sigma(r0)]]`.
pub fn check_mu_two_by_two(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let (base, sigma, t) = skew.skew_parts().ok_or_else(|| AlgError::DescriptorMismatch {
        expected: "a truncated skew polynomial ring".into(),
        found: skew.to_string(),
    })?;
    if t != 2 {
        return Err(AlgError::InvalidParameter(format!("the 2x2 shape needs t = 2, got {t}")));
    }
    let report = CheckReport::new("mu-two-by-two-shape").param("ring", skew.to_string());
    let zring = Ring::trunc_comm(base, 2, "z")?;
    run_trials(report, trials, seed, |rng| {
        let f = skew.random_element(rng);
        let (r0, r1) = (f.coeff(0)?, f.coeff(1)?);
        let expected = [
            zring.poly_from_coeffs(vec![r0.clone()])?,
            zring.poly_from_coeffs(vec![base.zero(), r1.clone()])?,
            zring.poly_from_coeffs(vec![base.zero(), sigma.apply(&r1)?])?,
            zring.poly_from_coeffs(vec![sigma.apply(&r0)?])?,
        ];
        let image = embed_mu(&f)?;
        for (idx, want) in expected.iter().enumerate() {
            let got = image.entry(idx / 2, idx % 2)?;
            if got != *want {
                let v = format!("entry ({}, {}) is {got}, expected {want}", idx / 2 + 1, idx % 2 + 1);
                return Ok(Some((render(&[&f]), v)));
            }
        }
        Ok(None)
    })
}

pub fn check_w_power_central(skew: &Ring, trials: usize, seed: u64) -> Result<CheckReport> {
    let (base, sigma, t) = skew.skew_parts().ok_or_else(|| AlgError::DescriptorMismatch {
        expected: "a truncated skew polynomial ring".into(),
        found: skew.to_string(),
    })?;
    let report = CheckReport::new("w-power-central").param("ring", skew.to_string());
    run_trials(report, trials, seed, |rng| {
        let r = base.random_element(rng);
        Ok(if centrality_check(sigma, t, std::slice::from_ref(&r))? {
            None
        } else {
            Some((render(&[&r]), format!("w^{t} r != r w^{t}")))
        })
    })
}

pub fn check_mu_n(skew: &Ring, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(skew, n)?;
    let report = CheckReport::new("mu-n-homomorphism-and-trace").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let b = ring.random_element(rng);
        let (ma, mb) = (embed_mu_n(&a)?, embed_mu_n(&b)?);
        let mut fail = differs("mu_n(a+b) - (mu_n(a)+mu_n(b))", &embed_mu_n(&a.add(&b)?)?, &ma.add(&mb)?)?;
        if fail.is_none() {
            fail = differs("mu_n(ab) - mu_n(a)mu_n(b)", &embed_mu_n(&a.mul(&b)?)?, &ma.mul(&mb)?)?;
        }
        if fail.is_none() {
            let mut blocks = trace(&embed_mu(&a.entry(0, 0)?)?)?;
            for i in 1..n {
                blocks = blocks.add(&trace(&embed_mu(&a.entry(i, i)?)?)?)?;
            }
            fail = differs("tr(mu_n(a)) - sum of block traces", &trace(&ma)?, &blocks)?;
        }
        Ok(fail.map(|v| (render(&[&a, &b]), v)))
    })
}

pub fn check_theta_homomorphism(sigma: &Endomorphism, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = sigma.ring().clone();
    let report = CheckReport::new("theta-homomorphism").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let r = ring.random_element(rng);
        let s = ring.random_element(rng);
        let (tr, ts) = (embed_theta(sigma, &r)?, embed_theta(sigma, &s)?);
        let sum = differs("theta(r+s) - (theta(r)+theta(s))", &embed_theta(sigma, &r.add(&s)?)?, &tr.add(&ts)?)?;
        let prod = differs("theta(rs) - theta(r)theta(s)", &embed_theta(sigma, &r.mul(&s)?)?, &tr.mul(&ts)?)?;
        Ok(sum.or(prod).map(|v| (render(&[&r, &s]), v)))
    })
}

pub fn check_theta_injectivity(sigma: &Endomorphism, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = sigma.ring().clone();
    let report = CheckReport::new("theta-preimage-roundtrip").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let r = ring.random_element(rng);
        let back = theta_preimage(sigma, &embed_theta(sigma, &r)?)?;
        Ok(differs("preimage - r", &back, &r)?.map(|v| (render(&[&r]), v)))
    })
}

pub fn check_theta_image_supermatrix(sigma: &Endomorphism, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = sigma.ring().clone();
    let shape = SupermatrixShape::new(2, 1, sigma)?;
    let report = CheckReport::new("theta-image-supermatrix").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let r = ring.random_element(rng);
        let image = embed_theta(sigma, &r)?;
        Ok(if is_supermatrix(&image, &shape)? {
            None
        } else {
            Some((render(&[&r]), format!("theta(r) = {image}")))
        })
    })
}

/// `Theta` on `M_n(R)`: homomorphism and image in `(sigma, 2n, n)`-supermatrices.
pub fn check_theta_matrix(sigma: &Endomorphism, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(sigma.ring(), n)?;
    let shape = SupermatrixShape::new(2 * n, n, sigma)?;
    let report = CheckReport::new("theta-matrix-supermatrix").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let b = ring.random_element(rng);
        let (ta, tb) = (embed_theta_matrix(sigma, &a)?, embed_theta_matrix(sigma, &b)?);
        let mut fail = differs("theta(ab) - theta(a)theta(b)", &embed_theta_matrix(sigma, &a.mul(&b)?)?, &ta.mul(&tb)?)?;
        if fail.is_none() && !is_supermatrix(&ta, &shape)? {
            fail = Some(format!("theta(a) = {ta} is not a supermatrix"));
        }
        Ok(fail.map(|v| (render(&[&a, &b]), v)))
    })
}

/// Sums, products and `sigma`-fixed multiples of conforming matrices conform.
pub fn check_supermatrix_closure(shape: &SupermatrixShape, trials: usize, seed: u64) -> Result<CheckReport> {
    let base = shape.sigma().ring().clone();
    let report = CheckReport::new("supermatrix-closure")
        .param("ring", base.to_string())
        .param("n", shape.n())
        .param("k", shape.k());
    run_trials(report, trials, seed, |rng| {
        let a = random_supermatrix(shape, rng)?;
        let b = random_supermatrix(shape, rng)?;
        let c = fixed_part(shape.sigma(), &base.random_element(rng))?;
        let scaled = crate::matrix::diag(&base, &vec![c.clone(); shape.n()])?;
        let candidates = [
            ("a + b", a.add(&b)?),
            ("a b", a.mul(&b)?),
            ("c a", scaled.mul(&a)?),
        ];
        for (label, m) in candidates {
            if !is_supermatrix(&m, shape)? {
                return Ok(Some((render(&[&a, &b, &c]), format!("{label} = {m}"))));
            }
        }
        Ok(None)
    })
}

/// Characteristic coefficients of `B = mu_n(A)` are `sigma`-fixed constants.
/// Returns them as elements of the base ring.
fn base_char_coeffs(a: &Element) -> Result<(Element, CharCoefficients, std::result::Result<CharCoefficients, String>)> {
    let b = embed_mu_n(a)?;
    let c = newton_char_coeffs(&b)?;
    let skew = a.ring().base().expect("matrix ring has a base");
    let (_, sigma, _) = skew.skew_parts().expect("entries are skew polynomials");
    let mut lowered = Vec::with_capacity(c.0.len());
    for (k, ck) in c.0.iter().enumerate() {
        if !ck.is_constant() {
            return Ok((b, c.clone(), Err(format!("c_{k} = {ck} is not constant"))));
        }
        let r = ck.coeff(0)?;
        if !sigma.fixes(&r)? {
            return Ok((b, c.clone(), Err(format!("c_{k} = {r} is not sigma-fixed"))));
        }
        lowered.push(r);
    }
    Ok((b, c, Ok(CharCoefficients(lowered))))
}

pub fn check_char_coeffs_fixed(skew: &Ring, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(skew, n)?;
    let report = CheckReport::new("char-coeffs-fixed-constants").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let (_, _, lowered) = base_char_coeffs(&a)?;
        Ok(lowered.err().map(|v| (render(&[&a]), v)))
    })
}

/// `A^{tn} + c_1 A^{tn-1} + .. + c_{tn} I = 0` in `M_n(R[w, sigma]/(w^t))`.
pub fn check_cayley_hamilton_skew(skew: &Ring, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(skew, n)?;
    let report = CheckReport::new("cayley-hamilton-skew-side").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let (_, _, lowered) = base_char_coeffs(&a)?;
        let c = match lowered {
            Ok(c) => c,
            Err(v) => return Ok(Some((render(&[&a]), v))),
        };
        let value = cayley_hamilton_eval(&a, &c)?;
        Ok((!value.is_zero()).then(|| (render(&[&a]), value.to_string())))
    })
}

/// The same identity for `B = mu_n(A)` in `M_{tn}(R[z]/(z^t))`.
pub fn check_cayley_hamilton_image(skew: &Ring, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(skew, n)?;
    let report = CheckReport::new("cayley-hamilton-image-side").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let (b, c, _) = base_char_coeffs(&a)?;
        let value = cayley_hamilton_eval(&b, &c)?;
        Ok((!value.is_zero()).then(|| (render(&[&a]), value.to_string())))
    })
}

/// Newton coefficients against the permutation expansion of `det(xI - B)`
/// for random `size x size` matrices over a commutative ring.
pub fn check_newton_vs_det(base: &Ring, size: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(base, size)?;
    let report = CheckReport::new("newton-vs-determinant").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let b = ring.random_element(rng);
        let newton = newton_char_coeffs(&b)?;
        let det = brute_force_det(&b)?;
        for (k, (x, y)) in newton.0.iter().zip(&det.0).enumerate() {
            if x != y {
                return Ok(Some((render(&[&b]), format!("c_{k}: newton {x}, determinant {y}"))));
            }
        }
        Ok(None)
    })
}

/// Newton coefficients of `mu_n(A)` against its permutation determinant.
pub fn check_newton_vs_det_image(skew: &Ring, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let ring = Ring::matrix(skew, n)?;
    let report = CheckReport::new("newton-vs-determinant-image").param("ring", ring.to_string());
    run_trials(report, trials, seed, |rng| {
        let a = ring.random_element(rng);
        let b = embed_mu_n(&a)?;
        let newton = newton_char_coeffs(&b)?;
        let det = brute_force_det(&b)?;
        Ok((newton != det).then(|| (render(&[&a]), "newton and determinant coefficients differ".into())))
    })
}

pub fn check_tower_anticommute(tower: &GrassmannTower) -> Result<CheckReport> {
    timed(|| {
        let mut report = CheckReport::new("tower-generators-anticommute")
            .param("m", tower.m())
            .param("exhaustive", true);
        let pairs = tower.m() * (tower.m() + 1) / 2;
        report.trials = pairs;
        if !tower.generators_anticommute() {
            report.verdict = Verdict::Fail;
        }
        Ok(report)
    })
}

pub fn check_tower_independent(tower: &GrassmannTower) -> Result<CheckReport> {
    timed(|| {
        let expected = 1usize << tower.m();
        let rank = tower.basis_image_rank();
        let mut report = CheckReport::new("tower-basis-images-independent")
            .param("m", tower.m())
            .param("rank", rank)
            .param("exhaustive", true);
        report.trials = expected;
        if rank != expected {
            report.verdict = Verdict::Fail;
        }
        Ok(report)
    })
}

pub fn check_tower_constant_trace(tower: &GrassmannTower, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("tower-constant-trace").param("m", tower.m());
    run_trials(report, trials, seed, |rng| {
        let g = tower.algebra().random_element(rng);
        Ok(if tower.has_constant_trace(&g)? {
            None
        } else {
            Some((render(&[&g]), format!("trace {}", trace(&tower.apply(&g)?)?)))
        })
    })
}

pub fn check_tower_multiplicative(tower: &GrassmannTower, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("tower-multiplicative").param("m", tower.m());
    run_trials(report, trials, seed, |rng| {
        let g = tower.algebra().random_element(rng);
        let h = tower.algebra().random_element(rng);
        let lhs = tower.apply(&g.mul(&h)?)?;
        let rhs = tower.apply(&g)?.mul(&tower.apply(&h)?)?;
        Ok(differs("eps(gh) - eps(g)eps(h)", &lhs, &rhs)?.map(|v| (render(&[&g, &h]), v)))
    })
}

/// The inductive construction agrees with the product of generator images.
pub fn check_tower_recursive(tower: &GrassmannTower, trials: usize, seed: u64) -> Result<CheckReport> {
    let report = CheckReport::new("tower-induction-agrees").param("m", tower.m());
    run_trials(report, trials, seed, |rng| {
        let g = tower.algebra().random_element(rng);
        let v = differs("recursive - product", &tower.apply_recursive(&g)?, &tower.apply(&g)?)?;
        Ok(v.map(|v| (render(&[&g]), v)))
    })
}

// ---- suites ------------------------------------------------------------

fn mu_checks(skew: &Ring, n: usize, trials: Option<usize>, seed: u64, out: &mut Vec<CheckReport>) {
    let tr = |d| trials.unwrap_or(d);
    out.push(settle("mu-homomorphism", check_mu_homomorphism(skew, tr(1000), seed)));
    out.push(settle("skew-mul-matches-rewriting", check_skew_mul_oracle(skew, tr(1000), seed)));
    out.push(settle("mu-preimage-roundtrip", check_mu_injectivity(skew, tr(1000), seed)));
    out.push(settle("mu-trace-fixed-constant", check_mu_trace(skew, tr(1000), seed)));
    out.push(settle("w-power-central", check_w_power_central(skew, tr(100), seed)));
    if skew.skew_parts().map(|p| p.2) == Some(2) {
        out.push(settle("mu-two-by-two-shape", check_mu_two_by_two(skew, tr(100), seed)));
    }
    if n > 1 {
        out.push(settle("mu-n-homomorphism-and-trace", check_mu_n(skew, n, tr(100), seed)));
    }
}

fn mu_suite(config: &RunConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    match config.skew_ring() {
        Ok(skew) => mu_checks(&skew, config.n(), config.trials, config.seed, &mut out),
        Err(e) => out.push(settle("mu", Err(e))),
    }
    out
}

fn theta_checks(sigma: &Endomorphism, n: usize, trials: Option<usize>, seed: u64, out: &mut Vec<CheckReport>) {
    let tr = |d| trials.unwrap_or(d);
    out.push(settle("theta-homomorphism", check_theta_homomorphism(sigma, tr(1000), seed)));
    out.push(settle("theta-preimage-roundtrip", check_theta_injectivity(sigma, tr(1000), seed)));
    // block conditions only describe the image when sigma is an involution
    if sigma.order() <= 2 {
        out.push(settle("theta-image-supermatrix", check_theta_image_supermatrix(sigma, tr(1000), seed)));
        out.push(settle("theta-matrix-supermatrix", check_theta_matrix(sigma, n, tr(100), seed)));
    }
}

fn theta_suite(config: &RunConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    match config.base_ring() {
        Ok(base) => theta_checks(&Endomorphism::natural(&base), config.n(), config.trials, config.seed, &mut out),
        Err(e) => out.push(settle("theta", Err(e))),
    }
    out
}

fn supermatrix_suite(config: &RunConfig) -> Vec<CheckReport> {
    let result = config.base_ring().and_then(|base| {
        let shape = SupermatrixShape::new(config.n(), config.k(), &Endomorphism::natural(&base))?;
        check_supermatrix_closure(&shape, config.trials_or(500), config.seed)
    });
    vec![settle("supermatrix-closure", result)]
}

fn cayley_hamilton_checks(skew: &Ring, n: usize, trials: Option<usize>, seed: u64, out: &mut Vec<CheckReport>) {
    let tr = trials.unwrap_or(50);
    out.push(settle("char-coeffs-fixed-constants", check_char_coeffs_fixed(skew, n, tr, seed)));
    out.push(settle("cayley-hamilton-skew-side", check_cayley_hamilton_skew(skew, n, tr, seed)));
    out.push(settle("cayley-hamilton-image-side", check_cayley_hamilton_image(skew, n, tr, seed)));
    let (_, _, t) = skew.skew_parts().expect("skew ring");
    if t * n <= BRUTE_FORCE_DET_MAX {
        out.push(settle("newton-vs-determinant-image", check_newton_vs_det_image(skew, n, tr, seed)));
    }
}

fn cayley_hamilton_suite(config: &RunConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    match config.skew_ring() {
        Ok(skew) => {
            cayley_hamilton_checks(&skew, config.n(), config.trials, config.seed, &mut out);
            let base = skew.base().expect("skew ring").clone();
            let size = (config.t * config.n()).min(BRUTE_FORCE_DET_MAX);
            out.push(settle(
                "newton-vs-determinant",
                check_newton_vs_det(&base, size, config.trials_or(100), config.seed),
            ));
        }
        Err(e) => out.push(settle("cayley-hamilton", Err(e))),
    }
    out
}

fn standard_identities_suite(config: &RunConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let skew = match config.skew_ring() {
        Ok(s) => s,
        Err(e) => return vec![settle("standard-identities", Err(e))],
    };
    let (base, _, t) = skew.skew_parts().expect("skew ring");
    let base = base.clone();
    let (seed, budget, n) = (config.seed, config.budget, config.n());
    let tr = |d| config.trials.unwrap_or(d);
    let default_trials = if t <= 2 { 200 } else { 100 };
    out.push(budgeted("s2t-truncated", &skew, check_s2t_on_truncated(&skew, tr(default_trials), seed, budget)));
    out.push(budgeted(
        "s2t-transfer-to-mu-image",
        &skew,
        check_s2t_transfer(&skew, tr(default_trials / 2), seed, budget),
    ));
    if n > 1 {
        let ring = Ring::matrix(&skew, n).expect("n >= 1");
        out.push(budgeted("s2tn-matrices", &ring, check_s2tn_on_matrices(&skew, n, tr(20), seed, budget)));
    }
    if !skew.is_commutative() {
        out.push(budgeted(
            "s3-nonvanishing",
            &skew,
            find_nonvanishing("s3-nonvanishing", &skew, 3, tr(100), seed, budget),
        ));
    }
    let m2q = Ring::matrix(&Ring::rationals(), 2).expect("n = 2");
    out.push(budgeted(
        "amitsur-levitzki-s4",
        &m2q,
        check_standard_identity("amitsur-levitzki-s4", &m2q, 4, tr(200), seed, budget),
    ));
    out.push(settle("pi-instance", check_pi_instance(&base, 2, t, n, tr(50), seed, budget)));
    out
}

fn tower_checks(m: usize, trials: Option<usize>, seed: u64, out: &mut Vec<CheckReport>) {
    let tower = match GrassmannTower::build(m) {
        Ok(t) => t,
        Err(e) => return out.push(settle("grassmann-tower", Err(e))),
    };
    let tr = trials.unwrap_or(200);
    out.push(settle("tower-generators-anticommute", check_tower_anticommute(&tower)));
    out.push(settle("tower-basis-images-independent", check_tower_independent(&tower)));
    out.push(settle("tower-constant-trace", check_tower_constant_trace(&tower, tr, seed)));
    out.push(settle("tower-multiplicative", check_tower_multiplicative(&tower, tr, seed)));
    out.push(settle("tower-induction-agrees", check_tower_recursive(&tower, trials.unwrap_or(20), seed)));
}

fn tower_suite(config: &RunConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    tower_checks(config.m(), config.trials, config.seed, &mut out);
    out
}

fn natural_skew(base: Result<Ring>, t: usize) -> Result<Ring> {
    Ring::trunc_skew_natural(&base?, t)
}

/// The default acceptance matrix run by `all`.
fn acceptance_matrix(config: &RunConfig) -> Vec<CheckReport> {
    let (seed, budget, trials) = (config.seed, config.budget, config.trials);
    let tr = |d| trials.unwrap_or(d);
    let mut out = Vec::new();

    // mu on the standard configurations
    let mu_configs = [
        natural_skew(Ring::rotation(2), 2),
        natural_skew(Ring::rotation(3), 3),
        natural_skew(Ring::rotation(4), 4),
        natural_skew(Ring::grassmann(3), 2),
        natural_skew(Ok(Ring::gaussian()), 2),
    ];
    for skew in mu_configs {
        match skew {
            Ok(skew) => mu_checks(&skew, 1, trials, seed, &mut out),
            Err(e) => out.push(settle("mu", Err(e))),
        }
    }

    // Cayley-Hamilton over rotation rings
    for (t, n) in [(2, 1), (2, 2), (3, 1)] {
        match natural_skew(Ring::rotation(t), t) {
            Ok(skew) => cayley_hamilton_checks(&skew, n, trials, seed, &mut out),
            Err(e) => out.push(settle("cayley-hamilton", Err(e))),
        }
    }
    for size in [2, 3, 4] {
        out.push(settle(
            "newton-vs-determinant",
            check_newton_vs_det(&Ring::rationals(), size, tr(100), seed),
        ));
    }

    // standard identities
    match (natural_skew(Ring::rotation(2), 2), natural_skew(Ring::rotation(3), 3)) {
        (Ok(s2), Ok(s3)) => {
            out.push(budgeted("s2t-truncated", &s2, check_s2t_on_truncated(&s2, tr(200), seed, budget)));
            out.push(budgeted("s2t-truncated", &s3, check_s2t_on_truncated(&s3, tr(100), seed, budget)));
            out.push(budgeted("s2t-transfer-to-mu-image", &s2, check_s2t_transfer(&s2, tr(100), seed, budget)));
            let m2 = Ring::matrix(&s2, 2).expect("n = 2");
            out.push(budgeted("s2tn-matrices", &m2, check_s2tn_on_matrices(&s2, 2, tr(20), seed, budget)));
            out.push(budgeted(
                "s3-nonvanishing",
                &s2,
                find_nonvanishing("s3-nonvanishing", &s2, 3, tr(100), seed, budget),
            ));
        }
        (Err(e), _) | (_, Err(e)) => out.push(settle("standard-identities", Err(e))),
    }
    let m2q = Ring::matrix(&Ring::rationals(), 2).expect("n = 2");
    out.push(budgeted(
        "amitsur-levitzki-s4",
        &m2q,
        check_standard_identity("amitsur-levitzki-s4", &m2q, 4, tr(200), seed, budget),
    ));

    // PI instances: S_5 on M_2(Q), on Q^2[w, sigma]/(w^2), and S_17 which is out of reach
    out.push(settle("pi-instance", check_pi_instance(&Ring::rationals(), 2, 1, 2, tr(50), seed, budget)));
    match Ring::rotation(2) {
        Ok(q2) => {
            out.push(settle("pi-instance", check_pi_instance(&q2, 2, 2, 1, tr(50), seed, budget)));
            out.push(settle("pi-instance", check_pi_instance(&q2, 2, 2, 2, tr(50), seed, budget)));
        }
        Err(e) => out.push(settle("pi-instance", Err(e))),
    }

    // supermatrices and Theta over E^(2) with the parity involution
    match Ring::grassmann(2) {
        Ok(e2) => {
            let tau = Endomorphism::natural(&e2);
            for (n, k) in [(2, 1), (3, 1), (4, 2)] {
                let result = SupermatrixShape::new(n, k, &tau).and_then(|s| check_supermatrix_closure(&s, tr(500), seed));
                out.push(settle("supermatrix-closure", result));
            }
            theta_checks(&tau, 2, trials, seed, &mut out);
        }
        Err(e) => out.push(settle("supermatrix", Err(e))),
    }
    let conj = Endomorphism::natural(&Ring::gaussian());
    out.push(settle("theta-homomorphism", check_theta_homomorphism(&conj, tr(1000), seed)));
    out.push(settle("theta-preimage-roundtrip", check_theta_injectivity(&conj, tr(1000), seed)));

    // Grassmann tower
    for m in 1..=4 {
        tower_checks(m, trials, seed, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> RunConfig {
        RunConfig {
            trials: Some(3),
            ..RunConfig::new(suite)
        }
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        for f in RingFamily::ALL {
            assert_eq!(f.as_str().parse::<RingFamily>().unwrap(), f);
        }
    }

    #[test]
    fn zero_t_rejected() {
        let config = RunConfig { t: 0, ..RunConfig::new(Suite::Mu) };
        assert!(run_suite(&config).is_err());
    }

    #[test]
    fn odd_t_with_involution_rejected() {
        let config = RunConfig {
            ring: RingFamily::Gaussian,
            t: 3,
            ..RunConfig::new(Suite::Mu)
        };
        assert!(matches!(
            run_suite(&config),
            Err(AlgError::SigmaOrderMismatch { order: 2, t: 3 })
        ));
    }

    #[test]
    fn cayley_hamilton_needs_commutative_base() {
        let config = RunConfig {
            ring: RingFamily::Grassmann,
            ..RunConfig::new(Suite::CayleyHamilton)
        };
        assert!(matches!(run_suite(&config), Err(AlgError::NotCommutative(_))));
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Mu, Suite::Theta, Suite::Supermatrix, Suite::CayleyHamilton, Suite::GrassmannTower] {
            let report = run_suite(&small(suite)).unwrap();
            assert_eq!(report.verdict, Verdict::Pass, "{}", report.to_text());
        }
    }

    #[test]
    fn check_errors_become_failures() {
        let report = settle("x", Err(AlgError::NotInImage));
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.params.contains_key("error"));
    }

    #[test]
    fn over_budget_is_infeasible() {
        let ring = Ring::rationals();
        let report = budgeted("x", &ring, Err(AlgError::BudgetExceeded { degree: 12, max_degree: 8 }));
        assert_eq!(report.verdict, Verdict::Infeasible);
    }
}
