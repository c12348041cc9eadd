//! Standard polynomials `S_m(x_1, .., x_m) = sum_pi sgn(pi) x_pi(1) .. x_pi(m)`
//! and randomised checks of the identities they define.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AlgError, Result};
use crate::random::trial_rng;
use crate::report::{timed, CheckReport, Verdict, Witness};
use crate::ring::{Element, Ring, Value};

pub const DEFAULT_MAX_DEGREE: usize = 8;

/// Environment variable overriding the default factorial budget.
pub const MAX_DEGREE_ENV: &str = "SKEWALG_MAX_DEGREE";

/// Largest `m` for which `S_m` (`m!` signed products) may be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorialBudget {
    pub max_degree: usize,
}

impl Default for FactorialBudget {
    fn default() -> Self {
        FactorialBudget {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl FactorialBudget {
    pub fn new(max_degree: usize) -> FactorialBudget {
        FactorialBudget { max_degree }
    }

    /// Default budget, overridden by `SKEWALG_MAX_DEGREE` when set.
    pub fn from_env() -> Result<FactorialBudget> {
        match std::env::var(MAX_DEGREE_ENV) {
            Ok(v) => v.trim().parse().map(FactorialBudget::new).map_err(|_| {
                AlgError::InvalidParameter(format!("{MAX_DEGREE_ENV}={v:?} is not a degree"))
            }),
            Err(_) => Ok(FactorialBudget::default()),
        }
    }

    pub fn allows(&self, degree: usize) -> bool {
        degree <= self.max_degree
    }

    fn check(&self, degree: usize) -> Result<()> {
        if self.allows(degree) {
            Ok(())
        } else {
            Err(AlgError::BudgetExceeded {
                degree,
                max_degree: self.max_degree,
            })
        }
    }
}

/// Exact `S_m(args)`, summing all `m!` permutations in lexicographic order.
///
/// Products are built left to right and shared along common prefixes. The
/// subtrees under each first index are summed in parallel and combined in
/// index order.
pub fn standard_poly_eval(args: &[Element], budget: FactorialBudget) -> Result<Element> {
    let m = args.len();
    if m == 0 {
        return Err(AlgError::InvalidParameter("standard polynomial needs m >= 1".into()));
    }
    budget.check(m)?;
    let ring = args[0].ring().clone();
    for a in args {
        ring.check(a.ring())?;
    }
    // S_m is multilinear, so each argument can be rescaled to integer
    // coordinates and the product of the scales divided out at the end. This
    // keeps the enumeration free of gcd reductions.
    let mut scale = BigInt::one();
    let integral: Vec<Value<BigInt>> = args
        .iter()
        .map(|a| {
            let l = a.value.denominator_lcm();
            let v = a.value.to_integral(&l);
            scale *= l;
            v
        })
        .collect();
    let values: Vec<&Value<BigInt>> = integral.iter().collect();
    let partials: Vec<Value<BigInt>> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut used = vec![false; m];
            used[first] = true;
            let mut acc = ring.zero_v();
            let sign = if first % 2 == 0 { 1 } else { -1 };
            descend(&ring, &values, &mut used, 1, values[first], sign, &mut acc);
            acc
        })
        .collect();
    let mut total = ring.zero_v();
    for p in &partials {
        total.add_assign(p);
    }
    Ok(ring.wrap(Value::from_integral(&total, &scale)))
}

fn descend(
    ring: &Ring,
    args: &[&Value<BigInt>],
    used: &mut [bool],
    depth: usize,
    prefix: &Value<BigInt>,
    sign: i32,
    acc: &mut Value<BigInt>,
) {
    let m = args.len();
    if depth == m {
        if sign > 0 {
            acc.add_assign(prefix);
        } else {
            acc.sub_assign(prefix);
        }
        return;
    }
    let mut smaller_unused = 0;
    for i in 0..m {
        if used[i] {
            continue;
        }
        let s = if smaller_unused % 2 == 0 { sign } else { -sign };
        used[i] = true;
        let next = ring.mul_v(prefix, args[i]);
        descend(ring, args, used, depth + 1, &next, s, acc);
        used[i] = false;
        smaller_unused += 1;
    }
}

/// Inputs used by trial `trial` of a check seeded with `seed`.
pub fn trial_inputs(ring: &Ring, degree: usize, seed: u64, trial: u64) -> Vec<Element> {
    let mut rng = trial_rng(seed, trial);
    (0..degree).map(|_| ring.random_element(&mut rng)).collect()
}

/// Re-evaluates the standard polynomial on a witness's regenerated inputs.
pub fn replay_witness(ring: &Ring, degree: usize, witness: &Witness, budget: FactorialBudget) -> Result<Element> {
    let inputs = trial_inputs(ring, degree, witness.seed, witness.trial);
    standard_poly_eval(&inputs, budget)
}

fn witness(seed: u64, trial: u64, inputs: &[Element], value: &Element) -> Witness {
    Witness {
        seed,
        trial,
        inputs: inputs.iter().map(ToString::to_string).collect(),
        value: value.to_string(),
    }
}

fn base_report(name: &str, ring: &Ring, degree: usize, trials: usize, seed: u64, budget: FactorialBudget) -> CheckReport {
    let mut report = CheckReport::new(name)
        .param("ring", ring.to_string())
        .param("degree", degree)
        .param("exhaustive", false)
        .param("seed", seed)
        .param("max_degree", budget.max_degree);
    report.trials = trials;
    report
}

/// Evaluates `S_degree` on `trials` random tuples; passes iff every value is zero.
/// The first nonzero value is kept as a witness.
pub fn check_standard_identity(
    name: &str,
    ring: &Ring,
    degree: usize,
    trials: usize,
    seed: u64,
    budget: FactorialBudget,
) -> Result<CheckReport> {
    budget.check(degree)?;
    timed(|| {
        let mut report = base_report(name, ring, degree, trials, seed, budget);
        for trial in 0..trials as u64 {
            let inputs = trial_inputs(ring, degree, seed, trial);
            let value = standard_poly_eval(&inputs, budget)?;
            if !value.is_zero() {
                report.verdict = Verdict::Fail;
                report.witness = Some(witness(seed, trial, &inputs, &value));
                report.trials = trial as usize + 1;
                break;
            }
            if trials >= 10 && (trial + 1) % (trials as u64 / 10).max(1) == 0 {
                log::info!("{name}: {}/{trials} trials", trial + 1);
            }
        }
        Ok(report)
    })
}

/// Negative control: passes iff some random tuple gives `S_degree != 0`, and
/// records that tuple as the witness.
pub fn find_nonvanishing(
    name: &str,
    ring: &Ring,
    degree: usize,
    trials: usize,
    seed: u64,
    budget: FactorialBudget,
) -> Result<CheckReport> {
    budget.check(degree)?;
    timed(|| {
        let mut report = base_report(name, ring, degree, trials, seed, budget).param("expect", "nonzero");
        report.verdict = Verdict::Fail;
        for trial in 0..trials as u64 {
            let inputs = trial_inputs(ring, degree, seed, trial);
            let value = standard_poly_eval(&inputs, budget)?;
            if !value.is_zero() {
                report.verdict = Verdict::Pass;
                report.witness = Some(witness(seed, trial, &inputs, &value));
                report.trials = trial as usize + 1;
                break;
            }
        }
        Ok(report)
    })
}

fn require_commutative_base(skew_ring: &Ring) -> Result<()> {
    let (base, _, _) = skew_ring.skew_parts().ok_or_else(|| AlgError::DescriptorMismatch {
        expected: "a truncated skew polynomial ring".into(),
        found: skew_ring.to_string(),
    })?;
    if base.is_commutative() {
        Ok(())
    } else {
        Err(AlgError::NotCommutative(base.to_string()))
    }
}

/// `S_{2t} = 0` on `R[w, sigma]/(w^t)` for commutative `R`.
pub fn check_s2t_on_truncated(skew_ring: &Ring, trials: usize, seed: u64, budget: FactorialBudget) -> Result<CheckReport> {
    require_commutative_base(skew_ring)?;
    let (_, _, t) = skew_ring.skew_parts().expect("checked above");
    check_standard_identity("s2t-truncated", skew_ring, 2 * t, trials, seed, budget)
}

/// `S_{2tn} = 0` on `M_n(R[w, sigma]/(w^t))` for commutative `R`.
pub fn check_s2tn_on_matrices(
    skew_ring: &Ring,
    n: usize,
    trials: usize,
    seed: u64,
    budget: FactorialBudget,
) -> Result<CheckReport> {
    require_commutative_base(skew_ring)?;
    let (_, _, t) = skew_ring.skew_parts().expect("checked above");
    let ring = Ring::matrix(skew_ring, n)?;
    let report = check_standard_identity("s2tn-matrices", &ring, 2 * t * n, trials, seed, budget)?;
    Ok(report.param("n", n).param("t", t))
}

/// Evaluates `S_{2t}` on random tuples and on their `mu`-images in
/// `M_t(R[z]/(z^t))`; passes iff both vanish on every tuple.
pub fn check_s2t_transfer(skew_ring: &Ring, trials: usize, seed: u64, budget: FactorialBudget) -> Result<CheckReport> {
    require_commutative_base(skew_ring)?;
    let (_, _, t) = skew_ring.skew_parts().expect("checked above");
    let degree = 2 * t;
    budget.check(degree)?;
    timed(|| {
        let mut report = base_report("s2t-transfer-to-mu-image", skew_ring, degree, trials, seed, budget);
        for trial in 0..trials as u64 {
            let inputs = trial_inputs(skew_ring, degree, seed, trial);
            let value = standard_poly_eval(&inputs, budget)?;
            let images = inputs
                .iter()
                .map(crate::embed::embed_mu)
                .collect::<Result<Vec<_>>>()?;
            let image_value = standard_poly_eval(&images, budget)?;
            if !value.is_zero() || !image_value.is_zero() {
                report.verdict = Verdict::Fail;
                let shown = if value.is_zero() { &image_value } else { &value };
                report.witness = Some(witness(seed, trial, &inputs, shown));
                report.trials = trial as usize + 1;
                break;
            }
        }
        Ok(report)
    })
}

/// Instance of `S_{(m-1) t^2 n^2 + 1} = 0` on `M_n(R[w, sigma]/(w^t))` where
/// `S_m = 0` holds on `R`. Degrees beyond the budget give an `Infeasible`
/// report without evaluation.
pub fn check_pi_instance(
    base: &Ring,
    base_degree: usize,
    t: usize,
    n: usize,
    trials: usize,
    seed: u64,
    budget: FactorialBudget,
) -> Result<CheckReport> {
    if base_degree < 1 || t < 1 || n < 1 {
        return Err(AlgError::InvalidParameter("PI instance needs m, t, n >= 1".into()));
    }
    let degree = (base_degree - 1) * t * t * n * n + 1;
    let skew = Ring::trunc_skew_natural(base, t)?;
    let ring = Ring::matrix(&skew, n)?;
    let name = "pi-instance";
    if !budget.allows(degree) {
        let mut report = base_report(name, &ring, degree, 0, seed, budget)
            .param("base_identity_degree", base_degree)
            .param("t", t)
            .param("n", n);
        report.verdict = Verdict::Infeasible;
        return Ok(report);
    }
    // the hypothesis S_m = 0 on R, spot-checked
    if budget.allows(base_degree) {
        for trial in 0..5 {
            let inputs = trial_inputs(base, base_degree, seed ^ 0x5eed, trial);
            if !standard_poly_eval(&inputs, budget)?.is_zero() {
                return Err(AlgError::InvalidParameter(format!(
                    "S_{base_degree} is not an identity on {base}"
                )));
            }
        }
    }
    let report = check_standard_identity(name, &ring, degree, trials, seed, budget)?;
    Ok(report
        .param("base_identity_degree", base_degree)
        .param("t", t)
        .param("n", n))
}
