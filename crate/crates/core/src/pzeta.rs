//! Partition zeta functions of the binomial measures and their abscissa
//! spectrum σ(α).

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{regularity_value, BinomialMeasureSpec, RegularityIndex};
use crate::rational::{format_rational, format_rational_compact, ln_biguint};

/// Depths used by the growth-rate extrapolation.
pub const ABSCISSA_DEPTHS: [u64; 4] = [64, 128, 256, 512];
pub const ABSCISSA_TOL: f64 = 1e-6;
/// Slack allowed when checking that α lies in `[α_min, α_max]`.
const ALPHA_SLACK: f64 = 1e-12;

/// `ζ(α, s) = Σ_{n≥1} C(n k2, n k1) h^{-k2 n s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionZeta {
    pub spec: BinomialMeasureSpec,
    pub idx: RegularityIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub n_terms: usize,
    /// Bound on the omitted tail; `None` when the series diverges at `s`.
    pub tail_bound: Option<f64>,
    pub converges: bool,
}

impl PartitionZeta {
    pub fn new(spec: BinomialMeasureSpec, idx: RegularityIndex) -> Self {
        Self { spec, idx }
    }

    pub fn alpha(&self) -> f64 {
        regularity_value(&self.spec, self.idx)
    }

    /// Natural binary entropy of `k1/k2`, times `k2`: the exponential growth
    /// rate of `C(n k2, n k1)` in `n`.
    pub fn growth_rate(&self) -> f64 {
        self.idx.k2 as f64 * binary_entropy(self.idx.fraction())
    }

    /// Limit of consecutive term ratios at real part `sigma`.
    pub fn limit_ratio(&self, sigma: f64) -> f64 {
        let ln_h = (self.spec.h() as f64).ln();
        (self.growth_rate() - self.idx.k2 as f64 * sigma * ln_h).exp()
    }

    /// Series descriptor, e.g. `sum_{n>=1} C(2n, 1n) 3^(-2ns)`.
    pub fn describe(&self) -> String {
        format!(
            "sum_{{n>=1}} C({}n, {}n) {}^(-{}ns)  [w = {}]",
            self.idx.k2,
            self.idx.k1,
            self.spec.h(),
            self.idx.k2,
            format_rational_compact(self.spec.w())
        )
    }
}

/// `-t ln t - (1-t) ln(1-t)` with `0 ln 0 = 0`.
pub fn binary_entropy(t: f64) -> f64 {
    let xlx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    -xlx(t) - xlx(1.0 - t)
}

/// Exact `C(n k2, n k1)` for `n = 1..=n_max`, each obtained from the previous
/// one by multiplying in the new factors.
fn binomial_column(idx: RegularityIndex, n_max: usize) -> Vec<BigUint> {
    let (k1, k2) = (idx.k1, idx.k2);
    let mut out = Vec::with_capacity(n_max);
    let mut c = BigUint::one();
    for n in 1..=n_max as u64 {
        let a = n * k2;
        let b = n * k1;
        let d = a - b;
        let mut num = BigUint::one();
        for i in 0..k2 {
            num *= a - i;
        }
        let mut den = BigUint::one();
        for i in 0..k1 {
            den *= b - i;
        }
        for i in 0..(k2 - k1) {
            den *= d - i;
        }
        c = c * num / den;
        out.push(c.clone());
    }
    out
}

/// Partial sum to `n_terms` with a ratio-test tail bound.
pub fn partition_zeta_eval(
    pz: &PartitionZeta,
    s: Complex64,
    n_terms: usize,
) -> Result<PartitionZetaValue> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("need at least one term".into()));
    }
    let ln_h = (pz.spec.h() as f64).ln();
    let k2 = pz.idx.k2 as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    for (i, c) in binomial_column(pz.idx, n_terms).iter().enumerate() {
        let n = (i + 1) as f64;
        let term = (Complex64::new(ln_biguint(c), 0.0) - s * (k2 * n * ln_h)).exp();
        last = term.norm();
        value += term;
    }
    // Term ratios increase to their limit, so the limit bounds every later one.
    let q = pz.limit_ratio(s.re);
    let converges = q < 1.0;
    let tail_bound = converges.then(|| last * q / (1.0 - q));
    Ok(PartitionZetaValue {
        s,
        value,
        n_terms,
        tail_bound,
        converges,
    })
}

/// `ln C(N k2, N k1) - ln C((N-1) k2, (N-1) k1)`, from the exact ratio of
/// the two binomials (a quotient of at most `2 k2` small integers).
fn log_growth_step(idx: RegularityIndex, n: u64) -> f64 {
    let (k1, k2) = (idx.k1, idx.k2);
    let (a, b) = (n * k2, n * k1);
    let d = a - b;
    let mut num = BigUint::one();
    for i in 0..k2 {
        num *= a - i;
    }
    let mut den = BigUint::one();
    for i in 0..k1 {
        den *= b - i;
    }
    for i in 0..(k2 - k1) {
        den *= d - i;
    }
    ln_biguint(&num) - ln_biguint(&den)
}

/// Abscissa of convergence found numerically: the growth rate of the exact
/// binomials is measured at depths 64..512, extrapolated in `1/N`, and the
/// root-test threshold is located by bisection.
pub fn abscissa_numeric(pz: &PartitionZeta) -> f64 {
    let mut table: Vec<Vec<f64>> = Vec::new();
    for (j, &n) in ABSCISSA_DEPTHS.iter().enumerate() {
        let mut row = vec![log_growth_step(pz.idx, n)];
        for k in 1..=j {
            let f = (1u64 << k) as f64;
            let v = (f * row[k - 1] - table[j - 1][k - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let growth = table
        .last()
        .and_then(|r| r.last())
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let ln_h = (pz.spec.h() as f64).ln();
    let k2 = pz.idx.k2 as f64;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if k2 * mid * ln_h > growth {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The closed-form spectrum, computed from its printed form
/// `x log_h(-x) - (1+x) log_h(1+x)` with `x = (α - log_h w)/log_h(w-1)`.
pub fn sigma_formula(spec: &BinomialMeasureSpec, alpha: f64) -> Result<f64> {
    check_hypotheses(spec)?;
    let (a_min, a_max) = alpha_range(spec);
    if !(alpha >= a_min - ALPHA_SLACK && alpha <= a_max + ALPHA_SLACK) {
        return Err(Error::Domain(format!(
            "alpha = {alpha} lies outside [{a_min}, {a_max}]"
        )));
    }
    let x = ((alpha - spec.log_h_w()) / spec.log_h_w_minus_one()).clamp(-1.0, 0.0);
    let log_h = |v: f64| spec.log_h(v);
    let first = if x == 0.0 { 0.0 } else { x * log_h(-x) };
    let second = if x == -1.0 {
        0.0
    } else {
        (1.0 + x) * log_h(1.0 + x)
    };
    // Adding 0.0 turns an endpoint's -0.0 into 0.0.
    Ok(first - second + 0.0)
}

fn check_hypotheses(spec: &BinomialMeasureSpec) -> Result<()> {
    if spec.is_degenerate() {
        return Err(Error::Degenerate(
            "equal weights (w = 2): every interval has the same regularity".into(),
        ));
    }
    if !spec.within_spectrum_hypotheses() {
        return Err(Error::Hypothesis(format!(
            "the spectrum formula needs w > 2, got w = {}",
            format_rational(spec.w())
        )));
    }
    Ok(())
}

/// `[α_min, α_max] = [log_h w - log_h(w-1), log_h w]`.
pub fn alpha_range(spec: &BinomialMeasureSpec) -> (f64, f64) {
    let hi = spec.log_h_w();
    (hi - spec.log_h_w_minus_one(), hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    pub sigma: f64,
    pub idx: RegularityIndex,
    /// Base-2 entropy comparison, only meaningful when `h = 2`.
    pub f_alpha: Option<f64>,
    pub is_max: bool,
}

/// Base-2 binary entropy of the position of α in `[α_min, α_max]`.
pub fn peitgen_f(alpha: f64, alpha_min: f64, alpha_max: f64) -> Result<f64> {
    if !(alpha_min < alpha_max) {
        return Err(Error::InvalidParameter(format!(
            "need alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]"
        )));
    }
    if !(alpha >= alpha_min - ALPHA_SLACK && alpha <= alpha_max + ALPHA_SLACK) {
        return Err(Error::Domain(format!(
            "alpha = {alpha} lies outside [{alpha_min}, {alpha_max}]"
        )));
    }
    let span = alpha_max - alpha_min;
    let p = ((alpha_max - alpha) / span).clamp(0.0, 1.0);
    let q = ((alpha - alpha_min) / span).clamp(0.0, 1.0);
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(q))
}

/// All coprime pairs `0 <= k1 <= k2 <= max_k2`, including `(0,1)` and `(1,1)`.
pub fn coprime_indices(max_k2: u64) -> Vec<RegularityIndex> {
    let mut out = Vec::new();
    for k2 in 1..=max_k2 {
        for k1 in 0..=k2 {
            if let Ok(idx) = RegularityIndex::new(k1, k2) {
                out.push(idx);
            }
        }
    }
    out
}

/// One point per coprime index pair, sorted by α then `k2`.
pub fn spectrum_sample(spec: &BinomialMeasureSpec, max_k2: u64) -> Result<Vec<SpectrumPoint>> {
    if max_k2 < 2 {
        return Err(Error::InvalidParameter(format!(
            "K = {max_k2} must be >= 2"
        )));
    }
    check_hypotheses(spec)?;
    let (a_min, a_max) = alpha_range(spec);
    let mut points = coprime_indices(max_k2)
        .into_iter()
        .map(|idx| {
            let alpha = regularity_value(spec, idx);
            Ok(SpectrumPoint {
                alpha,
                sigma: sigma_formula(spec, alpha)?,
                idx,
                f_alpha: if spec.h() == 2 {
                    Some(peitgen_f(alpha, a_min, a_max)?)
                } else {
                    None
                },
                is_max: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.idx.k2.cmp(&b.idx.k2)));
    let max = points
        .iter()
        .map(|p| p.sigma)
        .fold(f64::NEG_INFINITY, f64::max);
    for p in &mut points {
        p.is_max = (p.sigma - max).abs() <= 1e-12;
    }
    Ok(points)
}

/// The continuous curve σ(α) on an even grid of `count` points.
pub fn sigma_curve(spec: &BinomialMeasureSpec, count: usize) -> Result<Vec<(f64, f64)>> {
    if count < 2 {
        return Err(Error::InvalidParameter(
            "curve needs at least two points".into(),
        ));
    }
    let (a_min, a_max) = alpha_range(spec);
    (0..count)
        .map(|i| {
            let alpha = a_min + (a_max - a_min) * i as f64 / (count - 1) as f64;
            Ok((alpha, sigma_formula(spec, alpha)?))
        })
        .collect()
}
