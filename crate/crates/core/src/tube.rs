//! One-sided tube volumes `V(ε)`: directly from the lengths, and through the
//! residue expansion over complex dimensions (exact for lattice strings).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::strings::{LatticeStringSpec, LengthSequence};
use crate::zeta::{lattice_poles_symmetric, ComplexDimension};

pub const DEFAULT_N_TERMS: usize = 500;
/// Largest ε for which the Cantor residue expansion holds.
pub const EXPLICIT_EPS_MAX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum TubeMethod {
    Direct,
    Explicit { n_terms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeResult {
    pub epsilon: f64,
    pub volume: f64,
    pub method: TubeMethod,
    pub error_bound: Option<f64>,
    /// Imaginary residue of the conjugate-paired sum (explicit method only).
    pub imaginary_part: f64,
    #[serde(skip)]
    pub exact: Option<Rational>,
}

/// `V(ε) = Σ m_n min(l_n, 2ε)` in exact arithmetic. With a lattice rule the
/// tail `Σ_{l_n <= 2ε} m_n l_n` comes from the closed-form total.
pub fn tube_volume_direct_exact(ls: &LengthSequence, eps: &Rational) -> Result<Rational> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    let two_eps = eps * Rational::from_integer(BigInt::from(2));
    let as_rat = |m: &num_bigint::BigUint| Rational::from_integer(BigInt::from(m.clone()));
    match ls.rule() {
        Some(spec) => {
            let mut volume = Rational::zero();
            let mut covered = Rational::zero();
            let mut n = 1;
            loop {
                let l = spec.length(n);
                if l <= two_eps {
                    break;
                }
                let m = as_rat(&spec.multiplicity(n));
                volume += &m * &two_eps;
                covered += &m * &l;
                n += 1;
            }
            Ok(volume + (Rational::one() - covered))
        }
        None => Ok(ls
            .entries()
            .iter()
            .map(|e| {
                let part = if e.length < two_eps {
                    e.length.clone()
                } else {
                    two_eps.clone()
                };
                as_rat(&e.multiplicity) * part
            })
            .fold(Rational::zero(), |a, b| a + b)),
    }
}

pub fn tube_volume_direct(ls: &LengthSequence, eps: f64) -> Result<TubeResult> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ε = {eps} must be positive"
        )));
    }
    let eps_q = BigRational::from_f64(eps).expect("finite");
    let exact = tube_volume_direct_exact(ls, &eps_q)?;
    Ok(TubeResult {
        epsilon: eps,
        volume: rational::to_f64(&exact),
        method: TubeMethod::Direct,
        error_bound: None,
        imaginary_part: 0.0,
        exact: Some(exact),
    })
}

/// Largest ε for which the residue expansion of a lattice string holds:
/// `l_1 / (2r)`. Beyond it the integrand `ζ(s)(2ε)^(1-s)` no longer decays
/// as `Re(s) → -∞` and the contour cannot be pushed left.
pub fn explicit_eps_max(spec: &LatticeStringSpec) -> f64 {
    rational::to_f64(&(spec.first_length() / (spec.ratio() * rational::int(2))))
}

fn check_explicit_eps(eps: f64, max: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= max) {
        return Err(Error::Domain(format!(
            "the residue expansion holds for 0 < ε <= {max}, got ε = {eps}"
        )));
    }
    Ok(())
}

/// The Cantor tube series written out term by term:
/// `(1/(2 log 3)) Σ_{|n|<=N} (2ε)^(1-ω_n) / (ω_n (1-ω_n)) - 2ε`,
/// `ω_n = log_3 2 + i n 2π/log 3`.
pub fn tube_volume_explicit_cantor(eps: f64, n_terms: usize) -> Result<TubeResult> {
    check_explicit_eps(eps, EXPLICIT_EPS_MAX)?;
    let ln3 = 3f64.ln();
    let d = 2f64.ln() / ln3;
    let p = 2.0 * std::f64::consts::PI / ln3;
    let two_eps = 2.0 * eps;
    let term = |n: i64| {
        let omega = Complex64::new(d, n as f64 * p);
        let one_minus = Complex64::new(1.0, 0.0) - omega;
        Complex64::new(two_eps, 0.0).powc(one_minus) / (omega * one_minus)
    };
    let mut sum = term(0);
    for n in 1..=n_terms as i64 {
        sum += term(n) + term(-n);
    }
    let coeff = 1.0 / (2.0 * ln3);
    let first_omitted = coeff * 2.0 * term(n_terms as i64 + 1).norm();
    let total = sum * coeff - Complex64::new(two_eps, 0.0);
    Ok(TubeResult {
        epsilon: eps,
        volume: total.re,
        method: TubeMethod::Explicit { n_terms },
        error_bound: Some(first_omitted),
        imaginary_part: total.im,
        exact: None,
    })
}

/// Residue of `ζ(s) (2ε)^(1-s) / (s(1-s))` at `s = 0`.
///
/// For `m >= 2` the zeta function is regular at 0 and the residue is
/// `ζ(0)·2ε` with `ζ(0) = 1/(1-m)`; for `m = 1` the lattice pole at 0 makes
/// the integrand's pole double.
pub fn residue_at_zero(spec: &LatticeStringSpec, eps: f64) -> f64 {
    let two_eps = 2.0 * eps;
    if spec.multiplier() >= 2 {
        two_eps / (1.0 - spec.multiplier() as f64)
    } else {
        let big_l = spec.log_inv_ratio();
        let ln_first = rational::ln_rational(&spec.first_length());
        (two_eps / big_l) * (ln_first + 0.5 * big_l - two_eps.ln() + 1.0)
    }
}

/// Residue of the tube integrand at a simple pole `ω ∉ {0, 1}` of ζ.
pub fn tube_term(dim: &ComplexDimension, eps: f64) -> Complex64 {
    let one_minus = Complex64::new(1.0, 0.0) - dim.omega;
    dim.residue * Complex64::new(2.0 * eps, 0.0).powc(one_minus) / (dim.omega * one_minus)
}

/// Sums the residue expansion over the supplied complex dimensions plus the
/// `s = 0` term. Dimensions are summed in the order given, so callers pass
/// conjugate pairs adjacently (see [`lattice_poles_symmetric`]). A dimension
/// at `ω = 0` is folded into the `s = 0` term.
pub fn tube_volume_explicit(
    dims: &[ComplexDimension],
    spec: &LatticeStringSpec,
    eps: f64,
) -> Result<TubeResult> {
    check_explicit_eps(eps, explicit_eps_max(spec))?;
    if let Some(bad) = dims.iter().find(|d| !d.simple) {
        return Err(Error::Unsupported(format!(
            "non-simple pole at {}",
            bad.omega
        )));
    }
    let mut sum = Complex64::new(residue_at_zero(spec, eps), 0.0);
    let mut max_im: f64 = 0.0;
    for dim in dims {
        if dim.omega.norm() < 1e-12 {
            continue;
        }
        sum += tube_term(dim, eps);
        max_im = max_im.max(dim.omega.im.abs());
    }
    let n_terms = (max_im / spec.period()).round() as usize;
    let next = ComplexDimension {
        omega: Complex64::new(spec.dimension(), (n_terms + 1) as f64 * spec.period()),
        residue: crate::zeta::lattice_residue(
            spec,
            Complex64::new(spec.dimension(), (n_terms + 1) as f64 * spec.period()),
        ),
        simple: true,
    };
    Ok(TubeResult {
        epsilon: eps,
        volume: sum.re,
        method: TubeMethod::Explicit { n_terms },
        error_bound: Some(2.0 * tube_term(&next, eps).norm()),
        imaginary_part: sum.im,
        exact: None,
    })
}

/// Residue expansion over the poles `D + i k p`, `|k| <= n_terms`.
pub fn lattice_tube_explicit(
    spec: &LatticeStringSpec,
    eps: f64,
    n_terms: usize,
) -> Result<TubeResult> {
    tube_volume_explicit(&lattice_poles_symmetric(spec, n_terms), spec, eps)
}

/// One row of the direct-vs-explicit comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeRow {
    pub epsilon: f64,
    pub v_direct: f64,
    pub v_explicit: Option<f64>,
    pub abs_diff: Option<f64>,
    /// `V(ε) ε^(D-1)` from the direct value.
    pub normalized: f64,
}

pub fn comparison_rows(
    spec: &LatticeStringSpec,
    eps_grid: &[f64],
    n_terms: usize,
) -> Result<Vec<TubeRow>> {
    let ls = spec.lengths(1);
    let d = spec.dimension();
    let eps_max = explicit_eps_max(spec);
    eps_grid
        .iter()
        .map(|&eps| {
            let direct = tube_volume_direct(&ls, eps)?;
            let explicit = if eps <= eps_max {
                Some(lattice_tube_explicit(spec, eps, n_terms)?.volume)
            } else {
                None
            };
            Ok(TubeRow {
                epsilon: eps,
                v_direct: direct.volume,
                v_explicit: explicit,
                abs_diff: explicit.map(|v| (v - direct.volume).abs()),
                normalized: direct.volume * eps.powf(d - 1.0),
            })
        })
        .collect()
}
