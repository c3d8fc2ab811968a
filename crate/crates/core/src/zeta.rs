//! Geometric zeta functions of fractal strings: truncated Dirichlet series,
//! the meromorphic closed form of lattice strings, and their complex
//! dimensions with residues (computed analytically, checked by contour
//! quadrature).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::strings::{LatticeStringSpec, LengthSequence};

/// Closed-form evaluation refuses points with `|1 - m r^s|` below this.
pub const POLE_EXCLUSION_RADIUS: f64 = 1e-12;
/// Radius of the residue cross-check contour.
pub const CONTOUR_RADIUS: f64 = 1e-3;
/// Trapezoid nodes on the residue cross-check contour.
pub const CONTOUR_NODES: usize = 128;
/// Required agreement between analytic and quadrature residues.
pub const RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ZetaMode {
    Truncated { n_terms: usize },
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub mode: ZetaMode,
    /// Analytic bound on the omitted tail, when the series converges at `s`
    /// and a lattice rule makes the tail computable.
    pub tail_bound: Option<f64>,
    /// Floating-point accumulation bound for the partial sum.
    pub rounding_bound: f64,
    /// `false` when `Re(s)` is at or left of the abscissa of convergence: the
    /// partial sum is then not an approximation of the zeta value.
    pub converges: bool,
}

impl ZetaValue {
    pub fn error_bound(&self) -> Option<f64> {
        self.tail_bound.map(|t| t + self.rounding_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexDimension {
    pub omega: Complex64,
    pub residue: Complex64,
    pub simple: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min <= re_max && im_min <= im_max) {
            return Err(Error::InvalidParameter(format!(
                "window needs re_min <= re_max and im_min <= im_max, got [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (sin_half, cos) = ((z.im * 0.5).sin(), z.im.cos());
    let ex = z.re.exp();
    Complex64::new(
        z.re.exp_m1() * cos - 2.0 * sin_half * sin_half,
        ex * z.im.sin(),
    )
}

/// `Σ_{n<=N} m_n l_n^s`.
pub fn zeta_truncated(ls: &LengthSequence, s: Complex64, n_terms: usize) -> Result<ZetaValue> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let ls = ls.extended(n_terms)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for i in 0..n_terms {
        let term = (s * ls.ln_length(i) + ls.ln_multiplicity(i)).exp();
        magnitude += term.norm();
        value += term;
    }
    let rounding_bound = 4.0 * (n_terms as f64 + 1.0) * f64::EPSILON * magnitude;
    let (tail_bound, converges) = match ls.rule() {
        Some(spec) => {
            let ratio = spec.multiplier() as f64 * (-s.re * spec.log_inv_ratio()).exp();
            if ratio < 1.0 {
                let next = ((n_terms as f64) * (spec.multiplier() as f64).ln()
                    + s.re * spec.ln_length(n_terms + 1))
                .exp();
                (Some(next / (1.0 - ratio)), true)
            } else {
                (None, false)
            }
        }
        None => {
            let d = crate::strings::minkowski_dimension_from_lengths(&ls);
            (None, s.re > d.value)
        }
    };
    Ok(ZetaValue {
        s,
        value,
        mode: ZetaMode::Truncated { n_terms },
        tail_bound,
        rounding_bound,
        converges,
    })
}

/// `1 - m r^s`.
fn lattice_denominator(spec: &LatticeStringSpec, s: Complex64) -> Complex64 {
    let exponent = Complex64::new((spec.multiplier() as f64).ln(), 0.0) - s * spec.log_inv_ratio();
    -expm1(exponent)
}

fn lattice_numerator(spec: &LatticeStringSpec, s: Complex64) -> Complex64 {
    (s * crate::rational::ln_rational(&spec.first_length())).exp()
}

/// `(1 - m r)^s / (1 - m r^s)` without the pole guard.
pub fn lattice_zeta_unchecked(spec: &LatticeStringSpec, s: Complex64) -> Complex64 {
    lattice_numerator(spec, s) / lattice_denominator(spec, s)
}

/// The lattice pole nearest to `s`.
pub fn nearest_lattice_pole(spec: &LatticeStringSpec, s: Complex64) -> Complex64 {
    let p = spec.period();
    let k = (s.im / p).round();
    Complex64::new(spec.dimension(), k * p)
}

/// Meromorphic continuation of the lattice zeta function to all of ℂ.
pub fn zeta_closed_form_lattice(spec: &LatticeStringSpec, s: Complex64) -> Result<ZetaValue> {
    let den = lattice_denominator(spec, s);
    if den.norm() <= POLE_EXCLUSION_RADIUS {
        return Err(Error::PoleProximity {
            s,
            nearest: nearest_lattice_pole(spec, s),
            radius: POLE_EXCLUSION_RADIUS,
        });
    }
    Ok(ZetaValue {
        s,
        value: lattice_numerator(spec, s) / den,
        mode: ZetaMode::ClosedForm,
        tail_bound: None,
        rounding_bound: 0.0,
        converges: true,
    })
}

/// Residue of the lattice zeta function at one of its poles:
/// `(1 - m r)^ω / (m r^ω log(1/r))`, and `m r^ω = 1` there.
pub fn lattice_residue(spec: &LatticeStringSpec, omega: Complex64) -> Complex64 {
    let den_derivative =
        (Complex64::new((spec.multiplier() as f64).ln(), 0.0) - omega * spec.log_inv_ratio()).exp()
            * spec.log_inv_ratio();
    lattice_numerator(spec, omega) / den_derivative
}

/// All poles `D + i k p` of the lattice zeta function inside the window,
/// sorted by imaginary part.
pub fn complex_dimensions_lattice(spec: &LatticeStringSpec, w: &Window) -> Vec<ComplexDimension> {
    let d = spec.dimension();
    if !(w.re_min..=w.re_max).contains(&d) {
        return Vec::new();
    }
    let p = spec.period();
    let k_lo = (w.im_min / p).ceil() as i64;
    let k_hi = (w.im_max / p).floor() as i64;
    (k_lo..=k_hi)
        .map(|k| {
            let omega = Complex64::new(d, k as f64 * p);
            ComplexDimension {
                omega,
                residue: lattice_residue(spec, omega),
                simple: true,
            }
        })
        .filter(|c| w.contains(c.omega))
        .collect()
}

/// Lattice poles `D + i k p` for `|k| <= n_terms`, ordered `0, 1, -1, 2, -2, …`.
pub fn lattice_poles_symmetric(spec: &LatticeStringSpec, n_terms: usize) -> Vec<ComplexDimension> {
    let d = spec.dimension();
    let p = spec.period();
    let mut out = Vec::with_capacity(2 * n_terms + 1);
    for k in 0..=n_terms as i64 {
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let omega = Complex64::new(d, kk as f64 * p);
            out.push(ComplexDimension {
                omega,
                residue: lattice_residue(spec, omega),
                simple: true,
            });
        }
    }
    out
}

/// `(1/2πi) ∮ (s - center)^power f(s) ds` over a circle, trapezoid rule.
pub fn contour_integral(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    nodes: usize,
    power: i32,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let offset = Complex64::from_polar(radius, theta);
        // ds = i offset dθ, and the 1/(2πi) prefactor cancels the i.
        acc += f(center + offset) * offset.powi(power + 1);
    }
    acc / nodes as f64
}

fn check_contour_isolation(spec: &LatticeStringSpec, radius: f64) -> Result<()> {
    if spec.period() <= 2.0 * radius {
        return Err(Error::Numerical(format!(
            "pole spacing {} is too small for a contour of radius {radius}",
            spec.period()
        )));
    }
    Ok(())
}

/// Numerical residue of the lattice zeta function at `center` (0 when no
/// pole lies inside the contour).
pub fn verify_pole_numerically(spec: &LatticeStringSpec, center: Complex64) -> Result<Complex64> {
    check_contour_isolation(spec, CONTOUR_RADIUS)?;
    Ok(contour_integral(
        |s| lattice_zeta_unchecked(spec, s),
        center,
        CONTOUR_RADIUS,
        CONTOUR_NODES,
        0,
    ))
}

/// `(1/2πi) ∮ (s - ω)^k ζ(s) ds`; vanishes for `k >= 1` at a simple pole.
pub fn contour_moment(spec: &LatticeStringSpec, omega: Complex64, power: i32) -> Result<Complex64> {
    check_contour_isolation(spec, CONTOUR_RADIUS)?;
    Ok(contour_integral(
        |s| lattice_zeta_unchecked(spec, s),
        omega,
        CONTOUR_RADIUS,
        CONTOUR_NODES,
        power,
    ))
}

/// Compares the analytic residue with contour quadrature; returns the
/// absolute discrepancy or an error when it exceeds [`RESIDUE_TOL`].
pub fn cross_check_residue(spec: &LatticeStringSpec, dim: &ComplexDimension) -> Result<f64> {
    let numeric = verify_pole_numerically(spec, dim.omega)?;
    let diff = (numeric - dim.residue).norm();
    if diff > RESIDUE_TOL {
        return Err(Error::Numerical(format!(
            "residue at {} disagrees: analytic {}, quadrature {}",
            dim.omega, dim.residue, numeric
        )));
    }
    Ok(diff)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleDoc {
    pub re: f64,
    pub im: f64,
    pub residue_re: f64,
    pub residue_im: f64,
}

/// `{"poles":[{"re","im","residue_re","residue_im"}]}`, sorted by Im then Re.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleListDoc {
    pub poles: Vec<PoleDoc>,
}

impl PoleListDoc {
    pub fn new(dims: &[ComplexDimension]) -> Self {
        let mut poles: Vec<PoleDoc> = dims
            .iter()
            .map(|d| PoleDoc {
                re: d.omega.re + 0.0,
                im: d.omega.im + 0.0,
                residue_re: d.residue.re + 0.0,
                residue_im: d.residue.im + 0.0,
            })
            .collect();
        poles.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        Self { poles }
    }
}
