//! Multifractal zeta functions of the point-mass measure of a fractal string
//! (a unit atom at every interval endpoint) at regularity `+∞` and `-∞`.
//!
//! The region of regularity `α` at scale `η` is the union of the closed
//! η-intervals `U` with `log μ(U) / log |U| = α`: atom-free intervals for
//! `+∞`, intervals of infinite mass for `-∞`.

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::ExtReal;
use crate::rational::{
    self, format_rational, format_rational_compact, int, ln_rational, rat, Rational,
};
use crate::strings::{omega3_hull_lo, realize_cantor_configuration, GeometricString, Variant};
use crate::zeta::{ComplexDimension, PoleDoc, PoleListDoc, Window};

/// Deepest layout generation used to resolve a region.
const MAX_RESOLUTION_DEPTH: usize = 24;
/// Stages checked against the scale hypotheses for an unbounded sequence.
const HYPOTHESIS_STAGES: usize = 64;

/// Closed interval `[lo, hi]`; endpoints may or may not belong to the region,
/// which never matters for lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub lo: Rational,
    pub hi: Rational,
}

impl Span {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// How the endpoint atoms are known.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureMode {
    /// Infinite layout generated by its recursive rule.
    Exact(Variant),
    /// Finite-depth truncation of a layout; unresolved chunks of the boundary
    /// stand in for accumulation sets.
    Truncated,
    /// Literally finitely many atoms.
    Finite,
}

/// Where the endpoints of an exact layout accumulate.
#[derive(Debug, Clone, PartialEq)]
enum Accumulation {
    /// Two-piece symmetric Cantor set on `[lo, hi]` with piece ratio `ratio`.
    SelfSimilar {
        lo: Rational,
        hi: Rational,
        ratio: Rational,
    },
    Point(Rational),
}

fn accumulation_of(variant: Variant) -> Accumulation {
    match variant {
        Variant::Omega1 => Accumulation::SelfSimilar {
            lo: int(0),
            hi: int(1),
            ratio: rat(1, 3),
        },
        Variant::Omega2 => Accumulation::Point(int(1)),
        Variant::Omega3 => Accumulation::SelfSimilar {
            lo: omega3_hull_lo(),
            hi: int(1),
            ratio: rat(1, 9),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMassMeasure {
    string: GeometricString,
    mode: MeasureMode,
}

impl PointMassMeasure {
    /// Exact reasoning when the string carries a layout tag, otherwise the
    /// literal finite measure.
    pub fn new(string: GeometricString) -> Self {
        let mode = match string.layout() {
            Some(v) => MeasureMode::Exact(v),
            None => MeasureMode::Finite,
        };
        Self { string, mode }
    }

    /// The infinite layout.
    pub fn exact(variant: Variant) -> Self {
        let string = realize_cantor_configuration(variant, 1).expect("depth 1 is valid");
        Self {
            string,
            mode: MeasureMode::Exact(variant),
        }
    }

    /// Oracle mode on a depth-tagged truncation.
    pub fn truncated(string: GeometricString) -> Result<Self> {
        if string.depth().is_none() {
            return Err(Error::InvalidParameter(
                "truncated mode needs a depth-tagged layout realization".into(),
            ));
        }
        Ok(Self {
            string,
            mode: MeasureMode::Truncated,
        })
    }

    pub fn mode(&self) -> &MeasureMode {
        &self.mode
    }

    pub fn string(&self) -> &GeometricString {
        &self.string
    }

    /// Atoms in increasing order, without repeats.
    pub fn atoms(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(2 * self.string.intervals().len());
        for iv in self.string.intervals() {
            if out.last() != Some(&iv.lo) {
                out.push(iv.lo.clone());
            }
            out.push(iv.hi.clone());
        }
        out
    }

    /// Smallest compact interval containing the support.
    pub fn ambient(&self) -> Option<Span> {
        match self.mode {
            MeasureMode::Exact(_) | MeasureMode::Truncated => Some(Span::new(int(0), int(1))),
            MeasureMode::Finite => {
                let atoms = self.atoms();
                Some(Span::new(atoms.first()?.clone(), atoms.last()?.clone()))
            }
        }
    }

    fn check_resolution(&self, eta: &Rational) -> Result<()> {
        if let MeasureMode::Truncated = self.mode {
            let bound = self.string.unresolved_bound().expect("depth-tagged");
            if eta < &bound {
                return Err(Error::Resolution(format!(
                    "eta = {} is below the resolution {} of the depth-{} truncation",
                    format_rational(eta),
                    format_rational(&bound),
                    self.string.depth().unwrap_or(0)
                )));
            }
        }
        Ok(())
    }
}

/// `η_1 > η_2 > … → 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleSequence {
    /// `η_n = first · ratio^(n-1)`.
    Geometric {
        first: Rational,
        ratio: Rational,
    },
    Explicit(Vec<Rational>),
}

impl ScaleSequence {
    pub fn geometric(first: Rational, ratio: Rational) -> Result<Self> {
        if !first.is_positive() || !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "geometric scales need first > 0 and 0 < ratio < 1, got {} and {}",
                format_rational(&first),
                format_rational(&ratio)
            )));
        }
        Ok(ScaleSequence::Geometric { first, ratio })
    }

    pub fn explicit(etas: Vec<Rational>) -> Result<Self> {
        if etas.is_empty() || !etas[0].is_positive() {
            return Err(Error::InvalidParameter(
                "scales must be positive and nonempty".into(),
            ));
        }
        if let Some(i) = etas
            .windows(2)
            .position(|w| w[1] >= w[0] || !w[1].is_positive())
        {
            return Err(Error::InvalidParameter(format!(
                "scales must decrease strictly: eta_{} = {} then eta_{} = {}",
                i + 1,
                format_rational(&etas[i]),
                i + 2,
                format_rational(&etas[i + 1])
            )));
        }
        Ok(ScaleSequence::Explicit(etas))
    }

    /// `η_n = l_(n+1) = 3^-(n+1)` for the Cantor lengths.
    pub fn cantor_default() -> Self {
        ScaleSequence::Geometric {
            first: rat(1, 9),
            ratio: rat(1, 3),
        }
    }

    /// `η_n`, 1-based.
    pub fn eta(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Err(Error::InvalidParameter("stages start at 1".into()));
        }
        match self {
            ScaleSequence::Geometric { first, ratio } => {
                Ok(first * rational::pow(ratio, n as u32 - 1))
            }
            ScaleSequence::Explicit(v) => v.get(n - 1).cloned().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "only {} scales given, stage {n} requested",
                    v.len()
                ))
            }),
        }
    }

    pub fn stages(&self) -> Option<usize> {
        match self {
            ScaleSequence::Geometric { .. } => None,
            ScaleSequence::Explicit(v) => Some(v.len()),
        }
    }

    /// `c` such that `η_n = c · 3^-n`, when the sequence has that form.
    fn cantor_scale_factor(&self) -> Option<Rational> {
        match self {
            ScaleSequence::Geometric { first, ratio } if *ratio == rat(1, 3) => {
                Some(first * int(3))
            }
            _ => None,
        }
    }
}

/// Checks `l_n > η_n >= l_(n+1)` and `l_n > 2 η_n` against the Cantor
/// lengths `l_n = 3^-n`, naming the first failure.
pub fn check_scale_hypotheses(ns: &ScaleSequence) -> Result<()> {
    let stages = ns.stages().unwrap_or(HYPOTHESIS_STAGES);
    let third = rat(1, 3);
    for n in 1..=stages {
        let eta = ns.eta(n)?;
        let l = rational::pow(&third, n as u32);
        let next = &l * &third;
        let show = |q: &Rational| format_rational(q);
        if l <= eta {
            return Err(Error::Hypothesis(format!(
                "l_{n} > eta_{n} fails: l_{n} = {}, eta_{n} = {}",
                show(&l),
                show(&eta)
            )));
        }
        if eta < next {
            return Err(Error::Hypothesis(format!(
                "eta_{n} >= l_{} fails: eta_{n} = {}, l_{} = {}",
                n + 1,
                show(&eta),
                n + 1,
                show(&next)
            )));
        }
        if l <= &eta * int(2) {
            return Err(Error::Hypothesis(format!(
                "l_{n} > 2 eta_{n} fails: l_{n} = {}, eta_{n} = {}",
                show(&l),
                show(&eta)
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremeRegularity {
    #[serde(rename = "+inf")]
    PosInf,
    #[serde(rename = "-inf")]
    NegInf,
}

impl TryFrom<ExtReal> for ExtremeRegularity {
    type Error = Error;

    fn try_from(a: ExtReal) -> Result<Self> {
        match a {
            ExtReal::PosInf => Ok(ExtremeRegularity::PosInf),
            ExtReal::NegInf => Ok(ExtremeRegularity::NegInf),
            ExtReal::Finite(x) => Err(Error::Unsupported(format!(
                "finite regularity {x} is not supported for point-mass measures"
            ))),
        }
    }
}

/// Components of the region at one stage, together with the intervals that
/// are new at that stage.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityRegion {
    pub stage: usize,
    pub alpha: ExtremeRegularity,
    pub eta: Rational,
    pub components: Vec<Span>,
    pub new_intervals: Vec<Span>,
}

/// Largest `k` with `3^-k > eta`, i.e. the generation of the shortest layout
/// interval longer than `eta`.
fn generations_above(eta: &Rational) -> usize {
    let third = rat(1, 3);
    let mut k = 0;
    let mut l = int(1);
    loop {
        l = &l * &third;
        if &l <= eta {
            return k;
        }
        k += 1;
    }
}

fn atom_free_components(m: &PointMassMeasure, eta: &Rational) -> Result<Vec<Span>> {
    let longer = |lo: &Rational, hi: &Rational| &(hi - lo) > eta;
    match &m.mode {
        MeasureMode::Exact(v) => {
            let k = generations_above(eta);
            if k == 0 {
                return Ok(Vec::new());
            }
            if k > MAX_RESOLUTION_DEPTH {
                return Err(Error::Resolution(format!(
                    "eta = {} needs layout generation {k} > {MAX_RESOLUTION_DEPTH}",
                    format_rational(eta)
                )));
            }
            let gs = realize_cantor_configuration(*v, k)?;
            Ok(gs
                .intervals()
                .iter()
                .filter(|iv| longer(&iv.lo, &iv.hi))
                .map(|iv| Span::new(iv.lo.clone(), iv.hi.clone()))
                .collect())
        }
        MeasureMode::Truncated => {
            m.check_resolution(eta)?;
            Ok(m.string
                .intervals()
                .iter()
                .filter(|iv| longer(&iv.lo, &iv.hi))
                .map(|iv| Span::new(iv.lo.clone(), iv.hi.clone()))
                .collect())
        }
        MeasureMode::Finite => Ok(m
            .atoms()
            .windows(2)
            .filter(|w| longer(&w[0], &w[1]))
            .map(|w| Span::new(w[0].clone(), w[1].clone()))
            .collect()),
    }
}

/// Pieces of a two-piece self-similar set, refined until every gap not yet
/// opened is at most `2 eta`.
fn self_similar_chunks(
    lo: &Rational,
    hi: &Rational,
    ratio: &Rational,
    eta: &Rational,
) -> Result<Vec<Span>> {
    let two_eta = eta * int(2);
    let gap_factor = Rational::one() - ratio * int(2);
    let mut pieces = vec![Span::new(lo.clone(), hi.clone())];
    let mut len = hi - lo;
    let mut level = 0;
    while &len * &gap_factor > two_eta {
        level += 1;
        if level > MAX_RESOLUTION_DEPTH {
            return Err(Error::Resolution(format!(
                "eta = {} needs more than {MAX_RESOLUTION_DEPTH} generations",
                format_rational(eta)
            )));
        }
        let child = &len * ratio;
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for p in &pieces {
            next.push(Span::new(p.lo.clone(), &p.lo + &child));
            next.push(Span::new(&p.hi - &child, p.hi.clone()));
        }
        pieces = next;
        len = child;
    }
    Ok(pieces)
}

fn accumulation_chunks(m: &PointMassMeasure, eta: &Rational) -> Result<Vec<Span>> {
    match &m.mode {
        MeasureMode::Exact(v) => match accumulation_of(*v) {
            Accumulation::SelfSimilar { lo, hi, ratio } => {
                self_similar_chunks(&lo, &hi, &ratio, eta)
            }
            Accumulation::Point(p) => Ok(vec![Span::new(p.clone(), p)]),
        },
        MeasureMode::Truncated => {
            m.check_resolution(eta)?;
            Ok(m.string
                .boundary_components()
                .into_iter()
                .filter(|(a, b)| a < b)
                .map(|(a, b)| Span::new(a, b))
                .collect())
        }
        MeasureMode::Finite => Ok(Vec::new()),
    }
}

/// Union of the η-neighborhoods of the chunks inside the ambient interval.
/// Chunks at distance exactly `2 eta` are merged.
fn neighborhood_components(chunks: &[Span], eta: &Rational, ambient: &Span) -> Vec<Span> {
    let mut out: Vec<Span> = Vec::new();
    for c in chunks {
        let lo = (&c.lo - eta).max(ambient.lo.clone());
        let hi = (&c.hi + eta).min(ambient.hi.clone());
        match out.last_mut() {
            Some(last) if lo <= last.hi => {
                if hi > last.hi {
                    last.hi = hi;
                }
            }
            _ => out.push(Span::new(lo, hi)),
        }
    }
    out
}

/// Components of the region of regularity `alpha` at scale `eta`.
pub fn region_components(
    m: &PointMassMeasure,
    eta: &Rational,
    alpha: ExtremeRegularity,
) -> Result<Vec<Span>> {
    if !eta.is_positive() {
        return Err(Error::InvalidParameter("eta must be positive".into()));
    }
    match alpha {
        ExtremeRegularity::PosInf => atom_free_components(m, eta),
        ExtremeRegularity::NegInf => {
            let chunks = accumulation_chunks(m, eta)?;
            let ambient = match m.ambient() {
                Some(a) => a,
                None => return Ok(Vec::new()),
            };
            Ok(neighborhood_components(&chunks, eta, &ambient))
        }
    }
}

/// A single stage, with every component counted as new.
pub fn regularity_region(
    m: &PointMassMeasure,
    eta: &Rational,
    alpha: ExtReal,
) -> Result<RegularityRegion> {
    let alpha = ExtremeRegularity::try_from(alpha)?;
    let components = region_components(m, eta, alpha)?;
    Ok(RegularityRegion {
        stage: 1,
        alpha,
        eta: eta.clone(),
        new_intervals: components.clone(),
        components,
    })
}

fn holes(components: &[Span]) -> Vec<Span> {
    components
        .windows(2)
        .map(|w| Span::new(w[0].hi.clone(), w[1].lo.clone()))
        .collect()
}

/// Stages `1..=max_stage`.
///
/// New intervals: at `+∞`, the components absent from the previous stage; at
/// `-∞`, every component at stage 1 and afterwards the holes between
/// components that contain no hole of the previous stage.
pub fn regularity_regions(
    m: &PointMassMeasure,
    ns: &ScaleSequence,
    alpha: ExtReal,
    max_stage: usize,
) -> Result<Vec<RegularityRegion>> {
    let alpha = ExtremeRegularity::try_from(alpha)?;
    let mut out: Vec<RegularityRegion> = Vec::with_capacity(max_stage);
    let mut prev_components: HashSet<Span> = HashSet::new();
    let mut prev_holes: Vec<Span> = Vec::new();
    for stage in 1..=max_stage {
        let eta = ns.eta(stage)?;
        let components = region_components(m, &eta, alpha)?;
        let new_intervals = match alpha {
            ExtremeRegularity::PosInf => components
                .iter()
                .filter(|c| !prev_components.contains(*c))
                .cloned()
                .collect(),
            ExtremeRegularity::NegInf if stage == 1 => components.clone(),
            ExtremeRegularity::NegInf => {
                let current = holes(&components);
                current
                    .into_iter()
                    .filter(|h| !contains_any(h, &prev_holes))
                    .collect()
            }
        };
        match alpha {
            ExtremeRegularity::PosInf => prev_components = components.iter().cloned().collect(),
            ExtremeRegularity::NegInf => prev_holes = holes(&components),
        }
        out.push(RegularityRegion {
            stage,
            alpha,
            eta,
            components,
            new_intervals,
        });
    }
    Ok(out)
}

/// Whether `h` contains some span of the sorted, disjoint list `spans`.
fn contains_any(h: &Span, spans: &[Span]) -> bool {
    let start = spans.partition_point(|s| s.lo < h.lo);
    spans.get(start).is_some_and(|s| s.hi <= h.hi)
}

fn power(base: &Rational, s: Complex64) -> Complex64 {
    if base.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    (s * ln_rational(base)).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceSum {
    pub s: Complex64,
    pub value: Complex64,
    pub stages: usize,
    pub new_counts: Vec<usize>,
}

/// `Σ_n Σ_K |K|^s` over the new intervals of stages `1..=max_stage`.
pub fn mzeta_bruteforce(
    m: &PointMassMeasure,
    ns: &ScaleSequence,
    alpha: ExtReal,
    s: Complex64,
    max_stage: usize,
) -> Result<BruteForceSum> {
    let regions = regularity_regions(m, ns, alpha, max_stage)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut new_counts = Vec::with_capacity(regions.len());
    for r in &regions {
        for k in &r.new_intervals {
            value += power(&k.length(), s);
        }
        new_counts.push(r.new_intervals.len());
    }
    Ok(BruteForceSum {
        s,
        value,
        stages: max_stage,
        new_counts,
    })
}

/// `coeff · base^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTerm {
    pub coeff: Rational,
    pub base: Rational,
}

/// `coeff · base^s / (1 - multiplier · ratio^s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSeries {
    pub coeff: Rational,
    pub base: Rational,
    pub multiplier: Rational,
    pub ratio: Rational,
}

impl LatticeSeries {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let c = rational::to_f64(&self.coeff);
        c * power(&self.base, s)
            / (Complex64::new(1.0, 0.0)
                - rational::to_f64(&self.multiplier) * power(&self.ratio, s))
    }

    /// Real part shared by all poles: `log_(1/ratio) multiplier`.
    pub fn pole_abscissa(&self) -> f64 {
        ln_rational(&self.multiplier) / -ln_rational(&self.ratio)
    }

    pub fn pole_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / -ln_rational(&self.ratio)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MzetaClosedForm {
    pub entire_part: Vec<PowerTerm>,
    pub series_part: Option<LatticeSeries>,
}

fn render_power(coeff: &Rational, base: &Rational) -> String {
    if coeff.is_one() {
        format!("({})^s", format_rational(base))
    } else {
        format!(
            "{}*({})^s",
            format_rational_compact(coeff),
            format_rational(base)
        )
    }
}

impl MzetaClosedForm {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let entire: Complex64 = self
            .entire_part
            .iter()
            .map(|t| rational::to_f64(&t.coeff) * power(&t.base, s))
            .sum();
        entire
            + self
                .series_part
                .as_ref()
                .map_or(Complex64::new(0.0, 0.0), |p| p.eval(s))
    }

    pub fn eval_entire(&self, s: Complex64) -> Complex64 {
        self.entire_part
            .iter()
            .map(|t| rational::to_f64(&t.coeff) * power(&t.base, s))
            .sum()
    }

    /// Canonical rendering: `c*(p/q)^s` terms in decreasing base, then the
    /// series as `c*(p/q)^s/(1 - a*(p/q)^s)`; a unit coefficient is omitted.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .entire_part
            .iter()
            .map(|t| render_power(&t.coeff, &t.base))
            .collect();
        if let Some(p) = &self.series_part {
            let denom = if p.multiplier.is_one() {
                format!("({})^s", format_rational(&p.ratio))
            } else {
                format!(
                    "{}*({})^s",
                    format_rational_compact(&p.multiplier),
                    format_rational(&p.ratio)
                )
            };
            parts.push(format!("{}/(1 - {denom})", render_power(&p.coeff, &p.base)));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn from_terms(mut terms: Vec<PowerTerm>, series_part: Option<LatticeSeries>) -> Self {
        terms.sort_by(|a, b| b.base.cmp(&a.base));
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.base == t.base => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        Self {
            entire_part: merged,
            series_part,
        }
    }
}

/// Poles of the series part inside the window, sorted by imaginary part.
pub fn pole_set(cf: &MzetaClosedForm, w: &Window) -> Vec<ComplexDimension> {
    let Some(p) = &cf.series_part else {
        return Vec::new();
    };
    let re = p.pole_abscissa();
    if !(w.re_min..=w.re_max).contains(&re) {
        return Vec::new();
    }
    let spacing = p.pole_spacing();
    let ln_inv = -ln_rational(&p.ratio);
    let k_lo = (w.im_min / spacing).ceil() as i64;
    let k_hi = (w.im_max / spacing).floor() as i64;
    (k_lo..=k_hi)
        .map(|k| {
            let omega = Complex64::new(re, k as f64 * spacing);
            ComplexDimension {
                omega,
                residue: rational::to_f64(&p.coeff) * power(&p.base, omega) / ln_inv,
                simple: true,
            }
        })
        .filter(|c| w.contains(c.omega))
        .collect()
}

fn cantor_series() -> LatticeSeries {
    LatticeSeries {
        coeff: int(1),
        base: rat(1, 3),
        multiplier: int(2),
        ratio: rat(1, 3),
    }
}

fn length_terms(lengths: impl Iterator<Item = Rational>) -> Vec<PowerTerm> {
    lengths
        .map(|l| PowerTerm {
            coeff: int(1),
            base: l,
        })
        .collect()
}

/// The zeta function at `+∞`: the geometric zeta function of the complement
/// of the support inside its hull. It does not depend on `ns`.
pub fn mzeta_infinity(m: &PointMassMeasure, ns: &ScaleSequence) -> Result<MzetaClosedForm> {
    ns.eta(1)?;
    match &m.mode {
        MeasureMode::Exact(_) => Ok(MzetaClosedForm {
            entire_part: Vec::new(),
            series_part: Some(cantor_series()),
        }),
        MeasureMode::Truncated => Ok(MzetaClosedForm::from_terms(
            length_terms(m.string.intervals().iter().map(|iv| iv.length())),
            None,
        )),
        MeasureMode::Finite => Ok(MzetaClosedForm::from_terms(
            length_terms(m.atoms().windows(2).map(|w| &w[1] - &w[0])),
            None,
        )),
    }
}

/// The zeta function at `-∞`.
///
/// For the perfect Cantor boundary this is `h(s) + Σ_{n>=2} m_n (l_n - 2η_n)^s`.
/// The two rearranged layouts have isolated boundary points; their forms are
/// the ones their stage-by-stage regions produce.
pub fn mzeta_neg_infinity(m: &PointMassMeasure, ns: &ScaleSequence) -> Result<MzetaClosedForm> {
    let variant = match &m.mode {
        MeasureMode::Exact(v) => *v,
        MeasureMode::Finite => return Ok(MzetaClosedForm::default()),
        MeasureMode::Truncated => {
            return Err(Error::Unsupported(
                "closed forms need the recursive layout; use the stage-by-stage sum".into(),
            ))
        }
    };
    check_scale_hypotheses(ns)?;
    let eta1 = ns.eta(1)?;
    if variant == Variant::Omega2 {
        return Ok(MzetaClosedForm::from_terms(
            vec![PowerTerm {
                coeff: int(1),
                base: eta1,
            }],
            None,
        ));
    }
    let c = ns.cantor_scale_factor().ok_or_else(|| {
        Error::Unsupported(format!(
            "the {} series is a lattice series only for scales c*3^-n",
            variant.label()
        ))
    })?;
    Ok(match variant {
        Variant::Omega1 => MzetaClosedForm::from_terms(
            vec![PowerTerm {
                coeff: int(2),
                base: rat(1, 3) + &eta1,
            }],
            Some(LatticeSeries {
                coeff: int(2),
                base: (int(1) - &c * int(2)) / int(9),
                multiplier: int(2),
                ratio: rat(1, 3),
            }),
        ),
        Variant::Omega3 => {
            let a_piece = rat(4, 63);
            MzetaClosedForm::from_terms(
                vec![
                    PowerTerm {
                        coeff: int(1),
                        base: &a_piece + &eta1 * int(2),
                    },
                    PowerTerm {
                        coeff: int(1),
                        base: a_piece + &eta1,
                    },
                ],
                Some(LatticeSeries {
                    coeff: int(2),
                    base: (int(4) - &c * int(6)) / int(81),
                    multiplier: int(2),
                    ratio: rat(1, 9),
                }),
            )
        }
        Variant::Omega2 => unreachable!(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleProbe {
    pub alpha: ExtremeRegularity,
    pub s: f64,
    pub closed_form: f64,
    pub brute_force: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub stages: usize,
    pub probes: Vec<OracleProbe>,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantReport {
    pub variant: String,
    pub zeta_infty: String,
    pub zeta_neg_infty: String,
    pub poles_neg_infty: Vec<PoleDoc>,
    /// The layout is reverse-engineered from its zeta functions.
    pub reconstruction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

/// Compares closed forms with stage-by-stage sums at real probe points.
pub fn oracle_check(
    m: &PointMassMeasure,
    ns: &ScaleSequence,
    stages: usize,
    probes: &[f64],
) -> Result<OracleCheck> {
    let forms = [
        (
            ExtremeRegularity::PosInf,
            ExtReal::PosInf,
            mzeta_infinity(m, ns)?,
        ),
        (
            ExtremeRegularity::NegInf,
            ExtReal::NegInf,
            mzeta_neg_infinity(m, ns)?,
        ),
    ];
    let mut out = Vec::new();
    for (tag, alpha, cf) in &forms {
        let regions = regularity_regions(m, ns, *alpha, stages)?;
        for &s in probes {
            let closed = cf.eval(Complex64::new(s, 0.0)).re;
            let brute: f64 = regions
                .iter()
                .flat_map(|r| r.new_intervals.iter())
                .map(|k| power(&k.length(), Complex64::new(s, 0.0)).re)
                .sum();
            out.push(OracleProbe {
                alpha: *tag,
                s,
                closed_form: closed,
                brute_force: brute,
                relative_error: ((brute - closed) / closed).abs(),
            });
        }
    }
    let max_relative_error = out.iter().map(|p| p.relative_error).fold(0.0, f64::max);
    Ok(OracleCheck {
        stages,
        probes: out,
        max_relative_error,
    })
}

pub fn variant_report(
    variant: Variant,
    ns: &ScaleSequence,
    window: &Window,
    verify: Option<(usize, &[f64])>,
) -> Result<VariantReport> {
    let m = PointMassMeasure::exact(variant);
    let pos = mzeta_infinity(&m, ns)?;
    let neg = mzeta_neg_infinity(&m, ns)?;
    let poles = pole_set(&neg, window);
    let oracle = match verify {
        Some((stages, probes)) => Some(oracle_check(&m, ns, stages, probes)?),
        None => None,
    };
    Ok(VariantReport {
        variant: variant.label().into(),
        zeta_infty: pos.render(),
        zeta_neg_infty: neg.render(),
        poles_neg_infty: PoleListDoc::new(&poles).poles,
        reconstruction: variant.is_reconstruction(),
        oracle,
    })
}

/// `["lo", "hi"]` as exact rationals.
pub fn span_document(span: &Span) -> [String; 2] {
    [format_rational(&span.lo), format_rational(&span.hi)]
}
