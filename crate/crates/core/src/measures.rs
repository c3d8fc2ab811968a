//! Binomial measures μ(h, w) on `[0,1]`: each construction interval keeps its
//! two end children of relative length `1/h`, the left one receiving the
//! fraction `1/w` of the mass and the right one `(w-1)/w`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, format_rational, int, ln_rational, Rational};

/// Deepest census / partition level enumerated by default.
pub const MAX_CENSUS_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialMeasureSpec {
    h: u32,
    w: Rational,
}

impl BinomialMeasureSpec {
    pub fn new(h: u32, w: Rational) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidParameter(format!("h = {h} must be >= 2")));
        }
        if w <= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "w = {} must exceed 1",
                format_rational(&w)
            )));
        }
        Ok(Self { h, w })
    }

    /// The measure on the Cantor set: 1/3 of the mass left, 2/3 right.
    pub fn cantor() -> Self {
        Self::new(3, int(3)).expect("valid")
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn left_weight(&self) -> Rational {
        self.w.recip()
    }

    pub fn right_weight(&self) -> Rational {
        (&self.w - Rational::one()) / &self.w
    }

    /// `h > 2` leaves a central gap of relative length `1 - 2/h`.
    pub fn has_gap(&self) -> bool {
        self.h > 2
    }

    pub fn log_h(&self, x: f64) -> f64 {
        x.ln() / (self.h as f64).ln()
    }

    /// `log_h w`.
    pub fn log_h_w(&self) -> f64 {
        ln_rational(&self.w) / (self.h as f64).ln()
    }

    /// `log_h (w - 1)`.
    pub fn log_h_w_minus_one(&self) -> f64 {
        ln_rational(&(&self.w - Rational::one())) / (self.h as f64).ln()
    }

    /// The spectrum results assume `h >= 2` and `w > 2`.
    pub fn within_spectrum_hypotheses(&self) -> bool {
        self.w > int(2)
    }

    /// `w = 2` gives equal weights, collapsing every regularity to one value.
    pub fn is_degenerate(&self) -> bool {
        self.w == int(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    Closed,
    Open,
    HalfOpenLeft,
    HalfOpenRight,
}

/// Subinterval of `[0,1]`. μ(h,w) has no atoms, so the kind never changes a
/// mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub kind: IntervalKind,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, kind: IntervalKind) -> Result<Self> {
        if lo.is_negative() || hi > Rational::one() || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "[{}, {}] is not a subinterval of [0,1] with positive length",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Self { lo, hi, kind })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, IntervalKind::Closed)
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Value in `[-∞, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regularity {
    pub value: ExtReal,
    /// Regularity range implied by the mass bracket when the CDF could not
    /// be resolved exactly at the requested depth.
    pub bounds: Option<(ExtReal, ExtReal)>,
    pub outside_hypotheses: bool,
}

/// Pair `(k1, k2)`: `k1` heavy steps out of every `k2` levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RegularityIndex {
    pub k1: u64,
    pub k2: u64,
}

impl RegularityIndex {
    pub fn new(k1: u64, k2: u64) -> Result<Self> {
        if k2 == 0 || k1 > k2 {
            return Err(Error::InvalidParameter(format!(
                "(k1, k2) = ({k1}, {k2}) needs 0 <= k1 <= k2 and k2 >= 1"
            )));
        }
        if k1.gcd(&k2) != 1 {
            return Err(Error::InvalidParameter(format!(
                "(k1, k2) = ({k1}, {k2}) must be relatively prime"
            )));
        }
        Ok(Self { k1, k2 })
    }

    /// `j` heavy steps out of `n`, reduced to lowest terms.
    pub fn reduced(j: u64, n: u64) -> Result<Self> {
        if n == 0 || j > n {
            return Err(Error::InvalidParameter(format!("cannot reduce {j}/{n}")));
        }
        let g = j.gcd(&n);
        Self::new(j / g, n / g)
    }

    /// The reflected index `(k2 - k1, k2)`.
    pub fn reflected(self) -> Self {
        Self {
            k1: self.k2 - self.k1,
            k2: self.k2,
        }
    }

    pub fn fraction(self) -> f64 {
        self.k1 as f64 / self.k2 as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdfValue {
    Exact(Rational),
    Bracket { lower: Rational, upper: Rational },
}

impl CdfValue {
    pub fn lower(&self) -> &Rational {
        match self {
            CdfValue::Exact(v) => v,
            CdfValue::Bracket { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            CdfValue::Exact(v) => v,
            CdfValue::Bracket { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            CdfValue::Exact(v) => Some(v),
            CdfValue::Bracket { .. } => None,
        }
    }
}

/// `μ([0, x])`, descending at most `depth` levels of the construction.
pub fn measure_cdf(spec: &BinomialMeasureSpec, x: &Rational, depth: usize) -> Result<CdfValue> {
    if depth == 0 {
        return Err(Error::InvalidParameter(
            "precision depth must be >= 1".into(),
        ));
    }
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::Domain(format!(
            "x = {} is outside [0,1]",
            format_rational(x)
        )));
    }
    let h = int(spec.h as i64);
    let (wl, wr) = (spec.left_weight(), spec.right_weight());
    let mut lo = Rational::zero();
    let mut len = Rational::one();
    let mut mass = Rational::one();
    let mut before = Rational::zero();
    for _ in 0..depth {
        let hi = &lo + &len;
        if x <= &lo {
            return Ok(CdfValue::Exact(before));
        }
        if x >= &hi {
            return Ok(CdfValue::Exact(before + mass));
        }
        let child = &len / &h;
        if x <= &(&lo + &child) {
            mass = &mass * &wl;
        } else if x < &(&hi - &child) {
            return Ok(CdfValue::Exact(before + &mass * &wl));
        } else {
            before += &mass * &wl;
            mass = &mass * &wr;
            lo = &hi - &child;
        }
        len = child;
    }
    let hi = &lo + &len;
    if x <= &lo {
        Ok(CdfValue::Exact(before))
    } else if x >= &hi {
        Ok(CdfValue::Exact(before + mass))
    } else {
        Ok(CdfValue::Bracket {
            upper: &before + &mass,
            lower: before,
        })
    }
}

fn log_ratio(mass: &Rational, length: &Rational) -> ExtReal {
    if mass.is_zero() {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(ln_rational(mass) / ln_rational(length))
    }
}

/// Coarse Hölder exponent `log μ(U) / log |U|`.
pub fn regularity(spec: &BinomialMeasureSpec, u: &Interval, depth: usize) -> Result<Regularity> {
    let length = u.length();
    if length == Rational::one() {
        return Err(Error::UndefinedRegularity(
            "|U| = 1 makes log|U| vanish; regularity is not defined".into(),
        ));
    }
    let upper_cdf = measure_cdf(spec, &u.hi, depth)?;
    let lower_cdf = measure_cdf(spec, &u.lo, depth)?;
    let outside_hypotheses = !spec.within_spectrum_hypotheses();
    match (upper_cdf.exact(), lower_cdf.exact()) {
        (Some(a), Some(b)) => Ok(Regularity {
            value: log_ratio(&(a - b), &length),
            bounds: None,
            outside_hypotheses,
        }),
        _ => {
            let max_mass = upper_cdf.upper() - lower_cdf.lower();
            let min_mass = {
                let m = upper_cdf.lower() - lower_cdf.upper();
                if m.is_negative() {
                    Rational::zero()
                } else {
                    m
                }
            };
            let mid = (&max_mass + &min_mass) / int(2);
            Ok(Regularity {
                value: log_ratio(&mid, &length),
                bounds: Some((log_ratio(&max_mass, &length), log_ratio(&min_mass, &length))),
                outside_hypotheses,
            })
        }
    }
}

/// `log_h w - (k1/k2) log_h (w - 1)`.
pub fn regularity_value(spec: &BinomialMeasureSpec, idx: RegularityIndex) -> f64 {
    spec.log_h_w() - idx.fraction() * spec.log_h_w_minus_one()
}

/// One interval of the level-n partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCell {
    pub interval: Interval,
    pub mass: Rational,
    pub heavy_steps: u64,
}

fn level_scale(h: u32, n: usize) -> Result<u128> {
    (h as u128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("h^n overflows for h = {h}, n = {n}")))
}

/// Walks the construction tree to depth `n`, calling `visit(left_numerator,
/// heavy_steps, mass)` at every leaf; the leaf is `[a/h^n, (a+1)/h^n]`.
fn walk_tree(h: u32, n: usize, visit: &mut impl FnMut(u128, u64)) {
    fn rec(
        a: u128,
        level: usize,
        n: usize,
        steps: u64,
        h: u128,
        visit: &mut impl FnMut(u128, u64),
    ) {
        if level == n {
            visit(a, steps);
            return;
        }
        rec(a * h, level + 1, n, steps, h, visit);
        rec(a * h + (h - 1), level + 1, n, steps + 1, h, visit);
    }
    rec(0, 0, n, 0, h as u128, visit);
}

#[derive(Debug, Clone)]
pub struct PartitionFamily {
    spec: BinomialMeasureSpec,
}

impl PartitionFamily {
    pub fn new(spec: BinomialMeasureSpec) -> Self {
        Self { spec }
    }

    pub fn spec(&self) -> &BinomialMeasureSpec {
        &self.spec
    }

    /// `h^-n`.
    pub fn mesh(&self, n: usize) -> Rational {
        rational::pow(
            &Rational::new(BigInt::one(), BigInt::from(self.spec.h)),
            n as u32,
        )
    }

    /// The `2^n` construction intervals of level `n`, left to right.
    pub fn level(&self, n: usize) -> Result<Vec<PartitionCell>> {
        if n > MAX_CENSUS_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "depth {n} exceeds the maximum {MAX_CENSUS_DEPTH}"
            )));
        }
        let scale = BigInt::from(level_scale(self.spec.h, n)?);
        let (left, right) = (self.spec.left_weight(), self.spec.right_weight());
        let masses: Vec<Rational> = (0..=n)
            .map(|j| rational::pow(&left, (n - j) as u32) * rational::pow(&right, j as u32))
            .collect();
        let mut cells = Vec::with_capacity(1 << n);
        walk_tree(self.spec.h, n, &mut |a, steps| {
            let lo = Rational::new(BigInt::from(a), scale.clone());
            let hi = Rational::new(BigInt::from(a + 1), scale.clone());
            cells.push(PartitionCell {
                interval: Interval::closed(lo, hi).expect("inside [0,1]"),
                mass: masses[steps as usize].clone(),
                heavy_steps: steps,
            });
        });
        Ok(cells)
    }
}

/// Census of the level-n construction intervals grouped by heavy-step count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub j: u64,
    pub idx: RegularityIndex,
    pub alpha: f64,
    #[serde(skip)]
    pub length: Rational,
    #[serde(skip)]
    pub mass: Rational,
    pub count: u64,
    pub outside_hypotheses: bool,
}

/// Exact enumeration of all `2^n` intervals of the level-n partition. Counts
/// come from walking the tree, not from a closed formula.
pub fn census(spec: &BinomialMeasureSpec, n: usize) -> Result<Vec<CensusRow>> {
    if n == 0 || n > MAX_CENSUS_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "census depth {n} must lie in 1..={MAX_CENSUS_DEPTH}"
        )));
    }
    let scale = level_scale(spec.h, n)?;
    let mut counts = vec![0u64; n + 1];
    let mut last = None;
    walk_tree(spec.h, n, &mut |a, steps| {
        debug_assert!(a < scale);
        debug_assert!(last.is_none_or(|prev| prev < a));
        last = Some(a);
        counts[steps as usize] += 1;
    });
    let (left, right) = (spec.left_weight(), spec.right_weight());
    let length = Rational::new(BigInt::one(), BigInt::from(scale));
    let outside_hypotheses = !spec.within_spectrum_hypotheses();
    (0..=n)
        .map(|j| {
            let idx = RegularityIndex::reduced(j as u64, n as u64)?;
            Ok(CensusRow {
                n,
                j: j as u64,
                idx,
                alpha: regularity_value(spec, idx),
                length: length.clone(),
                mass: rational::pow(&left, (n - j) as u32) * rational::pow(&right, j as u32),
                count: counts[j],
                outside_hypotheses,
            })
        })
        .collect()
}

/// `C(n, k)` by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn count_as_u64(c: &BigUint) -> Option<u64> {
    c.to_u64()
}
