//! Fractal strings as length data and as explicit interval layouts, with the
//! real-dimensional quantities derived from them: Minkowski dimension from the
//! lengths, box-counting estimates from the layout, Minkowski content bounds
//! and the lattice measurability criterion.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{
    self, format_rational, int, ln_biguint, ln_rational, parse_rational, rat, Rational,
};
use crate::tube;

/// Truncation depth used for "infinite" strings unless overridden.
pub const DEFAULT_DEPTH: usize = 16;
/// Bisection tolerance on lattice closed forms.
pub const LATTICE_DIMENSION_TOL: f64 = 1e-9;
/// Bisection tolerance for raw length data (result is only an estimate).
pub const RAW_DIMENSION_TOL: f64 = 1e-4;

/// One-gap lattice family: lengths `(1 - m r) r^(n-1)` with multiplicity `m^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeStringSpec {
    r: Rational,
    m: u64,
}

impl LatticeStringSpec {
    pub fn new(r: Rational, m: u64) -> Result<Self> {
        if !(r.is_positive() && r < Rational::one()) {
            return Err(Error::InvalidParameter(format!(
                "ratio r = {} must lie in (0,1)",
                format_rational(&r)
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("multiplier m must be >= 1".into()));
        }
        if Rational::from_integer(BigInt::from(m)) * &r >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "m·r ≥ 1 (m = {m}, r = {}): no gap, not a fractal string of total length 1",
                format_rational(&r)
            )));
        }
        Ok(Self { r, m })
    }

    /// The Cantor string: `r = 1/3`, `m = 2`.
    pub fn cantor() -> Self {
        Self::new(rat(1, 3), 2).expect("valid")
    }

    pub fn ratio(&self) -> &Rational {
        &self.r
    }

    pub fn multiplier(&self) -> u64 {
        self.m
    }

    /// `1 - m r`, the first length.
    pub fn first_length(&self) -> Rational {
        Rational::one() - int(self.m as i64) * &self.r
    }

    /// `log(1/r)`.
    pub fn log_inv_ratio(&self) -> f64 {
        -ln_rational(&self.r)
    }

    /// Oscillatory period `p = 2π / log(1/r)`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.log_inv_ratio()
    }

    /// Closed-form dimension `log m / log(1/r)` (0 when `m = 1`).
    pub fn dimension(&self) -> f64 {
        (self.m as f64).ln() / self.log_inv_ratio()
    }

    /// `l_n` for `n >= 1`.
    pub fn length(&self, n: usize) -> Rational {
        assert!(n >= 1);
        self.first_length() * rational::pow(&self.r, (n - 1) as u32)
    }

    pub fn multiplicity(&self, n: usize) -> BigUint {
        assert!(n >= 1);
        rational::pow_big(self.m, (n - 1) as u32)
    }

    pub fn ln_length(&self, n: usize) -> f64 {
        ln_rational(&self.first_length()) - (n - 1) as f64 * self.log_inv_ratio()
    }

    /// `Σ_{n<=N} m_n l_n = 1 - (m r)^N`.
    pub fn partial_total(&self, n_terms: usize) -> Rational {
        let mr = int(self.m as i64) * &self.r;
        Rational::one() - rational::pow(&mr, n_terms as u32)
    }

    /// First `n_terms` entries with the rule attached, so the sequence can be
    /// extended on demand.
    pub fn lengths(&self, n_terms: usize) -> LengthSequence {
        let entries = (1..=n_terms)
            .map(|n| LengthEntry {
                length: self.length(n),
                multiplicity: self.multiplicity(n),
            })
            .collect();
        LengthSequence::assemble(entries, Rational::one(), Some(self.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthEntry {
    pub length: Rational,
    pub multiplicity: BigUint,
}

/// Distinct lengths (strictly decreasing) with multiplicities.
#[derive(Debug, Clone)]
pub struct LengthSequence {
    entries: Vec<LengthEntry>,
    total: Rational,
    rule: Option<LatticeStringSpec>,
    ln_lengths: Vec<f64>,
    ln_mults: Vec<f64>,
}

impl PartialEq for LengthSequence {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.total == other.total && self.rule == other.rule
    }
}

impl LengthSequence {
    fn assemble(
        entries: Vec<LengthEntry>,
        total: Rational,
        rule: Option<LatticeStringSpec>,
    ) -> Self {
        let (ln_lengths, ln_mults) = match &rule {
            Some(spec) => (
                (1..=entries.len()).map(|n| spec.ln_length(n)).collect(),
                (0..entries.len())
                    .map(|k| k as f64 * (spec.m as f64).ln())
                    .collect(),
            ),
            None => (
                entries.iter().map(|e| ln_rational(&e.length)).collect(),
                entries
                    .iter()
                    .map(|e| ln_biguint(&e.multiplicity))
                    .collect(),
            ),
        };
        Self {
            entries,
            total,
            rule,
            ln_lengths,
            ln_mults,
        }
    }

    /// Raw finite length data; the total is the exact sum of `m l`.
    pub fn from_entries(entries: Vec<LengthEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invariant(
                "a length sequence needs at least one length".into(),
            ));
        }
        for (i, e) in entries.iter().enumerate() {
            if !e.length.is_positive() || e.length > Rational::one() {
                return Err(Error::Invariant(format!(
                    "length {} is not in (0,1]",
                    format_rational(&e.length)
                )));
            }
            if e.multiplicity.is_zero() {
                return Err(Error::Invariant("multiplicities must be positive".into()));
            }
            if i > 0 && entries[i - 1].length <= e.length {
                return Err(Error::Invariant(
                    "lengths must be strictly decreasing".into(),
                ));
            }
        }
        let total = entries
            .iter()
            .map(|e| &e.length * Rational::from_integer(BigInt::from(e.multiplicity.clone())))
            .fold(Rational::zero(), |acc, x| acc + x);
        Ok(Self::assemble(entries, total, None))
    }

    /// Groups an arbitrary multiset of lengths into distinct lengths.
    pub fn from_lengths<'a>(lengths: impl IntoIterator<Item = &'a Rational>) -> Result<Self> {
        let mut sorted: Vec<&Rational> = lengths.into_iter().collect();
        sorted.sort_by(|a, b| b.cmp(a));
        let mut entries: Vec<LengthEntry> = Vec::new();
        for l in sorted {
            match entries.last_mut() {
                Some(last) if &last.length == l => last.multiplicity += 1u32,
                _ => entries.push(LengthEntry {
                    length: l.clone(),
                    multiplicity: BigUint::one(),
                }),
            }
        }
        Self::from_entries(entries)
    }

    pub fn entries(&self) -> &[LengthEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn rule(&self) -> Option<&LatticeStringSpec> {
        self.rule.as_ref()
    }

    pub fn ln_length(&self, i: usize) -> f64 {
        self.ln_lengths[i]
    }

    pub fn ln_multiplicity(&self, i: usize) -> f64 {
        self.ln_mults[i]
    }

    /// Sum of `m l` over the stored entries.
    pub fn stored_total(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| &e.length * Rational::from_integer(BigInt::from(e.multiplicity.clone())))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Returns a sequence with at least `n` entries, extending through the
    /// attached lattice rule when necessary.
    pub fn extended(&self, n: usize) -> Result<LengthSequence> {
        if n <= self.entries.len() {
            return Ok(self.clone());
        }
        match &self.rule {
            Some(spec) => Ok(spec.lengths(n)),
            None => Err(Error::InvalidParameter(format!(
                "requested {n} lengths but only {} are available and no rule is attached",
                self.entries.len()
            ))),
        }
    }

    pub fn to_document(&self) -> LengthSequenceDoc {
        LengthSequenceDoc {
            lengths: self
                .entries
                .iter()
                .map(|e| LengthDoc {
                    l: e.length.clone(),
                    m: serde_json::Number::from_str(&e.multiplicity.to_string())
                        .expect("integer literal"),
                })
                .collect(),
            total: self.total.clone(),
        }
    }

    /// Rebuilds raw length data from its JSON document.
    pub fn from_document(doc: &LengthSequenceDoc) -> Result<Self> {
        let entries = doc
            .lengths
            .iter()
            .map(|d| {
                let m = BigUint::from_str(&d.m.to_string()).map_err(|_| {
                    Error::Parse(format!("multiplicity {} is not a positive integer", d.m))
                })?;
                Ok(LengthEntry {
                    length: d.l.clone(),
                    multiplicity: m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ls = Self::from_entries(entries)?;
        // A truncated infinite string states its full total; the listed
        // lengths may fall short of it but never exceed it.
        if doc.total < ls.total {
            return Err(Error::Invariant(format!(
                "stated total {} is smaller than Σ m l = {}",
                format_rational(&doc.total),
                format_rational(&ls.total)
            )));
        }
        ls.total = doc.total.clone();
        Ok(ls)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthDoc {
    #[serde(with = "rational::serde_str")]
    pub l: Rational,
    pub m: serde_json::Number,
}

/// `{"lengths":[{"l":"num/den","m":int}],"total":"num/den"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthSequenceDoc {
    pub lengths: Vec<LengthDoc>,
    #[serde(with = "rational::serde_str")]
    pub total: Rational,
}

/// Open interval `(lo, hi)` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// The three arrangements of the Cantor lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Middle-thirds Cantor string.
    Omega1,
    /// All lengths packed end to end from 0 in decreasing order; endpoints
    /// accumulate only at 1.
    Omega2,
    /// Lengths `3^-(2n-1)` and `3^-2n` paired inside the level-n gaps of a
    /// two-piece ratio-1/9 Cantor set on `[3/7, 1]`; the remaining lengths are
    /// packed from 0 and accumulate at 3/7.
    Omega3,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Omega1, Variant::Omega2, Variant::Omega3];

    pub fn label(self) -> &'static str {
        match self {
            Variant::Omega1 => "Ω1",
            Variant::Omega2 => "Ω2",
            Variant::Omega3 => "Ω3",
        }
    }

    /// Whether the layout was fitted to its `−∞` closed form rather than
    /// being the standard middle-thirds layout.
    pub fn is_reconstruction(self) -> bool {
        !matches!(self, Variant::Omega1)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "omega1" | "ω1" | "1" => Ok(Variant::Omega1),
            "omega2" | "ω2" | "2" => Ok(Variant::Omega2),
            "omega3" | "ω3" | "3" => Ok(Variant::Omega3),
            other => Err(Error::Parse(format!(
                "unknown variant {other:?} (expected omega1|omega2|omega3)"
            ))),
        }
    }
}

/// Disjoint open intervals of `[0,1]`, optionally tagged as the truncation of
/// an infinite recursive layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricString {
    intervals: Vec<OpenInterval>,
    depth: Option<usize>,
    layout: Option<Variant>,
}

impl GeometricString {
    /// A finite string. Intervals are sorted; overlap or endpoints outside
    /// `[0,1]` are rejected.
    pub fn new(mut intervals: Vec<OpenInterval>) -> Result<Self> {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        for iv in &intervals {
            if iv.lo.is_negative() || iv.hi > Rational::one() || iv.lo >= iv.hi {
                return Err(Error::Invariant(format!(
                    "interval ({}, {}) is not a nonempty subinterval of [0,1]",
                    format_rational(&iv.lo),
                    format_rational(&iv.hi)
                )));
            }
        }
        for pair in intervals.windows(2) {
            if pair[0].hi > pair[1].lo {
                return Err(Error::Invariant(format!(
                    "intervals ({}, {}) and ({}, {}) overlap",
                    format_rational(&pair[0].lo),
                    format_rational(&pair[0].hi),
                    format_rational(&pair[1].lo),
                    format_rational(&pair[1].hi)
                )));
            }
        }
        Ok(Self {
            intervals,
            depth: None,
            layout: None,
        })
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.intervals
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn layout(&self) -> Option<Variant> {
        self.layout
    }

    /// Upper bound on the length of any interval of the infinite layout that
    /// is missing from this truncation. `None` for finite strings.
    pub fn unresolved_bound(&self) -> Option<Rational> {
        match (self.layout, self.depth) {
            (Some(_), Some(d)) => Some(rational::pow(&rat(1, 3), d as u32 + 1)),
            _ => None,
        }
    }

    pub fn smallest_length(&self) -> Option<Rational> {
        self.intervals.iter().map(OpenInterval::length).min()
    }

    pub fn length_sequence(&self) -> Result<LengthSequence> {
        let lengths: Vec<Rational> = self.intervals.iter().map(OpenInterval::length).collect();
        LengthSequence::from_lengths(lengths.iter())
    }

    /// Closed components of `[0,1] \ Ω`, in order. Degenerate components
    /// (`lo == hi`) are single boundary points shared by adjacent intervals or
    /// lying at 0 or 1.
    pub fn boundary_components(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = Rational::zero();
        for iv in &self.intervals {
            out.push((cursor.clone(), iv.lo.clone()));
            cursor = iv.hi.clone();
        }
        out.push((cursor, Rational::one()));
        out
    }

    pub fn to_document(&self) -> GeometricStringDoc {
        GeometricStringDoc {
            intervals: self
                .intervals
                .iter()
                .map(|iv| [format_rational(&iv.lo), format_rational(&iv.hi)])
                .collect(),
        }
    }

    pub fn from_document(doc: &GeometricStringDoc) -> Result<Self> {
        let intervals = doc
            .intervals
            .iter()
            .map(|[a, b]| Ok(OpenInterval::new(parse_rational(a)?, parse_rational(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }
}

/// `{"intervals":[["a_num/den","b_num/den"]]}`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeometricStringDoc {
    pub intervals: Vec<[String; 2]>,
}

pub fn build_lattice_string(r: Rational, m: u64, n_terms: usize) -> Result<LengthSequence> {
    Ok(LatticeStringSpec::new(r, m)?.lengths(n_terms))
}

fn third_power(k: usize) -> Rational {
    rational::pow(&rat(1, 3), k as u32)
}

fn cantor_intervals(depth: usize) -> Vec<OpenInterval> {
    // Remaining pieces at level k are [a/3^k, (a+1)/3^k]; track numerators.
    let mut pieces: Vec<BigInt> = vec![BigInt::zero()];
    let mut out = Vec::new();
    let mut scale = BigInt::one();
    for _ in 0..depth {
        let next_scale: BigInt = &scale * 3;
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for a in &pieces {
            let base: BigInt = a * 3;
            out.push(OpenInterval::new(
                Rational::new(&base + 1, next_scale.clone()),
                Rational::new(&base + 2, next_scale.clone()),
            ));
            next.push(base.clone());
            next.push(base + 2);
        }
        pieces = next;
        scale = next_scale;
    }
    out
}

/// Packs `(length, count)` groups end to end starting at `start`.
fn pack(start: Rational, groups: &[(usize, BigUint)], out: &mut Vec<OpenInterval>) -> Rational {
    let mut cursor = start;
    for (k, count) in groups {
        let l = third_power(*k);
        let n = count.to_u64().expect("group count fits in u64");
        for _ in 0..n {
            let next = &cursor + &l;
            out.push(OpenInterval::new(cursor, next.clone()));
            cursor = next;
        }
    }
    cursor
}

fn packed_left_intervals(depth: usize) -> Vec<OpenInterval> {
    let groups: Vec<(usize, BigUint)> = (1..=depth)
        .map(|k| (k, rational::pow_big(2, k as u32 - 1)))
        .collect();
    let mut out = Vec::new();
    pack(Rational::zero(), &groups, &mut out);
    out
}

/// Left end of the ratio-1/9 accumulation set of the Ω3 layout.
pub fn omega3_hull_lo() -> Rational {
    rat(3, 7)
}

fn paired_intervals(depth: usize) -> Vec<OpenInterval> {
    let mut out = Vec::new();
    let hull_lo = omega3_hull_lo();
    let hull_len = Rational::one() - &hull_lo;
    let ninth = rat(1, 9);
    // Level-(n-1) pieces of the two-piece Cantor set, as left endpoints.
    let mut pieces = vec![hull_lo.clone()];
    let mut piece_len = hull_len;
    let mut used = vec![BigUint::zero(); depth + 1];
    let mut n = 1usize;
    while 2 * n - 1 <= depth {
        let child = &piece_len * &ninth;
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for p in &pieces {
            let gap_lo = p + &child;
            let odd = third_power(2 * n - 1);
            let mid = &gap_lo + &odd;
            out.push(OpenInterval::new(gap_lo, mid.clone()));
            used[2 * n - 1] += 1u32;
            if 2 * n <= depth {
                let even = third_power(2 * n);
                out.push(OpenInterval::new(mid.clone(), &mid + &even));
                used[2 * n] += 1u32;
            }
            next.push(p.clone());
            next.push(p + &piece_len - &child);
        }
        pieces = next;
        piece_len = child;
        n += 1;
    }
    let groups: Vec<(usize, BigUint)> = (1..=depth)
        .map(|k| (k, rational::pow_big(2, k as u32 - 1) - &used[k]))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    pack(Rational::zero(), &groups, &mut out);
    out
}

/// Truncation at generation `depth` of one of the three Cantor-length layouts.
/// Every variant contains exactly the lengths `3^-k` (`k <= depth`) with
/// multiplicity `2^(k-1)`.
pub fn realize_cantor_configuration(variant: Variant, depth: usize) -> Result<GeometricString> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    if depth > 24 {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} exceeds the supported maximum 24"
        )));
    }
    let intervals = match variant {
        Variant::Omega1 => cantor_intervals(depth),
        Variant::Omega2 => packed_left_intervals(depth),
        Variant::Omega3 => paired_intervals(depth),
    };
    let mut gs = GeometricString::new(intervals)?;
    gs.depth = Some(depth);
    gs.layout = Some(variant);
    Ok(gs)
}

/// Dimension estimate together with how much it can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub value: f64,
    pub tolerance: f64,
    /// `true` when derived from finite data without a closed-form rule.
    pub approximate: bool,
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, converges: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Abscissa of convergence of `Σ m_n l_n^σ`, found by bisection on `[0, 1]`.
pub fn minkowski_dimension_from_lengths(ls: &LengthSequence) -> DimensionEstimate {
    if let Some(spec) = ls.rule() {
        // Tail Σ_{n>N} m^(n-1) r^(σ(n-1)) is geometric with ratio m r^σ.
        let ln_m = (spec.multiplier() as f64).ln();
        let ln_r = -spec.log_inv_ratio();
        let value = bisect(0.0, 1.0, LATTICE_DIMENSION_TOL, |sigma| {
            ln_m + sigma * ln_r < 0.0
        });
        let value = if value <= LATTICE_DIMENSION_TOL {
            0.0
        } else {
            value
        };
        return DimensionEstimate {
            value,
            tolerance: LATTICE_DIMENSION_TOL,
            approximate: false,
        };
    }
    // Raw data: the series is judged convergent when the per-length terms
    // m_n l_n^σ shrink on average over the second half of the data.
    let n = ls.len();
    let start = n / 2;
    let converges = |sigma: f64| {
        if n - start < 2 {
            return sigma > 0.0;
        }
        let log_term = |i: usize| ls.ln_multiplicity(i) + sigma * ls.ln_length(i);
        let steps = (start + 1..n).map(|i| log_term(i) - log_term(i - 1));
        let count = (n - start - 1) as f64;
        steps.sum::<f64>() / count < 0.0
    };
    let value = bisect(0.0, 1.0, RAW_DIMENSION_TOL, converges);
    DimensionEstimate {
        value: if value <= RAW_DIMENSION_TOL {
            0.0
        } else {
            value
        },
        tolerance: RAW_DIMENSION_TOL,
        approximate: true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCount {
    pub epsilon: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountEstimate {
    pub counts: Vec<BoxCount>,
    /// Least-squares slope of `log N` against `-log ε`; `None` for a
    /// single-scale grid.
    pub slope_estimate: Option<f64>,
}

/// Minimal number of closed intervals of length `eps` covering the boundary
/// set `[0,1] \ Ω`. Greedy left-to-right covering is optimal on the line.
pub fn covering_number(gs: &GeometricString, eps: &Rational) -> u64 {
    let mut count: u64 = 0;
    let mut cover_end: Option<Rational> = None;
    for (lo, hi) in gs.boundary_components() {
        let mut end = match cover_end.take() {
            Some(end) if end >= lo => end,
            _ => {
                count += 1;
                &lo + eps
            }
        };
        if hi > end {
            let extra = ((&hi - &end) / eps).ceil();
            count += extra.to_integer().to_u64().expect("count fits in u64");
            end += extra * eps;
        }
        cover_end = Some(end);
    }
    count
}

pub fn box_counting_dimension(
    gs: &GeometricString,
    eps_grid: &[Rational],
) -> Result<BoxCountEstimate> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidParameter("empty ε grid".into()));
    }
    for pair in eps_grid.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidParameter(
                "ε grid must be strictly decreasing".into(),
            ));
        }
    }
    let smallest_eps = eps_grid.last().expect("nonempty");
    if !smallest_eps.is_positive() {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    if let Some(min_len) = gs.smallest_length() {
        if gs.layout().is_some() && smallest_eps < &min_len {
            return Err(Error::Resolution(format!(
                "ε = {} is below the truncation resolution {}",
                format_rational(smallest_eps),
                format_rational(&min_len)
            )));
        }
    }
    let counts: Vec<BoxCount> = eps_grid
        .iter()
        .map(|eps| BoxCount {
            epsilon: rational::to_f64(eps),
            count: covering_number(gs, eps),
        })
        .collect();
    let slope_estimate = if counts.len() < 2 {
        None
    } else {
        let xs: Vec<f64> = eps_grid.iter().map(|e| -ln_rational(e)).collect();
        let ys: Vec<f64> = counts.iter().map(|c| (c.count as f64).ln()).collect();
        Some(least_squares_slope(&xs, &ys))
    };
    Ok(BoxCountEstimate {
        counts,
        slope_estimate,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Geometric grid `start, start·q, start·q², …` of `count` points.
pub fn geometric_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && start > 0.0 && stop > 0.0);
    let (a, b) = (start.ln(), stop.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentBounds {
    pub lower: f64,
    pub upper: f64,
    pub epsilon_grid: Vec<f64>,
}

/// Running min and max of `V(ε) ε^(D-1)` over the smallest-scale full
/// oscillation period of the grid (the whole grid without a lattice rule).
pub fn minkowski_content_bounds(
    ls: &LengthSequence,
    d: f64,
    eps_grid: &[f64],
) -> Result<ContentBounds> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!("D = {d} must lie in [0,1]")));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidParameter(
            "ε grid must be nonempty and positive".into(),
        ));
    }
    let eps_min = eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let window_top = match ls.rule() {
        Some(spec) => eps_min * spec.log_inv_ratio().exp(),
        None => f64::INFINITY,
    };
    let window: Vec<f64> = eps_grid
        .iter()
        .copied()
        .filter(|e| *e <= window_top * (1.0 + 1e-12))
        .collect();
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for &eps in &window {
        let v = tube::tube_volume_direct(ls, eps)?.volume * eps.powf(d - 1.0);
        lower = lower.min(v);
        upper = upper.max(v);
    }
    Ok(ContentBounds {
        lower,
        upper,
        epsilon_grid: window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurability {
    pub measurable: bool,
    pub witness: Option<Complex64>,
    pub explanation: String,
}

/// Lattice strings are never Minkowski measurable: their complex dimensions
/// include `D + i k p` for every integer `k`.
pub fn is_minkowski_measurable_lattice(spec: &LatticeStringSpec) -> Measurability {
    let witness = Complex64::new(spec.dimension(), spec.period());
    Measurability {
        measurable: false,
        witness: Some(witness),
        explanation: format!(
            "complex dimension {:.6}{:+.6}i has real part D = {:.6} but is not real; \
             the poles D + ikp (p = {:.6}) fill a vertical lattice",
            witness.re,
            witness.im,
            spec.dimension(),
            spec.period()
        ),
    }
}

/// Exact comparison helper used by layout invariants.
pub fn same_length_multiset(a: &GeometricString, b: &GeometricString) -> bool {
    let sorted = |g: &GeometricString| {
        let mut v: Vec<Rational> = g.intervals().iter().map(OpenInterval::length).collect();
        v.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
        v
    };
    sorted(a) == sorted(b)
}
