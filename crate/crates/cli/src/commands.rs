use num_complex::Complex64;
use serde::Serialize;

use fractal_zeta::measures::{census as measure_census, BinomialMeasureSpec, RegularityIndex};
use fractal_zeta::mzeta::{variant_report, ScaleSequence};
use fractal_zeta::pzeta::{
    abscissa_numeric, partition_zeta_eval, sigma_curve, sigma_formula, spectrum_sample,
    PartitionZeta,
};
use fractal_zeta::rational::{format_rational, parse_rational, to_f64, Rational};
use fractal_zeta::strings::{
    box_counting_dimension, geometric_grid, minkowski_content_bounds, realize_cantor_configuration,
    LatticeStringSpec, Variant,
};
use fractal_zeta::tube::{
    comparison_rows, explicit_eps_max, lattice_tube_explicit, tube_volume_direct_exact, TubeRow,
};
use fractal_zeta::zeta::{
    complex_dimensions_lattice, cross_check_residue, zeta_closed_form_lattice, zeta_truncated,
    PoleListDoc, Window,
};
use fractal_zeta::{Error, Result};

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_text<T: Serialize>(header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Numerical(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

fn lattice(r: &str, m: u64) -> Result<LatticeStringSpec> {
    LatticeStringSpec::new(parse_rational(r)?, m)
}

fn measure(h: u32, w: &str) -> Result<BinomialMeasureSpec> {
    BinomialMeasureSpec::new(h, parse_rational(w)?)
}

fn positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

pub fn string_lattice(r: &str, m: u64, n_terms: usize) -> Result<String> {
    positive("--n-terms", n_terms)?;
    json(&lattice(r, m)?.lengths(n_terms).to_document())
}

pub fn string_realize(variant: &str, depth: usize) -> Result<String> {
    let v: Variant = variant.parse()?;
    json(&realize_cantor_configuration(v, depth)?.to_document())
}

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ZetaReport {
    s: Complex,
    dimension: f64,
    closed_form: Option<Complex>,
    closed_form_error: Option<String>,
    truncated: Complex,
    n_terms: usize,
    converges: bool,
    error_bound: Option<f64>,
}

pub fn zeta(r: &str, m: u64, s_re: f64, s_im: f64, n_terms: usize) -> Result<String> {
    positive("--n-terms", n_terms)?;
    let spec = lattice(r, m)?;
    let s = Complex64::new(s_re, s_im);
    let (closed_form, closed_form_error) = match zeta_closed_form_lattice(&spec, s) {
        Ok(v) => (Some(v.value.into()), None),
        Err(e @ Error::PoleProximity { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let t = zeta_truncated(&spec.lengths(n_terms), s, n_terms)?;
    json(&ZetaReport {
        s: s.into(),
        dimension: spec.dimension(),
        closed_form,
        closed_form_error,
        truncated: t.value.into(),
        n_terms,
        converges: t.converges,
        error_bound: t.error_bound(),
    })
}

pub fn dims(
    r: &str,
    m: u64,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    verify: bool,
) -> Result<String> {
    let spec = lattice(r, m)?;
    let w = Window::new(re_min, re_max, im_min, im_max)?;
    let poles = complex_dimensions_lattice(&spec, &w);
    if verify {
        for p in &poles {
            cross_check_residue(&spec, p)?;
        }
    }
    json(&PoleListDoc::new(&poles))
}

pub struct TubeRequest<'a> {
    pub r: &'a str,
    pub m: u64,
    pub grid: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub epsilon: Option<&'a str>,
    pub n_terms: usize,
    pub json: bool,
}

const TUBE_HEADER: [&str; 5] = [
    "epsilon",
    "v_direct",
    "v_explicit",
    "abs_diff",
    "normalized",
];

pub fn tube(req: &TubeRequest) -> Result<String> {
    positive("--n-terms", req.n_terms)?;
    let spec = lattice(req.r, req.m)?;
    let rows: Vec<TubeRow> = match req.epsilon {
        Some(text) => {
            let eps: Rational = parse_rational(text)?;
            let exact = tube_volume_direct_exact(&spec.lengths(1), &eps)?;
            let e = to_f64(&eps);
            let v_direct = to_f64(&exact);
            let v_explicit = if e <= explicit_eps_max(&spec) {
                Some(lattice_tube_explicit(&spec, e, req.n_terms)?.volume)
            } else {
                None
            };
            vec![TubeRow {
                epsilon: e,
                v_direct,
                v_explicit,
                abs_diff: v_explicit.map(|v| (v - v_direct).abs()),
                normalized: v_direct * e.powf(spec.dimension() - 1.0),
            }]
        }
        None => {
            if req.grid < 2 || !(req.eps_min > 0.0 && req.eps_min < req.eps_max) {
                return Err(Error::InvalidParameter(
                    "need --grid >= 2 and 0 < --eps-min < --eps-max".into(),
                ));
            }
            comparison_rows(
                &spec,
                &geometric_grid(req.eps_min, req.eps_max, req.grid),
                req.n_terms,
            )?
        }
    };
    if rows.iter().any(|r| r.v_explicit.is_none()) {
        eprintln!(
            "note: the explicit formula is only used for epsilon <= {}",
            explicit_eps_max(&spec)
        );
    }
    if req.json {
        json(&rows)
    } else {
        csv_text(
            &TUBE_HEADER,
            rows.iter().map(|r| {
                (
                    r.epsilon,
                    r.v_direct,
                    r.v_explicit,
                    r.abs_diff,
                    r.normalized,
                )
            }),
        )
    }
}

#[derive(Serialize)]
struct CensusLine {
    n: usize,
    j: u64,
    k1_reduced: u64,
    k2_reduced: u64,
    alpha: f64,
    length: String,
    count: u64,
}

pub fn census(h: u32, w: &str, n: usize, all_levels: bool, as_json: bool) -> Result<String> {
    let spec = measure(h, w)?;
    if !spec.within_spectrum_hypotheses() {
        eprintln!("note: w <= 2 lies outside the hypotheses of the spectrum results");
    }
    let levels: Vec<usize> = if all_levels {
        (1..=n).collect()
    } else {
        vec![n]
    };
    let mut lines = Vec::new();
    for level in levels {
        for row in measure_census(&spec, level)? {
            lines.push(CensusLine {
                n: row.n,
                j: row.j,
                k1_reduced: row.idx.k1,
                k2_reduced: row.idx.k2,
                alpha: row.alpha,
                length: format_rational(&row.length),
                count: row.count,
            });
        }
    }
    if as_json {
        json(&lines)
    } else {
        csv_text(
            &[
                "n",
                "j",
                "k1_reduced",
                "k2_reduced",
                "alpha",
                "length",
                "count",
            ],
            lines,
        )
    }
}

#[derive(Serialize)]
struct PzetaReport {
    series: String,
    k1: u64,
    k2: u64,
    alpha: f64,
    abscissa_numeric: f64,
    sigma_formula: Option<f64>,
    value: Option<PzetaValue>,
}

#[derive(Serialize)]
struct PzetaValue {
    s: Complex,
    partial_sum: Complex,
    n_terms: usize,
    converges: bool,
    tail_bound: Option<f64>,
}

pub fn pzeta(
    h: u32,
    w: &str,
    k1: u64,
    k2: u64,
    s: Option<(f64, f64)>,
    n_terms: usize,
) -> Result<String> {
    let spec = measure(h, w)?;
    let pz = PartitionZeta::new(spec.clone(), RegularityIndex::new(k1, k2)?);
    let sigma = match sigma_formula(&spec, pz.alpha()) {
        Ok(v) => Some(v),
        Err(Error::Hypothesis(msg)) => {
            eprintln!("note: {msg}");
            None
        }
        Err(e) => return Err(e),
    };
    let value = match s {
        Some((re, im)) => {
            let v = partition_zeta_eval(&pz, Complex64::new(re, im), n_terms)?;
            Some(PzetaValue {
                s: v.s.into(),
                partial_sum: v.value.into(),
                n_terms: v.n_terms,
                converges: v.converges,
                tail_bound: v.tail_bound,
            })
        }
        None => None,
    };
    json(&PzetaReport {
        series: pz.describe(),
        k1,
        k2,
        alpha: pz.alpha(),
        abscissa_numeric: abscissa_numeric(&pz),
        sigma_formula: sigma,
        value,
    })
}

#[derive(Serialize)]
struct SpectrumLine {
    k1: u64,
    k2: u64,
    alpha: f64,
    sigma: f64,
    f_alpha: Option<f64>,
    is_max: bool,
}

pub fn spectrum(h: u32, w: &str, k: u64, curve: Option<usize>, as_json: bool) -> Result<String> {
    let spec = measure(h, w)?;
    if let Some(count) = curve {
        let points = sigma_curve(&spec, count)?;
        return if as_json {
            json(&points)
        } else {
            csv_text(&["alpha", "sigma"], points)
        };
    }
    let lines: Vec<SpectrumLine> = spectrum_sample(&spec, k)?
        .into_iter()
        .map(|p| SpectrumLine {
            k1: p.idx.k1,
            k2: p.idx.k2,
            alpha: p.alpha,
            sigma: p.sigma,
            f_alpha: p.f_alpha,
            is_max: p.is_max,
        })
        .collect();
    if as_json {
        json(&lines)
    } else {
        csv_text(&["k1", "k2", "alpha", "sigma", "f_alpha", "is_max"], lines)
    }
}

pub struct MzetaRequest<'a> {
    pub variant: Option<&'a str>,
    pub eta1: &'a str,
    pub eta_ratio: &'a str,
    pub im_max: f64,
    pub verify_stages: Option<usize>,
    pub verify_s: &'a str,
}

pub fn mzeta(req: &MzetaRequest) -> Result<String> {
    let ns = ScaleSequence::geometric(parse_rational(req.eta1)?, parse_rational(req.eta_ratio)?)?;
    let window = Window::new(-1.0, 2.0, -req.im_max, req.im_max)?;
    let probes: Vec<f64> = req
        .verify_s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad probe point {t:?} in --verify-s")))
        })
        .collect::<Result<_>>()?;
    if let Some(stages) = req.verify_stages {
        positive("--verify-stages", stages)?;
    }
    let verify = req.verify_stages.map(|n| (n, probes.as_slice()));
    match req.variant {
        Some(v) => json(&variant_report(v.parse()?, &ns, &window, verify)?),
        None => {
            let reports = Variant::ALL
                .iter()
                .map(|v| variant_report(*v, &ns, &window, verify))
                .collect::<Result<Vec<_>>>()?;
            json(&reports)
        }
    }
}

#[derive(Serialize)]
struct ContentWindow {
    top: f64,
    lower: f64,
    upper: f64,
    gap: f64,
}

#[derive(Serialize)]
struct ContentReport {
    d: f64,
    measurable: bool,
    windows: Vec<ContentWindow>,
}

pub fn content_bounds(
    r: &str,
    m: u64,
    d: Option<f64>,
    eps_max: f64,
    decades: u32,
    grid: usize,
) -> Result<String> {
    if grid < 2 || !(eps_max > 0.0) {
        return Err(Error::InvalidParameter(
            "need --grid >= 2 and --eps-max > 0".into(),
        ));
    }
    let spec = lattice(r, m)?;
    let ls = spec.lengths(1);
    let d = d.unwrap_or_else(|| spec.dimension());
    let ratio = to_f64(spec.ratio());
    let mut windows = Vec::new();
    for i in 0..=decades {
        let top = eps_max * 10f64.powi(-(i as i32));
        let b = minkowski_content_bounds(&ls, d, &geometric_grid(top * ratio, top, grid))?;
        windows.push(ContentWindow {
            top,
            lower: b.lower,
            upper: b.upper,
            gap: b.upper - b.lower,
        });
    }
    json(&ContentReport {
        d,
        measurable: fractal_zeta::strings::is_minkowski_measurable_lattice(&spec).measurable,
        windows,
    })
}

pub fn box_dim(variant: &str, depth: usize, eps: Option<&str>) -> Result<String> {
    let gs = realize_cantor_configuration(variant.parse()?, depth)?;
    let grid: Vec<Rational> = match eps {
        Some(list) => list.split(',').map(parse_rational).collect::<Result<_>>()?,
        None => (1..=depth as u32)
            .map(|k| fractal_zeta::rational::pow(&fractal_zeta::rational::rat(1, 3), k))
            .collect(),
    };
    json(&box_counting_dimension(&gs, &grid)?)
}
