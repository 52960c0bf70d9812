//! The two-qubit worked example: the state family `ρ(θ)`, the amplitude
//! damping style channel pair `{E₁,E₂}`, `{F₁,F₂}`, printed closed forms for
//! the main quantities, and grid sweeps emitting CSV tables.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chain::{
    mixed_bound, optimize_permutations, verify_frames, BoundChain, FrameSet, SReading, SearchStrategy, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::{validate_channel, validate_density, Convention, DensityMatrix, KrausChannel, RandomSeed};

/// Tolerance for the per-row hard invariants of a sweep.
pub const SWEEP_TOL: f64 = 1e-9;

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleParams {
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    /// Mixing weight of the mixed bounds.
    pub t: f64,
}

impl ExampleParams {
    pub fn new(theta: f64, p: f64, q: f64, t: f64) -> Result<Self> {
        Ok(Self {
            theta: unit_interval("theta", theta)?,
            p: unit_interval("p", p)?,
            q: unit_interval("q", q)?,
            t: unit_interval("t", t)?,
        })
    }
}

/// `ρ(θ) = ¼ (B ⊕ B)` with `B = [[1, 2θ−1], [2θ−1, 1]]`.
pub fn rho_theta(theta: f64) -> Result<DensityMatrix> {
    let o = 2.0 * unit_interval("theta", theta)? - 1.0;
    #[rustfmt::skip]
    let m = [
        1.0, o, 0.0, 0.0,
        o, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, o,
        0.0, 0.0, o, 1.0,
    ].map(|x| 0.25 * x);
    validate_density(&ComplexMatrix::from_real(4, 4, &m)?, crate::quantum::GENERATED_TOL)
}

/// `N₁ = {E₁, E₂}` and `N₂ = {F₁, F₂}`, validated under [`Convention::RowSum`].
///
/// `E₁ = diag(1, √(1−p), 1, √(1−p))`, `E₂` has `√p` at (1,1) and (3,3);
/// `F₁ = diag(√(1−q), 1, √(1−q), 1)`, `F₂` has `√q` at (0,1) and (2,3).
pub fn example_channels(p: f64, q: f64) -> Result<(KrausChannel, KrausChannel)> {
    let (p, q) = (unit_interval("p", p)?, unit_interval("q", q)?);
    let sp = (1.0 - p).sqrt();
    let sq = (1.0 - q).sqrt();
    let mut e2 = [0.0; 16];
    e2[5] = p.sqrt();
    e2[15] = p.sqrt();
    let mut f2 = [0.0; 16];
    f2[1] = q.sqrt();
    f2[11] = q.sqrt();
    let tol = crate::quantum::GENERATED_TOL;
    let n1 = validate_channel(
        vec![ComplexMatrix::from_diagonal(&[1.0, sp, 1.0, sp]), ComplexMatrix::from_real(4, 4, &e2)?],
        Convention::RowSum,
        tol,
    )?;
    let n2 = validate_channel(
        vec![ComplexMatrix::from_diagonal(&[sq, 1.0, sq, 1.0]), ComplexMatrix::from_real(4, 4, &f2)?],
        Convention::RowSum,
        tol,
    )?;
    Ok((n1, n2))
}

/// Printed closed-form expressions for the worked example, evaluated
/// literally. Named after the CSV columns they fill.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForms {
    /// Product `I(ρ,N₁)·I(ρ,N₂)`.
    pub eq20: f64,
    /// Sum `I(ρ,N₁)+I(ρ,N₂)` as printed.
    pub eq21: f64,
    /// Endpoint bound.
    pub eq22: f64,
    /// `S_{2,1}`.
    pub eq23: f64,
    /// `S_{3,1}`.
    pub eq24: f64,
    /// `S_{3,2}`.
    pub eq25: f64,
}

impl ClosedForms {
    pub const NAMES: [&'static str; 6] = ["eq20", "eq21", "eq22", "eq23", "eq24", "eq25"];

    pub fn values(&self) -> [f64; 6] {
        [self.eq20, self.eq21, self.eq22, self.eq23, self.eq24, self.eq25]
    }
}

pub fn closed_forms(params: &ExampleParams) -> ClosedForms {
    let ExampleParams { theta, p, q, .. } = *params;
    let a = (1.0 - theta).sqrt() - theta.sqrt();
    let a4 = a.powi(4);
    let g = (theta * (1.0 - theta)).max(0.0).sqrt();
    let sp = (1.0 - p).sqrt();
    let sq = (1.0 - q).sqrt();
    let rp = p.sqrt();
    let b = (1.0 - 2.0 * g).powi(2);

    let eq20 = 0.25 * a4 * (1.0 - sp) * (1.0 - sq);
    let eq21 = (2.0 * g - 1.0) * (sp + sq - 2.0);
    let eq22 = a4 * (1.0 - sp) * (1.0 - sq).powi(2) / 8.0;
    let eq23 = b * (sp - 1.0) * (q + 8.0 * sq - 8.0) / 32.0;
    let eq24 = (4.0 * theta * theta - 4.0 * theta + 4.0 * g - 1.0)
        * (p * (q + 2.0 * sq - 2.0) - 8.0 * (sp - 1.0) * (2.0 * q + 9.0 * sq - 9.0))
        / 256.0;
    let eq25 = 3.0 * q / 256.0 * a4 * (sp - 1.0).powi(2)
        + b * (sp - 1.0).powi(2) * (sq - 1.0).powi(2) / 16.0
        + p / 16.0 * b * (sq - 1.0).powi(2)
        + q / 16.0 * b * (sp - 1.0).powi(2)
        + q * rp / 256.0 * b * (4.0 * sp + 3.0 * rp - 4.0);
    ClosedForms { eq20, eq21, eq22, eq23, eq24, eq25 }
}

/// Evenly spaced values `start, …, stop` (`count` of them, `stop` hit exactly).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidGrid(format!("{start}:{stop}:{count}")));
        }
        Ok(Self { start, stop, count })
    }

    pub fn point(v: f64) -> Self {
        Self { start: v, stop: v, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(
                |k| {
                    if k + 1 == self.count {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * (k as f64 / n)
                    }
                },
            )
            .collect()
    }

    fn check_unit(&self, name: &'static str) -> Result<()> {
        unit_interval(name, self.start)?;
        unit_interval(name, self.stop)?;
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:count`, or a single number for a one-point grid.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(s.to_owned());
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [v] => Ok(Grid::point(v.parse().map_err(|_| bad())?)),
            [a, b, n] => {
                Grid::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub theta: Grid,
    pub p: Grid,
    pub q: Grid,
    pub t: Grid,
    pub reading: SReading,
    pub search: (SearchStrategy, u64),
    /// Lattice position the relabelling search maximises.
    pub target: (usize, usize),
    pub seed: RandomSeed,
}

impl SweepSpec {
    pub fn new(theta: Grid, p: Grid, q: Grid, t: Grid) -> Self {
        Self {
            theta,
            p,
            q,
            t,
            reading: SReading::PairResolved,
            search: (SearchStrategy::Exhaustive, 576),
            target: (2, 1),
            seed: RandomSeed(0),
        }
    }

    /// Number of rows the sweep will produce.
    pub fn cardinality(&self) -> usize {
        self.theta.count * self.p.count * self.q.count * self.t.count
    }

    pub fn validate(&self) -> Result<()> {
        self.theta.check_unit("theta")?;
        self.p.check_unit("p")?;
        self.q.check_unit("q")?;
        self.t.check_unit("t")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub params: ExampleParams,
    pub product: f64,
    pub sum: f64,
    pub i_values: Vec<f64>,
    pub s21: f64,
    pub s31: f64,
    pub s32: f64,
    pub lemma1: f64,
    pub perm_opt: f64,
    pub mixed_product: f64,
    pub mixed_sum: f64,
    pub closed: ClosedForms,
    /// Hard invariants that failed on this row, empty when it is clean.
    pub violations: Vec<String>,
}

pub const CSV_HEADER: &str = "theta,p,q,t,product,sum,I1,I2,I3,I4,S21,S31,S32,lemma1,perm_opt,mixed_product,mixed_sum,eq20,eq21,eq22,eq23,eq24,eq25";

impl SweepRow {
    fn csv_fields(&self) -> Vec<f64> {
        let mut v = vec![self.params.theta, self.params.p, self.params.q, self.params.t, self.product, self.sum];
        v.extend(&self.i_values);
        v.extend([self.s21, self.s31, self.s32, self.lemma1, self.perm_opt, self.mixed_product, self.mixed_sum]);
        v.extend(self.closed.values());
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 + self.rows.len() * 300);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.csv_fields().into_iter().map(format_sig12).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn violations(&self) -> impl Iterator<Item = (&SweepRow, &String)> {
        self.rows.iter().flat_map(|r| r.violations.iter().map(move |v| (r, v)))
    }

    pub fn is_clean(&self) -> bool {
        self.rows.iter().all(|r| r.violations.is_empty())
    }
}

/// Formats `x` with 12 significant digits: fixed notation for exponents in
/// `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..12).contains(&exp) {
        let body = if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        let body = body.trim_end_matches('0').trim_end_matches('.');
        format!("{sign}{body}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let frac = if frac.is_empty() { String::new() } else { format!(".{frac}") };
        format!("{sign}{}{frac}e{exp}", &digits[..1])
    }
}

struct PointResult {
    chain: BoundChain,
    ordering: [f64; 5],
    s_cols: [f64; 3],
    perm_opt: crate::chain::PermutedBound,
    verdict_failures: Vec<String>,
}

fn evaluate_point(spec: &SweepSpec, theta: f64, p: f64, q: f64) -> Result<PointResult> {
    let state = rho_theta(theta)?;
    let (n1, n2) = example_channels(p, q)?;
    let frames = FrameSet::new(&state, &n1, &n2)?;
    let chain = BoundChain::from_frames(&frames, spec.reading);
    let s = &chain.s_values;
    let s_cols = [s.get(2, 1).unwrap(), s.get(3, 1).unwrap(), s.get(3, 2).unwrap()];

    let anchored = frames.s_lattice(SReading::PairResolved);
    let ordering = [
        chain.product,
        anchored.get(2, 1).unwrap(),
        anchored.get(3, 1).unwrap(),
        anchored.get(3, 2).unwrap(),
        chain.lemma1,
    ];

    let (strategy, budget) = spec.search;
    let best = optimize_permutations(&frames, spec.target.0, spec.target.1, strategy, budget, spec.seed, spec.reading)?;
    let opts = VerifyOptions {
        tol: SWEEP_TOL,
        target: spec.target,
        search: Some(spec.search),
        seed: spec.seed,
        t_grid: spec.t.values(),
        reading: SReading::PairResolved,
    };
    let verdict = verify_frames(&frames, &opts)?;
    let verdict_failures = verdict.hard_failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    Ok(PointResult { chain, ordering, s_cols, perm_opt: best, verdict_failures })
}

/// Evaluates every grid point, in lexicographic `(θ, p, q, t)` order.
///
/// The relabelling search runs once per `(θ, p, q)`; each `t` reuses it.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let points: Vec<(f64, f64, f64)> = spec
        .theta
        .values()
        .into_iter()
        .flat_map(|th| {
            let qs = spec.q.values();
            spec.p.values().into_iter().flat_map(move |p| {
                let qs = qs.clone();
                qs.into_iter().map(move |q| (th, p, q))
            })
        })
        .collect();
    let ts = spec.t.values();

    let results: Vec<Result<Vec<SweepRow>>> = points
        .par_iter()
        .map(|&(theta, p, q)| {
            let point = evaluate_point(spec, theta, p, q)?;
            let chain = &point.chain;
            let mut point_violations = point.verdict_failures.clone();
            let eq_probe = closed_forms(&ExampleParams::new(theta, p, q, 0.0)?);
            if (chain.product - eq_probe.eq20).abs() > SWEEP_TOL {
                point_violations.push(format!("product vs eq20: {:e}", (chain.product - eq_probe.eq20).abs()));
            }
            if (chain.lemma1 - eq_probe.eq22).abs() > SWEEP_TOL {
                point_violations.push(format!("lemma1 vs eq22: {:e}", (chain.lemma1 - eq_probe.eq22).abs()));
            }
            for w in point.ordering.windows(2) {
                if w[1] > w[0] + SWEEP_TOL {
                    point_violations.push(format!("ordering: {} < {}", w[0], w[1]));
                }
            }
            ts.iter()
                .map(|&t| {
                    let params = ExampleParams::new(theta, p, q, t)?;
                    let best = &point.perm_opt;
                    let mixed = mixed_bound(chain, best, t)?;
                    Ok(SweepRow {
                        params,
                        product: chain.product,
                        sum: chain.sum,
                        i_values: chain.i_values.clone(),
                        s21: point.s_cols[0],
                        s31: point.s_cols[1],
                        s32: point.s_cols[2],
                        lemma1: chain.lemma1,
                        perm_opt: best.value,
                        mixed_product: mixed.product,
                        mixed_sum: mixed.sum,
                        closed: closed_forms(&params),
                        violations: point_violations.clone(),
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::with_capacity(spec.cardinality());
    for r in results {
        rows.extend(r?);
    }
    Ok(SweepTable { rows })
}

/// A named sweep, written to `<name>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub name: &'static str,
    pub spec: SweepSpec,
}

/// Axis overrides applied to every figure.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GridOverrides {
    pub theta: Option<Grid>,
    pub p: Option<Grid>,
    pub q: Option<Grid>,
    pub t: Option<Grid>,
}

/// Default figure grids:
///
/// * `figure1`, `figure2`: `θ = 1`, `p, q ∈ [0,1]` on 51 points, `t = ½`
///   (product and sum forms read from the same table);
/// * `figure3`: `p = q = ½`, `θ ∈ [0,1]` on 101 points, `t = ½`;
/// * `figure4`: `θ = 1`, `p, q` on 51 points, `t ∈ {0, ¼, ½, ¾, 1}`.
pub fn default_figures(overrides: &GridOverrides) -> Vec<FigureSpec> {
    let surface = Grid { start: 0.0, stop: 1.0, count: 51 };
    let curve = Grid { start: 0.0, stop: 1.0, count: 101 };
    let t_sweep = Grid { start: 0.0, stop: 1.0, count: 5 };
    let base = [
        ("figure1", Grid::point(1.0), surface, surface, Grid::point(0.5)),
        ("figure2", Grid::point(1.0), surface, surface, Grid::point(0.5)),
        ("figure3", curve, Grid::point(0.5), Grid::point(0.5), Grid::point(0.5)),
        ("figure4", Grid::point(1.0), surface, surface, t_sweep),
    ];
    base.into_iter()
        .map(|(name, th, p, q, t)| FigureSpec {
            name,
            spec: SweepSpec::new(
                overrides.theta.unwrap_or(th),
                overrides.p.unwrap_or(p),
                overrides.q.unwrap_or(q),
                overrides.t.unwrap_or(t),
            ),
        })
        .collect()
}

/// Numeric quantity each closed form is compared against.
pub const DISCREPANCY_TARGETS: [(&str, &str); 6] =
    [("eq20", "product"), ("eq21", "sum"), ("eq22", "lemma1"), ("eq23", "S21"), ("eq24", "S31"), ("eq25", "S32")];

fn numeric_for(row: &SweepRow, k: usize) -> f64 {
    [row.product, row.sum, row.lemma1, row.s21, row.s31, row.s32][k]
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancySummary {
    pub formula: &'static str,
    pub quantity: &'static str,
    pub points: usize,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    /// Least-squares `r` in `printed ≈ r · numeric`; NaN when every numeric value is zero.
    pub fitted_ratio: f64,
}

/// `(θ, p, q)` and, per formula, `(numeric, printed)`.
pub type DiscrepancyPoint = ([f64; 3], [(f64, f64); 6]);

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub points: Vec<DiscrepancyPoint>,
    pub summary: Vec<DiscrepancySummary>,
}

/// Compares every printed closed form with the numeric pipeline. Rows with
/// the same `(θ, p, q)` (differing only in `t`) are reported once.
pub fn discrepancy_report(rows: &[SweepRow]) -> DiscrepancyReport {
    let mut points: Vec<DiscrepancyPoint> = Vec::new();
    for row in rows {
        let key = [row.params.theta, row.params.p, row.params.q];
        if points.iter().any(|(k, _)| *k == key) {
            continue;
        }
        let printed = row.closed.values();
        let pairs = std::array::from_fn(|k| (numeric_for(row, k), printed[k]));
        points.push((key, pairs));
    }
    let summary = DISCREPANCY_TARGETS
        .iter()
        .enumerate()
        .map(|(k, &(formula, quantity))| {
            let mut max_abs = 0.0f64;
            let mut max_rel = 0.0f64;
            let mut num_sq = 0.0;
            let mut cross = 0.0;
            for (_, vals) in &points {
                let (n, p) = vals[k];
                let abs = (n - p).abs();
                max_abs = max_abs.max(abs);
                if n != 0.0 {
                    max_rel = max_rel.max(abs / n.abs());
                }
                num_sq += n * n;
                cross += n * p;
            }
            DiscrepancySummary {
                formula,
                quantity,
                points: points.len(),
                max_abs_dev: max_abs,
                max_rel_dev: max_rel,
                fitted_ratio: if num_sq > 0.0 { cross / num_sq } else { f64::NAN },
            }
        })
        .collect();
    DiscrepancyReport { points, summary }
}

impl DiscrepancyReport {
    /// One row per grid point; for each formula the numeric value, printed
    /// value, absolute and relative deviation, and `printed / numeric`.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["theta".to_owned(), "p".to_owned(), "q".to_owned()];
        for (f, _) in DISCREPANCY_TARGETS {
            for suffix in ["numeric", "printed", "abs_dev", "rel_dev", "ratio"] {
                header.push(format!("{f}_{suffix}"));
            }
        }
        let mut out = header.join(",");
        out.push('\n');
        for (key, vals) in &self.points {
            let mut fields: Vec<f64> = key.to_vec();
            for &(n, p) in vals {
                let abs = (n - p).abs();
                let (rel, ratio) = if n != 0.0 { (abs / n.abs(), p / n) } else { (f64::NAN, f64::NAN) };
                fields.extend([n, p, abs, rel, ratio]);
            }
            let line: Vec<String> = fields.into_iter().map(format_sig12).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("formula,quantity,points,max_abs_dev,max_rel_dev,fitted_ratio\n");
        for s in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.formula,
                s.quantity,
                s.points,
                format_sig12(s.max_abs_dev),
                format_sig12(s.max_rel_dev),
                format_sig12(s.fitted_ratio)
            ));
        }
        out
    }
}
