//! Jobs: every subcommand reduces to a [`Job`], which is also the format of
//! `run --job` files.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use prism_nematic::conformal::gradient_sq_fd;
use prism_nematic::energy::{
    conformal_energy, lower_bound_lp, prism_lp_data, ElasticConstants, EnergyReport, LpConstraints,
};
use prism_nematic::invariants::{numeric_invariants, NumericInvariants};
use prism_nematic::sweep::{
    builtin_family, builtin_names, minimize_family, sweep_energy, ConfigFamily, FamilyMinimum,
    RowStatus, SpecTemplate,
};
use prism_nematic::{
    invariants_of, make_prism, Error, Orientation, Prism, RationalMap, RationalMapSpec, Sign,
    TopologicalInvariants,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::LpChoice;
use crate::format::{csv_table, sig12};

const DEFAULT_AREA_TOL: f64 = 1e-7;
const DEFAULT_ENERGY_TOL: f64 = 1e-8;
const DEFAULT_BRACKET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Invariants,
    Bounds,
    Energy,
    Sweep,
    Minimize,
    Field,
    Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prism: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<RationalMapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<SpecTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "K123", default, skip_serializing_if = "Option::is_none")]
    pub frank: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_constraints: Option<LpChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Job {
    pub fn new(command: Task) -> Self {
        Job {
            command,
            prism: None,
            spec: None,
            family: None,
            template: None,
            omega0: None,
            k: None,
            frank: None,
            tol: None,
            range: None,
            steps: None,
            grid: None,
            lp_constraints: None,
            seed: None,
            count: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad arguments, files or specs: exit status 1.
    Input(String),
    /// A numerical budget was exhausted: exit status 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// What a job produced. `failures` lists problems found after the output
/// was complete; any makes the exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub failures: Vec<String>,
}

impl Outcome {
    fn json<T: Serialize>(value: &T) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("reports serialize");
        body.push('\n');
        Outcome {
            body,
            failures: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub spec: RationalMapSpec,
    pub invariants: TopologicalInvariants,
    pub numeric: NumericInvariants,
    /// The numerical values reproduce the closed forms.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeReport {
    pub family: String,
    #[serde(flatten)]
    pub minimum: FamilyMinimum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub seed: u64,
    pub count: usize,
    pub worst_area_error: f64,
    pub worst_conformality_gap: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn require<T: Clone>(value: &Option<T>, field: &str, task: Task) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| input(format!("{} requires '{field}'", task_name(task))))
}

fn forbid<T>(value: &Option<T>, field: &str, task: Task) -> Result<(), CliError> {
    match value {
        Some(_) => Err(input(format!("'{field}' is not accepted by {}", task_name(task)))),
        None => Ok(()),
    }
}

fn task_name(task: Task) -> String {
    serde_json::to_value(task)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn prism_of(job: &Job) -> Result<Prism, CliError> {
    let [lx, ly, lz] = require(&job.prism, "prism", job.command)?;
    make_prism(lx, ly, lz).map_err(|e| input(format!("prism: {e}")))
}

fn map_of(spec: &RationalMapSpec) -> Result<RationalMap, CliError> {
    RationalMap::new(spec).map_err(|e| input(format!("spec: {e}")))
}

fn constants_of(job: &Job) -> Result<ElasticConstants, CliError> {
    let k = job.k.unwrap_or(1.0);
    let c = match job.frank {
        Some([k1, k2, k3]) => ElasticConstants::with_frank(k, k1, k2, k3),
        None => ElasticConstants::one_constant(k),
    };
    c.map_err(CliError::from)
}

fn positive(value: Option<f64>, default: f64, field: &str) -> Result<f64, CliError> {
    let v = value.unwrap_or(default);
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(input(format!("'{field}' must be positive, got {v}")))
    }
}

fn family_of(job: &Job) -> Result<ConfigFamily, CliError> {
    forbid(&job.spec, "spec", job.command)?;
    match (&job.family, &job.template) {
        (Some(name), None) => builtin_family(name).map_err(|e| {
            input(format!("family: {e}; known families: {}", builtin_names().join(", ")))
        }),
        (None, Some(t)) => {
            ConfigFamily::new("template", t.clone()).map_err(|e| input(format!("template: {e}")))
        }
        (Some(_), Some(_)) => Err(input("give exactly one of 'family' and 'template'")),
        (None, None) => Err(input(format!(
            "{} requires 'family' or 'template'",
            task_name(job.command)
        ))),
    }
}

fn forbid_family(job: &Job) -> Result<(), CliError> {
    forbid(&job.family, "family", job.command)?;
    forbid(&job.template, "template", job.command)
}

pub fn execute(job: &Job) -> Result<Outcome, CliError> {
    match job.command {
        Task::Invariants => invariants(job),
        Task::Bounds => bounds(job),
        Task::Energy => energy(job),
        Task::Sweep => sweep(job),
        Task::Minimize => minimize(job),
        Task::Field => field(job),
        Task::Check => check(job),
    }
}

fn invariants(job: &Job) -> Result<Outcome, CliError> {
    forbid_family(job)?;
    let spec = require(&job.spec, "spec", job.command)?;
    let tol = positive(job.tol, DEFAULT_AREA_TOL, "tol")?;
    let map = map_of(&spec)?;
    let closed = invariants_of(&map);
    let numeric = numeric_invariants(&map, tol)?;
    let consistent = (numeric.omega0_numeric - closed.omega0).abs()
        <= 10.0 * tol + numeric.omega0_numeric_err
        && [numeric.kx_numeric, numeric.ky_numeric, numeric.kz_numeric]
            == [closed.k_x, closed.k_y, closed.k_z]
        && [numeric.ex_sampled, numeric.ey_sampled, numeric.ez_sampled]
            == [closed.e_x, closed.e_y, closed.e_z];
    let mut out = Outcome::json(&InvariantsReport {
        spec,
        invariants: closed,
        numeric,
        consistent,
    });
    if !consistent {
        out.failures
            .push("numerical invariants disagree with the closed forms".into());
    }
    Ok(out)
}

fn bounds(job: &Job) -> Result<Outcome, CliError> {
    forbid_family(job)?;
    let prism = prism_of(job)?;
    let constants = constants_of(job)?;
    let omega0 = match (job.omega0, &job.spec) {
        (Some(w), None) if w.is_finite() => w,
        (Some(w), None) => return Err(input(format!("'omega0' must be finite, got {w}"))),
        (None, Some(spec)) => invariants_of(&map_of(spec)?).omega0,
        _ => return Err(input("bounds requires exactly one of 'omega0' and 'spec'")),
    };
    let mut report = EnergyReport::bounds(&prism, omega0, &constants);
    report.lower_lp = Some(lp_bound(&prism, omega0, constants.k, job.lp_constraints)?);
    Ok(Outcome::json(&report))
}

fn lp_bound(prism: &Prism, omega0: f64, k: f64, choice: Option<LpChoice>) -> Result<f64, CliError> {
    let (vertices, edges) = prism_lp_data(prism, omega0.abs());
    let constraints = match choice.unwrap_or(LpChoice::AllPairs) {
        LpChoice::AllPairs => LpConstraints::AllPairs,
        LpChoice::Edges => LpConstraints::Edges(edges),
    };
    Ok(lower_bound_lp(&vertices, &constraints, k)?.objective)
}

fn energy(job: &Job) -> Result<Outcome, CliError> {
    forbid_family(job)?;
    let prism = prism_of(job)?;
    let spec = require(&job.spec, "spec", job.command)?;
    let constants = constants_of(job)?;
    let tol = positive(job.tol, DEFAULT_ENERGY_TOL, "tol")?;
    let map = map_of(&spec)?;
    let omega0 = invariants_of(&map).omega0;
    let mut report = EnergyReport::bounds(&prism, omega0, &constants);
    report.lower_lp = Some(lp_bound(&prism, omega0, constants.k, job.lp_constraints)?);
    let exact = conformal_energy(&prism, &map, constants.k, tol * report.upper)?;
    Ok(Outcome::json(&report.with_exact(&prism, &exact)))
}

/// `steps` evenly spaced values from `a` to `b`.
fn parameter_grid(range: (f64, f64), steps: usize) -> Result<Vec<f64>, CliError> {
    let (a, b) = range;
    if !(a > 0.0 && b < 1.0 && a <= b) {
        return Err(input(format!("'range' must satisfy 0 < a <= b < 1, got {a}:{b}")));
    }
    match steps {
        0 => Err(input("'steps' must be at least 1")),
        1 => Ok(vec![a]),
        n => Ok((0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

fn sweep(job: &Job) -> Result<Outcome, CliError> {
    let family = family_of(job)?;
    let prism = prism_of(job)?;
    let k = constants_of(job)?.k;
    let tol = positive(job.tol, DEFAULT_ENERGY_TOL, "tol")?;
    let s_values = parameter_grid(job.range.unwrap_or((0.05, 0.95)), job.steps.unwrap_or(19))?;
    let upper = EnergyReport::bounds(&prism, invariants_of(&family.map_at(0.5)?).omega0, &ElasticConstants::one_constant(k)?).upper;
    let result = sweep_energy(&family, &prism, k, &s_values, tol * upper)?;

    let failures = result
        .rows
        .iter()
        .filter(|r| r.status == RowStatus::Accuracy)
        .map(|r| {
            format!(
                "s = {}: accuracy target not met, E = {} +- {}",
                r.s.map_or("-".to_string(), sig12),
                sig12(r.energy),
                sig12(r.energy_err)
            )
        })
        .collect();
    let body = csv_table(
        ["s", "E", "E_err", "eps_scaled", "lower", "upper"],
        result.rows.iter().map(|r| {
            [
                r.s.map_or(String::new(), sig12),
                sig12(r.energy),
                sig12(r.energy_err),
                sig12(r.scaled),
                sig12(r.lower),
                sig12(r.upper),
            ]
        }),
    );
    Ok(Outcome { body, failures })
}

fn minimize(job: &Job) -> Result<Outcome, CliError> {
    let family = family_of(job)?;
    let prism = prism_of(job)?;
    let k = constants_of(job)?.k;
    let tol = positive(job.tol, DEFAULT_BRACKET_TOL, "tol")?;
    let minimum = minimize_family(&family, &prism, k, tol)?;
    Ok(Outcome::json(&MinimizeReport {
        family: family.name,
        minimum,
    }))
}

fn field(job: &Job) -> Result<Outcome, CliError> {
    forbid_family(job)?;
    let prism = prism_of(job)?;
    let map = map_of(&require(&job.spec, "spec", job.command)?)?;
    let n = job.grid.unwrap_or(11);
    if n < 2 {
        return Err(input(format!("'grid' must be at least 2, got {n}")));
    }
    let half = prism.lengths().map(|l| l / 2.0);
    let coord = |axis: usize, i: usize| half[axis] * i as f64 / (n - 1) as f64;
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i == 0 && j == 0 && l == 0 {
                    continue;
                }
                let r = [coord(0, i), coord(1, j), coord(2, l)];
                let d = map.director(r)?;
                rows.push([r[0], r[1], r[2], d[0], d[1], d[2]].map(sig12));
            }
        }
    }
    Ok(Outcome {
        body: csv_table(["x", "y", "z", "nx", "ny", "nz"], rows),
        failures: Vec::new(),
    })
}

fn random_sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A valid spec of degree at most 7 with well-separated factors.
fn random_spec(rng: &mut impl Rng) -> RationalMapSpec {
    loop {
        let n: i32 = 2 * rng.gen_range(-2..=1) + 1;
        let mut spec = RationalMapSpec::new(random_sign(rng), n);
        for axis in 0..2 {
            let mut positions: Vec<f64> = (0..rng.gen_range(0..=1))
                .map(|_| rng.gen_range(0.1..0.9))
                .collect();
            positions.sort_by(f64::total_cmp);
            for p in positions {
                let sign = random_sign(rng);
                spec = if axis == 0 {
                    spec.with_real(p, sign)
                } else {
                    spec.with_imag(p, sign)
                };
            }
        }
        if rng.gen_bool(0.3) {
            let (m, th) = (rng.gen_range(0.15..0.85), rng.gen_range(0.15..FRAC_PI_2 - 0.15));
            spec = spec.with_complex(m * th.cos(), m * th.sin(), random_sign(rng));
        }
        if rng.gen_bool(0.25) {
            spec = spec.with_orientation(Orientation::Anticonformal);
        }
        if spec.degree() <= 7 && spec.validate().is_ok() {
            return spec;
        }
    }
}

struct SpecCheck {
    area_error: f64,
    conformality_gap: f64,
    problems: Vec<String>,
}

fn check_spec(spec: &RationalMapSpec, rng: &mut impl Rng) -> Result<SpecCheck, Error> {
    const AREA_TOL: f64 = 1e-6;
    let map = RationalMap::new(spec)?;
    let closed = invariants_of(&map);
    let numeric = numeric_invariants(&map, AREA_TOL)?;
    let mut problems = Vec::new();
    let area_error = (numeric.omega0_numeric - closed.omega0).abs();
    if area_error > 1e-5 {
        problems.push(format!("trapped area off by {area_error:.1e}"));
    }
    let kinks = [numeric.kx_numeric, numeric.ky_numeric, numeric.kz_numeric];
    if kinks != [closed.k_x, closed.k_y, closed.k_z] {
        problems.push(format!(
            "kink numbers {kinks:?} vs {:?}",
            [closed.k_x, closed.k_y, closed.k_z]
        ));
    }
    if [numeric.ex_sampled, numeric.ey_sampled, numeric.ez_sampled] != [closed.e_x, closed.e_y, closed.e_z] {
        problems.push("edge orientations disagree".into());
    }
    let mut conformality_gap = 0.0f64;
    for _ in 0..20 {
        let r: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.05..1.0));
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let grad = gradient_sq_fd(&map, r, 1e-5 * norm)?;
        let d = map.flux_field(r)?;
        let twice_d = 2.0 * d.iter().map(|x| x * x).sum::<f64>().sqrt();
        conformality_gap = conformality_gap.max((grad - twice_d).abs() / twice_d);
    }
    if conformality_gap > 1e-5 {
        problems.push(format!("|grad n|^2 differs from 2|D| by {conformality_gap:.1e}"));
    }
    Ok(SpecCheck {
        area_error,
        conformality_gap,
        problems,
    })
}

fn check(job: &Job) -> Result<Outcome, CliError> {
    let seed = job.seed.unwrap_or(0);
    let count = job.count.unwrap_or(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(RationalMapSpec, u64)> = (0..count).map(|_| (random_spec(&mut rng), rng.gen())).collect();
    let results: Vec<(RationalMapSpec, Result<SpecCheck, Error>)> = cases
        .into_par_iter()
        .map(|(spec, s)| {
            let r = check_spec(&spec, &mut ChaCha8Rng::seed_from_u64(s));
            (spec, r)
        })
        .collect();

    let mut report = CheckReport {
        seed,
        count,
        worst_area_error: 0.0,
        worst_conformality_gap: 0.0,
        failures: Vec::new(),
        passed: true,
    };
    for (spec, result) in results {
        let spec_json = serde_json::to_string(&spec).expect("specs serialize");
        match result {
            Ok(c) => {
                report.worst_area_error = report.worst_area_error.max(c.area_error);
                report.worst_conformality_gap = report.worst_conformality_gap.max(c.conformality_gap);
                report
                    .failures
                    .extend(c.problems.into_iter().map(|p| format!("{spec_json}: {p}")));
            }
            Err(e) => report.failures.push(format!("{spec_json}: {e}")),
        }
    }
    report.passed = report.failures.is_empty();
    let mut out = Outcome::json(&report);
    out.failures = report.failures;
    Ok(out)
}
