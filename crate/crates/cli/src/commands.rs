//! Command implementations. Each returns its text rendering, its JSON
//! rendering and an exit code; `main` picks the rendering.

use std::io::Read;
use std::path::Path;

use num_bigint::BigUint;
use optcode::construct::{
    self, auto_field, certify_generator, n_lower_bound, search_code, spec_lower_bound,
    validate_theorem2, CertifyOptions, ExponentPattern,
};
use optcode::convcode::{generalized_singleton, is_mds_profile, CodeSpec, PolyMatrix};
use optcode::exactla::IndexSet;
use optcode::gf::{Field, FieldDescriptor};
use optcode::superreg::{
    antidiagonal_ordering, is_superregular, is_trivial_minor, CheckMode, MinorAddress,
    SuperregOptions, SuperregReport, DEFAULT_MINOR_BUDGET,
};
use serde::Serialize;

use crate::args::{
    Cli, CodeCommand, Command, FieldArgs, FieldCommand, MatrixCommand, PatternCommand, SpecArgs,
};
use crate::docs::{GeneratorDocument, MatrixDocument, PatternDocument};
use crate::error::{CliError, EXIT_FALSE, EXIT_PASS};

/// Default cap on `q^{k(E+1)}` for `code distance`.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 100_000_000;

pub struct Output {
    pub code: i32,
    pub text: String,
    pub json: String,
}

impl Output {
    fn new<T: Serialize>(code: i32, value: &T, text: String) -> Result<Self, CliError> {
        Ok(Output {
            code,
            text,
            json: serde_json::to_string_pretty(value)?,
        })
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Field(FieldCommand::Info(a)) => field_info(a),
        Command::Matrix(MatrixCommand::CheckSuperregular { file, parallel }) => {
            check_superregular(file, *parallel, cli.budget)
        }
        Command::Pattern(PatternCommand::Triviality { file }) => triviality(file),
        Command::Code(c) => match c {
            CodeCommand::Bounds(s) => bounds(s),
            CodeCommand::Build {
                spec,
                field,
                p,
                degree,
                max_degree,
                out_generator,
                out_certificate,
            } => build(
                spec,
                field.as_deref(),
                p.zip(*degree),
                *max_degree,
                cli.budget,
                out_generator.as_deref(),
                out_certificate.as_deref(),
            ),
            CodeCommand::Distance { file, max_degree } => distance(file, *max_degree, cli.budget),
            CodeCommand::SearchField {
                spec,
                p,
                degree,
                max_q,
                trials,
                out_generator,
            } => search_field(
                spec,
                p.zip(*degree),
                *max_q,
                *trials,
                cli.seed,
                out_generator.as_deref(),
            ),
        },
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn field_name(d: &FieldDescriptor) -> String {
    format!("GF({}^{})", d.p, d.degree)
}

#[derive(Serialize)]
struct FieldInfo {
    field: FieldDescriptor,
    /// `p^N` in decimal.
    size: String,
    /// `p^N - 1` in decimal.
    group_order: String,
    alpha_verified: bool,
}

fn field_info(a: &FieldArgs) -> Result<Output, CliError> {
    let f = match &a.modulus {
        Some(m) => Field::with_modulus(a.p, a.degree, m.clone())?,
        None => Field::new(a.p, a.degree)?,
    };
    let info = FieldInfo {
        field: f.descriptor(),
        size: (f.group_order() + 1u32).to_string(),
        group_order: f.group_order().to_string(),
        alpha_verified: f.alpha_verified(),
    };
    let text = format!(
        "field: {}\nmodulus (c0..cN): {}\nsize: {}\ngroup order: {}\nalpha: {}\nalpha primitive: {}",
        field_name(&info.field),
        join(f.modulus()),
        info.size,
        info.group_order,
        info.field.alpha.as_deref().unwrap_or(""),
        if info.alpha_verified { "verified" } else { "unverified" }
    );
    Output::new(EXIT_PASS, &info, text)
}

fn check_superregular(
    file: &Path,
    parallel: bool,
    budget: Option<u64>,
) -> Result<Output, CliError> {
    let doc: MatrixDocument = serde_json::from_str(&read_input(file)?)?;
    let m = doc.to_matrix()?;
    let opts = SuperregOptions {
        mode: if parallel {
            CheckMode::Parallel
        } else {
            CheckMode::Deterministic
        },
        budget: budget.unwrap_or(DEFAULT_MINOR_BUDGET),
    };
    let report: SuperregReport = is_superregular(&m, &opts)?;
    let counts = format!(
        "{} minors checked, {} trivial skipped",
        report.minors_checked, report.trivial_skipped
    );
    let text = match &report.witness {
        None => format!("superregular ({counts})"),
        Some(w) => format!(
            "not superregular: minor rows {{{}}} cols {{{}}} is nontrivial with zero determinant ({counts})",
            join(w.rows.as_slice()),
            join(w.cols.as_slice())
        ),
    };
    let code = if report.is_superregular {
        EXIT_PASS
    } else {
        EXIT_FALSE
    };
    Output::new(code, &report, text)
}

#[derive(Serialize)]
struct TrivialityReport {
    rows: usize,
    cols: usize,
    structural_rank: usize,
    minor: Option<MinorAddress>,
    trivial: bool,
    /// Antidiagonal column ordering of a nontrivial square pattern, 0-based.
    antidiagonal_ordering: Option<Vec<usize>>,
    condition_violation: Option<construct::Violation>,
    /// `1 + Σ row maxima` of the exponents, in decimal.
    n_lower_bound: Option<String>,
}

fn triviality(file: &Path) -> Result<Output, CliError> {
    let doc: PatternDocument = serde_json::from_str(&read_input(file)?)?;
    let p = doc.support()?;
    let exponents: Option<ExponentPattern> = doc.exponent_pattern()?;
    let minor = match (&doc.rows, &doc.cols) {
        (None, None) => None,
        (Some(r), Some(c)) => Some(MinorAddress::new(
            IndexSet::new(r.clone())?,
            IndexSet::new(c.clone())?,
        )?),
        _ => {
            return Err(CliError::Usage(
                "give both rows and cols, or neither".into(),
            ))
        }
    };
    let trivial = match &minor {
        Some(a) => is_trivial_minor(&p, a)?,
        None if p.rows() == p.cols() => p.structural_rank() < p.rows(),
        None => {
            return Err(CliError::Usage(format!(
                "pattern is {}x{}; give rows and cols to select a square minor",
                p.rows(),
                p.cols()
            )))
        }
    };
    let ordering = (minor.is_none() && !trivial)
        .then(|| antidiagonal_ordering(&p).ok())
        .flatten();
    let report = TrivialityReport {
        rows: p.rows(),
        cols: p.cols(),
        structural_rank: p.structural_rank(),
        minor,
        trivial,
        antidiagonal_ordering: ordering,
        condition_violation: exponents.as_ref().and_then(validate_theorem2),
        n_lower_bound: exponents.as_ref().map(|e| n_lower_bound(e).to_string()),
    };
    let mut text = format!(
        "{}x{} pattern, structural rank {}\n{}",
        report.rows,
        report.cols,
        report.structural_rank,
        if trivial { "trivial" } else { "nontrivial" }
    );
    if let Some(o) = &report.antidiagonal_ordering {
        text += &format!("\nantidiagonal ordering: {}", join(o));
    }
    if exponents.is_some() {
        text += &match &report.condition_violation {
            None => "\nexponent conditions: satisfied".to_string(),
            Some(v) => format!(
                "\nexponent conditions: condition {} fails at {:?} against {:?}",
                v.condition, v.cell, v.other
            ),
        };
        text += &format!(
            "\nN lower bound: {}",
            report.n_lower_bound.as_deref().unwrap_or("")
        );
    }
    let code = if trivial { EXIT_PASS } else { EXIT_FALSE };
    Output::new(code, &report, text)
}

fn parse_spec(s: &SpecArgs) -> Result<CodeSpec, CliError> {
    Ok(CodeSpec::new(s.n, s.k, s.indices.clone(), s.mults.clone())?)
}

#[derive(Serialize)]
struct Bounds {
    spec: CodeSpec,
    degree: usize,
    generalized_singleton: usize,
    optimal_bound: usize,
    epsilon0: usize,
    mds_profile: bool,
}

fn bounds(s: &SpecArgs) -> Result<Output, CliError> {
    let spec = parse_spec(s)?;
    let b = Bounds {
        degree: spec.degree(),
        generalized_singleton: generalized_singleton(spec.n(), spec.k(), spec.degree()),
        optimal_bound: spec.optimal_bound(),
        epsilon0: spec.epsilon0(),
        mds_profile: is_mds_profile(&spec),
        spec,
    };
    let text = format!(
        "degree: {}\ngeneralized singleton: {}\noptimal bound: {}\nepsilon0: {}\nmds profile: {}",
        b.degree, b.generalized_singleton, b.optimal_bound, b.epsilon0, b.mds_profile
    );
    Output::new(EXIT_PASS, &b, text)
}

fn explicit_field(pn: Option<(u64, usize)>) -> Result<Option<Field>, CliError> {
    pn.map(|(p, n)| Field::new(p, n))
        .transpose()
        .map_err(CliError::from)
}

fn build(
    s: &SpecArgs,
    field: Option<&str>,
    pn: Option<(u64, usize)>,
    max_degree: usize,
    budget: Option<u64>,
    out_generator: Option<&Path>,
    out_certificate: Option<&Path>,
) -> Result<Output, CliError> {
    let spec = parse_spec(s)?;
    let f = match (field, explicit_field(pn)?) {
        (Some("auto"), _) => auto_field(&spec_lower_bound(&spec), max_degree)?,
        (Some(other), _) => {
            return Err(CliError::Usage(format!(
                "unknown field {other:?}; use auto or --p/--degree"
            )))
        }
        (None, Some(f)) => f,
        (None, None) => {
            return Err(CliError::Usage(
                "give --field auto or --p and --degree".into(),
            ))
        }
    };
    let mut opts = CertifyOptions::default();
    if let Some(b) = budget {
        opts.superreg.budget = b;
    }
    let g = construct::build_generator(&spec, &f)?;
    let cert = certify_generator(&spec, &g, &opts)?;
    if let Some(path) = out_generator {
        write_json(path, &GeneratorDocument::from_generator(&g))?;
    }
    if let Some(path) = out_certificate {
        write_json(path, &cert)?;
    }
    let text = format!(
        "field: {} (degree bound {}, {})\nepsilon0: {}\noptimal bound: {}\nsuperregular: {} ({} minors checked)\n{}",
        field_name(&cert.field),
        cert.n_lower_bound,
        if cert.field_meets_bound { "met" } else { "not met" },
        cert.epsilon0,
        cert.optimal_bound,
        cert.superreg_report.is_superregular,
        cert.superreg_report.minors_checked,
        match cert.certified_distance {
            Some(d) => format!("certified distance: {d}"),
            None => "not certified".to_string(),
        }
    );
    let code = if cert.certified_distance.is_some() {
        EXIT_PASS
    } else {
        EXIT_FALSE
    };
    Output::new(code, &cert, text)
}

#[derive(Serialize)]
struct DistanceReport {
    max_degree: usize,
    value: usize,
    exhaustive: bool,
    /// Message coefficients `u_0, ..., u_E` attaining the value.
    message: Vec<Vec<String>>,
}

fn distance(file: &Path, max_degree: usize, budget: Option<u64>) -> Result<Output, CliError> {
    let doc: GeneratorDocument = serde_json::from_str(&read_input(file)?)?;
    let g: PolyMatrix = doc.to_generator()?;
    let d = g.distance_up_to(max_degree, budget.unwrap_or(DEFAULT_DISTANCE_BUDGET))?;
    let f = g.field();
    let report = DistanceReport {
        max_degree,
        value: d.value,
        exhaustive: d.exhaustive,
        message: d
            .message
            .iter()
            .map(|u| u.iter().map(|e| f.format_element(e)).collect())
            .collect(),
    };
    let text = format!(
        "{} ({})",
        report.value,
        if report.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        }
    );
    Output::new(EXIT_PASS, &report, text)
}

/// Every `GF(p^N)` with `p^N <= max_q`, by increasing size.
fn small_fields(max_q: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for q in 2..=max_q {
        let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
        let (mut r, mut n) = (q, 0);
        while r % p == 0 {
            r /= p;
            n += 1;
        }
        if r == 1 {
            out.push((p, n));
        }
    }
    out
}

#[derive(Serialize)]
struct SearchReport {
    spec: CodeSpec,
    seed: u64,
    trials_per_field: u64,
    found: bool,
    field: Option<FieldDescriptor>,
    trial: Option<u64>,
    epsilon0: usize,
    generator: Option<GeneratorDocument>,
}

fn search_field(
    s: &SpecArgs,
    pn: Option<(u64, usize)>,
    max_q: u64,
    trials: u64,
    seed: Option<u64>,
    out_generator: Option<&Path>,
) -> Result<Output, CliError> {
    let spec = parse_spec(s)?;
    let seed =
        seed.ok_or_else(|| CliError::Usage("code search-field needs an explicit --seed".into()))?;
    let candidates = match pn {
        Some(pn) => vec![pn],
        None => small_fields(max_q),
    };
    let mut hit = None;
    for (p, n) in candidates {
        let f = Field::new(p, n)?;
        if let Some(h) = search_code(&spec, &f, trials, seed)? {
            hit = Some(h);
            break;
        }
    }
    let generator = hit
        .as_ref()
        .map(|h| GeneratorDocument::from_generator(&h.generator));
    if let (Some(path), Some(g)) = (out_generator, &generator) {
        write_json(path, g)?;
    }
    let report = SearchReport {
        epsilon0: spec.epsilon0(),
        spec,
        seed,
        trials_per_field: trials,
        found: hit.is_some(),
        field: hit.as_ref().map(|h| h.generator.field().descriptor()),
        trial: hit.as_ref().map(|h| h.trial),
        generator,
    };
    let text = match (&report.field, report.trial) {
        (Some(fd), Some(t)) => format!(
            "found over {} at trial {} (q = {})",
            field_name(fd),
            t,
            BigUint::from(fd.p).pow(fd.degree as u32)
        ),
        _ => "no superregular filling found".to_string(),
    };
    let code = if report.found { EXIT_PASS } else { EXIT_FALSE };
    Output::new(code, &report, text)
}
