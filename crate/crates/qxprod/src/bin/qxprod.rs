//! Command-line entry point: exact symbolic suites, numeric series
//! checks, invariant-integral property runs, and GNS equivalence checks.
//!
//! Exit codes: 0 all checks passed, 1 a verification failed, 2 parameter
//! or validation error, 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qxprod::catalog::catalog;
use qxprod::functionals::{
    hermitian_defect, min_gram_eigenvalue, parse_measure_file, random_element, FAElement, Family,
    FunctionalSpec, GridFunction, MeasureFile, UGen,
};
use qxprod::heisenberg::{closed_form_residual, gns_series_match, GnsSpace, GnsTarget,
    gram_is_exact_identity, normalized_gram, HeisenbergError};
use qxprod::ncalg::GenId;
use qxprod::report::RunReport;
use qxprod::represent::{
    adjoint_residuals, build_series, relation_residuals, window_exponent, ParamSet, RepError,
    SeriesRep, SERIES_LABELS,
};

const DEFAULT_SEED: u64 = 0x51582d31;

#[derive(Parser)]
#[command(
    name = "qxprod",
    version,
    about = "Verification toolkit for cross product algebras of quantum groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

// Parsed once at startup; the size spread between variants is harmless.
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand)]
enum Cmd {
    /// Run the exact symbolic suites (zero-residual identities).
    VerifySymbolic(VerifySymbolicArgs),
    /// Build one series member and verify its relations and adjoints.
    CheckSeries(CheckSeriesArgs),
    /// Evaluate or property-test one invariant integral.
    Functional(FunctionalArgs),
    /// Verify one GNS-to-series unitary equivalence.
    Proposition(PropositionArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifySymbolicArgs {
    /// Suites to run.  `all` runs everything, `none` gives an empty
    /// report.  Known suites: hopf, star, module-algebra, cross,
    /// derived, star-forms, coideal, isomorphism, weyl, confluence.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    /// Seed for the randomized confluence smoke test.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckSeriesArgs {
    /// Series label, e.g. `e2eq2-II` or `disc-I1`.
    #[arg(long)]
    label: String,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 12)]
    radius: i64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Epsilon sign for the series that carry one.
    #[arg(long)]
    eps: Option<f64>,
    /// Diagonal parameters as comma-separated eigenvalue lists.
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    b: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    h: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    a1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    a2: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    h1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    h2: Vec<f64>,
    /// Unitary parameters (real values).
    #[arg(long, value_delimiter = ',')]
    v: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    w: Vec<f64>,
    /// Write each generator matrix in coordinate-list form (`row col re
    /// im` lines) into this directory.
    #[arg(long)]
    export: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Eval,
    Invariance,
    Gram,
}

#[derive(Args)]
struct FunctionalArgs {
    /// One of: eq2-mu0, cq-mu0, su-mu0, disc-mu0, disc-tail,
    /// discplus-mu0.
    #[arg(long)]
    family: String,
    #[arg(long, value_enum)]
    task: Task,
    /// Measure file: `point weight` atom lines plus one `krange min max`
    /// line; defaults to the two-atom standard measure.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random elements per property run.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PropositionArgs {
    /// Equivalence case: eq2, cq, su11, disc, disc-plus.
    #[arg(long = "case")]
    case: String,
    /// Atom measure file; defaults to the two-atom standard measure.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 12)]
    radius: i64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also compare the GNS matrices with the closed-form displays.
    #[arg(long)]
    closed_forms: bool,
    #[command(flatten)]
    output: OutputArgs,
}

enum CmdError {
    Usage(String),
    Validation(String),
}

impl CmdError {
    fn code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 64,
            CmdError::Validation(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::Validation(m) => m,
        }
    }
}

fn validation(e: impl std::fmt::Display) -> CmdError {
    CmdError::Validation(e.to_string())
}

fn rep_error(e: RepError) -> CmdError {
    match e {
        RepError::UnknownSeries(l) => CmdError::Usage(format!(
            "unknown series label `{l}`; known labels: {}",
            SERIES_LABELS.join(", ")
        )),
        other => validation(other),
    }
}

fn heis_error(e: HeisenbergError) -> CmdError {
    match e {
        HeisenbergError::Rep(e) => rep_error(e),
        other => validation(other),
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 64;
        }
    };
    let (result, output) = match cli.cmd {
        Cmd::VerifySymbolic(a) => (cmd_verify_symbolic(&a), a.output),
        Cmd::CheckSeries(a) => (cmd_check_series(&a), a.output),
        Cmd::Functional(a) => (cmd_functional(&a), a.output),
        Cmd::Proposition(a) => (cmd_proposition(&a), a.output),
    };
    match result {
        Ok(report) => {
            let rendered = match output.format {
                Format::Human => report.render_table(),
                Format::Json => report.to_json(),
            };
            print!("{rendered}");
            if let Some(path) = &output.out {
                if let Err(e) = fs::write(path, &rendered) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

// ---------------------------------------------------------------------------
// verify-symbolic
// ---------------------------------------------------------------------------

fn cmd_verify_symbolic(args: &VerifySymbolicArgs) -> Result<RunReport, CmdError> {
    let cat = catalog();
    let mut report = RunReport::new("verify-symbolic");
    report.set_seed(args.seed);
    for suite in &args.suites {
        let recs = match suite.as_str() {
            "all" => {
                let mut r = cat.all_symbolic_checks();
                r.extend(cat.confluence_checks(4, args.seed, 60));
                r
            }
            "hopf" => cat.hopf_axiom_checks(3),
            "star" => cat.star_checks(),
            "module-algebra" => cat.module_algebra_checks(),
            "cross" => cat.cross_display_checks(),
            "derived" => cat.derived_identity_checks(),
            "star-forms" => cat.star_form_checks(),
            "coideal" => cat.coideal_checks(),
            "isomorphism" => cat.isomorphism_checks(),
            "weyl" => cat.u0_checks(),
            "confluence" => cat.confluence_checks(4, args.seed, 60),
            "none" => Vec::new(),
            other => return Err(CmdError::Usage(format!("unknown suite `{other}`"))),
        };
        for rec in &recs {
            report.exact(rec);
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// check-series
// ---------------------------------------------------------------------------

fn apply_overrides(args: &CheckSeriesArgs) -> ParamSet {
    let mut ps = ParamSet::baseline(args.q);
    let set = |dst: &mut Vec<f64>, src: &Vec<f64>| {
        if !src.is_empty() {
            *dst = src.clone();
        }
    };
    set(&mut ps.a, &args.a);
    set(&mut ps.b, &args.b);
    set(&mut ps.h, &args.h);
    set(&mut ps.a1, &args.a1);
    set(&mut ps.a2, &args.a2);
    set(&mut ps.h1, &args.h1);
    set(&mut ps.h2, &args.h2);
    if !args.v.is_empty() {
        ps.v = args.v.iter().map(|&x| Complex64::from(x)).collect();
    }
    if !args.w.is_empty() {
        ps.w = args.w.iter().map(|&x| Complex64::from(x)).collect();
    }
    if let Some(eps) = args.eps {
        ps.eps = eps;
    }
    ps
}

fn export_matrices(rep: &SeriesRep, dir: &Path) -> Result<(), CmdError> {
    fs::create_dir_all(dir).map_err(|e| validation(format!("cannot create {}: {e}", dir.display())))?;
    for gi in 0..rep.algebra.gen_count() {
        let name = rep.algebra.gen_name(GenId(gi as u16));
        let safe: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        let mut body = String::new();
        let m = &rep.mats[gi];
        for col in 0..rep.dim {
            for &(row, v) in m.column(col) {
                body.push_str(&format!("{row} {col} {:.17e} {:.17e}\n", v.re, v.im));
            }
        }
        let path = dir.join(format!("{}-{safe}.coo", rep.label));
        fs::write(&path, body)
            .map_err(|e| validation(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_check_series(args: &CheckSeriesArgs) -> Result<RunReport, CmdError> {
    let ps = apply_overrides(args);
    let rep = build_series(&args.label, &ps, args.radius).map_err(rep_error)?;
    let mut report = RunReport::new(format!("check-series {}", args.label));
    report.note(format!(
        "label {}, q = {}, radius = {}, dimension = {}",
        rep.label, rep.q, args.radius, rep.dim
    ));
    let interior = rep.interior.iter().filter(|b| **b).count();
    if interior == 0 {
        report.note("vacuous-pass: the radius leaves no interior columns".to_string());
    }
    for r in relation_residuals(&rep).map_err(rep_error)? {
        report.numeric(
            format!("{}/rel/{}", rep.label, r.name),
            rep.label.clone(),
            format!("defining relation {}", r.name),
            r.residual,
            args.tol,
        );
    }
    for r in adjoint_residuals(&rep).map_err(rep_error)? {
        report.numeric(
            format!("{}/adj/{}", rep.label, r.name),
            rep.label.clone(),
            format!("adjoint pair {}", r.name),
            r.residual,
            args.tol,
        );
    }
    if let Some(dir) = &args.export {
        export_matrices(&rep, dir)?;
        report.note(format!("matrices exported to {}", dir.display()));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// functional
// ---------------------------------------------------------------------------

fn read_measure(path: &Path) -> Result<MeasureFile, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_measure_file(&text).map_err(|e| CmdError::Usage(e.to_string()))
}

/// Signs atoms into the family's fundamental domain: the atomic disc
/// integral lives on negative points, everything else on positive ones.
fn domain_atoms(family: Family, atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
    atoms
        .iter()
        .map(|&(p, w)| match family {
            Family::Disc if p > 0.0 => (-p, w),
            _ => (p, w),
        })
        .collect()
}

const STANDARD_ATOMS: [(f64, f64); 2] = [(0.6, 1.0), (0.9, 0.5)];

struct FunctionalChoice {
    spec: FunctionalSpec,
    is_tail: bool,
}

fn functional_choice(
    name: &str,
    q: f64,
    measure: Option<&MeasureFile>,
) -> Result<FunctionalChoice, CmdError> {
    let (k_min, k_max) = measure.map_or((-24, 24), |m| (m.k_min, m.k_max));
    if name == "disc-tail" {
        let spec = FunctionalSpec::tail(q, k_min, k_max).map_err(validation)?;
        return Ok(FunctionalChoice {
            spec,
            is_tail: true,
        });
    }
    let family = match name {
        "eq2-mu0" => Family::Eq2,
        "cq-mu0" => Family::Cq,
        "su-mu0" => Family::Su11,
        "disc-mu0" => Family::Disc,
        "discplus-mu0" => Family::DiscPlus,
        other => {
            return Err(CmdError::Usage(format!(
                "unknown functional `{other}`; known: eq2-mu0, cq-mu0, su-mu0, disc-mu0, disc-tail, discplus-mu0"
            )))
        }
    };
    let atoms = domain_atoms(
        family,
        measure.map_or(&STANDARD_ATOMS[..], |m| &m.atoms),
    );
    let spec = FunctionalSpec::atomic(family, q, &atoms, k_min, k_max).map_err(validation)?;
    Ok(FunctionalChoice {
        spec,
        is_tail: false,
    })
}

/// Support window for random elements: the tail sum weights levels by
/// q^(-2k), so its window stays narrow to keep cancellation at scale.
fn sample_levels(is_tail: bool) -> (i64, i64) {
    if is_tail {
        (-3, 3)
    } else {
        (-4, 4)
    }
}

fn cmd_functional(args: &FunctionalArgs) -> Result<RunReport, CmdError> {
    let measure = args.measure.as_deref().map(read_measure).transpose()?;
    let choice = functional_choice(&args.family, args.q, measure.as_ref())?;
    let spec = &choice.spec;
    let mut report = RunReport::new(format!("functional {}", args.family));
    report.set_seed(args.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (lo, hi) = sample_levels(choice.is_tail);
    match args.task {
        Task::Eval => {
            let mut f = GridFunction::zero();
            for i in 0..spec.grid.atoms.len() {
                f.add_at(0, i, Complex64::new(1.0, 0.0));
            }
            let x = FAElement::monomial(
                spec.family(),
                &vec![0; spec.family().key_arity()],
                f,
            )
            .map_err(validation)?;
            let v = spec.evaluate(&x);
            report.push(qxprod::report::ReportLine {
                id: "eval/level-zero-indicator".to_string(),
                description: format!("weighted sum of the level-zero indicator = {} + {}i", v.re, v.im),
                anchor: args.family.clone(),
                residual: None,
                tolerance: None,
                pass: true,
            });
        }
        Task::Invariance => {
            let mut worst = [0.0f64; 4];
            for _ in 0..args.count {
                let x = random_element(&mut rng, &spec.grid, 3, lo, hi);
                for (slot, z) in UGen::ALL.into_iter().enumerate() {
                    let r = spec.invariance_residual(&x, z).map_err(validation)?;
                    worst[slot] = worst[slot].max(r);
                }
            }
            for (slot, z) in UGen::ALL.into_iter().enumerate() {
                report.numeric(
                    format!("invariance/{}", z.name()),
                    args.family.clone(),
                    format!(
                        "|h(x <| {}) - eps({}) h(x)| over {} random elements",
                        z.name(),
                        z.name(),
                        args.count
                    ),
                    worst[slot],
                    args.tol,
                );
            }
            if matches!(spec.family(), Family::Disc) {
                let r = balance_residual(spec, &mut rng, args.count);
                report.numeric(
                    "invariance/balance",
                    args.family.clone(),
                    format!(
                        "h(f(y/q^2)(1 - y/q^2)) = q^-2 h(f(y)(1 - y)) over {} random functions",
                        args.count
                    ),
                    r,
                    args.tol,
                );
            }
        }
        Task::Gram => {
            if args.count == 0 {
                report.note("empty span; nothing to check".to_string());
            } else {
                let xs: Vec<FAElement> = (0..args.count)
                    .map(|_| random_element(&mut rng, &spec.grid, 3, lo, hi))
                    .collect();
                let gram = spec.positivity_gram(&xs).map_err(validation)?;
                let scale = 1.0 + gram.iter().map(|v| v.norm()).fold(0.0, f64::max);
                report.numeric(
                    "gram/hermitian-defect",
                    args.family.clone(),
                    format!(
                        "Gram matrix of {} random elements is Hermitian (relative)",
                        args.count
                    ),
                    hermitian_defect(&gram) / scale,
                    1e-12,
                );
                let min = min_gram_eigenvalue(&gram);
                report.note(format!("minimum Gram eigenvalue {min:.3e}"));
                report.numeric(
                    "gram/positivity",
                    args.family.clone(),
                    format!(
                        "smallest Gram eigenvalue of {} random elements is nonnegative",
                        args.count
                    ),
                    (-min).max(0.0),
                    1e-10,
                );
            }
        }
    }
    Ok(report)
}

/// Largest two-sided defect of the scale balance on the disc grid.
fn balance_residual(spec: &FunctionalSpec, rng: &mut ChaCha8Rng, count: usize) -> f64 {
    use rand::Rng;
    let q = spec.grid.q;
    let mut worst = 0.0f64;
    for _ in 0..count.max(1) {
        let mut f = GridFunction::zero();
        for _ in 0..4 {
            let k = rng.gen_range(0..=4);
            let i = rng.gen_range(0..spec.grid.atoms.len());
            f.add_at(
                k,
                i,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let key = vec![0; spec.family().key_arity()];
        let lhs_f = f.arg_scaled(-1).map_points(&spec.grid, |y| 1.0 - y / (q * q));
        let rhs_f = f.map_points(&spec.grid, |y| 1.0 - y);
        let lhs = spec.evaluate(&FAElement::monomial(spec.family(), &key, lhs_f).unwrap());
        let rhs = spec.evaluate(&FAElement::monomial(spec.family(), &key, rhs_f).unwrap());
        worst = worst.max((lhs - rhs / (q * q)).norm());
    }
    worst
}

// ---------------------------------------------------------------------------
// proposition
// ---------------------------------------------------------------------------

fn proposition_targets(case: &str) -> Result<Vec<GnsTarget>, CmdError> {
    Ok(match case {
        "eq2" => vec![GnsTarget::Eq2],
        "cq" => vec![GnsTarget::Cq],
        "su11" => vec![GnsTarget::Su11],
        "disc" => vec![GnsTarget::DiscTail, GnsTarget::DiscAtomic],
        "disc-plus" => vec![GnsTarget::DiscPlusAtomic],
        other => {
            return Err(CmdError::Usage(format!(
                "unknown case `{other}`; known: eq2, cq, su11, disc, disc-plus"
            )))
        }
    })
}

fn cmd_proposition(args: &PropositionArgs) -> Result<RunReport, CmdError> {
    let measure = args.measure.as_deref().map(read_measure).transpose()?;
    let base_atoms: Vec<(f64, f64)> =
        measure.map_or(STANDARD_ATOMS.to_vec(), |m| m.atoms);
    let mut report = RunReport::new(format!("proposition {}", args.case));
    if matches!(args.case.as_str(), "eq2" | "cq") {
        let (beta, bval) = window_exponent(args.q).map_err(rep_error)?;
        report.note(format!(
            "beta = {beta}, window B value -q^(-beta-1)/lambda = {bval:.12}"
        ));
    }
    for target in proposition_targets(&args.case)? {
        let atoms: Vec<(f64, f64)> = if target == GnsTarget::DiscTail {
            Vec::new()
        } else {
            domain_atoms(target.family(), &base_atoms)
        };
        let m = gns_series_match(target, args.q, &atoms, args.radius).map_err(heis_error)?;
        for (gen, res) in &m.per_generator {
            report.numeric(
                format!("{}/{}", m.series, gen),
                m.series.clone(),
                format!(
                    "generator {gen} matches the series matrix on {} interior columns",
                    m.columns
                ),
                *res,
                args.tol,
            );
        }
        if target == GnsTarget::DiscTail {
            let spec = target
                .functional(args.q, &[], -24, 24)
                .map_err(heis_error)?;
            let gns = GnsSpace::new(spec, 3, 0, 5).map_err(heis_error)?;
            let gram = normalized_gram(&gns).map_err(heis_error)?;
            report.push(qxprod::report::ReportLine {
                id: "disc-I1/gram-identity".to_string(),
                description: "tail GNS Gram matrix is exactly the identity".to_string(),
                anchor: "disc-I1".to_string(),
                residual: None,
                tolerance: None,
                pass: gram_is_exact_identity(&gram),
            });
        }
        if args.closed_forms {
            let r = closed_form_residual(target, args.q, &atoms).map_err(heis_error)?;
            report.numeric(
                format!("{}/closed-forms", m.series),
                m.series.clone(),
                "GNS action matrices match the closed-form displays".to_string(),
                r,
                1e-12,
            );
        }
    }
    Ok(report)
}
