//! Subcommands, report rendering and exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use adhm_core::adhm::{is_adhm_solution, mu_residual, pn_coordinate_equations, random_datum, AdhmDatum, RandomMode};
use adhm_core::cohomology::{classify, hypercohomology_table, instanton_vanishing_table, Classification};
use adhm_core::config::RunConfig;
use adhm_core::monad::{build_monad, degeneration_info, restrict_to_line, verify_complex, DegenerationInfo, LocusEstimate};
use adhm_core::stability::{full_report, GlobalCheck, StabilityReport, SubspaceBasis, Verdict};
use adhm_core::symmetry::{find_equivalence, hom_space, moduli_dimension_certificate, Equivalence};
use adhm_core::variety::{VarietySpec, DEFAULT_DEGREE_BOUND};
use adhm_core::Field;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus;
use crate::error::CliError;
use crate::json::{
    parse_datum, parse_field, parse_variety, poly_matrix_to_value, render_datum, render_entry, render_matrix, render_variety,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ADHM_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "adhm-lab", version, about = "Exact computations with generalized ADHM data")]
struct Cli {
    /// Base field: `q` for the rationals or `fp:P` for a prime field.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random points of Y probed by sampled checks.
    #[arg(long, global = true, default_value_t = 12)]
    samples: usize,
    /// Largest degree tried by emptiness certificates and Hilbert functions.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_BOUND)]
    degree_bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Exit with status 3 when a result is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "generic")]
    Generic,
    #[value(name = "pn_solution_c1")]
    PnSolutionC1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the datum solve the ADHM equation on Y?
    Check {
        #[arg(long)]
        data: PathBuf,
        /// Variety file; defaults to P^(d+2).
        #[arg(long)]
        variety: Option<PathBuf>,
    },
    /// Every stability verdict with its subspaces and witnesses.
    Stability {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        variety: Option<PathBuf>,
    },
    /// The monad maps alpha and beta.
    Monad {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        variety: Option<PathBuf>,
        /// Print alpha and beta (the default when no other action is given).
        #[arg(long)]
        emit: bool,
        /// Check beta * alpha = 0 modulo I(Y).
        #[arg(long)]
        verify: bool,
        /// Locus where alpha drops rank.
        #[arg(long)]
        degeneration: bool,
    },
    /// Hypercohomology of the twisted complex on P^n.
    Cohomology {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        variety: Option<PathBuf>,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        kmin: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        kmax: i64,
        /// Evaluate the instanton vanishing conditions.
        #[arg(long)]
        vanishing: bool,
        /// Instanton sheaf or which kind of perverse instanton sheaf.
        #[arg(long)]
        classify: bool,
    },
    /// Search for a group element carrying one datum to another.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Let GL(W) act as well.
        #[arg(long)]
        framed: bool,
    },
    /// Dimension of the c = 1 moduli space on P^n by Jacobian ranks.
    ModuliDim {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// The bundled examples.
    Examples {
        #[arg(long)]
        name: Option<String>,
        /// Check the expected results (all examples without --name).
        #[arg(long)]
        verify: bool,
        /// Write `<name>.json` and the variety file into this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// A random datum as JSON.
    Random {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Falsified,
    Inconclusive,
}

struct Output {
    markdown: String,
    json: Value,
    status: Status,
}

impl Output {
    fn new(markdown: String, json: Value, status: Status) -> Self {
        Output { markdown, json, status }
    }
}

struct Ctx {
    field: Option<Field>,
    config: RunConfig,
}

impl Ctx {
    fn field(&self) -> Field {
        self.field.unwrap_or(Field::Rational)
    }

    /// Reads a datum and fixes the field for every later file.
    fn datum(&mut self, path: &Path) -> Result<AdhmDatum, CliError> {
        let x = parse_datum(&read(path)?, self.field).map_err(|e| locate(path, e))?;
        self.field = Some(x.field());
        Ok(x)
    }

    fn variety(&mut self, path: Option<&Path>, x: &AdhmDatum) -> Result<VarietySpec, CliError> {
        let y = match path {
            Some(p) => parse_variety(&read(p)?, self.field).map_err(|e| locate(p, e))?,
            None => VarietySpec::projective_space(x.field(), x.n())?,
        };
        if y.n() != x.n() {
            return Err(CliError::Usage(format!("datum has d = {} but the variety lives in P^{}", x.d(), y.n())));
        }
        Ok(y)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn locate(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Json { path: p, message } => CliError::Json {
            path: format!("{}: {p}", path.display()),
            message,
        },
        CliError::Syntax { line, column, message } => CliError::Syntax {
            line,
            column,
            message: format!("{} ({message})", path.display()),
        },
        other => other,
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let format = cli.format;
    let strict = cli.strict;
    match execute(cli) {
        Ok(o) => {
            let _ = match format {
                Format::Markdown => write!(out, "{}", o.markdown),
                Format::Json => write!(out, "{}", serde_json::to_string_pretty(&o.json).unwrap() + "\n"),
            };
            match o.status {
                Status::Ok => 0,
                Status::Falsified => 1,
                Status::Inconclusive => {
                    if strict {
                        3
                    } else {
                        0
                    }
                }
            }
        }
        Err(CliError::Core(adhm_core::Error::Inconclusive(msg))) => {
            let _ = writeln!(err, "inconclusive: {msg}");
            if strict {
                3
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<Output, CliError> {
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    let mut ctx = Ctx {
        field,
        config: RunConfig {
            seed: cli.seed,
            samples: cli.samples,
            degree_bound: cli.degree_bound,
            ..RunConfig::default()
        },
    };
    match cli.command {
        Command::Check { data, variety } => {
            let x = ctx.datum(&data)?;
            let y = ctx.variety(variety.as_deref(), &x)?;
            check(&x, &y)
        }
        Command::Stability { data, variety } => {
            let x = ctx.datum(&data)?;
            let y = ctx.variety(variety.as_deref(), &x)?;
            Ok(stability(&full_report(&x, &y, &ctx.config)?, &ctx.config))
        }
        Command::Monad {
            data,
            variety,
            emit,
            verify,
            degeneration,
        } => {
            let x = ctx.datum(&data)?;
            let y = ctx.variety(variety.as_deref(), &x)?;
            monad(&x, &y, &ctx.config, emit || !(verify || degeneration), verify, degeneration)
        }
        Command::Cohomology {
            data,
            variety,
            kmin,
            kmax,
            vanishing,
            classify,
        } => {
            if kmin > kmax {
                return Err(CliError::Usage(format!("--kmin {kmin} exceeds --kmax {kmax}")));
            }
            let x = ctx.datum(&data)?;
            let y = ctx.variety(variety.as_deref(), &x)?;
            ctx.config.kmin = kmin;
            ctx.config.kmax = kmax;
            cohomology(&x, &y, &ctx.config, vanishing, classify)
        }
        Command::Equiv { a, b, framed } => {
            let x1 = ctx.datum(&a)?;
            let x2 = ctx.datum(&b)?;
            equiv(&x1, &x2, framed, ctx.config.seed)
        }
        Command::ModuliDim { r, d, trials } => moduli(ctx.field(), r, d, trials, ctx.config.seed),
        Command::Examples { name, verify, write } => examples(ctx.field(), &ctx.config, name.as_deref(), verify, write.as_deref()),
        Command::Random { mode, c, r, d } => {
            let m = match mode {
                Mode::Generic => RandomMode::Generic,
                Mode::PnSolutionC1 => RandomMode::PnSolutionC1,
            };
            let x = random_datum(ctx.field(), c, r, d, m, ctx.config.seed)?;
            let text = render_datum(&x);
            // The datum itself is the machine-readable output in both formats.
            let json: Value = serde_json::from_str(&text).unwrap();
            Ok(Output::new(text, json, Status::Ok))
        }
    }
}

fn subspace_json(s: &SubspaceBasis) -> Value {
    Value::Array(s.vectors().iter().map(|v| Value::Array(v.iter().map(render_entry).collect())).collect())
}

fn check(x: &AdhmDatum, y: &VarietySpec) -> Result<Output, CliError> {
    let solution = is_adhm_solution(x, y)?;
    let mu = mu_residual(x);
    let mut md = format!("solution: {solution}\nresidual: {mu}\n");
    let mut json = json!({ "solution": solution, "residual": poly_matrix_to_value(&mu) });
    if y.is_projective_space() && x.has_equal_primes() {
        let eqs = pn_coordinate_equations(x)?;
        md.push_str("\n| equation | zero |\n|---|---|\n");
        let mut list = Vec::new();
        for e in &eqs {
            md.push_str(&format!("| {} | {} |\n", e.label, e.matrix.is_zero()));
            list.push(json!({ "label": e.label, "matrix": render_matrix(&e.matrix), "zero": e.matrix.is_zero() }));
        }
        json["coordinate_equations"] = Value::Array(list);
    }
    let status = if solution { Status::Ok } else { Status::Falsified };
    Ok(Output::new(md, json, status))
}

fn stability(rep: &StabilityReport, config: &RunConfig) -> Output {
    let mut md = format!(
        "seed: {}\nsolves equation: {}\n\n| flavor | verdict | basis | witness |\n|---|---|---|---|\n",
        config.seed, rep.solves_equation
    );
    let mut verdicts = serde_json::Map::new();
    for (name, v) in rep.ordered() {
        let w = v.witness.as_ref().map(ToString::to_string);
        md.push_str(&format!("| {name} | {} | {} | {} |\n", v.verdict, v.basis, w.as_deref().unwrap_or("")));
        verdicts.insert(name.into(), json!({ "verdict": v.verdict.as_str(), "basis": v.basis, "witness": w }));
    }
    md.push_str(&format!(
        "\nS_Y = {}\ncostable subspace = {}\nT_Y (sampled) = {}\nL_Y (sampled) = {}\n",
        rep.s_y, rep.costable_subspace, rep.t_y, rep.l_y
    ));
    let sampled: Vec<Value> = rep
        .sampled
        .iter()
        .map(|s| json!({ "point": s.point.to_string(), "s_yp": subspace_json(&s.s_yp), "costable_part": subspace_json(&s.costable_part) }))
        .collect();
    for v in &rep.lattice_violations {
        md.push_str(&format!("lattice violation: {v}\n"));
    }
    let unknown = rep.verdicts.values().any(|v| v.verdict == Verdict::Unknown);
    let json = json!({
        "seed": config.seed,
        "solves_equation": rep.solves_equation,
        "verdicts": verdicts,
        "s_y": subspace_json(&rep.s_y),
        "costable_subspace": subspace_json(&rep.costable_subspace),
        "t_y": subspace_json(&rep.t_y),
        "l_y": subspace_json(&rep.l_y),
        "sampled": sampled,
        "lattice_violations": rep.lattice_violations,
    });
    Output::new(md, json, if unknown { Status::Inconclusive } else { Status::Ok })
}

fn locus_json(info: &DegenerationInfo) -> Value {
    let locus = match &info.locus {
        LocusEstimate::Empty { degree } => json!({ "empty": true, "certificate_degree": degree }),
        LocusEstimate::Dimension { dim, codim, degree_bound } => {
            json!({ "empty": false, "dim": dim, "codim": codim, "degree_bound": degree_bound })
        }
    };
    json!({
        "locus": locus,
        "nondegenerate": info.nondegenerate,
        "witnesses": info.witnesses.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn locus_text(info: &DegenerationInfo) -> String {
    let locus = match &info.locus {
        LocusEstimate::Empty { degree } => format!("empty (certified in degree {degree})"),
        LocusEstimate::Dimension { dim, codim, degree_bound } => {
            format!("dimension {dim}, codimension {codim} (Hilbert function up to degree {degree_bound})")
        }
    };
    let w: Vec<String> = info.witnesses.iter().map(ToString::to_string).collect();
    format!(
        "degeneration locus: {locus}\nnondegenerate: {}\nwitnesses: {}\n",
        info.nondegenerate,
        if w.is_empty() { "none sampled".to_string() } else { w.join(", ") }
    )
}

fn monad(x: &AdhmDatum, y: &VarietySpec, config: &RunConfig, emit: bool, verify: bool, degeneration: bool) -> Result<Output, CliError> {
    let m = build_monad(x);
    let mut md = String::new();
    let mut json = json!({});
    let mut status = Status::Ok;
    if emit {
        md.push_str(&format!("alpha = {}\nbeta = {}\n", m.alpha(), m.beta()));
        json["n"] = json!(m.n());
        json["c"] = json!(m.c());
        json["r"] = json!(m.r());
        json["alpha"] = poly_matrix_to_value(m.alpha());
        json["beta"] = poly_matrix_to_value(m.beta());
    }
    if verify {
        let ok = verify_complex(&m, y)?;
        let line = restrict_to_line(&m)?;
        let framed = line.framings.iter().all(|f| f.is_isomorphism);
        md.push_str(&format!("complex: {ok}\nframed on the line: {framed}\n"));
        json["complex"] = json!(ok);
        json["framed_on_line"] = json!(framed);
        if !ok {
            status = Status::Falsified;
        }
    }
    if degeneration {
        let info = degeneration_info(x, y, config.degree_bound, config.samples, config.seed)?;
        md.push_str(&format!("seed: {}\n{}", config.seed, locus_text(&info)));
        json["seed"] = json!(config.seed);
        json["degeneration"] = locus_json(&info);
    }
    Ok(Output::new(md, json, status))
}

fn global_json(g: &GlobalCheck) -> Value {
    match g {
        GlobalCheck::CertifiedTrue { degree } => json!({ "verdict": "certified_true", "degree": degree }),
        GlobalCheck::False { witness } => json!({ "verdict": "false", "witness": witness.to_string() }),
        GlobalCheck::Unknown => json!({ "verdict": "unknown" }),
    }
}

fn classification(c: &Classification, config: &RunConfig) -> (String, Value, bool) {
    let mut md = format!("seed: {}\nclassification: {}\n", config.seed, c.kind.as_str());
    if let Some(q) = &c.qualifier {
        md.push_str(&format!("qualifier: {q}\n"));
    }
    if let Some(info) = &c.degeneration {
        md.push_str(&locus_text(info));
    }
    let ws = global_json(&c.weak_stability);
    md.push_str(&format!("global weak stability: {}\n", ws["verdict"].as_str().unwrap()));
    if let Some(ch) = c.charge {
        md.push_str(&format!("charge: {ch}\n"));
    }
    md.push_str(&format!("trivial on the line: {}\n", c.trivial_on_line));
    let inconclusive = c.degeneration.is_none() || c.weak_stability == GlobalCheck::Unknown;
    let json = json!({
        "seed": config.seed,
        "kind": c.kind.as_str(),
        "qualifier": c.qualifier,
        "degeneration": c.degeneration.as_ref().map(locus_json),
        "weak_stability": ws,
        "charge": c.charge,
        "trivial_on_line": c.trivial_on_line,
    });
    (md, json, inconclusive)
}

fn cohomology(x: &AdhmDatum, y: &VarietySpec, config: &RunConfig, vanishing: bool, classify_too: bool) -> Result<Output, CliError> {
    let m = build_monad(x);
    let mut md = String::new();
    let mut json = json!({});
    let mut status = Status::Ok;
    if y.is_projective_space() {
        let table = hypercohomology_table(&m, config.kmin, config.kmax)?;
        md.push_str("| q \\ k |");
        for k in table.kmin..=table.kmax {
            md.push_str(&format!(" {k} |"));
        }
        md.push_str(&format!("\n|---|{}\n", "---|".repeat(table.columns.len())));
        let mut rows = Vec::new();
        for q in 0..=table.n as i64 {
            md.push_str(&format!("| {q} |"));
            let mut row = Vec::new();
            for k in table.kmin..=table.kmax {
                let v = table.get(q, k).unwrap();
                md.push_str(&format!(" {v} |"));
                row.push(v);
            }
            md.push('\n');
            rows.push(row);
        }
        let failures = table.euler_failures(x.c(), x.r());
        md.push_str(&format!("\nEuler characteristic check: {}\n", if failures.is_empty() { "ok".to_string() } else { format!("fails at k = {failures:?}") }));
        json["kmin"] = json!(table.kmin);
        json["kmax"] = json!(table.kmax);
        json["dims"] = json!(rows);
        json["euler_failures"] = json!(failures);
        if !failures.is_empty() {
            status = Status::Falsified;
        }
        if vanishing {
            let checks = instanton_vanishing_table(&m, config.kmin, config.kmax)?;
            md.push_str("\n| condition | applies | passes | structural |\n|---|---|---|---|\n");
            let mut list = Vec::new();
            for c in &checks {
                md.push_str(&format!("| {} | {} | {} | {} |\n", c.label, c.applies, c.passes(), c.structural));
                list.push(json!({
                    "label": c.label, "applies": c.applies, "passes": c.passes(), "structural": c.structural,
                    "nonzero": c.nonzero.iter().map(|(q, k, v)| json!({"q": q, "k": k, "dim": v})).collect::<Vec<_>>(),
                }));
                if !c.passes() {
                    status = Status::Falsified;
                }
            }
            json["vanishing"] = Value::Array(list);
        }
    } else if vanishing || !classify_too {
        return Err(CliError::Usage("hypercohomology tables are only available on P^n; use --classify on other varieties".into()));
    }
    if classify_too {
        let c = classify(x, y, config)?;
        let (text, value, inconclusive) = classification(&c, config);
        md.push('\n');
        md.push_str(&text);
        json["classification"] = value;
        if inconclusive && status == Status::Ok {
            status = Status::Inconclusive;
        }
    }
    Ok(Output::new(md, json, status))
}

fn equiv(x1: &AdhmDatum, x2: &AdhmDatum, framed: bool, seed: u64) -> Result<Output, CliError> {
    let result = find_equivalence(x1, x2, framed, seed)?;
    let hom = hom_space(x1, x2)?.dimension;
    let mut md = format!("seed: {seed}\n");
    let mut json = json!({ "seed": seed, "framed": framed, "hom_dimension": hom });
    let status = match &result {
        Equivalence::Found(e) => {
            md.push_str(&format!("equivalent: true\ng = {}\n", e.g()));
            json["equivalent"] = json!(true);
            json["g"] = render_matrix(e.g());
            if let Some(h) = e.h() {
                md.push_str(&format!("h = {h}\n"));
                json["h"] = render_matrix(h);
            }
            Status::Ok
        }
        Equivalence::ProvablyNone { reason } => {
            md.push_str(&format!("equivalent: false\nreason: {reason}\n"));
            json["equivalent"] = json!(false);
            json["reason"] = json!(reason);
            Status::Ok
        }
        Equivalence::Inconclusive { solution_dim, trials } => {
            md.push_str(&format!(
                "equivalent: inconclusive\nno invertible solution among {trials} samples of a {solution_dim}-dimensional solution space\n"
            ));
            json["equivalent"] = json!("inconclusive");
            json["solution_dim"] = json!(solution_dim);
            json["trials"] = json!(trials);
            Status::Inconclusive
        }
    };
    md.push_str(&format!("dim Hom = {hom}\n"));
    Ok(Output::new(md, json, status))
}

fn moduli(field: Field, r: usize, d: usize, trials: usize, seed: u64) -> Result<Output, CliError> {
    let cert = moduli_dimension_certificate(field, r, d, trials, seed)?;
    let mut json = json!({
        "seed": seed, "r": r, "d": d, "empty": cert.empty, "ambient": cert.ambient,
        "equations": cert.equations, "group_dim": cert.group_dim,
        "dimension": cert.dimension, "formula": cert.formula,
        "full_rank": cert.full_rank_count(), "trials": cert.trials.len(),
    });
    if cert.empty {
        let md = format!("seed: {seed}\nM is empty: r = {r} <= d = {d}\n");
        return Ok(Output::new(md, json, Status::Ok));
    }
    let dim = cert.dimension.unwrap();
    let full = cert.full_rank_count();
    let mut md = format!("seed: {seed}\ndim M = {dim}, Jacobian full rank {full}/{}\n", cert.trials.len());
    md.push_str(&format!(
        "{} unknowns, {} equations, group dimension {}; closed formula gives {}\n",
        cert.ambient,
        cert.equations,
        cert.group_dim,
        cert.formula.unwrap()
    ));
    let agrees = cert.formula == cert.dimension;
    json["agrees_with_formula"] = json!(agrees);
    let status = if !agrees || full < cert.trials.len() { Status::Falsified } else { Status::Ok };
    Ok(Output::new(md, json, status))
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn examples(field: Field, config: &RunConfig, name: Option<&str>, verify: bool, write: Option<&Path>) -> Result<Output, CliError> {
    let records = match name {
        Some(n) => vec![corpus::load(n)?],
        None => corpus::load_all()?,
    };
    let mut md = String::new();
    let mut json = json!({});
    let mut status = Status::Ok;
    if let Some(dir) = write {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        for rec in &records {
            for (file, text) in [
                (format!("{}.json", rec.name), render_datum(&rec.datum(field)?)),
                (format!("{}.json", rec.variety_file), render_variety(&rec.variety(field)?)),
            ] {
                let path = dir.join(&file);
                std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                md.push_str(&format!("wrote {}\n", path.display()));
            }
        }
    }
    if verify {
        let reports = thread_pool()?.install(|| {
            records
                .par_iter()
                .map(|rec| corpus::verify(rec, field, config))
                .collect::<Result<Vec<_>, _>>()
        })?;
        md.push_str(&format!("seed: {}\n", config.seed));
        let mut list = Vec::new();
        for rep in &reports {
            let total = rep.outcomes.len();
            let met = total - rep.failures();
            md.push_str(&format!("{}: {met}/{total} expectations met\n", rep.name));
            for o in rep.outcomes.iter().filter(|o| !o.passed) {
                md.push_str(&format!("  FAIL {}: observed {}\n", o.label, o.observed));
            }
            if rep.failures() > 0 {
                status = Status::Falsified;
            }
            list.push(json!({
                "name": rep.name,
                "met": met,
                "total": total,
                "checks": rep.outcomes.iter().map(|o| json!({"label": o.label, "passed": o.passed, "observed": o.observed})).collect::<Vec<_>>(),
            }));
        }
        json["seed"] = json!(config.seed);
        json["examples"] = Value::Array(list);
    }
    if write.is_none() && !verify {
        match name {
            Some(_) => {
                let rec = &records[0];
                let x = rec.datum(field)?;
                let y = rec.variety(field)?;
                md.push_str(&format!("# {}\n\n{}\n\nvariety:\n{}\ndatum:\n{}", rec.name, rec.description, render_variety(&y), render_datum(&x)));
                json = json!({
                    "name": rec.name,
                    "description": rec.description,
                    "variety": serde_json::from_str::<Value>(&render_variety(&y)).unwrap(),
                    "datum": serde_json::from_str::<Value>(&render_datum(&x)).unwrap(),
                });
            }
            None => {
                let mut list = Vec::new();
                for rec in &records {
                    md.push_str(&format!("{}: {}\n", rec.name, rec.description));
                    list.push(json!({ "name": rec.name, "description": rec.description }));
                }
                json = Value::Array(list);
            }
        }
    }
    Ok(Output::new(md, json, status))
}
