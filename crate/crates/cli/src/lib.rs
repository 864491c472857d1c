//! The `sumset` command line: reads instance files, runs verifiers and
//! experiments from `sumset-core`, and prints deterministic JSON.
//!
//! Exit codes: 0 when every report holds or the computation finished, 2 when
//! some hypothesis failed or a theorem does not apply, 3 when a certified
//! theorem was violated, 1 on input errors.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sumset_core::ffield::{make_field, FieldElem, FieldSpec};
use sumset_core::randexp::{
    affine_span_rate, exact_hash_stats, random_expansion_trial, surjectivity_rate, trial_rng, Mode, TrialConfig,
};
use sumset_core::shiftops::{delta_spaces_with_limit, nondeg_degree, PointList, DEFAULT_MAX_CELLS};
use sumset_core::sumsets::{is_full, iterate_sumset, sum_of_family, DensePointSet};
use sumset_core::verifiers::{
    crosscheck_phi, egz_bound_check, tight_example, tight_example_report, verify_2d, verify_main_finalp,
    verify_main_q, verify_main_symm, Limits, TheoremReport, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "sumset", version, about = "Certify iterated sumset expansion in F_q^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Largest q^n that may be materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS)]
    pub max_cells: u64,
    /// Trials for sampled experiments; overrides the instance file.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Output format; csv is only available for experiments.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Nondegeneracy degree of each set, with a vanishing witness.
    Nondeg { input: PathBuf },
    /// Graded leading-term spaces of each set.
    Deltas { input: PathBuf },
    /// Sum of the family, or the k-fold sumset of the first set.
    Sumset {
        input: PathBuf,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Size bound |A_1 + ... + A_m| >= N(p, n, D) over a prime field.
    VerifyMain { input: PathBuf },
    /// (p-1)-fold expansion of a set avoiding degree-n hypersurfaces.
    VerifySymm { input: PathBuf },
    /// Full expansion over F_q with a carry-free split; needs budgets.
    VerifyQ { input: PathBuf },
    /// Planar expansion from four points in general position.
    #[command(name = "verify-2d")]
    Verify2d { input: PathBuf },
    /// Points whose first nonzero coordinate is 1.
    TightExample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
    },
    /// Sumset size bound for affine bases.
    Egz { input: PathBuf },
    /// Repack into F_{p^ell} and compare with the direct sumset.
    PhiCrosscheck {
        input: PathBuf,
        #[arg(long)]
        ell: u32,
    },
    /// Exact hash statistics by full enumeration.
    HashStats {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, value_delimiter = ',')]
        x: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        l: Vec<u32>,
    },
    /// Rate at which the hash family maps the first set onto every label.
    Surjectivity {
        input: PathBuf,
        #[arg(long)]
        d: Option<u64>,
        /// Enumerate every hash instead of sampling.
        #[arg(long)]
        exact: bool,
    },
    /// Expansion rate of random (n+2)-point sets.
    RandomExpansion {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
    },
    /// Rate at which n+1 uniform points are affinely independent.
    AffineSpan {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exact: bool,
    },
}

/// One coordinate: an element code, or its `ell` base-p coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Code(u32),
    Coeffs(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub c: Option<f64>,
    pub d: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub p: u64,
    #[serde(default = "one")]
    pub ell: u32,
    pub n: usize,
    pub sets: Vec<Vec<Vec<Coord>>>,
    #[serde(default)]
    pub budgets: Option<Vec<u64>>,
    #[serde(default)]
    pub experiment: Option<Experiment>,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    Many(Vec<Instance>),
    One(Instance),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub max_cells: u64,
    pub trials: Option<u64>,
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, InputError>;

/// Status contributed by one result.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Done,
    Unmet,
    Violated,
}

impl Status {
    fn of(verdict: Verdict) -> Self {
        match verdict {
            Verdict::Holds => Status::Done,
            Verdict::HypothesisFailed | Verdict::NotApplicable => Status::Unmet,
            Verdict::Violated => Status::Violated,
        }
    }

    fn code(self) -> i32 {
        match self {
            Status::Done => 0,
            Status::Unmet => 2,
            Status::Violated => 3,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((status, stdout)) => Outcome {
            code: status.code(),
            stdout,
            stderr: String::new(),
        },
        Err(InputError(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Nondeg { .. } => "nondeg",
        Command::Deltas { .. } => "deltas",
        Command::Sumset { .. } => "sumset",
        Command::VerifyMain { .. } => "verify-main",
        Command::VerifySymm { .. } => "verify-symm",
        Command::VerifyQ { .. } => "verify-q",
        Command::Verify2d { .. } => "verify-2d",
        Command::TightExample { .. } => "tight-example",
        Command::Egz { .. } => "egz",
        Command::PhiCrosscheck { .. } => "phi-crosscheck",
        Command::HashStats { .. } => "hash-stats",
        Command::Surjectivity { .. } => "surjectivity",
        Command::RandomExpansion { .. } => "random-expansion",
        Command::AffineSpan { .. } => "affine-span",
    }
}

fn is_experiment(c: &Command) -> bool {
    matches!(
        c,
        Command::Surjectivity { .. } | Command::RandomExpansion { .. } | Command::AffineSpan { .. }
    )
}

fn read_instances(path: &PathBuf) -> CliResult<Vec<Instance>> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?
    };
    let parsed: InstanceFile =
        serde_json::from_str(&text).map_err(|e| InputError(format!("malformed instance file: {e}")))?;
    Ok(match parsed {
        InstanceFile::Many(v) => v,
        InstanceFile::One(i) => vec![i],
    })
}

impl Instance {
    fn field(&self) -> CliResult<FieldSpec> {
        Ok(make_field(self.p, self.ell)?)
    }

    fn coord(&self, field: &FieldSpec, c: &Coord) -> CliResult<FieldElem> {
        match c {
            Coord::Code(code) => Ok(field.elem(*code as u64)?),
            Coord::Coeffs(cs) => {
                if cs.len() != self.ell as usize {
                    return Err(InputError(format!(
                        "coordinate {cs:?} needs {} coefficients",
                        self.ell
                    )));
                }
                Ok(field.from_coeffs(cs)?)
            }
        }
    }

    fn point_lists(&self) -> CliResult<Vec<PointList>> {
        let field = self.field()?;
        if self.sets.is_empty() {
            return Err(InputError("instance has no sets".into()));
        }
        self.sets
            .iter()
            .map(|set| {
                if set.is_empty() {
                    return Err(InputError("sets must be nonempty".into()));
                }
                let pts = set
                    .iter()
                    .map(|pt| pt.iter().map(|c| self.coord(&field, c)).collect::<CliResult<Vec<_>>>())
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(PointList::new(&field, self.n, pts)?)
            })
            .collect()
    }
}

fn report_status(reports: &[TheoremReport]) -> Status {
    reports.iter().map(|r| Status::of(r.verdict)).max().unwrap_or(Status::Done)
}

fn envelope(provenance: &Provenance, results: Value) -> String {
    let out = json!({ "provenance": provenance, "results": results });
    let mut s = serde_json::to_string_pretty(&out).expect("values serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> CliResult<(Status, String)> {
    if cli.format == Format::Csv && !is_experiment(&cli.command) {
        return Err(InputError("csv output is only available for experiments".into()));
    }
    let limits = Limits {
        max_cells: cli.max_cells,
    };
    let provenance = Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command_name(&cli.command).to_string(),
        seed: cli.seed,
        max_cells: cli.max_cells,
        trials: cli.trials,
    };
    let per_instance = |path: &PathBuf,
                        f: &dyn Fn(&Instance, &[PointList]) -> CliResult<TheoremReport>|
     -> CliResult<(Status, String)> {
        let mut reports = Vec::new();
        for inst in read_instances(path)? {
            let sets = inst.point_lists()?;
            reports.push(f(&inst, &sets)?);
        }
        let status = report_status(&reports);
        let results = reports
            .iter()
            .enumerate()
            .map(|(i, r)| json!({ "instance": i, "report": r }))
            .collect();
        Ok((status, envelope(&provenance, Value::Array(results))))
    };

    match &cli.command {
        Command::Nondeg { input } => {
            let mut results = Vec::new();
            for (i, inst) in read_instances(input)?.iter().enumerate() {
                let sets = inst.point_lists()?;
                let per_set = sets
                    .iter()
                    .enumerate()
                    .map(|(j, a)| {
                        let nd = nondeg_degree(a)?;
                        Ok(json!({ "set": j, "degree": nd.degree, "witness": nd.witness }))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                results.push(json!({ "instance": i, "sets": per_set }));
            }
            Ok((Status::Done, envelope(&provenance, Value::Array(results))))
        }
        Command::Deltas { input } => {
            let mut results = Vec::new();
            for (i, inst) in read_instances(input)?.iter().enumerate() {
                let sets = inst.point_lists()?;
                let per_set = sets
                    .iter()
                    .enumerate()
                    .map(|(j, a)| {
                        let g = delta_spaces_with_limit(a, cli.max_cells)?;
                        let degrees: Vec<Value> = g
                            .per_degree
                            .iter()
                            .map(|(d, basis)| {
                                let comps: Vec<_> = basis.iter().map(|e| &e.component).collect();
                                json!({ "degree": d, "dim": basis.len(), "basis": comps })
                            })
                            .collect();
                        Ok(json!({
                            "set": j,
                            "total_dim": g.total_dim(),
                            "max_degree": g.max_degree(),
                            "degrees": degrees,
                        }))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                results.push(json!({ "instance": i, "sets": per_set }));
            }
            Ok((Status::Done, envelope(&provenance, Value::Array(results))))
        }
        Command::Sumset { input, k } => {
            let mut results = Vec::new();
            for (i, inst) in read_instances(input)?.iter().enumerate() {
                let dense = inst
                    .point_lists()?
                    .iter()
                    .map(|a| DensePointSet::from_point_list_with_limit(a, cli.max_cells))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = match k {
                    Some(k) => iterate_sumset(&dense[0], *k)?,
                    None => sum_of_family(&dense)?,
                };
                results.push(json!({
                    "instance": i,
                    "size": s.len(),
                    "full": is_full(&s),
                    "points": s.codes(),
                }));
            }
            Ok((Status::Done, envelope(&provenance, Value::Array(results))))
        }
        Command::VerifyMain { input } => {
            per_instance(input, &|inst, sets| Ok(verify_main_finalp(sets, inst.budgets.as_deref(), limits)?))
        }
        Command::VerifySymm { input } => per_instance(input, &|_, sets| {
            if sets.len() != 1 {
                return Err(InputError("verify-symm takes exactly one set".into()));
            }
            Ok(verify_main_symm(&sets[0], limits)?)
        }),
        Command::VerifyQ { input } => per_instance(input, &|inst, sets| {
            let budgets = inst
                .budgets
                .as_deref()
                .ok_or_else(|| InputError("verify-q needs budgets".into()))?;
            Ok(verify_main_q(sets, budgets, limits)?)
        }),
        Command::Verify2d { input } => per_instance(input, &|_, sets| {
            if sets.len() != 1 {
                return Err(InputError("verify-2d takes exactly one set".into()));
            }
            Ok(verify_2d(&sets[0], limits)?)
        }),
        Command::Egz { input } => per_instance(input, &|_, sets| Ok(egz_bound_check(sets, limits)?)),
        Command::PhiCrosscheck { input, ell } => per_instance(input, &|_, sets| {
            if sets.len() != 1 {
                return Err(InputError("phi-crosscheck takes exactly one set".into()));
            }
            Ok(crosscheck_phi(&sets[0], *ell, limits)?)
        }),
        Command::TightExample { p, n } => {
            let a = tight_example(*p, *n)?;
            let report = tight_example_report(*p, *n, limits)?;
            let status = Status::of(report.verdict);
            let result = json!({
                "size": a.len(),
                "points": a.codes(),
                "sumset_full": report.observed == report.target,
                "report": report,
            });
            Ok((status, envelope(&provenance, Value::Array(vec![result]))))
        }
        Command::HashStats { p, n, d, x, y, k, l } => {
            let field = make_field(*p, 1)?;
            let to_point = |v: &[u32]| v.iter().map(|&c| field.elem(c as u64)).collect::<Result<Vec<_>, _>>();
            let stats = exact_hash_stats(*p, *n, *d, &to_point(x)?, &to_point(y)?, k, l)?;
            let status = if stats.matches_closed_forms && stats.pair_law_holds {
                Status::Done
            } else {
                Status::Violated
            };
            Ok((status, envelope(&provenance, json!([stats]))))
        }
        Command::Surjectivity { input, d, exact } => {
            let mut reports = Vec::new();
            for inst in read_instances(input)? {
                let sets = inst.point_lists()?;
                let exp = inst.experiment.as_ref();
                let d = d
                    .or_else(|| exp.and_then(|e| e.d))
                    .ok_or_else(|| InputError("surjectivity needs d (flag or experiment.d)".into()))?;
                let seed = exp.and_then(|e| e.seed).unwrap_or(cli.seed);
                let trials = cli.trials.or_else(|| exp.and_then(|e| e.trials)).unwrap_or(1000);
                let mode = if *exact { Mode::Exact } else { Mode::MonteCarlo { trials } };
                let mut rng = trial_rng(seed, 0);
                reports.push(surjectivity_rate(d, &sets[0], mode, &mut rng)?);
            }
            match cli.format {
                Format::Json => Ok((Status::Done, envelope(&provenance, serde_json::to_value(&reports)?))),
                Format::Csv => {
                    let mut out = String::from("instance,p,n,d,set_size,successes,total,rate,bound,bound_vacuous\n");
                    for (i, r) in reports.iter().enumerate() {
                        out.push_str(&format!(
                            "{i},{},{},{},{},{},{},{},{},{}\n",
                            r.p, r.n, r.d, r.set_size, r.successes, r.total, r.rate, r.bound, r.bound_vacuous
                        ));
                    }
                    Ok((Status::Done, out))
                }
            }
        }
        Command::RandomExpansion { p, n, c } => {
            let cfg = TrialConfig {
                p: *p,
                n: *n,
                c: *c,
                trials: cli.trials.unwrap_or(100),
                seed: cli.seed,
            };
            let report = random_expansion_trial(&cfg, cli.max_cells)?;
            match cli.format {
                Format::Json => Ok((Status::Done, envelope(&provenance, json!([report])))),
                Format::Csv => {
                    let mut out = String::from("trial,success,sumset_size,points\n");
                    for r in &report.records {
                        let pts: Vec<String> = r
                            .points
                            .iter()
                            .map(|x| x.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
                            .collect();
                        out.push_str(&format!("{},{},{},{}\n", r.trial, r.success, r.sumset_size, pts.join(";")));
                    }
                    Ok((Status::Done, out))
                }
            }
        }
        Command::AffineSpan { p, n, exact } => {
            let mode = if *exact {
                Mode::Exact
            } else {
                Mode::MonteCarlo {
                    trials: cli.trials.unwrap_or(10_000),
                }
            };
            let mut rng = trial_rng(cli.seed, 0);
            let report = affine_span_rate(*p, *n, mode, &mut rng)?;
            match cli.format {
                Format::Json => Ok((Status::Done, envelope(&provenance, json!([report])))),
                Format::Csv => Ok((
                    Status::Done,
                    format!(
                        "p,n,successes,total,rate\n{},{},{},{},{}\n",
                        report.p, report.n, report.successes, report.total, report.rate
                    ),
                )),
            }
        }
    }
}
