//! Command-line front end: reads subgroup files, runs one computation and
//! prints plain text or a JSON report.

pub mod input;
pub mod json;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fatf_core::degrees::{self, DiCase, DiValue};
use fatf_core::extensions::{algebraic_extensions, rr_sum};
use fatf_core::fatf::Intersection;
use fatf_core::{Caps, Error, Int, Rational, StallingsGraph};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use input::{parse_subgroup, render_subgroup, ParseError, SubgroupFile};
use json::{matrix, rational, subgroup as subgroup_json, words};

#[derive(Parser, Debug)]
#[command(
    name = "fatf",
    version,
    about = "Degrees of compression and inertia in Z^m × F_n"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit plain text (the default).
    #[arg(long, global = true, conflicts_with = "json")]
    pub text: bool,
    #[arg(long, global = true, default_value_t = Caps::default().max_fringe)]
    pub max_fringe: usize,
    #[arg(long, global = true, default_value_t = Caps::default().max_descent)]
    pub max_descent: usize,
    #[arg(long, global = true, default_value_t = Caps::default().max_combos)]
    pub max_combos: u128,
}

impl Global {
    fn caps(&self) -> Caps {
        Caps {
            max_fringe: self.max_fringe,
            max_descent: self.max_descent,
            max_combos: self.max_combos,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the basis normal form of a subgroup file.
    Parse { file: PathBuf },
    /// Degree of compression with the per-extension table.
    Dc { file: PathBuf },
    /// Inertia classification.
    Di {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Upper bound for the inertia degree of the projection, as `p/q` or `p`.
        #[arg(long, value_parser = parse_rational)]
        di_free_bound: Option<Rational>,
    },
    /// Intersection of two subgroups.
    Intersect { first: PathBuf, second: PathBuf },
    /// Algebraic extensions of the projection.
    Ae { file: PathBuf },
    /// Stallings graph of the projection.
    Graph {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// `d(A, B, U)` for matrices given as JSON `{"A": .., "B": .., "U": .., "m": ..}`.
    Dabu { file: PathBuf },
    /// The witness family `K_N`.
    WitnessKn { file: PathBuf, n: u64 },
    /// Hanna Neumann check on the projections.
    HnCheck { first: PathBuf, second: PathBuf },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: Int = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in `{s}`"))?;
    let den: Int = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in `{s}`"))?;
    if den == Int::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

/// Failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { path: PathBuf, error: ParseError },
    Cap(Error),
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Parse { path, error } => write!(f, "{}:{error}", path.display()),
            CliError::Cap(e) | CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            CliError::Cap(e)
        } else {
            CliError::Compute(e)
        }
    }
}

/// Text and JSON renderings of one command's result.
pub struct Output {
    pub text: String,
    pub json: Value,
}

struct Inputs {
    digest: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs {
            digest: Sha256::new(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        self.digest.update((bytes.len() as u64).to_le_bytes());
        self.digest.update(&bytes);
        String::from_utf8(bytes)
            .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))
    }

    fn subgroup(&mut self, path: &Path) -> Result<SubgroupFile, CliError> {
        let src = self.read(path)?;
        parse_subgroup(&src).map_err(|error| CliError::Parse {
            path: path.to_path_buf(),
            error,
        })
    }

    fn hex(self) -> String {
        self.digest
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Dc { .. } => "dc",
        Command::Di { .. } => "di",
        Command::Intersect { .. } => "intersect",
        Command::Ae { .. } => "ae",
        Command::Graph { .. } => "graph",
        Command::Dabu { .. } => "dabu",
        Command::WitnessKn { .. } => "witness-kn",
        Command::HnCheck { .. } => "hn-check",
    }
}

/// Runs a parsed command and writes its output; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let mut inputs = Inputs::new();
    let result = execute(&cli.command, &cli.global, &mut inputs);
    match result {
        Ok(out) => {
            if cli.global.json {
                let caps = cli.global.caps();
                let report = json!({
                    "schema": "fatf-report/1",
                    "command": command_name(&cli.command),
                    "inputs_digest": inputs.hex(),
                    "caps": {
                        "max_fringe": caps.max_fringe,
                        "max_descent": caps.max_descent,
                        "max_combos": caps.max_combos.to_string(),
                    },
                    "result": out.json,
                    "timing_ms": start.elapsed().as_secs_f64() * 1e3,
                });
                let _ = writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                let _ = write!(stdout, "{}", out.text);
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs; clap errors exit 1.
pub fn main_with(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            code
        }
    }
}

fn execute(command: &Command, global: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let caps = global.caps();
    match command {
        Command::Parse { file } => {
            let h = inputs.subgroup(file)?.subgroup();
            Ok(Output {
                text: render_subgroup(&h),
                json: subgroup_json(&h),
            })
        }
        Command::Dc { file } => cmd_dc(&inputs.subgroup(file)?, &caps),
        Command::Di {
            file,
            budget,
            seed,
            di_free_bound,
        } => cmd_di(
            &inputs.subgroup(file)?,
            *budget,
            *seed,
            di_free_bound.clone(),
            &caps,
        ),
        Command::Intersect { first, second } => {
            let h = inputs.subgroup(first)?.subgroup();
            let k = inputs.subgroup(second)?.subgroup();
            cmd_intersect(&h, &k)
        }
        Command::Ae { file } => {
            let h = inputs.subgroup(file)?.subgroup();
            let ae = algebraic_extensions(h.projection(), &caps)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for j in &ae {
                let basis = j.basis();
                let _ = writeln!(text, "⟨{}⟩  rank {}", join_words(&basis), j.subgroup_rank());
                rows.push(json!({"basis": words(&basis), "rank": j.subgroup_rank()}));
            }
            Ok(Output {
                text,
                json: json!({"extensions": rows}),
            })
        }
        Command::Graph { file, dot } => {
            let h = inputs.subgroup(file)?.subgroup();
            Ok(cmd_graph(h.projection(), *dot))
        }
        Command::Dabu { file } => {
            let src = inputs.read(file)?;
            cmd_dabu(&src, &caps)
        }
        Command::WitnessKn { file, n } => {
            let h = inputs.subgroup(file)?.subgroup();
            let k = degrees::witness_kn(&h, *n)?;
            let meet = h
                .intersect(&k)?
                .subgroup()
                .map(|s| s.reduced_rank())
                .ok_or_else(|| {
                    CliError::Compute(Error::PreconditionViolated(
                        "intersection not finitely generated".into(),
                    ))
                })?;
            Ok(Output {
                text: format!("{}r̃(H∩K_{n})={meet}\n", render_subgroup(&k)),
                json: json!({"n": n, "witness": subgroup_json(&k), "intersection_reduced_rank": meet}),
            })
        }
        Command::HnCheck { first, second } => {
            let h = inputs.subgroup(first)?.subgroup();
            let k = inputs.subgroup(second)?.subgroup();
            let (hp, kp) = (h.projection(), k.projection());
            let meet = hp.intersect(kp)?.reduced_rank();
            let product = hp.reduced_rank() * kp.reduced_rank();
            let sum = rr_sum(hp, kp)?;
            let verdict = if meet == product { "tight" } else { "strict" };
            let text = format!(
                "r̃(H∩K) = {meet}\nr̃(H)·r̃(K) = {product}\nr̃(H,K) = {sum}\n{meet} ≤ {product} ({verdict})\n"
            );
            Ok(Output {
                text,
                json: json!({
                    "intersection_reduced_rank": meet,
                    "product": product,
                    "rr_sum": sum,
                    "tight": meet == product,
                }),
            })
        }
    }
}

fn join_words(ws: &[fatf_core::Word]) -> String {
    ws.iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_dc(file: &SubgroupFile, caps: &Caps) -> Result<Output, CliError> {
    let h = file.subgroup();
    let dc = degrees::dc_fatf(&h, caps)?;
    let mut text = format!("dc = {}\n", dc.value);
    if dc.trivial_projection {
        text.push_str("projection is trivial: dc = 1 directly\n");
    }
    let mut rows = Vec::new();
    for row in &dc.table {
        let _ = writeln!(
            text,
            "J = ⟨{}⟩  r̃ = {}  d = {}",
            join_words(&row.basis),
            row.reduced_rank,
            row.certificate.value
        );
        rows.push(json!({
            "basis": words(&row.basis),
            "reduced_rank": row.reduced_rank,
            "d": row.certificate.value,
            "denominator": row.denominator(),
            "U": matrix(&row.u),
            "certificate": {
                "lattice": matrix(row.certificate.lattice.basis()),
                "C": matrix(&row.certificate.c),
            },
            "witness": subgroup_json(&row.witness),
        }));
    }
    text.push_str("witness:\n");
    text.push_str(&render_subgroup(&dc.witness));
    Ok(Output {
        text,
        json: json!({
            "value": rational(&dc.value),
            "trivial_projection": dc.trivial_projection,
            "table": rows,
            "witness": subgroup_json(&dc.witness),
        }),
    })
}

fn cmd_di(
    file: &SubgroupFile,
    budget: usize,
    seed: u64,
    bound: Option<Rational>,
    caps: &Caps,
) -> Result<Output, CliError> {
    let h = file.subgroup();
    let r = degrees::di_classify(&h, budget, seed, bound, caps)?;
    let (case, label) = match r.case {
        DiCase::ProjectionSmall => ("projection_small", "(i)"),
        DiCase::InfiniteIndexCenter => ("infinite_index_center", "(ii)"),
        DiCase::FiniteIndexCenter => ("finite_index_center", "(iii)"),
    };
    let mut text = match (&r.value, &r.upper) {
        (Some(DiValue::Finite(v)), _) => format!("case {label}: di = {v}\n"),
        (Some(DiValue::Infinite), _) => format!("case {label}: di = inf\n"),
        (None, Some(u)) => format!("case {label}: {} ≤ di ≤ {u}\n", r.lower),
        (None, None) => format!("case {label}: di ≥ {}\n", r.lower),
    };
    if let Some(index) = &r.index {
        let _ = writeln!(text, "[Z^m : L_H] = {index}");
    }
    if let Some(dc) = &r.dc {
        let _ = writeln!(text, "dc = {dc}");
    }
    if let Some((k, meet)) = &r.witness {
        let _ = writeln!(
            text,
            "witness with r̃(H∩K) = {meet}, r̃(K) = {}:",
            k.reduced_rank()
        );
        text.push_str(&render_subgroup(k));
    }
    let value = match &r.value {
        Some(DiValue::Finite(v)) => rational(v),
        Some(DiValue::Infinite) => json!("inf"),
        None => Value::Null,
    };
    Ok(Output {
        text,
        json: json!({
            "case": case,
            "value": value,
            "lower": rational(&r.lower),
            "upper": r.upper.as_ref().map_or(json!("inf"), rational),
            "index": r.index.as_ref().map(json::integer),
            "dc": r.dc.as_ref().map(rational),
            "witness": r.witness.as_ref().map(|(k, meet)| json!({
                "subgroup": subgroup_json(k),
                "intersection_reduced_rank": meet,
            })),
        }),
    })
}

fn cmd_intersect(
    h: &fatf_core::FatfSubgroup,
    k: &fatf_core::FatfSubgroup,
) -> Result<Output, CliError> {
    match h.intersect(k)? {
        Intersection::Finite(meet, _) => Ok(Output {
            text: render_subgroup(&meet),
            json: json!({"status": "FINITELY_GENERATED", "subgroup": subgroup_json(&meet)}),
        }),
        Intersection::NotFinitelyGenerated(d) => {
            let mut text = String::from("NOT_FINITELY_GENERATED\n");
            let _ = writeln!(text, "meet basis: {}", join_words(&d.meet_basis));
            let _ = writeln!(text, "R =\n{}", d.r);
            let _ = writeln!(text, "S =\n{}", d.s.basis());
            Ok(Output {
                text,
                json: json!({
                    "status": "NOT_FINITELY_GENERATED",
                    "diagram": {
                        "meet_basis": words(&d.meet_basis),
                        "P": matrix(&d.p),
                        "P_prime": matrix(&d.p_prime),
                        "A": matrix(&d.a),
                        "A_prime": matrix(&d.a_prime),
                        "R": matrix(&d.r),
                        "lattice_sum": matrix(d.lattice_sum.basis()),
                        "S": matrix(d.s.basis()),
                    },
                }),
            })
        }
    }
}

fn letter_name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

fn cmd_graph(g: &StallingsGraph, dot: bool) -> Output {
    let edges: Vec<(usize, usize, usize)> = g.edges().collect();
    let text = if dot {
        let mut s = String::from("digraph stallings {\n");
        for v in 0..g.vertex_count() {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}];");
        }
        for (a, l, b) in &edges {
            let _ = writeln!(s, "  v{a} -> v{b} [label=\"{}\"];", letter_name(*l));
        }
        s.push_str("}\n");
        s
    } else {
        let mut s = format!(
            "vertices {}  rank {}\n",
            g.vertex_count(),
            g.subgroup_rank()
        );
        for (a, l, b) in &edges {
            let _ = writeln!(s, "{a} -{}-> {b}", letter_name(*l));
        }
        s
    };
    Output {
        text,
        json: json!({
            "vertices": g.vertex_count(),
            "rank": g.subgroup_rank(),
            "edges": edges.iter().map(|(a, l, b)| json!([a, letter_name(*l), b])).collect::<Vec<_>>(),
        }),
    }
}

fn cmd_dabu(src: &str, caps: &Caps) -> Result<Output, CliError> {
    let v: Value =
        serde_json::from_str(src).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
    let m_hint = v.get("m").and_then(Value::as_u64).map(|m| m as usize);
    let a = json::parse_matrix(v.get("A"), m_hint).map_err(CliError::Usage)?;
    let m = m_hint.unwrap_or(a.cols());
    let b = json::parse_matrix(v.get("B"), Some(m)).map_err(CliError::Usage)?;
    let u_cols = v.get("p").and_then(Value::as_u64).map(|p| p as usize);
    let u = json::parse_matrix(v.get("U"), u_cols).map_err(CliError::Usage)?;
    let cert = degrees::d_abu(&a, &b, &u, caps)?;
    let text = format!(
        "d = {}\nL =\n{}\nC =\n{}\n",
        cert.value,
        cert.lattice.basis(),
        cert.c
    );
    let valid = cert.validate(&a, &b, &u);
    Ok(Output {
        text,
        json: json!({
            "d": cert.value,
            "lattice": matrix(cert.lattice.basis()),
            "C": matrix(&cert.c),
            "valid": valid,
        }),
    })
}
