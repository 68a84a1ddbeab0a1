use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use kasami::combinatorics::{mobius_pair_sums, product_formula_sides, twovsone_sides};
use kasami::forms::CodeParams;
use kasami::output::{Method as ReportMethod, SpectrumReport};
use kasami::sequences::{base_sequence, circular_decimate, generator_sequences};
use kasami::solutions::{
    alternating_moment_sides, closed_form_count, count_bruteforce, count_closed_form,
    expansion_sides, recursion_sides, SolutionSystemParams,
};
use kasami::spectrum::{
    dc_spectrum_formula, rank_spectrum_formula, spectrum_enumerate, unbalanced_estimate,
    weight_distribution,
};
use kasami::verify::{self, Suite};
use kasami::Error;

/// Exact DC-component spectra of Kasami-type cyclic codes.
#[derive(Parser, Debug)]
#[command(name = "kasami", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// DC spectrum, rank spectrum and weights of the code
    Spectrum(SpectrumArgs),
    /// Count solutions of the coupled bilinear system
    Solutions(SolutionArgs),
    /// Print both sides of a counting identity
    Identities(IdentityArgs),
    /// Emit the base m-sequence or one of its decimations
    Sequence(SequenceArgs),
    /// Run a batch of checks and print a pass/fail table
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Extension degree m = 2n
    #[arg(long)]
    m: u32,
    /// Half degree n; defaults to m/2
    #[arg(long)]
    n: Option<u32>,
    /// Twist d, with gcd(n,d) = gcd(m,d)
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Number of quadratic terms, 1 ≤ k ≤ n/e
    #[arg(long, default_value_t = 1)]
    k: u32,
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams, Error> {
        CodeParams::new(self.m, self.n.unwrap_or(self.m / 2), self.d, self.k)
    }
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads
    #[arg(long, env = "KASAMI_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    worker_count: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Enumerate,
    Both,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    method: Method,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SolutionArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Highest equation index
    #[arg(long)]
    s: u32,
    /// Number of coordinate pairs
    #[arg(long)]
    u: u32,
    /// `formula` is the closed form, `enumerate` is exhaustive search
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    /// Σ_j q^j (i over j)_{q²} = ∏_{j≤i}(1+q^j)
    Prodform,
    /// (u over i)_{q²} Σ_j q^j (i over j)_{q²} = (u over i)_q ∏_{j<i}(1+q^{u-j})
    Twovsone,
    /// Möbius pair orthogonality for u > i (both sums)
    Mobius,
    /// Alternating sum of solution counts (needs --m, --e)
    Recursion,
    /// Expansion of 2^{-mi}|V_{s,i}| in 4^e-binomials (needs --m, --e)
    Expansion,
    /// Alternating fourth-power moment (needs --m, --e)
    Moment,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 1)]
    i: u32,
    #[arg(long)]
    u: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 1)]
    e: u32,
}

#[derive(Args, Debug)]
struct SequenceArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Decimation factor; without it the base sequence and all s_j are listed
    #[arg(long)]
    decimation: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all",
          value_parser = ["identities", "solutions", "spectrum", "sequences", "all"])]
    suite: String,
    /// Seed for randomized samples
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

/// A run that produced output but whose checks disagreed.
struct Mismatch(String);

enum Failure {
    Lib(Error),
    Mismatch(Mismatch),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let p = a.code.params()?;
    let workers = a.common.worker_count as usize;
    let formula = match a.method {
        Method::Enumerate => None,
        _ => Some((dc_spectrum_formula(&p)?, rank_spectrum_formula(&p)?)),
    };
    let enumerated = match a.method {
        Method::Formula => None,
        _ => Some(spectrum_enumerate(&p, workers)?),
    };
    let report = match (&formula, &enumerated) {
        (Some((dc, rank)), _) => SpectrumReport::new(&p, dc, rank, ReportMethod::Formula)?,
        (None, Some(en)) => SpectrumReport::new(&p, &en.dc, &en.rank, ReportMethod::Enumerate)?,
        (None, None) => unreachable!("at least one method runs"),
    };
    let mut mismatch = None;
    if let (Some(_), Some(en)) = (&formula, &enumerated) {
        let other = SpectrumReport::new(&p, &en.dc, &en.rank, ReportMethod::Enumerate)?;
        mismatch = report.first_difference(&other);
    }
    let text = match a.common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let mut s = report.to_text();
            let dc = match (&formula, &enumerated) {
                (Some((dc, _)), _) => dc.clone(),
                (None, Some(en)) => en.dc.clone(),
                (None, None) => unreachable!(),
            };
            s.push_str(&format!("{:>12} {:>24}\n", "weight", "codewords"));
            for (w, c) in weight_distribution(&p, &dc)? {
                s.push_str(&format!("{w:>12} {c:>24}\n"));
            }
            s.push_str(&format!(
                "unbalanced estimate (leading order) {:.6e}\n",
                unbalanced_estimate(&p)
            ));
            if enumerated.is_some() && formula.is_some() && mismatch.is_none() {
                s.push_str("formula and enumeration agree\n");
            }
            s
        }
    };
    emit(&a.common, &text)?;
    match mismatch {
        Some(d) => Err(Failure::Mismatch(Mismatch(format!(
            "formula and enumeration differ: {d}"
        )))),
        None => Ok(()),
    }
}

fn run_solutions(a: &SolutionArgs) -> Result<(), Failure> {
    let p = a.code.params()?;
    let sp = SolutionSystemParams::new(p, a.s, a.u)?;
    let workers = a.common.worker_count as usize;
    let bf = match a.method {
        Method::Formula => None,
        _ => Some(count_bruteforce(&sp, workers)?.value),
    };
    let cf = match a.method {
        Method::Enumerate => None,
        // the closed form is only established for s ≥ u
        Method::Both if a.s < a.u => None,
        _ => Some(count_closed_form(&sp)?.value),
    };
    let label = if a.s < a.u {
        "bruteforce (empirical)"
    } else {
        "bruteforce"
    };
    let text = match a.common.format {
        Format::Json => {
            let field = |v: &Option<BigInt>| match v {
                Some(v) => format!("\"{v}\""),
                None => "null".to_string(),
            };
            format!(
                "{{\"m\": {}, \"s\": {}, \"u\": {}, \"bruteforce\": {}, \"closed_form\": {}}}\n",
                a.code.m,
                a.s,
                a.u,
                field(&bf),
                field(&cf)
            )
        }
        Format::Csv => format!(
            "m,s,u,bruteforce,closed_form\n{},{},{},{},{}\n",
            a.code.m,
            a.s,
            a.u,
            bf.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            cf.as_ref().map(|v| v.to_string()).unwrap_or_default()
        ),
        Format::Text => {
            let mut s = String::new();
            if let Some(v) = &bf {
                s.push_str(&format!("{label} |V_{{{},{}}}| = {v}\n", a.s, a.u));
            }
            if let Some(v) = &cf {
                s.push_str(&format!("closed_form |V_{{{},{}}}| = {v}\n", a.s, a.u));
            }
            s
        }
    };
    emit(&a.common, &text)?;
    match (&bf, &cf) {
        (Some(x), Some(y)) if x != y => Err(Failure::Mismatch(Mismatch(format!(
            "bruteforce {x} ≠ closed form {y}"
        )))),
        _ => Ok(()),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this theorem")))
}

fn run_identities(a: &IdentityArgs) -> Result<(), Failure> {
    let q = BigInt::from(a.q);
    let sides: Vec<(String, String)> = match a.theorem {
        Theorem::Prodform => {
            let (l, r) = product_formula_sides(a.i, &q)?;
            vec![(l.to_string(), r.to_string())]
        }
        Theorem::Twovsone => {
            let (l, r) = twovsone_sides(need(a.u, "u")?, a.i, &q)?;
            vec![(l.to_string(), r.to_string())]
        }
        Theorem::Mobius => {
            let u = need(a.u, "u")?;
            if u <= a.i {
                return Err(
                    Error::InvalidArgument(format!("need u > i (u = {u}, i = {})", a.i)).into(),
                );
            }
            if a.q < 2 {
                return Err(Error::InvalidArgument("q must be at least 2".into()).into());
            }
            let (first, second) = mobius_pair_sums(u, a.i, &q);
            vec![
                (first.to_string(), "0".into()),
                (second.to_string(), "0".into()),
            ]
        }
        Theorem::Recursion | Theorem::Expansion | Theorem::Moment => {
            let m = need(a.m, "m")?;
            if a.e == 0 || m % (2 * a.e) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "2e must divide m (m = {m}, e = {})",
                    a.e
                ))
                .into());
            }
            let counts: Vec<BigInt> = (0..=a.i).map(|i| closed_form_count(m, a.e, i)).collect();
            match a.theorem {
                Theorem::Recursion => {
                    let (l, r) = recursion_sides(m, a.e, a.i, &counts);
                    vec![(l.to_string(), r.to_string())]
                }
                Theorem::Expansion => {
                    let (l, r) = expansion_sides(m, a.e, a.i);
                    vec![(l.to_string(), r.to_string())]
                }
                _ => {
                    let (l, r) = alternating_moment_sides(m, a.e, a.i, &counts);
                    vec![(l.to_string(), r.to_string())]
                }
            }
        }
    };
    let mut ok = true;
    for (l, r) in &sides {
        let rel = if l == r { "=" } else { "≠" };
        ok &= l == r;
        println!("LHS {l} {rel} RHS {r}");
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch(Mismatch("the two sides differ".into())))
    }
}

fn run_sequence(a: &SequenceArgs) -> Result<(), Failure> {
    let p = a.code.params()?;
    let rows: Vec<(String, kasami::sequences::BitSequence)> = match a.decimation {
        Some(f) => vec![(
            format!("decimation {f}"),
            circular_decimate(&base_sequence(&p), f)?,
        )],
        None => generator_sequences(&p),
    };
    let text = match a.common.format {
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(l, s)| {
                    format!(
                        "{{\"label\": \"{l}\", \"bits\": \"{}\", \"period\": {}}}",
                        s.to_ascii(),
                        s.period()
                    )
                })
                .collect();
            format!("[{}]\n", items.join(", "))
        }
        Format::Csv => {
            let mut s = String::from("label,bits,period\n");
            for (l, seq) in &rows {
                s.push_str(&format!("{l},{},{}\n", seq.to_ascii(), seq.period()));
            }
            s
        }
        Format::Text => rows
            .iter()
            .map(|(l, s)| format!("{l}: {} (period {})\n", s.to_ascii(), s.period()))
            .collect(),
    };
    emit(&a.common, &text)
}

fn run_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let start = Instant::now();
    let report = verify::run(suite, a.seed, a.common.worker_count as usize);
    eprintln!("wall time {:.2?}", start.elapsed());
    emit(&a.common, &report.render())?;
    match report.first_failure() {
        Some(c) => Err(Failure::Mismatch(Mismatch(format!(
            "{}: {}",
            c.suite, c.name
        )))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => run_spectrum(a),
        Command::Solutions(a) => run_solutions(a),
        Command::Identities(a) => run_identities(a),
        Command::Sequence(a) => run_sequence(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Mismatch(Mismatch(msg))) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
