use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use apery_core::certify::{run_certificate, CertifyConfig, SeedPolicy, SCHEMA};
use apery_core::frobenius::{frobenius_denominator_certificate, frobenius_solutions};
use apery_core::generators::{builtin_catalog, cellular_laurent, vz_polynomial, CyclicPermutation};
use apery_core::ode::fit_operator;
use apery_core::polytope::polytope_report;
use apery_core::{constant_term_powers, parse_laurent, Error};

#[derive(Parser)]
#[command(name = "apery-forge", version, about = "Apery-style certificates for integral Laurent polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constant-term sequence a_0..a_M.
    Sequence(Common),
    /// Fit the annihilating operator and print it as JSON.
    Fit(Common),
    /// Run the full pipeline and print the report.
    Certify(Common),
    /// Newton polytope screens.
    Polytope(Common),
    /// Frobenius basis of the fitted operator and its denominator certificate.
    Frobenius(Common),
    /// Generate polynomials.
    Generate {
        #[command(subcommand)]
        what: Generate,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// VZ polynomials psi_n and phi_n.
    Vz {
        #[arg(long)]
        n: usize,
    },
    /// Cellular polynomial of a convergent permutation, e.g. --sigma 1,4,2,5,3.
    Cellular {
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        radius: i64,
    },
    /// The built-in catalog.
    Catalog,
}

#[derive(Args)]
struct Output {
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// Config JSON with at least "phi".
    #[arg(long, value_name = "FILE.json", conflicts_with = "phi")]
    input: Option<PathBuf>,
    /// Inline polynomial expression in x1..xn.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_name = "M")]
    terms: Option<usize>,
    #[arg(long, value_name = "BITS")]
    precision: Option<u32>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    c: Option<i64>,
    #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
    q0: Option<String>,
    #[command(flatten)]
    out: Output,
}

impl Common {
    fn config(&self) -> Result<CertifyConfig, Error> {
        let mut c = match (&self.input, &self.phi) {
            (Some(path), _) => CertifyConfig::from_json(&std::fs::read_to_string(path)?)?,
            (None, Some(expr)) => {
                let n = self.n.ok_or_else(|| Error::Invalid("--phi needs --n".into()))?;
                CertifyConfig::new(parse_laurent(expr, n)?)
            }
            (None, None) => return Err(Error::Invalid("one of --input or --phi is required".into())),
        };
        if let Some(m) = self.terms {
            c.terms = m;
        }
        if let Some(p) = self.precision {
            c.precision = p;
        }
        if let Some(r) = self.r {
            c.r = r;
        }
        if let Some(v) = self.c {
            c.c = v;
        }
        if let Some(q) = &self.q0 {
            c.q0 = SeedPolicy::parse(q)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn emit<T: Serialize>(value: &T, out: &Output) -> Result<(), Error> {
    let mut text = if out.pretty { serde_json::to_string_pretty(value)? } else { serde_json::to_string(value)? };
    text.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sequence(args) => {
            let c = args.config()?;
            let a = constant_term_powers(&c.phi, c.terms);
            let values: Vec<String> = a.values.iter().map(|v| v.to_string()).collect();
            emit(&json!({ "schema": SCHEMA, "a": values }), &args.out)?;
        }
        Command::Fit(args) => {
            let c = args.config()?;
            let a = constant_term_powers(&c.phi, c.ct_terms.min(c.terms));
            let d = fit_operator(&a, c.max_order, c.max_degree)?;
            let st = d.structural_checks(c.n);
            emit(&json!({ "schema": SCHEMA, "operator": d, "display": d.to_string(), "structural": st }), &args.out)?;
        }
        Command::Certify(args) => {
            let c = args.config()?;
            let report = run_certificate(&c);
            eprintln!("{}", report.verdict);
            emit(&report, &args.out)?;
            return Ok(report.verdict.exit_code() as u8);
        }
        Command::Polytope(args) => {
            let c = args.config()?;
            emit(&json!({ "schema": SCHEMA, "polytope": polytope_report(&c.phi) }), &args.out)?;
        }
        Command::Frobenius(args) => {
            let c = args.config()?;
            let a = constant_term_powers(&c.phi, c.ct_terms.min(c.terms));
            let d = fit_operator(&a, c.max_order, c.max_degree)?;
            let basis = frobenius_solutions(&d, c.terms + 1)?;
            let cert = frobenius_denominator_certificate(&basis, c.terms)?;
            emit(&json!({ "schema": SCHEMA, "operator": d, "basis": basis, "certificate": cert }), &args.out)?;
        }
        Command::Generate { what, out } => match what {
            Generate::Vz { n } => {
                if n == 0 {
                    return Err(Error::Invalid("n must be positive".into()));
                }
                let (psi, phi) = vz_polynomial(n);
                emit(&json!({ "schema": SCHEMA, "n": n, "psi": psi, "phi": phi, "display": phi.to_string() }), &out)?;
            }
            Generate::Cellular { sigma, radius } => {
                let s = CyclicPermutation::new(sigma)?;
                let phi = cellular_laurent(&s, radius)?;
                emit(&json!({ "schema": SCHEMA, "sigma": s.images, "phi": phi, "display": phi.to_string() }), &out)?;
            }
            Generate::Catalog => emit(&json!({ "schema": SCHEMA, "entries": builtin_catalog() }), &out)?,
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
