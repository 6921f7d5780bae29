use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcuntz::coeff::DeformVars;
use qcuntz::symalg::{parse_expr, SymAlgebra};
use qcuntz_cli::{parse_q, parse_theta, parse_trunc, run_suite, CliError, SuiteConfig};

#[derive(Parser)]
#[command(name = "qcuntz", version, about = "Verification suites for q-twisted Cuntz algebras")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its JSON report.
    Suite {
        /// relations, untwist, rieffel, ideals, expectations, witness, ktable, wick or all.
        name: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// `re`, `re,im` or `r@phi` for r e^{2 pi i phi}; omitted sweeps the suite defaults.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// `i,j=phase` setting q_ij = e^{2 pi i phase}; repeatable.
        #[arg(long)]
        theta: Vec<String>,
        /// `N,M,L`.
        #[arg(long, default_value = "4,4,5")]
        trunc: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Normal-order an expression such as `s1' * t1`.
    Eval {
        expr: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Keep `q` and `qc` independent instead of `qc = q^-1`.
        #[arg(long)]
        generic: bool,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn run(args: Args) -> Result<i32, CliError> {
    match args.command {
        Command::Suite { name, n, m, q, theta, trunc, tol, seed, json } => {
            let config = SuiteConfig {
                n,
                m,
                q: q.as_deref().map(parse_q).transpose()?.map(|z| [z.re, z.im]),
                theta: theta.iter().map(|t| parse_theta(t)).collect::<Result<_, _>>()?,
                trunc: parse_trunc(&trunc)?,
                tol,
                seed,
            };
            let report = run_suite(&name, &config)?;
            let text = report.to_json();
            match json {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(report.exit_code())
        }
        Command::Eval { expr, n, m, generic, json } => {
            let vars = if generic { DeformVars::SingleGeneric } else { DeformVars::SingleUnimodular };
            let alg = SymAlgebra::symbolic(n, m, vars)?;
            let x = parse_expr(&expr, &alg)?;
            if json {
                println!("{}", x.to_json());
            } else {
                println!("{x}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
