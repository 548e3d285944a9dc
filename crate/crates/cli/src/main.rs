use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rug::{Float, Rational};

use saddle_core::delta;
use saddle_core::lagrangean::{catalan_expansions, CatalanVariant};
use saddle_core::oracles;
use saddle_core::phi::CatalogPhi;
use saddle_core::saddle::{self, Contour};
use saddle_core::scalar::{render_decimal, Precision};
use saddle_core::stirling::{IdentityViolation, StirlingCoefficientTable};

/// Saddle-point expansions, Stirling-type coefficient identities and their
/// numerical error sweeps.
#[derive(Parser, Debug)]
#[command(name = "saddle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of the c, d, g, h coefficient families.
    Stirling {
        #[arg(long)]
        max_m: usize,
        /// Print exact rationals instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// PASS/FAIL per m for c_m = d_m and g_m = h_m.
    Identity {
        #[arg(long)]
        max_m: usize,
    },
    /// Term table of one saddle-point expansion.
    Expand {
        #[arg(long)]
        phi: CatalogPhi,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        variant: Contour,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
        precision: u32,
    },
    /// Normalized error sweep written as CSV.
    Delta {
        #[arg(long)]
        phi: CatalogPhi,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        step: u64,
        #[arg(long = "max-M")]
        max_m: usize,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
        precision: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact sequence a_n = n! [z^n] e^phi(z) as CSV.
    Oracle {
        #[arg(long)]
        phi: CatalogPhi,
        #[arg(long)]
        n_to: usize,
    },
    /// Catalan number expansions; all four when --which is omitted.
    Catalan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        which: Option<CatalanVariant>,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
        precision: u32,
    },
}

const DIGITS: usize = 30;

fn decimal(q: &Rational) -> String {
    render_decimal(&Float::with_val(128, q), 20)
}

fn stirling(out: &mut impl Write, max_m: usize, exact: bool) -> Result<bool> {
    let table = StirlingCoefficientTable::compute(max_m);
    let show = |q: &Rational| if exact { q.to_string() } else { decimal(q) };
    for m in 0..=max_m {
        writeln!(
            out,
            "m={m}: {}  d={}  g={}  h={}",
            show(&table.c[m]),
            show(&table.d[m]),
            show(&table.g[m]),
            show(&table.h[m])
        )?;
    }
    let violations = table.violations();
    for v in &violations {
        writeln!(out, "violation: {v:?}")?;
    }
    Ok(violations.is_empty())
}

fn identity(out: &mut impl Write, max_m: usize) -> Result<bool> {
    let table = StirlingCoefficientTable::compute(max_m);
    let violations = table.violations();
    for m in 0..=max_m {
        let bad = violations.iter().any(|v| match v {
            IdentityViolation::CNotD(k) | IdentityViolation::OddNonzero(k) | IdentityViolation::GNotH(k) => *k == m,
        });
        writeln!(out, "m={m} {}", if bad { "FAIL" } else { "PASS" })?;
    }
    Ok(violations.is_empty())
}

fn expand(out: &mut impl Write, phi: CatalogPhi, n: u64, terms: usize, contour: Contour, bits: u32) -> Result<()> {
    let prec = Precision(bits);
    let res = saddle::expand(&phi, n, terms, contour, prec)?;
    let exact = delta::exact_coefficient(phi, n);
    writeln!(out, "phi={} n={n} contour={contour} precision={bits}", phi.key())?;
    writeln!(out, "saddle={}", render_decimal(&res.saddle, DIGITS))?;
    writeln!(out, "kappa2={}", render_decimal(&res.kappa2, DIGITS))?;
    writeln!(out, "m,coefficient,term,partial_sum,relative_error")?;
    for m in 0..=terms {
        writeln!(
            out,
            "{m},{},{},{},{}",
            render_decimal(&res.coefficients[m], DIGITS),
            render_decimal(&res.terms[m], DIGITS),
            render_decimal(&res.partial_sums[m], DIGITS),
            render_decimal(&saddle::relative_error(&res.partial_sums[m], &exact), 6)
        )?;
    }
    writeln!(out, "exact={}", render_decimal(&Float::with_val(bits, &exact), DIGITS))?;
    Ok(())
}

fn oracle(out: &mut impl Write, phi: CatalogPhi, n_to: usize) -> Result<()> {
    writeln!(out, "n,a_n")?;
    for v in oracles::exact_an_table(&phi, n_to) {
        writeln!(out, "{},{}", v.n, v.value)?;
    }
    Ok(())
}

fn catalan(out: &mut impl Write, n: u64, terms: usize, which: Option<CatalanVariant>, bits: u32) -> Result<()> {
    let prec = Precision(bits);
    let variants: Vec<CatalanVariant> = match which {
        Some(v) => vec![v],
        None => CatalanVariant::ALL.to_vec(),
    };
    let runs = variants
        .iter()
        .map(|&v| catalan_expansions(n, terms, v, prec))
        .collect::<Result<Vec<_>, _>>()?;
    write!(out, "m")?;
    for r in &runs {
        write!(out, ",{0},{0}_relative_error", r.which.key())?;
    }
    writeln!(out)?;
    for m in 0..=terms {
        write!(out, "{m}")?;
        for r in &runs {
            write!(
                out,
                ",{},{}",
                render_decimal(&r.partial_sums[m], DIGITS),
                render_decimal(&r.relative_error(m), 6)
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let ok = match cli.command {
        Command::Stirling { max_m, exact } => stirling(&mut out, max_m, exact)?,
        Command::Identity { max_m } => identity(&mut out, max_m)?,
        Command::Expand {
            phi,
            n,
            terms,
            variant,
            precision,
        } => {
            expand(&mut out, phi, n, terms, variant, precision)?;
            true
        }
        Command::Delta {
            phi,
            n_from,
            n_to,
            step,
            max_m,
            precision,
            out: path,
        } => {
            if n_to < n_from {
                bail!("--n-to must be at least --n-from");
            }
            let rows = delta::delta_sweep(phi, n_from, n_to, step, max_m, Precision(precision))?;
            fs::write(&path, delta::sweep_csv(&rows)).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
            true
        }
        Command::Oracle { phi, n_to } => {
            oracle(&mut out, phi, n_to)?;
            true
        }
        Command::Catalan {
            n,
            terms,
            which,
            precision,
        } => {
            catalan(&mut out, n, terms, which, precision)?;
            true
        }
    };
    out.flush()?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
