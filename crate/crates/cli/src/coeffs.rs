use std::path::PathBuf;

use clap::Subcommand;
use vlab_core::arith::{
    divisor_table, normalized_gl2_coeffs, r2_table, ramanujan_tau_table, sym2_a_table, sym2_abelian_table,
    CoefficientTable, TableKind,
};

use crate::{CliError, Context, Outcome};

fn kind(s: &str) -> Result<TableKind, String> {
    TableKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = TableKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown table kind '{s}' (expected one of {})", names.join(", "))
    })
}

#[derive(Subcommand)]
pub enum CoeffsCmd {
    /// Compute a table and store it in the cache.
    Build {
        #[arg(long, value_parser = kind)]
        kind: TableKind,
        #[arg(long)]
        n: usize,
    },
    /// Validate a table file and copy it into the cache.
    Ingest {
        path: PathBuf,
        /// Fail unless the file holds this kind.
        #[arg(long, value_parser = kind)]
        kind: Option<TableKind>,
    },
    /// Print records lo..=hi of a cached table.
    Dump {
        #[arg(long, value_parser = kind)]
        kind: TableKind,
        /// lo:hi, 1-based and inclusive.
        #[arg(long)]
        range: String,
    },
}

fn build(kind: TableKind, n: usize, ctx: &Context) -> Result<CoefficientTable, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let require = |k: TableKind, min: usize| -> Result<CoefficientTable, CliError> {
        ctx.cache.load(k, min)?.ok_or_else(|| {
            CliError::Usage(format!(
                "building {} with N = {n} needs a cached {} table with N >= {min} in {}; run `vlab coeffs build --kind {} --n {min}` first",
                kind.name(),
                k.name(),
                ctx.cache.dir().display(),
                k.name()
            ))
        })
    };
    Ok(match kind {
        TableKind::DivisorD => {
            CoefficientTable::from_integers(kind, divisor_table(n)[1..].iter().map(|&v| v as i128).collect())?
        }
        TableKind::SumsOfSquaresR2 => {
            CoefficientTable::from_integers(kind, r2_table(n)[1..].iter().map(|&v| v as i128).collect())?
        }
        TableKind::RamanujanTau => ramanujan_tau_table(n)?,
        TableKind::NormalizedGl2 => normalized_gl2_coeffs(&require(TableKind::RamanujanTau, n)?, 12)?.0,
        TableKind::SymSquareA => {
            let squared = n.checked_mul(n).ok_or_else(|| CliError::Usage(format!("N = {n} too large")))?;
            let (a, _) = normalized_gl2_coeffs(&require(TableKind::RamanujanTau, squared)?, 12)?;
            sym2_a_table(&a, n)?
        }
        TableKind::SymSquareAbelian => sym2_abelian_table(&require(TableKind::SymSquareA, n)?, n)?,
    })
}

fn parse_lo_hi(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--range expects lo:hi, got '{text}'"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

pub fn run(cmd: &CoeffsCmd, ctx: &Context) -> Result<Outcome, CliError> {
    let text = match cmd {
        CoeffsCmd::Build { kind, n } => {
            let table = build(*kind, *n, ctx)?;
            let path = ctx.cache.store(&table)?;
            format!("stored {} N={} at {}", kind.name(), n, path.display())
        }
        CoeffsCmd::Ingest { path, kind } => {
            let table = ctx.cache.read_file(path)?;
            if let Some(k) = kind {
                if *k != table.kind() {
                    return Err(CliError::Usage(format!(
                        "{} holds a {} table, expected {}",
                        path.display(),
                        table.kind().name(),
                        k.name()
                    )));
                }
            }
            let stored = ctx.cache.store(&table)?;
            format!("stored {} N={} at {}", table.kind().name(), table.max_index(), stored.display())
        }
        CoeffsCmd::Dump { kind, range } => {
            let (lo, hi) = parse_lo_hi(range)?;
            if lo == 0 || lo > hi {
                return Err(CliError::Usage(format!("--range {range} must satisfy 1 <= lo <= hi")));
            }
            let table = ctx.cache.require(*kind, hi)?;
            let mut buf = Vec::new();
            table.write_range(&mut buf, lo, hi)?;
            String::from_utf8(buf).expect("table text is UTF-8")
        }
    };
    Ok(Outcome { text, passed: true })
}
