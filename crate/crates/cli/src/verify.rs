use clap::{Args, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vlab_core::arith::{
    normalized_gl2_coeffs, ramanujan_tau_table, sym2_a_table, CoefficientTable, NegativeIndexConvention, TableKind,
    TwistParams,
};
use vlab_core::engines::*;
use vlab_core::{SpectralParams, TestFunction};

use crate::config::{Format, Group};
use crate::{CliError, Context, Outcome};

#[derive(Subcommand)]
pub enum VerifyCmd {
    /// √t θ(t) = θ(1/t) over a grid of t.
    Theta {
        /// Points as lo:hi:step or a single value.
        #[arg(long, default_value = "0.1:10:0.1")]
        t: String,
    },
    /// Σ f(n) against Σ f̂(n) for a Gaussian–Hermite function.
    Poisson(GaussianArgs),
    /// Σ f(n) against the ζ(s)Mf(s) contour integral, with residue bookkeeping.
    PoissonZeta {
        #[command(flatten)]
        f: GaussianArgs,
        /// Abscissa of the contour; must exceed 1.
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
    },
    /// Γ-ratio and Bessel-kernel Mellin identities.
    MellinId {
        /// Real points in (0, 3/4).
        #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.4, 0.6])]
        s: Vec<f64>,
        /// Extra points drawn uniformly from [0.05, 0.7] with the run seed.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Σ d(n) f(n) against the K₀/Y₀ transform side.
    VoronoiDivisor(BumpArgs),
    /// Σ r₂(n) f(n) against the J₀ transform side.
    VoronoiCircle(BumpArgs),
    /// Twisted Voronoi formula for the normalized coefficients of Δ.
    Gl2 {
        #[command(flatten)]
        twist: TwistArgs,
        #[command(flatten)]
        f: ExpInverseArgs,
        /// Number of coefficients.
        #[arg(long, default_value_t = 2000)]
        table_n: usize,
    },
    /// Twisted Voronoi formula for the symmetric square of Δ.
    Gl3 {
        #[command(flatten)]
        twist: TwistArgs,
        #[arg(long, default_value_t = 0.2)]
        fa: f64,
        #[arg(long, default_value_t = 10.0)]
        fb: f64,
        /// Number of A_n coefficients (needs τ up to the square of this).
        #[arg(long, default_value_t = 500)]
        table_n: usize,
        /// Sign convention for negative frequencies.
        #[arg(long, value_enum, default_value_t = Convention::Even)]
        convention: Convention,
        /// Global scalar applied to the dual side.
        #[arg(long, default_value_t = 1.0)]
        scalar: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Gaussian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Convention {
    Even,
    Odd,
}

#[derive(Args)]
pub struct GaussianArgs {
    #[arg(long, value_enum, default_value_t = Family::Gaussian)]
    family: Family,
    /// Hermite index: f(x) = H_{2m}(√(2πt) x) e^{-πtx²}.
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
}

#[derive(Args)]
pub struct BumpArgs {
    /// Support of the smooth bump as a:b.
    #[arg(long, default_value = "1:50")]
    support: String,
    /// Use a bump isolating this integer instead.
    #[arg(long)]
    isolate: Option<u32>,
    #[arg(long, default_value_t = 0.9)]
    half_width: f64,
}

#[derive(Args)]
pub struct TwistArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, default_value_t = 1)]
    c: i64,
    #[arg(long, default_value_t = 1)]
    q: u64,
}

#[derive(Args)]
pub struct ExpInverseArgs {
    /// f(x) = exp(-fa·x - fb/x).
    #[arg(long, default_value_t = 1.0)]
    fa: f64,
    #[arg(long, default_value_t = 4.0)]
    fb: f64,
}

pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected lo:hi:step or a number, got '{text}'"));
    let parts: Vec<f64> = text.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [lo, hi, step] if step > 0.0 && hi >= lo => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| lo + k as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

fn pair(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("expected a:b, got '{text}'"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn gaussian(args: &GaussianArgs) -> Result<TestFunction, CliError> {
    match args.family {
        Family::Gaussian => Ok(TestFunction::gaussian_hermite(args.m, args.t)?),
    }
}

fn bump(args: &BumpArgs) -> Result<TestFunction, CliError> {
    Ok(match args.isolate {
        Some(n0) => TestFunction::isolating_bump(n0 as f64, args.half_width)?,
        None => {
            let (a, b) = pair(&args.support)?;
            TestFunction::smooth_bump(a, b)?
        }
    })
}

/// Cached table of at least `n` entries, or a freshly computed τ table.
fn tau(ctx: &Context, n: usize) -> Result<(CoefficientTable, &'static str), CliError> {
    Ok(match ctx.cache.load(TableKind::RamanujanTau, n)? {
        Some(t) => (t, "cached"),
        None => (ramanujan_tau_table(n)?, "computed"),
    })
}

fn sym2(ctx: &Context, n: usize) -> Result<(CoefficientTable, &'static str), CliError> {
    if let Some(t) = ctx.cache.load(TableKind::SymSquareA, n)? {
        return Ok((t, "cached"));
    }
    let squared = n.checked_mul(n).ok_or_else(|| CliError::Usage(format!("table size {n} too large")))?;
    let (tau, _) = tau(ctx, squared)?;
    let (a, _) = normalized_gl2_coeffs(&tau, 12)?;
    Ok((sym2_a_table(&a, n)?, "computed"))
}

fn twist(args: &TwistArgs) -> Result<TwistParams, CliError> {
    Ok(TwistParams::new(args.a, args.c, args.q)?)
}

fn report(cmd: &VerifyCmd, ctx: &Context) -> Result<VerificationReport, CliError> {
    let cfg = &ctx.config;
    Ok(match cmd {
        VerifyCmd::Theta { t } => verify_theta(&parse_range(t)?)?,
        VerifyCmd::Poisson(f) => verify_poisson(&gaussian(f)?, cfg.policy(Group::Poisson))?,
        VerifyCmd::PoissonZeta { f, sigma } => {
            let out = verify_poisson_via_zeta(&gaussian(f)?, *sigma, cfg.policy(Group::Poisson))?;
            out.report.note(format!("reconciliation passes: {}", out.reconciliation <= cfg.tolerance(FormulaId::PoissonZeta)))
        }
        VerifyCmd::MellinId { s, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut points = s.clone();
            points.extend((0..*samples).map(|_| rng.random_range(0.05..0.7)));
            verify_mellin_identities(&points)?
        }
        VerifyCmd::VoronoiDivisor(b) => verify_voronoi_divisor(&bump(b)?, cfg.policy(Group::Classical))?,
        VerifyCmd::VoronoiCircle(b) => verify_voronoi_circle(&bump(b)?, cfg.policy(Group::Classical))?,
        VerifyCmd::Gl2 { twist: tw, f, table_n } => {
            let (tau, source) = tau(ctx, *table_n)?;
            let (coeffs, params) = normalized_gl2_coeffs(&tau, 12)?;
            let f = TestFunction::exp_inverse(f.fa, f.fb)?;
            verify_gl2_voronoi(&coeffs, &params, &twist(tw)?, &f, cfg.policy(Group::Gl2))?
                .note(format!("tau table {source} to N = {table_n}"))
        }
        VerifyCmd::Gl3 { twist: tw, fa, fb, table_n, convention, scalar } => {
            let (big_a, source) = sym2(ctx, *table_n)?;
            let f = TestFunction::exp_inverse(*fa, *fb)?;
            let options = Gl3Options {
                convention: match convention {
                    Convention::Even => NegativeIndexConvention::Even,
                    Convention::Odd => NegativeIndexConvention::Odd,
                },
                scalar: *scalar,
            };
            let params = SpectralParams::sym2_of_weight(12)?;
            verify_gl3_voronoi(&big_a, &params, &twist(tw)?, &f, cfg.policy(Group::Gl3), &options)?
                .report
                .note(format!("A table {source} to N = {table_n}"))
        }
    })
}

pub fn run(cmd: &VerifyCmd, ctx: &Context) -> Result<Outcome, CliError> {
    let mut r = report(cmd, ctx)?;
    if !ctx.config.timing {
        r.runtime_ms = 0;
    }
    let tolerance = ctx.config.tolerance(r.formula);
    let passed = r.rel_residual <= tolerance;
    let text = match ctx.config.format {
        Format::Json => r.to_json(),
        Format::Csv => format!("{}\n{}", VerificationReport::CSV_HEADER, r.to_csv_row()),
    };
    if !passed {
        eprintln!("vlab: {} rel_residual {:e} exceeds tolerance {:e}", r.formula.name(), r.rel_residual, tolerance);
    }
    Ok(Outcome { text, passed })
}
