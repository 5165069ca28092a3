use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use energia_core::charsum::{self, BilinearInstance, CharTable, RegimeParams};
use energia_core::eqcount::{self, IntPoly, PipelineMode};
use energia_core::harness::{run_sweep, SweepConfig};
use energia_core::lattice::{self, congruence_lattice, Body, DualBody, IntLattice, WeightedBox};
use energia_core::ring::{parse_int_list, Interval, PolyMod};
use energia_core::{energy, rational, vinogradov, Rational};

#[derive(Parser)]
#[command(
    name = "energia",
    version,
    about = "Exact energy, lattice and character-sum computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Additive and multiplicative energies of a polynomial image.
    Energy(EnergyArgs),
    /// Solutions of a Vinogradov-type system.
    Vinogradov(VinogradovArgs),
    /// Lattice minima, duals, bases and point counts.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Polynomial equations and congruences.
    Eqcount {
        #[command(subcommand)]
        op: EqOp,
    },
    /// Multiplicative character sums.
    Charsum {
        #[command(subcommand)]
        op: CharOp,
    },
    /// Run a verification sweep and report exact energies against the bounds.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EnergyWhat {
    #[value(name = "T", alias = "t")]
    T,
    Plus,
    Times,
    Sumset,
    Report,
}

#[derive(Args)]
struct EnergyArgs {
    #[arg(long)]
    modulus: u64,
    /// Ascending coefficients, e.g. 0,0,1 for X^2.
    #[arg(long)]
    poly: String,
    #[arg(long = "H")]
    h: u64,
    #[arg(long, value_enum, default_value = "T")]
    what: EnergyWhat,
}

#[derive(Args)]
struct VinogradovArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long = "H", conflicts_with = "set")]
    h: Option<u64>,
    /// Explicit finite set a,b,c,...
    #[arg(long)]
    set: Option<String>,
    /// Right-hand side λ_1,...,λ_d; needs --H.
    #[arg(long, requires = "h")]
    lambda: Option<String>,
    #[arg(long, default_value_t = vinogradov::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct LatticeInput {
    /// Generators as semicolon-separated rows, e.g. "1,1;0,5".
    #[arg(long, conflicts_with = "congruence")]
    basis: Option<String>,
    /// Coefficients a of the lattice {x : a·x ≡ 0 mod m}; needs --modulus.
    #[arg(long, requires = "modulus")]
    congruence: Option<String>,
    #[arg(long)]
    modulus: Option<u64>,
}

#[derive(Args)]
struct BodyInput {
    /// Box half-widths c_1,...,c_n (rationals allowed); the unit box by default.
    #[arg(long = "box", conflicts_with = "cross")]
    bx: Option<String>,
    /// Cross-polytope weights (the polar of the box with these widths).
    #[arg(long)]
    cross: Option<String>,
}

#[derive(Subcommand)]
enum LatticeOp {
    Minima {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        body: BodyInput,
    },
    Dual {
        #[command(flatten)]
        lattice: LatticeInput,
    },
    Mahler {
        #[command(flatten)]
        lattice: LatticeInput,
        #[arg(long = "box")]
        bx: Option<String>,
    },
    Count {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        body: BodyInput,
        #[arg(long, default_value_t = lattice::enumerate::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    Minkowski {
        #[command(flatten)]
        lattice: LatticeInput,
        #[command(flatten)]
        body: BodyInput,
    },
    Transfer {
        #[command(flatten)]
        lattice: LatticeInput,
        #[arg(long = "box")]
        bx: Option<String>,
    },
    Bv {
        /// Coefficient matrix as semicolon-separated rows.
        #[arg(long)]
        matrix: String,
    },
    Measure {
        #[arg(long)]
        matrix: String,
        /// ε_1,...,ε_d, each in (0, 1/2].
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = lattice::measure::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum EqOp {
    /// Pairs (n, m) in [1,H]^2 with f(n) - f(m) = w, n != m.
    Eq {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        w: i128,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        list: bool,
    },
    /// Quadruples with f(x1) + f(x2) = f(x3) + f(x4).
    Sym {
        #[arg(long)]
        poly: String,
        #[arg(long = "H")]
        h: u64,
    },
    /// Pairs with f(n) - f(m) ≡ λ (mod m), by brute force and the lattice pipeline.
    Cong {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        lambda: u64,
        #[arg(long = "H")]
        h: u64,
        /// Run the pipeline even outside the short-interval regime.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args)]
struct CharInput {
    #[arg(long)]
    p: u64,
    /// Character index k in [1, p-2]; the Legendre symbol by default.
    #[arg(long)]
    k: Option<u64>,
}

impl CharInput {
    fn table(&self) -> Result<CharTable> {
        Ok(match self.k {
            Some(k) => CharTable::new(self.p, k)?,
            None => CharTable::quadratic(self.p)?,
        })
    }
}

#[derive(Subcommand)]
enum CharOp {
    /// Complete sum of χ(f(x)) against the Weil bound.
    Weil {
        #[command(flatten)]
        chi: CharInput,
        #[arg(long)]
        poly: String,
    },
    /// Σ_s Σ_{x<=H} χ(s + x) with unit weights.
    Bilinear {
        #[command(flatten)]
        chi: CharInput,
        #[arg(long)]
        set: String,
        #[arg(long = "H")]
        h: u64,
    },
    /// Both double sums of χ(f(q) + r) over primes q <= Q, r <= R.
    Primes {
        #[command(flatten)]
        chi: CharInput,
        #[arg(long)]
        poly: String,
        #[arg(long = "Q")]
        q: u64,
        #[arg(long = "R")]
        r: u64,
    },
    /// The bilinear-sum bound for a set of size S and energy E.
    Bound {
        #[arg(long = "S")]
        s: u64,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        p: u64,
        #[arg(long = "E")]
        e: f64,
        #[arg(long)]
        r: u32,
    },
    /// Admissibility of an exponent pair (ζ, ξ) for the prime sums.
    Region {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        xi: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    /// key = value grid description; the default grid when omitted.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    emit: Emit,
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i128>>> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_int_list(r).with_context(|| format!("bad matrix row {r:?}")))
        .collect()
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|x| rational::parse(x.trim()).map_err(Into::into))
        .collect()
}

fn parse_u64s(s: &str) -> Result<Vec<u64>> {
    parse_int_list(s)?
        .into_iter()
        .map(|x| u64::try_from(x).context("expected a nonnegative integer"))
        .collect()
}

fn parse_i64s(s: &str) -> Result<Vec<i64>> {
    parse_int_list(s)?
        .into_iter()
        .map(|x| i64::try_from(x).context("entry out of range"))
        .collect()
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn load_lattice(input: &LatticeInput) -> Result<IntLattice> {
    match (&input.basis, &input.congruence, input.modulus) {
        (Some(b), None, _) => Ok(IntLattice::from_generators(&parse_matrix(b)?)?),
        (None, Some(a), Some(m)) => Ok(congruence_lattice(&parse_int_list(a)?, m)?),
        _ => bail!("give --basis, or --congruence with --modulus"),
    }
}

fn load_box(widths: &Option<String>, n: usize) -> Result<WeightedBox> {
    let b = match widths {
        Some(w) => WeightedBox::new(parse_rationals(w)?)?,
        None => WeightedBox::unit(n),
    };
    if b.dim() != n {
        bail!("box has dimension {}, lattice has {n}", b.dim());
    }
    Ok(b)
}

fn load_body(input: &BodyInput, n: usize) -> Result<Body> {
    match &input.cross {
        Some(w) => {
            let c = DualBody::new(parse_rationals(w)?)?;
            if c.dim() != n {
                bail!("body has dimension {}, lattice has {n}", c.dim());
            }
            Ok(c.into())
        }
        None => Ok(load_box(&input.bx, n)?.into()),
    }
}

fn energy_cmd(a: &EnergyArgs) -> Result<Value> {
    let f = PolyMod::parse(a.modulus, &a.poly)?;
    let iv = Interval::new(a.h)?;
    let params = json!({ "modulus": a.modulus, "poly": f.coeffs(), "H": a.h });
    let value = match a.what {
        EnergyWhat::T => json!(energy::energy_t(&f, iv)?),
        EnergyWhat::Plus => json!(energy::energy_plus(&f, iv)?),
        EnergyWhat::Times => json!(energy::energy_times(&f, iv)?),
        EnergyWhat::Sumset => json!(energy::sumset_size(&f, iv)?),
        EnergyWhat::Report => serde_json::to_value(energy::energy_report(&f, iv)?)?,
    };
    Ok(json!({ "params": params, "value": value }))
}

fn vinogradov_cmd(a: &VinogradovArgs) -> Result<Value> {
    let count = match (&a.set, a.h, &a.lambda) {
        (Some(set), None, None) => {
            vinogradov::count_j_with_budget(a.d, a.s, &parse_i64s(set)?, a.budget)?
        }
        (None, Some(h), Some(l)) => {
            vinogradov::count_i_with_budget(a.d, a.s, h, &parse_int_list(l)?, a.budget)?
        }
        (None, Some(h), None) => {
            let set: Vec<i64> = (1..=h as i64).collect();
            vinogradov::count_j_with_budget(a.d, a.s, &set, a.budget)?
        }
        _ => bail!("give exactly one of --H or --set"),
    };
    Ok(json!({ "d": a.d, "s": a.s, "count": count }))
}

fn lattice_cmd(op: &LatticeOp) -> Result<Value> {
    Ok(match op {
        LatticeOp::Minima { lattice: li, body } => {
            let l = load_lattice(li)?;
            let b = load_body(body, l.dim())?;
            let profile = lattice::successive_minima(&l, &b)?;
            json!({ "lattice": l, "body": b, "minima": profile })
        }
        LatticeOp::Dual { lattice: li } => {
            let l = load_lattice(li)?;
            let dual = lattice::dual_lattice(&l)?;
            json!({ "lattice": l, "dual": dual, "dual_covolume": rational::format(&dual.covolume()) })
        }
        LatticeOp::Mahler { lattice: li, bx } => {
            let l = load_lattice(li)?;
            let b = load_box(bx, l.dim())?;
            serde_json::to_value(lattice::mahler_basis(&l, &b)?)?
        }
        LatticeOp::Count {
            lattice: li,
            body,
            budget,
        } => {
            let l = load_lattice(li)?;
            let b = load_body(body, l.dim())?;
            serde_json::to_value(lattice::count_lattice_points(&l, &b, *budget)?)?
        }
        LatticeOp::Minkowski { lattice: li, body } => {
            let l = load_lattice(li)?;
            let b = load_body(body, l.dim())?;
            serde_json::to_value(lattice::minkowski_check(&l, &b)?)?
        }
        LatticeOp::Transfer { lattice: li, bx } => {
            let l = load_lattice(li)?;
            let b = load_box(bx, l.dim())?;
            serde_json::to_value(lattice::transference_check(&l, &b)?)?
        }
        LatticeOp::Bv { matrix } => {
            let m = parse_matrix(matrix)?;
            let sol = lattice::bv_small_solutions(&m)?;
            let verified = sol.vectors.iter().all(|w| lattice::bv::solves(&m, w));
            json!({ "solution": sol, "verified": verified })
        }
        LatticeOp::Measure {
            matrix,
            eps,
            samples,
            seed,
        } => {
            let m = parse_matrix(matrix)?;
            let eps: Vec<f64> = eps
                .split(',')
                .map(|x| x.trim().parse::<f64>().context("bad ε"))
                .collect::<Result<_>>()?;
            let est = lattice::fractional_measure(&m, &eps, *samples, *seed)?;
            json!({ "estimate": est, "within_3_sigma": est.within_sigmas(3.0) })
        }
    })
}

fn eqcount_cmd(op: &EqOp) -> Result<Value> {
    Ok(match op {
        EqOp::Eq { poly, w, h, list } => {
            let f = IntPoly::parse(poly)?;
            let sols = eqcount::solve_eq(&f, *w, *h)?;
            let mut out = json!({ "poly": f, "w": w, "H": h, "count": sols.len() });
            if *list {
                out["solutions"] = json!(sols);
            }
            out
        }
        EqOp::Sym { poly, h } => {
            let f = IntPoly::parse(poly)?;
            json!({ "poly": f, "H": h, "result": eqcount::count_symmetric_eq(&f, *h)? })
        }
        EqOp::Cong {
            modulus,
            poly,
            lambda,
            h,
            force,
        } => {
            let f = PolyMod::parse(*modulus, poly)?;
            let mode = if *force {
                PipelineMode::Force
            } else {
                PipelineMode::Regime
            };
            serde_json::to_value(eqcount::count_congruence(&f, *lambda, *h, mode)?)?
        }
    })
}

fn charsum_cmd(op: &CharOp) -> Result<Value> {
    Ok(match op {
        CharOp::Weil { chi, poly } => {
            let t = chi.table()?;
            let f = PolyMod::parse(t.prime(), poly)?;
            let sum = charsum::complete_sum_poly(&t, &f)?;
            let bound = (f.degree().max(1) - 1) as f64 * (t.prime() as f64).sqrt();
            let excluded = charsum::is_character_power(&t, &f)?;
            json!({
                "p": t.prime(), "k": t.index(), "order": t.order(), "poly": f.coeffs(),
                "sum": complex(sum), "abs": sum.norm(), "weil_bound": bound,
                "character_power": excluded,
                "within_bound": excluded || sum.norm() <= bound + 1e-6,
            })
        }
        CharOp::Bilinear { chi, set, h } => {
            let t = chi.table()?;
            let inst = BilinearInstance::unweighted(parse_u64s(set)?, *h);
            let w = charsum::bilinear_w(&t, &inst);
            json!({ "p": t.prime(), "k": t.index(), "set": inst.set, "H": h, "value": complex(w), "abs": w.norm() })
        }
        CharOp::Primes { chi, poly, q, r } => {
            let t = chi.table()?;
            let f = PolyMod::parse(t.prime(), poly)?;
            json!({ "p": t.prime(), "k": t.index(), "Q": q, "R": r,
                    "result": charsum::prime_bilinear_sum(&t, &f, *q, *r)? })
        }
        CharOp::Bound { s, h, p, e, r } => {
            serde_json::to_value(charsum::bilinear_bound(*s, *h, *p, *e, *r)?)?
        }
        CharOp::Region { d, zeta, xi } => {
            let params = RegimeParams {
                zeta: rational::parse(zeta)?,
                xi: rational::parse(xi)?,
                d: *d,
            };
            json!({ "params": params, "report": charsum::prime_sum_admissible(&params)? })
        }
    })
}

fn verify_cmd(a: &VerifyArgs) -> Result<bool> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            SweepConfig::parse(&text)?
        }
        None => SweepConfig::default(),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let report = run_sweep(&cfg)?;
    match a.emit {
        Emit::Json => emit(&(report.to_json()? + "\n"))?,
        Emit::Csv => emit(&report.to_csv()?)?,
    }
    eprintln!(
        "cells: {}, errors: {}, hard failures: {}, max slope: {}, max regime slope: {}, max slack constant: {:.3}",
        report.cells.len(),
        report.cell_errors,
        report.hard_failures.len(),
        fmt_opt(report.max_slope),
        fmt_opt(report.max_regime_slope),
        report.max_slack_constant,
    );
    Ok(report.hard_checks_hold())
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("n/a".into(), |v| format!("{v:.4}"))
}

fn run(cli: Cli) -> Result<bool> {
    let value = match &cli.command {
        Command::Energy(a) => energy_cmd(a)?,
        Command::Vinogradov(a) => vinogradov_cmd(a)?,
        Command::Lattice { op } => lattice_cmd(op)?,
        Command::Eqcount { op } => eqcount_cmd(op)?,
        Command::Charsum { op } => charsum_cmd(op)?,
        Command::Verify(a) => return verify_cmd(a),
    };
    emit(&(serde_json::to_string_pretty(&value)? + "\n"))?;
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
