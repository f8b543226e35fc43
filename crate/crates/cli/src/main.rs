mod args;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;

use popzeta::arithfun::{SumIdentity, SumIdentityVerifier, SUM_IDENTITIES};
use popzeta::asymptotics::{
    estimate_a, geometric_grid, lnp_over_p, mertens_fit, mesch_check, one_over_p,
    series_integral_constant, sigexp_check, AsymptoticFit, PowerDecay,
};
use popzeta::population::{enumerate_pop, InclusionExclusion};
use popzeta::powerseries::{verify_series_identity, SERIES_IDENTITIES};
use popzeta::primes::sieve_primes;
use popzeta::zeta_eval::{
    self, abel_integral_check, gamma_integral_check, log_mobius_check, method_agreement_check,
    perron_estimate, power_identity_check, shift_identity_check, weierstrass_identity_check,
    EvalConfig, EvalResult,
};
use popzeta::{ArithmeticalList, Error, IdentityReport, ListKind};

use args::{Cli, Command, EvalArgs, Function, GridSpec, ListSpec, MertensKind, MethodArg};

/// Population tables of infinite lists are capped here; each member takes
/// eight bytes.
const MAX_TABLE: u64 = 500_000_000;

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Lib(e) => match e {
                Error::Resource(_) | Error::InsufficientMaterialization { .. } => 3,
                Error::Domain(_)
                | Error::EmptyRange(_)
                | Error::ListConstraint { .. }
                | Error::OutOfRange { .. }
                | Error::Precondition(_)
                | Error::UnknownIdentity(_)
                | Error::NotArithmetical(_) => 2,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("popzeta: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn sink(output: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn build_list(spec: &ListSpec, bound: u64) -> Result<ArithmeticalList, Failure> {
    let bound = bound.max(2);
    let list = match (&spec.list, &spec.primes) {
        (Some((1, 1)), _) => ArithmeticalList::full(bound)?,
        (Some((r0, r)), _) => ArithmeticalList::arithmetical(*r0, *r, bound)?,
        (None, Some(ps)) => ArithmeticalList::explicit(ps)?,
        (None, None) => return Err(Failure::Usage("one of --list or --primes is required".into())),
    };
    Ok(list)
}

fn check_table_bound(list: &ArithmeticalList, bound: u64) -> Result<(), Failure> {
    if !list.kind().is_finite() && bound > MAX_TABLE {
        return Err(Failure::Lib(Error::Resource(format!(
            "a population table up to {bound} exceeds the limit {MAX_TABLE}"
        ))));
    }
    Ok(())
}

fn eval_config(args: &EvalArgs) -> Result<EvalConfig, Failure> {
    let cfg = EvalConfig::default()
        .with_prime_cutoff(args.prime_cutoff)
        .with_series_cutoff(args.series_cutoff);
    cfg.validate()?;
    check_size("--prime-cutoff", args.prime_cutoff)?;
    check_size("--series-cutoff", args.series_cutoff)?;
    Ok(cfg)
}

fn check_size(flag: &str, n: u64) -> Result<(), Failure> {
    if n > MAX_TABLE {
        return Err(Failure::Lib(Error::Resource(format!("{flag} {n} exceeds the limit {MAX_TABLE}"))));
    }
    Ok(())
}

fn grid(spec: GridSpec) -> Result<Vec<f64>, Failure> {
    Ok(geometric_grid(spec.lo, spec.hi, spec.per_decade)?)
}

fn write_reports(out: &mut dyn Write, reports: &[IdentityReport]) -> io::Result<()> {
    writeln!(out, "{}", IdentityReport::CSV_HEADER)?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()
}

fn summary_row(fit: &AsymptoticFit) -> String {
    format!(
        "{},{},{},{},{:e},{}",
        fit.quantity,
        fit.constant,
        fit.band.0,
        fit.band.1,
        fit.grid_max(),
        fit.exploratory
    )
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Enumerate { list, max, output } => {
            let mut l = build_list(&list, max)?;
            check_table_bound(&l, max)?;
            let table = enumerate_pop(&mut l, max)?;
            let mut out = sink(output.as_deref())?;
            for m in table.members() {
                writeln!(out, "{m}")?;
            }
            out.flush()?;
            Ok(true)
        }

        Command::Count {
            list,
            max,
            inclusion_exclusion,
            output,
        } => {
            let mut l = build_list(&list, max)?;
            check_table_bound(&l, max)?;
            let table = enumerate_pop(&mut l, max)?;
            let n = table.n_pop(max as f64)?;
            let mut out = sink(output.as_deref())?;
            writeln!(out, "x,n_pop")?;
            writeln!(out, "{max},{n}")?;
            let mut ok = true;
            if inclusion_exclusion {
                let ie = InclusionExclusion::new(&l, max, max)?;
                let mut first_bad = None;
                for x in 1..=max {
                    if ie.count(x)? != table.count(x) as i64 {
                        first_bad = Some(x);
                        break;
                    }
                }
                match first_bad {
                    None => writeln!(out, "inclusion_exclusion,agrees")?,
                    Some(x) => {
                        writeln!(out, "inclusion_exclusion,differs at {x}")?;
                        ok = false;
                    }
                }
            }
            out.flush()?;
            Ok(ok)
        }

        Command::Identities {
            list,
            max,
            all,
            id,
            a,
            output,
        } => {
            let ids = sum_identity_ids(all, &id)?;
            let mut l = build_list(&list, max)?;
            check_table_bound(&l, max)?;
            let table = enumerate_pop(&mut l, max)?;
            let reports = run_sum_identities(&table, &ids, max, &a)?;
            let mut out = sink(output.as_deref())?;
            write_reports(&mut out, &reports)?;
            Ok(reports.iter().all(|r| r.pass))
        }

        Command::SeriesIdentities {
            list,
            degree,
            all,
            id,
            output,
        } => {
            let l = build_list(&list, degree as u64)?;
            let ids: Vec<String> = if all {
                SERIES_IDENTITIES.iter().map(|s| s.id().to_string()).collect()
            } else {
                id
            };
            let reports = ids
                .iter()
                .map(|i| verify_series_identity(i, &l, degree))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = sink(output.as_deref())?;
            write_reports(&mut out, &reports)?;
            Ok(reports.iter().all(|r| r.pass))
        }

        Command::Eval {
            list,
            function,
            method,
            s,
            k,
            x,
            sigma,
            t_max,
            cfg,
            output,
        } => {
            let cfg = eval_config(&cfg)?;
            let l = build_list(&list, cfg.prime_cutoff)?;
            let mut out = sink(output.as_deref())?;
            if function == Function::Perron {
                let x = x.ok_or_else(|| Failure::Usage("perron needs --x".into()))?;
                let est = perron_estimate(&l, x, sigma, t_max, &cfg)?;
                writeln!(out, "x,sigma,T,estimate,err")?;
                writeln!(out, "{x},{sigma},{t_max},{:e},{:e}", est.value.re, est.err)?;
                out.flush()?;
                return Ok(true);
            }
            if s.is_empty() {
                return Err(Failure::Usage("at least one --s is required".into()));
            }
            let rows = evaluate(&l, function, method, &s, k, &cfg)?;
            zeta_eval::write_grid(&mut out, &rows)?;
            out.flush()?;
            Ok(true)
        }

        Command::Mertens {
            list,
            kind,
            grid: spec,
            output,
        } => {
            let l = build_list(&list, spec.hi.floor() as u64)?;
            let g = grid(spec)?;
            let fit = match kind {
                MertensKind::Gamma => mertens_fit(&l, &g)?,
                MertensKind::Lnp => lnp_over_p(&l, &g)?,
                MertensKind::OneOverP => one_over_p(&l, &g)?,
            };
            emit_fit(&fit, output.as_deref())?;
            Ok(true)
        }

        Command::EstimateA {
            list,
            grid: spec,
            output,
        } => {
            let bound = spec.hi.floor() as u64;
            let mut l = build_list(&list, bound)?;
            check_table_bound(&l, bound)?;
            let table = enumerate_pop(&mut l, bound)?;
            let fit = estimate_a(&l, &grid(spec)?, &table)?;
            eprintln!("note: exploratory estimate; the limit is not known to exist");
            emit_fit(&fit, output.as_deref())?;
            Ok(true)
        }

        Command::Asymptotics {
            list,
            grid: spec,
            small_grid,
            n_max,
            output,
        } => run_asymptotics(&list, spec, small_grid, n_max, output.as_deref()),

        Command::Report {
            list,
            max,
            degree,
            s,
            cfg,
            output,
        } => {
            let cfg = eval_config(&cfg)?;
            let bound = max.max(cfg.prime_cutoff).max(cfg.series_cutoff).max(degree as u64);
            let mut l = build_list(&list, bound)?;
            check_table_bound(&l, bound)?;
            let mut reports = Vec::new();

            let table = enumerate_pop(&mut l, max)?;
            let ids: Vec<SumIdentity> = SUM_IDENTITIES.to_vec();
            reports.extend(run_sum_identities(&table, &ids, max, &[-2.0, 1.0])?);
            for id in SERIES_IDENTITIES {
                reports.push(verify_series_identity(id.id(), &l, degree)?);
            }
            let series_table = enumerate_pop(&mut l, cfg.series_cutoff)?;
            let arithmetical = matches!(l.kind(), ListKind::Full | ListKind::Arithmetical { .. });
            let first_index_one =
                matches!(l.kind(), ListKind::Full | ListKind::Arithmetical { r0: 1, .. });
            for &z in &s {
                reports.push(weierstrass_identity_check(&l, z, &cfg)?);
                if arithmetical {
                    reports.push(shift_identity_check(&l, z, &cfg)?);
                }
                if first_index_one {
                    reports.push(power_identity_check(&l, z, &cfg)?);
                }
                reports.push(log_mobius_check(&l, z, &cfg)?);
                reports.push(gamma_integral_check(&l, z, &cfg)?);
                reports.push(method_agreement_check(&l, z, &cfg)?);
                reports.push(abel_integral_check(&l, &series_table, z, cfg.series_cutoff, &cfg)?);
            }
            let mut out = sink(output.as_deref())?;
            write_reports(&mut out, &reports)?;
            Ok(reports.iter().all(|r| r.pass))
        }
    }
}

fn sum_identity_ids(all: bool, ids: &[String]) -> Result<Vec<SumIdentity>, Failure> {
    if all {
        return Ok(SUM_IDENTITIES.to_vec());
    }
    Ok(ids
        .iter()
        .map(|i| SumIdentity::from_id(i))
        .collect::<Result<Vec<_>, _>>()?)
}

/// One report per identity and exponent: the smallest failing `x`, or the
/// report at `max` when every `x <= max` passes.
fn run_sum_identities(
    table: &popzeta::PopulationTable,
    ids: &[SumIdentity],
    max: u64,
    exponents: &[f64],
) -> Result<Vec<IdentityReport>, Failure> {
    let mut reports = Vec::new();
    for &id in ids {
        let choices: Vec<Option<f64>> = if id.uses_a() {
            exponents.iter().map(|&a| Some(a)).collect()
        } else {
            vec![None]
        };
        for a in choices {
            let v = SumIdentityVerifier::new(id, table, max, a)?;
            let report = match v.first_failure() {
                Some(bad) => bad,
                None => v.evaluate(max as f64)?,
            };
            reports.push(report);
        }
    }
    Ok(reports)
}

fn evaluate(
    list: &ArithmeticalList,
    function: Function,
    method: MethodArg,
    points: &[Complex64],
    k: Option<u64>,
    cfg: &EvalConfig,
) -> Result<Vec<(Complex64, EvalResult)>, Failure> {
    let k = || -> Result<u64, Failure> {
        k.or_else(|| list.reason())
            .ok_or_else(|| Failure::Usage("--k is required for lists without a reason".into()))
    };
    if function == Function::ZetaK {
        let table = sieve_primes(cfg.prime_cutoff)?;
        let values = zeta_eval::zeta_k_path(&table, k()?, points, cfg)?;
        return Ok(points.iter().copied().zip(values).collect());
    }
    let series_table = if function == Function::Zeta && method == MethodArg::Dirichlet {
        check_table_bound(list, cfg.series_cutoff)?;
        let mut l = list.clone();
        Some(enumerate_pop(&mut l, cfg.series_cutoff)?)
    } else {
        None
    };
    let primes = if function == Function::GK {
        Some(sieve_primes(cfg.prime_cutoff)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(points.len());
    for &s in points {
        let r = match function {
            Function::Zeta => match &series_table {
                Some(t) => zeta_eval::zeta_dirichlet(t, s, cfg)?,
                None => zeta_eval::zeta_euler(list, s, cfg)?,
            },
            Function::Eta => zeta_eval::eta(list, s, cfg)?,
            Function::EtaDerivative => zeta_eval::eta_derivative(list, s, cfg)?,
            Function::W => zeta_eval::w_regularized(list, s, cfg)?,
            Function::WShift => zeta_eval::w_shift(list, s, cfg)?,
            Function::GK => zeta_eval::g_k(primes.as_ref().expect("sieved above"), s, k()?, cfg)?,
            Function::ZetaK | Function::Perron => unreachable!("handled above"),
        };
        rows.push((s, r));
    }
    Ok(rows)
}

/// Summary on stdout; per-point CSV to `output` when given.
fn emit_fit(fit: &AsymptoticFit, output: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = output {
        let mut f = BufWriter::new(File::create(p)?);
        fit.write_csv(&mut f)?;
        f.flush()?;
    }
    let mut out = io::stdout().lock();
    write!(out, "{}", fit.summary())?;
    out.flush()?;
    Ok(())
}

fn run_asymptotics(
    list: &ListSpec,
    spec: GridSpec,
    small: GridSpec,
    n_max: u64,
    output: Option<&Path>,
) -> Outcome {
    if small.hi >= 1.0 {
        return Err(Failure::Usage("--small-grid must lie below 1".into()));
    }
    let bound = (spec.hi.floor() as u64)
        .max((40.0 / small.lo).ceil() as u64)
        .max(n_max);
    let mut l = build_list(list, bound)?;
    check_table_bound(&l, bound)?;
    let table = enumerate_pop(&mut l, bound)?;

    let a = estimate_a(&l, &grid(spec)?, &table)?;
    let harmonic = mesch_check(&l, &table, &a)?;
    let laplace = sigexp_check(&l, &grid(small)?, a.constant, &table)?;
    let series = series_integral_constant(table.label(), table.members(), &PowerDecay(1.0), n_max)?;

    let fits = [
        ("density.csv", &a),
        ("harmonic.csv", &harmonic),
        ("laplace.csv", &laplace.fit),
        ("series_integral.csv", &series),
    ];
    if let Some(dir) = output {
        fs::create_dir_all(dir)?;
        for (name, fit) in fits {
            let mut f = BufWriter::new(File::create(dir.join(name))?);
            fit.write_csv(&mut f)?;
            f.flush()?;
        }
        let mut f = BufWriter::new(File::create(dir.join("laplace_identity.csv"))?);
        write_reports(&mut f, &laplace.identity)?;
    }
    let mut out = io::stdout().lock();
    writeln!(out, "fit,constant,band_lo,band_hi,grid_max,exploratory")?;
    for (_, fit) in fits {
        writeln!(out, "{}", summary_row(fit))?;
    }
    let failed = laplace.identity.iter().filter(|r| !r.pass).count();
    writeln!(out, "laplace_identity_failures,{failed}")?;
    out.flush()?;
    Ok(failed == 0)
}
