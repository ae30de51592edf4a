//! `wronsk`: linear-dependence certificates from the command line.

use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wronskian_core::certify::{
    certify_multivariate, certify_rational_with, certify_univariate, expand_rational_family, verify_certificate,
    verify_multivariate_certificate, verify_rational_certificate, LeadingData, WitnessSource,
};
use wronskian_core::genwronskian::{for_each_generalized_wronskian, gen_wronskian_specs, spec_count};
use wronskian_core::parse::{FamilyFile, UnivariateFamily};
use wronskian_core::reduction::{reduce_to_distinct_leading_exponents, reduce_to_distinct_orders};
use wronskian_core::wronskian::{monomial_wronskian_factors, wronskian as wronskian_of};
use wronskian_core::{
    Certificate, Error, FieldElement, FieldSpec, MSeries, Monomial, RationalFunction, Series, Strategy, Verdict,
    Witness,
};

const EXIT_DEPENDENT: u8 = 10;
const EXIT_INCONCLUSIVE: u8 = 20;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "wronsk", version, about = "Wronskian certificates of linear (in)dependence")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Coefficient field, "Q" or "Fp:<prime>" (overrides the file header)
    #[arg(long, global = true, value_name = "FIELD")]
    field: Option<FieldSpec>,
    /// Working precision (overrides the file header)
    #[arg(long, global = true, value_name = "T", allow_hyphen_values = true)]
    prec: Option<i64>,
    /// Number of variables (overrides the file header)
    #[arg(long, global = true, value_name = "M")]
    vars: Option<usize>,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide linear dependence and print a certificate
    Certify {
        path: PathBuf,
        /// How rational functions are expanded
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Print the Wronskian of a univariate family
    Wronskian {
        path: PathBuf,
        /// For monomial families, print the closed-form factors
        #[arg(long)]
        closed_form: bool,
    },
    /// Reduce a family to distinct orders and print the result as JSON
    Reduce { path: PathBuf },
    /// Generalized Wronskians of a multivariate family
    Genwronsk {
        path: Option<PathBuf>,
        /// List the operator tuples without evaluating anything
        #[arg(long)]
        enumerate_only: bool,
        /// Evaluate every generalized Wronskian
        #[arg(long, conflicts_with = "enumerate_only")]
        all: bool,
        /// Family size for --enumerate-only without a file
        #[arg(long, value_name = "N")]
        size: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Laurent,
    Translate,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Laurent => Strategy::LaurentExpansion,
            StrategyArg::Translate => Strategy::Translation,
        }
    }
}

/// Failure of a command, already formatted for stderr.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(Failure(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
        (Ok(_), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Certify { path, strategy } => {
            let file = load(path, g)?;
            cmd_certify(&file, path, *strategy, g.json, out)
        }
        Command::Wronskian { path, closed_form } => {
            let file = load(path, g)?;
            cmd_wronskian(&file, path, *closed_form, g.json, out)
        }
        Command::Reduce { path } => {
            let file = load(path, g)?;
            cmd_reduce(&file, path, out)
        }
        Command::Genwronsk {
            path,
            enumerate_only,
            all,
            size,
        } => {
            let file = path.as_ref().map(|p| load(p, g)).transpose()?;
            if *enumerate_only {
                let n = size
                    .or_else(|| file.as_ref().map(|f| f.entries.len()))
                    .ok_or_else(|| Failure("--enumerate-only needs a family file or --size".into()))?;
                let m = g.vars.or_else(|| file.as_ref().map(FamilyFile::vars_or_default));
                let m = m.ok_or_else(|| Failure("--enumerate-only needs a family file or --vars".into()))?;
                return cmd_enumerate(n, m, g.json, out);
            }
            let (Some(file), Some(path)) = (file, path) else {
                return Err(Failure("genwronsk needs a family file".into()));
            };
            cmd_genwronsk(&file, path, *all, g.json, out)
        }
    }
}

fn load(path: &Path, g: &GlobalOpts) -> Result<FamilyFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let mut file = FamilyFile::parse(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))?;
    if g.field.is_some() {
        file.field = g.field;
    }
    if g.vars.is_some() {
        file.vars = g.vars;
    }
    if g.prec.is_some() {
        file.precision = g.prec;
    }
    Ok(file)
}

/// Evaluation errors that carry a position are reported against the file.
fn located(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Parse(p) => Failure(format!("{}:{p}", path.display())),
        other => Failure(other.to_string()),
    }
}

enum Family {
    Series(Vec<Series>),
    Rational {
        members: Vec<RationalFunction>,
        precision: Option<i64>,
    },
    Multi(Vec<MSeries>),
}

fn evaluate(file: &FamilyFile, path: &Path) -> Result<Family, Failure> {
    if file.vars_or_default() > 1 {
        return Ok(Family::Multi(file.multivariate().map_err(located(path))?));
    }
    Ok(match file.univariate().map_err(located(path))? {
        UnivariateFamily::Series(s) => Family::Series(s),
        UnivariateFamily::Rational { members, precision } => Family::Rational { members, precision },
    })
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Independent => 0,
        Verdict::Dependent | Verdict::DependentUpToPrecision => EXIT_DEPENDENT,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_certify(
    file: &FamilyFile,
    path: &Path,
    strategy: Option<StrategyArg>,
    json: bool,
    out: &mut impl Write,
) -> CmdResult {
    let family = evaluate(file, path)?;
    let cert = match family {
        // An explicit strategy on an exact family treats it as rational functions.
        Family::Series(s) if strategy.is_some() && s.iter().all(Series::is_exact) => {
            let members = s
                .iter()
                .map(RationalFunction::from_laurent)
                .collect::<Result<Vec<_>, _>>()?;
            certify_rational_checked(&members, strategy.map(Into::into), file.precision)?
        }
        Family::Series(s) => {
            let cert = certify_univariate(&s)?;
            ensure(verify_certificate(&s, &cert)?)?;
            cert
        }
        Family::Rational { members, precision } => {
            certify_rational_checked(&members, strategy.map(Into::into), precision)?
        }
        Family::Multi(s) => {
            let cert = certify_multivariate(&s)?;
            ensure(verify_multivariate_certificate(&s, &cert)?)?;
            cert
        }
    };
    if json {
        writeln!(out, "{}", pretty(&cert.to_json()))?;
    } else {
        write_certificate(&cert, out)?;
    }
    Ok(exit_code(cert.verdict))
}

fn certify_rational_checked(
    members: &[RationalFunction],
    strategy: Option<Strategy>,
    precision: Option<i64>,
) -> Result<Certificate, Failure> {
    let cert = certify_rational_with(members, strategy.unwrap_or(Strategy::LaurentExpansion), precision)?;
    ensure(verify_rational_certificate(members, &cert)?)?;
    Ok(cert)
}

fn ensure(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure("internal error: certificate failed verification".into()))
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn vector(v: &[FieldElement]) -> String {
    format!("({})", join(v, ", "))
}

fn write_certificate(cert: &Certificate, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "verdict: {}", cert.verdict)?;
    if let Some(e) = &cert.expansion {
        writeln!(
            out,
            "expansion: {} at {}, precision {}",
            e.strategy, e.shift, e.precision
        )?;
    }
    match &cert.witness {
        Witness::Dependence { vector: c } => writeln!(out, "dependence: {}", vector(c))?,
        Witness::Caveat { reason, oracle_rank } => {
            writeln!(out, "reason: {reason}")?;
            if let Some(r) = oracle_rank {
                writeln!(out, "oracle rank: {r}")?;
            }
        }
        Witness::Independence(w) => {
            let rows: Vec<String> = w.transform.iter().map(|r| vector(r)).collect();
            writeln!(out, "transform: [{}]", rows.join(", "))?;
            match &w.leading {
                LeadingData::Univariate { members, wronskian } => {
                    writeln!(out, "leading monomials: {}", join(members, "; "))?;
                    writeln!(out, "wronskian leading monomial: {wronskian}")?;
                }
                LeadingData::Multivariate {
                    members,
                    operators,
                    wronskian,
                } => {
                    writeln!(out, "leading monomials: {}", join(members, "; "))?;
                    writeln!(out, "operators: {} {operators}", operators.label())?;
                    writeln!(out, "wronskian leading monomial: {wronskian}")?;
                }
            }
            let source = match w.source {
                WitnessSource::ClosedForm => "closed form",
                WitnessSource::FullExpansion => "full expansion",
            };
            writeln!(out, "source: {source}")?;
        }
    }
    Ok(())
}

fn univariate_series(file: &FamilyFile, path: &Path, what: &str) -> Result<Vec<Series>, Failure> {
    match evaluate(file, path)? {
        Family::Series(s) => Ok(s),
        Family::Rational { members, precision } => {
            let (s, _) = expand_rational_family(&members, Strategy::LaurentExpansion, precision)?;
            Ok(s)
        }
        Family::Multi(_) => Err(Failure(format!("{what} needs a univariate family"))),
    }
}

fn as_monomial(s: &Series) -> Option<Monomial<i64>> {
    let mut terms = s.terms();
    let (e, c) = terms.next()?;
    (s.is_exact() && terms.next().is_none()).then(|| Monomial::new(c.clone(), e))
}

fn cmd_wronskian(file: &FamilyFile, path: &Path, closed_form: bool, json: bool, out: &mut impl Write) -> CmdResult {
    let family = univariate_series(file, path, "wronskian")?;
    if closed_form {
        let monomials = family
            .iter()
            .map(as_monomial)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Failure("--closed-form needs a family of nonzero exact monomials".into()))?;
        let factors = monomial_wronskian_factors(&monomials)?;
        let value = &factors.vandermonde * &factors.coefficient_product;
        let product = if value.is_zero() {
            "0".to_string()
        } else {
            Monomial::new(value, factors.exponent).to_string()
        };
        if json {
            let v = serde_json::json!({
                "V": factors.vandermonde.to_string(),
                "exp": factors.exponent,
                "coeff": factors.coefficient_product.to_string(),
                "wronskian": product,
            });
            writeln!(out, "{}", pretty(&v))?;
        } else {
            writeln!(
                out,
                "V={}, exp={}, coeff={} → {product}",
                factors.vandermonde, factors.exponent, factors.coefficient_product
            )?;
        }
        return Ok(0);
    }
    let w = wronskian_of(&family)?;
    if json {
        writeln!(out, "{}", pretty(&serde_json::json!({ "wronskian": w.to_string() })))?;
    } else {
        writeln!(out, "{w}")?;
    }
    Ok(0)
}

fn cmd_reduce(file: &FamilyFile, path: &Path, out: &mut impl Write) -> CmdResult {
    let v = match evaluate(file, path)? {
        Family::Multi(s) => reduce_to_distinct_leading_exponents(&s)?.to_json(),
        _ => reduce_to_distinct_orders(&univariate_series(file, path, "reduce")?)?.to_json(),
    };
    writeln!(out, "{}", pretty(&v))?;
    Ok(0)
}

fn cmd_enumerate(n: usize, m: usize, json: bool, out: &mut impl Write) -> CmdResult {
    if n == 0 || m == 0 {
        return Err(Failure("family size and variable count must be positive".into()));
    }
    let count = spec_count(n, m).ok_or_else(|| Failure("operator count overflows".into()))?;
    for spec in gen_wronskian_specs(n, m) {
        if json {
            writeln!(out, "{spec}")?;
        } else {
            writeln!(out, "{spec}\t{}", spec.label())?;
        }
    }
    writeln!(out, "count: {count}")?;
    Ok(0)
}

fn cmd_genwronsk(file: &FamilyFile, path: &Path, all: bool, json: bool, out: &mut impl Write) -> CmdResult {
    let family = match evaluate(file, path)? {
        Family::Multi(s) => s,
        _ => return Err(Failure("genwronsk needs a family in at least two variables".into())),
    };
    let field = family[0].spec();
    if field.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(field).into());
    }
    let mut total = 0u128;
    let mut nonzero = 0u128;
    let mut io_error = None;
    let found = for_each_generalized_wronskian(&family, |spec, value| {
        total += 1;
        let hit = !value.is_zero();
        let line = if json {
            serde_json::json!({ "ops": spec, "label": spec.label(), "value": value.to_string() }).to_string()
        } else {
            format!("{spec}\t{}\t{value}", spec.label())
        };
        if all || hit {
            if let Err(e) = writeln!(out, "{line}") {
                io_error = Some(e);
                return ControlFlow::Break(());
            }
        }
        if hit {
            nonzero += 1;
            if !all {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if nonzero == 0 {
        writeln!(out, "all zero")?;
    } else if all {
        writeln!(out, "nonzero: {nonzero} of {total}")?;
    }
    debug_assert!(all || found.is_some() || nonzero == 0);
    Ok(0)
}
