//! Command-line front end. Every command writes JSON to stdout (or a table
//! with `--table`); errors go to stderr as `{"error": {"code", "message"}}`.
//!
//! Exit codes: 0 success, 1 verification or computation failure, 2 usage or
//! invalid input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::aschbacher::{self, suzuki, ClassifyConfig, DEFAULT_SUBSPACE_CAP};
use crate::ff::FieldSpec;
use crate::gsp4core::{close_subgroup, GeneratorFile, DEFAULT_CLOSURE_CAP};
use crate::induced::{self, InducedError};
use crate::primes::{self, Certificate, PrimesError, DEFAULT_SEARCH_CAP};
use crate::screener::{self, SampleConfig, ScreenError};

pub const DEFAULT_SEED: u64 = 20151;

#[derive(Parser, Debug)]
#[command(name = "gsp4kit", version, about = "GSp(4) image classification and exceptional-prime toolkit")]
pub struct Cli {
    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Seed for the randomized synthetic systems.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prime-parameter searches and certificate checking.
    Primes {
        #[command(subcommand)]
        action: PrimesAction,
    },
    /// Build the maximally induced representation for `(p, q, l)`.
    Induce {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        alpha: u64,
    },
    /// Classify the group generated by a generator file.
    Classify {
        /// JSON field spec overriding the one in the generator file.
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        generators: PathBuf,
        /// Closure size cap.
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Screen a compatible system; `builtin:symm3`, `builtin:trivial` and
    /// `builtin:generic` name synthetic systems.
    Screen {
        #[arg(long)]
        system: String,
        #[arg(long = "ell-min", default_value_t = 7)]
        ell_min: u64,
        #[arg(long = "ell-max", default_value_t = 97)]
        ell_max: u64,
        #[arg(long = "disc-bound", default_value_t = 1000)]
        disc_bound: i64,
    },
    /// Primes dividing Suzuki group orders.
    Suzuki {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        rmax: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum PrimesAction {
    Pair {
        #[arg(long = "N")]
        n: u64,
    },
    Quad {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub exit: i32,
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    fn usage(code: &'static str, message: impl ToString) -> Self {
        CliError { exit: 2, code, message: message.to_string() }
    }

    fn failure(code: &'static str, message: impl ToString) -> Self {
        CliError { exit: 1, code, message: message.to_string() }
    }
}

impl From<PrimesError> for CliError {
    fn from(e: PrimesError) -> Self {
        match e {
            PrimesError::SearchExhausted { .. } => CliError::failure("search_exhausted", e),
            PrimesError::DividesN(_) => CliError::usage("divides_n", e),
            PrimesError::NotPositive(_) => CliError::usage("not_positive", e),
        }
    }
}

impl From<InducedError> for CliError {
    fn from(e: InducedError) -> Self {
        match e {
            InducedError::Gsp(_) | InducedError::Classify(_) => CliError::failure("computation", e),
            _ => CliError::usage("bad_parameters", e),
        }
    }
}

impl From<ScreenError> for CliError {
    fn from(e: ScreenError) -> Self {
        let code = match e {
            ScreenError::ShapeViolation(_) => "shape_violation",
            ScreenError::WeightViolation(..) => "weight_violation",
            ScreenError::NoData => "no_data",
            _ => "bad_system",
        };
        CliError::usage(code, e)
    }
}

/// Output of one command: a JSON value, a table rendering, and whether all
/// verifications passed.
struct Outcome {
    json: Value,
    table: String,
    verified: bool,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage("parse", format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn conditions_table(conds: &[primes::Condition]) -> String {
    conds.iter().map(|c| format!("{:<5} {}\n", if c.pass { "ok" } else { "FAIL" }, c.name)).collect()
}

fn run_primes(action: &PrimesAction) -> Result<Outcome, CliError> {
    match action {
        PrimesAction::Pair { n } => {
            let c = primes::search_pair(*n, None, DEFAULT_SEARCH_CAP)?;
            let verified = primes::all_pass(&c.checked_conditions);
            let table = format!("N = {}, p = {}, q = {}\n{}", c.n, c.p, c.q, conditions_table(&c.checked_conditions));
            Ok(Outcome { json: to_value(&Certificate::Pair(c)), table, verified })
        }
        PrimesAction::Quad { n, k } => {
            let c = primes::search_quad(*n, *k, DEFAULT_SEARCH_CAP)?;
            let conds = primes::verify_quad(&c);
            let table = format!(
                "N = {}, k = {}, M = {}, p = {}, p' = {}, q = {}, q' = {}\n{}",
                c.n,
                c.k,
                c.m,
                c.p,
                c.p_prime,
                c.q,
                c.q_prime,
                conditions_table(&conds)
            );
            Ok(Outcome { json: to_value(&Certificate::Quad(c)), table, verified: primes::all_pass(&conds) })
        }
        PrimesAction::Verify { cert } => {
            let c: Certificate = read_json(cert)?;
            let conds = primes::verify_certificate(&c);
            let valid = primes::all_pass(&conds);
            let table = format!("{}{}\n", conditions_table(&conds), if valid { "valid" } else { "INVALID" });
            Ok(Outcome { json: json!({ "valid": valid, "conditions": conds }), table, verified: valid })
        }
    }
}

fn run_induce(p: u64, q: u64, ell: u64, alpha: u64) -> Result<Outcome, CliError> {
    let params = induced::validate_params(p, q, ell, false)?;
    let f = params.field.clone();
    if alpha == 0 || alpha >= f.order() {
        return Err(CliError::usage(
            "bad_parameters",
            format!("alpha must be a nonzero field element below {}", f.order()),
        ));
    }
    let mackey = induced::check_mackey_irreducible(&params);
    let rep = induced::build_induced(&params, alpha)?;
    let g = rep.closure(DEFAULT_CLOSURE_CAP);
    g.inner.require_complete().map_err(|e| CliError::failure("computation", e))?;
    let gens = g.generator_matrices();
    let irreducible = induced::is_irreducible(&f, &gens, g.elements())?;
    let limit = g.order() as u64;
    let t_order = rep.t.matrix.order(&f, limit);
    let frob_order = rep.frob.matrix.order(&f, limit);
    let minus_one = crate::linalg::Mat4::scalar(f.neg(1));
    let frob4_minus_identity = rep.frob.matrix.pow(&f, 4) == minus_one;
    let relation = rep.frobenius_relation_holds();
    let (sim_t, sim_f) = rep.similitudes();
    let projective_order = g.inner.projective_order().map_err(|e| CliError::failure("computation", e))?;
    let verified = mackey.irreducible && irreducible && relation && sim_t.is_some() && sim_f.is_some();
    let json = json!({
        "p": p, "q": q, "ell": ell, "m": params.m,
        "field": f.spec(),
        "zeta": f.coeffs(rep.zeta),
        "alpha": f.coeffs(alpha),
        "order": g.order(),
        "projective_order": projective_order,
        "t_order": t_order,
        "frob_order": frob_order,
        "frob4_is_minus_identity": frob4_minus_identity,
        "frobenius_relation": relation,
        "irreducible": irreducible,
        "mackey": mackey,
        "form_model": rep.form.matrix.rows(),
        "similitudes": { "t": sim_t, "frob": sim_f },
        "generators": GeneratorFile::from_elements(&f, &gens),
    });
    let table = format!(
        "field F_{}^{}\norder {} (projective {})\nt order {:?}, F order {:?}, F^4 = -I: {}\nF t F^-1 = t^q: {}\nirreducible: {}\nsimilitudes: t {:?}, F {:?}\n",
        ell, params.m, g.order(), projective_order, t_order, frob_order, frob4_minus_identity, relation, irreducible, sim_t, sim_f
    );
    Ok(Outcome { json, table, verified })
}

fn run_classify(field: Option<&PathBuf>, generators: &PathBuf, cap: usize) -> Result<Outcome, CliError> {
    if cap == 0 {
        return Err(CliError::usage("bad_cap", "cap must be positive"));
    }
    let mut file: GeneratorFile = read_json(generators)?;
    if let Some(path) = field {
        file.field = read_json::<FieldSpec>(path)?;
    }
    let (f, gens) = file.load().map_err(|e| CliError::usage("bad_generators", e))?;
    let g = close_subgroup(&f, &gens, cap);
    if g.truncated() {
        return Err(CliError::failure("closure_truncated", format!("closure exceeded {cap} elements")));
    }
    let report = aschbacher::classify(&g, &ClassifyConfig { subspace_cap: DEFAULT_SUBSPACE_CAP })
        .map_err(|e| CliError::failure("classify", e))?;
    let verified = aschbacher::verify_report(&g, &report).map_err(|e| CliError::failure("classify", e))?;
    let mut json = report.to_json();
    json["verified"] = Value::Bool(verified);
    let cases: Vec<String> = report.cases().iter().map(|c| c.to_string()).collect();
    let table = format!(
        "order {} (projective {})\ncases: {}\nlarge image: {}\nwitnesses verified: {}\n",
        report.group_order,
        report.projective_order,
        if cases.is_empty() { "-".to_string() } else { cases.join(", ") },
        report.large_image,
        verified
    );
    Ok(Outcome { json, table, verified })
}

fn load_system(spec: &str, seed: u64) -> Result<screener::CompatibleSystem, CliError> {
    Ok(match spec {
        "builtin:symm3" => screener::make_symm3_system(&screener::CONDUCTOR_15_CURVE, &[3, 5], 15, 0, 300),
        "builtin:trivial" => screener::trivial_system(0, 0, 300),
        "builtin:generic" => screener::make_generic_system(seed, 300),
        path => screener::load_system(std::path::Path::new(path))?,
    })
}

fn run_screen(system: &str, ell_min: u64, ell_max: u64, disc_bound: i64, seed: u64) -> Result<Outcome, CliError> {
    if ell_min > ell_max {
        return Err(CliError::usage("bad_range", "ell-min exceeds ell-max"));
    }
    let sys = load_system(system, seed)?;
    let cfg = SampleConfig { disc_bound, ..SampleConfig::default() };
    let report = screener::screen(&sys, ell_min, ell_max, &cfg)?;
    Ok(Outcome { json: to_value(&report), table: report.table(), verified: true })
}

fn run_suzuki(prime: u64, rmax: u32) -> Result<Outcome, CliError> {
    if !crate::arith::is_prime(prime) || prime == 2 {
        return Err(CliError::usage("not_prime", format!("{prime} is not an odd prime")));
    }
    let odd = suzuki::suzuki_divisibility(prime, rmax);
    let all = suzuki::formula_divisibility(prime, rmax);
    let order_of_two = crate::arith::multiplicative_order(2, prime);
    let json = json!({
        "prime": prime,
        "rmax": rmax,
        "divisible_odd_r": odd,
        "formula_divisible_any_r": all,
        "order_of_2": order_of_two,
    });
    let table = format!(
        "prime {prime}, r <= {rmax}\nodd r with {prime} | |Sz(2^r)|: {odd:?}\nall r dividing the formula: {all:?}\norder of 2 mod {prime}: {order_of_two:?}\n"
    );
    Ok(Outcome { json, table, verified: true })
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Primes { action } => run_primes(action),
        Command::Induce { p, q, ell, alpha } => run_induce(*p, *q, *ell, *alpha),
        Command::Classify { field, generators, cap } => run_classify(field.as_ref(), generators, *cap),
        Command::Screen { system, ell_min, ell_max, disc_bound } => {
            run_screen(system, *ell_min, *ell_max, *disc_bound, cli.seed)
        }
        Command::Suzuki { prime, rmax } => run_suzuki(*prime, *rmax),
    }
}

fn write_error(err: &mut dyn Write, code: &str, message: &str) {
    let body = json!({ "error": { "code": code, "message": message } });
    let _ = writeln!(err, "{body}");
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            write_error(err, "usage", e.to_string().trim());
            return 2;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let text = if cli.table {
                outcome.table
            } else {
                serde_json::to_string_pretty(&outcome.json).expect("serializable") + "\n"
            };
            let _ = out.write_all(text.as_bytes());
            if outcome.verified {
                0
            } else {
                write_error(err, "verification_failed", "one or more checks failed");
                1
            }
        }
        Err(e) => {
            write_error(err, e.code, &e.message);
            e.exit
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gsp4kit").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn suzuki_281() {
        let (code, out, _) = call(&["suzuki", "--prime", "281", "--rmax", "1000"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["divisible_odd_r"], json!([]));
        assert_eq!(v["order_of_2"], json!(70));
    }

    #[test]
    fn quad_rejects_multiple_of_281() {
        let (code, out, err) = call(&["primes", "quad", "--N", "562"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["code"], "divides_n");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = call(&["suzuki", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"usage\""));
    }

    #[test]
    fn pair_table() {
        let (code, out, _) = call(&["--table", "primes", "pair", "--N", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("N = 1, p = 13, q = 5"));
    }
}
