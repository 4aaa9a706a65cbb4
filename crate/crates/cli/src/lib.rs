//! Command-line front end for `freearr`.

mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use freearr::arrangement::{aut_group, lattice_iso, Arrangement, IntersectionLattice};
use freearr::freeness::{decide_freeness, FreenessVerdict};
use freearr::induction::{
    abe_pair_check, format_chain, inductively_free, non_if_witness, parse_chain, recursively_free, replay_chain,
    AbeOutcome, RfVerdict,
};
use freearr::moduli::{parse_family, Family};
use freearr::scalars::{parse_rational, BigRat, QuadElem, Scalar};

pub use report::{build_report, Report};

#[derive(Parser, Debug)]
#[command(name = "freearr", version, about = "Exact analysis of central rank-3 hyperplane arrangements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Builtin family (`paper13`, `paper15`) or a family/arrangement file.
    pub input: String,
    /// Parameter value: a rational such as `-1/2`, or `quad d a b` for `a + b sqrt(d)`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[command(flatten)]
    pub target: Target,
    /// Largest arrangement the search may visit (default: n + 1).
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub max_states: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-hyperplane lists of multiple points.
    Lattice(Target),
    /// Characteristic polynomial.
    Chi(Target),
    /// Freeness verdict with a Saito certificate.
    Free(Target),
    /// Inductive freeness.
    Indfree(Target),
    /// Bounded search for recursive freeness.
    Recfree {
        #[command(flatten)]
        search: SearchArgs,
        /// Re-check a chain of moves instead of searching.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Exceptional parameters of a one-parameter family.
    Moduli {
        input: String,
    },
    /// Automorphism group of the lattice.
    Aut(Target),
    /// Lattice isomorphism between two inputs.
    Iso {
        first: String,
        second: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Deletion-pair root check for every hyperplane.
    Abe(Target),
    /// Full analysis.
    Report(SearchArgs),
    /// Checks that a listing file describes the lattice of the input.
    VerifyLattice {
        #[command(flatten)]
        target: Target,
        listing: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Printed output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// Exit code for inconclusive verdicts.
pub const INCONCLUSIVE: i32 = 2;

/// A builtin family name or a path to a family file.
pub fn parse_input(src: &str) -> Result<Family, CliError> {
    if matches!(src, "paper13" | "paper15") {
        return Family::builtin(src).map_err(invalid);
    }
    let text = std::fs::read_to_string(src).map_err(|e| invalid(format!("{src}: {e}")))?;
    let family = parse_family(&text).map_err(|e| invalid(format!("{src}: {e}")))?;
    Ok(family)
}

#[derive(Clone, Debug, PartialEq)]
pub enum AtValue {
    Rational(BigRat),
    Quadratic(QuadElem),
}

impl std::fmt::Display for AtValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtValue::Rational(r) => write!(f, "{r}"),
            AtValue::Quadratic(q) => write!(f, "{q}"),
        }
    }
}

/// `-1/2`, `3`, or `quad d a b` meaning `a + b sqrt(d)`.
pub fn parse_at(s: &str) -> Result<AtValue, CliError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("quad") {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        let [d, a, b] = parts[..] else {
            return Err(invalid(format!("--at {s:?}: expected `quad d a b`")));
        };
        let d: i64 = d.parse().map_err(|_| invalid(format!("--at: bad field parameter {d:?}")))?;
        let a = parse_rational(a).map_err(invalid)?;
        let b = parse_rational(b).map_err(invalid)?;
        let q = QuadElem::new(d, a, b).map_err(invalid)?;
        return Ok(if q.irrational_part() == &BigRat::from_integer(0.into()) {
            AtValue::Rational(q.rational_part().clone())
        } else {
            AtValue::Quadratic(q)
        });
    }
    parse_rational(s).map(AtValue::Rational).map_err(|_| invalid(format!("--at: cannot parse {s:?}")))
}

/// Hyperplanes removed or merged by a specialization, 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SpecNote {
    pub dropped: Vec<usize>,
    pub merged: Vec<(usize, usize)>,
}

/// The arrangement an input denotes, over the field its parameter needs.
pub enum Resolved {
    Rational(Arrangement<BigRat>, SpecNote),
    Quadratic(Arrangement<QuadElem>, SpecNote),
}

fn specialize_into<F: Scalar>(family: &Family, omega: &F) -> Result<(Arrangement<F>, SpecNote), CliError> {
    let s = family.specialize(omega);
    let note = SpecNote {
        dropped: s.dropped.iter().map(|h| h + 1).collect(),
        merged: s.merged.iter().map(|(i, j)| (i + 1, j + 1)).collect(),
    };
    let a = s
        .arrangement
        .ok_or_else(|| invalid(format!("at t = {omega} the arrangement is not essential")))?;
    Ok((a, note))
}

pub fn resolve(family: &Family, at: Option<&str>) -> Result<Resolved, CliError> {
    let value = match at {
        Some(s) => parse_at(s)?,
        None if family.is_constant() => AtValue::Rational(BigRat::from_integer(0.into())),
        None => {
            return Err(invalid(format!(
                "{} depends on t; pass --at to choose a parameter value",
                family.name()
            )))
        }
    };
    Ok(match value {
        AtValue::Rational(r) => {
            let (a, n) = specialize_into(family, &r)?;
            Resolved::Rational(a, n)
        }
        AtValue::Quadratic(q) => {
            let (a, n) = specialize_into(family, &q)?;
            Resolved::Quadratic(a, n)
        }
    })
}

/// The lattice of the input: the specialized arrangement when a value is
/// given or the family is constant, the generic lattice otherwise.
pub fn resolve_lattice(family: &Family, at: Option<&str>) -> Result<IntersectionLattice, CliError> {
    if at.is_none() && !family.is_constant() {
        return Ok(family.generic_lattice().clone());
    }
    Ok(match resolve(family, at)? {
        Resolved::Rational(a, _) => a.lattice(),
        Resolved::Quadratic(a, _) => a.lattice(),
    })
}

macro_rules! with_arrangement {
    ($resolved:expr, |$a:ident, $note:ident| $body:expr) => {
        match $resolved {
            Resolved::Rational($a, $note) => $body,
            Resolved::Quadratic($a, $note) => $body,
        }
    };
}

fn to_json(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn one_based(perm: &[usize]) -> Vec<usize> {
    perm.iter().map(|h| h + 1).collect()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Lattice(t) => {
            let l = resolve_lattice(&parse_input(&t.input)?, t.at.as_deref())?;
            Ok(Outcome::ok(if json {
                to_json(json!({ "n": l.n(), "flats": l.flats().len(), "listing": l.listing() }))
            } else {
                l.listing_text()
            }))
        }
        Command::Chi(t) => {
            let chi = resolve_lattice(&parse_input(&t.input)?, t.at.as_deref())?.char_poly();
            Ok(Outcome::ok(if json {
                to_json(json!({ "coeffs": chi.coeffs(), "factored": chi.to_string(), "exponents": chi.exponents() }))
            } else {
                format!("{chi}\n")
            }))
        }
        Command::Aut(t) => {
            let g = aut_group(&resolve_lattice(&parse_input(&t.input)?, t.at.as_deref())?);
            let gens: Vec<Vec<usize>> = g.generators.iter().map(|p| one_based(p)).collect();
            Ok(Outcome::ok(if json {
                to_json(json!({ "order": g.order.to_string(), "orbit_lengths": g.orbit_lengths, "generators": gens }))
            } else {
                format!("order: {}\ngenerators: {}\n", g.order, gens.len())
            }))
        }
        Command::Iso { first, second, at } => {
            let a = resolve_lattice(&parse_input(first)?, at.as_deref())?;
            let b = resolve_lattice(&parse_input(second)?, at.as_deref())?;
            let iso = lattice_iso(&a, &b).map(|p| one_based(&p));
            Ok(Outcome::ok(if json {
                to_json(json!({ "isomorphic": iso.is_some(), "map": iso }))
            } else {
                match iso {
                    Some(p) => format!("isomorphic\nmap: {p:?}\n"),
                    None => "not isomorphic\n".to_string(),
                }
            }))
        }
        Command::VerifyLattice { target, listing } => {
            let l = resolve_lattice(&parse_input(&target.input)?, target.at.as_deref())?;
            let text = read(listing)?;
            let parsed = IntersectionLattice::parse_listing(&text).map_err(|e| invalid(format!("{}: {e}", listing.display())))?;
            let ok = lattice_iso(&parsed, &l).is_some();
            let stdout = if json {
                to_json(json!({ "isomorphic": ok }))
            } else if ok {
                "listing matches the lattice up to isomorphism\n".to_string()
            } else {
                "listing does not match the lattice\n".to_string()
            };
            Ok(Outcome { stdout, code: if ok { 0 } else { 1 } })
        }
        Command::Moduli { input } => {
            let family = parse_input(input)?;
            let report = family.degeneracy_set();
            let chi = family.generic_lattice().char_poly();
            Ok(Outcome::ok(if json {
                to_json(json!({ "family": family.name(), "n": family.len(), "generic_chi": chi.to_string(), "degeneracy": report }))
            } else {
                format!("family: {}\nn: {}\ngeneric chi: {chi}\n{report}", family.name(), family.len())
            }))
        }
        Command::Free(t) => {
            let r = resolve(&parse_input(&t.input)?, t.at.as_deref())?;
            with_arrangement!(r, |a, _note| free_command(&a, json))
        }
        Command::Indfree(t) => {
            let r = resolve(&parse_input(&t.input)?, t.at.as_deref())?;
            with_arrangement!(r, |a, _note| indfree_command(&a, json))
        }
        Command::Abe(t) => {
            let r = resolve(&parse_input(&t.input)?, t.at.as_deref())?;
            with_arrangement!(r, |a, _note| abe_command(&a, json))
        }
        Command::Recfree { search, replay } => {
            let r = resolve(&parse_input(&search.target.input)?, search.target.at.as_deref())?;
            match replay {
                Some(path) => {
                    let text = read(path)?;
                    with_arrangement!(r, |a, _note| replay_command(&a, &text, json))
                }
                None => with_arrangement!(r, |a, _note| recfree_command(&a, search, json)),
            }
        }
        Command::Report(search) => {
            let family = parse_input(&search.target.input)?;
            let report = build_report(&family, search)?;
            let code = report.exit_code();
            Ok(Outcome { stdout: if json { report.to_json() } else { report.to_text() }, code })
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn free_command<F: Scalar>(a: &Arrangement<F>, json: bool) -> Result<Outcome, CliError> {
    let v = decide_freeness(a);
    let mut code = 0;
    let (verdict, reason, certificate, dims) = match &v {
        FreenessVerdict::Free { certificate, .. } => {
            if !certificate.verify(a) {
                return Err(CliError::Internal("Saito certificate failed re-verification".into()));
            }
            ("Free", None, Some(certificate.to_text()), None)
        }
        FreenessVerdict::NotFree(r) => ("NotFree", Some(r.to_string()), None, None),
        FreenessVerdict::Inconclusive { dims } => {
            code = INCONCLUSIVE;
            ("Inconclusive", None, None, Some(dims.clone()))
        }
    };
    let stdout = if json {
        to_json(json!({
            "verdict": verdict,
            "exponents": v.exponents(),
            "reason": reason,
            "certificate": certificate,
            "dims": dims,
        }))
    } else {
        let mut s = format!("{v}\n");
        if let Some(c) = certificate {
            s.push_str(&c);
        }
        if let Some(d) = dims {
            for (p, e, got) in d {
                let _ = writeln!(s, "dim D_{p}: {got} (free would give {e})");
            }
        }
        s
    };
    Ok(Outcome { stdout, code })
}

fn indfree_command<F: Scalar>(a: &Arrangement<F>, json: bool) -> Result<Outcome, CliError> {
    let cert = inductively_free(a);
    let witness = match (&cert, decide_freeness(a)) {
        (None, FreenessVerdict::Free { exponents, .. }) => non_if_witness(&a.lattice(), exponents),
        _ => None,
    };
    let stdout = if json {
        to_json(json!({
            "inductively_free": cert.is_some(),
            "chain": cert.as_ref().map(ToString::to_string),
            "lemma_witness": witness,
        }))
    } else {
        match (&cert, &witness) {
            (Some(c), _) => format!("inductively free\n{c}\n"),
            (None, Some(w)) => {
                let sizes: Vec<String> = w.restriction_sizes.iter().map(ToString::to_string).collect();
                let [_, e2, e3] = w.exponents;
                format!(
                    "not inductively free\nno restriction has size {} or {}; sizes: {}\n",
                    e2 + 1,
                    e3 + 1,
                    sizes.join(" ")
                )
            }
            (None, None) => "not inductively free\n".to_string(),
        }
    };
    Ok(Outcome::ok(stdout))
}

fn abe_command<F: Scalar>(a: &Arrangement<F>, json: bool) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut violated = false;
    for h in 0..a.len() {
        match abe_pair_check(a, h) {
            Ok(c) => {
                violated |= c.outcome == AbeOutcome::Violated;
                rows.push((h + 1, format!("{:?}", c.outcome), c.note));
            }
            Err(e) => rows.push((h + 1, "Skipped".to_string(), e.to_string())),
        }
    }
    let stdout = if json {
        let items: Vec<serde_json::Value> =
            rows.iter().map(|(h, o, n)| json!({ "hyperplane": h, "outcome": o, "note": n })).collect();
        to_json(json!(items))
    } else {
        rows.iter().map(|(h, o, n)| format!("H{h}: {o} ({n})\n")).collect()
    };
    if violated {
        return Err(CliError::Internal(format!("deletion-pair check violated\n{stdout}")));
    }
    Ok(Outcome::ok(stdout))
}

fn recfree_command<F: Scalar>(a: &Arrangement<F>, search: &SearchArgs, json: bool) -> Result<Outcome, CliError> {
    let max_n = search.max_n.unwrap_or(a.len() + 1);
    if max_n < a.len() {
        return Err(invalid(format!("--max-n {max_n} is below the arrangement size {}", a.len())));
    }
    let r = recursively_free(a, max_n, search.max_states);
    let (verdict, chain, cert) = match &r.verdict {
        RfVerdict::Rf { moves, certificate } => ("RF", Some(format_chain(moves)), Some(certificate.to_string())),
        RfVerdict::NotRf => ("NotRF", None, None),
        RfVerdict::Unknown => ("Unknown", None, None),
    };
    let code = if verdict == "Unknown" { INCONCLUSIVE } else { 0 };
    let stdout = if json {
        to_json(json!({
            "verdict": verdict,
            "explored": r.explored,
            "max_n": max_n,
            "sound": r.sound(),
            "bound_hit": r.bound_hit,
            "state_limit_hit": r.state_limit_hit,
            "not_free": r.not_free,
            "expansions": r.expansions,
            "chain": chain,
            "if_certificate": cert,
        }))
    } else {
        let mut s = format!("{verdict}\nexplored states: {}\nmax_n: {max_n}\n", r.explored);
        let _ = writeln!(s, "complete candidate sets: {}", if r.sound() { "yes" } else { "no" });
        if r.bound_hit {
            s.push_str("some admissible addition exceeds max_n\n");
        }
        if r.state_limit_hit {
            s.push_str("state limit reached\n");
        }
        if r.not_free {
            s.push_str("the arrangement is not free\n");
        }
        if let (Some(ch), Some(c)) = (chain, cert) {
            s.push_str("chain:\n");
            s.push_str(&ch);
            let _ = writeln!(s, "then inductively free: {c}");
        }
        s
    };
    Ok(Outcome { stdout, code })
}

fn replay_command<F: Scalar>(a: &Arrangement<F>, text: &str, json: bool) -> Result<Outcome, CliError> {
    let moves = parse_chain::<F>(text).map_err(invalid)?;
    let result = replay_chain(a, &moves);
    let stdout = if json {
        to_json(json!({ "valid": result.is_ok(), "moves": moves.len(), "detail": match &result {
            Ok(c) => c.to_string(),
            Err(e) => e.clone(),
        }}))
    } else {
        match &result {
            Ok(c) => format!("chain of {} moves is valid\nthen inductively free: {c}\n", moves.len()),
            Err(e) => format!("invalid chain: {e}\n"),
        }
    };
    Ok(Outcome { stdout, code: if result.is_ok() { 0 } else { 1 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_parameter_values() {
        assert_eq!(parse_at("-1/2").unwrap(), AtValue::Rational(BigRat::new((-1).into(), 2.into())));
        let AtValue::Quadratic(q) = parse_at("quad 2 3/2 1").unwrap() else { panic!() };
        assert_eq!(q.to_string(), "3/2 + sqrt(2)");
        assert!(matches!(parse_at("quad 2 3/2 0").unwrap(), AtValue::Rational(_)));
        assert!(parse_at("quad 4 1 1").is_err());
        assert!(parse_at("seven").is_err());
    }

    #[test]
    fn non_constant_family_needs_a_value() {
        let f = parse_input("paper13").unwrap();
        assert!(matches!(resolve(&f, None), Err(CliError::Validation(_))));
        assert_eq!(resolve_lattice(&f, None).unwrap().n(), 13);
        let Resolved::Rational(a, note) = resolve(&f, Some("0")).unwrap() else { panic!() };
        assert_eq!(a.len(), 7);
        assert_eq!(note.merged[0], (7, 1));
    }
}
