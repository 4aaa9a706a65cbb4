use std::fmt::Write as _;

use serde::Serialize;

use freearr::arrangement::{aut_group, Arrangement};
use freearr::freeness::{decide_freeness, FreenessVerdict};
use freearr::induction::{inductively_free, non_if_witness, recursively_free, restriction_histogram, RfVerdict};
use freearr::moduli::{DegeneracyReport, Family};
use freearr::scalars::Scalar;

use crate::{resolve, CliError, Resolved, SearchArgs, SpecNote, INCONCLUSIVE};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecursiveSummary {
    pub verdict: String,
    pub explored: usize,
    pub max_n: usize,
    /// Every expansion satisfied the completeness inequality.
    pub sound: bool,
    pub bound_hit: bool,
    pub state_limit_hit: bool,
    pub chain_length: Option<usize>,
}

/// Everything the tool knows about one arrangement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub input: String,
    pub at: Option<String>,
    pub n: usize,
    pub specialization: SpecNote,
    pub flats: usize,
    pub max_multiplicity: usize,
    /// `(|A^H|, number of hyperplanes)`.
    pub restriction_sizes: Vec<(usize, usize)>,
    pub chi: String,
    pub chi_coeffs: [i64; 4],
    pub freeness: String,
    pub exponents: Option<[u64; 3]>,
    pub certificate_verified: Option<bool>,
    pub not_free_reason: Option<String>,
    pub inductively_free: bool,
    pub if_lemma_applies: bool,
    pub recursive: RecursiveSummary,
    pub aut_order: u128,
    pub degeneracy: Option<DegeneracyReport>,
    /// Cross-checks between the verdicts all hold.
    pub consistent: bool,
}

pub fn build_report(family: &Family, search: &SearchArgs) -> Result<Report, CliError> {
    let at = search.target.at.as_deref();
    let degeneracy = (!family.is_constant()).then(|| family.degeneracy_set());
    let partial = match resolve(family, at)? {
        Resolved::Rational(a, note) => analyze(&a, note, search),
        Resolved::Quadratic(a, note) => analyze(&a, note, search),
    }?;
    Ok(Report {
        input: family.name().to_string(),
        at: at.map(|s| s.trim().to_string()),
        degeneracy,
        ..partial
    })
}

fn analyze<F: Scalar>(a: &Arrangement<F>, specialization: SpecNote, search: &SearchArgs) -> Result<Report, CliError> {
    let l = a.lattice();
    let chi = l.char_poly();
    let verdict = decide_freeness(a);
    let (certificate_verified, not_free_reason) = match &verdict {
        FreenessVerdict::Free { certificate, .. } => (Some(certificate.verify(a)), None),
        FreenessVerdict::NotFree(r) => (None, Some(r.to_string())),
        FreenessVerdict::Inconclusive { .. } => (None, None),
    };
    let if_cert = inductively_free(a);
    let if_lemma_applies = verdict.exponents().is_some_and(|e| non_if_witness(&l, e).is_some());

    let max_n = search.max_n.unwrap_or(a.len() + 1);
    if max_n < a.len() {
        return Err(CliError::Validation(format!("--max-n {max_n} is below the arrangement size {}", a.len())));
    }
    let rf = recursively_free(a, max_n, search.max_states);
    let (rf_name, chain_length) = match &rf.verdict {
        RfVerdict::Rf { moves, .. } => ("RF", Some(moves.len())),
        RfVerdict::NotRf => ("NotRF", None),
        RfVerdict::Unknown => ("Unknown", None),
    };

    let consistent = certificate_verified != Some(false)
        && (!verdict.is_free() || verdict.exponents() == chi.exponents())
        && (if_cert.is_none() || verdict.is_free())
        && !(if_lemma_applies && if_cert.is_some())
        && (if_cert.is_none() || rf_name == "RF")
        && (rf_name != "NotRF" || rf.sound());

    Ok(Report {
        input: String::new(),
        at: None,
        n: a.len(),
        specialization,
        flats: l.flats().len(),
        max_multiplicity: l.max_multiplicity(),
        restriction_sizes: restriction_histogram(&l),
        chi: chi.to_string(),
        chi_coeffs: chi.coeffs(),
        freeness: verdict.to_string(),
        exponents: verdict.exponents(),
        certificate_verified,
        not_free_reason,
        inductively_free: if_cert.is_some(),
        if_lemma_applies,
        recursive: RecursiveSummary {
            verdict: rf_name.to_string(),
            explored: rf.explored,
            max_n,
            sound: rf.sound(),
            bound_hit: rf.bound_hit,
            state_limit_hit: rf.state_limit_hit,
            chain_length,
        },
        aut_order: aut_group(&l).order,
        degeneracy: None,
        consistent,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if !self.consistent {
            3
        } else if self.freeness == "Inconclusive" || self.recursive.verdict == "Unknown" {
            INCONCLUSIVE
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input: {}", self.input);
        if let Some(at) = &self.at {
            let _ = writeln!(s, "at: {at}");
        }
        let _ = writeln!(s, "n: {}", self.n);
        if !self.specialization.dropped.is_empty() {
            let _ = writeln!(s, "dropped: {:?}", self.specialization.dropped);
        }
        if !self.specialization.merged.is_empty() {
            let _ = writeln!(s, "merged: {:?}", self.specialization.merged);
        }
        let _ = writeln!(s, "multiple points: {} (max multiplicity {})", self.flats, self.max_multiplicity);
        let sizes: Vec<String> = self.restriction_sizes.iter().map(|(k, c)| format!("{k}x{c}")).collect();
        let _ = writeln!(s, "restriction sizes: {}", sizes.join(" "));
        let _ = writeln!(s, "chi: {}", self.chi);
        let _ = write!(s, "freeness: {}", self.freeness);
        match (self.certificate_verified, &self.not_free_reason) {
            (Some(v), _) => {
                let _ = writeln!(s, ", certificate verified: {}", yes_no(v));
            }
            (None, Some(r)) => {
                let _ = writeln!(s, " ({r})");
            }
            (None, None) => s.push('\n'),
        }
        let _ = write!(s, "inductively free: {}", yes_no(self.inductively_free));
        if self.if_lemma_applies {
            s.push_str(" (no restriction has the size of an exponent plus one)");
        }
        s.push('\n');
        let r = &self.recursive;
        let _ = write!(s, "recursively free: {} ({} states, max_n {}", r.verdict, r.explored, r.max_n);
        if let Some(len) = r.chain_length {
            let _ = write!(s, ", chain of {len} moves");
        }
        let _ = writeln!(s, ", complete candidate sets: {})", yes_no(r.sound));
        let _ = writeln!(s, "automorphisms: {}", self.aut_order);
        if let Some(d) = &self.degeneracy {
            s.push_str("exceptional parameters:\n");
            for line in d.to_string().lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
        let _ = writeln!(s, "consistent: {}", yes_no(self.consistent));
        s
    }
}
