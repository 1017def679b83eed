//! The corpus verification runner and its report formats: JSON-lines with a
//! trailing summary, or a flat TSV table.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::group::Group;
use crate::lab::{Lab, TheoremSet, VerificationRecord};

/// Trailing summary of a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub groups: usize,
    pub pairs: usize,
    pub records: usize,
    #[serde(rename = "max-dl")]
    pub max_dl: usize,
    #[serde(rename = "max-eta")]
    pub max_eta: usize,
    #[serde(rename = "empirical-C")]
    pub empirical_c: f64,
}

/// Everything a `verify` run produces.
#[derive(Debug)]
pub struct VerifyReport {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
    /// First record (in report order) with a failed predicate, if any.
    pub counterexample: Option<VerificationRecord>,
}

/// Runs the selected checks over all (χ, ψ) pairs of every group. Groups are
/// processed in parallel; the report order is the corpus order, so the
/// output is deterministic.
pub fn run_verify(groups: &[Arc<Group>], theorems: TheoremSet) -> Result<VerifyReport> {
    let per_group: Result<Vec<(usize, Vec<VerificationRecord>)>> = groups
        .par_iter()
        .map(|group| {
            let lab = Lab::new(group.clone())?;
            let k = lab.table().len();
            let mut records = Vec::new();
            for chi in 0..k {
                for psi in 0..k {
                    records.extend(lab.check_all(chi, psi, theorems)?);
                }
            }
            Ok((k * k, records))
        })
        .collect();
    let per_group = per_group?;

    let pairs: usize = per_group.iter().map(|(p, _)| p).sum();
    let records: Vec<VerificationRecord> =
        per_group.into_iter().flat_map(|(_, r)| r).collect();
    let max_dl = records.iter().map(|r| r.dl).max().unwrap_or(0);
    let max_eta = records.iter().map(|r| r.eta).max().unwrap_or(0);
    let empirical_c = records
        .iter()
        .map(|r| (r.dl as f64 - 1.0) / r.eta as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let empirical_c = if records.is_empty() { 0.0 } else { empirical_c };
    let counterexample = records
        .iter()
        .find(|r| !r.predicates.all_hold())
        .cloned();

    Ok(VerifyReport {
        summary: Summary {
            groups: groups.len(),
            pairs,
            records: records.len(),
            max_dl,
            max_eta,
            empirical_c,
        },
        records,
        counterexample,
    })
}

/// JSON-lines rendering: one record per line, then the summary object.
pub fn render_jsonl(report: &VerifyReport) -> String {
    let mut out = String::new();
    for record in &report.records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&report.summary).expect("summary serializes"));
    out.push('\n');
    out
}

/// Flat TSV rendering of the records.
pub fn render_tsv(report: &VerifyReport) -> String {
    let mut out = String::from(
        "group\tchi\tpsi\talpha\teta\tdl\tcoprime_degrees\thas_linear_constituent\tsupersolvable\
         \ttheorem_b\ttheorem_b_commutator\tsupersolvable_bound\tchain_bounds\tcentralizer_sections\
         \ts_delta_nonempty\tsection4\n",
    );
    fn opt(v: Option<bool>) -> &'static str {
        match v {
            None => "-",
            Some(true) => "true",
            Some(false) => "false",
        }
    }
    for r in &report.records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.group,
            r.chi,
            r.psi,
            r.alpha,
            r.eta,
            r.dl,
            r.coprime_degrees,
            r.has_linear_constituent,
            r.supersolvable,
            opt(r.predicates.theorem_b),
            opt(r.predicates.theorem_b_commutator),
            opt(r.predicates.supersolvable_bound),
            opt(r.predicates.chain_bounds),
            opt(r.predicates.centralizer_sections),
            opt(r.predicates.s_delta_nonempty),
            opt(r.predicates.section4),
        ));
    }
    out
}
