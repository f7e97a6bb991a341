//! Report records. Each record is a tag followed by `key=value` fields; text
//! output separates them with spaces, TSV output with tabs.

use fopkit_core::harness::{HarnessReport, PullbackReport, SuperfluityReport};
use fopkit_core::uniformity::{Inconclusive, Refutation, UniformityReport, Verdict};

use crate::io::print_structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub tag: &'static str,
    pub fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new(tag: &'static str) -> Self {
        Record {
            tag,
            fields: Vec::new(),
        }
    }

    /// A bare word.
    pub fn word(mut self, value: impl ToString) -> Self {
        self.fields.push(("", value.to_string()));
        self
    }

    pub fn field(mut self, key: &'static str, value: impl ToString) -> Self {
        self.fields.push((key, value.to_string()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let sep = match format {
            Format::Text => " ",
            Format::Tsv => "\t",
        };
        let mut out = self.tag.to_string();
        for (k, v) in &self.fields {
            out.push_str(sep);
            if !k.is_empty() {
                out.push_str(k);
                out.push('=');
            }
            out.push_str(v);
        }
        out
    }
}

pub fn render(records: &[Record], format: Format) -> String {
    records.iter().map(|r| r.render(format) + "\n").collect()
}

fn verdict_records(m: u32, v: &Verdict, out: &mut Vec<Record>) {
    let line = Record::new("VERDICT").field("m", m);
    match v {
        Verdict::Uniform { conjunctions } => out.push(line.word("uniform").field("conjunctions", conjunctions)),
        Verdict::Counterexample(cx) => {
            out.push(line.word("counterexample").field("conjunction", &cx.conjunction));
            out.push(Record::new("WITNESS").field("structure", print_structure(&cx.consistency_witness)));
            match &cx.refutation {
                Refutation::Exhaustive { structures_checked } => out.push(
                    Record::new("REFUTATION")
                        .field("kind", "exhaustive")
                        .field("structures", structures_checked),
                ),
                Refutation::Extremal { structures } => {
                    out.push(
                        Record::new("REFUTATION")
                            .field("kind", "extremal")
                            .field("structures", structures.len()),
                    );
                    for s in structures {
                        out.push(Record::new("EXTREMAL").field("structure", print_structure(s)));
                    }
                }
            }
        }
        Verdict::Inconclusive(c, why) => {
            let line = line.word("inconclusive").field("conjunction", c);
            out.push(match why {
                Inconclusive::Budget { needed, budget } => line
                    .field("reason", "budget")
                    .field("needed", needed)
                    .field("budget", budget),
                Inconclusive::NoBuilder(p) => line.field("reason", "no-builder").field("problem", p),
                Inconclusive::Builder(e) => line.field("reason", "builder").field("error", e),
            });
        }
    }
}

/// The report, one `VERDICT` line per tested size, and the untested sizes
/// as an explicit assumption.
pub fn uniformity_records(r: &UniformityReport, mode: &str, probe: Option<&str>) -> Vec<Record> {
    let mut out = vec![Record::new("UNIFORMITY")
        .field("problem", &r.problem)
        .field("n", r.n)
        .field("k", r.k)
        .field("mode", mode)];
    if let Some(p) = probe {
        out.push(Record::new("PROBE").field("conjunction", p));
    }
    for (m, v) in &r.verdicts {
        verdict_records(*m, v, &mut out);
    }
    let tested: Vec<String> = r.verdicts.iter().map(|(m, _)| m.to_string()).collect();
    out.push(
        Record::new("ASSUMPTION")
            .field("untested", format!("m>={} outside {{{}}}", r.n, tested.join(",")))
            .field("status", "unverified"),
    );
    out
}

pub fn superfluity_records(r: &SuperfluityReport, fop: &str) -> Vec<Record> {
    match &r.counterexample {
        None => vec![Record::new("SUPERFLUOUS")
            .field("fop", fop)
            .field("size-bound", r.size_bound)
            .field("structures", r.structures_checked)],
        Some(cx) => {
            let asg: Vec<String> = cx.assignment.iter().map(|(v, e)| format!("{v}:{e}")).collect();
            vec![
                Record::new("COUNTEREXAMPLE")
                    .field("fop", fop)
                    .field("size-bound", r.size_bound),
                Record::new("STRUCTURE").field("structure", print_structure(&cx.structure)),
                Record::new("IMAGE").field("structure", print_structure(&cx.image)),
                Record::new("ASSIGNMENT").field("values", asg.join(",")),
                Record::new("CLAUSE").field("formula", &cx.clause),
                Record::new("PULLBACK").field("formula", &cx.pulled_back),
            ]
        }
    }
}

pub fn harness_records(name: &str, size_bound: u32, r: &HarnessReport) -> Vec<Record> {
    let mut out = vec![Record::new("HARNESS")
        .field("name", name)
        .field("size-bound", size_bound)
        .field("checked", r.checked)
        .field("excluded", r.excluded)
        .field("disagreements", r.disagreements.len())];
    for a in &r.disagreements {
        out.push(Record::new("DISAGREEMENT").field("structure", print_structure(a)));
    }
    out
}

pub fn pullback_records(fop: &str, size_bound: u32, r: &PullbackReport) -> Vec<Record> {
    match &r.mismatch {
        None => vec![Record::new("PULLBACK")
            .field("fop", fop)
            .field("size-bound", size_bound)
            .field("structures", r.structures)
            .field("checks", r.checks)
            .field("mismatches", 0)],
        Some((_, m)) => {
            let asg: Vec<String> = m.assignment.iter().map(|(v, e)| format!("{v}:{e}")).collect();
            vec![
                Record::new("MISMATCH")
                    .field("fop", fop)
                    .field("literal", &m.literal)
                    .field("assignment", asg.join(","))
                    .field("image-value", m.image_value),
                Record::new("STRUCTURE").field("structure", print_structure(&m.structure)),
                Record::new("PULLBACK").field("formula", &m.pulled_back),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_layout() {
        let r = Record::new("VERDICT").field("m", 3).word("uniform");
        assert_eq!(r.render(Format::Text), "VERDICT m=3 uniform");
        assert_eq!(r.render(Format::Tsv), "VERDICT\tm=3\tuniform");
    }
}
