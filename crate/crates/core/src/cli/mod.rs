//! Batch front end: runs checks over a configured battery of systems and
//! emits witness-bearing reports.
//!
//! Machine output is one JSON object per line, tagged by `record`:
//! a header, one `check` line per check and a closing summary. It is
//! byte-identical across runs of the same battery (timings appear only in
//! the human table).

pub mod config;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{Battery, BatteryConfig, CheckId, Overrides, SystemSpec};

use crate::properties::certificate::validate_verdict;
use crate::properties::{self, classify, Budget, Property, System, Verdict};
use crate::theorems::{
    check_corollary, check_lemma_exact, check_lemma_wm, check_theorem_main, validate_evaluation, validate_report,
    Agreement, EquivalenceReport, Evaluation,
};
use crate::Rational;

pub const EXIT_CONSISTENT: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// Status of a record whose certificate failed re-validation.
pub const INVALID_CERTIFICATE: &str = "invalid-certificate";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("record error: {0}")]
    Record(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// What a battery run produces per system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// The selected checks.
    Checks,
    /// Only the proved objects of the equivalence checks.
    Witnesses,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub system: String,
    pub check: String,
    pub status: String,
    pub method: String,
    pub payload: serde_json::Value,
    #[serde(skip)]
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Record {
    /// A disagreement or a certificate that failed re-validation.
    pub fn is_inconsistent(&self) -> bool {
        self.status == "disagree" || self.status == INVALID_CERTIFICATE
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub seed: u64,
    pub systems: Vec<String>,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    /// Record count per status, in status order.
    pub statuses: BTreeMap<String, usize>,
    pub consistency: String,
}

/// One line of machine output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Line {
    Header(Header),
    Check(Record),
    Summary(Summary),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Header,
    /// Records in config order, then check order.
    pub records: Vec<Record>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut statuses = BTreeMap::new();
        for r in &self.records {
            *statuses.entry(r.status.clone()).or_insert(0) += 1;
        }
        let consistency = if self.is_consistent() { "CONSISTENT" } else { "INCONSISTENT" };
        Summary { records: self.records.len(), statuses, consistency: consistency.into() }
    }

    pub fn is_consistent(&self) -> bool {
        !self.records.iter().any(Record::is_inconsistent)
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_consistent() {
            EXIT_CONSISTENT
        } else {
            EXIT_INCONSISTENT
        }
    }
}

fn to_json<S: Serialize>(value: &S) -> serde_json::Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn verdict_record(system: &str, check: String, sys: &System<Rational>, p: Property, v: &Verdict<Rational>) -> Record {
    let (status, detail) = match validate_verdict(v, p, sys.as_ref()) {
        Ok(()) => (
            v.status().to_string(),
            v.certificate().map(|c| c.kind().to_string()).or(v.note().map(str::to_string)).unwrap_or_default(),
        ),
        Err(e) => (INVALID_CERTIFICATE.to_string(), e.0),
    };
    Record {
        system: system.into(),
        check,
        status,
        method: v.method.to_string(),
        payload: to_json(v),
        detail,
        elapsed: Duration::ZERO,
    }
}

fn equivalence_record(
    system: &str,
    check: CheckId,
    sys: &System<Rational>,
    budget: &Budget,
    report: &EquivalenceReport<Rational>,
) -> Record {
    let statuses: Vec<String> = report.conditions.iter().map(|c| format!("{}={}", c.name, c.status())).collect();
    let mut detail = statuses.join(" ");
    if !report.hypothesis.infinite_space {
        detail.push_str(" [finite space]");
    }
    let status = match validate_report(report, sys, budget) {
        Ok(_) => match report.agreement {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
            Agreement::Inconclusive => "inconclusive",
        }
        .to_string(),
        Err(e) => {
            detail = e.0;
            INVALID_CERTIFICATE.to_string()
        }
    };
    let mut methods: Vec<String> = Vec::new();
    for c in &report.conditions {
        for m in c.methods() {
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
    }
    Record {
        system: system.into(),
        check: check.id(),
        status,
        method: methods.join(","),
        payload: to_json(report),
        detail,
        elapsed: Duration::ZERO,
    }
}

fn run_equivalence(check: CheckId, sys: &System<Rational>, budget: &Budget) -> EquivalenceReport<Rational> {
    match check {
        CheckId::TheoremMain => check_theorem_main(sys, budget),
        CheckId::LemmaWm => check_lemma_wm(sys, budget),
        CheckId::LemmaExact => check_lemma_exact(sys, budget),
        CheckId::Corollary => check_corollary(sys, budget),
        other => unreachable!("{other:?} is not an equivalence check"),
    }
}

fn check_records(id: &str, sys: &System<Rational>, battery: &Battery) -> Vec<Record> {
    let budget = &battery.budget;
    let mut out = Vec::new();
    for &check in &battery.checks {
        let start = Instant::now();
        let mut records = match check {
            CheckId::Classify => classify(sys, budget)
                .verdicts
                .iter()
                .map(|(p, v)| verdict_record(id, format!("classify:{}", p.id()), sys, *p, v))
                .collect(),
            CheckId::Property(p) => vec![verdict_record(id, p.id().into(), sys, p, &properties::check(sys, p, budget))],
            eq => vec![equivalence_record(id, eq, sys, budget, &run_equivalence(eq, sys, budget))],
        };
        let elapsed = start.elapsed();
        let share = elapsed / records.len().max(1) as u32;
        for r in &mut records {
            r.elapsed = share;
        }
        out.extend(records);
    }
    out
}

/// Proved objects from every equivalence check, each listed once.
fn witness_records(id: &str, sys: &System<Rational>, battery: &Battery) -> Vec<Record> {
    let budget = &battery.budget;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for check in [CheckId::TheoremMain, CheckId::LemmaWm, CheckId::LemmaExact, CheckId::Corollary] {
        let start = Instant::now();
        let report = run_equivalence(check, sys, budget);
        let evaluations = report
            .conditions
            .iter()
            .flat_map(|c| std::iter::once(&c.primary).chain(&c.cross_checks))
            .chain(&report.witnesses);
        for e in evaluations.filter(|e| e.verdict.is_proved()) {
            let key = witness_id(e);
            if !seen.insert(key.clone()) {
                continue;
            }
            let (status, detail) = match validate_evaluation(e, sys, budget) {
                Ok(_) => (e.verdict.status().to_string(), e.verdict.certificate().map(|c| c.kind().to_string()).unwrap_or_default()),
                Err(err) => (INVALID_CERTIFICATE.to_string(), err.0),
            };
            out.push(Record {
                system: id.into(),
                check: key,
                status,
                method: e.verdict.method.to_string(),
                payload: to_json(e),
                detail,
                elapsed: start.elapsed(),
            });
        }
    }
    out
}

fn witness_id(e: &Evaluation<Rational>) -> String {
    let target = match e.target {
        crate::theorems::Target::Base => "base",
        crate::theorems::Target::Hyperspace => "hyperspace",
    };
    format!("witness:{target}:{}:{}", e.property.id(), e.route)
}

/// Runs the battery; systems run concurrently and records keep config order.
pub fn run_battery(battery: &Battery, mode: Mode) -> Report {
    let header = Header {
        seed: battery.seed,
        systems: battery.systems.iter().map(|(id, _)| id.clone()).collect(),
        checks: match mode {
            Mode::Checks => battery.checks.iter().map(|c| c.id()).collect(),
            Mode::Witnesses => vec!["witness".into()],
        },
    };
    let per_system: Vec<Vec<Record>> = std::thread::scope(|scope| {
        let handles: Vec<_> = battery
            .systems
            .iter()
            .map(|(id, sys)| {
                scope.spawn(move || match mode {
                    Mode::Checks => check_records(id, sys, battery),
                    Mode::Witnesses => witness_records(id, sys, battery),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("system worker panicked")).collect()
    });
    Report { header, records: per_system.into_iter().flatten().collect() }
}

/// Serializes a report. An empty check selection gives the header alone.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => emit_machine(report),
        Format::Human => emit_human(report),
    }
}

fn emit_machine(report: &Report) -> String {
    let mut out = String::new();
    let mut line = |l: &Line| {
        out.push_str(&serde_json::to_string(l).expect("lines serialize"));
        out.push('\n');
    };
    line(&Line::Header(report.header.clone()));
    if report.header.checks.is_empty() {
        return out;
    }
    for r in &report.records {
        line(&Line::Check(r.clone()));
    }
    line(&Line::Summary(report.summary()));
    out
}

fn emit_human(report: &Report) -> String {
    let mut out = String::new();
    let h = &report.header;
    let _ = writeln!(out, "battery: seed {} | systems {} | checks {}", h.seed, h.systems.join(", "), h.checks.join(", "));
    if h.checks.is_empty() {
        return out;
    }
    let heads = ["SYSTEM", "CHECK", "STATUS", "METHOD", "TIME", "DETAIL"];
    let rows: Vec<[String; 6]> = report
        .records
        .iter()
        .map(|r| {
            [
                r.system.clone(),
                r.check.clone(),
                r.status.clone(),
                r.method.clone(),
                format!("{:.1}ms", r.elapsed.as_secs_f64() * 1e3),
                r.detail.clone(),
            ]
        })
        .collect();
    let mut widths = heads.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut put = |cells: [&str; 6]| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    put(heads);
    for row in &rows {
        put([&row[0], &row[1], &row[2], &row[3], &row[4], &row[5]]);
    }
    let s = report.summary();
    let counts: Vec<String> = s.statuses.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(out, "summary: {} records | {}", s.records, counts.join(" "));
    let _ = writeln!(out, "{}", s.consistency);
    out
}

/// Writes the report to the battery's output path or returns it for stdout.
pub fn write_report(report: &Report, format: Format, battery: &Battery) -> Result<Option<String>, CliError> {
    let text = emit_report(report, format);
    match &battery.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Parses one machine line and re-validates its payload against the
/// battery's system; returns the number of decided verdicts checked.
pub fn revalidate_line(line: &str, battery: &Battery) -> Result<usize, CliError> {
    let parsed: Line = serde_json::from_str(line).map_err(|e| CliError::Record(e.to_string()))?;
    let Line::Check(record) = parsed else { return Ok(0) };
    let sys = &battery
        .systems
        .iter()
        .find(|(id, _)| *id == record.system)
        .ok_or_else(|| CliError::Record(format!("unknown system {:?}", record.system)))?
        .1;
    let budget = &battery.budget;
    let bad = |e: crate::properties::certificate::CertificateError| CliError::Record(e.0);
    let parse_err = |e: serde_json::Error| CliError::Record(e.to_string());
    let check = record.check.as_str();
    if check.starts_with("witness:") {
        let e: Evaluation<Rational> = serde_json::from_value(record.payload).map_err(parse_err)?;
        return validate_evaluation(&e, sys, budget).map_err(bad);
    }
    let property_id = check.strip_prefix("classify:").unwrap_or(check);
    match property_id.parse::<CheckId>()? {
        CheckId::Property(p) => {
            let v: Verdict<Rational> = serde_json::from_value(record.payload).map_err(parse_err)?;
            validate_verdict(&v, p, sys.as_ref()).map_err(bad)?;
            Ok(usize::from(v.status().is_decided()))
        }
        CheckId::Classify => Err(CliError::Record("classify is not a record check".into())),
        _ => {
            let r: EquivalenceReport<Rational> = serde_json::from_value(record.payload).map_err(parse_err)?;
            validate_report(&r, sys, budget).map_err(bad)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn battery(body: &str) -> Battery {
        BatteryConfig::parse(body).unwrap().validate(&Overrides::default()).unwrap()
    }

    #[test]
    fn golden_mean_defaults() {
        let b = battery("[[system]]\nid = \"golden\"\nkind = \"shift\"\nmatrix = [\"11\", \"10\"]");
        let report = run_battery(&b, Mode::Checks);
        let status = |check: &str| report.records.iter().find(|r| r.check == check).unwrap().status.clone();
        assert_eq!(status("classify:hy-system"), "proved");
        for c in ["theorem-main", "lemma-wm", "lemma-exact", "corollary"] {
            assert_eq!(status(c), "agree", "{c}");
        }
        assert_eq!(report.exit_code(), EXIT_CONSISTENT);
        let text = emit_report(&report, Format::Machine);
        for line in text.lines() {
            revalidate_line(line, &b).unwrap();
        }
        assert!(text.lines().last().unwrap().contains("\"CONSISTENT\""));
    }

    #[test]
    fn four_cycle() {
        let b = battery("[[system]]\nid = \"c4\"\nkind = \"finite\"\nmap = [1, 2, 3, 0]");
        let report = run_battery(&b, Mode::Checks);
        let get = |check: &str| report.records.iter().find(|r| r.check == check).unwrap();
        assert_eq!(get("classify:devaney").status, "proved");
        assert_eq!(get("classify:hy-system").status, "refuted");
        let main: EquivalenceReport<Rational> = serde_json::from_value(get("theorem-main").payload.clone()).unwrap();
        assert!(main.all(properties::Status::Refuted));
        assert_eq!(get("theorem-main").status, "agree");
    }

    #[test]
    fn empty_selection_is_header_only() {
        let b = battery("checks = []\n[[system]]\nid = \"one\"\nkind = \"finite\"\nmap = [0]");
        let report = run_battery(&b, Mode::Checks);
        let text = emit_report(&report, Format::Machine);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("{\"record\":\"header\""));
        assert_eq!(emit_report(&report, Format::Human).lines().count(), 1);
    }

    #[test]
    fn disagreement_is_inconsistent() {
        let b = battery("checks = [\"transitive\"]\n[[system]]\nid = \"one\"\nkind = \"finite\"\nmap = [0]");
        let mut report = run_battery(&b, Mode::Checks);
        report.records[0].status = "disagree".into();
        assert_eq!(report.exit_code(), EXIT_INCONSISTENT);
        assert_eq!(emit_report(&report, Format::Human).lines().last(), Some("INCONSISTENT"));
        let machine = emit_report(&report, Format::Machine);
        assert!(machine.lines().last().unwrap().contains("\"INCONSISTENT\""));
    }

    #[test]
    fn one_proved_check_is_one_line() {
        let b = battery("checks = [\"transitive\"]\n[[system]]\nid = \"c\"\nkind = \"finite\"\nmap = [1, 0]");
        let text = emit_report(&run_battery(&b, Mode::Checks), Format::Machine);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let Line::Check(r) = serde_json::from_str(lines[1]).unwrap() else { panic!() };
        assert_eq!((r.status.as_str(), r.payload["witness"]["kind"].as_str()), ("proved", Some("cyclic-order")));
    }

    #[test]
    fn witnesses_revalidate() {
        let b = battery(
            "[[system]]\nid = \"c\"\nkind = \"finite\"\nmap = [1, 0]\n[[system]]\nid = \"g\"\nkind = \"shift\"\nmatrix = [\"11\", \"10\"]",
        );
        let report = run_battery(&b, Mode::Witnesses);
        assert!(report.records.iter().any(|r| r.check.contains("pipeline")));
        for line in emit_report(&report, Format::Machine).lines() {
            revalidate_line(line, &b).unwrap();
        }
    }
}
