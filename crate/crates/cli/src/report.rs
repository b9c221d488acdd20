//! Report model and its JSON Lines, CSV and table encodings.
//!
//! Integers at or above 2^53 are written as decimal strings so that JSON
//! consumers using doubles never lose precision; readers accept both forms.

use std::io::{self, BufRead, Write};

use congruence_lab::registry::{catalogue_index, registry_catalogue, Diagnostics};
use congruence_lab::sweep::{CaseClass, SweepPlan, SweepSummary};
use congruence_lab::{ModulusKind, Status, VerificationRecord};
use serde::{Deserialize, Serialize};

const SAFE: u64 = 1 << 53;

mod safe_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Num(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        if *v < super::SAFE {
            s.serialize_u64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Either::deserialize(d)? {
            Either::Num(n) => Ok(n),
            Either::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

mod safe_opt_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Num(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::safe_u64::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        Ok(match Option::<Either>::deserialize(d)? {
            None => None,
            Some(Either::Num(n)) => Some(n),
            Some(Either::Str(s)) => Some(s.parse().map_err(serde::de::Error::custom)?),
        })
    }
}

mod safe_opt_i64 {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Num(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) if v.unsigned_abs() < super::SAFE => s.serialize_i64(*v),
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<i64>, D::Error> {
        Ok(match Option::<Either>::deserialize(d)? {
            None => None,
            Some(Either::Num(n)) => Some(n),
            Some(Either::Str(s)) => Some(s.parse().map_err(serde::de::Error::custom)?),
        })
    }
}

mod status_tag {
    use congruence_lab::Status;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Status, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v.tag())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Status, D::Error> {
        let tag = String::deserialize(d)?;
        Status::from_tag(&tag).ok_or_else(|| serde::de::Error::custom(format!("unknown status {tag:?}")))
    }
}

/// One verification outcome, flattened for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub case_id: String,
    #[serde(with = "safe_u64")]
    pub p: u64,
    pub a: u32,
    #[serde(with = "safe_u64")]
    pub modulus: u64,
    #[serde(with = "safe_opt_u64")]
    pub lhs: Option<u64>,
    #[serde(with = "safe_opt_u64")]
    pub rhs: Option<u64>,
    #[serde(with = "status_tag")]
    pub status: Status,
    pub conjecture: bool,
    #[serde(with = "safe_opt_i64")]
    pub delta: Option<i64>,
    #[serde(with = "safe_opt_i64")]
    pub d: Option<i64>,
    #[serde(with = "safe_opt_i64")]
    pub x: Option<i64>,
    #[serde(with = "safe_opt_i64")]
    pub y: Option<i64>,
    #[serde(with = "safe_opt_u64")]
    pub rhs_alt: Option<u64>,
    pub agrees_mod_p: Option<bool>,
    pub note: Option<String>,
}

impl From<&VerificationRecord> for RecordRow {
    fn from(r: &VerificationRecord) -> Self {
        let g = &r.diagnostics;
        RecordRow {
            case_id: r.case_id.clone(),
            p: r.p,
            a: r.a,
            modulus: r.modulus,
            lhs: r.lhs,
            rhs: r.rhs,
            status: r.status,
            conjecture: r.conjecture,
            delta: g.delta,
            d: g.d,
            x: g.x,
            y: g.y,
            rhs_alt: g.rhs_alt,
            agrees_mod_p: g.agrees_mod_p,
            note: g.note.clone(),
        }
    }
}

impl From<&RecordRow> for VerificationRecord {
    fn from(r: &RecordRow) -> Self {
        VerificationRecord {
            case_id: r.case_id.clone(),
            p: r.p,
            a: r.a,
            modulus: r.modulus,
            lhs: r.lhs,
            rhs: r.rhs,
            status: r.status,
            conjecture: r.conjecture,
            diagnostics: Diagnostics {
                delta: r.delta,
                d: r.d,
                x: r.x,
                y: r.y,
                rhs_alt: r.rhs_alt,
                agrees_mod_p: r.agrees_mod_p,
                note: r.note.clone(),
            },
        }
    }
}

/// The sweep plan as echoed in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEcho {
    /// `None` means every case of `class`
    pub ids: Option<Vec<String>>,
    pub class: String,
    pub kinds: Option<Vec<String>>,
    #[serde(with = "safe_u64")]
    pub prime_min: u64,
    #[serde(with = "safe_u64")]
    pub prime_max: u64,
    pub exponents: Vec<u32>,
    #[serde(with = "safe_u64")]
    pub pp_cap: u64,
    pub jobs: usize,
    pub mutate: bool,
}

fn class_tag(c: CaseClass) -> &'static str {
    match c {
        CaseClass::Theorems => "theorems",
        CaseClass::Conjectures => "conjectures",
        CaseClass::All => "all",
    }
}

impl From<&SweepPlan> for PlanEcho {
    fn from(p: &SweepPlan) -> Self {
        PlanEcho {
            ids: p.ids.clone(),
            class: class_tag(p.class).into(),
            kinds: p.kinds.as_ref().map(|k| k.iter().map(|k| ModulusKind::tag(*k).to_string()).collect()),
            prime_min: p.prime_min,
            prime_max: p.prime_max,
            exponents: p.exponents.clone(),
            pp_cap: p.pp_cap,
            jobs: p.jobs,
            mutate: p.mutate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub wall_seconds: f64,
}

impl From<&SweepSummary> for SummaryRow {
    fn from(s: &SweepSummary) -> Self {
        SummaryRow {
            total: s.total,
            pass: s.pass,
            fail: s.fail,
            inapplicable: s.inapplicable,
            wall_seconds: s.wall_seconds,
        }
    }
}

/// A registered right-hand side that differs from the published one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub case_id: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub plan: PlanEcho,
    pub records: Vec<RecordRow>,
    pub summary: SummaryRow,
    pub deviations: Vec<Deviation>,
}

impl Report {
    pub fn new(plan: &SweepPlan, records: &[VerificationRecord], summary: &SweepSummary) -> Self {
        let mut ids: Vec<&str> = records.iter().map(|r| r.case_id.as_str()).collect();
        ids.sort_by_key(|id| catalogue_index(id));
        ids.dedup();
        let deviations = ids
            .into_iter()
            .filter_map(|id| {
                let case = registry_catalogue().iter().find(|c| c.id == id)?;
                Some(Deviation {
                    case_id: id.to_string(),
                    note: case.deviation?.to_string(),
                })
            })
            .collect();
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            plan: plan.into(),
            records: records.iter().map(RecordRow::from).collect(),
            summary: summary.into(),
            deviations,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    version: String,
    plan: PlanEcho,
    deviations: Vec<Deviation>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line {
    Header(Header),
    Record(RecordRow),
    Summary(SummaryRow),
}

fn json_err(e: serde_json::Error) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e)
}

/// Header line, one line per record, then the summary line.
pub fn write_jsonl(report: &Report, out: &mut dyn Write) -> io::Result<()> {
    let mut line = |l: &Line| -> io::Result<()> {
        serde_json::to_writer(&mut *out, l).map_err(json_err)?;
        out.write_all(b"\n")
    };
    line(&Line::Header(Header {
        version: report.version.clone(),
        plan: report.plan.clone(),
        deviations: report.deviations.clone(),
    }))?;
    for r in &report.records {
        line(&Line::Record(r.clone()))?;
    }
    line(&Line::Summary(report.summary.clone()))
}

pub fn read_jsonl(input: impl BufRead) -> io::Result<Report> {
    let (mut header, mut summary, mut records) = (None, None, Vec::new());
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line).map_err(json_err)? {
            Line::Header(h) => header = Some(h),
            Line::Record(r) => records.push(r),
            Line::Summary(s) => summary = Some(s),
        }
    }
    let missing = |what| io::Error::new(io::ErrorKind::InvalidData, format!("no {what} line"));
    let header = header.ok_or_else(|| missing("header"))?;
    Ok(Report {
        version: header.version,
        plan: header.plan,
        records,
        summary: summary.ok_or_else(|| missing("summary"))?,
        deviations: header.deviations,
    })
}

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 15] = [
    "case_id", "p", "a", "modulus", "lhs", "rhs", "status", "conjecture", "delta", "d", "x", "y", "rhs_alt",
    "agrees_mod_p", "note",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e)
}

/// Header row plus one row per record; empty cells stand for absent values.
pub fn write_csv(records: &[RecordRow], out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.case_id.clone(),
            r.p.to_string(),
            r.a.to_string(),
            r.modulus.to_string(),
            opt(&r.lhs),
            opt(&r.rhs),
            r.status.tag().to_string(),
            r.conjecture.to_string(),
            opt(&r.delta),
            opt(&r.d),
            opt(&r.x),
            opt(&r.y),
            opt(&r.rhs_alt),
            opt(&r.agrees_mod_p),
            opt(&r.note),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn read_csv(input: impl io::Read) -> io::Result<Vec<RecordRow>> {
    fn bad(msg: String) -> io::Error {
        io::Error::new(io::ErrorKind::InvalidData, msg)
    }
    fn field<T: std::str::FromStr>(s: &str, name: &str) -> io::Result<T> {
        s.parse().map_err(|_| bad(format!("bad {name} {s:?}")))
    }
    fn optional<T: std::str::FromStr>(s: &str, name: &str) -> io::Result<Option<T>> {
        if s.is_empty() {
            Ok(None)
        } else {
            field(s, name).map(Some)
        }
    }
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(bad(format!("unexpected columns {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let c = |i: usize| rec.get(i).unwrap_or("");
        rows.push(RecordRow {
            case_id: c(0).to_string(),
            p: field(c(1), "p")?,
            a: field(c(2), "a")?,
            modulus: field(c(3), "modulus")?,
            lhs: optional(c(4), "lhs")?,
            rhs: optional(c(5), "rhs")?,
            status: Status::from_tag(c(6)).ok_or_else(|| bad(format!("bad status {:?}", c(6))))?,
            conjecture: field(c(7), "conjecture")?,
            delta: optional(c(8), "delta")?,
            d: optional(c(9), "d")?,
            x: optional(c(10), "x")?,
            y: optional(c(11), "y")?,
            rhs_alt: optional(c(12), "rhs_alt")?,
            agrees_mod_p: optional(c(13), "agrees_mod_p")?,
            note: optional(c(14), "note")?,
        });
    }
    Ok(rows)
}

/// Aligned columns for reading at a terminal.
pub fn write_table(report: &Report, out: &mut dyn Write) -> io::Result<()> {
    let dash = |v: &Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let rows: Vec<[String; 8]> = report
        .records
        .iter()
        .map(|r| {
            let mut extra = Vec::new();
            for (name, v) in [("delta", r.delta), ("d", r.d), ("x", r.x), ("y", r.y)] {
                if let Some(v) = v {
                    extra.push(format!("{name}={v}"));
                }
            }
            if let Some(alt) = r.rhs_alt {
                extra.push(format!("rhs'={alt}"));
            }
            if let Some(note) = &r.note {
                extra.push(note.clone());
            }
            [
                r.case_id.clone(),
                r.p.to_string(),
                r.a.to_string(),
                r.modulus.to_string(),
                dash(&r.lhs),
                dash(&r.rhs),
                r.status.tag().to_uppercase(),
                extra.join(" "),
            ]
        })
        .collect();
    let head = ["case", "p", "a", "mod", "lhs", "rhs", "status", "details"];
    let mut width = head.map(str::len);
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s += cell;
            } else {
                s += &format!("{cell:<w$}  ", w = width[i]);
            }
        }
        s.trim_end().to_string()
    };
    writeln!(out, "{}", line(&head.map(String::from)))?;
    for row in &rows {
        writeln!(out, "{}", line(row))?;
    }
    let s = &report.summary;
    writeln!(
        out,
        "{} records: {} pass, {} fail, {} inapplicable ({:.2}s)",
        s.total, s.pass, s.fail, s.inapplicable, s.wall_seconds
    )
}
