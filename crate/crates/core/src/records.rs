//! Line-record formats for scan and oracle output.
//!
//! Scan records are one JSON object per line
//! `{"u","z","a_sq","b_sq","verdict","witnesses":{"a","b"},"residual"}` or
//! CSV with a header row. Rationals are always written as reduced `p/q`
//! strings. Files end with a `#SUMMARY {...}` line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::model::{CuboidClass, TripleClassification};
use crate::param::ParamUZ;
use crate::search::oracle::OracleRecord;
use crate::search::scan::{SearchRecord, Verdict};

pub const SUMMARY_PREFIX: &str = "#SUMMARY ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Jsonl => "jsonl",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Witnesses {
    a: Option<String>,
    b: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ScanLine {
    u: String,
    z: String,
    a_sq: String,
    b_sq: String,
    verdict: Verdict,
    witnesses: Witnesses,
    residual: String,
}

pub const SCAN_CSV_HEADER: &str = "u,z,a_sq,b_sq,verdict,witness_a,witness_b,residual";

fn opt_str(r: &Option<Rational>) -> Option<String> {
    r.as_ref().map(fmt_rational)
}

fn parse_opt(s: &Option<String>) -> Result<Option<Rational>> {
    s.as_deref().map(parse_rational).transpose()
}

pub fn format_scan_record(r: &SearchRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Jsonl => {
            let line = ScanLine {
                u: fmt_rational(&r.u),
                z: fmt_rational(&r.z),
                a_sq: fmt_rational(&r.a_sq),
                b_sq: fmt_rational(&r.b_sq),
                verdict: r.verdict,
                witnesses: Witnesses { a: opt_str(&r.witness_a), b: opt_str(&r.witness_b) },
                residual: fmt_rational(&r.residual),
            };
            serde_json::to_string(&line).expect("record serializes")
        }
        OutputFormat::Csv => [
            fmt_rational(&r.u),
            fmt_rational(&r.z),
            fmt_rational(&r.a_sq),
            fmt_rational(&r.b_sq),
            r.verdict.name().to_string(),
            opt_str(&r.witness_a).unwrap_or_default(),
            opt_str(&r.witness_b).unwrap_or_default(),
            fmt_rational(&r.residual),
        ]
        .join(","),
    }
}

pub fn parse_scan_record(line: &str, format: OutputFormat) -> Result<SearchRecord> {
    let (u, z, a_sq, b_sq, verdict, wa, wb, residual) = match format {
        OutputFormat::Jsonl => {
            let l: ScanLine = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
            (l.u, l.z, l.a_sq, l.b_sq, l.verdict, l.witnesses.a, l.witnesses.b, l.residual)
        }
        OutputFormat::Csv => {
            let f: Vec<&str> = line.split(',').collect();
            let [u, z, a, b, v, wa, wb, res] = f[..] else {
                return Err(Error::Parse(format!("expected 8 CSV fields in {line:?}")));
            };
            let verdict = Verdict::from_name(v).ok_or_else(|| Error::Parse(format!("unknown verdict {v:?}")))?;
            let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
            (u.into(), z.into(), a.into(), b.into(), verdict, opt(wa), opt(wb), res.into())
        }
    };
    Ok(SearchRecord {
        u: parse_rational(&u)?,
        z: parse_rational(&z)?,
        a_sq: parse_rational(&a_sq)?,
        b_sq: parse_rational(&b_sq)?,
        verdict,
        witness_a: parse_opt(&wa)?,
        witness_b: parse_opt(&wb)?,
        residual: parse_rational(&residual)?,
    })
}

/// Verdict tallies written in the summary line.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub records: u64,
    #[serde(rename = "BOTH_SQUARE")]
    pub both_square: u64,
    #[serde(rename = "A_ONLY")]
    pub a_only: u64,
    #[serde(rename = "B_ONLY")]
    pub b_only: u64,
    #[serde(rename = "NONE")]
    pub none: u64,
}

impl VerdictCounts {
    pub fn add(&mut self, v: Verdict) {
        self.records += 1;
        match v {
            Verdict::BothSquare => self.both_square += 1,
            Verdict::AOnly => self.a_only += 1,
            Verdict::BOnly => self.b_only += 1,
            Verdict::None => self.none += 1,
        }
    }
}

pub fn format_summary<T: Serialize>(counts: &T) -> String {
    format!("{SUMMARY_PREFIX}{}", serde_json::to_string(counts).expect("summary serializes"))
}

pub fn parse_summary<T: for<'de> Deserialize<'de>>(line: &str) -> Result<T> {
    let body = line
        .strip_prefix(SUMMARY_PREFIX)
        .ok_or_else(|| Error::Parse("missing #SUMMARY prefix".into()))?;
    serde_json::from_str(body).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LiftLine {
    u: String,
    z: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct OracleLine {
    a: u64,
    b: u64,
    c: u64,
    class: CuboidClass,
    gamma: Option<u64>,
    alpha: Option<u64>,
    beta: Option<u64>,
    d: Option<u64>,
    lift: Option<LiftLine>,
}

pub const ORACLE_CSV_HEADER: &str = "a,b,c,class,gamma,alpha,beta,d,u,z";

pub fn format_oracle_record(r: &OracleRecord, format: OutputFormat) -> String {
    let t = &r.triple;
    let [a, b, c] = t.edges;
    match format {
        OutputFormat::Jsonl => {
            let line = OracleLine {
                a,
                b,
                c,
                class: r.class,
                gamma: t.gamma,
                alpha: t.alpha,
                beta: t.beta,
                d: t.d,
                lift: r.lift.as_ref().map(|p| LiftLine { u: fmt_rational(p.u()), z: fmt_rational(p.z()) }),
            };
            serde_json::to_string(&line).expect("record serializes")
        }
        OutputFormat::Csv => {
            let o = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            let (u, z) = match &r.lift {
                Some(p) => (fmt_rational(p.u()), fmt_rational(p.z())),
                None => (String::new(), String::new()),
            };
            [a.to_string(), b.to_string(), c.to_string(), r.class.name().into(), o(t.gamma), o(t.alpha), o(t.beta), o(t.d), u, z]
                .join(",")
        }
    }
}

pub fn parse_oracle_record(line: &str, format: OutputFormat) -> Result<OracleRecord> {
    let l: OracleLine = match format {
        OutputFormat::Jsonl => serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?,
        OutputFormat::Csv => {
            let f: Vec<&str> = line.split(',').collect();
            let [a, b, c, class, g, al, be, d, u, z] = f[..] else {
                return Err(Error::Parse(format!("expected 10 CSV fields in {line:?}")));
            };
            let int = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { int(s).map(Some) };
            let class = serde_json::from_value(serde_json::Value::String(class.into()))
                .map_err(|e| Error::Parse(e.to_string()))?;
            OracleLine {
                a: int(a)?,
                b: int(b)?,
                c: int(c)?,
                class,
                gamma: opt(g)?,
                alpha: opt(al)?,
                beta: opt(be)?,
                d: opt(d)?,
                lift: (!u.is_empty()).then(|| LiftLine { u: u.into(), z: z.into() }),
            }
        }
    };
    let lift = l
        .lift
        .map(|p| ParamUZ::new(parse_rational(&p.u)?, parse_rational(&p.z)?))
        .transpose()?;
    Ok(OracleRecord {
        triple: TripleClassification { edges: [l.a, l.b, l.c], gamma: l.gamma, alpha: l.alpha, beta: l.beta, d: l.d },
        class: l.class,
        lift,
    })
}

/// Class tallies for an oracle run, keyed by class name.
pub fn class_counts(records: &[OracleRecord]) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    m.insert("records".to_string(), records.len() as u64);
    for class in [CuboidClass::EulerBrick, CuboidClass::FaceCuboid, CuboidClass::Perfect] {
        m.insert(class.name().to_string(), records.iter().filter(|r| r.class == class).count() as u64);
    }
    m
}
