//! Identity corpus: one JSON record per line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::atoms::eval_closedform;
use crate::ball::BigComplex;
use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::oracle::eval_series;
use crate::parser::{parse_closedform, parse_series};
use crate::series::SeriesSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Source {
    Published,
    Fitted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: String,
    /// Constant multiplying the series on the left, when printed that way.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_factor: Option<String>,
    pub rhs: String,
    pub source: Source,
    pub weight: i32,
    pub verified_digits: u32,
    /// Unix seconds of the last successful verification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified_at: Option<u64>,
}

/// Result of checking one identity numerically.
#[derive(Clone, Debug)]
pub struct Verification {
    pub id: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub lhs: BigComplex,
}

impl IdentityRecord {
    pub fn series(&self) -> Result<SeriesSpec> {
        parse_series(&self.lhs)
    }

    pub fn factor(&self) -> Result<ClosedForm> {
        match &self.lhs_factor {
            Some(f) => parse_closedform(f),
            None => Ok(ClosedForm::one()),
        }
    }

    pub fn closed_form(&self) -> Result<ClosedForm> {
        parse_closedform(&self.rhs)
    }

    /// Both sides reparse; a verification count comes with a timestamp.
    pub fn check(&self) -> Result<()> {
        self.series()?;
        self.factor()?;
        let rhs = self.closed_form()?;
        if rhs.weight() != self.weight {
            return Err(Error::Semantic(format!("{}: stored weight {} but rhs has {}", self.id, self.weight, rhs.weight())));
        }
        if self.verified_digits > 0 && self.verified_at.is_none() {
            return Err(Error::Semantic(format!("{}: verified without timestamp", self.id)));
        }
        Ok(())
    }

    /// |factor * lhs - rhs| at `digits`, passing below 10^-(digits-5).
    pub fn verify(&self, digits: u32) -> Result<Verification> {
        let work = digits + 10;
        let s = eval_series(&self.series()?, work)?;
        let f = eval_closedform(&self.factor()?, work)?;
        let lhs = &f * &s;
        let rhs = eval_closedform(&self.closed_form()?, work)?;
        let residual = (&lhs - &rhs).mag_f64();
        let tolerance = 10f64.powi(-(digits as i32 - 5));
        Ok(Verification { id: self.id.clone(), residual, tolerance, passed: residual < tolerance, lhs })
    }
}

pub fn load(path: &Path) -> Result<Vec<IdentityRecord>> {
    from_jsonl_str(&std::fs::read_to_string(path)?)
}

pub fn from_jsonl_str(text: &str) -> Result<Vec<IdentityRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Semantic(format!("record {}: {e}", i + 1))))
        .collect()
}

pub fn to_jsonl(records: &[IdentityRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn save(path: &Path, records: &[IdentityRecord]) -> Result<()> {
    std::fs::write(path, to_jsonl(records))?;
    Ok(())
}

pub fn find<'a>(records: &'a [IdentityRecord], id: &str) -> Result<&'a IdentityRecord> {
    records.iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownId(id.into()))
}

/// The committed corpus.
pub fn builtin() -> Vec<IdentityRecord> {
    from_jsonl_str(include_str!("../../../data/identities.jsonl")).expect("corpus parses")
}
