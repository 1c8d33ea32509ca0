//! Certified values of the base sums the telescoping reducer ends on.
//!
//! Families, all over a_n = binom(2n,n)/4^n:
//! - `Odd(m)`     sum_{n>=0} a_n^k / (2n+1)^m
//! - `Even(m)`    sum_{n>=1} a_n^k / n^m
//! - `Pair`       sum_{n>=1} a_n^-1 / (n(2n+1))          (k = -1, weight 2)
//! - `TripleA`    sum_{n>=1} a_n^-2 / (n(2n+1)^2)        (k = -2, weight 3)
//! - `TripleB`    sum_{n>=1} a_n^-2 / (n^2(2n+1))        (k = -2, weight 3)
//!
//! Values are the plain sums. For k = 2 they carry a 1/pi.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::closedform::ClosedForm;
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::parser::{parse_closedform, parse_ratfunc};
use crate::series::BinomSpec;

pub const DEFAULT_WEIGHT_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Odd,
    Even,
    Pair,
    TripleA,
    TripleB,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Odd => "odd",
            Family::Even => "even",
            Family::Pair => "pair",
            Family::TripleA => "triple-a",
            Family::TripleB => "triple-b",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s {
            "odd" => Family::Odd,
            "even" => Family::Even,
            "pair" => Family::Pair,
            "triple-a" => Family::TripleA,
            "triple-b" => Family::TripleB,
            _ => return Err(Error::Semantic(format!("unknown base family '{s}'"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseKey {
    pub k: i32,
    pub family: Family,
    pub m: u32,
}

impl BaseKey {
    pub fn new(k: i32, family: Family, m: u32) -> Self {
        BaseKey { k, family, m }
    }

    pub fn pair() -> Self {
        BaseKey::new(-1, Family::Pair, 2)
    }

    pub fn triple_a() -> Self {
        BaseKey::new(-2, Family::TripleA, 3)
    }

    pub fn triple_b() -> Self {
        BaseKey::new(-2, Family::TripleB, 3)
    }

    /// Weight of the constant (of pi * value when k = 2).
    pub fn weight(&self) -> u32 {
        if self.k == 2 {
            self.m + 1
        } else {
            self.m
        }
    }

    /// Smallest level whose constants are expected to span the value.
    pub fn level(&self) -> u8 {
        match (self.k, self.family) {
            (-1, Family::Even) | (-1, Family::Pair) => 2,
            _ => 4,
        }
    }

    /// Odd and even families are weight-homogeneous; the paired units are not.
    pub fn homogeneous(&self) -> bool {
        matches!(self.family, Family::Odd | Family::Even)
    }

    /// The defining series, without any pi factor.
    pub fn series(&self) -> BinomSpec {
        let (r, start) = match self.family {
            Family::Odd => (format!("1/(2n+1)^{}", self.m), 0),
            Family::Even => (format!("1/n^{}", self.m), 1),
            Family::Pair => ("1/(n*(2n+1))".to_string(), 1),
            Family::TripleA => ("1/(n*(2n+1)^2)".to_string(), 1),
            Family::TripleB => ("1/(n^2*(2n+1))".to_string(), 1),
        };
        let mut b = BinomSpec::new(self.k, parse_ratfunc(&r).expect("family summand parses"));
        b.start = start;
        b
    }
}

impl fmt::Display for BaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, {}, m={})", self.k, self.family.name(), self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Transcribed from a published closed form.
    Published,
    /// Found by integer relation at the given digits.
    Fitted(u32),
}

impl Provenance {
    pub fn text(&self) -> String {
        match self {
            Provenance::Published => "PUBLISHED".into(),
            Provenance::Fitted(d) => format!("FITTED({d})"),
        }
    }

    pub fn parse(s: &str) -> Result<Provenance> {
        if s == "PUBLISHED" {
            return Ok(Provenance::Published);
        }
        s.strip_prefix("FITTED(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|d| d.parse().ok())
            .map(Provenance::Fitted)
            .ok_or_else(|| Error::Semantic(format!("bad provenance '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseEntry {
    pub key: BaseKey,
    pub value: ClosedForm,
    pub provenance: Provenance,
}

impl BaseEntry {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.key.k,
            "family": self.key.family.name(),
            "m": self.key.m,
            "value": self.value.to_text(),
            "provenance": self.provenance.text(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BaseEntry> {
        let bad = |f: &str| Error::Semantic(format!("base table record lacks '{f}'"));
        let k = v["k"].as_i64().ok_or_else(|| bad("k"))? as i32;
        let family = Family::parse(v["family"].as_str().ok_or_else(|| bad("family"))?)?;
        let m = v["m"].as_u64().ok_or_else(|| bad("m"))? as u32;
        let value = parse_closedform(v["value"].as_str().ok_or_else(|| bad("value"))?)?;
        let provenance = Provenance::parse(v["provenance"].as_str().ok_or_else(|| bad("provenance"))?)?;
        Ok(BaseEntry { key: BaseKey { k, family, m }, value, provenance })
    }
}

#[derive(Clone, Debug)]
pub struct BaseTable {
    entries: BTreeMap<BaseKey, BaseEntry>,
    pub weight_cap: u32,
}

impl Default for BaseTable {
    fn default() -> Self {
        BaseTable { entries: BTreeMap::new(), weight_cap: DEFAULT_WEIGHT_CAP }
    }
}

const BUILTIN: &str = include_str!("../../../data/base_table.jsonl");

impl BaseTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Published entries plus the shipped fitted table.
    pub fn builtin() -> Self {
        let mut t = Self::from_jsonl_str(BUILTIN).expect("shipped base table parses");
        for e in published_entries() {
            t.insert(e);
        }
        t
    }

    pub fn insert(&mut self, e: BaseEntry) {
        self.entries.insert(e.key, e);
    }

    pub fn get(&self, key: &BaseKey) -> Option<&BaseEntry> {
        self.entries.get(key)
    }

    /// Value for `key`, or a miss naming the key.
    pub fn value(&self, key: &BaseKey) -> Result<&ClosedForm> {
        match self.entries.get(key) {
            Some(e) => Ok(&e.value),
            None if key.weight() > self.weight_cap => Err(Error::TableMiss(format!(
                "{key} exceeds the weight cap {}",
                self.weight_cap
            ))),
            None => Err(Error::TableMiss(format!("{key} is not in the base table"))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &BaseEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_jsonl_str(s: &str) -> Result<Self> {
        let mut t = BaseTable::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| Error::Semantic(format!("base table line: {e}")))?;
            t.insert(BaseEntry::from_json(&v)?);
        }
        Ok(t)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in self.entries.values() {
            out.push_str(&e.to_json().to_string());
            out.push('\n');
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_jsonl_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_jsonl())?;
        Ok(())
    }
}

const ODD_M1_5: &str = "2*imqmz(4,4,1;1,0) - 2*imqmz(4,4,1;1,2) + 16*imli(5) - 35/1536*pi^5 \
    - 1/96*pi*log2^4 - 1/64*pi^3*log2^2";

// half of the even m = 8 sum
const HALF_EVEN_M1_8: &str = "-4/9*pi^2*mz(5,1;-1,1) - 26/3*mz(7,1;-1,1) - 8/3*mz(5,1,1,1;-1,1,-1,1) \
    - 32/3*li(5,1/2)*zeta(3) - 2/27*pi^4*li(4,1/2) + 64*li(8,1/2) + 1/3*pi^2*zeta(3)^2 \
    + 251/16*zeta(3)*zeta(5) + 4/45*zeta(3)*log2^5 + 14/27*pi^2*zeta(3)*log2^3 + 31/36*zeta(5)*log2^3 \
    - 53/540*pi^4*zeta(3)*log2 + 247/72*pi^2*zeta(5)*log2 + 1651/96*zeta(7)*log2 - 76357/10886400*pi^8 \
    + 1/630*log2^8 + 2/135*pi^2*log2^6 - 67/3240*pi^4*log2^4 - 853/45360*pi^6*log2^2";

const ODD_M2_5: &str = "-16*pi*imli(4) + 16*li(5,1/2) - 341/32*zeta(5) + 3/64*pi*hzeta(4,1/4) \
    - 3/64*pi*hzeta(4,3/4) - 2/15*log2^5 + 5/36*pi^2*log2^3 - 37/360*pi^4*log2";

// pi times the odd m = 4 sum for k = 2
const PI_ODD_P2_4: &str = "-40*imqmz(4,4,1;1,0) + 152/3*imqmz(4,4,1;1,2) - 256*imli(5) \
    + 1/48*hzeta(4,1/4)*log2 - 1/48*hzeta(4,3/4)*log2 + 25/64*pi^5 + 1/6*pi*log2^4 + 3/4*pi^3*log2^2";

/// Entries whose closed forms are published.
pub fn published_entries() -> Vec<BaseEntry> {
    let p = |s: &str| parse_closedform(s).expect("published closed form parses");
    let pi_inv = parse_closedform("pi^-1").unwrap();
    vec![
        BaseEntry { key: BaseKey::new(-1, Family::Odd, 5), value: p(ODD_M1_5), provenance: Provenance::Published },
        BaseEntry {
            key: BaseKey::new(-1, Family::Even, 8),
            value: p(HALF_EVEN_M1_8).scale(&G::from_int(2)),
            provenance: Provenance::Published,
        },
        BaseEntry { key: BaseKey::new(-2, Family::Odd, 5), value: p(ODD_M2_5), provenance: Provenance::Published },
        BaseEntry {
            key: BaseKey::new(2, Family::Odd, 4),
            value: &p(PI_ODD_P2_4) * &pi_inv,
            provenance: Provenance::Published,
        },
    ]
}
