//! Published moment tables and worked `V` values, with the entries that
//! disagree with the exact computation marked as typos.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cones::ConeDescriptor;
use crate::error::{Error, Result};
use crate::moments::{self, parse_rational, RationalPolynomial};
use crate::partitions::Partition;

const TABLES: &str = include_str!("../data/reference_tables.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Confirmed,
    FlaggedTypo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub cone: String,
    pub p: usize,
    pub printed: BTreeMap<u32, String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<BTreeMap<u32, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VEntry {
    pub cone: String,
    pub partition: String,
    pub printed: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    pub moments: Vec<MomentEntry>,
    pub v_values: Vec<VEntry>,
}

fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?} in reference tables")))
}

fn to_poly(m: &BTreeMap<u32, String>) -> Result<RationalPolynomial> {
    let terms = m.iter().map(|(k, v)| Ok((*k, rational(v)?))).collect::<Result<Vec<_>>>()?;
    Ok(RationalPolynomial::from_coeffs(terms))
}

impl MomentEntry {
    pub fn cone(&self) -> Result<ConeDescriptor> {
        self.cone.parse()
    }

    pub fn printed_poly(&self) -> Result<RationalPolynomial> {
        to_poly(&self.printed)
    }

    pub fn derived_poly(&self) -> Result<Option<RationalPolynomial>> {
        self.derived.as_ref().map(to_poly).transpose()
    }
}

impl VEntry {
    pub fn cone(&self) -> Result<ConeDescriptor> {
        self.cone.parse()
    }

    pub fn partition(&self) -> Result<Partition> {
        self.partition.parse()
    }

    pub fn printed_value(&self) -> Result<BigRational> {
        rational(&self.printed)
    }

    pub fn derived_value(&self) -> Result<Option<BigRational>> {
        self.derived.as_deref().map(rational).transpose()
    }
}

/// How a computed value relates to a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Equal to the printed value.
    Match,
    /// Differs from a printed value already known to be a typo, and equals
    /// the recorded correction.
    KnownTypo,
    /// Any other disagreement.
    Mismatch,
}

impl ReferenceTables {
    pub fn load() -> Result<Self> {
        serde_json::from_str(TABLES).map_err(|e| Error::Parse(format!("reference tables: {e}")))
    }

    pub fn moment(&self, cone: &ConeDescriptor, p: usize) -> Option<&MomentEntry> {
        let name = cone.to_string();
        self.moments.iter().find(|e| e.cone == name && e.p == p)
    }

    /// Compares `computed` against the entry for `(cone, p)`, if any.
    pub fn judge_moment(
        &self,
        cone: &ConeDescriptor,
        p: usize,
        computed: &RationalPolynomial,
    ) -> Result<Option<(Verdict, &MomentEntry)>> {
        let Some(e) = self.moment(cone, p) else {
            return Ok(None);
        };
        let verdict = if &e.printed_poly()? == computed {
            Verdict::Match
        } else if e.status == Status::FlaggedTypo && e.derived_poly()?.as_ref() == Some(computed) {
            Verdict::KnownTypo
        } else {
            Verdict::Mismatch
        };
        Ok(Some((verdict, e)))
    }

    /// Recomputes every `V` entry and judges it.
    pub fn judge_v_values(&self) -> Result<Vec<(Verdict, BigRational, &VEntry)>> {
        self.v_values
            .iter()
            .map(|e| {
                let v = moments::v_of(&e.partition()?.reduce(), &e.cone()?)?;
                let verdict = if v == e.printed_value()? {
                    Verdict::Match
                } else if e.status == Status::FlaggedTypo && e.derived_value()? == Some(v.clone()) {
                    Verdict::KnownTypo
                } else {
                    Verdict::Mismatch
                };
                Ok((verdict, v, e))
            })
            .collect()
    }
}
