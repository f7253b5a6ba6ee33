use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column sampling used by the subsampled randomized Hadamard transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Uniform with replacement. The standard construction.
    WithReplacement,
    /// Uniform without replacement. With `r` equal to the padded dimension
    /// this makes `R` orthogonal, which is useful as an exact reference.
    WithoutReplacement,
}

/// Sparse embedding variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CwMode {
    /// One `±1` per input dimension.
    CountSketch,
    /// Block construction: coordinates are permuted and hashed into `q`
    /// buckets; each bucket owns `a` stacked sub-blocks of `v = r/(a·q)` rows
    /// and every coordinate lands once in each sub-block with weight `±1/√a`.
    Block { a: usize, q: usize },
}

impl CwMode {
    /// Block parameters used when only `r` is given: the largest `a ∈ {4,2,1}`
    /// dividing `r`, then the largest `q ∈ {8,4,2,1}` leaving at least four
    /// rows per sub-block.
    pub fn block_for(r: usize) -> CwMode {
        let a = [4, 2, 1].into_iter().find(|a| r.is_multiple_of(*a)).unwrap_or(1);
        let per = r / a;
        let q = [8, 4, 2, 1]
            .into_iter()
            .find(|q| per.is_multiple_of(*q) && per / q >= 4)
            .unwrap_or(1);
        CwMode::Block { a, q }
    }
}

/// The four oblivious projection families. Serialized as the short name
/// printed by `Display`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SketchKind {
    Srht(Sampling),
    Cw(CwMode),
    Sign,
    Gaussian,
}

impl SketchKind {
    pub const SRHT: SketchKind = SketchKind::Srht(Sampling::WithReplacement);
    pub const CW: SketchKind = SketchKind::Cw(CwMode::CountSketch);

    /// The four default kinds in table order.
    pub const ALL: [SketchKind; 4] = [SketchKind::CW, SketchKind::Sign, SketchKind::SRHT, SketchKind::Gaussian];

    /// Short family name used in reports and descriptors.
    pub fn family(&self) -> &'static str {
        match self {
            SketchKind::Srht(_) => "srht",
            SketchKind::Cw(_) => "cw",
            SketchKind::Sign => "sign",
            SketchKind::Gaussian => "gaussian",
        }
    }

    /// Mode string for descriptors, if the family has modes.
    pub fn mode(&self) -> Option<&'static str> {
        match self {
            SketchKind::Srht(Sampling::WithReplacement) => Some("with-replacement"),
            SketchKind::Srht(Sampling::WithoutReplacement) => Some("without-replacement"),
            SketchKind::Cw(CwMode::CountSketch) => Some("countsketch"),
            SketchKind::Cw(CwMode::Block { .. }) => Some("block"),
            _ => None,
        }
    }

    /// Rebuilds a kind from family and mode names. Block parameters default
    /// to [`CwMode::block_for`] when not given.
    pub fn from_parts(family: &str, mode: Option<&str>, r: usize, block: Option<(usize, usize)>) -> Result<SketchKind> {
        let kind = match (family.to_ascii_lowercase().as_str(), mode) {
            ("srht" | "fht", None | Some("with-replacement")) => SketchKind::SRHT,
            ("srht" | "fht", Some("without-replacement")) => SketchKind::Srht(Sampling::WithoutReplacement),
            ("cw", None | Some("countsketch")) => SketchKind::CW,
            ("cw", Some("block")) => match block {
                Some((a, q)) => SketchKind::Cw(CwMode::Block { a, q }),
                None => SketchKind::Cw(CwMode::block_for(r)),
            },
            ("sign" | "rs", None) => SketchKind::Sign,
            ("gaussian" | "rg", None) => SketchKind::Gaussian,
            (f, m) => {
                return Err(Error::invalid(format!("unknown sketch kind {f:?} with mode {m:?}")));
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for SketchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SketchKind::Srht(Sampling::WithReplacement) => f.write_str("srht"),
            SketchKind::Srht(Sampling::WithoutReplacement) => f.write_str("srht-orthogonal"),
            SketchKind::Cw(CwMode::CountSketch) => f.write_str("cw"),
            SketchKind::Cw(CwMode::Block { a, q }) if *a == 0 || *q == 0 => f.write_str("cw-block"),
            SketchKind::Cw(CwMode::Block { a, q }) => write!(f, "cw-block:{a}x{q}"),
            SketchKind::Sign => f.write_str("sign"),
            SketchKind::Gaussian => f.write_str("gaussian"),
        }
    }
}

impl From<SketchKind> for String {
    fn from(k: SketchKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for SketchKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Parses the short names printed by `Display`. Plain `cw-block` gets
/// default block parameters, which are resolved against `r` when the
/// operator is built; `cw-block:AxQ` fixes them.
impl FromStr for SketchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(params) = lower.strip_prefix("cw-block:") {
            let parsed = params
                .split_once('x')
                .and_then(|(a, q)| Some((a.parse().ok()?, q.parse().ok()?)));
            return match parsed {
                Some((a, q)) if a > 0 && q > 0 => Ok(SketchKind::Cw(CwMode::Block { a, q })),
                _ => Err(Error::invalid(format!("malformed block parameters in {s:?}, expected cw-block:AxQ"))),
            };
        }
        match lower.as_str() {
            "srht" | "fht" => Ok(SketchKind::SRHT),
            "srht-orthogonal" => Ok(SketchKind::Srht(Sampling::WithoutReplacement)),
            "cw" | "countsketch" => Ok(SketchKind::CW),
            "cw-block" => Ok(SketchKind::Cw(CwMode::Block { a: 0, q: 0 })),
            "sign" | "rs" => Ok(SketchKind::Sign),
            "gaussian" | "rg" => Ok(SketchKind::Gaussian),
            other => Err(Error::invalid(format!("unknown sketch kind {other:?}"))),
        }
    }
}
