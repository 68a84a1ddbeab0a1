//! Serialized spectrum reports. Counts are written as decimal strings so that
//! consumers limited to 64-bit integers read them without overflow.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::CodeParams;
use crate::spectrum::{weight_of_dc, DcSpectrum, RankSpectrum};

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub m: u32,
    pub n: u32,
    pub d: u32,
    pub e: u32,
    pub k: u32,
}

impl From<&CodeParams> for ParamsRecord {
    fn from(p: &CodeParams) -> Self {
        ParamsRecord {
            m: p.m(),
            n: p.n(),
            d: p.d(),
            e: p.e(),
            k: p.k(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub dc: i64,
    pub weight: u64,
    #[serde(with = "decimal")]
    pub count: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub rank: u32,
    #[serde(with = "decimal")]
    pub count: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Enumerate,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Enumerate => "enumerate",
        }
    }
}

/// Nonzero-codeword DC census with weights, plus the rank spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: ParamsRecord,
    pub spectrum: Vec<SpectrumEntry>,
    pub beta: Vec<BetaEntry>,
    pub method: Method,
}

/// One CSV row; `kind` is `spectrum` or `beta` and unused columns are empty.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    kind: String,
    m: u32,
    n: u32,
    d: u32,
    e: u32,
    k: u32,
    method: Method,
    dc: Option<i64>,
    weight: Option<u64>,
    rank: Option<u32>,
    count: String,
}

fn parse_count(s: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::InvalidArgument(format!("not a decimal integer: {s:?}")))
}

impl SpectrumReport {
    pub fn new(
        p: &CodeParams,
        dc: &DcSpectrum,
        rank: &RankSpectrum,
        method: Method,
    ) -> Result<Self> {
        let spectrum = dc
            .census(p)
            .into_iter()
            .map(|(dc, count)| {
                Ok(SpectrumEntry {
                    dc,
                    weight: weight_of_dc(p, dc)?,
                    count,
                })
            })
            .collect::<Result<_>>()?;
        let beta = rank
            .beta
            .iter()
            .map(|(&rank, count)| BetaEntry {
                rank,
                count: count.clone(),
            })
            .collect();
        Ok(SpectrumReport {
            params: p.into(),
            spectrum,
            beta,
            method,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("malformed report: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ParamsRecord { m, n, d, e, k } = self.params;
        let row = |kind: &str, dc, weight, rank, count: &BigInt| CsvRow {
            kind: kind.to_string(),
            m,
            n,
            d,
            e,
            k,
            method: self.method,
            dc,
            weight,
            rank,
            count: count.to_string(),
        };
        for s in &self.spectrum {
            w.serialize(row("spectrum", Some(s.dc), Some(s.weight), None, &s.count))
                .expect("in-memory write");
        }
        for b in &self.beta {
            w.serialize(row("beta", None, None, Some(b.rank), &b.count))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("malformed report: {msg}"));
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        let mut report: Option<SpectrumReport> = None;
        for row in rdr.deserialize::<CsvRow>() {
            let row = row.map_err(|e| bad(e.to_string()))?;
            let params = ParamsRecord {
                m: row.m,
                n: row.n,
                d: row.d,
                e: row.e,
                k: row.k,
            };
            let r = report.get_or_insert_with(|| SpectrumReport {
                params,
                spectrum: Vec::new(),
                beta: Vec::new(),
                method: row.method,
            });
            if r.params != params || r.method != row.method {
                return Err(bad("rows disagree on parameters".into()));
            }
            let count = parse_count(&row.count)?;
            match (row.kind.as_str(), row.dc, row.weight, row.rank) {
                ("spectrum", Some(dc), Some(weight), None) => {
                    r.spectrum.push(SpectrumEntry { dc, weight, count })
                }
                ("beta", None, None, Some(rank)) => r.beta.push(BetaEntry { rank, count }),
                _ => return Err(bad(format!("unexpected row kind {:?}", row.kind))),
            }
        }
        report.ok_or_else(|| bad("no rows".into()))
    }

    pub fn to_text(&self) -> String {
        let ParamsRecord { m, n, d, e, k } = self.params;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "m={m} n={n} d={d} e={e} k={k} method={}",
            self.method.as_str()
        );
        let _ = writeln!(s, "{:>12} {:>10} {:>24}", "dc", "weight", "count");
        for x in &self.spectrum {
            let _ = writeln!(s, "{:>12} {:>10} {:>24}", x.dc, x.weight, x.count);
        }
        let _ = writeln!(s, "{:>12} {:>24}", "rank", "beta");
        for b in &self.beta {
            let _ = writeln!(s, "{:>12} {:>24}", b.rank, b.count);
        }
        s
    }

    /// First entry on which two reports disagree, ignoring `method`.
    pub fn first_difference(&self, other: &SpectrumReport) -> Option<String> {
        if self.params != other.params {
            return Some(format!(
                "parameters {:?} vs {:?}",
                self.params, other.params
            ));
        }
        let n = self.spectrum.len().max(other.spectrum.len());
        for i in 0..n {
            let (a, b) = (self.spectrum.get(i), other.spectrum.get(i));
            if a != b {
                return Some(format!("spectrum entry {i}: {a:?} vs {b:?}"));
            }
        }
        let n = self.beta.len().max(other.beta.len());
        for i in 0..n {
            let (a, b) = (self.beta.get(i), other.beta.get(i));
            if a != b {
                return Some(format!("beta entry {i}: {a:?} vs {b:?}"));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{dc_spectrum_formula, rank_spectrum_formula};
    use proptest::prelude::*;

    fn report(m: u32, n: u32, d: u32, k: u32) -> SpectrumReport {
        let p = CodeParams::new(m, n, d, k).unwrap();
        SpectrumReport::new(
            &p,
            &dc_spectrum_formula(&p).unwrap(),
            &rank_spectrum_formula(&p).unwrap(),
            Method::Formula,
        )
        .unwrap()
    }

    #[test]
    fn json_layout() {
        let r = report(4, 2, 1, 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["params"]["m"], 4);
        assert_eq!(v["method"], "formula");
        assert_eq!(v["spectrum"][0]["dc"], -5);
        assert_eq!(v["spectrum"][0]["weight"], 10);
        assert_eq!(v["spectrum"][0]["count"], "18");
        assert_eq!(v["beta"][0]["rank"], 4);
        assert_eq!(v["beta"][0]["count"], "3");
    }

    #[test]
    fn large_counts_stay_exact() {
        let r = report(24, 12, 1, 6);
        let total: BigInt = r.spectrum.iter().map(|s| &s.count).sum();
        assert_eq!(total, (BigInt::from(1) << 156) - 1);
        assert_eq!(SpectrumReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(SpectrumReport::from_csv(&r.to_csv()).unwrap(), r);
    }

    #[test]
    fn csv_layout() {
        let csv = report(4, 2, 1, 1).to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("kind,m,n,d,e,k,method,dc,weight,rank,count")
        );
        assert_eq!(lines.next(), Some("spectrum,4,2,1,1,1,formula,-5,10,,18"));
        assert!(csv.contains("beta,4,2,1,1,1,formula,,,4,3"));
    }

    #[test]
    fn differences() {
        let a = report(4, 2, 1, 2);
        let mut b = a.clone();
        b.method = Method::Enumerate;
        assert_eq!(a.first_difference(&b), None);
        b.spectrum[1].count += 1;
        assert!(a
            .first_difference(&b)
            .unwrap()
            .starts_with("spectrum entry 1"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(SpectrumReport::from_json("{}").is_err());
        assert!(SpectrumReport::from_csv("kind,m\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            entries in prop::collection::vec((any::<i64>(), any::<u64>(), any::<u128>()), 0..6),
            betas in prop::collection::vec((any::<u32>(), any::<u128>()), 0..4),
            method in prop_oneof![Just(Method::Formula), Just(Method::Enumerate)],
        ) {
            let r = SpectrumReport {
                params: ParamsRecord { m: 6, n: 3, d: 1, e: 1, k: 2 },
                spectrum: entries.into_iter().map(|(dc, weight, c)| SpectrumEntry { dc, weight, count: BigInt::from(c) * 3 }).collect(),
                beta: betas.into_iter().map(|(rank, c)| BetaEntry { rank, count: BigInt::from(c) }).collect(),
                method,
            };
            prop_assert_eq!(SpectrumReport::from_json(&r.to_json()).unwrap(), r.clone());
            if !r.spectrum.is_empty() || !r.beta.is_empty() {
                prop_assert_eq!(SpectrumReport::from_csv(&r.to_csv()).unwrap(), r);
            }
        }
    }
}
