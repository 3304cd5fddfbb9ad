//! On-disk JSON formats.
//!
//! Rationals are strings `p/q` (or `p`), polynomials are arrays of such
//! strings in ascending degree, and a rational function is
//! `{"num": [...], "den": [...]}`. Struct field order fixes the key order,
//! so serialising the same value always yields the same bytes.

use serde::{Deserialize, Serialize};

use crate::emp::{succ, Emp};
use crate::error::{Error, Result};
use crate::exactalg::{format_rat, parse_rat, Poly, RationalFunction};
use crate::loopnet::{IoMap, LoopNetwork};

pub fn poly_to_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(format_rat).collect()
}

pub fn poly_from_strings(field: &str, coeffs: &[String]) -> Result<Poly> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            parse_rat(c).map_err(|_| {
                Error::format(format!("{field}[{k}]"), format!("`{c}` is not a rational"))
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Poly::new)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionFile {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RationalFunctionFile {
    pub fn from_rf(f: &RationalFunction) -> Self {
        RationalFunctionFile {
            num: poly_to_strings(f.num()),
            den: poly_to_strings(f.den()),
        }
    }

    pub fn to_rf(&self, field: &str) -> Result<RationalFunction> {
        let num = poly_from_strings(&format!("{field}.num"), &self.num)?;
        let den = poly_from_strings(&format!("{field}.den"), &self.den)?;
        RationalFunction::new(num, den).map_err(|e| match e {
            Error::DegenerateInput(_) => Error::format(format!("{field}.den"), "zero denominator"),
            other => other,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: usize,
    pub to: usize,
    pub num: Vec<String>,
    pub den: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub edges: Vec<EdgeFile>,
}

impl NetworkFile {
    pub fn from_network(net: &LoopNetwork) -> Self {
        let n = net.n();
        NetworkFile {
            n,
            edges: net
                .edges()
                .iter()
                .enumerate()
                .map(|(idx, g)| EdgeFile {
                    from: idx + 1,
                    to: succ(idx + 1, n),
                    num: poly_to_strings(g.num()),
                    den: poly_to_strings(g.den()),
                })
                .collect(),
        }
    }

    /// Edges must be listed in cycle order from node 1, each going `i -> i⊕1`.
    pub fn to_network(&self) -> Result<LoopNetwork> {
        let n = self.n;
        if n < 2 {
            return Err(Error::format(
                "n",
                format!("a loop needs at least 2 nodes, got {n}"),
            ));
        }
        if self.edges.len() != n {
            return Err(Error::format(
                "edges",
                format!("expected {n} edges, found {}", self.edges.len()),
            ));
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                let field = format!("edges[{idx}]");
                let (from, to) = (idx + 1, succ(idx + 1, n));
                if e.from != from || e.to != to {
                    return Err(Error::format(
                        field,
                        format!("expected edge {from} -> {to}, found {} -> {}", e.from, e.to),
                    ));
                }
                let rf = RationalFunctionFile {
                    num: e.num.clone(),
                    den: e.den.clone(),
                };
                rf.to_rf(&field)
            })
            .collect::<Result<Vec<_>>>()?;
        LoopNetwork::new(edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpFile {
    pub n: usize,
    pub excited: Vec<usize>,
    pub measured: Vec<usize>,
}

impl EmpFile {
    pub fn from_emp(emp: &Emp) -> Self {
        EmpFile {
            n: emp.n(),
            excited: emp.excited_nodes(),
            measured: emp.measured_nodes(),
        }
    }

    pub fn to_emp(&self) -> Result<Emp> {
        Emp::new(self.n, &self.excited, &self.measured)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IoMapFile {
    pub n: usize,
    pub measured: Vec<usize>,
    pub excited: Vec<usize>,
    pub entries: Vec<Vec<RationalFunctionFile>>,
}

impl IoMapFile {
    pub fn from_map(m: &IoMap) -> Self {
        IoMapFile {
            n: m.n(),
            measured: m.measured().to_vec(),
            excited: m.excited().to_vec(),
            entries: m
                .entries()
                .iter()
                .map(|row| row.iter().map(RationalFunctionFile::from_rf).collect())
                .collect(),
        }
    }

    pub fn to_map(&self) -> Result<IoMap> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, f)| f.to_rf(&format!("entries[{r}][{c}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IoMap::new(self.n, self.measured.clone(), self.excited.clone(), entries)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

pub fn parse<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::format(what, e.to_string()))
}
