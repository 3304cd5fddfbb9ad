//! Reconstruction of every loop edge from the input-output map of a valid
//! EMP.
//!
//! The procedure first recovers the loop product `P`, then the path
//! products `Q_i = P_{r,i}` into a measured reference node `r`, and finally
//! each edge as a ratio of consecutive `Q`s:
//!
//! * `G_{i⊕1,i} = Q_i / Q_{i⊕1}` when neither `i` nor `i⊕1` is `r`,
//! * `G_{r⊕1,r} = P / Q_{r⊕1}`,
//! * `G_{r,r⊖1} = Q_{r⊖1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::emp::{nsc_check, succ, Emp, Reason, Verdict};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;
use crate::loopnet::{IoMap, LoopNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PlanMode {
    /// Anchored at a node that is both excited and measured.
    BothNode { node: usize },
    /// Two distinct measured nodes whose successors are excited.
    PairMode { first: usize, second: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryPlan {
    pub mode: PlanMode,
    /// Measured node `r` whose path products anchor the recursion.
    pub reference: usize,
}

impl RecoveryPlan {
    /// Plan anchored at the both-node `node`.
    pub fn both_node(emp: &Emp, node: usize) -> Result<Self> {
        if !(emp.is_excited(node) && emp.is_measured(node)) {
            return Err(Error::Domain(format!(
                "node {node} is not both excited and measured"
            )));
        }
        Ok(RecoveryPlan {
            mode: PlanMode::BothNode { node },
            reference: node,
        })
    }

    /// Plan built on the measured nodes `first` and `second`, both followed
    /// by excited nodes. The reference is `second`.
    pub fn pair(emp: &Emp, first: usize, second: usize) -> Result<Self> {
        let n = emp.n();
        let ok = |r: usize| emp.is_measured(r) && emp.is_excited(succ(r, n));
        if first == second || !ok(first) || !ok(second) {
            return Err(Error::Domain(format!(
                "({first}, {second}) are not two distinct measured nodes with excited successors"
            )));
        }
        Ok(RecoveryPlan {
            mode: PlanMode::PairMode { first, second },
            reference: second,
        })
    }
}

/// Default plan: the smallest both-node if there is one, otherwise the
/// first two measured-to-excited pairs.
pub fn plan(emp: &Emp) -> Result<RecoveryPlan> {
    let class = nsc_check(emp)?;
    if class.verdict == Verdict::Invalid {
        return Err(Error::NotIdentifiable(describe_invalid(&class.reason)));
    }
    if let Some(&node) = emp.both_nodes().first() {
        return RecoveryPlan::both_node(emp, node);
    }
    let pairs = emp.measured_excited_pairs();
    RecoveryPlan::pair(emp, pairs[0].0, pairs[1].0)
}

fn describe_invalid(reason: &Reason) -> String {
    match reason {
        Reason::NecessaryCondition { violation } => {
            let mut parts = Vec::new();
            if violation.excited_empty {
                parts.push("no node is excited".to_string());
            }
            if violation.measured_empty {
                parts.push("no node is measured".to_string());
            }
            if !violation.uncovered.is_empty() {
                parts.push(format!(
                    "nodes {:?} are neither excited nor measured",
                    violation.uncovered
                ));
            }
            parts.join("; ")
        }
        Reason::ContiguousBlocks { excited, measured } => format!(
            "no node is both excited and measured, and the excited nodes {excited:?} and \
             measured nodes {measured:?} form contiguous arcs"
        ),
        other => format!("unexpected reason {other:?}"),
    }
}

fn entry(m: &IoMap, i: usize, k: usize) -> Result<&RationalFunction> {
    let value = m.get(i, k).ok_or_else(|| {
        Error::DimensionMismatch(format!("input-output map has no entry M[{i},{k}]"))
    })?;
    if value.is_zero() {
        return Err(Error::NonGeneric(format!(
            "entry M[{i},{k}] is identically zero"
        )));
    }
    Ok(value)
}

fn nonzero(value: RationalFunction, what: impl FnOnce() -> String) -> Result<RationalFunction> {
    if value.is_zero() {
        Err(Error::NonGeneric(format!("{} is identically zero", what())))
    } else {
        Ok(value)
    }
}

/// Recovers the loop product `P` from the entries the plan relies on.
pub fn loop_product_from_map(m: &IoMap, plan: &RecoveryPlan) -> Result<RationalFunction> {
    let n = m.n();
    match plan.mode {
        PlanMode::BothNode { node } => {
            // M[j,j] = 1 / (1 - P)
            let r = entry(m, node, node)?;
            RationalFunction::one().checked_sub(&r.recip()?)
        }
        PlanMode::PairMode { first, second } => {
            let (s1, s2) = (succ(first, n), succ(second, n));
            let top = entry(m, second, s2)?.checked_mul(entry(m, first, s1)?)?;
            let bottom = entry(m, first, s2)?.checked_mul(entry(m, second, s1)?)?;
            top.checked_div(&bottom)
        }
    }
}

/// `Q_i = P_{r,i}` for every node `i != r`, keyed by node.
pub fn reference_products(
    m: &IoMap,
    plan: &RecoveryPlan,
    loop_product: &RationalFunction,
) -> Result<BTreeMap<usize, RationalFunction>> {
    let n = m.n();
    let r = plan.reference;
    let one_minus = nonzero(loop_product.one_minus()?, || "1 - P".into())?;
    let is_excited = |i: usize| m.excited().binary_search(&i).is_ok();
    let is_measured = |i: usize| m.measured().binary_search(&i).is_ok();

    let mut q = BTreeMap::new();
    // excited nodes first: T_{r,i} = P_{r,i} R
    for i in (1..=n).filter(|&i| i != r && is_excited(i)) {
        q.insert(i, entry(m, r, i)?.checked_mul(&one_minus)?);
    }
    for i in (1..=n).filter(|&i| i != r && !is_excited(i)) {
        if !is_measured(i) {
            return Err(Error::DimensionMismatch(format!(
                "node {i} is neither excited nor measured"
            )));
        }
        let value = match plan.mode {
            PlanMode::BothNode { node } => {
                // P_{i,j} = M[i,j](1 - P) and P = P_{j,i} P_{i,j}
                let forward = entry(m, i, node)?.checked_mul(&one_minus)?;
                loop_product.checked_div(&forward)?
            }
            PlanMode::PairMode { .. } => {
                // P_{r,s} = P_{r,i} P_{i,s} with s = r ⊕ 1 excited
                let s = succ(r, n);
                let via = entry(m, i, s)?.checked_mul(&one_minus)?;
                let q_s = q
                    .get(&s)
                    .ok_or_else(|| Error::Domain(format!("successor {s} of {r} is not excited")))?;
                q_s.checked_div(&via)?
            }
        };
        q.insert(i, value);
    }
    for (i, value) in &q {
        if value.is_zero() {
            return Err(Error::NonGeneric(format!(
                "path product P_{{{r},{i}}} is zero"
            )));
        }
    }
    Ok(q)
}

fn check_shape(m: &IoMap, emp: &Emp) -> Result<()> {
    if m.n() != emp.n()
        || m.measured() != emp.measured_nodes().as_slice()
        || m.excited() != emp.excited_nodes().as_slice()
    {
        return Err(Error::DimensionMismatch(format!(
            "input-output map (n = {}, measured {:?}, excited {:?}) does not match EMP {}",
            m.n(),
            m.measured(),
            m.excited(),
            emp
        )));
    }
    Ok(())
}

/// Reconstructs the network with an explicit plan.
pub fn recover_with_plan(m: &IoMap, emp: &Emp, plan: &RecoveryPlan) -> Result<LoopNetwork> {
    check_shape(m, emp)?;
    let n = m.n();
    let r = plan.reference;
    let p = nonzero(loop_product_from_map(m, plan)?, || "loop product".into())?;
    let q = reference_products(m, plan, &p)?;
    let edges = (1..=n)
        .map(|i| {
            let next = succ(i, n);
            if i == r {
                p.checked_div(&q[&next])
            } else if next == r {
                Ok(q[&i].clone())
            } else {
                q[&i].checked_div(&q[&next])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    match LoopNetwork::new(edges) {
        Err(Error::DegenerateNetwork(msg)) => Err(Error::NonGeneric(msg)),
        other => other,
    }
}

/// Reconstructs every edge from the input-output map of a valid EMP.
pub fn recover_edges(m: &IoMap, emp: &Emp) -> Result<LoopNetwork> {
    check_shape(m, emp)?;
    let plan = plan(emp)?;
    recover_with_plan(m, emp, &plan)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeStatus {
    /// Recovered and identical to the generating edge.
    Match,
    /// Recovered but different from the generating edge.
    Mismatch,
    /// Not determined by the input-output map under this EMP.
    Unrecoverable,
    /// Recovery aborted before this edge was reached.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub from: usize,
    pub to: usize,
    pub status: EdgeStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub pattern: String,
    pub verdict: Option<Verdict>,
    pub edges: Vec<EdgeReport>,
    pub error: Option<String>,
}

impl RoundtripReport {
    /// Every edge recovered and equal to the original.
    pub fn exact(&self) -> bool {
        self.error.is_none()
            && !self.edges.is_empty()
            && self.edges.iter().all(|e| e.status == EdgeStatus::Match)
    }

    pub fn recovered_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.status == EdgeStatus::Match)
            .count()
    }

    pub fn unrecoverable(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| e.status == EdgeStatus::Unrecoverable)
            .map(|e| (e.from, e.to))
            .collect()
    }
}

/// Edges any EMP determines on its own: for `i` and `i⊕1` both excited,
/// `G_{i⊕1,i} = T_{j,i} / T_{j,i⊕1}` with any measured `j`; for both
/// measured, `G_{i⊕1,i} = T_{i⊕1,k} / T_{i,k}` with any excited `k`.
fn partial_edges(m: &IoMap, emp: &Emp) -> Result<Vec<Option<RationalFunction>>> {
    let n = emp.n();
    (1..=n)
        .map(|i| {
            let next = succ(i, n);
            if emp.is_excited(i) && emp.is_excited(next) {
                if let Some(&j) = m.measured().first() {
                    return Ok(Some(entry(m, j, i)?.checked_div(entry(m, j, next)?)?));
                }
            }
            if emp.is_measured(i) && emp.is_measured(next) {
                if let Some(&k) = m.excited().first() {
                    return Ok(Some(entry(m, next, k)?.checked_div(entry(m, i, k)?)?));
                }
            }
            Ok(None)
        })
        .collect()
}

/// Simulates the map of `net` under `emp`, runs recovery and compares each
/// edge. For invalid EMPs only the edges the map still pins down are
/// recovered; the rest are reported unrecoverable.
pub fn verify_roundtrip(net: &LoopNetwork, emp: &Emp) -> RoundtripReport {
    let n = net.n();
    let mut report = RoundtripReport {
        n,
        pattern: emp.pattern(),
        verdict: None,
        edges: Vec::new(),
        error: None,
    };
    let status_of = |i: usize, g: Option<&RationalFunction>| EdgeReport {
        from: i,
        to: succ(i, n),
        status: match g {
            Some(g) if g == &net.edges()[i - 1] => EdgeStatus::Match,
            Some(_) => EdgeStatus::Mismatch,
            None => EdgeStatus::Unrecoverable,
        },
    };
    let failed = |report: &mut RoundtripReport, err: Error| {
        report.error = Some(err.to_string());
        report.edges = (1..=n)
            .map(|i| EdgeReport {
                from: i,
                to: succ(i, n),
                status: EdgeStatus::Failed,
            })
            .collect();
    };

    let verdict = match nsc_check(emp) {
        Ok(class) => class.verdict,
        Err(e) => {
            failed(&mut report, e);
            return report;
        }
    };
    report.verdict = Some(verdict);
    let m = match net.io_map(emp) {
        Ok(m) => m,
        Err(e) => {
            failed(&mut report, e);
            return report;
        }
    };
    if verdict.is_valid() {
        match recover_edges(&m, emp) {
            Ok(rec) => {
                report.edges = (1..=n)
                    .map(|i| status_of(i, Some(&rec.edges()[i - 1])))
                    .collect();
            }
            Err(e) => failed(&mut report, e),
        }
    } else {
        match partial_edges(&m, emp) {
            Ok(partial) => {
                report.edges = (1..=n)
                    .map(|i| status_of(i, partial[i - 1].as_ref()))
                    .collect();
            }
            Err(e) => failed(&mut report, e),
        }
    }
    report
}

/// Like [`verify_roundtrip`], starting from raw edges so that construction
/// failures land in the report.
pub fn verify_roundtrip_edges(edges: Vec<RationalFunction>, emp: &Emp) -> RoundtripReport {
    match LoopNetwork::new(edges) {
        Ok(net) => verify_roundtrip(&net, emp),
        Err(e) => RoundtripReport {
            n: emp.n(),
            pattern: emp.pattern(),
            verdict: nsc_check(emp).ok().map(|c| c.verdict),
            edges: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}
