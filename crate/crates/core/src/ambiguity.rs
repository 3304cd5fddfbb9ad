//! Explicit non-identifiability witnesses for contiguous-invalid EMPs.
//!
//! Label the excited arc `1..=k` and the measured arc `k+1..=n`. Every
//! entry of the map is `R P_ij` with the path `j -> i` crossing the edge
//! `k -> k+1` and never the edge `n -> 1`. Scaling the first by `λ` and the
//! second by `μ = (1 - λ + λP) / (λP)` multiplies each `P_ij` by `λ` and
//! turns `R` into `R / λ`, so the map is unchanged.

use serde::{Deserialize, Serialize};

use crate::emp::{contiguous_blocks, succ, Emp};
use crate::error::{Error, Result};
use crate::exactalg::{Rat, RationalFunction};
use crate::loopnet::LoopNetwork;
use num_traits::{One, Zero};

/// `μ` paired with `λ` for a loop product `P`.
pub fn companion_scale(lambda: &Rat, loop_product: &RationalFunction) -> Result<RationalFunction> {
    let lambda_p = loop_product.scale(lambda);
    if lambda_p.is_zero() {
        return Err(Error::NonGeneric("λP vanishes, μ is undefined".into()));
    }
    let numerator = RationalFunction::constant(Rat::one() - lambda).checked_add(&lambda_p)?;
    numerator.checked_div(&lambda_p)
}

/// A network that differs from `net` only on the two boundary edges of the
/// contiguous arcs of `emp`, yet has the same input-output map.
pub fn indistinguishable_family(net: &LoopNetwork, emp: &Emp, lambda: &Rat) -> Result<LoopNetwork> {
    let n = net.n();
    if emp.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "EMP has {} nodes, network has {n}",
            emp.n()
        )));
    }
    let Some((excited, _)) = contiguous_blocks(emp) else {
        return Err(Error::Domain(format!(
            "EMP {emp} is not of the contiguous-invalid shape"
        )));
    };
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::Domain("λ must differ from 0 and 1".into()));
    }

    // rotate so the excited arc starts at node 1
    let shift = (n + 1 - excited[0]) % n;
    let canon = net.rotated(shift);
    let k = excited.len();
    let mu = companion_scale(lambda, canon.loop_product())?;
    if mu.is_zero() {
        return Err(Error::NonGeneric("μ vanishes for this λ".into()));
    }
    let mut edges = canon.edges().to_vec();
    edges[k - 1] = edges[k - 1].scale(lambda);
    edges[n - 1] = edges[n - 1].checked_mul(&mu)?;
    let alt = match LoopNetwork::new(edges) {
        Err(Error::DegenerateNetwork(msg)) => return Err(Error::NonGeneric(msg)),
        other => other?,
    };
    Ok(alt.rotated(n - shift))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub maps_equal: bool,
    pub networks_differ: bool,
    /// Edges `(from, to)` on which the two networks disagree.
    pub differing_edges: Vec<(usize, usize)>,
}

impl CounterexampleReport {
    /// Equal maps from different networks: the EMP cannot identify the loop.
    pub fn certified(&self) -> bool {
        self.maps_equal && self.networks_differ
    }
}

pub fn verify_counterexample(
    a: &LoopNetwork,
    b: &LoopNetwork,
    emp: &Emp,
) -> Result<CounterexampleReport> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "networks have {} and {} nodes",
            n,
            b.n()
        )));
    }
    let maps_equal = a.io_map(emp)? == b.io_map(emp)?;
    let differing_edges: Vec<(usize, usize)> = (1..=n)
        .filter(|&i| a.edges()[i - 1] != b.edges()[i - 1])
        .map(|i| (i, succ(i, n)))
        .collect();
    Ok(CounterexampleReport {
        maps_equal,
        networks_differ: !differing_edges.is_empty(),
        differing_edges,
    })
}
