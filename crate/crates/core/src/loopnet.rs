//! Isolated loop networks and their closed-loop input-output map.
//!
//! Nodes are labelled `1..=n`, and the edge leaving node `i` feeds its
//! successor `i ⊕ 1`. Every closed-loop entry is assembled from path
//! products:
//!
//! * `P`      product of all edges around the loop,
//! * `P_ik`   product of the edges on the directed path from `k` to `i`,
//! * `R`      `1 / (1 - P)`, the node-to-itself response,
//! * `T_ii = R` and `T_ik = P_ik R` for `i != k`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::emp::{succ, Emp};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat, RationalFunction};

#[derive(Clone, Debug)]
pub struct LoopNetwork {
    edges: Vec<RationalFunction>,
    product: RationalFunction,
    sensitivity: RationalFunction,
}

impl PartialEq for LoopNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for LoopNetwork {}

impl LoopNetwork {
    /// `edges[i]` is the edge leaving node `i + 1`.
    pub fn new(edges: Vec<RationalFunction>) -> Result<Self> {
        let n = edges.len();
        if n < 2 {
            return Err(Error::UnsupportedSize {
                n,
                min: 2,
                max: usize::MAX,
            });
        }
        if let Some(i) = edges.iter().position(RationalFunction::is_zero) {
            return Err(Error::DegenerateNetwork(format!(
                "edge ({} -> {}) is zero",
                i + 1,
                succ(i + 1, n)
            )));
        }
        let product = loop_product(&edges)?;
        let one_minus = product.one_minus()?;
        if one_minus.is_zero() {
            return Err(Error::DegenerateNetwork(
                "1 - P vanishes identically".into(),
            ));
        }
        let sensitivity = one_minus.recip()?;
        Ok(LoopNetwork {
            edges,
            product,
            sensitivity,
        })
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[RationalFunction] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<RationalFunction> {
        self.edges
    }

    /// The edge leaving node `from`, i.e. `G_{from ⊕ 1, from}`.
    pub fn edge(&self, from: usize) -> Result<&RationalFunction> {
        self.check_node(from)?;
        Ok(&self.edges[from - 1])
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if (1..=self.n()).contains(&i) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "node {i} is outside 1..={}",
                self.n()
            )))
        }
    }

    /// `P`, the product of every edge.
    pub fn loop_product(&self) -> &RationalFunction {
        &self.product
    }

    /// `R = 1 / (1 - P)`.
    pub fn sensitivity(&self) -> &RationalFunction {
        &self.sensitivity
    }

    /// `P_ik`: product along the directed path `k -> ... -> i`.
    pub fn path_product(&self, i: usize, k: usize) -> Result<RationalFunction> {
        self.check_node(i)?;
        self.check_node(k)?;
        if i == k {
            return Err(Error::Domain(format!(
                "path product P_{{{i}{i}}} is undefined; use the loop product or 1"
            )));
        }
        self.walk(i, k)
    }

    // Same as path_product, with the empty path k -> k giving 1.
    pub(crate) fn walk(&self, i: usize, k: usize) -> Result<RationalFunction> {
        let n = self.n();
        let mut acc = RationalFunction::one();
        let mut node = k;
        while node != i {
            acc = acc.checked_mul(&self.edges[node - 1])?;
            node = succ(node, n);
        }
        Ok(acc)
    }

    /// `T_ik`, the closed-loop response at node `i` to an excitation at `k`.
    pub fn closed_loop_entry(&self, i: usize, k: usize) -> Result<RationalFunction> {
        self.check_node(i)?;
        self.check_node(k)?;
        self.walk(i, k)?.checked_mul(&self.sensitivity)
    }

    /// The full `n × n` closed-loop matrix.
    pub fn closed_loop_matrix(&self) -> Result<Vec<Vec<RationalFunction>>> {
        let all = Emp::new(
            self.n(),
            &(1..=self.n()).collect::<Vec<_>>(),
            &(1..=self.n()).collect::<Vec<_>>(),
        )?;
        Ok(self.io_map(&all)?.entries)
    }

    /// `M = C T B`: rows are measured nodes, columns excited nodes, both
    /// ascending.
    pub fn io_map(&self, emp: &Emp) -> Result<IoMap> {
        let n = self.n();
        if emp.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "EMP has {} nodes, network has {n}",
                emp.n()
            )));
        }
        let measured = emp.measured_nodes();
        let excited = emp.excited_nodes();
        let mut entries = vec![Vec::with_capacity(excited.len()); measured.len()];
        for &k in &excited {
            // column k: walk once around the loop from k
            let mut column = vec![RationalFunction::zero(); n];
            let mut acc = self.sensitivity.clone();
            let mut node = k;
            for _ in 0..n {
                column[node - 1] = acc.clone();
                acc = acc.checked_mul(&self.edges[node - 1])?;
                node = succ(node, n);
            }
            for (row, &i) in measured.iter().enumerate() {
                entries[row].push(column[i - 1].clone());
            }
        }
        Ok(IoMap {
            n,
            measured,
            excited,
            entries,
        })
    }

    /// Relabels node `i` as `i + shift`; the edge leaving `i` becomes the
    /// edge leaving `i + shift`.
    pub fn rotated(&self, shift: usize) -> LoopNetwork {
        let n = self.n();
        let mut edges = vec![RationalFunction::zero(); n];
        for (idx, g) in self.edges.iter().enumerate() {
            edges[(idx + shift) % n] = g.clone();
        }
        LoopNetwork {
            edges,
            product: self.product.clone(),
            sensitivity: self.sensitivity.clone(),
        }
    }

    /// Seeded random network. Each edge is `num/den` with integer
    /// coefficients uniform in `[-9, 9]`, `deg num <= degree_bound` and a
    /// monic `den` of degree exactly `degree_bound`. Draws are repeated
    /// until every edge is nonzero and `1 - P` does not vanish.
    pub fn random(n: usize, seed: u64, degree_bound: usize) -> Result<Self> {
        const ATTEMPTS: usize = 1000;
        if n < 2 {
            return Err(Error::UnsupportedSize {
                n,
                min: 2,
                max: usize::MAX,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ATTEMPTS {
            let edges = (0..n)
                .map(|_| random_edge(&mut rng, degree_bound))
                .collect::<Result<Vec<_>>>()?;
            match LoopNetwork::new(edges) {
                Ok(net) => return Ok(net),
                Err(Error::DegenerateNetwork(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ResampleExhausted { attempts: ATTEMPTS })
    }
}

/// Product of every edge around a loop, without the non-degeneracy checks
/// of [`LoopNetwork::new`].
pub fn loop_product(edges: &[RationalFunction]) -> Result<RationalFunction> {
    edges
        .iter()
        .try_fold(RationalFunction::one(), |acc, g| acc.checked_mul(g))
}

fn random_coeff(rng: &mut impl Rng) -> Rat {
    Rat::from_integer(BigInt::from(rng.gen_range(-9i64..=9)))
}

fn random_edge(rng: &mut impl Rng, degree_bound: usize) -> Result<RationalFunction> {
    let num = Poly::new((0..=degree_bound).map(|_| random_coeff(rng)).collect());
    let mut den: Vec<Rat> = (0..degree_bound).map(|_| random_coeff(rng)).collect();
    den.push(Rat::from_integer(1.into()));
    RationalFunction::new(num, Poly::new(den))
}

/// Input-output map `M = C T B` restricted to the measured rows and excited
/// columns of an EMP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoMap {
    pub(crate) n: usize,
    pub(crate) measured: Vec<usize>,
    pub(crate) excited: Vec<usize>,
    pub(crate) entries: Vec<Vec<RationalFunction>>,
}

impl IoMap {
    /// Validates shapes and node labels; lists must be strictly ascending.
    pub fn new(
        n: usize,
        measured: Vec<usize>,
        excited: Vec<usize>,
        entries: Vec<Vec<RationalFunction>>,
    ) -> Result<Self> {
        for (field, nodes) in [("measured", &measured), ("excited", &excited)] {
            if nodes.iter().any(|&i| !(1..=n).contains(&i)) {
                return Err(Error::format(field, format!("node outside 1..={n}")));
            }
            if nodes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::format(field, "nodes must be strictly ascending"));
            }
        }
        if entries.len() != measured.len() || entries.iter().any(|r| r.len() != excited.len()) {
            return Err(Error::format(
                "entries",
                format!("expected a {} x {} matrix", measured.len(), excited.len()),
            ));
        }
        Ok(IoMap {
            n,
            measured,
            excited,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn excited(&self) -> &[usize] {
        &self.excited
    }

    pub fn entries(&self) -> &[Vec<RationalFunction>] {
        &self.entries
    }

    /// `M[i, k]` by node labels: response at measured node `i` to the
    /// excitation at node `k`.
    pub fn get(&self, i: usize, k: usize) -> Option<&RationalFunction> {
        let row = self.measured.binary_search(&i).ok()?;
        let col = self.excited.binary_search(&k).ok()?;
        Some(&self.entries[row][col])
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.measured.len(), self.excited.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::from_ints(num, den).unwrap()
    }

    fn constant_net(gains: &[i64]) -> LoopNetwork {
        LoopNetwork::new(
            gains
                .iter()
                .map(|&g| RationalFunction::constant(int(g)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn loop_product_of_unit_edges() {
        assert!(loop_product(&vec![RationalFunction::one(); 5])
            .unwrap()
            .is_one());
    }

    #[test]
    fn unit_edges_make_a_degenerate_loop_only_if_p_is_one() {
        // five unit edges give P = 1, hence 1 - P = 0
        let err = LoopNetwork::new(vec![RationalFunction::one(); 5]);
        assert!(matches!(err, Err(Error::DegenerateNetwork(_))));
        let net = LoopNetwork::new(vec![
            RationalFunction::one(),
            rf(&[0, 1], &[1]),
            RationalFunction::one(),
        ])
        .unwrap();
        assert_eq!(net.loop_product(), &rf(&[0, 1], &[1]));
    }

    #[test]
    fn zero_edge_rejected() {
        assert!(matches!(
            LoopNetwork::new(vec![RationalFunction::one(), RationalFunction::zero()]),
            Err(Error::DegenerateNetwork(_))
        ));
        assert!(LoopNetwork::new(vec![RationalFunction::one()]).is_err());
    }

    #[test]
    fn path_products_wrap_around() {
        let net = constant_net(&[2, 3, 5, 7]);
        assert_eq!(
            net.path_product(2, 1).unwrap(),
            RationalFunction::constant(int(2))
        );
        // P_13 = G_14 · G_43
        assert_eq!(
            net.path_product(1, 3).unwrap(),
            RationalFunction::constant(int(35))
        );
        assert!(matches!(net.path_product(2, 2), Err(Error::Domain(_))));
        assert!(net.path_product(5, 1).is_err());
    }

    #[test]
    fn sensitivity_at_a_point() {
        // P(z) = z/2, so P(1) = 1/2 and R(1) = 2
        let net = LoopNetwork::new(vec![
            rf(&[0, 1], &[1]),
            RationalFunction::constant(rat(1, 2)),
        ])
        .unwrap();
        assert_eq!(net.sensitivity().eval(&int(1)).unwrap(), int(2));
    }

    #[test]
    fn empty_selection_gives_empty_map() {
        let net = constant_net(&[2, 3, 5]);
        let m = net.io_map(&Emp::new(3, &[], &[1, 2]).unwrap()).unwrap();
        assert_eq!(m.dims(), (2, 0));
        assert_eq!(m.entries().len(), 2);
        assert!(m.entries().iter().all(Vec::is_empty));
    }

    #[test]
    fn io_map_rejects_mismatched_emp() {
        let net = constant_net(&[2, 3, 5]);
        let emp = Emp::new(4, &[1], &[2]).unwrap();
        assert!(matches!(net.io_map(&emp), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn random_is_deterministic() {
        let a = LoopNetwork::random(5, 11, 1).unwrap();
        let b = LoopNetwork::random(5, 11, 1).unwrap();
        assert_eq!(a, b);
        assert!(!a.loop_product().one_minus().unwrap().is_zero());
        assert_ne!(a, LoopNetwork::random(5, 12, 1).unwrap());
    }

    #[test]
    fn random_edges_have_the_requested_shape() {
        let net = LoopNetwork::random(4, 7, 1).unwrap();
        for g in net.edges() {
            assert!(g.num().degree().unwrap() <= 1);
            assert!(g.den().degree().unwrap() <= 1);
            assert!(g.den().is_monic());
        }
    }

    #[test]
    fn rotation_moves_edges() {
        let net = constant_net(&[2, 3, 5]);
        let r = net.rotated(1);
        assert_eq!(r.edge(2).unwrap(), &RationalFunction::constant(int(2)));
        assert_eq!(r.edge(1).unwrap(), &RationalFunction::constant(int(5)));
    }
}
