//! Brute-force enumeration of every growing walk on a ladder, with exact
//! probabilities. Used as ground truth for the generating functions and
//! recursions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_positive, pow, BigRational};
use crate::catalog::{LadderModel, Lattice};
use crate::sim::{Corner, Execution, LatticeTopology, Site, TopologyKind, MAX_DEGREE};

/// Largest step budget accepted by [`enumerate`].
pub const DEFAULT_BUDGET: usize = 18;

/// Tree depth at which the parallel traversal hands out subtrees.
const SPLIT_DEPTH: usize = 6;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("step budget {n_max} exceeds the limit {budget}")]
    BudgetExceeded { n_max: usize, budget: usize },
    #[error("exhaustive enumeration is only available on ladders, not {0}")]
    UnsupportedTopology(String),
    #[error("C must be positive, got {0}")]
    InvalidBias(String),
    #[error("start site {0:?} is not a site of the lattice")]
    InvalidStart(Site),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Length,
    Width,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnumResult {
    /// `(steps, width) -> probability` of being trapped there.
    pub trapped: BTreeMap<(usize, usize), BigRational>,
    /// Probability of still being alive after `n_max` steps.
    pub alive_mass: BigRational,
    pub nodes_explored: u64,
}

impl EnumResult {
    fn merge(mut self, other: EnumResult) -> EnumResult {
        for (k, v) in other.trapped {
            *self.trapped.entry(k).or_insert_with(BigRational::zero) += v;
        }
        self.alive_mass += other.alive_mass;
        self.nodes_explored += other.nodes_explored;
        self
    }

    pub fn total_trapped(&self) -> BigRational {
        self.trapped.values().fold(BigRational::zero(), |a, p| a + p)
    }

    /// Dense length marginal `P_0..=P_n_max`.
    pub fn length_probabilities(&self, n_max: usize) -> Vec<BigRational> {
        let m = self.marginal(Axis::Length);
        (0..=n_max)
            .map(|n| m.get(&n).cloned().unwrap_or_else(BigRational::zero))
            .collect()
    }

    pub fn marginal(&self, axis: Axis) -> BTreeMap<usize, BigRational> {
        marginal(self, axis)
    }
}

pub fn marginal(result: &EnumResult, axis: Axis) -> BTreeMap<usize, BigRational> {
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (&(n, w), p) in &result.trapped {
        let k = match axis {
            Axis::Length => n,
            Axis::Width => w,
        };
        *out.entry(k).or_insert_with(BigRational::zero) += p;
    }
    out
}

/// The simulation topology matching a catalog model.
pub fn model_topology(model: &LadderModel) -> LatticeTopology {
    let kind = match (model.lattice(), model.is_wall()) {
        (Lattice::SquareOneSided, true) => TopologyKind::SquareLadderOneSidedWall,
        (Lattice::SquareOneSided, false) => TopologyKind::SquareLadderOneSided,
        (Lattice::SquareTwoSided, _) => TopologyKind::SquareLadderTwoSided,
        (Lattice::TriangularWide, _) => TopologyKind::TriangularLadderOneSided(Corner::Wide),
        (Lattice::TriangularNarrow, _) => TopologyKind::TriangularLadderOneSided(Corner::Narrow),
        (Lattice::TriangularTwoSided, _) => TopologyKind::TriangularLadderTwoSided,
    };
    LatticeTopology::new(kind)
}

struct Walker<'a> {
    topology: &'a LatticeTopology,
    /// `C^0..=C^MAX_DEGREE`; `None` for the unbiased walk.
    powers: Option<Vec<BigRational>>,
    n_max: usize,
}

/// Probability of a tree node. Unbiased walks only ever multiply by
/// `1/m`, so the reciprocal is kept as an integer.
#[derive(Clone)]
enum Prob {
    Reciprocal(u64),
    Exact(BigRational),
}

#[derive(Clone)]
struct Node {
    path: Vec<Site>,
    prob: Prob,
}

/// Leaf accumulator. Reciprocal masses are counted per denominator and
/// only summed as rationals at the end.
#[derive(Default)]
struct Acc {
    exact: BTreeMap<(usize, usize), BigRational>,
    counted: BTreeMap<(usize, usize), BTreeMap<u64, u64>>,
    alive_exact: BigRational,
    alive_counted: BTreeMap<u64, u64>,
    nodes: u64,
}

fn sum_counted(m: &BTreeMap<u64, u64>) -> BigRational {
    m.iter().fold(BigRational::zero(), |acc, (&d, &k)| {
        acc + BigRational::new(k.into(), d.into())
    })
}

impl Acc {
    fn add_trapped(&mut self, key: (usize, usize), p: Prob) {
        match p {
            Prob::Reciprocal(d) => *self.counted.entry(key).or_default().entry(d).or_default() += 1,
            Prob::Exact(r) => *self.exact.entry(key).or_insert_with(BigRational::zero) += r,
        }
    }

    fn add_alive(&mut self, p: Prob) {
        match p {
            Prob::Reciprocal(d) => *self.alive_counted.entry(d).or_default() += 1,
            Prob::Exact(r) => self.alive_exact += r,
        }
    }

    fn finish(self) -> EnumResult {
        let mut trapped = self.exact;
        for (key, m) in &self.counted {
            *trapped.entry(*key).or_insert_with(BigRational::zero) += sum_counted(m);
        }
        EnumResult {
            trapped,
            alive_mass: self.alive_exact + sum_counted(&self.alive_counted),
            nodes_explored: self.nodes,
        }
    }
}

impl Walker<'_> {
    fn occupied(&self, path: &[Site], s: Site) -> bool {
        path.contains(&s) || self.topology.phantoms().contains(&s)
    }

    fn width(path: &[Site]) -> usize {
        let lo = path.iter().map(|s| s.0).min().unwrap();
        let hi = path.iter().map(|s| s.0).max().unwrap();
        (hi - lo) as usize
    }

    /// Children of `node` with their exact probabilities; empty when trapped.
    fn children(&self, node: &Node) -> Vec<Node> {
        let head = *node.path.last().unwrap();
        let mut nb = [(0, 0); MAX_DEGREE];
        let d = self.topology.neighbors(head, &mut nb);
        let free: Vec<Site> = nb[..d]
            .iter()
            .copied()
            .filter(|&s| !self.occupied(&node.path, s))
            .collect();
        if free.is_empty() {
            return Vec::new();
        }
        let child = |s: Site, prob: Prob| {
            let mut path = Vec::with_capacity(self.n_max + 1);
            path.extend_from_slice(&node.path);
            path.push(s);
            Node { path, prob }
        };
        match (&self.powers, &node.prob) {
            (None, Prob::Reciprocal(den)) => {
                let den = den * free.len() as u64;
                free.into_iter().map(|s| child(s, Prob::Reciprocal(den))).collect()
            }
            (powers, prob) => {
                let base = match prob {
                    Prob::Reciprocal(d) => BigRational::new(1.into(), (*d).into()),
                    Prob::Exact(r) => r.clone(),
                };
                let weights: Vec<BigRational> = free
                    .iter()
                    .map(|&w| match powers {
                        None => BigRational::one(),
                        Some(powers) => {
                            let mut nb2 = [(0, 0); MAX_DEGREE];
                            let d2 = self.topology.neighbors(w, &mut nb2);
                            let k = nb2[..d2]
                                .iter()
                                .filter(|&&v| v != head && self.occupied(&node.path, v))
                                .count();
                            powers[k].clone()
                        }
                    })
                    .collect();
                let total = weights.iter().fold(BigRational::zero(), |a, w| a + w);
                free.into_iter()
                    .zip(weights)
                    .map(|(s, w)| child(s, Prob::Exact(&base * w / &total)))
                    .collect()
            }
        }
    }

    fn visit(&self, node: Node, out: &mut Acc) -> Vec<Node> {
        out.nodes += 1;
        let steps = node.path.len() - 1;
        let kids = self.children(&node);
        if kids.is_empty() {
            out.add_trapped((steps, Self::width(&node.path)), node.prob);
        } else if steps == self.n_max {
            out.add_alive(node.prob);
            return Vec::new();
        }
        kids
    }

    fn dfs(&self, node: Node, out: &mut Acc) {
        for k in self.visit(node, out) {
            self.dfs(k, out);
        }
    }

    /// Expands the tree breadth-first to `SPLIT_DEPTH`, recording finished
    /// nodes in `out` and returning the open frontier in DFS order.
    fn frontier(&self, root: Node, out: &mut Acc) -> Vec<Node> {
        let mut level = vec![root];
        for _ in 0..SPLIT_DEPTH.min(self.n_max) {
            level = level.into_iter().flat_map(|n| self.visit(n, out)).collect();
        }
        level
    }
}

/// Every walk from the topology's usual start, up to `n_max` steps.
pub fn enumerate(topology: &LatticeTopology, c: &BigRational, n_max: usize) -> Result<EnumResult> {
    enumerate_from(topology, topology.start(), c, n_max, Execution::default())
}

pub fn enumerate_model(model: &LadderModel, n_max: usize) -> Result<EnumResult> {
    enumerate(&model_topology(model), model.bias(), n_max)
}

/// As [`enumerate`], from an arbitrary start site and with an explicit
/// execution mode. Both modes give identical results.
pub fn enumerate_from(
    topology: &LatticeTopology,
    start: Site,
    c: &BigRational,
    n_max: usize,
    execution: Execution,
) -> Result<EnumResult> {
    if topology.is_infinite() {
        return Err(OracleError::UnsupportedTopology(topology.name()));
    }
    if n_max > DEFAULT_BUDGET {
        return Err(OracleError::BudgetExceeded {
            n_max,
            budget: DEFAULT_BUDGET,
        });
    }
    if !is_positive(c) {
        return Err(OracleError::InvalidBias(c.to_string()));
    }
    if !topology.contains(start) || topology.phantoms().contains(&start) {
        return Err(OracleError::InvalidStart(start));
    }
    let walker = Walker {
        topology,
        powers: (!c.is_one()).then(|| (0..=MAX_DEGREE as u32).map(|k| pow(c, k)).collect()),
        n_max,
    };
    let root = Node {
        path: vec![start],
        prob: Prob::Reciprocal(1),
    };
    let mut acc = Acc::default();
    let frontier = walker.frontier(root, &mut acc);
    let head = acc.finish();
    let run = |node: Node| {
        let mut acc = Acc::default();
        walker.dfs(node, &mut acc);
        acc.finish()
    };
    let parts: Vec<EnumResult> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            frontier.into_par_iter().map(run).collect()
        }
        _ => frontier.into_iter().map(run).collect(),
    };
    Ok(parts.into_iter().fold(head, EnumResult::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn topo(kind: TopologyKind) -> LatticeTopology {
        LatticeTopology::new(kind)
    }

    #[test]
    fn one_sided_three_steps() {
        let r = enumerate(&topo(TopologyKind::SquareLadderOneSided), &int(1), 3).unwrap();
        assert_eq!(r.trapped, BTreeMap::from([((3, 1), rat(1, 8))]));
        assert_eq!(r.marginal(Axis::Width), BTreeMap::from([(1, rat(1, 8))]));
        assert_eq!(r.alive_mass, rat(7, 8));
    }

    #[test]
    fn two_sided_square_initial_values() {
        let r = enumerate(&topo(TopologyKind::SquareLadderTwoSided), &int(1), 7).unwrap();
        let m = r.marginal(Axis::Length);
        assert_eq!(
            m,
            BTreeMap::from([(5, rat(1, 24)), (6, rat(1, 48)), (7, rat(7, 96))])
        );
    }

    #[test]
    fn two_sided_triangular_initial_values() {
        let r = enumerate(&topo(TopologyKind::TriangularLadderTwoSided), &int(1), 7).unwrap();
        let p = r.length_probabilities(7);
        assert_eq!(p[4..], [rat(1, 54), rat(11, 324), rat(43, 972), rat(95, 1944)]);
    }

    #[test]
    fn mass_is_conserved() {
        for kind in [
            TopologyKind::SquareLadderOneSided,
            TopologyKind::SquareLadderOneSidedWall,
            TopologyKind::TriangularLadderOneSided(Corner::Narrow),
        ] {
            for c in [rat(1, 2), int(2)] {
                let r = enumerate(&topo(kind), &c, 10).unwrap();
                assert_eq!(r.total_trapped() + &r.alive_mass, int(1));
            }
        }
    }

    #[test]
    fn execution_modes_agree() {
        let t = topo(TopologyKind::SquareLadderTwoSided);
        let a = enumerate_from(&t, t.start(), &rat(3, 2), 12, Execution::Sequential).unwrap();
        let b = enumerate_from(&t, t.start(), &rat(3, 2), 12, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wall_first_step() {
        let r = enumerate(&topo(TopologyKind::SquareLadderOneSidedWall), &int(3), 1).unwrap();
        assert_eq!(r.alive_mass, int(1));
        assert!(r.trapped.is_empty());
    }

    #[test]
    fn rejections() {
        let sq = topo(TopologyKind::InfiniteSquare);
        assert!(matches!(enumerate(&sq, &int(1), 4), Err(OracleError::UnsupportedTopology(_))));
        let l = topo(TopologyKind::SquareLadderTwoSided);
        assert!(matches!(enumerate(&l, &int(1), 19), Err(OracleError::BudgetExceeded { .. })));
        assert!(enumerate(&l, &int(0), 4).is_err());
        let tri = topo(TopologyKind::TriangularLadderTwoSided);
        assert!(matches!(
            enumerate_from(&tri, (1, 0), &int(1), 4, Execution::Sequential),
            Err(OracleError::InvalidStart(_))
        ));
    }

    #[test]
    fn empty_marginal() {
        assert!(EnumResult::default().marginal(Axis::Width).is_empty());
    }
}
