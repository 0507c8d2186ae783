//! Anticommutativity graphs and exact independent-set computations.
//!
//! For a fixed operator set S and a bipartition, vertices are the
//! operators and edges join pairs that anticommute when restricted to one
//! side of the cut. The biseparable bound of a weighted witness is the
//! maximum weight of an independent set in this graph, so everything here
//! is exact: adjacency lives in 64-bit masks, the maximum-weight search is
//! a branch-and-bound over vertex masks with rational weights, and maximal
//! independent sets are enumerated via Bron–Kerbosch on the complement.
//!
//! The no-partition graph (`cut = None`) carries *global* anticommutation
//! edges. For a mutually commuting operator set it is edgeless and the
//! normalization G₀ is the plain weight sum; for sets containing
//! anticommuting pairs (the Dicke witness) G₀ is the corresponding
//! independent-set maximum.

use crate::error::{Error, Result};
use crate::pauli::{Bipartition, PauliString};
use crate::rational::{rat_int, Rat};

/// Largest operator set a graph can hold (adjacency in u64 masks).
pub const MAX_GRAPH_VERTICES: usize = 64;

/// An operator anticommutativity graph for one bipartition (or none).
#[derive(Clone, Debug, PartialEq)]
pub struct AnticommGraph {
    vertices: Vec<PauliString>,
    cut: Option<Bipartition>,
    /// adjacency[i] has bit j set when vertices i and j are connected.
    adjacency: Vec<u64>,
}

impl AnticommGraph {
    /// The operator list, in construction order.
    pub fn vertices(&self) -> &[PauliString] {
        &self.vertices
    }

    /// The bipartition this graph refers to; `None` is the no-partition
    /// (global anticommutation) graph.
    pub fn cut(&self) -> Option<&Bipartition> {
        self.cut.as_ref()
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// True when the graph has no vertices.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when vertices `i` and `j` are connected.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i] & (1 << j) != 0
    }

    /// All edges as index pairs with i < j, row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Indices of the neighbors of vertex `i`, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.has_edge(i, j)).collect()
    }

    /// Degree of vertex `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count_ones() as usize
    }
}

/// Builds the anticommutativity graph of `ops` for `cut`.
///
/// With a bipartition, vertices are joined when they cut-anticommute;
/// with `cut = None`, when they anticommute globally (no edges occur for
/// a mutually commuting set).
pub fn build_graph(ops: &[PauliString], cut: Option<Bipartition>) -> Result<AnticommGraph> {
    if ops.is_empty() {
        return Err(Error::Argument("graph needs at least one operator".into()));
    }
    if ops.len() > MAX_GRAPH_VERTICES {
        return Err(Error::Argument(format!(
            "operator sets are limited to {MAX_GRAPH_VERTICES} entries, got {}",
            ops.len()
        )));
    }
    let mut adjacency = vec![0u64; ops.len()];
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            let connected = match &cut {
                Some(c) => ops[i].cut_anticommutes(&ops[j], c)?,
                None => !ops[i].commutes(&ops[j])?,
            };
            if connected {
                adjacency[i] |= 1 << j;
                adjacency[j] |= 1 << i;
            }
        }
    }
    Ok(AnticommGraph { vertices: ops.to_vec(), cut, adjacency })
}

fn mask_weight(mask: u64, weights: &[Rat]) -> Rat {
    let mut acc = rat_int(0);
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        acc += &weights[v];
        m &= m - 1;
    }
    acc
}

/// The exact maximum-weight independent set.
///
/// Returns the optimal total weight and one optimal 0/1 assignment
/// aligned with the graph's vertices. Weights must be nonnegative. The
/// search is a branch-and-bound that explores "include lowest-index
/// candidate" first and only accepts strict improvements, so the returned
/// assignment is deterministic.
pub fn max_weight_independent(graph: &AnticommGraph, weights: &[Rat]) -> Result<(Rat, Vec<u8>)> {
    if weights.len() != graph.len() {
        return Err(Error::Dimension(format!(
            "{} weights supplied for {} graph vertices",
            weights.len(),
            graph.len()
        )));
    }
    let zero = rat_int(0);
    if weights.iter().any(|w| w < &zero) {
        return Err(Error::Argument(
            "independent-set weights must be nonnegative".into(),
        ));
    }

    struct Search<'a> {
        adjacency: &'a [u64],
        weights: &'a [Rat],
        best_weight: Rat,
        best_mask: u64,
    }

    impl Search<'_> {
        fn run(&mut self, candidates: u64, chosen: u64, current: Rat) {
            if candidates == 0 {
                if current > self.best_weight {
                    self.best_weight = current;
                    self.best_mask = chosen;
                }
                return;
            }
            // Remaining candidates bound the achievable total.
            if &current + mask_weight(candidates, self.weights) <= self.best_weight {
                return;
            }
            let v = candidates.trailing_zeros() as usize;
            let bit = 1u64 << v;
            self.run(
                candidates & !bit & !self.adjacency[v],
                chosen | bit,
                &current + &self.weights[v],
            );
            self.run(candidates & !bit, chosen, current);
        }
    }

    let all = if graph.len() == 64 { u64::MAX } else { (1u64 << graph.len()) - 1 };
    let mut search = Search {
        adjacency: &graph.adjacency,
        weights,
        best_weight: rat_int(-1),
        best_mask: 0,
    };
    search.run(all, 0, rat_int(0));
    let assignment = (0..graph.len())
        .map(|i| u8::from(search.best_mask & (1 << i) != 0))
        .collect();
    Ok((search.best_weight, assignment))
}

/// All maximal independent sets of the graph, as vertex masks.
///
/// Independent sets of the graph are cliques of its complement, so this
/// is Bron–Kerbosch with pivoting on the complement adjacency. Output is
/// sorted ascending by mask for determinism.
pub fn maximal_independent_sets(graph: &AnticommGraph) -> Vec<u64> {
    let n = graph.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let comp: Vec<u64> = (0..n)
        .map(|i| all & !graph.adjacency[i] & !(1u64 << i))
        .collect();

    fn expand(r: u64, mut p: u64, mut x: u64, comp: &[u64], out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        // Pivot on the vertex covering the most of P to cut branching.
        let mut pivot = usize::MAX;
        let mut pivot_cover = 0u32;
        let mut scan = p | x;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let cover = (p & comp[u]).count_ones();
            if pivot == usize::MAX || cover > pivot_cover {
                pivot = u;
                pivot_cover = cover;
            }
        }
        let mut candidates = p & !comp[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            let bit = 1u64 << v;
            candidates &= candidates - 1;
            expand(r | bit, p & comp[v], x & comp[v], comp, out);
            p &= !bit;
            x |= bit;
        }
    }

    let mut out = Vec::new();
    expand(0, all, 0, &comp, &mut out);
    out.sort_unstable();
    out
}

/// The vertices selected by a mask, as indices.
pub fn mask_to_indices(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask & (1 << i) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(list: &[&str]) -> Vec<PauliString> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn ghz_set() -> Vec<PauliString> {
        ops(&["3333", "3300", "0033", "3003", "0330", "3030", "0303", "1221"])
    }

    #[test]
    fn no_partition_graph_of_commuting_set_is_edgeless() {
        let graph = build_graph(&ghz_set(), None).unwrap();
        assert_eq!(graph.len(), 8);
        assert_eq!(graph.edge_count(), 0);
    }

    #[test]
    fn ghz_cut_graphs_are_stars_on_1221() {
        let set = ghz_set();
        for (cut_name, expected) in [
            ("A|BCD", vec!["3333", "3300", "3003", "3030"]),
            ("AB|CD", vec!["3003", "0330", "3030", "0303"]),
            ("AC|BD", vec!["3300", "0033", "3003", "0330"]),
        ] {
            let cut = Bipartition::parse(cut_name, 4).unwrap();
            let graph = build_graph(&set, Some(cut)).unwrap();
            assert_eq!(graph.edge_count(), 4, "wrong edge count for {cut_name}");
            let neighbors: Vec<String> = graph
                .neighbors(7)
                .iter()
                .map(|&i| graph.vertices()[i].to_string())
                .collect();
            let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
            expected.sort();
            let mut got = neighbors.clone();
            got.sort();
            assert_eq!(got, expected, "wrong star for {cut_name}");
        }
    }

    #[test]
    fn ghz_independent_set_values() {
        let set = ghz_set();
        let weights: Vec<Rat> = [1, 1, 1, 1, 1, 1, 1, 4].iter().map(|&w| rat_int(w)).collect();
        let edgeless = build_graph(&set, None).unwrap();
        let (g0, chosen) = max_weight_independent(&edgeless, &weights).unwrap();
        assert_eq!(g0, rat_int(11));
        assert_eq!(chosen, vec![1; 8]);
        for cut in Bipartition::enumerate(4).unwrap() {
            let graph = build_graph(&set, Some(cut)).unwrap();
            let (g, _) = max_weight_independent(&graph, &weights).unwrap();
            assert_eq!(g, rat_int(7));
            // Two optimal branches exist: all seven Z operators, or three
            // Z operators plus the weight-4 vertex.
            let sets = maximal_independent_sets(&graph);
            assert_eq!(sets.len(), 2);
            let values: Vec<Rat> = sets.iter().map(|&m| mask_weight(m, &weights)).collect();
            assert!(values.iter().all(|v| *v == rat_int(7)));
        }
    }

    #[test]
    fn cluster_ab_cd_graph_matches_published_structure() {
        let set = ops(&["1103", "1130", "0033", "0311", "3011", "3300"]);
        let cut = Bipartition::parse("AB|CD", 4).unwrap();
        let graph = build_graph(&set, Some(cut)).unwrap();
        // 0033 and 3300 are isolated for this cut.
        assert_eq!(graph.degree(2), 0);
        assert_eq!(graph.degree(5), 0);
        let weights = vec![rat_int(1); 6];
        let (g, _) = max_weight_independent(&graph, &weights).unwrap();
        assert_eq!(g, rat_int(4));
    }

    #[test]
    fn maximal_sets_of_a_triangle() {
        // Pairwise globally anticommuting single-qubit operators.
        let set = ops(&["1", "2", "3"]);
        let graph = build_graph(&set, None).unwrap();
        assert_eq!(graph.edge_count(), 3);
        assert_eq!(maximal_independent_sets(&graph), vec![0b001, 0b010, 0b100]);
        let weights = vec![rat_int(1); 3];
        let (g, assignment) = max_weight_independent(&graph, &weights).unwrap();
        assert_eq!(g, rat_int(1));
        assert_eq!(assignment.iter().sum::<u8>(), 1);
    }

    #[test]
    fn weighted_choice_picks_heavier_vertex() {
        let set = ops(&["11", "22"]);
        let graph = build_graph(&set, None).unwrap();
        // σ₁σ₁ and σ₂σ₂ commute globally (two anticommuting sites).
        assert_eq!(graph.edge_count(), 0);
        let cut = Bipartition::parse("A|B", 2).unwrap();
        let cut_graph = build_graph(&set, Some(cut)).unwrap();
        assert_eq!(cut_graph.edge_count(), 1);
        let weights = vec![rat_int(2), rat_int(5)];
        let (g, assignment) = max_weight_independent(&cut_graph, &weights).unwrap();
        assert_eq!(g, rat_int(5));
        assert_eq!(assignment, vec![0, 1]);
    }

    #[test]
    fn rejects_mismatched_weights() {
        let graph = build_graph(&ops(&["1", "3"]), None).unwrap();
        assert!(max_weight_independent(&graph, &[rat_int(1)]).is_err());
    }
}
