//! Order constraints on hypothetical distance values.
//!
//! For a candidate stereotype list and an assignment σ of one stereotype per
//! nonempty set, the unknowns are the distance values d(F, S), one node per
//! (subset, stereotype) pair. Two kinds of constraints:
//!
//! * weak edge (F′,S′) → (F,S) whenever F′∩S′ ⊆ F∩S and S−F ⊆ S′−F′: the
//!   monotonicity law forces d(F,S) ≤ d(F′,S′). Edges point from the larger
//!   value to the smaller. The rule is transitive, so the edge set is its own
//!   closure.
//! * strict edge (F,S) → (F,σ(F)) for every S ≠ σ(F): σ(F) must be the
//!   unique minimum at F.
//!
//! A consistent partial order exists exactly when no strict edge has both
//! endpoints in one strongly connected component. Nodes cover the empty set
//! too; it carries no strict edges, so it never affects feasibility, but its
//! inclusion lets a feasible graph linearize into a total distance table that
//! itself satisfies the monotonicity law.

use crate::info::InfoSet;

/// A node per (subset mask, stereotype index); edges as described above.
/// Immutable once built.
pub struct ConstraintGraph {
    n_worlds: usize,
    stereotypes: Vec<InfoSet>,
    /// σ by mask; entry 0 unused.
    assignment: Vec<usize>,
    shape: GraphShape,
}

/// Distance levels realizing a feasible graph: `level[node]` with
/// node = mask * k + s. Along every weak edge the level is non-increasing
/// and along every strict edge strictly decreasing.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub levels: Vec<u64>,
}

/// A strict edge trapped in a cycle: at `f`, the rival stereotype cannot be
/// made strictly farther than the assigned one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictCycle {
    pub f: InfoSet,
    pub assigned: usize,
    pub rival: usize,
}

impl ConstraintGraph {
    /// `assignment[mask]` names the stereotype σ(F) for each nonempty mask.
    pub fn build(n_worlds: usize, stereotypes: &[InfoSet], assignment: &[usize]) -> ConstraintGraph {
        assert_eq!(assignment.len(), 1usize << n_worlds);
        let shape = GraphShape::build(n_worlds, stereotypes);
        ConstraintGraph {
            n_worlds,
            stereotypes: stereotypes.to_vec(),
            assignment: assignment.to_vec(),
            shape,
        }
    }

    pub fn node_count(&self) -> usize {
        self.shape.node_count()
    }

    /// Canonically ordered weak edges as (source, target) node indices.
    pub fn weak_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..self.node_count() {
            for &v in &self.shape.weak[u] {
                edges.push((u, v as usize));
            }
        }
        edges
    }

    /// Canonically ordered strict edges as (source, target) node indices.
    pub fn strict_edges(&self) -> Vec<(usize, usize)> {
        let k = self.stereotypes.len();
        let mut edges = Vec::new();
        for mask in 1..(1u64 << self.n_worlds) {
            let sigma = self.assignment[mask as usize];
            for s in 0..k {
                if s != sigma {
                    edges.push((mask as usize * k + s, mask as usize * k + sigma));
                }
            }
        }
        edges
    }

    /// Feasibility: either distance levels realizing every constraint, or the
    /// first strict edge (scanning masks then stereotypes) stuck in a cycle.
    pub fn feasibility(&self) -> Result<Linearization, StrictCycle> {
        self.shape.feasibility(&self.assignment)
    }
}

/// The σ-independent part of the graph: nodes and weak edges. Search code
/// reuses one shape across every assignment for a stereotype list.
pub(crate) struct GraphShape {
    n_worlds: usize,
    k: usize,
    /// Weak out-neighbours per node; node = mask * k + s.
    weak: Vec<Vec<u32>>,
    /// Nodes + weak edges + strict edges: the elementary cost of one
    /// feasibility run, used for budget accounting.
    pub cost_per_run: u64,
}

impl GraphShape {
    pub fn build(n_worlds: usize, stereotypes: &[InfoSet]) -> GraphShape {
        let k = stereotypes.len();
        assert!(k > 0, "a constraint graph needs at least one stereotype");
        let masks = 1usize << n_worlds;
        let node_count = masks * k;
        // per-node intersection and leftover masks drive the edge rule
        let mut inter = vec![0u64; node_count];
        let mut diff = vec![0u64; node_count];
        for mask in 0..masks {
            let f = InfoSet::from_mask(mask as u64);
            for (s, extent) in stereotypes.iter().enumerate() {
                inter[mask * k + s] = (f & *extent).mask();
                diff[mask * k + s] = (*extent - f).mask();
            }
        }
        let mut weak: Vec<Vec<u32>> = vec![Vec::new(); node_count];
        let mut weak_count = 0u64;
        for u in 0..node_count {
            for v in 0..node_count {
                if u == v {
                    continue;
                }
                // u = (F', S'), v = (F, S): d(v) ≤ d(u) when
                // F'∩S' ⊆ F∩S and S−F ⊆ S'−F'
                if inter[u] & !inter[v] == 0 && diff[v] & !diff[u] == 0 {
                    weak[u].push(v as u32);
                    weak_count += 1;
                }
            }
        }
        let strict_count = (masks as u64 - 1) * (k as u64 - 1);
        GraphShape {
            n_worlds,
            k,
            weak,
            cost_per_run: node_count as u64 + weak_count + strict_count,
        }
    }

    pub fn node_count(&self) -> usize {
        (1usize << self.n_worlds) * self.k
    }

    fn strict_target(&self, node: usize, assignment: &[usize]) -> Option<usize> {
        let mask = node / self.k;
        let s = node % self.k;
        if mask == 0 {
            return None;
        }
        let sigma = assignment[mask];
        if s == sigma {
            None
        } else {
            Some(mask * self.k + sigma)
        }
    }

    pub fn feasibility(&self, assignment: &[usize]) -> Result<Linearization, StrictCycle> {
        let component = self.tarjan(assignment);
        // components are emitted sinks-first, so the emission index orders
        // values ascending; a strict edge inside one component is the only
        // way to block a consistent order
        for mask in 1..(1usize << self.n_worlds) {
            let sigma = assignment[mask];
            let target = mask * self.k + sigma;
            for s in 0..self.k {
                if s != sigma && component[mask * self.k + s] == component[target] {
                    return Err(StrictCycle {
                        f: InfoSet::from_mask(mask as u64),
                        assigned: sigma,
                        rival: s,
                    });
                }
            }
        }
        let levels = component.iter().map(|&c| c as u64).collect();
        Ok(Linearization { levels })
    }

    /// Iterative Tarjan; returns the component emission index per node
    /// (components emitted in reverse topological order).
    fn tarjan(&self, assignment: &[usize]) -> Vec<u32> {
        let n = self.node_count();
        const UNSET: u32 = u32::MAX;
        let mut index = vec![UNSET; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut component = vec![UNSET; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut next_index = 0u32;
        let mut next_component = 0u32;
        // frames: (node, next out-edge position); positions beyond the weak
        // list index the single strict edge
        let mut frames: Vec<(u32, u32)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSET {
                continue;
            }
            frames.push((root as u32, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root as u32);
            on_stack[root] = true;

            while let Some(&(node, edge_pos)) = frames.last() {
                let u = node as usize;
                let weak_degree = self.weak[u].len() as u32;
                if edge_pos <= weak_degree {
                    frames.last_mut().expect("frame exists").1 += 1;
                    let successor = if edge_pos < weak_degree {
                        Some(self.weak[u][edge_pos as usize] as usize)
                    } else {
                        self.strict_target(u, assignment)
                    };
                    if let Some(v) = successor {
                        if index[v] == UNSET {
                            index[v] = next_index;
                            low[v] = next_index;
                            next_index += 1;
                            stack.push(v as u32);
                            on_stack[v] = true;
                            frames.push((v as u32, 0));
                        } else if on_stack[v] {
                            low[u] = low[u].min(index[v]);
                        }
                    }
                    continue;
                }
                // all edges done: close the frame
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    let p = parent as usize;
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().expect("scc stack underflow") as usize;
                        on_stack[w] = false;
                        component[w] = next_component;
                        if w == u {
                            break;
                        }
                    }
                    next_component += 1;
                }
            }
        }
        component
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singletons(n: usize) -> Vec<InfoSet> {
        (0..n).map(InfoSet::singleton).collect()
    }

    #[test]
    fn min_rank_assignment_is_feasible() {
        // two worlds, stereotypes {w0} and {w1}, σ picks the singleton of the
        // least world: realized by a rank distance, so it must be feasible
        let stereotypes = singletons(2);
        let assignment = vec![usize::MAX, 0, 1, 0];
        let graph = ConstraintGraph::build(2, &stereotypes, &assignment);
        let lin = graph.feasibility().expect("feasible");
        let k = stereotypes.len();
        // strict minimality at every nonempty mask
        for (mask, &sigma) in assignment.iter().enumerate().skip(1) {
            for s in 0..k {
                if s != sigma {
                    assert!(
                        lin.levels[mask * k + sigma] < lin.levels[mask * k + s],
                        "mask {}",
                        mask
                    );
                }
            }
        }
    }

    #[test]
    fn full_extent_shadowing_is_infeasible() {
        // stereotypes {w0} and W: at F = W the weak rule forces
        // d(W, W) ≤ d(W, {w0}), so σ(W) = {w0} cannot be strictly minimal
        let stereotypes = vec![InfoSet::singleton(0), InfoSet::full(2)];
        let assignment = vec![usize::MAX, 0, usize::MAX, 0];
        // σ({w1}) is irrelevant; give it the full stereotype
        let assignment = {
            let mut a = assignment;
            a[2] = 1;
            a
        };
        let graph = ConstraintGraph::build(2, &stereotypes, &assignment);
        let cycle = graph.feasibility().unwrap_err();
        assert_eq!(cycle.f, InfoSet::full(2));
        assert_eq!(cycle.assigned, 0);
        assert_eq!(cycle.rival, 1);
    }

    #[test]
    fn weak_edges_include_the_self_intersection_rule() {
        // d(F, F-as-stereotype) is weakly below d(F, S) for every S
        let stereotypes = vec![InfoSet::from_mask(0b11), InfoSet::from_mask(0b01)];
        let assignment = vec![usize::MAX, 1, 0, 0];
        let graph = ConstraintGraph::build(2, &stereotypes, &assignment);
        let k = 2;
        let from = 0b11 * k + 1; // (W, {w0})
        let to = 0b11 * k; // (W, W)
        assert!(graph.weak_edges().contains(&(from, to)));
    }

    #[test]
    fn levels_respect_every_edge() {
        let stereotypes = vec![
            InfoSet::from_mask(0b011),
            InfoSet::from_mask(0b100),
            InfoSet::from_mask(0b110),
        ];
        // arbitrary consistent-looking σ: always pick a stereotype meeting F
        let mut assignment = vec![usize::MAX; 8];
        for mask in 1u64..8 {
            let f = InfoSet::from_mask(mask);
            assignment[mask as usize] = stereotypes
                .iter()
                .position(|s| s.intersects(&f))
                .unwrap();
        }
        let graph = ConstraintGraph::build(3, &stereotypes, &assignment);
        if let Ok(lin) = graph.feasibility() {
            for (u, v) in graph.weak_edges() {
                assert!(lin.levels[v] <= lin.levels[u]);
            }
            for (u, v) in graph.strict_edges() {
                assert!(lin.levels[v] < lin.levels[u]);
            }
        }
    }
}
