//! Classical graph machinery over arenas: SCC decomposition, reachability,
//! simple-cycle enumeration, maximum/minimum mean cycle, lasso payoffs.

use std::collections::HashSet;

use num_traits::Zero;

use crate::arena::{Arena, Lasso, VertexId};
use crate::error::{Error, Result};
use crate::rational::{pow_q, Q};

/// SCC decomposition with a condensation. Components are ordered by their
/// minimal vertex; vertices inside a component are sorted.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    pub components: Vec<Vec<VertexId>>,
    pub component_of: Vec<usize>,
    /// Deduplicated condensation edges (component -> component), acyclic.
    pub condensation: Vec<(usize, usize)>,
}

impl SccDecomposition {
    /// Components that contain at least one edge (a cycle lives there).
    pub fn nontrivial(&self, arena: &Arena) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&c| self.component_has_cycle(arena, c))
            .collect()
    }

    pub fn component_has_cycle(&self, arena: &Arena, c: usize) -> bool {
        let comp = &self.components[c];
        if comp.len() > 1 {
            return true;
        }
        let v = comp[0];
        arena.successors(v).any(|s| s == v)
    }
}

/// Iterative Tarjan; recursion-free so that extended arenas with tens of
/// thousands of states do not overflow the stack.
pub fn scc_decompose(arena: &Arena) -> SccDecomposition {
    let n = arena.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut next_index = 0usize;
    let mut raw_components: Vec<Vec<VertexId>> = Vec::new();

    // frames: (vertex, next successor position)
    let mut call: Vec<(VertexId, usize)> = Vec::new();
    for root in arena.vertices() {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < arena.out_edges(v).len() {
                let e = arena.out_edges(v)[*pos];
                *pos += 1;
                let w = arena.edge(e).dst;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    raw_components.push(comp);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..raw_components.len()).collect();
    order.sort_by_key(|&c| raw_components[c][0]);
    let components: Vec<Vec<VertexId>> = order.iter().map(|&c| raw_components[c].clone()).collect();

    let mut component_of = vec![0usize; n];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }
    let mut condensation: Vec<(usize, usize)> = arena
        .edges()
        .iter()
        .map(|e| (component_of[e.src], component_of[e.dst]))
        .filter(|(a, b)| a != b)
        .collect();
    condensation.sort_unstable();
    condensation.dedup();

    SccDecomposition { components, component_of, condensation }
}

/// Vertices reachable from `start` (including it).
pub fn reachable_from(arena: &Arena, start: VertexId) -> Vec<bool> {
    let mut seen = vec![false; arena.vertex_count()];
    let mut queue = vec![start];
    seen[start] = true;
    while let Some(v) = queue.pop() {
        for s in arena.successors(v) {
            if !seen[s] {
                seen[s] = true;
                queue.push(s);
            }
        }
    }
    seen
}

/// Shortest path (by edge count) from `start` to any vertex of `targets`,
/// moving only through vertices allowed by `allowed`. Returns the vertex
/// sequence including both endpoints. Deterministic: BFS, successors in
/// declaration order.
pub fn shortest_path_within(
    arena: &Arena,
    start: VertexId,
    targets: &HashSet<VertexId>,
    allowed: &dyn Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    if !allowed(start) {
        return None;
    }
    if targets.contains(&start) {
        return Some(vec![start]);
    }
    let n = arena.vertex_count();
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for s in arena.successors(v) {
            if seen[s] || !allowed(s) {
                continue;
            }
            seen[s] = true;
            pred[s] = v;
            if targets.contains(&s) {
                let mut path = vec![s];
                let mut cur = s;
                while cur != start {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(s);
        }
    }
    None
}

/// A simple cycle together with its mean-payoff coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWithMean {
    /// Canonical rotation: minimal vertex first.
    pub vertices: Vec<VertexId>,
    pub mean: (Q, Q),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleList {
    pub cycles: Vec<CycleWithMean>,
}

/// Mean-payoff coordinate of a cycle given as a vertex sequence.
pub fn cycle_mean(arena: &Arena, cycle: &[VertexId]) -> (Q, Q) {
    let len = cycle.len();
    let mut w0 = Q::zero();
    let mut w1 = Q::zero();
    for i in 0..len {
        let e = arena
            .edge_between(cycle[i], cycle[(i + 1) % len])
            .expect("cycle step must be an edge");
        w0 += &e.w0;
        w1 += &e.w1;
    }
    let l = crate::rational::qi(len as i64);
    (w0 / &l, w1 / &l)
}

fn canonical_rotation(cycle: &[VertexId]) -> Vec<VertexId> {
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[min_pos..]);
    out.extend_from_slice(&cycle[..min_pos]);
    out
}

/// Johnson-style enumeration of all simple cycles whose vertices lie in
/// `scope`. Each cycle is reported once, rotated so its minimal vertex comes
/// first; the list is sorted lexicographically. Fails when more than
/// `max_cycles` cycles exist.
pub fn enumerate_simple_cycles(
    arena: &Arena,
    scope: &[VertexId],
    max_cycles: usize,
) -> Result<CycleList> {
    let in_scope: HashSet<VertexId> = scope.iter().copied().collect();
    let n = arena.vertex_count();
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();

    let mut order: Vec<VertexId> = scope.to_vec();
    order.sort_unstable();

    for &start in &order {
        // Blocked-set search restricted to vertices >= start inside the scope.
        let mut blocked = vec![false; n];
        let mut block_list: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        blocked[start] = true;

        let neighbors = |v: VertexId| -> Vec<VertexId> {
            arena
                .successors(v)
                .filter(|s| in_scope.contains(s) && *s >= start)
                .collect()
        };

        fn unblock(v: VertexId, blocked: &mut [bool], block_list: &mut [Vec<VertexId>]) {
            let mut todo = vec![v];
            while let Some(u) = todo.pop() {
                blocked[u] = false;
                for w in std::mem::take(&mut block_list[u]) {
                    if blocked[w] {
                        todo.push(w);
                    }
                }
            }
        }

        let mut path: Vec<VertexId> = vec![start];
        let mut closed: Vec<bool> = vec![false; n];
        let mut stack: Vec<(VertexId, Vec<VertexId>)> = vec![(start, neighbors(start))];
        while let Some((v, succs)) = stack.last_mut() {
            let v = *v;
            if let Some(next) = succs.pop() {
                if next == start {
                    if cycles.len() >= max_cycles {
                        return Err(Error::resource(
                            "enumerating simple cycles",
                            cycles.len() as u128 + 1,
                            max_cycles as u128,
                        ));
                    }
                    cycles.push(path.clone());
                    for &u in path.iter() {
                        closed[u] = true;
                    }
                } else if !blocked[next] {
                    path.push(next);
                    blocked[next] = true;
                    closed[next] = false;
                    stack.push((next, neighbors(next)));
                }
                continue;
            }
            if closed[v] {
                unblock(v, &mut blocked, &mut block_list);
            } else {
                for w in neighbors(v) {
                    if !block_list[w].contains(&v) {
                        block_list[w].push(v);
                    }
                }
            }
            stack.pop();
            path.pop();
        }
    }

    let mut canonical: Vec<Vec<VertexId>> = cycles.iter().map(|c| canonical_rotation(c)).collect();
    canonical.sort();
    canonical.dedup();
    let list = canonical
        .into_iter()
        .map(|vertices| {
            let mean = cycle_mean(arena, &vertices);
            CycleWithMean { vertices, mean }
        })
        .collect();
    Ok(CycleList { cycles: list })
}

/// Karp's maximum-mean-cycle over the subgraph induced by `scope`, in the
/// given weight dimension. Every vertex of `scope` must keep a successor
/// inside `scope`. Returns the optimum and a cycle attaining it, as a lasso
/// with empty prefix.
pub fn max_mean_cycle(arena: &Arena, dim: usize, scope: &[VertexId]) -> (Q, Lasso) {
    let in_scope: HashSet<VertexId> = scope.iter().copied().collect();
    for &v in scope {
        assert!(
            arena.successors(v).any(|s| in_scope.contains(&s)),
            "max_mean_cycle scope must keep a successor for every vertex"
        );
    }

    // Cycles live inside SCCs of the induced subgraph; run Karp per SCC.
    let sub_sccs = induced_sccs(arena, &in_scope);
    let mut best: Option<(Q, Vec<VertexId>)> = None;
    for comp in sub_sccs {
        if comp.len() == 1 {
            let v = comp[0];
            if !arena.successors(v).any(|s| s == v) {
                continue;
            }
        }
        if let Some((value, cycle)) = karp_on_scc(arena, dim, &comp) {
            let better = match &best {
                None => true,
                Some((b, c)) => value > *b || (value == *b && cycle < *c),
            };
            if better {
                best = Some((value, cycle));
            }
        }
    }
    let (value, cycle) = best.expect("scope contains no cycle");
    (value, Lasso::new(Vec::new(), cycle))
}

/// Minimum mean cycle; dual of `max_mean_cycle`.
pub fn min_mean_cycle(arena: &Arena, dim: usize, scope: &[VertexId]) -> (Q, Lasso) {
    let negated = negate_dim(arena, dim);
    let (value, lasso) = max_mean_cycle(&negated, dim, scope);
    (-value, lasso)
}

fn negate_dim(arena: &Arena, dim: usize) -> Arena {
    let mut builder = Arena::builder();
    for v in arena.vertices() {
        builder.add_vertex(arena.name(v), arena.owner(v)).unwrap();
    }
    for e in arena.edges() {
        let (w0, w1) = match dim {
            0 => (-e.w0.clone(), e.w1.clone()),
            _ => (e.w0.clone(), -e.w1.clone()),
        };
        builder
            .add_edge(arena.name(e.src), arena.name(e.dst), w0, w1)
            .unwrap();
    }
    builder.build().unwrap()
}

fn induced_sccs(arena: &Arena, in_scope: &HashSet<VertexId>) -> Vec<Vec<VertexId>> {
    // Tarjan over the induced subgraph, reusing the arena-level routine on a
    // filtered adjacency is simpler done directly here.
    let scope: Vec<VertexId> = {
        let mut v: Vec<_> = in_scope.iter().copied().collect();
        v.sort_unstable();
        v
    };
    let pos: std::collections::HashMap<VertexId, usize> =
        scope.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = scope.len();
    let adj: Vec<Vec<usize>> = scope
        .iter()
        .map(|&v| {
            arena
                .successors(v)
                .filter_map(|s| pos.get(&s).copied())
                .collect()
        })
        .collect();

    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut p)) = call.last_mut() {
            if *p < adj[v].len() {
                let w = adj[v][*p];
                *p += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(scope[w]);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Karp on one strongly connected component. Returns None for a singleton
/// without self-loop.
fn karp_on_scc(arena: &Arena, dim: usize, comp: &[VertexId]) -> Option<(Q, Vec<VertexId>)> {
    let in_comp: HashSet<VertexId> = comp.iter().copied().collect();
    if comp.len() == 1 {
        let v = comp[0];
        let e = arena.edge_between(v, v)?;
        return Some((e.weight(dim).clone(), vec![v]));
    }
    let pos: std::collections::HashMap<VertexId, usize> =
        comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = comp.len();
    // Incoming edges within the component, per local index.
    let mut incoming: Vec<Vec<(usize, Q)>> = vec![Vec::new(); n];
    for &v in comp {
        for &e in arena.out_edges(v) {
            let edge = arena.edge(e);
            if in_comp.contains(&edge.dst) {
                incoming[pos[&edge.dst]].push((pos[&v], edge.weight(dim).clone()));
            }
        }
    }

    let source = 0usize;
    // dist[k][v] = max weight of a k-edge walk source -> v, pred[k][v] = predecessor.
    let mut dist: Vec<Vec<Option<Q>>> = vec![vec![None; n]; n + 1];
    let mut pred: Vec<Vec<usize>> = vec![vec![usize::MAX; n]; n + 1];
    dist[0][source] = Some(Q::zero());
    for k in 1..=n {
        for v in 0..n {
            for &(u, ref w) in &incoming[v] {
                if let Some(du) = &dist[k - 1][u] {
                    let cand = du + w;
                    let better = match &dist[k][v] {
                        None => true,
                        Some(cur) => cand > *cur,
                    };
                    if better {
                        dist[k][v] = Some(cand);
                        pred[k][v] = u;
                    }
                }
            }
        }
    }

    // value(v) = min over k < n with both walks defined of (D[n][v]-D[k][v])/(n-k);
    // the maximum cycle mean is the max of value(v) over v with D[n][v] defined.
    let mut best: Option<(Q, usize)> = None;
    for v in 0..n {
        let dn = match &dist[n][v] {
            Some(d) => d,
            None => continue,
        };
        let mut vmin: Option<Q> = None;
        for (k, dk_opt) in dist.iter().enumerate().take(n) {
            if let Some(dk) = &dk_opt[v] {
                let ratio = (dn - dk) / crate::rational::qi((n - k) as i64);
                if vmin.as_ref().is_none_or(|m| ratio < *m) {
                    vmin = Some(ratio);
                }
            }
        }
        if let Some(val) = vmin {
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                best = Some((val, v));
            }
        }
    }
    let (value, v_star) = best?;

    // Any cycle on the critical n-edge walk to v_star has mean exactly the
    // optimum; walk predecessors back and cut at the first repeat.
    let mut walk = vec![v_star];
    let mut cur = v_star;
    for k in (1..=n).rev() {
        cur = pred[k][cur];
        walk.push(cur);
    }
    walk.reverse();
    let mut seen_at: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut cycle_local: Option<Vec<usize>> = None;
    for (i, &v) in walk.iter().enumerate() {
        if let Some(&j) = seen_at.get(&v) {
            cycle_local = Some(walk[j..i].to_vec());
            break;
        }
        seen_at.insert(v, i);
    }
    let cycle_local = cycle_local.expect("n-edge walk repeats a vertex");
    let cycle: Vec<VertexId> = canonical_rotation(
        &cycle_local.iter().map(|&i| comp[i]).collect::<Vec<_>>(),
    );
    #[cfg(debug_assertions)]
    {
        let m = cycle_mean(arena, &cycle);
        let attained = if dim == 0 { m.0 } else { m.1 };
        debug_assert_eq!(attained, value, "critical-walk cycle must attain the optimum");
    }
    Some((value, cycle))
}

/// Payoff semantics for `payoff_of_lasso`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayoffKind {
    /// liminf mean payoff; for an ultimately periodic play this is the cycle
    /// average in each dimension.
    MeanPayoff,
    /// Discounted sum with factor λ in (0,1).
    DiscountedSum(Q),
}

/// Exact payoff pair of a lasso.
pub fn payoff_of_lasso(arena: &Arena, lasso: &Lasso, kind: &PayoffKind) -> (Q, Q) {
    match kind {
        PayoffKind::MeanPayoff => cycle_mean(arena, &lasso.cycle),
        PayoffKind::DiscountedSum(lambda) => {
            let one = crate::rational::qi(1);
            assert!(
                *lambda > Q::zero() && *lambda < one,
                "discount factor must lie in (0,1)"
            );
            let mut ds0 = Q::zero();
            let mut ds1 = Q::zero();
            let mut factor = one.clone();
            // Prefix edges, including the step into the cycle.
            let mut seq: Vec<VertexId> = lasso.prefix.clone();
            seq.push(lasso.cycle[0]);
            for w in seq.windows(2) {
                let e = arena.edge_between(w[0], w[1]).expect("validated lasso");
                ds0 += &factor * &e.w0;
                ds1 += &factor * &e.w1;
                factor *= lambda;
            }
            // factor is now λ^{|prefix|}; one pass of the cycle, then the
            // closed-form geometric tail.
            let mut c0 = Q::zero();
            let mut c1 = Q::zero();
            let mut cf = one.clone();
            let len = lasso.cycle.len();
            for i in 0..len {
                let e = arena
                    .edge_between(lasso.cycle[i], lasso.cycle[(i + 1) % len])
                    .expect("validated lasso");
                c0 += &cf * &e.w0;
                c1 += &cf * &e.w1;
                cf *= lambda;
            }
            let denom = &one - &pow_q(lambda, len);
            ds0 += &factor * &(c0 / &denom);
            ds1 += &factor * &(c1 / &denom);
            (ds0, ds1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::rational::{q, qi};

    fn names(arena: &Arena, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| arena.name(v).to_string()).collect()
    }

    #[test]
    fn scc_of_unattainable_game() {
        let a = unattainable_game();
        let scc = scc_decompose(&a);
        let comps: Vec<Vec<String>> = scc.components.iter().map(|c| names(&a, c)).collect();
        assert_eq!(comps, vec![vec!["v0", "v1"], vec!["v2"]]);
        assert_eq!(scc.condensation, vec![(0, 1)]);
    }

    #[test]
    fn scc_of_self_loop() {
        let a = self_loop(2, 3);
        let scc = scc_decompose(&a);
        assert_eq!(scc.components.len(), 1);
        assert!(scc.component_has_cycle(&a, 0));
    }

    #[test]
    fn acyclic_chain_gives_singletons() {
        let a = Arena::parse(
            "player0: a b c\nedge: a b 0 0\nedge: b c 0 0\nedge: c c 0 0\n",
        )
        .unwrap();
        let scc = scc_decompose(&a);
        assert_eq!(scc.components.len(), 3);
        assert!(!scc.component_has_cycle(&a, 0));
        assert!(!scc.component_has_cycle(&a, 1));
        assert!(scc.component_has_cycle(&a, 2));
    }

    #[test]
    fn cycles_of_unattainable_game_core() {
        let a = unattainable_game();
        let v0 = a.vertex("v0").unwrap();
        let v1 = a.vertex("v1").unwrap();
        let list = enumerate_simple_cycles(&a, &[v0, v1], 1000).unwrap();
        assert_eq!(list.cycles.len(), 2);
        assert_eq!(list.cycles[0].vertices, vec![v0, v1]);
        assert_eq!(list.cycles[0].mean, (qi(1), qi(1)));
        assert_eq!(list.cycles[1].vertices, vec![v1]);
        assert_eq!(list.cycles[1].mean, (qi(0), qi(2)));
    }

    #[test]
    fn cycles_of_absorbing_vertex() {
        let a = unattainable_game();
        let v2 = a.vertex("v2").unwrap();
        let list = enumerate_simple_cycles(&a, &[v2], 1000).unwrap();
        assert_eq!(list.cycles.len(), 1);
        assert_eq!(list.cycles[0].mean, (qi(0), qi(1)));
    }

    #[test]
    fn zero_triangle_has_one_cycle() {
        let a = Arena::parse(
            "player0: x y z\nedge: x y 0 0\nedge: y z 0 0\nedge: z x 0 0\n",
        )
        .unwrap();
        let list = enumerate_simple_cycles(&a, &[0, 1, 2], 1000).unwrap();
        assert_eq!(list.cycles.len(), 1);
        assert_eq!(list.cycles[0].vertices, vec![0, 1, 2]);
        assert_eq!(list.cycles[0].mean, (qi(0), qi(0)));
    }

    #[test]
    fn cycle_cap_is_enforced() {
        let a = Arena::parse(
            "player0: a b\nedge: a a 0 0\nedge: a b 0 0\nedge: b a 0 0\nedge: b b 0 0\n",
        )
        .unwrap();
        let err = enumerate_simple_cycles(&a, &[0, 1], 2).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn karp_on_no_best_response_core() {
        // Scope {2,3}, dimension 1: the self-loop at 3 pays 2.
        let a = no_best_response_game();
        let v2 = a.vertex("2").unwrap();
        let v3 = a.vertex("3").unwrap();
        let (value, lasso) = max_mean_cycle(&a, 1, &[v2, v3]);
        assert_eq!(value, qi(2));
        assert_eq!(lasso.cycle, vec![v3]);
    }

    #[test]
    fn karp_trivial_self_loop() {
        let a = self_loop(2, 3);
        let (value, _) = max_mean_cycle(&a, 0, &[0]);
        assert_eq!(value, qi(2));
    }

    #[test]
    fn karp_picks_better_of_two_loops() {
        let a = Arena::parse(
            "player0: a b\nedge: a a 1/2 0\nedge: a b 0 0\nedge: b b 1/3 0\nedge: b a 0 0\n",
        )
        .unwrap();
        let (value, _) = max_mean_cycle(&a, 0, &[0, 1]);
        assert_eq!(value, q(1, 2));
        let (lo, _) = min_mean_cycle(&a, 0, &[0, 1]);
        assert_eq!(lo, qi(0));
    }

    #[test]
    fn lasso_payoffs_match_hand_computation() {
        let a = unattainable_game();
        let v0 = a.vertex("v0").unwrap();
        let v1 = a.vertex("v1").unwrap();
        let v2 = a.vertex("v2").unwrap();
        let mp = PayoffKind::MeanPayoff;
        assert_eq!(
            payoff_of_lasso(&a, &Lasso::new(vec![], vec![v0, v1]), &mp),
            (qi(1), qi(1))
        );
        assert_eq!(
            payoff_of_lasso(&a, &Lasso::new(vec![v0], vec![v2]), &mp),
            (qi(0), qi(1))
        );
    }

    #[test]
    fn discounted_self_loop_geometric_sum() {
        let a = self_loop(2, 3);
        let kind = PayoffKind::DiscountedSum(q(1, 2));
        let lasso = Lasso::new(vec![], vec![0]);
        assert_eq!(payoff_of_lasso(&a, &lasso, &kind), (qi(4), qi(6)));
    }

    #[test]
    fn karp_agrees_with_cycle_enumeration() {
        // Property fixed here on a handful of structured arenas; the random
        // version lives in the integration suite.
        let arenas = [unattainable_game(), no_best_response_game()];
        for a in &arenas {
            let scc = scc_decompose(a);
            for c in scc.nontrivial(a) {
                let comp = scc.components[c].clone();
                for dim in 0..2 {
                    let (karp, lasso) = max_mean_cycle(a, dim, &comp);
                    let list = enumerate_simple_cycles(a, &comp, 10_000).unwrap();
                    let best = list
                        .cycles
                        .iter()
                        .map(|c| if dim == 0 { c.mean.0.clone() } else { c.mean.1.clone() })
                        .max()
                        .unwrap();
                    assert_eq!(karp, best);
                    let m = cycle_mean(a, &lasso.cycle);
                    assert_eq!(if dim == 0 { m.0 } else { m.1 }, karp);
                }
            }
        }
    }
}
