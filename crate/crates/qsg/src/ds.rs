//! Discounted-sum Stackelberg machinery: best responses against
//! finite-memory leader strategies, exact CSV/ASV evaluation by
//! best-response pruning, the horizon computation behind finite-memory
//! sufficiency, and the gap deciders for the CSV/ASV threshold promise
//! problems.

use num_traits::{One, Signed, Zero};

use crate::arena::{product_with_strategy, Arena, MealyStrategy, Player, VertexId};
use crate::error::{Budget, Error, Result};
use crate::rational::{pow_q, Q};
use crate::zerosum::{ds1_tail_strategies, solve_ds, Sense};

/// Discount configuration.
#[derive(Debug, Clone)]
pub struct DsConfig {
    pub lambda: Q,
}

impl DsConfig {
    pub fn new(lambda: Q) -> Result<DsConfig> {
        if lambda <= Q::zero() || lambda >= Q::one() {
            return Err(Error::invalid("discount factor must lie strictly between 0 and 1"));
        }
        Ok(DsConfig { lambda })
    }
}

/// Horizon data: the smallest `N` with `λ^N W/(1-λ) < ε/2`, and the state
/// count of the induced strategy shape (depth-N decision tree plus the two
/// memoryless tails; the count assumes binary branching and saturates).
#[derive(Debug, Clone)]
pub struct HorizonParams {
    pub epsilon: Q,
    pub n_steps: usize,
    pub memory_bound: u128,
}

/// Smallest `N` such that `λ^N * W / (1-λ) < ε/2`, by exact iteration.
pub fn compute_horizon(w: &Q, lambda: &Q, epsilon: &Q) -> Result<HorizonParams> {
    if !epsilon.is_positive() {
        return Err(Error::invalid("gap width must be positive"));
    }
    if lambda <= &Q::zero() || lambda >= &Q::one() {
        return Err(Error::invalid("discount factor must lie strictly between 0 and 1"));
    }
    let half_eps = epsilon / crate::rational::qi(2);
    let scale = w / (Q::one() - lambda);
    let mut power = Q::one();
    let mut n = 0usize;
    while &power * &scale >= half_eps {
        power *= lambda;
        n += 1;
    }
    let memory_bound = 2u128.checked_pow((n + 1).min(127) as u32).unwrap_or(u128::MAX).saturating_add(1);
    Ok(HorizonParams { epsilon: epsilon.clone(), n_steps: n, memory_bound })
}

/// Exact best response of Player 1 against a finite-memory Player-0
/// strategy: the optimal discounted sum of dimension 1 in the product, plus
/// a response strategy that is memoryless in the product (presented over
/// the arena with the leader's memory structure).
pub fn ds_best_response(
    arena: &Arena,
    lambda: &Q,
    strategy: &MealyStrategy,
    v: VertexId,
) -> Result<(Q, MealyStrategy)> {
    let product = product_with_strategy(arena, strategy, Player::P0)?;
    let sense: Vec<Sense> = product.arena.vertices().map(|_| Sense::Max).collect();
    let sol = solve_ds(&product.arena, lambda, 1, &sense);
    let value = sol.values[product.entry[v]].clone();

    // Response over the base arena: track the leader's memory, output the
    // optimal product choice at Player-1 vertices.
    let n = arena.vertex_count();
    let mut output = vec![vec![None; n]; strategy.n_states];
    for (pid, &(u, m)) in product.project.iter().enumerate() {
        if arena.owner(u) == Player::P1 {
            let edge = product.arena.edge(sol.choice[pid]);
            let (succ, _) = product.project[edge.dst];
            output[m][u] = Some(succ);
        }
    }
    // Pairs (u, m) that never occur in the product still need moves.
    for row in output.iter_mut() {
        for u in arena.vertices() {
            if arena.owner(u) == Player::P1 && row[u].is_none() {
                row[u] = Some(arena.edge(arena.out_edges(u)[0]).dst);
            }
        }
    }
    let response = MealyStrategy {
        player: Player::P1,
        n_states: strategy.n_states,
        init_state: strategy.init_state,
        update: strategy.update.clone(),
        output,
    };
    response.validate(arena)?;
    Ok((value, response))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMode {
    Csv,
    Asv,
}

/// Exact CSV (`mode = Csv`) or ASV (`mode = Asv`) of a finite-memory
/// Player-0 strategy from `v`: compute Player 1's optimal discounted values
/// on the product, delete the edges inconsistent with them, and optimize
/// Player 0's discounted sum over what survives (max for CSV, min for ASV).
pub fn evaluate_strategy(
    arena: &Arena,
    lambda: &Q,
    strategy: &MealyStrategy,
    v: VertexId,
    mode: GapMode,
) -> Result<Q> {
    let product = product_with_strategy(arena, strategy, Player::P0)?;
    let sense: Vec<Sense> = product.arena.vertices().map(|_| Sense::Max).collect();
    let sol = solve_ds(&product.arena, lambda, 1, &sense);
    // Keep edge (x,y) iff val(x) = w1(x,y) + λ val(y).
    let pruned = product
        .arena
        .with_edges(|e| sol.values[e.src] == &e.w1 + &(lambda * &sol.values[e.dst]))?;
    let opt = match mode {
        GapMode::Csv => Sense::Max,
        GapMode::Asv => Sense::Min,
    };
    let sense2: Vec<Sense> = pruned.vertices().map(|_| opt).collect();
    let sol2 = solve_ds(&pruned, lambda, 0, &sense2);
    Ok(sol2.values[product.entry[v]].clone())
}

pub fn evaluate_csv(arena: &Arena, lambda: &Q, s: &MealyStrategy, v: VertexId) -> Result<Q> {
    evaluate_strategy(arena, lambda, s, v, GapMode::Csv)
}

pub fn evaluate_asv(arena: &Arena, lambda: &Q, s: &MealyStrategy, v: VertexId) -> Result<Q> {
    evaluate_strategy(arena, lambda, s, v, GapMode::Asv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapAnswer {
    Yes,
    No,
}

/// Verdict of the gap decider. On Yes the witness strategy re-evaluates
/// strictly above the threshold (checked before answering).
#[derive(Debug, Clone)]
pub struct GapVerdict {
    pub answer: GapAnswer,
    pub witness: Option<MealyStrategy>,
    pub witness_value: Option<Q>,
    pub candidates_evaluated: u128,
}

/// Tail assignment at a depth-N leaf of a candidate strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    /// Minimize the adversary's payoff from here on.
    Punish,
    /// Cooperate with the adversary's payoff from here on.
    Cooperate,
}

/// One candidate strategy: a consistent depth-N decision tree. Branching
/// occurs only at Player-1 vertices; Player-0 vertices commit to one edge.
#[derive(Debug, Clone)]
enum Node {
    Leaf(Tail),
    P0 { edge: usize, child: Box<Node> },
    P1 { children: Vec<Node> },
}

/// Number of candidate strategies of the given depth, saturating.
fn count_candidates(arena: &Arena, v: VertexId, depth: usize) -> u128 {
    let n = arena.vertex_count();
    let mut memo: Vec<Vec<Option<u128>>> = vec![vec![None; depth + 1]; n];
    fn rec(arena: &Arena, memo: &mut Vec<Vec<Option<u128>>>, v: VertexId, k: usize) -> u128 {
        if let Some(c) = memo[v][k] {
            return c;
        }
        let c = if k == 0 {
            2
        } else if arena.owner(v) == Player::P0 {
            let mut total: u128 = 0;
            for &e in arena.out_edges(v) {
                total = total.saturating_add(rec(arena, memo, arena.edge(e).dst, k - 1));
            }
            total
        } else {
            let mut total: u128 = 1;
            for &e in arena.out_edges(v) {
                total = total.saturating_mul(rec(arena, memo, arena.edge(e).dst, k - 1));
            }
            total
        };
        memo[v][k] = Some(c);
        c
    }
    rec(arena, &mut memo, v, depth)
}

/// Enumerates candidate trees in deterministic order, stopping early when
/// the visitor returns true.
fn for_each_tree(
    arena: &Arena,
    v: VertexId,
    depth: usize,
    visit: &mut dyn FnMut(&Node) -> Result<bool>,
) -> Result<bool> {
    fn shapes(
        arena: &Arena,
        v: VertexId,
        depth: usize,
        f: &mut dyn FnMut(Node) -> Result<bool>,
    ) -> Result<bool> {
        if depth == 0 {
            for tail in [Tail::Punish, Tail::Cooperate] {
                if f(Node::Leaf(tail))? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if arena.owner(v) == Player::P0 {
            for &e in arena.out_edges(v) {
                let stop = shapes(arena, arena.edge(e).dst, depth - 1, &mut |child| {
                    f(Node::P0 { edge: e, child: Box::new(child) })
                })?;
                if stop {
                    return Ok(true);
                }
            }
            Ok(false)
        } else {
            // Cartesian product over the successors' subtree shapes.
            fn product(
                arena: &Arena,
                succs: &[VertexId],
                depth: usize,
                acc: &mut Vec<Node>,
                f: &mut dyn FnMut(&mut Vec<Node>) -> Result<bool>,
            ) -> Result<bool> {
                if acc.len() == succs.len() {
                    return f(acc);
                }
                let v = succs[acc.len()];
                shapes(arena, v, depth, &mut |child| {
                    acc.push(child);
                    let stop = product(arena, succs, depth, acc, f)?;
                    acc.pop();
                    Ok(stop)
                })
            }
            let succs: Vec<VertexId> = arena.successors(v).collect();
            let mut acc = Vec::with_capacity(succs.len());
            product(arena, &succs, depth - 1, &mut acc, &mut |children| {
                f(Node::P1 { children: children.clone() })
            })
        }
    }
    shapes(arena, v, depth, &mut |node| visit(&node))
}

/// Turns a candidate tree into a Mealy machine: one state per internal tree
/// node plus the two tail states; depth-N leaves enter their assigned tail.
fn tree_to_mealy(
    arena: &Arena,
    start: VertexId,
    root: &Node,
    tail_min: &MealyStrategy,
    tail_max: &MealyStrategy,
) -> MealyStrategy {
    let n = arena.vertex_count();
    struct Flat<'a> {
        vertex: VertexId,
        node: &'a Node,
    }
    fn collect<'a>(node: &'a Node, vertex: VertexId, arena: &Arena, flat: &mut Vec<Flat<'a>>) {
        match node {
            Node::Leaf(_) => {}
            Node::P0 { edge, child } => {
                flat.push(Flat { vertex, node });
                collect(child, arena.edge(*edge).dst, arena, flat);
            }
            Node::P1 { children } => {
                flat.push(Flat { vertex, node });
                for (i, succ) in arena.successors(vertex).enumerate() {
                    collect(&children[i], succ, arena, flat);
                }
            }
        }
    }
    let mut flat: Vec<Flat> = Vec::new();
    collect(root, start, arena, &mut flat);

    let internal = flat.len();
    let punish_state = internal;
    let coop_state = internal + 1;
    let n_states = internal + 2;

    let index_of = |node: &Node| -> usize {
        flat.iter().position(|f| std::ptr::eq(f.node, node)).expect("internal node registered")
    };
    let state_of_child = |child: &Node| -> usize {
        match child {
            Node::Leaf(Tail::Punish) => punish_state,
            Node::Leaf(Tail::Cooperate) => coop_state,
            other => index_of(other),
        }
    };

    let punish_out = |u: VertexId| tail_min.output[0][u];
    let coop_out = |u: VertexId| tail_max.output[0][u];

    let mut update = vec![vec![punish_state; n]; n_states];
    let mut output: Vec<Vec<Option<VertexId>>> = vec![vec![None; n]; n_states];
    for (idx, f) in flat.iter().enumerate() {
        // Default outputs: the punishing tail (unreached state-vertex pairs).
        for u in arena.vertices() {
            if arena.owner(u) == Player::P0 {
                output[idx][u] = punish_out(u);
            }
        }
        match f.node {
            Node::P0 { edge, child } => {
                let succ = arena.edge(*edge).dst;
                output[idx][f.vertex] = Some(succ);
                update[idx][succ] = state_of_child(child);
            }
            Node::P1 { children } => {
                for (i, succ) in arena.successors(f.vertex).enumerate() {
                    update[idx][succ] = state_of_child(&children[i]);
                }
            }
            Node::Leaf(_) => unreachable!(),
        }
    }
    for u in arena.vertices() {
        update[punish_state][u] = punish_state;
        update[coop_state][u] = coop_state;
        if arena.owner(u) == Player::P0 {
            output[punish_state][u] = punish_out(u);
            output[coop_state][u] = coop_out(u);
        }
    }
    let init_state = match root {
        Node::Leaf(Tail::Punish) => punish_state,
        Node::Leaf(Tail::Cooperate) => coop_state,
        _ => 0,
    };
    MealyStrategy { player: Player::P0, n_states, init_state, update, output }
}

/// Decides the gap problem for the cooperative or adversarial Stackelberg
/// value: answers Yes whenever the true value exceeds `c + ε`, No whenever
/// it is below `c - ε`, and either answer in between.
///
/// The search enumerates exactly the finite-memory strategy shape that
/// suffices above the gap: a choice function on the depth-N unfolding (N
/// from `compute_horizon`) followed, per depth-N leaf, by one of the two
/// memoryless tails (cooperate with or punish the adversary's discounted
/// payoff). Each candidate is evaluated exactly; the first one exceeding
/// `c` is the witness.
pub fn gap_decide(
    arena: &Arena,
    lambda: &Q,
    v: VertexId,
    c: &Q,
    epsilon: &Q,
    mode: GapMode,
    budget: &Budget,
) -> Result<GapVerdict> {
    let horizon = compute_horizon(arena.max_abs_weight(), lambda, epsilon)?;
    let n = horizon.n_steps;
    let count = count_candidates(arena, v, n);
    if count > budget.max_gap_candidates {
        return Err(Error::resource(
            format!("enumerating gap candidates at horizon {n}"),
            count,
            budget.max_gap_candidates,
        ));
    }
    let (tail_min, tail_max) = ds1_tail_strategies(arena, lambda);

    let mut evaluated: u128 = 0;
    let mut witness: Option<(MealyStrategy, Q)> = None;
    for_each_tree(arena, v, n, &mut |tree| {
        let candidate = tree_to_mealy(arena, v, tree, &tail_min, &tail_max);
        let value = evaluate_strategy(arena, lambda, &candidate, v, mode)?;
        evaluated += 1;
        if value > *c {
            witness = Some((candidate, value));
            return Ok(true);
        }
        Ok(false)
    })?;

    match witness {
        Some((strategy, value)) => {
            // Self-check: the witness must re-evaluate above the threshold.
            let recheck = evaluate_strategy(arena, lambda, &strategy, v, mode)?;
            debug_assert!(recheck > *c);
            Ok(GapVerdict {
                answer: GapAnswer::Yes,
                witness: Some(strategy),
                witness_value: Some(value),
                candidates_evaluated: evaluated,
            })
        }
        None => Ok(GapVerdict {
            answer: GapAnswer::No,
            witness: None,
            witness_value: None,
            candidates_evaluated: evaluated,
        }),
    }
}

/// Truncated discounted pair of a play prefix; used by tests and oracles.
pub fn ds_of_prefix(arena: &Arena, lambda: &Q, prefix: &[VertexId]) -> (Q, Q) {
    let mut ds0 = Q::zero();
    let mut ds1 = Q::zero();
    let mut factor = Q::one();
    for w in prefix.windows(2) {
        let e = arena.edge_between(w[0], w[1]).expect("prefix step is an edge");
        ds0 += &factor * &e.w0;
        ds1 += &factor * &e.w1;
        factor *= lambda;
    }
    (ds0, ds1)
}

/// `λ^k W/(1-λ)`: the discounted tail bound after `k` steps.
pub fn tail_bound(w: &Q, lambda: &Q, k: usize) -> Q {
    pow_q(lambda, k) * w / (Q::one() - lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::self_loop;
    use crate::rational::{q, qi};
    use crate::reductions::{build_tds_reduction, TdsInstance};

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn horizon_examples() {
        // W=2, λ=1/2, ε=1: first N with 4/2^N < 1/2 is 4.
        let h = compute_horizon(&qi(2), &q(1, 2), &qi(1)).unwrap();
        assert_eq!(h.n_steps, 4);
        // W=1, λ=1/2, ε=2: 2/2^N < 1 first at N=2 (the inequality is strict).
        let h = compute_horizon(&qi(1), &q(1, 2), &qi(2)).unwrap();
        assert_eq!(h.n_steps, 2);
        // W=3, λ=9/10, ε=1/10: smallest N with (9/10)^N * 30 < 1/20.
        let h = compute_horizon(&qi(3), &q(9, 10), &q(1, 10)).unwrap();
        let lam = q(9, 10);
        let bound = |n: usize| pow_q(&lam, n) * qi(30);
        assert!(bound(h.n_steps) < q(1, 20));
        assert!(bound(h.n_steps - 1) >= q(1, 20));
    }

    #[test]
    fn horizon_invariant_holds() {
        let h = compute_horizon(&qi(2), &q(2, 3), &q(1, 7)).unwrap();
        assert!(tail_bound(&qi(2), &q(2, 3), h.n_steps) < q(1, 14));
    }

    fn tds_reference_instance() -> (Arena, VertexId) {
        let inst = TdsInstance { a: qi(0), b: qi(1), t: q(3, 2), lambda: q(2, 3) };
        build_tds_reduction(&inst).unwrap()
    }

    #[test]
    fn best_response_prefers_exit_against_all_b() {
        // Always choosing the b-successor makes the sequence worth -2 to
        // Player 1; the exit pays -1, so the best response exits.
        let (arena, v) = tds_reference_instance();
        let b = arena.vertex("b").unwrap();
        let choice: Vec<Option<VertexId>> = arena
            .vertices()
            .map(|u| {
                if arena.owner(u) == Player::P0 {
                    if arena.edge_between(u, b).is_some() {
                        Some(b)
                    } else {
                        Some(arena.edge(arena.out_edges(u)[0]).dst)
                    }
                } else {
                    None
                }
            })
            .collect();
        let s = MealyStrategy::memoryless(&arena, Player::P0, &choice).unwrap();
        let (value, response) = ds_best_response(&arena, &q(2, 3), &s, v).unwrap();
        assert_eq!(value, qi(-1));
        let z = arena.vertex("z").unwrap();
        assert_eq!(response.pick(response.init_state, v), Some(z));
    }

    #[test]
    fn best_response_on_self_loop() {
        let arena = self_loop(2, 3);
        let s = MealyStrategy::first_choice(&arena, Player::P0);
        let (value, _) = ds_best_response(&arena, &q(1, 2), &s, 0).unwrap();
        assert_eq!(value, qi(6));
    }

    #[test]
    fn evaluate_alternating_strategy_on_tds_game() {
        // Alternating b,a,b,a,... makes the sequence worth 9/5, so Player 1
        // prefers the exit and both CSV and ASV collapse to λt-1 = 0.
        let (arena, v) = tds_reference_instance();
        let s_v = arena.vertex("s").unwrap();
        let a_v = arena.vertex("a").unwrap();
        let b_v = arena.vertex("b").unwrap();
        let z_v = arena.vertex("z").unwrap();
        let n = arena.vertex_count();
        // Two memory states: 0 = "emit b next", 1 = "emit a next"; the
        // state flips when the emitted letter is observed.
        let mut update = vec![vec![0usize; n], vec![1usize; n]];
        update[0][b_v] = 1;
        update[1][a_v] = 0;
        let mut output = vec![vec![None; n]; 2];
        for u in [s_v, a_v, b_v] {
            output[0][u] = Some(b_v);
            output[1][u] = Some(a_v);
        }
        output[0][z_v] = Some(z_v);
        output[1][z_v] = Some(z_v);
        let s = MealyStrategy { player: Player::P0, n_states: 2, init_state: 0, update, output };
        s.validate(&arena).unwrap();
        let lambda = q(2, 3);
        assert_eq!(evaluate_csv(&arena, &lambda, &s, v).unwrap(), qi(0));
        assert_eq!(evaluate_asv(&arena, &lambda, &s, v).unwrap(), qi(0));
    }

    #[test]
    fn evaluate_on_self_loop() {
        let arena = self_loop(2, 3);
        let s = MealyStrategy::first_choice(&arena, Player::P0);
        let lambda = q(1, 2);
        assert_eq!(evaluate_csv(&arena, &lambda, &s, 0).unwrap(), qi(4));
        assert_eq!(evaluate_asv(&arena, &lambda, &s, 0).unwrap(), qi(4));
    }

    #[test]
    fn tie_case_separates_csv_from_asv() {
        // Player 1 has two best responses with different Player-0 payoffs.
        let arena = Arena::parse(
            "player1: u\nplayer0: a b\ninit: u\n\
             edge: u a 1 0\nedge: u b 0 0\nedge: a a 0 0\nedge: b b 0 0\n",
        )
        .unwrap();
        let u = arena.vertex("u").unwrap();
        let s = MealyStrategy::first_choice(&arena, Player::P0);
        let lambda = q(1, 2);
        let csv = evaluate_csv(&arena, &lambda, &s, u).unwrap();
        let asv = evaluate_asv(&arena, &lambda, &s, u).unwrap();
        assert_eq!(csv, qi(1));
        assert_eq!(asv, qi(0));
        assert!(asv < csv);
    }

    #[test]
    fn gap_on_self_loop() {
        let arena = self_loop(2, 3);
        let verdict =
            gap_decide(&arena, &q(1, 2), 0, &qi(3), &q(1, 2), GapMode::Asv, &budget()).unwrap();
        assert_eq!(verdict.answer, GapAnswer::Yes);
        assert_eq!(verdict.witness_value, Some(qi(4)));
    }

    #[test]
    fn gap_tds_reference_instance_yes_and_no() {
        let (arena, v) = tds_reference_instance();
        let lambda = q(2, 3);
        // CSV(v) = 1: Yes at c = 4/5 (1 > 9/10), No at c = 3/2 (1 < 7/5).
        let yes =
            gap_decide(&arena, &lambda, v, &q(4, 5), &q(1, 10), GapMode::Csv, &budget()).unwrap();
        assert_eq!(yes.answer, GapAnswer::Yes);
        let witness = yes.witness.unwrap();
        let value = evaluate_csv(&arena, &lambda, &witness, v).unwrap();
        assert!(value > q(4, 5));
        let no =
            gap_decide(&arena, &lambda, v, &q(3, 2), &q(1, 10), GapMode::Csv, &budget()).unwrap();
        assert_eq!(no.answer, GapAnswer::No);
        assert!(no.candidates_evaluated > 0);
    }

    #[test]
    fn gap_candidate_budget_is_reported() {
        let (arena, v) = tds_reference_instance();
        let mut tight = budget();
        tight.max_gap_candidates = 16;
        let err =
            gap_decide(&arena, &q(2, 3), v, &qi(0), &q(1, 10), GapMode::Csv, &tight).unwrap_err();
        match err {
            Error::Resource { needed, cap, .. } => {
                assert!(needed > cap);
                assert_eq!(cap, 16);
            }
            other => panic!("expected a resource error, got {other}"),
        }
    }

    #[test]
    fn candidate_count_matches_tree_shape() {
        let (arena, v) = tds_reference_instance();
        // From v: the exit branch is a chain (2), the s-branch doubles per
        // letter: g(v,3) = g(z,2) * g(s,2) = 2 * (2*(2*2)) = 16.
        assert_eq!(count_candidates(&arena, v, 3), 16);
    }

    #[test]
    fn asv_le_csv_on_candidates() {
        let (arena, v) = tds_reference_instance();
        let lambda = q(2, 3);
        let (tail_min, tail_max) = ds1_tail_strategies(&arena, &lambda);
        let mut seen = 0;
        for_each_tree(&arena, v, 4, &mut |tree| {
            let s = tree_to_mealy(&arena, v, tree, &tail_min, &tail_max);
            let csv = evaluate_csv(&arena, &lambda, &s, v).unwrap();
            let asv = evaluate_asv(&arena, &lambda, &s, v).unwrap();
            assert!(asv <= csv);
            seen += 1;
            Ok(false)
        })
        .unwrap();
        assert!(seen > 0);
    }
}
