//! Independent brute-force baselines used by tests and as sanity brackets:
//! bounded-memory strategy enumeration, exhaustive play search with exact
//! tail bounds, and the no-best-response probe. Deliberately simple and
//! slow; none of this shares algorithmic code with the solvers it checks.

use num_traits::{One, Zero};

use crate::arena::{product_with_strategy, Arena, MealyStrategy, Player, VertexId};
use crate::error::{Budget, Error, Result};
use crate::rational::{pow_q, Q};

/// Enumeration bounds for the oracles.
#[derive(Debug, Clone)]
pub struct OracleBudget {
    /// Maximal number of memory states of the enumerated leader strategies.
    pub memory_bound: usize,
    /// Maximal cycle length (mean payoff) or play-prefix length
    /// (discounted sum) explored per strategy.
    pub horizon_bound: usize,
    /// Target width for bisection-style value bracketing.
    pub grid_pitch: Q,
}

/// A two-sided enclosure of a value.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lo: Q,
    pub hi: Q,
    /// Strategies skipped because their product outgrew the horizon bound;
    /// the bracket stays sound, only less tight.
    pub skipped: usize,
}

impl Bracket {
    pub fn contains(&self, x: &Q) -> bool {
        self.lo <= *x && *x <= self.hi
    }
}

// ---------------------------------------------------------------------------
// A deliberately naive cycle enumerator (no blocking, just bounded DFS).
// ---------------------------------------------------------------------------

fn naive_cycles(arena: &Arena, max_len: usize, cap: usize) -> Result<Vec<Vec<VertexId>>> {
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();
    let n = arena.vertex_count();
    for start in 0..n {
        let mut path = vec![start];
        let mut used = vec![false; n];
        used[start] = true;
        dfs(arena, start, start, max_len, cap, &mut path, &mut used, &mut cycles)?;
    }
    return Ok(cycles);

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        arena: &Arena,
        start: VertexId,
        cur: VertexId,
        max_len: usize,
        cap: usize,
        path: &mut Vec<VertexId>,
        used: &mut Vec<bool>,
        cycles: &mut Vec<Vec<VertexId>>,
    ) -> Result<()> {
        for succ in arena.successors(cur) {
            if succ == start {
                if cycles.len() >= cap {
                    return Err(Error::resource("oracle cycle search", cycles.len() as u128 + 1, cap as u128));
                }
                cycles.push(path.clone());
            } else if succ > start && !used[succ] && path.len() < max_len {
                used[succ] = true;
                path.push(succ);
                dfs(arena, start, succ, max_len, cap, path, used, cycles)?;
                path.pop();
                used[succ] = false;
            }
        }
        Ok(())
    }
}

fn naive_cycle_mean(arena: &Arena, cycle: &[VertexId]) -> (Q, Q) {
    let mut w0 = Q::zero();
    let mut w1 = Q::zero();
    let len = cycle.len();
    for i in 0..len {
        let e = arena.edge_between(cycle[i], cycle[(i + 1) % len]).expect("cycle edge");
        w0 += &e.w0;
        w1 += &e.w1;
    }
    let l = crate::rational::qi(len as i64);
    (w0 / &l, w1 / &l)
}

fn naive_reachable(arena: &Arena, start: VertexId) -> Vec<bool> {
    let mut seen = vec![false; arena.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for s in arena.successors(v) {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    seen
}

// ---------------------------------------------------------------------------
// Bounded-memory leader strategies
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum UpdateShape {
    /// Single state.
    Memoryless,
    /// State increments mod M on every step.
    Clock(usize),
    /// State increments mod M when the tracked vertex is entered.
    LoopCounter(usize, VertexId),
}

fn update_table(shape: UpdateShape, arena: &Arena) -> (usize, Vec<Vec<usize>>) {
    let n = arena.vertex_count();
    match shape {
        UpdateShape::Memoryless => (1, vec![vec![0; n]]),
        UpdateShape::Clock(m) => {
            (m, (0..m).map(|s| vec![(s + 1) % m; n]).collect())
        }
        UpdateShape::LoopCounter(m, tracked) => (
            m,
            (0..m)
                .map(|s| {
                    (0..n).map(|v| if v == tracked { (s + 1) % m } else { s }).collect()
                })
                .collect(),
        ),
    }
}

/// All bounded-memory strategies of the oracle family: memoryless machines
/// plus, for each memory size up to the bound, step clocks and per-vertex
/// visit counters, with every output table. Cumulative over the memory
/// bound, so the family only grows with it.
fn oracle_strategies(arena: &Arena, memory_bound: usize, cap: usize) -> Result<Vec<MealyStrategy>> {
    let mut shapes = vec![UpdateShape::Memoryless];
    for m in 2..=memory_bound {
        shapes.push(UpdateShape::Clock(m));
        for v in arena.vertices() {
            shapes.push(UpdateShape::LoopCounter(m, v));
        }
    }
    let owned: Vec<VertexId> =
        arena.vertices().filter(|&v| arena.owner(v) == Player::P0).collect();
    let mut out: Vec<MealyStrategy> = Vec::new();
    for shape in shapes {
        let (m, update) = update_table(shape, arena);
        // Output tables: a successor per (state, owned vertex).
        let slots: Vec<(usize, VertexId)> =
            (0..m).flat_map(|s| owned.iter().map(move |&v| (s, v))).collect();
        let mut count: u128 = 1;
        for &(_, v) in &slots {
            count = count.saturating_mul(arena.out_edges(v).len() as u128);
        }
        if out.len() as u128 + count > cap as u128 {
            return Err(Error::resource("enumerating oracle strategies", out.len() as u128 + count, cap as u128));
        }
        let mut odometer = vec![0usize; slots.len()];
        loop {
            let n = arena.vertex_count();
            let mut output: Vec<Vec<Option<VertexId>>> = vec![vec![None; n]; m];
            for (k, &(s, v)) in slots.iter().enumerate() {
                output[s][v] = Some(arena.edge(arena.out_edges(v)[odometer[k]]).dst);
            }
            out.push(MealyStrategy {
                player: Player::P0,
                n_states: m,
                init_state: 0,
                update: update.clone(),
                output,
            });
            let mut pos = slots.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < arena.out_edges(slots[pos].1).len() {
                    done = false;
                    break;
                }
                odometer[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Mean-payoff oracle
// ---------------------------------------------------------------------------

fn per_strategy_asv_mp(
    arena: &Arena,
    strategy: &MealyStrategy,
    v: VertexId,
    horizon: usize,
    cap: usize,
    cooperative: bool,
) -> Result<Option<Q>> {
    let product = product_with_strategy(arena, strategy, Player::P0)?;
    if product.arena.vertex_count() > horizon {
        return Ok(None);
    }
    let cycles = naive_cycles(&product.arena, horizon, cap)?;
    let reach = naive_reachable(&product.arena, product.entry[v]);
    let mut best_m1: Option<Q> = None;
    let mut means: Vec<(Q, Q)> = Vec::new();
    for cycle in &cycles {
        if !reach[cycle[0]] {
            continue;
        }
        let (m0, m1) = naive_cycle_mean(&product.arena, cycle);
        if best_m1.as_ref().is_none_or(|b| m1 > *b) {
            best_m1 = Some(m1.clone());
        }
        means.push((m0, m1));
    }
    let best_m1 = best_m1.expect("every vertex has a successor");
    // Best responses pin Player 1's payoff to its maximum; among the plays
    // doing so, the leader's payoff ranges over a face whose extremes are
    // simple-cycle means.
    let selected = means.iter().filter(|(_, m1)| *m1 == best_m1).map(|(m0, _)| m0.clone());
    let value = if cooperative { selected.max() } else { selected.min() };
    Ok(Some(value.expect("some cycle attains the maximum")))
}

fn mp0_upper_bound(arena: &Arena, v: VertexId, cap: usize) -> Result<Q> {
    let cycles = naive_cycles(arena, arena.vertex_count(), cap)?;
    let reach = naive_reachable(arena, v);
    cycles
        .iter()
        .filter(|c| reach[c[0]])
        .map(|c| naive_cycle_mean(arena, c).0)
        .max()
        .ok_or_else(|| Error::invalid("no reachable cycle"))
}

/// Lower-bracket for the adversarial Stackelberg value by bounded-memory
/// enumeration: the best exactly-evaluated `ASV(σ0)` over the family is a
/// lower bound; the best reachable mean of the leader's dimension bounds
/// the value from above.
pub fn brute_asv_mp(
    arena: &Arena,
    v: VertexId,
    budget: &OracleBudget,
    caps: &Budget,
) -> Result<Bracket> {
    brute_stackelberg_mp(arena, v, budget, caps, false)
}

/// Cooperative counterpart of `brute_asv_mp` (the follower picks the best
/// response most favorable to the leader).
pub fn brute_csv_mp(
    arena: &Arena,
    v: VertexId,
    budget: &OracleBudget,
    caps: &Budget,
) -> Result<Bracket> {
    brute_stackelberg_mp(arena, v, budget, caps, true)
}

fn brute_stackelberg_mp(
    arena: &Arena,
    v: VertexId,
    budget: &OracleBudget,
    caps: &Budget,
    cooperative: bool,
) -> Result<Bracket> {
    let strategies = oracle_strategies(arena, budget.memory_bound, caps.max_strategies)?;
    let mut lo: Option<Q> = None;
    let mut skipped = 0usize;
    for s in &strategies {
        match per_strategy_asv_mp(arena, s, v, budget.horizon_bound, caps.max_cycles, cooperative)? {
            Some(value) => {
                if lo.as_ref().is_none_or(|b| value > *b) {
                    lo = Some(value);
                }
            }
            None => skipped += 1,
        }
    }
    let lo = lo.ok_or_else(|| Error::invalid("oracle could not evaluate any strategy"))?;
    let hi = mp0_upper_bound(arena, v, caps.max_cycles)?.max(lo.clone());
    Ok(Bracket { lo, hi, skipped })
}

/// Brackets the solver's threshold decision by bisection: returns an
/// interval of width at most `pitch` containing the exact value, using only
/// yes/no answers of the given predicate (monotone in the threshold).
pub fn bisect_value(
    lo: &Q,
    hi: &Q,
    pitch: &Q,
    mut above: impl FnMut(&Q) -> Result<bool>,
) -> Result<(Q, Q)> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    while &hi - &lo > *pitch {
        let mid = (&lo + &hi) / crate::rational::qi(2);
        if above(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// Discounted-sum oracle
// ---------------------------------------------------------------------------

/// Exact discounted pair of a product-play prefix.
fn prefix_ds(arena: &Arena, lambda: &Q, prefix: &[VertexId]) -> (Q, Q) {
    let mut ds0 = Q::zero();
    let mut ds1 = Q::zero();
    let mut factor = Q::one();
    for w in prefix.windows(2) {
        let e = arena.edge_between(w[0], w[1]).expect("prefix edge");
        ds0 += &factor * &e.w0;
        ds1 += &factor * &e.w1;
        factor *= lambda;
    }
    (ds0, ds1)
}

/// Encloses CSV/ASV of one finite-memory strategy by exhaustive play
/// enumeration to the horizon with the exact geometric tail bound. Any
/// actual best response is among the prefixes whose truncated adversary
/// payoff is within twice the tail of the truncated maximum, which pins
/// the value between the extremes of those candidates.
pub fn brute_ds_strategy_bracket(
    arena: &Arena,
    lambda: &Q,
    strategy: &MealyStrategy,
    v: VertexId,
    horizon: usize,
    caps: &Budget,
) -> Result<Bracket> {
    let product = product_with_strategy(arena, strategy, Player::P0)?;
    let start = product.entry[v];
    let tail = pow_q(lambda, horizon) * arena.max_abs_weight() / (Q::one() - lambda);

    // All play prefixes of the given length.
    let mut leaves: Vec<(Q, Q)> = Vec::new();
    let mut stack: Vec<(VertexId, usize)> = vec![(start, 0)];
    let mut path: Vec<VertexId> = vec![start];
    // Iterative DFS over prefixes; bounded by caps.max_strategies leaves.
    #[allow(clippy::too_many_arguments)]
    fn explore(
        product: &Arena,
        lambda: &Q,
        cur: VertexId,
        depth: usize,
        horizon: usize,
        path: &mut Vec<VertexId>,
        leaves: &mut Vec<(Q, Q)>,
        cap: usize,
    ) -> Result<()> {
        if depth == horizon {
            if leaves.len() >= cap {
                return Err(Error::resource("oracle play search", leaves.len() as u128 + 1, cap as u128));
            }
            leaves.push(prefix_ds(product, lambda, path));
            return Ok(());
        }
        for succ in product.successors(cur) {
            path.push(succ);
            explore(product, lambda, succ, depth + 1, horizon, path, leaves, cap)?;
            path.pop();
        }
        Ok(())
    }
    let _ = &mut stack;
    explore(&product.arena, lambda, start, 0, horizon, &mut path, &mut leaves, caps.max_strategies)?;

    let max1 = leaves.iter().map(|(_, d1)| d1.clone()).max().expect("at least one play");
    let two_tail = &tail + &tail;
    let candidates: Vec<&(Q, Q)> =
        leaves.iter().filter(|(_, d1)| d1 >= &(&max1 - &two_tail)).collect();
    let lo = candidates.iter().map(|(d0, _)| d0.clone()).min().unwrap() - &tail;
    let hi = candidates.iter().map(|(d0, _)| d0.clone()).max().unwrap() + &tail;
    Ok(Bracket { lo, hi, skipped: 0 })
}

/// Mode selector mirroring the solver's CSV/ASV split.
pub use crate::ds::GapMode as DsOracleMode;

/// Lower-brackets the discounted Stackelberg value over the bounded-memory
/// family; `hi` is the family's best upper enclosure (sound for the family,
/// a heuristic ceiling for the full game).
pub fn brute_ds_value(
    arena: &Arena,
    lambda: &Q,
    v: VertexId,
    budget: &OracleBudget,
    caps: &Budget,
) -> Result<Bracket> {
    let strategies = oracle_strategies(arena, budget.memory_bound, caps.max_strategies)?;
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for s in &strategies {
        let b = brute_ds_strategy_bracket(arena, lambda, s, v, budget.horizon_bound, caps)?;
        if lo.as_ref().is_none_or(|x| b.lo > *x) {
            lo = Some(b.lo);
        }
        if hi.as_ref().is_none_or(|x| b.hi > *x) {
            hi = Some(b.hi);
        }
    }
    Ok(Bracket { lo: lo.unwrap(), hi: hi.unwrap(), skipped: 0 })
}

// ---------------------------------------------------------------------------
// The no-best-response probe
// ---------------------------------------------------------------------------

/// The three-vertex game where a counting leader strategy admits no best
/// response: responding with k loops before committing pays (2k+1)/(k+1),
/// strictly increasing in k.
fn probe_arena() -> Arena {
    Arena::parse(
        "player1: 1\nplayer0: 2 3\ninit: 1\n\
         edge: 1 1 0 0\nedge: 1 2 0 0\nedge: 2 2 0 1\nedge: 2 3 0 2\n\
         edge: 3 3 0 2\nedge: 3 2 0 1\n",
    )
    .expect("probe arena is well-formed")
}

/// Simulates the counting strategy against the follower who loops `k` times
/// (and `k+1` times) before committing, and returns the two follower
/// payoffs. The pair is strictly increasing and bounded by 2, witnessing
/// that no best response exists.
pub fn no_best_response_probe(k: u64) -> (Q, Q) {
    let arena = probe_arena();
    let value = |k: u64| -> Q {
        let v1 = arena.vertex("1").expect("vertex 1");
        let v2 = arena.vertex("2").expect("vertex 2");
        let v3 = arena.vertex("3").expect("vertex 3");
        // Follower: k loops at vertex 1, then enter. Leader: after seeing k
        // loops, repeat "advance towards 3, loop there k-1 times, return".
        // The outcome is ultimately periodic: prefix 1^(k+1), cycle
        // 2 3^k (k >= 1) or the self-loop at 2 (k = 0).
        let mut cycle: Vec<VertexId> = vec![v2];
        for _ in 0..k {
            cycle.push(v3);
        }
        let _ = v1;
        // Average the follower's weights along the cycle by hand.
        let mut total = Q::zero();
        let len = cycle.len();
        for i in 0..len {
            let e = arena.edge_between(cycle[i], cycle[(i + 1) % len]).expect("cycle edge");
            total += &e.w1;
        }
        total / crate::rational::qi(len as i64)
    };
    (value(k), value(k + 1))
}
