#![allow(dead_code)]

//! Shared generators for the randomized suites. Everything is seeded; the
//! same seed always produces the same arenas, strategies and lassos.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use qsg::arena::{Arena, Lasso, MealyStrategy, Player, VertexId};
use qsg::rational::{qi, Q};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random arena: every vertex keeps 1..=3 distinct successors, integer
/// weights in [-max_weight, max_weight], random owners, init = first vertex.
pub fn random_arena(rng: &mut StdRng, n: usize, max_weight: i64) -> Arena {
    let mut builder = Arena::builder();
    for v in 0..n {
        let player = if rng.gen_bool(0.5) { Player::P0 } else { Player::P1 };
        builder.add_vertex(&format!("u{v}"), player).unwrap();
    }
    for v in 0..n {
        let degree = rng.gen_range(1..=3usize.min(n));
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        for &t in targets.iter().take(degree) {
            let w0 = rng.gen_range(-max_weight..=max_weight);
            let w1 = rng.gen_range(-max_weight..=max_weight);
            builder.add_edge(&format!("u{v}"), &format!("u{t}"), qi(w0), qi(w1)).unwrap();
        }
    }
    builder.set_init("u0").unwrap();
    builder.build().unwrap()
}

/// Random memoryless Player-0 strategy.
pub fn random_memoryless(rng: &mut StdRng, arena: &Arena, player: Player) -> MealyStrategy {
    let choice: Vec<Option<VertexId>> = arena
        .vertices()
        .map(|v| {
            if arena.owner(v) == player {
                let edges = arena.out_edges(v);
                let e = edges[rng.gen_range(0..edges.len())];
                Some(arena.edge(e).dst)
            } else {
                None
            }
        })
        .collect();
    MealyStrategy::memoryless(arena, player, &choice).unwrap()
}

/// Random Mealy strategy with the given number of states.
pub fn random_mealy(
    rng: &mut StdRng,
    arena: &Arena,
    player: Player,
    states: usize,
) -> MealyStrategy {
    let n = arena.vertex_count();
    let update: Vec<Vec<usize>> =
        (0..states).map(|_| (0..n).map(|_| rng.gen_range(0..states)).collect()).collect();
    let output: Vec<Vec<Option<VertexId>>> = (0..states)
        .map(|_| {
            arena
                .vertices()
                .map(|v| {
                    if arena.owner(v) == player {
                        let edges = arena.out_edges(v);
                        Some(arena.edge(edges[rng.gen_range(0..edges.len())]).dst)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let s = MealyStrategy { player, n_states: states, init_state: 0, update, output };
    s.validate(arena).unwrap();
    s
}

/// Random lasso from `start`: walk randomly until a vertex repeats, then
/// close the cycle there.
pub fn random_lasso(rng: &mut StdRng, arena: &Arena, start: VertexId) -> Lasso {
    let mut walk = vec![start];
    loop {
        let cur = *walk.last().unwrap();
        let edges = arena.out_edges(cur);
        let next = arena.edge(edges[rng.gen_range(0..edges.len())]).dst;
        if let Some(pos) = walk.iter().position(|&v| v == next) {
            let prefix = walk[..pos].to_vec();
            let cycle = walk[pos..].to_vec();
            let lasso = Lasso::new(prefix, cycle);
            lasso.validate(arena).unwrap();
            return lasso;
        }
        walk.push(next);
    }
}

/// Random rational with small numerator/denominator.
pub fn random_q(rng: &mut StdRng, span: i64) -> Q {
    let den = rng.gen_range(1..=4i64);
    let num = rng.gen_range(-span * den..=span * den);
    qsg::rational::q(num, den)
}
