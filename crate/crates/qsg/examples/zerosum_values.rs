//! Zero-sum building blocks: exact one-dimensional mean-payoff values and
//! discounted-sum values with memoryless optimal strategies, plus the
//! geometric truncation bound that certifies the discounted solver.
//!
//! Run with: cargo run --example zerosum_values

use num_traits::Signed;
use qsg::error::Budget;
use qsg::rational::{fmt_q, q};
use qsg::zerosum::{ds_game_value, ds_k_step_value, mp_game_value};
use qsg::{Arena, Player};

fn main() {
    let arena = Arena::parse(
        "player1: v0\nplayer0: v1 v2\ninit: v0\n\
         edge: v0 v1 1 1\nedge: v1 v0 1 1\nedge: v1 v1 0 2\n\
         edge: v0 v2 0 1\nedge: v2 v2 0 1\n",
    )
    .unwrap();
    let v0 = arena.vertex("v0").unwrap();
    let budget = Budget::from_env();

    for dim in 0..2 {
        let r = mp_game_value(&arena, dim, Player::P1, v0, &budget).unwrap();
        println!("mean-payoff value (dimension {dim}, follower maximizes): {}", fmt_q(&r.value));
    }

    let lambda = q(2, 3);
    let r = ds_game_value(&arena, &lambda, 1, Player::P1, v0);
    println!(
        "\ndiscounted value (dimension 1, lambda = {}): {}",
        fmt_q(&lambda),
        fmt_q(&r.value)
    );
    let v1 = arena.vertex("v1").unwrap();
    println!(
        "optimal leader move at v1: {}",
        arena.name(r.optimal_strategy_min.pick(0, v1).unwrap())
    );

    println!("\ntruncation bound |value - K-step value| <= lambda^K W/(1-lambda):");
    let w = arena.max_abs_weight().clone();
    for k in [1usize, 5, 10, 20] {
        let trunc = ds_k_step_value(&arena, &lambda, 1, Player::P1, v0, k);
        let diff = (&r.value - &trunc).abs();
        let bound = qsg::ds::tail_bound(&w, &lambda, k);
        assert!(diff <= bound);
        println!("  K={k:>2}: |diff| = {:>12}  <=  {}", fmt_q(&diff), fmt_q(&bound));
    }
}
