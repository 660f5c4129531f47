//! Evaluating a concrete finite-memory leader strategy under the
//! discounted sum: build the strategy product, compute the follower's
//! optimal values, prune every edge inconsistent with them, and read the
//! leader's best (CSV) and worst (ASV) payoff over the surviving plays.
//! Ties between best responses are exactly where the two values split.
//!
//! Run with: cargo run --example ds_evaluation

use qsg::arena::MealyStrategy;
use qsg::ds::{ds_best_response, evaluate_asv, evaluate_csv};
use qsg::rational::{fmt_q, q};
use qsg::{Arena, Player};

fn main() {
    // A tie game:. the follower is indifferent between the two sinks, but
    // the leader's payoff differs.
    let arena = Arena::parse(
        "player1: u\nplayer0: a b\ninit: u\n\
         edge: u a 1 0\nedge: u b 0 0\nedge: a a 0 0\nedge: b b 0 0\n",
    )
    .unwrap();
    let u = arena.vertex("u").unwrap();
    let lambda = q(1, 2);
    let s = MealyStrategy::first_choice(&arena, Player::P0);
    let csv = evaluate_csv(&arena, &lambda, &s, u).unwrap();
    let asv = evaluate_asv(&arena, &lambda, &s, u).unwrap();
    println!("tie game: CSV = {}, ASV = {} (cooperative vs adversarial tie-break)", fmt_q(&csv), fmt_q(&asv));

    // Best response against a two-state leader on the word game: the
    // alternating word is worth too little, so the follower exits.
    let word_game = Arena::parse(
        "player1: v\nplayer0: z s a b\ninit: v\n\
         edge: v z 0 -1\nedge: v s 0 0\nedge: z z 0 0\n\
         edge: s a 0 0\nedge: s b 1 -1\n\
         edge: a a 0 0\nedge: a b 1 -1\nedge: b a 0 0\nedge: b b 1 -1\n",
    )
    .unwrap();
    let v = word_game.vertex("v").unwrap();
    let lambda = q(2, 3);
    let s = MealyStrategy::first_choice(&word_game, Player::P0);
    let (value, response) = ds_best_response(&word_game, &lambda, &s, v).unwrap();
    println!(
        "word game: follower's best-response value {} by moving to {}",
        fmt_q(&value),
        word_game.name(response.pick(response.init_state, v).unwrap())
    );
}
