//! Exact adversarial Stackelberg value under the mean-payoff objective.
//!
//! The example game has value 1 from v0, yet no leader strategy achieves
//! it: the leader must bribe the follower with payoff strictly above 1 to
//! keep the play in the productive cycle, and every bribe costs her.
//! The value is approachable from below, which the threshold ladder shows.
//!
//! Run with: cargo run --example asv_value

use qsg::asv::{asv_threshold_with_cache, asv_value_with_cache, LambdaCache};
use qsg::error::Budget;
use qsg::rational::{fmt_q, q, qi};
use qsg::Arena;

fn main() {
    let arena = Arena::parse(
        "player1: v0\nplayer0: v1 v2\ninit: v0\n\
         edge: v0 v1 1 1\nedge: v1 v0 1 1\nedge: v1 v1 0 2\n\
         edge: v0 v2 0 1\nedge: v2 v2 0 1\n",
    )
    .unwrap();
    let v0 = arena.vertex("v0").unwrap();
    let budget = Budget::from_env();
    let cache = LambdaCache::build(&arena, &budget).unwrap();

    let result = asv_value_with_cache(&arena, &cache, v0, &budget).unwrap();
    println!(
        "ASV(v0) = {} (supremum attained: {})",
        fmt_q(&result.value),
        result.attained
    );

    println!("\nThreshold ladder:");
    for c in [qi(0), q(1, 2), q(3, 4), q(15, 16), qi(1), qi(2)] {
        let (yes, _) = asv_threshold_with_cache(&arena, &cache, v0, &c, &budget).unwrap();
        println!("  ASV(v0) > {:<6} ? {}", fmt_q(&c), if yes { "Yes" } else { "No" });
    }
}
