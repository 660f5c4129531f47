//! Best responses under the mean payoff. Against a finite-memory leader
//! strategy the follower's best response always exists: it is an optimal
//! cycle of the strategy product. Against infinite-memory strategies it can
//! fail to exist: the probe below replays the counting strategy against
//! followers that wait k rounds, and their payoffs (2k+1)/(k+1) increase
//! forever without a maximum.
//!
//! Run with: cargo run --example mp_best_response

use qsg::arena::MealyStrategy;
use qsg::asv::best_response_mp;
use qsg::oracles::no_best_response_probe;
use qsg::rational::fmt_q;
use qsg::{Arena, Player};

fn main() {
    let arena = Arena::parse(
        "player1: 1\nplayer0: 2 3\ninit: 1\n\
         edge: 1 1 0 0\nedge: 1 2 0 0\nedge: 2 2 0 1\nedge: 2 3 0 2\n\
         edge: 3 3 0 2\nedge: 3 2 0 1\n",
    )
    .unwrap();
    let v1 = arena.vertex("1").unwrap();
    let v2 = arena.vertex("2").unwrap();
    let v3 = arena.vertex("3").unwrap();

    println!("best responses against the four memoryless leader strategies:");
    for (at2, at3) in [(v3, v3), (v3, v2), (v2, v3), (v2, v2)] {
        let mut choice = vec![None; arena.vertex_count()];
        choice[v2] = Some(at2);
        choice[v3] = Some(at3);
        let s = MealyStrategy::memoryless(&arena, Player::P0, &choice).unwrap();
        let (value, lasso) = best_response_mp(&arena, &s, v1).unwrap();
        println!(
            "  at 2 -> {}, at 3 -> {}: value {}, response {:?} . {:?}^w",
            arena.name(at2),
            arena.name(at3),
            fmt_q(&value),
            lasso.prefix.iter().map(|&v| arena.name(v)).collect::<Vec<_>>(),
            lasso.cycle.iter().map(|&v| arena.name(v)).collect::<Vec<_>>(),
        );
    }

    println!("\nno best response against the counting strategy:");
    for k in [0u64, 1, 2, 5, 10, 50] {
        let (vk, vk1) = no_best_response_probe(k);
        println!(
            "  waiting {k:>2} rounds pays {:>7}, waiting {:>2} pays {:>7}",
            fmt_q(&vk),
            k + 1,
            fmt_q(&vk1)
        );
    }
    println!("  ... strictly increasing towards 2, never attained.");
}
