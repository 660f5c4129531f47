//! The bad-threshold region Λ(v): all pairs (c, d) such that the follower
//! can force MP0 <= c and MP1 >= d from v whatever the leader does. The
//! region is an exact union of convex cells, upward closed in c and
//! downward closed in d; its membership agrees pointwise with re-solving
//! the two-dimensional forcing game.
//!
//! Run with: cargo run --example lambda_regions

use qsg::asv::lambda_region;
use qsg::error::Budget;
use qsg::rational::{fmt_q, q, qi};
use qsg::zerosum::ConjOracle;
use qsg::Arena;

fn main() {
    let arena = Arena::parse(
        "player1: v0\nplayer0: v1 v2\ninit: v0\n\
         edge: v0 v1 1 1\nedge: v1 v0 1 1\nedge: v1 v1 0 2\n\
         edge: v0 v2 0 1\nedge: v2 v2 0 1\n",
    )
    .unwrap();
    let budget = Budget::from_env();
    let v0 = arena.vertex("v0").unwrap();

    let region = lambda_region(&arena, v0, &budget).unwrap();
    println!("Λ(v0) as cells of half-plane rows [a1, a2, b, strict] (a1 c + a2 d >= b):");
    println!("{}", serde_json::to_string_pretty(&region.region.to_json()).unwrap());

    println!("\nmembership samples:");
    let samples = [
        (qi(0), qi(1)),
        (q(1, 2), qi(1)),
        (q(1, 2), q(5, 4)),
        (qi(-1), qi(0)),
        (qi(2), q(1, 2)),
    ];
    let oracle = ConjOracle::build(&arena, &budget).unwrap();
    for (c, d) in samples {
        let member = region.region.contains(&(c.clone(), d.clone()));
        let solved = oracle.verdict(v0, &c, &d);
        assert_eq!(member, solved);
        println!(
            "  ({:>4}, {:>4})  {}  (pointwise game solve agrees)",
            fmt_q(&c),
            fmt_q(&d),
            if member { "bad  " } else { "safe " },
        );
    }
}
