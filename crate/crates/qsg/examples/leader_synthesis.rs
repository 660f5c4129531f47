//! From a witness certificate to an executable leader strategy: follow the
//! scripted play whose blocks repeat the two certified cycles with growing
//! exponents; if the follower ever deviates, switch forever to the
//! memoryless punishment attached to the deviation vertex.
//!
//! Run with: cargo run --example leader_synthesis

use qsg::asv::{asv_threshold, running_mp0, synthesize_leader_strategy};
use qsg::error::Budget;
use qsg::rational::{fmt_q, q};
use qsg::Arena;

fn main() {
    let arena = Arena::parse(
        "player1: v0\nplayer0: v1 v2\ninit: v0\n\
         edge: v0 v1 1 1\nedge: v1 v0 1 1\nedge: v1 v1 0 2\n\
         edge: v0 v2 0 1\nedge: v2 v2 0 1\n",
    )
    .unwrap();
    let v0 = arena.vertex("v0").unwrap();
    let v2 = arena.vertex("v2").unwrap();
    let budget = Budget::from_env();

    let c = q(1, 2);
    let (_, cert) = asv_threshold(&arena, v0, &c, &budget).unwrap();
    let cert = cert.unwrap();
    let leader = synthesize_leader_strategy(&cert, &q(1, 8));
    println!("{}", leader.summary(&arena));

    // A compliant follower tracks the script.
    let script = leader.script(10_001);
    let trace = leader.simulate(&arena, 10_000, |_, hist| script[hist.len()]);
    let tail = &trace[trace.len() / 2..];
    println!(
        "\ncompliant follower, 10^4 steps: second-half average MP0 = {} (> {})",
        fmt_q(&running_mp0(&arena, tail)),
        fmt_q(&c)
    );

    // A deviating follower goes straight to the absorbing sink and is
    // punished from then on; the play stays legal.
    let trace = leader.simulate(&arena, 50, |_, _| v2);
    let names: Vec<&str> = trace.iter().take(6).map(|&v| arena.name(v)).collect();
    println!("deviating follower, first steps: {} ...", names.join(" -> "));
}
