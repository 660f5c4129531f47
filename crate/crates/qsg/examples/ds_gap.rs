//! Discounted-sum Stackelberg values and the gap decider, on the game that
//! embeds a target-discounted-sum question: the follower either takes a
//! fixed exit or lets the leader spell an infinite {a,b}-word; the leader
//! profits exactly when the word's discounted value reaches the target.
//! Here (a=0, b=1, λ=2/3, t=3/2): the cooperative value is 1 but only
//! infinite memory attains it, so exact thresholds are out of reach while
//! the gap decider settles every query with a clear margin.
//!
//! Run with: cargo run --example ds_gap

use qsg::ds::{compute_horizon, gap_decide, GapAnswer, GapMode};
use qsg::error::Budget;
use qsg::rational::{fmt_q, q, qi};
use qsg::reductions::{build_tds_reduction, tds_metadata, TdsInstance};

fn main() {
    let instance = TdsInstance { a: qi(0), b: qi(1), t: q(3, 2), lambda: q(2, 3) };
    let (arena, v) = build_tds_reduction(&instance).unwrap();
    println!("generated arena:\n{}", arena.serialize());
    println!("metadata: {}", tds_metadata(&instance));

    let budget = Budget::from_env();
    let lambda = q(2, 3);
    let eps = q(1, 10);
    let horizon = compute_horizon(arena.max_abs_weight(), &lambda, &eps).unwrap();
    println!(
        "\ngap width {}, unfolding depth {}, worst-case memory bound {}",
        fmt_q(&eps),
        horizon.n_steps,
        horizon.memory_bound
    );

    for c in [q(4, 5), q(3, 2)] {
        let verdict = gap_decide(&arena, &lambda, v, &c, &eps, GapMode::Csv, &budget).unwrap();
        match verdict.answer {
            GapAnswer::Yes => println!(
                "CSV(v) > {}: Yes, witness value {} ({} candidates)",
                fmt_q(&c),
                fmt_q(verdict.witness_value.as_ref().unwrap()),
                verdict.candidates_evaluated
            ),
            GapAnswer::No => println!(
                "CSV(v) > {}: No ({} candidates exhausted)",
                fmt_q(&c),
                verdict.candidates_evaluated
            ),
        }
    }
}
