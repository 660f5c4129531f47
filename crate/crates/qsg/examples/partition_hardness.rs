//! The partition gadget: a game whose gap verdict answers a partition
//! instance. The leader routes each item's weight to herself or to the
//! follower; a balanced split keeps both discounted payoffs high enough
//! that the follower stays in the chain, an unbalanced one pushes the
//! follower to the exit (or starves the leader). The generator also picks
//! the discount, gap and threshold so the two cases land strictly on the
//! two sides of the gap.
//!
//! Run with: cargo run --example partition_hardness

use qsg::ds::{gap_decide, GapAnswer, GapMode};
use qsg::error::Budget;
use qsg::rational::fmt_q;
use qsg::reductions::{build_partition_reduction, PartitionInstance};

fn main() {
    let budget = Budget::from_env();
    for weights in [vec![1u64, 1], vec![1, 3], vec![1, 2, 3], vec![2, 2, 2]] {
        let instance = PartitionInstance::new(weights.clone()).unwrap();
        let red = build_partition_reduction(&instance).unwrap();
        println!(
            "weights {:?}: solvable={}, lambda={}, epsilon={}, threshold={}",
            weights,
            instance.solvable(),
            fmt_q(&red.lambda),
            fmt_q(&red.epsilon),
            fmt_q(&red.threshold),
        );
        for mode in [GapMode::Csv, GapMode::Asv] {
            let verdict = gap_decide(
                &red.arena,
                &red.lambda,
                red.designated_vertex,
                &red.threshold,
                &red.epsilon,
                mode,
                &budget,
            )
            .unwrap();
            println!(
                "  {:?} gap answer: {}",
                mode,
                match verdict.answer {
                    GapAnswer::Yes => "Yes",
                    GapAnswer::No => "No",
                }
            );
            assert_eq!(matches!(verdict.answer, GapAnswer::Yes), instance.solvable());
        }
    }
    println!("\ngap answers coincide with solvability in both modes.");
}
