//! Generators for the two hardness gadgets: target-discounted-sum games
//! (whose cooperative value encodes a TDS instance) and partition games
//! (whose gap verdict answers the partition instance). Both double as
//! test-instance factories.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arena::{Arena, Player, VertexId};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, pow_q, Q};

/// A target-discounted-sum instance: is there an infinite word over {a, b}
/// whose discounted sum equals `t`?
#[derive(Debug, Clone)]
pub struct TdsInstance {
    pub a: Q,
    pub b: Q,
    pub t: Q,
    pub lambda: Q,
}

impl TdsInstance {
    pub fn validate(&self) -> Result<()> {
        if self.lambda <= Q::zero() || self.lambda >= Q::one() {
            return Err(Error::invalid("discount factor must lie strictly between 0 and 1"));
        }
        Ok(())
    }
}

/// Builds the five-vertex game whose cooperative Stackelberg value is at
/// least `λ·t` exactly when the instance is solvable. Player 1 owns the
/// start `v` with an exit to the absorbing `z` worth `(λt-1, -λt)`; below
/// `s`, Player 0 spells an infinite {a,b}-word whose letters pay
/// `(letter, -letter)` on entry.
pub fn build_tds_reduction(instance: &TdsInstance) -> Result<(Arena, VertexId)> {
    instance.validate()?;
    let lt = &instance.lambda * &instance.t;
    let mut builder = Arena::builder();
    builder.add_vertex("v", Player::P1)?;
    builder.add_vertex("z", Player::P0)?;
    builder.add_vertex("s", Player::P0)?;
    builder.add_vertex("a", Player::P0)?;
    builder.add_vertex("b", Player::P0)?;
    builder.add_edge("v", "z", &lt - Q::one(), -lt.clone())?;
    builder.add_edge("v", "s", Q::zero(), Q::zero())?;
    builder.add_edge("z", "z", Q::zero(), Q::zero())?;
    for src in ["s", "a", "b"] {
        builder.add_edge(src, "a", instance.a.clone(), -instance.a.clone())?;
        builder.add_edge(src, "b", instance.b.clone(), -instance.b.clone())?;
    }
    let arena = builder.build()?;
    let v = arena.vertex("v")?;
    Ok((arena, v))
}

/// Sidecar metadata for a generated TDS game.
pub fn tds_metadata(instance: &TdsInstance) -> Value {
    json!({
        "kind": "tds",
        "a": fmt_q(&instance.a),
        "b": fmt_q(&instance.b),
        "t": fmt_q(&instance.t),
        "lambda": fmt_q(&instance.lambda),
        "threshold": fmt_q(&(&instance.lambda * &instance.t)),
        "designated_vertex": "v",
    })
}

/// A partition instance: positive integer weights with an even total.
#[derive(Debug, Clone)]
pub struct PartitionInstance {
    pub weights: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(weights: Vec<u64>) -> Result<PartitionInstance> {
        if weights.is_empty() {
            return Err(Error::invalid("partition instance needs at least one weight"));
        }
        if weights.contains(&0) {
            return Err(Error::invalid("partition weights must be positive"));
        }
        let total: u64 = weights.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::invalid("partition weights must sum to an even number"));
        }
        Ok(PartitionInstance { weights })
    }

    pub fn half_sum(&self) -> u64 {
        self.weights.iter().sum::<u64>() / 2
    }

    /// Exhaustive solvability check (the instances here are tiny).
    pub fn solvable(&self) -> bool {
        let target: u64 = self.half_sum();
        let n = self.weights.len();
        (0..(1u64 << n)).any(|mask| {
            let sum: u64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.weights[i]).sum();
            sum == target
        })
    }
}

/// Everything the gap decider needs to answer the partition instance.
#[derive(Debug, Clone)]
pub struct PartitionReduction {
    pub arena: Arena,
    pub designated_vertex: VertexId,
    pub lambda: Q,
    pub epsilon: Q,
    pub threshold: Q,
}

/// Builds the partition game plus its discount and gap parameters.
///
/// Shape: a start vertex `src` leads to Player 1's `v0`, which either exits
/// to the absorbing `v1` for `(0, T - 2/3)` or enters a chain of item slots
/// owned by Player 0. At slot i the two successor copies carry the item's
/// weight to Player 0 (`L`, weight `(w(i), 0)`) or to Player 1 (`R`, weight
/// `(0, w(i))`); both copies continue identically, so item i is always
/// discounted by `λ^(i+1)` and the chain ends in an absorbing sink after
/// n+1 discounted steps.
///
/// Parameters: λ is the smallest fraction k/(k+1), k = 2, 3, ..., with
/// `T λ^(n+1) > T - 1/2`; ε is half the smaller slack of the two defining
/// inequalities `T λ^(n+1) > T - 1/2 + ε` and `(T-1) λ^(n+1) < T - 1/2 - ε`;
/// the threshold is `c = T - 1/2`. A solvable instance then lands strictly
/// above `c + ε` and an unsolvable one strictly below `c - ε`, in both the
/// cooperative and adversarial readings.
pub fn build_partition_reduction(instance: &PartitionInstance) -> Result<PartitionReduction> {
    let n = instance.weights.len();
    let t_half = crate::rational::qi(instance.half_sum() as i64);
    let c = &t_half - crate::rational::q(1, 2);

    // λ = k/(k+1) minimal with T λ^{n+1} > T - 1/2.
    let mut k = BigInt::from(2);
    let lambda = loop {
        let lam = Q::new(k.clone(), &k + BigInt::one());
        if &t_half * &pow_q(&lam, n + 1) > c {
            break lam;
        }
        k += BigInt::one();
    };
    let slack1 = &t_half * &pow_q(&lambda, n + 1) - &c;
    let slack2 = &c - (&t_half - Q::one()) * &pow_q(&lambda, n + 1);
    let epsilon = slack1.min(slack2) / crate::rational::qi(2);
    debug_assert!(epsilon.is_positive());

    let mut builder = Arena::builder();
    builder.add_vertex("src", Player::P0)?;
    builder.add_vertex("v0", Player::P1)?;
    builder.add_vertex("v1", Player::P0)?;
    // Slot vertices: slot 1 is a single entry; slots 2..n come in L/R
    // copies recording where the previous item went; two absorbing sinks.
    builder.add_vertex("n1", Player::P0)?;
    for i in 2..=n {
        builder.add_vertex(&format!("n{i}L"), Player::P0)?;
        builder.add_vertex(&format!("n{i}R"), Player::P0)?;
    }
    builder.add_vertex("v2L", Player::P0)?;
    builder.add_vertex("v2R", Player::P0)?;

    builder.add_edge("src", "v0", Q::zero(), Q::zero())?;
    builder.add_edge("v0", "v1", Q::zero(), &t_half - crate::rational::q(2, 3))?;
    builder.add_edge("v0", "n1", Q::zero(), Q::zero())?;
    builder.add_edge("v1", "v1", Q::zero(), Q::zero())?;
    builder.add_edge("v2L", "v2L", Q::zero(), Q::zero())?;
    builder.add_edge("v2R", "v2R", Q::zero(), Q::zero())?;

    let slot_names = |i: usize| -> Vec<String> {
        if i == 1 {
            vec!["n1".to_string()]
        } else if i <= n {
            vec![format!("n{i}L"), format!("n{i}R")]
        } else {
            vec!["v2L".to_string(), "v2R".to_string()]
        }
    };
    for i in 1..=n {
        let w = crate::rational::qi(instance.weights[i - 1] as i64);
        let next = slot_names(i + 1);
        for src in slot_names(i) {
            builder.add_edge(&src, &next[0], w.clone(), Q::zero())?;
            let right = if next.len() > 1 { &next[1] } else { &next[0] };
            if next.len() > 1 {
                builder.add_edge(&src, right, Q::zero(), w.clone())?;
            }
        }
    }

    let arena = builder.build()?;
    let designated_vertex = arena.vertex("src")?;
    Ok(PartitionReduction { arena, designated_vertex, lambda, epsilon, threshold: c })
}

/// Sidecar metadata for a generated partition game.
pub fn partition_metadata(instance: &PartitionInstance, red: &PartitionReduction) -> Value {
    json!({
        "kind": "partition",
        "weights": instance.weights,
        "half_sum": instance.half_sum(),
        "lambda": fmt_q(&red.lambda),
        "epsilon": fmt_q(&red.epsilon),
        "threshold": fmt_q(&red.threshold),
        "designated_vertex": "src",
    })
}

/// The two defining inequalities of the generated parameters, exactly.
pub fn partition_parameters_valid(t_half: &Q, n: usize, lambda: &Q, epsilon: &Q) -> bool {
    let p = pow_q(lambda, n + 1);
    t_half * &p > t_half - crate::rational::q(1, 2) + epsilon
        && (t_half - Q::one()) * &p < t_half - crate::rational::q(1, 2) - epsilon
}
