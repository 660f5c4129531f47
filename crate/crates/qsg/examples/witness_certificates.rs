//! Threshold decisions come with re-checkable certificates: an access path
//! into a strongly connected component, two simple cycles with mixing
//! coefficients realizing a payoff above the threshold, and one memoryless
//! punishment strategy per play vertex. The certificate serializes to JSON
//! and an independent verifier re-derives every claim.
//!
//! Run with: cargo run --example witness_certificates

use qsg::asv::{asv_threshold, verify_witness, witness_from_json, witness_to_json};
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
    let budget = Budget::from_env();

    let c = q(1, 2);
    let (yes, cert) = asv_threshold(&arena, v0, &c, &budget).unwrap();
    assert!(yes);
    let cert = cert.unwrap();
    println!(
        "ASV(v0) > {}: witness mixes cycle {:?} (weight {}) with cycle {:?} (weight {})",
        fmt_q(&c),
        cert.cycle1.iter().map(|&v| arena.name(v)).collect::<Vec<_>>(),
        fmt_q(&cert.alpha),
        cert.cycle2.iter().map(|&v| arena.name(v)).collect::<Vec<_>>(),
        fmt_q(&cert.beta),
    );
    println!("certified payoff: ({}, {})", fmt_q(&cert.c_prime), fmt_q(&cert.d));

    let json = witness_to_json(&arena, &cert);
    println!("\nserialized certificate:\n{}", serde_json::to_string_pretty(&json).unwrap());

    let parsed = witness_from_json(&arena, &json).unwrap();
    let report = verify_witness(&arena, &parsed, &budget).unwrap();
    println!(
        "\nindependent verification: {} ({} work units, certificate size {})",
        if report.ok { "accepted" } else { "REJECTED" },
        report.work_units,
        parsed.size()
    );
}
