//! The arena file format and the visited-set extension.
//!
//! Files are line-based UTF-8 with `#` comments: `player0:`/`player1:`
//! lines declare vertices in order, `init:` names the start, and each
//! `edge: src dst w0 w1` line carries two exact rational weights.
//! Serialization is canonical (declaration order, edges sorted, lowest
//! terms), so parse–serialize round-trips are bit-exact.
//!
//! Run with: cargo run --example arena_files

use qsg::arena::build_extended;
use qsg::rational::fmt_q;
use qsg::Arena;

fn main() {
    let text = "# two cycles and an absorbing sink\n\
                player1: v0\n\
                player0: v1 v2\n\
                init: v0\n\
                edge: v0 v1 1 1\n\
                edge: v1 v0 2/2 1\n\
                edge: v1 v1 0 2\n\
                edge: v0 v2 0 1\n\
                edge: v2 v2 0 1\n";
    let arena = Arena::parse(text).unwrap();
    println!(
        "parsed {} vertices, {} edges, max |weight| W = {}",
        arena.vertex_count(),
        arena.edge_count(),
        fmt_q(arena.max_abs_weight())
    );
    let canonical = arena.serialize();
    println!("\ncanonical form:\n{canonical}");
    assert_eq!(Arena::parse(&canonical).unwrap(), arena);
    assert_eq!(Arena::parse(&canonical).unwrap().serialize(), canonical);

    // The extension tracks the set of visited vertices; its strongly
    // connected components stratify the witness search.
    let v0 = arena.vertex("v0").unwrap();
    let ext = build_extended(&arena, v0, 1 << 16).unwrap();
    println!("extension from (v0, {{v0}}): {} reachable states", ext.arena.vertex_count());
    for s in ext.arena.vertices() {
        println!("  {}", ext.arena.name(s));
    }

    // Malformed inputs fail loudly, with the offending line.
    let bad = "player0: a b\nedge: a a 1 1\n";
    println!("\nrejecting a dead-end vertex: {}", Arena::parse(bad).unwrap_err());
    let decimal = "player0: a\nedge: a a 0.5 1\n";
    println!("rejecting decimal weights: {}", Arena::parse(decimal).unwrap_err());
}
