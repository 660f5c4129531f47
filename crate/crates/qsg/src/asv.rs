//! The mean-payoff adversarial Stackelberg engine: bad-threshold regions,
//! witness checking, small-witness search with NP-style certificates, exact
//! value computation through the visited-set extension, best responses
//! against finite-memory leader strategies, and synthesis of leader
//! strategies from certificates.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arena::{
    build_extended, product_with_strategy, Arena, Lasso, MealyStrategy, Player, VertexId,
};
use crate::error::{Budget, Error, Result};
use crate::geometry::{
    convex_hull, f_min_region, lp, region_complement, region_union, ConvexCell, Region2D,
};
use crate::graph::{
    cycle_mean, enumerate_simple_cycles, max_mean_cycle, payoff_of_lasso, reachable_from,
    scc_decompose, shortest_path_within, PayoffKind,
};
use crate::rational::{fmt_q, parse_q, Q};
use crate::zerosum::{
    analyze_player0_strategies, dominated_cell_over_cd, find_refutation, refutes_badness,
    StrategyAnalysis,
};

/// Achievable liminf mean-payoff pairs of plays trapped in an SCC: the
/// componentwise-min closure of the hull of simple-cycle means.
#[derive(Debug, Clone)]
pub struct PayoffRegion {
    pub scc: Vec<VertexId>,
    pub region: Region2D,
}

/// Exact region of achievable `(MP0, MP1)` pairs for plays that stay inside
/// `scope` (a strongly connected vertex set). Empty when the scope has no
/// cycle.
pub fn phi_region(arena: &Arena, scope: &[VertexId], budget: &Budget) -> Result<PayoffRegion> {
    let cycles = enumerate_simple_cycles(arena, scope, budget.max_cycles)?;
    if cycles.cycles.is_empty() {
        return Ok(PayoffRegion { scc: scope.to_vec(), region: Region2D::empty() });
    }
    let points: Vec<(Q, Q)> = cycles.cycles.iter().map(|c| c.mean.clone()).collect();
    let (hull, _) = convex_hull(&points);
    Ok(PayoffRegion { scc: scope.to_vec(), region: f_min_region(&hull) })
}

/// Bad-threshold region of one vertex: all `(c,d)` such that Player 1 can
/// force `MP0 <= c` and `MP1 >= d` from it.
#[derive(Debug, Clone)]
pub struct ThresholdRegion {
    pub vertex: VertexId,
    pub region: Region2D,
}

/// Λ-regions of every vertex, plus the per-strategy cycle geometry they were
/// built from (reused for refutation extraction). Built once per arena;
/// queries afterwards are pure membership tests.
pub struct LambdaCache {
    pub analyses: Vec<StrategyAnalysis>,
    pub regions: Vec<ThresholdRegion>,
}

impl LambdaCache {
    pub fn build(arena: &Arena, budget: &Budget) -> Result<LambdaCache> {
        let analyses = analyze_player0_strategies(arena, budget)?;
        LambdaCache::from_analyses(arena, analyses, budget)
    }

    /// Builds the regions from precomputed strategy analyses (shared with a
    /// `ConjOracle` when both routes run on the same arena).
    pub fn from_analyses(
        arena: &Arena,
        analyses: Vec<StrategyAnalysis>,
        budget: &Budget,
    ) -> Result<LambdaCache> {
        let mut regions = Vec::with_capacity(arena.vertex_count());
        for v in arena.vertices() {
            // Λ(v) = ∩ over Player-0 memoryless strategies of the union,
            // over SCCs of a[σ0] reachable from v, of the dominated cells.
            let mut per_strategy: Vec<Region2D> = Vec::new();
            for analysis in &analyses {
                let cells: Vec<ConvexCell> = analysis
                    .sccs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| analysis.reach[v][*k])
                    .map(|(_, scc)| dominated_cell_over_cd(scc))
                    .collect();
                let r = Region2D { cells }.pruned();
                if !per_strategy.contains(&r) {
                    per_strategy.push(r);
                }
            }
            per_strategy.sort_by_key(|r| r.cells.len());
            let mut acc = Region2D::universe();
            for r in &per_strategy {
                acc = crate::geometry::region_intersect(&acc, r, budget.max_region_cells)?;
            }
            regions.push(ThresholdRegion { vertex: v, region: acc });
        }
        Ok(LambdaCache { analyses, regions })
    }

    pub fn is_bad(&self, v: VertexId, c: &Q, d: &Q) -> bool {
        self.regions[v].region.contains(&(c.clone(), d.clone()))
    }
}

/// Exact Λ(v) as a region over `(c, d)`.
pub fn lambda_region(arena: &Arena, v: VertexId, budget: &Budget) -> Result<ThresholdRegion> {
    let cache = LambdaCache::build(arena, budget)?;
    Ok(cache.regions[v].clone())
}

/// Result of checking a lasso as a witness for `ASV(v) > c`.
#[derive(Debug, Clone)]
pub struct WitnessCheck {
    pub accepted: bool,
    /// The lasso's payoff pair `(c', d)`.
    pub payoff: (Q, Q),
}

/// A lasso starting at `v` witnesses `ASV(v) > c` iff its payoff `(c',d)`
/// has `c' > c` and none of its vertices is `(c,d)`-bad.
pub fn check_witness(
    arena: &Arena,
    cache: &LambdaCache,
    v: VertexId,
    lasso: &Lasso,
    c: &Q,
) -> Result<WitnessCheck> {
    lasso.validate(arena)?;
    if lasso.start() != v {
        return Err(Error::invalid(format!(
            "witness lasso must start at {}, starts at {}",
            arena.name(v),
            arena.name(lasso.start())
        )));
    }
    let payoff = payoff_of_lasso(arena, lasso, &PayoffKind::MeanPayoff);
    let (c_prime, d) = payoff.clone();
    let accepted = c_prime > *c && lasso.vertices().iter().all(|&u| !cache.is_bad(u, c, &d));
    Ok(WitnessCheck { accepted, payoff })
}

/// The small-witness certificate: an access path into an SCC, two simple
/// cycles with mixing coefficients realizing payoff `(c', d)`, connector
/// paths between the cycles, and one memoryless Player-0 refutation
/// strategy per play vertex certifying non-badness at `(c, d)`.
#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub vertex: VertexId,
    pub threshold_c: Q,
    /// From `vertex` to `cycle1[0]`, inclusive.
    pub access_path: Vec<VertexId>,
    /// Rotated so the play enters at index 0.
    pub cycle1: Vec<VertexId>,
    pub cycle2: Vec<VertexId>,
    /// From `cycle1[0]` to `cycle2[0]`, inclusive.
    pub bridge_to: Vec<VertexId>,
    /// From `cycle2[0]` back to `cycle1[0]`, inclusive.
    pub bridge_back: Vec<VertexId>,
    pub alpha: Q,
    pub beta: Q,
    pub c_prime: Q,
    pub d: Q,
    /// Per script vertex: a memoryless Player-0 strategy (edge choice per
    /// vertex) refuting `(c,d)`-badness there.
    pub refutations: BTreeMap<VertexId, Vec<Option<usize>>>,
}

impl WitnessCertificate {
    /// All vertices on the witness play.
    pub fn script_vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .access_path
            .iter()
            .chain(self.cycle1.iter())
            .chain(self.cycle2.iter())
            .chain(self.bridge_to.iter())
            .chain(self.bridge_back.iter())
            .copied()
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Size measure: vertices stored plus refutation entries.
    pub fn size(&self) -> u64 {
        let script = self.access_path.len()
            + self.cycle1.len()
            + self.cycle2.len()
            + self.bridge_to.len()
            + self.bridge_back.len();
        let refutation_entries: usize = self
            .refutations
            .values()
            .map(|choice| choice.iter().filter(|c| c.is_some()).count())
            .sum();
        (script + refutation_entries + 4) as u64
    }

    /// The ultimately periodic play whose cycle mixes `cycle1` and `cycle2`
    /// in the certificate's proportions, scaled by `t`. With empty
    /// connectors (or a degenerate coefficient) the payoff is exactly
    /// `(c', d)`; otherwise it approaches it as `t` grows.
    pub fn induced_lasso(&self, t: usize) -> Lasso {
        let prefix: Vec<VertexId> = self.access_path[..self.access_path.len() - 1].to_vec();
        let t = t.max(1);
        let mut cycle: Vec<VertexId> = Vec::new();
        if self.beta.is_zero() {
            for _ in 0..t {
                cycle.extend_from_slice(&self.cycle1);
            }
            return Lasso::new(prefix, cycle);
        }
        // alpha and beta share their reduced denominator (they sum to 1), so
        // repetition counts proportional to the numerators hit the mix
        // exactly once cross-scaled by the other cycle's length.
        let big_to_usize = |b: &num_bigint::BigInt| -> usize {
            usize::try_from(b).expect("mixing numerator fits a machine word")
        };
        let n1 = big_to_usize(self.alpha.numer()) * self.cycle2.len() * t;
        let n2 = big_to_usize(self.beta.numer()) * self.cycle1.len() * t;
        for _ in 0..n1 {
            cycle.extend_from_slice(&self.cycle1);
        }
        cycle.extend_from_slice(&self.bridge_to[..self.bridge_to.len() - 1]);
        for _ in 0..n2 {
            cycle.extend_from_slice(&self.cycle2);
        }
        cycle.extend_from_slice(&self.bridge_back[..self.bridge_back.len() - 1]);
        Lasso::new(prefix, cycle)
    }
}

fn rotate_to(cycle: &[VertexId], entry: VertexId) -> Vec<VertexId> {
    let pos = cycle.iter().position(|&v| v == entry).expect("entry lies on the cycle");
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[pos..]);
    out.extend_from_slice(&cycle[..pos]);
    out
}

/// Decides `ASV(v) > c`; on a positive answer also returns a certificate.
///
/// Search: for every SCC reachable from `v` and every ordered pair of its
/// simple cycles, the valid mixing coefficients form finitely many
/// subintervals of [0,1] cut by the Λ-region facets of the arena's vertices
/// and the threshold crossing; each cut point and midpoint is tested
/// exactly (threshold inequality, non-badness of the cycle vertices,
/// existence of bad-vertex-free access and connector paths), in
/// deterministic order. The first feasible candidate yields the
/// certificate.
pub fn asv_threshold(
    arena: &Arena,
    v: VertexId,
    c: &Q,
    budget: &Budget,
) -> Result<(bool, Option<WitnessCertificate>)> {
    let cache = LambdaCache::build(arena, budget)?;
    asv_threshold_with_cache(arena, &cache, v, c, budget)
}

pub fn asv_threshold_with_cache(
    arena: &Arena,
    cache: &LambdaCache,
    v: VertexId,
    c: &Q,
    budget: &Budget,
) -> Result<(bool, Option<WitnessCertificate>)> {
    let reach = reachable_from(arena, v);
    let scc = scc_decompose(arena);

    for comp_idx in scc.nontrivial(arena) {
        let comp = scc.components[comp_idx].clone();
        if !comp.iter().any(|&u| reach[u]) {
            continue;
        }
        let cycles = enumerate_simple_cycles(arena, &comp, budget.max_cycles)?;
        let n = cycles.cycles.len();
        for i in 0..n {
            for j in 0..n {
                let l1 = &cycles.cycles[i];
                let l2 = &cycles.cycles[j];
                for alpha in candidate_alphas(arena, cache, c, &l1.mean, &l2.mean, i == j) {
                    if let Some(cert) = try_candidate(
                        arena,
                        cache,
                        v,
                        c,
                        &comp,
                        &l1.vertices,
                        &l2.vertices,
                        &alpha,
                        i == j,
                    ) {
                        return Ok((true, Some(cert)));
                    }
                }
            }
        }
    }
    Ok((false, None))
}

/// Candidate mixing coefficients for one ordered cycle pair: the Λ-facet
/// crossings of `d(α)` and the threshold crossing of `c'(α)` cut [0,1] into
/// pieces; testing every cut point and every midpoint visits each piece.
fn candidate_alphas(
    arena: &Arena,
    cache: &LambdaCache,
    c: &Q,
    mean1: &(Q, Q),
    mean2: &(Q, Q),
    same_cycle: bool,
) -> Vec<Q> {
    if same_cycle {
        return vec![Q::one()];
    }
    // c'(α) = m0_2 + α (m0_1 - m0_2) and d(α) = m1_2 + α (m1_1 - m1_2).
    let slope_d = &mean1.1 - &mean2.1;
    let offset_d = mean2.1.clone();
    let mut criticals: Vec<Q> = vec![Q::zero(), Q::one()];
    let slope_c = &mean1.0 - &mean2.0;
    if !slope_c.is_zero() {
        criticals.push((c - &mean2.0) / &slope_c);
    }
    if !slope_d.is_zero() {
        for v in arena.vertices() {
            for cell in &cache.regions[v].region.cells {
                for hp in &cell.constraints {
                    // Badness flips where a0*c + a1*d(α) = b.
                    if hp.a[1].is_zero() {
                        continue;
                    }
                    let denom = &hp.a[1] * &slope_d;
                    if denom.is_zero() {
                        continue;
                    }
                    criticals.push((&hp.b - &hp.a[0] * c - &hp.a[1] * &offset_d) / &denom);
                }
            }
        }
    }
    criticals.retain(|a| *a >= Q::zero() && *a <= Q::one());
    criticals.sort();
    criticals.dedup();
    let mut candidates = Vec::with_capacity(criticals.len() * 2);
    for k in 0..criticals.len() {
        candidates.push(criticals[k].clone());
        if k + 1 < criticals.len() {
            let mid = (&criticals[k] + &criticals[k + 1]) / crate::rational::qi(2);
            candidates.push(mid);
        }
    }
    candidates
}

#[allow(clippy::too_many_arguments)]
fn try_candidate(
    arena: &Arena,
    cache: &LambdaCache,
    v: VertexId,
    c: &Q,
    comp: &[VertexId],
    cycle1: &[VertexId],
    cycle2: &[VertexId],
    alpha: &Q,
    same_cycle: bool,
) -> Option<WitnessCertificate> {
    let beta = Q::one() - alpha;
    let m1 = cycle_mean(arena, cycle1);
    let m2 = cycle_mean(arena, cycle2);
    let c_prime = alpha * &m1.0 + &beta * &m2.0;
    let d = alpha * &m1.1 + &beta * &m2.1;
    if c_prime <= *c {
        return None;
    }
    if cycle1.iter().chain(cycle2.iter()).any(|&u| cache.is_bad(u, c, &d)) {
        return None;
    }
    let not_bad = |u: VertexId| !cache.is_bad(u, c, &d);
    let comp_set: HashSet<VertexId> = comp.iter().copied().collect();
    let in_comp_not_bad = |u: VertexId| comp_set.contains(&u) && not_bad(u);

    // Access path from v to cycle1, over non-bad vertices anywhere.
    let targets1: HashSet<VertexId> = cycle1.iter().copied().collect();
    let access = shortest_path_within(arena, v, &targets1, &not_bad)?;
    let entry1 = *access.last().unwrap();
    let cycle1 = rotate_to(cycle1, entry1);

    let (cycle2, bridge_to, bridge_back) = if same_cycle {
        (cycle1.clone(), vec![entry1], vec![entry1])
    } else {
        let targets2: HashSet<VertexId> = cycle2.iter().copied().collect();
        let bridge_to = shortest_path_within(arena, entry1, &targets2, &in_comp_not_bad)?;
        let entry2 = *bridge_to.last().unwrap();
        let cycle2 = rotate_to(cycle2, entry2);
        let back_target: HashSet<VertexId> = [entry1].into_iter().collect();
        let bridge_back = shortest_path_within(arena, entry2, &back_target, &in_comp_not_bad)?;
        (cycle2, bridge_to, bridge_back)
    };

    let mut refutations = BTreeMap::new();
    let script: Vec<VertexId> = {
        let mut vs: Vec<VertexId> = access
            .iter()
            .chain(cycle1.iter())
            .chain(cycle2.iter())
            .chain(bridge_to.iter())
            .chain(bridge_back.iter())
            .copied()
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    for &u in &script {
        refutations.insert(u, find_refutation(&cache.analyses, u, c, &d)?);
    }

    let (alpha, beta) = if same_cycle { (Q::one(), Q::zero()) } else { (alpha.clone(), beta) };
    Some(WitnessCertificate {
        vertex: v,
        threshold_c: c.clone(),
        access_path: access,
        cycle1,
        cycle2,
        bridge_to,
        bridge_back,
        alpha,
        beta,
        c_prime,
        d,
        refutations,
    })
}

/// The exact adversarial Stackelberg value of a vertex, with the attainment
/// flag of the defining supremum.
#[derive(Debug, Clone)]
pub struct AsvResult {
    pub value: Q,
    pub attained: bool,
}

/// Computes the value exactly: build the visited-set extension from `v`;
/// for each of its SCCs take the supremum of `c` over
/// `∃(x,y): x > c, (x,y) achievable in the SCC, (c,y) not bad at any vertex
/// in the SCC's visited set`; return the maximum over SCCs. Each supremum
/// is an exact three-variable linear program on the product cells.
pub fn asv_value(arena: &Arena, v: VertexId, budget: &Budget) -> Result<AsvResult> {
    let cache = LambdaCache::build(arena, budget)?;
    asv_value_with_cache(arena, &cache, v, budget)
}

pub fn asv_value_with_cache(
    arena: &Arena,
    cache: &LambdaCache,
    v: VertexId,
    budget: &Budget,
) -> Result<AsvResult> {
    let ext = build_extended(arena, v, budget.max_ext_states)?;
    let scc = scc_decompose(&ext.arena);
    let mut best: Option<(Q, bool)> = None;

    for comp_idx in scc.nontrivial(&ext.arena) {
        let comp = &scc.components[comp_idx];
        let mask = ext.visited_mask(comp[0]);
        debug_assert!(comp.iter().all(|&s| ext.visited_mask(s) == mask));
        let mut proj: Vec<VertexId> = comp.iter().map(|&s| ext.base_vertex(s)).collect();
        proj.sort_unstable();
        proj.dedup();

        let phi = phi_region(arena, &proj, budget)?;
        if phi.region.cells.is_empty() {
            continue;
        }
        // Bad thresholds of the visited set, over (c, y).
        let mut psi = Region2D::empty();
        for u in arena.vertices() {
            if mask & (1 << u) != 0 {
                psi = region_union(&psi, &cache.regions[u].region);
            }
        }
        let not_psi = region_complement(&psi, budget.max_region_cells)?;

        // sup { c | ∃ x,y:  x > c, Φ(x,y), ¬Ψ(c,y) } over variables (c,x,y).
        for phi_cell in &phi.region.cells {
            for np_cell in &not_psi.cells {
                let mut rows: Vec<lp::Row> = Vec::new();
                for hp in &phi_cell.constraints {
                    rows.push(lp::Row {
                        coeffs: vec![Q::zero(), hp.a[0].clone(), hp.a[1].clone()],
                        b: hp.b.clone(),
                        strict: hp.strict,
                    });
                }
                for hp in &np_cell.constraints {
                    rows.push(lp::Row {
                        coeffs: vec![hp.a[0].clone(), Q::zero(), hp.a[1].clone()],
                        b: hp.b.clone(),
                        strict: hp.strict,
                    });
                }
                rows.push(lp::Row { coeffs: vec![-Q::one(), Q::one(), Q::zero()], b: Q::zero(), strict: true });
                match lp::maximize(&rows, 3, &[Q::one(), Q::zero(), Q::zero()]) {
                    lp::Extremum::Finite { value, attained } => match &mut best {
                        None => best = Some((value, attained)),
                        Some((bv, ba)) => {
                            if value > *bv {
                                *bv = value;
                                *ba = attained;
                            } else if value == *bv {
                                *ba = *ba || attained;
                            }
                        }
                    },
                    lp::Extremum::Empty => {}
                    lp::Extremum::Unbounded => unreachable!("c is bounded by achievable payoffs"),
                }
            }
        }
    }
    let (value, attained) = best.expect("some cycle is reachable from every vertex");
    Ok(AsvResult { value, attained })
}

/// Player 1's best-response value against a finite-memory Player-0
/// strategy: the maximal mean payoff in dimension 1 reachable in the
/// product, plus a lasso (projected back to the arena) attaining it.
pub fn best_response_mp(arena: &Arena, strategy: &MealyStrategy, v: VertexId) -> Result<(Q, Lasso)> {
    let product = product_with_strategy(arena, strategy, Player::P0)?;
    let start = product.entry[v];
    let reach = reachable_from(&product.arena, start);
    let scc = scc_decompose(&product.arena);
    let mut best: Option<(Q, Vec<VertexId>)> = None;
    for comp_idx in scc.nontrivial(&product.arena) {
        let comp = &scc.components[comp_idx];
        if !comp.iter().any(|&u| reach[u]) {
            continue;
        }
        let (value, lasso) = max_mean_cycle(&product.arena, 1, comp);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, lasso.cycle));
        }
    }
    let (value, cycle) = best.expect("a cycle is reachable");
    let targets: HashSet<VertexId> = cycle.iter().copied().collect();
    let path = shortest_path_within(&product.arena, start, &targets, &|_| true)
        .expect("cycle is reachable");
    let entry = *path.last().unwrap();
    let rotated = rotate_to(&cycle, entry);
    let prefix: Vec<VertexId> =
        path[..path.len() - 1].iter().map(|&p| product.project[p].0).collect();
    let base_cycle: Vec<VertexId> = rotated.iter().map(|&p| product.project[p].0).collect();
    Ok((value, Lasso::new(prefix, base_cycle)))
}

// ---------------------------------------------------------------------------
// Leader strategy synthesis
// ---------------------------------------------------------------------------

/// Executable leader strategy built from a witness certificate: follow the
/// scripted play whose i-th block repeats cycle1 `ceil(alpha*i) * |cycle2|`
/// times and cycle2 `ceil(beta*i) * |cycle1|` times — the cross-length
/// factors turn the mean-mixing coefficients into time fractions, so the
/// play's payoff tends to exactly `(c', d)` while the connectors vanish.
/// On any deviation by Player 1 at a script vertex `w`, the strategy
/// switches forever to the memoryless refutation attached to `w`.
#[derive(Debug, Clone)]
pub struct LeaderStrategy {
    pub certificate: WitnessCertificate,
    /// First block index; larger starts tighten early running averages.
    pub start_block: u64,
}

/// Builds the leader strategy; `precision > 0` selects the starting block
/// index `ceil(1/precision)`, so connector dilution in the early blocks is
/// already of order `precision`.
pub fn synthesize_leader_strategy(cert: &WitnessCertificate, precision: &Q) -> LeaderStrategy {
    assert!(precision.is_positive(), "precision must be positive");
    let start_block: u64 = precision
        .recip()
        .ceil()
        .to_integer()
        .try_into()
        .unwrap_or(u64::MAX)
        .max(1);
    LeaderStrategy { certificate: cert.clone(), start_block }
}

impl LeaderStrategy {
    /// The scripted play, as a vertex stream of the given length.
    pub fn script(&self, steps: usize) -> Vec<VertexId> {
        let cert = &self.certificate;
        let mut out: Vec<VertexId> = Vec::with_capacity(steps + 8);
        out.extend(cert.access_path.iter().copied());
        let pass1: Vec<VertexId> = {
            let mut p = cert.cycle1[1..].to_vec();
            p.push(cert.cycle1[0]);
            p
        };
        let pass2: Vec<VertexId> = {
            let mut p = cert.cycle2[1..].to_vec();
            p.push(cert.cycle2[0]);
            p
        };
        let mut i = self.start_block;
        while out.len() < steps {
            let n1 = ceil_mul(&cert.alpha, i) * cert.cycle2.len() as u64;
            let n2 = ceil_mul(&cert.beta, i) * cert.cycle1.len() as u64;
            for _ in 0..n1 {
                out.extend(pass1.iter().copied());
            }
            if cert.bridge_to.len() > 1 {
                out.extend(cert.bridge_to[1..].iter().copied());
            }
            for _ in 0..n2 {
                out.extend(pass2.iter().copied());
            }
            if cert.bridge_back.len() > 1 {
                out.extend(cert.bridge_back[1..].iter().copied());
            }
            i += 1;
        }
        out.truncate(steps);
        out
    }

    /// Human-readable description.
    pub fn summary(&self, arena: &Arena) -> String {
        let cert = &self.certificate;
        let names =
            |vs: &[VertexId]| vs.iter().map(|&v| arena.name(v)).collect::<Vec<_>>().join(" ");
        format!(
            "from {}: reach [{}], then repeat blocks (cycle1 [{}] x {}*ceil({}*i), cycle2 [{}] x {}*ceil({}*i)) \
             with connectors [{}] / [{}]; certified payoff ({}, {}) against threshold {}; \
             on deviation at a script vertex switch to its memoryless punishment",
            arena.name(cert.vertex),
            names(&cert.access_path),
            names(&cert.cycle1),
            cert.cycle2.len(),
            fmt_q(&cert.alpha),
            names(&cert.cycle2),
            cert.cycle1.len(),
            fmt_q(&cert.beta),
            names(&cert.bridge_to),
            names(&cert.bridge_back),
            fmt_q(&cert.c_prime),
            fmt_q(&cert.d),
            fmt_q(&cert.threshold_c),
        )
    }

    /// Runs the strategy against an opponent for `steps` vertices and
    /// returns the trace. The opponent picks successors at Player-1
    /// vertices; a deviation from the script triggers the punishment tail.
    pub fn simulate(
        &self,
        arena: &Arena,
        steps: usize,
        mut opponent: impl FnMut(VertexId, &[VertexId]) -> VertexId,
    ) -> Vec<VertexId> {
        let script = self.script(steps + 1);
        let cert = &self.certificate;
        let mut trace: Vec<VertexId> = vec![script[0]];
        let mut punishment: Option<&Vec<Option<usize>>> = None;
        let mut pos = 0usize;
        while trace.len() < steps {
            let cur = *trace.last().unwrap();
            let next = match punishment {
                Some(choice) => match arena.owner(cur) {
                    Player::P0 => arena.edge(choice[cur].expect("total strategy")).dst,
                    Player::P1 => opponent(cur, &trace),
                },
                None => {
                    let scripted = script[pos + 1];
                    match arena.owner(cur) {
                        Player::P0 => scripted,
                        Player::P1 => {
                            let chosen = opponent(cur, &trace);
                            if chosen != scripted {
                                punishment =
                                    Some(cert.refutations.get(&cur).expect("script vertex"));
                            }
                            chosen
                        }
                    }
                }
            };
            trace.push(next);
            pos += 1;
        }
        trace
    }
}

fn ceil_mul(x: &Q, i: u64) -> u64 {
    (x * crate::rational::qi(i as i64)).ceil().to_integer().try_into().unwrap_or(0)
}

/// Mean of dimension-0 weights along a vertex trace.
pub fn running_mp0(arena: &Arena, trace: &[VertexId]) -> Q {
    let mut acc = Q::zero();
    let mut edges = 0i64;
    for w in trace.windows(2) {
        let e = arena.edge_between(w[0], w[1]).expect("trace step is an edge");
        acc += &e.w0;
        edges += 1;
    }
    if edges == 0 {
        Q::zero()
    } else {
        acc / crate::rational::qi(edges)
    }
}

// ---------------------------------------------------------------------------
// Certificate serialization and independent verification
// ---------------------------------------------------------------------------

pub fn witness_to_json(arena: &Arena, cert: &WitnessCertificate) -> Value {
    let names = |vs: &[VertexId]| -> Value {
        Value::Array(vs.iter().map(|&v| Value::String(arena.name(v).to_string())).collect())
    };
    let refutations: Value = Value::Object(
        cert.refutations
            .iter()
            .map(|(&u, choice)| {
                let map: serde_json::Map<String, Value> = choice
                    .iter()
                    .enumerate()
                    .filter_map(|(v, c)| {
                        c.map(|e| {
                            (
                                arena.name(v).to_string(),
                                Value::String(arena.name(arena.edge(e).dst).to_string()),
                            )
                        })
                    })
                    .collect();
                (arena.name(u).to_string(), Value::Object(map))
            })
            .collect(),
    );
    json!({
        "vertex": arena.name(cert.vertex),
        "c": fmt_q(&cert.threshold_c),
        "alpha": fmt_q(&cert.alpha),
        "beta": fmt_q(&cert.beta),
        "c_prime": fmt_q(&cert.c_prime),
        "d": fmt_q(&cert.d),
        "access_path": names(&cert.access_path),
        "cycle1": names(&cert.cycle1),
        "cycle2": names(&cert.cycle2),
        "bridge_to": names(&cert.bridge_to),
        "bridge_back": names(&cert.bridge_back),
        "refutations": refutations,
    })
}

pub fn witness_from_json(arena: &Arena, v: &Value) -> Result<WitnessCertificate> {
    let get = |key: &str| -> Result<&Value> {
        v.get(key).ok_or_else(|| Error::invalid(format!("certificate misses `{key}`")))
    };
    let get_q = |key: &str| -> Result<Q> {
        get(key)?
            .as_str()
            .ok_or_else(|| Error::invalid(format!("`{key}` must be a rational string")))
            .and_then(parse_q)
    };
    let get_path = |key: &str| -> Result<Vec<VertexId>> {
        get(key)?
            .as_array()
            .ok_or_else(|| Error::invalid(format!("`{key}` must be an array")))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| Error::invalid("vertex ids are strings"))
                    .and_then(|s| arena.vertex(s))
            })
            .collect()
    };
    let vertex = arena.vertex(
        get("vertex")?.as_str().ok_or_else(|| Error::invalid("`vertex` must be a string"))?,
    )?;
    let mut refutations = BTreeMap::new();
    let refs = get("refutations")?
        .as_object()
        .ok_or_else(|| Error::invalid("`refutations` must be an object"))?;
    for (uname, map) in refs {
        let u = arena.vertex(uname)?;
        let map =
            map.as_object().ok_or_else(|| Error::invalid("refutation entries are objects"))?;
        let mut choice: Vec<Option<usize>> = vec![None; arena.vertex_count()];
        for (src, dst) in map {
            let s = arena.vertex(src)?;
            let d = arena.vertex(
                dst.as_str().ok_or_else(|| Error::invalid("successor must be a string"))?,
            )?;
            let edge = arena
                .out_edges(s)
                .iter()
                .copied()
                .find(|&e| arena.edge(e).dst == d)
                .ok_or_else(|| Error::invalid(format!("{src} -> {dst} is not an edge")))?;
            choice[s] = Some(edge);
        }
        refutations.insert(u, choice);
    }
    Ok(WitnessCertificate {
        vertex,
        threshold_c: get_q("c")?,
        access_path: get_path("access_path")?,
        cycle1: get_path("cycle1")?,
        cycle2: get_path("cycle2")?,
        bridge_to: get_path("bridge_to")?,
        bridge_back: get_path("bridge_back")?,
        alpha: get_q("alpha")?,
        beta: get_q("beta")?,
        c_prime: get_q("c_prime")?,
        d: get_q("d")?,
        refutations,
    })
}

/// Outcome of independently verifying a certificate.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    pub work_units: u64,
    pub failures: Vec<String>,
}

/// Re-checks a witness certificate from scratch: structure, payoff
/// arithmetic, and every per-vertex refutation strategy. Shares no state
/// with the search that produced the certificate.
pub fn verify_witness(
    arena: &Arena,
    cert: &WitnessCertificate,
    budget: &Budget,
) -> Result<VerifyReport> {
    let mut work: u64 = 0;
    let mut failures: Vec<String> = Vec::new();
    let check = |ok: bool, msg: &str, failures: &mut Vec<String>| {
        if !ok {
            failures.push(msg.to_string());
        }
    };

    let edge_ok = |path: &[VertexId], work: &mut u64| -> bool {
        path.windows(2).all(|w| {
            *work += 1;
            arena.edge_between(w[0], w[1]).is_some()
        })
    };
    check(
        cert.access_path.first() == Some(&cert.vertex),
        "access path starts at the vertex",
        &mut failures,
    );
    check(edge_ok(&cert.access_path, &mut work), "access path edges", &mut failures);
    for (name, cycle) in [("cycle1", &cert.cycle1), ("cycle2", &cert.cycle2)] {
        let mut closed = cycle.clone();
        closed.push(cycle[0]);
        check(edge_ok(&closed, &mut work), &format!("{name} edges"), &mut failures);
        let set: HashSet<_> = cycle.iter().collect();
        check(set.len() == cycle.len(), &format!("{name} is simple"), &mut failures);
    }
    check(edge_ok(&cert.bridge_to, &mut work), "bridge_to edges", &mut failures);
    check(edge_ok(&cert.bridge_back, &mut work), "bridge_back edges", &mut failures);
    check(
        cert.access_path.last() == cert.cycle1.first(),
        "access path ends on cycle1",
        &mut failures,
    );
    check(cert.bridge_to.first() == cert.cycle1.first(), "bridge_to leaves cycle1", &mut failures);
    check(cert.bridge_to.last() == cert.cycle2.first(), "bridge_to enters cycle2", &mut failures);
    check(
        cert.bridge_back.first() == cert.cycle2.first(),
        "bridge_back leaves cycle2",
        &mut failures,
    );
    check(
        cert.bridge_back.last() == cert.cycle1.first(),
        "bridge_back enters cycle1",
        &mut failures,
    );

    work += (cert.cycle1.len() + cert.cycle2.len()) as u64;
    let m1 = cycle_mean(arena, &cert.cycle1);
    let m2 = cycle_mean(arena, &cert.cycle2);
    check(
        cert.alpha >= Q::zero() && cert.beta >= Q::zero(),
        "coefficients non-negative",
        &mut failures,
    );
    check(&cert.alpha + &cert.beta == Q::one(), "coefficients sum to 1", &mut failures);
    check(
        &cert.alpha * &m1.0 + &cert.beta * &m2.0 == cert.c_prime,
        "c' equals the mixed MP0",
        &mut failures,
    );
    check(
        &cert.alpha * &m1.1 + &cert.beta * &m2.1 == cert.d,
        "d equals the mixed MP1",
        &mut failures,
    );
    check(cert.c_prime > cert.threshold_c, "c' exceeds the threshold", &mut failures);

    for u in cert.script_vertices() {
        work += 1;
        match cert.refutations.get(&u) {
            None => failures.push(format!("vertex {} has no refutation", arena.name(u))),
            Some(choice) => {
                let valid = choice.iter().enumerate().all(|(s, c)| match c {
                    None => arena.owner(s) != Player::P0,
                    Some(e) => arena.edge(*e).src == s,
                });
                if !valid {
                    failures.push(format!("refutation at {} is malformed", arena.name(u)));
                    continue;
                }
                match refutes_badness(arena, choice, u, &cert.threshold_c, &cert.d, budget, &mut work)
                {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!(
                        "strategy at {} does not refute ({},{})-badness",
                        arena.name(u),
                        fmt_q(&cert.threshold_c),
                        fmt_q(&cert.d)
                    )),
                    Err(e) => failures.push(format!("refutation check failed: {e}")),
                }
            }
        }
    }

    Ok(VerifyReport { ok: failures.is_empty(), work_units: work, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::rational::{q, qi};

    fn budget() -> Budget {
        Budget::default()
    }

    fn reference_game() -> (Arena, VertexId, VertexId, VertexId) {
        let a = unattainable_game();
        let v0 = a.vertex("v0").unwrap();
        let v1 = a.vertex("v1").unwrap();
        let v2 = a.vertex("v2").unwrap();
        (a, v0, v1, v2)
    }

    #[test]
    fn phi_region_of_core_scc() {
        let (a, v0, v1, _) = reference_game();
        let phi = phi_region(&a, &[v0, v1], &budget()).unwrap();
        // {(x,y): 0 <= x <= 1, 1 <= y <= 2-x}
        assert!(phi.region.contains(&(q(1, 2), q(5, 4))));
        assert!(phi.region.contains(&(qi(1), qi(1))));
        assert!(phi.region.contains(&(qi(0), qi(2))));
        assert!(!phi.region.contains(&(q(1, 2), q(7, 4))));
        assert!(!phi.region.contains(&(q(1, 2), q(1, 2))));
    }

    #[test]
    fn phi_region_of_absorbing_vertex_is_point() {
        let (a, _, _, v2) = reference_game();
        let phi = phi_region(&a, &[v2], &budget()).unwrap();
        assert!(phi.region.contains(&(qi(0), qi(1))));
        assert!(!phi.region.contains(&(qi(0), q(99, 100))));
    }

    #[test]
    fn phi_region_of_self_loop_is_point() {
        let a = self_loop(2, 3);
        let phi = phi_region(&a, &[0], &budget()).unwrap();
        assert!(phi.region.contains(&(qi(2), qi(3))));
        assert!(!phi.region.contains(&(qi(2), qi(2))));
    }

    #[test]
    fn lambda_regions_of_unattainable_game() {
        let (a, v0, v1, _) = reference_game();
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        // Λ(v0) = Λ(v1) = {c >= 0, d <= 1}.
        for v in [v0, v1] {
            let r = &cache.regions[v].region;
            assert!(r.contains(&(qi(0), qi(1))));
            assert!(r.contains(&(qi(3), qi(-2))));
            assert!(!r.contains(&(q(-1, 10), qi(0))));
            assert!(!r.contains(&(qi(1), q(11, 10))));
        }
    }

    #[test]
    fn lambda_region_of_self_loop() {
        let a = self_loop(2, 3);
        let r = lambda_region(&a, 0, &budget()).unwrap();
        assert!(r.region.contains(&(qi(2), qi(3))));
        assert!(r.region.contains(&(qi(5), qi(0))));
        assert!(!r.region.contains(&(q(19, 10), qi(3))));
        assert!(!r.region.contains(&(qi(2), q(31, 10))));
    }

    #[test]
    fn check_witness_on_mixed_lasso() {
        let (a, v0, v1, _) = reference_game();
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        // Cycle mixing [v0,v1] three times and [v1] twice: payoff (3/4, 5/4).
        let cycle = vec![v0, v1, v0, v1, v0, v1, v1, v1];
        let lasso = Lasso::new(vec![], cycle);
        let res = check_witness(&a, &cache, v0, &lasso, &q(1, 2)).unwrap();
        assert_eq!(res.payoff, (q(3, 4), q(5, 4)));
        assert!(res.accepted);
    }

    #[test]
    fn check_witness_rejects_on_bad_vertex() {
        let (a, v0, v1, _) = reference_game();
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        // (v0 v1)^ω has payoff (1,1) and (1/2,1) is bad on all its vertices.
        let lasso = Lasso::new(vec![], vec![v0, v1]);
        let res = check_witness(&a, &cache, v0, &lasso, &q(1, 2)).unwrap();
        assert_eq!(res.payoff, (qi(1), qi(1)));
        assert!(!res.accepted);
    }

    #[test]
    fn check_witness_self_loop() {
        let a = self_loop(2, 3);
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        let lasso = Lasso::new(vec![], vec![0]);
        let res = check_witness(&a, &cache, 0, &lasso, &qi(1)).unwrap();
        assert!(res.accepted);
        assert_eq!(res.payoff, (qi(2), qi(3)));
    }

    #[test]
    fn threshold_finds_the_mixed_witness() {
        let (a, v0, v1, _) = reference_game();
        let (yes, cert) = asv_threshold(&a, v0, &q(1, 2), &budget()).unwrap();
        assert!(yes);
        let cert = cert.unwrap();
        assert_eq!(cert.cycle1, vec![v0, v1]);
        assert_eq!(cert.cycle2, vec![v1]);
        assert_eq!(cert.alpha, q(3, 4));
        assert_eq!(cert.beta, q(1, 4));
        assert_eq!(cert.c_prime, q(3, 4));
        assert_eq!(cert.d, q(5, 4));
    }

    #[test]
    fn threshold_rejects_at_value() {
        let (a, v0, _, _) = reference_game();
        let (yes, cert) = asv_threshold(&a, v0, &qi(1), &budget()).unwrap();
        assert!(!yes);
        assert!(cert.is_none());
    }

    #[test]
    fn threshold_respects_weight_bound() {
        let a = self_loop(2, 3);
        let (yes, _) = asv_threshold(&a, 0, &qi(5), &budget()).unwrap();
        assert!(!yes);
        let (yes, cert) = asv_threshold(&a, 0, &qi(1), &budget()).unwrap();
        assert!(yes);
        let cert = cert.unwrap();
        assert_eq!(cert.c_prime, qi(2));
        assert_eq!(cert.d, qi(3));
    }

    #[test]
    fn asv_value_of_unattainable_game_is_one() {
        let (a, v0, _, _) = reference_game();
        let res = asv_value(&a, v0, &budget()).unwrap();
        assert_eq!(res.value, qi(1));
        assert!(!res.attained);
    }

    #[test]
    fn asv_value_of_self_loop() {
        let a = self_loop(2, 3);
        let res = asv_value(&a, 0, &budget()).unwrap();
        assert_eq!(res.value, qi(2));
    }

    #[test]
    fn asv_value_of_no_best_response_game() {
        // All MP0 weights are zero, so the value is 0 from every vertex.
        let a = no_best_response_game();
        let v1 = a.vertex("1").unwrap();
        let res = asv_value(&a, v1, &budget()).unwrap();
        assert_eq!(res.value, qi(0));
    }

    #[test]
    fn best_responses_in_no_best_response_game() {
        let a = no_best_response_game();
        let v1 = a.vertex("1").unwrap();
        let v2 = a.vertex("2").unwrap();
        let v3 = a.vertex("3").unwrap();
        // σ0 = "at 2 stay; at 3 back to 2": best response pays 1.
        let mut choice = vec![None; a.vertex_count()];
        choice[v2] = Some(v2);
        choice[v3] = Some(v2);
        let s = MealyStrategy::memoryless(&a, Player::P0, &choice).unwrap();
        let (value, lasso) = best_response_mp(&a, &s, v1).unwrap();
        assert_eq!(value, qi(1));
        lasso.validate(&a).unwrap();
        // σ0 = "at 2 go to 3; at 3 stay": Player 1 reaches the (0,2) loop.
        let mut choice = vec![None; a.vertex_count()];
        choice[v2] = Some(v3);
        choice[v3] = Some(v3);
        let s = MealyStrategy::memoryless(&a, Player::P0, &choice).unwrap();
        let (value, lasso) = best_response_mp(&a, &s, v1).unwrap();
        assert_eq!(value, qi(2));
        assert!(lasso.vertices().contains(&v3));
    }

    #[test]
    fn best_response_tie_in_unattainable_game() {
        let (a, v0, v1, v2) = reference_game();
        let mut choice = vec![None; a.vertex_count()];
        choice[v1] = Some(v0);
        choice[v2] = Some(v2);
        let s = MealyStrategy::memoryless(&a, Player::P0, &choice).unwrap();
        let (value, _) = best_response_mp(&a, &s, v0).unwrap();
        assert_eq!(value, qi(1));
    }

    #[test]
    fn certificate_round_trips_and_verifies() {
        let (a, v0, _, _) = reference_game();
        let (_, cert) = asv_threshold(&a, v0, &q(1, 2), &budget()).unwrap();
        let cert = cert.unwrap();
        let j = witness_to_json(&a, &cert);
        let back = witness_from_json(&a, &j).unwrap();
        assert_eq!(back.alpha, cert.alpha);
        assert_eq!(back.refutations, cert.refutations);
        let report = verify_witness(&a, &back, &budget()).unwrap();
        assert!(report.ok, "{:?}", report.failures);
        assert!(report.work_units > 0);
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let (a, v0, _, _) = reference_game();
        let (_, cert) = asv_threshold(&a, v0, &q(1, 2), &budget()).unwrap();
        let mut cert = cert.unwrap();
        cert.c_prime = qi(2);
        let report = verify_witness(&a, &cert, &budget()).unwrap();
        assert!(!report.ok);
    }

    #[test]
    fn induced_lasso_of_certificate_is_accepted() {
        let (a, v0, _, _) = reference_game();
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        let (_, cert) = asv_threshold_with_cache(&a, &cache, v0, &q(1, 2), &budget()).unwrap();
        let cert = cert.unwrap();
        let mut accepted = false;
        for t in [1usize, 2, 4, 8, 16, 32] {
            let lasso = cert.induced_lasso(t);
            lasso.validate(&a).unwrap();
            let res = check_witness(&a, &cache, v0, &lasso, &cert.threshold_c).unwrap();
            if res.accepted {
                accepted = true;
                break;
            }
        }
        assert!(accepted);
    }

    #[test]
    fn leader_strategy_script_and_simulation() {
        let (a, v0, _, _) = reference_game();
        let (_, cert) = asv_threshold(&a, v0, &q(1, 2), &budget()).unwrap();
        let cert = cert.unwrap();
        let leader = synthesize_leader_strategy(&cert, &q(1, 4));
        let script = leader.script(10_000);
        assert_eq!(script[0], v0);
        // Compliant opponent: follows the script.
        let script_for_opp = leader.script(10_001);
        let trace = leader.simulate(&a, 10_000, |_, hist| script_for_opp[hist.len()]);
        let second_half = &trace[trace.len() / 2..];
        assert!(running_mp0(&a, second_half) > q(1, 2));
    }

    #[test]
    fn leader_strategy_punishes_deviation() {
        let (a, v0, _, v2) = reference_game();
        let (_, cert) = asv_threshold(&a, v0, &q(1, 2), &budget()).unwrap();
        let cert = cert.unwrap();
        let leader = synthesize_leader_strategy(&cert, &qi(1));
        // Opponent deviates to v2 at the first chance; the play must stay
        // legal under the punishment tail.
        let trace = leader.simulate(&a, 100, |cur, _| {
            assert_eq!(cur, v0);
            v2
        });
        assert_eq!(trace[1], v2);
        for w in trace.windows(2) {
            assert!(a.edge_between(w[0], w[1]).is_some());
        }
    }

    #[test]
    fn degenerate_single_cycle_certificate() {
        let a = self_loop(2, 3);
        let (_, cert) = asv_threshold(&a, 0, &qi(1), &budget()).unwrap();
        let cert = cert.unwrap();
        assert_eq!(cert.beta, qi(0));
        let lasso = cert.induced_lasso(1);
        assert_eq!(lasso.cycle, vec![0]);
        let leader = synthesize_leader_strategy(&cert, &qi(1));
        let script = leader.script(10);
        assert!(script.iter().all(|&v| v == 0));
    }

    #[test]
    fn approachability_ladder_below_the_value() {
        let (a, v0, _, _) = reference_game();
        let cache = LambdaCache::build(&a, &budget()).unwrap();
        for k in 1..=4u32 {
            let eps = q(1, 2i64.pow(k));
            let c = qi(1) - eps;
            let (yes, _) = asv_threshold_with_cache(&a, &cache, v0, &c, &budget()).unwrap();
            assert!(yes, "threshold {} should hold", fmt_q(&c));
        }
        let (yes, _) = asv_threshold_with_cache(&a, &cache, v0, &qi(1), &budget()).unwrap();
        assert!(!yes);
    }
}
