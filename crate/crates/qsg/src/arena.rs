//! Bi-weighted two-player arenas: data model, validation, text format,
//! strategy products and the visited-set extension.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// Dense internal vertex index. Files use string ids; declaration order
/// fixes the index, which determines every enumeration order in the crate.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P0,
    P1,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P0 => Player::P1,
            Player::P1 => Player::P0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::P0 => 0,
            Player::P1 => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub w0: Q,
    pub w1: Q,
}

impl Edge {
    pub fn weight(&self, dim: usize) -> &Q {
        match dim {
            0 => &self.w0,
            1 => &self.w1,
            _ => panic!("weight dimension must be 0 or 1"),
        }
    }
}

/// A finite bi-weighted game graph. Immutable after construction; every
/// vertex has at least one outgoing edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    names: Vec<String>,
    name_index: HashMap<String, VertexId>,
    owner: Vec<Player>,
    edges: Vec<Edge>,
    /// Outgoing edge indices per vertex, ordered by destination index.
    out: Vec<Vec<usize>>,
    init: Option<VertexId>,
    max_abs_weight: Q,
}

impl Arena {
    pub fn builder() -> ArenaBuilder {
        ArenaBuilder::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.names.len()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owner[v]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.name_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn init(&self) -> Option<VertexId> {
        self.init
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Outgoing edge indices of `v`, in deterministic order.
    pub fn out_edges(&self, v: VertexId) -> &[usize] {
        &self.out[v]
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].dst)
    }

    pub fn edge_between(&self, src: VertexId, dst: VertexId) -> Option<&Edge> {
        self.out[src]
            .iter()
            .map(|&e| &self.edges[e])
            .find(|e| e.dst == dst)
    }

    /// W, the maximum absolute weight over both dimensions.
    pub fn max_abs_weight(&self) -> &Q {
        &self.max_abs_weight
    }

    /// Parses the line-based arena format:
    ///
    /// ```text
    /// # comment
    /// player0: <id> <id> ...
    /// player1: <id> <id> ...
    /// init: <id>
    /// edge: <src> <dst> <w0> <w1>
    /// ```
    ///
    /// Weights are integers or `p/q` fractions. Vertex declaration order is
    /// the order of appearance in the `player0:` / `player1:` lines.
    pub fn parse(text: &str) -> Result<Arena> {
        let mut builder = Arena::builder();
        let mut init_name: Option<String> = None;
        let mut pending_edges: Vec<(usize, String, String, Q, Q)> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(':').ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected `key: ...`, got `{content}`"),
            })?;
            let rest = rest.trim();
            let at = |e: Error| match e {
                Error::Parse { .. } => e,
                other => Error::Parse { line, msg: other.to_string() },
            };
            match key.trim() {
                "player0" | "player1" => {
                    let player = if key.trim() == "player0" { Player::P0 } else { Player::P1 };
                    for id in rest.split_whitespace() {
                        builder.add_vertex(id, player).map_err(at)?;
                    }
                }
                "init" => {
                    if init_name.is_some() {
                        return Err(Error::Parse { line, msg: "duplicate init line".into() });
                    }
                    if rest.split_whitespace().count() != 1 {
                        return Err(Error::Parse { line, msg: "init expects one vertex id".into() });
                    }
                    init_name = Some(rest.to_string());
                }
                "edge" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 4 {
                        return Err(Error::Parse {
                            line,
                            msg: format!("edge expects `src dst w0 w1`, got `{rest}`"),
                        });
                    }
                    let w0 = parse_q(parts[2]).map_err(at)?;
                    let w1 = parse_q(parts[3]).map_err(at)?;
                    pending_edges.push((line, parts[0].to_string(), parts[1].to_string(), w0, w1));
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown key `{other}`"),
                    });
                }
            }
        }

        for (line, src, dst, w0, w1) in pending_edges {
            builder.add_edge(&src, &dst, w0, w1).map_err(|e| match e {
                Error::Parse { .. } => e,
                other => Error::Parse { line, msg: other.to_string() },
            })?;
        }
        if let Some(name) = init_name {
            builder.set_init(&name)?;
        }
        builder.build()
    }

    /// Canonical serialization: declaration order for vertices (runs of
    /// consecutive same-owner vertices share a line), edges sorted by
    /// (src, dst) index, weights in lowest terms. `parse(serialize(a))`
    /// reproduces `a` bit-exactly.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut v = 0;
        while v < self.names.len() {
            let player = self.owner[v];
            let mut run = vec![self.names[v].as_str()];
            let mut w = v + 1;
            while w < self.names.len() && self.owner[w] == player {
                run.push(self.names[w].as_str());
                w += 1;
            }
            s.push_str(&format!("player{}: {}\n", player.index(), run.join(" ")));
            v = w;
        }
        if let Some(v) = self.init {
            s.push_str(&format!("init: {}\n", self.names[v]));
        }
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by_key(|&e| (self.edges[e].src, self.edges[e].dst));
        for e in order {
            let edge = &self.edges[e];
            s.push_str(&format!(
                "edge: {} {} {} {}\n",
                self.names[edge.src],
                self.names[edge.dst],
                fmt_q(&edge.w0),
                fmt_q(&edge.w1)
            ));
        }
        s
    }

    /// The arena with only the edges satisfying `keep`. Fails when a vertex
    /// loses all its outgoing edges.
    pub fn with_edges(&self, keep: impl Fn(&Edge) -> bool) -> Result<Arena> {
        let mut builder = Arena::builder();
        for v in self.vertices() {
            builder.add_vertex(self.name(v), self.owner(v))?;
        }
        for e in self.edges() {
            if keep(e) {
                builder.add_edge(self.name(e.src), self.name(e.dst), e.w0.clone(), e.w1.clone())?;
            }
        }
        let mut arena = builder.build()?;
        arena.init = self.init;
        Ok(arena)
    }

    /// Restriction of the arena fixing one edge choice at some vertices.
    /// `choice[v] = Some(edge_idx)` keeps only that outgoing edge of `v`.
    /// Vertex set, names and owners are preserved; dropped edges are gone
    /// from the edge list too, so every consumer sees the restriction.
    pub fn restrict(&self, choice: &[Option<usize>]) -> Arena {
        let mut builder = Arena::builder();
        for v in self.vertices() {
            builder.add_vertex(self.name(v), self.owner(v)).expect("fresh builder");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let keep = match choice[e.src] {
                Some(kept) => kept == i,
                None => true,
            };
            if keep {
                builder
                    .add_edge(self.name(e.src), self.name(e.dst), e.w0.clone(), e.w1.clone())
                    .expect("edges come from a valid arena");
            }
        }
        let mut arena =
            builder.build().expect("restriction keeps one edge per restricted vertex");
        arena.init = self.init;
        arena
    }
}

#[derive(Default)]
pub struct ArenaBuilder {
    names: Vec<String>,
    name_index: HashMap<String, VertexId>,
    owner: Vec<Player>,
    edges: Vec<Edge>,
    init: Option<VertexId>,
}

impl ArenaBuilder {
    pub fn add_vertex(&mut self, name: &str, player: Player) -> Result<VertexId> {
        if self.name_index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), id);
        self.owner.push(player);
        Ok(id)
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, w0: Q, w1: Q) -> Result<()> {
        let s = *self
            .name_index
            .get(src)
            .ok_or_else(|| Error::UnknownVertex(src.to_string()))?;
        let d = *self
            .name_index
            .get(dst)
            .ok_or_else(|| Error::UnknownVertex(dst.to_string()))?;
        if self.edges.iter().any(|e| e.src == s && e.dst == d) {
            return Err(Error::DuplicateEdge(src.to_string(), dst.to_string()));
        }
        self.edges.push(Edge { src: s, dst: d, w0, w1 });
        Ok(())
    }

    pub fn set_init(&mut self, name: &str) -> Result<()> {
        let v = *self
            .name_index
            .get(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
        self.init = Some(v);
        Ok(())
    }

    pub fn build(mut self) -> Result<Arena> {
        let n = self.names.len();
        // Canonical edge order: by (src, dst). Edge indices are then
        // independent of declaration order, which keeps tie-breaking and
        // serialization deterministic.
        self.edges.sort_by_key(|e| (e.src, e.dst));
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        for (v, adjacency) in out.iter_mut().enumerate() {
            adjacency.sort_by_key(|&e| self.edges[e].dst);
            if adjacency.is_empty() {
                return Err(Error::DeadEnd(self.names[v].clone()));
            }
        }
        let mut w = Q::zero();
        for e in &self.edges {
            for dim in 0..2 {
                let a = e.weight(dim).abs();
                if a > w {
                    w = a;
                }
            }
        }
        Ok(Arena {
            names: self.names,
            name_index: self.name_index,
            owner: self.owner,
            edges: self.edges,
            out,
            init: self.init,
            max_abs_weight: w,
        })
    }
}

/// An ultimately periodic play: `prefix . cycle^ω`. The prefix may be empty;
/// the cycle may not. Consecutive vertices, including the step from the last
/// prefix vertex into the cycle and the wrap of the cycle, must be edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
}

impl Lasso {
    pub fn new(prefix: Vec<VertexId>, cycle: Vec<VertexId>) -> Lasso {
        Lasso { prefix, cycle }
    }

    pub fn size(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn start(&self) -> VertexId {
        *self.prefix.first().unwrap_or(&self.cycle[0])
    }

    /// All vertices occurring on the play.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.prefix.iter().chain(self.cycle.iter()).copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn validate(&self, arena: &Arena) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::invalid("lasso cycle must be non-empty"));
        }
        let check = |a: VertexId, b: VertexId| -> Result<()> {
            if arena.edge_between(a, b).is_none() {
                return Err(Error::invalid(format!(
                    "lasso step {} -> {} is not an edge",
                    arena.name(a),
                    arena.name(b)
                )));
            }
            Ok(())
        };
        for w in self.prefix.windows(2) {
            check(w[0], w[1])?;
        }
        if let Some(&last) = self.prefix.last() {
            check(last, self.cycle[0])?;
        }
        for w in self.cycle.windows(2) {
            check(w[0], w[1])?;
        }
        check(*self.cycle.last().unwrap(), self.cycle[0])?;
        Ok(())
    }

    /// The first `steps` vertices of the play.
    pub fn unroll(&self, steps: usize) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(steps);
        out.extend(self.prefix.iter().copied().take(steps));
        while out.len() < steps {
            for &v in &self.cycle {
                if out.len() == steps {
                    break;
                }
                out.push(v);
            }
        }
        out
    }
}

/// A finite-memory strategy as a deterministic transducer.
///
/// Operationally: standing on vertex `u` with memory `m`, the strategy's
/// player moves to `output[m][u]` when `u` is theirs; after the play moves to
/// vertex `u'` (by either player), memory becomes `update[m][u']`. The
/// initial memory already accounts for the start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyStrategy {
    pub player: Player,
    pub n_states: usize,
    pub init_state: usize,
    /// `update[state][vertex]` -> next state.
    pub update: Vec<Vec<usize>>,
    /// `output[state][vertex]` -> chosen successor, for owned vertices.
    pub output: Vec<Vec<Option<VertexId>>>,
}

impl MealyStrategy {
    /// Memoryless strategy from a per-vertex successor choice.
    pub fn memoryless(arena: &Arena, player: Player, choice: &[Option<VertexId>]) -> Result<MealyStrategy> {
        let n = arena.vertex_count();
        let mut output = vec![vec![None; n]];
        for v in arena.vertices() {
            if arena.owner(v) == player {
                let succ = choice[v].ok_or_else(|| {
                    Error::invalid(format!("memoryless strategy misses vertex {}", arena.name(v)))
                })?;
                output[0][v] = Some(succ);
            }
        }
        let s = MealyStrategy {
            player,
            n_states: 1,
            init_state: 0,
            update: vec![vec![0; n]],
            output,
        };
        s.validate(arena)?;
        Ok(s)
    }

    /// Memoryless strategy picking the first declared edge everywhere.
    pub fn first_choice(arena: &Arena, player: Player) -> MealyStrategy {
        let choice: Vec<Option<VertexId>> = arena
            .vertices()
            .map(|v| {
                if arena.owner(v) == player {
                    Some(arena.edge(arena.out_edges(v)[0]).dst)
                } else {
                    None
                }
            })
            .collect();
        MealyStrategy::memoryless(arena, player, &choice).expect("first edges always exist")
    }

    pub fn validate(&self, arena: &Arena) -> Result<()> {
        let n = arena.vertex_count();
        if self.n_states == 0 || self.init_state >= self.n_states {
            return Err(Error::invalid("strategy needs at least one state and a valid init"));
        }
        if self.update.len() != self.n_states || self.output.len() != self.n_states {
            return Err(Error::invalid("strategy tables must cover all states"));
        }
        for m in 0..self.n_states {
            if self.update[m].len() != n || self.output[m].len() != n {
                return Err(Error::invalid("strategy tables must cover all vertices"));
            }
            for v in arena.vertices() {
                if self.update[m][v] >= self.n_states {
                    return Err(Error::invalid("strategy update leaves the state set"));
                }
                if arena.owner(v) == self.player {
                    match self.output[m][v] {
                        None => {
                            return Err(Error::invalid(format!(
                                "strategy has no move at owned vertex {}",
                                arena.name(v)
                            )))
                        }
                        Some(succ) => {
                            if arena.edge_between(v, succ).is_none() {
                                return Err(Error::invalid(format!(
                                    "strategy move {} -> {} is not an edge",
                                    arena.name(v),
                                    arena.name(succ)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The move prescribed at `vertex` in memory `state`.
    pub fn pick(&self, state: usize, vertex: VertexId) -> Option<VertexId> {
        self.output[state][vertex]
    }

    pub fn next_state(&self, state: usize, observed: VertexId) -> usize {
        self.update[state][observed]
    }
}

/// Replayable transducer encoding of a Mealy strategy.
pub fn mealy_to_json(arena: &Arena, s: &MealyStrategy) -> serde_json::Value {
    let update: Vec<serde_json::Value> = (0..s.n_states)
        .map(|m| {
            let map: serde_json::Map<String, serde_json::Value> = arena
                .vertices()
                .map(|v| (arena.name(v).to_string(), serde_json::json!(s.update[m][v])))
                .collect();
            serde_json::Value::Object(map)
        })
        .collect();
    let output: Vec<serde_json::Value> = (0..s.n_states)
        .map(|m| {
            let map: serde_json::Map<String, serde_json::Value> = arena
                .vertices()
                .filter_map(|v| {
                    s.output[m][v].map(|succ| {
                        (
                            arena.name(v).to_string(),
                            serde_json::Value::String(arena.name(succ).to_string()),
                        )
                    })
                })
                .collect();
            serde_json::Value::Object(map)
        })
        .collect();
    serde_json::json!({
        "player": s.player.index(),
        "states": s.n_states,
        "init": s.init_state,
        "update": update,
        "output": output,
    })
}

pub fn mealy_from_json(arena: &Arena, v: &serde_json::Value) -> Result<MealyStrategy> {
    let n = arena.vertex_count();
    let player = match v.get("player").and_then(serde_json::Value::as_u64) {
        Some(0) => Player::P0,
        Some(1) => Player::P1,
        _ => return Err(Error::invalid("strategy `player` must be 0 or 1")),
    };
    let n_states = v
        .get("states")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::invalid("strategy needs a `states` count"))? as usize;
    let init_state = v
        .get("init")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::invalid("strategy needs an `init` state"))? as usize;
    let update_arr = v
        .get("update")
        .and_then(serde_json::Value::as_array)
        .filter(|a| a.len() == n_states)
        .ok_or_else(|| Error::invalid("strategy `update` must list every state"))?;
    let output_arr = v
        .get("output")
        .and_then(serde_json::Value::as_array)
        .filter(|a| a.len() == n_states)
        .ok_or_else(|| Error::invalid("strategy `output` must list every state"))?;
    let mut update = Vec::with_capacity(n_states);
    let mut output = Vec::with_capacity(n_states);
    for m in 0..n_states {
        let umap = update_arr[m]
            .as_object()
            .ok_or_else(|| Error::invalid("update rows are objects"))?;
        let mut urow = vec![0usize; n];
        for vertex in arena.vertices() {
            urow[vertex] = umap
                .get(arena.name(vertex))
                .and_then(serde_json::Value::as_u64)
                .ok_or_else(|| {
                    Error::invalid(format!("update misses vertex {}", arena.name(vertex)))
                })? as usize;
        }
        update.push(urow);
        let omap = output_arr[m]
            .as_object()
            .ok_or_else(|| Error::invalid("output rows are objects"))?;
        let mut orow = vec![None; n];
        for (name, succ) in omap {
            let vertex = arena.vertex(name)?;
            let succ = arena.vertex(
                succ.as_str().ok_or_else(|| Error::invalid("successors are vertex names"))?,
            )?;
            orow[vertex] = Some(succ);
        }
        output.push(orow);
    }
    let s = MealyStrategy { player, n_states, init_state, update, output };
    s.validate(arena)?;
    Ok(s)
}

/// Product of an arena with a finite-memory strategy of one player: that
/// player's choices are fixed, everything else is untouched. Vertices are
/// the pairs (vertex, memory) reachable from `(v, init_state)` for every
/// arena vertex `v`; weights and owners are inherited.
#[derive(Debug, Clone)]
pub struct StrategyProduct {
    pub arena: Arena,
    /// Product vertex -> (base vertex, memory state).
    pub project: Vec<(VertexId, usize)>,
    /// `(v, init_state)` as a product vertex, per base vertex.
    pub entry: Vec<VertexId>,
}

pub fn product_with_strategy(arena: &Arena, strategy: &MealyStrategy, player: Player) -> Result<StrategyProduct> {
    assert_eq!(strategy.player, player, "strategy player mismatch");
    strategy.validate(arena)?;

    let mut index: HashMap<(VertexId, usize), VertexId> = HashMap::new();
    let mut project: Vec<(VertexId, usize)> = Vec::new();
    let mut queue: Vec<(VertexId, usize)> = Vec::new();

    let mut intern = |key: (VertexId, usize),
                      project: &mut Vec<(VertexId, usize)>,
                      queue: &mut Vec<(VertexId, usize)>|
     -> VertexId {
        *index.entry(key).or_insert_with(|| {
            let id = project.len();
            project.push(key);
            queue.push(key);
            id
        })
    };

    let mut entry = Vec::with_capacity(arena.vertex_count());
    for v in arena.vertices() {
        entry.push(intern((v, strategy.init_state), &mut project, &mut queue));
    }

    let mut moves: Vec<Vec<(VertexId, usize)>> = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let (v, m) = queue[head];
        head += 1;
        let mut succs: Vec<(VertexId, usize)> = Vec::new();
        let targets: Vec<VertexId> = if arena.owner(v) == player {
            vec![strategy.pick(m, v).expect("validated output")]
        } else {
            arena.successors(v).collect()
        };
        for dst in targets {
            let m2 = strategy.next_state(m, dst);
            let id = intern((dst, m2), &mut project, &mut queue);
            succs.push((dst, m2));
            let _ = id;
        }
        moves.push(succs);
    }

    let mut builder = Arena::builder();
    for &(v, m) in &project {
        builder.add_vertex(&format!("{}@{}", arena.name(v), m), arena.owner(v))?;
    }
    for (pid, succs) in moves.iter().enumerate() {
        let (v, _) = project[pid];
        for &(dst, m2) in succs {
            let base = arena.edge_between(v, dst).expect("validated edge");
            let src_name = format!("{}@{}", arena.name(v), project[pid].1);
            let dst_name = format!("{}@{}", arena.name(dst), m2);
            builder.add_edge(&src_name, &dst_name, base.w0.clone(), base.w1.clone())?;
        }
    }
    let product = builder.build()?;
    Ok(StrategyProduct { arena: product, project, entry })
}

/// The arena `V x 2^V` restricted to states reachable from `(v, {v})`.
/// The second component accumulates the set of visited base vertices.
#[derive(Debug, Clone)]
pub struct ExtendedArena {
    pub arena: Arena,
    /// Extended vertex -> (base vertex, visited-set bitmask).
    pub states: Vec<(VertexId, u64)>,
    /// The start state `(v, {v})`.
    pub start: VertexId,
}

impl ExtendedArena {
    pub fn base_vertex(&self, ext: VertexId) -> VertexId {
        self.states[ext].0
    }

    pub fn visited_mask(&self, ext: VertexId) -> u64 {
        self.states[ext].1
    }
}

fn mask_name(arena: &Arena, mask: u64) -> String {
    let ids: Vec<&str> = arena
        .vertices()
        .filter(|&v| mask & (1 << v) != 0)
        .map(|v| arena.name(v))
        .collect();
    format!("{{{}}}", ids.join(","))
}

/// Builds the reachable part of the extended arena from `v`, failing with a
/// resource error when more than `max_states` extended states are reachable.
pub fn build_extended(arena: &Arena, v: VertexId, max_states: usize) -> Result<ExtendedArena> {
    if arena.vertex_count() > 64 {
        return Err(Error::resource(
            "building the extended arena (vertex bitmask)",
            arena.vertex_count() as u128,
            64,
        ));
    }
    let mut index: HashMap<(VertexId, u64), VertexId> = HashMap::new();
    let mut states: Vec<(VertexId, u64)> = Vec::new();
    let mut queue: Vec<(VertexId, u64)> = Vec::new();

    let start_key = (v, 1u64 << v);
    index.insert(start_key, 0);
    states.push(start_key);
    queue.push(start_key);

    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (ext src, ext dst, base edge)
    let mut head = 0;
    while head < queue.len() {
        let (u, mask) = queue[head];
        let src_id = index[&(u, mask)];
        head += 1;
        for &e in arena.out_edges(u) {
            let dst = arena.edge(e).dst;
            let key = (dst, mask | (1 << dst));
            let dst_id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    if id >= max_states {
                        return Err(Error::resource(
                            "building the extended arena",
                            id as u128 + 1,
                            max_states as u128,
                        ));
                    }
                    index.insert(key, id);
                    states.push(key);
                    queue.push(key);
                    id
                }
            };
            edges.push((src_id, dst_id, e));
        }
    }

    let mut builder = Arena::builder();
    for &(u, mask) in &states {
        builder.add_vertex(&format!("{}|{}", arena.name(u), mask_name(arena, mask)), arena.owner(u))?;
    }
    for (src_id, dst_id, e) in edges {
        let base = arena.edge(e);
        let src = format!("{}|{}", arena.name(states[src_id].0), mask_name(arena, states[src_id].1));
        let dst = format!("{}|{}", arena.name(states[dst_id].0), mask_name(arena, states[dst_id].1));
        builder.add_edge(&src, &dst, base.w0.clone(), base.w1.clone())?;
    }
    let ext = builder.build()?;
    Ok(ExtendedArena { arena: ext, states, start: 0 })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The three-vertex game where the adversarial Stackelberg value 1 is
    /// approachable but not achievable: v0 belongs to Player 1, v1/v2 to
    /// Player 0, cycle (v0 v1) pays (1,1) per edge, the v1 loop pays (0,2),
    /// v2 absorbs at (0,1).
    pub fn unattainable_game() -> Arena {
        Arena::parse(
            "player1: v0\n\
             player0: v1 v2\n\
             init: v0\n\
             edge: v0 v1 1 1\n\
             edge: v1 v0 1 1\n\
             edge: v1 v1 0 2\n\
             edge: v0 v2 0 1\n\
             edge: v2 v2 0 1\n",
        )
        .unwrap()
    }

    /// The game with no best response for Player 1 against a counting
    /// strategy: vertex 1 is Player 1's, vertices 2 and 3 are Player 0's.
    pub fn no_best_response_game() -> Arena {
        Arena::parse(
            "player1: 1\n\
             player0: 2 3\n\
             init: 1\n\
             edge: 1 1 0 0\n\
             edge: 1 2 0 0\n\
             edge: 2 2 0 1\n\
             edge: 2 3 0 2\n\
             edge: 3 3 0 2\n\
             edge: 3 2 0 1\n",
        )
        .unwrap()
    }

    pub fn self_loop(w0: i64, w1: i64) -> Arena {
        Arena::parse(&format!(
            "player0: v\ninit: v\nedge: v v {w0} {w1}\n"
        ))
        .unwrap()
    }
}
