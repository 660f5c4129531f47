//! Exact 2D semilinear sets: convex hulls, componentwise-minima regions,
//! boolean combinations of convex cells with strict/non-strict facets, and
//! linear optimization over them.
//!
//! Everything is driven by a small Fourier-Motzkin elimination core (`lp`)
//! that decides feasibility and computes suprema of linear objectives over
//! systems of strict and non-strict inequalities, exactly over rationals.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

pub type Point = (Q, Q);

/// One inequality `a0*x + a1*y >= b` (or `>` when strict).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: [Q; 2],
    pub b: Q,
    pub strict: bool,
}

impl HalfPlane {
    pub fn ge(a0: Q, a1: Q, b: Q) -> HalfPlane {
        HalfPlane { a: [a0, a1], b, strict: false }
    }

    pub fn gt(a0: Q, a1: Q, b: Q) -> HalfPlane {
        HalfPlane { a: [a0, a1], b, strict: true }
    }

    pub fn holds(&self, p: &Point) -> bool {
        let lhs = &self.a[0] * &p.0 + &self.a[1] * &p.1;
        if self.strict {
            lhs > self.b
        } else {
            lhs >= self.b
        }
    }

    /// The complementary half-plane (strictness flips).
    pub fn negated(&self) -> HalfPlane {
        HalfPlane {
            a: [-self.a[0].clone(), -self.a[1].clone()],
            b: -self.b.clone(),
            strict: !self.strict,
        }
    }
}

/// Intersection of half-planes; an empty constraint list is all of the plane.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConvexCell {
    pub constraints: Vec<HalfPlane>,
}

impl ConvexCell {
    pub fn universe() -> ConvexCell {
        ConvexCell { constraints: Vec::new() }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.constraints.iter().all(|c| c.holds(p))
    }

    pub fn is_empty(&self) -> bool {
        !lp::feasible(&self.rows(), 2)
    }

    fn rows(&self) -> Vec<lp::Row> {
        self.constraints
            .iter()
            .map(|c| lp::Row {
                coeffs: vec![c.a[0].clone(), c.a[1].clone()],
                b: c.b.clone(),
                strict: c.strict,
            })
            .collect()
    }

    /// True when every point of `self` lies in `other`.
    pub fn subset_of(&self, other: &ConvexCell) -> bool {
        if self.is_empty() {
            return true;
        }
        other.constraints.iter().all(|g| {
            let mut cell = self.clone();
            cell.constraints.push(g.negated());
            cell.is_empty()
        })
    }

    /// Vertices of the closure (intersections of constraint boundaries that
    /// satisfy all closed constraints). Meaningful for bounded cells.
    pub fn closure_vertices(&self) -> Vec<Point> {
        let cs = &self.constraints;
        let mut vs: Vec<Point> = Vec::new();
        let satisfies_closure = |p: &Point| {
            cs.iter().all(|c| &c.a[0] * &p.0 + &c.a[1] * &p.1 >= c.b)
        };
        for i in 0..cs.len() {
            for j in (i + 1)..cs.len() {
                let (a, b) = (&cs[i], &cs[j]);
                let det = &a.a[0] * &b.a[1] - &a.a[1] * &b.a[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&a.b * &b.a[1] - &a.a[1] * &b.b) / &det;
                let y = (&a.a[0] * &b.b - &a.b * &b.a[0]) / &det;
                let p = (x, y);
                if satisfies_closure(&p) && !vs.contains(&p) {
                    vs.push(p);
                }
            }
        }
        vs.sort();
        vs
    }
}

/// A finite union of convex cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region2D {
    pub cells: Vec<ConvexCell>,
}

impl Region2D {
    pub fn empty() -> Region2D {
        Region2D { cells: Vec::new() }
    }

    pub fn universe() -> Region2D {
        Region2D { cells: vec![ConvexCell::universe()] }
    }

    pub fn from_cell(cell: ConvexCell) -> Region2D {
        Region2D { cells: vec![cell] }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    /// Drops empty cells and cells contained in another cell.
    pub fn pruned(&self) -> Region2D {
        let mut kept: Vec<ConvexCell> = Vec::new();
        for cell in &self.cells {
            if cell.is_empty() {
                continue;
            }
            if kept.iter().any(|k| cell.subset_of(k)) {
                continue;
            }
            kept.retain(|k| !k.subset_of(cell));
            kept.push(cell.clone());
        }
        Region2D { cells: kept }
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|cell| {
                let rows: Vec<Value> = cell
                    .constraints
                    .iter()
                    .map(|c| {
                        json!([fmt_q(&c.a[0]), fmt_q(&c.a[1]), fmt_q(&c.b), c.strict])
                    })
                    .collect();
                Value::Array(rows)
            })
            .collect();
        // Convention: each row [a1, a2, b, strict] encodes a1*x + a2*y >= b,
        // strict => the inequality is >.
        json!({ "cells": cells })
    }

    pub fn from_json(v: &Value) -> Result<Region2D> {
        let cells = v
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("region JSON needs a `cells` array"))?;
        let mut out = Vec::new();
        for cell in cells {
            let rows = cell
                .as_array()
                .ok_or_else(|| Error::invalid("region cell must be an array of rows"))?;
            let mut constraints = Vec::new();
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == 4)
                    .ok_or_else(|| Error::invalid("region row must be [a1,a2,b,strict]"))?;
                let get_q = |i: usize| -> Result<Q> {
                    row[i]
                        .as_str()
                        .ok_or_else(|| Error::invalid("region coefficients are strings"))
                        .and_then(parse_q)
                };
                let strict = row[3]
                    .as_bool()
                    .ok_or_else(|| Error::invalid("region strict flag must be a bool"))?;
                constraints.push(HalfPlane { a: [get_q(0)?, get_q(1)?], b: get_q(2)?, strict });
            }
            out.push(ConvexCell { constraints });
        }
        Ok(Region2D { cells: out })
    }
}

/// Union of two regions.
pub fn region_union(a: &Region2D, b: &Region2D) -> Region2D {
    let mut cells = a.cells.clone();
    cells.extend(b.cells.clone());
    Region2D { cells }.pruned()
}

/// Intersection, distributing over the cell unions.
pub fn region_intersect(a: &Region2D, b: &Region2D, max_cells: usize) -> Result<Region2D> {
    let needed = a.cells.len().saturating_mul(b.cells.len());
    if needed > max_cells {
        return Err(Error::resource("intersecting regions", needed as u128, max_cells as u128));
    }
    let mut cells = Vec::new();
    for ca in &a.cells {
        for cb in &b.cells {
            let mut merged = ca.clone();
            merged.constraints.extend(cb.constraints.iter().cloned());
            cells.push(merged);
        }
    }
    Ok(Region2D { cells }.pruned())
}

/// Complement: negate each cell (one complementary half-plane per
/// constraint, strictness flipped) and intersect the results.
pub fn region_complement(r: &Region2D, max_cells: usize) -> Result<Region2D> {
    let mut acc = Region2D::universe();
    for cell in &r.cells {
        let negation = Region2D {
            cells: cell
                .constraints
                .iter()
                .map(|c| ConvexCell { constraints: vec![c.negated()] })
                .collect(),
        };
        acc = region_intersect(&acc, &negation, max_cells)?;
    }
    Ok(acc)
}

/// Preimage of a region under the affine map `x = M y + t`: substitutes the
/// map into every constraint. With `M` a coordinate swap or sign flip this
/// is the usual variable substitution.
pub fn region_substitute(r: &Region2D, m: &[[Q; 2]; 2], t: &[Q; 2]) -> Region2D {
    let cells = r
        .cells
        .iter()
        .map(|cell| ConvexCell {
            constraints: cell
                .constraints
                .iter()
                .map(|c| {
                    let a0 = &c.a[0] * &m[0][0] + &c.a[1] * &m[1][0];
                    let a1 = &c.a[0] * &m[0][1] + &c.a[1] * &m[1][1];
                    let b = &c.b - (&c.a[0] * &t[0] + &c.a[1] * &t[1]);
                    HalfPlane { a: [a0, a1], b, strict: c.strict }
                })
                .collect(),
        })
        .collect();
    Region2D { cells }
}

/// Outcome of a supremum query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extremum {
    /// The region is empty (supremum is -infinity).
    Empty,
    /// The objective is unbounded above (+infinity).
    Unbounded,
    Finite { value: Q, attained: bool },
}

/// Supremum of `objective . p` over the region. The supremum over a cell
/// equals the supremum over its closure; `attained` reports whether some
/// point of the (non-closed) region reaches it.
pub fn sup_linear(r: &Region2D, objective: &Point) -> Extremum {
    let obj = [objective.0.clone(), objective.1.clone()];
    let mut best: Option<(Q, bool)> = None;
    for cell in &r.cells {
        match lp::maximize(&cell.rows(), 2, &obj) {
            lp::Extremum::Empty => continue,
            lp::Extremum::Unbounded => return Extremum::Unbounded,
            lp::Extremum::Finite { value, attained } => match &mut best {
                None => best = Some((value, attained)),
                Some((v, att)) => {
                    if value > *v {
                        *v = value;
                        *att = attained;
                    } else if value == *v {
                        *att = *att || attained;
                    }
                }
            },
        }
    }
    match best {
        None => Extremum::Empty,
        Some((value, attained)) => Extremum::Finite { value, attained },
    }
}

/// Convex hull of a non-empty list of rational points, as a single closed
/// cell. Also returns the hull vertices in counter-clockwise order.
pub fn convex_hull(points: &[Point]) -> (Region2D, Vec<Point>) {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let mut ps: Vec<Point> = points.to_vec();
    ps.sort();
    ps.dedup();

    if ps.len() == 1 {
        let (x, y) = ps[0].clone();
        let cell = ConvexCell {
            constraints: vec![
                HalfPlane::ge(Q::one(), Q::zero(), x.clone()),
                HalfPlane::ge(-Q::one(), Q::zero(), -x.clone()),
                HalfPlane::ge(Q::zero(), Q::one(), y.clone()),
                HalfPlane::ge(Q::zero(), -Q::one(), -y.clone()),
            ],
        };
        return (Region2D::from_cell(cell), ps);
    }

    let cross = |o: &Point, a: &Point, b: &Point| -> Q {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };

    // Monotone chain.
    let mut lower: Vec<Point> = Vec::new();
    for p in &ps {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Q::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in ps.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Q::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let mut hull: Vec<Point> = lower;
    hull.extend(upper);

    if hull.len() < 3 {
        // All points collinear: hull is the segment between the extremes.
        let p = ps.first().unwrap().clone();
        let q = ps.last().unwrap().clone();
        let d = (&q.0 - &p.0, &q.1 - &p.1);
        let n = (-d.1.clone(), d.0.clone());
        let ndotp = &n.0 * &p.0 + &n.1 * &p.1;
        let cell = ConvexCell {
            constraints: vec![
                HalfPlane::ge(n.0.clone(), n.1.clone(), ndotp.clone()),
                HalfPlane::ge(-n.0.clone(), -n.1.clone(), -ndotp),
                HalfPlane::ge(d.0.clone(), d.1.clone(), &d.0 * &p.0 + &d.1 * &p.1),
                HalfPlane::ge(-d.0.clone(), -d.1.clone(), -(&d.0 * &q.0 + &d.1 * &q.1)),
            ],
        };
        return (Region2D::from_cell(cell), vec![p, q]);
    }

    // CCW polygon: the interior is to the left of each directed edge, so the
    // inward normal of edge p->q is (-(q.1-p.1), q.0-p.0).
    let mut constraints = Vec::new();
    let k = hull.len();
    for i in 0..k {
        let p = &hull[i];
        let q = &hull[(i + 1) % k];
        let n = (-(&q.1 - &p.1), &q.0 - &p.0);
        let b = &n.0 * &p.0 + &n.1 * &p.1;
        constraints.push(HalfPlane::ge(n.0, n.1, b));
    }
    (Region2D::from_cell(ConvexCell { constraints }), hull)
}

/// The region `{ f_min(P) | P a finite subset of the hull }` for a single
/// bounded closed convex cell, where `f_min` takes componentwise minima.
/// In the plane, pairs suffice: the componentwise minimum of any finite set
/// is the componentwise minimum of its x-minimizer and its y-minimizer.
/// The result keeps every facet whose outward normal points weakly up or
/// right, and closes the set downward to the hull's coordinate minima.
pub fn f_min_region(hull: &Region2D) -> Region2D {
    assert_eq!(hull.cells.len(), 1, "f_min_region expects one convex cell");
    let cell = &hull.cells[0];
    assert!(
        cell.constraints.iter().all(|c| !c.strict),
        "f_min_region expects a closed cell"
    );
    let vs = cell.closure_vertices();
    assert!(!vs.is_empty(), "f_min_region expects a non-empty bounded cell");
    let xmin = vs.iter().map(|p| p.0.clone()).min().unwrap();
    let ymin = vs.iter().map(|p| p.1.clone()).min().unwrap();

    let mut constraints = vec![
        HalfPlane::ge(Q::one(), Q::zero(), xmin),
        HalfPlane::ge(Q::zero(), Q::one(), ymin),
    ];
    for c in &cell.constraints {
        // Drop exactly the facets whose outward normal points strictly
        // down-left; those bound the hull away from small coordinates and
        // f_min erases them.
        let outward_down_left = c.a[0].is_positive() && c.a[1].is_positive();
        if !outward_down_left {
            constraints.push(c.clone());
        }
    }
    Region2D::from_cell(ConvexCell { constraints }).pruned()
}

/// Fourier-Motzkin elimination over rationals with strict/non-strict rows.
pub(crate) mod lp {
    use super::*;

    /// `coeffs . x >= b`, or `>` when `strict`.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Row {
        pub coeffs: Vec<Q>,
        pub b: Q,
        pub strict: bool,
    }

    impl Row {
        pub fn ge(coeffs: Vec<Q>, b: Q) -> Row {
            Row { coeffs, b, strict: false }
        }

    }

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub enum Extremum {
        Empty,
        Unbounded,
        Finite { value: Q, attained: bool },
    }

    /// Scales a row so its coefficient vector is primitive-integer; rows
    /// with identical normals collapse to the tightest bound. Returns false
    /// when a constant row is violated.
    fn normalize(rows: Vec<Row>) -> Option<Vec<Row>> {
        let mut by_normal: BTreeMap<Vec<Q>, (Q, bool)> = BTreeMap::new();
        for row in rows {
            if row.coeffs.iter().all(|c| c.is_zero()) {
                let ok = if row.strict { Q::zero() > row.b } else { Q::zero() >= row.b };
                if !ok {
                    return None;
                }
                continue;
            }
            // Positive scale making all coefficients integers with gcd 1.
            let mut denom_lcm = num_bigint::BigInt::one();
            for c in row.coeffs.iter().chain(std::iter::once(&row.b)) {
                denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
            }
            let scale = Q::from_integer(denom_lcm);
            let ints: Vec<num_bigint::BigInt> = row
                .coeffs
                .iter()
                .map(|c| (c * &scale).to_integer())
                .collect();
            let bi = (&row.b * &scale).to_integer();
            let mut g = num_bigint::BigInt::zero();
            for v in &ints {
                g = num_integer::gcd(g, v.clone());
            }
            debug_assert!(!g.is_zero());
            let coeffs: Vec<Q> = ints.iter().map(|v| Q::from_integer(v / &g)).collect();
            let b = Q::from_integer(bi) / Q::from_integer(g);
            let entry = by_normal.entry(coeffs).or_insert_with(|| (b.clone(), row.strict));
            // Keep the tightest bound: larger b, or equal b with strict.
            if b > entry.0 || (b == entry.0 && row.strict) {
                *entry = (b, row.strict);
            }
        }
        Some(
            by_normal
                .into_iter()
                .map(|(coeffs, (b, strict))| Row { coeffs, b, strict })
                .collect(),
        )
    }

    /// Eliminates variable `var`; exact projection (strictness combines by
    /// "either strict makes it strict").
    fn eliminate(rows: &[Row], var: usize) -> Option<Vec<Row>> {
        let mut keep: Vec<Row> = Vec::new();
        let mut lowers: Vec<&Row> = Vec::new(); // coeff[var] > 0
        let mut uppers: Vec<&Row> = Vec::new(); // coeff[var] < 0
        for row in rows {
            if row.coeffs[var].is_zero() {
                keep.push(row.clone());
            } else if row.coeffs[var].is_positive() {
                lowers.push(row);
            } else {
                uppers.push(row);
            }
        }
        for lo in &lowers {
            for up in &uppers {
                let lp = &lo.coeffs[var];
                let un = -up.coeffs[var].clone();
                // un * lo + lp * up cancels the variable; both scales positive.
                let coeffs: Vec<Q> = lo
                    .coeffs
                    .iter()
                    .zip(up.coeffs.iter())
                    .map(|(a, c)| &un * a + lp * c)
                    .collect();
                let b = &un * &lo.b + lp * &up.b;
                keep.push(Row { coeffs, b, strict: lo.strict || up.strict });
            }
        }
        normalize(keep)
    }

    pub fn feasible(rows: &[Row], dim: usize) -> bool {
        let mut current = match normalize(rows.to_vec()) {
            Some(r) => r,
            None => return false,
        };
        for var in 0..dim {
            current = match eliminate(&current, var) {
                Some(r) => r,
                None => return false,
            };
        }
        true
    }

    /// Maximizes `objective . x` subject to the rows.
    pub fn maximize(rows: &[Row], dim: usize, objective: &[Q]) -> Extremum {
        if !feasible(rows, dim) {
            return Extremum::Empty;
        }
        // Introduce t = objective . x and project everything else away.
        let mut ext: Vec<Row> = Vec::new();
        for row in rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.push(Q::zero());
            ext.push(Row { coeffs, b: row.b.clone(), strict: row.strict });
        }
        let mut up = objective.to_vec(); // obj.x - t >= 0
        up.push(-Q::one());
        ext.push(Row::ge(up, Q::zero()));
        let mut lo: Vec<Q> = objective.iter().map(|c| -c.clone()).collect(); // t - obj.x >= 0
        lo.push(Q::one());
        ext.push(Row::ge(lo, Q::zero()));

        let mut current = match normalize(ext) {
            Some(r) => r,
            None => return Extremum::Empty,
        };
        for var in 0..dim {
            current = match eliminate(&current, var) {
                Some(r) => r,
                None => return Extremum::Empty,
            };
        }
        // Rows now constrain t alone (coefficient at position `dim`).
        let mut hi: Option<(Q, bool)> = None; // (bound, strict)
        let mut lo_bound: Option<(Q, bool)> = None;
        for row in &current {
            let c = &row.coeffs[dim];
            if c.is_zero() {
                continue;
            }
            let bound = &row.b / c;
            if c.is_positive() {
                // t >= bound
                match &mut lo_bound {
                    None => lo_bound = Some((bound, row.strict)),
                    Some((v, s)) => {
                        if bound > *v || (bound == *v && row.strict) {
                            *v = bound;
                            *s = row.strict;
                        }
                    }
                }
            } else {
                // t <= bound
                match &mut hi {
                    None => hi = Some((bound, row.strict)),
                    Some((v, s)) => {
                        if bound < *v || (bound == *v && row.strict) {
                            *v = bound;
                            *s = row.strict;
                        }
                    }
                }
            }
        }
        match hi {
            None => Extremum::Unbounded,
            Some((value, hi_strict)) => {
                let attained = !hi_strict
                    && match &lo_bound {
                        None => true,
                        Some((lv, l_strict)) => lv < &value || (lv == &value && !*l_strict),
                    };
                Extremum::Finite { value, attained }
            }
        }
    }
}
