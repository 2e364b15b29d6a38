//! Convex hull in dimension d <= ~6 by incremental insertion with outside
//! sets (quickhull). Inputs at desk scale only; tolerance-based predicates,
//! no exact arithmetic.
//!
//! The working representation keeps facets simplicial. Exactly coplanar
//! points (ubiquitous for zonotopes and Minkowski sums) are never lost:
//! a true vertex lying in a facet's hyperplane is still strictly above one
//! of the adjacent side facets, so it gets inserted through that facet.
//! Coplanar simplicial facets are merged for the H-representation, and the
//! final vertex set is filtered by an active-constraint rank test against
//! the merged facets.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, Vector};

/// Relative predicate tolerance ("above" test).
const VISIBILITY_TOL: f64 = 1e-9;
/// Chord distance between unit normals below which facets are merged.
const NORMAL_MERGE_TOL: f64 = 1e-8;
/// Vertex-facet activity tolerance (relative).
const ACTIVITY_TOL: f64 = 1e-8;

/// One irredundant facet of the hull: outward unit normal and support
/// offset, body = {x : <normal, x> <= offset}.
#[derive(Debug, Clone)]
pub struct MergedFacet {
    pub normal: Vector,
    pub offset: f64,
    /// Indices (into the hull's vertex list) of vertices lying on the facet.
    pub vertex_ids: Vec<usize>,
}

/// Full-dimensional hull of a point cloud.
#[derive(Debug, Clone)]
pub struct Hull {
    /// Extreme points, exact input coordinates, in input order.
    pub vertices: Vec<Vector>,
    /// Irredundant facet list.
    pub facets: Vec<MergedFacet>,
    /// Boundary triangulation: each simplex is d vertex indices.
    pub simplices: Vec<Vec<usize>>,
    /// Lebesgue measure of the hull.
    pub volume: f64,
}

struct WorkFacet {
    verts: Vec<usize>,
    normal: Vector,
    offset: f64,
    /// neighbors[k] is across the ridge omitting verts[k]
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

impl WorkFacet {
    fn above(&self, p: &Vector) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Hyperplane through d affinely independent points: unit normal and offset.
fn hyperplane(points: &[&Vector]) -> Option<(Vector, f64)> {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    if d == 1 {
        return Some((DVector::from_element(1, 1.0), points[0][0]));
    }
    let dirs: Vec<Vector> = points[1..].iter().map(|p| *p - points[0]).collect();
    let span = orthonormalize(&dirs);
    if span.dim() != d - 1 {
        return None; // degenerate ridge
    }
    let comp = span.complement();
    debug_assert_eq!(comp.dim(), 1);
    let normal: Vector = comp.basis().column(0).into();
    let offset = normal.dot(points[0]);
    Some((normal, offset))
}

/// Deduplicate points within absolute tolerance 1e-9, preserving order.
pub fn dedup_points(points: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    'outer: for p in points {
        for q in &out {
            if (p - q).amax() <= 1e-9 {
                continue 'outer;
            }
        }
        out.push(p.clone());
    }
    out
}

/// Convex hull of full-dimensional `points` (dimension = coordinate length).
/// The caller is responsible for reducing lower-dimensional inputs to their
/// affine-hull coordinates first.
pub fn convex_hull(points: &[Vector]) -> Result<Hull> {
    let points = dedup_points(points);
    if points.is_empty() {
        return Err(Error::Degenerate("empty point set".into()));
    }
    let d = points[0].len();
    if d == 0 {
        return Err(Error::Degenerate("zero-dimensional ambient space".into()));
    }
    if d == 1 {
        return Ok(hull_1d(&points));
    }
    let scale = points
        .iter()
        .map(|p| p.amax())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = VISIBILITY_TOL * scale;

    let init = initial_simplex(&points, d, tol)?;
    let interior: Vector = init
        .iter()
        .map(|&i| points[i].clone())
        .fold(DVector::zeros(d), |a, b| a + b)
        / (d as f64 + 1.0);

    let mut facets: Vec<WorkFacet> = Vec::new();
    // One facet per omitted vertex of the initial simplex.
    for omit in 0..=d {
        let verts: Vec<usize> = (0..=d).filter(|&k| k != omit).map(|k| init[k]).collect();
        let pts: Vec<&Vector> = verts.iter().map(|&i| &points[i]).collect();
        let (mut normal, mut offset) = hyperplane(&pts)
            .ok_or_else(|| Error::Degenerate("initial simplex facet degenerate".into()))?;
        if normal.dot(&interior) - offset > 0.0 {
            normal = -normal;
            offset = -offset;
        }
        let neighbors = (0..=d).filter(|&k| k != omit).collect();
        facets.push(WorkFacet {
            verts,
            normal,
            offset,
            neighbors,
            outside: Vec::new(),
            alive: true,
        });
    }
    // Fix neighbor ids: facet `omit` has ridges omitting each of its own
    // vertices; the neighbor across the ridge omitting vertex `init[j]` is
    // facet j.
    for omit in 0..=d {
        let verts = facets[omit].verts.clone();
        facets[omit].neighbors = verts
            .iter()
            .map(|v| init.iter().position(|iv| iv == v).expect("init vertex"))
            .collect();
    }

    // Assign every remaining point to the facet it is most above.
    let mut pending: Vec<usize> = Vec::new();
    let all_ids: Vec<usize> = (0..facets.len()).collect();
    for (i, p) in points.iter().enumerate() {
        if init.contains(&i) {
            continue;
        }
        assign_point(i, p, &mut facets, &all_ids, tol);
    }
    pending.extend(0..facets.len());

    // Main insertion loop, followed by verification sweeps: redistributing
    // orphans only over the cone facets can strand a point that is still
    // outside an older surviving facet, so after the queue drains we rescan
    // every input point against the current hull and re-insert strays until
    // a sweep finds none.
    loop {
        process_pending(&points, &mut facets, &mut pending, &interior, tol)?;
        let alive_ids: Vec<usize> = (0..facets.len()).filter(|&f| facets[f].alive).collect();
        let mut strays = false;
        for (i, p) in points.iter().enumerate() {
            let mut best: Option<(usize, f64)> = None;
            for &f in &alive_ids {
                let a = facets[f].above(p);
                if a > tol && best.map_or(true, |(_, b)| a > b) {
                    best = Some((f, a));
                }
            }
            if let Some((f, _)) = best {
                if !facets[f].outside.contains(&i) {
                    facets[f].outside.push(i);
                }
                pending.push(f);
                strays = true;
            }
        }
        if !strays {
            break;
        }
    }

    finalize(&points, &facets, d, scale)
}

fn process_pending(
    points: &[Vector],
    facets: &mut Vec<WorkFacet>,
    pending: &mut Vec<usize>,
    interior: &Vector,
    tol: f64,
) -> Result<()> {
    while let Some(fid) = pending.pop() {
        if !facets[fid].alive || facets[fid].outside.is_empty() {
            continue;
        }
        // Furthest outside point of this facet.
        let apex = *facets[fid]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                facets[fid]
                    .above(&points[a])
                    .partial_cmp(&facets[fid].above(&points[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .unwrap();
        let apex_point = points[apex].clone();

        // Visible set by a global scan: with tolerance-based predicates the
        // above-tol region can be disconnected in the facet graph, and a
        // reachability search would strand stale facets inside the hull.
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&g| facets[g].alive && facets[g].above(&apex_point) > tol)
            .collect();

        // Horizon: ridges between a visible facet and a non-visible one.
        struct HorizonEdge {
            ridge: Vec<usize>,
            beyond: usize, // the surviving facet across the ridge
        }
        let mut horizon: Vec<HorizonEdge> = Vec::new();
        for &g in &visible {
            for k in 0..facets[g].verts.len() {
                let h = facets[g].neighbors[k];
                if visible.binary_search(&h).is_err() {
                    let ridge: Vec<usize> = facets[g]
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &v)| v)
                        .collect();
                    horizon.push(HorizonEdge { ridge, beyond: h });
                }
            }
        }

        // Collect points to redistribute, drop visible facets.
        let mut orphans: Vec<usize> = Vec::new();
        for &g in &visible {
            orphans.append(&mut facets[g].outside);
            facets[g].alive = false;
        }
        orphans.sort_unstable();
        orphans.dedup();
        orphans.retain(|&q| q != apex);

        // Build the cone of new facets from the apex over the horizon.
        let mut new_ids: Vec<usize> = Vec::new();
        let mut ridge_link: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for edge in &horizon {
            let mut verts = edge.ridge.clone();
            verts.push(apex);
            let pts: Vec<&Vector> = verts.iter().map(|&i| &points[i]).collect();
            let (mut normal, mut offset) = hyperplane(&pts)
                .ok_or_else(|| Error::Degenerate("cone facet degenerate".into()))?;
            if normal.dot(&interior) - offset > 0.0 {
                normal = -normal;
                offset = -offset;
            }
            let id = facets.len();
            let nverts = verts.len();
            facets.push(WorkFacet {
                verts,
                normal,
                offset,
                neighbors: vec![usize::MAX; nverts],
                outside: Vec::new(),
                alive: true,
            });
            new_ids.push(id);

            // Link across the horizon ridge (the ridge omits the apex,
            // which sits at the last position).
            facets[id].neighbors[nverts - 1] = edge.beyond;
            let beyond = edge.beyond;
            let slot = (0..facets[beyond].verts.len())
                .find(|&k| {
                    let mut r: Vec<usize> = facets[beyond]
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &v)| v)
                        .collect();
                    r.sort_unstable();
                    let mut ridge = edge.ridge.clone();
                    ridge.sort_unstable();
                    r == ridge
                })
                .ok_or_else(|| Error::Numerical("horizon ridge not found in neighbor".into()))?;
            facets[beyond].neighbors[slot] = id;

            // Link new facets among themselves via their side ridges.
            for k in 0..nverts - 1 {
                let mut key: Vec<usize> = facets[id]
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                match ridge_link.remove(&key) {
                    None => {
                        ridge_link.insert(key, (id, k));
                    }
                    Some((other, ok)) => {
                        facets[id].neighbors[k] = other;
                        facets[other].neighbors[ok] = id;
                    }
                }
            }
        }
        if !ridge_link.is_empty() {
            return Err(Error::Numerical(
                "inconsistent horizon: unmatched cone ridges".into(),
            ));
        }

        // Redistribute orphaned points over the new facets.
        for &q in &orphans {
            assign_point(q, &points[q], facets, &new_ids, tol);
        }
        for &id in &new_ids {
            if !facets[id].outside.is_empty() {
                pending.push(id);
            }
        }
    }

    Ok(())
}

fn assign_point(idx: usize, p: &Vector, facets: &mut [WorkFacet], candidates: &[usize], tol: f64) {
    let mut best: Option<(usize, f64)> = None;
    for &f in candidates {
        if !facets[f].alive {
            continue;
        }
        let a = facets[f].above(p);
        if a > tol && best.map_or(true, |(_, b)| a > b) {
            best = Some((f, a));
        }
    }
    if let Some((f, _)) = best {
        facets[f].outside.push(idx);
    }
}

fn initial_simplex(points: &[Vector], d: usize, tol: f64) -> Result<Vec<usize>> {
    // Lexicographically smallest point first, then greedily the point
    // furthest from the affine hull built so far.
    let mut first = 0usize;
    for i in 1..points.len() {
        if lex_less(&points[i], &points[first]) {
            first = i;
        }
    }
    let mut chosen = vec![first];
    while chosen.len() <= d {
        let base = &points[chosen[0]];
        let dirs: Vec<Vector> = chosen[1..].iter().map(|&i| &points[i] - base).collect();
        let sub = orthonormalize(&dirs);
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let rel = p - base;
            let resid = if sub.dim() == 0 {
                rel.norm()
            } else {
                (&rel - sub.project(&rel)?).norm()
            };
            if best.map_or(true, |(_, b)| resid > b) {
                best = Some((i, resid));
            }
        }
        match best {
            Some((i, resid)) if resid > tol => chosen.push(i),
            _ => {
                return Err(Error::Degenerate(format!(
                    "points span only {} of {} dimensions",
                    chosen.len() - 1,
                    d
                )))
            }
        }
    }
    Ok(chosen)
}

fn lex_less(a: &Vector, b: &Vector) -> bool {
    for i in 0..a.len() {
        if a[i] < b[i] {
            return true;
        }
        if a[i] > b[i] {
            return false;
        }
    }
    false
}

fn hull_1d(points: &[Vector]) -> Hull {
    let mut lo = 0usize;
    let mut hi = 0usize;
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[lo][0] {
            lo = i;
        }
        if p[0] > points[hi][0] {
            hi = i;
        }
    }
    if lo == hi {
        return Hull {
            vertices: vec![points[lo].clone()],
            facets: Vec::new(),
            simplices: Vec::new(),
            volume: 0.0,
        };
    }
    let a = points[lo][0];
    let b = points[hi][0];
    Hull {
        vertices: vec![points[lo].clone(), points[hi].clone()],
        facets: vec![
            MergedFacet {
                normal: DVector::from_element(1, -1.0),
                offset: -a,
                vertex_ids: vec![0],
            },
            MergedFacet {
                normal: DVector::from_element(1, 1.0),
                offset: b,
                vertex_ids: vec![1],
            },
        ],
        simplices: vec![vec![0], vec![1]],
        volume: b - a,
    }
}

fn finalize(points: &[Vector], facets: &[WorkFacet], d: usize, scale: f64) -> Result<Hull> {
    let alive: Vec<&WorkFacet> = facets.iter().filter(|f| f.alive).collect();
    if alive.is_empty() {
        return Err(Error::Degenerate("hull has no facets".into()));
    }

    // Merge coplanar simplicial facets by normal direction.
    let mut groups: Vec<(Vector, Vec<usize>)> = Vec::new(); // (normal sum, member ids)
    for (k, f) in alive.iter().enumerate() {
        let mut placed = false;
        for (nsum, members) in groups.iter_mut() {
            let rep = nsum.normalize();
            if (&rep - &f.normal).norm() <= NORMAL_MERGE_TOL {
                *nsum += &f.normal;
                members.push(k);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push((f.normal.clone(), vec![k]));
        }
    }

    // Candidate vertices: all points named by alive facets.
    let mut candidate_ids: Vec<usize> = alive.iter().flat_map(|f| f.verts.clone()).collect();
    candidate_ids.sort_unstable();
    candidate_ids.dedup();

    let act = ACTIVITY_TOL * scale;
    let merged_planes: Vec<(Vector, f64)> = groups
        .iter()
        .map(|(nsum, _)| {
            let n = nsum.normalize();
            // Recompute the offset from exact input coordinates.
            let b = points.iter().map(|p| n.dot(p)).fold(f64::MIN, f64::max);
            (n, b)
        })
        .collect();

    // A candidate is a vertex iff its active facet normals span R^d.
    let mut keep: Vec<usize> = Vec::new();
    for &c in &candidate_ids {
        let active: Vec<Vector> = merged_planes
            .iter()
            .filter(|(n, b)| (n.dot(&points[c]) - b).abs() <= act)
            .map(|(n, _)| n.clone())
            .collect();
        if active.len() >= d && orthonormalize(&active).dim() == d {
            keep.push(c);
        }
    }
    let old_to_new: HashMap<usize, usize> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vector> = keep.iter().map(|&i| points[i].clone()).collect();

    let merged: Vec<MergedFacet> = merged_planes
        .iter()
        .map(|(n, b)| MergedFacet {
            normal: n.clone(),
            offset: *b,
            vertex_ids: keep
                .iter()
                .enumerate()
                .filter(|&(_, &old)| (n.dot(&points[old]) - b).abs() <= act)
                .map(|(new, _)| new)
                .collect(),
        })
        .collect();

    // Boundary triangulation (dropping simplices that lost a vertex to the
    // rank filter would leave holes; they never do, since simplicial facet
    // corners always lie on >= d merged facets of the cone around them --
    // except for points sitting inside a merged facet or edge, which belong
    // to degenerate-volume simplices only).
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let centroid: Vector =
        points.iter().fold(DVector::zeros(d), |a, p| a + p) / points.len() as f64;
    let mut volume = crate::kahan::KahanSum::new();
    for f in &alive {
        let mut m = DMatrix::zeros(d, d);
        for (j, &v) in f.verts.iter().enumerate() {
            m.set_column(j, &(&points[v] - &centroid));
        }
        let det = m.determinant().abs();
        volume.add(det);
        if f.verts.iter().all(|v| old_to_new.contains_key(v)) {
            simplices.push(f.verts.iter().map(|v| old_to_new[v]).collect());
        }
    }
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }

    Ok(Hull {
        vertices,
        facets: merged,
        simplices,
        volume: volume.value() / fact,
    })
}
