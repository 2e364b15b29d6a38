//! Zonotopes and V-polytopes: the geometric substrate for the exact
//! formulas, the polarization oracle and the stability suite.
//!
//! A zonotope is stored by its generator list `w_1..w_N` and represents the
//! centered body `sum_i [-w_i, w_i]` plus an optional translation. A
//! V-polytope stores its extreme points; construction runs the hull so the
//! vertex list is irredundant and the intrinsic dimension is known.

pub mod hull;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, Subspace, Vector};

/// Enumeration guards for the generator-tuple sums and the sign-pattern
/// expansion of zonotopes. `ZONOVOL_BUDGET` overrides both: it becomes the
/// tuple limit, and the sign limit becomes its base-2 logarithm.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub tuple_limit: u128,
    pub sign_limit: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            tuple_limit: 100_000_000,
            sign_limit: 20,
        }
    }
}

impl Budget {
    pub fn from_env() -> Self {
        match std::env::var("ZONOVOL_BUDGET") {
            Ok(s) => match s.trim().parse::<u128>() {
                Ok(v) if v >= 2 => Self {
                    tuple_limit: v,
                    sign_limit: (127 - v.leading_zeros()).min(40),
                },
                _ => Self::default(),
            },
            Err(_) => Self::default(),
        }
    }
}

/// Centered zonotope `offset + sum_i [-w_i, w_i]`.
#[derive(Debug, Clone)]
pub struct Zonotope {
    ambient: usize,
    generators: Vec<Vector>,
    offset: Vector,
}

impl Zonotope {
    /// Zero generators are dropped at construction.
    pub fn new(ambient: usize, generators: Vec<Vector>, offset: Option<Vector>) -> Result<Self> {
        let offset = offset.unwrap_or_else(|| DVector::zeros(ambient));
        if offset.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: offset.len(),
            });
        }
        let mut kept = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: g.len(),
                });
            }
            if g.norm() > 1e-12 {
                kept.push(g);
            }
        }
        Ok(Self {
            ambient,
            generators: kept,
            offset,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    /// Dimension of the body = rank of the generator list.
    pub fn dim(&self) -> usize {
        self.linear_hull().dim()
    }

    /// Span of the generators (direction space of the affine hull).
    pub fn linear_hull(&self) -> Subspace {
        orthonormalize(&self.generators)
    }

    /// `h(Z, u) = <offset, u> + sum_i |<w_i, u>|`, the discrete instance of
    /// the generating-measure integral.
    pub fn support(&self, u: &Vector) -> f64 {
        self.offset.dot(u) + self.generators.iter().map(|w| w.dot(u).abs()).sum::<f64>()
    }

    pub fn translate(&self, t: &Vector) -> Zonotope {
        Zonotope {
            ambient: self.ambient,
            generators: self.generators.clone(),
            offset: &self.offset + t,
        }
    }

    /// Image under a linear map (columns of `m` are images of basis vectors).
    pub fn transformed(&self, m: &DMatrix<f64>) -> Result<Zonotope> {
        Zonotope::new(
            m.nrows(),
            self.generators.iter().map(|g| m * g).collect(),
            Some(m * &self.offset),
        )
    }

    /// Orthogonal projection, expressed in the coordinates of `s`
    /// (ambient dimension becomes `s.dim()`).
    pub fn project_coords(&self, s: &Subspace) -> Result<Zonotope> {
        if s.ambient_dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: s.ambient_dim(),
            });
        }
        Zonotope::new(
            s.dim(),
            self.generators.iter().map(|g| s.coords(g)).collect(),
            Some(s.coords(&self.offset)),
        )
    }

    /// Orthogonal projection kept in the ambient space.
    pub fn project_embedded(&self, s: &Subspace) -> Result<Zonotope> {
        Zonotope::new(
            self.ambient,
            self.generators
                .iter()
                .map(|g| s.project(g))
                .collect::<Result<_>>()?,
            Some(s.project(&self.offset)?),
        )
    }

    /// Vertex representation via sign-pattern enumeration; guarded because
    /// the expansion has 2^N candidate points.
    pub fn to_vpolytope(&self, budget: &Budget) -> Result<VPolytope> {
        let n = self.generators.len();
        if n as u32 > budget.sign_limit {
            return Err(Error::Budget(format!(
                "too many generators: {n} (sign-pattern limit {})",
                budget.sign_limit
            )));
        }
        let mut points = Vec::with_capacity(1 << n);
        for mask in 0u64..(1 << n) {
            let mut p = self.offset.clone();
            for (i, g) in self.generators.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    p += g;
                } else {
                    p -= g;
                }
            }
            points.push(p);
        }
        VPolytope::new(self.ambient, points)
    }
}

/// Polytope given by its extreme points.
#[derive(Debug, Clone)]
pub struct VPolytope {
    ambient: usize,
    vertices: Vec<Vector>,
    affine_dim: usize,
    base: Vector,
    hull_basis: Subspace,
    hull: Option<hull::Hull>,
}

impl VPolytope {
    /// Convex hull of `points`; non-extreme points are removed.
    pub fn new(ambient: usize, points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Degenerate("empty vertex list".into()));
        }
        for p in &points {
            if p.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: p.len(),
                });
            }
            if !p.iter().all(|x| x.is_finite()) {
                return Err(Error::Parse("non-finite vertex coordinate".into()));
            }
        }
        let points = hull::dedup_points(&points);
        let base = points[0].clone();
        let dirs: Vec<Vector> = points[1..].iter().map(|p| p - &base).collect();
        let span = orthonormalize(&dirs);
        let affine_dim = span.dim();
        if affine_dim == 0 {
            return Ok(Self {
                ambient,
                vertices: vec![base.clone()],
                affine_dim,
                base,
                hull_basis: Subspace::trivial(ambient),
                hull: None,
            });
        }
        // Full-dimensional bodies keep the identity frame so facet normals
        // live directly in ambient coordinates.
        let hull_basis = if affine_dim == ambient {
            Subspace::full(ambient)
        } else {
            span
        };
        let coords: Vec<Vector> = points
            .iter()
            .map(|p| hull_basis.coords(&(p - &base)))
            .collect();
        let h = hull::convex_hull(&coords)?;
        let vertices: Vec<Vector> = h
            .vertices
            .iter()
            .map(|c| &base + hull_basis.basis() * c)
            .collect();
        Ok(Self {
            ambient,
            vertices,
            affine_dim,
            base,
            hull_basis,
            hull: Some(h),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient
    }

    /// n-dimensional Lebesgue measure; zero for lower-dimensional bodies.
    pub fn volume(&self) -> f64 {
        if self.affine_dim < self.ambient {
            0.0
        } else {
            self.hull.as_ref().map_or(0.0, |h| h.volume)
        }
    }

    /// Lebesgue measure inside the affine hull (`dim()`-dimensional); 1 for
    /// a point, matching the zero-dimensional convention.
    pub fn lambda_measure(&self) -> f64 {
        match &self.hull {
            None => 1.0,
            Some(h) => h.volume,
        }
    }

    /// Direction space of the affine hull.
    pub fn linear_hull(&self) -> Subspace {
        if self.affine_dim == 0 {
            Subspace::trivial(self.ambient)
        } else {
            self.hull_basis.clone()
        }
    }

    pub fn support(&self, u: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Mean of the vertices; interior for full-dimensional bodies.
    pub fn interior_point(&self) -> Vector {
        self.vertices
            .iter()
            .fold(DVector::zeros(self.ambient), |a, v| a + v)
            / self.vertices.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                d = d.max((&self.vertices[i] - &self.vertices[j]).norm());
            }
        }
        d
    }

    /// Irredundant facet description; full-dimensional bodies only.
    pub fn hrep(&self) -> Result<HRep> {
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate(format!(
                "degenerate body: dim {} < ambient {}",
                self.affine_dim, self.ambient
            )));
        }
        let h = self.hull.as_ref().expect("full-dim body has hull");
        let facets = h
            .facets
            .iter()
            .map(|f| Halfspace {
                // coords were p - base with the identity frame
                offset: f.offset + f.normal.dot(&self.base),
                normal: f.normal.clone(),
            })
            .collect();
        Ok(HRep {
            ambient: self.ambient,
            facets,
        })
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<VPolytope> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(a + b);
            }
        }
        VPolytope::new(self.ambient, sums)
    }

    pub fn translate(&self, t: &Vector) -> Result<VPolytope> {
        VPolytope::new(self.ambient, self.vertices.iter().map(|v| v + t).collect())
    }

    pub fn transformed(&self, m: &DMatrix<f64>) -> Result<VPolytope> {
        VPolytope::new(m.nrows(), self.vertices.iter().map(|v| m * v).collect())
    }

    /// Orthogonal projection in the coordinates of `s`.
    pub fn project_coords(&self, s: &Subspace) -> Result<VPolytope> {
        if s.ambient_dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: s.ambient_dim(),
            });
        }
        VPolytope::new(s.dim(), self.vertices.iter().map(|v| s.coords(v)).collect())
    }

    /// Orthogonal projection kept in the ambient space.
    pub fn project_embedded(&self, s: &Subspace) -> Result<VPolytope> {
        VPolytope::new(
            self.ambient,
            self.vertices
                .iter()
                .map(|v| s.project(v))
                .collect::<Result<_>>()?,
        )
    }
}

/// One halfspace `<normal, x> <= offset` with unit normal.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

/// Irredundant facet description of a full-dimensional polytope.
#[derive(Debug, Clone)]
pub struct HRep {
    ambient: usize,
    facets: Vec<Halfspace>,
}

impl HRep {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets.iter().all(|f| f.normal.dot(x) <= f.offset + tol)
    }

    /// Vertex enumeration: solve every d-subset of facet equations and keep
    /// the feasible, deduplicated solutions. Intended for small instances
    /// (duality tests, solver validation).
    pub fn enumerate_vertices(&self) -> Result<Vec<Vector>> {
        let d = self.ambient;
        let m = self.facets.len();
        if m < d {
            return Err(Error::Degenerate("fewer facets than dimensions".into()));
        }
        let scale = self
            .facets
            .iter()
            .map(|f| f.offset.abs())
            .fold(1.0f64, f64::max);
        let mut found: Vec<Vector> = Vec::new();
        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let mut a = DMatrix::zeros(d, d);
            let mut b = DVector::zeros(d);
            for (r, &fi) in subset.iter().enumerate() {
                a.row_mut(r).copy_from(&self.facets[fi].normal.transpose());
                b[r] = self.facets[fi].offset;
            }
            if let Some(x) = a.lu().solve(&b) {
                if x.iter().all(|c| c.is_finite())
                    && x.amax() < 1e8
                    && self.contains(&x, 1e-7 * scale)
                    && !found.iter().any(|y| (y - &x).amax() <= 1e-7)
                {
                    found.push(x);
                }
            }
            // next d-combination of 0..m
            let mut k = d;
            loop {
                if k == 0 {
                    return Ok(found);
                }
                k -= 1;
                if subset[k] + 1 <= m - (d - k) {
                    subset[k] += 1;
                    for j in k + 1..d {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// A body slot in inequality and mixed-volume computations. The unit ball
/// is a symbolic token: exact paths never approximate it by a polytope.
#[derive(Debug, Clone)]
pub enum Body {
    Zonotope(Zonotope),
    Polytope(VPolytope),
    Ball { ambient: usize },
}

impl Body {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Body::Zonotope(z) => z.ambient_dim(),
            Body::Polytope(p) => p.ambient_dim(),
            Body::Ball { ambient } => *ambient,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Zonotope(z) => z.dim(),
            Body::Polytope(p) => p.dim(),
            Body::Ball { ambient } => *ambient,
        }
    }

    pub fn support(&self, u: &Vector) -> f64 {
        match self {
            Body::Zonotope(z) => z.support(u),
            Body::Polytope(p) => p.support(u),
            Body::Ball { .. } => u.norm(),
        }
    }

    pub fn linear_hull(&self) -> Subspace {
        match self {
            Body::Zonotope(z) => z.linear_hull(),
            Body::Polytope(p) => p.linear_hull(),
            Body::Ball { ambient } => Subspace::full(*ambient),
        }
    }

    pub fn is_zonotope(&self) -> bool {
        matches!(self, Body::Zonotope(_))
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, Body::Ball { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sample_grassmannian;
    use crate::rng::SampleRng;
    use approx::assert_relative_eq;

    fn v(c: &[f64]) -> Vector {
        DVector::from_row_slice(c)
    }

    fn unit_cube(n: usize) -> VPolytope {
        let pts = (0..1usize << n)
            .map(|mask| DVector::from_fn(n, |i, _| ((mask >> i) & 1) as f64))
            .collect();
        VPolytope::new(n, pts).unwrap()
    }

    #[test]
    fn cube_segment_simplex_volumes() {
        assert_relative_eq!(unit_cube(3).volume(), 1.0, epsilon = 1e-12);

        let seg = VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.volume(), 0.0);
        assert_relative_eq!(seg.lambda_measure(), 2f64.sqrt(), epsilon = 1e-12);

        let simplex = VPolytope::new(
            3,
            vec![
                v(&[0.0, 0.0, 0.0]),
                v(&[1.0, 0.0, 0.0]),
                v(&[0.0, 1.0, 0.0]),
                v(&[0.0, 0.0, 1.0]),
            ],
        )
        .unwrap();
        assert_relative_eq!(simplex.volume(), 1.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn zonotope_sign_enumeration() {
        let square =
            Zonotope::new(2, vec![v(&[0.5, 0.0]), v(&[0.0, 0.5])], None).unwrap();
        let p = square.to_vpolytope(&Budget::default()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        for vert in p.vertices() {
            assert_relative_eq!(vert[0].abs(), 0.5);
            assert_relative_eq!(vert[1].abs(), 0.5);
        }

        let seg = Zonotope::new(3, vec![v(&[1.0, 0.0, 0.0])], None).unwrap();
        let p = seg.to_vpolytope(&Budget::default()).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.dim(), 1);

        let hexagon = Zonotope::new(
            2,
            vec![v(&[0.5, 0.0]), v(&[0.0, 0.5]), v(&[0.5, 0.5])],
            None,
        )
        .unwrap();
        let p = hexagon.to_vpolytope(&Budget::default()).unwrap();
        assert_eq!(p.vertices().len(), 6);
    }

    #[test]
    fn generator_guard_raises_budget_error() {
        let gens: Vec<Vector> = (0..25).map(|i| v(&[1.0, i as f64 + 1.0])).collect();
        let z = Zonotope::new(2, gens, None).unwrap();
        assert!(matches!(
            z.to_vpolytope(&Budget::default()),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn zero_generators_dropped() {
        let z = Zonotope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])], None).unwrap();
        assert_eq!(z.generators().len(), 1);
        assert_eq!(z.dim(), 1);
    }

    #[test]
    fn zonotope_support_matches_vertex_support() {
        let mut rng = SampleRng::from_seed(17);
        for _ in 0..20 {
            let n = 3;
            let gens: Vec<Vector> = (0..4)
                .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
                .collect();
            let z = Zonotope::new(n, gens, None).unwrap();
            let p = z.to_vpolytope(&Budget::default()).unwrap();
            for _ in 0..100 {
                let u = rng.unit_vector(n);
                assert!(
                    (z.support(&u) - p.support(&u)).abs() <= 1e-9,
                    "support mismatch"
                );
            }
        }
    }

    #[test]
    fn minkowski_sum_examples() {
        let seg_x = VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])]).unwrap();
        let seg_y = VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let square = seg_x.minkowski_sum(&seg_y).unwrap();
        assert_eq!(square.vertices().len(), 4);
        assert_relative_eq!(square.volume(), 1.0, epsilon = 1e-12);

        // P + point = translate
        let pt = VPolytope::new(2, vec![v(&[3.0, -1.0])]).unwrap();
        let moved = square.minkowski_sum(&pt).unwrap();
        assert_relative_eq!(moved.volume(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(moved.support(&v(&[1.0, 0.0])), 4.0, epsilon = 1e-12);

        // square + rotated square = octagon
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let rot = DMatrix::from_row_slice(2, 2, &[c, -c, c, c]);
        let rotated = square.transformed(&rot).unwrap();
        let oct = square.minkowski_sum(&rotated).unwrap();
        assert_eq!(oct.vertices().len(), 8);
        assert_eq!(oct.hrep().unwrap().facets().len(), 8);
        // area = 1 + 1 + 2V(K,K') with 2V = perimeter-type term 2*sqrt(2)
        assert_relative_eq!(oct.volume(), 2.0 + 2.0 * 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn minkowski_support_is_additive() {
        let mut rng = SampleRng::from_seed(23);
        let p = unit_cube(3);
        let q = VPolytope::new(
            3,
            (0..6)
                .map(|_| DVector::from_fn(3, |_, _| rng.uniform() * 2.0 - 1.0))
                .collect(),
        )
        .unwrap();
        let s = p.minkowski_sum(&q).unwrap();
        for _ in 0..100 {
            let u = rng.unit_vector(3);
            assert!((s.support(&u) - p.support(&u) - q.support(&u)).abs() < 1e-8);
        }
    }

    #[test]
    fn doubling_scales_volume_by_two_pow_n() {
        for n in 2..=3 {
            let p = unit_cube(n);
            let doubled = p.minkowski_sum(&p).unwrap();
            assert_relative_eq!(
                doubled.volume(),
                2f64.powi(n as i32) * p.volume(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn hrep_examples() {
        let cube = unit_cube(3);
        let h = cube.hrep().unwrap();
        assert_eq!(h.facets().len(), 6);
        for f in h.facets() {
            assert_relative_eq!(f.normal.norm(), 1.0, epsilon = 1e-12);
            let nearly_axis = (0..3).any(|i| (f.normal[i].abs() - 1.0).abs() < 1e-9);
            assert!(nearly_axis, "cube normal not axis aligned: {:?}", f.normal);
        }
        for vert in cube.vertices() {
            assert!(h.contains(vert, 1e-8));
        }

        let tri =
            VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert_eq!(tri.hrep().unwrap().facets().len(), 3);

        let seg = VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])]).unwrap();
        assert!(matches!(seg.hrep(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn hrep_vertex_duality() {
        let mut rng = SampleRng::from_seed(31);
        for n in 2..=3 {
            let pts: Vec<Vector> = (0..10)
                .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
                .collect();
            let p = VPolytope::new(n, pts).unwrap();
            let back = p.hrep().unwrap().enumerate_vertices().unwrap();
            assert_eq!(back.len(), p.vertices().len());
            for vert in p.vertices() {
                assert!(
                    back.iter().any(|w| (w - vert).amax() < 1e-7),
                    "vertex lost in duality"
                );
            }
        }
    }

    #[test]
    fn volume_invariant_under_translation_and_rotation() {
        let mut rng = SampleRng::from_seed(53);
        let pts: Vec<Vector> = (0..12)
            .map(|_| DVector::from_fn(3, |_, _| rng.uniform() * 2.0 - 1.0))
            .collect();
        let p = VPolytope::new(3, pts).unwrap();
        let vol = p.volume();

        let t = v(&[0.7, -3.0, 11.0]);
        assert_relative_eq!(p.translate(&t).unwrap().volume(), vol, epsilon = 1e-9);

        let q = sample_grassmannian(3, 3, &mut rng).unwrap();
        let rot: DMatrix<f64> = q.basis().clone();
        assert_relative_eq!(p.transformed(&rot).unwrap().volume(), vol, epsilon = 1e-9);
    }

    #[test]
    fn support_function_examples() {
        let cube = unit_cube(2);
        assert_relative_eq!(cube.support(&v(&[1.0, 1.0])), 2.0);

        let z = Zonotope::new(2, vec![v(&[0.5, 0.0])], None).unwrap();
        assert_relative_eq!(z.support(&v(&[1.0, 0.0])), 0.5);

        let z2 = Zonotope::new(2, vec![v(&[0.5, 0.0]), v(&[0.0, 0.5])], None).unwrap();
        assert_relative_eq!(z2.support(&v(&[1.0, 1.0])), 1.0);
    }

    #[test]
    fn projection_in_subspace_coords() {
        let cube = unit_cube(3);
        let s = Subspace::coordinate(3, &[0, 1]);
        let shadow = cube.project_coords(&s).unwrap();
        assert_eq!(shadow.ambient_dim(), 2);
        assert_relative_eq!(shadow.volume(), 1.0, epsilon = 1e-12);

        let z = Zonotope::new(3, vec![v(&[0.5, 0.0, 0.0]), v(&[0.0, 0.0, 0.5])], None).unwrap();
        let zp = z.project_coords(&s).unwrap();
        assert_eq!(zp.generators().len(), 1); // e3 generator projects to zero
    }
}
