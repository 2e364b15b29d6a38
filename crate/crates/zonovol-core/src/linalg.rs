//! Parallelepiped volumes, subspaces, brackets and projections.
//!
//! Everything downstream (generating measures, recovered subspaces,
//! orthogonality certificates) reduces to three primitives: the k-volume
//! `D_k` of the parallelepiped spanned by k vectors, orthonormal bases of
//! spans, and the bracket of a tuple of subspaces. All of them are computed
//! through Gram determinants so one code path covers every `k <= n`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rng::SampleRng;

/// Relative singular-value cutoff deciding ranks in `orthonormalize`.
/// Bodies in this crate are desk scale with O(1) coordinates.
pub const RANK_TOL: f64 = 1e-10;

pub type Vector = DVector<f64>;

/// k-volume of the parallelepiped spanned by `vectors`, i.e.
/// `sqrt(det(Gram))`. Zero iff the vectors are linearly dependent;
/// equals `|det|` when k matches the ambient dimension.
pub fn parallelepiped_volume(vectors: &[Vector]) -> Result<f64> {
    let k = vectors.len();
    if k == 0 {
        return Ok(1.0);
    }
    let n = vectors[0].len();
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    if k > n {
        return Err(Error::DimensionMismatch { expected: n, got: k });
    }
    let mut gram = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let d = vectors[i].dot(&vectors[j]);
            gram[(i, j)] = d;
            gram[(j, i)] = d;
        }
    }
    // Round-off can push the determinant of a singular Gram matrix slightly
    // negative; clamp before the square root.
    Ok(gram.determinant().max(0.0).sqrt())
}

/// A linear subspace of R^n stored as an orthonormal basis matrix
/// (`ambient_dim` rows, `dim` columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Result<Self> {
        let cols = basis.ncols();
        if cols > basis.nrows() {
            return Err(Error::DimensionMismatch {
                expected: basis.nrows(),
                got: cols,
            });
        }
        let gram = basis.transpose() * &basis;
        for i in 0..cols {
            for j in 0..cols {
                let target = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - target).abs() > 1e-10 {
                    return Err(Error::Numerical(format!(
                        "basis not orthonormal: gram[{i},{j}] = {}",
                        gram[(i, j)]
                    )));
                }
            }
        }
        Ok(Self { basis })
    }

    /// The trivial subspace {o}.
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    /// Full space R^n with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the given standard basis vectors (0-based indices).
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut basis = DMatrix::zeros(ambient_dim, axes.len());
        for (c, &a) in axes.iter().enumerate() {
            basis[(a, c)] = 1.0;
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal projection of `point` onto the subspace: `B B^T x`.
    pub fn project(&self, point: &Vector) -> Result<Vector> {
        if point.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: point.len(),
            });
        }
        Ok(&self.basis * (self.basis.transpose() * point))
    }

    /// Coordinates of the projection in the subspace basis: `B^T x`.
    pub fn coords(&self, point: &Vector) -> Vector {
        self.basis.transpose() * point
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let d = self.dim();
        if d == 0 {
            return Subspace::full(n);
        }
        if d == n {
            return Subspace::trivial(n);
        }
        // Complete the basis by orthonormalizing [B | I] and keeping the
        // trailing n-d columns.
        let mut cols: Vec<Vector> = (0..d).map(|c| self.basis.column(c).into()).collect();
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            cols.push(e);
        }
        let full = orthonormalize(&cols);
        debug_assert_eq!(full.dim(), n);
        let comp = full.basis.columns(d, n - d).into();
        Subspace { basis: comp }
    }

    /// Spectral distance between equal-dimensional subspaces: the norm of
    /// the difference of the orthogonal projectors, which equals the sine of
    /// the largest principal angle.
    pub fn projector_distance(&self, other: &Subspace) -> f64 {
        let p = &self.basis * self.basis.transpose();
        let q = &other.basis * other.basis.transpose();
        (p - q).norm() // Frobenius; upper-bounds the spectral norm.
    }

    /// Deterministic ordering key: lexicographic over basis entries.
    pub fn lex_key(&self) -> Vec<u64> {
        self.basis.iter().map(|x| x.to_bits()).collect()
    }
}

/// Orthonormal basis of the span of `spanning`, with the rank decided by
/// column-pivoted Gram-Schmidt: residuals below `RANK_TOL` times the
/// largest input norm are treated as zero. Empty input yields the trivial
/// subspace.
///
/// Pivoted Gram-Schmidt with re-orthogonalization is used instead of an
/// SVD because the basis must span the inputs to machine precision even
/// for exactly rank-deficient matrices, where iterative SVDs can return
/// singular vectors that leak out of the column space.
pub fn orthonormalize(spanning: &[Vector]) -> Subspace {
    if spanning.is_empty() {
        return Subspace::trivial(0);
    }
    let n = spanning[0].len();
    let mut residuals: Vec<Vector> = spanning.to_vec();
    let scale = residuals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return Subspace::trivial(n);
    }
    let mut basis: Vec<Vector> = Vec::new();
    while basis.len() < n {
        // Pivot: the largest remaining residual.
        let (k, rnorm) = residuals
            .iter()
            .enumerate()
            .map(|(k, r)| (k, r.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("nonempty residuals");
        if rnorm <= RANK_TOL * scale {
            break;
        }
        let mut v = residuals.swap_remove(k) / rnorm;
        // Re-orthogonalize; a second pass removes the O(eps) leakage of
        // plain Gram-Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
            let nv = v.norm();
            if nv <= RANK_TOL {
                break;
            }
            v /= nv;
        }
        for r in residuals.iter_mut() {
            let c = v.dot(r);
            *r -= &v * c;
        }
        basis.push(v);
        if residuals.is_empty() {
            break;
        }
    }
    let mut m = DMatrix::zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, b);
    }
    Subspace { basis: m }
}

/// Partial bracket `[U_1,...,U_m]_{span_dim}` of subspaces with
/// `sum dim(U_i) = span_dim <= n`: stack the orthonormal bases and take the
/// parallelepiped volume of the stacked tuple. Zero when the stacked tuple
/// is dependent, one exactly when the subspaces are pairwise orthogonal.
pub fn bracket(subspaces: &[&Subspace], span_dim: usize) -> Result<f64> {
    if subspaces.is_empty() {
        return if span_dim == 0 {
            Ok(1.0)
        } else {
            Err(Error::DimensionMismatch {
                expected: span_dim,
                got: 0,
            })
        };
    }
    let n = subspaces[0].ambient_dim();
    let total: usize = subspaces.iter().map(|s| s.dim()).sum();
    if total != span_dim {
        return Err(Error::DimensionMismatch {
            expected: span_dim,
            got: total,
        });
    }
    if span_dim > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: span_dim,
        });
    }
    let mut cols: Vec<Vector> = Vec::with_capacity(span_dim);
    for s in subspaces {
        if s.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.ambient_dim(),
            });
        }
        for c in 0..s.dim() {
            cols.push(s.basis().column(c).into());
        }
    }
    let v = parallelepiped_volume(&cols)?;
    // Orthonormal inputs bound the bracket by one; shave round-off.
    Ok(v.min(1.0))
}

/// Haar-distributed `i`-dimensional subspace of R^n: orthonormalize `i`
/// independent standard Gaussian vectors. Deterministic per RNG state.
pub fn sample_grassmannian(n: usize, i: usize, rng: &mut SampleRng) -> Result<Subspace> {
    if i > n {
        return Err(Error::DimensionMismatch { expected: n, got: i });
    }
    if i == 0 {
        return Ok(Subspace::trivial(n));
    }
    loop {
        let cols: Vec<Vector> = (0..i)
            .map(|_| DVector::from_fn(n, |_, _| rng.gaussian()))
            .collect();
        let s = orthonormalize(&cols);
        // Gaussian vectors are independent almost surely; redraw on the
        // measure-zero degenerate event.
        if s.dim() == i {
            return Ok(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(coords: &[f64]) -> Vector {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn d1_is_euclidean_norm() {
        assert_relative_eq!(parallelepiped_volume(&[v(&[3.0, 4.0])]).unwrap(), 5.0);
    }

    #[test]
    fn parallelogram_base_one_height_one() {
        let vol = parallelepiped_volume(&[v(&[1.0, 0.0, 0.0]), v(&[1.0, 1.0, 0.0])]).unwrap();
        assert_relative_eq!(vol, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_cube_has_volume_one() {
        for n in 1..=6 {
            let cols: Vec<Vector> = (0..n)
                .map(|i| {
                    let mut e = DVector::zeros(n);
                    e[i] = 1.0;
                    e
                })
                .collect();
            assert_relative_eq!(parallelepiped_volume(&cols).unwrap(), 1.0);
        }
    }

    #[test]
    fn dependent_vectors_give_zero() {
        let vol = parallelepiped_volume(&[v(&[1.0, 2.0]), v(&[2.0, 4.0])]).unwrap();
        assert!(vol < 1e-8);
    }

    #[test]
    fn dk_invariant_under_permutation_and_rotation() {
        let mut rng = SampleRng::from_seed(11);
        for _ in 0..50 {
            let n = 4;
            let vecs: Vec<Vector> = (0..3)
                .map(|_| DVector::from_fn(n, |_, _| rng.gaussian()))
                .collect();
            let d0 = parallelepiped_volume(&vecs).unwrap();
            let permuted = vec![vecs[2].clone(), vecs[0].clone(), vecs[1].clone()];
            assert_relative_eq!(parallelepiped_volume(&permuted).unwrap(), d0, epsilon = 1e-10);

            let q = sample_grassmannian(n, n, &mut rng).unwrap();
            let rotated: Vec<Vector> = vecs.iter().map(|x| q.basis() * x).collect();
            assert_relative_eq!(
                parallelepiped_volume(&rotated).unwrap(),
                d0,
                epsilon = 1e-9,
            );
        }
    }

    #[test]
    fn orthonormalize_examples() {
        let s = orthonormalize(&[v(&[2.0, 0.0])]);
        assert_eq!(s.dim(), 1);
        assert_relative_eq!(s.basis()[(0, 0)].abs(), 1.0);

        let s = orthonormalize(&[v(&[1.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])]);
        assert_eq!(s.dim(), 1);

        let s = orthonormalize(&[v(&[1.0, 1.0, 0.0]), v(&[1.0, -1.0, 0.0])]);
        assert_eq!(s.dim(), 2);
        // span{e1,e2}: e3 component of any basis vector vanishes
        for c in 0..2 {
            assert!(s.basis()[(2, c)].abs() < 1e-12);
        }

        assert_eq!(orthonormalize(&[]).dim(), 0);
    }

    #[test]
    fn bracket_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert_relative_eq!(bracket(&[&e1, &e2], 2).unwrap(), 1.0);

        let theta: f64 = 30f64.to_radians();
        let slanted = orthonormalize(&[v(&[theta.cos(), theta.sin()])]);
        assert_relative_eq!(bracket(&[&e1, &slanted], 2).unwrap(), 0.5, epsilon = 1e-12);

        // Partial bracket of orthogonal lines in R^3.
        let f1 = Subspace::coordinate(3, &[0]);
        let f2 = Subspace::coordinate(3, &[1]);
        assert_relative_eq!(bracket(&[&f1, &f2], 2).unwrap(), 1.0);

        // Dependent tuple.
        let g = orthonormalize(&[v(&[1.0, 0.0, 0.0])]);
        assert_relative_eq!(bracket(&[&f1, &g], 2).unwrap(), 0.0, epsilon = 1e-10);

        // Dimension-sum overflow is a contract violation.
        let plane = Subspace::coordinate(2, &[0, 1]);
        assert!(bracket(&[&plane, &e1], 3).is_err());
    }

    #[test]
    fn bracket_factorizes_parallelepiped_volume() {
        // D_{n-b}(u_1..u_{n-b}) = [U_1,...,U_m] * prod D_{a_i}(block_i)
        let mut rng = SampleRng::from_seed(99);
        for _ in 0..100 {
            let n = 5;
            let block_dims = [2usize, 2];
            let mut all: Vec<Vector> = Vec::new();
            let mut blocks: Vec<Vec<Vector>> = Vec::new();
            for &d in &block_dims {
                let b: Vec<Vector> = (0..d)
                    .map(|_| DVector::from_fn(n, |_, _| rng.gaussian()))
                    .collect();
                all.extend(b.iter().cloned());
                blocks.push(b);
            }
            let lhs = parallelepiped_volume(&all).unwrap();
            let subspaces: Vec<Subspace> = blocks.iter().map(|b| orthonormalize(b)).collect();
            let refs: Vec<&Subspace> = subspaces.iter().collect();
            let br = bracket(&refs, 4).unwrap();
            let mut rhs = br;
            for b in &blocks {
                rhs *= parallelepiped_volume(b).unwrap();
            }
            assert_relative_eq!(lhs, rhs, epsilon = 1e-8 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn projection_is_idempotent_and_contractive() {
        let mut rng = SampleRng::from_seed(5);
        for _ in 0..50 {
            let n = 4;
            let s = sample_grassmannian(n, 2, &mut rng).unwrap();
            let x = DVector::from_fn(n, |_, _| rng.gaussian());
            let p = s.project(&x).unwrap();
            let pp = s.project(&p).unwrap();
            assert_relative_eq!((&pp - &p).norm(), 0.0, epsilon = 1e-12);
            assert!(p.norm() <= x.norm() + 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let s = Subspace::coordinate(3, &[0, 1]);
        let p = s.project(&v(&[1.0, 2.0, 3.0])).unwrap();
        assert_relative_eq!((p - v(&[1.0, 2.0, 0.0])).norm(), 0.0, epsilon = 1e-14);

        let full = Subspace::full(2);
        let x = v(&[0.3, -0.7]);
        assert_relative_eq!((full.project(&x).unwrap() - &x).norm(), 0.0);

        let line = Subspace::coordinate(2, &[0]);
        assert_relative_eq!(
            (line.project(&v(&[1.0, 1.0])).unwrap() - v(&[1.0, 0.0])).norm(),
            0.0
        );
    }

    #[test]
    fn grassmannian_endpoints() {
        let mut rng = SampleRng::from_seed(1);
        assert_eq!(sample_grassmannian(4, 0, &mut rng).unwrap().dim(), 0);
        let full = sample_grassmannian(4, 4, &mut rng).unwrap();
        assert_eq!(full.dim(), 4);
        // Orthonormality of the sampled frame.
        let g = full.basis().transpose() * full.basis();
        assert_relative_eq!((g - DMatrix::identity(4, 4)).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn haar_line_first_coordinate_second_moment() {
        // For Haar lines in R^3 the squared first coordinate has mean 1/3.
        let mut rng = SampleRng::from_seed(2024);
        let samples = 20_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..samples {
            let l = sample_grassmannian(3, 1, &mut rng).unwrap();
            let c = l.basis()[(0, 0)];
            sum += c * c;
            sum2 += c * c * c * c;
        }
        let mean = sum / samples as f64;
        let var = (sum2 / samples as f64 - mean * mean).max(0.0);
        let stderr = (var / samples as f64).sqrt();
        assert!(
            (mean - 1.0 / 3.0).abs() < 3.0 * stderr,
            "mean {mean}, stderr {stderr}"
        );
    }

    #[test]
    fn complement_is_orthogonal_and_complete() {
        let mut rng = SampleRng::from_seed(8);
        for dim in 0..=4 {
            let s = sample_grassmannian(4, dim, &mut rng).unwrap();
            let c = s.complement();
            assert_eq!(c.dim(), 4 - dim);
            if dim > 0 && dim < 4 {
                let cross = s.basis().transpose() * c.basis();
                assert!(cross.norm() < 1e-10);
            }
        }
    }
}
