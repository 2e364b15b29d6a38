//! Dense primal simplex, specialized for the Chebyshev-center program
//! `max r` s.t. `<a_i, x> + r <= b_i`. Desk-scale only: a handful of
//! variables, at most a few hundred facets.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::Vector;

const EPS: f64 = 1e-11;

/// Simplex tableau for `max c^T y` s.t. `A y <= b`, `y >= 0`, `b >= 0`.
/// Bland's rule throughout, so it terminates despite degeneracy.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    let m = a.len();
    let nv = c.len();
    debug_assert!(b.iter().all(|&x| x >= 0.0));
    let width = nv + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..nv].copy_from_slice(&a[i]);
        t[i][nv + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..nv {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    for _round in 0..20_000 {
        // Bland: first column with negative reduced cost.
        let Some(enter) = (0..nv + m).find(|&j| t[m][j] < -EPS) else {
            break;
        };
        // Ratio test, Bland tie-break by smallest basis index.
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for (i, row) in t.iter().enumerate().take(m) {
            if row[enter] > EPS {
                let ratio = row[width - 1] / row[enter];
                if ratio < best - EPS
                    || (ratio < best + EPS && leave.is_some_and(|l| basis[i] < basis[l]))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::Numerical("unbounded linear program".into()));
        };
        // Pivot.
        let piv = t[leave][enter];
        for x in t[leave].iter_mut() {
            *x /= piv;
        }
        for i in 0..=m {
            if i != leave && t[i][enter].abs() > 0.0 {
                let f = t[i][enter];
                for j in 0..width {
                    t[i][j] -= f * t[leave][j];
                }
            }
        }
        basis[leave] = enter;
    }
    if (0..nv + m).any(|j| t[m][j] < -1e-7) {
        return Err(Error::NonConvergence(
            "simplex iteration limit reached".into(),
        ));
    }

    let mut y = vec![0.0; nv];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < nv {
            y[bj] = t[i][width - 1];
        }
    }
    Ok(y)
}

/// Largest ball inside the intersection of `<normal_i, x> <= offset_i`.
/// `strictly_inside` must satisfy every constraint with positive slack;
/// returns the ball's center and radius.
pub fn chebyshev_center(
    halfspaces: &[(Vector, f64)],
    strictly_inside: &Vector,
) -> Result<(Vector, f64)> {
    let d = strictly_inside.len();
    let m = halfspaces.len();
    if m == 0 {
        return Err(Error::Degenerate("no constraints".into()));
    }
    // Shift so the feasible start is the origin; normalize rows.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    for (normal, offset) in halfspaces {
        let norm = normal.norm();
        if norm < 1e-14 {
            continue;
        }
        let slack = (offset - normal.dot(strictly_inside)) / norm;
        if slack <= 0.0 {
            return Err(Error::Degenerate(
                "reference point is not strictly inside".into(),
            ));
        }
        // variables: x = x+ - x- (d each), then r
        let mut row = Vec::with_capacity(2 * d + 1);
        for k in 0..d {
            row.push(normal[k] / norm);
        }
        for k in 0..d {
            row.push(-normal[k] / norm);
        }
        row.push(1.0);
        rows.push(row);
        rhs.push(slack);
    }
    let mut c = vec![0.0; 2 * d + 1];
    c[2 * d] = 1.0;
    let y = simplex_max(&rows, &rhs, &c)?;
    let center = DVector::from_fn(d, |k, _| y[k] - y[d + k]) + strictly_inside;
    Ok((center, y[2 * d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hs(n: &[f64], b: f64) -> (Vector, f64) {
        (DVector::from_row_slice(n), b)
    }

    #[test]
    fn chebyshev_center_of_unit_square() {
        let cons = vec![
            hs(&[1.0, 0.0], 1.0),
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, 1.0], 1.0),
            hs(&[0.0, -1.0], 0.0),
        ];
        let inside = DVector::from_row_slice(&[0.3, 0.6]);
        let (center, r) = chebyshev_center(&cons, &inside).unwrap();
        assert_relative_eq!(r, 0.5, epsilon = 1e-9);
        assert_relative_eq!(center[0], 0.5, epsilon = 1e-9);
        assert_relative_eq!(center[1], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn chebyshev_center_of_triangle() {
        // conv{o, e1, e2}: inradius (2 - sqrt(2))/2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cons = vec![
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, -1.0], 0.0),
            hs(&[s, s], s),
        ];
        let inside = DVector::from_row_slice(&[0.25, 0.25]);
        let (_, r) = chebyshev_center(&cons, &inside).unwrap();
        assert_relative_eq!(r, (2.0 - 2f64.sqrt()) / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn chebyshev_center_of_flat_box() {
        // [0,2] x [0,1]: inradius 1/2.
        let cons = vec![
            hs(&[1.0, 0.0], 2.0),
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, 1.0], 1.0),
            hs(&[0.0, -1.0], 0.0),
        ];
        let inside = DVector::from_row_slice(&[1.0, 0.5]);
        let (_, r) = chebyshev_center(&cons, &inside).unwrap();
        assert_relative_eq!(r, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn reference_point_must_be_interior() {
        let cons = vec![hs(&[1.0], 1.0), hs(&[-1.0], 0.0)];
        let outside = DVector::from_row_slice(&[2.0]);
        assert!(chebyshev_center(&cons, &outside).is_err());
    }
}
