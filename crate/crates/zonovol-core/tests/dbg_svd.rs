use nalgebra::DVector;
use zonovol_core::bodies::{Budget, VPolytope, Zonotope};
use zonovol_core::linalg::orthonormalize;

#[test]
fn trace_degenerate_conversion() {
    let w1 = DVector::from_row_slice(&[
        -0.8624025828463202, -0.15346140896891702, -0.5095525454455994, 0.291341928743879,
    ]);
    let w2 = DVector::from_row_slice(&[
        -0.0926613922881836, -0.5614274233149015, 0.8345084279280999, -0.8475144428612895,
    ]);
    let z = Zonotope::new(4, vec![w1.clone(), w2.clone()], None).unwrap();
    let p = z.to_vpolytope(&Budget::default()).unwrap();
    println!("verts {}", p.vertices().len());
    for v in p.vertices() {
        // check span membership
        let sub = orthonormalize(&[w1.clone(), w2.clone()]);
        let resid = (v - sub.project(v).unwrap()).norm();
        println!("v {:?} span-resid {resid:.3e}", v.as_slice());
    }
    // manual: the four sign points, their coords, hull in 2d
    let pts = vec![
        -&w1 - &w2,
        &w1 - &w2,
        -&w1 + &w2,
        &w1 + &w2,
    ];
    let base = pts[0].clone();
    let dirs: Vec<_> = pts[1..].iter().map(|q| q - &base).collect();
    let span = orthonormalize(&dirs);
    println!("span dim {}", span.dim());
    let coords: Vec<_> = pts.iter().map(|q| span.coords(&(q - &base))).collect();
    for c in &coords {
        println!("coord {:?}", c.as_slice());
    }
    let h = zonovol_core::bodies::hull::convex_hull(&coords).unwrap();
    println!("hull verts:");
    for c in &h.vertices {
        println!("  {:?}", c.as_slice());
    }
    let _ = p;
    let _ = VPolytope::new(4, pts).unwrap();
}
