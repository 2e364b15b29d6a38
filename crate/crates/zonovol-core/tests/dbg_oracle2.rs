use nalgebra::DVector;
use zonovol_core::bodies::{Budget, Zonotope};
use zonovol_core::linalg::Vector;
use zonovol_core::rng::SampleRng;
use zonovol_core::zonoid::zonotope_intrinsic_volume;

fn random_zonotope(n: usize, max_gens: usize, rng: &mut SampleRng) -> Zonotope {
    let count = 1 + (rng.uniform() * max_gens as f64) as usize;
    let gens: Vec<Vector> = (0..count.min(max_gens))
        .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
        .collect();
    Zonotope::new(n, gens, None).unwrap()
}

#[test]
fn zonotope_sums_exact_vs_hull() {
    let budget = Budget::default();
    let mut rng = SampleRng::from_seed(1001);
    // replay to instance n=4, i=67
    for n in 2..=4usize {
        for i in 0..200 {
            let zs: Vec<Zonotope> = (0..n).map(|_| random_zonotope(n, 4, &mut rng)).collect();
            if n == 4 && i == 67 {
                for mask in [0b0010usize, 0b1000, 0b0011, 0b1001, 0b0110, 0b1010, 0b1100, 0b0111, 0b1011, 0b1101, 0b1110, 0b1111] {
                    let mut gens: Vec<Vector> = Vec::new();
                    for (k, z) in zs.iter().enumerate() {
                        if (mask >> k) & 1 == 1 {
                            gens.extend(z.generators().iter().cloned());
                        }
                    }
                    let combined = Zonotope::new(4, gens, None).unwrap();
                    let exact = zonotope_intrinsic_volume(&combined, 4).unwrap();
                    let direct_hull = combined.to_vpolytope(&budget).unwrap().volume();
                    // also via iterated minkowski sums of the vertex sets
                    let mut sum: Option<zonovol_core::bodies::VPolytope> = None;
                    for (k, z) in zs.iter().enumerate() {
                        if (mask >> k) & 1 == 1 {
                            let p = z.to_vpolytope(&budget).unwrap();
                            sum = Some(match sum {
                                None => p,
                                Some(s) => s.minkowski_sum(&p).unwrap(),
                            });
                        }
                    }
                    let mink_hull = sum.unwrap().volume();
                    println!(
                        "mask {mask:04b}: determinant {exact:.9} direct-hull {direct_hull:.9} mink-hull {mink_hull:.9}"
                    );
                }
                return;
            }
        }
    }
}
