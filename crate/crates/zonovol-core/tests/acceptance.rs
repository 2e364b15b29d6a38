//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success (run with `--nocapture` to see them; a failed
//! assertion marks the criterion failed).

use std::time::Instant;

use nalgebra::DVector;
use zonovol_core::bodies::{Body, Budget, VPolytope, Zonotope};
use zonovol_core::inequality::{check_af_lower, check_reverse_af, InequalityId};
use zonovol_core::linalg::{sample_grassmannian, Vector};
use zonovol_core::oracle::{kubota_intrinsic_volume_mc, polarization_mixed_volume};
use zonovol_core::rng::SampleRng;
use zonovol_core::stability::{
    ball_intrinsic_ratio, check_stability, max_inscribed_ellipsoid, projstab_check,
    r_m_estimate, RadiusMethod, TheoremId,
};
use zonovol_core::zonoid::{
    kappa, projection_generating_measure, zonotope_intrinsic_volume, zonotope_mixed_volume,
    Evaluator,
};

fn v(c: &[f64]) -> Vector {
    DVector::from_row_slice(c)
}

fn random_zonotope(n: usize, max_gens: usize, rng: &mut SampleRng) -> Zonotope {
    let count = 1 + (rng.uniform() * max_gens as f64) as usize;
    let gens: Vec<Vector> = (0..count.min(max_gens))
        .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
        .collect();
    Zonotope::new(n, gens, None).unwrap()
}

fn segment(n: usize, axis: usize, length: f64) -> Body {
    let mut g = DVector::zeros(n);
    g[axis] = length / 2.0;
    Body::Zonotope(Zonotope::new(n, vec![g], None).unwrap())
}

#[test]
fn criterion_01_oracle_equivalence() {
    let budget = Budget::default();
    let start = Instant::now();
    let mut rng = SampleRng::from_seed(1001);
    let mut worst: f64 = 0.0;
    for n in 2..=4usize {
        for _ in 0..200 {
            let zs: Vec<Zonotope> = (0..n).map(|_| random_zonotope(n, 4, &mut rng)).collect();
            let slots: Vec<&Zonotope> = zs.iter().collect();
            let exact = zonotope_mixed_volume(&slots, &budget).unwrap();
            let polys: Vec<VPolytope> =
                zs.iter().map(|z| z.to_vpolytope(&budget).unwrap()).collect();
            let refs: Vec<&VPolytope> = polys.iter().collect();
            let oracle = polarization_mixed_volume(&refs, &budget).unwrap();
            let rel = (exact - oracle).abs() / exact.abs().max(oracle.abs()).max(1e-30);
            worst = worst.max(rel);
            assert!(
                rel <= 1e-7,
                "n={n}: generator sum {exact} vs polarization {oracle} (rel {rel:.3e})"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "oracle equivalence took {elapsed:.1}s");
    println!(
        "criterion 01: PASS - 600 generator-sum mixed volumes match polarization \
         (worst rel {worst:.2e}, {elapsed:.1}s)"
    );
}

#[test]
fn criterion_02_intrinsic_volume_consistency() {
    let budget = Budget::default();
    let mut rng = SampleRng::from_seed(1002);
    for n in 2..=4usize {
        for _ in 0..25 {
            let z = random_zonotope(n, 4, &mut rng);
            for j in 1..=n {
                let measure = projection_generating_measure(&z, j).unwrap();
                let vj = zonotope_intrinsic_volume(&z, j).unwrap();
                assert!(
                    (kappa(j) * measure.total_mass() - vj).abs() <= 1e-8 * (1.0 + vj),
                    "measure mass mismatch at n={n}, j={j}"
                );
            }
            let vn = zonotope_intrinsic_volume(&z, n).unwrap();
            let hull_vol = z.to_vpolytope(&budget).unwrap().volume();
            assert!(
                (vn - hull_vol).abs() <= 1e-8 * (1.0 + vn),
                "V_n {vn} vs hull volume {hull_vol} at n={n}"
            );
        }
    }
    println!(
        "criterion 02: PASS - projection-measure mass times kappa_j equals V_j, \
         and V_n equals the hull volume, on 75 fuzz bodies"
    );
}

#[test]
fn criterion_03_equality_cases() {
    let budget = Budget::default();
    // Three orthogonal unit segments in R^3.
    let segs = vec![
        (segment(3, 0, 1.0), 1),
        (segment(3, 1, 1.0), 1),
        (segment(3, 2, 1.0), 1),
    ];
    let r = check_reverse_af(&segs, InequalityId::Conj11, None, Evaluator::Exact, &budget)
        .unwrap();
    assert!(r.holds && r.epsilon.abs() <= 1e-9, "segments: eps {}", r.epsilon);

    // Unit square with multiplicity two plus an orthogonal segment.
    let square = Body::Zonotope(
        Zonotope::new(3, vec![v(&[0.5, 0.0, 0.0]), v(&[0.0, 0.5, 0.0])], None).unwrap(),
    );
    let r = check_reverse_af(
        &[(square, 2), (segment(3, 2, 1.0), 1)],
        InequalityId::Conj11,
        None,
        Evaluator::Exact,
        &budget,
    )
    .unwrap();
    assert!(r.holds && r.epsilon.abs() <= 1e-9, "square: eps {}", r.epsilon);

    // Segment, ball copy, orthogonal segment: V = 1/3 and equality.
    let k = Body::Polytope(
        VPolytope::new(3, vec![v(&[-0.5, 0.0, 0.0]), v(&[0.5, 0.0, 0.0])]).unwrap(),
    );
    let bodies = vec![(k, 1), (Body::Ball { ambient: 3 }, 1), (segment(3, 2, 1.0), 1)];
    let r = check_reverse_af(
        &bodies,
        InequalityId::Thm13,
        Some((1, 2)),
        Evaluator::Exact,
        &budget,
    )
    .unwrap();
    assert!(r.holds && r.epsilon.abs() <= 1e-9, "thm13: eps {}", r.epsilon);
    // lhs = multinomial * V = 6 * 1/3.
    assert!((r.lhs / 6.0 - 1.0 / 3.0).abs() <= 1e-9, "V = {}", r.lhs / 6.0);

    // Two orthogonal segments plus a ball copy under the zonotope bound.
    let r = check_reverse_af(
        &[
            (segment(3, 0, 1.0), 1),
            (segment(3, 1, 1.0), 1),
            (Body::Ball { ambient: 3 }, 1),
        ],
        InequalityId::Zonolate,
        None,
        Evaluator::Exact,
        &budget,
    )
    .unwrap();
    assert!(r.holds && r.epsilon.abs() <= 1e-9, "zonolate: eps {}", r.epsilon);

    println!(
        "criterion 03: PASS - cube decompositions and the segment-ball-segment \
         instance reproduce equality within 1e-9 (V = 1/3 confirmed)"
    );
}

#[test]
fn criterion_04_stability_anchors() {
    let budget = Budget::default();
    for theta_deg in [30.0f64, 60.0, 89.0] {
        let theta = theta_deg.to_radians();
        let slanted = Body::Zonotope(
            Zonotope::new(2, vec![v(&[theta.cos() / 2.0, theta.sin() / 2.0])], None).unwrap(),
        );
        let bodies = vec![(segment(2, 0, 1.0), 1), (slanted, 1)];
        let cert =
            check_stability(TheoremId::Thm15, &bodies, Evaluator::Exact, &budget).unwrap();
        assert!(
            (cert.epsilon - (1.0 / theta.sin() - 1.0)).abs() <= 1e-9,
            "theta={theta_deg}: epsilon {}",
            cert.epsilon
        );
        assert!(
            (cert.bracket_value - theta.sin()).abs() <= 1e-9,
            "theta={theta_deg}: bracket {}",
            cert.bracket_value
        );
        assert!(cert.holds, "theta={theta_deg}");
    }
    println!(
        "criterion 04: PASS - segment pairs at 30/60/89 degrees give \
         epsilon = 1/sin(theta) - 1 and bracket = sin(theta) within 1e-9, certificates hold"
    );
}

#[test]
fn criterion_05_theorem_guarantees_as_fuzz_oracles() {
    let budget = Budget::default();
    let mut rng = SampleRng::from_seed(1005);
    let mut checked = 0usize;
    for i in 0..500usize {
        let n = 2 + i % 3; // cycles 2, 3, 4
        // Random composition of n into multiplicities plus ball copies.
        let beta = (rng.uniform() * n as f64) as usize % n;
        let mut remaining = n - beta;
        let mut zonos: Vec<(Body, usize)> = Vec::new();
        while remaining > 0 {
            let a = 1 + (rng.uniform() * remaining as f64) as usize % remaining;
            zonos.push((Body::Zonotope(random_zonotope(n, 4, &mut rng)), a));
            remaining -= a;
        }
        let mut with_ball = zonos.clone();
        if beta > 0 {
            with_ball.push((Body::Ball { ambient: n }, beta));
        }

        let zl = check_reverse_af(
            &with_ball,
            InequalityId::Zonolate,
            None,
            Evaluator::Exact,
            &budget,
        )
        .unwrap();
        assert!(zl.holds, "ZONOLATE violated on instance {i}");

        let cj = check_reverse_af(
            &with_ball,
            InequalityId::Conj11,
            None,
            Evaluator::Exact,
            &budget,
        )
        .unwrap();
        assert!(cj.holds, "CONJ_1_1 violated on instance {i}");

        let af = check_af_lower(&with_ball, Evaluator::Exact, &budget).unwrap();
        assert!(af.holds, "AF_LOWER violated on instance {i}");
        checked += 1;
    }
    println!(
        "criterion 05: PASS - CONJ_1_1, ZONOLATE and AF_LOWER hold on all \
         {checked} random zonotope configurations"
    );
}

#[test]
fn criterion_06_ball_intrinsic_ratio() {
    for n in 2..=50usize {
        for j in 1..=n {
            let r = ball_intrinsic_ratio(n, j).unwrap();
            assert!(
                r.holds,
                "V_{j}(B^{n})/kappa_{j} = {} exceeds {}",
                r.ratio, r.bound
            );
            assert!(
                r.ratio < r.bound * (1.0 - 1e-12),
                "bound not strict at n={n}, j={j}"
            );
        }
    }
    println!(
        "criterion 06: PASS - V_j(B^n)/kappa_j <= 2^(n/2) strictly for all \
         1 <= j <= n <= 50 via log-Gamma"
    );
}

#[test]
fn criterion_07_kubota_monte_carlo() {
    let cube = VPolytope::new(
        3,
        (0..8)
            .map(|mask: usize| DVector::from_fn(3, |i, _| ((mask >> i) & 1) as f64))
            .collect(),
    )
    .unwrap();
    for i in [1usize, 2] {
        let est = kubota_intrinsic_volume_mc(&cube, i, 10_000, 2024).unwrap();
        assert!(
            (est.value - 3.0).abs() <= 3.0 * est.stderr,
            "V_{i}(cube) = {} +- {}",
            est.value,
            est.stderr
        );
    }
    let small = kubota_intrinsic_volume_mc(&cube, 2, 10_000, 7).unwrap();
    let large = kubota_intrinsic_volume_mc(&cube, 2, 40_000, 7).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!(
        (ratio - 2.0).abs() <= 0.4,
        "stderr ratio {ratio} departs from sqrt scaling by more than 20%"
    );
    println!(
        "criterion 07: PASS - projection-average estimates hit V_1 = V_2 = 3 \
         within 3 stderr and the stderr scales like samples^-1/2 (ratio {ratio:.3})"
    );
}

#[test]
fn criterion_08_projection_monotonicity() {
    let budget = Budget::default();
    let mut rng = SampleRng::from_seed(1008);
    // Monte Carlo pairs.
    for trial in 0..100usize {
        let n = 3;
        let pts: Vec<Vector> = (0..8)
            .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
            .collect();
        let body = VPolytope::new(n, pts).unwrap();
        let beta = 2;
        let sub = sample_grassmannian(n, beta, &mut rng).unwrap();
        let shadow = body.project_embedded(&sub).unwrap();
        let alpha = 1;
        let va = kubota_intrinsic_volume_mc(&body, alpha, 1000, 3 + trial as u64).unwrap();
        let vb = kubota_intrinsic_volume_mc(&shadow, alpha, 1000, 5 + trial as u64).unwrap();
        let combined = (va.stderr.powi(2) + vb.stderr.powi(2)).sqrt();
        assert!(
            vb.value <= va.value + 3.0 * combined,
            "trial {trial}: projection increased V_{alpha}: {} vs {}",
            vb.value,
            va.value
        );
    }
    // Exact zonotope pairs.
    for _ in 0..50 {
        let n = 3;
        let z = random_zonotope(n, 4, &mut rng);
        let sub = sample_grassmannian(n, 2, &mut rng).unwrap();
        let shadow = z.project_embedded(&sub).unwrap();
        for alpha in 1..=2usize {
            let va = zonotope_intrinsic_volume(&z, alpha).unwrap();
            let vb = zonotope_intrinsic_volume(&shadow, alpha).unwrap();
            assert!(vb <= va + 1e-9 * (1.0 + va), "exact path: {vb} > {va}");
        }
    }
    let _ = budget;
    println!(
        "criterion 08: PASS - projections never gain intrinsic volume on 100 \
         Monte Carlo pairs (3 stderr) and 50 exact zonotope pairs (1e-9)"
    );
}

#[test]
fn criterion_09_projection_maximum_bound() {
    let budget = Budget::default();
    let tri = Body::Polytope(
        VPolytope::new(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap(),
    );
    assert!(projstab_check(&tri, 1, 4000, 9, &budget).unwrap().holds);

    let cube = Body::Zonotope(
        Zonotope::new(
            3,
            vec![v(&[0.5, 0.0, 0.0]), v(&[0.0, 0.5, 0.0]), v(&[0.0, 0.0, 0.5])],
            None,
        )
        .unwrap(),
    );
    assert!(projstab_check(&cube, 2, 4000, 9, &budget).unwrap().holds);

    let mut rng = SampleRng::from_seed(1009);
    let mut count = 0usize;
    for n in 2..=3usize {
        for _ in 0..10 {
            let pts: Vec<Vector> = (0..(n * 3 + 2))
                .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
                .collect();
            let body = Body::Polytope(VPolytope::new(n, pts).unwrap());
            for beta in 1..n {
                let rep = projstab_check(&body, beta, 2000, 17, &budget).unwrap();
                assert!(rep.holds, "random body n={n} beta={beta}");
            }
            count += 1;
        }
    }
    println!(
        "criterion 09: PASS - the projection-maximum bound holds on the \
         triangle, the cube and {count} random polytopes"
    );
}

#[test]
fn criterion_10_radius_anchors() {
    let budget = Budget::default();
    // Box [0,2] x [0,1] x [0,1].
    let b = Body::Zonotope(
        Zonotope::new(
            3,
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 0.5, 0.0]), v(&[0.0, 0.0, 0.5])],
            Some(v(&[1.0, 0.5, 0.5])),
        )
        .unwrap(),
    );
    let r1 = r_m_estimate(&b, 1, &budget).unwrap();
    assert!((r1.lower - 6f64.sqrt() / 2.0).abs() <= 1e-9);
    assert!((r1.upper - 6f64.sqrt() / 2.0).abs() <= 1e-9);

    let r2 = r_m_estimate(&b, 2, &budget).unwrap();
    assert!(r2.lower <= 0.5 + 1e-9 && 0.5 <= r2.upper + 1e-9, "r2 interval");
    assert!(r2.upper <= 3.0 * 0.5 + 1e-9, "r2 upper vs n * 0.5");

    let r3 = r_m_estimate(&b, 3, &budget).unwrap();
    assert_eq!(r3.method, RadiusMethod::InradiusLp);
    assert!((r3.lower - 0.5).abs() <= 1e-7 && (r3.upper - 0.5).abs() <= 1e-7);

    // Inscribed ellipsoid of [-1,1]^3 is the unit ball.
    let cube = VPolytope::new(
        3,
        (0..8)
            .map(|mask: usize| {
                DVector::from_fn(3, |i, _| if (mask >> i) & 1 == 1 { 1.0 } else { -1.0 })
            })
            .collect(),
    )
    .unwrap();
    let e = max_inscribed_ellipsoid(&cube).unwrap();
    assert!(e.center.norm() <= 1e-6, "center {:?}", e.center);
    for (_, len) in &e.semi_axes {
        assert!((len - 1.0).abs() <= 1e-6, "semi-axis {len}");
    }
    println!(
        "criterion 10: PASS - box radii r1 = sqrt(6)/2, r2 enclosure around 0.5 \
         with upper <= 1.5, r3 = 0.5 via the inradius program; cube ellipsoid \
         is the unit ball within 1e-6"
    );
}

#[test]
fn criterion_11_cli_determinism_and_exit_codes() {
    use std::process::Command;
    let fixture = |name: &str| {
        format!(
            "{}/fixtures/{name}",
            env!("CARGO_MANIFEST_DIR")
        )
    };
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_zonovol"))
            .args(args)
            .output()
            .expect("binary runs")
    };

    // Byte-identical JSON across two runs with a fixed seed, on every
    // reporting command.
    for args in [
        vec![
            "check",
            "--bodies",
            &fixture("segments_60deg.json"),
            "--inequality",
            "CONJ_1_1",
            "--seed",
            "3",
            "--format",
            "json",
        ],
        vec![
            "stability",
            "certificate",
            "--theorem",
            "THM_1_5",
            "--bodies",
            &fixture("segments_89deg.json"),
            "--seed",
            "3",
            "--format",
            "json",
        ],
        vec![
            "intrinsics",
            "--bodies",
            &fixture("square_rot_square.json"),
            "--mc-samples",
            "400",
            "--seed",
            "3",
            "--format",
            "json",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
        assert_eq!(a.status.code(), Some(0));
    }

    // Exit-code table on the malformed corpus and the error classes.
    for name in [
        "malformed/bad_syntax.json",
        "malformed/wrong_dim.json",
        "malformed/dup_names.json",
        "malformed/bad_ball.json",
        "malformed/unknown_kind.json",
    ] {
        let out = run(&["mixedvol", "--bodies", &fixture(name)]);
        assert_eq!(out.status.code(), Some(1), "{name}");
    }
    let out = run(&[
        "mixedvol",
        "--bodies",
        &fixture("orth_segments_2d.json"),
        "--mult",
        "2,2",
    ]);
    assert_eq!(out.status.code(), Some(2), "applicability exit code");
    let out = Command::new(env!("CARGO_BIN_EXE_zonovol"))
        .args([
            "mixedvol",
            "--bodies",
            &fixture("orth_segments_2d.json"),
            "--oracle",
        ])
        .env("ZONOVOL_BUDGET", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3), "budget exit code");

    println!(
        "criterion 11: PASS - seeded JSON output is byte-identical across runs \
         and the exit-code table matches on the malformed corpus"
    );
}
