//! Inscribed-radius machinery and numeric stability certificates: largest
//! inscribed balls per dimension, inscribed-ellipsoid bounds, recovery of
//! near-orthogonal subspaces from tight reverse-inequality instances, and
//! the certificate checks themselves.

pub mod lp;
pub mod mvie;

pub use mvie::{max_inscribed_ellipsoid, mvie_debug_gradient_check, Ellipsoid};

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::bodies::{Body, Budget, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::inequality::{check_reverse_af, intrinsic_volume_of_body, InequalityId};
use crate::linalg::{bracket, sample_grassmannian, Subspace, Vector};
use crate::rng::SampleRng;
use crate::zonoid::{kappa, projection_generating_measure, zonotope_intrinsic_volume, Evaluator};

/// Absolute slack used when comparing certified quantities.
const CERT_TOL: f64 = 1e-9;

/// How a radius estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadiusMethod {
    #[serde(rename = "exact_box")]
    ExactBox,
    #[serde(rename = "mvie")]
    Mvie,
    #[serde(rename = "inradius_lp")]
    InradiusLp,
    #[serde(rename = "diameter")]
    Diameter,
}

/// Enclosure of the largest radius of an m-dimensional ball inside a body.
/// Exact methods collapse the interval.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusEstimate {
    pub m: usize,
    pub lower: f64,
    pub upper: f64,
    pub method: RadiusMethod,
}

/// Inradius of a full-dimensional polytope by the Chebyshev-center linear
/// program over its facets.
pub fn inradius(p: &VPolytope) -> Result<f64> {
    let hrep = p.hrep()?;
    let halfspaces: Vec<(Vector, f64)> = hrep
        .facets()
        .iter()
        .map(|f| (f.normal.clone(), f.offset))
        .collect();
    let (_, r) = lp::chebyshev_center(&halfspaces, &p.interior_point())?;
    Ok(r)
}

fn as_vpolytope(body: &Body, budget: &Budget) -> Result<VPolytope> {
    match body {
        Body::Polytope(p) => Ok(p.clone()),
        Body::Zonotope(z) => z.to_vpolytope(budget),
        Body::Ball { .. } => Err(Error::Applicability(
            "the unit ball has no vertex representation on exact paths".into(),
        )),
    }
}

/// Half-widths when the vertices form an axis-aligned box, sorted in
/// decreasing order.
fn axis_aligned_box_halfwidths(p: &VPolytope) -> Option<Vec<f64>> {
    let d = p.ambient_dim();
    if p.vertices().len() != 1 << d {
        return None;
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for v in p.vertices() {
        for k in 0..d {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    for v in p.vertices() {
        for k in 0..d {
            let at_lo = (v[k] - lo[k]).abs() <= 1e-9;
            let at_hi = (v[k] - hi[k]).abs() <= 1e-9;
            if !at_lo && !at_hi {
                return None;
            }
        }
    }
    // All 2^d corners are distinct vertices, so every combination occurs.
    let mut h: Vec<f64> = (0..d).map(|k| (hi[k] - lo[k]) / 2.0).collect();
    h.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Some(h)
}

/// Enclosure of `r_m`, the largest radius of an m-dimensional ball inside
/// the body. Exact for m = 1 (half the diameter), m = dim (inradius
/// program) and m > dim (zero); in between the inscribed ellipsoid gives
/// `[a_m, n * a_m]`. For axis-aligned boxes the ellipsoid is analytic
/// (semi-axes are the half-widths), which keeps the box interval exact in
/// the enclosure sense without an iterative solve.
pub fn r_m_estimate(body: &Body, m: usize, budget: &Budget) -> Result<RadiusEstimate> {
    let n = body.ambient_dim();
    if m == 0 || m > n {
        return Err(Error::Applicability(format!(
            "radius order must satisfy 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    if body.is_ball() {
        return Ok(RadiusEstimate {
            m,
            lower: 1.0,
            upper: 1.0,
            method: RadiusMethod::ExactBox,
        });
    }
    let dim = body.dim();
    if m > dim {
        return Ok(RadiusEstimate {
            m,
            lower: 0.0,
            upper: 0.0,
            method: RadiusMethod::ExactBox,
        });
    }
    let p = as_vpolytope(body, budget)?;
    if m == 1 {
        let r = p.diameter() / 2.0;
        return Ok(RadiusEstimate {
            m,
            lower: r,
            upper: r,
            method: RadiusMethod::Diameter,
        });
    }
    // Work inside the affine hull; r_m only depends on the intrinsic shape.
    let q = if dim == n {
        p
    } else {
        p.project_coords(&body.linear_hull())?
    };
    if m == dim {
        let r = inradius(&q)?;
        return Ok(RadiusEstimate {
            m,
            lower: r,
            upper: r,
            method: RadiusMethod::InradiusLp,
        });
    }
    let axes = match axis_aligned_box_halfwidths(&q) {
        Some(h) => h,
        None => {
            let e = max_inscribed_ellipsoid(&q)?;
            e.semi_axes.iter().map(|(_, l)| *l).collect()
        }
    };
    let a_m = axes[m - 1];
    Ok(RadiusEstimate {
        m,
        lower: a_m,
        upper: n as f64 * a_m,
        method: RadiusMethod::Mvie,
    })
}

/// For each zonotope with multiplicity `a`, the atom of its order-a
/// projection generating measure whose projection has the largest
/// a-dimensional volume. Ties break lexicographically on the basis matrix.
pub fn recover_subspaces(zs: &[(&Zonotope, usize)]) -> Result<Vec<Subspace>> {
    let mut out = Vec::with_capacity(zs.len());
    for (z, alpha) in zs {
        if z.dim() < *alpha {
            return Err(Error::Degenerate(format!(
                "zonotope of rank {} cannot carry multiplicity {alpha}",
                z.dim()
            )));
        }
        let measure = projection_generating_measure(z, *alpha)?;
        let mut best: Option<(f64, Vec<u64>, Subspace)> = None;
        for (sub, _) in &measure.atoms {
            let proj = z.project_coords(sub)?;
            let vol = zonotope_intrinsic_volume(&proj, *alpha)?;
            let key = sub.lex_key();
            let better = match &best {
                None => true,
                Some((bv, bk, _)) => vol > bv + 1e-12 * (1.0 + vol) || ((vol - bv).abs() <= 1e-12 * (1.0 + vol) && key < *bk),
            };
            if better {
                best = Some((vol, key, sub.clone()));
            }
        }
        let (_, _, sub) =
            best.ok_or_else(|| Error::Degenerate("empty projection measure".into()))?;
        out.push(sub);
    }
    Ok(out)
}

/// Stability statement being certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "THM_1_5")]
    Thm15,
    #[serde(rename = "THM_5_1")]
    Thm51,
    #[serde(rename = "PROP_4_5")]
    Prop45,
    #[serde(rename = "LEMMA_4_6")]
    Lemma46,
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremId::Thm15 => "THM_1_5",
            TheoremId::Thm51 => "THM_5_1",
            TheoremId::Prop45 => "PROP_4_5",
            TheoremId::Lemma46 => "LEMMA_4_6",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "THM_1_5" => Ok(TheoremId::Thm15),
            "THM_5_1" => Ok(TheoremId::Thm51),
            "PROP_4_5" => Ok(TheoremId::Prop45),
            "LEMMA_4_6" => Ok(TheoremId::Lemma46),
            other => Err(Error::Parse(format!("unknown theorem id {other:?}"))),
        }
    }
}

/// Numeric certificate for one stability statement: the measured tightness,
/// the recovered subspaces, the bracket against its lower bound, and the
/// containment slacks against their stated radii. `applicable` is false
/// when the statement's hypotheses could not be verified on the instance
/// (the certificate then claims nothing and `holds` stays true).
#[derive(Debug, Clone, Serialize)]
pub struct StabilityCertificate {
    pub epsilon: f64,
    pub recovered_subspaces: Vec<Vec<Vec<f64>>>,
    pub bracket_value: f64,
    pub bracket_bound: f64,
    pub containment_slacks: Vec<f64>,
    pub theorem_id: TheoremId,
    pub holds: bool,
    pub containment_radii: Vec<f64>,
    pub applicable: bool,
    #[serde(skip)]
    pub subspaces: Vec<Subspace>,
}

fn subspace_to_columns(s: &Subspace) -> Vec<Vec<f64>> {
    (0..s.dim())
        .map(|c| s.basis().column(c).iter().cloned().collect())
        .collect()
}

/// Deterministic quasi-uniform unit directions.
fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = SampleRng::from_seed(seed);
    (0..count).map(|_| rng.unit_vector(n)).collect()
}

/// Max over sampled directions of `h(Z - offset, u) - h(Z|L - P offset, u)`:
/// the smallest slab radius around the projection that certifiably contains
/// the centered zonotope, up to sampling.
fn slack_vs_projection(z: &Zonotope, l: &Subspace, dirs: &[Vector]) -> Result<f64> {
    let centered = Zonotope::new(z.ambient_dim(), z.generators().to_vec(), None)?;
    let projected = centered.project_embedded(l)?;
    let mut worst = 0.0f64;
    for u in dirs {
        worst = worst.max(centered.support(u) - projected.support(u));
    }
    Ok(worst)
}

/// Max distance from the body to the subspace, after the translation that
/// centers the body over it (minimal enclosing ball in the complement).
fn slack_vs_subspace(body: &Body, l: &Subspace, budget: &Budget, dirs: &[Vector]) -> Result<f64> {
    let comp = l.complement();
    if comp.dim() == 0 {
        return Ok(0.0);
    }
    match body {
        Body::Zonotope(z) => {
            // Centered: the optimal translation is the offset itself.
            let centered = Zonotope::new(z.ambient_dim(), z.generators().to_vec(), None)?;
            let mut worst = 0.0f64;
            for u in dirs {
                let w = comp.project(u)?;
                let nw = w.norm();
                if nw > 1e-12 {
                    worst = worst.max(centered.support(&(w / nw)));
                }
            }
            Ok(worst)
        }
        _ => {
            let p = as_vpolytope(body, budget)?;
            let pts: Vec<Vector> = p.vertices().iter().map(|v| comp.coords(v)).collect();
            // Badoiu-Clarkson toward the farthest point approximates the
            // minimal enclosing ball well enough for a certificate radius.
            let mut center = pts[0].clone();
            for t in 1..=1000usize {
                let far = pts
                    .iter()
                    .max_by(|a, b| {
                        (*a - &center)
                            .norm()
                            .partial_cmp(&(*b - &center).norm())
                            .unwrap()
                    })
                    .unwrap();
                center += (far - &center) / (t as f64 + 1.0);
            }
            Ok(pts
                .iter()
                .map(|q| (q - &center).norm())
                .fold(0.0, f64::max))
        }
    }
}

/// Subspace of dimension `alpha` maximizing the projection volume of a
/// general body: best of `count` Haar samples plus structural candidates
/// (the body's own hull direction when its dimension matches, which is the
/// exact maximizer for flat bodies).
fn best_projection_subspace(
    p: &VPolytope,
    alpha: usize,
    count: usize,
    seed: u64,
) -> Result<Subspace> {
    let n = p.ambient_dim();
    let mut rng = SampleRng::from_seed(seed);
    let mut candidates: Vec<Subspace> = Vec::with_capacity(count + 1);
    if p.dim() == alpha {
        candidates.push(p.linear_hull());
    }
    for _ in 0..count {
        candidates.push(sample_grassmannian(n, alpha, &mut rng)?);
    }
    let mut best: Option<(f64, Subspace)> = None;
    for l in candidates {
        let vol = p.project_coords(&l)?.volume();
        if best.as_ref().map_or(true, |(bv, _)| vol > *bv) {
            best = Some((vol, l));
        }
    }
    Ok(best.expect("candidates nonempty").1)
}

/// Number of directions used for containment slacks.
const SLACK_DIRECTIONS: usize = 1000;
/// Fixed seed for the quasi-uniform direction set.
const SLACK_SEED: u64 = 0x51ac5eed;

/// Check one stability statement on a configuration of bodies with
/// multiplicities. The tightness is measured by the reverse
/// inequality, subspaces are recovered from the projection measures
/// (Haar search for a general leading body), and the statement's bracket
/// bound and containment radii are evaluated with the stated constants.
pub fn check_stability(
    theorem: TheoremId,
    bodies: &[(Body, usize)],
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<StabilityCertificate> {
    if bodies.len() < 2 {
        return Err(Error::Applicability(
            "stability statements need at least two bodies".into(),
        ));
    }
    let n = bodies[0].0.ambient_dim();
    let dirs = sample_directions(n, SLACK_DIRECTIONS, SLACK_SEED);

    // Structural requirements per statement.
    let general_first = matches!(
        theorem,
        TheoremId::Thm51 | TheoremId::Prop45 | TheoremId::Lemma46
    );
    for (i, (b, _)) in bodies.iter().enumerate() {
        let must_be_zonotope = if general_first { i >= 1 } else { true };
        if must_be_zonotope && !b.is_zonotope() {
            return Err(Error::Applicability(format!(
                "body {i} must be a zonotope for {theorem:?}"
            )));
        }
    }

    let report = check_reverse_af(bodies, InequalityId::Conj11, None, evaluator, budget)?;
    let mut applicable = !report.diagnostics.degenerate;
    let eps_raw = report.epsilon.max(0.0);

    // Recover one subspace per body.
    let mut subspaces: Vec<Subspace> = Vec::with_capacity(bodies.len());
    for (i, (b, alpha)) in bodies.iter().enumerate() {
        if b.dim() < *alpha {
            return Err(Error::Degenerate(format!(
                "body {i} has dimension {} below its multiplicity {alpha}",
                b.dim()
            )));
        }
        let l = match b {
            Body::Zonotope(z) => recover_subspaces(&[(z, *alpha)])?.pop().unwrap(),
            Body::Polytope(p) => best_projection_subspace(p, *alpha, 1000, 0x9a11ab)?,
            Body::Ball { .. } => {
                return Err(Error::Applicability(
                    "ball copies have no recovered subspace".into(),
                ))
            }
        };
        subspaces.push(l);
    }
    let refs: Vec<&Subspace> = subspaces.iter().collect();
    let bracket_value = bracket(&refs, n)?;

    let r_upper = |i: usize| -> Result<f64> {
        Ok(r_m_estimate(&bodies[i].0, bodies[i].1, budget)?.upper)
    };
    let r_lower = |i: usize| -> Result<f64> {
        Ok(r_m_estimate(&bodies[i].0, bodies[i].1, budget)?.lower)
    };

    let nf = n as f64;
    let mut slacks: Vec<f64> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    let mut epsilon = eps_raw;
    let bracket_bound;

    match theorem {
        TheoremId::Thm15 => {
            if eps_raw > 1.0 + CERT_TOL {
                applicable = false;
            }
            bracket_bound = 1.0 - nf.powi(10) * 2f64.powf(nf / 2.0) * eps_raw.sqrt();
            for (i, (b, _)) in bodies.iter().enumerate() {
                let Body::Zonotope(z) = b else { unreachable!() };
                slacks.push(slack_vs_projection(z, &subspaces[i], &dirs)?);
                radii.push(
                    nf.powf(4.5) * 2f64.powf(nf / 2.0) * r_upper(i)? * eps_raw.sqrt(),
                );
            }
        }
        TheoremId::Thm51 => {
            if eps_raw > nf.powi(-16) * 2f64.powf(-2.0 * nf) {
                applicable = false;
            }
            bracket_bound = 1.0 - nf.powi(13) * 2f64.powf(2.0 * nf + 4.0) * eps_raw.powf(0.125);
            // The general body is contained near its subspace at sqrt(eps).
            slacks.push(slack_vs_subspace(&bodies[0].0, &subspaces[0], budget, &dirs)?);
            radii.push(
                nf.powf(3.5) * 2f64.powf((nf + 2.0) / 2.0) * r_upper(0)? * eps_raw.sqrt(),
            );
            for i in 1..bodies.len() {
                slacks.push(slack_vs_subspace(&bodies[i].0, &subspaces[i], budget, &dirs)?);
                radii.push(
                    nf.powi(8) * 2f64.powf(2.0 * nf + 4.0) * r_upper(i)? * eps_raw.powf(0.125),
                );
            }
        }
        TheoremId::Prop45 => {
            if eps_raw > 1.0 {
                applicable = false;
            }
            bracket_bound = 0.0; // no bracket claim in this statement
            slacks.push(slack_vs_subspace(&bodies[0].0, &subspaces[0], budget, &dirs)?);
            radii.push(
                2f64.powf((nf + 2.0) / 2.0) * nf.powf(3.5) * eps_raw.sqrt() * r_upper(0)?,
            );
            // r_{a_1}(K_1|L_1) >= r_{a_1}(K_1)/n, checked leniently.
            let projected =
                project_body(&bodies[0].0, &subspaces[0], budget)?;
            let r_proj = r_m_estimate(&projected, bodies[0].1, budget)?;
            if r_proj.upper < r_lower(0)? / nf - CERT_TOL {
                slacks.push(f64::INFINITY); // forces holds = false below
                radii.push(0.0);
            }
        }
        TheoremId::Lemma46 => {
            // The statement takes one epsilon covering both the tightness
            // and the flatness hypotheses; certify with the smallest such
            // epsilon that provably satisfies them.
            let mut eps_eff = eps_raw;
            for (i, (b, _)) in bodies.iter().enumerate() {
                let slack = match b {
                    Body::Zonotope(z) => slack_vs_projection(z, &subspaces[i], &dirs)?,
                    _ => slack_vs_subspace(b, &subspaces[i], budget, &dirs)?,
                };
                let rl = r_lower(i)?;
                if rl <= 0.0 {
                    applicable = false;
                    slacks.push(slack);
                    radii.push(0.0);
                    continue;
                }
                eps_eff = eps_eff.max(slack / rl);
                slacks.push(slack);
                radii.push(f64::NAN); // filled below once eps_eff is final
                // hypothesis r(K_i|L_i) >= r(K_i)/n, verified conservatively
                let projected = project_body(b, &subspaces[i], budget)?;
                let r_proj = r_m_estimate(&projected, bodies[i].1, budget)?;
                if r_proj.lower < r_upper(i)? / nf - CERT_TOL {
                    applicable = false;
                }
            }
            if eps_eff > 1.0 {
                applicable = false;
            }
            epsilon = eps_eff;
            for (i, r) in radii.iter_mut().enumerate() {
                if r.is_nan() {
                    *r = eps_eff * r_lower(i)?;
                }
            }
            bracket_bound = 1.0 - nf.powi(5) * eps_eff;
        }
    }

    let contained = slacks
        .iter()
        .zip(&radii)
        .all(|(s, r)| *s <= r + CERT_TOL * (1.0 + r.abs()));
    let holds = if applicable {
        bracket_value >= bracket_bound - CERT_TOL && contained
    } else {
        true
    };
    Ok(StabilityCertificate {
        epsilon,
        recovered_subspaces: subspaces.iter().map(subspace_to_columns).collect(),
        bracket_value,
        bracket_bound,
        containment_slacks: slacks,
        theorem_id: theorem,
        holds,
        containment_radii: radii,
        applicable,
        subspaces,
    })
}

/// Projection of a body onto a subspace, in subspace coordinates.
fn project_body(body: &Body, l: &Subspace, budget: &Budget) -> Result<Body> {
    Ok(match body {
        Body::Zonotope(z) => Body::Zonotope(z.project_coords(l)?),
        Body::Polytope(p) => Body::Polytope(p.project_coords(l)?),
        Body::Ball { .. } => {
            let _ = budget;
            Body::Ball { ambient: l.dim() }
        }
    })
}

/// Report for the projection-maximum bound
/// `V_b(K) >= (1 + r_{b+1}^2 / (2^{n+2} n^5 r_b^2)) * max_L V_b(K|L)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjStabReport {
    pub beta: usize,
    pub lhs: f64,
    pub lhs_stderr: Option<f64>,
    pub factor: f64,
    pub max_projection: f64,
    pub rhs: f64,
    pub holds: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Evaluate the projection-maximum bound on one body: the intrinsic volume
/// must exceed the sharpest sampled projection by the inscribed-radius
/// factor. The factor uses the conservative interval ends so that a failed
/// check is meaningful; the projection maximum searches Haar samples plus
/// the projection-measure atoms of zonotopes.
pub fn projstab_check(
    body: &Body,
    beta: usize,
    samples: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ProjStabReport> {
    let n = body.ambient_dim();
    if beta == 0 || beta >= n {
        return Err(Error::Applicability(format!(
            "projection bound needs 1 <= beta <= n-1, got beta={beta}, n={n}"
        )));
    }
    if body.dim() < beta {
        return Err(Error::Applicability(format!(
            "body dimension {} is below beta={beta}",
            body.dim()
        )));
    }
    let (lhs, lhs_stderr) = intrinsic_volume_of_body(
        body,
        beta,
        Evaluator::MonteCarlo {
            samples: samples.max(100),
            seed,
        },
    )?;

    let mut max_projection = 0.0f64;
    let mut rng = SampleRng::substream(seed, 1);
    for _ in 0..1000 {
        let l = sample_grassmannian(n, beta, &mut rng)?;
        max_projection = max_projection.max(projected_measure(body, &l, budget)?);
    }
    if let Body::Zonotope(z) = body {
        for (l, _) in &projection_generating_measure(z, beta)?.atoms {
            max_projection = max_projection.max(projected_measure(body, l, budget)?);
        }
    }

    let r_above = r_m_estimate(body, beta + 1, budget)?;
    let r_at = r_m_estimate(body, beta, budget)?;
    let factor = if r_at.upper <= 0.0 {
        1.0
    } else {
        1.0 + r_above.lower.powi(2)
            / (2f64.powf(n as f64 + 2.0) * (n as f64).powi(5) * r_at.upper.powi(2))
    };
    let rhs = factor * max_projection;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let holds = lhs + lhs_stderr.map_or(0.0, |s| 3.0 * s) >= rhs - CERT_TOL * scale;
    Ok(ProjStabReport {
        beta,
        lhs,
        lhs_stderr,
        factor,
        max_projection,
        rhs,
        holds,
        samples,
        seed,
    })
}

/// Exact `beta`-measure of the projection of a body onto `l`.
fn projected_measure(body: &Body, l: &Subspace, budget: &Budget) -> Result<f64> {
    Ok(match body {
        Body::Zonotope(z) => {
            let q = z.project_coords(l)?;
            zonotope_intrinsic_volume(&q, l.dim())?
        }
        Body::Polytope(p) => p.project_coords(l)?.volume(),
        Body::Ball { .. } => {
            let _ = budget;
            kappa(l.dim())
        }
    })
}

/// `V_j(B^n)/kappa_j` against its bound `2^{n/2}`, via log-Gamma.
#[derive(Debug, Clone, Serialize)]
pub struct BallIntrinsicRatio {
    pub n: usize,
    pub j: usize,
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn ball_intrinsic_ratio(n: usize, j: usize) -> Result<BallIntrinsicRatio> {
    if j == 0 || j > n {
        return Err(Error::Applicability(format!(
            "need 1 <= j <= n, got j={j}, n={n}"
        )));
    }
    let ln_kappa = |d: usize| -> f64 {
        let d = d as f64;
        d / 2.0 * std::f64::consts::PI.ln() - ln_gamma(d / 2.0 + 1.0)
    };
    // V_j(B^n)/kappa_j = binom(n,j) kappa_n / (kappa_j kappa_{n-j})
    let ln_ratio = ln_gamma(n as f64 + 1.0)
        - ln_gamma((n - j) as f64 + 1.0)
        - ln_gamma(j as f64 + 1.0)
        + ln_kappa(n)
        - ln_kappa(j)
        - ln_kappa(n - j);
    let ratio = ln_ratio.exp();
    let bound = 2f64.powf(n as f64 / 2.0);
    Ok(BallIntrinsicRatio {
        n,
        j,
        ratio,
        bound,
        holds: ratio <= bound + 1e-12 * bound,
    })
}

/// Report for the flatness bound
/// `V_a(M) <= (1 + n 2^{n+1} eta) V_a(M|A)` under the hypotheses
/// `M subset A + eta r_a(M) B` and `r_a(M|A) >= r_a(M)/n`.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub alpha: usize,
    pub eta: f64,
    pub lhs: f64,
    pub projected: f64,
    pub factor: f64,
    pub rhs: f64,
    pub distance_to_flat: f64,
    pub holds: bool,
    pub applicable: bool,
}

/// Check the flatness bound for a body `m_body` against the affine flat
/// `offset + span(sub)` of dimension `alpha`. Hypotheses are verified with
/// the conservative interval ends; when the enclosures are too loose to
/// decide them the report is flagged not applicable instead of failed.
pub fn cm_intrinsic_check(
    m_body: &Body,
    sub: &Subspace,
    offset: &Vector,
    alpha: usize,
    eta: f64,
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<FlatnessReport> {
    let n = m_body.ambient_dim();
    if sub.dim() != alpha || alpha == 0 || alpha >= n {
        return Err(Error::Applicability(format!(
            "flat dimension {} must equal alpha={alpha} with 1 <= alpha < n",
            sub.dim()
        )));
    }
    let mut applicable = true;
    if !(eta < 1.0 / (alpha as f64 * n as f64)) || eta < 0.0 {
        applicable = false;
    }

    // Distance of the body to the flat.
    let p = as_vpolytope(m_body, budget)?;
    let comp = sub.complement();
    let off_c = comp.coords(offset);
    let dist = p
        .vertices()
        .iter()
        .map(|v| (comp.coords(v) - &off_c).norm())
        .fold(0.0, f64::max);

    let r_m_body = r_m_estimate(m_body, alpha, budget)?;
    // Containment hypothesis, certain direction: dist <= eta * r_lower.
    if dist > eta * r_m_body.lower + CERT_TOL {
        applicable = false;
    }
    // r_a(M|A) >= r_a(M)/n, certain direction.
    let projected_body = project_body(m_body, sub, budget)?;
    let r_proj = r_m_estimate(&projected_body, alpha, budget)?;
    if r_proj.lower < r_m_body.upper / n as f64 - CERT_TOL {
        applicable = false;
    }

    let (lhs, lhs_se) = intrinsic_volume_of_body(m_body, alpha, evaluator)?;
    let projected = match &projected_body {
        Body::Zonotope(z) => zonotope_intrinsic_volume(z, alpha)?,
        Body::Polytope(q) => q.volume(),
        Body::Ball { .. } => kappa(alpha),
    };
    let factor = 1.0 + n as f64 * 2f64.powf(n as f64 + 1.0) * eta.max(0.0);
    let rhs = factor * projected;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let holds = !applicable || lhs <= rhs + CERT_TOL * scale + lhs_se.map_or(0.0, |s| 3.0 * s);
    Ok(FlatnessReport {
        alpha,
        eta,
        lhs,
        projected,
        factor,
        rhs,
        distance_to_flat: dist,
        holds,
        applicable,
    })
}
