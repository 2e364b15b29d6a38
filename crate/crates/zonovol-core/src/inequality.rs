//! Inequality reports: both sides of the reverse mixed-volume bounds, the
//! classical lower bound, the tightness parameter, and equality
//! diagnostics.
//!
//! Conventions, fixed across the suite:
//! * every inequality is oriented as `lhs <= rhs`, so `holds` is
//!   `lhs <= rhs + 1e-9 * scale` (plus Monte Carlo slack when an estimate
//!   entered either side);
//! * the tightness is `epsilon = rhs/lhs - 1`, which is scale invariant;
//!   a vanishing `lhs` is flagged degenerate instead of an infinite
//!   epsilon, since the stability theorems assume positive products.

use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Budget, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::linalg::bracket;
use crate::oracle::polarization_mixed_volume;
use crate::zonoid::{
    binomial, kappa, mixed_volume_body_ball_zonotopes, mixed_volume_zonotopes_ball, multinomial,
    zonotope_intrinsic_volume, Evaluator,
};

/// Identifier of a checked inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "AF_LOWER")]
    AfLower,
    #[serde(rename = "CONJ_1_1")]
    Conj11,
    #[serde(rename = "THM_1_3")]
    Thm13,
    #[serde(rename = "THM_1_4")]
    Thm14,
    #[serde(rename = "ZONOLATE")]
    Zonolate,
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InequalityId::AfLower => "AF_LOWER",
            InequalityId::Conj11 => "CONJ_1_1",
            InequalityId::Thm13 => "THM_1_3",
            InequalityId::Thm14 => "THM_1_4",
            InequalityId::Zonolate => "ZONOLATE",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AF_LOWER" => Ok(InequalityId::AfLower),
            "CONJ_1_1" => Ok(InequalityId::Conj11),
            "THM_1_3" => Ok(InequalityId::Thm13),
            "THM_1_4" => Ok(InequalityId::Thm14),
            "ZONOLATE" => Ok(InequalityId::Zonolate),
            other => Err(Error::Parse(format!("unknown inequality id {other:?}"))),
        }
    }
}

/// Structural context attached to every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Dimension of each body's affine hull.
    pub dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
    /// Whether dim(K_i) equals the multiplicity of K_i for every body.
    pub dims_match_multiplicities: bool,
    /// Bracket of the tuple of linear hulls (zero when the hulls are
    /// dependent, including when their dimensions already oversum).
    pub full_bracket: f64,
    /// Pairwise partial brackets of the linear hulls.
    pub pairwise_brackets: Vec<Vec<f64>>,
    /// True when the equality characterization's hypothesis
    /// `dim(K_i) >= alpha_i` fails for some body.
    pub outside_equality_hypotheses: bool,
    /// Set when the mixed volume vanished and epsilon is meaningless.
    pub degenerate: bool,
    /// Combined standard error when Monte Carlo entered either side.
    pub mc_stderr: Option<f64>,
    /// Which route evaluated the mixed volume.
    pub mixed_volume_method: String,
}

/// Evaluation of one inequality instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub epsilon: f64,
    pub holds: bool,
    pub equality_within: bool,
    pub diagnostics: Diagnostics,
}

/// Relative tolerance for `holds`.
const HOLDS_TOL: f64 = 1e-9;
/// Relative tolerance for `equality_within` on epsilon.
const EQUALITY_TOL: f64 = 1e-7;

/// A mixed volume with provenance.
#[derive(Debug, Clone)]
pub struct MixedVolumeValue {
    pub value: f64,
    pub stderr: Option<f64>,
    pub method: &'static str,
}

/// Mixed volume of bodies with multiplicities, routed to the cheapest sound
/// evaluator: the generator sum when every body is a zonotope (unit balls
/// allowed), the projection-measure formula when exactly one general body
/// is present, and the polarization oracle otherwise (no balls there; the
/// ball is never approximated by a polytope on these paths).
pub fn mixed_volume_of_bodies(
    bodies: &[(Body, usize)],
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<MixedVolumeValue> {
    if bodies.is_empty() {
        return Err(Error::Applicability("no bodies given".into()));
    }
    let n = bodies[0].0.ambient_dim();
    for (b, _) in bodies {
        if b.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.ambient_dim(),
            });
        }
    }
    let total: usize = bodies.iter().map(|(_, m)| m).sum();
    if total != n {
        return Err(Error::Applicability(format!(
            "multiplicities sum to {total}, expected the dimension {n}"
        )));
    }
    let ball_copies: usize = bodies
        .iter()
        .filter(|(b, _)| b.is_ball())
        .map(|(_, m)| m)
        .sum();
    let zonotopes: Vec<(&Zonotope, usize)> = bodies
        .iter()
        .filter_map(|(b, m)| match b {
            Body::Zonotope(z) => Some((z, *m)),
            _ => None,
        })
        .collect();
    let polytopes: Vec<(&VPolytope, usize)> = bodies
        .iter()
        .filter_map(|(b, m)| match b {
            Body::Polytope(p) => Some((p, *m)),
            _ => None,
        })
        .collect();

    match polytopes.len() {
        0 => Ok(MixedVolumeValue {
            value: mixed_volume_zonotopes_ball(&zonotopes, ball_copies, budget)?,
            stderr: None,
            method: "zonotope-exact",
        }),
        1 => {
            let (p, gamma) = polytopes[0];
            let (value, stderr) = mixed_volume_body_ball_zonotopes(
                Some(p),
                gamma,
                ball_copies,
                &zonotopes,
                evaluator,
                budget,
            )?;
            Ok(MixedVolumeValue {
                value,
                stderr,
                method: if stderr.is_some() {
                    "projection-measure+mc"
                } else {
                    "projection-measure"
                },
            })
        }
        _ => {
            if ball_copies > 0 {
                return Err(Error::Applicability(
                    "mixed volumes of two or more general bodies together with ball copies \
                     are not supported"
                        .into(),
                ));
            }
            let mut slots: Vec<VPolytope> = Vec::with_capacity(n);
            for (b, m) in bodies {
                let p = match b {
                    Body::Polytope(p) => p.clone(),
                    Body::Zonotope(z) => z.to_vpolytope(budget)?,
                    Body::Ball { .. } => unreachable!("no ball copies here"),
                };
                for _ in 0..*m {
                    slots.push(p.clone());
                }
            }
            let refs: Vec<&VPolytope> = slots.iter().collect();
            Ok(MixedVolumeValue {
                value: polarization_mixed_volume(&refs, budget)?,
                stderr: None,
                method: "polarization-oracle",
            })
        }
    }
}

/// Intrinsic volume `V_j` of a body: exact for zonotopes and balls, exact
/// for polytopes when `j` is 0, n, or at least the body's dimension, Monte
/// Carlo otherwise.
pub fn intrinsic_volume_of_body(
    body: &Body,
    j: usize,
    evaluator: Evaluator,
) -> Result<(f64, Option<f64>)> {
    let n = body.ambient_dim();
    if j > n {
        return Err(Error::DimensionMismatch { expected: n, got: j });
    }
    match body {
        Body::Zonotope(z) => Ok((zonotope_intrinsic_volume(z, j)?, None)),
        Body::Ball { ambient } => Ok((binomial(*ambient, j) * kappa(*ambient) / kappa(ambient - j), None)),
        Body::Polytope(p) => {
            if j == 0 {
                return Ok((1.0, None));
            }
            let d = p.dim();
            if d < j {
                return Ok((0.0, None));
            }
            if d == j {
                return Ok((p.lambda_measure(), None));
            }
            if j == n {
                return Ok((p.volume(), None));
            }
            match evaluator {
                Evaluator::Exact => Err(Error::NeedsMonteCarlo(format!(
                    "V_{j} of a {d}-dimensional polytope has no exact path"
                ))),
                Evaluator::MonteCarlo { samples, seed } => {
                    let est = crate::oracle::kubota_intrinsic_volume_mc(p, j, samples, seed)?;
                    Ok((est.value, Some(est.stderr)))
                }
            }
        }
    }
}

/// Dimensions, hull brackets and hypothesis checks for a configuration.
pub fn equality_diagnostics(bodies: &[(Body, usize)]) -> Diagnostics {
    let n = bodies.first().map_or(0, |(b, _)| b.ambient_dim());
    let dims: Vec<usize> = bodies.iter().map(|(b, _)| b.dim()).collect();
    let multiplicities: Vec<usize> = bodies.iter().map(|(_, m)| *m).collect();
    let hulls: Vec<_> = bodies.iter().map(|(b, _)| b.linear_hull()).collect();

    let total_dim: usize = dims.iter().sum();
    let full_bracket = if total_dim <= n {
        let refs: Vec<&_> = hulls.iter().collect();
        bracket(&refs, total_dim).unwrap_or(0.0)
    } else {
        0.0
    };
    let m = bodies.len();
    let mut pairwise = vec![vec![0.0; m]; m];
    for i in 0..m {
        pairwise[i][i] = 1.0;
        for j in i + 1..m {
            let b = if dims[i] + dims[j] <= n {
                bracket(&[&hulls[i], &hulls[j]], dims[i] + dims[j]).unwrap_or(0.0)
            } else {
                0.0
            };
            pairwise[i][j] = b;
            pairwise[j][i] = b;
        }
    }
    let dims_match = dims
        .iter()
        .zip(&multiplicities)
        .all(|(d, m)| d == m);
    let outside = dims
        .iter()
        .zip(&multiplicities)
        .any(|(d, m)| d < m);
    Diagnostics {
        dims,
        multiplicities,
        dims_match_multiplicities: dims_match,
        full_bracket,
        pairwise_brackets: pairwise,
        outside_equality_hypotheses: outside,
        degenerate: false,
        mc_stderr: None,
        mixed_volume_method: String::new(),
    }
}

fn finish_report(
    id: InequalityId,
    lhs: f64,
    rhs: f64,
    stderr: Option<f64>,
    mut diagnostics: Diagnostics,
) -> InequalityReport {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let slack = HOLDS_TOL * scale + stderr.map_or(0.0, |s| 3.0 * s);
    let holds = lhs <= rhs + slack;
    let degenerate = lhs.abs() <= 1e-12 * scale;
    let epsilon = if degenerate { 0.0 } else { rhs / lhs - 1.0 };
    diagnostics.degenerate = degenerate;
    diagnostics.mc_stderr = stderr;
    InequalityReport {
        inequality_id: id,
        lhs,
        rhs,
        epsilon,
        holds,
        equality_within: !degenerate && epsilon.abs() < EQUALITY_TOL,
        diagnostics,
    }
}

/// Classical consequence of the quadratic mixed-volume inequality:
/// `V(K_1[a_1],..) >= prod V_n(K_i)^{a_i/n}`. Oriented as
/// `lhs = prod <= rhs = mixed volume`.
pub fn check_af_lower(
    bodies: &[(Body, usize)],
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<InequalityReport> {
    let n = bodies.first().map_or(0, |(b, _)| b.ambient_dim());
    let mv = mixed_volume_of_bodies(bodies, evaluator, budget)?;
    let mut lhs = 1.0;
    for (b, m) in bodies {
        let vn = intrinsic_volume_of_body(b, n, evaluator)?.0;
        lhs *= vn.powf(*m as f64 / n as f64);
    }
    let mut diagnostics = equality_diagnostics(bodies);
    diagnostics.mixed_volume_method = mv.method.to_string();
    Ok(finish_report(
        InequalityId::AfLower,
        lhs,
        mv.value,
        mv.stderr,
        diagnostics,
    ))
}

/// Reverse upper bounds: `multinomial * V <= product of intrinsic volumes`,
/// in the four flavors distinguished by `which`. The THM_1_3 form takes the
/// designated general body first and requires `gamma`/`beta` to match its
/// multiplicity and the ball copies; the THM_1_4 form requires the first
/// multiplicity to be one and bodies from the third on to be zonotopes.
/// Applicability violations error out rather than silently falling back.
pub fn check_reverse_af(
    bodies: &[(Body, usize)],
    which: InequalityId,
    gamma_beta: Option<(usize, usize)>,
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<InequalityReport> {
    if bodies.is_empty() {
        return Err(Error::Applicability("no bodies given".into()));
    }
    let n = bodies[0].0.ambient_dim();
    let total: usize = bodies.iter().map(|(_, m)| m).sum();
    if total != n {
        return Err(Error::Applicability(format!(
            "multiplicities sum to {total}, expected {n}"
        )));
    }
    let ball_copies: usize = bodies
        .iter()
        .filter(|(b, _)| b.is_ball())
        .map(|(_, m)| m)
        .sum();
    let mut stderr_sq = 0.0f64;
    let mut any_stderr = false;

    let (lhs_factor, rhs) = match which {
        InequalityId::Conj11 => {
            // All bodies enter the product, balls included.
            let parts: Vec<usize> = bodies.iter().map(|(_, m)| *m).collect();
            let mut rhs = 1.0;
            for (b, m) in bodies {
                let (v, se) = intrinsic_volume_of_body(b, *m, evaluator)?;
                if let Some(se) = se {
                    // first-order propagation through the product
                    stderr_sq += (se * rhs).powi(2);
                    any_stderr = true;
                }
                rhs *= v;
            }
            (multinomial(n, &parts), rhs)
        }
        InequalityId::Zonolate => {
            for (b, _) in bodies {
                if !b.is_zonotope() && !b.is_ball() {
                    return Err(Error::Applicability(
                        "the zonotope-ball bound applies to zonotopes and ball copies only"
                            .into(),
                    ));
                }
            }
            let mut parts: Vec<usize> = vec![ball_copies];
            let mut rhs = kappa(ball_copies);
            for (b, m) in bodies.iter().filter(|(b, _)| !b.is_ball()) {
                parts.push(*m);
                rhs *= intrinsic_volume_of_body(b, *m, evaluator)?.0;
            }
            (multinomial(n, &parts), rhs)
        }
        InequalityId::Thm13 => {
            let (gamma, beta) = gamma_beta.ok_or_else(|| {
                Error::Applicability("THM_1_3 requires gamma and beta".into())
            })?;
            if gamma > beta || beta > n {
                return Err(Error::Applicability(format!(
                    "need 0 <= gamma <= beta <= n, got gamma={gamma}, beta={beta}, n={n}"
                )));
            }
            let non_ball: Vec<&(Body, usize)> =
                bodies.iter().filter(|(b, _)| !b.is_ball()).collect();
            let (k_body, k_mult) = non_ball
                .first()
                .map(|(b, m)| (b, *m))
                .ok_or_else(|| Error::Applicability("THM_1_3 needs the designated body".into()))?;
            if k_mult != gamma {
                return Err(Error::Applicability(format!(
                    "designated body has multiplicity {k_mult}, expected gamma={gamma}"
                )));
            }
            if ball_copies != beta - gamma {
                return Err(Error::Applicability(format!(
                    "ball copies {ball_copies} do not match beta - gamma = {}",
                    beta - gamma
                )));
            }
            for (b, _) in non_ball.iter().skip(1) {
                if !b.is_zonotope() {
                    return Err(Error::Applicability(
                        "THM_1_3 allows a single non-zonotope body".into(),
                    ));
                }
            }
            let mut parts: Vec<usize> = vec![gamma, beta - gamma];
            let (vk, se) = intrinsic_volume_of_body(k_body, gamma, evaluator)?;
            let mut rhs = kappa(beta - gamma) * vk;
            if let Some(se) = se {
                stderr_sq += (se * kappa(beta - gamma)).powi(2);
                any_stderr = true;
            }
            for (b, m) in non_ball.iter().skip(1) {
                parts.push(*m);
                rhs *= intrinsic_volume_of_body(b, *m, evaluator)?.0;
            }
            (multinomial(n, &parts), rhs)
        }
        InequalityId::Thm14 => {
            if ball_copies > 0 {
                return Err(Error::Applicability(
                    "THM_1_4 instances here take polytopes and zonotopes, not ball copies"
                        .into(),
                ));
            }
            if bodies[0].1 != 1 {
                return Err(Error::Applicability(format!(
                    "THM_1_4 requires the first multiplicity to be 1, got {}",
                    bodies[0].1
                )));
            }
            for (b, _) in bodies.iter().skip(2) {
                if !b.is_zonotope() {
                    return Err(Error::Applicability(
                        "THM_1_4 requires bodies from the third on to be zonotopes".into(),
                    ));
                }
            }
            let parts: Vec<usize> = bodies.iter().map(|(_, m)| *m).collect();
            let mut rhs = 1.0;
            for (b, m) in bodies {
                let (v, se) = intrinsic_volume_of_body(b, *m, evaluator)?;
                if let Some(se) = se {
                    stderr_sq += (se * rhs).powi(2);
                    any_stderr = true;
                }
                rhs *= v;
            }
            (multinomial(n, &parts), rhs)
        }
        InequalityId::AfLower => {
            return Err(Error::Applicability(
                "AF_LOWER is handled by check_af_lower".into(),
            ))
        }
    };

    let mv = mixed_volume_of_bodies(bodies, evaluator, budget)?;
    let lhs = lhs_factor * mv.value;
    if let Some(se) = mv.stderr {
        stderr_sq += (lhs_factor * se).powi(2);
        any_stderr = true;
    }
    let mut diagnostics = equality_diagnostics(bodies);
    diagnostics.mixed_volume_method = mv.method.to_string();
    let stderr = any_stderr.then(|| stderr_sq.sqrt());
    // Reverse bounds are oriented lhs <= rhs already.
    Ok(finish_report(which, lhs, rhs, stderr, diagnostics))
}
