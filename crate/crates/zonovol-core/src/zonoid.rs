//! Exact mixed-volume calculus for zonotopes.
//!
//! A zonotope with generators `w_1..w_N` has the even generating measure
//! with atoms `+-w_i/|w_i|` of mass `|w_i|/2`; pushing that measure through
//! the integral formulas for zonoid mixed volumes collapses every integral
//! into a finite sum over generator tuples. The reductions implemented here
//! are derived in `docs/math-notes.md`:
//!
//! * `V(Z_1,..,Z_n) = (2^n/n!) * sum |det(w_{1,j_1},..,w_{n,j_n})`, one
//!   generator picked per slot;
//! * the projection generating measure of order j places mass
//!   `(2^j/kappa_j) * D_j(w_S)` on `span(w_S)` for every j-subset `S` of
//!   generators (the j! tuple orderings are folded into the subset weight);
//! * `V(Z_1[a_1],..,Z_m[a_m], B[b])` is the bracket-weighted sum over atom
//!   tuples of the projection measures, scaled by
//!   `multinomial(n; b, a_1..a_m)^{-1} * kappa_b * prod kappa_{a_i}`;
//! * with one extra convex body `K` of multiplicity `g` and `b-g` unit
//!   balls, the inner factor becomes
//!   `V_g(K|(U_1+..+U_m)^perp) * kappa_{b-g} / binom(b, g)`.
//!
//! All sums run over a fixed enumeration order with compensated
//! accumulation, so results are deterministic under parallel evaluation.

use nalgebra::DMatrix;

use crate::bodies::{Budget, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::kahan::{par_sum_indexed, KahanSum};
use crate::linalg::{bracket, orthonormalize, parallelepiped_volume, Subspace, Vector};
use crate::oracle::kubota_intrinsic_volume_mc;

/// Volume of the j-dimensional unit ball, `pi^{j/2} / Gamma(j/2 + 1)`,
/// evaluated by the two-step recurrence `kappa_j = kappa_{j-2} * 2*pi / j`.
pub fn kappa(j: usize) -> f64 {
    match j {
        0 => 1.0,
        1 => 2.0,
        _ => kappa(j - 2) * 2.0 * std::f64::consts::PI / j as f64,
    }
}

/// Precomputed `kappa_0..kappa_n`.
#[derive(Debug, Clone)]
pub struct KappaTable {
    values: Vec<f64>,
}

impl KappaTable {
    pub fn up_to(n_max: usize) -> Self {
        Self {
            values: (0..=n_max).map(kappa).collect(),
        }
    }

    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }
}

/// Exact binomial coefficient as f64 (intermediate arithmetic in u128).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    (num / den) as f64
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multinomial coefficient `n! / (parts_1! .. parts_k!)`; the parts must sum
/// to `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> f64 {
    debug_assert_eq!(parts.iter().sum::<usize>(), n);
    let mut value = 1.0;
    let mut remaining = n;
    for &p in parts {
        value *= binomial(remaining, p);
        remaining -= p;
    }
    value
}

/// Discrete measure on the Grassmannian of `grassmann_dim`-dimensional
/// subspaces: finitely many (subspace, mass) atoms.
#[derive(Debug, Clone)]
pub struct DiscreteSubspaceMeasure {
    pub ambient_dim: usize,
    pub grassmann_dim: usize,
    pub atoms: Vec<(Subspace, f64)>,
}

impl DiscreteSubspaceMeasure {
    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (_, m) in &self.atoms {
            acc.add(*m);
        }
        acc.value()
    }
}

/// Tolerance below which nearby atom subspaces are merged (bound on the
/// sine of the principal angles, via the Frobenius projector distance).
const ATOM_MERGE_TOL: f64 = 1e-8;

/// Relative degeneracy cutoff for generator subsets.
const SUBSET_DEGENERACY_TOL: f64 = 1e-13;

/// Iterator over k-subsets of 0..n in lexicographic order.
struct Combinations {
    n: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        Self { n, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        let k = current.len();
        let mut next = current.clone();
        let mut advanced = false;
        for i in (0..k).rev() {
            if next[i] + 1 <= self.n - (k - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        self.state = if advanced { Some(next) } else { None };
        Some(current)
    }
}

/// The order-j projection generating measure of a zonotope: one atom per
/// linearly independent j-subset of generators, at the subset's span, with
/// mass `(2^j / kappa_j) * D_j(subset)`. Subsets spanning the same subspace
/// (principal angles below 1e-8) coalesce with added masses, so downstream
/// subspace recovery is stable under duplicated generators.
pub fn projection_generating_measure(z: &Zonotope, j: usize) -> Result<DiscreteSubspaceMeasure> {
    let n = z.ambient_dim();
    if j == 0 || j > n {
        return Err(Error::Applicability(format!(
            "projection measure order must satisfy 1 <= j <= n, got j={j}, n={n}"
        )));
    }
    let gens = z.generators();
    let weight = 2f64.powi(j as i32) / kappa(j);
    let mut atoms: Vec<(Subspace, f64)> = Vec::new();
    for subset in Combinations::new(gens.len(), j) {
        let vecs: Vec<Vector> = subset.iter().map(|&i| gens[i].clone()).collect();
        let d = parallelepiped_volume(&vecs)?;
        let scale: f64 = vecs.iter().map(|v| v.norm()).product();
        if d <= SUBSET_DEGENERACY_TOL * scale {
            continue;
        }
        let span = orthonormalize(&vecs);
        debug_assert_eq!(span.dim(), j);
        let mass = weight * d;
        match atoms
            .iter_mut()
            .find(|(s, _)| s.projector_distance(&span) < ATOM_MERGE_TOL)
        {
            Some((_, m)) => *m += mass,
            None => atoms.push((span, mass)),
        }
    }
    Ok(DiscreteSubspaceMeasure {
        ambient_dim: n,
        grassmann_dim: j,
        atoms,
    })
}

/// Intrinsic volume of a zonotope: `V_j(Z) = 2^j * sum_{|S|=j} D_j(w_S)`,
/// which is `kappa_j` times the total projection-generating-measure mass.
/// Computed by the direct subset sum so it can cross-check the measure.
pub fn zonotope_intrinsic_volume(z: &Zonotope, j: usize) -> Result<f64> {
    let n = z.ambient_dim();
    if j > n {
        return Err(Error::DimensionMismatch { expected: n, got: j });
    }
    if j == 0 {
        return Ok(1.0);
    }
    let gens = z.generators();
    if j > gens.len() {
        return Ok(0.0);
    }
    let mut acc = KahanSum::new();
    for subset in Combinations::new(gens.len(), j) {
        let vecs: Vec<Vector> = subset.iter().map(|&i| gens[i].clone()).collect();
        acc.add(parallelepiped_volume(&vecs)?);
    }
    Ok(2f64.powi(j as i32) * acc.value())
}

/// Determinant of n column vectors; unrolled for the small dimensions that
/// dominate the tuple enumeration.
fn det_columns(cols: &[&Vector]) -> f64 {
    let n = cols.len();
    match n {
        1 => cols[0][0],
        2 => cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0],
        3 => {
            let (a, b, c) = (cols[0], cols[1], cols[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
        _ => {
            let mut m = DMatrix::zeros(n, n);
            for (j, c) in cols.iter().enumerate() {
                m.set_column(j, *c);
            }
            m.determinant()
        }
    }
}

/// Exact mixed volume of n zonotopes (slots may repeat):
/// `(2^n / n!) * sum over one-generator-per-slot tuples of |det|`.
/// Symmetric in the slots and multilinear in generator scaling.
pub fn zonotope_mixed_volume(slots: &[&Zonotope], budget: &Budget) -> Result<f64> {
    let n = slots.len();
    if n == 0 {
        return Err(Error::Applicability("no slots given".into()));
    }
    for z in slots {
        if z.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.ambient_dim(),
            });
        }
    }
    let counts: Vec<usize> = slots.iter().map(|z| z.generators().len()).collect();
    if counts.iter().any(|&c| c == 0) {
        return Ok(0.0);
    }
    let mut tuples: u128 = 1;
    for &c in &counts {
        tuples = tuples.saturating_mul(c as u128);
    }
    if tuples > budget.tuple_limit {
        return Err(Error::Budget(format!(
            "generator tuple count {tuples} exceeds budget {}",
            budget.tuple_limit
        )));
    }
    let total = par_sum_indexed(tuples as u64, |idx| {
        let mut rem = idx as usize;
        let mut cols: Vec<&Vector> = Vec::with_capacity(n);
        for (slot, &c) in slots.iter().zip(&counts) {
            cols.push(&slot.generators()[rem % c]);
            rem /= c;
        }
        det_columns(&cols).abs()
    });
    let mut fact = 1.0;
    for k in 2..=n {
        fact *= k as f64;
    }
    Ok(2f64.powi(n as i32) / fact * total)
}

/// Mixed volume of zonotopes with multiplicities plus `beta` copies of the
/// unit ball, via the atom-tuple sum over the projection generating
/// measures. For `beta = 0` this agrees with [`zonotope_mixed_volume`].
pub fn mixed_volume_zonotopes_ball(
    zs: &[(&Zonotope, usize)],
    beta: usize,
    budget: &Budget,
) -> Result<f64> {
    let n = match zs.first() {
        Some((z, _)) => z.ambient_dim(),
        None => beta,
    };
    let alpha_sum: usize = zs.iter().map(|(_, a)| a).sum();
    if alpha_sum + beta != n {
        return Err(Error::Applicability(format!(
            "multiplicities {alpha_sum} plus {beta} ball copies must sum to the dimension {n}"
        )));
    }
    if zs.iter().any(|(_, a)| *a == 0) {
        return Err(Error::Applicability("zero multiplicity".into()));
    }
    for (z, _) in zs {
        if z.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.ambient_dim(),
            });
        }
    }
    let mut parts: Vec<usize> = vec![beta];
    parts.extend(zs.iter().map(|(_, a)| *a));
    let coeff = kappa(beta) * zs.iter().map(|(_, a)| kappa(*a)).product::<f64>()
        / multinomial(n, &parts);

    if zs.is_empty() {
        return Ok(coeff);
    }
    let measures: Vec<DiscreteSubspaceMeasure> = zs
        .iter()
        .map(|(z, a)| projection_generating_measure(z, *a))
        .collect::<Result<_>>()?;
    let sum = atom_tuple_sum(&measures, n - beta, budget, |_, _| Ok((1.0, None)))?;
    Ok(coeff * sum.0)
}

/// How the body-with-ball path may evaluate intrinsic volumes of projected
/// polytopes that have no exact route.
#[derive(Debug, Clone, Copy)]
pub enum Evaluator {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Mixed volume `V(K[gamma], B[ball_copies], Z_1[a_1], .., Z_m[a_m])` of one
/// general convex body, unit-ball copies and zonotopes. The inner factor
/// for an atom tuple spanning `W` is
/// `V_gamma(K|W^perp) * kappa_{beta-gamma} / binom(beta, gamma)` with
/// `beta = gamma + ball_copies`; that projection volume is exact whenever
/// `gamma` is 0 or at least the projection's dimension, and otherwise needs
/// the Monte Carlo projection average (rejected under `Evaluator::Exact`).
///
/// Returns the value and, when any Monte Carlo estimate entered, the
/// combined standard error.
pub fn mixed_volume_body_ball_zonotopes(
    body: Option<&VPolytope>,
    gamma: usize,
    ball_copies: usize,
    zs: &[(&Zonotope, usize)],
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<(f64, Option<f64>)> {
    if gamma > 0 && body.is_none() {
        return Err(Error::Applicability(
            "positive multiplicity but no body given".into(),
        ));
    }
    if gamma == 0 {
        return Ok((mixed_volume_zonotopes_ball(zs, ball_copies, budget)?, None));
    }
    let body = body.expect("checked above");
    let n = body.ambient_dim();
    let beta = gamma + ball_copies;
    let alpha_sum: usize = zs.iter().map(|(_, a)| a).sum();
    if alpha_sum + beta != n {
        return Err(Error::Applicability(format!(
            "gamma {gamma} + ball copies {ball_copies} + multiplicities {alpha_sum} must sum to {n}"
        )));
    }
    for (z, a) in zs {
        if z.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.ambient_dim(),
            });
        }
        if *a == 0 {
            return Err(Error::Applicability("zero multiplicity".into()));
        }
    }
    let mut parts: Vec<usize> = vec![beta];
    parts.extend(zs.iter().map(|(_, a)| *a));
    let coeff = kappa(beta - gamma) / binomial(beta, gamma)
        * zs.iter().map(|(_, a)| kappa(*a)).product::<f64>()
        / multinomial(n, &parts);

    if zs.is_empty() {
        // No atoms to integrate over: W = {o}, so the factor is V_gamma(K).
        let (v, se) = projected_intrinsic_volume(body, &Subspace::full(n), gamma, evaluator, 0)?;
        return Ok((coeff * v, se.map(|s| coeff * s)));
    }
    let measures: Vec<DiscreteSubspaceMeasure> = zs
        .iter()
        .map(|(z, a)| projection_generating_measure(z, *a))
        .collect::<Result<_>>()?;
    let (sum, se) = atom_tuple_sum(&measures, n - beta, budget, |w, tuple_idx| {
        let perp = w.complement();
        projected_intrinsic_volume(body, &perp, gamma, evaluator, tuple_idx)
    })?;
    Ok((coeff * sum, se.map(|s| coeff * s)))
}

/// `V_gamma` of the projection of `body` onto `sub`, in subspace
/// coordinates. Exact when `gamma` is 0, equals the projection's dimension,
/// or exceeds it; Monte Carlo otherwise.
fn projected_intrinsic_volume(
    body: &VPolytope,
    sub: &Subspace,
    gamma: usize,
    evaluator: Evaluator,
    tuple_idx: u64,
) -> Result<(f64, Option<f64>)> {
    let q = body.project_coords(sub)?;
    if gamma == 0 {
        return Ok((1.0, None));
    }
    let d = q.dim();
    if d < gamma {
        return Ok((0.0, None));
    }
    if d == gamma {
        return Ok((q.lambda_measure(), None));
    }
    match evaluator {
        Evaluator::Exact => Err(Error::NeedsMonteCarlo(format!(
            "V_{gamma} of a {d}-dimensional projection has no exact path"
        ))),
        Evaluator::MonteCarlo { samples, seed } => {
            let est = kubota_intrinsic_volume_mc(
                &q,
                gamma,
                samples,
                seed ^ (0x9e3779b97f4a7c15u64.wrapping_mul(tuple_idx + 1)),
            )?;
            Ok((est.value, Some(est.stderr)))
        }
    }
}

/// Sum over atom tuples of `bracket * prod(masses) * inner(W, idx)` where
/// `W` is the span of the tuple. Skips tuples whose bracket vanishes.
fn atom_tuple_sum<F>(
    measures: &[DiscreteSubspaceMeasure],
    span_dim: usize,
    budget: &Budget,
    inner: F,
) -> Result<(f64, Option<f64>)>
where
    F: Fn(&Subspace, u64) -> Result<(f64, Option<f64>)>,
{
    let counts: Vec<usize> = measures.iter().map(|m| m.atoms.len()).collect();
    if counts.iter().any(|&c| c == 0) {
        return Ok((0.0, None));
    }
    let mut tuples: u128 = 1;
    for &c in &counts {
        tuples = tuples.saturating_mul(c as u128);
    }
    if tuples > budget.tuple_limit {
        return Err(Error::Budget(format!(
            "atom tuple count {tuples} exceeds budget {}",
            budget.tuple_limit
        )));
    }
    let mut acc = KahanSum::new();
    let mut var = KahanSum::new();
    let mut any_mc = false;
    for idx in 0..tuples as u64 {
        let mut rem = idx as usize;
        let mut subspaces: Vec<&Subspace> = Vec::with_capacity(measures.len());
        let mut mass = 1.0;
        for (m, &c) in measures.iter().zip(&counts) {
            let (s, w) = &m.atoms[rem % c];
            subspaces.push(s);
            mass *= w;
            rem /= c;
        }
        let br = bracket(&subspaces, span_dim)?;
        if br <= 0.0 {
            continue;
        }
        let all: Vec<Vector> = subspaces
            .iter()
            .flat_map(|s| (0..s.dim()).map(|c| s.basis().column(c).into()))
            .collect();
        let w = orthonormalize(&all);
        let (val, se) = inner(&w, idx)?;
        acc.add(br * mass * val);
        if let Some(se) = se {
            any_mc = true;
            var.add((br * mass * se) * (br * mass * se));
        }
    }
    Ok((acc.value(), any_mc.then(|| var.value().sqrt())))
}
