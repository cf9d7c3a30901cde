//! Unitary-orbit diameter and distance to the scalars.
//!
//! `d_A = sup_U ‖AU − UA‖ = 2 · inf_λ ‖A − λI‖`. The infimum is computed
//! exactly for Hermitian inputs (spectral spread) and normal inputs
//! (smallest disk enclosing the spectrum), and by derivative-free descent on
//! the convex function `λ ↦ ‖A − λI‖` otherwise.

pub mod disk;

use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{
    c64, eigh_unchecked, ensure_hermitian, ensure_square, hermitian_part, identity, op_norm, random_unitary_with,
    trace, ComplexMatrix, C64, DEFAULT_TOL,
};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

pub use disk::{smallest_enclosing_disk, Disk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterMethod {
    HermitianExact,
    NormalDisk,
    ConvexDescent,
}

/// Which solver to run; `Auto` tries Hermitian, then normal, then descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Auto,
    Hermitian,
    Disk,
    Descent,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "hermitian" => Ok(MethodChoice::Hermitian),
            "disk" => Ok(MethodChoice::Disk),
            "descent" => Ok(MethodChoice::Descent),
            other => Err(Error::Config(format!("unknown diameter method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterOptions {
    pub method: MethodChoice,
    /// Relative tolerance for the Hermitian test.
    pub tol: f64,
    /// Relative tolerance for the normality test `‖AA* − A*A‖ ≤ tol·(1+‖A‖)²`.
    pub normal_tol: f64,
    /// Seed for the disk solver's shuffle.
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        DiameterOptions {
            method: MethodChoice::Auto,
            tol: DEFAULT_TOL,
            normal_tol: 1e-10,
            seed: 0,
            max_iterations: 20_000,
        }
    }
}

impl DiameterOptions {
    pub fn with_method(method: MethodChoice) -> Self {
        DiameterOptions {
            method,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterResult {
    /// `Δ(A, ℂI)` from [`scalar_distance`], `d_A = 2Δ` from [`orbit_diameter`].
    pub d: f64,
    #[serde(with = "json::complex")]
    pub lambda_star: C64,
    pub method: DiameterMethod,
    pub iterations: usize,
    pub certificate_gap: f64,
}

fn shifted_norm(a: &ComplexMatrix, lambda: C64) -> f64 {
    let mut b = a.clone();
    for i in 0..b.nrows() {
        b[(i, i)] -= lambda;
    }
    op_norm(&b)
}

/// `λ ↦ ‖A − λI‖` through `λ_max((A − λI)*(A − λI)) = λ_max(A*A − λA* − λ̄A + |λ|²I)`.
struct ShiftedObjective<'a> {
    a: &'a ComplexMatrix,
    gram: ComplexMatrix,
}

impl<'a> ShiftedObjective<'a> {
    fn new(a: &'a ComplexMatrix) -> Self {
        ShiftedObjective {
            a,
            gram: a.adjoint() * a,
        }
    }

    fn eval(&self, lambda: C64) -> f64 {
        let n = self.a.nrows();
        let mut h = self.gram.clone();
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] -= lambda * self.a[(j, i)].conj() + lambda.conj() * self.a[(i, j)];
            }
            h[(i, i)] += c64(lambda.norm_sqr(), 0.0);
        }
        let top = h
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        top.max(0.0).sqrt()
    }
}

fn is_normal(a: &ComplexMatrix, tol: f64) -> bool {
    let scale = 1.0 + op_norm(a);
    let comm = a * a.adjoint() - a.adjoint() * a;
    comm.norm() <= tol * scale * scale
}

/// Eigenvalues of a normal matrix via the commuting Hermitian pair
/// `H = (A + A*)/2`, `K = (A − A*)/2i`: eigenvectors of a generic real
/// combination `H + θK` diagonalize `A`, and the Rayleigh quotients are the
/// eigenvalues.
pub fn normal_eigenvalues(a: &ComplexMatrix) -> Vec<C64> {
    const THETA: f64 = 0.618_033_988_749_894_9;
    let h = hermitian_part(a);
    let k = (a - a.adjoint()) * c64(0.0, -0.5);
    let eig = eigh_unchecked(&(&h + &k * c64(THETA, 0.0)));
    let rotated = eig.vectors.adjoint() * a * &eig.vectors;
    (0..a.nrows()).map(|j| rotated[(j, j)]).collect()
}

fn hermitian_exact(a: &ComplexMatrix) -> DiameterResult {
    let eig = eigh_unchecked(a);
    let (lo, hi) = (eig.min(), eig.max());
    DiameterResult {
        d: (hi - lo) / 2.0,
        lambda_star: c64((hi + lo) / 2.0, 0.0),
        method: DiameterMethod::HermitianExact,
        iterations: 0,
        certificate_gap: 0.0,
    }
}

fn normal_disk(a: &ComplexMatrix, seed: u64) -> DiameterResult {
    let points: Vec<(f64, f64)> = normal_eigenvalues(a).iter().map(|z| (z.re, z.im)).collect();
    let disk = smallest_enclosing_disk(&points, seed);
    DiameterResult {
        d: disk.radius,
        lambda_star: c64(disk.center.0, disk.center.1),
        method: DiameterMethod::NormalDisk,
        iterations: 0,
        certificate_gap: 0.0,
    }
}

type Point = [f64; 2];

fn nelder_mead(
    f: &dyn Fn(Point) -> f64,
    start: Point,
    step: f64,
    xtol: f64,
    budget: usize,
) -> (Point, f64, f64, usize) {
    let mut simplex = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut values = simplex.map(f);
    let mut evals = 3;
    let diameter = |s: &[Point; 3]| {
        let d = |p: Point, q: Point| (p[0] - q[0]).hypot(p[1] - q[1]);
        d(s[0], s[1]).max(d(s[0], s[2])).max(d(s[1], s[2]))
    };
    while evals < budget {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if diameter(&simplex) <= xtol {
            break;
        }
        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            evals += 1;
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let p = along(-0.5);
                (p, f(p))
            } else {
                let p = along(0.5);
                (p, f(p))
            };
            evals += 1;
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        (simplex[0][0] + simplex[i][0]) / 2.0,
                        (simplex[0][1] + simplex[i][1]) / 2.0,
                    ];
                    values[i] = f(simplex[i]);
                }
                evals += 2;
            }
        }
    }
    let best = (0..3)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("three vertices");
    (simplex[best], values[best], diameter(&simplex), evals)
}

fn convex_descent(a: &ComplexMatrix, max_iterations: usize) -> DiameterResult {
    let n = a.nrows();
    let seed = trace(a) / c64(n as f64, 0.0);
    let objective = ShiftedObjective::new(a);
    let f = |p: Point| objective.eval(c64(p[0], p[1]));
    let f0 = f([seed.re, seed.im]);
    let scale = 1.0 + op_norm(a);
    if f0 == 0.0 {
        return DiameterResult {
            d: 0.0,
            lambda_star: seed,
            method: DiameterMethod::ConvexDescent,
            iterations: 1,
            certificate_gap: 0.0,
        };
    }
    // Every eigenvalue μ satisfies |μ − λ| ≤ ‖A − λI‖, so the minimizer lies
    // within 2·f(seed) of the seed.
    let radius = 2.0 * f0;
    const GRID: usize = 9;
    let h = 2.0 * radius / (GRID - 1) as f64;
    let mut best = ([seed.re, seed.im], f0);
    let mut evals = 1;
    for i in 0..GRID {
        for j in 0..GRID {
            let p = [seed.re - radius + i as f64 * h, seed.im - radius + j as f64 * h];
            let v = f(p);
            evals += 1;
            if v < best.1 {
                best = (p, v);
            }
        }
    }
    let xtol = 1e-11 * scale;
    let mut step = h;
    let mut gap = h;
    for _ in 0..6 {
        let budget = max_iterations.saturating_sub(evals).max(10);
        let (p, v, diam, used) = nelder_mead(&f, best.0, step, xtol, budget);
        evals += used;
        let improved = best.1 - v;
        if v <= best.1 {
            best = (p, v);
        }
        gap = diam;
        if improved <= 1e-15 * scale && step <= 1e3 * xtol.max(diam) {
            break;
        }
        // Restart around the incumbent with a smaller simplex to escape kinks.
        step = (step * 0.01).max(100.0 * xtol);
        if evals >= max_iterations {
            break;
        }
    }
    let lambda_star = c64(best.0[0], best.0[1]);
    DiameterResult {
        d: shifted_norm(a, lambda_star),
        lambda_star,
        method: DiameterMethod::ConvexDescent,
        iterations: evals,
        certificate_gap: gap,
    }
}

/// `Δ(A, ℂI) = inf_λ ‖A − λI‖` with the minimizing scalar.
pub fn scalar_distance(a: &ComplexMatrix, opts: &DiameterOptions) -> Result<DiameterResult> {
    ensure_square(a, "orbit input")?;
    crate::linalg::ensure_finite(a)?;
    if a.nrows() == 0 {
        return Err(Error::Shape("orbit input must be nonempty".into()));
    }
    match opts.method {
        MethodChoice::Hermitian => {
            ensure_hermitian(a, opts.tol)?;
            Ok(hermitian_exact(a))
        }
        MethodChoice::Disk => {
            if !is_normal(a, opts.normal_tol) {
                return Err(Error::Domain("disk method needs a normal matrix".into()));
            }
            Ok(normal_disk(a, opts.seed))
        }
        MethodChoice::Descent => Ok(convex_descent(a, opts.max_iterations)),
        MethodChoice::Auto => {
            if ensure_hermitian(a, opts.tol).is_ok() {
                Ok(hermitian_exact(a))
            } else if is_normal(a, opts.normal_tol) {
                Ok(normal_disk(a, opts.seed))
            } else {
                Ok(convex_descent(a, opts.max_iterations))
            }
        }
    }
}

/// `d_A = 2 Δ(A, ℂI)`.
pub fn orbit_diameter(a: &ComplexMatrix, opts: &DiameterOptions) -> Result<DiameterResult> {
    let mut r = scalar_distance(a, opts)?;
    r.d *= 2.0;
    r.certificate_gap *= 2.0;
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct CommutatorBound {
    pub value: f64,
    pub witness: ComplexMatrix,
}

/// Unitary exchanging the eigenvectors of the extreme eigenvalues of a
/// Hermitian matrix; it attains `‖AU − UA‖ = λ_max − λ_min`.
pub fn hermitian_swap_witness(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    let eig = eigh_unchecked(a);
    let lo = eig.vectors.column(0).into_owned();
    let hi = eig.vectors.column(n - 1).into_owned();
    if n == 1 {
        return identity(1);
    }
    identity(n) - &lo * lo.adjoint() - &hi * hi.adjoint() + &lo * hi.adjoint() + &hi * lo.adjoint()
}

/// `max ‖AU − UA‖` over Haar samples (plus the swap witness when `A` is
/// Hermitian); a lower bound for `d_A`.
pub fn commutator_lower_bound(a: &ComplexMatrix, trials: usize, seed: u64) -> Result<CommutatorBound> {
    let n = ensure_square(a, "orbit input")?;
    crate::linalg::ensure_finite(a)?;
    let mut best = CommutatorBound {
        value: 0.0,
        witness: identity(n),
    };
    let mut consider = |u: ComplexMatrix| {
        let v = op_norm(&(a * &u - &u * a));
        if v > best.value {
            best = CommutatorBound { value: v, witness: u };
        }
    };
    if n > 0 && ensure_hermitian(a, DEFAULT_TOL).is_ok() {
        consider(hermitian_swap_witness(a));
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        consider(random_unitary_with(n, &mut rng));
    }
    Ok(best)
}

/// The closed ball of diameter `[mI, MI]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    #[serde(rename = "m", with = "json::complex")]
    pub lower: C64,
    #[serde(rename = "M", with = "json::complex")]
    pub upper: C64,
}

impl BallSpec {
    pub fn new(lower: C64, upper: C64) -> Self {
        BallSpec { lower, upper }
    }

    pub fn real(lower: f64, upper: f64) -> Self {
        BallSpec {
            lower: c64(lower, 0.0),
            upper: c64(upper, 0.0),
        }
    }

    pub fn center(&self) -> C64 {
        (self.lower + self.upper) * 0.5
    }

    pub fn radius(&self) -> f64 {
        (self.upper - self.lower).norm() / 2.0
    }

    /// `|M − m|`.
    pub fn width(&self) -> f64 {
        (self.upper - self.lower).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallMembership {
    pub inside: bool,
    /// `‖A − cI‖ − radius`; positive means outside.
    pub defect: f64,
    /// `λ_min(Re((MI − A)*(A − mI)))`.
    pub re_product_min_eigenvalue: f64,
    /// Whether the norm test and the `Re`-product test agree within tolerance.
    pub criteria_agree: bool,
}

/// Membership in the ball of diameter `[mI, MI]`, checked both as a norm
/// bound and through `r² I − |A − cI|² = Re((MI − A)*(A − mI)) ⪰ 0`.
pub fn ball_membership(a: &ComplexMatrix, ball: &BallSpec, tol: f64) -> Result<BallMembership> {
    let n = ensure_square(a, "ball input")?;
    crate::linalg::ensure_finite(a)?;
    let radius = ball.radius();
    let dist = shifted_norm(a, ball.center());
    let defect = dist - radius;
    let inside = defect <= tol * (1.0 + radius);

    let upper = identity(n) * ball.upper - a;
    let lower = a - identity(n) * ball.lower;
    let product = upper.adjoint() * lower;
    let re_min = eigh_unchecked(&product).min();
    let expected = radius * radius - dist * dist;
    let scale = 1.0 + radius * radius + dist * dist;
    let criteria_agree = (re_min - expected).abs() <= tol * scale;
    Ok(BallMembership {
        inside,
        defect,
        re_product_min_eigenvalue: re_min,
        criteria_agree,
    })
}

/// The smallest ball of diameter `[mI, MI]` containing `A`: `m = λ* − Δ`, `M = λ* + Δ`.
pub fn tight_ball(a: &ComplexMatrix) -> Result<BallSpec> {
    tight_ball_with(a, &DiameterOptions::default())
}

pub fn tight_ball_with(a: &ComplexMatrix, opts: &DiameterOptions) -> Result<BallSpec> {
    let r = scalar_distance(a, opts)?;
    Ok(BallSpec {
        lower: r.lambda_star - c64(r.d, 0.0),
        upper: r.lambda_star + c64(r.d, 0.0),
    })
}
