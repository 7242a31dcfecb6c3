//! Finite-difference descent for Einstein and Ricci-flat metrics on a fixed algebra.
//!
//! The metric is parameterized as `g = Aᵀ η A` with `η` the target signature,
//! so every iterate is nondegenerate with the requested signature. After each
//! step `A` is projected to `‖A‖_F = √n` with its smallest singular value
//! floored at [`tol::SEARCH_SIGMA_FLOOR`].
//!
//! Minimizing the raw residual `‖Ric - λ̂ Id‖_F` would reward metrics that
//! shrink the structure constants, since `Ric` is quadratic in them. The
//! objective therefore measures `Ric` in the `η`-orthonormal frame given by
//! `A` and divides by the squared norm of the structure constants in that frame.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::curvature::{einstein_classify, ricci_operator, ricci_via_definition, MetricLieAlgebra, Verdict};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::pseudolin::{Gram, Matrix, Vector};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchTarget {
    RicciFlat,
    Einstein,
}

impl std::str::FromStr for SearchTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "ricciflat" => Ok(SearchTarget::RicciFlat),
            "einstein" => Ok(SearchTarget::Einstein),
            _ => Err(Error::InvalidInput(format!(
                "unknown search target `{s}` (ricci-flat or einstein)"
            ))),
        }
    }
}

impl std::fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchTarget::RicciFlat => "ricci-flat",
            SearchTarget::Einstein => "einstein",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub algebra: LieAlgebra,
    pub target: SearchTarget,
    /// `(minus, plus)`.
    pub signature_target: (usize, usize),
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub step0: f64,
    pub tol: f64,
}

impl SearchSpec {
    pub fn new(algebra: LieAlgebra, target: SearchTarget, signature_target: (usize, usize)) -> Self {
        Self {
            algebra,
            target,
            signature_target,
            seed: 0,
            restarts: 8,
            max_iters: 2000,
            step0: 0.1,
            tol: 1e-6,
        }
    }

    fn validate(&self) -> Result<()> {
        let (minus, plus) = self.signature_target;
        if minus + plus != self.algebra.dim() {
            return Err(Error::InvalidInput(format!(
                "signature ({minus}, {plus}) does not sum to dimension {}",
                self.algebra.dim()
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        if !(self.step0 > 0.0 && self.step0.is_finite()) || !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidInput("step0 and tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_gram: Option<Gram>,
    /// Normalized objective at `best_gram`.
    pub residual: f64,
    /// `‖Ric - λ̂ Id‖_F` at `best_gram`.
    pub raw_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Restart that produced the result.
    pub restart: usize,
}

/// `‖Ric - λ̂ Id‖_F` with `λ̂ = tr(Ric)/n`, or `λ̂ = 0` for a Ricci-flat target.
pub fn einstein_residual(algebra: &LieAlgebra, gram: &Gram, target: SearchTarget) -> Result<f64> {
    let m = MetricLieAlgebra::new(algebra.clone(), gram.clone())?;
    let ric = ricci_operator(&m, &ricci_via_definition(&m));
    Ok(residual_matrix(&ric, target).norm())
}

fn residual_matrix(ric: &Matrix, target: SearchTarget) -> Matrix {
    let n = ric.nrows();
    let lambda = match target {
        SearchTarget::RicciFlat => 0.0,
        SearchTarget::Einstein => ric.trace() / n.max(1) as f64,
    };
    ric - Matrix::identity(n, n) * lambda
}

fn eta(spec: &SearchSpec) -> Matrix {
    let (minus, plus) = spec.signature_target;
    let d: Vec<f64> = std::iter::repeat_n(-1.0, minus)
        .chain(std::iter::repeat_n(1.0, plus))
        .collect();
    Matrix::from_diagonal(&Vector::from_vec(d))
}

struct Problem<'a> {
    spec: &'a SearchSpec,
    eta: Gram,
}

impl Problem<'_> {
    /// Squared normalized residual of the metric `Aᵀ η A`, or `None` when `A` is singular.
    fn objective(&self, a: &Matrix) -> Option<f64> {
        // In the frame given by the columns of A⁻¹ the metric is η.
        let p = a.clone().try_inverse()?;
        let framed = self.spec.algebra.change_basis(&p).ok()?;
        let norm2: f64 = framed.upper_brackets().map(|(_, _, v)| v.norm_squared()).sum::<f64>() * 2.0;
        if norm2 == 0.0 {
            return Some(0.0);
        }
        let m = MetricLieAlgebra::new(framed, self.eta.clone()).ok()?;
        let ric = ricci_operator(&m, &ricci_via_definition(&m));
        let r = residual_matrix(&ric, self.spec.target).norm_squared();
        let v = r / (norm2 * norm2);
        v.is_finite().then_some(v)
    }
}

fn project(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let target = (n as f64).sqrt();
    let norm = a.norm();
    let scaled = if norm > 0.0 {
        a * (target / norm)
    } else {
        Matrix::identity(n, n)
    };
    let mut svd = scaled.clone().svd(true, true);
    if svd.singular_values.min() >= tol::SEARCH_SIGMA_FLOOR {
        return scaled;
    }
    for s in svd.singular_values.iter_mut() {
        *s = s.max(tol::SEARCH_SIGMA_FLOOR);
    }
    svd.recompose().expect("both factors were computed")
}

fn gradient(problem: &Problem<'_>, a: &Matrix) -> Matrix {
    let h = 1e-5 * a.amax().max(1.0);
    let mut g = Matrix::zeros(a.nrows(), a.ncols());
    let mut probe = a.clone();
    for idx in 0..a.len() {
        let orig = probe[idx];
        probe[idx] = orig + h;
        let up = problem.objective(&probe).unwrap_or(f64::INFINITY);
        probe[idx] = orig - h;
        let down = problem.objective(&probe).unwrap_or(f64::INFINITY);
        probe[idx] = orig;
        let d = (up - down) / (2.0 * h);
        g[idx] = if d.is_finite() { d } else { 0.0 };
    }
    g
}

struct RestartOutcome {
    a: Matrix,
    objective: f64,
    iterations: usize,
}

fn run_restart(problem: &Problem<'_>, restart: usize) -> RestartOutcome {
    let spec = problem.spec;
    let n = spec.algebra.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(restart as u64);
    let mut a =
        project(&(Matrix::identity(n, n) + Matrix::from_fn(n, n, |_, _| 0.5 * rng.sample::<f64, _>(StandardNormal))));
    let mut f = problem.objective(&a).unwrap_or(f64::INFINITY);
    let goal = spec.tol * spec.tol;
    let mut step = spec.step0;
    let mut iterations = 0;
    while iterations < spec.max_iters && f > goal && step > 1e-16 {
        iterations += 1;
        let g = gradient(problem, &a);
        let gnorm = g.norm();
        if gnorm == 0.0 {
            break;
        }
        loop {
            let trial = project(&(&a - &g * (step / gnorm)));
            let ft = problem.objective(&trial).unwrap_or(f64::INFINITY);
            if ft < f {
                a = trial;
                f = ft;
                step *= 1.5;
                break;
            }
            step *= 0.5;
            if step <= 1e-16 {
                break;
            }
        }
    }
    RestartOutcome {
        a,
        objective: f,
        iterations,
    }
}

pub fn run_search(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let eta_m = eta(spec);
    let problem = Problem {
        spec,
        eta: Gram::new(eta_m.clone())?,
    };
    let outcomes: Vec<RestartOutcome> = (0..spec.restarts)
        .into_par_iter()
        .map(|r| run_restart(&problem, r))
        .collect();
    let (restart, best) = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartOutcome)>, |acc, (i, o)| match acc {
            Some((_, b)) if b.objective <= o.objective => acc,
            _ => Some((i, o)),
        })
        .expect("at least one restart");

    let residual = best.objective.sqrt();
    if !residual.is_finite() {
        return Ok(SearchResult {
            best_gram: None,
            residual,
            raw_residual: f64::INFINITY,
            iterations: best.iterations,
            converged: false,
            restart,
        });
    }
    let gram = Gram::new(best.a.transpose() * &eta_m * &best.a)?;
    let raw_residual = einstein_residual(&spec.algebra, &gram, spec.target)?;
    let m = MetricLieAlgebra::new(spec.algebra.clone(), gram.clone())?;
    let verdict = einstein_classify(&m, 10.0 * spec.tol).verdict;
    let matches_target = match spec.target {
        SearchTarget::RicciFlat => verdict.is_ricci_flat(),
        SearchTarget::Einstein => verdict != Verdict::NotEinstein,
    };
    Ok(SearchResult {
        best_gram: Some(gram),
        residual,
        raw_residual,
        iterations: best.iterations,
        converged: residual <= spec.tol && matches_target,
        restart,
    })
}


#[cfg(test)]
mod convergence {
    use super::*;
    use crate::catalog::{make_algebra, CatalogName};

    #[test]
    fn l32_lorentzian_ricci_flat_is_found() {
        let spec = SearchSpec::new(make_algebra(CatalogName::L3_2), SearchTarget::RicciFlat, (1, 2));
        let r = run_search(&spec).unwrap();
        eprintln!("{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn l43_euclidean_ricci_flat_is_not_found() {
        let spec = SearchSpec::new(make_algebra(CatalogName::L4_3), SearchTarget::RicciFlat, (0, 4));
        let r = run_search(&spec).unwrap();
        eprintln!("{r:?}");
        assert!(!r.converged);
    }
}
