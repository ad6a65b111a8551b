//! L2-regularized logistic regression used as the attack meta-classifier.
//!
//! Features are standardized with training-set statistics, then the penalized
//! mean log-loss is minimized by damped Newton iterations. Everything is
//! full-batch and sequential, so training is deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub l2_penalty: f64,
    pub max_iterations: usize,
    /// Stop once the Euclidean norm of the gradient falls below this.
    pub tolerance: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            l2_penalty: 1e-2,
            max_iterations: 100,
            tolerance: 1e-8,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l2_penalty >= 0.0 && self.l2_penalty.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "l2_penalty {} must be non-negative",
                self.l2_penalty
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Per-column standardization. Constant columns get scale 0 and map to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer<T> {
    pub means: Vec<T>,
    pub scales: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    pub fn fit(rows: &[Vec<T>]) -> Self {
        let d = rows[0].len();
        let n = T::from_count(rows.len());
        let means: Vec<T> = (0..d)
            .map(|j| rows.iter().map(|r| r[j]).sum::<T>() / n)
            .collect();
        let scales = (0..d)
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - means[j]).powi(2)).sum::<T>() / n;
                var.sqrt()
            })
            .collect();
        Standardizer { means, scales }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(self.means.iter().zip(&self.scales))
            .map(|(&v, (&m, &s))| {
                if s > T::zero() {
                    (v - m) / s
                } else {
                    T::zero()
                }
            })
            .collect()
    }
}

fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// Penalized logistic objective over standardized rows. Parameters are laid
/// out as `[intercept, w_1, ..., w_d]`; the intercept is not penalized.
#[derive(Clone, Debug)]
pub struct LogisticProblem<T> {
    rows: Vec<Vec<T>>,
    labels: Vec<T>,
    l2: T,
}

impl<T: Scalar> LogisticProblem<T> {
    pub fn new(rows: Vec<Vec<T>>, labels: &[bool], l2: T) -> Self {
        LogisticProblem {
            rows,
            labels: labels
                .iter()
                .map(|&y| if y { T::one() } else { T::zero() })
                .collect(),
            l2,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len() + 1
    }

    fn logit(theta: &[T], x: &[T]) -> T {
        theta[0] + x.iter().zip(&theta[1..]).map(|(&a, &w)| a * w).sum::<T>()
    }

    pub fn objective(&self, theta: &[T]) -> T {
        let n = T::from_count(self.rows.len());
        let loss = self
            .rows
            .iter()
            .zip(&self.labels)
            .map(|(x, &y)| {
                let z = Self::logit(theta, x);
                softplus(z) - y * z
            })
            .sum::<T>()
            / n;
        let half = T::from_f64_lossy(0.5);
        loss + half * self.l2 * theta[1..].iter().map(|&w| w * w).sum::<T>()
    }

    pub fn gradient(&self, theta: &[T]) -> Vec<T> {
        let n = T::from_count(self.rows.len());
        let mut g = vec![T::zero(); self.dim()];
        for (x, &y) in self.rows.iter().zip(&self.labels) {
            let r = sigmoid(Self::logit(theta, x)) - y;
            g[0] = g[0] + r;
            for (gj, &xj) in g[1..].iter_mut().zip(x) {
                *gj = *gj + r * xj;
            }
        }
        for (j, gj) in g.iter_mut().enumerate() {
            *gj = *gj / n;
            if j > 0 {
                *gj = *gj + self.l2 * theta[j];
            }
        }
        g
    }

    #[allow(clippy::needless_range_loop)]
    fn hessian(&self, theta: &[T]) -> Vec<Vec<T>> {
        let d = self.dim();
        let n = T::from_count(self.rows.len());
        let mut h = vec![vec![T::zero(); d]; d];
        for x in &self.rows {
            let p = sigmoid(Self::logit(theta, x));
            let w = p * (T::one() - p);
            let xa = |i: usize| if i == 0 { T::one() } else { x[i - 1] };
            for i in 0..d {
                let wi = w * xa(i);
                for j in 0..=i {
                    h[i][j] = h[i][j] + wi * xa(j);
                }
            }
        }
        for i in 0..d {
            for j in 0..=i {
                h[i][j] = h[i][j] / n;
                h[j][i] = h[i][j];
            }
            if i > 0 {
                h[i][i] = h[i][i] + self.l2;
            }
        }
        h
    }
}

/// Solve `a x = b` for symmetric positive definite `a` by Cholesky
/// factorization. `None` when `a` is not numerically positive definite.
#[allow(clippy::needless_range_loop)]
fn cholesky_solve<T: Scalar>(mut a: Vec<Vec<T>>, b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    for j in 0..n {
        let mut diag = a[j][j];
        for k in 0..j {
            diag = diag - a[j][k] * a[j][k];
        }
        if diag.is_nan() || diag <= T::zero() {
            return None;
        }
        let l = diag.sqrt();
        a[j][j] = l;
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s = s - a[i][k] * a[j][k];
            }
            a[i][j] = s / l;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] = y[i] - a[i][k] * y[k];
        }
        y[i] = y[i] / a[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] = y[i] - a[k][i] * y[k];
        }
        y[i] = y[i] / a[i][i];
    }
    Some(y)
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Trained meta-classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel<T> {
    pub standardizer: Standardizer<T>,
    pub intercept: T,
    pub weights: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> LogisticModel<T> {
    /// Log-odds of membership; used as the attack score.
    pub fn decision(&self, x: &[T]) -> T {
        let z = self.standardizer.apply(x);
        self.intercept + z.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<T>()
    }

    pub fn probability(&self, x: &[T]) -> T {
        sigmoid(self.decision(x))
    }

    pub fn theta(&self) -> Vec<T> {
        std::iter::once(self.intercept)
            .chain(self.weights.iter().copied())
            .collect()
    }
}

/// Fit the meta-classifier on feature rows and membership labels.
pub fn train_meta_classifier<T: Scalar>(
    features: &[Vec<T>],
    labels: &[bool],
    cfg: &ClassifierConfig,
) -> Result<LogisticModel<T>> {
    cfg.validate()?;
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: features.len(),
            right: labels.len(),
        });
    }
    let members = labels.iter().filter(|&&y| y).count();
    let non_members = labels.len() - members;
    if members < 2 || non_members < 2 {
        return Err(Error::DegenerateLabels {
            members,
            non_members,
        });
    }
    let width = features[0].len();
    if let Some(bad) = features.iter().find(|r| r.len() != width) {
        return Err(Error::LengthMismatch {
            left: width,
            right: bad.len(),
        });
    }
    let standardizer = Standardizer::fit(features);
    let rows = features.iter().map(|r| standardizer.apply(r)).collect();
    let problem = LogisticProblem::new(rows, labels, T::from_f64_lossy(cfg.l2_penalty));
    let (theta, iterations, converged) = minimize(&problem, cfg);
    Ok(LogisticModel {
        standardizer,
        intercept: theta[0],
        weights: theta[1..].to_vec(),
        iterations,
        converged,
    })
}

fn minimize<T: Scalar>(
    problem: &LogisticProblem<T>,
    cfg: &ClassifierConfig,
) -> (Vec<T>, usize, bool) {
    let d = problem.dim();
    let tol = T::from_f64_lossy(cfg.tolerance);
    let mut theta = vec![T::zero(); d];
    let mut value = problem.objective(&theta);
    for iter in 0..cfg.max_iterations {
        let g = problem.gradient(&theta);
        if norm(&g) < tol {
            return (theta, iter, true);
        }
        let mut h = problem.hessian(&theta);
        // Separable data without a penalty drives the curvature to zero;
        // escalate a ridge until the factorization succeeds.
        let mut ridge = T::zero();
        let step = loop {
            if let Some(s) = cholesky_solve(h.clone(), &g) {
                break s;
            }
            ridge = if ridge == T::zero() {
                T::from_f64_lossy(1e-10)
            } else {
                ridge * T::from_f64_lossy(10.0)
            };
            for (i, row) in h.iter_mut().enumerate() {
                row[i] = row[i] + ridge;
            }
        };
        let slope: T = g.iter().zip(&step).map(|(&a, &b)| a * b).sum();
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<T> = theta.iter().zip(&step).map(|(&a, &s)| a - t * s).collect();
            let v = problem.objective(&cand);
            if v <= value - T::from_f64_lossy(1e-4) * t * slope {
                theta = cand;
                value = v;
                accepted = true;
                break;
            }
            t = t * T::from_f64_lossy(0.5);
        }
        if !accepted {
            // No further decrease is representable at this precision.
            let converged = norm(&problem.gradient(&theta)) < tol;
            return (theta, iter + 1, converged);
        }
    }
    let converged = norm(&problem.gradient(&theta)) < tol;
    (theta, cfg.max_iterations, converged)
}
