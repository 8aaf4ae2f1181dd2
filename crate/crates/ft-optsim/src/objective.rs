//! Admissible scalar cost functions (quadratics), the constraint interval
//! with Euclidean projection, and diminishing step-size schedules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("curvature must be positive, got {0}")]
    NonPositiveCurvature(f64),
    #[error("interval requires lo <= hi, got [{0}, {1}]")]
    EmptyInterval(f64, f64),
    #[error("step exponent p must lie in (0.5, 1], got {0}")]
    BadExponent(f64),
    #[error("lambda0 must be positive, got {0}")]
    BadLambda0(f64),
}

/// h(x) = a/2 (x - c)^2 with curvature a > 0 and minimizer c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCost {
    pub center: f64,
    pub curvature: f64,
}

impl QuadraticCost {
    pub fn new(center: f64, curvature: f64) -> Result<Self, ObjectiveError> {
        if !(curvature > 0.0) {
            return Err(ObjectiveError::NonPositiveCurvature(curvature));
        }
        Ok(QuadraticCost { center, curvature })
    }

    pub fn value(&self, x: f64) -> f64 {
        0.5 * self.curvature * (x - self.center) * (x - self.center)
    }

    pub fn gradient(&self, x: f64) -> f64 {
        self.curvature * (x - self.center)
    }
}

/// The constraint set X = [lo, hi] with its Euclidean projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ConstraintInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ObjectiveError> {
        if !(lo <= hi) {
            return Err(ObjectiveError::EmptyInterval(lo, hi));
        }
        Ok(ConstraintInterval { lo, hi })
    }

    /// P_X[x] = clamp(x, lo, hi).
    pub fn project(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// x0 = min X.
    pub fn min_point(&self) -> f64 {
        self.lo
    }

    /// x1 = max X.
    pub fn max_point(&self) -> f64 {
        self.hi
    }
}

/// lambda[t] = lambda0 / (t+1)^p with p in (0.5, 1]: positive,
/// non-increasing, divergent sum, convergent sum of squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub lambda0: f64,
    pub p: f64,
}

impl StepSchedule {
    pub fn new(lambda0: f64, p: f64) -> Result<Self, ObjectiveError> {
        if !(lambda0 > 0.0) {
            return Err(ObjectiveError::BadLambda0(lambda0));
        }
        if !(p > 0.5 && p <= 1.0) {
            return Err(ObjectiveError::BadExponent(p));
        }
        Ok(StepSchedule { lambda0, p })
    }

    pub fn at(&self, t: usize) -> f64 {
        self.lambda0 / ((t + 1) as f64).powf(self.p)
    }
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { lambda0: 1.0, p: 1.0 }
    }
}

/// One admissible cost per agent, indexed by agent label (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostFamily {
    costs: Vec<QuadraticCost>,
}

impl CostFamily {
    pub fn new(costs: Vec<QuadraticCost>) -> Self {
        CostFamily { costs }
    }

    pub fn from_centers(centers: &[f64]) -> Self {
        CostFamily {
            costs: centers
                .iter()
                .map(|&c| QuadraticCost { center: c, curvature: 1.0 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn cost(&self, agent: usize) -> &QuadraticCost {
        &self.costs[agent - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &QuadraticCost)> {
        self.costs.iter().enumerate().map(|(i, c)| (i + 1, c))
    }

    pub fn all_unit_curvature(&self) -> bool {
        self.costs.iter().all(|c| c.curvature == 1.0)
    }

    /// L = max_i max_{x in X} |h_i'(x)|. Quadratic gradients are monotone, so
    /// the maximum is attained at an endpoint of X.
    pub fn lipschitz_bound(&self, x: &ConstraintInterval) -> f64 {
        self.costs
            .iter()
            .map(|c| c.gradient(x.lo).abs().max(c.gradient(x.hi).abs()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        let x = ConstraintInterval::new(0.0, 1.0).unwrap();
        assert_eq!(x.project(1.5), 1.0);
        let y = ConstraintInterval::new(-2.0, 3.0).unwrap();
        assert_eq!(y.project(0.5), 0.5);
        // Non-expansiveness instance.
        assert!((x.project(5.0) - x.project(-5.0)).abs() <= 10.0);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(QuadraticCost::new(2.0, 1.0).unwrap().gradient(5.0), 3.0);
        assert_eq!(QuadraticCost::new(0.0, 3.0).unwrap().gradient(0.0), 0.0);
        // Frozen from the central finite-difference oracle
        // (h(x+e) - h(x-e)) / 2e at e = 1e-6.
        let c = QuadraticCost::new(1.0, 2.0).unwrap();
        let x = -1.0;
        let e = 1e-6;
        let fd = (c.value(x + e) - c.value(x - e)) / (2.0 * e);
        assert!((c.gradient(x) - -4.0).abs() < 1e-12);
        assert!((fd - -4.0).abs() < 1e-6);
    }

    #[test]
    fn lipschitz_examples() {
        let x = ConstraintInterval::new(-2.0, 3.0).unwrap();
        let fam = CostFamily::from_centers(&[0.0]);
        assert_eq!(fam.lipschitz_bound(&x), 3.0);

        let x = ConstraintInterval::new(0.0, 1.0).unwrap();
        let fam = CostFamily::from_centers(&[0.0, 10.0]);
        assert_eq!(fam.lipschitz_bound(&x), 10.0);

        let x = ConstraintInterval::new(1.0, 1.0).unwrap();
        let fam = CostFamily::from_centers(&[1.0]);
        assert_eq!(fam.lipschitz_bound(&x), 0.0);
    }

    #[test]
    fn schedule_monotone_and_scale_invariant() {
        let s = StepSchedule::new(1.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for t in 0..=1_000_000 {
            let l = s.at(t);
            assert!(l > 0.0);
            assert!(l <= prev);
            prev = l;
        }
        for t in [0usize, 5, 999, 12345] {
            let l = s.at(t);
            assert!((l * ((t + 1) as f64).powf(s.p) - s.lambda0).abs() < 1e-9);
        }
        assert!(StepSchedule::new(1.0, 0.5).is_err());
        assert!(StepSchedule::new(1.0, 1.2).is_err());
    }
}
