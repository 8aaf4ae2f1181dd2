//! Valid-function families, exact optimum intervals for unit-curvature
//! quadratic families, and the per-theorem guarantee parameters.
//!
//! A valid function is a convex combination of local costs in which at least
//! `gamma` non-faulty agents carry weight at least `beta`; the Byzantine
//! family supports weights on non-faulty agents only, the crash family on
//! all agents. The union of (constrained) minimizers of all valid functions
//! is convex and closed, hence an interval, and for unit-curvature
//! quadratics the weighted minimizer is the weighted mean of centers, which
//! makes the interval endpoints exact and greedily computable.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Algorithm;
use crate::netgraph::{
    byzantine_min_source, check_assumption_byzantine, check_assumption_crash,
    count_reduced_byzantine, crash_min_source, DirectedGraph, FaultMode, GraphError,
};
use crate::objective::{ConstraintInterval, CostFamily};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid valid-family parameters: {0}")]
    InvalidParams(String),
    #[error("exact interval computation requires unit curvature")]
    CurvatureUnsupported,
    #[error("{algorithm:?} carries no optimization guarantee")]
    NoGuarantee { algorithm: Algorithm },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters (beta, gamma) of a valid-function family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidFamilyParams {
    pub beta: f64,
    pub gamma: usize,
    pub mode: FaultMode,
}

impl ValidFamilyParams {
    fn check(&self, nf_count: usize) -> Result<(), OracleError> {
        if !(self.beta >= 0.0) {
            return Err(OracleError::InvalidParams(format!("beta = {} < 0", self.beta)));
        }
        if self.gamma > nf_count {
            return Err(OracleError::InvalidParams(format!(
                "gamma = {} exceeds |N| = {nf_count}",
                self.gamma
            )));
        }
        if self.beta * self.gamma as f64 > 1.0 + 1e-12 {
            return Err(OracleError::InvalidParams(format!(
                "beta * gamma = {} > 1",
                self.beta * self.gamma as f64
            )));
        }
        Ok(())
    }
}

/// The interval Y(beta, gamma) (or X(beta, gamma) when unconstrained).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumInterval {
    pub lo: f64,
    pub hi: f64,
    pub beta: f64,
    pub gamma: usize,
    pub mode: FaultMode,
    /// True when computed by the exact unit-curvature route.
    pub exact: bool,
}

impl OptimumInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn distance(&self, x: f64) -> f64 {
        (self.lo - x).max(x - self.hi).max(0.0)
    }
}

/// Membership with absolute tolerance: x in [lo - tol, hi + tol].
pub fn membership(x: f64, interval: &OptimumInterval, tol: f64) -> bool {
    x >= interval.lo - tol && x <= interval.hi + tol
}

/// Weighted-mean value of one extreme weight vector: weight `beta` on each
/// member of `subset`, remaining mass on `receiver` (these are exactly the
/// extreme points of the valid-weight polytope for a fixed gamma-set; when
/// the receiver belongs to the subset its weight is beta plus the residual,
/// which yields the same value). Centers are summed in a canonical order so
/// equal multisets produce bit-equal values.
fn combo_value(costs: &CostFamily, subset: &[usize], receiver: usize, beta: f64) -> f64 {
    let mut centers: Vec<f64> = subset.iter().map(|&i| costs.cost(i).center).collect();
    centers.sort_by(f64::total_cmp);
    let sum: f64 = centers.iter().sum();
    beta * sum + (1.0 - beta * subset.len() as f64) * costs.cost(receiver).center
}

/// Support of the weight vectors: non-faulty agents only (Byzantine family)
/// or everyone (crash family).
fn support(mode: FaultMode, nf: &BTreeSet<usize>, n: usize) -> Vec<usize> {
    match mode {
        FaultMode::Byzantine => nf.iter().copied().collect(),
        FaultMode::Crash => (1..=n).collect(),
    }
}

fn clip(lo: f64, hi: f64, constraint: Option<&ConstraintInterval>) -> (f64, f64) {
    match constraint {
        None => (lo, hi),
        Some(x) => {
            if hi < x.lo {
                // Every valid function increases on X: the constrained
                // minimizers all sit at the left endpoint.
                (x.lo, x.lo)
            } else if lo > x.hi {
                (x.hi, x.hi)
            } else {
                (lo.max(x.lo), hi.min(x.hi))
            }
        }
    }
}

/// Exact optimum interval for unit-curvature families.
///
/// The unconstrained minimum places weight beta on the gamma members of N
/// with smallest centers and the remaining mass on the smallest admissible
/// center (the maximum symmetrically); the constrained interval intersects
/// with X when they meet and otherwise collapses to the nearest endpoint.
pub fn optimum_interval(
    costs: &CostFamily,
    nf: &BTreeSet<usize>,
    params: &ValidFamilyParams,
    constraint: Option<&ConstraintInterval>,
) -> Result<OptimumInterval, OracleError> {
    if !costs.all_unit_curvature() {
        return Err(OracleError::CurvatureUnsupported);
    }
    params.check(nf.len())?;
    let beta = params.beta;
    let sup = support(params.mode, nf, costs.len());

    let mut nf_by_center: Vec<usize> = nf.iter().copied().collect();
    nf_by_center
        .sort_by(|&a, &b| costs.cost(a).center.total_cmp(&costs.cost(b).center).then(a.cmp(&b)));
    let low_set: Vec<usize> = nf_by_center[..params.gamma].to_vec();
    let high_set: Vec<usize> = nf_by_center[nf_by_center.len() - params.gamma..].to_vec();

    let min_receiver = *sup
        .iter()
        .min_by(|&&a, &&b| costs.cost(a).center.total_cmp(&costs.cost(b).center).then(a.cmp(&b)))
        .expect("nonempty support");
    let max_receiver = *sup
        .iter()
        .max_by(|&&a, &&b| costs.cost(a).center.total_cmp(&costs.cost(b).center).then(b.cmp(&a)))
        .expect("nonempty support");

    let lo = combo_value(costs, &low_set, min_receiver, beta);
    let hi = combo_value(costs, &high_set, max_receiver, beta);
    let (lo, hi) = clip(lo, hi, constraint);
    Ok(OptimumInterval { lo, hi, beta, gamma: params.gamma, mode: params.mode, exact: true })
}

/// Valid-weight membership: alpha >= 0, unit total mass over the support
/// (zero outside non-faulty agents in Byzantine mode), and at least gamma
/// non-faulty agents with weight >= beta.
pub fn is_valid_weights(alpha: &[f64], params: &ValidFamilyParams, nf: &BTreeSet<usize>) -> bool {
    let n = alpha.len();
    if alpha.iter().any(|&a| a < 0.0) {
        return false;
    }
    if params.mode == FaultMode::Byzantine {
        for (i, &a) in alpha.iter().enumerate() {
            if !nf.contains(&(i + 1)) && a.abs() > 1e-12 {
                return false;
            }
        }
    }
    let total: f64 = alpha.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return false;
    }
    let heavy = (1..=n).filter(|i| nf.contains(i) && alpha[i - 1] >= params.beta).count();
    heavy >= params.gamma
}

/// Seeded sampler of valid weight vectors: choose a gamma-subset of N,
/// guarantee it beta mass each, then spread the remainder exponentially over
/// the whole support. Every output satisfies `is_valid_weights`.
pub fn sample_valid_weights(
    params: &ValidFamilyParams,
    nf: &BTreeSet<usize>,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>, OracleError> {
    params.check(nf.len())?;
    let sup = support(params.mode, nf, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf_list: Vec<usize> = nf.iter().copied().collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut pool = nf_list.clone();
        let mut alpha = vec![0.0; n];
        for _ in 0..params.gamma {
            let k = rng.gen_range(0..pool.len());
            alpha[pool.swap_remove(k) - 1] = params.beta;
        }
        let remainder = 1.0 - params.beta * params.gamma as f64;
        if remainder > 0.0 {
            let draws: Vec<f64> = sup.iter().map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
            let total: f64 = draws.iter().sum();
            for (&agent, d) in sup.iter().zip(&draws) {
                alpha[agent - 1] += remainder * d / total;
            }
        }
        debug_assert!(is_valid_weights(&alpha, params, nf));
        out.push(alpha);
    }
    Ok(out)
}

/// The per-theorem guarantee parameters achieved by an algorithm on a given
/// graph and fault realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub algorithm: Algorithm,
    pub mode: FaultMode,
    /// Weight threshold (may underflow to zero for the reduced-graph-power
    /// formulas; `beta_log10` preserves the magnitude).
    pub beta: f64,
    pub beta_log10: f64,
    pub gamma: usize,
    /// gamma >= f+1 (trimmed-mean theorem) or gamma >= 1 (crash theorem);
    /// reported, never silently corrected.
    pub gamma_precondition_met: bool,
    /// Result of the matching solvability check.
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_b: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<u64>,
}

/// Evaluate the guarantee formulas of the four optimization algorithms for
/// one graph and fault realization.
pub fn guarantee_params(
    g: &DirectedGraph,
    faulty: &BTreeSet<usize>,
    f: usize,
    algorithm: Algorithm,
    budget: u64,
) -> Result<GuaranteeReport, OracleError> {
    let n = g.n();
    let phi = faulty.len();
    if phi > f {
        return Err(OracleError::InvalidParams(format!("|F| = {phi} > f = {f}")));
    }
    let nf: BTreeSet<usize> = g.vertices().filter(|v| !faulty.contains(v)).collect();
    let phi_i = |i: usize| g.in_neighbors(i).iter().filter(|j| faulty.contains(j)).count();
    let d_max = g.max_in_degree();

    match algorithm {
        Algorithm::A1 => {
            let feasible = check_assumption_byzantine(g, f, budget)?.holds;
            if d_max + 1 < 2 * f + 1 {
                return Err(OracleError::InvalidParams("d_max + 1 - 2f <= 0".into()));
            }
            let xi = 1.0 / (2.0 * (d_max + 1 - 2 * f) as f64);
            let tau_b = count_reduced_byzantine(g, faulty, f);
            let nu = tau_b * (n - phi) as u64;
            let beta = xi.powf(nu as f64);
            let gamma = byzantine_min_source(g, faulty, f, budget)?;
            Ok(GuaranteeReport {
                algorithm,
                mode: FaultMode::Byzantine,
                beta,
                beta_log10: nu as f64 * xi.log10(),
                gamma,
                gamma_precondition_met: gamma >= f + 1,
                feasible,
                xi: Some(xi),
                zeta: None,
                tau_b: Some(tau_b),
                nu: Some(nu),
            })
        }
        Algorithm::A2 => {
            let feasible = check_assumption_byzantine(g, f, budget)?.holds;
            let caps: Vec<isize> = nf
                .iter()
                .map(|&i| g.in_degree(i) as isize + 1 - phi_i(i) as isize - f as isize)
                .collect();
            let min_cap = *caps.iter().min().expect("nonempty N");
            let max_cap = *caps.iter().max().expect("nonempty N");
            if min_cap <= 0 {
                return Err(OracleError::InvalidParams(
                    "d_i^- + 1 - phi_i - f <= 0 for some non-faulty agent".into(),
                ));
            }
            let beta = (1.0 / (2.0 * max_cap as f64)).min(1.0 / nf.len() as f64);
            Ok(GuaranteeReport {
                algorithm,
                mode: FaultMode::Byzantine,
                beta,
                beta_log10: beta.log10(),
                gamma: min_cap as usize,
                gamma_precondition_met: min_cap as usize >= f + 1,
                feasible,
                xi: None,
                zeta: None,
                tau_b: None,
                nu: None,
            })
        }
        Algorithm::A5 => {
            let feasible = check_assumption_crash(g, f, budget)?.holds;
            let zeta = 1.0 / (d_max + 1) as f64;
            let beta = zeta.powi(n as i32);
            let gamma = crash_min_source(g, faulty);
            Ok(GuaranteeReport {
                algorithm,
                mode: FaultMode::Crash,
                beta,
                beta_log10: n as f64 * zeta.log10(),
                gamma,
                gamma_precondition_met: gamma >= 1,
                feasible,
                xi: None,
                zeta: Some(zeta),
                tau_b: None,
                nu: None,
            })
        }
        Algorithm::A6 => {
            let feasible = check_assumption_crash(g, f, budget)?.holds;
            // The minimum here ranges over all of V, faulty agents included.
            let caps: Vec<isize> =
                g.vertices().map(|i| g.in_degree(i) as isize + 1 - phi_i(i) as isize).collect();
            let min_cap = *caps.iter().min().expect("nonempty V");
            let max_cap = *caps.iter().max().expect("nonempty V");
            if min_cap <= 0 {
                return Err(OracleError::InvalidParams(
                    "d_i^- + 1 - phi_i <= 0 for some agent".into(),
                ));
            }
            let beta = (1.0 / max_cap as f64).min(1.0 / nf.len() as f64);
            Ok(GuaranteeReport {
                algorithm,
                mode: FaultMode::Crash,
                beta,
                beta_log10: beta.log10(),
                gamma: min_cap as usize,
                gamma_precondition_met: min_cap >= 1,
                feasible,
                xi: None,
                zeta: None,
                tau_b: None,
                nu: None,
            })
        }
        Algorithm::A3 | Algorithm::A4 => Err(OracleError::NoGuarantee { algorithm }),
    }
}

/// Exhaustive extreme-point reference for the optimum interval, kept
/// deliberately independent of the greedy route: it enumerates every
/// gamma-subset of N and every residual receiver in the support.
pub mod reference {
    use super::*;

    fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        if items.len() < k {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (pos, &head) in items.iter().enumerate() {
            for mut tail in subsets(&items[pos + 1..], k - 1) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    /// Brute-force optimum interval over all extreme points.
    pub fn brute_force_interval(
        costs: &CostFamily,
        nf: &BTreeSet<usize>,
        params: &ValidFamilyParams,
        constraint: Option<&ConstraintInterval>,
    ) -> Result<OptimumInterval, OracleError> {
        if !costs.all_unit_curvature() {
            return Err(OracleError::CurvatureUnsupported);
        }
        params.check(nf.len())?;
        let sup = support(params.mode, nf, costs.len());
        let nf_list: Vec<usize> = nf.iter().copied().collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for subset in subsets(&nf_list, params.gamma) {
            for &receiver in &sup {
                let v = combo_value(costs, &subset, receiver, params.beta);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let (lo, hi) = clip(lo, hi, constraint);
        Ok(OptimumInterval {
            lo,
            hi,
            beta: params.beta,
            gamma: params.gamma,
            mode: params.mode,
            exact: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nfset(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn interval_examples() {
        let costs = CostFamily::from_centers(&[0.0, 1.0, 2.0]);
        let n123 = nfset(&[1, 2, 3]);

        let p = ValidFamilyParams { beta: 0.2, gamma: 2, mode: FaultMode::Byzantine };
        let iv = optimum_interval(&costs, &n123, &p, None).unwrap();
        assert!((iv.lo - 0.2).abs() < 1e-15);
        assert!((iv.hi - 1.8).abs() < 1e-15);

        let p = ValidFamilyParams { beta: 1.0 / 3.0, gamma: 3, mode: FaultMode::Byzantine };
        let iv = optimum_interval(&costs, &n123, &p, None).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-12);
        assert!((iv.hi - 1.0).abs() < 1e-12);

        let p = ValidFamilyParams { beta: 1.0, gamma: 1, mode: FaultMode::Byzantine };
        let iv = optimum_interval(&costs, &n123, &p, None).unwrap();
        assert_eq!((iv.lo, iv.hi), (0.0, 2.0));

        // Constrained case where the whole interval sits left of X.
        let p = ValidFamilyParams { beta: 0.2, gamma: 2, mode: FaultMode::Byzantine };
        let x = ConstraintInterval::new(2.0, 5.0).unwrap();
        let iv = optimum_interval(&costs, &n123, &p, Some(&x)).unwrap();
        assert_eq!((iv.lo, iv.hi), (2.0, 2.0));
    }

    #[test]
    fn greedy_matches_brute_force() {
        let centers = [0.0, 1.5, 1.5, 3.0, -2.0];
        let costs = CostFamily::from_centers(&centers);
        let n = nfset(&[1, 2, 3, 4]);
        for mode in [FaultMode::Byzantine, FaultMode::Crash] {
            for gamma in 0..=4usize {
                for beta in [0.1, 0.2, 0.25] {
                    if beta * gamma as f64 > 1.0 {
                        continue;
                    }
                    let p = ValidFamilyParams { beta, gamma, mode };
                    let a = optimum_interval(&costs, &n, &p, None).unwrap();
                    let b = reference::brute_force_interval(&costs, &n, &p, None).unwrap();
                    assert_eq!((a.lo, a.hi), (b.lo, b.hi), "{mode:?} gamma={gamma} beta={beta}");
                }
            }
        }
    }

    #[test]
    fn crash_mode_residual_may_sit_on_faulty_center() {
        // Faulty agent 3 holds the smallest center; the crash family may
        // weight it, the Byzantine family may not.
        let costs = CostFamily::from_centers(&[1.0, 2.0, -5.0]);
        let n12 = nfset(&[1, 2]);
        let p = ValidFamilyParams { beta: 0.1, gamma: 1, mode: FaultMode::Crash };
        let iv = optimum_interval(&costs, &n12, &p, None).unwrap();
        assert!((iv.lo - (0.1 * 1.0 + 0.9 * -5.0)).abs() < 1e-12);
        let p = ValidFamilyParams { beta: 0.1, gamma: 1, mode: FaultMode::Byzantine };
        let iv = optimum_interval(&costs, &n12, &p, None).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights_predicate_examples() {
        let n123 = nfset(&[1, 2, 3]);
        let p = ValidFamilyParams { beta: 1.0 / 3.0, gamma: 3, mode: FaultMode::Byzantine };
        let u = vec![1.0 / 3.0; 3];
        assert!(is_valid_weights(&u, &p, &n123));

        let n12 = nfset(&[1, 2]);
        let p = ValidFamilyParams { beta: 0.1, gamma: 1, mode: FaultMode::Byzantine };
        let pointmass_faulty = vec![0.0, 0.0, 1.0];
        assert!(!is_valid_weights(&pointmass_faulty, &p, &n12));

        let p = ValidFamilyParams { beta: 0.2, gamma: 2, mode: FaultMode::Byzantine };
        assert!(is_valid_weights(&[0.2, 0.2, 0.6], &p, &n123));
    }

    #[test]
    fn sampler_outputs_are_valid() {
        let n123 = nfset(&[1, 2, 3]);
        let p = ValidFamilyParams { beta: 1.0 / 3.0, gamma: 3, mode: FaultMode::Byzantine };
        let ws = sample_valid_weights(&p, &n123, 3, 50, 11).unwrap();
        assert_eq!(ws.len(), 50);
        for w in &ws {
            assert!(is_valid_weights(w, &p, &n123));
            // Tight constraint: near-uniform vectors only.
            for &a in w {
                assert!(a >= 1.0 / 3.0 - 1e-9);
            }
        }
        assert!(sample_valid_weights(&p, &n123, 3, 0, 11).unwrap().is_empty());
    }

    #[test]
    fn membership_examples() {
        let iv = OptimumInterval {
            lo: 0.2,
            hi: 1.8,
            beta: 0.2,
            gamma: 2,
            mode: FaultMode::Byzantine,
            exact: true,
        };
        assert!(membership(1.0, &iv, 0.0));
        assert!(!membership(1.81, &iv, 1e-3));
        assert!(membership(1.8009, &iv, 1e-3));
    }

    #[test]
    fn guarantee_examples() {
        // Gradient-pair trimmed algorithm on K5 with one realized fault.
        let k5 = DirectedGraph::complete(5);
        let rep = guarantee_params(&k5, &nfset(&[5]), 1, Algorithm::A2, 1 << 20).unwrap();
        assert!((rep.beta - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(rep.gamma, 3);
        assert!(rep.feasible);
        assert!(rep.gamma_precondition_met);

        // Trimmed-mean algorithm on K4 with one realized fault.
        let k4 = DirectedGraph::complete(4);
        let rep = guarantee_params(&k4, &nfset(&[4]), 1, Algorithm::A1, 1 << 20).unwrap();
        assert_eq!(rep.xi, Some(0.25));
        assert_eq!(rep.tau_b, Some(27));
        assert_eq!(rep.nu, Some(81));
        assert_eq!(rep.gamma, 2);
        let expected_log10 = 81.0 * 0.25f64.log10();
        assert!((rep.beta_log10 - expected_log10).abs() < 1e-9);

        // Pair-exchange crash algorithm with an empty realized fault set.
        let rep = guarantee_params(&k4, &BTreeSet::new(), 1, Algorithm::A6, 1 << 20).unwrap();
        assert!((rep.beta - 0.25).abs() < 1e-15);
        assert_eq!(rep.gamma, 4);

        assert!(matches!(
            guarantee_params(&k4, &BTreeSet::new(), 1, Algorithm::A3, 1 << 20),
            Err(OracleError::NoGuarantee { .. })
        ));
    }

    #[test]
    fn invalid_params_rejected() {
        let costs = CostFamily::from_centers(&[0.0, 1.0]);
        let n12 = nfset(&[1, 2]);
        let p = ValidFamilyParams { beta: 0.8, gamma: 2, mode: FaultMode::Byzantine };
        assert!(matches!(
            optimum_interval(&costs, &n12, &p, None),
            Err(OracleError::InvalidParams(_))
        ));
        let p = ValidFamilyParams { beta: 0.1, gamma: 3, mode: FaultMode::Byzantine };
        assert!(matches!(
            optimum_interval(&costs, &n12, &p, None),
            Err(OracleError::InvalidParams(_))
        ));
        let nonunit = CostFamily::new(vec![
            crate::objective::QuadraticCost::new(0.0, 2.0).unwrap(),
            crate::objective::QuadraticCost::new(1.0, 1.0).unwrap(),
        ]);
        let p = ValidFamilyParams { beta: 0.1, gamma: 1, mode: FaultMode::Byzantine };
        assert!(matches!(
            optimum_interval(&nonunit, &n12, &p, None),
            Err(OracleError::CurvatureUnsupported)
        ));
    }
}
