//! Damped Gauss-Newton inversion of multiconfiguration EMI readings for the
//! layer conductivities.
//!
//! Each iteration linearizes the forward map, stacks real and imaginary
//! parts into a real system, and solves for the step with the truncated GSVD
//! of the (Jacobian, operator) pair. The truncation level is re-selected
//! every iteration by the discrepancy principle, the L-curve corner, or kept
//! fixed. An Armijo backtracking line search enforces both descent of the
//! data misfit and positivity of the conductivities. Several start models
//! can be run; the result with the smallest final misfit wins.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::forward::{forward_response, forward_with_jacobian, ForwardError};
use crate::model::{DataVector, DeviceConfig, LayeredEarthModel, ModelError};
use crate::regularization::{
    gsvd, reg_d1, reg_d2, reg_identity, tgsvd_solve, weighted_rows, GsvdFactors, RegError,
};

/// Stabilizer choice for the Gauss-Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegKind {
    /// Zeroth order (identity).
    Identity,
    /// First differences.
    D1,
    /// Second differences.
    D2,
    /// Minimum gradient support: first differences reweighted at each
    /// iteration to focus the penalty on flat regions, sharpening interfaces.
    Mgs { tau: f64 },
}

/// Rule for picking the truncation level each iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamRule {
    /// Smallest level whose predicted misfit drops below
    /// `varsigma * delta * ||b||`, with `delta` the relative noise level.
    Discrepancy { delta: f64, varsigma: f64 },
    /// Corner of the (misfit, seminorm) curve over all levels.
    LCurve,
    /// Always use the given level (clamped to the usable rank).
    Fixed(usize),
}

/// Which part of the complex readings enters the misfit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataMode {
    /// Real and imaginary parts stacked.
    Complex,
    /// Imaginary (quadrature) part only.
    QuadratureOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionConfig {
    pub reg: RegKind,
    pub rule: ParamRule,
    pub mode: DataMode,
    pub max_iters: usize,
    /// Relative step-size tolerance on the model update.
    pub tol_sigma: f64,
    /// Relative misfit stagnation tolerance, measured over
    /// `stagnation_window` iterations.
    pub tol_residual: f64,
    pub stagnation_window: usize,
    /// Backtracking factor of the line search.
    pub beta: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo_c: f64,
    pub max_backtracks: usize,
    /// Extra MGS focusing iterations allowed after the discrepancy target is
    /// met; within this budget the truncation ladder may keep escalating so
    /// the reweighting can carve sharp transitions. Ignored for non-MGS
    /// stabilizers.
    pub focus_iters: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            reg: RegKind::D2,
            rule: ParamRule::LCurve,
            mode: DataMode::Complex,
            max_iters: 50,
            tol_sigma: 1e-3,
            tol_residual: 1e-4,
            stagnation_window: 3,
            beta: 0.5,
            armijo_c: 1e-4,
            max_backtracks: 40,
            focus_iters: 0,
        }
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Relative model update fell below `tol_sigma`.
    SmallStep,
    /// Misfit stopped improving over the stagnation window.
    ResidualStagnation,
    /// Misfit reached the target noise level (discrepancy principle), or the
    /// data are fit to machine precision.
    DiscrepancyReached,
    /// Iteration budget exhausted.
    MaxIterations,
    /// Line search could not find an acceptable positive step.
    LineSearchStalled,
}

impl StopReason {
    /// Whether the stop counts as convergence.
    pub fn converged(self) -> bool {
        matches!(
            self,
            StopReason::SmallStep | StopReason::ResidualStagnation | StopReason::DiscrepancyReached
        )
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Misfit norm before the step.
    pub residual_norm: f64,
    /// Truncation level used.
    pub ell: usize,
    /// True when the selection rule fell back to a default level.
    pub ell_fallback: bool,
    /// Accepted step length.
    pub alpha: f64,
    /// Norm of the accepted model update.
    pub step_norm: f64,
}

#[derive(Debug, Clone)]
pub struct InversionResult {
    pub model: LayeredEarthModel,
    /// Final stacked misfit norm.
    pub residual_norm: f64,
    pub stop: StopReason,
    pub iterations: Vec<IterationRecord>,
    /// Which start model produced this result.
    pub start_index: usize,
    /// Under the L-curve rule, the (misfit, seminorm) point of every
    /// exhausted regularization level; empty otherwise.
    pub lcurve: Vec<(f64, f64)>,
}

#[derive(Debug)]
pub enum InvError {
    Forward(ForwardError),
    Reg(RegError),
    Model(ModelError),
    DataLengthMismatch { data: usize, expected: usize },
    NoStarts,
}

impl fmt::Display for InvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvError::Forward(e) => write!(f, "forward model failed: {e}"),
            InvError::Reg(e) => write!(f, "regularized solve failed: {e}"),
            InvError::Model(e) => write!(f, "invalid model: {e}"),
            InvError::DataLengthMismatch { data, expected } => {
                write!(f, "{data} readings given, device produces {expected}")
            }
            InvError::NoStarts => write!(f, "at least one start model is required"),
        }
    }
}

impl core::error::Error for InvError {}

impl From<ForwardError> for InvError {
    fn from(e: ForwardError) -> Self {
        InvError::Forward(e)
    }
}
impl From<RegError> for InvError {
    fn from(e: RegError) -> Self {
        InvError::Reg(e)
    }
}
impl From<ModelError> for InvError {
    fn from(e: ModelError) -> Self {
        InvError::Model(e)
    }
}

/// Stacks complex values into the real data vector of the active mode.
pub fn stack_mode(values: &[Complex64], mode: DataMode) -> DVector<f64> {
    match mode {
        DataMode::Complex => crate::model::stack(values),
        DataMode::QuadratureOnly => DVector::from_fn(values.len(), |i, _| values[i].im),
    }
}

/// Stacks a complex Jacobian the same way as [`stack_mode`].
pub fn stack_jacobian(jac: &DMatrix<Complex64>, mode: DataMode) -> DMatrix<f64> {
    let (m, n) = jac.shape();
    match mode {
        DataMode::Complex => DMatrix::from_fn(2 * m, n, |r, c| {
            if r < m {
                jac[(r, c)].re
            } else {
                jac[(r - m, c)].im
            }
        }),
        DataMode::QuadratureOnly => DMatrix::from_fn(m, n, |r, c| jac[(r, c)].im),
    }
}

/// Base smoothing operator for a stabilizer on `n` parameters.
pub fn base_operator(reg: RegKind, n: usize) -> Result<DMatrix<f64>, RegError> {
    match reg {
        RegKind::Identity => Ok(reg_identity(n)),
        RegKind::D1 | RegKind::Mgs { .. } => reg_d1(n),
        RegKind::D2 => reg_d2(n),
    }
}

/// Projection coefficients `u_i . (-r)` over all directions; everything the
/// selection rules need can be formed from these.
struct BandCoeffs {
    beta: Vec<f64>,
    /// `|| r ||^2` minus the contribution of the always-kept null-space part.
    base_res2: f64,
    p: usize,
    max_ell: usize,
}

fn band_coeffs(factors: &GsvdFactors, r: &DVector<f64>) -> BandCoeffs {
    let n = factors.n();
    let p = factors.p;
    let mut beta = alloc::vec![0.0; n];
    let mut base_res2 = r.norm_squared();
    for i in 0..n {
        beta[i] = -factors.u.column(i).dot(r);
        if i >= p {
            base_res2 -= beta[i] * beta[i];
        }
    }
    BandCoeffs {
        beta,
        base_res2: base_res2.max(0.0),
        p,
        max_ell: factors.max_ell,
    }
}

impl BandCoeffs {
    /// Predicted linearized misfit `|| J q_ell + r ||` at truncation `ell`.
    fn residual_at(&self, ell: usize) -> f64 {
        let mut res2 = self.base_res2;
        for i in (self.p - ell)..self.p {
            res2 -= self.beta[i] * self.beta[i];
        }
        res2.max(0.0).sqrt()
    }
}

/// Discrepancy-principle level: smallest `ell` (0 allowed) whose linearized
/// misfit `|| J q_ell + r ||` falls below `threshold`; falls back to the
/// full usable rank (flag set) when no level reaches it. The misfit is
/// evaluated densely rather than through the projection identity, which is
/// numerically over-optimistic for directions with tiny generalized
/// singular values.
pub fn select_ell_discrepancy(
    factors: &GsvdFactors,
    jac: &DMatrix<f64>,
    r: &DVector<f64>,
    threshold: f64,
) -> (usize, bool) {
    let bc = band_coeffs(factors, r);
    // null-space part, kept at every level
    let mut q = DVector::zeros(factors.n());
    for i in bc.p..factors.n() {
        q.axpy(bc.beta[i], &factors.z.column(i).into_owned(), 1.0);
    }
    for ell in 0..=bc.max_ell {
        if ell > 0 {
            let i = bc.p - ell;
            q.axpy(bc.beta[i] / factors.c[i], &factors.z.column(i).into_owned(), 1.0);
        }
        if (jac * &q + r).norm() <= threshold {
            return (ell, false);
        }
    }
    (bc.max_ell.max(1), true)
}

/// L-curve corner over the usable truncation levels: the point of largest
/// curvature of the log-log (misfit, seminorm) curve. Degenerate curves
/// (fewer than three usable points, or no corner) fall back to `ell = 1`
/// with the flag set.
pub fn select_ell_lcurve(factors: &GsvdFactors, r: &DVector<f64>) -> (usize, bool) {
    let bc = band_coeffs(factors, r);
    let mut pts: Vec<(usize, f64, f64)> = Vec::new();
    let mut semi2 = 0.0;
    for ell in 1..=bc.max_ell {
        let i = bc.p - ell;
        let coeff = bc.beta[i] / factors.c[i];
        semi2 += (coeff * factors.s[i]) * (coeff * factors.s[i]);
        let res = bc.residual_at(ell);
        if res > 0.0 && semi2 > 0.0 {
            let (x, y) = (res.ln(), (0.5 * semi2.ln()));
            // keep the curve monotone: misfit down, seminorm up
            if pts
                .last()
                .map(|&(_, px, py)| x < px && y >= py)
                .unwrap_or(true)
            {
                pts.push((ell, x, y));
            }
        }
    }
    match corner_point(&pts) {
        Some(ell) => (ell, false),
        None => (1, true),
    }
}

/// Sharpest clockwise corner of a log-log (misfit, seminorm) curve given as
/// `(tag, ln res, ln semi)` points; `None` when the curve is degenerate.
fn corner_point(pts: &[(usize, f64, f64)]) -> Option<usize> {
    if pts.len() < 3 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for w in pts.windows(3) {
        let (_, x0, y0) = w[0];
        let (tag, x1, y1) = w[1];
        let (_, x2, y2) = w[2];
        let cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1);
        // the corner turns clockwise in these coordinates
        if cross < 0.0 {
            let a = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
            let b = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
            let c = ((x2 - x0).powi(2) + (y2 - y0).powi(2)).sqrt();
            let denom = a * b * c;
            if denom > 0.0 {
                let kappa = 2.0 * cross.abs() / denom;
                if best.map(|(_, k)| kappa > k).unwrap_or(true) {
                    best = Some((tag, kappa));
                }
            }
        }
    }
    best.map(|(tag, _)| tag)
}

/// A ladder of homogeneous start models around 0.07 S/m on the given grid,
/// spread geometrically: 0.07, 0.07/4, 0.07*4, 0.07/16, ...
pub fn default_starts(grid: &LayeredEarthModel, count: usize) -> Vec<LayeredEarthModel> {
    let n = grid.layer_count();
    (0..count.max(1))
        .map(|k| {
            let exp = (k as i32 + 1) / 2;
            let sign = if k % 2 == 1 { -1 } else { 1 };
            let sigma = 0.07 * 4f64.powi(sign * exp);
            grid.with_sigma(alloc::vec![sigma; n]).expect("positive start")
        })
        .collect()
}

fn misfit(
    grid: &LayeredEarthModel,
    sigma: &DVector<f64>,
    device: &DeviceConfig,
    b: &DVector<f64>,
    mode: DataMode,
) -> Result<f64, InvError> {
    let model = grid.with_sigma(sigma.iter().copied().collect())?;
    let vals = forward_response(&model, device)?;
    let r = stack_mode(&vals, mode) - b;
    Ok(0.5 * r.norm_squared())
}

const FOCUS_GATE: f64 = 2.0;

fn invert_from(
    data_stacked: &DVector<f64>,
    device: &DeviceConfig,
    start: &LayeredEarthModel,
    cfg: &InversionConfig,
    start_index: usize,
) -> Result<InversionResult, InvError> {
    let n = start.layer_count();
    let base_l = base_operator(cfg.reg, n)?;
    let b_norm = data_stacked.norm();

    let mut sigma = DVector::from_column_slice(start.sigma());
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut res_history: Vec<f64> = Vec::new();
    let mut stop = StopReason::MaxIterations;
    let mut final_res = f64::NAN;
    // the iteration moves through a ladder of progressively weaker
    // regularization: `ladder` is the strongest truncation level granted so
    // far and `floor` the weakest one already exhausted. Both rise whenever
    // the iteration settles (small step, stagnation, stalled line search)
    // while the misfit is still above the noise target, because linearized
    // misfit predictions over-promise far from the solution
    let mut ladder: usize = 1;
    let mut floor: usize = 0;
    let mut last_escalation: usize = 0;
    let mut target_met = false;
    let mut met_at = 0usize;
    let mut prev_q: Option<DVector<f64>> = None;
    // (misfit, seminorm, model, reason) at every exhausted ladder level;
    // used by the L-curve rule to pick the corner iterate afterwards
    let mut snaps: Vec<(f64, f64, DVector<f64>, StopReason)> = Vec::new();
    let start_vec = DVector::from_column_slice(start.sigma());
    let seminorm = |s: &DVector<f64>| (&base_l * (s - &start_vec)).norm();

    for iter in 0..cfg.max_iters {
        let model = start.with_sigma(sigma.iter().copied().collect())?;
        let (vals, jac_c) = forward_with_jacobian(&model, device)?;
        let r = stack_mode(&vals, cfg.mode) - data_stacked;
        let jac = stack_jacobian(&jac_c, cfg.mode);
        let res_norm = r.norm();
        final_res = res_norm;

        // the discrepancy principle also terminates the outer iteration:
        // fitting below the noise level only fits noise. MGS runs keep
        // iterating at the reached level until the reweighting settles, so
        // the focusing can develop; the stop is still reported as the
        // discrepancy stop
        let target = match cfg.rule {
            ParamRule::Discrepancy { delta, varsigma } => varsigma * delta * b_norm,
            _ => 0.0,
        };
        if res_norm <= target.max(1e-13 * b_norm) {
            if !target_met {
                target_met = true;
                met_at = iter;
            }
            if !matches!(cfg.reg, RegKind::Mgs { .. }) {
                stop = StopReason::DiscrepancyReached;
                break;
            }
        }

        // stabilizer for this iteration; MGS reweights around the update
        // accumulated so far, starting from the plain smooth operator
        let reweight = |qp: &DVector<f64>, tau: f64| {
            let mut d = crate::regularization::mgs_weights(qp, &base_l, tau);
            // the solve is invariant under scaling of L; normalizing the
            // weights keeps the stacked QR well conditioned even when
            // clamped components blow individual weights up
            let dmax = d.iter().fold(0.0f64, |a, &v| a.max(v));
            if dmax > 0.0 {
                d /= dmax;
            }
            weighted_rows(&base_l, &d)
        };
        // the reweighting starts once the smooth structure is essentially in
        // place (misfit near the target), so the focusing sharpens converged
        // features instead of locking onto an early compact iterate; without
        // a noise target, exhaustion of the first ladder level is the cue
        let focusing = if target > 0.0 {
            res_norm <= FOCUS_GATE * target
        } else {
            ladder > 1
        };
        let l = match (cfg.reg, prev_q.as_ref().filter(|_| focusing)) {
            (RegKind::Mgs { tau }, Some(qp)) => {
                // iterate the weights to a fixed point of the linearized
                // step, so the focusing develops at the pace of the outer
                // iteration instead of lagging one step behind
                let mut lw = reweight(qp, tau);
                for _ in 0..1 {
                    let f = gsvd(&jac, &lw)?;
                    let ell = ladder.min(f.max_ell).max(1);
                    let q = tgsvd_solve(&f, &(-&r), ell)?;
                    lw = reweight(&(qp + &q), tau);
                }
                lw
            }
            _ => base_l.clone(),
        };
        let factors = gsvd(&jac, &l)?;

        // truncation level for this iteration: the selection rule may pick a
        // level below the ladder while it still makes progress, but never one
        // already exhausted (below the floor) and never above the ladder. The
        // MGS focusing phase and the L-curve rule run at the ladder outright.
        let (sel, ell_fallback, cap) = match cfg.rule {
            ParamRule::Discrepancy { delta, varsigma } => {
                let (sel, fallback) =
                    select_ell_discrepancy(&factors, &jac, &r, varsigma * delta * b_norm);
                let sel = (!fallback && !target_met).then_some(sel);
                (sel, fallback, factors.max_ell)
            }
            ParamRule::LCurve => {
                // the ladder climbs the whole band; every exhausted level is
                // snapshotted and the corner of the resulting (misfit,
                // seminorm) curve picks the returned iterate afterwards
                let (_, degenerate) = select_ell_lcurve(&factors, &r);
                (None, degenerate, factors.max_ell)
            }
            ParamRule::Fixed(ell) => (Some(ell.max(1)), ell > factors.max_ell, 0),
        };
        let fixed = matches!(cfg.rule, ParamRule::Fixed(_));
        let compute_ell = |ladder: usize, floor: usize| match sel {
            // a fixed level is honored outright, not run through the ladder
            Some(s) if fixed => s.min(factors.max_ell).max(1),
            Some(s) => s.max(1).min(ladder).max(floor).min(factors.max_ell),
            None => ladder.min(factors.max_ell),
        };
        let mut ell = compute_ell(ladder, floor);

        // under the L-curve rule the climb stops once weaker regularization
        // has stopped paying: three levels in a row without a 2% improvement
        // of the best misfit seen before them
        let saturated = matches!(cfg.rule, ParamRule::LCurve) && snaps.len() > 3 && {
            let best = snaps[..snaps.len() - 3]
                .iter()
                .map(|s| s.0)
                .fold(f64::INFINITY, f64::min);
            snaps[snaps.len() - 3..].iter().all(|s| s.0 > 0.98 * best)
        };

        // an escalation marks every level up to the one that stalled as
        // exhausted and grants at least one more; the MGS focusing phase is
        // plain reweighting at the level that reached the target
        // after the target is met, only an MGS run inside its focusing
        // budget may keep strengthening the ladder; anything else would
        // chase noise
        let can_escalate = (!target_met
            || (matches!(cfg.reg, RegKind::Mgs { .. }) && iter < met_at + cfg.focus_iters))
            && !saturated;
        let escalate = |ladder: &mut usize, floor: &mut usize, ell: usize| -> bool {
            let new_floor = ell + 1;
            let new_ladder = (*ladder).max(new_floor);
            if can_escalate && new_ladder <= cap.min(factors.max_ell) {
                *floor = new_floor;
                *ladder = new_ladder;
                true
            } else {
                false
            }
        };

        // misfit stagnation over the trailing window; each escalated level
        // gets a full window before it is judged again
        res_history.push(res_norm);
        let w = cfg.stagnation_window;
        if iter >= w && iter >= last_escalation + w {
            let old = res_history[iter - w];
            if (old - res_norm).abs() <= cfg.tol_residual * old {
                if escalate(&mut ladder, &mut floor, ell) {
                    if matches!(cfg.rule, ParamRule::LCurve) {
                        snaps.push((
                            res_norm,
                            seminorm(&sigma),
                            sigma.clone(),
                            StopReason::ResidualStagnation,
                        ));
                    }
                    last_escalation = iter;
                    ell = compute_ell(ladder, floor);
                } else if !target_met {
                    // during MGS focusing the misfit holds at the noise
                    // level by design; a flat misfit is not a stop there
                    stop = StopReason::ResidualStagnation;
                    break;
                }
            }
        }

        let q = tgsvd_solve(&factors, &(-&r), ell)?;

        // Armijo backtracking with positivity of the trial model
        let f0 = 0.5 * res_norm * res_norm;
        let g = r.dot(&(&jac * &q));
        if g >= 0.0 {
            if escalate(&mut ladder, &mut floor, ell) {
                if matches!(cfg.rule, ParamRule::LCurve) {
                    snaps.push((
                        res_norm,
                        seminorm(&sigma),
                        sigma.clone(),
                        StopReason::LineSearchStalled,
                    ));
                }
                last_escalation = iter;
                continue;
            }
            stop = StopReason::LineSearchStalled;
            break;
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let trial = &sigma + &q * alpha;
            if trial.iter().any(|&v| v <= 0.0) {
                alpha *= cfg.beta;
                continue;
            }
            let f = misfit(start, &trial, device, data_stacked, cfg.mode)?;
            if f <= f0 + cfg.armijo_c * alpha * g {
                accepted = Some((trial, f));
                break;
            }
            alpha *= cfg.beta;
        }
        let Some((next, f_next)) = accepted else {
            if escalate(&mut ladder, &mut floor, ell) {
                if matches!(cfg.rule, ParamRule::LCurve) {
                    snaps.push((
                        res_norm,
                        seminorm(&sigma),
                        sigma.clone(),
                        StopReason::LineSearchStalled,
                    ));
                }
                last_escalation = iter;
                continue;
            }
            stop = StopReason::LineSearchStalled;
            break;
        };

        let step_norm = (&next - &sigma).norm();
        records.push(IterationRecord {
            iter,
            residual_norm: res_norm,
            ell,
            ell_fallback,
            alpha,
            step_norm,
        });
        sigma = next;
        final_res = (2.0 * f_next).sqrt();
        // the MGS weights are evaluated on the model itself: its image under
        // the first-difference operator is the model gradient, which for a
        // constant start equals the gradient of the accumulated update
        prev_q = Some(sigma.clone());

        if step_norm <= cfg.tol_sigma * sigma.norm() {
            if escalate(&mut ladder, &mut floor, ell) {
                if matches!(cfg.rule, ParamRule::LCurve) {
                    snaps.push((
                        final_res,
                        seminorm(&sigma),
                        sigma.clone(),
                        StopReason::SmallStep,
                    ));
                }
                last_escalation = iter;
            } else {
                stop = StopReason::SmallStep;
                break;
            }
        }
    }

    if target_met {
        stop = StopReason::DiscrepancyReached;
    }

    // under the L-curve rule the returned iterate is the corner of the
    // per-level (misfit, seminorm) curve: on its Pareto frontier, the point
    // closest to the utopia point (best misfit, best seminorm) in normalized
    // log-log coordinates
    let mut lcurve = Vec::new();
    if matches!(cfg.rule, ParamRule::LCurve) {
        snaps.push((final_res, seminorm(&sigma), sigma.clone(), stop));
        lcurve = snaps.iter().map(|(r, s, _, _)| (*r, *s)).collect();
        let dominated = |i: usize| {
            snaps.iter().enumerate().any(|(j, s)| {
                j != i
                    && s.0 <= snaps[i].0
                    && s.1 <= snaps[i].1
                    && (s.0 < snaps[i].0 || s.1 < snaps[i].1)
            })
        };
        let pts: Vec<(usize, f64, f64)> = snaps
            .iter()
            .enumerate()
            .filter(|(i, (res, semi, _, _))| *res > 0.0 && *semi > 0.0 && !dominated(*i))
            .map(|(i, (res, semi, _, _))| (i, res.ln(), semi.ln()))
            .collect();
        let (xlo, xhi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| {
            (a.0.min(p.1), a.1.max(p.1))
        });
        let (ylo, yhi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| {
            (a.0.min(p.2), a.1.max(p.2))
        });
        let corner = pts
            .iter()
            .map(|&(i, x, y)| {
                let nx = if xhi > xlo { (x - xlo) / (xhi - xlo) } else { 0.0 };
                let ny = if yhi > ylo { (y - ylo) / (yhi - ylo) } else { 0.0 };
                (i, nx * nx + ny * ny)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i);
        if let Some(i) = corner {
            let (res, _, model, reason) = snaps.swap_remove(i);
            sigma = model;
            final_res = res;
            stop = reason;
        }
    }

    Ok(InversionResult {
        model: start.with_sigma(sigma.iter().copied().collect())?,
        residual_norm: final_res,
        stop,
        iterations: records,
        start_index,
        lcurve,
    })
}

/// Inverts one sounding from each start model and returns the run with the
/// smallest final misfit.
pub fn invert_sounding(
    data: &DataVector,
    device: &DeviceConfig,
    starts: &[LayeredEarthModel],
    cfg: &InversionConfig,
) -> Result<InversionResult, InvError> {
    if starts.is_empty() {
        return Err(InvError::NoStarts);
    }
    if data.len() != device.reading_count() {
        return Err(InvError::DataLengthMismatch {
            data: data.len(),
            expected: device.reading_count(),
        });
    }
    let b = stack_mode(data, cfg.mode);
    let mut best: Option<InversionResult> = None;
    for (k, start) in starts.iter().enumerate() {
        let result = invert_from(&b, device, start, cfg, k)?;
        let better = best
            .as_ref()
            .map(|b| result.residual_norm < b.residual_norm)
            .unwrap_or(true);
        if better {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one start"))
}

/// Inverts a lateral section column by column; each column is an independent
/// sounding over the same device and start models. A failed column does not
/// abort the others.
pub fn invert_section(
    columns: &[DataVector],
    device: &DeviceConfig,
    starts: &[LayeredEarthModel],
    cfg: &InversionConfig,
) -> Vec<Result<InversionResult, InvError>> {
    columns
        .iter()
        .map(|data| invert_sounding(data, device, starts, cfg))
        .collect()
}
