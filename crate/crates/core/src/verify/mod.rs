//! End-to-end verification runs: catalog potential in μ(x) plus the
//! ordering correction, refined spectrum, inversion of the energy formula
//! and invariance harnesses.

pub mod algebra_check;
pub mod export;

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::catalog::{extended_f64, extended_pair, make_potential, Params, PotentialId, PotentialModel, ValueType};
use crate::error::{Result, SgaError};
use crate::mass::{MassProfile, ProfileDescriptor};
use crate::sga::u_eff;
use crate::solver::{refine, Grid, GridInfo, OrderingParams, PotentialOnGrid, SpectrumReport};

pub const SCHEMA: &str = "sga-report/1";

/// Relative spacing deviation below which λ_n counts as affine in n.
pub const AFFINE_TOL: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub id: PotentialId,
    pub params: Params,
    pub profile: MassProfile,
    pub ordering: OrderingParams,
    /// Explicit x grid; when absent the grid spans `mu_window` with `n`
    /// interior points.
    pub grid: Option<Grid>,
    pub n: usize,
    pub k: usize,
    pub mu_window: Option<(f64, f64)>,
    pub check_orderings: bool,
    pub boundary_check: bool,
}

impl VerifyRequest {
    pub fn new(id: PotentialId, params: Params, profile: MassProfile) -> Self {
        Self {
            id,
            params,
            profile,
            ordering: OrderingParams::BEN_DANIEL_DUKE,
            grid: None,
            n: 2000,
            k: 5,
            mu_window: None,
            check_orderings: false,
            boundary_check: true,
        }
    }

    pub fn with_ordering(mut self, o: OrderingParams) -> Self {
        self.ordering = o;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_mu_window(mut self, lo: f64, hi: f64) -> Self {
        self.mu_window = Some((lo, hi));
        self
    }

    pub fn with_profile(mut self, p: MassProfile) -> Self {
        self.profile = p;
        self
    }

    pub fn without_boundary_check(mut self) -> Self {
        self.boundary_check = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingStats {
    pub mean: f64,
    pub max_deviation: f64,
    pub relative_deviation: f64,
    pub uniform: bool,
}

/// label_n ≈ intercept + slope · n by least squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFit {
    pub intercept: f64,
    pub slope: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerSpacingCheck {
    pub expected_step: f64,
    pub measured_step: f64,
    pub ratio: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub n: usize,
    pub label_fit: f64,
    pub formula_e: f64,
    pub numeric_e: f64,
    pub relative_deviation: f64,
}

/// Mean level spacing against the catalog's spacing (oscillator only).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSpacing {
    pub fitted_spacing: f64,
    pub formula_spacing: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub potential_id: PotentialId,
    pub params: Params,
    pub profile: ProfileDescriptor,
    pub ordering: OrderingParams,
    pub grid: GridInfo,
    #[serde(with = "extended_pair")]
    pub mu_window: (f64, f64),
    pub correction: String,
    #[serde(with = "extended_f64")]
    pub bound_threshold: f64,
    #[serde(rename = "numeric_E")]
    pub numeric_e: Vec<f64>,
    #[serde(rename = "E_error")]
    pub e_error: Vec<f64>,
    pub bound: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag_parts: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_imag: Option<f64>,
    pub label: String,
    pub lambda_inverted: Vec<Option<f64>>,
    pub spacing_stats: Option<SpacingStats>,
    pub affine_fit: Option<AffineFit>,
    pub integer_spacing: Option<IntegerSpacingCheck>,
    pub formula_check: Vec<FormulaCheck>,
    pub level_spacing: Option<LevelSpacing>,
    pub invariance_results: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

impl VerificationReport {
    /// Bound-state energies with their error estimates.
    pub fn bound_levels(&self) -> Vec<(f64, f64)> {
        self.numeric_e
            .iter()
            .zip(&self.e_error)
            .zip(&self.bound)
            .filter(|(_, b)| **b)
            .map(|((e, d), _)| (*e, *d))
            .collect()
    }

    pub fn labels(&self) -> Vec<f64> {
        self.lambda_inverted.iter().flatten().copied().collect()
    }
}

/// x grid spanning a μ window for a given profile.
pub fn grid_for_window(profile: &MassProfile, model: &PotentialModel, (lo, hi): (f64, f64), n: usize) -> Result<Grid> {
    let d = model.mu_domain;
    if !(lo < hi) || lo < d.lo || hi > d.hi || (model.is_half_line() && lo <= 0.0) {
        return Err(SgaError::Config(format!(
            "mu window [{lo}, {hi}] is not inside the {} domain ({}, {})",
            model.id, d.lo, d.hi
        )));
    }
    if !profile.covers(lo, hi) {
        let (a, b) = profile.mu_image();
        return Err(SgaError::Config(format!(
            "profile mu-image ({a}, {b}) does not cover the mu window [{lo}, {hi}]; move the anchor"
        )));
    }
    Grid::new(profile.mu_inverse(lo)?, profile.mu_inverse(hi)?, n)
}

/// V_catalog(μ(x)) + 𝒰_eff(x) on the interior nodes.
pub fn total_potential(model: &PotentialModel, profile: &MassProfile, ordering: OrderingParams, g: &Grid) -> Result<PotentialOnGrid> {
    let mut re = Vec::with_capacity(g.n);
    let mut im = Vec::with_capacity(g.n);
    for x in g.points() {
        let mu = profile.mu(x)?;
        let v = model.eval_v(mu)?;
        let c = if profile.is_constant() { 0.0 } else { u_eff(profile, ordering.eta, ordering.eps, x)? };
        re.push(v.re + c);
        im.push(v.im);
    }
    Ok(match model.value_type {
        ValueType::Real => PotentialOnGrid::Real(re),
        ValueType::Complex => PotentialOnGrid::Complex(re.into_iter().zip(im).map(|(r, i)| C64::new(r, i)).collect()),
    })
}

fn solve(model: &PotentialModel, profile: &MassProfile, ordering: OrderingParams, grid: &Grid, k: usize) -> Result<SpectrumReport> {
    let v = |g: &Grid| total_potential(model, profile, ordering, g);
    refine(profile, &v, ordering, grid, k, model.bound_threshold())
}

pub fn spacing_stats(labels: &[f64]) -> Option<SpacingStats> {
    if labels.len() < 3 {
        return None;
    }
    let d: Vec<f64> = labels.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let max_deviation = d.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let relative_deviation = max_deviation / mean.abs();
    Some(SpacingStats { mean, max_deviation, relative_deviation, uniform: relative_deviation < AFFINE_TOL })
}

pub fn affine_fit(labels: &[f64]) -> Option<AffineFit> {
    if labels.len() < 2 {
        return None;
    }
    let n = labels.len() as f64;
    let xs: Vec<f64> = (0..labels.len()).map(|i| i as f64).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = labels.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(labels).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(labels).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Some(AffineFit { intercept, slope, max_residual })
}

pub fn cmd_verify(req: &VerifyRequest) -> Result<VerificationReport> {
    let model = make_potential(req.id, &req.params)?;
    let profile = &req.profile;
    let grid = match req.grid {
        Some(g) => {
            let w = (profile.mu(g.x_lo)?, profile.mu(g.x_hi)?);
            grid_for_window(profile, &model, w, g.n)?;
            g
        }
        None => grid_for_window(profile, &model, req.mu_window.unwrap_or_else(|| model.default_mu_window()), req.n)?,
    };
    let mu_window = (profile.mu(grid.x_lo)?, profile.mu(grid.x_hi)?);
    let spectrum = solve(&model, profile, req.ordering, &grid, req.k)?;
    let mut report = analyse(&model, profile, req.ordering, &grid, mu_window, spectrum);

    if req.boundary_check && model.is_half_line() {
        let inner = (2.0 * mu_window.0, mu_window.1);
        let g2 = grid_for_window(profile, &model, inner, grid.n)?;
        let other = solve(&model, profile, req.ordering, &g2, req.k)?;
        let spread = relative_spread(&[report.bound_levels().iter().map(|l| l.0).collect(), other.bound_states()]);
        report.invariance_results.insert("boundary_sensitivity".into(), spread.unwrap_or(f64::NAN));
    }
    if req.check_orderings {
        let mut spectra = vec![report.bound_levels().iter().map(|l| l.0).collect::<Vec<_>>()];
        for o in [OrderingParams::BEN_DANIEL_DUKE, OrderingParams::ZHU_KROEMER, OrderingParams::GORA_WILLIAMS] {
            if o != req.ordering {
                spectra.push(solve(&model, profile, o, &grid, req.k)?.bound_states());
            }
        }
        report.invariance_results.insert("ordering".into(), relative_spread(&spectra).unwrap_or(f64::NAN));
    }
    Ok(report)
}

fn analyse(
    model: &PotentialModel,
    profile: &MassProfile,
    ordering: OrderingParams,
    grid: &Grid,
    mu_window: (f64, f64),
    s: SpectrumReport,
) -> VerificationReport {
    let lambda_inverted: Vec<Option<f64>> =
        s.eigenvalues.iter().zip(&s.bound).map(|(e, b)| if *b { model.invert_energy(*e) } else { None }).collect();
    let bound_e = s.bound_states();
    let labels: Vec<f64> = lambda_inverted.iter().flatten().copied().collect();
    let spacing = spacing_stats(&labels);
    let fit = if labels.len() >= 3 { affine_fit(&labels) } else { None };
    let integer_spacing = match (model.integer_spacing(), &spacing) {
        (Some(expected), Some(st)) => {
            let measured = st.mean.abs();
            let ratio = measured / expected;
            let status = if (ratio - 1.0).abs() < AFFINE_TOL { "pass" } else { "discrepancy" };
            Some(IntegerSpacingCheck { expected_step: expected, measured_step: measured, ratio, status: status.into() })
        }
        _ => None,
    };
    let formula_check = match &fit {
        Some(f) => bound_e
            .iter()
            .enumerate()
            .map(|(n, &e)| {
                let label_fit = f.intercept + f.slope * n as f64;
                let formula_e = model.energy_at_label(label_fit);
                FormulaCheck { n, label_fit, formula_e, numeric_e: e, relative_deviation: ((formula_e - e) / e).abs() }
            })
            .collect(),
        None => Vec::new(),
    };
    let level_spacing = if model.id == PotentialId::Oscillator3d && bound_e.len() >= 2 {
        let d = (bound_e[bound_e.len() - 1] - bound_e[0]) / (bound_e.len() - 1) as f64;
        let formula = 2.0 * model.p("omega");
        Some(LevelSpacing { fitted_spacing: d, formula_spacing: formula, ratio: d / formula })
    } else {
        None
    };
    let mut flags = s.flags.clone();
    if bound_e.is_empty() {
        flags.push("empty-spectrum".into());
    }
    if let Some(st) = &spacing {
        if !st.uniform {
            flags.push("non-uniform-spacing".into());
        }
    }
    VerificationReport {
        schema: SCHEMA.into(),
        potential_id: model.id,
        params: model.params.clone(),
        profile: profile.descriptor(),
        ordering,
        grid: grid.into(),
        mu_window,
        correction: if profile.is_constant() { "none".into() } else { "u_eff".into() },
        bound_threshold: s.bound_threshold,
        numeric_e: s.eigenvalues,
        e_error: s.error_estimates,
        bound: s.bound,
        imag_parts: s.imag_parts,
        max_imag: s.max_imag,
        label: model.inversion_label().into(),
        lambda_inverted,
        spacing_stats: spacing,
        affine_fit: fit,
        integer_spacing,
        formula_check,
        level_spacing,
        invariance_results: BTreeMap::new(),
        flags,
    }
}

/// max over levels of (max − min)/|mean| across spectra, on the levels
/// all spectra share.
pub fn relative_spread(spectra: &[Vec<f64>]) -> Option<f64> {
    let n = spectra.iter().map(Vec::len).min()?;
    if n == 0 {
        return None;
    }
    let spread = (0..n)
        .map(|i| {
            let vals: Vec<f64> = spectra.iter().map(|s| s[i]).collect();
            let mx = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mn = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            (mx - mn) / mean.abs()
        })
        .fold(0.0, f64::max);
    Some(spread)
}

/// Thread cap for harness fan-out: `SGA_NUM_THREADS`, else the machine's
/// parallelism.
pub fn thread_cap() -> usize {
    std::env::var("SGA_NUM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs independent jobs on at most [`thread_cap`] threads, keeping order.
pub fn fan_out<T, F>(jobs: Vec<F>) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let n = jobs.len();
    let queue = Mutex::new(jobs.into_iter().enumerate());
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..thread_cap().min(n.max(1)) {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue").next();
                match next {
                    Some((i, job)) => {
                        let r = job();
                        results.lock().expect("results")[i] = Some(r);
                    }
                    None => break,
                }
            });
        }
    });
    results.into_inner().expect("results").into_iter().map(|r| r.expect("job ran")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadResult {
    pub labels: Vec<String>,
    pub spectra: Vec<Vec<f64>>,
    pub levels_compared: usize,
    pub max_relative_spread: f64,
}

fn spread_over(labels: Vec<String>, reqs: Vec<VerifyRequest>, levels: usize) -> Result<SpreadResult> {
    let jobs: Vec<_> = reqs.into_iter().map(|r| move || cmd_verify(&r)).collect();
    let reports = fan_out(jobs).into_iter().collect::<Result<Vec<_>>>()?;
    let spectra: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| r.bound_levels().iter().take(levels).map(|l| l.0).collect())
        .collect();
    let levels_compared = spectra.iter().map(Vec::len).min().unwrap_or(0);
    let max_relative_spread = relative_spread(&spectra).unwrap_or(f64::NAN);
    Ok(SpreadResult { labels, spectra, levels_compared, max_relative_spread })
}

/// The same target under several orderings, each with its own correction.
pub fn ordering_invariance(base: &VerifyRequest, orderings: &[OrderingParams], levels: usize) -> Result<SpreadResult> {
    let labels = orderings.iter().map(|o| o.to_string()).collect();
    let reqs = orderings.iter().map(|&o| base.clone().with_ordering(o)).collect();
    spread_over(labels, reqs, levels)
}

/// The same target on several mass profiles over one μ window.
pub fn mass_invariance(base: &VerifyRequest, profiles: &[MassProfile], levels: usize) -> Result<SpreadResult> {
    let labels = profiles.iter().map(|p| format!("{:?}{:?}", p.kind(), p.params())).collect();
    let reqs = profiles.iter().map(|p| base.clone().with_profile(p.clone())).collect();
    spread_over(labels, reqs, levels)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsospectralResult {
    pub pair: (PotentialId, PotentialId),
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub differences: Vec<f64>,
    pub allowed: Vec<f64>,
    pub levels_compared: usize,
    pub levels_requested: usize,
    pub reality_ok: bool,
    pub max_imag: f64,
    pub pass: bool,
}

/// Compares the lowest `levels` bound states of two runs within their
/// combined error estimates.
pub fn isospectrality(a: &VerifyRequest, b: &VerifyRequest, levels: usize) -> Result<IsospectralResult> {
    let (ra, rb) = {
        let jobs = vec![a.clone(), b.clone()].into_iter().map(|r| move || cmd_verify(&r)).collect::<Vec<_>>();
        let mut out = fan_out(jobs).into_iter();
        (out.next().expect("first")?, out.next().expect("second")?)
    };
    let la: Vec<(f64, f64)> = ra.bound_levels().into_iter().take(levels).collect();
    let lb: Vec<(f64, f64)> = rb.bound_levels().into_iter().take(levels).collect();
    let n = la.len().min(lb.len());
    let differences: Vec<f64> = (0..n).map(|i| (la[i].0 - lb[i].0).abs()).collect();
    let allowed: Vec<f64> = (0..n).map(|i| la[i].1 + lb[i].1).collect();
    let max_imag = ra.max_imag.unwrap_or(0.0).max(rb.max_imag.unwrap_or(0.0));
    let reality_ok = !ra.flags.iter().chain(&rb.flags).any(|f| f == "complex-eigenvalues");
    let pass = n == levels && reality_ok && differences.iter().zip(&allowed).all(|(d, a)| d <= a);
    Ok(IsospectralResult {
        pair: (a.id, b.id),
        first: la.iter().map(|l| l.0).collect(),
        second: lb.iter().map(|l| l.0).collect(),
        differences,
        allowed,
        levels_compared: n,
        levels_requested: levels,
        reality_ok,
        max_imag,
        pass,
    })
}
