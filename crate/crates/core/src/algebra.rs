//! Six-generator differential realization of so(2,2), so(4) and
//! so(3)⊕so(2,1) acting on ψ = exp(i(νφ + ν′χ)) R(x).
//!
//! The angles are never discretized: e^{±iφ}, e^{±iχ} only shift (ν, ν′).
//! With u = q y²/√b and h2 y′ = √b y the generators act on R as
//!
//! ```text
//! J± : ν → ν ± 1,  R → A [±h2 R′ ± g2 R + k2 ν R + f2 ν′ R]
//! L± : ν′ → ν′ ± 1, R → ±h2 R′ ± g2 R + k2 ν′ R + f2 ν R
//! ```
//!
//! with k2 = √b (1 + u)/(1 − u), f2 = δ y/(1 − u) and A² = ab. In the L
//! family the coefficient of the own compact generator is k2; the other
//! placement fails [L+, L−] = −2b L0.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SgaError};
use crate::jet::Jet;
use crate::mass::MassProfile;
use crate::sga::YSolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSignature {
    pub a: i8,
    pub b: i8,
}

impl AlgebraSignature {
    pub const SO22: Self = Self { a: 1, b: 1 };
    pub const SO3_SO21: Self = Self { a: 1, b: -1 };
    pub const SO4: Self = Self { a: -1, b: -1 };

    pub fn new(a: i8, b: i8) -> Result<Self> {
        if a.abs() != 1 || b.abs() != 1 {
            return Err(SgaError::validation("a and b must be ±1"));
        }
        Ok(Self { a, b })
    }

    /// A with A² ab = 1.
    pub fn amplitude(&self) -> C64 {
        if self.a * self.b == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        }
    }

    pub fn sqrt_b(&self) -> C64 {
        if self.b == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        }
    }

    pub fn label(&self) -> &'static str {
        match (self.a, self.b) {
            (1, 1) => "so(2,2)",
            (-1, -1) => "so(4)",
            _ => "so(3)+so(2,1)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Jplus,
    Jminus,
    J0,
    Lplus,
    Lminus,
    L0,
}

impl Generator {
    pub const ALL: [Generator; 6] = [Self::Jplus, Self::Jminus, Self::J0, Self::Lplus, Self::Lminus, Self::L0];

    pub fn is_j(self) -> bool {
        matches!(self, Self::Jplus | Self::Jminus | Self::J0)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Jplus => "J+",
            Self::Jminus => "J-",
            Self::J0 => "J0",
            Self::Lplus => "L+",
            Self::Lminus => "L-",
            Self::L0 => "L0",
        }
    }
}

/// [A, B] = coef · G, or zero when `None`.
pub fn expected_commutator(a: Generator, b: Generator, sig: AlgebraSignature) -> Option<(f64, Generator)> {
    use Generator::*;
    let fwd = |x: Generator, y: Generator| -> Option<(f64, Generator)> {
        match (x, y) {
            (J0, Jplus) => Some((1.0, Jplus)),
            (J0, Jminus) => Some((-1.0, Jminus)),
            (Jplus, Jminus) => Some((-2.0 * sig.a as f64, J0)),
            (L0, Lplus) => Some((1.0, Lplus)),
            (L0, Lminus) => Some((-1.0, Lminus)),
            (Lplus, Lminus) => Some((-2.0 * sig.b as f64, L0)),
            _ => None,
        }
    };
    fwd(a, b).or_else(|| fwd(b, a).map(|(c, g)| (-c, g)))
}

/// The ten realization functions for given (a, b, q, δ) and coordinate y.
#[derive(Clone, Debug)]
pub struct RealizationFns {
    pub sig: AlgebraSignature,
    pub q: f64,
    pub delta: f64,
    pub y: YSolution,
    pub profile: MassProfile,
    /// (η, ε) of the ordering the realization is matched against; g2 does
    /// not depend on it.
    pub ordering: (f64, f64),
}

/// Jets of every realization function at one point.
#[derive(Clone, Copy, Debug)]
pub struct FnJets {
    pub y: Jet<C64>,
    pub h1: Jet<C64>,
    pub g1: Jet<C64>,
    pub f1: Jet<C64>,
    pub k1: Jet<C64>,
    pub h2: Jet<C64>,
    pub g2: Jet<C64>,
    pub f2: Jet<C64>,
    pub k2: Jet<C64>,
    /// u = q y²/√b
    pub u: Jet<C64>,
}

pub fn build_realization(
    sig: AlgebraSignature,
    q: f64,
    delta: f64,
    y_solution: YSolution,
    profile: &MassProfile,
    ordering_eta_eps: (f64, f64),
    window: (f64, f64),
) -> Result<RealizationFns> {
    let fns = RealizationFns { sig, q, delta, y: y_solution, profile: profile.clone(), ordering: ordering_eta_eps };
    fns.check_window(window)?;
    Ok(fns)
}

impl RealizationFns {
    fn u_value(&self, x: f64) -> Result<C64> {
        let y = self.y.jet_x(&self.profile, x)?.value();
        Ok(y * y * self.q / self.sig.sqrt_b())
    }

    /// Rejects windows containing a zero of 1 − u or of y′.
    pub fn check_window(&self, (lo, hi): (f64, f64)) -> Result<()> {
        if !(lo < hi) {
            return Err(SgaError::validation("window must satisfy lo < hi"));
        }
        let n = 4000;
        let mut prev: Option<(f64, C64)> = None;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let one_minus_u = C64::new(1.0, 0.0) - self.u_value(x)?;
            if one_minus_u.norm() < 1e-10 {
                return Err(SgaError::singular(x, "1 - q y^2/sqrt(b) = 0"));
            }
            if let Some((xp, vp)) = prev {
                if vp.im == 0.0 && one_minus_u.im == 0.0 && vp.re * one_minus_u.re < 0.0 {
                    let root = bisect_root(|t| (C64::new(1.0, 0.0) - self.u_value(t).unwrap_or(C64::new(0.0, 0.0))).re, xp, x);
                    return Err(SgaError::singular(root, "1 - q y^2/sqrt(b) = 0"));
                }
            }
            if self.y.jet_x(&self.profile, x)?.derivative(1).norm() == 0.0 {
                return Err(SgaError::singular(x, "y' = 0"));
            }
            prev = Some((x, one_minus_u));
        }
        Ok(())
    }

    pub fn at(&self, x: f64) -> Result<FnJets> {
        let sb = self.sig.sqrt_b();
        let one = C64::new(1.0, 0.0);
        let y = self.y.jet_x(&self.profile, x)?;
        let y1 = y.deriv();
        let y2 = y1.deriv();
        let m = self.profile.m_jet(x)?.to_complex();
        let m1 = m.deriv();
        let u = y * y * (C64::from(self.q) / sb);
        let one_j = Jet::constant(one);
        let den = one_j - u;
        if den.value().norm() < 1e-14 {
            return Err(SgaError::singular(x, "1 - q y^2/sqrt(b) = 0"));
        }
        let k2 = (one_j + u) / den * sb;
        let f2 = y / den * C64::from(self.delta);
        let h2 = y / y1 * sb;
        let g2 = ((Jet::constant(C64::from(2.0)) - u) / den - y * y2 / (y1 * y1) * C64::from(1.5)
            + m1 * y / (m * y1) * C64::from(0.5))
            * sb;
        let a = self.sig.amplitude();
        Ok(FnJets { y, h1: h2 * a, g1: g2 * a, f1: k2 * a, k1: f2 * a, h2, g2, f2, k2, u })
    }

    pub fn sample(&self, x: &[f64]) -> Result<SampledRealization> {
        if x.len() < 8 {
            return Err(SgaError::Grid("need at least 8 sample points".into()));
        }
        let h = x[1] - x[0];
        let uniform = x.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
        if !(h > 0.0) || !uniform {
            return Err(SgaError::Grid("sample points must be uniform and increasing".into()));
        }
        let jets = x.iter().map(|&xi| self.at(xi)).collect::<Result<Vec<_>>>()?;
        Ok(SampledRealization { sig: self.sig, q: self.q, delta: self.delta, x: x.to_vec(), h, jets })
    }
}

fn bisect_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Realization jets cached on a uniform grid.
#[derive(Clone, Debug)]
pub struct SampledRealization {
    pub sig: AlgebraSignature,
    pub q: f64,
    pub delta: f64,
    pub x: Vec<f64>,
    pub h: f64,
    pub jets: Vec<FnJets>,
}

/// Pointwise residuals of the structure equations at one point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StructureResiduals {
    /// h2 y′ − √b y
    pub h2_assumption: f64,
    /// h2 f2′ − k2 f2
    pub eq_f2: f64,
    /// k2² − h2 k2′ − b
    pub eq_k2: f64,
    /// k2² − f2² − b
    pub closure: f64,
    /// (k2² − f2² − b) − (4q√b − δ²) y²/(1 − u)²
    pub closure_identity: f64,
}

impl SampledRealization {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn structure_residuals(&self, i: usize) -> StructureResiduals {
        structure_residuals(&self.jets[i], self.sig, self.q, self.delta)
    }
}

/// Pointwise structure residuals from the function jets at one point.
pub fn structure_residuals(j: &FnJets, sig: AlgebraSignature, q: f64, delta: f64) -> StructureResiduals {
    let sb = sig.sqrt_b();
    let b = C64::from(sig.b as f64);
    let k2 = j.k2.value();
    let f2 = j.f2.value();
    let y = j.y.value();
    let u = j.u.value();
    let one = C64::new(1.0, 0.0);
    let closure = k2 * k2 - f2 * f2 - b;
    let predicted = (sb * 4.0 * q - delta * delta) * y * y / ((one - u) * (one - u));
    StructureResiduals {
        h2_assumption: (j.h2.value() * j.y.derivative(1) - sb * y).norm(),
        eq_f2: (j.h2.value() * j.f2.derivative(1) - k2 * f2).norm(),
        eq_k2: (k2 * k2 - j.h2.value() * j.k2.derivative(1) - b).norm(),
        closure: closure.norm(),
        closure_identity: (closure - predicted).norm(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateData {
    /// Exact local Taylor data at every grid point.
    Jets(Vec<Jet<C64>>),
    /// Plain samples; derivatives from 6th-order stencils.
    Samples(Vec<C64>),
}

/// ψ_{ν,ν′} = exp(i(νφ + ν′χ)) R(x); only (ν, ν′, R) are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisState {
    pub nu: f64,
    pub nu_prime: f64,
    pub data: StateData,
}

impl BasisState {
    /// R = exp(−(x − c)²/2w²) with exact derivatives.
    pub fn gaussian(grid: &SampledRealization, nu: f64, nu_prime: f64, c: f64, w: f64) -> Self {
        let jets = grid
            .x
            .iter()
            .map(|&x| {
                let t = (Jet::variable(x) - c) * (1.0 / w);
                (t * t * -0.5).exp().to_complex()
            })
            .collect();
        Self { nu, nu_prime, data: StateData::Jets(jets) }
    }

    pub fn from_samples(nu: f64, nu_prime: f64, r: Vec<C64>) -> Self {
        Self { nu, nu_prime, data: StateData::Samples(r) }
    }

    pub fn values(&self) -> Vec<C64> {
        match &self.data {
            StateData::Jets(j) => j.iter().map(|v| v.value()).collect(),
            StateData::Samples(s) => s.clone(),
        }
    }

    fn map_jets(&self, f: impl Fn(&Jet<C64>) -> Jet<C64>) -> StateData {
        match &self.data {
            StateData::Jets(j) => StateData::Jets(j.iter().map(f).collect()),
            StateData::Samples(s) => StateData::Samples(s.iter().map(|v| f(&Jet::constant(*v)).value()).collect()),
        }
    }

    fn scaled(&self, s: f64) -> StateData {
        self.map_jets(|r| r.scale(C64::from(s)))
    }
}

/// Fornberg weights: `w[k][j]` is the weight of node `j` for the k-th
/// derivative at `z`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

const STENCIL: usize = 7;

/// Derivative of uniform samples: centred 7-point stencils inside,
/// one-sided 7-point closures near the ends.
pub fn stencil_derivative(values: &[C64], h: f64, order: usize) -> Vec<C64> {
    let n = values.len();
    let half = STENCIL / 2;
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; STENCIL];
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - STENCIL);
            let offset = i - start;
            let w = cache[offset].get_or_insert_with(|| {
                let nodes: Vec<f64> = (0..STENCIL).map(|k| k as f64 - offset as f64).collect();
                fornberg_weights(0.0, &nodes, order).swap_remove(order)
            });
            let s: C64 = (0..STENCIL).map(|k| values[start + k] * w[k]).sum();
            s / h.powi(order as i32)
        })
        .collect()
}

/// Applies one generator to a basis state.
pub fn apply_generator(gen: Generator, grid: &SampledRealization, state: &BasisState) -> BasisState {
    let (nu, nup) = (state.nu, state.nu_prime);
    match gen {
        Generator::J0 => return BasisState { nu, nu_prime: nup, data: state.scaled(nu) },
        Generator::L0 => return BasisState { nu, nu_prime: nup, data: state.scaled(nup) },
        _ => {}
    }
    let sign = if matches!(gen, Generator::Jplus | Generator::Lplus) { 1.0 } else { -1.0 };
    let (own, other) = if gen.is_j() { (nu, nup) } else { (nup, nu) };
    let coefs = |j: &FnJets| {
        if gen.is_j() {
            (j.h1, j.g1, j.f1, j.k1)
        } else {
            // (h, g, coefficient of own compact eigenvalue, of the other)
            (j.h2, j.g2, j.k2, j.f2)
        }
    };
    let data = match &state.data {
        StateData::Jets(rs) => StateData::Jets(
            rs.iter()
                .zip(&grid.jets)
                .map(|(r, fj)| {
                    let (hh, gg, ff, kk) = coefs(fj);
                    (hh * r.deriv() + gg * *r) * C64::from(sign) + (ff * C64::from(own) + kk * C64::from(other)) * *r
                })
                .collect(),
        ),
        StateData::Samples(rs) => {
            let d = stencil_derivative(rs, grid.h, 1);
            StateData::Samples(
                rs.iter()
                    .zip(&d)
                    .zip(&grid.jets)
                    .map(|((r, dr), fj)| {
                        let (hh, gg, ff, kk) = coefs(fj);
                        (hh.value() * dr + gg.value() * r) * sign + (ff.value() * own + kk.value() * other) * r
                    })
                    .collect(),
            )
        }
    };
    let (dn, dnp) = match gen {
        Generator::Jplus => (1.0, 0.0),
        Generator::Jminus => (-1.0, 0.0),
        Generator::Lplus => (0.0, 1.0),
        _ => (0.0, -1.0),
    };
    BasisState { nu: nu + dn, nu_prime: nup + dnp, data }
}

fn combine(terms: &[(C64, &BasisState)]) -> Vec<C64> {
    let vals: Vec<Vec<C64>> = terms.iter().map(|(_, s)| s.values()).collect();
    (0..vals[0].len()).map(|i| terms.iter().zip(&vals).map(|((c, _), v)| *c * v[i]).sum()).collect()
}

/// Points excluded at each end when samples feed stencils.
fn margin(state: &BasisState, applications: usize) -> usize {
    match state.data {
        StateData::Jets(_) => 0,
        StateData::Samples(_) => applications * STENCIL,
    }
}

fn max_norm_interior(v: &[C64], skip: usize) -> f64 {
    let n = v.len();
    v[skip.min(n)..n.saturating_sub(skip)].iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Max-norm of ([A, B] − expected) ψ on interior points.
pub fn commutator_residual(
    a: Generator,
    b: Generator,
    grid: &SampledRealization,
    sig: AlgebraSignature,
    state: &BasisState,
) -> f64 {
    let ab = apply_generator(a, grid, &apply_generator(b, grid, state));
    let ba = apply_generator(b, grid, &apply_generator(a, grid, state));
    let one = C64::new(1.0, 0.0);
    let diff = match expected_commutator(a, b, sig) {
        Some((c, g)) => {
            let e = apply_generator(g, grid, state);
            combine(&[(one, &ab), (-one, &ba), (C64::from(-c), &e)])
        }
        None => combine(&[(one, &ab), (-one, &ba)]),
    };
    max_norm_interior(&diff, margin(state, 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CasimirMode {
    Composed,
    Closed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirResult {
    pub samples: Vec<C64>,
    /// λ with λ(λ + 2) = eigenvalue, when an eigencheck was requested.
    pub lambda: Option<f64>,
    pub eigenvalue: Option<f64>,
}

impl CasimirResult {
    /// Estimates the eigenvalue as the median of Re(𝒞ψ/ψ) over points
    /// where |ψ| is within 1e-3 of its maximum.
    pub fn with_eigencheck(mut self, state: &BasisState) -> Self {
        let r = state.values();
        let peak = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut ratios: Vec<f64> = self
            .samples
            .iter()
            .zip(&r)
            .filter(|(_, v)| v.norm() > 1e-3 * peak)
            .map(|(c, v)| (c / v).re)
            .collect();
        if ratios.is_empty() {
            return self;
        }
        ratios.sort_by(f64::total_cmp);
        let eig = ratios[ratios.len() / 2];
        self.eigenvalue = Some(eig);
        self.lambda = (eig >= -1.0).then(|| -1.0 + (1.0 + eig).sqrt());
        self
    }
}

fn casimir_part(j: bool, grid: &SampledRealization, state: &BasisState) -> Vec<C64> {
    let (p, m, z, coef) = if j {
        (Generator::Jplus, Generator::Jminus, Generator::J0, grid.sig.a)
    } else {
        (Generator::Lplus, Generator::Lminus, Generator::L0, grid.sig.b)
    };
    let pm = apply_generator(p, grid, &apply_generator(m, grid, state));
    let z1 = apply_generator(z, grid, state);
    let zz = apply_generator(z, grid, &z1);
    let one = C64::new(1.0, 0.0);
    combine(&[(C64::from(-(coef as f64)), &pm), (one, &zz), (-one, &z1)])
}

/// First Casimir 2[−aJ+J− + J0² − J0 − bL+L− + L0² − L0] (composed) or
/// its closed differential form.
pub fn casimir_apply(grid: &SampledRealization, state: &BasisState, mode: CasimirMode) -> CasimirResult {
    let samples = match mode {
        CasimirMode::Composed => {
            let cj = casimir_part(true, grid, state);
            let cl = casimir_part(false, grid, state);
            cj.iter().zip(&cl).map(|(a, b)| (a + b) * 2.0).collect()
        }
        CasimirMode::Closed => casimir_closed(grid, state),
    };
    CasimirResult { samples, lambda: None, eigenvalue: None }
}

/// Second Casimir 2C_J − 2C_L.
pub fn second_casimir(grid: &SampledRealization, state: &BasisState) -> Vec<C64> {
    let cj = casimir_part(true, grid, state);
    let cl = casimir_part(false, grid, state);
    cj.iter().zip(&cl).map(|(a, b)| (a - b) * 2.0).collect()
}

fn casimir_closed(grid: &SampledRealization, state: &BasisState) -> Vec<C64> {
    let (r0, r1, r2): (Vec<C64>, Vec<C64>, Vec<C64>) = match &state.data {
        StateData::Jets(j) => (
            j.iter().map(|v| v.value()).collect(),
            j.iter().map(|v| v.derivative(1)).collect(),
            j.iter().map(|v| v.derivative(2)).collect(),
        ),
        StateData::Samples(s) => (s.clone(), stencil_derivative(s, grid.h, 1), stencil_derivative(s, grid.h, 2)),
    };
    let sb = grid.sig.sqrt_b();
    let b = grid.sig.b as f64;
    let d = grid.delta;
    let (nu, nup) = (state.nu, state.nu_prime);
    let one = C64::new(1.0, 0.0);
    grid.jets
        .iter()
        .enumerate()
        .map(|(i, fj)| {
            let y = fj.y.value();
            let y1 = fj.y.derivative(1);
            let y2 = fj.y.derivative(2);
            let u = fj.u.value();
            let t = y / y1;
            let g = fj.g2.value() / sb;
            let gp = fj.g2.derivative(1) / sb;
            let ratio = (one + u) / (one - u);
            let w = (one - u) * (one - u);
            let c2 = t * t * 4.0;
            let c1 = t * 4.0 * (g * 2.0 - y * y2 / (y1 * y1) - u * 2.0 / (one - u));
            let c0 = (t * gp + g * g - ratio * g) * 4.0
                + (one - y * y * (b * d * d) / w - ratio * ratio) * (2.0 * (nu * nu + nup * nup))
                - sb * y * (one + u) / w * (8.0 * b * d * nu * nup);
            c2 * r2[i] + c1 * r1[i] + c0 * r0[i]
        })
        .collect()
}
