//! Matching layer between the so(2,2) Casimir and the von Roos Hamiltonian:
//! F/G functions, the generating function 𝔖 = y′²/m, the case-wise
//! coordinate functions y(μ) and the ordering-dependent corrections.
//!
//! Derivation record. With ψ = 2σ m (y/y′)² R the von Roos operator takes
//! a form whose x-derivative terms match the Casimir once
//! Z = −σ/4 and g2/√b = (2 − u)/(1 − u) − 3yy″/(2y′²) + m′y/(2my′),
//! u = qy²/√b. The constant σ cancels from every result and is kept only
//! as [`SIGMA`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SgaError};
use crate::jet::Jet;
use crate::mass::MassProfile;

/// Normalisation of the intermediate wavefunction; drops out of all outputs.
pub const SIGMA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "A-exponential")]
    AExponential,
    #[serde(rename = "A-quadratic")]
    AQuadratic,
    #[serde(rename = "A-linear")]
    ALinear,
    #[serde(rename = "B-I")]
    BI,
    #[serde(rename = "B-II")]
    BII,
}

/// Sub-family within case B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Gpt,
    Pt,
    Scarf,
    Eckart,
    Hulthen,
    RosenMorse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgaCase {
    pub q: f64,
    pub b: f64,
    pub delta: f64,
    pub r0: f64,
    pub t0: f64,
    pub c0: f64,
    pub a_r: f64,
    pub a_t: f64,
    pub a_c: f64,
    pub case_tag: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

impl SgaCase {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SgaError::validation(format!("{:?}: {m}", self.case_tag)));
        if self.b != 1.0 {
            return bad("b must be 1");
        }
        let (r0, t0, c0) = (self.r0, self.t0, self.c0);
        match self.case_tag {
            CaseTag::AExponential | CaseTag::AQuadratic | CaseTag::ALinear if self.q != 0.0 => bad("case A needs q = 0"),
            CaseTag::BI | CaseTag::BII if self.q != 1.0 => bad("case B needs q = 1"),
            CaseTag::AExponential | CaseTag::BI if !(r0 == 0.0 && t0 == 0.0 && c0 != 0.0) => {
                bad("needs r0 = t0 = 0 and c0 != 0")
            }
            CaseTag::AQuadratic if !(c0 == 0.0 && r0 == -t0 && r0 != 0.0) => bad("needs c0 = 0 and r0 = -t0 != 0"),
            CaseTag::ALinear | CaseTag::BII if !(c0 == 0.0 && r0 == t0 && r0 != 0.0) => {
                bad("needs c0 = 0 and r0 = t0 != 0")
            }
            _ => Ok(()),
        }?;
        match (self.case_tag, self.branch) {
            (CaseTag::BI, Some(Branch::Gpt | Branch::Pt | Branch::Scarf)) => Ok(()),
            (CaseTag::BII, Some(Branch::Eckart | Branch::Hulthen | Branch::RosenMorse)) => Ok(()),
            (CaseTag::BI | CaseTag::BII, None) => Ok(()),
            (CaseTag::BI | CaseTag::BII, Some(b)) => bad(&format!("branch {b:?} does not belong here")),
            (_, Some(_)) => bad("case A takes no branch"),
            (_, None) => Ok(()),
        }
    }

    /// r(E) = −r0 E + a_r.
    pub fn r_of(&self, e: f64) -> f64 {
        -self.r0 * e + self.a_r
    }

    pub fn t_of(&self, e: f64) -> f64 {
        -self.t0 * e + self.a_t
    }

    pub fn c_of(&self, e: f64) -> f64 {
        -self.c0 * e + self.a_c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YForm {
    /// y = exp(−s α μ + iθ)
    Exponential,
    /// y = α μ² / 4
    Quadratic,
    /// y = α μ
    Linear,
    /// y = tanh(α μ / 2p + iθ)
    TanhP,
}

/// Coordinate function y as a closed form in μ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YSolution {
    pub form: YForm,
    pub alpha: f64,
    pub p: u32,
    /// Multiplier of the exponent (2 for the Pöschl-Teller variant).
    pub scale: f64,
    /// Imaginary offset θ.
    pub phase: f64,
}

impl YSolution {
    pub fn exponential(alpha: f64) -> Self {
        Self { form: YForm::Exponential, alpha, p: 1, scale: 1.0, phase: 0.0 }
    }

    pub fn quadratic(alpha: f64) -> Self {
        Self { form: YForm::Quadratic, alpha, p: 1, scale: 1.0, phase: 0.0 }
    }

    pub fn linear(alpha: f64) -> Self {
        Self { form: YForm::Linear, alpha, p: 1, scale: 1.0, phase: 0.0 }
    }

    pub fn tanh_p(alpha: f64, p: u32) -> Self {
        Self { form: YForm::TanhP, alpha, p, scale: 1.0, phase: 0.0 }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn is_real(&self) -> bool {
        self.phase == 0.0
    }

    /// y as a jet, given μ as a jet in whatever variable the caller uses.
    pub fn of_mu(&self, mu: Jet<f64>) -> Jet<C64> {
        let i = C64::new(0.0, 1.0);
        match self.form {
            YForm::Exponential => {
                let e = (mu * (-self.scale * self.alpha)).exp().to_complex();
                e.scale(C64::from_polar(1.0, self.phase))
            }
            YForm::Quadratic => (mu * mu * (0.25 * self.alpha)).to_complex(),
            YForm::Linear => (mu * self.alpha).to_complex(),
            YForm::TanhP => {
                let t = (mu * (self.alpha / (2.0 * self.p as f64))).tanh().to_complex();
                if self.phase == 0.0 {
                    t
                } else {
                    let tb = i * self.phase.tan();
                    (t + tb) / (t * tb + C64::new(1.0, 0.0))
                }
            }
        }
    }

    pub fn value_at_mu(&self, mu: f64) -> C64 {
        self.of_mu(Jet::constant(mu)).value()
    }

    /// y as a jet in x.
    pub fn jet_x(&self, profile: &MassProfile, x: f64) -> Result<Jet<C64>> {
        Ok(self.of_mu(profile.mu_jet(x)?))
    }
}

/// Closed-form y for the case, with α fixed by the case parameters.
pub fn solve_y(case: &SgaCase, _profile: &MassProfile) -> Result<YSolution> {
    case.validate()?;
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(SgaError::validation(format!("{:?}: {what}", case.case_tag)))
        }
    };
    let d = case.delta;
    Ok(match case.case_tag {
        CaseTag::AExponential => {
            need(case.c0 > 0.0, "c0 must be positive")?;
            YSolution::exponential(2.0 * (2.0 / case.c0).sqrt())
        }
        CaseTag::AQuadratic => {
            need(d * case.r0 != 0.0, "δ r0 must be nonzero")?;
            YSolution::quadratic(2.0 / (d * case.r0))
        }
        CaseTag::ALinear => {
            need(case.r0 > 0.0 && d != 0.0, "needs r0 > 0 and δ != 0")?;
            YSolution::linear(2.0 / (d * case.r0.sqrt()))
        }
        CaseTag::BI => {
            need(case.c0 > 0.0, "c0 must be positive")?;
            match case.branch.unwrap_or(Branch::Gpt) {
                Branch::Pt => YSolution::exponential((2.0 / case.c0).sqrt()).with_scale(2.0),
                Branch::Scarf => YSolution::exponential(2.0 * (2.0 / case.c0).sqrt()).with_phase(FRAC_PI_2),
                _ => YSolution::exponential(2.0 * (2.0 / case.c0).sqrt()),
            }
        }
        CaseTag::BII => {
            need(case.r0 > 0.0, "r0 must be positive")?;
            let (p, phase) = match case.branch.unwrap_or(Branch::Eckart) {
                Branch::Hulthen => (2, 0.0),
                Branch::RosenMorse => (1, FRAC_PI_4),
                _ => (1, 0.0),
            };
            let alpha = 4.0 * p as f64 / (case.r0 * (4.0 + d * d)).sqrt();
            YSolution::tanh_p(alpha, p).with_phase(phase)
        }
    })
}

fn fg_core(q: f64, b: f64, delta: f64, y: C64) -> Result<(C64, C64)> {
    if b != 1.0 {
        return Err(SgaError::validation("F and G are defined here for b = 1"));
    }
    let u = y * y * q;
    let one = C64::new(1.0, 0.0);
    if y.norm() == 0.0 {
        return Err(SgaError::singular(f64::NAN, "F, G have a pole at y = 0"));
    }
    if (one - u).norm() < 1e-300 {
        return Err(SgaError::singular(f64::NAN, "F, G have a pole at q y² = 1"));
    }
    let den = (one - u) * (one - u);
    let even = C64::from(4.0 * q + delta * delta) / den;
    let odd = (one + u) * (2.0 * delta) / (y * den);
    Ok((even + odd, even - odd))
}

/// (F, G) at a value of y, for b = 1.
pub fn fg_functions(q: f64, b: f64, delta: f64, y: f64) -> Result<(f64, f64)> {
    if y.is_infinite() && q == 0.0 {
        return Ok((delta * delta, delta * delta));
    }
    let (f, g) = fg_core(q, b, delta, C64::from(y))?;
    Ok((f.re, g.re))
}

/// (ν, ν′) ↦ (r, t) = ((ν + ν′)², (ν − ν′)²).
pub fn quantum_map(nu: f64, nu_prime: f64) -> (f64, f64) {
    ((nu + nu_prime).powi(2), (nu - nu_prime).powi(2))
}

/// Inverse of [`quantum_map`] on the principal branch; needs r, t ≥ 0.
pub fn quantum_unmap(r: f64, t: f64) -> Result<(f64, f64)> {
    if r < 0.0 || t < 0.0 {
        return Err(SgaError::validation("quantum_unmap needs r, t >= 0"));
    }
    let (sr, st) = (r.sqrt(), t.sqrt());
    Ok((0.5 * (sr + st), 0.5 * (sr - st)))
}

/// 𝔖 from the case parameters at a complex value of y, in the form with
/// the (1 − y²) poles cleared.
pub fn generating_function_at(case: &SgaCase, y: C64) -> Result<C64> {
    let b = case.b;
    let sb = b.sqrt();
    let u = y * y * (case.q / sb);
    let one = C64::new(1.0, 0.0);
    let p = (case.r0 + case.t0) * (4.0 * case.q / sb + b * case.delta * case.delta);
    let qq = 2.0 * b * sb * case.delta * (case.r0 - case.t0);
    let w = (one - u) * (one - u);
    // with c0 = 0 the common powers of y cancel, which keeps y = 0 regular
    let (num, den) = if case.c0 != 0.0 {
        (y * y * w * 8.0, w * case.c0 + y * y * p + y * (one + u) * qq)
    } else if qq != 0.0 {
        (y * w * 8.0, y * p + (one + u) * qq)
    } else {
        (w * 8.0, C64::from(p))
    };
    if den.norm() < 1e-300 {
        return Err(SgaError::singular(f64::NAN, "generating function denominator vanishes"));
    }
    Ok(num / den)
}

pub fn generating_function_complex(case: &SgaCase, y: &YSolution, profile: &MassProfile, x: f64) -> Result<C64> {
    let yv = y.jet_x(profile, x)?.value();
    generating_function_at(case, yv).map_err(|e| relocate(e, x))
}

/// 𝔖(x) for a real coordinate function.
pub fn generating_function(case: &SgaCase, y: &YSolution, profile: &MassProfile, x: f64) -> Result<f64> {
    if !y.is_real() {
        return Err(SgaError::validation("complex y: use generating_function_complex"));
    }
    Ok(generating_function_complex(case, y, profile, x)?.re)
}

/// 1/𝔖 assembled from the energy derivatives of (r, t, c).
pub fn formal_inverse_s(case: &SgaCase, y: f64) -> Result<f64> {
    let (f, g) = fg_functions(case.q, case.b, case.delta, y)?;
    let (dr, dt, dc) = (-case.r0, -case.t0, -case.c0);
    Ok(-(f / 8.0) * dr - (g / 8.0) * dt - dc / (8.0 * y * y))
}

/// Relative residual of y′² = m 𝔖 at x.
pub fn ode_residual(case: &SgaCase, y: &YSolution, profile: &MassProfile, x: f64) -> Result<f64> {
    let yj = y.jet_x(profile, x)?;
    let lhs = yj.derivative(1) * yj.derivative(1);
    let rhs = generating_function_complex(case, y, profile, x)? * profile.m(x)?;
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm()).max(1e-300))
}

fn relocate(e: SgaError, x: f64) -> SgaError {
    match e {
        SgaError::Singularity { what, .. } => SgaError::Singularity { x, what },
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrectionVariant {
    /// (y, m) form, including the Schwarzian of y.
    VEff,
    /// μ-derivative form, free of y.
    UEff,
}

/// Ordering-dependent effective potential at x.
pub fn effective_correction(
    profile: &MassProfile,
    eta: f64,
    eps: f64,
    y: &YSolution,
    x: f64,
    variant: CorrectionVariant,
) -> Result<f64> {
    match variant {
        CorrectionVariant::VEff => {
            let yj = y.jet_x(profile, x)?;
            let mj = profile.m_jet(x)?;
            let (y1, y2, y3) = (yj.derivative(1), yj.derivative(2), yj.derivative(3));
            let (m, m1, m2) = (mj.value(), mj.derivative(1), mj.derivative(2));
            let r2 = y2 / y1;
            let r3 = y3 / y1;
            let geo = (r2 * r2 * 3.0 / (8.0 * m) - r3 / (4.0 * m)).re;
            let ord = m1 * m1 / (8.0 * m * m * m) * ((1.0 + 2.0 * eta).powi(2) + 4.0 * eps * (1.0 + eta))
                - eps * m2 / (4.0 * m * m);
            Ok(geo + ord)
        }
        CorrectionVariant::UEff => u_eff(profile, eta, eps, x),
    }
}

/// 𝒰_eff in μ-derivatives; vanishes for constant mass.
pub fn u_eff(profile: &MassProfile, eta: f64, eps: f64, x: f64) -> Result<f64> {
    let mu = profile.mu_jet(x)?;
    let (d1, d2, d3) = (mu.derivative(1), mu.derivative(2), mu.derivative(3));
    let c = 2.0 * eta * eta + 2.0 * eta * (1.0 + eps) + 1.5 * eps + 0.875;
    Ok(c * d2 * d2 / d1.powi(4) - (1.0 + 2.0 * eps) / 4.0 * d3 / d1.powi(3))
}

/// The part of 𝒱_eff carried by y alone: −¼ times the Schwarzian of y(μ).
pub fn y_schwarzian_part(y: &YSolution, mu: f64) -> f64 {
    let yj = y.of_mu(Jet::variable(mu));
    let r2 = yj.derivative(2) / yj.derivative(1);
    let r3 = yj.derivative(3) / yj.derivative(1);
    (r2 * r2 * 0.375 - r3 * 0.25).re
}
