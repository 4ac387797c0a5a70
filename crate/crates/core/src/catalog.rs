//! The thirteen solvable potentials, written as functions of the mass
//! integral μ, with their energy formulas.
//!
//! Quantum numbers are continuous inputs here; discreteness only shows up
//! when the verifier inverts a numeric spectrum.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SgaError};
use crate::sga::{Branch, CaseTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialId {
    Morse,
    Oscillator3d,
    Coulomb3d,
    Gpt,
    GptTrig,
    Pt,
    PtTrig,
    Scarf2,
    Scarf2Trig,
    Eckart,
    EckartTrig,
    Hulthen,
    RosenMorse,
}

impl PotentialId {
    pub const ALL: [PotentialId; 13] = [
        Self::Morse,
        Self::Oscillator3d,
        Self::Coulomb3d,
        Self::Gpt,
        Self::GptTrig,
        Self::Pt,
        Self::PtTrig,
        Self::Scarf2,
        Self::Scarf2Trig,
        Self::Eckart,
        Self::EckartTrig,
        Self::Hulthen,
        Self::RosenMorse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Morse => "morse",
            Self::Oscillator3d => "oscillator3d",
            Self::Coulomb3d => "coulomb3d",
            Self::Gpt => "gpt",
            Self::GptTrig => "gpt_trig",
            Self::Pt => "pt",
            Self::PtTrig => "pt_trig",
            Self::Scarf2 => "scarf2",
            Self::Scarf2Trig => "scarf2_trig",
            Self::Eckart => "eckart",
            Self::EckartTrig => "eckart_trig",
            Self::Hulthen => "hulthen",
            Self::RosenMorse => "rosen_morse",
        }
    }

    /// Required parameter names, in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::Morse => &["alpha", "A", "B"],
            Self::Oscillator3d => &["omega", "lambda"],
            Self::Coulomb3d => &["Ze2", "lambda"],
            Self::Gpt | Self::GptTrig | Self::Pt | Self::PtTrig | Self::Scarf2 | Self::Scarf2Trig => {
                &["alpha", "delta", "a_r", "a_t"]
            }
            Self::Eckart | Self::EckartTrig => &["alpha", "delta", "a_t", "lambda"],
            Self::Hulthen => &["alpha", "delta", "lambda", "nu", "nu_prime"],
            Self::RosenMorse => &["alpha", "delta", "a_r", "a_t", "lambda"],
        }
    }

    pub fn case(self) -> (CaseTag, Option<Branch>) {
        match self {
            Self::Morse => (CaseTag::AExponential, None),
            Self::Oscillator3d => (CaseTag::AQuadratic, None),
            Self::Coulomb3d => (CaseTag::ALinear, None),
            Self::Gpt | Self::GptTrig => (CaseTag::BI, Some(Branch::Gpt)),
            Self::Pt | Self::PtTrig => (CaseTag::BI, Some(Branch::Pt)),
            Self::Scarf2 | Self::Scarf2Trig => (CaseTag::BI, Some(Branch::Scarf)),
            Self::Eckart | Self::EckartTrig => (CaseTag::BII, Some(Branch::Eckart)),
            Self::Hulthen => (CaseTag::BII, Some(Branch::Hulthen)),
            Self::RosenMorse => (CaseTag::BII, Some(Branch::RosenMorse)),
        }
    }

    pub fn is_trig(self) -> bool {
        matches!(self, Self::GptTrig | Self::PtTrig | Self::Scarf2Trig | Self::EckartTrig)
    }

    /// Hyperbolic partner of a trigonometric entry.
    pub fn hyperbolic_partner(self) -> Option<PotentialId> {
        match self {
            Self::GptTrig => Some(Self::Gpt),
            Self::PtTrig => Some(Self::Pt),
            Self::Scarf2Trig => Some(Self::Scarf2),
            Self::EckartTrig => Some(Self::Eckart),
            _ => None,
        }
    }

    pub fn value_type(self) -> ValueType {
        if self == Self::Scarf2 {
            ValueType::Complex
        } else {
            ValueType::Real
        }
    }

    pub fn scheme(self) -> EnergyScheme {
        match self {
            Self::Morse | Self::Gpt | Self::GptTrig | Self::Pt | Self::PtTrig | Self::Scarf2 | Self::Scarf2Trig => {
                EnergyScheme::LambdaBased
            }
            Self::Oscillator3d | Self::Coulomb3d => EnergyScheme::ReducedN,
            Self::Eckart | Self::EckartTrig | Self::Hulthen | Self::RosenMorse => EnergyScheme::NuPairBased,
        }
    }

    pub fn potential_formula(self) -> &'static str {
        match self {
            Self::Morse => "B^2 exp(-2 alpha mu) - B (2A + alpha) exp(-alpha mu)",
            Self::Oscillator3d => "omega^2 mu^2/4 + (3 + 4 lambda(lambda+2))/(8 mu^2)",
            Self::Coulomb3d => "-Ze2/mu + lambda(lambda+2)/(8 mu^2)",
            Self::Gpt => "P1 cosech^2(alpha mu) + P2 cosech(alpha mu) coth(alpha mu)",
            Self::GptTrig => "P1 csc^2(alpha mu) + P2 csc(alpha mu) cot(alpha mu)",
            Self::Pt => "-C1 sech^2(alpha mu) + C2 cosech^2(alpha mu)",
            Self::PtTrig => "C1 sec^2(alpha mu) + C2 csc^2(alpha mu)",
            Self::Scarf2 => "-P1 sech^2(alpha mu) + i P2 sech(alpha mu) tanh(alpha mu)",
            Self::Scarf2Trig => "P1 sec^2(alpha mu) + P2 sec(alpha mu) tan(alpha mu)",
            Self::Eckart => "-(delta alpha^2 a_t/4) coth(alpha mu) + (alpha^2 lambda(lambda+2)/8) cosech^2(alpha mu)",
            Self::EckartTrig => "-(delta alpha^2 a_t/4) cot(alpha mu) + (alpha^2 lambda(lambda+2)/8) csc^2(alpha mu)",
            Self::Hulthen => {
                "(alpha^2/4)[lambda(lambda+2) + delta nu nu'/2] e/(2(1-e)) + (alpha^2/4) lambda(lambda+2) e^2/(2(1-e)^2), e = exp(-alpha mu)"
            }
            Self::RosenMorse => {
                "(delta alpha^2/8)(a_r - a_t) tanh(alpha mu) - (alpha^2/8) lambda(lambda+2) sech^2(alpha mu)"
            }
        }
    }

    pub fn energy_formula(self) -> &'static str {
        match self {
            Self::Morse | Self::Gpt | Self::Scarf2 => "-(alpha^2/8)(1+lambda)^2",
            Self::GptTrig | Self::Scarf2Trig => "(alpha^2/8)(1+lambda)^2",
            Self::Pt => "-(alpha^2/2)(1+lambda)^2",
            Self::PtTrig => "(alpha^2/2)(1+lambda)^2",
            Self::Oscillator3d => "2 omega n, n = nu nu'",
            Self::Coulomb3d => "-(Ze2/(2N))^2, N = nu nu'/sqrt(nu^2 + nu'^2)",
            Self::Eckart | Self::RosenMorse => "-(alpha^2/16)(4+delta^2)(nu^2+nu'^2)",
            Self::EckartTrig => "(alpha^2/16)(4-delta^2)(nu^2+nu'^2)",
            Self::Hulthen => "-(alpha^2/16)[(4+delta^2)(nu^2+nu'^2) + 4 delta nu nu']",
        }
    }
}

impl fmt::Display for PotentialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialId {
    type Err = SgaError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| SgaError::validation(format!("unknown potential '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueType {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyScheme {
    LambdaBased,
    NuPairBased,
    ReducedN,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumNumbers {
    Lambda(f64),
    NuPair { nu: f64, nu_prime: f64 },
    /// n for the oscillator, 𝒩 for Coulomb.
    Reduced(f64),
}

/// Open interval in μ; infinite ends serialize as strings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuDomain {
    #[serde(with = "extended_f64")]
    pub lo: f64,
    #[serde(with = "extended_f64")]
    pub hi: f64,
}

impl MuDomain {
    pub fn contains(&self, mu: f64) -> bool {
        mu > self.lo && mu < self.hi
    }
}

pub(crate) mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad number '{t}'"))),
            },
        }
    }
}

/// `(f64, f64)` with infinite ends written as strings.
pub(crate) mod extended_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair(#[serde(with = "super::extended_f64")] f64, #[serde(with = "super::extended_f64")] f64);

    pub fn serialize<S: Serializer>(v: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
        Pair(v.0, v.1).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(f64, f64), D::Error> {
        let Pair(a, b) = Pair::deserialize(d)?;
        Ok((a, b))
    }
}

pub type Params = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub id: PotentialId,
    pub case_tag: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    pub params: Params,
    pub mu_domain: MuDomain,
    pub value_type: ValueType,
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Parses `name=value,name=value`.
pub fn parse_params(s: &str) -> Result<Params> {
    let mut out = Params::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| SgaError::validation(format!("parameter '{item}' is not name=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| SgaError::validation(format!("parameter '{}' has non-numeric value '{v}'", k.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

pub fn make_potential(id: PotentialId, p: &Params) -> Result<PotentialModel> {
    let names = id.param_names();
    for k in p.keys() {
        if !names.contains(&k.as_str()) {
            return Err(SgaError::validation(format!("{id}: unknown parameter '{k}' (expected {})", names.join(", "))));
        }
    }
    for n in names {
        match p.get(*n) {
            None => return Err(SgaError::validation(format!("{id}: missing parameter '{n}'"))),
            Some(v) if !v.is_finite() => return Err(SgaError::validation(format!("{id}: parameter '{n}' is not finite"))),
            _ => {}
        }
    }
    let positive = |n: &str| -> Result<()> {
        if p[n] > 0.0 {
            Ok(())
        } else {
            Err(SgaError::validation(format!("{id}: parameter '{n}' must be > 0")))
        }
    };
    match id {
        PotentialId::Oscillator3d => positive("omega")?,
        PotentialId::Coulomb3d => positive("Ze2")?,
        _ => positive("alpha")?,
    }
    if id == PotentialId::Morse && p["B"] < 0.0 {
        return Err(SgaError::validation("morse: parameter 'B' must be >= 0"));
    }
    let (case_tag, branch) = id.case();
    let mu_domain = natural_domain(id, p);
    Ok(PotentialModel { id, case_tag, branch, params: p.clone(), mu_domain, value_type: id.value_type() })
}

fn natural_domain(id: PotentialId, p: &Params) -> MuDomain {
    let inf = f64::INFINITY;
    let alpha = p.get("alpha").copied().unwrap_or(1.0);
    let (lo, hi) = match id {
        PotentialId::Morse | PotentialId::Scarf2 | PotentialId::RosenMorse => (-inf, inf),
        PotentialId::Oscillator3d
        | PotentialId::Coulomb3d
        | PotentialId::Gpt
        | PotentialId::Pt
        | PotentialId::Eckart
        | PotentialId::Hulthen => (0.0, inf),
        PotentialId::GptTrig | PotentialId::EckartTrig => (0.0, PI / alpha),
        PotentialId::PtTrig => (0.0, PI / (2.0 * alpha)),
        PotentialId::Scarf2Trig => (-PI / (2.0 * alpha), PI / (2.0 * alpha)),
    };
    MuDomain { lo, hi }
}

fn lam2(l: f64) -> f64 {
    l * (l + 2.0)
}

fn finite(v: C64, mu: f64, what: &str) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(SgaError::singular(mu, format!("{what} diverges at mu = {mu}")))
    }
}

impl PotentialModel {
    pub fn p(&self, name: &str) -> f64 {
        self.params[name]
    }

    fn alpha(&self) -> f64 {
        self.p("alpha")
    }

    /// sech²/cosech² and sech·tanh/cosech·coth couplings of the GPT family.
    pub fn gpt_couplings(&self) -> (f64, f64) {
        let (a, d, ar, at) = (self.alpha(), self.p("delta"), self.p("a_r"), self.p("a_t"));
        (a * a / 32.0 * ((4.0 + d * d) * (ar + at) - 4.0), d * a * a * (ar - at) / 8.0)
    }

    /// sech²/sec² and cosech²/csc² couplings of the Pöschl-Teller family.
    pub fn pt_couplings(&self) -> (f64, f64) {
        let (a, d, ar, at) = (self.alpha(), self.p("delta"), self.p("a_r"), self.p("a_t"));
        let k = a * a / 32.0;
        (
            k * ((d + 2.0).powi(2) * at + (d - 2.0).powi(2) * ar - 4.0),
            k * ((d + 2.0).powi(2) * ar + (d - 2.0).powi(2) * at - 4.0),
        )
    }

    /// (a_r, a_t) reproducing the Morse couplings for a given δ; the
    /// linear term matches only when δα² = 1.
    pub fn morse_couplings(&self, delta: f64) -> (f64, f64) {
        let (a, aa, b) = (self.alpha(), self.p("A"), self.p("B"));
        let s = 2.0 * b / (a * a * delta * delta);
        (2.0 * b * (-2.0 * aa - a + s), 2.0 * b * (2.0 * aa + a + s))
    }

    pub fn eval_v(&self, mu: f64) -> Result<C64> {
        if !self.mu_domain.contains(mu) {
            return Err(SgaError::Range { mu, lo: self.mu_domain.lo, hi: self.mu_domain.hi });
        }
        let id = self.id;
        let v = match id {
            PotentialId::Morse => {
                let (a, aa, b) = (self.alpha(), self.p("A"), self.p("B"));
                let e = (-a * mu).exp();
                b * b * e * e - b * (2.0 * aa + a) * e
            }
            PotentialId::Oscillator3d => {
                let (w, l) = (self.p("omega"), self.p("lambda"));
                w * w * mu * mu / 4.0 + (3.0 + 4.0 * lam2(l)) / (8.0 * mu * mu)
            }
            PotentialId::Coulomb3d => -self.p("Ze2") / mu + lam2(self.p("lambda")) / (8.0 * mu * mu),
            PotentialId::Gpt => {
                let (p1, p2) = self.gpt_couplings();
                let z = self.alpha() * mu;
                let cs = 1.0 / z.sinh();
                p1 * cs * cs + p2 * cs / z.tanh()
            }
            PotentialId::GptTrig => {
                let (p1, p2) = self.gpt_couplings();
                let z = self.alpha() * mu;
                let cs = 1.0 / z.sin();
                p1 * cs * cs + p2 * cs / z.tan()
            }
            PotentialId::Pt => {
                let (c1, c2) = self.pt_couplings();
                let z = self.alpha() * mu;
                let (sh, ch) = (1.0 / z.cosh(), 1.0 / z.sinh());
                -c1 * sh * sh + c2 * ch * ch
            }
            PotentialId::PtTrig => {
                let (c1, c2) = self.pt_couplings();
                let z = self.alpha() * mu;
                let (se, cs) = (1.0 / z.cos(), 1.0 / z.sin());
                c1 * se * se + c2 * cs * cs
            }
            PotentialId::Scarf2 => {
                let (p1, p2) = self.gpt_couplings();
                let z = self.alpha() * mu;
                let sh = 1.0 / z.cosh();
                return finite(C64::new(-p1 * sh * sh, p2 * sh * z.tanh()), mu, id.name());
            }
            PotentialId::Scarf2Trig => {
                let (p1, p2) = self.gpt_couplings();
                let z = self.alpha() * mu;
                let se = 1.0 / z.cos();
                p1 * se * se + p2 * se * z.tan()
            }
            PotentialId::Eckart => {
                let a = self.alpha();
                let z = a * mu;
                let cs = 1.0 / z.sinh();
                -self.p("delta") * a * a * self.p("a_t") / 4.0 / z.tanh() + a * a * lam2(self.p("lambda")) / 8.0 * cs * cs
            }
            PotentialId::EckartTrig => {
                let a = self.alpha();
                let z = a * mu;
                let cs = 1.0 / z.sin();
                -self.p("delta") * a * a * self.p("a_t") / 4.0 / z.tan() + a * a * lam2(self.p("lambda")) / 8.0 * cs * cs
            }
            PotentialId::Hulthen => {
                let a = self.alpha();
                let l = lam2(self.p("lambda"));
                let e = (-a * mu).exp();
                let d = -(-a * mu).exp_m1();
                let nn = self.p("delta") * self.p("nu") * self.p("nu_prime") / 2.0;
                a * a / 4.0 * (l + nn) * e / (2.0 * d) + a * a / 4.0 * l * e * e / (2.0 * d * d)
            }
            PotentialId::RosenMorse => {
                let a = self.alpha();
                let z = a * mu;
                let sh = 1.0 / z.cosh();
                self.p("delta") * a * a / 8.0 * (self.p("a_r") - self.p("a_t")) * z.tanh()
                    - a * a / 8.0 * lam2(self.p("lambda")) * sh * sh
            }
        };
        finite(C64::from(v), mu, id.name())
    }

    pub fn analytic_energy(&self, qn: QuantumNumbers) -> Result<f64> {
        let id = self.id;
        let mismatch = || Err(SgaError::validation(format!("{id}: quantum numbers {qn:?} do not match its scheme")));
        match (id, qn) {
            (PotentialId::Oscillator3d, QuantumNumbers::Reduced(n)) => Ok(2.0 * self.p("omega") * n),
            (PotentialId::Oscillator3d, QuantumNumbers::NuPair { nu, nu_prime }) => {
                Ok(2.0 * self.p("omega") * nu * nu_prime)
            }
            (PotentialId::Coulomb3d, QuantumNumbers::Reduced(n)) => Ok(-(self.p("Ze2") / (2.0 * n)).powi(2)),
            (PotentialId::Coulomb3d, QuantumNumbers::NuPair { nu, nu_prime }) => {
                let n = nu * nu_prime / (nu * nu + nu_prime * nu_prime).sqrt();
                Ok(-(self.p("Ze2") / (2.0 * n)).powi(2))
            }
            (_, QuantumNumbers::Lambda(l)) if id.scheme() == EnergyScheme::LambdaBased => {
                Ok(self.lambda_kappa() * (1.0 + l).powi(2))
            }
            (PotentialId::Eckart | PotentialId::RosenMorse, QuantumNumbers::NuPair { nu, nu_prime }) => {
                let (a, d) = (self.alpha(), self.p("delta"));
                Ok(-a * a / 16.0 * (4.0 + d * d) * (nu * nu + nu_prime * nu_prime))
            }
            (PotentialId::EckartTrig, QuantumNumbers::NuPair { nu, nu_prime }) => {
                let (a, d) = (self.alpha(), self.p("delta"));
                Ok(a * a / 16.0 * (4.0 - d * d) * (nu * nu + nu_prime * nu_prime))
            }
            (PotentialId::Hulthen, QuantumNumbers::NuPair { nu, nu_prime }) => {
                let (a, d) = (self.alpha(), self.p("delta"));
                Ok(-a * a / 16.0 * ((4.0 + d * d) * (nu * nu + nu_prime * nu_prime) + 4.0 * d * nu * nu_prime))
            }
            _ => mismatch(),
        }
    }

    /// Signed κ in E = κ (1 + λ)² for λ-based entries.
    fn lambda_kappa(&self) -> f64 {
        let a2 = self.alpha().powi(2);
        match self.id {
            PotentialId::Morse | PotentialId::Gpt | PotentialId::Scarf2 => -a2 / 8.0,
            PotentialId::GptTrig | PotentialId::Scarf2Trig => a2 / 8.0,
            PotentialId::Pt => -a2 / 2.0,
            PotentialId::PtTrig => a2 / 2.0,
            _ => f64::NAN,
        }
    }

    /// Quantum label recovered from one energy: λ (λ-based entries), n
    /// (oscillator), 𝒩 (Coulomb) or ρ = √(ν² + ν′²) (ν-pair entries).
    pub fn invert_energy(&self, e: f64) -> Option<f64> {
        let a2 = self.p_or("alpha", 1.0).powi(2);
        let d = self.p_or("delta", 0.0);
        let r = match self.id {
            PotentialId::Oscillator3d => e / (2.0 * self.p("omega")),
            PotentialId::Coulomb3d => self.p("Ze2") / (2.0 * (-e).sqrt()),
            PotentialId::Eckart | PotentialId::RosenMorse => (-16.0 * e / (a2 * (4.0 + d * d))).sqrt(),
            PotentialId::EckartTrig => (16.0 * e / (a2 * (4.0 - d * d))).sqrt(),
            PotentialId::Hulthen => {
                let nn = self.p("nu") * self.p("nu_prime");
                ((-16.0 * e / a2 - 4.0 * d * nn) / (4.0 + d * d)).sqrt()
            }
            _ => (e / self.lambda_kappa()).sqrt() - 1.0,
        };
        r.is_finite().then_some(r)
    }

    /// Energy at a quantum label; the inverse of [`Self::invert_energy`].
    pub fn energy_at_label(&self, x: f64) -> f64 {
        let qn = match self.id {
            PotentialId::Oscillator3d | PotentialId::Coulomb3d => QuantumNumbers::Reduced(x),
            PotentialId::Eckart | PotentialId::EckartTrig | PotentialId::RosenMorse => {
                QuantumNumbers::NuPair { nu: x, nu_prime: 0.0 }
            }
            PotentialId::Hulthen => {
                let (a, d) = (self.alpha(), self.p("delta"));
                let nn = self.p("nu") * self.p("nu_prime");
                return -a * a / 16.0 * ((4.0 + d * d) * x * x + 4.0 * d * nn);
            }
            _ => QuantumNumbers::Lambda(x),
        };
        self.analytic_energy(qn).unwrap_or(f64::NAN)
    }

    pub fn inversion_label(&self) -> &'static str {
        match self.id {
            PotentialId::Oscillator3d => "n",
            PotentialId::Coulomb3d => "N",
            PotentialId::Eckart | PotentialId::EckartTrig | PotentialId::Hulthen | PotentialId::RosenMorse => "rho",
            _ => "lambda",
        }
    }

    /// Label step per level under the integer-spacing reading, if any.
    pub fn integer_spacing(&self) -> Option<f64> {
        match self.id.scheme() {
            EnergyScheme::LambdaBased => Some(2.0),
            _ if self.id == PotentialId::Oscillator3d => Some(1.0),
            _ => None,
        }
    }

    fn p_or(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    /// Lowest asymptotic value of Re V; states above it are not bound.
    pub fn bound_threshold(&self) -> f64 {
        match self.id {
            PotentialId::Oscillator3d
            | PotentialId::GptTrig
            | PotentialId::PtTrig
            | PotentialId::Scarf2Trig
            | PotentialId::EckartTrig => f64::INFINITY,
            PotentialId::Eckart => -self.p("delta") * self.alpha().powi(2) * self.p("a_t") / 4.0,
            PotentialId::RosenMorse => {
                -(self.p("delta") * self.alpha().powi(2) * (self.p("a_r") - self.p("a_t")) / 8.0).abs()
            }
            _ => 0.0,
        }
    }

    /// Natural length used to place the inner cut of half-line problems.
    pub fn natural_length(&self) -> f64 {
        match self.id {
            PotentialId::Oscillator3d => (std::f64::consts::SQRT_2 / self.p("omega")).sqrt(),
            PotentialId::Coulomb3d => 1.0 / self.p("Ze2"),
            _ => 1.0 / self.alpha(),
        }
    }

    /// Finite μ window on which bound states have decayed to negligible
    /// size at both ends.
    pub fn default_mu_window(&self) -> (f64, f64) {
        let l = self.natural_length();
        let cut = 1e-4 * l;
        match self.id {
            PotentialId::Morse => {
                let (a, b) = (self.alpha(), self.p("B"));
                if b > 0.0 {
                    let lo = (2.0 * b.ln() - 11.5) / (2.0 * a);
                    let well = (2.0 * b / (2.0 * self.p("A") + a).abs().max(1e-300)).ln() / a;
                    (lo.min(well - 5.0 / a), well.max(0.0) + 30.0 / a)
                } else {
                    (-30.0 / a, 30.0 / a)
                }
            }
            PotentialId::Oscillator3d => (cut, 14.0 * l),
            PotentialId::Coulomb3d => (cut, 200.0 * l),
            PotentialId::Gpt | PotentialId::Pt | PotentialId::Eckart | PotentialId::Hulthen => (cut, 40.0 * l),
            PotentialId::Scarf2 | PotentialId::RosenMorse => (-30.0 * l, 30.0 * l),
            _ => {
                let d = self.mu_domain;
                let s = 1e-3 * (d.hi - d.lo);
                (d.lo + s, d.hi - s)
            }
        }
    }

    pub fn is_half_line(&self) -> bool {
        self.mu_domain.lo == 0.0 && self.mu_domain.hi.is_infinite()
    }
}

/// Hyperbolic entries written with complex α (and δ), so that α → iα
/// (and δ → −iδ for Eckart) can be taken literally.
pub fn eval_continued(id: PotentialId, p: &Params, alpha: C64, delta: C64, mu: f64) -> Result<C64> {
    let g = |n: &str| -> Result<f64> {
        p.get(n).copied().ok_or_else(|| SgaError::validation(format!("{id}: missing parameter '{n}'")))
    };
    let z = alpha * mu;
    let a2 = alpha * alpha;
    let i = C64::i();
    let v = match id {
        PotentialId::Gpt | PotentialId::Scarf2 => {
            let (ar, at) = (g("a_r")?, g("a_t")?);
            let p1 = a2 / 32.0 * ((delta * delta + 4.0) * (ar + at) - 4.0);
            let p2 = delta * a2 * (ar - at) / 8.0;
            if id == PotentialId::Gpt {
                p1 / (z.sinh() * z.sinh()) + p2 * z.cosh() / (z.sinh() * z.sinh())
            } else {
                -p1 / (z.cosh() * z.cosh()) + i * p2 * z.sinh() / (z.cosh() * z.cosh())
            }
        }
        PotentialId::Pt => {
            let (ar, at) = (g("a_r")?, g("a_t")?);
            let dp = (delta + 2.0) * (delta + 2.0);
            let dm = (delta - 2.0) * (delta - 2.0);
            let c1 = a2 / 32.0 * (dp * at + dm * ar - 4.0);
            let c2 = a2 / 32.0 * (dp * ar + dm * at - 4.0);
            -c1 / (z.cosh() * z.cosh()) + c2 / (z.sinh() * z.sinh())
        }
        PotentialId::Eckart => {
            let (at, l) = (g("a_t")?, g("lambda")?);
            -delta * a2 * at / 4.0 * z.cosh() / z.sinh() + a2 * lam2(l) / 8.0 / (z.sinh() * z.sinh())
        }
        _ => return Err(SgaError::validation(format!("{id} has no continued form"))),
    };
    finite(v, mu, id.name())
}

/// Energy of a hyperbolic entry with complex α (and δ).
pub fn energy_continued(id: PotentialId, alpha: C64, delta: C64, qn: QuantumNumbers) -> Result<C64> {
    let a2 = alpha * alpha;
    match (id, qn) {
        (PotentialId::Gpt | PotentialId::Scarf2, QuantumNumbers::Lambda(l)) => Ok(-a2 / 8.0 * (1.0 + l).powi(2)),
        (PotentialId::Pt, QuantumNumbers::Lambda(l)) => Ok(-a2 / 2.0 * (1.0 + l).powi(2)),
        (PotentialId::Eckart, QuantumNumbers::NuPair { nu, nu_prime }) => {
            Ok(-a2 / 16.0 * (delta * delta + 4.0) * (nu * nu + nu_prime * nu_prime))
        }
        _ => Err(SgaError::validation(format!("{id}: no continued energy for {qn:?}"))),
    }
}

pub fn isospectral_pairs() -> Vec<(PotentialId, PotentialId)> {
    vec![(PotentialId::Gpt, PotentialId::Scarf2), (PotentialId::Eckart, PotentialId::RosenMorse)]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: PotentialId,
    pub case_tag: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    pub params: Vec<String>,
    pub mu_domain: String,
    pub value_type: ValueType,
    pub energy_scheme: EnergyScheme,
    pub potential: String,
    pub energy: String,
}

pub fn catalog_listing() -> Vec<CatalogEntry> {
    PotentialId::ALL
        .iter()
        .map(|&id| {
            let (case_tag, branch) = id.case();
            let mu_domain = match id {
                PotentialId::Morse | PotentialId::Scarf2 | PotentialId::RosenMorse => "(-inf, inf)",
                PotentialId::GptTrig | PotentialId::EckartTrig => "(0, pi/alpha)",
                PotentialId::PtTrig => "(0, pi/(2 alpha))",
                PotentialId::Scarf2Trig => "(-pi/(2 alpha), pi/(2 alpha))",
                _ => "(0, inf)",
            };
            CatalogEntry {
                id,
                case_tag,
                branch,
                params: id.param_names().iter().map(|s| s.to_string()).collect(),
                mu_domain: mu_domain.into(),
                value_type: id.value_type(),
                energy_scheme: id.scheme(),
                potential: id.potential_formula().into(),
                energy: id.energy_formula().into(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn model(id: PotentialId, pairs: &[(&str, f64)]) -> PotentialModel {
        make_potential(id, &params(pairs)).unwrap()
    }

    fn re(m: &PotentialModel, mu: f64) -> f64 {
        m.eval_v(mu).unwrap().re
    }

    #[test]
    fn construction_examples() {
        let m = model(PotentialId::Morse, &[("alpha", 1.0), ("A", 3.0), ("B", 0.0)]);
        for mu in [-3.0, 0.0, 2.5] {
            assert_eq!(re(&m, mu), 0.0);
        }
        let o = model(PotentialId::Oscillator3d, &[("omega", 1.0), ("lambda", 0.0)]);
        for mu in [0.3, 1.0, 4.0] {
            assert_relative_eq!(re(&o, mu), mu * mu / 4.0 + 3.0 / (8.0 * mu * mu), max_relative = 1e-15);
        }
        let c = model(PotentialId::Coulomb3d, &[("Ze2", 1.0), ("lambda", 0.0)]);
        assert_eq!(re(&c, 2.0), -0.5);
    }

    #[test]
    fn evaluation_examples() {
        let m = model(PotentialId::Morse, &[("alpha", 2.0), ("A", 1.0), ("B", 1.0)]);
        assert_eq!(re(&m, 0.0), -3.0);
        let e = model(PotentialId::Eckart, &[("alpha", 1.0), ("delta", 2.0), ("a_t", 1.0), ("lambda", 0.0)]);
        assert_relative_eq!(re(&e, 40.0), -0.5, max_relative = 1e-12);
        let r = model(
            PotentialId::RosenMorse,
            &[("alpha", 1.0), ("delta", 2.0), ("a_r", 3.0), ("a_t", 1.0), ("lambda", 0.0)],
        );
        assert_eq!(re(&r, 0.0), 0.0);
    }

    #[test]
    fn energy_examples() {
        let m = model(PotentialId::Morse, &[("alpha", 2.0), ("A", 1.0), ("B", 1.0)]);
        assert_eq!(m.analytic_energy(QuantumNumbers::Lambda(1.0)).unwrap(), -2.0);
        assert_eq!(m.analytic_energy(QuantumNumbers::Lambda(-1.0)).unwrap(), 0.0);
        let h = model(
            PotentialId::Hulthen,
            &[("alpha", 2.0), ("delta", 2.0), ("lambda", 0.0), ("nu", 1.0), ("nu_prime", 1.0)],
        );
        assert_eq!(h.analytic_energy(QuantumNumbers::NuPair { nu: 1.0, nu_prime: 1.0 }).unwrap(), -6.0);
        assert!(matches!(
            m.analytic_energy(QuantumNumbers::NuPair { nu: 1.0, nu_prime: 1.0 }),
            Err(SgaError::Validation(_))
        ));
        let o = model(PotentialId::Oscillator3d, &[("omega", 1.5), ("lambda", 0.0)]);
        assert_eq!(o.analytic_energy(QuantumNumbers::Reduced(2.0)).unwrap(), 6.0);
        let c = model(PotentialId::Coulomb3d, &[("Ze2", 2.0), ("lambda", 0.0)]);
        let n: f64 = 3.0 * 4.0 / 5.0;
        assert_relative_eq!(
            c.analytic_energy(QuantumNumbers::NuPair { nu: 3.0, nu_prime: 4.0 }).unwrap(),
            -(1.0f64 / n).powi(2),
            max_relative = 1e-15
        );
    }

    #[test]
    fn isospectral_pair_list() {
        let p = isospectral_pairs();
        assert!(p.contains(&(PotentialId::Gpt, PotentialId::Scarf2)));
        assert!(p.contains(&(PotentialId::Eckart, PotentialId::RosenMorse)));
        assert!(!p.contains(&(PotentialId::Morse, PotentialId::Hulthen)));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn rejections_name_the_parameter() {
        let err = make_potential(PotentialId::Morse, &params(&[("alpha", 0.0), ("A", 1.0), ("B", 1.0)])).unwrap_err();
        assert!(err.to_string().contains("alpha"));
        let err = make_potential(PotentialId::Morse, &params(&[("alpha", 1.0), ("A", 1.0), ("B", -1.0)])).unwrap_err();
        assert!(err.to_string().contains("'B'"));
        let err = make_potential(PotentialId::Oscillator3d, &params(&[("omega", -1.0), ("lambda", 0.0)])).unwrap_err();
        assert!(err.to_string().contains("omega"));
        let err = make_potential(PotentialId::Coulomb3d, &params(&[("Ze2", 0.0), ("lambda", 0.0)])).unwrap_err();
        assert!(err.to_string().contains("Ze2"));
        let err = make_potential(
            PotentialId::Hulthen,
            &params(&[("alpha", 1.0), ("delta", 1.0), ("lambda", 0.0), ("nu", 1.0)]),
        )
        .unwrap_err();
        assert!(err.to_string().contains("nu_prime"));
        let err = make_potential(PotentialId::Coulomb3d, &params(&[("Ze2", 1.0), ("lambda", 0.0), ("x", 1.0)]))
            .unwrap_err();
        assert!(err.to_string().contains("'x'"));
    }

    #[test]
    fn singular_points_and_range() {
        let g = model(PotentialId::Gpt, &[("alpha", 1.0), ("delta", 2.0), ("a_r", 1.0), ("a_t", 81.0)]);
        assert!(matches!(g.eval_v(0.0), Err(SgaError::Range { .. })));
        let t = model(PotentialId::GptTrig, &[("alpha", 1.0), ("delta", 2.0), ("a_r", 1.0), ("a_t", 2.0)]);
        assert!(matches!(t.eval_v(PI), Err(SgaError::Range { .. })));
        let cont = eval_continued(PotentialId::Gpt, &g.params, C64::from(1.0), C64::from(2.0), 0.0);
        assert!(matches!(cont, Err(SgaError::Singularity { .. })));
    }

    #[test]
    fn parse_and_names_round_trip() {
        for id in PotentialId::ALL {
            assert_eq!(id.name().parse::<PotentialId>().unwrap(), id);
            let js = serde_json::to_string(&id).unwrap();
            assert_eq!(js, format!("\"{}\"", id.name()));
        }
        assert!("nope".parse::<PotentialId>().is_err());
        let p = parse_params("alpha=1, A=3,B=1").unwrap();
        assert_eq!(p["A"], 3.0);
        assert!(parse_params("alpha").is_err());
        assert!(parse_params("alpha=x").is_err());
    }

    #[test]
    fn scarf2_is_the_only_complex_entry() {
        for id in PotentialId::ALL {
            assert_eq!(id.value_type() == ValueType::Complex, id == PotentialId::Scarf2);
        }
    }

    #[test]
    fn gpt_decays_like_exponentials() {
        let g = model(PotentialId::Gpt, &[("alpha", 1.3), ("delta", 2.0), ("a_r", 1.0), ("a_t", 5.0)]);
        let (p1, p2) = g.gpt_couplings();
        for mu in [10.0, 15.0, 20.0] {
            let z: f64 = 1.3 * mu;
            let asym = 4.0 * p1 * (-2.0 * z).exp() + 2.0 * p2 * (-z).exp();
            assert_relative_eq!(re(&g, mu), asym, max_relative = 1e-6);
        }
        // the leading tail is the cosech·coth term, like the Morse linear term
        let far = re(&g, 25.0) / (2.0 * p2 * (-1.3f64 * 25.0).exp());
        assert!((far - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thresholds_and_windows() {
        let e = model(PotentialId::Eckart, &[("alpha", 1.0), ("delta", 2.0), ("a_t", 10.0), ("lambda", 1.0)]);
        assert_eq!(e.bound_threshold(), -5.0);
        let (lo, hi) = e.default_mu_window();
        assert!(lo > 0.0 && hi == 40.0);
        let o = model(PotentialId::Oscillator3d, &[("omega", 1.0), ("lambda", 0.0)]);
        assert!(o.bound_threshold().is_infinite());
        let s = model(PotentialId::Scarf2Trig, &[("alpha", 2.0), ("delta", 2.0), ("a_r", 1.0), ("a_t", 2.0)]);
        let (lo, hi) = s.default_mu_window();
        assert!(lo > -PI / 4.0 && hi < PI / 4.0 && (lo + hi).abs() < 1e-15);
        let m = model(PotentialId::Morse, &[("alpha", 1.0), ("A", 3.0), ("B", 1.0)]);
        let (lo, _) = m.default_mu_window();
        assert!(re(&m, lo) > 1e4);
    }

    #[test]
    fn inversion_undoes_energy() {
        let m = model(PotentialId::Pt, &[("alpha", 0.7), ("delta", 2.0), ("a_r", 1.0), ("a_t", 60.0)]);
        let e = m.analytic_energy(QuantumNumbers::Lambda(3.25)).unwrap();
        assert_relative_eq!(m.invert_energy(e).unwrap(), 3.25, max_relative = 1e-14);
        let h = model(
            PotentialId::Hulthen,
            &[("alpha", 1.0), ("delta", 0.5), ("lambda", 1.0), ("nu", 1.5), ("nu_prime", 2.0)],
        );
        let e = h.analytic_energy(QuantumNumbers::NuPair { nu: 1.5, nu_prime: 2.0 }).unwrap();
        assert_relative_eq!(h.invert_energy(e).unwrap(), 2.5, max_relative = 1e-14);
        let c = model(PotentialId::Coulomb3d, &[("Ze2", 1.0), ("lambda", 0.0)]);
        assert_relative_eq!(c.invert_energy(-0.125).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        for m in [&m, &h, &c] {
            let e = m.energy_at_label(2.75);
            assert_relative_eq!(m.invert_energy(e).unwrap(), 2.75, max_relative = 1e-13);
        }
    }

    #[test]
    fn morse_coupling_identification() {
        let m = model(PotentialId::Morse, &[("alpha", 1.0), ("A", 3.0), ("B", 2.0)]);
        let (ar, at) = m.morse_couplings(1.0);
        // linear and quadratic Morse couplings in terms of (a_r, a_t) at δα² = 1
        assert_relative_eq!((ar + at) / 8.0, 4.0, max_relative = 1e-15);
        assert_relative_eq!((ar - at) / 4.0, -2.0 * 7.0, max_relative = 1e-15);
    }

    #[test]
    fn catalog_listing_is_complete() {
        let l = catalog_listing();
        assert_eq!(l.len(), 13);
        let js = serde_json::to_value(&l).unwrap();
        assert_eq!(js[0]["id"], "morse");
        assert_eq!(js[7]["value_type"], "complex");
    }

    #[test]
    fn model_json_round_trip_keeps_infinite_domain() {
        let m = model(PotentialId::Morse, &[("alpha", 1.0), ("A", 3.0), ("B", 1.0)]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"-inf\""));
        let back: PotentialModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    fn dual_params(id: PotentialId, d: f64, ar: f64, at: f64, l: f64) -> Params {
        match id {
            PotentialId::EckartTrig => params(&[("alpha", 0.0), ("delta", d), ("a_t", at), ("lambda", l)]),
            _ => params(&[("alpha", 0.0), ("delta", d), ("a_r", ar), ("a_t", at)]),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn trig_equals_continued_hyperbolic(
            alpha in 0.3f64..3.0, d in -3.0f64..3.0, ar in -5.0f64..5.0, at in -5.0f64..5.0,
            l in -0.5f64..3.0, t in 0.02f64..0.98,
        ) {
            for trig in [PotentialId::GptTrig, PotentialId::PtTrig, PotentialId::Scarf2Trig, PotentialId::EckartTrig] {
                let mut p = dual_params(trig, d, ar, at, l);
                p.insert("alpha".into(), alpha);
                let m = make_potential(trig, &p).unwrap();
                let dom = m.mu_domain;
                let mu = dom.lo + t * (dom.hi - dom.lo);
                let hyp = trig.hyperbolic_partner().unwrap();
                let a = C64::new(0.0, alpha);
                let dd = if trig == PotentialId::EckartTrig { C64::new(0.0, -d) } else { C64::from(d) };
                let lhs = m.eval_v(mu).unwrap();
                let rhs = eval_continued(hyp, &p, a, dd, mu).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{trig}: {lhs} vs {rhs}");
                let qn = if trig == PotentialId::EckartTrig {
                    QuantumNumbers::NuPair { nu: l + 1.0, nu_prime: l }
                } else {
                    QuantumNumbers::Lambda(l)
                };
                let e_t = m.analytic_energy(qn).unwrap();
                let e_c = energy_continued(hyp, a, dd, qn).unwrap();
                prop_assert!(e_c.im.abs() <= 1e-15 * e_c.re.abs() && (e_c.re - e_t).abs() <= 1e-14 * e_t.abs().max(1.0));
            }
        }

        #[test]
        fn trig_energy_is_sign_flip(alpha in 0.1f64..4.0, l in -2.0f64..6.0) {
            for trig in [PotentialId::GptTrig, PotentialId::PtTrig, PotentialId::Scarf2Trig] {
                let p = params(&[("alpha", alpha), ("delta", 1.0), ("a_r", 1.0), ("a_t", 2.0)]);
                let t = make_potential(trig, &p).unwrap();
                let h = make_potential(trig.hyperbolic_partner().unwrap(), &p).unwrap();
                let qn = QuantumNumbers::Lambda(l);
                prop_assert_eq!(t.analytic_energy(qn).unwrap(), -h.analytic_energy(qn).unwrap());
            }
        }

        #[test]
        fn scarf2_is_pt_symmetric(alpha in 0.1f64..3.0, d in -3.0f64..3.0, ar in -5.0f64..5.0, at in -5.0f64..5.0, mu in -20.0f64..20.0) {
            let m = make_potential(PotentialId::Scarf2, &params(&[("alpha", alpha), ("delta", d), ("a_r", ar), ("a_t", at)])).unwrap();
            prop_assert_eq!(m.eval_v(-mu).unwrap(), m.eval_v(mu).unwrap().conj());
        }

        #[test]
        fn hyperbolic_closed_forms_match_continued_at_real_alpha(
            alpha in 0.2f64..3.0, d in -3.0f64..3.0, ar in -5.0f64..5.0, at in -5.0f64..5.0, mu in 0.05f64..8.0,
        ) {
            for id in [PotentialId::Gpt, PotentialId::Pt, PotentialId::Scarf2] {
                let p = params(&[("alpha", alpha), ("delta", d), ("a_r", ar), ("a_t", at)]);
                let m = make_potential(id, &p).unwrap();
                let a = m.eval_v(mu).unwrap();
                let b = eval_continued(id, &p, C64::from(alpha), C64::from(d), mu).unwrap();
                prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
            }
        }
    }
}
