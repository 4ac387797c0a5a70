//! Dimensionless position-dependent masses m(x) and the mass integral
//! μ(x) = ∫ √m, the coordinate every catalog potential is written in.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SgaError};
use crate::jet::Jet;
use crate::quad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// m ≡ m0 (params: `[m0]`, default 1).
    Constant,
    /// m = exp(2βx) (params: `[β]`).
    Exponential,
    /// m = (1 + (x/w)²)^-2 (params: `[]` or `[w]`).
    RationalArctan,
    /// Natural cubic spline through tabulated `(x, ln m)`.
    UserTabulated,
}

impl ProfileKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "exponential" => Ok(Self::Exponential),
            "rational-arctan" | "arctan" => Ok(Self::RationalArctan),
            "user-tabulated" | "tabulated" => Ok(Self::UserTabulated),
            _ => Err(SgaError::validation(format!("unknown profile kind '{s}'"))),
        }
    }
}

#[derive(Debug)]
struct Table {
    x: Vec<f64>,
    lnm: Vec<f64>,
    // second derivatives of the ln m spline at the knots
    m2: Vec<f64>,
    // Φ(x_i) = ∫_{x_0}^{x_i} √m
    phi: Vec<f64>,
}

impl Table {
    fn new(x: Vec<f64>, m: Vec<f64>) -> Result<Self> {
        if x.len() != m.len() || x.len() < 4 {
            return Err(SgaError::validation("mass table needs at least 4 (x, m) rows"));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(SgaError::validation(format!(
                    "mass table x column must be strictly increasing (at x = {})",
                    w[1]
                )));
            }
        }
        if let Some((xi, mi)) = x.iter().zip(&m).find(|(_, &mi)| !(mi > 0.0) || !mi.is_finite()) {
            return Err(SgaError::validation(format!("non-positive mass m = {mi} at x = {xi}")));
        }
        let lnm: Vec<f64> = m.iter().map(|v| v.ln()).collect();
        let m2 = natural_spline(&x, &lnm);
        let mut t = Self { x, lnm, m2, phi: Vec::new() };
        let mut phi = vec![0.0; t.x.len()];
        for i in 1..t.x.len() {
            let (v, _) = quad::integrate(|u| (0.5 * t.lnm_at(i - 1, u)).exp(), t.x[i - 1], t.x[i], 1e-13);
            phi[i] = phi[i - 1] + v;
        }
        t.phi = phi;
        Ok(t)
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    fn coeffs(&self, i: usize) -> [f64; 4] {
        let h = self.x[i + 1] - self.x[i];
        let (y0, y1) = (self.lnm[i], self.lnm[i + 1]);
        let (a, b) = (self.m2[i], self.m2[i + 1]);
        [y0, (y1 - y0) / h - h * (2.0 * a + b) / 6.0, 0.5 * a, (b - a) / (6.0 * h)]
    }

    fn lnm_at(&self, i: usize, x: f64) -> f64 {
        let c = self.coeffs(i);
        let t = x - self.x[i];
        c[0] + t * (c[1] + t * (c[2] + t * c[3]))
    }

    fn lnm_jet(&self, x: f64) -> Jet<f64> {
        let i = self.interval(x);
        let c = self.coeffs(i);
        let t = Jet::variable(x - self.x[i]);
        ((t * c[3] + c[2]) * t + c[1]) * t + c[0]
    }

    fn phi(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let (v, _) = quad::integrate(|u| (0.5 * self.lnm_at(i, u)).exp(), self.x[i], x, 1e-13);
        self.phi[i] + v
    }
}

fn natural_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m2 = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    // Thomas algorithm on the interior equations
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        if i > 1 {
            let w = h0 / diag[i - 1];
            diag[i] -= w * h0;
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        let h1 = x[i + 1] - x[i];
        m2[i] = (rhs[i] - h1 * m2[i + 1]) / diag[i];
    }
    m2
}

/// A positive mass function with its mass integral, fixed by an anchor
/// `μ(x0) = μ0`. Immutable and cheap to clone.
#[derive(Clone, Debug)]
pub struct MassProfile {
    kind: ProfileKind,
    params: Vec<f64>,
    domain: (f64, f64),
    anchor: (f64, f64),
    table: Option<Arc<Table>>,
    // additive constant of the closed-form μ
    offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDescriptor {
    pub kind: ProfileKind,
    pub params: Vec<f64>,
    #[serde(with = "crate::catalog::extended_pair")]
    pub domain: (f64, f64),
    pub anchor: (f64, f64),
    #[serde(with = "crate::catalog::extended_pair")]
    pub mu_image: (f64, f64),
}

/// Columns of a two-column `x,m` CSV with a header row.
pub fn read_mass_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "m" {
        return Err(SgaError::validation("mass table header must be exactly `x,m`"));
    }
    let (mut xs, mut ms) = (Vec::new(), Vec::new());
    for row in rdr.deserialize() {
        let (x, m): (f64, f64) = row?;
        xs.push(x);
        ms.push(m);
    }
    Ok((xs, ms))
}

pub fn make_profile(kind: ProfileKind, params: &[f64], anchor: (f64, f64)) -> Result<MassProfile> {
    MassProfile::new(kind, params, anchor)
}

impl MassProfile {
    pub fn new(kind: ProfileKind, params: &[f64], anchor: (f64, f64)) -> Result<Self> {
        let (x0, mu0) = anchor;
        if !x0.is_finite() || !mu0.is_finite() {
            return Err(SgaError::validation("anchor must be finite"));
        }
        let full = (f64::NEG_INFINITY, f64::INFINITY);
        let (params, offset) = match kind {
            ProfileKind::Constant => {
                let m0 = match params {
                    [] => 1.0,
                    [m0] => *m0,
                    _ => return Err(SgaError::validation("constant profile takes at most one parameter")),
                };
                if !(m0 > 0.0) || !m0.is_finite() {
                    return Err(SgaError::validation(format!("non-positive mass m = {m0} at x = {x0}")));
                }
                (vec![m0], mu0 - m0.sqrt() * x0)
            }
            ProfileKind::Exponential => {
                let beta = match params {
                    [b] => *b,
                    _ => return Err(SgaError::validation("exponential profile takes exactly one parameter β")),
                };
                if beta == 0.0 || !beta.is_finite() {
                    return Err(SgaError::validation("exponential rate β must be finite and nonzero"));
                }
                (vec![beta], mu0 - (beta * x0).exp() / beta)
            }
            ProfileKind::RationalArctan => {
                let w = match params {
                    [] => 1.0,
                    [w] => *w,
                    _ => return Err(SgaError::validation("rational-arctan profile takes at most one width")),
                };
                if !(w > 0.0) || !w.is_finite() {
                    return Err(SgaError::validation("rational-arctan width must be positive"));
                }
                (vec![w], mu0 - w * (x0 / w).atan())
            }
            ProfileKind::UserTabulated => {
                return Err(SgaError::validation("tabulated profiles are built with from_table or from_csv"))
            }
        };
        Ok(Self { kind, params, domain: full, anchor, table: None, offset })
    }

    pub fn constant(m0: f64) -> Self {
        Self::new(ProfileKind::Constant, &[m0], (0.0, 0.0)).expect("positive constant mass")
    }

    /// m = exp(2βx) anchored so that μ = exp(βx)/β + shift.
    pub fn exponential(beta: f64, shift: f64) -> Result<Self> {
        Self::new(ProfileKind::Exponential, &[beta], (0.0, 1.0 / beta + shift))
    }

    pub fn from_table(x: Vec<f64>, m: Vec<f64>, anchor: (f64, f64)) -> Result<Self> {
        let table = Table::new(x, m)?;
        let domain = (table.x[0], *table.x.last().expect("non-empty"));
        let (x0, mu0) = anchor;
        if !(x0 >= domain.0 && x0 <= domain.1) {
            return Err(SgaError::Domain { x: x0, lo: domain.0, hi: domain.1 });
        }
        let offset = mu0 - table.phi(x0);
        Ok(Self {
            kind: ProfileKind::UserTabulated,
            params: Vec::new(),
            domain,
            anchor,
            table: Some(Arc::new(table)),
            offset,
        })
    }

    /// Reads a two-column `x,m` CSV with a header row.
    pub fn from_csv(path: &Path, anchor: (f64, f64)) -> Result<Self> {
        let (xs, ms) = read_mass_table(path)?;
        Self::from_table(xs, ms, anchor)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn anchor(&self) -> (f64, f64) {
        self.anchor
    }

    pub fn descriptor(&self) -> ProfileDescriptor {
        ProfileDescriptor {
            kind: self.kind,
            params: self.params.clone(),
            domain: self.domain,
            anchor: self.anchor,
            mu_image: self.mu_image(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.kind == ProfileKind::Constant
    }

    fn check_x(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        let inside = if self.table.is_some() { x >= lo && x <= hi } else { x.is_finite() };
        if inside {
            Ok(())
        } else {
            Err(SgaError::Domain { x, lo, hi })
        }
    }

    pub fn m(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(match self.kind {
            ProfileKind::Constant => self.params[0],
            ProfileKind::Exponential => (2.0 * self.params[0] * x).exp(),
            ProfileKind::RationalArctan => {
                let t = x / self.params[0];
                (1.0 + t * t).powi(-2)
            }
            ProfileKind::UserTabulated => {
                let tab = self.table.as_ref().expect("table");
                tab.lnm_at(tab.interval(x), x).exp()
            }
        })
    }

    /// Taylor jet of m about `x`.
    pub fn m_jet(&self, x: f64) -> Result<Jet<f64>> {
        self.check_x(x)?;
        let v = Jet::variable(x);
        Ok(match self.kind {
            ProfileKind::Constant => Jet::constant(self.params[0]),
            ProfileKind::Exponential => (v * (2.0 * self.params[0])).exp(),
            ProfileKind::RationalArctan => {
                let t = v * (1.0 / self.params[0]);
                ((t * t) + 1.0).powi(-2)
            }
            ProfileKind::UserTabulated => self.table.as_ref().expect("table").lnm_jet(x).exp(),
        })
    }

    /// Taylor jet of μ about `x`; its derivative series is exactly √m.
    pub fn mu_jet(&self, x: f64) -> Result<Jet<f64>> {
        let m = self.m_jet(x)?;
        let root = match self.kind {
            ProfileKind::Exponential => (Jet::variable(x) * self.params[0]).exp(),
            _ => m.sqrt(),
        };
        Ok(root.integrate(self.mu(x)?))
    }

    pub fn mu(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(match self.kind {
            ProfileKind::Constant => self.params[0].sqrt() * x + self.offset,
            ProfileKind::Exponential => {
                let b = self.params[0];
                (b * x).exp() / b + self.offset
            }
            ProfileKind::RationalArctan => {
                let w = self.params[0];
                w * (x / w).atan() + self.offset
            }
            ProfileKind::UserTabulated => self.table.as_ref().expect("table").phi(x) + self.offset,
        })
    }

    /// μ by adaptive quadrature of √m from the anchor, for any kind.
    pub fn mu_by_quadrature(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let (x0, mu0) = self.anchor;
        let (v, _) = quad::integrate(|u| self.m(u).map(f64::sqrt).unwrap_or(f64::NAN), x0, x, 1e-12);
        Ok(mu0 + v)
    }

    /// Open interval μ(domain).
    pub fn mu_image(&self) -> (f64, f64) {
        match self.kind {
            ProfileKind::Constant => (f64::NEG_INFINITY, f64::INFINITY),
            ProfileKind::Exponential => {
                if self.params[0] > 0.0 {
                    (self.offset, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, self.offset)
                }
            }
            ProfileKind::RationalArctan => {
                let w = self.params[0];
                let half = w * std::f64::consts::FRAC_PI_2;
                (self.offset - half, self.offset + half)
            }
            ProfileKind::UserTabulated => {
                let tab = self.table.as_ref().expect("table");
                (self.offset, tab.phi.last().expect("non-empty") + self.offset)
            }
        }
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.mu_image();
        let closed = self.table.is_some();
        if closed {
            lo >= a && hi <= b
        } else {
            lo > a && hi < b
        }
    }

    pub fn mu_inverse(&self, mu: f64) -> Result<f64> {
        let (lo, hi) = self.mu_image();
        let inside = if self.table.is_some() { mu >= lo && mu <= hi } else { mu > lo && mu < hi };
        if !inside {
            return Err(SgaError::Range { mu, lo, hi });
        }
        Ok(match self.kind {
            ProfileKind::Constant => (mu - self.offset) / self.params[0].sqrt(),
            ProfileKind::Exponential => {
                let b = self.params[0];
                (b * (mu - self.offset)).ln() / b
            }
            ProfileKind::RationalArctan => {
                let w = self.params[0];
                w * ((mu - self.offset) / w).tan()
            }
            ProfileKind::UserTabulated => self.tabulated_inverse(mu),
        })
    }

    fn tabulated_inverse(&self, mu: f64) -> f64 {
        let tab = self.table.as_ref().expect("table");
        let target = mu - self.offset;
        let i = match tab.phi.partition_point(|&p| p <= target) {
            0 => 0,
            p if p >= tab.phi.len() => tab.phi.len() - 2,
            p => p - 1,
        };
        let (mut a, mut b) = (tab.x[i], tab.x[i + 1]);
        let mut x = a + (b - a) * (target - tab.phi[i]) / (tab.phi[i + 1] - tab.phi[i]);
        for _ in 0..100 {
            let f = tab.phi(x) - target;
            if f.abs() < 1e-13 {
                break;
            }
            if f > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let step = f / (0.5 * tab.lnm_at(i, x)).exp();
            let newton = x - step;
            x = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
            if b - a < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        x
    }
}
