//! Finite-difference bound-state solver for the von Roos Hamiltonian.

mod hamiltonian;
pub mod tridiag;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use hamiltonian::{build_hamiltonian, Hamiltonian};

use crate::catalog::extended_f64;
use crate::error::{Result, SgaError};
use crate::mass::MassProfile;

/// Reality gate for the complex path: |Im E| < REL·|Re E| + ABS.
pub const REALITY_REL: f64 = 1e-6;
pub const REALITY_ABS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingParams {
    pub eta: f64,
    pub eps: f64,
    pub rho: f64,
}

impl OrderingParams {
    pub const BEN_DANIEL_DUKE: Self = Self { eta: 0.0, eps: -1.0, rho: 0.0 };
    pub const ZHU_KROEMER: Self = Self { eta: -0.5, eps: 0.0, rho: -0.5 };
    pub const GORA_WILLIAMS: Self = Self { eta: -1.0, eps: 0.0, rho: 0.0 };

    pub fn new(eta: f64, eps: f64, rho: f64) -> Result<Self> {
        if !(eta.is_finite() && eps.is_finite() && rho.is_finite()) {
            return Err(SgaError::validation("ordering parameters must be finite"));
        }
        if (eta + eps + rho + 1.0).abs() >= 1e-14 {
            return Err(SgaError::validation(format!("ordering ({eta}, {eps}, {rho}) violates eta + eps + rho = -1")));
        }
        Ok(Self { eta, eps, rho })
    }
}

impl FromStr for OrderingParams {
    type Err = SgaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bdd" | "ben-daniel-duke" => return Ok(Self::BEN_DANIEL_DUKE),
            "zk" | "zhu-kroemer" => return Ok(Self::ZHU_KROEMER),
            "gw" | "gora-williams" => return Ok(Self::GORA_WILLIAMS),
            _ => {}
        }
        let v = parse_list(s, 3, "ordering")?;
        Self::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for OrderingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.eta, self.eps, self.rho)
    }
}

/// Parses exactly `n` comma-separated numbers.
pub fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| SgaError::validation(format!("{what}: '{s}' is not a list of numbers")))?;
    if v.len() != n {
        return Err(SgaError::validation(format!("{what}: expected {n} comma-separated values, got {}", v.len())));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
}

/// Uniform grid of `n` interior nodes; the end points carry ψ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "dirichlet")]
    pub bc: Boundary,
}

fn dirichlet() -> Boundary {
    Boundary::Dirichlet
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(SgaError::Grid(format!("bad interval [{x_lo}, {x_hi}]")));
        }
        if n < Self::MIN_POINTS {
            return Err(SgaError::Grid(format!("N = {n} is below the minimum {}", Self::MIN_POINTS)));
        }
        Ok(Self { x_lo, x_hi, n, bc: Boundary::Dirichlet })
    }

    pub fn h(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.n + 1) as f64
    }

    /// Interior node `i` (0-based).
    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + (i + 1) as f64 * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.x_lo, self.x_hi, n)
    }
}

impl FromStr for Grid {
    type Err = SgaError;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_list(s, 3, "grid")?;
        if v[2].fract() != 0.0 || v[2] < 0.0 {
            return Err(SgaError::Grid(format!("N = {} is not a whole number", v[2])));
        }
        Self::new(v[0], v[1], v[2] as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialOnGrid {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

impl PotentialOnGrid {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        match self {
            Self::Real(v) => v.iter().position(|x| !x.is_finite()),
            Self::Complex(v) => v.iter().position(|x| !(x.re.is_finite() && x.im.is_finite())),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Self::Complex(_))
    }
}

/// Closure producing the potential on a grid; `refine` calls it once per
/// resolution.
pub type PotentialFn<'a> = dyn Fn(&Grid) -> Result<PotentialOnGrid> + Sync + 'a;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub x_lo: f64,
    pub x_hi: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        Self { x_lo: g.x_lo, x_hi: g.x_hi, n: g.n }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Real parts, ascending.
    pub eigenvalues: Vec<f64>,
    /// Imaginary parts on the complex path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag_parts: Option<Vec<f64>>,
    pub error_estimates: Vec<f64>,
    pub bound: Vec<bool>,
    pub k_requested: usize,
    #[serde(with = "extended_f64")]
    pub bound_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_imag: Option<f64>,
    pub grid: GridInfo,
    pub ordering: OrderingParams,
    pub flags: Vec<String>,
}

impl SpectrumReport {
    pub fn bound_states(&self) -> Vec<f64> {
        self.eigenvalues.iter().zip(&self.bound).filter(|(_, b)| **b).map(|(e, _)| *e).collect()
    }

    /// Passes the reality gate (always true on the real path).
    pub fn is_real_spectrum(&self) -> bool {
        match &self.imag_parts {
            None => true,
            Some(im) => im
                .iter()
                .zip(&self.eigenvalues)
                .all(|(i, r)| i.abs() < REALITY_REL * r.abs() + REALITY_ABS),
        }
    }
}

/// Eigenvalues of H sorted by real part; imaginary parts when complex.
pub fn lowest_spectrum(h: &Hamiltonian, k: usize) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if k > h.dim() {
        return Err(SgaError::validation(format!("k = {k} exceeds the matrix size {}", h.dim())));
    }
    match h.real_diag() {
        Some(d) => Ok((tridiag::lowest_eigenvalues(&d, &h.off, k)?, None)),
        None => {
            let off: Vec<C64> = h.off.iter().map(|&v| C64::from(v)).collect();
            let all = tridiag::complex_symmetric_eigenvalues(&h.complex_diag(), &off)?;
            let low = &all[..k];
            Ok((low.iter().map(|z| z.re).collect(), Some(low.iter().map(|z| z.im).collect())))
        }
    }
}

/// Single-grid solve. Error estimates are zero and flagged as such.
pub fn solve_spectrum(
    h: &Hamiltonian,
    k: usize,
    bound_threshold: f64,
    grid: &Grid,
    ordering: OrderingParams,
) -> Result<SpectrumReport> {
    let (re, im) = lowest_spectrum(h, k)?;
    let mut report = assemble(re, im, vec![0.0; k], k, bound_threshold, grid, ordering);
    report.flags.insert(0, "single-grid".into());
    Ok(report)
}

fn assemble(
    re: Vec<f64>,
    im: Option<Vec<f64>>,
    errors: Vec<f64>,
    k: usize,
    bound_threshold: f64,
    grid: &Grid,
    ordering: OrderingParams,
) -> SpectrumReport {
    let bound: Vec<bool> = re.iter().map(|e| *e < bound_threshold).collect();
    let mut flags = Vec::new();
    for (i, b) in bound.iter().enumerate() {
        if !b {
            flags.push(format!("non-bound:{i}"));
        }
    }
    let max_imag = im.as_ref().map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    let mut report = SpectrumReport {
        eigenvalues: re,
        imag_parts: im,
        error_estimates: errors,
        bound,
        k_requested: k,
        bound_threshold,
        max_imag,
        grid: grid.into(),
        ordering,
        flags,
    };
    if !report.is_real_spectrum() {
        report.flags.push("complex-eigenvalues".into());
    }
    report
}

/// Solves at N/2, N and 2N, Richardson-extrapolates the N and 2N results
/// assuming O(h²) error and reports |E_2N − E_N| as the error estimate.
/// The coarse level only feeds the monotonicity diagnostic.
pub fn refine(
    profile: &MassProfile,
    potential: &PotentialFn<'_>,
    ordering: OrderingParams,
    grid: &Grid,
    k: usize,
    bound_threshold: f64,
) -> Result<SpectrumReport> {
    if grid.n % 2 != 0 {
        return Err(SgaError::Grid(format!("refine needs an even N, got {}", grid.n)));
    }
    let grids = [grid.with_n(grid.n / 2)?, *grid, grid.with_n(2 * grid.n + 1)?];
    let mut solves = Vec::with_capacity(3);
    for g in &grids {
        let v = potential(g)?;
        let h = build_hamiltonian(profile, &v, ordering, g)?;
        solves.push(lowest_spectrum(&h, k)?);
    }
    let (h1, h2) = (grids[1].h(), grids[2].h());
    let w = h1 * h1 / (h1 * h1 - h2 * h2);
    let ext = |a: f64, b: f64| b + (b - a) * (w - 1.0);
    let (c, m, f) = (&solves[0], &solves[1], &solves[2]);
    let re: Vec<f64> = (0..k).map(|i| ext(m.0[i], f.0[i])).collect();
    let im = match (&m.1, &f.1) {
        (Some(a), Some(b)) => Some((0..k).map(|i| ext(a[i], b[i])).collect::<Vec<_>>()),
        _ => None,
    };
    let err: Vec<f64> = (0..k)
        .map(|i| {
            let dre = f.0[i] - m.0[i];
            let dim = match (&m.1, &f.1) {
                (Some(a), Some(b)) => b[i] - a[i],
                _ => 0.0,
            };
            dre.hypot(dim)
        })
        .collect();
    let mut report = assemble(re, im, err, k, bound_threshold, grid, ordering);
    for i in 0..k {
        let d1 = m.0[i] - c.0[i];
        let d2 = f.0[i] - m.0[i];
        let ratio = d1 / d2;
        let scale = 1e-12 * (1.0 + f.0[i].abs());
        if d1.abs() > scale && d2.abs() > scale && !(d1.signum() == d2.signum() && (2.5..=6.0).contains(&ratio)) {
            report.flags.push(format!("non-monotone:{i}"));
        }
    }
    Ok(report)
}
