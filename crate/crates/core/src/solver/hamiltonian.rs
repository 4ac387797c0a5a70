//! Tridiagonal von Roos Hamiltonian on a uniform Dirichlet grid.
//!
//! The inner operator D m^ε D is differenced on the staggered mesh, with
//! m^ε sampled at cell midpoints. Each product m^η D m^ε D m^ρ then has a
//! three-point stencil, and adding its mirror image gives a matrix that is
//! symmetric entry by entry.

use num_complex::Complex64 as C64;

use super::{Grid, OrderingParams, PotentialOnGrid};
use crate::error::{Result, SgaError};
use crate::mass::MassProfile;

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    /// Kinetic diagonal.
    pub kin_diag: Vec<f64>,
    /// Kinetic off-diagonal (i, i+1), equal to (i+1, i).
    pub off: Vec<f64>,
    pub potential: PotentialOnGrid,
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.kin_diag.len()
    }

    pub fn real_diag(&self) -> Option<Vec<f64>> {
        match &self.potential {
            PotentialOnGrid::Real(v) => Some(self.kin_diag.iter().zip(v).map(|(k, v)| k + v).collect()),
            PotentialOnGrid::Complex(_) => None,
        }
    }

    pub fn complex_diag(&self) -> Vec<C64> {
        match &self.potential {
            PotentialOnGrid::Real(v) => self.kin_diag.iter().zip(v).map(|(k, v)| C64::from(k + v)).collect(),
            PotentialOnGrid::Complex(v) => self.kin_diag.iter().zip(v).map(|(k, v)| v + k).collect(),
        }
    }

    /// Dense copy of the real matrix, row-major.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        let d = self.complex_diag();
        let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            m[i][i] = d[i];
            if i + 1 < n {
                m[i][i + 1] = C64::from(self.off[i]);
                m[i + 1][i] = C64::from(self.off[i]);
            }
        }
        m
    }

    /// H ψ for a vector on the interior nodes.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let d = self.complex_diag();
        (0..n)
            .map(|i| {
                let mut s = d[i] * psi[i];
                if i > 0 {
                    s += psi[i - 1] * self.off[i - 1];
                }
                if i + 1 < n {
                    s += psi[i + 1] * self.off[i];
                }
                s
            })
            .collect()
    }
}

pub fn build_hamiltonian(
    profile: &MassProfile,
    v: &PotentialOnGrid,
    ordering: OrderingParams,
    grid: &Grid,
) -> Result<Hamiltonian> {
    let n = grid.n;
    if v.len() != n {
        return Err(SgaError::Grid(format!("potential has {} samples for {n} grid points", v.len())));
    }
    if let Some(i) = v.first_non_finite() {
        return Err(SgaError::Grid(format!(
            "potential is not finite at x = {}; truncate the domain away from the singular point",
            grid.x(i)
        )));
    }
    let h = grid.h();
    let OrderingParams { eta, eps, rho } = ordering;
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut mid = Vec::with_capacity(n);
    for i in 0..n {
        let m = profile.m(grid.x(i))?;
        a.push(m.powf(eta));
        c.push(m.powf(rho));
    }
    for i in 0..=n {
        mid.push(profile.m(grid.x_lo + (i as f64 + 0.5) * h)?.powf(eps));
    }
    let h2 = h * h;
    let kin_diag = (0..n).map(|i| 0.5 * a[i] * c[i] * (mid[i] + mid[i + 1]) / h2).collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| -0.25 * (a[i] * c[i + 1] + c[i] * a[i + 1]) * mid[i + 1] / h2)
        .collect();
    Ok(Hamiltonian { kin_diag, off, potential: v.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::ProfileKind;
    use proptest::prelude::*;

    fn zero(n: usize) -> PotentialOnGrid {
        PotentialOnGrid::Real(vec![0.0; n])
    }

    #[test]
    fn constant_mass_is_half_laplacian() {
        let g = Grid::new(0.0, 1.0, 40).unwrap();
        let h = build_hamiltonian(&MassProfile::constant(1.0), &zero(40), OrderingParams::BEN_DANIEL_DUKE, &g).unwrap();
        let h2 = g.h() * g.h();
        assert!(h.kin_diag.iter().all(|d| (d - 1.0 / h2).abs() <= 1e-14 * (1.0 / h2)));
        assert!(h.off.iter().all(|o| (o + 0.5 / h2).abs() <= 1e-14 * (1.0 / h2)));
    }

    #[test]
    fn orderings_coincide_bitwise_on_constant_mass() {
        let g = Grid::new(-2.0, 3.0, 64).unwrap();
        let p = MassProfile::constant(2.5);
        let base = build_hamiltonian(&p, &zero(64), OrderingParams::BEN_DANIEL_DUKE, &g).unwrap();
        for o in [OrderingParams::ZHU_KROEMER, OrderingParams::GORA_WILLIAMS, OrderingParams::new(0.3, -0.5, -0.8).unwrap()] {
            let other = build_hamiltonian(&p, &zero(64), o, &g).unwrap();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn singular_potential_is_a_grid_error() {
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let mut v = vec![0.0; 16];
        v[3] = f64::INFINITY;
        let err = build_hamiltonian(&MassProfile::constant(1.0), &PotentialOnGrid::Real(v), OrderingParams::BEN_DANIEL_DUKE, &g)
            .unwrap_err();
        assert!(matches!(err, SgaError::Grid(ref s) if s.contains("truncate")));
    }

    /// Expanded von Roos form: −½ (ψ′/m)′ + U ψ.
    fn expanded(profile: &MassProfile, o: OrderingParams, x: f64, f: impl Fn(f64) -> (f64, f64, f64)) -> f64 {
        let mj = profile.m_jet(x).unwrap();
        let (m, m1, m2) = (mj.value(), mj.derivative(1), mj.derivative(2));
        let (psi, d1, d2) = f(x);
        let u = (1.0 + o.eps) * m2 / (4.0 * m * m)
            - 0.5 * (o.eta * (o.eta + o.eps + 1.0) + o.eps + 1.0) * m1 * m1 / (m * m * m);
        -0.5 * (d2 / m - m1 * d1 / (m * m)) + u * psi
    }

    #[test]
    fn action_matches_expanded_form_to_second_order() {
        let p = MassProfile::new(ProfileKind::RationalArctan, &[1.5], (0.0, 0.0)).unwrap();
        let f = |x: f64| {
            let s = (-(x - 0.2) * (x - 0.2)).exp();
            let d1 = -2.0 * (x - 0.2) * s;
            let d2 = (4.0 * (x - 0.2) * (x - 0.2) - 2.0) * s;
            (s, d1, d2)
        };
        for o in [OrderingParams::BEN_DANIEL_DUKE, OrderingParams::ZHU_KROEMER, OrderingParams::GORA_WILLIAMS] {
            let mut errs = Vec::new();
            for n in [199, 399] {
                let g = Grid::new(-5.0, 5.0, n).unwrap();
                let h = build_hamiltonian(&p, &zero(n), o, &g).unwrap();
                let psi: Vec<C64> = (0..n).map(|i| C64::from(f(g.x(i)).0)).collect();
                let hp = h.apply(&psi);
                let e = (n / 4..3 * n / 4)
                    .map(|i| (hp[i].re - expanded(&p, o, g.x(i), f)).abs())
                    .fold(0.0, f64::max);
                errs.push(e);
            }
            let ratio = errs[0] / errs[1];
            assert!(errs[1] < 1e-3 && ratio > 3.5 && ratio < 4.5, "{o:?}: {errs:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matrix_is_exactly_symmetric(
            beta in -0.8f64..0.8, w in 0.2f64..3.0, eta in -1.5f64..0.5, eps in -1.5f64..0.5, kind in 0usize..3,
        ) {
            let p = match kind {
                0 => MassProfile::constant(1.7),
                1 => MassProfile::new(ProfileKind::Exponential, &[if beta.abs() < 0.05 { 0.3 } else { beta }], (0.0, 0.0)).unwrap(),
                _ => MassProfile::new(ProfileKind::RationalArctan, &[w], (0.0, 0.0)).unwrap(),
            };
            let o = OrderingParams::new(eta, eps, -1.0 - eta - eps).unwrap();
            let g = Grid::new(-1.0, 2.0, 32).unwrap();
            let h = build_hamiltonian(&p, &zero(32), o, &g).unwrap();
            let d = h.to_dense();
            for i in 0..32 {
                for j in 0..32 {
                    prop_assert_eq!(d[i][j], d[j][i]);
                }
            }
        }
    }
}
