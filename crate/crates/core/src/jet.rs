//! Truncated Taylor series ("jets") in one real variable.
//!
//! A `Jet<T>` at a base point `x0` stores `f^(k)(x0) / k!` for `k < ORDER`.
//! Arithmetic on jets is exact up to truncation, so chains of generator
//! applications get their derivatives at machine precision instead of
//! through finite-difference stencils.
//!
//! Differentiation shifts the coefficients down and loses the top order.
//! Callers that differentiate `d` times can trust orders `< ORDER - d`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::NumAssign;

/// Number of stored Taylor coefficients.
pub const ORDER: usize = 8;

/// Scalar field a jet can carry.
pub trait Scalar: NumAssign + Copy + Neg<Output = Self> + From<f64> + std::fmt::Debug {}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    c: [T; ORDER],
}

impl<T: Scalar> Jet<T> {
    pub fn constant(v: T) -> Self {
        let mut c = [T::zero(); ORDER];
        c[0] = v;
        Self { c }
    }

    /// The identity function `x` expanded around `x0`.
    pub fn variable(x0: T) -> Self {
        let mut c = [T::zero(); ORDER];
        c[0] = x0;
        c[1] = T::one();
        Self { c }
    }

    pub fn from_coeffs(c: [T; ORDER]) -> Self {
        Self { c }
    }

    pub fn coeffs(&self) -> &[T; ORDER] {
        &self.c
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `k`-th derivative at the base point.
    pub fn derivative(&self, k: usize) -> T {
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        self.c[k] * T::from(fact)
    }

    pub fn deriv(&self) -> Self {
        let mut c = [T::zero(); ORDER];
        for k in 0..ORDER - 1 {
            c[k] = self.c[k + 1] * T::from((k + 1) as f64);
        }
        Self { c }
    }

    /// Antiderivative with value `c0` at the base point.
    pub fn integrate(&self, c0: T) -> Self {
        let mut c = [T::zero(); ORDER];
        c[0] = c0;
        for k in 1..ORDER {
            c[k] = self.c[k - 1] / T::from(k as f64);
        }
        Self { c }
    }

    pub fn scale(&self, s: T) -> Self {
        let mut c = self.c;
        for v in &mut c {
            *v *= s;
        }
        Self { c }
    }

    pub fn recip(&self) -> Self {
        Self::constant(T::one()) / *self
    }

    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(T::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Evaluates `sum_k taylor[k] * (self - self(x0))^k`, i.e. composes a
    /// function whose Taylor coefficients about `self.value()` are given.
    pub fn compose(&self, taylor: &[T; ORDER]) -> Self {
        let mut dx = *self;
        dx.c[0] = T::zero();
        let mut acc = Self::constant(taylor[ORDER - 1]);
        for k in (0..ORDER - 1).rev() {
            acc = acc * dx;
            acc.c[0] += taylor[k];
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Jet<U> {
        let mut c = [U::zero(); ORDER];
        for (dst, src) in c.iter_mut().zip(self.c.iter()) {
            *dst = f(*src);
        }
        Jet { c }
    }
}

impl Jet<f64> {
    pub fn to_complex(&self) -> Jet<Complex64> {
        self.map(|v| Complex64::new(v, 0.0))
    }

    pub fn exp(&self) -> Self {
        let e = self.c[0].exp();
        let mut t = [0.0; ORDER];
        let mut fact = 1.0;
        for (k, tk) in t.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *tk = e / fact;
        }
        self.compose(&t)
    }

    pub fn ln(&self) -> Self {
        let a = self.c[0];
        let mut t = [0.0; ORDER];
        t[0] = a.ln();
        for (k, tk) in t.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *tk = sign / (k as f64 * a.powi(k as i32));
        }
        self.compose(&t)
    }

    pub fn powf(&self, p: f64) -> Self {
        let a = self.c[0];
        let mut t = [0.0; ORDER];
        let mut binom = 1.0;
        for (k, tk) in t.iter_mut().enumerate() {
            if k > 0 {
                binom *= (p - (k - 1) as f64) / k as f64;
            }
            *tk = a.powf(p - k as f64) * binom;
        }
        self.compose(&t)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [s, c, -s, -c];
        let mut t = [0.0; ORDER];
        let mut fact = 1.0;
        for (k, tk) in t.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *tk = cycle[k % 4] / fact;
        }
        self.compose(&t)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [c, -s, -c, s];
        let mut t = [0.0; ORDER];
        let mut fact = 1.0;
        for (k, tk) in t.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *tk = cycle[k % 4] / fact;
        }
        self.compose(&t)
    }

    pub fn tanh(&self) -> Self {
        // written with the decaying exponential to stay finite for large |u|
        let one = Self::constant(1.0);
        if self.c[0] >= 0.0 {
            let e = (self.scale(-2.0)).exp();
            (one - e) / (one + e)
        } else {
            let e = (self.scale(2.0)).exp();
            (e - one) / (e + one)
        }
    }

    pub fn atan(&self) -> Self {
        let w = self.deriv() / (Self::constant(1.0) + *self * *self);
        w.integrate(self.c[0].atan())
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a += *b;
        }
        self
    }
}

impl<T: Scalar> AddAssign for Jet<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a -= *b;
        }
        self
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in &mut self.c {
            *a = -*a;
        }
        self
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [T::zero(); ORDER];
        for i in 0..ORDER {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..ORDER - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Self { c }
    }
}

impl<T: Scalar> Div for Jet<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut q = [T::zero(); ORDER];
        let b0 = rhs.c[0];
        for k in 0..ORDER {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * rhs.c[k - j];
            }
            q[k] = acc / b0;
        }
        Self { c: q }
    }
}

impl<T: Scalar> Add<T> for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: T) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<T: Scalar> Sub<T> for Jet<T> {
    type Output = Self;
    fn sub(mut self, rhs: T) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<T: Scalar> Mul<T> for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}
