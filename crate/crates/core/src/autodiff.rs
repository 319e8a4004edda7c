//! Forward-mode automatic differentiation.
//!
//! Two number types share the [`Scalar`] interface so that one generic
//! implementation of a field or profile can be evaluated on plain `f64`,
//! on [`HyperDual`] (exact first and second directional derivatives) or on
//! [`Jet`] (truncated Taylor series of arbitrary small order).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal real-number interface used by every differentiable expression in
/// the crate.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    /// The real (primal) part.
    fn value(&self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, e: f64) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }

    /// `ln(1 + e^self)` without overflow for large arguments.
    fn softplus(self) -> Self {
        if self.value() > 0.0 {
            self + ((-self).exp() + 1.0).ln()
        } else {
            (self.exp() + 1.0).ln()
        }
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// Hyper-dual number `v + d1 ε₁ + d2 ε₂ + d12 ε₁ε₂` with `ε₁² = ε₂² = 0`.
///
/// Seeding both infinitesimal parts along a direction `v` yields `Df[v]` in
/// `d1` and the exact second directional derivative `D²f[v, v]` in `d12`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HyperDual {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d12: f64,
}

impl HyperDual {
    pub const fn new(value: f64, d1: f64, d2: f64, d12: f64) -> Self {
        Self { value, d1, d2, d12 }
    }

    /// A variable with both first-order parts set to `dir`.
    pub const fn seeded(value: f64, dir: f64) -> Self {
        Self::new(value, dir, dir, 0.0)
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    #[inline]
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            d1: df * self.d1,
            d2: df * self.d2,
            d12: df * self.d12 + d2f * self.d1 * self.d2,
        }
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d12 + o.d12)
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d12 - o.d12)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.value * o.value,
            self.value * o.d1 + self.d1 * o.value,
            self.value * o.d2 + self.d2 * o.value,
            self.value * o.d12 + self.d1 * o.d2 + self.d2 * o.d1 + self.d12 * o.value,
        )
    }
}

impl Div for HyperDual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.value;
        self * o.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2, -self.d12)
    }
}

impl Add<f64> for HyperDual {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        Self { value: self.value + c, ..self }
    }
}

impl Sub<f64> for HyperDual {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        Self { value: self.value - c, ..self }
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::new(self.value * c, self.d1 * c, self.d2 * c, self.d12 * c)
    }
}

impl Div<f64> for HyperDual {
    type Output = Self;
    fn div(self, c: f64) -> Self {
        self * (1.0 / c)
    }
}

impl Scalar for HyperDual {
    fn cst(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let inv = 1.0 / self.value;
        self.chain(self.value.ln(), inv, -inv * inv)
    }
    fn powf(self, e: f64) -> Self {
        let v = self.value;
        if e == 0.0 {
            return Self::cst(1.0);
        }
        let pm2 = v.powf(e - 2.0);
        self.chain(pm2 * v * v, e * pm2 * v, e * (e - 1.0) * pm2)
    }
    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }
    fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

/// Highest derivative order a [`Jet`] can carry.
pub const JET_MAX_ORDER: usize = 7;
const JET_LEN: usize = JET_MAX_ORDER + 1;

/// Truncated univariate Taylor series `Σ c_j δ^j`, `j ≤ order`.
///
/// The k-th derivative at the expansion point is `k! · c_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; JET_LEN],
    order: usize,
}

impl Jet {
    /// The independent variable `t0 + δ` expanded to `order`.
    ///
    /// # Panics
    /// If `order > JET_MAX_ORDER`.
    pub fn variable(t0: f64, order: usize) -> Self {
        assert!(order <= JET_MAX_ORDER, "jet order {order} exceeds {JET_MAX_ORDER}");
        let mut c = [0.0; JET_LEN];
        c[0] = t0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Self { c, order }
    }

    fn constant(v: f64, order: usize) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Self { c, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.c[j]
    }

    /// The j-th derivative at the expansion point.
    pub fn derivative(&self, j: usize) -> f64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.c[j] * fact
    }

    fn order_with(&self, o: &Self) -> usize {
        self.order.max(o.order)
    }
}

impl Add for Jet {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let order = self.order_with(&o);
        let mut c = [0.0; JET_LEN];
        for j in 0..=order {
            c[j] = self.c[j] + o.c[j];
        }
        Self { c, order }
    }
}

impl Sub for Jet {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let order = self.order_with(&o);
        let mut c = [0.0; JET_LEN];
        for (n, cn) in c.iter_mut().enumerate().take(order + 1) {
            *cn = (0..=n).map(|j| self.c[j] * o.c[n - j]).sum();
        }
        Self { c, order }
    }
}

impl Div for Jet {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Add<f64> for Jet {
    type Output = Self;
    fn add(mut self, v: f64) -> Self {
        self.c[0] += v;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Self;
    fn sub(mut self, v: f64) -> Self {
        self.c[0] -= v;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Self;
    fn mul(mut self, v: f64) -> Self {
        for cj in self.c.iter_mut() {
            *cj *= v;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Self;
    fn div(self, v: f64) -> Self {
        self * (1.0 / v)
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        Self::constant(v, 0)
    }

    fn value(&self) -> f64 {
        self.c[0]
    }

    fn exp(self) -> Self {
        // e' = a' e  =>  n e_n = Σ_{j=1..n} j a_j e_{n-j}
        let mut e = [0.0; JET_LEN];
        e[0] = self.c[0].exp();
        for n in 1..=self.order {
            let s: f64 = (1..=n).map(|j| j as f64 * self.c[j] * e[n - j]).sum();
            e[n] = s / n as f64;
        }
        Self { c: e, order: self.order }
    }

    fn ln(self) -> Self {
        // a l' = a'  =>  n a_0 l_n = n a_n - Σ_{j=1..n-1} j l_j a_{n-j}
        let mut l = [0.0; JET_LEN];
        let a0 = self.c[0];
        l[0] = a0.ln();
        for n in 1..=self.order {
            let s: f64 = (1..n).map(|j| j as f64 * l[j] * self.c[n - j]).sum();
            l[n] = (n as f64 * self.c[n] - s) / (n as f64 * a0);
        }
        Self { c: l, order: self.order }
    }

    fn powf(self, e: f64) -> Self {
        // a p' = e a' p  =>  n a_0 p_n = Σ_{j=1..n} (e j - (n - j)) a_j p_{n-j}
        let mut p = [0.0; JET_LEN];
        let a0 = self.c[0];
        p[0] = a0.powf(e);
        for n in 1..=self.order {
            let s: f64 = (1..=n)
                .map(|j| (e * j as f64 - (n - j) as f64) * self.c[j] * p[n - j])
                .sum();
            p[n] = s / (n as f64 * a0);
        }
        Self { c: p, order: self.order }
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn recip(self) -> Self {
        // a r = 1  =>  r_n = -(Σ_{j=1..n} a_j r_{n-j}) / a_0
        let mut r = [0.0; JET_LEN];
        let a0 = self.c[0];
        r[0] = 1.0 / a0;
        for n in 1..=self.order {
            let s: f64 = (1..=n).map(|j| self.c[j] * r[n - j]).sum();
            r[n] = -s / a0;
        }
        Self { c: r, order: self.order }
    }
}

impl Jet {
    fn sin_cos(self) -> (Self, Self) {
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for n in 1..=self.order {
            let mut ss = 0.0;
            let mut cs = 0.0;
            for j in 1..=n {
                ss += j as f64 * self.c[j] * c[n - j];
                cs -= j as f64 * self.c[j] * s[n - j];
            }
            s[n] = ss / n as f64;
            c[n] = cs / n as f64;
        }
        (Self { c: s, order: self.order }, Self { c, order: self.order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample<S: Scalar>(x: S) -> S {
        (x * x + 1.0).ln() * x.sin() + x.powf(1.5) / (x.exp() + 2.0) - x.cos().sqrt()
    }

    fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn hyperdual_matches_finite_differences() {
        for &x in &[0.3, 0.7, 1.1] {
            let r = sample(HyperDual::seeded(x, 1.0));
            let (d1, _) = central(sample, x, 1e-6);
            let (_, d2) = central(sample, x, 1e-4);
            assert!((r.d1 - d1).abs() < 1e-8, "{} vs {}", r.d1, d1);
            assert!((r.d12 - d2).abs() < 1e-5, "{} vs {}", r.d12, d2);
            assert_eq!(r.d1, r.d2);
        }
    }

    #[test]
    fn jet_agrees_with_hyperdual_up_to_second_order() {
        for &x in &[0.2, 0.9, 1.4] {
            let h = sample(HyperDual::seeded(x, 1.0));
            let j = sample(Jet::variable(x, 4));
            assert!((j.value() - h.value).abs() < 1e-14);
            assert!((j.derivative(1) - h.d1).abs() < 1e-12);
            assert!((j.derivative(2) - h.d12).abs() < 1e-11);
        }
    }

    #[test]
    fn jet_exp_has_all_unit_derivatives() {
        let e = Jet::variable(0.0, JET_MAX_ORDER).exp();
        for k in 0..=JET_MAX_ORDER {
            assert!((e.derivative(k) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jet_third_derivative_of_power() {
        // d³/dx³ x^{5/2} = (5/2)(3/2)(1/2) x^{-1/2}
        let x = 2.0;
        let j = Jet::variable(x, 3).powf(2.5);
        let expect = 2.5 * 1.5 * 0.5 * x.powf(-0.5);
        assert!((j.derivative(3) - expect).abs() < 1e-12);
    }

    #[test]
    fn softplus_is_finite_for_large_arguments() {
        let s = HyperDual::seeded(800.0, 1.0).softplus();
        assert!((s.value - 800.0).abs() < 1e-12);
        assert!((s.d1 - 1.0).abs() < 1e-12);
        assert!(s.d12.abs() < 1e-12);
        let small = (-800.0f64).softplus();
        assert!(small >= 0.0 && small < 1e-300);
    }
}
