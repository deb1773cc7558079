//! Truncated Taylor jets: `c[k] = f⁽ᵏ⁾(x₀)/k!` for `k < N`.
//!
//! Arithmetic on jets is exact chain-rule differentiation, so the derivative
//! chain of the WKB β-functions can be written once in closed form.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub c: [T; N],
}

impl<T: Real, const N: usize> Jet<T, N> {
    pub fn constant(v: T) -> Self {
        let mut c = [T::zero(); N];
        c[0] = v;
        Jet { c }
    }

    /// Builds a jet from plain derivatives `f, f′, f″, …`.
    pub fn from_derivatives(d: &[T]) -> Self {
        let mut c = [T::zero(); N];
        let mut fact = T::one();
        for (k, slot) in c.iter_mut().enumerate() {
            if k > 0 {
                fact = fact * T::from_usize(k).unwrap();
            }
            if let Some(&v) = d.get(k) {
                *slot = v / fact;
            }
        }
        Jet { c }
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// k-th plain derivative.
    pub fn derivative_at(&self, k: usize) -> T {
        let mut fact = T::one();
        for j in 2..=k {
            fact = fact * T::from_usize(j).unwrap();
        }
        self.c[k] * fact
    }

    /// Jet of the derivative; the top coefficient becomes zero.
    pub fn deriv(&self) -> Self {
        let mut c = [T::zero(); N];
        for k in 0..N - 1 {
            c[k] = T::from_usize(k + 1).unwrap() * self.c[k + 1];
        }
        Jet { c }
    }

    pub fn scale(&self, s: T) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = *v * s;
        }
        Jet { c }
    }

    /// `f^p` for a jet with positive value.
    pub fn powf(&self, p: T) -> Self {
        let f0 = self.c[0];
        let mut g = [T::zero(); N];
        g[0] = f0.powf(p);
        for k in 1..N {
            let mut s = T::zero();
            for j in 1..=k {
                let w = p * T::from_usize(j).unwrap() - T::from_usize(k - j).unwrap();
                s = s + w * self.c[j] * g[k - j];
            }
            g[k] = s / (T::from_usize(k).unwrap() * f0);
        }
        Jet { c: g }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(T::lit(0.5))
    }
}

impl<T: Real, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.c;
        for k in 0..N {
            c[k] = c[k] + o.c[k];
        }
        Jet { c }
    }
}

impl<T: Real, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.c;
        for k in 0..N {
            c[k] = c[k] - o.c[k];
        }
        Jet { c }
    }
}

impl<T: Real, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [T::zero(); N];
        for i in 0..N {
            for j in 0..N - i {
                c[i + j] = c[i + j] + self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

impl<T: Real, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let mut q = [T::zero(); N];
        for k in 0..N {
            let mut s = self.c[k];
            for j in 1..=k {
                s = s - o.c[j] * q[k - j];
            }
            q[k] = s / o.c[0];
        }
        Jet { c: q }
    }
}
