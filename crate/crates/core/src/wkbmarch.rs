//! Second-order WKB-marching: the W↔Z transformations and the update
//! `Z_{n+1} = (I + A¹_n + A²_n) Z_n`.

use num_complex::Complex;

use crate::coefficient::{BetaChain, Coefficient};
use crate::error::{Error, Result};
use crate::phase::PhaseTable;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WVector<T> {
    pub w: [T; 2],
}

impl<T: Real> WVector<T> {
    pub fn norm(&self) -> T {
        self.w[0].hypot(self.w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchState<T> {
    pub z: [Complex<T>; 2],
    pub node_index: usize,
}

impl<T: Real> MarchState<T> {
    pub fn norm(&self) -> T {
        (self.z[0].norm_sqr() + self.z[1].norm_sqr()).sqrt()
    }
}

fn positive_a<T: Real>(c: &Coefficient<T>, x: T) -> Result<[T; 2]> {
    let d = c.derivatives(x);
    if !(d[0] > T::zero()) {
        return Err(Error::Domain(format!("a({x}) = {} is not positive", d[0])));
    }
    Ok([d[0], d[1]])
}

/// `W = A(x)(ψ, εψ′)` with `A = [[a^{1/4}, 0], [(ε/4)a^{-5/4}a′, a^{-1/4}]]`.
pub fn w_from_psi<T: Real>(c: &Coefficient<T>, eps: T, x: T, psi: T, eps_dpsi: T) -> Result<WVector<T>> {
    let [a, da] = positive_a(c, x)?;
    let q = a.powf(T::lit(0.25));
    let w1 = q * psi;
    let w2 = eps / T::lit(4.0) * da / (a * q) * psi + eps_dpsi / q;
    Ok(WVector { w: [w1, w2] })
}

/// Inverse of [`w_from_psi`], applied to complex data.
pub fn psi_from_w_complex<T: Real>(
    c: &Coefficient<T>,
    eps: T,
    x: T,
    w: [Complex<T>; 2],
) -> Result<(Complex<T>, Complex<T>)> {
    let [a, da] = positive_a(c, x)?;
    let q = a.powf(T::lit(0.25));
    let psi = w[0] / q;
    let eps_dpsi = w[1] * q - w[0] * (eps * da / (T::lit(4.0) * a * q));
    Ok((psi, eps_dpsi))
}

/// `ψ = w₁a^{-1/4}`, `εψ′ = a^{1/4}w₂ − εa′/(4a^{5/4}) w₁`.
pub fn psi_from_w<T: Real>(c: &Coefficient<T>, eps: T, x: T, w: WVector<T>) -> Result<(T, T)> {
    let (p, d) = psi_from_w_complex(c, eps, x, [Complex::from(w.w[0]), Complex::from(w.w[1])])?;
    Ok((p.re, d.re))
}

fn p_matrix<T: Real>() -> [[Complex<T>; 2]; 2] {
    let s = T::one() / T::lit(2.0).sqrt();
    let i = Complex::new(T::zero(), s);
    let r = Complex::new(s, T::zero());
    [[i, r], [r, i]]
}

/// `Z₁ = P W(x₁)`, `P = (1/√2)[[i, 1], [1, i]]`.
pub fn z_init<T: Real>(w: WVector<T>) -> MarchState<T> {
    let p = p_matrix::<T>();
    let w0 = Complex::from(w.w[0]);
    let w1 = Complex::from(w.w[1]);
    MarchState {
        z: [p[0][0] * w0 + p[0][1] * w1, p[1][0] * w0 + p[1][1] * w1],
        node_index: 0,
    }
}

/// `H₁(y) = e^{iy} − 1`
pub fn h1<T: Real>(y: T) -> Complex<T> {
    if y.abs() < T::lit(1e-4) {
        let y2 = y * y;
        Complex::new(-y2 / T::lit(2.0) + y2 * y2 / T::lit(24.0), y - y2 * y / T::lit(6.0))
    } else {
        // cos y − 1 = −2 sin²(y/2)
        let sh = (y / T::lit(2.0)).sin();
        Complex::new(-T::lit(2.0) * sh * sh, y.sin())
    }
}

/// `H₂(y) = e^{iy} − 1 − iy`
pub fn h2<T: Real>(y: T) -> Complex<T> {
    if y.abs() < T::lit(1e-4) {
        let y2 = y * y;
        Complex::new(-y2 / T::lit(2.0) + y2 * y2 / T::lit(24.0), -y2 * y / T::lit(6.0))
    } else {
        let e = h1(y);
        Complex::new(e.re, e.im - y)
    }
}

/// Data of one grid node that the stepper consumes.
#[derive(Debug, Clone, Copy)]
pub struct NodeData<T> {
    pub x: T,
    pub chain: BetaChain<T>,
    /// `φ(x)/ε` reduced mod 2π
    pub theta: T,
}

/// `I + A¹_n + A²_n` for the interval `[left.x, right.x]` with increment `s`.
pub fn step_matrix<T: Real>(left: &NodeData<T>, right: &NodeData<T>, s: T, eps: T) -> [[Complex<T>; 2]; 2] {
    let zero = T::zero();
    let one = T::one();
    let im = |v: T| Complex::new(zero, v);
    let re = |v: T| Complex::new(v, zero);
    let e2 = eps * eps;
    let e3 = e2 * eps;
    let e4 = e3 * eps;
    let e5 = e4 * eps;
    let two = T::lit(2.0);
    let (bn, bm) = (left.chain, right.chain);
    // e^{∓2iφ/ε} at both ends
    let em0 = Complex::from_polar(one, -two * left.theta);
    let ep0 = em0.conj();
    let em1 = Complex::from_polar(one, -two * right.theta);
    let ep1 = em1.conj();
    let y = two * s / eps;
    let h1m = h1(-y);
    let h1p = h1(y);
    let h2m = h2(-y);
    let h2p = h2(y);

    let mut a12 = im(-e2) * (em0 * bn.b0 - em1 * bm.b0);
    let mut a21 = im(-e2) * (ep1 * bm.b0 - ep0 * bn.b0);
    a12 = a12 + (em1 * bm.b1 - em0 * bn.b1) * e3;
    a21 = a21 + (ep1 * bm.b1 - ep0 * bn.b1) * e3;
    a12 = a12 + im(e4 * bm.b2) * (-(em0 * h1m));
    a21 = a21 + im(e4 * bm.b2) * (ep0 * h1p);
    a12 = a12 - em0 * h2m * (e5 * bm.b3);
    a21 = a21 - ep0 * h2p * (e5 * bm.b3);

    let d = e3 * (right.x - left.x) * (bm.beta * bm.b0 + bn.beta * bn.b0) / two;
    let mut a11 = im(-d);
    let mut a22 = im(d);
    a11 = a11 - h1m * (e4 * bn.b0 * bm.b0);
    a22 = a22 - h1p * (e4 * bn.b0 * bm.b0);
    let c5 = im(e5 * bm.b1 * (bn.b0 - bm.b0));
    a11 = a11 + c5 * h2m;
    a22 = a22 - c5 * h2p;

    [[re(one) + a11, a12], [a21, re(one) + a22]]
}

/// One update of the Z state.
pub fn step<T: Real>(state: &MarchState<T>, left: &NodeData<T>, right: &NodeData<T>, s: T, eps: T) -> MarchState<T> {
    let m = step_matrix(left, right, s, eps);
    let z = state.z;
    MarchState {
        z: [m[0][0] * z[0] + m[0][1] * z[1], m[1][0] * z[0] + m[1][1] * z[1]],
        node_index: state.node_index + 1,
    }
}

/// `W = P^{-1} e^{iΦ/ε} Z`, complex, together with the imaginary residue.
pub fn w_back_complex<T: Real>(state: &MarchState<T>, theta: T) -> ([Complex<T>; 2], T) {
    let e = Complex::from_polar(T::one(), theta);
    let y0 = e * state.z[0];
    let y1 = e.conj() * state.z[1];
    // P⁻¹ = (1/√2)[[−i, 1], [1, −i]]
    let s = T::one() / T::lit(2.0).sqrt();
    let mi = Complex::new(T::zero(), -s);
    let r = Complex::new(s, T::zero());
    let w = [mi * y0 + r * y1, r * y0 + mi * y1];
    let residue = w[0].im.hypot(w[1].im);
    (w, residue)
}

/// Real back transform; fails if the imaginary residue is not negligible.
pub fn w_back<T: Real>(state: &MarchState<T>, table: &PhaseTable<T>) -> Result<WVector<T>> {
    let (w, residue) = w_back_complex(state, table.reduced[state.node_index]);
    let wn = WVector { w: [w[0].re, w[1].re] };
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(1e5));
    if residue > tol * wn.norm().max(T::min_positive_value()) {
        return Err(Error::Reality {
            residue: residue.to_f64_lossy(),
        });
    }
    Ok(wn)
}

/// Full march from `W(x₁)` across the table; returns the complex W at every node.
pub fn march<T: Real>(c: &Coefficient<T>, table: &PhaseTable<T>, w1: WVector<T>) -> Result<Vec<[Complex<T>; 2]>> {
    let eps = table.eps;
    let mut out = Vec::with_capacity(table.len());
    let mut state = z_init(w1);
    let node = |k: usize| -> Result<NodeData<T>> {
        Ok(NodeData {
            x: table.nodes[k],
            chain: c.beta_chain(eps, table.nodes[k])?,
            theta: table.reduced[k],
        })
    };
    let mut left = node(0)?;
    out.push(w_back_complex(&state, left.theta).0);
    for k in 0..table.len() - 1 {
        let right = node(k + 1)?;
        state = step(&state, &left, &right, table.increments[k], eps);
        out.push(w_back_complex(&state, right.theta).0);
        left = right;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::{Poly, Region};
    use crate::grid;
    use crate::phase::{build_phase, PhaseMethod};

    #[test]
    fn w_transform_at_one_for_linear() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let eps: f64 = 0.125;
        let w = w_from_psi(&c, eps, 1.0, 0.7, -0.3).unwrap();
        assert!((w.w[0] - 0.7).abs() < 1e-15);
        assert!((w.w[1] - (-0.3 + eps / 4.0 * 0.7)).abs() < 1e-15);
        let (p, d) = psi_from_w(&c, eps, 1.0, w).unwrap();
        assert!((p - 0.7).abs() < 1e-14 && (d + 0.3).abs() < 1e-14);
    }

    #[test]
    fn z_init_examples() {
        let s = 0.5f64.sqrt();
        let z = z_init(WVector { w: [1.0, 0.0] });
        assert!((z.z[0] - Complex::new(0.0, s)).norm() < 1e-15);
        assert!((z.z[1] - Complex::new(s, 0.0)).norm() < 1e-15);
        let w = WVector { w: [0.3f64, -1.7] };
        assert!((z_init(w).norm() - w.norm()).abs() < 1e-15);
    }

    #[test]
    fn h_branches_are_continuous() {
        for &y in &[0.99e-4f64, -0.99e-4, 1.01e-4, -1.01e-4] {
            let e = Complex::new(0.0, y).exp();
            let s = (y / 2.0).sin();
            assert!((h1(y) - Complex::new(-2.0 * s * s, y.sin())).norm() < 1e-19);
            assert!((h1(y) - (e - 1.0)).norm() < 1e-16);
            let exact = Complex::new(-y * y / 2.0 + y.powi(4) / 24.0, -y.powi(3) / 6.0);
            assert!((h2(y) - exact).norm() < 1e-20);
        }
    }

    #[test]
    fn constant_coefficient_is_a_rotation() {
        let c = Coefficient {
            region: Region::Linear,
            x1: 0.5,
            body: Poly::new(vec![1.0]),
        };
        let eps = 2f64.powi(-6);
        let nodes = grid::uniform(0.5, 0.05).unwrap();
        let t = build_phase(&c, eps, &nodes, PhaseMethod::Exact).unwrap();
        let w1 = WVector { w: [0.4, 0.9] };
        let ws = march(&c, &t, w1).unwrap();
        for (x, w) in nodes.iter().zip(&ws) {
            let th = (x - 0.5) / eps;
            let r = [
                w1.w[0] * th.cos() + w1.w[1] * th.sin(),
                -w1.w[0] * th.sin() + w1.w[1] * th.cos(),
            ];
            assert!((w[0].re - r[0]).abs() < 1e-12 && (w[1].re - r[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn step_size_scales_like_eps_squared() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let mut norms = vec![];
        let epss = [2f64.powi(-6), 2f64.powi(-8), 2f64.powi(-10)];
        for &eps in &epss {
            let nodes = [0.3, 0.35];
            let t = build_phase(&c, eps, &nodes, PhaseMethod::Exact).unwrap();
            let nd = |k: usize| NodeData {
                x: nodes[k],
                chain: c.beta_chain(eps, nodes[k]).unwrap(),
                theta: t.reduced[k],
            };
            let m = step_matrix(&nd(0), &nd(1), t.increments[0], eps);
            let n: f64 = [m[0][0] - 1.0, m[0][1], m[1][0], m[1][1] - 1.0]
                .iter()
                .map(|v| v.norm())
                .sum();
            norms.push(n);
        }
        let s = crate::fit::loglog_slope(&epss, &norms, 0.0).unwrap();
        assert!(s >= 2.0 - 1e-9, "slope {s}");
    }

    #[test]
    fn march_keeps_w_real() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let eps = 2f64.powi(-12);
        let nodes = grid::uniform(0.1, 1.0 / 64.0).unwrap();
        let t = build_phase(&c, eps, &nodes, PhaseMethod::Exact).unwrap();
        let ws = march(&c, &t, WVector { w: [0.8, -0.2] }).unwrap();
        for w in ws {
            let n = w[0].re.hypot(w[1].re);
            assert!(w[0].im.hypot(w[1].im) < 1e-9 * n);
        }
    }
}
