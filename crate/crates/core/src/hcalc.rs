//! Sub-Riemannian calculus on `ℍ^N`: the left-invariant fields `X_i`, `Y_i`,
//! the horizontal gradient and the Kohn-Laplacian, evaluated exactly with
//! hyper-dual numbers.

pub use crate::autodiff::{HyperDual, Jet, Scalar};
use crate::error::{Error, Result};
use crate::hgroup::{knorm_of, GroupContext, HPoint};

/// A scalar field on `ℝ^{2N+1}` that can be evaluated on any [`Scalar`].
///
/// Coordinates are passed as `(x_1..x_N, y_1..y_N, φ)`.
pub trait ScalarField: Sync {
    fn eval<S: Scalar>(&self, coords: &[S]) -> S;

    fn value_at(&self, p: &HPoint) -> f64 {
        self.eval::<f64>(&p.coords())
    }
}

/// A function of one positive variable, evaluable on any [`Scalar`].
pub trait RadialProfile: Sync {
    fn eval<S: Scalar>(&self, rho: S) -> S;
}

/// The radial lift `ξ ↦ F(|ξ|_H)` of a profile.
#[derive(Clone, Copy, Debug)]
pub struct RadialLift<P>(pub P);

impl<P: RadialProfile> ScalarField for RadialLift<P> {
    fn eval<S: Scalar>(&self, coords: &[S]) -> S {
        self.0.eval(knorm_of(coords))
    }
}

/// The gauge `ξ ↦ |ξ|_H` itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gauge;

impl ScalarField for Gauge {
    fn eval<S: Scalar>(&self, coords: &[S]) -> S {
        knorm_of(coords)
    }
}

/// `ρ ↦ ρ^s`.
#[derive(Clone, Copy, Debug)]
pub struct Power(pub f64);

impl RadialProfile for Power {
    fn eval<S: Scalar>(&self, rho: S) -> S {
        rho.powf(self.0)
    }
}

/// Value, first and second derivative of `f` along `dir` at `p`.
pub fn directional<F: ScalarField>(f: &F, p: &[f64], dir: &[f64]) -> HyperDual {
    let seeded: Vec<HyperDual> = p
        .iter()
        .zip(dir)
        .map(|(&v, &d)| HyperDual::seeded(v, d))
        .collect();
    f.eval(&seeded)
}

fn horizontal_direction(p: &HPoint, i: usize, vertical: bool) -> Vec<f64> {
    let n = p.n();
    let mut dir = vec![0.0; p.dim()];
    if vertical {
        dir[n + i] = 1.0;
        dir[2 * n] = -2.0 * p.x[i];
    } else {
        dir[i] = 1.0;
        dir[2 * n] = 2.0 * p.y[i];
    }
    dir
}

fn check_index(p: &HPoint, i: usize) -> Result<()> {
    if i >= p.n() {
        return Err(Error::InvalidParameter(format!(
            "field index {i} out of range for N = {} (indices are 0-based)",
            p.n()
        )));
    }
    Ok(())
}

/// `(X_i f)(ξ) = ∂f/∂x_i + 2 y_i ∂f/∂φ`, `i` zero-based.
pub fn x_field<F: ScalarField>(i: usize, f: &F, p: &HPoint) -> Result<f64> {
    check_index(p, i)?;
    Ok(directional(f, &p.coords(), &horizontal_direction(p, i, false)).d1)
}

/// `(Y_i f)(ξ) = ∂f/∂y_i − 2 x_i ∂f/∂φ`, `i` zero-based.
pub fn y_field<F: ScalarField>(i: usize, f: &F, p: &HPoint) -> Result<f64> {
    check_index(p, i)?;
    Ok(directional(f, &p.coords(), &horizontal_direction(p, i, true)).d1)
}

/// `∇_H f = (X_1 f, …, X_N f, Y_1 f, …, Y_N f)`.
pub fn hgrad<F: ScalarField>(f: &F, p: &HPoint) -> Vec<f64> {
    let c = p.coords();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..p.n())
        .map(|i| {
            (
                directional(f, &c, &horizontal_direction(p, i, false)).d1,
                directional(f, &c, &horizontal_direction(p, i, true)).d1,
            )
        })
        .unzip();
    xs.into_iter().chain(ys).collect()
}

/// Kohn-Laplacian `Σ (X_i² + Y_i²) f`.
///
/// `X_i = v_i · ∇` with `v_i = e_{x_i} + 2 y_i e_φ`, and `v_i` does not depend
/// on `x_i` or `φ`, so `(v_i · ∇) v_i = 0` and
/// `X_i² f = v_iᵀ (∇² f) v_i = D²f[v_i, v_i]`. The same holds for `Y_i`.
/// Each term is therefore a pure second directional derivative, which a
/// hyper-dual seed delivers exactly.
pub fn hlap<F: ScalarField>(f: &F, p: &HPoint) -> f64 {
    let c = p.coords();
    (0..p.n())
        .map(|i| {
            directional(f, &c, &horizontal_direction(p, i, false)).d12
                + directional(f, &c, &horizontal_direction(p, i, true)).d12
        })
        .sum()
}

/// Euclidean gradient `∇_{ℝ^{2N+1}} f` by one dual seed per coordinate.
pub fn euclid_grad<F: ScalarField>(f: &F, p: &HPoint) -> Vec<f64> {
    let c = p.coords();
    (0..c.len())
        .map(|j| {
            let mut dir = vec![0.0; c.len()];
            dir[j] = 1.0;
            directional(f, &c, &dir).d1
        })
        .collect()
}

/// `div(A(z) ∇f)` by nested central differences of step `h`.
///
/// Uses only real evaluations of `f`; it serves as an independent check on
/// [`hlap`].
pub fn hlap_divform<F: ScalarField>(f: &F, p: &HPoint, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let c = p.coords();
    let d = c.len();
    let grad_at = |q: &[f64]| -> Vec<f64> {
        (0..d)
            .map(|k| {
                let mut a = q.to_vec();
                let mut b = q.to_vec();
                a[k] += h;
                b[k] -= h;
                (f.eval::<f64>(&a) - f.eval::<f64>(&b)) / (2.0 * h)
            })
            .collect()
    };
    let flux_component = |q: &[f64], j: usize| -> Result<f64> {
        let a = HPoint::from_coords(q)?.a_matrix();
        let g = grad_at(q);
        Ok((0..d).map(|k| a[(j, k)] * g[k]).sum())
    };
    let mut div = 0.0;
    for j in 0..d {
        let mut fwd = c.clone();
        let mut bwd = c.clone();
        fwd[j] += h;
        bwd[j] -= h;
        div += (flux_component(&fwd, j)? - flux_component(&bwd, j)?) / (2.0 * h);
    }
    Ok(div)
}

/// Radial bracket `F''(ρ) + (2N+1) F'(ρ)/ρ`, i.e. `(1/ψ) Δ_H` of the radial lift.
pub fn radial_lap<P: RadialProfile>(f: &P, rho: f64, ctx: GroupContext) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {rho}")));
    }
    let r = f.eval(HyperDual::seeded(rho, 1.0));
    Ok(r.d12 + (2 * ctx.n() + 1) as f64 * r.d1 / rho)
}

/// `F(ρ)`, `F'(ρ)`, `F''(ρ)` of a profile.
pub fn profile_derivatives<P: RadialProfile>(f: &P, rho: f64) -> (f64, f64, f64) {
    let r = f.eval(HyperDual::seeded(rho, 1.0));
    (r.value, r.d1, r.d12)
}
