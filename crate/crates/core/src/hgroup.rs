//! The Heisenberg group `ℍ^N = (ℝ^{2N+1}, ∘)`: points, group law, Korányi
//! gauge and the geometry of the unit Korányi sphere.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{HyperDual, Scalar};
use crate::error::{Error, Result};

/// Fixes `N` and the homogeneous dimension `Q = 2N + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ContextRepr", into = "ContextRepr")]
pub struct GroupContext {
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ContextRepr {
    n: usize,
    #[serde(default)]
    q: Option<usize>,
}

impl TryFrom<ContextRepr> for GroupContext {
    type Error = Error;
    fn try_from(r: ContextRepr) -> Result<Self> {
        let ctx = GroupContext::new(r.n)?;
        match r.q {
            Some(q) if q != ctx.q() => Err(Error::InvalidParameter(format!(
                "Q = {q} is inconsistent with N = {} (expected {})",
                r.n,
                ctx.q()
            ))),
            _ => Ok(ctx),
        }
    }
}

impl From<GroupContext> for ContextRepr {
    fn from(c: GroupContext) -> Self {
        ContextRepr { n: c.n, q: Some(c.q()) }
    }
}

impl GroupContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Ok(Self { n })
    }

    /// Builds the context from the homogeneous dimension; `Q` must be even and ≥ 4.
    pub fn from_q(q: usize) -> Result<Self> {
        if q < 4 || q % 2 != 0 {
            return Err(Error::InvalidParameter(format!("Q = {q} is not of the form 2N + 2")));
        }
        Self::new((q - 2) / 2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    /// Ambient Euclidean dimension `2N + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }
}

/// A point `ξ = (x, y, φ)` of `ℝ^{2N+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub phi: f64,
}

impl HPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, phi: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { left: x.len(), right: y.len() });
        }
        if x.is_empty() {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !phi.is_finite() || x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Domain("point components must be finite".into()));
        }
        Ok(Self { x, y, phi })
    }

    pub fn origin(n: usize) -> Self {
        Self { x: vec![0.0; n], y: vec![0.0; n], phi: 0.0 }
    }

    /// Reads `(x_1..x_N, y_1..y_N, φ)`.
    pub fn from_coords(c: &[f64]) -> Result<Self> {
        if c.len() < 3 || c.len() % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not describe a point of R^(2N+1)",
                c.len()
            )));
        }
        let n = (c.len() - 1) / 2;
        Self::new(c[..n].to_vec(), c[n..2 * n].to_vec(), c[2 * n])
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.dim());
        c.extend_from_slice(&self.x);
        c.extend_from_slice(&self.y);
        c.push(self.phi);
        c
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.n() + 1
    }

    /// `|z|² = |x|² + |y|²`.
    pub fn z_norm_sq(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum()
    }

    fn check_dim(&self, other: &HPoint) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    /// Group law `ξ ∘ ξ'`.
    pub fn compose(&self, other: &HPoint) -> Result<HPoint> {
        self.check_dim(other)?;
        let twist: f64 = (0..self.n())
            .map(|i| other.x[i] * self.y[i] - self.x[i] * other.y[i])
            .sum();
        Ok(HPoint {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
            phi: self.phi + other.phi + 2.0 * twist,
        })
    }

    pub fn inverse(&self) -> HPoint {
        HPoint {
            x: self.x.iter().map(|v| -v).collect(),
            y: self.y.iter().map(|v| -v).collect(),
            phi: -self.phi,
        }
    }

    /// Korányi gauge `(|z|⁴ + φ²)^{1/4}`.
    pub fn knorm(&self) -> f64 {
        self.z_norm_sq().hypot(self.phi).sqrt()
    }

    /// `d(ξ, ξ') = |ξ'^{-1} ∘ ξ|`.
    pub fn kdist(&self, other: &HPoint) -> Result<f64> {
        Ok(other.inverse().compose(self)?.knorm())
    }

    /// Angular weight `ψ = |z|² / |ξ|²`, undefined at the origin.
    pub fn psi(&self) -> Result<f64> {
        let rho = self.knorm();
        if rho == 0.0 {
            return Err(Error::Domain("psi is undefined at the origin".into()));
        }
        Ok((self.z_norm_sq() / (rho * rho)).min(1.0))
    }

    /// Anisotropic dilation `(r x, r y, r² φ)`.
    pub fn dilate(&self, r: f64) -> Result<HPoint> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("dilation factor must be positive, got {r}")));
        }
        Ok(HPoint {
            x: self.x.iter().map(|v| r * v).collect(),
            y: self.y.iter().map(|v| r * v).collect(),
            phi: r * r * self.phi,
        })
    }

    /// The matrix `A(z)` with `Δ_H = div(A(z) ∇)`.
    pub fn a_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let d = self.dim();
        let mut a = DMatrix::<f64>::zeros(d, d);
        for i in 0..2 * n {
            a[(i, i)] = 1.0;
        }
        for i in 0..n {
            a[(i, d - 1)] = 2.0 * self.y[i];
            a[(d - 1, i)] = 2.0 * self.y[i];
            a[(n + i, d - 1)] = -2.0 * self.x[i];
            a[(d - 1, n + i)] = -2.0 * self.x[i];
        }
        a[(d - 1, d - 1)] = 4.0 * self.z_norm_sq();
        a
    }

    /// Point with gauge `rho`, weight `ψ = sin θ`, and horizontal direction
    /// `omega` (unit vector of length 2N), `θ ∈ [0, π]`.
    pub fn from_polar(rho: f64, theta: f64, omega: &[f64]) -> Result<HPoint> {
        if omega.len() % 2 != 0 || omega.is_empty() {
            return Err(Error::InvalidParameter("omega must have even length 2N".into()));
        }
        let r = rho * theta.sin().max(0.0).sqrt();
        let n = omega.len() / 2;
        let mut c: Vec<f64> = omega.iter().map(|w| r * w).collect();
        c.push(rho * rho * theta.cos());
        debug_assert_eq!(c.len(), 2 * n + 1);
        HPoint::from_coords(&c)
    }
}

/// Generic Korányi gauge on raw coordinates `(x, y, φ)`.
pub fn knorm_of<S: Scalar>(c: &[S]) -> S {
    let d = c.len();
    let mut z2 = S::cst(0.0);
    for v in &c[..d - 1] {
        z2 = z2 + *v * *v;
    }
    (z2 * z2 + c[d - 1] * c[d - 1]).powf(0.25)
}

/// Hemisphere selector for the sphere chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hemisphere {
    Upper,
    Lower,
}

impl Hemisphere {
    pub fn sign(self) -> f64 {
        match self {
            Hemisphere::Upper => 1.0,
            Hemisphere::Lower => -1.0,
        }
    }
}

fn chart_phi<S: Scalar>(r: S, sign: f64) -> S {
    let r2 = r * r;
    (-(r2 * r2) + 1.0).sqrt() * sign
}

/// Chart of the unit Korányi sphere `{|z|⁴ + φ² = 1}`:
/// `z = r ω`, `φ = ±√(1 − r⁴)`.
///
/// The returned Jacobian is the surface element relative to `dr dσ(ω)`,
/// where `dσ` is the standard measure on the unit sphere of `ℝ^{2N}`. It is
/// the square root of the Gram determinant of the chart's tangent vectors
/// `∂_r = (ω, φ'(r))` and `r e_j` (unit tangents of the ω-sphere), which is
/// `r^{2N-1} √(1 + φ'(r)²)`. It diverges at the equator `r = 1`.
pub fn sphere_point(r: f64, omega: &[f64], side: Hemisphere) -> Result<(HPoint, f64)> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("chart radius must lie in [0, 1], got {r}")));
    }
    if omega.is_empty() || omega.len() % 2 != 0 {
        return Err(Error::InvalidParameter("omega must have even length 2N".into()));
    }
    let norm: f64 = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("omega must be a unit vector, |omega| = {norm}")));
    }
    let dim_z = omega.len();
    let phi = chart_phi(HyperDual::seeded(r, 1.0), side.sign());
    let mut c: Vec<f64> = omega.iter().map(|w| r * w).collect();
    c.push(phi.value);
    let point = HPoint::from_coords(&c)?;
    let jac = if r < 1.0 {
        r.powi(dim_z as i32 - 1) * (1.0 + phi.d1 * phi.d1).sqrt()
    } else {
        f64::INFINITY
    };
    Ok((point, jac))
}

/// Uniformly distributed unit vector in `ℝ^dim`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        // Marsaglia-style: normalise a point drawn uniformly from the cube,
        // rejecting outside the ball so the direction is uniform.
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n2: f64 = v.iter().map(|a| a * a).sum();
        if n2 > 1e-12 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p1(x: f64, y: f64, phi: f64) -> HPoint {
        HPoint::new(vec![x], vec![y], phi).unwrap()
    }

    fn random_point<R: Rng>(rng: &mut R, n: usize, scale: f64) -> HPoint {
        let c: Vec<f64> = (0..2 * n + 1).map(|_| rng.random_range(-scale..scale)).collect();
        HPoint::from_coords(&c).unwrap()
    }

    #[test]
    fn compose_worked_example() {
        let r = p1(1.0, 0.0, 0.0).compose(&p1(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(r, p1(1.0, 1.0, -2.0));
    }

    #[test]
    fn identity_and_inverse() {
        let xi = p1(0.3, -1.2, 2.5);
        assert_eq!(xi.compose(&HPoint::origin(1)).unwrap(), xi);
        assert_eq!(xi.compose(&xi.inverse()).unwrap(), HPoint::origin(1));
        assert_eq!(HPoint::origin(2).inverse(), HPoint::origin(2));
        assert_eq!(p1(1.0, 0.0, 0.0).inverse(), p1(-1.0, 0.0, 0.0));
    }

    #[test]
    fn compose_rejects_mismatched_dimensions() {
        let err = HPoint::origin(1).compose(&HPoint::origin(2)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 1, right: 2 });
        assert!(HPoint::origin(1).kdist(&HPoint::origin(3)).is_err());
    }

    #[test]
    fn nonfinite_points_are_rejected() {
        assert!(HPoint::new(vec![f64::NAN], vec![0.0], 0.0).is_err());
        assert!(HPoint::new(vec![0.0], vec![0.0], f64::INFINITY).is_err());
    }

    #[test]
    fn knorm_examples() {
        assert_eq!(p1(0.0, 0.0, 1.0).knorm(), 1.0);
        assert_eq!(p1(1.0, 0.0, 0.0).knorm(), 1.0);
        let xi = p1(0.4, 0.7, -0.3);
        assert!((xi.dilate(2.0).unwrap().knorm() - 2.0 * xi.knorm()).abs() < 1e-14);
        assert_eq!(xi.dilate(1.0).unwrap(), xi);
        assert!(xi.dilate(0.0).is_err());
        assert!(xi.dilate(-1.0).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(p1(0.3, -0.4, 0.0).psi().unwrap(), 1.0);
        assert_eq!(p1(0.0, 0.0, 2.0).psi().unwrap(), 0.0);
        assert!(HPoint::origin(1).psi().is_err());
    }

    #[test]
    fn kdist_basics() {
        let xi = p1(0.5, 0.2, -0.7);
        assert_eq!(xi.kdist(&xi).unwrap(), 0.0);
        assert_eq!(xi.kdist(&HPoint::origin(1)).unwrap(), xi.knorm());
    }

    #[test]
    fn a_matrix_examples() {
        let a0 = HPoint::origin(2).a_matrix();
        let mut expect = DMatrix::<f64>::identity(5, 5);
        expect[(4, 4)] = 0.0;
        assert_eq!(a0, expect);

        let a = p1(1.0, 0.0, 0.0).a_matrix();
        let want = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, -2.0, 0.0, -2.0, 4.0]);
        assert_eq!(a, want);
    }

    #[test]
    fn a_matrix_is_psd_with_vertical_null_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for _ in 0..50 {
                let p = random_point(&mut rng, n, 3.0);
                let a = p.a_matrix();
                assert_eq!(a, a.transpose());
                let eig = SymmetricEigen::new(a.clone());
                let scale = 1.0 + 4.0 * p.z_norm_sq();
                assert!(eig.eigenvalues.iter().all(|&l| l > -1e-12 * scale));
                // (-2y, 2x, 1) spans the kernel
                let mut v = vec![0.0; 2 * n + 1];
                for i in 0..n {
                    v[i] = -2.0 * p.y[i];
                    v[n + i] = 2.0 * p.x[i];
                }
                v[2 * n] = 1.0;
                let av = &a * nalgebra::DVector::from_vec(v);
                assert!(av.norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn sphere_chart_lands_on_the_sphere() {
        let (pole, _) = sphere_point(0.0, &[1.0, 0.0], Hemisphere::Upper).unwrap();
        assert_eq!(pole, p1(0.0, 0.0, 1.0));
        let (eq, jac) = sphere_point(1.0, &[0.6, 0.8], Hemisphere::Lower).unwrap();
        assert!((eq.knorm() - 1.0).abs() < 1e-15);
        assert_eq!(eq.phi.abs(), 0.0);
        assert!(jac.is_infinite());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r: f64 = rng.random_range(0.0..1.0);
            let w = random_unit_vector(&mut rng, 4);
            let (p, j) = sphere_point(r, &w, Hemisphere::Upper).unwrap();
            assert!((p.knorm() - 1.0).abs() < 1e-14);
            // closed form r^{2N-1} sqrt(1 + 4 r^6 / (1 - r^4))
            let closed = r.powi(3) * (1.0 + 4.0 * r.powi(6) / (1.0 - r.powi(4))).sqrt();
            assert!((j - closed).abs() <= 1e-12 * closed.max(1.0));
        }
        assert!(sphere_point(1.5, &[1.0, 0.0], Hemisphere::Upper).is_err());
        assert!(sphere_point(0.5, &[2.0, 0.0], Hemisphere::Upper).is_err());
    }

    #[test]
    fn from_polar_controls_gauge_and_weight() {
        let p = HPoint::from_polar(0.7, 0.4, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((p.knorm() - 0.7).abs() < 1e-15);
        assert!((p.psi().unwrap() - 0.4f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn generic_gauge_matches_point_method() {
        let p = HPoint::new(vec![0.2, -0.5], vec![1.1, 0.3], -0.8).unwrap();
        assert!((knorm_of(&p.coords()) - p.knorm()).abs() < 1e-15);
    }

    #[test]
    fn context_from_q() {
        assert_eq!(GroupContext::from_q(4).unwrap().n(), 1);
        assert!(GroupContext::from_q(5).is_err());
        assert!(GroupContext::new(0).is_err());
        let js = serde_json::to_string(&GroupContext::new(2).unwrap()).unwrap();
        assert_eq!(js, r#"{"n":2,"q":6}"#);
        assert!(serde_json::from_str::<GroupContext>(r#"{"n":2,"q":4}"#).is_err());
    }
}
