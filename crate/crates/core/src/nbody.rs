//! Regular n-gon and centered n-gon configurations, and the scalar fields
//! attached to them: the moment of inertia I, the Newtonian potential U, and
//! the scale-normalized potential sqrt(I)*U whose critical points are the
//! central configurations. Values, gradients, and Hessians are all analytic.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::linalg::{norm_inf, Mat};
use crate::{Error, Result};

/// Bodies closer than this are treated as a collision.
pub const SINGULARITY_CUTOFF: f64 = 1e-12;

/// Coefficient convention for the central body's |q|^2 term in the moment
/// of inertia. `Full` uses m |q|^2, `Half` uses (m/2) |q|^2 like the ring
/// terms. The two agree at the reference configuration (the center sits at
/// the origin) but give different central entries of D^2 I.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterInertia {
    Full,
    Half,
}

/// A planar configuration: n unit masses on the unit circle, optionally a
/// central body of mass m at the origin.
#[derive(Clone, Debug)]
pub struct Configuration {
    n: usize,
    positions: Vec<[f64; 2]>,
    masses: Vec<f64>,
    has_center: bool,
    center_inertia: CenterInertia,
}

impl Configuration {
    /// The regular n-gon with unit circumradius and unit masses,
    /// q_k = (cos(k-1)theta, sin(k-1)theta) with theta = 2 pi / n.
    pub fn ngon(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need n >= 3 ring bodies, got {n}")));
        }
        let theta = std::f64::consts::TAU / n as f64;
        let positions = (0..n)
            .map(|k| {
                let (sin, cos) = (k as f64 * theta).sin_cos();
                [cos, sin]
            })
            .collect();
        Ok(Self { n, positions, masses: vec![1.0; n], has_center: false, center_inertia: CenterInertia::Full })
    }

    /// The n-gon plus a central body of mass `m` at the origin.
    pub fn centered(n: usize, m: f64) -> Result<Self> {
        Self::centered_with_inertia(n, m, CenterInertia::Full)
    }

    pub fn centered_with_inertia(n: usize, m: f64, convention: CenterInertia) -> Result<Self> {
        if !(m > 0.0) {
            return Err(Error::InvalidArgument(format!("central mass must be positive, got {m}")));
        }
        let mut c = Self::ngon(n)?;
        c.positions.push([0.0, 0.0]);
        c.masses.push(m);
        c.has_center = true;
        c.center_inertia = convention;
        Ok(c)
    }

    /// Number of ring bodies.
    pub fn ring_count(&self) -> usize {
        self.n
    }

    pub fn body_count(&self) -> usize {
        self.positions.len()
    }

    /// Length of the flattened coordinate vector (2n or 2n+2).
    pub fn dof(&self) -> usize {
        2 * self.body_count()
    }

    pub fn has_center(&self) -> bool {
        self.has_center
    }

    pub fn central_mass(&self) -> Option<f64> {
        self.has_center.then(|| self.masses[self.n])
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// The flattened reference coordinates z0 = (x1, y1, x2, y2, ...).
    pub fn reference_coords(&self) -> Vec<f64> {
        self.positions.iter().flat_map(|p| p.iter().copied()).collect()
    }

    /// Per-body weight in the quadratic form I = 1/2 sum w_i |q_i|^2.
    /// Ring bodies weigh 1; the central body weighs 2m or m depending on
    /// the inertia convention.
    fn inertia_weights(&self) -> Vec<f64> {
        let mut w = vec![1.0; self.body_count()];
        if self.has_center {
            w[self.n] = match self.center_inertia {
                CenterInertia::Full => 2.0 * self.masses[self.n],
                CenterInertia::Half => self.masses[self.n],
            };
        }
        w
    }

    fn check_len(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dof() {
            return Err(Error::DimensionMismatch { expected: self.dof(), got: z.len() });
        }
        Ok(())
    }
}

/// Value, gradient, and Hessian of a scalar field at a point.
#[derive(Clone, Debug)]
pub struct ScalarFieldEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Mat,
}

/// Selects the scalar field whose Hessian is analyzed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetFn {
    /// f = sqrt(I) * U
    Normalized,
    /// bare potential U
    Bare,
}

impl fmt::Display for TargetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFn::Normalized => write!(f, "f"),
            TargetFn::Bare => write!(f, "U"),
        }
    }
}

impl Serialize for TargetFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for TargetFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" | "F" => Ok(TargetFn::Normalized),
            "u" | "U" => Ok(TargetFn::Bare),
            other => Err(Error::InvalidArgument(format!("unknown function '{other}', expected f or U"))),
        }
    }
}

/// I(z) = 1/2 sum w_i |q_i|^2 with the configuration's inertia weights.
pub fn eval_moment(c: &Configuration, z: &[f64]) -> Result<ScalarFieldEval> {
    c.check_len(z)?;
    let w = c.inertia_weights();
    let dof = c.dof();
    let mut value = 0.0;
    let mut gradient = vec![0.0; dof];
    let mut hessian = Mat::zeros(dof, dof);
    for (b, &wb) in w.iter().enumerate() {
        let (x, y) = (z[2 * b], z[2 * b + 1]);
        value += 0.5 * wb * (x * x + y * y);
        gradient[2 * b] = wb * x;
        gradient[2 * b + 1] = wb * y;
        hessian[(2 * b, 2 * b)] = wb;
        hessian[(2 * b + 1, 2 * b + 1)] = wb;
    }
    Ok(ScalarFieldEval { value, gradient, hessian })
}

/// U(z) = sum over pairs of m_i m_j / |q_i - q_j|.
pub fn eval_potential(c: &Configuration, z: &[f64]) -> Result<ScalarFieldEval> {
    c.check_len(z)?;
    let nb = c.body_count();
    let dof = c.dof();
    let mut value = 0.0;
    let mut gradient = vec![0.0; dof];
    let mut hessian = Mat::zeros(dof, dof);

    for i in 0..nb {
        for j in (i + 1)..nb {
            let dx = z[2 * i] - z[2 * j];
            let dy = z[2 * i + 1] - z[2 * j + 1];
            let r2 = dx * dx + dy * dy;
            let r = r2.sqrt();
            if r < SINGULARITY_CUTOFF {
                return Err(Error::Singularity { i, j, sep: r, cutoff: SINGULARITY_CUTOFF });
            }
            let mm = c.masses[i] * c.masses[j];
            let r3 = r2 * r;
            let r5 = r3 * r2;
            value += mm / r;

            // d(1/r)/dq_i = -d/r^3
            gradient[2 * i] -= mm * dx / r3;
            gradient[2 * i + 1] -= mm * dy / r3;
            gradient[2 * j] += mm * dx / r3;
            gradient[2 * j + 1] += mm * dy / r3;

            // pair block: B = mm * (3 d d^T / r^5 - I / r^3)
            let bxx = mm * (3.0 * dx * dx / r5 - 1.0 / r3);
            let bxy = mm * (3.0 * dx * dy / r5);
            let byy = mm * (3.0 * dy * dy / r5 - 1.0 / r3);

            hessian[(2 * i, 2 * i)] += bxx;
            hessian[(2 * i, 2 * i + 1)] += bxy;
            hessian[(2 * i + 1, 2 * i)] += bxy;
            hessian[(2 * i + 1, 2 * i + 1)] += byy;

            hessian[(2 * j, 2 * j)] += bxx;
            hessian[(2 * j, 2 * j + 1)] += bxy;
            hessian[(2 * j + 1, 2 * j)] += bxy;
            hessian[(2 * j + 1, 2 * j + 1)] += byy;

            hessian[(2 * i, 2 * j)] -= bxx;
            hessian[(2 * i, 2 * j + 1)] -= bxy;
            hessian[(2 * i + 1, 2 * j)] -= bxy;
            hessian[(2 * i + 1, 2 * j + 1)] -= byy;

            hessian[(2 * j, 2 * i)] -= bxx;
            hessian[(2 * j, 2 * i + 1)] -= bxy;
            hessian[(2 * j + 1, 2 * i)] -= bxy;
            hessian[(2 * j + 1, 2 * i + 1)] -= byy;
        }
    }
    Ok(ScalarFieldEval { value, gradient, hessian })
}

/// f(z) = sqrt(I) * U assembled by the product rule:
/// D^2 f = (grad I (grad U)' + grad U (grad I)')/(2 sqrt I)
///       + U * (D^2 I / (2 sqrt I) - grad I grad I' / (4 I^{3/2}))
///       + sqrt(I) * D^2 U.
pub fn eval_normalized(c: &Configuration, z: &[f64]) -> Result<ScalarFieldEval> {
    let mi = eval_moment(c, z)?;
    let pu = eval_potential(c, z)?;
    let dof = c.dof();
    let i_val = mi.value;
    if !(i_val > 0.0) {
        return Err(Error::InvalidArgument("moment of inertia must be positive".into()));
    }
    let s = i_val.sqrt();

    let value = s * pu.value;
    let mut gradient = vec![0.0; dof];
    for k in 0..dof {
        gradient[k] = pu.value * mi.gradient[k] / (2.0 * s) + s * pu.gradient[k];
    }

    let c1 = 1.0 / (2.0 * s);
    let c2 = pu.value / (4.0 * i_val * s);
    let mut hessian = Mat::zeros(dof, dof);
    for a in 0..dof {
        for b in 0..dof {
            hessian[(a, b)] = c1 * (mi.gradient[a] * pu.gradient[b] + pu.gradient[a] * mi.gradient[b])
                + pu.value * c1 * mi.hessian[(a, b)]
                - c2 * mi.gradient[a] * mi.gradient[b]
                + s * pu.hessian[(a, b)];
        }
    }
    hessian.symmetrize();
    Ok(ScalarFieldEval { value, gradient, hessian })
}

pub fn eval_target(c: &Configuration, z: &[f64], t: TargetFn) -> Result<ScalarFieldEval> {
    match t {
        TargetFn::Normalized => eval_normalized(c, z),
        TargetFn::Bare => eval_potential(c, z),
    }
}

/// Hessian of the chosen field at the reference configuration z0.
pub fn hessian_at_reference(c: &Configuration, t: TargetFn) -> Mat {
    let z0 = c.reference_coords();
    eval_target(c, &z0, t).expect("reference configuration is non-singular").hessian
}

/// Max-norm of the gradient of sqrt(I)*U at z0. Vanishes when z0 is a
/// central configuration.
pub fn central_config_residual(c: &Configuration) -> f64 {
    let z0 = c.reference_coords();
    let eval = eval_normalized(c, &z0).expect("reference configuration is non-singular");
    norm_inf(&eval.gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdcheck;
    use crate::linalg::SplitMix;

    const SQRT_3: f64 = 1.732_050_807_568_877_3;

    fn perturbed(c: &Configuration, seed: u64, amp: f64) -> Vec<f64> {
        let mut rng = SplitMix::new(seed);
        c.reference_coords().iter().map(|v| v + amp * rng.next_f64()).collect()
    }

    #[test]
    fn square_positions() {
        let c = Configuration::ngon(4).unwrap();
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, e) in c.positions().iter().zip(expect) {
            assert!((p[0] - e[0]).abs() < 1e-15 && (p[1] - e[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn triangle_distances() {
        let c = Configuration::ngon(3).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (p, q) = (c.positions()[i], c.positions()[j]);
                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                assert!((d - SQRT_3).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hexagon_second_vertex() {
        let c = Configuration::ngon(6).unwrap();
        assert!((c.positions()[1][0] - 0.5).abs() < 1e-15);
        assert!((c.positions()[1][1] - 0.75_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn centered_builders() {
        let c = Configuration::centered(4, 1.0).unwrap();
        assert_eq!(c.body_count(), 5);
        assert_eq!(c.positions()[4], [0.0, 0.0]);
        assert_eq!(c.dof(), 10);

        let c = Configuration::centered(3, 2.0).unwrap();
        assert_eq!(c.masses(), &[1.0, 1.0, 1.0, 2.0]);

        assert!(Configuration::centered(4, 0.0).is_err());
        assert!(Configuration::centered(4, -1.0).is_err());
        assert!(Configuration::ngon(2).is_err());
    }

    #[test]
    fn moment_values_at_reference() {
        let c3 = Configuration::ngon(3).unwrap();
        let e = eval_moment(&c3, &c3.reference_coords()).unwrap();
        assert!((e.value - 1.5).abs() < 1e-14);

        let c4 = Configuration::ngon(4).unwrap();
        let e = eval_moment(&c4, &c4.reference_coords()).unwrap();
        assert!((e.value - 2.0).abs() < 1e-14);

        // gradient at z0 is z0 itself for unit ring masses
        let z0 = c4.reference_coords();
        for (g, z) in e.gradient.iter().zip(&z0) {
            assert!((g - z).abs() < 1e-14);
        }
    }

    #[test]
    fn potential_values_at_reference() {
        let c3 = Configuration::ngon(3).unwrap();
        let e = eval_potential(&c3, &c3.reference_coords()).unwrap();
        assert!((e.value - SQRT_3).abs() < 1e-14);

        // six pairs: four sides at sqrt(2), two diagonals at 2
        let c4 = Configuration::ngon(4).unwrap();
        let e = eval_potential(&c4, &c4.reference_coords()).unwrap();
        let mut oracle = 0.0;
        let z = c4.reference_coords();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (dx, dy) = (z[2 * i] - z[2 * j], z[2 * i + 1] - z[2 * j + 1]);
                oracle += 1.0 / dx.hypot(dy);
            }
        }
        assert!((oracle - (1.0 + 2.0 * 2.0_f64.sqrt())).abs() < 1e-14);
        assert!((e.value - oracle).abs() < 1e-14);
    }

    #[test]
    fn potential_gradient_is_radial_at_reference() {
        // central configuration direction: grad U is parallel to -z0
        let c = Configuration::ngon(5).unwrap();
        let z0 = c.reference_coords();
        let e = eval_potential(&c, &z0).unwrap();
        let sigma = e.value / (2.0 * eval_moment(&c, &z0).unwrap().value);
        for (g, z) in e.gradient.iter().zip(&z0) {
            assert!((g + sigma * z).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_value_at_reference() {
        let c = Configuration::ngon(3).unwrap();
        let e = eval_normalized(&c, &c.reference_coords()).unwrap();
        assert!((e.value - 3.0 / 2.0_f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gradients_match_finite_differences() {
        for n in [3, 5, 8] {
            let c = Configuration::ngon(n).unwrap();
            let z = perturbed(&c, 11 + n as u64, 0.05);
            for t in [TargetFn::Normalized, TargetFn::Bare] {
                let e = eval_target(&c, &z, t).unwrap();
                let fd = fdcheck::gradient(|p| eval_target(&c, p, t).unwrap().value, &z, 1e-6);
                for (a, b) in e.gradient.iter().zip(&fd) {
                    assert!((a - b).abs() < 1e-6, "n={n} {t}: {a} vs {b}");
                }
            }
        }
        let c = Configuration::centered(4, 1.5).unwrap();
        let z = perturbed(&c, 99, 0.05);
        let e = eval_moment(&c, &z).unwrap();
        let fd = fdcheck::gradient(|p| eval_moment(&c, p).unwrap().value, &z, 1e-6);
        for (a, b) in e.gradient.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn hessians_match_finite_differences_of_gradient() {
        for (c, seed) in [
            (Configuration::ngon(4).unwrap(), 5_u64),
            (Configuration::centered(3, 2.0).unwrap(), 6),
        ] {
            let z = perturbed(&c, seed, 0.05);
            for t in [TargetFn::Normalized, TargetFn::Bare] {
                let e = eval_target(&c, &z, t).unwrap();
                let fd = fdcheck::jacobian_of_gradient(
                    |p| eval_target(&c, p, t).unwrap().gradient,
                    &z,
                    1e-6,
                );
                assert!(e.hessian.sub(&fd).max_abs() < 1e-6, "{t}");
            }
        }
    }

    #[test]
    fn central_configuration_residuals() {
        for n in [3, 5, 9] {
            let c = Configuration::ngon(n).unwrap();
            assert!(central_config_residual(&c) < 1e-10, "n = {n}");
        }
        // the centered ring is a central configuration for every mass
        for m in [0.1, 1.0, 10.0] {
            let c = Configuration::centered(4, m).unwrap();
            assert!(central_config_residual(&c) < 1e-10, "m = {m}");
            let ch = Configuration::centered_with_inertia(4, m, CenterInertia::Half).unwrap();
            assert!(central_config_residual(&ch) < 1e-10, "m = {m} (half)");
        }
    }

    #[test]
    fn coincident_bodies_error() {
        let c = Configuration::ngon(3).unwrap();
        let mut z = c.reference_coords();
        z[2] = z[0];
        z[3] = z[1];
        assert!(matches!(eval_potential(&c, &z), Err(Error::Singularity { .. })));
    }

    #[test]
    fn length_mismatch_error() {
        let c = Configuration::ngon(3).unwrap();
        assert!(matches!(
            eval_moment(&c, &[0.0; 4]),
            Err(Error::DimensionMismatch { expected: 6, got: 4 })
        ));
    }
}
