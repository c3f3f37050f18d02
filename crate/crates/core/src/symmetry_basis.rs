//! The permutation representation of D_n on configuration space and the
//! symmetry-adapted orthogonal basis P built from its eigenvectors.
//!
//! The representation acts on R^{2n} (or R^{2n+2} for the centered case):
//! the generator s reflects across the x-axis and reverses the ring order,
//! the generator r shifts the ring by one step while rotating every planar
//! coordinate pair by theta = 2 pi / n. Columns of P span the minimal
//! subspaces invariant under every matrix that commutes with the action,
//! obtained as intersections of eigenspaces of the two generators. Any
//! commuting symmetric matrix becomes block diagonal in this basis with
//! blocks no larger than 2x2 (3x3 for the centered case).

use std::fmt;

use serde::Serialize;

use crate::dihedral::{conjugacy_classes, CharacterVector, GroupElement};
use crate::linalg::{dot, norm2, Mat};
use crate::{Error, Result};

/// The 2n- or (2n+2)-dimensional permutation representation of D_n.
#[derive(Clone, Copy, Debug)]
pub struct PermRepresentation {
    n: usize,
    centered: bool,
}

impl PermRepresentation {
    pub fn new(n: usize, centered: bool) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
        }
        Ok(Self { n, centered })
    }

    pub fn ring_count(&self) -> usize {
        self.n
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    pub fn dim(&self) -> usize {
        2 * self.n + if self.centered { 2 } else { 0 }
    }

    /// The representing orthogonal matrix of a group element.
    ///
    /// r^p maps ring body g to g+p and rotates each coordinate pair by
    /// p*theta; r^p s sends body g to p-g and applies the rotation composed
    /// with the reflection F = diag(1, -1). The central body, when present,
    /// stays put and transforms by the same 2x2 block.
    pub fn matrix(&self, g: &GroupElement) -> Result<Mat> {
        if g.order_n() != self.n {
            return Err(Error::GroupOrderMismatch(self.n, g.order_n()));
        }
        let n = self.n;
        let p = g.power();
        let theta = std::f64::consts::TAU / n as f64;
        let (sin, cos) = (p as f64 * theta).sin_cos();
        // 2x2 block: R(p theta) for rotations, R(p theta) F for reflections
        let block = if g.is_reflection() {
            [[cos, sin], [sin, -cos]]
        } else {
            [[cos, -sin], [sin, cos]]
        };
        let mut m = Mat::zeros(self.dim(), self.dim());
        for body in 0..n {
            let target = if g.is_reflection() { (n + p - body) % n } else { (body + p) % n };
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * target + a, 2 * body + b)] = block[a][b];
                }
            }
        }
        if self.centered {
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * n + a, 2 * n + b)] = block[a][b];
                }
            }
        }
        Ok(m)
    }

    /// Character of this representation, evaluated on class representatives.
    pub fn character(&self) -> CharacterVector {
        let classes = conjugacy_classes(self.n).expect("n validated at construction");
        let values = classes
            .iter()
            .map(|c| {
                let m = self.matrix(&c.representative).expect("same group order");
                (0..m.rows()).map(|i| m[(i, i)]).sum()
            })
            .collect();
        CharacterVector::from_class_values(self.n, values).expect("class count matches")
    }
}

/// Rotation part of a subspace label: eigenvalue 1, eigenvalue -1 (n even
/// only), or the conjugate pair e^{±ij theta}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RotPart {
    One,
    MinusOne,
    Pair(usize),
}

/// Which intersection of generator eigenspaces a basis column spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceLabel {
    /// Eigenvalue of the reflection action on the column: +1 or -1.
    pub s_sign: i8,
    pub rot: RotPart,
}

impl fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.s_sign >= 0 { "+1" } else { "-1" };
        match self.rot {
            RotPart::One => write!(f, "s={s},r=1"),
            RotPart::MinusOne => write!(f, "s={s},r=-1"),
            RotPart::Pair(j) => write!(f, "s={s},r=pair({j})"),
        }
    }
}

impl Serialize for SubspaceLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which eigenvector formula produced a basis column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnRole {
    V1RotOne,
    V2RotOne,
    V1RotMinusOne,
    V2RotMinusOne,
    ReV1(usize),
    /// The negative of Im v2 for the pair; this sign makes the two 2x2
    /// blocks of a commuting Hessian equal entrywise rather than equal up
    /// to the sign of the off-diagonal entry.
    NegImV2(usize),
    ImV1(usize),
    ReV2(usize),
    CenterX,
    CenterY,
}

impl fmt::Display for ColumnRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRole::V1RotOne => write!(f, "v1_rot1"),
            ColumnRole::V2RotOne => write!(f, "v2_rot1"),
            ColumnRole::V1RotMinusOne => write!(f, "v1_rot-1"),
            ColumnRole::V2RotMinusOne => write!(f, "v2_rot-1"),
            ColumnRole::ReV1(j) => write!(f, "re_v1_pair{j}"),
            ColumnRole::NegImV2(j) => write!(f, "neg_im_v2_pair{j}"),
            ColumnRole::ImV1(j) => write!(f, "im_v1_pair{j}"),
            ColumnRole::ReV2(j) => write!(f, "re_v2_pair{j}"),
            ColumnRole::CenterX => write!(f, "center_x"),
            ColumnRole::CenterY => write!(f, "center_y"),
        }
    }
}

impl Serialize for ColumnRole {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Largest pair index of the representation: n/2 - 1 (n even) or (n-1)/2.
pub fn pair_max(n: usize) -> usize {
    crate::dihedral::rho_max(n)
}

/// Eigenvectors of the reflection generator's action, labeled by the
/// eigenvalue sign. Entries are 0 and ±1, so the eigenvector identity
/// D(s) v = ±v is exact in floating point.
pub fn reflection_eigenvectors(n: usize) -> Result<Vec<(i8, Vec<f64>)>> {
    let rep = PermRepresentation::new(n, false)?;
    let dim = rep.dim();
    let mut out = Vec::with_capacity(dim);
    let unit = |i: usize| -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    };
    let two = |i: usize, si: f64, j: usize, sj: f64| -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = si;
        v[j] = sj;
        v
    };
    // bodies fixed by s contribute single coordinate vectors
    out.push((1, unit(0)));
    out.push((-1, unit(1)));
    if n % 2 == 0 {
        out.push((1, unit(n)));
        out.push((-1, unit(n + 1)));
    }
    // swapped bodies g <-> n-g contribute sums and differences
    let top = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for g in 1..=top {
        let (xg, yg) = (2 * g, 2 * g + 1);
        let (xh, yh) = (2 * (n - g), 2 * (n - g) + 1);
        out.push((1, two(xg, 1.0, xh, 1.0)));
        out.push((1, two(yg, 1.0, yh, -1.0)));
        out.push((-1, two(xg, 1.0, xh, -1.0)));
        out.push((-1, two(yg, 1.0, yh, 1.0)));
    }
    Ok(out)
}

/// An eigenvector of the rotation generator's action, stored as real and
/// imaginary parts. For `RotPart::One` and `RotPart::MinusOne` the imaginary
/// part vanishes; for `Pair(j)` the eigenvalue is e^{i j theta}.
#[derive(Clone, Debug)]
pub struct RotationEigenvector {
    pub kind: RotPart,
    /// 1 or 2, matching the two printed formulas per eigenvalue.
    pub index: u8,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// The explicit eigenvector family of the rotation action: two vectors for
/// eigenvalue 1, two for -1 (n even), and two complex ones per pair.
pub fn rotation_eigenvectors(n: usize) -> Result<Vec<RotationEigenvector>> {
    let rep = PermRepresentation::new(n, false)?;
    let dim = rep.dim();
    let theta = std::f64::consts::TAU / n as f64;
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let sqrt_2_n = (2.0 / n as f64).sqrt();
    let mut out = Vec::new();

    let mut build = |kind: RotPart, index: u8, f: &dyn Fn(usize) -> [f64; 4]| {
        let mut re = vec![0.0; dim];
        let mut im = vec![0.0; dim];
        for g in 0..n {
            let [rx, ry, ix, iy] = f(g);
            re[2 * g] = rx;
            re[2 * g + 1] = ry;
            im[2 * g] = ix;
            im[2 * g + 1] = iy;
        }
        out.push(RotationEigenvector { kind, index, re, im });
    };

    build(RotPart::One, 1, &|g| {
        let (sin, cos) = (g as f64 * theta).sin_cos();
        [inv_sqrt_n * cos, inv_sqrt_n * sin, 0.0, 0.0]
    });
    build(RotPart::One, 2, &|g| {
        let (sin, cos) = (g as f64 * theta).sin_cos();
        [-inv_sqrt_n * sin, inv_sqrt_n * cos, 0.0, 0.0]
    });
    if n % 2 == 0 {
        build(RotPart::MinusOne, 1, &|g| {
            let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
            let (sin, cos) = (g as f64 * theta).sin_cos();
            [sign * inv_sqrt_n * cos, sign * inv_sqrt_n * sin, 0.0, 0.0]
        });
        build(RotPart::MinusOne, 2, &|g| {
            let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
            let (sin, cos) = (g as f64 * theta).sin_cos();
            [-sign * inv_sqrt_n * sin, sign * inv_sqrt_n * cos, 0.0, 0.0]
        });
    }
    for j in 1..=pair_max(n) {
        // v = e^{-i j g theta} * (base vector), split into Re and Im
        build(RotPart::Pair(j), 1, &|g| {
            let (sin, cos) = (g as f64 * theta).sin_cos();
            let (ps, pc) = ((j * g) as f64 * theta).sin_cos();
            [sqrt_2_n * pc * cos, sqrt_2_n * pc * sin, -sqrt_2_n * ps * cos, -sqrt_2_n * ps * sin]
        });
        build(RotPart::Pair(j), 2, &|g| {
            let (sin, cos) = (g as f64 * theta).sin_cos();
            let (ps, pc) = ((j * g) as f64 * theta).sin_cos();
            [-sqrt_2_n * pc * sin, sqrt_2_n * pc * cos, sqrt_2_n * ps * sin, -sqrt_2_n * ps * cos]
        });
    }
    Ok(out)
}

/// The symmetry-adapted orthogonal basis with per-column subspace labels.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    n: usize,
    centered: bool,
    p: Mat,
    labels: Vec<SubspaceLabel>,
    roles: Vec<ColumnRole>,
}

impl SymmetryBasis {
    /// Column order: v1 and v2 for rotation eigenvalue 1, then (n even)
    /// v1 and v2 for eigenvalue -1, then per pair j the quadruple
    /// (Re v1, -Im v2, Im v1, Re v2). For the centered case every ring
    /// vector is zero-padded and the central coordinate vectors join the
    /// two j = 1 groups, which become three-dimensional.
    pub fn new(n: usize, centered: bool) -> Result<Self> {
        let rep = PermRepresentation::new(n, centered)?;
        let dim = rep.dim();
        let rots = rotation_eigenvectors(n)?;
        let find = |kind: RotPart, index: u8| -> &RotationEigenvector {
            rots.iter().find(|v| v.kind == kind && v.index == index).expect("family is complete")
        };
        let pad = |v: &[f64]| -> Vec<f64> {
            let mut out = v.to_vec();
            out.resize(dim, 0.0);
            out
        };

        let mut columns: Vec<(Vec<f64>, SubspaceLabel, ColumnRole)> = Vec::with_capacity(dim);
        let label = |s: i8, rot: RotPart| SubspaceLabel { s_sign: s, rot };

        let one1 = find(RotPart::One, 1);
        let one2 = find(RotPart::One, 2);
        columns.push((pad(&one1.re), label(1, RotPart::One), ColumnRole::V1RotOne));
        columns.push((pad(&one2.re), label(-1, RotPart::One), ColumnRole::V2RotOne));
        if n % 2 == 0 {
            let m1 = find(RotPart::MinusOne, 1);
            let m2 = find(RotPart::MinusOne, 2);
            columns.push((pad(&m1.re), label(1, RotPart::MinusOne), ColumnRole::V1RotMinusOne));
            columns.push((pad(&m2.re), label(-1, RotPart::MinusOne), ColumnRole::V2RotMinusOne));
        }
        for j in 1..=pair_max(n) {
            let v1 = find(RotPart::Pair(j), 1);
            let v2 = find(RotPart::Pair(j), 2);
            let neg_im_v2: Vec<f64> = v2.im.iter().map(|x| -x).collect();
            let rot = RotPart::Pair(j);
            columns.push((pad(&v1.re), label(1, rot), ColumnRole::ReV1(j)));
            columns.push((pad(&neg_im_v2), label(1, rot), ColumnRole::NegImV2(j)));
            if centered && j == 1 {
                let mut ex = vec![0.0; dim];
                ex[2 * n] = 1.0;
                columns.push((ex, label(1, rot), ColumnRole::CenterX));
            }
            columns.push((pad(&v1.im), label(-1, rot), ColumnRole::ImV1(j)));
            columns.push((pad(&v2.re), label(-1, rot), ColumnRole::ReV2(j)));
            if centered && j == 1 {
                let mut ey = vec![0.0; dim];
                ey[2 * n + 1] = 1.0;
                columns.push((ey, label(-1, rot), ColumnRole::CenterY));
            }
        }
        debug_assert_eq!(columns.len(), dim);

        let mut p = Mat::zeros(dim, dim);
        let mut labels = Vec::with_capacity(dim);
        let mut roles = Vec::with_capacity(dim);
        for (idx, (mut col, lab, role)) in columns.into_iter().enumerate() {
            let norm = norm2(&col);
            for x in &mut col {
                *x /= norm;
            }
            p.set_column(idx, &col);
            labels.push(lab);
            roles.push(role);
        }
        Ok(Self { n, centered, p, labels, roles })
    }

    pub fn ring_count(&self) -> usize {
        self.n
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.p
    }

    pub fn labels(&self) -> &[SubspaceLabel] {
        &self.labels
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn representation(&self) -> PermRepresentation {
        PermRepresentation { n: self.n, centered: self.centered }
    }

    /// Columns grouped by label, in order of first appearance. Labeled
    /// groups are the minimal invariant subspaces: sizes 1, 2, or 3.
    pub fn groups(&self) -> Vec<(SubspaceLabel, Vec<usize>)> {
        let mut out: Vec<(SubspaceLabel, Vec<usize>)> = Vec::new();
        for (idx, &lab) in self.labels.iter().enumerate() {
            match out.last_mut() {
                Some((l, cols)) if *l == lab => cols.push(idx),
                _ => out.push((lab, vec![idx])),
            }
        }
        out
    }

    /// max |P^T P - I|
    pub fn orthogonality_residual(&self) -> f64 {
        let dim = self.dim();
        let gram = self.p.transpose().matmul(&self.p);
        gram.sub(&Mat::identity(dim)).max_abs()
    }

    /// The exact matrix that P^T D(s) P must equal: the diagonal of column
    /// reflection signs.
    pub fn expected_reflection_form(&self) -> Mat {
        let dim = self.dim();
        let mut m = Mat::zeros(dim, dim);
        for (i, lab) in self.labels.iter().enumerate() {
            m[(i, i)] = lab.s_sign as f64;
        }
        m
    }

    /// The exact matrix that P^T D(r) P must equal: 1 on rotation-fixed
    /// columns, -1 on the alternating ones, and 2x2 rotation couplings
    /// between the partner columns of each pair group.
    pub fn expected_rotation_form(&self) -> Mat {
        let dim = self.dim();
        let theta = std::f64::consts::TAU / self.n as f64;
        let mut m = Mat::zeros(dim, dim);
        let col_of = |role: ColumnRole| -> usize {
            self.roles.iter().position(|&r| r == role).expect("role present")
        };
        for (i, &role) in self.roles.iter().enumerate() {
            match role {
                ColumnRole::V1RotOne | ColumnRole::V2RotOne => m[(i, i)] = 1.0,
                ColumnRole::V1RotMinusOne | ColumnRole::V2RotMinusOne => m[(i, i)] = -1.0,
                // D(r) a = cos * a - sin * b, D(r) b = sin * a + cos * b
                // for the partner pairs a = Re v1 / -Im v2, b = Im v1 / Re v2
                ColumnRole::ReV1(j) => {
                    let (sin, cos) = (j as f64 * theta).sin_cos();
                    let b = col_of(ColumnRole::ImV1(j));
                    m[(i, i)] = cos;
                    m[(b, i)] = -sin;
                    m[(i, b)] = sin;
                    m[(b, b)] = cos;
                }
                ColumnRole::NegImV2(j) => {
                    let (sin, cos) = (j as f64 * theta).sin_cos();
                    let b = col_of(ColumnRole::ReV2(j));
                    m[(i, i)] = cos;
                    m[(b, i)] = -sin;
                    m[(i, b)] = sin;
                    m[(b, b)] = cos;
                }
                // the central plane rotates the opposite way around:
                // D(r) e_x = cos e_x + sin e_y
                ColumnRole::CenterX => {
                    let (sin, cos) = theta.sin_cos();
                    let b = col_of(ColumnRole::CenterY);
                    m[(i, i)] = cos;
                    m[(b, i)] = sin;
                    m[(i, b)] = -sin;
                    m[(b, b)] = cos;
                }
                ColumnRole::ImV1(_) | ColumnRole::ReV2(_) | ColumnRole::CenterY => {}
            }
        }
        m
    }
}

/// Residuals certifying that the labeled column groups really are invariant
/// subspaces of the group action.
#[derive(Clone, Debug)]
pub struct GroupResidual {
    pub label: SubspaceLabel,
    /// Distance of D(s)*column from the group's own span (the reflection
    /// preserves every labeled group).
    pub s_residual: f64,
    /// Distance of D(r)*column from the span of the full rotation-part
    /// group (the rotation mixes the two s-signs of a pair, so only the
    /// union over s-signs is r-invariant).
    pub r_residual: f64,
}

#[derive(Clone, Debug)]
pub struct SubspaceReport {
    pub groups: Vec<GroupResidual>,
    /// max |P^T D(s) P - expected diagonal form|
    pub reflection_form_residual: f64,
    /// max |P^T D(r) P - expected rotation form|
    pub rotation_form_residual: f64,
    pub max_residual: f64,
}

/// Check every labeled group against the generator actions and the full
/// simultaneous block-diagonal forms.
pub fn verify_invariant_subspaces(
    rep: &PermRepresentation,
    basis: &SymmetryBasis,
) -> Result<SubspaceReport> {
    if rep.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: rep.dim() });
    }
    let ds = rep.matrix(&GroupElement::reflection(0, rep.ring_count())?)?;
    let dr = rep.matrix(&GroupElement::rotation(1, rep.ring_count())?)?;
    let p = basis.matrix();

    let residual_outside_span = |m: &Mat, cols: &[usize], span: &[usize]| -> f64 {
        let mut worst = 0.0_f64;
        for &c in cols {
            let v = m.mul_vec(&p.column(c));
            let mut rem = v.clone();
            for &s in span {
                let b = p.column(s);
                let coef = dot(&v, &b);
                for (r, bi) in rem.iter_mut().zip(&b) {
                    *r -= coef * bi;
                }
            }
            worst = worst.max(norm2(&rem));
        }
        worst
    };

    let groups = basis.groups();
    let mut out = Vec::new();
    for (label, cols) in &groups {
        // the r-invariant span is the union over both s-signs of the rot part
        let rot_span: Vec<usize> = basis
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.rot == label.rot)
            .map(|(i, _)| i)
            .collect();
        out.push(GroupResidual {
            label: *label,
            s_residual: residual_outside_span(&ds, cols, cols),
            r_residual: residual_outside_span(&dr, cols, &rot_span),
        });
    }

    let ts = p.transpose().matmul(&ds.matmul(p));
    let tr = p.transpose().matmul(&dr.matmul(p));
    let reflection_form_residual = ts.sub(&basis.expected_reflection_form()).max_abs();
    let rotation_form_residual = tr.sub(&basis.expected_rotation_form()).max_abs();

    let max_residual = out
        .iter()
        .flat_map(|g| [g.s_residual, g.r_residual])
        .chain([reflection_form_residual, rotation_form_residual])
        .fold(0.0_f64, f64::max);

    Ok(SubspaceReport { groups: out, reflection_form_residual, rotation_form_residual, max_residual })
}
