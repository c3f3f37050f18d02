//! The dihedral group D_n: elements, multiplication, irreducible
//! representations, characters, and decomposition multiplicities.
//!
//! D_n is presented by a rotation `r` of order n and a reflection `s` with
//! s r s = r^{-1}. Its real irreducible representations are four
//! one-dimensional ones (phi1..phi4, the last two only for n even) and
//! floor((n-1)/2) two-dimensional ones (rho_k).

use std::fmt;

use serde::Serialize;

use crate::linalg::Mat;
use crate::{Error, Result};

/// Smallest group order accepted: n < 3 degenerates the n-gon geometry.
pub const MIN_ORDER: usize = 3;

/// An element r^power (rotation) or r^power * s (reflection) of D_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    reflection: bool,
    power: usize,
    order_n: usize,
}

impl GroupElement {
    pub fn new(reflection: bool, power: i64, order_n: usize) -> Result<Self> {
        if order_n < MIN_ORDER {
            return Err(Error::InvalidArgument(format!(
                "dihedral order must be at least {MIN_ORDER}, got {order_n}"
            )));
        }
        let n = order_n as i64;
        let power = power.rem_euclid(n) as usize;
        Ok(Self { reflection, power, order_n })
    }

    pub fn identity(order_n: usize) -> Result<Self> {
        Self::new(false, 0, order_n)
    }

    pub fn rotation(power: i64, order_n: usize) -> Result<Self> {
        Self::new(false, power, order_n)
    }

    /// r^power * s
    pub fn reflection(power: i64, order_n: usize) -> Result<Self> {
        Self::new(true, power, order_n)
    }

    pub fn is_reflection(&self) -> bool {
        self.reflection
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn order_n(&self) -> usize {
        self.order_n
    }

    pub fn is_identity(&self) -> bool {
        !self.reflection && self.power == 0
    }

    /// Group product under r^n = s^2 = e and s r s = r^{-1}.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.order_n != other.order_n {
            return Err(Error::GroupOrderMismatch(self.order_n, other.order_n));
        }
        let n = self.order_n as i64;
        let (pa, pb) = (self.power as i64, other.power as i64);
        // (r^pa s^ra)(r^pb s^rb) = r^(pa ± pb) s^(ra xor rb)
        let power = if self.reflection { pa - pb } else { pa + pb };
        GroupElement::new(self.reflection ^ other.reflection, power.rem_euclid(n), self.order_n)
    }

    pub fn inverse(&self) -> GroupElement {
        if self.reflection {
            // (r^p s)^{-1} = s r^{-p} = r^p s
            *self
        } else {
            GroupElement { reflection: false, power: (self.order_n - self.power) % self.order_n, order_n: self.order_n }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.reflection, self.power) {
            (false, 0) => write!(f, "e"),
            (false, 1) => write!(f, "r"),
            (false, p) => write!(f, "r^{p}"),
            (true, 0) => write!(f, "s"),
            (true, 1) => write!(f, "r*s"),
            (true, p) => write!(f, "r^{p}*s"),
        }
    }
}

/// All 2n elements of D_n, rotations first.
pub fn elements(order_n: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(2 * order_n);
    for p in 0..order_n {
        out.push(GroupElement::new(false, p as i64, order_n)?);
    }
    for p in 0..order_n {
        out.push(GroupElement::new(true, p as i64, order_n)?);
    }
    Ok(out)
}

/// Label of an irreducible representation of D_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    /// Two-dimensional representation, k in [1, n/2 - 1] (n even) or
    /// [1, (n-1)/2] (n odd).
    Rho(usize),
}

impl IrrepLabel {
    pub fn dim(&self) -> usize {
        match self {
            IrrepLabel::Rho(_) => 2,
            _ => 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n < MIN_ORDER {
            return Err(Error::InvalidArgument(format!("dihedral order {n} too small")));
        }
        match *self {
            IrrepLabel::Phi3 | IrrepLabel::Phi4 if n % 2 != 0 => Err(Error::InvalidArgument(
                format!("{self} exists only for even n (got n = {n})"),
            )),
            IrrepLabel::Rho(k) if k < 1 || k > rho_max(n) => Err(Error::InvalidArgument(
                format!("rho index {k} out of range [1, {}] for n = {n}", rho_max(n)),
            )),
            _ => Ok(()),
        }
    }

    /// All irrep labels of D_n in the conventional order
    /// phi1, phi2, (phi3, phi4 for n even), rho_1, rho_2, ...
    pub fn all_for(n: usize) -> Result<Vec<IrrepLabel>> {
        if n < MIN_ORDER {
            return Err(Error::InvalidArgument(format!("dihedral order {n} too small")));
        }
        let mut out = vec![IrrepLabel::Phi1, IrrepLabel::Phi2];
        if n % 2 == 0 {
            out.push(IrrepLabel::Phi3);
            out.push(IrrepLabel::Phi4);
        }
        for k in 1..=rho_max(n) {
            out.push(IrrepLabel::Rho(k));
        }
        Ok(out)
    }
}

/// Largest valid rho index: n/2 - 1 for n even, (n-1)/2 for n odd.
pub fn rho_max(n: usize) -> usize {
    if n % 2 == 0 {
        n / 2 - 1
    } else {
        (n - 1) / 2
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Phi1 => write!(f, "phi1"),
            IrrepLabel::Phi2 => write!(f, "phi2"),
            IrrepLabel::Phi3 => write!(f, "phi3"),
            IrrepLabel::Phi4 => write!(f, "phi4"),
            IrrepLabel::Rho(k) => write!(f, "rho{k}"),
        }
    }
}

impl Serialize for IrrepLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The representing matrix of `g` under the given irrep: 1x1 for the phi's,
/// 2x2 for rho_k. With theta = 2 pi / n, rho_k sends r^j to the rotation by
/// k*j*theta and r^j s to the corresponding reflection.
pub fn irrep_matrix(label: IrrepLabel, g: &GroupElement) -> Result<Mat> {
    label.validate(g.order_n())?;
    let n = g.order_n();
    let j = g.power();
    let scalar = |v: f64| Mat::from_rows(&[&[v]]);
    let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
    match label {
        IrrepLabel::Phi1 => Ok(scalar(1.0)),
        IrrepLabel::Phi2 => Ok(scalar(if g.is_reflection() { -1.0 } else { 1.0 })),
        IrrepLabel::Phi3 => Ok(scalar(sign_j)),
        IrrepLabel::Phi4 => Ok(scalar(if g.is_reflection() { -sign_j } else { sign_j })),
        IrrepLabel::Rho(k) => {
            let ang = (k * j) as f64 * std::f64::consts::TAU / n as f64;
            let (sin, cos) = ang.sin_cos();
            if g.is_reflection() {
                Ok(Mat::from_rows(&[&[cos, sin], &[sin, -cos]]))
            } else {
                Ok(Mat::from_rows(&[&[cos, -sin], &[sin, cos]]))
            }
        }
    }
}

/// A conjugacy class, given by a representative and its size.
#[derive(Clone, Copy, Debug)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub size: usize,
}

/// Conjugacy classes of D_n.
///
/// For n even: {e}, {r^j, r^{n-j}} for j = 1..n/2-1, {r^{n/2}}, the even
/// reflections {s, r^2 s, ...}, and the odd reflections {r s, r^3 s, ...}.
/// For n odd the reflections form a single class of size n.
pub fn conjugacy_classes(n: usize) -> Result<Vec<ConjugacyClass>> {
    if n < MIN_ORDER {
        return Err(Error::InvalidArgument(format!("dihedral order {n} too small")));
    }
    let mut classes = vec![ConjugacyClass { representative: GroupElement::identity(n)?, size: 1 }];
    if n % 2 == 0 {
        for j in 1..n / 2 {
            classes.push(ConjugacyClass { representative: GroupElement::rotation(j as i64, n)?, size: 2 });
        }
        classes.push(ConjugacyClass {
            representative: GroupElement::rotation(n as i64 / 2, n)?,
            size: 1,
        });
        classes.push(ConjugacyClass { representative: GroupElement::reflection(0, n)?, size: n / 2 });
        classes.push(ConjugacyClass { representative: GroupElement::reflection(1, n)?, size: n / 2 });
    } else {
        for j in 1..=(n - 1) / 2 {
            classes.push(ConjugacyClass { representative: GroupElement::rotation(j as i64, n)?, size: 2 });
        }
        classes.push(ConjugacyClass { representative: GroupElement::reflection(0, n)?, size: n });
    }
    Ok(classes)
}

/// A class function on D_n: one real value per conjugacy class.
#[derive(Clone, Debug)]
pub struct CharacterVector {
    n: usize,
    values: Vec<(ConjugacyClass, f64)>,
}

impl CharacterVector {
    /// Build from per-class values aligned with `conjugacy_classes(n)`.
    pub fn from_class_values(n: usize, values: Vec<f64>) -> Result<Self> {
        let classes = conjugacy_classes(n)?;
        if classes.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: classes.len(), got: values.len() });
        }
        Ok(Self { n, values: classes.into_iter().zip(values).collect() })
    }

    pub fn order_n(&self) -> usize {
        self.n
    }

    pub fn class_values(&self) -> &[(ConjugacyClass, f64)] {
        &self.values
    }

    /// Value at the identity (the representation degree).
    pub fn degree(&self) -> f64 {
        self.values[0].1
    }
}

/// Character of an irrep, evaluated per conjugacy class from the closed-form
/// table entries: 2 cos(k j theta) for rho_k on rotations, signs for the
/// one-dimensional irreps, 0 for rho_k on reflections.
pub fn character(label: IrrepLabel, n: usize) -> Result<CharacterVector> {
    label.validate(n)?;
    let classes = conjugacy_classes(n)?;
    let theta = std::f64::consts::TAU / n as f64;
    let values = classes
        .iter()
        .map(|c| {
            let g = c.representative;
            let j = g.power();
            let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
            match (label, g.is_reflection()) {
                (IrrepLabel::Phi1, _) => 1.0,
                (IrrepLabel::Phi2, false) => 1.0,
                (IrrepLabel::Phi2, true) => -1.0,
                (IrrepLabel::Phi3, _) => sign_j,
                (IrrepLabel::Phi4, false) => sign_j,
                (IrrepLabel::Phi4, true) => -sign_j,
                (IrrepLabel::Rho(k), false) => 2.0 * ((k * j) as f64 * theta).cos(),
                (IrrepLabel::Rho(_), true) => 0.0,
            }
        })
        .collect();
    CharacterVector::from_class_values(n, values)
}

/// Group-averaged inner product of two class functions,
/// (1/|D_n|) * sum over all 2n elements of chi1 * chi2.
pub fn inner_product(chi1: &CharacterVector, chi2: &CharacterVector) -> Result<f64> {
    if chi1.n != chi2.n {
        return Err(Error::GroupOrderMismatch(chi1.n, chi2.n));
    }
    let total: f64 = chi1
        .values
        .iter()
        .zip(&chi2.values)
        .map(|((c, a), (_, b))| c.size as f64 * a * b)
        .sum();
    Ok(total / (2 * chi1.n) as f64)
}

/// Multiplicity of each irrep in the representation with character `chi`.
///
/// Each inner product must be a nonnegative integer up to 1e-9, otherwise
/// `chi` is not the character of a genuine real representation of D_n.
pub fn decompose(chi: &CharacterVector) -> Result<Vec<(IrrepLabel, usize)>> {
    let n = chi.n;
    let mut out = Vec::new();
    let mut dim_sum = 0.0;
    for label in IrrepLabel::all_for(n)? {
        let raw = inner_product(chi, &character(label, n)?)?;
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-9 || rounded < 0.0 {
            return Err(Error::NonIntegerMultiplicity((raw - rounded).abs()));
        }
        let mult = rounded as usize;
        dim_sum += (mult * label.dim()) as f64;
        if mult > 0 {
            out.push((label, mult));
        }
    }
    if (dim_sum - chi.degree()).abs() > 1e-9 {
        return Err(Error::NonIntegerMultiplicity((dim_sum - chi.degree()).abs()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(p: i64, n: usize) -> GroupElement {
        GroupElement::rotation(p, n).unwrap()
    }

    fn refl(p: i64, n: usize) -> GroupElement {
        GroupElement::reflection(p, n).unwrap()
    }

    #[test]
    fn rotation_wraps_to_identity() {
        for n in 3..10 {
            let prod = rot(1, n).multiply(&rot(n as i64 - 1, n)).unwrap();
            assert!(prod.is_identity());
        }
    }

    #[test]
    fn reflection_squares_to_identity() {
        let s = refl(0, 5);
        assert!(s.multiply(&s).unwrap().is_identity());
    }

    #[test]
    fn conjugation_inverts_rotation() {
        // s^{-1} r s = r^{n-1}
        for n in 3..10 {
            let s = refl(0, n);
            let r = rot(1, n);
            let conj = s.inverse().multiply(&r).unwrap().multiply(&s).unwrap();
            assert_eq!(conj, rot(n as i64 - 1, n));
        }
    }

    #[test]
    fn mismatched_orders_rejected() {
        let a = rot(1, 4);
        let b = rot(1, 5);
        assert!(matches!(a.multiply(&b), Err(Error::GroupOrderMismatch(4, 5))));
    }

    #[test]
    fn small_order_rejected() {
        assert!(GroupElement::rotation(0, 2).is_err());
    }

    #[test]
    fn phi2_on_reflections() {
        for n in [4, 5, 6] {
            for p in 0..n {
                let m = irrep_matrix(IrrepLabel::Phi2, &refl(p as i64, n)).unwrap();
                assert_eq!(m[(0, 0)], -1.0);
            }
        }
    }

    #[test]
    fn rho_at_identity_is_identity() {
        let m = irrep_matrix(IrrepLabel::Rho(2), &GroupElement::identity(7).unwrap()).unwrap();
        assert_eq!(m, Mat::identity(2));
    }

    #[test]
    fn rho1_of_r_for_n4_is_quarter_turn() {
        let m = irrep_matrix(IrrepLabel::Rho(1), &rot(1, 4)).unwrap();
        let expect = Mat::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - expect[(i, j)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn phi3_requires_even_order() {
        assert!(irrep_matrix(IrrepLabel::Phi3, &rot(1, 5)).is_err());
        assert!(irrep_matrix(IrrepLabel::Phi3, &rot(1, 6)).is_ok());
    }

    #[test]
    fn homomorphism_small_orders() {
        for n in 3..=8 {
            for label in IrrepLabel::all_for(n).unwrap() {
                for a in elements(n).unwrap() {
                    for b in elements(n).unwrap() {
                        let lhs = irrep_matrix(label, &a)
                            .unwrap()
                            .matmul(&irrep_matrix(label, &b).unwrap());
                        let rhs = irrep_matrix(label, &a.multiply(&b).unwrap()).unwrap();
                        assert!(lhs.sub(&rhs).max_abs() < 1e-12, "{label} at n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn character_equals_trace_of_irrep() {
        for n in [4, 5, 6, 9, 12] {
            for label in IrrepLabel::all_for(n).unwrap() {
                let chi = character(label, n).unwrap();
                for (class, value) in chi.class_values() {
                    let m = irrep_matrix(label, &class.representative).unwrap();
                    let tr: f64 = (0..m.rows()).map(|i| m[(i, i)]).sum();
                    assert!((tr - value).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn character_table_values() {
        let n = 8;
        let theta = std::f64::consts::TAU / n as f64;
        for label in IrrepLabel::all_for(n).unwrap() {
            let chi = character(label, n).unwrap();
            for (class, value) in chi.class_values() {
                let g = class.representative;
                match (label, g.is_reflection()) {
                    (IrrepLabel::Phi1, _) => assert_eq!(*value, 1.0),
                    (IrrepLabel::Rho(k), false) => {
                        let expect = 2.0 * ((k * g.power()) as f64 * theta).cos();
                        assert!((value - expect).abs() < 1e-15);
                    }
                    (IrrepLabel::Rho(_), true) => assert_eq!(*value, 0.0),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn character_orthonormality() {
        for n in [4, 5, 6, 7, 8, 12] {
            let labels = IrrepLabel::all_for(n).unwrap();
            for &a in &labels {
                for &b in &labels {
                    let ip = inner_product(&character(a, n).unwrap(), &character(b, n).unwrap())
                        .unwrap();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12, "({a},{b}) n={n}: {ip}");
                }
            }
        }
    }

    #[test]
    fn inner_product_against_elementwise_sum() {
        // independent oracle: literal 12-term sum over D_6 via irrep traces
        let n = 6;
        let (a, b) = (IrrepLabel::Rho(1), IrrepLabel::Rho(2));
        let mut total = 0.0;
        for g in elements(n).unwrap() {
            let tr = |l: IrrepLabel| -> f64 {
                let m = irrep_matrix(l, &g).unwrap();
                (0..m.rows()).map(|i| m[(i, i)]).sum()
            };
            total += tr(a) * tr(b);
        }
        let oracle = total / (2 * n) as f64;
        assert!(oracle.abs() < 1e-12);
        let ip = inner_product(&character(a, n).unwrap(), &character(b, n).unwrap()).unwrap();
        assert!((ip - oracle).abs() < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_representation() {
        // phi1 + 0.5 phi2 is not a genuine character
        let n = 5;
        let chi1 = character(IrrepLabel::Phi1, n).unwrap();
        let chi2 = character(IrrepLabel::Phi2, n).unwrap();
        let values: Vec<f64> = chi1
            .class_values()
            .iter()
            .zip(chi2.class_values())
            .map(|((_, a), (_, b))| a + 0.5 * b)
            .collect();
        let chi = CharacterVector::from_class_values(n, values).unwrap();
        assert!(matches!(decompose(&chi), Err(Error::NonIntegerMultiplicity(_))));
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 3..=16 {
            let classes = conjugacy_classes(n).unwrap();
            let total: usize = classes.iter().map(|c| c.size).sum();
            assert_eq!(total, 2 * n);
        }
    }
}
