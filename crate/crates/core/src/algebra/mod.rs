//! Hypercomplex number systems defined by a multiplication table.
//!
//! A system of dimension `n + 1` has a real unit and `n` hyperimaginary units
//! `i_1 .. i_n`. The table stores, for every ordered pair of hyperimaginary
//! units, the coefficients of their product:
//!
//! ```text
//! i_mu * i_nu = a[mu][nu][0] + a[mu][nu][1] i_1 + ... + a[mu][nu][n] i_n
//! ```
//!
//! Products of general numbers follow from the distributive law.

mod checks;
mod config;
mod tables;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use checks::{check_re_ahn, check_reverse_involution, ReAhnReport, ReverseInvolutionReport};

/// Absolute tolerance used for float comparisons unless stated otherwise.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A hypercomplex number `p_0 + p_1 i_1 + ... + p_n i_n`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HNumber<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> HNumber<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn from_f64s(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::lit(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim])
    }

    pub fn real(dim: usize, x: T) -> Self {
        let mut z = Self::zero(dim);
        z.coeffs[0] = x;
        z
    }

    /// The `k`-th basis element; `k = 0` is the real unit.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut z = Self::zero(dim);
        z.coeffs[k] = T::one();
        z
    }

    /// Uniform sample from `[-1, 1]^dim`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self::new(
            (0..dim)
                .map(|_| T::lit(rng.random_range(-1.0..=1.0)))
                .collect(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Real part `p_0`.
    #[inline]
    pub fn re(&self) -> T {
        self.coeffs[0]
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        ))
    }

    pub fn scale(&self, a: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| a * c).collect())
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, &c| acc + c * c)
            .sqrt()
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Scalar> fmt::Display for HNumber<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "(")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `N` hypercomplex components sharing one algebra, stored as an `N x dim`
/// row-major coefficient array.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> HVector<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients do not split into components of dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize, len: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * len],
        }
    }

    pub fn from_components(dim: usize, components: &[HNumber<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * components.len());
        for c in components {
            same_dim(dim, c.dim())?;
            data.extend_from_slice(c.coeffs());
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of components `N`.
    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn component(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn component_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, i: usize) -> HNumber<T> {
        HNumber::new(self.component(i).to_vec())
    }

    pub fn components(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Exact bit-level key, suitable for hashing visited states.
    pub fn state_key(&self) -> Vec<u64> {
        self.data.iter().map(|c| c.bit_pattern()).collect()
    }

    /// Number of components that differ from `other` (exact comparison).
    pub fn count_differences(&self, other: &Self) -> usize {
        self.components()
            .zip(other.components())
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl<T: Scalar> fmt::Display for HVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.components().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", HNumber::new(c.to_vec()))?;
        }
        write!(f, "]")
    }
}

/// Reverse-involutions supported by the networks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Involution {
    /// `p_0 - p_1 i_1 - ... - p_n i_n`
    Natural,
    /// Identity map; a reverse-involution only on commutative systems.
    Trivial,
}

impl Involution {
    pub fn apply<T: Scalar>(self, p: &HNumber<T>) -> HNumber<T> {
        let mut out = p.clone();
        self.apply_in_place(out.coeffs_mut());
        out
    }

    #[inline]
    pub fn apply_in_place<T: Scalar>(self, coeffs: &mut [T]) {
        if self == Involution::Natural {
            for c in coeffs.iter_mut().skip(1) {
                *c = -*c;
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Involution::Natural => "natural",
            Involution::Trivial => "trivial",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "natural" => Some(Involution::Natural),
            "trivial" => Some(Involution::Trivial),
            _ => None,
        }
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A hypercomplex number system: dimension plus multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec<T> {
    name: String,
    dim: usize,
    /// `(dim-1) x (dim-1) x dim`, indexed by `(mu-1, nu-1, k)`.
    table: Vec<T>,
    /// Doubling level `k` when this is the Cayley-Dickson algebra `A_k`.
    cd_level: Option<u32>,
}

impl<T: Scalar> AlgebraSpec<T> {
    /// Builds a system from a flat table of shape `n x n x (n+1)`, `n = dim - 1`.
    pub fn new(name: impl Into<String>, dim: usize, table: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let n = dim - 1;
        let expected = n * n * dim;
        if table.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: table.len(),
            });
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "multiplication table has non-finite entries".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            dim,
            table,
            cd_level: None,
        })
    }

    /// Builds a system from a closure returning the coefficients of `i_mu i_nu`
    /// (both indices 1-based).
    pub fn from_unit_products<F>(
        name: impl Into<String>,
        dim: usize,
        mut product: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<T>,
    {
        let n = dim.saturating_sub(1);
        let mut table = Vec::with_capacity(n * n * dim);
        for mu in 1..dim {
            for nu in 1..dim {
                let row = product(mu, nu);
                same_dim(dim, row.len())?;
                table.extend(row);
            }
        }
        Self::new(name, dim, table)
    }

    pub(crate) fn with_cd_level(mut self, level: u32) -> Self {
        self.cd_level = Some(level);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cd_level(&self) -> Option<u32> {
        self.cd_level
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    /// Coefficients of `i_mu i_nu`, both indices 1-based.
    #[inline]
    pub fn unit_product(&self, mu: usize, nu: usize) -> &[T] {
        let n = self.dim - 1;
        let start = ((mu - 1) * n + (nu - 1)) * self.dim;
        &self.table[start..start + self.dim]
    }

    /// Table entry `a[mu][nu][k]`.
    #[inline]
    pub fn entry(&self, mu: usize, nu: usize, k: usize) -> T {
        self.unit_product(mu, nu)[k]
    }

    pub fn check_dim(&self, p: &HNumber<T>) -> Result<()> {
        same_dim(self.dim, p.dim())
    }

    /// Distributive product on raw coefficient slices; `out` is overwritten.
    pub fn mul_into(&self, p: &[T], q: &[T], out: &mut [T]) {
        let d = self.dim;
        debug_assert!(p.len() == d && q.len() == d && out.len() == d);
        out[0] = p[0] * q[0];
        for k in 1..d {
            out[k] = p[0] * q[k] + p[k] * q[0];
        }
        for (mu, &pm) in p.iter().enumerate().skip(1) {
            if pm.is_zero() {
                continue;
            }
            for (nu, &qn) in q.iter().enumerate().skip(1) {
                if qn.is_zero() {
                    continue;
                }
                let pq = pm * qn;
                for (o, &a) in out.iter_mut().zip(self.unit_product(mu, nu)) {
                    *o += pq * a;
                }
            }
        }
    }

    pub fn mul(&self, p: &HNumber<T>, q: &HNumber<T>) -> Result<HNumber<T>> {
        self.check_dim(p)?;
        self.check_dim(q)?;
        let mut out = HNumber::zero(self.dim);
        self.mul_into(p.coeffs(), q.coeffs(), out.coeffs_mut());
        Ok(out)
    }

    pub fn add(&self, p: &HNumber<T>, q: &HNumber<T>) -> Result<HNumber<T>> {
        self.check_dim(p)?;
        p.checked_add(q)
    }

    /// Symmetric bilinear form `B(p, q) = Re(tau(p) q)`, evaluated through the
    /// full product.
    pub fn bilinear(&self, inv: Involution, p: &HNumber<T>, q: &HNumber<T>) -> Result<T> {
        self.check_dim(p)?;
        let tp = inv.apply(p);
        Ok(self.mul(&tp, q)?.re())
    }

    /// Whether `i_mu i_nu = i_nu i_mu` for all unit pairs.
    pub fn is_commutative(&self) -> bool {
        (1..self.dim).all(|mu| {
            (1..self.dim).all(|nu| self.unit_product(mu, nu) == self.unit_product(nu, mu))
        })
    }
}

/// Precomputed Gram matrix of `B`, so that `B(p, q) = p^T G q`.
///
/// Entries come from [`AlgebraSpec::bilinear`] on basis pairs; evaluation
/// afterwards costs `dim^2` (or `dim` when `G` is diagonal).
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm<T> {
    dim: usize,
    gram: Vec<T>,
    diagonal: Option<Vec<T>>,
}

impl<T: Scalar> BilinearForm<T> {
    pub fn new(spec: &AlgebraSpec<T>, inv: Involution) -> Self {
        let d = spec.dim();
        let mut gram = vec![T::zero(); d * d];
        for j in 0..d {
            for k in 0..d {
                gram[j * d + k] = spec
                    .bilinear(inv, &HNumber::unit(d, j), &HNumber::unit(d, k))
                    .expect("basis elements have the algebra's dimension");
            }
        }
        let is_diag = (0..d).all(|j| (0..d).all(|k| j == k || gram[j * d + k].is_zero()));
        let diagonal = is_diag.then(|| (0..d).map(|j| gram[j * d + j]).collect());
        Self {
            dim: d,
            gram,
            diagonal,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[T] {
        &self.gram
    }

    /// Diagonal of `G` when `G` is diagonal.
    pub fn diagonal(&self) -> Option<&[T]> {
        self.diagonal.as_deref()
    }

    #[inline]
    pub fn eval(&self, p: &[T], q: &[T]) -> T {
        if let Some(diag) = &self.diagonal {
            let mut acc = T::zero();
            for ((&a, &b), &g) in p.iter().zip(q).zip(diag) {
                acc += a * g * b;
            }
            return acc;
        }
        let d = self.dim;
        let mut acc = T::zero();
        for (&pj, row) in p.iter().zip(self.gram.chunks_exact(d)) {
            if pj.is_zero() {
                continue;
            }
            let mut s = T::zero();
            for (&g, &b) in row.iter().zip(q) {
                s += g * b;
            }
            acc += pj * s;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type H = HNumber<f64>;

    fn h(c: &[f64]) -> H {
        H::from_f64s(c)
    }

    #[test]
    fn addition_is_componentwise() {
        let c = AlgebraSpec::<f64>::complex();
        assert_eq!(
            c.add(&h(&[1.0, 2.0]), &h(&[3.0, -1.0])).unwrap(),
            h(&[4.0, 1.0])
        );
        assert_eq!(c.add(&h(&[1.0, 2.0]), &H::zero(2)).unwrap(), h(&[1.0, 2.0]));
        let q = AlgebraSpec::<f64>::quaternion();
        assert_eq!(
            q.add(&h(&[1.0, 1.0, 0.0, 0.0]), &h(&[0.0, 0.0, 1.0, 1.0]))
                .unwrap(),
            h(&[1.0, 1.0, 1.0, 1.0])
        );
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let q = AlgebraSpec::<f64>::quaternion();
        let err = q.add(&h(&[1.0, 2.0]), &h(&[1.0, 2.0])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 4,
                found: 2
            }
        );
        assert!(q.mul(&h(&[1.0; 4]), &h(&[1.0; 2])).is_err());
        assert!(q
            .bilinear(Involution::Natural, &h(&[1.0; 3]), &h(&[1.0; 4]))
            .is_err());
    }

    #[test]
    fn defining_unit_products() {
        let c = AlgebraSpec::<f64>::complex();
        assert_eq!(
            c.mul(&H::unit(2, 1), &H::unit(2, 1)).unwrap(),
            h(&[-1.0, 0.0])
        );
        let u = AlgebraSpec::<f64>::hyperbolic();
        assert_eq!(
            u.mul(&H::unit(2, 1), &H::unit(2, 1)).unwrap(),
            h(&[1.0, 0.0])
        );
        let q = AlgebraSpec::<f64>::quaternion();
        assert_eq!(
            q.mul(&H::unit(4, 1), &H::unit(4, 2)).unwrap(),
            H::unit(4, 3)
        );
        assert_eq!(
            q.mul(&H::unit(4, 2), &H::unit(4, 1)).unwrap(),
            H::unit(4, 3).scale(-1.0)
        );
    }

    #[test]
    fn octonions_are_not_associative() {
        let o = AlgebraSpec::<f64>::octonion();
        let (e1, e2, e4) = (H::unit(8, 1), H::unit(8, 2), H::unit(8, 4));
        let left = o.mul(&o.mul(&e1, &e2).unwrap(), &e4).unwrap();
        let right = o.mul(&e1, &o.mul(&e2, &e4).unwrap()).unwrap();
        assert_ne!(left, right);
        // both are +-e7, with opposite signs
        assert_eq!(left, right.scale(-1.0));
    }

    #[test]
    fn involutions() {
        assert_eq!(Involution::Natural.apply(&h(&[1.0, 2.0])), h(&[1.0, -2.0]));
        assert_eq!(Involution::Trivial.apply(&h(&[1.0, 2.0])), h(&[1.0, 2.0]));
        assert_eq!(
            Involution::Natural.apply(&h(&[1.0, 1.0, 1.0, 1.0])),
            h(&[1.0, -1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn involution_is_exact_and_linear_on_integers() {
        let p = h(&[3.0, -2.0, 5.0, 7.0]);
        let q = h(&[-1.0, 4.0, 0.0, 2.0]);
        for inv in [Involution::Natural, Involution::Trivial] {
            assert_eq!(inv.apply(&inv.apply(&p)), p);
            let lhs = inv.apply(&p.scale(3.0).checked_add(&q).unwrap());
            let rhs = inv
                .apply(&p)
                .scale(3.0)
                .checked_add(&inv.apply(&q))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bilinear_forms_of_two_dimensional_systems() {
        let (p, q) = (h(&[1.5, -2.0]), h(&[0.5, 3.0]));
        let c = AlgebraSpec::<f64>::complex();
        assert_eq!(
            c.bilinear(Involution::Natural, &p, &q).unwrap(),
            1.5 * 0.5 + -2.0 * 3.0
        );
        let u = AlgebraSpec::<f64>::hyperbolic();
        assert_eq!(
            u.bilinear(Involution::Natural, &p, &q).unwrap(),
            1.5 * 0.5 - -2.0 * 3.0
        );
        for spec in [AlgebraSpec::<f64>::quaternion(), AlgebraSpec::octonion()] {
            let d = spec.dim();
            let p = H::from_f64s(&vec![0.7; d]);
            assert_eq!(
                spec.bilinear(Involution::Natural, &p, &H::zero(d)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn gram_matrix_matches_reference_bilinear() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for spec in AlgebraSpec::<f64>::builtins() {
            for inv in [Involution::Natural, Involution::Trivial] {
                let form = BilinearForm::new(&spec, inv);
                for _ in 0..50 {
                    let p = H::random(spec.dim(), &mut rng);
                    let q = H::random(spec.dim(), &mut rng);
                    let direct = spec.bilinear(inv, &p, &q).unwrap();
                    assert!((form.eval(p.coeffs(), q.coeffs()) - direct).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vector_layout() {
        let v = HVector::from_components(2, &[h(&[1.0, 0.0]), h(&[0.0, -1.0])]).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.component(1), &[0.0, -1.0]);
        assert_eq!(v.get(0), h(&[1.0, 0.0]));
        assert_eq!(v.to_string(), "[(1,0),(0,-1)]");
        assert!(HVector::<f64>::new(3, vec![0.0; 4]).is_err());
    }
}
