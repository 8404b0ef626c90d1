//! Built-in multiplication tables and the Cayley-Dickson doubling.

use super::{AlgebraSpec, HNumber, Involution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A unit product `+-i_k` written as (sign, k); k = 0 is the real unit.
type Signed = (i8, usize);

const COMPLEX: [[Signed; 1]; 1] = [[(-1, 0)]];

const HYPERBOLIC: [[Signed; 1]; 1] = [[(1, 0)]];

// i j = k, j k = i, k i = j
const QUATERNION: [[Signed; 3]; 3] = [
    [(-1, 0), (1, 3), (-1, 2)],
    [(-1, 3), (-1, 0), (1, 1)],
    [(1, 2), (-1, 1), (-1, 0)],
];

// commutative quaternions: i^2 = -1, j^2 = 1, k = ij
const TESSARINE: [[Signed; 3]; 3] = [
    [(-1, 0), (1, 3), (-1, 2)],
    [(1, 3), (1, 0), (1, 1)],
    [(-1, 2), (1, 1), (-1, 0)],
];

// The table produced by doubling the quaternions, with i_{4+mu} = i_mu i_4.
const OCTONION: [[Signed; 7]; 7] = [
    [(-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (-1, 7), (1, 6)],
    [(-1, 3), (-1, 0), (1, 1), (1, 6), (1, 7), (-1, 4), (-1, 5)],
    [(1, 2), (-1, 1), (-1, 0), (1, 7), (-1, 6), (1, 5), (-1, 4)],
    [(-1, 5), (-1, 6), (-1, 7), (-1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 4), (-1, 7), (1, 6), (-1, 1), (-1, 0), (-1, 3), (1, 2)],
    [(1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (-1, 0), (-1, 1)],
    [(-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (-1, 0)],
];

fn from_signed<T: Scalar, const N: usize>(name: &str, rows: &[[Signed; N]; N]) -> AlgebraSpec<T> {
    let dim = N + 1;
    AlgebraSpec::from_unit_products(name, dim, |mu, nu| {
        let (sign, k) = rows[mu - 1][nu - 1];
        let mut v = vec![T::zero(); dim];
        v[k] = if sign > 0 { T::one() } else { -T::one() };
        v
    })
    .expect("built-in tables are well formed")
}

impl<T: Scalar> AlgebraSpec<T> {
    /// The real numbers, `A_0`.
    pub fn reals() -> Self {
        AlgebraSpec::new("reals", 1, Vec::new())
            .expect("empty table")
            .with_cd_level(0)
    }

    pub fn complex() -> Self {
        from_signed("complex", &COMPLEX).with_cd_level(1)
    }

    pub fn hyperbolic() -> Self {
        from_signed("hyperbolic", &HYPERBOLIC)
    }

    pub fn quaternion() -> Self {
        from_signed("quaternion", &QUATERNION).with_cd_level(2)
    }

    pub fn tessarine() -> Self {
        from_signed("tessarine", &TESSARINE)
    }

    pub fn octonion() -> Self {
        from_signed("octonion", &OCTONION).with_cd_level(3)
    }

    pub fn builtins() -> Vec<Self> {
        vec![
            Self::reals(),
            Self::complex(),
            Self::hyperbolic(),
            Self::quaternion(),
            Self::tessarine(),
            Self::octonion(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "reals" | "real" => Some(Self::reals()),
            "complex" => Some(Self::complex()),
            "hyperbolic" => Some(Self::hyperbolic()),
            "quaternion" => Some(Self::quaternion()),
            "tessarine" => Some(Self::tessarine()),
            "octonion" => Some(Self::octonion()),
            _ => None,
        }
    }

    /// Cayley-Dickson doubling `A_k -> A_{k+1}`.
    ///
    /// Pairs multiply as `(x1, y1)(x2, y2) = (x1 x2 - y2 conj(y1), conj(x1) y2 + x2 y1)`.
    /// The new units are labelled `i_m = (0, 1)` and `i_{m+mu} = i_mu i_m`, which
    /// maps the pair `(x, y)` to coefficients `[x, y_0, -y_1, .., -y_{m-1}]`.
    /// With this labelling the doubled complex numbers satisfy `i j = k`.
    pub fn cayley_dickson_double(&self) -> Result<Self> {
        let level = self.cd_level.ok_or_else(|| {
            Error::InvalidParameter(format!("{} is not a Cayley-Dickson algebra", self.name))
        })?;
        let m = self.dim;
        let dim = 2 * m;

        let split = |c: &[T]| -> (HNumber<T>, HNumber<T>) {
            let x = HNumber::new(c[..m].to_vec());
            let mut y = c[m..].to_vec();
            for v in y.iter_mut().skip(1) {
                *v = -*v;
            }
            (x, HNumber::new(y))
        };
        let conj = |p: &HNumber<T>| Involution::Natural.apply(p);
        let mul = |p: &HNumber<T>, q: &HNumber<T>| self.mul(p, q).expect("same dimension");

        let name = match level + 1 {
            1 => "complex".to_string(),
            2 => "quaternion".to_string(),
            3 => "octonion".to_string(),
            4 => "sedenion".to_string(),
            k => format!("cayley-dickson-{k}"),
        };
        let doubled = AlgebraSpec::from_unit_products(name, dim, |mu, nu| {
            let (x1, y1) = split(HNumber::unit(dim, mu).coeffs());
            let (x2, y2) = split(HNumber::unit(dim, nu).coeffs());
            let a = mul(&x1, &x2).checked_sub(&mul(&y2, &conj(&y1))).unwrap();
            let b = mul(&conj(&x1), &y2).checked_add(&mul(&x2, &y1)).unwrap();
            let mut out = a.into_coeffs();
            let b = b.into_coeffs();
            out.push(b[0]);
            out.extend(b[1..].iter().map(|&v| -v));
            out
        })?;
        Ok(doubled.with_cd_level(level + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = AlgebraSpec<f64>;

    #[test]
    fn doubling_the_reals_gives_the_complex_table() {
        let c = A::reals().cayley_dickson_double().unwrap();
        assert_eq!(c.table(), A::complex().table());
        assert_eq!(c.entry(1, 1, 0), -1.0);
    }

    #[test]
    fn doubling_reproduces_hard_coded_tables() {
        let q = A::complex().cayley_dickson_double().unwrap();
        assert_eq!(q.table(), A::quaternion().table());
        let o = A::quaternion().cayley_dickson_double().unwrap();
        assert_eq!(o.table(), A::octonion().table());
        assert_eq!(o.cd_level(), Some(3));
    }

    #[test]
    fn quaternion_units_anticommute() {
        let q = A::complex().cayley_dickson_double().unwrap();
        assert_eq!(q.unit_product(1, 2), &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(q.unit_product(2, 1), &[0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn non_cd_systems_cannot_be_doubled() {
        assert!(A::hyperbolic().cayley_dickson_double().is_err());
        assert!(A::tessarine().cayley_dickson_double().is_err());
    }

    #[test]
    fn tessarines_commute() {
        assert!(A::tessarine().is_commutative());
        assert!(A::hyperbolic().is_commutative());
        assert!(!A::quaternion().is_commutative());
    }

    #[test]
    fn sedenions_double_octonions() {
        let s = A::octonion().cayley_dickson_double().unwrap();
        assert_eq!(s.dim(), 16);
        for mu in 1..16 {
            assert_eq!(s.entry(mu, mu, 0), -1.0);
        }
    }
}
