//! Randomised verification of the algebraic identities the networks rely on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraSpec, HNumber, Involution, DEFAULT_TOL};
use crate::scalar::Scalar;

/// Worst violations of the three reverse-involution identities.
#[derive(Clone, Debug)]
pub struct ReverseInvolutionReport<T> {
    pub samples: usize,
    /// max |tau(tau(p)) - p|
    pub max_involution: T,
    /// max |tau(pq) - tau(q) tau(p)|
    pub max_anti_homomorphism: T,
    /// max |tau(a p + q) - a tau(p) - tau(q)|
    pub max_linearity: T,
    /// First pair (basis pairs are tried first) breaking the anti-homomorphism
    /// identity by more than `DEFAULT_TOL`.
    pub anti_homomorphism_witness: Option<(HNumber<T>, HNumber<T>)>,
}

impl<T: Scalar> ReverseInvolutionReport<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.max_involution <= tol && self.max_anti_homomorphism <= tol && self.max_linearity <= tol
    }
}

/// Checks that `inv` is a reverse-involution of `spec` on all basis pairs and
/// `sample_count` random pairs drawn from `[-1, 1]^dim`.
pub fn check_reverse_involution<T: Scalar>(
    spec: &AlgebraSpec<T>,
    inv: Involution,
    sample_count: usize,
    seed: u64,
) -> ReverseInvolutionReport<T> {
    let d = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(HNumber<T>, HNumber<T>)> = Vec::with_capacity(d * d + sample_count);
    for a in 0..d {
        for b in 0..d {
            pairs.push((HNumber::unit(d, a), HNumber::unit(d, b)));
        }
    }
    for _ in 0..sample_count.max(1) {
        pairs.push((HNumber::random(d, &mut rng), HNumber::random(d, &mut rng)));
    }

    let tol = T::lit(DEFAULT_TOL);
    let mut report = ReverseInvolutionReport {
        samples: pairs.len(),
        max_involution: T::zero(),
        max_anti_homomorphism: T::zero(),
        max_linearity: T::zero(),
        anti_homomorphism_witness: None,
    };
    for (p, q) in pairs {
        let twice = inv.apply(&inv.apply(&p));
        report.max_involution = report.max_involution.max(twice.max_abs_diff(&p));

        let lhs = inv.apply(&spec.mul(&p, &q).expect("same dimension"));
        let rhs = spec
            .mul(&inv.apply(&q), &inv.apply(&p))
            .expect("same dimension");
        let v = lhs.max_abs_diff(&rhs);
        if v > tol && report.anti_homomorphism_witness.is_none() {
            report.anti_homomorphism_witness = Some((p.clone(), q.clone()));
        }
        report.max_anti_homomorphism = report.max_anti_homomorphism.max(v);

        let alpha = T::lit(rng.random_range(-2.0..=2.0));
        let combo = p.scale(alpha).checked_add(&q).expect("same dimension");
        let lin_rhs = inv
            .apply(&p)
            .scale(alpha)
            .checked_add(&inv.apply(&q))
            .expect("same dimension");
        report.max_linearity = report
            .max_linearity
            .max(inv.apply(&combo).max_abs_diff(&lin_rhs));
    }
    report
}

/// Real-part associativity and positive semi-definiteness on random samples.
#[derive(Clone, Debug)]
pub struct ReAhnReport<T> {
    pub samples: usize,
    /// max |Re((pq)r - p(qr))|
    pub max_violation: T,
    /// min B(p, p)
    pub min_self_form: T,
}

pub fn check_re_ahn<T: Scalar>(
    spec: &AlgebraSpec<T>,
    inv: Involution,
    sample_count: usize,
    seed: u64,
) -> ReAhnReport<T> {
    let d = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = T::zero();
    let mut min_self_form = T::infinity();
    let n = sample_count.max(1);
    for _ in 0..n {
        let p = HNumber::random(d, &mut rng);
        let q = HNumber::random(d, &mut rng);
        let r = HNumber::random(d, &mut rng);
        let mul = |a: &HNumber<T>, b: &HNumber<T>| spec.mul(a, b).expect("same dimension");
        let left = mul(&mul(&p, &q), &r);
        let right = mul(&p, &mul(&q, &r));
        max_violation = max_violation.max((left.re() - right.re()).abs());
        let self_form = spec.bilinear(inv, &p, &p).expect("same dimension");
        min_self_form = min_self_form.min(self_form);
    }
    ReAhnReport {
        samples: n,
        max_violation,
        min_self_form,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = AlgebraSpec<f64>;

    #[test]
    fn natural_conjugation_on_quaternions() {
        let r = check_reverse_involution(&A::quaternion(), Involution::Natural, 100, 1);
        assert!(r.holds(1e-12), "{r:?}");
        assert!(r.anti_homomorphism_witness.is_none());
    }

    #[test]
    fn trivial_involution_fails_on_quaternions_at_i_j() {
        let r = check_reverse_involution(&A::quaternion(), Involution::Trivial, 100, 1);
        assert!(!r.holds(1e-12));
        assert_eq!(r.max_involution, 0.0);
        assert_eq!(r.max_linearity, 0.0);
        let (p, q) = r.anti_homomorphism_witness.unwrap();
        assert_eq!(p, HNumber::unit(4, 1));
        assert_eq!(q, HNumber::unit(4, 2));
    }

    #[test]
    fn trivial_involution_on_commutative_systems() {
        for spec in [A::complex(), A::hyperbolic(), A::tessarine(), A::reals()] {
            let r = check_reverse_involution(&spec, Involution::Trivial, 100, 2);
            assert!(r.holds(1e-12), "{}: {r:?}", spec.name());
        }
    }

    #[test]
    fn natural_conjugation_is_not_reversing_on_tessarines() {
        let r = check_reverse_involution(&A::tessarine(), Involution::Natural, 10, 2);
        assert!(!r.holds(1e-12));
    }

    #[test]
    fn re_ahn_examples() {
        let o = check_re_ahn(&A::octonion(), Involution::Natural, 1000, 5);
        assert!(o.max_violation <= 1e-10, "{o:?}");
        let c = check_re_ahn(&A::complex(), Involution::Natural, 1000, 5);
        assert!(c.max_violation <= 1e-15);
        let q = check_re_ahn(&A::quaternion(), Involution::Natural, 1000, 5);
        assert!(q.min_self_form >= 0.0);
        let u = check_re_ahn(&A::hyperbolic(), Involution::Trivial, 1000, 5);
        assert!(u.max_violation <= 1e-10);
    }

    #[test]
    fn hyperbolic_natural_form_is_indefinite() {
        let u = check_re_ahn(&A::hyperbolic(), Involution::Natural, 200, 5);
        assert!(u.min_self_form < 0.0);
    }
}
