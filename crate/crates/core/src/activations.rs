//! Activation functions `phi: D -> S` and a randomised B-function checker.
//!
//! An activation is a B-function for `(H, tau)` when, for every `q` in its
//! domain, `B(phi(q), q) > B(s, q)` for every other codomain element `s`.
//! The recurrent dynamics only decrease the energy under this condition.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraSpec, BilinearForm, HNumber, Involution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which activation, plus its resolution factor where one applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActivationKind {
    /// Sign of a nonzero real.
    BipolarSign,
    /// Complex multistate signum with `k` phase sectors.
    Csgn { k: usize },
    /// `csgn(conj(p))`, for hyperbolic numbers.
    CsgnConjugated { k: usize },
    /// Quaternion `z0 + z1 j -> csgn(z0) + csgn(z1) j`.
    TwinMultistate { k: usize },
    /// `q / |q|`.
    ContinuousSigma,
    /// Componentwise sign.
    SplitSign,
}

impl ActivationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ActivationKind::BipolarSign => "bipolar_sign",
            ActivationKind::Csgn { .. } => "csgn",
            ActivationKind::CsgnConjugated { .. } => "csgn_conjugated",
            ActivationKind::TwinMultistate { .. } => "twin_multistate",
            ActivationKind::ContinuousSigma => "continuous_sigma",
            ActivationKind::SplitSign => "split_sign",
        }
    }

    pub fn resolution(&self) -> Option<usize> {
        match *self {
            ActivationKind::Csgn { k }
            | ActivationKind::CsgnConjugated { k }
            | ActivationKind::TwinMultistate { k } => Some(k),
            _ => None,
        }
    }

    /// Parses a kind name; `k` is required by the multistate kinds only.
    pub fn parse(name: &str, k: Option<usize>) -> Result<Self> {
        let need_k =
            || k.ok_or_else(|| Error::InvalidParameter(format!("activation `{name}` requires K")));
        Ok(match name {
            "bipolar_sign" | "bipolar" | "sign" => ActivationKind::BipolarSign,
            "csgn" => ActivationKind::Csgn { k: need_k()? },
            "csgn_conjugated" => ActivationKind::CsgnConjugated { k: need_k()? },
            "twin_multistate" | "tsgn" => ActivationKind::TwinMultistate { k: need_k()? },
            "continuous_sigma" | "sigma" => ActivationKind::ContinuousSigma,
            "split_sign" => ActivationKind::SplitSign,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown activation `{other}`"
                )))
            }
        })
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.resolution() {
            Some(k) => write!(f, "{}(K={k})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// The codomain `S` of an activation.
#[derive(Clone, Debug, PartialEq)]
pub enum StateAlphabet<T> {
    Finite(Vec<HNumber<T>>),
    UnitSphere { dim: usize },
}

impl<T: Scalar> StateAlphabet<T> {
    pub fn len(&self) -> Option<usize> {
        match self {
            StateAlphabet::Finite(v) => Some(v.len()),
            StateAlphabet::UnitSphere { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn elements(&self) -> Option<&[HNumber<T>]> {
        match self {
            StateAlphabet::Finite(v) => Some(v),
            StateAlphabet::UnitSphere { .. } => None,
        }
    }

    /// Exact membership for finite alphabets; unit norm within `1e-12` otherwise.
    pub fn contains(&self, p: &[T]) -> bool {
        match self {
            StateAlphabet::Finite(v) => v.iter().any(|s| s.coeffs() == p),
            StateAlphabet::UnitSphere { dim } => {
                p.len() == *dim
                    && (HNumber::new(p.to_vec()).norm() - T::one()).abs() <= T::lit(1e-12)
            }
        }
    }

    /// Position of `p` in a finite alphabet (exact comparison).
    pub fn position(&self, p: &[T]) -> Option<usize> {
        self.elements()?.iter().position(|s| s.coeffs() == p)
    }
}

/// An activation together with its precomputed codomain phasors.
///
/// Phasors `e^{2 k i pi / K}` are computed once and reused, so applying the
/// activation to a codomain element returns it bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationFn<T> {
    kind: ActivationKind,
    phasors: Vec<[T; 2]>,
}

impl<T: Scalar> ActivationFn<T> {
    pub fn new(kind: ActivationKind) -> Result<Self> {
        let phasors = match kind.resolution() {
            Some(k) if k < 2 => {
                return Err(Error::InvalidParameter(format!(
                    "resolution factor must exceed 1, got {k}"
                )))
            }
            Some(k) => phasor_table(k),
            None => Vec::new(),
        };
        Ok(Self { kind, phasors })
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    /// Codomain phasor `e^{2 k i pi / K}` as `[re, im]`.
    pub fn phasor(&self, k: usize) -> [T; 2] {
        self.phasors[k % self.phasors.len()]
    }

    pub fn phasors(&self) -> &[[T; 2]] {
        &self.phasors
    }

    pub fn accepts_dim(&self, dim: usize) -> bool {
        match self.kind {
            ActivationKind::BipolarSign => dim == 1,
            ActivationKind::Csgn { .. } | ActivationKind::CsgnConjugated { .. } => dim == 2,
            ActivationKind::TwinMultistate { .. } => dim == 4,
            ActivationKind::ContinuousSigma | ActivationKind::SplitSign => dim >= 1,
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.accepts_dim(dim) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                activation: self.kind.to_string(),
                dim,
            })
        }
    }

    pub fn in_domain(&self, h: &HNumber<T>) -> bool {
        self.accepts_dim(h.dim()) && self.eval(h.coeffs(), &mut vec![T::zero(); h.dim()])
    }

    /// `Ok(None)` marks an out-of-domain argument; the caller keeps the
    /// previous neuron state in that case.
    pub fn apply(&self, h: &HNumber<T>) -> Result<Option<HNumber<T>>> {
        self.check_dim(h.dim())?;
        let mut out = HNumber::zero(h.dim());
        Ok(self.eval(h.coeffs(), out.coeffs_mut()).then_some(out))
    }

    /// Writes `phi(h)` into `out` and returns `true`, or returns `false` when
    /// `h` lies outside the domain. The dimension is assumed to be checked.
    pub fn eval(&self, h: &[T], out: &mut [T]) -> bool {
        match self.kind {
            ActivationKind::BipolarSign => sign_into(h, out),
            ActivationKind::SplitSign => sign_into(h, out),
            ActivationKind::Csgn { k } => self.csgn_into(h[0], h[1], k, out),
            ActivationKind::CsgnConjugated { k } => self.csgn_into(h[0], -h[1], k, out),
            ActivationKind::TwinMultistate { k } => {
                let (lo, hi) = out.split_at_mut(2);
                // both halves must be in the domain before anything is written
                let (Some(a), Some(b)) = (self.sector(h[0], h[1], k), self.sector(h[2], h[3], k))
                else {
                    return false;
                };
                lo.copy_from_slice(&self.phasors[a]);
                hi.copy_from_slice(&self.phasors[b]);
                true
            }
            ActivationKind::ContinuousSigma => {
                let norm = h.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt();
                if norm.is_zero() || !norm.is_finite() {
                    return false;
                }
                for (o, &c) in out.iter_mut().zip(h) {
                    *o = c / norm;
                }
                true
            }
        }
    }

    fn csgn_into(&self, re: T, im: T, k: usize, out: &mut [T]) -> bool {
        match self.sector(re, im, k) {
            Some(s) => {
                out.copy_from_slice(&self.phasors[s]);
                true
            }
            None => false,
        }
    }

    /// Sector index of `re + im i`, or `None` for zero and boundary rays.
    fn sector(&self, re: T, im: T, k: usize) -> Option<usize> {
        if re.is_zero() && im.is_zero() {
            return None;
        }
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        let half = T::PI() / T::of_usize(k);
        let arg = im.atan2(re);
        // boundary rays sit at odd multiples of pi/K; compare bit-exactly
        let odd = T::lit(2.0) * ((arg / half - T::one()) / T::lit(2.0)).round() + T::one();
        if odd * half == arg {
            return None;
        }
        let wrapped = if arg < T::zero() { arg + T::TAU() } else { arg };
        let idx = ((wrapped + half) / (half + half))
            .floor()
            .to_usize()
            .unwrap_or(0);
        Some(idx % k)
    }

    /// Codomain of this activation on a `dim`-dimensional algebra.
    ///
    /// Ordering: bipolar `(-1, +1)`; csgn by phase index; twin and split sign
    /// lexicographically over their factors, first factor most significant.
    pub fn codomain(&self, dim: usize) -> Result<StateAlphabet<T>> {
        self.check_dim(dim)?;
        let one = T::one();
        Ok(match self.kind {
            ActivationKind::BipolarSign => {
                StateAlphabet::Finite(vec![HNumber::new(vec![-one]), HNumber::new(vec![one])])
            }
            ActivationKind::Csgn { .. } | ActivationKind::CsgnConjugated { .. } => {
                StateAlphabet::Finite(
                    self.phasors
                        .iter()
                        .map(|p| HNumber::new(p.to_vec()))
                        .collect(),
                )
            }
            ActivationKind::TwinMultistate { .. } => {
                let mut v = Vec::with_capacity(self.phasors.len().pow(2));
                for a in &self.phasors {
                    for b in &self.phasors {
                        v.push(HNumber::new(vec![a[0], a[1], b[0], b[1]]));
                    }
                }
                StateAlphabet::Finite(v)
            }
            ActivationKind::SplitSign => {
                let count = 1usize << dim;
                let v = (0..count)
                    .map(|bits| {
                        HNumber::new(
                            (0..dim)
                                .map(|j| {
                                    if bits >> (dim - 1 - j) & 1 == 1 {
                                        one
                                    } else {
                                        -one
                                    }
                                })
                                .collect(),
                        )
                    })
                    .collect();
                StateAlphabet::Finite(v)
            }
            ActivationKind::ContinuousSigma => StateAlphabet::UnitSphere { dim },
        })
    }

    /// Nearest codomain element to `v` and its Euclidean distance, or `None`
    /// when no nearest element is defined (the zero vector under sigma).
    pub fn nearest_codomain(&self, v: &[T]) -> Option<(Vec<T>, T)> {
        let snapped: Vec<T> = match self.kind {
            ActivationKind::BipolarSign | ActivationKind::SplitSign => v
                .iter()
                .map(|&c| if c < T::zero() { -T::one() } else { T::one() })
                .collect(),
            ActivationKind::Csgn { .. } | ActivationKind::CsgnConjugated { .. } => {
                self.nearest_phasor(v[0], v[1]).to_vec()
            }
            ActivationKind::TwinMultistate { .. } => {
                let mut out = self.nearest_phasor(v[0], v[1]).to_vec();
                out.extend_from_slice(&self.nearest_phasor(v[2], v[3]));
                out
            }
            ActivationKind::ContinuousSigma => {
                let mut out = vec![T::zero(); v.len()];
                if !self.eval(v, &mut out) {
                    return None;
                }
                out
            }
        };
        let dist = v
            .iter()
            .zip(&snapped)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
            .sqrt();
        Some((snapped, dist))
    }

    fn nearest_phasor(&self, re: T, im: T) -> [T; 2] {
        let k = self.phasors.len();
        let step = T::TAU() / T::of_usize(k);
        let arg = im.atan2(re);
        let idx = (arg / step)
            .round()
            .to_i64()
            .unwrap_or(0)
            .rem_euclid(k as i64) as usize;
        self.phasors[idx]
    }

    /// `m = max_{s in S} B(s, s)`, the largest self-correlation of one neuron.
    pub fn max_self_form(&self, form: &BilinearForm<T>) -> Result<T> {
        match self.codomain(form.dim())? {
            StateAlphabet::Finite(v) => Ok(v
                .iter()
                .map(|s| form.eval(s.coeffs(), s.coeffs()))
                .fold(T::neg_infinity(), T::max)),
            StateAlphabet::UnitSphere { .. } => {
                let diag = form.diagonal().ok_or_else(|| {
                    Error::InvalidParameter(
                        "unit-sphere codomain needs a diagonal bilinear form".into(),
                    )
                })?;
                Ok(diag.iter().copied().fold(T::neg_infinity(), T::max))
            }
        }
    }
}

fn sign_into<T: Scalar>(h: &[T], out: &mut [T]) -> bool {
    if h.iter().any(|c| c.is_zero() || c.is_nan()) {
        return false;
    }
    for (o, &c) in out.iter_mut().zip(h) {
        *o = if c > T::zero() { T::one() } else { -T::one() };
    }
    true
}

/// `e^{2 pi i k / K}` for `k = 0..K`; quarter turns are exact.
fn phasor_table<T: Scalar>(k: usize) -> Vec<[T; 2]> {
    (0..k)
        .map(|j| {
            if (4 * j) % k == 0 {
                let (c, s) = match 4 * j / k {
                    0 => (1.0, 0.0),
                    1 => (0.0, 1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                };
                [T::lit(c), T::lit(s)]
            } else {
                let theta = std::f64::consts::TAU * j as f64 / k as f64;
                [T::lit(theta.cos()), T::lit(theta.sin())]
            }
        })
        .collect()
}

/// One violation of the B-function inequality.
#[derive(Clone, Debug)]
pub struct BCounterexample<T> {
    pub q: HNumber<T>,
    pub image: HNumber<T>,
    pub rival: HNumber<T>,
    /// `B(phi(q), q) - B(rival, q)`, at most `1e-12`.
    pub margin: T,
}

#[derive(Clone, Debug)]
pub struct BFunctionReport<T> {
    pub samples: usize,
    /// Smallest observed margin `B(phi(q), q) - B(s, q)` over rivals `s`.
    pub worst_margin: T,
    pub counterexample: Option<BCounterexample<T>>,
}

impl<T> BFunctionReport<T> {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

const B_MARGIN: f64 = 1e-12;
const SIGMA_IDENTITY_TOL: f64 = 1e-10;
const SIGMA_RIVALS: usize = 8;

/// Samples `sample_count` in-domain arguments uniformly from `[-1, 1]^dim` and
/// checks the B-function inequality against every other codomain element.
///
/// For the unit-sphere codomain the check uses `B(sigma(q), q) = |q|` and
/// `B(s, q) < |q|` for random unit `s`.
pub fn check_b_function<T: Scalar>(
    phi: &ActivationFn<T>,
    spec: &AlgebraSpec<T>,
    inv: Involution,
    sample_count: usize,
    seed: u64,
) -> Result<BFunctionReport<T>> {
    let dim = spec.dim();
    phi.check_dim(dim)?;
    let form = BilinearForm::new(spec, inv);
    let codomain = phi.codomain(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin_tol = T::lit(B_MARGIN);

    let mut report = BFunctionReport {
        samples: 0,
        worst_margin: T::infinity(),
        counterexample: None,
    };
    let mut image = vec![T::zero(); dim];
    let mut attempts = 0usize;
    while report.samples < sample_count && attempts < 100 * sample_count.max(1) {
        attempts += 1;
        let q = HNumber::<T>::random(dim, &mut rng);
        if !phi.eval(q.coeffs(), &mut image) {
            continue;
        }
        report.samples += 1;
        let own = form.eval(&image, q.coeffs());

        let mut worst: Option<(T, HNumber<T>)> = None;
        let mut consider = |margin: T, rival: HNumber<T>| {
            if worst.as_ref().is_none_or(|(m, _)| margin < *m) {
                worst = Some((margin, rival));
            }
        };
        match &codomain {
            StateAlphabet::Finite(elements) => {
                for s in elements.iter().filter(|s| s.coeffs() != image.as_slice()) {
                    consider(own - form.eval(s.coeffs(), q.coeffs()), s.clone());
                }
            }
            StateAlphabet::UnitSphere { .. } => {
                let norm = q.norm();
                if (own - norm).abs() > T::lit(SIGMA_IDENTITY_TOL) {
                    // B(sigma(q), q) must equal |q|
                    consider(-(own - norm).abs(), HNumber::new(image.clone()));
                }
                for _ in 0..SIGMA_RIVALS {
                    let raw = HNumber::<T>::random(dim, &mut rng);
                    let mut s = vec![T::zero(); dim];
                    if !phi.eval(raw.coeffs(), &mut s) || s == image {
                        continue;
                    }
                    consider(norm - form.eval(&s, q.coeffs()), HNumber::new(s));
                }
            }
        }
        if let Some((margin, rival)) = worst {
            report.worst_margin = report.worst_margin.min(margin);
            if margin <= margin_tol && report.counterexample.is_none() {
                report.counterexample = Some(BCounterexample {
                    q: q.clone(),
                    image: HNumber::new(image.clone()),
                    rival,
                    margin,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    type H = HNumber<f64>;

    fn act(kind: ActivationKind) -> ActivationFn<f64> {
        ActivationFn::new(kind).unwrap()
    }

    fn h(c: &[f64]) -> H {
        H::from_f64s(c)
    }

    #[test]
    fn bipolar_sign_of_negative_real() {
        let a = act(ActivationKind::BipolarSign);
        assert_eq!(a.apply(&h(&[-3.2])).unwrap(), Some(h(&[-1.0])));
        assert_eq!(a.apply(&h(&[0.0])).unwrap(), None);
        assert!(!a.in_domain(&h(&[0.0])));
    }

    #[test]
    fn csgn_first_sector_and_boundary() {
        let a = act(ActivationKind::Csgn { k: 4 });
        assert_eq!(a.apply(&h(&[0.9, 0.1])).unwrap(), Some(h(&[1.0, 0.0])));
        // arg = pi/4 exactly
        assert_eq!(a.apply(&h(&[1.0, 1.0])).unwrap(), None);
        assert_eq!(a.apply(&h(&[-2.0, 2.0])).unwrap(), None);
        assert_eq!(a.apply(&h(&[1.0, -1.0])).unwrap(), None);
        assert_eq!(a.apply(&h(&[0.0, 0.0])).unwrap(), None);
        // wraparound row: just below 2 pi maps to 1
        assert_eq!(a.apply(&h(&[1.0, -0.01])).unwrap(), Some(h(&[1.0, 0.0])));
        assert_eq!(a.apply(&h(&[0.1, 0.9])).unwrap(), Some(h(&[0.0, 1.0])));
        assert_eq!(a.apply(&h(&[-0.9, 0.1])).unwrap(), Some(h(&[-1.0, 0.0])));
        assert_eq!(a.apply(&h(&[0.1, -0.9])).unwrap(), Some(h(&[0.0, -1.0])));
    }

    #[test]
    fn csgn_sector_table_matches_argument_ranges() {
        // brute force: midpoint of every sector, K = 7
        let k = 7;
        let a = act(ActivationKind::Csgn { k });
        let half = std::f64::consts::PI / k as f64;
        for j in 0..k {
            for offset in [-0.9, -0.5, 0.0, 0.5, 0.9] {
                let theta = 2.0 * j as f64 * half + offset * half;
                let out = a.apply(&h(&[theta.cos(), theta.sin()])).unwrap().unwrap();
                let expected = a.phasor(j);
                assert_eq!(out.coeffs(), &expected, "sector {j} offset {offset}");
            }
        }
    }

    #[test]
    fn sigma_normalises() {
        let a = act(ActivationKind::ContinuousSigma);
        let out = a.apply(&h(&[0.0, 3.0, 0.0, 4.0])).unwrap().unwrap();
        assert!(out.max_abs_diff(&h(&[0.0, 0.6, 0.0, 0.8])) < 1e-15);
        assert!(a.in_domain(&h(&[0.0, 0.0, 1e-30, 0.0])));
        assert!(!a.in_domain(&H::zero(4)));
    }

    #[test]
    fn split_sign_on_octonion() {
        let a = act(ActivationKind::SplitSign);
        let out = a
            .apply(&h(&[2.0, -1.0, 3.0, -4.0, 1.0, 1.0, -2.0, 5.0]))
            .unwrap();
        assert_eq!(out, Some(h(&[1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0])));
        let mut zero_coeff = vec![1.0; 8];
        zero_coeff[1] = 0.0;
        assert!(!a.in_domain(&h(&zero_coeff)));
    }

    #[test]
    fn twin_multistate_acts_on_complex_halves() {
        let a = act(ActivationKind::TwinMultistate { k: 4 });
        let out = a.apply(&h(&[0.9, 0.1, 0.1, 0.9])).unwrap().unwrap();
        // 1 + i j = 1 + k
        assert_eq!(out, h(&[1.0, 0.0, 0.0, 1.0]));
        // second half on a boundary ray
        assert_eq!(a.apply(&h(&[0.9, 0.1, 1.0, 1.0])).unwrap(), None);
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = act(ActivationKind::TwinMultistate { k: 4 });
        assert!(matches!(
            a.apply(&h(&[1.0, 0.0])),
            Err(Error::AlgebraMismatch { .. })
        ));
        assert!(act(ActivationKind::BipolarSign)
            .apply(&h(&[1.0, 1.0]))
            .is_err());
        assert!(ActivationFn::<f64>::new(ActivationKind::Csgn { k: 1 }).is_err());
    }

    #[test]
    fn codomains() {
        let c = act(ActivationKind::Csgn { k: 4 }).codomain(2).unwrap();
        let elems = c.elements().unwrap();
        assert_eq!(
            elems,
            &[
                h(&[1.0, 0.0]),
                h(&[0.0, 1.0]),
                h(&[-1.0, 0.0]),
                h(&[0.0, -1.0])
            ]
        );
        let t = act(ActivationKind::TwinMultistate { k: 4 })
            .codomain(4)
            .unwrap();
        assert_eq!(t.len(), Some(16));
        let s = act(ActivationKind::SplitSign).codomain(8).unwrap();
        assert_eq!(s.len(), Some(256));
        assert_eq!(s.elements().unwrap()[0], h(&[-1.0; 8]));
        let b = act(ActivationKind::BipolarSign).codomain(1).unwrap();
        assert_eq!(b.elements().unwrap(), &[h(&[-1.0]), h(&[1.0])]);
        let sphere = act(ActivationKind::ContinuousSigma).codomain(8).unwrap();
        assert_eq!(sphere.len(), None);
        assert!(sphere.contains(&[0.0, 0.6, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn csgn_codomain_is_the_phasor_set() {
        let k = 256;
        let a = act(ActivationKind::Csgn { k });
        for (j, p) in a.phasors().iter().enumerate() {
            let theta = std::f64::consts::TAU * j as f64 / k as f64;
            assert!((p[0] - theta.cos()).abs() < 1e-15 && (p[1] - theta.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn nearest_codomain_snaps() {
        let a = act(ActivationKind::Csgn { k: 256 });
        let p = a.phasor(37);
        let (s, d) = a.nearest_codomain(&[p[0] + 1e-10, p[1]]).unwrap();
        assert_eq!(s, p.to_vec());
        assert!(d < 1e-9);
        let (_, d0) = a.nearest_codomain(&[0.0, 0.0]).unwrap();
        assert!((d0 - 1.0).abs() < 1e-12);
        assert!(act(ActivationKind::ContinuousSigma)
            .nearest_codomain(&[0.0; 4])
            .is_none());
    }

    #[test]
    fn max_self_form_values() {
        let cases: Vec<(ActivationKind, AlgebraSpec<f64>, f64)> = vec![
            (ActivationKind::BipolarSign, AlgebraSpec::reals(), 1.0),
            (ActivationKind::Csgn { k: 256 }, AlgebraSpec::complex(), 1.0),
            (
                ActivationKind::Csgn { k: 256 },
                AlgebraSpec::hyperbolic(),
                1.0,
            ),
            (
                ActivationKind::TwinMultistate { k: 16 },
                AlgebraSpec::quaternion(),
                2.0,
            ),
            (ActivationKind::SplitSign, AlgebraSpec::octonion(), 8.0),
            (
                ActivationKind::ContinuousSigma,
                AlgebraSpec::octonion(),
                1.0,
            ),
        ];
        for (kind, spec, m) in cases {
            let form = BilinearForm::new(&spec, Involution::Natural);
            let got = act(kind).max_self_form(&form).unwrap();
            assert!((got - m).abs() < 1e-12, "{kind} on {}", spec.name());
        }
    }

    #[test]
    fn b_function_checks() {
        let pass: Vec<(ActivationKind, AlgebraSpec<f64>, Involution)> = vec![
            (
                ActivationKind::Csgn { k: 8 },
                AlgebraSpec::complex(),
                Involution::Natural,
            ),
            (
                ActivationKind::TwinMultistate { k: 4 },
                AlgebraSpec::quaternion(),
                Involution::Natural,
            ),
            (
                ActivationKind::SplitSign,
                AlgebraSpec::octonion(),
                Involution::Natural,
            ),
            (
                ActivationKind::BipolarSign,
                AlgebraSpec::reals(),
                Involution::Trivial,
            ),
        ];
        for (kind, spec, inv) in pass {
            let r = check_b_function(&act(kind), &spec, inv, 1000, 11).unwrap();
            assert!(
                r.passed(),
                "{kind} on {}: {:?}",
                spec.name(),
                r.counterexample
            );
            assert_eq!(r.samples, 1000);
            assert!(r.worst_margin > 0.0);
        }
    }

    #[test]
    fn csgn_on_hyperbolic_numbers_has_a_counterexample() {
        let r = check_b_function(
            &act(ActivationKind::Csgn { k: 4 }),
            &AlgebraSpec::hyperbolic(),
            Involution::Natural,
            1000,
            11,
        )
        .unwrap();
        let cx = r
            .counterexample
            .expect("csgn is not a B-function on hyperbolic numbers");
        let form = BilinearForm::new(&AlgebraSpec::hyperbolic(), Involution::Natural);
        let own = form.eval(cx.image.coeffs(), cx.q.coeffs());
        let other = form.eval(cx.rival.coeffs(), cx.q.coeffs());
        assert!(other >= own);
    }

    #[test]
    fn sigma_fails_where_the_form_is_indefinite() {
        let r = check_b_function(
            &act(ActivationKind::ContinuousSigma),
            &AlgebraSpec::hyperbolic(),
            Involution::Natural,
            200,
            2,
        )
        .unwrap();
        assert!(!r.passed());
    }
}
