//! Bundled memory sets and experiment parameters.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::activations::{ActivationFn, ActivationKind};
use crate::algebra::{AlgebraSpec, HVector, Involution};
use crate::error::{Error, Result};
use crate::rcnn::{random_state, ExcitationFn, MemorySet, Network, NetworkConfig};
use crate::scalar::Scalar;

/// The small worked examples with exhaustively enumerable state spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Example {
    /// Bipolar, three memories of length 4.
    Bipolar,
    /// Complex multistate, K = 4, three memories of length 2.
    ComplexMultistate,
    /// Hyperbolic numbers with csgn; not a B-function, so cycles appear.
    HyperbolicCsgn,
    /// Hyperbolic numbers with csgn of the conjugate.
    HyperbolicConjugated,
    /// Quaternion twin-multistate, K = 4, a single neuron.
    QuaternionTwin,
}

/// Which of the two stated `alpha` values to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    /// The value given alongside the memory set.
    Text,
    /// The value given with the state-graph figure.
    Caption,
}

impl Reading {
    pub fn name(self) -> &'static str {
        match self {
            Reading::Text => "text",
            Reading::Caption => "caption",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(Reading::Text),
            "caption" => Some(Reading::Caption),
            _ => None,
        }
    }
}

impl Example {
    pub const ALL: [Example; 5] = [
        Example::Bipolar,
        Example::ComplexMultistate,
        Example::HyperbolicCsgn,
        Example::HyperbolicConjugated,
        Example::QuaternionTwin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Bipolar => "example1",
            Example::ComplexMultistate => "example2",
            Example::HyperbolicCsgn => "example3",
            Example::HyperbolicConjugated => "example4",
            Example::QuaternionTwin => "example5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }

    pub fn algebra<T: Scalar>(self) -> AlgebraSpec<T> {
        match self {
            Example::Bipolar => AlgebraSpec::reals(),
            Example::ComplexMultistate => AlgebraSpec::complex(),
            Example::HyperbolicCsgn | Example::HyperbolicConjugated => AlgebraSpec::hyperbolic(),
            Example::QuaternionTwin => AlgebraSpec::quaternion(),
        }
    }

    pub fn involution(self) -> Involution {
        match self {
            Example::Bipolar => Involution::Trivial,
            _ => Involution::Natural,
        }
    }

    pub fn activation_kind(self) -> ActivationKind {
        match self {
            Example::Bipolar => ActivationKind::BipolarSign,
            Example::ComplexMultistate | Example::HyperbolicCsgn => ActivationKind::Csgn { k: 4 },
            Example::HyperbolicConjugated => ActivationKind::CsgnConjugated { k: 4 },
            Example::QuaternionTwin => ActivationKind::TwinMultistate { k: 4 },
        }
    }

    /// `(alpha, beta)` for a reading. Examples 4 and 5 state a single value.
    pub fn parameters(self, reading: Reading) -> (f64, f64) {
        let alpha = match (self, reading) {
            (Example::Bipolar, Reading::Text) => 0.25,
            (Example::ComplexMultistate | Example::HyperbolicCsgn, Reading::Text) => 0.5,
            (Example::QuaternionTwin, _) => 0.5,
            _ => 1.0,
        };
        (alpha, 1.0)
    }

    /// Memory coefficients, one row per memory.
    fn memory_rows(self) -> (usize, Vec<Vec<f64>>) {
        // complex numbers as (re, im) pairs
        let (one, i, mi) = ([1.0, 0.0], [0.0, 1.0], [0.0, -1.0]);
        let pairs = |a: [f64; 2], b: [f64; 2]| vec![a[0], a[1], b[0], b[1]];
        match self {
            Example::Bipolar => (
                1,
                vec![
                    vec![-1.0, -1.0, 1.0, 1.0],
                    vec![-1.0, 1.0, -1.0, -1.0],
                    vec![1.0, 1.0, -1.0, -1.0],
                ],
            ),
            Example::ComplexMultistate
            | Example::HyperbolicCsgn
            | Example::HyperbolicConjugated => {
                (2, vec![pairs(one, mi), pairs(i, one), pairs(mi, one)])
            }
            // 1 - k, i + j, -i + j
            Example::QuaternionTwin => (
                4,
                vec![
                    vec![1.0, 0.0, 0.0, -1.0],
                    vec![0.0, 1.0, 1.0, 0.0],
                    vec![0.0, -1.0, 1.0, 0.0],
                ],
            ),
        }
    }

    pub fn activation<T: Scalar>(self) -> ActivationFn<T> {
        ActivationFn::new(self.activation_kind()).expect("K = 4")
    }

    pub fn memories<T: Scalar>(self) -> MemorySet<T> {
        let (dim, rows) = self.memory_rows();
        let u = rows
            .into_iter()
            .map(|r| HVector::new(dim, r.into_iter().map(T::lit).collect()).expect("well formed"))
            .collect();
        MemorySet::new(u, &self.activation()).expect("memories lie in the codomain")
    }

    pub fn config<T: Scalar>(self, reading: Reading) -> NetworkConfig<T> {
        let (alpha, beta) = self.parameters(reading);
        NetworkConfig::new(
            self.algebra(),
            self.involution(),
            self.activation(),
            ExcitationFn::exponential(T::lit(alpha), T::lit(beta)).expect("positive parameters"),
        )
    }

    pub fn network<T: Scalar>(self, reading: Reading) -> Network<T> {
        Network::new(self.config(reading), self.memories()).expect("consistent preset")
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Random-memory energy experiments with `alpha = a / (N m)`, `beta = e^{-a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergyPreset {
    Bipolar,
    Complex,
    Hyperbolic,
    Quaternion,
    OctonionSplit,
    OctonionSigma,
}

impl EnergyPreset {
    pub const ALL: [EnergyPreset; 6] = [
        EnergyPreset::Bipolar,
        EnergyPreset::Complex,
        EnergyPreset::Hyperbolic,
        EnergyPreset::Quaternion,
        EnergyPreset::OctonionSplit,
        EnergyPreset::OctonionSigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnergyPreset::Bipolar => "bipolar",
            EnergyPreset::Complex => "complex",
            EnergyPreset::Hyperbolic => "hyperbolic",
            EnergyPreset::Quaternion => "quaternion",
            EnergyPreset::OctonionSplit => "octonion_split",
            EnergyPreset::OctonionSigma => "octonion_sigma",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn algebra<T: Scalar>(self) -> AlgebraSpec<T> {
        match self {
            EnergyPreset::Bipolar => AlgebraSpec::reals(),
            EnergyPreset::Complex => AlgebraSpec::complex(),
            EnergyPreset::Hyperbolic => AlgebraSpec::hyperbolic(),
            EnergyPreset::Quaternion => AlgebraSpec::quaternion(),
            EnergyPreset::OctonionSplit | EnergyPreset::OctonionSigma => AlgebraSpec::octonion(),
        }
    }

    pub fn involution(self) -> Involution {
        match self {
            EnergyPreset::Bipolar => Involution::Trivial,
            _ => Involution::Natural,
        }
    }

    pub fn activation_kind(self) -> ActivationKind {
        match self {
            EnergyPreset::Bipolar => ActivationKind::BipolarSign,
            EnergyPreset::Complex | EnergyPreset::Hyperbolic => ActivationKind::Csgn { k: 256 },
            EnergyPreset::Quaternion => ActivationKind::TwinMultistate { k: 16 },
            EnergyPreset::OctonionSplit => ActivationKind::SplitSign,
            EnergyPreset::OctonionSigma => ActivationKind::ContinuousSigma,
        }
    }

    /// Whether the activation is a B-function for this algebra, so that runs
    /// are expected to converge.
    pub fn expected_convergent(self) -> bool {
        self != EnergyPreset::Hyperbolic
    }

    /// Coefficient changes at or below this count as no change.
    pub fn change_tol(self) -> f64 {
        match self {
            EnergyPreset::OctonionSigma => 1e-12,
            _ => 0.0,
        }
    }

    /// Builds the configuration for memories of length `n`; `a` is the
    /// excitation multiplier (10 for the energy experiments).
    pub fn config<T: Scalar>(self, n: usize, a: f64) -> Result<NetworkConfig<T>> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        let algebra = self.algebra::<T>();
        let activation = ActivationFn::new(self.activation_kind())?;
        let form = crate::algebra::BilinearForm::new(&algebra, self.involution());
        let m = activation.max_self_form(&form)?;
        let excitation = ExcitationFn::exponential_scaled(T::lit(a), T::of_usize(n) * m)?;
        Ok(
            NetworkConfig::new(algebra, self.involution(), activation, excitation)
                .with_change_tol(T::lit(self.change_tol())),
        )
    }

    /// Random memories and initial state from one seed.
    pub fn instance<T: Scalar>(
        self,
        n: usize,
        p: usize,
        a: f64,
        seed: u64,
    ) -> Result<(NetworkConfig<T>, MemorySet<T>, HVector<T>)> {
        let cfg = self.config::<T>(n, a)?;
        let (memories, x0) = random_instance(&cfg, n, p, seed)?;
        Ok((cfg, memories, x0))
    }
}

/// `p` random memories and a random initial state of length `n` drawn from
/// the codomain of `cfg`'s activation, all from one seed.
pub fn random_instance<T: Scalar>(
    cfg: &NetworkConfig<T>,
    n: usize,
    p: usize,
    seed: u64,
) -> Result<(MemorySet<T>, HVector<T>)> {
    let dim = cfg.algebra.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let memories = MemorySet::random(p, n, dim, &cfg.activation, &mut rng)?;
    let x0 = random_state(n, dim, &cfg.activation, &mut rng)?;
    Ok((memories, x0))
}

impl fmt::Display for EnergyPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
