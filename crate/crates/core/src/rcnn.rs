//! Hypercomplex-valued recurrent correlation networks.
//!
//! A state `x` in `S^N` is updated from the potentials
//! `h_i = sum_xi w_xi u_i^xi`, with weights `w_xi = f(c_xi)` computed from the
//! correlations `c_xi = sum_i B(u_i^xi, x_i)`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::hash::{Hash, Hasher};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::activations::{ActivationFn, StateAlphabet};
use crate::algebra::{AlgebraSpec, BilinearForm, HVector, Involution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distance within which inputs are snapped onto the codomain.
pub const SNAP_TOL: f64 = 1e-9;
/// `c / scale` at or above `1 - EXACT_MATCH_TOL` counts as an exact match for
/// the potential excitation.
pub const EXACT_MATCH_TOL: f64 = 1e-12;
/// Visited-state cap for cycle detection.
pub const CYCLE_CAP: usize = 1 << 20;

/// The fundamental memories `u^1, .., u^P`.
#[derive(Clone, Debug, PartialEq)]
pub struct MemorySet<T> {
    dim: usize,
    len: usize,
    memories: Vec<HVector<T>>,
}

impl<T: Scalar> MemorySet<T> {
    /// Builds a memory set, snapping every component onto the codomain of
    /// `activation` (components further than `1e-9` away are rejected).
    pub fn new(memories: Vec<HVector<T>>, activation: &ActivationFn<T>) -> Result<Self> {
        let first = memories.first().ok_or(Error::EmptyMemorySet)?;
        let (dim, len) = (first.dim(), first.len());
        activation.check_dim(dim)?;
        let mut snapped = Vec::with_capacity(memories.len());
        for u in &memories {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                });
            }
            if u.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: u.len(),
                });
            }
            snapped.push(snap_to_codomain(activation, u)?);
        }
        Ok(Self {
            dim,
            len,
            memories: snapped,
        })
    }

    /// `p` memories of length `n` drawn uniformly from the codomain (uniformly
    /// on the unit sphere for the continuous activation).
    pub fn random<R: Rng + ?Sized>(
        p: usize,
        n: usize,
        dim: usize,
        activation: &ActivationFn<T>,
        rng: &mut R,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::EmptyMemorySet);
        }
        let memories = (0..p)
            .map(|_| random_state(n, dim, activation, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim,
            len: n,
            memories,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Memory length `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of memories `P`.
    pub fn count(&self) -> usize {
        self.memories.len()
    }

    pub fn memories(&self) -> &[HVector<T>] {
        &self.memories
    }

    pub fn get(&self, xi: usize) -> &HVector<T> {
        &self.memories[xi]
    }

    pub fn position(&self, x: &HVector<T>) -> Option<usize> {
        self.memories.iter().position(|u| u == x)
    }
}

/// A state of length `n` drawn uniformly from the codomain of `activation`.
pub fn random_state<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    dim: usize,
    activation: &ActivationFn<T>,
    rng: &mut R,
) -> Result<HVector<T>> {
    let mut data = Vec::with_capacity(n * dim);
    match activation.codomain(dim)? {
        StateAlphabet::Finite(elements) => {
            for _ in 0..n {
                let s = elements.choose(rng).expect("codomain is nonempty");
                data.extend_from_slice(s.coeffs());
            }
        }
        StateAlphabet::UnitSphere { .. } => {
            for _ in 0..n {
                let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                data.extend(v.iter().map(|a| T::lit(a / norm)));
            }
        }
    }
    HVector::new(dim, data)
}

/// Snaps each component of `x` onto the nearest codomain element.
pub fn snap_to_codomain<T: Scalar>(
    activation: &ActivationFn<T>,
    x: &HVector<T>,
) -> Result<HVector<T>> {
    activation.check_dim(x.dim())?;
    let mut out = x.clone();
    for i in 0..x.len() {
        let c = x.component(i);
        match activation.nearest_codomain(c) {
            Some((s, d)) if d <= T::lit(SNAP_TOL) => out.component_mut(i).copy_from_slice(&s),
            _ => {
                return Err(Error::NotInCodomain {
                    neuron: i,
                    value: x.get(i).to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// The excitation function `f` applied to the correlations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExcitationKind<T> {
    Identity,
    /// `(1 + c / scale)^order`
    HighOrder {
        order: T,
    },
    /// `1 / (1 - c / scale)^exponent`
    Potential {
        exponent: u32,
    },
    /// `beta exp(alpha c)`
    Exponential {
        alpha: T,
        beta: T,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitationFn<T> {
    pub kind: ExcitationKind<T>,
    /// Subtract the largest correlation before exponentiating.
    pub normalize: bool,
}

/// Result of applying an excitation to a correlation vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Excitation<T> {
    Weights(Vec<T>),
    /// The state coincides with memory `xi`; the potential kind is singular.
    ExactMatch(usize),
}

impl<T: Scalar> ExcitationFn<T> {
    pub fn new(kind: ExcitationKind<T>, normalize: bool) -> Result<Self> {
        match kind {
            ExcitationKind::Identity => {}
            ExcitationKind::HighOrder { order } => {
                if order.is_nan() || order <= T::one() {
                    return Err(Error::InvalidParameter(format!(
                        "high-order excitation needs order > 1, got {order}"
                    )));
                }
            }
            ExcitationKind::Potential { exponent } => {
                if exponent < 1 {
                    return Err(Error::InvalidParameter(
                        "potential excitation needs L >= 1".into(),
                    ));
                }
            }
            ExcitationKind::Exponential { alpha, beta } => {
                if !(alpha > T::zero() && beta > T::zero())
                    || !alpha.is_finite()
                    || !beta.is_finite()
                {
                    return Err(Error::InvalidParameter(format!(
                        "exponential excitation needs alpha, beta > 0, got {alpha}, {beta}"
                    )));
                }
            }
        }
        Ok(Self { kind, normalize })
    }

    pub fn identity() -> Self {
        Self {
            kind: ExcitationKind::Identity,
            normalize: false,
        }
    }

    pub fn exponential(alpha: T, beta: T) -> Result<Self> {
        Self::new(ExcitationKind::Exponential { alpha, beta }, false)
    }

    /// `alpha = a / scale`, `beta = e^{-a}` with `scale = N m`.
    pub fn exponential_scaled(a: T, scale: T) -> Result<Self> {
        Self::exponential(a / scale, (-a).exp())
    }

    pub fn with_normalization(mut self, on: bool) -> Self {
        self.normalize = on;
        self
    }

    /// Exponential kind without normalization: weights can be updated
    /// multiplicatively after a single neuron changes.
    fn multiplicative_alpha(&self) -> Option<T> {
        match self.kind {
            ExcitationKind::Exponential { alpha, .. } if !self.normalize => Some(alpha),
            _ => None,
        }
    }

    /// Weights `w_xi = f(c_xi)`. `scale` is `N m`.
    pub fn excite(&self, c: &[T], scale: T) -> Result<Excitation<T>> {
        let mut w = Vec::with_capacity(c.len());
        match self.kind {
            ExcitationKind::Identity => w.extend_from_slice(c),
            ExcitationKind::HighOrder { order } => w.extend(
                c.iter()
                    .map(|&x| (T::one() + x / scale).max(T::zero()).powf(order)),
            ),
            ExcitationKind::Potential { exponent } => {
                let threshold = T::one() - T::lit(EXACT_MATCH_TOL);
                if let Some(xi) = argmax(c) {
                    if c[xi] / scale >= threshold {
                        return Ok(Excitation::ExactMatch(xi));
                    }
                }
                w.extend(
                    c.iter()
                        .map(|&x| (T::one() - x / scale).powi(exponent as i32).recip()),
                )
            }
            ExcitationKind::Exponential { alpha, beta } => {
                let shift = match (self.normalize, argmax(c)) {
                    (true, Some(xi)) => c[xi],
                    _ => T::zero(),
                };
                w.extend(c.iter().map(|&x| beta * (alpha * (x - shift)).exp()))
            }
        }
        if let Some(index) = w.iter().position(|v| !v.is_finite()) {
            return Err(Error::Overflow { index });
        }
        Ok(Excitation::Weights(w))
    }

    /// Primitive `F` of `f`, so that `E(x) = -sum_xi F(c_xi)`.
    pub fn primitive(&self, x: T, scale: T) -> T {
        match self.kind {
            ExcitationKind::Identity => x * x / T::lit(2.0),
            ExcitationKind::HighOrder { order } => {
                let q1 = order + T::one();
                scale * (T::one() + x / scale).max(T::zero()).powf(q1) / q1
            }
            ExcitationKind::Potential { exponent: 1 } => {
                scale * (T::one() / (T::one() - x / scale)).ln()
            }
            ExcitationKind::Potential { exponent } => {
                let l = T::of_usize(exponent as usize);
                scale * (T::one() - x / scale).powi(1 - exponent as i32) / (l - T::one())
            }
            ExcitationKind::Exponential { alpha, beta } => beta / alpha * (alpha * x).exp(),
        }
    }
}

impl<T: Scalar> fmt::Display for ExcitationFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ExcitationKind::Identity => write!(f, "identity")?,
            ExcitationKind::HighOrder { order } => write!(f, "high_order(q={order})")?,
            ExcitationKind::Potential { exponent } => write!(f, "potential(L={exponent})")?,
            ExcitationKind::Exponential { alpha, beta } => {
                write!(f, "exponential(alpha={alpha}, beta={beta})")?
            }
        }
        if self.normalize {
            write!(f, " normalized")?;
        }
        Ok(())
    }
}

fn argmax<T: Scalar>(c: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in c.iter().enumerate() {
        if best.is_none_or(|b| v > c[b]) {
            best = Some(i);
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateMode {
    Synchronous,
    Asynchronous,
}

impl UpdateMode {
    pub fn label(self) -> &'static str {
        match self {
            UpdateMode::Synchronous => "sync",
            UpdateMode::Asynchronous => "async",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sync" | "synchronous" => Some(UpdateMode::Synchronous),
            "async" | "asynchronous" => Some(UpdateMode::Asynchronous),
            _ => None,
        }
    }
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Neuron visiting order for asynchronous sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AsyncOrder {
    #[default]
    Cyclic,
    Random {
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct NetworkConfig<T> {
    pub algebra: AlgebraSpec<T>,
    pub involution: Involution,
    pub activation: ActivationFn<T>,
    pub excitation: ExcitationFn<T>,
    pub update_mode: UpdateMode,
    pub async_order: AsyncOrder,
    pub max_sweeps: usize,
    /// Largest coefficient change still treated as "no change". Zero means
    /// exact comparison, which is right for finite codomains.
    pub change_tol: T,
    /// Keep every visited state in [`RunResult::states`].
    pub record_states: bool,
}

impl<T: Scalar> NetworkConfig<T> {
    pub fn new(
        algebra: AlgebraSpec<T>,
        involution: Involution,
        activation: ActivationFn<T>,
        excitation: ExcitationFn<T>,
    ) -> Self {
        Self {
            algebra,
            involution,
            activation,
            excitation,
            update_mode: UpdateMode::Synchronous,
            async_order: AsyncOrder::Cyclic,
            max_sweeps: 1000,
            change_tol: T::zero(),
            record_states: false,
        }
    }

    pub fn with_mode(mut self, mode: UpdateMode) -> Self {
        self.update_mode = mode;
        self
    }

    pub fn with_async_order(mut self, order: AsyncOrder) -> Self {
        self.async_order = order;
        self
    }

    pub fn with_max_sweeps(mut self, max_sweeps: usize) -> Self {
        self.max_sweeps = max_sweeps;
        self
    }

    pub fn with_change_tol(mut self, tol: T) -> Self {
        self.change_tol = tol;
        self
    }

    pub fn with_excitation(mut self, excitation: ExcitationFn<T>) -> Self {
        self.excitation = excitation;
        self
    }

    pub fn with_recorded_states(mut self, on: bool) -> Self {
        self.record_states = on;
        self
    }

    /// `key = value` lines describing the configuration.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra = {}", self.algebra.name());
        let _ = writeln!(s, "involution = {}", self.involution);
        let _ = writeln!(s, "activation = {}", self.activation.kind());
        let _ = writeln!(s, "excitation = {}", self.excitation);
        let _ = writeln!(s, "update_mode = {}", self.update_mode);
        match self.async_order {
            AsyncOrder::Cyclic => {
                let _ = writeln!(s, "async_order = cyclic");
            }
            AsyncOrder::Random { seed } => {
                let _ = writeln!(s, "async_order = random({seed})");
            }
        }
        let _ = writeln!(s, "max_sweeps = {}", self.max_sweeps);
        let _ = writeln!(s, "change_tol = {}", self.change_tol);
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    /// Period counted in sweeps.
    Cycled {
        period: usize,
    },
    MaxSweepsReached,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Converged => f.write_str("converged"),
            RunStatus::Cycled { period } => write!(f, "cycled(period={period})"),
            RunStatus::MaxSweepsReached => f.write_str("max_sweeps_reached"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunResult<T> {
    pub final_state: HVector<T>,
    /// `(time, energy)` at time 0 and after every sweep that changed the state.
    pub energy_trace: Vec<(f64, T)>,
    /// Number of sweeps that changed the state.
    pub sweeps_used: usize,
    /// Time of the last state change: whole sweeps for synchronous runs,
    /// `1/N` per neuron update for asynchronous runs.
    pub equilibrium_time: f64,
    pub status: RunStatus,
    /// Initial state and the state after every changing sweep, when recorded.
    pub states: Vec<HVector<T>>,
}

impl<T: Scalar> RunResult<T> {
    /// Every recorded step lowers the energy, allowing `tol` of rounding.
    pub fn energy_decreasing(&self, tol: T) -> bool {
        self.energy_trace.windows(2).all(|w| w[1].1 - w[0].1 < tol)
    }

    /// Smallest per-sweep energy decrease.
    pub fn min_energy_drop(&self) -> Option<T> {
        self.energy_trace
            .windows(2)
            .map(|w| w[0].1 - w[1].1)
            .reduce(T::min)
    }

    pub fn summary(&self) -> String {
        format!(
            "status = {}\nsweeps_used = {}\nequilibrium_time = {}\n",
            self.status, self.sweeps_used, self.equilibrium_time
        )
    }
}

/// CSV with columns `time,energy,mode`.
pub fn energy_csv<T: Scalar>(runs: &[(UpdateMode, &RunResult<T>)]) -> String {
    let mut out = String::from("time,energy,mode\n");
    for (mode, run) in runs {
        for (t, e) in &run.energy_trace {
            let _ = writeln!(out, "{t},{e},{mode}");
        }
    }
    out
}

/// Correlations and weights maintained across asynchronous updates.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightCache<T> {
    correlations: Vec<T>,
    excitation: Excitation<T>,
}

impl<T: Scalar> WeightCache<T> {
    pub fn correlations(&self) -> &[T] {
        &self.correlations
    }

    pub fn excitation(&self) -> &Excitation<T> {
        &self.excitation
    }

    /// Current weights, or `None` after an exact match.
    pub fn weights(&self) -> Option<&[T]> {
        match &self.excitation {
            Excitation::Weights(w) => Some(w),
            Excitation::ExactMatch(_) => None,
        }
    }
}

/// A configured network over a fixed memory set.
#[derive(Clone, Debug)]
pub struct Network<T> {
    cfg: NetworkConfig<T>,
    memories: MemorySet<T>,
    form: BilinearForm<T>,
    scale: T,
}

impl<T: Scalar> Network<T> {
    pub fn new(cfg: NetworkConfig<T>, memories: MemorySet<T>) -> Result<Self> {
        let dim = cfg.algebra.dim();
        cfg.activation.check_dim(dim)?;
        if memories.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: memories.dim(),
            });
        }
        if cfg.max_sweeps == 0 {
            return Err(Error::InvalidParameter(
                "max_sweeps must be positive".into(),
            ));
        }
        // revalidate against this activation
        let memories = MemorySet::new(memories.memories, &cfg.activation)?;
        let form = BilinearForm::new(&cfg.algebra, cfg.involution);
        let m = cfg.activation.max_self_form(&form)?;
        let scale = T::of_usize(memories.len()) * m;
        if scale.is_nan() || scale <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "correlation scale N m must be positive, got {scale}"
            )));
        }
        Ok(Self {
            cfg,
            memories,
            form,
            scale,
        })
    }

    pub fn config(&self) -> &NetworkConfig<T> {
        &self.cfg
    }

    pub fn memories(&self) -> &MemorySet<T> {
        &self.memories
    }

    pub fn form(&self) -> &BilinearForm<T> {
        &self.form
    }

    /// `N m`.
    pub fn scale(&self) -> T {
        self.scale
    }

    fn check_state(&self, x: &HVector<T>) -> Result<()> {
        if x.dim() != self.memories.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.memories.dim(),
                found: x.dim(),
            });
        }
        if x.len() != self.memories.len() {
            return Err(Error::LengthMismatch {
                expected: self.memories.len(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `c_xi = sum_i B(u_i^xi, x_i)`.
    pub fn correlations(&self, x: &HVector<T>) -> Result<Vec<T>> {
        self.check_state(x)?;
        Ok(self
            .memories
            .memories()
            .iter()
            .map(|u| {
                u.components()
                    .zip(x.components())
                    .fold(T::zero(), |acc, (a, b)| acc + self.form.eval(a, b))
            })
            .collect())
    }

    pub fn excite(&self, c: &[T]) -> Result<Excitation<T>> {
        self.cfg.excitation.excite(c, self.scale)
    }

    /// `h_i = sum_xi w_xi u_i^xi`.
    pub fn potentials(&self, w: &[T]) -> Result<HVector<T>> {
        if w.len() != self.memories.count() {
            return Err(Error::LengthMismatch {
                expected: self.memories.count(),
                found: w.len(),
            });
        }
        let mut h = HVector::zeros(self.memories.dim(), self.memories.len());
        for (&wx, u) in w.iter().zip(self.memories.memories()) {
            for (acc, &v) in h.as_mut_slice().iter_mut().zip(u.as_slice()) {
                *acc += wx * v;
            }
        }
        Ok(h)
    }

    fn potential_at(&self, w: &[T], i: usize, out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for (&wx, u) in w.iter().zip(self.memories.memories()) {
            for (o, &v) in out.iter_mut().zip(u.component(i)) {
                *o += wx * v;
            }
        }
    }

    fn differs(&self, a: &[T], b: &[T]) -> bool {
        if self.cfg.change_tol.is_zero() {
            a != b
        } else {
            a.iter()
                .zip(b)
                .any(|(&p, &q)| (p - q).abs() > self.cfg.change_tol)
        }
    }

    /// Snaps `x0` onto the codomain.
    pub fn prepare(&self, x0: &HVector<T>) -> Result<HVector<T>> {
        self.check_state(x0)?;
        snap_to_codomain(&self.cfg.activation, x0)
    }

    /// One synchronous step. Returns the new state and the number of neurons
    /// that changed; out-of-domain potentials leave their neuron unchanged.
    pub fn step_sync(&self, x: &HVector<T>) -> Result<(HVector<T>, usize)> {
        let c = self.correlations(x)?;
        match self.excite(&c)? {
            Excitation::ExactMatch(xi) => {
                let u = self.memories.get(xi).clone();
                let changed = x.count_differences(&u);
                Ok((u, changed))
            }
            Excitation::Weights(w) => {
                let h = self.potentials(&w)?;
                let mut next = x.clone();
                let mut out = vec![T::zero(); x.dim()];
                let mut changed = 0;
                for i in 0..x.len() {
                    if self.cfg.activation.eval(h.component(i), &mut out)
                        && self.differs(&out, x.component(i))
                    {
                        next.component_mut(i).copy_from_slice(&out);
                        changed += 1;
                    }
                }
                Ok((next, changed))
            }
        }
    }

    pub fn weight_cache(&self, x: &HVector<T>) -> Result<WeightCache<T>> {
        let correlations = self.correlations(x)?;
        let excitation = self.excite(&correlations)?;
        Ok(WeightCache {
            correlations,
            excitation,
        })
    }

    /// Updates neuron `i` in place and refreshes `cache`. Returns whether the
    /// state changed.
    ///
    /// For unnormalized exponential excitation the weights are updated as
    /// `w_xi <- w_xi exp(alpha B(u_i^xi, x_i' - x_i))`; otherwise the
    /// correlations are updated and the weights recomputed from them.
    pub fn step_async(
        &self,
        x: &mut HVector<T>,
        i: usize,
        cache: &mut WeightCache<T>,
    ) -> Result<bool> {
        self.check_state(x)?;
        if i >= x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: i + 1,
            });
        }
        let dim = x.dim();
        let mut next = vec![T::zero(); dim];
        match &cache.excitation {
            Excitation::ExactMatch(xi) => {
                next.copy_from_slice(self.memories.get(*xi).component(i));
            }
            Excitation::Weights(w) => {
                let mut h = vec![T::zero(); dim];
                self.potential_at(w, i, &mut h);
                if !self.cfg.activation.eval(&h, &mut next) {
                    return Ok(false);
                }
            }
        }
        if !self.differs(&next, x.component(i)) {
            return Ok(false);
        }
        self.apply_change(x, i, &next, cache)?;
        Ok(true)
    }

    /// Sets neuron `i` to `value` and updates `cache` incrementally, as
    /// [`Network::step_async`] does after a change.
    pub fn set_neuron(
        &self,
        x: &mut HVector<T>,
        i: usize,
        value: &[T],
        cache: &mut WeightCache<T>,
    ) -> Result<()> {
        self.check_state(x)?;
        if i >= x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: i + 1,
            });
        }
        if value.len() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                found: value.len(),
            });
        }
        self.apply_change(x, i, value, cache)
    }

    fn apply_change(
        &self,
        x: &mut HVector<T>,
        i: usize,
        next: &[T],
        cache: &mut WeightCache<T>,
    ) -> Result<()> {
        let delta: Vec<T> = next
            .iter()
            .zip(x.component(i))
            .map(|(&a, &b)| a - b)
            .collect();
        x.component_mut(i).copy_from_slice(next);

        let deltas: Vec<T> = self
            .memories
            .memories()
            .iter()
            .map(|u| self.form.eval(u.component(i), &delta))
            .collect();
        for (c, d) in cache.correlations.iter_mut().zip(&deltas) {
            *c += *d;
        }
        match (
            &mut cache.excitation,
            self.cfg.excitation.multiplicative_alpha(),
        ) {
            (Excitation::Weights(w), Some(alpha)) => {
                for (k, (wx, d)) in w.iter_mut().zip(&deltas).enumerate() {
                    *wx *= (alpha * *d).exp();
                    if !wx.is_finite() {
                        return Err(Error::Overflow { index: k });
                    }
                }
            }
            _ => cache.excitation = self.excite(&cache.correlations)?,
        }
        Ok(())
    }

    /// `E(x) = -sum_xi F(c_xi)`.
    pub fn energy(&self, x: &HVector<T>) -> Result<T> {
        let c = self.correlations(x)?;
        if let Excitation::ExactMatch(index) = self.excite(&c)? {
            return Err(Error::PotentialSingularity { index });
        }
        let e = self.energy_of(&c);
        if !e.is_finite() {
            return Err(Error::Overflow {
                index: argmax(&c).unwrap_or(0),
            });
        }
        Ok(e)
    }

    fn energy_of(&self, c: &[T]) -> T {
        -c.iter().fold(T::zero(), |acc, &v| {
            acc + self.cfg.excitation.primitive(v, self.scale)
        })
    }

    /// Energy for traces: `-inf` at a potential-function singularity.
    fn trace_energy(&self, x: &HVector<T>) -> Result<T> {
        let c = self.correlations(x)?;
        let singular = match self.cfg.excitation.kind {
            ExcitationKind::Potential { .. } => {
                matches!(self.excite(&c), Ok(Excitation::ExactMatch(_)))
            }
            _ => false,
        };
        Ok(if singular {
            T::neg_infinity()
        } else {
            self.energy_of(&c)
        })
    }

    /// Iterates until a sweep changes nothing, a state recurs, or
    /// `max_sweeps` is reached.
    pub fn run(&self, x0: &HVector<T>) -> Result<RunResult<T>> {
        let mut x = self.prepare(x0)?;
        let n = x.len();
        let mut sweeper = Sweeper::new(self, &x)?;
        let mut trace = vec![(0.0, self.trace_energy(&x)?)];
        let mut states = Vec::new();
        if self.cfg.record_states {
            states.push(x.clone());
        }
        let detect_cycles = matches!(
            (self.cfg.update_mode, self.cfg.async_order),
            (UpdateMode::Synchronous, _) | (UpdateMode::Asynchronous, AsyncOrder::Cyclic)
        );
        let mut seen: HashMap<u64, usize> = HashMap::new();
        if detect_cycles {
            seen.insert(state_hash(&x), 0);
        }

        let mut status = RunStatus::MaxSweepsReached;
        let mut sweeps_used = 0;
        let mut equilibrium_time = 0.0;
        for sweep in 1..=self.cfg.max_sweeps {
            let outcome = sweeper.sweep(self, &mut x)?;
            if outcome.changed == 0 {
                status = RunStatus::Converged;
                break;
            }
            sweeps_used += 1;
            equilibrium_time = match self.cfg.update_mode {
                UpdateMode::Synchronous => sweep as f64,
                UpdateMode::Asynchronous => {
                    (sweep - 1) as f64 + (outcome.last_changed + 1) as f64 / n as f64
                }
            };
            trace.push((sweep as f64, self.trace_energy(&x)?));
            if self.cfg.record_states {
                states.push(x.clone());
            }
            if detect_cycles {
                let key = state_hash(&x);
                if let Some(&earlier) = seen.get(&key) {
                    let period = sweep - earlier;
                    if self.returns_after(&x, period)? {
                        status = RunStatus::Cycled { period };
                        break;
                    }
                } else if seen.len() < CYCLE_CAP {
                    seen.insert(key, sweep);
                }
            }
        }
        Ok(RunResult {
            final_state: x,
            energy_trace: trace,
            sweeps_used,
            equilibrium_time,
            status,
            states,
        })
    }

    /// Whether `period` deterministic sweeps from `x` return to `x`.
    fn returns_after(&self, x: &HVector<T>, period: usize) -> Result<bool> {
        let mut y = x.clone();
        let mut sweeper = Sweeper::new(self, &y)?;
        for _ in 0..period {
            sweeper.sweep(self, &mut y)?;
        }
        Ok(&y == x)
    }
}

fn state_hash<T: Scalar>(x: &HVector<T>) -> u64 {
    let mut hasher = DefaultHasher::new();
    x.state_key().hash(&mut hasher);
    hasher.finish()
}

struct SweepOutcome {
    changed: usize,
    /// Position within the sweep of the last neuron update that changed the state.
    last_changed: usize,
}

/// Per-run mutable state for sweeping.
struct Sweeper<T> {
    cache: Option<WeightCache<T>>,
    order: Vec<usize>,
    rng: Option<ChaCha8Rng>,
}

impl<T: Scalar> Sweeper<T> {
    fn new(net: &Network<T>, x: &HVector<T>) -> Result<Self> {
        let asynchronous = net.cfg.update_mode == UpdateMode::Asynchronous;
        let rng = match (asynchronous, net.cfg.async_order) {
            (true, AsyncOrder::Random { seed }) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Ok(Self {
            cache: if asynchronous {
                Some(net.weight_cache(x)?)
            } else {
                None
            },
            order: (0..x.len()).collect(),
            rng,
        })
    }

    fn sweep(&mut self, net: &Network<T>, x: &mut HVector<T>) -> Result<SweepOutcome> {
        match &mut self.cache {
            None => {
                let (next, changed) = net.step_sync(x)?;
                *x = next;
                Ok(SweepOutcome {
                    changed,
                    last_changed: 0,
                })
            }
            Some(cache) => {
                if let Some(rng) = &mut self.rng {
                    self.order.shuffle(rng);
                }
                let mut changed = 0;
                let mut last_changed = 0;
                for (pos, &i) in self.order.iter().enumerate() {
                    if net.step_async(x, i, cache)? {
                        changed += 1;
                        last_changed = pos;
                    }
                }
                Ok(SweepOutcome {
                    changed,
                    last_changed,
                })
            }
        }
    }
}
