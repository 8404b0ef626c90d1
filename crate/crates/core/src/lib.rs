//! Hypercomplex-valued recurrent correlation neural networks.
//!
//! The library is generic over the coefficient type (`f32` or `f64`); the
//! aliases below fix it to one of the two.

pub mod activations;
pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod imaging;
pub mod presets;
pub mod rcnn;
pub mod scalar;

pub use activations::{
    check_b_function, ActivationFn, ActivationKind, BFunctionReport, StateAlphabet,
};
pub use algebra::{
    check_re_ahn, check_reverse_involution, AlgebraSpec, BilinearForm, HNumber, HVector, Involution,
};
pub use dynamics::{build_graph, classify, export_dot, Classification, EdgeSet, StateGraph};
pub use error::{Error, Result};
pub use imaging::{Codec, GrayImage};
pub use rcnn::{
    AsyncOrder, ExcitationFn, ExcitationKind, MemorySet, Network, NetworkConfig, RunResult,
    RunStatus, UpdateMode,
};
pub use scalar::Scalar;

pub type HNumber64 = HNumber<f64>;
pub type HVector64 = HVector<f64>;
pub type Algebra64 = AlgebraSpec<f64>;
pub type Activation64 = ActivationFn<f64>;
pub type Network64 = Network<f64>;
pub type NetworkConfig64 = NetworkConfig<f64>;
pub type MemorySet64 = MemorySet<f64>;

pub type HNumber32 = HNumber<f32>;
pub type HVector32 = HVector<f32>;
pub type Algebra32 = AlgebraSpec<f32>;
pub type Activation32 = ActivationFn<f32>;
pub type Network32 = Network<f32>;
pub type NetworkConfig32 = NetworkConfig<f32>;
pub type MemorySet32 = MemorySet<f32>;
