//! Traffic scene classification from GIST descriptors.
//!
//! The pipeline turns road images into 512-dimensional spatial-envelope
//! descriptors ([`gist`]), explores descriptor space with PCA and k-means
//! ([`explore`]), trains one-vs-one RBF support vector machines ([`svm`]),
//! and scores them with stratified cross-validation ([`eval`]). Descriptors
//! can be packed into a 525-byte wire record for low-bandwidth links
//! ([`codec`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`). The `*F64`
//! and `*F32` aliases below name the common concrete instantiations.

pub mod codec;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod explore;
pub mod fft;
pub mod gist;
pub mod imaging;
pub mod scalar;
pub mod svm;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use codec::{decode_descriptor, encode_descriptor, WireDescriptor};
pub use dataset::{LabeledDataset, SceneClass};
pub use eval::{ClassMetrics, ConfusionMatrix, EvalReport};
pub use explore::{KmeansResult, PcaModel};
pub use gist::{GaborBank, GistConfig, GistDescriptor, PrefilterParams};
pub use imaging::GrayImage;
pub use svm::{BinaryModel, SvmModel, SvmParams};

pub type GrayImageF64 = GrayImage<f64>;
pub type GrayImageF32 = GrayImage<f32>;
pub type GistDescriptorF64 = GistDescriptor<f64>;
pub type GistDescriptorF32 = GistDescriptor<f32>;
pub type GaborBankF64 = GaborBank<f64>;
pub type GaborBankF32 = GaborBank<f32>;
pub type LabeledDatasetF64 = LabeledDataset<f64>;
pub type LabeledDatasetF32 = LabeledDataset<f32>;
pub type PcaModelF64 = PcaModel<f64>;
pub type KmeansResultF64 = KmeansResult<f64>;
pub type SvmModelF64 = SvmModel<f64>;
pub type SvmModelF32 = SvmModel<f32>;
pub type BinaryModelF64 = BinaryModel<f64>;
