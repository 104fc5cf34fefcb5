use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use roadgist::{GistConfig, PrefilterParams, SvmParams};

#[derive(Debug, Parser)]
#[command(name = "roadgist", version, about = "Traffic scene classification with GIST descriptors and RBF SVMs")]
pub struct Cli {
    /// Worker threads; 0 uses every available core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe every image of a manifest and write a descriptor cache.
    Extract(ExtractArgs),
    /// Project descriptors onto their principal components.
    Pca(PcaArgs),
    /// Run k-means over a range of K and report cluster composition.
    Cluster(ClusterArgs),
    /// Train a one-vs-one SVM on a descriptor cache.
    Train(TrainArgs),
    /// Classify images, cached descriptors or wire records with a trained model.
    Predict(PredictArgs),
    /// Stratified k-fold cross-validation with confusion and accuracy tables.
    Crossval(CrossvalArgs),
    /// Pack descriptors into compact wire records.
    Encode(EncodeArgs),
    /// Generate a labeled procedural scene set.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GistArgs {
    /// Square working size images are scaled and cropped to.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    /// Pooling grid is blocks × blocks.
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    /// Symmetric padding before Gabor filtering.
    #[arg(long, default_value_t = 32)]
    pub pad: usize,
    /// Orientations per scale, coarse to fine.
    #[arg(long, value_delimiter = ',', default_value = "8,8,8,8")]
    pub orientations: Vec<usize>,
    /// Prefilter low-pass cutoff, cycles per image.
    #[arg(long, default_value_t = 4.0)]
    pub fc: f64,
    /// Prefilter contrast floor.
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// Prefilter symmetric padding.
    #[arg(long, default_value_t = 5)]
    pub prefilter_pad: usize,
}

impl GistArgs {
    pub fn config(&self) -> GistConfig {
        GistConfig {
            working_size: self.size,
            blocks: self.blocks,
            pad: self.pad,
            orientations_per_scale: self.orientations.clone(),
            prefilter: PrefilterParams {
                fc: self.fc,
                eps: self.eps,
                pad: self.prefilter_pad,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SvmArgs {
    /// Soft-margin penalty C.
    #[arg(long = "c", default_value_t = 512.0)]
    pub c: f64,
    /// RBF kernel width γ.
    #[arg(long, default_value_t = 0.125)]
    pub gamma: f64,
    /// KKT tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Stalled SMO updates tolerated before giving up.
    #[arg(long, default_value_t = 10)]
    pub max_passes: usize,
    /// Kernel cache budget in MiB.
    #[arg(long, default_value_t = 256)]
    pub cache_mb: usize,
}

impl SvmArgs {
    pub fn params(&self) -> SvmParams {
        SvmParams {
            c: self.c,
            gamma: self.gamma,
            tol: self.tol,
            max_passes: self.max_passes,
            cache_bytes: self.cache_mb << 20,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Manifest of `path,label` lines; paths relative to the manifest.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Descriptor cache to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub gist: GistArgs,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    /// Descriptor cache to read.
    #[arg(long)]
    pub cache: PathBuf,
    /// Directory receiving projection.csv and eigenvalues.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Components to keep (at least 2).
    #[arg(long, default_value_t = 2)]
    pub components: usize,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Descriptor cache to read.
    #[arg(long)]
    pub cache: PathBuf,
    /// Directory receiving one composition table per K plus inertia.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 20)]
    pub k_max: usize,
    /// Seed of the first restart; restart i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// k-means++ restarts per K; the lowest inertia is kept.
    #[arg(long, default_value_t = 10)]
    pub restarts: u64,
    #[arg(long, default_value_t = 300)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Descriptor cache to read.
    #[arg(long)]
    pub cache: PathBuf,
    /// Model file to write.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub svm: SvmArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true)))]
pub struct PredictArgs {
    /// Model written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Images to describe and classify.
    #[arg(long, num_args = 1.., group = "input")]
    pub image: Vec<PathBuf>,
    /// Descriptor cache to classify.
    #[arg(long, group = "input")]
    pub cache: Option<PathBuf>,
    /// Files of concatenated wire records to classify.
    #[arg(long, num_args = 1.., group = "input")]
    pub wire: Vec<PathBuf>,
    /// Write predictions here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub gist: GistArgs,
}

#[derive(Debug, Args)]
pub struct CrossvalArgs {
    /// Descriptor cache to read.
    #[arg(long)]
    pub cache: PathBuf,
    /// Directory receiving confusion.tsv, accuracy.tsv and report.jsonl.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Fold assignment seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub svm: SvmArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true)))]
pub struct EncodeArgs {
    /// Descriptor cache to encode.
    #[arg(long, group = "input")]
    pub cache: Option<PathBuf>,
    /// Images to describe and encode.
    #[arg(long, num_args = 1.., group = "input")]
    pub image: Vec<PathBuf>,
    /// Output file of concatenated wire records.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub gist: GistArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub per_class: usize,
    /// Directory receiving the images and manifest.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also describe the images into this cache.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[command(flatten)]
    pub gist: GistArgs,
}
