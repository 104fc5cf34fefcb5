use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gist::{GistConfig, GistDescriptor, GistExtractor};
use crate::imaging::{load_image, GrayImage};
use crate::scalar::Scalar;

use super::{LabeledDataset, ManifestRecord};

/// Loads, normalizes and describes every manifest image, in manifest order.
///
/// Images are processed in parallel on the current rayon pool. The first
/// failing record (in manifest order) is reported with its path.
pub fn build_dataset<T: Scalar>(records: &[ManifestRecord], config: &GistConfig) -> Result<LabeledDataset<T>> {
    let extractor = GistExtractor::<T>::new(config.clone())?;
    let results: Vec<Result<GistDescriptor<T>>> = records
        .par_iter()
        .map(|r| {
            load_image::<T>(&r.path)
                .and_then(|img| extractor.extract_any(&img))
                .map_err(|e| Error::Image {
                    path: r.path.clone(),
                    source: Box::new(e),
                })
        })
        .collect();
    let descriptors = results.into_iter().collect::<Result<Vec<_>>>()?;
    LabeledDataset::new(
        descriptors,
        records.iter().map(|r| r.label).collect(),
        records.iter().map(|r| r.path.display().to_string()).collect(),
    )
}

/// Describes in-memory images in parallel, preserving order.
pub fn extract_all<T: Scalar>(images: &[GrayImage<T>], extractor: &GistExtractor<T>) -> Result<Vec<GistDescriptor<T>>> {
    let results: Vec<Result<GistDescriptor<T>>> = images.par_iter().map(|img| extractor.extract_any(img)).collect();
    results.into_iter().collect()
}
