//! Scene taxonomy, labeled descriptor collections, manifest ingestion, the
//! on-disk descriptor cache and a procedural scene generator.

mod build;
mod cache;
mod manifest;
pub mod synth;

pub use build::{build_dataset, extract_all};
pub use cache::{cache_load, cache_save, read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use manifest::{load_manifest, parse_manifest, ManifestRecord};
pub use synth::{synth_generate, SynthScene};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gist::GistDescriptor;
use crate::scalar::Scalar;

/// The eight traffic scene categories. Discriminants are the persisted codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum SceneClass {
    Highway = 0,
    Road = 1,
    Tunnel = 2,
    Exit = 3,
    Settlement = 4,
    Overpass = 5,
    Booth = 6,
    Traffic = 7,
}

impl SceneClass {
    pub const ALL: [SceneClass; 8] = [
        SceneClass::Highway,
        SceneClass::Road,
        SceneClass::Tunnel,
        SceneClass::Exit,
        SceneClass::Settlement,
        SceneClass::Overpass,
        SceneClass::Booth,
        SceneClass::Traffic,
    ];

    /// Row order of the FM1 accuracy and confusion reports.
    pub const REPORT_ORDER: [SceneClass; 8] = [
        SceneClass::Highway,
        SceneClass::Settlement,
        SceneClass::Booth,
        SceneClass::Tunnel,
        SceneClass::Exit,
        SceneClass::Overpass,
        SceneClass::Traffic,
        SceneClass::Road,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            SceneClass::Highway => "highway",
            SceneClass::Road => "road",
            SceneClass::Tunnel => "tunnel",
            SceneClass::Exit => "exit",
            SceneClass::Settlement => "settlement",
            SceneClass::Overpass => "overpass",
            SceneClass::Booth => "booth",
            SceneClass::Traffic => "traffic",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SceneClass::Highway => "an open highway",
            SceneClass::Road => "an open non-highway road",
            SceneClass::Tunnel => "in a tunnel, or directly in front of it, but not at the tunnel exit",
            SceneClass::Exit => "directly at the tunnel exit",
            SceneClass::Settlement => "in a settlement",
            SceneClass::Overpass => "in front of, or under an overpass",
            SceneClass::Booth => "directly in front of, or at the toll booth",
            SceneClass::Traffic => "many vehicles are visible, or completely obstruct the view",
        }
    }
}

impl fmt::Display for SceneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SceneClass {
    type Err = Error;

    /// Case-insensitive match against the class names.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::arg(format!("unknown scene class {t:?}")))
    }
}

/// Descriptors with one label and one origin string each.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    descriptors: Vec<GistDescriptor<T>>,
    labels: Vec<SceneClass>,
    sources: Vec<String>,
}

impl<T: Scalar> Default for LabeledDataset<T> {
    fn default() -> Self {
        Self {
            descriptors: Vec::new(),
            labels: Vec::new(),
            sources: Vec::new(),
        }
    }
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(descriptors: Vec<GistDescriptor<T>>, labels: Vec<SceneClass>, sources: Vec<String>) -> Result<Self> {
        if descriptors.len() != labels.len() || labels.len() != sources.len() {
            return Err(Error::arg(format!(
                "dataset columns differ in length: {} descriptors, {} labels, {} sources",
                descriptors.len(),
                labels.len(),
                sources.len()
            )));
        }
        if let Some(first) = descriptors.first() {
            let d = first.len();
            if let Some(i) = descriptors.iter().position(|x| x.len() != d) {
                return Err(Error::arg(format!(
                    "descriptor {i} has dimension {}, expected {d}",
                    descriptors[i].len()
                )));
            }
        }
        Ok(Self {
            descriptors,
            labels,
            sources,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Shared descriptor dimension, 0 when empty.
    pub fn dim(&self) -> usize {
        self.descriptors.first().map_or(0, |d| d.len())
    }

    pub fn descriptors(&self) -> &[GistDescriptor<T>] {
        &self.descriptors
    }

    pub fn labels(&self) -> &[SceneClass] {
        &self.labels
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    /// Distinct labels in code order.
    pub fn classes(&self) -> Vec<SceneClass> {
        let mut seen = [false; 8];
        for l in &self.labels {
            seen[l.code() as usize] = true;
        }
        SceneClass::ALL.iter().copied().filter(|c| seen[c.code() as usize]).collect()
    }

    /// Instance count per class, indexed by class code.
    pub fn class_counts(&self) -> [usize; 8] {
        let mut counts = [0; 8];
        for l in &self.labels {
            counts[l.code() as usize] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            descriptors: indices.iter().map(|&i| self.descriptors[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            sources: indices.iter().map(|&i| self.sources[i].clone()).collect(),
        }
    }
}
