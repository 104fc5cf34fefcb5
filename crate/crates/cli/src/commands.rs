use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use roadgist::codec::WIRE_HEADER_LEN;
use roadgist::dataset::{build_dataset, cache_load, cache_save, load_manifest, synth_generate, ManifestRecord};
use roadgist::eval::cross_validate;
use roadgist::explore::{cluster_report, kmeans_best_of, pca_fit};
use roadgist::imaging::save_pgm;
use roadgist::svm::{load_model, save_model, train_multiclass};
use roadgist::{
    decode_descriptor, encode_descriptor, ClassMetrics, GistDescriptor, LabeledDataset, SceneClass, WireDescriptor,
};
use serde::Serialize;

use crate::args::*;
use crate::CliError;

type Outcome = Result<(), CliError>;

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Outcome {
    fs::write(path, contents).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn create_dir(path: &Path) -> Outcome {
    fs::create_dir_all(path).map_err(|e| CliError::Data(format!("cannot create {}: {e}", path.display())))
}

fn load_cache(path: &Path) -> Result<LabeledDataset<f64>, CliError> {
    let ds: LabeledDataset<f64> = cache_load(path)?;
    if ds.is_empty() {
        return Err(CliError::Data(format!("{} holds no descriptors", path.display())));
    }
    Ok(ds)
}

fn check_svm(a: &SvmArgs) -> Outcome {
    if !(a.c > 0.0 && a.gamma > 0.0 && a.tol > 0.0) {
        return Err(CliError::Usage("--c, --gamma and --tol must be positive".into()));
    }
    Ok(())
}

pub fn extract(a: &ExtractArgs) -> Outcome {
    let records = load_manifest(&a.manifest)?;
    if records.is_empty() {
        return Err(CliError::Data(format!("{} lists no images", a.manifest.display())));
    }
    let ds = build_dataset::<f64>(&records, &a.gist.config())?;
    cache_save(&ds, &a.out)?;
    eprintln!("wrote {} descriptors of length {} to {}", ds.len(), ds.dim(), a.out.display());
    Ok(())
}

pub fn pca(a: &PcaArgs) -> Outcome {
    if a.components < 2 {
        return Err(CliError::Usage("--components must be at least 2".into()));
    }
    let ds = load_cache(&a.cache)?;
    let model = pca_fit::<f64, _>(ds.descriptors(), a.components)?;
    create_dir(&a.out_dir)?;

    let mut csv = String::from("point_id,x,y");
    for k in 3..=a.components {
        write!(csv, ",pc{k}").unwrap();
    }
    csv.push_str(",label\n");
    for (i, (d, l)) in ds.descriptors().iter().zip(ds.labels()).enumerate() {
        write!(csv, "{i}").unwrap();
        for v in model.project(d.values())? {
            write!(csv, ",{v:.9}").unwrap();
        }
        writeln!(csv, ",{l}").unwrap();
    }
    write_file(&a.out_dir.join("projection.csv"), csv)?;

    let total: f64 = ds
        .descriptors()
        .iter()
        .flat_map(|d| d.values().iter().zip(&model.mean).map(|(v, m)| (v - m) * (v - m)))
        .sum::<f64>()
        / (ds.len() - 1) as f64;
    let mut tsv = String::from("component\teigenvalue\texplained\n");
    for (k, e) in model.eigenvalues.iter().enumerate() {
        writeln!(tsv, "{}\t{e:.9}\t{:.6}", k + 1, if total > 0.0 { e / total } else { 0.0 }).unwrap();
    }
    write_file(&a.out_dir.join("eigenvalues.tsv"), tsv)?;
    eprintln!("projected {} points onto {} components", ds.len(), a.components);
    Ok(())
}

pub fn cluster(a: &ClusterArgs) -> Outcome {
    if a.k_min < 1 || a.k_min > a.k_max || a.restarts == 0 || a.max_iter == 0 {
        return Err(CliError::Usage(
            "need 1 ≤ --k-min ≤ --k-max, --restarts ≥ 1 and --max-iter ≥ 1".into(),
        ));
    }
    let ds = load_cache(&a.cache)?;
    if a.k_max > ds.len() {
        return Err(CliError::Data(format!("--k-max {} exceeds {} points", a.k_max, ds.len())));
    }
    create_dir(&a.out_dir)?;
    let mut summary = String::from("k\tinertia\titerations\n");
    for k in a.k_min..=a.k_max {
        let r = kmeans_best_of::<f64, _>(ds.descriptors(), k, a.seed..a.seed + a.restarts, a.max_iter)?;
        writeln!(summary, "{k}\t{:.9}\t{}", r.inertia, r.iterations).unwrap();
        let report = cluster_report(&r.assignments, ds.labels())?;
        write_file(
            &a.out_dir.join(format!("clusters_k{k:02}.tsv")),
            report.to_tsv(&SceneClass::REPORT_ORDER),
        )?;
    }
    write_file(&a.out_dir.join("inertia.tsv"), summary)?;
    eprintln!("clustered {} points for K = {}..={}", ds.len(), a.k_min, a.k_max);
    Ok(())
}

pub fn train(a: &TrainArgs) -> Outcome {
    check_svm(&a.svm)?;
    let ds = load_cache(&a.cache)?;
    let model = train_multiclass(&ds, &a.svm.params())?;
    save_model(&model, &a.model)?;
    let svs: usize = model.pairs.iter().map(|p| p.model.support_vectors.len()).sum();
    eprintln!(
        "trained {} pair models over {} labels ({svs} support vectors)",
        model.pairs.len(),
        model.labels.len()
    );
    Ok(())
}

/// Splits a stream of concatenated wire records.
fn read_wire_stream(path: &Path) -> Result<Vec<WireDescriptor>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    let mut at = 0;
    while at < bytes.len() {
        let rest = &bytes[at..];
        if rest.len() < WIRE_HEADER_LEN {
            return Err(CliError::Data(format!("{}: trailing {} bytes", path.display(), rest.len())));
        }
        let len = WIRE_HEADER_LEN + u16::from_le_bytes([rest[3], rest[4]]) as usize;
        let record = rest.get(..len).ok_or_else(|| {
            CliError::Data(format!("{}: record at byte {at} is truncated", path.display()))
        })?;
        out.push(
            WireDescriptor::from_bytes(record.to_vec())
                .map_err(|e| CliError::Data(format!("{}: record at byte {at}: {e}", path.display())))?,
        );
        at += len;
    }
    Ok(out)
}

fn describe_images(paths: &[PathBuf], gist: &GistArgs) -> Result<Vec<GistDescriptor<f64>>, CliError> {
    let records: Vec<ManifestRecord> = paths
        .iter()
        .map(|p| ManifestRecord {
            path: p.clone(),
            // placeholder; only the descriptors are used
            label: SceneClass::Highway,
        })
        .collect();
    Ok(build_dataset::<f64>(&records, &gist.config())?.descriptors().to_vec())
}

pub fn predict(a: &PredictArgs) -> Outcome {
    let model = load_model::<f64>(&a.model)?;
    let inputs: Vec<(String, GistDescriptor<f64>)> = if let Some(cache) = &a.cache {
        let ds = load_cache(cache)?;
        ds.sources().iter().cloned().zip(ds.descriptors().iter().cloned()).collect()
    } else if !a.wire.is_empty() {
        let mut v = Vec::new();
        for path in &a.wire {
            for (i, w) in read_wire_stream(path)?.iter().enumerate() {
                v.push((format!("{}#{i}", path.display()), decode_descriptor(w)?));
            }
        }
        v
    } else if !a.image.is_empty() {
        let names = a.image.iter().map(|p| p.display().to_string());
        names.zip(describe_images(&a.image, &a.gist)?).collect()
    } else {
        return Err(CliError::Usage("one of --image, --cache or --wire is required".into()));
    };

    let mut out = String::from("source\tpredicted\n");
    for (name, d) in &inputs {
        writeln!(out, "{name}\t{}", model.predict(d.values())?).unwrap();
    }
    match &a.out {
        Some(path) => write_file(path, out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ClassRecord<'a> {
    class: &'a str,
    support: u64,
    tp_rate: f64,
    fp_rate: f64,
    precision: f64,
    recall: f64,
    f_measure: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    accuracy: Option<f64>,
}

impl<'a> ClassRecord<'a> {
    fn new(class: &'a str, support: u64, m: &ClassMetrics) -> Self {
        Self {
            class,
            support,
            tp_rate: m.tp_rate,
            fp_rate: m.fp_rate,
            precision: m.precision,
            recall: m.recall,
            f_measure: m.f_measure,
            degenerate: None,
            accuracy: None,
        }
    }
}

pub fn crossval(a: &CrossvalArgs) -> Outcome {
    check_svm(&a.svm)?;
    if a.folds < 2 {
        return Err(CliError::Usage("--folds must be at least 2".into()));
    }
    let ds = load_cache(&a.cache)?;
    let report = cross_validate(&ds, &a.svm.params(), a.folds, a.seed)?.in_report_order();
    create_dir(&a.out_dir)?;
    write_file(&a.out_dir.join("confusion.tsv"), report.confusion.to_tsv())?;
    write_file(&a.out_dir.join("accuracy.tsv"), report.accuracy_tsv())?;

    let cm = &report.confusion;
    let mut jsonl = String::new();
    for (i, (l, m)) in cm.labels().iter().zip(&report.per_class).enumerate() {
        let mut r = ClassRecord::new(l.name(), cm.row_total(i), m);
        r.degenerate = Some(report.degenerate.contains(l));
        jsonl.push_str(&serde_json::to_string(&r).expect("plain record"));
        jsonl.push('\n');
    }
    let mut w = ClassRecord::new("weighted average", cm.total(), &report.weighted);
    w.accuracy = Some(report.accuracy);
    jsonl.push_str(&serde_json::to_string(&w).expect("plain record"));
    jsonl.push('\n');
    write_file(&a.out_dir.join("report.jsonl"), jsonl)?;

    println!(
        "accuracy {:.4} ({} of {} correct, {} folds)",
        report.accuracy,
        cm.trace(),
        cm.total(),
        a.folds
    );
    Ok(())
}

pub fn encode(a: &EncodeArgs) -> Outcome {
    let descriptors = if let Some(cache) = &a.cache {
        load_cache(cache)?.descriptors().to_vec()
    } else if !a.image.is_empty() {
        describe_images(&a.image, &a.gist)?
    } else {
        return Err(CliError::Usage("one of --cache or --image is required".into()));
    };
    let mut bytes = Vec::new();
    for d in &descriptors {
        bytes.extend_from_slice(encode_descriptor(d)?.as_bytes());
    }
    write_file(&a.out, &bytes)?;
    eprintln!("encoded {} descriptors into {} bytes", descriptors.len(), bytes.len());
    Ok(())
}

pub fn synth(a: &SynthArgs) -> Outcome {
    if a.per_class == 0 {
        return Err(CliError::Usage("--per-class must be at least 1".into()));
    }
    let scenes = synth_generate::<f64>(a.seed, a.per_class)?;
    let mut manifest = String::new();
    for class in SceneClass::ALL {
        create_dir(&a.out_dir.join(class.name()))?;
    }
    let mut records = Vec::with_capacity(scenes.len());
    for (i, s) in scenes.iter().enumerate() {
        let rel = format!("{}/{:04}.pgm", s.label.name(), i % a.per_class);
        let path = a.out_dir.join(&rel);
        save_pgm(&s.image, &path)?;
        writeln!(manifest, "{rel},{}", s.label).unwrap();
        records.push(ManifestRecord { path, label: s.label });
    }
    write_file(&a.out_dir.join("manifest.csv"), manifest)?;

    if let Some(cache) = &a.cache {
        // describe the files as written so the cache matches `extract` on the manifest
        let ds = build_dataset::<f64>(&records, &a.gist.config())?;
        let ids = scenes.iter().map(|s| s.id.clone()).collect();
        let ds = LabeledDataset::new(ds.descriptors().to_vec(), ds.labels().to_vec(), ids)?;
        cache_save(&ds, cache)?;
    }
    eprintln!("wrote {} scenes to {}", scenes.len(), a.out_dir.display());
    Ok(())
}
