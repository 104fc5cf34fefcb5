use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roadgist::dataset::synth::render;
use roadgist::dataset::{
    build_dataset, cache_load, cache_save, load_manifest, parse_manifest, read_cache, synth_generate, write_cache,
    ManifestRecord,
};
use roadgist::imaging::save_pgm;
use roadgist::{Error, GistConfig, GistDescriptor, LabeledDataset, SceneClass};
use roadgist_testkit::fixtures::{LABELS, SUPPORT};

#[test]
fn codes_are_stable() {
    let names = ["highway", "road", "tunnel", "exit", "settlement", "overpass", "booth", "traffic"];
    for (code, name) in names.iter().enumerate() {
        let c: SceneClass = name.parse().unwrap();
        assert_eq!(c.code() as usize, code);
        assert_eq!(SceneClass::from_code(code as u8), Some(c));
        assert_eq!(name.to_uppercase().parse::<SceneClass>().unwrap(), c);
    }
    assert_eq!(SceneClass::from_code(8), None);
}

#[test]
fn single_record() {
    let r = parse_manifest("frames/v1/000120.png,tunnel\n").unwrap();
    assert_eq!(
        r,
        vec![ManifestRecord {
            path: "frames/v1/000120.png".into(),
            label: SceneClass::Tunnel
        }]
    );
}

#[test]
fn reference_histogram_from_manifest_file() {
    let mut text = String::new();
    for (name, n) in LABELS.iter().zip(SUPPORT) {
        for i in 0..n {
            text.push_str(&format!("frames/{name}/{i:05}.png,{name}\n"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.csv");
    fs::write(&path, text).unwrap();
    let records = load_manifest(&path).unwrap();
    assert_eq!(records.len(), 5615);
    assert!(records[0].path.starts_with(dir.path()));
    let mut counts = [0usize; 8];
    for r in &records {
        counts[r.label.code() as usize] += 1;
    }
    // code order: highway, road, tunnel, exit, settlement, overpass, booth, traffic
    assert_eq!(counts, [4337, 516, 388, 31, 176, 33, 55, 79]);
}

#[test]
fn excluded_class_names_its_line() {
    let err = parse_manifest("a.png,road\n\nb.png,intersection\n").unwrap_err();
    match err {
        Error::Parse { line, message } => {
            assert_eq!(line, 3);
            assert!(message.contains("intersection"));
        }
        e => panic!("unexpected {e:?}"),
    }
    assert!(matches!(parse_manifest("a.png,road\na.png,exit\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_manifest("no-comma\n"), Err(Error::Parse { line: 1, .. })));
}

fn random_dataset(n: usize, d: usize, seed: u64) -> LabeledDataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let desc = (0..n)
        .map(|_| GistDescriptor::new((0..d).map(|_| rng.random_range(0.0..3.0)).collect()).unwrap())
        .collect();
    let labels = (0..n).map(|_| SceneClass::ALL[rng.random_range(0..8)]).collect();
    let sources = (0..n).map(|i| format!("img/{i}.png")).collect();
    LabeledDataset::new(desc, labels, sources).unwrap()
}

#[test]
fn cache_roundtrip_within_one_ulp() {
    let ds = random_dataset(5, 512, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ds.fmds");
    cache_save(&ds, &path).unwrap();
    let sources_len: usize = ds.sources().iter().map(|s| 4 + s.len()).sum();
    assert_eq!(fs::metadata(&path).unwrap().len() as usize, 4 + 1 + 8 + 8 + 5 + 5 * 512 * 4 + sources_len);
    let back: LabeledDataset<f64> = cache_load(&path).unwrap();
    assert_eq!(back.labels(), ds.labels());
    assert_eq!(back.sources(), ds.sources());
    assert_eq!((back.len(), back.dim()), (5, 512));
    for (a, b) in ds.descriptors().iter().zip(back.descriptors()) {
        for (&x, &y) in a.values().iter().zip(b.values()) {
            let ulp = ((x as f32).next_up() - x as f32) as f64;
            assert!((x - y).abs() <= ulp);
        }
    }
}

#[test]
fn empty_cache_roundtrip() {
    let ds = LabeledDataset::<f32>::new(vec![], vec![], vec![]).unwrap();
    let mut buf = Vec::new();
    write_cache(&ds, &mut buf).unwrap();
    let back: LabeledDataset<f32> = read_cache(&buf[..]).unwrap();
    assert!(back.is_empty());
}

#[test]
fn corrupt_cache_is_a_format_error() {
    let mut buf = Vec::new();
    write_cache(&random_dataset(3, 4, 2), &mut buf).unwrap();
    for cut in [0, 3, 10, 22, 30, buf.len() - 1] {
        assert!(matches!(read_cache::<f64, _>(&buf[..cut]), Err(Error::Format(_))), "cut {cut}");
    }
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_cache::<f64, _>(&bad[..]), Err(Error::Format(_))));
    let mut bad = buf;
    bad[4] = 9;
    assert!(matches!(read_cache::<f64, _>(&bad[..]), Err(Error::Format(_))));
}

#[test]
fn empty_manifest_builds_empty_dataset() {
    let ds = build_dataset::<f32>(&[], &GistConfig::default()).unwrap();
    assert!(ds.is_empty());
}

fn write_three(dir: &std::path::Path) -> Vec<ManifestRecord> {
    [SceneClass::Exit, SceneClass::Tunnel, SceneClass::Booth]
        .into_iter()
        .enumerate()
        .map(|(i, class)| {
            let path = dir.join(format!("{i}.pgm"));
            save_pgm(&render::<f32>(3, class, i).unwrap(), &path).unwrap();
            ManifestRecord { path, label: class }
        })
        .collect()
}

#[test]
fn build_keeps_manifest_order_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let records = write_three(dir.path());
    let cfg = GistConfig::default();
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let a = pool(1).install(|| build_dataset::<f32>(&records, &cfg)).unwrap();
    let b = pool(3).install(|| build_dataset::<f32>(&records, &cfg)).unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(a.dim(), 512);
    assert_eq!(a.labels(), &[SceneClass::Exit, SceneClass::Tunnel, SceneClass::Booth]);
    for (src, r) in a.sources().iter().zip(&records) {
        assert_eq!(src, &r.path.display().to_string());
    }
    let (pa, pb) = (dir.path().join("a.fmds"), dir.path().join("b.fmds"));
    cache_save(&a, &pa).unwrap();
    cache_save(&b, &pb).unwrap();
    assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap());
}

#[test]
fn missing_image_is_named() {
    let records = vec![ManifestRecord {
        path: "/nonexistent/x.png".into(),
        label: SceneClass::Road,
    }];
    let err = build_dataset::<f32>(&records, &GistConfig::default()).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/x.png"));
}

#[test]
fn synthetic_scenes_are_deterministic() {
    let a = synth_generate::<f32>(5, 2).unwrap();
    let b = synth_generate::<f32>(5, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 16);
    assert!(a.iter().all(|s| s.image.width() == 256 && s.image.height() == 256));
    let c = synth_generate::<f32>(6, 2).unwrap();
    assert_ne!(a[0].image, c[0].image);
    assert!(synth_generate::<f32>(5, 0).is_err());
}

#[test]
fn tunnels_are_darker_than_exits() {
    let mean = |c: SceneClass, i: usize| {
        let img = render::<f64>(11, c, i).unwrap();
        img.data().iter().sum::<f64>() / img.data().len() as f64
    };
    for i in 0..20 {
        for j in 0..20 {
            assert!(mean(SceneClass::Tunnel, i) < mean(SceneClass::Exit, j));
        }
    }
}
