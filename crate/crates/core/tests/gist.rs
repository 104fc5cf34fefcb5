use proptest::prelude::*;
use roadgist::dataset::synth::render;
use roadgist::gist::{build_gabor_bank, extract_gist, prefilter, GistConfig, GistExtractor, PrefilterParams};
use roadgist::{GrayImage, SceneClass};
use roadgist_testkit::{gist_spatial, prefilter_spatial};

fn grating(size: usize, cycles: f64) -> GrayImage<f64> {
    GrayImage::from_fn(size, size, |x, _| {
        128.0 + 100.0 * (2.0 * std::f64::consts::PI * cycles * x as f64 / size as f64).cos()
    })
    .unwrap()
}

#[test]
fn default_descriptor_has_512_values() {
    let config = GistConfig::default();
    assert_eq!(config.descriptor_len(), 512);
    assert_eq!(config.transform_size(), 320);
    let ex = GistExtractor::<f64>::new(config).unwrap();
    let img = render::<f64>(5, SceneClass::Settlement, 0).unwrap();
    let d = ex.extract(&img).unwrap();
    assert_eq!(d.len(), 512);
    assert!(d.values().iter().all(|&v| v >= 0.0 && v.is_finite()));
}

#[test]
fn constant_image_gives_zero_descriptor() {
    let ex = GistExtractor::<f64>::new(GistConfig::default()).unwrap();
    let d = ex.extract(&GrayImage::filled(256, 256, 128.0).unwrap()).unwrap();
    assert!(d.values().iter().all(|v| v.abs() < 1e-6));
}

#[test]
fn constant_prefilters_to_zero() {
    let out: Vec<f64> = prefilter(&GrayImage::filled(40, 40, 128.0).unwrap(), &PrefilterParams::default()).unwrap();
    assert!(out.iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn bright_pixel_matches_spatial_prefilter() {
    let mut data = vec![0.0; 32 * 32];
    data[9 * 32 + 20] = 255.0;
    let img = GrayImage::new(32, 32, data.clone()).unwrap();
    let p = PrefilterParams::default();
    let fast = prefilter(&img, &p).unwrap();
    let oracle = prefilter_spatial(&data, 32, p.fc, p.eps, p.pad);
    let err = fast.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

// Whitening zeroes the mean of the padded grid exactly; cropping the pad
// and dividing by the local contrast leave a residual of a few percent of
// the spread on these scenes.
#[test]
fn prefilter_output_is_nearly_zero_mean() {
    let p = PrefilterParams::default();
    for class in SceneClass::ALL {
        let img = render::<f64>(2, class, 1).unwrap();
        let out = prefilter(&img, &p).unwrap();
        let n = out.len() as f64;
        let mean = out.iter().sum::<f64>() / n;
        let sd = (out.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        assert!(mean.abs() < 0.05 * sd, "{class}: mean {mean}, sd {sd}");
    }
}

#[test]
fn every_filter_peaks_at_one() {
    let bank = build_gabor_bank::<f64>(320, 4, &[8, 8, 8, 8]).unwrap();
    assert_eq!(bank.len(), 32);
    for t in bank.transfer_functions() {
        let max = t.iter().copied().fold(0.0, f64::max);
        assert!((0.999..=1.0).contains(&max), "{max}");
        assert!(t.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}

/// Radial frequency maximizing the filter along its preferred direction:
/// a dense scan followed by golden-section refinement.
fn tuned_frequency(f: &roadgist::gist::GaborFilter) -> f64 {
    let theta = f.angle();
    let n = f.n as f64;
    let step = 1e-3;
    let mut best = 0.0;
    let mut best_v = -1.0;
    let mut fr = 0.0;
    while fr <= n {
        let v = f.response(fr, theta);
        if v > best_v {
            best_v = v;
            best = fr;
        }
        fr += step;
    }
    let (mut a, mut b) = (best - step, best + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f.response(c, theta) > f.response(d, theta) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn scales_are_spaced_by_root_two() {
    let bank = build_gabor_bank::<f64>(320, 4, &[8, 8, 8, 8]).unwrap();
    for s in 0..3 {
        for j in 0..8 {
            let coarse = tuned_frequency(&bank.filters()[(s + 1) * 8 + j]);
            let fine = tuned_frequency(&bank.filters()[s * 8 + j]);
            assert!((coarse - fine / 2f64.sqrt()).abs() < 1e-9, "scale {s}: {fine} -> {coarse}");
        }
    }
}

#[test]
fn grating_matches_spatial_gabor_oracle() {
    let (size, pad, blocks) = (64, 8, 4);
    let orients = [8, 8, 8, 8];
    let img = grating(size, 10.0);
    let p = PrefilterParams::default();
    let bank = build_gabor_bank::<f64>(size + 2 * pad, 4, &orients).unwrap();
    let fast = extract_gist(&img, &bank, blocks, pad, &p).unwrap();
    let oracle = gist_spatial(img.data(), size, pad, blocks, &orients, (p.fc, p.eps, p.pad));
    let scale = oracle.iter().copied().fold(0.0, f64::max);
    let err = fast.values().iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-4 * scale, "max deviation {err} of {scale}");

    let energies: Vec<f64> = (0..32).map(|f| fast.channel_energy(f, blocks)).collect();
    let strongest = (0..32).max_by(|&a, &b| energies[a].total_cmp(&energies[b])).unwrap();
    assert_eq!(bank.filters()[strongest].orientation, 0, "energies {energies:?}");
}

#[test]
fn intensity_shift_barely_changes_descriptor() {
    let ex = GistExtractor::<f64>::new(GistConfig::default()).unwrap();
    let img = render::<f64>(4, SceneClass::Highway, 2).unwrap();
    let lo = img.data().iter().copied().fold(f64::MAX, f64::min);
    let hi = img.data().iter().copied().fold(f64::MIN, f64::max);
    let shift = (255.0 - hi).min(lo).max(1.0);
    let delta = if hi + shift <= 255.0 { shift } else { -shift };
    let moved = GrayImage::from_fn(256, 256, |x, y| img.get(x, y) + delta).unwrap();
    let a = ex.extract(&img).unwrap();
    let b = ex.extract(&moved).unwrap();
    let diff: f64 = a.values().iter().zip(b.values()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let norm: f64 = a.values().iter().map(|p| p * p).sum::<f64>().sqrt();
    assert!(diff < 1e-3 * norm, "{diff} vs {norm}");
}

#[test]
fn mirroring_permutes_orientations() {
    let ex = GistExtractor::<f64>::new(GistConfig::default()).unwrap();
    for class in [SceneClass::Highway, SceneClass::Booth] {
        let img = render::<f64>(8, class, 0).unwrap();
        let a = ex.extract(&img).unwrap();
        let b = ex.extract(&img.flip_horizontal()).unwrap();
        let (mut diff, mut norm) = (0.0, 0.0);
        for s in 0..4 {
            for j in 0..8 {
                let f = s * 8 + j;
                let g = s * 8 + (8 - j) % 8;
                for r in 0..4 {
                    for c in 0..4 {
                        let p = a.values()[f * 16 + r * 4 + c];
                        let q = b.values()[g * 16 + r * 4 + (3 - c)];
                        diff += (p - q) * (p - q);
                        norm += p * p;
                    }
                }
            }
        }
        assert!(diff.sqrt() < 1e-3 * norm.sqrt(), "{class}: {} vs {}", diff.sqrt(), norm.sqrt());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn length_and_sign_hold_for_any_configuration(
        size_q in 2usize..5,
        blocks in 1usize..5,
        orients in prop::collection::vec(1usize..5, 1..4),
        seed in any::<u64>(),
    ) {
        let size = size_q * 8;
        let config = GistConfig {
            working_size: size,
            blocks,
            pad: 4,
            orientations_per_scale: orients.clone(),
            prefilter: PrefilterParams::default(),
        };
        let ex = GistExtractor::<f64>::new(config.clone()).unwrap();
        let img = GrayImage::from_fn(size, size, |x, y| ((seed as usize ^ (x * 7919 + y * 104729)) % 256) as f64).unwrap();
        let d = ex.extract(&img).unwrap();
        prop_assert_eq!(d.len(), orients.iter().sum::<usize>() * blocks * blocks);
        prop_assert!(d.values().iter().all(|&v| v >= 0.0 && v.is_finite()));
    }
}
