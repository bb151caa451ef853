use lsbm::embedder::{embed_lsb_matching, EmbedConfig};
use lsbm::glrt::{calibrate_threshold, glrt_statistic, GlrtConfig};
use lsbm::harness::smooth_corpus;
use lsbm::rng::derive_seed;
use rayon::prelude::*;

fn scores(images: &[lsbm::GrayImage], config: &GlrtConfig) -> Vec<f64> {
    images.par_iter().map(|i| glrt_statistic(i, config).unwrap()).collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn mean_statistic_grows_with_payload() {
    let covers = smooth_corpus(41, 100, 32, 32, 1.0).unwrap();
    let config = GlrtConfig::default();
    let means: Vec<f64> = [0.0, 0.25, 0.5, 1.0]
        .iter()
        .map(|&rate| {
            let stego: Vec<_> = covers
                .iter()
                .enumerate()
                .map(|(i, c)| embed_lsb_matching(c, &EmbedConfig::new(rate, derive_seed(41, 9, i as u64)).unwrap()).0)
                .collect();
            mean(&scores(&stego, &config))
        })
        .collect();
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
}

#[test]
fn split_sample_calibration_holds_false_alarm_rate() {
    let calibration = smooth_corpus(51, 1000, 24, 24, 1.0).unwrap();
    let holdout = smooth_corpus(52, 1000, 24, 24, 1.0).unwrap();
    let config = GlrtConfig::default();
    let tau = calibrate_threshold(&scores(&calibration, &config), 0.1).unwrap();
    let held = scores(&holdout, &config);
    let rate = held.iter().filter(|&&s| s > tau).count() as f64 / held.len() as f64;
    assert!((rate - 0.1).abs() <= 0.03, "false-alarm rate {rate}");
}

#[test]
fn neighbour_variance_of_pure_noise() {
    use lsbm::glrt::estimate_variance;
    use lsbm::harness::{synth_cover, Scene, SceneSpec};
    let spec = SceneSpec::new(Scene::Constant { theta: 128.0 }, 2.0);
    let (img, _) = synth_cover(&spec, 256, 256, 61).unwrap();
    let v: Vec<f64> = estimate_variance(&img).unwrap().into_iter().flatten().collect();
    // 3/4 of the variance of a rounded N(128, 4) variable, 4 + 1/12 (mpmath)
    let expected = 3.0625;
    let m = mean(&v);
    assert!((m / expected - 1.0).abs() <= 0.10, "mean neighbour variance {m}");
}

#[test]
fn larger_stabilizer_does_not_help() {
    use lsbm::harness::roc_from_scores;
    let covers = smooth_corpus(71, 200, 32, 32, 1.0).unwrap();
    let stego: Vec<_> = covers
        .iter()
        .enumerate()
        .map(|(i, c)| embed_lsb_matching(c, &EmbedConfig::new(1.0, derive_seed(71, 9, i as u64)).unwrap()).0)
        .collect();
    let aucs: Vec<f64> = [0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&a| {
            let config = GlrtConfig::new(a, 0.0).unwrap();
            roc_from_scores(&scores(&covers, &config), &scores(&stego, &config)).unwrap().auc
        })
        .collect();
    assert!(aucs.windows(2).all(|w| w[1] <= w[0]), "AUC by stabilizer: {aucs:?}");
}
