mod common;

use common::{chi_square_p, histogram};
use lsbm::embedder::{embed_lsb_matching, empirical_pmf, EmbedConfig};
use lsbm::harness::{synth_cover, Scene, SceneSpec};
use lsbm::pixel_model::{cover_pmf, stego_pmf, PixelParams};
use lsbm::GrayImage;

const SIDE: usize = 1024;

fn cover(theta: f64, sigma: f64, seed: u64) -> GrayImage {
    let spec = SceneSpec::new(Scene::Constant { theta }, sigma);
    synth_cover(&spec, SIDE, SIDE, seed).unwrap().0
}

#[test]
fn synthetic_cover_matches_cover_pmf() {
    let img = cover(128.0, 2.0, 11);
    let p = cover_pmf(&PixelParams::new(128.0, 2.0).unwrap(), 8).unwrap();
    let pv = chi_square_p(&histogram(img.pixels(), 256), p.mass());
    assert!(pv > 0.01, "p-value {pv}");
}

#[test]
fn stego_histogram_matches_stego_pmf() {
    let (theta, sigma, rate) = (128.0, 1.0, 0.5);
    let img = cover(theta, sigma, 12);
    let (stego, report) = embed_lsb_matching(&img, &EmbedConfig::new(rate, 13).unwrap());
    let q = stego_pmf(&cover_pmf(&PixelParams::new(theta, sigma).unwrap(), 8).unwrap(), rate).unwrap();
    let pv = chi_square_p(&histogram(stego.pixels(), 256), q.mass());
    assert!(pv > 0.01, "p-value {pv}");

    let n = img.len() as f64;
    let expected = rate / 2.0;
    let se = (expected * (1.0 - expected) / n).sqrt();
    let observed = report.pixels_changed as f64 / n;
    assert!((observed - expected).abs() < 4.0 * se, "{observed}");
}

#[test]
fn empirical_pmf_is_a_consistent_estimate() {
    let img = cover(100.3, 0.8, 14);
    let est = empirical_pmf(std::slice::from_ref(&img)).unwrap();
    let p = cover_pmf(&PixelParams::new(100.3, 0.8).unwrap(), 8).unwrap();
    let n = img.len() as f64;
    for k in 0..256 {
        let se = (p.get(k) * (1.0 - p.get(k)) / n).sqrt();
        assert!((est.get(k) - p.get(k)).abs() <= 4.0 * se + 1e-12, "level {k}");
    }
}
