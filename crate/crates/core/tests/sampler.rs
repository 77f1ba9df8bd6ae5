use setdp::sampler::fill_laplace;
use setdp::{laplace_cdf, sample_scalar, sample_vector, LaplaceParams, SeededStream};

fn draws(count: usize, seed: u64) -> Vec<f64> {
    let p = LaplaceParams::new(0.0, 1.0).unwrap();
    let mut rng = SeededStream::new(seed, 0).rng();
    (0..count).map(|_| p.sample(&mut rng)).collect()
}

/// Two-sided Kolmogorov–Smirnov statistic against a continuous CDF.
fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at significance 0.001.
fn ks_critical_001(n: usize) -> f64 {
    1.9495 / (n as f64).sqrt()
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

#[test]
fn moments_of_a_million_draws() {
    let xs = draws(1_000_000, 1);
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.01, "mean {mean}");
    assert!((var - 2.0).abs() < 0.05, "variance {var}");
}

#[test]
fn quartiles_of_a_million_draws() {
    let mut xs = draws(1_000_000, 2);
    xs.sort_by(f64::total_cmp);
    let ln2 = std::f64::consts::LN_2;
    for (q, expected) in [(0.25, -ln2), (0.5, 0.0), (0.75, ln2)] {
        let got = quantile(&xs, q);
        assert!((got - expected).abs() < 0.01, "q{q}: {got} vs {expected}");
    }
}

#[test]
fn kolmogorov_smirnov_against_the_cdf() {
    let p = LaplaceParams::new(0.0, 1.0).unwrap();
    let n = 100_000;
    let d = ks_statistic(draws(n, 3), |x| laplace_cdf(x, &p));
    assert!(d <= ks_critical_001(n), "D = {d}");

    let shifted = LaplaceParams::new(1.5, 0.25).unwrap();
    let mut rng = SeededStream::new(4, 9).rng();
    let xs: Vec<f64> = (0..n).map(|_| shifted.sample(&mut rng)).collect();
    let d = ks_statistic(xs, |x| laplace_cdf(x, &shifted));
    assert!(d <= ks_critical_001(n), "D = {d}");
}

#[test]
fn ks_rejects_the_wrong_scale() {
    let wrong = LaplaceParams::new(0.0, 1.1).unwrap();
    let n = 100_000;
    let d = ks_statistic(draws(n, 3), |x| laplace_cdf(x, &wrong));
    assert!(d > ks_critical_001(n), "D = {d}");
}

#[test]
fn noise_vector_norm_and_independence() {
    let runs = 100_000u64;
    let mut norm_sum = 0.0;
    let (mut s0, mut s1, mut s00, mut s11, mut s01) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for run in 0..runs {
        let w = sample_vector(2, 1.0, &SeededStream::new(77, run)).unwrap().w;
        norm_sum += w[0].abs() + w[1].abs();
        s0 += w[0];
        s1 += w[1];
        s00 += w[0] * w[0];
        s11 += w[1] * w[1];
        s01 += w[0] * w[1];
    }
    let n = runs as f64;
    assert!((norm_sum / n - 2.0).abs() < 0.05);
    let cov = s01 / n - (s0 / n) * (s1 / n);
    let corr = cov / ((s00 / n - (s0 / n).powi(2)) * (s11 / n - (s1 / n).powi(2))).sqrt();
    assert!(corr.abs() < 0.02, "correlation {corr}");
}

#[test]
fn sequences_are_reproducible_bit_for_bit() {
    let p = LaplaceParams::new(-2.0, 3.0).unwrap();
    let s = SeededStream::new(0xDEAD_BEEF, 12);
    let mut a = vec![0.0; 1000];
    let mut b = vec![0.0; 1000];
    fill_laplace(&p, &mut s.rng(), &mut a);
    fill_laplace(&p, &mut s.rng(), &mut b);
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    assert_eq!(sample_scalar(&p, &s).to_bits(), a[0].to_bits());
}

#[test]
fn substreams_are_uncorrelated() {
    let root = SeededStream::new(5, 0);
    let p = LaplaceParams::new(0.0, 1.0).unwrap();
    let n = 20_000;
    let a: Vec<f64> = {
        let mut r = root.substream(0).rng();
        (0..n).map(|_| p.sample(&mut r)).collect()
    };
    let b: Vec<f64> = {
        let mut r = root.substream(1).rng();
        (0..n).map(|_| p.sample(&mut r)).collect()
    };
    let corr = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / n as f64 / 2.0;
    assert!(corr.abs() < 0.05, "{corr}");
}
