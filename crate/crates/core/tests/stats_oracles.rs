//! Distributional oracle for the ANOVA p-values: the incomplete-beta
//! survival function must agree with a large Monte Carlo simulation of
//! the F distribution on a fixed seed grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use persona_lab::stats::f_distribution_sf;

/// One standard normal via Box-Muller.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn chi_square(rng: &mut ChaCha8Rng, df: u32) -> f64 {
    (0..df).map(|_| standard_normal(rng).powi(2)).sum()
}

#[test]
fn f_survival_function_matches_monte_carlo() {
    // (df1, df2, f) grid covering the two-group ANOVA shapes used in the
    // reports, plus the hand-worked case.
    let grid = [
        (1u32, 4u32, 13.5f64),
        (1, 8, 2.0),
        (1, 18, 5.0),
        (1, 38, 1.0),
    ];
    let samples = 1_000_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(777);

    for (df1, df2, f_threshold) in grid {
        let mut exceed = 0u32;
        for _ in 0..samples {
            let numerator = chi_square(&mut rng, df1) / f64::from(df1);
            let denominator = chi_square(&mut rng, df2) / f64::from(df2);
            if numerator / denominator > f_threshold {
                exceed += 1;
            }
        }
        let mc_p = f64::from(exceed) / f64::from(samples);
        let analytic = f_distribution_sf(f64::from(df1), f64::from(df2), f_threshold);
        // Three Monte Carlo standard errors of a binomial proportion.
        let se = (analytic * (1.0 - analytic) / f64::from(samples)).sqrt();
        assert!(
            (mc_p - analytic).abs() <= 3.0 * se.max(1e-6),
            "df=({df1},{df2}) F={f_threshold}: MC {mc_p} vs analytic {analytic} (se {se})"
        );
    }
}
