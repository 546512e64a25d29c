//! Property tests for the library-wide invariants: codec round-trips,
//! luminance and fitness ranges, swarm bounds, determinism, and elitism.

use fkp_core::pnm::{read_pnm, write_pnm};
use fkp_core::sfa::{
    attractiveness, move_firefly, run, step, Firefly, Population, SelectMode, SfaParams, SfaRng,
};
use fkp_core::{Band, FitnessField, Grid, Image, IntegralImage};
use proptest::prelude::*;
use rand::SeedableRng;

fn gray_image() -> impl Strategy<Value = Image> {
    (1u32..=24, 1u32..=24).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), (w * h) as usize)
            .prop_map(move |data| Image::gray(w, h, data).unwrap())
    })
}

fn rgb_image() -> impl Strategy<Value = Image> {
    (1u32..=16, 1u32..=16).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), (3 * w * h) as usize)
            .prop_map(move |data| Image::rgb(w, h, data).unwrap())
    })
}

fn band() -> impl Strategy<Value = Band> {
    (0.0f64..=1.0, 0.0f64..=1.0)
        .prop_map(|(a, b)| if a <= b { Band::new(a, b).unwrap() } else { Band::new(b, a).unwrap() })
}

proptest! {
    #[test]
    fn pnm_round_trips_gray(img in gray_image()) {
        let decoded = read_pnm(&write_pnm(&img)).unwrap();
        prop_assert_eq!(img, decoded);
    }

    #[test]
    fn pnm_round_trips_rgb(img in rgb_image()) {
        let decoded = read_pnm(&write_pnm(&img)).unwrap();
        prop_assert_eq!(img, decoded);
    }

    #[test]
    fn luminance_stays_in_unit_range(img in rgb_image(), xf in 0.0f64..1.0, yf in 0.0f64..1.0) {
        let x = (xf * img.width() as f64) as u32;
        let y = (yf * img.height() as f64) as u32;
        let lum = img.luminance(x, y).unwrap();
        prop_assert!((0.0..=1.0).contains(&lum));
    }

    #[test]
    fn gray_luminance_is_strictly_monotone(a in 0u8..255, delta in 1u8..=255) {
        let b = a.saturating_add(delta);
        prop_assume!(b > a);
        let la = Image::constant(1, 1, a).luminance(0, 0).unwrap();
        let lb = Image::constant(1, 1, b).luminance(0, 0).unwrap();
        prop_assert!(lb > la);
    }

    #[test]
    fn fitness_matches_the_banded_ramp(img in gray_image(), band in band()) {
        let field = FitnessField::new(&img, band);
        for y in 0..img.height() {
            for x in 0..img.width() {
                let f = field.eval(x, y);
                prop_assert!((0.0..=1.0).contains(&f), "fitness {f} at ({x}, {y})");
                let lum = img.luminance(x, y).unwrap();
                let d = if lum < band.low() {
                    band.low() - lum
                } else if lum > band.high() {
                    lum - band.high()
                } else {
                    0.0
                };
                let expected = (1.0 - d / 0.25).max(0.0);
                prop_assert!((f - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn moves_stay_inside_the_field(
        w in 1u32..=64,
        h in 1u32..=64,
        ax in 0u32..64,
        ay in 0u32..64,
        tx in 0u32..64,
        ty in 0u32..64,
        mu in 0.0f64..4.0,
        beta_pop in 0.0f64..1.0,
        gamma in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let params = SfaParams { mu, beta_pop, gamma, ..SfaParams::default() };
        let a = Firefly { x: ax.min(w - 1), y: ay.min(h - 1), fitness: 0.0 };
        let t = Firefly { x: tx.min(w - 1), y: ty.min(h - 1), fitness: 1.0 };
        let mut rng = SfaRng::seed_from_u64(seed);
        let (nx, ny) = move_firefly(&a, Some(&t), &params, w, h, &mut rng);
        prop_assert!(nx < w && ny < h, "({nx}, {ny}) outside {w}x{h}");
    }

    #[test]
    fn attractiveness_strictly_decays(
        beta_pop in 0.05f64..1.0,
        gamma in 0.01f64..0.4,
        r in 0.0f64..39.0,
        delta in 0.001f64..1.0,
    ) {
        let params = SfaParams { beta_pop, gamma, ..SfaParams::default() };
        prop_assert!(attractiveness(&params, r) > attractiveness(&params, r + delta));
    }

    #[test]
    fn integral_matches_naive_summation(
        (w, h, values, x0, y0, x1, y1) in (1u32..=12, 1u32..=12).prop_flat_map(|(w, h)| {
            (
                Just(w),
                Just(h),
                prop::collection::vec(0u64..=3 * 255 * 255, (w * h) as usize),
                0..=w, 0..=h, 0..=w, 0..=h,
            )
        })
    ) {
        let (x0, x1) = (x0.min(x1), x0.max(x1));
        let (y0, y1) = (y0.min(y1), y0.max(y1));
        let grid = Grid::from_vec(w, h, values.clone());
        let ii = IntegralImage::build(&grid).unwrap();
        let naive: u64 = (y0..y1)
            .flat_map(|y| (x0..x1).map(move |x| (x, y)))
            .map(|(x, y)| values[(y * w + x) as usize])
            .sum();
        prop_assert_eq!(ii.sum_rect(x0, y0, x1, y1), naive);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn search_is_deterministic(img in gray_image(), seed in any::<u64>()) {
        let field = FitnessField::new(&img, Band::BRIGHT);
        let params = SfaParams { fireflies: 24, generations: 5, seed, ..SfaParams::default() };
        prop_assert_eq!(run(&field, &params).unwrap(), run(&field, &params).unwrap());
    }

    #[test]
    fn elite_fitness_never_degrades(img in gray_image(), seed in any::<u64>()) {
        let field = FitnessField::new(&img, Band::BRIGHT);
        let params = SfaParams { fireflies: 30, ..SfaParams::default() };
        let mut rng = SfaRng::seed_from_u64(seed);
        let mut pop = Population::random(&field, params.fireflies, &mut rng);
        let mut best = pop.best_fitness(SelectMode::Maximize).unwrap();
        for _ in 0..8 {
            pop = step(&pop, &field, &params, &mut rng);
            prop_assert_eq!(pop.members.len(), params.fireflies);
            let now = pop.best_fitness(SelectMode::Maximize).unwrap();
            prop_assert!(now >= best, "best fitness dropped from {best} to {now}");
            best = now;
        }
    }

    #[test]
    fn run_reports_the_retained_elite_sorted(
        img in gray_image(),
        fireflies in 3usize..60,
        ratio in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let params = SfaParams {
            fireflies,
            generations: 3,
            best_ratio: ratio,
            seed,
            ..SfaParams::default()
        };
        prop_assume!(params.validate().is_ok());
        let field = FitnessField::new(&img, Band::BRIGHT);
        let kps = run(&field, &params).unwrap();
        prop_assert_eq!(kps.len(), params.retained());
        for k in &kps {
            prop_assert!(k.x < img.width() as f64 && k.y < img.height() as f64);
            prop_assert_eq!(k.x, k.x.trunc());
            prop_assert_eq!(k.y, k.y.trunc());
        }
        for pair in kps.windows(2) {
            prop_assert!(pair[0].score >= pair[1].score);
        }
    }
}
