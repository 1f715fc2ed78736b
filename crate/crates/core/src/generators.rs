//! Seeded, reproducible constructors for every system in the laboratory.
//!
//! Every generator is a pure function of its arguments and the
//! counter-based [`SeededRng`]: calling it twice with equal arguments
//! yields bit-identical output, and enlarging a window keeps the shared
//! sites unchanged (each logical purpose draws from its own stream,
//! indexed by site or pair ordinal).

use crate::combs::{LatticeConfig2D, PointSet2D, SequenceWindow};
use crate::error::{Error, Result};
use crate::rng::{streams, SeededRng};

/// i.i.d. `±1` weights on `[0, n)`: `+1` with probability `p`.
pub fn gen_bernoulli(n: usize, p: f64, rng: SeededRng) -> Result<SequenceWindow> {
    check_probability(p, "p")?;
    if n == 0 {
        return Err(Error::invalid("window length must be positive"));
    }
    let signs = rng.substream(streams::BERNOULLI_SIGNS);
    let weights = (0..n)
        .map(|i| if signs.bool_at(i as u64, p) { 1.0 } else { -1.0 })
        .collect();
    SequenceWindow::new(0, weights, format!("bernoulli(p={p})"))
}

/// Value `w(m)` of the two-sided binary Rudin-Shapiro chain.
///
/// The chain is anchored at `w(-1) = -1`, `w(0) = 1` and extended by
/// `w(4n+l) = w(n)` for `l` in `{0, 1}` and `w(4n+l) = (-1)^(n+l) w(n)`
/// for `l` in `{2, 3}`, where `l` is the Euclidean remainder of the
/// index mod 4 (so the recursion also determines all negative indices).
pub fn rudin_shapiro_value(index: i64) -> f64 {
    let mut m = index;
    let mut sign = 1.0;
    loop {
        match m {
            0 => return sign,
            -1 => return -sign,
            _ => {}
        }
        let l = m.rem_euclid(4);
        let n = (m - l) / 4;
        if l >= 2 && (n + l).rem_euclid(2) == 1 {
            sign = -sign;
        }
        m = n;
    }
}

/// Rudin-Shapiro weights on the inclusive index range `[lo, hi]`.
pub fn gen_rudin_shapiro(lo: i64, hi: i64) -> Result<SequenceWindow> {
    if lo > hi {
        return Err(Error::invalid("range start must not exceed range end"));
    }
    let weights = (lo..=hi).map(rudin_shapiro_value).collect();
    SequenceWindow::new(lo, weights, "rs")
}

/// Random sign-flipping of a `±1` window: each weight is kept with
/// probability `p` and flipped with probability `1 - p`, independently.
pub fn bernoullise(base: &SequenceWindow, p: f64, rng: SeededRng) -> Result<SequenceWindow> {
    check_probability(p, "p")?;
    if !base.is_spin_valued() {
        return Err(Error::invalid("bernoullisation needs a ±1-valued window"));
    }
    let flips = rng.substream(streams::FLIPS);
    let weights = base
        .sites()
        .map(|(n, w)| if flips.bool_at(n as u64, p) { w } else { -w })
        .collect();
    SequenceWindow::new(
        base.origin(),
        weights,
        format!("bernoullised-{}(p={p})", base.label()),
    )
}

/// Close-packed dimer window on `[0, n)`.
///
/// A parity offset in `{0, 1}` is drawn once; sites pair up as
/// `{2k+offset, 2k+offset+1}` and each full pair is decorated `(1, -1)`
/// or `(-1, 1)` with equal probability. A truncated half-pair at a
/// window edge gets an independent fair sign. The offset is recorded in
/// the label.
pub fn gen_dimer(n: usize, rng: SeededRng) -> Result<SequenceWindow> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::invalid("dimer window length must be even and >= 2"));
    }
    let offset = if rng.substream(streams::DIMER_PARITY).bool_at(0, 0.5) {
        1usize
    } else {
        0usize
    };
    let signs = rng.substream(streams::DIMER_SIGNS);
    let edge = rng.substream(streams::DIMER_EDGE);
    let mut weights = vec![0.0f64; n];
    if offset == 1 {
        weights[0] = edge.sign_at(0);
        weights[n - 1] = edge.sign_at((n - 1) as u64);
    }
    let mut site = offset;
    let mut pair = 0u64;
    while site + 1 < n {
        let first = signs.sign_at(pair);
        weights[site] = first;
        weights[site + 1] = -first;
        site += 2;
        pair += 1;
    }
    SequenceWindow::new(0, weights, format!("dimer(offset={offset})"))
}

/// Positions `n` with `w(n) = w(n+1)` (both sites inside the window).
pub fn match_set(w: &SequenceWindow) -> Vec<i64> {
    w.sites()
        .zip(w.sites().skip(1))
        .filter(|((_, a), (_, b))| a == b)
        .map(|((n, _), _)| n)
        .collect()
}

/// Sliding-pair factor `v(n) = -w(n) w(n+1)`; output is one site shorter.
pub fn dimer_factor(w: &SequenceWindow) -> Result<SequenceWindow> {
    if !w.is_spin_valued() {
        return Err(Error::invalid("factor map needs a ±1-valued window"));
    }
    if w.len() < 2 {
        return Err(Error::invalid("factor map needs at least two sites"));
    }
    let values = w.weights();
    let weights = values
        .windows(2)
        .map(|pair| -pair[0] * pair[1])
        .collect();
    SequenceWindow::new(w.origin(), weights, format!("factor-{}", w.label()))
}

/// Sample of the two-dimensional subshift defined by
/// `w(x) w(x+e1) w(x+e2) = 1`.
///
/// An i.i.d. fair bottom boundary row of `width + height - 1` signs is
/// drawn; the relation `w(x+e2) = w(x) w(x+e1)` then fills every higher
/// row, and the returned rectangle satisfies the relation at all
/// interior sites by construction.
pub fn gen_ledrappier(width: usize, height: usize, rng: SeededRng) -> Result<LatticeConfig2D> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("lattice dimensions must be at least 1x1"));
    }
    let row_stream = rng.substream(streams::LEDRAPPIER_ROW);
    let mut row: Vec<f64> = (0..width + height - 1)
        .map(|i| row_stream.sign_at(i as u64))
        .collect();
    let mut weights = Vec::with_capacity(width * height);
    weights.extend_from_slice(&row[..width]);
    for _ in 1..height {
        let next: Vec<f64> = row.windows(2).map(|p| p[0] * p[1]).collect();
        weights.extend_from_slice(&next[..width]);
        row = next;
    }
    LatticeConfig2D::new((0, 0), width, height, weights, "ledrappier")
}

/// i.i.d. fair `±1` configuration (full-shift sample), used as the
/// disordered control in patch-census experiments.
pub fn gen_full_shift_2d(width: usize, height: usize, rng: SeededRng) -> Result<LatticeConfig2D> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("lattice dimensions must be at least 1x1"));
    }
    let stream = rng.substream(streams::FULL_SHIFT_2D);
    let weights = (0..width * height)
        .map(|i| stream.sign_at(i as u64))
        .collect();
    LatticeConfig2D::new((0, 0), width, height, weights, "full-shift-2d")
}

/// Visible points of the square lattice inside the closed disc of the
/// given radius: all `(m, n) != (0, 0)` with `m^2 + n^2 <= radius^2` and
/// `gcd(|m|, |n|) = 1`.
pub fn gen_visible(radius: f64) -> Result<PointSet2D> {
    if !radius.is_finite() || radius < 1.0 {
        return Err(Error::invalid("radius must be at least 1"));
    }
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    let mut points = Vec::new();
    for m in -r..=r {
        let m2 = (m * m) as f64;
        if m2 > r2 {
            continue;
        }
        let span = (r2 - m2).sqrt().floor() as i64;
        for n in -span..=span {
            if (m * m + n * n) as f64 > r2 {
                continue;
            }
            if gcd(m.unsigned_abs(), n.unsigned_abs()) == 1 {
                points.push((m, n));
            }
        }
    }
    PointSet2D::new(points, radius)
}

/// Occupancy window on `[0, n)` for the lattice-with-random-odd-sites
/// example: weight 1 at every even site, weight 1 with probability `q`
/// (else 0) at every odd site.
pub fn gen_meyer_example(n: usize, q: f64, rng: SeededRng) -> Result<SequenceWindow> {
    check_probability(q, "q")?;
    if n == 0 {
        return Err(Error::invalid("window length must be positive"));
    }
    let occupancy = rng.substream(streams::MEYER_OCCUPANCY);
    let weights = (0..n)
        .map(|i| {
            if i % 2 == 0 || occupancy.bool_at(i as u64, q) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    SequenceWindow::new(0, weights, format!("meyer(q={q})"))
}

fn check_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> SeededRng {
        SeededRng::from_seed(seed)
    }

    #[test]
    fn bernoulli_limit_cases() {
        let all_plus = gen_bernoulli(100, 1.0, rng(5)).unwrap();
        assert!(all_plus.weights().iter().all(|&w| w == 1.0));
        let all_minus = gen_bernoulli(100, 0.0, rng(5)).unwrap();
        assert!(all_minus.weights().iter().all(|&w| w == -1.0));
    }

    #[test]
    fn bernoulli_balanced_mean() {
        let w = gen_bernoulli(100_000, 0.5, rng(1)).unwrap();
        let mean: f64 = w.weights().iter().sum::<f64>() / w.len() as f64;
        assert!(mean.abs() < 0.02, "mean={mean}");
    }

    #[test]
    fn bernoulli_rejects_bad_probability() {
        assert!(gen_bernoulli(10, 1.5, rng(0)).is_err());
        assert!(gen_bernoulli(10, -0.1, rng(0)).is_err());
    }

    #[test]
    fn rudin_shapiro_initial_conditions() {
        assert_eq!(rudin_shapiro_value(0), 1.0);
        assert_eq!(rudin_shapiro_value(-1), -1.0);
    }

    #[test]
    fn rudin_shapiro_first_values() {
        // Hand-applied recursion with n = 0.
        assert_eq!(rudin_shapiro_value(1), 1.0);
        assert_eq!(rudin_shapiro_value(2), 1.0);
        assert_eq!(rudin_shapiro_value(3), -1.0);
        // -2 = 4*(-1) + 2, so w(-2) = (-1)^(-1+2) w(-1) = 1.
        assert_eq!(rudin_shapiro_value(-2), 1.0);
    }

    #[test]
    fn rudin_shapiro_window_0_to_7() {
        let w = gen_rudin_shapiro(0, 7).unwrap();
        let expected = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
        assert_eq!(w.weights(), &expected);
    }

    #[test]
    fn rudin_shapiro_range_independence() {
        let wide = gen_rudin_shapiro(-40, 40).unwrap();
        let narrow = gen_rudin_shapiro(-3, 11).unwrap();
        for (n, v) in narrow.sites() {
            assert_eq!(wide.value_at(n), Some(v), "index {n}");
        }
        assert!(gen_rudin_shapiro(3, 2).is_err());
    }

    #[test]
    fn bernoullise_limit_cases() {
        let base = gen_rudin_shapiro(0, 63).unwrap();
        let kept = bernoullise(&base, 1.0, rng(7)).unwrap();
        assert_eq!(kept.weights(), base.weights());
        let flipped = bernoullise(&base, 0.0, rng(7)).unwrap();
        for (a, b) in base.weights().iter().zip(flipped.weights()) {
            assert_eq!(*b, -*a);
        }
    }

    #[test]
    fn bernoullise_flip_fraction() {
        let base = gen_rudin_shapiro(0, 100_000 - 1).unwrap();
        let out = bernoullise(&base, 0.5, rng(7)).unwrap();
        let flips = base
            .weights()
            .iter()
            .zip(out.weights())
            .filter(|(a, b)| *a != *b)
            .count();
        let fraction = flips as f64 / base.len() as f64;
        assert!((fraction - 0.5).abs() < 0.02, "fraction={fraction}");
    }

    #[test]
    fn dimer_pairs_sum_to_zero() {
        for seed in 0..8 {
            let w = gen_dimer(1 << 10, rng(seed)).unwrap();
            let offset = if w.label().contains("offset=1") { 1 } else { 0 };
            let mut site = offset;
            while site + 1 < w.len() {
                let a = w.weights()[site];
                let b = w.weights()[site + 1];
                assert_eq!(a + b, 0.0, "pair at {site} (seed {seed})");
                site += 2;
            }
        }
    }

    #[test]
    fn dimer_mean_near_zero() {
        let w = gen_dimer(100_000, rng(3)).unwrap();
        let mean: f64 = w.weights().iter().sum::<f64>() / w.len() as f64;
        assert!(mean.abs() < 0.02, "mean={mean}");
    }

    #[test]
    fn dimer_match_set_parity_is_constant() {
        for seed in 0..8 {
            let w = gen_dimer(1 << 12, rng(seed)).unwrap();
            let offset = if w.label().contains("offset=1") { 1 } else { 0 };
            // Restrict to fully paired sites: matches may only sit at pair
            // boundaries, which all share one parity class.
            let lo = offset as i64;
            let hi = w.len() as i64 - 1 - offset as i64;
            let matches: Vec<i64> = match_set(&w)
                .into_iter()
                .filter(|&n| n >= lo && n < hi)
                .collect();
            if let Some(&first) = matches.first() {
                assert!(matches.iter().all(|&n| (n - first) % 2 == 0));
            }
        }
    }

    #[test]
    fn alternating_sequences_have_empty_match_set() {
        let alt: Vec<f64> = (0..64).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let w = SequenceWindow::new(0, alt, "periodic").unwrap();
        assert!(match_set(&w).is_empty());
        let neg: Vec<f64> = w.weights().iter().map(|v| -v).collect();
        let w2 = SequenceWindow::new(0, neg, "periodic").unwrap();
        assert!(match_set(&w2).is_empty());
    }

    #[test]
    fn dimer_rejects_odd_or_tiny() {
        assert!(gen_dimer(7, rng(0)).is_err());
        assert!(gen_dimer(0, rng(0)).is_err());
    }

    #[test]
    fn factor_of_alternating_is_all_ones() {
        let w = SequenceWindow::new(0, vec![1.0, -1.0, 1.0, -1.0], "alt").unwrap();
        let v = dimer_factor(&w).unwrap();
        assert_eq!(v.weights(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn factor_identifies_global_sign() {
        let w = gen_dimer(256, rng(11)).unwrap();
        let neg =
            SequenceWindow::new(0, w.weights().iter().map(|v| -v).collect(), "neg").unwrap();
        assert_eq!(
            dimer_factor(&w).unwrap().weights(),
            dimer_factor(&neg).unwrap().weights()
        );
    }

    #[test]
    fn factor_of_dimer_is_one_on_a_parity_class() {
        for seed in 0..8 {
            let w = gen_dimer(1 << 10, rng(seed)).unwrap();
            let offset = if w.label().contains("offset=1") { 1 } else { 0 };
            let v = dimer_factor(&w).unwrap();
            // v(n) = 1 at every intra-pair position.
            let mut n = offset;
            while n + 1 < w.len() {
                assert_eq!(v.weights()[n], 1.0);
                n += 2;
            }
        }
    }

    #[test]
    fn factor_rejects_short_windows() {
        let w = SequenceWindow::new(0, vec![1.0], "x").unwrap();
        assert!(dimer_factor(&w).is_err());
    }

    #[test]
    fn ledrappier_relation_holds_everywhere() {
        for seed in 0..8 {
            let c = gen_ledrappier(48, 32, rng(seed)).unwrap();
            assert_eq!(c.ledrappier_violations(), 0, "seed {seed}");
        }
    }

    #[test]
    fn ledrappier_hand_example() {
        // Bottom row (-1, +1, +1) for a 2x2 rectangle: second row is the
        // pairwise product (-1, +1).
        let mut weights = Vec::new();
        let row = [-1.0, 1.0, 1.0];
        weights.extend_from_slice(&row[..2]);
        let next: Vec<f64> = row.windows(2).map(|p| p[0] * p[1]).collect();
        weights.extend_from_slice(&next[..2]);
        let c = LatticeConfig2D::new((0, 0), 2, 2, weights, "ledrappier").unwrap();
        assert_eq!(c.at(0, 1), -1.0);
        assert_eq!(c.at(1, 1), 1.0);
        assert_eq!(c.ledrappier_violations(), 0);
    }

    #[test]
    fn visible_small_radius() {
        let ps = gen_visible(1.5).unwrap();
        let mut expected = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        expected.sort_unstable();
        assert_eq!(ps.points(), &expected[..]);
    }

    #[test]
    fn visible_excludes_non_coprime() {
        let ps = gen_visible(10.0).unwrap();
        assert!(!ps.contains((2, 2)));
        assert!(!ps.contains((0, 0)));
        assert!(!ps.contains((2, 0)));
        assert!(ps.contains((1, 0)));
        assert!(ps.contains((3, 2)));
    }

    #[test]
    fn visible_matches_brute_force() {
        let radius = 20.0;
        let ps = gen_visible(radius).unwrap();
        let r = radius as i64;
        let mut expected = Vec::new();
        for m in -r..=r {
            for n in -r..=r {
                if (m, n) == (0, 0) || ((m * m + n * n) as f64) > radius * radius {
                    continue;
                }
                if gcd(m.unsigned_abs(), n.unsigned_abs()) == 1 {
                    expected.push((m, n));
                }
            }
        }
        expected.sort_unstable();
        assert_eq!(ps.points(), &expected[..]);
    }

    #[test]
    fn visible_square_symmetry() {
        let ps = gen_visible(12.5).unwrap();
        let original = ps.points();
        for transform in [
            |(m, n): (i64, i64)| (-m, n),
            |(m, n): (i64, i64)| (m, -n),
            |(m, n): (i64, i64)| (n, m),
            |(m, n): (i64, i64)| (-n, -m),
        ] {
            let mut image: Vec<(i64, i64)> = original.iter().map(|&p| transform(p)).collect();
            image.sort_unstable();
            assert_eq!(original, &image[..]);
        }
    }

    #[test]
    fn meyer_limit_cases() {
        let evens = gen_meyer_example(10, 0.0, rng(2)).unwrap();
        assert_eq!(
            evens.weights(),
            &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]
        );
        let full = gen_meyer_example(10, 1.0, rng(2)).unwrap();
        assert!(full.weights().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn meyer_density() {
        let w = gen_meyer_example(100_000, 0.5, rng(4)).unwrap();
        let density = w.weights().iter().sum::<f64>() / w.len() as f64;
        assert!((density - 0.75).abs() < 0.01, "density={density}");
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            gen_bernoulli(512, 0.3, rng(9)).unwrap(),
            gen_bernoulli(512, 0.3, rng(9)).unwrap()
        );
        assert_eq!(gen_dimer(512, rng(9)).unwrap(), gen_dimer(512, rng(9)).unwrap());
        assert_eq!(
            gen_ledrappier(20, 20, rng(9)).unwrap(),
            gen_ledrappier(20, 20, rng(9)).unwrap()
        );
        assert_eq!(
            gen_meyer_example(512, 0.4, rng(9)).unwrap(),
            gen_meyer_example(512, 0.4, rng(9)).unwrap()
        );
        assert_eq!(gen_visible(30.0).unwrap(), gen_visible(30.0).unwrap());
    }

    #[test]
    fn growing_a_window_preserves_shared_sites() {
        let small = gen_bernoulli(1000, 0.5, rng(13)).unwrap();
        let large = gen_bernoulli(2000, 0.5, rng(13)).unwrap();
        assert_eq!(small.weights(), &large.weights()[..1000]);

        let meyer_small = gen_meyer_example(1000, 0.5, rng(13)).unwrap();
        let meyer_large = gen_meyer_example(2000, 0.5, rng(13)).unwrap();
        assert_eq!(meyer_small.weights(), &meyer_large.weights()[..1000]);

        // Dimer windows share everything except the truncated edge sites.
        let d_small = gen_dimer(1000, rng(13)).unwrap();
        let d_large = gen_dimer(2000, rng(13)).unwrap();
        let shared = &d_small.weights()[..998];
        assert_eq!(shared, &d_large.weights()[..998]);
    }
}
