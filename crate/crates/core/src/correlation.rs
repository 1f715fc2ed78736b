//! Finite-volume autocorrelation estimators.
//!
//! All estimators normalise by the full window size (the number of sites
//! for windows and rectangles, the disc area for point sets), not by the
//! overlap count at each lag. This introduces a deterministic
//! `(1 - |m|/N)` taper, negligible for `|m| << N`, and makes the
//! one-block periodogram exactly the Fourier series of the estimated
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::combs::{LatticeConfig2D, PointSet2D, SequenceWindow};
use crate::error::{Error, Result};

/// Lag-indexed autocorrelation coefficients with window metadata.
///
/// `L` is the lag type: `i64` for sequences, `[i64; 2]` for planar data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrelationEstimate<L> {
    lags: Vec<L>,
    coefficients: Vec<f64>,
    window_size: usize,
    label: String,
}

pub type Autocorrelation1D = AutocorrelationEstimate<i64>;
pub type Autocorrelation2D = AutocorrelationEstimate<[i64; 2]>;

impl<L: Copy + PartialEq> AutocorrelationEstimate<L> {
    pub fn lags(&self) -> &[L] {
        &self.lags
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Number of sites of the underlying window (points for point sets).
    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Coefficient at the given lag, if it was estimated.
    pub fn eta(&self, lag: L) -> Option<f64> {
        self.lags
            .iter()
            .position(|&l| l == lag)
            .map(|i| self.coefficients[i])
    }

    /// Checks the defining invariants of an estimate: `eta(0) >= 0`,
    /// symmetry under lag negation and `|eta(m)| <= eta(0)`.
    pub fn validate(&self, negate: impl Fn(L) -> L) -> Result<()> {
        let zero = self
            .lags
            .iter()
            .position(|&l| negate(l) == l)
            .ok_or_else(|| Error::invalid("estimate lacks the zero lag"))?;
        let eta0 = self.coefficients[zero];
        if eta0 < 0.0 {
            return Err(Error::invalid("eta(0) must be nonnegative"));
        }
        for (i, &lag) in self.lags.iter().enumerate() {
            let mirrored = self
                .eta(negate(lag))
                .ok_or_else(|| Error::invalid("lag set not symmetric"))?;
            if mirrored != self.coefficients[i] {
                return Err(Error::invalid("eta(-m) differs from eta(m)"));
            }
            if self.coefficients[i].abs() > eta0 + 1e-12 {
                return Err(Error::invalid("|eta(m)| exceeds eta(0)"));
            }
        }
        Ok(())
    }
}

/// Default lag cutoff: `min(128, n/64)`, clamped to a valid lag range.
pub fn default_max_lag(n: usize) -> usize {
    (n / 64).clamp(1, 128).min(n.saturating_sub(1))
}

/// Autocorrelation of a 1D window: `eta(m) = (1/N) sum_n w(n) w(n+m)`
/// over all in-window pairs, for `|m| <= max_lag`.
pub fn autocorr_1d(w: &SequenceWindow, max_lag: usize) -> Result<Autocorrelation1D> {
    let n = w.len();
    if max_lag >= n {
        return Err(Error::invalid(format!(
            "max lag {max_lag} must be smaller than the window size {n}"
        )));
    }
    let v = w.weights();
    let mut positive = Vec::with_capacity(max_lag + 1);
    for m in 0..=max_lag {
        let mut acc = 0.0;
        for i in 0..n - m {
            acc += v[i] * v[i + m];
        }
        positive.push(acc / n as f64);
    }
    let mut lags = Vec::with_capacity(2 * max_lag + 1);
    let mut coefficients = Vec::with_capacity(2 * max_lag + 1);
    for m in (1..=max_lag).rev() {
        lags.push(-(m as i64));
        coefficients.push(positive[m]);
    }
    for (m, &c) in positive.iter().enumerate() {
        lags.push(m as i64);
        coefficients.push(c);
    }
    Ok(AutocorrelationEstimate {
        lags,
        coefficients,
        window_size: n,
        label: w.label().to_string(),
    })
}

/// Autocorrelation of a 2D configuration for all lags with
/// `|m1|, |m2| <= max_lag`, normalised by `W * H`.
pub fn autocorr_2d(c: &LatticeConfig2D, max_lag: usize) -> Result<Autocorrelation2D> {
    let (w, h) = (c.width(), c.height());
    if max_lag >= w.min(h) {
        return Err(Error::invalid(format!(
            "max lag {max_lag} must be smaller than min(width, height) = {}",
            w.min(h)
        )));
    }
    let ml = max_lag as i64;
    let norm = (w * h) as f64;
    let mut lags = Vec::new();
    let mut coefficients = Vec::new();
    for m2 in -ml..=ml {
        for m1 in -ml..=ml {
            // Compute the upper half; mirror the rest from symmetry.
            if m2 < 0 || (m2 == 0 && m1 < 0) {
                continue;
            }
            let mut acc = 0.0;
            let col_lo = 0.max(-m1) as usize;
            let col_hi = (w as i64).min(w as i64 - m1) as usize;
            let row_lo = 0.max(-m2) as usize;
            let row_hi = (h as i64).min(h as i64 - m2) as usize;
            for row in row_lo..row_hi {
                let partner_row = (row as i64 + m2) as usize;
                for col in col_lo..col_hi {
                    let partner_col = (col as i64 + m1) as usize;
                    acc += c.at(col, row) * c.at(partner_col, partner_row);
                }
            }
            lags.push([m1, m2]);
            coefficients.push(acc / norm);
        }
    }
    let half = lags.len();
    let mut full_lags = Vec::with_capacity(2 * half - 1);
    let mut full_coeffs = Vec::with_capacity(2 * half - 1);
    for i in (1..half).rev() {
        full_lags.push([-lags[i][0], -lags[i][1]]);
        full_coeffs.push(coefficients[i]);
    }
    full_lags.extend_from_slice(&lags);
    full_coeffs.extend_from_slice(&coefficients);
    Ok(AutocorrelationEstimate {
        lags: full_lags,
        coefficients: full_coeffs,
        window_size: w * h,
        label: c.label().to_string(),
    })
}

/// Occupancy autocorrelation of a point set inside its disc:
/// `eta(z) = #{x : x in V, x + z in V} / (pi R^2)` for `|z|_inf <= max_lag`.
pub fn autocorr_pointset(ps: &PointSet2D, max_lag: usize) -> Result<Autocorrelation2D> {
    if max_lag as f64 > ps.window_radius() / 2.0 {
        return Err(Error::invalid(
            "max lag must not exceed half the window radius",
        ));
    }
    let bitmap = Bitmap2D::from_points(ps);
    let area = ps.disc_area();
    let ml = max_lag as i64;
    let mut lags = Vec::new();
    let mut coefficients = Vec::new();
    for m2 in -ml..=ml {
        for m1 in -ml..=ml {
            if m2 < 0 || (m2 == 0 && m1 < 0) {
                continue;
            }
            let mut count = 0u64;
            for &(x, y) in ps.points() {
                if bitmap.contains(x + m1, y + m2) {
                    count += 1;
                }
            }
            lags.push([m1, m2]);
            coefficients.push(count as f64 / area);
        }
    }
    let half = lags.len();
    let mut full_lags = Vec::with_capacity(2 * half - 1);
    let mut full_coeffs = Vec::with_capacity(2 * half - 1);
    for i in (1..half).rev() {
        full_lags.push([-lags[i][0], -lags[i][1]]);
        full_coeffs.push(coefficients[i]);
    }
    full_lags.extend_from_slice(&lags);
    full_coeffs.extend_from_slice(&coefficients);
    Ok(AutocorrelationEstimate {
        lags: full_lags,
        coefficients: full_coeffs,
        window_size: ps.len(),
        label: format!("points(R={})", ps.window_radius()),
    })
}

/// Dense occupancy bitmap over the bounding square of a point set.
pub(crate) struct Bitmap2D {
    bits: Vec<u64>,
    half_span: i64,
    side: i64,
}

impl Bitmap2D {
    pub(crate) fn from_points(ps: &PointSet2D) -> Self {
        let half_span = ps.window_radius().floor() as i64;
        let side = 2 * half_span + 1;
        let cells = (side * side) as usize;
        let mut bits = vec![0u64; cells.div_ceil(64)];
        for &(x, y) in ps.points() {
            let idx = ((y + half_span) * side + (x + half_span)) as usize;
            bits[idx / 64] |= 1 << (idx % 64);
        }
        Bitmap2D {
            bits,
            half_span,
            side,
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: i64, y: i64) -> bool {
        if x < -self.half_span || x > self.half_span || y < -self.half_span || y > self.half_span {
            return false;
        }
        let idx = ((y + self.half_span) * self.side + (x + self.half_span)) as usize;
        self.bits[idx / 64] & (1 << (idx % 64)) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_bernoulli, gen_dimer, gen_ledrappier, gen_rudin_shapiro, gen_visible};
    use crate::rng::SeededRng;

    /// Independent O(N^2)-style oracle: for each lag scan every site and
    /// add the product when the partner is inside the window.
    fn brute_force_eta(w: &SequenceWindow, m: i64) -> f64 {
        let mut acc = 0.0;
        for (n, a) in w.sites() {
            if let Some(b) = w.value_at(n + m) {
                acc += a * b;
            }
        }
        acc / w.len() as f64
    }

    #[test]
    fn constant_window_taper() {
        let w = SequenceWindow::new(0, vec![1.0; 100], "const").unwrap();
        let est = autocorr_1d(&w, 10).unwrap();
        assert_eq!(est.eta(5), Some(0.95));
        assert_eq!(est.eta(-5), Some(0.95));
        assert_eq!(est.eta(0), Some(1.0));
    }

    #[test]
    fn matches_brute_force_exhaustively() {
        // Every ±1 window with up to 10 sites, all lags.
        for n in 1..=10usize {
            for pattern in 0u32..(1 << n) {
                let weights: Vec<f64> = (0..n)
                    .map(|i| if pattern >> i & 1 == 1 { 1.0 } else { -1.0 })
                    .collect();
                let w = SequenceWindow::new(-3, weights, "enum").unwrap();
                let est = autocorr_1d(&w, n - 1).unwrap();
                for m in -(n as i64 - 1)..=(n as i64 - 1) {
                    let expected = brute_force_eta(&w, m);
                    assert_eq!(est.eta(m), Some(expected), "n={n} pattern={pattern} m={m}");
                }
            }
        }
    }

    #[test]
    fn matches_brute_force_on_real_weights() {
        let rng = SeededRng::from_seed(17);
        let weights: Vec<f64> = (0..16).map(|i| rng.uniform_at(i) * 2.0 - 1.0).collect();
        let w = SequenceWindow::new(0, weights, "real").unwrap();
        let est = autocorr_1d(&w, 15).unwrap();
        for m in 0..16i64 {
            assert_eq!(est.eta(m), Some(brute_force_eta(&w, m)), "m={m}");
        }
    }

    #[test]
    fn rejects_oversized_lag() {
        let w = SequenceWindow::new(0, vec![1.0; 8], "x").unwrap();
        assert!(autocorr_1d(&w, 8).is_err());
        assert!(autocorr_1d(&w, 7).is_ok());
    }

    #[test]
    fn estimates_satisfy_invariants() {
        let w = gen_bernoulli(4096, 0.3, SeededRng::from_seed(5)).unwrap();
        let est = autocorr_1d(&w, 64).unwrap();
        est.validate(|l| -l).unwrap();

        let c = gen_ledrappier(64, 64, SeededRng::from_seed(5)).unwrap();
        let est2 = autocorr_2d(&c, 8).unwrap();
        est2.validate(|[a, b]| [-a, -b]).unwrap();
    }

    #[test]
    fn dimer_nearest_neighbour_anticorrelation() {
        let w = gen_dimer(1 << 16, SeededRng::from_seed(1)).unwrap();
        let est = autocorr_1d(&w, 4).unwrap();
        let eta1 = est.eta(1).unwrap();
        assert!((eta1 + 0.5).abs() < 0.02, "eta(1)={eta1}");
    }

    #[test]
    fn rudin_shapiro_correlations_vanish() {
        let w = gen_rudin_shapiro(0, (1 << 16) - 1).unwrap();
        let est = autocorr_1d(&w, 128).unwrap();
        let max_off = est
            .lags()
            .iter()
            .zip(est.coefficients())
            .filter(|(&l, _)| l != 0)
            .map(|(_, &c)| c.abs())
            .fold(0.0f64, f64::max);
        assert!(max_off <= 0.02, "max off-zero eta = {max_off}");
    }

    #[test]
    fn constant_2d_overlap() {
        let c = LatticeConfig2D::new((0, 0), 10, 10, vec![1.0; 100], "const").unwrap();
        let est = autocorr_2d(&c, 2).unwrap();
        assert_eq!(est.eta([1, 0]), Some(0.9));
        assert_eq!(est.eta([0, 0]), Some(1.0));
        assert_eq!(est.eta([-1, 0]), Some(0.9));
    }

    #[test]
    fn brute_force_2d_agreement() {
        let c = gen_ledrappier(9, 7, SeededRng::from_seed(3)).unwrap();
        let est = autocorr_2d(&c, 4).unwrap();
        for (idx, &[m1, m2]) in est.lags().iter().enumerate() {
            let mut acc = 0.0;
            for row in 0..7i64 {
                for col in 0..9i64 {
                    if let (Some(a), Some(b)) = (
                        c.value_at(col, row),
                        c.value_at(col + m1, row + m2),
                    ) {
                        acc += a * b;
                    }
                }
            }
            let expected = acc / 63.0;
            let got = est.coefficients()[idx];
            assert!(
                (got - expected).abs() < 1e-12,
                "lag ({m1},{m2}): {got} vs {expected}"
            );
        }
    }

    #[test]
    fn tensor_product_autocorrelation_factorises() {
        use crate::combs::tensor_product;
        let a = gen_rudin_shapiro(0, 255).unwrap();
        let b = gen_rudin_shapiro(0, 127).unwrap();
        let prod = tensor_product(&a, &b).unwrap();
        let est2 = autocorr_2d(&prod, 4).unwrap();
        let ea = autocorr_1d(&a, 4).unwrap();
        let eb = autocorr_1d(&b, 4).unwrap();
        for &[m1, m2] in est2.lags() {
            let got = est2.eta([m1, m2]).unwrap();
            let expected = ea.eta(m1).unwrap() * eb.eta(m2).unwrap();
            assert!(
                (got - expected).abs() < 1e-12,
                "lag ({m1},{m2}): {got} vs {expected}"
            );
        }
    }

    #[test]
    fn pointset_autocorrelation_basics() {
        let ps = gen_visible(40.0).unwrap();
        let est = autocorr_pointset(&ps, 2).unwrap();
        let eta0 = est.eta([0, 0]).unwrap();
        assert!((eta0 - ps.len() as f64 / ps.disc_area()).abs() < 1e-12);
        for &c in est.coefficients() {
            assert!(c <= eta0 + 1e-12);
            assert!(c >= 0.0);
        }
        est.validate(|[a, b]| [-a, -b]).unwrap();
        assert!(autocorr_pointset(&ps, 21).is_err());
    }

    #[test]
    fn pointset_brute_force_agreement() {
        let ps = gen_visible(15.0).unwrap();
        let est = autocorr_pointset(&ps, 3).unwrap();
        for &[m1, m2] in est.lags() {
            let count = ps
                .points()
                .iter()
                .filter(|&&(x, y)| ps.contains((x + m1, y + m2)))
                .count();
            let expected = count as f64 / ps.disc_area();
            assert_eq!(est.eta([m1, m2]), Some(expected));
        }
    }

    #[test]
    fn consistency_under_window_doubling() {
        // |eta_N(m) - eta_2N(m)| should shrink like N^{-1/2}; allow 3x a
        // unit constant, checked across 8 seeds.
        let n = 1 << 14;
        let bound = 3.0 / (n as f64).sqrt();
        for seed in 0..8 {
            let small = gen_bernoulli(n, 0.6, SeededRng::from_seed(seed)).unwrap();
            let large = gen_bernoulli(2 * n, 0.6, SeededRng::from_seed(seed)).unwrap();
            let es = autocorr_1d(&small, 8).unwrap();
            let el = autocorr_1d(&large, 8).unwrap();
            for m in 1..=8i64 {
                let d = (es.eta(m).unwrap() - el.eta(m).unwrap()).abs();
                assert!(d <= 3.0 * bound, "seed {seed} m {m}: {d} vs {bound}");
            }
        }
    }
}
