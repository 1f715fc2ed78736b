//! Finite windows of weighted Dirac combs.
//!
//! [`SequenceWindow`] holds the weights of a comb on consecutive integers,
//! [`LatticeConfig2D`] a rectangle of `±1` weights on `Z^2`, and
//! [`PointSet2D`] a sparse occupancy set inside a disc. All three are
//! immutable after construction and safe to share across workers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite 1D window of weights `w(n)` on consecutive integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceWindow {
    origin: i64,
    weights: Vec<f64>,
    label: String,
}

impl SequenceWindow {
    /// Build a window holding the given weights verbatim, with `origin`
    /// the index of the first site.
    pub fn new(origin: i64, weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("window needs at least one weight"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("window weights must be finite"));
        }
        Ok(SequenceWindow {
            origin,
            weights,
            label: label.into(),
        })
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty windows
    }

    /// Index of the last site (inclusive).
    pub fn last_index(&self) -> i64 {
        self.origin + self.weights.len() as i64 - 1
    }

    /// Weight at the absolute site index, if inside the window.
    pub fn value_at(&self, index: i64) -> Option<f64> {
        if index < self.origin || index > self.last_index() {
            return None;
        }
        Some(self.weights[(index - self.origin) as usize])
    }

    /// Iterate `(site index, weight)` pairs in increasing index order.
    pub fn sites(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.origin + i as i64, w))
    }

    /// True when every weight is exactly `+1` or `-1`.
    pub fn is_spin_valued(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0 || w == -1.0)
    }

    /// True when every weight is exactly `0` or `1`.
    pub fn is_occupancy_valued(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }
}

/// Finite rectangle of `±1` weights on `Z^2`, stored row-major
/// (`x` runs along a row, `y` indexes rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig2D {
    origin: (i64, i64),
    width: usize,
    height: usize,
    weights: Vec<f64>,
    label: String,
}

impl LatticeConfig2D {
    /// Build a `width x height` configuration from row-major weights.
    pub fn new(
        origin: (i64, i64),
        width: usize,
        height: usize,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("lattice dimensions must be at least 1x1"));
        }
        if weights.len() != width * height {
            return Err(Error::invalid(format!(
                "expected {} weights for a {}x{} lattice, got {}",
                width * height,
                width,
                height,
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w != 1.0 && w != -1.0) {
            return Err(Error::invalid("lattice weights must be +1 or -1"));
        }
        Ok(LatticeConfig2D {
            origin,
            width,
            height,
            weights,
            label: label.into(),
        })
    }

    pub fn origin(&self) -> (i64, i64) {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Row-major weight storage.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at column `col`, row `row` (offsets from the origin corner).
    #[inline]
    pub fn at(&self, col: usize, row: usize) -> f64 {
        self.weights[row * self.width + col]
    }

    /// Weight at an absolute lattice point, if inside the rectangle.
    pub fn value_at(&self, x: i64, y: i64) -> Option<f64> {
        let col = x - self.origin.0;
        let row = y - self.origin.1;
        if col < 0 || row < 0 || col >= self.width as i64 || row >= self.height as i64 {
            return None;
        }
        Some(self.at(col as usize, row as usize))
    }

    /// Number of interior sites violating `w(x) w(x+e1) w(x+e2) = 1`.
    pub fn ledrappier_violations(&self) -> usize {
        let mut violations = 0;
        for row in 0..self.height.saturating_sub(1) {
            for col in 0..self.width.saturating_sub(1) {
                let product = self.at(col, row) * self.at(col + 1, row) * self.at(col, row + 1);
                if product != 1.0 {
                    violations += 1;
                }
            }
        }
        violations
    }
}

/// Sparse set of integer points inside the closed disc of radius
/// `window_radius` around the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet2D {
    points: Vec<(i64, i64)>,
    window_radius: f64,
}

impl PointSet2D {
    /// Build from a list of points; duplicates are rejected, every point
    /// must lie inside the disc.
    pub fn new(mut points: Vec<(i64, i64)>, window_radius: f64) -> Result<Self> {
        if !window_radius.is_finite() || window_radius < 1.0 {
            return Err(Error::invalid("window radius must be at least 1"));
        }
        let r2 = window_radius * window_radius;
        for &(m, n) in &points {
            let d2 = (m * m + n * n) as f64;
            if d2 > r2 {
                return Err(Error::invalid(format!(
                    "point ({m}, {n}) lies outside the radius-{window_radius} disc"
                )));
            }
        }
        points.sort_unstable();
        let before = points.len();
        points.dedup();
        if points.len() != before {
            return Err(Error::invalid("duplicate points in point set"));
        }
        Ok(PointSet2D {
            points,
            window_radius,
        })
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// Area `pi R^2` of the averaging disc.
    pub fn disc_area(&self) -> f64 {
        std::f64::consts::PI * self.window_radius * self.window_radius
    }
}

/// Pointwise product configuration `w(m, n) = a(m) b(n)`.
///
/// Columns are indexed by `a`, rows by `b`; both inputs must be
/// `±1`-valued.
pub fn tensor_product(a: &SequenceWindow, b: &SequenceWindow) -> Result<LatticeConfig2D> {
    if !a.is_spin_valued() || !b.is_spin_valued() {
        return Err(Error::invalid("tensor product needs ±1-valued windows"));
    }
    let width = a.len();
    let height = b.len();
    let mut weights = Vec::with_capacity(width * height);
    for &bv in b.weights() {
        for &av in a.weights() {
            weights.push(av * bv);
        }
    }
    LatticeConfig2D::new(
        (a.origin(), b.origin()),
        width,
        height,
        weights,
        format!("{}⊗{}", a.label(), b.label()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_stores_values_verbatim() {
        let w = SequenceWindow::new(0, vec![1.0, -1.0, 1.0], "test").unwrap();
        assert_eq!(w.value_at(0), Some(1.0));
        assert_eq!(w.value_at(1), Some(-1.0));
        assert_eq!(w.value_at(2), Some(1.0));
        assert_eq!(w.value_at(3), None);
    }

    #[test]
    fn window_with_negative_origin() {
        let w = SequenceWindow::new(-1, vec![-1.0, 1.0], "rs-seed").unwrap();
        assert_eq!(w.value_at(-1), Some(-1.0));
        assert_eq!(w.value_at(0), Some(1.0));
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(
            SequenceWindow::new(0, vec![], "x"),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn non_finite_weight_rejected() {
        assert!(SequenceWindow::new(0, vec![f64::NAN], "x").is_err());
    }

    #[test]
    fn tensor_product_sign_table() {
        let a = SequenceWindow::new(0, vec![1.0, -1.0], "a").unwrap();
        let b = SequenceWindow::new(0, vec![1.0, -1.0], "b").unwrap();
        let c = tensor_product(&a, &b).unwrap();
        assert_eq!(c.at(0, 0), 1.0);
        assert_eq!(c.at(1, 0), -1.0);
        assert_eq!(c.at(0, 1), -1.0);
        assert_eq!(c.at(1, 1), 1.0);
    }

    #[test]
    fn tensor_product_identity_row() {
        let a = SequenceWindow::new(0, vec![1.0], "a").unwrap();
        let b = SequenceWindow::new(0, vec![1.0, 1.0, 1.0], "b").unwrap();
        let c = tensor_product(&a, &b).unwrap();
        assert_eq!(c.width(), 1);
        assert_eq!(c.height(), 3);
        assert!(c.weights().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn tensor_product_pointwise() {
        let a = SequenceWindow::new(-2, vec![1.0, -1.0, -1.0, 1.0], "a").unwrap();
        let b = SequenceWindow::new(5, vec![-1.0, 1.0, -1.0], "b").unwrap();
        let c = tensor_product(&a, &b).unwrap();
        for (m, av) in a.sites() {
            for (n, bv) in b.sites() {
                assert_eq!(c.value_at(m, n), Some(av * bv));
            }
        }
    }

    #[test]
    fn tensor_product_rejects_non_spin() {
        let a = SequenceWindow::new(0, vec![1.0, 0.0], "a").unwrap();
        let b = SequenceWindow::new(0, vec![1.0], "b").unwrap();
        assert!(tensor_product(&a, &b).is_err());
    }

    #[test]
    fn lattice_rejects_bad_weights() {
        assert!(LatticeConfig2D::new((0, 0), 2, 1, vec![1.0, 0.5], "x").is_err());
        assert!(LatticeConfig2D::new((0, 0), 2, 1, vec![1.0], "x").is_err());
    }

    #[test]
    fn ledrappier_violation_counter() {
        // 2x2 all-ones satisfies the relation; one flipped corner breaks it.
        let good = LatticeConfig2D::new((0, 0), 2, 2, vec![1.0; 4], "L").unwrap();
        assert_eq!(good.ledrappier_violations(), 0);
        let bad = LatticeConfig2D::new((0, 0), 2, 2, vec![1.0, 1.0, -1.0, 1.0], "L").unwrap();
        assert_eq!(bad.ledrappier_violations(), 1);
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet2D::new(vec![(3, 0)], 2.0).is_err());
        assert!(PointSet2D::new(vec![(1, 0), (1, 0)], 2.0).is_err());
        let ps = PointSet2D::new(vec![(1, 0), (0, 1)], 1.5).unwrap();
        assert!(ps.contains((1, 0)));
        assert!(!ps.contains((1, 1)));
    }
}
