use super::{Point, Region};
use crate::error::{Error, Result};

/// Finite union of disjoint open intervals, sorted by left endpoint.
/// Intervals that touch are merged on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    pairs: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &pairs {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidShape(format!("invalid interval ({a}, {b})")));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if let Some(last) = merged.last_mut() {
                if a < last.1 {
                    return Err(Error::OverlappingIntervals(last.0, last.1, a, b));
                }
                if a == last.1 {
                    last.1 = b;
                    continue;
                }
            }
            merged.push((a, b));
        }
        Ok(Self { pairs: merged })
    }

    pub fn single(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn volume(&self) -> Result<f64> {
        if self.pairs.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(crate::numeric::kahan_sum(self.pairs.iter().map(|(a, b)| b - a)))
    }

    pub fn translated(&self, shift: f64) -> Self {
        Self {
            pairs: self.pairs.iter().map(|(a, b)| (a + shift, b + shift)).collect(),
        }
    }

    /// Dilate about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0);
        Self {
            pairs: self.pairs.iter().map(|(a, b)| (a * factor, b * factor)).collect(),
        }
    }

    /// Endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<f64> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Length of the intersection with `other`.
    pub fn intersection_length(&self, other: &IntervalUnion) -> f64 {
        let mut total = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.pairs.len() && j < other.pairs.len() {
            let (a, b) = self.pairs[i];
            let (c, d) = other.pairs[j];
            let lo = a.max(c);
            let hi = b.min(d);
            if hi > lo {
                total += hi - lo;
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }
}

impl Region for IntervalUnion {
    fn dim(&self) -> usize {
        1
    }

    fn contains(&self, p: Point) -> bool {
        let x = p[0];
        let idx = self.pairs.partition_point(|&(a, _)| a < x);
        idx > 0 && x < self.pairs[idx - 1].1
    }

    fn bounding_box(&self) -> (Point, Point) {
        match (self.pairs.first(), self.pairs.last()) {
            (Some(f), Some(l)) => ([f.0, 0.0], [l.1, 0.0]),
            _ => ([0.0; 2], [0.0; 2]),
        }
    }

    fn volume(&self) -> f64 {
        self.pairs.iter().map(|(a, b)| b - a).sum()
    }
}

impl Region for &IntervalUnion {
    fn dim(&self) -> usize {
        1
    }
    fn contains(&self, p: Point) -> bool {
        Region::contains(*self, p)
    }
    fn bounding_box(&self) -> (Point, Point) {
        Region::bounding_box(*self)
    }
    fn volume(&self) -> f64 {
        Region::volume(*self)
    }
}
