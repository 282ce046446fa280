//! Parametric curves and partition-sum lengths.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::Distance;
use crate::{Error, Point, Result, C64};

pub const DEFAULT_INITIAL_SAMPLES: usize = 16;
pub const DEFAULT_REFINEMENTS: usize = 16;
/// Successive dyadic refinements closer than this are accepted as converged.
pub const LENGTH_TOLERANCE: f64 = 1e-8;

/// A continuous path `γ: [0, 1] → X`.
pub struct Curve<'a> {
    param: Box<dyn Fn(f64) -> Point + 'a>,
    derivative: Option<Box<dyn Fn(f64) -> C64 + 'a>>,
    /// Interior parameters where the curve may fail to be smooth.
    breaks: Vec<f64>,
    initial_samples: usize,
    refinements: usize,
}

impl core::fmt::Debug for Curve<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Curve")
            .field("start", &self.at(0.0))
            .field("end", &self.at(1.0))
            .field("initial_samples", &self.initial_samples)
            .field("refinements", &self.refinements)
            .finish()
    }
}

impl<'a> Curve<'a> {
    pub fn new<F: Fn(f64) -> Point + 'a>(param: F) -> Self {
        Curve {
            param: Box::new(param),
            derivative: None,
            breaks: Vec::new(),
            initial_samples: DEFAULT_INITIAL_SAMPLES,
            refinements: DEFAULT_REFINEMENTS,
        }
    }

    /// Straight segment from `a` to `b` in the plane.
    pub fn segment(a: C64, b: C64) -> Self {
        Curve::new(move |t| Point::scalar(a + (b - a) * t)).with_derivative(move |_| b - a)
    }

    /// Straight segment between two points of `ℂⁿ`.
    pub fn vector_segment(a: Point, b: Point) -> Result<Self> {
        if a.dim() != b.dim() || !a.sides().is_empty() || !b.sides().is_empty() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Curve::new(move |t| {
            Point::vector(
                a.coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(p, q)| p + (q - p) * t)
                    .collect(),
            )
        }))
    }

    /// Polygonal path through `vertices`, parametrized proportionally to Euclidean arc length.
    pub fn polyline(vertices: Vec<C64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Degenerate("a polyline needs at least two vertices"));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        let mut total = 0.0;
        cumulative.push(0.0);
        for w in vertices.windows(2) {
            total += (w[1] - w[0]).norm();
            cumulative.push(total);
        }
        let breaks: Vec<f64> = if total > 0.0 {
            cumulative[1..cumulative.len() - 1]
                .iter()
                .map(|c| c / total)
                .collect()
        } else {
            Vec::new()
        };
        let piece = {
            let cumulative = cumulative.clone();
            move |t: f64| -> usize {
                let s = t.clamp(0.0, 1.0) * total;
                cumulative
                    .partition_point(|c| *c <= s)
                    .clamp(1, cumulative.len() - 1)
            }
        };
        let slopes: Vec<C64> = vertices
            .windows(2)
            .zip(cumulative.windows(2))
            .map(|(v, c)| {
                if c[1] > c[0] {
                    (v[1] - v[0]) * (total / (c[1] - c[0]))
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        let derivative_piece = piece.clone();
        Ok(Curve::new(move |t| {
            if total == 0.0 {
                return Point::scalar(vertices[0]);
            }
            let i = piece(t);
            let s = t.clamp(0.0, 1.0) * total;
            let (s0, s1) = (cumulative[i - 1], cumulative[i]);
            if s == s1 {
                return Point::scalar(vertices[i]);
            }
            let f = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
            Point::scalar(vertices[i - 1] + (vertices[i] - vertices[i - 1]) * f)
        })
        .with_derivative(move |t| {
            if total == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                slopes[derivative_piece(t) - 1]
            }
        })
        .with_breaks(breaks))
    }

    /// Supplies the exact derivative `γ'(t)`, used instead of finite differences.
    pub fn with_derivative<F: Fn(f64) -> C64 + 'a>(mut self, derivative: F) -> Self {
        self.derivative = Some(Box::new(derivative));
        self
    }

    /// Declares interior parameters where `γ` may have corners. Length partitions
    /// always contain them and quadratures split there.
    pub fn with_breaks(mut self, mut breaks: Vec<f64>) -> Self {
        breaks.retain(|t| *t > 0.0 && *t < 1.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        self.breaks = breaks;
        self
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn with_samples(mut self, initial_samples: usize, refinements: usize) -> Self {
        self.initial_samples = initial_samples.max(2);
        self.refinements = refinements;
        self
    }

    pub fn at(&self, t: f64) -> Point {
        (self.param)(t)
    }

    pub fn initial_samples(&self) -> usize {
        self.initial_samples
    }

    pub fn refinements(&self) -> usize {
        self.refinements
    }

    /// The exact derivative when one was supplied, otherwise a central
    /// difference with step `1 / (8 · initial_samples)`, one-sided at the ends of
    /// the parameter interval.
    pub fn tangent(&self, t: f64) -> Result<C64> {
        if let Some(d) = &self.derivative {
            return Ok(d(t));
        }
        let h = 1.0 / (8.0 * self.initial_samples as f64);
        let (lo, hi) = ((t - h).max(0.0), (t + h).min(1.0));
        let a = self.at(lo).as_scalar();
        let b = self.at(hi).as_scalar();
        match (a, b) {
            (Some(a), Some(b)) => Ok((b - a) / (hi - lo)),
            _ => Err(Error::Unsupported(
                "tangents are only defined for scalar curves".into(),
            )),
        }
    }
}

/// Result of a partition-sum length computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveLength {
    pub value: f64,
    /// Sum over the previous (coarser) partition.
    pub previous: f64,
    /// `|value - previous|`.
    pub error: f64,
    pub converged: bool,
    pub samples: usize,
}

/// Length of `curve` as the supremum of partition sums, approximated by dyadic
/// refinement until two successive sums differ by less than [`LENGTH_TOLERANCE`].
pub fn curve_length<D: Distance + ?Sized>(metric: &D, curve: &Curve<'_>) -> Result<CurveLength> {
    let n = curve.initial_samples.max(2);
    let mut ts: Vec<f64> = (0..=n)
        .map(|i| i as f64 / n as f64)
        .chain(curve.breaks.iter().copied())
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut points: Vec<Point> = ts.iter().map(|t| curve.at(*t)).collect();
    let segments: Vec<f64> = points
        .windows(2)
        .map(|w| metric.distance(&w[0], &w[1]))
        .collect::<Result<_>>()?;
    let mut sum = pairwise_sum(&segments);
    let mut previous = f64::NAN;
    let mut level = 0;
    loop {
        if level > 0 && (sum - previous).abs() < LENGTH_TOLERANCE {
            return Ok(CurveLength {
                value: sum,
                previous,
                error: (sum - previous).abs(),
                converged: true,
                samples: points.len() - 1,
            });
        }
        if level == curve.refinements {
            return Ok(CurveLength {
                value: sum,
                previous,
                error: (sum - previous).abs(),
                converged: false,
                samples: points.len() - 1,
            });
        }
        let mut next_ts = Vec::with_capacity(2 * ts.len());
        let mut next_points = Vec::with_capacity(2 * points.len());
        let mut next_segments = Vec::with_capacity(2 * points.len());
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                let t = 0.5 * (ts[i - 1] + ts[i]);
                let mid = curve.at(t);
                let prev = next_points.last().expect("previous point");
                next_segments.push(metric.distance(prev, &mid)?);
                next_segments.push(metric.distance(&mid, p)?);
                next_ts.push(t);
                next_points.push(mid);
            }
            next_ts.push(ts[i]);
            next_points.push(p.clone());
        }
        let next = pairwise_sum(&next_segments);
        if metric.is_metric() && next < sum - 1e-12 * (1.0 + sum) {
            return Err(Error::NonMonotone {
                previous: sum,
                next,
            });
        }
        previous = sum;
        sum = next;
        points = next_points;
        ts = next_ts;
        level += 1;
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}
