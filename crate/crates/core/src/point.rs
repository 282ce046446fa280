use alloc::vec;
use alloc::vec::Vec;

use crate::C64;

/// Which summand of a direct sum a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// An element of a kernel's domain: a complex scalar (disk, plane) or a complex
/// vector (ball), optionally tagged with the direct-sum summands it lives in.
///
/// The tag path is read outermost first: a point on the left summand of a
/// direct sum whose left operand is itself a direct sum carries two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<C64>,
    sides: Vec<Side>,
}

impl Point {
    pub fn scalar(z: C64) -> Self {
        Point {
            coords: vec![z],
            sides: Vec::new(),
        }
    }

    pub fn real(x: f64) -> Self {
        Self::scalar(C64::new(x, 0.0))
    }

    pub fn new(re: f64, im: f64) -> Self {
        Self::scalar(C64::new(re, im))
    }

    pub fn vector(coords: Vec<C64>) -> Self {
        Point {
            coords,
            sides: Vec::new(),
        }
    }

    pub fn with_sides(coords: Vec<C64>, sides: Vec<Side>) -> Self {
        Point { coords, sides }
    }

    /// Tags the point as living on the given summand of a direct sum.
    pub fn on(mut self, side: Side) -> Self {
        self.sides.insert(0, side);
        self
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The single coordinate of a scalar point.
    pub fn as_scalar(&self) -> Option<C64> {
        match self.coords.as_slice() {
            [z] => Some(*z),
            _ => None,
        }
    }

    pub(crate) fn view(&self) -> PointView<'_> {
        PointView {
            coords: &self.coords,
            sides: &self.sides,
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::real(x)
    }
}

impl From<C64> for Point {
    fn from(z: C64) -> Self {
        Point::scalar(z)
    }
}

/// Borrowed point with part of its side path already consumed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointView<'a> {
    pub coords: &'a [C64],
    pub sides: &'a [Side],
}

impl<'a> PointView<'a> {
    pub fn scalar(&self) -> C64 {
        self.coords[0]
    }

    /// Splits off the outermost side tag.
    pub fn pop_side(&self) -> Option<(Side, PointView<'a>)> {
        let (first, rest) = self.sides.split_first()?;
        Some((
            *first,
            PointView {
                coords: self.coords,
                sides: rest,
            },
        ))
    }
}
