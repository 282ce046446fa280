//! Inner distance `σ*(x, y) = inf { ℓ_σ(γ) }` by shortest paths on a grid.
//!
//! The search runs Dijkstra on a square grid whose edges join nodes at most two
//! cells apart, weighted by the metric itself. The resulting path is shortened
//! by local vertex moves and finally measured with [`curve_length`].

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{curve_length, Curve, CurveLength, Distance};
use crate::kernels::Domain;
use crate::{Error, Point, Result, C64};

/// Grid parameters for [`inner_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearch {
    /// Cells per side of the bounding square; at most 400.
    pub resolution: usize,
    /// Passes of local path shortening after the graph search.
    pub smoothing_passes: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        GridSearch {
            resolution: 200,
            smoothing_passes: 200,
        }
    }
}

pub const MAX_RESOLUTION: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerDistance {
    pub value: f64,
    /// Length of the raw grid path.
    pub graph_length: f64,
    /// Direct distance `σ(x, y)`.
    pub direct: f64,
    /// Vertices of the smoothed path.
    pub path: Vec<C64>,
    pub length: CurveLength,
}

#[derive(Clone, Copy)]
struct Entry {
    cost: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed so that BinaryHeap pops the cheapest entry; ties broken by node index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

const OFFSETS: [(i64, i64); 12] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (2, 0),
    (-2, 0),
    (0, 2),
    (0, -2),
];

struct Grid {
    origin: C64,
    step: f64,
    side: usize,
    /// Node index per grid cell, `usize::MAX` outside the domain.
    index: Vec<usize>,
    coords: Vec<C64>,
}

impl Grid {
    fn build(domain: &Domain, x: C64, y: C64, resolution: usize) -> Result<Grid> {
        let (origin, width) = match domain {
            Domain::Disk => (C64::new(-1.0, -1.0), 2.0),
            Domain::Plane => {
                let pad = (x - y).norm().max(1.0);
                let lo = C64::new(x.re.min(y.re) - pad, x.im.min(y.im) - pad);
                let hi = C64::new(x.re.max(y.re) + pad, x.im.max(y.im) + pad);
                (lo, (hi.re - lo.re).max(hi.im - lo.im))
            }
            _ => {
                return Err(Error::Unsupported(
                    "inner distances are searched on disk and plane domains only".into(),
                ))
            }
        };
        let side = resolution + 1;
        let step = width / resolution as f64;
        let mut index = vec![usize::MAX; side * side];
        let mut coords = Vec::new();
        for j in 0..side {
            for i in 0..side {
                let z = origin + C64::new(i as f64 * step, j as f64 * step);
                let inside = match domain {
                    Domain::Disk => z.norm() < 1.0 - 0.25 * step,
                    _ => true,
                };
                if inside {
                    index[j * side + i] = coords.len();
                    coords.push(z);
                }
            }
        }
        Ok(Grid {
            origin,
            step,
            side,
            index,
            coords,
        })
    }

    fn cell(&self, node: usize) -> (i64, i64) {
        let z = self.coords[node];
        let i = ((z.re - self.origin.re) / self.step).round() as i64;
        let j = ((z.im - self.origin.im) / self.step).round() as i64;
        (i, j)
    }

    fn node_at(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i >= self.side as i64 || j >= self.side as i64 {
            return None;
        }
        let n = self.index[j as usize * self.side + i as usize];
        (n != usize::MAX).then_some(n)
    }

    /// Grid nodes within two cells of an off-grid point.
    fn attach(&self, z: C64) -> Vec<usize> {
        let ci = ((z.re - self.origin.re) / self.step).round() as i64;
        let cj = ((z.im - self.origin.im) / self.step).round() as i64;
        let mut out = Vec::new();
        for dj in -2..=2 {
            for di in -2..=2 {
                if let Some(n) = self.node_at(ci + di, cj + dj) {
                    if (self.coords[n] - z).norm() <= 2.0 * self.step {
                        out.push(n);
                    }
                }
            }
        }
        out
    }
}

/// Approximates the inner distance generated by `metric` between scalar points.
pub fn inner_distance<D: Distance + ?Sized>(
    metric: &D,
    domain: &Domain,
    x: &Point,
    y: &Point,
    search: &GridSearch,
) -> Result<InnerDistance> {
    domain.check_point(x)?;
    domain.check_point(y)?;
    let (zx, zy) = match (x.as_scalar(), y.as_scalar()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Unsupported(
                "inner distances are searched between scalar points only".into(),
            ))
        }
    };
    if search.resolution < 4 || search.resolution > MAX_RESOLUTION {
        return Err(Error::InvalidParameter(alloc::format!(
            "grid resolution must be in 4..={MAX_RESOLUTION}, got {}",
            search.resolution
        )));
    }
    let direct = metric.distance(x, y)?;
    if zx == zy {
        return Ok(InnerDistance {
            value: 0.0,
            graph_length: 0.0,
            direct,
            path: vec![zx],
            length: CurveLength {
                value: 0.0,
                previous: 0.0,
                error: 0.0,
                converged: true,
                samples: 0,
            },
        });
    }

    let grid = Grid::build(domain, zx, zy, search.resolution)?;
    let g = grid.coords.len();
    let (src, dst) = (g, g + 1);
    let src_links = grid.attach(zx);
    let dst_links = grid.attach(zy);
    if src_links.is_empty() || dst_links.is_empty() {
        return Err(Error::Resolution(
            "an endpoint has no grid node within two cells",
        ));
    }
    let node_point = |n: usize| -> Point {
        Point::scalar(match n {
            n if n == src => zx,
            n if n == dst => zy,
            n => grid.coords[n],
        })
    };
    let direct_link = (zx - zy).norm() <= 2.0 * grid.step;

    let mut dist = vec![f64::INFINITY; g + 2];
    let mut prev = vec![usize::MAX; g + 2];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry {
        cost: 0.0,
        node: src,
    });
    let mut neighbors = Vec::with_capacity(16);
    while let Some(Entry { cost, node }) = heap.pop() {
        if node == dst {
            break;
        }
        if cost > dist[node] {
            continue;
        }
        neighbors.clear();
        if node == src {
            neighbors.extend_from_slice(&src_links);
            if direct_link {
                neighbors.push(dst);
            }
        } else {
            let (i, j) = grid.cell(node);
            for (di, dj) in OFFSETS {
                if let Some(n) = grid.node_at(i + di, j + dj) {
                    neighbors.push(n);
                }
            }
            if dst_links.contains(&node) {
                neighbors.push(dst);
            }
        }
        let here = node_point(node);
        for &n in &neighbors {
            let w = metric.distance(&here, &node_point(n))?;
            let c = cost + w;
            if c < dist[n] {
                dist[n] = c;
                prev[n] = node;
                heap.push(Entry { cost: c, node: n });
            }
        }
    }
    if !dist[dst].is_finite() {
        return Err(Error::Resolution("the grid does not connect the endpoints"));
    }
    let graph_length = dist[dst];
    let mut path = Vec::new();
    let mut n = dst;
    while n != usize::MAX {
        path.push(node_point(n).coords()[0]);
        n = prev[n];
    }
    path.reverse();

    smooth(metric, domain, &mut path, search.smoothing_passes)?;
    let curve = Curve::polyline(path.clone())?.with_samples(2 * path.len(), 12);
    let length = curve_length(metric, &curve)?;
    let value = length.value;
    if value < direct - 1e-9 {
        return Err(Error::InnerBelowDirect {
            inner: value,
            direct,
        });
    }
    Ok(InnerDistance {
        value,
        graph_length,
        direct,
        path,
        length,
    })
}

/// Moves interior vertices towards the midpoint of their neighbours whenever
/// that shortens the two adjacent segments.
fn smooth<D: Distance + ?Sized>(
    metric: &D,
    domain: &Domain,
    path: &mut [C64],
    passes: usize,
) -> Result<()> {
    let d = |a: C64, b: C64| metric.distance(&Point::scalar(a), &Point::scalar(b));
    for _ in 0..passes {
        let mut improved = false;
        for i in 1..path.len().saturating_sub(1) {
            let (a, p, b) = (path[i - 1], path[i], path[i + 1]);
            let current = d(a, p)? + d(p, b)?;
            let mid = 0.5 * (a + b);
            for f in [1.0, 0.5, 0.25] {
                let q = p + (mid - p) * f;
                if domain.check_point(&Point::scalar(q)).is_err() {
                    continue;
                }
                let candidate = d(a, q)? + d(q, b)?;
                if candidate < current * (1.0 - 1e-15) {
                    path[i] = q;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(())
}
