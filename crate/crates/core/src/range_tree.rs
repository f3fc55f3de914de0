//! Static 2D orthogonal range reporting: a segment tree over the distinct
//! x-coordinates whose nodes keep their points sorted by y.

use serde::{Deserialize, Serialize};

use crate::graph::EdgeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: usize,
    pub y: usize,
    pub edge: EdgeId,
}

/// Closed axis-aligned rectangle; empty when a low bound exceeds its high.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: usize,
    pub x_hi: usize,
    pub y_lo: usize,
    pub y_hi: usize,
}

impl Rect {
    pub fn contains(&self, p: &Point) -> bool {
        (self.x_lo..=self.x_hi).contains(&p.x) && (self.y_lo..=self.y_hi).contains(&p.y)
    }

    pub fn is_empty(&self) -> bool {
        self.x_lo > self.x_hi || self.y_lo > self.y_hi
    }
}

#[derive(Clone, Debug)]
pub struct RangeTree2D {
    xs: Vec<usize>,
    /// Number of leaves, a power of two.
    width: usize,
    /// Heap-ordered nodes; each holds its points sorted by `(y, x, edge)`.
    nodes: Vec<Vec<Point>>,
    len: usize,
}

impl RangeTree2D {
    pub fn new(points: &[Point]) -> Self {
        let mut xs: Vec<usize> = points.iter().map(|p| p.x).collect();
        xs.sort_unstable();
        xs.dedup();
        let width = xs.len().next_power_of_two().max(1);
        let mut nodes = vec![Vec::new(); 2 * width];
        for p in points {
            let leaf = xs.binary_search(&p.x).expect("x present");
            nodes[width + leaf].push(*p);
        }
        let key = |p: &Point| (p.y, p.x, p.edge);
        for leaf in &mut nodes[width..] {
            leaf.sort_by_key(key);
        }
        for i in (1..width).rev() {
            let (a, b) = (&nodes[2 * i], &nodes[2 * i + 1]);
            let mut merged = Vec::with_capacity(a.len() + b.len());
            let (mut ia, mut ib) = (0, 0);
            while ia < a.len() || ib < b.len() {
                if ib == b.len() || (ia < a.len() && key(&a[ia]) <= key(&b[ib])) {
                    merged.push(a[ia]);
                    ia += 1;
                } else {
                    merged.push(b[ib]);
                    ib += 1;
                }
            }
            nodes[i] = merged;
        }
        RangeTree2D {
            xs,
            width,
            nodes,
            len: points.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Points inside `rect`, plus the number of tree nodes examined.
    pub fn report(&self, rect: &Rect) -> (Vec<Point>, usize) {
        let mut out = Vec::new();
        let visited = self.report_into(rect, &mut out);
        (out, visited)
    }

    /// Appends the points inside `rect` to `out`; returns nodes examined.
    pub fn report_into(&self, rect: &Rect, out: &mut Vec<Point>) -> usize {
        if rect.is_empty() {
            return 0;
        }
        let lo = self.xs.partition_point(|&x| x < rect.x_lo);
        let hi = self.xs.partition_point(|&x| x <= rect.x_hi);
        if lo >= hi {
            return 0;
        }
        let mut visited = 0;
        let (mut l, mut r) = (lo + self.width, hi + self.width);
        while l < r {
            if l & 1 == 1 {
                visited += 1;
                self.scan(l, rect, out);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                visited += 1;
                self.scan(r, rect, out);
            }
            l >>= 1;
            r >>= 1;
        }
        visited
    }

    fn scan(&self, node: usize, rect: &Rect, out: &mut Vec<Point>) {
        let pts = &self.nodes[node];
        let start = pts.partition_point(|p| p.y < rect.y_lo);
        out.extend(pts[start..].iter().take_while(|p| p.y <= rect.y_hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<Point> = (0..300)
            .map(|e| Point {
                x: rng.random_range(1..60),
                y: rng.random_range(1..60),
                edge: e,
            })
            .collect();
        let rt = RangeTree2D::new(&pts);
        for _ in 0..500 {
            let (a, b) = (rng.random_range(0..62), rng.random_range(0..62));
            let (c, d) = (rng.random_range(0..62), rng.random_range(0..62));
            let rect = Rect {
                x_lo: a,
                x_hi: b,
                y_lo: c,
                y_hi: d,
            };
            let (mut got, _) = rt.report(&rect);
            got.sort();
            let mut want: Vec<Point> = pts.iter().copied().filter(|p| rect.contains(p)).collect();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn empty_and_full() {
        let pts = vec![
            Point { x: 1, y: 2, edge: 0 },
            Point { x: 2, y: 1, edge: 0 },
        ];
        let rt = RangeTree2D::new(&pts);
        let none = Rect { x_lo: 3, x_hi: 1, y_lo: 0, y_hi: 9 };
        assert_eq!(rt.report(&none), (vec![], 0));
        let all = Rect { x_lo: 0, x_hi: 9, y_lo: 0, y_hi: 9 };
        assert_eq!(rt.report(&all).0.len(), 2);
    }
}
