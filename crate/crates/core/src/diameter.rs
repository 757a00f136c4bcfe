//! Exact diameter of a finite point set.
//!
//! Level sets on fine lattices hold up to a few hundred thousand points, so the
//! quadratic pair scan is replaced by a kd-tree farthest-point search: for each
//! point, subtrees whose bounding box cannot beat the current best pair are
//! skipped. The result equals the brute-force maximum exactly.

const LEAF_SIZE: usize = 16;

struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

struct KdTree<'a> {
    points: &'a [Vec<f64>],
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    fn build(points: &'a [Vec<f64>]) -> Self {
        let mut tree = KdTree {
            points,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        tree.build_node(0, points.len());
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let d = self.points[0].len();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &i in &self.order[start..end] {
            for k in 0..d {
                lo[k] = lo[k].min(self.points[i][k]);
                hi[k] = hi[k].max(self.points[i][k]);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo: lo.clone(),
            hi: hi.clone(),
            start,
            end,
            children: None,
        });
        if end - start > LEAF_SIZE {
            let axis = (0..d)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            if hi[axis] > lo[axis] {
                let mid = start + (end - start) / 2;
                let points = self.points;
                self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                    points[a][axis].total_cmp(&points[b][axis])
                });
                let left = self.build_node(start, mid);
                let right = self.build_node(mid, end);
                self.nodes[id].children = Some((left, right));
            }
        }
        id
    }

    fn max_dist2_to_box(p: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
        p.iter()
            .zip(lo.iter().zip(hi))
            .map(|(v, (l, h))| {
                let d = (v - l).abs().max((h - v).abs());
                d * d
            })
            .sum()
    }

    fn farthest(&self, node: usize, p: &[f64], best2: &mut f64) {
        let n = &self.nodes[node];
        if Self::max_dist2_to_box(p, &n.lo, &n.hi) <= *best2 {
            return;
        }
        match n.children {
            None => {
                for &i in &self.order[n.start..n.end] {
                    let q = &self.points[i];
                    let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 > *best2 {
                        *best2 = d2;
                    }
                }
            }
            Some((a, b)) => {
                let da = Self::max_dist2_to_box(p, &self.nodes[a].lo, &self.nodes[a].hi);
                let db = Self::max_dist2_to_box(p, &self.nodes[b].lo, &self.nodes[b].hi);
                let (first, second) = if da >= db { (a, b) } else { (b, a) };
                self.farthest(first, p, best2);
                self.farthest(second, p, best2);
            }
        }
    }
}

/// Largest pairwise Euclidean distance; 0 for empty or singleton sets.
pub fn diameter(points: &[Vec<f64>]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    if points.len() <= 64 {
        return brute_force(points);
    }
    let tree = KdTree::build(points);
    let root = &tree.nodes[0];
    let mut best2 = 0.0f64;
    // Points near the box boundary are likely endpoints; visit them first.
    let mut visit: Vec<usize> = (0..points.len()).collect();
    let center: Vec<f64> = root.lo.iter().zip(&root.hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let key = |i: usize| -> f64 {
        points[i]
            .iter()
            .zip(&center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    };
    visit.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    for i in visit {
        let p = &points[i];
        if KdTree::max_dist2_to_box(p, &root.lo, &root.hi) <= best2 {
            continue;
        }
        tree.farthest(0, p, &mut best2);
    }
    best2.sqrt()
}

fn brute_force(points: &[Vec<f64>]) -> f64 {
    let mut best2 = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best2 = best2.max(d2);
        }
    }
    best2.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(diameter(&[]), 0.0);
        assert_eq!(diameter(&[vec![1.0, 2.0]]), 0.0);
        assert_eq!(diameter(&[vec![0.0, 0.0], vec![3.0, 4.0]]), 5.0);
    }

    #[test]
    fn lattice_square() {
        let mut pts = Vec::new();
        for i in 0..=20 {
            for j in 0..=20 {
                pts.push(vec![-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64]);
            }
        }
        assert!((diameter(&pts) - 8f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            raw in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 65..400)
        ) {
            prop_assert_eq!(diameter(&raw), brute_force(&raw));
        }
    }
}
