//! The composite δ-regular graph `G*` built from bipartite gadgets.
//!
//! `G*` consists of `t-1` copies `H_1..H_{t-1}` of `R(k, δ-1)`, chained by
//! perfect matchings `b_{ij} ~ a_{i+1,j}` that skip `j = 1`, and one copy
//! `H_t` of `R(k, δ)` with the edges `a_{ti} b_{ti}` (`i < t`) removed. The
//! freed endpoints are reconnected as `b_{i1} ~ a_{ti}` and `a_{i1} ~ b_{ti}`.

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// Label of a `G*` vertex: copy `1..=t`, side, index `1..=k/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GVertex {
    pub copy: usize,
    pub side: Side,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct GStar {
    pub graph: Graph,
    pub t: usize,
    pub delta: usize,
    pub k: usize,
}

impl GStar {
    pub fn build(t: usize, delta: usize, k: usize) -> Result<GStar> {
        if t < 3 {
            return Err(invalid(format!("G* needs t >= 3, got {t}")));
        }
        if k % 2 == 1 {
            return Err(invalid(format!("G* needs even k, got {k}")));
        }
        if delta < 3 {
            return Err(invalid(format!(
                "G* needs delta - 1 >= 2, got delta={delta}"
            )));
        }
        let q = k / 2;
        if q < delta {
            return Err(invalid(format!(
                "G* needs k/2 >= delta, got k={k}, delta={delta}"
            )));
        }
        if k <= t || q < t - 1 {
            return Err(invalid(format!(
                "G* needs k > t and k/2 >= t-1, got k={k}, t={t}"
            )));
        }

        let id = |c, s, j| vertex_id(q, c, s, j);
        let mut edges = Vec::with_capacity(t * k * delta / 2);
        for i in 1..t {
            for j in 1..=q {
                for d in 0..delta - 1 {
                    edges.push((id(i, Side::A, j), id(i, Side::B, (j - 1 + d) % q + 1)));
                }
            }
        }
        for i in 1..t {
            let next = i % (t - 1) + 1;
            for j in 2..=q {
                edges.push((id(i, Side::B, j), id(next, Side::A, j)));
            }
        }
        for j in 1..=q {
            for d in 0..delta {
                let jb = (j - 1 + d) % q + 1;
                if j == jb && j < t {
                    continue;
                }
                edges.push((id(t, Side::A, j), id(t, Side::B, jb)));
            }
        }
        for i in 1..t {
            edges.push((id(i, Side::B, 1), id(t, Side::A, i)));
            edges.push((id(i, Side::A, 1), id(t, Side::B, i)));
        }

        let graph = Graph::from_edges(t * k, &edges)
            .map_err(|e| Error::Construction(format!("G*({t},{delta},{k}): {e}")))?;
        if !graph.is_regular() || graph.delta_min() != delta {
            return Err(Error::Construction(format!(
                "G*({t},{delta},{k}) has degrees {}..{}",
                graph.delta_min(),
                graph.delta_max()
            )));
        }
        Ok(GStar { graph, t, delta, k })
    }

    pub fn q(&self) -> usize {
        self.k / 2
    }

    pub fn vertex(&self, copy: usize, side: Side, index: usize) -> usize {
        vertex_id(self.q(), copy, side, index)
    }

    pub fn label(&self, v: usize) -> GVertex {
        let q = self.q();
        let block = v / q;
        GVertex {
            copy: block / 2 + 1,
            side: if block.is_multiple_of(2) {
                Side::A
            } else {
                Side::B
            },
            index: v % q + 1,
        }
    }
}

fn vertex_id(q: usize, copy: usize, side: Side, index: usize) -> usize {
    let s = match side {
        Side::A => 0,
        Side::B => 1,
    };
    ((copy - 1) * 2 + s) * q + index - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_instances() {
        for &(t, d, k) in &[(3, 4, 12), (4, 5, 20), (3, 7, 60), (4, 9, 120)] {
            let g = GStar::build(t, d, k).unwrap();
            assert_eq!(g.graph.n(), t * k);
            assert!(g.graph.is_regular());
            assert_eq!(g.graph.delta_min(), d);
        }
    }

    #[test]
    fn labels_round_trip() {
        let g = GStar::build(3, 4, 12).unwrap();
        for v in 0..g.graph.n() {
            let l = g.label(v);
            assert_eq!(g.vertex(l.copy, l.side, l.index), v);
        }
    }

    #[test]
    fn reconnections_present() {
        let g = GStar::build(3, 4, 12).unwrap();
        for i in 1..3 {
            assert!(g
                .graph
                .has_edge(g.vertex(i, Side::B, 1), g.vertex(3, Side::A, i)));
            assert!(g
                .graph
                .has_edge(g.vertex(i, Side::A, 1), g.vertex(3, Side::B, i)));
            assert!(!g
                .graph
                .has_edge(g.vertex(3, Side::A, i), g.vertex(3, Side::B, i)));
        }
        assert!(!g
            .graph
            .has_edge(g.vertex(1, Side::B, 1), g.vertex(2, Side::A, 1)));
        assert!(g
            .graph
            .has_edge(g.vertex(1, Side::B, 2), g.vertex(2, Side::A, 2)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            GStar::build(2, 4, 12),
            Err(Error::InvalidParameter(_))
        ));
        assert!(GStar::build(3, 4, 13).is_err());
        assert!(GStar::build(3, 2, 12).is_err());
        assert!(GStar::build(3, 7, 12).is_err());
        assert!(GStar::build(10, 3, 12).is_err());
    }
}
