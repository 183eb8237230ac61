//! Undirected simple graphs and the builders for the topologies used by the games.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Immutable, connected, simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: usize,
    delta_min: usize,
    delta_max: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(invalid("graph needs at least one vertex"));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(invalid(format!("duplicate edge ({u},{})", w[0])));
            }
        }
        Self::from_adjacency(adj)
    }

    fn from_adjacency(adj: Vec<Vec<usize>>) -> Result<Graph> {
        let degrees = adj.iter().map(Vec::len);
        let delta_min = degrees.clone().min().unwrap_or(0);
        let delta_max = degrees.clone().max().unwrap_or(0);
        let edges = degrees.sum::<usize>() / 2;
        let g = Graph {
            adj,
            edges,
            delta_min,
            delta_max,
        };
        let comps = g.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected {
                vertex: comps[1][0],
                components: comps.len(),
            });
        }
        Ok(g)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Minimum degree δ.
    pub fn delta_min(&self) -> usize {
        self.delta_min
    }

    /// Maximum degree Δ.
    pub fn delta_max(&self) -> usize {
        self.delta_max
    }

    pub fn is_regular(&self) -> bool {
        self.delta_min == self.delta_max
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `C_n`: vertex `i` adjacent to `i±1 mod n`.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(invalid(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// `P_n`: two rows of `n/2` columns, rows wrap cyclically, plus one vertical
    /// edge per column. Vertex `row * (n/2) + col`.
    pub fn cylinder(n: usize) -> Result<Graph> {
        if n % 2 == 1 || n / 2 < 3 {
            return Err(invalid(format!(
                "cylinder needs even n with n/2 >= 3, got {n}"
            )));
        }
        let m = n / 2;
        let mut edges = Vec::with_capacity(3 * m);
        for c in 0..m {
            edges.push((c, (c + 1) % m));
            edges.push((m + c, m + (c + 1) % m));
            edges.push((c, m + c));
        }
        Graph::from_edges(n, &edges)
    }

    /// `T_n`: the `√n × √n` grid with wraparound in both directions, row-major.
    pub fn torus(n: usize) -> Result<Graph> {
        let s = exact_sqrt(n).filter(|&s| s >= 3).ok_or_else(|| {
            invalid(format!(
                "torus needs a perfect square n with side >= 3, got {n}"
            ))
        })?;
        let mut edges = Vec::with_capacity(2 * n);
        for r in 0..s {
            for c in 0..s {
                let v = r * s + c;
                edges.push((v, r * s + (c + 1) % s));
                edges.push((v, ((r + 1) % s) * s + c));
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// `R(p, δ)`: `a_i` joined to `b_i, ..., b_{i+δ-1}` (indices mod `p/2`).
    /// Vertex `a_i` is `i-1`, `b_i` is `p/2 + i - 1`.
    pub fn bipartite_regular(p: usize, delta: usize) -> Result<Graph> {
        if p % 2 == 1 || p == 0 {
            return Err(invalid(format!("R(p,delta) needs even p, got {p}")));
        }
        let q = p / 2;
        if delta == 0 || delta > q {
            return Err(invalid(format!(
                "R(p,delta) needs 1 <= delta <= p/2, got delta={delta}, p={p}"
            )));
        }
        let mut edges = Vec::with_capacity(q * delta);
        for i in 0..q {
            for d in 0..delta {
                edges.push((i, q + (i + d) % q));
            }
        }
        Graph::from_edges(p, &edges).map_err(|e| match e {
            Error::Disconnected { .. } => invalid(format!("R({p},{delta}) is disconnected")),
            other => other,
        })
    }

    /// Renders the graph in the edge-list format read by [`load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let s = (n as f64).sqrt().round() as usize;
    (s * s == n).then_some(s)
}

/// Parses whitespace-separated `u v` pairs, one edge per line, 0-indexed.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(i + 1, format!("expected two vertices, got {:?}", line)));
        }
        let parse = |f: &str| {
            f.parse::<usize>()
                .map_err(|_| err(i + 1, format!("not a vertex index: {f:?}")))
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(err(i + 1, format!("self-loop at vertex {u}")));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u.min(v), u.max(v)));
        lines.push(i + 1);
    }
    if edges.is_empty() {
        return Err(err(0, "no edges".into()));
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| (edges[i], lines[i]));
    for w in order.windows(2) {
        if edges[w[0]] == edges[w[1]] {
            let (u, v) = edges[w[1]];
            return Err(err(
                lines[w[1]],
                format!("duplicate edge {u} {v} (first on line {})", lines[w[0]]),
            ));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Graph> {
        parse_edge_list(s, Path::new("test"))
    }

    #[test]
    fn small_cycle() {
        let g = Graph::cycle(4).unwrap();
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!((g.delta_min(), g.delta_max()), (2, 2));
        assert_eq!(Graph::cycle(20).unwrap().edge_count(), 20);
        assert!(matches!(Graph::cycle(2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cylinders() {
        let g = Graph::cylinder(6).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(g.is_regular() && g.delta_min() == 3);
        assert!(g.has_edge(0, 3) && g.has_edge(0, 2) && g.has_edge(4, 5));
        assert_eq!(Graph::cylinder(40).unwrap().edge_count(), 60);
        assert!(Graph::cylinder(7).is_err());
        assert!(Graph::cylinder(4).is_err());
    }

    #[test]
    fn tori() {
        let g = Graph::torus(9).unwrap();
        assert_eq!(g.edge_count(), 18);
        assert_eq!(g.neighbors(0), &[1, 2, 3, 6]);
        assert_eq!(Graph::torus(400).unwrap().edge_count(), 800);
        assert_eq!(Graph::torus(900).unwrap().n(), 900);
        assert!(Graph::torus(10).is_err());
        assert!(Graph::torus(4).is_err());
    }

    #[test]
    fn bipartite_gadget() {
        let g = Graph::bipartite_regular(10, 3).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_regular() && g.delta_min() == 3);
        assert!(g.has_edge(4, 9) && g.has_edge(4, 5) && g.has_edge(4, 6));
        let k44 = Graph::bipartite_regular(8, 4).unwrap();
        assert_eq!(k44.edge_count(), 16);
        assert!(matches!(
            Graph::bipartite_regular(6, 1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(Graph::bipartite_regular(7, 2).is_err());
        assert!(Graph::bipartite_regular(8, 5).is_err());
    }

    #[test]
    fn loader() {
        let g = parse("0 1\n1 2\n2 0").unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 3));
        assert!(matches!(
            parse("0 1\n2 3"),
            Err(Error::Disconnected { vertex: 2, .. })
        ));
        assert!(matches!(parse("0 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse("0 1\n1 2\n2 1"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse("0 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("0 1 2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::torus(16).unwrap();
        assert_eq!(parse(&g.to_edge_list()).unwrap(), g);
    }
}
