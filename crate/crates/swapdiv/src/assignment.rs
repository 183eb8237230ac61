//! Type partitions and vertex labelings.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Number of types `t` and the per-type agent counts (types are `1..=t`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypePartition {
    counts: Vec<usize>,
}

impl TypePartition {
    pub fn new(counts: Vec<usize>) -> Result<TypePartition> {
        if counts.len() < 2 {
            return Err(invalid(format!(
                "need at least 2 types, got {}",
                counts.len()
            )));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(invalid(format!("type {} has no agents", i + 1)));
        }
        Ok(TypePartition { counts })
    }

    /// Realized counts of a labeling; degenerate labelings may leave a type empty.
    fn realized(counts: Vec<usize>) -> TypePartition {
        TypePartition { counts }
    }

    pub fn t(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Agents of type `ty` (1-based).
    pub fn count(&self, ty: usize) -> usize {
        self.counts[ty - 1]
    }

    /// Every count is `⌊n/t⌋` or `⌊n/t⌋ + 1`.
    pub fn is_equitable(&self) -> bool {
        let k = self.n() / self.t();
        self.counts.iter().all(|&c| c == k || c == k + 1)
    }
}

/// `n mod t` types of size `⌊n/t⌋+1` followed by the rest of size `⌊n/t⌋`.
pub fn equitable_partition(n: usize, t: usize) -> Result<TypePartition> {
    if t < 2 || t > n {
        return Err(invalid(format!(
            "equitable partition needs 2 <= t <= n, got t={t}, n={n}"
        )));
    }
    let (k, r) = (n / t, n % t);
    TypePartition::new((0..t).map(|i| if i < r { k + 1 } else { k }).collect())
}

/// Neighbor type counts of one vertex; `count(i)` is the number of type-`i` neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeVector {
    pub counts: Vec<usize>,
}

impl TypeVector {
    pub fn count(&self, ty: usize) -> usize {
        self.counts[ty - 1]
    }

    /// Types present in the neighborhood, `T(A)`.
    pub fn types(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i + 1)
    }

    pub fn norm_sq(&self) -> usize {
        self.counts.iter().map(|c| c * c).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomMode {
    /// Each label i.i.d. uniform on `1..=t`.
    #[default]
    UniformPerVertex,
    /// A uniformly shuffled equitable multiset of labels.
    EquitableShuffle,
}

impl FromStr for RandomMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-per-vertex" => Ok(RandomMode::UniformPerVertex),
            "equitable" | "equitable-shuffle" => Ok(RandomMode::EquitableShuffle),
            _ => Err(invalid(format!("unknown random mode {s:?}"))),
        }
    }
}

impl fmt::Display for RandomMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomMode::UniformPerVertex => "uniform-per-vertex",
            RandomMode::EquitableShuffle => "equitable-shuffle",
        })
    }
}

/// A labeling of the vertices of a graph with types `1..=t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment<'g> {
    graph: &'g Graph,
    labels: Vec<usize>,
    partition: TypePartition,
}

impl<'g> Assignment<'g> {
    /// Labels with `t >= 2` types; the partition is the realized label counts,
    /// which may include empty types (e.g. a single-type labeling).
    pub fn new(graph: &'g Graph, t: usize, labels: Vec<usize>) -> Result<Assignment<'g>> {
        if labels.len() != graph.n() {
            return Err(invalid(format!(
                "assignment has {} labels, graph has {} vertices",
                labels.len(),
                graph.n()
            )));
        }
        if t < 2 {
            return Err(invalid(format!("need at least 2 types, got {t}")));
        }
        let mut counts = vec![0; t];
        for (v, &l) in labels.iter().enumerate() {
            if l == 0 || l > t {
                return Err(invalid(format!(
                    "vertex {v} has label {l}, expected 1..={t}"
                )));
            }
            counts[l - 1] += 1;
        }
        let partition = TypePartition::realized(counts);
        Ok(Assignment {
            graph,
            labels,
            partition,
        })
    }

    /// Labels whose counts must match `partition` exactly.
    pub fn with_partition(
        graph: &'g Graph,
        partition: &TypePartition,
        labels: Vec<usize>,
    ) -> Result<Assignment<'g>> {
        let a = Assignment::new(graph, partition.t(), labels)?;
        if a.partition != *partition {
            return Err(invalid(format!(
                "label counts {:?} differ from partition {:?}",
                a.partition.counts(),
                partition.counts()
            )));
        }
        Ok(a)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn partition(&self) -> &TypePartition {
        &self.partition
    }

    pub fn t(&self) -> usize {
        self.partition.t()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Exchanges the agents on `u` and `v`.
    pub fn swap(&mut self, u: usize, v: usize) {
        self.labels.swap(u, v);
    }

    pub fn type_vector(&self, v: usize) -> TypeVector {
        let mut counts = vec![0; self.t()];
        for &w in self.graph.neighbors(v) {
            counts[self.labels[w] - 1] += 1;
        }
        TypeVector { counts }
    }

    /// Every neighbor shares the vertex's type.
    pub fn is_segregated(&self, v: usize) -> bool {
        let l = self.labels[v];
        self.graph.neighbors(v).iter().all(|&w| self.labels[w] == l)
    }

    /// Parses one line of `n` whitespace-separated labels. `t` defaults to the
    /// largest label present.
    pub fn parse(graph: &'g Graph, text: &str, t: Option<usize>) -> Result<Assignment<'g>> {
        let labels = text
            .split_whitespace()
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| invalid(format!("not a type label: {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = t.unwrap_or_else(|| labels.iter().copied().max().unwrap_or(0));
        Assignment::new(graph, t, labels)
    }

    /// Renders the labels on one line.
    pub fn to_line(&self) -> String {
        let mut s = self
            .labels
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        s.push('\n');
        s
    }
}

/// Seeded random labeling with `t` types.
pub fn random_assignment<'g>(
    graph: &'g Graph,
    t: usize,
    seed: u64,
    mode: RandomMode,
) -> Result<Assignment<'g>> {
    let n = graph.n();
    if t < 2 || t > n {
        return Err(invalid(format!(
            "random assignment needs 2 <= t <= n, got t={t}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = match mode {
        RandomMode::UniformPerVertex => loop {
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=t)).collect();
            let mut seen = vec![false; t];
            labels.iter().for_each(|&l| seen[l - 1] = true);
            if seen.iter().all(|&s| s) {
                break labels;
            }
        },
        RandomMode::EquitableShuffle => {
            let p = equitable_partition(n, t)?;
            let mut labels: Vec<usize> = p
                .counts()
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
                .collect();
            labels.shuffle(&mut rng);
            labels
        }
    };
    Assignment::new(graph, t, labels)
}
