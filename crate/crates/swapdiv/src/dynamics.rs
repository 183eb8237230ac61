//! Improving-response swap dynamics, the monochromatic-edge potential, and the
//! exhaustive equilibrium verifier.

use std::cmp::Ordering;

use num::rational::Ratio;

use crate::assignment::Assignment;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::utility::{raw_utility, UtilityKind};

/// One executed swap. `pre_*` are the agents' utilities before the move,
/// `post_*` their utilities after it (the agent from `u` now sits on `v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapMove {
    pub u: usize,
    pub v: usize,
    pub pre_u: Ratio<i64>,
    pub pre_v: Ratio<i64>,
    pub post_u: Ratio<i64>,
    pub post_v: Ratio<i64>,
    pub potential_before: usize,
    pub potential_after: usize,
}

#[derive(Debug, Clone)]
pub struct RunTrace<'g> {
    pub kind: UtilityKind,
    pub initial: Assignment<'g>,
    pub moves: Vec<SwapMove>,
    pub final_assignment: Assignment<'g>,
    /// No improving swap remains in the final assignment.
    pub at_equilibrium: bool,
}

impl RunTrace<'_> {
    pub fn swap_count(&self) -> usize {
        self.moves.len()
    }

    pub fn truncated(&self) -> bool {
        !self.at_equilibrium
    }

    pub fn final_potential(&self) -> usize {
        potential(&self.final_assignment)
    }

    /// Move log as CSV with columns `step,u,v,potential`.
    pub fn move_log_csv(&self) -> String {
        let mut s = String::from("step,u,v,potential\n");
        for (i, m) in self.moves.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                m.u,
                m.v,
                m.potential_after
            ));
        }
        s
    }
}

/// Number of monochromatic edges.
pub fn potential(a: &Assignment<'_>) -> usize {
    let l = a.labels();
    a.graph().edges().filter(|&(u, v)| l[u] == l[v]).count()
}

/// Step cap that can never truncate a diversity run, and `10·|E|` for
/// similarity runs.
pub fn default_max_steps(kind: UtilityKind, graph: &Graph) -> usize {
    if kind.is_diversity() {
        graph.edge_count().div_ceil(2)
    } else {
        10 * graph.edge_count()
    }
}

/// Utility as an exact fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    fn cmp(self, other: Frac) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }

    fn ratio(self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }
}

/// Necessary-condition buckets that let the scan skip movers with no partner.
enum Filter {
    None,
    /// Segregated agents per type.
    Binary {
        seg: Vec<u32>,
    },
    /// Regular graphs: agents of type `b` indexed by (Π[b], other type a, Π[a]).
    Pair {
        d: usize,
        cnt: Vec<u32>,
        similarity: bool,
    },
    /// Agents of type `b` with `b ∈ T`, utility `U`, and type `a ∉ T`.
    Lemma {
        cnt: Vec<u32>,
    },
}

/// Incremental state of one run.
struct Engine<'g> {
    g: &'g Graph,
    kind: UtilityKind,
    t: usize,
    labels: Vec<usize>,
    /// `cnt[v*t + i]`: neighbors of `v` with type `i+1`.
    cnt: Vec<u32>,
    /// Distinct types among the neighbors of `v`.
    nz: Vec<u32>,
    util: Vec<Frac>,
    potential: usize,
    order: Vec<usize>,
    filter: Filter,
    scratch: Vec<usize>,
}

impl<'g> Engine<'g> {
    fn new(kind: UtilityKind, a: &Assignment<'g>) -> Engine<'g> {
        let g = a.graph();
        let (n, t) = (g.n(), a.t());
        let labels = a.labels().to_vec();
        let mut cnt = vec![0u32; n * t];
        let mut nz = vec![0u32; n];
        for v in 0..n {
            for &w in g.neighbors(v) {
                let c = &mut cnt[v * t + labels[w] - 1];
                if *c == 0 {
                    nz[v] += 1;
                }
                *c += 1;
            }
        }
        let filter = match kind {
            UtilityKind::Binary => Filter::Binary { seg: vec![0; t] },
            UtilityKind::VarietySeeking => Filter::Lemma {
                cnt: vec![0; t * t * t],
            },
            UtilityKind::DifferenceSeeking | UtilityKind::SimilaritySeeking if g.is_regular() => {
                let d = g.delta_max();
                Filter::Pair {
                    d,
                    cnt: vec![0; t * t * (d + 1) * (d + 1)],
                    similarity: kind == UtilityKind::SimilaritySeeking,
                }
            }
            _ => Filter::None,
        };
        let mut e = Engine {
            g,
            kind,
            t,
            labels,
            cnt,
            nz,
            util: vec![Frac { num: 0, den: 1 }; n],
            potential: potential(a),
            order: (0..n).collect(),
            filter,
            scratch: Vec::new(),
        };
        for v in 0..n {
            e.util[v] = e.compute_util(v);
            e.bucket(v, 1);
        }
        e
    }

    fn c(&self, v: usize, ty: usize) -> u32 {
        self.cnt[v * self.t + ty - 1]
    }

    fn compute_util(&self, v: usize) -> Frac {
        let own = self.labels[v];
        let deg = self.g.degree(v) as i64;
        let same = self.c(v, own) as i64;
        let num = match self.kind {
            UtilityKind::Binary => (deg > same) as i64,
            UtilityKind::DifferenceSeeking => deg - same,
            UtilityKind::VarietySeeking => self.nz[v] as i64 - (same > 0) as i64,
            UtilityKind::SimilaritySeeking => {
                return Frac {
                    num: same,
                    den: deg.max(1),
                }
            }
        };
        Frac { num, den: 1 }
    }

    /// Utility of an agent of type `own` moved onto `v`, whose partner of type
    /// `other` moves onto a vertex adjacent to `v` iff `adj`.
    fn moved_util(&self, v: usize, own: usize, other: usize, adj: bool) -> Frac {
        let deg = self.g.degree(v) as i64;
        let a = adj as i64;
        let same = self.c(v, own) as i64 - a;
        let num = match self.kind {
            UtilityKind::Binary => (deg > same) as i64,
            UtilityKind::DifferenceSeeking => deg - same,
            UtilityKind::VarietySeeking => {
                let mut nz = self.nz[v] as i64;
                if adj {
                    nz -= (self.c(v, own) == 1) as i64;
                    nz += (self.c(v, other) == 0) as i64;
                }
                nz - (same > 0) as i64
            }
            UtilityKind::SimilaritySeeking => {
                return Frac {
                    num: same,
                    den: deg.max(1),
                }
            }
        };
        Frac { num, den: 1 }
    }

    /// Post-swap utilities of the agents from `u` and `v` if both strictly gain.
    fn improving(&self, u: usize, v: usize) -> Option<(Frac, Frac)> {
        let (a, b) = (self.labels[u], self.labels[v]);
        if a == b {
            return None;
        }
        let adj = self.g.has_edge(u, v);
        let pu = self.moved_util(v, a, b, adj);
        if pu.cmp(self.util[u]) != Ordering::Greater {
            return None;
        }
        let pv = self.moved_util(u, b, a, adj);
        if pv.cmp(self.util[v]) != Ordering::Greater {
            return None;
        }
        Some((pu, pv))
    }

    fn bucket(&mut self, v: usize, delta: i32) {
        let t = self.t;
        let b = self.labels[v];
        let row = &self.cnt[v * t..(v + 1) * t];
        let add = |x: &mut u32| *x = (*x as i32 + delta) as u32;
        match &mut self.filter {
            Filter::None => {}
            Filter::Binary { seg } => {
                if row[b - 1] as usize == self.g.degree(v) {
                    add(&mut seg[b - 1]);
                }
            }
            Filter::Pair { d, cnt, .. } => {
                let d1 = *d + 1;
                let x = row[b - 1] as usize;
                for a in 1..=t {
                    if a != b {
                        let y = row[a - 1] as usize;
                        add(&mut cnt[(((b - 1) * d1 + x) * t + a - 1) * d1 + y]);
                    }
                }
            }
            Filter::Lemma { cnt } => {
                if row[b - 1] > 0 {
                    let u = self.util[v].num as usize;
                    for a in 1..=t {
                        if a != b && row[a - 1] == 0 {
                            add(&mut cnt[((b - 1) * t + u) * t + a - 1]);
                        }
                    }
                }
            }
        }
    }

    /// False only if `u` provably has no improving partner.
    fn maybe(&self, u: usize) -> bool {
        let t = self.t;
        let a = self.labels[u];
        let row = &self.cnt[u * t..(u + 1) * t];
        match &self.filter {
            Filter::None => true,
            Filter::Binary { seg } => {
                self.util[u].num == 0 && (1..=t).any(|b| b != a && seg[b - 1] > 0)
            }
            Filter::Pair { d, cnt, similarity } => {
                let d1 = *d + 1;
                let (ua, d) = (row[a - 1] as usize, *d);
                (1..=t).filter(|&b| b != a).any(|b| {
                    let ub = row[b - 1] as usize;
                    let (xs, ys) = if *similarity {
                        (0..ub, ua + 1..d + 1)
                    } else {
                        (ub..d + 1, 0..ua + 1)
                    };
                    xs.into_iter().any(|x| {
                        let base = (((b - 1) * d1 + x) * t + a - 1) * d1;
                        ys.clone().any(|y| cnt[base + y] > 0)
                    })
                })
            }
            Filter::Lemma { cnt } => {
                let uu = self.util[u].num as usize;
                row[a - 1] > 0
                    && (1..=t).any(|b| {
                        b != a && row[b - 1] == 0 && cnt[((b - 1) * t + uu) * t + a - 1] > 0
                    })
            }
        }
    }

    fn sort_order(&mut self) {
        let util = &self.util;
        self.order
            .sort_unstable_by(|&x, &y| util[x].cmp(util[y]).then(x.cmp(&y)));
    }

    fn find(&mut self) -> Option<(usize, usize, Frac, Frac)> {
        self.sort_order();
        for &u in &self.order {
            if !self.maybe(u) {
                continue;
            }
            for &v in &self.order {
                if let Some((pu, pv)) = self.improving(u, v) {
                    return Some((u, v, pu, pv));
                }
            }
        }
        None
    }

    fn incident_mono(&self, v: usize) -> usize {
        self.c(v, self.labels[v]) as usize
    }

    fn apply(&mut self, u: usize, v: usize) {
        let mut touched = std::mem::take(&mut self.scratch);
        touched.clear();
        touched.extend([u, v]);
        touched.extend_from_slice(self.g.neighbors(u));
        touched.extend_from_slice(self.g.neighbors(v));
        touched.sort_unstable();
        touched.dedup();
        for &w in &touched {
            self.bucket(w, -1);
        }

        let before = self.incident_mono(u) + self.incident_mono(v);
        let (a, b) = (self.labels[u], self.labels[v]);
        self.labels.swap(u, v);
        let t = self.t;
        for (x, from, to) in [(u, a, b), (v, b, a)] {
            for &w in self.g.neighbors(x) {
                let base = w * t;
                self.cnt[base + from - 1] -= 1;
                if self.cnt[base + from - 1] == 0 {
                    self.nz[w] -= 1;
                }
                if self.cnt[base + to - 1] == 0 {
                    self.nz[w] += 1;
                }
                self.cnt[base + to - 1] += 1;
            }
        }
        let after = self.incident_mono(u) + self.incident_mono(v);
        self.potential = self.potential + after - before;

        for &w in &touched {
            self.util[w] = self.compute_util(w);
            self.bucket(w, 1);
        }
        self.scratch = touched;
    }
}

/// The first improving swap in scan order: agents sorted ascending by
/// (utility, vertex index), partners scanned in the same order.
pub fn find_swap(kind: UtilityKind, a: &Assignment<'_>) -> Option<SwapMove> {
    let mut e = Engine::new(kind, a);
    let p = e.potential;
    e.find().map(|(u, v, pu, pv)| {
        let (pre_u, pre_v) = (e.util[u].ratio(), e.util[v].ratio());
        e.apply(u, v);
        SwapMove {
            u,
            v,
            pre_u,
            pre_v,
            post_u: pu.ratio(),
            post_v: pv.ratio(),
            potential_before: p,
            potential_after: e.potential,
        }
    })
}

/// Applies [`find_swap`] moves until none remains or `max_steps` moves were
/// made. Every diversity move is checked to lower the potential by at least 2.
pub fn run_to_equilibrium<'g>(
    kind: UtilityKind,
    a: &Assignment<'g>,
    max_steps: usize,
) -> Result<RunTrace<'g>> {
    let g = a.graph();
    if kind.is_diversity() && max_steps < g.edge_count().div_ceil(2) {
        return Err(invalid(format!(
            "max_steps {max_steps} is below the |E|/2 bound {}",
            g.edge_count().div_ceil(2)
        )));
    }
    let mut e = Engine::new(kind, a);
    let mut moves = Vec::new();
    let mut at_equilibrium = false;
    while moves.len() < max_steps {
        let Some((u, v, pu, pv)) = e.find() else {
            at_equilibrium = true;
            break;
        };
        let before = e.potential;
        let (pre_u, pre_v) = (e.util[u].ratio(), e.util[v].ratio());
        e.apply(u, v);
        if kind.is_diversity() && e.potential + 2 > before {
            return Err(Error::Invariant(format!(
                "{kind} swap ({u},{v}) changed the potential from {before} to {}",
                e.potential
            )));
        }
        moves.push(SwapMove {
            u,
            v,
            pre_u,
            pre_v,
            post_u: pu.ratio(),
            post_v: pv.ratio(),
            potential_before: before,
            potential_after: e.potential,
        });
    }
    if !at_equilibrium {
        at_equilibrium = e.find().is_none();
    }
    let final_assignment = Assignment::with_partition(g, a.partition(), e.labels)
        .map_err(|err| Error::Invariant(format!("swap changed the type counts: {err}")))?;
    Ok(RunTrace {
        kind,
        initial: a.clone(),
        moves,
        final_assignment,
        at_equilibrium,
    })
}

/// Result of the exhaustive equilibrium check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// First improving pair `(u, v)`, `u < v`, in lexicographic order.
    pub witness: Option<(usize, usize)>,
}

impl Verdict {
    pub fn is_equilibrium(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks every cross-type pair by evaluating both agents' utilities on the
/// post-swap labeling.
pub fn verify_equilibrium(kind: UtilityKind, a: &Assignment<'_>) -> Verdict {
    let g = a.graph();
    let labels = a.labels();
    let pre: Vec<(i64, i64)> = (0..g.n())
        .map(|v| raw_utility(kind, g, v, labels[v], |w| labels[w]))
        .collect();
    let less = |x: (i64, i64), y: (i64, i64)| x.0 * y.1 < y.0 * x.1;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let (lu, lv) = (labels[u], labels[v]);
            if lu == lv {
                continue;
            }
            let after = |x: usize| {
                if x == u {
                    lv
                } else if x == v {
                    lu
                } else {
                    labels[x]
                }
            };
            if less(pre[u], raw_utility(kind, g, v, lu, after))
                && less(pre[v], raw_utility(kind, g, u, lv, after))
            {
                return Verdict {
                    witness: Some((u, v)),
                };
            }
        }
    }
    Verdict { witness: None }
}
