//! Optimal and worst-case equilibrium assignments on cycles, cylinders, tori
//! and `G*`.

use std::fmt;
use std::str::FromStr;

use crate::assignment::Assignment;
use crate::dynamics::verify_equilibrium;
use crate::error::{invalid, unsupported, Error, Result};
use crate::graph::Graph;
use crate::gstar::{GStar, Side};
use crate::utility::UtilityKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle,
    Cylinder,
    Torus,
}

impl Family {
    pub fn graph(self, n: usize) -> Result<Graph> {
        match self {
            Family::Cycle => Graph::cycle(n),
            Family::Cylinder => Graph::cylinder(n),
            Family::Torus => Graph::torus(n),
        }
    }

    fn letter(self) -> char {
        match self {
            Family::Cycle => 'C',
            Family::Cylinder => 'P',
            Family::Torus => 'T',
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" | "C" => Ok(Family::Cycle),
            "cylinder" | "P" => Ok(Family::Cylinder),
            "torus" | "T" => Ok(Family::Torus),
            _ => Err(invalid(format!(
                "unknown family {s:?} (expected cycle, cylinder or torus)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cycle => "cycle",
            Family::Cylinder => "cylinder",
            Family::Torus => "torus",
        })
    }
}

/// Measure a worst-case construction is meant to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// Social welfare of the utility itself.
    Welfare,
    /// Number of colorful edges.
    ColorfulEdges,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sw" | "welfare" => Ok(Target::Welfare),
            "ce" | "colorful" => Ok(Target::ColorfulEdges),
            _ => Err(invalid(format!(
                "unknown measure target {s:?} (expected sw or ce)"
            ))),
        }
    }
}

/// A generated assignment together with what it was checked against.
#[derive(Debug, Clone)]
pub struct Construction<'g> {
    pub name: String,
    pub assignment: Assignment<'g>,
    /// Which variant or boundary stitch was used.
    pub stitch: String,
    /// Utilities under which the assignment was verified to be an equilibrium.
    pub verified: Vec<UtilityKind>,
}

fn side_of(n: usize) -> Result<usize> {
    let s = (n as f64).sqrt().round() as usize;
    if s * s != n {
        return Err(invalid(format!("torus needs a perfect square n, got {n}")));
    }
    Ok(s)
}

fn need(cond: bool, what: &str, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(unsupported(format!("{what}: {}", msg())))
    }
}

fn rows(rows: &[Vec<usize>]) -> Vec<usize> {
    rows.concat()
}

/// Labels of the optimal assignment: cycle repeats `1..t`; the cylinder's
/// second row is the first shifted by `⌊t/2⌋`; torus rows shift by 2
/// (checkerboard for `t = 2`).
pub fn optimal_labels(family: Family, n: usize, t: usize) -> Result<Vec<usize>> {
    if t < 2 {
        return Err(invalid(format!("need t >= 2, got {t}")));
    }
    let what = "optimal assignment";
    match family {
        Family::Cycle => {
            need(n.is_multiple_of(t), what, || {
                format!("cycle needs t | n, got n={n}, t={t}")
            })?;
            Ok((0..n).map(|i| i % t + 1).collect())
        }
        Family::Cylinder => {
            let m = n / 2;
            need(n.is_multiple_of(2) && m.is_multiple_of(t), what, || {
                format!("cylinder needs t | n/2, got n={n}, t={t}")
            })?;
            let shift = t / 2;
            let r1 = (0..m).map(|c| c % t + 1).collect();
            let r2 = (0..m).map(|c| (c + shift) % t + 1).collect();
            Ok(rows(&[r1, r2]))
        }
        Family::Torus => {
            let s = side_of(n)?;
            need(s % t == 0, what, || {
                format!("torus needs t | side, got side={s}, t={t}")
            })?;
            let step = if t == 2 { 1 } else { 2 };
            Ok((0..s)
                .flat_map(|r| (0..s).map(move |c| (c + step * r) % t + 1))
                .collect())
        }
    }
}

pub fn optimal_assignment(graph: &Graph, family: Family, t: usize) -> Result<Assignment<'_>> {
    Assignment::new(graph, t, optimal_labels(family, graph.n(), t)?)
}

/// Labels of a worst-case assignment plus its name and stitch description.
#[derive(Debug, Clone)]
pub struct WorstLabels {
    pub name: String,
    pub labels: Vec<usize>,
    pub stitch: String,
}

fn worst(name: &str, family: Family, labels: Vec<usize>, stitch: &str) -> WorstLabels {
    WorstLabels {
        name: format!("{name}^{}", family.letter()),
        labels,
        stitch: stitch.to_string(),
    }
}

pub fn worst_labels(
    family: Family,
    kind: UtilityKind,
    target: Target,
    n: usize,
    t: usize,
) -> Result<WorstLabels> {
    use UtilityKind::*;
    if t < 2 {
        return Err(invalid(format!("need t >= 2, got {t}")));
    }
    match (kind, t, target) {
        (Binary, 2, _) | (VarietySeeking, 2, _) => binary_t2(family, n),
        (Binary, _, _) => binary_many(family, n, t),
        (DifferenceSeeking, 2, _) => difference_t2(family, n),
        (DifferenceSeeking, _, _) | (VarietySeeking, _, Target::Welfare) => {
            variety_pairs(family, n, t)
        }
        (VarietySeeking, 3, Target::ColorfulEdges) => variety_tiles(family, n),
        (VarietySeeking, _, Target::ColorfulEdges) => Err(unsupported(format!(
            "worst colorful-edge assignment under variety-seeking utility needs t = 3, got {t}"
        ))),
        (SimilaritySeeking, _, _) => Err(unsupported(
            "no worst-case construction for the similarity-seeking utility",
        )),
    }
}

/// `L_b`: blocks of `1 1 2` (or their 2-row / toroidal analogues) followed by a
/// segregated block of type 2.
fn binary_t2(family: Family, n: usize) -> Result<WorstLabels> {
    let what = "L_b";
    match family {
        Family::Cycle => {
            need(n.is_multiple_of(4), what, || {
                format!("cycle needs n ≡ 0 mod 4, got {n}")
            })?;
            let k = n / 2;
            let mut l = [1, 1, 2].repeat(k / 2);
            l.extend(std::iter::repeat_n(2, k / 2));
            Ok(worst("L_b", family, l, "112 blocks then 2s"))
        }
        Family::Cylinder => {
            need(n.is_multiple_of(12), what, || {
                format!("cylinder needs n ≡ 0 mod 12, got {n}")
            })?;
            let k = n / 2;
            let tail = vec![2; k / 3];
            let r1 = [[2, 1, 1, 1].repeat(k / 6), tail.clone()].concat();
            let r2 = [[1, 1, 2, 1].repeat(k / 6), tail].concat();
            Ok(worst(
                "L_b",
                family,
                rows(&[r1, r2]),
                "2111/1121 blocks then 2s",
            ))
        }
        Family::Torus => {
            let s = side_of(n)?;
            need(s % 40 == 0, what, || {
                format!("torus needs side ≡ 0 mod 40, got {s}")
            })?;
            let i = s / 8;
            let l = (0..s)
                .flat_map(|r| {
                    let hole = (4 + 2 * r) % 5;
                    (0..s).map(move |c| if c >= 5 * i || c % 5 == hole { 2 } else { 1 })
                })
                .collect();
            Ok(worst("L_b", family, l, "pentomino holes then 2s"))
        }
    }
}

/// `A_b`: pairs `1 1 2 2 .. (t-1)(t-1)` repeated over `(t-1)k` cells, then a
/// segregated block of type `t`.
fn binary_many(family: Family, n: usize, t: usize) -> Result<WorstLabels> {
    let what = "A_b";
    let line = |len: usize| -> Result<Vec<usize>> {
        need(
            len.is_multiple_of(t) && (len / t).is_multiple_of(2),
            what,
            || format!("row length {len} must be a multiple of 2t = {}", 2 * t),
        )?;
        let k = len / t;
        let pairs: Vec<usize> = (1..t).flat_map(|x| [x, x]).collect();
        let mut l = pairs.repeat(k / 2);
        l.extend(std::iter::repeat_n(t, k));
        Ok(l)
    };
    let l = match family {
        Family::Cycle => line(n)?,
        Family::Cylinder => {
            need(n.is_multiple_of(2), what, || {
                format!("cylinder needs even n, got {n}")
            })?;
            line(n / 2)?.repeat(2)
        }
        Family::Torus => {
            let s = side_of(n)?;
            line(s)?.repeat(s)
        }
    };
    Ok(worst("A_b", family, l, "paired types then a t-block"))
}

/// `L_#`.
fn difference_t2(family: Family, n: usize) -> Result<WorstLabels> {
    let what = "L_#";
    match family {
        Family::Cycle => {
            need(n.is_multiple_of(6), what, || {
                format!("cycle needs n ≡ 0 mod 6, got {n}")
            })?;
            let reps = n / 6 - 1;
            let l = [
                [1, 1, 2].repeat(reps),
                vec![1, 2, 1],
                [2, 2, 1].repeat(reps),
                vec![2, 1, 2],
            ]
            .concat();
            Ok(worst("L_#", family, l, "112 blocks, 121, 221 blocks, 212"))
        }
        Family::Cylinder => {
            need(n.is_multiple_of(4), what, || {
                format!("cylinder needs n ≡ 0 mod 4, got {n}")
            })?;
            Ok(worst("L_#", family, [1, 2].repeat(n / 2), "both rows 12"))
        }
        Family::Torus => {
            let s = side_of(n)?;
            need(s % 10 == 0, what, || {
                format!("torus needs side ≡ 0 mod 10, got {s}")
            })?;
            let even = [2, 1, 1, 2, 2, 1, 2, 2, 1, 2];
            let odd = [2, 1, 1, 2, 1, 1, 2, 2, 1, 1];
            let l = (0..s)
                .flat_map(|r| {
                    let base = if r % 2 == 0 { even } else { odd };
                    (0..s).map(move |c| base[(c + s - r % s) % 10])
                })
                .collect();
            Ok(worst(
                "L_#",
                family,
                l,
                "period-10 rows shifted right by one",
            ))
        }
    }
}

/// First row of `A_τ`: for odd `t`, alternating pairs `(1 2)(3 4)...` over `2k`
/// cells each; for even `t`, `12`, `13`, `23` over `k` cells each and then the
/// pairs `(4 5)(6 7)...`; finally `k` cells of type `t`.
fn variety_row(len: usize, t: usize) -> Result<Vec<usize>> {
    let what = "A_τ";
    need(len.is_multiple_of(t), what, || {
        format!("row length {len} must be a multiple of t = {t}")
    })?;
    let k = len / t;
    let mut l = Vec::with_capacity(len);
    let first = if t % 2 == 1 {
        1
    } else {
        need(k.is_multiple_of(2), what, || {
            format!("even t needs an even k = {k}")
        })?;
        for p in [[1, 2], [1, 3], [2, 3]] {
            l.extend(p.repeat(k / 2));
        }
        4
    };
    for p in (first..t).step_by(2) {
        l.extend([p, p + 1].repeat(k));
    }
    l.extend(std::iter::repeat_n(t, k));
    Ok(l)
}

/// Second row of `A_τ`: the members of each pair exchanged.
fn variety_partner(row: &[usize], t: usize) -> Vec<usize> {
    let k = row.len() / t;
    let flip = |x: usize| match x {
        x if x == t => x,
        x if (x % 2 == 1) == (t % 2 == 1) => x + 1,
        x => x - 1,
    };
    if t % 2 == 1 {
        row.iter().map(|&x| flip(x)).collect()
    } else {
        let h = k / 2;
        let mut l = [[2, 1].repeat(h), [3, 1].repeat(h), [3, 2].repeat(h)].concat();
        l.extend(row[3 * k..].iter().map(|&x| flip(x)));
        l
    }
}

fn variety_pairs(family: Family, n: usize, t: usize) -> Result<WorstLabels> {
    let stitch = if t % 2 == 1 {
        "alternating pairs"
    } else {
        "12/13/23 prefix then alternating pairs"
    };
    let l = match family {
        Family::Cycle => variety_row(n, t)?,
        Family::Cylinder => {
            need(n.is_multiple_of(2), "A_τ", || {
                format!("cylinder needs even n, got {n}")
            })?;
            let r1 = variety_row(n / 2, t)?;
            let r2 = variety_partner(&r1, t);
            rows(&[r1, r2])
        }
        Family::Torus => {
            let s = side_of(n)?;
            need(s % 2 == 0, "A_τ", || {
                format!("torus needs an even side, got {s}")
            })?;
            let r1 = variety_row(s, t)?;
            let r2 = variety_partner(&r1, t);
            [r1, r2].concat().repeat(s / 2)
        }
    };
    Ok(worst("A_τ", family, l, stitch))
}

/// A tile: a center cell and its arms, as vertex indices.
struct Tile {
    center: usize,
    arms: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum TileClass {
    /// Center 2, arms 1.
    B,
    /// Center 3, arms 2.
    R,
    /// All 3.
    G,
}

fn paint(n: usize, tiles: &[Tile], classes: &[TileClass]) -> Vec<usize> {
    let mut l = vec![3; n];
    for (tile, &cls) in tiles.iter().zip(classes) {
        let (c, a) = match cls {
            TileClass::B => (2, 1),
            TileClass::R => (3, 2),
            TileClass::G => continue,
        };
        l[tile.center] = c;
        for &x in &tile.arms {
            l[x] = a;
        }
    }
    l
}

/// `B_τ` for `t = 3`: tiles whose arms see only the center's type.
fn variety_tiles(family: Family, n: usize) -> Result<WorstLabels> {
    let what = "B_τ";
    match family {
        Family::Cycle => {
            need(n.is_multiple_of(12), what, || {
                format!("cycle needs n ≡ 0 mod 12, got {n}")
            })?;
            let k = n / 3;
            let l = [
                [1, 2, 1].repeat(k / 2 - 1),
                [2, 3, 2].repeat(k / 4),
                vec![1, 2, 1],
                vec![3; 3 * k / 4],
            ]
            .concat();
            Ok(worst("B_τ", family, l, "121 blocks, 232 blocks, 121, 3s"))
        }
        Family::Cylinder => {
            need(n.is_multiple_of(54), what, || {
                format!("cylinder needs n ≡ 0 mod 54, got {n}")
            })?;
            let m = n / 2;
            let k = n / 3;
            let b = k / 3;
            let r = (k - b) / 3;
            let tiles: Vec<Tile> = (0..)
                .take_while(|i| 2 * i + 2 < m)
                .map(|i| {
                    let (row, c) = (i % 2, 2 * i + 1);
                    let at = |rr: usize, cc: usize| rr * m + cc;
                    Tile {
                        center: at(row, c),
                        arms: vec![at(row, c - 1), at(row, c + 1), at(1 - row, c)],
                    }
                })
                .collect();
            let b1 = b / 2;
            let classes = [
                vec![TileClass::B; b1],
                vec![TileClass::R; r],
                vec![TileClass::B; b - b1],
            ]
            .concat();
            if classes.len() > tiles.len() {
                return Err(Error::Construction(format!(
                    "{what}: not enough tiles for n={n}"
                )));
            }
            Ok(worst(
                "B_τ",
                family,
                paint(n, &tiles, &classes),
                "bands B|R|B, filler 3",
            ))
        }
        Family::Torus => {
            let s = side_of(n)?;
            need(s % 60 == 0, what, || {
                format!("torus needs side ≡ 0 mod 60, got {s}")
            })?;
            let k = n / 3;
            let b = k / 4;
            let r = (k - b) / 4;
            let tiles: Vec<Tile> = (0..s)
                .flat_map(|row| (0..s).map(move |c| (row, c)))
                .filter(|&(row, c)| (c + 5 * s - 2 * row) % 5 == 0)
                .map(|(row, c)| {
                    let at = |rr: usize, cc: usize| (rr % s) * s + cc % s;
                    Tile {
                        center: at(row, c),
                        arms: vec![
                            at(row + s - 1, c),
                            at(row + 1, c),
                            at(row, c + s - 1),
                            at(row, c + 1),
                        ],
                    }
                })
                .collect();
            let g = tiles.len() - b - r;
            let b1 = b / 2;
            let classes = [
                vec![TileClass::G; g],
                vec![TileClass::B; b1],
                vec![TileClass::R; r],
                vec![TileClass::B; b - b1],
            ]
            .concat();
            Ok(worst(
                "B_τ",
                family,
                paint(n, &tiles, &classes),
                "plus tiles in bands G|B|R|B",
            ))
        }
    }
}

fn checked<'g>(
    name: String,
    assignment: Assignment<'g>,
    stitch: String,
    kinds: &[UtilityKind],
) -> Result<Construction<'g>> {
    for &kind in kinds {
        if let Some((u, v)) = verify_equilibrium(kind, &assignment).witness {
            return Err(Error::Construction(format!(
                "{name} is not a {kind} equilibrium: swap ({u},{v}) improves"
            )));
        }
    }
    Ok(Construction {
        name,
        assignment,
        stitch,
        verified: kinds.to_vec(),
    })
}

/// Worst-case equilibrium for `kind` on `graph` (which must be the `family`
/// graph on its vertex count), verified exhaustively before it is returned.
pub fn worst_assignment<'g>(
    graph: &'g Graph,
    family: Family,
    kind: UtilityKind,
    target: Target,
    t: usize,
) -> Result<Construction<'g>> {
    let w = worst_labels(family, kind, target, graph.n(), t)?;
    let a = Assignment::new(graph, t, w.labels)?;
    if !a.partition().is_equitable() {
        return Err(Error::Construction(format!(
            "{} is not equitable: {:?}",
            w.name,
            a.partition().counts()
        )));
    }
    checked(w.name, a, w.stitch, &[kind])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GStarWhich {
    Optimal,
    Worst,
}

impl FromStr for GStarWhich {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" | "opt" => Ok(GStarWhich::Optimal),
            "worst" => Ok(GStarWhich::Worst),
            _ => Err(invalid(format!("expected optimal or worst, got {s:?}"))),
        }
    }
}

/// Labels for the `G*` assignments.
///
/// Optimal: along each side, blocks of `r = (δ-1)/t` consecutive indices cycle
/// through the types, with side `b` one type ahead of side `a` (block size 1
/// when `rt` does not divide `k/2`). Worst: for `t = 3` every `a` side is type
/// 1 and every `b` side type 2; for larger `t` the sides are cut into `t-1`
/// stripes with side `b` one type ahead. `H_t` is all type `t`.
pub fn gstar_labels(gs: &GStar, which: GStarWhich) -> Result<(Vec<usize>, String)> {
    let (t, q) = (gs.t, gs.q());
    let n = gs.graph.n();
    let b_shift = |side: Side| (side == Side::B) as usize;
    match which {
        GStarWhich::Optimal => {
            need((gs.delta - 1).is_multiple_of(t), "G* optimal", || {
                format!("needs t | delta-1, got t={t}, delta={}", gs.delta)
            })?;
            let r = (gs.delta - 1) / t;
            let block = if q % (r * t) == 0 { r } else { 1 };
            need(q % (block * t) == 0, "G* optimal", || {
                format!("needs t | k/2, got t={t}, k={}", gs.k)
            })?;
            let l = (0..n)
                .map(|v| {
                    let x = gs.label(v);
                    ((x.index - 1) / block + b_shift(x.side)) % t + 1
                })
                .collect();
            Ok((l, format!("blocks of {block}")))
        }
        GStarWhich::Worst => {
            need(q % (t - 1) == 0, "G* worst", || {
                format!("needs (t-1) | k/2, got t={t}, k={}", gs.k)
            })?;
            let width = q / (t - 1);
            let l = (0..n)
                .map(|v| {
                    let x = gs.label(v);
                    if x.copy == t {
                        t
                    } else if t == 3 {
                        1 + b_shift(x.side)
                    } else {
                        ((x.index - 1) / width + b_shift(x.side)) % (t - 1) + 1
                    }
                })
                .collect();
            let stitch = if t == 3 { "sides" } else { "stripes" };
            Ok((l, stitch.to_string()))
        }
    }
}

/// `G*` assignment, verified under `U_b` and `U_τ` (optimal) or all three
/// diversity utilities (worst).
pub fn gstar_assignment(gs: &GStar, which: GStarWhich) -> Result<Construction<'_>> {
    let (labels, stitch) = gstar_labels(gs, which)?;
    let a = Assignment::new(&gs.graph, gs.t, labels)?;
    let (name, kinds): (_, &[UtilityKind]) = match which {
        GStarWhich::Optimal => (
            "G*_opt",
            &[UtilityKind::Binary, UtilityKind::VarietySeeking],
        ),
        GStarWhich::Worst => ("G*_worst", &UtilityKind::DIVERSITY),
    };
    checked(name.to_string(), a, stitch, kinds)
}
