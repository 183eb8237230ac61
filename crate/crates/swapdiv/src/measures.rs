//! Global diversity measures.

use std::fmt::Write as _;
use std::str::FromStr;

use num::rational::Ratio;
use num::{ToPrimitive, Zero};

use crate::assignment::Assignment;
use crate::error::{invalid, Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoiVariant {
    /// At least `j` colorful edges.
    Colorful,
    /// At least `j` distinct other types.
    Types,
}

/// Per-vertex counts shared by all measures.
struct Local {
    colorful: usize,
    other_types: usize,
    norm_sq: usize,
}

fn locals(a: &Assignment<'_>) -> Vec<Local> {
    (0..a.n())
        .map(|v| {
            let tv = a.type_vector(v);
            let own = a.label(v);
            Local {
                colorful: a.graph().degree(v) - tv.count(own),
                other_types: tv.types().filter(|&i| i != own).count(),
                norm_sq: tv.norm_sq(),
            }
        })
        .collect()
}

fn frac(count: usize, n: usize) -> Rational {
    Ratio::new(count as i64, n as i64)
}

/// Fraction of vertices with a neighbor of another type.
pub fn degree_of_integration(a: &Assignment<'_>) -> Rational {
    let hits = (0..a.n()).filter(|&v| !a.is_segregated(v)).count();
    frac(hits, a.n())
}

pub fn doi_refined(a: &Assignment<'_>, j: usize, variant: DoiVariant) -> Result<Rational> {
    if j == 0 {
        return Err(invalid("doi refinement needs j >= 1"));
    }
    let hits = locals(a)
        .iter()
        .filter(|l| match variant {
            DoiVariant::Colorful => l.colorful >= j,
            DoiVariant::Types => l.other_types >= j,
        })
        .count();
    Ok(frac(hits, a.n()))
}

/// Edges whose endpoints have different types.
pub fn colorful_edges(a: &Assignment<'_>) -> usize {
    let l = a.labels();
    a.graph().edges().filter(|&(u, v)| l[u] != l[v]).count()
}

/// Average number of other types in a neighborhood.
pub fn neighborhood_variety(a: &Assignment<'_>) -> Rational {
    let total: usize = locals(a).iter().map(|l| l.other_types).sum();
    frac(total, a.n())
}

/// `1 / Σ_v ‖Π_v‖²` with Π_v counting every neighbor type, own type included.
pub fn evenness(a: &Assignment<'_>) -> Rational {
    let total: usize = locals(a).iter().map(|l| l.norm_sq).sum();
    Ratio::new(1, total as i64)
}

/// Upper bound `t / (n δ²)` on evenness for δ-regular graphs.
pub fn evenness_bound(t: usize, n: usize, delta: usize) -> Rational {
    Ratio::new(t as i64, (n * delta * delta) as i64)
}

/// `optimal / equilibrium`; undefined when the equilibrium value is zero.
pub fn poa_ratio(optimal: Rational, equilibrium: Rational) -> Result<Rational> {
    if equilibrium.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    Ok(optimal / equilibrium)
}

/// A single scalar measure, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Doi,
    DoiColorful(usize),
    DoiTypes(usize),
    ColorfulEdges,
    Variety,
    Evenness,
}

impl Measure {
    pub fn value(self, a: &Assignment<'_>) -> Rational {
        match self {
            Measure::Doi => degree_of_integration(a),
            Measure::DoiColorful(j) => doi_refined(a, j, DoiVariant::Colorful).unwrap_or_default(),
            Measure::DoiTypes(j) => doi_refined(a, j, DoiVariant::Types).unwrap_or_default(),
            Measure::ColorfulEdges => Ratio::from_integer(colorful_edges(a) as i64),
            Measure::Variety => neighborhood_variety(a),
            Measure::Evenness => evenness(a),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    /// `doi`, `doic:J`, `doit:J`, `ce`, `nv` or `ev`.
    fn from_str(s: &str) -> Result<Self> {
        let level = |j: &str| match j.parse::<usize>() {
            Ok(j) if j >= 1 => Ok(j),
            _ => Err(invalid(format!("bad level in {s:?}"))),
        };
        match s.split_once(':') {
            Some(("doic", j)) => Ok(Measure::DoiColorful(level(j)?)),
            Some(("doit", j)) => Ok(Measure::DoiTypes(level(j)?)),
            None => match s {
                "doi" => Ok(Measure::Doi),
                "ce" => Ok(Measure::ColorfulEdges),
                "nv" => Ok(Measure::Variety),
                "ev" => Ok(Measure::Evenness),
                _ => Err(invalid(format!("unknown measure {s:?}"))),
            },
            _ => Err(invalid(format!("unknown measure {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub n: usize,
    pub t: usize,
    pub edges: usize,
    pub doi: Rational,
    /// `doic[j-1]` for `j = 1..=Δ`.
    pub doic: Vec<Rational>,
    /// `doit[j-1]` for `j = 1..=min(t-1, Δ)`.
    pub doit: Vec<Rational>,
    pub ce: usize,
    pub nv: Rational,
    pub ev: Rational,
    pub sw_binary: usize,
    pub sw_diff: usize,
    pub sw_variety: usize,
    pub ce_norm: Rational,
    /// Present only on regular graphs.
    pub ev_norm: Option<Rational>,
}

impl MeasureReport {
    pub fn compute(a: &Assignment<'_>) -> MeasureReport {
        let g = a.graph();
        let (n, t) = (a.n(), a.t());
        let loc = locals(a);
        let count = |f: &dyn Fn(&Local) -> bool| loc.iter().filter(|l| f(l)).count();
        let dmax = g.delta_max();
        let doic = (1..=dmax)
            .map(|j| frac(count(&|l| l.colorful >= j), n))
            .collect::<Vec<_>>();
        let doit = (1..=dmax.min(t - 1))
            .map(|j| frac(count(&|l| l.other_types >= j), n))
            .collect();
        let sw_binary = count(&|l| l.colorful > 0);
        let sw_diff: usize = loc.iter().map(|l| l.colorful).sum();
        let sw_variety: usize = loc.iter().map(|l| l.other_types).sum();
        let norm: usize = loc.iter().map(|l| l.norm_sq).sum();
        let ev = Ratio::new(1, norm as i64);
        let ev_norm = g
            .is_regular()
            .then(|| ev / evenness_bound(t, n, g.delta_min()));
        MeasureReport {
            n,
            t,
            edges: g.edge_count(),
            doi: frac(sw_binary, n),
            doic,
            doit,
            ce: sw_diff / 2,
            nv: frac(sw_variety, n),
            ev,
            sw_binary,
            sw_diff,
            sw_variety,
            ce_norm: frac(sw_diff / 2, g.edge_count()),
            ev_norm,
        }
    }

    /// `DoI_c(j)`, zero beyond the maximum degree.
    pub fn doic_at(&self, j: usize) -> Rational {
        self.doic.get(j - 1).copied().unwrap_or_else(Ratio::zero)
    }

    /// `DoI_t(j)`, zero beyond `min(t-1, Δ)`.
    pub fn doit_at(&self, j: usize) -> Rational {
        self.doit.get(j - 1).copied().unwrap_or_else(Ratio::zero)
    }

    /// `key=value` lines; rationals printed exactly and as 6-digit decimals.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("n", self.n.to_string());
        kv("t", self.t.to_string());
        kv("edges", self.edges.to_string());
        kv("doi", exact(self.doi));
        for (j, x) in self.doic.iter().enumerate() {
            kv(&format!("doic{}", j + 1), exact(*x));
        }
        for (j, x) in self.doit.iter().enumerate() {
            kv(&format!("doit{}", j + 1), exact(*x));
        }
        kv("ce", self.ce.to_string());
        kv("ce_norm", exact(self.ce_norm));
        kv("nv", exact(self.nv));
        kv("ev", exact(self.ev));
        if let Some(e) = self.ev_norm {
            kv("ev_norm", exact(e));
        }
        kv("sw_binary", self.sw_binary.to_string());
        kv("sw_diff", self.sw_diff.to_string());
        kv("sw_variety", self.sw_variety.to_string());
        s
    }

    pub const CSV_HEADER: &'static str =
        "n,t,doi,ce,ce_norm,nv,ev,ev_norm,doic1,doic2,doic3,doic4,doit1,doit2,doit3,doit4";

    pub fn to_csv_row(&self) -> String {
        let mut cols = vec![
            self.n.to_string(),
            self.t.to_string(),
            decimal(self.doi),
            self.ce.to_string(),
            decimal(self.ce_norm),
            decimal(self.nv),
            format!("{:.6e}", to_f64(self.ev)),
            self.ev_norm.map(decimal).unwrap_or_default(),
        ];
        cols.extend((1..=4).map(|j| decimal(self.doic_at(j))));
        cols.extend((1..=4).map(|j| decimal(self.doit_at(j))));
        cols.join(",")
    }
}

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Fixed 6-digit decimal rendering.
pub fn decimal(r: Rational) -> String {
    format!("{:.6}", to_f64(r))
}

fn exact(r: Rational) -> String {
    if r.is_integer() {
        format!("{} ({})", r.numer(), decimal(r))
    } else {
        format!("{}/{} ({})", r.numer(), r.denom(), decimal(r))
    }
}
