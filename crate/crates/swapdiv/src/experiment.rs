//! Seeded batch simulations on the torus with CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::assignment::{random_assignment, Assignment, RandomMode};
use crate::dynamics::{default_max_steps, run_to_equilibrium};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::measures::{decimal, to_f64, MeasureReport, Rational};
use crate::utility::UtilityKind;

pub const CSV_VERSION: &str = "# swapdiv-experiment v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputKind {
    Random,
    Schelling,
}

impl InputKind {
    fn tag(self) -> u8 {
        match self {
            InputKind::Random => 0,
            InputKind::Schelling => 1,
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputKind::Random => "random",
            InputKind::Schelling => "schelling",
        })
    }
}

impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(InputKind::Random),
            "schelling" => Ok(InputKind::Schelling),
            _ => Err(invalid(format!("unknown input kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Torus side; the graph has `side²` vertices.
    pub side: usize,
    pub t_min: usize,
    pub t_max: usize,
    pub runs: usize,
    pub seed: u64,
    pub inputs: Vec<InputKind>,
    pub utilities: Vec<UtilityKind>,
    pub mode: RandomMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            side: 30,
            t_min: 2,
            t_max: 9,
            runs: 50,
            seed: 1,
            inputs: vec![InputKind::Random, InputKind::Schelling],
            utilities: UtilityKind::DIVERSITY.to_vec(),
            mode: RandomMode::UniformPerVertex,
        }
    }
}

fn list<T: FromStr<Err = Error>>(v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

impl ExperimentConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| invalid(format!("{key}: not a number: {v:?}")))
        };
        match key {
            "side" => self.side = num(value)?,
            "t" => {
                let (a, b) = value.split_once("..").unwrap_or((value, value));
                self.t_min = num(a)?;
                self.t_max = num(b)?;
            }
            "t_min" => self.t_min = num(value)?,
            "t_max" => self.t_max = num(value)?,
            "runs" => self.runs = num(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| invalid(format!("seed: not a number: {value:?}")))?
            }
            "inputs" => self.inputs = list(value)?,
            "utilities" => self.utilities = list(value)?,
            "mode" => self.mode = value.parse()?,
            _ => return Err(invalid(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines over the defaults; `#` starts a comment. Keys
    /// listed in `skip` are returned instead of applied.
    pub fn parse_file(text: &str, skip: &[&str]) -> Result<(Self, Vec<(String, String)>)> {
        let mut cfg = ExperimentConfig::default();
        let mut rest = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("config line {}: expected key=value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if skip.contains(&k) {
                rest.push((k.to_string(), v.to_string()));
            } else {
                cfg.set(k, v)
                    .map_err(|e| invalid(format!("config line {}: {e}", i + 1)))?;
            }
        }
        Ok((cfg, rest))
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(invalid("runs must be at least 1"));
        }
        if self.utilities.is_empty() {
            return Err(invalid("utility set is empty"));
        }
        if let Some(k) = self.utilities.iter().find(|k| !k.is_diversity()) {
            return Err(invalid(format!("{k} is not a diversity-seeking utility")));
        }
        if self.inputs.is_empty() {
            return Err(invalid("input kind set is empty"));
        }
        if self.side < 3 {
            return Err(invalid(format!(
                "torus side must be at least 3, got {}",
                self.side
            )));
        }
        if self.t_min < 2 || self.t_min > self.t_max || self.t_max > self.side * self.side {
            return Err(invalid(format!(
                "bad t range {}..{}",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let names = |v: Vec<String>| v.join(",");
        format!(
            "side={} t={}..{} runs={} seed={} inputs={} utilities={} mode={}",
            self.side,
            self.t_min,
            self.t_max,
            self.runs,
            self.seed,
            names(self.inputs.iter().map(ToString::to_string).collect()),
            names(self.utilities.iter().map(ToString::to_string).collect()),
            self.mode
        )
    }
}

/// Per-run seed: the first 8 bytes of SHA-256 over the cell coordinates.
pub fn derive_seed(master: u64, input: InputKind, t: usize, run: usize) -> u64 {
    let digest = Sha256::new()
        .chain_update(master.to_le_bytes())
        .chain_update([input.tag()])
        .chain_update((t as u64).to_le_bytes())
        .chain_update((run as u64).to_le_bytes())
        .finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Measures reported per row, for the equilibrium and for the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub doi: Rational,
    pub ce_norm: Rational,
    pub nv: Rational,
    pub ev_norm: Rational,
    pub doic: [Rational; 4],
    pub doit: [Rational; 4],
}

impl Snapshot {
    fn of(a: &Assignment<'_>) -> Result<Snapshot> {
        let r = MeasureReport::compute(a);
        let ev_norm = r
            .ev_norm
            .ok_or_else(|| Error::Invariant("experiment graph is not regular".into()))?;
        let unit = |x: Rational| x >= Rational::from_integer(0) && x <= Rational::from_integer(1);
        if !unit(r.ce_norm) || !unit(ev_norm) || !unit(r.doi) {
            return Err(Error::Invariant(format!(
                "normalized measure out of range: doi={} ce_norm={} ev_norm={}",
                r.doi, r.ce_norm, ev_norm
            )));
        }
        Ok(Snapshot {
            doi: r.doi,
            ce_norm: r.ce_norm,
            nv: r.nv,
            ev_norm,
            doic: std::array::from_fn(|i| r.doic_at(i + 1)),
            doit: std::array::from_fn(|i| r.doit_at(i + 1)),
        })
    }

    fn values(&self) -> impl Iterator<Item = Rational> + '_ {
        [self.doi, self.ce_norm, self.nv, self.ev_norm]
            .into_iter()
            .chain(self.doic)
            .chain(self.doit)
    }

    const FIELDS: [&'static str; 12] = [
        "doi", "ce_norm", "nv", "ev_norm", "doic1", "doic2", "doic3", "doic4", "doit1", "doit2",
        "doit3", "doit4",
    ];
}

/// One run of one utility from one input. Rows with `utility = None` describe
/// the input itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub input: InputKind,
    pub utility: Option<UtilityKind>,
    pub t: usize,
    pub n: usize,
    pub run: usize,
    pub seed: u64,
    pub swaps: usize,
    pub result: Snapshot,
    pub input_measures: Snapshot,
    /// The similarity dynamics building a Schelling input hit its step cap.
    pub input_capped: bool,
}

impl ExperimentRow {
    pub fn utility_name(&self) -> &'static str {
        self.utility.map_or("input", UtilityKind::name)
    }

    pub fn csv_header() -> String {
        let mut cols: Vec<String> = ["input", "utility", "t", "n", "run", "seed", "swaps"]
            .map(String::from)
            .to_vec();
        cols.extend(Snapshot::FIELDS.iter().map(|f| f.to_string()));
        cols.extend(Snapshot::FIELDS.iter().map(|f| format!("input_{f}")));
        cols.push("input_capped".into());
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut cols = vec![
            self.input.to_string(),
            self.utility_name().to_string(),
            self.t.to_string(),
            self.n.to_string(),
            self.run.to_string(),
            self.seed.to_string(),
            self.swaps.to_string(),
        ];
        cols.extend(self.result.values().map(decimal));
        cols.extend(self.input_measures.values().map(decimal));
        cols.push(self.input_capped.to_string());
        cols.join(",")
    }
}

/// Random labeling evolved under the similarity-seeking utility. The flag is
/// true when the step cap stopped the run.
pub fn make_schelling_input<'g>(
    graph: &'g Graph,
    t: usize,
    seed: u64,
    mode: RandomMode,
) -> Result<(Assignment<'g>, bool)> {
    let start = random_assignment(graph, t, seed, mode)?;
    let kind = UtilityKind::SimilaritySeeking;
    let trace = run_to_equilibrium(kind, &start, default_max_steps(kind, graph))?;
    Ok((trace.final_assignment, !trace.at_equilibrium))
}

fn run_cell(
    cfg: &ExperimentConfig,
    graph: &Graph,
    input: InputKind,
    t: usize,
    run: usize,
) -> Result<Vec<ExperimentRow>> {
    let seed = derive_seed(cfg.seed, input, t, run);
    let (start, capped) = match input {
        InputKind::Random => (random_assignment(graph, t, seed, cfg.mode)?, false),
        InputKind::Schelling => make_schelling_input(graph, t, seed, cfg.mode)?,
    };
    let input_measures = Snapshot::of(&start)?;
    let row = |utility, swaps, result| ExperimentRow {
        input,
        utility,
        t,
        n: graph.n(),
        run,
        seed,
        swaps,
        result,
        input_measures: input_measures.clone(),
        input_capped: capped,
    };
    let mut rows = vec![row(None, 0, input_measures.clone())];
    for &kind in &cfg.utilities {
        let trace = run_to_equilibrium(kind, &start, default_max_steps(kind, graph))?;
        if !trace.at_equilibrium {
            return Err(Error::Invariant(format!(
                "{kind} run {run} (t={t}) stopped before equilibrium"
            )));
        }
        rows.push(row(
            Some(kind),
            trace.swap_count(),
            Snapshot::of(&trace.final_assignment)?,
        ));
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
}

/// Runs every (input kind, t, run) cell; cells run in parallel and rows come
/// back in (input kind, t, run) order with the input row first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let graph = Graph::torus(cfg.side * cfg.side)?;
    let cells: Vec<(InputKind, usize, usize)> = cfg
        .inputs
        .iter()
        .flat_map(|&i| {
            (cfg.t_min..=cfg.t_max).flat_map(move |t| (0..cfg.runs).map(move |r| (i, t, r)))
        })
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(input, t, run)| run_cell(cfg, &graph, input, t, run))
        .collect::<Result<Vec<_>>>()?
        .concat();
    Ok(ExperimentResult {
        config: cfg.clone(),
        rows,
    })
}

/// Means over runs for one (input kind, utility, t) group.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub input: InputKind,
    pub utility: Option<UtilityKind>,
    pub t: usize,
    pub runs: usize,
    pub swaps: f64,
    /// Means in [`Snapshot::FIELDS`] order.
    pub means: Vec<f64>,
}

impl Aggregate {
    pub fn mean(&self, field: &str) -> f64 {
        let i = Snapshot::FIELDS
            .iter()
            .position(|f| *f == field)
            .unwrap_or_else(|| panic!("unknown field {field}"));
        self.means[i]
    }
}

impl ExperimentResult {
    pub fn aggregate(&self) -> Vec<Aggregate> {
        let mut groups: BTreeMap<(InputKind, Option<UtilityKind>, usize), Vec<&ExperimentRow>> =
            BTreeMap::new();
        for r in &self.rows {
            groups.entry((r.input, r.utility, r.t)).or_default().push(r);
        }
        groups
            .into_iter()
            .map(|((input, utility, t), rows)| {
                let k = rows.len() as f64;
                let mut means = vec![0.0; Snapshot::FIELDS.len()];
                for r in &rows {
                    for (m, x) in means.iter_mut().zip(r.result.values()) {
                        *m += to_f64(x) / k;
                    }
                }
                Aggregate {
                    input,
                    utility,
                    t,
                    runs: rows.len(),
                    swaps: rows.iter().map(|r| r.swaps as f64).sum::<f64>() / k,
                    means,
                }
            })
            .collect()
    }

    pub fn find(
        &self,
        input: InputKind,
        utility: Option<UtilityKind>,
        t: usize,
    ) -> Option<Aggregate> {
        self.aggregate()
            .into_iter()
            .find(|a| a.input == input && a.utility == utility && a.t == t)
    }

    pub fn rows_csv(&self) -> String {
        let mut s = format!("{CSV_VERSION} rows; {}\n", self.config.describe());
        s.push_str(&ExperimentRow::csv_header());
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.to_csv());
            s.push('\n');
        }
        s
    }

    pub fn aggregate_csv(&self) -> String {
        let mut s = format!("{CSV_VERSION} means; {}\n", self.config.describe());
        s.push_str("input,utility,t,runs,swaps,");
        s.push_str(&Snapshot::FIELDS.join(","));
        s.push('\n');
        for a in self.aggregate() {
            let mut cols = vec![
                a.input.to_string(),
                a.utility.map_or("input", UtilityKind::name).to_string(),
                a.t.to_string(),
                a.runs.to_string(),
                format!("{:.6}", a.swaps),
            ];
            cols.extend(a.means.iter().map(|m| format!("{m:.6}")));
            s.push_str(&cols.join(","));
            s.push('\n');
        }
        s
    }
}
