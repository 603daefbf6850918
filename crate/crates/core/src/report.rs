//! Serialization helpers and plain-text rendering for CLI output.

use std::collections::BTreeSet;
use std::fmt::{self, Display};
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::dichotomy::preset;
use crate::error::{Error, Result};
use crate::extension::{
    chain_extend, direct_extend, doubling_tower, preservation_check, Chain, LinkageMode, PreservationReport, Tower,
};
use crate::symmetry::SuccessorSet;

pub fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn ser_display_vec<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

pub fn ser_display_opt<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}
/// Reference values for the `U0` table, bundled with the crate.
pub const REFERENCE_TABLE: &str = include_str!("../data/table1_reference.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedRow {
    pub interval: u32,
    pub level0: Vec<String>,
    pub level0_cardinality: u64,
    pub extended: Vec<String>,
    pub extended_cardinality: u64,
    #[serde(default)]
    pub disputed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedTable {
    pub dichotomy: String,
    pub modulus: u32,
    pub depth: usize,
    pub rows: Vec<ExpectedRow>,
}

impl ExpectedTable {
    pub fn reference() -> Self {
        ExpectedTable::from_json(REFERENCE_TABLE).expect("bundled reference table parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("expected-values file: {e}")))
    }

    pub fn row(&self, interval: u32) -> Option<&ExpectedRow> {
        self.rows.iter().find(|r| r.interval == interval)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    /// One doubling step at a time.
    #[default]
    Chained,
    /// A single embedding from the base to the top.
    Direct,
}

impl FromStr for ExtensionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chained" => Ok(ExtensionMode::Chained),
            "direct" => Ok(ExtensionMode::Direct),
            _ => Err(Error::Parse(format!("unknown extension mode {s:?} (chained|direct)"))),
        }
    }
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionMode::Chained => "chained",
            ExtensionMode::Direct => "direct",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub factor: u32,
    pub source_modulus: u32,
    pub target_modulus: u32,
    pub parents: usize,
    pub candidates: usize,
    pub filtered: usize,
    pub symmetries: usize,
    pub cardinality: u64,
    pub preservation: PreservationReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub interval: u32,
    pub level0: SuccessorSet,
    pub extended: SuccessorSet,
    /// Every final translation is `a·t₀` for some level-0 translation `t₀`,
    /// `a` the total scale factor.
    pub translation_invariant: bool,
    pub steps: Vec<StepSummary>,
}

impl Table1Row {
    fn from_chain(chain: &Chain, scale: u32) -> Self {
        let top = chain.last();
        let m = top.modulus;
        let scaled: BTreeSet<u32> = chain.base.symmetries.iter().map(|g| m.mul(scale, g.t())).collect();
        let translation_invariant = top.symmetries.iter().all(|g| scaled.contains(&g.t()));
        let steps = chain
            .steps
            .iter()
            .map(|s| StepSummary {
                factor: s.factor,
                source_modulus: s.source_modulus.get(),
                target_modulus: s.target_modulus.get(),
                parents: s.parents.len(),
                candidates: s.candidates,
                filtered: s.filtered.len(),
                symmetries: s.extended.symmetries.len(),
                cardinality: s.extended.cardinality,
                preservation: preservation_check(s),
            })
            .collect();
        Table1Row {
            interval: chain.interval,
            level0: chain.base.clone(),
            extended: top.clone(),
            translation_invariant,
            steps,
        }
    }

    pub fn preservation_holds(&self) -> bool {
        self.steps.iter().all(|s| s.preservation.holds)
    }
}

fn names(set: &SuccessorSet) -> Vec<String> {
    set.symmetries.iter().map(|g| g.to_string()).collect()
}

/// Extends every interval through the tower.
pub fn table1_rows(
    tower: &Tower,
    intervals: &[u32],
    mode: ExtensionMode,
    linkage: LinkageMode,
) -> Result<Vec<Table1Row>> {
    let scale = tower.top().modulus().get() / tower.base().modulus().get();
    intervals
        .iter()
        .map(|&k| {
            let chain = match mode {
                ExtensionMode::Chained => chain_extend(tower, k, linkage)?,
                ExtensionMode::Direct => direct_extend(tower, k, linkage)?,
            };
            Ok(Table1Row::from_chain(&chain, scale))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub interval: u32,
    pub column: &'static str,
    pub expected: String,
    pub computed: String,
    pub disputed: bool,
}

fn set_string(names: &[String]) -> String {
    names.join(" ")
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

/// Cell-by-cell differences between computed rows and expected values.
/// Expected rows without a computed counterpart are reported as missing.
pub fn discrepancies(rows: &[Table1Row], expected: &ExpectedTable) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for exp in &expected.rows {
        let mut push = |column, expected: String, computed: String| {
            out.push(Discrepancy {
                interval: exp.interval,
                column,
                expected,
                computed,
                disputed: exp.disputed,
            })
        };
        let Some(row) = rows.iter().find(|r| r.interval == exp.interval) else {
            push("row", "present".into(), "missing".into());
            continue;
        };
        let (l0, ext) = (names(&row.level0), names(&row.extended));
        if !same_set(&exp.level0, &l0) {
            push("level0", set_string(&exp.level0), set_string(&l0));
        }
        if exp.level0_cardinality != row.level0.cardinality {
            push(
                "level0_cardinality",
                exp.level0_cardinality.to_string(),
                row.level0.cardinality.to_string(),
            );
        }
        if !same_set(&exp.extended, &ext) {
            push("extended", set_string(&exp.extended), set_string(&ext));
        }
        if exp.extended_cardinality != row.extended.cardinality {
            push(
                "extended_cardinality",
                exp.extended_cardinality.to_string(),
                row.extended.cardinality.to_string(),
            );
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeComparison {
    pub interval: u32,
    pub chained: Vec<String>,
    pub chained_cardinality: u64,
    pub direct: Vec<String>,
    pub direct_cardinality: u64,
    pub agree: bool,
}

pub fn compare_modes(chained: &[Table1Row], direct: &[Table1Row]) -> Vec<ModeComparison> {
    chained
        .iter()
        .zip(direct)
        .map(|(c, d)| {
            let (cn, dn) = (names(&c.extended), names(&d.extended));
            ModeComparison {
                interval: c.interval,
                agree: cn == dn && c.extended.cardinality == d.extended.cardinality,
                chained: cn,
                chained_cardinality: c.extended.cardinality,
                direct: dn,
                direct_cardinality: d.extended.cardinality,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub dichotomy: String,
    pub base_modulus: u32,
    pub top_modulus: u32,
    pub mode: ExtensionMode,
    pub linkage: LinkageMode,
    pub rows: Vec<Table1Row>,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Vec<ModeComparison>>,
}

impl Table1Report {
    pub fn undisputed_discrepancies(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| !d.disputed)
    }
}

/// Reproduces the table for the tower over `expected.dichotomy`.
pub fn table1(
    expected: &ExpectedTable,
    mode: ExtensionMode,
    linkage: LinkageMode,
    compare: bool,
) -> Result<Table1Report> {
    let base = preset(&expected.dichotomy)?
        .ok_or_else(|| Error::InvalidDichotomy(format!("unknown preset {}", expected.dichotomy)))?;
    if base.modulus().get() != expected.modulus {
        return Err(Error::ModulusMismatch {
            left: base.modulus().get(),
            right: expected.modulus,
        });
    }
    let tower = doubling_tower(&base, expected.depth)?;
    let intervals: Vec<u32> = expected.rows.iter().map(|r| r.interval).collect();
    let rows = table1_rows(&tower, &intervals, mode, linkage)?;
    let comparison = if compare {
        let other = match mode {
            ExtensionMode::Chained => ExtensionMode::Direct,
            ExtensionMode::Direct => ExtensionMode::Chained,
        };
        let other_rows = table1_rows(&tower, &intervals, other, linkage)?;
        Some(match mode {
            ExtensionMode::Chained => compare_modes(&rows, &other_rows),
            ExtensionMode::Direct => compare_modes(&other_rows, &rows),
        })
    } else {
        None
    };
    Ok(Table1Report {
        dichotomy: expected.dichotomy.clone(),
        base_modulus: tower.base().modulus().get(),
        top_modulus: tower.top().modulus().get(),
        mode,
        linkage,
        discrepancies: discrepancies(&rows, expected),
        rows,
        comparison,
    })
}

/// Plain-text rendering of a table report.
pub fn render_table1(report: &Table1Report) -> String {
    let mut out = format!(
        "{} in Z_{} extended to Z_{} ({} extension, {} linkage)\n",
        report.dichotomy, report.base_modulus, report.top_modulus, report.mode, report.linkage
    );
    let width = report
        .rows
        .iter()
        .map(|r| names(&r.level0).join(" ").len())
        .max()
        .unwrap_or(0)
        .max(10);
    out += &format!(
        "{:>8}  {:<width$}  {:>6}  {:<24}  {:>8}  {}\n",
        "interval", "symmetries", "|succ|", "extended", "|succ|", "t-invariant"
    );
    for r in &report.rows {
        out += &format!(
            "{:>8}  {:<width$}  {:>6}  {:<24}  {:>8}  {}\n",
            r.interval,
            names(&r.level0).join(" "),
            r.level0.cardinality,
            names(&r.extended).join(" "),
            r.extended.cardinality,
            if r.translation_invariant { "yes" } else { "NO" }
        );
    }
    if report.discrepancies.is_empty() {
        out += "\nno discrepancies against expected values\n";
    } else {
        out += "\ndiscrepancies against expected values:\n";
        for d in &report.discrepancies {
            out += &format!(
                "  interval {:>2}  {:<20}  expected {:<20}  computed {}{}\n",
                d.interval,
                d.column,
                d.expected,
                d.computed,
                if d.disputed { "  (disputed)" } else { "" }
            );
        }
    }
    if let Some(cmp) = &report.comparison {
        out += "\nchained vs direct:\n";
        for c in cmp {
            out += &format!(
                "  interval {:>2}  chained {} ({})  direct {} ({})  {}\n",
                c.interval,
                c.chained.join(" "),
                c.chained_cardinality,
                c.direct.join(" "),
                c.direct_cardinality,
                if c.agree { "agree" } else { "DIFFER" }
            );
        }
    }
    out
}
