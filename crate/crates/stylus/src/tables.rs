//! Result tables laid out like the published ones, filled with our numbers.

use std::fmt;
use std::str::FromStr;

use stylus_core::bow::InputType;
use stylus_core::corpus::Author;
use stylus_core::embed::EmbedMethod;
use stylus_core::eval::threshold_report;

use crate::config::ClassifierKind;
use crate::pipeline::{Features, Stage, StageError, Workbench};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// LOOCV l2 loss per classifier and method, Type 2 BoW family plus externals.
    L2All,
    /// LOOCV l2 loss per input type, classifier and BoW-family method.
    L2Bow,
    /// ROC and F1 thresholds per method and input type.
    Thresholds,
    /// BART probabilities for the three joint papers.
    Joint,
    /// Negative-binomial log-odds for disputed and joint papers.
    Mw,
    /// HC distances to each author.
    Hc,
}

impl TableId {
    pub const ALL: [TableId; 6] =
        [TableId::L2All, TableId::L2Bow, TableId::Thresholds, TableId::Joint, TableId::Mw, TableId::Hc];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::L2All => "l2_all",
            TableId::L2Bow => "l2_bow",
            TableId::Thresholds => "thresholds",
            TableId::Joint => "joint",
            TableId::Mw => "mw",
            TableId::Hc => "hc",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown table {0:?} (expected one of l2_all, l2_bow, thresholds, joint, mw, hc)")]
pub struct UnknownTable(pub String);

impl FromStr for TableId {
    type Err = UnknownTable;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Cell at (`row label`, `column`), with the row label in column 0.
    pub fn cell(&self, row: &str, column: &str) -> Option<&str> {
        let j = self.header.iter().position(|h| h == column)?;
        self.rows.iter().find(|r| r[0] == row).map(|r| r[j].as_str())
    }
}

fn num(v: f64) -> String {
    format!("{v:.4}")
}

const BOW_FAMILY: [EmbedMethod; 4] = [EmbedMethod::Bow, EmbedMethod::Lda, EmbedMethod::Lsa, EmbedMethod::Nmf];

fn type_label(t: InputType) -> &'static str {
    match t {
        InputType::Type1 => "Type 1",
        InputType::Type2 => "Type 2",
        InputType::Type3 => "Type 3",
    }
}

fn method_label(m: EmbedMethod) -> &'static str {
    match m {
        EmbedMethod::Bow => "BoW",
        EmbedMethod::Lda => "LDA",
        EmbedMethod::Lsa => "LSA",
        EmbedMethod::Nmf => "NMF",
        EmbedMethod::Aggregate => "Aggregate",
        EmbedMethod::External => "External",
    }
}

/// Type 2 BoW family followed by the external feature files, by name.
fn type2_columns(wb: &Workbench) -> Vec<(String, Features)> {
    let mut cols: Vec<(String, Features)> = BOW_FAMILY
        .iter()
        .map(|&m| (method_label(m).to_string(), Features::Computed(InputType::Type2, m)))
        .collect();
    for (name, path) in &wb.config.tables.external {
        cols.push((name.clone(), Features::File(name.clone(), path.clone())));
    }
    cols
}

pub fn run_table(wb: &mut Workbench, id: TableId) -> Result<Table, StageError> {
    match id {
        TableId::L2Bow => l2_bow(wb),
        TableId::L2All => l2_all(wb),
        TableId::Thresholds => thresholds(wb),
        TableId::Joint => joint(wb),
        TableId::Mw => mw(wb),
        TableId::Hc => hc(wb),
    }
}

fn l2_bow(wb: &mut Workbench) -> Result<Table, StageError> {
    let mut header = vec![String::from("input")];
    for kind in ClassifierKind::ALL {
        header.extend(BOW_FAMILY.iter().map(|&m| format!("{kind}_{m}")));
    }
    let mut table = Table::new(header);
    for t in InputType::ALL {
        let mut row = vec![type_label(t).to_string()];
        for kind in ClassifierKind::ALL {
            for m in BOW_FAMILY {
                row.push(num(wb.loocv(&Features::Computed(t, m), kind)?.l2_loss));
            }
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn l2_all(wb: &mut Workbench) -> Result<Table, StageError> {
    let cols = type2_columns(wb);
    let mut table = Table::new(std::iter::once(String::from("classifier")).chain(cols.iter().map(|c| c.0.clone())));
    for kind in ClassifierKind::ALL {
        let mut row = vec![kind.as_str().to_uppercase()];
        for (_, f) in &cols {
            row.push(num(wb.loocv(f, kind)?.l2_loss));
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn thresholds(wb: &mut Workbench) -> Result<Table, StageError> {
    let mut header = vec![String::from("method")];
    for kind in ClassifierKind::ALL {
        header.push(format!("{kind}_roc"));
        header.push(format!("{kind}_f1"));
    }
    let mut table = Table::new(header);
    let mut rows: Vec<(String, Features)> = Vec::new();
    for m in BOW_FAMILY {
        for t in InputType::ALL {
            rows.push((format!("{} {}", method_label(m), &t.to_string()[4..]), Features::Computed(t, m)));
        }
    }
    for (name, path) in wb.config.tables.external.clone() {
        rows.push((name.clone(), Features::File(name, path)));
    }
    let fixed = wb.config.eval.fixed_threshold;
    for (label, f) in rows {
        let mut row = vec![label];
        for kind in ClassifierKind::ALL {
            let r = wb.loocv(&f, kind)?;
            let th = threshold_report(&r.probs, &r.labels, fixed).map_err(|e| StageError::new(Stage::Eval, e))?;
            row.push(num(th.roc_threshold));
            row.push(num(th.f1_threshold));
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn joint(wb: &mut Workbench) -> Result<Table, StageError> {
    let cols = type2_columns(wb);
    let mut table = Table::new(std::iter::once(String::from("paper")).chain(cols.iter().map(|c| c.0.clone())));
    let joint_ids: Vec<u32> = wb.corpus.documents.iter().filter(|d| d.label == Author::Joint).map(|d| d.id).collect();
    let mut cells: Vec<Vec<String>> = joint_ids.iter().map(|id| vec![format!("No.{id}")]).collect();
    for (_, f) in &cols {
        let preds = wb.predict(f, ClassifierKind::Bart)?;
        for (row, id) in cells.iter_mut().zip(&joint_ids) {
            let p = preds
                .iter()
                .find(|p| p.doc_id == Some(*id))
                .ok_or_else(|| StageError::new(Stage::Table, anyhow::anyhow!("no prediction for paper {id}")))?;
            row.push(num(p.prob_madison));
        }
    }
    table.rows = cells;
    Ok(table)
}

fn hc(wb: &mut Workbench) -> Result<Table, StageError> {
    let mut table = Table::new(["paper", "type", "hamilton", "madison", "diff", "decision"]);
    for r in wb.hc_rows()? {
        table.rows.push(vec![
            r.doc_id.to_string(),
            r.label.to_string(),
            num(r.hamilton),
            num(r.madison),
            num(r.diff),
            r.decision.to_string(),
        ]);
    }
    Ok(table)
}

fn mw(wb: &mut Workbench) -> Result<Table, StageError> {
    let (models, reports) = wb.mw()?;
    let odds = wb.odds_file(&models, &reports);
    let mut table = Table::new(["paper", "type", "log_odds", "decision", "top_word", "top_contribution"]);
    for (d, r) in odds.documents.iter().zip(&reports) {
        let top = r.top(1);
        let (word, c) = top.first().map_or((String::new(), String::new()), |c| (c.word.clone(), num(c.log_ratio)));
        table.rows.push(vec![d.doc_id.to_string(), d.label.to_string(), num(d.total), d.decision.to_string(), word, c]);
    }
    Ok(table)
}
