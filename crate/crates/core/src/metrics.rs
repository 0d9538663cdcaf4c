//! Per-project code metrics.
//!
//! Complexity of a script or procedure is `1 + decision points`, where
//! decision points are if, if-else, repeat until and wait until statements
//! plus every boolean operator block. The project value is the mean over all
//! scripts and procedures, weighted by unit (each unit counts once).

use serde::Serialize;

use crate::ast::{walk_stmts, Actor, Event, Expr, ExprKind, Program, Stmt, StmtKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsRecord {
    pub block_count: usize,
    pub script_count: usize,
    pub sprite_count: usize,
    pub procedure_count: usize,
    pub loose_script_count: usize,
    pub weighted_mean_complexity: f64,
}

/// Column names in CSV order.
pub const METRIC_NAMES: [&str; 6] = [
    "blockCount",
    "scriptCount",
    "spriteCount",
    "procedureCount",
    "looseScriptCount",
    "weightedMeanComplexity",
];

impl MetricsRecord {
    fn units(&self) -> usize {
        self.script_count + self.procedure_count
    }

    /// Metrics of two disjoint parts taken together.
    pub fn combine(&self, other: &MetricsRecord) -> MetricsRecord {
        let units = self.units() + other.units();
        let weighted = if units == 0 {
            0.0
        } else {
            (self.weighted_mean_complexity * self.units() as f64
                + other.weighted_mean_complexity * other.units() as f64)
                / units as f64
        };
        MetricsRecord {
            block_count: self.block_count + other.block_count,
            script_count: self.script_count + other.script_count,
            sprite_count: self.sprite_count + other.sprite_count,
            procedure_count: self.procedure_count + other.procedure_count,
            loose_script_count: self.loose_script_count + other.loose_script_count,
            weighted_mean_complexity: weighted,
        }
    }

    /// Values as CSV cells, in [`METRIC_NAMES`] order.
    pub fn csv_cells(&self) -> Vec<String> {
        vec![
            self.block_count.to_string(),
            self.script_count.to_string(),
            self.sprite_count.to_string(),
            self.procedure_count.to_string(),
            self.loose_script_count.to_string(),
            format_complexity(self.weighted_mean_complexity),
        ]
    }
}

pub fn format_complexity(value: f64) -> String {
    let text = format!("{value:.4}");
    let text = text.trim_end_matches('0');
    if text.ends_with('.') {
        format!("{text}0")
    } else {
        text.to_string()
    }
}

fn expr_blocks(e: &Expr) -> usize {
    let mut n = 0;
    e.for_each_block_id(&mut |_| n += 1);
    n
}

fn stmt_blocks(stmts: &[Stmt]) -> usize {
    let mut n = 0;
    for s in stmts {
        s.for_each_block_id(&mut |_| n += 1);
    }
    n
}

fn decisions(stmts: &[Stmt]) -> usize {
    let mut n = 0;
    walk_stmts(stmts, &mut |s| {
        if matches!(
            s.kind,
            StmtKind::IfThen | StmtKind::IfElse | StmtKind::RepeatUntil | StmtKind::WaitUntil
        ) {
            n += 1;
        }
        for e in s.exprs() {
            e.walk(&mut |x| n += usize::from(matches!(x.kind, ExprKind::BoolOp { .. })));
        }
    });
    n
}

pub fn actor_metrics(actor: &Actor) -> MetricsRecord {
    let (mut m, complexity) = actor_parts(actor);
    if m.units() > 0 {
        m.weighted_mean_complexity = complexity as f64 / m.units() as f64;
    }
    m
}

/// Counts of an actor plus its summed (unaveraged) complexity.
fn actor_parts(actor: &Actor) -> (MetricsRecord, usize) {
    let mut m = MetricsRecord {
        sprite_count: usize::from(!actor.is_stage),
        ..Default::default()
    };
    let mut complexity = 0;
    for script in &actor.scripts {
        m.block_count += stmt_blocks(&script.body);
        if let Some(e) = &script.loose_reporter {
            m.block_count += expr_blocks(e);
        }
        if let Event::GreaterThan { value, .. } = &script.event {
            m.block_count += expr_blocks(value);
        }
        if script.is_loose() {
            m.loose_script_count += 1;
        } else {
            m.block_count += 1;
            m.script_count += 1;
            complexity += 1 + decisions(&script.body);
        }
    }
    for p in &actor.procedures {
        m.block_count += 1 + stmt_blocks(&p.body);
        m.procedure_count += 1;
        complexity += 1 + decisions(&p.body);
    }
    (m, complexity)
}

pub fn compute_metrics(program: &Program) -> MetricsRecord {
    let mut total = MetricsRecord::default();
    let mut complexity = 0;
    for actor in program.actors() {
        let (m, c) = actor_parts(actor);
        total = total.combine(&m);
        complexity += c;
    }
    if total.units() > 0 {
        total.weighted_mean_complexity = complexity as f64 / total.units() as f64;
    }
    total
}
