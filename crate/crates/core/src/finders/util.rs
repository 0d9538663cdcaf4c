//! Small traversal helpers shared by the finders.

use crate::ast::{
    traverse, Actor, Cursor, Expr, ExprKind, Program, ReporterKind, Stmt, StmtKind, StopOption,
    Visitor,
};

struct StmtFn<F>(F);

impl<'a, F: FnMut(&'a Stmt, &Cursor<'a>)> Visitor<'a> for StmtFn<F> {
    fn visit_stmt(&mut self, stmt: &'a Stmt, cursor: &Cursor<'a>) {
        (self.0)(stmt, cursor)
    }
}

struct ExprFn<F>(F);

impl<'a, F: FnMut(&'a Expr, &Cursor<'a>)> Visitor<'a> for ExprFn<F> {
    fn visit_expr(&mut self, expr: &'a Expr, cursor: &Cursor<'a>) {
        (self.0)(expr, cursor)
    }
}

/// Calls `f` for every statement in traversal order.
pub fn each_stmt<'a>(program: &'a Program, f: impl FnMut(&'a Stmt, &Cursor<'a>)) {
    traverse(program, &mut StmtFn(f));
}

/// Calls `f` for every expression in traversal order.
pub fn each_expr<'a>(program: &'a Program, f: impl FnMut(&'a Expr, &Cursor<'a>)) {
    traverse(program, &mut ExprFn(f));
}

/// Block id to report for an expression: its own, or the closest enclosing block.
pub fn expr_location<'a>(expr: &'a Expr, cursor: &Cursor<'a>) -> Option<&'a str> {
    expr.block_id
        .as_deref()
        .or_else(|| cursor.nearest_block_id())
}

/// Whether a condition asks about keys, touching, colours or the mouse button.
pub fn is_sensing_condition(expr: &Expr) -> bool {
    expr.any(&|e| {
        matches!(
            e.reporter_kind(),
            Some(
                ReporterKind::KeyPressed
                    | ReporterKind::TouchingObject
                    | ReporterKind::TouchingColor
                    | ReporterKind::ColorIsTouchingColor
                    | ReporterKind::MouseDown
            )
        )
    })
}

pub fn is_stop(stmt: &Stmt) -> bool {
    matches!(
        stmt.stop_option(),
        Some(StopOption::All | StopOption::ThisScript)
    )
}

/// First statement satisfying `pred` that runs whenever `stmts` runs: top
/// level statements before any terminal one, and the bodies of top-level
/// forever loops.
pub fn must_execute<'a>(stmts: &'a [Stmt], pred: &dyn Fn(&Stmt) -> bool) -> Option<&'a Stmt> {
    for s in stmts {
        if pred(s) {
            return Some(s);
        }
        if s.kind == StmtKind::Forever {
            return must_execute(s.sub_stack(0), pred);
        }
        if s.is_terminal() {
            return None;
        }
    }
    None
}

/// Literal text of a menu or text input.
pub fn literal_input(stmt: &Stmt, name: &str) -> Option<String> {
    match &stmt.input(name)?.kind {
        ExprKind::Text(t) | ExprKind::Number(t) => Some(t.clone()),
        _ => None,
    }
}

/// Names of variables visible in `actor`: its own and the stage's.
pub fn visible_variable_names<'a>(program: &'a Program, actor: &'a Actor) -> Vec<&'a str> {
    let mut names: Vec<&str> = actor.variables.iter().map(|v| v.name.as_str()).collect();
    if !actor.is_stage {
        names.extend(program.stage.variables.iter().map(|v| v.name.as_str()));
    }
    names
}
