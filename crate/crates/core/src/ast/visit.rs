//! Depth-first, pre-order traversal.
//!
//! Order: stage, then sprites; inside an actor, scripts then procedures; a
//! statement is visited before its inputs, its inputs before its sub-stacks.

use super::{Actor, Event, Expr, ProcedureDefinition, Program, Script, Slot, Stmt};

/// The script or procedure a node belongs to.
#[derive(Debug, Clone, Copy)]
pub enum Owner<'a> {
    Script(&'a Script),
    Procedure(&'a ProcedureDefinition),
}

impl<'a> Owner<'a> {
    pub fn top_block_id(&self) -> &'a str {
        match self {
            Owner::Script(s) => &s.top_block_id,
            Owner::Procedure(p) => &p.definition_block_id,
        }
    }

    pub fn body(&self) -> &'a [Stmt] {
        match self {
            Owner::Script(s) => &s.body,
            Owner::Procedure(p) => &p.body,
        }
    }

    pub fn script(&self) -> Option<&'a Script> {
        match self {
            Owner::Script(s) => Some(s),
            Owner::Procedure(_) => None,
        }
    }

    pub fn procedure(&self) -> Option<&'a ProcedureDefinition> {
        match self {
            Owner::Procedure(p) => Some(p),
            Owner::Script(_) => None,
        }
    }
}

/// Where the walker currently is.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    pub actor: &'a Actor,
    pub owner: Option<Owner<'a>>,
    /// Enclosing C-blocks, outermost first, with the sub-stack index taken.
    pub enclosing: Vec<(&'a Stmt, usize)>,
    /// Statement whose inputs are being visited.
    pub stmt: Option<&'a Stmt>,
    /// Enclosing expressions of the current expression, outermost first.
    pub expr_parents: Vec<&'a Expr>,
    /// Slot type the current expression was placed in.
    pub slot: Option<Slot>,
}

impl<'a> Cursor<'a> {
    fn new(actor: &'a Actor) -> Self {
        Cursor {
            actor,
            owner: None,
            enclosing: Vec::new(),
            stmt: None,
            expr_parents: Vec::new(),
            slot: None,
        }
    }

    pub fn in_loop(&self) -> bool {
        self.enclosing.iter().any(|(s, _)| s.is_loop())
    }

    pub fn in_procedure(&self) -> bool {
        matches!(self.owner, Some(Owner::Procedure(_)))
    }

    pub fn script_top_block_id(&self) -> Option<&'a str> {
        self.owner.map(|o| o.top_block_id())
    }

    /// Block id of the nearest enclosing node that is a real block.
    pub fn nearest_block_id(&self) -> Option<&'a str> {
        self.expr_parents
            .iter()
            .rev()
            .find_map(|e| e.block_id.as_deref())
            .or_else(|| self.stmt.map(|s| s.block_id.as_str()))
            .or_else(|| self.script_top_block_id())
    }
}

/// Node callbacks. Every method has an empty default; override only what matters.
///
/// `visit_stmt` / `visit_expr` receive every statement / expression, so a
/// visitor can react to one specific kind (by matching) or to all of them.
pub trait Visitor<'a> {
    fn visit_program(&mut self, _program: &'a Program) {}
    fn visit_actor(&mut self, _actor: &'a Actor) {}
    fn visit_script(&mut self, _script: &'a Script, _cursor: &Cursor<'a>) {}
    fn visit_procedure(&mut self, _procedure: &'a ProcedureDefinition, _cursor: &Cursor<'a>) {}
    fn visit_stmt(&mut self, _stmt: &'a Stmt, _cursor: &Cursor<'a>) {}
    fn visit_expr(&mut self, _expr: &'a Expr, _cursor: &Cursor<'a>) {}
}

pub fn traverse<'a, V: Visitor<'a> + ?Sized>(program: &'a Program, visitor: &mut V) {
    visitor.visit_program(program);
    for actor in program.actors() {
        traverse_actor(actor, visitor);
    }
}

pub fn traverse_actor<'a, V: Visitor<'a> + ?Sized>(actor: &'a Actor, visitor: &mut V) {
    visitor.visit_actor(actor);
    let mut cursor = Cursor::new(actor);
    for script in &actor.scripts {
        cursor.owner = Some(Owner::Script(script));
        visitor.visit_script(script, &cursor);
        if let Event::GreaterThan { value, .. } = &script.event {
            walk_expr(value, Slot::Number, visitor, &mut cursor);
        }
        if let Some(expr) = &script.loose_reporter {
            walk_expr(expr, Slot::Any, visitor, &mut cursor);
        }
        walk_stmts(&script.body, visitor, &mut cursor);
    }
    for procedure in &actor.procedures {
        cursor.owner = Some(Owner::Procedure(procedure));
        visitor.visit_procedure(procedure, &cursor);
        walk_stmts(&procedure.body, visitor, &mut cursor);
    }
}

fn walk_stmts<'a, V: Visitor<'a> + ?Sized>(
    stmts: &'a [Stmt],
    visitor: &mut V,
    cursor: &mut Cursor<'a>,
) {
    for stmt in stmts {
        visitor.visit_stmt(stmt, cursor);
        let outer = cursor.stmt.replace(stmt);
        for input in &stmt.inputs {
            walk_expr(&input.value, input.slot, visitor, cursor);
        }
        cursor.stmt = outer;
        for (index, sub) in stmt.sub_stacks.iter().enumerate() {
            cursor.enclosing.push((stmt, index));
            walk_stmts(sub, visitor, cursor);
            cursor.enclosing.pop();
        }
    }
}

fn walk_expr<'a, V: Visitor<'a> + ?Sized>(
    expr: &'a Expr,
    slot: Slot,
    visitor: &mut V,
    cursor: &mut Cursor<'a>,
) {
    let outer = cursor.slot.replace(slot);
    visitor.visit_expr(expr, cursor);
    cursor.expr_parents.push(expr);
    match &expr.kind {
        super::ExprKind::Reporter { inputs, .. } => {
            for input in inputs {
                walk_expr(&input.value, input.slot, visitor, cursor);
            }
        }
        super::ExprKind::Comparison { left, right, .. } => {
            walk_expr(left, Slot::Text, visitor, cursor);
            walk_expr(right, Slot::Text, visitor, cursor);
        }
        super::ExprKind::BoolOp { operands, .. } => {
            for o in operands {
                walk_expr(o, Slot::Bool, visitor, cursor);
            }
        }
        _ => {}
    }
    cursor.expr_parents.pop();
    cursor.slot = outer;
}

/// One statement sequence: a script body, a procedure body or a sub-stack.
#[derive(Debug, Clone, Copy)]
pub struct StmtList<'a> {
    pub actor: &'a Actor,
    pub owner: Owner<'a>,
    /// The C-block owning this sequence, `None` for top-level bodies.
    pub parent: Option<&'a Stmt>,
    pub stmts: &'a [Stmt],
}

/// Every statement sequence of the program, in traversal order.
pub fn stmt_lists(program: &Program) -> Vec<StmtList<'_>> {
    fn collect<'a>(
        actor: &'a Actor,
        owner: Owner<'a>,
        parent: Option<&'a Stmt>,
        stmts: &'a [Stmt],
        out: &mut Vec<StmtList<'a>>,
    ) {
        out.push(StmtList {
            actor,
            owner,
            parent,
            stmts,
        });
        for s in stmts {
            for sub in &s.sub_stacks {
                collect(actor, owner, Some(s), sub, out);
            }
        }
    }
    let mut out = Vec::new();
    for actor in program.actors() {
        for script in &actor.scripts {
            collect(actor, Owner::Script(script), None, &script.body, &mut out);
        }
        for procedure in &actor.procedures {
            collect(
                actor,
                Owner::Procedure(procedure),
                None,
                &procedure.body,
                &mut out,
            );
        }
    }
    out
}
