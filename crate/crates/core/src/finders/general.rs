//! General bugs: logic that does not do what the author most likely meant.

use std::collections::BTreeSet;

use super::util::{
    each_expr, each_stmt, is_sensing_condition, is_stop, must_execute, visible_variable_names,
};
use super::{Context, Finder, Finding};
use crate::ast::{
    ends_terminal, stmt_lists, CompareOp, Event, Expr, ExprKind, Owner, ReporterKind, Stmt,
    StmtKind, StmtList,
};
use crate::cfg::{Attribute, DefName};

finder!(
    BlockingIfElse,
    "blocking_if_else",
    GeneralBug,
    blocking_if_else
);
finder!(
    ComparingLiterals,
    "comparing_literals",
    GeneralBug,
    comparing_literals
);
finder!(
    CustomBlockWithForever,
    "custom_block_with_forever",
    GeneralBug,
    custom_block_with_forever
);
finder!(
    CustomBlockWithTermination,
    "custom_block_with_termination",
    GeneralBug,
    custom_block_with_termination
);
finder!(
    DeleteCloneAfterBroadcast,
    "delete_clone_after_broadcast",
    GeneralBug,
    delete_clone_after_broadcast
);
finder!(
    EndlessRecursion,
    "endless_recursion",
    GeneralBug,
    endless_recursion
);
finder!(
    ForeverInsideLoop,
    "forever_inside_loop",
    GeneralBug,
    forever_inside_loop
);
finder!(
    InappropriateHatblock,
    "inappropriate_hatblock",
    GeneralBug,
    inappropriate_hatblock
);
finder!(
    InterruptedLoopSensing,
    "interrupted_loop_sensing",
    GeneralBug,
    interrupted_loop_sensing
);
finder!(
    MessageNeverReceived,
    "message_never_received",
    GeneralBug,
    message_never_received
);
finder!(
    MessageNeverSent,
    "message_never_sent",
    GeneralBug,
    message_never_sent
);
finder!(MissingAsk, "missing_ask", GeneralBug, missing_ask);
finder!(
    MissingCloneCall,
    "missing_clone_call",
    GeneralBug,
    missing_clone_call
);
finder!(
    MissingCloneInitialization,
    "missing_clone_initialization",
    GeneralBug,
    missing_clone_initialization
);
finder!(
    MissingInitialization,
    "missing_initialization",
    GeneralBug,
    missing_initialization
);
finder!(
    MissingLoopSensing,
    "missing_loop_sensing",
    GeneralBug,
    missing_loop_sensing
);
finder!(
    NoWorkingScripts,
    "no_working_scripts",
    GeneralBug,
    no_working_scripts
);
finder!(
    PositionEqualsCheck,
    "position_equals_check",
    GeneralBug,
    position_equals_check
);
finder!(
    RecursiveCloning,
    "recursive_cloning",
    GeneralBug,
    recursive_cloning
);
finder!(StopAfterSay, "stop_after_say", GeneralBug, stop_after_say);
finder!(
    TerminatedLoop,
    "terminated_loop",
    GeneralBug,
    terminated_loop
);
finder!(TypeError, "type_error", GeneralBug, type_error);
finder!(
    VariableAsLiteral,
    "variable_as_literal",
    GeneralBug,
    variable_as_literal
);

pub fn finders() -> Vec<Box<dyn Finder>> {
    vec![
        Box::new(BlockingIfElse),
        Box::new(ComparingLiterals),
        Box::new(CustomBlockWithForever),
        Box::new(CustomBlockWithTermination),
        Box::new(DeleteCloneAfterBroadcast),
        Box::new(EndlessRecursion),
        Box::new(ForeverInsideLoop),
        Box::new(InappropriateHatblock),
        Box::new(InterruptedLoopSensing),
        Box::new(MessageNeverReceived),
        Box::new(MessageNeverSent),
        Box::new(MissingAsk),
        Box::new(MissingCloneCall),
        Box::new(MissingCloneInitialization),
        Box::new(MissingInitialization),
        Box::new(MissingLoopSensing),
        Box::new(NoWorkingScripts),
        Box::new(PositionEqualsCheck),
        Box::new(RecursiveCloning),
        Box::new(StopAfterSay),
        Box::new(TerminatedLoop),
        Box::new(TypeError),
        Box::new(VariableAsLiteral),
    ]
}

fn script_id<'a>(list: &StmtList<'a>) -> Option<&'a str> {
    Some(list.owner.top_block_id())
}

/// Calls `f` for each pair of adjacent statements in every statement list.
fn adjacent_pairs<'a>(ctx: &Context<'a>, mut f: impl FnMut(&StmtList<'a>, &'a Stmt, &'a Stmt)) {
    for list in stmt_lists(ctx.program) {
        for pair in list.stmts.windows(2) {
            f(&list, &pair[0], &pair[1]);
        }
    }
}

fn blocking_if_else(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    adjacent_pairs(ctx, |list, s, _| {
        if s.kind == StmtKind::IfElse
            && ends_terminal(s.sub_stack(0))
            && ends_terminal(s.sub_stack(1))
        {
            out.push(Finding::at(list.actor, script_id(list), &s.block_id));
        }
    });
    out
}

fn comparing_literals(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let ExprKind::Comparison { op, left, right } = &e.kind {
            if let (Some(l), Some(r), Some(id)) =
                (left.literal_text(), right.literal_text(), &e.block_id)
            {
                out.push(
                    Finding::at(c.actor, c.script_top_block_id(), id)
                        .param("left", l)
                        .param("op", op.symbol())
                        .param("right", r),
                );
            }
        }
    });
    out
}

/// Calls to procedures matching `pred` that are followed by another statement.
fn calls_with_successor(ctx: &Context<'_>, pred: impl Fn(&[Stmt]) -> bool) -> Vec<Finding> {
    let mut out = Vec::new();
    adjacent_pairs(ctx, |list, s, _| {
        if let Some(call) = &s.call {
            if list
                .actor
                .procedure(&call.proccode)
                .is_some_and(|p| pred(&p.body))
            {
                out.push(
                    Finding::at(list.actor, script_id(list), &s.block_id)
                        .param("proccode", &call.proccode),
                );
            }
        }
    });
    out
}

fn custom_block_with_forever(ctx: &Context<'_>) -> Vec<Finding> {
    calls_with_successor(ctx, |body| body.iter().any(|s| s.kind == StmtKind::Forever))
}

/// Whether a statement list always ends in `stop all` or `stop this script`.
fn always_stops(stmts: &[Stmt]) -> bool {
    stmts.iter().any(|s| {
        is_stop(s)
            || (s.kind == StmtKind::IfElse
                && always_stops(s.sub_stack(0))
                && always_stops(s.sub_stack(1)))
    })
}

fn custom_block_with_termination(ctx: &Context<'_>) -> Vec<Finding> {
    calls_with_successor(ctx, always_stops)
}

fn delete_clone_after_broadcast(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    adjacent_pairs(ctx, |list, a, b| {
        if a.kind == StmtKind::Broadcast && b.kind == StmtKind::DeleteThisClone {
            out.push(Finding::new(
                list.actor,
                script_id(list),
                vec![a.block_id.clone(), b.block_id.clone()],
            ));
        }
    });
    out
}

fn endless_recursion(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for p in &actor.procedures {
            let self_call = |s: &Stmt| s.call.as_ref().is_some_and(|c| c.proccode == p.proccode);
            if let Some(s) = must_execute(&p.body, &self_call) {
                out.push(
                    Finding::at(actor, Some(&p.definition_block_id), &s.block_id)
                        .param("name", &p.proccode),
                );
            }
        }
        for script in &actor.scripts {
            let Event::ReceptionOfMessage(message) = &script.event else {
                continue;
            };
            if let Some(s) = must_execute(&script.body, &|s: &Stmt| {
                s.message() == Some(message.as_str())
            }) {
                out.push(
                    Finding::at(actor, Some(&script.top_block_id), &s.block_id)
                        .param("name", message),
                );
            }
        }
    }
    out
}

fn forever_inside_loop(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.kind == StmtKind::Forever && c.in_loop() {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn inappropriate_hatblock(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        let green_flag =
            matches!(c.owner, Some(Owner::Script(script)) if script.event == Event::GreenFlag);
        if s.kind == StmtKind::DeleteThisClone && green_flag {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn is_time_consuming(s: &Stmt) -> bool {
    matches!(
        s.kind,
        StmtKind::WaitSeconds
            | StmtKind::SayForSecs
            | StmtKind::GlideTo
            | StmtKind::GlideToXY
            | StmtKind::BroadcastAndWait
            | StmtKind::AskAndWait
    )
}

fn interrupted_loop_sensing(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if !s.is_loop() {
            return;
        }
        let mut senses = s.condition().is_some_and(is_sensing_condition);
        for sub in &s.sub_stacks {
            crate::ast::walk_stmts(sub, &mut |n| {
                senses |= n.condition().is_some_and(is_sensing_condition)
            });
        }
        if !senses {
            return;
        }
        for sub in &s.sub_stacks {
            crate::ast::walk_stmts(sub, &mut |n| {
                if is_time_consuming(n) {
                    out.push(Finding::at(c.actor, c.script_top_block_id(), &n.block_id));
                }
            });
        }
    });
    out
}

fn received_messages(ctx: &Context<'_>) -> BTreeSet<String> {
    ctx.program
        .actors()
        .flat_map(|a| &a.scripts)
        .filter_map(|s| match &s.event {
            Event::ReceptionOfMessage(m) => Some(m.clone()),
            _ => None,
        })
        .collect()
}

fn message_never_received(ctx: &Context<'_>) -> Vec<Finding> {
    let received = received_messages(ctx);
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if let Some(m) = s.message() {
            if !received.contains(m) {
                out.push(
                    Finding::at(c.actor, c.script_top_block_id(), &s.block_id).param("message", m),
                );
            }
        }
    });
    out
}

fn unfired(ctx: &Context<'_>, matches: impl Fn(&Event) -> Option<String>) -> Vec<Finding> {
    let mut out = Vec::new();
    for firing in ctx.firings().iter().filter(|f| !f.fired) {
        if let (Some(detail), Some(actor)) =
            (matches(&firing.event), ctx.program.actor(&firing.actor))
        {
            let id = &firing.top_block_id;
            let finding = Finding::at(actor, Some(id), id);
            out.push(if detail.is_empty() {
                finding
            } else {
                finding.param("message", detail)
            });
        }
    }
    out
}

fn message_never_sent(ctx: &Context<'_>) -> Vec<Finding> {
    unfired(ctx, |e| match e {
        Event::ReceptionOfMessage(m) => Some(m.clone()),
        _ => None,
    })
}

fn missing_ask(ctx: &Context<'_>) -> Vec<Finding> {
    let mut has_ask = false;
    each_stmt(ctx.program, |s, _| {
        has_ask |= s.kind == StmtKind::AskAndWait
    });
    if has_ask {
        return Vec::new();
    }
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if e.kind == ExprKind::Answer {
            if let Some(id) = super::util::expr_location(e, c) {
                out.push(Finding::at(c.actor, c.script_top_block_id(), id));
            }
        }
    });
    out
}

fn missing_clone_call(ctx: &Context<'_>) -> Vec<Finding> {
    unfired(ctx, |e| (*e == Event::StartedAsClone).then(String::new))
}

fn missing_clone_initialization(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.kind != StmtKind::CreateCloneOf {
            return;
        }
        let Some(target) = super::util::literal_input(s, "CLONE_OPTION") else {
            return;
        };
        if target == "_myself_" || target == c.actor.name {
            return;
        }
        if let Some(actor) = ctx.program.actor(&target).filter(|a| !a.is_stage) {
            if !actor
                .scripts
                .iter()
                .any(|sc| sc.event == Event::StartedAsClone)
            {
                out.push(
                    Finding::at(c.actor, c.script_top_block_id(), &s.block_id)
                        .param("target", target),
                );
            }
        }
    });
    out
}

/// Names a statement reads before (possibly) writing them.
fn reads(stmt: &Stmt, actor: usize, in_clone_script: bool) -> Vec<(DefName, String)> {
    let mut out = Vec::new();
    for e in stmt.exprs() {
        e.walk(&mut |x| {
            if let ExprKind::Variable { id, name } = &x.kind {
                out.push((DefName::Variable(id.clone()), name.clone()));
            }
        });
    }
    if stmt.kind == StmtKind::ChangeVariableBy {
        if let Some((id, name)) = stmt.variable() {
            out.push((DefName::Variable(id.to_string()), name.to_string()));
        }
    }
    let attribute = match stmt.kind {
        StmtKind::ChangeXBy => Some((Attribute::X, "x position")),
        StmtKind::ChangeYBy => Some((Attribute::Y, "y position")),
        StmtKind::TurnRight | StmtKind::TurnLeft => Some((Attribute::Direction, "direction")),
        StmtKind::ChangeSizeBy => Some((Attribute::Size, "size")),
        StmtKind::NextCostume => Some((Attribute::Costume, "costume")),
        _ => None,
    };
    if let (Some((attribute, label)), false) = (attribute, in_clone_script) {
        out.push((DefName::Attribute { actor, attribute }, label.to_string()));
    }
    out
}

fn missing_initialization(ctx: &Context<'_>) -> Vec<Finding> {
    let cfg = ctx.cfg();
    let facts = ctx.dataflow();
    let mut out = Vec::new();
    for node in 0..cfg.node_count() {
        let (Some(stmt), Some(unit)) = (cfg.stmt(node), cfg.unit_of(node)) else {
            continue;
        };
        let in_clone_script =
            matches!(unit.owner, Owner::Script(s) if s.event == Event::StartedAsClone);
        let undefined = reads(stmt, unit.actor_index, in_clone_script)
            .into_iter()
            .find(|(n, _)| !facts.defined_at(node, n));
        if let Some((_, name)) = undefined {
            out.push(
                Finding::at(unit.actor, Some(unit.owner.top_block_id()), &stmt.block_id)
                    .param("name", name),
            );
        }
    }
    out
}

fn missing_loop_sensing(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.is_conditional() && !c.in_loop() && s.condition().is_some_and(is_sensing_condition) {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn no_working_scripts(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let working = actor
            .scripts
            .iter()
            .any(|s| !s.is_loose() && !s.body.is_empty());
        if !working && !actor.scripts.is_empty() {
            let ids = actor
                .scripts
                .iter()
                .map(|s| s.top_block_id.clone())
                .collect();
            out.push(Finding::new(actor, None, ids));
        }
    }
    out
}

fn is_position(e: &Expr) -> bool {
    matches!(
        e.reporter_kind(),
        Some(
            ReporterKind::XPosition
                | ReporterKind::YPosition
                | ReporterKind::MouseX
                | ReporterKind::MouseY
        )
    )
}

fn position_equals_check(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let ExprKind::Comparison {
            op: CompareOp::Eq,
            left,
            right,
        } = &e.kind
        {
            if let (true, Some(id)) = (is_position(left) || is_position(right), &e.block_id) {
                out.push(Finding::at(c.actor, c.script_top_block_id(), id));
            }
        }
    });
    out
}

fn recursive_cloning(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.sprites.iter() {
        for script in actor
            .scripts
            .iter()
            .filter(|s| s.event == Event::StartedAsClone)
        {
            let clones_self = |s: &Stmt| {
                s.kind == StmtKind::CreateCloneOf
                    && super::util::literal_input(s, "CLONE_OPTION")
                        .is_some_and(|t| t == "_myself_" || t == actor.name)
            };
            if let Some(s) = must_execute(&script.body, &clones_self) {
                out.push(Finding::at(actor, Some(&script.top_block_id), &s.block_id));
            }
        }
    }
    out
}

fn stop_after_say(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    adjacent_pairs(ctx, |list, a, b| {
        if a.kind == StmtKind::Say && is_stop(b) {
            out.push(Finding::new(
                list.actor,
                script_id(list),
                vec![a.block_id.clone(), b.block_id.clone()],
            ));
        }
    });
    out
}

fn terminated_loop(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.is_loop()
            && s.sub_stack(0)
                .iter()
                .any(|b| is_stop(b) || b.kind == StmtKind::DeleteThisClone)
        {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn is_numeric(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Number(t) => t.trim().parse::<f64>().is_ok(),
        ExprKind::Reporter { kind, .. } => matches!(
            kind,
            ReporterKind::XPosition
                | ReporterKind::YPosition
                | ReporterKind::Direction
                | ReporterKind::Size
                | ReporterKind::Volume
                | ReporterKind::MouseX
                | ReporterKind::MouseY
                | ReporterKind::Loudness
                | ReporterKind::Timer
                | ReporterKind::DistanceTo
                | ReporterKind::DaysSince2000
                | ReporterKind::Add
                | ReporterKind::Subtract
                | ReporterKind::Multiply
                | ReporterKind::Divide
                | ReporterKind::Random
                | ReporterKind::Mod
                | ReporterKind::Round
                | ReporterKind::MathOp
                | ReporterKind::Length
                | ReporterKind::LengthOfList
                | ReporterKind::ItemNumOfList
        ),
        _ => false,
    }
}

fn is_word(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Text(t) => {
            let t = t.trim();
            !t.is_empty()
                && t.parse::<f64>().is_err()
                && !t.eq_ignore_ascii_case("true")
                && !t.eq_ignore_ascii_case("false")
        }
        _ => false,
    }
}

fn type_error(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let ExprKind::Comparison { left, right, .. } = &e.kind {
            let mismatch = |a: &Expr, b: &Expr| is_word(a) && (is_numeric(b) || b.is_boolean());
            if mismatch(left, right) || mismatch(right, left) {
                if let Some(id) = &e.block_id {
                    out.push(Finding::at(c.actor, c.script_top_block_id(), id));
                }
            }
        }
    });
    out
}

fn variable_as_literal(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        let operands: Vec<&Expr> = match &e.kind {
            ExprKind::Comparison { left, right, .. } => vec![left, right],
            ExprKind::Reporter {
                kind:
                    ReporterKind::Add
                    | ReporterKind::Subtract
                    | ReporterKind::Multiply
                    | ReporterKind::Divide
                    | ReporterKind::Mod,
                ..
            } => e.children(),
            _ => return,
        };
        let names = visible_variable_names(ctx.program, c.actor);
        let hit = operands.iter().find_map(|o| match &o.kind {
            ExprKind::Text(t) | ExprKind::Number(t) if names.contains(&t.as_str()) => {
                Some(t.clone())
            }
            _ => None,
        });
        if let (Some(name), Some(id)) = (hit, &e.block_id) {
            out.push(Finding::at(c.actor, c.script_top_block_id(), id).param("name", name));
        }
    });
    out
}
