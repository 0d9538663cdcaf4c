//! Which statements can start which event handlers.

use serde::Serialize;

use crate::ast::{Actor, Event, ExprKind, Program, Stmt, StmtKind};

/// Something a statement does that may start handler scripts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trigger {
    /// Broadcast of a literal message, or of a computed one (`None`).
    Message(Option<String>),
    /// Backdrop switch to a named backdrop, or to an unknown one (`None`).
    Backdrop(Option<String>),
    /// Clone creation of a named sprite, or of a computed target (`None`).
    Clone(Option<String>),
}

const RELATIVE_BACKDROPS: &[&str] = &["next backdrop", "previous backdrop", "random backdrop"];

/// The trigger of `stmt` when it runs inside `actor`.
pub fn stmt_trigger(stmt: &Stmt, actor: &Actor) -> Option<Trigger> {
    match stmt.kind {
        StmtKind::Broadcast | StmtKind::BroadcastAndWait => {
            Some(Trigger::Message(stmt.message().map(str::to_string)))
        }
        StmtKind::SwitchBackdropTo | StmtKind::SwitchBackdropToAndWait => {
            let name = stmt.input("BACKDROP").and_then(menu_literal);
            Some(Trigger::Backdrop(
                name.filter(|n| !RELATIVE_BACKDROPS.contains(&n.as_str())),
            ))
        }
        StmtKind::NextBackdrop => Some(Trigger::Backdrop(None)),
        StmtKind::CreateCloneOf => {
            let target = stmt.input("CLONE_OPTION").and_then(menu_literal).map(|t| {
                if t == "_myself_" {
                    actor.name.clone()
                } else {
                    t
                }
            });
            Some(Trigger::Clone(target))
        }
        _ => None,
    }
}

fn menu_literal(expr: &crate::ast::Expr) -> Option<String> {
    match &expr.kind {
        ExprKind::Text(t) | ExprKind::Number(t) => Some(t.clone()),
        _ => None,
    }
}

/// Whether `trigger` starts a script with `event` owned by `handler_actor`.
pub fn starts(trigger: &Trigger, event: &Event, handler_actor: &Actor) -> bool {
    match (trigger, event) {
        (Trigger::Message(m), Event::ReceptionOfMessage(name)) => {
            m.as_ref().is_none_or(|m| m == name)
        }
        (Trigger::Backdrop(b), Event::BackdropSwitchTo(name)) => {
            b.as_ref().is_none_or(|b| b == name)
        }
        (Trigger::Clone(target), Event::StartedAsClone) => {
            !handler_actor.is_stage && target.as_ref().is_none_or(|t| *t == handler_actor.name)
        }
        _ => false,
    }
}

/// Events that fire without any statement triggering them.
pub fn fires_spontaneously(event: &Event) -> bool {
    matches!(
        event,
        Event::GreenFlag
            | Event::KeyPressed(_)
            | Event::SpriteClicked
            | Event::StageClicked
            | Event::GreaterThan { .. }
            | Event::Other(_)
    )
}

/// Every trigger in the program with the actor it runs in. Loose code counts too.
pub fn all_triggers(program: &Program) -> Vec<(usize, Trigger)> {
    let mut out = Vec::new();
    for (index, actor) in program.actors().enumerate() {
        let mut visit = |s: &Stmt| {
            if let Some(t) = stmt_trigger(s, actor) {
                out.push((index, t));
            }
        };
        for script in &actor.scripts {
            crate::ast::walk_stmts(&script.body, &mut visit);
        }
        for procedure in &actor.procedures {
            crate::ast::walk_stmts(&procedure.body, &mut visit);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HandlerFiring {
    pub actor: String,
    pub top_block_id: String,
    pub event: Event,
    pub fired: bool,
}

/// For each handler script, whether anything in the program can start it.
pub fn reachable_event_edges(program: &Program) -> Vec<HandlerFiring> {
    let triggers = all_triggers(program);
    let mut out = Vec::new();
    for actor in program.actors() {
        for script in &actor.scripts {
            if script.is_loose() {
                continue;
            }
            let fired = fires_spontaneously(&script.event)
                || triggers
                    .iter()
                    .any(|(_, t)| starts(t, &script.event, actor));
            out.push(HandlerFiring {
                actor: actor.name.clone(),
                top_block_id: script.top_block_id.clone(),
                event: script.event.clone(),
                fired,
            });
        }
    }
    out
}
