//! Bugs specific to the Scratch runtime: events, pen, assets, key handling.

use super::util::{each_stmt, literal_input};
use super::{Context, Finder, Finding};
use crate::ast::{Event, Stmt, StmtKind};

finder!(
    MissingBackdropSwitch,
    "missing_backdrop_switch",
    ScratchBug,
    missing_backdrop_switch
);
finder!(
    MissingEraseAll,
    "missing_erase_all",
    ScratchBug,
    missing_erase_all
);
finder!(
    MissingPenDown,
    "missing_pen_down",
    ScratchBug,
    missing_pen_down
);
finder!(MissingPenUp, "missing_pen_up", ScratchBug, missing_pen_up);
finder!(
    MissingResource,
    "missing_resource",
    ScratchBug,
    missing_resource
);
finder!(
    StutteringMovement,
    "stuttering_movement",
    ScratchBug,
    stuttering_movement
);

pub fn finders() -> Vec<Box<dyn Finder>> {
    vec![
        Box::new(MissingBackdropSwitch),
        Box::new(MissingEraseAll),
        Box::new(MissingPenDown),
        Box::new(MissingPenUp),
        Box::new(MissingResource),
        Box::new(StutteringMovement),
    ]
}

fn missing_backdrop_switch(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for firing in ctx.firings() {
        if let (Event::BackdropSwitchTo(name), false) = (&firing.event, firing.fired) {
            if let Some(actor) = ctx.program.actor(&firing.actor) {
                let id = &firing.top_block_id;
                out.push(Finding::at(actor, Some(id), id).param("backdrop", name));
            }
        }
    }
    out
}

/// Reports the first `report` block when the program has one but no `required` block.
fn pen_pair(ctx: &Context<'_>, report: StmtKind, required: StmtKind) -> Vec<Finding> {
    let mut first = None;
    let mut has_required = false;
    each_stmt(ctx.program, |s, c| {
        if s.kind == required {
            has_required = true;
        }
        if s.kind == report && first.is_none() {
            first = Some(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    match first {
        Some(f) if !has_required => vec![f],
        _ => Vec::new(),
    }
}

fn missing_erase_all(ctx: &Context<'_>) -> Vec<Finding> {
    pen_pair(ctx, StmtKind::PenDown, StmtKind::EraseAll)
}

fn missing_pen_down(ctx: &Context<'_>) -> Vec<Finding> {
    pen_pair(ctx, StmtKind::PenUp, StmtKind::PenDown)
}

fn missing_pen_up(ctx: &Context<'_>) -> Vec<Finding> {
    pen_pair(ctx, StmtKind::PenDown, StmtKind::PenUp)
}

const RELATIVE_MENU: &[&str] = &[
    "next costume",
    "previous costume",
    "next backdrop",
    "previous backdrop",
    "random backdrop",
];

fn named_resource(stmt: &Stmt, input: &str) -> Option<String> {
    literal_input(stmt, input).filter(|n| {
        !n.trim().is_empty()
            && n.trim().parse::<f64>().is_err()
            && !RELATIVE_MENU.contains(&n.as_str())
    })
}

fn missing_resource(ctx: &Context<'_>) -> Vec<Finding> {
    let stage = ctx.program.stage.name.as_str();
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        let (missing, kind) = match s.kind {
            StmtKind::SwitchCostumeTo => (
                named_resource(s, "COSTUME").filter(|n| !ctx.assets.has_costume(&c.actor.name, n)),
                "costume",
            ),
            StmtKind::SwitchBackdropTo | StmtKind::SwitchBackdropToAndWait => (
                named_resource(s, "BACKDROP").filter(|n| !ctx.assets.has_costume(stage, n)),
                "backdrop",
            ),
            StmtKind::StartSound | StmtKind::PlayUntilDone => (
                named_resource(s, "SOUND_MENU").filter(|n| !ctx.assets.has_sound(&c.actor.name, n)),
                "sound",
            ),
            _ => (None, ""),
        };
        if let Some(name) = missing {
            out.push(
                Finding::at(c.actor, c.script_top_block_id(), &s.block_id)
                    .param("kind", kind)
                    .param("name", name),
            );
        }
    });
    out
}

fn stuttering_movement(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for script in &actor.scripts {
            let Event::KeyPressed(key) = &script.event else {
                continue;
            };
            let single_move = matches!(
                script.body.as_slice(),
                [s] if matches!(
                    s.kind,
                    StmtKind::MoveSteps | StmtKind::TurnRight | StmtKind::TurnLeft | StmtKind::ChangeXBy | StmtKind::ChangeYBy
                )
            );
            if single_move {
                let id = &script.top_block_id;
                out.push(Finding::at(actor, Some(id), id).param("key", key));
            }
        }
    }
    out
}
