//! Code smells: legal, working code that is hard to read or maintain.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;

use super::clones::cloned_code;
use super::util::{each_expr, each_stmt, is_stop, literal_input};
use super::{Context, Finder, Finding};
use crate::ast::{
    stmt_lists, walk_stmts, CanonMode, Canonical, Event, ExprKind, Owner, ReporterKind, Stmt,
    StmtKind,
};

finder!(BusyWaiting, "busy_waiting", CodeSmell, busy_waiting);
finder!(ClonedCode, "cloned_code", CodeSmell, cloned_code);
finder!(
    CodeLyingAround,
    "code_lying_around",
    CodeSmell,
    code_lying_around
);
finder!(DoubleIf, "double_if", CodeSmell, double_if);
finder!(
    DuplicateSprite,
    "duplicate_sprite",
    CodeSmell,
    duplicate_sprite
);
finder!(
    DuplicatedScript,
    "duplicated_script",
    CodeSmell,
    duplicated_script
);
finder!(
    EmptyControlBody,
    "empty_control_body",
    CodeSmell,
    empty_control_body
);
finder!(
    EmptyCustomBlock,
    "empty_custom_block",
    CodeSmell,
    empty_custom_block
);
finder!(EmptyProject, "empty_project", CodeSmell, empty_project);
finder!(EmptyScript, "empty_script", CodeSmell, empty_script);
finder!(EmptySprite, "empty_sprite", CodeSmell, empty_sprite);
finder!(LongScript, "long_script", CodeSmell, long_script);
finder!(MessageNaming, "message_naming", CodeSmell, message_naming);
finder!(MiddleMan, "middle_man", CodeSmell, middle_man);
finder!(
    MultiAttributeModification,
    "multi_attribute_modification",
    CodeSmell,
    multi_attribute_modification
);
finder!(NestedLoops, "nested_loops", CodeSmell, nested_loops);
finder!(
    SameVariableDifferentSprite,
    "same_variable_different_sprite",
    CodeSmell,
    same_variable_different_sprite
);
finder!(
    SequentialActions,
    "sequential_actions",
    CodeSmell,
    sequential_actions
);
finder!(SpriteNaming, "sprite_naming", CodeSmell, sprite_naming);
finder!(
    UnnecessaryIfAfterUntil,
    "unnecessary_if_after_until",
    CodeSmell,
    unnecessary_if_after_until
);
finder!(
    UnnecessaryLoop,
    "unnecessary_loop",
    CodeSmell,
    unnecessary_loop
);
finder!(
    UnusedCustomBlock,
    "unused_custom_block",
    CodeSmell,
    unused_custom_block
);
finder!(
    UnusedParameter,
    "unused_parameter",
    CodeSmell,
    unused_parameter
);
finder!(
    UnusedVariable,
    "unused_variable",
    CodeSmell,
    unused_variable
);
finder!(
    VariableInitializationRace,
    "variable_initialization_race",
    CodeSmell,
    variable_initialization_race
);

pub fn finders() -> Vec<Box<dyn Finder>> {
    vec![
        Box::new(BusyWaiting),
        Box::new(ClonedCode),
        Box::new(CodeLyingAround),
        Box::new(DoubleIf),
        Box::new(DuplicateSprite),
        Box::new(DuplicatedScript),
        Box::new(EmptyControlBody),
        Box::new(EmptyCustomBlock),
        Box::new(EmptyProject),
        Box::new(EmptyScript),
        Box::new(EmptySprite),
        Box::new(LongScript),
        Box::new(MessageNaming),
        Box::new(MiddleMan),
        Box::new(MultiAttributeModification),
        Box::new(NestedLoops),
        Box::new(SameVariableDifferentSprite),
        Box::new(SequentialActions),
        Box::new(SpriteNaming),
        Box::new(UnnecessaryIfAfterUntil),
        Box::new(UnnecessaryLoop),
        Box::new(UnusedCustomBlock),
        Box::new(UnusedParameter),
        Box::new(UnusedVariable),
        Box::new(VariableInitializationRace),
    ]
}

fn exact(s: &Stmt) -> String {
    s.canonical(CanonMode::Exact)
}

fn cond_text(s: &Stmt) -> Option<String> {
    s.condition().map(|c| c.canonical(CanonMode::Exact))
}

fn busy_waiting(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.kind != StmtKind::Forever {
            return;
        }
        let mut conditions = 0;
        walk_stmts(s.sub_stack(0), &mut |n| {
            conditions += usize::from(n.condition().is_some())
        });
        let waits_then_stops = s.sub_stack(0).iter().any(|n| {
            n.kind == StmtKind::IfThen && matches!(n.sub_stack(0), [only] if is_stop(only))
        });
        if conditions == 1 && waits_then_stops {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn code_lying_around(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for script in actor.scripts.iter().filter(|s| s.is_loose()) {
            if !script.body.is_empty() || script.loose_reporter.is_some() {
                let id = &script.top_block_id;
                out.push(Finding::at(actor, Some(id), id));
            }
        }
    }
    out
}

fn double_if(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for list in stmt_lists(ctx.program) {
        for pair in list.stmts.windows(2) {
            let both_if = pair.iter().all(|s| s.kind == StmtKind::IfThen);
            if both_if && cond_text(&pair[0]) == cond_text(&pair[1]) {
                let ids = pair.iter().map(|s| s.block_id.clone()).collect();
                out.push(Finding::new(
                    list.actor,
                    Some(list.owner.top_block_id()),
                    ids,
                ));
            }
        }
    }
    out
}

fn duplicate_sprite(ctx: &Context<'_>) -> Vec<Finding> {
    let sprites: Vec<_> = ctx
        .program
        .sprites
        .iter()
        .filter(|a| !a.scripts.is_empty() || !a.procedures.is_empty())
        .map(|a| {
            let mut sig: Vec<String> = a
                .scripts
                .iter()
                .map(|s| s.canonical(CanonMode::Exact))
                .collect();
            sig.extend(a.procedures.iter().map(|p| p.canonical(CanonMode::Exact)));
            sig.sort();
            (a, sig)
        })
        .collect();
    let mut out = Vec::new();
    for (j, (actor, sig)) in sprites.iter().enumerate() {
        if let Some((other, _)) = sprites[..j].iter().find(|(_, s)| s == sig) {
            let mut ids: Vec<String> = actor
                .scripts
                .iter()
                .map(|s| s.top_block_id.clone())
                .collect();
            ids.extend(
                actor
                    .procedures
                    .iter()
                    .map(|p| p.definition_block_id.clone()),
            );
            out.push(Finding::new(actor, None, ids).param("other", &other.name));
        }
    }
    out
}

fn duplicated_script(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let scripts: Vec<_> = actor
            .scripts
            .iter()
            .filter(|s| !s.is_loose() && !s.body.is_empty())
            .map(|s| (s, s.canonical(CanonMode::Exact)))
            .collect();
        for (i, (a, ca)) in scripts.iter().enumerate() {
            for (b, cb) in &scripts[i + 1..] {
                if ca == cb {
                    let ids = vec![a.top_block_id.clone(), b.top_block_id.clone()];
                    out.push(Finding::new(actor, Some(&a.top_block_id), ids));
                }
            }
        }
    }
    out
}

fn empty_control_body(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        let expected = s.kind.sub_stack_count();
        if (0..expected).any(|i| s.sub_stack(i).is_empty()) {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn empty_custom_block(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for p in actor.procedures.iter().filter(|p| p.body.is_empty()) {
            let id = &p.definition_block_id;
            out.push(Finding::at(actor, Some(id), id).param("proccode", &p.proccode));
        }
    }
    out
}

fn empty_project(ctx: &Context<'_>) -> Vec<Finding> {
    let stage = &ctx.program.stage;
    let empty =
        ctx.program.sprites.is_empty() && stage.scripts.is_empty() && stage.procedures.is_empty();
    if empty {
        vec![Finding::new(&ctx.program.stage, None, Vec::new())]
    } else {
        Vec::new()
    }
}

fn empty_script(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for script in actor
            .scripts
            .iter()
            .filter(|s| !s.is_loose() && s.body.is_empty())
        {
            let id = &script.top_block_id;
            out.push(Finding::at(actor, Some(id), id));
        }
    }
    out
}

fn empty_sprite(ctx: &Context<'_>) -> Vec<Finding> {
    ctx.program
        .sprites
        .iter()
        .filter(|a| a.scripts.is_empty() && a.procedures.is_empty())
        .map(|a| Finding::new(a, None, Vec::new()))
        .collect()
}

fn long_script(ctx: &Context<'_>) -> Vec<Finding> {
    let threshold = ctx.config.long_script_threshold;
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for script in &actor.scripts {
            let count = script.stack_block_count();
            if count > threshold {
                let id = &script.top_block_id;
                out.push(
                    Finding::at(actor, Some(id), id)
                        .param("count", count)
                        .param("threshold", threshold),
                );
            }
        }
    }
    out
}

fn default_message_name(name: &str) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"^(?i:message|nachricht|mensaje)\s*\d*$").unwrap());
    re.is_match(name.trim()) || name.trim().chars().count() <= 1
}

fn message_naming(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if let Some(m) = s.message().filter(|m| default_message_name(m)) {
            out.push(
                Finding::at(c.actor, c.script_top_block_id(), &s.block_id).param("message", m),
            );
        }
    });
    for actor in ctx.program.actors() {
        for script in &actor.scripts {
            if let Event::ReceptionOfMessage(m) = &script.event {
                if default_message_name(m) {
                    let id = &script.top_block_id;
                    out.push(Finding::at(actor, Some(id), id).param("message", m));
                }
            }
        }
    }
    out
}

fn middle_man(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for script in &actor.scripts {
            if let (Event::ReceptionOfMessage(m), [only]) = (&script.event, script.body.as_slice())
            {
                if matches!(only.kind, StmtKind::Broadcast | StmtKind::BroadcastAndWait) {
                    let id = &script.top_block_id;
                    out.push(Finding::at(actor, Some(id), id).param("name", m));
                }
            }
        }
        for p in &actor.procedures {
            if let [only] = p.body.as_slice() {
                if only.kind == StmtKind::CallProcedure {
                    let id = &p.definition_block_id;
                    out.push(Finding::at(actor, Some(id), id).param("name", &p.proccode));
                }
            }
        }
    }
    out
}

/// The attribute a statement sets or changes, as a grouping key.
fn modified_attribute(s: &Stmt) -> Option<String> {
    let fixed = match s.kind {
        StmtKind::SetVariable | StmtKind::ChangeVariableBy => {
            return s.variable().map(|(id, _)| format!("var:{id}"))
        }
        StmtKind::SetEffectTo | StmtKind::ChangeEffectBy => {
            return Some(format!(
                "effect:{}",
                s.field("EFFECT").map(|f| f.value.as_str()).unwrap_or("")
            ))
        }
        StmtKind::SetPenColorParamTo | StmtKind::ChangePenColorParamBy => {
            return Some(format!(
                "pen:{}",
                literal_input(s, "COLOR_PARAM").unwrap_or_default()
            ))
        }
        StmtKind::SetX | StmtKind::ChangeXBy => "x",
        StmtKind::SetY | StmtKind::ChangeYBy => "y",
        StmtKind::SetSizeTo | StmtKind::ChangeSizeBy => "size",
        StmtKind::PointInDirection | StmtKind::TurnRight | StmtKind::TurnLeft => "direction",
        StmtKind::SetVolumeTo | StmtKind::ChangeVolumeBy => "volume",
        StmtKind::SetPenSizeTo | StmtKind::ChangePenSizeBy => "pen size",
        _ => return None,
    };
    Some(fixed.to_string())
}

/// Maximal runs of adjacent statements sharing a key, at least `min` long.
fn runs(stmts: &[Stmt], min: usize, key: impl Fn(&Stmt) -> Option<String>) -> Vec<&[Stmt]> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < stmts.len() {
        let k = key(&stmts[start]);
        let mut end = start + 1;
        if k.is_some() {
            while end < stmts.len() && key(&stmts[end]) == k {
                end += 1;
            }
            if end - start >= min {
                out.push(&stmts[start..end]);
            }
        }
        start = end;
    }
    out
}

fn run_findings(
    ctx: &Context<'_>,
    min: usize,
    key: impl Fn(&Stmt) -> Option<String>,
) -> Vec<Finding> {
    let mut out = Vec::new();
    for list in stmt_lists(ctx.program) {
        for run in runs(list.stmts, min, &key) {
            let ids = run.iter().map(|s| s.block_id.clone()).collect();
            out.push(
                Finding::new(list.actor, Some(list.owner.top_block_id()), ids)
                    .param("count", run.len()),
            );
        }
    }
    out
}

fn multi_attribute_modification(ctx: &Context<'_>) -> Vec<Finding> {
    run_findings(ctx, 2, modified_attribute)
}

fn sequential_actions(ctx: &Context<'_>) -> Vec<Finding> {
    run_findings(ctx, 3, |s| Some(exact(s)))
}

fn nested_loops(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if let (true, [inner]) = (s.is_loop(), s.sub_stack(0)) {
            if inner.is_loop() {
                let ids = vec![s.block_id.clone(), inner.block_id.clone()];
                out.push(Finding::new(c.actor, c.script_top_block_id(), ids));
            }
        }
    });
    out
}

fn same_variable_different_sprite(ctx: &Context<'_>) -> Vec<Finding> {
    let mut owners: BTreeMap<&str, Vec<&crate::ast::Actor>> = BTreeMap::new();
    for actor in &ctx.program.sprites {
        for v in &actor.variables {
            let list = owners.entry(v.name.as_str()).or_default();
            if !list.iter().any(|a| a.name == actor.name) {
                list.push(actor);
            }
        }
    }
    owners
        .into_iter()
        .filter(|(_, actors)| actors.len() > 1)
        .map(|(name, actors)| {
            let names: Vec<&str> = actors.iter().map(|a| a.name.as_str()).collect();
            Finding::new(actors[0], None, Vec::new())
                .param("name", name)
                .param("actors", names.join(", "))
        })
        .collect()
}

fn sprite_naming(ctx: &Context<'_>) -> Vec<Finding> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"^(Sprite|Figur|Objeto|Personaje)\d*$").unwrap());
    ctx.program
        .sprites
        .iter()
        .filter(|a| re.is_match(&a.name))
        .map(|a| Finding::new(a, None, Vec::new()).param("name", &a.name))
        .collect()
}

fn unnecessary_if_after_until(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for list in stmt_lists(ctx.program) {
        for pair in list.stmts.windows(2) {
            let (until, check) = (&pair[0], &pair[1]);
            if until.kind == StmtKind::RepeatUntil
                && check.kind == StmtKind::IfThen
                && cond_text(until).is_some()
                && cond_text(until) == cond_text(check)
            {
                out.push(Finding::at(
                    list.actor,
                    Some(list.owner.top_block_id()),
                    &check.block_id,
                ));
            }
        }
    }
    out
}

fn unnecessary_loop(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.kind != StmtKind::RepeatTimes {
            return;
        }
        if let Some(n) = s
            .input("TIMES")
            .and_then(|e| e.literal_number())
            .filter(|n| *n <= 1.0)
        {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id).param("times", n));
        }
    });
    out
}

fn unused_custom_block(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let mut called: BTreeSet<(String, String)> = BTreeSet::new();
        let owners = actor
            .scripts
            .iter()
            .map(Owner::Script)
            .chain(actor.procedures.iter().map(Owner::Procedure));
        for owner in owners {
            walk_stmts(owner.body(), &mut |s| {
                if let Some(call) = &s.call {
                    called.insert((call.proccode.clone(), owner.top_block_id().to_string()));
                }
            });
        }
        for p in &actor.procedures {
            let used = called
                .iter()
                .any(|(code, from)| *code == p.proccode && *from != p.definition_block_id);
            if !used {
                let id = &p.definition_block_id;
                out.push(Finding::at(actor, Some(id), id).param("proccode", &p.proccode));
            }
        }
    }
    out
}

fn unused_parameter(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for p in &actor.procedures {
            let mut used = BTreeSet::new();
            walk_stmts(&p.body, &mut |s| {
                for e in s.exprs() {
                    e.walk(&mut |x| {
                        if let ExprKind::Parameter { name, .. } = &x.kind {
                            used.insert(name.clone());
                        }
                    });
                }
            });
            for param in p.parameters.iter().filter(|q| !used.contains(&q.name)) {
                let id = &p.definition_block_id;
                out.push(
                    Finding::at(actor, Some(id), id)
                        .param("name", &param.name)
                        .param("proccode", &p.proccode),
                );
            }
        }
    }
    out
}

fn unused_variable(ctx: &Context<'_>) -> Vec<Finding> {
    let mut ids = BTreeSet::new();
    let mut names = BTreeSet::new();
    each_stmt(ctx.program, |s, _| {
        if let Some((id, name)) = s.variable() {
            ids.insert(id.to_string());
            names.insert(name.to_string());
        }
    });
    each_expr(ctx.program, |e, _| match &e.kind {
        ExprKind::Variable { id, name } => {
            ids.insert(id.clone());
            names.insert(name.clone());
        }
        ExprKind::Reporter {
            kind: ReporterKind::Of,
            fields,
            ..
        } => {
            names.extend(
                fields
                    .iter()
                    .filter(|f| f.name == "PROPERTY")
                    .map(|f| f.value.clone()),
            );
        }
        _ => {}
    });
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for v in &actor.variables {
            if !ids.contains(&v.id) && !names.contains(&v.name) {
                out.push(Finding::new(actor, None, Vec::new()).param("name", &v.name));
            }
        }
    }
    out
}

fn variable_initialization_race(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let mut groups: BTreeMap<(String, String), Vec<(&str, String)>> = BTreeMap::new();
        for script in actor.scripts.iter().filter(|s| !s.is_loose()) {
            let event = script.event.canonical(CanonMode::Exact);
            for s in &script.body {
                let value = s.input("VALUE").and_then(|e| e.literal_text());
                if let (StmtKind::SetVariable, Some((id, _)), Some(value)) =
                    (s.kind, s.variable(), value)
                {
                    groups
                        .entry((event.clone(), id.to_string()))
                        .or_default()
                        .push((&s.block_id, value));
                }
            }
        }
        for sets in groups.values() {
            let values: BTreeSet<&String> = sets.iter().map(|(_, v)| v).collect();
            if values.len() > 1 {
                let ids = sets.iter().map(|(id, _)| id.to_string()).collect();
                out.push(Finding::new(actor, None, ids));
            }
        }
    }
    out
}
