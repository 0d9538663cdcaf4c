//! Syntax errors: blocks that cannot mean anything sensible as written.

use std::collections::BTreeMap;

use super::util::{each_expr, each_stmt, expr_location};
use super::{Context, Finder, Finding};
use crate::ast::{ExprKind, Owner, ParamKind, Slot, StmtKind};

finder!(
    AmbiguousCustomBlockSignature,
    "ambiguous_custom_block_signature",
    SyntaxError,
    ambiguous_signature
);
finder!(
    AmbiguousParameterName,
    "ambiguous_parameter_name",
    SyntaxError,
    ambiguous_parameter
);
finder!(
    CallWithoutDefinition,
    "call_without_definition",
    SyntaxError,
    call_without_definition
);
finder!(
    ExpressionAsTouchingOrColor,
    "expression_as_touching_or_color",
    SyntaxError,
    expression_as_touching
);
finder!(
    IllegalParameterRefactor,
    "illegal_parameter_refactor",
    SyntaxError,
    illegal_parameter_refactor
);
finder!(
    MissingTerminationCondition,
    "missing_termination_condition",
    SyntaxError,
    missing_termination
);
finder!(
    MissingWaitUntilCondition,
    "missing_wait_until_condition",
    SyntaxError,
    missing_wait_until
);
finder!(
    OrphanedParameter,
    "orphaned_parameter",
    SyntaxError,
    orphaned_parameter
);
finder!(
    ParameterOutOfScope,
    "parameter_out_of_scope",
    SyntaxError,
    parameter_out_of_scope
);

pub fn finders() -> Vec<Box<dyn Finder>> {
    vec![
        Box::new(AmbiguousCustomBlockSignature),
        Box::new(AmbiguousParameterName),
        Box::new(CallWithoutDefinition),
        Box::new(ExpressionAsTouchingOrColor),
        Box::new(IllegalParameterRefactor),
        Box::new(MissingTerminationCondition),
        Box::new(MissingWaitUntilCondition),
        Box::new(OrphanedParameter),
        Box::new(ParameterOutOfScope),
    ]
}

fn ambiguous_signature(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for p in &actor.procedures {
            groups
                .entry(&p.proccode)
                .or_default()
                .push(&p.definition_block_id);
        }
        for (proccode, ids) in groups {
            if ids.len() > 1 {
                let ids: Vec<String> = ids.into_iter().map(str::to_string).collect();
                out.push(
                    Finding::new(actor, Some(&ids[0].clone()), ids).param("proccode", proccode),
                );
            }
        }
    }
    out
}

fn ambiguous_parameter(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        for p in &actor.procedures {
            let mut seen = Vec::new();
            let mut dup = None;
            for param in &p.parameters {
                if seen.contains(&param.name.as_str()) {
                    dup.get_or_insert(param.name.as_str());
                }
                seen.push(&param.name);
            }
            if let Some(name) = dup {
                let id = &p.definition_block_id;
                out.push(
                    Finding::at(actor, Some(id), id)
                        .param("name", name)
                        .param("proccode", &p.proccode),
                );
            }
        }
    }
    out
}

fn call_without_definition(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if let Some(call) = &s.call {
            if c.actor.procedure(&call.proccode).is_none() {
                out.push(
                    Finding::at(c.actor, c.script_top_block_id(), &s.block_id)
                        .param("proccode", &call.proccode),
                );
            }
        }
    });
    out
}

fn expression_as_touching(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        let bad = match c.slot {
            Some(Slot::Color) => !matches!(e.kind, ExprKind::Color(_)),
            Some(Slot::Touching) => !matches!(
                e.kind,
                ExprKind::Text(_) | ExprKind::Number(_) | ExprKind::EmptyNumber
            ),
            _ => false,
        };
        if bad {
            if let Some(id) = expr_location(e, c) {
                out.push(Finding::at(c.actor, c.script_top_block_id(), id));
            }
        }
    });
    out
}

fn illegal_parameter_refactor(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let ExprKind::Parameter {
            name,
            kind: ParamKind::StringNumber,
        } = &e.kind
        {
            if c.slot == Some(Slot::Bool) {
                if let Some(id) = expr_location(e, c) {
                    out.push(Finding::at(c.actor, c.script_top_block_id(), id).param("name", name));
                }
            }
        }
    });
    out
}

fn missing_condition(ctx: &Context<'_>, kind: StmtKind) -> Vec<Finding> {
    let mut out = Vec::new();
    each_stmt(ctx.program, |s, c| {
        if s.kind == kind && s.condition().is_none_or(|e| e.kind == ExprKind::EmptyBool) {
            out.push(Finding::at(c.actor, c.script_top_block_id(), &s.block_id));
        }
    });
    out
}

fn missing_termination(ctx: &Context<'_>) -> Vec<Finding> {
    missing_condition(ctx, StmtKind::RepeatUntil)
}

fn missing_wait_until(ctx: &Context<'_>) -> Vec<Finding> {
    missing_condition(ctx, StmtKind::WaitUntil)
}

fn orphaned_parameter(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let (ExprKind::Parameter { name, .. }, Some(Owner::Procedure(p))) = (&e.kind, c.owner) {
            if !p.parameters.iter().any(|q| &q.name == name) {
                if let Some(id) = expr_location(e, c) {
                    out.push(Finding::at(c.actor, c.script_top_block_id(), id).param("name", name));
                }
            }
        }
    });
    out
}

fn parameter_out_of_scope(ctx: &Context<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    each_expr(ctx.program, |e, c| {
        if let (ExprKind::Parameter { name, .. }, Some(Owner::Script(_))) = (&e.kind, c.owner) {
            if let Some(id) = expr_location(e, c) {
                out.push(Finding::at(c.actor, c.script_top_block_id(), id).param("name", name));
            }
        }
    });
    out
}
