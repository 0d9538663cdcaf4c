//! Plain-text rendering in scratchblocks syntax.

use std::collections::BTreeSet;

use crate::ast::{
    Actor, BoolOp, Event, Expr, ExprKind, Input, Owner, ParamKind, ProcedureDefinition,
    ReporterKind, Script, Slot, Stmt, StmtKind,
};

pub const ISSUE_MARKER: &str = " // <- ISSUE";

/// Renders a script; lines of highlighted blocks end with [`ISSUE_MARKER`].
pub fn render_scratchblocks(script: &Script, highlight: &BTreeSet<String>) -> String {
    let mut r = Renderer {
        lines: Vec::new(),
        highlight,
    };
    if let Some(line) = hat_line(&script.event) {
        let ids = event_ids(&script.event);
        r.push(
            line,
            std::iter::once(script.top_block_id.as_str()).chain(ids.iter().map(String::as_str)),
        );
    }
    if let Some(e) = &script.loose_reporter {
        let mut ids = Vec::new();
        e.for_each_block_id(&mut |id| ids.push(id.to_string()));
        r.push(expr(e, Slot::Any), ids.iter().map(String::as_str));
    }
    r.stmts(&script.body);
    r.lines.join("\n")
}

pub fn render_procedure(procedure: &ProcedureDefinition, highlight: &BTreeSet<String>) -> String {
    let mut r = Renderer {
        lines: Vec::new(),
        highlight,
    };
    let ids = [
        Some(procedure.definition_block_id.as_str()),
        procedure.prototype_block_id.as_deref(),
    ];
    r.push(define_line(procedure), ids.into_iter().flatten());
    r.stmts(&procedure.body);
    r.lines.join("\n")
}

pub fn render_owner(owner: Owner<'_>, highlight: &BTreeSet<String>) -> String {
    match owner {
        Owner::Script(s) => render_scratchblocks(s, highlight),
        Owner::Procedure(p) => render_procedure(p, highlight),
    }
}

/// The script or procedure of `actor` whose top block is `top_block_id`.
pub fn find_owner<'a>(actor: &'a Actor, top_block_id: &str) -> Option<Owner<'a>> {
    actor
        .scripts
        .iter()
        .find(|s| s.top_block_id == top_block_id)
        .map(Owner::Script)
        .or_else(|| {
            actor
                .procedures
                .iter()
                .find(|p| p.definition_block_id == top_block_id)
                .map(Owner::Procedure)
        })
}

struct Renderer<'h> {
    lines: Vec<String>,
    highlight: &'h BTreeSet<String>,
}

impl Renderer<'_> {
    fn push<'i>(&mut self, mut line: String, mut ids: impl Iterator<Item = &'i str>) {
        if ids.any(|id| self.highlight.contains(id)) {
            line.push_str(ISSUE_MARKER);
        }
        self.lines.push(line);
    }

    fn stmts(&mut self, stmts: &[Stmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        let mut ids = vec![s.block_id.clone()];
        for e in s.exprs() {
            e.for_each_block_id(&mut |id| ids.push(id.to_string()));
        }
        self.push(stmt_line(s), ids.iter().map(String::as_str));
        match s.sub_stacks.len() {
            0 if s.kind.sub_stack_count() == 0 => {}
            0 | 1 => {
                self.stmts(s.sub_stack(0));
                self.lines.push("end".into());
            }
            _ => {
                for (i, sub) in s.sub_stacks.iter().enumerate() {
                    if i > 0 {
                        self.lines.push("else".into());
                    }
                    self.stmts(sub);
                }
                self.lines.push("end".into());
            }
        }
    }
}

fn event_ids(event: &Event) -> Vec<String> {
    let mut ids = Vec::new();
    if let Event::GreaterThan { value, .. } = event {
        value.for_each_block_id(&mut |id| ids.push(id.to_string()));
    }
    ids
}

fn hat_line(event: &Event) -> Option<String> {
    Some(match event {
        Event::GreenFlag => "when green flag clicked".into(),
        Event::KeyPressed(key) => format!("when [{key} v] key pressed"),
        Event::SpriteClicked => "when this sprite clicked".into(),
        Event::StageClicked => "when stage clicked".into(),
        Event::BackdropSwitchTo(name) => format!("when backdrop switches to [{name} v]"),
        Event::ReceptionOfMessage(name) => format!("when I receive [{name} v]"),
        Event::StartedAsClone => "when I start as a clone".into(),
        Event::GreaterThan { attribute, value } => {
            format!(
                "when [{} v] > {}",
                attribute.to_lowercase(),
                expr(value, Slot::Number)
            )
        }
        Event::Other(opcode) => format!("{opcode} :: hat grey"),
        Event::Never => return None,
    })
}

fn define_line(p: &ProcedureDefinition) -> String {
    let mut params = p.parameters.iter();
    let label = fill_placeholders(&p.proccode, |_| {
        params.next().map(|param| match param.kind {
            ParamKind::Boolean => format!("<{}>", param.name),
            ParamKind::StringNumber => format!("({})", param.name),
        })
    });
    format!("define {label}")
}

/// Replaces `%s`, `%n` and `%b` in order with `arg(kind)`; `None` leaves an empty slot.
fn fill_placeholders(proccode: &str, mut arg: impl FnMut(ParamKind) -> Option<String>) -> String {
    let mut out = String::new();
    let mut chars = proccode.chars().peekable();
    while let Some(c) = chars.next() {
        let kind = match (c, chars.peek()) {
            ('%', Some('s' | 'n')) => ParamKind::StringNumber,
            ('%', Some('b')) => ParamKind::Boolean,
            _ => {
                out.push(c);
                continue;
            }
        };
        chars.next();
        out.push_str(&arg(kind).unwrap_or_else(|| match kind {
            ParamKind::Boolean => "<>".into(),
            ParamKind::StringNumber => "[]".into(),
        }));
    }
    out
}

fn stmt_line(s: &Stmt) -> String {
    match s.kind {
        StmtKind::CallProcedure => {
            let proccode = s
                .call
                .as_ref()
                .map(|c| c.proccode.as_str())
                .unwrap_or_default();
            let mut inputs = s.inputs.iter();
            let label = fill_placeholders(proccode, |kind| {
                inputs.next().map(|i| {
                    expr(
                        &i.value,
                        if kind == ParamKind::Boolean {
                            Slot::Bool
                        } else {
                            Slot::Text
                        },
                    )
                })
            });
            format!("{label} :: custom")
        }
        StmtKind::Unknown => format!("{} :: grey", s.opcode),
        kind => fill_template(kind.template().unwrap_or_default(), &s.inputs, &|name| {
            s.field(name).map(|f| f.value.clone()).unwrap_or_default()
        }),
    }
}

/// Fills `{INPUT}` and `{F:FIELD}` slots of an opcode template.
fn fill_template(template: &str, inputs: &[Input], field: &dyn Fn(&str) -> String) -> String {
    let mut out = String::new();
    let mut rest = template;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let Some(len) = rest[start..].find('}') else {
            break;
        };
        let name = &rest[start + 1..start + len];
        match name.strip_prefix("F:") {
            Some(f) => out.push_str(&format!("[{} v]", field(f))),
            None => match inputs.iter().find(|i| i.name == name) {
                Some(i) => out.push_str(&expr(&i.value, i.slot)),
                None => out.push_str("()"),
            },
        }
        rest = &rest[start + len + 1..];
    }
    out.push_str(rest);
    out
}

fn menu_label(value: &str) -> String {
    match value {
        "_mouse_" => "mouse-pointer",
        "_random_" => "random position",
        "_edge_" => "edge",
        "_myself_" => "myself",
        "_stage_" => "Stage",
        other => other,
    }
    .to_string()
}

/// Renders an expression placed in a slot of type `slot`.
pub fn expr(e: &Expr, slot: Slot) -> String {
    let is_menu = matches!(slot, Slot::Menu | Slot::Touching | Slot::Broadcast);
    match &e.kind {
        ExprKind::Number(t) if is_menu => format!("({} v)", menu_label(t)),
        ExprKind::Text(t) if is_menu => format!("({} v)", menu_label(t)),
        ExprKind::Number(t) => format!("({t})"),
        ExprKind::Text(t) => format!("[{t}]"),
        ExprKind::Bool(b) => format!("<{b}>"),
        ExprKind::Color(c) => format!("[{c}]"),
        ExprKind::Broadcast { name, .. } => format!("({name} v)"),
        ExprKind::Variable { name, .. } => format!("({name})"),
        ExprKind::List { name, .. } => format!("({name} :: list)"),
        ExprKind::Parameter {
            name,
            kind: ParamKind::Boolean,
        } => format!("<{name}>"),
        ExprKind::Parameter { name, .. } => format!("({name})"),
        ExprKind::Answer => "(answer)".into(),
        ExprKind::EmptyBool => "<>".into(),
        ExprKind::EmptyNumber if slot == Slot::Text => "[]".into(),
        ExprKind::EmptyNumber => "()".into(),
        ExprKind::Comparison { op, left, right } => {
            format!(
                "<{} {} {}>",
                expr(left, Slot::Text),
                op.symbol(),
                expr(right, Slot::Text)
            )
        }
        ExprKind::BoolOp {
            op: BoolOp::Not,
            operands,
        } => {
            format!(
                "<not {}>",
                operands
                    .first()
                    .map(|o| expr(o, Slot::Bool))
                    .unwrap_or_else(|| "<>".into())
            )
        }
        ExprKind::BoolOp { op, operands } => {
            let word = if *op == BoolOp::And { "and" } else { "or" };
            let side = |i: usize| {
                operands
                    .get(i)
                    .map(|o| expr(o, Slot::Bool))
                    .unwrap_or_else(|| "<>".into())
            };
            format!("<{} {word} {}>", side(0), side(1))
        }
        ExprKind::Reporter {
            kind: ReporterKind::Unknown,
            opcode,
            ..
        } => format!("({opcode} :: grey)"),
        ExprKind::Reporter {
            kind,
            inputs,
            fields,
            ..
        } => {
            let body = fill_template(kind.template().unwrap_or_default(), inputs, &|name| {
                fields
                    .iter()
                    .find(|f| f.name == name)
                    .map(|f| f.value.clone())
                    .unwrap_or_default()
            });
            if kind.is_boolean() {
                format!("<{body}>")
            } else {
                format!("({body})")
            }
        }
    }
}
