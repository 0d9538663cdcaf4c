//! Canonical text forms of AST nodes with block ids erased.
//!
//! Two nodes are structurally equal when their canonical forms are equal.
//! `Exact` keeps literals and names; `Abstract` replaces them with their kind,
//! which is what type-2 clone detection compares.

use std::fmt::Write;

use super::{Event, Expr, ExprKind, Field, Input, ProcedureDefinition, Script, Stmt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonMode {
    Exact,
    Abstract,
}

pub trait Canonical {
    fn write_canonical(&self, out: &mut String, mode: CanonMode);

    fn canonical(&self, mode: CanonMode) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out, mode);
        out
    }

    fn same_structure(&self, other: &Self) -> bool {
        self.canonical(CanonMode::Exact) == other.canonical(CanonMode::Exact)
    }
}

fn text(out: &mut String, mode: CanonMode, tag: &str, value: &str) {
    match mode {
        CanonMode::Exact => {
            let _ = write!(out, "{tag}{value:?}");
        }
        CanonMode::Abstract => out.push_str(tag),
    }
}

fn fields(out: &mut String, fields: &[Field], mode: CanonMode) {
    for f in fields {
        // Variable and list references are identifiers, other fields are part of the block's meaning.
        let identifier = matches!(f.name.as_str(), "VARIABLE" | "LIST" | "BROADCAST_OPTION");
        out.push('[');
        out.push_str(&f.name);
        out.push('=');
        if identifier && mode == CanonMode::Abstract {
            out.push('_');
        } else {
            let _ = write!(out, "{:?}", f.value);
        }
        out.push(']');
    }
}

fn inputs(out: &mut String, inputs: &[Input], mode: CanonMode) {
    out.push('(');
    for i in inputs {
        out.push_str(&i.name);
        out.push(':');
        i.value.write_canonical(out, mode);
        out.push(',');
    }
    out.push(')');
}

impl Canonical for Expr {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        match &self.kind {
            ExprKind::Number(t) => text(out, mode, "num", t),
            ExprKind::Text(t) => text(out, mode, "str", t),
            ExprKind::Bool(b) => text(out, mode, "bool", &b.to_string()),
            ExprKind::Color(c) => text(out, mode, "color", c),
            ExprKind::Broadcast { name, .. } => text(out, mode, "msg", name),
            ExprKind::Variable { name, .. } => text(out, mode, "var", name),
            ExprKind::List { name, .. } => text(out, mode, "list", name),
            ExprKind::Parameter { name, kind } => text(out, mode, &format!("param{kind:?}"), name),
            ExprKind::Answer => out.push_str("answer"),
            ExprKind::Reporter {
                opcode,
                inputs: ins,
                fields: fs,
                ..
            } => {
                out.push_str(opcode);
                fields(out, fs, mode);
                inputs(out, ins, mode);
            }
            ExprKind::Comparison { op, left, right } => {
                out.push_str(op.opcode());
                out.push('(');
                left.write_canonical(out, mode);
                out.push(',');
                right.write_canonical(out, mode);
                out.push(')');
            }
            ExprKind::BoolOp { op, operands } => {
                out.push_str(op.opcode());
                out.push('(');
                for o in operands {
                    o.write_canonical(out, mode);
                    out.push(',');
                }
                out.push(')');
            }
            ExprKind::EmptyBool => out.push_str("<>"),
            ExprKind::EmptyNumber => out.push_str("()"),
        }
    }
}

impl Stmt {
    /// Canonical form of the block itself, without its sub-stacks.
    pub fn canonical_head(&self, mode: CanonMode) -> String {
        let mut out = String::new();
        out.push_str(&self.opcode);
        if let Some(call) = &self.call {
            text(&mut out, mode, "call", &call.proccode);
        }
        fields(&mut out, &self.fields, mode);
        inputs(&mut out, &self.inputs, mode);
        out
    }
}

impl Canonical for Stmt {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        out.push_str(&self.canonical_head(mode));
        for sub in &self.sub_stacks {
            out.push('{');
            sub.as_slice().write_canonical(out, mode);
            out.push('}');
        }
    }
}

impl Canonical for [Stmt] {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        for s in self {
            s.write_canonical(out, mode);
            out.push(';');
        }
    }
}

impl Canonical for Event {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        match self {
            Event::GreaterThan { attribute, value } => {
                let _ = write!(out, "whengreaterthan[{attribute}]");
                value.write_canonical(out, mode);
            }
            other => {
                let _ = write!(out, "{other:?}");
            }
        }
    }
}

impl Canonical for Script {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        self.event.write_canonical(out, mode);
        out.push(':');
        if let Some(expr) = &self.loose_reporter {
            expr.write_canonical(out, mode);
        }
        self.body.as_slice().write_canonical(out, mode);
    }
}

impl Canonical for ProcedureDefinition {
    fn write_canonical(&self, out: &mut String, mode: CanonMode) {
        let _ = write!(out, "define{:?}{:?}", self.proccode, self.warp);
        for p in &self.parameters {
            let _ = write!(out, "[{}:{:?}]", p.name, p.kind);
        }
        out.push(':');
        self.body.as_slice().write_canonical(out, mode);
    }
}
