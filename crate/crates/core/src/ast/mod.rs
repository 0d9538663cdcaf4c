//! Typed syntax tree of a Scratch 3.0 project.
//!
//! A [`Program`] owns one stage and any number of sprites. Scripts hold
//! statements, statements hold input expressions and sub-stacks. Every node is
//! immutable after parsing.

mod canon;
pub mod opcodes;
mod parse;
mod sb3;
mod visit;

use serde::Serialize;

pub use canon::{CanonMode, Canonical};
pub use opcodes::{ReporterKind, Slot, StmtKind};
pub use parse::{decode_input, parse_project, parse_project_value, ParseError};
pub use sb3::{load_sb3, ActorAssets, ArchiveError, AssetInventory};
pub use visit::{stmt_lists, traverse, Cursor, Owner, StmtList, Visitor};

#[derive(Debug, Clone, Serialize)]
pub struct Program {
    pub name: String,
    pub stage: Actor,
    pub sprites: Vec<Actor>,
    pub project_id: Option<u64>,
    pub source_path: Option<String>,
    /// Non-fatal oddities encountered while parsing.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Program {
    /// Stage first, then sprites in target order.
    pub fn actors(&self) -> impl Iterator<Item = &Actor> + '_ {
        std::iter::once(&self.stage).chain(self.sprites.iter())
    }

    pub fn actor(&self, name: &str) -> Option<&Actor> {
        self.actors().find(|a| a.name == name)
    }

    /// Same program with every loose script dropped.
    pub fn without_loose_scripts(&self) -> Program {
        let mut program = self.clone();
        for actor in std::iter::once(&mut program.stage).chain(program.sprites.iter_mut()) {
            actor.scripts.retain(|s| !s.is_loose());
        }
        program
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Actor {
    pub name: String,
    pub is_stage: bool,
    pub variables: Vec<VariableDecl>,
    pub lists: Vec<ListDecl>,
    pub broadcasts: Vec<BroadcastDecl>,
    pub scripts: Vec<Script>,
    pub procedures: Vec<ProcedureDefinition>,
    pub costume_names: Vec<String>,
    pub sound_names: Vec<String>,
    pub current_costume: i64,
}

impl Actor {
    pub fn procedure(&self, proccode: &str) -> Option<&ProcedureDefinition> {
        self.procedures.iter().find(|p| p.proccode == proccode)
    }

    /// Whether a block with this id belongs to the actor.
    pub fn contains_block(&self, id: &str) -> bool {
        let mut found = false;
        self.for_each_block_id(&mut |b| found |= b == id);
        found
    }

    /// Calls `f` with every block id owned by this actor (hats, statements, reporters).
    pub fn for_each_block_id(&self, f: &mut dyn FnMut(&str)) {
        for script in &self.scripts {
            if !script.is_loose() {
                f(&script.top_block_id);
            }
            if let Event::GreaterThan { value, .. } = &script.event {
                value.for_each_block_id(f);
            }
            if let Some(expr) = &script.loose_reporter {
                expr.for_each_block_id(f);
            }
            for stmt in &script.body {
                stmt.for_each_block_id(f);
            }
        }
        for procedure in &self.procedures {
            f(&procedure.definition_block_id);
            if let Some(id) = &procedure.prototype_block_id {
                f(id);
            }
            for stmt in &procedure.body {
                stmt.for_each_block_id(f);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Literal {
    Number(f64),
    Text(String),
}

impl Literal {
    pub fn as_text(&self) -> String {
        match self {
            Literal::Number(n) => format_number(*n),
            Literal::Text(t) => t.clone(),
        }
    }
}

pub(crate) fn format_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VarScope {
    Global,
    Local,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableDecl {
    pub id: String,
    pub name: String,
    pub initial_value: Literal,
    pub scope: VarScope,
    pub cloud: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ListDecl {
    pub id: String,
    pub name: String,
    pub scope: VarScope,
}

#[derive(Debug, Clone, Serialize)]
pub struct BroadcastDecl {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Event {
    GreenFlag,
    KeyPressed(String),
    SpriteClicked,
    StageClicked,
    BackdropSwitchTo(String),
    ReceptionOfMessage(String),
    StartedAsClone,
    GreaterThan {
        attribute: String,
        value: Expr,
    },
    /// Extension hat, kept by opcode.
    Other(String),
    /// Top block is not a hat: the script never runs.
    Never,
}

impl Event {
    pub fn hat_opcode(&self) -> Option<&str> {
        Some(match self {
            Event::GreenFlag => "event_whenflagclicked",
            Event::KeyPressed(_) => "event_whenkeypressed",
            Event::SpriteClicked => "event_whenthisspriteclicked",
            Event::StageClicked => "event_whenstageclicked",
            Event::BackdropSwitchTo(_) => "event_whenbackdropswitchesto",
            Event::ReceptionOfMessage(_) => "event_whenbroadcastreceived",
            Event::StartedAsClone => "control_start_as_clone",
            Event::GreaterThan { .. } => "event_whengreaterthan",
            Event::Other(op) => op,
            Event::Never => return None,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Script {
    pub event: Event,
    pub body: Vec<Stmt>,
    pub top_block_id: String,
    /// A reporter block lying loose on the canvas (only when `event` is `Never`).
    pub loose_reporter: Option<Expr>,
}

impl Script {
    pub fn is_loose(&self) -> bool {
        self.event == Event::Never
    }

    /// Number of blocks in the stack: hat (if any) plus all nested statements.
    pub fn stack_block_count(&self) -> usize {
        let hat = usize::from(!self.is_loose());
        hat + count_statements(&self.body)
    }
}

pub fn count_statements(stmts: &[Stmt]) -> usize {
    stmts
        .iter()
        .map(|s| {
            1 + s
                .sub_stacks
                .iter()
                .map(|b| count_statements(b))
                .sum::<usize>()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ParamKind {
    StringNumber,
    Boolean,
}

#[derive(Debug, Clone, Serialize)]
pub struct Parameter {
    pub name: String,
    pub kind: ParamKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcedureDefinition {
    pub proccode: String,
    pub parameters: Vec<Parameter>,
    pub body: Vec<Stmt>,
    pub warp: bool,
    pub definition_block_id: String,
    /// Set when the prototype is stored as a regular (non-shadow) block.
    pub prototype_block_id: Option<String>,
}

/// Parameter kinds in placeholder order (`%s`/`%n` string-number, `%b` boolean).
pub fn proccode_placeholders(proccode: &str) -> Vec<ParamKind> {
    let mut kinds = Vec::new();
    let mut chars = proccode.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '%' {
            match chars.peek() {
                Some('s') | Some('n') => {
                    kinds.push(ParamKind::StringNumber);
                    chars.next();
                }
                Some('b') => {
                    kinds.push(ParamKind::Boolean);
                    chars.next();
                }
                _ => {}
            }
        }
    }
    kinds
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    pub name: String,
    pub value: String,
    pub id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Input {
    pub name: String,
    pub slot: Slot,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProcCall {
    pub proccode: String,
    pub argument_ids: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopOption {
    All,
    ThisScript,
    OtherScripts,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Raw opcode as found in the project (preserved for unknown blocks).
    pub opcode: String,
    pub inputs: Vec<Input>,
    pub sub_stacks: Vec<Vec<Stmt>>,
    pub fields: Vec<Field>,
    pub call: Option<ProcCall>,
    pub block_id: String,
}

impl Stmt {
    pub fn input(&self, name: &str) -> Option<&Expr> {
        self.inputs
            .iter()
            .find(|i| i.name == name)
            .map(|i| &i.value)
    }

    pub fn field(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn sub_stack(&self, index: usize) -> &[Stmt] {
        self.sub_stacks.get(index).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Condition of if / if-else / repeat until / wait until.
    pub fn condition(&self) -> Option<&Expr> {
        match self.kind {
            StmtKind::IfThen | StmtKind::IfElse | StmtKind::RepeatUntil | StmtKind::WaitUntil => {
                self.input("CONDITION")
            }
            _ => None,
        }
    }

    pub fn stop_option(&self) -> Option<StopOption> {
        if self.kind != StmtKind::Stop {
            return None;
        }
        let value = self
            .field("STOP_OPTION")
            .map(|f| f.value.as_str())
            .unwrap_or("all");
        Some(match value {
            "this script" => StopOption::ThisScript,
            "other scripts in sprite" | "other scripts in stage" => StopOption::OtherScripts,
            _ => StopOption::All,
        })
    }

    /// Variable (id, name) targeted by set/change/show/hide variable.
    pub fn variable(&self) -> Option<(&str, &str)> {
        match self.kind {
            StmtKind::SetVariable
            | StmtKind::ChangeVariableBy
            | StmtKind::ShowVariable
            | StmtKind::HideVariable => self
                .field("VARIABLE")
                .map(|f| (f.id.as_deref().unwrap_or(&f.value), f.value.as_str())),
            _ => None,
        }
    }

    /// Literal message of a broadcast statement, `None` when computed by a reporter.
    pub fn message(&self) -> Option<&str> {
        match self.kind {
            StmtKind::Broadcast | StmtKind::BroadcastAndWait => {
                match &self.input("BROADCAST_INPUT")?.kind {
                    ExprKind::Broadcast { name, .. } => Some(name),
                    ExprKind::Text(t) => Some(t),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(
            self.kind,
            StmtKind::Forever | StmtKind::RepeatTimes | StmtKind::RepeatUntil
        )
    }

    pub fn is_conditional(&self) -> bool {
        matches!(self.kind, StmtKind::IfThen | StmtKind::IfElse)
    }

    /// Statements after which control never continues in the same script.
    pub fn is_terminal(&self) -> bool {
        match self.kind {
            StmtKind::Stop => self.stop_option() != Some(StopOption::OtherScripts),
            StmtKind::DeleteThisClone | StmtKind::Forever => true,
            StmtKind::IfElse => {
                ends_terminal(self.sub_stack(0)) && ends_terminal(self.sub_stack(1))
            }
            _ => false,
        }
    }

    pub fn exprs(&self) -> impl Iterator<Item = &Expr> {
        self.inputs.iter().map(|i| &i.value)
    }

    pub fn for_each_block_id(&self, f: &mut dyn FnMut(&str)) {
        f(&self.block_id);
        for e in self.exprs() {
            e.for_each_block_id(f);
        }
        for sub in &self.sub_stacks {
            for s in sub {
                s.for_each_block_id(f);
            }
        }
    }

    /// Pre-order walk over this statement and all nested statements.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Stmt)) {
        f(self);
        for sub in &self.sub_stacks {
            for s in sub {
                s.walk(f);
            }
        }
    }
}

/// Whether a statement list never falls through to the statement after it.
pub fn ends_terminal(stmts: &[Stmt]) -> bool {
    stmts.iter().any(Stmt::is_terminal)
}

pub fn walk_stmts<'a>(stmts: &'a [Stmt], f: &mut dyn FnMut(&'a Stmt)) {
    for s in stmts {
        s.walk(f);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompareOp {
    Eq,
    Lt,
    Gt,
}

impl CompareOp {
    pub fn opcode(self) -> &'static str {
        match self {
            CompareOp::Eq => "operator_equals",
            CompareOp::Lt => "operator_lt",
            CompareOp::Gt => "operator_gt",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Lt => "<",
            CompareOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoolOp {
    And,
    Or,
    Not,
}

impl BoolOp {
    pub fn opcode(self) -> &'static str {
        match self {
            BoolOp::And => "operator_and",
            BoolOp::Or => "operator_or",
            BoolOp::Not => "operator_not",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub block_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExprKind {
    Number(String),
    Text(String),
    Bool(bool),
    Color(String),
    Broadcast {
        name: String,
        id: String,
    },
    Variable {
        id: String,
        name: String,
    },
    List {
        id: String,
        name: String,
    },
    Parameter {
        name: String,
        kind: ParamKind,
    },
    Answer,
    Reporter {
        kind: ReporterKind,
        opcode: String,
        inputs: Vec<Input>,
        fields: Vec<Field>,
    },
    Comparison {
        op: CompareOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    BoolOp {
        op: BoolOp,
        operands: Vec<Expr>,
    },
    EmptyBool,
    EmptyNumber,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr {
            kind,
            block_id: None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Number(_) | ExprKind::Text(_) | ExprKind::Bool(_)
        )
    }

    pub fn is_empty_slot(&self) -> bool {
        matches!(self.kind, ExprKind::EmptyBool | ExprKind::EmptyNumber)
    }

    /// Text of a number/string/bool literal.
    pub fn literal_text(&self) -> Option<String> {
        match &self.kind {
            ExprKind::Number(t) | ExprKind::Text(t) => Some(t.clone()),
            ExprKind::Bool(b) => Some(b.to_string()),
            _ => None,
        }
    }

    /// Numeric value of a literal, following Scratch's string-to-number rules loosely.
    pub fn literal_number(&self) -> Option<f64> {
        match &self.kind {
            ExprKind::Number(t) | ExprKind::Text(t) => parse_scratch_number(t),
            _ => None,
        }
    }

    pub fn reporter_kind(&self) -> Option<ReporterKind> {
        match &self.kind {
            ExprKind::Reporter { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    /// Whether the expression is a pointed (boolean) block.
    pub fn is_boolean(&self) -> bool {
        match &self.kind {
            ExprKind::Bool(_)
            | ExprKind::Comparison { .. }
            | ExprKind::BoolOp { .. }
            | ExprKind::EmptyBool => true,
            ExprKind::Parameter { kind, .. } => *kind == ParamKind::Boolean,
            ExprKind::Reporter { kind, .. } => kind.is_boolean(),
            _ => false,
        }
    }

    /// Direct sub-expressions in input order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Reporter { inputs, .. } => inputs.iter().map(|i| &i.value).collect(),
            ExprKind::Comparison { left, right, .. } => vec![left, right],
            ExprKind::BoolOp { operands, .. } => operands.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        let mut hit = false;
        self.walk(&mut |e| hit |= pred(e));
        hit
    }

    pub fn for_each_block_id(&self, f: &mut dyn FnMut(&str)) {
        self.walk(&mut |e| {
            if let Some(id) = &e.block_id {
                f(id);
            }
        });
    }
}

pub(crate) fn parse_scratch_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<f64>().ok().filter(|n| n.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholders_in_order() {
        assert_eq!(
            proccode_placeholders("jump %s high %b now %n"),
            vec![
                ParamKind::StringNumber,
                ParamKind::Boolean,
                ParamKind::StringNumber
            ]
        );
        assert!(proccode_placeholders("100% done").is_empty());
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(21.0), "21");
        assert_eq!(format_number(0.5), "0.5");
    }
}
