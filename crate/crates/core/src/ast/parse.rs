use std::collections::{BTreeSet, HashSet};

use serde_json::{Map, Value};
use thiserror::Error;

use super::opcodes::{is_expression_opcode, is_hat_opcode, ReporterKind, Slot, StmtKind};
use super::{
    proccode_placeholders, Actor, BoolOp, BroadcastDecl, CompareOp, Event, Expr, ExprKind, Field,
    Input, ListDecl, Literal, ParamKind, Parameter, ProcCall, ProcedureDefinition, Program, Script,
    Stmt, VarScope, VariableDecl,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    InvalidJson(#[from] serde_json::Error),
    #[error("malformed project: {reason}{}", .block_id.as_ref().map(|b| format!(" (block {b})")).unwrap_or_default())]
    MalformedProject {
        reason: String,
        block_id: Option<String>,
    },
}

impl ParseError {
    fn malformed(reason: impl Into<String>) -> ParseError {
        ParseError::MalformedProject {
            reason: reason.into(),
            block_id: None,
        }
    }

    fn cycle(block_id: &str) -> ParseError {
        ParseError::MalformedProject {
            reason: "block chain refers back to itself".into(),
            block_id: Some(block_id.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

/// Parses the text of a `project.json`.
pub fn parse_project(json: &str) -> Result<Program> {
    let value: Value = serde_json::from_str(json)?;
    parse_project_value(&value)
}

pub fn parse_project_value(root: &Value) -> Result<Program> {
    let targets = root
        .get("targets")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::malformed("missing `targets` array"))?;

    let mut warnings = Vec::new();
    let mut referenced_broadcasts = Vec::new();
    let mut stage = None;
    let mut sprites = Vec::new();
    for (index, target) in targets.iter().enumerate() {
        let Some(target) = target.as_object() else {
            warnings.push(format!("target #{index} is not an object"));
            continue;
        };
        let is_stage = target
            .get("isStage")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        if is_stage && stage.is_some() {
            warnings.push(format!(
                "additional stage target #{index} treated as sprite"
            ));
        }
        let as_stage = is_stage && stage.is_none();
        let actor = TargetParser::new(target, as_stage, &mut warnings, &mut referenced_broadcasts)
            .parse()?;
        if as_stage {
            stage = Some(actor);
        } else {
            sprites.push(actor);
        }
    }
    let mut stage = stage.ok_or_else(|| ParseError::malformed("no stage target"))?;

    // Keep every referenced broadcast resolvable; undeclared ones become stage globals.
    let declared: HashSet<String> = std::iter::once(&stage)
        .chain(sprites.iter())
        .flat_map(|a| a.broadcasts.iter().map(|b| b.id.clone()))
        .collect();
    let mut added = HashSet::new();
    for (id, name) in referenced_broadcasts {
        if !declared.contains(&id) && added.insert(id.clone()) {
            stage.broadcasts.push(BroadcastDecl { id, name });
        }
    }

    Ok(Program {
        name: String::new(),
        stage,
        sprites,
        project_id: None,
        source_path: None,
        warnings,
    })
}

/// Decodes one entry of a block's `inputs` map without block references.
///
/// Primitive encodings map to literals; a block reference (which needs the
/// owning block map) decodes to an empty slot of the requested type.
pub fn decode_input(raw: &Value, slot: Slot) -> Expr {
    let empty = Map::new();
    let mut warnings = Vec::new();
    let mut broadcasts = Vec::new();
    let mut parser = TargetParser::new(&empty, false, &mut warnings, &mut broadcasts);
    parser
        .decode_input(raw, slot)
        .unwrap_or_else(|_| empty_slot(slot))
}

fn empty_slot(slot: Slot) -> Expr {
    Expr::new(if slot == Slot::Bool {
        ExprKind::EmptyBool
    } else {
        ExprKind::EmptyNumber
    })
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Mutation values are sometimes JSON-encoded strings, sometimes plain arrays.
fn string_list(v: Option<&Value>) -> Vec<String> {
    match v {
        Some(Value::String(s)) => serde_json::from_str::<Vec<Value>>(s)
            .map(|items| items.iter().map(value_text).collect())
            .unwrap_or_default(),
        Some(Value::Array(items)) => items.iter().map(value_text).collect(),
        _ => Vec::new(),
    }
}

fn flag(v: Option<&Value>) -> bool {
    match v {
        Some(Value::Bool(b)) => *b,
        Some(Value::String(s)) => s == "true",
        _ => false,
    }
}

struct TargetParser<'a, 'w> {
    target: &'a Map<String, Value>,
    blocks: &'a Map<String, Value>,
    is_stage: bool,
    consumed: HashSet<&'a str>,
    active: HashSet<&'a str>,
    warnings: &'w mut Vec<String>,
    broadcasts: &'w mut Vec<(String, String)>,
}

impl<'a, 'w> TargetParser<'a, 'w> {
    fn new(
        target: &'a Map<String, Value>,
        is_stage: bool,
        warnings: &'w mut Vec<String>,
        broadcasts: &'w mut Vec<(String, String)>,
    ) -> Self {
        static EMPTY: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();
        let blocks = target
            .get("blocks")
            .and_then(Value::as_object)
            .unwrap_or_else(|| EMPTY.get_or_init(Map::new));
        TargetParser {
            target,
            blocks,
            is_stage,
            consumed: HashSet::new(),
            active: HashSet::new(),
            warnings,
            broadcasts,
        }
    }

    fn parse(mut self) -> Result<Actor> {
        let name = self.target.get("name").map(value_text).unwrap_or_default();
        let scope = if self.is_stage {
            VarScope::Global
        } else {
            VarScope::Local
        };

        let mut variables = Vec::new();
        if let Some(vars) = self.target.get("variables").and_then(Value::as_object) {
            for (id, decl) in vars {
                let Some(parts) = decl.as_array() else {
                    continue;
                };
                let initial_value = match parts.get(1) {
                    Some(Value::Number(n)) => Literal::Number(n.as_f64().unwrap_or(0.0)),
                    Some(v) => Literal::Text(value_text(v)),
                    None => Literal::Text(String::new()),
                };
                variables.push(VariableDecl {
                    id: id.clone(),
                    name: parts.first().map(value_text).unwrap_or_default(),
                    initial_value,
                    scope,
                    cloud: parts.get(2).and_then(Value::as_bool).unwrap_or(false),
                });
            }
        }
        let mut lists = Vec::new();
        if let Some(decls) = self.target.get("lists").and_then(Value::as_object) {
            for (id, decl) in decls {
                let name = decl
                    .as_array()
                    .and_then(|p| p.first())
                    .map(value_text)
                    .unwrap_or_default();
                lists.push(ListDecl {
                    id: id.clone(),
                    name,
                    scope,
                });
            }
        }
        let mut broadcasts = Vec::new();
        if let Some(decls) = self.target.get("broadcasts").and_then(Value::as_object) {
            for (id, name) in decls {
                broadcasts.push(BroadcastDecl {
                    id: id.clone(),
                    name: value_text(name),
                });
            }
        }
        let names = |key: &str| -> Vec<String> {
            self.target
                .get(key)
                .and_then(Value::as_array)
                .map(|items| {
                    items
                        .iter()
                        .filter_map(|c| c.get("name"))
                        .map(value_text)
                        .collect()
                })
                .unwrap_or_default()
        };
        let costume_names = names("costumes");
        let sound_names = names("sounds");
        let current_costume = self
            .target
            .get("currentCostume")
            .and_then(Value::as_i64)
            .unwrap_or(0);

        let mut scripts = Vec::new();
        let mut procedures = Vec::new();

        let blocks = self.blocks;
        let roots: Vec<&'a str> = blocks
            .iter()
            .filter(|(_, b)| match b {
                Value::Array(_) => true,
                Value::Object(o) => {
                    o.get("topLevel").and_then(Value::as_bool).unwrap_or(false)
                        && !Self::is_shadow(o)
                }
                _ => false,
            })
            .map(|(id, _)| id.as_str())
            .collect();
        for id in roots {
            if !self.consumed.contains(id) {
                self.parse_root(id, &mut scripts, &mut procedures)?;
            }
        }
        // Blocks not reachable from any top-level block become loose scripts too.
        let ids: Vec<&'a str> = blocks.keys().map(String::as_str).collect();
        for id in ids {
            if self.consumed.contains(id) {
                continue;
            }
            match &blocks[id] {
                Value::Object(o) if !Self::is_shadow(o) => {}
                _ => continue,
            }
            let head = self.chain_head(id);
            self.warnings.push(format!(
                "block {head} is detached from its parent; treated as loose"
            ));
            self.parse_root(head, &mut scripts, &mut procedures)?;
            if !self.consumed.contains(id) {
                self.parse_root(id, &mut scripts, &mut procedures)?;
            }
        }

        Ok(Actor {
            name,
            is_stage: self.is_stage,
            variables,
            lists,
            broadcasts,
            scripts,
            procedures,
            costume_names,
            sound_names,
            current_costume,
        })
    }

    fn is_shadow(block: &Map<String, Value>) -> bool {
        block
            .get("shadow")
            .and_then(Value::as_bool)
            .unwrap_or(false)
    }

    fn block(&self, id: &str) -> Option<&'a Map<String, Value>> {
        self.blocks.get(id).and_then(Value::as_object)
    }

    fn opcode(block: &'a Map<String, Value>) -> &'a str {
        block.get("opcode").and_then(Value::as_str).unwrap_or("")
    }

    /// First block of the unconsumed `next` chain containing `id`.
    fn chain_head(&self, id: &'a str) -> &'a str {
        let mut head = id;
        let mut seen = HashSet::new();
        seen.insert(id);
        loop {
            let Some(parent) = self
                .block(head)
                .and_then(|b| b.get("parent"))
                .and_then(Value::as_str)
            else {
                return head;
            };
            let Some((parent_id, parent_block)) = self.blocks.get_key_value(parent) else {
                return head;
            };
            let links_here = parent_block.get("next").and_then(Value::as_str) == Some(head);
            let usable = parent_block
                .as_object()
                .is_some_and(|o| !Self::is_shadow(o));
            if !links_here
                || !usable
                || self.consumed.contains(parent_id.as_str())
                || !seen.insert(parent_id)
            {
                return head;
            }
            head = parent_id.as_str();
        }
    }

    fn parse_root(
        &mut self,
        id: &'a str,
        scripts: &mut Vec<Script>,
        procedures: &mut Vec<ProcedureDefinition>,
    ) -> Result<()> {
        if let Some(Value::Array(primitive)) = self.blocks.get(id) {
            self.consumed.insert(id);
            let mut expr = self.decode_primitive(primitive, Slot::Any);
            expr.block_id = Some(id.to_string());
            scripts.push(Script {
                event: Event::Never,
                body: Vec::new(),
                top_block_id: id.to_string(),
                loose_reporter: Some(expr),
            });
            return Ok(());
        }
        let Some(block) = self.block(id) else {
            return Ok(());
        };
        let opcode = Self::opcode(block);
        if opcode == "procedures_definition" {
            self.consumed.insert(id);
            self.active.insert(id);
            let procedure = self.parse_procedure(id, block)?;
            self.active.remove(id);
            procedures.push(procedure);
        } else if is_hat_opcode(opcode) {
            self.consumed.insert(id);
            self.active.insert(id);
            let event = self.parse_event(opcode, block)?;
            let body = match block.get("next").and_then(Value::as_str) {
                Some(next) => self.parse_chain(next)?,
                None => Vec::new(),
            };
            self.active.remove(id);
            scripts.push(Script {
                event,
                body,
                top_block_id: id.to_string(),
                loose_reporter: None,
            });
        } else if is_expression_opcode(opcode)
            && block.get("next").and_then(Value::as_str).is_none()
        {
            let expr = self.parse_reporter(id, Slot::Any)?;
            scripts.push(Script {
                event: Event::Never,
                body: Vec::new(),
                top_block_id: id.to_string(),
                loose_reporter: Some(expr),
            });
        } else {
            let body = self.parse_chain(id)?;
            scripts.push(Script {
                event: Event::Never,
                body,
                top_block_id: id.to_string(),
                loose_reporter: None,
            });
        }
        Ok(())
    }

    fn field(block: &Map<String, Value>, name: &str) -> Option<Field> {
        let raw = block.get("fields")?.get(name)?;
        Some(Self::field_from(name, raw))
    }

    fn field_from(name: &str, raw: &Value) -> Field {
        match raw {
            Value::Array(parts) => Field {
                name: name.to_string(),
                value: parts.first().map(value_text).unwrap_or_default(),
                id: parts.get(1).and_then(Value::as_str).map(str::to_string),
            },
            other => Field {
                name: name.to_string(),
                value: value_text(other),
                id: None,
            },
        }
    }

    fn fields(block: &Map<String, Value>) -> Vec<Field> {
        block
            .get("fields")
            .and_then(Value::as_object)
            .map(|fields| fields.iter().map(|(k, v)| Self::field_from(k, v)).collect())
            .unwrap_or_default()
    }

    fn field_text(block: &Map<String, Value>, name: &str) -> String {
        Self::field(block, name)
            .map(|f| f.value)
            .unwrap_or_default()
    }

    fn parse_event(&mut self, opcode: &str, block: &'a Map<String, Value>) -> Result<Event> {
        Ok(match opcode {
            "event_whenflagclicked" => Event::GreenFlag,
            "event_whenkeypressed" => Event::KeyPressed(Self::field_text(block, "KEY_OPTION")),
            "event_whenthisspriteclicked" => Event::SpriteClicked,
            "event_whenstageclicked" => Event::StageClicked,
            "event_whenbackdropswitchesto" => {
                Event::BackdropSwitchTo(Self::field_text(block, "BACKDROP"))
            }
            "event_whenbroadcastreceived" => {
                let field = Self::field(block, "BROADCAST_OPTION");
                let name = field.as_ref().map(|f| f.value.clone()).unwrap_or_default();
                if let Some(id) = field.and_then(|f| f.id) {
                    self.broadcasts.push((id, name.clone()));
                }
                Event::ReceptionOfMessage(name)
            }
            "control_start_as_clone" => Event::StartedAsClone,
            "event_whengreaterthan" => {
                let value = match block.get("inputs").and_then(|i| i.get("VALUE")) {
                    Some(raw) => self.decode_input(raw, Slot::Number)?,
                    None => empty_slot(Slot::Number),
                };
                Event::GreaterThan {
                    attribute: Self::field_text(block, "WHENGREATERTHANMENU"),
                    value,
                }
            }
            other => {
                // Extension hats may carry menu inputs; decode them so their blocks are accounted for.
                if let Some(inputs) = block.get("inputs").and_then(Value::as_object) {
                    for raw in inputs.values() {
                        let _ = self.decode_input(raw, Slot::Any)?;
                    }
                }
                Event::Other(other.to_string())
            }
        })
    }

    fn parse_procedure(
        &mut self,
        id: &'a str,
        block: &'a Map<String, Value>,
    ) -> Result<ProcedureDefinition> {
        let prototype_id = block
            .get("inputs")
            .and_then(|i| i.get("custom_block"))
            .and_then(Value::as_array)
            .and_then(|raw| raw.get(1))
            .and_then(Value::as_str);
        let prototype = prototype_id
            .and_then(|p| self.blocks.get_key_value(p))
            .and_then(|(k, v)| v.as_object().map(|o| (k.as_str(), o)));
        let mut proccode = String::new();
        let mut names = Vec::new();
        let mut warp = false;
        let mut prototype_block_id = None;
        if let Some((proto_id, proto)) = prototype {
            if self.active.contains(proto_id) {
                return Err(ParseError::cycle(proto_id));
            }
            if !self.consumed.insert(proto_id) {
                self.warnings.push(format!(
                    "prototype {proto_id} shared by several definitions"
                ));
            } else if !Self::is_shadow(proto) {
                prototype_block_id = Some(proto_id.to_string());
            }
            if let Some(mutation) = proto.get("mutation").and_then(Value::as_object) {
                proccode = mutation.get("proccode").map(value_text).unwrap_or_default();
                names = string_list(mutation.get("argumentnames"));
                warp = flag(mutation.get("warp"));
            }
        } else {
            self.warnings
                .push(format!("procedure definition {id} has no prototype"));
        }
        let kinds = proccode_placeholders(&proccode);
        let parameters = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| Parameter {
                name,
                kind: kinds.get(i).copied().unwrap_or(ParamKind::StringNumber),
            })
            .collect();
        let body = match block.get("next").and_then(Value::as_str) {
            Some(next) => self.parse_chain(next)?,
            None => Vec::new(),
        };
        Ok(ProcedureDefinition {
            proccode,
            parameters,
            body,
            warp,
            definition_block_id: id.to_string(),
            prototype_block_id,
        })
    }

    /// Follows a `next` chain starting at `first`.
    fn parse_chain(&mut self, first: &str) -> Result<Vec<Stmt>> {
        let mut stmts = Vec::new();
        let mut opened = Vec::new();
        let mut cursor = self.blocks.get_key_value(first).map(|(k, _)| k.as_str());
        if cursor.is_none() {
            self.warnings
                .push(format!("reference to missing block {first}"));
        }
        while let Some(id) = cursor {
            if self.active.contains(id) {
                return Err(ParseError::cycle(id));
            }
            let Some(block) = self.block(id) else { break };
            if Self::is_shadow(block) {
                break;
            }
            if !self.consumed.insert(id) {
                self.warnings
                    .push(format!("block {id} is referenced twice"));
                break;
            }
            self.active.insert(id);
            opened.push(id);
            stmts.push(self.parse_stmt(id, block)?);
            cursor = match block.get("next").and_then(Value::as_str) {
                Some(next) => match self.blocks.get_key_value(next) {
                    Some((k, _)) => Some(k.as_str()),
                    None => {
                        self.warnings
                            .push(format!("reference to missing block {next}"));
                        None
                    }
                },
                None => None,
            };
        }
        for id in opened {
            self.active.remove(id);
        }
        Ok(stmts)
    }

    fn parse_stmt(&mut self, id: &'a str, block: &'a Map<String, Value>) -> Result<Stmt> {
        let opcode = Self::opcode(block);
        let kind = StmtKind::from_opcode(opcode);
        let raw_inputs = block.get("inputs").and_then(Value::as_object);
        let mut inputs = Vec::new();
        let mut sub_stacks = Vec::new();
        let mut call = None;
        let mut handled: BTreeSet<&str> = BTreeSet::new();

        match kind {
            StmtKind::CallProcedure => {
                let mutation = block.get("mutation").and_then(Value::as_object);
                let proccode = mutation
                    .and_then(|m| m.get("proccode"))
                    .map(value_text)
                    .unwrap_or_default();
                let argument_ids = string_list(mutation.and_then(|m| m.get("argumentids")));
                let kinds = proccode_placeholders(&proccode);
                for (i, arg) in argument_ids.iter().enumerate() {
                    let slot = match kinds.get(i) {
                        Some(ParamKind::Boolean) => Slot::Bool,
                        _ => Slot::Any,
                    };
                    let raw = raw_inputs.and_then(|r| r.get_key_value(arg.as_str()));
                    let value = match raw {
                        Some((k, raw)) => {
                            handled.insert(k.as_str());
                            self.decode_input(raw, slot)?
                        }
                        None => empty_slot(slot),
                    };
                    inputs.push(Input {
                        name: arg.clone(),
                        slot,
                        value,
                    });
                }
                call = Some(ProcCall {
                    proccode,
                    argument_ids,
                });
            }
            _ => {
                for (name, slot) in kind.input_slots() {
                    let value = match raw_inputs.and_then(|r| r.get_key_value(*name)) {
                        Some((k, raw)) => {
                            handled.insert(k.as_str());
                            self.decode_input(raw, *slot)?
                        }
                        None => empty_slot(*slot),
                    };
                    inputs.push(Input {
                        name: name.to_string(),
                        slot: *slot,
                        value,
                    });
                }
                let substack_names: Vec<String> = if kind == StmtKind::Unknown {
                    raw_inputs
                        .map(|r| {
                            r.keys()
                                .filter(|k| k.starts_with("SUBSTACK"))
                                .cloned()
                                .collect()
                        })
                        .unwrap_or_default()
                } else {
                    (0..kind.sub_stack_count())
                        .map(|i| {
                            if i == 0 {
                                "SUBSTACK".to_string()
                            } else {
                                format!("SUBSTACK{}", i + 1)
                            }
                        })
                        .collect()
                };
                for name in &substack_names {
                    let target = raw_inputs
                        .and_then(|r| r.get_key_value(name.as_str()))
                        .map(|(k, raw)| {
                            handled.insert(k.as_str());
                            raw
                        })
                        .and_then(Value::as_array)
                        .and_then(|raw| raw.get(1))
                        .and_then(Value::as_str);
                    sub_stacks.push(match target {
                        Some(first) => self.parse_chain(first)?,
                        None => Vec::new(),
                    });
                }
            }
        }
        // Inputs outside the known layout are kept so no block is lost.
        if let Some(raw_inputs) = raw_inputs {
            for (name, raw) in raw_inputs {
                if !handled.contains(name.as_str()) {
                    let value = self.decode_input(raw, Slot::Any)?;
                    inputs.push(Input {
                        name: name.clone(),
                        slot: Slot::Any,
                        value,
                    });
                }
            }
        }

        Ok(Stmt {
            kind,
            opcode: opcode.to_string(),
            inputs,
            sub_stacks,
            fields: Self::fields(block),
            call,
            block_id: id.to_string(),
        })
    }

    fn decode_input(&mut self, raw: &Value, slot: Slot) -> Result<Expr> {
        let Some(parts) = raw.as_array() else {
            self.warnings.push(format!("input is not an array: {raw}"));
            return Ok(empty_slot(slot));
        };
        match parts.get(1) {
            None | Some(Value::Null) => Ok(empty_slot(slot)),
            Some(Value::Array(primitive)) => Ok(self.decode_primitive(primitive, slot)),
            Some(Value::String(id)) => self.resolve_block_input(id, slot),
            Some(other) => {
                self.warnings
                    .push(format!("unexpected input value {other}"));
                Ok(Expr::new(ExprKind::Text(value_text(other))))
            }
        }
    }

    fn decode_primitive(&mut self, primitive: &[Value], slot: Slot) -> Expr {
        let code = primitive.first().and_then(Value::as_i64).unwrap_or(-1);
        let text = |i: usize| primitive.get(i).map(value_text).unwrap_or_default();
        let kind = match code {
            4..=8 => ExprKind::Number(text(1)),
            9 => ExprKind::Color(text(1)),
            10 => ExprKind::Text(text(1)),
            11 => {
                self.broadcasts.push((text(2), text(1)));
                ExprKind::Broadcast {
                    name: text(1),
                    id: text(2),
                }
            }
            12 => ExprKind::Variable {
                name: text(1),
                id: text(2),
            },
            13 => ExprKind::List {
                name: text(1),
                id: text(2),
            },
            _ => {
                let raw = Value::Array(primitive.to_vec()).to_string();
                self.warnings.push(format!(
                    "unknown input code {code} in {raw} ({slot:?} slot)"
                ));
                ExprKind::Text(raw)
            }
        };
        Expr::new(kind)
    }

    fn resolve_block_input(&mut self, id: &str, slot: Slot) -> Result<Expr> {
        let Some((key, block)) = self.blocks.get_key_value(id) else {
            self.warnings
                .push(format!("reference to missing block {id}"));
            return Ok(empty_slot(slot));
        };
        let key = key.as_str();
        match block {
            Value::Array(primitive) => {
                // A compressed variable/list reporter stored as its own map entry.
                if !self.consumed.insert(key) {
                    return Ok(empty_slot(slot));
                }
                let mut expr = self.decode_primitive(primitive, slot);
                expr.block_id = Some(key.to_string());
                Ok(expr)
            }
            Value::Object(o) if Self::is_shadow(o) => {
                if self.active.contains(key) {
                    return Err(ParseError::cycle(key));
                }
                self.consumed.insert(key);
                Ok(self.fold_shadow(o))
            }
            Value::Object(_) => self.parse_reporter(key, slot),
            _ => Ok(empty_slot(slot)),
        }
    }

    fn take_input(
        &mut self,
        raw_inputs: Option<&'a Map<String, Value>>,
        handled: &mut BTreeSet<&'a str>,
        name: &str,
        slot: Slot,
    ) -> Result<Expr> {
        match raw_inputs.and_then(|r| r.get_key_value(name)) {
            Some((k, raw)) => {
                handled.insert(k.as_str());
                self.decode_input(raw, slot)
            }
            None => Ok(empty_slot(slot)),
        }
    }

    fn fold_shadow(&mut self, block: &'a Map<String, Value>) -> Expr {
        let opcode = Self::opcode(block);
        let kind = match opcode {
            "math_number"
            | "math_positive_number"
            | "math_whole_number"
            | "math_integer"
            | "math_angle" => ExprKind::Number(Self::field_text(block, "NUM")),
            "text" => ExprKind::Text(Self::field_text(block, "TEXT")),
            "colour_picker" => ExprKind::Color(Self::field_text(block, "COLOUR")),
            "event_broadcast_menu" => {
                let field = Self::field(block, "BROADCAST_OPTION");
                let name = field.as_ref().map(|f| f.value.clone()).unwrap_or_default();
                let id = field.and_then(|f| f.id).unwrap_or_default();
                self.broadcasts.push((id.clone(), name.clone()));
                ExprKind::Broadcast { name, id }
            }
            _ => ExprKind::Text(
                Self::fields(block)
                    .into_iter()
                    .next()
                    .map(|f| f.value)
                    .unwrap_or_default(),
            ),
        };
        Expr::new(kind)
    }

    fn parse_reporter(&mut self, id: &'a str, slot: Slot) -> Result<Expr> {
        if self.active.contains(id) {
            return Err(ParseError::cycle(id));
        }
        if !self.consumed.insert(id) {
            self.warnings
                .push(format!("block {id} is referenced twice"));
            return Ok(empty_slot(slot));
        }
        let Some(block) = self.block(id) else {
            return Ok(empty_slot(slot));
        };
        self.active.insert(id);
        let opcode = Self::opcode(block);
        let raw_inputs = block.get("inputs").and_then(Value::as_object);
        let mut handled: BTreeSet<&str> = BTreeSet::new();
        let kind = match opcode {
            "argument_reporter_string_number" => ExprKind::Parameter {
                name: Self::field_text(block, "VALUE"),
                kind: ParamKind::StringNumber,
            },
            "argument_reporter_boolean" => ExprKind::Parameter {
                name: Self::field_text(block, "VALUE"),
                kind: ParamKind::Boolean,
            },
            "data_variable" => {
                let f = Self::field(block, "VARIABLE");
                ExprKind::Variable {
                    id: f.as_ref().and_then(|f| f.id.clone()).unwrap_or_default(),
                    name: f.map(|f| f.value).unwrap_or_default(),
                }
            }
            "data_listcontents" => {
                let f = Self::field(block, "LIST");
                ExprKind::List {
                    id: f.as_ref().and_then(|f| f.id.clone()).unwrap_or_default(),
                    name: f.map(|f| f.value).unwrap_or_default(),
                }
            }
            "sensing_answer" => ExprKind::Answer,
            "operator_equals" | "operator_lt" | "operator_gt" => {
                let op = match opcode {
                    "operator_equals" => CompareOp::Eq,
                    "operator_lt" => CompareOp::Lt,
                    _ => CompareOp::Gt,
                };
                let left = self.take_input(raw_inputs, &mut handled, "OPERAND1", Slot::Text)?;
                let right = self.take_input(raw_inputs, &mut handled, "OPERAND2", Slot::Text)?;
                ExprKind::Comparison {
                    op,
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
            "operator_and" | "operator_or" => {
                let op = if opcode == "operator_and" {
                    BoolOp::And
                } else {
                    BoolOp::Or
                };
                let a = self.take_input(raw_inputs, &mut handled, "OPERAND1", Slot::Bool)?;
                let b = self.take_input(raw_inputs, &mut handled, "OPERAND2", Slot::Bool)?;
                ExprKind::BoolOp {
                    op,
                    operands: vec![a, b],
                }
            }
            "operator_not" => {
                let a = self.take_input(raw_inputs, &mut handled, "OPERAND", Slot::Bool)?;
                ExprKind::BoolOp {
                    op: BoolOp::Not,
                    operands: vec![a],
                }
            }
            _ => {
                let kind = ReporterKind::from_opcode(opcode);
                let mut inputs = Vec::new();
                for (name, slot) in kind.input_slots() {
                    inputs.push(Input {
                        name: name.to_string(),
                        slot: *slot,
                        value: self.take_input(raw_inputs, &mut handled, name, *slot)?,
                    });
                }
                if let Some(all) = raw_inputs {
                    for name in all.keys() {
                        if !handled.contains(name.as_str()) {
                            let value =
                                self.take_input(raw_inputs, &mut handled, name, Slot::Any)?;
                            inputs.push(Input {
                                name: name.clone(),
                                slot: Slot::Any,
                                value,
                            });
                        }
                    }
                }
                ExprKind::Reporter {
                    kind,
                    opcode: opcode.to_string(),
                    inputs,
                    fields: Self::fields(block),
                }
            }
        };
        // Special forms ignore unexpected inputs; decode them anyway so referenced blocks are not lost.
        if !matches!(kind, ExprKind::Reporter { .. }) {
            if let Some(raw_inputs) = raw_inputs {
                for (name, raw) in raw_inputs {
                    if !handled.contains(name.as_str()) {
                        let _ = self.decode_input(raw, Slot::Any)?;
                    }
                }
            }
        }
        self.active.remove(id);
        Ok(Expr {
            kind,
            block_id: Some(id.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn project(blocks: Value) -> String {
        json!({
            "targets": [
                {"isStage": true, "name": "Stage", "variables": {}, "lists": {}, "broadcasts": {}, "blocks": {}, "costumes": [], "sounds": []},
                {"isStage": false, "name": "Cat", "variables": {"v1": ["level", 0]}, "lists": {}, "broadcasts": {}, "blocks": blocks, "costumes": [{"name": "c1"}], "sounds": []}
            ]
        })
        .to_string()
    }

    #[test]
    fn minimal_empty_project() {
        let p =
            parse_project(r#"{"targets":[{"isStage":true,"name":"Stage","blocks":{}}]}"#).unwrap();
        assert!(p.sprites.is_empty());
        assert!(p.stage.scripts.is_empty());
        assert!(p.stage.is_stage);
    }

    #[test]
    fn missing_targets_is_malformed() {
        let err = parse_project(r#"{"meta":{}}"#).unwrap_err();
        assert!(matches!(err, ParseError::MalformedProject { .. }));
    }

    #[test]
    fn no_stage_is_malformed() {
        let err =
            parse_project(r#"{"targets":[{"isStage":false,"name":"A","blocks":{}}]}"#).unwrap_err();
        assert!(err.to_string().contains("no stage"));
    }

    #[test]
    fn self_referencing_next_names_block() {
        let json = project(json!({
            "hat": {"opcode": "event_whenflagclicked", "next": "loop", "parent": null, "inputs": {}, "fields": {}, "shadow": false, "topLevel": true},
            "loop": {"opcode": "motion_movesteps", "next": "loop", "parent": "hat", "inputs": {"STEPS": [1, [4, "10"]]}, "fields": {}, "shadow": false, "topLevel": false}
        }));
        match parse_project(&json).unwrap_err() {
            ParseError::MalformedProject { block_id, .. } => {
                assert_eq!(block_id.as_deref(), Some("loop"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loose_blocks_have_never_event() {
        let json = project(json!({
            "m": {"opcode": "motion_movesteps", "next": null, "parent": null, "inputs": {"STEPS": [1, [4, "10"]]}, "fields": {}, "shadow": false, "topLevel": true}
        }));
        let p = parse_project(&json).unwrap();
        assert_eq!(p.sprites[0].scripts[0].event, Event::Never);
        assert_eq!(p.sprites[0].scripts[0].body.len(), 1);
    }

    #[test]
    fn unknown_opcode_is_kept() {
        let json = project(json!({
            "h": {"opcode": "event_whenflagclicked", "next": "x", "parent": null, "inputs": {}, "fields": {}, "shadow": false, "topLevel": true},
            "x": {"opcode": "music_playDrumForBeats", "next": null, "parent": "h", "inputs": {"BEATS": [1, [4, "0.25"]]}, "fields": {}, "shadow": false, "topLevel": false}
        }));
        let p = parse_project(&json).unwrap();
        let stmt = &p.sprites[0].scripts[0].body[0];
        assert_eq!(stmt.kind, StmtKind::Unknown);
        assert_eq!(stmt.opcode, "music_playDrumForBeats");
        assert_eq!(stmt.inputs.len(), 1);
    }

    #[test]
    fn decode_primitives() {
        assert_eq!(
            decode_input(&json!([1, [10, "level"]]), Slot::Text).kind,
            ExprKind::Text("level".into())
        );
        assert_eq!(
            decode_input(&json!([2, null]), Slot::Bool).kind,
            ExprKind::EmptyBool
        );
        assert_eq!(
            decode_input(&json!([1, [4, 21]]), Slot::Number).kind,
            ExprKind::Number("21".into())
        );
        assert_eq!(
            decode_input(&json!([3, [12, "score", "v1"], [4, ""]]), Slot::Number).kind,
            ExprKind::Variable {
                id: "v1".into(),
                name: "score".into()
            }
        );
        // Unknown codes degrade to their raw text.
        assert_eq!(
            decode_input(&json!([1, [99, "x"]]), Slot::Text).kind,
            ExprKind::Text("[99,\"x\"]".into())
        );
    }

    #[test]
    fn block_reference_input_resolves_reporter() {
        let json = project(json!({
            "h": {"opcode": "event_whenflagclicked", "next": "say", "parent": null, "inputs": {}, "fields": {}, "shadow": false, "topLevel": true},
            "say": {"opcode": "looks_say", "next": null, "parent": "h", "inputs": {"MESSAGE": [3, "xp", [10, ""]]}, "fields": {}, "shadow": false, "topLevel": false},
            "xp": {"opcode": "motion_xposition", "next": null, "parent": "say", "inputs": {}, "fields": {}, "shadow": false, "topLevel": false}
        }));
        let p = parse_project(&json).unwrap();
        let expr = p.sprites[0].scripts[0].body[0].input("MESSAGE").unwrap();
        assert_eq!(expr.reporter_kind(), Some(ReporterKind::XPosition));
        assert_eq!(expr.block_id.as_deref(), Some("xp"));
    }

    #[test]
    fn procedures_decode_mutation_strings() {
        let json = project(json!({
            "def": {"opcode": "procedures_definition", "next": null, "parent": null, "inputs": {"custom_block": [1, "proto"]}, "fields": {}, "shadow": false, "topLevel": true},
            "proto": {"opcode": "procedures_prototype", "next": null, "parent": "def", "inputs": {}, "fields": {}, "shadow": true, "topLevel": false,
                      "mutation": {"tagName": "mutation", "proccode": "jump %s %b", "argumentids": "[\"a1\",\"a2\"]", "argumentnames": "[\"height\",\"fast\"]", "argumentdefaults": "[\"\",\"false\"]", "warp": "true"}}
        }));
        let p = parse_project(&json).unwrap();
        let proc_ = &p.sprites[0].procedures[0];
        assert_eq!(proc_.proccode, "jump %s %b");
        assert!(proc_.warp);
        assert_eq!(proc_.parameters.len(), 2);
        assert_eq!(proc_.parameters[1].kind, ParamKind::Boolean);
        assert_eq!(proc_.prototype_block_id, None);
    }

    #[test]
    fn undeclared_broadcast_becomes_global() {
        let json = project(json!({
            "h": {"opcode": "event_whenflagclicked", "next": "b", "parent": null, "inputs": {}, "fields": {}, "shadow": false, "topLevel": true},
            "b": {"opcode": "event_broadcast", "next": null, "parent": "h", "inputs": {"BROADCAST_INPUT": [1, [11, "go", "bid"]]}, "fields": {}, "shadow": false, "topLevel": false}
        }));
        let p = parse_project(&json).unwrap();
        assert_eq!(p.stage.broadcasts.len(), 1);
        assert_eq!(p.stage.broadcasts[0].name, "go");
    }

    #[test]
    fn empty_condition_is_empty_bool() {
        let json = project(json!({
            "h": {"opcode": "event_whenflagclicked", "next": "r", "parent": null, "inputs": {}, "fields": {}, "shadow": false, "topLevel": true},
            "r": {"opcode": "control_repeat_until", "next": null, "parent": "h", "inputs": {}, "fields": {}, "shadow": false, "topLevel": false}
        }));
        let p = parse_project(&json).unwrap();
        let stmt = &p.sprites[0].scripts[0].body[0];
        assert_eq!(stmt.condition().unwrap().kind, ExprKind::EmptyBool);
        assert_eq!(stmt.sub_stacks, vec![Vec::<Stmt>::new()]);
    }
}
