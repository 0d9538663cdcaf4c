//! Programmatic construction of Scratch 3.0 `project.json` documents.
//!
//! Blocks get sequential ids (`b1`, `b2`, …) unless an explicit id is set with
//! [`Block::id`], which fixtures use to pin expected issue locations.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub struct Block {
    id: Option<String>,
    opcode: String,
    inputs: Vec<(String, In)>,
    fields: Vec<(String, Value)>,
    mutation: Option<Value>,
    shadow: bool,
}

/// Content of an input slot.
#[derive(Debug, Clone)]
pub enum In {
    /// Compressed primitive such as `[4, "10"]` or `[12, name, id]`.
    Prim(Value),
    /// A reporter block placed over a default shadow.
    Block(Box<Block>),
    /// A boolean reporter in a boolean slot (no shadow).
    Bool(Box<Block>),
    /// An explicit shadow block (menus).
    Shadow(Box<Block>),
    /// A statement stack (SUBSTACK inputs).
    Stack(Vec<Block>),
}

impl Block {
    pub fn new(opcode: &str) -> Block {
        Block {
            id: None,
            opcode: opcode.to_string(),
            inputs: Vec::new(),
            fields: Vec::new(),
            mutation: None,
            shadow: false,
        }
    }

    pub fn id(mut self, id: &str) -> Block {
        self.id = Some(id.to_string());
        self
    }

    pub fn input(mut self, name: &str, value: In) -> Block {
        self.inputs.push((name.to_string(), value));
        self
    }

    pub fn field(mut self, name: &str, value: Value) -> Block {
        self.fields.push((name.to_string(), value));
        self
    }

    pub fn sub(self, name: &str, body: Vec<Block>) -> Block {
        if body.is_empty() {
            self
        } else {
            self.input(name, In::Stack(body))
        }
    }

    pub fn mutation(mut self, m: Value) -> Block {
        self.mutation = Some(m);
        self
    }

    pub fn shadow(mut self) -> Block {
        self.shadow = true;
        self
    }

    /// Wraps this reporter for use in a value slot.
    pub fn into_in(self) -> In {
        In::Block(Box::new(self))
    }

    /// Wraps this boolean reporter for use in a condition slot.
    pub fn cond(self) -> In {
        In::Bool(Box::new(self))
    }
}

#[derive(Debug, Clone)]
enum Top {
    Script {
        hat: Block,
        body: Vec<Block>,
    },
    Loose(Vec<Block>),
    Procedure {
        id: Option<String>,
        proccode: String,
        args: Vec<String>,
        warp: bool,
        body: Vec<Block>,
    },
}

#[derive(Debug, Clone)]
pub struct Target {
    name: String,
    is_stage: bool,
    variables: Vec<(String, String, Value)>,
    lists: Vec<(String, String)>,
    broadcasts: Vec<(String, String)>,
    tops: Vec<Top>,
    costumes: Vec<String>,
    sounds: Vec<String>,
}

impl Target {
    fn new(name: &str, is_stage: bool) -> Target {
        Target {
            name: name.to_string(),
            is_stage,
            variables: Vec::new(),
            lists: Vec::new(),
            broadcasts: Vec::new(),
            tops: Vec::new(),
            costumes: Vec::new(),
            sounds: Vec::new(),
        }
    }

    /// Declares a variable; its id is `name` unless given via [`Target::var_with_id`].
    pub fn var(&mut self, name: &str, value: Value) -> &mut Target {
        self.var_with_id(name, name, value)
    }

    pub fn var_with_id(&mut self, id: &str, name: &str, value: Value) -> &mut Target {
        self.variables
            .push((id.to_string(), name.to_string(), value));
        self
    }

    pub fn list(&mut self, name: &str) -> &mut Target {
        self.lists.push((name.to_string(), name.to_string()));
        self
    }

    pub fn broadcast_decl(&mut self, name: &str) -> &mut Target {
        self.broadcasts.push((msg_id(name), name.to_string()));
        self
    }

    pub fn costume(&mut self, name: &str) -> &mut Target {
        self.costumes.push(name.to_string());
        self
    }

    pub fn sound(&mut self, name: &str) -> &mut Target {
        self.sounds.push(name.to_string());
        self
    }

    pub fn script(&mut self, hat: Block, body: Vec<Block>) -> &mut Target {
        self.tops.push(Top::Script { hat, body });
        self
    }

    pub fn loose(&mut self, body: Vec<Block>) -> &mut Target {
        self.tops.push(Top::Loose(body));
        self
    }

    /// Custom block definition. Argument names are given in placeholder order.
    pub fn procedure(&mut self, proccode: &str, args: &[&str], body: Vec<Block>) -> &mut Target {
        self.procedure_with_id(None, proccode, args, body)
    }

    pub fn procedure_with_id(
        &mut self,
        id: Option<&str>,
        proccode: &str,
        args: &[&str],
        body: Vec<Block>,
    ) -> &mut Target {
        self.tops.push(Top::Procedure {
            id: id.map(str::to_string),
            proccode: proccode.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
            warp: false,
            body,
        });
        self
    }
}

/// Broadcast ids are derived from names so hats and senders agree.
pub fn msg_id(name: &str) -> String {
    format!("msg-{name}")
}

#[derive(Debug, Clone)]
pub struct Project {
    stage: Target,
    sprites: Vec<Target>,
}

impl Default for Project {
    fn default() -> Self {
        Project::new()
    }
}

impl Project {
    pub fn new() -> Project {
        Project {
            stage: Target::new("Stage", true),
            sprites: Vec::new(),
        }
    }

    pub fn stage(&mut self) -> &mut Target {
        &mut self.stage
    }

    /// Adds a sprite (with one costume `costume1`) and returns it for configuration.
    pub fn sprite(&mut self, name: &str) -> &mut Target {
        let mut t = Target::new(name, false);
        t.costumes.push("costume1".to_string());
        self.sprites.push(t);
        self.sprites.last_mut().unwrap()
    }

    pub fn sprite_mut(&mut self, name: &str) -> &mut Target {
        self.sprites
            .iter_mut()
            .find(|t| t.name == name)
            .expect("unknown sprite")
    }

    pub fn to_value(&self) -> Value {
        let mut counter = 0usize;
        let mut targets = vec![target_json(&self.stage, &mut counter, 0)];
        for (i, s) in self.sprites.iter().enumerate() {
            targets.push(target_json(s, &mut counter, i + 1));
        }
        json!({
            "targets": targets,
            "monitors": [],
            "extensions": ["pen"],
            "meta": {"semver": "3.0.0", "vm": "0.2.0", "agent": "testkit"}
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).unwrap()
    }

    /// `.sb3` bytes. Assets named in `omit` are declared but left out of the archive.
    pub fn to_sb3(&self, omit: &[&str]) -> Vec<u8> {
        let value = self.to_value();
        let mut files = Vec::new();
        for target in value["targets"].as_array().unwrap() {
            for key in ["costumes", "sounds"] {
                for asset in target[key].as_array().unwrap() {
                    let name = asset["name"].as_str().unwrap();
                    let file = asset["md5ext"].as_str().unwrap().to_string();
                    if !omit.contains(&name) && !files.contains(&file) {
                        files.push(file);
                    }
                }
            }
        }
        sb3_bytes(&serde_json::to_string(&value).unwrap(), &files)
    }
}

/// Zip containing `project.json` plus empty files with the given names.
pub fn sb3_bytes(project_json: &str, asset_files: &[String]) -> Vec<u8> {
    let mut buffer = std::io::Cursor::new(Vec::new());
    {
        let mut zip = zip::ZipWriter::new(&mut buffer);
        let options = zip::write::SimpleFileOptions::default();
        zip.start_file("project.json", options).unwrap();
        zip.write_all(project_json.as_bytes()).unwrap();
        for f in asset_files {
            zip.start_file(f.as_str(), options).unwrap();
            zip.write_all(b"asset").unwrap();
        }
        zip.finish().unwrap();
    }
    buffer.into_inner()
}

fn asset_json(name: &str, ext: &str) -> Value {
    let id = format!("{:032x}", fxhash(name));
    json!({"name": name, "assetId": id, "md5ext": format!("{id}.{ext}"), "dataFormat": ext})
}

fn fxhash(s: &str) -> u128 {
    s.bytes().fold(0xcbf29ce484222325u128, |h, b| {
        (h ^ b as u128).wrapping_mul(0x100000001b3)
    })
}

fn target_json(t: &Target, counter: &mut usize, layer: usize) -> Value {
    let mut blocks = Map::new();
    for top in &t.tops {
        let mut emitter = Emitter {
            blocks: &mut blocks,
            counter,
        };
        match top {
            Top::Script { hat, body } => {
                let hat_id = emitter.emit(hat, None, true);
                emitter.emit_chain(body, Some(&hat_id), &hat_id);
            }
            Top::Loose(body) => {
                if let Some((first, rest)) = body.split_first() {
                    let first_id = emitter.emit(first, None, true);
                    emitter.emit_chain(rest, Some(&first_id), &first_id);
                }
            }
            Top::Procedure {
                id,
                proccode,
                args,
                warp,
                body,
            } => {
                let def_id = id.clone().unwrap_or_else(|| emitter.next_id());
                let proto_id = format!("{def_id}-proto");
                let arg_ids: Vec<String> = (0..args.len())
                    .map(|i| format!("{def_id}-arg{i}"))
                    .collect();
                let kinds = placeholder_kinds(proccode);
                let mut proto_inputs = Map::new();
                for (i, (arg, arg_id)) in args.iter().zip(&arg_ids).enumerate() {
                    let reporter_id = format!("{proto_id}-r{i}");
                    let opcode = if kinds.get(i) == Some(&'b') {
                        "argument_reporter_boolean"
                    } else {
                        "argument_reporter_string_number"
                    };
                    emitter.blocks.insert(
                        reporter_id.clone(),
                        json!({"opcode": opcode, "next": null, "parent": proto_id, "inputs": {}, "fields": {"VALUE": [arg, null]}, "shadow": true, "topLevel": false}),
                    );
                    proto_inputs.insert(arg_id.clone(), json!([1, reporter_id]));
                }
                emitter.blocks.insert(
                    def_id.clone(),
                    json!({"opcode": "procedures_definition", "next": null, "parent": null,
                           "inputs": {"custom_block": [1, proto_id]}, "fields": {}, "shadow": false, "topLevel": true, "x": 0, "y": 0}),
                );
                emitter.blocks.insert(
                    proto_id.clone(),
                    json!({"opcode": "procedures_prototype", "next": null, "parent": def_id, "inputs": proto_inputs, "fields": {},
                           "shadow": true, "topLevel": false,
                           "mutation": {"tagName": "mutation", "children": [], "proccode": proccode,
                                        "argumentids": serde_json::to_string(&arg_ids).unwrap(),
                                        "argumentnames": serde_json::to_string(args).unwrap(),
                                        "argumentdefaults": serde_json::to_string(&vec![""; args.len()]).unwrap(),
                                        "warp": warp.to_string()}}),
                );
                emitter.emit_chain(body, Some(&def_id), &def_id);
            }
        }
    }
    let variables: Map<String, Value> = t
        .variables
        .iter()
        .map(|(id, name, v)| (id.clone(), json!([name, v])))
        .collect();
    let lists: Map<String, Value> = t
        .lists
        .iter()
        .map(|(id, name)| (id.clone(), json!([name, []])))
        .collect();
    let broadcasts: Map<String, Value> = t
        .broadcasts
        .iter()
        .map(|(id, name)| (id.clone(), json!(name)))
        .collect();
    let costumes: Vec<Value> = t.costumes.iter().map(|c| asset_json(c, "svg")).collect();
    let sounds: Vec<Value> = t.sounds.iter().map(|s| asset_json(s, "wav")).collect();
    let mut out = json!({
        "isStage": t.is_stage,
        "name": t.name,
        "variables": variables,
        "lists": lists,
        "broadcasts": broadcasts,
        "blocks": blocks,
        "comments": {},
        "currentCostume": 0,
        "costumes": costumes,
        "sounds": sounds,
        "volume": 100,
        "layerOrder": layer,
    });
    if !t.is_stage {
        let obj = out.as_object_mut().unwrap();
        for (k, v) in [
            ("visible", json!(true)),
            ("x", json!(0)),
            ("y", json!(0)),
            ("size", json!(100)),
            ("direction", json!(90)),
            ("draggable", json!(false)),
            ("rotationStyle", json!("all around")),
        ] {
            obj.insert(k.to_string(), v);
        }
    }
    out
}

fn placeholder_kinds(proccode: &str) -> Vec<char> {
    let mut out = Vec::new();
    let mut chars = proccode.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '%' {
            if let Some(&k) = chars.peek() {
                if matches!(k, 's' | 'n' | 'b') {
                    out.push(k);
                    chars.next();
                }
            }
        }
    }
    out
}

struct Emitter<'m> {
    blocks: &'m mut Map<String, Value>,
    counter: &'m mut usize,
}

impl Emitter<'_> {
    fn next_id(&mut self) -> String {
        *self.counter += 1;
        format!("_{}", self.counter)
    }

    /// Emits a statement chain hanging below `parent`; returns the first id.
    fn emit_chain(
        &mut self,
        body: &[Block],
        parent: Option<&str>,
        link_from: &str,
    ) -> Option<String> {
        let mut prev: Option<String> = None;
        let mut first = None;
        for b in body {
            let p = prev.clone().or_else(|| parent.map(str::to_string));
            let id = self.emit(b, p.as_deref(), false);
            match &prev {
                Some(prev_id) => self.blocks[prev_id.as_str()]["next"] = json!(id),
                None => {
                    if parent == Some(link_from) && self.blocks.contains_key(link_from) {
                        let is_hat_link = self.blocks[link_from].get("next").is_some();
                        if is_hat_link {
                            self.blocks[link_from]["next"] = json!(id);
                        }
                    }
                    first = Some(id.clone());
                }
            }
            prev = Some(id);
        }
        first
    }

    fn emit(&mut self, block: &Block, parent: Option<&str>, top_level: bool) -> String {
        let id = block.id.clone().unwrap_or_else(|| self.next_id());
        // Reserve the slot so children land after their parent in map order.
        self.blocks.insert(id.clone(), Value::Null);
        let mut inputs = Map::new();
        for (name, value) in &block.inputs {
            let encoded = match value {
                In::Prim(p) => {
                    if p[0] == json!(12) || p[0] == json!(13) {
                        json!([3, p, [10, ""]])
                    } else {
                        json!([1, p])
                    }
                }
                In::Block(b) => {
                    let child = self.emit(b, Some(&id), false);
                    json!([3, child, [10, ""]])
                }
                In::Bool(b) => {
                    let child = self.emit(b, Some(&id), false);
                    json!([2, child])
                }
                In::Shadow(b) => {
                    let child = self.emit(b, Some(&id), false);
                    json!([1, child])
                }
                In::Stack(body) => {
                    let first = self.emit_substack(body, &id);
                    json!([2, first])
                }
            };
            inputs.insert(name.clone(), encoded);
        }
        let fields: Map<String, Value> = block.fields.iter().cloned().collect();
        let mut obj = json!({
            "opcode": block.opcode,
            "next": null,
            "parent": parent,
            "inputs": inputs,
            "fields": fields,
            "shadow": block.shadow,
            "topLevel": top_level,
        });
        if top_level {
            obj["x"] = json!(100);
            obj["y"] = json!(100);
        }
        if let Some(m) = &block.mutation {
            obj["mutation"] = m.clone();
        }
        self.blocks.insert(id.clone(), obj);
        id
    }

    fn emit_substack(&mut self, body: &[Block], parent: &str) -> String {
        let mut prev: Option<String> = None;
        let mut first = String::new();
        for b in body {
            let p = prev.clone().unwrap_or_else(|| parent.to_string());
            let id = self.emit(b, Some(&p), false);
            match &prev {
                Some(prev_id) => self.blocks[prev_id.as_str()]["next"] = json!(id),
                None => first = id.clone(),
            }
            prev = Some(id);
        }
        first
    }
}

// ---------------------------------------------------------------------------
// Block constructors
// ---------------------------------------------------------------------------

pub fn num(v: impl ToString) -> In {
    In::Prim(json!([4, v.to_string()]))
}

pub fn text(v: &str) -> In {
    In::Prim(json!([10, v]))
}

pub fn color(v: &str) -> In {
    In::Prim(json!([9, v]))
}

pub fn var(name: &str) -> In {
    In::Prim(json!([12, name, name]))
}

pub fn var_with_id(name: &str, id: &str) -> In {
    In::Prim(json!([12, name, id]))
}

fn menu(opcode: &str, field: &str, value: &str) -> In {
    In::Shadow(Box::new(
        Block::new(opcode)
            .field(field, json!([value, null]))
            .shadow(),
    ))
}

// Hats.
pub fn when_flag() -> Block {
    Block::new("event_whenflagclicked")
}
pub fn when_key(key: &str) -> Block {
    Block::new("event_whenkeypressed").field("KEY_OPTION", json!([key, null]))
}
pub fn when_clicked() -> Block {
    Block::new("event_whenthisspriteclicked")
}
pub fn when_backdrop(name: &str) -> Block {
    Block::new("event_whenbackdropswitchesto").field("BACKDROP", json!([name, null]))
}
pub fn when_receive(msg: &str) -> Block {
    Block::new("event_whenbroadcastreceived").field("BROADCAST_OPTION", json!([msg, msg_id(msg)]))
}
pub fn when_clone() -> Block {
    Block::new("control_start_as_clone")
}

// Motion.
pub fn move_steps(n: impl ToString) -> Block {
    Block::new("motion_movesteps").input("STEPS", num(n))
}
pub fn turn_right(n: impl ToString) -> Block {
    Block::new("motion_turnright").input("DEGREES", num(n))
}
pub fn go_to_xy(x: impl ToString, y: impl ToString) -> Block {
    Block::new("motion_gotoxy")
        .input("X", num(x))
        .input("Y", num(y))
}
pub fn set_x(v: impl ToString) -> Block {
    Block::new("motion_setx").input("X", num(v))
}
pub fn change_x(v: impl ToString) -> Block {
    Block::new("motion_changexby").input("DX", num(v))
}
pub fn change_y(v: impl ToString) -> Block {
    Block::new("motion_changeyby").input("DY", num(v))
}
pub fn point_in_direction(v: impl ToString) -> Block {
    Block::new("motion_pointindirection").input("DIRECTION", num(v))
}
pub fn x_position() -> Block {
    Block::new("motion_xposition")
}

// Looks.
pub fn say(msg: In) -> Block {
    Block::new("looks_say").input("MESSAGE", msg)
}
pub fn say_for(msg: &str, secs: impl ToString) -> Block {
    Block::new("looks_sayforsecs")
        .input("MESSAGE", text(msg))
        .input("SECS", num(secs))
}
pub fn show() -> Block {
    Block::new("looks_show")
}
pub fn hide() -> Block {
    Block::new("looks_hide")
}
pub fn next_costume() -> Block {
    Block::new("looks_nextcostume")
}
pub fn switch_costume(name: &str) -> Block {
    Block::new("looks_switchcostumeto").input("COSTUME", menu("looks_costume", "COSTUME", name))
}
pub fn switch_backdrop(name: &str) -> Block {
    Block::new("looks_switchbackdropto")
        .input("BACKDROP", menu("looks_backdrops", "BACKDROP", name))
}
pub fn set_size(v: impl ToString) -> Block {
    Block::new("looks_setsizeto").input("SIZE", num(v))
}
pub fn change_size(v: impl ToString) -> Block {
    Block::new("looks_changesizeby").input("CHANGE", num(v))
}

// Sound.
pub fn play_sound(name: &str) -> Block {
    Block::new("sound_play").input("SOUND_MENU", menu("sound_sounds_menu", "SOUND_MENU", name))
}

// Events.
pub fn broadcast(msg: &str) -> Block {
    Block::new("event_broadcast").input("BROADCAST_INPUT", In::Prim(json!([11, msg, msg_id(msg)])))
}
pub fn broadcast_wait(msg: &str) -> Block {
    Block::new("event_broadcastandwait")
        .input("BROADCAST_INPUT", In::Prim(json!([11, msg, msg_id(msg)])))
}

// Control.
pub fn wait(secs: impl ToString) -> Block {
    Block::new("control_wait").input("DURATION", num(secs))
}
pub fn forever(body: Vec<Block>) -> Block {
    Block::new("control_forever").sub("SUBSTACK", body)
}
pub fn repeat(times: In, body: Vec<Block>) -> Block {
    Block::new("control_repeat")
        .input("TIMES", times)
        .sub("SUBSTACK", body)
}
pub fn repeat_until(cond: Option<Block>, body: Vec<Block>) -> Block {
    let b = Block::new("control_repeat_until");
    let b = match cond {
        Some(c) => b.input("CONDITION", c.cond()),
        None => b,
    };
    b.sub("SUBSTACK", body)
}
pub fn if_then(cond: Option<Block>, body: Vec<Block>) -> Block {
    let b = Block::new("control_if");
    let b = match cond {
        Some(c) => b.input("CONDITION", c.cond()),
        None => b,
    };
    b.sub("SUBSTACK", body)
}
pub fn if_else(cond: Option<Block>, then: Vec<Block>, otherwise: Vec<Block>) -> Block {
    let b = Block::new("control_if_else");
    let b = match cond {
        Some(c) => b.input("CONDITION", c.cond()),
        None => b,
    };
    b.sub("SUBSTACK", then).sub("SUBSTACK2", otherwise)
}
pub fn wait_until(cond: Option<Block>) -> Block {
    let b = Block::new("control_wait_until");
    match cond {
        Some(c) => b.input("CONDITION", c.cond()),
        None => b,
    }
}
/// `option` is one of `all`, `this script`, `other scripts in sprite`.
pub fn stop(option: &str) -> Block {
    Block::new("control_stop")
        .field("STOP_OPTION", json!([option, null]))
        .mutation(json!({"tagName": "mutation", "children": [], "hasnext": (option.starts_with("other")).to_string()}))
}
pub fn create_clone(target: &str) -> Block {
    Block::new("control_create_clone_of").input(
        "CLONE_OPTION",
        menu("control_create_clone_of_menu", "CLONE_OPTION", target),
    )
}
pub fn delete_clone() -> Block {
    Block::new("control_delete_this_clone")
}

// Sensing.
pub fn ask(question: &str) -> Block {
    Block::new("sensing_askandwait").input("QUESTION", text(question))
}
pub fn answer() -> Block {
    Block::new("sensing_answer")
}
pub fn key_pressed(key: &str) -> Block {
    Block::new("sensing_keypressed")
        .input("KEY_OPTION", menu("sensing_keyoptions", "KEY_OPTION", key))
}
pub fn touching(object: &str) -> Block {
    Block::new("sensing_touchingobject").input(
        "TOUCHINGOBJECTMENU",
        menu("sensing_touchingobjectmenu", "TOUCHINGOBJECTMENU", object),
    )
}
pub fn touching_color(c: In) -> Block {
    Block::new("sensing_touchingcolor").input("COLOR", c)
}
pub fn mouse_down() -> Block {
    Block::new("sensing_mousedown")
}
pub fn mouse_x() -> Block {
    Block::new("sensing_mousex")
}

// Operators.
pub fn eq(a: In, b: In) -> Block {
    Block::new("operator_equals")
        .input("OPERAND1", a)
        .input("OPERAND2", b)
}
pub fn lt(a: In, b: In) -> Block {
    Block::new("operator_lt")
        .input("OPERAND1", a)
        .input("OPERAND2", b)
}
pub fn gt(a: In, b: In) -> Block {
    Block::new("operator_gt")
        .input("OPERAND1", a)
        .input("OPERAND2", b)
}
pub fn and(a: Block, b: Block) -> Block {
    Block::new("operator_and")
        .input("OPERAND1", a.cond())
        .input("OPERAND2", b.cond())
}
pub fn not(a: Block) -> Block {
    Block::new("operator_not").input("OPERAND", a.cond())
}
pub fn add(a: In, b: In) -> Block {
    Block::new("operator_add").input("NUM1", a).input("NUM2", b)
}
pub fn join(a: In, b: In) -> Block {
    Block::new("operator_join")
        .input("STRING1", a)
        .input("STRING2", b)
}

// Variables.
pub fn set_var(name: &str, value: In) -> Block {
    Block::new("data_setvariableto")
        .field("VARIABLE", json!([name, name]))
        .input("VALUE", value)
}
pub fn change_var(name: &str, by: impl ToString) -> Block {
    Block::new("data_changevariableby")
        .field("VARIABLE", json!([name, name]))
        .input("VALUE", num(by))
}
pub fn show_var(name: &str) -> Block {
    Block::new("data_showvariable").field("VARIABLE", json!([name, name]))
}

// Pen.
pub fn pen_down() -> Block {
    Block::new("pen_penDown")
}
pub fn pen_up() -> Block {
    Block::new("pen_penUp")
}
pub fn erase_all() -> Block {
    Block::new("pen_clear")
}
pub fn set_pen_color(c: In) -> Block {
    Block::new("pen_setPenColorToColor").input("COLOR", c)
}

// Custom blocks.
pub fn call(proccode: &str, args: Vec<In>) -> Block {
    let ids: Vec<String> = (0..args.len()).map(|i| format!("call-arg{i}")).collect();
    let mut b = Block::new("procedures_call").mutation(json!({
        "tagName": "mutation", "children": [], "proccode": proccode,
        "argumentids": serde_json::to_string(&ids).unwrap(), "warp": "false"
    }));
    for (id, a) in ids.iter().zip(args) {
        b = b.input(id, a);
    }
    b
}
pub fn param(name: &str) -> Block {
    Block::new("argument_reporter_string_number").field("VALUE", json!([name, null]))
}
pub fn param_bool(name: &str) -> Block {
    Block::new("argument_reporter_boolean").field("VALUE", json!([name, null]))
}
