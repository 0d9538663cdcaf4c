//! Statement-level control-flow graph over a whole program.
//!
//! Node ids are dense: `0` is the program start node, then for each actor
//! (stage first) and each of its scripts and procedures: an entry node, the
//! statements in pre-order, and an exit node.

mod dataflow;
mod events;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use serde::Serialize;

use crate::ast::{Actor, Owner, Program, Stmt, StmtKind};

pub use dataflow::{
    definitely_defined, definitely_defined_with_order, gen, Attribute, DataflowFacts, DefName,
};
pub use events::{
    all_triggers, fires_spontaneously, reachable_event_edges, starts, stmt_trigger, HandlerFiring,
    Trigger,
};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Seq,
    BranchTrue,
    BranchFalse,
    LoopBack,
    LoopExit,
    Event,
    Call,
    Return,
}

impl EdgeKind {
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Seq => "SEQ",
            EdgeKind::BranchTrue => "BRANCH_TRUE",
            EdgeKind::BranchFalse => "BRANCH_FALSE",
            EdgeKind::LoopBack => "LOOP_BACK",
            EdgeKind::LoopExit => "LOOP_EXIT",
            EdgeKind::Event => "EVENT",
            EdgeKind::Call => "CALL",
            EdgeKind::Return => "RETURN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy)]
pub enum NodeKind<'a> {
    Start,
    Entry,
    Exit,
    Stmt(&'a Stmt),
}

#[derive(Debug, Clone, Copy)]
pub struct CfgNode<'a> {
    pub kind: NodeKind<'a>,
    /// Index into the unit list; `None` for the start node.
    pub unit: Option<usize>,
}

/// A script or procedure with its entry/exit nodes.
#[derive(Debug, Clone, Copy)]
pub struct Unit<'a> {
    pub actor_index: usize,
    pub actor: &'a Actor,
    pub owner: Owner<'a>,
    pub entry: NodeId,
    pub exit: NodeId,
    /// Scripts: whether the start node has an EVENT edge to the entry.
    pub fired: bool,
}

#[derive(Debug, Clone)]
pub struct ControlFlowGraph<'a> {
    pub nodes: Vec<CfgNode<'a>>,
    pub units: Vec<Unit<'a>>,
    edges: BTreeSet<Edge>,
    succ: Vec<Vec<(NodeId, EdgeKind)>>,
    pred: Vec<Vec<(NodeId, EdgeKind)>>,
    by_block: HashMap<(usize, &'a str), NodeId>,
    by_stmt: HashMap<usize, NodeId>,
}

pub const START: NodeId = 0;

impl<'a> ControlFlowGraph<'a> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId, kind: EdgeKind) -> bool {
        self.edges.contains(&Edge { from, to, kind })
    }

    pub fn successors(&self, n: NodeId) -> &[(NodeId, EdgeKind)] {
        &self.succ[n]
    }

    pub fn predecessors(&self, n: NodeId) -> &[(NodeId, EdgeKind)] {
        &self.pred[n]
    }

    /// Node of the statement with this block id in the actor at `actor_index`.
    pub fn node_of(&self, actor_index: usize, block_id: &str) -> Option<NodeId> {
        self.by_block.get(&(actor_index, block_id)).copied()
    }

    /// Node of a statement of the program this graph was built from.
    pub fn node_of_stmt(&self, stmt: &Stmt) -> Option<NodeId> {
        self.by_stmt.get(&(stmt as *const Stmt as usize)).copied()
    }

    pub fn stmt(&self, n: NodeId) -> Option<&'a Stmt> {
        match self.nodes[n].kind {
            NodeKind::Stmt(s) => Some(s),
            _ => None,
        }
    }

    pub fn unit_of(&self, n: NodeId) -> Option<&Unit<'a>> {
        self.nodes[n].unit.map(|u| &self.units[u])
    }

    /// Nodes reachable from `from` along edges accepted by `follow`.
    pub fn reachable(&self, from: NodeId, follow: impl Fn(EdgeKind) -> bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            for &(m, kind) in &self.succ[n] {
                if follow(kind) && seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    }

    fn label(&self, n: NodeId) -> String {
        match self.nodes[n].kind {
            NodeKind::Start => "START".to_string(),
            NodeKind::Entry => {
                let u = self.unit_of(n).unwrap();
                format!("ENTRY {}/{}", u.actor.name, u.owner.top_block_id())
            }
            NodeKind::Exit => {
                let u = self.unit_of(n).unwrap();
                format!("EXIT {}/{}", u.actor.name, u.owner.top_block_id())
            }
            NodeKind::Stmt(s) => format!("{} {}", s.opcode, s.block_id),
        }
    }

    /// Graphviz rendering; node labels are opcode plus block id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cfg {\n  node [shape=box];\n");
        for n in 0..self.nodes.len() {
            let _ = writeln!(out, "  n{n} [label={:?}];", self.label(n));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label={:?}];",
                e.from,
                e.to,
                e.kind.label()
            );
        }
        out.push_str("}\n");
        out
    }
}

type Dangling = Vec<(NodeId, EdgeKind)>;

struct Builder<'a> {
    nodes: Vec<CfgNode<'a>>,
    units: Vec<Unit<'a>>,
    edges: BTreeSet<Edge>,
    by_block: HashMap<(usize, &'a str), NodeId>,
    by_stmt: HashMap<usize, NodeId>,
    triggers: Vec<(usize, Trigger)>,
}

pub fn build_cfg(program: &Program) -> ControlFlowGraph<'_> {
    let mut b = Builder {
        nodes: vec![CfgNode {
            kind: NodeKind::Start,
            unit: None,
        }],
        units: Vec::new(),
        edges: BTreeSet::new(),
        by_block: HashMap::new(),
        by_stmt: HashMap::new(),
        triggers: all_triggers(program),
    };
    for (actor_index, actor) in program.actors().enumerate() {
        for script in &actor.scripts {
            b.allocate(actor_index, actor, Owner::Script(script));
        }
        for procedure in &actor.procedures {
            b.allocate(actor_index, actor, Owner::Procedure(procedure));
        }
    }
    for u in 0..b.units.len() {
        let unit = b.units[u];
        let exits = b.wire_list(unit.owner.body(), vec![(unit.entry, EdgeKind::Seq)], u);
        b.connect(&exits, unit.exit);
        if let Owner::Script(script) = unit.owner {
            let fired = !script.is_loose()
                && (fires_spontaneously(&script.event)
                    || b.triggers
                        .iter()
                        .any(|(_, t)| starts(t, &script.event, unit.actor)));
            if fired {
                b.units[u].fired = true;
                b.edges.insert(Edge {
                    from: START,
                    to: unit.entry,
                    kind: EdgeKind::Event,
                });
            }
        }
    }
    let n = b.nodes.len();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for e in &b.edges {
        succ[e.from].push((e.to, e.kind));
        pred[e.to].push((e.from, e.kind));
    }
    ControlFlowGraph {
        nodes: b.nodes,
        units: b.units,
        edges: b.edges,
        succ,
        pred,
        by_block: b.by_block,
        by_stmt: b.by_stmt,
    }
}

impl<'a> Builder<'a> {
    fn allocate(&mut self, actor_index: usize, actor: &'a Actor, owner: Owner<'a>) {
        let unit = self.units.len();
        let entry = self.nodes.len();
        self.nodes.push(CfgNode {
            kind: NodeKind::Entry,
            unit: Some(unit),
        });
        for s in owner.body() {
            s.walk(&mut |s| {
                self.by_block
                    .insert((actor_index, &s.block_id), self.nodes.len());
                self.by_stmt
                    .insert(s as *const Stmt as usize, self.nodes.len());
                self.nodes.push(CfgNode {
                    kind: NodeKind::Stmt(s),
                    unit: Some(unit),
                });
            });
        }
        let exit = self.nodes.len();
        self.nodes.push(CfgNode {
            kind: NodeKind::Exit,
            unit: Some(unit),
        });
        self.units.push(Unit {
            actor_index,
            actor,
            owner,
            entry,
            exit,
            fired: false,
        });
    }

    fn connect(&mut self, from: &Dangling, to: NodeId) {
        for &(f, kind) in from {
            self.edges.insert(Edge { from: f, to, kind });
        }
    }

    fn wire_list(&mut self, stmts: &'a [Stmt], mut preds: Dangling, unit: usize) -> Dangling {
        for s in stmts {
            preds = self.wire_stmt(s, preds, unit);
        }
        preds
    }

    fn wire_stmt(&mut self, s: &'a Stmt, preds: Dangling, unit: usize) -> Dangling {
        let n = self.by_stmt[&(s as *const Stmt as usize)];
        self.connect(&preds, n);
        let actor = self.units[unit].actor;
        let actor_index = self.units[unit].actor_index;
        if let Some(trigger) = stmt_trigger(s, actor) {
            self.event_edges(n, &trigger);
        }
        match s.kind {
            StmtKind::IfThen => {
                let mut exits =
                    self.wire_list(s.sub_stack(0), vec![(n, EdgeKind::BranchTrue)], unit);
                exits.push((n, EdgeKind::BranchFalse));
                exits
            }
            StmtKind::IfElse => {
                let mut exits =
                    self.wire_list(s.sub_stack(0), vec![(n, EdgeKind::BranchTrue)], unit);
                exits.extend(self.wire_list(
                    s.sub_stack(1),
                    vec![(n, EdgeKind::BranchFalse)],
                    unit,
                ));
                exits
            }
            StmtKind::RepeatTimes | StmtKind::RepeatUntil => {
                let body = self.wire_list(s.sub_stack(0), vec![(n, EdgeKind::BranchTrue)], unit);
                self.loop_back(&body, n);
                vec![(n, EdgeKind::LoopExit)]
            }
            StmtKind::Forever => {
                let body = self.wire_list(s.sub_stack(0), vec![(n, EdgeKind::Seq)], unit);
                self.loop_back(&body, n);
                Vec::new()
            }
            StmtKind::CallProcedure => {
                let callee = s.call.as_ref().and_then(|c| {
                    self.units.iter().find(|u| {
                        u.actor_index == actor_index
                            && u.owner
                                .procedure()
                                .is_some_and(|p| p.proccode == c.proccode)
                    })
                });
                match callee.copied() {
                    Some(callee) => {
                        self.edges.insert(Edge {
                            from: n,
                            to: callee.entry,
                            kind: EdgeKind::Call,
                        });
                        vec![(callee.exit, EdgeKind::Return)]
                    }
                    None => vec![(n, EdgeKind::Seq)],
                }
            }
            _ if s.is_terminal() => Vec::new(),
            _ if !s.sub_stacks.is_empty() => {
                let mut exits = vec![(n, EdgeKind::Seq)];
                for sub in &s.sub_stacks {
                    exits.extend(self.wire_list(sub, vec![(n, EdgeKind::BranchTrue)], unit));
                }
                exits
            }
            _ => vec![(n, EdgeKind::Seq)],
        }
    }

    fn loop_back(&mut self, body: &Dangling, header: NodeId) {
        for &(from, kind) in body {
            let kind = if kind == EdgeKind::Seq || from == header {
                EdgeKind::LoopBack
            } else {
                kind
            };
            self.edges.insert(Edge {
                from,
                to: header,
                kind,
            });
        }
    }

    fn event_edges(&mut self, n: NodeId, trigger: &Trigger) {
        for u in &self.units {
            if let Owner::Script(script) = u.owner {
                if starts(trigger, &script.event, u.actor) {
                    self.edges.insert(Edge {
                        from: n,
                        to: u.entry,
                        kind: EdgeKind::Event,
                    });
                }
            }
        }
    }
}
