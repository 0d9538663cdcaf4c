//! Forward must-analysis of definitely-defined variables and sprite attributes.
//!
//! Facts are sets of names defined on every path reaching a node; `None`
//! stands for "no path reaches this node" (the top element). Fired script
//! entries start empty, procedure entries meet over their call sites, and
//! `broadcast and wait` additionally gains whatever all its receivers define
//! by the time they finish. Plain broadcast edges carry nothing.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{ControlFlowGraph, EdgeKind, NodeId, NodeKind};
use crate::ast::{Owner, StmtKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Attribute {
    X,
    Y,
    Direction,
    Costume,
    Size,
    Visibility,
    Pen,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DefName {
    Variable(String),
    /// Attribute of the actor at this index in `Program::actors()`.
    Attribute {
        actor: usize,
        attribute: Attribute,
    },
}

pub type Fact = Option<BTreeSet<DefName>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataflowFacts {
    /// Facts holding on entry to each node.
    pub facts_in: Vec<Fact>,
}

impl DataflowFacts {
    /// Whether `name` is defined on every path into `node`. Unreachable nodes define everything.
    pub fn defined_at(&self, node: NodeId, name: &DefName) -> bool {
        self.facts_in[node]
            .as_ref()
            .is_none_or(|s| s.contains(name))
    }

    pub fn reachable(&self, node: NodeId) -> bool {
        self.facts_in[node].is_some()
    }
}

/// Names a statement node defines absolutely.
pub fn gen(cfg: &ControlFlowGraph<'_>, node: NodeId) -> Vec<DefName> {
    let Some(stmt) = cfg.stmt(node) else {
        return Vec::new();
    };
    let actor = cfg.unit_of(node).map(|u| u.actor_index).unwrap_or(0);
    let attr = |attribute| DefName::Attribute { actor, attribute };
    match stmt.kind {
        StmtKind::SetVariable => stmt
            .variable()
            .map(|(id, _)| vec![DefName::Variable(id.to_string())])
            .unwrap_or_default(),
        StmtKind::GoTo | StmtKind::GoToXY | StmtKind::GlideTo | StmtKind::GlideToXY => {
            vec![attr(Attribute::X), attr(Attribute::Y)]
        }
        StmtKind::SetX => vec![attr(Attribute::X)],
        StmtKind::SetY => vec![attr(Attribute::Y)],
        StmtKind::PointInDirection | StmtKind::PointTowards => vec![attr(Attribute::Direction)],
        StmtKind::SwitchCostumeTo => vec![attr(Attribute::Costume)],
        StmtKind::SetSizeTo => vec![attr(Attribute::Size)],
        StmtKind::Show | StmtKind::Hide => vec![attr(Attribute::Visibility)],
        StmtKind::PenDown | StmtKind::PenUp => vec![attr(Attribute::Pen)],
        _ => Vec::new(),
    }
}

/// Exit nodes of the scripts a `broadcast and wait` node starts.
pub(crate) fn awaited_exits(cfg: &ControlFlowGraph<'_>, node: NodeId) -> Vec<NodeId> {
    match cfg.stmt(node) {
        Some(s) if s.kind == StmtKind::BroadcastAndWait => cfg
            .successors(node)
            .iter()
            .filter(|(_, k)| *k == EdgeKind::Event)
            .filter_map(|&(m, _)| cfg.unit_of(m).map(|u| u.exit))
            .collect(),
        _ => Vec::new(),
    }
}

/// Facts after `node` given the facts before it.
pub(crate) fn transfer(
    cfg: &ControlFlowGraph<'_>,
    node: NodeId,
    input: &Fact,
    exit_fact: impl Fn(NodeId) -> Fact,
) -> Fact {
    let mut out = input.clone()?;
    out.extend(gen(cfg, node));
    for exit in awaited_exits(cfg, node) {
        out.extend(exit_fact(exit)?);
    }
    Some(out)
}

/// Fixed facts of entry nodes; `None` when the node is computed.
fn fixed(cfg: &ControlFlowGraph<'_>, node: NodeId) -> Option<Fact> {
    match cfg.nodes[node].kind {
        NodeKind::Start => Some(Some(BTreeSet::new())),
        NodeKind::Entry => {
            let unit = cfg.unit_of(node).unwrap();
            match unit.owner {
                Owner::Script(_) => Some(unit.fired.then(BTreeSet::new)),
                Owner::Procedure(_) => None,
            }
        }
        _ => None,
    }
}

pub fn definitely_defined(cfg: &ControlFlowGraph<'_>) -> DataflowFacts {
    let order: Vec<NodeId> = (0..cfg.node_count()).collect();
    definitely_defined_with_order(cfg, &order)
}

/// Same fixpoint as [`definitely_defined`], seeding the worklist in `order`.
pub fn definitely_defined_with_order(
    cfg: &ControlFlowGraph<'_>,
    order: &[NodeId],
) -> DataflowFacts {
    let n = cfg.node_count();
    let mut facts: Vec<Fact> = vec![None; n];
    let mut waiting_on_exit: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for (node, fact) in facts.iter_mut().enumerate() {
        if let Some(f) = fixed(cfg, node) {
            *fact = f;
        }
        for exit in awaited_exits(cfg, node) {
            waiting_on_exit[exit].push(node);
        }
    }
    let mut queued = vec![false; n];
    let mut worklist: VecDeque<NodeId> = VecDeque::new();
    for node in order.iter().copied().chain(0..n) {
        if !queued[node] {
            queued[node] = true;
            worklist.push_back(node);
        }
    }
    while let Some(node) = worklist.pop_front() {
        queued[node] = false;
        let updated = if fixed(cfg, node).is_some() {
            facts[node].clone()
        } else {
            let mut meet: Fact = None;
            for &(p, kind) in cfg.predecessors(node) {
                if kind == EdgeKind::Event {
                    continue;
                }
                let out = transfer(cfg, p, &facts[p], |e| facts[e].clone());
                meet = match (meet, out) {
                    (None, o) => o,
                    (m, None) => m,
                    (Some(a), Some(b)) => Some(a.intersection(&b).cloned().collect()),
                };
            }
            meet
        };
        let changed = updated != facts[node];
        facts[node] = updated;
        if changed {
            let dependents = cfg
                .successors(node)
                .iter()
                .filter(|(_, k)| *k != EdgeKind::Event)
                .map(|&(m, _)| m)
                .chain(
                    waiting_on_exit[node]
                        .iter()
                        .flat_map(|&b| cfg.successors(b).iter().map(|&(m, _)| m)),
                );
            for m in dependents.collect::<Vec<_>>() {
                if !queued[m] {
                    queued[m] = true;
                    worklist.push_back(m);
                }
            }
        }
    }
    DataflowFacts { facts_in: facts }
}
