//! Brute-force reference for the definitely-defined analysis.

use std::collections::{BTreeMap, BTreeSet};

use scratchlint_core::cfg::{
    Attribute, ControlFlowGraph, DefName, EdgeKind, NodeId, NodeKind, START,
};

/// Names a node defines, derived from opcodes independently of the analysis.
pub fn oracle_gen(cfg: &ControlFlowGraph<'_>, n: NodeId) -> BTreeSet<DefName> {
    let Some(s) = cfg.stmt(n) else {
        return BTreeSet::new();
    };
    let actor = cfg.unit_of(n).unwrap().actor_index;
    let attrs = |list: &[Attribute]| {
        list.iter()
            .map(|&attribute| DefName::Attribute { actor, attribute })
            .collect()
    };
    match s.opcode.as_str() {
        "data_setvariableto" => {
            let f = s.field("VARIABLE").unwrap();
            BTreeSet::from([DefName::Variable(
                f.id.clone().unwrap_or_else(|| f.value.clone()),
            )])
        }
        "motion_gotoxy" | "motion_goto" | "motion_glideto" | "motion_glidesecstoxy" => {
            attrs(&[Attribute::X, Attribute::Y])
        }
        "motion_setx" => attrs(&[Attribute::X]),
        "motion_sety" => attrs(&[Attribute::Y]),
        "motion_pointindirection" | "motion_pointtowards" => attrs(&[Attribute::Direction]),
        "looks_switchcostumeto" => attrs(&[Attribute::Costume]),
        "looks_setsizeto" => attrs(&[Attribute::Size]),
        "looks_show" | "looks_hide" => attrs(&[Attribute::Visibility]),
        "pen_penDown" | "pen_penUp" => attrs(&[Attribute::Pen]),
        _ => BTreeSet::new(),
    }
}

/// Entry facts for every node: the intersection, over all simple paths from
/// the start node or a fired script entry, of the names defined along the way.
/// Cycles only add definitions, so simple paths decide a must-analysis.
/// A `broadcast and wait` also gains the union of its receivers' exit facts.
pub fn path_oracle(cfg: &ControlFlowGraph<'_>) -> Vec<Option<BTreeSet<DefName>>> {
    Oracle {
        cfg,
        exit_memo: BTreeMap::new(),
        in_progress: BTreeSet::new(),
    }
    .run()
}

struct Oracle<'c, 'a> {
    cfg: &'c ControlFlowGraph<'a>,
    exit_memo: BTreeMap<NodeId, Option<BTreeSet<DefName>>>,
    in_progress: BTreeSet<NodeId>,
}

impl Oracle<'_, '_> {
    fn run(&mut self) -> Vec<Option<BTreeSet<DefName>>> {
        let mut out = vec![None; self.cfg.node_count()];
        let mut on_path = vec![false; self.cfg.node_count()];
        self.dfs(START, &BTreeSet::new(), &mut on_path, &mut out);
        for unit in self.cfg.units.iter().filter(|u| u.fired) {
            self.dfs(unit.entry, &BTreeSet::new(), &mut on_path, &mut out);
        }
        out
    }

    /// Entry fact of `exit`, recomputed from scratch.
    fn exit_fact(&mut self, exit: NodeId) -> Option<BTreeSet<DefName>> {
        if let Some(f) = self.exit_memo.get(&exit) {
            return f.clone();
        }
        if !self.in_progress.insert(exit) {
            return None;
        }
        let all = self.run();
        self.in_progress.remove(&exit);
        self.exit_memo.insert(exit, all[exit].clone());
        all[exit].clone()
    }

    fn dfs(
        &mut self,
        n: NodeId,
        defs: &BTreeSet<DefName>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Option<BTreeSet<DefName>>>,
    ) {
        out[n] = Some(match out[n].take() {
            None => defs.clone(),
            Some(prev) => prev.intersection(defs).cloned().collect(),
        });
        let mut after = defs.clone();
        after.extend(oracle_gen(self.cfg, n));
        let waits = matches!(self.cfg.nodes[n].kind, NodeKind::Stmt(s) if s.opcode == "event_broadcastandwait");
        if waits {
            let receivers: Vec<NodeId> = self
                .cfg
                .successors(n)
                .iter()
                .filter(|(_, k)| *k == EdgeKind::Event)
                .map(|&(m, _)| self.cfg.unit_of(m).unwrap().exit)
                .collect();
            for exit in receivers {
                match self.exit_fact(exit) {
                    Some(f) => after.extend(f),
                    None => return,
                }
            }
        }
        on_path[n] = true;
        for &(m, kind) in self.cfg.successors(n) {
            if kind != EdgeKind::Event && !on_path[m] {
                self.dfs(m, &after, on_path, out);
            }
        }
        on_path[n] = false;
    }
}

/// Number of statement nodes in the graph.
pub fn statement_count(cfg: &ControlFlowGraph<'_>) -> usize {
    (0..cfg.node_count())
        .filter(|&n| cfg.stmt(n).is_some())
        .count()
}
