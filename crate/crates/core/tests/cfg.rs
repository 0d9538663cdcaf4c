use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scratchlint_core::ast::{parse_project, Program};
use scratchlint_core::cfg::{
    build_cfg, definitely_defined, definitely_defined_with_order, ControlFlowGraph, DefName,
    EdgeKind, NodeId, NodeKind, START,
};
use scratchlint_testkit::fixtures::{finder_fixtures, level_check};
use scratchlint_testkit::*;

#[path = "support/dataflow_oracle.rs"]
mod dataflow_oracle;
use dataflow_oracle::{path_oracle, statement_count};

fn program(p: &Project) -> Program {
    parse_project(&p.to_json()).expect("fixture parses")
}

fn node(cfg: &ControlFlowGraph<'_>, id: &str) -> NodeId {
    cfg.node_of(1, id)
        .unwrap_or_else(|| panic!("no node for {id}"))
}

#[test]
fn straight_line_script() {
    let mut p = Project::new();
    p.sprite("Cat")
        .script(when_flag(), vec![move_steps(1).id("a"), hide().id("b")]);
    let prog = program(&p);
    let cfg = build_cfg(&prog);
    let unit = cfg.units[0];
    let (a, b) = (node(&cfg, "a"), node(&cfg, "b"));
    assert!(cfg.has_edge(START, unit.entry, EdgeKind::Event));
    assert!(cfg.has_edge(unit.entry, a, EdgeKind::Seq));
    assert!(cfg.has_edge(a, b, EdgeKind::Seq));
    assert!(cfg.has_edge(b, unit.exit, EdgeKind::Seq));
    assert_eq!(cfg.edges().count(), 4);
}

#[test]
fn if_then_and_if_else_branch() {
    let mut p = Project::new();
    p.sprite("Cat").script(
        when_flag(),
        vec![
            if_then(Some(mouse_down()), vec![hide().id("t")]).id("if"),
            if_else(
                Some(mouse_down()),
                vec![show().id("yes")],
                vec![hide().id("no")],
            )
            .id("ifelse"),
        ],
    );
    let prog = program(&p);
    let cfg = build_cfg(&prog);
    let [i, t, ie, yes, no] = ["if", "t", "ifelse", "yes", "no"].map(|id| node(&cfg, id));
    assert!(cfg.has_edge(i, t, EdgeKind::BranchTrue));
    assert!(cfg.has_edge(i, ie, EdgeKind::BranchFalse));
    assert!(cfg.has_edge(t, ie, EdgeKind::Seq));
    assert!(cfg.has_edge(ie, yes, EdgeKind::BranchTrue));
    assert!(cfg.has_edge(ie, no, EdgeKind::BranchFalse));
    let exit = cfg.units[0].exit;
    assert!(cfg.has_edge(yes, exit, EdgeKind::Seq) && cfg.has_edge(no, exit, EdgeKind::Seq));
}

#[test]
fn loops_have_back_and_exit_edges() {
    let mut p = Project::new();
    p.sprite("Cat").script(
        when_flag(),
        vec![
            repeat(num(3), vec![move_steps(1).id("body")]).id("loop"),
            forever(vec![hide().id("f")]).id("forever"),
        ],
    );
    let prog = program(&p);
    let cfg = build_cfg(&prog);
    let [l, body, f, fb] = ["loop", "body", "forever", "f"].map(|id| node(&cfg, id));
    assert!(cfg.has_edge(l, body, EdgeKind::BranchTrue));
    assert!(cfg.has_edge(body, l, EdgeKind::LoopBack));
    assert!(cfg.has_edge(l, f, EdgeKind::LoopExit));
    assert!(cfg.has_edge(fb, f, EdgeKind::LoopBack));
    let exit = cfg.units[0].exit;
    assert!(
        cfg.predecessors(exit).is_empty(),
        "forever never reaches the exit"
    );
}

#[test]
fn stop_ends_the_path() {
    let mut p = Project::new();
    p.sprite("Cat")
        .script(when_flag(), vec![stop("all").id("stop"), hide().id("dead")]);
    let prog = program(&p);
    let cfg = build_cfg(&prog);
    let dead = node(&cfg, "dead");
    assert!(cfg.predecessors(dead).is_empty());
    assert!(!cfg.reachable(START, |_| true).contains(&dead));
}

#[test]
fn calls_and_broadcasts_link_units() {
    let mut p = Project::new();
    p.sprite("Cat")
        .procedure("jump", &[], vec![change_y(10).id("in-proc")])
        .script(
            when_flag(),
            vec![
                call("jump", vec![]).id("call"),
                broadcast("go").id("send"),
                hide().id("after"),
            ],
        )
        .script(when_receive("go"), vec![show().id("recv")])
        .script(when_receive("never"), vec![show().id("silent")]);
    let prog = program(&p);
    let cfg = build_cfg(&prog);
    let proc_unit = cfg
        .units
        .iter()
        .find(|u| u.owner.procedure().is_some())
        .unwrap();
    let [c, send, after, recv, silent] =
        ["call", "send", "after", "recv", "silent"].map(|id| node(&cfg, id));
    assert!(cfg.has_edge(c, proc_unit.entry, EdgeKind::Call));
    assert!(cfg.has_edge(proc_unit.exit, send, EdgeKind::Return));
    let recv_unit = cfg.unit_of(recv).unwrap();
    assert!(cfg.has_edge(send, recv_unit.entry, EdgeKind::Event));
    assert!(cfg.has_edge(send, after, EdgeKind::Seq));
    assert!(recv_unit.fired);
    assert!(!cfg.unit_of(silent).unwrap().fired);
    assert!(!cfg.reachable(START, |_| true).contains(&silent));
}

#[test]
fn every_statement_has_exactly_one_node() {
    for f in finder_fixtures() {
        for proj in [&f.positive, &f.clean] {
            let prog = program(proj);
            let cfg = build_cfg(&prog);
            let stmt_nodes = cfg
                .nodes
                .iter()
                .filter(|n| matches!(n.kind, NodeKind::Stmt(_)))
                .count();
            let mut expected = 0;
            for a in prog.actors() {
                for s in &a.scripts {
                    expected += scratchlint_core::ast::count_statements(&s.body);
                }
                for p in &a.procedures {
                    expected += scratchlint_core::ast::count_statements(&p.body);
                }
            }
            assert_eq!(stmt_nodes, expected, "{}", f.finder);
            let units = prog
                .actors()
                .map(|a| a.scripts.len() + a.procedures.len())
                .sum::<usize>();
            assert_eq!(cfg.node_count(), 1 + 2 * units + expected);
        }
    }
}

#[test]
fn dot_output_lists_nodes_and_edges() {
    let prog = program(&level_check());
    let dot = build_cfg(&prog).to_dot();
    assert!(dot.starts_with("digraph cfg {"));
    assert!(dot.contains("control_forever lc-forever"));
    assert!(dot.contains("BRANCH_TRUE"));
}

/// Random single-script bodies with at most `budget` statements.
fn random_body(rng: &mut ChaCha8Rng, budget: &mut usize, depth: usize) -> Vec<Block> {
    let mut out = Vec::new();
    let len = rng.gen_range(0..=4);
    for _ in 0..len {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        let var = ["a", "b", "c"].choose(rng).unwrap();
        let block = match rng.gen_range(0..if depth < 3 { 9 } else { 5 }) {
            0 | 1 => set_var(var, num(1)),
            2 => set_x(0),
            3 => hide(),
            4 => {
                if rng.gen_bool(0.3) {
                    stop("this script")
                } else {
                    say(var_with_id(var, var))
                }
            }
            5 => if_then(Some(mouse_down()), random_body(rng, budget, depth + 1)),
            6 => if_else(
                Some(mouse_down()),
                random_body(rng, budget, depth + 1),
                random_body(rng, budget, depth + 1),
            ),
            7 => repeat(num(2), random_body(rng, budget, depth + 1)),
            _ => {
                if rng.gen_bool(0.5) {
                    repeat_until(Some(mouse_down()), random_body(rng, budget, depth + 1))
                } else {
                    forever(random_body(rng, budget, depth + 1))
                }
            }
        };
        out.push(block);
    }
    out
}

fn random_program(seed: u64) -> Project {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = 12;
    let body = random_body(&mut rng, &mut budget, 0);
    let mut p = Project::new();
    p.sprite("Cat")
        .var("a", serde_json::json!(0))
        .var("b", serde_json::json!(0))
        .var("c", serde_json::json!(0));
    p.sprite_mut("Cat").script(when_flag(), body);
    p
}

#[test]
fn dataflow_matches_path_enumeration() {
    for seed in 0..300 {
        let prog = program(&random_program(seed));
        let cfg = build_cfg(&prog);
        let facts = definitely_defined(&cfg);
        let oracle = path_oracle(&cfg);
        for (n, (fact, expected)) in facts.facts_in.iter().zip(&oracle).enumerate() {
            assert_eq!(fact, expected, "seed {seed}, node {n}\n{}", cfg.to_dot());
        }
    }
}

#[test]
fn dataflow_matches_path_enumeration_on_small_fixtures() {
    let mut checked = 0;
    for f in finder_fixtures() {
        for p in [&f.positive, &f.clean] {
            let prog = program(p);
            let cfg = build_cfg(&prog);
            if statement_count(&cfg) > 12 {
                continue;
            }
            checked += 1;
            assert_eq!(
                definitely_defined(&cfg).facts_in,
                path_oracle(&cfg),
                "{}\n{}",
                f.finder,
                cfg.to_dot()
            );
        }
    }
    assert!(checked > 100, "only {checked} fixtures checked");
}

#[test]
fn dataflow_is_independent_of_worklist_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut programs: Vec<Program> = (0..40)
        .map(|s| program(&random_program(1000 + s)))
        .collect();
    programs.extend(finder_fixtures().iter().map(|f| program(&f.positive)));
    for prog in &programs {
        let cfg = build_cfg(prog);
        let reference = definitely_defined(&cfg);
        for _ in 0..5 {
            let mut order: Vec<NodeId> = (0..cfg.node_count()).collect();
            order.shuffle(&mut rng);
            assert_eq!(definitely_defined_with_order(&cfg, &order), reference);
        }
    }
}

#[test]
fn plain_broadcast_carries_no_definitions_but_broadcast_and_wait_does() {
    let build = |wait: bool| {
        let mut p = Project::new();
        let send = if wait {
            broadcast_wait("init")
        } else {
            broadcast("init")
        };
        p.sprite("Cat")
            .var("score", serde_json::json!(0))
            .script(
                when_flag(),
                vec![send, say(var_with_id("score", "score")).id("use")],
            )
            .script(when_receive("init"), vec![set_var("score", num(0))]);
        p
    };
    for (wait, expected) in [(false, false), (true, true)] {
        let prog = program(&build(wait));
        let cfg = build_cfg(&prog);
        let facts = definitely_defined(&cfg);
        let at = cfg.node_of(1, "use").unwrap();
        assert_eq!(
            facts.defined_at(at, &DefName::Variable("score".into())),
            expected,
            "wait={wait}"
        );
    }
}
