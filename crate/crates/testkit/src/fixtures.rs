//! Hand-built fixtures with manually derived expectations.
//!
//! Every catalog finder gets a positive project (with the issues it must
//! report, located by block id) and a clean project on which it must stay
//! silent. Issues without block ids (actor- or program-level findings) list an
//! empty id set.

use serde_json::json;

use crate::builder::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub actor: &'static str,
    pub block_ids: Vec<&'static str>,
}

fn at(actor: &'static str, ids: &[&'static str]) -> Expected {
    Expected {
        actor,
        block_ids: ids.to_vec(),
    }
}

#[derive(Debug, Clone)]
pub struct FinderFixture {
    pub finder: &'static str,
    pub positive: Project,
    pub expected: Vec<Expected>,
    pub clean: Project,
}

fn cat(build: impl FnOnce(&mut Target)) -> Project {
    let mut p = Project::new();
    build(p.sprite("Cat"));
    p
}

fn say_hi() -> Block {
    say(text("hi"))
}

/// The level-check project: a script comparing the literal "level" with 21.
pub fn level_check() -> Project {
    let mut p = Project::new();
    p.stage().broadcast_decl("level 21");
    p.sprite("Player").var("level", json!(0)).script(
        when_flag().id("lc-hat"),
        vec![forever(vec![if_then(
            Some(eq(text("level"), num(21)).id("lc-eq")),
            vec![broadcast("level 21").id("lc-broadcast")],
        )
        .id("lc-if")])
        .id("lc-forever")],
    );
    p
}

/// Expected scratchblocks text of the level-check script.
pub const LEVEL_CHECK_SCRATCHBLOCKS: &str =
    "when green flag clicked\nforever\nif <[level] = (21)> then\nbroadcast (level 21 v)\nend\nend";

/// A well-formed sprite saying hello on green flag; no finder matches it.
pub fn clean_project() -> Project {
    cat(|t| {
        t.script(when_flag(), vec![say_hi()]);
    })
}

/// `answers` answer reporters spread over two sprites and `asks` ask blocks.
pub fn missing_ask_matrix(answers: usize, asks: usize) -> Project {
    let mut p = Project::new();
    let mut cat_body = Vec::new();
    let mut dog_body = Vec::new();
    for i in 0..answers {
        let s = say(answer().id(answer_id(i)).into_in());
        if i % 2 == 0 {
            cat_body.push(s);
        } else {
            dog_body.push(s);
        }
    }
    for _ in 0..asks {
        dog_body.insert(0, ask("name?"));
    }
    p.sprite("Cat").script(when_flag(), cat_body);
    p.sprite("Dog").script(when_clicked(), dog_body);
    p
}

/// Block id of the `i`-th answer reporter in [`missing_ask_matrix`].
pub fn answer_id(i: usize) -> &'static str {
    [
        "answer-0", "answer-1", "answer-2", "answer-3", "answer-4", "answer-5",
    ][i]
}

fn moves(n: usize) -> Vec<Block> {
    (0..n).map(|i| move_steps(i + 1)).collect()
}

fn six(tag: &str, first_step: i32) -> Vec<Block> {
    vec![
        move_steps(first_step).id(&format!("{tag}1")),
        turn_right(15).id(&format!("{tag}2")),
        say_for("hi", 1).id(&format!("{tag}3")),
        wait(1).id(&format!("{tag}4")),
        change_x(5).id(&format!("{tag}5")),
        next_costume().id(&format!("{tag}6")),
    ]
}

pub fn finder_fixtures() -> Vec<FinderFixture> {
    let mut out = Vec::new();
    let mut add =
        |finder: &'static str, positive: Project, expected: Vec<Expected>, clean: Project| {
            out.push(FinderFixture {
                finder,
                positive,
                expected,
                clean,
            });
        };

    // Syntax errors.
    add(
        "ambiguous_custom_block_signature",
        cat(|t| {
            t.procedure_with_id(Some("p1"), "jump", &[], vec![move_steps(10)])
                .procedure_with_id(Some("p2"), "jump", &[], vec![move_steps(20)])
                .script(when_flag(), vec![call("jump", vec![])]);
        }),
        vec![at("Cat", &["p1", "p2"])],
        cat(|t| {
            t.procedure_with_id(Some("p1"), "jump", &[], vec![move_steps(10)])
                .procedure_with_id(Some("p2"), "run", &[], vec![move_steps(20)])
                .script(when_flag(), vec![call("jump", vec![]), call("run", vec![])]);
        }),
    );
    add(
        "ambiguous_parameter_name",
        cat(|t| {
            t.procedure_with_id(
                Some("p1"),
                "draw %s %s",
                &["size", "size"],
                vec![move_steps(10)],
            );
        }),
        vec![at("Cat", &["p1"])],
        cat(|t| {
            t.procedure_with_id(
                Some("p1"),
                "draw %s %s",
                &["size", "width"],
                vec![move_steps(10)],
            );
        }),
    );
    add(
        "call_without_definition",
        cat(|t| {
            t.script(when_flag(), vec![call("fly", vec![]).id("c1")]);
        }),
        vec![at("Cat", &["c1"])],
        cat(|t| {
            t.script(when_flag(), vec![call("fly", vec![])]).procedure(
                "fly",
                &[],
                vec![move_steps(10)],
            );
        }),
    );
    add(
        "expression_as_touching_or_color",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_then(
                        Some(touching_color(x_position().id("r1").into_in())),
                        vec![say_hi()],
                    ),
                    if_then(
                        Some(
                            Block::new("sensing_touchingobject")
                                .input("TOUCHINGOBJECTMENU", answer().id("r2").into_in()),
                        ),
                        vec![say_hi()],
                    ),
                ])],
            );
        }),
        vec![at("Cat", &["r1"]), at("Cat", &["r2"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_then(Some(touching_color(color("#ff0000"))), vec![say_hi()]),
                    if_then(Some(touching("_edge_")), vec![say_hi()]),
                ])],
            );
        }),
    );
    add(
        "illegal_parameter_refactor",
        cat(|t| {
            t.procedure(
                "check %s",
                &["flag"],
                vec![if_then(Some(param("flag").id("r1")), vec![say_hi()])],
            )
            .script(when_flag(), vec![call("check %s", vec![text("x")])]);
        }),
        vec![at("Cat", &["r1"])],
        cat(|t| {
            t.procedure(
                "check %b",
                &["flag"],
                vec![if_then(Some(param_bool("flag")), vec![say_hi()])],
            )
            .script(
                when_flag(),
                vec![call("check %b", vec![mouse_down().cond()])],
            );
        }),
    );
    add(
        "missing_termination_condition",
        cat(|t| {
            t.script(
                when_flag(),
                vec![repeat_until(None, vec![move_steps(10)]).id("u1")],
            );
        }),
        vec![at("Cat", &["u1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![repeat_until(Some(touching("_edge_")), vec![move_steps(10)])],
            );
        }),
    );
    add(
        "missing_wait_until_condition",
        cat(|t| {
            t.script(when_flag(), vec![wait_until(None).id("w1"), say_hi()]);
        }),
        vec![at("Cat", &["w1"])],
        cat(|t| {
            t.script(when_flag(), vec![wait_until(Some(mouse_down())), say_hi()]);
        }),
    );
    add(
        "orphaned_parameter",
        cat(|t| {
            t.procedure("jump %s", &["h"], vec![Block::new("motion_changeyby").input("DY", param("height").id("r1").into_in())])
                .script(when_flag(), vec![call("jump %s", vec![num(10)])]);
        }),
        vec![at("Cat", &["r1"])],
        cat(|t| {
            t.procedure(
                "jump %s",
                &["h"],
                vec![Block::new("motion_changeyby").input("DY", param("h").into_in())],
            )
            .script(when_flag(), vec![call("jump %s", vec![num(10)])]);
        }),
    );
    add(
        "parameter_out_of_scope",
        cat(|t| {
            t.script(when_flag(), vec![say(param("h").id("r1").into_in())]);
        }),
        vec![at("Cat", &["r1"])],
        cat(|t| {
            t.procedure("talk %s", &["h"], vec![say(param("h").into_in())])
                .script(when_flag(), vec![call("talk %s", vec![text("hi")])]);
        }),
    );

    // Scratch-specific bugs.
    add(
        "missing_backdrop_switch",
        cat(|t| {
            t.script(when_backdrop("night").id("h1"), vec![say_hi()]);
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_backdrop("night"), vec![say_hi()])
                .script(when_flag(), vec![switch_backdrop("night")]);
        }),
    );
    add(
        "missing_erase_all",
        cat(|t| {
            t.script(
                when_flag(),
                vec![pen_down().id("d1"), move_steps(10), pen_up()],
            );
        }),
        vec![at("Cat", &["d1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![erase_all(), pen_down(), move_steps(10), pen_up()],
            );
        }),
    );
    add(
        "missing_pen_down",
        cat(|t| {
            t.script(
                when_flag(),
                vec![erase_all(), move_steps(10), pen_up().id("u1")],
            );
        }),
        vec![at("Cat", &["u1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![erase_all(), pen_down(), move_steps(10), pen_up()],
            );
        }),
    );
    add(
        "missing_pen_up",
        cat(|t| {
            t.script(
                when_flag(),
                vec![erase_all(), pen_down().id("d1"), move_steps(10)],
            );
        }),
        vec![at("Cat", &["d1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![erase_all(), pen_down(), move_steps(10), pen_up()],
            );
        }),
    );
    add(
        "missing_resource",
        cat(|t| {
            t.sound("meow").script(
                when_flag(),
                vec![
                    switch_costume("ghost").id("s1"),
                    play_sound("bark").id("s2"),
                    switch_costume("costume1"),
                    play_sound("meow"),
                ],
            );
        }),
        vec![at("Cat", &["s1"]), at("Cat", &["s2"])],
        cat(|t| {
            t.sound("meow").script(
                when_flag(),
                vec![switch_costume("costume1"), play_sound("meow")],
            );
        }),
    );
    add(
        "stuttering_movement",
        cat(|t| {
            t.script(when_key("right arrow").id("h1"), vec![change_x(10)]);
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(key_pressed("right arrow")),
                    vec![change_x(10)],
                )])],
            )
            .script(when_key("space"), vec![say_hi(), change_y(10)]);
        }),
    );

    // General bugs.
    add(
        "blocking_if_else",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_else(
                        Some(mouse_down()),
                        vec![stop("all")],
                        vec![stop("this script")],
                    )
                    .id("e1"),
                    say_hi(),
                ])],
            );
        }),
        vec![at("Cat", &["e1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_else(Some(mouse_down()), vec![stop("all")], vec![say_hi()]),
                    say_hi(),
                ])],
            );
        }),
    );
    add(
        "comparing_literals",
        level_check(),
        vec![at("Player", &["lc-eq"])],
        {
            let mut clean = Project::new();
            clean.sprite("Player").var("level", json!(0)).script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(eq(var("level"), num(21))),
                    vec![say_hi()],
                )])],
            );
            clean
        },
    );
    add(
        "custom_block_with_forever",
        cat(|t| {
            t.procedure("spin", &[], vec![forever(vec![turn_right(15)])])
                .script(when_flag(), vec![call("spin", vec![]).id("c1"), say_hi()]);
        }),
        vec![at("Cat", &["c1"])],
        cat(|t| {
            t.procedure("spin", &[], vec![forever(vec![turn_right(15)])])
                .script(when_flag(), vec![say_hi(), call("spin", vec![])]);
        }),
    );
    add(
        "custom_block_with_termination",
        cat(|t| {
            t.procedure("finish", &[], vec![say_for("bye", 1), stop("all")])
                .script(when_flag(), vec![call("finish", vec![]).id("c1"), say_hi()]);
        }),
        vec![at("Cat", &["c1"])],
        cat(|t| {
            t.procedure("finish", &[], vec![say_for("bye", 1), stop("all")])
                .script(when_flag(), vec![say_hi(), call("finish", vec![])]);
        }),
    );
    add(
        "delete_clone_after_broadcast",
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(
                    when_clone(),
                    vec![broadcast("bye").id("b1"), delete_clone().id("d1")],
                )
                .script(when_receive("bye"), vec![say_hi()]);
        }),
        vec![at("Cat", &["b1", "d1"])],
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(when_clone(), vec![broadcast_wait("bye"), delete_clone()])
                .script(when_receive("bye"), vec![say_hi()]);
        }),
    );
    add(
        "endless_recursion",
        cat(|t| {
            t.procedure(
                "recurse",
                &[],
                vec![move_steps(1), call("recurse", vec![]).id("c1")],
            )
            .script(
                when_flag(),
                vec![call("recurse", vec![]), broadcast("tick")],
            )
            .script(
                when_receive("tick"),
                vec![say_hi(), broadcast("tick").id("b1")],
            );
        }),
        vec![at("Cat", &["c1"]), at("Cat", &["b1"])],
        cat(|t| {
            t.procedure(
                "recurse %s",
                &["n"],
                vec![if_then(
                    Some(gt(param("n").into_in(), num(0))),
                    vec![call("recurse %s", vec![num(0)])],
                )],
            )
            .script(
                when_flag(),
                vec![call("recurse %s", vec![num(3)]), broadcast("tick")],
            )
            .script(
                when_receive("tick"),
                vec![if_then(Some(mouse_down()), vec![broadcast("tick")])],
            );
        }),
    );
    add(
        "forever_inside_loop",
        cat(|t| {
            t.script(
                when_flag(),
                vec![repeat(
                    num(10),
                    vec![forever(vec![move_steps(10)]).id("f1")],
                )],
            );
        }),
        vec![at("Cat", &["f1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    repeat(num(10), vec![move_steps(10)]),
                    turn_right(90),
                ])],
            );
        }),
    );
    add(
        "inappropriate_hatblock",
        cat(|t| {
            t.script(when_flag(), vec![say_hi(), delete_clone().id("d1")]);
        }),
        vec![at("Cat", &["d1"])],
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(when_clone(), vec![say_hi(), delete_clone()]);
        }),
    );
    add(
        "interrupted_loop_sensing",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(key_pressed("space")),
                    vec![say_for("jump", 2).id("s1")],
                )])],
            );
        }),
        vec![at("Cat", &["s1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(key_pressed("space")),
                    vec![change_y(10)],
                )])],
            )
            .script(
                when_clicked(),
                vec![repeat(num(3), vec![say_for("ouch", 1)])],
            );
        }),
    );
    add(
        "message_never_received",
        cat(|t| {
            t.script(when_flag(), vec![broadcast("start game").id("b1")]);
        }),
        vec![at("Cat", &["b1"])],
        cat(|t| {
            t.script(when_flag(), vec![broadcast("start game")])
                .script(when_receive("start game"), vec![say_hi()]);
        }),
    );
    add(
        "message_never_sent",
        cat(|t| {
            t.script(when_receive("start game").id("h1"), vec![say_hi()]);
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_flag(), vec![broadcast("start game")])
                .script(when_receive("start game"), vec![say_hi()]);
        }),
    );
    add(
        "missing_ask",
        missing_ask_matrix(1, 0),
        vec![at("Cat", &["answer-0"])],
        missing_ask_matrix(1, 1),
    );
    add(
        "missing_clone_call",
        cat(|t| {
            t.script(when_clone().id("h1"), vec![say_hi()]);
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(when_clone(), vec![say_hi()]);
        }),
    );
    add(
        "missing_clone_initialization",
        {
            let mut p = Project::new();
            p.sprite("Cat")
                .script(when_flag(), vec![create_clone("Dog").id("c1")]);
            p.sprite("Dog").script(when_flag(), vec![say_hi()]);
            p
        },
        vec![at("Cat", &["c1"])],
        {
            let mut p = Project::new();
            p.sprite("Cat")
                .script(when_flag(), vec![create_clone("Dog")]);
            p.sprite("Dog").script(when_clone(), vec![say_hi()]);
            p
        },
    );
    add(
        "missing_initialization",
        cat(|t| {
            t.var("score", json!(0))
                .script(when_flag(), vec![change_var("score", 1).id("c1")]);
        }),
        vec![at("Cat", &["c1"])],
        cat(|t| {
            t.var("score", json!(0)).script(
                when_flag(),
                vec![
                    set_var("score", num(0)),
                    change_var("score", 1),
                    say(var("score")),
                ],
            );
        }),
    );
    add(
        "missing_loop_sensing",
        cat(|t| {
            t.script(
                when_flag(),
                vec![if_then(Some(key_pressed("space")), vec![say_hi()]).id("i1")],
            );
        }),
        vec![at("Cat", &["i1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(key_pressed("space")),
                    vec![say_hi()],
                )])],
            );
        }),
    );
    add(
        "no_working_scripts",
        cat(|t| {
            t.loose(vec![move_steps(10).id("m1"), say_hi()]);
        }),
        vec![at("Cat", &["m1"])],
        cat(|t| {
            t.loose(vec![move_steps(10)])
                .script(when_flag(), vec![say_hi()]);
        }),
    );
    add(
        "position_equals_check",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(eq(x_position().into_in(), num(100)).id("e1")),
                    vec![say_hi()],
                )])],
            );
        }),
        vec![at("Cat", &["e1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(gt(x_position().into_in(), num(100))),
                    vec![say_hi()],
                )])],
            );
        }),
    );
    add(
        "recursive_cloning",
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(
                    when_clone(),
                    vec![move_steps(10), create_clone("_myself_").id("c1")],
                );
        }),
        vec![at("Cat", &["c1"])],
        cat(|t| {
            t.script(when_flag(), vec![create_clone("_myself_")])
                .script(
                    when_clone(),
                    vec![if_then(
                        Some(lt(x_position().into_in(), num(100))),
                        vec![create_clone("_myself_")],
                    )],
                );
        }),
    );
    add(
        "stop_after_say",
        cat(|t| {
            t.script(
                when_flag(),
                vec![say(text("bye")).id("s1"), stop("all").id("t1")],
            );
        }),
        vec![at("Cat", &["s1", "t1"])],
        cat(|t| {
            t.script(when_flag(), vec![say_for("bye", 2), stop("all")]);
        }),
    );
    add(
        "terminated_loop",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![move_steps(10), stop("this script")]).id("f1")],
            );
        }),
        vec![at("Cat", &["f1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    move_steps(10),
                    if_then(Some(touching("_edge_")), vec![stop("this script")]),
                ])],
            );
        }),
    );
    add(
        "type_error",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(eq(x_position().into_in(), text("left")).id("e1")),
                    vec![say_hi()],
                )])],
            );
        }),
        vec![at("Cat", &["e1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(gt(x_position().into_in(), text("100"))),
                    vec![say_hi()],
                )])],
            );
        }),
    );
    add(
        "variable_as_literal",
        level_check(),
        vec![at("Player", &["lc-eq"])],
        {
            let mut p = Project::new();
            p.sprite("Player").var("level", json!(0)).script(
                when_flag(),
                vec![forever(vec![if_then(
                    Some(eq(text("Level"), var("level"))),
                    vec![say_hi()],
                )])],
            );
            p
        },
    );

    // Code smells.
    add(
        "busy_waiting",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    move_steps(1),
                    if_then(Some(touching("_edge_")), vec![stop("this script")]),
                ])
                .id("f1")],
            );
        }),
        vec![at("Cat", &["f1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![wait_until(Some(touching("_edge_"))), say_hi()],
            );
        }),
    );
    add(
        "cloned_code",
        cat(|t| {
            t.script(when_flag(), six("a", 10))
                .script(when_clicked(), six("b", 20));
        }),
        vec![at("Cat", &["a1", "a2", "a3", "a4", "a5", "a6"])],
        cat(|t| {
            t.script(when_flag(), six("a", 10)).script(
                when_clicked(),
                vec![
                    show(),
                    hide(),
                    set_size(50),
                    point_in_direction(90),
                    go_to_xy(0, 0),
                    play_sound("pop"),
                ],
            );
        }),
    );
    add(
        "code_lying_around",
        cat(|t| {
            t.script(when_flag(), vec![say_hi()])
                .loose(vec![move_steps(10).id("m1"), turn_right(5)]);
        }),
        vec![at("Cat", &["m1"])],
        clean_project(),
    );
    add(
        "double_if",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_then(Some(key_pressed("a")), vec![change_x(-10)]).id("i1"),
                    if_then(Some(key_pressed("a")), vec![next_costume()]).id("i2"),
                ])],
            );
        }),
        vec![at("Cat", &["i1", "i2"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    if_then(Some(key_pressed("a")), vec![change_x(-10)]),
                    if_then(Some(key_pressed("d")), vec![change_x(10)]),
                ])],
            );
        }),
    );
    add(
        "duplicate_sprite",
        {
            let mut p = Project::new();
            p.sprite("Cat").script(when_flag(), vec![say_hi()]);
            p.sprite("Dog").script(when_flag().id("h2"), vec![say_hi()]);
            p
        },
        vec![at("Dog", &["h2"])],
        {
            let mut p = Project::new();
            p.sprite("Cat").script(when_flag(), vec![say_hi()]);
            p.sprite("Dog").script(when_flag(), vec![say(text("woof"))]);
            p
        },
    );
    add(
        "duplicated_script",
        cat(|t| {
            t.script(when_flag().id("h1"), vec![move_steps(10)])
                .script(when_flag().id("h2"), vec![move_steps(10)]);
        }),
        vec![at("Cat", &["h1", "h2"])],
        cat(|t| {
            t.script(when_flag(), vec![move_steps(10)])
                .script(when_flag(), vec![move_steps(20)]);
        }),
    );
    add(
        "empty_control_body",
        cat(|t| {
            t.script(when_flag(), vec![say_hi(), forever(vec![]).id("f1")]);
        }),
        vec![at("Cat", &["f1"])],
        cat(|t| {
            t.script(when_flag(), vec![forever(vec![move_steps(1)])]);
        }),
    );
    add(
        "empty_custom_block",
        cat(|t| {
            t.procedure_with_id(Some("p1"), "nothing", &[], vec![])
                .script(when_flag(), vec![call("nothing", vec![])]);
        }),
        vec![at("Cat", &["p1"])],
        cat(|t| {
            t.procedure("something", &[], vec![say_hi()])
                .script(when_flag(), vec![call("something", vec![])]);
        }),
    );
    add(
        "empty_project",
        Project::new(),
        vec![at("Stage", &[])],
        clean_project(),
    );
    add(
        "empty_script",
        cat(|t| {
            t.script(when_flag(), vec![say_hi()])
                .script(when_clicked().id("h1"), vec![]);
        }),
        vec![at("Cat", &["h1"])],
        clean_project(),
    );
    add(
        "empty_sprite",
        {
            let mut p = clean_project();
            p.sprite("Dog");
            p
        },
        vec![at("Dog", &[])],
        clean_project(),
    );
    add(
        "long_script",
        cat(|t| {
            t.script(when_flag().id("h1"), moves(12));
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_flag(), moves(11));
        }),
    );
    add(
        "message_naming",
        cat(|t| {
            t.script(when_flag(), vec![broadcast("message1").id("b1")])
                .script(when_receive("message1").id("h1"), vec![say_hi()]);
        }),
        vec![at("Cat", &["b1"]), at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_flag(), vec![broadcast("start game")])
                .script(when_receive("start game"), vec![say_hi()]);
        }),
    );
    add(
        "middle_man",
        cat(|t| {
            t.script(when_flag(), vec![broadcast("a")])
                .script(when_receive("a").id("h1"), vec![broadcast("b")])
                .script(when_receive("b"), vec![say_hi()]);
        }),
        vec![at("Cat", &["h1"])],
        cat(|t| {
            t.script(when_flag(), vec![broadcast("a")])
                .script(when_receive("a"), vec![say_hi(), broadcast("b")])
                .script(when_receive("b"), vec![say_hi()]);
        }),
    );
    add(
        "multi_attribute_modification",
        cat(|t| {
            t.var("score", json!(0)).script(
                when_flag(),
                vec![
                    set_var("score", num(0)).id("s1"),
                    change_var("score", 1).id("s2"),
                    say(var("score")),
                ],
            );
        }),
        vec![at("Cat", &["s1", "s2"])],
        cat(|t| {
            t.var("score", json!(0)).var("lives", json!(0)).script(
                when_flag(),
                vec![
                    set_var("score", num(0)),
                    set_var("lives", num(3)),
                    say(var("score")),
                ],
            );
        }),
    );
    add(
        "nested_loops",
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![repeat(num(10), vec![move_steps(10)]).id("r1")]).id("f1")],
            );
        }),
        vec![at("Cat", &["f1", "r1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![forever(vec![
                    repeat(num(10), vec![move_steps(10)]),
                    turn_right(90),
                ])],
            );
        }),
    );
    add(
        "same_variable_different_sprite",
        {
            let mut p = Project::new();
            p.sprite("Cat")
                .var("speed", json!(1))
                .script(when_flag(), vec![say(var("speed"))]);
            p.sprite("Dog")
                .var("speed", json!(2))
                .script(when_flag(), vec![say(var("speed"))]);
            p
        },
        vec![at("Cat", &[])],
        {
            let mut p = Project::new();
            p.sprite("Cat")
                .var("cat speed", json!(1))
                .script(when_flag(), vec![say(var("cat speed"))]);
            p.sprite("Dog")
                .var("dog speed", json!(2))
                .script(when_flag(), vec![say(var("dog speed"))]);
            p
        },
    );
    add(
        "sequential_actions",
        cat(|t| {
            t.script(
                when_flag(),
                vec![
                    say_hi(),
                    move_steps(10).id("m1"),
                    move_steps(10).id("m2"),
                    move_steps(10).id("m3"),
                    say_hi(),
                ],
            );
        }),
        vec![at("Cat", &["m1", "m2", "m3"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![
                    move_steps(10),
                    turn_right(10),
                    move_steps(10),
                    move_steps(10),
                ],
            );
        }),
    );
    add(
        "sprite_naming",
        {
            let mut p = Project::new();
            p.sprite("Sprite1").script(when_flag(), vec![say_hi()]);
            p
        },
        vec![at("Sprite1", &[])],
        clean_project(),
    );
    add(
        "unnecessary_if_after_until",
        cat(|t| {
            t.script(
                when_flag(),
                vec![
                    repeat_until(Some(touching("_edge_")), vec![move_steps(10)]),
                    if_then(Some(touching("_edge_")), vec![say_hi()]).id("i1"),
                ],
            );
        }),
        vec![at("Cat", &["i1"])],
        cat(|t| {
            t.script(
                when_flag(),
                vec![
                    repeat_until(Some(touching("_edge_")), vec![move_steps(10)]),
                    if_then(Some(mouse_down()), vec![say_hi()]),
                ],
            );
        }),
    );
    add(
        "unnecessary_loop",
        cat(|t| {
            t.script(
                when_flag(),
                vec![repeat(num(1), vec![move_steps(10)]).id("r1")],
            );
        }),
        vec![at("Cat", &["r1"])],
        cat(|t| {
            t.script(when_flag(), vec![repeat(num(2), vec![move_steps(10)])]);
        }),
    );
    add(
        "unused_custom_block",
        cat(|t| {
            t.procedure_with_id(Some("p1"), "jump", &[], vec![change_y(10)])
                .script(when_flag(), vec![say_hi()]);
        }),
        vec![at("Cat", &["p1"])],
        cat(|t| {
            t.procedure("jump", &[], vec![change_y(10)])
                .script(when_flag(), vec![call("jump", vec![])]);
        }),
    );
    add(
        "unused_parameter",
        cat(|t| {
            t.procedure_with_id(Some("p1"), "jump %s", &["height"], vec![change_y(10)])
                .script(when_flag(), vec![call("jump %s", vec![num(10)])]);
        }),
        vec![at("Cat", &["p1"])],
        cat(|t| {
            t.procedure(
                "jump %s",
                &["height"],
                vec![Block::new("motion_changeyby").input("DY", param("height").into_in())],
            )
            .script(when_flag(), vec![call("jump %s", vec![num(10)])]);
        }),
    );
    add(
        "unused_variable",
        cat(|t| {
            t.var("score", json!(0)).script(when_flag(), vec![say_hi()]);
        }),
        vec![at("Cat", &[])],
        cat(|t| {
            t.var("score", json!(0)).script(
                when_flag(),
                vec![set_var("score", num(0)), say(var("score"))],
            );
        }),
    );
    add(
        "variable_initialization_race",
        cat(|t| {
            t.var("mode", json!(""))
                .script(when_flag(), vec![set_var("mode", text("easy")).id("s1")])
                .script(
                    when_flag(),
                    vec![set_var("mode", text("hard")).id("s2"), say(var("mode"))],
                );
        }),
        vec![at("Cat", &["s1", "s2"])],
        cat(|t| {
            t.var("mode", json!(""))
                .script(when_flag(), vec![set_var("mode", text("easy"))])
                .script(
                    when_clicked(),
                    vec![set_var("mode", text("hard")), say(var("mode"))],
                );
        }),
    );
    out
}
