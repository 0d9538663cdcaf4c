//! Opcode tables for the standard Scratch 3.0 palette plus the pen extension.
//!
//! Each row ties a block kind to its opcode, its scratchblocks template and the
//! ordered layout of its value inputs. Templates use `{INPUT}` for value inputs
//! and `{F:FIELD}` for dropdown fields.

use serde::Serialize;

/// The expected type of an input slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    Number,
    Text,
    Bool,
    Color,
    /// Dropdown menu filled by a shadow menu block.
    Menu,
    /// The object menu of `touching (…)?`.
    Touching,
    Broadcast,
    /// Layout unknown (extension blocks, procedure call arguments of `%s` kind).
    Any,
}

macro_rules! statement_table {
    ($( $variant:ident = $opcode:literal, $template:literal, [$($input:literal : $slot:ident),*], $subs:literal; )*) => {
        /// Kind of a stack, cap or C block.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
        pub enum StmtKind {
            $($variant,)*
            CallProcedure,
            Unknown,
        }

        impl StmtKind {
            pub fn from_opcode(opcode: &str) -> StmtKind {
                match opcode {
                    $($opcode => StmtKind::$variant,)*
                    "procedures_call" => StmtKind::CallProcedure,
                    _ => StmtKind::Unknown,
                }
            }

            /// Canonical opcode, `None` for `Unknown` (the raw opcode lives on the statement).
            pub fn opcode(self) -> Option<&'static str> {
                match self {
                    $(StmtKind::$variant => Some($opcode),)*
                    StmtKind::CallProcedure => Some("procedures_call"),
                    StmtKind::Unknown => None,
                }
            }

            pub fn template(self) -> Option<&'static str> {
                match self {
                    $(StmtKind::$variant => Some($template),)*
                    _ => None,
                }
            }

            pub fn input_slots(self) -> &'static [(&'static str, Slot)] {
                match self {
                    $(StmtKind::$variant => &[$(($input, Slot::$slot)),*],)*
                    _ => &[],
                }
            }

            pub fn sub_stack_count(self) -> usize {
                match self {
                    $(StmtKind::$variant => $subs,)*
                    _ => 0,
                }
            }

            pub fn all() -> &'static [StmtKind] {
                &[$(StmtKind::$variant,)*]
            }
        }
    };
}

statement_table! {
    MoveSteps = "motion_movesteps", "move {STEPS} steps", ["STEPS": Number], 0;
    TurnRight = "motion_turnright", "turn right {DEGREES} degrees", ["DEGREES": Number], 0;
    TurnLeft = "motion_turnleft", "turn left {DEGREES} degrees", ["DEGREES": Number], 0;
    GoTo = "motion_goto", "go to {TO}", ["TO": Menu], 0;
    GoToXY = "motion_gotoxy", "go to x: {X} y: {Y}", ["X": Number, "Y": Number], 0;
    GlideTo = "motion_glideto", "glide {SECS} secs to {TO}", ["SECS": Number, "TO": Menu], 0;
    GlideToXY = "motion_glidesecstoxy", "glide {SECS} secs to x: {X} y: {Y}", ["SECS": Number, "X": Number, "Y": Number], 0;
    PointInDirection = "motion_pointindirection", "point in direction {DIRECTION}", ["DIRECTION": Number], 0;
    PointTowards = "motion_pointtowards", "point towards {TOWARDS}", ["TOWARDS": Menu], 0;
    ChangeXBy = "motion_changexby", "change x by {DX}", ["DX": Number], 0;
    SetX = "motion_setx", "set x to {X}", ["X": Number], 0;
    ChangeYBy = "motion_changeyby", "change y by {DY}", ["DY": Number], 0;
    SetY = "motion_sety", "set y to {Y}", ["Y": Number], 0;
    IfOnEdgeBounce = "motion_ifonedgebounce", "if on edge, bounce", [], 0;
    SetRotationStyle = "motion_setrotationstyle", "set rotation style {F:STYLE}", [], 0;

    SayForSecs = "looks_sayforsecs", "say {MESSAGE} for {SECS} seconds", ["MESSAGE": Text, "SECS": Number], 0;
    Say = "looks_say", "say {MESSAGE}", ["MESSAGE": Text], 0;
    ThinkForSecs = "looks_thinkforsecs", "think {MESSAGE} for {SECS} seconds", ["MESSAGE": Text, "SECS": Number], 0;
    Think = "looks_think", "think {MESSAGE}", ["MESSAGE": Text], 0;
    SwitchCostumeTo = "looks_switchcostumeto", "switch costume to {COSTUME}", ["COSTUME": Menu], 0;
    NextCostume = "looks_nextcostume", "next costume", [], 0;
    SwitchBackdropTo = "looks_switchbackdropto", "switch backdrop to {BACKDROP}", ["BACKDROP": Menu], 0;
    SwitchBackdropToAndWait = "looks_switchbackdroptoandwait", "switch backdrop to {BACKDROP} and wait", ["BACKDROP": Menu], 0;
    NextBackdrop = "looks_nextbackdrop", "next backdrop", [], 0;
    ChangeSizeBy = "looks_changesizeby", "change size by {CHANGE}", ["CHANGE": Number], 0;
    SetSizeTo = "looks_setsizeto", "set size to {SIZE} %", ["SIZE": Number], 0;
    ChangeEffectBy = "looks_changeeffectby", "change {F:EFFECT} effect by {CHANGE}", ["CHANGE": Number], 0;
    SetEffectTo = "looks_seteffectto", "set {F:EFFECT} effect to {VALUE}", ["VALUE": Number], 0;
    ClearGraphicEffects = "looks_cleargraphiceffects", "clear graphic effects", [], 0;
    Show = "looks_show", "show", [], 0;
    Hide = "looks_hide", "hide", [], 0;
    GoToFrontBack = "looks_gotofrontback", "go to {F:FRONT_BACK} layer", [], 0;
    GoForwardBackwardLayers = "looks_goforwardbackwardlayers", "go {F:FORWARD_BACKWARD} {NUM} layers", ["NUM": Number], 0;

    PlayUntilDone = "sound_playuntildone", "play sound {SOUND_MENU} until done", ["SOUND_MENU": Menu], 0;
    StartSound = "sound_play", "start sound {SOUND_MENU}", ["SOUND_MENU": Menu], 0;
    StopAllSounds = "sound_stopallsounds", "stop all sounds", [], 0;
    ChangeSoundEffectBy = "sound_changeeffectby", "change {F:EFFECT} effect by {VALUE}", ["VALUE": Number], 0;
    SetSoundEffectTo = "sound_seteffectto", "set {F:EFFECT} effect to {VALUE}", ["VALUE": Number], 0;
    ClearSoundEffects = "sound_cleareffects", "clear sound effects", [], 0;
    ChangeVolumeBy = "sound_changevolumeby", "change volume by {VOLUME}", ["VOLUME": Number], 0;
    SetVolumeTo = "sound_setvolumeto", "set volume to {VOLUME} %", ["VOLUME": Number], 0;

    Broadcast = "event_broadcast", "broadcast {BROADCAST_INPUT}", ["BROADCAST_INPUT": Broadcast], 0;
    BroadcastAndWait = "event_broadcastandwait", "broadcast {BROADCAST_INPUT} and wait", ["BROADCAST_INPUT": Broadcast], 0;

    WaitSeconds = "control_wait", "wait {DURATION} seconds", ["DURATION": Number], 0;
    RepeatTimes = "control_repeat", "repeat {TIMES}", ["TIMES": Number], 1;
    Forever = "control_forever", "forever", [], 1;
    IfThen = "control_if", "if {CONDITION} then", ["CONDITION": Bool], 1;
    IfElse = "control_if_else", "if {CONDITION} then", ["CONDITION": Bool], 2;
    WaitUntil = "control_wait_until", "wait until {CONDITION}", ["CONDITION": Bool], 0;
    RepeatUntil = "control_repeat_until", "repeat until {CONDITION}", ["CONDITION": Bool], 1;
    Stop = "control_stop", "stop {F:STOP_OPTION}", [], 0;
    CreateCloneOf = "control_create_clone_of", "create clone of {CLONE_OPTION}", ["CLONE_OPTION": Menu], 0;
    DeleteThisClone = "control_delete_this_clone", "delete this clone", [], 0;

    AskAndWait = "sensing_askandwait", "ask {QUESTION} and wait", ["QUESTION": Text], 0;
    SetDragMode = "sensing_setdragmode", "set drag mode {F:DRAG_MODE}", [], 0;
    ResetTimer = "sensing_resettimer", "reset timer", [], 0;

    SetVariable = "data_setvariableto", "set {F:VARIABLE} to {VALUE}", ["VALUE": Text], 0;
    ChangeVariableBy = "data_changevariableby", "change {F:VARIABLE} by {VALUE}", ["VALUE": Number], 0;
    ShowVariable = "data_showvariable", "show variable {F:VARIABLE}", [], 0;
    HideVariable = "data_hidevariable", "hide variable {F:VARIABLE}", [], 0;
    AddToList = "data_addtolist", "add {ITEM} to {F:LIST}", ["ITEM": Text], 0;
    DeleteOfList = "data_deleteoflist", "delete {INDEX} of {F:LIST}", ["INDEX": Number], 0;
    DeleteAllOfList = "data_deletealloflist", "delete all of {F:LIST}", [], 0;
    InsertAtList = "data_insertatlist", "insert {ITEM} at {INDEX} of {F:LIST}", ["ITEM": Text, "INDEX": Number], 0;
    ReplaceItemOfList = "data_replaceitemoflist", "replace item {INDEX} of {F:LIST} with {ITEM}", ["INDEX": Number, "ITEM": Text], 0;
    ShowList = "data_showlist", "show list {F:LIST}", [], 0;
    HideList = "data_hidelist", "hide list {F:LIST}", [], 0;

    EraseAll = "pen_clear", "erase all", [], 0;
    Stamp = "pen_stamp", "stamp", [], 0;
    PenDown = "pen_penDown", "pen down", [], 0;
    PenUp = "pen_penUp", "pen up", [], 0;
    SetPenColorTo = "pen_setPenColorToColor", "set pen color to {COLOR}", ["COLOR": Color], 0;
    ChangePenColorParamBy = "pen_changePenColorParamBy", "change pen {COLOR_PARAM} by {VALUE}", ["COLOR_PARAM": Menu, "VALUE": Number], 0;
    SetPenColorParamTo = "pen_setPenColorParamTo", "set pen {COLOR_PARAM} to {VALUE}", ["COLOR_PARAM": Menu, "VALUE": Number], 0;
    ChangePenSizeBy = "pen_changePenSizeBy", "change pen size by {SIZE}", ["SIZE": Number], 0;
    SetPenSizeTo = "pen_setPenSizeTo", "set pen size to {SIZE}", ["SIZE": Number], 0;
}

macro_rules! reporter_table {
    ($( $variant:ident = $opcode:literal, $template:literal, $boolean:literal, [$($input:literal : $slot:ident),*]; )*) => {
        /// Kind of a reporter (value) block.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
        pub enum ReporterKind {
            $($variant,)*
            Unknown,
        }

        impl ReporterKind {
            pub fn from_opcode(opcode: &str) -> ReporterKind {
                match opcode {
                    $($opcode => ReporterKind::$variant,)*
                    _ => ReporterKind::Unknown,
                }
            }

            pub fn opcode(self) -> Option<&'static str> {
                match self {
                    $(ReporterKind::$variant => Some($opcode),)*
                    ReporterKind::Unknown => None,
                }
            }

            pub fn template(self) -> Option<&'static str> {
                match self {
                    $(ReporterKind::$variant => Some($template),)*
                    ReporterKind::Unknown => None,
                }
            }

            /// Whether the block is a pointed (boolean) reporter.
            pub fn is_boolean(self) -> bool {
                match self {
                    $(ReporterKind::$variant => $boolean,)*
                    ReporterKind::Unknown => false,
                }
            }

            pub fn input_slots(self) -> &'static [(&'static str, Slot)] {
                match self {
                    $(ReporterKind::$variant => &[$(($input, Slot::$slot)),*],)*
                    ReporterKind::Unknown => &[],
                }
            }
        }
    };
}

reporter_table! {
    XPosition = "motion_xposition", "x position", false, [];
    YPosition = "motion_yposition", "y position", false, [];
    Direction = "motion_direction", "direction", false, [];

    CostumeNumberName = "looks_costumenumbername", "costume {F:NUMBER_NAME}", false, [];
    BackdropNumberName = "looks_backdropnumbername", "backdrop {F:NUMBER_NAME}", false, [];
    Size = "looks_size", "size", false, [];
    Volume = "sound_volume", "volume", false, [];

    TouchingObject = "sensing_touchingobject", "touching {TOUCHINGOBJECTMENU}?", true, ["TOUCHINGOBJECTMENU": Touching];
    TouchingColor = "sensing_touchingcolor", "touching color {COLOR}?", true, ["COLOR": Color];
    ColorIsTouchingColor = "sensing_coloristouchingcolor", "color {COLOR} is touching {COLOR2}?", true, ["COLOR": Color, "COLOR2": Color];
    DistanceTo = "sensing_distanceto", "distance to {DISTANCETOMENU}", false, ["DISTANCETOMENU": Menu];
    KeyPressed = "sensing_keypressed", "key {KEY_OPTION} pressed?", true, ["KEY_OPTION": Menu];
    MouseDown = "sensing_mousedown", "mouse down?", true, [];
    MouseX = "sensing_mousex", "mouse x", false, [];
    MouseY = "sensing_mousey", "mouse y", false, [];
    Loudness = "sensing_loudness", "loudness", false, [];
    Timer = "sensing_timer", "timer", false, [];
    Of = "sensing_of", "{F:PROPERTY} of {OBJECT}", false, ["OBJECT": Menu];
    Current = "sensing_current", "current {F:CURRENTMENU}", false, [];
    DaysSince2000 = "sensing_dayssince2000", "days since 2000", false, [];
    Username = "sensing_username", "username", false, [];

    Add = "operator_add", "{NUM1} + {NUM2}", false, ["NUM1": Number, "NUM2": Number];
    Subtract = "operator_subtract", "{NUM1} - {NUM2}", false, ["NUM1": Number, "NUM2": Number];
    Multiply = "operator_multiply", "{NUM1} * {NUM2}", false, ["NUM1": Number, "NUM2": Number];
    Divide = "operator_divide", "{NUM1} / {NUM2}", false, ["NUM1": Number, "NUM2": Number];
    Random = "operator_random", "pick random {FROM} to {TO}", false, ["FROM": Number, "TO": Number];
    GreaterThan = "operator_gt", "{OPERAND1} > {OPERAND2}", true, ["OPERAND1": Text, "OPERAND2": Text];
    LessThan = "operator_lt", "{OPERAND1} < {OPERAND2}", true, ["OPERAND1": Text, "OPERAND2": Text];
    Equals = "operator_equals", "{OPERAND1} = {OPERAND2}", true, ["OPERAND1": Text, "OPERAND2": Text];
    And = "operator_and", "{OPERAND1} and {OPERAND2}", true, ["OPERAND1": Bool, "OPERAND2": Bool];
    Or = "operator_or", "{OPERAND1} or {OPERAND2}", true, ["OPERAND1": Bool, "OPERAND2": Bool];
    Not = "operator_not", "not {OPERAND}", true, ["OPERAND": Bool];
    Join = "operator_join", "join {STRING1} {STRING2}", false, ["STRING1": Text, "STRING2": Text];
    LetterOf = "operator_letter_of", "letter {LETTER} of {STRING}", false, ["LETTER": Number, "STRING": Text];
    Length = "operator_length", "length of {STRING}", false, ["STRING": Text];
    Contains = "operator_contains", "{STRING1} contains {STRING2}?", true, ["STRING1": Text, "STRING2": Text];
    Mod = "operator_mod", "{NUM1} mod {NUM2}", false, ["NUM1": Number, "NUM2": Number];
    Round = "operator_round", "round {NUM}", false, ["NUM": Number];
    MathOp = "operator_mathop", "{F:OPERATOR} of {NUM}", false, ["NUM": Number];

    ItemOfList = "data_itemoflist", "item {INDEX} of {F:LIST}", false, ["INDEX": Number];
    ItemNumOfList = "data_itemnumoflist", "item # of {ITEM} in {F:LIST}", false, ["ITEM": Text];
    LengthOfList = "data_lengthoflist", "length of {F:LIST}", false, [];
    ListContainsItem = "data_listcontainsitem", "{F:LIST} contains {ITEM}?", true, ["ITEM": Text];
}

/// Hat opcodes that start a script. Procedure definitions are handled separately.
pub const HAT_OPCODES: &[&str] = &[
    "event_whenflagclicked",
    "event_whenkeypressed",
    "event_whenthisspriteclicked",
    "event_whenstageclicked",
    "event_whenbackdropswitchesto",
    "event_whengreaterthan",
    "event_whenbroadcastreceived",
    "control_start_as_clone",
];

/// Whether an opcode starts a script. Extension hats follow the `<ext>_when…` naming.
pub fn is_hat_opcode(opcode: &str) -> bool {
    HAT_OPCODES.contains(&opcode) || extension_hat(opcode)
}

fn extension_hat(opcode: &str) -> bool {
    match opcode.split_once('_') {
        Some((prefix, rest)) => {
            !matches!(prefix, "event" | "control" | "procedures") && rest.starts_with("when")
        }
        None => false,
    }
}

/// Opcodes parsed into dedicated expression kinds rather than generic reporters.
pub const SPECIAL_EXPRESSION_OPCODES: &[&str] = &[
    "argument_reporter_string_number",
    "argument_reporter_boolean",
    "data_variable",
    "data_listcontents",
    "sensing_answer",
];

/// Whether an opcode denotes a value block (used to classify loose top-level blocks).
pub fn is_expression_opcode(opcode: &str) -> bool {
    ReporterKind::from_opcode(opcode) != ReporterKind::Unknown
        || SPECIAL_EXPRESSION_OPCODES.contains(&opcode)
}
