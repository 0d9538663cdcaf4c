//! Clone detection over flattened statement token sequences.
//!
//! Each script and procedure becomes a sequence of block tokens in pre-order.
//! Two units share a clone when an aligned window matches on at least
//! [`MIN_MATCHES`] abstract tokens with at most [`MAX_GAPS`] substituted ones.

use super::{Context, Finding};
use crate::ast::{Actor, CanonMode, Owner, Stmt};

pub const MIN_MATCHES: usize = 6;
pub const MAX_GAPS: usize = 2;

struct Token<'a> {
    exact: String,
    abstract_: String,
    stmt: &'a Stmt,
}

struct Unit<'a> {
    actor: &'a Actor,
    owner: Owner<'a>,
    tokens: Vec<Token<'a>>,
}

fn tokens(stmts: &[Stmt]) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    crate::ast::walk_stmts(stmts, &mut |s| {
        out.push(Token {
            exact: s.canonical_head(CanonMode::Exact),
            abstract_: s.canonical_head(CanonMode::Abstract),
            stmt: s,
        })
    });
    out
}

fn units<'a>(ctx: &Context<'a>) -> Vec<Unit<'a>> {
    let mut out = Vec::new();
    for actor in ctx.program.actors() {
        let owners = actor
            .scripts
            .iter()
            .map(Owner::Script)
            .chain(actor.procedures.iter().map(Owner::Procedure));
        for owner in owners {
            let tokens = tokens(owner.body());
            if tokens.len() >= MIN_MATCHES {
                out.push(Unit {
                    actor,
                    owner,
                    tokens,
                });
            }
        }
    }
    out
}

/// A matched window: start in each unit, length, matches and whether all matches are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fragment {
    pub start_a: usize,
    pub start_b: usize,
    pub len: usize,
    pub matches: usize,
    pub gaps: usize,
    pub exact: bool,
}

impl Fragment {
    pub fn clone_type(&self) -> u8 {
        match (self.gaps, self.exact) {
            (0, true) => 1,
            (0, false) => 2,
            _ => 3,
        }
    }
}

/// Longest fragment shared by two token sequences (`abstract` tokens decide
/// matching, `exact` ones the clone type).
pub fn longest_fragment(a: &[(&str, &str)], b: &[(&str, &str)]) -> Option<Fragment> {
    let mut best: Option<Fragment> = None;
    let n = a.len() as isize;
    let m = b.len() as isize;
    for offset in -(n - 1)..m {
        let pairs: Vec<(usize, usize)> = (0..n)
            .map(|i| (i, i + offset))
            .filter(|&(_, j)| j >= 0 && j < m)
            .map(|(i, j)| (i as usize, j as usize))
            .collect();
        for start in 0..pairs.len() {
            let (i0, j0) = pairs[start];
            if a[i0].1 != b[j0].1 {
                continue;
            }
            let (mut matches, mut gaps, mut exact) = (0, 0, true);
            let mut current: Option<Fragment> = None;
            for &(i, j) in &pairs[start..] {
                if a[i].1 == b[j].1 {
                    matches += 1;
                    exact &= a[i].0 == b[j].0;
                    current = Some(Fragment {
                        start_a: i0,
                        start_b: j0,
                        len: i - i0 + 1,
                        matches,
                        gaps,
                        exact,
                    });
                } else {
                    gaps += 1;
                    if gaps > MAX_GAPS {
                        break;
                    }
                }
            }
            if let Some(f) = current.filter(|f| f.matches >= MIN_MATCHES) {
                if best.is_none_or(|b| (f.len, f.matches) > (b.len, b.matches)) {
                    best = Some(f);
                }
            }
        }
    }
    best
}

pub(super) fn cloned_code(ctx: &Context<'_>) -> Vec<Finding> {
    let units = units(ctx);
    let keys: Vec<Vec<(&str, &str)>> = units
        .iter()
        .map(|u| {
            u.tokens
                .iter()
                .map(|t| (t.exact.as_str(), t.abstract_.as_str()))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for x in 0..units.len() {
        for y in x + 1..units.len() {
            let Some(f) = longest_fragment(&keys[x], &keys[y]) else {
                continue;
            };
            let (a, b) = (&units[x], &units[y]);
            let ids = a.tokens[f.start_a..f.start_a + f.len]
                .iter()
                .map(|t| t.stmt.block_id.clone())
                .collect();
            out.push(
                Finding::new(a.actor, Some(a.owner.top_block_id()), ids)
                    .param("type", f.clone_type())
                    .param("other_actor", &b.actor.name)
                    .param("other_script", b.owner.top_block_id())
                    .param("length", f.len),
            );
        }
    }
    out
}
