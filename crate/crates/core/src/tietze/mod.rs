//! Isomorphism-preserving rewrites of presentations.
//!
//! * T1 adds a generator `y` together with the relator `y·s^-1`.
//! * T2 removes a generator that occurs in exactly one relator, exactly once.
//! * T3 applies a free-group automorphism given as elementary Nielsen moves.
//! * T4' replaces one relator by an element of the same normal closure:
//!   its inverse, its product with another relator, or a conjugate by a
//!   generator.
//!
//! General T4 (arbitrary relator sets with equal normal closure) is not
//! offered; it is not effective.

mod breakdown;

use std::fmt;

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Letter, Word};
use crate::smallcancel::Presentation;

pub use breakdown::{
    break_relators, break_relators_with, breakers, expand_word, parse_breakdown, Abbreviation,
    BreakState, BreakStrategy, BreakdownResult, Definitions, LeftmostSplit, SharedPairs,
    DEFAULT_BREAKER,
};

/// Elementary free-group automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NielsenMove {
    /// `x_i ↦ x_i^-1`.
    Invert(usize),
    /// `x_target ↦ x_target · x_by`, `by ≠ target`.
    Multiply { target: usize, by: usize },
}

/// The seven T4' replacements of relator `r_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelatorRewrite {
    /// `r_i^-1`
    Invert,
    /// `r_i · r_j`
    TimesRight(usize),
    /// `r_i · r_j^-1`
    TimesRightInverse(usize),
    /// `r_j · r_i`
    TimesLeft(usize),
    /// `r_j · r_i^-1`
    TimesLeftInverse(usize),
    /// `x_k^-1 · r_i · x_k`
    Conjugate(usize),
    /// `x_k · r_i · x_k^-1`
    ConjugateInverse(usize),
}

/// A T4' move: rewrite relator `relator` (0-based) as described.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelatorMove {
    pub relator: usize,
    pub rewrite: RelatorRewrite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TietzeMove {
    /// T1 with defining word `s`.
    AddGenerator(Word),
    /// T2 on the given generator.
    RemoveGenerator(usize),
    /// T3; moves are applied in order.
    Automorphism(Vec<NielsenMove>),
    /// T4'.
    ReplaceRelator(RelatorMove),
}

impl fmt::Display for TietzeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TietzeMove::AddGenerator(s) => write!(f, "T1 s={s}"),
            TietzeMove::RemoveGenerator(g) => write!(f, "T2 x{g}"),
            TietzeMove::Automorphism(m) => write!(f, "T3 {m:?}"),
            TietzeMove::ReplaceRelator(m) => write!(f, "T4' r{} {:?}", m.relator + 1, m.rewrite),
        }
    }
}

/// T1: appends generator `x_{m+1}` and the relator `x_{m+1} · s^-1`.
pub fn apply_t1(p: &Presentation, s: &Word) -> Result<Presentation> {
    p.alphabet().check(s)?;
    let y = p.rank() + 1;
    let alphabet = Alphabet::new(y)?;
    let mut relators = p.relators().to_vec();
    relators.push(Word::letter(Letter::pos(y)).concat(&s.inverse()));
    Presentation::new(alphabet, relators)
}

/// T2: drops `generator` and its defining relator. The generator must occur
/// in exactly one relator, exactly once; that relator is then a cyclic
/// conjugate of `y·s^-1` or its inverse with `s` free of `y`. Higher
/// generators are renumbered down by one.
pub fn apply_t2(p: &Presentation, generator: usize) -> Result<Presentation> {
    if generator == 0 || generator > p.rank() {
        return Err(Error::LetterOutOfRange {
            index: generator,
            rank: p.rank(),
        });
    }
    if p.rank() == 1 {
        return Err(Error::Tietze("cannot cancel the only generator".into()));
    }
    let occurrences: Vec<(usize, usize)> = p
        .relators()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                i,
                r.letters()
                    .iter()
                    .filter(|l| l.generator() == generator)
                    .count(),
            )
        })
        .filter(|&(_, c)| c > 0)
        .collect();
    let defining = match occurrences.as_slice() {
        [] => {
            return Err(Error::Tietze(format!("no relator defines x{generator}")));
        }
        [(i, 1)] => *i,
        [(_, _)] => {
            return Err(Error::Tietze(format!(
                "x{generator} occurs more than once in its relator"
            )));
        }
        _ => {
            return Err(Error::Tietze(format!(
                "x{generator} occurs in more than one relator"
            )));
        }
    };
    let shift = |l: Letter| {
        if l.generator() > generator {
            Word::letter(Letter::new(l.generator() - 1, l.is_inverse()))
        } else {
            Word::letter(l)
        }
    };
    let relators = p
        .relators()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != defining)
        .map(|(_, r)| r.substitute(shift))
        .collect();
    Presentation::new(Alphabet::new(p.rank() - 1)?, relators)
}

fn nielsen_image(m: NielsenMove, l: Letter) -> Word {
    match m {
        NielsenMove::Invert(g) if l.generator() == g => Word::letter(l.inverse()),
        NielsenMove::Multiply { target, by } if l.generator() == target => {
            let img = Word::from_letters([Letter::pos(target), Letter::pos(by)]);
            if l.is_inverse() {
                img.inverse()
            } else {
                img
            }
        }
        _ => Word::letter(l),
    }
}

/// T3: applies each move to every relator, then cyclically reduces.
pub fn apply_t3(p: &Presentation, moves: &[NielsenMove]) -> Result<Presentation> {
    let rank = p.rank();
    let in_range = |g: usize| g >= 1 && g <= rank;
    for m in moves {
        let ok = match *m {
            NielsenMove::Invert(g) => in_range(g),
            NielsenMove::Multiply { target, by } => {
                in_range(target) && in_range(by) && target != by
            }
        };
        if !ok {
            return Err(Error::Tietze(format!(
                "invalid elementary automorphism {m:?}"
            )));
        }
    }
    let relators = p
        .relators()
        .iter()
        .map(|r| {
            moves
                .iter()
                .fold(r.clone(), |w, &m| w.substitute(|l| nielsen_image(m, l)))
                .cyclically_reduce()
        })
        .collect();
    Presentation::new(*p.alphabet(), relators)
}

/// T4': rewrites one relator, then freely and cyclically reduces it.
pub fn apply_t4prime(p: &Presentation, mv: RelatorMove) -> Result<Presentation> {
    let rels = p.relators();
    let i = mv.relator;
    let ri = rels
        .get(i)
        .ok_or_else(|| Error::Tietze(format!("relator index {} out of range", i + 1)))?;
    let other = |j: usize| -> Result<&Word> {
        if j == i {
            return Err(Error::Tietze(
                "product rewrite needs two distinct relators".into(),
            ));
        }
        rels.get(j)
            .ok_or_else(|| Error::Tietze(format!("relator index {} out of range", j + 1)))
    };
    let generator = |k: usize| -> Result<Word> {
        if k == 0 || k > p.rank() {
            return Err(Error::LetterOutOfRange {
                index: k,
                rank: p.rank(),
            });
        }
        Ok(Word::letter(Letter::pos(k)))
    };
    let replaced = match mv.rewrite {
        RelatorRewrite::Invert => ri.inverse(),
        RelatorRewrite::TimesRight(j) => ri.concat(other(j)?),
        RelatorRewrite::TimesRightInverse(j) => ri.concat(&other(j)?.inverse()),
        RelatorRewrite::TimesLeft(j) => other(j)?.concat(ri),
        RelatorRewrite::TimesLeftInverse(j) => other(j)?.concat(&ri.inverse()),
        RelatorRewrite::Conjugate(k) => ri.conjugate(&generator(k)?),
        RelatorRewrite::ConjugateInverse(k) => ri.conjugate(&generator(k)?.inverse()),
    }
    .cyclically_reduce();
    if replaced.is_empty() {
        return Err(Error::Tietze(format!(
            "relator {} would become trivial",
            i + 1
        )));
    }
    let mut relators = rels.to_vec();
    relators[i] = replaced;
    Presentation::new(*p.alphabet(), relators)
}

pub fn apply_move(p: &Presentation, mv: &TietzeMove) -> Result<Presentation> {
    match mv {
        TietzeMove::AddGenerator(s) => apply_t1(p, s),
        TietzeMove::RemoveGenerator(g) => apply_t2(p, *g),
        TietzeMove::Automorphism(m) => apply_t3(p, m),
        TietzeMove::ReplaceRelator(m) => apply_t4prime(p, *m),
    }
}

/// Applies `moves` in order starting from `p`.
pub fn replay(p: &Presentation, moves: &[TietzeMove]) -> Result<Presentation> {
    moves
        .iter()
        .try_fold(p.clone(), |acc, m| apply_move(&acc, m))
}
