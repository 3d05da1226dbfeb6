//! Rewriting a presentation until every relator has length at most 3.
//!
//! Each step abbreviates two adjacent letters `a b` of a relator of length
//! at least 4 by a generator `g` defined through the relator `g^-1 a b`. The
//! definition is introduced with T1 and the abbreviation itself is a short
//! sequence of T4' moves, so the recorded move list replays exactly.
//!
//! Which pair to abbreviate is up to a [`BreakStrategy`]:
//!
//! * `leftmost` always splits the first two letters of the first long
//!   relator and never reuses a definition. Every relator of length `L`
//!   then costs `3L - 6` letters, more than twice its length once `L > 6`.
//! * `shared-pairs` first reuses existing definitions wherever they occur
//!   (this also covers the inverse pair `b^-1 a^-1`, abbreviated as `g^-1`)
//!   and otherwise defines the most frequent pair.

use std::collections::HashMap;
use std::fmt;

use super::{apply_move, RelatorMove, RelatorRewrite, TietzeMove};
use crate::error::{Error, Result};
use crate::freegroup::{Letter, Word};
use crate::registry::{Named, Registry};
use crate::smallcancel::{parse_presentation_lines, Presentation};

pub const DEFAULT_BREAKER: &str = "shared-pairs";

/// Relators at or below this length are left alone.
const TARGET_LENGTH: usize = 3;

/// Abbreviate letters `position` and `position + 1` of relator `relator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Abbreviation {
    pub relator: usize,
    pub position: usize,
    /// Use an existing definition of this pair if there is one.
    pub reuse: bool,
}

/// What a strategy sees when choosing the next abbreviation.
pub struct BreakState<'a> {
    relators: &'a [Word],
    pairs: &'a HashMap<(Letter, Letter), (usize, usize)>,
}

impl BreakState<'_> {
    pub fn relators(&self) -> &[Word] {
        self.relators
    }

    /// Indices of relators still longer than 3.
    pub fn long_relators(&self) -> impl Iterator<Item = usize> + '_ {
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| r.len() > TARGET_LENGTH)
            .map(|(i, _)| i)
    }

    /// Whether `a b` (or its inverse `b^-1 a^-1`) already has a generator.
    pub fn is_defined(&self, a: Letter, b: Letter) -> bool {
        self.pairs.contains_key(&(a, b)) || self.pairs.contains_key(&(b.inverse(), a.inverse()))
    }
}

pub trait BreakStrategy: Named + Send + Sync {
    /// Must return an abbreviation inside a relator longer than 3 whenever
    /// one exists.
    fn next(&self, state: &BreakState<'_>) -> Option<Abbreviation>;
}

/// Splits the two leftmost letters of the first long relator; one fresh
/// generator per split.
pub struct LeftmostSplit;

impl Named for LeftmostSplit {
    fn name(&self) -> &'static str {
        "leftmost"
    }
    fn description(&self) -> &'static str {
        "split the first two letters of the first long relator, fresh generator each time"
    }
}

impl BreakStrategy for LeftmostSplit {
    fn next(&self, state: &BreakState<'_>) -> Option<Abbreviation> {
        state.long_relators().next().map(|relator| Abbreviation {
            relator,
            position: 0,
            reuse: false,
        })
    }
}

/// Reuses definitions where possible, otherwise defines the pair that occurs
/// most often across long relators (counting a pair and its inverse
/// together).
pub struct SharedPairs;

impl Named for SharedPairs {
    fn name(&self) -> &'static str {
        "shared-pairs"
    }
    fn description(&self) -> &'static str {
        "reuse existing definitions, otherwise define the most frequent pair"
    }
}

impl BreakStrategy for SharedPairs {
    fn next(&self, state: &BreakState<'_>) -> Option<Abbreviation> {
        let rels = state.relators();
        for i in state.long_relators() {
            let l = rels[i].letters();
            if let Some(k) = (0..l.len() - 1).find(|&k| state.is_defined(l[k], l[k + 1])) {
                return Some(Abbreviation {
                    relator: i,
                    position: k,
                    reuse: true,
                });
            }
        }
        // key -> (count, first relator, first position, order of appearance)
        let mut counts: HashMap<(Letter, Letter), (usize, usize, usize, usize)> = HashMap::new();
        let mut order = 0;
        for i in state.long_relators() {
            let l = rels[i].letters();
            for k in 0..l.len() - 1 {
                let key = canonical_pair(l[k], l[k + 1]);
                let e = counts.entry(key).or_insert((0, i, k, order));
                e.0 += 1;
                order += 1;
            }
        }
        counts
            .values()
            .max_by_key(|&&(count, _, _, order)| (count, std::cmp::Reverse(order)))
            .map(|&(_, relator, position, _)| Abbreviation {
                relator,
                position,
                reuse: true,
            })
    }
}

fn canonical_pair(a: Letter, b: Letter) -> (Letter, Letter) {
    (a, b).min((b.inverse(), a.inverse()))
}

/// The built-in relator-breaking strategies.
pub fn breakers() -> Registry<dyn BreakStrategy> {
    let mut r: Registry<dyn BreakStrategy> = Registry::new("relator-breaking strategy");
    r.register(Box::new(LeftmostSplit))
        .register(Box::new(SharedPairs));
    r
}

/// Generators introduced on top of `x1..x_base`, in order. Each is defined
/// by a word over strictly earlier generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definitions {
    base_rank: usize,
    entries: Vec<(usize, Word)>,
}

impl Definitions {
    pub fn new(base_rank: usize) -> Self {
        Self {
            base_rank,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(base_rank: usize, entries: Vec<(usize, Word)>) -> Result<Self> {
        let mut d = Self::new(base_rank);
        for (g, w) in entries {
            d.push(g, w)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, generator: usize, word: Word) -> Result<()> {
        let expected = self.base_rank + self.entries.len() + 1;
        if generator != expected {
            return Err(Error::Tietze(format!(
                "definition of x{generator} out of order, expected x{expected}"
            )));
        }
        if word.max_generator() >= generator {
            return Err(Error::Tietze(format!(
                "x{generator} := {word} refers to itself or a later generator"
            )));
        }
        self.entries.push((generator, word));
        Ok(())
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn entries(&self) -> &[(usize, Word)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rewrites `w` over `x1..x_base` by substituting definitions to a
    /// fixpoint, then freely reducing.
    pub fn expand(&self, w: &Word) -> Result<Word> {
        let top = self.base_rank + self.entries.len();
        if w.max_generator() > top {
            return Err(Error::LetterOutOfRange {
                index: w.max_generator(),
                rank: top,
            });
        }
        // Definitions only look backwards, so one forward pass expands fully.
        let mut expanded: Vec<Word> = Vec::with_capacity(self.entries.len());
        for (_, def) in &self.entries {
            let e = def.substitute(|l| self.lookup(&expanded, l));
            expanded.push(e);
        }
        Ok(w.substitute(|l| self.lookup(&expanded, l)))
    }

    fn lookup(&self, expanded: &[Word], l: Letter) -> Word {
        if l.generator() <= self.base_rank {
            return Word::letter(l);
        }
        let e = &expanded[l.generator() - self.base_rank - 1];
        if l.is_inverse() {
            e.inverse()
        } else {
            e.clone()
        }
    }
}

/// See [`Definitions::expand`].
pub fn expand_word(w: &Word, definitions: &Definitions) -> Result<Word> {
    definitions.expand(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakdownResult {
    pub strategy: &'static str,
    pub input: Presentation,
    pub presentation: Presentation,
    pub definitions: Definitions,
    pub moves: Vec<TietzeMove>,
}

impl BreakdownResult {
    /// Input relator that output relator `i` was rewritten from, or `None`
    /// for a defining relator.
    pub fn source_of(&self, i: usize) -> Option<usize> {
        (i < self.input.relators().len()).then_some(i)
    }

    pub fn length_ratio(&self) -> f64 {
        let before = self.input.total_length();
        if before == 0 {
            1.0
        } else {
            self.presentation.total_length() as f64 / before as f64
        }
    }

    /// Presentation text followed by `define x<k> := <word>` lines.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BreakdownResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation)?;
        for (g, w) in self.definitions.entries() {
            writeln!(f, "define x{g} := {w}")?;
        }
        Ok(())
    }
}

/// Reads the text written by [`BreakdownResult::to_text`].
pub fn parse_breakdown(text: &str) -> Result<(Presentation, Definitions)> {
    let mut pres_lines = Vec::new();
    let mut defs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        match line.trim().strip_prefix("define ") {
            Some(rest) => {
                let (lhs, rhs) = rest
                    .split_once(":=")
                    .ok_or_else(|| Error::parse(no, "expected `define x<k> := <word>`"))?;
                let g: Letter = lhs
                    .trim()
                    .parse()
                    .map_err(|e: Error| Error::parse(no, e.to_string()))?;
                if g.is_inverse() {
                    return Err(Error::parse(no, "cannot define an inverse letter"));
                }
                let w: Word = rhs
                    .parse()
                    .map_err(|e: Error| Error::parse(no, e.to_string()))?;
                defs.push((no, g.generator(), w));
            }
            None => pres_lines.push((no, line)),
        }
    }
    let p = parse_presentation_lines(pres_lines)?;
    let base = p
        .rank()
        .checked_sub(defs.len())
        .filter(|&b| b > 0)
        .ok_or_else(|| Error::parse(1, "more definitions than generators"))?;
    let mut d = Definitions::new(base);
    for (no, g, w) in defs {
        d.push(g, w).map_err(|e| Error::parse(no, e.to_string()))?;
    }
    Ok((p, d))
}

struct Engine {
    current: Presentation,
    moves: Vec<TietzeMove>,
    definitions: Definitions,
    /// pair `a b` -> (generator, index of its defining relator `g^-1 a b`)
    pairs: HashMap<(Letter, Letter), (usize, usize)>,
}

impl Engine {
    fn push(&mut self, mv: TietzeMove) -> Result<()> {
        self.current = apply_move(&self.current, &mv)?;
        self.moves.push(mv);
        Ok(())
    }

    fn rewrite(&mut self, relator: usize, rewrite: RelatorRewrite) -> Result<()> {
        self.push(TietzeMove::ReplaceRelator(RelatorMove { relator, rewrite }))
    }

    /// Cyclic rotation by conjugating with single letters, in whichever
    /// direction needs fewer moves.
    fn rotate_left(&mut self, i: usize, k: usize) -> Result<()> {
        let len = self.current.relators()[i].len();
        let k = k % len;
        if k <= len - k {
            for _ in 0..k {
                let l = self.current.relators()[i]
                    .first()
                    .expect("nonempty relator");
                let rw = if l.is_inverse() {
                    RelatorRewrite::ConjugateInverse(l.generator())
                } else {
                    RelatorRewrite::Conjugate(l.generator())
                };
                self.rewrite(i, rw)?;
            }
        } else {
            for _ in 0..len - k {
                let l = self.current.relators()[i].last().expect("nonempty relator");
                let rw = if l.is_inverse() {
                    RelatorRewrite::Conjugate(l.generator())
                } else {
                    RelatorRewrite::ConjugateInverse(l.generator())
                };
                self.rewrite(i, rw)?;
            }
        }
        Ok(())
    }

    /// T1 for `a b`, then turn `g b^-1 a^-1` into `g^-1 a b`.
    fn define(&mut self, a: Letter, b: Letter) -> Result<(usize, usize)> {
        let s = Word::from_letters([a, b]);
        self.push(TietzeMove::AddGenerator(s.clone()))?;
        let g = self.current.rank();
        let di = self.current.relators().len() - 1;
        self.rewrite(di, RelatorRewrite::Invert)?;
        self.rotate_left(di, 2)?;
        debug_assert_eq!(
            self.current.relators()[di],
            Word::from_letters([Letter::neg(g), a, b])
        );
        self.definitions.push(g, s)?;
        self.pairs.insert((a, b), (g, di));
        Ok((g, di))
    }

    fn abbreviate(&mut self, ab: Abbreviation) -> Result<()> {
        let r = self
            .current
            .relators()
            .get(ab.relator)
            .cloned()
            .ok_or_else(|| Error::Tietze("strategy chose a missing relator".into()))?;
        if r.len() <= TARGET_LENGTH || ab.position + 1 >= r.len() {
            return Err(Error::Tietze(format!(
                "strategy chose an invalid abbreviation {ab:?} in `{r}`"
            )));
        }
        let (x, y) = (r.letters()[ab.position], r.letters()[ab.position + 1]);
        let known = if ab.reuse {
            self.pairs
                .get(&(x, y))
                .map(|&(_, di)| (di, false))
                .or_else(|| {
                    self.pairs
                        .get(&(y.inverse(), x.inverse()))
                        .map(|&(_, di)| (di, true))
                })
        } else {
            None
        };
        let (di, inverse) = match known {
            Some(k) => k,
            None => (self.define(x, y)?.1, false),
        };
        let len = r.len();
        let k = ab.position;
        let tail = len - k - 2;
        if !inverse {
            // B a b A -> A B a b -> A B g -> B g A
            self.rotate_left(ab.relator, k + 2)?;
            self.rewrite(ab.relator, RelatorRewrite::TimesRightInverse(di))?;
            self.rotate_left(ab.relator, tail)?;
        } else {
            // B b^-1 a^-1 A -> b^-1 a^-1 A B -> g^-1 A B -> B g^-1 A
            self.rotate_left(ab.relator, k)?;
            self.rewrite(ab.relator, RelatorRewrite::TimesLeft(di))?;
            self.rotate_left(ab.relator, 1 + tail)?;
        }
        debug_assert_eq!(self.current.relators()[ab.relator].len(), len - 1);
        Ok(())
    }
}

/// Breaks relators with the named strategy from [`breakers`].
pub fn break_relators(p: &Presentation) -> Result<BreakdownResult> {
    let registry = breakers();
    break_relators_with(p, registry.get(DEFAULT_BREAKER)?)
}

pub fn break_relators_with(
    p: &Presentation,
    strategy: &dyn BreakStrategy,
) -> Result<BreakdownResult> {
    let mut engine = Engine {
        current: p.clone(),
        moves: Vec::new(),
        definitions: Definitions::new(p.rank()),
        pairs: HashMap::new(),
    };
    loop {
        let choice = {
            let state = BreakState {
                relators: engine.current.relators(),
                pairs: &engine.pairs,
            };
            if state.long_relators().next().is_none() {
                break;
            }
            strategy.next(&state)
        };
        let ab = choice
            .ok_or_else(|| Error::Tietze(format!("strategy `{}` stalled", strategy.name())))?;
        engine.abbreviate(ab)?;
    }
    Ok(BreakdownResult {
        strategy: strategy.name(),
        input: p.clone(),
        presentation: engine.current,
        definitions: engine.definitions,
        moves: engine.moves,
    })
}
