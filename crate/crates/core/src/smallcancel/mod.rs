//! Small cancellation platform groups.
//!
//! A participant's long-term secret is a [`Presentation`] whose symmetrized
//! relator set satisfies `C'(1/6)`. For such presentations Dehn's algorithm
//! ([`dehn`]) decides the word problem, which is what lets a participant read
//! share bits out of public words.

mod construct;
pub mod dehn;
mod symmetrized;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Word};

pub(crate) use construct::make_nontrivial_word_with;
pub use construct::{
    make_nontrivial_word, make_trivial_word, make_trivial_word_certified, random_platform_group,
    ConjugateFactor, LongPieceFilter, PlatformParams, TrivialWord, DEFAULT_BUDGET,
};
pub use dehn::{dehn_is_trivial, DehnSolver, DehnStep, DehnTrace};
pub use symmetrized::{
    check_small_cancellation, max_piece, symmetrize, CancellationReport, PieceReport, PieceWitness,
    SymmetrizedSet,
};

/// Small cancellation parameter `λ`, kept exact.
pub type Lambda = Ratio<u64>;

/// `λ = 1/6`, the bound under which Dehn's algorithm is a decision procedure.
pub fn default_lambda() -> Lambda {
    Ratio::new(1, 6)
}

/// Parses `a/b` or an integer and checks `0 < λ < 1`.
pub fn parse_lambda(text: &str) -> Result<Lambda> {
    let lambda: Lambda = text
        .trim()
        .parse()
        .map_err(|_| Error::InvalidLambda(text.to_string()))?;
    validate_lambda(lambda)?;
    Ok(lambda)
}

pub(crate) fn validate_lambda(lambda: Lambda) -> Result<()> {
    if *lambda.numer() == 0 || lambda >= Ratio::from_integer(1) {
        return Err(Error::InvalidLambda(lambda.to_string()));
    }
    Ok(())
}

/// `⟨x1..xm | r1, r2, ...⟩` with every relator nonempty and cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.is_empty() {
                return Err(Error::EmptyRelator);
            }
            if !r.is_cyclically_reduced() {
                return Err(Error::NotCyclicallyReduced(r.to_string()));
            }
            alphabet.check(r)?;
        }
        Ok(Self { alphabet, relators })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn max_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn symmetrize(&self) -> SymmetrizedSet {
        // Relators are validated on construction, so closure cannot fail.
        symmetrize(&self.relators, &self.alphabet).expect("validated relators")
    }

    pub fn check_small_cancellation(&self, lambda: Lambda) -> Result<CancellationReport> {
        check_small_cancellation(self, lambda)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators {}", self.alphabet.rank())?;
        for r in &self.relators {
            writeln!(f, "relator {r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;

    /// Text format: a `generators <m>` line followed by `relator <word>`
    /// lines. Blank lines and lines starting with `#` are skipped.
    fn from_str(text: &str) -> Result<Self> {
        parse_presentation_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}

/// Parses the presentation block from numbered lines, stopping at the first
/// line that is neither a comment nor a `generators`/`relator` entry.
/// Returns the presentation; unknown keywords are errors.
pub(crate) fn parse_presentation_lines<'a>(
    lines: impl IntoIterator<Item = (usize, &'a str)>,
) -> Result<Presentation> {
    let mut alphabet: Option<Alphabet> = None;
    let mut relators = Vec::new();
    let mut last_line = 0;
    for (no, line) in lines {
        last_line = no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "generators" => {
                if alphabet.is_some() {
                    return Err(Error::parse(no, "duplicate `generators` line"));
                }
                let rank: usize = rest.trim().parse().map_err(|_| {
                    Error::parse(no, format!("bad generator count `{}`", rest.trim()))
                })?;
                alphabet = Some(Alphabet::new(rank).map_err(|e| Error::parse(no, e.to_string()))?);
            }
            "relator" => {
                let a =
                    alphabet.ok_or_else(|| Error::parse(no, "`relator` before `generators`"))?;
                let w = crate::freegroup::parse_word(rest, &a)
                    .map_err(|e| Error::parse(no, e.to_string()))?;
                if w.is_empty() {
                    return Err(Error::parse(no, Error::EmptyRelator.to_string()));
                }
                if !w.is_cyclically_reduced() {
                    return Err(Error::parse(
                        no,
                        Error::NotCyclicallyReduced(w.to_string()).to_string(),
                    ));
                }
                relators.push(w);
            }
            other => return Err(Error::parse(no, format!("unexpected keyword `{other}`"))),
        }
    }
    let alphabet =
        alphabet.ok_or_else(|| Error::parse(last_line.max(1), "missing `generators` line"))?;
    Presentation::new(alphabet, relators)
}
