//! Elements of finitely generated free groups.
//!
//! A [`Word`] is a freely reduced sequence of signed generator letters. Words
//! do not carry their alphabet: a word belongs to the free group of rank `m`
//! when every generator index it mentions is at most `m`, which lets Tietze
//! moves grow the alphabet without rewriting existing words. Range checks
//! happen against an explicit [`Alphabet`] wherever words enter a
//! presentation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// The public generating set `x1..xm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("alphabet rank must be at least 1"));
        }
        Ok(Self { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.generator() <= self.rank
    }

    /// All `2m` letters, `x1, x1^-1, x2, ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (1..=self.rank).flat_map(|g| [Letter::pos(g), Letter::neg(g)])
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.letters.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::LetterOutOfRange {
                index: l.generator(),
                rank: self.rank,
            }),
            None => Ok(()),
        }
    }
}

/// A generator `x_i` or its inverse. Stored as a nonzero signed index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator >= 1, "generator indices start at 1");
        let g = i32::try_from(generator).expect("generator index overflows i32");
        Letter(if inverse { -g } else { g })
    }

    pub fn pos(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
    pub fn exponent(self) -> i64 {
        self.0.signum() as i64
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.0 == -other.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let malformed = || Error::MalformedToken(token.to_string());
        let body = token.strip_prefix('x').ok_or_else(malformed)?;
        let (digits, inverse) = match body.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (body, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let generator: usize = digits.parse().map_err(|_| malformed())?;
        if generator == 0 || generator > i32::MAX as usize {
            return Err(malformed());
        }
        Ok(Letter::new(generator, inverse))
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            push_reduced(&mut letters, l);
        }
        Self { letters }
    }

    pub fn letter(l: Letter) -> Self {
        Self { letters: vec![l] }
    }

    /// `x_g^k`.
    pub fn power(generator: usize, k: i64) -> Self {
        let l = Letter::new(generator, k < 0);
        Self {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index mentioned, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator())
            .max()
            .unwrap_or(0)
    }

    pub fn mentions(&self, generator: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == generator)
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == generator)
            .map(|l| l.exponent())
            .sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Group product `self · other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Self { letters }
    }

    /// `h^-1 · self · h`.
    pub fn conjugate(&self, h: &Word) -> Self {
        h.inverse().concat(self).concat(h)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    /// Strips matching letter/inverse pairs from the two ends. The result is a
    /// conjugate of `self`.
    pub fn cyclically_reduce(&self) -> Self {
        let (start, end) = self.cyclic_core();
        Self {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator^-1 · core · conjugator`.
    pub fn cyclically_reduce_with_conjugator(&self) -> (Self, Self) {
        let (start, end) = self.cyclic_core();
        let core = Self {
            letters: self.letters[start..end].to_vec(),
        };
        let conjugator = Self {
            letters: self.letters[end..].to_vec(),
        };
        (core, conjugator)
    }

    fn cyclic_core(&self) -> (usize, usize) {
        let (mut start, mut end) = (0, self.len());
        while end - start >= 2 && self.letters[start].cancels(self.letters[end - 1]) {
            start += 1;
            end -= 1;
        }
        (start, end)
    }

    /// Rotation moving the first `k` letters to the end (no reduction).
    pub fn rotate_left(&self, k: usize) -> Self {
        if self.is_empty() {
            return Self::identity();
        }
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.len());
        Self { letters }
    }

    /// All distinct rotations of a cyclically reduced word, in rotation order.
    pub fn cyclic_permutations(&self) -> Result<Vec<Word>> {
        if !self.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(self.to_string()));
        }
        if self.is_empty() {
            return Ok(vec![Self::identity()]);
        }
        // The rotations repeat with period equal to the smallest rotation
        // fixing the word.
        let n = self.len();
        let period = (1..=n)
            .find(|&d| n.is_multiple_of(d) && self.letters[d..] == self.letters[..n - d])
            .unwrap_or(n);
        Ok((0..period).map(|k| self.rotate_left(k)).collect())
    }

    /// Replaces every letter by a word and reduces.
    pub fn substitute(&self, mut image: impl FnMut(Letter) -> Word) -> Self {
        let mut letters = Vec::with_capacity(self.len());
        for &l in &self.letters {
            for m in image(l).letters {
                push_reduced(&mut letters, m);
            }
        }
        Self { letters }
    }

    /// Subword `[start, end)`; subwords of reduced words are reduced.
    pub fn subword(&self, start: usize, end: usize) -> Self {
        Self {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Uniform over reduced words of exactly `length` letters: the first
    /// letter is uniform over `2m` choices, each later one over the `2m - 1`
    /// letters that do not cancel its predecessor.
    pub fn random_reduced<R: Rng + ?Sized>(
        length: usize,
        alphabet: &Alphabet,
        rng: &mut R,
    ) -> Self {
        let m = alphabet.rank();
        let mut letters: Vec<Letter> = Vec::with_capacity(length);
        for i in 0..length {
            let l = if i == 0 {
                letter_from_index(rng.gen_range(0..2 * m))
            } else {
                if m == 1 {
                    letters.push(letters[i - 1]);
                    continue;
                }
                let forbidden = letters[i - 1].inverse();
                let idx = rng.gen_range(0..2 * m - 1);
                let mut l = letter_from_index(idx);
                if l == forbidden {
                    l = letter_from_index(2 * m - 1);
                }
                l
            };
            letters.push(l);
        }
        Self { letters }
    }

    /// Uniform over cyclically reduced words of exactly `length` letters, by
    /// rejection from [`Word::random_reduced`].
    pub fn random_cyclically_reduced<R: Rng + ?Sized>(
        length: usize,
        alphabet: &Alphabet,
        rng: &mut R,
    ) -> Self {
        loop {
            let w = Self::random_reduced(length, alphabet, rng);
            if w.is_cyclically_reduced() {
                return w;
            }
        }
    }
}

fn letter_from_index(idx: usize) -> Letter {
    Letter::new(idx / 2 + 1, idx % 2 == 1)
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last().is_some_and(|last| last.cancels(l)) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

/// Freely reduces `raw`, rejecting letters outside `alphabet`.
pub fn reduce(raw: &[Letter], alphabet: &Alphabet) -> Result<Word> {
    if let Some(l) = raw.iter().find(|l| !alphabet.contains(**l)) {
        return Err(Error::LetterOutOfRange {
            index: l.generator(),
            rank: alphabet.rank(),
        });
    }
    Ok(Word::from_letters(raw.iter().copied()))
}

/// Parses whitespace-separated `x<i>` / `x<i>^-1` tokens, reducing the result
/// and checking indices against `alphabet`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let w: Word = text.parse()?;
    alphabet.check(&w)?;
    Ok(w)
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Letter>>>()?;
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}
