//! Dealing and recovering secrets through word columns.
//!
//! A share is a column of bits; participant `j` receives it as a column of
//! words, where an entry is trivial in `j`'s private platform group exactly
//! when the bit is 1. Only the holder of the presentation can run Dehn's
//! algorithm to read the bits back.
//!
//! Two schemes sit on top: the `(n,n)` scheme XOR-splits a bit column, and
//! the `(t,n)` scheme writes Shamir shares `f(j)` in binary.

mod bundle;
mod column;
mod strategy;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{make_shares, random_polynomial, Polynomial, PrimeModulus, SharePoint};
use crate::freegroup::Word;
use crate::smallcancel::{
    make_nontrivial_word_with, make_trivial_word, random_platform_group, DehnSolver,
    LongPieceFilter, PlatformParams, Presentation,
};

pub use bundle::{format_bundle, parse_bundle};
pub use column::{column_to_int, int_to_column, BitColumn};
pub use strategy::{
    schemes, DealRequest, NnScheme, Secret, SharingScheme, TnScheme, DEFAULT_SCHEME,
};

/// How trivial words are assembled: `factor_count` conjugated relators with
/// conjugators of `conj_length` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordParams {
    pub factor_count: usize,
    pub conj_length: usize,
}

impl Default for WordParams {
    fn default() -> Self {
        Self {
            factor_count: 3,
            conj_length: 5,
        }
    }
}

/// A share column as words; `participant` is 1-based and names the group
/// that decodes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordColumn {
    pub participant: usize,
    pub words: Vec<Word>,
}

impl WordColumn {
    pub fn width(&self) -> usize {
        self.words.len()
    }
}

/// Public parameters of a dealing session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub mode: &'static str,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub p: Option<PrimeModulus>,
    pub platform: PlatformParams,
    pub words: WordParams,
}

impl SessionConfig {
    /// `(n,n)` scheme over `k`-bit secrets.
    pub fn nn(n: usize, k: usize) -> Result<Self> {
        let cfg = Self {
            mode: "nn",
            n,
            t: n,
            k,
            p: None,
            platform: PlatformParams::default(),
            words: WordParams::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `(t,n)` scheme over Z_p; the width is the bit length of `p`.
    pub fn tn(n: usize, t: usize, p: PrimeModulus) -> Result<Self> {
        let cfg = Self {
            mode: "tn",
            n,
            t,
            k: p.bit_length(),
            p: Some(p),
            platform: PlatformParams::default(),
            words: WordParams::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_platform(mut self, platform: PlatformParams) -> Result<Self> {
        platform.validate()?;
        self.platform = platform;
        Ok(self)
    }

    pub fn with_words(mut self, words: WordParams) -> Self {
        self.words = words;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("column width must be at least 1"));
        }
        match self.p {
            None => {
                if self.n < 2 {
                    return Err(Error::invalid(format!(
                        "the (n,n) scheme needs n >= 2, got {}",
                        self.n
                    )));
                }
                if self.t != self.n {
                    return Err(Error::invalid("the (n,n) scheme has t = n"));
                }
            }
            Some(p) => {
                if self.t == 0 || self.t > self.n {
                    return Err(Error::invalid(format!(
                        "threshold must satisfy 1 <= t <= n, got t={} n={}",
                        self.t, self.n
                    )));
                }
                if self.n as u64 >= p.value() {
                    return Err(Error::invalid(format!(
                        "participant count {} must be below the modulus {p}",
                        self.n
                    )));
                }
                if self.k < p.bit_length() {
                    return Err(Error::invalid(format!(
                        "width {} cannot hold residues mod {p}",
                        self.k
                    )));
                }
            }
        }
        self.platform.validate()
    }

    /// One independently sampled platform group per participant.
    pub fn sample_groups<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Presentation>> {
        (0..self.n)
            .map(|_| random_platform_group(&self.platform, rng))
            .collect()
    }
}

/// Encoder and decoder for one platform group, with the symmetrized set,
/// Dehn trie and forbidden-subword table built once.
#[derive(Debug, Clone)]
pub struct GroupCodec {
    presentation: Presentation,
    solver: DehnSolver,
    filter: LongPieceFilter,
}

impl GroupCodec {
    pub fn new(presentation: &Presentation) -> Self {
        let s = presentation.symmetrize();
        Self {
            presentation: presentation.clone(),
            solver: DehnSolver::from_symmetrized(&s),
            filter: LongPieceFilter::new(&s),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Bit 1 becomes a product of conjugated relators. Bit 0 becomes a word
    /// avoiding every long relator fragment, whose length is copied from a
    /// freshly drawn trivial word so both bit values share one length
    /// distribution.
    pub fn encode<R: Rng + ?Sized>(
        &self,
        share: &BitColumn,
        participant: usize,
        params: WordParams,
        rng: &mut R,
    ) -> Result<WordColumn> {
        let p = &self.presentation;
        let words = share
            .bits()
            .iter()
            .map(|&bit| {
                let trivial = make_trivial_word(p, params.factor_count, params.conj_length, rng)?;
                if bit {
                    Ok(trivial)
                } else {
                    make_nontrivial_word_with(&self.filter, p.alphabet(), trivial.len(), rng)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WordColumn { participant, words })
    }

    pub fn decode(&self, wc: &WordColumn) -> Result<BitColumn> {
        wc.words
            .iter()
            .map(|w| self.solver.is_trivial(w))
            .collect::<Result<Vec<_>>>()
            .map(BitColumn::new)
    }
}

/// XOR-splits `c` into `n` columns: `n - 1` uniform, the last the correction.
pub fn split_secret<R: Rng + ?Sized>(
    c: &BitColumn,
    n: usize,
    rng: &mut R,
) -> Result<Vec<BitColumn>> {
    if n < 2 {
        return Err(Error::invalid(format!("splitting needs n >= 2, got {n}")));
    }
    let mut shares: Vec<BitColumn> = (1..n).map(|_| BitColumn::random(c.width(), rng)).collect();
    let last = shares.iter().fold(c.clone(), |acc, s| &acc ^ s);
    shares.push(last);
    Ok(shares)
}

/// Entrywise XOR of all `n` columns.
pub fn recover_secret_nn(columns: &[BitColumn]) -> Result<BitColumn> {
    if columns.len() < 2 {
        return Err(Error::InsufficientShares {
            needed: 2,
            got: columns.len(),
        });
    }
    columns[1..]
        .iter()
        .try_fold(columns[0].clone(), |acc, c| acc.xor(c))
}

pub fn encode_column<R: Rng + ?Sized>(
    share: &BitColumn,
    participant: usize,
    g: &Presentation,
    params: WordParams,
    rng: &mut R,
) -> Result<WordColumn> {
    GroupCodec::new(g).encode(share, participant, params, rng)
}

/// Bit `i` is 1 iff word `i` is trivial in `g`.
pub fn decode_column(wc: &WordColumn, g: &Presentation) -> Result<BitColumn> {
    GroupCodec::new(g).decode(wc)
}

fn check_groups(cfg: &SessionConfig, groups: &[Presentation]) -> Result<()> {
    if groups.len() != cfg.n {
        return Err(Error::invalid(format!(
            "expected {} platform groups, got {}",
            cfg.n,
            groups.len()
        )));
    }
    Ok(())
}

/// Splits a `k`-bit secret and encodes share `j` in `groups[j]`.
pub fn deal_nn<R: Rng + ?Sized>(
    secret: &BitColumn,
    cfg: &SessionConfig,
    groups: &[Presentation],
    rng: &mut R,
) -> Result<Vec<WordColumn>> {
    check_groups(cfg, groups)?;
    if secret.width() != cfg.k {
        return Err(Error::WidthMismatch {
            expected: cfg.k,
            got: secret.width(),
        });
    }
    let shares = split_secret(secret, cfg.n, rng)?;
    shares
        .iter()
        .zip(groups)
        .enumerate()
        .map(|(j, (s, g))| encode_column(s, j + 1, g, cfg.words, rng))
        .collect()
}

fn modulus(cfg: &SessionConfig) -> Result<PrimeModulus> {
    cfg.p
        .ok_or_else(|| Error::invalid("the (t,n) scheme needs a prime modulus"))
}

/// Samples `f` with `f(0) = x` and encodes `f(j)` for participant `j`.
pub fn deal_tn<R: Rng + ?Sized>(
    x: u64,
    cfg: &SessionConfig,
    groups: &[Presentation],
    rng: &mut R,
) -> Result<Vec<WordColumn>> {
    let p = modulus(cfg)?;
    let f = random_polynomial(x, cfg.t, p, rng)?;
    deal_polynomial(&f, cfg, groups, rng)
}

/// Encodes the shares of a given polynomial.
pub fn deal_polynomial<R: Rng + ?Sized>(
    f: &Polynomial,
    cfg: &SessionConfig,
    groups: &[Presentation],
    rng: &mut R,
) -> Result<Vec<WordColumn>> {
    cfg.validate()?;
    check_groups(cfg, groups)?;
    let p = modulus(cfg)?;
    make_shares(f, cfg.n, p)?
        .iter()
        .zip(groups)
        .map(|(s, g)| {
            let col = int_to_column(s.value, cfg.k)?;
            encode_column(&col, s.index as usize, g, cfg.words, rng)
        })
        .collect()
}

/// Decodes a column and reads it as the share `(participant, y)`.
pub fn recover_share(wc: &WordColumn, g: &Presentation, p: PrimeModulus) -> Result<SharePoint> {
    let value = column_to_int(&decode_column(wc, g)?)?;
    SharePoint::new(wc.participant as u64, value, p)
}
