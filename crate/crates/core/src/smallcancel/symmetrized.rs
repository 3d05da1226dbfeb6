use std::collections::BTreeSet;

use num_rational::Ratio;

use super::{validate_lambda, Lambda, Presentation};
use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Word};

/// Relators closed under inversion and cyclic permutation, sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedSet {
    alphabet: Alphabet,
    members: Vec<Word>,
}

/// The closure of the cyclically reduced forms of `relators`.
pub fn symmetrize(relators: &[Word], alphabet: &Alphabet) -> Result<SymmetrizedSet> {
    let mut members = BTreeSet::new();
    for r in relators {
        alphabet.check(r)?;
        let core = r.cyclically_reduce();
        if core.is_empty() {
            return Err(Error::EmptyRelator);
        }
        for rot in core.cyclic_permutations()? {
            members.insert(rot.inverse());
            members.insert(rot);
        }
    }
    Ok(SymmetrizedSet {
        alphabet: *alphabet,
        members: members.into_iter().collect(),
    })
}

impl SymmetrizedSet {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Members in lexicographic letter order.
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    /// Re-closes the members and compares.
    pub fn is_closed(&self) -> bool {
        self.members.iter().all(Word::is_cyclically_reduced)
            && symmetrize(&self.members, &self.alphabet).is_ok_and(|s| s == *self)
    }

    /// For each member, the longest piece that is an initial segment of it.
    ///
    /// In sorted order the longest common prefix of a member with any other
    /// member is attained at one of its neighbours.
    fn longest_piece_per_member(&self) -> Vec<(usize, Option<usize>)> {
        let m = &self.members;
        (0..m.len())
            .map(|i| {
                let mut best = (0, None);
                for j in [i.checked_sub(1), Some(i + 1)].into_iter().flatten() {
                    if j < m.len() {
                        let l = common_prefix_len(&m[i], &m[j]);
                        if l > best.0 {
                            best = (l, Some(j));
                        }
                    }
                }
                best
            })
            .collect()
    }
}

pub(crate) fn common_prefix_len(a: &Word, b: &Word) -> usize {
    a.letters()
        .iter()
        .zip(b.letters())
        .take_while(|(x, y)| x == y)
        .count()
}

/// A piece together with two distinct members it is an initial segment of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceWitness {
    pub piece: Word,
    pub relator: Word,
    pub other: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    pub length: usize,
    pub witness: Option<PieceWitness>,
}

/// Longest common initial segment of two distinct members.
pub fn max_piece(s: &SymmetrizedSet) -> PieceReport {
    let per = s.longest_piece_per_member();
    let best = per
        .iter()
        .enumerate()
        .filter_map(|(i, &(len, j))| j.map(|j| (len, i, j)))
        .max_by_key(|&(len, i, _)| (len, std::cmp::Reverse(i)));
    match best {
        Some((len, i, j)) => PieceReport {
            length: len,
            witness: Some(PieceWitness {
                piece: s.members[i].subword(0, len),
                relator: s.members[i].clone(),
                other: s.members[j].clone(),
            }),
        },
        None => PieceReport {
            length: 0,
            witness: None,
        },
    }
}

/// Outcome of testing `C'(λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationReport {
    pub lambda: Lambda,
    /// Max over members `r` and pieces `w` prefixing `r` of `|w| / |r|`.
    pub max_piece_ratio: Ratio<u64>,
    pub witness: Option<PieceWitness>,
    pub satisfied: bool,
}

pub fn check_small_cancellation(p: &Presentation, lambda: Lambda) -> Result<CancellationReport> {
    validate_lambda(lambda)?;
    let s = p.symmetrize();
    let per = s.longest_piece_per_member();
    let mut max_ratio = Ratio::from_integer(0u64);
    let mut witness = None;
    for (i, &(len, j)) in per.iter().enumerate() {
        let Some(j) = j else { continue };
        let ratio = Ratio::new(len as u64, s.members[i].len() as u64);
        if ratio > max_ratio {
            max_ratio = ratio;
            witness = Some(PieceWitness {
                piece: s.members[i].subword(0, len),
                relator: s.members[i].clone(),
                other: s.members[j].clone(),
            });
        }
    }
    Ok(CancellationReport {
        lambda,
        max_piece_ratio: max_ratio,
        witness,
        satisfied: max_ratio < lambda,
    })
}
