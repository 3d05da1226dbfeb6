//! Dehn's algorithm for the word problem in `C'(1/6)` presentations.
//!
//! The current word is scanned for a subword `u` such that some member `r`
//! of the symmetrized relator set factors as `r = u·v` with `|u| > |r|/2`.
//! Such a `u` is replaced by the strictly shorter `v^-1` and the word is
//! freely reduced again. The word is trivial iff this ends at the identity.
//!
//! Scanning order is fixed: the leftmost starting position wins, then the
//! longest match there, then the shortest relator. Traces are therefore a
//! deterministic function of the presentation and the word.

use super::{Presentation, SymmetrizedSet};
use crate::error::Result;
use crate::freegroup::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnStep {
    /// Start of `replaced` in the word before this step.
    pub position: usize,
    pub replaced: Word,
    pub replacement: Word,
    /// The symmetrized relator `replaced · replacement^-1`.
    pub relator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnTrace {
    pub initial_length: usize,
    pub steps: Vec<DehnStep>,
    pub final_word: Word,
    pub is_trivial: bool,
}

#[derive(Debug, Clone)]
struct Node {
    children: Vec<(Letter, u32)>,
    /// Shortest member passing through this node.
    shortest: Option<u32>,
}

impl Node {
    fn child(&self, l: Letter) -> Option<u32> {
        self.children.iter().find(|(c, _)| *c == l).map(|(_, n)| *n)
    }
}

/// Prefix trie over a symmetrized set, reusable across many words.
#[derive(Debug, Clone)]
pub struct DehnSolver {
    alphabet: Alphabet,
    members: Vec<Word>,
    nodes: Vec<Node>,
    max_len: usize,
}

struct Match {
    start: usize,
    len: usize,
    member: usize,
}

impl DehnSolver {
    pub fn new(p: &Presentation) -> Self {
        Self::from_symmetrized(&p.symmetrize())
    }

    pub fn from_symmetrized(s: &SymmetrizedSet) -> Self {
        let members = s.members().to_vec();
        let mut nodes = vec![Node {
            children: Vec::new(),
            shortest: None,
        }];
        for (idx, m) in members.iter().enumerate() {
            let mut cur = 0usize;
            for &l in m.letters() {
                let next = match nodes[cur].child(l) {
                    Some(n) => n as usize,
                    None => {
                        nodes.push(Node {
                            children: Vec::new(),
                            shortest: None,
                        });
                        let n = nodes.len() - 1;
                        nodes[cur].children.push((l, n as u32));
                        n
                    }
                };
                cur = next;
                let better = match nodes[cur].shortest {
                    Some(prev) => m.len() < members[prev as usize].len(),
                    None => true,
                };
                if better {
                    nodes[cur].shortest = Some(idx as u32);
                }
            }
        }
        let max_len = members.iter().map(Word::len).max().unwrap_or(0);
        Self {
            alphabet: *s.alphabet(),
            members,
            nodes,
            max_len,
        }
    }

    /// Longest match starting at `start`: a prefix of some member longer than
    /// half of that member.
    fn match_at(&self, letters: &[Letter], start: usize) -> Option<Match> {
        let mut cur = 0usize;
        let mut best = None;
        for (depth, &l) in letters[start..].iter().enumerate() {
            let Some(next) = self.nodes[cur].child(l) else {
                break;
            };
            cur = next as usize;
            let d = depth + 1;
            if let Some(m) = self.nodes[cur].shortest {
                if 2 * d > self.members[m as usize].len() {
                    best = Some(Match {
                        start,
                        len: d,
                        member: m as usize,
                    });
                }
            }
        }
        best
    }

    fn find_from(&self, letters: &[Letter], from: usize) -> Option<Match> {
        (from..letters.len()).find_map(|i| self.match_at(letters, i))
    }

    /// Whether `w` contains more than half of some symmetrized relator as a
    /// subword, i.e. whether Dehn's algorithm can take a step.
    pub fn has_long_piece(&self, w: &Word) -> bool {
        self.find_from(w.letters(), 0).is_some()
    }

    pub fn run(&self, w: &Word) -> Result<DehnTrace> {
        self.alphabet.check(w)?;
        let initial_length = w.len();
        let mut letters = w.letters().to_vec();
        let mut steps = Vec::new();
        let mut from = 0;
        while let Some(m) = self.find_from(&letters, from) {
            let relator = &self.members[m.member];
            let replaced = relator.subword(0, m.len);
            let replacement = relator.subword(m.len, relator.len()).inverse();

            let mut out: Vec<Letter> = letters[..m.start].to_vec();
            let mut touched = out.len();
            for &l in replacement
                .letters()
                .iter()
                .chain(&letters[m.start + m.len..])
            {
                if out.last().is_some_and(|last| last.cancels(l)) {
                    out.pop();
                    touched = touched.min(out.len());
                } else {
                    out.push(l);
                }
            }
            debug_assert!(out.len() < letters.len());
            steps.push(DehnStep {
                position: m.start,
                replaced,
                replacement,
                relator: relator.clone(),
            });
            letters = out;
            // No match can start before this point: it would lie entirely in
            // the untouched prefix, which was already scanned.
            from = (touched + 1).saturating_sub(self.max_len);
        }
        let final_word = Word::from_letters(letters);
        Ok(DehnTrace {
            initial_length,
            steps,
            is_trivial: final_word.is_empty(),
            final_word,
        })
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.run(w)?.is_trivial)
    }
}

/// Runs Dehn's algorithm for `w` in `p`. Meaningful as a decision procedure
/// when `p` satisfies `C'(1/6)`.
pub fn dehn_is_trivial(p: &Presentation, w: &Word) -> Result<DehnTrace> {
    DehnSolver::new(p).run(w)
}
