use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{default_lambda, validate_lambda, Lambda, Presentation, SymmetrizedSet};
use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Letter, Word};

/// Rejection-sampling and resampling budget used when none is given.
pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlatformParams {
    pub rank: usize,
    pub relator_count: usize,
    pub relator_length: usize,
    pub lambda: Lambda,
    pub max_attempts: usize,
}

impl Default for PlatformParams {
    fn default() -> Self {
        Self {
            rank: 3,
            relator_count: 3,
            relator_length: 40,
            lambda: default_lambda(),
            max_attempts: DEFAULT_BUDGET,
        }
    }
}

impl PlatformParams {
    pub fn validate(&self) -> Result<()> {
        if self.relator_length <= 6 {
            return Err(Error::invalid(format!(
                "relator length must exceed 6, got {}",
                self.relator_length
            )));
        }
        if self.rank == 0 || self.relator_count == 0 || self.max_attempts == 0 {
            return Err(Error::invalid(
                "rank, relator count and attempt budget must be positive",
            ));
        }
        validate_lambda(self.lambda)
    }
}

/// Samples `relator_count` cyclically reduced words of the given length and
/// keeps the first draw whose symmetrized set satisfies `C'(λ)`.
///
/// Draws in which two relators are cyclic permutations of each other (or of
/// each other's inverse) are rejected as well, since they name the same
/// relation twice.
pub fn random_platform_group<R: Rng + ?Sized>(
    params: &PlatformParams,
    rng: &mut R,
) -> Result<Presentation> {
    params.validate()?;
    let alphabet = Alphabet::new(params.rank)?;
    for _ in 0..params.max_attempts {
        let relators: Vec<Word> = (0..params.relator_count)
            .map(|_| Word::random_cyclically_reduced(params.relator_length, &alphabet, rng))
            .collect();
        if !pairwise_inequivalent(&relators) {
            continue;
        }
        let p = Presentation::new(alphabet, relators)?;
        if p.check_small_cancellation(params.lambda)?.satisfied {
            return Ok(p);
        }
    }
    Err(Error::BudgetExhausted {
        what: "platform group sampling",
        attempts: params.max_attempts,
    })
}

fn pairwise_inequivalent(relators: &[Word]) -> bool {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    for r in relators {
        // Canonical representative of the symmetrized class.
        let rots = r.cyclic_permutations().expect("sampled cyclically reduced");
        let canon = rots
            .iter()
            .flat_map(|w| [w.clone(), w.inverse()])
            .min()
            .expect("nonempty");
        if !seen.insert(canon) {
            return false;
        }
    }
    true
}

/// One factor `h^-1 · r^{±1} · h` of a trivial word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateFactor {
    /// Index into the presentation's relators.
    pub relator: usize,
    pub inverted: bool,
    pub conjugator: Word,
}

impl ConjugateFactor {
    /// Evaluates the factor against a relator list.
    pub fn evaluate(&self, relators: &[Word]) -> Word {
        let r = &relators[self.relator];
        let r = if self.inverted {
            r.inverse()
        } else {
            r.clone()
        };
        r.conjugate(&self.conjugator)
    }
}

/// A word in the normal closure of the relators, with the product of
/// conjugates that certifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialWord {
    pub word: Word,
    pub factors: Vec<ConjugateFactor>,
}

impl TrivialWord {
    /// Recomputes the product of the certificate's factors.
    pub fn replay(&self, relators: &[Word]) -> Word {
        self.factors
            .iter()
            .fold(Word::identity(), |acc, f| acc.concat(&f.evaluate(relators)))
    }
}

/// `reduce(Π_k h_k^-1 r_{i_k}^{±1} h_k)` for random relators, signs and
/// conjugators of length `conj_length`, resampled if it collapses to the
/// identity.
pub fn make_trivial_word<R: Rng + ?Sized>(
    p: &Presentation,
    factor_count: usize,
    conj_length: usize,
    rng: &mut R,
) -> Result<Word> {
    make_trivial_word_certified(p, factor_count, conj_length, rng).map(|t| t.word)
}

pub fn make_trivial_word_certified<R: Rng + ?Sized>(
    p: &Presentation,
    factor_count: usize,
    conj_length: usize,
    rng: &mut R,
) -> Result<TrivialWord> {
    if factor_count == 0 {
        return Err(Error::invalid("factor count must be at least 1"));
    }
    if p.relators().is_empty() {
        return Err(Error::invalid("presentation has no relators"));
    }
    for _ in 0..DEFAULT_BUDGET {
        let factors: Vec<ConjugateFactor> = (0..factor_count)
            .map(|_| ConjugateFactor {
                relator: rng.gen_range(0..p.relators().len()),
                inverted: rng.gen(),
                conjugator: Word::random_reduced(conj_length, p.alphabet(), rng),
            })
            .collect();
        let t = TrivialWord {
            word: Word::identity(),
            factors,
        };
        let word = t.replay(p.relators());
        if !word.is_empty() {
            return Ok(TrivialWord { word, ..t });
        }
    }
    Err(Error::BudgetExhausted {
        what: "trivial word construction",
        attempts: DEFAULT_BUDGET,
    })
}

/// The minimal forbidden subwords: for each symmetrized relator `r`, its
/// prefix of length `⌊|r|/2⌋ + 1`. A word avoids every subword that is more
/// than half of a relator iff it avoids all of these.
#[derive(Debug, Clone)]
pub struct LongPieceFilter {
    forbidden: HashSet<Vec<Letter>>,
    lengths: Vec<usize>,
}

impl LongPieceFilter {
    pub fn new(s: &SymmetrizedSet) -> Self {
        let forbidden: HashSet<Vec<Letter>> = s
            .members()
            .iter()
            .map(|r| r.letters()[..r.len() / 2 + 1].to_vec())
            .collect();
        let lengths: BTreeSet<usize> = forbidden.iter().map(Vec::len).collect();
        Self {
            forbidden,
            lengths: lengths.into_iter().collect(),
        }
    }

    /// Whether some forbidden subword ends at the last letter of `letters`.
    pub fn ends_with_forbidden(&self, letters: &[Letter]) -> bool {
        self.lengths
            .iter()
            .take_while(|&&l| l <= letters.len())
            .any(|&l| self.forbidden.contains(&letters[letters.len() - l..]))
    }

    pub fn admits(&self, w: &Word) -> bool {
        (1..=w.len()).all(|end| !self.ends_with_forbidden(&w.letters()[..end]))
    }
}

/// A reduced word of exactly `target_length` letters containing no subword
/// that is more than half of a symmetrized relator. In a `C'(1/6)` group such
/// a nonempty word is not the identity, and Dehn's algorithm leaves it as is.
///
/// Built by random extension; a dead end backtracks one letter.
pub fn make_nontrivial_word<R: Rng + ?Sized>(
    p: &Presentation,
    target_length: usize,
    rng: &mut R,
) -> Result<Word> {
    let filter = LongPieceFilter::new(&p.symmetrize());
    make_nontrivial_word_with(&filter, p.alphabet(), target_length, rng)
}

pub(crate) fn make_nontrivial_word_with<R: Rng + ?Sized>(
    filter: &LongPieceFilter,
    alphabet: &Alphabet,
    target_length: usize,
    rng: &mut R,
) -> Result<Word> {
    if target_length == 0 {
        return Err(Error::invalid("target length must be at least 1"));
    }
    let all: Vec<Letter> = alphabet.letters().collect();
    let mut letters: Vec<Letter> = Vec::with_capacity(target_length);
    // Candidate letters not yet tried at each depth.
    let mut pending: Vec<Vec<Letter>> = Vec::with_capacity(target_length);
    let mut backtracks = 0;
    loop {
        if letters.len() == target_length {
            return Ok(Word::from_letters(letters));
        }
        if pending.len() == letters.len() {
            let mut c = all.clone();
            c.shuffle(rng);
            pending.push(c);
        }
        let depth = letters.len();
        let mut placed = false;
        while let Some(l) = pending[depth].pop() {
            if letters.last().is_some_and(|last| last.cancels(l)) {
                continue;
            }
            letters.push(l);
            if filter.ends_with_forbidden(&letters) {
                letters.pop();
                continue;
            }
            placed = true;
            break;
        }
        if !placed {
            pending.pop();
            if letters.pop().is_none() || backtracks >= DEFAULT_BUDGET {
                return Err(Error::BudgetExhausted {
                    what: "nontrivial word construction",
                    attempts: backtracks,
                });
            }
            backtracks += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallcancel::{dehn_is_trivial, DehnSolver};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyclic(q: i64) -> Presentation {
        Presentation::new(Alphabet::new(1).unwrap(), vec![Word::power(1, q)]).unwrap()
    }

    #[test]
    fn platform_group_satisfies_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_platform_group(&PlatformParams::default(), &mut rng).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.relators().len(), 3);
        assert!(p
            .relators()
            .iter()
            .all(|r| r.len() == 40 && r.is_cyclically_reduced()));
        assert!(
            p.check_small_cancellation(default_lambda())
                .unwrap()
                .satisfied
        );
    }

    #[test]
    fn rank_one_with_two_relators_exhausts_budget() {
        // Over one generator every cyclically reduced word of length 8 is
        // x1^8 or x1^-8, so two inequivalent relators never exist.
        let params = PlatformParams {
            rank: 1,
            relator_count: 2,
            relator_length: 8,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = random_platform_group(&params, &mut rng).unwrap_err();
        assert!(err.is_budget_exhausted());
    }

    #[test]
    fn short_relators_are_rejected_up_front() {
        let params = PlatformParams {
            relator_length: 6,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_platform_group(&params, &mut rng),
            Err(Error::InvalidParameter(_))
        ));
        let params = PlatformParams {
            max_attempts: 0,
            ..Default::default()
        };
        assert!(random_platform_group(&params, &mut rng).is_err());
    }

    #[test]
    fn trivial_word_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_platform_group(&PlatformParams::default(), &mut rng).unwrap();
        let s = p.symmetrize();
        for _ in 0..20 {
            let bare = make_trivial_word(&p, 1, 0, &mut rng).unwrap();
            assert!(p
                .relators()
                .iter()
                .any(|r| *r == bare || r.inverse() == bare));
            assert!(s.contains(&bare));

            let conj = make_trivial_word(&p, 1, 2, &mut rng).unwrap();
            assert!(conj.len() <= 40 + 4);

            let t = make_trivial_word_certified(&p, 3, 5, &mut rng).unwrap();
            assert_eq!(t.replay(p.relators()), t.word);
            assert!(dehn_is_trivial(&p, &t.word).unwrap().is_trivial);
        }
        assert!(make_trivial_word(&p, 0, 1, &mut rng).is_err());
    }

    #[test]
    fn nontrivial_word_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = cyclic(7);
        for _ in 0..10 {
            let w = make_nontrivial_word(&p, 3, &mut rng).unwrap();
            assert!(w == Word::power(1, 3) || w == Word::power(1, -3));
            assert!(!dehn_is_trivial(&p, &w).unwrap().is_trivial);
        }
        // x1^4 is more than half of x1^7, so no longer word exists.
        assert!(make_nontrivial_word(&p, 4, &mut rng)
            .unwrap_err()
            .is_budget_exhausted());

        let g = random_platform_group(&PlatformParams::default(), &mut rng).unwrap();
        let one = make_nontrivial_word(&g, 1, &mut rng).unwrap();
        assert_eq!(one.len(), 1);
        let solver = DehnSolver::new(&g);
        for _ in 0..20 {
            let w = make_nontrivial_word(&g, 200, &mut rng).unwrap();
            assert_eq!(w.len(), 200);
            let t = solver.run(&w).unwrap();
            assert!(!t.is_trivial);
            assert!(t.steps.is_empty());
        }
        assert!(make_nontrivial_word(&g, 0, &mut rng).is_err());
    }

    #[test]
    fn filter_matches_dehn_applicability() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = random_platform_group(&PlatformParams::default(), &mut rng).unwrap();
        let filter = LongPieceFilter::new(&p.symmetrize());
        let solver = DehnSolver::new(&p);
        for _ in 0..200 {
            let w = if rng.gen() {
                make_trivial_word(&p, 1, 3, &mut rng).unwrap()
            } else {
                Word::random_reduced(60, p.alphabet(), &mut rng)
            };
            assert_eq!(filter.admits(&w), !solver.has_long_piece(&w));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn constructed_words_decide_correctly(seed in any::<u64>(), factors in 1usize..5, conj in 0usize..8, len in 1usize..120) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_platform_group(&PlatformParams::default(), &mut rng).unwrap();
            let solver = DehnSolver::new(&p);
            let t = make_trivial_word(&p, factors, conj, &mut rng).unwrap();
            let tr = solver.run(&t).unwrap();
            prop_assert!(tr.is_trivial);
            prop_assert!(tr.steps.len() <= t.len());
            let n = make_nontrivial_word(&p, len, &mut rng).unwrap();
            prop_assert!(!solver.is_trivial(&n).unwrap());
        }
    }
}
