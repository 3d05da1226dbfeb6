//! Which private inputs an observer can pin down from what it saw.
//!
//! Every message is a fixed linear form in the unknowns `C_1..C_n,
//! N_1..N_n`, the same form for every coordinate. An observer knows its own
//! input and mask plus the messages it received; input `C_i` is determined
//! exactly when its unit vector lies in the row space of that knowledge
//! over `Z_q`. Values never enter the decision, only the shape of the view.

use std::fmt;

use super::{Channel, Recipient, Transcript};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observer {
    /// A protocol participant (1-based) with its own private state.
    Participant(usize),
    /// An outsider reading only open-channel messages.
    Eavesdropper,
    /// An outsider reading the secure ring links, e.g. after a channel
    /// compromise.
    RingTap,
}

impl fmt::Display for Observer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observer::Participant(j) => write!(f, "P{j}"),
            Observer::Eavesdropper => f.write_str("eavesdropper"),
            Observer::RingTap => f.write_str("ring tap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyReport {
    pub observer: Observer,
    /// Other participants whose input the observer can compute.
    pub determined: Vec<usize>,
    /// Whether the sum of all inputs other than the observer's own is
    /// determined (always true for participants of a finished run).
    pub learns_sum: bool,
}

impl PrivacyReport {
    pub fn reveals_nothing(&self) -> bool {
        self.determined.is_empty()
    }
}

impl fmt::Display for PrivacyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} determines ", self.observer)?;
        if self.determined.is_empty() {
            f.write_str("none")?;
        } else {
            let names: Vec<String> = self.determined.iter().map(|j| format!("C{j}")).collect();
            f.write_str(&names.join(", "))?;
        }
        if self.learns_sum {
            f.write_str(" (learns the sum)")?;
        }
        Ok(())
    }
}

/// Linear form of the message sent in `round`, over `C_1..C_n, N_1..N_n`.
fn message_form(n: usize, round: usize) -> Vec<u64> {
    let mut form = vec![0u64; 2 * n];
    if round <= n {
        for l in 0..round {
            form[l] = 1;
            form[n + l] = 1;
        }
    } else {
        // Broadcast by participant `round - n`, after removing masks 2..=that.
        let unmasked = round - n;
        form[..n].fill(1);
        for l in unmasked.max(1)..n {
            form[n + l] = 1;
        }
    }
    form
}

/// Row space over a prime field, kept in reduced echelon form.
struct RowSpace {
    p: PrimeModulus,
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    fn new(p: PrimeModulus) -> Self {
        Self {
            p,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = self.p.sub(*x, self.p.mul(c, r));
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = self.p.inv(v[pivot]).expect("nonzero pivot");
        let v: Vec<u64> = v.iter().map(|&x| self.p.mul(x, inv)).collect();
        for (_, row) in &mut self.rows {
            let c = row[pivot];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = self.p.sub(*x, self.p.mul(c, r));
                }
            }
        }
        self.rows.push((pivot, v));
    }

    fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

pub fn transcript_privacy_audit(tr: &Transcript, observer: Observer) -> Result<PrivacyReport> {
    tr.check_complete()?;
    let n = tr.participants();
    let p = PrimeModulus::new(tr.modulus()).map_err(|_| {
        Error::IncompleteTranscript(format!("modulus {} is not prime", tr.modulus()))
    })?;
    if let Observer::Participant(j) = observer {
        if j == 0 || j > n {
            return Err(Error::invalid(format!(
                "no participant P{j} in a run of {n}"
            )));
        }
    }
    let mut space = RowSpace::new(p);
    let unit = |i: usize| {
        let mut v = vec![0u64; 2 * n];
        v[i] = 1;
        v
    };
    if let Observer::Participant(j) = observer {
        space.insert(unit(j - 1));
        space.insert(unit(n + j - 1));
    }
    for (r, m) in tr.messages().iter().enumerate() {
        let seen = match observer {
            Observer::Participant(j) => {
                m.from == j || m.to == Recipient::Participant(j) || m.to == Recipient::Broadcast
            }
            Observer::Eavesdropper => m.channel == Channel::Open,
            Observer::RingTap => m.channel == Channel::SecureRing,
        };
        if seen {
            space.insert(message_form(n, r + 1));
        }
    }
    let own = match observer {
        Observer::Participant(j) => Some(j),
        _ => None,
    };
    let others: Vec<usize> = (1..=n).filter(|&i| Some(i) != own).collect();
    let determined = others
        .iter()
        .copied()
        .filter(|&i| space.contains(unit(i - 1)))
        .collect();
    let mut sum = vec![0u64; 2 * n];
    for &i in &others {
        sum[i - 1] = 1;
    }
    Ok(PrivacyReport {
        observer,
        determined,
        learns_sum: space.contains(sum),
    })
}
