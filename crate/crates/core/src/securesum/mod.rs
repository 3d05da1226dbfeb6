//! Masked ring summation over a simulated message bus.
//!
//! Participants `P1 → P2 → … → Pn → P1` pass a running total along a ring of
//! secure channels. `P1` opens the ring with `N1 + C1`; each later `Pi`
//! adds `Ci + Ni`. Back at `P1`, the first mask is removed and the masked
//! sum `S = ΣC + Σ_{i≥2} Ni` is broadcast. Then `P2, …, Pn` in turn
//! broadcast the running value with their own mask subtracted; the last of
//! these is the plain sum.
//!
//! Everything is over `Z_q`: `q = 2` entrywise for bit columns, `q = p` for
//! Lagrange-weighted Shamir shares.

mod audit;

use std::fmt;
use std::fmt::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{lagrange_coefficients, PrimeModulus, SharePoint};
use crate::scheme::BitColumn;

pub use audit::{transcript_privacy_audit, Observer, PrivacyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recipient {
    Participant(usize),
    Broadcast,
}

/// Which simulated channel carried a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    SecureRing,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub round: usize,
    pub from: usize,
    pub to: Recipient,
    pub channel: Channel,
    pub payload: Vec<u64>,
}

/// What one participant held privately during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateLog {
    pub participant: usize,
    /// The participant's private value before any weighting.
    pub raw_input: Vec<u64>,
    /// The summand actually fed into the ring.
    pub input: Vec<u64>,
    pub mask: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    modulus: u64,
    width: usize,
    messages: Vec<Message>,
    private: Vec<PrivateLog>,
}

impl Transcript {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn participants(&self) -> usize {
        self.private.len()
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn private_logs(&self) -> &[PrivateLog] {
        &self.private
    }

    /// The last broadcast, i.e. the protocol output.
    pub fn output(&self) -> Result<&[u64]> {
        self.check_complete()?;
        Ok(&self.messages.last().expect("complete").payload)
    }

    pub(crate) fn check_complete(&self) -> Result<()> {
        let n = self.participants();
        if n < 2 {
            return Err(Error::IncompleteTranscript(format!("{n} participants")));
        }
        if self.messages.len() != 2 * n {
            return Err(Error::IncompleteTranscript(format!(
                "expected {} messages, found {}",
                2 * n,
                self.messages.len()
            )));
        }
        if self.messages.windows(2).any(|w| w[0].round >= w[1].round) {
            return Err(Error::IncompleteTranscript("rounds out of order".into()));
        }
        Ok(())
    }

    /// Re-runs the arithmetic from the private logs and checks that every
    /// message matches.
    pub fn verify_replay(&self) -> Result<()> {
        self.check_complete()?;
        let expected = protocol_messages(
            self.modulus,
            self.width,
            &self
                .private
                .iter()
                .map(|l| (l.input.clone(), l.mask.clone()))
                .collect::<Vec<_>>(),
        );
        for (got, want) in self.messages.iter().zip(&expected) {
            if got != want {
                return Err(Error::IncompleteTranscript(format!(
                    "round {} does not replay",
                    got.round
                )));
            }
        }
        Ok(())
    }

    /// Line-oriented export: `round <r> <from>-><to|*> <payload-hex>`.
    pub fn to_log(&self) -> String {
        let mut out = format!(
            "# secure-sum modulus={} participants={} width={}\n",
            self.modulus,
            self.participants(),
            self.width
        );
        for m in &self.messages {
            let to = match m.to {
                Recipient::Participant(j) => j.to_string(),
                Recipient::Broadcast => "*".into(),
            };
            let _ = writeln!(
                out,
                "round {} {}->{} {}",
                m.round,
                m.from,
                to,
                payload_hex(self.modulus, &m.payload)
            );
        }
        out
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_log())
    }
}

fn payload_hex(modulus: u64, payload: &[u64]) -> String {
    if modulus == 2 {
        let bits = BitColumn::new(payload.iter().map(|&b| b == 1).collect());
        return bits.to_hex();
    }
    let digits = (64 - (modulus - 1).leading_zeros() as usize).div_ceil(4);
    payload.iter().map(|v| format!("{v:0digits$x}")).collect()
}

fn add(q: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u128 + y as u128) % q as u128) as u64)
        .collect()
}

fn sub(q: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u128 + (q - y % q) as u128) % q as u128) as u64)
        .collect()
}

/// The full message sequence for given summands and masks.
fn protocol_messages(q: u64, width: usize, parts: &[(Vec<u64>, Vec<u64>)]) -> Vec<Message> {
    let n = parts.len();
    let mut messages = Vec::with_capacity(2 * n);
    let mut running = vec![0; width];
    for (i, (c, m)) in parts.iter().enumerate() {
        running = add(q, &add(q, &running, c), m);
        messages.push(Message {
            round: i + 1,
            from: i + 1,
            to: Recipient::Participant(if i + 1 == n { 1 } else { i + 2 }),
            channel: Channel::SecureRing,
            payload: running.clone(),
        });
    }
    let mut s = sub(q, &running, &parts[0].1);
    messages.push(Message {
        round: n + 1,
        from: 1,
        to: Recipient::Broadcast,
        channel: Channel::Open,
        payload: s.clone(),
    });
    for (i, (_, m)) in parts.iter().enumerate().skip(1) {
        s = sub(q, &s, m);
        messages.push(Message {
            round: n + 1 + i,
            from: i + 1,
            to: Recipient::Broadcast,
            channel: Channel::Open,
            payload: s.clone(),
        });
    }
    messages
}

fn simulate<R: Rng + ?Sized>(
    q: u64,
    width: usize,
    inputs: Vec<(Vec<u64>, Vec<u64>)>,
    rng: &mut R,
) -> Transcript {
    let private: Vec<PrivateLog> = inputs
        .into_iter()
        .enumerate()
        .map(|(i, (raw_input, input))| PrivateLog {
            participant: i + 1,
            raw_input,
            input,
            mask: (0..width).map(|_| rng.gen_range(0..q)).collect(),
        })
        .collect();
    let parts: Vec<(Vec<u64>, Vec<u64>)> = private
        .iter()
        .map(|l| (l.input.clone(), l.mask.clone()))
        .collect();
    Transcript {
        modulus: q,
        width,
        messages: protocol_messages(q, width, &parts),
        private,
    }
}

fn check_widths(inputs: &[BitColumn]) -> Result<usize> {
    let width = inputs.first().map_or(0, BitColumn::width);
    if let Some(c) = inputs.iter().find(|c| c.width() != width) {
        return Err(Error::WidthMismatch {
            expected: width,
            got: c.width(),
        });
    }
    Ok(width)
}

fn bits_to_vec(c: &BitColumn) -> Vec<u64> {
    c.bits().iter().map(|&b| b as u64).collect()
}

/// XOR of the inputs, computed by the masked ring. Needs `n >= 3`: with two
/// participants the sum itself reveals the other's column.
pub fn run_secure_sum<R: Rng + ?Sized>(
    inputs: &[BitColumn],
    rng: &mut R,
) -> Result<(BitColumn, Transcript)> {
    if inputs.len() < 3 {
        return Err(Error::invalid(format!(
            "secure sum needs at least 3 participants, got {}",
            inputs.len()
        )));
    }
    run_secure_sum_unchecked(inputs, rng)
}

/// As [`run_secure_sum`] but also accepts two participants, for studying the
/// degenerate case.
pub fn run_secure_sum_unchecked<R: Rng + ?Sized>(
    inputs: &[BitColumn],
    rng: &mut R,
) -> Result<(BitColumn, Transcript)> {
    if inputs.len() < 2 {
        return Err(Error::invalid("secure sum needs at least 2 participants"));
    }
    let width = check_widths(inputs)?;
    let parts = inputs
        .iter()
        .map(|c| (bits_to_vec(c), bits_to_vec(c)))
        .collect();
    let tr = simulate(2, width, parts, rng);
    let out = BitColumn::new(tr.output()?.iter().map(|&b| b == 1).collect());
    Ok((out, tr))
}

/// `Σ c_i y_i mod p` for the public Lagrange coefficients of the share
/// indices, i.e. the secret `f(0)`. Participant `i` in the ring holds share
/// `shares[i - 1]` and feeds in `c_i y_i`.
pub fn run_secure_linear_combination<R: Rng + ?Sized>(
    shares: &[SharePoint],
    p: PrimeModulus,
    rng: &mut R,
) -> Result<(u64, Transcript)> {
    if shares.len() < 3 {
        return Err(Error::invalid(format!(
            "the masked linear combination needs t >= 3, got {}",
            shares.len()
        )));
    }
    let indices: Vec<u64> = shares.iter().map(|s| s.index).collect();
    let c = lagrange_coefficients(&indices, p)?;
    let parts = shares
        .iter()
        .zip(&c)
        .map(|(s, &ci)| (vec![s.value], vec![p.mul(ci, p.reduce(s.value))]))
        .collect();
    let tr = simulate(p.value(), 1, parts, rng);
    let out = tr.output()?[0];
    Ok((out, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::interpolate_at_zero;
    use crate::scheme::recover_secret_nn;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn cols(bits: &[&str]) -> Vec<BitColumn> {
        bits.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn matches_plain_xor() {
        for n in 3..=8 {
            for k in [1usize, 7, 64] {
                for seed in 0..5 {
                    let mut r = rng(seed * 100 + n as u64);
                    let inputs: Vec<BitColumn> =
                        (0..n).map(|_| BitColumn::random(k, &mut r)).collect();
                    let (out, tr) = run_secure_sum(&inputs, &mut r).unwrap();
                    assert_eq!(out, recover_secret_nn(&inputs).unwrap());
                    tr.verify_replay().unwrap();
                }
            }
        }
    }

    #[test]
    fn message_order() {
        let inputs = cols(&["101", "011", "110"]);
        let (out, tr) = run_secure_sum(&inputs, &mut rng(1)).unwrap();
        assert_eq!(out.to_string(), "000");
        let shape: Vec<(usize, usize, Recipient, Channel)> = tr
            .messages()
            .iter()
            .map(|m| (m.round, m.from, m.to, m.channel))
            .collect();
        use Channel::*;
        use Recipient::*;
        assert_eq!(
            shape,
            vec![
                (1, 1, Participant(2), SecureRing),
                (2, 2, Participant(3), SecureRing),
                (3, 3, Participant(1), SecureRing),
                (4, 1, Broadcast, Open),
                (5, 2, Broadcast, Open),
                (6, 3, Broadcast, Open),
            ]
        );
    }

    #[test]
    fn zero_inputs_expose_only_masks() {
        let inputs = vec![BitColumn::zeros(8); 4];
        let (out, tr) = run_secure_sum(&inputs, &mut rng(2)).unwrap();
        assert_eq!(out, BitColumn::zeros(8));
        let mut masks = vec![0u64; 8];
        for (m, log) in tr.messages().iter().zip(tr.private_logs()) {
            masks = add(2, &masks, &log.mask);
            assert_eq!(m.payload, masks);
        }
    }

    #[test]
    fn fresh_seed_fresh_transcript() {
        let inputs = cols(&["1100", "1010", "0110"]);
        let (a, ta) = run_secure_sum(&inputs, &mut rng(3)).unwrap();
        let (b, tb) = run_secure_sum(&inputs, &mut rng(4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(ta.messages(), tb.messages());
        let (_, tc) = run_secure_sum(&inputs, &mut rng(3)).unwrap();
        assert_eq!(ta, tc);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(run_secure_sum(&cols(&["1", "0"]), &mut rng(0)).is_err());
        assert!(run_secure_sum_unchecked(&cols(&["1", "0"]), &mut rng(0)).is_ok());
        assert!(matches!(
            run_secure_sum(&cols(&["1", "0", "01"]), &mut rng(0)),
            Err(Error::WidthMismatch { .. })
        ));
        let p = PrimeModulus::new(11).unwrap();
        let two = [
            SharePoint { index: 1, value: 1 },
            SharePoint { index: 2, value: 2 },
        ];
        assert!(run_secure_linear_combination(&two, p, &mut rng(0)).is_err());
        let dup = [
            SharePoint { index: 1, value: 1 },
            SharePoint { index: 2, value: 2 },
            SharePoint { index: 1, value: 3 },
        ];
        assert_eq!(
            run_secure_linear_combination(&dup, p, &mut rng(0)).err(),
            Some(Error::DuplicateIndex(1))
        );
    }

    #[test]
    fn linear_combination_known_shares() {
        let p = PrimeModulus::new(11).unwrap();
        let pts = [(1, 10), (2, 8), (3, 10)].map(|(index, value)| SharePoint { index, value });
        let (out, tr) = run_secure_linear_combination(&pts, p, &mut rng(5)).unwrap();
        assert_eq!(out, 5);
        tr.verify_replay().unwrap();
        let zeros = [1, 2, 3].map(|index| SharePoint { index, value: 0 });
        assert_eq!(
            run_secure_linear_combination(&zeros, p, &mut rng(5))
                .unwrap()
                .0,
            0
        );
    }

    #[test]
    fn linear_combination_matches_interpolation() {
        let p = PrimeModulus::new(8191).unwrap();
        for seed in 0..100 {
            let mut r = rng(seed);
            let t = r.gen_range(3..=6);
            let mut idx: Vec<u64> = (1..=10).collect();
            rand::seq::SliceRandom::shuffle(&mut idx[..], &mut r);
            let pts: Vec<SharePoint> = idx[..t]
                .iter()
                .map(|&index| SharePoint {
                    index,
                    value: p.random(&mut r),
                })
                .collect();
            let (out, _) = run_secure_linear_combination(&pts, p, &mut r).unwrap();
            assert_eq!(out, interpolate_at_zero(&pts, p).unwrap());
        }
    }

    #[test]
    fn log_format() {
        let inputs = cols(&["10100101", "00000000", "00000000"]);
        let (_, tr) = run_secure_sum(&inputs, &mut rng(6)).unwrap();
        let log = tr.to_log();
        let lines: Vec<&str> = log.lines().collect();
        assert_eq!(lines[0], "# secure-sum modulus=2 participants=3 width=8");
        assert!(lines[1].starts_with("round 1 1->2 "));
        assert!(lines[3].starts_with("round 3 3->1 "));
        assert_eq!(lines[6], "round 6 3->* a5");
        let p = PrimeModulus::new(8191).unwrap();
        let pts = [1, 2, 3].map(|index| SharePoint { index, value: 4095 });
        let (_, tr) = run_secure_linear_combination(&pts, p, &mut rng(7)).unwrap();
        assert!(tr.to_log().lines().last().unwrap().ends_with(" 0fff"));
    }

    #[test]
    fn tampering_is_detected() {
        let inputs = cols(&["101", "011", "110"]);
        let (_, mut tr) = run_secure_sum(&inputs, &mut rng(8)).unwrap();
        tr.messages[2].payload[0] ^= 1;
        assert!(tr.verify_replay().is_err());
        tr.messages.pop();
        assert!(matches!(tr.output(), Err(Error::IncompleteTranscript(_))));
    }
}
