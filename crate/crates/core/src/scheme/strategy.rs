//! The sharing schemes behind a common interface, selectable by name.

use std::collections::BTreeSet;
use std::fmt;

use rand::RngCore;

use super::{
    column_to_int, deal_nn, deal_tn, recover_secret_nn, BitColumn, SessionConfig, WordColumn,
};
use crate::error::{Error, Result};
use crate::field::{interpolate_at_zero, PrimeModulus, SharePoint};
use crate::registry::{Named, Registry};
use crate::securesum::{run_secure_linear_combination, run_secure_sum, Transcript};
use crate::smallcancel::Presentation;

pub const DEFAULT_SCHEME: &str = "nn";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Secret {
    Bits(BitColumn),
    Residue(u64),
}

impl fmt::Display for Secret {
    /// Hex for bit columns, decimal for residues: the same forms accepted on
    /// input.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Secret::Bits(c) => f.write_str(&c.to_hex()),
            Secret::Residue(x) => write!(f, "{x}"),
        }
    }
}

/// Raw dealing parameters as a user supplies them.
#[derive(Debug, Clone, Copy)]
pub struct DealRequest<'a> {
    pub n: usize,
    pub t: Option<usize>,
    pub p: Option<u64>,
    pub secret: &'a str,
}

pub trait SharingScheme: Named + Send + Sync {
    /// Validates a request and fixes the public session parameters.
    fn prepare(&self, req: &DealRequest<'_>) -> Result<(SessionConfig, Secret)>;

    fn deal(
        &self,
        cfg: &SessionConfig,
        secret: &Secret,
        groups: &[Presentation],
        rng: &mut dyn RngCore,
    ) -> Result<Vec<WordColumn>>;

    /// Recombines decoded share columns `(participant, bits)`.
    fn combine(&self, cfg: &SessionConfig, decoded: &[(usize, BitColumn)]) -> Result<Secret>;

    /// As [`SharingScheme::combine`], routed through the masked ring.
    fn combine_secure(
        &self,
        cfg: &SessionConfig,
        decoded: &[(usize, BitColumn)],
        rng: &mut dyn RngCore,
    ) -> Result<(Secret, Transcript)>;
}

fn check_participants(cfg: &SessionConfig, decoded: &[(usize, BitColumn)]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (j, c) in decoded {
        if *j == 0 || *j > cfg.n {
            return Err(Error::invalid(format!(
                "no participant {j} in a session of {}",
                cfg.n
            )));
        }
        if !seen.insert(*j) {
            return Err(Error::DuplicateIndex(*j as u64));
        }
        if c.width() != cfg.k {
            return Err(Error::WidthMismatch {
                expected: cfg.k,
                got: c.width(),
            });
        }
    }
    if decoded.len() < cfg.t {
        return Err(Error::InsufficientShares {
            needed: cfg.t,
            got: decoded.len(),
        });
    }
    Ok(())
}

/// XOR splitting; every participant is needed.
pub struct NnScheme;

impl Named for NnScheme {
    fn name(&self) -> &'static str {
        "nn"
    }

    fn description(&self) -> &'static str {
        "(n,n) threshold: XOR-split bit column, secret given in hex"
    }
}

impl SharingScheme for NnScheme {
    fn prepare(&self, req: &DealRequest<'_>) -> Result<(SessionConfig, Secret)> {
        if req.p.is_some() {
            return Err(Error::invalid("the (n,n) scheme takes no modulus"));
        }
        if req.t.is_some_and(|t| t != req.n) {
            return Err(Error::invalid("the (n,n) scheme has t = n"));
        }
        let bits = BitColumn::from_hex(req.secret)?;
        let cfg = SessionConfig::nn(req.n, bits.width())?;
        Ok((cfg, Secret::Bits(bits)))
    }

    fn deal(
        &self,
        cfg: &SessionConfig,
        secret: &Secret,
        groups: &[Presentation],
        rng: &mut dyn RngCore,
    ) -> Result<Vec<WordColumn>> {
        match secret {
            Secret::Bits(c) => deal_nn(c, cfg, groups, rng),
            Secret::Residue(_) => Err(Error::invalid("the (n,n) scheme shares bit columns")),
        }
    }

    fn combine(&self, cfg: &SessionConfig, decoded: &[(usize, BitColumn)]) -> Result<Secret> {
        check_participants(cfg, decoded)?;
        let cols: Vec<BitColumn> = decoded.iter().map(|(_, c)| c.clone()).collect();
        recover_secret_nn(&cols).map(Secret::Bits)
    }

    fn combine_secure(
        &self,
        cfg: &SessionConfig,
        decoded: &[(usize, BitColumn)],
        rng: &mut dyn RngCore,
    ) -> Result<(Secret, Transcript)> {
        check_participants(cfg, decoded)?;
        let mut sorted = decoded.to_vec();
        sorted.sort_by_key(|(j, _)| *j);
        let cols: Vec<BitColumn> = sorted.into_iter().map(|(_, c)| c).collect();
        let (out, tr) = run_secure_sum(&cols, rng)?;
        Ok((Secret::Bits(out), tr))
    }
}

/// Shamir shares written in binary; any `t` participants suffice.
pub struct TnScheme;

impl TnScheme {
    fn shares(
        cfg: &SessionConfig,
        decoded: &[(usize, BitColumn)],
    ) -> Result<(PrimeModulus, Vec<SharePoint>)> {
        check_participants(cfg, decoded)?;
        let p = cfg
            .p
            .ok_or_else(|| Error::invalid("the (t,n) scheme needs a prime modulus"))?;
        let pts = decoded
            .iter()
            .map(|(j, c)| SharePoint::new(*j as u64, column_to_int(c)?, p))
            .collect::<Result<Vec<_>>>()?;
        Ok((p, pts))
    }
}

impl Named for TnScheme {
    fn name(&self) -> &'static str {
        "tn"
    }

    fn description(&self) -> &'static str {
        "(t,n) threshold: Shamir shares over Z_p as word columns, secret in decimal"
    }
}

impl SharingScheme for TnScheme {
    fn prepare(&self, req: &DealRequest<'_>) -> Result<(SessionConfig, Secret)> {
        let t = req
            .t
            .ok_or_else(|| Error::invalid("the (t,n) scheme needs a threshold t"))?;
        let p = req
            .p
            .ok_or_else(|| Error::invalid("the (t,n) scheme needs a prime modulus p"))?;
        let p = PrimeModulus::new(p)?;
        let x: u64 = req.secret.trim().parse().map_err(|_| {
            Error::invalid(format!("secret `{}` is not a decimal integer", req.secret))
        })?;
        if x >= p.value() {
            return Err(Error::invalid(format!(
                "secret {x} is not below the modulus {p}"
            )));
        }
        Ok((SessionConfig::tn(req.n, t, p)?, Secret::Residue(x)))
    }

    fn deal(
        &self,
        cfg: &SessionConfig,
        secret: &Secret,
        groups: &[Presentation],
        rng: &mut dyn RngCore,
    ) -> Result<Vec<WordColumn>> {
        match secret {
            Secret::Residue(x) => deal_tn(*x, cfg, groups, rng),
            Secret::Bits(_) => Err(Error::invalid("the (t,n) scheme shares residues")),
        }
    }

    fn combine(&self, cfg: &SessionConfig, decoded: &[(usize, BitColumn)]) -> Result<Secret> {
        let (p, pts) = Self::shares(cfg, decoded)?;
        interpolate_at_zero(&pts, p).map(Secret::Residue)
    }

    fn combine_secure(
        &self,
        cfg: &SessionConfig,
        decoded: &[(usize, BitColumn)],
        rng: &mut dyn RngCore,
    ) -> Result<(Secret, Transcript)> {
        let (p, pts) = Self::shares(cfg, decoded)?;
        let (x, tr) = run_secure_linear_combination(&pts, p, rng)?;
        Ok((Secret::Residue(x), tr))
    }
}

pub fn schemes() -> Registry<dyn SharingScheme> {
    let mut r: Registry<dyn SharingScheme> = Registry::new("sharing scheme");
    r.register(Box::new(NnScheme)).register(Box::new(TnScheme));
    r
}
