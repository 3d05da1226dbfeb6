//! Arithmetic in Z_p and the Shamir layer on top of it.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps trial division and `u128` products cheap.
pub const MAX_MODULUS: u64 = 1 << 32;

/// A prime `p`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::invalid(format!(
                "modulus {p} exceeds the supported maximum {MAX_MODULUS}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("modulus {p} is not prime")));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Smallest `k` with `2^k > p - 1`, i.e. the width needed to write any residue.
    pub fn bit_length(self) -> usize {
        (64 - (self.0 - 1).leading_zeros()) as usize
    }

    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_signed(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(self, a: u64) -> u64 {
        let a = a % self.0;
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = (a % self.0) as i128;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i128, a);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.0 as i128) as u64)
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Coefficients in ascending order; `coefficients[0]` is the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<u64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<u64>, p: PrimeModulus) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid(
                "a polynomial needs at least a constant term",
            ));
        }
        if let Some(&c) = coefficients.iter().find(|&&c| c >= p.value()) {
            return Err(Error::invalid(format!(
                "coefficient {c} is not reduced mod {p}"
            )));
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn constant(&self) -> u64 {
        self.coefficients[0]
    }

    /// Number of coefficients, i.e. the threshold this polynomial was drawn for.
    pub fn threshold(&self) -> usize {
        self.coefficients.len()
    }

    /// Actual degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|&c| c != 0)
    }

    pub fn eval(&self, x: u64, p: PrimeModulus) -> u64 {
        poly_eval(self, x, p)
    }
}

/// Samples `f` with `f(0) = secret` and `t - 1` further coefficients drawn
/// uniformly from Z_p. The top coefficient may be zero: forcing it nonzero
/// would exclude one candidate secret for every set of `t - 1` shares.
pub fn random_polynomial<R: Rng + ?Sized>(
    secret: u64,
    t: usize,
    p: PrimeModulus,
    rng: &mut R,
) -> Result<Polynomial> {
    if t == 0 || t as u64 >= p.value() {
        return Err(Error::invalid(format!(
            "threshold {t} must satisfy 1 <= t <= p - 1 = {}",
            p.value() - 1
        )));
    }
    if secret >= p.value() {
        return Err(Error::invalid(format!("secret {secret} is not below {p}")));
    }
    let mut coefficients = Vec::with_capacity(t);
    coefficients.push(secret);
    coefficients.extend((1..t).map(|_| p.random(rng)));
    Ok(Polynomial { coefficients })
}

/// Horner evaluation mod `p`.
pub fn poly_eval(f: &Polynomial, x: u64, p: PrimeModulus) -> u64 {
    let x = p.reduce(x);
    f.coefficients
        .iter()
        .rev()
        .fold(0, |acc, &c| p.add(p.mul(acc, x), c))
}

/// A share `(i, f(i))`; index zero is reserved for the secret.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SharePoint {
    pub index: u64,
    pub value: u64,
}

impl SharePoint {
    pub fn new(index: u64, value: u64, p: PrimeModulus) -> Result<Self> {
        if index == 0 || index.is_multiple_of(p.value()) {
            return Err(Error::invalid(format!(
                "share index {index} must be a nonzero residue mod {p}"
            )));
        }
        if value >= p.value() {
            return Err(Error::ShareOutOfRange {
                value,
                modulus: p.value(),
            });
        }
        Ok(Self { index, value })
    }
}

/// Evaluates `f` at `1..=n`.
pub fn make_shares(f: &Polynomial, n: usize, p: PrimeModulus) -> Result<Vec<SharePoint>> {
    if n as u64 >= p.value() {
        return Err(Error::invalid(format!(
            "participant count {n} must be below the modulus {p}"
        )));
    }
    Ok((1..=n as u64)
        .map(|i| SharePoint {
            index: i,
            value: poly_eval(f, i, p),
        })
        .collect())
}

fn check_indices(indices: &[u64], p: PrimeModulus) -> Result<()> {
    let mut seen = HashSet::with_capacity(indices.len());
    for &i in indices {
        if i % p.value() == 0 {
            return Err(Error::invalid(format!("share index {i} is zero mod {p}")));
        }
        if !seen.insert(i % p.value()) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// `c_i = prod_{j != i} (-i_j) / (i - i_j)`, so that `f(0) = sum c_i f(i)`.
/// Depends only on the index set.
pub fn lagrange_coefficients(indices: &[u64], p: PrimeModulus) -> Result<Vec<u64>> {
    check_indices(indices, p)?;
    Ok(indices
        .iter()
        .map(|&i| {
            let (num, den) =
                indices
                    .iter()
                    .filter(|&&j| j != i)
                    .fold((1u64, 1u64), |(num, den), &j| {
                        (
                            p.mul(num, p.neg(j)),
                            p.mul(den, p.sub(p.reduce(i), p.reduce(j))),
                        )
                    });
            // den is a product of nonzero residues since indices are distinct mod p
            p.mul(num, p.inv(den).expect("distinct indices"))
        })
        .collect())
}

pub fn interpolate_at_zero(points: &[SharePoint], p: PrimeModulus) -> Result<u64> {
    if points.is_empty() {
        return Err(Error::InsufficientShares { needed: 1, got: 0 });
    }
    let indices: Vec<u64> = points.iter().map(|s| s.index).collect();
    let c = lagrange_coefficients(&indices, p)?;
    Ok(points
        .iter()
        .zip(&c)
        .fold(0, |acc, (s, &ci)| p.add(acc, p.mul(ci, p.reduce(s.value)))))
}
