//! Elementary number theory on machine integers: the Kronecker symbol,
//! trial-division factorization and prime splitting in `O_D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Prime factorization `n = ∏ p^α`, primes increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Exponent of `p` in `n`.
    pub fn ord(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

/// How a rational prime decomposes in `O_D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitType {
    Ramified,
    Split,
    Inert,
}

// (2/n) for odd n, indexed by n mod 8
const TWO_TABLE: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/n)`, defined for every integer `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let (a, mut n) = (a as i128, n as i128);
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k: i8 = 1;
    let v = n.trailing_zeros();
    n >>= v;
    if v % 2 == 1 {
        k = TWO_TABLE[(a & 7) as usize];
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    k * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol for `0 ≤ a < n`, `n` odd positive.
fn jacobi(mut a: i128, mut n: i128) -> i8 {
    let mut k: i8 = 1;
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TWO_TABLE[(n & 7) as usize];
        }
        if a & n & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = n % r;
        n = r;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut e = 0;
        while m.is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(&mut m, 2);
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        push(&mut m, d);
        d += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

/// Decomposition type of the prime `p` in `O_D`.
pub fn splitting_type(ring: Ring, p: u64) -> Result<SplitType> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(split_type_unchecked(ring, p))
}

fn split_type_unchecked(ring: Ring, p: u64) -> SplitType {
    let disc = ring.discriminant();
    if disc.unsigned_abs().is_multiple_of(p) {
        return SplitType::Ramified;
    }
    match kronecker(disc, p as i64) {
        1 => SplitType::Split,
        _ => SplitType::Inert,
    }
}

/// Character value `χ(n) = (Δ_D / n)` of the field discriminant.
pub fn chi(ring: Ring, n: u64) -> i8 {
    kronecker(ring.discriminant(), n as i64)
}

/// Whether `r` is a norm from `O_D`: every inert prime divides `r` to an even power.
pub fn is_representable(ring: Ring, r: u64) -> bool {
    if r == 0 {
        return true;
    }
    let f = factorize(r).expect("r > 0");
    f.factors
        .iter()
        .all(|&(p, e)| e % 2 == 0 || split_type_unchecked(ring, p) != SplitType::Inert)
}

/// `|Λ_D^r| = u_D · Σ_{d | r} χ(d)` (class number one).
pub fn representation_count(ring: Ring, r: u64) -> u64 {
    if r == 0 {
        return 1;
    }
    let f = factorize(r).expect("r > 0");
    let divisor_sum: u64 = f
        .factors
        .iter()
        .map(|&(p, e)| match split_type_unchecked(ring, p) {
            SplitType::Ramified => 1,
            SplitType::Split => e as u64 + 1,
            SplitType::Inert => u64::from(e % 2 == 0),
        })
        .product();
    ring.unit_count() as u64 * divisor_sum
}
