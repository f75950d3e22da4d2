//! Theta coefficients `a(Λ_D, P, r) = Σ_{(x,y) ∈ Λ_D^r} P(x, y)`, the
//! normalized `a(D, j, r)` and the Hecke identities they satisfy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{chi, is_prime, splitting_type, SplitType};
use crate::error::{Error, Result};
use crate::harmonic::{basis_pair, Part};
use crate::poly::{big_pow, BivarPoly, ScaledIntPoly};
use crate::ring::Ring;
use crate::shells::{enumerate_shell, for_each_point_up_to, Shell};

/// Render an exact rational as `"num/den"`.
pub fn rat_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"num/den"` or a bare integer.
pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {s:?}"),
    };
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn sum_over(shell: &Shell, p: &ScaledIntPoly) -> BigRational {
    let total: BigInt = shell
        .points()
        .iter()
        .map(|&(x, y)| p.eval_scaled(x, y))
        .sum();
    BigRational::new(total, p.den().clone())
}

/// Exact shell sum of `P` over `Λ_D^r`; zero for an empty shell.
pub fn shell_sum(ring: Ring, p: &BivarPoly, r: u64) -> BigRational {
    sum_over(&enumerate_shell(ring, r), &p.scaled_int())
}

/// Shell sums of `R_{D,j}` and `I_{D,j}/√D` with the basis prepared once.
#[derive(Clone, Debug)]
pub struct BasisEvaluator {
    ring: Ring,
    j: u32,
    re: ScaledIntPoly,
    im: ScaledIntPoly,
}

impl BasisEvaluator {
    pub fn new(ring: Ring, j: u32) -> Result<Self> {
        let (re, im) = basis_pair(ring, j)?;
        Ok(BasisEvaluator {
            ring,
            j,
            re: re.scaled_int(),
            im: im.scaled_int(),
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// `(Σ R_{D,j}, Σ I_{D,j}/√D)` over the shell.
    pub fn sums(&self, shell: &Shell) -> (BigRational, BigRational) {
        debug_assert_eq!(shell.ring(), self.ring);
        (sum_over(shell, &self.re), sum_over(shell, &self.im))
    }

    pub fn real_sum(&self, shell: &Shell) -> BigRational {
        sum_over(shell, &self.re)
    }

    pub fn real_value(&self, x: i64, y: i64) -> BigRational {
        self.re.eval(x, y)
    }

    /// `a(D, j, r) = (1/u_D) Σ R_{D,j}`.
    pub fn a_norm(&self, r: u64) -> BigRational {
        self.a_norm_of(&enumerate_shell(self.ring, r))
    }

    pub fn a_norm_of(&self, shell: &Shell) -> BigRational {
        self.real_sum(shell) / BigInt::from(self.ring.unit_count())
    }
}

/// `a(D, j, r)`.
pub fn a_norm(ring: Ring, j: u32, r: u64) -> Result<BigRational> {
    Ok(BasisEvaluator::new(ring, j)?.a_norm(r))
}

fn require_eigen_degree(ring: Ring, j: u32) -> Result<()> {
    let u = ring.unit_count();
    if j == 0 || !j.is_multiple_of(u) {
        return Err(Error::NotEigenDegree {
            d: ring.d(),
            j,
            units: u,
        });
    }
    Ok(())
}

/// `a(D, j, p)` from a single shell point: `R_{D,j}(x_p, y_p)` when `p`
/// ramifies, twice that when `p` splits.
pub fn a_prime_closed_form(ring: Ring, j: u32, p: u64) -> Result<BigRational> {
    require_eigen_degree(ring, j)?;
    let st = splitting_type(ring, p)?;
    let shell = enumerate_shell(ring, p);
    let &(x, y) = shell
        .points()
        .first()
        .ok_or(Error::EmptyShell { d: ring.d(), r: p })?;
    let value = BasisEvaluator::new(ring, j)?.real_value(x, y);
    Ok(match st {
        SplitType::Ramified => value,
        SplitType::Split => value * BigInt::from(2),
        SplitType::Inert => unreachable!("inert primes have empty shells"),
    })
}

/// What a theta series is a series of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesLabel {
    /// `R_{D,j}` or `I_{D,j}/√D`.
    Basis {
        j: u32,
        part: Part,
    },
    Poly(BivarPoly),
}

/// Coefficients `r ↦ a(Λ_D, P, r)` for `0 ≤ r ≤ r_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub ring: Ring,
    pub label: SeriesLabel,
    pub r_max: u64,
    pub coeffs: Vec<BigRational>,
    /// `j + 1` for a form of degree `j`.
    pub weight: u32,
}

fn sweep_coeffs(ring: Ring, p: &BivarPoly, r_max: u64) -> Vec<BigRational> {
    let scaled = p.scaled_int();
    let mut acc = vec![BigInt::zero(); r_max as usize + 1];
    for_each_point_up_to(ring, r_max, |x, y, n| {
        acc[n as usize] += scaled.eval_scaled(x, y);
    });
    acc.into_iter()
        .map(|s| BigRational::new(s, scaled.den().clone()))
        .collect()
}

/// Theta series of an arbitrary polynomial by one sweep over all points of
/// norm at most `r_max`.
pub fn theta_series(ring: Ring, p: &BivarPoly, r_max: u64) -> Result<ThetaSeries> {
    if r_max == 0 {
        return Err(Error::NonPositive("r_max"));
    }
    Ok(ThetaSeries {
        ring,
        label: SeriesLabel::Poly(p.clone()),
        r_max,
        coeffs: sweep_coeffs(ring, p, r_max),
        weight: p.degree().unwrap_or(0) + 1,
    })
}

/// Theta series of a basis element of `H_{D,j}`.
pub fn basis_theta_series(ring: Ring, j: u32, part: Part, r_max: u64) -> Result<ThetaSeries> {
    if r_max == 0 {
        return Err(Error::NonPositive("r_max"));
    }
    let (re, im) = basis_pair(ring, j)?;
    let p = match part {
        Part::Real => re,
        Part::Imag => im,
    };
    Ok(ThetaSeries {
        ring,
        label: SeriesLabel::Basis { j, part },
        r_max,
        coeffs: sweep_coeffs(ring, &p, r_max),
        weight: j + 1,
    })
}

#[derive(Serialize, Deserialize)]
struct ThetaRecord {
    #[serde(rename = "D")]
    d: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    part: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    poly: Option<String>,
    rmax: u64,
    coeffs: Vec<String>,
}

impl ThetaSeries {
    pub fn to_json(&self) -> Value {
        let (j, part, poly) = match &self.label {
            SeriesLabel::Basis { j, part } => (
                Some(*j),
                Some(match part {
                    Part::Real => "real".to_string(),
                    Part::Imag => "imag".to_string(),
                }),
                None,
            ),
            SeriesLabel::Poly(p) => (None, None, Some(p.to_string())),
        };
        serde_json::to_value(ThetaRecord {
            d: self.ring.d() as i64,
            j,
            part,
            poly,
            rmax: self.r_max,
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
        })
        .expect("plain record")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rec: ThetaRecord =
            serde_json::from_value(v.clone()).map_err(|e| Error::BadRecord(e.to_string()))?;
        let ring = Ring::new(rec.d)?;
        let label = match (rec.j, rec.poly) {
            (Some(j), None) => SeriesLabel::Basis {
                j,
                part: match rec.part.as_deref() {
                    None | Some("real") => Part::Real,
                    Some("imag") => Part::Imag,
                    Some(other) => return Err(Error::BadRecord(format!("unknown part {other:?}"))),
                },
            },
            (None, Some(p)) => SeriesLabel::Poly(p.parse()?),
            _ => {
                return Err(Error::BadRecord(
                    "exactly one of \"j\" and \"poly\" is required".into(),
                ))
            }
        };
        let coeffs = rec
            .coeffs
            .iter()
            .map(|s| rat_from_str(s))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() as u64 != rec.rmax + 1 {
            return Err(Error::BadRecord(
                "coefficient count does not match rmax".into(),
            ));
        }
        let weight = match &label {
            SeriesLabel::Basis { j, .. } => j + 1,
            SeriesLabel::Poly(p) => p.degree().unwrap_or(0) + 1,
        };
        Ok(ThetaSeries {
            ring,
            label,
            r_max: rec.rmax,
            coeffs,
            weight,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeckeIdentity {
    /// `a(r₁r₂) = a(r₁)a(r₂)` for coprime `r₁, r₂`.
    Multiplicative,
    /// `a(p^α) = a(p)a(p^{α−1}) − χ(p)p^j a(p^{α−2})`.
    Recursion,
    /// `a(p^α) ≡ a(p)^α (mod p)`.
    Congruence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeCheck {
    pub identity: HeckeIdentity,
    pub inputs: Vec<u64>,
    pub left: BigRational,
    pub right: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeReport {
    pub ring: Ring,
    pub j: u32,
    pub checks: Vec<HeckeCheck>,
}

impl HeckeReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "identity": c.identity,
                    "inputs": c.inputs,
                    "left": rat_to_string(&c.left),
                    "right": rat_to_string(&c.right),
                    "pass": c.pass,
                })
            })
            .collect();
        json!({"D": self.ring.d(), "j": self.j, "checks": checks, "all_pass": self.all_pass()})
    }
}

/// Check the three coefficient identities of a Hecke eigenform against
/// direct shell sums.
pub fn hecke_verify(
    ring: Ring,
    j: u32,
    p: u64,
    alpha_max: u32,
    coprime_pairs: &[(u64, u64)],
) -> Result<HeckeReport> {
    require_eigen_degree(ring, j)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if alpha_max < 2 {
        return Err(Error::NonPositive("alpha_max - 1"));
    }
    if let Some(&(a, b)) = coprime_pairs.iter().find(|(a, b)| a.gcd(b) != 1 || *a == 0) {
        return Err(Error::NotCoprime(a, b));
    }
    let eval = BasisEvaluator::new(ring, j)?;
    let mut checks = Vec::new();

    for &(r1, r2) in coprime_pairs {
        let left = eval.a_norm(r1 * r2);
        let right = eval.a_norm(r1) * eval.a_norm(r2);
        checks.push(HeckeCheck {
            identity: HeckeIdentity::Multiplicative,
            inputs: vec![r1, r2],
            pass: left == right,
            left,
            right,
        });
    }

    let powers: Vec<BigRational> = (0..=alpha_max).map(|e| eval.a_norm(p.pow(e))).collect();
    let chi_p = BigRational::from_integer(chi(ring, p).into());
    let p_j = BigRational::from_integer(big_pow(p, j));
    for alpha in 2..=alpha_max as usize {
        let left = powers[alpha].clone();
        let right = &powers[1] * &powers[alpha - 1] - &chi_p * &p_j * &powers[alpha - 2];
        checks.push(HeckeCheck {
            identity: HeckeIdentity::Recursion,
            inputs: vec![p, alpha as u64],
            pass: left == right,
            left,
            right,
        });
    }
    for alpha in 1..=alpha_max as usize {
        let left = powers[alpha].clone();
        let right = Pow::pow(&powers[1], alpha as u32);
        let pass = left.is_integer()
            && right.is_integer()
            && (left.to_integer() - right.to_integer())
                .mod_floor(&BigInt::from(p))
                .is_zero();
        checks.push(HeckeCheck {
            identity: HeckeIdentity::Congruence,
            inputs: vec![p, alpha as u64],
            left,
            right,
            pass,
        });
    }
    Ok(HeckeReport { ring, j, checks })
}

/// True when `a(D, j, r)` is a nonzero residue mod `p` (requires an integer value).
pub fn nonzero_mod(value: &BigRational, p: u64) -> bool {
    value.is_integer() && !value.to_integer().mod_floor(&BigInt::from(p)).is_zero()
}

/// True when the value is an odd integer.
pub fn is_odd_integer(value: &BigRational) -> bool {
    value.is_integer() && value.to_integer().is_odd()
}
