//! Ellipsoidal design checks on shells: exact classification of each degree
//! `j` by basis shell sums, plus floating-point quadrature of the weighted
//! line-integral averages for cross-checking the normalizations.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::is_representable;
use crate::error::{Error, Result};
use crate::harmonic::Part;
use crate::poly::BivarPoly;
use crate::ring::Ring;
use crate::shells::{enumerate_shell, Shell};
use crate::theta::{basis_theta_series, rat_from_str, rat_to_string, BasisEvaluator};

/// Largest degree accepted by a strength scan.
pub const MAX_SCAN_DEGREE: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingDegree {
    pub j: u32,
    /// Nonzero shell sum of `R_{D,j}`, or of `I_{D,j}/√D` if the real sum vanishes.
    pub witness: BigRational,
}

/// Degree-by-degree design classification of one shell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignReport {
    pub ring: Ring,
    pub r: u64,
    pub j_max: u32,
    pub vanishing: Vec<u32>,
    pub failing: Vec<FailingDegree>,
    pub theorem_main_ok: bool,
}

#[derive(Serialize, Deserialize)]
struct FailingRecord {
    j: u32,
    witness: String,
}

#[derive(Serialize, Deserialize)]
struct ReportRecord {
    #[serde(rename = "D")]
    d: i64,
    r: u64,
    jmax: u32,
    vanishing: Vec<u32>,
    failing: Vec<FailingRecord>,
    theorem_main_ok: bool,
}

/// Description of the claimed maximal set `Z⁺ \ u_D Z⁺`.
pub fn claimed_t(ring: Ring) -> String {
    format!("Z+ \\ {}Z+", ring.unit_count())
}

/// Degrees `j ≤ j_max` at which every nonempty shell must fail.
pub fn expected_failing(ring: Ring, j_max: u32) -> Vec<u32> {
    let u = ring.unit_count();
    (1..=j_max).filter(|j| j % u == 0).collect()
}

/// Default scan bound `min(2u_D + 1, 13)`.
pub fn default_j_max(ring: Ring) -> u32 {
    (2 * ring.unit_count() + 1).min(13)
}

impl DesignReport {
    fn assemble(ring: Ring, r: u64, j_max: u32, sums: Vec<(BigRational, BigRational)>) -> Self {
        let mut vanishing = Vec::new();
        let mut failing = Vec::new();
        for (j, (re, im)) in (1..=j_max).zip(sums) {
            if re.is_zero() && im.is_zero() {
                vanishing.push(j);
            } else {
                let witness = if re.is_zero() { im } else { re };
                failing.push(FailingDegree { j, witness });
            }
        }
        let failing_js: Vec<u32> = failing.iter().map(|f| f.j).collect();
        let theorem_main_ok = failing_js == expected_failing(ring, j_max);
        DesignReport {
            ring,
            r,
            j_max,
            vanishing,
            failing,
            theorem_main_ok,
        }
    }

    /// Largest `t ≤ j_max` with every `1 ≤ j ≤ t` vanishing.
    pub fn strength(&self) -> u32 {
        self.failing.first().map_or(self.j_max, |f| f.j - 1)
    }

    pub fn failing_degrees(&self) -> Vec<u32> {
        self.failing.iter().map(|f| f.j).collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.record()).expect("plain record")
    }

    fn record(&self) -> ReportRecord {
        ReportRecord {
            d: self.ring.d() as i64,
            r: self.r,
            jmax: self.j_max,
            vanishing: self.vanishing.clone(),
            failing: self
                .failing
                .iter()
                .map(|f| FailingRecord {
                    j: f.j,
                    witness: rat_to_string(&f.witness),
                })
                .collect(),
            theorem_main_ok: self.theorem_main_ok,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rec: ReportRecord =
            serde_json::from_value(v.clone()).map_err(|e| Error::BadRecord(e.to_string()))?;
        let failing = rec
            .failing
            .iter()
            .map(|f| {
                Ok(FailingDegree {
                    j: f.j,
                    witness: rat_from_str(&f.witness)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DesignReport {
            ring: Ring::new(rec.d)?,
            r: rec.r,
            j_max: rec.jmax,
            vanishing: rec.vanishing,
            failing,
            theorem_main_ok: rec.theorem_main_ok,
        })
    }
}

fn nonempty_shell(ring: Ring, r: u64) -> Result<Shell> {
    if r == 0 {
        return Err(Error::NonPositive("r"));
    }
    if !is_representable(ring, r) {
        return Err(Error::EmptyShell { d: ring.d(), r });
    }
    Ok(enumerate_shell(ring, r))
}

fn check_scan(j_max: u32) -> Result<()> {
    if j_max == 0 {
        return Err(Error::NonPositive("j_max"));
    }
    if j_max > MAX_SCAN_DEGREE {
        return Err(Error::ScanTooLarge(j_max));
    }
    Ok(())
}

/// Whether `Λ_D^r` is an ellipsoidal `t`-design.
pub fn is_t_design(ring: Ring, r: u64, t: u32) -> Result<bool> {
    if t == 0 {
        return Err(Error::NonPositive("t"));
    }
    let shell = nonempty_shell(ring, r)?;
    for j in 1..=t {
        let (re, im) = BasisEvaluator::new(ring, j)?.sums(&shell);
        if !re.is_zero() || !im.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classify every `1 ≤ j ≤ j_max` for `Λ_D^r`.
pub fn strength_profile(ring: Ring, r: u64, j_max: u32) -> Result<DesignReport> {
    check_scan(j_max)?;
    let shell = nonempty_shell(ring, r)?;
    let sums = (1..=j_max)
        .map(|j| Ok(BasisEvaluator::new(ring, j)?.sums(&shell)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DesignReport::assemble(ring, r, j_max, sums))
}

/// Check that the failing degrees are exactly the multiples of `u_D` up to `j_max`.
pub fn verify_theorem_main(ring: Ring, r: u64, j_max: u32) -> Result<(bool, DesignReport)> {
    let report = strength_profile(ring, r, j_max)?;
    Ok((report.theorem_main_ok, report))
}

/// Point, velocity and weight of the ellipse parametrization at angle `theta`.
fn curve(ring: Ring, r: f64, theta: f64) -> ((f64, f64), (f64, f64), f64) {
    let d = ring.d() as f64;
    let sd = d.sqrt();
    let sr = r.sqrt();
    let (s, c) = theta.sin_cos();
    if ring.is_half_integral() {
        let (x, y) = (sr * (c - s / sd), 2.0 * sr * s / sd);
        let (dx, dy) = (sr * (-s - c / sd), 2.0 * sr * c / sd);
        let q = 20.0 * x * x + (d * d + 2.0 * d + 5.0) * y * y + (20.0 + 4.0 * d) * x * y;
        ((x, y), (dx, dy), 1.0 / q.sqrt())
    } else {
        let (x, y) = (sr * c, sr * s / sd);
        let (dx, dy) = (-sr * s, sr * c / sd);
        ((x, y), (dx, dy), 1.0 / (x * x / (d * d) + y * y).sqrt())
    }
}

/// `weight(γ(θ)) · |γ'(θ)|`; constant in `θ` and `r`.
pub fn measure_density(ring: Ring, r: f64, theta: f64) -> f64 {
    let (_, (dx, dy), w) = curve(ring, r, theta);
    w * dx.hypot(dy)
}

fn prefactor(ring: Ring) -> f64 {
    let sd = (ring.d() as f64).sqrt();
    if ring.is_half_integral() {
        sd / PI
    } else {
        1.0 / (2.0 * PI * sd)
    }
}

/// Weighted line-integral average of `P` over `C_D(r)` by the periodic
/// trapezoid rule on `nodes` equally spaced angles.
pub fn quadrature_average(ring: Ring, r: u64, p: &BivarPoly, nodes: usize) -> Result<f64> {
    if nodes < 16 || !nodes.is_power_of_two() {
        return Err(Error::BadNodeCount(nodes));
    }
    if r == 0 {
        return Err(Error::NonPositive("r"));
    }
    let h = 2.0 * PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|k| {
            let theta = k as f64 * h;
            let ((x, y), (dx, dy), w) = curve(ring, r as f64, theta);
            p.evaluate_f64(x, y) * w * dx.hypot(dy)
        })
        .sum();
    Ok(prefactor(ring) * sum * h)
}

/// Carry points of the unit circle onto `C_D(1)`.
pub fn spherical_map(ring: Ring, points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let sd = (ring.d() as f64).sqrt();
    points
        .iter()
        .map(|&(x, y)| {
            if (x * x + y * y - 1.0).abs() > 1e-9 {
                return Err(Error::OffCircle(x, y));
            }
            Ok(if ring.is_half_integral() {
                (x - y / sd, 2.0 * y / sd)
            } else {
                (x, y / sd)
            })
        })
        .collect()
}

/// Discrete average of `P` over a finite point set.
pub fn discrete_average(p: &BivarPoly, points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(x, y)| p.evaluate_f64(x, y))
        .sum::<f64>()
        / points.len() as f64
}

/// Aggregate classification of every nonempty shell `1 ≤ r ≤ r_max` of all nine rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub r_max: u64,
    pub j_max: u32,
    pub reports: Vec<DesignReport>,
}

impl SweepReport {
    pub fn all_ok(&self) -> bool {
        self.reports.iter().all(|r| r.theorem_main_ok)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "rmax": self.r_max,
            "jmax": self.j_max,
            "shells": self.reports.len(),
            "all_ok": self.all_ok(),
            "reports": self.reports.iter().map(DesignReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Run the full sweep with a pool of `jobs` worker threads. Each `(D, j)`
/// basis theta series is computed in one pass; reports come out in `(D, r)` order.
pub fn sweep(r_max: u64, j_max: u32, jobs: usize) -> Result<SweepReport> {
    if r_max == 0 {
        return Err(Error::NonPositive("r_max"));
    }
    if jobs == 0 {
        return Err(Error::NonPositive("jobs"));
    }
    check_scan(j_max)?;
    let tasks: Vec<(Ring, u32)> = Ring::all()
        .flat_map(|g| (1..=j_max).map(move |j| (g, j)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let series = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(g, j)| {
                let re = basis_theta_series(g, j, Part::Real, r_max)?;
                let im = basis_theta_series(g, j, Part::Imag, r_max)?;
                Ok((re.coeffs, im.coeffs))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut reports = Vec::new();
    for (gi, g) in Ring::all().enumerate() {
        let per_j = &series[gi * j_max as usize..(gi + 1) * j_max as usize];
        for r in (1..=r_max).filter(|&r| is_representable(g, r)) {
            let sums = per_j
                .iter()
                .map(|(re, im)| (re[r as usize].clone(), im[r as usize].clone()))
                .collect();
            reports.push(DesignReport::assemble(g, r, j_max, sums));
        }
    }
    Ok(SweepReport {
        r_max,
        j_max,
        reports,
    })
}
