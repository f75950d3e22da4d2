//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use normdesign::arith::{is_prime, is_representable, splitting_type, SplitType};
use normdesign::design::quadrature_average;
use normdesign::harmonic::{basis_pair, in_span};
use normdesign::theta::{
    a_norm, hecke_verify, is_odd_integer, nonzero_mod, shell_sum, BasisEvaluator,
};
use normdesign::{enumerate_shell, BivarPoly, Ring};

const R_SWEEP: u64 = 300;
const J_SWEEP: u32 = 13;
const QUAD_TOL: f64 = 1e-10;
const QUAD_NODES: usize = 256;

const EXAMPLE_POINTS: [(i64, i64); 12] = [
    (11, 19),
    (-11, -19),
    (19, 11),
    (-19, -11),
    (11, -30),
    (-11, 30),
    (30, -19),
    (-30, 19),
    (30, -11),
    (-30, 11),
    (19, -30),
    (-19, 30),
];

const COPRIME_PAIRS: [(u64, u64); 20] = [
    (2, 3),
    (2, 5),
    (3, 4),
    (4, 5),
    (3, 7),
    (5, 7),
    (2, 11),
    (4, 9),
    (7, 8),
    (3, 13),
    (5, 11),
    (7, 9),
    (8, 11),
    (9, 13),
    (7, 13),
    (11, 13),
    (4, 25),
    (5, 16),
    (12, 25),
    (3, 97),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly(s: &str) -> BivarPoly {
    s.parse().expect("valid polynomial")
}

fn c1_shell() -> Outcome {
    let ring = Ring::new(3).unwrap();
    let start = Instant::now();
    let shell = enumerate_shell(ring, 691);
    let elapsed = start.elapsed();
    let mut want = EXAMPLE_POINTS.to_vec();
    want.sort();
    let exact = shell.points() == want.as_slice();
    outcome(
        exact && elapsed < Duration::from_millis(10),
        format!("{} points, canonical={exact}, {elapsed:?}", shell.len()),
    )
}

fn c2_example_sums() -> Outcome {
    let ring = Ring::new(3).unwrap();
    let p = poly("2*x^2+3462*x*y+1729*y^2");
    let q = poly("2*x^6+6*x^5*y-15*x^4*y^2-40*x^3*y^3-15*x^2*y^4+6*x*y^5+2*y^6");
    let ps = shell_sum(ring, &p, 691);
    let qs = shell_sum(ring, &q, 691);
    let spans = in_span(ring, 2, &p).unwrap().is_some() && in_span(ring, 6, &q).unwrap().is_some();
    outcome(
        ps.is_zero() && qs == int(-4_818_834_696) && spans,
        format!("P-sum={ps}, Q-sum={qs}, both in span={spans}"),
    )
}

fn c3_known_coefficients() -> Outcome {
    let a7 = a_norm(Ring::new(7).unwrap(), 2, 2).unwrap();
    let a1 = a_norm(Ring::new(1).unwrap(), 4, 2).unwrap();
    outcome(
        a7 == int(-3) && a1 == int(-4),
        format!("a(7,2,2)={a7}, a(1,4,2)={a1}"),
    )
}

/// Criteria 4 and 5 share one pass over all shells.
fn c4_c5_sweep() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut vanish_checked = 0usize;
    let mut vanish_bad = Vec::new();
    let mut strength_checked = 0usize;
    let mut strength_bad = Vec::new();
    for ring in Ring::all() {
        let u = ring.unit_count();
        let evals: Vec<BasisEvaluator> = (1..=J_SWEEP.max(2 * u))
            .map(|j| BasisEvaluator::new(ring, j).unwrap())
            .collect();
        for r in (1..=R_SWEEP).filter(|&r| is_representable(ring, r)) {
            let shell = enumerate_shell(ring, r);
            for j in (1..=J_SWEEP).filter(|j| j % u != 0) {
                let (re, im) = evals[j as usize - 1].sums(&shell);
                vanish_checked += 1;
                if !re.is_zero() || !im.is_zero() {
                    vanish_bad.push((ring.d(), r, j));
                }
            }
            for j in [u, 2 * u] {
                strength_checked += 1;
                if evals[j as usize - 1].a_norm_of(&shell).is_zero() {
                    strength_bad.push((ring.d(), r, j));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    (
        outcome(
            vanish_bad.is_empty() && elapsed < Duration::from_secs(60),
            format!(
                "{vanish_checked} (D,r,j) triples, {} nonzero {:?}, {elapsed:?}",
                vanish_bad.len(),
                &vanish_bad[..vanish_bad.len().min(5)]
            ),
        ),
        outcome(
            strength_bad.is_empty(),
            format!(
                "{strength_checked} coefficients, {} zero {:?}",
                strength_bad.len(),
                &strength_bad[..strength_bad.len().min(5)]
            ),
        ),
    )
}

fn c6_hecke() -> Outcome {
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for ring in Ring::all() {
        let j = ring.unit_count();
        for (i, p) in (2..=47).filter(|&p| is_prime(p)).enumerate() {
            // the pairs do not depend on p; check them once per ring
            let pairs: &[(u64, u64)] = if i == 0 { &COPRIME_PAIRS } else { &[] };
            let report = hecke_verify(ring, j, p, 3, pairs).unwrap();
            checks += report.checks.len();
            failures.extend(
                report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| (ring.d(), c.identity, c.inputs.clone())),
            );
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checks} identities, {} failed {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

/// At the ramified prime p = D the shell is one unit orbit of √−D (up to a unit), so
/// a(D,j,D) = (−D)^{j/2} for j ≡ 0 (mod u_D): nonzero but divisible by p. The
/// non-vanishing mod p therefore holds at unramified p only; p = D is checked against
/// its exact value instead.
fn c7_nonzero_mod_p() -> Outcome {
    let mut unramified = 0usize;
    let mut ramified = 0usize;
    let mut bad = Vec::new();
    for ring in Ring::all() {
        let u = ring.unit_count();
        for p in (3..=100).filter(|&p| is_prime(p) && is_representable(ring, p)) {
            let split = splitting_type(ring, p).unwrap();
            for j in [u, 2 * u] {
                let a = a_norm(ring, j, p).unwrap();
                let ok = if split == SplitType::Ramified {
                    ramified += 1;
                    let want = Pow::pow(BigInt::from(-i64::from(ring.d())), j / 2);
                    a == BigRational::from_integer(want)
                } else {
                    unramified += 1;
                    nonzero_mod(&a, p)
                };
                if !ok {
                    bad.push((ring.d(), p, j));
                }
            }
        }
    }
    let r7 = Ring::new(7).unwrap();
    let odd: Vec<bool> = (2..=12)
        .step_by(2)
        .map(|j| is_odd_integer(&a_norm(r7, j, 2).unwrap()))
        .collect();
    outcome(
        bad.is_empty() && odd.iter().all(|&b| b),
        format!(
            "{unramified} unramified a(D,j,p) nonzero mod p, {ramified} ramified a(D,j,D) = (-D)^(j/2), \
             failures {bad:?}; a(7,j,2) odd: {odd:?}"
        ),
    )
}

fn c8_inert_squares() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for ring in Ring::all() {
        let j = ring.unit_count();
        for p in (2..=20).filter(|&p| is_prime(p)) {
            if splitting_type(ring, p).unwrap() != SplitType::Inert {
                continue;
            }
            checked += 1;
            let got = a_norm(ring, j, p * p).unwrap();
            let want = BigRational::from_integer(Pow::pow(BigInt::from(p), j));
            if got != want {
                bad.push((ring.d(), p, got.to_string()));
            }
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        format!("{checked} inert primes, mismatches {bad:?}"),
    )
}

fn c9_quadrature() -> Outcome {
    let start = Instant::now();
    let one = BivarPoly::one();
    let mut worst_norm = 0f64;
    for ring in Ring::all() {
        for r in [1, 4] {
            let v = quadrature_average(ring, r, &one, QUAD_NODES).unwrap();
            worst_norm = worst_norm.max((v - 1.0).abs());
        }
    }
    let mut worst_basis = 0f64;
    for d in [1, 2, 3, 7] {
        let ring = Ring::new(d).unwrap();
        for j in 1..=8 {
            let (re, im) = basis_pair(ring, j).unwrap();
            for r in [1, 4] {
                for f in [&re, &im] {
                    let v = quadrature_average(ring, r, f, QUAD_NODES).unwrap();
                    worst_basis = worst_basis.max(v.abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_norm < QUAD_TOL && worst_basis < QUAD_TOL && elapsed < Duration::from_secs(5),
        format!(
            "max |avg(1)-1| = {worst_norm:.1e}, max |avg(basis)| = {worst_basis:.1e}, {elapsed:?}"
        ),
    )
}

fn c10_representability() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for ring in Ring::all() {
        for r in 1..=2000 {
            checked += 1;
            if is_representable(ring, r) == enumerate_shell(ring, r).is_empty() {
                mismatches.push((ring.d(), r));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < Duration::from_secs(30),
        format!("{checked} (D,r) pairs, mismatches {mismatches:?}, {elapsed:?}"),
    )
}

fn c11_determinism() -> Outcome {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_normdesign"))
            .args([
                "sweep", "--rmax", "100", "--jmax", "13", "--format", "json", "--jobs", jobs,
            ])
            .output()
            .expect("run normdesign")
    };
    let a = run("1");
    let b = run("8");
    let parsed: Option<serde_json::Value> = serde_json::from_slice(&a.stdout).ok();
    let all_ok = parsed
        .as_ref()
        .and_then(|v| v["all_ok"].as_bool())
        .unwrap_or(false);
    let same = a.stdout == b.stdout;
    outcome(
        a.status.success() && b.status.success() && same && all_ok,
        format!(
            "{} bytes, identical={same}, exit codes {:?}/{:?}, all_ok={all_ok}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "shell reproduction", c1_shell()),
        (2, "example sums", c2_example_sums()),
        (3, "known coefficients", c3_known_coefficients()),
    ];
    let (c4, c5) = c4_c5_sweep();
    results.push((4, "vanishing sweep", c4));
    results.push((5, "strength sweep", c5));
    results.push((6, "Hecke identities", c6_hecke()));
    results.push((7, "nonzero mod p and prime 2", c7_nonzero_mod_p()));
    results.push((8, "inert squares", c8_inert_squares()));
    results.push((9, "quadrature normalization", c9_quadrature()));
    results.push((10, "representability oracle", c10_representability()));
    results.push((11, "sweep determinism", c11_determinism()));

    let mut failed = 0;
    for (n, name, o) in &results {
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {n:>2} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
    debug_assert!(COPRIME_PAIRS
        .iter()
        .all(|(a, b)| a.gcd(b) == 1 && a * b <= 300));
}
