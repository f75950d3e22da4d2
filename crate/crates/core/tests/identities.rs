//! Coefficient identities checked against direct shell sums over wider ranges than the unit tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use normdesign::arith::{is_prime, splitting_type, SplitType};
use normdesign::harmonic::Part;
use normdesign::theta::{basis_theta_series, SeriesLabel};
use normdesign::Ring;

#[test]
fn eigen_coefficients_are_integers() {
    for ring in Ring::all() {
        let u = ring.unit_count();
        for j in [u, 2 * u] {
            let series = basis_theta_series(ring, j, Part::Real, 300).unwrap();
            assert!(matches!(series.label, SeriesLabel::Basis { .. }));
            for (r, c) in series.coeffs.iter().enumerate() {
                let a = c / BigRational::from_integer(u.into());
                assert!(a.is_integer(), "D={} j={j} r={r}: {a}", ring.d());
            }
        }
    }
}

#[test]
fn inert_prime_powers() {
    for ring in Ring::all() {
        let u = ring.unit_count();
        let inert: Vec<u64> = (2..=20)
            .filter(|&p| is_prime(p) && splitting_type(ring, p).unwrap() == SplitType::Inert)
            .collect();
        for j in [u, 2 * u] {
            let series = basis_theta_series(ring, j, Part::Real, 15_000).unwrap();
            for &p in &inert {
                for alpha in [2u32, 4] {
                    let r = p.pow(alpha);
                    if r as usize >= series.coeffs.len() {
                        continue;
                    }
                    let a = &series.coeffs[r as usize] / BigRational::from_integer(u.into());
                    let want = BigRational::from_integer(Pow::pow(BigInt::from(p), j * alpha / 2));
                    assert_eq!(a, want, "D={} j={j} p={p} alpha={alpha}", ring.d());
                    let odd = &series.coeffs[p.pow(alpha - 1) as usize];
                    assert_eq!(*odd, BigRational::from_integer(0.into()));
                }
            }
        }
    }
}
