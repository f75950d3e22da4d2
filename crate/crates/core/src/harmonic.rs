//! The two-dimensional spaces `H_{D,j} = ⟨Re (x + ω'y)^j, Im (x + ω'y)^j⟩`
//! with `ω' = √−D` or `(1 + √−D)/2`.
//!
//! Imaginary parts are kept radical-free: `I_{D,j} = √D · poly`, and only
//! `poly` is stored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{solve_columns, Solution};
use crate::poly::{rat, BivarPoly};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    Real,
    Imag,
}

/// `R_{D,j}` (no radical) or `I_{D,j} = √D · poly` (radical set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasisElement {
    pub ring: Ring,
    pub j: u32,
    pub part: Part,
    pub poly: BivarPoly,
    pub radical: bool,
}

/// One layer `q_D^k · (a·R_{D,j−2k} + b·I_{D,j−2k}/√D)` of a decomposition;
/// when `j − 2k = 0` the layer is `a · q_D^k` and `b` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub k: u32,
    pub a: BigRational,
    pub b: BigRational,
}

/// `(Re, Im/√D)` of `(x + ω'y)^j` for any `j ≥ 0`.
fn power_parts(ring: Ring, j: u32) -> (BivarPoly, BivarPoly) {
    // x + ω'y = u + i√D·v
    let (u, v) = if ring.is_half_integral() {
        let half = BivarPoly::monomial(rat(1, 2), 0, 1);
        (&BivarPoly::x() + &half, half)
    } else {
        (BivarPoly::x(), BivarPoly::y())
    };
    let d = BivarPoly::constant(BigRational::from_integer(ring.d().into()));
    let (mut re, mut im) = (BivarPoly::one(), BivarPoly::zero());
    for _ in 0..j {
        // (re + i√D im)(u + i√D v)
        let next_re = &(&re * &u) - &(&(&im * &v) * &d);
        let next_im = &(&re * &v) + &(&im * &u);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// `(R_{D,j}, I_{D,j}/√D)` for `j ≥ 1`.
pub fn basis_pair(ring: Ring, j: u32) -> Result<(BivarPoly, BivarPoly)> {
    if j == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(power_parts(ring, j))
}

pub fn basis_poly(ring: Ring, j: u32, part: Part) -> Result<HarmonicBasisElement> {
    let (re, im) = basis_pair(ring, j)?;
    let (poly, radical) = match part {
        Part::Real => (re, false),
        Part::Imag => (im, true),
    };
    Ok(HarmonicBasisElement {
        ring,
        j,
        part,
        poly,
        radical,
    })
}

/// The norm form `q_D` as a polynomial.
pub fn norm_form_poly(ring: Ring) -> BivarPoly {
    if ring.is_half_integral() {
        BivarPoly::from_int_terms(&[(2, 0, 1), (1, 1, 1), (0, 2, ring.quarter())])
    } else {
        BivarPoly::from_int_terms(&[(2, 0, 1), (0, 2, ring.d() as i64)])
    }
}

/// Coordinates of a degree-`j` form in the basis `x^{j−t} y^t`, `t = 0..=j`.
fn coords(p: &BivarPoly, j: u32) -> Vec<BigRational> {
    (0..=j).map(|t| p.coeff(j - t, t)).collect()
}

fn check_form(p: &BivarPoly, j: u32) -> Result<()> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    match p.degree() {
        Some(found) if found != j => Err(Error::WrongDegree { expected: j, found }),
        _ => Ok(()),
    }
}

/// Rationals `(a, b)` with `P = a·R_{D,j} + b·I_{D,j}/√D`, if they exist.
pub fn in_span(ring: Ring, j: u32, p: &BivarPoly) -> Result<Option<(BigRational, BigRational)>> {
    let (re, im) = basis_pair(ring, j)?;
    check_form(p, j)?;
    match solve_columns(&[coords(&re, j), coords(&im, j)], &coords(p, j)) {
        Solution::Unique(v) => {
            let mut it = v.into_iter();
            Ok(Some((it.next().unwrap(), it.next().unwrap())))
        }
        Solution::Inconsistent => Ok(None),
        Solution::Underdetermined => unreachable!("R and I/√D are independent"),
    }
}

/// Write a form of degree `j` as `Σ_k q_D^k (a_k R_{D,j−2k} + b_k I_{D,j−2k}/√D)`.
/// Layers with both coefficients zero are omitted.
pub fn decompose(ring: Ring, p: &BivarPoly) -> Result<Vec<Layer>> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let Some(j) = p.degree() else {
        return Ok(Vec::new());
    };
    let q = norm_form_poly(ring);
    let mut columns = Vec::new();
    let mut shape = Vec::new();
    let mut qk = BivarPoly::one();
    for k in 0..=j / 2 {
        let m = j - 2 * k;
        if m == 0 {
            columns.push(coords(&qk, j));
            shape.push((k, false));
        } else {
            let (re, im) = power_parts(ring, m);
            columns.push(coords(&(&qk * &re), j));
            columns.push(coords(&(&qk * &im), j));
            shape.push((k, true));
        }
        qk = &qk * &q;
    }
    let Solution::Unique(sol) = solve_columns(&columns, &coords(p, j)) else {
        unreachable!("the layers form a direct sum of the degree-j forms");
    };
    let mut sol = sol.into_iter();
    let mut layers = Vec::new();
    for (k, two) in shape {
        let a = sol.next().unwrap();
        let b = if two {
            sol.next().unwrap()
        } else {
            BigRational::zero()
        };
        if !a.is_zero() || !b.is_zero() {
            layers.push(Layer { k, a, b });
        }
    }
    Ok(layers)
}

/// Rebuild the polynomial a decomposition describes.
pub fn recompose(ring: Ring, j: u32, layers: &[Layer]) -> BivarPoly {
    let q = norm_form_poly(ring);
    let mut p = BivarPoly::zero();
    for l in layers {
        let qk = q.pow(l.k);
        let (re, im) = power_parts(ring, j - 2 * l.k);
        let inner = &re.scale(&l.a) + &im.scale(&l.b);
        p = &p + &(&qk * &inner);
    }
    p
}

/// True when every coefficient denominator divides `2^j`.
pub fn denominators_divide_two_pow(p: &BivarPoly, j: u32) -> bool {
    let bound = BigInt::one() << j;
    p.terms().all(|(_, _, c)| (&bound % c.denom()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(d: i64) -> Ring {
        Ring::new(d).unwrap()
    }

    fn p(s: &str) -> BivarPoly {
        s.parse().unwrap()
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_poly(r(1), 2, Part::Real).unwrap().poly, p("x^2-y^2"));
        assert_eq!(
            basis_poly(r(3), 2, Part::Real).unwrap().poly,
            p("x^2+x*y-1/2*y^2")
        );
        let im = basis_poly(r(3), 2, Part::Imag).unwrap();
        assert!(im.radical);
        assert_eq!(im.poly, p("x*y+1/2*y^2"));
        assert_eq!(basis_poly(r(1), 0, Part::Real), Err(Error::ZeroDegree));
        assert_eq!(
            basis_poly(r(3), 6, Part::Real)
                .unwrap()
                .poly
                .scale(&rat(2, 1)),
            p("2*x^6+6*x^5*y-15*x^4*y^2-40*x^3*y^3-15*x^2*y^4+6*x*y^5+2*y^6")
        );
    }

    #[test]
    fn basis_invariants() {
        for ring in Ring::all() {
            for j in 1..=12 {
                let (re, im) = basis_pair(ring, j).unwrap();
                for q in [&re, &im] {
                    assert!(q.is_homogeneous() && q.degree() == Some(j));
                    assert!(denominators_divide_two_pow(q, j));
                    if !ring.is_half_integral() {
                        assert!(q.terms().all(|(_, _, c)| c.is_integer()));
                    }
                }
                assert_eq!(rank(&[coords(&re, j), coords(&im, j)]), 2, "D={ring} j={j}");
                if !ring.is_half_integral() {
                    assert!(im.terms().all(|(_, k, _)| k % 2 == 1));
                    assert!(re.terms().all(|(_, k, _)| k % 2 == 0));
                }
            }
        }
    }

    /// Σ c_{a,b} u^a (v²)^{⌊b/2⌋} · (v/√D)^{b mod 2}, with v² and v/√D supplied.
    fn substitute(
        h: &BivarPoly,
        u: &BivarPoly,
        v2: &BivarPoly,
        v_over_root: &BivarPoly,
    ) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (a, b, c) in h.terms() {
            let mut t = &u.pow(a) * &v2.pow(b / 2);
            if b % 2 == 1 {
                t = &t * v_over_root;
            }
            out = &out + &t.scale(c);
        }
        out
    }

    #[test]
    fn pullback_of_circular_harmonics() {
        for j in 1..=8 {
            let (h_re, h_im) = basis_pair(r(1), j).unwrap();
            assert!(h_re.laplacian().is_zero() && h_im.laplacian().is_zero());
            for ring in Ring::all() {
                let dd = BigRational::from_integer(ring.d().into());
                // x' = x (+ y/2), y' = √D·y (/2)
                let (u, v2, v_root) = if ring.is_half_integral() {
                    (
                        p("x+1/2*y"),
                        BivarPoly::monomial(&dd * rat(1, 4), 0, 2),
                        p("1/2*y"),
                    )
                } else {
                    (p("x"), BivarPoly::monomial(dd.clone(), 0, 2), p("y"))
                };
                let (re, im) = basis_pair(ring, j).unwrap();
                assert_eq!(substitute(&h_re, &u, &v2, &v_root), re, "D={ring} j={j}");
                assert_eq!(substitute(&h_im, &u, &v2, &v_root), im, "D={ring} j={j}");
            }
        }
    }

    #[test]
    fn span_examples() {
        assert_eq!(
            in_span(r(3), 2, &p("2*x^2+3462*x*y+1729*y^2")).unwrap(),
            Some((rat(2, 1), rat(3460, 1)))
        );
        assert_eq!(in_span(r(1), 2, &p("x^2+y^2")).unwrap(), None);
        assert_eq!(
            in_span(r(1), 3, &p("x^3-3*x*y^2")).unwrap(),
            Some((rat(1, 1), rat(0, 1)))
        );
        let q6 = p("2*x^6+6*x^5*y-15*x^4*y^2-40*x^3*y^3-15*x^2*y^4+6*x*y^5+2*y^6");
        assert_eq!(in_span(r(3), 6, &q6).unwrap(), Some((rat(2, 1), rat(0, 1))));
        // the literal printed reading with a leading 2x² is not even homogeneous
        let misprint = p("2*x^2+6*x^5*y-15*x^4*y^2-40*x^3*y^3-15*x^2*y^4+6*x*y^5+2*y^6");
        assert_eq!(in_span(r(3), 6, &misprint), Err(Error::NotHomogeneous));
        assert_eq!(
            in_span(r(1), 3, &p("x^2")),
            Err(Error::WrongDegree {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose(r(1), &p("x^2+y^2")).unwrap(),
            vec![Layer {
                k: 1,
                a: rat(1, 1),
                b: rat(0, 1)
            }]
        );
        assert_eq!(
            decompose(r(1), &p("x^2")).unwrap(),
            vec![
                Layer {
                    k: 0,
                    a: rat(1, 2),
                    b: rat(0, 1)
                },
                Layer {
                    k: 1,
                    a: rat(1, 2),
                    b: rat(0, 1)
                }
            ]
        );
        // x⁴ over the Eisenstein integers
        assert_eq!(
            decompose(r(3), &p("x^4")).unwrap(),
            vec![
                Layer {
                    k: 0,
                    a: rat(-1, 9),
                    b: rat(-1, 3)
                },
                Layer {
                    k: 1,
                    a: rat(4, 9),
                    b: rat(-4, 3)
                },
                Layer {
                    k: 2,
                    a: rat(2, 3),
                    b: rat(0, 1)
                }
            ]
        );
        assert_eq!(decompose(r(2), &p("x+y^2")), Err(Error::NotHomogeneous));
        assert!(decompose(r(2), &BivarPoly::zero()).unwrap().is_empty());
    }

    fn random_point(rng: &mut ChaCha8Rng) -> (BigRational, BigRational) {
        let mut q = || rat(rng.gen_range(-50..=50), rng.gen_range(1..=12));
        (q(), q())
    }

    #[test]
    fn decomposition_reconstructs_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in Ring::all() {
            for j in 0..=9u32 {
                // a random form of degree j
                let mut f = BivarPoly::zero();
                for t in 0..=j {
                    f.add_term(j - t, t, rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
                }
                let layers = decompose(ring, &f).unwrap();
                let Some(deg) = f.degree() else { continue };
                let g = recompose(ring, deg, &layers);
                for _ in 0..50 {
                    let (x, y) = random_point(&mut rng);
                    assert_eq!(g.evaluate(&x, &y), f.evaluate(&x, &y));
                }
            }
        }
        // x⁴ with D = 3 at 25 random points
        let layers = decompose(r(3), &p("x^4")).unwrap();
        let g = recompose(r(3), 4, &layers);
        for _ in 0..25 {
            let (x, y) = random_point(&mut rng);
            assert_eq!(g.evaluate(&x, &y), &x * &x * &x * &x);
        }
    }
}
