use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cyclotomic::cyclotomic_poly;
use super::lattice::{is_negative_first, primitive_i64};
use super::newton_polytope;
use crate::laurent::{ExponentVector, LaurentPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteinbergClass {
    /// Every factor is cyclotomic in a single monomial.
    CyclotomicProduct,
    /// Factors are cyclotomic or of the form `1 - m1 ± m2` in a unimodular
    /// pair of monomials.
    SteinbergCatalog,
    /// Some factor was not matched.
    Unknown,
}

/// Screen a bivariate polynomial against the catalog by trial division.
/// Candidate factors are built from the primitive edge directions of the
/// Newton polygon, so the answer does not depend on the chosen basis.
pub fn steinberg_classify(p: &LaurentPoly) -> SteinbergClass {
    if p.n() != 2 || p.is_zero() {
        return SteinbergClass::Unknown;
    }
    let dirs = edge_directions(p);
    let extent: i64 = p.exponent_bounds().iter().map(|(a, b)| b - a).sum();
    let mut candidates: Vec<(LaurentPoly, bool)> = Vec::new();
    for u in &dirs {
        for k in 1..=(2 * extent * extent).max(2) as usize {
            let c = cyclotomic_poly(k);
            if (c.len() - 1) as i64 > extent {
                continue;
            }
            let terms = c.iter().enumerate().map(|(i, v)| {
                (ExponentVector(u.iter().map(|x| x * i as i64).collect()), BigRational::from_integer(v.clone()))
            });
            candidates.push((LaurentPoly::from_terms(2, terms).unwrap(), false));
        }
    }
    for (i, u) in dirs.iter().enumerate() {
        for w in dirs.iter().skip(i + 1) {
            for su in [1i64, -1] {
                for sw in [1i64, -1] {
                    let a: Vec<i64> = u.iter().map(|x| x * su).collect();
                    let b: Vec<i64> = w.iter().map(|x| x * sw).collect();
                    if (a[0] * b[1] - a[1] * b[0]).abs() != 1 {
                        continue;
                    }
                    for (ca, cb) in [(-1i64, -1i64), (-1, 1), (1, -1)] {
                        let t = LaurentPoly::from_terms(
                            2,
                            [
                                (ExponentVector(vec![0, 0]), BigRational::one()),
                                (ExponentVector(a.clone()), BigRational::from_integer(ca.into())),
                                (ExponentVector(b.clone()), BigRational::from_integer(cb.into())),
                            ],
                        )
                        .unwrap();
                        candidates.push((t, true));
                    }
                }
            }
        }
    }

    let mut cur = p.clone();
    let mut saw_trinomial = false;
    'outer: while !cur.is_monomial() {
        for (c, tri) in &candidates {
            if let Some(q) = cur.exact_div(c) {
                cur = q;
                saw_trinomial |= *tri;
                continue 'outer;
            }
        }
        return SteinbergClass::Unknown;
    }
    if saw_trinomial {
        SteinbergClass::SteinbergCatalog
    } else {
        SteinbergClass::CyclotomicProduct
    }
}

/// Primitive edge directions of the Newton polygon, each with its first
/// nonzero entry positive.
fn edge_directions(p: &LaurentPoly) -> Vec<Vec<i64>> {
    let poly = newton_polytope(p);
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for f in poly.faces(1) {
        if f.vertices.len() < 2 {
            continue;
        }
        let d: Vec<i64> = f.vertices[1].iter().zip(&f.vertices[0]).map(|(a, b)| a - b).collect();
        let mut d = primitive_i64(&d);
        if is_negative_first(&d) {
            d = d.iter().map(|x| -x).collect();
        }
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    dirs.sort();
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{parse_laurent, SignedPermutation};

    fn classify(s: &str) -> SteinbergClass {
        steinberg_classify(&parse_laurent(s, 2).unwrap())
    }

    #[test]
    fn catalog_examples() {
        assert_eq!(classify("1 - x - y"), SteinbergClass::SteinbergCatalog);
        assert_eq!(classify("(x - 1)^2*(y - 1)"), SteinbergClass::CyclotomicProduct);
        assert_eq!(classify("1 - x - y - x*y"), SteinbergClass::Unknown);
    }

    #[test]
    fn mixed_products() {
        assert_eq!(classify("(1 - x + y)*(x - 1)*(x^2 + x + 1)"), SteinbergClass::SteinbergCatalog);
        assert_eq!(classify("(x*y - 1)*(x*y + 1)"), SteinbergClass::CyclotomicProduct);
        assert_eq!(classify("1 + x + y"), SteinbergClass::Unknown);
        assert_eq!(classify("2*x - 3"), SteinbergClass::Unknown);
    }

    #[test]
    fn basis_independent() {
        let p = parse_laurent("(1 - x - y)*(y - 1)^2", 2).unwrap();
        for map in SignedPermutation::all(2) {
            assert_eq!(steinberg_classify(&p.monomial_substitute(&map).unwrap()), SteinbergClass::SteinbergCatalog);
        }
        // a unimodular shear x -> x y
        let sheared = parse_laurent("(1 - x*y - y)*(y - 1)^2", 2).unwrap();
        assert_eq!(steinberg_classify(&sheared), SteinbergClass::SteinbergCatalog);
    }
}
