//! Constructors for the polynomial families: the `n = 1` family, the built-in
//! catalog, VZ polynomials and cellular polynomials of convergent
//! permutations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analytic::Surd;
use crate::error::{Error, Result};
use crate::laurent::{parse_laurent, ExponentVector, LaurentPoly};
use crate::ode::DeltaOperator;

/// Expected values attached to a catalog entry. `sources` tags each field as
/// `"literature"` or `"computed"`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    /// Rational multiple of `constant`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiple: Option<String>,
    /// Seed `Q₀` under which the limit equals `multiple · constant`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<DeltaOperator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_phi: Option<Surd>,
    /// `r_phi |C| e^n`, rounded as published.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sources: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub phi: LaurentPoly,
    pub n: usize,
    /// Involution constant: `t -> 1/(C t)`.
    #[serde(rename = "C")]
    pub c: i64,
    /// Degree of the facile cover, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub expected: Expected,
    #[serde(default)]
    pub notes: String,
}

fn surd(p: i64, q: i64, d: i64, e: i64) -> Surd {
    Surd { p: p.into(), q: q.into(), d: d.into(), e: e.into() }
}

fn tags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// `φ(x) = -x + a + (1 - a^2)/(4x)` with `a = 2b + 1`.
pub fn n1_family(b: u64) -> CatalogEntry {
    assert!(b >= 1);
    let a = 2 * b as i64 + 1;
    let c = (1 - a * a) / 4;
    let phi = LaurentPoly::from_int_terms(1, &[(&[1], -1), (&[0], a), (&[-1], c)]);
    // smallest root of t^2 - 2a t + 1 is a - sqrt(a^2 - 1) = a - 2 sqrt(b(b+1))
    let r_phi = Surd { p: a.into(), q: BigInt::from(-1), d: BigInt::from(a * a - 1), e: BigInt::one() };
    let r_phi = normalize_surd(r_phi);
    CatalogEntry {
        name: format!("n1-b{}", b),
        phi,
        n: 1,
        c: 1,
        r: Some(1),
        expected: Expected {
            constant: Some(format!("log({}/{})", b + 1, b)),
            multiple: Some("1".into()),
            q0: Some("2".into()),
            operator: None,
            r_phi: Some(r_phi),
            gate: None,
            sources: tags(&[("constant", "literature"), ("q0", "computed"), ("r_phi", "literature")]),
        },
        notes: String::new(),
    }
}

/// Pull square factors out of `d`.
fn normalize_surd(mut s: Surd) -> Surd {
    let mut k = BigInt::from(2);
    while &k * &k <= s.d {
        let k2 = &k * &k;
        while (&s.d % &k2).is_zero() {
            s.d /= &k2;
            s.q *= &k;
        }
        k += 1;
    }
    s
}

fn poly(text: &str, n: usize) -> LaurentPoly {
    parse_laurent(text, n).expect("catalog polynomial parses")
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let lit = "literature";
    let comp = "computed";
    vec![
        n1_family(1),
        CatalogEntry {
            name: "baby-apery-zeta2".into(),
            phi: poly("x1^-1*x2^-1*(1-x1)*(1-x2)*(1-x1-x2)", 2),
            n: 2,
            c: -1,
            r: Some(2),
            expected: Expected {
                constant: Some("zeta(2)".into()),
                multiple: Some("1".into()),
                q0: Some("-5".into()),
                operator: Some(DeltaOperator::from_int_coeffs(&[&[0, 3, 1], &[0, 11, 2], &[-1, 11, 1]])),
                r_phi: Some(surd(-11, 5, 5, 2)),
                gate: None,
                sources: tags(&[("constant", lit), ("multiple", lit), ("q0", comp), ("operator", lit), ("r_phi", lit)]),
            },
            notes: "involution t -> -1/t".into(),
        },
        CatalogEntry {
            name: "apery-zeta3".into(),
            phi: poly("x1^-1*x2^-1*x3^-1*(x1-1)*(x2-1)*(x3-1)*(1-x1-x2+x1*x2-x1*x2*x3)", 3),
            n: 3,
            c: 1,
            r: Some(2),
            expected: Expected {
                constant: Some("zeta(3)".into()),
                multiple: Some("-2".into()),
                q0: Some("-12".into()),
                operator: Some(DeltaOperator::from_int_coeffs(&[&[0, -5, 1], &[0, -27, 3], &[0, -51, 3], &[1, -34, 1]])),
                r_phi: Some(surd(17, -12, 2, 1)),
                gate: Some(0.59),
                sources: tags(&[("constant", lit), ("multiple", lit), ("q0", lit), ("operator", lit), ("r_phi", lit), ("gate", lit)]),
            },
            notes: "2-cover by the Fermi family".into(),
        },
        CatalogEntry {
            name: "phi-II".into(),
            phi: poly("(1-x1-x2-x3)*(1-x1^-1)*(1-x2^-1)*(1-x3^-1)", 3),
            n: 3,
            c: 16,
            r: None,
            expected: Expected {
                constant: Some("zeta(3)".into()),
                multiple: Some("7/2".into()),
                q0: Some("1".into()),
                operator: None,
                r_phi: Some(surd(3, -2, 2, 4)),
                gate: Some(13.78),
                sources: tags(&[("constant", lit), ("multiple", comp), ("q0", comp), ("r_phi", comp), ("gate", lit)]),
            },
            notes: "fails the gate".into(),
        },
        CatalogEntry {
            name: "phi-III".into(),
            phi: poly("(x1+x2+x3)*(-1+x1^-1+x2^-1+x3^-1-x1^-1*x2^-1-x1^-1*x3^-1-x2^-1*x3^-1)", 3),
            n: 3,
            c: -27,
            r: None,
            expected: Expected {
                constant: Some("L(chi_-3,3)".into()),
                multiple: Some("-9".into()),
                q0: Some("1".into()),
                operator: None,
                r_phi: Some(surd(-3, 2, 3, 9)),
                gate: Some(27.97),
                sources: tags(&[("constant", lit), ("multiple", comp), ("q0", comp), ("r_phi", comp), ("gate", lit)]),
            },
            notes: "fails the gate".into(),
        },
        CatalogEntry {
            name: "phi-IV".into(),
            phi: poly("(1-x1-x2-x3)*(1-x1^-1-x2^-1-x3^-1)", 3),
            n: 3,
            c: 64,
            r: None,
            expected: Expected {
                constant: Some("zeta(3)".into()),
                multiple: Some("56/3".into()),
                q0: Some("1".into()),
                operator: None,
                r_phi: Some(surd(1, 0, 1, 16)),
                gate: Some(80.34),
                sources: tags(&[("constant", lit), ("multiple", comp), ("q0", comp), ("r_phi", comp), ("gate", lit)]),
            },
            notes: "fails the gate".into(),
        },
        CatalogEntry {
            name: "zagier-E".into(),
            phi: poly("(x1+x1^-1)*(x2+x2^-1)+4", 2),
            n: 2,
            c: 32,
            r: None,
            expected: Expected {
                constant: Some("catalan".into()),
                multiple: Some("2".into()),
                q0: Some("1/8".into()),
                operator: None,
                r_phi: Some(surd(1, 0, 1, 8)),
                gate: None,
                sources: tags(&[("constant", lit), ("multiple", lit), ("q0", comp), ("r_phi", lit)]),
            },
            notes: "r_phi C = 4; not involutive at the level of fibre types".into(),
        },
    ]
}

/// `ψ_1 = 1`, `ψ_n = x_1⋯x_n + (1 - x_n) ψ_{n-1}` and
/// `φ_n = (1 - x_1^-1)⋯(1 - x_n^-1) ψ_n`.
pub fn vz_polynomial(n: usize) -> (LaurentPoly, LaurentPoly) {
    assert!(n >= 1);
    let mut psi = LaurentPoly::one(n);
    let mut prod = LaurentPoly::one(n);
    for k in 2..=n {
        prod = &prod * &LaurentPoly::var(n, k - 2);
        let xk = LaurentPoly::var(n, k - 1);
        let all = &prod * &xk;
        psi = &all + &(&(&LaurentPoly::one(n) - &xk) * &psi);
    }
    let mut phi = psi.clone();
    for i in 0..n {
        let inv = LaurentPoly::monomial(n, ExponentVector((0..n).map(|j| if j == i { -1 } else { 0 }).collect()), BigRational::one());
        phi = &phi * &(&LaurentPoly::one(n) - &inv);
    }
    (psi, phi)
}

/// A permutation of `{1..N}` read cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicPermutation {
    pub images: Vec<usize>,
}

impl CyclicPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NonBijective);
            }
            seen[v] = true;
        }
        Ok(CyclicPermutation { images })
    }

    pub fn identity(size: usize) -> Self {
        CyclicPermutation { images: (1..=size).collect() }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for `i` taken mod `N`, 1-based.
    pub fn at(&self, i: usize) -> usize {
        self.images[(i + self.size() - 1) % self.size()]
    }

    pub fn all(size: usize) -> Vec<CyclicPermutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=size).collect();
        permute(&mut cur, 0, &mut out);
        out.sort_by(|a, b| a.images.cmp(&b.images));
        out
    }
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<CyclicPermutation>) {
    if k == v.len() {
        out.push(CyclicPermutation { images: v.clone() });
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

/// No window of `k` cyclically adjacent images, `2 <= k <= N-2`, is a run of
/// consecutive residues mod `N`.
pub fn is_convergent(sigma: &CyclicPermutation) -> bool {
    let big_n = sigma.size();
    if big_n < 4 {
        return false;
    }
    for i in 1..=big_n {
        for k in 2..=big_n - 2 {
            let window: Vec<usize> = (0..k).map(|t| sigma.at(i + t) - 1).collect();
            let consecutive = window.iter().any(|&a| (0..k).all(|t| window.contains(&((a + t) % big_n))));
            if consecutive {
                return false;
            }
        }
    }
    true
}

/// Marked points in the gauge `z_1 = 0`, `z_{N-1} = 1`, `z_N = ∞`; `None`
/// stands for `∞`.
fn chart_inverse(x: &[BigRational]) -> Option<Vec<Option<BigRational>>> {
    let n = x.len();
    let big_n = n + 3;
    let mut z: Vec<Option<BigRational>> = vec![None; big_n + 1];
    z[1] = Some(BigRational::zero());
    z[big_n - 1] = Some(BigRational::one());
    // x_1 = z_{n+1}/(1 - z_{n+1})
    let d1 = BigRational::one() + &x[0];
    if d1.is_zero() {
        return None;
    }
    z[n + 1] = Some(&x[0] / d1);
    for j in 2..=n {
        // x_j = -CR(z_1, b, c, d) with b = z_{n+2-j}, c = z_{n+3-j}, d = z_{n+4-j}
        let c = z[n + 3 - j].clone()?;
        let d = z[n + 4 - j].clone()?;
        let den = &c - (BigRational::one() + &x[j - 1]) * &d;
        if den.is_zero() {
            return None;
        }
        z[n + 2 - j] = Some(-(&c * &d * &x[j - 1]) / den);
    }
    // the points must be distinct
    let finite: Vec<&BigRational> = z[1..big_n].iter().map(|v| v.as_ref().unwrap()).collect();
    for a in 0..finite.len() {
        for b in a + 1..finite.len() {
            if finite[a] == finite[b] {
                return None;
            }
        }
    }
    Some(z)
}

/// `Π_i (z_{π(i)} - z_{π(i+1)})` over the cycle, skipping factors at `∞`.
fn theta(pi: &CyclicPermutation, z: &[Option<BigRational>]) -> BigRational {
    let mut acc = BigRational::one();
    for i in 1..=pi.size() {
        if let (Some(a), Some(b)) = (&z[pi.at(i)], &z[pi.at(i + 1)]) {
            acc *= a - b;
        }
    }
    acc
}

/// `θ_σ(z)/θ(z)` at the chart point `x`.
pub fn cellular_value(sigma: &CyclicPermutation, x: &[BigRational]) -> Option<BigRational> {
    let z = chart_inverse(x)?;
    let den = theta(&CyclicPermutation::identity(sigma.size()), &z);
    if den.is_zero() {
        return None;
    }
    Some(theta(sigma, &z) / den)
}

const SAMPLE_PRIMES: [i64; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// The `k`-th deterministic low-height rational, nonzero and pairwise distinct
/// within each run of 24.
fn sample_value(k: usize) -> BigRational {
    let np = SAMPLE_PRIMES.len();
    let num = SAMPLE_PRIMES[k % np] * if (k / np) % 2 == 0 { 1 } else { -1 };
    let den = SAMPLE_PRIMES[(7 * k + 3 + k / np) % np];
    BigRational::new((num + (k / (2 * np)) as i64).into(), den.into())
}

/// Grid nodes for one axis: `side` distinct nonzero values.
fn axis_nodes(axis: usize, side: usize, shift: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(side);
    let mut k = 5 * axis + 11 * shift;
    while out.len() < side {
        let v = sample_value(k);
        k += 1;
        if !v.is_zero() && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Inverse of `V[p][e] = x_p^(e - r)`, a rescaled Vandermonde matrix.
fn laurent_vandermonde_inverse(nodes: &[BigRational], r: i64) -> Option<Vec<Vec<BigRational>>> {
    let m = nodes.len();
    let mut a: Vec<Vec<BigRational>> = nodes
        .iter()
        .enumerate()
        .map(|(p, x)| {
            let mut row: Vec<BigRational> = (0..m as i64).map(|e| pow_i(x, e - r)).collect();
            row.extend((0..m).map(|q| if q == p { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let piv = crate::linalg::rref(&mut a);
    if piv.len() < m || piv[m - 1] != m - 1 {
        return None;
    }
    // rows of [I | V^-1]
    Some(a.into_iter().map(|row| row[m..].to_vec()).collect())
}

fn pow_i(x: &BigRational, k: i64) -> BigRational {
    let p = num_traits::pow::pow(x.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

/// Reconstruct `φ_σ` on the exponent box `{-r..r}^n` from values on a tensor
/// grid, then verify on ten further points off the grid.
pub fn cellular_laurent(sigma: &CyclicPermutation, radius: i64) -> Result<LaurentPoly> {
    if !is_convergent(sigma) {
        return Err(Error::Invalid("permutation is not convergent".into()));
    }
    if radius < 0 {
        return Err(Error::Invalid("negative support radius".into()));
    }
    let n = sigma.size() - 3;
    let side = (2 * radius + 1) as usize;
    let count = side.pow(n as u32);
    let index = |mut idx: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let v = idx % side;
                idx /= side;
                v
            })
            .collect()
    };
    let mut grid = None;
    'shift: for shift in 0..64 {
        let nodes: Vec<Vec<BigRational>> = (0..n).map(|a| axis_nodes(a, side, shift)).collect();
        let mut values = Vec::with_capacity(count);
        for idx in 0..count {
            let x: Vec<BigRational> = index(idx).iter().enumerate().map(|(a, &p)| nodes[a][p].clone()).collect();
            match cellular_value(sigma, &x) {
                Some(v) => values.push(v),
                None => continue 'shift,
            }
        }
        grid = Some((nodes, values));
        break;
    }
    let (nodes, mut values) = grid.ok_or_else(|| Error::Interpolation("no admissible sample grid".into()))?;
    // apply V_a^-1 along each axis a
    for (a, axis) in nodes.iter().enumerate() {
        let inv = laurent_vandermonde_inverse(axis, radius).ok_or_else(|| Error::Interpolation("singular sample configuration".into()))?;
        let stride = side.pow(a as u32);
        let mut next = vec![BigRational::zero(); count];
        for idx in 0..count {
            let digit = (idx / stride) % side;
            let base = idx - digit * stride;
            let mut acc = BigRational::zero();
            for (p, c) in inv[digit].iter().enumerate() {
                acc += c * &values[base + p * stride];
            }
            next[idx] = acc;
        }
        values = next;
    }
    let terms = (0..count).map(|idx| (ExponentVector(index(idx).iter().map(|&d| d as i64 - radius).collect()), values[idx].clone()));
    let phi = LaurentPoly::from_terms(n, terms)?;
    let mut checked = 0;
    let mut k = 1000;
    while checked < 10 {
        let x: Vec<BigRational> = (0..n).map(|i| sample_value(k + 37 * i)).collect();
        k += 1;
        if let Some(v) = cellular_value(sigma, &x) {
            if phi.eval_rational(&x)? != v {
                return Err(Error::Interpolation(format!("held-out point disagrees; support radius {} too small", radius)));
            }
            checked += 1;
        }
        if k > 5000 {
            return Err(Error::Interpolation("no admissible held-out points".into()));
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::constant_term_powers;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn n1_head() {
        let e = n1_family(1);
        assert_eq!(e.phi, parse_laurent("-x1 + 3 - 2*x1^-1", 1).unwrap());
        assert_eq!(e.expected.constant.as_deref(), Some("log(2/1)"));
        assert_eq!(e.expected.r_phi.as_ref().unwrap().to_string(), "3 - 2√2");
        assert_eq!(n1_family(2).expected.r_phi.unwrap().to_string(), "5 - 2√6");
    }

    #[test]
    fn n1_legendre_oracle() {
        for b in 1..=5u64 {
            let a = 2 * b as i64 + 1;
            let seq = constant_term_powers(&n1_family(b).phi, 20);
            // (k+1) P_{k+1} = (2k+1) a P_k - k P_{k-1}
            let ar = BigRational::from_integer(a.into());
            let mut p = vec![BigRational::one(), ar.clone()];
            for k in 1..20i64 {
                let next = (BigRational::from_integer((2 * k + 1).into()) * &ar * &p[k as usize]
                    - BigRational::from_integer(k.into()) * &p[k as usize - 1])
                    / BigRational::from_integer((k + 1).into());
                p.push(next);
            }
            assert_eq!(seq.values, p[..=20].to_vec());
        }
    }

    #[test]
    fn catalog_shape() {
        let cat = builtin_catalog();
        assert!(cat.len() >= 7);
        for e in &cat {
            assert_eq!(e.phi.n(), e.n, "{}", e.name);
        }
        let apery = cat.iter().find(|e| e.name == "apery-zeta3").unwrap();
        assert_eq!(apery.r, Some(2));
        let e = cat.iter().find(|e| e.name == "zagier-E").unwrap();
        assert_eq!((e.expected.constant.as_deref(), e.expected.multiple.as_deref()), (Some("catalan"), Some("2")));
        let json = serde_json::to_string(&cat).unwrap();
        let back: Vec<CatalogEntry> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cat);
    }

    #[test]
    fn vz_small_cases() {
        let (psi2, _) = vz_polynomial(2);
        assert_eq!(psi2, parse_laurent("x1*x2 + 1 - x2", 2).unwrap());
        assert_eq!(vz_polynomial(1).0, LaurentPoly::one(1));
        let (_, phi2) = vz_polynomial(2);
        assert_eq!(constant_term_powers(&phi2, 3).values, ints(&[1, 3, 19, 147]));
        let (_, phi3) = vz_polynomial(3);
        assert_eq!(constant_term_powers(&phi3, 3).values, ints(&[1, 5, 73, 1445]));
        for n in 1..=6 {
            let (_, phi) = vz_polynomial(n);
            assert!(phi.exponent_bounds().iter().all(|&(lo, hi)| lo >= -1 && hi <= 1));
        }
    }

    #[test]
    fn convergence_windows() {
        assert!(!is_convergent(&CyclicPermutation::identity(5)));
        let sigma = CyclicPermutation::new(vec![5, 1, 2, 3, 4]).unwrap();
        assert!(!is_convergent(&sigma));
        let count = |n| CyclicPermutation::all(n).iter().filter(|s| is_convergent(s)).count();
        assert_eq!(count(5), 10);
        assert_eq!(count(6), 36);
        assert!(is_convergent(&CyclicPermutation::new(vec![1, 3, 5, 2, 4]).unwrap()));
        assert!(CyclicPermutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn dihedral_invariance() {
        for s in CyclicPermutation::all(6) {
            let c = is_convergent(&s);
            let mut rot = s.images.clone();
            rot.rotate_left(1);
            assert_eq!(is_convergent(&CyclicPermutation { images: rot }), c);
            let mut rev = s.images.clone();
            rev.reverse();
            assert_eq!(is_convergent(&CyclicPermutation { images: rev }), c);
        }
    }

    #[test]
    fn cellular_pentagon() {
        let sigma = CyclicPermutation::new(vec![1, 4, 2, 5, 3]).unwrap();
        let phi = cellular_laurent(&sigma, 1).unwrap();
        let (_, vz) = vz_polynomial(2);
        let neg = phi.monomial_substitute(&crate::laurent::SignedPermutation::identity(2)).unwrap();
        // φ_σ(-x) is the VZ polynomial
        let flipped = LaurentPoly::from_terms(
            2,
            neg.terms().map(|(e, c)| {
                let s: i64 = e.0.iter().sum();
                (e.clone(), if s % 2 == 0 { c.clone() } else { -c.clone() })
            }),
        )
        .unwrap();
        assert_eq!(flipped, vz);
        assert!(cellular_laurent(&CyclicPermutation::identity(5), 1).is_err());
    }
}
