//! Small-integer lattice helpers: rank, kernels, Hermite normal form.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{nullspace, rref};

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect()
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = to_q(rows);
    rref(&mut m).len()
}

/// Primitive integer vector along a rational vector.
pub fn primitive(v: &[BigRational]) -> Vec<i64> {
    let den = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> =
        v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| if g.is_zero() { 0 } else { (x / &g).to_i64().expect("small lattice entry") })
        .collect()
}

pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Primitive integer basis of the rational nullspace of `rows`.
pub fn rational_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    }
    nullspace(&to_q(rows), n).iter().map(|v| primitive(v)).collect()
}

/// Basis of `{x ∈ Z^n : A x = 0}` by unimodular column reduction.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, p: usize, c: usize, coef: [i128; 4]| {
        // (col p, col c) <- (a p + b c, d p + e c)
        let [a, b, d, e] = coef;
        for row in m.iter_mut().chain(u.iter_mut()) {
            let (x, y) = (row[p], row[c]);
            row[p] = a * x + b * y;
            row[c] = d * x + e * y;
        }
    };
    let mut p = 0;
    for i in 0..m.len() {
        if p >= n {
            break;
        }
        for c in p + 1..n {
            let (x, y) = (m[i][p], m[i][c]);
            if y == 0 {
                continue;
            }
            let eg = x.extended_gcd(&y);
            // [x y] [s -y/g; t x/g] = [g 0], determinant 1
            col_op(&mut m, &mut u, p, c, [eg.x, eg.y, -y / eg.gcd, x / eg.gcd]);
        }
        if m[i][p] != 0 {
            p += 1;
        }
    }
    (p..n)
        .map(|c| (0..n).map(|r| i64::try_from(u[r][c]).expect("kernel entry")).collect())
        .collect()
}

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return vec![];
    }
    let n = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        loop {
            let Some(piv) = (r..m.len())
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].abs())
            else {
                break;
            };
            m.swap(r, piv);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = Integer::div_floor(&m[i][c], &m[r][c]);
                    for j in 0..n {
                        m[i][j] -= q * m[r][j];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for v in m[r].iter_mut() {
                *v = -*v;
            }
        }
        for i in 0..r {
            let q = Integer::div_floor(&m[i][c], &m[r][c]);
            if q != 0 {
                for j in 0..n {
                    m[i][j] -= q * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.iter()
        .map(|row| row.iter().map(|&v| i64::try_from(v).expect("hnf entry")).collect())
        .collect()
}

/// Canonical basis of the lattice `span_Q(diffs) ∩ Z^n`.
pub fn saturated_basis(diffs: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let r = rank(diffs);
    if r == 0 {
        return vec![];
    }
    let orth = if r == n { vec![] } else { rational_kernel(diffs, n) };
    let kernel = integer_kernel(&orth, n);
    hnf_rows(&kernel)
}

/// Coordinates `y` with `Σ y_i basis_i = v`, if `v` lies in the span.
pub fn coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = v.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> =
                (0..k).map(|i| BigRational::from_integer(basis[i][j].into())).collect();
            row.push(BigRational::from_integer(v[j].into()));
            row
        })
        .collect();
    let piv = rref(&mut m);
    if piv.contains(&k) {
        return None;
    }
    let mut y = vec![BigRational::zero(); k];
    for (row, &p) in m.iter().zip(&piv) {
        y[p] = row[k].clone();
    }
    Some(y)
}

pub fn integer_coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    coordinates(basis, v)?
        .iter()
        .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_negative_first(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|x| x.is_negative())
}
