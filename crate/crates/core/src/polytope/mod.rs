//! Newton polytopes and the polynomial-level screens run on them.

mod cyclotomic;
pub mod lattice;
mod mori;
mod steinberg;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::laurent::{ExponentVector, LaurentPoly};
use lattice::{dot, integer_coordinates, primitive, rational_kernel, rank, saturated_basis, sub};

pub use cyclotomic::{cyclotomic_poly, is_cyclotomic};
pub use mori::{quasi_effectivity_check, MoriData, QuasiEffectivity, QuasiVerdict};
pub use steinberg::{steinberg_classify, SteinbergClass};

/// Inequality `⟨normal, x⟩ >= -offset` with a primitive integral normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x) + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolytope {
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
    /// Affine equations `⟨a, x⟩ = b` cutting out the span when `dim < n`.
    pub equations: Vec<(Vec<i64>, i64)>,
    pub lattice_points: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub codim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: Vec<Vec<i64>>,
    pub anchor: Vec<i64>,
    /// Rows span the saturated lattice of the face, in Hermite normal form.
    pub basis: Vec<Vec<i64>>,
}

impl Face {
    /// Coordinates of a lattice point of the face in the face basis.
    pub fn local(&self, x: &[i64]) -> Option<Vec<i64>> {
        integer_coordinates(&self.basis, &sub(x, &self.anchor))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reflexivity {
    pub reflexive: bool,
    pub reason: Option<String>,
    pub dual_vertices: Vec<Vec<i64>>,
}

pub fn newton_polytope(phi: &LaurentPoly) -> NewtonPolytope {
    let pts: Vec<Vec<i64>> = phi.support().into_iter().map(|e| e.0).collect();
    NewtonPolytope::from_points(phi.n(), &pts)
}

impl NewtonPolytope {
    pub fn from_points(n: usize, points: &[Vec<i64>]) -> Self {
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return NewtonPolytope { n, dim: 0, vertices: vec![], facets: vec![], equations: vec![], lattice_points: vec![] };
        }
        let x0 = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts.iter().map(|p| sub(p, &x0)).collect();
        let dim = rank(&diffs);
        let equations: Vec<(Vec<i64>, i64)> = if dim < n {
            rational_kernel(&diffs, n).into_iter().map(|a| {
                let b = dot(&a, &x0);
                (a, b)
            }).collect()
        } else {
            vec![]
        };

        let (basis, local): (Vec<Vec<i64>>, Vec<Vec<i64>>) = if dim == n {
            let id = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            (id, pts.clone())
        } else {
            let b = saturated_basis(&diffs, n);
            let loc = diffs.iter().map(|d| integer_coordinates(&b, d).expect("point in span")).collect();
            (b, loc)
        };

        let local_facets = hull_facets(&local, dim);
        let vertices: Vec<Vec<i64>> = pts
            .iter()
            .zip(&local)
            .filter(|(_, y)| {
                if dim == 0 {
                    return true;
                }
                let tight: Vec<Vec<i64>> =
                    local_facets.iter().filter(|f| f.value(y) == 0).map(|f| f.normal.clone()).collect();
                rank(&tight) == dim
            })
            .map(|(p, _)| p.clone())
            .collect();

        let facets: Vec<Facet> = if dim == n {
            local_facets
        } else {
            let mut fs: Vec<Facet> = local_facets
                .iter()
                .map(|f| {
                    let w = lift_normal(&basis, &f.normal, n);
                    let offset = -pts.iter().map(|p| dot(&w, p)).min().unwrap();
                    Facet { normal: w, offset }
                })
                .collect();
            fs.sort();
            fs
        };

        let mut poly = NewtonPolytope { n, dim, vertices, facets, equations, lattice_points: vec![] };
        poly.lattice_points = poly.enumerate_lattice_points(&pts);
        poly
    }

    fn enumerate_lattice_points(&self, pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.n).map(|i| pts.iter().map(|p| p[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.n).map(|i| pts.iter().map(|p| p[i]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if self.contains(&x) {
                out.push(x.clone());
            }
            let mut i = self.n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
            }
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        if self.dim == 0 {
            return x == self.vertices[0].as_slice();
        }
        self.equations.iter().all(|(a, b)| dot(a, x) == *b) && self.facets.iter().all(|f| f.value(x) >= 0)
    }

    /// Interior in Z^n; empty unless the polytope is full-dimensional.
    pub fn is_interior(&self, x: &[i64]) -> bool {
        self.dim == self.n && self.n > 0 && self.facets.iter().all(|f| f.value(x) > 0)
    }

    pub fn interior_lattice_points(&self) -> Vec<Vec<i64>> {
        self.lattice_points.iter().filter(|p| self.is_interior(p)).cloned().collect()
    }

    pub fn has_unique_interior_point(&self) -> bool {
        let inner = self.interior_lattice_points();
        inner.len() == 1 && inner[0].iter().all(|&v| v == 0)
    }

    pub fn is_reflexive(&self) -> Reflexivity {
        let origin = vec![0; self.n];
        if !self.is_interior(&origin) {
            return Reflexivity { reflexive: false, reason: Some("origin not interior".into()), dual_vertices: vec![] };
        }
        if let Some(f) = self.facets.iter().find(|f| f.offset != 1) {
            return Reflexivity {
                reflexive: false,
                reason: Some(format!("facet {:?} has offset {}", f.normal, f.offset)),
                dual_vertices: vec![],
            };
        }
        let mut dual: Vec<Vec<i64>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        dual.sort();
        Reflexivity { reflexive: true, reason: None, dual_vertices: dual }
    }

    /// All faces of the given codimension (relative to the ambient space).
    pub fn faces(&self, codim: usize) -> Vec<Face> {
        if codim == 0 || codim > self.n || self.dim + codim < self.n {
            return vec![];
        }
        let target = self.n - codim;
        let mut sets: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let facet_sets: Vec<Vec<Vec<i64>>> = self
            .facets
            .iter()
            .map(|f| self.vertices.iter().filter(|v| f.value(v) == 0).cloned().collect())
            .collect();
        let mut frontier: Vec<Vec<Vec<i64>>> = facet_sets.clone();
        if self.dim < self.n {
            frontier.push(self.vertices.clone());
        }
        while let Some(s) = frontier.pop() {
            if s.is_empty() || !sets.insert(s.clone()) {
                continue;
            }
            for f in &facet_sets {
                let inter: Vec<Vec<i64>> = s.iter().filter(|v| f.contains(v)).cloned().collect();
                if !inter.is_empty() && inter.len() < s.len() && !sets.contains(&inter) {
                    frontier.push(inter);
                }
            }
        }
        let mut out = Vec::new();
        for verts in sets {
            let anchor = verts[0].clone();
            let diffs: Vec<Vec<i64>> = verts.iter().map(|v| sub(v, &anchor)).collect();
            if rank(&diffs) != target {
                continue;
            }
            let tight: Vec<&Facet> =
                self.facets.iter().filter(|f| verts.iter().all(|v| f.value(v) == 0)).collect();
            let lattice_points: Vec<Vec<i64>> = self
                .lattice_points
                .iter()
                .filter(|p| tight.iter().all(|f| f.value(p) == 0))
                .cloned()
                .collect();
            let basis = saturated_basis(&diffs, self.n);
            out.push(Face { codim, vertices: verts, lattice_points, anchor, basis });
        }
        out
    }
}

/// Supporting hyperplanes of a full-dimensional point set in Z^k, found as
/// hyperplanes through k-subsets that leave every point on one side.
fn hull_facets(pts: &[Vec<i64>], k: usize) -> Vec<Facet> {
    if k == 0 {
        return vec![];
    }
    let mut found: BTreeSet<Facet> = BTreeSet::new();
    let mut idx: Vec<usize> = (0..k).collect();
    let m = pts.len();
    if m < k {
        return vec![];
    }
    loop {
        let base = &pts[idx[0]];
        let diffs: Vec<Vec<i64>> = idx[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        let ker = rational_kernel(&diffs, k);
        if ker.len() == 1 {
            let nu = &ker[0];
            let s = dot(nu, base);
            let vals: Vec<i64> = pts.iter().map(|p| dot(nu, p)).collect();
            if vals.iter().all(|&v| v >= s) {
                found.insert(Facet { normal: nu.clone(), offset: -s });
            } else if vals.iter().all(|&v| v <= s) {
                found.insert(Facet { normal: nu.iter().map(|x| -x).collect(), offset: s });
            }
        }
        // next k-subset
        let mut i = k;
        loop {
            if i == 0 {
                return found.into_iter().collect();
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Ambient normal `w` with `⟨w, b_i⟩ = nu_i` for the basis rows `b_i`,
/// scaled to a primitive integer vector.
fn lift_normal(basis: &[Vec<i64>], nu: &[i64], n: usize) -> Vec<i64> {
    let mut m: Vec<Vec<BigRational>> = basis
        .iter()
        .zip(nu)
        .map(|(b, &v)| {
            let mut row: Vec<BigRational> = b.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.push(BigRational::from_integer(v.into()));
            row
        })
        .collect();
    let piv = crate::linalg::rref(&mut m);
    let mut w = vec![BigRational::zero(); n];
    for (row, &p) in m.iter().zip(&piv) {
        w[p] = row[n].clone();
    }
    primitive(&w)
}

/// Restriction of `phi` to each codimension-`codim` face, in face coordinates.
pub fn face_polynomials(phi: &LaurentPoly, poly: &NewtonPolytope, codim: usize) -> Vec<(Face, LaurentPoly)> {
    let mut out = Vec::new();
    for face in poly.faces(codim) {
        let k = face.basis.len();
        if k == 0 {
            continue;
        }
        let mut terms = Vec::new();
        for (e, c) in phi.terms() {
            if face.lattice_points.contains(&e.0) {
                let y = face.local(&e.0).expect("term on face lattice");
                terms.push((ExponentVector(y), c.clone()));
            }
        }
        let fp = LaurentPoly::from_terms(k, terms).expect("dimension");
        out.push((face, fp));
    }
    out
}

/// Whether `phi(-x)` has only positive coefficients.
pub fn positivity_check(phi: &LaurentPoly) -> bool {
    !phi.is_zero()
        && phi.terms().all(|(e, c)| {
            let odd = e.0.iter().map(|v| v.rem_euclid(2)).sum::<i64>() % 2 == 1;
            if odd {
                c.is_negative()
            } else {
                c.is_positive()
            }
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub codim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub polynomial: String,
    pub classification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
    pub lattice_point_count: usize,
    pub reflexive: bool,
    pub reflexive_reason: Option<String>,
    pub unique_interior_point: bool,
    pub positive_at_minus_x: bool,
    pub faces: Vec<FaceReport>,
}

/// Edge polynomials are screened for cyclotomicity and 2-faces against the
/// Steinberg catalog.
pub fn polytope_report(phi: &LaurentPoly) -> PolytopeReport {
    let poly = newton_polytope(phi);
    let refl = poly.is_reflexive();
    let mut faces = Vec::new();
    let n = phi.n();
    let mut by_codim: BTreeMap<usize, Vec<(Face, LaurentPoly)>> = BTreeMap::new();
    for codim in 1..n {
        by_codim.insert(codim, face_polynomials(phi, &poly, codim));
    }
    for (_, list) in by_codim {
        for (face, fp) in list {
            let classification = match fp.n() {
                1 => match univariate_coeffs(&fp) {
                    Some(c) if is_cyclotomic(&c).unwrap_or(false) => "cyclotomic".to_string(),
                    Some(_) => "not-cyclotomic".to_string(),
                    None => "not-integral".to_string(),
                },
                2 => format!("{:?}", steinberg_classify(&fp)),
                _ => "unscreened".to_string(),
            };
            faces.push(FaceReport { codim: face.codim, vertices: face.vertices.clone(), polynomial: fp.to_string(), classification });
        }
    }
    PolytopeReport {
        n,
        dim: poly.dim,
        vertices: poly.vertices.clone(),
        facets: poly.facets.clone(),
        lattice_point_count: poly.lattice_points.len(),
        reflexive: refl.reflexive,
        reflexive_reason: refl.reason,
        unique_interior_point: poly.has_unique_interior_point(),
        positive_at_minus_x: positivity_check(phi),
        faces,
    }
}

/// Integer coefficient list (increasing degree, monomial factor removed)
/// of a univariate Laurent polynomial.
pub fn univariate_coeffs(p: &LaurentPoly) -> Option<Vec<num_bigint::BigInt>> {
    if p.n() != 1 || p.is_zero() || !p.has_integer_coefficients() {
        return None;
    }
    let lo = p.terms().next()?.0 .0[0];
    let hi = p.terms().next_back()?.0 .0[0];
    let mut c = vec![num_bigint::BigInt::zero(); (hi - lo + 1) as usize];
    for (e, v) in p.terms() {
        c[(e.0[0] - lo) as usize] = v.to_integer();
    }
    Some(c)
}
