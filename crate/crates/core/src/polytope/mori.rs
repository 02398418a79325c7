use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generators `ℓ^(k) = (ℓ_0; ℓ_1..ℓ_N)` of the relation lattice of the
/// points `v^(1)..v^(N)`, with `ℓ_0 = -Σ_{i>=1} ℓ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriData {
    pub points: Vec<Vec<i64>>,
    pub generators: Vec<Vec<i64>>,
}

impl MoriData {
    pub fn new(points: Vec<Vec<i64>>, generators: Vec<Vec<i64>>) -> Result<Self> {
        let m = MoriData { points, generators };
        m.validate()?;
        Ok(m)
    }

    /// Build generators from `ℓ_1..ℓ_N`, filling in `ℓ_0`.
    pub fn from_relations(points: Vec<Vec<i64>>, relations: &[Vec<i64>]) -> Result<Self> {
        let generators = relations
            .iter()
            .map(|r| {
                let mut g = vec![-r.iter().sum::<i64>()];
                g.extend_from_slice(r);
                g
            })
            .collect();
        MoriData::new(points, generators)
    }

    pub fn validate(&self) -> Result<()> {
        let npts = self.points.len();
        let dim = self.points.first().map_or(0, |p| p.len());
        for (k, g) in self.generators.iter().enumerate() {
            if g.len() != npts + 1 {
                return Err(Error::DimensionMismatch { expected: npts + 1, found: g.len() });
            }
            if g[0] != -g[1..].iter().sum::<i64>() {
                return Err(Error::Invalid(format!("generator {} violates l_0 = -sum l_i", k)));
            }
            for c in 0..dim {
                let s: i64 = self.points.iter().zip(&g[1..]).map(|(p, l)| p[c] * l).sum();
                if s != 0 {
                    return Err(Error::Invalid(format!("generator {} is not a relation among the points", k)));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `ℓ(n) = Σ_k n_k ℓ^(k)`.
    pub fn combine(&self, n: &[u64]) -> Vec<i64> {
        let len = self.points.len() + 1;
        let mut out = vec![0i64; len];
        for (nk, g) in n.iter().zip(&self.generators) {
            for i in 0..len {
                out[i] += *nk as i64 * g[i];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuasiVerdict {
    AllEffective,
    QuasiEffective,
    Fails(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiEffectivity {
    pub verdict: QuasiVerdict,
    /// First `n` violating `Σ o_i ℓ_i(n) >= |ℓ(n)|⁺`, when offsets were given.
    pub degree_witness: Option<Vec<u64>>,
    pub degree_checked: bool,
}

/// Exhaustive check over `n ∈ [0, bound]^M` in lexicographic order.
pub fn quasi_effectivity_check(mori: &MoriData, bound: u64, offsets: Option<&[i64]>) -> Result<QuasiEffectivity> {
    mori.validate()?;
    if let Some(o) = offsets {
        if o.len() != mori.points.len() {
            return Err(Error::DimensionMismatch { expected: mori.points.len(), found: o.len() });
        }
    }
    let m = mori.rank();
    let mut n = vec![0u64; m];
    let mut any_negative = false;
    let mut degree_witness = None;
    loop {
        let l = mori.combine(&n);
        let negatives = l[1..].iter().filter(|&&v| v < 0).count();
        if negatives > 1 {
            return Ok(QuasiEffectivity {
                verdict: QuasiVerdict::Fails(n),
                degree_witness,
                degree_checked: offsets.is_some(),
            });
        }
        any_negative |= negatives == 1;
        if let (Some(o), None) = (offsets, &degree_witness) {
            let lhs: i64 = o.iter().zip(&l[1..]).map(|(a, b)| a * b).sum();
            let plus: i64 = l[1..].iter().filter(|&&v| v > 0).sum();
            if lhs < plus {
                degree_witness = Some(n.clone());
            }
        }
        let mut i = m;
        loop {
            if i == 0 {
                let verdict = if any_negative { QuasiVerdict::QuasiEffective } else { QuasiVerdict::AllEffective };
                return Ok(QuasiEffectivity { verdict, degree_witness, degree_checked: offsets.is_some() });
            }
            i -= 1;
            if n[i] < bound {
                n[i] += 1;
                break;
            }
            n[i] = 0;
        }
    }
}
