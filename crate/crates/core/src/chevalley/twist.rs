//! σ-eigenspaces `L_a = ker(σ - q^a)`, the principal `sl_2` of `L_0`, and
//! twisted exponents.

use std::collections::BTreeMap;

use super::ChevalleyAlgebra;
use crate::error::{Error, Result};
use crate::folding::{fold, DiagramAutomorphism, FoldedData};
use crate::lie::LieAlgebra;
use crate::linalg::{self, SparseVec};
use crate::rootdata::CartanType;
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct Eigenspace<F> {
    pub label: usize,
    /// Coefficient columns in the Chevalley basis.
    pub basis: Vec<Vec<F>>,
    /// `h_0`-weights in `L_0` simple-root coordinates (orbit order).
    pub weights: Vec<Vec<i64>>,
    /// Index of each basis vector in the concatenated eigenbasis.
    pub global: Vec<usize>,
}

impl<F> Eigenspace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Principal triple in `L_0`, in eigenbasis coordinates.
#[derive(Clone, Debug)]
pub struct PrincipalTriple<F> {
    pub h: SparseVec<F>,
    pub e: SparseVec<F>,
    pub f: SparseVec<F>,
}

/// A simple Lie algebra with a diagram automorphism, re-expressed in a basis
/// of simultaneous `σ`/`h_0` eigenvectors.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra<F> {
    pub chevalley: ChevalleyAlgebra,
    pub automorphism: DiagramAutomorphism,
    pub folded: FoldedData,
    pub k: usize,
    pub eigenspaces: Vec<Eigenspace<F>>,
    /// Structure constants in the concatenated eigenbasis `L_0, L_1, ...`.
    pub lie: LieAlgebra<F>,
    /// `(label a, weight)` per eigenbasis vector.
    pub tags: Vec<(usize, Vec<i64>)>,
}

fn height(c: &[i64]) -> i64 {
    c.iter().sum()
}

impl<F: Field> TwistedAlgebra<F> {
    /// Builds the algebra of `a.base` with the lifted automorphism and splits
    /// it into eigenspaces. The field must contain the `k`-th roots of unity.
    pub fn new(a: &DiagramAutomorphism) -> Result<Self> {
        let alg = super::build_with_automorphism(a)?;
        Self::from_chevalley(alg)
    }

    /// Untwisted: `σ = id`, a single eigenspace.
    pub fn untwisted(t: CartanType) -> Result<Self> {
        Self::new(&DiagramAutomorphism::identity(t))
    }

    pub fn from_chevalley(alg: ChevalleyAlgebra) -> Result<Self> {
        let sigma = alg
            .sigma
            .clone()
            .ok_or_else(|| Error::InvalidArgument("no automorphism attached".into()))?;
        let a = sigma.automorphism.clone();
        let k = a.order_k;
        let q = F::primitive_root(k as u32).ok_or_else(|| {
            Error::Unsupported(format!(
                "field {} has no primitive {k}-th root of unity",
                F::field_name()
            ))
        })?;
        let folded = fold(&alg.roots, &a)?;
        let n = alg.dim();
        let l0 = folded.rank();
        // restricted weight of each Chevalley basis vector
        let weight_of = |b: usize| -> Vec<i64> {
            let root = alg.root_of(b);
            let mut c = vec![0i64; l0];
            for (i, x) in root.iter().enumerate() {
                c[folded.orbit_of(i)] += x;
            }
            c
        };
        let mut blocks: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
        let mut block_index: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for b in 0..n {
            let w = weight_of(b);
            match block_index.get(&w) {
                Some(&i) => blocks[i].1.push(b),
                None => {
                    block_index.insert(w.clone(), blocks.len());
                    blocks.push((w, vec![b]));
                }
            }
        }
        let sig: Vec<SparseVec<F>> = sigma
            .columns
            .iter()
            .map(|c| c.iter().map(|(i, x)| (*i, F::from_rational(x))).collect())
            .collect();
        let mut spaces: Vec<Eigenspace<F>> = (0..k)
            .map(|label| Eigenspace {
                label,
                basis: Vec::new(),
                weights: Vec::new(),
                global: Vec::new(),
            })
            .collect();
        let mut qa = F::one();
        for space in spaces.iter_mut() {
            for (w, members) in &blocks {
                let local: BTreeMap<usize, usize> =
                    members.iter().enumerate().map(|(i, &b)| (b, i)).collect();
                // rows of (σ - q^a) restricted to the block: row r = output coordinate
                let m = members.len();
                let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); m];
                for (col, &b) in members.iter().enumerate() {
                    for (out, x) in &sig[b] {
                        let r = *local.get(out).ok_or_else(|| {
                            Error::Consistency("σ does not preserve h_0-weight blocks".into())
                        })?;
                        rows[r].push((col, x.clone()));
                    }
                    rows[col].push((col, -qa.clone()));
                }
                let rows: Vec<SparseVec<F>> = rows.into_iter().map(linalg::collect_sparse).collect();
                for v in linalg::kernel(&rows, m) {
                    let mut dense = vec![F::zero(); n];
                    for (i, x) in v {
                        dense[members[i]] = x;
                    }
                    space.basis.push(dense);
                    space.weights.push(w.clone());
                }
            }
            qa *= q.clone();
        }
        let total: usize = spaces.iter().map(|s| s.dim()).sum();
        if total != n {
            return Err(Error::Consistency(format!(
                "eigenspace dimensions sum to {total}, expected {n}"
            )));
        }
        let mut names = Vec::with_capacity(n);
        let mut basis = Vec::with_capacity(n);
        let mut tags = Vec::with_capacity(n);
        for s in spaces.iter_mut() {
            let mut counter: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            for (v, w) in s.basis.iter().zip(&s.weights) {
                s.global.push(basis.len());
                names.push(eigen_name(&alg, v, s.label, w, &mut counter, k));
                basis.push(v.clone());
                tags.push((s.label, w.clone()));
            }
        }
        let lie = alg
            .lie
            .map_scalars(|x| F::from_rational(x))
            .restrict(names, &basis)?;
        // [L_a, L_b] ⊆ L_{a+b}
        for i in 0..n {
            for j in 0..n {
                for (t, _) in lie.bracket_basis(i, j) {
                    if tags[*t].0 != (tags[i].0 + tags[j].0) % k {
                        return Err(Error::Consistency("eigenspace grading violated".into()));
                    }
                }
            }
        }
        Ok(TwistedAlgebra {
            chevalley: alg,
            automorphism: a,
            folded,
            k,
            eigenspaces: spaces,
            lie,
            tags,
        })
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    /// Rank of `L_0`.
    pub fn l0(&self) -> usize {
        self.folded.rank()
    }

    /// `l_a = dim(h ∩ L_a)`.
    pub fn cartan_dim(&self, a: usize) -> usize {
        self.eigenspaces[a]
            .weights
            .iter()
            .zip(&self.eigenspaces[a].basis)
            .filter(|(w, v)| w.iter().all(|&x| x == 0) && {
                let l = self.chevalley.rank();
                v.iter().enumerate().all(|(i, x)| i < l || x.is_zero())
            })
            .count()
    }

    /// Global index of the `L_0` vector of weight `+α_J` (or `-α_J`).
    fn simple_vector(&self, j: usize, sign: i64) -> Result<usize> {
        let s = &self.eigenspaces[0];
        let mut want = vec![0i64; self.l0()];
        want[j] = sign;
        let hits: Vec<usize> = s
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w == want)
            .map(|(i, _)| s.global[i])
            .collect();
        if hits.len() != 1 {
            return Err(Error::Consistency(format!(
                "expected one L_0 vector of weight {want:?}, found {}",
                hits.len()
            )));
        }
        Ok(hits[0])
    }

    pub fn principal_sl2(&self) -> Result<PrincipalTriple<F>> {
        let l0 = self.l0();
        let lie = &self.lie;
        let e_simple: Vec<usize> = (0..l0).map(|j| self.simple_vector(j, 1)).collect::<Result<_>>()?;
        let f_simple: Vec<usize> = (0..l0).map(|j| self.simple_vector(j, -1)).collect::<Result<_>>()?;
        let cartan: Vec<usize> = self.eigenspaces[0]
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.iter().all(|&x| x == 0))
            .map(|(i, _)| self.eigenspaces[0].global[i])
            .collect();
        // λ[m][K]: [h_m, E_K] = λ E_K
        let coef = |v: &SparseVec<F>, idx: usize| -> F {
            v.iter().find(|(i, _)| *i == idx).map(|(_, x)| x.clone()).unwrap_or_else(F::zero)
        };
        let columns: Vec<Vec<F>> = cartan
            .iter()
            .map(|&m| {
                e_simple
                    .iter()
                    .map(|&ek| coef(lie.bracket_basis(m, ek), ek))
                    .collect()
            })
            .collect();
        let target = vec![F::from_i64(2); l0];
        let x = linalg::solve_columns(&columns, &target)
            .ok_or_else(|| Error::Consistency("no Cartan element with α_J(h) = 2".into()))?;
        let h: SparseVec<F> = linalg::collect_sparse(cartan.iter().zip(x).map(|(&m, c)| (m, c)));
        let e: SparseVec<F> = e_simple.iter().map(|&i| (i, F::one())).collect();
        let n = self.dim();
        let cols: Vec<Vec<F>> = f_simple
            .iter()
            .map(|&fj| linalg::to_dense(&lie.bracket(&e, &vec![(fj, F::one())]), n))
            .collect();
        let y = linalg::solve_columns(&cols, &linalg::to_dense(&h, n))
            .ok_or_else(|| Error::Consistency("[e, f] = h has no solution".into()))?;
        let f: SparseVec<F> = linalg::collect_sparse(f_simple.iter().zip(y).map(|(&j, c)| (j, c)));
        let two = F::from_i64(2);
        if lie.bracket(&h, &e) != linalg::scale(&e, &two)
            || lie.bracket(&h, &f) != linalg::scale(&f, &-two)
            || lie.bracket(&e, &f) != h
        {
            return Err(Error::Consistency("principal triple relations fail".into()));
        }
        Ok(PrincipalTriple { h, e, f })
    }

    /// `ad(h)/2` eigenvalue of each eigenbasis vector, computed by bracketing.
    pub fn principal_degrees(&self) -> Result<Vec<i64>> {
        let t = self.principal_sl2()?;
        let mut out = Vec::with_capacity(self.dim());
        for b in 0..self.dim() {
            let v = self.lie.bracket_with_basis(&t.h, b);
            let lam = match v.as_slice() {
                [] => F::zero(),
                [(i, x)] if *i == b => x.clone(),
                _ => {
                    return Err(Error::Consistency(format!(
                        "{} is not an ad(h) eigenvector",
                        self.lie.name(b)
                    )))
                }
            };
            let half = lam / F::from_i64(2);
            let d = half.to_i64().ok_or_else(|| {
                Error::Consistency(format!("non-integral ad(h)/2 eigenvalue on {}", self.lie.name(b)))
            })?;
            if d != height(&self.tags[b].1) {
                return Err(Error::Consistency("principal degree differs from height".into()));
            }
            out.push(d);
        }
        Ok(out)
    }

    /// Exponents of each `L_a`: `m` occurs `dim L_a^{(m)} - dim L_a^{(m+1)}` times.
    pub fn twisted_exponents(&self) -> Result<Vec<Vec<usize>>> {
        let deg = self.principal_degrees()?;
        let mut out = Vec::with_capacity(self.k);
        for s in &self.eigenspaces {
            let top = s.global.iter().map(|&g| deg[g]).max().unwrap_or(0).max(0) as usize;
            let count = |m: usize| s.global.iter().filter(|&&g| deg[g] == m as i64).count();
            let mut ex = Vec::new();
            for m in 0..=top {
                let (a, b) = (count(m), count(m + 1));
                if b > a {
                    return Err(Error::Consistency(format!(
                        "negative exponent multiplicity at m = {m} in L_{}",
                        s.label
                    )));
                }
                ex.extend(std::iter::repeat_n(m, a - b));
            }
            out.push(ex);
        }
        Ok(out)
    }

    /// Highest `h_0`-weight of `L_{1 mod k}` (the highest root when `k = 1`),
    /// by height.
    pub fn highest_weight_of_l1(&self) -> Vec<i64> {
        let s = &self.eigenspaces[1 % self.k];
        s.weights
            .iter()
            .max_by_key(|w| (height(w), (*w).clone()))
            .cloned()
            .unwrap_or_default()
    }
}

fn eigen_name<F: Field>(
    alg: &ChevalleyAlgebra,
    v: &[F],
    label: usize,
    w: &[i64],
    counter: &mut BTreeMap<Vec<i64>, usize>,
    k: usize,
) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == F::one() {
        return alg.lie.name(nz[0]).to_string();
    }
    let c = counter.entry(w.to_vec()).or_insert(0);
    *c += 1;
    let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    if k == 1 {
        format!("x[{}]#{}", ws.join(","), c)
    } else {
        format!("L{label}[{}]#{}", ws.join(","), c)
    }
}
