//! The defining representation of `sl_{n+1}` and the invariant forms
//! `tr(x^d)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::twist::TwistedAlgebra;
use super::ChevalleyAlgebra;
use crate::error::{Error, Result};
use crate::lie::{extend_from_generators, LieAlgebra};
use crate::rootdata::Series;
use crate::scalar::Field;
use crate::Q;

pub type Matrix<F> = Vec<Vec<F>>;

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let mut out = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += a[i][k].clone() * b[k][j].clone();
                }
            }
        }
    }
    out
}

fn mat_comm<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.into_iter()
        .zip(ba)
        .map(|(r, s)| r.into_iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn trace<F: Field>(a: &Matrix<F>) -> F {
    (0..a.len()).fold(F::zero(), |acc, i| acc + a[i][i].clone())
}

/// `e_i ↦ E_{i,i+1}`, `f_i ↦ E_{i+1,i}`, extended through brackets; the
/// homomorphism property is checked on all basis pairs.
pub fn defining_representation(alg: &ChevalleyAlgebra) -> Result<Vec<Matrix<Q>>> {
    if alg.cartan_type.series != Series::A {
        return Err(Error::Unsupported(format!(
            "defining representation only realised for type A, not {}",
            alg.cartan_type
        )));
    }
    let l = alg.rank();
    let n = l + 1;
    let unit = |i: usize, j: usize| {
        let mut m = vec![vec![Q::zero(); n]; n];
        m[i][j] = Q::one();
        m
    };
    let mut gens: Vec<Matrix<Q>> = (0..l).map(|i| unit(i, i + 1)).collect();
    gens.extend((0..l).map(|i| unit(i + 1, i)));
    let mats = extend_from_generators(&alg.recipes, &gens, mat_comm, |m, c| {
        m.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect()
    });
    check_rep(&alg.lie, &mats)?;
    Ok(mats)
}

fn combine<F: Field>(mats: &[Matrix<F>], v: &[(usize, F)]) -> Matrix<F> {
    let n = mats.first().map(|m| m.len()).unwrap_or(0);
    let mut out = vec![vec![F::zero(); n]; n];
    for (i, c) in v {
        for r in 0..n {
            for s in 0..n {
                if !mats[*i][r][s].is_zero() {
                    out[r][s] += c.clone() * mats[*i][r][s].clone();
                }
            }
        }
    }
    out
}

fn check_rep<F: Field>(lie: &LieAlgebra<F>, mats: &[Matrix<F>]) -> Result<()> {
    for i in 0..lie.dim() {
        for j in i + 1..lie.dim() {
            if combine(mats, lie.bracket_basis(i, j)) != mat_comm(&mats[i], &mats[j]) {
                return Err(Error::Consistency(format!(
                    "representation fails on [{}, {}]",
                    lie.name(i),
                    lie.name(j)
                )));
            }
        }
    }
    Ok(())
}

/// Defining-representation matrices of the eigenbasis, for type `A`.
pub fn eigen_matrices<F: Field>(tw: &TwistedAlgebra<F>) -> Option<Vec<Matrix<F>>> {
    let mats = defining_representation(&tw.chevalley).ok()?;
    let mats: Vec<Matrix<F>> = mats
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(F::from_rational).collect()).collect())
        .collect();
    let out = tw
        .eigenspaces
        .iter()
        .flat_map(|s| s.basis.iter())
        .map(|v| {
            let sparse: Vec<(usize, F)> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect();
            combine(&mats, &sparse)
        })
        .collect();
    Some(out)
}

/// `x ↦ tr(x^d)` on a Lie algebra with matrices for each basis vector.
#[derive(Clone, Debug)]
pub struct TraceForm<F> {
    pub degree: usize,
    pub matrices: Vec<Matrix<F>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl<F: Field> TraceForm<F> {
    /// `tr(x_{b_1} ⋯ x_{b_d})`.
    pub fn trace_of_product(&self, args: &[usize]) -> F {
        let mut m = self.matrices[args[0]].clone();
        for &b in &args[1..] {
            m = mat_mul(&m, &self.matrices[b]);
        }
        trace(&m)
    }

    /// Symmetrised form `Σ_π tr(x_{π(1)} ⋯ x_{π(d)}) / d!`.
    pub fn polarization(&self, args: &[usize]) -> F {
        let perms = permutations(args.len());
        let mut acc = F::zero();
        for p in &perms {
            let seq: Vec<usize> = p.iter().map(|&i| args[i]).collect();
            acc += self.trace_of_product(&seq);
        }
        acc / F::from_i64(perms.len() as i64)
    }

    /// Coefficients of `tr((Σ_b y_b x_b)^d)` as a polynomial in the `y_b`,
    /// keyed by sorted index multisets.
    pub fn polynomial(&self) -> BTreeMap<Vec<usize>, F> {
        let n = self.matrices.len();
        let live: Vec<usize> = (0..n)
            .filter(|&b| self.matrices[b].iter().any(|r| r.iter().any(|x| !x.is_zero())))
            .collect();
        let mut out: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        let mut seq = vec![0usize; self.degree];
        fn go<F: Field>(
            f: &TraceForm<F>,
            live: &[usize],
            seq: &mut Vec<usize>,
            pos: usize,
            out: &mut BTreeMap<Vec<usize>, F>,
        ) {
            if pos == seq.len() {
                let t = f.trace_of_product(seq);
                if !t.is_zero() {
                    let mut key = seq.clone();
                    key.sort_unstable();
                    *out.entry(key).or_insert_with(F::zero) += t;
                }
                return;
            }
            for &b in live {
                seq[pos] = b;
                go(f, live, seq, pos + 1, out);
            }
        }
        go(self, &live, &mut seq, 0, &mut out);
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `Σ_i form(x_1, …, [y, x_i], …, x_d) = 0` for all basis `y` and all
    /// sorted basis tuples.
    pub fn check_invariance(&self, lie: &LieAlgebra<F>) -> Result<()> {
        let n = lie.dim();
        let d = self.degree;
        let mut tuple = vec![0usize; d];
        loop {
            for y in 0..n {
                let mut acc = F::zero();
                for i in 0..d {
                    for (t, c) in lie.bracket_basis(y, tuple[i]) {
                        let mut args = tuple.clone();
                        args[i] = *t;
                        acc += c.clone() * self.polarization(&args);
                    }
                }
                if !acc.is_zero() {
                    return Err(Error::Consistency(format!(
                        "trace form of degree {d} not invariant under {}",
                        lie.name(y)
                    )));
                }
            }
            // next non-decreasing tuple
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                if tuple[i] + 1 < n {
                    let v = tuple[i] + 1;
                    for t in tuple.iter_mut().skip(i) {
                        *t = v;
                    }
                    break;
                }
            }
        }
    }

    /// `λ` with `P(σ x) = λ P(x)` for the polynomial `P`, if `P` is a
    /// `σ`-eigenvector. `sigma` gives sparse column images.
    pub fn sigma_eigenvalue(&self, sigma: &[Vec<(usize, F)>]) -> Option<F> {
        let pulled = TraceForm {
            degree: self.degree,
            matrices: sigma.iter().map(|col| combine(&self.matrices, col)).collect(),
        };
        let p = self.polynomial();
        let q = pulled.polynomial();
        let (key, v) = p.iter().next()?;
        let lam = q.get(key).cloned().unwrap_or_else(F::zero) / v.clone();
        let keys: std::collections::BTreeSet<&Vec<usize>> = p.keys().chain(q.keys()).collect();
        for k in keys {
            let a = p.get(k).cloned().unwrap_or_else(F::zero);
            let b = q.get(k).cloned().unwrap_or_else(F::zero);
            if b != lam.clone() * a {
                return None;
            }
        }
        Some(lam)
    }
}

/// `tr(x^d)` on a type-`A_n` Chevalley algebra, `2 ≤ d ≤ n+1`; invariance
/// is checked before returning.
pub fn invariant_trace_power(alg: &ChevalleyAlgebra, d: usize) -> Result<TraceForm<Q>> {
    let matrices = defining_representation(alg)?;
    let n = alg.rank() + 1;
    if d < 2 || d > n {
        return Err(Error::InvalidArgument(format!(
            "trace power degree {d} outside 2..={n} for {}",
            alg.cartan_type
        )));
    }
    let f = TraceForm { degree: d, matrices };
    f.check_invariance(&alg.lie)?;
    Ok(f)
}
