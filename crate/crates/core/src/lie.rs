//! Finite-dimensional Lie algebras given by structure constants on a basis.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, collect_sparse, SparseVec};
use crate::scalar::Field;

/// Structure constants `[x_i, x_j] = Σ_k c^k_{ij} x_k`, stored for every
/// ordered pair so lookups need no sign bookkeeping.
#[derive(Clone, Debug)]
pub struct LieAlgebra<F> {
    names: Vec<String>,
    table: Vec<SparseVec<F>>,
}

impl<F: Field> LieAlgebra<F> {
    /// Abelian algebra on the given basis names; brackets are filled in with
    /// [`LieAlgebra::set_bracket`].
    pub fn abelian(names: Vec<String>) -> Self {
        let n = names.len();
        LieAlgebra {
            names,
            table: vec![Vec::new(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Sets `[x_i, x_j] = v` and `[x_j, x_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: SparseVec<F>) {
        let n = self.dim();
        let neg = linalg::scale(&v, &-F::one());
        self.table[i * n + j] = v;
        self.table[j * n + i] = neg;
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let c = self.bracket_basis(*i, *j);
                if !c.is_empty() {
                    out = axpy(&out, &(a.clone() * b.clone()), c);
                }
            }
        }
        out
    }

    /// `[x, x_j]` for a vector `x` and basis index `j`.
    pub fn bracket_with_basis(&self, x: &SparseVec<F>, j: usize) -> SparseVec<F> {
        let mut out = Vec::new();
        for (i, a) in x {
            let c = self.bracket_basis(*i, j);
            if !c.is_empty() {
                out = axpy(&out, a, c);
            }
        }
        out
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            if !self.bracket_basis(i, i).is_empty() {
                return Err(Error::Consistency(format!(
                    "[{0}, {0}] is nonzero",
                    self.names[i]
                )));
            }
            for j in 0..i {
                let s = axpy(self.bracket_basis(i, j), &F::one(), self.bracket_basis(j, i));
                if !s.is_empty() {
                    return Err(Error::Consistency(format!(
                        "antisymmetry fails for ({}, {})",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive Jacobi check over all basis triples `i < j < k`.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let bad = (0..n).into_par_iter().find_map_any(|i| {
            for j in i + 1..n {
                let ij = self.bracket_basis(i, j);
                for k in j + 1..n {
                    // [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]
                    let ij_k = self.bracket_with_basis(ij, k);
                    let jk_i = self.bracket_with_basis(self.bracket_basis(j, k), i);
                    let ki_j = self.bracket_with_basis(self.bracket_basis(k, i), j);
                    let s = axpy(&axpy(&ij_k, &F::one(), &jk_i), &F::one(), &ki_j);
                    if !s.is_empty() {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(Error::Consistency(format!(
                "Jacobi fails on ({}, {}, {})",
                self.names[i], self.names[j], self.names[k]
            ))),
            None => Ok(()),
        }
    }

    /// Matrix of `ad x_i` as sparse columns: column `j` is `[x_i, x_j]`.
    pub fn ad_columns(&self, i: usize) -> Vec<SparseVec<F>> {
        (0..self.dim()).map(|j| self.bracket_basis(i, j).clone()).collect()
    }

    /// Killing form `tr(ad x_i ad x_j)`.
    pub fn killing_matrix(&self) -> Vec<Vec<F>> {
        let n = self.dim();
        let rows: Vec<Vec<F>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        // Σ_m coefficient of x_m in [x_i, [x_j, x_m]]
                        let mut acc = F::zero();
                        for m in 0..n {
                            let inner = self.bracket_basis(j, m);
                            for (l, c) in inner {
                                for (t, d) in self.bracket_basis(i, *l) {
                                    if *t == m {
                                        acc += c.clone() * d.clone();
                                    }
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        rows
    }

    pub fn killing_rank(&self) -> usize {
        linalg::dense_rank(&self.killing_matrix())
    }

    /// Dimension of the centre: kernel of `x ↦ ([x, x_j])_j`.
    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        // one row per (j, output coordinate), columns indexed by x
        let mut rows: Vec<SparseVec<F>> = Vec::new();
        for j in 0..n {
            let mut by_out: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
            for i in 0..n {
                for (k, c) in self.bracket_basis(i, j) {
                    by_out[*k].push((i, c.clone()));
                }
            }
            rows.extend(by_out.into_iter().filter(|r| !r.is_empty()).map(collect_sparse));
        }
        n - linalg::rank(rows)
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G) -> LieAlgebra<G> {
        LieAlgebra {
            names: self.names.clone(),
            table: self
                .table
                .iter()
                .map(|v| v.iter().map(|(i, x)| (*i, f(x))).filter(|(_, x)| !x.is_zero()).collect())
                .collect(),
        }
    }

    /// Structure constants in a new basis given by independent vectors spanning
    /// a subalgebra. Fails if some bracket leaves the span.
    pub fn restrict(&self, names: Vec<String>, basis: &[Vec<F>]) -> Result<LieAlgebra<F>> {
        let n = self.dim();
        let sub = linalg::Subspace::new(n, basis.to_vec())
            .ok_or_else(|| Error::Consistency("subalgebra basis is dependent".into()))?;
        let sparse: Vec<SparseVec<F>> = basis.iter().map(|v| linalg::to_sparse(v)).collect();
        let mut out = LieAlgebra::abelian(names);
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let br = linalg::to_dense(&self.bracket(&sparse[i], &sparse[j]), n);
                let c = sub.coordinates(&br).ok_or_else(|| {
                    Error::Consistency(format!("bracket of basis vectors {i}, {j} leaves the span"))
                })?;
                out.set_bracket(i, j, linalg::to_sparse(&c));
            }
        }
        Ok(out)
    }
}

/// How a basis vector arises from generators: either a generator itself or
/// `coeff · [x_left, x_right]` with both indices built earlier.
#[derive(Clone, Debug)]
pub enum Recipe<F> {
    Generator(usize),
    Bracket { left: usize, right: usize, coeff: F },
}

/// Extends a map given on generators to every basis vector by following the
/// recipes (in dependency order). `bracket` and `scale` act in the target.
pub fn extend_from_generators<F: Field, T: Clone>(
    recipes: &[Recipe<F>],
    generator_images: &[T],
    bracket: impl Fn(&T, &T) -> T,
    scale: impl Fn(&T, &F) -> T,
) -> Vec<T> {
    let mut out: Vec<Option<T>> = vec![None; recipes.len()];
    let mut stack: Vec<usize> = Vec::new();
    for start in 0..recipes.len() {
        stack.push(start);
        while let Some(&b) = stack.last() {
            if out[b].is_some() {
                stack.pop();
                continue;
            }
            match &recipes[b] {
                Recipe::Generator(g) => {
                    out[b] = Some(generator_images[*g].clone());
                    stack.pop();
                }
                Recipe::Bracket { left, right, coeff } => match (&out[*left], &out[*right]) {
                    (Some(l), Some(r)) => {
                        out[b] = Some(scale(&bracket(l, r), coeff));
                        stack.pop();
                    }
                    (None, _) => {
                        assert!(stack.len() <= recipes.len(), "cyclic recipes");
                        stack.push(*left)
                    }
                    (_, None) => {
                        assert!(stack.len() <= recipes.len(), "cyclic recipes");
                        stack.push(*right)
                    }
                },
            }
        }
    }
    out.into_iter().map(|x| x.expect("every basis vector built")).collect()
}

/// Checks that the linear map with sparse column images `phi` satisfies
/// `phi([x_i, x_j]) = [phi(x_i), phi(x_j)]` for all basis pairs.
pub fn check_homomorphism<F: Field>(alg: &LieAlgebra<F>, phi: &[SparseVec<F>]) -> Result<()> {
    let apply = |v: &SparseVec<F>| -> SparseVec<F> {
        let mut out = Vec::new();
        for (i, c) in v {
            out = axpy(&out, c, &phi[*i]);
        }
        out
    };
    let n = alg.dim();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = apply(alg.bracket_basis(i, j));
            let rhs = alg.bracket(&phi[i], &phi[j]);
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "map is not a homomorphism on ({}, {})",
                    alg.name(i),
                    alg.name(j)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    pub(crate) fn sl2() -> LieAlgebra<Q> {
        let mut g = LieAlgebra::abelian(vec!["h".into(), "e".into(), "f".into()]);
        g.set_bracket(0, 1, vec![(1, q(2))]);
        g.set_bracket(0, 2, vec![(2, q(-2))]);
        g.set_bracket(1, 2, vec![(0, q(1))]);
        g
    }

    #[test]
    fn sl2_basics() {
        let g = sl2();
        g.check_antisymmetry().unwrap();
        g.check_jacobi().unwrap();
        assert_eq!(g.killing_rank(), 3);
        assert_eq!(g.center_dim(), 0);
        let k = g.killing_matrix();
        assert_eq!(k[0][0], q(8));
        assert_eq!(k[1][2], q(4));
    }

    #[test]
    fn jacobi_detects_corruption() {
        let mut g = sl2();
        g.set_bracket(1, 2, vec![(0, q(1)), (1, q(1))]);
        assert!(g.check_jacobi().is_err());
    }

    #[test]
    fn abelian_center() {
        let g: LieAlgebra<Q> = LieAlgebra::abelian(vec!["a".into(), "b".into()]);
        assert_eq!(g.center_dim(), 2);
        assert_eq!(g.killing_rank(), 0);
    }
}
