//! Exact linear algebra: sparse row echelon forms, kernels, and coordinate
//! extraction in a subspace.
//!
//! All routines are plain Gaussian elimination over a [`Field`]; entries are
//! exact so there is no pivoting strategy beyond "first nonzero column".

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sparse vector: `(index, value)` pairs, strictly increasing indices, no zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `a + c·b` for sorted sparse vectors.
pub fn axpy<F: Field>(a: &SparseVec<F>, c: &F, b: &SparseVec<F>) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.clone() * b[j].1.clone()));
            j += 1;
        } else {
            let v = a[i].1.clone() + c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Builds a sorted sparse vector from unsorted `(index, value)` contributions.
pub fn collect_sparse<F: Field>(terms: impl IntoIterator<Item = (usize, F)>) -> SparseVec<F> {
    let mut acc: BTreeMap<usize, F> = BTreeMap::new();
    for (i, v) in terms {
        if v.is_zero() {
            continue;
        }
        let e = acc.entry(i).or_insert_with(F::zero);
        *e += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn scale<F: Field>(v: &SparseVec<F>, c: &F) -> SparseVec<F> {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.clone() * c.clone())).collect()
}

pub fn to_dense<F: Field>(v: &SparseVec<F>, n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Incremental row echelon form keyed by leading column. Every stored row
/// has leading coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pivots: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Eliminates leading entries until the leading column has no pivot.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        while let Some((lead, c)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &(-c), p),
                None => break,
            }
        }
        v
    }

    /// Adds a row; returns the new pivot column if it was independent.
    pub fn insert(&mut self, v: SparseVec<F>) -> Option<usize> {
        let v = self.reduce(v);
        let (lead, c) = v.first().cloned()?;
        let v = scale(&v, &c.inv());
        self.pivots.insert(lead, v);
        Some(lead)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &usize> {
        self.pivots.keys()
    }

    /// Reduced row echelon form: pivot rows cleared in every other pivot column.
    pub fn into_rref(self) -> BTreeMap<usize, SparseVec<F>> {
        let mut done: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for (lead, mut row) in self.pivots.into_iter().rev() {
            // every later pivot row is already reduced; clear those columns here
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| done.contains_key(c))
                    .cloned();
                match hit {
                    Some((c, x)) => row = axpy(&row, &(-x), &done[&c]),
                    None => break,
                }
            }
            done.insert(lead, row);
        }
        done
    }
}

/// Rank of a set of sparse rows.
pub fn rank<F: Field>(rows: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}` where `M` is given by sparse rows over `ncols`
/// columns. Basis vectors are indexed by free column, in increasing order.
pub fn kernel<F: Field>(rows: &[SparseVec<F>], ncols: usize) -> Vec<SparseVec<F>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
        if e.rank() == ncols {
            return Vec::new();
        }
    }
    let rref = e.into_rref();
    // column -> list of (pivot, coefficient) in pivot rows
    let mut by_col: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
    for (p, row) in &rref {
        for (c, x) in row.iter().skip(1) {
            by_col.entry(*c).or_default().push((*p, x.clone()));
        }
    }
    let mut out = Vec::new();
    for f in 0..ncols {
        if rref.contains_key(&f) {
            continue;
        }
        let mut v: Vec<(usize, F)> = vec![(f, F::one())];
        if let Some(list) = by_col.get(&f) {
            for (p, x) in list {
                v.push((*p, -x.clone()));
            }
        }
        v.sort_by_key(|(i, _)| *i);
        out.push(v);
    }
    out
}

/// A subspace of `F^n` with a fixed ordered basis, supporting exact
/// coordinate extraction.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    dim_ambient: usize,
    basis: Vec<Vec<F>>,
    // echelon rows: (leading column, row, combination of basis vectors)
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
}

impl<F: Field> Subspace<F> {
    /// Fails (returns `None`) if the vectors are linearly dependent.
    pub fn new(dim_ambient: usize, basis: Vec<Vec<F>>) -> Option<Self> {
        let m = basis.len();
        let mut rows: Vec<(usize, Vec<F>, Vec<F>)> = Vec::new();
        for (k, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            let mut comb = vec![F::zero(); m];
            comb[k] = F::one();
            for (lead, r, rc) in &rows {
                let c = v[*lead].clone();
                if !c.is_zero() {
                    for i in 0..dim_ambient {
                        if !r[i].is_zero() {
                            v[i] -= c.clone() * r[i].clone();
                        }
                    }
                    for i in 0..m {
                        if !rc[i].is_zero() {
                            comb[i] -= c.clone() * rc[i].clone();
                        }
                    }
                }
            }
            let lead = v.iter().position(|x| !x.is_zero())?;
            let inv = v[lead].inv();
            for x in v.iter_mut() {
                *x *= inv.clone();
            }
            for x in comb.iter_mut() {
                *x *= inv.clone();
            }
            // keep earlier rows clear in the new leading column
            for (_, r, rc) in rows.iter_mut() {
                let c = r[lead].clone();
                if !c.is_zero() {
                    for i in 0..dim_ambient {
                        if !v[i].is_zero() {
                            r[i] -= c.clone() * v[i].clone();
                        }
                    }
                    for i in 0..m {
                        if !comb[i].is_zero() {
                            rc[i] -= c.clone() * comb[i].clone();
                        }
                    }
                }
            }
            rows.push((lead, v, comb));
        }
        Some(Subspace {
            dim_ambient,
            basis,
            rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let m = self.basis.len();
        let mut coords = vec![F::zero(); m];
        let mut rest = v.to_vec();
        for (lead, r, rc) in &self.rows {
            let c = rest[*lead].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..self.dim_ambient {
                if !r[i].is_zero() {
                    rest[i] -= c.clone() * r[i].clone();
                }
            }
            for i in 0..m {
                if !rc[i].is_zero() {
                    coords[i] += c.clone() * rc[i].clone();
                }
            }
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Solves `Σ x_j columns[j] = target`, if solvable and the columns independent.
pub fn solve_columns<F: Field>(columns: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let n = target.len();
    let s = Subspace::new(n, columns.to_vec())?;
    s.coordinates(target)
}

/// Rank of a dense matrix given by rows.
pub fn dense_rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rank(rows.iter().map(|r| to_sparse(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn sv(v: &[i64]) -> SparseVec<Q> {
        to_sparse(&v.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn kernel_of_small_matrix() {
        let rows = vec![sv(&[1, 1, 0, 0]), sv(&[0, 0, 1, -1])];
        let ker = kernel(&rows, 4);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let d = to_dense(k, 4);
            for r in &rows {
                let dot: Q = r.iter().fold(Q::zero(), |acc, (i, x)| acc + x.clone() * d[*i].clone());
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn subspace_coordinates() {
        let b = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let s = Subspace::new(3, b).unwrap();
        let c = s.coordinates(&[q(2), q(5), q(3)]).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(s.coordinates(&[q(1), q(0), q(0)]).is_none());
        assert!(Subspace::new(2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-2i64..3, 20)) {
            let rows: Vec<SparseVec<Q>> = entries.chunks(5).map(sv).collect();
            let r = rank(rows.clone());
            let k = kernel(&rows, 5);
            prop_assert_eq!(r + k.len(), 5);
            for v in &k {
                let d = to_dense(v, 5);
                for row in &rows {
                    let dot: Q = row.iter().fold(Q::zero(), |acc, (i, x)| acc + x.clone() * d[*i].clone());
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
