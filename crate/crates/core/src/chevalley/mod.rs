//! Chevalley bases of the simple Lie algebras, lifted diagram automorphisms,
//! σ-eigenspaces, and the finite-dimensional truncations of twisted loop
//! algebras built from them.
//!
//! Basis layout of a [`ChevalleyAlgebra`] of rank `l` with `P` positive roots:
//! `h_1..h_l` at `0..l`, `e_β` at `l..l+P`, `f_β` at `l+P..l+2P`, roots in
//! [`RootSystem`] order.

mod loops;
mod trace;
mod twist;

pub use loops::{
    build_deformed, build_iwahori_nilpotent_quotient, build_loop_quotient, build_truncated,
    BasisElem, Derivation, GradedLie, LoopKind,
};
pub use trace::{defining_representation, invariant_trace_power, TraceForm};
pub use twist::{Eigenspace, PrincipalTriple, TwistedAlgebra};

use num_traits::One;

use crate::error::{Error, Result};
use crate::folding::{fold, validate_automorphism, DiagramAutomorphism};
use crate::lie::{check_homomorphism, extend_from_generators, LieAlgebra, Recipe};
use crate::linalg::{self, SparseVec};
use crate::rootdata::{CartanType, RootSystem, Series};
use crate::scalar::{rational, Field};
use crate::Q;

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    pub cartan_type: CartanType,
    pub roots: RootSystem,
    pub lie: LieAlgebra<Q>,
    /// Generators are `e_1..e_l` (0..l) then `f_1..f_l` (l..2l).
    pub recipes: Vec<Recipe<Q>>,
    pub sigma: Option<Sigma>,
}

/// A lifted diagram automorphism as sparse column images.
#[derive(Clone, Debug)]
pub struct Sigma {
    pub automorphism: DiagramAutomorphism,
    pub columns: Vec<SparseVec<Q>>,
}

impl ChevalleyAlgebra {
    pub fn rank(&self) -> usize {
        self.roots.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.num_positive()
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn h(&self, i: usize) -> usize {
        i
    }

    pub fn e(&self, root: usize) -> usize {
        self.rank() + root
    }

    pub fn f(&self, root: usize) -> usize {
        self.rank() + self.num_positive() + root
    }

    /// Signed root of a basis vector; zero for the Cartan part.
    pub fn root_of(&self, b: usize) -> Vec<i64> {
        let (l, p) = (self.rank(), self.num_positive());
        if b < l {
            vec![0; l]
        } else if b < l + p {
            self.roots.positive_roots[b - l].clone()
        } else {
            self.roots.positive_roots[b - l - p].iter().map(|x| -x).collect()
        }
    }

    /// Attaches the lift of a diagram automorphism, `h_i ↦ h_{π i}`,
    /// `e_i ↦ e_{π i}`, `f_i ↦ f_{π i}`, extended through brackets.
    pub fn lift_automorphism(mut self, a: &DiagramAutomorphism) -> Result<Self> {
        if a.base != self.cartan_type {
            return Err(Error::InvalidAutomorphism(format!(
                "automorphism of {} applied to {}",
                a.base, self.cartan_type
            )));
        }
        let l = self.rank();
        let mut gens: Vec<SparseVec<Q>> = Vec::with_capacity(2 * l);
        for i in 0..l {
            gens.push(vec![(self.e(a.perm[i]), Q::one())]);
        }
        for i in 0..l {
            gens.push(vec![(self.f(a.perm[i]), Q::one())]);
        }
        let lie = &self.lie;
        let columns = extend_from_generators(
            &self.recipes,
            &gens,
            |x, y| lie.bracket(x, y),
            linalg::scale,
        );
        check_homomorphism(&self.lie, &columns)?;
        // σ^k = id
        let n = self.dim();
        for b in 0..n {
            let mut v: SparseVec<Q> = vec![(b, Q::one())];
            for _ in 0..a.order_k {
                let mut w = Vec::new();
                for (i, c) in &v {
                    w = linalg::axpy(&w, c, &columns[*i]);
                }
                v = w;
            }
            if v != vec![(b, Q::one())] {
                return Err(Error::Consistency(format!(
                    "lifted automorphism does not have order {} on {}",
                    a.order_k,
                    self.lie.name(b)
                )));
            }
        }
        self.sigma = Some(Sigma {
            automorphism: a.clone(),
            columns,
        });
        Ok(self)
    }

    /// Checks `[h_i, e_β] = ⟨β, α_i^∨⟩ e_β`, `[h_i, f_β] = -⟨β, α_i^∨⟩ f_β`,
    /// `[e_β, f_β]` acting by 2 on `e_β`, and Jacobi.
    pub fn verify(&self) -> Result<()> {
        let l = self.rank();
        for i in 0..l {
            for (r, beta) in self.roots.positive_roots.iter().enumerate() {
                let c = self.roots.coroot_pairing(beta, i);
                let term = |idx: usize, c: i64| -> SparseVec<Q> {
                    if c == 0 {
                        Vec::new()
                    } else {
                        vec![(idx, Q::from_i64(c))]
                    }
                };
                let want_e = term(self.e(r), c);
                let want_f = term(self.f(r), -c);
                if self.lie.bracket_basis(self.h(i), self.e(r)) != &want_e
                    || self.lie.bracket_basis(self.h(i), self.f(r)) != &want_f
                {
                    return Err(Error::Consistency(format!(
                        "Cartan action wrong on root {beta:?} of {}",
                        self.cartan_type
                    )));
                }
            }
        }
        for r in 0..self.num_positive() {
            let h = self.lie.bracket_basis(self.e(r), self.f(r)).clone();
            let act = self.lie.bracket_with_basis(&h, self.e(r));
            if act != vec![(self.e(r), Q::from_i64(2))] {
                return Err(Error::Consistency(format!(
                    "[e, f] does not act by 2 on e for root {:?}",
                    self.roots.positive_roots[r]
                )));
            }
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (_, c) in self.lie.bracket_basis(i, j) {
                    if !c.is_integer() {
                        return Err(Error::Consistency(format!(
                            "non-integral structure constant in [{}, {}]",
                            self.lie.name(i),
                            self.lie.name(j)
                        )));
                    }
                }
            }
        }
        self.lie.check_antisymmetry()?;
        self.lie.check_jacobi()
    }
}

fn root_name(prefix: char, beta: &[i64], simple: Option<usize>) -> String {
    match simple {
        Some(i) => format!("{prefix}{}", i + 1),
        None => {
            let digits: String = beta.iter().map(|x| x.to_string()).collect();
            format!("{prefix}({digits})")
        }
    }
}

fn basis_names(rs: &RootSystem) -> Vec<String> {
    let l = rs.rank();
    let simple = |b: &[i64]| -> Option<usize> {
        if b.iter().sum::<i64>() == 1 {
            b.iter().position(|&x| x == 1)
        } else {
            None
        }
    };
    let mut names: Vec<String> = (0..l).map(|i| format!("h{}", i + 1)).collect();
    for b in &rs.positive_roots {
        names.push(root_name('e', b, simple(b)));
    }
    for b in &rs.positive_roots {
        names.push(root_name('f', b, simple(b)));
    }
    names
}

/// Recipes expressing every basis vector through `e_i`, `f_i`: a non-simple
/// `e_β` is a multiple of `[e_j, e_{β-α_j}]` for the smallest admissible `j`.
fn derive_recipes(rs: &RootSystem, lie: &LieAlgebra<Q>) -> Result<Vec<Recipe<Q>>> {
    let l = rs.rank();
    let p = rs.num_positive();
    let mut recipes: Vec<Option<Recipe<Q>>> = vec![None; 2 * p + l];
    for r in 0..p {
        let beta = &rs.positive_roots[r];
        for (offset, gen_offset) in [(l, 0), (l + p, l)] {
            let idx = offset + r;
            if rs.heights[r] == 1 {
                let i = beta.iter().position(|&x| x == 1).expect("simple root");
                recipes[idx] = Some(Recipe::Generator(gen_offset + i));
                continue;
            }
            let (j, rest) = (0..l)
                .find_map(|j| {
                    let mut d = beta.clone();
                    d[j] -= 1;
                    rs.positive_index(&d).map(|s| (j, s))
                })
                .ok_or_else(|| Error::Consistency(format!("root {beta:?} unreachable")))?;
            let (left, right) = (offset + j, offset + rest);
            let c = lie
                .bracket_basis(left, right)
                .iter()
                .find(|(k, _)| *k == idx)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| Error::Consistency(format!("bracket does not reach root {beta:?}")))?;
            recipes[idx] = Some(Recipe::Bracket {
                left,
                right,
                coeff: c.inv(),
            });
        }
    }
    for i in 0..l {
        let c = lie
            .bracket_basis(l + i, l + p + i)
            .iter()
            .find(|(k, _)| *k == i)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::Consistency("[e_i, f_i] misses h_i".into()))?;
        recipes[i] = Some(Recipe::Bracket {
            left: l + i,
            right: l + p + i,
            coeff: c.inv(),
        });
    }
    Ok(recipes.into_iter().map(|r| r.expect("all set")).collect())
}

/// Sign `ε(α, β) = (-1)^{Σ a_i b_i + Σ_{i<j, A_ij=-1} a_i b_j}`.
fn fk_sign(a: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let n = x.len();
    let mut s: i64 = 0;
    for i in 0..n {
        s += x[i] * y[i];
        for j in i + 1..n {
            if a[i][j] == -1 {
                s += x[i] * y[j];
            }
        }
    }
    if s.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Simply-laced types via the Frenkel–Kac cocycle:
/// `[E_α, E_β] = ε(α,β) E_{α+β}`, `[E_α, E_{-α}] = -h_α`, with
/// `e_β = E_β` and `f_β = -E_{-β}`.
fn build_simply_laced(t: CartanType) -> Result<ChevalleyAlgebra> {
    let rs = RootSystem::new(t);
    let a = rs.cartan_matrix.clone();
    let l = rs.rank();
    let p = rs.num_positive();
    let names = basis_names(&rs);
    let mut lie: LieAlgebra<Q> = LieAlgebra::abelian(names);
    // basis vector b of root type as (signed root, sign) with vector = sign·E_root
    let signed = |b: usize| -> (Vec<i64>, i64) {
        if b < l + p {
            (rs.positive_roots[b - l].clone(), 1)
        } else {
            (rs.positive_roots[b - l - p].iter().map(|x| -x).collect(), -1)
        }
    };
    let index_of = |root: &[i64]| -> Option<(usize, i64)> {
        if let Some(r) = rs.positive_index(root) {
            return Some((l + r, 1));
        }
        let neg: Vec<i64> = root.iter().map(|x| -x).collect();
        rs.positive_index(&neg).map(|r| (l + p + r, -1))
    };
    for i in 0..l {
        for b in l..l + 2 * p {
            let (root, _) = signed(b);
            let c = rs.coroot_pairing(&root, i);
            if c != 0 {
                lie.set_bracket(i, b, vec![(b, Q::from_i64(c))]);
            }
        }
    }
    for b1 in l..l + 2 * p {
        for b2 in b1 + 1..l + 2 * p {
            let (r1, s1) = signed(b1);
            let (r2, s2) = signed(b2);
            let sum: Vec<i64> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
            if sum.iter().all(|&x| x == 0) {
                // s1 s2 [E_α, E_{-α}] = -s1 s2 h_α
                let v = linalg::collect_sparse(
                    r1.iter()
                        .enumerate()
                        .map(|(i, &x)| (i, Q::from_i64(-s1 * s2 * x))),
                );
                lie.set_bracket(b1, b2, v);
            } else if let Some((k, sk)) = index_of(&sum) {
                let eps = fk_sign(&a, &r1, &r2);
                // E_{α+β} = sk · x_k
                lie.set_bracket(b1, b2, vec![(k, Q::from_i64(s1 * s2 * eps * sk))]);
            }
        }
    }
    let recipes = derive_recipes(&rs, &lie)?;
    let alg = ChevalleyAlgebra {
        cartan_type: t,
        roots: rs,
        lie,
        recipes,
        sigma: None,
    };
    alg.verify()?;
    Ok(alg)
}

/// Simply-laced cover and automorphism whose fixed subalgebra realises a
/// non-simply-laced type.
fn cover_of(t: CartanType) -> (CartanType, DiagramAutomorphism) {
    let n = t.rank;
    let cover = match t.series {
        Series::B => CartanType::new(Series::D, n + 1).expect("valid"),
        Series::C => CartanType::new(Series::A, 2 * n - 1).expect("valid"),
        Series::F => CartanType::of("E6"),
        Series::G => CartanType::of("D4"),
        _ => unreachable!("simply laced"),
    };
    let rs = RootSystem::new(cover);
    let perm: Vec<usize> = match t.series {
        Series::B => {
            let mut p: Vec<usize> = (0..n + 1).collect();
            p.swap(n - 1, n);
            p
        }
        Series::C => (0..2 * n - 1).rev().collect(),
        Series::F => vec![5, 1, 4, 3, 2, 0],
        Series::G => vec![2, 1, 3, 0],
        _ => unreachable!(),
    };
    let aut = validate_automorphism(&rs, &perm).expect("standard cover automorphism");
    (cover, aut)
}

/// Non-simply-laced types as fixed points of a diagram automorphism of the
/// simply-laced cover, renormalised to a Chevalley basis.
fn build_folded(t: CartanType) -> Result<ChevalleyAlgebra> {
    let (cover_t, aut) = cover_of(t);
    let cover = build_simply_laced(cover_t)?;
    let fd = fold(&cover.roots, &aut)?;
    if fd.folded_type != t {
        return Err(Error::Consistency(format!(
            "cover {cover_t} folds to {}, not {t}",
            fd.folded_type
        )));
    }
    let n = cover.dim();
    let rs = RootSystem::new(t);
    let l = rs.rank();
    let p = rs.num_positive();
    // Bourbaki node -> orbit
    let mut orbit_of_node = vec![0; l];
    for (o, &node) in fd.node_map.iter().enumerate() {
        orbit_of_node[node] = o;
    }
    let dense = |v: &SparseVec<Q>| linalg::to_dense(v, n);
    let mut h: Vec<SparseVec<Q>> = Vec::new();
    let mut e: Vec<SparseVec<Q>> = vec![Vec::new(); p];
    let mut f: Vec<SparseVec<Q>> = vec![Vec::new(); p];
    for node in 0..l {
        let o = &fd.orbits[orbit_of_node[node]];
        let c = Q::from_i64(fd.coroot_scale[orbit_of_node[node]]);
        h.push(o.iter().map(|&i| (cover.h(i), c.clone())).collect());
        e[node] = o.iter().map(|&i| (cover.e(i), Q::one())).collect();
        f[node] = o.iter().map(|&i| (cover.f(i), Q::one())).collect();
    }
    for r in l..p {
        let beta = &rs.positive_roots[r];
        let (j, rest) = (0..l)
            .find_map(|j| {
                let mut d = beta.clone();
                d[j] -= 1;
                rs.positive_index(&d).map(|s| (j, s))
            })
            .expect("reachable");
        // p = largest with (β - α_j) - p α_j a root
        let mut pp = 0i64;
        let mut probe = rs.positive_roots[rest].clone();
        loop {
            probe[j] -= 1;
            if rs.positive_index(&probe).is_some() {
                pp += 1;
            } else {
                break;
            }
        }
        let inv = rational(1, pp + 1);
        e[r] = linalg::scale(&cover.lie.bracket(&e[j], &e[rest]), &inv);
        f[r] = linalg::scale(&cover.lie.bracket(&f[j], &f[rest]), &-inv);
    }
    let basis: Vec<Vec<Q>> = h.iter().chain(e.iter()).chain(f.iter()).map(dense).collect();
    let lie = cover.lie.restrict(basis_names(&rs), &basis)?;
    let recipes = derive_recipes(&rs, &lie)?;
    let alg = ChevalleyAlgebra {
        cartan_type: t,
        roots: rs,
        lie,
        recipes,
        sigma: None,
    };
    alg.verify()?;
    Ok(alg)
}

/// Chevalley basis with integer structure constants; Jacobi verified.
pub fn build_chevalley(t: CartanType) -> Result<ChevalleyAlgebra> {
    if t.series.is_simply_laced() {
        build_simply_laced(t)
    } else {
        build_folded(t)
    }
}

/// Convenience: Chevalley algebra with the automorphism attached.
pub fn build_with_automorphism(a: &DiagramAutomorphism) -> Result<ChevalleyAlgebra> {
    build_chevalley(a.base)?.lift_automorphism(a)
}
