//! Finite-dimensional quotients of parahorics in twisted loop algebras:
//! `p/P(z)p` for a standard parahoric `p` and `b/P(z)n` for the Iwahori and
//! its nilpotent radical, where `P(z) = z^N - Σ_j c_j z^j`.
//!
//! Degree `n` of the quotient is spanned by `x·z^n` with `x` in a weight
//! basis of `L_{n mod k}`: degree 0 holds `p_0` (or `b_0`), degrees `1..N`
//! hold all of `L_{n mod k}`, and degree `N` holds only a complement of the
//! part of `L_0` that the ideal absorbs.

use std::collections::HashMap;

use super::twist::TwistedAlgebra;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, SparseVec};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopKind {
    /// Standard parahoric with `p_0` the parabolic of the orbit-index subset `S`.
    Parahoric { parabolic: Vec<usize> },
    /// `b/P(z)n` for the Iwahori `b` and its nilpotent subalgebra `n`.
    IwahoriNilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub name: String,
    /// Power of `z` (a filtration degree when the modulus is not `z^N`).
    pub z: usize,
    /// `h_0`-weight in `L_0` simple-root coordinates.
    pub weight: Vec<i64>,
}

/// A finite-dimensional Lie algebra whose basis vectors carry a z-degree and
/// an `h_0`-weight, with an optional reductive subalgebra `g_0`.
#[derive(Clone, Debug)]
pub struct GradedLie<F> {
    pub basis: Vec<BasisElem>,
    pub lie: LieAlgebra<F>,
    /// Basis indices spanning `g_0`.
    pub g0: Vec<usize>,
    /// Whether brackets add z-degrees exactly.
    pub z_graded: bool,
    pub descriptor: String,
    /// Defining-representation matrices of each basis vector (type `A` only).
    pub matrices: Option<Vec<Vec<Vec<F>>>>,
    /// Height of the highest weight of `L_{1 mod k}`; used by the Kac–Moody
    /// grading derivation.
    pub psi_height: i64,
    /// `N` for `p/z^N p` and `b/z^N n`; `None` for deformations and custom
    /// algebras.
    pub truncation: Option<usize>,
}

/// Diagonal derivations, acting on `x·z^n` of weight `μ` by a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Zero,
    /// `n`
    ZScaling,
    /// `z_weight·n + Σ_J root_weights[J]·μ_J`
    Grading { z_weight: i64, root_weights: Vec<i64> },
    /// Type-`d` grading with all node weights one: `n(1 + ht ψ) + ht μ`.
    KacMoody,
}

impl<F: Field> GradedLie<F> {
    /// Wraps an arbitrary algebra; every bracket must respect the tags.
    pub fn from_parts(
        lie: LieAlgebra<F>,
        z: Vec<usize>,
        weights: Vec<Vec<i64>>,
        g0: Vec<usize>,
    ) -> Result<Self> {
        let basis: Vec<BasisElem> = (0..lie.dim())
            .map(|i| BasisElem {
                name: lie.name(i).to_string(),
                z: z[i],
                weight: weights[i].clone(),
            })
            .collect();
        let g = GradedLie {
            basis,
            lie,
            g0,
            z_graded: true,
            descriptor: "custom".into(),
            matrices: None,
            psi_height: 0,
            truncation: None,
        };
        g.check_tags()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_z(&self) -> usize {
        self.basis.iter().map(|b| b.z).max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn is_g0(&self, i: usize) -> bool {
        self.g0.contains(&i)
    }

    /// Weights add under brackets; z-degrees add when `z_graded` and never
    /// decrease otherwise.
    pub fn check_tags(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let wi = &self.basis[i].weight;
                let wj = &self.basis[j].weight;
                for (t, _) in self.lie.bracket_basis(i, j) {
                    let wt = &self.basis[*t].weight;
                    let ok_w = wt.iter().zip(wi.iter().zip(wj)).all(|(a, (b, c))| *a == b + c);
                    let zsum = self.basis[i].z + self.basis[j].z;
                    let ok_z = if self.z_graded {
                        self.basis[*t].z == zsum
                    } else {
                        true
                    };
                    if !ok_w || !ok_z {
                        return Err(Error::Consistency(format!(
                            "[{}, {}] leaves its graded component",
                            self.basis[i].name, self.basis[j].name
                        )));
                    }
                }
            }
        }
        for &i in &self.g0 {
            if self.basis[i].z != 0 {
                return Err(Error::Consistency("g_0 not in z-degree 0".into()));
            }
        }
        Ok(())
    }

    pub fn derivation_eigenvalue(&self, d: &Derivation, i: usize) -> i64 {
        let b = &self.basis[i];
        let z = b.z as i64;
        let ht: i64 = b.weight.iter().sum();
        match d {
            Derivation::Zero => 0,
            Derivation::ZScaling => z,
            Derivation::Grading {
                z_weight,
                root_weights,
            } => z_weight * z + root_weights.iter().zip(&b.weight).map(|(a, c)| a * c).sum::<i64>(),
            Derivation::KacMoody => z * (1 + self.psi_height) + ht,
        }
    }

    /// Verifies that `d` is a derivation of this algebra that kills `g_0`.
    pub fn check_derivation(&self, d: &Derivation) -> Result<()> {
        if let Derivation::Grading { root_weights, .. } = d {
            let l = self.basis.first().map(|b| b.weight.len()).unwrap_or(0);
            if root_weights.len() != l {
                return Err(Error::InvalidArgument(format!(
                    "grading needs {l} root weights, got {}",
                    root_weights.len()
                )));
            }
        }
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let s = self.derivation_eigenvalue(d, i) + self.derivation_eigenvalue(d, j);
                for (t, _) in self.lie.bracket_basis(i, j) {
                    if self.derivation_eigenvalue(d, *t) != s {
                        return Err(Error::InvalidArgument(format!(
                            "{d:?} is not a derivation: fails on [{}, {}]",
                            self.basis[i].name, self.basis[j].name
                        )));
                    }
                }
            }
        }
        for &i in &self.g0 {
            if self.derivation_eigenvalue(d, i) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{d:?} does not kill g_0 (fails on {})",
                    self.basis[i].name
                )));
            }
        }
        Ok(())
    }
}

fn z_name(base: &str, n: usize) -> String {
    match n {
        0 => base.to_string(),
        1 => format!("{base}·z"),
        _ => format!("{base}·z^{n}"),
    }
}

fn fmt_modulus<F: Field>(n: usize, c: &[F]) -> String {
    let nz: Vec<usize> = (0..n).filter(|&j| !c[j].is_zero()).collect();
    if nz.iter().all(|&j| j == 0) {
        return format!("t={}", c[0]);
    }
    let mut s = format!("P=z^{n}");
    for j in nz {
        let mono = match j {
            0 => String::new(),
            1 => "*z".into(),
            _ => format!("*z^{j}"),
        };
        s.push_str(&format!("-({}){mono}", c[j]));
    }
    s
}

/// General builder; `modulus[j] = c_j` in `z^N ≡ Σ_j c_j z^j`.
pub fn build_loop_quotient<F: Field>(
    tw: &TwistedAlgebra<F>,
    kind: LoopKind,
    n: usize,
    modulus: Vec<F>,
) -> Result<GradedLie<F>> {
    let k = tw.k;
    if n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "N = {n} must be a positive multiple of the twist order k = {k}"
        )));
    }
    if modulus.len() != n {
        return Err(Error::InvalidArgument(format!(
            "modulus needs {n} coefficients, got {}",
            modulus.len()
        )));
    }
    if let Some(j) = (0..n).find(|&j| j % k != 0 && !modulus[j].is_zero()) {
        return Err(Error::InvalidArgument(format!(
            "coefficient of z^{j} must vanish: only powers divisible by k = {k} are σ-compatible"
        )));
    }
    let l0 = tw.l0();
    let parabolic: Vec<usize> = match &kind {
        LoopKind::Parahoric { parabolic } => {
            if let Some(&j) = parabolic.iter().find(|&&j| j >= l0) {
                return Err(Error::InvalidArgument(format!(
                    "parabolic index {} out of range 1..={l0}",
                    j + 1
                )));
            }
            parabolic.clone()
        }
        LoopKind::IwahoriNilpotent => Vec::new(),
    };
    let nil = kind == LoopKind::IwahoriNilpotent;
    let nonneg = |c: &[i64]| c.iter().all(|&x| x >= 0);
    let zero = |c: &[i64]| c.iter().all(|&x| x == 0);
    let in_levi = |c: &[i64]| c.iter().enumerate().all(|(j, &x)| x == 0 || parabolic.contains(&j));
    // degree-0 part and the part of L_0 absorbed into the ideal at z^N
    let in_k0 = |e: usize| {
        let (a, c) = &tw.tags[e];
        *a == 0 && (nonneg(c) || (!nil && in_levi(c)))
    };
    let in_i0 = |e: usize| {
        let (a, c) = &tw.tags[e];
        if nil {
            *a == 0 && nonneg(c) && !zero(c)
        } else {
            in_k0(e)
        }
    };
    let mut basis: Vec<BasisElem> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut source: Vec<usize> = Vec::new();
    for deg in 0..=n {
        let space = &tw.eigenspaces[deg % k];
        for &e in &space.global {
            let keep = if deg == 0 {
                in_k0(e)
            } else if deg < n {
                true
            } else {
                !in_i0(e)
            };
            if keep {
                index.insert((deg, e), basis.len());
                source.push(e);
                basis.push(BasisElem {
                    name: z_name(tw.lie.name(e), deg),
                    z: deg,
                    weight: tw.tags[e].1.clone(),
                });
            }
        }
    }
    let g0: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            basis[i].z == 0 && {
                let c = &basis[i].weight;
                zero(c) || (!nil && in_levi(c))
            }
        })
        .collect();

    // w·z^d rewritten in the quotient basis
    fn reduce<F: Field>(
        w: &SparseVec<F>,
        d: usize,
        n: usize,
        modulus: &[F],
        index: &HashMap<(usize, usize), usize>,
        absorbed: &dyn Fn(usize) -> bool,
        out: &mut Vec<(usize, F)>,
        scale: &F,
    ) -> Result<()> {
        if w.is_empty() || scale.is_zero() {
            return Ok(());
        }
        if d < n {
            for (e, x) in w {
                let g = index.get(&(d, *e)).ok_or_else(|| {
                    Error::Consistency(format!("bracket leaves the parahoric at z-degree {d}"))
                })?;
                out.push((*g, scale.clone() * x.clone()));
            }
            return Ok(());
        }
        if d == n {
            let mut rest: SparseVec<F> = Vec::new();
            for (e, x) in w {
                if absorbed(*e) {
                    rest.push((*e, x.clone()));
                } else {
                    let g = index[&(d, *e)];
                    out.push((g, scale.clone() * x.clone()));
                }
            }
            for (j, c) in modulus.iter().enumerate() {
                if !c.is_zero() {
                    reduce(&rest, j, n, modulus, index, absorbed, out, &(scale.clone() * c.clone()))?;
                }
            }
            return Ok(());
        }
        for (j, c) in modulus.iter().enumerate() {
            if !c.is_zero() {
                reduce(w, d - n + j, n, modulus, index, absorbed, out, &(scale.clone() * c.clone()))?;
            }
        }
        Ok(())
    }

    let names: Vec<String> = basis.iter().map(|b| b.name.clone()).collect();
    let mut lie = LieAlgebra::abelian(names);
    let absorbed = |e: usize| in_i0(e);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let w = tw.lie.bracket_basis(source[i], source[j]);
            if w.is_empty() {
                continue;
            }
            let mut terms = Vec::new();
            reduce(w, basis[i].z + basis[j].z, n, &modulus, &index, &absorbed, &mut terms, &F::one())?;
            let v = linalg::collect_sparse(terms);
            if !v.is_empty() {
                lie.set_bracket(i, j, v);
            }
        }
    }
    let z_graded = modulus.iter().all(|c| c.is_zero());
    let a = &tw.automorphism;
    let part = match &kind {
        LoopKind::Parahoric { parabolic } => {
            let s: Vec<String> = parabolic.iter().map(|j| (j + 1).to_string()).collect();
            format!("S={{{}}}", s.join(","))
        }
        LoopKind::IwahoriNilpotent => "nil".into(),
    };
    let descriptor = format!(
        "{} / {} / {} / N={} / {}",
        a.base,
        a.cycle_string(),
        part,
        n,
        fmt_modulus(n, &modulus)
    );
    let g = GradedLie {
        basis,
        lie,
        g0,
        z_graded,
        descriptor,
        matrices: super::trace::eigen_matrices(tw)
            .map(|ms| source.iter().map(|&e| ms[e].clone()).collect()),
        psi_height: tw.highest_weight_of_l1().iter().sum(),
        truncation: if z_graded { Some(n) } else { None },
    };
    g.lie.check_antisymmetry()?;
    g.lie.check_jacobi()?;
    g.check_tags()?;
    Ok(g)
}

/// `p/z^N p`.
pub fn build_truncated<F: Field>(
    tw: &TwistedAlgebra<F>,
    parabolic: &[usize],
    n: usize,
) -> Result<GradedLie<F>> {
    build_loop_quotient(
        tw,
        LoopKind::Parahoric {
            parabolic: parabolic.to_vec(),
        },
        n,
        vec![F::zero(); n],
    )
}

/// `p/(z^N - t)p`.
pub fn build_deformed<F: Field>(
    tw: &TwistedAlgebra<F>,
    parabolic: &[usize],
    n: usize,
    t: F,
) -> Result<GradedLie<F>> {
    let mut m = vec![F::zero(); n];
    if n > 0 {
        m[0] = t;
    }
    build_loop_quotient(
        tw,
        LoopKind::Parahoric {
            parabolic: parabolic.to_vec(),
        },
        n,
        m,
    )
}

/// `b/z^N n`, of dimension `(N/k)·dim L + l_0`.
pub fn build_iwahori_nilpotent_quotient<F: Field>(
    tw: &TwistedAlgebra<F>,
    n: usize,
) -> Result<GradedLie<F>> {
    build_loop_quotient(tw, LoopKind::IwahoriNilpotent, n, vec![F::zero(); n])
}
