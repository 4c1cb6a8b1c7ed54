//! Constant terms `[e^0]` of products over affine real roots, expanded in
//! the group algebra of the weight lattice of `L_0` with coefficients in
//! `Z[q]`, and the closed forms they are compared with.
//!
//! An affine root `α + nδ` contributes `1 - e^{-(α+nδ)} = 1 - q^n e^{-α}`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chevalley::TwistedAlgebra;
use crate::cohomology::CohomologyTable;
use crate::error::{Error, Result};
use crate::qseries::{q_binomial, shifted_q_binomial, LaurentQ, QRational};
use crate::rootdata::RootSystem;
use crate::scalar::Field;

pub const DEFAULT_PRODUCT_CAP: usize = 5_000_000;

/// Sparse element of `Z[P][q^{±1}]`: `(weight in fundamental coordinates,
/// q-exponent) ↦ coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightQPoly {
    pub terms: HashMap<(Vec<i64>, i64), BigInt>,
}

impl WeightQPoly {
    pub fn one(rank: usize) -> Self {
        let mut terms = HashMap::new();
        terms.insert((vec![0; rank], 0), BigInt::one());
        WeightQPoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `1 - q^n e^{shift}`, keeping only terms accepted by
    /// `keep`.
    fn mul_binomial(&self, shift: &[i64], n: i64, keep: impl Fn(&[i64]) -> bool) -> WeightQPoly {
        let mut out: HashMap<(Vec<i64>, i64), BigInt> = HashMap::with_capacity(self.terms.len() * 2);
        for ((w, e), c) in &self.terms {
            if keep(w) {
                *out.entry((w.clone(), *e)).or_insert_with(BigInt::zero) += c;
            }
            let moved: Vec<i64> = w.iter().zip(shift).map(|(a, b)| a + b).collect();
            if keep(&moved) {
                *out.entry((moved, e + n)).or_insert_with(BigInt::zero) -= c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        WeightQPoly { terms: out }
    }

    /// `[e^0]`.
    pub fn constant_term(&self) -> LaurentQ {
        let mut p = LaurentQ::zero();
        for ((w, e), c) in &self.terms {
            if w.iter().all(|&x| x == 0) {
                p.add_term(*e, c.clone());
            }
        }
        p
    }
}


#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineRoot {
    /// `α` in fundamental-weight coordinates of `L_0`.
    pub weight: Vec<i64>,
    /// `α` in simple-root coordinates of `L_0`.
    pub root: Vec<i64>,
    pub n: i64,
    /// `α(ρ_N) = n - N·α(ρ)`.
    pub pairing: i64,
}

impl AffineRoot {
    pub fn sign(&self) -> i64 {
        self.pairing.signum()
    }
}

/// The set `S_N` of affine real roots `α + nδ` with `0 ≤ n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineRootSetN {
    pub level: i64,
    pub k: usize,
    pub roots: Vec<AffineRoot>,
    /// `a'[I][J] = α_J(h_I)` of `L_0`.
    pub cartan: Vec<Vec<i64>>,
}

fn to_fundamental(cartan: &[Vec<i64>], c: &[i64]) -> Vec<i64> {
    cartan
        .iter()
        .map(|row| row.iter().zip(c).map(|(a, x)| a * x).sum())
        .collect()
}

impl AffineRootSetN {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Applies the simple reflection `s_i` to every finite part.
    pub fn reflect(&self, i: usize) -> AffineRootSetN {
        let alpha_i: Vec<i64> = self.cartan.iter().map(|row| row[i]).collect();
        let mut out = self.clone();
        for r in &mut out.roots {
            let m = r.weight[i];
            for (w, a) in r.weight.iter_mut().zip(&alpha_i) {
                *w -= m * a;
            }
            r.root[i] -= m;
        }
        out
    }
}

/// `S_N` from the σ-eigenspace weights: nonzero weights of `L_{n mod k}`
/// with multiplicity, positive ones only at `n = 0` and negative ones only
/// at `n = N`.
pub fn build_sn<F: Field>(tw: &TwistedAlgebra<F>, n: usize) -> Result<AffineRootSetN> {
    let k = tw.k;
    if n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!("N = {n} must be a positive multiple of k = {k}")));
    }
    let weights: Vec<Vec<Vec<i64>>> = tw.eigenspaces.iter().map(|e| e.weights.clone()).collect();
    build_sn_from_weights(&tw.folded.folded_cartan, &weights, n)
}

/// As [`build_sn`], from the Cartan matrix of `L_0` and the weight
/// multisets of `L_0, …, L_{k-1}` in simple-root coordinates.
pub fn build_sn_from_weights(cartan: &[Vec<i64>], weights: &[Vec<Vec<i64>>], n: usize) -> Result<AffineRootSetN> {
    let k = weights.len();
    let mut roots = Vec::new();
    for deg in 0..=n {
        for c in &weights[deg % k] {
            let ht: i64 = c.iter().sum();
            let positive = c.iter().all(|&x| x >= 0);
            let zero = c.iter().all(|&x| x == 0);
            if zero {
                continue;
            }
            if deg == 0 && !positive || deg == n && positive {
                continue;
            }
            let pairing = deg as i64 - n as i64 * ht;
            if pairing == 0 {
                return Err(Error::Consistency(format!("affine root {c:?} + {deg}δ pairs to zero with ρ_N")));
            }
            roots.push(AffineRoot {
                weight: to_fundamental(cartan, c),
                root: c.clone(),
                n: deg as i64,
                pairing,
            });
        }
    }
    Ok(AffineRootSetN {
        level: n as i64,
        k,
        roots,
        cartan: cartan.to_vec(),
    })
}

/// `(weight shift, q-power)` of each factor `1 - q^n e^{-α}`.
fn factors(s: &AffineRootSetN) -> Vec<(Vec<i64>, i64)> {
    s.roots.iter().map(|r| (r.weight.iter().map(|x| -x).collect(), r.n)).collect()
}

/// `[e^0] Π (1 - q^{n_i} e^{w_i})`, discarding monomials whose weight can no
/// longer return to zero when `prune` is set.
pub fn constant_term_of_product(rank: usize, factors: &[(Vec<i64>, i64)], prune: bool, cap: usize) -> Result<LaurentQ> {
    // reach[i] = coordinatewise (min, max) total shift of factors i..
    let mut reach = vec![(vec![0i64; rank], vec![0i64; rank]); factors.len() + 1];
    for i in (0..factors.len()).rev() {
        let (mut lo, mut hi) = reach[i + 1].clone();
        for (j, &x) in factors[i].0.iter().enumerate() {
            lo[j] += x.min(0);
            hi[j] += x.max(0);
        }
        reach[i] = (lo, hi);
    }
    let mut acc = WeightQPoly::one(rank);
    for (i, (shift, n)) in factors.iter().enumerate() {
        let (lo, hi) = &reach[i + 1];
        acc = acc.mul_binomial(shift, *n, |w| {
            !prune || w.iter().enumerate().all(|(j, &x)| x + lo[j] <= 0 && x + hi[j] >= 0)
        });
        if acc.len() > cap {
            return Err(Error::CapExceeded {
                what: "product size",
                cap,
                detail: format!("after {} of {} factors", i + 1, factors.len()),
            });
        }
    }
    Ok(acc.constant_term())
}

/// `[e^0] Π_{α∈S_N} (1 - e^{-α})`.
pub fn lhs_constant_term(s: &AffineRootSetN, cap: usize) -> Result<LaurentQ> {
    constant_term_of_product(s.rank(), &factors(s), true, cap)
}

/// The same expansion without pruning.
pub fn lhs_constant_term_reference(s: &AffineRootSetN, cap: usize) -> Result<LaurentQ> {
    constant_term_of_product(s.rank(), &factors(s), false, cap)
}

/// `Π_{α∈S_N} (1 - q^{|α(ρ_N)|})^{ε(α)}`.
pub fn rhs_theorem_form(s: &AffineRootSetN) -> Result<QRational> {
    let mut r = QRational::one();
    for root in &s.roots {
        if root.pairing == 0 {
            return Err(Error::InvalidArgument(format!("root {:?} + {}δ has zero ρ_N pairing", root.root, root.n)));
        }
        r.mul_one_minus(root.pairing.unsigned_abs(), root.sign());
    }
    Ok(r)
}

/// `Π_a Π_i binom(N(m_i^{(a)}+1), N)_{k,a}`.
pub fn rhs_binomial_form(twisted: &[Vec<usize>], n: usize, k: usize) -> Result<QRational> {
    if twisted.len() != k {
        return Err(Error::InvalidArgument(format!(
            "expected exponents for {k} eigenspaces, got {}",
            twisted.len()
        )));
    }
    let mut r = QRational::one();
    for (a, exps) in twisted.iter().enumerate() {
        for &m in exps {
            r = r.mul(&shifted_q_binomial((n * (m + 1)) as i64, n as i64, k as i64, a as i64)?);
        }
    }
    Ok(r)
}

/// `[e^0] Π_{α>0} Π_{i=1..N} (1 - q^{i-1} e^{-α})(1 - q^i e^α)`.
pub fn finite_macdonald_lhs(rs: &RootSystem, n: usize, cap: usize) -> Result<LaurentQ> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let mut fs = Vec::new();
    for beta in &rs.positive_roots {
        let w = rs.to_fundamental(beta);
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        for i in 1..=n as i64 {
            fs.push((neg.clone(), i - 1));
            fs.push((w.clone(), i));
        }
    }
    constant_term_of_product(rs.rank(), &fs, true, cap)
}

/// `Π_i binom(N(m_i+1), N)_q`.
pub fn finite_macdonald_rhs(rs: &RootSystem, n: usize) -> Result<LaurentQ> {
    rs.exponents().iter().try_fold(LaurentQ::one(), |acc, &m| {
        Ok(&acc * &q_binomial((n * (m + 1)) as i64, n as i64)?)
    })
}

/// Both sides of the weighted Euler characteristic identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub from_cohomology: LaurentQ,
    pub from_constant_term: LaurentQ,
    pub equal: bool,
}

impl fmt::Display for EulerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi from cohomology: {}; chi from constant term: {}; {}",
            self.from_cohomology,
            self.from_constant_term,
            if self.equal { "equal" } else { "MISMATCH" }
        )
    }
}

/// Compares `χ` of a relative cohomology table with
/// `Π(1-q^{N(r_i+1)})^{-1} Π_{0<n≤N} (1-q^n)^{l_{n mod k}} · ct`.
/// For `b/z^N n` relative to `h_0` (`nilpotent`), the first product is
/// omitted.
pub fn euler_cross_check(
    relative: &CohomologyTable,
    twisted: &[Vec<usize>],
    g0: &[usize],
    n: usize,
    k: usize,
    constant_term: &LaurentQ,
    nilpotent: bool,
) -> Result<EulerReport> {
    if twisted.len() != k || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "inconsistent twist data: k = {k}, N = {n}, {} eigenspaces",
            twisted.len()
        )));
    }
    let mut pre = QRational::one();
    if !nilpotent {
        for &r in g0 {
            pre.mul_one_minus((n * (r + 1)) as u64, -1);
        }
    }
    for j in 1..=n {
        pre.mul_one_minus(j as u64, twisted[j % k].len() as i64);
    }
    let from_constant_term = pre.apply_to(constant_term)?;
    let from_cohomology = relative.weighted_euler();
    Ok(EulerReport {
        equal: from_cohomology == from_constant_term,
        from_cohomology,
        from_constant_term,
    })
}

/// Constant term and both closed forms for one configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantTermReport {
    pub lhs: LaurentQ,
    pub rhs_theorem: LaurentQ,
    pub rhs_binomial: LaurentQ,
    pub equal: bool,
}

pub fn affine_report<F: Field>(tw: &TwistedAlgebra<F>, n: usize, cap: usize) -> Result<ConstantTermReport> {
    let s = build_sn(tw, n)?;
    let lhs = lhs_constant_term(&s, cap)?;
    let rhs_theorem = rhs_theorem_form(&s)?.to_polynomial()?;
    let rhs_binomial = rhs_binomial_form(&tw.twisted_exponents()?, n, tw.k)?.to_polynomial()?;
    Ok(ConstantTermReport {
        equal: lhs == rhs_theorem && lhs == rhs_binomial,
        lhs,
        rhs_theorem,
        rhs_binomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::DiagramAutomorphism;
    use crate::rootdata::CartanType;
    use crate::Q;

    fn untwisted(t: &str) -> TwistedAlgebra<Q> {
        TwistedAlgebra::untwisted(CartanType::of(t)).unwrap()
    }

    fn swap_a2() -> TwistedAlgebra<Q> {
        let a = DiagramAutomorphism::standard(CartanType::of("A2")).unwrap();
        TwistedAlgebra::new(&a).unwrap()
    }

    fn lq(cs: &[i64]) -> LaurentQ {
        LaurentQ::from_coeffs(cs)
    }

    #[test]
    fn root_sets() {
        let s = build_sn(&untwisted("A1"), 2).unwrap();
        let mut got: Vec<(i64, i64)> = s.roots.iter().map(|r| (r.root[0], r.n)).collect();
        got.sort();
        assert_eq!(got, vec![(-1, 1), (-1, 2), (1, 0), (1, 1)]);
        assert_eq!(build_sn(&untwisted("A2"), 1).unwrap().roots.len(), 6);
        let t = build_sn(&swap_a2(), 2).unwrap();
        assert_eq!(t.roots.iter().filter(|r| r.n == 1).count(), 4);
        assert!(build_sn(&swap_a2(), 3).is_err());
    }

    #[test]
    fn affine_a1() {
        let tw = untwisted("A1");
        let s1 = build_sn(&tw, 1).unwrap();
        assert_eq!(lhs_constant_term(&s1, DEFAULT_PRODUCT_CAP).unwrap(), lq(&[1, 1]));
        assert_eq!(rhs_theorem_form(&s1).unwrap().to_polynomial().unwrap(), lq(&[1, 1]));
        let r = affine_report(&tw, 2, DEFAULT_PRODUCT_CAP).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, lq(&[1, 1, 2, 1, 1]));
    }

    #[test]
    fn affine_a2_twisted() {
        let r = affine_report(&swap_a2(), 2, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(r.lhs, lq(&[1, 1, 2, 2, 2, 1, 1]));
        assert!(r.equal);
        let b = rhs_binomial_form(&[vec![1], vec![2]], 2, 2).unwrap().to_polynomial().unwrap();
        assert_eq!(b, lq(&[1, 0, 1]) * lq(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn pruning_agrees_with_reference() {
        let s = build_sn(&untwisted("A2"), 2).unwrap();
        assert_eq!(
            lhs_constant_term(&s, DEFAULT_PRODUCT_CAP).unwrap(),
            lhs_constant_term_reference(&s, DEFAULT_PRODUCT_CAP).unwrap()
        );
    }

    #[test]
    fn reflection_invariance() {
        let s = build_sn(&untwisted("A2"), 1).unwrap();
        let base = lhs_constant_term(&s, DEFAULT_PRODUCT_CAP).unwrap();
        for i in 0..2 {
            assert_eq!(lhs_constant_term(&s.reflect(i), DEFAULT_PRODUCT_CAP).unwrap(), base);
        }
    }

    #[test]
    fn finite_identity() {
        let a1 = RootSystem::new(CartanType::of("A1"));
        assert_eq!(finite_macdonald_lhs(&a1, 1, DEFAULT_PRODUCT_CAP).unwrap(), lq(&[1, 1]));
        assert_eq!(finite_macdonald_lhs(&a1, 2, DEFAULT_PRODUCT_CAP).unwrap(), q_binomial(4, 2).unwrap());
        let a2 = RootSystem::new(CartanType::of("A2"));
        assert_eq!(finite_macdonald_lhs(&a2, 1, DEFAULT_PRODUCT_CAP).unwrap(), lq(&[1, 1]) * lq(&[1, 1, 1]));
        assert_eq!(finite_macdonald_rhs(&a2, 1).unwrap(), lq(&[1, 1]) * lq(&[1, 1, 1]));
        let s = build_sn(&untwisted("A2"), 1).unwrap();
        assert_eq!(
            lhs_constant_term(&s, DEFAULT_PRODUCT_CAP).unwrap(),
            finite_macdonald_lhs(&a2, 1, DEFAULT_PRODUCT_CAP).unwrap()
        );
        assert!(matches!(
            finite_macdonald_lhs(&a2, 3, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn euler_trivial_and_sl2() {
        let one = CohomologyTable::from_records(&[crate::qseries::TableRecord { coh: 0, z: 0, s: None, dim: 1 }]);
        let r = euler_cross_check(&one, &[vec![]], &[], 1, 1, &LaurentQ::one(), false).unwrap();
        assert!(r.equal);
        let table = CohomologyTable::from_records(&[
            crate::qseries::TableRecord { coh: 0, z: 0, s: None, dim: 1 },
            crate::qseries::TableRecord { coh: 3, z: 3, s: None, dim: 1 },
        ]);
        let r = euler_cross_check(&table, &[vec![1]], &[1], 2, 1, &lq(&[1, 1, 2, 1, 1]), false).unwrap();
        assert!(r.equal, "{r}");
        assert_eq!(r.from_constant_term, lq(&[1, 0, 0, -1]));
    }
}
