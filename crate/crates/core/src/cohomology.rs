//! Chevalley–Eilenberg complexes of [`GradedLie`] algebras with trivial or
//! symmetric-power coefficients, absolute or relative to `g_0`.
//!
//! A cochain monomial is `x^I ⊗ y^{j_1}⋯y^{j_s}`: an exterior part stored as
//! a bitmask over the basis and a sorted multiset of symmetric factors, all
//! in the dual basis. The differential preserves z-degree (for graded
//! algebras), `h_0`-weight and symmetric degree, so every rank is computed
//! on one slice at a time.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{Derivation, GradedLie, TraceForm};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::qseries::{BiPoly, LaurentQ, TableRecord};
use crate::scalar::Field;

pub const DEFAULT_SLICE_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub ext: u64,
    pub sym: Vec<u16>,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.ext.count_ones() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Trivial,
    /// `S^p` of the dual of the whole algebra.
    SymmetricPower(usize),
}

impl Coefficients {
    fn s(&self) -> usize {
        match self {
            Coefficients::Trivial => 0,
            Coefficients::SymmetricPower(p) => *p,
        }
    }
}

/// Which `h_0`-weight slices to compute for absolute complexes. Cohomology
/// of an algebra containing `h_0` is concentrated in weight zero, so
/// `ZeroOnly` is exact there; relative complexes always use weight zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightMode {
    #[default]
    All,
    ZeroOnly,
}

#[derive(Clone, Debug)]
pub struct Bounds {
    pub z_max: Option<i64>,
    pub slice_cap: usize,
    pub weights: WeightMode,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            z_max: None,
            slice_cap: DEFAULT_SLICE_CAP,
            weights: WeightMode::All,
        }
    }
}

/// Grading data shared by every monomial of a slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceKey {
    pub z: i64,
    pub weight: Vec<i64>,
    pub s: usize,
}

impl fmt::Display for SliceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weight.iter().map(|x| x.to_string()).collect();
        write!(f, "z={} weight=({}) s={}", self.z, w.join(","), self.s)
    }
}

/// The Koszul complex of a graded algebra; slices are built on demand.
pub struct KoszulComplex<'a, F> {
    pub algebra: &'a GradedLie<F>,
    pub coefficients: Coefficients,
    pub relative: bool,
    /// `d x^j = Σ c x^a ∧ x^b` over `a < b`.
    dx: Vec<Vec<(usize, usize, F)>>,
    /// `x_k · y^j = Σ c y^m`, indexed `[k][j]`.
    coad: Vec<Vec<Vec<(usize, F)>>>,
    g0_mask: u64,
}

pub fn build_complex<F: Field>(
    g: &GradedLie<F>,
    coefficients: Coefficients,
    relative: bool,
) -> Result<KoszulComplex<'_, F>> {
    let n = g.dim();
    if n > 64 {
        return Err(Error::Unsupported(format!(
            "exterior monomials are 64-bit masks; algebra has dimension {n}"
        )));
    }
    if relative {
        g.check_tags()?;
        for &a in &g.g0 {
            for &b in &g.g0 {
                if g.lie.bracket_basis(a, b).iter().any(|(t, _)| !g.is_g0(*t)) {
                    return Err(Error::InvalidArgument("g_0 marker is not a subalgebra".into()));
                }
            }
        }
    }
    let mut dx: Vec<Vec<(usize, usize, F)>> = vec![Vec::new(); n];
    let mut coad: Vec<Vec<Vec<(usize, F)>>> = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            for (j, c) in g.lie.bracket_basis(a, b) {
                if a < b {
                    dx[*j].push((a, b, -c.clone()));
                }
                coad[a][*j].push((b, -c.clone()));
            }
        }
    }
    let g0_mask = g.g0.iter().fold(0u64, |m, &i| m | (1 << i));
    Ok(KoszulComplex {
        algebra: g,
        coefficients,
        relative,
        dx,
        coad,
        g0_mask,
    })
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Number of set bits of `mask` strictly below `i`.
fn below(mask: u64, i: usize) -> u32 {
    (mask & ((1u64 << i) - 1)).count_ones()
}

fn sign<F: Field>(odd: bool) -> F {
    if odd {
        -F::one()
    } else {
        F::one()
    }
}

/// Partial table of cochain or cohomology dimensions.
type Dims = BTreeMap<(usize, i64, usize), usize>;

impl<'a, F: Field> KoszulComplex<'a, F> {
    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn key_of(&self, m: &Monomial) -> SliceKey {
        let g = self.algebra;
        let l = g.basis.first().map_or(0, |b| b.weight.len());
        let mut z = 0i64;
        let mut weight = vec![0i64; l];
        for i in bits(m.ext).chain(m.sym.iter().map(|&j| j as usize)) {
            z += g.basis[i].z as i64;
            for (w, x) in weight.iter_mut().zip(&g.basis[i].weight) {
                *w += x;
            }
        }
        SliceKey {
            z: if g.z_graded { z } else { 0 },
            weight,
            s: m.sym.len(),
        }
    }

    /// `d` of one monomial.
    pub fn differential(&self, m: &Monomial) -> Vec<(Monomial, F)> {
        let mut out: HashMap<Monomial, F> = HashMap::new();
        let mut push = |mono: Monomial, c: F| {
            let e = out.entry(mono).or_insert_with(F::zero);
            *e += c;
        };
        for (pos, k) in bits(m.ext).enumerate() {
            let rest = m.ext & !(1 << k);
            for (a, b, c) in &self.dx[k] {
                if rest & (1 << a) != 0 || rest & (1 << b) != 0 {
                    continue;
                }
                let odd = (pos as u32 + below(rest, *a) + below(rest, *b)) % 2 == 1;
                push(
                    Monomial {
                        ext: rest | (1 << a) | (1 << b),
                        sym: m.sym.clone(),
                    },
                    sign::<F>(odd) * c.clone(),
                );
            }
        }
        if !m.sym.is_empty() {
            for k in 0..self.dim() {
                if m.ext & (1 << k) != 0 {
                    continue;
                }
                let s = sign::<F>(below(m.ext, k) % 2 == 1);
                let ext = m.ext | (1 << k);
                for r in 0..m.sym.len() {
                    if r > 0 && m.sym[r] == m.sym[r - 1] {
                        // same factor again: its contribution is counted with multiplicity below
                        continue;
                    }
                    let mult = m.sym.iter().filter(|&&x| x == m.sym[r]).count() as i64;
                    for (t, c) in &self.coad[k][m.sym[r] as usize] {
                        let mut sym = m.sym.clone();
                        sym[r] = *t as u16;
                        sym.sort_unstable();
                        push(Monomial { ext, sym }, s.clone() * c.clone() * F::from_i64(mult));
                    }
                }
            }
        }
        let mut v: Vec<(Monomial, F)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Coadjoint action of the basis vector `x_k` on a cochain monomial.
    fn act(&self, k: usize, m: &Monomial) -> Vec<(Monomial, F)> {
        let mut out: Vec<(Monomial, F)> = Vec::new();
        for (pos, j) in bits(m.ext).enumerate() {
            let rest = m.ext & !(1 << j);
            for (t, c) in &self.coad[k][j] {
                if rest & (1 << t) != 0 {
                    continue;
                }
                // x^{t} replaces x^{j} in place, then moves to sorted position
                let odd = (pos as u32 + below(rest, *t)) % 2 == 1;
                out.push((
                    Monomial {
                        ext: rest | (1 << t),
                        sym: m.sym.clone(),
                    },
                    sign::<F>(odd) * c.clone(),
                ));
            }
        }
        for r in 0..m.sym.len() {
            for (t, c) in &self.coad[k][m.sym[r] as usize] {
                let mut sym = m.sym.clone();
                sym[r] = *t as u16;
                sym.sort_unstable();
                out.push((Monomial { ext: m.ext, sym }, c.clone()));
            }
        }
        out
    }

    /// Monomials grouped by slice, within the bounds.
    fn enumerate(&self, bounds: &Bounds) -> Result<BTreeMap<SliceKey, Vec<Monomial>>> {
        let g = self.algebra;
        let n = self.dim();
        let z_of = |i: usize| g.basis[i].z as i64;
        let zcap = if g.z_graded { bounds.z_max } else { None };
        let fits = |z: i64| zcap.is_none_or(|c| z <= c);
        let allowed: Vec<usize> = (0..n).filter(|&i| !(self.relative && g.is_g0(i))).collect();
        let mut exts: Vec<(u64, i64)> = vec![(0, 0)];
        for &i in &allowed {
            let add: Vec<(u64, i64)> = exts
                .iter()
                .filter(|(_, z)| fits(z + z_of(i)))
                .map(|(m, z)| (m | (1 << i), z + z_of(i)))
                .collect();
            exts.extend(add);
        }
        let p = self.coefficients.s();
        let mut syms: Vec<(Vec<u16>, i64)> = vec![(Vec::new(), 0)];
        for _ in 0..p {
            let mut next = Vec::new();
            for (s, z) in &syms {
                let from = s.last().map_or(0, |&x| x as usize);
                for i in from..n {
                    if fits(z + z_of(i)) {
                        let mut t = s.clone();
                        t.push(i as u16);
                        next.push((t, z + z_of(i)));
                    }
                }
            }
            syms = next;
        }
        let only_zero = self.relative || bounds.weights == WeightMode::ZeroOnly;
        let mut out: BTreeMap<SliceKey, Vec<Monomial>> = BTreeMap::new();
        for (e, ze) in &exts {
            for (s, zs) in &syms {
                if !fits(ze + zs) {
                    continue;
                }
                let m = Monomial {
                    ext: *e,
                    sym: s.clone(),
                };
                let key = self.key_of(&m);
                if only_zero && key.weight.iter().any(|&w| w != 0) {
                    continue;
                }
                out.entry(key).or_default().push(m);
            }
        }
        for (key, monos) in out.iter_mut() {
            if monos.len() > bounds.slice_cap {
                return Err(Error::CapExceeded {
                    what: "slice dimension",
                    cap: bounds.slice_cap,
                    detail: key.to_string(),
                });
            }
            monos.sort_by(|a, b| (a.degree(), a).cmp(&(b.degree(), b)));
        }
        Ok(out)
    }

    /// Cochain and cohomology dimensions of one slice, keyed by degree.
    fn slice_dims(&self, key: &SliceKey, monos: &[Monomial]) -> Result<(Dims, Dims)> {
        let mut index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        // relative complexes: terms touching g_0 get indices past the slice
        // and must cancel on invariant cochains
        let mut d_of: Vec<SparseVec<F>> = Vec::with_capacity(monos.len());
        for m in monos {
            let mut terms = Vec::new();
            for (t, c) in self.differential(m) {
                let i = match index.get(&t) {
                    Some(&i) => i,
                    None if self.relative && t.ext & self.g0_mask != 0 => {
                        let i = index.len();
                        index.insert(t, i);
                        i
                    }
                    None => return Err(Error::Consistency(format!("differential leaves slice {key}"))),
                };
                terms.push((i, c));
            }
            d_of.push(linalg::collect_sparse(terms));
        }
        let apply = |v: &SparseVec<F>| -> SparseVec<F> {
            let mut out = Vec::new();
            for (i, c) in v {
                out = linalg::axpy(&out, c, &d_of[*i]);
            }
            out
        };
        let max_deg = monos.iter().map(|m| m.degree()).max().unwrap_or(0);
        let mut cochains: Vec<Vec<SparseVec<F>>> = Vec::new();
        for p in 0..=max_deg {
            let cols: Vec<usize> = (0..monos.len()).filter(|&i| monos[i].degree() == p).collect();
            let basis = if self.relative {
                self.invariants(monos, &cols)
            } else {
                cols.iter().map(|&i| vec![(i, F::one())]).collect()
            };
            cochains.push(basis);
        }
        let mut ranks = vec![0usize; max_deg + 2];
        for (p, basis) in cochains.iter().enumerate() {
            let mut images = Vec::with_capacity(basis.len());
            for v in basis {
                let dv = apply(v);
                if dv.iter().any(|(i, _)| *i >= monos.len()) {
                    return Err(Error::Consistency(format!("relative differential meets g_0 in {key}")));
                }
                if !apply(&dv).is_empty() {
                    return Err(Error::Consistency(format!("d^2 != 0 in degree {p} of slice {key}")));
                }
                images.push(dv);
            }
            ranks[p] = linalg::rank(images);
        }
        let mut chains = Dims::new();
        let mut coh = Dims::new();
        for (p, basis) in cochains.iter().enumerate() {
            let prev = if p == 0 { 0 } else { ranks[p - 1] };
            let h = basis.len() - ranks[p] - prev;
            if !basis.is_empty() {
                chains.insert((p, key.z, key.s), basis.len());
            }
            if h > 0 {
                coh.insert((p, key.z, key.s), h);
            }
        }
        Ok((chains, coh))
    }

    /// Joint kernel of the `g_0` coadjoint operators on the columns `cols`.
    fn invariants(&self, monos: &[Monomial], cols: &[usize]) -> Vec<SparseVec<F>> {
        let mut rows: HashMap<(usize, Monomial), SparseVec<F>> = HashMap::new();
        for (c, &i) in cols.iter().enumerate() {
            for &x in &self.algebra.g0 {
                for (t, v) in self.act(x, &monos[i]) {
                    rows.entry((x, t)).or_default().push((c, v));
                }
            }
        }
        let mut rows: Vec<((usize, Monomial), SparseVec<F>)> = rows.into_iter().collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let rows: Vec<SparseVec<F>> = rows
            .into_iter()
            .map(|(_, r)| linalg::collect_sparse(r))
            .filter(|r| !r.is_empty())
            .collect();
        linalg::kernel(&rows, cols.len())
            .into_iter()
            .map(|v| v.into_iter().map(|(c, x)| (cols[c], x)).collect())
            .collect()
    }

    /// Cochain and cohomology tables over all slices within the bounds.
    pub fn compute(&self, bounds: &Bounds) -> Result<ComplexDims> {
        let slices = self.enumerate(bounds)?;
        let with_s = matches!(self.coefficients, Coefficients::SymmetricPower(_));
        let parts: Vec<(Dims, Dims)> = slices
            .par_iter()
            .map(|(k, m)| self.slice_dims(k, m))
            .collect::<Result<Vec<_>>>()?;
        let mut chains = CohomologyTable { entries: BTreeMap::new(), with_s };
        let mut coh = chains.clone();
        for (c, h) in parts {
            for (k, v) in c {
                *chains.entries.entry(k).or_insert(0) += v;
            }
            for (k, v) in h {
                *coh.entries.entry(k).or_insert(0) += v;
            }
        }
        if self.algebra.dim() == 0 {
            coh.entries.insert((0, 0, 0), 1);
            chains.entries.insert((0, 0, 0), 1);
        }
        Ok(ComplexDims {
            chains,
            cohomology: coh,
        })
    }
}

/// Bigraded dimension table keyed by `(cohomological degree, z, s)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    pub entries: BTreeMap<(usize, i64, usize), usize>,
    /// Whether the `s` column is meaningful.
    pub with_s: bool,
}

impl CohomologyTable {
    pub fn get(&self, coh: usize, z: i64) -> usize {
        self.entries.iter().filter(|((c, zz, _), _)| *c == coh && *zz == z).map(|(_, v)| v).sum()
    }

    pub fn get_s(&self, coh: usize, z: i64, s: usize) -> usize {
        self.entries.get(&(coh, z, s)).copied().unwrap_or(0)
    }

    /// `Σ dim t^coh q^z`, summed over `s`.
    pub fn to_bipoly(&self) -> BiPoly {
        let mut p = BiPoly::default();
        for ((c, z, _), v) in &self.entries {
            p.add_term(*c as i64, *z, BigInt::from(*v));
        }
        p
    }

    /// `Σ (-1)^coh dim q^z`.
    pub fn weighted_euler(&self) -> LaurentQ {
        self.to_bipoly().at_t(-1)
    }

    /// Dimensions by cohomological degree, forgetting `z` and `s`.
    pub fn forget_z(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for ((c, _, _), v) in &self.entries {
            *out.entry(*c).or_insert(0) += v;
        }
        out
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn to_records(&self) -> Vec<TableRecord> {
        self.entries
            .iter()
            .map(|((c, z, s), v)| TableRecord {
                coh: *c as i64,
                z: *z,
                s: self.with_s.then_some(*s as i64),
                dim: *v as i64,
            })
            .collect()
    }

    pub fn from_records(records: &[TableRecord]) -> Self {
        let mut t = CohomologyTable::default();
        for r in records {
            t.with_s |= r.s.is_some();
            *t.entries.entry((r.coh as usize, r.z, r.s.unwrap_or(0) as usize)).or_insert(0) += r.dim as usize;
        }
        t
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bipoly())
    }
}

impl Serialize for CohomologyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CohomologyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(CohomologyTable::from_records(&Vec::<TableRecord>::deserialize(d)?))
    }
}

#[derive(Clone, Debug)]
pub struct ComplexDims {
    pub chains: CohomologyTable,
    pub cohomology: CohomologyTable,
}

pub fn cohomology_dims<F: Field>(c: &KoszulComplex<'_, F>, bounds: &Bounds) -> Result<CohomologyTable> {
    Ok(c.compute(bounds)?.cohomology)
}

pub fn relative_cohomology_dims<F: Field>(c: &KoszulComplex<'_, F>, bounds: &Bounds) -> Result<CohomologyTable> {
    if !c.relative {
        return Err(Error::InvalidArgument("complex was not built relative to g_0".into()));
    }
    cohomology_dims(c, bounds)
}

/// `χ = Σ (-1)^i dim C^i_n q^n`.
pub fn weighted_euler(table: &CohomologyTable) -> LaurentQ {
    table.weighted_euler()
}

/// Relative cohomology with coefficients in `S^p` of the dual, for z-degree
/// at most `d`. The truncation level of `g` must exceed `d` so that the
/// slice agrees with that of the untruncated parahoric.
pub fn superpoly_slice_dims<F: Field>(g: &GradedLie<F>, p: usize, d: i64) -> Result<CohomologyTable> {
    if let Some(n) = g.truncation {
        if n as i64 <= d {
            return Err(Error::InvalidArgument(format!(
                "truncation level N = {n} must exceed the z-bound {d}: only then does the slice agree with the untruncated dual"
            )));
        }
    }
    let c = build_complex(g, Coefficients::SymmetricPower(p), true)?;
    let bounds = Bounds {
        z_max: Some(d),
        ..Bounds::default()
    };
    cohomology_dims(&c, &bounds)
}

/// A homogeneous cochain: `terms` all lie in the slice `key`, in degree
/// `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<F> {
    pub degree: usize,
    pub key: SliceKey,
    pub terms: Vec<(Monomial, F)>,
}

impl<F: Field> Cochain<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `d x = 0`, after checking that `x` lies in one slice of `c`.
pub fn is_cocycle<F: Field>(c: &KoszulComplex<'_, F>, x: &Cochain<F>) -> Result<bool> {
    for (m, _) in &x.terms {
        if m.degree() != x.degree || c.key_of(m) != x.key {
            return Err(Error::SliceMismatch(format!(
                "monomial {m:?} is not in degree {} of slice {}",
                x.degree, x.key
            )));
        }
        if c.relative && m.ext & c.g0_mask != 0 {
            return Err(Error::SliceMismatch("cochain does not vanish on g_0".into()));
        }
        if m.sym.len() != c.coefficients.s() {
            return Err(Error::SliceMismatch(format!(
                "symmetric degree {} does not match the coefficients",
                m.sym.len()
            )));
        }
    }
    let mut acc: HashMap<Monomial, F> = HashMap::new();
    for (m, a) in &x.terms {
        for (t, v) in c.differential(m) {
            *acc.entry(t).or_insert_with(F::zero) += a.clone() * v;
        }
    }
    Ok(acc.values().all(|v| v.is_zero()))
}

/// `[z^n] tr(x(z)^d)` as a degree-0 cochain with coefficients in `S^d`.
pub fn coefficient_cochain<F: Field>(g: &GradedLie<F>, d: usize, n: i64) -> Result<Cochain<F>> {
    let matrices = g.matrices.clone().ok_or_else(|| {
        Error::Unsupported(format!("invariant trace forms need the defining representation ({})", g.descriptor))
    })?;
    if let Some(level) = g.truncation {
        if n >= level as i64 {
            return Err(Error::InvalidArgument(format!(
                "z-exponent {n} must be below the truncation level {level}"
            )));
        }
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("trace power {d} must be at least 2")));
    }
    let form = TraceForm { degree: d, matrices };
    let poly = form.polynomial();
    let l = g.basis.first().map_or(0, |b| b.weight.len());
    let terms: Vec<(Monomial, F)> = poly
        .into_iter()
        .filter(|(idx, _)| idx.iter().map(|&i| g.basis[i].z as i64).sum::<i64>() == n)
        .map(|(idx, c)| {
            (
                Monomial {
                    ext: 0,
                    sym: idx.iter().map(|&i| i as u16).collect(),
                },
                c,
            )
        })
        .collect();
    Ok(Cochain {
        degree: 0,
        key: SliceKey {
            z: if g.z_graded { n } else { 0 },
            weight: vec![0; l],
            s: d,
        },
        terms,
    })
}

/// `x ⊗ s_1⋯s_{d-1} ↦ φ(Jx · s_1⋯s_{d-1})` for a degree-0 cochain `φ` in
/// `S^d` and a diagonal derivation `J` killing `g_0`.
pub fn j_twisted_cocycle<F: Field>(g: &GradedLie<F>, phi: &Cochain<F>, j: &Derivation) -> Result<Cochain<F>> {
    g.check_derivation(j)?;
    if phi.degree != 0 || phi.key.s == 0 {
        return Err(Error::InvalidArgument("φ must be a 0-cochain with symmetric coefficients".into()));
    }
    let d = phi.key.s;
    let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
    for (m, c) in &phi.terms {
        for r in 0..m.sym.len() {
            if r > 0 && m.sym[r] == m.sym[r - 1] {
                continue;
            }
            let k = m.sym[r] as usize;
            let lambda = g.derivation_eigenvalue(j, k);
            if lambda == 0 {
                continue;
            }
            // ∂/∂y_k of y^M, divided by d to match the symmetric form
            let mult = m.sym.iter().filter(|&&x| x as usize == k).count() as i64;
            let mut sym = m.sym.clone();
            sym.remove(r);
            let coeff = c.clone() * F::from_i64(mult * lambda) / F::from_i64(d as i64);
            let e = acc.entry(Monomial { ext: 1 << k, sym }).or_insert_with(F::zero);
            *e += coeff;
        }
    }
    Ok(Cochain {
        degree: 1,
        key: SliceKey {
            s: d - 1,
            ..phi.key.clone()
        },
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_iwahori_nilpotent_quotient, build_truncated, TwistedAlgebra};
    use crate::lie::LieAlgebra;
    use crate::rootdata::CartanType;
    use crate::Q;

    fn sl2_tw() -> TwistedAlgebra<Q> {
        TwistedAlgebra::untwisted(CartanType::of("A1")).unwrap()
    }

    fn bp(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn sl2_absolute() {
        let g = build_truncated(&sl2_tw(), &[0], 1).unwrap();
        let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
        let dims = c.compute(&Bounds::default()).unwrap();
        assert_eq!(dims.chains.forget_z().into_values().collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert_eq!(dims.cohomology.to_bipoly(), bp("1 + t^3"));
        assert!(dims.cohomology.weighted_euler().is_zero());
    }

    #[test]
    fn sl2_truncated_n2() {
        let g = build_truncated(&sl2_tw(), &[0], 2).unwrap();
        let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
        let dims = c.compute(&Bounds::default()).unwrap();
        assert_eq!(dims.chains.total(), 64);
        assert_eq!(dims.cohomology.to_bipoly(), bp("1 + t^3 + q^3*t^3 + q^3*t^6"));
        assert_eq!(dims.chains.weighted_euler(), dims.cohomology.weighted_euler());
        let rel = build_complex(&g, Coefficients::Trivial, true).unwrap();
        let r = relative_cohomology_dims(&rel, &Bounds::default()).unwrap();
        assert_eq!(r.to_bipoly(), bp("1 + q^3*t^3"));
        assert_eq!(r.weighted_euler(), LaurentQ::one() - LaurentQ::monomial(1, 3));
    }

    #[test]
    fn iwahori_relative_is_coinvariant() {
        let g = build_truncated(&sl2_tw(), &[], 1).unwrap();
        let rel = build_complex(&g, Coefficients::Trivial, true).unwrap();
        let r = relative_cohomology_dims(&rel, &Bounds::default()).unwrap();
        assert_eq!(r.to_bipoly(), bp("1 + q*t^2"));
    }

    #[test]
    fn abelian_and_zero() {
        let lie: LieAlgebra<Q> = LieAlgebra::abelian(vec!["a".into(), "b".into()]);
        let g = GradedLie::from_parts(lie, vec![0, 0], vec![vec![], vec![]], vec![]).unwrap();
        let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
        assert_eq!(cohomology_dims(&c, &Bounds::default()).unwrap().forget_z().into_values().collect::<Vec<_>>(), vec![1, 2, 1]);
        let lie1: LieAlgebra<Q> = LieAlgebra::abelian(vec!["a".into()]);
        let g1 = GradedLie::from_parts(lie1, vec![1], vec![vec![]], vec![]).unwrap();
        let t = superpoly_slice_dims(&g1, 2, 5).unwrap();
        assert_eq!(t.get_s(0, 2, 2), 1);
        assert_eq!(t.get_s(1, 3, 2), 1);
        let empty: LieAlgebra<Q> = LieAlgebra::abelian(vec![]);
        let g0 = GradedLie::from_parts(empty, vec![], vec![], vec![]).unwrap();
        let c0 = build_complex(&g0, Coefficients::Trivial, false).unwrap();
        assert_eq!(cohomology_dims(&c0, &Bounds::default()).unwrap().to_bipoly(), BiPoly::one());
    }

    #[test]
    fn nilpotent_sl2() {
        let g = build_iwahori_nilpotent_quotient(&sl2_tw(), 1).unwrap();
        let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
        let t = cohomology_dims(&c, &Bounds::default()).unwrap();
        assert_eq!(t.to_bipoly(), bp("1 + t").mul(&bp("1 + q^2*t^3")));
    }

    #[test]
    fn cocycles() {
        let g = build_truncated(&sl2_tw(), &[0], 2).unwrap();
        let phi = coefficient_cochain(&g, 2, 1).unwrap();
        assert!(!phi.is_zero());
        let c2 = build_complex(&g, Coefficients::SymmetricPower(2), false).unwrap();
        assert!(is_cocycle(&c2, &phi).unwrap());
        let psi = j_twisted_cocycle(&g, &phi, &Derivation::ZScaling).unwrap();
        assert!(!psi.is_zero());
        let c1 = build_complex(&g, Coefficients::SymmetricPower(1), false).unwrap();
        assert!(is_cocycle(&c1, &psi).unwrap());
        let mut bad = psi.clone();
        bad.terms[0].1 += Q::from_i64(1);
        assert!(!is_cocycle(&c1, &bad).unwrap());
        assert!(j_twisted_cocycle(&g, &phi, &Derivation::Zero).unwrap().is_zero());
        assert!(is_cocycle(&c2, &psi).is_err());
    }

    #[test]
    fn superpoly_rejects_short_truncation() {
        let g = build_truncated(&sl2_tw(), &[0], 2).unwrap();
        assert!(superpoly_slice_dims(&g, 1, 2).is_err());
    }
}
