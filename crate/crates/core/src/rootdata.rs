//! Cartan matrices, positive roots, Weyl groups and exponents of the simple
//! types `A`–`G` (Bourbaki numbering).
//!
//! Cartan matrix convention: `a[i][j] = ⟨α_i^∨, α_j⟩`, so `[h_i, e_j] = a[i][j]·e_j`.
//! Roots are integer vectors in simple-root coordinates.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn bound(self) -> &'static str {
        match self {
            Series::A => "A requires rank >= 1",
            Series::B => "B requires rank >= 2",
            Series::C => "C requires rank >= 2",
            Series::D => "D requires rank >= 3",
            Series::E => "E requires rank 6, 7 or 8",
            Series::F => "F requires rank 4",
            Series::G => "G requires rank 2",
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Series::A | Series::D | Series::E)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(Error::InvalidCartanType(format!(
                "{}{}: {}",
                series.letter(),
                rank,
                series.bound()
            )))
        }
    }

    /// Shorthand for tests and examples; panics on invalid input.
    pub fn of(s: &str) -> Self {
        s.parse().expect("valid Cartan type")
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.series {
            Series::A | Series::B | Series::C => {
                for i in 0..n.saturating_sub(1) {
                    link(i, i + 1);
                }
            }
            Series::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            Series::E => {
                link(0, 2);
                link(2, 3);
                link(1, 3);
                for i in 3..n - 1 {
                    link(i, i + 1);
                }
            }
            Series::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Series::G => link(0, 1),
        }
        match self.series {
            // α_n short
            Series::B => a[n - 1][n - 2] = -2,
            // α_n long
            Series::C => a[n - 2][n - 1] = -2,
            // α_3 short, α_2 long
            Series::F => a[2][1] = -2,
            // α_1 short
            Series::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// Every valid type of the given rank, in catalogue order.
    pub fn all_of_rank(rank: usize) -> Vec<CartanType> {
        [
            Series::A,
            Series::C,
            Series::B,
            Series::D,
            Series::E,
            Series::F,
            Series::G,
        ]
        .into_iter()
        .filter_map(|s| CartanType::new(s, rank).ok())
        .collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or(Error::Parse {
            position: 0,
            message: "empty Cartan type".into(),
        })?;
        let series = match letter.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unknown series letter '{letter}'"),
                })
            }
        };
        let digits = &s[letter.len_utf8()..];
        let rank: usize = digits.parse().map_err(|_| Error::Parse {
            position: 1,
            message: format!("expected decimal rank, found '{digits}'"),
        })?;
        CartanType::new(series, rank)
    }
}

/// Positive roots with heights, for a (possibly reducible) Cartan matrix.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: Option<CartanType>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub heights: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(t: CartanType) -> Self {
        let mut rs = Self::from_cartan_matrix(t.cartan_matrix());
        rs.cartan_type = Some(t);
        rs
    }

    /// Closes the simple roots under root strings. Works for any finite-type
    /// Cartan matrix, including reducible ones and the empty matrix.
    pub fn from_cartan_matrix(a: Vec<Vec<i64>>) -> Self {
        let n = a.len();
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut layer: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        while !layer.is_empty() {
            // descending lex within a height, so simple roots come out as α_1..α_n
            layer.sort_by(|a, b| b.cmp(a));
            for r in &layer {
                seen.insert(r.clone());
            }
            roots.extend(layer.iter().cloned());
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p = largest r with beta - r·α_i a root
                    let mut p = 0i64;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if seen.contains(&probe) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..n).map(|j| beta[j] * a[i][j]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }
        let heights = roots.iter().map(|r| r.iter().sum::<i64>() as usize).collect();
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        RootSystem {
            cartan_type: None,
            cartan_matrix: a,
            positive_roots: roots,
            heights,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan_matrix.len()
    }

    /// The simple roots occupy indices `0..rank` in order.
    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.positive_roots[i]
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Index of a positive root, if `v` is one.
    pub fn positive_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        if self.index.contains_key(v) {
            return true;
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.index.contains_key(&neg)
    }

    /// `⟨β, α_i^∨⟩` for an arbitrary lattice vector β.
    pub fn coroot_pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.cartan_matrix[i][j]).sum()
    }

    /// Fundamental-weight coordinates `(⟨β, α_i^∨⟩)_i`.
    pub fn to_fundamental(&self, beta: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|i| self.coroot_pairing(beta, i)).collect()
    }

    pub fn max_height(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// Highest root (unique root of maximal height) for irreducible systems.
    pub fn highest_root(&self) -> Option<&[i64]> {
        self.positive_roots.last().map(|r| r.as_slice())
    }

    /// Exponents as the dual partition of the height distribution.
    pub fn exponents(&self) -> Vec<usize> {
        let h = self.max_height();
        let mut count = vec![0usize; h + 2];
        count[0] = self.rank();
        for &ht in &self.heights {
            count[ht] += 1;
        }
        let mut out = Vec::new();
        for m in 0..=h {
            let mult = count[m].saturating_sub(count[m + 1]);
            out.extend(std::iter::repeat_n(m, mult));
        }
        // zero exponents belong to a centre; there is none in a root system
        out.retain(|&m| m > 0);
        out
    }

    /// Root subsystem spanned by the simple roots in `subset`.
    pub fn sub_system(&self, subset: &[usize]) -> RootSystem {
        let a: Vec<Vec<i64>> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.cartan_matrix[i][j]).collect())
            .collect();
        RootSystem::from_cartan_matrix(a)
    }

    /// `|W|` by orbit–stabiliser recursion over fundamental weights; no
    /// enumeration of the whole group.
    pub fn weyl_order(&self) -> u128 {
        weyl_order_of(&self.cartan_matrix)
    }
}

fn weyl_order_of(a: &[Vec<i64>]) -> u128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let i = n - 1;
    // orbit of the fundamental weight ω_i, in fundamental coordinates
    let mut start = vec![0i64; n];
    start[i] = 1;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(lam) = queue.pop_front() {
        for j in 0..n {
            if lam[j] == 0 {
                continue;
            }
            // s_j(λ) = λ - λ_j α_j, α_j in fundamental coordinates is column j
            let next: Vec<i64> = (0..n).map(|k| lam[k] - lam[j] * a[j][k]).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let sub: Vec<Vec<i64>> = (0..i).map(|r| a[r][..i].to_vec()).collect();
    seen.len() as u128 * weyl_order_of(&sub)
}

pub fn build_root_system(t: CartanType) -> RootSystem {
    RootSystem::new(t)
}

pub fn exponents(rs: &RootSystem) -> Vec<usize> {
    rs.exponents()
}

pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

/// Weyl group as integer matrices acting on simple-root coordinates
/// (column vectors).
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<Vec<Vec<i64>>>,
    pub order: usize,
}

fn reflection_matrix(a: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let n = a.len();
    // s_i(β) = β - ⟨β, α_i^∨⟩ α_i: row i becomes e_i - a[i][·]
    let mut m = vec![vec![0i64; n]; n];
    for (r, row) in m.iter_mut().enumerate() {
        row[r] = 1;
    }
    for j in 0..n {
        m[i][j] -= a[i][j];
    }
    m
}

fn matmul(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = x.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if x[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += x[i][k] * y[k][j];
            }
        }
    }
    out
}

/// Breadth-first closure over the simple reflections.
pub fn weyl_group(rs: &RootSystem, cap: usize) -> Result<WeylGroup> {
    let n = rs.rank();
    let gens: Vec<_> = (0..n).map(|i| reflection_matrix(&rs.cartan_matrix, i)).collect();
    let id: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut elements = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let next = matmul(g, &w);
            if seen.insert(next.clone()) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "Weyl group order",
                        cap,
                        detail: rs
                            .cartan_type
                            .map(|t| t.to_string())
                            .unwrap_or_else(|| "custom Cartan matrix".into()),
                    });
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let order = elements.len();
    Ok(WeylGroup { elements, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_types() {
        assert_eq!(CartanType::of("a2").to_string(), "A2");
        assert_eq!(CartanType::of("E6").rank, 6);
        let err = "B1".parse::<CartanType>().unwrap_err();
        assert!(err.to_string().contains("B requires rank >= 2"));
        assert!("E9".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
        assert!("A".parse::<CartanType>().is_err());
    }

    #[test]
    fn small_root_systems() {
        let a2 = RootSystem::new(CartanType::of("A2"));
        assert_eq!(a2.num_positive(), 3);
        assert_eq!(a2.heights, vec![1, 1, 2]);
        let b2 = RootSystem::new(CartanType::of("B2"));
        assert_eq!(b2.num_positive(), 4);
        assert_eq!(b2.max_height(), 3);
        let g2 = RootSystem::new(CartanType::of("G2"));
        assert_eq!(g2.num_positive(), 6);
        assert_eq!(g2.max_height(), 5);
    }

    #[test]
    fn ordering_is_height_then_lex() {
        let rs = RootSystem::new(CartanType::of("D4"));
        for w in rs.positive_roots.windows(2) {
            let h0: i64 = w[0].iter().sum();
            let h1: i64 = w[1].iter().sum();
            assert!(h0 < h1 || (h0 == h1 && w[0] > w[1]));
        }
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(RootSystem::new(CartanType::of("A2")).exponents(), vec![1, 2]);
        assert_eq!(RootSystem::new(CartanType::of("C2")).exponents(), vec![1, 3]);
        assert_eq!(RootSystem::new(CartanType::of("G2")).exponents(), vec![1, 5]);
        assert_eq!(
            RootSystem::new(CartanType::of("E8")).exponents(),
            vec![1, 7, 11, 13, 17, 19, 23, 29]
        );
    }

    #[test]
    fn weyl_orders() {
        for (t, n) in [("A2", 6), ("B2", 8), ("G2", 12)] {
            let rs = RootSystem::new(CartanType::of(t));
            assert_eq!(weyl_group(&rs, DEFAULT_WEYL_CAP).unwrap().order, n);
            assert_eq!(rs.weyl_order(), n as u128);
        }
        let e8 = RootSystem::new(CartanType::of("E8"));
        assert_eq!(e8.weyl_order(), 696_729_600);
        assert!(matches!(
            weyl_group(&e8, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn root_system_invariants_all_types() {
        for t in all_small_types() {
            let rs = RootSystem::new(t);
            let a = &rs.cartan_matrix;
            for i in 0..rs.rank() {
                assert_eq!(a[i][i], 2);
                for j in 0..rs.rank() {
                    if i != j {
                        assert!(a[i][j] <= 0);
                    }
                }
            }
            assert_eq!(rs.heights.iter().filter(|&&h| h == 1).count(), rs.rank());
            for (r, h) in rs.positive_roots.iter().zip(&rs.heights) {
                assert_eq!(r.iter().sum::<i64>() as usize, *h);
                if *h > 1 {
                    let reachable = (0..rs.rank()).any(|i| {
                        let mut d = r.clone();
                        d[i] -= 1;
                        rs.positive_index(&d).is_some()
                    });
                    assert!(reachable, "{t}: {r:?}");
                }
            }
            let ex = rs.exponents();
            assert_eq!(ex.len(), rs.rank());
            assert_eq!(ex.iter().sum::<usize>(), rs.num_positive());
            let prod: u128 = ex.iter().map(|&m| m as u128 + 1).product();
            assert_eq!(rs.weyl_order(), prod, "{t}");
            // weakly decreasing height distribution
            let mut counts = vec![0usize; rs.max_height() + 1];
            for &h in &rs.heights {
                counts[h] += 1;
            }
            for w in counts[1..].windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    fn all_small_types() -> Vec<CartanType> {
        let mut v = Vec::new();
        for r in 1..=6 {
            v.push(CartanType::new(Series::A, r).unwrap());
        }
        for r in 2..=5 {
            v.push(CartanType::new(Series::B, r).unwrap());
            v.push(CartanType::new(Series::C, r).unwrap());
        }
        for r in 3..=6 {
            v.push(CartanType::new(Series::D, r).unwrap());
        }
        for s in ["E6", "E7", "E8", "F4", "G2"] {
            v.push(CartanType::of(s));
        }
        v
    }
}
