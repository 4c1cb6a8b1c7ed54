//! Diagram automorphisms and folded root data.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rootdata::{CartanType, RootSystem, Series};
use crate::scalar::{rational, Field};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub base: CartanType,
    /// 0-based: simple root `i` goes to `perm[i]`.
    pub perm: Vec<usize>,
    pub order_k: usize,
}

impl DiagramAutomorphism {
    pub fn identity(base: CartanType) -> Self {
        DiagramAutomorphism {
            base,
            perm: (0..base.rank).collect(),
            order_k: 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.order_k == 1
    }

    /// The nontrivial automorphism conventionally attached to a type, if any:
    /// reversal for `A_n` (n ≥ 2), the end swap for `D_n`, `(1 6)(3 5)` for `E_6`.
    pub fn standard(base: CartanType) -> Option<Self> {
        let n = base.rank;
        let perm: Vec<usize> = match base.series {
            Series::A if n >= 2 => (0..n).rev().collect(),
            Series::D if n >= 4 => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                p
            }
            Series::E if n == 6 => vec![5, 1, 4, 3, 2, 0],
            _ => return None,
        };
        let rs = RootSystem::new(base);
        validate_automorphism(&rs, &perm).ok()
    }

    /// Triality `(1 3 4)` on `D_4`.
    pub fn triality() -> Self {
        let rs = RootSystem::new(CartanType::of("D4"));
        validate_automorphism(&rs, &[2, 1, 3, 0]).expect("triality preserves D4")
    }

    /// Cycle notation with 1-based indices, fixed points omitted.
    pub fn cycle_string(&self) -> String {
        let cycles = cycles_of(&self.perm);
        if cycles.is_empty() {
            return "id".into();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }
}

impl fmt::Display for DiagramAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.base, self.cycle_string())
    }
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] || perm[s] == s {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut i = perm[s];
        while i != s {
            seen[i] = true;
            c.push(i);
            i = perm[i];
        }
        out.push(c);
    }
    out
}

/// Parses a Cartan type and cycle notation, e.g. `("D4", "(1 3 4)")`.
pub fn parse_automorphism(cartan_type: &str, cycles: &str) -> Result<DiagramAutomorphism> {
    let t: CartanType = cartan_type.parse()?;
    let perm = parse_cycles(cycles, t.rank)?;
    validate_automorphism(&RootSystem::new(t), &perm)
}

/// Parses cycle notation such as `"(1 3 4)"`, `"(1 6)(3 5)"` or `"id"` into a
/// 0-based permutation of `0..n`.
pub fn parse_cycles(s: &str, n: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("id") || t == "()" {
        return Ok(perm);
    }
    let mut moved = BTreeSet::new();
    let bytes: Vec<char> = t.chars().collect();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if c != '(' {
            return Err(Error::Parse {
                position: pos,
                message: format!("expected '(' but found '{c}'"),
            });
        }
        let close = bytes[pos..]
            .iter()
            .position(|&x| x == ')')
            .map(|p| p + pos)
            .ok_or(Error::Parse {
                position: pos,
                message: "unterminated cycle".into(),
            })?;
        let body: String = bytes[pos + 1..close].iter().collect();
        let mut cycle = Vec::new();
        for tok in body.split(|ch: char| ch.is_whitespace() || ch == ',') {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                position: pos + 1,
                message: format!("bad node index '{tok}'"),
            })?;
            if v == 0 || v > n {
                return Err(Error::Parse {
                    position: pos + 1,
                    message: format!("node {v} out of range 1..={n}"),
                });
            }
            if !moved.insert(v - 1) {
                return Err(Error::Parse {
                    position: pos + 1,
                    message: format!("node {v} appears twice"),
                });
            }
            cycle.push(v - 1);
        }
        for w in 0..cycle.len() {
            perm[cycle[w]] = cycle[(w + 1) % cycle.len()];
        }
        pos = close + 1;
    }
    Ok(perm)
}

pub fn validate_automorphism(rs: &RootSystem, perm: &[usize]) -> Result<DiagramAutomorphism> {
    let n = rs.rank();
    let base = rs
        .cartan_type
        .ok_or_else(|| Error::InvalidAutomorphism("root system has no Cartan type".into()))?;
    if perm.len() != n {
        return Err(Error::InvalidAutomorphism(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let image: BTreeSet<usize> = perm.iter().copied().collect();
    if image.len() != n || perm.iter().any(|&p| p >= n) {
        return Err(Error::InvalidAutomorphism("not a bijection".into()));
    }
    let a = &rs.cartan_matrix;
    for i in 0..n {
        for j in 0..n {
            if a[perm[i]][perm[j]] != a[i][j] {
                return Err(Error::InvalidAutomorphism(format!(
                    "Cartan matrix not preserved at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut k = 1;
    let mut cur: Vec<usize> = perm.to_vec();
    while cur.iter().enumerate().any(|(i, &x)| i != x) {
        cur = cur.iter().map(|&x| perm[x]).collect();
        k += 1;
    }
    if k > 3 {
        return Err(Error::InvalidAutomorphism(format!("order {k} exceeds 3")));
    }
    Ok(DiagramAutomorphism {
        base,
        perm: perm.to_vec(),
        order_k: k,
    })
}

/// Orbits in order of minimal member, each listed ascending.
pub fn orbits(a: &DiagramAutomorphism) -> Vec<Vec<usize>> {
    let n = a.perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut o = vec![s];
        seen[s] = true;
        let mut i = a.perm[s];
        while i != s {
            seen[i] = true;
            o.push(i);
            i = a.perm[i];
        }
        o.sort_unstable();
        out.push(o);
    }
    out
}

pub fn orbit_labels(a: &DiagramAutomorphism) -> Vec<(Vec<usize>, usize)> {
    orbits(a).into_iter().map(|o| {
        let s = o.len();
        (o, s)
    }).collect()
}

#[derive(Clone, Debug)]
pub struct FoldedData {
    pub orbits: Vec<Vec<usize>>,
    pub folded_type: CartanType,
    /// `α_J = (1/|J|)·Σ_{i∈J} α_i` in base simple-root coordinates.
    pub folded_simple_roots: Vec<Vec<Q>>,
    /// `a'[J][K] = α_K(h_J)` with orbits in their own order.
    pub folded_cartan: Vec<Vec<i64>>,
    /// Coroot of orbit `J` is `coroot_scale[J] · Σ_{i∈J} h_i`.
    pub coroot_scale: Vec<i64>,
    /// Orbit index to Bourbaki node of `folded_type`.
    pub node_map: Vec<usize>,
    /// Conventional name of the folded type, e.g. `B1` for the fold of `A2`.
    pub label: String,
}

impl FoldedData {
    pub fn rank(&self) -> usize {
        self.orbits.len()
    }

    /// Orbit containing base node `i`.
    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbits.iter().position(|o| o.contains(&i)).expect("orbits partition")
    }
}

pub fn fold(rs: &RootSystem, a: &DiagramAutomorphism) -> Result<FoldedData> {
    let orbs = orbits(a);
    let cm = &rs.cartan_matrix;
    let n = rs.rank();
    let m = orbs.len();
    let mut scale = Vec::with_capacity(m);
    for o in &orbs {
        let s: i64 = o.iter().flat_map(|&i| o.iter().map(move |&j| cm[i][j])).sum();
        // c_J = 2|J| / Σ_{J×J} a
        let c = rational(2 * o.len() as i64, s);
        if !c.is_integer() {
            return Err(Error::Consistency(format!("non-integral coroot scale for orbit {o:?}")));
        }
        scale.push(c.to_integer().try_into().expect("small"));
    }
    let mut folded = vec![vec![0i64; m]; m];
    for (jj, oj) in orbs.iter().enumerate() {
        for (kk, ok) in orbs.iter().enumerate() {
            let s: i64 = oj.iter().flat_map(|&i| ok.iter().map(move |&k| cm[i][k])).sum();
            let v = rational(scale[jj] * s, ok.len() as i64);
            if !v.is_integer() {
                return Err(Error::Consistency(format!(
                    "non-integral folded Cartan entry at orbits ({jj}, {kk})"
                )));
            }
            folded[jj][kk] = v.to_integer().try_into().expect("small");
        }
    }
    let (folded_type, node_map) = recognize(&folded).ok_or_else(|| {
        Error::Consistency(format!("folded Cartan matrix {folded:?} matches no catalogue type"))
    })?;
    let label = if a.base.series == Series::A && a.base.rank.is_multiple_of(2) && a.order_k == 2 {
        format!("B{}", a.base.rank / 2)
    } else {
        folded_type.to_string()
    };
    let folded_simple_roots = orbs
        .iter()
        .map(|o| {
            let mut v = vec![Q::zero(); n];
            for &i in o {
                v[i] = Q::one() / Q::from_i64(o.len() as i64);
            }
            v
        })
        .collect();
    Ok(FoldedData {
        orbits: orbs,
        folded_type,
        folded_simple_roots,
        folded_cartan: folded,
        coroot_scale: scale,
        node_map,
        label,
    })
}

/// Matches a Cartan matrix against the catalogue of simple types of that rank.
/// An exact match (identity node map) wins; otherwise all node orderings are
/// tried. Returns the type and the map from input index to Bourbaki node.
pub fn recognize(a: &[Vec<i64>]) -> Option<(CartanType, Vec<usize>)> {
    let n = a.len();
    let catalogue = CartanType::all_of_rank(n);
    for t in &catalogue {
        if t.cartan_matrix() == a {
            return Some((*t, (0..n).collect()));
        }
    }
    for t in &catalogue {
        let target = t.cartan_matrix();
        if let Some(map) = find_isomorphism(a, &target) {
            return Some((*t, map));
        }
    }
    None
}

fn find_isomorphism(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = a.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let ok = (0..i).all(|j| a[i][j] == b[c][map[j]] && a[j][i] == b[map[j]][c]);
            if ok {
                map[i] = c;
                used[c] = true;
                if go(i + 1, a, b, map, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if go(0, a, b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(CartanType::of(s))
    }

    #[test]
    fn parse_and_print_cycles() {
        assert_eq!(parse_cycles("(1 3 4)", 4).unwrap(), vec![2, 1, 3, 0]);
        assert_eq!(parse_cycles("id", 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_cycles("(1 6)(3 5)", 6).unwrap(), vec![5, 1, 4, 3, 2, 0]);
        assert!(parse_cycles("(1 7)", 6).is_err());
        assert!(parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(parse_cycles("1 2", 3).is_err());
        assert_eq!(DiagramAutomorphism::triality().cycle_string(), "(1 3 4)");
    }

    #[test]
    fn validation() {
        let a3 = validate_automorphism(&rs("A3"), &[2, 1, 0]).unwrap();
        assert_eq!(a3.order_k, 2);
        let id = validate_automorphism(&rs("A2"), &[0, 1]).unwrap();
        assert_eq!(id.order_k, 1);
        let err = validate_automorphism(&rs("B2"), &[1, 0]).unwrap_err();
        assert!(err.to_string().contains("not preserved at"));
    }

    #[test]
    fn orbit_listing() {
        let a3 = DiagramAutomorphism::standard(CartanType::of("A3")).unwrap();
        assert_eq!(orbit_labels(&a3), vec![(vec![0, 2], 2), (vec![1], 1)]);
        let a2 = DiagramAutomorphism::standard(CartanType::of("A2")).unwrap();
        assert_eq!(orbit_labels(&a2), vec![(vec![0, 1], 2)]);
        let d4 = DiagramAutomorphism::triality();
        assert_eq!(orbit_labels(&d4), vec![(vec![0, 2, 3], 3), (vec![1], 1)]);
    }

    #[test]
    fn folded_types() {
        let cases = [
            ("A2", "A1", "B1"),
            ("A3", "C2", "C2"),
            ("A4", "B2", "B2"),
            ("A5", "C3", "C3"),
            ("A6", "B3", "B3"),
            ("D4", "B3", "B3"),
            ("D5", "B4", "B4"),
            ("E6", "F4", "F4"),
        ];
        for (base, ty, label) in cases {
            let t = CartanType::of(base);
            let a = DiagramAutomorphism::standard(t).unwrap();
            let f = fold(&rs(base), &a).unwrap();
            assert_eq!(f.folded_type.to_string(), ty, "{base}");
            assert_eq!(f.label, label);
            assert_eq!(f.rank(), f.folded_type.rank);
        }
        let g = fold(&rs("D4"), &DiagramAutomorphism::triality()).unwrap();
        assert_eq!(g.folded_type, CartanType::of("G2"));
        assert_eq!(g.node_map, vec![0, 1]);
    }

    #[test]
    fn identity_fold_is_base() {
        for s in ["A3", "B3", "G2", "F4", "E6"] {
            let r = rs(s);
            let f = fold(&r, &DiagramAutomorphism::identity(CartanType::of(s))).unwrap();
            assert_eq!(f.folded_type, CartanType::of(s));
            assert_eq!(f.folded_cartan, r.cartan_matrix);
        }
    }

    #[test]
    fn simple_root_averages() {
        let f = fold(&rs("A3"), &DiagramAutomorphism::standard(CartanType::of("A3")).unwrap()).unwrap();
        let half = rational(1, 2);
        assert_eq!(f.folded_simple_roots[0], vec![half.clone(), Q::zero(), half]);
    }
}
