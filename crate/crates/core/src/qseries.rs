//! Exact polynomials in `q` and `(t, q)`, cyclotomic reduction of products
//! of `(1 - q^a)^{±1}`, and the predicted Poincaré series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::RootSystem;

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentQ {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ::default()
    }

    pub fn one() -> Self {
        LaurentQ::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = LaurentQ::zero();
        p.add_term(e, c.into());
        p
    }

    /// `Σ c_i q^i` from a coefficient list starting at `q^0`.
    pub fn from_coeffs(cs: &[i64]) -> Self {
        let mut p = LaurentQ::zero();
        for (i, &c) in cs.iter().enumerate() {
            p.add_term(i as i64, BigInt::from(c));
        }
        p
    }

    /// `1 - q^a`.
    pub fn one_minus_q_pow(a: i64) -> Self {
        LaurentQ::one() - LaurentQ::monomial(1, a)
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Substitutes `q ↦ q^m`.
    pub fn dilate(&self, m: i64) -> Self {
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        }
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Exact division; errors when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentQ) -> Result<LaurentQ> {
        let (&dh, lc) = divisor
            .coeffs
            .iter()
            .next_back()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let dl = divisor.min_degree().unwrap();
        let floor = match self.min_degree() {
            Some(m) => m - dl,
            None => return Ok(LaurentQ::zero()),
        };
        let mut rem = self.clone();
        let mut quot = LaurentQ::zero();
        while let Some((&e, c)) = rem.coeffs.iter().next_back() {
            let shift = e - dh;
            let (qc, r) = c.div_rem(lc);
            if shift < floor || !r.is_zero() {
                return Err(Error::InexactDivision(format!("{self} is not divisible by {divisor}")));
            }
            for (de, dc) in &divisor.coeffs {
                rem.add_term(de + shift, -(dc * &qc));
            }
            quot.add_term(shift, qc);
        }
        Ok(quot)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(LaurentQ::one(), |acc, _| &acc * self)
    }
}

impl Add for LaurentQ {
    type Output = LaurentQ;
    fn add(mut self, rhs: LaurentQ) -> LaurentQ {
        for (e, c) in rhs.coeffs {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: LaurentQ) -> LaurentQ {
        self + (-rhs)
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: LaurentQ) -> LaurentQ {
        &self * &rhs
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, first: bool, c: &BigInt, unit: bool) -> fmt::Result {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if unit {
        write!(f, "{mag}")
    } else if !mag.is_one() {
        write!(f, "{mag}*")
    } else {
        Ok(())
    }
}

fn var_power(v: char, e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let v = var_power('q', *e);
            write_coefficient(f, i == 0, c, v.is_none())?;
            if let Some(v) = v {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// Parses one signed term list such as `1 + 2*q^3*t - q^-1`, returning
/// `(coefficient, exponent per variable)` records.
fn parse_terms(s: &str, vars: &[char]) -> Result<Vec<(BigInt, Vec<i64>)>> {
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut negative = false;
        if chars[i].1 == '+' || chars[i].1 == '-' {
            negative = chars[i].1 == '-';
            i += 1;
        } else if i > 0 {
            return Err(err(chars[i].0, "expected '+' or '-'"));
        }
        let start = i;
        let mut coeff = BigInt::one();
        let mut exps = vec![0i64; vars.len()];
        let mut saw_factor = false;
        loop {
            let Some(&(pos, c)) = chars.get(i) else { break };
            if c.is_ascii_digit() {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|(_, c)| c).collect();
                coeff *= BigInt::from_str(&digits).map_err(|_| err(pos, "bad integer"))?;
                i = j;
            } else if let Some(v) = vars.iter().position(|&v| v == c) {
                i += 1;
                let mut e = 1i64;
                if chars.get(i).map(|x| x.1) == Some('^') {
                    i += 1;
                    let mut j = i;
                    if chars.get(j).map(|x| x.1) == Some('-') {
                        j += 1;
                    }
                    while j < chars.len() && chars[j].1.is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[i..j].iter().map(|(_, c)| c).collect();
                    e = digits
                        .parse()
                        .map_err(|_| err(chars.get(i).map_or(s.len(), |x| x.0), "bad exponent"))?;
                    i = j;
                }
                exps[v] += e;
            } else {
                return Err(err(pos, "unexpected character"));
            }
            saw_factor = true;
            match chars.get(i).map(|x| x.1) {
                Some('*') => i += 1,
                _ => break,
            }
        }
        if !saw_factor || i == start {
            return Err(err(chars.get(start).map_or(s.len(), |x| x.0), "missing term"));
        }
        if negative {
            coeff = -coeff;
        }
        out.push((coeff, exps));
    }
    Ok(out)
}

impl FromStr for LaurentQ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "0" {
            return Ok(LaurentQ::zero());
        }
        let mut p = LaurentQ::zero();
        for (c, e) in parse_terms(s, &['q'])? {
            p.add_term(e[0], c);
        }
        Ok(p)
    }
}

impl Serialize for LaurentQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Φ'_d`: the cyclotomic factor of `1 - q^d` not dividing any `1 - q^e`
/// with `e < d` (`Φ'_1 = 1 - q`, otherwise the usual `Φ_d`).
pub fn cyclotomic(d: u64) -> LaurentQ {
    assert!(d >= 1);
    let mut p = LaurentQ::one_minus_q_pow(d as i64);
    for e in 1..d {
        if d.is_multiple_of(e) {
            p = p.div_exact(&cyclotomic(e)).expect("cyclotomic factors divide 1 - q^d");
        }
    }
    p
}

/// Product `Π_d Φ'_d^{e_d}`; every ratio of products of `1 - q^a` is of this
/// form, and the representation is already fully reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QRational {
    exponents: BTreeMap<u64, i64>,
}

impl QRational {
    pub fn one() -> Self {
        QRational::default()
    }

    /// `(1 - q^a)^e`, `a ≥ 1`.
    pub fn one_minus_q_pow(a: u64, e: i64) -> Self {
        let mut r = QRational::one();
        r.mul_one_minus(a, e);
        r
    }

    pub fn mul_one_minus(&mut self, a: u64, e: i64) {
        assert!(a >= 1, "1 - q^0 vanishes");
        for d in 1..=a {
            if a.is_multiple_of(d) {
                let slot = self.exponents.entry(d).or_insert(0);
                *slot += e;
                if *slot == 0 {
                    self.exponents.remove(&d);
                }
            }
        }
    }

    pub fn mul(&self, other: &QRational) -> QRational {
        let mut out = self.clone();
        for (&d, &e) in &other.exponents {
            let slot = out.exponents.entry(d).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.exponents.remove(&d);
            }
        }
        out
    }

    pub fn inverse(&self) -> QRational {
        QRational {
            exponents: self.exponents.iter().map(|(&d, &e)| (d, -e)).collect(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.exponents.values().all(|&e| e >= 0)
    }

    fn product(&self, sign: i64) -> LaurentQ {
        self.exponents
            .iter()
            .filter(|(_, &e)| e * sign > 0)
            .fold(LaurentQ::one(), |acc, (&d, &e)| &acc * &cyclotomic(d).pow((e * sign) as u32))
    }

    pub fn numerator(&self) -> LaurentQ {
        self.product(1)
    }

    pub fn denominator(&self) -> LaurentQ {
        self.product(-1)
    }

    pub fn to_polynomial(&self) -> Result<LaurentQ> {
        if !self.is_polynomial() {
            return Err(Error::InexactDivision(format!("{self} is not a polynomial")));
        }
        Ok(self.numerator())
    }

    /// `self · p`, which must be a Laurent polynomial.
    pub fn apply_to(&self, p: &LaurentQ) -> Result<LaurentQ> {
        (&self.numerator() * p).div_exact(&self.denominator())
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "({}) / ({})", self.numerator(), self.denominator())
        }
    }
}

/// Gaussian binomial `[a choose b]_q`.
pub fn q_binomial(a: i64, b: i64) -> Result<LaurentQ> {
    if b < 0 || b > a {
        return Err(Error::InvalidArgument(format!("q-binomial needs 0 <= b <= a, got ({a}, {b})")));
    }
    let mut r = QRational::one();
    for i in 1..=b {
        r.mul_one_minus((a - b + i) as u64, 1);
        r.mul_one_minus(i as u64, -1);
    }
    r.to_polynomial()
}

/// `Π_{N-M<i≤N, i≡a} (1-q^i) / Π_{0<i≤M, i≡a} (1-q^i)` modulo `k`.
pub fn shifted_q_binomial(n: i64, m: i64, k: i64, a: i64) -> Result<QRational> {
    if k < 1 || n % k != 0 || m % k != 0 || a < 0 || a >= k {
        return Err(Error::InvalidArgument(format!(
            "shifted q-binomial needs k >= 1, k | N, k | M, 0 <= a < k; got ({n}, {m}, {k}, {a})"
        )));
    }
    if m < 0 || m > n {
        return Err(Error::InvalidArgument(format!("shifted q-binomial needs 0 <= M <= N, got ({n}, {m})")));
    }
    let mut r = QRational::one();
    for i in (n - m + 1)..=n {
        if i.rem_euclid(k) == a {
            r.mul_one_minus(i as u64, 1);
        }
    }
    for i in 1..=m {
        if i.rem_euclid(k) == a {
            r.mul_one_minus(i as u64, -1);
        }
    }
    Ok(r)
}

/// `Π(1 - q^{m_i+1}) / Π(1 - q^{r_i+1})`, the Poincaré series of
/// `Coinv(L_0, g_0)`.
pub fn coinvariant_series(l0_exponents: &[usize], g0_exponents: &[usize]) -> Result<LaurentQ> {
    if l0_exponents.len() != g0_exponents.len() {
        return Err(Error::InvalidArgument(format!(
            "exponent lists of different lengths {} and {}",
            l0_exponents.len(),
            g0_exponents.len()
        )));
    }
    let mut r = QRational::one();
    for &m in l0_exponents {
        r.mul_one_minus(m as u64 + 1, 1);
    }
    for &g in g0_exponents {
        r.mul_one_minus(g as u64 + 1, -1);
    }
    r.to_polynomial()
}

/// Exponents of the Levi `g_0` spanned by the simple roots in `s`: those of
/// the semisimple part, padded with zeros for the centre.
pub fn g0_exponents(rs: &RootSystem, s: &[usize]) -> Vec<usize> {
    let mut out = vec![0; rs.rank() - s.len()];
    if !s.is_empty() {
        out.extend(rs.sub_system(s).exponents());
    }
    out.sort_unstable();
    out
}

/// Polynomial in `t` (cohomological degree) and `q` (z-degree), possibly
/// truncated above `q^{q_order}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
    pub q_order: Option<i64>,
}

/// One row of a bigraded dimension table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableRecord {
    pub coh: i64,
    pub z: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<i64>,
    pub dim: i64,
}

/// Outcome of comparing two truncated series on their common range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub clamped: bool,
}

impl BiPoly {
    pub fn one() -> Self {
        BiPoly::monomial(1, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, t: i64, q: i64) -> Self {
        let mut p = BiPoly::default();
        p.add_term(t, q, c.into());
        p
    }

    pub fn add_term(&mut self, t: i64, q: i64, c: BigInt) {
        if c.is_zero() || self.q_order.is_some_and(|o| q > o) {
            return;
        }
        let slot = self.terms.entry((t, q)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(t, q));
        }
    }

    pub fn coeff(&self, t: i64, q: i64) -> BigInt {
        self.terms.get(&(t, q)).cloned().unwrap_or_default()
    }

    /// Nonzero terms as `((t, q), coefficient)`, sorted by `(t, q)`.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn truncate(&self, order: i64) -> BiPoly {
        let order = self.q_order.map_or(order, |o| o.min(order));
        BiPoly {
            terms: self.terms.iter().filter(|((_, q), _)| *q <= order).map(|(k, c)| (*k, c.clone())).collect(),
            q_order: Some(order),
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let q_order = match (self.q_order, other.q_order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = BiPoly { terms: BTreeMap::new(), q_order };
        for ((t1, q1), a) in &self.terms {
            for ((t2, q2), b) in &other.terms {
                out.add_term(t1 + t2, q1 + q2, a * b);
            }
        }
        out
    }

    /// Embeds `p(q)` via `q^j ↦ t^{t_step·j} q^{q_step·j}`.
    pub fn embed(p: &LaurentQ, t_step: i64, q_step: i64) -> BiPoly {
        let mut out = BiPoly::default();
        for (e, c) in p.terms() {
            out.add_term(t_step * e, q_step * e, c.clone());
        }
        out
    }

    /// Specialisation `t = value`.
    pub fn at_t(&self, value: i64) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for ((t, q), c) in &self.terms {
            out.add_term(*q, c * BigInt::from(value).pow(*t as u32));
        }
        out
    }

    /// Value at `t = q = 1`.
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Equality on the common `q` range; `clamped` is set when the two
    /// orders differ.
    pub fn compare(&self, other: &BiPoly) -> Comparison {
        let clamped = self.q_order != other.q_order;
        let order = match (self.q_order, other.q_order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let equal = match order {
            Some(o) => self.truncate(o).terms == other.truncate(o).terms,
            None => self.terms == other.terms,
        };
        Comparison { equal, clamped }
    }

    pub fn to_records(&self) -> Result<Vec<TableRecord>> {
        self.terms
            .iter()
            .map(|((t, q), c)| {
                let dim = c
                    .to_i64()
                    .ok_or_else(|| Error::InvalidArgument(format!("coefficient {c} does not fit in i64")))?;
                Ok(TableRecord { coh: *t, z: *q, s: None, dim })
            })
            .collect()
    }

    pub fn from_records(records: &[TableRecord]) -> BiPoly {
        let mut out = BiPoly::default();
        for r in records {
            out.add_term(r.coh, r.z, BigInt::from(r.dim));
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, ((t, q), c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = [var_power('q', *q), var_power('t', *t)].into_iter().flatten().collect();
            write_coefficient(f, i == 0, c, vars.is_empty())?;
            write!(f, "{}", vars.join("*"))?;
        }
        if let Some(o) = self.q_order {
            write!(f, " + O(q^{})", o + 1)?;
        }
        Ok(())
    }
}

impl FromStr for BiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = BiPoly::default();
        if s.trim() == "0" {
            return Ok(out);
        }
        for (c, e) in parse_terms(s, &['t', 'q'])? {
            out.add_term(e[0], e[1], c);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A generator of a free super-commutative algebra. `coh` is the
/// cohomological column of the generator tables (for symmetric coefficients
/// it already includes `s`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub coh: i64,
    pub z: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<i64>,
    pub parity: Parity,
}

impl Generator {
    pub fn new(coh: i64, z: i64, s: Option<i64>) -> Self {
        let parity = if (coh + s.unwrap_or(0)).rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        };
        Generator { coh, z, s, parity }
    }

    /// Chevalley–Eilenberg degree: `coh - s`.
    pub fn ce_degree(&self) -> i64 {
        self.coh - self.s.unwrap_or(0)
    }
}

pub type GeneratorSpec = Vec<Generator>;

/// `Π_odd (1 + t^c q^z) · Π_even Σ_j t^{cj} q^{zj}`, truncated at `q_order`.
pub fn free_super_series(gens: &[Generator], q_order: Option<i64>) -> Result<BiPoly> {
    let mut out = BiPoly { q_order, ..BiPoly::one() };
    for g in gens {
        let factor = match g.parity {
            Parity::Odd => {
                let mut f = BiPoly { q_order, ..BiPoly::one() };
                f.add_term(g.coh, g.z, BigInt::one());
                f
            }
            Parity::Even => {
                let order = match q_order {
                    Some(o) if g.z > 0 => o,
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "even generator at (t^{}, q^{}) gives an infinite series; a finite q-order and positive z-degree are required",
                            g.coh, g.z
                        )))
                    }
                };
                let mut f = BiPoly { q_order, ..BiPoly::default() };
                let mut j = 0;
                while j * g.z <= order {
                    f.add_term(j * g.coh, j * g.z, BigInt::one());
                    j += 1;
                }
                f
            }
        };
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Free super-commutative algebra on `gens`, keyed by
/// `(ce_degree, s, z)` and restricted to `s ≤ s_max`, `z ≤ z_max`.
pub fn free_super_window(
    gens: &[Generator],
    s_max: i64,
    z_max: i64,
) -> Result<BTreeMap<(i64, i64, i64), BigInt>> {
    let mut acc: BTreeMap<(i64, i64, i64), BigInt> = BTreeMap::new();
    acc.insert((0, 0, 0), BigInt::one());
    for g in gens {
        let s = g.s.unwrap_or(0);
        let step = (g.ce_degree(), s, g.z);
        let max_power = match g.parity {
            Parity::Odd => 1,
            Parity::Even if s > 0 || g.z > 0 => i64::MAX,
            Parity::Even => {
                return Err(Error::InvalidArgument(format!(
                    "even generator of degree {} with s = z = 0 is not bounded by the window",
                    g.coh
                )))
            }
        };
        let mut next: BTreeMap<(i64, i64, i64), BigInt> = BTreeMap::new();
        for (&(c, ss, z), v) in &acc {
            let mut j = 0i64;
            while j <= max_power {
                let key = (c + j * step.0, ss + j * step.1, z + j * step.2);
                if key.1 > s_max || key.2 > z_max {
                    break;
                }
                *next.entry(key).or_insert_with(BigInt::zero) += v;
                j += 1;
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn check_level(twisted: &[Vec<usize>], n: usize) -> Result<usize> {
    let k = twisted.len();
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "truncation level {n} must be a positive multiple of the order {k}"
        )));
    }
    Ok(k)
}

/// Odd generators `(2m^{(a)}+1, N m^{(a)} + nk + a)` for `0 < nk + a < N`
/// (or `≤ N` when `inclusive`).
fn loop_generators(twisted: &[Vec<usize>], n: usize, inclusive: bool) -> Vec<Generator> {
    let k = twisted.len();
    let mut out = Vec::new();
    for (a, exps) in twisted.iter().enumerate() {
        for &m in exps {
            let mut shift = a;
            while shift < n || (inclusive && shift == n) {
                if shift > 0 {
                    out.push(Generator::new(2 * m as i64 + 1, (n * m + shift) as i64, None));
                }
                shift += k;
            }
        }
    }
    out.sort_by_key(|g| (g.z, g.coh));
    out
}

/// `H*(p/z^N p, g_0)`: `Coinv(L_0, g_0)` at `(t², q^N)` times the loop
/// generators with `0 < nk + a < N`.
pub fn predict_truncated_relative(twisted: &[Vec<usize>], g0: &[usize], n: usize) -> Result<BiPoly> {
    check_level(twisted, n)?;
    let coinv = coinvariant_series(&twisted[0], g0)?;
    let lambda = free_super_series(&loop_generators(twisted, n, false), None)?;
    Ok(BiPoly::embed(&coinv, 2, n as i64).mul(&lambda))
}

/// `H*(p/z^N p)`: the relative series times `Π (1 + t^{2r_i+1})`.
pub fn predict_truncated(twisted: &[Vec<usize>], g0: &[usize], n: usize) -> Result<BiPoly> {
    let rel = predict_truncated_relative(twisted, g0, n)?;
    let gens: Vec<Generator> = g0.iter().map(|&r| Generator::new(2 * r as i64 + 1, 0, None)).collect();
    Ok(rel.mul(&free_super_series(&gens, None)?))
}

/// `H*(b/z^N n, h_0)`: generators `(2m+1, N m + nk + a)`, `0 < nk + a ≤ N`.
pub fn predict_nilpotent_relative(twisted: &[Vec<usize>], n: usize) -> Result<BiPoly> {
    check_level(twisted, n)?;
    free_super_series(&loop_generators(twisted, n, true), None)
}

/// `H*(b/z^N n)`: the relative series times `(1 + t)^{l_0}`.
pub fn predict_nilpotent(twisted: &[Vec<usize>], n: usize) -> Result<BiPoly> {
    let rel = predict_nilpotent_relative(twisted, n)?;
    let l0 = twisted[0].len();
    let gens = vec![Generator::new(1, 0, None); l0];
    Ok(rel.mul(&free_super_series(&gens, None)?))
}

/// Generators for the untruncated parahoric with symmetric coefficients, up
/// to z-degree `z_max`. With `absolute`, the `(2r+1, s 0, z 0)` generators of
/// `H*(g_0)` are included.
pub fn predict_superpoly(twisted: &[Vec<usize>], g0: &[usize], z_max: i64, absolute: bool) -> GeneratorSpec {
    let k = twisted.len() as i64;
    let mut out = Vec::new();
    for &r in g0 {
        let r = r as i64;
        if absolute {
            out.push(Generator::new(2 * r + 1, 0, Some(0)));
        }
        out.push(Generator::new(r + 1, 0, Some(r + 1)));
    }
    for d in 1..=z_max {
        for &m in &twisted[d.rem_euclid(k) as usize] {
            let m = m as i64;
            out.push(Generator::new(m + 1, d, Some(m + 1)));
            out.push(Generator::new(m + 1, d, Some(m)));
        }
    }
    out
}
