//! The polynomial algebra Q[x(m) : m ∈ Z] on commuting generators `x(m)`,
//! bigraded by weight (`wt x(m) = -m`) and charge (one per factor).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("index {index} is not negative; the projection is defined on indices <= -1 only")]
    NonNegativeIndex { index: i64 },
    #[error("polynomial is not bihomogeneous")]
    NotHomogeneous,
}

/// A (weight, charge) pair addressing one graded piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BigradedIndex {
    pub weight: i64,
    pub charge: u32,
}

impl BigradedIndex {
    pub fn new(weight: i64, charge: u32) -> Self {
        BigradedIndex { weight, charge }
    }
}

impl fmt::Display for BigradedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.weight, self.charge)
    }
}

/// Product of generators `x(m_1) ⋯ x(m_k)`, kept as a non-decreasing index list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut indices: Vec<i64>) -> Self {
        indices.sort_unstable();
        Monomial(indices)
    }

    pub fn generator(m: i64) -> Self {
        Monomial(vec![m])
    }

    pub fn indices(&self) -> &[i64] {
        &self.0
    }

    pub fn weight(&self) -> i64 {
        -self.0.iter().sum::<i64>()
    }

    pub fn charge(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn bidegree(&self) -> BigradedIndex {
        BigradedIndex::new(self.weight(), self.charge())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index present, i.e. the factor closest to zero.
    pub fn max_index(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn contains(&self, m: i64) -> bool {
        self.0.binary_search(&m).is_ok()
    }

    /// Every index lies at or below `floor`.
    pub fn supported_at_or_below(&self, floor: i64) -> bool {
        self.max_index().is_none_or(|m| m <= floor)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                merged.push(self.0[i]);
                i += 1;
            } else {
                merged.push(other.0[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&self.0[i..]);
        merged.extend_from_slice(&other.0[j..]);
        Monomial(merged)
    }

    pub fn shift(&self, by: i64) -> Monomial {
        Monomial(self.0.iter().map(|m| m + by).collect())
    }

    /// Splits off one factor `x(m)`, returning the remaining monomial.
    pub fn without_one(&self, m: i64) -> Option<Monomial> {
        let pos = self.0.binary_search(&m).ok()?;
        let mut rest = self.0.clone();
        rest.remove(pos);
        Some(Monomial(rest))
    }

    /// Runs of equal indices as `(index, multiplicity)`.
    pub fn powers(&self) -> Vec<(i64, u32)> {
        let mut out: Vec<(i64, u32)> = Vec::new();
        for &m in &self.0 {
            match out.last_mut() {
                Some((last, k)) if *last == m => *k += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers()
            .into_iter()
            .map(|(m, k)| {
                if k == 1 {
                    format!("x({m})")
                } else {
                    format!("x({m})^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Finite Q-linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyQ {
    terms: BTreeMap<Monomial, Rational>,
}

impl PolyQ {
    pub fn zero() -> Self {
        PolyQ::default()
    }

    pub fn one() -> Self {
        PolyQ::from_monomial(Monomial::one())
    }

    pub fn x(m: i64) -> Self {
        PolyQ::from_monomial(Monomial::generator(m))
    }

    pub fn from_monomial(mono: Monomial) -> Self {
        PolyQ::from_term(mono, Rational::one())
    }

    pub fn from_term(mono: Monomial, coeff: Rational) -> Self {
        let mut p = PolyQ::zero();
        p.add_term(mono, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = PolyQ::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> PolyQ {
        PolyQ {
            terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect(),
        }
    }

    /// Bidegree shared by all terms, `None` for zero or mixed polynomials.
    pub fn bidegree(&self) -> Option<BigradedIndex> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn supported_at_or_below(&self, floor: i64) -> bool {
        self.terms.keys().all(|m| m.supported_at_or_below(floor))
    }

    /// `τ^s`: shifts every generator index by `-s`.
    pub fn tau_power(&self, s: i64) -> PolyQ {
        PolyQ {
            terms: self.terms.iter().map(|(m, v)| (m.shift(-s), v.clone())).collect(),
        }
    }

    /// Projection onto the subalgebra on indices <= -2 along the ideal
    /// generated by `x(-1)`.
    pub fn rho_project(&self) -> Result<PolyQ, PolyError> {
        if let Some(index) = self.terms.keys().filter_map(Monomial::max_index).find(|m| *m >= 0) {
            return Err(PolyError::NonNegativeIndex { index });
        }
        Ok(PolyQ {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.contains(-1))
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        })
    }

    /// The derivation with `D x(m) = -m x(m-1)`.
    pub fn derivation(&self) -> PolyQ {
        let mut out = PolyQ::zero();
        for (mono, c) in &self.terms {
            for (m, k) in mono.powers() {
                if m == 0 {
                    continue;
                }
                let rest = mono.without_one(m).expect("index present");
                let factor = Rational::from_integer((-m * k as i64).into());
                out.add_term(rest.mul(&Monomial::generator(m - 1)), c * factor);
            }
        }
        out
    }

    /// Coordinates in a given monomial basis. Terms outside the basis are
    /// reported as an error via `None`.
    pub fn coordinates(&self, basis_index: &BTreeMap<Monomial, usize>) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); basis_index.len()];
        for (m, c) in &self.terms {
            v[*basis_index.get(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_coordinates(basis: &[Monomial], coords: &[Rational]) -> PolyQ {
        PolyQ::from_terms(basis.iter().cloned().zip(coords.iter().cloned()))
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;

    fn add(self, rhs: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;

    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;

    fn neg(self) -> PolyQ {
        self.scale(&-Rational::one())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;

    fn mul(self, rhs: &PolyQ) -> PolyQ {
        let mut out = PolyQ::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

pub fn mono_mul(a: &PolyQ, b: &PolyQ) -> PolyQ {
    a * b
}

pub(crate) fn fmt_coeff_prefix(c: &Rational, first: bool) -> (String, bool) {
    // returns (sign-aware prefix, whether the magnitude is exactly 1)
    let neg = c.is_negative();
    let mag = c.abs();
    let sign = match (first, neg) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    (format!("{sign}{mag}"), mag.is_one())
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (prefix, unit) = fmt_coeff_prefix(c, i == 0);
            if m.is_unit() {
                write!(f, "{prefix}")?;
            } else if unit {
                let sign = prefix.trim_end_matches('1');
                write!(f, "{sign}{m}")?;
            } else {
                write!(f, "{prefix}*{m}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of the given bidegree whose indices are `<= floor`, in
/// lexicographic order of their sorted index lists.
pub fn enumerate_monomials(idx: BigradedIndex, floor: i64) -> Vec<Monomial> {
    let min_part = -floor;
    let mut out = Vec::new();
    if idx.weight < 0 || min_part < 1 {
        return out;
    }
    let mut parts = Vec::with_capacity(idx.charge as usize);
    // parts generated in non-increasing order so the index list comes out sorted
    fn rec(remaining: i64, slots: u32, max_part: i64, min_part: i64, parts: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Monomial(parts.iter().map(|p| -p).collect()));
            }
            return;
        }
        let hi = max_part.min(remaining - min_part * (slots as i64 - 1));
        let mut p = hi;
        while p >= min_part {
            if p * (slots as i64) < remaining {
                break;
            }
            parts.push(p);
            rec(remaining - p, slots - 1, p, min_part, parts, out);
            parts.pop();
            p -= 1;
        }
    }
    rec(idx.weight, idx.charge, idx.weight, min_part, &mut parts, &mut out);
    out
}

/// Index map from a basis slice, for [`PolyQ::coordinates`].
pub fn basis_index(basis: &[Monomial]) -> BTreeMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mono(ix: &[i64]) -> Monomial {
        Monomial::new(ix.to_vec())
    }

    #[test]
    fn multiplication_examples() {
        let p = &PolyQ::x(-1) + &PolyQ::x(-2);
        assert_eq!(mono_mul(&PolyQ::one(), &p), p);
        assert_eq!(&PolyQ::x(-1) * &PolyQ::x(-1), PolyQ::from_monomial(mono(&[-1, -1])));
        let expected = PolyQ::from_terms([(mono(&[-1, -1]), q(1)), (mono(&[-2, -1]), q(1))]);
        assert_eq!(mono_mul(&p, &PolyQ::x(-1)), expected);
    }

    #[test]
    fn tau_examples() {
        let sq = PolyQ::from_monomial(mono(&[-1, -1]));
        assert_eq!(sq.tau_power(1), PolyQ::from_monomial(mono(&[-2, -2])));
        assert_eq!(sq.tau_power(0), sq);
        let p = PolyQ::from_monomial(mono(&[-2, -3]));
        assert_eq!(p.tau_power(-1), PolyQ::from_monomial(mono(&[-1, -2])));
        assert_eq!(PolyQ::one().tau_power(5), PolyQ::one());
    }

    #[test]
    fn rho_examples() {
        assert!(PolyQ::from_monomial(mono(&[-1, -1])).rho_project().unwrap().is_zero());
        let r4 = PolyQ::from_terms([(mono(&[-3, -1]), q(2)), (mono(&[-2, -2]), q(1))]);
        assert_eq!(r4.rho_project().unwrap(), PolyQ::from_monomial(mono(&[-2, -2])));
        let fixed = PolyQ::from_monomial(mono(&[-2, -3]));
        assert_eq!(fixed.rho_project().unwrap(), fixed);
        assert_eq!(
            PolyQ::x(0).rho_project(),
            Err(PolyError::NonNegativeIndex { index: 0 })
        );
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(PolyQ::x(-1).derivation(), PolyQ::x(-2));
        let d = PolyQ::from_monomial(mono(&[-1, -1])).derivation();
        assert_eq!(d, PolyQ::from_term(mono(&[-2, -1]), q(2)));
        assert!(PolyQ::one().derivation().is_zero());
        assert!(PolyQ::x(0).derivation().is_zero());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_monomials(BigradedIndex::new(4, 2), -1),
            vec![mono(&[-3, -1]), mono(&[-2, -2])]
        );
        assert!(enumerate_monomials(BigradedIndex::new(2, 2), -2).is_empty());
        assert_eq!(enumerate_monomials(BigradedIndex::new(0, 0), -1), vec![Monomial::one()]);
        assert_eq!(enumerate_monomials(BigradedIndex::new(0, 0), -2), vec![Monomial::one()]);
        assert!(enumerate_monomials(BigradedIndex::new(3, 0), -1).is_empty());
    }

    #[test]
    fn rendering() {
        let r4 = PolyQ::from_terms([(mono(&[-3, -1]), q(2)), (mono(&[-2, -2]), q(1))]);
        assert_eq!(r4.to_string(), "2*x(-3)*x(-1) + x(-2)^2");
        let p = PolyQ::from_terms([
            (Monomial::one(), q(-3)),
            (mono(&[-1]), q(-1)),
            (mono(&[-4, -2]), Rational::new(1.into(), 2.into())),
        ]);
        assert_eq!(p.to_string(), "-3 + 1/2*x(-4)*x(-2) - x(-1)");
        assert_eq!(PolyQ::zero().to_string(), "0");
    }

    /// Partitions of n into exactly k parts, by the recurrence
    /// p(n, k) = p(n - 1, k - 1) + p(n - k, k).
    fn partitions_exact(n: i64, k: i64) -> usize {
        if n == 0 && k == 0 {
            return 1;
        }
        if n <= 0 || k <= 0 {
            return 0;
        }
        partitions_exact(n - 1, k - 1) + partitions_exact(n - k, k)
    }

    #[test]
    fn enumeration_counts_match_partition_recurrence() {
        for n in 0..=16 {
            for k in 0..=n as u32 {
                let got = enumerate_monomials(BigradedIndex::new(n, k), -1);
                assert_eq!(got.len(), partitions_exact(n, k as i64), "n={n} k={k}");
                assert!(got.windows(2).all(|w| w[0] < w[1]));
                assert!(got.iter().all(|m| m.bidegree() == BigradedIndex::new(n, k)));
            }
        }
    }

    fn monomial_strategy() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(-6i64..=-1, 0..4).prop_map(Monomial::new)
    }

    fn homogeneous_strategy() -> impl Strategy<Value = PolyQ> {
        // random coefficients on the monomials of a random bidegree
        (0i64..8, 0u32..4).prop_flat_map(|(w, k)| {
            let basis = enumerate_monomials(BigradedIndex::new(w + k as i64, k), -1);
            let n = basis.len();
            proptest::collection::vec(-3i64..4, n).prop_map(move |cs| {
                PolyQ::from_terms(basis.iter().cloned().zip(cs.into_iter().map(q)))
            })
        })
    }

    fn poly_strategy() -> impl Strategy<Value = PolyQ> {
        proptest::collection::vec((monomial_strategy(), -3i64..4), 0..5)
            .prop_map(|ts| PolyQ::from_terms(ts.into_iter().map(|(m, c)| (m, q(c)))))
    }

    proptest! {
        #[test]
        fn bigrading_additive(a in homogeneous_strategy(), b in homogeneous_strategy()) {
            let prod = &a * &b;
            if let (Some(da), Some(db)) = (a.bidegree(), b.bidegree()) {
                let expected = BigradedIndex::new(da.weight + db.weight, da.charge + db.charge);
                prop_assert!(prod.terms().all(|(m, _)| m.bidegree() == expected));
            }
        }

        #[test]
        fn tau_composes(p in poly_strategy(), s in -3i64..=3, t in -3i64..=3) {
            prop_assert_eq!(p.tau_power(s).tau_power(t), p.tau_power(s + t));
        }

        #[test]
        fn tau_shifts_weight_by_charge(p in homogeneous_strategy(), s in -3i64..=3) {
            if let Some(d) = p.bidegree() {
                let shifted = p.tau_power(s).bidegree().unwrap();
                prop_assert_eq!(shifted.charge, d.charge);
                prop_assert_eq!(shifted.weight, d.weight + d.charge as i64 * s);
                if d.charge == 0 {
                    prop_assert_eq!(p.tau_power(s), p.clone());
                }
            }
        }

        #[test]
        fn derivation_leibniz(a in poly_strategy(), b in poly_strategy()) {
            let lhs = (&a * &b).derivation();
            let rhs = &(&a.derivation() * &b) + &(&a * &b.derivation());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivation_raises_weight(p in homogeneous_strategy()) {
            if let Some(d) = p.bidegree() {
                let dp = p.derivation();
                prop_assert!(dp.terms().all(|(m, _)| m.bidegree() == BigradedIndex::new(d.weight + 1, d.charge)));
            }
        }

        #[test]
        fn rho_idempotent(p in poly_strategy()) {
            let once = p.rho_project().unwrap();
            prop_assert!(once.supported_at_or_below(-2));
            prop_assert_eq!(once.rho_project().unwrap(), once);
        }
    }
}
