//! Quadratic relations `R_t` and graded pieces of the ideals they generate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::poly::{basis_index, enumerate_monomials, BigradedIndex, Monomial, PolyQ};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("floor {0} is not supported; use -1 or -2")]
    InvalidFloor(i64),
    #[error("t = {t} is below the minimum {t_min} for floor {floor}")]
    BelowMinimum { t: i64, t_min: i64, floor: i64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The family `R_t` truncated to indices `<= floor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationFamily {
    pub floor: i64,
    pub t_min: i64,
}

impl RelationFamily {
    /// Indices <= -1, `t >= 2`.
    pub const R0: RelationFamily = RelationFamily { floor: -1, t_min: 2 };
    /// Indices <= -2, `t >= 4`.
    pub const R1: RelationFamily = RelationFamily { floor: -2, t_min: 4 };

    pub fn for_floor(floor: i64) -> Result<Self, RelationError> {
        match floor {
            -1 => Ok(Self::R0),
            -2 => Ok(Self::R1),
            other => Err(RelationError::InvalidFloor(other)),
        }
    }

    pub fn build(&self, t: i64) -> Result<PolyQ, RelationError> {
        build_r(t, self.floor)
    }
}

/// `R_t = Σ x(m1) x(m2)` over ordered pairs with `m1 + m2 = -t` and both
/// indices `<= floor`. Off-diagonal pairs therefore get coefficient 2.
pub fn build_r(t: i64, floor: i64) -> Result<PolyQ, RelationError> {
    let family = RelationFamily::for_floor(floor)?;
    if t < family.t_min {
        return Err(RelationError::BelowMinimum {
            t,
            t_min: family.t_min,
            floor,
        });
    }
    let one = Rational::from_integer(1.into());
    Ok(PolyQ::from_terms(
        (-t - floor..=floor).map(|m1| (Monomial::new(vec![m1, -t - m1]), one.clone())),
    ))
}

/// Which of the three ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdealSpec {
    /// Generated by `R_t^0`, `t >= 2`, inside indices <= -1.
    #[serde(rename = "I_Lambda0")]
    ILambda0,
    /// `I_Lambda0` plus the multiples of `x(-1)`.
    #[serde(rename = "I_Lambda1")]
    ILambda1,
    /// Generated by `R_t^1`, `t >= 4`, inside indices <= -2.
    #[serde(rename = "I_Lambda1_prime")]
    ILambda1Prime,
}

impl IdealSpec {
    pub fn family(self) -> RelationFamily {
        match self {
            IdealSpec::ILambda0 | IdealSpec::ILambda1 => RelationFamily::R0,
            IdealSpec::ILambda1Prime => RelationFamily::R1,
        }
    }

    /// Floor of the ambient polynomial algebra.
    pub fn floor(self) -> i64 {
        self.family().floor
    }

    pub fn has_x_minus_one(self) -> bool {
        self == IdealSpec::ILambda1
    }
}

/// Spanning set of one bigraded piece: products `u * g` with `u` a monomial
/// of the ambient algebra and `g` a generator. Not reduced.
pub fn ideal_piece(spec: IdealSpec, idx: BigradedIndex) -> Vec<PolyQ> {
    let family = spec.family();
    let mut out = Vec::new();
    if idx.charge >= 2 {
        for t in family.t_min..=idx.weight {
            let r = family.build(t).expect("t within family range");
            let cofactor = BigradedIndex::new(idx.weight - t, idx.charge - 2);
            for u in enumerate_monomials(cofactor, family.floor) {
                out.push(r.mul_monomial(&u));
            }
        }
    }
    if spec.has_x_minus_one() && idx.charge >= 1 {
        let cofactor = BigradedIndex::new(idx.weight - 1, idx.charge - 1);
        let x1 = Monomial::generator(-1);
        for u in enumerate_monomials(cofactor, -1) {
            out.push(PolyQ::from_monomial(u.mul(&x1)));
        }
    }
    out
}

/// Coordinates of homogeneous polynomials in the monomial basis of `idx`.
pub fn coordinate_vectors(polys: &[PolyQ], idx: BigradedIndex, floor: i64) -> Vec<Vec<Rational>> {
    let basis = enumerate_monomials(idx, floor);
    let index = basis_index(&basis);
    polys
        .iter()
        .map(|p| {
            p.coordinates(&index)
                .unwrap_or_else(|| panic!("{p} is not supported on the {idx} basis"))
        })
        .collect()
}

/// `τ(R_t^0) = R_{t+2}^0 - 2 x(-t-1) x(-1)`.
pub fn check_tau_r_identity(t: i64) -> Result<bool, RelationError> {
    let lhs = build_r(t, -1)?.tau_power(1);
    let correction = PolyQ::from_term(
        Monomial::new(vec![-t - 1, -1]),
        Rational::from_integer(2.into()),
    );
    let rhs = build_r(t + 2, -1)?;
    Ok((&(&lhs + &correction) - &rhs).is_zero())
}

/// `τ(R_t^1) x(-1) = R_{t+2}^0 x(-1) - x(-t) R_3^0 - 2 x(-t-1) R_2^0`.
pub fn check_lift_identity(t: i64) -> Result<bool, RelationError> {
    let x1 = PolyQ::x(-1);
    let lhs = &build_r(t, -2)?.tau_power(1) * &x1;
    let two = Rational::from_integer(2.into());
    let rhs = &(&(&build_r(t + 2, -1)? * &x1) - &(&PolyQ::x(-t) * &build_r(3, -1)?))
        - &(&PolyQ::x(-t - 1) * &build_r(2, -1)?).scale(&two);
    Ok(lhs == rhs)
}

/// `D(R_t^0) = (t - 1) R_{t+1}^0`.
pub fn check_d_r_identity(t: i64) -> Result<bool, RelationError> {
    let lhs = build_r(t, -1)?.derivation();
    let rhs = build_r(t + 1, -1)?.scale(&Rational::from_integer((t - 1).into()));
    Ok(lhs == rhs)
}

/// `τ` maps the `idx` piece of `I_Lambda0` into the `(n + k, k)` piece of `I_Lambda1`.
pub fn check_tau_ideal_inclusion(idx: BigradedIndex) -> Result<bool, RelationError> {
    let target = BigradedIndex::new(idx.weight + idx.charge as i64, idx.charge);
    let images: Vec<PolyQ> = ideal_piece(IdealSpec::ILambda0, idx)
        .iter()
        .map(|p| p.tau_power(1))
        .collect();
    let span = ideal_piece(IdealSpec::ILambda1, target);
    Ok(linalg::subspace_leq(
        &coordinate_vectors(&images, target, -1),
        &coordinate_vectors(&span, target, -1),
    )?)
}

/// `ρ τ` carries the `idx` piece of `I_Lambda0` onto the `(n + k, k)` piece
/// of `I'_Lambda1`.
pub fn check_tau_rho_bijection(idx: BigradedIndex) -> Result<bool, RelationError> {
    let target = BigradedIndex::new(idx.weight + idx.charge as i64, idx.charge);
    let images = ideal_piece(IdealSpec::ILambda0, idx)
        .iter()
        .map(|p| p.tau_power(1).rho_project())
        .collect::<Result<Vec<_>, _>>()
        .expect("indices stay negative under tau");
    let span = ideal_piece(IdealSpec::ILambda1Prime, target);
    Ok(linalg::subspace_eq(
        &coordinate_vectors(&images, target, -2),
        &coordinate_vectors(&span, target, -2),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mono(ix: &[i64]) -> Monomial {
        Monomial::new(ix.to_vec())
    }

    /// R_t from the definition: every ordered pair, one term at a time.
    fn r_by_pairs(t: i64, floor: i64) -> PolyQ {
        let mut p = PolyQ::zero();
        for m1 in -t - 5..=floor {
            for m2 in -t - 5..=floor {
                if m1 + m2 == -t {
                    p = &p + &(&PolyQ::x(m1) * &PolyQ::x(m2));
                }
            }
        }
        p
    }

    #[test]
    fn build_r_examples() {
        assert_eq!(build_r(2, -1).unwrap(), PolyQ::from_monomial(mono(&[-1, -1])));
        assert_eq!(
            build_r(4, -1).unwrap(),
            PolyQ::from_terms([(mono(&[-3, -1]), q(2)), (mono(&[-2, -2]), q(1))])
        );
        assert_eq!(build_r(4, -2).unwrap(), PolyQ::from_monomial(mono(&[-2, -2])));
    }

    #[test]
    fn build_r_rejects_bad_input() {
        assert_eq!(
            build_r(3, -2),
            Err(RelationError::BelowMinimum { t: 3, t_min: 4, floor: -2 })
        );
        assert_eq!(build_r(1, -1).unwrap_err(), RelationError::BelowMinimum { t: 1, t_min: 2, floor: -1 });
        assert_eq!(build_r(6, -3), Err(RelationError::InvalidFloor(-3)));
    }

    #[test]
    fn build_r_matches_ordered_pair_sum() {
        for t in 2..=20 {
            assert_eq!(build_r(t, -1).unwrap(), r_by_pairs(t, -1));
            let r = build_r(t, -1).unwrap();
            assert_eq!(r.bidegree(), Some(BigradedIndex::new(t, 2)));
            for (m, c) in r.terms() {
                let ix = m.indices();
                assert_eq!(*c, if ix[0] == ix[1] { q(1) } else { q(2) });
            }
        }
        for t in 4..=20 {
            assert_eq!(build_r(t, -2).unwrap(), r_by_pairs(t, -2));
        }
    }

    #[test]
    fn rho_of_r0_is_r1() {
        for t in 4..=20 {
            assert_eq!(build_r(t, -1).unwrap().rho_project().unwrap(), build_r(t, -2).unwrap());
        }
    }

    #[test]
    fn ideal_piece_examples() {
        assert_eq!(
            ideal_piece(IdealSpec::ILambda0, BigradedIndex::new(2, 2)),
            vec![build_r(2, -1).unwrap()]
        );
        assert_eq!(
            ideal_piece(IdealSpec::ILambda0, BigradedIndex::new(4, 2)),
            vec![build_r(4, -1).unwrap()]
        );
        assert_eq!(
            ideal_piece(IdealSpec::ILambda1Prime, BigradedIndex::new(4, 2)),
            vec![PolyQ::from_monomial(mono(&[-2, -2]))]
        );
        assert!(ideal_piece(IdealSpec::ILambda0, BigradedIndex::new(5, 1)).is_empty());
        assert_eq!(
            ideal_piece(IdealSpec::ILambda1, BigradedIndex::new(1, 1)),
            vec![PolyQ::x(-1)]
        );
    }

    #[test]
    fn ideal_pieces_are_bihomogeneous() {
        for spec in [IdealSpec::ILambda0, IdealSpec::ILambda1, IdealSpec::ILambda1Prime] {
            for n in 0..=10 {
                for k in 1..=n as u32 {
                    let idx = BigradedIndex::new(n, k);
                    for p in ideal_piece(spec, idx) {
                        assert_eq!(p.bidegree(), Some(idx), "{spec:?} {idx}");
                        assert!(p.supported_at_or_below(spec.floor()));
                    }
                }
            }
        }
    }

    #[test]
    fn tau_r_identity() {
        // t = 2: x(-2)^2 = R_4 - 2 x(-3) x(-1)
        assert_eq!(build_r(2, -1).unwrap().tau_power(1), PolyQ::from_monomial(mono(&[-2, -2])));
        assert_eq!(
            build_r(3, -1).unwrap().tau_power(1),
            PolyQ::from_term(mono(&[-3, -2]), q(2))
        );
        for t in 2..=20 {
            assert!(check_tau_r_identity(t).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn lift_identity() {
        assert_eq!(
            &build_r(4, -2).unwrap().tau_power(1) * &PolyQ::x(-1),
            PolyQ::from_monomial(mono(&[-3, -3, -1]))
        );
        for t in 4..=20 {
            assert!(check_lift_identity(t).unwrap(), "t = {t}");
        }
        assert!(check_lift_identity(3).is_err());
    }

    #[test]
    fn d_r_identity() {
        assert_eq!(build_r(3, -1).unwrap().derivation(), build_r(4, -1).unwrap().scale(&q(2)));
        for t in 2..=20 {
            assert!(check_d_r_identity(t).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn tau_ideal_inclusion() {
        for (n, k) in [(2, 2), (3, 2), (5, 3), (6, 3), (8, 4)] {
            assert!(check_tau_ideal_inclusion(BigradedIndex::new(n, k)).unwrap(), "({n}, {k})");
        }
    }

    #[test]
    fn tau_rho_bijection() {
        for n in 2..=9 {
            for k in 2..=n as u32 {
                assert!(check_tau_rho_bijection(BigradedIndex::new(n, k)).unwrap(), "({n}, {k})");
            }
        }
    }
}
