//! Degree-by-degree comparison of evaluation kernels with ideal pieces.
//!
//! For each bidegree the evaluation map `a ↦ a·v` is written as a matrix from
//! the monomial basis of the polynomial algebra to the Fock basis of the
//! target component. Its kernel is compared against the span of the
//! corresponding ideal piece, and its rank against a partition count that
//! never touches the ideals.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{basis_states, FockState, FockVector, ModeCache};
use crate::linalg::{self, SparseMatQ};
use crate::poly::{basis_index, enumerate_monomials, BigradedIndex, Monomial, PolyQ};
use crate::relations::{build_r, coordinate_vectors, ideal_piece, IdealSpec};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("max weight must be at least {min}, got {got}")]
    BoundTooSmall { min: i64, got: i64 },
    #[error("{0} has no quadratic relation family of its own")]
    NoRelationFamily(ModuleTag),
}

/// Which evaluation map: `f_Λ0`, `f_Λ1`, or `f'_Λ1` on indices <= -2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleTag {
    Lambda0,
    Lambda1,
    Lambda1Prime,
}

impl ModuleTag {
    pub const ALL: [ModuleTag; 3] = [ModuleTag::Lambda0, ModuleTag::Lambda1, ModuleTag::Lambda1Prime];

    pub fn floor(self) -> i64 {
        self.ideal().floor()
    }

    pub fn ideal(self) -> IdealSpec {
        match self {
            ModuleTag::Lambda0 => IdealSpec::ILambda0,
            ModuleTag::Lambda1 => IdealSpec::ILambda1,
            ModuleTag::Lambda1Prime => IdealSpec::ILambda1Prime,
        }
    }

    pub fn highest_weight_state(self) -> FockState {
        match self {
            ModuleTag::Lambda0 => FockState::vacuum(),
            ModuleTag::Lambda1 | ModuleTag::Lambda1Prime => FockState::lambda1_top(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModuleTag::Lambda0 => "lambda0",
            ModuleTag::Lambda1 => "lambda1",
            ModuleTag::Lambda1Prime => "lambda1prime",
        }
    }

    /// Largest charge with a nonzero domain at this weight.
    pub fn max_charge(self, weight: i64) -> u32 {
        (weight / -self.floor()) as u32
    }

    /// Fock basis of the component hit by the `idx` piece.
    pub fn target_basis(self, idx: BigradedIndex) -> Vec<FockState> {
        let top = self.highest_weight_state();
        let r2 = top.r2() + 2 * idx.charge as i64;
        let weight4 = 4 * idx.weight + top.weight4();
        basis_states(r2, (weight4 - r2 * r2) / 4)
    }
}

impl std::fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Applies monomials to a highest weight vector, remembering every partial
/// product it has seen.
pub struct Evaluator {
    tag: ModuleTag,
    modes: ModeCache,
    images: HashMap<Monomial, FockVector>,
}

impl Evaluator {
    pub fn new(tag: ModuleTag) -> Self {
        Evaluator {
            tag,
            modes: ModeCache::new(),
            images: HashMap::new(),
        }
    }

    pub fn tag(&self) -> ModuleTag {
        self.tag
    }

    pub fn apply(&mut self, mono: &Monomial) -> FockVector {
        if let Some(v) = self.images.get(mono) {
            return v.clone();
        }
        let v = match mono.max_index() {
            None => FockVector::basis(self.tag.highest_weight_state()),
            Some(m) => {
                let rest = self.apply(&mono.without_one(m).expect("index present"));
                self.modes.xalpha(m, &rest)
            }
        };
        self.images.insert(mono.clone(), v.clone());
        v
    }

    pub fn eval_matrix(&mut self, idx: BigradedIndex) -> SparseMatQ {
        let domain = enumerate_monomials(idx, self.tag.floor());
        let rows = self.tag.target_basis(idx);
        let row_of: BTreeMap<&FockState, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = SparseMatQ::zeros(rows.len(), domain.len());
        for (col, mono) in domain.iter().enumerate() {
            for (state, c) in self.apply(mono).terms() {
                let row = *row_of
                    .get(state)
                    .unwrap_or_else(|| panic!("{state} outside the target basis of {idx}"));
                m.set(row, col, c.clone()).expect("in bounds");
            }
        }
        m
    }

    pub fn piece_report(&mut self, idx: BigradedIndex) -> PieceReport {
        let floor = self.tag.floor();
        let domain = enumerate_monomials(idx, floor);
        let m = self.eval_matrix(idx);
        let kernel = linalg::kernel_basis(&m);
        let ideal = if idx.charge == 0 {
            Vec::new()
        } else {
            ideal_piece(self.tag.ideal(), idx)
        };
        let ideal_vecs = coordinate_vectors(&ideal, idx, floor);
        let dim_ideal = linalg::span_rank(&ideal_vecs).expect("uniform length");

        let mut witness = None;
        let escaped = ideal_vecs.iter().position(|v| {
            m.mul_vec(v).expect("domain length").iter().any(|x| !x.is_zero())
        });
        let containment_ok = escaped.is_none();
        if let Some(i) = escaped {
            witness = Some(primitive_form(&ideal[i]).to_string());
        }
        let equality_ok = containment_ok && dim_ideal == kernel.len();
        if containment_ok && !equality_ok {
            let outside = linalg::first_outside(&kernel, &ideal_vecs).expect("uniform length");
            if let Some(i) = outside {
                witness = Some(primitive_form(&PolyQ::from_coordinates(&domain, &kernel[i])).to_string());
            }
        }

        PieceReport {
            idx,
            module_tag: self.tag,
            dim_domain: domain.len(),
            rank_eval: domain.len() - kernel.len(),
            dim_kernel: kernel.len(),
            dim_ideal_piece: dim_ideal,
            containment_ok,
            equality_ok,
            witness,
        }
    }

    pub fn kernel(&mut self, idx: BigradedIndex) -> Vec<Vec<Rational>> {
        linalg::kernel_basis(&self.eval_matrix(idx))
    }
}

/// Scales a polynomial to coprime integer coefficients with a positive
/// leading term.
pub fn primitive_form(p: &PolyQ) -> PolyQ {
    let mut lcm = num_bigint::BigInt::one();
    let mut gcd = num_bigint::BigInt::zero();
    for (_, c) in p.terms() {
        lcm = lcm.lcm(&c.denom());
        gcd = gcd.gcd(&c.numer());
    }
    if gcd.is_zero() {
        return p.clone();
    }
    let mut scale = Rational::new(lcm, gcd);
    if p.terms().next().is_some_and(|(_, c)| c.is_negative()) {
        scale = -scale;
    }
    p.scale(&scale)
}

/// The evaluation matrix of one piece.
pub fn eval_matrix(tag: ModuleTag, idx: BigradedIndex) -> SparseMatQ {
    Evaluator::new(tag).eval_matrix(idx)
}

/// Presentation check for one bidegree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    pub idx: BigradedIndex,
    pub module_tag: ModuleTag,
    pub dim_domain: usize,
    pub rank_eval: usize,
    pub dim_kernel: usize,
    pub dim_ideal_piece: usize,
    pub containment_ok: bool,
    pub equality_ok: bool,
    /// Ideal element not killed by the map, or kernel element outside the
    /// ideal span, with integer coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRun {
    pub max_weight: i64,
    pub pieces: Vec<PieceReport>,
    pub lemma_results: BTreeMap<String, bool>,
    pub dims_table: BTreeMap<(ModuleTag, BigradedIndex), usize>,
}

impl VerificationRun {
    pub fn new(max_weight: i64) -> Self {
        VerificationRun {
            max_weight,
            pieces: Vec::new(),
            lemma_results: BTreeMap::new(),
            dims_table: BTreeMap::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.pieces.iter().all(|p| p.equality_ok) && self.lemma_results.values().all(|ok| *ok)
    }

    /// Folds another run in, keeping pieces ordered by (weight, charge, tag).
    pub fn merge(&mut self, other: VerificationRun) {
        self.pieces.extend(other.pieces);
        self.pieces
            .sort_by_key(|p| (p.idx.weight, p.idx.charge, p.module_tag));
        self.lemma_results.extend(other.lemma_results);
        self.dims_table.extend(other.dims_table);
    }
}

fn bidegrees(tag: ModuleTag, max_weight: i64) -> Vec<BigradedIndex> {
    (0..=max_weight)
        .flat_map(|n| (0..=tag.max_charge(n)).map(move |k| BigradedIndex::new(n, k)))
        .collect()
}

/// Runs `f` over all bidegrees up to `max_weight`, one evaluator per weight.
fn per_piece<T: Send>(
    tag: ModuleTag,
    max_weight: i64,
    f: impl Fn(&mut Evaluator, BigradedIndex) -> T + Sync,
) -> Vec<T> {
    (0..=max_weight)
        .into_par_iter()
        .map(|n| {
            let mut ev = Evaluator::new(tag);
            (0..=tag.max_charge(n))
                .map(|k| f(&mut ev, BigradedIndex::new(n, k)))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Compares kernel and ideal piece for every bidegree up to `max_weight`.
pub fn verify_presentation(tag: ModuleTag, max_weight: i64) -> Result<VerificationRun, VerifyError> {
    if max_weight < 1 {
        return Err(VerifyError::BoundTooSmall { min: 1, got: max_weight });
    }
    let mut run = VerificationRun::new(max_weight);
    run.pieces = per_piece(tag, max_weight, |ev, idx| ev.piece_report(idx));
    run.dims_table = run
        .pieces
        .iter()
        .map(|p| ((tag, p.idx), p.rank_eval))
        .collect();
    Ok(run)
}

/// Every `f_Λ0` kernel piece lies in the matching `f_Λ1` kernel piece.
pub fn kernel_containment_l0_in_l1(max_weight: i64) -> bool {
    let checks = per_piece(ModuleTag::Lambda0, max_weight, |ev, idx| {
        let k0 = ev.kernel(idx);
        let k1 = Evaluator::new(ModuleTag::Lambda1).kernel(idx);
        linalg::subspace_leq(&k0, &k1).expect("same domain")
    });
    checks.into_iter().all(|ok| ok)
}

/// Rank of every evaluation piece up to `max_weight`.
pub fn graded_dims(tag: ModuleTag, max_weight: i64) -> BTreeMap<BigradedIndex, usize> {
    let ranks = per_piece(tag, max_weight, |ev, idx| {
        (idx, linalg::rank(&ev.eval_matrix(idx)))
    });
    ranks.into_iter().collect()
}

/// Sums a dims table over charge, indexed by weight.
pub fn weight_totals(dims: &BTreeMap<BigradedIndex, usize>, max_weight: i64) -> Vec<usize> {
    let mut totals = vec![0; (max_weight + 1).max(0) as usize];
    for (idx, d) in dims {
        if (0..=max_weight).contains(&idx.weight) {
            totals[idx.weight as usize] += d;
        }
    }
    totals
}

/// Partitions of `n` into exactly `k` parts, each `>= min_part`, any two
/// differing by at least 2. Plain recursive enumeration.
pub fn partition_oracle(n: i64, k: i64, min_part: i64) -> u64 {
    if k == 0 {
        return u64::from(n == 0);
    }
    if n <= 0 || k < 0 {
        return 0;
    }
    (min_part.max(1)..=n)
        .map(|smallest| partition_oracle(n - smallest, k - 1, smallest + 2))
        .sum()
}

/// `D` maps each `I_Λ0` piece `(n, k)` into the piece `(n + 1, k)`.
pub fn check_ideal_d_stability(max_weight: i64) -> bool {
    let pieces: Vec<BigradedIndex> = bidegrees(ModuleTag::Lambda0, max_weight)
        .into_iter()
        .filter(|idx| idx.charge >= 2)
        .collect();
    pieces.par_iter().all(|&idx| {
        let target = BigradedIndex::new(idx.weight + 1, idx.charge);
        let images: Vec<PolyQ> = ideal_piece(IdealSpec::ILambda0, idx)
            .iter()
            .map(PolyQ::derivation)
            .collect();
        let span = ideal_piece(IdealSpec::ILambda0, target);
        linalg::subspace_leq(
            &coordinate_vectors(&images, target, -1),
            &coordinate_vectors(&span, target, -1),
        )
        .expect("same basis")
    })
}

/// Kernel pieces of charge 1 vanish; at charge 2 and weight `t` the kernel is
/// the line through `R_t` (zero below the family's minimum `t`).
pub fn check_low_charge_kernels(tag: ModuleTag, max_weight: i64) -> Result<bool, VerifyError> {
    if tag == ModuleTag::Lambda1 {
        return Err(VerifyError::NoRelationFamily(tag));
    }
    let family = tag.ideal().family();
    let mut ev = Evaluator::new(tag);
    for t in 1..=max_weight {
        if !ev.kernel(BigradedIndex::new(t, 1)).is_empty() {
            return Ok(false);
        }
        let idx = BigradedIndex::new(t, 2);
        let kernel = ev.kernel(idx);
        if t < family.t_min {
            if !kernel.is_empty() {
                return Ok(false);
            }
            continue;
        }
        let r = build_r(t, family.floor).expect("t within range");
        let basis = enumerate_monomials(idx, family.floor);
        let r_vec = r.coordinates(&basis_index(&basis)).expect("R_t in basis");
        if kernel.len() != 1 || !linalg::subspace_eq(&kernel, &[r_vec]).expect("same basis") {
            return Ok(false);
        }
    }
    Ok(true)
}
