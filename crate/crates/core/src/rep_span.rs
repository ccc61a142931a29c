//! Exact instance checks of the representation-theoretic inputs.
//!
//! * span ranks of `{ρ(h) (v ⊗ v*) ρ(h)⁻¹}` over random `h`, which should
//!   reach `End V` for `SL_n` and contain `sl(V)` for `SO_5` and `G_2`;
//! * a search for `h` with `(ρ(h)v)ᵀ J ρ(γh)v ≠ 0`;
//! * the claim that a diagonalizable `O ≠ 1` in `SO_{2k+1}` is never a
//!   scalar plus a `J`-skew matrix.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{seeded_rng, Element, GroupSpec, Membership};
use crate::matrix::{dot, row_rank};
use crate::{json, Rational};

/// Complexity of the random elements used for span samples.
pub const SAMPLE_COMPLEXITY: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankExperiment {
    pub group: GroupSpec,
    pub samples: usize,
    pub seed: u64,
}

impl RankExperiment {
    /// `(dim V)² + 5` samples.
    pub fn new(group: GroupSpec, seed: u64) -> Self {
        let d = group.dim();
        RankExperiment { group, samples: d * d + 5, seed }
    }

    /// `v = e_0`.
    pub fn v(&self) -> usize {
        self.group.weight_basis().highest
    }

    /// `v* = e_0ᵀ`.
    pub fn vstar(&self) -> usize {
        self.group.weight_basis().highest
    }

    /// `w* = e_nᵀ`.
    pub fn wstar(&self) -> usize {
        self.group.weight_basis().lowest
    }

    /// `(dim V)²` for `SL`, `dim sl(V)` otherwise.
    pub fn target(&self) -> usize {
        let d = self.group.dim();
        match self.group {
            GroupSpec::SL { .. } => d * d,
            _ => d * d - 1,
        }
    }

    pub fn draw(&self) -> Vec<Element> {
        let mut rng = seeded_rng(self.seed);
        (0..self.samples).map(|_| self.group.random_element(&mut rng, SAMPLE_COMPLEXITY)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub group: GroupSpec,
    pub samples: usize,
    pub seed: u64,
    pub achieved: usize,
    pub target: usize,
    /// Rank of the traceless family `ρ(h)(v ⊗ w*)ρ(h)⁻¹`.
    pub traceless_achieved: usize,
    /// FNV-1a of the flattened sample matrices, for reproducibility checks.
    pub digest: String,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.achieved >= self.target
    }
}

/// `ρ(h) (e_col ⊗ e_rowᵀ) ρ(h)⁻¹` flattened row-major: `(h e_col)(e_rowᵀ h⁻¹)`.
fn conjugated_rank_one(h: &Element, col: usize, row: usize) -> Vec<Rational> {
    let u = h.matrix().column(col);
    let hi = h.inverse();
    let w = hi.matrix().row(row);
    u.iter().flat_map(|a| w.iter().map(move |b| a * b)).collect()
}

/// Rank of the span of `ρ(h)(v ⊗ v*)ρ(h)⁻¹` over the given samples.
pub fn span_rank_of(spec: GroupSpec, samples: &[Element]) -> usize {
    let b = spec.weight_basis();
    row_rank(samples.iter().map(|h| conjugated_rank_one(h, b.highest, b.highest)).collect())
}

pub fn span_rank(exp: &RankExperiment) -> RankReport {
    let samples = exp.draw();
    let rows: Vec<Vec<Rational>> = samples.iter().map(|h| conjugated_rank_one(h, exp.v(), exp.vstar())).collect();
    let traceless: Vec<Vec<Rational>> = samples.iter().map(|h| conjugated_rank_one(h, exp.v(), exp.wstar())).collect();
    let digest = fnv1a(samples.iter().flat_map(|h| h.matrix().entries().iter().map(json::rational_to_string)));
    RankReport {
        group: exp.group,
        samples: exp.samples,
        seed: exp.seed,
        achieved: row_rank(rows),
        target: exp.target(),
        traceless_achieved: row_rank(traceless),
        digest,
    }
}

fn fnv1a(items: impl Iterator<Item = String>) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for s in items {
        for b in s.bytes().chain(*b";") {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

/// `(h v)ᵀ J (γ h v)` with `v = e_0`.
pub fn diagonal_pairing(spec: GroupSpec, gamma: &Element, h: &Element) -> Result<Rational> {
    let j = spec
        .gram()
        .ok_or_else(|| Error::Precondition(format!("{spec} has no invariant symmetric form")))?;
    let v = spec.weight_basis().highest;
    let hv = h.matrix().column(v);
    let ghv = gamma.matrix().mul_vec(&hv)?;
    Ok(dot(&hv, &j.mul_vec(&ghv)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingFound {
    pub h: Element,
    pub attempt: usize,
    pub value: Rational,
}

/// Identity first, then seeded random `h`, until the pairing is nonzero.
pub fn diagonal_pairing_search(spec: GroupSpec, gamma: &Element, budget: usize, seed: u64) -> Result<PairingFound> {
    if matches!(spec, GroupSpec::SL { .. }) {
        return Err(Error::Precondition("the pairing search needs SO or G2".into()));
    }
    if let Membership::Violates(reason) = spec.membership(gamma.matrix())? {
        return Err(Error::MembershipViolation { group: spec.to_string(), reason });
    }
    if gamma.is_identity() {
        return Err(Error::Precondition("gamma must not be the identity".into()));
    }
    let mut rng = seeded_rng(seed);
    for attempt in 1..=budget {
        let h = if attempt == 1 { Element::identity(spec) } else { spec.random_element(&mut rng, SAMPLE_COMPLEXITY) };
        let value = diagonal_pairing(spec, gamma, &h)?;
        if !value.is_zero() {
            return Ok(PairingFound { h, attempt, value });
        }
    }
    Err(Error::Exhausted { attempts: budget })
}

/// `O = u D u⁻¹` with `D` diagonal.
#[derive(Debug, Clone)]
pub struct DiagonalizableWitness {
    pub u: Element,
    pub d: Element,
}

/// `true` iff `O = 1` or `O + J⁻¹OᵀJ` is not scalar.
pub fn scalar_plus_skew_exclusion(spec: GroupSpec, o: &Element, witness: &DiagonalizableWitness) -> Result<bool> {
    if !matches!(spec, GroupSpec::SO { .. }) {
        return Err(Error::Precondition("scalar-plus-skew exclusion is stated for SO(2k+1)".into()));
    }
    if let Membership::Violates(reason) = spec.membership(o.matrix())? {
        return Err(Error::MembershipViolation { group: spec.to_string(), reason });
    }
    if !witness.d.matrix().is_diagonal() {
        return Err(Error::InvalidWitness("D is not diagonal".into()));
    }
    if witness.u.mul(&witness.d).mul(&witness.u.inverse()) != *o {
        return Err(Error::InvalidWitness("u D u^-1 does not reproduce O".into()));
    }
    if o.is_identity() {
        return Ok(true);
    }
    let j = spec.gram().expect("SO has a Gram matrix");
    let adjoint = &(&j * &o.matrix().transpose()) * &j;
    Ok((o.matrix() + &adjoint).scalar_value().is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn identity_sample_has_rank_one() {
        let spec = GroupSpec::sl(3).unwrap();
        assert_eq!(span_rank_of(spec, &[Element::identity(spec)]), 1);
    }

    #[test]
    fn sl3_reaches_full_rank() {
        let r = span_rank(&RankExperiment::new(GroupSpec::sl(3).unwrap(), 42));
        assert_eq!(r.samples, 14);
        assert_eq!(r.achieved, 9);
        assert!(r.passed());
        assert_eq!(r.traceless_achieved, 8);
    }

    #[test]
    fn rank_is_monotone_in_samples() {
        let spec = GroupSpec::sl(3).unwrap();
        let samples = RankExperiment::new(spec, 3).draw();
        let mut last = 0;
        for k in 1..=samples.len() {
            let r = span_rank_of(spec, &samples[..k]);
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn torus_example_is_excluded() {
        let spec = GroupSpec::so(2).unwrap();
        let d = spec.torus_element(&[q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(d.matrix().entries()[0], q(2, 1));
        let w = DiagonalizableWitness { u: Element::identity(spec), d: d.clone() };
        assert!(scalar_plus_skew_exclusion(spec, &d, &w).unwrap());
        let id = Element::identity(spec);
        let w = DiagonalizableWitness { u: id.clone(), d: id.clone() };
        assert!(scalar_plus_skew_exclusion(spec, &id, &w).unwrap());
    }

    #[test]
    fn bad_witness_is_rejected() {
        let spec = GroupSpec::so(2).unwrap();
        let d = spec.torus_element(&[q(2, 1), q(3, 1)]).unwrap();
        let w = DiagonalizableWitness { u: Element::identity(spec), d: Element::identity(spec) };
        assert!(matches!(scalar_plus_skew_exclusion(spec, &d, &w), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn pairing_search_recomputes() {
        let spec = GroupSpec::so(2).unwrap();
        let mut rng = seeded_rng(1);
        let gamma = spec.random_torus_conjugate(&mut rng, 4).element;
        let found = diagonal_pairing_search(spec, &gamma, 50, 1).unwrap();
        assert_eq!(diagonal_pairing(spec, &gamma, &found.h).unwrap(), found.value);
        assert!(!found.value.is_zero());
        // Recorded: the identity pairs to zero here, the first random h works.
        assert_eq!(found.attempt, 2);
        let id = Element::identity(spec);
        assert!(matches!(diagonal_pairing_search(spec, &id, 50, 1), Err(Error::Precondition(_))));
    }
}
