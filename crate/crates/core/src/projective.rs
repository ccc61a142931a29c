//! Projective space over the Laurent field and its reduction to the residue field.
//!
//! A tuple `(a_0, …, a_n)` is normalized when every `a_i` has valuation `≥ 0`
//! and at least one has valuation exactly `0`. The reduction map `π` evaluates
//! a normalized tuple at `t = 0`; the ball `B_v` is the fiber of `π` over the
//! residue point `[v]`, and `H_r` is the preimage of the hyperplane `r = 0`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{Laurent, Valuation};
use crate::matrix::{dot, Matrix};
use crate::scalar::{Field, Ring};

/// A point of `P^n(F((t)))` stored as a normalized tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjPoint<F: Ring> {
    coords: Vec<Laurent<F>>,
}

/// A point of `P^n(F)`, scaled so the first nonzero coordinate is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResiduePoint<F> {
    coords: Vec<F>,
}

/// A nonzero row functional on `F^{n+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Covector<F> {
    coords: Vec<F>,
}

impl<F: Field> ProjPoint<F> {
    /// Rescales by `t^{-m}`, `m` the minimum valuation of the entries.
    pub fn normalize(raw: Vec<Laurent<F>>) -> Result<Self> {
        let min = raw
            .iter()
            .map(Laurent::valuation)
            .min()
            .unwrap_or(Valuation::Infinite);
        match min {
            Valuation::Infinite => Err(Error::ZeroVector),
            Valuation::Finite(0) => Ok(ProjPoint { coords: raw }),
            Valuation::Finite(m) => Ok(ProjPoint { coords: raw.iter().map(|c| c.shift(-m)).collect() }),
        }
    }

    /// The constant lift of a residue point.
    pub fn lift(z: &ResiduePoint<F>) -> Self {
        ProjPoint { coords: z.coords.iter().cloned().map(Laurent::constant).collect() }
    }

    pub fn coords(&self) -> &[Laurent<F>] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The reduction map `π`.
    pub fn reduce(&self) -> ResiduePoint<F> {
        let values = self
            .coords
            .iter()
            .map(|c| c.eval_at_zero().expect("normalized coordinates have valuation >= 0"))
            .collect();
        ResiduePoint::new(values).expect("a normalized tuple has a unit coordinate")
    }

    /// Whether `π(self)` is the residue point spanned by `v`.
    pub fn in_ball(&self, v: &[F]) -> Result<bool> {
        let target = ResiduePoint::new(v.to_vec())?;
        Ok(self.reduce() == target)
    }

    /// Whether `self ∉ H_r`, computed on the residue side: `r · π(self) ≠ 0`.
    pub fn off_hyperplane_residue(&self, r: &Covector<F>) -> bool {
        let values: Vec<F> = self
            .coords
            .iter()
            .map(|c| c.eval_at_zero().expect("normalized coordinates have valuation >= 0"))
            .collect();
        !dot(&r.coords, &values).is_zero()
    }

    /// Whether `self ∉ H_r`, computed on the Laurent side: the pairing
    /// `r · coords` has valuation exactly zero.
    pub fn off_hyperplane_valuation(&self, r: &Covector<F>) -> bool {
        let pairing = self
            .coords
            .iter()
            .zip(&r.coords)
            .fold(Laurent::zero(), |acc: Laurent<F>, (c, x)| acc.add_scaled_shifted(x, 0, c));
        pairing.valuation() == Valuation::Finite(0)
    }

    pub fn off_hyperplane(&self, r: &Covector<F>) -> bool {
        let residue = self.off_hyperplane_residue(r);
        debug_assert_eq!(residue, self.off_hyperplane_valuation(r));
        residue
    }

    /// Matrix-vector product followed by renormalization.
    pub fn apply(&self, m: &Matrix<Laurent<F>>) -> Result<Self> {
        Self::normalize(m.mul_vec(&self.coords)?)
    }

    /// Projective equality: all 2×2 minors vanish.
    pub fn proj_eq(&self, other: &Self) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let n = self.coords.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                let lhs = &self.coords[a] * &other.coords[b];
                let rhs = &self.coords[b] * &other.coords[a];
                lhs == rhs
            })
        })
    }
}

impl<F: Field> ResiduePoint<F> {
    pub fn new(mut coords: Vec<F>) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).cloned().ok_or(Error::ZeroVector)?;
        let inv = lead.recip_ref();
        for c in coords.iter_mut() {
            *c = c.mul_ref(&inv);
        }
        Ok(ResiduePoint { coords })
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn pairing(&self, r: &Covector<F>) -> F {
        dot(&r.coords, &self.coords)
    }
}

impl<F: Field> Covector<F> {
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Covector { coords })
    }

    /// The dual basis functional `e_i^*`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let coords = (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect();
        Covector { coords }
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn apply(&self, v: &[F]) -> F {
        dot(&self.coords, v)
    }
}
