//! Split matrix groups over the rationals: `SL_n`, `SO_{2k+1}` and `G_2`.
//!
//! All three are realized in a weight basis where the diagonal torus is
//! split, so a cocharacter becomes `diag(t^{k_0}, …, t^{k_n})`. Index `0`
//! carries the extremal weight that `τ` attracts towards. `SO_{2k+1}` and
//! `G_2` preserve the anti-diagonal Gram matrix `J`.

pub mod g2;

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{LaurentPoly, MatrixL, MatrixQ, Rational};

/// Deterministic generator used for every randomized construction.
pub type GroupRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> GroupRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", try_from = "RawSpec", into = "RawSpec")]
pub enum GroupSpec {
    /// `SL_n` in its natural `n`-dimensional representation.
    SL { n: usize },
    /// Split `SO_{2k+1}` preserving the anti-diagonal form.
    SO { k: usize },
    /// Split `G_2` in its 7-dimensional representation.
    G2,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family")]
enum RawSpec {
    SL { n: usize },
    SO { k: usize },
    G2,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::SL { n } => GroupSpec::sl(n),
            RawSpec::SO { k } => GroupSpec::so(k),
            RawSpec::G2 => Ok(GroupSpec::G2),
        }
    }
}

impl From<GroupSpec> for RawSpec {
    fn from(s: GroupSpec) -> Self {
        match s {
            GroupSpec::SL { n } => RawSpec::SL { n },
            GroupSpec::SO { k } => RawSpec::SO { k },
            GroupSpec::G2 => RawSpec::G2,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::SL { n } => write!(f, "SL({n})"),
            GroupSpec::SO { k } => write!(f, "SO({})", 2 * k + 1),
            GroupSpec::G2 => f.write_str("G2"),
        }
    }
}

/// Basis positions of the vectors that the certifier and the span
/// experiments both rely on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightBasis {
    /// `v = e_0`, the attracting direction of `τ`.
    pub highest: usize,
    /// `e_n`, the attracting direction of `τ⁻¹`.
    pub lowest: usize,
}

impl GroupSpec {
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("SL(n) needs n >= 2, got {n}")));
        }
        Ok(GroupSpec::SL { n })
    }

    pub fn so(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidGroup(format!("SO(2k+1) needs k >= 2, got {k}")));
        }
        Ok(GroupSpec::SO { k })
    }

    /// Parses `sl3`, `SO5`, `g2`, `SL(3)`, or the JSON object form.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::InvalidGroup(e.to_string()));
        }
        let compact: String = t
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let bad = || Error::InvalidGroup(format!("unrecognized group {text:?}"));
        if compact == "g2" {
            return Ok(GroupSpec::G2);
        }
        if let Some(n) = compact.strip_prefix("sl") {
            return GroupSpec::sl(n.parse().map_err(|_| bad())?);
        }
        if let Some(d) = compact.strip_prefix("so") {
            let d: usize = d.parse().map_err(|_| bad())?;
            if d.is_multiple_of(2) {
                return Err(Error::InvalidGroup(format!("only odd orthogonal groups are supported, got SO({d})")));
            }
            return GroupSpec::so(d / 2);
        }
        Err(bad())
    }

    pub fn dim(&self) -> usize {
        match *self {
            GroupSpec::SL { n } => n,
            GroupSpec::SO { k } => 2 * k + 1,
            GroupSpec::G2 => g2::DIM,
        }
    }

    pub fn weight_basis(&self) -> WeightBasis {
        WeightBasis { highest: 0, lowest: self.dim() - 1 }
    }

    /// The invariant symmetric form, if the family has one.
    pub fn gram(&self) -> Option<MatrixQ> {
        match self {
            GroupSpec::SL { .. } => None,
            _ => Some(MatrixQ::anti_diagonal(self.dim())),
        }
    }

    pub fn has_trivial_center(&self) -> bool {
        !matches!(self, GroupSpec::SL { .. })
    }

    pub fn roots(&self) -> Vec<Root> {
        let n = self.dim();
        match *self {
            GroupSpec::SL { .. } => {
                let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                let pos: Vec<_> = pairs.collect();
                let mut roots: Vec<Root> = pos
                    .iter()
                    .map(|&(i, j)| Root::new(true, MatrixQ::unit(n, i, j)))
                    .collect();
                roots.extend(pos.iter().map(|&(i, j)| Root::new(false, MatrixQ::unit(n, j, i))));
                number(roots)
            }
            GroupSpec::SO { .. } => {
                let last = n - 1;
                let pos: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| i + j < last)
                    .collect();
                let so_root = |i: usize, j: usize| {
                    MatrixQ::unit(n, i, j).sub(&MatrixQ::unit(n, last - j, last - i)).unwrap()
                };
                let mut roots: Vec<Root> =
                    pos.iter().map(|&(i, j)| Root::new(true, so_root(i, j))).collect();
                roots.extend(pos.iter().map(|&(i, j)| Root::new(false, so_root(j, i))));
                number(roots)
            }
            GroupSpec::G2 => {
                let d = g2::data();
                number(
                    d.roots
                        .iter()
                        .enumerate()
                        .map(|(i, (_, x))| Root::new(i < d.roots.len() / 2, x.clone()))
                        .collect(),
                )
            }
        }
    }

    /// Checks every defining identity exactly.
    pub fn membership(&self, m: &MatrixQ) -> Result<Membership> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        if let Some(j) = self.gram() {
            let lhs = &(&m.transpose() * &j) * m;
            if lhs != j {
                return Ok(Membership::Violates("does not preserve the Gram matrix J".into()));
            }
        }
        if let GroupSpec::G2 = self {
            if let Some([i, j, k]) = g2::form_defect(m) {
                return Ok(Membership::Violates(format!(
                    "does not preserve the trilinear form at ({i}, {j}, {k})"
                )));
            }
        }
        let det = m.determinant();
        if det != Rational::from_integer(1.into()) {
            return Ok(Membership::Violates(format!("determinant is {det}, not 1")));
        }
        Ok(Membership::Member)
    }

    pub fn root_element(&self, root: usize, s: &Rational) -> Result<Element> {
        let roots = self.roots();
        let r = roots
            .get(root)
            .ok_or(Error::UnknownRoot { group: self.to_string(), root })?;
        let m = r.nilpotent.scale(s).nilpotent_exp().expect("root vectors are nilpotent");
        Ok(Element { spec: *self, matrix: m })
    }

    /// A product of `complexity` random root elements with parameters drawn
    /// from [`PARAMETER_POOL`].
    pub fn random_element(&self, rng: &mut GroupRng, complexity: usize) -> Element {
        let roots = self.roots();
        let mut acc = MatrixQ::identity(self.dim());
        for _ in 0..complexity {
            let r = roots.choose(rng).expect("every family has roots");
            let (n, d) = *PARAMETER_POOL.choose(rng).unwrap();
            let s = Rational::new(n.into(), d.into());
            let x = r.nilpotent.scale(&s).nilpotent_exp().expect("root vectors are nilpotent");
            acc = &acc * &x;
        }
        Element { spec: *self, matrix: acc }
    }

    pub fn random_element_seeded(&self, seed: u64, complexity: usize) -> Element {
        self.random_element(&mut seeded_rng(seed), complexity)
    }

    /// The diagonal torus element with the given free parameters:
    /// `n - 1` entries for `SL_n`, `k` for `SO_{2k+1}`, 2 for `G_2`.
    pub fn torus_element(&self, params: &[Rational]) -> Result<Element> {
        let one = Rational::from_integer(1.into());
        let need = match *self {
            GroupSpec::SL { n } => n - 1,
            GroupSpec::SO { k } => k,
            GroupSpec::G2 => 2,
        };
        if params.len() != need {
            return Err(Error::DimensionMismatch { expected: need, found: params.len() });
        }
        if params.iter().any(num_traits::Zero::is_zero) {
            return Err(Error::Precondition("torus parameters must be nonzero".into()));
        }
        let diag = match *self {
            GroupSpec::SL { .. } => {
                let prod = params.iter().fold(one.clone(), |a, b| a * b);
                let mut d = params.to_vec();
                d.push(one / prod);
                d
            }
            GroupSpec::SO { .. } => {
                let mut d = params.to_vec();
                d.push(one.clone());
                d.extend(params.iter().rev().map(|a| &one / a));
                d
            }
            GroupSpec::G2 => g2::data()
                .basis_weights
                .iter()
                .map(|[p, q]| pow_i(&params[0], *p) * pow_i(&params[1], *q))
                .collect(),
        };
        Ok(Element { spec: *self, matrix: MatrixQ::diagonal(diag) })
    }

    /// A random non-central torus element.
    pub fn random_torus_element(&self, rng: &mut GroupRng) -> Element {
        let need = match *self {
            GroupSpec::SL { n } => n - 1,
            GroupSpec::SO { k } => k,
            GroupSpec::G2 => 2,
        };
        loop {
            let params: Vec<Rational> = (0..need)
                .map(|_| {
                    let (n, d) = *TORUS_POOL.choose(rng).unwrap();
                    Rational::new(n.into(), d.into())
                })
                .collect();
            let t = self.torus_element(&params).expect("parameter count matches");
            if t.matrix.scalar_value().is_none() {
                return t;
            }
        }
    }

    /// `u D u⁻¹` with `D` a random non-central torus element and `u` random
    /// of the given complexity. Semisimple by construction.
    pub fn random_torus_conjugate(&self, rng: &mut GroupRng, complexity: usize) -> TorusConjugate {
        let torus = self.random_torus_element(rng);
        let conjugator = self.random_element(rng, complexity);
        let element = conjugator.mul(&torus).mul(&conjugator.inverse());
        TorusConjugate { element, conjugator, torus }
    }

    /// `count` torus conjugates from one generator seeded with `seed`,
    /// pairwise distinct modulo the center.
    pub fn seeded_torus_conjugates(&self, count: usize, seed: u64) -> Vec<Element> {
        let mut rng = seeded_rng(seed);
        let mut out: Vec<Element> = Vec::with_capacity(count);
        while out.len() < count {
            let g = self.random_torus_conjugate(&mut rng, TORUS_CONJUGATOR_COMPLEXITY).element;
            if out.iter().all(|o| !self.equal_mod_center(o.matrix(), g.matrix())) {
                out.push(g);
            }
        }
        out
    }

    /// Whether `a` and `b` agree modulo the center of the group.
    pub fn equal_mod_center(&self, a: &MatrixQ, b: &MatrixQ) -> bool {
        if self.has_trivial_center() {
            a == b
        } else {
            match a.inverse() {
                Ok(ai) => (&ai * b).scalar_value().is_some(),
                Err(_) => false,
            }
        }
    }

    /// The exponents used when none are supplied: `(-k, …, k)` for `SO`,
    /// `(-3, …, 3)` for `G_2`, and centered consecutive (odd `n`) or odd
    /// (even `n`) integers for `SL_n`.
    pub fn default_cocharacter(&self) -> Cocharacter {
        let n = self.dim() as i64;
        let exps = match self {
            GroupSpec::SL { .. } if n % 2 == 0 => (0..n).map(|i| 2 * i - (n - 1)).collect(),
            _ => (0..n).map(|i| i - (n - 1) / 2).collect(),
        };
        Cocharacter::new(*self, exps).expect("default cocharacter is valid")
    }
}

/// Parameters `(numerator, denominator)` for random root elements.
pub const PARAMETER_POOL: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-1, 3)];

/// Conjugator length in [`GroupSpec::seeded_torus_conjugates`].
pub const TORUS_CONJUGATOR_COMPLEXITY: usize = 4;

const TORUS_POOL: [(i64, i64); 8] = [(2, 1), (3, 1), (1, 2), (1, 3), (-2, 1), (5, 1), (2, 3), (-1, 1)];

fn pow_i(x: &Rational, e: i64) -> Rational {
    let one = Rational::from_integer(1.into());
    let base = if e < 0 { &one / x } else { x.clone() };
    (0..e.unsigned_abs()).fold(one, |acc, _| acc * &base)
}

fn number(mut roots: Vec<Root>) -> Vec<Root> {
    for (i, r) in roots.iter_mut().enumerate() {
        r.id = i;
    }
    roots
}

#[derive(Debug, Clone)]
pub struct Root {
    pub id: usize,
    /// Positive roots have strictly upper triangular root vectors.
    pub positive: bool,
    pub nilpotent: MatrixQ,
}

impl Root {
    fn new(positive: bool, nilpotent: MatrixQ) -> Self {
        Root { id: 0, positive, nilpotent }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    Violates(String),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// A matrix known to lie in its group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    spec: GroupSpec,
    matrix: MatrixQ,
}

impl Element {
    pub fn new(spec: GroupSpec, matrix: MatrixQ) -> Result<Self> {
        match spec.membership(&matrix)? {
            Membership::Member => Ok(Element { spec, matrix }),
            Membership::Violates(reason) => {
                Err(Error::MembershipViolation { group: spec.to_string(), reason })
            }
        }
    }

    pub fn identity(spec: GroupSpec) -> Self {
        Element { spec, matrix: MatrixQ::identity(spec.dim()) }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.matrix
    }

    pub fn into_matrix(self) -> MatrixQ {
        self.matrix
    }

    pub fn mul(&self, rhs: &Element) -> Element {
        assert_eq!(self.spec, rhs.spec, "elements of different groups");
        Element { spec: self.spec, matrix: &self.matrix * &rhs.matrix }
    }

    pub fn inverse(&self) -> Element {
        let matrix = match self.spec.gram() {
            // J Mᵀ J, since J = J⁻¹
            Some(j) => &(&j * &self.matrix.transpose()) * &j,
            None => self.matrix.inverse().expect("group elements are invertible"),
        };
        Element { spec: self.spec, matrix }
    }

    pub fn conjugate_by(&self, h: &Element) -> Element {
        h.inverse().mul(self).mul(h)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

#[derive(Debug, Clone)]
pub struct TorusConjugate {
    pub element: Element,
    pub conjugator: Element,
    pub torus: Element,
}

/// Strictly increasing exponents of a cocharacter of the diagonal torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocharacter {
    exponents: Vec<i64>,
}

impl Cocharacter {
    pub fn new(spec: GroupSpec, exponents: Vec<i64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCocharacter(msg));
        let n = spec.dim();
        if exponents.len() != n {
            return bad(format!("{spec} needs {n} exponents, got {}", exponents.len()));
        }
        if let Some(w) = exponents.windows(2).find(|w| w[0] >= w[1]) {
            return bad(format!(
                "exponents must be strictly increasing and pairwise distinct ({} then {})",
                w[0], w[1]
            ));
        }
        match spec {
            GroupSpec::SL { .. } => {
                let sum: i64 = exponents.iter().sum();
                if sum != 0 {
                    return bad(format!("exponents of an SL cocharacter must sum to 0, got {sum}"));
                }
            }
            GroupSpec::SO { .. } | GroupSpec::G2 => {
                if let Some(i) = (0..n).find(|&i| exponents[i] != -exponents[n - 1 - i]) {
                    return bad(format!(
                        "exponents must be antisymmetric under reversal (k_{i} = {}, k_{} = {})",
                        exponents[i],
                        n - 1 - i,
                        exponents[n - 1 - i]
                    ));
                }
            }
        }
        if let GroupSpec::G2 = spec {
            let d = g2::data();
            let c = [exponents[4], exponents[5]];
            let bw = &d.basis_weights;
            if let Some(i) = (0..n).find(|&i| bw[i][0] * c[0] + bw[i][1] * c[1] != exponents[i]) {
                return bad(format!("k_{i} is not the pairing of the cocharacter with the weight of e_{i}"));
            }
        }
        Ok(Cocharacter { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// `τ = diag(t^{k_0}, …, t^{k_n})`.
    pub fn tau(&self) -> MatrixL {
        MatrixL::diagonal(self.exponents.iter().map(|&k| LaurentPoly::t_pow(k)).collect())
    }

    pub fn tau_inverse(&self) -> MatrixL {
        MatrixL::diagonal(self.exponents.iter().map(|&k| LaurentPoly::t_pow(-k)).collect())
    }
}

/// Validates `exponents` for `spec` and returns `τ`.
pub fn build_tau(spec: GroupSpec, exponents: &[i64]) -> Result<MatrixL> {
    Ok(Cocharacter::new(spec, exponents.to_vec())?.tau())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn mq(rows: &[&[(i64, i64)]]) -> MatrixQ {
        MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn membership_examples() {
        let sl3 = GroupSpec::sl(3).unwrap();
        assert!(sl3.membership(&MatrixQ::identity(3)).unwrap().is_member());
        let so5 = GroupSpec::so(2).unwrap();
        let d = MatrixQ::diagonal(vec![q(2, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 2)]);
        assert!(so5.membership(&d).unwrap().is_member());
        let sl2 = GroupSpec::sl(2).unwrap();
        assert!(sl2.membership(&mq(&[&[(1, 1), (1, 1)], &[(1, 1), (2, 1)]])).unwrap().is_member());
        assert!(!sl2.membership(&mq(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 1)]])).unwrap().is_member());
        assert!(matches!(
            sl2.membership(&MatrixQ::identity(3)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn spec_validation_and_parsing() {
        assert!(GroupSpec::sl(1).is_err());
        assert!(GroupSpec::so(1).is_err());
        assert_eq!(GroupSpec::parse("SL(3)").unwrap(), GroupSpec::SL { n: 3 });
        assert_eq!(GroupSpec::parse("so5").unwrap(), GroupSpec::SO { k: 2 });
        assert_eq!(GroupSpec::parse("G2").unwrap(), GroupSpec::G2);
        assert_eq!(GroupSpec::parse(r#"{"family":"SO","k":3}"#).unwrap(), GroupSpec::SO { k: 3 });
        assert!(GroupSpec::parse(r#"{"family":"SL","n":1}"#).is_err());
        assert!(GroupSpec::parse("so4").is_err());
        assert_eq!(serde_json::to_string(&GroupSpec::G2).unwrap(), r#"{"family":"G2"}"#);
        assert_eq!(serde_json::to_string(&GroupSpec::SL { n: 3 }).unwrap(), r#"{"family":"SL","n":3}"#);
    }

    #[test]
    fn root_counts() {
        assert_eq!(GroupSpec::sl(3).unwrap().roots().len(), 6);
        let so5 = GroupSpec::so(2).unwrap().roots();
        assert_eq!(so5.iter().filter(|r| r.positive).count(), 4);
        assert_eq!(so5.len(), 8);
        assert_eq!(GroupSpec::G2.roots().iter().filter(|r| r.positive).count(), 6);
        for spec in [GroupSpec::sl(4).unwrap(), GroupSpec::so(3).unwrap(), GroupSpec::G2] {
            for r in spec.roots() {
                let upper = (0..spec.dim())
                    .all(|i| (0..=i).all(|j| num_traits::Zero::is_zero(&r.nilpotent[(i, j)])));
                assert_eq!(upper, r.positive, "{spec} root {}", r.id);
            }
        }
    }

    #[test]
    fn sl2_positive_root() {
        let sl2 = GroupSpec::sl(2).unwrap();
        let e = sl2.root_element(0, &q(1, 1)).unwrap();
        assert_eq!(e.matrix(), &mq(&[&[(1, 1), (1, 1)], &[(0, 1), (1, 1)]]));
        assert!(matches!(sl2.root_element(9, &q(1, 1)), Err(Error::UnknownRoot { .. })));
    }

    #[test]
    fn every_root_element_is_a_member() {
        for spec in [GroupSpec::sl(3).unwrap(), GroupSpec::so(2).unwrap(), GroupSpec::so(3).unwrap(), GroupSpec::G2] {
            for r in spec.roots() {
                for s in [q(1, 1), q(-2, 3)] {
                    let e = spec.root_element(r.id, &s).unwrap();
                    assert!(spec.membership(e.matrix()).unwrap().is_member(), "{spec} root {}", r.id);
                }
            }
        }
    }

    #[test]
    fn random_elements_are_deterministic_members() {
        let sl3 = GroupSpec::sl(3).unwrap();
        let a = sl3.random_element_seeded(7, 6);
        assert_eq!(a, sl3.random_element_seeded(7, 6));
        assert_eq!(a.matrix().determinant(), q(1, 1));
        let single = sl3.random_element_seeded(3, 1);
        assert!(sl3.roots().iter().any(|r| {
            PARAMETER_POOL.iter().any(|&(n, d)| {
                sl3.root_element(r.id, &q(n, d)).unwrap().matrix() == single.matrix()
            })
        }));
    }

    #[test]
    fn closure_under_products_and_inverses() {
        for spec in [GroupSpec::sl(3).unwrap(), GroupSpec::so(2).unwrap(), GroupSpec::G2] {
            let mut rng = seeded_rng(5);
            let elems: Vec<Element> = (0..100).map(|_| spec.random_element(&mut rng, 3)).collect();
            for pair in elems.windows(2) {
                let p = pair[0].mul(&pair[1].inverse());
                assert!(spec.membership(p.matrix()).unwrap().is_member());
                assert!(pair[0].mul(&pair[0].inverse()).is_identity());
            }
        }
    }

    #[test]
    fn torus_elements_are_members() {
        let so5 = GroupSpec::so(2).unwrap();
        let t = so5.torus_element(&[q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(t.matrix(), &MatrixQ::diagonal(vec![q(2, 1), q(3, 1), q(1, 1), q(1, 3), q(1, 2)]));
        let g2t = GroupSpec::G2.torus_element(&[q(2, 1), q(3, 1)]).unwrap();
        assert!(GroupSpec::G2.membership(g2t.matrix()).unwrap().is_member());
        let mut rng = seeded_rng(1);
        for spec in [GroupSpec::sl(4).unwrap(), so5, GroupSpec::G2] {
            let tc = spec.random_torus_conjugate(&mut rng, 4);
            assert!(spec.membership(tc.element.matrix()).unwrap().is_member());
            assert!(tc.torus.matrix().is_diagonal());
        }
    }

    #[test]
    fn cocharacter_validation() {
        let sl3 = GroupSpec::sl(3).unwrap();
        let tau = build_tau(sl3, &[-1, 0, 1]).unwrap();
        assert_eq!(tau[(0, 0)], LaurentPoly::t_pow(-1));
        assert_eq!(tau[(2, 2)], LaurentPoly::t_pow(1));
        assert!(matches!(build_tau(sl3, &[-1, -1, 2]), Err(Error::InvalidCocharacter(_))));
        assert!(matches!(build_tau(sl3, &[-1, 0, 2]), Err(Error::InvalidCocharacter(_))));
        assert!(matches!(build_tau(sl3, &[1, 0, -1]), Err(Error::InvalidCocharacter(_))));
        let so5 = GroupSpec::so(2).unwrap();
        assert!(build_tau(so5, &[-2, -1, 0, 1, 2]).is_ok());
        assert!(build_tau(so5, &[-3, -1, 0, 1, 2]).is_err());
        assert!(build_tau(GroupSpec::G2, &[-3, -2, -1, 0, 1, 2, 3]).is_ok());
        // antisymmetric but not a cocharacter of the G2 torus
        assert!(build_tau(GroupSpec::G2, &[-4, -2, -1, 0, 1, 2, 4]).is_err());
        assert_eq!(GroupSpec::sl(2).unwrap().default_cocharacter().exponents(), &[-1, 1]);
        assert_eq!(GroupSpec::sl(4).unwrap().default_cocharacter().exponents(), &[-3, -1, 1, 3]);
        assert_eq!(GroupSpec::G2.default_cocharacter().exponents(), &[-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn center_handling() {
        let sl2 = GroupSpec::sl(2).unwrap();
        let a = MatrixQ::identity(2);
        let b = a.scale(&q(-1, 1));
        assert!(sl2.equal_mod_center(&a, &b));
        let so5 = GroupSpec::so(2).unwrap();
        assert!(!so5.equal_mod_center(&MatrixQ::identity(5), &MatrixQ::identity(5).scale(&q(-1, 1))));
    }
}
