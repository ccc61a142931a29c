//! The ping-pong certifier.
//!
//! For `η_i = h⁻¹ γ_i h` and `τ = diag(t^{k_0}, …, t^{k_n})` with increasing
//! exponents, `g_i = η_i τ η_i⁻¹` maps the complement of the hyperplane
//! `r_i^+ = e_0ᵀ η_i⁻¹` into the ball around `c_i^+ = η_i e_0`, and `g_i⁻¹`
//! maps the complement of `r_i^- = e_nᵀ η_i⁻¹` into the ball around
//! `c_i^- = η_i e_n`. If every pairing `r_j^± · c_i^±` (`i ≠ j`) is nonzero
//! and the base point `z` avoids all `2r` hyperplanes, no nonempty reduced
//! word fixes `z̃`, so the `g_i` are free generators.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{seeded_rng, Cocharacter, Element, GroupSpec};
use crate::json;
use crate::matrix::dot;
use crate::projective::{Covector, ProjPoint};
use crate::words::{reduced_count, FreeWord, Letter, Sign};
use crate::{LaurentPoly, MatrixL, MatrixQ, ProjPointC, ProjPointL, Rational};

/// The conjugated family `η_1, …, η_r` with cached inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaFamily {
    spec: GroupSpec,
    etas: Vec<MatrixQ>,
    eta_inverses: Vec<MatrixQ>,
    checked: bool,
}

impl EtaFamily {
    /// A family of group elements.
    pub fn new(spec: GroupSpec, etas: Vec<Element>) -> Result<Self> {
        if etas.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for e in &etas {
            if e.spec() != spec {
                return Err(Error::MembershipViolation {
                    group: spec.to_string(),
                    reason: format!("element belongs to {}", e.spec()),
                });
            }
        }
        let eta_inverses = etas.iter().map(|e| e.inverse().into_matrix()).collect();
        Ok(EtaFamily { spec, etas: etas.into_iter().map(Element::into_matrix).collect(), eta_inverses, checked: true })
    }

    /// Low-level entry point for arbitrary invertible matrices of the right
    /// size. No membership guarantee.
    pub fn from_matrices_unchecked(spec: GroupSpec, etas: Vec<MatrixQ>) -> Result<Self> {
        if etas.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut eta_inverses = Vec::with_capacity(etas.len());
        for m in &etas {
            if m.dim() != spec.dim() {
                return Err(Error::DimensionMismatch { expected: spec.dim(), found: m.dim() });
            }
            eta_inverses.push(m.inverse()?);
        }
        Ok(EtaFamily { spec, etas, eta_inverses, checked: false })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    /// Number of generators `r`.
    pub fn rank(&self) -> usize {
        self.etas.len()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn etas(&self) -> &[MatrixQ] {
        &self.etas
    }

    pub fn eta_inverses(&self) -> &[MatrixQ] {
        &self.eta_inverses
    }

    /// Whether every `η_i` passed membership.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    fn basis_index(&self, sign: Sign) -> usize {
        let b = self.spec.weight_basis();
        match sign {
            Sign::Plus => b.highest,
            Sign::Minus => b.lowest,
        }
    }

    /// `c_i^± = η_i e_0` or `η_i e_n`: the attracting direction of `g_i^{±1}`.
    pub fn column(&self, letter: Letter) -> Vec<Rational> {
        self.etas[letter.index - 1].column(self.basis_index(letter.sign))
    }

    /// `r_i^± = e_0ᵀ η_i⁻¹` or `e_nᵀ η_i⁻¹`: the hyperplane that `g_i^{±1}`
    /// needs its input to avoid.
    pub fn row(&self, letter: Letter) -> Vec<Rational> {
        self.eta_inverses[letter.index - 1].row(self.basis_index(letter.sign)).to_vec()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (1..=self.rank()).flat_map(|i| [Letter::plus(i), Letter::minus(i)])
    }
}

/// `η_i = h⁻¹ γ_i h`.
pub fn build_etas(gammas: &[Element], h: &Element) -> Result<EtaFamily> {
    let spec = h.spec();
    if gammas.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for g in gammas {
        spec.membership(g.matrix())?;
        if g.spec() != spec {
            return Err(Error::MembershipViolation {
                group: spec.to_string(),
                reason: format!("gamma belongs to {}", g.spec()),
            });
        }
    }
    for a in 0..gammas.len() {
        for b in a + 1..gammas.len() {
            if spec.equal_mod_center(gammas[a].matrix(), gammas[b].matrix()) {
                return Err(Error::DuplicateGamma { first: a + 1, second: b + 1 });
            }
        }
    }
    EtaFamily::new(spec, gammas.iter().map(|g| g.conjugate_by(h)).collect())
}

/// Label of the pairing `r_j^{sign_j} · c_i^{sign_i}`. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingKey {
    pub i: usize,
    pub j: usize,
    pub sign_i: Sign,
    pub sign_j: Sign,
}

impl PairingKey {
    fn order(&self) -> (usize, usize, Sign, Sign) {
        (self.j, self.i, self.sign_j, self.sign_i)
    }
}

impl PartialOrd for PairingKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Row first: `(j, i, sign_j, sign_i)`.
impl Ord for PairingKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order())
    }
}

impl fmt::Display for PairingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r_{}^{} . c_{}^{} (i={}, j={}, {}, {})", self.j, self.sign_j, self.i, self.sign_i, self.i, self.j, self.sign_i, self.sign_j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    #[serde(flatten)]
    pub key: PairingKey,
    #[serde(with = "json::rational")]
    pub value: Rational,
}

/// All pairings of a family, in [`PairingKey`] order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingTable {
    /// The `4r(r-1)` pairings with `i ≠ j`.
    pub cross: Vec<Pairing>,
    /// `r_i^+ · c_i^+` and `r_i^- · c_i^-`.
    pub self_pairings: Vec<Pairing>,
}

impl PairingTable {
    pub fn compute(family: &EtaFamily) -> Self {
        let r = family.rank();
        let signs = [Sign::Plus, Sign::Minus];
        let mut cross = Vec::with_capacity(4 * r * r.saturating_sub(1));
        let mut self_pairings = Vec::with_capacity(2 * r);
        for j in 1..=r {
            for i in 1..=r {
                for sign_j in signs {
                    let row = family.row(Letter::new(j, sign_j));
                    for sign_i in signs {
                        if i == j && sign_i != sign_j {
                            continue;
                        }
                        let col = family.column(Letter::new(i, sign_i));
                        let p = Pairing { key: PairingKey { i, j, sign_i, sign_j }, value: dot(&row, &col) };
                        if i == j {
                            self_pairings.push(p);
                        } else {
                            cross.push(p);
                        }
                    }
                }
            }
        }
        PairingTable { cross, self_pairings }
    }

    pub fn vanishing(&self) -> Vec<PairingKey> {
        self.cross.iter().chain(&self.self_pairings).filter(|p| p.value.is_zero()).map(|p| p.key).collect()
    }

    pub fn get(&self, key: PairingKey) -> Option<&Rational> {
        self.cross.iter().chain(&self.self_pairings).find(|p| p.key == key).map(|p| &p.value)
    }
}

/// Every vanishing pairing of a family that fails non-incidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub vanishing: Vec<PairingKey>,
    pub table: PairingTable,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vanishing pairing(s):", self.vanishing.len())?;
        for k in &self.vanishing {
            writeln!(f, "  {k} = 0")?;
        }
        Ok(())
    }
}

/// Computes every pairing; `Ok` iff none vanishes. Self-pairings equal 1
/// for a genuine inverse, and are checked rather than assumed.
pub fn check_nonincidence(family: &EtaFamily) -> std::result::Result<PairingTable, ViolationReport> {
    let table = PairingTable::compute(family);
    let vanishing = table.vanishing();
    if vanishing.is_empty() {
        Ok(table)
    } else {
        Err(ViolationReport { vanishing, table })
    }
}

/// `z` and its pairings with the `2r` covectors `r_j^±`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePoint {
    pub z: ProjPointC,
    /// The sweep parameter that produced `z = (1, m, …, m^n)`.
    pub m: u64,
    pub pairings: Vec<(Letter, Rational)>,
}

/// Pairings `r · z` for every letter of the family.
pub fn z_pairings(family: &EtaFamily, z: &[Rational]) -> Vec<(Letter, Rational)> {
    family.letters().map(|l| (l, dot(&family.row(l), z))).collect()
}

/// First `z_m = (1, m, m², …, m^n)`, `m = 1, 2, …`, off every hyperplane.
/// Each covector vanishes at at most `n` values of `m`, so `m ≤ 2rn + 1`.
pub fn find_z(family: &EtaFamily) -> Result<BasePoint> {
    let n = family.dim() - 1;
    let bound = (2 * family.rank() * n + 1) as u64;
    for m in 1..=bound {
        let mq = Rational::from_integer(m.into());
        let mut coords = Vec::with_capacity(n + 1);
        let mut p = Rational::one();
        for _ in 0..=n {
            coords.push(p.clone());
            p *= &mq;
        }
        let pairings = z_pairings(family, &coords);
        if pairings.iter().all(|(_, v)| !v.is_zero()) {
            return Ok(BasePoint { z: ProjPointC::new(coords)?, m, pairings });
        }
    }
    Err(Error::Unreachable(bound))
}

/// Exact Laurent matrices `g_i = η_i τ η_i⁻¹` and `g_i⁻¹ = η_i τ⁻¹ η_i⁻¹`.
#[derive(Debug, Clone)]
pub struct Generators {
    pub g: Vec<MatrixL>,
    pub g_inv: Vec<MatrixL>,
}

impl Generators {
    pub fn matrix(&self, letter: Letter) -> &MatrixL {
        match letter.sign {
            Sign::Plus => &self.g[letter.index - 1],
            Sign::Minus => &self.g_inv[letter.index - 1],
        }
    }

    /// Product of the generator matrices spelled by `word`.
    pub fn word_matrix(&self, word: &FreeWord) -> MatrixL {
        let n = self.g.first().map_or(0, MatrixL::dim);
        word.letters().iter().fold(MatrixL::identity(n), |acc, &l| &acc * self.matrix(l))
    }
}

fn lift(m: &MatrixQ) -> MatrixL {
    m.map(|x| LaurentPoly::constant(x.clone()))
}

pub fn make_generators(family: &EtaFamily, tau: &Cocharacter) -> Result<Generators> {
    if tau.exponents().len() != family.dim() {
        return Err(Error::DimensionMismatch { expected: family.dim(), found: tau.exponents().len() });
    }
    let (t, ti) = (tau.tau(), tau.tau_inverse());
    let mut g = Vec::new();
    let mut g_inv = Vec::new();
    for (e, ei) in family.etas.iter().zip(&family.eta_inverses) {
        let (e, ei) = (lift(e), lift(ei));
        let a = &(&e * &t) * &ei;
        let b = &(&e * &ti) * &ei;
        assert!((&a * &b).is_identity(), "g * g^-1 must be the identity");
        g.push(a);
        g_inv.push(b);
    }
    Ok(Generators { g, g_inv })
}

/// Applies `g_i^{±1}` in factored form `η_i · τ^{±1} · η_i⁻¹`, which costs
/// two rational matrix-vector products instead of a Laurent one.
#[derive(Debug, Clone)]
pub struct Tracer<'a> {
    family: &'a EtaFamily,
    exponents: Vec<i64>,
    z: ProjPointL,
    columns: Vec<Vec<Rational>>,
    rows: Vec<Covector<Rational>>,
    int: IntAction,
}

impl<'a> Tracer<'a> {
    pub fn new(family: &'a EtaFamily, tau: &Cocharacter, z: &ProjPointC) -> Result<Self> {
        if tau.exponents().len() != family.dim() || z.coords().len() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: z.coords().len() });
        }
        let mut columns = Vec::new();
        let mut rows = Vec::new();
        for l in (0..2 * family.rank()).map(Letter::from_code) {
            columns.push(family.column(l));
            rows.push(Covector::new(family.row(l))?);
        }
        let int = IntAction::new(family, tau.exponents(), z.coords());
        Ok(Tracer { family, exponents: tau.exponents().to_vec(), z: ProjPoint::lift(z), columns, rows, int })
    }

    pub fn z_lift(&self) -> &ProjPointL {
        &self.z
    }

    /// `c` for the letter.
    pub fn ball_target(&self, l: Letter) -> &[Rational] {
        &self.columns[l.code()]
    }

    /// `r` for the letter.
    pub fn covector(&self, l: Letter) -> &Covector<Rational> {
        &self.rows[l.code()]
    }

    pub fn apply(&self, l: Letter, p: &ProjPointL) -> ProjPointL {
        let i = l.index - 1;
        let (eta, eta_inv) = (&self.family.etas[i], &self.family.eta_inverses[i]);
        let n = self.family.dim();
        let coords = p.coords();
        let w: Vec<LaurentPoly> = (0..n)
            .map(|a| {
                (0..n).fold(LaurentPoly::zero(), |acc, b| {
                    let c = &eta_inv[(a, b)];
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add_scaled_shifted(c, 0, &coords[b])
                    }
                })
            })
            .collect();
        let s = l.sign.as_i8() as i64;
        let out: Vec<LaurentPoly> = (0..n)
            .map(|c| {
                (0..n).fold(LaurentPoly::zero(), |acc, a| {
                    let e = &eta[(c, a)];
                    if e.is_zero() {
                        acc
                    } else {
                        acc.add_scaled_shifted(e, s * self.exponents[a], &w[a])
                    }
                })
            })
            .collect();
        ProjPoint::normalize(out).expect("an invertible map sends nonzero vectors to nonzero vectors")
    }

    /// Traces `word` right to left from `z̃`.
    pub fn trace(&self, word: &FreeWord) -> Result<TraceOutcome> {
        if word.is_empty() {
            return Err(Error::Precondition("cannot trace the empty word".into()));
        }
        if word.rank() > self.family.rank() {
            return Err(Error::DimensionMismatch { expected: self.family.rank(), found: word.rank() });
        }
        let letters = word.letters();
        let len = letters.len();
        let fail = |check, position, steps| {
            Ok(TraceOutcome::Failure(FailureReport { word: word.clone(), position, check, steps }))
        };
        let start_ok = self.z.off_hyperplane(self.covector(letters[len - 1]));
        if !start_ok {
            return fail(Check::StartHyperplane, len, Vec::new());
        }
        let mut steps = Vec::with_capacity(len);
        let mut p = self.z.clone();
        for j in (1..=len).rev() {
            let l = letters[j - 1];
            p = self.apply(l, &p);
            let in_ball = p.in_ball(self.ball_target(l))?;
            let next = (j > 1).then(|| letters[j - 2]);
            let off = next.map(|n| p.off_hyperplane(self.covector(n)));
            steps.push(TraceStep {
                position: j,
                letter: l,
                point: p.clone(),
                ball_target: self.ball_target(l).to_vec(),
                in_ball,
                next_covector: next.map(|n| (n, self.covector(n).coords().to_vec())),
                off_hyperplane: off,
            });
            if !in_ball {
                return fail(Check::Ball, j, steps);
            }
            if off == Some(false) {
                return fail(Check::Hyperplane, j, steps);
            }
        }
        if p.proj_eq(&self.z) {
            return fail(Check::FixedPoint, 0, steps);
        }
        Ok(TraceOutcome::Success(WordTrace { word: word.clone(), steps }))
    }
}

/// What a step of a trace verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `z̃` lies off the hyperplane of the first letter applied.
    StartHyperplane,
    /// The image lies in the ball of the letter just applied.
    Ball,
    /// The image lies off the hyperplane of the next letter.
    Hyperplane,
    /// The final image differs from `z̃`.
    FixedPoint,
}

/// State after applying the letter at `position` (1-based, counted from the left).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub position: usize,
    pub letter: Letter,
    pub point: ProjPointL,
    pub ball_target: Vec<Rational>,
    pub in_ball: bool,
    pub next_covector: Option<(Letter, Vec<Rational>)>,
    pub off_hyperplane: Option<bool>,
}

/// A successful trace; steps run from position `l` down to `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTrace {
    pub word: FreeWord,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureReport {
    pub word: FreeWord,
    /// Position of the failing step; `0` for the fixed-point check.
    pub position: usize,
    pub check: Check,
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.check {
            Check::StartHyperplane => "base point lies on the hyperplane of the first letter applied",
            Check::Ball => "image leaves the ball of the letter just applied",
            Check::Hyperplane => "image lies on the hyperplane of the next letter",
            Check::FixedPoint => "word fixes the base point",
        };
        write!(f, "{}: {what} (position {})", self.word, self.position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    Success(WordTrace),
    Failure(FailureReport),
}

impl TraceOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, TraceOutcome::Success(_))
    }
}

/// Traces `word` with the fast factored action. Rejects unreduced input.
pub fn trace_word(letters: &[Letter], family: &EtaFamily, tau: &Cocharacter, z: &ProjPointC) -> Result<TraceOutcome> {
    let word = FreeWord::new(letters.to_vec())?;
    Tracer::new(family, tau, z)?.trace(&word)
}

/// Result of tracing every reduced word up to a length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub max_len: usize,
    pub words: u64,
    pub failures: u64,
    /// The shortlex-least failing word.
    pub first_failure: Option<FailureReport>,
}

impl VerifySummary {
    pub fn all_success(&self) -> bool {
        self.failures == 0
    }

    fn empty(max_len: usize) -> Self {
        VerifySummary { max_len, words: 0, failures: 0, first_failure: None }
    }

    fn merge(mut self, other: Self) -> Self {
        self.words += other.words;
        self.failures += other.failures;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if b.word.shortlex_key() < a.word.shortlex_key() { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Number of reduced words `w·s` with `|w·s| ≤ max_len`, given `|s| = len`.
fn extensions(rank: usize, len: usize, max_len: usize) -> u64 {
    let b = 2 * rank as u64 - 1;
    (0..=(max_len - len) as u32).map(|k| b.pow(k)).sum()
}

struct Dfs<'t, 'a> {
    tracer: &'t Tracer<'a>,
    rank: usize,
    max_len: usize,
}

impl Dfs<'_, '_> {
    /// `applied` is in application order, so the written word is its reverse.
    fn visit(&self, applied: &mut Vec<Letter>, p: &IntPoint, out: &mut VerifySummary) {
        let lead = applied.last().copied();
        for code in 0..2 * self.rank {
            let x = Letter::from_code(code);
            if lead == Some(x.inverse()) {
                continue;
            }
            applied.push(x);
            self.step(applied, p, out);
            applied.pop();
        }
    }

    fn step(&self, applied: &mut Vec<Letter>, p: &IntPoint, out: &mut VerifySummary) {
        let int = &self.tracer.int;
        let x = *applied.last().unwrap();
        let len = applied.len();
        // The check before x is the start check or the previous letter's hyperplane check.
        let ok = int.off_hyperplane(x, p) && {
            let q = int.apply(x, p);
            let in_ball = int.in_ball(x, &q);
            if in_ball {
                out.words += 1;
                if q.is_multiple_of(&int.z) {
                    self.record(applied, 1, out);
                }
                if len < self.max_len {
                    self.visit(applied, &q, out);
                }
            }
            in_ball
        };
        if !ok {
            // Every extension repeats the failing check.
            let n = extensions(self.rank, len, self.max_len);
            out.words += n;
            self.record(applied, n, out);
        }
    }

    fn record(&self, applied: &[Letter], count: u64, out: &mut VerifySummary) {
        out.failures += count;
        let word = FreeWord::new(applied.iter().rev().copied().collect()).expect("enumeration yields reduced words");
        if out.first_failure.as_ref().is_some_and(|f| f.word.shortlex_key() <= word.shortlex_key()) {
            return;
        }
        match self.tracer.trace(&word).expect("valid word") {
            TraceOutcome::Failure(f) => out.first_failure = Some(f),
            TraceOutcome::Success(_) => unreachable!("the incremental and full traces disagree on {word}"),
        }
    }
}

/// Traces every nonempty reduced word of length `≤ max_len`, sharing work
/// between words with a common suffix. Partitions by the first two letters
/// applied run in parallel on `jobs` threads (all cores when `None`); the
/// merge is associative, so the summary does not depend on `jobs`.
pub fn verify_free_up_to(tracer: &Tracer<'_>, max_len: usize, jobs: Option<usize>) -> VerifySummary {
    let rank = tracer.family.rank();
    if max_len == 0 {
        return VerifySummary::empty(0);
    }
    let int = &tracer.int;
    let z = int.start();
    let mut tasks = Vec::new();
    for a in (0..2 * rank).map(Letter::from_code) {
        let q = int.apply(a, &z);
        let root_ok = int.off_hyperplane(a, &z) && int.in_ball(a, &q);
        if !root_ok || max_len == 1 {
            // Pruned at once, or nothing below the root.
            tasks.push(Task { applied: vec![a], point: z.clone(), max_len });
            continue;
        }
        tasks.push(Task { applied: vec![a], point: z.clone(), max_len: 1 });
        for b in (0..2 * rank).map(Letter::from_code).filter(|b| *b != a.inverse()) {
            tasks.push(Task { applied: vec![a, b], point: q.clone(), max_len });
        }
    }
    let run = |t: &Task| {
        let mut out = VerifySummary::empty(max_len);
        let dfs = Dfs { tracer, rank, max_len: t.max_len };
        dfs.step(&mut t.applied.clone(), &t.point, &mut out);
        out
    };
    let empty = || VerifySummary::empty(max_len);
    let summary = match jobs {
        Some(1) => tasks.iter().map(run).fold(empty(), VerifySummary::merge),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(|| tasks.par_iter().map(run).reduce(empty, VerifySummary::merge)),
        None => tasks.par_iter().map(run).reduce(empty, VerifySummary::merge),
    };
    debug_assert_eq!(summary.words, (1..=max_len).map(|l| reduced_count(rank, l)).sum::<u64>());
    summary
}

/// A subtree of the word tree: the last letter of `applied` is still to be
/// applied to `point`.
struct Task {
    applied: Vec<Letter>,
    point: IntPoint,
    max_len: usize,
}

/// Integer form of the action used by the enumeration. Each `η_i`, `η_i⁻¹`,
/// covector, ball target and `z` is scaled to a primitive integer vector or
/// matrix, and points are kept primitive, which leaves every projective
/// statement unchanged while avoiding rational arithmetic.
#[derive(Debug, Clone)]
struct IntAction {
    n: usize,
    exponents: Vec<i64>,
    eta: Vec<Vec<BigInt>>,
    eta_inv: Vec<Vec<BigInt>>,
    /// Indexed by [`Letter::code`].
    rows: Vec<Vec<BigInt>>,
    columns: Vec<Vec<BigInt>>,
    z: Vec<BigInt>,
}

/// A normalized point with integer coefficients; `coords[c][d]` is the
/// coefficient of `t^d` in coordinate `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntPoint {
    coords: Vec<Vec<BigInt>>,
}

fn to_integers(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.iter().map(|x| x / &g).collect()
    }
}

/// `a ∝ b`: every 2×2 minor vanishes.
fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

impl IntAction {
    fn new(family: &EtaFamily, exponents: &[i64], z: &[Rational]) -> Self {
        let letters: Vec<Letter> = (0..2 * family.rank()).map(Letter::from_code).collect();
        IntAction {
            n: family.dim(),
            exponents: exponents.to_vec(),
            eta: family.etas.iter().map(|m| to_integers(m.entries())).collect(),
            eta_inv: family.eta_inverses.iter().map(|m| to_integers(m.entries())).collect(),
            rows: letters.iter().map(|&l| to_integers(&family.row(l))).collect(),
            columns: letters.iter().map(|&l| to_integers(&family.column(l))).collect(),
            z: to_integers(z),
        }
    }

    fn start(&self) -> IntPoint {
        IntPoint { coords: self.z.iter().map(|x| if x.is_zero() { Vec::new() } else { vec![x.clone()] }).collect() }
    }

    fn off_hyperplane(&self, l: Letter, p: &IntPoint) -> bool {
        let r = &self.rows[l.code()];
        !p.residue().iter().zip(r).fold(BigInt::zero(), |acc, (x, y)| acc + x * y).is_zero()
    }

    fn in_ball(&self, l: Letter, p: &IntPoint) -> bool {
        proportional(&p.residue(), &self.columns[l.code()])
    }

    fn apply(&self, l: Letter, p: &IntPoint) -> IntPoint {
        let n = self.n;
        let i = l.index - 1;
        let (eta, inv) = (&self.eta[i], &self.eta_inv[i]);
        let len = p.coords.iter().map(Vec::len).max().unwrap_or(0);
        let mut w = vec![vec![BigInt::zero(); len]; n];
        for (a, wa) in w.iter_mut().enumerate() {
            for (b, pb) in p.coords.iter().enumerate() {
                let c = &inv[a * n + b];
                if c.is_zero() {
                    continue;
                }
                for (slot, x) in wa.iter_mut().zip(pb) {
                    if !x.is_zero() {
                        *slot += c * x;
                    }
                }
            }
        }
        let s = l.sign.as_i8() as i64;
        let shifts: Vec<i64> = self.exponents.iter().map(|k| s * k).collect();
        let lo = *shifts.iter().min().unwrap();
        let hi = *shifts.iter().max().unwrap();
        let mut out = vec![vec![BigInt::zero(); len + (hi - lo) as usize]; n];
        for (c, oc) in out.iter_mut().enumerate() {
            for (a, wa) in w.iter().enumerate() {
                let e = &eta[c * n + a];
                if e.is_zero() {
                    continue;
                }
                let off = (shifts[a] - lo) as usize;
                for (slot, x) in oc[off..].iter_mut().zip(wa) {
                    if !x.is_zero() {
                        *slot += e * x;
                    }
                }
            }
        }
        IntPoint::normalize(out)
    }
}

impl IntPoint {
    fn normalize(mut coords: Vec<Vec<BigInt>>) -> Self {
        let v = coords
            .iter()
            .filter_map(|c| c.iter().position(|x| !x.is_zero()))
            .min()
            .expect("an invertible map sends nonzero vectors to nonzero vectors");
        let mut g = BigInt::zero();
        for c in coords.iter_mut() {
            c.drain(..v.min(c.len()));
            while c.last().is_some_and(Zero::is_zero) {
                c.pop();
            }
            for x in c.iter() {
                if !g.is_one() {
                    g = g.gcd(x);
                }
            }
        }
        if !g.is_one() {
            for x in coords.iter_mut().flatten() {
                *x /= &g;
            }
        }
        IntPoint { coords }
    }

    fn residue(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.first().cloned().unwrap_or_default()).collect()
    }

    fn is_multiple_of(&self, z: &[BigInt]) -> bool {
        self.coords.iter().all(|c| c.len() <= 1) && proportional(&self.residue(), z)
    }

    /// Same point with rational Laurent coordinates.
    #[cfg(test)]
    fn to_laurent(&self) -> ProjPointL {
        let raw = self
            .coords
            .iter()
            .map(|c| {
                LaurentPoly::from_terms(c.iter().enumerate().map(|(d, x)| (d as i64, Rational::from_integer(x.clone()))))
            })
            .collect();
        ProjPoint::normalize(raw).expect("points are nonzero")
    }
}

/// Words of length `≤ max_len` whose generator product is the identity.
/// Laurent entries grow with the length, so keep `max_len` small.
pub fn trivial_words_direct(gens: &Generators, rank: usize, max_len: usize) -> Vec<FreeWord> {
    crate::words::enumerate_reduced(rank, max_len).filter(|w| gens.word_matrix(w).is_identity()).collect()
}

/// Outcome of one conjugator trial in [`search_h`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub attempt: usize,
    pub complexity: usize,
    pub vanishing: Vec<PairingKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HSearch {
    Found { h: Element, attempt: usize, complexity: usize, family: EtaFamily, table: PairingTable },
    Exhausted { attempts: Vec<Attempt> },
}

/// Word length of the random conjugator tried at 1-based `attempt ≥ 2`:
/// 4, raised by 2 after every 10 failures.
pub fn search_complexity(attempt: usize) -> usize {
    4 + 2 * ((attempt - 1) / 10)
}

/// The conjugator tried at 1-based `attempt`: the identity first, then
/// random elements whose seeds are drawn in turn from one generator seeded
/// with `seed`. Replaying a trial needs only `(seed, attempt)`.
pub fn search_trial(spec: GroupSpec, seed: u64, attempt: usize) -> (Element, usize) {
    if attempt <= 1 {
        return (Element::identity(spec), 0);
    }
    let mut rng = seeded_rng(seed);
    let mut sub: u64 = 0;
    for _ in 2..=attempt {
        sub = rng.gen();
    }
    let c = search_complexity(attempt);
    (spec.random_element_seeded(sub, c), c)
}

/// Runs the trials of [`search_trial`] until non-incidence holds or
/// `budget` trials are used.
pub fn search_h(gammas: &[Element], spec: GroupSpec, budget: usize, seed: u64) -> Result<HSearch> {
    let mut rng = seeded_rng(seed);
    let mut attempts = Vec::new();
    for attempt in 1..=budget {
        let (h, complexity) = if attempt == 1 {
            (Element::identity(spec), 0)
        } else {
            let c = search_complexity(attempt);
            (spec.random_element_seeded(rng.gen(), c), c)
        };
        let family = build_etas(gammas, &h)?;
        match check_nonincidence(&family) {
            Ok(table) => return Ok(HSearch::Found { h, attempt, complexity, family, table }),
            Err(report) => attempts.push(Attempt { attempt, complexity, vanishing: report.vanishing }),
        }
    }
    Ok(HSearch::Exhausted { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    fn sl2() -> GroupSpec {
        GroupSpec::sl(2).unwrap()
    }

    fn sl2_family() -> EtaFamily {
        let g1 = Element::identity(sl2());
        let g2 = Element::new(sl2(), m(&[&[1, 1], &[1, 2]])).unwrap();
        build_etas(&[g1, g2], &Element::identity(sl2())).unwrap()
    }

    fn sl2_tau() -> Cocharacter {
        Cocharacter::new(sl2(), vec![-1, 1]).unwrap()
    }

    fn diag_family() -> EtaFamily {
        EtaFamily::from_matrices_unchecked(sl2(), vec![m(&[&[1, 0], &[0, 1]]), m(&[&[1, 0], &[0, 2]])]).unwrap()
    }

    fn vals(table: &PairingTable, j: usize) -> Vec<Rational> {
        table.cross.iter().filter(|p| p.key.j == j).map(|p| p.value.clone()).collect()
    }

    #[test]
    fn sl2_pairings_match_hand_computation() {
        let table = check_nonincidence(&sl2_family()).unwrap();
        assert_eq!(table.cross.len(), 8);
        assert_eq!(vals(&table, 1), vec![q(1), q(1), q(1), q(2)]);
        assert_eq!(vals(&table, 2), vec![q(2), q(-1), q(-1), q(1)]);
        assert_eq!(table.self_pairings.len(), 4);
        assert!(table.self_pairings.iter().all(|p| p.value == q(1)));
    }

    #[test]
    fn identity_conjugator_keeps_gammas() {
        let f = sl2_family();
        assert_eq!(f.etas()[1], m(&[&[1, 1], &[1, 2]]));
        assert_eq!(f.eta_inverses()[1], m(&[&[2, -1], &[-1, 1]]));
    }

    #[test]
    fn conjugated_family_is_exact() {
        let g = Element::new(sl2(), m(&[&[1, 1], &[1, 2]])).unwrap();
        let h = Element::new(sl2(), m(&[&[1, 0], &[1, 1]])).unwrap();
        let f = build_etas(std::slice::from_ref(&g), &h).unwrap();
        let expected = &(&h.matrix().inverse().unwrap() * g.matrix()) * h.matrix();
        assert_eq!(f.etas()[0], expected);
        assert_eq!(f.etas()[0], m(&[&[2, 1], &[1, 1]]));
        let single = check_nonincidence(&f).unwrap();
        assert!(single.cross.is_empty());
    }

    #[test]
    fn duplicate_gammas_are_rejected() {
        let g = Element::new(sl2(), m(&[&[1, 1], &[1, 2]])).unwrap();
        let minus_g = Element::new(sl2(), m(&[&[-1, -1], &[-1, -2]])).unwrap();
        let err = build_etas(&[g, minus_g], &Element::identity(sl2())).unwrap_err();
        assert_eq!(err, Error::DuplicateGamma { first: 1, second: 2 });
        assert_eq!(build_etas(&[], &Element::identity(sl2())).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn diagonal_eta_violates() {
        let report = check_nonincidence(&diag_family()).unwrap_err();
        let key = PairingKey { i: 2, j: 1, sign_i: Sign::Plus, sign_j: Sign::Minus };
        assert!(report.vanishing.contains(&key));
        assert_eq!(report.vanishing.len(), 4);
    }

    #[test]
    fn z_sweep_matches_hand_computation() {
        let bp = find_z(&sl2_family()).unwrap();
        assert_eq!(bp.m, 3);
        assert_eq!(bp.z.coords(), &[q(1), q(3)]);
        let one = EtaFamily::new(sl2(), vec![Element::identity(sl2())]).unwrap();
        assert_eq!(find_z(&one).unwrap().m, 1);
    }

    #[test]
    fn generators_are_exact() {
        let f = sl2_family();
        let gens = make_generators(&f, &sl2_tau()).unwrap();
        assert_eq!(gens.g[0], sl2_tau().tau());
        let t = |k| LaurentPoly::t_pow(k);
        // [[1,1],[1,2]] diag(t^-1, t) [[2,-1],[-1,1]]
        let expected = MatrixL::from_rows(vec![
            vec![&t(-1).scale(&q(2)) - &t(1), &t(1) - &t(-1)],
            vec![&t(-1).scale(&q(2)) - &t(1).scale(&q(2)), &t(1).scale(&q(2)) - &t(-1)],
        ])
        .unwrap();
        assert_eq!(gens.g[1], expected);
    }

    #[test]
    fn factored_action_matches_matrix_action() {
        let f = sl2_family();
        let tau = sl2_tau();
        let gens = make_generators(&f, &tau).unwrap();
        let z = find_z(&f).unwrap().z;
        let tracer = Tracer::new(&f, &tau, &z).unwrap();
        let mut p = tracer.z_lift().clone();
        for code in [0, 2, 2, 1, 3, 0] {
            let l = Letter::from_code(code);
            let fast = tracer.apply(l, &p);
            let slow = p.apply(gens.matrix(l)).unwrap();
            assert_eq!(fast, slow);
            p = fast;
        }
    }

    #[test]
    fn integer_route_matches_rational_route() {
        for f in [sl2_family(), diag_family()] {
            let tau = sl2_tau();
            let z = find_z(&f).unwrap().z;
            let tracer = Tracer::new(&f, &tau, &z).unwrap();
            for w in crate::words::enumerate_reduced(2, 4) {
                let mut p = tracer.z_lift().clone();
                let mut ip = tracer.int.start();
                for &l in w.letters().iter().rev() {
                    assert_eq!(tracer.int.off_hyperplane(l, &ip), p.off_hyperplane(tracer.covector(l)));
                    p = tracer.apply(l, &p);
                    ip = tracer.int.apply(l, &ip);
                    assert!(ip.to_laurent().proj_eq(&p), "{w}");
                    assert_eq!(tracer.int.in_ball(l, &ip), p.in_ball(tracer.ball_target(l)).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_letter_trace() {
        let f = sl2_family();
        let z = find_z(&f).unwrap().z;
        let TraceOutcome::Success(t) = trace_word(&[Letter::plus(1)], &f, &sl2_tau(), &z).unwrap() else {
            panic!("x1 must trace")
        };
        let p = &t.steps[0].point;
        assert_eq!(p.coords()[0], LaurentPoly::constant(q(1)));
        assert_eq!(p.coords()[1], LaurentPoly::monomial(q(3), 2));
        assert_eq!(p.reduce().coords(), &[q(1), q(0)]);
    }

    #[test]
    fn two_letter_trace() {
        let f = sl2_family();
        let z = find_z(&f).unwrap().z;
        let out = trace_word(&[Letter::plus(2), Letter::plus(1)], &f, &sl2_tau(), &z).unwrap();
        let TraceOutcome::Success(t) = out else { panic!("x2 x1 must trace") };
        assert_eq!(t.steps.len(), 2);
        assert_eq!(t.steps[0].position, 2);
        assert_eq!(t.steps[0].next_covector.as_ref().unwrap().1, vec![q(2), q(-1)]);
        assert_eq!(t.steps[1].point.reduce().coords(), &[q(1), q(1)]);
    }

    #[test]
    fn unreduced_word_is_rejected() {
        let f = sl2_family();
        let z = find_z(&f).unwrap().z;
        let err = trace_word(&[Letter::plus(1), Letter::minus(1)], &f, &sl2_tau(), &z).unwrap_err();
        assert_eq!(err, Error::NotReduced(0));
    }

    #[test]
    fn ball_membership_forces_the_hyperplane_check() {
        let f = sl2_family();
        let tau = sl2_tau();
        let z = find_z(&f).unwrap().z;
        let tracer = Tracer::new(&f, &tau, &z).unwrap();
        for w in crate::words::enumerate_reduced(2, 5) {
            let TraceOutcome::Success(t) = tracer.trace(&w).unwrap() else { panic!("{w} fails") };
            for s in &t.steps {
                if let (true, Some((_, r)), Some(off)) = (s.in_ball, &s.next_covector, s.off_hyperplane) {
                    assert_eq!(off, !dot(r, &s.ball_target).is_zero());
                }
            }
        }
    }

    #[test]
    fn verify_counts_and_succeeds() {
        let f = sl2_family();
        let tau = sl2_tau();
        let z = find_z(&f).unwrap().z;
        let tracer = Tracer::new(&f, &tau, &z).unwrap();
        for jobs in [Some(1), Some(3), None] {
            let s = verify_free_up_to(&tracer, 5, jobs);
            assert_eq!(s.words, 4 + 12 + 36 + 108 + 324);
            assert!(s.all_success());
        }
        let empty = verify_free_up_to(&tracer, 0, None);
        assert_eq!(empty.words, 0);
        assert!(empty.all_success());
    }

    #[test]
    fn forced_trace_of_violating_family_fails_at_length_two() {
        let f = diag_family();
        let tau = sl2_tau();
        let z = find_z(&f).unwrap().z;
        let tracer = Tracer::new(&f, &tau, &z).unwrap();
        for jobs in [Some(1), Some(4)] {
            let s = verify_free_up_to(&tracer, 4, jobs);
            assert_eq!(s.words, 4 + 12 + 36 + 108);
            let first = s.first_failure.unwrap();
            assert_eq!(first.word.len(), 2);
            assert_eq!(first.word.to_string(), "x1 x2^-1");
            assert_eq!(first.check, Check::Hyperplane);
            assert!(s.failures > 0);
        }
        let seq = verify_free_up_to(&tracer, 4, Some(1));
        let par = verify_free_up_to(&tracer, 4, Some(4));
        assert_eq!(seq, par);
    }

    #[test]
    fn search_tries_identity_first() {
        let f = sl2_family();
        let gammas: Vec<Element> = f.etas().iter().map(|e| Element::new(sl2(), e.clone()).unwrap()).collect();
        match search_h(&gammas, sl2(), 5, 42).unwrap() {
            HSearch::Found { attempt, h, .. } => {
                assert_eq!(attempt, 1);
                assert!(h.is_identity());
            }
            HSearch::Exhausted { .. } => panic!("identity works"),
        }
        assert!(matches!(search_h(&gammas, sl2(), 0, 42).unwrap(), HSearch::Exhausted { .. }));
        for k in 1..15 {
            let (h, _) = search_trial(GroupSpec::so(2).unwrap(), 7, k);
            assert_eq!(h.spec().membership(h.matrix()).unwrap(), crate::groups::Membership::Member);
        }
        assert_eq!(search_complexity(2), 4);
        assert_eq!(search_complexity(10), 4);
        assert_eq!(search_complexity(11), 6);
    }
}
