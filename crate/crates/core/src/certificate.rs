//! Self-contained certificate files.
//!
//! A certificate stores the input matrices, the conjugator, the conjugated
//! family and every nonzero scalar the ping-pong argument relies on.
//! [`Certificate::recheck`] recomputes all of it from the stored matrices and
//! never trusts a stored scalar. Only `metadata.generated_at` varies between
//! runs of the same job.

use std::time::{SystemTime, UNIX_EPOCH};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::certifier::{
    self, check_nonincidence, find_z, search_h, search_trial, Attempt, EtaFamily, HSearch, Pairing,
    PairingTable, Tracer, VerifySummary, ViolationReport,
};
use crate::error::{Error, Result};
use crate::groups::{Cocharacter, Element, GroupSpec, Membership};
use crate::json;
use crate::words::{reduced_count, Letter, Sign};
use crate::{MatrixQ, ProjPointC, Rational};

pub const SCHEMA: &str = "pingpong-certificate/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPairing {
    pub j: usize,
    pub sign: Sign,
    #[serde(with = "json::rational")]
    pub value: Rational,
}

/// How `h` was found by the seeded search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSearchRecord {
    pub seed: u64,
    pub budget: usize,
    pub attempt: usize,
    pub complexity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub max_len: usize,
    pub words: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub tool: String,
    /// Seconds since the Unix epoch. The only nondeterministic field.
    pub generated_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema: String,
    pub group: GroupSpec,
    pub exponents: Vec<i64>,
    #[serde(with = "json::matrix_q_vec")]
    pub gammas: Vec<MatrixQ>,
    #[serde(with = "json::matrix_q")]
    pub h: MatrixQ,
    pub h_search: Option<HSearchRecord>,
    #[serde(with = "json::matrix_q_vec")]
    pub etas: Vec<MatrixQ>,
    pub pairings: Vec<Pairing>,
    pub self_pairings: Vec<Pairing>,
    #[serde(with = "json::rational_vec")]
    pub z: Vec<Rational>,
    pub z_pairings: Vec<ZPairing>,
    pub summary: Option<SummaryRecord>,
    pub metadata: Metadata,
}

/// Where the conjugator comes from.
#[derive(Debug, Clone)]
pub enum HChoice {
    Given(Element),
    Search { budget: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CertifyJob {
    pub spec: GroupSpec,
    pub gammas: Vec<Element>,
    pub h: HChoice,
    pub cocharacter: Cocharacter,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(Box<Certificate>),
    Violated(ViolationReport),
    Exhausted(Vec<Attempt>),
}

fn now() -> Option<u64> {
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

/// Conjugator, non-incidence and base point for a job.
pub fn certify(job: &CertifyJob) -> Result<CertifyOutcome> {
    if job.cocharacter.exponents().len() != job.spec.dim() {
        return Err(Error::DimensionMismatch { expected: job.spec.dim(), found: job.cocharacter.exponents().len() });
    }
    let (h, h_search, family, table) = match &job.h {
        HChoice::Given(h) => {
            let family = certifier::build_etas(&job.gammas, h)?;
            match check_nonincidence(&family) {
                Ok(table) => (h.clone(), None, family, table),
                Err(report) => return Ok(CertifyOutcome::Violated(report)),
            }
        }
        HChoice::Search { budget, seed } => match search_h(&job.gammas, job.spec, *budget, *seed)? {
            HSearch::Found { h, attempt, complexity, family, table } => {
                let record = HSearchRecord { seed: *seed, budget: *budget, attempt, complexity };
                (h, Some(record), family, table)
            }
            HSearch::Exhausted { attempts } => return Ok(CertifyOutcome::Exhausted(attempts)),
        },
    };
    let base = find_z(&family)?;
    let z_pairings = base
        .pairings
        .iter()
        .map(|(l, v)| ZPairing { j: l.index, sign: l.sign, value: v.clone() })
        .collect();
    Ok(CertifyOutcome::Certified(Box::new(Certificate {
        schema: SCHEMA.to_string(),
        group: job.spec,
        exponents: job.cocharacter.exponents().to_vec(),
        gammas: job.gammas.iter().map(|g| g.matrix().clone()).collect(),
        h: h.into_matrix(),
        h_search,
        etas: family.etas().to_vec(),
        pairings: table.cross,
        self_pairings: table.self_pairings,
        z: base.z.coords().to_vec(),
        z_pairings,
        summary: None,
        metadata: Metadata {
            seed: job.seed,
            tool: concat!("pingpong ", env!("CARGO_PKG_VERSION")).to_string(),
            generated_at: now(),
        },
    })))
}

impl Certificate {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("certificate: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    /// The JSON text with `generated_at` cleared: equal for equal jobs.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.metadata.generated_at = None;
        c.to_json()
    }

    pub fn cocharacter(&self) -> Result<Cocharacter> {
        Cocharacter::new(self.group, self.exponents.clone())
    }

    /// The stored family, membership-checked.
    pub fn family(&self) -> Result<EtaFamily> {
        let etas = self
            .etas
            .iter()
            .map(|m| Element::new(self.group, m.clone()))
            .collect::<Result<Vec<_>>>()?;
        EtaFamily::new(self.group, etas)
    }

    pub fn base_point(&self) -> Result<ProjPointC> {
        ProjPointC::new(self.z.clone())
    }

    pub fn record_summary(&mut self, s: &VerifySummary) {
        self.summary = Some(SummaryRecord { max_len: s.max_len, words: s.words, failures: s.failures });
    }

    /// Every integrity problem found by recomputing the certificate from
    /// its matrices, including a fresh trace for a stored summary. Empty
    /// means the certificate is sound.
    pub fn recheck(&self) -> Vec<String> {
        let mut problems = self.recheck_claims();
        if let (true, Some(s)) = (problems.is_empty(), &self.summary) {
            match self.verify(s.max_len, None) {
                Ok(fresh) if fresh.failures == s.failures && fresh.words == s.words => {}
                Ok(fresh) => problems.push(format!(
                    "summary records {} failures in {} words, retrace finds {} in {}",
                    s.failures, s.words, fresh.failures, fresh.words
                )),
                Err(e) => problems.push(e.to_string()),
            }
        }
        problems
    }

    /// [`Certificate::recheck`] without retracing the summary.
    pub fn recheck_claims(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if let Err(p) = self.recheck_inner(&mut problems) {
            problems.push(p.to_string());
        }
        problems
    }

    fn recheck_inner(&self, problems: &mut Vec<String>) -> Result<()> {
        let spec = self.group;
        if self.schema != SCHEMA {
            problems.push(format!("unknown schema {:?}", self.schema));
        }
        self.cocharacter()?;
        let member = |m: &MatrixQ, what: String| -> Result<Option<String>> {
            Ok(match spec.membership(m)? {
                Membership::Member => None,
                Membership::Violates(r) => Some(format!("{what} is not in {spec}: {r}")),
            })
        };
        if self.gammas.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut gammas = Vec::new();
        for (i, g) in self.gammas.iter().enumerate() {
            match member(g, format!("gamma {}", i + 1))? {
                Some(p) => problems.push(p),
                None => gammas.push(Element::new(spec, g.clone())?),
            }
        }
        if let Some(p) = member(&self.h, "h".into())? {
            problems.push(p);
            return Ok(());
        }
        if gammas.len() != self.gammas.len() {
            return Ok(());
        }
        let h = Element::new(spec, self.h.clone())?;
        if let Some(rec) = &self.h_search {
            let (trial, complexity) = search_trial(spec, rec.seed, rec.attempt);
            if trial != h || complexity != rec.complexity || rec.attempt == 0 || rec.attempt > rec.budget {
                problems.push(format!("h is not trial {} of the search with seed {}", rec.attempt, rec.seed));
            }
        }
        let family = match certifier::build_etas(&gammas, &h) {
            Ok(f) => f,
            Err(e) => {
                problems.push(e.to_string());
                return Ok(());
            }
        };
        if family.etas() != self.etas.as_slice() {
            problems.push("stored etas differ from h^-1 gamma h".into());
        }
        let table = PairingTable::compute(&family);
        compare_pairings("pairing", &table.cross, &self.pairings, problems);
        compare_pairings("self-pairing", &table.self_pairings, &self.self_pairings, problems);
        match ProjPointC::new(self.z.clone()) {
            Ok(z) if z.coords() == self.z.as_slice() => {}
            _ => problems.push("z is not a normalized residue point".into()),
        }
        if self.z.len() != spec.dim() {
            problems.push(format!("z has {} coordinates, expected {}", self.z.len(), spec.dim()));
        } else {
            let expected = certifier::z_pairings(&family, &self.z);
            if expected.len() != self.z_pairings.len() {
                problems.push("wrong number of z pairings".into());
            }
            for ((l, v), stored) in expected.iter().zip(&self.z_pairings) {
                let label = format!("z pairing with r_{}^{}", l.index, l.sign);
                if Letter::new(stored.j, stored.sign) != *l {
                    problems.push(format!("{label}: stored under the wrong label"));
                } else if stored.value != *v {
                    problems.push(format!("{label}: stored {}, recomputed {}", stored.value, v));
                }
                if v.is_zero() {
                    problems.push(format!("{label} vanishes"));
                }
            }
        }
        if let Some(s) = &self.summary {
            let words: u64 = (1..=s.max_len).map(|l| reduced_count(family.rank(), l)).sum();
            if s.words != words || s.failures > s.words {
                problems.push(format!("summary counts {} words, expected {words}", s.words));
            }
        }
        Ok(())
    }

    /// Rechecks, then traces every reduced word up to `max_len`.
    pub fn verify(&self, max_len: usize, jobs: Option<usize>) -> Result<VerifySummary> {
        let family = self.family()?;
        let tau = self.cocharacter()?;
        let z = self.base_point()?;
        let tracer = Tracer::new(&family, &tau, &z)?;
        Ok(certifier::verify_free_up_to(&tracer, max_len, jobs))
    }
}

fn compare_pairings(what: &str, fresh: &[Pairing], stored: &[Pairing], problems: &mut Vec<String>) {
    if fresh.len() != stored.len() {
        problems.push(format!("expected {} {what}s, found {}", fresh.len(), stored.len()));
    }
    for (f, s) in fresh.iter().zip(stored) {
        if f.key != s.key {
            problems.push(format!("{what} {} stored under label {}", f.key, s.key));
        } else if f.value != s.value {
            problems.push(format!("{what} {}: stored {}, recomputed {}", f.key, s.value, f.value));
        }
        if f.value.is_zero() {
            problems.push(format!("{what} {} vanishes", f.key));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn sl2_job() -> CertifyJob {
        let spec = GroupSpec::sl(2).unwrap();
        let g2 = MatrixQ::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(2)]]).unwrap();
        CertifyJob {
            spec,
            gammas: vec![Element::identity(spec), Element::new(spec, g2).unwrap()],
            h: HChoice::Given(Element::identity(spec)),
            cocharacter: Cocharacter::new(spec, vec![-1, 1]).unwrap(),
            seed: 42,
        }
    }

    fn certified(job: &CertifyJob) -> Certificate {
        match certify(job).unwrap() {
            CertifyOutcome::Certified(c) => *c,
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn sl2_certificate_round_trips_and_rechecks() {
        let c = certified(&sl2_job());
        assert_eq!(c.pairings.len(), 8);
        assert_eq!(c.z, vec![q(1), q(3)]);
        assert!(c.recheck().is_empty());
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(certified(&sl2_job()).canonical_json(), c.canonical_json());
    }

    #[test]
    fn tampering_is_detected() {
        let c = certified(&sl2_job());
        let mut t = c.clone();
        t.pairings[3].value = q(0);
        assert!(!t.recheck().is_empty());
        let mut t = c.clone();
        t.z[1] = q(4);
        assert!(!t.recheck().is_empty());
        let mut t = c.clone();
        t.etas[1][(0, 0)] = q(3);
        assert!(!t.recheck().is_empty());
        let mut t = c;
        t.exponents = vec![-2, 1];
        assert!(!t.recheck().is_empty());
    }

    #[test]
    fn searched_conjugator_replays() {
        let spec = GroupSpec::sl(2).unwrap();
        // Upper unitriangular gammas share e_0 as an eigenline, so h = 1 fails.
        let u = |s: i64| Element::new(spec, MatrixQ::from_rows(vec![vec![q(1), q(s)], vec![q(0), q(1)]]).unwrap()).unwrap();
        let mut job = sl2_job();
        job.gammas = vec![u(1), u(2)];
        job.h = HChoice::Search { budget: 50, seed: 42 };
        let c = certified(&job);
        let rec = c.h_search.clone().unwrap();
        assert!(rec.attempt > 1);
        assert!(c.recheck().is_empty());
        let mut t = c;
        t.h_search.as_mut().unwrap().attempt += 1;
        assert!(!t.recheck().is_empty());
    }

    #[test]
    fn violation_is_an_outcome() {
        let spec = GroupSpec::sl(2).unwrap();
        let mut job = sl2_job();
        let d = Element::new(spec, MatrixQ::diagonal(vec![q(2), Rational::new(1.into(), 2.into())])).unwrap();
        job.gammas = vec![Element::identity(spec), d];
        assert!(matches!(certify(&job).unwrap(), CertifyOutcome::Violated(_)));
    }
}
