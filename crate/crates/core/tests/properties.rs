use num_traits::Zero;
use rand::Rng;
use sha2::{Digest, Sha256};

use pingpong_core::certifier::{build_etas, make_generators, EtaFamily, PairingKey, PairingTable, Tracer};
use pingpong_core::groups::{g2, seeded_rng, Element, GroupRng, GroupSpec};
use pingpong_core::rep_span::RankExperiment;
use pingpong_core::words::{Letter, Sign};
use pingpong_core::{LaurentPoly, ProjPointC, ProjPointL, Rational};

fn specs() -> [GroupSpec; 4] {
    [GroupSpec::sl(2).unwrap(), GroupSpec::sl(3).unwrap(), GroupSpec::so(2).unwrap(), GroupSpec::G2]
}

fn random_family(rng: &mut GroupRng, spec: GroupSpec, rank: usize) -> EtaFamily {
    let etas = (0..rank).map(|_| spec.random_element(rng, 5)).collect();
    EtaFamily::new(spec, etas).unwrap()
}

#[test]
fn g2_structure_data_is_pinned() {
    let digest = Sha256::digest(g2::STRUCTURE_JSON.as_bytes());
    assert_eq!(hex::encode(digest), "d57201caba22bf0aa10abf6881342ae374409d1381634fdfc47464edc00bb764");
}

#[test]
fn basis_conventions_agree() {
    // The certifier's attracting columns and the span experiment's v, v*, w*
    // must index the same weight vectors.
    for spec in specs() {
        let n = spec.dim();
        let exp = RankExperiment::new(spec, 0);
        assert_eq!((exp.v(), exp.vstar(), exp.wstar()), (0, 0, n - 1), "{spec}");
        let tau = spec.default_cocharacter();
        let k = tau.exponents();
        assert!(k.windows(2).all(|w| w[0] < w[1]), "{spec}: exponents not increasing");
        let family = EtaFamily::new(spec, vec![Element::identity(spec)]).unwrap();
        let unit = |i: usize| (0..n).map(|a| if a == i { Rational::from_integer(1.into()) } else { Rational::zero() }).collect::<Vec<_>>();
        assert_eq!(family.column(Letter::plus(1)), unit(exp.v()));
        assert_eq!(family.column(Letter::minus(1)), unit(exp.wstar()));
        assert_eq!(family.row(Letter::plus(1)), unit(exp.vstar()));
    }
}

#[test]
fn pairings_are_entries_of_eta_quotients() {
    let mut rng = seeded_rng(7);
    for k in 0..100 {
        let spec = specs()[k % 4];
        let family = random_family(&mut rng, spec, 2 + k % 2);
        let table = PairingTable::compute(&family);
        let n = spec.dim();
        let idx = |s: Sign| if s == Sign::Plus { 0 } else { n - 1 };
        let mut all_nonzero = true;
        for i in 1..=family.rank() {
            for j in 1..=family.rank() {
                for si in [Sign::Plus, Sign::Minus] {
                    for sj in [Sign::Plus, Sign::Minus] {
                        let q = &family.eta_inverses()[j - 1] * &family.etas()[i - 1];
                        let entry = &q[(idx(sj), idx(si))];
                        let key = PairingKey { i, j, sign_i: si, sign_j: sj };
                        // Self-pairings only come with matching signs.
                        if i != j || si == sj {
                            assert_eq!(table.get(key), Some(entry), "family {k}, {key}");
                            all_nonzero &= !entry.is_zero();
                        }
                    }
                }
            }
        }
        assert_eq!(table.vanishing().is_empty(), all_nonzero, "family {k}");
    }
}

#[test]
fn factored_action_matches_generator_matrices() {
    let mut rng = seeded_rng(11);
    for k in 0..100 {
        let spec = specs()[k % 4];
        let family = random_family(&mut rng, spec, 2);
        let tau = spec.default_cocharacter();
        let n = spec.dim();
        let z = ProjPointC::new((0..n).map(|a| Rational::from_integer((a as i64 + 1).into())).collect()).unwrap();
        let tracer = Tracer::new(&family, &tau, &z).unwrap();
        let gens = make_generators(&family, &tau).unwrap();
        let coords: Vec<LaurentPoly> = (0..n)
            .map(|_| LaurentPoly::from_terms((0..3).map(|d| (d, Rational::from_integer(rng.gen_range(-4i64..=4).into())))))
            .collect();
        let Ok(p) = ProjPointL::normalize(coords) else { continue };
        for l in family.letters() {
            let direct = p.apply(gens.matrix(l)).unwrap();
            assert!(tracer.apply(l, &p).proj_eq(&direct), "family {k}, letter {l}");
        }
    }
}

#[test]
fn conjugating_the_input_and_h_together_changes_nothing() {
    let mut rng = seeded_rng(13);
    for k in 0..20 {
        let spec = specs()[k % 4];
        let gammas: Vec<Element> = (0..2).map(|_| spec.random_element(&mut rng, 5)).collect();
        let h = spec.random_element(&mut rng, 4);
        let c = spec.random_element(&mut rng, 4);
        let moved: Vec<Element> = gammas.iter().map(|g| c.mul(g).mul(&c.inverse())).collect();
        let a = build_etas(&gammas, &h).unwrap();
        let b = build_etas(&moved, &c.mul(&h)).unwrap();
        assert_eq!(a.etas(), b.etas(), "trial {k}");
        assert_eq!(PairingTable::compute(&a), PairingTable::compute(&b));
    }
}
