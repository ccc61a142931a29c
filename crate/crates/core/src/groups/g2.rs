//! The split group `G_2` in its 7-dimensional representation.
//!
//! The data file fixes a weight basis `e_0, …, e_6`, an alternating integer
//! 3-form whose stabilizer is `G_2`, and one integral nilpotent matrix per
//! root (positive roots first). The invariant quadratic form is the
//! anti-diagonal Gram matrix shared with `SO_{2k+1}`.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::matrix::Matrix;
use crate::scalar::Ring;
use crate::MatrixQ;
use crate::Rational;

pub const DIM: usize = 7;

/// Raw contents of `data/g2_structure.json`.
pub const STRUCTURE_JSON: &str = include_str!("../../data/g2_structure.json");

#[derive(Deserialize)]
struct RawData {
    format: String,
    basis_weights: Vec<[i64; 2]>,
    trilinear: Vec<[i64; 4]>,
    roots: Vec<RawRoot>,
}

#[derive(Deserialize)]
struct RawRoot {
    weight: [i64; 2],
    entries: Vec<[i64; 3]>,
}

pub struct G2Data {
    /// Torus weight of each basis vector, in coordinates where a cocharacter
    /// `(c_1, c_2)` acts on `e_i` by `t^{w_i · c}`.
    pub basis_weights: Vec<[i64; 2]>,
    /// `form[i][j][k]`, fully antisymmetric.
    pub form: [[[i64; DIM]; DIM]; DIM],
    /// Nonzero entries of `form` with `i < j < k`.
    pub form_support: Vec<([usize; 3], i64)>,
    pub roots: Vec<(Vec<i64>, MatrixQ)>,
}

pub fn data() -> &'static G2Data {
    static DATA: OnceLock<G2Data> = OnceLock::new();
    DATA.get_or_init(|| {
        let raw: RawData = serde_json::from_str(STRUCTURE_JSON).expect("bundled G2 data parses");
        assert_eq!(raw.format, "split-g2-7/1");
        let mut form = [[[0i64; DIM]; DIM]; DIM];
        let mut form_support = Vec::new();
        for [i, j, k, v] in raw.trilinear {
            let idx = [i as usize, j as usize, k as usize];
            form_support.push((idx, v));
            for (p, sign) in PERMUTATIONS {
                form[idx[p[0]]][idx[p[1]]][idx[p[2]]] = sign * v;
            }
        }
        let roots = raw
            .roots
            .into_iter()
            .map(|r| {
                let mut m = MatrixQ::zero(DIM);
                for [i, j, v] in r.entries {
                    m[(i as usize, j as usize)] = Rational::from_integer(v.into());
                }
                (r.weight.to_vec(), m)
            })
            .collect();
        G2Data { basis_weights: raw.basis_weights, form, form_support, roots }
    })
}

const PERMUTATIONS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

pub(crate) fn small_int<R: Ring>(v: i64) -> R {
    let unit = if v < 0 { -R::one() } else { R::one() };
    (0..v.unsigned_abs()).fold(R::zero(), |acc, _| acc.add_ref(&unit))
}

/// First index triple `(i, j, k)` where `φ(Me_i, Me_j, Me_k) ≠ φ(e_i, e_j, e_k)`.
pub fn form_defect<R: Ring>(m: &Matrix<R>) -> Option<[usize; 3]> {
    let d = data();
    let n = DIM;
    // A[a][b][k] = Σ_c φ_abc M_ck
    let mut a_t = vec![R::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let f = d.form[a][b][c];
                if f == 0 {
                    continue;
                }
                let f: R = small_int(f);
                for k in 0..n {
                    let slot = &mut a_t[(a * n + b) * n + k];
                    *slot = slot.add_ref(&f.mul_ref(&m[(c, k)]));
                }
            }
        }
    }
    // B[a][j][k] = Σ_b A[a][b][k] M_bj
    let mut b_t = vec![R::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for j in 0..n {
                let mbj = &m[(b, j)];
                if mbj.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let x = a_t[(a * n + b) * n + k].mul_ref(mbj);
                    let slot = &mut b_t[(a * n + j) * n + k];
                    *slot = slot.add_ref(&x);
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = (0..n).fold(R::zero(), |acc, a| {
                    acc.add_ref(&b_t[(a * n + j) * n + k].mul_ref(&m[(a, i)]))
                });
                if v != small_int(d.form[i][j][k]) {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}
