use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matrix::{IntMat2, RatMat2};
use super::rat::Rat;
use crate::error::{Error, Result};

/// Smith decomposition `M = U·S·V` of a 2×2 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: IntMat2,
    pub s: IntMat2,
    pub v: IntMat2,
}

impl SnfResult {
    pub fn d1(&self) -> i64 {
        self.s.0[0][0]
    }

    pub fn d2(&self) -> i64 {
        self.s.0[1][1]
    }

    pub fn product(&self) -> IntMat2 {
        self.u * self.s * self.v
    }
}

/// Working state with `l·M·r = a` maintained after every step.
struct Reducer {
    a: [[i64; 2]; 2],
    l: [[i64; 2]; 2],
    r: [[i64; 2]; 2],
}

impl Reducer {
    fn swap_rows(&mut self) {
        self.a.swap(0, 1);
        self.l.swap(0, 1);
    }

    fn swap_cols(&mut self) {
        for m in [&mut self.a, &mut self.r] {
            m[0].swap(0, 1);
            m[1].swap(0, 1);
        }
    }

    /// row `dst` += q · row `src`
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        for m in [&mut self.a, &mut self.l] {
            for j in 0..2 {
                m[dst][j] += q * m[src][j];
            }
        }
    }

    /// col `dst` += q · col `src`
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        for m in [&mut self.a, &mut self.r] {
            for row in m.iter_mut() {
                row[dst] += q * row[src];
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for m in [&mut self.a, &mut self.r] {
            for row in m.iter_mut() {
                row[j] = -row[j];
            }
        }
    }
}

/// Smith normal form with unimodular witnesses.
///
/// The diagonal is nonnegative with `d1 | d2`; any determinant sign is carried
/// by `V`.
pub fn snf(m: &IntMat2) -> SnfResult {
    let mut st = Reducer { a: m.0, l: IntMat2::IDENTITY.0, r: IntMat2::IDENTITY.0 };
    loop {
        let pivot = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .filter(|&(i, j)| st.a[i][j] != 0)
            .min_by_key(|&(i, j)| st.a[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        if pi == 1 {
            st.swap_rows();
        }
        if pj == 1 {
            st.swap_cols();
        }
        let p = st.a[0][0];
        st.add_row(1, 0, -(st.a[1][0] / p));
        st.add_col(1, 0, -(st.a[0][1] / p));
        if st.a[1][0] != 0 || st.a[0][1] != 0 {
            continue;
        }
        if st.a[1][1] % p != 0 {
            st.add_row(0, 1, 1);
            continue;
        }
        break;
    }
    for j in 0..2 {
        if st.a[j][j] < 0 {
            st.negate_col(j);
        }
    }
    let l = IntMat2(st.l);
    let r = IntMat2(st.r);
    SnfResult {
        u: l.inverse().expect("row operations are unimodular"),
        s: IntMat2(st.a),
        v: r.inverse().expect("column operations are unimodular"),
    }
}

/// Rational Smith form `C·M·D = diag(d1, d2)` of an invertible rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSnf {
    pub c: IntMat2,
    pub diag: [Rat; 2],
    pub d: IntMat2,
}

/// Clears denominators by their lcm `q`, takes the integer Smith form of `q·M`
/// and divides back by `q`. The resulting `d2/d1` is a positive integer.
pub fn rational_snf(m: &RatMat2) -> Result<RationalSnf> {
    if m.det().is_zero() {
        return Err(Error::SingularInput);
    }
    let q = m.0.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut int = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let scaled = m.0[i][j].numer() * (&q / m.0[i][j].denom());
            int[i][j] = scaled.to_i64().ok_or(Error::Overflow("rational_snf"))?;
        }
    }
    let res = snf(&IntMat2(int));
    let q = Rat::from(q);
    Ok(RationalSnf {
        c: res.u.inverse().expect("unimodular"),
        diag: [Rat::int(res.d1()) / &q, Rat::int(res.d2()) / &q],
        d: res.v.inverse().expect("unimodular"),
    })
}
