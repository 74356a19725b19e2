use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::freeness::{check_free_bounded, Freeness, DEFAULT_WORD_LENGTH};
use super::klein_word::KleinWord;
use super::nf::{LatticeNF, Surface};
use crate::affine_group::{conjugate, primitive_extend, primitive_kernel, eigen_normalize, IntAffine2, Orientation, RealAffine2Witness};
use crate::error::{Error, Result};
use crate::exact_linear::{IntMat2, Rat};

/// Evidence that a presentation is conjugate to a normal form.
///
/// For every input generator `gᵢ`, `f·gᵢ·f⁻¹ = aᵏbˡ` where `(k, l) = words[i]`
/// and `(a, b)` are the generators of `lattice` (just `a` for one generator).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationCertificate {
    pub conjugator: RealAffine2Witness,
    pub words: Vec<KleinWord>,
    pub lattice: LatticeNF,
    pub freeness: Freeness,
}

/// `aᵏbˡ` in the given generators; the second generator may be absent only
/// when `l = 0`.
pub fn evaluate_word(gens: &[IntAffine2], w: KleinWord) -> Option<IntAffine2> {
    let a = match gens.first() {
        Some(a) => a.pow(w.k),
        None if w.k == 0 => IntAffine2::identity(),
        None => return None,
    };
    let b = match gens.get(1) {
        Some(b) => b.pow(w.l),
        None if w.l == 0 => IntAffine2::identity(),
        None => return None,
    };
    Some(a.compose(&b))
}

impl NormalizationCertificate {
    /// Checks `f·gᵢ·f⁻¹ = wordᵢ(normal-form generators)` exactly for every input.
    pub fn verify(&self, gens: &[IntAffine2]) -> bool {
        if gens.len() != self.words.len() || self.lattice.validate().is_err() {
            return false;
        }
        let nf_gens = self.lattice.generators();
        gens.iter().zip(&self.words).all(|(g, w)| {
            let Some(target) = evaluate_word(&nf_gens, *w) else { return false };
            conjugate(&self.conjugator, g) == target.to_witness()
        })
    }
}

/// Determines the quotient surface of a presentation with at most two
/// generators, screening freeness up to `max_len`.
pub fn base_surface_bounded(gens: &[IntAffine2], max_len: usize) -> Result<Surface> {
    if gens.len() > 2 {
        return Err(Error::UnsupportedPresentation(format!("{} generators; at most 2 are supported", gens.len())));
    }
    if let Some(i) = gens.iter().position(IntAffine2::is_identity) {
        return Err(Error::NotFreeAction(format!("generator {i} is the identity")));
    }
    let surface = match gens {
        [] => Surface::Plane,
        [g] => match g.orientation() {
            Orientation::Preserving => Surface::Cylinder,
            Orientation::Reversing => Surface::Mobius,
        },
        [g0, g1] => match (g0.orientation(), g1.orientation()) {
            (Orientation::Preserving, Orientation::Preserving) => {
                let comm = g0.compose(g1).compose(&g0.inverse()).compose(&g1.inverse());
                if !comm.is_identity() {
                    return Err(Error::UnsupportedPresentation("orientation-preserving generators do not commute".into()));
                }
                if g0.is_translation() && g1.is_translation() {
                    let [u, v] = g0.translation();
                    let [w, z] = g1.translation();
                    if (u * z - v * w).is_zero() {
                        return Err(Error::UnsupportedPresentation("translation vectors are linearly dependent".into()));
                    }
                }
                Surface::Torus
            }
            (Orientation::Reversing, Orientation::Reversing) => {
                return Err(Error::UnsupportedPresentation(
                    "both generators reverse orientation; give a preserving generator a and a reversing b".into(),
                ))
            }
            _ => {
                let (a, b) = if g0.orientation() == Orientation::Preserving { (g0, g1) } else { (g1, g0) };
                let rel = b.compose(a).compose(&b.inverse()).compose(a);
                if !rel.is_identity() {
                    return Err(Error::UnsupportedPresentation("generators satisfy neither ab = ba nor bab⁻¹a = e".into()));
                }
                Surface::Klein
            }
        },
        _ => unreachable!(),
    };
    match check_free_bounded(gens, max_len) {
        Freeness::FixedPoint { word, element } => {
            Err(Error::NotFreeAction(format!("word {word:?} gives {element:?}, which has a fixed point")))
        }
        _ => Ok(surface),
    }
}

pub fn base_surface(gens: &[IntAffine2]) -> Result<Surface> {
    base_surface_bounded(gens, DEFAULT_WORD_LENGTH)
}

/// Reduction state: `f·gᵢ·f⁻¹ = words[i](cur)` holds after every step.
struct State {
    cur: Vec<IntAffine2>,
    f: IntAffine2,
    words: Vec<KleinWord>,
    klein: bool,
}

impl State {
    fn conj(&mut self, h: &IntAffine2) {
        for c in &mut self.cur {
            *c = c.conjugated_by(h);
        }
        self.f = h.compose(&self.f);
    }

    fn conj_linear(&mut self, m: IntMat2) {
        self.conj(&IntAffine2::linear_only(m).expect("unimodular change of basis"));
    }

    fn mul(&self, x: KleinWord, y: KleinWord) -> KleinWord {
        if self.klein {
            x.mul(y)
        } else {
            KleinWord::new(x.k + y.k, x.l + y.l)
        }
    }

    fn pow(&self, x: KleinWord, e: i64) -> KleinWord {
        if self.klein {
            x.pow(e)
        } else {
            KleinWord::new(x.k * e, x.l * e)
        }
    }

    /// Replaces the generators by `new`, where `old_in_new[j]` writes the
    /// `j`-th old generator in the new ones.
    fn substitute(&mut self, new: Vec<IntAffine2>, old_in_new: &[KleinWord]) {
        let b_old = old_in_new.get(1).copied().unwrap_or(KleinWord::IDENTITY);
        self.words = self
            .words
            .iter()
            .map(|w| self.mul(self.pow(old_in_new[0], w.k), self.pow(b_old, w.l)))
            .collect();
        self.cur = new;
    }

    fn finish(self, lattice: LatticeNF) -> Result<NormalizationCertificate> {
        lattice.validate().map_err(|e| Error::NotFreeAction(format!("reduced parameters degenerate: {e}")))?;
        if lattice.generators() != self.cur {
            return Err(Error::UnsupportedPresentation(format!(
                "reduction ended at {:?}, which is not the normal form {lattice}",
                self.cur
            )));
        }
        Ok(NormalizationCertificate {
            conjugator: self.f.to_witness(),
            words: self.words,
            lattice,
            freeness: Freeness::Certified,
        })
    }
}

fn minus_e() -> IntMat2 {
    IntMat2::diag(-1, -1)
}

fn triangularizing_basis(v: (i64, i64)) -> IntMat2 {
    primitive_extend(v).expect("kernel vectors are primitive").inverse().expect("unimodular")
}

fn unit_upper(m: IntMat2, lower_right: i64) -> Option<i64> {
    let [[a, b], [c, d]] = m.0;
    (a == 1 && c == 0 && d == lower_right).then_some(b)
}

fn minus_identity(m: IntMat2) -> IntMat2 {
    IntMat2::new(m.0[0][0] - 1, m.0[0][1], m.0[1][0], m.0[1][1] - 1)
}

fn normalize_klein(gens: &[IntAffine2]) -> Result<NormalizationCertificate> {
    let ia = if gens[0].orientation() == Orientation::Preserving { 0 } else { 1 };
    let mut words = vec![KleinWord::IDENTITY; 2];
    words[ia] = KleinWord::A;
    words[1 - ia] = KleinWord::B;
    let mut st = State {
        cur: vec![gens[ia].clone(), gens[1 - ia].clone()],
        f: IntAffine2::identity(),
        words,
        klein: true,
    };
    let not_free = |why: &str| Error::NotFreeAction(why.to_string());

    // common eigenvector with eigenvalue 1 becomes e₁
    let (a_lin, b_lin) = (st.cur[0].linear(), st.cur[1].linear());
    let source = if a_lin.is_identity() { b_lin } else { a_lin };
    let v = primitive_kernel(minus_identity(source)).ok_or_else(|| not_free("no common eigenvector with eigenvalue 1"))?;
    st.conj_linear(triangularizing_basis(v));
    let n = unit_upper(st.cur[0].linear(), 1).ok_or_else(|| not_free("a is not unipotent after triangularisation"))?;
    let c = unit_upper(st.cur[1].linear(), -1).ok_or_else(|| not_free("b does not fix the eigenline of a"))?;

    if n.rem_euclid(2) == 1 && c.rem_euclid(2) == 1 {
        // b ← b·a⁻¹, so the old b is b'·a'
        let new_b = st.cur[1].compose(&st.cur[0].inverse());
        let new = vec![st.cur[0].clone(), new_b];
        st.substitute(new, &[KleinWord::A, KleinWord::B.mul(KleinWord::A)]);
    }
    if n < 0 {
        st.conj_linear(IntMat2::diag(-1, 1));
    }
    let c = st.cur[1].linear().0[0][1];
    st.conj_linear(IntMat2::new(1, c.div_euclid(2), 0, 1));

    let b1 = st.cur[1].translation()[1].clone();
    st.conj(&IntAffine2::translation_by(Rat::zero(), -(b1 / 2)));
    if st.cur[0].translation()[1].is_negative() {
        st.conj_linear(minus_e());
    }
    if st.cur[1].translation()[0].is_negative() {
        let new = vec![st.cur[0].clone(), st.cur[1].inverse()];
        st.substitute(new, &[KleinWord::A, KleinWord::B.inverse()]);
    }

    let m = st.cur[0].linear().0[0][1];
    let delta = st.cur[1].linear().0[0][1];
    let y = st.cur[0].translation()[1].clone();
    let x = st.cur[1].translation()[0].clone();
    st.finish(LatticeNF::K2 { m, delta, x, y })
}

fn normalize_torus(gens: &[IntAffine2]) -> Result<NormalizationCertificate> {
    let mut st = State {
        cur: gens.to_vec(),
        f: IntAffine2::identity(),
        words: vec![KleinWord::A, KleinWord::B],
        klein: false,
    };
    if gens.iter().all(IntAffine2::is_translation) {
        let [u, v] = gens[0].translation().clone();
        let [w, z] = gens[1].translation().clone();
        return st.finish(LatticeNF::T2uvwz { u, v, w, z });
    }
    let not_free = |why: &str| Error::NotFreeAction(why.to_string());
    let source = if gens[0].is_translation() { gens[1].linear() } else { gens[0].linear() };
    let v = primitive_kernel(minus_identity(source)).ok_or_else(|| not_free("no eigenvalue 1"))?;
    st.conj_linear(triangularizing_basis(v));
    let n1 = unit_upper(st.cur[0].linear(), 1).ok_or_else(|| not_free("generator is not unipotent"))?;
    let n2 = unit_upper(st.cur[1].linear(), 1).ok_or_else(|| not_free("generator is not unipotent"))?;

    // h = aᵖbᑫ carries gcd(n1, n2), t = a^{−n2/g} b^{n1/g} is a translation
    let ext = n1.extended_gcd(&n2);
    let (mut g, mut p, mut q) = (ext.gcd, ext.x, ext.y);
    if g < 0 {
        (g, p, q) = (-g, -p, -q);
    }
    let (r, s) = (-n2 / g, n1 / g);
    let word = |k: i64, l: i64, st: &State| st.cur[0].pow(k).compose(&st.cur[1].pow(l));
    let new = vec![word(p, q, &st), word(r, s, &st)];
    // inverse of [[p, q], [r, s]] (determinant 1)
    st.substitute(new, &[KleinWord::new(s, -q), KleinWord::new(-r, p)]);

    let n = st.cur[0].linear().0[0][1];
    let h0 = st.cur[0].translation()[0].clone();
    st.conj(&IntAffine2::translation_by(Rat::zero(), h0 / n));
    if st.cur[0].translation()[1].is_negative() {
        st.conj_linear(minus_e());
    }
    if st.cur[1].translation()[0].is_negative() {
        let new = vec![st.cur[0].clone(), st.cur[1].inverse()];
        st.substitute(new, &[KleinWord::A, KleinWord::new(0, -1)]);
    }
    let y = st.cur[0].translation()[1].clone();
    let x = st.cur[1].translation()[0].clone();
    st.finish(LatticeNF::T2nyx { n, y, x })
}

fn normalize_single(g: &IntAffine2) -> Result<NormalizationCertificate> {
    let mut st = State { cur: vec![g.clone()], f: IntAffine2::identity(), words: vec![KleinWord::A], klein: false };
    if g.is_translation() {
        let [u, v] = g.translation().clone();
        return st.finish(LatticeNF::C2uv { u, v });
    }
    let en = eigen_normalize(g).map_err(|e| match e {
        Error::NoUnitEigenvalue => Error::NotFreeAction("linear part has no eigenvalue 1".into()),
        other => other,
    })?;
    st.conj(&en.conjugator);
    let [t0, t1] = en.normal.translation().clone();
    let top = en.normal.linear().0[0][1];
    let lattice = match g.orientation() {
        Orientation::Preserving => LatticeNF::C2ny { n: top, y: t1 },
        Orientation::Reversing => LatticeNF::M2 { delta: top, x: t0 },
    };
    st.finish(lattice)
}

/// Reduces a presentation to its normal form with a certificate.
pub fn normalize_bounded(gens: &[IntAffine2], max_len: usize) -> Result<NormalizationCertificate> {
    let surface = base_surface_bounded(gens, max_len)?;
    match surface {
        Surface::Plane => Ok(NormalizationCertificate {
            conjugator: RealAffine2Witness::identity(),
            words: vec![],
            lattice: LatticeNF::R2,
            freeness: Freeness::Certified,
        }),
        Surface::Cylinder | Surface::Mobius => normalize_single(&gens[0]),
        Surface::Torus => normalize_torus(gens),
        Surface::Klein => normalize_klein(gens),
    }
}

pub fn normalize(gens: &[IntAffine2]) -> Result<NormalizationCertificate> {
    normalize_bounded(gens, DEFAULT_WORD_LENGTH)
}
