use serde::{Deserialize, Serialize};

use crate::affine_group::{has_fixed_point, IntAffine2};
use crate::exact_linear::Rat;

pub const DEFAULT_WORD_LENGTH: usize = 6;

/// Outcome of the freeness screen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Freeness {
    /// Guaranteed free: the generators are a normal form from the classification.
    Certified,
    /// No non-identity element of word length at most `length` has a fixed point.
    FreeUpToLength { length: usize, elements_checked: usize },
    /// A word (generator index, ±1 letters) whose element fixes a point.
    FixedPoint { word: Vec<(usize, i64)>, element: IntAffine2 },
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        !matches!(self, Freeness::FixedPoint { .. })
    }
}

/// Calls `visit` with every freely reduced word of length `1..=max_len` over
/// the generators and their inverses, together with its element.
pub fn for_each_word<F>(gens: &[IntAffine2], max_len: usize, mut visit: F)
where
    F: FnMut(&[(usize, i64)], &IntAffine2) -> bool,
{
    let letters: Vec<(usize, i64, IntAffine2)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(i, 1, g.clone()), (i, -1, g.inverse())])
        .collect();
    let mut frontier: Vec<(Vec<(usize, i64)>, IntAffine2)> = vec![(vec![], IntAffine2::identity())];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, elem) in &frontier {
            for (i, s, g) in &letters {
                if word.last() == Some(&(*i, -*s)) {
                    continue;
                }
                let mut w = word.clone();
                w.push((*i, *s));
                let e = elem.compose(g);
                if !visit(&w, &e) {
                    return;
                }
                next.push((w, e));
            }
        }
        frontier = next;
    }
}

/// Integral affine element `(A, b)` with `b` scaled to integers.
#[derive(Clone, Copy)]
struct Scaled {
    a: [[i64; 2]; 2],
    b: [i64; 2],
}

impl Scaled {
    const IDENTITY: Scaled = Scaled { a: [[1, 0], [0, 1]], b: [0, 0] };

    fn compose(&self, o: &Scaled) -> Option<Scaled> {
        let mut a = [[0i64; 2]; 2];
        let mut b = self.b;
        for i in 0..2 {
            for j in 0..2 {
                a[i][j] = self.a[i][0].checked_mul(o.a[0][j])?.checked_add(self.a[i][1].checked_mul(o.a[1][j])?)?;
            }
            b[i] = b[i].checked_add(self.a[i][0].checked_mul(o.b[0])?)?.checked_add(self.a[i][1].checked_mul(o.b[1])?)?;
        }
        Some(Scaled { a, b })
    }

    fn is_identity(&self) -> bool {
        self.a == [[1, 0], [0, 1]] && self.b == [0, 0]
    }

    /// Same case analysis as [`has_fixed_point`].
    fn has_fixed_point(&self) -> Option<bool> {
        let [[a, b], [c, d]] = self.a;
        let (a, d) = (a - 1, d - 1);
        let [r0, r1] = [-self.b[0], -self.b[1]];
        if a.checked_mul(d)? != b.checked_mul(c)? {
            return Some(true);
        }
        if a == 0 && b == 0 && c == 0 && d == 0 {
            return Some(r0 == 0 && r1 == 0);
        }
        Some(r1.checked_mul(a)? == r0.checked_mul(c)? && r1.checked_mul(b)? == r0.checked_mul(d)?)
    }
}

/// Conjugates by `p ↦ D·p` with `D` the common denominator of all
/// translations; fixed points correspond under this conjugation.
fn scaled(gens: &[IntAffine2]) -> Option<Vec<Scaled>> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut den = num_bigint::BigInt::from(1);
    for g in gens {
        for t in g.translation() {
            den = den.lcm(t.denom());
        }
    }
    gens.iter()
        .map(|g| {
            let [[a, b], [c, d]] = g.linear().0;
            let t = g.translation();
            let scale = |r: &Rat| (r.numer() * (&den / r.denom())).to_i64();
            Some(Scaled { a: [[a, b], [c, d]], b: [scale(&t[0])?, scale(&t[1])?] })
        })
        .collect()
}

enum Screen {
    Free(usize),
    Fixed(Vec<(usize, i64)>),
    Overflow,
}

fn screen_scaled(gens: &[Scaled], max_len: usize) -> Screen {
    let inverse = |g: &Scaled| -> Option<Scaled> {
        let [[a, b], [c, d]] = g.a;
        let det = a * d - b * c;
        let inv = [[d * det, -b * det], [-c * det, a * det]];
        let ib = [
            -(inv[0][0].checked_mul(g.b[0])?.checked_add(inv[0][1].checked_mul(g.b[1])?)?),
            -(inv[1][0].checked_mul(g.b[0])?.checked_add(inv[1][1].checked_mul(g.b[1])?)?),
        ];
        Some(Scaled { a: inv, b: ib })
    };
    let mut letters = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let Some(inv) = inverse(g) else { return Screen::Overflow };
        letters.push((i, 1i64, *g));
        letters.push((i, -1i64, inv));
    }
    // iterative deepening, so a reported word is as short as possible
    let mut checked = 0;
    for depth in 1..=max_len {
        let mut word = Vec::with_capacity(depth);
        match walk(&letters, depth, &Scaled::IDENTITY, &mut word, &mut checked) {
            Some(true) => return Screen::Fixed(word),
            Some(false) => {}
            None => return Screen::Overflow,
        }
    }
    Screen::Free(checked)
}

/// Depth-first over reduced words extending `word` to exactly `remaining`
/// more letters; `Some(true)` leaves the offending word in `word`.
fn walk(
    letters: &[(usize, i64, Scaled)],
    remaining: usize,
    elem: &Scaled,
    word: &mut Vec<(usize, i64)>,
    checked: &mut usize,
) -> Option<bool> {
    for (i, s, g) in letters {
        if word.last() == Some(&(*i, -*s)) {
            continue;
        }
        let e = elem.compose(g)?;
        word.push((*i, *s));
        if remaining == 1 {
            if !e.is_identity() {
                *checked += 1;
                if e.has_fixed_point()? {
                    return Some(true);
                }
            }
        } else if walk(letters, remaining - 1, &e, word, checked)? {
            return Some(true);
        }
        word.pop();
    }
    Some(false)
}

fn evaluate(gens: &[IntAffine2], word: &[(usize, i64)]) -> IntAffine2 {
    word.iter().fold(IntAffine2::identity(), |acc, &(i, s)| acc.compose(&gens[i].pow(s)))
}

/// Screens every non-identity element of word length at most `max_len` for
/// fixed points.
pub fn check_free_bounded(gens: &[IntAffine2], max_len: usize) -> Freeness {
    if let Some(sc) = scaled(gens) {
        match screen_scaled(&sc, max_len) {
            Screen::Free(checked) => return Freeness::FreeUpToLength { length: max_len, elements_checked: checked },
            Screen::Fixed(word) => {
                let element = evaluate(gens, &word);
                return Freeness::FixedPoint { word, element };
            }
            Screen::Overflow => {}
        }
    }
    check_free_exact(gens, max_len)
}

fn check_free_exact(gens: &[IntAffine2], max_len: usize) -> Freeness {
    let mut checked = 0;
    let mut witness = None;
    for_each_word(gens, max_len, |w, e| {
        if e.is_identity() {
            return true;
        }
        checked += 1;
        if has_fixed_point(e) {
            witness = Some((w.to_vec(), e.clone()));
            return false;
        }
        true
    });
    match witness {
        Some((word, element)) => Freeness::FixedPoint { word, element },
        None => Freeness::FreeUpToLength { length: max_len, elements_checked: checked },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::{IntMat2, Rat};
    use crate::lattice_classifier::LatticeNF;

    fn grid() -> Vec<LatticeNF> {
        let vals = [Rat::new(1, 2), Rat::one(), Rat::int(2)];
        let mut out = vec![LatticeNF::R2];
        for x in &vals {
            for y in &vals {
                out.push(LatticeNF::C2uv { u: x.clone(), v: y.clone() });
                out.push(LatticeNF::T2uvwz { u: x.clone(), v: Rat::zero(), w: Rat::one(), z: y.clone() });
                for n in 1..=3 {
                    out.push(LatticeNF::C2ny { n, y: y.clone() });
                    out.push(LatticeNF::T2nyx { n, y: y.clone(), x: x.clone() });
                }
                for delta in 0..=1 {
                    out.push(LatticeNF::M2 { delta, x: x.clone() });
                    for m in 0..=4 {
                        if let Ok(nf) = LatticeNF::k2(m, delta, x.clone(), y.clone()) {
                            out.push(nf);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn normal_forms_act_freely_and_obey_trace_law() {
        for nf in grid() {
            let gens = nf.generators();
            assert!(check_free_bounded(&gens, DEFAULT_WORD_LENGTH).is_free(), "{nf}");
            for_each_word(&gens, DEFAULT_WORD_LENGTH, |_, e| {
                let a = e.linear();
                assert_eq!(a.trace(), 1 + a.det(), "{nf}: {e:?}");
                true
            });
        }
    }

    #[test]
    fn detects_fixed_points() {
        let rot = IntAffine2::from_parts(IntMat2::new(0, -1, 1, 0), Rat::zero(), Rat::zero());
        assert!(!check_free_bounded(&[rot], 3).is_free());
        // g² is a translation; g·t fixes a line when the shifts cancel
        let g = IntAffine2::from_parts(IntMat2::new(1, 0, 0, -1), Rat::one(), Rat::zero());
        let t = IntAffine2::translation_by(Rat::int(-1), Rat::zero());
        match check_free_bounded(&[g, t], 2) {
            Freeness::FixedPoint { word, .. } => assert_eq!(word.len(), 2),
            other => panic!("expected a fixed point, got {other:?}"),
        }
    }

    #[test]
    fn integer_screen_agrees_with_exact_screen() {
        for nf in grid() {
            let gens = nf.generators();
            assert_eq!(check_free_bounded(&gens, 4), check_free_exact(&gens, 4), "{nf}");
        }
        let g = IntAffine2::from_parts(IntMat2::new(1, 0, 0, -1), Rat::new(1, 3), Rat::zero());
        let t = IntAffine2::translation_by(Rat::new(-1, 3), Rat::new(1, 2));
        let t2 = IntAffine2::translation_by(Rat::new(-1, 3), Rat::zero());
        for pair in [[g.clone(), t], [g, t2]] {
            assert_eq!(check_free_bounded(&pair, 3), check_free_exact(&pair, 3));
        }
    }
}
