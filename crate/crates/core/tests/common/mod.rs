#![allow(dead_code)]

use lagfib::lattice_classifier::{normalize, LatticeNF};
use lagfib::{IntAffine2, IntMat2, Rat};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn positive_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(rng.gen_range(1..=9), rng.gen_range(1..=5))
}

pub fn any_rat<R: Rng>(rng: &mut R, bound: i64) -> Rat {
    Rat::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

/// Unimodular matrix with entries in `[-bound, bound]`, by rejection.
pub fn unimodular<R: Rng>(rng: &mut R, bound: i64) -> IntMat2 {
    loop {
        let m = IntMat2::new(
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
        );
        if m.is_unimodular() {
            return m;
        }
    }
}

pub fn affine<R: Rng>(rng: &mut R, bound: i64) -> IntAffine2 {
    IntAffine2::from_parts(unimodular(rng, bound), any_rat(rng, bound), any_rat(rng, bound))
}

/// A random normal form from every series.
pub fn random_nf<R: Rng>(rng: &mut R) -> LatticeNF {
    loop {
        let nf = match rng.gen_range(0..7) {
            0 => LatticeNF::R2,
            1 => LatticeNF::C2uv { u: any_rat(rng, 5), v: any_rat(rng, 5) },
            2 => LatticeNF::C2ny { n: rng.gen_range(1..=6), y: positive_rat(rng) },
            3 => LatticeNF::M2 { delta: rng.gen_range(0..=1), x: positive_rat(rng) },
            4 => LatticeNF::T2uvwz { u: any_rat(rng, 5), v: any_rat(rng, 5), w: any_rat(rng, 5), z: any_rat(rng, 5) },
            5 => LatticeNF::T2nyx { n: rng.gen_range(1..=6), y: positive_rat(rng), x: positive_rat(rng) },
            _ => {
                let delta = rng.gen_range(0..=1);
                let m = rng.gen_range(0..=4) * (1 + delta);
                LatticeNF::K2 { m, delta, x: positive_rat(rng), y: positive_rat(rng) }
            }
        };
        if nf.validate().is_ok() {
            return nf;
        }
    }
}

/// A different generating set of the same group: `(a^{±1}, aᵏb^{±1})` for
/// the Klein bottle, a `GL2(Z)` change of basis for tori, `g^{±1}` for a
/// single generator.
pub fn substitute<R: Rng>(nf: &LatticeNF, rng: &mut R) -> Vec<IntAffine2> {
    let g = nf.generators();
    let sign = |rng: &mut R| *[-1i64, 1].choose(rng).unwrap();
    match (nf, g.len()) {
        (LatticeNF::K2 { .. }, _) => {
            let (e1, e2, k) = (sign(rng), sign(rng), rng.gen_range(-4..=4));
            vec![g[0].pow(e1), g[0].pow(k).compose(&g[1].pow(e2))]
        }
        (_, 2) => {
            let [[p, q], [r, s]] = unimodular(rng, 3).0;
            vec![g[0].pow(p).compose(&g[1].pow(q)), g[0].pow(r).compose(&g[1].pow(s))]
        }
        (_, 1) => vec![g[0].pow(sign(rng))],
        _ => vec![],
    }
}

/// Substitutes generators, then conjugates by a random integral affine map.
pub fn scramble<R: Rng>(nf: &LatticeNF, rng: &mut R) -> Vec<IntAffine2> {
    let f = affine(rng, 5);
    substitute(nf, rng).iter().map(|g| g.conjugated_by(&f)).collect()
}

/// The normal form a presentation is expected to reach; translation series
/// are compared through their canonical representatives.
pub fn comparable(nf: &LatticeNF) -> LatticeNF {
    nf.canonical()
}

pub fn roundtrip_ok(nf: &LatticeNF, gens: &[IntAffine2]) -> Result<(), String> {
    let cert = normalize(gens).map_err(|e| format!("{nf}: {e}"))?;
    if comparable(&cert.lattice) != comparable(nf) {
        return Err(format!("{nf} came back as {}", cert.lattice));
    }
    if !cert.verify(gens) {
        return Err(format!("{nf}: certificate does not verify"));
    }
    Ok(())
}

pub fn half_one_two() -> [Rat; 3] {
    [Rat::new(1, 2), Rat::one(), Rat::int(2)]
}
