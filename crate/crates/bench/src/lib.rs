//! Fixed inputs shared by the benchmarks.

use lagfib::fibration::build_fibration;
use lagfib::{FibrationSpec, IntAffine2, LatticeNF, Rat};

/// One normal form per compact series, with non-trivial parameters.
pub fn compact_lattices() -> Vec<(&'static str, LatticeNF)> {
    vec![
        ("K2", LatticeNF::k2(4, 1, Rat::new(1, 2), Rat::new(7, 3)).unwrap()),
        ("T2nyx", LatticeNF::t2nyx(3, Rat::new(5, 2), Rat::int(2)).unwrap()),
        ("T2uvwz", LatticeNF::t2uvwz(Rat::int(2), Rat::new(1, 2), Rat::int(-1), Rat::int(3)).unwrap()),
    ]
}

/// The generators of `nf` after a change of basis and an integral affine
/// conjugation, so normalization has real work to do.
pub fn scrambled(nf: &LatticeNF) -> Vec<IntAffine2> {
    let f = IntAffine2::from_parts(lagfib::IntMat2::new(2, 1, 1, 1), Rat::new(1, 3), Rat::new(-2, 5));
    let g = nf.generators();
    let subst = match nf {
        LatticeNF::K2 { .. } => vec![g[0].inverse(), g[0].pow(2).compose(&g[1])],
        _ => vec![g[0].compose(&g[1]), g[0].pow(2).compose(&g[1].pow(3))],
    };
    subst.iter().map(|h| h.conjugated_by(&f)).collect()
}

pub fn specs() -> Vec<(&'static str, FibrationSpec)> {
    compact_lattices()
        .into_iter()
        .map(|(name, nf)| {
            let lambda = if matches!(nf, LatticeNF::K2 { .. }) { Rat::zero() } else { Rat::new(1, 3) };
            (name, build_fibration(&nf, 1, -1, &lambda).unwrap())
        })
        .collect()
}
