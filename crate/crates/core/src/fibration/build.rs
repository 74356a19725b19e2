use std::collections::BTreeMap;

use super::maps::{SymplecticAffine, VARS_4, VARS_6};
use super::FibrationSpec;
use crate::error::{Error, Result};
use crate::exact_linear::{PolyForm, Rat, RatMat2};
use crate::lattice_classifier::LatticeNF;

/// `ω_λ = dα∧dx + dβ∧dy + λ dx∧dy`.
pub fn standard_form(lambda: &Rat) -> PolyForm {
    let mut w = PolyForm::zero(&VARS_4, 2).expect("four variables");
    w.add_constant(&["alpha", "x"], Rat::one()).expect("known variables");
    w.add_constant(&["beta", "y"], Rat::one()).expect("known variables");
    w.add_constant(&["x", "y"], lambda.clone()).expect("known variables");
    w
}

/// Vertices `O, O + e₁, O + e₂, O + e₁ + e₂` of the fundamental parallelogram
/// of a compact lattice; empty for the other series.
pub fn fundamental_domain(nf: &LatticeNF) -> Vec<[Rat; 2]> {
    let z = Rat::zero;
    let (e1, e2) = match nf {
        LatticeNF::T2uvwz { u, v, w, z } => ([u.clone(), v.clone()], [w.clone(), z.clone()]),
        LatticeNF::T2nyx { y, x, .. } => ([x.clone(), z()], [z(), y.clone()]),
        LatticeNF::K2 { m, delta, x, y } => ([x.clone(), z()], [y * &Rat::new(m - delta, 2), y.clone()]),
        _ => return vec![],
    };
    let far = [&e1[0] + &e2[0], &e1[1] + &e2[1]];
    vec![[z(), z()], e1, e2, far]
}

fn spec(nf: &LatticeNF, obstruction: (i64, i64), lambda: Rat, maps: Vec<(&str, SymplecticAffine)>) -> FibrationSpec {
    let mut all: BTreeMap<String, SymplecticAffine> = maps.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    all.insert("s1".into(), SymplecticAffine::fibre_translation(4, 0));
    all.insert("s2".into(), SymplecticAffine::fibre_translation(4, 1));
    FibrationSpec {
        lattice: Some(nf.clone()),
        obstruction,
        form: standard_form(&lambda),
        twisting: lambda,
        maps: all,
        domain: fundamental_domain(nf),
    }
}

fn rows(r: [[Rat; 5]; 4]) -> SymplecticAffine {
    SymplecticAffine::from_rows(r.into_iter().map(Vec::from).collect()).expect("gluing maps are invertible")
}

/// `(h, g)` gluing a Klein-bottle domain; `m₀, n₀` may be any rationals so
/// that perturbed controls can reuse the same shapes.
pub(crate) fn klein_maps(m: i64, delta: i64, x0: &Rat, y0: &Rat, m0: &Rat, n0: &Rat) -> (SymplecticAffine, SymplecticAffine) {
    let (o, i) = (Rat::zero, Rat::one);
    let shift = y0 * &Rat::new(m - delta, 2);
    let h = rows([
        [i(), Rat::int(m), o(), o(), shift.clone()],
        [o(), i(), o(), o(), y0.clone()],
        [m0 / x0, (m0 * m + n0) / x0, i(), o(), o()],
        [n0 / x0, o(), Rat::int(-m), i(), o()],
    ]);
    let g = rows([
        [i(), Rat::int(delta - m), o(), o(), shift + x0],
        [o(), Rat::int(-1), o(), o(), y0.clone()],
        [o(), o(), i(), o(), o()],
        [o(), o(), Rat::int(delta - m), Rat::int(-1), o()],
    ]);
    (h, g)
}

/// `(t, h)` gluing a `T2nyx` domain.
pub(crate) fn torus_maps(n: i64, x0: &Rat, y0: &Rat, m0: &Rat, n0: &Rat) -> (SymplecticAffine, SymplecticAffine) {
    let (o, i) = (Rat::zero, Rat::one);
    let t = rows([
        [i(), o(), o(), o(), x0.clone()],
        [o(), i(), o(), o(), o()],
        [o(), o(), i(), o(), o()],
        [o(), (m0 * n + n0) / y0, o(), i(), o()],
    ]);
    let h = rows([
        [i(), Rat::int(n), o(), o(), o()],
        [o(), i(), o(), o(), y0.clone()],
        [-(m0 / x0), o(), i(), o(), o()],
        [m0 * n / x0, o(), Rat::int(-n), i(), o()],
    ]);
    (t, h)
}

/// `(t₁, t₂)` gluing a translation-torus domain, with `γ, δ̂` solved from
/// `γ·(u, v) + δ̂·(w, z) = (m₀, n₀)`.
pub(crate) fn translation_maps(
    u: &Rat,
    v: &Rat,
    w: &Rat,
    z: &Rat,
    m0: &Rat,
    n0: &Rat,
) -> Result<(SymplecticAffine, SymplecticAffine)> {
    let cols = RatMat2::new(u.clone(), w.clone(), v.clone(), z.clone());
    let inv = cols.inverse().map_err(|_| Error::SingularLattice)?;
    let [gamma, dhat] = inv.apply(&[m0.clone(), n0.clone()]);
    let (o, i) = (Rat::zero, Rat::one);
    let t1 = rows([
        [i(), o(), o(), o(), u.clone()],
        [o(), i(), o(), o(), v.clone()],
        [-dhat.clone(), o(), i(), o(), o()],
        [o(), -dhat, o(), i(), o()],
    ]);
    let t2 = rows([
        [i(), o(), o(), o(), w.clone()],
        [o(), i(), o(), o(), z.clone()],
        [gamma.clone(), o(), i(), o(), o()],
        [o(), gamma, o(), i(), o()],
    ]);
    Ok((t1, t2))
}

/// Fibration over `T²_{n,y₀;x₀}` with obstruction `(m₀, n₀)` and form `ω_λ`.
pub fn build_torus_fibration(nf: &LatticeNF, m0: i64, n0: i64, lambda: &Rat) -> Result<FibrationSpec> {
    let LatticeNF::T2nyx { n, y, x } = nf else {
        return Err(Error::InvalidParameters(format!("{nf} is not a T2nyx lattice")));
    };
    if *n < 1 {
        return Err(Error::InvalidParameters(format!("n = {n} must be positive")));
    }
    nf.validate().map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let (t, h) = torus_maps(*n, x, y, &Rat::int(m0), &Rat::int(n0));
    Ok(spec(nf, (m0, n0), lambda.clone(), vec![("t", t), ("h", h)]))
}

/// Fibration over the translation torus `T²_{u,v;w,z}`.
pub fn build_torus_translation_fibration(nf: &LatticeNF, m0: i64, n0: i64, lambda: &Rat) -> Result<FibrationSpec> {
    let LatticeNF::T2uvwz { u, v, w, z } = nf else {
        return Err(Error::InvalidParameters(format!("{nf} is not a T2uvwz lattice")));
    };
    let (t1, t2) = translation_maps(u, v, w, z, &Rat::int(m0), &Rat::int(n0))?;
    Ok(spec(nf, (m0, n0), lambda.clone(), vec![("t1", t1), ("t2", t2)]))
}

/// Fibration over `K²_{m,y₀;δ,x₀}` with obstruction `(m₀, n₀)` and form `ω₀`.
pub fn build_klein_fibration(nf: &LatticeNF, m0: i64, n0: i64) -> Result<FibrationSpec> {
    let LatticeNF::K2 { m, delta, x, y } = nf else {
        return Err(Error::InvalidParameters(format!("{nf} is not a K2 lattice")));
    };
    nf.validate().map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let (h, g) = klein_maps(*m, *delta, x, y, &Rat::int(m0), &Rat::int(n0));
    Ok(spec(nf, (m0, n0), Rat::zero(), vec![("h", h), ("g", g)]))
}

/// The cotangent-bundle quotient over a non-compact base; its gluing maps
/// are cotangent lifts of the lattice generators.
pub fn build_noncompact(nf: &LatticeNF) -> Result<FibrationSpec> {
    let name = match nf {
        LatticeNF::R2 => None,
        LatticeNF::C2uv { .. } => Some("t"),
        LatticeNF::C2ny { .. } => Some("h"),
        LatticeNF::M2 { .. } => Some("g"),
        _ => return Err(Error::InvalidParameters(format!("{nf} has a compact base"))),
    };
    nf.validate().map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let maps = match name {
        Some(k) => vec![(k, SymplecticAffine::cotangent_lift(&nf.generators()[0]))],
        None => vec![],
    };
    Ok(spec(nf, (0, 0), Rat::zero(), maps))
}

/// Dispatches on the series of `nf`. The twisting must vanish off the torus
/// series and the obstruction must vanish over non-compact bases.
pub fn build_fibration(nf: &LatticeNF, m0: i64, n0: i64, lambda: &Rat) -> Result<FibrationSpec> {
    let torus = matches!(nf, LatticeNF::T2nyx { .. } | LatticeNF::T2uvwz { .. });
    if !torus && !lambda.is_zero() {
        return Err(Error::InvalidParameters(format!("twisting λ = {lambda} is only defined over the torus")));
    }
    match nf {
        LatticeNF::T2nyx { .. } => build_torus_fibration(nf, m0, n0, lambda),
        LatticeNF::T2uvwz { .. } => build_torus_translation_fibration(nf, m0, n0, lambda),
        LatticeNF::K2 { .. } => build_klein_fibration(nf, m0, n0),
        _ if (m0, n0) != (0, 0) => Err(Error::InvalidParameters("the obstruction over a non-compact base is 0".into())),
        _ => build_noncompact(nf),
    }
}

/// The almost-Lagrangian fibration over `T³` with form
/// `η = ω₀ + 2x dy∧dz + 2y dz∧dx + 2z dx∧dy`.
pub fn build_t3_example() -> FibrationSpec {
    let mut eta = PolyForm::zero(&VARS_6, 2).expect("six variables");
    for (p, q) in [("alpha", "x"), ("beta", "y"), ("gamma", "z")] {
        eta.add_constant(&[p, q], Rat::one()).expect("known variables");
    }
    for (v, a, b) in [("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")] {
        eta.add_linear(v, &[a, b], Rat::int(2)).expect("known variables");
    }
    // each f is a unit base translation with an integral fibre shear
    let shear = |axis: usize, entries: [(usize, usize, i64); 2]| {
        let mut rows = vec![vec![Rat::zero(); 7]; 6];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        rows[axis][6] = Rat::one();
        for (out, input, c) in entries {
            rows[out][input] = Rat::int(c);
        }
        SymplecticAffine::from_rows(rows).expect("unipotent")
    };
    let mut maps = BTreeMap::new();
    maps.insert("f1".to_string(), shear(0, [(4, 2, 1), (5, 1, -1)]));
    maps.insert("f2".to_string(), shear(1, [(3, 2, -1), (5, 0, 1)]));
    maps.insert("f3".to_string(), shear(2, [(3, 1, 1), (4, 0, -1)]));
    for i in 0..3 {
        maps.insert(format!("s{}", i + 1), SymplecticAffine::fibre_translation(6, i));
    }
    FibrationSpec { lattice: None, obstruction: (0, 0), twisting: Rat::zero(), maps, form: eta, domain: vec![] }
}
