use serde::{Deserialize, Serialize};

use super::build::build_fibration;
use super::maps::SymplecticAffine;
use super::verify::generator_names;
use super::FibrationSpec;
use crate::cohomology::{h2, twisting_canonical, twisting_moduli};
use crate::error::{Error, Result};
use crate::exact_linear::Rat;
use crate::lattice_classifier::{normalize, LatticeNF};

/// Complete invariant of a fibration: base lattice, obstruction class and
/// twisting class (absent when the twisting moduli space is a point).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassificationTriple {
    pub lattice: LatticeNF,
    pub obstruction: (i64, i64),
    pub twisting: Option<Rat>,
}

fn unrecognized(detail: impl Into<String>) -> Error {
    Error::UnrecognizedShape(detail.into())
}

fn integer(v: Rat, what: &str) -> Result<i64> {
    v.to_i64().filter(|_| v.is_integer()).ok_or_else(|| unrecognized(format!("{what} = {v} is not an integer")))
}

/// Reads `(m₀, n₀)` off the coefficient slots of the gluing maps.
fn extract_obstruction(nf: &LatticeNF, maps: &[&SymplecticAffine]) -> Result<(i64, i64)> {
    match nf {
        LatticeNF::K2 { x, .. } => {
            let h = maps[0];
            Ok((integer(h.coef(2, 0) * x, "m₀")?, integer(h.coef(3, 0) * x, "n₀")?))
        }
        LatticeNF::T2nyx { n, y, x } => {
            let (h, t) = (maps[0], maps[1]);
            let m0 = integer(-(h.coef(2, 0) * x), "m₀")?;
            let n0 = integer(t.coef(3, 1) * y - Rat::int(n * m0), "n₀")?;
            Ok((m0, n0))
        }
        LatticeNF::T2uvwz { u, v, w, z } => {
            let (t1, t2) = (maps[0], maps[1]);
            let gamma = t2.coef(2, 0).clone();
            let dhat = -t1.coef(2, 0).clone();
            let m0 = integer(&gamma * u + &dhat * w, "m₀")?;
            let n0 = integer(&gamma * v + &dhat * z, "n₀")?;
            Ok((m0, n0))
        }
        _ => Ok((0, 0)),
    }
}

/// The triple of a fibration record whose gluing maps have one of the built shapes.
///
/// The obstruction is read from the coefficient slots, the record is rebuilt
/// from the extracted parameters and compared exactly; any other gluing data
/// is rejected.
pub fn classify(spec: &FibrationSpec) -> Result<ClassificationTriple> {
    let nf = spec.lattice.as_ref().ok_or_else(|| unrecognized("no base lattice"))?;
    if spec.dimension() != 4 {
        return Err(unrecognized(format!("total space has dimension {}", spec.dimension())));
    }
    let names = generator_names(Some(nf));
    let maps = names
        .iter()
        .map(|k| spec.map(k).ok_or_else(|| unrecognized(format!("missing map {k}"))))
        .collect::<Result<Vec<_>>>()?;
    let base = maps
        .iter()
        .zip(names)
        .map(|(m, k)| m.base_action().ok_or_else(|| unrecognized(format!("{k} has no base action"))))
        .collect::<Result<Vec<_>>>()?;
    let found = normalize(&base)?.lattice;
    if &found != nf {
        return Err(unrecognized(format!("base action normalizes to {found}, not {nf}")));
    }
    let (m0, n0) = extract_obstruction(nf, &maps)?;
    let lambda = spec.form.coefficient(&["x", "y"])?.constant;
    let rebuilt = build_fibration(nf, m0, n0, &lambda).map_err(|e| unrecognized(e.to_string()))?;
    if rebuilt.maps != spec.maps || rebuilt.form != spec.form {
        return Err(unrecognized("gluing maps differ from the family with the extracted parameters"));
    }
    let moduli = twisting_moduli(nf);
    let twisting = match &moduli.area {
        Some(area) => Some(twisting_canonical(&(&lambda * area), &moduli)?),
        None => None,
    };
    Ok(ClassificationTriple { lattice: found, obstruction: h2(nf).reduce((m0, n0)), twisting })
}
