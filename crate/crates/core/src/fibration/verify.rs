use serde::{Deserialize, Serialize};

use super::build::{klein_maps, torus_maps, translation_maps};
use super::maps::SymplecticAffine;
use super::FibrationSpec;
use crate::error::{Error, Result};
use crate::exact_linear::{Rat, RatMatrix};
use crate::lattice_classifier::{normalize, LatticeNF};

pub const CHECK_FIBRE_PRESERVING: &str = "fibre_preserving";
pub const CHECK_SYMPLECTIC: &str = "symplectic";
pub const CHECK_BASE_LATTICE: &str = "base_lattice";
pub const CHECK_RELATION: &str = "relation";
pub const CHECK_FIBRE_LATTICE: &str = "fibre_lattice";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

/// One entry per check, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn passed(&self, check: &str) -> bool {
        self.get(check).is_some_and(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect()
    }
}

/// Names of the gluing maps in generator order for the given lattice.
pub(crate) fn generator_names(lattice: Option<&LatticeNF>) -> &'static [&'static str] {
    match lattice {
        None => &["f1", "f2", "f3"],
        Some(LatticeNF::R2) => &[],
        Some(LatticeNF::C2uv { .. }) => &["t"],
        Some(LatticeNF::C2ny { .. }) => &["h"],
        Some(LatticeNF::M2 { .. }) => &["g"],
        Some(LatticeNF::T2uvwz { .. }) => &["t1", "t2"],
        Some(LatticeNF::T2nyx { .. }) => &["h", "t"],
        Some(LatticeNF::K2 { .. }) => &["h", "g"],
    }
}

fn fibre_names(dim: usize) -> Vec<String> {
    (1..=dim / 2).map(|i| format!("s{i}")).collect()
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { check: name.to_string(), pass, detail: detail.into() }
}

fn list(names: &[String]) -> String {
    names.join(", ")
}

fn fibre_preserving(spec: &FibrationSpec) -> CheckResult {
    let bad: Vec<String> = spec.maps.iter().filter(|(_, m)| !m.is_fibre_preserving()).map(|(k, _)| k.clone()).collect();
    if bad.is_empty() {
        check(CHECK_FIBRE_PRESERVING, true, format!("all {} maps preserve the fibration", spec.maps.len()))
    } else {
        check(CHECK_FIBRE_PRESERVING, false, format!("base image depends on the fibre for {}", list(&bad)))
    }
}

fn symplectic(spec: &FibrationSpec) -> CheckResult {
    let mut bad = Vec::new();
    for (k, m) in &spec.maps {
        if m.dimension() != spec.dimension() {
            bad.push(format!("{k} (dimension {})", m.dimension()));
            continue;
        }
        match m.pullback(&spec.form).and_then(|p| p.try_sub(&spec.form)) {
            Ok(res) if res.is_zero() => {}
            Ok(res) => bad.push(format!("{k} (residual {res})")),
            Err(e) => bad.push(format!("{k} ({e})")),
        }
    }
    if bad.is_empty() {
        check(CHECK_SYMPLECTIC, true, "every map pulls the form back to itself")
    } else {
        check(CHECK_SYMPLECTIC, false, format!("form not preserved by {}", bad.join("; ")))
    }
}

fn gluing_maps(spec: &FibrationSpec) -> std::result::Result<Vec<&SymplecticAffine>, String> {
    generator_names(spec.lattice.as_ref())
        .iter()
        .map(|k| spec.map(k).ok_or_else(|| format!("missing map {k}")))
        .collect()
}

fn base_lattice(spec: &FibrationSpec) -> CheckResult {
    let maps = match gluing_maps(spec) {
        Ok(m) => m,
        Err(e) => return check(CHECK_BASE_LATTICE, false, e),
    };
    let Some(nf) = &spec.lattice else {
        // unit translations of the three base coordinates
        for (i, m) in maps.iter().enumerate() {
            let unit = (0..3).all(|r| {
                (0..3).all(|c| *m.coef(r, c) == Rat::int((r == c) as i64))
                    && *m.constant(r) == Rat::int((r == i) as i64)
            });
            if !unit {
                return check(CHECK_BASE_LATTICE, false, format!("f{} is not the unit base translation", i + 1));
            }
        }
        return check(CHECK_BASE_LATTICE, true, "base action is the standard Z³ of translations");
    };
    let mut gens = Vec::new();
    for (k, m) in generator_names(Some(nf)).iter().zip(&maps) {
        match m.base_action() {
            Some(g) => gens.push(g),
            None => return check(CHECK_BASE_LATTICE, false, format!("{k} has no integral affine base action")),
        }
    }
    let found = match normalize(&gens) {
        Ok(c) => c.lattice,
        Err(e) => return check(CHECK_BASE_LATTICE, false, format!("base action does not normalize: {e}")),
    };
    if found.canonical() == nf.canonical() {
        check(CHECK_BASE_LATTICE, true, format!("base action normalizes to {found}"))
    } else {
        check(CHECK_BASE_LATTICE, false, format!("base action normalizes to {found}, expected {nf}"))
    }
}

fn integral_vector(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_integer)
}

fn show(v: &[Rat]) -> String {
    format!("({})", v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
}

fn commutator(a: &SymplecticAffine, b: &SymplecticAffine) -> Result<SymplecticAffine> {
    a.compose(b)?.compose(&a.inverse())?.compose(&b.inverse())
}

/// A global relation lift must be a constant integral fibre translation.
fn constant_translation(label: &str, r: &SymplecticAffine) -> std::result::Result<String, String> {
    match r.fibre_translation_vector() {
        Some(v) if integral_vector(&v) => Ok(format!("{label} translates the fibre by {}", show(&v))),
        Some(v) => Err(format!("{label} translates the fibre by the non-integral {}", show(&v))),
        None => Err(format!("{label} is not a fibre translation")),
    }
}

fn relation(spec: &FibrationSpec) -> CheckResult {
    let maps = match gluing_maps(spec) {
        Ok(m) => m,
        Err(e) => return check(CHECK_RELATION, false, e),
    };
    let outcome: std::result::Result<String, String> = (|| match &spec.lattice {
        None => {
            let mut parts = Vec::new();
            for i in 0..3 {
                for j in i + 1..3 {
                    let r = commutator(maps[i], maps[j]).map_err(|e| e.to_string())?;
                    parts.push(constant_translation(&format!("[f{},f{}]", i + 1, j + 1), &r)?);
                }
            }
            Ok(parts.join("; "))
        }
        Some(LatticeNF::K2 { .. }) => {
            let (h, g) = (maps[0], maps[1]);
            let r = g.inverse().compose(h).and_then(|x| x.compose(g)).and_then(|x| x.compose(h));
            let r = r.map_err(|e| e.to_string())?;
            if !r.is_vertical_shear() {
                return Err("g⁻¹hgh does not fix the base and fibre directions".into());
            }
            // the identification of opposite sides closes up at the vertex O
            let at_origin = r.apply(&[Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()]).map_err(|e| e.to_string())?;
            let v = &at_origin[2..];
            if integral_vector(v) {
                Ok(format!("g⁻¹hgh at the origin translates the fibre by {}", show(v)))
            } else {
                Err(format!("g⁻¹hgh at the origin translates the fibre by the non-integral {}", show(v)))
            }
        }
        Some(LatticeNF::T2nyx { .. }) => {
            let r = commutator(maps[1], maps[0]).map_err(|e| e.to_string())?;
            constant_translation("tht⁻¹h⁻¹", &r)
        }
        Some(LatticeNF::T2uvwz { .. }) => {
            let r = commutator(maps[1], maps[0]).map_err(|e| e.to_string())?;
            constant_translation("t₂t₁t₂⁻¹t₁⁻¹", &r)
        }
        Some(_) => Ok("at most one gluing map; no relation to lift".into()),
    })();
    match outcome {
        Ok(d) => check(CHECK_RELATION, true, d),
        Err(d) => check(CHECK_RELATION, false, d),
    }
}

fn fibre_lattice(spec: &FibrationSpec) -> CheckResult {
    let dim = spec.dimension();
    let k = dim / 2;
    let mut vectors = RatMatrix::zeros(k, k);
    for (j, name) in fibre_names(dim).iter().enumerate() {
        let Some(v) = spec.map(name).and_then(SymplecticAffine::fibre_translation_vector) else {
            return check(CHECK_FIBRE_LATTICE, false, format!("{name} is missing or not a fibre translation"));
        };
        for (i, c) in v.into_iter().enumerate() {
            vectors.set(i, j, c);
        }
    }
    let unimodular = vectors.is_integral() && vectors.det().is_ok_and(|d| d.abs() == Rat::one());
    if !unimodular {
        return check(CHECK_FIBRE_LATTICE, false, "fibre translations do not generate the integer lattice");
    }
    let bad: Vec<String> =
        spec.maps.iter().filter(|(_, m)| !m.fibre_block_unimodular()).map(|(k, _)| k.clone()).collect();
    if bad.is_empty() {
        check(CHECK_FIBRE_LATTICE, true, format!("fibre translations generate Z{}; fibre blocks are integral", sup(k)))
    } else {
        check(CHECK_FIBRE_LATTICE, false, format!("fibre block is not in GL(Z) for {}", list(&bad)))
    }
}

fn sup(k: usize) -> &'static str {
    if k == 3 {
        "³"
    } else {
        "²"
    }
}

/// Runs every check; failures are reported, never raised.
pub fn verify(spec: &FibrationSpec) -> VerifyReport {
    VerifyReport {
        checks: vec![fibre_preserving(spec), symplectic(spec), base_lattice(spec), relation(spec), fibre_lattice(spec)],
    }
}

/// Rebuilds the gluing maps with `n₀ + 1/2` in place of `n₀`.
pub fn with_half_integer_shift(spec: &FibrationSpec) -> Result<FibrationSpec> {
    let (m0, n0) = (Rat::int(spec.obstruction.0), Rat::int(spec.obstruction.1) + Rat::new(1, 2));
    let mut out = spec.clone();
    let pairs = match &spec.lattice {
        Some(LatticeNF::K2 { m, delta, x, y }) => {
            let (h, g) = klein_maps(*m, *delta, x, y, &m0, &n0);
            [("h", h), ("g", g)]
        }
        Some(LatticeNF::T2nyx { n, y, x }) => {
            let (t, h) = torus_maps(*n, x, y, &m0, &n0);
            [("t", t), ("h", h)]
        }
        Some(LatticeNF::T2uvwz { u, v, w, z }) => {
            let (t1, t2) = translation_maps(u, v, w, z, &m0, &n0)?;
            [("t1", t1), ("t2", t2)]
        }
        _ => return Err(Error::UnrecognizedShape("no obstruction slots to perturb".into())),
    };
    for (k, m) in pairs {
        out.maps.insert(k.to_string(), m);
    }
    Ok(out)
}

/// Adds `λ·y` to the `α` component of the named map only.
pub fn with_one_chart_twisting(spec: &FibrationSpec, map: &str, lambda: &Rat) -> Result<FibrationSpec> {
    let mut out = spec.clone();
    let m = out.maps.get_mut(map).ok_or_else(|| Error::UnrecognizedShape(format!("no map named {map}")))?;
    if m.dimension() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: m.dimension() });
    }
    let c = m.coef(2, 1) + lambda;
    m.set_coef(2, 1, c);
    Ok(out)
}
