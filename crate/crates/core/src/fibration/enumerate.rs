use serde::{Deserialize, Serialize};

use super::build::{build_fibration, build_noncompact};
use super::FibrationSpec;
use crate::cohomology::{h2, twisting_moduli, ObstructionGroup, TwistingModuli};
use crate::error::Result;
use crate::exact_linear::Rat;
use crate::lattice_classifier::LatticeNF;

/// The fibrations over one lattice, up to fibrewise symplectomorphism over
/// the identity of the base.
///
/// For finite obstruction groups `specs` has one entry per class. Otherwise
/// it covers the classes whose free coordinates are zero and `description`
/// states the full family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub lattice: LatticeNF,
    pub obstruction_group: ObstructionGroup,
    pub twisting_moduli: TwistingModuli,
    pub description: String,
    pub specs: Vec<FibrationSpec>,
}

fn group_name(g: &ObstructionGroup) -> String {
    let mut parts: Vec<String> = vec!["Z".to_string(); g.rank];
    parts.extend(g.invariant_factors.iter().map(|d| format!("Z{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn enumerate_fibrations(nf: &LatticeNF) -> Result<Enumeration> {
    nf.validate()?;
    let group = h2(nf);
    let moduli = twisting_moduli(nf);
    let specs = if nf.surface().is_compact() {
        group
            .finite_slice()
            .into_iter()
            .map(|(m0, n0)| build_fibration(nf, m0, n0, &Rat::zero()))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![build_noncompact(nf)?]
    };
    let classes = match (&group.order, &group.representatives_pattern) {
        (Some(k), _) => format!("{k} obstruction class(es) in {}", group_name(&group)),
        (None, Some(p)) => format!("obstruction classes {p} in {}", group_name(&group)),
        (None, None) => group_name(&group),
    };
    let description = if moduli.is_trivial() {
        format!("{classes}; no twisting")
    } else {
        format!("{classes}; twisting λ·area in {}", moduli.description())
    };
    Ok(Enumeration { lattice: nf.clone(), obstruction_group: group, twisting_moduli: moduli, description, specs })
}
