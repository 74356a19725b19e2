//! Primary obstruction groups `H²(B, P) = Z² / B²` and the moduli of
//! nontrivial twistings `H²(B, R) / H²_P(B)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linear::{rational_gcd, snf, IntMat2, Rat};
use crate::lattice_classifier::LatticeNF;

/// Generators of the coboundary subgroup `B² ⊂ Z²` for a compact base.
///
/// `T2nyx` gives `{(0, n)}`, `T2uvwz` gives nothing, and `K2` gives
/// `{(2, δ − m), (0, −m)}`.
pub fn coboundary_image(nf: &LatticeNF) -> Result<Vec<(i64, i64)>> {
    match nf {
        LatticeNF::T2nyx { n, .. } => Ok(vec![(0, *n)]),
        LatticeNF::T2uvwz { .. } => Ok(vec![]),
        LatticeNF::K2 { m, delta, .. } => Ok(vec![(2, delta - m), (0, -m)]),
        _ => Err(Error::NonCompactBase),
    }
}

/// Echelon basis `(d1, c), (0, d2)` of a subgroup of `Z²`, with `d1, d2 ≥ 0`
/// and `0 ≤ c < d2` when `d2 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Echelon {
    d1: i64,
    c: i64,
    d2: i64,
}

impl Echelon {
    fn of(gens: &[(i64, i64)]) -> Echelon {
        let mut rows: Vec<(i64, i64)> = gens.to_vec();
        // Euclid on the first coordinates, keeping second coordinates in step
        let mut head = (0i64, 0i64);
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            let (mut p, mut q) = (head, r);
            while q.0 != 0 {
                let t = p.0.div_euclid(q.0);
                p = (p.0 - t * q.0, p.1 - t * q.1);
                std::mem::swap(&mut p, &mut q);
            }
            head = p;
            rest.push(q.1);
        }
        if head.0 < 0 {
            head = (-head.0, -head.1);
        }
        let d2 = rest.iter().fold(0i64, |g, &v| g.gcd(&v));
        let c = if d2 > 0 { head.1.rem_euclid(d2) } else { head.1 };
        Echelon { d1: head.0, c, d2 }
    }

    fn reduce(&self, v: (i64, i64)) -> (i64, i64) {
        let (mut a, mut b) = v;
        if self.d1 > 0 {
            let k = a.div_euclid(self.d1);
            a -= k * self.d1;
            b -= k * self.c;
        }
        if self.d2 > 0 {
            b = b.rem_euclid(self.d2);
        }
        (a, b)
    }
}

fn range_pattern(d: i64) -> String {
    match d {
        0 => "Z".to_string(),
        1..=4 => format!("{{{}}}", (0..d).map(|i| i.to_string()).collect::<Vec<_>>().join(",")),
        _ => format!("{{0,...,{}}}", d - 1),
    }
}

fn prime_power_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                q *= p;
                n /= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Finitely generated abelian group `Z² / B²` with canonical coset
/// representatives.
///
/// `torsion` lists the elementary divisors (prime powers) and
/// `invariant_factors` the Smith diagonal entries `≥ 2`; both describe the same
/// finite part. The representative of a coset is its lexicographically least
/// nonnegative element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
    pub invariant_factors: Vec<i64>,
    pub coboundary_generators: Vec<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<(i64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives_pattern: Option<String>,
    echelon: Echelon,
}

impl ObstructionGroup {
    /// `Z²` modulo the subgroup generated by `gens`.
    pub fn from_coboundaries(gens: Vec<(i64, i64)>) -> Self {
        let mut cols = gens.clone();
        cols.resize(cols.len().max(2), (0, 0));
        let diag = if cols.len() == 2 {
            let s = snf(&IntMat2::from_cols(cols[0], cols[1]));
            vec![s.d1(), s.d2()]
        } else {
            // more than two generators: combine through the echelon form
            let e = Echelon::of(&cols);
            let s = snf(&IntMat2::new(e.d1, 0, e.c, e.d2));
            vec![s.d1(), s.d2()]
        };
        let rank = diag.iter().filter(|&&d| d == 0).count();
        let invariant_factors: Vec<i64> = diag.iter().copied().filter(|&d| d >= 2).collect();
        let mut torsion: Vec<i64> = invariant_factors.iter().flat_map(|&d| prime_power_factors(d)).collect();
        torsion.sort_unstable();
        let echelon = Echelon::of(&cols);
        let finite = rank == 0;
        let order = finite.then(|| invariant_factors.iter().map(|&d| d as u64).product());
        let representatives = finite.then(|| {
            let mut reps = Vec::new();
            for a in 0..echelon.d1 {
                for b in 0..echelon.d2 {
                    reps.push((a, b));
                }
            }
            reps
        });
        let representatives_pattern =
            (!finite).then(|| format!("{} x {}", range_pattern(echelon.d1), range_pattern(echelon.d2)));
        ObstructionGroup {
            rank,
            torsion,
            invariant_factors,
            coboundary_generators: gens,
            order,
            representatives,
            representatives_pattern,
            echelon,
        }
    }

    /// The zero group, for bases without a 2-cell.
    pub fn trivial() -> Self {
        let mut g = Self::from_coboundaries(vec![(1, 0), (0, 1)]);
        g.coboundary_generators.clear();
        g
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Canonical representative of the coset of `v`.
    pub fn reduce(&self, v: (i64, i64)) -> (i64, i64) {
        self.echelon.reduce(v)
    }

    pub fn congruent(&self, a: (i64, i64), b: (i64, i64)) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    /// Representatives with every free coordinate set to zero; for a finite
    /// group this is the full list.
    pub fn finite_slice(&self) -> Vec<(i64, i64)> {
        let (d1, d2) = (self.echelon.d1.max(1), self.echelon.d2.max(1));
        let mut out = Vec::new();
        for a in 0..d1 {
            for b in 0..d2 {
                out.push((a, b));
            }
        }
        out
    }
}

/// `H²(B, P)` for any normal form; bases that are not compact give the zero group.
pub fn h2(nf: &LatticeNF) -> ObstructionGroup {
    match coboundary_image(nf) {
        Ok(gens) => ObstructionGroup::from_coboundaries(gens),
        Err(_) => ObstructionGroup::trivial(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Trivial,
    RealLine,
}

/// `H²(B, R) / H²_P(B)`: a real line modulo `g·Z` for tori, trivial otherwise.
///
/// `H²(B, R)` is identified with `R` by integrating over the fundamental
/// parallelogram, whose area is `area`; `λ dx∧dy` has total integral `λ·area`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistingModuli {
    pub ambient: Ambient,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<Rat>,
}

impl TwistingModuli {
    pub fn trivial() -> Self {
        TwistingModuli { ambient: Ambient::Trivial, generator: None, area: None }
    }

    pub fn is_trivial(&self) -> bool {
        self.ambient == Ambient::Trivial
    }

    pub fn description(&self) -> String {
        match (&self.ambient, &self.generator) {
            (Ambient::RealLine, Some(g)) => format!("R / {g}Z"),
            _ => "0".to_string(),
        }
    }
}

pub fn twisting_moduli(nf: &LatticeNF) -> TwistingModuli {
    let (generator, area) = match nf {
        LatticeNF::T2uvwz { u, v, w, z } => (rational_gcd([u, v, w, z]), (u * z - v * w).abs()),
        LatticeNF::T2nyx { y, x, .. } => (rational_gcd([x, y]), x * y),
        _ => return TwistingModuli::trivial(),
    };
    TwistingModuli {
        ambient: Ambient::RealLine,
        generator: Some(generator.expect("validated torus has a nonzero parameter")),
        area: Some(area),
    }
}

/// Representative of a total integral in `[0, g)`.
pub fn twisting_canonical(total_integral: &Rat, moduli: &TwistingModuli) -> Result<Rat> {
    match (&moduli.ambient, &moduli.generator) {
        (Ambient::RealLine, Some(g)) => Ok(total_integral.rem_euclid(g)),
        _ => Err(Error::TrivialAmbient),
    }
}

/// `∫ dα = pu + qv + kw + lz` for a latticed 1-form with periods `(k, l, p, q)`.
///
/// On `T2nyx` only `k = 0` is realisable and the parameters are read as
/// `u = x`, `v = w = 0`, `z = y`.
pub fn shift_integral(k: i64, l: i64, p: i64, q: i64, nf: &LatticeNF) -> Result<Rat> {
    match nf {
        LatticeNF::T2uvwz { u, v, w, z } => Ok(u * p + v * q + w * k + z * l),
        LatticeNF::T2nyx { y, x, .. } => {
            if k != 0 {
                return Err(Error::UnrealizableForm(k));
            }
            Ok(x * p + y * l)
        }
        other => Err(Error::ShapeMismatch(format!("shift integrals are defined on torus lattices, not {other}"))),
    }
}
