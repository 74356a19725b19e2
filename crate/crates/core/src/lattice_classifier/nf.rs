use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine_group::IntAffine2;
use crate::error::{Error, Result};
use crate::exact_linear::{rational_gcd, rational_snf, IntMat2, Rat, RatMat2};

/// Topological type of the quotient of the plane by a free action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Plane,
    Cylinder,
    Mobius,
    Torus,
    Klein,
}

impl Surface {
    pub fn is_compact(self) -> bool {
        matches!(self, Surface::Torus | Surface::Klein)
    }
}

/// Series tag of a normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    R2,
    C2uv,
    C2ny,
    M2,
    T2uvwz,
    T2nyx,
    K2,
}

impl Series {
    pub const ALL: [Series; 7] =
        [Series::R2, Series::C2uv, Series::C2ny, Series::M2, Series::T2uvwz, Series::T2nyx, Series::K2];

    pub fn tag(self) -> &'static str {
        match self {
            Series::R2 => "R2",
            Series::C2uv => "C2uv",
            Series::C2ny => "C2ny",
            Series::M2 => "M2",
            Series::T2uvwz => "T2uvwz",
            Series::T2nyx => "T2nyx",
            Series::K2 => "K2",
        }
    }

    pub fn surface(self) -> Surface {
        match self {
            Series::R2 => Surface::Plane,
            Series::C2uv | Series::C2ny => Surface::Cylinder,
            Series::M2 => Surface::Mobius,
            Series::T2uvwz | Series::T2nyx => Surface::Torus,
            Series::K2 => Surface::Klein,
        }
    }
}

impl std::str::FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Series::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse("series", format!("unknown series {s:?}")))
    }
}

/// Normal form of a complete rank-2 lattice: one of seven series with its
/// parameters.
///
/// | series | generators |
/// |---|---|
/// | `R2` | none |
/// | `C2uv` | `t = (E, (u, v))` |
/// | `C2ny` | `h = ((1,n;0,1), (0, y))` |
/// | `M2` | `g = ((1,δ;0,−1), (x, 0))` |
/// | `T2uvwz` | `t₁ = (E, (u, v))`, `t₂ = (E, (w, z))` |
/// | `T2nyx` | `h = ((1,n;0,1), (0, y))`, `t = (E, (x, 0))` |
/// | `K2` | `a = ((1,m;0,1), ((m−δ)y/2, y))`, `b = ((1,δ;0,−1), (x, 0))` |
///
/// with `x, y > 0`, `n ≥ 1`, `δ ∈ {0, 1}`, `m ≥ 0` and `m` even when `δ = 1`.
/// For `K2`, `a` preserves and `b` reverses orientation, and `abab⁻¹ = e`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "series", content = "params")]
pub enum LatticeNF {
    R2,
    C2uv { u: Rat, v: Rat },
    C2ny { n: i64, y: Rat },
    M2 { delta: i64, x: Rat },
    T2uvwz { u: Rat, v: Rat, w: Rat, z: Rat },
    T2nyx { n: i64, y: Rat, x: Rat },
    K2 { m: i64, delta: i64, x: Rat, y: Rat },
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameters(msg()))
    }
}

impl LatticeNF {
    pub fn k2(m: i64, delta: i64, x: Rat, y: Rat) -> Result<Self> {
        let nf = LatticeNF::K2 { m, delta, x, y };
        nf.validate()?;
        Ok(nf)
    }

    pub fn t2nyx(n: i64, y: Rat, x: Rat) -> Result<Self> {
        let nf = LatticeNF::T2nyx { n, y, x };
        nf.validate()?;
        Ok(nf)
    }

    pub fn t2uvwz(u: Rat, v: Rat, w: Rat, z: Rat) -> Result<Self> {
        let nf = LatticeNF::T2uvwz { u, v, w, z };
        nf.validate()?;
        Ok(nf)
    }

    pub fn series(&self) -> Series {
        match self {
            LatticeNF::R2 => Series::R2,
            LatticeNF::C2uv { .. } => Series::C2uv,
            LatticeNF::C2ny { .. } => Series::C2ny,
            LatticeNF::M2 { .. } => Series::M2,
            LatticeNF::T2uvwz { .. } => Series::T2uvwz,
            LatticeNF::T2nyx { .. } => Series::T2nyx,
            LatticeNF::K2 { .. } => Series::K2,
        }
    }

    pub fn surface(&self) -> Surface {
        self.series().surface()
    }

    /// Checks the parameter constraints of the series.
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: &Rat| require(v.is_positive(), || format!("{name} = {v} must be positive"));
        let delta_ok = |d: i64| require(d == 0 || d == 1, || format!("delta = {d} must be 0 or 1"));
        match self {
            LatticeNF::R2 => Ok(()),
            LatticeNF::C2uv { u, v } => {
                require(!(u.is_zero() && v.is_zero()), || "translation (u, v) must be nonzero".into())
            }
            LatticeNF::C2ny { n, y } => {
                require(*n >= 1, || format!("n = {n} must be at least 1"))?;
                pos("y", y)
            }
            LatticeNF::M2 { delta, x } => {
                delta_ok(*delta)?;
                pos("x", x)
            }
            LatticeNF::T2uvwz { .. } => {
                require(!self.column_matrix().det().is_zero(), || "columns (u, v), (w, z) must be independent".into())
            }
            LatticeNF::T2nyx { n, y, x } => {
                require(*n >= 1, || format!("n = {n} must be at least 1"))?;
                pos("y", y)?;
                pos("x", x)
            }
            LatticeNF::K2 { m, delta, x, y } => {
                require(*m >= 0, || format!("m = {m} must be nonnegative"))?;
                delta_ok(*delta)?;
                require(*delta == 0 || m % 2 == 0, || format!("m = {m} must be even when delta = 1"))?;
                pos("x", x)?;
                pos("y", y)
            }
        }
    }

    /// The generators listed in the normal form, preserving before reversing.
    pub fn generators(&self) -> Vec<IntAffine2> {
        let e = IntMat2::IDENTITY;
        let zero = Rat::zero;
        match self {
            LatticeNF::R2 => vec![],
            LatticeNF::C2uv { u, v } => vec![IntAffine2::from_parts(e, u.clone(), v.clone())],
            LatticeNF::C2ny { n, y } => vec![IntAffine2::from_parts(IntMat2::new(1, *n, 0, 1), zero(), y.clone())],
            LatticeNF::M2 { delta, x } => {
                vec![IntAffine2::from_parts(IntMat2::new(1, *delta, 0, -1), x.clone(), zero())]
            }
            LatticeNF::T2uvwz { u, v, w, z } => vec![
                IntAffine2::from_parts(e, u.clone(), v.clone()),
                IntAffine2::from_parts(e, w.clone(), z.clone()),
            ],
            LatticeNF::T2nyx { n, y, x } => vec![
                IntAffine2::from_parts(IntMat2::new(1, *n, 0, 1), zero(), y.clone()),
                IntAffine2::from_parts(e, x.clone(), zero()),
            ],
            LatticeNF::K2 { m, delta, x, y } => vec![
                IntAffine2::from_parts(IntMat2::new(1, *m, 0, 1), y * &Rat::new(m - delta, 2), y.clone()),
                IntAffine2::from_parts(IntMat2::new(1, *delta, 0, -1), x.clone(), zero()),
            ],
        }
    }

    /// `[[u, w], [v, z]]` for the translation torus.
    pub fn column_matrix(&self) -> RatMat2 {
        match self {
            LatticeNF::T2uvwz { u, v, w, z } => RatMat2::new(u.clone(), w.clone(), v.clone(), z.clone()),
            _ => panic!("column_matrix is defined for the translation torus only"),
        }
    }

    /// Unique representative of the isomorphism class.
    ///
    /// Translation series are reduced to their rational Smith form
    /// (`T2uvwz`) or to `(g, 0)` with `g` the rational gcd (`C2uv`); every other
    /// normal form is already unique.
    pub fn canonical(&self) -> LatticeNF {
        match self {
            LatticeNF::T2uvwz { .. } => {
                let d = rational_snf(&self.column_matrix()).expect("validated lattice");
                let [d1, d2] = d.diag;
                LatticeNF::T2uvwz { u: d1, v: Rat::zero(), w: Rat::zero(), z: d2 }
            }
            LatticeNF::C2uv { u, v } => {
                LatticeNF::C2uv { u: rational_gcd([u, v]).expect("validated lattice"), v: Rat::zero() }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Debug for LatticeNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeNF::R2 => write!(f, "R2"),
            LatticeNF::C2uv { u, v } => write!(f, "C2[u={u}, v={v}]"),
            LatticeNF::C2ny { n, y } => write!(f, "C2[n={n}, y={y}]"),
            LatticeNF::M2 { delta, x } => write!(f, "M2[δ={delta}, x={x}]"),
            LatticeNF::T2uvwz { u, v, w, z } => write!(f, "T2[u={u}, v={v}; w={w}, z={z}]"),
            LatticeNF::T2nyx { n, y, x } => write!(f, "T2[n={n}, y={y}; x={x}]"),
            LatticeNF::K2 { m, delta, x, y } => write!(f, "K2[m={m}, y={y}; δ={delta}, x={x}]"),
        }
    }
}

impl fmt::Display for LatticeNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let nf = LatticeNF::k2(2, 0, Rat::one(), Rat::one()).unwrap();
        assert_eq!(
            serde_json::to_string(&nf).unwrap(),
            r#"{"series":"K2","params":{"m":2,"delta":0,"x":"1","y":"1"}}"#
        );
        assert_eq!(serde_json::to_string(&LatticeNF::R2).unwrap(), r#"{"series":"R2"}"#);
        let back: LatticeNF = serde_json::from_str(r#"{"series":"T2nyx","params":{"n":1,"y":"1/2","x":2}}"#).unwrap();
        assert_eq!(back, LatticeNF::t2nyx(1, Rat::new(1, 2), Rat::int(2)).unwrap());
    }

    #[test]
    fn constraint_violations() {
        assert!(LatticeNF::k2(3, 1, Rat::one(), Rat::one()).is_err());
        assert!(LatticeNF::k2(-1, 0, Rat::one(), Rat::one()).is_err());
        assert!(LatticeNF::k2(2, 2, Rat::one(), Rat::one()).is_err());
        assert!(LatticeNF::k2(2, 0, Rat::zero(), Rat::one()).is_err());
        assert!(LatticeNF::t2nyx(0, Rat::one(), Rat::one()).is_err());
        assert!(LatticeNF::t2uvwz(Rat::one(), Rat::int(2), Rat::int(2), Rat::int(4)).is_err());
        assert!(LatticeNF::C2uv { u: Rat::zero(), v: Rat::zero() }.validate().is_err());
    }

    #[test]
    fn klein_generators_satisfy_relation() {
        for m in 0..=4 {
            for delta in 0..=1 {
                let Ok(nf) = LatticeNF::k2(m, delta, Rat::new(1, 2), Rat::int(3)) else { continue };
                let g = nf.generators();
                let (a, b) = (&g[0], &g[1]);
                assert!(a.compose(b).compose(a).compose(&b.inverse()).is_identity(), "{nf}");
            }
        }
    }

    #[test]
    fn canonical_translation_forms() {
        let t = LatticeNF::t2uvwz(Rat::int(2), Rat::zero(), Rat::zero(), Rat::one()).unwrap();
        assert_eq!(t.canonical(), LatticeNF::t2uvwz(Rat::one(), Rat::zero(), Rat::zero(), Rat::int(2)).unwrap());
        let c = LatticeNF::C2uv { u: Rat::new(4, 3), v: Rat::int(-2) };
        assert_eq!(c.canonical(), LatticeNF::C2uv { u: Rat::new(2, 3), v: Rat::zero() });
    }
}
