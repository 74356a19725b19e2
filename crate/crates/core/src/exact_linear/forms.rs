use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::matrix::AffineMap;
use super::rat::Rat;
use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 6;

/// Affine polynomial `c + Σ aᵢ·xᵢ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AffineCoef {
    pub constant: Rat,
    pub linear: Vec<Rat>,
}

impl AffineCoef {
    pub fn constant(c: Rat, nvars: usize) -> Self {
        AffineCoef { constant: c, linear: vec![Rat::zero(); nvars] }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(Rat::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(Rat::is_zero)
    }

    fn add_scaled(&mut self, other: &AffineCoef, s: &Rat) {
        self.constant += s * &other.constant;
        for (a, b) in self.linear.iter_mut().zip(&other.linear) {
            *a += s * b;
        }
    }

    fn scaled(&self, s: &Rat) -> AffineCoef {
        AffineCoef {
            constant: &self.constant * s,
            linear: self.linear.iter().map(|a| a * s).collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        &self.constant + self.linear.iter().zip(point).map(|(a, p)| a * p).sum::<Rat>()
    }
}

/// Differential form whose coefficients are affine in the declared variables.
///
/// Basis monomials are strictly increasing index lists into `variables`; zero
/// terms are never stored, so structural equality is equality of forms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    degree: usize,
    variables: Vec<String>,
    terms: BTreeMap<Vec<usize>, AffineCoef>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

impl PolyForm {
    pub fn zero(variables: &[&str], degree: usize) -> Result<Self> {
        if variables.len() > MAX_VARIABLES {
            return Err(Error::DimensionMismatch { expected: MAX_VARIABLES, got: variables.len() });
        }
        if degree > variables.len() {
            return Err(Error::DimensionMismatch { expected: variables.len(), got: degree });
        }
        Ok(PolyForm {
            degree,
            variables: variables.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &AffineCoef)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(AffineCoef::is_constant)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::parse("form variable", name.to_string()))
    }

    /// Adds `coef · d(vars[0]) ∧ … ∧ d(vars[k-1])`, reordering with sign.
    pub fn add_term(&mut self, basis: &[usize], coef: &AffineCoef) -> Result<()> {
        if basis.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: basis.len() });
        }
        if coef.linear.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: coef.linear.len() });
        }
        if let Some(&bad) = basis.iter().find(|&&i| i >= self.nvars()) {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: bad + 1 });
        }
        let mut idx = basis.to_vec();
        let Some(sign) = sort_with_sign(&mut idx) else {
            return Ok(());
        };
        self.accumulate(idx, coef, &Rat::int(sign));
        Ok(())
    }

    fn accumulate(&mut self, idx: Vec<usize>, coef: &AffineCoef, scale: &Rat) {
        let n = self.nvars();
        let entry = self.terms.entry(idx.clone()).or_insert_with(|| AffineCoef::constant(Rat::zero(), n));
        entry.add_scaled(coef, scale);
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    /// Adds `c · d(names[0]) ∧ …` with a constant coefficient.
    pub fn add_constant(&mut self, names: &[&str], c: Rat) -> Result<()> {
        let idx = names.iter().map(|n| self.var_index(n)).collect::<Result<Vec<_>>>()?;
        let coef = AffineCoef::constant(c, self.nvars());
        self.add_term(&idx, &coef)
    }

    /// Adds `c · var · d(names[0]) ∧ …`.
    pub fn add_linear(&mut self, var: &str, names: &[&str], c: Rat) -> Result<()> {
        let idx = names.iter().map(|n| self.var_index(n)).collect::<Result<Vec<_>>>()?;
        let mut coef = AffineCoef::constant(Rat::zero(), self.nvars());
        coef.linear[self.var_index(var)?] = c;
        self.add_term(&idx, &coef)
    }

    /// Coefficient of the basis monomial named by `names` (with sign).
    pub fn coefficient(&self, names: &[&str]) -> Result<AffineCoef> {
        let mut idx = names.iter().map(|n| self.var_index(n)).collect::<Result<Vec<_>>>()?;
        let zero = AffineCoef::constant(Rat::zero(), self.nvars());
        let Some(sign) = sort_with_sign(&mut idx) else {
            return Ok(zero);
        };
        Ok(self.terms.get(&idx).map_or(zero, |c| c.scaled(&Rat::int(sign))))
    }

    fn check_compatible(&self, other: &PolyForm) -> Result<()> {
        if self.variables != other.variables {
            return Err(Error::ShapeMismatch("forms over different variables".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        let one = Rat::one();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), v, &one);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        let minus = Rat::int(-1);
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), v, &minus);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> PolyForm {
        let mut out = PolyForm { degree: self.degree, variables: self.variables.clone(), terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), v, s);
        }
        out
    }

    /// Exact exterior derivative. The result has constant coefficients.
    pub fn exterior_derivative(&self) -> PolyForm {
        let n = self.nvars();
        let mut out = PolyForm {
            degree: self.degree + 1,
            variables: self.variables.clone(),
            terms: BTreeMap::new(),
        };
        for (basis, coef) in &self.terms {
            for (j, a) in coef.linear.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut idx = Vec::with_capacity(basis.len() + 1);
                idx.push(j);
                idx.extend_from_slice(basis);
                if let Some(sign) = sort_with_sign(&mut idx) {
                    out.accumulate(idx, &AffineCoef::constant(a.clone(), n), &Rat::int(sign));
                }
            }
        }
        out
    }

    /// Pullback along `x = J·p + c`, with old and new coordinates sharing the
    /// variable names of `self`.
    pub fn pullback(&self, map: &AffineMap) -> Result<PolyForm> {
        let n = self.nvars();
        if map.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: map.dim() });
        }
        let j = &map.linear;
        let mut out = PolyForm { degree: self.degree, variables: self.variables.clone(), terms: BTreeMap::new() };
        let targets = increasing_subsets(n, self.degree);
        for (basis, coef) in &self.terms {
            // substitute x_i = Σ_j J_ij p_j + c_i into the coefficient
            let mut sub = AffineCoef::constant(coef.constant.clone(), n);
            for (i, a) in coef.linear.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                sub.constant += a * &map.translation[i];
                for (l, s) in sub.linear.iter_mut().enumerate() {
                    *s += a * j.get(i, l);
                }
            }
            for k in &targets {
                let minor = j.minor(basis, k);
                if !minor.is_zero() {
                    out.accumulate(k.clone(), &sub, &minor);
                }
            }
        }
        Ok(out)
    }
}

impl Add for &PolyForm {
    type Output = PolyForm;
    fn add(self, rhs: &PolyForm) -> PolyForm {
        self.try_add(rhs).expect("adding incompatible forms")
    }
}

fn fmt_coef(c: &AffineCoef, vars: &[String]) -> String {
    let mut parts = Vec::new();
    if !c.constant.is_zero() {
        parts.push(c.constant.to_string());
    }
    for (a, v) in c.linear.iter().zip(vars) {
        if a.is_zero() {
            continue;
        }
        parts.push(if *a == Rat::one() { v.clone() } else { format!("{a}{v}") });
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("({})", parts.join(" + "))
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (basis, coef)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let wedge: Vec<String> = basis.iter().map(|&b| format!("d{}", self.variables[b])).collect();
            let c = fmt_coef(coef, &self.variables);
            if c == "1" {
                write!(f, "{}", wedge.join("∧"))?;
            } else {
                write!(f, "{c} {}", wedge.join("∧"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    basis: Vec<String>,
    constant: Rat,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    linear: BTreeMap<String, Rat>,
}

#[derive(Serialize, Deserialize)]
struct FormRecord {
    degree: usize,
    variables: Vec<String>,
    terms: Vec<TermRecord>,
}

impl Serialize for PolyForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(basis, coef)| TermRecord {
                basis: basis.iter().map(|&i| self.variables[i].clone()).collect(),
                constant: coef.constant.clone(),
                linear: coef
                    .linear
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(i, a)| (self.variables[i].clone(), a.clone()))
                    .collect(),
            })
            .collect();
        FormRecord { degree: self.degree, variables: self.variables.clone(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = FormRecord::deserialize(d)?;
        let names: Vec<&str> = rec.variables.iter().map(String::as_str).collect();
        let mut form = PolyForm::zero(&names, rec.degree).map_err(D::Error::custom)?;
        for t in rec.terms {
            let idx = t
                .basis
                .iter()
                .map(|n| form.var_index(n))
                .collect::<Result<Vec<_>>>()
                .map_err(D::Error::custom)?;
            let mut coef = AffineCoef::constant(t.constant, form.nvars());
            for (name, a) in t.linear {
                coef.linear[form.var_index(&name).map_err(D::Error::custom)?] = a;
            }
            form.add_term(&idx, &coef).map_err(D::Error::custom)?;
        }
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::RatMatrix;
    use proptest::prelude::*;

    const XYZ: [&str; 6] = ["x", "y", "z", "alpha", "beta", "gamma"];

    fn phi() -> PolyForm {
        let mut f = PolyForm::zero(&XYZ, 2).unwrap();
        f.add_linear("x", &["y", "z"], Rat::int(2)).unwrap();
        f.add_linear("y", &["z", "x"], Rat::int(2)).unwrap();
        f.add_linear("z", &["x", "y"], Rat::int(2)).unwrap();
        f
    }

    #[test]
    fn derivative_of_phi() {
        let mut expected = PolyForm::zero(&XYZ, 3).unwrap();
        expected.add_constant(&["x", "y", "z"], Rat::int(6)).unwrap();
        assert_eq!(phi().exterior_derivative(), expected);
    }

    #[test]
    fn derivative_of_single_term() {
        let mut f = PolyForm::zero(&["x", "y", "z"], 2).unwrap();
        f.add_linear("x", &["y", "z"], Rat::one()).unwrap();
        let mut expected = PolyForm::zero(&["x", "y", "z"], 3).unwrap();
        expected.add_constant(&["x", "y", "z"], Rat::one()).unwrap();
        assert_eq!(f.exterior_derivative(), expected);
    }

    #[test]
    fn constant_form_is_closed() {
        let mut w = PolyForm::zero(&["x", "y", "alpha", "beta"], 2).unwrap();
        w.add_constant(&["alpha", "x"], Rat::one()).unwrap();
        w.add_constant(&["beta", "y"], Rat::one()).unwrap();
        assert!(w.exterior_derivative().is_zero());
        assert_eq!(w.pullback(&AffineMap::identity(4)).unwrap(), w);
    }

    #[test]
    fn antisymmetry_and_repeats() {
        let mut f = PolyForm::zero(&["x", "y"], 2).unwrap();
        f.add_constant(&["y", "x"], Rat::one()).unwrap();
        assert_eq!(f.coefficient(&["x", "y"]).unwrap().constant, Rat::int(-1));
        f.add_constant(&["x", "y"], Rat::one()).unwrap();
        assert!(f.is_zero());
        f.add_constant(&["x", "x"], Rat::one()).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn pullback_under_torus_h() {
        // (x, y, α, β) ↦ (x + y, y + 1, α − x, β − α + x)
        let mut w = PolyForm::zero(&["x", "y", "alpha", "beta"], 2).unwrap();
        w.add_constant(&["alpha", "x"], Rat::one()).unwrap();
        w.add_constant(&["beta", "y"], Rat::one()).unwrap();
        let h = AffineMap::new(
            RatMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[-1, 0, 1, 0], &[1, 0, -1, 1]]),
            vec![Rat::zero(), Rat::one(), Rat::zero(), Rat::zero()],
        )
        .unwrap();
        assert_eq!(w.pullback(&h).unwrap(), w);
    }

    #[test]
    fn pullback_substitutes_coefficients() {
        // x dy under x ↦ 2x + 1, y ↦ y: (2x + 1) dy
        let mut f = PolyForm::zero(&["x", "y"], 1).unwrap();
        f.add_linear("x", &["y"], Rat::one()).unwrap();
        let t = AffineMap::new(RatMatrix::from_i64(&[&[2, 0], &[0, 1]]), vec![Rat::one(), Rat::zero()]).unwrap();
        let g = f.pullback(&t).unwrap();
        let c = g.coefficient(&["y"]).unwrap();
        assert_eq!(c.constant, Rat::one());
        assert_eq!(c.linear, vec![Rat::int(2), Rat::zero()]);
    }

    #[test]
    fn dimension_mismatch() {
        let f = PolyForm::zero(&["x", "y"], 2).unwrap();
        assert!(matches!(f.pullback(&AffineMap::identity(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn serde_round_trip() {
        let f = phi();
        let json = serde_json::to_string(&f).unwrap();
        let back: PolyForm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    fn small() -> impl Strategy<Value = Rat> {
        (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Rat::new(p, q))
    }

    fn affine_coef(n: usize) -> impl Strategy<Value = AffineCoef> {
        (small(), proptest::collection::vec(small(), n))
            .prop_map(|(constant, linear)| AffineCoef { constant, linear })
    }

    const VARS: [&str; 4] = ["x", "y", "alpha", "beta"];

    fn form(degree: usize) -> impl Strategy<Value = PolyForm> {
        proptest::collection::vec(affine_coef(4), increasing_subsets(4, degree).len()).prop_map(move |coefs| {
            let mut f = PolyForm::zero(&VARS, degree).unwrap();
            for (basis, c) in increasing_subsets(4, degree).iter().zip(&coefs) {
                f.add_term(basis, c).unwrap();
            }
            f
        })
    }

    fn affine_map() -> impl Strategy<Value = AffineMap> {
        (proptest::collection::vec(-3i64..=3, 16), proptest::collection::vec(small(), 4)).prop_map(|(j, c)| {
            let rows: Vec<Vec<Rat>> = j.chunks(4).map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect();
            AffineMap::new(RatMatrix::from_rows(rows).unwrap(), c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(deg in 0usize..=2, seed in form(1), f2 in form(2), f0 in form(0)) {
            let f = match deg { 0 => f0, 1 => seed, _ => f2 };
            let d = f.exterior_derivative();
            prop_assert!(d.has_constant_coefficients());
            prop_assert!(d.exterior_derivative().is_zero());
        }

        #[test]
        fn pullback_is_contravariant(f in form(2), t1 in affine_map(), t2 in affine_map()) {
            let lhs = f.pullback(&t1.compose(&t2).unwrap()).unwrap();
            let rhs = f.pullback(&t1).unwrap().pullback(&t2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_commutes_with_d(f in form(1), t in affine_map()) {
            let lhs = f.exterior_derivative().pullback(&t).unwrap();
            let rhs = f.pullback(&t).unwrap().exterior_derivative();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
