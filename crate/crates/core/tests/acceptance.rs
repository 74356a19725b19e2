//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lagfib::affine_group::klein_word;
use lagfib::cohomology::{h2, shift_integral, twisting_moduli};
use lagfib::fibration::{
    build_fibration, build_t3_example, classify, enumerate_fibrations, verify, with_half_integer_shift,
    with_one_chart_twisting, FibrationSpec, SymplecticAffine, CHECK_RELATION, CHECK_SYMPLECTIC, VARS_6,
};
use lagfib::lattice_classifier::{is_isomorphic, LatticeNF};
use lagfib::{Error, IntAffine2, IntMat2, PolyForm, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rats(vals: &[(i64, i64)]) -> Vec<Rat> {
    vals.iter().map(|&(p, q)| Rat::new(p, q)).collect()
}

// ---------------------------------------------------------------------------
// independent oracles

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    out
}

/// Elementary divisors of `⊕ Z_{dᵢ}` (entries 0 count as free factors).
fn expected_group(factors: &[u64]) -> (usize, Vec<u64>) {
    let rank = factors.iter().filter(|&&d| d == 0).count();
    let mut tors: Vec<u64> = factors.iter().filter(|&&d| d > 1).flat_map(|&d| prime_powers(d)).collect();
    tors.sort_unstable();
    (rank, tors)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i128(b, a % b)
    }
}

/// `gcd` of fractions `pᵢ/qᵢ`, as a reduced pair.
fn fraction_gcd(values: &[(i128, i128)]) -> (i128, i128) {
    let den = values.iter().fold(1i128, |l, &(_, q)| l / gcd_i128(l, q) * q);
    let num = values.iter().fold(0i128, |g, &(p, q)| gcd_i128(g, p * (den / q)));
    let g = gcd_i128(num, den);
    (num / g, den / g)
}

fn as_pair(r: &Rat) -> (i128, i128) {
    (r.numer().try_into().unwrap(), r.denom().try_into().unwrap())
}

// ---------------------------------------------------------------------------
// criteria

fn obstruction_groups() -> Outcome {
    let xy = rats(&[(1, 2), (1, 1), (2, 1), (7, 3)]);
    let mut cases = 0;
    let mut check = |nf: LatticeNF, factors: &[u64]| -> Result<(), String> {
        let g = h2(&nf);
        let got = (g.rank, g.torsion.iter().map(|&d| d as u64).collect::<Vec<_>>());
        let want = expected_group(factors);
        cases += 1;
        ensure(got == want, || format!("{nf}: got {got:?}, expected {want:?}"))
    };
    for x in &xy {
        for y in &xy {
            check(LatticeNF::t2uvwz(x.clone(), Rat::zero(), Rat::one(), y.clone()).unwrap(), &[0, 0])?;
            for n in 1..=10u64 {
                check(LatticeNF::t2nyx(n as i64, y.clone(), x.clone()).unwrap(), &[0, n])?;
            }
            for m in 0..=10u64 {
                check(LatticeNF::k2(m as i64, 0, x.clone(), y.clone()).unwrap(), &[2, m])?;
                if m % 2 == 0 {
                    check(LatticeNF::k2(m as i64, 1, x.clone(), y.clone()).unwrap(), &[2 * m])?;
                }
            }
            check(LatticeNF::M2 { delta: 1, x: x.clone() }, &[1])?;
            check(LatticeNF::C2ny { n: 2, y: y.clone() }, &[1])?;
        }
    }
    check(LatticeNF::R2, &[1])?;
    Ok(format!("{cases} lattices"))
}

fn klein_fibration_count() -> Outcome {
    let mut runs = 0;
    for n in 1..=10i64 {
        for delta in [0, 1] {
            for (x, y) in [(Rat::one(), Rat::one()), (Rat::new(1, 2), Rat::new(7, 3))] {
                let Ok(nf) = LatticeNF::k2(n, delta, x, y) else { continue };
                let e = enumerate_fibrations(&nf).map_err(|e| e.to_string())?;
                ensure(e.specs.len() as i64 == 2 * n, || format!("{nf}: {} fibrations", e.specs.len()))?;
                let triples = e.specs.iter().map(|s| classify(s).map(|t| format!("{t:?}"))).collect::<Result<BTreeSet<_>, _>>().map_err(|e| e.to_string())?;
                ensure(triples.len() as i64 == 2 * n, || format!("{nf}: {} distinct triples", triples.len()))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} Klein lattices, |list| = 2n with distinct triples"))
}

fn normal_form_uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut per_series = std::collections::BTreeMap::new();
    for trial in 0..500 {
        let nf = common::random_nf(&mut rng);
        let gens = common::scramble(&nf, &mut rng);
        common::roundtrip_ok(&nf, &gens).map_err(|e| format!("trial {trial}: {e}"))?;
        *per_series.entry(nf.series().tag()).or_insert(0) += 1;
    }
    Ok(format!("500 trials {per_series:?}"))
}

fn unimodular_box(bound: i64) -> Vec<IntMat2> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let m = IntMat2::new(a, b, c, d);
                    if m.is_unimodular() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Searches `C, D` with entries in `[-4, 4]` and `C·M₁·D = M₂`, using
/// `D = M₁⁻¹·C⁻¹·M₂` and the closure of the box under inversion.
fn brute_isomorphic(m1: &IntMat2, m2: &IntMat2, box4: &[IntMat2]) -> bool {
    let det = m1.det();
    let [[a, b], [c, d]] = m1.0;
    let adj = [[d, -b], [-c, a]];
    box4.iter().any(|cinv| {
        let n = *cinv * *m2;
        let mut ok = true;
        for i in 0..2 {
            for j in 0..2 {
                let v = adj[i][0] * n.0[0][j] + adj[i][1] * n.0[1][j];
                ok &= v % det == 0 && (v / det).abs() <= 4;
            }
        }
        ok
    })
}

fn isomorphism_vs_brute_force() -> Outcome {
    let box4 = unimodular_box(4);
    let mut mats = Vec::new();
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    let m = IntMat2::new(a, b, c, d);
                    if m.det() != 0 {
                        mats.push(m);
                    }
                }
            }
        }
    }
    let nf = |m: &IntMat2| {
        let [[u, w], [v, z]] = m.0;
        LatticeNF::T2uvwz { u: Rat::int(u), v: Rat::int(v), w: Rat::int(w), z: Rat::int(z) }
    };
    let nfs: Vec<LatticeNF> = mats.iter().map(nf).collect();
    let (mut pairs, mut positive) = (0usize, 0usize);
    for i in 0..mats.len() {
        for j in i..mats.len() {
            if mats[i].det().abs() != mats[j].det().abs() {
                continue;
            }
            let brute = brute_isomorphic(&mats[i], &mats[j], &box4);
            let decided = is_isomorphic(&nfs[i], &nfs[j]).isomorphic;
            ensure(brute == decided, || format!("{:?} vs {:?}: brute {brute}, decided {decided}", mats[i], mats[j]))?;
            pairs += 1;
            positive += usize::from(brute);
        }
    }
    // pairs with different |det| are never related by unimodular C, D
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sampled = 0;
    while sampled < 5000 {
        use rand::Rng;
        let (i, j) = (rng.gen_range(0..mats.len()), rng.gen_range(0..mats.len()));
        if mats[i].det().abs() == mats[j].det().abs() {
            continue;
        }
        ensure(!is_isomorphic(&nfs[i], &nfs[j]).isomorphic, || format!("{:?} vs {:?}", mats[i], mats[j]))?;
        sampled += 1;
    }
    Ok(format!(
        "{} matrices, {} unimodular C/D, {pairs} equal-|det| pairs ({positive} isomorphic), {sampled} unequal pairs",
        mats.len(),
        box4.len()
    ))
}

fn iterated_powers(g: &IntAffine2, bound: i64) -> Vec<IntAffine2> {
    // index i holds g^(i - bound)
    let inv = g.inverse();
    let mut neg = vec![IntAffine2::identity()];
    let mut pos = vec![IntAffine2::identity()];
    for _ in 0..bound {
        neg.push(neg.last().unwrap().compose(&inv));
        pos.push(pos.last().unwrap().compose(g));
    }
    neg.into_iter().skip(1).rev().chain(pos).collect()
}

fn klein_word_closed_form() -> Outcome {
    let vals = rats(&[(1, 2), (1, 1), (3, 1)]);
    let mut words = 0;
    for n in 0..=4 {
        for delta in 0..=1 {
            for xh in &vals {
                for yh in &vals {
                    for alpha in rats(&[(0, 1), (1, 2), (1, 1)]) {
                        let a = IntAffine2::from_parts(IntMat2::new(1, n, 0, 1), &alpha * xh, xh.clone());
                        let b = IntAffine2::from_parts(IntMat2::new(1, delta, 0, -1), yh.clone(), Rat::zero());
                        let (ak, bl) = (iterated_powers(&a, 8), iterated_powers(&b, 8));
                        for k in -8..=8i64 {
                            for l in -8..=8i64 {
                                let direct = ak[(k + 8) as usize].compose(&bl[(l + 8) as usize]);
                                let closed = klein_word(&a, &b, k, l).map_err(|e| e.to_string())?;
                                ensure(closed == direct, || format!("n={n} δ={delta} x̂={xh} ŷ={yh} k={k} l={l}"))?;
                                words += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{words} words"))
}

fn fibration_grid() -> Vec<(LatticeNF, Rat)> {
    let vals = common::half_one_two();
    let mut out = Vec::new();
    for x in &vals {
        for y in &vals {
            for m in 0..=4 {
                for delta in 0..=1 {
                    if let Ok(nf) = LatticeNF::k2(m, delta, x.clone(), y.clone()) {
                        out.push((nf, Rat::zero()));
                    }
                }
                if m >= 1 {
                    out.push((LatticeNF::t2nyx(m, y.clone(), x.clone()).unwrap(), Rat::new(1, 3)));
                }
            }
            out.push((LatticeNF::t2uvwz(x.clone(), Rat::one(), Rat::zero(), y.clone()).unwrap(), Rat::new(2, 5)));
        }
    }
    out
}

fn symplectic_verification() -> Outcome {
    let mut specs = 0;
    let mut maps = 0;
    let mut check = |spec: &FibrationSpec, label: &str| -> Result<(), String> {
        let report = verify(spec);
        ensure(report.all_pass(), || format!("{label}: {:?}", report.failed()))?;
        ensure(spec.form.exterior_derivative().is_zero(), || format!("{label}: form is not closed"))?;
        specs += 1;
        maps += spec.maps.len();
        Ok(())
    };
    for (nf, lambda) in fibration_grid() {
        for m0 in -3..=3 {
            for n0 in -3..=3 {
                let spec = build_fibration(&nf, m0, n0, &lambda).map_err(|e| format!("{nf}: {e}"))?;
                check(&spec, &format!("{nf} ({m0},{n0})"))?;
            }
        }
    }
    for nf in [
        LatticeNF::R2,
        LatticeNF::C2uv { u: Rat::new(1, 2), v: Rat::int(3) },
        LatticeNF::C2ny { n: 3, y: Rat::int(2) },
        LatticeNF::M2 { delta: 1, x: Rat::new(1, 2) },
    ] {
        let spec = build_fibration(&nf, 0, 0, &Rat::zero()).map_err(|e| e.to_string())?;
        check(&spec, &nf.to_string())?;
    }
    Ok(format!("{specs} specs, {maps} maps, all checks exact"))
}

fn commutator(a: &SymplecticAffine, b: &SymplecticAffine) -> SymplecticAffine {
    a.compose(b).unwrap().compose(&a.inverse()).unwrap().compose(&b.inverse()).unwrap()
}

fn almost_lagrangian_example() -> Outcome {
    let spec = build_t3_example();
    let mut six = PolyForm::zero(&VARS_6, 3).unwrap();
    six.add_constant(&["x", "y", "z"], Rat::int(6)).unwrap();
    let d = spec.form.exterior_derivative();
    ensure(d == six, || format!("dη = {d}"))?;
    for (name, m) in &spec.maps {
        ensure(m.pullback(&spec.form).unwrap() == spec.form, || format!("{name} does not preserve η"))?;
    }
    let f: Vec<&SymplecticAffine> = ["f1", "f2", "f3"].iter().map(|k| spec.map(k).unwrap()).collect();
    let mut shifts = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let v = commutator(f[i], f[j]).fibre_translation_vector();
            let v = v.ok_or_else(|| format!("[f{},f{}] is not a fibre translation", i + 1, j + 1))?;
            ensure(v.iter().all(Rat::is_integer), || format!("[f{},f{}] shifts by {v:?}", i + 1, j + 1))?;
            shifts.push(format!("({})", v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")));
        }
    }
    Ok(format!("dη = {d}; commutator shifts {}", shifts.join(" ")))
}

fn shift_integrals() -> Outcome {
    let lattices = [
        rats(&[(1, 1), (0, 1), (0, 1), (1, 1)]),
        rats(&[(1, 2), (1, 3), (-2, 1), (5, 4)]),
        rats(&[(2, 1), (4, 1), (6, 1), (2, 1)]),
        rats(&[(3, 5), (0, 1), (1, 7), (2, 3)]),
    ];
    let mut evaluated = 0;
    for p in &lattices {
        let nf = LatticeNF::t2uvwz(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()).unwrap();
        let mut values = Vec::new();
        for k in -2..=2i64 {
            for l in -2..=2i64 {
                for pp in -2..=2i64 {
                    for q in -2..=2i64 {
                        let got = shift_integral(k, l, pp, q, &nf).map_err(|e| e.to_string())?;
                        let want = &p[0] * pp + &p[1] * q + &p[2] * k + &p[3] * l;
                        ensure(got == want, || format!("{nf} ({k},{l},{pp},{q}): {got} ≠ {want}"))?;
                        values.push(as_pair(&got));
                        evaluated += 1;
                    }
                }
            }
        }
        let g = as_pair(twisting_moduli(&nf).generator.as_ref().unwrap());
        let span = fraction_gcd(&values);
        ensure(span == g, || format!("{nf}: values span {span:?}·Z, moduli report {g:?}"))?;
    }
    for (n, y, x) in [(1, (1, 1), (1, 1)), (3, (1, 2), (2, 3)), (2, (7, 3), (1, 2))] {
        let nf = LatticeNF::t2nyx(n, Rat::new(y.0, y.1), Rat::new(x.0, x.1)).unwrap();
        let mut values = Vec::new();
        for k in -2..=2i64 {
            for l in -2..=2i64 {
                for p in -2..=2i64 {
                    let res = shift_integral(k, l, p, 0, &nf);
                    if k != 0 {
                        ensure(res == Err(Error::UnrealizableForm(k)), || format!("{nf}: k = {k} accepted"))?;
                        continue;
                    }
                    let got = res.map_err(|e| e.to_string())?;
                    let want = Rat::new(x.0, x.1) * p + Rat::new(y.0, y.1) * l;
                    ensure(got == want, || format!("{nf}: {got} ≠ {want}"))?;
                    values.push(as_pair(&got));
                    evaluated += 1;
                }
            }
        }
        let g = as_pair(twisting_moduli(&nf).generator.as_ref().unwrap());
        ensure(fraction_gcd(&values) == g, || format!("{nf}: span differs from the moduli generator"))?;
    }
    Ok(format!("{evaluated} integrals, spans equal g·Z"))
}

fn negative_controls() -> Outcome {
    let mut controls = 0;
    let lattices = [
        LatticeNF::k2(2, 0, Rat::one(), Rat::one()).unwrap(),
        LatticeNF::k2(3, 0, Rat::new(1, 2), Rat::int(2)).unwrap(),
        LatticeNF::k2(4, 1, Rat::int(2), Rat::new(1, 2)).unwrap(),
        LatticeNF::t2nyx(1, Rat::one(), Rat::one()).unwrap(),
        LatticeNF::t2nyx(3, Rat::new(1, 2), Rat::int(2)).unwrap(),
        LatticeNF::t2uvwz(Rat::one(), Rat::zero(), Rat::new(1, 2), Rat::int(2)).unwrap(),
    ];
    for nf in &lattices {
        for (m0, n0) in [(0, 0), (1, -2), (3, 1)] {
            let spec = build_fibration(nf, m0, n0, &Rat::zero()).map_err(|e| e.to_string())?;
            let half = verify(&with_half_integer_shift(&spec).map_err(|e| e.to_string())?);
            ensure(half.failed() == vec![CHECK_RELATION], || format!("{nf} half shift: failed {:?}", half.failed()))?;
            for name in spec.maps.keys().filter(|k| !k.starts_with('s')) {
                let twisted = verify(&with_one_chart_twisting(&spec, name, &Rat::new(1, 3)).map_err(|e| e.to_string())?);
                ensure(!twisted.passed(CHECK_SYMPLECTIC), || format!("{nf} twist on {name} passed"))?;
                controls += 1;
            }
            controls += 1;
        }
    }
    Ok(format!("{controls} perturbed specs rejected by the named check"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("obstruction groups match the invariant table", Duration::from_secs(1), obstruction_groups),
        ("2n fibrations over each Klein lattice", Duration::from_secs(1), klein_fibration_count),
        ("normal forms are unique under conjugation and substitution", Duration::from_secs(10), normal_form_uniqueness),
        ("torus isomorphism agrees with brute force", Duration::from_secs(60), isomorphism_vs_brute_force),
        ("Klein word closed form equals composition", Duration::from_secs(1), klein_word_closed_form),
        ("every built gluing map is symplectic with integral relations", Duration::from_secs(5), symplectic_verification),
        ("T3 example has dη = 6 dx∧dy∧dz", Duration::from_secs(1), almost_lagrangian_example),
        ("shift integrals and their span", Duration::from_secs(1), shift_integrals),
        ("perturbed gluing maps fail the named check", Duration::from_secs(1), negative_controls),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "{} [{}] {name}: {detail} ({:.3}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
