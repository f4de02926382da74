//! One line per acceptance criterion; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divide_core::calibration::{calibration_checks, right_trefoil_jones, Check};
use divide_core::diagram::{build_diagram, involution_check, Convention, LinkDiagram};
use divide_core::divide::{genericity_check, perturb_to_generic, validate};
use divide_core::generators::{canned, random_divide, torus_divide, TorusParams, CANNED_NAMES};
use divide_core::geometry::{from_f64_grid, ratio, Point2};
use divide_core::invariants::{
    alexander_fox, alexander_from_conway, conway_skein, jones_kauffman, writhe_and_linking, LaurentPolynomial,
    Variable,
};
use divide_core::{Branch, Divide};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn t(coeffs: &[i64]) -> LaurentPolynomial {
    LaurentPolynomial::from_coeffs(Variable::T, 0, coeffs)
}

fn z(coeffs: &[i64]) -> LaurentPolynomial {
    LaurentPolynomial::from_coeffs(Variable::Z, 0, coeffs)
}

/// Coefficients of `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))` by long
/// division of integer vectors.
fn torus_alexander(p: usize, q: usize) -> Vec<i64> {
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let binom = |k: usize| {
        let mut v = vec![0; k + 1];
        v[0] = -1;
        v[k] = 1;
        v
    };
    let mut num = mul(&binom(p * q), &binom(1));
    let den = mul(&binom(p), &binom(q));
    let mut quot = vec![0; num.len() - den.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = num[k + den.len() - 1];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            num[k + j] -= c * d;
        }
    }
    assert!(num.iter().all(|c| *c == 0));
    quot
}

fn diagram(d: &Divide) -> Result<LinkDiagram, String> {
    build_diagram(d).map_err(|e| e.to_string())
}

fn corpus() -> Vec<(&'static str, Divide)> {
    CANNED_NAMES.iter().map(|n| (*n, canned(n).unwrap())).collect()
}

fn c1_e6_pipeline() -> Outcome {
    let start = Instant::now();
    let divide = torus_divide(TorusParams::new(3, 4), 0).map_err(|e| e.to_string())?;
    let d = diagram(&divide)?;
    let delta = alexander_fox(&d).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let det = delta.eval_unit(true).abs();
    let ok = divide.double_points().len() == 3
        && d.component_count() == 1
        && delta == t(&[1, -1, 0, 1, 0, -1, 1])
        && det == BigInt::from(3)
        && elapsed < Duration::from_secs(2);
    let detail = format!("Δ = {delta}, |Δ(-1)| = {det}, {} ms", elapsed.as_millis());
    if ok { Ok(detail) } else { Err(detail) }
}

fn c2_torus_family() -> Outcome {
    let mut seen = Vec::new();
    for (p, q) in [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5)] {
        let d = diagram(&torus_divide(TorusParams::new(p as u32, q as u32), 0).unwrap())?;
        let got = alexander_fox(&d).map_err(|e| e.to_string())?;
        let want = t(&torus_alexander(p, q));
        if got != want {
            return Err(format!("T({p},{q}): got {got}, want {want}"));
        }
        seen.push(format!("T({p},{q})"));
    }
    let d = diagram(&torus_divide(TorusParams::new(2, 4), 0).unwrap())?;
    if d.component_count() != 2 {
        return Err(format!("T(2,4) has {} components", d.component_count()));
    }
    Ok(format!("{} match the formula, T(2,4) has 2 components", seen.join(" ")))
}

fn c3_calibration() -> Outcome {
    let hopf = diagram(&canned("cross").unwrap())?;
    let lk = writhe_and_linking(&hopf).1.get(0, 1);
    let nabla = conway_skein(&hopf).map_err(|e| e.to_string())?;
    let trefoil = diagram(&torus_divide(TorusParams::new(2, 3), 0).unwrap())?;
    let jones = jones_kauffman(&trefoil, 20).map_err(|e| e.to_string())?;
    // hand bracket of the positive trefoil: t + t^3 - t^4
    let hand = LaurentPolynomial::from_terms(Variable::SqrtT, [(2, 1), (6, 1), (8, -1)]);
    let passing: Vec<Convention> = Convention::ALL
        .into_iter()
        .filter(|c| calibration_checks(*c).iter().all(Check::passed))
        .collect();
    let detail = format!("lk = {lk}, ∇ = {nabla}, V = {jones}, {} convention(s) pass", passing.len());
    if lk == 1 && nabla == z(&[0, 1]) && jones == hand && hand == right_trefoil_jones() && passing == [Convention::CALIBRATED]
    {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_corpus() -> Vec<(usize, Divide)> {
    (0..50u64).map(|seed| {
        let n = 1 + (seed % 6) as usize;
        (n, random_divide(n, 6, seed).unwrap())
    })
    .collect()
}

fn c4_component_law() -> Outcome {
    for (k, (n, divide)) in random_corpus().into_iter().enumerate() {
        let d = diagram(&divide)?;
        if d.component_count() != n {
            return Err(format!("seed {k}: {} components for {n} branches", d.component_count()));
        }
    }
    Ok("50 random divides with 1-6 branches".into())
}

fn c5_involution() -> Outcome {
    for (name, divide) in corpus() {
        if !involution_check(&diagram(&divide)?) {
            return Err(format!("{name} is not symmetric"));
        }
    }
    for (k, (_, divide)) in random_corpus().into_iter().enumerate() {
        if !involution_check(&diagram(&divide)?) {
            return Err(format!("random seed {k} is not symmetric"));
        }
    }
    Ok(format!("{} corpus and 50 random diagrams", CANNED_NAMES.len()))
}

/// Every invariant that fits the default caps, as text.
fn fingerprint(d: &LinkDiagram) -> Vec<String> {
    let mut out = vec![d.component_count().to_string()];
    let nabla = conway_skein(d).unwrap();
    out.push(nabla.to_string());
    if d.component_count() == 1 {
        out.push(alexander_fox(d).unwrap().to_string());
    }
    let (_, link) = writhe_and_linking(d);
    out.push(format!("{:?}", link.rows()));
    if d.crossing_count() <= 20 {
        out.push(jones_kauffman(d, 20).unwrap().to_string());
    }
    out
}

/// Moves every interior vertex by less than `2^-14` per coordinate.
fn jitter(divide: &Divide, seed: u64) -> Option<Divide> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 1.0 / 16384.0;
    let branches: Vec<Branch> = divide
        .branches()
        .iter()
        .map(|b| {
            let n = b.vertices.len();
            let vertices = b
                .vertices
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    if !b.is_closed() && (i == 0 || i == n - 1) {
                        return p.clone();
                    }
                    let dx = from_f64_grid(rng.gen_range(-step..step), 24);
                    let dy = from_f64_grid(rng.gen_range(-step..step), 24);
                    Point2::new(&p.x + dx, &p.y + dy)
                })
                .collect();
            Branch { kind: b.kind, vertices }
        })
        .collect();
    let v = validate(branches).ok()?;
    let v = if genericity_check(&v).generic { v } else { perturb_to_generic(&v, &ratio(1, 1 << 16), seed).ok()? };
    (v.double_points().len() == divide.double_points().len()).then_some(v)
}

fn c6_invariance() -> Outcome {
    let e6: Vec<Vec<String>> = ["e6", "e6-alt1", "e6-alt2"]
        .iter()
        .map(|n| {
            let d = build_diagram(&canned(n).unwrap()).unwrap();
            vec![alexander_fox(&d).unwrap().to_string(), conway_skein(&d).unwrap().to_string()]
        })
        .collect();
    if e6.iter().any(|v| *v != e6[0]) {
        return Err(format!("E6 divides differ: {e6:?}"));
    }
    let mut runs = 0;
    for (name, divide) in corpus() {
        let base = fingerprint(&diagram(&divide)?);
        for seed in 0..3 {
            let Some(moved) = jitter(&divide, seed) else {
                return Err(format!("{name}: jitter {seed} changed the double points"));
            };
            if moved == divide {
                continue;
            }
            let got = fingerprint(&diagram(&moved)?);
            if got != base {
                return Err(format!("{name} seed {seed}: {got:?} != {base:?}"));
            }
            runs += 1;
        }
    }
    Ok(format!("E6 triple agrees ({}), {runs} perturbed corpus diagrams unchanged", e6[0].join(" / ")))
}

fn c7_oracle_agreement() -> Outcome {
    let mut names = Vec::new();
    for (name, divide) in corpus() {
        let d = diagram(&divide)?;
        if d.component_count() != 1 {
            continue;
        }
        let fox = alexander_fox(&d).map_err(|e| e.to_string())?;
        let skein = alexander_from_conway(&conway_skein(&d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if fox != skein {
            return Err(format!("{name}: Fox {fox}, skein {skein}"));
        }
        names.push(name);
    }
    Ok(format!("Fox = skein on {}", names.join(", ")))
}

fn c8_properties() -> Outcome {
    let mut diagrams: Vec<(String, Divide)> = corpus().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    for seed in 0..20u64 {
        diagrams.push((format!("random-1-{seed}"), random_divide(1, 6, seed).unwrap()));
    }
    for (name, divide) in &diagrams {
        let d = diagram(divide)?;
        let nabla = conway_skein(&d).map_err(|e| e.to_string())?;
        let odd = d.component_count() % 2 == 0;
        if !nabla.terms().all(|(e, _)| (e % 2 == 1) == odd) {
            return Err(format!("{name}: ∇ = {nabla} has the wrong parity"));
        }
        if d.component_count() != 1 {
            continue;
        }
        let delta = alexander_fox(&d).map_err(|e| e.to_string())?;
        let unit = delta.eval_unit(false).abs() == BigInt::from(1);
        let monic = delta.leading_coeff().is_some_and(|c| c.abs() == BigInt::from(1));
        if !delta.is_palindromic() || !unit || !monic {
            return Err(format!("{name}: Δ = {delta}"));
        }
    }
    Ok(format!("{} diagrams", diagrams.len()))
}

fn c9_ten_145() -> Outcome {
    let divide = canned("ac-10-145").unwrap();
    let d = diagram(&divide)?;
    let delta = alexander_fox(&d).map_err(|e| e.to_string())?;
    let nabla = conway_skein(&d).map_err(|e| e.to_string())?;
    let detail = format!("{} double points, Δ = {delta}, ∇ = {nabla}", divide.double_points().len());
    if delta == t(&[1, 1, -3, 1, 1]) && nabla == z(&[1, 0, 5, 0, 1]) && d.component_count() == 1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("E6 pipeline", c1_e6_pipeline),
        ("torus family", c2_torus_family),
        ("calibration", c3_calibration),
        ("component-count law", c4_component_law),
        ("involution symmetry", c5_involution),
        ("isotopy and perturbation invariance", c6_invariance),
        ("Fox and skein agree", c7_oracle_agreement),
        ("property suite", c8_properties),
        ("10_145 fixture (conditional)", c9_ten_145),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", k + 1),
            Err(detail) => {
                println!("FAIL {} {name}: {detail}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
