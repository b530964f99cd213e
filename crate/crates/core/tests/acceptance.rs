//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! status if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{fixture, parse_table};
use odh_core::clm::{clm_by_ansatz, ClmProblem};
use odh_core::contraction::{contraction_params, syzygy_dims, ContractionData, ContractionIdeal};
use odh_core::hyperterm::{
    minimal_telescoper, rat_actual_min_height, telescoper_search, LeDecomposition, ProperTerm, TelescoperCertificate,
};
use odh_core::surfaces::{min_height, HyperParams, LclmShapes, Region, DEFAULT_H_CAP};
use odh_core::{parse_operator, parse_poly, AlgebraKind, Budget, MPoly, Monomial, OrePoly, PolyOp, Rat, Shape, Var};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: odh_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Compares a region's minimal heights with a table whose columns start at `r = 0`.
fn check_table<R: Region>(region: &R, rows: &[&str]) -> Outcome {
    let table = parse_table(rows);
    let mut populated = 0;
    for (d, row) in table.iter().enumerate() {
        for (r, want) in row.iter().enumerate() {
            let got = core(min_height(region, r as u32, d as u32, DEFAULT_H_CAP))?;
            ensure(got == *want, || format!("(r, d) = ({r}, {d}): expected {want:?}, got {got:?}"))?;
            populated += usize::from(want.is_some());
        }
    }
    Ok(format!("{populated} populated cells"))
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

const EX32_PRED: [&str; 11] = [
    "·  ·  ·  15  6  4  3  3  3  3  3",
    "·  ·  ·  21  6  4  4  3  3  3  3",
    "·  ·  ·  37  7  5  4  3  3  3  3",
    "·  ·  ·  ·   9  5  4  4  3  3  3",
    "·  ·  ·  ·  12  7  5  4  4  4  3",
    "·  ·  ·  ·  31 10  7  5  5  4  4",
    "·  ·  ·  ·   · 31 12  9  7  6  6",
    "·  ·  ·  ·   ·  ·  ·  · 37 21 15",
    "·  ·  ·  ·   ·  ·  ·  ·  ·  ·  ·",
    "·  ·  ·  ·   ·  ·  ·  ·  ·  ·  ·",
    "·  ·  ·  ·   ·  ·  ·  ·  ·  ·  ·",
];

const EX46_PRED: [&str; 13] = [
    "· ·  42  25  22  21  22  22  23  24",
    "· ·  50  27  24  23  24  24  25  26",
    "· ·  62  31  27  26  26  27  28  29",
    "· ·  86  36  30  29  30  30  32  33",
    "· · 158  45  36  35  35  36  37  39",
    "· ·   ·  62  47  43  43  44  46  47",
    "· ·   · 114  69  61  59  60  61  63",
    "· ·   ·   · 160 113 102  98  99 101",
    "· ·   ·   ·   ·   · 570 371 312 288",
    "· ·   ·   ·   ·   ·   ·   ·   ·   ·",
    "· ·   ·   ·   ·   ·   ·   ·   ·   ·",
    "· ·   ·   ·   ·   ·   ·   ·   ·   ·",
    "· ·   ·   ·   ·   ·   ·   ·   ·   ·",
];

const EX410_PRED: [&str; 8] = [
    "· · · 19  7  5 3  3 2 2 2 2 2",
    "· · · 22  8  5 4  3 2 2 2 2 2",
    "· · · 28  8  5 4  3 3 2 2 2 2",
    "· · · 46 10  6 4  3 3 2 2 2 2",
    "· · ·  · 13  7 5  4 3 3 2 2 2",
    "· · ·  · 28 10 6  4 4 3 3 2 2",
    "· · ·  ·  ·  · 19 10 7 5 4 4 3",
    "· · ·  ·  ·  · ·  · · · · · ·",
];

fn ex46() -> ProperTerm {
    ProperTerm::from_json(&fixture("ex46.json")).expect("valid term")
}

fn ex410() -> LeDecomposition {
    LeDecomposition::from_json(&fixture("ex410.json")).expect("valid decomposition")
}

fn ex54() -> ContractionData {
    ContractionData::from_json(&fixture("ex54.json")).expect("valid contraction data")
}

fn telescoper() -> &'static Result<TelescoperCertificate, String> {
    static CERT: OnceLock<Result<TelescoperCertificate, String>> = OnceLock::new();
    CERT.get_or_init(|| core(minimal_telescoper(&ex46(), 2, 6, &Budget::unlimited())))
}

fn lclm_table() -> Outcome {
    let start = Instant::now();
    let shapes = core(LclmShapes::new(vec![Shape::new(2, 1, 1), Shape::new(1, 2, 1)]))?;
    let out = check_table(&shapes, &EX32_PRED)?;
    for r in 0..=10 {
        for d in 0..=10 {
            let (a, b) = (min_height(&shapes, r, d, DEFAULT_H_CAP), min_height(&shapes, d, r, DEFAULT_H_CAP));
            ensure(a.as_ref().ok() == b.as_ref().ok(), || format!("asymmetric at ({r}, {d})"))?;
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(out)
}

fn hyper_table() -> Outcome {
    let start = Instant::now();
    let params = ex46().params();
    let want = HyperParams { theta_x: 0, theta_y: 0, theta_k: 1, mu: 1, nu: 2, xi: 2, eta: 3 };
    ensure(params == want, || format!("parameters {params:?}"))?;
    let out = check_table(&params, &EX46_PRED)?;
    within(Duration::from_secs(1), start)?;
    Ok(out)
}

fn rat_table() -> Outcome {
    let start = Instant::now();
    let out = check_table(&ex410().params(), &EX410_PRED)?;
    within(Duration::from_secs(1), start)?;
    Ok(out)
}

fn minimal_telescoper_shape() -> Outcome {
    let cert = telescoper().as_ref().map_err(Clone::clone)?;
    ensure(cert.verify(), || "certificate identity fails".into())?;
    let shape = core(cert.l.shape())?;
    ensure(shape == Shape::new(2, 5, 9), || format!("shape {shape}"))?;
    let want = parse_poly("(2*x + y^2 + y)*(x^2 + x*y^2 + x*y + y^3 - 1)").expect("polynomial");
    let lc = cert.l.lc().expect("nonzero").normalize();
    ensure(lc == want.normalize(), || format!("leading coefficient {lc}"))?;
    Ok(format!("shape {shape}"))
}

fn contraction_cells() -> Outcome {
    let l = &telescoper().as_ref().map_err(Clone::clone)?.l;
    let ideal = core(ContractionIdeal::from_poly_op(l, 8))?;
    let budget = Budget::from_env();
    for ((r, d), want) in [((2, 5), 9), ((3, 5), 7), ((5, 5), 6), ((7, 5), 5), ((3, 8), 7)] {
        let got = core(ideal.actual_min_height(r, d, 40, &budget))?;
        ensure(got == Some(want), || format!("(r, d) = ({r}, {d}): expected {want}, got {got:?}"))?;
    }
    let elem = core(ideal.shape_search(3, 8, 8, &budget))?.ok_or("no element of shape (3, 8, 8)")?;
    ensure(core(elem.shape())?.fits_in(&Shape::new(3, 8, 8)), || "element exceeds (3, 8, 8)".into())?;
    Ok("5 cells and a (3, 8, 8) element".into())
}

fn rat_actual() -> Outcome {
    let dec = ex410();
    let ideal = core(ContractionIdeal::new(&core(dec.telescoper_generator())?, 12))?;
    let budget = Budget::from_env();
    let cell = |r, d| core(rat_actual_min_height(&dec, &ideal, r, d, 40, &budget));
    for (r, d) in [(6, 1), (12, 7)] {
        let got = cell(r, d)?;
        ensure(got == Some(1), || format!("(r, d) = ({r}, {d}): expected 1, got {got:?}"))?;
    }
    for r in 0..=5 {
        for d in 0..=1 {
            let got = cell(r, d)?;
            ensure(got.is_none(), || format!("(r, d) = ({r}, {d}): expected absent, got {got:?}"))?;
        }
    }
    Ok("2 present, 12 absent".into())
}

/// Boundary points `(r, d, h)` of the common-multiple region with `r, d ≤ 8`
/// at which every input operator fits.
fn lclm_boundary(shapes: &[Shape]) -> Vec<Shape> {
    let region = LclmShapes::new(shapes.to_vec()).expect("nonempty");
    let max = |f: fn(&Shape) -> u32| shapes.iter().map(f).max().unwrap_or(0);
    let (rl, dl, hl) = (max(|s| s.r), max(|s| s.d), max(|s| s.h));
    let mut out = Vec::new();
    for r in rl..=8 {
        for d in dl..=8 {
            if let Some(h) = min_height(&region, r, d, DEFAULT_H_CAP).expect("evaluates") {
                if h >= hl {
                    out.push(Shape::new(r, d, h));
                }
            }
        }
    }
    out
}

fn clm_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let budget = Budget::unlimited();
    let mut points = 0;
    for pair in 0..25 {
        let kind = if pair % 2 == 0 { AlgebraKind::ShiftX } else { AlgebraKind::DiffX };
        let shapes: Vec<Shape> =
            (0..2).map(|_| Shape::new(rng.gen_range(1..=2), rng.gen_range(0..=2), rng.gen_range(0..=2))).collect();
        let ops: Vec<PolyOp> = shapes.iter().map(|&s| OrePoly::random(kind, s, 5, &mut rng)).collect();
        let boundary = lclm_boundary(&shapes);
        for _ in 0..3 {
            let target = boundary[rng.gen_range(0..boundary.len())];
            let problem = core(ClmProblem::new(ops.clone(), target))?;
            let (l, _) = core(clm_by_ansatz(&problem, &budget))?
                .ok_or_else(|| format!("pair {pair} {shapes:?}: no common multiple at {target}"))?;
            ensure(core(l.shape())?.fits_in(&target), || format!("pair {pair}: multiple exceeds {target}"))?;
            for op in &ops {
                let (_, rem) = core(l.to_ratfun().right_divrem(&op.to_ratfun()))?;
                ensure(rem.is_zero(), || format!("pair {pair}: nonzero remainder at {target}"))?;
            }
            points += 1;
        }
    }
    Ok(format!("{points} boundary points over 25 pairs"))
}

fn telescoper_soundness() -> Outcome {
    let term = ex46();
    let params = term.params();
    let budget = Budget::unlimited();
    let mut n = 0;
    for (r, d) in [(2, 8), (2, 12), (3, 7), (3, 12), (4, 6), (4, 12)] {
        let h = core(min_height(&params, r, d, DEFAULT_H_CAP))?.ok_or_else(|| format!("({r}, {d}) outside the region"))?;
        let cert = core(telescoper_search(&term, r, d, h, 0, &budget))?.ok_or_else(|| format!("no telescoper at ({r}, {d}, {h})"))?;
        ensure(cert.verify(), || format!("certificate fails at ({r}, {d}, {h})"))?;
        ensure(core(cert.l.shape())?.fits_in(&Shape::new(r, d, h)), || format!("telescoper exceeds ({r}, {d}, {h})"))?;
        let bounds = params.y_bounds(r, d, h);
        for (v, b) in [Var::X, Var::Y, Var::K].into_iter().zip(bounds) {
            let deg = cert.y.deg(v).finite().map_or(-1, i64::from);
            ensure(deg <= b, || format!("deg_{} Y = {deg} exceeds {b} at ({r}, {d}, {h})", v.name()))?;
        }
        n += 1;
    }
    Ok(format!("{n} region points"))
}

fn contraction_soundness() -> Outcome {
    let data = ex54();
    let params = core(contraction_params(&data))?;
    let ideal = core(ContractionIdeal::from_poly_op(&data.l, 5))?;
    let budget = Budget::unlimited();
    let mut n = 0;
    for (r, d) in [(3, 5), (3, 8), (4, 6), (4, 10), (5, 7), (5, 10)] {
        let h = core(min_height(&params, r, d, DEFAULT_H_CAP))?.ok_or_else(|| format!("({r}, {d}) outside the region"))?;
        let elem = core(ideal.shape_search(r, d, h, &budget))?.ok_or_else(|| format!("no element at ({r}, {d}, {h})"))?;
        ensure(core(ideal.contains(&elem))?, || format!("element at ({r}, {d}, {h}) is not in the ideal"))?;
        ensure(core(elem.shape())?.fits_in(&Shape::new(r, d, h)), || format!("element exceeds ({r}, {d}, {h})"))?;
        n += 1;
    }
    Ok(format!("{n} region points"))
}

fn stabilizes(data: &ContractionData) -> Result<(), String> {
    let top = data.witnesses.iter().filter_map(|w| w.big_p.order()).max().unwrap_or(0);
    let c = syzygy_dims(data, top + 2);
    ensure(c[top..].windows(2).all(|w| w[0] == w[1]), || format!("syzygy dimensions {c:?} move after {top}"))
}

fn degree_bounds() -> Outcome {
    stabilizes(&ex54())?;
    let shift = |src: &str| parse_operator(AlgebraKind::ShiftX, src).expect("operator");
    let l = shift("(x + y - 1)*(x + 2*y - 1)*S + (x + y - 1)*(x + 2*y - 1)");
    let two = core(ContractionData::from_elements(l, &[shift("(x + 2*y)*(S^2 + S)"), shift("(x + y)*(S^2 + S)")]))?;
    stabilizes(&two)?;

    let term = ex46();
    let params = term.params();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut checks = 0;
    for r in 0..=4u32 {
        let (basis, q, rr) = term.build_pqr(r);
        for _ in 0..4 {
            let (d, h) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let c = OrePoly::random(AlgebraKind::ShiftX, Shape::new(r, d, h), 7, &mut rng);
            let p = c.coeffs().iter().zip(&basis).fold(MPoly::zero(), |acc, (ci, b)| acc.add(&ci.mul(b)));
            let (tx, ty, tk) = (params.theta_x as i64, params.theta_y as i64, params.theta_k as i64);
            let (mu, xi) = (params.mu as i64, params.xi as i64);
            let r64 = i64::from(r);
            let caps = [i64::from(d) + tx + r64 * mu, i64::from(h) + ty + r64 * xi, tk + r64 * mu];
            let within_caps = |f: &odh_core::Poly, what: &str| -> Result<(), String> {
                for (v, cap) in [Var::X, Var::Y, Var::K].into_iter().zip(caps) {
                    let deg = f.deg(v).finite().map_or(-1, i64::from);
                    ensure(deg <= cap, || format!("r = {r}: deg_{} of {what} is {deg} > {cap}", v.name()))?;
                }
                Ok(())
            };
            within_caps(&p, "P")?;
            let yb = params.y_bounds(r, d, h);
            if yb.iter().all(|&b| b >= 0) {
                let mut terms = Vec::new();
                for i in 0..=yb[0] as u32 {
                    for j in 0..=yb[1] as u32 {
                        for k in 0..=yb[2] as u32 {
                            terms.push((Monomial::new(i, j, k), Rat::from_integer(rng.gen_range(-5i64..=5).into())));
                        }
                    }
                }
                let y = MPoly::from_terms(terms);
                let image = q.mul(&y.shift(Var::K)).sub(&rr.mul(&y));
                within_caps(&image, "Q·S_k(Y) − R·Y")?;
            }
            checks += 1;
        }
    }
    Ok(format!("2 syzygy sequences, {checks} degree checks"))
}

const LAW_CASES: u32 = 256;

fn law_failure<T: std::fmt::Debug>(law: &'static str) -> impl Fn(proptest::test_runner::TestError<T>) -> String {
    move |e| format!("{law}: {e}")
}

fn algebra_laws() -> Outcome {
    use common::*;
    use proptest::prelude::*;
    let mut runner = TestRunner::new(Config { cases: LAW_CASES, failure_persistence: None, ..Config::default() });
    let max = Shape::new(2, 2, 2);
    runner
        .run(&(kind_strategy(), any::<[u64; 3]>(), op_strategy(max), op_strategy(max), op_strategy(max)), |(k, s, a, b, c)| {
            ore_mul_associates(k, s, [a.2, b.2, c.2])
        })
        .map_err(law_failure("associativity"))?;
    runner
        .run(&(kind_strategy(), any::<[u64; 2]>(), op_strategy(Shape::new(4, 2, 1)), op_strategy(Shape::new(2, 1, 1))), |(k, s, a, b)| {
            right_division_round_trips(k, s, [a.2, b.2])
        })
        .map_err(law_failure("right division"))?;
    runner
        .run(&(small_poly(), small_poly(), -5i64..=5), |(p, q, t)| shift_is_degree_preserving_automorphism(&p, &q, t))
        .map_err(law_failure("shift"))?;
    runner.run(&small_matrix(), |m| rank_plus_nullity(&m)).map_err(law_failure("rank-nullity"))?;
    Ok(format!("4 laws × {LAW_CASES} cases"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 common-multiple region table", lclm_table),
        ("2 telescoper region table", hyper_table),
        ("3 rational telescoper region table", rat_table),
        ("4 minimal telescoper", minimal_telescoper_shape),
        ("5 contraction actual heights", contraction_cells),
        ("6 rational actual heights", rat_actual),
        ("7 region soundness", || {
            let parts = [clm_soundness()?, telescoper_soundness()?, contraction_soundness()?, degree_bounds()?];
            Ok(parts.join("; "))
        }),
        ("8 algebra laws", algebra_laws),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({t:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({t:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
