//! Fixtures and randomized law checks shared by the integration tests and
//! the acceptance runner.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use odh_core::linalg::Matrix;
use odh_core::{AlgebraKind, MPoly, OrePoly, Poly, PolyOp, Rat, Shape, Var};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> String {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Parses a table written with rows of descending `d`; `·` marks an absent cell.
pub fn parse_table(rows: &[&str]) -> Vec<Vec<Option<u32>>> {
    let mut out: Vec<Vec<Option<u32>>> = rows
        .iter()
        .map(|row| row.split_whitespace().map(|t| if t == "·" { None } else { Some(t.parse().expect("cell")) }).collect())
        .collect();
    out.reverse();
    out
}

pub fn kind_strategy() -> impl Strategy<Value = AlgebraKind> {
    prop_oneof![Just(AlgebraKind::ShiftX), Just(AlgebraKind::DiffX)]
}

/// Random operator of exactly the given shape, drawn from a seed.
pub fn op_strategy(max: Shape) -> impl Strategy<Value = (AlgebraKind, u64, Shape)> {
    (kind_strategy(), any::<u64>(), 0..=max.r, 0..=max.d, 0..=max.h).prop_map(|(k, seed, r, d, h)| (k, seed, Shape::new(r, d, h)))
}

pub fn random_op(kind: AlgebraKind, shape: Shape, seed: u64) -> PolyOp {
    OrePoly::random(kind, shape, 5, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..4, 0u32..3, 0u32..2), -6i64..=6), 0..6).prop_map(|terms| {
        MPoly::from_terms(terms.into_iter().map(|((a, b, c), v)| (odh_core::Monomial::new(a, b, c), Rat::from_integer(v.into()))))
    })
}

pub fn small_matrix() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (1usize..6, 1usize..7).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), n), m)
            .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(a, b)| Rat::new(a.into(), b.into())).collect()).collect())
    })
}

pub fn ore_mul_associates(kind: AlgebraKind, seeds: [u64; 3], shapes: [Shape; 3]) -> Result<(), TestCaseError> {
    let [a, b, c] = [0, 1, 2].map(|i| random_op(kind, shapes[i], seeds[i]));
    let left = a.mul(&b).unwrap().mul(&c).unwrap();
    let right = a.mul(&b.mul(&c).unwrap()).unwrap();
    prop_assert_eq!(left, right);
    Ok(())
}

pub fn right_division_round_trips(kind: AlgebraKind, seeds: [u64; 2], shapes: [Shape; 2]) -> Result<(), TestCaseError> {
    let a = random_op(kind, shapes[0], seeds[0]).to_ratfun();
    let b = random_op(kind, shapes[1], seeds[1]).to_ratfun();
    let (q, r) = a.right_divrem(&b).unwrap();
    prop_assert_eq!(q.mul(&b).unwrap().add(&r), a);
    prop_assert!(r.order().map_or(true, |o| Some(o) < b.order()));
    Ok(())
}

pub fn shift_is_degree_preserving_automorphism(p: &Poly, q: &Poly, t: i64) -> Result<(), TestCaseError> {
    let s = |f: &Poly| f.shift_by(Var::X, t);
    prop_assert_eq!(s(&p.mul(q)), s(p).mul(&s(q)));
    prop_assert_eq!(s(&p.add(q)), s(p).add(&s(q)));
    prop_assert_eq!(s(p).shift_by(Var::X, -t), p.clone());
    for v in Var::ALL {
        prop_assert_eq!(s(p).deg(v), p.deg(v));
    }
    Ok(())
}

pub fn rank_plus_nullity(rows: &[Vec<Rat>]) -> Result<(), TestCaseError> {
    let n = rows[0].len();
    let m = Matrix::from_rows(n, rows.to_vec());
    let kernel = m.nullspace();
    prop_assert_eq!(m.rank() + kernel.len(), n);
    for v in &kernel {
        prop_assert!(m.mul_vec(v).iter().all(|x| *x == Rat::from_integer(0.into())));
    }
    prop_assert_eq!(odh_core::linalg::rank(&m), m.rank());
    Ok(())
}
