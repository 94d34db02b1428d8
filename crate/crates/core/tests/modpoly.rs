use proptest::prelude::*;
use singinv::curvedata::LevelRegistry;
use singinv::exactalg::{IntPoly, YLinearPoly};
use singinv::fixtures::appendix_a;
use singinv::modpoly::*;
use singinv::Error;

fn reg() -> &'static LevelRegistry {
    LevelRegistry::global()
}

#[test]
fn appendix_a_reproduced() {
    let mut bad = Vec::new();
    for e in appendix_a().unwrap() {
        match pq_for_level(reg(), e.level, e.m) {
            Ok((p, q)) if p == e.p && q == e.q => {}
            Ok(_) => bad.push((e.level, e.m, "mismatch".to_string())),
            Err(err) => bad.push((e.level, e.m, err.to_string())),
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn reduction_agrees_with_direct_substitution() {
    for (level, m) in [(37, 2), (37, 7), (141, 5), (210, 11), (238, 3)] {
        let rec = reg().record(level, 600).unwrap();
        let (p, q) = pq_extract(&rec, m).unwrap();
        let direct = phi_substituted_series(&rec, m, 6).unwrap();
        let back = expand_xy(&YLinearPoly::new(p, q), &rec, 6).unwrap();
        assert!(back.sub(&direct).unwrap().is_zero(), "N={level} m={m}");
    }
}

#[test]
fn reduce_rejects_pole_order_one() {
    let rec = reg().record(37, 100).unwrap();
    let s = singinv::ZSeries::from_i64(-1, &[1, 0, 0], 2);
    assert!(matches!(reduce_to_xy(&s, &rec), Err(Error::PoleOrderOne)));
    let s = singinv::ZSeries::from_i64(1, &[1, 0], 3);
    assert!(matches!(reduce_to_xy(&s, &rec), Err(Error::Remainder(1))));
}

#[test]
fn preconditions() {
    assert!(matches!(pq_for_level(reg(), 37, 4), Err(Error::Precondition(_))));
    assert!(matches!(pq_for_level(reg(), 58, 2), Err(Error::Precondition(_))));
    assert!(matches!(pq_for_level(reg(), 36, 2), Err(Error::UnknownLevel(36))));
}

#[test]
fn omega_counts() {
    // psi(m) = m prod_{p | m} (1 + 1/p)
    for m in 1u32..60 {
        let mut want = m as u64;
        for p in singinv::arith::prime_divisors(m as u64) {
            want = want / p * (p + 1);
        }
        assert_eq!(psi(m) as u64, want, "m={m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pq_shape(idx in 0usize..38, mi in 0usize..4) {
        let level = singinv::curvedata::GENUS_ONE_LEVELS[idx];
        let m = [2u32, 3, 5, 7][mi];
        prop_assume!(level % m != 0);
        let (p, q) = pq_for_level(reg(), level, m).unwrap();
        let sigma = sigma1_plus(m) as usize;
        prop_assert_eq!(p.degree(), Some(sigma));
        prop_assert_eq!(p.lead().magnitude().clone(), 1u32.into());
        prop_assert!(q.degree().map_or(true, |d| d + 2 <= sigma));
    }

    #[test]
    fn expand_reduce_roundtrip(p in prop::collection::vec(-50i64..50, 0..5),
                               q in prop::collection::vec(-50i64..50, 0..4),
                               idx in 0usize..38) {
        let level = singinv::curvedata::GENUS_ONE_LEVELS[idx];
        let rec = reg().record(level, 100).unwrap();
        let f = YLinearPoly::new(IntPoly::from_i64(&p), IntPoly::from_i64(&q));
        let s = expand_xy(&f, &rec, 4).unwrap();
        prop_assert_eq!(reduce_to_xy(&s, &rec).unwrap(), f);
    }
}
