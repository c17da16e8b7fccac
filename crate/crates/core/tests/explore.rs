use means_lab_core::explore::{
    bracket_ratio_crossing, exponent_profile, hunt, min_margin_over_ratio, scan, CellSign, ExponentGrid,
    HuntOptions, HuntOutcome, MinOptions, RowClass, ScanConfig,
};
use means_lab_core::oracle::{certify_sign, CertifyOptions};
use means_lab_core::{ExploreError, InequalityId, SignOutcome};

fn certify() -> CertifyOptions {
    CertifyOptions::default()
}

#[test]
fn product_scan_is_nonnegative() {
    let cfg = ScanConfig::new(InequalityId::Eq2Product, 1.0, 100.0, 50);
    let map = scan(&cfg, certify()).unwrap();
    assert!(map.complete);
    assert_eq!(map.cells.len(), 50);
    assert_eq!(map.cells[0].sign, CellSign::Zero);
    assert!(map.cells[0].certified.unwrap().is_exact_zero());
    assert!(map.cells[1..].iter().all(|c| c.sign == CellSign::Positive));
}

#[test]
fn conjecture_scan_changes_sign() {
    let cfg = ScanConfig::new(InequalityId::Eq6Conj, 1.0, 1000.0, 4);
    let map = scan(&cfg, certify()).unwrap();
    let signs: Vec<_> = map.cells.iter().map(|c| c.sign).collect();
    assert_eq!(
        signs,
        [CellSign::Zero, CellSign::Positive, CellSign::Negative, CellSign::Negative]
    );
    assert!((map.cells[1].margin - 0.46768647906351565248).abs() < 1e-13);
}

#[test]
fn integer_power_scan_rows() {
    let cfg = ScanConfig::new(InequalityId::Eq1Power, 1.0, 1e4, 30)
        .with_exponents(ExponentGrid { lo: -1.0, hi: 1.0, steps: 3 });
    let map = scan(&cfg, certify()).unwrap();
    assert_eq!(map.cells.len(), 90);
    for (i, c) in map.cells.iter().enumerate() {
        assert_eq!(c.n, Some([-1.0, 0.0, 1.0][i / 30]));
        assert!(c.margin >= 0.0, "{c:?}");
        assert_ne!(c.sign, CellSign::Negative);
    }
}

#[test]
fn hunt_finds_conjecture_counterexample() {
    let cfg = ScanConfig::new(InequalityId::Eq6Conj, 1.0, 1000.0, 64).with_seed(42);
    let out = hunt(&cfg, &HuntOptions::default()).unwrap();
    let w = *out.witness().expect("witness");
    assert!(w.ratio.t > 10.0 && w.ratio.t < 100.0, "{w:?}");
    assert_eq!(w.certified.outcome, SignOutcome::Negative);
    assert!(w.margin < 0.0);
    // Re-certify at twice the recorded precision.
    let again = certify_sign(
        w.id,
        w.pair(),
        w.exponent,
        CertifyOptions {
            start_digits: 2 * w.digits(),
            cap_digits: 4 * w.digits(),
        },
    )
    .unwrap();
    assert_eq!(again.outcome, SignOutcome::Negative);
    // Deterministic for a fixed seed.
    assert_eq!(hunt(&cfg, &HuntOptions::default()).unwrap(), out);
}

#[test]
fn hunt_near_diagonal_finds_nothing() {
    let cfg = ScanConfig::new(InequalityId::Eq6Conj, 1.0, 10.0, 64).with_seed(1);
    match hunt(&cfg, &HuntOptions::default()).unwrap() {
        HuntOutcome::NotFound { min, .. } => {
            let m = min.unwrap();
            assert!(m.margin >= 0.0);
        }
        HuntOutcome::Found(w) => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn hunt_finds_half_power_counterexample() {
    let cfg = ScanConfig::new(InequalityId::Eq1Power, 1.01, 2.0, 64)
        .with_exponents(ExponentGrid::single(0.5))
        .with_seed(3);
    let w = *hunt(&cfg, &HuntOptions::default()).unwrap().witness().unwrap();
    assert!(w.ratio.t >= 1.01 && w.ratio.t <= 2.0);
    assert_eq!(w.exponent, Some(0.5));
    assert_eq!(w.certified.outcome, SignOutcome::Negative);
}

#[test]
fn hunt_on_proved_inequalities_finds_nothing() {
    let opts = HuntOptions::default();
    for id in [
        InequalityId::Eq2Product,
        InequalityId::Eq4Sandor,
        InequalityId::ChainEq10,
        InequalityId::PLeI,
    ] {
        let cfg = ScanConfig::new(id, 1.0, 1e8, 200).with_seed(9);
        assert!(hunt(&cfg, &opts).unwrap().witness().is_none(), "{id}");
    }
    let cfg = ScanConfig::new(InequalityId::Eq1Power, 1.0, 1e8, 200)
        .with_exponents(ExponentGrid { lo: -10.0, hi: 10.0, steps: 21 })
        .with_seed(9);
    assert!(hunt(&cfg, &opts).unwrap().witness().is_none());
}

#[test]
fn bracket_localizes_crossing() {
    let b = bracket_ratio_crossing(InequalityId::Eq6Conj, None, 10.0, 100.0, 1e-6, certify()).unwrap();
    assert!(b.log_width() <= 1e-6);
    assert!(b.t_lo > 10.0 && b.t_hi < 100.0);
    assert_eq!(b.sign_lo.outcome, SignOutcome::Positive);
    assert_eq!(b.sign_hi.outcome, SignOutcome::Negative);
    assert!((b.t_lo - 82.0154).abs() < 1e-3, "{b:?}");
}

#[test]
fn bracket_half_power_region_end() {
    let b = bracket_ratio_crossing(InequalityId::Eq1Power, Some(0.5), 1.22, 1e6, 1e-6, certify()).unwrap();
    assert_eq!(b.sign_lo.outcome, SignOutcome::Negative);
    assert_eq!(b.sign_hi.outcome, SignOutcome::Positive);
    assert!(b.t_lo > 100.0 && b.t_hi < 1e4);
}

#[test]
fn bracket_rejects_same_sign() {
    assert_eq!(
        bracket_ratio_crossing(InequalityId::Eq6Conj, None, 2.0, 5.0, 1e-6, certify()),
        Err(ExploreError::SameSign)
    );
}

#[test]
fn minimum_of_product_is_on_diagonal() {
    let m = min_margin_over_ratio(InequalityId::Eq2Product, None, 1.0, 1e6, MinOptions::default()).unwrap();
    assert_eq!(m.t, 1.0);
    assert_eq!(m.margin, 0.0);
    assert!(m.certified.unwrap().is_exact_zero());
}

#[test]
fn minimum_of_power_gaps() {
    let open = MinOptions {
        open_lo: true,
        ..MinOptions::default()
    };
    let m = min_margin_over_ratio(InequalityId::Eq1Power, Some(0.5), 1.0, 1e3, open).unwrap();
    assert!(m.margin < 0.0 && m.t > 1.0);
    assert_eq!(m.certified.unwrap().outcome, SignOutcome::Negative);
    let m = min_margin_over_ratio(InequalityId::Eq1Power, Some(-0.5), 1.0, 1e3, open).unwrap();
    assert!(m.margin >= 0.0);
}

#[test]
fn exponent_profile_classes() {
    let ns = [-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
    let opts = MinOptions {
        open_lo: true,
        ..MinOptions::default()
    };
    let p = exponent_profile(&ns, 1.0, 1e6, opts).unwrap();
    assert_eq!(p.rows.len(), ns.len());
    for row in &p.rows {
        let expected = if row.n > 0.0 && row.n < 1.0 {
            RowClass::Fails
        } else {
            RowClass::HoldsOnGrid
        };
        assert_eq!(row.class, expected, "{row:?}");
        assert!(row.t_at_min > 1.0);
    }
}
