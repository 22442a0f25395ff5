use qotto::analysis::{find_crossing, linspace, region_map, sweep_efficiency_vs_phot, sweep_xi_vs_tau, reference_state_check, SweepTable};
use qotto::otto::{eta_otto, stroke_oracle};
use qotto::{evaluate, xi, CyclePoint, Error, RampProtocol, Regime, ReservoirSpec};

fn proto(tau: f64) -> RampProtocol {
    RampProtocol::new(2000.0, 3600.0, tau).unwrap()
}

#[test]
fn oracle_and_closed_forms_agree_on_reference_cycle() {
    let p = proto(200e-6);
    let cold = ReservoirSpec::from_population(2000.0, 0.26).unwrap();
    let hot = ReservoirSpec::from_population(3600.0, 0.813).unwrap();
    let traced = stroke_oracle(&cold, &hot, &p).unwrap().result;
    let closed = evaluate(&CyclePoint::new(cold, hot, traced.xi).unwrap());
    for (a, b) in [(traced.work, closed.work), (traced.q_hot, closed.q_hot), (traced.q_cold, closed.q_cold)] {
        assert!((a - b).abs() <= 1e-9 * b.abs(), "{a} vs {b}");
    }
    assert_eq!(traced.regime, Regime::EngineSuperOtto);
    assert!(closed.efficiency.unwrap() > eta_otto(2000.0, 3600.0));
}

#[test]
fn fixture_entries_reproduced() {
    let report = reference_state_check(&proto(200e-6), 0.26, 0.813).unwrap();
    assert_eq!(report.pairs.len(), 4);
    assert!(report.pairs.iter().all(|p| p.entries_match()));
    assert!((report.xi - 0.1463).abs() < 1e-3);
}

#[test]
fn xi_decreases_from_sudden_quench() {
    let taus = [1e-12, 100e-6, 200e-6, 300e-6];
    let table = sweep_xi_vs_tau(&proto(200e-6), &taus).unwrap();
    let xs: Vec<f64> = table.numbers("xi").unwrap().into_iter().map(Option::unwrap).collect();
    assert!((xs[0] - 0.5).abs() < 1e-9);
    assert!(xs.windows(2).all(|w| w[0] > w[1]), "{xs:?}");
}

#[test]
fn sweeps_round_trip_through_csv() {
    let grid = linspace(0.55, 0.95, 9);
    let table = sweep_efficiency_vs_phot(0.261, &proto(200e-6), &[100e-6, 400e-6], &grid).unwrap();
    let back = SweepTable::from_csv(&table.to_csv()).unwrap();
    assert_eq!(back.columns, table.columns);
    assert_eq!(back.rows, table.rows);
}

#[test]
fn region_map_blanks_sit_below_crossing() {
    let crossing = find_crossing(0.261, 2000.0, 3600.0).unwrap().unwrap();
    let map = region_map(0.261, 2000.0, 3600.0, &linspace(0.51, 0.99, 25), &linspace(0.0, 0.5, 11)).unwrap();
    let mut blanks = 0;
    for row in &map.rows {
        if row[2].as_str() == Some("NotEngine") {
            blanks += 1;
            assert!(row[0].as_f64().unwrap() < crossing);
        }
    }
    assert!(blanks > 0);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(ReservoirSpec::from_population(3600.0, 1.5), Err(Error::Domain(_))));
    assert!(RampProtocol::new(3600.0, 2000.0, 1e-4).is_err());
    assert!(proto(1e-4).with_steps(10).is_err());
    let cold = ReservoirSpec::from_population(2000.0, 0.26).unwrap();
    let not_inverted = ReservoirSpec::from_population(3600.0, 0.5).unwrap();
    assert!(CyclePoint::new(cold, not_inverted, 0.1).is_err());
    assert!(matches!(xi(&proto(1.0)), Err(Error::Accuracy { .. })));
}
