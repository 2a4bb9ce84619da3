use super::*;

#[test]
fn checks_compare_against_tolerance() {
    assert!(Check::at_most("a", 1e-9, 1e-8).pass);
    assert!(!Check::at_most("a", 1e-7, 1e-8).pass);
    assert!(!Check::at_most("a", f64::NAN, 1.0).pass);
    let fit = fit_slope(&[1.0, 2.0, 4.0], &[1.0, 4.0, 16.0]).unwrap();
    assert!(Check::slope("s", &fit, 2.2, 0.3).pass);
    assert!(!Check::slope("s", &fit, 1.0, 0.3).pass);
    assert!(Check::slope("s", &fit, 2.0, 0.3).to_string().starts_with("PASS s: slope 2.000"));
}

#[test]
fn curved_sweeps_drop_the_largest_eps() {
    let eps = EPS_SWEEP;
    let clean: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let (fit, dropped) = fit_sweep(&eps, &clean).unwrap();
    assert!(!dropped && (fit.slope - 2.0).abs() < 1e-12);

    // Saturation at the largest ε bends the profile.
    let mut bent = clean.clone();
    bent[0] = 1.0;
    let (fit, dropped) = fit_sweep(&eps, &bent).unwrap();
    assert!(dropped && (fit.slope - 2.0).abs() < 1e-12);
}

#[test]
fn csv_is_stable_and_round_trips() {
    let mut t = Table::new("x", &["eps", "value"]);
    t.push(vec![0.125, 1.0 / 3.0]);
    t.push(vec![1e-17, -2.5e300]);
    let mut a = Vec::new();
    t.write_csv(&mut a).unwrap();
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,value"));
    let back: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(back, t.rows);
    assert_eq!(t.column("value").unwrap()[0], 1.0 / 3.0);
}

#[test]
fn sample_points_are_reproducible() {
    let a = sample_points(3, 5, (-1.0, 1.0), (0.0, 2.0), 2);
    let b = sample_points(3, 5, (-1.0, 1.0), (0.0, 2.0), 2);
    assert_eq!(a.iter().map(|z| z.coords()).collect::<Vec<_>>(), b.iter().map(|z| z.coords()).collect::<Vec<_>>());
    assert!(a.iter().all(|z| z.d() == 2 && (0.0..2.0).contains(&z.coord(2))));
}

#[test]
fn small_leakage_sweep_runs() {
    let p = LeakageParams { n_points: 32, eps_list: vec![0.25, 0.125, 0.0625], order: 0, ..Default::default() };
    let r = leakage_scaling(&LeakageParams { window: Some(0.3), ..p }).unwrap();
    assert_eq!(r.table("leakage").unwrap().rows.len(), 3);
    assert_eq!(r.fits.len(), 1);
    let bad = LeakageParams { n_points: 32, window: Some(5.0), ..Default::default() };
    assert!(matches!(leakage_scaling(&bad), Err(crate::AdptError::Invalid(_))));
}

#[test]
fn time_adiabatic_report_passes() {
    let r = time_adiabatic(&TimeAdiabaticParams { times: vec![0.0, 0.7], ..Default::default() }).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
}
