use hharmonic::validation::selftest;

#[test]
fn every_family_passes() {
    let report = selftest(42);
    for f in &report.families {
        println!(
            "{:<48} {:>3}/{:<3} worst {:.2e} {}",
            f.name,
            f.passed,
            f.total,
            f.worst_ratio,
            f.first_failure.as_deref().unwrap_or("")
        );
    }
    assert!(report.all_passed());
}

#[test]
fn report_is_reproducible() {
    let a = format!("{:?}", selftest(7));
    let b = format!("{:?}", selftest(7));
    assert_eq!(a, b);
}
