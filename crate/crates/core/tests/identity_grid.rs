use hlmoments::identities::{run_suite, Manifest, Status};

#[test]
fn default_grid_passes() {
    let m = Manifest::builtin();
    let reports = run_suite(&m.select(&[]), None);
    for r in &reports {
        eprintln!("{:<14} {:?} {:>6} ms {:?} {:?}", r.case.id.name(), r.status, r.elapsed_ms, r.mismatch, r.error);
    }
    assert!(reports.iter().all(|r| r.status == Status::Pass));
}
