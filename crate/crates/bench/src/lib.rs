//! Shared fixtures for the benchmarks.

use hlmoments::identities::CaseParams;
use hlmoments::{parse_partition, IdentityCase, IdentityId, Partition, Strategy};

pub fn partition(text: &str) -> Partition {
    parse_partition(text).expect("valid fixture partition")
}

/// One representative case per identity family, sized to run in milliseconds.
pub fn identity_cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase::new(IdentityId::Qbin, Strategy::SymbolicExact, CaseParams { n: Some(8), ..Default::default() }),
        IdentityCase::new(
            IdentityId::UmoyAbelian,
            Strategy::TruncatedSeries,
            CaseParams { lambda: Some("2,1".into()), ell: Some(2), trunc: Some(8), ..Default::default() },
        ),
        IdentityCase::new(IdentityId::Csq, Strategy::SymbolicExact, CaseParams { n: Some(2), k: Some(1), ..Default::default() }),
    ]
}
