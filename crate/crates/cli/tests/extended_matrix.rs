//! Broad parameter sweep beyond the default matrix. Slow in debug builds, so
//! it is ignored by default; run it with
//!
//! ```bash
//! cargo test -p dstar-cli --release --test extended_matrix -- --ignored
//! ```

use dstar_cli::config::{RunConfig, TriplePolicy};
use dstar_cli::{run_suite, violation_count};

fn verify_clean(p: u64, e: u32, n: u32, m: usize) {
    let config = RunConfig::new(p, e, n, m)
        .with_seed(11)
        .with_triples(TriplePolicy::Sampled { count: 2000 });
    let report = run_suite(&config).unwrap_or_else(|err| panic!("({p},{e},{n},{m}): {err}"));
    assert_eq!(
        violation_count(&report),
        0,
        "({p},{e},{n},{m}): {:?}",
        report
            .suites
            .iter()
            .flat_map(|s| s.violations.iter())
            .take(3)
            .collect::<Vec<_>>()
    );
}

#[test]
#[ignore = "minutes in debug mode; run with --release -- --ignored"]
fn extended_parameter_sweep() {
    // degenerate degree, genuine extensions, odd characteristic, deep levels
    for (p, e, n, m) in [
        (2, 1, 1, 3),
        (3, 1, 1, 2),
        (2, 2, 2, 2),
        (3, 1, 2, 3),
        (5, 1, 2, 2),
        (2, 1, 4, 2),
        (7, 1, 3, 1),
        (2, 1, 2, 4),
        (2, 1, 2, 5),
        (3, 2, 2, 2),
    ] {
        verify_clean(p, e, n, m);
    }
}
