//! Running JSON jobs in process, as the `cayley` binary does.
use cayley_analysis::cli::{render, run_job_text};
use cayley_analysis::selftest::{self, SelftestOptions};

fn main() {
    let jobs = [
        r#"{"command":"eval","level":2,"expression":"e1*e2"}"#,
        r#"{"command":"zerodiv","level":4}"#,
        r#"{"command":"taylor","level":3,"expression":"1 + z^2","count":3}"#,
        r#"{"command":"eval","level":3,"expression":"(z-e1)^-1","point":"e1"}"#,
    ];
    for job in jobs {
        let (code, v) = run_job_text(job);
        print!("exit {code}: {}", render(&v));
    }
    let report = selftest::run(&SelftestOptions::default());
    print!("{}", report.table());
}
