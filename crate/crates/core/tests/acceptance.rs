use std::process::Command;
use std::time::Instant;

use cayley_analysis::selftest::{run_criterion, CriterionResult, Scale, SelftestOptions};

const BIN: &str = env!("CARGO_BIN_EXE_cayley");

fn cayley(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(BIN).args(args).output().expect("run cayley");
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// The in-process determinism check, plus the same through the binary and
/// a timed `cayley selftest`.
fn cli_criterion(mut c: CriterionResult) -> CriterionResult {
    let job = [
        "integrate",
        "--level",
        "3",
        "--expr",
        "z^-1",
        "--path",
        r#"{"kind":"circle","center":[0,0,0,0,0,0,0,0],"radius":1,"direction":[0,1,0,0,0,0,0,0]}"#,
        "--tol",
        "1e-6",
    ];
    let a = cayley(&job);
    let b = cayley(&job);
    let same = a == b && a.0 == 0;
    let t = Instant::now();
    let (st_code, st_out) = cayley(&["selftest"]);
    let secs = t.elapsed().as_secs_f64();
    let (st_code2, st_out2) = cayley(&["selftest"]);
    let st_same = st_out == st_out2 && st_code == st_code2;
    let (usage, _) = cayley(&["eval", "--level", "9", "--expr", "z"]);
    c.pass = c.pass && same && st_code == 0 && st_same && secs < 60.0 && usage == 1;
    c.detail = format!(
        "{}; binary integrate byte-identical: {same}; selftest exit {st_code} in {secs:.1}s, report byte-identical: {st_same}; level 9 exit {usage}",
        c.detail
    );
    c
}

fn main() {
    let opts = SelftestOptions {
        scale: Scale::Full,
        inject_sign_error: false,
    };
    let t = Instant::now();
    let mut failed = 0;
    for id in 1..=14 {
        let mut c = run_criterion(id, &opts);
        if id == 14 {
            c = cli_criterion(c);
        }
        if !c.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} ({}, {:.2}s): {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.seconds,
            c.detail
        );
    }
    println!("acceptance: {} of 14 passed in {:.1}s", 14 - failed, t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
