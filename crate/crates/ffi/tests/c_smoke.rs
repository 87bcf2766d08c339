//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "s3_sga.h"

int main(void) {
    S3Representation *rep = NULL;
    if (s3_representation_new(4, &rep) != S3_STATUS_OK) return 10;
    double e[5];
    if (s3_spectrum(rep, e, 5) != S3_STATUS_OK) return 11;
    for (int n = 0; n <= 4; n++) {
        if (fabs(e[n] - n * (n + 2)) > 1e-10) return 12;
    }
    char *json = NULL;
    if (s3_verify_json(rep, 2.0, &json) != S3_STATUS_OK) return 13;
    s3_string_free(json);
    s3_representation_free(rep);
    if (s3_representation_new(4, NULL) != S3_STATUS_NULL_POINTER) return 14;
    if (s3_last_error() == NULL) return 15;
    double x0[4] = {1, 0, 0, 0}, p0[4] = {0, 1, 0, 0};
    S3Trajectory *traj = NULL;
    if (s3_trajectory_new(x0, p0, 3.0, 0.001, 0, &traj) != S3_STATUS_OK) return 16;
    double row[S3_SAMPLE_WIDTH];
    if (s3_trajectory_sample(traj, s3_trajectory_len(traj) - 1, row) != S3_STATUS_OK) return 17;
    if (fabs(row[0] - 3.0) > 1e-12) return 18;
    s3_trajectory_free(traj);
    printf("%.12f\n", s3_f_gamma(1.0) * s3_f_gamma(2.0));
    return 0;
}
"#;

/// The archive built alongside this test binary in `target/<profile>/deps`.
fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().join("libs3_sga_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let lib = static_lib();
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({e})");
            return;
        }
    };
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3.000000000000");
}
