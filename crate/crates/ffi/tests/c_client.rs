use std::path::Path;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ballmap.h"

int main(void) {
    const char *json = "{\"n\":2,\"N\":2,\"model\":\"ball\",\"variables\":[\"z\",\"w\"],"
                       "\"components\":[{\"numerator\":\"z\"},{\"numerator\":\"w\"}],\"denominator\":\"1\"}";
    BallmapMap *m = NULL;
    if (ballmap_map_from_json(json, 0, &m) != BALLMAP_STATUS_OK) return 10;
    size_t n = 0, big = 0;
    uint32_t d = 0;
    if (ballmap_map_info(m, &n, &big, &d) != BALLMAP_STATUS_OK || n != 2 || big != 2 || d != 1) return 11;
    BallmapDecision *dec = NULL;
    if (ballmap_decide(m, 10, 0, &dec) != BALLMAP_STATUS_OK) return 12;
    BallmapVerdict v;
    ballmap_decision_verdict(dec, &v);
    if (v != BALLMAP_VERDICT_EQUIVALENT) return 13;
    if (strstr(ballmap_decision_json(dec), "\"equivalent\"") == NULL) return 14;
    ballmap_decision_free(dec);
    ballmap_map_free(m);
    if (ballmap_map_from_json("{", 0, &m) != BALLMAP_STATUS_PARSE_ERROR || ballmap_last_error() == NULL) return 15;
    printf("ok\n");
    return 0;
}
"#;

/// Builds the static library, then compiles and runs a C client against the generated header.
#[test]
fn c_client_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let st = Command::new(cargo)
        .args(["build", "-p", "ballmap-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(manifest)
        .status()
        .unwrap();
    assert!(st.success());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("client");
    let out = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(target.join("debug/libballmap_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
