use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn header() -> String {
    std::fs::read_to_string(crate_dir().join("include/qcoherence.h")).expect("header is generated by build.rs")
}

#[test]
fn header_declares_the_api() {
    let h = header();
    assert!(h.starts_with("#ifndef QCOHERENCE_H"));
    for decl in [
        "typedef struct QcState QcState;",
        "typedef struct QcChannel QcChannel;",
        "QC_STATUS_OK = 0",
        "QC_STATUS_INVALID_STATE = 4",
        "QC_STATUS_INVALID_CHANNEL = 5",
        "QC_MEASURE_REL_ENTROPY = 0",
        "const char *qc_last_error_message(void);",
        "enum QcStatus qc_state_from_json(const char *json, struct QcState **out);",
        "void qc_state_free(struct QcState *state);",
        "void qc_string_free(char *s);",
        "enum QcStatus qc_channel_from_json(const char *json, struct QcChannel **out);",
        "enum QcStatus qc_power(const struct QcChannel *channel, const char *request, char **out);",
    ] {
        assert!(h.contains(decl), "missing {decl}");
    }
}

/// `target/<profile>`, found from the test executable's location.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib_dir = profile_dir();
    assert!(lib_dir.join("libqcoherence_ffi.so").exists() || lib_dir.join("libqcoherence_ffi.dylib").exists());
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&compiler)
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .args(["-lqcoherence_ffi", "-lm", "-o"])
        .arg(&exe)
        .status();
    let status = match status {
        Ok(s) => s,
        Err(e) => panic!("C compiler {compiler:?} not runnable: {e}"),
    };
    assert!(status.success(), "compiling the C smoke test failed");
    let run = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).env("DYLD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
