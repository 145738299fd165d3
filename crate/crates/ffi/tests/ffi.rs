use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lindblad_lab_ffi::*;

const SIGMA_MINUS: [f64; 8] = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
const MIXED: [f64; 8] = [0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0];

fn last_error() -> String {
    let p = lindblad_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn decay_model() -> *mut LindbladModelHandle {
    let mut model = ptr::null_mut();
    let status =
        unsafe { lindblad_model_new(2, ptr::null(), 0, SIGMA_MINUS.as_ptr(), 1, &mut model) };
    assert_eq!(status, LindbladStatus::Ok);
    model
}

#[test]
fn decay_rates_and_trajectory() {
    let model = decay_model();
    let (mut h, mut l, mut c) = (0.0, 0.0, 0.0);
    let mut kind = LindbladChannelKind::Unitary;
    unsafe {
        assert_eq!(
            lindblad_hilbert_rate(model, 0.0, &mut h),
            LindbladStatus::Ok
        );
        assert_eq!(
            lindblad_liouville_rate(model, 0.0, &mut l),
            LindbladStatus::Ok
        );
        assert_eq!(
            lindblad_cooling_rate(model, 0.0, &mut c),
            LindbladStatus::Ok
        );
        assert_eq!(
            lindblad_model_classify(model, &mut kind),
            LindbladStatus::Ok
        );
    }
    let r2 = 2f64.sqrt();
    assert!((h - 4.0).abs() < 1e-12);
    assert!((l - (1.0 + r2)).abs() < 1e-10);
    assert!((c - (r2 - 1.0)).abs() < 1e-10);
    assert_eq!(kind, LindbladChannelKind::General);

    let mut tr = ptr::null_mut();
    let mut len = 0;
    let mut obs = LindbladObservables {
        t: 0.0,
        purity: 0.0,
        purity_deviation: 0.0,
        renyi2: 0.0,
        vn_entropy: 0.0,
    };
    let mut rho = [0.0; 8];
    unsafe {
        assert_eq!(
            lindblad_integrate(model, MIXED.as_ptr(), 0.0, 2.0, 1e-3, 100, &mut tr),
            LindbladStatus::Ok
        );
        assert_eq!(lindblad_trajectory_len(tr, &mut len), LindbladStatus::Ok);
        assert_eq!(
            lindblad_trajectory_observables(tr, len - 1, &mut obs),
            LindbladStatus::Ok
        );
        assert_eq!(
            lindblad_trajectory_state(tr, len - 1, rho.as_mut_ptr()),
            LindbladStatus::Ok
        );
        lindblad_trajectory_free(tr);
        lindblad_model_free(model);
    }
    assert_eq!(len, 21);
    assert!((obs.t - 2.0).abs() < 1e-12);
    // Excited population (index 1) decays as e^{-t} / 2.
    assert!((rho[6] - 0.5 * (-2.0f64).exp()).abs() < 1e-9);
    assert!((obs.purity - (rho[0] * rho[0] + rho[6] * rho[6])).abs() < 1e-12);
}

#[test]
fn errors_are_reported() {
    let mut model = ptr::null_mut();
    let bad_json = CString::new("{\"dim\": 2,").unwrap();
    let status = unsafe { lindblad_model_from_json(bad_json.as_ptr(), &mut model) };
    assert_eq!(status, LindbladStatus::ParseError);
    assert!(last_error().contains("parse error"));

    let unknown = CString::new(
        r#"{"dim": 2, "lindbald": [], "initial_state": {"matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}, "grid": {"t_end": 1}}"#,
    )
    .unwrap();
    let status = unsafe { lindblad_model_from_json(unknown.as_ptr(), &mut model) };
    assert_eq!(status, LindbladStatus::SchemaError);

    // Non-Hermitian Hamiltonian.
    let status =
        unsafe { lindblad_model_new(2, SIGMA_MINUS.as_ptr(), 1, ptr::null(), 0, &mut model) };
    assert_eq!(status, LindbladStatus::ValidationError);
    assert!(model.is_null());

    let status = unsafe { lindblad_model_dim(ptr::null(), ptr::null_mut()) };
    assert_eq!(status, LindbladStatus::NullPointer);

    let model = decay_model();
    let mut tr = ptr::null_mut();
    let not_a_state = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let status =
        unsafe { lindblad_integrate(model, not_a_state.as_ptr(), 0.0, 1.0, 1e-3, 1, &mut tr) };
    assert_eq!(status, LindbladStatus::ValidationError);
    assert!(last_error().contains("trace"));
    unsafe { lindblad_model_free(model) };
}

#[test]
fn model_from_json() {
    let json = CString::new(
        r#"{"dim": 2, "lindblad": [{"op": "sigma_z", "scale": 0.5}],
            "initial_state": {"matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}, "grid": {"t_end": 1}}"#,
    )
    .unwrap();
    let mut model = ptr::null_mut();
    let (mut dim, mut l) = (0, 0.0);
    unsafe {
        assert_eq!(
            lindblad_model_from_json(json.as_ptr(), &mut model),
            LindbladStatus::Ok
        );
        assert_eq!(lindblad_model_dim(model, &mut dim), LindbladStatus::Ok);
        assert_eq!(
            lindblad_liouville_rate(model, 0.0, &mut l),
            LindbladStatus::Ok
        );
        lindblad_model_free(model);
    }
    assert_eq!(dim, 2);
    assert!((l - 1.0).abs() < 1e-12);
    assert!(lindblad_last_error_message().is_null());
}

/// Compiles `tests/c/smoke.c` against the generated header and the static library.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // `cargo test` builds only the rlib; the test profile shares its output directory.
    let status = Command::new(env!("CARGO"))
        .args([
            "build",
            "--profile",
            "test",
            "--lib",
            "-p",
            "lindblad-lab-ffi",
        ])
        .current_dir(&manifest)
        .status()
        .expect("cargo available");
    assert!(status.success());
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = deps.parent().unwrap().join("liblindblad_lab_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "smoke program exit code");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
