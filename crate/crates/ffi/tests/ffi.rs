use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use symlseries_ffi::*;

fn last_error() -> String {
    let p = symls_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { symls_string_free(p) };
    s
}

#[test]
fn evaluate_through_handles() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(symls_f_4m(3, &mut f), SymStatus::Ok);
        assert_eq!(symls_function_modulus(f), 12);
        let method = CString::new("half_sum").unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(
            symls_eval(f, 3, method.as_ptr(), 256, ptr::null(), &mut v),
            SymStatus::Ok
        );
        // 29π³/864
        let want = 29.0 * std::f64::consts::PI.powi(3) / 864.0;
        assert!((symls_lvalue_re(v) - want).abs() < 1e-14);
        assert!(symls_lvalue_im(v).abs() < 1e-60);
        assert!(symls_lvalue_error_bound(v) < 1e-60);
        let mut json = ptr::null_mut();
        assert_eq!(symls_lvalue_to_json(v, &mut json), SymStatus::Ok);
        let j: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(j["method"], "half_sum");
        symls_lvalue_free(v);
        symls_function_free(f);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(symls_chi_2m(1, &mut f), SymStatus::InvalidArgument);
        assert!(last_error().contains("m"));
        assert!(f.is_null());

        assert_eq!(symls_chi_2m(2, ptr::null_mut()), SymStatus::NullPointer);

        assert_eq!(symls_chi_2m(2, &mut f), SymStatus::Ok);
        assert!(symls_last_error().is_null());
        let mut v = ptr::null_mut();
        let direct = CString::new("direct").unwrap();
        let tiny = CString::new("1e-40").unwrap();
        assert_eq!(
            symls_eval(f, 3, direct.as_ptr(), 128, tiny.as_ptr(), &mut v),
            SymStatus::Infeasible
        );
        let full = CString::new("theorem23").unwrap();
        assert_eq!(
            symls_eval(f, 4, full.as_ptr(), 128, ptr::null(), &mut v),
            SymStatus::ParityMismatch
        );
        let bogus = CString::new("simpson").unwrap();
        assert_eq!(
            symls_eval(f, 3, bogus.as_ptr(), 128, ptr::null(), &mut v),
            SymStatus::InvalidArgument
        );
        assert_eq!(
            symls_eval(f, 3, full.as_ptr(), 32, ptr::null(), &mut v),
            SymStatus::InvalidArgument
        );
        assert_eq!(
            symls_eval(ptr::null(), 3, full.as_ptr(), 128, ptr::null(), &mut v),
            SymStatus::NullPointer
        );
        assert!(v.is_null());
        symls_function_free(f);
        symls_function_free(ptr::null_mut());
        symls_lvalue_free(ptr::null_mut());
        symls_string_free(ptr::null_mut());
        assert!(symls_lvalue_re(ptr::null()).is_nan());
    }
}

#[test]
fn tables_and_json() {
    unsafe {
        // odd function mod 5 with values 1 and 1/2 at a = 1, 2
        let keys = [1u32, 2];
        let nums = [1i64, 1];
        let dens = [1i64, 2];
        let mut f = ptr::null_mut();
        assert_eq!(
            symls_from_table(5, true, keys.as_ptr(), nums.as_ptr(), dens.as_ptr(), 2, &mut f),
            SymStatus::Ok
        );
        let mut json = ptr::null_mut();
        assert_eq!(symls_function_to_json(f, &mut json), SymStatus::Ok);
        let text = take_string(json);
        assert!(text.contains("\"parity\":\"odd\""));
        let c = CString::new(text).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(symls_from_json(c.as_ptr(), &mut g), SymStatus::Ok);
        assert_eq!(symls_function_modulus(g), 5);
        symls_function_free(f);
        symls_function_free(g);

        let bad = CString::new(r#"{"modulus":4,"parity":"odd","values":[[1,1,0,1],[0,1,0,1],[1,1,0,1]]}"#).unwrap();
        assert_eq!(symls_from_json(bad.as_ptr(), &mut g), SymStatus::InvalidArgument);
        let zero_den = [0i64, 1];
        assert_eq!(
            symls_from_table(5, true, keys.as_ptr(), nums.as_ptr(), zero_den.as_ptr(), 2, &mut g),
            SymStatus::InvalidArgument
        );
    }
}

#[test]
fn classifier_verdicts() {
    unsafe {
        let mut verdict = SymVerdict::default();
        let mut f = ptr::null_mut();
        assert_eq!(symls_f_4m(2, &mut f), SymStatus::Ok);
        assert_eq!(symls_classify(f, &mut verdict), SymStatus::Ok);
        assert!(verdict.is_character);
        assert_eq!(verdict.witness_kind, 0);
        symls_function_free(f);

        assert_eq!(symls_chi_2m(3, &mut f), SymStatus::Ok);
        assert_eq!(symls_classify(f, &mut verdict), SymStatus::Ok);
        assert!(!verdict.is_character);
        assert_eq!((verdict.witness_kind, verdict.a), (1, 2));
        symls_function_free(f);
    }
}

#[test]
fn constant_verification() {
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(symls_verify_constants(256, &mut json), SymStatus::Ok);
        let rows: Vec<serde_json::Value> = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(rows.len(), 14);
        assert!(rows.iter().all(|r| r["matched"] == true));
        assert_eq!(symls_verify_constants(16, ptr::null_mut()), SymStatus::InvalidArgument);
    }
}

#[test]
fn header_lists_every_export() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/symlseries.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "symls_last_error",
        "symls_version",
        "symls_string_free",
        "symls_chi_2m",
        "symls_f_4m",
        "symls_from_table",
        "symls_from_json",
        "symls_function_free",
        "symls_function_modulus",
        "symls_function_to_json",
        "symls_classify",
        "symls_eval",
        "symls_lvalue_free",
        "symls_lvalue_re",
        "symls_lvalue_im",
        "symls_lvalue_error_bound",
        "symls_lvalue_to_json",
        "symls_verify_constants",
        "SYM_STATUS_PARITY_MISMATCH",
        "typedef struct SymFunction SymFunction",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

/// Compile and run a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libsymlseries_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out_dir = std::env::temp_dir().join(format!("symls-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let bin = out_dir.join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
    let _ = std::fs::remove_dir_all(out_dir);
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
