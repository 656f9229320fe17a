use std::ffi::CStr;
use std::ptr;

use quadcap_ffi::*;

#[test]
fn flagship_report() {
    unsafe {
        let mut ext = ptr::null_mut();
        assert_eq!(qc_extension_new(-5, -1, ptr::null(), 0, true, &mut ext), QcStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(qc_capitulation_report(ext, &mut rep), QcStatus::Ok);
        let mut order = 0u64;
        assert_eq!(qc_report_ker_j_order(rep, &mut order), QcStatus::Ok);
        assert_eq!(order, 2);
        let mut ok = false;
        assert_eq!(qc_report_consistent(rep, &mut ok), QcStatus::Ok);
        assert!(ok);
        let json = CStr::from_ptr(qc_report_json(rep)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["ker_j_h1"], serde_json::json!(["2"]));
        qc_report_free(rep);
        qc_extension_free(ext);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut ext = ptr::null_mut();
        // 2 ramifies in Q(i, √2)/Q(i)
        assert_eq!(qc_extension_new(-1, 2, ptr::null(), 0, false, &mut ext), QcStatus::Domain);
        assert!(ext.is_null());
        let msg = CStr::from_ptr(qc_last_error()).to_str().unwrap();
        assert!(msg.contains("ramified"));
        let two = [2u64];
        assert_eq!(qc_extension_new(-1, 2, two.as_ptr(), 1, false, &mut ext), QcStatus::Ok);
        assert!(qc_last_error().is_null());
        qc_extension_free(ext);

        assert_eq!(qc_extension_new(-1, 2, ptr::null(), 3, false, &mut ext), QcStatus::NullPointer);
        assert_eq!(qc_capitulation_report(ptr::null(), &mut ptr::null_mut()), QcStatus::NullPointer);
        assert_eq!(qc_class_number(-23, ptr::null_mut()), QcStatus::NullPointer);
        let mut h = 0;
        assert_eq!(qc_class_number(12, &mut h), QcStatus::Domain);
        assert_eq!(qc_class_number(-23, &mut h), QcStatus::Ok);
        assert_eq!(h, 3);
        assert!(qc_report_json(ptr::null()).is_null());
        qc_report_free(ptr::null_mut());
        qc_extension_free(ptr::null_mut());
    }
}

#[test]
fn verify_suite_and_version() {
    let mut exact = 0;
    assert_eq!(unsafe { qc_verify_cool(20, 64, 1, &mut exact) }, QcStatus::Ok);
    assert_eq!(exact, 20);
    let v = unsafe { CStr::from_ptr(qc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/quadcap.h")).unwrap();
    for name in [
        "qc_extension_new",
        "qc_extension_free",
        "qc_capitulation_report",
        "qc_report_json",
        "qc_report_free",
        "qc_last_error",
        "QC_STATUS_BOUND_EXCEEDED",
        "typedef struct QcExtension QcExtension",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let src = std::env::temp_dir().join(format!("quadcap_header_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"quadcap.h\"\nint main(void) { QcStatus s = QC_STATUS_OK; return (int)s; }\n").unwrap();
    let status = match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler; header compile check not run");
            return;
        }
    };
    let _ = std::fs::remove_file(&src);
    assert!(status.success());
}
