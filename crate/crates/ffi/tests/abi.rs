use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use supergaudin_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sg_last_error_message()) }.to_string_lossy().into_owned()
}

fn new_system(json: &str) -> (SgStatus, *mut SgSystem) {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { sg_system_new(c.as_ptr(), &mut h) };
    (s, h)
}

#[test]
fn lifecycle() {
    let (s, h) = new_system(r#"{"m":1,"n":1,"sites":[[1],[1]],"z":["0","3"],"checks":["commutativity","supercommutation"]}"#);
    assert_eq!(s, SgStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    let mut dim = 0usize;
    assert_eq!(unsafe { sg_system_module_dim(h, &mut dim) }, SgStatus::Ok);
    assert_eq!(dim, 4);
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { sg_run_checks(h, &mut out) }, SgStatus::Ok, "{}", last_error());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { sg_string_free(out) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["results"][0]["check"], "commutativity");
    unsafe { sg_system_free(h) };
}

#[test]
fn errors_are_reported() {
    let (s, h) = new_system(r#"{"m":1,"n":1,"sites":[[1],[1]],"z":["2","2"]}"#);
    assert_eq!(s, SgStatus::ConfigError);
    assert!(h.is_null());
    assert!(last_error().contains("z[1]"), "{}", last_error());
    let (s, _) = new_system("not json");
    assert_eq!(s, SgStatus::ConfigError);

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sg_system_new(ptr::null(), &mut h) }, SgStatus::NullPointer);
    assert_eq!(unsafe { sg_system_module_dim(ptr::null(), ptr::null_mut()) }, SgStatus::NullPointer);
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { sg_system_new(bad.as_ptr().cast(), &mut h) }, SgStatus::InvalidUtf8);
    unsafe {
        sg_system_free(ptr::null_mut());
        sg_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(sg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/supergaudin.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "sg_system_new",
        "sg_system_free",
        "sg_system_module_dim",
        "sg_run_checks",
        "sg_string_free",
        "sg_last_error_message",
        "SG_STATUS_CHECKS_FAILED",
        "typedef struct SgSystem SgSystem",
    ] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    // compile a caller against the header when a C compiler is present
    let src = std::env::temp_dir().join("supergaudin_abi_check.c");
    std::fs::write(
        &src,
        "#include \"supergaudin.h\"\nint main(void) {\n  SgSystem *h = 0; size_t d = 0; char *j = 0;\n  \
         if (sg_system_new(\"{}\", &h) != SG_STATUS_OK) return (int)sg_last_error_message()[0];\n  \
         sg_system_module_dim(h, &d); sg_run_checks(h, &j); sg_string_free(j); sg_system_free(h);\n  return 0;\n}\n",
    )
    .unwrap();
    let include = header.parent().unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg("-I").arg(include).arg(&src).output() {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler; skipped the compile check"),
    }
}
