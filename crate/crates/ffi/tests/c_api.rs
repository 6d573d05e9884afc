use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use barrier_ruin_ffi::*;

fn last_error() -> String {
    let p = br_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Canonical {
    claim: *mut BrDistribution,
    gap: *mut BrDistribution,
    model: *mut BrModel,
}

impl Canonical {
    fn new() -> Self {
        let mut claim = ptr::null_mut();
        let mut gap = ptr::null_mut();
        let mut model = ptr::null_mut();
        unsafe {
            assert_eq!(br_distribution_lomax(1.0, 1.5, &mut claim), BrStatus::Ok);
            assert_eq!(br_distribution_exponential(1.0, &mut gap), BrStatus::Ok);
            assert_eq!(br_model_new(claim, gap, 4.0, 3.0, &mut model), BrStatus::Ok);
        }
        Self { claim, gap, model }
    }
}

impl Drop for Canonical {
    fn drop(&mut self) {
        unsafe {
            br_model_free(self.model);
            br_distribution_free(self.claim);
            br_distribution_free(self.gap);
        }
    }
}

#[test]
fn asymptotes_through_handles() {
    let c = Canonical::new();
    let mut out = BrAsymptotes::default();
    assert_eq!(unsafe { br_asymptotes(c.model, 0.5, 100.0, &mut out) }, BrStatus::Ok);
    assert_eq!(out.two_dim, 1);
    let h = 2.0 * (101f64.powf(-0.5) - 151f64.powf(-0.5)) + 151f64.powf(-0.5);
    assert!((out.h - h).abs() < 1e-14);
    assert!((out.psi_vee - h).abs() < 1e-14);
    assert!(out.psi_vee <= out.psi_wedge);

    let mut one = BrAsymptotes::default();
    assert_eq!(unsafe { br_asymptotes(c.model, 2.0, 100.0, &mut one) }, BrStatus::Ok);
    assert_eq!(one.two_dim, 0);
    assert!((one.psi_wedge - 2.0 * 101f64.powf(-0.5)).abs() < 1e-14);

    let (mut m1, mut m2) = (0.0, 0.0);
    assert_eq!(unsafe { br_model_drifts(c.model, &mut m1, &mut m2) }, BrStatus::Ok);
    assert_eq!((m1, m2), (2.0, 1.0));
}

#[test]
fn distribution_queries() {
    let c = Canonical::new();
    let mut v = 0.0;
    assert_eq!(unsafe { br_distribution_tail(c.claim, 3.0, &mut v) }, BrStatus::Ok);
    assert!((v - 0.125).abs() < 1e-15);
    assert_eq!(unsafe { br_distribution_tail_integral(c.claim, 0.0, &mut v) }, BrStatus::Ok);
    assert!((v - 2.0).abs() < 1e-14);
}

#[test]
fn estimates_are_deterministic_across_workers() {
    let c = Canonical::new();
    let mut a = BrPsiEstimates::default();
    let mut b = BrPsiEstimates::default();
    unsafe {
        assert_eq!(br_estimate_psi(c.model, 0.5, 25.0, 4000, 11, 1, &mut a), BrStatus::Ok);
        assert_eq!(br_estimate_psi(c.model, 0.5, 25.0, 4000, 11, 3, &mut b), BrStatus::Ok);
    }
    assert_eq!(a.replications, 4000);
    assert_eq!(a.wedge.value.to_bits(), b.wedge.value.to_bits());
    assert_eq!(a.vee.value.to_bits(), b.vee.value.to_bits());
    assert!(a.vee.value <= a.times.value && a.times.value <= a.wedge.value);
    let lhs = a.wedge.value + a.times.value;
    let rhs = a.first.value + a.second.value;
    assert!((lhs - rhs).abs() < 1e-12);
}

#[test]
fn error_codes_and_messages() {
    let c = Canonical::new();
    let mut model = ptr::null_mut();
    let s = unsafe { br_model_new(c.claim, c.gap, 4.0, 1.5, &mut model) };
    assert_eq!(s, BrStatus::Unstable);
    assert!(model.is_null());
    assert!(last_error().starts_with("Unstable"));

    let s = unsafe { br_model_new(c.claim, c.gap, 3.0, 4.0, &mut model) };
    assert_eq!(s, BrStatus::UnorderedPremiums);

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { br_distribution_lomax(1.0, 0.9, &mut d) }, BrStatus::InvalidArgument);
    assert!(d.is_null());
    assert!(!last_error().is_empty());

    let mut v = 0.0;
    assert_eq!(unsafe { br_stable_norming_constant(2.0, &mut v) }, BrStatus::Domain);
    assert!(last_error().starts_with("DomainError"));
    assert_eq!(unsafe { br_stable_norming_constant(1.5, &mut v) }, BrStatus::Ok);
    assert!((v - 0.398_942_3).abs() < 1e-7);
    assert!(br_last_error().is_null());

    assert_eq!(unsafe { br_distribution_tail(ptr::null(), 1.0, &mut v) }, BrStatus::NullPointer);
    assert_eq!(unsafe { br_asymptotes(c.model, 0.5, 10.0, ptr::null_mut()) }, BrStatus::NullPointer);
    unsafe {
        br_model_free(ptr::null_mut());
        br_distribution_free(ptr::null_mut());
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/barrier_ruin.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct BrModel BrModel;",
        "typedef struct BrDistribution BrDistribution;",
        "BR_STATUS_UNSTABLE = 3",
        "br_distribution_lomax(",
        "br_distribution_weibull(",
        "br_distribution_lognormal(",
        "br_distribution_exponential(",
        "br_distribution_deterministic(",
        "br_distribution_tail(",
        "br_distribution_tail_integral(",
        "br_distribution_free(",
        "br_model_new(",
        "br_model_free(",
        "br_model_drifts(",
        "br_asymptotes(",
        "br_estimate_psi(",
        "br_stable_norming_constant(",
        "br_harness_run(",
        "br_last_error(",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(header())
        .output()
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    // target/<profile>/deps/<test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    if !lib_dir.join("libbarrier_ruin_ffi.so").exists() {
        eprintln!("shared library not built, skipping");
        return;
    }
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let Ok(cc) = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-lbarrier_ruin_ffi", "-o"])
        .arg(&bin)
        .output()
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "H 0.1176286 J 0.2214069\n");
}
