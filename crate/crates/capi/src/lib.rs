//! C ABI over the condorcet-domains library: enumeration into an opaque
//! class-list handle, per-class member access, and property classification.
//! Every entry point returns a status code and catches panics at the
//! boundary.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use condorcet_domains::classify::ClassRecord;
use condorcet_domains::domain::Domain;
use condorcet_domains::schemes::{alternating, alternating_size, AlternatingVariant};
use condorcet_domains::search::{enumerate_mucds, SearchConfig};

/// Status codes returned by every API function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MucdStatus {
    Ok = 0,
    NullArgument = 1,
    DegreeOutOfRange = 2,
    IndexOutOfRange = 3,
    BufferTooSmall = 4,
    RuntimeError = 5,
}

/// Opaque handle to an enumerated list of canonical classes of one degree.
pub struct MucdClassList {
    degree: usize,
    classes: Vec<Domain>,
}

/// Classification flags of a single class.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MucdFlags {
    pub size: u32,
    pub core_order: u32,
    pub dual_intersection: u32,
    pub connected: bool,
    pub peak_pit: bool,
    pub normal: bool,
    pub symmetric: bool,
    pub self_dual: bool,
    pub copious: bool,
    pub ample: bool,
    pub fixing: bool,
    pub reducible: bool,
    pub arrow_sp: bool,
    pub usp: bool,
    pub nuspd: bool,
    pub sp_tree: bool,
    pub sp_star: bool,
}

fn guarded<F: FnOnce() -> MucdStatus>(f: F) -> MucdStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(MucdStatus::RuntimeError)
}

/// Enumerates every maximal unitary Condorcet domain class of `degree`
/// (3..=6 supported here; degree 7 is out of scope for the C surface).
/// On success stores a freshly allocated handle in `*out`; release it with
/// `mucd_class_list_free`.
#[no_mangle]
pub extern "C" fn mucd_enumerate(
    degree: u32,
    jobs: u32,
    out: *mut *mut MucdClassList,
) -> MucdStatus {
    if out.is_null() {
        return MucdStatus::NullArgument;
    }
    if !(3..=6).contains(&degree) {
        return MucdStatus::DegreeOutOfRange;
    }
    guarded(|| {
        let cfg = SearchConfig {
            jobs: jobs as usize,
            ..SearchConfig::default()
        };
        match enumerate_mucds(degree as usize, &cfg) {
            Ok(result) => {
                let list = Box::new(MucdClassList {
                    degree: degree as usize,
                    classes: result.classes.into_iter().collect(),
                });
                unsafe { ptr::write(out, Box::into_raw(list)) };
                MucdStatus::Ok
            }
            Err(_) => MucdStatus::RuntimeError,
        }
    })
}

/// Releases a handle returned by `mucd_enumerate`. Null is a no-op.
#[no_mangle]
pub extern "C" fn mucd_class_list_free(list: *mut MucdClassList) {
    if !list.is_null() {
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Number of classes in the list.
#[no_mangle]
pub extern "C" fn mucd_class_list_len(list: *const MucdClassList, out: *mut usize) -> MucdStatus {
    if list.is_null() || out.is_null() {
        return MucdStatus::NullArgument;
    }
    unsafe { *out = (*list).classes.len() };
    MucdStatus::Ok
}

/// Degree of the enumerated classes.
#[no_mangle]
pub extern "C" fn mucd_class_list_degree(
    list: *const MucdClassList,
    out: *mut u32,
) -> MucdStatus {
    if list.is_null() || out.is_null() {
        return MucdStatus::NullArgument;
    }
    unsafe { *out = (*list).degree as u32 };
    MucdStatus::Ok
}

/// Member count of class `index`.
#[no_mangle]
pub extern "C" fn mucd_class_size(
    list: *const MucdClassList,
    index: usize,
    out: *mut u32,
) -> MucdStatus {
    if list.is_null() || out.is_null() {
        return MucdStatus::NullArgument;
    }
    let list = unsafe { &*list };
    match list.classes.get(index) {
        Some(d) => {
            unsafe { *out = d.len() as u32 };
            MucdStatus::Ok
        }
        None => MucdStatus::IndexOutOfRange,
    }
}

/// Copies the members of class `index` into `buf` as permutations laid out
/// contiguously (`degree` alternatives each, values 1..=degree). `cap` is
/// the capacity of `buf` in u8 units; `*written` receives the number used.
#[no_mangle]
pub extern "C" fn mucd_class_members(
    list: *const MucdClassList,
    index: usize,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> MucdStatus {
    if list.is_null() || buf.is_null() || written.is_null() {
        return MucdStatus::NullArgument;
    }
    let list = unsafe { &*list };
    let d = match list.classes.get(index) {
        Some(d) => d,
        None => return MucdStatus::IndexOutOfRange,
    };
    let need = d.len() * list.degree;
    if cap < need {
        return MucdStatus::BufferTooSmall;
    }
    guarded(|| {
        let slice = unsafe { std::slice::from_raw_parts_mut(buf, need) };
        for (i, p) in d.perms().iter().enumerate() {
            slice[i * list.degree..(i + 1) * list.degree].copy_from_slice(p.slots());
        }
        unsafe { *written = need };
        MucdStatus::Ok
    })
}

/// Classifies class `index` into `*flags`.
#[no_mangle]
pub extern "C" fn mucd_classify(
    list: *const MucdClassList,
    index: usize,
    flags: *mut MucdFlags,
) -> MucdStatus {
    if list.is_null() || flags.is_null() {
        return MucdStatus::NullArgument;
    }
    let list = unsafe { &*list };
    let d = match list.classes.get(index) {
        Some(d) => d,
        None => return MucdStatus::IndexOutOfRange,
    };
    guarded(|| match ClassRecord::of(d) {
        Ok(rec) => {
            let out = MucdFlags {
                size: rec.size as u32,
                core_order: rec.core_order as u32,
                dual_intersection: rec.dual_intersection as u32,
                connected: rec.connected,
                peak_pit: rec.peak_pit,
                normal: rec.normal,
                symmetric: rec.symmetric,
                self_dual: rec.self_dual,
                copious: rec.copious,
                ample: rec.ample,
                fixing: rec.fixing,
                reducible: rec.reducible,
                arrow_sp: rec.arrow_sp,
                usp: rec.usp,
                nuspd: rec.nuspd,
                sp_tree: rec.sp_tree,
                sp_star: rec.sp_star,
            };
            unsafe { ptr::write(flags, out) };
            MucdStatus::Ok
        }
        Err(_) => MucdStatus::RuntimeError,
    })
}

/// Closed-form size of the alternating scheme for `degree` in 3..=7.
#[no_mangle]
pub extern "C" fn mucd_alternating_size(degree: u32, out: *mut u64) -> MucdStatus {
    if out.is_null() {
        return MucdStatus::NullArgument;
    }
    if !(3..=7).contains(&degree) {
        return MucdStatus::DegreeOutOfRange;
    }
    unsafe { *out = alternating_size(degree as usize) as u64 };
    MucdStatus::Ok
}

/// Constructs the alternating scheme and stores it as a one-class list.
#[no_mangle]
pub extern "C" fn mucd_alternating(degree: u32, out: *mut *mut MucdClassList) -> MucdStatus {
    if out.is_null() {
        return MucdStatus::NullArgument;
    }
    if !(3..=7).contains(&degree) {
        return MucdStatus::DegreeOutOfRange;
    }
    guarded(|| {
        let d = alternating(degree as usize, AlternatingVariant::A);
        let list = Box::new(MucdClassList {
            degree: degree as usize,
            classes: vec![d],
        });
        unsafe { ptr::write(out, Box::into_raw(list)) };
        MucdStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_degree_4_through_the_abi() {
        let mut list: *mut MucdClassList = ptr::null_mut();
        assert_eq!(mucd_enumerate(4, 2, &mut list), MucdStatus::Ok);
        let mut len = 0usize;
        assert_eq!(mucd_class_list_len(list, &mut len), MucdStatus::Ok);
        assert_eq!(len, 31);
        let mut degree = 0u32;
        assert_eq!(mucd_class_list_degree(list, &mut degree), MucdStatus::Ok);
        assert_eq!(degree, 4);

        let mut size = 0u32;
        assert_eq!(mucd_class_size(list, 0, &mut size), MucdStatus::Ok);
        assert!((4..=9).contains(&size));
        assert_eq!(
            mucd_class_size(list, len, &mut size),
            MucdStatus::IndexOutOfRange
        );

        let mut buf = vec![0u8; size as usize * 4];
        let mut written = 0usize;
        assert_eq!(
            mucd_class_members(list, 0, buf.as_mut_ptr(), buf.len(), &mut written),
            MucdStatus::Ok
        );
        assert_eq!(written, size as usize * 4);
        // First member of a canonical block is a valid permutation.
        let mut first: Vec<u8> = buf[..4].to_vec();
        first.sort_unstable();
        assert_eq!(first, vec![1, 2, 3, 4]);

        let mut flags = MucdFlags {
            size: 0,
            core_order: 0,
            dual_intersection: 0,
            connected: false,
            peak_pit: false,
            normal: false,
            symmetric: false,
            self_dual: false,
            copious: false,
            ample: false,
            fixing: false,
            reducible: false,
            arrow_sp: false,
            usp: false,
            nuspd: false,
            sp_tree: false,
            sp_star: false,
        };
        assert_eq!(mucd_classify(list, 0, &mut flags), MucdStatus::Ok);
        assert!(flags.copious, "every degree-4 class is copious");
        assert!(flags.ample);

        mucd_class_list_free(list);
    }

    #[test]
    fn null_and_range_errors() {
        assert_eq!(
            mucd_enumerate(4, 1, ptr::null_mut()),
            MucdStatus::NullArgument
        );
        let mut list: *mut MucdClassList = ptr::null_mut();
        assert_eq!(mucd_enumerate(2, 1, &mut list), MucdStatus::DegreeOutOfRange);
        assert_eq!(mucd_enumerate(7, 1, &mut list), MucdStatus::DegreeOutOfRange);
        let mut out = 0u64;
        assert_eq!(mucd_alternating_size(8, &mut out), MucdStatus::DegreeOutOfRange);
        assert_eq!(mucd_alternating_size(7, &mut out), MucdStatus::Ok);
        assert_eq!(out, 100);
        mucd_class_list_free(ptr::null_mut());
    }

    #[test]
    fn alternating_handle_has_formula_size() {
        for degree in 3..=6u32 {
            let mut list: *mut MucdClassList = ptr::null_mut();
            assert_eq!(mucd_alternating(degree, &mut list), MucdStatus::Ok);
            let mut size = 0u32;
            assert_eq!(mucd_class_size(list, 0, &mut size), MucdStatus::Ok);
            assert_eq!(size as usize, alternating_size(degree as usize));
            mucd_class_list_free(list);
        }
    }

    #[test]
    fn generated_header_exists_and_exports_symbols() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("condorcet_domains.h");
        let text = std::fs::read_to_string(header).expect("header generated by build script");
        for sym in [
            "mucd_enumerate",
            "mucd_class_list_free",
            "mucd_class_members",
            "mucd_classify",
            "MucdStatus",
            "MucdFlags",
        ] {
            assert!(text.contains(sym), "header missing {sym}");
        }
    }
}
