//! C ABI over `bucket_hash`.
//!
//! Tables are handed out as opaque `BhTable` pointers. Every fallible call
//! returns a `BhStatus`; the message of the most recent failure on the calling
//! thread can be copied out with [`bh_last_error`].

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bucket_hash::config::{make_config, threshold_from_pct, TableKind};
use bucket_hash::keys::{generate_keys, KeySet};
use bucket_hash::metrics::{predict_sectors, Op, ProbeStats, SectorModel};
use bucket_hash::table::{build, BuildMode, HashTable};
use bucket_hash::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhStatus {
    Ok = 0,
    /// `bh_table_find` only: the key is not stored.
    NotFound = 1,
    NullPointer = -1,
    InvalidArgument = -2,
    OverCapacity = -3,
    /// Some key could not be placed; no table is returned.
    BuildFailed = -4,
    Panic = -5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhKind {
    OneCht = 0,
    Bcht = 1,
    Bp2ht = 2,
    Iht = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhOp {
    Insert = 0,
    Find = 1,
}

impl From<BhKind> for TableKind {
    fn from(k: BhKind) -> Self {
        match k {
            BhKind::OneCht => TableKind::OneCht,
            BhKind::Bcht => TableKind::Bcht,
            BhKind::Bp2ht => TableKind::Bp2ht,
            BhKind::Iht => TableKind::Iht,
        }
    }
}

/// Parameters for [`bh_table_build`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BhBuildOptions {
    pub kind: BhKind,
    /// Slots per bucket; must be 1 for `BH_KIND_ONE_CHT`.
    pub bucket_size: u32,
    /// Target fill in (0, 1].
    pub load_factor: f64,
    /// Iceberg threshold as a percentage of the bucket size; 0 picks 80.
    pub threshold_pct: u32,
    pub seed: u64,
    /// 0 builds sequentially; otherwise the number of worker threads.
    pub workers: u32,
}

/// Opaque table handle.
pub struct BhTable {
    inner: HashTable,
    insert_probes: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: BhStatus, msg: impl Into<String>) -> BhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn status_of(e: &Error) -> BhStatus {
    match e {
        Error::OverCapacity { .. } => BhStatus::OverCapacity,
        _ => BhStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> BhStatus) -> BhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BhStatus::Panic, "internal panic"))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn bh_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Fills `out[0..n]` with `n` distinct keys drawn uniformly from
/// `[0, 2^32 - 1)`. Deterministic in `seed`.
///
/// # Safety
/// `out` must point to `n` writable `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn bh_generate_keys(seed: u64, n: usize, out: *mut u32) -> BhStatus {
    if out.is_null() && n > 0 {
        return fail(BhStatus::NullPointer, "out is null");
    }
    guarded(|| {
        let keys = generate_keys(seed, n);
        if n > 0 {
            slice::from_raw_parts_mut(out, n).copy_from_slice(keys.keys());
        }
        BhStatus::Ok
    })
}

/// Builds a table holding `keys[0..n]`, each mapped to its derived value.
/// On success `*out` receives a handle that must be released with
/// [`bh_table_free`]; on any failure `*out` is set to null.
///
/// # Safety
/// `keys` must point to `n` readable `uint32_t`, `opts` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_table_build(
    keys: *const u32,
    n: usize,
    opts: *const BhBuildOptions,
    out: *mut *mut BhTable,
) -> BhStatus {
    if out.is_null() {
        return fail(BhStatus::NullPointer, "out is null");
    }
    *out = ptr::null_mut();
    if opts.is_null() || (keys.is_null() && n > 0) {
        return fail(BhStatus::NullPointer, "keys or opts is null");
    }
    let opts = *opts;
    let keys = if n == 0 { &[][..] } else { slice::from_raw_parts(keys, n) };
    guarded(|| {
        let kind = TableKind::from(opts.kind);
        let b = opts.bucket_size as usize;
        let pct = if opts.threshold_pct == 0 { 80 } else { opts.threshold_pct };
        let threshold = (kind == TableKind::Iht).then(|| threshold_from_pct(pct, b));
        let keyset = match KeySet::from_keys(keys.to_vec(), opts.seed) {
            Ok(k) => k,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let config = match make_config(kind, n, opts.load_factor, b, threshold, opts.seed) {
            Ok(c) => c,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let mode = match opts.workers {
            0 => BuildMode::Sequential,
            w => BuildMode::Parallel(w as usize),
        };
        match build(&keyset, config, mode) {
            Err(e) => fail(status_of(&e), e.to_string()),
            Ok((_, outcome)) if !outcome.success => {
                fail(BhStatus::BuildFailed, format!("placed {} of {n} keys", outcome.inserted))
            }
            Ok((table, outcome)) => {
                let handle = BhTable { inner: table, insert_probes: outcome.probes.mean() };
                *out = Box::into_raw(Box::new(handle));
                BhStatus::Ok
            }
        }
    })
}

/// Releases a handle from [`bh_table_build`]. Null is ignored.
///
/// # Safety
/// `table` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn bh_table_free(table: *mut BhTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Looks up `key`. Returns `BH_STATUS_OK` and writes the value, or
/// `BH_STATUS_NOT_FOUND`. `probes` (may be null) receives the buckets read.
///
/// # Safety
/// `table` must be a live handle; `value` must be valid; `probes` may be null.
#[no_mangle]
pub unsafe extern "C" fn bh_table_find(table: *const BhTable, key: u32, value: *mut u32, probes: *mut u32) -> BhStatus {
    let Some(t) = table.as_ref() else {
        return fail(BhStatus::NullPointer, "table is null");
    };
    if value.is_null() {
        return fail(BhStatus::NullPointer, "value is null");
    }
    let mut stats = ProbeStats::new(Op::Find);
    let hit = t.inner.find(key, &mut stats);
    if let Some(p) = probes.as_mut() {
        *p = stats.total_probes as u32;
    }
    match hit {
        Some(v) => {
            *value = v;
            BhStatus::Ok
        }
        None => BhStatus::NotFound,
    }
}

/// Number of stored pairs; 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bh_table_len(table: *const BhTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.len())
}

/// Total slots; 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bh_table_capacity(table: *const BhTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.capacity())
}

/// Mean bucket reads per key during the build; NaN for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bh_table_insert_probes(table: *const BhTable) -> f64 {
    table.as_ref().map_or(f64::NAN, |t| t.insert_probes)
}

/// Lower-bound DRAM sectors per key under the 32-byte sector model.
/// Returns NaN when `mean_probes < 1` or `bucket_size` is 0.
#[no_mangle]
pub extern "C" fn bh_predict_sectors(kind: BhKind, bucket_size: u32, mean_probes: f64, op: BhOp) -> f64 {
    if bucket_size == 0 || mean_probes.is_nan() || mean_probes < 1.0 {
        return f64::NAN;
    }
    let op = match op {
        BhOp::Insert => Op::Insert,
        BhOp::Find => Op::Find,
    };
    predict_sectors(&SectorModel::default(), kind.into(), bucket_size as usize, mean_probes, op)
}
