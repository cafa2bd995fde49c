use std::path::Path;
use std::sync::Mutex;

use mesoszeta::zeros::{cached_zeros, ZeroTable};

static CACHE: Mutex<()> = Mutex::new(());

/// Zeros up to `height`, computed once and shared by every test run
/// through the target directory.
pub fn zeros_to(height: f64) -> ZeroTable {
    let _guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("zeros");
    cached_zeros(&dir, height).expect("zero table")
}
