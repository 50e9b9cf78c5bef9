// SPDX-License-Identifier: Apache-2.0

//! Fixed inputs shared by the benchmarks.

use coinv_core::words::{Freqs, Word};

/// Every word of `R(1^3 2^2 3^2 4^2)`, the size used for the shift benchmark.
pub fn shift_inputs() -> Vec<Word> {
    let freqs = Freqs::from_pairs(&[(1, 3), (2, 2), (3, 2), (4, 2)]);
    coinv_core::words::enumerate(&freqs).expect("small class")
}
