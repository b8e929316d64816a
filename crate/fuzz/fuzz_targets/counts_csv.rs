#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::expsim::{reconstruct_density, CountsTable};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(table) = CountsTable::from_csv(text) else { return };
    let again = CountsTable::from_csv(&table.to_csv()).expect("serialized table parses");
    assert_eq!(again.rows, table.rows);
    if let Ok(rho) = reconstruct_density(&table) {
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        assert!(rho.determinant() >= -1e-10);
    }
});
