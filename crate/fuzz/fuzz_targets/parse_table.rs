#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = cgci::io::parse_table(text) {
            // Accepted input must survive a print/parse round trip bit for bit.
            let reprinted = cgci::io::format_table(&table);
            let again = cgci::io::parse_table(&reprinted).expect("reprint parses");
            assert_eq!(table.names(), again.names());
            let before = table.values().iter().map(|v| v.to_bits());
            let after = again.values().iter().map(|v| v.to_bits());
            assert!(before.eq(after), "values drifted across round trip");
        }
    }
});
