#![no_main]

use libfuzzer_sys::fuzz_target;
use parmon::Partition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = Partition::parse_json(text) {
        // accepted inputs must round-trip through the canonical form
        let canonical = p.to_json_string();
        let again = Partition::parse_json(&canonical).expect("canonical output reparses");
        assert_eq!(again, p);
    }
});
