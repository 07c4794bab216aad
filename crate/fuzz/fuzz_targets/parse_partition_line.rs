#![no_main]

use libfuzzer_sys::fuzz_target;
use parmon::Partition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = Partition::parse_line(text) {
        // the one-line form is input-only; it must agree with the JSON form
        let again = Partition::parse_json(&p.to_json_string()).expect("canonical output reparses");
        assert_eq!(again, p);
    }
});
