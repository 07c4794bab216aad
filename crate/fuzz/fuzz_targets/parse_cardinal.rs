#![no_main]

use libfuzzer_sys::fuzz_target;
use parmon::Cardinal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = text.parse::<Cardinal>() {
        let round: Cardinal = c.to_string().parse().expect("display form reparses");
        assert_eq!(round, c);
    }
});
