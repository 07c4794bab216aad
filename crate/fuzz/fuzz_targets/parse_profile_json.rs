#![no_main]

use libfuzzer_sys::fuzz_target;
use parmon::classifier::SidedProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(profile) = SidedProfile::from_json(text) {
        profile.validate().expect("accepted profiles satisfy their invariants");
        let round = SidedProfile::from_json(&profile.to_json()).expect("serialized profile reparses");
        assert_eq!(round, profile);
    }
});
