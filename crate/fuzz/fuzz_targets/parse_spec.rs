#![no_main]

use libfuzzer_sys::fuzz_target;
use strandalg::dsl::parse_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // The parser must return positioned errors, never panic. Anything that
    // parses must survive the serialize/re-parse round trip.
    if let Ok(spec) = parse_spec(text) {
        let printed = spec.to_string();
        let again = parse_spec(&printed).expect("canonical form re-parses");
        assert_eq!(spec.quiver, again.quiver);
        assert_eq!(spec.model, again.model);
    }
});
