#![no_main]

use libfuzzer_sys::fuzz_target;
use primspec::bratteli::{self, Diagram};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = Diagram::from_json(src) else {
        return;
    };
    let report = bratteli::validate(&d, true);
    if d.check_shape().is_ok() {
        let again = Diagram::from_json(&d.to_json()).expect("re-parse");
        assert_eq!(again, d);
        let _ = bratteli::is_commutative(&d);
        let _ = bratteli::diagram_dot(&d, 4);
        if report.is_valid() {
            let _ = bratteli::enumerate_ideals(&d, 8);
        }
    }
});
