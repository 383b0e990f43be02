#![no_main]

use libfuzzer_sys::fuzz_target;
use primspec::behncke_leptin::{algebra_of_poset, parse_defector_spec, Defector};
use primspec::generate;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_defector_spec(src);
    let p = generate::p4s1();
    if let Ok(d) = Defector::parse(&p, src) {
        assert_eq!(Defector::parse(&p, &d.render(&p)).expect("re-parse"), d);
        let _ = algebra_of_poset(&p, &d, true);
    }
});
