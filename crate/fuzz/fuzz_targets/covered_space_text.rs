#![no_main]

use libfuzzer_sys::fuzz_target;
use primspec::quotient::{quotient_poset, topology_of};
use primspec::text::{parse_covered_space, write_covered_space};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(space) = parse_covered_space(src) {
        let again = parse_covered_space(&write_covered_space(&space)).expect("re-parse");
        assert_eq!(again, space);
        if space.cover().len() <= 8 {
            let _ = topology_of(&space);
        }
        let _ = quotient_poset(&space);
    }
});
