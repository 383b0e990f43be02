#![no_main]

use libfuzzer_sys::fuzz_target;
use primspec::text::{parse_poset, write_poset};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_poset(src) {
        let again = parse_poset(&write_poset(&p)).expect("written posets re-parse");
        assert_eq!(again, p);
        let _ = p.hasse_dot();
        if p.len() <= 10 {
            let _ = p.all_closed_sets(10);
        }
    }
});
