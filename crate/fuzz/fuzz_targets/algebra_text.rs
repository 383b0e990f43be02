#![no_main]

use libfuzzer_sys::fuzz_target;
use primspec::algebra::{parse_algebra, Style};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = parse_algebra(src) {
        let c = e.canonical();
        for style in [Style::Unicode, Style::Ascii] {
            let back = parse_algebra(&c.render(style)).expect("rendered text re-parses");
            assert_eq!(back.canonical(), c);
        }
    }
});
