#![no_main]

use als_core::{parse_pla, write_pla};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(first) = parse_pla(text) else { return };
    let out = write_pla(&first.document);
    let second = parse_pla(&out).expect("writer output parses").document;
    assert_eq!(second.num_inputs, first.document.num_inputs);
    assert_eq!(second.num_outputs, first.document.num_outputs);
    assert_eq!(second.cubes, first.document.cubes);
    assert_eq!(write_pla(&second), out);
});
