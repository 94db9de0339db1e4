#![no_main]

use als_core::{parse_pla_with, Cover, ParseOptions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for strict in [false, true] {
        if let Ok(parsed) = parse_pla_with(text, ParseOptions { strict }) {
            let doc = parsed.document;
            // anything the parser accepts must fit a cover or be rejected cleanly
            let _ = Cover::build(doc.cubes.iter().copied(), doc.num_inputs, doc.num_outputs);
        }
    }
});
