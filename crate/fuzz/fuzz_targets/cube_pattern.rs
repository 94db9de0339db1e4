#![no_main]

use als_core::Cube;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((cube, n, m)) = Cube::parse(text) else {
        return;
    };
    let (again, n2, m2) = Cube::parse(&cube.pattern(n, m)).expect("pattern parses");
    assert_eq!((again, n2, m2), (cube, n, m));
});
