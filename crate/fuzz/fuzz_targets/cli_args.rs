#![no_main]

use als_cli::bench::BenchConfig;
use als_cli::run::Threshold;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = text.parse::<Threshold>() {
        let again: Threshold = t.to_string().parse().expect("display parses");
        assert_eq!(again.to_string(), t.to_string());
        for n in [0, 1, 16, 64] {
            let _ = t.noe(n);
        }
    }
    let _ = text.parse::<BenchConfig>();
});
