#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_config(text) {
        // accepted files survive a rewrite in canonical form
        let canon: String = entries.iter().map(|e| format!("{} = {}\n", e.key, e.value)).collect();
        let again = parse_config(&canon).expect("canonical form parses");
        assert_eq!(again.len(), entries.len());
        for (a, b) in entries.iter().zip(&again) {
            assert_eq!((&a.key, &a.value), (&b.key, &b.value));
        }
    }
});
