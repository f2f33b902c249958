#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare_cli::charspec::parse_char_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((q, i)) = parse_char_spec(s) {
        assert!(q >= 1);
        assert_eq!(parse_char_spec(&format!("{q}:{i}")), Ok((q, i)));
    }
});
