use poincare_cli::charspec::parse_char_spec;
use poincare_cli::config::{normalize_key, parse_config};
use proptest::prelude::*;

proptest! {
    #[test]
    fn char_spec_round_trips(q in 1u64.., i in any::<u64>()) {
        prop_assert_eq!(parse_char_spec(&format!("{q}:{i}")), Ok((q, i)));
    }

    #[test]
    fn char_spec_never_panics(s in ".{0,40}") {
        let _ = parse_char_spec(&s);
    }

    #[test]
    fn config_never_panics(s in "(?s).{0,200}") {
        let _ = parse_config(&s);
    }

    #[test]
    fn config_rendered_entries_parse_back(
        entries in prop::collection::btree_map("[a-z][a-z0-9_-]{0,8}", "[!-~]{1,12}", 0..8),
    ) {
        // distinct after normalization, which maps '_' to '-'
        let mut seen = std::collections::BTreeSet::new();
        let entries: Vec<(String, String)> =
            entries.into_iter().filter(|(k, _)| seen.insert(normalize_key(k))).collect();
        let text: String = entries.iter().map(|(k, v)| format!("  {k} =\t{v} \n# note\n\n")).collect();
        let got = parse_config(&text).unwrap();
        prop_assert_eq!(got.len(), entries.len());
        for (e, (k, v)) in got.iter().zip(&entries) {
            prop_assert_eq!(&e.key, &normalize_key(k));
            prop_assert_eq!(&e.value, v);
        }
    }
}
