mod common;

use cctt::syntax::parser::parse_term;
use cctt::syntax::printer::print;
use cctt::syntax::term::alpha_eq;
use common::TermGen;
use proptest::prelude::*;

/// Print a generated term, parse it back and compare up to renaming.
pub fn round_trip(seed: u64) -> Result<(), String> {
    let mut g = TermGen::new(seed);
    let t = g.term(24, 0, &mut Vec::new());
    let text = print(&t);
    let back = parse_term(&text, &g.global_set()).map_err(|e| format!("`{text}` does not parse: {e:?}"))?;
    if alpha_eq(&t, &back) {
        Ok(())
    } else {
        Err(format!("`{text}` parses as `{}`", print(&back)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse(seed in any::<u64>()) {
        let r = round_trip(seed);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }
}
