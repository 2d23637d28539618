#![no_main]

use libfuzzer_sys::fuzz_target;
use relfocus::io::{parse_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(ing) = parse_csv(data) else { return };
    let r = ing.relation;
    let again = parse_csv(write_csv(&r).as_bytes()).expect("serialized relation parses");
    assert_eq!(again.duplicates, 0);
    assert_eq!(again.relation.align_to(r.scheme()).expect("same scheme"), r);
});
