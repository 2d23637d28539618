#![no_main]

use libfuzzer_sys::fuzz_target;
use relfocus::fixtures::non_monotone;
use relfocus::io::parse_partition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let q = non_monotone();
    let s = q.scheme();
    if let Ok(p) = parse_partition(s, text) {
        // the canonical form reads back to the same partition
        assert_eq!(parse_partition(s, &s.partition_json(&p)).unwrap(), p);
    }
});
