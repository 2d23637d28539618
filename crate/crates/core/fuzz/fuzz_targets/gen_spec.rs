#![no_main]

use libfuzzer_sys::fuzz_target;
use relfocus::oracle::GenSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = GenSpec::parse(text) else { return };
    // generation allocates in the spec's sizes, so only small specs are run
    let small = match &spec {
        GenSpec::Random {
            attributes,
            max_domain,
            max_tuples,
        } => *attributes <= 8 && *max_domain <= 8 && *max_tuples <= 256,
        GenSpec::Planted { blocks, max_domain } => {
            blocks.len() <= 4
                && *max_domain <= 4
                && blocks.iter().all(|b| b.attributes <= 3 && b.tuples <= 16)
        }
    };
    if small {
        let _ = spec.generate(0);
    }
});
