#![no_main]

use libfuzzer_sys::fuzz_target;
use sinebox::SeparablePotential;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(pot) = SeparablePotential::parse(text, 1.5, 2.5) else {
        return;
    };
    // anything that parses must be usable without panicking
    let _ = pot.evaluate(0.3, -0.7);
    let _ = pot.evaluate(f64::NAN, 0.0);
    let moved = pot.with_domain(4.0, 4.0).unwrap();
    assert_eq!(pot.terms().len(), moved.terms().len());
});
