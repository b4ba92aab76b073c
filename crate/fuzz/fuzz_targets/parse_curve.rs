#![no_main]

use libfuzzer_sys::fuzz_target;
use sinebox::LhatCurve;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(curve) = LhatCurve::parse(text) else {
        return;
    };
    // the table rendering writes floats with full precision, so a parsed
    // curve must survive one render/parse cycle bit for bit
    let reparsed = LhatCurve::parse(&curve.to_table()).expect("rendered table must parse");
    assert_eq!(curve.samples().len(), reparsed.samples().len());
    for (a, b) in curve.samples().iter().zip(reparsed.samples()) {
        assert_eq!(a.n_basis, b.n_basis);
        assert_eq!(a.l_hat.to_bits(), b.l_hat.to_bits());
        assert_eq!(a.e0.to_bits(), b.e0.to_bits());
    }
    // evaluation must stay finite for tables of plausible magnitude;
    // astronomically large samples are allowed to overflow
    let sane = curve
        .samples()
        .iter()
        .all(|s| s.n_basis <= 1_000_000 && s.l_hat <= 1e6);
    if sane {
        let lo = curve.samples()[0].n_basis as f64;
        let hi = curve.samples().last().unwrap().n_basis as f64;
        for t in [lo - 1.0, lo, 0.5 * (lo + hi), hi, hi + 1.0] {
            assert!(curve.length_at(t).is_finite());
        }
    }
});
