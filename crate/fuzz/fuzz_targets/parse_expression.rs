#![no_main]

use libfuzzer_sys::fuzz_target;
use yamabe_core::Expression;

const VARS: [&str; 4] = ["t", "u", "v1", "v2"];

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(e) = Expression::parse(text, &VARS) else { return };
    // Printing must give text that parses back to the same tree.
    let printed = e.to_string();
    let again = Expression::parse(&printed, &VARS).expect("printed expression reparses");
    assert_eq!(again.to_string(), printed);
    let p = [0.3, -0.7, 1.1, 2.0];
    let _ = e.eval(&p);
    let _ = e.jet(&p, &[0, 1, 2, 3]);
});
