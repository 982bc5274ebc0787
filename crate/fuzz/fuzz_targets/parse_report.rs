#![no_main]

use libfuzzer_sys::fuzz_target;
use yamabe_cli::report::ReportDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = ReportDocument::from_json(text) {
        let out = doc.to_json();
        let back = ReportDocument::from_json(&out).expect("serialized report parses");
        assert_eq!(back.to_json(), out);
    }
});
