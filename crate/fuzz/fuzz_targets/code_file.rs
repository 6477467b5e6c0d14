#![no_main]

use libfuzzer_sys::fuzz_target;
use srscl::formats::CodeFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = CodeFile::parse(text) {
        let code = file.to_code().expect("validated file converts");
        assert_eq!(code.dimension(), file.k);
        let again = CodeFile::parse(&file.to_json()).expect("written file parses");
        assert_eq!(again, file);
    }
});
