use std::io::Write;

use mslv::io::{format_gas, load_gas, Gas};
use mslv::eos::ParameterWarning;
use mslv::MslvError;

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn built_in_and_file_methane_agree() {
    let (builtin, _) = load_gas("methane").unwrap();
    let file = write_temp(&format_gas(&Gas::methane()));
    let (loaded, _) = load_gas(file.path().to_str().unwrap()).unwrap();
    assert_eq!(builtin, loaded);
    assert_eq!(builtin.eos().unwrap(), loaded.eos().unwrap());
}

#[test]
fn stated_m_far_from_omega_warns() {
    let text = format_gas(&Gas::methane()).replace("m = 0.391", "m = 0.45");
    let file = write_temp(&text);
    let (_, warnings) = load_gas(file.path().to_str().unwrap()).unwrap();
    assert!(warnings.iter().any(|w| matches!(w, ParameterWarning::MDiffersFromOmega { .. })));
}

#[test]
fn inconsistent_z_is_rejected() {
    let text = format_gas(&Gas::methane()).replace("Z = 0.286", "Z = 0.4");
    let file = write_temp(&text);
    let err = load_gas(file.path().to_str().unwrap()).unwrap_err();
    assert!(matches!(err, MslvError::Validation(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn typo_in_key_names_the_line() {
    let text = format_gas(&Gas::methane()).replace("omega", "omgea");
    let file = write_temp(&text);
    let err = load_gas(file.path().to_str().unwrap()).unwrap_err();
    assert!(err.to_string().contains("unknown key 'omgea'"), "{err}");
    assert!(matches!(err, MslvError::Parse { line: 6, .. }));
}
