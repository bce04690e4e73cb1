//! Bundled algebra files.

use crate::error::{Error, Result};
use crate::io::AlgebraFile;
use crate::quasilie::LieAlgebraSpec;

pub const SU2: &str = include_str!("../data/su2.json");
pub const SL2: &str = include_str!("../data/sl2.json");
pub const NONABELIAN2: &str = include_str!("../data/nonabelian2.json");
pub const U1: &str = include_str!("../data/u1.json");
pub const T2: &str = include_str!("../data/t2.json");

pub const NAMES: [&str; 5] = ["su2", "sl2", "nonabelian2", "u1", "t2"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "su2" => Some(SU2),
        "sl2" => Some(SL2),
        "nonabelian2" => Some(NONABELIAN2),
        "u1" => Some(U1),
        "t2" => Some(T2),
        _ => None,
    }
}

pub fn file(name: &str) -> Result<AlgebraFile> {
    let text = source(name).ok_or_else(|| Error::Model(format!("no bundled model {name:?}")))?;
    AlgebraFile::from_json(text)
}

pub fn spec(name: &str) -> Result<LieAlgebraSpec> {
    file(name)?.to_spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_models_parse_and_validate() {
        for name in NAMES {
            let s = spec(name).unwrap();
            assert_eq!(s.name(), name);
            assert!(file(name).unwrap().representation().unwrap().is_some());
        }
    }

    #[test]
    fn forms_present_except_nonabelian() {
        assert!(spec("nonabelian2").unwrap().form().is_none());
        assert!(spec("su2").unwrap().form().is_some());
    }
}
