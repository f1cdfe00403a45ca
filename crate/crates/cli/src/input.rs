//! System definition files.
//!
//! ```json
//! {"generators": [{"type": "rotation", "alpha": 0.618}, {"type": "flip"}]}
//! ```
//!
//! Reals may be written as JSON numbers or as decimal strings.

use std::fmt;

use ifs_lab::{Generator, IfsSystem};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a real number or a decimal string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                match v.trim().parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Real(x)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_any(RealVisitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum GeneratorSpec {
    Rotation { alpha: Real },
    // a struct variant so that stray fields are still rejected
    Flip {},
    NorthSouth { q: Real, lambda: Real },
    PiecewiseLinear { breakpoints: Vec<(Real, Real)> },
    Expanding { m: u32 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSpec {
    generators: Vec<GeneratorSpec>,
}

impl GeneratorSpec {
    fn build(self) -> ifs_lab::Result<Generator> {
        match self {
            GeneratorSpec::Rotation { alpha } => Ok(Generator::rotation(alpha.0)),
            GeneratorSpec::Flip {} => Ok(Generator::flip()),
            GeneratorSpec::NorthSouth { q, lambda } => Generator::north_south(q.0, lambda.0),
            GeneratorSpec::PiecewiseLinear { breakpoints } => {
                Generator::piecewise_linear(breakpoints.into_iter().map(|(x, y)| (x.0, y.0)).collect())
            }
            GeneratorSpec::Expanding { m } => Generator::expanding(m),
        }
    }
}

/// Parses a system definition; `origin` names the source in diagnostics.
pub fn parse_system(text: &str, origin: &str) -> Result<IfsSystem, CliError> {
    let spec: SystemSpec = serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    let generators = spec
        .generators
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.build().map_err(|e| CliError::Input(format!("{origin}: generators[{i}]: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    IfsSystem::new(generators).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_strings() {
        let text = r#"{"generators":[{"type":"rotation","alpha":"0.25"},{"type":"flip"},
            {"type":"north_south","q":0,"lambda":2.0},
            {"type":"piecewise_linear","breakpoints":[[0,0],["0.5",0.6],[1,1]]},
            {"type":"expanding","m":2}]}"#;
        let ifs = parse_system(text, "test").unwrap();
        assert_eq!(ifs.k(), 5);
        assert_eq!(ifs.generator(1), &Generator::rotation(0.25));
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let err = parse_system(r#"{"generators":[{"type":"flip","extra":1}]}"#, "f.json").unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        let err = parse_system("{\"generators\":[\n{\"type\":\"rotation\"}]}", "f.json").unwrap_err();
        assert!(err.to_string().contains("alpha") && err.to_string().contains("line 2"), "{err}");
        let err = parse_system(r#"{"generators":[{"type":"north_south","q":0,"lambda":0.5}]}"#, "f.json").unwrap_err();
        assert!(err.to_string().contains("generators[0]"), "{err}");
        assert!(parse_system(r#"{"generators":[]}"#, "f.json").is_err());
        assert!(parse_system(r#"{"generators":[{"type":"rotation","alpha":"abc"}]}"#, "f.json").is_err());
    }
}
