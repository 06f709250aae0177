//! Line-oriented coordinate conversion for shell pipelines.
//!
//! Each input line holds two numbers separated by a comma and/or whitespace:
//! `ct x` for `to-rindler`, `tau chi` for `to-minkowski`. Blank lines, lines
//! starting with `#` and a header naming the input columns are skipped, so the
//! output of one direction can be piped straight into the other.

use std::io::BufRead;

use horizonlab_core::units::Dimension;
use horizonlab_core::{
    minkowski_to_rindler, rindler_to_minkowski, MinkowskiEvent, RindlerEvent, RindlerFrame,
};

use crate::config::{TransformConfig, TransformDirection, UnitSystem};
use crate::table::OutputTable;
use crate::CliError;

impl TransformDirection {
    pub fn input_columns(self) -> [&'static str; 2] {
        match self {
            TransformDirection::ToRindler => ["ct", "x"],
            TransformDirection::ToMinkowski => ["tau", "chi"],
        }
    }

    pub fn output_columns(self) -> [&'static str; 2] {
        match self {
            TransformDirection::ToRindler => ["tau", "chi"],
            TransformDirection::ToMinkowski => ["ct", "x"],
        }
    }
}

fn parse_pair(line: &str) -> Option<Result<[f64; 2], String>> {
    let fields: Vec<&str> = line
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
        .collect();
    if fields.is_empty() {
        return None;
    }
    if fields.len() != 2 {
        return Some(Err(format!(
            "expected 2 numbers, found {} fields",
            fields.len()
        )));
    }
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    Some(parse(fields[0]).and_then(|a| Ok([a, parse(fields[1])?])))
}

pub fn run_transform(
    cfg: &TransformConfig,
    units: UnitSystem,
    input: impl BufRead,
) -> Result<OutputTable, CliError> {
    let frame = RindlerFrame::new(cfg.a)?;
    let header = cfg.direction.input_columns().join(",");
    let mut table = OutputTable::new(cfg.direction.output_columns());
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') || trimmed.replace(' ', "") == header {
            continue;
        }
        let Some(pair) = parse_pair(trimmed) else {
            continue;
        };
        let [p, q] = pair.map_err(|message| CliError::Input {
            line: line_no,
            message,
        })?;
        let row = match cfg.direction {
            TransformDirection::ToRindler => {
                let e = minkowski_to_rindler(&MinkowskiEvent::longitudinal(p, q), &frame);
                let e = e.map_err(|err| CliError::Input {
                    line: line_no,
                    message: err.to_string(),
                })?;
                vec![units.from_geometric(e.tau, Dimension::Time), e.chi]
            }
            TransformDirection::ToMinkowski => {
                let tau = units.to_geometric(p, Dimension::Time);
                let e = rindler_to_minkowski(&RindlerEvent::new(tau, q), &frame);
                let e = e.map_err(|err| CliError::Input {
                    line: line_no,
                    message: err.to_string(),
                })?;
                vec![e.ct, e.x]
            }
        };
        table.push(row);
    }
    table.set_meta("mode", "transform");
    table.set_meta("units", units.name());
    table.set_meta("a", units.from_geometric(cfg.a, Dimension::Acceleration));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(direction: TransformDirection) -> TransformConfig {
        TransformConfig { a: 1.0, direction }
    }

    #[test]
    fn converts_each_line() {
        let input = "# events\nct,x\n0,1\n\n0.5 2\n";
        let t = run_transform(
            &cfg(TransformDirection::ToRindler),
            UnitSystem::Geometric,
            input.as_bytes(),
        )
        .unwrap();
        assert_eq!(t.rows().len(), 2);
        assert_eq!(t.rows()[0], vec![0.0, 1.0]);
        assert!((t.rows()[1][0] - 0.25f64.atanh()).abs() < 1e-15);
    }

    #[test]
    fn output_pipes_back_into_the_inverse() {
        let input = "0.3,1.7\n-2,5\n";
        let fwd = run_transform(
            &cfg(TransformDirection::ToRindler),
            UnitSystem::Geometric,
            input.as_bytes(),
        )
        .unwrap()
        .to_csv();
        let back = run_transform(
            &cfg(TransformDirection::ToMinkowski),
            UnitSystem::Geometric,
            fwd.as_bytes(),
        )
        .unwrap();
        assert!((back.rows()[0][0] - 0.3).abs() < 1e-15);
        assert!((back.rows()[1][1] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn bad_lines_are_reported_with_their_number() {
        for input in ["0,1\n1,0.5\n", "0,1\nfoo,2\n", "0,1\n1,2,3\n"] {
            match run_transform(
                &cfg(TransformDirection::ToRindler),
                UnitSystem::Geometric,
                input.as_bytes(),
            ) {
                Err(CliError::Input { line, .. }) => assert_eq!(line, 2),
                other => panic!("{other:?}"),
            }
        }
    }
}
