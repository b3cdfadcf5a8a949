//! Input files and list-valued flags.

use std::fs;
use std::path::Path;

use seqbf::seqbf::SampleSequence;

use crate::error::{CliError, CliResult};

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Non-comment tokens with their 1-based line numbers.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split(',').map(move |t| (i + 1, t.trim())))
        .filter(|(_, t)| !t.is_empty())
}

pub fn parse_samples(text: &str) -> CliResult<SampleSequence> {
    let values = tokens(text)
        .map(|(line, t)| match t {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(CliError::Validation(format!(
                "non-binary observation at line {line}"
            ))),
        })
        .collect::<CliResult<Vec<u8>>>()?;
    Ok(SampleSequence::new(values)?)
}

pub fn parse_sample_file(path: &Path) -> CliResult<SampleSequence> {
    parse_samples(&read(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn parse_numbers(text: &str) -> CliResult<Vec<f64>> {
    tokens(text)
        .map(|(line, t)| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Validation(format!("invalid number {t:?} at line {line}")))
        })
        .collect()
}

pub fn parse_number_file(path: &Path) -> CliResult<Vec<f64>> {
    parse_numbers(&read(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// `0.15:0.45,0.45:0.55`
pub fn parse_segments(list: &str) -> CliResult<Vec<(f64, f64)>> {
    let bad = || CliError::Validation(format!("invalid segment list {list:?}; expected A:B,B:C"));
    list.split(',')
        .map(|part| {
            let (lo, hi) = part.trim().split_once(':').ok_or_else(bad)?;
            let lo = lo.trim().parse::<f64>().map_err(|_| bad())?;
            let hi = hi.trim().parse::<f64>().map_err(|_| bad())?;
            Ok((lo, hi))
        })
        .collect()
}

pub fn parse_sizes(list: &str) -> CliResult<Vec<u64>> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Validation(format!("invalid sample size {t:?}")))
        })
        .collect()
}
