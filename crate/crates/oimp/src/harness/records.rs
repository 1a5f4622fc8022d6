//! Campaign CSV emission and parsing.
//!
//! Columns are fixed: `run,round,policy,influencers,spread_size,
//! new_activations,cumulative`, with the selected influencer ids `+`-joined.
//! Output contains no timestamps so identical configurations produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::campaign::RoundRecord;
use super::HarnessError;

pub const CSV_HEADER: &str = "run,round,policy,influencers,spread_size,new_activations,cumulative";

pub fn records_to_csv(records: &[RoundRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let ids: Vec<String> = r.selected.iter().map(|k| k.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.run,
            r.round,
            r.policy,
            ids.join("+"),
            r.spread_size,
            r.new_activations,
            r.cumulative
        )
        .expect("string write");
    }
    out
}

pub fn write_records_csv(path: &Path, records: &[RoundRecord]) -> Result<(), HarnessError> {
    fs::write(path, records_to_csv(records))?;
    Ok(())
}

pub fn parse_records_csv(text: &str) -> Result<Vec<RoundRecord>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        other => {
            return Err(HarnessError::Csv {
                line: 1,
                text: other.map(|(_, l)| l).unwrap_or("").to_string(),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = || HarnessError::Csv {
            line: idx + 1,
            text: line.to_string(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(err());
        }
        let selected = fields[3]
            .split('+')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<usize>, _>>()
            .map_err(|_| err())?;
        records.push(RoundRecord {
            run: fields[0].parse().map_err(|_| err())?,
            round: fields[1].parse().map_err(|_| err())?,
            policy: fields[2].to_string(),
            selected,
            spread_size: fields[4].parse().map_err(|_| err())?,
            new_activations: fields[5].parse().map_err(|_| err())?,
            cumulative: fields[6].parse().map_err(|_| err())?,
        });
    }
    Ok(records)
}
