//! Convert KnotInfo-style PD notation into the text PD format, reading the
//! data from a local CSV export.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("csv has no header row")]
    NoHeader,
    #[error("csv is missing a `{0}` column")]
    MissingColumn(&'static str),
    #[error("knot `{0}` not found")]
    KnotNotFound(String),
    #[error("malformed PD notation: {0}")]
    BadPd(String),
}

/// Parse one CSV record, honoring double-quoted fields with `""` escapes.
fn parse_csv_record(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if field.is_empty() => quoted = true,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut field));
            }
            _ => field.push(ch),
        }
    }
    fields.push(field);
    fields
}

fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Look up a knot by name in a KnotInfo CSV export and return its PD
/// notation string, e.g. `PD[X[1,4,2,5],...]`.
pub fn lookup_pd_notation(csv: &str, name: &str) -> Result<String, IngestError> {
    let mut lines = csv.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(IngestError::NoHeader)?;
    let columns = parse_csv_record(header);
    let name_col = columns
        .iter()
        .position(|c| normalize_name(c) == "name")
        .ok_or(IngestError::MissingColumn("Name"))?;
    let pd_col = columns
        .iter()
        .position(|c| normalize_name(c).contains("pdnotation"))
        .ok_or(IngestError::MissingColumn("PD Notation"))?;
    let want = normalize_name(name);
    for line in lines {
        let fields = parse_csv_record(line);
        if fields.get(name_col).map(|f| normalize_name(f)) == Some(want.clone()) {
            return fields
                .get(pd_col)
                .cloned()
                .ok_or(IngestError::MissingColumn("PD Notation"));
        }
    }
    Err(IngestError::KnotNotFound(name.to_string()))
}

/// Convert `PD[X[a,b,c,d], ...]` into the whitespace text format
/// `X(a,b,c,d) ...`.
pub fn pd_notation_to_text(notation: &str) -> Result<String, IngestError> {
    let s = notation.trim();
    let inner = s
        .strip_prefix("PD[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| IngestError::BadPd(format!("expected PD[...], found `{s}`")))?;
    let mut terms = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let tag = rest
            .chars()
            .next()
            .filter(|c| *c == 'X' || *c == 'P')
            .ok_or_else(|| IngestError::BadPd(format!("expected X[...] near `{rest}`")))?;
        rest = rest[1..]
            .trim_start()
            .strip_prefix('[')
            .ok_or_else(|| IngestError::BadPd(format!("expected `[` near `{rest}`")))?;
        let end = rest
            .find(']')
            .ok_or_else(|| IngestError::BadPd("unterminated crossing".into()))?;
        let body = &rest[..end];
        let arcs: Result<Vec<u32>, _> = body.split(',').map(|p| p.trim().parse::<u32>()).collect();
        let arcs = arcs.map_err(|_| IngestError::BadPd(format!("bad arcs `{body}`")))?;
        if arcs.len() != 4 {
            return Err(IngestError::BadPd(format!(
                "crossing `{body}` must list four arcs"
            )));
        }
        terms.push(format!("{tag}({},{},{},{})", arcs[0], arcs[1], arcs[2], arcs[3]));
        rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    if terms.is_empty() {
        return Err(IngestError::BadPd("empty PD".into()));
    }
    Ok(terms.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{bracket_naive, Engine};
    use crate::diagram::parse_pd_text;

    const CSV: &str = "Name,Crossing Number,PD Notation\n\
        3_1,3,\"PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]\"\n\
        4_1,4,\"PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]\"\n";

    #[test]
    fn lookup_and_convert() {
        let pd = lookup_pd_notation(CSV, "3_1").unwrap();
        let text = pd_notation_to_text(&pd).unwrap();
        assert_eq!(text, "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)");
        assert!(lookup_pd_notation(CSV, "31").is_ok());
        assert_eq!(
            lookup_pd_notation(CSV, "nosuch"),
            Err(IngestError::KnotNotFound("nosuch".into()))
        );
    }

    #[test]
    fn ingested_trefoil_matches_fixture_up_to_mirror() {
        let pd = lookup_pd_notation(CSV, "3_1").unwrap();
        let text = pd_notation_to_text(&pd).unwrap();
        let ingested = parse_pd_text(&text).unwrap();
        let fixture = parse_pd_text("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        let a = bracket_naive(&ingested).unwrap();
        let b = bracket_naive(&fixture).unwrap();
        assert_eq!(a, b.mirror_a());
        let _ = Engine::Contract;
    }

    #[test]
    fn bad_notation_rejected() {
        assert!(pd_notation_to_text("X[1,2,3,4]").is_err());
        assert!(pd_notation_to_text("PD[X[1,2,3]]").is_err());
        assert!(pd_notation_to_text("PD[]").is_err());
    }
}
