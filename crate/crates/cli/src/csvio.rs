//! Minimal CSV writer/reader (RFC 4180 quoting, UTF-8, LF line endings).
//! Fields are quoted only when they contain a comma, quote or newline, so
//! identical data always produces identical bytes.

use anyhow::{bail, Result};

pub fn escape_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| escape_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| escape_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn parse_line(line: &str) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut in_quotes = false;
    while let Some(c) = chars.next() {
        if in_quotes {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push(c);
            }
        } else {
            match c {
                '"' if field.is_empty() => in_quotes = true,
                ',' => fields.push(std::mem::take(&mut field)),
                _ => field.push(c),
            }
        }
    }
    if in_quotes {
        bail!("unterminated quoted field in line: {line}");
    }
    fields.push(field);
    Ok(fields)
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines();
    let header = match lines.next() {
        Some(h) if !h.trim().is_empty() => parse_line(h)?,
        _ => bail!("CSV has no header row"),
    };
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_line(line)?;
        if row.len() != header.len() {
            bail!(
                "CSV row has {} fields, header has {}: {line}",
                row.len(),
                header.len()
            );
        }
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_quoted_fields() {
        let header = ["channel", "value"];
        let rows = vec![
            vec!["werner:d=4,lambda=0.75".to_string(), "0.5".to_string()],
            vec!["plain".to_string(), "quote\"inside".to_string()],
        ];
        let text = write_csv(&header, &rows);
        let table = parse_csv(&text).unwrap();
        assert_eq!(table.header, vec!["channel", "value"]);
        assert_eq!(table.rows, rows);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(parse_csv("a,b\n1,2,3\n").is_err());
        assert!(parse_csv("").is_err());
    }
}
