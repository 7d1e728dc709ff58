//! Plain-text SFT format: a line with `N`, then `N` rows of 0/1 entries,
//! either space separated (`1 1 0`) or packed (`110`). `#` starts a comment.

use super::sft::Sft;
use crate::error::{Error, Result};

pub fn parse_sft(text: &str) -> Result<Sft> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing size line".into() })?;
    let n: usize = head
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("expected alphabet size, found '{head}'") })?;
    if n == 0 {
        return Err(Error::Parse { line, msg: "alphabet size must be positive".into() });
    }
    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        let cells: Vec<&str> = if text.contains(char::is_whitespace) {
            text.split_whitespace().collect()
        } else {
            text.split("").filter(|c| !c.is_empty()).collect()
        };
        let row = cells
            .iter()
            .map(|c| match *c {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(Error::Parse { line, msg: format!("matrix entries must be 0 or 1, found '{other}'") }),
            })
            .collect::<Result<Vec<u8>>>()?;
        if row.len() != n {
            return Err(Error::Parse { line, msg: format!("row has {} entries, expected {n}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse { line: 0, msg: format!("found {} rows, expected {n}", rows.len()) });
    }
    Sft::from_matrix(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_packed_rows() {
        let g = Sft::golden_mean();
        assert_eq!(parse_sft(&g.to_string()).unwrap(), g);
        assert_eq!(parse_sft("# golden\n2\n11\n10\n").unwrap(), g);
        assert!(matches!(parse_sft("2\n1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sft("2\n12\n10"), Err(Error::Parse { line: 2, .. })));
    }
}
