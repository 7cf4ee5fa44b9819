//! ICCMA trivial graph format: `p af <n>` then one `<attacker> <attacked>`
//! pair per line, arguments numbered from 1. Lines starting with `#` are
//! comments.

use super::ArgumentationFramework;
use crate::error::{Error, Result};

/// Writes `af` with arguments numbered in id order. Returns the text and the
/// id of each number (index 0 is argument 1).
pub fn to_iccma(af: &ArgumentationFramework) -> (String, Vec<String>) {
    let mut out = format!("p af {}\n", af.len());
    for (f, t) in af.attacks() {
        let fi = af.position(f).expect("known") + 1;
        let ti = af.position(t).expect("known") + 1;
        out.push_str(&format!("{fi} {ti}\n"));
    }
    (out, af.args().to_vec())
}

/// Reads a framework whose argument ids are the numbers `1..=n`.
pub fn from_iccma(text: &str) -> Result<ArgumentationFramework> {
    let mut n: Option<usize> = None;
    let mut attacks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| Error::Iccma(format!("line {}: {msg}", lineno + 1));
        match (n, fields.as_slice()) {
            (None, ["p", "af", count]) => {
                n = Some(count.parse().map_err(|_| err("bad argument count"))?);
            }
            (None, _) => return Err(err("expected `p af <n>` header")),
            (Some(count), [a, b]) => {
                let parse = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(i) if (1..=count).contains(&i) => Ok(i),
                        _ => Err(err(&format!("argument `{s}` out of range 1..={count}"))),
                    }
                };
                attacks.push((parse(a)?.to_string(), parse(b)?.to_string()));
            }
            (Some(_), _) => return Err(err("expected `<attacker> <attacked>`")),
        }
    }
    let n = n.ok_or_else(|| Error::Iccma("missing `p af <n>` header".into()))?;
    ArgumentationFramework::new((1..=n).map(|i| i.to_string()), attacks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dung_example_export() {
        let af = ArgumentationFramework::new(["A", "B", "C", "D"], [("D", "A")]).unwrap();
        let (text, ids) = to_iccma(&af);
        assert_eq!(text, "p af 4\n4 1\n");
        assert_eq!(ids, ["A", "B", "C", "D"]);
        let back = from_iccma(&text).unwrap();
        assert_eq!(back.attacks().collect::<Vec<_>>(), vec![("4", "1")]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_iccma("1 2\n").is_err());
        assert!(from_iccma("p af 2\n1 3\n").is_err());
        assert!(from_iccma("# nothing\n").is_err());
        assert_eq!(from_iccma("# c\np af 0\n").unwrap().len(), 0);
    }
}
