//! Ideal files:
//!
//! ```text
//! # comments and blank lines are ignored
//! ring p 32003 vars x0 x1 x2 x3
//! name two skew lines
//! expect arith-buchsbaum yes
//! ideal
//! x0*x2
//! x0*x3
//! ```

use std::collections::BTreeMap;

use buchsbaum_core::monomial::MAX_VARS;
use buchsbaum_core::poly::parse_poly;
use buchsbaum_core::{Error, Poly, Result, Ring};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct IdealFile {
    pub ring: Ring,
    pub names: Vec<String>,
    pub gens: Vec<Poly>,
    pub name: Option<String>,
    /// Golden values, keyed by report field.
    pub expect: BTreeMap<String, String>,
    pub digest: String,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Column (1-based) of the first byte of `word` inside `line`.
fn col_of(line: &str, word: &str) -> usize {
    word.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_header(lineno: usize, line: &str) -> Result<(Ring, Vec<String>)> {
    let words: Vec<&str> = line.split_whitespace().collect();
    if words.len() < 5 || words[0] != "ring" || words[1] != "p" || words[3] != "vars" {
        return Err(parse_err(lineno, 1, "expected 'ring p <prime> vars <names...>'"));
    }
    let p: u32 = words[2]
        .parse()
        .map_err(|_| parse_err(lineno, col_of(line, words[2]), format!("'{}' is not an integer", words[2])))?;
    let names: Vec<String> = words[4..].iter().map(|s| s.to_string()).collect();
    for (k, w) in words[4..].iter().enumerate() {
        if !is_identifier(w) {
            return Err(parse_err(lineno, col_of(line, w), format!("'{w}' is not a variable name")));
        }
        if names[..k].contains(&w.to_string()) {
            return Err(parse_err(lineno, col_of(line, w), format!("variable '{w}' repeated")));
        }
    }
    if names.len() > MAX_VARS {
        return Err(parse_err(lineno, col_of(line, words[4]), format!("at most {MAX_VARS} variables")));
    }
    let ring = Ring::new(p, names.len()).map_err(|e| {
        let msg = match e {
            Error::Precondition(m) => m,
            other => other.to_string(),
        };
        parse_err(lineno, col_of(line, words[2]), msg)
    })?;
    Ok((ring, names))
}

/// SHA-256 of the raw input, hex encoded.
pub fn digest(src: &str) -> String {
    hex::encode(Sha256::digest(src.as_bytes()))
}

pub fn parse_ideal(src: &str) -> Result<IdealFile> {
    let digest = digest(src);
    let mut header: Option<(Ring, Vec<String>)> = None;
    let mut name = None;
    let mut expect = BTreeMap::new();
    let mut in_ideal = false;
    let mut gens = Vec::new();
    let mut last_line = 0;
    for (k, raw) in src.lines().enumerate() {
        let lineno = k + 1;
        last_line = lineno;
        let line = raw.trim_end();
        let content = line.trim_start();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let indent = line.len() - content.len();
        let Some((ring, names)) = &header else {
            header = Some(parse_header(lineno, line)?);
            continue;
        };
        if in_ideal {
            let p = parse_poly(*ring, names, content).map_err(|e| match e {
                Error::Parse { col, msg, .. } => parse_err(lineno, indent + col, msg),
                other => other,
            })?;
            if !p.is_homogeneous() {
                return Err(parse_err(lineno, indent + 1, format!("generator '{content}' is not homogeneous")));
            }
            if !p.is_zero() {
                gens.push(p);
            }
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match key {
            "ideal" if rest.trim().is_empty() => in_ideal = true,
            "name" => name = Some(rest.trim().to_string()),
            "expect" => {
                let mut it = rest.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some(k), Some(v), None) => {
                        expect.insert(k.to_string(), v.to_string());
                    }
                    _ => return Err(parse_err(lineno, indent + 1, "expected 'expect <field> <value>'")),
                }
            }
            _ => return Err(parse_err(lineno, indent + 1, format!("unexpected line '{content}'"))),
        }
    }
    let Some((ring, names)) = header else {
        return Err(parse_err(last_line.max(1), 1, "missing 'ring' header"));
    };
    if !in_ideal {
        return Err(parse_err(last_line.max(1), 1, "missing 'ideal' section"));
    }
    Ok(IdealFile { ring, names, gens, name, expect, digest })
}

/// The ideal file text for a list of generators.
pub fn format_ideal(ring: Ring, names: &[String], gens: &[Poly], name: Option<&str>) -> String {
    let mut s = format!("ring p {} vars {}\n", ring.p, names.join(" "));
    if let Some(n) = name {
        s.push_str(&format!("name {n}\n"));
    }
    s.push_str("ideal\n");
    for g in gens {
        s.push_str(&g.fmt_with(names));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SKEW: &str = "ring p 32003 vars x0 x1 x2 x3\nideal\nx0*x2\nx0*x3\nx1*x2\nx1*x3\n";

    #[test]
    fn parses_the_reference_file() {
        let f = parse_ideal(SKEW).unwrap();
        assert_eq!(f.ring.nvars, 4);
        assert_eq!(f.gens.len(), 4);
        assert_eq!(f.digest.len(), 64);
        assert_eq!(parse_ideal(&format_ideal(f.ring, &f.names, &f.gens, None)).unwrap().gens, f.gens);
    }

    #[test]
    fn reports_positions() {
        let e = parse_ideal("ring p 32003 vars x y z\nideal\nx^2 + y\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, col: 1, msg: "generator 'x^2 + y' is not homogeneous".into() });
        let e = parse_ideal("ring p 32003 vars x y z\nideal\n  x*y + w\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, col, .. } if col > 2), "{e:?}");
        let e = parse_ideal("ring p 32004 vars x y\nideal\nx\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 8, .. }), "{e:?}");
        let e = parse_ideal("ring p 7 vars x x\nideal\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 17, .. }), "{e:?}");
    }

    #[test]
    fn metadata_and_comments() {
        let f = parse_ideal("# c\nring p 7 vars a b\nname pair\nexpect reg 1\n\nideal\na\n# x\nb\n").unwrap();
        assert_eq!(f.name.as_deref(), Some("pair"));
        assert_eq!(f.expect.get("reg").map(String::as_str), Some("1"));
        assert_eq!(f.gens.len(), 2);
    }

    #[test]
    fn empty_ideal_parses_but_has_no_generators() {
        let f = parse_ideal("ring p 32003 vars x0 x1\nideal\n").unwrap();
        assert!(f.gens.is_empty());
        assert!(parse_ideal("ring p 32003 vars x0 x1\n").is_err());
    }
}
