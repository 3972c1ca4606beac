//! Line-oriented system-definition documents.
//!
//! ```text
//! system <name>
//! alphabet <g0> <g1> ...          # optional; default inferred from rules
//! rule <g> -> <g g g ...>
//! code <g> -> <0|1>               # optional; identity if absent
//! start <g>
//! index_base <0|1>
//! ```
//!
//! A document naming a built-in system and containing no rules resolves to
//! that built-in.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution};
use crate::system::{IndexBase, MorphicSystem, BUILTIN_NAMES};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn single_glyph(line: usize, tok: &str) -> Result<char> {
    let mut chars = tok.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(syntax(line, format!("expected a single glyph, found '{tok}'"))),
    }
}

/// Splits `lhs -> rhs`, returning the glyph on the left and the raw right side.
fn arrow(line: usize, rest: &str) -> Result<(char, &str)> {
    let (lhs, rhs) = rest
        .split_once("->")
        .ok_or_else(|| syntax(line, "expected '->'"))?;
    let lhs = lhs.trim();
    if lhs.is_empty() {
        return Err(syntax(line, "missing letter before '->'"));
    }
    Ok((single_glyph(line, lhs)?, rhs.trim()))
}

pub fn parse_system(text: &str) -> Result<MorphicSystem> {
    let mut name: Option<String> = None;
    let mut alphabet: Option<Vec<char>> = None;
    let mut rules: Vec<(char, Vec<char>)> = Vec::new();
    let mut codes: BTreeMap<char, u8> = BTreeMap::new();
    let mut start: Option<char> = None;
    let mut index_base: Option<IndexBase> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match keyword {
            "system" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax(line, "expected 'system <name>'"));
                }
                if name.replace(rest.to_string()).is_some() {
                    return Err(syntax(line, "duplicate 'system' line"));
                }
            }
            "alphabet" => {
                let glyphs = rest
                    .split_whitespace()
                    .map(|t| single_glyph(line, t))
                    .collect::<Result<Vec<_>>>()?;
                if glyphs.is_empty() {
                    return Err(syntax(line, "empty alphabet"));
                }
                if alphabet.replace(glyphs).is_some() {
                    return Err(syntax(line, "duplicate 'alphabet' line"));
                }
            }
            "rule" => {
                let (head, body) = arrow(line, rest)?;
                if rules.iter().any(|(h, _)| *h == head) {
                    return Err(syntax(line, format!("second rule for '{head}'")));
                }
                let body: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
                if body.is_empty() {
                    return Err(Error::ErasingRule(head));
                }
                rules.push((head, body));
            }
            "code" => {
                let (glyph, value) = arrow(line, rest)?;
                let v = match value {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(syntax(line, format!("code must be 0 or 1, found '{value}'"))),
                };
                if codes.insert(glyph, v).is_some() {
                    return Err(syntax(line, format!("second code for '{glyph}'")));
                }
            }
            "start" => {
                let g = single_glyph(line, rest)?;
                if start.replace(g).is_some() {
                    return Err(syntax(line, "duplicate 'start' line"));
                }
            }
            "index_base" => {
                let b = rest
                    .parse::<u64>()
                    .ok()
                    .and_then(IndexBase::from_value)
                    .ok_or_else(|| syntax(line, format!("index_base must be 0 or 1, found '{rest}'")))?;
                if index_base.replace(b).is_some() {
                    return Err(syntax(line, "duplicate 'index_base' line"));
                }
            }
            other => return Err(syntax(line, format!("unknown keyword '{other}'"))),
        }
    }

    if rules.is_empty() {
        return match name {
            Some(n) if BUILTIN_NAMES.contains(&n.as_str()) => MorphicSystem::builtin(&n),
            Some(n) => Err(Error::UnknownSystem(n)),
            None => Err(syntax(1, "document defines no rules and names no built-in system")),
        };
    }

    let glyphs = match alphabet {
        Some(a) => a,
        None => {
            let mut seen: Vec<char> = rules
                .iter()
                .flat_map(|(h, b)| std::iter::once(*h).chain(b.iter().copied()))
                .chain(start)
                .collect();
            seen.sort_unstable();
            seen.dedup();
            seen
        }
    };
    let lookup = |c: char| -> Result<Letter> {
        glyphs
            .iter()
            .position(|&g| g == c)
            .map(|i| Letter(i as u8))
            .ok_or(Error::UnknownGlyph(c))
    };

    let mut images: Vec<Option<Vec<Letter>>> = vec![None; glyphs.len()];
    for (head, body) in &rules {
        let a = lookup(*head)?;
        images[a.id()] = Some(body.iter().map(|&c| lookup(c)).collect::<Result<_>>()?);
    }
    let images = images
        .into_iter()
        .zip(&glyphs)
        .map(|(img, &g)| img.ok_or_else(|| Error::InvalidSystem(format!("no rule for letter '{g}'"))))
        .collect::<Result<Vec<_>>>()?;
    let sub = Substitution::new(glyphs.clone(), images)?;

    for &g in codes.keys() {
        lookup(g)?;
    }
    let coding = if codes.is_empty() {
        glyphs
            .iter()
            .map(|&g| match g {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::CodingNotTotal(other)),
            })
            .collect::<Result<Vec<u8>>>()?
    } else {
        glyphs
            .iter()
            .map(|g| codes.get(g).copied().ok_or(Error::CodingNotTotal(*g)))
            .collect::<Result<Vec<u8>>>()?
    };

    let start = start.ok_or_else(|| Error::InvalidSystem("missing 'start' line".into()))?;
    MorphicSystem::new(
        name.unwrap_or_else(|| "custom".to_string()),
        sub,
        lookup(start)?,
        coding,
        index_base.unwrap_or(IndexBase::Zero),
    )
}

/// Writes a system back out as a document that parses to the same system.
pub fn to_dsl(system: &MorphicSystem) -> String {
    let sub = system.substitution();
    let spaced = |w: &[Letter]| {
        w.iter()
            .map(|&l| sub.glyph(l).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("system {}\n", system.name()));
    out.push_str(&format!(
        "alphabet {}\n",
        sub.glyphs().iter().map(char::to_string).collect::<Vec<_>>().join(" ")
    ));
    for a in sub.letters() {
        out.push_str(&format!("rule {} -> {}\n", sub.glyph(a), spaced(sub.rule(a))));
    }
    for a in sub.letters() {
        out.push_str(&format!("code {} -> {}\n", sub.glyph(a), system.code(a)));
    }
    out.push_str(&format!("start {}\n", sub.glyph(system.start())));
    out.push_str(&format!("index_base {}\n", system.index_base().value()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fibonacci() {
        let sys = parse_system(
            "system fibonacci\nrule 0 -> 0 1\nrule 1 -> 0\nstart 0\nindex_base 1\n",
        )
        .unwrap();
        assert_eq!(sys, MorphicSystem::fibonacci());
    }

    #[test]
    fn builtin_by_name() {
        let sys = parse_system("# the squares morphism\nsystem squares\n").unwrap();
        assert_eq!(sys.substitution().alphabet_size(), 3);
        assert_eq!(sys.coding(), &[0, 1, 0]);
        assert_eq!(sys.index_base(), IndexBase::Zero);
        assert_eq!(sys.substitution().to_string(), "0↦01, 1↦221, 2↦2");
        assert!(matches!(parse_system("system nope"), Err(Error::UnknownSystem(_))));
    }

    #[test]
    fn empty_rule_is_erasing() {
        let err = parse_system("rule 0 -> 0 1\nrule 1 -> \nstart 0").unwrap_err();
        assert_eq!(err, Error::ErasingRule('1'));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_system("system x\n\nrule 0 => 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");
        let err = parse_system("rule 0 -> 01\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse_system("rule 0 -> 01\nindex_base 2\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn semantic_errors() {
        assert_eq!(
            parse_system("rule 0 -> 1 0\nrule 1 -> 0\nstart 0").unwrap_err(),
            Error::NotProlongable('0')
        );
        assert_eq!(
            parse_system("rule a -> a b\nrule b -> a\nstart a").unwrap_err(),
            Error::CodingNotTotal('a')
        );
        assert_eq!(
            parse_system("rule a -> a b\nrule b -> a\ncode a -> 0\nstart a").unwrap_err(),
            Error::CodingNotTotal('b')
        );
        assert!(parse_system("rule 0 -> 0 1\nstart 0").is_err());
    }

    #[test]
    fn custom_glyphs_with_coding() {
        let sys = parse_system(
            "system sq\nalphabet x y z\nrule x -> x y\nrule y -> z z y\nrule z -> z\n\
             code x -> 0\ncode y -> 1\ncode z -> 0\nstart x\nindex_base 0",
        )
        .unwrap();
        assert_eq!(sys.prefix(10), MorphicSystem::squares().prefix(10));
    }

    #[test]
    fn round_trip_builtins() {
        for sys in MorphicSystem::builtins() {
            let text = to_dsl(&sys);
            assert_eq!(parse_system(&text).unwrap(), sys, "{text}");
        }
    }
}
