//! Line-oriented problem files.
//!
//! ```text
//! # comments run to the end of the line
//! degree 10
//! group H = (1,2,3,4,5,6,7,8,9,10), (2,10)(3,9)(4,8)(5,7)
//! stab-set H {1,5}
//! option mode preorbital
//! ```
//!
//! Directives: `stab-set G {..}`, `stab-partition G [..|..]`, `intersect G H`.
//! Options: `mode`, `size-limit`, `seed`, `trace`, `node-limit`.

use std::str::FromStr;

use permsearch::{
    GeneratedGroup, OrderedPartition, Permutation, Problem, Property, RefinerMode, SearchOptions,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}:{line}: {message}")]
pub struct FileError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    StabSet { group: String, set: Vec<usize> },
    StabPartition { group: String, partition: OrderedPartition },
    Intersect { left: String, right: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileOptions {
    pub mode: RefinerMode,
    pub size_limit: Option<usize>,
    pub seed: u64,
    pub trace: bool,
    pub node_limit: Option<u64>,
}

impl Default for FileOptions {
    fn default() -> Self {
        FileOptions {
            mode: RefinerMode::PreOrbital,
            size_limit: None,
            seed: 0,
            trace: false,
            node_limit: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub degree: usize,
    pub groups: Vec<(String, GeneratedGroup)>,
    pub directive: Option<Directive>,
    pub options: FileOptions,
}

impl ProblemFile {
    pub fn group(&self, name: &str) -> Option<&GeneratedGroup> {
        self.groups.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    /// The solver problem for the directive, with `mode` overriding the file's.
    pub fn problem(&self, mode: Option<RefinerMode>) -> Option<Problem> {
        let mode = mode.unwrap_or(self.options.mode);
        let g = |name: &str| Property::InGroup(self.group(name).unwrap().clone());
        let props = match self.directive.as_ref()? {
            Directive::StabSet { group, set } => {
                vec![g(group), Property::StabilizesSet(set.clone())]
            }
            Directive::StabPartition { group, partition } => {
                vec![g(group), Property::StabilizesPartition(partition.clone())]
            }
            Directive::Intersect { left, right } => vec![g(left), g(right)],
        };
        Some(Problem::new(self.degree, props, mode).expect("checked while parsing"))
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            node_limit: self.options.node_limit,
            size_limit: self.options.size_limit,
            trace: self.options.trace,
            record_prunes: false,
        }
    }
}

pub fn parse(text: &str, path: &str) -> Result<ProblemFile, FileError> {
    let mut degree: Option<usize> = None;
    let mut groups: Vec<(String, GeneratedGroup)> = Vec::new();
    let mut directive = None;
    let mut options = FileOptions::default();
    for (idx, raw) in text.lines().enumerate() {
        let err = |message: String| FileError {
            path: path.to_string(),
            line: idx + 1,
            message,
        };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = split_word(line);
        let need_degree = || degree.ok_or_else(|| err("`degree` must come first".into()));
        match keyword {
            "degree" => {
                if degree.is_some() {
                    return Err(err("degree given twice".into()));
                }
                degree = Some(parse_number(rest).map_err(err)?);
            }
            "group" => {
                let n = need_degree()?;
                let (name, gens) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `group NAME = generators`".into()))?;
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(err(format!("bad group name `{name}`")));
                }
                if groups.iter().any(|(g, _)| g == name) {
                    return Err(err(format!("group `{name}` defined twice")));
                }
                let gens = parse_generators(gens, n).map_err(err)?;
                groups.push((name.to_string(), GeneratedGroup::new(n, gens).unwrap()));
            }
            "stab-set" | "stab-partition" | "intersect" => {
                let n = need_degree()?;
                if directive.is_some() {
                    return Err(err("only one directive per file".into()));
                }
                let lookup = |name: &str| -> Result<String, FileError> {
                    if groups.iter().any(|(g, _)| g == name) {
                        Ok(name.to_string())
                    } else {
                        Err(err(format!("undefined group `{name}`")))
                    }
                };
                let (first, tail) = split_word(rest);
                if first.is_empty() {
                    return Err(err(format!("`{keyword}` needs a group name")));
                }
                directive = Some(match keyword {
                    "stab-set" => Directive::StabSet {
                        group: lookup(first)?,
                        set: parse_set(tail, n).map_err(err)?,
                    },
                    "stab-partition" => Directive::StabPartition {
                        group: lookup(first)?,
                        partition: OrderedPartition::parse(tail, n)
                            .map_err(|e| err(e.to_string()))?,
                    },
                    _ => {
                        let (second, extra) = split_word(tail);
                        if second.is_empty() || !extra.is_empty() {
                            return Err(err("expected `intersect G H`".into()));
                        }
                        Directive::Intersect {
                            left: lookup(first)?,
                            right: lookup(second)?,
                        }
                    }
                });
            }
            "option" => {
                let (key, value) = split_word(rest);
                match key {
                    "mode" => options.mode = RefinerMode::from_str(value).map_err(err)?,
                    "size-limit" => options.size_limit = Some(parse_number(value).map_err(err)?),
                    "node-limit" => {
                        options.node_limit = Some(parse_number(value).map_err(err)? as u64)
                    }
                    "seed" => {
                        options.seed = value
                            .parse()
                            .map_err(|_| err(format!("bad seed `{value}`")))?
                    }
                    "trace" => {
                        options.trace = match value {
                            "" | "on" | "true" | "yes" | "1" => true,
                            "off" | "false" | "no" | "0" => false,
                            _ => return Err(err(format!("bad trace value `{value}`"))),
                        }
                    }
                    _ => return Err(err(format!("unknown option `{key}`"))),
                }
            }
            _ => return Err(err(format!("unknown keyword `{keyword}`"))),
        }
    }
    let degree = degree.ok_or_else(|| FileError {
        path: path.to_string(),
        line: text.lines().count().max(1),
        message: "missing `degree` line".into(),
    })?;
    Ok(ProblemFile {
        degree,
        groups,
        directive,
        options,
    })
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_number(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("expected a number, got `{}`", s.trim()))
}

/// Generators separated by commas outside parentheses.
fn parse_generators(text: &str, degree: usize) -> Result<Vec<Permutation>, String> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err("unbalanced `)`".into());
        }
    }
    pieces.push(&text[start..]);
    let mut gens = Vec::new();
    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let p = Permutation::parse_cycles(piece, degree)
            .map_err(|e| format!("generator `{piece}`: {e}"))?;
        gens.push(p);
    }
    Ok(gens)
}

/// `{1,5,7}`, 1-based; braces optional.
fn parse_set(text: &str, degree: usize) -> Result<Vec<usize>, String> {
    let t = text.trim();
    let inner = t.strip_prefix('{').map_or(Ok(t), |s| {
        s.strip_suffix('}').ok_or_else(|| "missing `}`".to_string())
    })?;
    let mut set = Vec::new();
    for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let x: usize = tok.parse().map_err(|_| format!("bad point `{tok}`"))?;
        if x == 0 || x > degree {
            return Err(format!("point {x} out of range 1..={degree}"));
        }
        set.push(x - 1);
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H1: &str = "\
# dihedral group of order 20
degree 10
group H = (1,2,3,4,5,6,7,8,9,10), (2,10)(3,9)(4,8)(5,7)
stab-set H {1,5}
option mode fixed
";

    #[test]
    fn parses_example() {
        let f = parse(H1, "h1.txt").unwrap();
        assert_eq!(f.degree, 10);
        assert_eq!(f.group("H").unwrap().generators().len(), 2);
        assert_eq!(
            f.directive,
            Some(Directive::StabSet {
                group: "H".into(),
                set: vec![0, 4]
            })
        );
        assert_eq!(f.options.mode, RefinerMode::Fixed);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse("degree 3\nstab-set G {1}\n", "p.txt").unwrap_err();
        assert_eq!(e.to_string(), "p.txt:2: undefined group `G`");
        let e = parse("degree 3\ngroup G = (1,4)\n", "p.txt").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("group G = (1,2)\n", "p.txt").unwrap_err();
        assert!(e.message.contains("degree"));
        let e = parse("degree 3\noption mode quick\n", "p.txt").unwrap_err();
        assert!(e.message.contains("unknown mode"));
    }

    #[test]
    fn generators_split_on_top_level_commas() {
        let g = parse_generators("(1,2,3), (4,5)(6,7), ()", 7).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g[2].is_identity());
        assert!(parse_generators("", 3).unwrap().is_empty());
    }

    #[test]
    fn other_directives() {
        let f = parse(
            "degree 4\ngroup A = (1,2,3,4)\ngroup B = (1,3)\nintersect A B\n",
            "x",
        )
        .unwrap();
        assert!(matches!(f.directive, Some(Directive::Intersect { .. })));
        let f = parse("degree 4\ngroup A = (1,2)\nstab-partition A [1,2|3,4]\n", "x").unwrap();
        assert!(matches!(f.directive, Some(Directive::StabPartition { .. })));
    }
}
