//! Line-oriented design file format and the bundled example designs.
//!
//! ```text
//! DESIGN v=7 b=7
//! # comments start with '#'
//! 0 1 3
//! 1 2 4
//! ...
//! ```
//!
//! The header comes first. Each other non-comment line is one block: variety
//! ids in strictly ascending decimal, separated by single spaces. A block
//! listed twice has multiplicity two. The declared `b` counts block lines.

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::block::Block;
use crate::design::{Design, DesignParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    BadHeader(String),
    BadId(String),
    EmptyBlock,
    Unsorted,
    IdOutOfRange { id: u32, v: u32 },
    CountMismatch { declared: u64, found: u64 },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => f.write_str("missing `DESIGN v=<v> b=<b>` header"),
            Self::BadHeader(h) => write!(f, "malformed header {h:?}"),
            Self::BadId(tok) => write!(f, "malformed variety id {tok:?}"),
            Self::EmptyBlock => f.write_str("empty block line"),
            Self::Unsorted => f.write_str("block ids are not strictly ascending"),
            Self::IdOutOfRange { id, v } => write!(f, "variety id {id} is not below v={v}"),
            Self::CountMismatch { declared, found } => {
                write!(f, "header declares b={declared} but {found} block lines follow")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ReadError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ReadError::Parse { line, kind }
    }
}

fn parse_header(line: &str) -> Option<(u32, u64)> {
    let rest = line.strip_prefix("DESIGN ")?;
    let (v, b) = rest.split_once(' ')?;
    let v = v.strip_prefix("v=")?.parse().ok()?;
    let b = b.strip_prefix("b=")?.parse().ok()?;
    Some((v, b))
}

fn parse_id(tok: &str) -> Option<u32> {
    if tok.is_empty() || !tok.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

/// Parses a design file. Errors name the 1-based line.
pub fn read_design<R: BufRead>(source: R) -> Result<Design, ReadError> {
    let mut header: Option<(u32, u64)> = None;
    let mut design = Design::new(0);
    let mut found = 0u64;
    let mut last_line = 0;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        last_line = lineno;
        if line.starts_with('#') {
            continue;
        }
        let Some((v, _)) = header else {
            let h = parse_header(&line)
                .ok_or_else(|| ReadError::at(lineno, ParseErrorKind::BadHeader(line.clone())))?;
            header = Some(h);
            design = Design::new(h.0);
            continue;
        };
        if line.is_empty() {
            return Err(ReadError::at(lineno, ParseErrorKind::EmptyBlock));
        }
        let ids = line
            .split(' ')
            .map(|tok| parse_id(tok).ok_or_else(|| ParseErrorKind::BadId(tok.to_string())))
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|k| ReadError::at(lineno, k))?;
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ReadError::at(lineno, ParseErrorKind::Unsorted));
        }
        let block = Block::new(ids).map_err(|_| ReadError::at(lineno, ParseErrorKind::EmptyBlock))?;
        if block.max_id() >= v {
            return Err(ReadError::at(
                lineno,
                ParseErrorKind::IdOutOfRange { id: block.max_id(), v },
            ));
        }
        design
            .insert(block)
            .expect("ids were checked against v");
        found += 1;
    }
    let Some((_, declared)) = header else {
        return Err(ReadError::at(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    if declared != found {
        return Err(ReadError::at(
            last_line,
            ParseErrorKind::CountMismatch { declared, found },
        ));
    }
    Ok(design)
}

/// Canonical form: header, then blocks in lexicographic order, repeated by
/// multiplicity.
pub fn write_design<W: Write>(d: &Design, mut out: W) -> io::Result<()> {
    writeln!(out, "DESIGN v={} b={}", d.v(), d.block_count())?;
    for block in d.blocks() {
        writeln!(out, "{block}")?;
    }
    Ok(())
}

pub fn design_to_string(d: &Design) -> String {
    let mut buf = Vec::new();
    write_design(d, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("design files are ASCII")
}

/// A bundled design with the outcome it must verify to.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    /// Expected `(v, b, r, k, lambda)`, when the source states all five.
    pub params: Option<DesignParams>,
    pub symmetric: bool,
    /// `(t, lambda_t)` for a t-design check beyond pairs.
    pub t_design: Option<(u32, u64)>,
}

impl Fixture {
    pub fn design(&self) -> Design {
        read_design(self.text.as_bytes()).expect("bundled fixtures parse")
    }
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "fano",
            text: include_str!("../fixtures/fano.design"),
            params: Some(DesignParams::new(7u32, 7u32, 3u32, 3u32, 1u32)),
            symmetric: true,
            t_design: None,
        },
        Fixture {
            name: "letters16",
            text: include_str!("../fixtures/letters16.design"),
            params: Some(DesignParams::new(16u32, 20u32, 5u32, 4u32, 1u32)),
            symmetric: false,
            t_design: None,
        },
        Fixture {
            name: "database_3_10_4_1",
            text: include_str!("../fixtures/database_3_10_4_1.design"),
            params: None,
            symmetric: false,
            t_design: Some((3, 1)),
        },
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
