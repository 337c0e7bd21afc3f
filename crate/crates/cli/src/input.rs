//! The subgroup file format.
//!
//! ```text
//! ambient m=2 n=3
//! gen [-1,0] b^2          # t^(-1,0) b²
//! gen [1,0] (aC)^2
//! gen [0,1] baC
//! ```

use std::fmt;

use fatf_core::{FatfElement, FatfSubgroup, Int, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFile {
    pub m: usize,
    pub n: usize,
    pub gens: Vec<FatfElement>,
}

impl SubgroupFile {
    pub fn subgroup(&self) -> FatfSubgroup {
        FatfSubgroup::from_generators(self.m, self.n, &self.gens)
            .expect("ambient checked by the parser")
    }
}

/// Syntax error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]`, 1-based.
    offset: usize,
}

impl Cursor {
    fn new(src: &str, line: usize, offset: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            offset,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.offset + self.pos,
            message: message.into(),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn integer(&mut self) -> Result<Int, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<Int>().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn small_integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let end = self.pos + word.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(word.chars()) {
            self.pos = end;
            Ok(())
        } else {
            Err(self.error(format!("expected `{word}`")))
        }
    }

    fn vector(&mut self, m: usize) -> Result<Vec<Int>, ParseError> {
        let open = self.pos;
        self.keyword("[")?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
        } else {
            loop {
                self.skip_ws();
                out.push(self.integer()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `]`")),
                }
            }
        }
        if out.len() != m {
            self.pos = open;
            return Err(self.error(format!("vector has {} entries, expected {m}", out.len())));
        }
        Ok(out)
    }

    fn word(&mut self, n: usize, depth: usize) -> Result<Word, ParseError> {
        let mut acc = Word::identity(n);
        loop {
            self.skip_ws();
            let item = match self.peek() {
                None => break,
                Some(')') if depth > 0 => break,
                Some('(') => {
                    self.pos += 1;
                    let inner = self.word(n, depth + 1)?;
                    self.skip_ws();
                    if self.peek() != Some(')') {
                        return Err(self.error("expected `)`"));
                    }
                    self.pos += 1;
                    inner
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let index = (c.to_ascii_lowercase() as u8 - b'a') as usize;
                    if index >= n {
                        return Err(
                            self.error(format!("letter `{c}` outside the alphabet of rank {n}"))
                        );
                    }
                    self.pos += 1;
                    Word::letter(n, Letter::new(index, c.is_ascii_uppercase()))
                        .expect("index checked")
                }
                Some(c) => return Err(self.error(format!("unexpected character `{c}`"))),
            };
            let item = if self.peek() == Some('^') {
                self.pos += 1;
                item.pow(self.small_integer()?)
            } else {
                item
            };
            acc = acc.multiply(&item).expect("same alphabet");
        }
        Ok(acc)
    }
}

/// Strips a `#` comment; returns the content.
fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

pub fn parse_subgroup(src: &str) -> Result<SubgroupFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut gens = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = content(raw);
        let trimmed = text.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = text.chars().count() - trimmed.chars().count();
        let mut c = Cursor::new(trimmed.trim_end(), line, indent + 1);
        match header {
            None => {
                c.keyword("ambient")?;
                c.skip_ws();
                c.keyword("m=")?;
                let m = c.small_integer()?;
                c.skip_ws();
                c.keyword("n=")?;
                let n = c.small_integer()?;
                c.skip_ws();
                if !c.done() {
                    return Err(c.error("trailing input after header"));
                }
                if m < 0 || !(0..=26).contains(&n) {
                    return Err(c.error("need m ≥ 0 and 0 ≤ n ≤ 26"));
                }
                header = Some((m as usize, n as usize));
            }
            Some((m, n)) => {
                c.keyword("gen")?;
                if !c.peek().is_none_or(char::is_whitespace) {
                    return Err(c.error("expected whitespace after `gen`"));
                }
                c.skip_ws();
                let vector = if c.peek() == Some('[') {
                    c.vector(m)?
                } else {
                    vec![Int::from(0); m]
                };
                let word = c.word(n, 0)?;
                if !c.done() {
                    return Err(c.error("unbalanced `)`"));
                }
                gens.push(FatfElement::new(vector, word));
            }
        }
    }
    let (m, n) = header.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "missing `ambient m=<int> n=<int>` header".into(),
    })?;
    Ok(SubgroupFile { m, n, gens })
}

/// Renders a subgroup's basis in the file format.
pub fn render_subgroup(h: &FatfSubgroup) -> String {
    let (m, n) = h.ambient();
    let mut out = format!("ambient m={m} n={n}\n");
    for g in h.basis_elements() {
        out.push_str("gen");
        if m > 0 {
            let parts: Vec<String> = g.vector.iter().map(Int::to_string).collect();
            out.push_str(&format!(" [{}]", parts.join(",")));
        }
        if !g.word.is_identity() {
            out.push_str(&format!(" {}", g.word));
        }
        out.push('\n');
    }
    out
}
