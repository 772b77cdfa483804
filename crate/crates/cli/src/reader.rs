//! Reader for the TOML subset used by configuration files.
//!
//! Supported: `[table]` headers, `key = value` pairs with bare or quoted
//! keys, basic strings with `\" \\ \n \t` escapes, integers, floats,
//! booleans, and arrays (nested, multi-line, trailing comma allowed).
//! Comments start with `#`. Dotted keys, inline tables, literal and
//! multi-line strings, dates and arrays of tables are rejected.

use std::collections::BTreeMap;
use std::fmt;

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    String(String),
    Integer(i64),
    Float(f64),
    Bool(bool),
    Array(Vec<Spanned>),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::String(_) => "string",
            Value::Integer(_) => "integer",
            Value::Float(_) => "float",
            Value::Bool(_) => "boolean",
            Value::Array(_) => "array",
        }
    }
}

/// A value with the position of its first character.
#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub value: Value,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub pos: Option<Pos>,
    pub entries: BTreeMap<String, (Pos, Spanned)>,
}

/// Top-level keys live in the table named `""`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub tables: BTreeMap<String, Table>,
}

impl Document {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

type Res<T> = std::result::Result<T, SyntaxError>;

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Res<T> {
        Err(SyntaxError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.bump();
        }
    }

    fn skip_comment(&mut self) {
        if self.peek() == Some('#') {
            while !matches!(self.peek(), None | Some('\n')) {
                self.bump();
            }
        }
    }

    /// Blanks, comments and newlines, as allowed inside arrays.
    fn skip_all(&mut self) {
        loop {
            self.skip_blank();
            self.skip_comment();
            if self.peek() == Some('\n') {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn end_of_line(&mut self) -> Res<()> {
        self.skip_blank();
        self.skip_comment();
        match self.peek() {
            None => Ok(()),
            Some('\n') => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("unexpected '{c}' after value")),
        }
    }

    fn key(&mut self) -> Res<String> {
        match self.peek() {
            Some('"') => self.string(),
            Some(c) if is_bare(c) => {
                let mut s = String::new();
                while let Some(c) = self.peek().filter(|c| is_bare(*c)) {
                    s.push(c);
                    self.bump();
                }
                if self.peek() == Some('.') {
                    return self.err("dotted keys are not supported");
                }
                Ok(s)
            }
            Some(c) => self.err(format!("expected a key, found '{c}'")),
            None => self.err("expected a key, found end of input"),
        }
    }

    fn string(&mut self) -> Res<String> {
        let start = self.pos();
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(SyntaxError {
                        pos: start,
                        message: "unterminated string".into(),
                    })
                }
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(c) => return self.err(format!("unknown escape '\\{c}'")),
                    None => return self.err("unterminated string"),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn value(&mut self) -> Res<Spanned> {
        let pos = self.pos();
        let value = match self.peek() {
            Some('"') => Value::String(self.string()?),
            Some('[') => self.array()?,
            Some('\'') => return self.err("literal strings are not supported; use double quotes"),
            Some('{') => return self.err("inline tables are not supported"),
            Some(c) if c == '+' || c == '-' || c == '.' || c.is_ascii_digit() => self.number()?,
            Some(c) if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    word.push(c);
                    self.bump();
                }
                match word.as_str() {
                    "true" => Value::Bool(true),
                    "false" => Value::Bool(false),
                    _ => {
                        return Err(SyntaxError {
                            pos,
                            message: format!("unexpected bare word '{word}'; strings need double quotes"),
                        })
                    }
                }
            }
            Some(c) => return self.err(format!("expected a value, found '{c}'")),
            None => return self.err("expected a value, found end of input"),
        };
        Ok(Spanned { value, pos })
    }

    fn number(&mut self) -> Res<Value> {
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self
            .peek()
            .filter(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.' | '_'))
        {
            s.push(c);
            self.bump();
        }
        let bad = || SyntaxError {
            pos,
            message: format!("malformed number '{s}'"),
        };
        if !is_number(&s) {
            return Err(bad());
        }
        if s.contains(['.', 'e', 'E']) {
            s.parse().map(Value::Float).map_err(|_| bad())
        } else {
            s.parse().map(Value::Integer).map_err(|_| bad())
        }
    }

    fn array(&mut self) -> Res<Value> {
        self.bump();
        let mut items = Vec::new();
        loop {
            self.skip_all();
            if self.peek() == Some(']') {
                self.bump();
                return Ok(Value::Array(items));
            }
            items.push(self.value()?);
            self.skip_all();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(']') => {}
                Some(c) => return self.err(format!("expected ',' or ']' in array, found '{c}'")),
                None => return self.err("unclosed array"),
            }
        }
    }
}

fn is_bare(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// `[+-] digits [. digits] [(e|E) [+-] digits]`.
fn is_number(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    if !digits(&mut i) {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return false;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return false;
        }
    }
    i == b.len()
}

pub fn parse(src: &str) -> Res<Document> {
    let mut cur = Cursor::new(src);
    let mut doc = Document::default();
    doc.tables.insert(String::new(), Table::default());
    let mut current = String::new();
    loop {
        cur.skip_blank();
        cur.skip_comment();
        match cur.peek() {
            None => return Ok(doc),
            Some('\n') => {
                cur.bump();
            }
            Some('[') => {
                let pos = cur.pos();
                cur.bump();
                cur.skip_blank();
                if cur.peek() == Some('[') {
                    return cur.err("arrays of tables are not supported");
                }
                let name = cur.key()?;
                cur.skip_blank();
                if cur.peek() != Some(']') {
                    return cur.err("expected ']' to close the table header");
                }
                cur.bump();
                cur.end_of_line()?;
                if doc.tables.contains_key(&name) {
                    return Err(SyntaxError {
                        pos,
                        message: format!("table [{name}] defined twice"),
                    });
                }
                doc.tables.insert(
                    name.clone(),
                    Table {
                        pos: Some(pos),
                        entries: BTreeMap::new(),
                    },
                );
                current = name;
            }
            Some(_) => {
                let pos = cur.pos();
                let key = cur.key()?;
                cur.skip_blank();
                if cur.peek() != Some('=') {
                    return cur.err(format!("expected '=' after key '{key}'"));
                }
                cur.bump();
                cur.skip_blank();
                let value = cur.value()?;
                cur.end_of_line()?;
                let table = doc.tables.get_mut(&current).expect("current table exists");
                if table.entries.insert(key.clone(), (pos, value)).is_some() {
                    return Err(SyntaxError {
                        pos,
                        message: format!("key '{key}' defined twice"),
                    });
                }
            }
        }
    }
}
