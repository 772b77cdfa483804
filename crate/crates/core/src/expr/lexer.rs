use super::ExprError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

/// Splits `source` into tokens, skipping ASCII whitespace.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            _ => None,
        };
        if let Some(kind) = single {
            i += 1;
            tokens.push(Token {
                kind,
                lexeme: source[start..i].to_string(),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            i = scan_number(bytes, i);
            let lexeme = &source[start..i];
            let value: f64 = lexeme.parse().map_err(|_| ExprError::Lex {
                offset: start,
                message: format!("malformed number '{lexeme}'"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Number(value),
                lexeme: lexeme.to_string(),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                lexeme: source[start..i].to_string(),
                offset: start,
            });
            continue;
        }
        let ch = source[start..].chars().next().unwrap_or('?');
        return Err(ExprError::Lex {
            offset: start,
            message: format!("unexpected character '{ch}'"),
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(i);
    if i < bytes.len() && bytes[i] == b'.' {
        i = digits(i + 1);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        // only consume the exponent when digits follow, so "2e" lexes as 2, e
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexemes(src: &str) -> Vec<String> {
        tokenize(src).unwrap().into_iter().map(|t| t.lexeme).collect()
    }

    #[test]
    fn trig_product() {
        assert_eq!(
            lexemes("-sin(th)*cos(th)"),
            ["-", "sin", "(", "th", ")", "*", "cos", "(", "th", ")"]
        );
    }

    #[test]
    fn exponent_literal() {
        let toks = tokenize("1e3 + x1").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Number(1000.0));
        assert_eq!(lexemes("1e3 + x1"), ["1e3", "+", "x1"]);
        assert_eq!(toks[2].offset, 6);
    }

    #[test]
    fn unknown_character_reports_offset() {
        match tokenize("2 @ 3") {
            Err(ExprError::Lex { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected lexical error, got {other:?}"),
        }
    }

    #[test]
    fn offsets_strictly_increase() {
        let toks = tokenize(" pow( x , 2.5e-1 )/ .5").unwrap();
        assert!(toks.windows(2).all(|w| w[0].offset < w[1].offset));
        let joined: String = toks.iter().map(|t| t.lexeme.as_str()).collect();
        assert_eq!(joined, "pow(x,2.5e-1)/.5");
    }
}
