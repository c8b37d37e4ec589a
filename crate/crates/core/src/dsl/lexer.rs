use super::SourceDiagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    Colon,
    Comma,
    Gt,
    Pipe,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
/// Unexpected characters are reported and skipped; the token stream always
/// ends with [`Tok::Eof`].
pub(crate) fn tokenize(text: &str) -> (Vec<Token>, Vec<SourceDiagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                column += 1;
            }
            continue;
        }
        if is_name_char(c) {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if !is_name_char(c) {
                    break;
                }
                name.push(c);
                chars.next();
                column += 1;
            }
            tokens.push(Token {
                tok: Tok::Name(name),
                line: tl,
                column: tc,
            });
            continue;
        }
        chars.next();
        column += 1;
        let tok = match c {
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '>' => Tok::Gt,
            '|' => Tok::Pipe,
            '=' => Tok::Eq,
            other => {
                diags.push(SourceDiagnostic::error(
                    tl,
                    tc,
                    format!("unexpected character {other:?}"),
                ));
                continue;
            }
        };
        tokens.push(Token {
            tok,
            line: tl,
            column: tc,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    (tokens, diags)
}
