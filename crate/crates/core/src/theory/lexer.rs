use super::diagnostic::{Diagnostic, DiagnosticKind, Pos};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Eq,
    Tilde,
    Gt,
    FatArrow,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Gt => "`>`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits source text into tokens. Lexical errors are reported and the
/// offending character skipped, so the parser still sees the rest.
pub(crate) fn tokenize(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos::new(line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => bump!(),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '(' | ')' | '[' | ']' | ',' | '.' | ':' | '~' | '¬' | '>' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    '>' => Tok::Gt,
                    _ => Tok::Tilde,
                };
                bump!();
                tokens.push(Token { tok, pos });
            }
            '=' => {
                bump!();
                if i < chars.len() && chars[i] == '>' {
                    bump!();
                    tokens.push(Token { tok: Tok::FatArrow, pos });
                } else {
                    tokens.push(Token { tok: Tok::Eq, pos });
                }
            }
            '-' => {
                bump!();
                if i < chars.len() && chars[i] == '>' {
                    bump!();
                    tokens.push(Token { tok: Tok::Arrow, pos });
                } else {
                    diags.push(
                        Diagnostic::error(DiagnosticKind::Syntax, "unexpected `-` (expected `->`)").at(pos),
                    );
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                let mut closed = false;
                while i < chars.len() {
                    let ch = chars[i];
                    if ch == '"' {
                        bump!();
                        closed = true;
                        break;
                    }
                    if ch == '\n' {
                        break;
                    }
                    if ch == '\\' && i + 1 < chars.len() {
                        bump!();
                        let esc = chars[i];
                        match esc {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            '"' => s.push('"'),
                            '\\' => s.push('\\'),
                            other => {
                                diags.push(
                                    Diagnostic::error(
                                        DiagnosticKind::Syntax,
                                        format!("unknown escape `\\{other}`"),
                                    )
                                    .at(Pos::new(line, col)),
                                );
                            }
                        }
                        bump!();
                        continue;
                    }
                    s.push(ch);
                    bump!();
                }
                if closed {
                    tokens.push(Token { tok: Tok::Str(s), pos });
                } else {
                    diags.push(Diagnostic::error(DiagnosticKind::Syntax, "unterminated string").at(pos));
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    bump!();
                }
                let numeric = s.chars().all(|c| c.is_ascii_digit());
                if numeric
                    && i + 1 < chars.len()
                    && chars[i] == '.'
                    && chars[i + 1].is_ascii_digit()
                {
                    s.push('.');
                    bump!();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        s.push(chars[i]);
                        bump!();
                    }
                }
                if numeric || s.contains('.') {
                    tokens.push(Token { tok: Tok::Number(s), pos });
                } else {
                    tokens.push(Token { tok: Tok::Ident(s), pos });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    bump!();
                }
                tokens.push(Token { tok: Tok::Ident(s), pos });
            }
            other => {
                diags.push(
                    Diagnostic::error(DiagnosticKind::Syntax, format!("unexpected character `{other}`")).at(pos),
                );
                bump!();
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        pos: Pos::new(line, col),
    });
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        let (t, d) = tokenize(src);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_terminators() {
        assert_eq!(
            toks("[weight=0.9]."),
            vec![
                Tok::LBracket,
                Tok::Ident("weight".into()),
                Tok::Eq,
                Tok::Number("0.9".into()),
                Tok::RBracket,
                Tok::Dot,
                Tok::Eof
            ]
        );
        assert_eq!(toks("1."), vec![Tok::Number("1".into()), Tok::Dot, Tok::Eof]);
    }

    #[test]
    fn arrows_and_negation() {
        assert_eq!(
            toks("a => ~b -> ¬c"),
            vec![
                Tok::Ident("a".into()),
                Tok::FatArrow,
                Tok::Tilde,
                Tok::Ident("b".into()),
                Tok::Arrow,
                Tok::Tilde,
                Tok::Ident("c".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let (t, _) = tokenize("% comment\n  foo");
        assert_eq!(t[0].pos, Pos::new(2, 3));
    }

    #[test]
    fn string_escapes() {
        assert_eq!(toks(r#""a \"b\" \\ c""#)[0], Tok::Str("a \"b\" \\ c".into()));
    }

    #[test]
    fn unterminated_string_reported() {
        let (_, d) = tokenize("\"abc\n");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].pos, Some(Pos::new(1, 1)));
    }
}
