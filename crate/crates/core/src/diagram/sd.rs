//! The `.sd` text format.
//!
//! ```text
//! expr   := tensor (';' tensor)*
//! tensor := atom ('*' atom)*
//! atom   := NAME | 'id' '^' NUMBER | '(' expr ')'
//! ```
//!
//! `;` is left associative and binds loosest. `#` starts a comment that
//! runs to the end of the line. Empty input is the empty diagram.

use super::{Diagram, DiagramError, Generator, Node};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Num(usize),
    Semi,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, DiagramError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            ';' => {
                bump(&mut chars);
                Tok::Semi
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars).unwrap());
                }
                Tok::Num(s.parse().map_err(|_| DiagramError::Parse {
                    line: l,
                    column: col,
                    message: format!("number `{s}` out of range"),
                })?)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars).unwrap());
                }
                Tok::Name(s)
            }
            other => {
                return Err(DiagramError::Parse {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Parse {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Diagram, DiagramError> {
        let mut acc = self.tensor()?;
        while self.peek().tok == Tok::Semi {
            let op = self.next();
            let rhs = self.tensor()?;
            acc = match Diagram::seq(&acc, &rhs) {
                Ok(d) => d,
                Err(DiagramError::ArityMismatch(l, r)) => {
                    return self.error(
                        &op,
                        format!("cannot compose: left side has {l} outputs, right side has {r} inputs"),
                    )
                }
                Err(e) => return Err(e),
            };
        }
        Ok(acc)
    }

    fn tensor(&mut self) -> Result<Diagram, DiagramError> {
        let mut acc = self.atom()?;
        while self.peek().tok == Tok::Star {
            self.next();
            let rhs = self.atom()?;
            acc = Diagram::par(&acc, &rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Diagram, DiagramError> {
        let t = self.next();
        match &t.tok {
            Tok::LParen => {
                let d = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return self.error(&close, "expected `)`");
                }
                Ok(d)
            }
            Tok::Name(name) if name == "id" && self.peek().tok == Tok::Caret => {
                self.next();
                let n = self.next();
                match n.tok {
                    Tok::Num(k) => Ok(Diagram::identity(k)),
                    _ => self.error(&n, "expected a wire count after `id^`"),
                }
            }
            Tok::Name(name) => match Generator::from_name(name) {
                Some(g) => Ok(Diagram::gen(g)),
                None => self.error(&t, format!("unknown generator `{name}`")),
            },
            _ => self.error(&t, "expected a generator, `id^n` or `(`"),
        }
    }
}

/// Parses `.sd` text. Widths are checked at every `;`.
pub fn parse_sd(text: &str) -> Result<Diagram, DiagramError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    if p.peek().tok == Tok::End {
        return Ok(Diagram::empty());
    }
    let d = p.expr()?;
    let end = p.next();
    if end.tok != Tok::End {
        return p.error(&end, "unexpected trailing input");
    }
    Ok(d)
}

/// Structural width of `d` if it is exactly `identity(k)` for `k >= 2`.
fn identity_block(d: &Diagram) -> Option<usize> {
    (d.dom() >= 2 && *d == Diagram::identity(d.dom())).then_some(d.dom())
}

/// Prints `d` so that [`parse_sd`] rebuilds the same tree.
pub fn emit_sd(d: &Diagram) -> String {
    let mut s = String::new();
    emit(d, &mut s);
    s
}

fn emit(d: &Diagram, out: &mut String) {
    if let Some(k) = identity_block(d) {
        out.push_str(&format!("id^{k}"));
        return;
    }
    match d.node() {
        Node::Empty => out.push_str("id^0"),
        Node::Gen(g) => out.push_str(g.name()),
        Node::Seq(a, b) => {
            let tensor = |d: &Diagram| matches!(d.node(), Node::Par(..)) && identity_block(d).is_none();
            wrap(a, tensor(a), out);
            out.push_str(" ; ");
            wrap(b, tensor(b) || matches!(b.node(), Node::Seq(..)), out);
        }
        Node::Par(a, b) => {
            wrap(a, matches!(a.node(), Node::Seq(..)) && identity_block(a).is_none(), out);
            out.push_str(" * ");
            let nested = matches!(b.node(), Node::Seq(..) | Node::Par(..)) && identity_block(b).is_none();
            wrap(b, nested, out);
        }
    }
}

fn wrap(d: &Diagram, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        emit(d, out);
        out.push(')');
    } else {
        emit(d, out);
    }
}
