//! Recursive-descent parser for force expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 't' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | exp | sqrt
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so `-2^2`
//! is `-4` and `2^3^2` is `512`. Positions in errors are byte offsets.

use alloc::string::{String, ToString};
use core::fmt;

use super::expr::{BinaryOp, ExpressionNode, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    SyntaxError { position: usize, message: String },
    UnknownIdentifier { position: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::SyntaxError { position, .. }
            | ParseError::UnknownIdentifier { position, .. } => *position,
        }
    }

    fn syntax(position: usize, message: impl Into<String>) -> Self {
        ParseError::SyntaxError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::SyntaxError { position, message } => {
                write!(f, "syntax error at position {position}: {message}")
            }
            ParseError::UnknownIdentifier { position, name } => {
                write!(f, "unknown identifier '{name}' at position {position}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Number(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => alloc::format!("number {v}"),
            Token::Ident(name) => alloc::format!("identifier '{name}'"),
            Token::Plus => "'+'".to_string(),
            Token::Minus => "'-'".to_string(),
            Token::Star => "'*'".to_string(),
            Token::Slash => "'/'".to_string(),
            Token::Caret => "'^'".to_string(),
            Token::LParen => "'('".to_string(),
            Token::RParen => "')'".to_string(),
            Token::End => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(usize, Token<'a>), ParseError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((start, Token::End));
        };
        let single = match c {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((start, tok));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start).map(|v| (start, Token::Number(v)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = start + 1;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((start, Token::Ident(&self.text[start..end])));
        }
        let ch = self.text[start..].chars().next().unwrap_or('?');
        Err(ParseError::syntax(
            start,
            alloc::format!("unexpected character '{ch}'"),
        ))
    }

    fn number(&mut self, start: usize) -> Result<f64, ParseError> {
        let bytes = self.text.as_bytes();
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let int_end = digits(start);
        let mut end = int_end;
        let mut frac_digits = 0;
        if bytes.get(end) == Some(&b'.') {
            let frac_end = digits(end + 1);
            frac_digits = frac_end - end - 1;
            end = frac_end;
        }
        if int_end == start && frac_digits == 0 {
            return Err(ParseError::syntax(start, "malformed number"));
        }
        if matches!(bytes.get(end), Some(b'e' | b'E')) {
            let mut exp = end + 1;
            if matches!(bytes.get(exp), Some(b'+' | b'-')) {
                exp += 1;
            }
            let exp_end = digits(exp);
            if exp_end == exp {
                return Err(ParseError::syntax(end, "malformed exponent"));
            }
            end = exp_end;
        }
        if bytes.get(end) == Some(&b'.') {
            return Err(ParseError::syntax(end, "malformed number"));
        }
        self.pos = end;
        self.text[start..end]
            .parse::<f64>()
            .map_err(|_| ParseError::syntax(start, "malformed number"))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (usize, Token<'a>),
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { text, pos: 0 };
        let current = lexer.next_token()?;
        Ok(Parser { lexer, current })
    }

    fn advance(&mut self) -> Result<(usize, Token<'a>), ParseError> {
        let next = self.lexer.next_token()?;
        Ok(core::mem::replace(&mut self.current, next))
    }

    fn expect(&mut self, want: Token<'static>, what: &str) -> Result<(), ParseError> {
        if self.current.1 == want {
            self.advance()?;
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.current.0,
                alloc::format!("expected {what}, found {}", self.current.1.describe()),
            ))
        }
    }

    fn expr(&mut self) -> Result<ExpressionNode, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.current.1 {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = ExpressionNode::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<ExpressionNode, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.current.1 {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.unary()?;
            lhs = ExpressionNode::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<ExpressionNode, ParseError> {
        if self.current.1 == Token::Minus {
            self.advance()?;
            let operand = self.unary()?;
            return Ok(ExpressionNode::unary(UnaryOp::Neg, operand));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExpressionNode, ParseError> {
        let base = self.atom()?;
        if self.current.1 == Token::Caret {
            self.advance()?;
            let exponent = self.unary()?;
            return Ok(ExpressionNode::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExpressionNode, ParseError> {
        let (position, token) = self.advance()?;
        match token {
            Token::Number(v) => Ok(ExpressionNode::Constant(v)),
            Token::Ident("t") => Ok(ExpressionNode::Time),
            Token::Ident(name) => {
                let Some(op) = UnaryOp::from_function_name(name) else {
                    return Err(ParseError::UnknownIdentifier {
                        position,
                        name: name.to_string(),
                    });
                };
                self.expect(Token::LParen, "'(' after function name")?;
                let arg = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(ExpressionNode::unary(op, arg))
            }
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            other => Err(ParseError::syntax(
                position,
                alloc::format!(
                    "expected a number, 't', a function or '(', found {}",
                    other.describe()
                ),
            )),
        }
    }
}

/// Parses an infix force expression in the variable `t`.
pub fn parse_force_expression(text: &str) -> Result<ExpressionNode, ParseError> {
    let mut parser = Parser::new(text)?;
    let node = parser.expr()?;
    match parser.current.1 {
        Token::End => Ok(node),
        ref other => Err(ParseError::syntax(
            parser.current.0,
            alloc::format!("unexpected {} after expression", other.describe()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::boxed::Box;
    use alloc::string::ToString;
    use core::f64::consts::PI;

    fn eval(text: &str, t: f64) -> f64 {
        parse_force_expression(text).unwrap().eval(t).unwrap()
    }

    #[test]
    fn literal_zero() {
        assert_eq!(
            parse_force_expression("0").unwrap(),
            ExpressionNode::Constant(0.0)
        );
    }

    #[test]
    fn sinusoid_expression() {
        assert!((eval("3.5*sin(2*t)", PI / 4.0) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn power_is_right_associative() {
        // Oracle: the tree 2^(3^2) built by hand.
        let oracle = ExpressionNode::binary(
            BinaryOp::Pow,
            ExpressionNode::constant(2.0),
            ExpressionNode::binary(
                BinaryOp::Pow,
                ExpressionNode::constant(3.0),
                ExpressionNode::constant(2.0),
            ),
        );
        let parsed = parse_force_expression("2^3^2").unwrap();
        assert_eq!(parsed, oracle);
        assert_eq!(parsed.eval(0.0).unwrap(), oracle.eval(0.0).unwrap());
        assert_eq!(parsed.eval(0.0).unwrap(), 512.0);
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        assert_eq!(eval("-2^2", 0.0), -4.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("-t*3", 2.0), -6.0);
        assert_eq!(eval("2*-3", 0.0), -6.0);
        assert_eq!(eval("--2", 0.0), 2.0);
    }

    #[test]
    fn additive_and_multiplicative_precedence() {
        assert_eq!(eval("1+2*3", 0.0), 7.0);
        assert_eq!(eval("8/4/2", 0.0), 1.0);
        assert_eq!(eval("10-4-3", 0.0), 3.0);
        assert_eq!(eval("(1+2)*3", 0.0), 9.0);
        assert_eq!(eval(" sqrt( t ) + exp(0) + cos(0) ", 9.0), 5.0);
        assert_eq!(eval("1.5e2 + .5", 0.0), 150.5);
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_force_expression("2*x+1").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                position: 2,
                name: "x".to_string()
            }
        );
        assert!(matches!(
            parse_force_expression("tan(t)"),
            Err(ParseError::UnknownIdentifier { position: 0, .. })
        ));
    }

    #[test]
    fn syntax_error_positions() {
        let cases: &[(&str, usize)] = &[
            ("", 0),
            ("1+", 2),
            ("(1", 2),
            ("1)", 1),
            ("sin t", 4),
            ("2**3", 2),
            ("1 2", 2),
            ("3 $ 4", 2),
            ("1.2.3", 3),
            ("1e", 1),
            ("sin(t", 5),
            ("()", 1),
        ];
        for &(text, position) in cases {
            match parse_force_expression(text) {
                Err(ParseError::SyntaxError { position: p, .. }) => {
                    assert_eq!(p, position, "input {text:?}")
                }
                other => panic!("input {text:?}: expected syntax error, got {other:?}"),
            }
        }
    }

    #[test]
    fn deep_nesting_round_trips() {
        let mut node = ExpressionNode::Time;
        for _ in 0..50 {
            node = ExpressionNode::Unary(UnaryOp::Cos, Box::new(node));
        }
        let reparsed = parse_force_expression(&node.to_string()).unwrap();
        assert_eq!(reparsed, node);
        assert!(reparsed.eval(1.0).unwrap().is_finite());
    }
}
