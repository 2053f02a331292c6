//! A small total-function expression language for specifying `h`.
//!
//! Grammar (LL(1), keywords `if then else min max table n`):
//!
//! ```text
//! expr    := "if" comp "then" expr "else" expr | arith
//! comp    := arith relop arith
//! relop   := "==" | "!=" | "<" | "<=" | ">" | ">="
//! arith   := term (("+" | "-") term)*
//! term    := atom (("*" | "/" | "%") atom)*
//! atom    := NUMBER | "n" | "(" expr ")"
//!          | "min" "(" expr "," expr ")" | "max" "(" expr "," expr ")"
//!          | "table" "{" NUMBER ":" NUMBER ("," NUMBER ":" NUMBER)* "}" "else" expr
//! ```
//!
//! `*`, `/`, `%` bind tighter than `+`, `-`; comparisons appear only as
//! `if` conditions; parentheses override everything. Division is floor
//! division, `x % y = x - y * (x / y)`, and subtraction is truncated at 0
//! so that every well-formed expression is total given nonzero divisors.
//! Evaluating to 0 is an error at the top level: the function domain starts
//! at 1, and callers are expected to write `max(1, ...)` explicitly.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::numeral::Numeral;

/// Default cap on the bit length of intermediate evaluation results.
pub const DEFAULT_VALUE_BITS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        }
    }
}

/// Expression AST. Comparisons exist only as `if` conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(u64),
    Var,
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    If {
        op: RelOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        then: Box<Expr>,
        els: Box<Expr>,
    },
    /// Piecewise override: explicit entries, then a fallback expression.
    Table {
        entries: Vec<(u64, u64)>,
        default: Box<Expr>,
    },
}

/// Syntax error with 1-based position and what was expected there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line, self.col, self.expected, self.found
        )
    }
}

/// Evaluation failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    DivisionByZero,
    /// The final value was 0, outside the function domain.
    ResultZero,
    /// An intermediate value outgrew the configured bit budget, or the
    /// input was too large to materialize.
    MagnitudeBudget,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero => write!(f, "division or modulo by zero"),
            EvalError::ResultZero => write!(f, "expression evaluated to 0 (domain starts at 1)"),
            EvalError::MagnitudeBudget => write!(f, "value exceeded the magnitude budget"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Num(u64),
    Var,
    If,
    Then,
    Else,
    Min,
    Max,
    Table,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Rel(RelOp),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(v) => format!("number {v}"),
            Token::Var => "`n`".to_string(),
            Token::If => "`if`".to_string(),
            Token::Then => "`then`".to_string(),
            Token::Else => "`else`".to_string(),
            Token::Min => "`min`".to_string(),
            Token::Max => "`max`".to_string(),
            Token::Table => "`table`".to_string(),
            Token::Plus => "`+`".to_string(),
            Token::Minus => "`-`".to_string(),
            Token::Star => "`*`".to_string(),
            Token::Slash => "`/`".to_string(),
            Token::Percent => "`%`".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::LBrace => "`{`".to_string(),
            Token::RBrace => "`}`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Rel(op) => format!("`{}`", op.symbol()),
            Token::End => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

struct Spanned {
    token: Token,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str, found: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ParseError> {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let spanned = |token| Spanned { token, line, col };
        let Some(b) = self.peek() else {
            return Ok(spanned(Token::End));
        };
        let token = match b {
            b'0'..=b'9' => {
                let mut value: u64 = 0;
                while let Some(d @ b'0'..=b'9') = self.peek() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(u64::from(d - b'0')))
                        .ok_or_else(|| ParseError {
                            line,
                            col,
                            expected: "a literal within 64 bits".to_string(),
                            found: "a larger number".to_string(),
                        })?;
                    self.bump();
                }
                return Ok(spanned(Token::Num(value)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')) {
                    self.bump();
                }
                let word = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                return match word {
                    "n" => Ok(spanned(Token::Var)),
                    "if" => Ok(spanned(Token::If)),
                    "then" => Ok(spanned(Token::Then)),
                    "else" => Ok(spanned(Token::Else)),
                    "min" => Ok(spanned(Token::Min)),
                    "max" => Ok(spanned(Token::Max)),
                    "table" => Ok(spanned(Token::Table)),
                    other => Err(ParseError {
                        line,
                        col,
                        expected: "a keyword (n, if, then, else, min, max, table)".to_string(),
                        found: format!("`{other}`"),
                    }),
                };
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'%' => Token::Percent,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'{' => Token::LBrace,
            b'}' => Token::RBrace,
            b',' => Token::Comma,
            b':' => Token::Colon,
            b'=' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    return Ok(spanned(Token::Rel(RelOp::Eq)));
                }
                return Err(self.error("`==`", "`=`"));
            }
            b'!' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    return Ok(spanned(Token::Rel(RelOp::Ne)));
                }
                return Err(self.error("`!=`", "`!`"));
            }
            b'<' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    return Ok(spanned(Token::Rel(RelOp::Le)));
                }
                return Ok(spanned(Token::Rel(RelOp::Lt)));
            }
            b'>' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    return Ok(spanned(Token::Rel(RelOp::Ge)));
                }
                return Ok(spanned(Token::Rel(RelOp::Gt)));
            }
            other => {
                return Err(self.error(
                    "an operator, literal, or keyword",
                    format!("`{}`", char::from(other)),
                ))
            }
        };
        self.bump();
        Ok(spanned(token))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Spanned,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next_token()?;
        Ok(Parser { lexer, current })
    }

    fn advance(&mut self) -> Result<Spanned, ParseError> {
        let next = self.lexer.next_token()?;
        Ok(core::mem::replace(&mut self.current, next))
    }

    fn expect(&mut self, want: Token, expected: &str) -> Result<(), ParseError> {
        if self.current.token == want {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError {
            line: self.current.line,
            col: self.current.col,
            expected: expected.to_string(),
            found: self.current.token.describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.current.token == Token::If {
            self.advance()?;
            let lhs = self.arith()?;
            let op = match self.current.token {
                Token::Rel(op) => {
                    self.advance()?;
                    op
                }
                _ => return Err(self.unexpected("a comparison (==, !=, <, <=, >, >=)")),
            };
            let rhs = self.arith()?;
            self.expect(Token::Then, "`then`")?;
            let then = self.expr()?;
            self.expect(Token::Else, "`else`")?;
            let els = self.expr()?;
            return Ok(Expr::If {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                then: Box::new(then),
                els: Box::new(els),
            });
        }
        self.arith()
    }

    fn arith(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.current.token {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.atom()?;
        loop {
            let op = match self.current.token {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                Token::Percent => BinOp::Mod,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.atom()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.current.token.clone() {
            Token::Num(v) => {
                self.advance()?;
                Ok(Expr::Lit(v))
            }
            Token::Var => {
                self.advance()?;
                Ok(Expr::Var)
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Min | Token::Max => {
                let is_min = self.current.token == Token::Min;
                self.advance()?;
                self.expect(Token::LParen, "`(`")?;
                let a = self.expr()?;
                self.expect(Token::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(if is_min {
                    Expr::Min(Box::new(a), Box::new(b))
                } else {
                    Expr::Max(Box::new(a), Box::new(b))
                })
            }
            Token::Table => {
                self.advance()?;
                self.expect(Token::LBrace, "`{`")?;
                let mut entries: Vec<(u64, u64)> = Vec::new();
                loop {
                    let key = match self.current.token {
                        Token::Num(v) => v,
                        _ => return Err(self.unexpected("a table key (number)")),
                    };
                    if entries.iter().any(|(k, _)| *k == key) {
                        return Err(self.unexpected("a distinct table key"));
                    }
                    self.advance()?;
                    self.expect(Token::Colon, "`:`")?;
                    let value = match self.current.token {
                        Token::Num(v) => v,
                        _ => return Err(self.unexpected("a table value (number)")),
                    };
                    self.advance()?;
                    entries.push((key, value));
                    match self.current.token {
                        Token::Comma => {
                            self.advance()?;
                        }
                        Token::RBrace => break,
                        _ => return Err(self.unexpected("`,` or `}`")),
                    }
                }
                self.expect(Token::RBrace, "`}`")?;
                self.expect(Token::Else, "`else`")?;
                let default = self.expr()?;
                entries.sort_unstable_by_key(|&(k, _)| k);
                Ok(Expr::Table {
                    entries,
                    default: Box::new(default),
                })
            }
            _ => Err(self.unexpected("a literal, `n`, `(`, `min`, `max`, or `table`")),
        }
    }
}

/// Parses an expression, or reports a diagnostic with line/column.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    if parser.current.token != Token::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(expr)
}

/// Renders an expression to canonical text; `parse(render(e)) == e`.
pub fn render(expr: &Expr) -> String {
    let mut out = String::new();
    render_at(expr, 0, &mut out);
    out
}

fn render_at(expr: &Expr, min_prec: u8, out: &mut String) {
    match expr {
        Expr::Lit(v) => out.push_str(&v.to_string()),
        Expr::Var => out.push('n'),
        Expr::Bin(op, lhs, rhs) => {
            let prec = op.precedence();
            let parens = prec < min_prec;
            if parens {
                out.push('(');
            }
            render_at(lhs, prec, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            // Right operand needs strictly higher binding to preserve
            // left associativity of - / %.
            render_at(rhs, prec + 1, out);
            if parens {
                out.push(')');
            }
        }
        Expr::Min(a, b) | Expr::Max(a, b) => {
            out.push_str(if matches!(expr, Expr::Min(..)) {
                "min("
            } else {
                "max("
            });
            render_at(a, 0, out);
            out.push_str(", ");
            render_at(b, 0, out);
            out.push(')');
        }
        Expr::If {
            op,
            lhs,
            rhs,
            then,
            els,
        } => {
            let parens = min_prec > 0;
            if parens {
                out.push('(');
            }
            out.push_str("if ");
            render_at(lhs, 1, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            render_at(rhs, 1, out);
            out.push_str(" then ");
            render_at(then, 0, out);
            out.push_str(" else ");
            render_at(els, 0, out);
            if parens {
                out.push(')');
            }
        }
        Expr::Table { entries, default } => {
            let parens = min_prec > 0;
            if parens {
                out.push('(');
            }
            out.push_str("table{");
            for (i, (k, v)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&k.to_string());
                out.push(':');
                out.push_str(&v.to_string());
            }
            out.push_str("} else ");
            render_at(default, 0, out);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Evaluates at `n >= 1`. The result must be `>= 1`; intermediates may
/// touch 0 (comparisons, subtraction) without error.
pub fn eval(expr: &Expr, n: &Numeral, max_bits: u64) -> Result<Numeral, EvalError> {
    let input = n.to_biguint().ok_or(EvalError::MagnitudeBudget)?;
    if input.bits() > max_bits {
        return Err(EvalError::MagnitudeBudget);
    }
    let value = eval_big(expr, &input, max_bits)?;
    if value.is_zero() {
        return Err(EvalError::ResultZero);
    }
    Ok(Numeral::from_biguint(value))
}

fn eval_big(expr: &Expr, n: &BigUint, max_bits: u64) -> Result<BigUint, EvalError> {
    let value = match expr {
        Expr::Lit(v) => BigUint::from(*v),
        Expr::Var => n.clone(),
        Expr::Bin(op, lhs, rhs) => {
            let a = eval_big(lhs, n, max_bits)?;
            let b = eval_big(rhs, n, max_bits)?;
            match op {
                BinOp::Add => a + b,
                // Natural subtraction truncates at 0.
                BinOp::Sub => {
                    if a >= b {
                        a - b
                    } else {
                        BigUint::zero()
                    }
                }
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
                BinOp::Mod => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    a % b
                }
            }
        }
        Expr::Min(x, y) => eval_big(x, n, max_bits)?.min(eval_big(y, n, max_bits)?),
        Expr::Max(x, y) => eval_big(x, n, max_bits)?.max(eval_big(y, n, max_bits)?),
        Expr::If {
            op,
            lhs,
            rhs,
            then,
            els,
        } => {
            let a = eval_big(lhs, n, max_bits)?;
            let b = eval_big(rhs, n, max_bits)?;
            let taken = match op {
                RelOp::Eq => a == b,
                RelOp::Ne => a != b,
                RelOp::Lt => a < b,
                RelOp::Le => a <= b,
                RelOp::Gt => a > b,
                RelOp::Ge => a >= b,
            };
            return eval_big(if taken { then } else { els }, n, max_bits);
        }
        Expr::Table { entries, default } => {
            if let Some(key) = to_u64(n) {
                if let Ok(idx) = entries.binary_search_by_key(&key, |&(k, _)| k) {
                    return Ok(BigUint::from(entries[idx].1));
                }
            }
            return eval_big(default, n, max_bits);
        }
    };
    if value.bits() > max_bits {
        return Err(EvalError::MagnitudeBudget);
    }
    Ok(value)
}

fn to_u64(n: &BigUint) -> Option<u64> {
    let digits = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, n: u64) -> Result<u64, EvalError> {
        let expr = parse(src).unwrap();
        eval(&expr, &Numeral::from_u64(n), DEFAULT_VALUE_BITS).map(|v| v.to_u64().unwrap())
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("n + 1").unwrap(),
            Expr::Bin(BinOp::Add, Box::new(Expr::Var), Box::new(Expr::Lit(1)))
        );
        let collatz = parse("if n % 2 == 0 then n / 2 else 3 * n + 1").unwrap();
        assert!(matches!(collatz, Expr::If { op: RelOp::Eq, .. }));
        let piecewise = parse("table{1:2, 2:1} else n").unwrap();
        assert_eq!(
            piecewise,
            Expr::Table {
                entries: alloc::vec![(1, 2), (2, 1)],
                default: Box::new(Expr::Var)
            }
        );
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ev("n + 1", 41), Ok(42));
        assert_eq!(ev("max(1, n / 2)", 13), Ok(6));
        assert_eq!(ev("max(1, n / 2)", 1), Ok(1));
        assert_eq!(ev("table{1:2, 2:1} else n", 7), Ok(7));
        assert_eq!(ev("table{1:2, 2:1} else n", 2), Ok(1));
        assert_eq!(ev("if n % 2 == 0 then n / 2 else 3 * n + 1", 7), Ok(22));
        assert_eq!(ev("if n % 2 == 0 then n / 2 else 3 * n + 1", 10), Ok(5));
    }

    #[test]
    fn precedence_mul_over_add() {
        assert_eq!(ev("2 + 3 * 4", 1), Ok(14));
        assert_eq!(ev("3 * 4 + 2", 1), Ok(14));
    }

    #[test]
    fn precedence_div_mod_over_sub() {
        assert_eq!(ev("10 - 4 / 2", 1), Ok(8));
        assert_eq!(ev("10 - 7 % 4", 1), Ok(7));
    }

    #[test]
    fn precedence_left_associative() {
        assert_eq!(ev("10 - 3 - 2", 1), Ok(5));
        assert_eq!(ev("24 / 4 / 2", 1), Ok(3));
    }

    #[test]
    fn precedence_parens_override() {
        assert_eq!(ev("(2 + 3) * 4", 1), Ok(20));
        assert_eq!(ev("10 - (3 - 2)", 1), Ok(9));
    }

    #[test]
    fn comparisons_bind_loosest() {
        assert_eq!(ev("if n + 1 > 2 * 3 then 1 else 2", 6), Ok(1));
        assert_eq!(ev("if n + 1 > 2 * 3 then 1 else 2", 5), Ok(2));
    }

    #[test]
    fn subtraction_truncates_at_zero() {
        assert_eq!(ev("(1 - n) + 5", 3), Ok(5));
    }

    #[test]
    fn division_by_zero_reported() {
        assert_eq!(ev("n / (n - n)", 3), Err(EvalError::DivisionByZero));
        assert_eq!(ev("n % 0", 3), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn zero_result_reported() {
        assert_eq!(ev("n - n", 5), Err(EvalError::ResultZero));
        assert_eq!(ev("n / 2", 1), Err(EvalError::ResultZero));
    }

    #[test]
    fn magnitude_budget_reported() {
        let expr = parse("n * n").unwrap();
        let mut v = Numeral::from_u64(2);
        let mut steps = 0;
        loop {
            match eval(&expr, &v, 1 << 10) {
                Ok(next) => v = next,
                Err(EvalError::MagnitudeBudget) => break,
                Err(other) => panic!("unexpected {other:?}"),
            }
            steps += 1;
            assert!(steps < 64, "budget never tripped");
        }
    }

    #[test]
    fn diagnostics_carry_position() {
        let err = parse("n +\n* 2").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse("if n > 2 then 1").unwrap_err();
        assert_eq!(err.expected, "`else`");
        let err = parse("table{1:2, 1:3} else n").unwrap_err();
        assert!(err.expected.contains("distinct"));
        let err = parse("99999999999999999999999").unwrap_err();
        assert!(err.expected.contains("64 bits"));
        let err = parse("foo + 1").unwrap_err();
        assert!(err.found.contains("foo"));
    }

    #[test]
    fn render_round_trip_corpus() {
        let corpus = [
            "n + 1",
            "if n % 2 == 0 then n / 2 else 3 * n + 1",
            "table{1:2, 2:1} else n",
            "max(1, n / 2)",
            "min(n, 10) * (n - 2)",
            "(n + 1) * (n + 2) % 7",
            "if n >= 10 then table{1:1} else n else n * n",
            "10 - 3 - 2",
            "2 * (3 + 4) - n / 2",
        ];
        for src in corpus {
            let once = parse(src).unwrap();
            let rendered = render(&once);
            let twice = parse(&rendered).unwrap();
            assert_eq!(once, twice, "round trip of {src:?} via {rendered:?}");
        }
    }

    #[test]
    fn purity() {
        let expr = parse("if n % 3 == 0 then n / 3 else 2 * n + 1").unwrap();
        let n = Numeral::from_u64(17);
        let first = eval(&expr, &n, DEFAULT_VALUE_BITS).unwrap();
        for _ in 0..10 {
            assert_eq!(eval(&expr, &n, DEFAULT_VALUE_BITS).unwrap(), first);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_expr() -> impl Strategy<Value = Expr> {
            let leaf = prop_oneof![(0u64..1000).prop_map(Expr::Lit), Just(Expr::Var)];
            leaf.prop_recursive(4, 32, 4, |inner| {
                prop_oneof![
                    (
                        prop_oneof![
                            Just(BinOp::Add),
                            Just(BinOp::Sub),
                            Just(BinOp::Mul),
                            Just(BinOp::Div),
                            Just(BinOp::Mod)
                        ],
                        inner.clone(),
                        inner.clone()
                    )
                        .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Expr::Min(Box::new(a), Box::new(b))),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Expr::Max(Box::new(a), Box::new(b))),
                    (
                        prop_oneof![
                            Just(RelOp::Eq),
                            Just(RelOp::Ne),
                            Just(RelOp::Lt),
                            Just(RelOp::Le),
                            Just(RelOp::Gt),
                            Just(RelOp::Ge)
                        ],
                        inner.clone(),
                        inner.clone(),
                        inner.clone(),
                        inner.clone()
                    )
                        .prop_map(|(op, lhs, rhs, then, els)| Expr::If {
                            op,
                            lhs: Box::new(lhs),
                            rhs: Box::new(rhs),
                            then: Box::new(then),
                            els: Box::new(els)
                        }),
                    (
                        proptest::collection::btree_map(1u64..50, 1u64..50, 1..4),
                        inner
                    )
                        .prop_map(|(map, d)| Expr::Table {
                            entries: map.into_iter().collect(),
                            default: Box::new(d)
                        }),
                ]
            })
        }

        proptest! {
            #[test]
            fn render_parse_round_trip(expr in arb_expr()) {
                let rendered = render(&expr);
                let parsed = parse(&rendered).unwrap();
                prop_assert_eq!(parsed, expr);
            }

            #[test]
            fn eval_is_pure(expr in arb_expr(), n in 1u64..10_000) {
                let n = Numeral::from_u64(n);
                let a = eval(&expr, &n, DEFAULT_VALUE_BITS);
                let b = eval(&expr, &n, DEFAULT_VALUE_BITS);
                prop_assert_eq!(a, b);
            }
        }
    }
}
