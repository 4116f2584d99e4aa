use alloc::boxed::Box;
use core::fmt;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_function_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Expression tree over the single free variable `t`.
///
/// Every node owns its full set of operands, so a tree is well-formed by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpressionNode {
    Constant(f64),
    Time,
    Unary(UnaryOp, Box<ExpressionNode>),
    Binary(BinaryOp, Box<ExpressionNode>, Box<ExpressionNode>),
}

/// Evaluation left the real domain or produced a non-finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDomainError {
    pub operation: &'static str,
    pub t: f64,
}

impl fmt::Display for EvalDomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "'{}' left the real domain or overflowed at t = {}",
            self.operation, self.t
        )
    }
}

impl ExpressionNode {
    pub fn constant(value: f64) -> Self {
        ExpressionNode::Constant(value)
    }

    pub fn unary(op: UnaryOp, operand: ExpressionNode) -> Self {
        ExpressionNode::Unary(op, Box::new(operand))
    }

    pub fn binary(op: BinaryOp, lhs: ExpressionNode, rhs: ExpressionNode) -> Self {
        ExpressionNode::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalDomainError> {
        let (value, operation) = match self {
            ExpressionNode::Constant(c) => (*c, "constant"),
            ExpressionNode::Time => (t, "t"),
            ExpressionNode::Unary(op, arg) => {
                let x = arg.eval(t)?;
                let v = match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Sqrt if x < 0.0 => f64::NAN,
                    UnaryOp::Sqrt => x.sqrt(),
                };
                (v, op.name())
            }
            ExpressionNode::Binary(op, lhs, rhs) => {
                let a = lhs.eval(t)?;
                let b = rhs.eval(t)?;
                let v = match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => a / b,
                    BinaryOp::Pow => a.powf(b),
                };
                let name = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    BinaryOp::Mul => "*",
                    BinaryOp::Div => "/",
                    BinaryOp::Pow => "^",
                };
                (v, name)
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalDomainError { operation, t })
        }
    }

    /// The same expression with `t` replaced by `t + offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        match self {
            ExpressionNode::Constant(c) => ExpressionNode::Constant(*c),
            ExpressionNode::Time => ExpressionNode::binary(
                BinaryOp::Add,
                ExpressionNode::Time,
                ExpressionNode::Constant(offset),
            ),
            ExpressionNode::Unary(op, arg) => ExpressionNode::unary(*op, arg.shifted(offset)),
            ExpressionNode::Binary(op, lhs, rhs) => {
                ExpressionNode::binary(*op, lhs.shifted(offset), rhs.shifted(offset))
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ExpressionNode::Constant(_) | ExpressionNode::Time => 1,
            ExpressionNode::Unary(_, arg) => 1 + arg.depth(),
            ExpressionNode::Binary(_, lhs, rhs) => 1 + lhs.depth().max(rhs.depth()),
        }
    }
}

pub(crate) struct Literal(pub f64);

impl fmt::Display for Literal {
    // `{}` on f64 never uses exponent notation and round-trips exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 0.0 || (self.0 == 0.0 && self.0.is_sign_negative()) {
            write!(f, "(-{})", -self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Renders fully parenthesized infix text accepted by the parser.
impl fmt::Display for ExpressionNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpressionNode::Constant(c) => write!(f, "{}", Literal(*c)),
            ExpressionNode::Time => f.write_str("t"),
            ExpressionNode::Unary(UnaryOp::Neg, arg) => write!(f, "(-{arg})"),
            ExpressionNode::Unary(op, arg) => write!(f, "{}({arg})", op.name()),
            ExpressionNode::Binary(op, lhs, rhs) => write!(f, "({lhs}{}{rhs})", op.symbol()),
        }
    }
}
