//! Content-MathML subset used for kinetic laws: `cn`, `ci` and `apply`
//! with `plus`, `minus`, `times`, `divide` and `power`.

use roxmltree::{Document, Node};

use crate::model::{BinOp, Expr};
use crate::numfmt::shortest;

use super::{xml_escape, SbmlError};

pub const MATHML_NS: &str = "http://www.w3.org/1998/Math/MathML";

/// Serializes `expr` without whitespace. Left-nested chains of `+` and `*`
/// become a single n-ary `apply`.
pub fn expr_to_mathml(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(expr, &mut out);
    out
}

fn write_expr(expr: &Expr, out: &mut String) {
    match expr {
        Expr::Number(v) => {
            out.push_str("<cn>");
            out.push_str(&shortest(*v));
            out.push_str("</cn>");
        }
        Expr::Symbol(s) => {
            out.push_str("<ci>");
            out.push_str(&xml_escape(s));
            out.push_str("</ci>");
        }
        Expr::Binary { op, lhs, rhs } => {
            let tag = match op {
                BinOp::Add => "plus",
                BinOp::Sub => "minus",
                BinOp::Mul => "times",
                BinOp::Div => "divide",
                BinOp::Pow => "power",
            };
            out.push_str("<apply><");
            out.push_str(tag);
            out.push_str("/>");
            if matches!(op, BinOp::Add | BinOp::Mul) {
                let mut operands = vec![rhs.as_ref()];
                let mut left = lhs.as_ref();
                while let Expr::Binary {
                    op: inner,
                    lhs: l,
                    rhs: r,
                } = left
                {
                    if inner != op {
                        break;
                    }
                    operands.push(r);
                    left = l;
                }
                operands.push(left);
                for e in operands.into_iter().rev() {
                    write_expr(e, out);
                }
            } else {
                write_expr(lhs, out);
                write_expr(rhs, out);
            }
            out.push_str("</apply>");
        }
    }
}

/// Parses a fragment rooted at `math` or at an operand element. n-ary
/// `plus`/`times` fold left-associatively; unary `minus` becomes `0 - x`.
pub fn mathml_to_expr(xml: &str) -> Result<Expr, SbmlError> {
    let doc = Document::parse(xml).map_err(|e| SbmlError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() == "math" {
        math_element(root, "math")
    } else {
        node_to_expr(root, "")
    }
}

/// Converts the single operand inside a `<math>` element.
pub(crate) fn math_element(math: Node<'_, '_>, path: &str) -> Result<Expr, SbmlError> {
    let children: Vec<_> = math.children().filter(Node::is_element).collect();
    match children.as_slice() {
        [one] => node_to_expr(*one, path),
        _ => Err(SbmlError::schema(path, "<math> must contain exactly one expression")),
    }
}

fn text_of(node: Node<'_, '_>) -> String {
    node.children()
        .filter(Node::is_text)
        .filter_map(|n| n.text())
        .collect::<String>()
        .trim()
        .to_string()
}

fn parse_number(text: &str, path: &str) -> Result<f64, SbmlError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| SbmlError::schema(path, format!("invalid number `{}`", text.trim())))
}

pub(crate) fn node_to_expr(node: Node<'_, '_>, path: &str) -> Result<Expr, SbmlError> {
    let name = node.tag_name().name();
    match name {
        "cn" => {
            let kind = node.attribute("type").unwrap_or("real");
            match kind {
                "real" | "integer" => parse_number(&text_of(node), path).map(Expr::Number),
                "e-notation" | "rational" => {
                    let parts: Vec<String> = node
                        .children()
                        .filter(Node::is_text)
                        .filter_map(|n| n.text())
                        .map(|t| t.trim().to_string())
                        .filter(|t| !t.is_empty())
                        .collect();
                    let [a, b] = parts.as_slice() else {
                        return Err(SbmlError::schema(path, format!("<cn type=\"{kind}\"> needs two parts")));
                    };
                    let (a, b) = (parse_number(a, path)?, parse_number(b, path)?);
                    let v = if kind == "rational" { a / b } else { a * 10f64.powf(b) };
                    if v.is_finite() {
                        Ok(Expr::Number(v))
                    } else {
                        Err(SbmlError::schema(path, "non-finite number"))
                    }
                }
                other => Err(SbmlError::UnsupportedMathml(format!("cn type=\"{other}\""))),
            }
        }
        "ci" => {
            let t = text_of(node);
            if t.is_empty() {
                Err(SbmlError::schema(path, "empty <ci>"))
            } else {
                Ok(Expr::Symbol(t))
            }
        }
        "apply" => {
            let mut it = node.children().filter(Node::is_element);
            let Some(op) = it.next() else {
                return Err(SbmlError::schema(path, "empty <apply>"));
            };
            let args = it.map(|n| node_to_expr(n, path)).collect::<Result<Vec<_>, _>>()?;
            let op_name = op.tag_name().name();
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(SbmlError::schema(
                        path,
                        format!("<{op_name}/> takes {n} operands, got {}", args.len()),
                    ))
                }
            };
            let fold = |op: BinOp, identity: f64, args: Vec<Expr>| {
                let mut it = args.into_iter();
                match it.next() {
                    None => Expr::Number(identity),
                    Some(first) => it.fold(first, |acc, e| Expr::binary(op, acc, e)),
                }
            };
            match op_name {
                "plus" => Ok(fold(BinOp::Add, 0.0, args)),
                "times" => Ok(fold(BinOp::Mul, 1.0, args)),
                "minus" if args.len() == 1 => Ok(Expr::neg(args.into_iter().next().expect("one operand"))),
                "minus" | "divide" | "power" => {
                    arity(2)?;
                    let op = match op_name {
                        "minus" => BinOp::Sub,
                        "divide" => BinOp::Div,
                        _ => BinOp::Pow,
                    };
                    let mut it = args.into_iter();
                    let (a, b) = (it.next().expect("lhs"), it.next().expect("rhs"));
                    Ok(Expr::binary(op, a, b))
                }
                other => Err(SbmlError::UnsupportedMathml(other.to_string())),
            }
        }
        other => Err(SbmlError::UnsupportedMathml(other.to_string())),
    }
}
