//! Reading differential operators from files, in either the canonical text
//! form `left * D[t_1,...,t_d] * right` (clauses joined by ` + `) or the
//! JSON form `{"e": .., "terms": [{"left", "orders", "right"}]}`.

use frobdiff_core::diffop::{DiffOperator, OpTerm};
use frobdiff_core::poly::PolyRing;

use crate::expr::{eval, ParseError, Parser, Token};

/// Parses the canonical operator text over the given ring.
pub fn parse_operator_text(src: &str, ring: &PolyRing) -> Result<DiffOperator, ParseError> {
    let tokens = crate::expr::tokenize(src)?;
    let mut parser = Parser::new(&tokens, src.len());
    let mut terms = Vec::new();
    let mut max_order = 0u32;
    loop {
        let term = parse_clause(&mut parser, ring, &mut max_order)?;
        terms.push(term);
        if parser.at_end() {
            break;
        }
        parser.expect(&Token::Plus, "'+' between operator clauses")?;
    }
    let p = ring.prime();
    let mut e = 0u32;
    while p
        .pow_checked(e)
        .is_some_and(|q| q - 1 < max_order as u64)
    {
        e += 1;
    }
    DiffOperator::new(ring.clone(), e, terms)
        .map_err(|err| ParseError {
            pos: 0,
            message: err.to_string(),
        })
}

/// clause := multiplier '*' D[ints] '*' multiplier
fn parse_clause(
    parser: &mut Parser<'_>,
    ring: &PolyRing,
    max_order: &mut u32,
) -> Result<OpTerm, ParseError> {
    let left = parse_multiplier(parser, ring)?;
    parser.expect(&Token::Star, "'*' before D[...]")?;
    let d_pos = parser.here();
    match parser.bump() {
        Some((Token::DBracket, _)) => {}
        _ => {
            return Err(ParseError {
                pos: d_pos,
                message: "expected D[...]".to_string(),
            })
        }
    }
    let mut orders = Vec::new();
    loop {
        let here = parser.here();
        match parser.bump() {
            Some((Token::Int(n), _)) => {
                let n = u32::try_from(*n).map_err(|_| ParseError {
                    pos: here,
                    message: "order overflows".to_string(),
                })?;
                *max_order = (*max_order).max(n);
                orders.push(n);
            }
            _ => {
                return Err(ParseError {
                    pos: here,
                    message: "expected an integer order".to_string(),
                })
            }
        }
        let here = parser.here();
        match parser.bump() {
            Some((Token::Comma, _)) => continue,
            Some((Token::RBracket, _)) => break,
            _ => {
                return Err(ParseError {
                    pos: here,
                    message: "expected ',' or ']'".to_string(),
                })
            }
        }
    }
    if orders.len() != ring.dim() {
        return Err(ParseError {
            pos: d_pos,
            message: format!(
                "D[...] lists {} orders for a ring with {} variables",
                orders.len(),
                ring.dim()
            ),
        });
    }
    parser.expect(&Token::Star, "'*' after D[...]")?;
    let right = parse_multiplier(parser, ring)?;
    Ok(OpTerm::new(left, orders, right))
}

/// multiplier := sfactor ('*' sfactor)* where sfactor is an integer, a
/// variable, a power of either, or a parenthesized expression; stops before
/// `D[` or a top-level `+`.
fn parse_multiplier(
    parser: &mut Parser<'_>,
    ring: &PolyRing,
) -> Result<frobdiff_core::poly::MultiPoly, ParseError> {
    let mut acc = parse_sfactor(parser, ring)?;
    while parser.peek() == Some(&Token::Star) {
        // lookahead: a '*' followed by D[ belongs to the clause structure
        if let Some(Token::DBracket) = parser.peek_ahead(1) {
            break;
        }
        parser.bump();
        let rhs = parse_sfactor(parser, ring)?;
        acc = &acc * &rhs;
    }
    Ok(acc)
}

fn parse_sfactor(
    parser: &mut Parser<'_>,
    ring: &PolyRing,
) -> Result<frobdiff_core::poly::MultiPoly, ParseError> {
    let here = parser.here();
    let base = match parser.bump() {
        Some((Token::Int(n), _)) => ring.constant_u64(*n),
        Some((Token::Ident(name), pos)) => {
            let ast = crate::expr::PolyExpr::Var(name.clone(), *pos);
            eval(&ast, ring)?
        }
        Some((Token::LParen, _)) => {
            let inner = parser.expr()?;
            parser.expect(&Token::RParen, "')'")?;
            eval(&inner, ring)?
        }
        _ => {
            return Err(ParseError {
                pos: here,
                message: "expected a multiplier".to_string(),
            })
        }
    };
    if parser.peek() == Some(&Token::Caret) {
        parser.bump();
        let here = parser.here();
        match parser.bump() {
            Some((Token::Int(n), _)) => {
                let n = u32::try_from(*n).map_err(|_| ParseError {
                    pos: here,
                    message: "exponent overflows".to_string(),
                })?;
                return Ok(base.pow(n as u64));
            }
            _ => {
                return Err(ParseError {
                    pos: here,
                    message: "expected an integer exponent".to_string(),
                })
            }
        }
    }
    Ok(base)
}

/// Parses the JSON operator form `{e, terms: [{left, orders, right}]}` with
/// polynomials as canonical strings.
pub fn parse_operator_json(src: &str, ring: &PolyRing) -> Result<DiffOperator, String> {
    let value: serde_json::Value =
        serde_json::from_str(src).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value.as_object().ok_or("operator JSON must be an object")?;
    let e = obj
        .get("e")
        .and_then(|v| v.as_u64())
        .ok_or("missing integer field \"e\"")?;
    let e = u32::try_from(e).map_err(|_| "field \"e\" overflows")?;
    let terms_json = obj
        .get("terms")
        .and_then(|v| v.as_array())
        .ok_or("missing array field \"terms\"")?;
    let mut terms = Vec::new();
    for t in terms_json {
        let t = t.as_object().ok_or("each term must be an object")?;
        let left_src = t
            .get("left")
            .and_then(|v| v.as_str())
            .ok_or("missing string field \"left\"")?;
        let right_src = t
            .get("right")
            .and_then(|v| v.as_str())
            .ok_or("missing string field \"right\"")?;
        let orders_json = t
            .get("orders")
            .and_then(|v| v.as_array())
            .ok_or("missing array field \"orders\"")?;
        let mut orders = Vec::new();
        for o in orders_json {
            let o = o.as_u64().ok_or("orders must be non-negative integers")?;
            orders.push(u32::try_from(o).map_err(|_| "order overflows")?);
        }
        if orders.len() != ring.dim() {
            return Err(format!(
                "term lists {} orders for a ring with {} variables",
                orders.len(),
                ring.dim()
            ));
        }
        let left = crate::expr::parse_polynomial(left_src, ring).map_err(|e| e.to_string())?;
        let right = crate::expr::parse_polynomial(right_src, ring).map_err(|e| e.to_string())?;
        terms.push(OpTerm::new(left, orders, right));
    }
    DiffOperator::new(ring.clone(), e, terms).map_err(|e| e.to_string())
}

/// Accepts both formats: JSON when the first non-space byte is `{`.
pub fn parse_operator(src: &str, ring: &PolyRing) -> Result<DiffOperator, String> {
    if src.trim_start().starts_with('{') {
        parse_operator_json(src, ring)
    } else {
        parse_operator_text(src, ring).map_err(|e| e.to_string())
    }
}
