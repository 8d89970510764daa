//! Parse and evaluate torus expressions from strings, the same grammar the
//! qtc CLI uses: generators u, v, u3, ..., phases e(poly), rationals,
//! products, sums, integer powers, and the adjoint postfix '.

use qtori::torus::ThetaMatrix;
use qtori::{eval_expr, parse_expr};

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();

    for src in [
        "u*v",
        "v*u",
        "u^3 * v^-2",
        "u*v*u'*v'",
        "e(1/2)*u + v",
        "(u + v)*(u - v)",
        "e(t)*v*u",
    ] {
        let value = eval_expr(src, &theta)?;
        println!("{src:18} = {value}");
    }

    // The parser round-trips through a printable AST.
    let ast = parse_expr("(u + e(1/3)*v)^2'")?;
    println!("parsed: {ast}");

    // Syntax errors carry byte positions.
    match eval_expr("u * * v", &theta) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("malformed input must not parse"),
    }

    Ok(())
}
