use super::Multivector;
use crate::error::Result;
use crate::exactalg::{same_ctx, Poly};

/// Schouten bracket `[[X, X']] ∈ D_{i+i'-1}(A)`, computed by the recursion
///
/// ```text
/// [[X, a]]     = X(a)
/// [[a, X']]    = (-1)^{i'} X'(a)
/// [[X, X']](a) = [[X, X'(a)]] + (-1)^{i'-1} [[X(a), X']]
/// ```
///
/// A degree-`m` multiderivation is recovered from its values on the
/// coordinate functions. Brackets of two functions (degree -1) are zero.
pub fn schouten(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    same_ctx(x.ctx(), y.ctx())?;
    Ok(bracket(x, y))
}

fn bracket(x: &Multivector, y: &Multivector) -> Multivector {
    let ctx = x.ctx();
    let (i, j) = (x.degree(), y.degree());
    if i == 0 && j == 0 {
        return Multivector::zero(ctx, 0);
    }
    if j == 0 {
        return eval(x, &y.as_scalar());
    }
    if i == 0 {
        return eval(y, &x.as_scalar()).signed(j % 2 == 1);
    }
    let m = i + j - 1;
    if m > ctx.n() || x.is_zero() || y.is_zero() {
        return Multivector::zero(ctx, m);
    }
    let values: Vec<Multivector> = (0..ctx.n())
        .map(|l| {
            let first = bracket(x, &y.eval_coord(l));
            let second = bracket(&x.eval_coord(l), y).signed((j - 1) % 2 == 1);
            &first + &second
        })
        .collect();
    Multivector::from_coordinate_values(ctx, m, &values)
}

fn eval(x: &Multivector, a: &Poly) -> Multivector {
    x.evaluate(a).expect("degree checked by caller")
}
