use num_bigint::BigInt;
use num_traits::Signed;

use crate::diagram::{gauss_code, LinkDiagram};

use super::poly::{LaurentPolynomial, Variable};
use super::{InvariantError, Strands};

/// Alexander polynomial of a knot from the Fox derivatives of its Wirtinger
/// presentation, normalized.
pub fn alexander_fox(diagram: &LinkDiagram) -> Result<LaurentPolynomial, InvariantError> {
    if diagram.component_count() != 1 {
        return Err(InvariantError::MultiComponent(diagram.component_count()));
    }
    let strands = Strands::from_gauss(&gauss_code(diagram));
    let n = strands.xings.len();
    if n == 0 {
        return Ok(LaurentPolynomial::one(Variable::T));
    }

    // arcs run from one under-passage to the next
    let mut arc_of_edge = vec![usize::MAX; strands.edges];
    let mut starts_arc = vec![false; strands.edges];
    for x in &strands.xings {
        starts_arc[x.under_out] = true;
    }
    let first = (0..strands.edges).find(|e| starts_arc[*e]).ok_or_else(|| {
        InvariantError::DegenerateDiagram("knot diagram without under-passages".into())
    })?;
    let mut arc = 0;
    for k in 0..strands.edges {
        let e = (first + k) % strands.edges;
        if k > 0 && starts_arc[e] {
            arc += 1;
        }
        arc_of_edge[e] = arc;
    }
    if arc + 1 != n {
        return Err(InvariantError::DegenerateDiagram(format!("{} arcs for {n} crossings", arc + 1)));
    }

    let c = |k: i64, low: i64| LaurentPolynomial::from_coeffs(Variable::T, low, &[k]);
    let mut matrix = vec![vec![LaurentPolynomial::zero(Variable::T); n]; n];
    for (row, x) in strands.xings.iter().enumerate() {
        let over = arc_of_edge[x.over_in];
        let from = arc_of_edge[x.under_in];
        let to = arc_of_edge[x.under_out];
        let entries = if x.sign > 0 {
            [(over, LaurentPolynomial::from_coeffs(Variable::T, 0, &[1, -1])), (from, c(1, 1)), (to, c(-1, 0))]
        } else {
            [(over, LaurentPolynomial::from_coeffs(Variable::T, 0, &[-1, 1])), (from, c(1, 0)), (to, c(-1, 1))]
        };
        for (col, v) in entries {
            matrix[row][col] = &matrix[row][col] + &v;
        }
    }
    matrix.pop();
    for row in &mut matrix {
        row.pop();
    }
    let det = determinant(matrix);
    if det.is_zero() {
        return Err(InvariantError::DegenerateDiagram("vanishing Alexander minor".into()));
    }
    normalize_alexander(&det)
}

/// Fraction-free (Bareiss) elimination over `Z[t]`.
fn determinant(mut m: Vec<Vec<LaurentPolynomial>>) -> LaurentPolynomial {
    let n = m.len();
    if n == 0 {
        return LaurentPolynomial::one(Variable::T);
    }
    let mut negate = false;
    let mut prev = LaurentPolynomial::one(Variable::T);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return LaurentPolynomial::zero(Variable::T);
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact");
            }
            m[i][k] = LaurentPolynomial::zero(Variable::T);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Multiplies by the unit `±t^k` that makes the lowest exponent zero and the
/// constant term positive.
pub fn normalize_alexander(p: &LaurentPolynomial) -> Result<LaurentPolynomial, InvariantError> {
    let low = p.min_exp().ok_or(InvariantError::ZeroPolynomial)?;
    let shifted = p.shift(-low);
    Ok(if shifted.coeff(0).is_negative() { shifted.scale(&BigInt::from(-1)) } else { shifted })
}
