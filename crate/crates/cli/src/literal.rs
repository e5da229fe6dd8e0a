//! Tensor literals: `metric`, `polar:a,b`, `eh:ell`, `cart:phi`,
//! `raw:b1,b2,b3,b4,b5,b6`.

use kt_core::{cartesian_rotated_kt, eh_canonical_kt, metric_kt, polar_kt_at, KtError, KtParams};

#[derive(Debug)]
pub enum LiteralError {
    Syntax(String),
    /// Well-formed literal outside the constructor's domain.
    Domain(KtError),
}

impl From<String> for LiteralError {
    fn from(s: String) -> Self {
        LiteralError::Syntax(s)
    }
}

fn numbers(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{what}: '{t}': {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("{what} takes {n} numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("{what}: values must be finite"));
    }
    Ok(v)
}

pub fn parse_tensor(s: &str) -> Result<KtParams, LiteralError> {
    let s = s.trim();
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (s, None),
    };
    let t = match (head, rest) {
        ("metric", None) => metric_kt(),
        ("polar", Some(r)) => {
            let v = numbers(r, 2, "polar")?;
            polar_kt_at(v[0], v[1])
        }
        ("eh", Some(r)) => {
            let v = numbers(r, 1, "eh")?;
            eh_canonical_kt(v[0]).map_err(LiteralError::Domain)?
        }
        ("cart", Some(r)) => cartesian_rotated_kt(numbers(r, 1, "cart")?[0]),
        ("raw", Some(r)) => {
            let v = numbers(r, 6, "raw")?;
            KtParams::new([v[0], v[1], v[2], v[3], v[4], v[5]]).map_err(LiteralError::Domain)?
        }
        _ => {
            return Err(LiteralError::Syntax(format!(
                "unknown tensor literal '{s}' (metric, polar:a,b, eh:ell, cart:phi, raw:b1,..,b6)"
            )))
        }
    };
    Ok(t)
}

/// `p1,p2,p3` of a rigid motion.
pub fn parse_element(s: &str) -> Result<kt_core::SE2Element, String> {
    let v = numbers(s, 3, "group element")?;
    Ok(kt_core::SE2Element::new(v[0], v[1], v[2]))
}
