//! Output helpers: exact fractions with factored denominators, matrix text
//! export, and JSON views of the core types.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use kunzcone_core::cone::{Face, HCone, PointedCone, RowLabel};
use kunzcone_core::groupcone::FacePair;
use kunzcone_core::kunzpoly::{EmptyReason, WitnessStatus};
use kunzcone_core::numsgp::NumericalSemigroup;
use kunzcone_core::poset::KunzPoset;

/// Factors a positive integer by trial division; panics only on zero.
fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n = n.to_u128().expect("factored values are desk scale");
    assert!(n > 0);
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

fn factored_int(n: &BigInt) -> String {
    if n.is_zero() || n.abs().is_one() {
        return n.to_string();
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let factors = factor(&n.abs());
    if factors.len() == 1 && factors[0].1 == 1 {
        return n.to_string();
    }
    let body = factors
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*");
    format!("{sign}({body})")
}

/// Renders `71/81648` as `71/(2^4*3^6*7)`, keeping prime parts compact.
pub fn factored_fraction(r: &BigRational) -> String {
    if r.denom().is_one() {
        return factored_int(r.numer());
    }
    format!("{}/{}", factored_int(r.numer()), factored_int(r.denom()))
}

pub fn plain_fraction(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Plain-text matrix export: first line `rows cols`, then integer rows.
pub fn matrix_text<T: ToString>(rows: &[Vec<T>]) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = format!("{} {}\n", rows.len(), cols);
    for row in rows {
        let line = row
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn label_json(label: &RowLabel) -> Value {
    match label {
        RowLabel::Unlabeled => Value::Null,
        RowLabel::Pair(a, b) => json!({ "pair": [a, b] }),
        RowLabel::NonNeg(a) => json!({ "nonneg": a }),
    }
}

pub fn hcone_json(h: &HCone) -> Value {
    json!({
        "ambient_dim": h.ambient_dim(),
        "inequalities": h
            .rows()
            .iter()
            .map(|r| r.iter().map(|c| c.to_i64().expect("desk-scale rows")).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "labels": h.labels().iter().map(label_json).collect::<Vec<_>>(),
    })
}

pub fn rays_json(cone: &PointedCone) -> Value {
    Value::Array(
        cone.rays()
            .iter()
            .map(|r| {
                Value::Array(
                    r.direction
                        .iter()
                        .map(|c| json!(c.to_i64().expect("desk-scale rays")))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn face_json(face: &Face) -> Value {
    json!({
        "equalities": face.equality_set(),
        "rays": face.ray_set(),
        "dim": face.dim(),
    })
}

pub fn poset_json(poset: &KunzPoset) -> Value {
    json!({
        "ground_factors": poset.ground().factors(),
        "relations": poset.relation_pairs(),
    })
}

pub fn face_pair_json(pair: &FacePair) -> Value {
    json!({
        "dim": pair.face.dim(),
        "rays": pair.face.ray_set(),
        "kunz_subgroup": pair.kunz_subgroup.elements(),
        "poset": poset_json(&pair.poset),
        "atoms": pair.poset.atoms(),
        "covers": pair.poset.covers(),
    })
}

pub fn semigroup_json(s: &NumericalSemigroup) -> Value {
    json!({
        "generators": s.generators(),
        "multiplicity": s.multiplicity(),
        "genus": s.genus(),
        "frobenius": s.frobenius(),
    })
}

pub fn witness_json(status: &WitnessStatus) -> Value {
    match status {
        WitnessStatus::Witness { point, semigroup } => json!({
            "witness_status": "witness",
            "point": point,
            "semigroup": semigroup_json(semigroup),
        }),
        WitnessStatus::ProvenEmpty(reason) => json!({
            "witness_status": "proven_empty",
            "reason": match reason {
                EmptyReason::NegativeCoordinate(i) => json!({"negative_coordinate": i}),
                EmptyReason::RayCongruence => json!("congruence"),
            },
        }),
        WitnessStatus::NoneFound { bound } => json!({
            "witness_status": "none_found",
            "bound": bound,
        }),
    }
}

pub fn witness_text(status: &WitnessStatus) -> String {
    match status {
        WitnessStatus::Witness { point, semigroup } => format!(
            "witness: point {:?}, semigroup <{}>",
            point,
            semigroup
                .generators()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        WitnessStatus::ProvenEmpty(EmptyReason::NegativeCoordinate(i)) => {
            format!("proven_empty: coordinate {i} is negative throughout the face")
        }
        WitnessStatus::ProvenEmpty(EmptyReason::RayCongruence) => {
            "proven_empty: the lattice congruence along the ray has no solution".to_string()
        }
        WitnessStatus::NoneFound { bound } => {
            format!("none_found: no integer point with coordinates <= {bound}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_rendering() {
        let r = BigRational::new(BigInt::from(71), BigInt::from(81648));
        assert_eq!(factored_fraction(&r), "71/(2^4*3^6*7)");
        let r = BigRational::new(BigInt::from(1), BigInt::from(12));
        assert_eq!(factored_fraction(&r), "1/(2^2*3)");
        let r = BigRational::new(BigInt::from(1633), BigInt::from(36288000));
        assert_eq!(factored_fraction(&r), "(23*71)/(2^9*3^4*5^3*7)");
        let r = BigRational::from_integer(BigInt::from(5));
        assert_eq!(factored_fraction(&r), "5");
    }

    #[test]
    fn matrix_export_shape() {
        let rows = vec![vec![1i64, -1], vec![0, 2]];
        assert_eq!(matrix_text(&rows), "2 2\n1 -1\n0 2\n");
    }
}
