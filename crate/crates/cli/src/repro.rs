//! The `repro` subcommand: regenerates the reference artifacts (ray censuses,
//! leading-coefficient tables, the worked triangulation, the witness census)
//! into a directory. Output is byte-identical across runs.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use kunzcone_core::abelian::make_group;
use kunzcone_core::ehrhart::{
    cross_section_volume, gamma_from_triangulation, lambda_by_formula, leading_gamma,
    leading_lambda, triangulate_cone,
};
use kunzcone_core::groupcone::build_group_cone;
use kunzcone_core::kunzpoly::build_kunz_polyhedron;

use crate::fmt;

fn write(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn run(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut summary = String::new();

    // ray censuses
    for m in [4u64, 6] {
        let gc = build_group_cone(make_group(&[m])?)?;
        let rows: Vec<Vec<BigInt>> = gc
            .cone()
            .rays()
            .iter()
            .map(|r| r.direction.clone())
            .collect();
        let name = format!("rays_z{m}.txt");
        write(&out.join(&name), &fmt::matrix_text(&rows))?;
        summary.push_str(&format!("{name}: {} extreme rays of the Z_{m} cone\n", rows.len()));
    }

    // leading coefficients table
    let mut leading = String::from("m,gamma,gamma_factored,lambda,lambda_factored\n");
    for m in 3..=6u64 {
        let g = leading_gamma(m)?;
        let l = leading_lambda(m)?;
        leading.push_str(&format!(
            "{m},{},{},{},{}\n",
            fmt::plain_fraction(&g),
            fmt::factored_fraction(&g),
            fmt::plain_fraction(&l),
            fmt::factored_fraction(&l),
        ));
    }
    write(&out.join("leading.csv"), &leading)?;
    summary.push_str("leading.csv: top quasipolynomial coefficients for m = 3..6\n");

    // the worked triangulation of the Z_4 cone with its volume data
    let gc4 = build_group_cone(make_group(&[4])?)?;
    let rays4: Vec<Vec<BigInt>> = gc4
        .cone()
        .rays()
        .iter()
        .map(|r| r.direction.clone())
        .collect();
    let tri = triangulate_cone(&rays4)?;
    let simplices: Vec<Value> = tri
        .iter()
        .map(|t| {
            json!({
                "rays": t
                    .rays
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "cross_section_volume": fmt::plain_fraction(&cross_section_volume(t)),
            })
        })
        .collect();
    let gamma4 = gamma_from_triangulation(&tri);
    let lambda4 = lambda_by_formula(4, &tri);
    let tri_json = json!({
        "simplices": simplices,
        "gamma": fmt::plain_fraction(&gamma4),
        "lambda": fmt::plain_fraction(&lambda4),
    });
    write(&out.join("triangulation_z4.json"), &format!("{tri_json}\n"))?;
    summary.push_str("triangulation_z4.json: placing triangulation with V(T) values\n");

    // Kunz subgroups and posets of the Z_6 rays
    let gc6 = build_group_cone(make_group(&[6])?)?;
    let mut poset_records = Vec::new();
    for idx in 0..gc6.cone().rays().len() {
        let face = gc6.cone().face_from_rays(&[idx])?;
        let pair = gc6.face_to_pair(&face)?;
        poset_records.push(json!({
            "ray": gc6.cone().rays()[idx]
                .direction
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            "kunz_subgroup": pair.kunz_subgroup.elements(),
            "poset": fmt::poset_json(&pair.poset),
            "atoms": pair.poset.atoms(),
            "covers": pair.poset.covers(),
        }));
    }
    write(
        &out.join("posets_z6.json"),
        &format!("{}\n", Value::Array(poset_records)),
    )?;
    summary.push_str("posets_z6.json: Kunz subgroup and poset of each Z_6 ray\n");

    // witness census of the translated polyhedron at m = 6
    let poly = build_kunz_polyhedron(6)?;
    let mut witness_records = Vec::new();
    for idx in 0..poly.group_cone().cone().rays().len() {
        let face = poly.group_cone().cone().face_from_rays(&[idx])?;
        let status = poly.face_witness(&face, 24)?;
        witness_records.push(json!({
            "ray": poly.group_cone().cone().rays()[idx]
                .direction
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            "witness": fmt::witness_json(&status),
        }));
    }
    write(
        &out.join("witness_p6.json"),
        &format!("{}\n", Value::Array(witness_records)),
    )?;
    summary.push_str("witness_p6.json: integer-point status of each P_6 ray\n");

    write(&out.join("summary.txt"), &summary)?;
    println!("wrote {} artifacts to {}", 6, out.display());
    Ok(())
}
