use std::path::Path;

use alcove::lattice::rational::format_rational;
use alcove::restriction::{restrict_datum, twisted_pair};
use alcove::rgroup::{
    classify_stabilizers, coinvariants_bridge, small_twisted_rows, sphi_order, stabilizer, table1 as table1_rows,
    PointSpec, RGroupContext,
};
use alcove::rootdata::{BasedRootDatum, CartanType, DatumAutomorphism, DatumJson, Isogeny};
use alcove::weyl::{omega_by_barycenter, omega_by_cosets};
use serde_json::{json, Value};

use crate::{Failure, Method, Outcome};

fn automorphism_json(aut: &DatumAutomorphism) -> Value {
    json!({
        "matrix": aut.matrix.to_i64_rows(),
        "simple_permutation": aut.simple_permutation,
        "order": aut.order,
    })
}

fn describe(datum: &BasedRootDatum) -> Value {
    let violation = datum.validate().err();
    let fg = datum.fundamental_group();
    let highest = datum.highest_coroot().ok().map(|h| {
        json!({
            "coroot": h.coroot,
            "marks": h.marks,
        })
    });
    let coxeter = datum.coxeter_number().ok().map(|h| format_rational(&h));
    json!({
        "datum": datum.to_json(),
        "valid": violation.is_none(),
        "violation": violation.map(|v| v.to_string()),
        "components": datum
            .identify_type()
            .map(|ts| ts.iter().map(ToString::to_string).collect::<Vec<_>>())
            .ok(),
        "cartan_matrix": datum.cartan_matrix(),
        "fundamental_group": {
            "factors": fg.torsion.factors_u64(),
            "free_rank": fg.free_rank,
        },
        "highest_coroot": highest,
        "coxeter_number": coxeter,
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

pub fn datum(t: &CartanType, iso: Isogeny) -> Result<Outcome, Failure> {
    let (d, aut) = twisted_pair(t, iso)?;
    let valid = d.validate().is_ok();
    let mut json = merge(
        json!({ "type": t.to_string(), "isogeny": iso.to_string() }),
        describe(&d),
    );
    if t.is_twisted() {
        json["automorphism"] = automorphism_json(&aut);
    }
    Ok(Outcome {
        json,
        mismatch: !valid,
    })
}

pub fn datum_from_file(path: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let j: DatumJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad datum JSON: {e}")))?;
    let d = BasedRootDatum::from_json(&j).map_err(|e| Failure::Usage(e.to_string()))?;
    let valid = d.validate().is_ok();
    Ok(Outcome {
        json: merge(json!({ "input": path.display().to_string() }), describe(&d)),
        mismatch: !valid,
    })
}

pub fn omega(t: &CartanType, iso: Isogeny, method: Method, cap: usize) -> Result<Outcome, Failure> {
    let (d, aut) = twisted_pair(t, iso)?;
    let folded = restrict_datum(&d, std::slice::from_ref(&aut))?.folded;
    let (primary, agree) = match method {
        Method::Cosets => (omega_by_cosets(&folded)?, None),
        Method::Barycenter => (omega_by_barycenter(&folded, cap)?, None),
        Method::Both => {
            let a = omega_by_barycenter(&folded, cap)?;
            let b = omega_by_cosets(&folded)?;
            let agree = a.agrees_with(&b);
            (a, Some(agree))
        }
    };
    let verified = primary.verify();
    let method_name = match method {
        Method::Cosets => "cosets",
        Method::Barycenter => "barycenter",
        Method::Both => "both",
    };
    Ok(Outcome {
        mismatch: verified.is_err() || agree == Some(false),
        json: json!({
            "type": t.to_string(),
            "isogeny": iso.to_string(),
            "method": method_name,
            "omega": primary.to_json(),
            "verified": verified.is_ok(),
            "verify_error": verified.err().map(|e| e.to_string()),
            "constructions_agree": agree,
        }),
    })
}

pub fn restrict(t: &CartanType, iso: Isogeny) -> Result<Outcome, Failure> {
    let (d, aut) = twisted_pair(t, iso)?;
    let res = restrict_datum(&d, std::slice::from_ref(&aut))?;
    let violation = res.folded.validate().err();
    Ok(Outcome {
        mismatch: violation.is_some(),
        json: json!({
            "type": t.to_string(),
            "isogeny": iso.to_string(),
            "automorphism": automorphism_json(&aut),
            "restriction": res.to_json()?,
            "valid": violation.is_none(),
            "violation": violation.map(|v| v.to_string()),
        }),
    })
}

pub fn rgroup(t: &CartanType, iso: Isogeny, spec: &PointSpec) -> Result<Outcome, Failure> {
    let ctx = RGroupContext::for_type(t, iso)?;
    let x = ctx.point(spec)?;
    let stab = stabilizer(&ctx.omega, &x)?;
    let bridge = coinvariants_bridge(&ctx.datum, &ctx.sigma, &ctx.restriction)?;
    let sphi = sphi_order(&x, &bridge, &ctx.omega)?;
    let bj = bridge.to_json();
    let omega = ctx.omega.to_json();
    Ok(Outcome {
        mismatch: !(sphi.holds && bj.homomorphism && bj.surjective && bj.order_law),
        json: json!({
            "type": t.to_string(),
            "isogeny": iso.to_string(),
            "point": x,
            "omega": { "order": omega.order, "factors": omega.factors },
            "stabilizer": {
                "order": stab.order(),
                "iso_type": stab.iso_type,
                "elements": stab.indices,
                "iota_images": stab.iota_images,
            },
            "bridge": bj,
            "sphi": sphi,
        }),
    })
}

pub fn classify(t: &CartanType, iso: Isogeny, seed: u64) -> Result<Outcome, Failure> {
    let ctx = RGroupContext::for_type(t, iso)?;
    let report = classify_stabilizers(&ctx.omega, seed)?;
    Ok(Outcome {
        mismatch: !report.all_realized,
        json: json!({
            "type": t.to_string(),
            "isogeny": iso.to_string(),
            "seed": seed,
            "classification": report,
        }),
    })
}

pub fn table1(strict: bool) -> Result<Outcome, Failure> {
    let rows = table1_rows()?;
    let all_match = rows.iter().all(|r| r.matches);
    let consistent = rows.iter().all(|r| r.consistent);
    let mismatches: Vec<Value> = rows
        .iter()
        .filter(|r| !r.matches)
        .map(|r| json!({ "type": r.label, "expected": r.expected, "computed": r.computed }))
        .collect();
    Ok(Outcome {
        mismatch: !consistent || (strict && !all_match),
        json: json!({
            "rows": rows,
            "all_match": all_match,
            "all_consistent": consistent,
            "mismatches": mismatches,
            "small_twisted": small_twisted_rows(),
        }),
    })
}
