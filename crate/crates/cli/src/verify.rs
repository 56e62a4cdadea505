use alcove::restriction::{restrict_datum, twisted_pair, verify_theorem_yu};
use alcove::rgroup::{
    classify_stabilizers, coinvariants_bridge, compatibility_check, random_alcove_point, seeded_rng, sphi_order,
    table1_rows, ParameterPoint, RGroupContext,
};
use alcove::rootdata::{CartanType, Isogeny};
use alcove::weyl::{omega_by_barycenter, omega_by_cosets};
use serde_json::{json, Value};

use crate::{Failure, Outcome, Suite};

/// Results of one suite: per-type entries and the first counterexample.
struct SuiteResult {
    entries: Vec<Value>,
    counterexample: Option<Value>,
}

impl SuiteResult {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
            counterexample: None,
        }
    }

    fn fail(&mut self, v: Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(v);
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "passed": self.counterexample.is_none(),
            "entries": self.entries,
            "counterexample": self.counterexample,
        })
    }
}

fn parse_all(labels: &[&str]) -> Vec<CartanType> {
    labels.iter().map(|l| l.parse().expect("valid label")).collect()
}

fn iota_types() -> Vec<CartanType> {
    let mut v = Vec::new();
    for n in 1..=6 {
        v.push(format!("A{n}"));
    }
    for n in 2..=6 {
        v.push(format!("B{n}"));
        v.push(format!("C{n}"));
    }
    for n in 4..=6 {
        v.push(format!("D{n}"));
    }
    v.extend(["E6", "F4", "G2"].map(String::from));
    v.iter().map(|l| l.parse().expect("valid label")).collect()
}

fn table_types() -> Vec<CartanType> {
    table1_rows().into_iter().map(|(t, _, _)| t).collect()
}

fn iota(types: &[CartanType], iso: Isogeny, cap: usize) -> Result<SuiteResult, Failure> {
    let mut out = SuiteResult::new();
    for t in types {
        let (d, aut) = twisted_pair(t, iso)?;
        let folded = restrict_datum(&d, std::slice::from_ref(&aut))?.folded;
        let a = omega_by_barycenter(&folded, cap)?;
        let b = omega_by_cosets(&folded)?;
        let va = a.verify().err().map(|e| e.to_string());
        let vb = b.verify().err().map(|e| e.to_string());
        let agree = a.agrees_with(&b);
        let entry = json!({
            "type": t.to_string(),
            "order": a.order(),
            "constructions_agree": agree,
            "barycenter_error": va,
            "cosets_error": vb,
        });
        if !agree || va.is_some() || vb.is_some() {
            out.fail(entry.clone());
        }
        out.entries.push(entry);
    }
    Ok(out)
}

fn yu(types: &[CartanType], iso: Isogeny, cap: usize) -> Result<SuiteResult, Failure> {
    let mut out = SuiteResult::new();
    for t in types {
        let (d, aut) = twisted_pair(t, iso)?;
        let rep = verify_theorem_yu(&d, &[aut], cap)?;
        let mut entry = serde_json::to_value(&rep).expect("serializable");
        entry["type"] = t.to_string().into();
        entry["passed"] = rep.passed().into();
        if !rep.passed() {
            out.fail(entry.clone());
        }
        out.entries.push(entry);
    }
    Ok(out)
}

fn compat(types: &[CartanType], iso: Isogeny, samples: usize, seed: u64) -> Result<SuiteResult, Failure> {
    let mut out = SuiteResult::new();
    for (k, t) in types.iter().enumerate() {
        let ctx = RGroupContext::for_type(t, iso)?;
        let bridge = coinvariants_bridge(&ctx.datum, &ctx.sigma, &ctx.restriction)?;
        let mut rng = seeded_rng(seed.wrapping_add(k as u64));
        let (mut checks, mut failures, mut sphi_failures) = (0usize, 0usize, 0usize);
        for _ in 0..samples {
            let p = random_alcove_point(ctx.alcove(), &mut rng);
            let x = ParameterPoint::new(ctx.alcove(), p, "sample")?;
            for class in &ctx.omega.iota_images {
                let c = compatibility_check(&ctx.omega, class, &x)?;
                checks += 1;
                if !c.ok {
                    failures += 1;
                    out.fail(json!({ "type": t.to_string(), "compat": c }));
                }
            }
            let s = sphi_order(&x, &bridge, &ctx.omega)?;
            if !s.holds {
                sphi_failures += 1;
                out.fail(json!({ "type": t.to_string(), "point": x, "sphi": s }));
            }
        }
        let bj = bridge.to_json();
        if !(bj.homomorphism && bj.surjective && bj.order_law) {
            out.fail(json!({ "type": t.to_string(), "bridge": bj }));
        }
        out.entries.push(json!({
            "type": t.to_string(),
            "points": samples,
            "checks": checks,
            "failures": failures,
            "sphi_failures": sphi_failures,
            "bridge": bj,
        }));
    }
    Ok(out)
}

fn classify(types: &[CartanType], iso: Isogeny, seed: u64) -> Result<SuiteResult, Failure> {
    let mut out = SuiteResult::new();
    for t in types {
        let ctx = RGroupContext::for_type(t, iso)?;
        let rep = classify_stabilizers(&ctx.omega, seed)?;
        let entry = json!({
            "type": t.to_string(),
            "omega_type": rep.omega_type,
            "subgroups": rep.subgroups.len(),
            "realized_types": rep.realized_types,
            "all_realized": rep.all_realized,
        });
        if !rep.all_realized {
            out.fail(entry.clone());
        }
        out.entries.push(entry);
    }
    Ok(out)
}

pub fn run(
    suite: Suite,
    ty: Option<&CartanType>,
    iso: Isogeny,
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<Outcome, Failure> {
    let pick = |default: Vec<CartanType>| ty.map_or(default, |t| vec![t.clone()]);
    let mut results = serde_json::Map::new();
    let mut counterexample = None;
    let mut record = |name: &str, r: SuiteResult| {
        if counterexample.is_none() {
            counterexample = r.counterexample.clone();
        }
        results.insert(name.to_string(), r.to_json());
    };
    if matches!(suite, Suite::Iota | Suite::All) {
        record("iota", iota(&pick(iota_types()), iso, cap)?);
    }
    if matches!(suite, Suite::Yu | Suite::All) {
        let defaults = parse_all(&["2A2", "2A3", "2A4", "2A5", "2D4", "2D5", "3D4", "2E6"]);
        record("yu", yu(&pick(defaults), iso, cap)?);
    }
    if matches!(suite, Suite::Compat | Suite::All) {
        record("compat", compat(&pick(table_types()), iso, samples, seed)?);
    }
    if matches!(suite, Suite::Classify | Suite::All) {
        record("classify", classify(&pick(table_types()), iso, seed)?);
    }
    let name = match suite {
        Suite::Iota => "iota",
        Suite::Yu => "yu",
        Suite::Compat => "compat",
        Suite::Classify => "classify",
        Suite::All => "all",
    };
    let passed = counterexample.is_none();
    Ok(Outcome {
        mismatch: !passed,
        json: json!({
            "suite": name,
            "seed": seed,
            "samples": samples,
            "passed": passed,
            "results": results,
            "counterexample": counterexample,
        }),
    })
}
