//! Dispatch from a validated config to the library operations.

use blocklie::block::{
    block_identity_checks, laurent_realization_check, virasoro_embedding_check, BlockAlgebra,
};
use blocklie::highest_weight::{
    classify_quasifinite, criteria_cross_check, singular_vector_solve, Comparison, QuasifiniteVerdict,
    RecurrenceCertificate, SingularCandidate,
};
use blocklie::intermediate::{boundedness_report, module_axiom_failures};
use blocklie::lie::{grid_identity_check, membership, subalgebra_closure, Identity, PolyBracketRule, Verdict, Window};
use blocklie::novikov::{block_sz_reindex_check, theorem22_probe, PolyProductRule, ProductRule, WittNovikovParams};
use blocklie::scalar::Rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{GridSpec, JobConfig, JobSpec, Structure};
use crate::report::{verdict_json, Outcome, Report};

fn grid_domain(g: &GridSpec) -> Value {
    json!({ "grid": { "start": g.start, "size": g.size } })
}

fn window_domain(w: &Window) -> Value {
    json!({ "window": { "grade_min": w.grade_min, "grade_max": w.grade_max, "level_max": w.level_max } })
}

fn strings(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| json!(x.to_string())).collect())
}

fn certificate_json(c: Option<&RecurrenceCertificate>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "annihilator": c.annihilator.to_string(),
            "coefficients": strings(c.annihilator.coeffs()),
            "verified_horizon": c.verified_horizon,
        }),
    }
}

fn kernel_json(k: &[SingularCandidate]) -> Value {
    Value::Array(
        k.iter()
            .map(|c| {
                json!({
                    "coefficients": strings(&c.coefficients),
                    "element": c.element().to_string(),
                    "verified_horizon": c.verified_horizon,
                })
            })
            .collect(),
    )
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Positive
    } else {
        Outcome::Negative
    }
}

fn witt(p: &blocklie::Poly, mu: &blocklie::Poly, theta: i64) -> blocklie::Result<PolyProductRule> {
    PolyProductRule::witt(&WittNovikovParams {
        p: p.clone(),
        mu: mu.clone(),
        theta,
    })
}

pub fn run_job(config: &JobConfig) -> blocklie::Result<Report> {
    let job = config.echo().clone();
    let (ok, verdicts, results) = match &config.spec {
        JobSpec::Axioms {
            structure,
            p,
            q,
            mu,
            theta,
            grid,
        } => {
            let g = grid.grid();
            let named: Vec<(&str, Verdict)> = match structure {
                Structure::Novikov => {
                    let nv = blocklie::novikov::novikov_axiom_check(&witt(p, mu, *theta)?, &g)?;
                    vec![
                        ("left_symmetry", nv.left_symmetry),
                        ("right_commutativity", nv.right_commutativity),
                    ]
                }
                Structure::Lie => {
                    let q = q.as_ref().expect("validated");
                    let rule = PolyBracketRule::block_pqmt(p, q, mu, *theta)?;
                    vec![
                        ("antisymmetry", grid_identity_check(&rule, Identity::Antisymmetry, &g)?),
                        ("jacobi", grid_identity_check(&rule, Identity::Jacobi, &g)?),
                    ]
                }
            };
            let ok = named.iter().all(|(_, v)| v.holds());
            let verdicts = named.iter().map(|(n, v)| verdict_json(n, v, grid_domain(grid))).collect();
            (ok, verdicts, json!({}))
        }
        JobSpec::Affinize {
            p,
            q,
            mu,
            theta,
            grid,
            mutations,
            seed,
            s,
            window,
        } => {
            let g = grid.grid();
            let base = witt(p, mu, *theta)?;
            let probe = theorem22_probe(&base, q, &g, &g)?;
            let mut verdicts = vec![
                verdict_json("left_symmetry", &probe.novikov.left_symmetry, grid_domain(grid)),
                verdict_json("right_commutativity", &probe.novikov.right_commutativity, grid_domain(grid)),
                verdict_json("affinized_jacobi", &probe.jacobi, grid_domain(grid)),
            ];
            let mut ok = probe.novikov.holds() && probe.jacobi.holds();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let rules: Vec<PolyProductRule> = (0..*mutations).map(|_| base.random_mutation(&mut rng)).collect();
            let probes = rules
                .par_iter()
                .map(|m| theorem22_probe(m, q, &g, &g).map(|pr| (m.name(), pr)))
                .collect::<blocklie::Result<Vec<_>>>()?;
            let agreements = probes.iter().filter(|(_, pr)| pr.equivalence_observed).count();
            ok &= agreements == probes.len();
            let mutation_rows: Vec<Value> = probes
                .iter()
                .map(|(name, pr)| {
                    json!({
                        "rule": name,
                        "novikov": pr.novikov.holds(),
                        "affinized_jacobi": pr.jacobi.name(),
                        "agree": pr.equivalence_observed,
                    })
                })
                .collect();
            if let Some(s) = s {
                let v = block_sz_reindex_check(s, window)?;
                ok &= v.holds();
                verdicts.push(verdict_json("block_sz_reindex", &v, window_domain(window)));
            }
            let results = json!({
                "rule": base.name(),
                "equivalence_observed": probe.equivalence_observed,
                "mutations": mutation_rows,
                "mutation_agreements": agreements,
            });
            (ok, verdicts, results)
        }
        JobSpec::Blockcheck { params, grid, window } => {
            let alg = BlockAlgebra::new(params.clone())?;
            let mut verdicts = Vec::new();
            let mut ok = true;
            for (name, v) in block_identity_checks(&alg, &grid.grid())? {
                ok &= v.holds();
                verdicts.push(verdict_json(&name, &v, grid_domain(grid)));
            }
            for (name, v) in [
                ("virasoro_embedding", virasoro_embedding_check(params, window)?),
                ("laurent_realization", laurent_realization_check(params, window)?),
            ] {
                ok &= v.holds();
                verdicts.push(verdict_json(name, &v, window_domain(window)));
            }
            (ok, verdicts, json!({ "cocycle": alg.cocycle().to_string() }))
        }
        JobSpec::Classify { params, weight, horizon } => {
            let c = classify_quasifinite(&weight.weight, params, *horizon)?;
            let ok = c.verdict == QuasifiniteVerdict::Quasifinite;
            let verdicts = vec![json!({
                "name": "quasifinite",
                "verdict": c.verdict.name(),
                "domain": { "horizon": c.horizon },
                "witness": Value::Null,
            })];
            let results = json!({
                "series": strings(&c.series.coeffs),
                "certificate": certificate_json(c.certificate.as_ref()),
                "generator": weight.qp.as_ref().map_or(Value::Null, |q| json!(q.to_string())),
                "generator_annihilator": c.generator_annihilator.as_ref().map_or(Value::Null, |h| json!(h.to_string())),
                "certificate_matches_generator": c.certificate_matches_generator.map_or(Value::Null, Value::Bool),
                "singular_indices": weight.singular_indices,
            });
            (ok, verdicts, results)
        }
        JobSpec::Singular {
            params,
            weight,
            degree,
            conditions,
        } => {
            let kernel = singular_vector_solve(&weight.weight, params, *degree, *conditions)?;
            let ok = !kernel.is_empty();
            let verdicts = vec![json!({
                "name": "singular_vector",
                "verdict": if ok { "found" } else { "none_up_to_degree" },
                "domain": { "degree": degree, "conditions": conditions },
                "witness": Value::Null,
            })];
            (ok, verdicts, json!({ "kernel": kernel_json(&kernel) }))
        }
        JobSpec::Crosscheck {
            params,
            weight,
            degree,
            conditions,
        } => {
            let x = criteria_cross_check(&weight.weight, params, *degree, *conditions)?;
            let ok = x.delta_route && x.kernel_route && x.comparison == Comparison::Match;
            let domain = json!({ "degree": degree, "conditions": conditions, "horizon": degree + conditions });
            let verdicts = vec![json!({
                "name": "criteria_agree",
                "verdict": x.comparison.name(),
                "domain": domain,
                "witness": Value::Null,
            })];
            let results = json!({
                "delta_route": x.delta_route,
                "kernel_route": x.kernel_route,
                "certificate": certificate_json(x.certificate.as_ref()),
                "annihilator_vector": x.annihilator_vector.as_deref().map_or(Value::Null, strings),
                "kernel": kernel_json(&x.kernel),
            });
            (ok, verdicts, results)
        }
        JobSpec::Closure {
            params,
            generators,
            members,
            window,
        } => {
            let alg = BlockAlgebra::new(params.clone())?;
            let closure = subalgebra_closure(&alg, generators, *window)?;
            let mut graded = serde_json::Map::new();
            for (g, basis) in closure.graded_basis() {
                graded.insert(g.to_string(), Value::Array(basis.iter().map(|e| json!(e.to_string())).collect()));
            }
            let mut ok = true;
            let mut rows = Vec::new();
            for m in members {
                let is_member = membership(m, &closure)?;
                ok &= is_member;
                rows.push(json!({ "element": m.to_string(), "member": is_member }));
            }
            let results = json!({
                "dim": closure.dim(),
                "graded_basis": graded,
                "membership": rows,
            });
            (ok, vec![], results)
        }
        JobSpec::Modcheck {
            params,
            kind,
            weights,
            central,
            window,
        } => {
            let failures = module_axiom_failures(kind, params, window, weights.0..=weights.1, central)?;
            let ok = failures.is_empty();
            let witness = failures.first().map_or(Value::Null, |f| {
                json!({
                    "point": {
                        "alpha": f.alpha.to_string(),
                        "i": f.i.to_string(),
                        "beta": f.beta.to_string(),
                        "j": f.j.to_string(),
                        "mu": f.mu.to_string(),
                    },
                    "residual": f.residual.to_string(),
                })
            });
            let mut domain = window_domain(window);
            domain["weights"] = json!([weights.0, weights.1]);
            let verdicts = vec![json!({
                "name": "module_axiom",
                "verdict": if ok { "holds_on_window" } else { "fails" },
                "domain": domain,
                "witness": witness,
            })];
            let b = boundedness_report(kind);
            let results = json!({
                "failure_count": failures.len(),
                "weight_space_bound": b.bound,
            });
            (ok, verdicts, results)
        }
    };
    Ok(Report::new(job, outcome(ok), verdicts, results))
}
