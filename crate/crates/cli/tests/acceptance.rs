//! Acceptance criteria 1-10. Each criterion prints one `PASS`/`FAIL` line;
//! the test fails if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use blocklie::block::{cocycle_jacobi_check, laurent_realization_check, virasoro_embedding_check, BlockAlgebra, BlockParams};
use blocklie::highest_weight::{
    classify_quasifinite, criteria_cross_check, labels_from_quasipolynomial, qp_annihilator, singular_vector_solve,
    Comparison, QuasiPolynomial, QuasifiniteVerdict, Univariate, Weight,
};
use blocklie::intermediate::{module_axiom_check, module_axiom_failures, IntermediateKind};
use blocklie::lie::{adjoint_chain, grid_identity_check, BasisIndex, Element, Grid, Identity, PolyBracketRule, Window};
use blocklie::novikov::{block_sz_reindex_check, theorem22_probe, PolyProductRule, WittNovikovParams};
use blocklie::scalar::{rat, ratio, Poly, Rational, SymbolTable};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn draw(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let r = ratio(rng.gen_range(-12..=12), rng.gen_range(1..=8));
        if !nonzero || !r.is_zero() {
            return r;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grid = Grid::integers(-1, 3);
    for n in 0..25 {
        let (p, q, mu) = (draw(&mut rng, true), draw(&mut rng, true), draw(&mut rng, false));
        let theta = rng.gen_range(-3..=3);
        let rule = PolyBracketRule::block_pqmt(&Poly::constant(p.clone()), &Poly::constant(q.clone()), &Poly::constant(mu.clone()), theta)
            .map_err(e)?;
        let v = grid_identity_check(&rule, Identity::Jacobi, &grid).map_err(e)?;
        ensure(v == blocklie::lie::Verdict::HoldsUniversally, || {
            format!("draw {n} (p={p}, q={q}, mu={mu}, theta={theta}): {}", v.name())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("25 draws hold_universally in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let base = PolyProductRule::witt(&WittNovikovParams {
        p: Poly::constant(ratio(3, 2)),
        mu: Poly::constant(ratio(-2, 3)),
        theta: 1,
    })
    .map_err(e)?;
    let grid = Grid::integers(-1, 3);
    let q = Poly::constant(ratio(5, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let base_probe = theorem22_probe(&base, &q, &grid, &grid).map_err(e)?;
    ensure(base_probe.novikov.holds() && base_probe.jacobi.holds(), || "base rule".into())?;
    let (mut agree, mut novikov) = (0, 0);
    for _ in 0..50 {
        let m = base.random_mutation(&mut rng);
        let pr = theorem22_probe(&m, &q, &grid, &grid).map_err(e)?;
        agree += pr.equivalence_observed as usize;
        novikov += pr.novikov.holds() as usize;
    }
    ensure(agree == 50, || format!("{agree}/50 agree"))?;
    Ok(format!("50/50 agree ({novikov} mutations still Novikov)"))
}

fn criterion_3() -> Outcome {
    let w = Window::new(-3, 3, 3).map_err(e)?;
    for s in [rat(1), rat(2), ratio(5, 2)] {
        let v = block_sz_reindex_check(&s, &w).map_err(e)?;
        ensure(v.holds(), || format!("s={s}: {v:?}"))?;
    }
    Ok("s in {1, 2, 5/2} hold on grades [-3,3], levels <= 3".into())
}

fn criterion_4() -> Outcome {
    let t = SymbolTable::new(&["q"]).map_err(e)?;
    let qsym = BlockParams::new(Poly::int(1), Poly::var(&t, "q").map_err(e)?).map_err(e)?;
    let v = cocycle_jacobi_check(&BlockAlgebra::new(qsym).map_err(e)?, &Grid::integers(-2, 5)).map_err(e)?;
    ensure(v.holds(), || format!("cocycle: {v:?}"))?;
    let w = Window::new(-4, 4, 3).map_err(e)?;
    for (p, q) in [(rat(3), rat(2)), (rat(1), rat(1)), (rat(-2), ratio(1, 2))] {
        let params = BlockParams::rational(p.clone(), q.clone()).map_err(e)?;
        let v = virasoro_embedding_check(&params, &w).map_err(e)?;
        ensure(v.holds(), || format!("virasoro ({p},{q}): {v:?}"))?;
        let v = laurent_realization_check(&params, &w).map_err(e)?;
        ensure(v.holds(), || format!("laurent ({p},{q}): {v:?}"))?;
    }
    Ok("cocycle (q symbolic), Virasoro and Laurent checks hold".into())
}

fn criterion_5() -> Outcome {
    let t = SymbolTable::new(&["q"]).map_err(e)?;
    let q = Poly::var(&t, "q").map_err(e)?;
    let alg = BlockAlgebra::new(BlockParams::new(Poly::int(2), q.clone()).map_err(e)?).map_err(e)?;
    let mut cases = 0;
    for mu0 in [-1i64, -2, -3] {
        let (z1, z2) = (Element::l(1 - mu0, 0), Element::l(-mu0, 0));
        for l1 in 1..=5i64 {
            for l2 in 1..=5i64 {
                let first: i64 = (1..=l1).map(|i| -(i - 1) * mu0 + i - 2).product();
                let second: i64 = (1..l2).map(|j| -(l1 + j - 1) * mu0 + l1).product();
                let grade = l1 * (1 - mu0) - l2 * mu0;
                let expected = Element::term(BasisIndex::l(grade, 0), q.pow((l1 + l2 - 1) as u32).scale(&rat(first * second)));
                let got = adjoint_chain(&alg, &z1, &z2, l1 as u32, l2 as u32);
                ensure(got == expected, || format!("mu0={mu0} l1={l1} l2={l2}: {got} != {expected}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases equal the closed form"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let params = BlockParams::rational(ratio(3, 2), ratio(1, 3)).map_err(e)?;
    let mut n = 0;
    while n < 10 {
        let terms: Vec<(Vec<Rational>, Rational)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let deg = rng.gen_range(0..=2);
                let f = (0..=deg).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
                (f, ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
            })
            .collect();
        let qp = QuasiPolynomial::new(terms);
        if qp.is_zero() {
            continue;
        }
        let h = qp_annihilator(&qp).map_err(e)?;
        let horizon = 2 * h.degree() + 4;
        let (w, _) = labels_from_quasipolynomial(&qp, &params, horizon).map_err(e)?;
        let c = classify_quasifinite(&w, &params, horizon).map_err(e)?;
        ensure(c.verdict == QuasifiniteVerdict::Quasifinite, || format!("{qp}: {}", c.verdict.name()))?;
        let cert = c.certificate.expect("quasifinite carries a certificate");
        ensure(cert.annihilator == h, || format!("{qp}: {} != {h}", cert.annihilator))?;
        n += 1;
    }
    Ok("10 random quasipolynomials round-trip to their annihilators".into())
}

fn criterion_7() -> Outcome {
    let params = BlockParams::ints(2, 1).map_err(e)?;
    let factorial: Vec<Rational> = (0..=12)
        .scan(Rational::one(), |acc, k| {
            let v = acc.clone();
            *acc *= rat(k + 1);
            Some(v)
        })
        .collect();
    let fib = |n: usize| {
        let (mut a, mut b) = (num_bigint::BigInt::zero(), num_bigint::BigInt::one());
        for _ in 0..n {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        Rational::from_integer(a)
    };
    let fib_sq: Vec<Rational> = (0..=12).map(|k| fib(k * k)).collect();
    for (name, labels) in [("k!", factorial), ("F(k^2)", fib_sq)] {
        let c = classify_quasifinite(&Weight::explicit(labels), &params, 12).map_err(e)?;
        ensure(c.verdict == QuasifiniteVerdict::NotQuasifiniteUpToHorizon, || format!("{name}: {}", c.verdict.name()))?;
    }
    Ok("k! and F(k^2) are not_quasifinite_up_to_horizon at K=12".into())
}

fn archive_dir() -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(name: &str, config: &str, extra: &[&str]) -> Result<(i32, String), String> {
    let dir = archive_dir();
    let cfg = dir.join(format!("{name}.toml"));
    let out = dir.join(format!("{name}.json"));
    std::fs::write(&cfg, config).map_err(e)?;
    let o = Command::new(env!("CARGO_BIN_EXE_blocklie"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .map_err(e)?;
    let code = o.status.code().unwrap_or(-1);
    ensure(code < 2, || format!("{name}: exit {code}: {}", String::from_utf8_lossy(&o.stderr)))?;
    Ok((code, std::fs::read_to_string(&out).map_err(e)?))
}

fn criterion_8() -> Outcome {
    let p0 = BlockParams::ints(0, 1).map_err(e)?;
    for (c, b) in [(rat(1), rat(2)), (rat(3), rat(-1)), (ratio(1, 2), ratio(1, 3))] {
        let qp = QuasiPolynomial::new(vec![(vec![c.clone()], b.clone())]);
        let (w, _) = labels_from_quasipolynomial(&qp, &p0, 7).map_err(e)?;
        let kernel = singular_vector_solve(&w, &p0, 1, 6).map_err(e)?;
        ensure(kernel.len() == 1 && kernel[0].coefficients == vec![-b.clone(), rat(1)], || {
            format!("(C,b)=({c},{b}): kernel {kernel:?}")
        })?;
        ensure(qp_annihilator(&qp).map_err(e)? == Univariate::linear(&b), || format!("annihilator for b={b}"))?;
        let x = criteria_cross_check(&w, &p0, 1, 6).map_err(e)?;
        ensure(x.delta_route && x.kernel_route && x.comparison == Comparison::Match, || {
            format!("(C,b)=({c},{b}): {}", x.comparison.name())
        })?;
    }
    let mut archived = Vec::new();
    for p in ["2", "1/2"] {
        let name = format!("crosscheck_p{}", p.replace('/', "_"));
        let cfg = format!("job = \"crosscheck\"\np = \"{p}\"\nq = 1\ndegree = 1\nconditions = 6\n[weight]\nqp = [{{ poly = [1], base = 2 }}]\n");
        let (_, report) = run_cli(&name, &cfg, &["--format", "machine"])?;
        let v: serde_json::Value = serde_json::from_str(&report).map_err(e)?;
        archived.push(format!("p={p}: {}", v["verdicts"][0]["verdict"].as_str().unwrap_or("?")));
    }
    Ok(format!(
        "p=0 kernels equal (-b,1) and match; archived {} in {}",
        archived.join(", "),
        archive_dir().display()
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = Window::new(-3, 3, 2).map_err(e)?;
    for n in 0..20 {
        let params = BlockParams::rational(draw(&mut rng, false), draw(&mut rng, true)).map_err(e)?;
        let (a, b) = (draw(&mut rng, false), draw(&mut rng, false));
        for kind in [
            IntermediateKind::Aab { a: a.clone(), b: b.clone() },
            IntermediateKind::Aa { a: a.clone() },
            IntermediateKind::Ba { a: a.clone() },
        ] {
            let v = module_axiom_check(&kind, &params, &w, -6..=6).map_err(e)?;
            ensure(v.holds(), || format!("draw {n} {}: {v:?}", kind.name()))?;
        }
    }
    // With c acting as 1 the axiom must fail exactly where the cocycle is
    // nonzero: alpha + beta = 0, i = j = 0, alpha^3 != alpha, every mu.
    let params = BlockParams::ints(3, 1).map_err(e)?;
    let kind = IntermediateKind::Aab { a: ratio(1, 2), b: rat(0) };
    let got: Vec<(i64, i64, i64, i64, i64)> = module_axiom_failures(&kind, &params, &w, -6..=6, &rat(1))
        .map_err(e)?
        .iter()
        .map(|f| (f.alpha, f.i, f.beta, f.j, f.mu))
        .collect();
    let mut expected = Vec::new();
    for alpha in -3i64..=3 {
        if alpha.pow(3) != alpha {
            for mu in -6..=6 {
                expected.push((alpha, 0, -alpha, 0, mu));
            }
        }
    }
    ensure(got == expected, || format!("{} failures, expected {}", got.len(), expected.len()))?;
    Ok(format!("60 module checks hold; central perturbation fails at exactly {} points", got.len()))
}

fn criterion_10() -> Outcome {
    let configs = [
        ("axioms", "job = \"axioms\"\np = \"3/2\"\nmu = -2\ntheta = 1\n"),
        ("affinize", "job = \"affinize\"\np = 2\nq = 3\nmu = 1\ntheta = 2\nmutations = 8\nseed = 10\ns = 2\n"),
        ("blockcheck", "job = \"blockcheck\"\np = 3\nq = 2\n"),
        ("classify", "job = \"classify\"\np = 2\nq = 1\nhorizon = 10\n[weight]\nqp = [{ poly = [2], base = 1 }]\n"),
        ("singular", "job = \"singular\"\np = 0\nq = 1\n[weight]\nqp = [{ poly = [1], base = 2 }]\n"),
        ("crosscheck", "job = \"crosscheck\"\np = 0\nq = 1\n[weight]\nqp = [{ poly = [3], base = -1 }]\n"),
        ("closure", "job = \"closure\"\np = 1\nq = 1\ngenerators = [\"L[1,0]\", \"L[2,0]\"]\nmembers = [\"L[4,0]\"]\n[window]\ngrade_min = 0\ngrade_max = 6\nlevel_max = 1\n"),
        ("modcheck", "job = \"modcheck\"\np = 3\nq = 1\n[module]\nkind = \"Ba\"\na = 2\ncentral = 1\n"),
    ];
    for (name, cfg) in configs {
        let (c1, r1) = run_cli(&format!("det_{name}_1"), cfg, &["--format", "machine", "--threads", "1"])?;
        let (c2, r2) = run_cli(&format!("det_{name}_2"), cfg, &["--format", "machine", "--threads", "3"])?;
        ensure(c1 == c2 && r1 == r2, || format!("{name}: reports differ"))?;
    }
    Ok("8 job kinds give byte-identical reports across runs and thread counts".into())
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(msg) => {
                println!("FAIL criterion {n}: {msg}");
                failed.push(n);
            }
        }
    }
    println!("acceptance run took {:.1}s", start.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
