//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use qpart::identities::{
    self, f1_dissection_support, psi_dissection_support, IdentityId, Perturbation, Side,
};
use qpart::oracle::{self, PartitionKind, PartitionSpec};
use qpart::qfactory::{Convention, Factory, Sign, SpecialTheta, ThetaSpec};
use qpart::report::Status;
use qpart::runner::{self, Plan, RunOptions};
use qpart::scanner::{self, ScanConfig, ScanStatus};
use qpart::theorems::{self, Family, InstanceParams, Relation, DEFAULT_MAX_TRUNC};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn golden_values() -> Outcome {
    let start = Instant::now();
    let cases: [(u64, u64, usize, u64); 12] = [
        (10, 5, 8, 4),
        (10, 5, 9, 6),
        (14, 7, 10, 8),
        (14, 7, 11, 10),
        (3, 2, 4, 0),
        (3, 2, 7, 0),
        (3, 2, 10, 0),
        (3, 2, 6, 1),
        (4, 3, 5, 0),
        (4, 3, 6, 2),
        (6, 2, 4, 1),
        (12, 2, 5, 2),
    ];
    for (t, s, n, want) in cases {
        let spec = PartitionSpec::new(t, s).map_err(|e| e.to_string())?;
        let counted = oracle::count_qts(spec, n);
        let product = Factory::exact(n)
            .qts_product(t, s, false)
            .map_err(|e| e.to_string())?
            .coeff(n);
        ensure(counted == want.into(), || {
            format!("oracle Q_{t}^{s}({n}) = {counted}, want {want}")
        })?;
        ensure(product == BigInt::from(want), || {
            format!("product Q_{t}^{s}({n}) = {product}, want {want}")
        })?;
    }
    let b6 = oracle::count_b_nondiv(4, 6).map_err(|e| e.to_string())?;
    ensure(b6 == 5u32.into(), || format!("b_6(4) = {b6}"))?;
    let p5 = oracle::count_p(5);
    ensure(p5 == 7u32.into(), || format!("p(5) = {p5}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("14 values in {:?}", start.elapsed()))
}

fn is_dissection(id: &IdentityId) -> bool {
    matches!(
        id,
        IdentityId::L23F1Dissection { .. } | IdentityId::L24PsiDissection { .. }
    )
}

fn run_identities(ids: &[(IdentityId, usize)]) -> Result<(), String> {
    for &(id, trunc) in ids {
        let r = identities::verify(id, trunc).map_err(|e| e.to_string())?;
        ensure(r.passed(), || {
            format!("{} at {trunc}: {:?}", r.id, r.first_mismatch)
        })?;
    }
    Ok(())
}

fn identity_catalog() -> Outcome {
    let start = Instant::now();
    let ids: Vec<_> = IdentityId::catalog()
        .into_iter()
        .filter(|(id, _)| !is_dissection(id))
        .collect();
    let expect = |id: IdentityId| match id {
        IdentityId::L25Septic => 200,
        IdentityId::L26Quintic => 150,
        IdentityId::L27Cubic
        | IdentityId::L28FQq2Mod2
        | IdentityId::CT7 { .. }
        | IdentityId::CV7 { .. } => 200,
        _ => 300,
    };
    for &(id, trunc) in &ids {
        ensure(trunc == expect(id), || format!("{id} scheduled at {trunc}"))?;
    }
    run_identities(&ids)?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} identities in {:?}", ids.len(), start.elapsed()))
}

fn dissections() -> Outcome {
    let start = Instant::now();
    let mut ids = Vec::new();
    for p in [5, 7, 11, 13] {
        let support = f1_dissection_support(p).map_err(|e| e.to_string())?;
        ensure(support.collision().is_none(), || {
            format!("f_1 support collides for p={p}")
        })?;
        ids.push((IdentityId::L23F1Dissection { p }, 300));
    }
    for p in [3, 5, 7] {
        let support = psi_dissection_support(p).map_err(|e| e.to_string())?;
        ensure(support.collision().is_none(), || {
            format!("psi support collides for p={p}")
        })?;
        ids.push((IdentityId::L24PsiDissection { p }, 300));
    }
    run_identities(&ids)?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{} dissections in {:?}",
        ids.len(),
        start.elapsed()
    ))
}

fn triple_product() -> Outcome {
    let q = Factory::exact(300);
    let mut count = 0;
    for x in 0..=8 {
        for y in 0..=8 {
            if x + y == 0 {
                continue;
            }
            for sa in [Sign::Plus, Sign::Minus] {
                for sb in [Sign::Plus, Sign::Minus] {
                    let spec = ThetaSpec::new(sa, x, sb, y).map_err(|e| e.to_string())?;
                    let cmp = q
                        .theta_sum(spec)
                        .equal_upto(&q.theta_product(spec), 300)
                        .map_err(|e| e.to_string())?;
                    ensure(cmp.is_equal(), || format!("{spec}: {:?}", cmp.mismatch()))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} theta specs to q^300"))
}

fn oracle_series() -> Outcome {
    let q = Factory::exact(300);
    let mut compared = 0;
    for t in 2..=12u64 {
        for s in 1..t {
            let series = q.qts_series(t, s).map_err(|e| e.to_string())?;
            let squared = q.qts_product(t, s, true).map_err(|e| e.to_string())?;
            let cmp = series
                .equal_upto(&squared, 300)
                .map_err(|e| e.to_string())?;
            ensure(cmp.is_equal(), || {
                format!("series vs squared ({t},{s}): {:?}", cmp.mismatch())
            })?;
            let spec = PartitionSpec::new(t, s).map_err(|e| e.to_string())?;
            if spec.is_self_paired() {
                continue;
            }
            for (n, c) in oracle::table_qts(spec, 300).into_iter().enumerate() {
                ensure(series.coeff(n) == BigInt::from(c.clone()), || {
                    format!(
                        "oracle vs series ({t},{s}) at {n}: {c} vs {}",
                        series.coeff(n)
                    )
                })?;
            }
            compared += 1;
        }
    }
    Ok(format!("66 series/squared pairs, {compared} oracle pairs"))
}

fn theorem_plan() -> Result<Plan, String> {
    let mut plan = Plan::default();
    let err = |e: qpart::Error| e.to_string();
    plan.bases
        .push((Family::T36b, InstanceParams::default(), 500));
    for (family, alpha, p) in [
        (Family::T31, 1, 5),
        (Family::T31, 2, 7),
        (Family::T32, 1, 7),
        (Family::T32, 3, 5),
    ] {
        plan.add_theorem(family, InstanceParams::alpha_p(alpha, p, 0), None)
            .map_err(err)?;
    }
    for alpha in [2, 3] {
        plan.add_theorem(Family::T33, InstanceParams::alpha(alpha), None)
            .map_err(err)?;
        plan.add_theorem(Family::T34, InstanceParams::alpha(alpha), None)
            .map_err(err)?;
    }
    plan.add_theorem(Family::T35a, InstanceParams::default(), None)
        .map_err(err)?;
    plan.add_theorem(Family::T35b, InstanceParams::default(), Some(300))
        .map_err(err)?;
    for family in [Family::T36a, Family::T36b] {
        plan.add_theorem(family, InstanceParams::prime(13, 0), Some(10))
            .map_err(err)?;
    }
    for family in [Family::T37a, Family::T37b, Family::T38, Family::T39] {
        plan.add_theorem(family, InstanceParams::default(), Some(300))
            .map_err(err)?;
    }
    Ok(plan)
}

fn theorem_suite() -> Outcome {
    let start = Instant::now();
    let plan = theorem_plan()?;
    let reports = runner::run_plan(&plan, RunOptions::default()).map_err(|e| e.to_string())?;
    ensure(reports.len() == plan.len(), || "report count".into())?;
    for r in &reports {
        ensure(r.convention.is_some(), || {
            format!("{} has no convention", r.id)
        })?;
        ensure(matches!(r.status, Status::Pass | Status::Divergent), || {
            format!(
                "{} [{:?}] {}: {:?}",
                r.id, r.convention, r.status, r.first_mismatch
            )
        })?;
    }
    let mut unsquared = 0;
    for (claim, _) in &plan.claims {
        if !claim.spec.is_self_paired() {
            ensure(claim.gating, || format!("{} not gating", claim.id()))?;
            continue;
        }
        let find = |c: Convention| {
            reports
                .iter()
                .find(|r| r.id == claim.id() && r.convention == Some(c))
        };
        let series = find(Convention::Series)
            .ok_or_else(|| format!("{} lacks series report", claim.id()))?;
        ensure(series.passed(), || {
            format!("{} fails under series convention", claim.id())
        })?;
        ensure(find(Convention::Unsquared).is_some(), || {
            format!("{} lacks unsquared report", claim.id())
        })?;
        unsquared += usize::from(claim.convention == Convention::Unsquared);
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    let divergent = reports
        .iter()
        .filter(|r| r.status == Status::Divergent)
        .count();
    Ok(format!(
        "{} reports, {unsquared} unsquared recorded ({divergent} divergent) in {:?}",
        reports.len(),
        start.elapsed()
    ))
}

fn euler() -> Outcome {
    let pd = oracle::table_pd(500);
    let po = oracle::table_po(500);
    ensure(pd == po, || "p_d and p_o tables differ".into())?;
    let quotient = Factory::exact(500)
        .eta_quotient(&[(2, 1), (1, -1)])
        .map_err(|e| e.to_string())?;
    for (n, c) in pd.iter().enumerate() {
        ensure(quotient.coeff(n) == BigInt::from(c.clone()), || {
            format!("f_2/f_1 at {n}")
        })?;
    }
    let r = identities::verify(IdentityId::EulerPdPo, 500).map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        format!("product forms: {:?}", r.first_mismatch)
    })?;
    Ok("n <= 500".into())
}

fn scanner_calibration() -> Outcome {
    let err = |e: qpart::Error| e.to_string();
    let scans: [(u64, u64, u64, Vec<u64>); 5] = [
        (3, 2, 3, vec![]),
        (4, 3, 2, vec![2]),
        (4, 3, 2, vec![]),
        (12, 2, 6, vec![2]),
        (14, 7, 7, vec![2]),
    ];
    let mut claims = Vec::new();
    for family in [Family::T35a, Family::T37a, Family::T39] {
        claims.extend(theorems::instantiate(family, &InstanceParams::default()).map_err(err)?);
    }
    claims.extend(theorems::instantiate(Family::T34, &InstanceParams::alpha(2)).map_err(err)?);
    let mut found = BTreeSet::new();
    for (t, s, a_max, moduli) in scans {
        let spec = PartitionSpec::new(t, s).map_err(err)?;
        let exact = moduli.is_empty();
        let config = ScanConfig::new(spec, Convention::Series, moduli, a_max, 50).map_err(err)?;
        let rows = scanner::scan(&config, DEFAULT_MAX_TRUNC).map_err(err)?;
        for claim in claims
            .iter()
            .filter(|c| c.spec == spec && c.progression.a <= a_max)
        {
            let wanted = match claim.relation {
                Relation::ZeroMod(m) if !exact => Some(Some(m)),
                Relation::ExactZero if exact => Some(None),
                _ => None,
            };
            let Some(m) = wanted else { continue };
            let hit = rows
                .iter()
                .find(|r| r.key() == (claim.progression.a, claim.progression.b, m));
            ensure(hit.is_some(), || {
                format!("scan ({t},{s}) missed {}", claim.statement())
            })?;
            if m.is_none() {
                ensure(hit.unwrap().status == ScanStatus::IdenticallyZero, || {
                    claim.statement()
                })?;
            }
            found.insert(claim.id());
        }
    }
    ensure(found.len() == claims.len(), || {
        format!("only {} of {} claims scanned", found.len(), claims.len())
    })?;
    Ok(format!("{} claims rediscovered", found.len()))
}

fn negative_controls() -> Outcome {
    let err = |e: qpart::Error| e.to_string();
    let perturbations = [
        (IdentityId::L21FQq2, Side::Lhs, 3),
        (IdentityId::L27Cubic, Side::Rhs, 57),
        (IdentityId::Special(SpecialTheta::Phi), Side::Lhs, 0),
        (IdentityId::L23F1Dissection { p: 5 }, Side::Rhs, 123),
        (IdentityId::CT7 { r: 1, m: 1 }, Side::Lhs, 10),
        (IdentityId::CV7 { r: 2, m: 1 }, Side::Rhs, 199),
    ];
    for (id, side, index) in perturbations {
        let r = identities::verify_perturbed(id, 200, Perturbation { side, index }).map_err(err)?;
        let at = r.first_mismatch.as_ref().map(|m| m.n);
        ensure(r.status == Status::Fail && at == Some(index as u64), || {
            format!("{id} perturbed at {index}: {} at {at:?}", r.status)
        })?;
    }
    let mut off = theorems::instantiate(Family::T31, &InstanceParams::alpha_p(1, 5, 0))
        .map_err(err)?[0]
        .clone();
    off.progression.b = 3;
    let r = theorems::verify_claim(&off, 50, DEFAULT_MAX_TRUNC).map_err(err)?;
    ensure(r.status == Status::Fail, || {
        "Q_2^1(25n+3) should not vanish mod 2".into()
    })?;

    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let code = qpart::cli::run(
        [
            "qpart",
            "verify",
            "theorem",
            "T35b",
            "--as-printed",
            "--nmax",
            "50",
        ],
        &mut out,
        &mut errs,
    );
    let text = String::from_utf8_lossy(&out);
    ensure(code == 1, || format!("as-printed exit code {code}"))?;
    ensure(text.contains("first mismatch n=1 lhs=0 rhs=1"), || {
        format!("no counterexample in {text}")
    })?;
    let po1 = PartitionKind::Odd.count(1).map_err(err)?;
    ensure(po1 == 1u32.into(), || "p_o(1)".into())?;
    Ok("6 perturbations, 1 off-progression claim, T35b as printed exits 1 (Q_3^2(2) = 0 != p_o(1) = 1)".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden values", golden_values),
        ("identity catalog", identity_catalog),
        ("p-dissections", dissections),
        ("Jacobi triple product", triple_product),
        ("oracle-series equivalence", oracle_series),
        ("theorem suite", theorem_suite),
        ("Euler p_d = p_o", euler),
        ("scanner calibration", scanner_calibration),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
