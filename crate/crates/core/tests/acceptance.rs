mod common;

use std::fs;
use std::panic;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cogsheaf::bhcat::{build_bh_category, check_category_laws};
use cogsheaf::develop::{develop, DevCertificate, E1, E2, E3};
use cogsheaf::exactlin::{Field, Matrix};
use cogsheaf::fixtures::{self, Fixture};
use cogsheaf::format::{certificate_file, to_json};
use cogsheaf::random::{random_complex, random_developable, random_digraph, random_digraph_sheaf, random_sheaf};
use cogsheaf::scwol::{complex_to_scwol, validate_scwol, ArrowId, ObjectId};
use cogsheaf::sheaf::{check_dev_properties, friedman_to_scwol_sheaf, sheaf_from_morphism, validate_sheaf, DevProperty};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::functor_oracle;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok((out, took))
}

fn tree_collapses(cert: &DevCertificate) -> bool {
    cert.tree.iter().all(|a| cert.arrow_images[a.0].is_identity())
}

fn forward() -> Outcome {
    let mut notes = Vec::new();
    for (fx, rank) in [(fixtures::fix_triv(), 2), (fixtures::fix_seg(), 12)] {
        let m = fx.morphism.expect("fixture morphism");
        let ((sheaf, warnings, report), took) = timed(Duration::from_secs(1), fx.name, || {
            let (sheaf, warnings) = sheaf_from_morphism(&m, Field::Rational).expect("valid morphism");
            let report = check_dev_properties(&sheaf).expect("valid sheaf");
            (sheaf, warnings, report)
        })?;
        ensure(warnings.passed(), || format!("{}: {warnings}", fx.name))?;
        ensure(validate_sheaf(&sheaf).passed(), || format!("{}: sheaf invalid", fx.name))?;
        ensure(report.verdict(), || format!("{}: {report}", fx.name))?;
        ensure(report.constant_rank.dimension == Some(rank), || format!("{}: rank {:?}", fx.name, report.constant_rank.dimension))?;
        notes.push(format!("{} rank {rank} in {took:?}", fx.name));
    }
    Ok(notes.join(", "))
}

fn reverse() -> Outcome {
    let mut notes = Vec::new();
    for fx in [fixtures::fix_seg(), fixtures::fix_tri(), fixtures::fix_circ()] {
        let (cert, took) = timed(Duration::from_secs(5), fx.name, || develop(&fx.complex, &fx.sheaf))?;
        let cert = cert.map_err(|e| format!("{}: {e}", fx.name))?;
        ensure(cert.verdict, || format!("{}: {:?}", fx.name, cert.reason))?;
        let s = fx.complex.scwol();
        let expected = [
            (E1, s.arrows().iter().map(|a| fx.complex.group(a.initial).order()).sum::<usize>()),
            (E2, s.composition_table().count()),
            (E3, s.object_count()),
        ];
        let mut counts = Vec::new();
        for (family, n) in expected {
            let e = cert.entry(family).ok_or_else(|| format!("{}: no {family} entry", fx.name))?;
            ensure(e.instances == n && e.failures == 0 && e.passed, || {
                format!("{}: {family} {} instance(s), {} failure(s), expected {n}", fx.name, e.instances, e.failures)
            })?;
            counts.push(format!("{family}={n}"));
        }
        notes.push(format!("{} [{}] in {took:?}", fx.name, counts.join(" ")));
    }
    Ok(notes.join(", "))
}

fn random_round_trips(seed: u64) -> impl Iterator<Item = Result<DevCertificate, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..50).map(move |k| {
        let (c, m) = random_developable(&mut rng, 8, 24);
        let (sheaf, _) = sheaf_from_morphism(&m, Field::Rational).map_err(|e| format!("instance {k}: {e}"))?;
        develop(&c, &sheaf).map_err(|e| format!("instance {k}: {e}"))
    })
}

fn tree_collapse() -> Outcome {
    let mut tree_arrows = 0;
    let mut certificates = 0;
    let mut check = |cert: &DevCertificate, what: &str| -> Result<(), String> {
        if cert.verdict {
            ensure(tree_collapses(cert), || format!("{what}: a tree arrow has Φ(a) ≠ I"))?;
            tree_arrows += cert.tree.len();
            certificates += 1;
        }
        Ok(())
    };
    for fx in fixtures::all() {
        let cert = develop(&fx.complex, &fx.sheaf).map_err(|e| format!("{}: {e}", fx.name))?;
        ensure(cert.verdict, || format!("{}: {:?}", fx.name, cert.reason))?;
        check(&cert, fx.name)?;
    }
    let mut random = 0;
    for (k, cert) in random_round_trips(3).enumerate() {
        let cert = cert?;
        ensure(cert.verdict, || format!("random instance {k}: {:?}", cert.reason))?;
        check(&cert, &format!("random instance {k}"))?;
        random += 1;
    }
    Ok(format!("{certificates} certificates ({random} random), {tree_arrows} tree arrows, all Φ(a) = I"))
}

fn round_trip() -> Outcome {
    let (results, took) = timed(Duration::from_secs(60), "50 round trips", || random_round_trips(4).collect::<Vec<_>>())?;
    let mut passed = 0;
    for (k, cert) in results.into_iter().enumerate() {
        let cert = cert?;
        ensure(cert.verdict, || format!("instance {k}: {:?}", cert.reason))?;
        passed += 1;
    }
    Ok(format!("{passed}/50 verdict true in {took:?}"))
}

fn mutation_targets(fx: &Fixture) -> Vec<(DevProperty, Option<&'static str>)> {
    let c = &fx.complex;
    let s = c.scwol();
    [DevProperty::ConstantRank, DevProperty::Invertibility, DevProperty::Injectivity]
        .into_iter()
        .map(|p| {
            let impossible = match p {
                DevProperty::ConstantRank if s.object_count() == 1 => Some("one object"),
                DevProperty::Invertibility if s.arrows().is_empty() => Some("no arrows, and ρ is invertible"),
                DevProperty::Injectivity if c.groups().iter().all(|g| g.order() == 1) => Some("trivial local groups"),
                _ => None,
            };
            (p, impossible)
        })
        .collect()
}

fn mutations() -> Outcome {
    let mut notes = Vec::new();
    for fx in fixtures::all() {
        let mut detected = 0;
        let mut skipped = Vec::new();
        for (p, impossible) in mutation_targets(&fx) {
            let Some(mutant) = fixtures::mutate(&fx.sheaf, p) else {
                let why = impossible.ok_or_else(|| format!("{}: no mutation for {p}", fx.name))?;
                skipped.push(format!("{p}: {why}"));
                continue;
            };
            let what = format!("{} / {p}", fx.name);
            ensure(validate_sheaf(&mutant).passed(), || format!("{what}: mutant is not a sheaf"))?;
            let report = check_dev_properties(&mutant).map_err(|e| format!("{what}: {e}"))?;
            ensure(report.failing() == vec![p], || format!("{what}: failing {:?}", report.failing()))?;
            let cert = develop(&fx.complex, &mutant).map_err(|e| format!("{what}: {e}"))?;
            ensure(!cert.verdict, || format!("{what}: verdict true"))?;
            ensure(cert.reason.as_deref() == Some(&format!("fails {p}")), || format!("{what}: reason {:?}", cert.reason))?;
            ensure(cert.dev_report == report, || format!("{what}: certificate report differs"))?;
            detected += 1;
        }
        let applicable = 3 - skipped.len();
        ensure(detected == applicable, || format!("{}: {detected}/{applicable}", fx.name))?;
        let mut note = format!("{} {detected}/{applicable}", fx.name);
        if !skipped.is_empty() {
            note.push_str(&format!(" (n/a: {})", skipped.join("; ")));
        }
        notes.push(note);
    }
    Ok(notes.join(", "))
}

fn functoriality() -> Outcome {
    let mut sheaves: Vec<_> = fixtures::all().into_iter().map(|f| f.sheaf).collect();
    sheaves.push(fixtures::fix_seg_trivial_sheaf());
    sheaves.push(fixtures::fix_tri_broken_sheaf());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let field = if k % 2 == 0 { Field::Rational } else { Field::Prime(3) };
        sheaves.push(random_sheaf(&mut rng, field));
    }
    let mut valid = 0;
    for (k, f) in sheaves.iter().enumerate() {
        let v = validate_sheaf(f).passed();
        ensure(v == functor_oracle(f), || format!("disagreement on instance {k} (validator says {v})"))?;
        valid += usize::from(v);
    }
    Ok(format!("{0}/{0} agree ({valid} sheaves, {1} non-sheaves)", sheaves.len(), sheaves.len() - valid))
}

fn laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let g = random_digraph(&mut rng, 8);
        let s = complex_to_scwol(&g).map_err(|e| format!("digraph {k}: {e}"))?;
        let r = validate_scwol(&s);
        ensure(r.passed(), || format!("digraph {k}: {r}"))?;
    }
    for k in 0..50 {
        let c = random_complex(&mut rng, 6);
        let s = complex_to_scwol(&c).map_err(|e| format!("complex {k}: {e}"))?;
        let r = validate_scwol(&s);
        ensure(r.passed(), || format!("complex {k}: {r}"))?;
    }
    let mut triples = 0;
    for fx in fixtures::all() {
        let cat = build_bh_category(fx.complex.clone()).map_err(|e| format!("{}: {e}", fx.name))?;
        let r = check_category_laws(&cat);
        ensure(r.passed(), || format!("{}: {r}", fx.name))?;
        triples += r.checked.iter().find(|(rule, _)| rule == "associativity").map_or(0, |(_, n)| *n);
    }
    Ok(format!("200 digraphs, 50 complexes, {triples} associativity triples"))
}

fn friedman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut maps = 0;
    for k in 0..50 {
        let field = if k % 2 == 0 { Field::Rational } else { Field::Prime(7) };
        let d = random_digraph_sheaf(&mut rng, field, 8);
        let f = friedman_to_scwol_sheaf(&d, field).map_err(|e| format!("sheaf {k}: {e}"))?;
        let n = d.vertex_dims.len();
        let dims_ok = (0..n).all(|v| f.dim(ObjectId(v)) == d.vertex_dims[v])
            && d.edge_dims.iter().enumerate().all(|(e, &k)| f.dim(ObjectId(n + e)) == k);
        ensure(dims_ok, || format!("sheaf {k}: stalk dimensions differ"))?;
        for (e, (tail, head)) in d.maps.iter().enumerate() {
            let same = |a: usize, m: &Matrix| f.arrow_matrix(ArrowId(a)) == m;
            ensure(same(2 * e, tail) && same(2 * e + 1, head), || format!("sheaf {k}: edge {e} maps differ"))?;
            maps += 2;
        }
        ensure(validate_sheaf(&f).passed(), || format!("sheaf {k}: not a sheaf"))?;
    }
    Ok(format!("50/50 lossless, {maps} maps compared"))
}

fn determinism() -> Outcome {
    let mut cases: Vec<(String, Fixture)> = fixtures::all().into_iter().map(|f| (f.name.to_string(), f)).collect();
    let mut variant = fixtures::fix_seg();
    variant.sheaf = fixtures::fix_seg_trivial_sheaf();
    cases.push(("fix-seg-trivial".into(), variant));
    for (name, fx) in &cases {
        let text = |_| develop(&fx.complex, &fx.sheaf).map(|c| to_json(&certificate_file(&c, Field::Rational)));
        let first = text(0).map_err(|e| format!("{name}: {e}"))?;
        for k in 1..10 {
            ensure(text(k).as_ref() == Ok(&first), || format!("{name}: run {k} differs"))?;
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bundle = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/fix-tri/bundle.json");
    let mut outputs = Vec::new();
    for k in 0..10 {
        let out = dir.path().join(format!("cert-{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_cogsheaf"))
            .arg("develop")
            .arg(&bundle)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), || format!("cli run {k}: {status}"))?;
        outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs.iter().all(|o| *o == outputs[0]), || "cli certificate files differ".into())?;
    Ok(format!("{} inputs x 10 in process, 10/10 identical cli files", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("forward: sheaf from morphism has the dev properties", forward),
        ("reverse: develop certifies the fixture sheaves", reverse),
        ("tree collapse: Φ(a) = I on tree arrows", tree_collapse),
        ("round trip: develop after sheaf_from_morphism", round_trip),
        ("mutations flip exactly one dev property", mutations),
        ("functoriality oracle agrees with validate_sheaf", functoriality),
        ("scwol and B.H. category laws", laws),
        ("digraph sheaves transport losslessly", friedman),
        ("certificates are byte-identical across runs", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail})", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
