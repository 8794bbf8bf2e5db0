//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use lscat_cli::commands::{oracle_sweep, DEFAULT_SEED, EXIT_OK, EXIT_PARSE, SO_CUP_LENGTHS, SO_DIMENSIONS};
use lscat_cli::format::{parse_space, serialize_space};
use lscat_core::algebra::{Element, Expr, MultiplicationTable};
use lscat_core::catalogue::{
    self, sphere_presentation, surface_table, torus_presentation, Catalogue, SpaceRecord, SURFACE_CRIT_STAR_NOTE,
};
use lscat_core::invariants::{
    betti_sum, cup_length, cup_length_formula, cup_length_search, morse_lower_bound, so_n_presentation,
};
use lscat_core::maps::{
    check_injectivity, full_report, low_dim_check, thm_main_check, torus_stabilization_k, validate_hom, CriterionId,
    RingHomSpec, Status,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lscat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lscat"))
        .args(args)
        .output()
        .expect("lscat binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn record(name: &str) -> SpaceRecord {
    catalogue::get(name).unwrap().as_ref().clone()
}

fn so_table_reproduction() -> Check {
    let start = Instant::now();
    let out = lscat(&["--json", "verify-paper"]);
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(EXIT_OK), || {
        format!("exit {:?}", out.status.code())
    })?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = json["rows"].as_array().ok_or("no rows")?;
    ensure(rows.len() == 7, || format!("{} rows", rows.len()))?;
    for (i, row) in rows.iter().enumerate() {
        let n = i as u64 + 3;
        ensure(row["n"] == n, || format!("row {i}: n = {}", row["n"]))?;
        ensure(row["dimension"] == SO_DIMENSIONS[i], || {
            format!("SO{n}: dim {}", row["dimension"])
        })?;
        for key in ["cl_formula", "cl_search"] {
            ensure(row[key] == SO_CUP_LENGTHS[i], || format!("SO{n}: {key} = {}", row[key]))?;
        }
    }
    println!("    verify-paper: {elapsed:?}");
    Ok(())
}

fn oracle_equivalence() -> Check {
    let mut named: Vec<_> = (3..=9).map(so_n_presentation).collect();
    named.extend((0..=8).map(torus_presentation));
    named.extend((1..=10).map(sphere_presentation));
    for p in &named {
        let table = p.expand_to_table().map_err(|e| e.to_string())?;
        let (f, s) = (cup_length_formula(p), cup_length_search(&table));
        ensure(f == s, || format!("{p:?}: formula {f}, search {s}"))?;
    }
    let sweep = oracle_sweep(DEFAULT_SEED, 100, 4096);
    ensure(sweep.mismatches.is_empty(), || sweep.mismatches.join("; "))?;
    println!(
        "    {} named presentations, {} random (size <= 4096)",
        named.len(),
        sweep.count
    );
    Ok(())
}

fn kunneth_additivity() -> Check {
    let names: Vec<String> = Catalogue::list()
        .into_iter()
        .filter(|n| record(n).ring.is_some())
        .collect();
    let mut pairs = 0;
    for (i, a) in names.iter().enumerate() {
        for b in &names[i..] {
            let (ra, rb) = (record(a), record(b));
            let size = ra.ring.as_ref().unwrap().total_dimension() * rb.ring.as_ref().unwrap().total_dimension();
            if size > 512 {
                continue;
            }
            let product = catalogue::get(&format!("{a}x{b}")).map_err(|e| e.to_string())?;
            let table = product.ring.as_ref().unwrap().table().map_err(|e| e.to_string())?;
            let lhs = cup_length_search(&table);
            let rhs = cup_length(ra.ring.as_ref().unwrap()).unwrap() + cup_length(rb.ring.as_ref().unwrap()).unwrap();
            ensure(lhs == rhs, || format!("{a} x {b}: {lhs} != {rhs}"))?;
            pairs += 1;
        }
    }
    ensure(pairs >= 20, || format!("only {pairs} pairs"))?;
    println!("    {pairs} catalogue pairs");
    Ok(())
}

fn poincare_duality() -> Check {
    let mut names = vec!["SO3".to_string(), "SO4".to_string()];
    names.extend((0..=4).map(|g| format!("S_{g}")));
    names.extend((1..=6).map(|k| format!("T{k}")));
    names.extend((1..=10).map(|n| format!("S{n}")));
    for name in &names {
        let table = record(name)
            .ring
            .ok_or(format!("{name}: no ring"))?
            .table()
            .map_err(|e| e.to_string())?;
        ensure(table.check_poincare_duality(), || format!("{name}: duality fails"))?;
    }
    // T^2 with its top class removed
    let corrupted = MultiplicationTable::new(
        vec![("1".into(), 0), ("t1".into(), 1), ("t2".into(), 1)],
        2,
        vec![(1, 2, Element::zero())],
    )
    .map_err(|e| e.to_string())?;
    ensure(!corrupted.check_poincare_duality(), || "corrupted table passes".into())?;
    ensure(surface_table(2).check_poincare_duality(), || "S_2 table".into())?;
    println!("    {} tables dual, corrupted table rejected", names.len());
    Ok(())
}

fn g2_criterion() -> Check {
    let g2 = record("G2");
    let x14 = parse_space(&std::fs::read_to_string(data("x14.space")).unwrap()).map_err(|e| e.to_string())?;
    let v = thm_main_check(&x14, &g2);
    ensure(v.status == Status::Certified, || {
        format!("{:?}: {}", v.status, v.reason)
    })?;
    ensure(v.reason.contains("dim N = 14 <= 2*q*cat N - 4 = 20"), || {
        v.reason.clone()
    })?;
    let s = torus_stabilization_k(14);
    ensure(s.k == 18 && s.lhs == s.rhs && 2 * s.k - 4 == s.k + s.n, || {
        format!("{s:?}")
    })?;
    Ok(())
}

fn obstruction_detection() -> Check {
    let report = full_report(&record("S2"), &record("T2"), None).map_err(|e| e.to_string())?;
    ensure(report.overall == Status::Violated, || {
        format!("overall {:?}", report.overall)
    })?;
    let cl = report
        .verdicts
        .iter()
        .find(|v| v.criterion == CriterionId::PropClMonotone)
        .ok_or("no cl verdict")?;
    ensure(
        cl.status == Status::Violated && cl.reason.contains("cl(M) = 1 < cl(N) = 2"),
        || cl.reason.clone(),
    )?;

    let (s2g, t2) = (record("S_2"), record("T2"));
    let spec = RingHomSpec {
        name: "collapse".into(),
        source: t2.ring.clone().unwrap(),
        target: s2g.ring.clone().unwrap(),
        images: vec![
            ("t1".into(), Expr::parse("a1").unwrap()),
            ("t2".into(), Expr::parse("b1").unwrap()),
        ],
        asserted_degree: 1,
    };
    let h = validate_hom(&spec).map_err(|e| e.to_string())?;
    let inj = check_injectivity(&h);
    ensure(inj.injective && inj.per_degree.iter().all(|(_, ok)| *ok), || {
        format!("{inj:?}")
    })?;
    let low = low_dim_check(2, s2g.genus, t2.genus);
    ensure(low.status == Status::Certified, || low.reason.clone())?;

    let map = data("collapse.map");
    let out = lscat(&[
        "degree1-report",
        "-m",
        "S_2",
        "-n",
        "T2",
        "--map",
        map.to_str().unwrap(),
    ]);
    ensure(out.status.code() == Some(EXIT_OK), || {
        format!("collapse report exit {:?}", out.status.code())
    })?;
    let out = lscat(&["degree1-report", "-m", "S2", "-n", "T2"]);
    ensure(out.status.code() == Some(2), || {
        format!("S2 -> T2 exit {:?}", out.status.code())
    })?;
    Ok(())
}

fn morse_suite() -> Check {
    let s3s3 = record("S3xS3");
    let b = morse_lower_bound(s3s3.morse.as_ref().ok_or("no homology for S3xS3")?);
    ensure(b.bound == 4 && b.exact, || format!("{b:?}"))?;

    let report = full_report(&record("S6"), &s3s3, None).map_err(|e| e.to_string())?;
    let morse = report
        .verdicts
        .iter()
        .find(|v| v.criterion == CriterionId::MorseTransfer)
        .ok_or("no morse verdict")?;
    ensure(morse.status == Status::Violated, || morse.reason.clone())?;
    ensure(report.overall == Status::Violated, || {
        format!("overall {:?}", report.overall)
    })?;

    for g in 0..=4u64 {
        let r = record(&format!("S_{g}"));
        let sum = betti_sum(r.morse.as_ref().ok_or("no surface homology")?.ranks());
        let ledger = r.ledger().map_err(|e| e.to_string())?;
        ensure(sum == 2 * g + 2, || format!("S_{g}: betti sum {sum}"))?;
        ensure(sum >= ledger.crit_star.lower, || {
            format!("S_{g}: crit* lower {}", ledger.crit_star.lower)
        })?;
        if g >= 1 {
            ensure(r.notes.iter().any(|n| n == SURFACE_CRIT_STAR_NOTE), || {
                format!("S_{g}: note missing")
            })?;
            let rep = full_report(&r, &r, None).map_err(|e| e.to_string())?;
            ensure(rep.notes.iter().any(|n| n == SURFACE_CRIT_STAR_NOTE), || {
                format!("S_{g}: report note missing")
            })?;
        }
    }
    Ok(())
}

fn ledger_consistency() -> Check {
    let names = Catalogue::list();
    let mut checked = 0;
    for (i, a) in names.iter().enumerate() {
        let ledger = record(a).ledger().map_err(|e| e.to_string())?;
        ledger.check_chain().map_err(|e| format!("{a}: {e}"))?;
        checked += 1;
        for b in &names[i..] {
            let (ra, rb) = (record(a), record(b));
            let small = match (&ra.ring, &rb.ring) {
                (Some(x), Some(y)) => x.total_dimension() * y.total_dimension() <= 256,
                _ => true,
            };
            if small {
                let p = catalogue::get(&format!("{a}x{b}")).map_err(|e| e.to_string())?;
                p.ledger()
                    .map_err(|e| e.to_string())?
                    .check_chain()
                    .map_err(|e| format!("{a}x{b}: {e}"))?;
                checked += 1;
            }
        }
    }
    println!("    {checked} ledgers");
    Ok(())
}

const MALFORMED: [(&str, &str, &str); 10] = [
    ("syntax", "space X\ndim ten\n", "[syntax]"),
    ("keyword", "space X\ndim 2\nfoo bar\n", "[unknown-keyword]"),
    ("duplicate-key", "space X\ndim 2\ndim 3\n", "[duplicate-key]"),
    ("missing-field", "dim 2\n", "[missing-field]"),
    (
        "duplicate-generator",
        "space X\ndim 1\ngenerator a 1\ngenerator a 1\ntruncate a 2\n",
        "[duplicate-generator]",
    ),
    (
        "exponent",
        "space X\ndim 1\ngenerator a 1\ntruncate a 0\n",
        "[invalid-exponent]",
    ),
    (
        "degree",
        "space X\ndim 1\ngenerator a 0\ntruncate a 2\n",
        "[invalid-degree]",
    ),
    (
        "symbol",
        "space X\ndim 1\ngenerator a 1\ntruncate b 2\n",
        "[unknown-symbol]",
    ),
    ("truncation", "space X\ndim 1\ngenerator a 1\n", "[missing-truncation]"),
    (
        "expression",
        "space T\ndim 2\nbasis 1 0\nbasis a 1\nbasis b 1\nbasis w 2\nproduct a b = w +\n",
        "[expression]",
    ),
];

fn parser() -> Check {
    for name in Catalogue::list() {
        let text = String::from_utf8(lscat(&["catalogue", "--export", &name]).stdout).map_err(|e| e.to_string())?;
        let parsed = parse_space(&text).map_err(|e| format!("{name}: {e}"))?;
        let again = serialize_space(&parsed);
        ensure(again == text, || format!("{name}: serialization is not a fixpoint"))?;
        ensure(parse_space(&again).as_ref() == Ok(&parsed), || {
            format!("{name}: reparse differs")
        })?;
        ensure(parsed == record(&name), || {
            format!("{name}: export does not parse back to the record")
        })?;
    }
    let dir = std::env::temp_dir().join(format!("lscat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (name, text, class) in MALFORMED {
        let path = dir.join(format!("{name}.space"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let out = lscat(&["show", path.to_str().unwrap()]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(EXIT_PARSE), || {
            format!("{name}: exit {:?}", out.status.code())
        })?;
        ensure(stderr.contains(class), || format!("{name}: {stderr}"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("SO(n) table reproduction", so_table_reproduction),
        ("formula = search oracle equivalence", oracle_equivalence),
        ("Kunneth additivity", kunneth_additivity),
        ("Poincare duality", poincare_duality),
        ("G2 main criterion and torus k", g2_criterion),
        ("obstruction detection", obstruction_detection),
        ("Morse suite", morse_suite),
        ("ledger consistency", ledger_consistency),
        ("parser round trip and malformed files", parser),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {e}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} criteria failed");
}
