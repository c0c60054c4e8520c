use biharm_verify::io::corpus::{CorpusError, MemSource};
use biharm_verify::verify::{run_all, run_step};
use biharm_verify::{Corpus, RunConfig, Status};

const SYMBOLS: &str = "# name role [max_order]\nx base\ny base\nlam jet 3\n";

fn corpus(files: &[(&str, &str)]) -> Result<Corpus, CorpusError> {
    let mut all = vec![("symbols.txt".to_string(), SYMBOLS.to_string())];
    if !files.iter().any(|(p, _)| *p == "nonvanishing.txt") {
        all.push(("nonvanishing.txt".into(), "*\tlam\n".into()));
    }
    all.extend(files.iter().map(|(p, c)| (p.to_string(), c.to_string())));
    Corpus::load(&MemSource(all))
}

fn registry(lines: &[&str]) -> String {
    let mut s = String::from("# id kind inputs expected mode rules options anchor\n");
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    s
}

fn small(lines: &[&str]) -> Corpus {
    corpus(&[
        ("eq/A.poly", "# ref: A\nx^2 - y^2 = 0\n"),
        ("eq/B.poly", "(x - y)*(x + y)\n"),
        ("eq/C.poly", "x*lam - y\n"),
        ("eq/E.poly", "x*lam' - 1\n"),
        ("eq/Z.poly", "2*y - 2*lam*x\n"),
        ("rules/jet.rules", "# jets shift\n"),
        ("steps.registry", &registry(lines)),
    ])
    .unwrap()
}

fn status(c: &Corpus, id: &str) -> Status {
    run_step(c.step(id).unwrap(), c, &RunConfig::default()).status
}

#[test]
fn identities_and_scalars() {
    let c = small(&[
        "T.id\tidentity_zero\t@A - @B\t-\texact\t-\t-",
        "T.same\texpand_compare\t@B\t@A\texact\t-\t-",
        "T.scaled\texpand_compare\t-2*@C\t@Z\tup_to_scalar\t-\t-",
        "T.exact\texpand_compare\t-2*@C\t@Z\texact\t-\t-",
        "T.bad\texpand_compare\t@C\t@A\tup_to_scalar\t-\t-\tx^2",
    ]);
    assert_eq!(c.steps.len(), 5);
    assert_eq!(status(&c, "T.id"), Status::Match);
    assert_eq!(status(&c, "T.same"), Status::Match);
    assert_eq!(status(&c, "T.scaled"), Status::Match);
    assert_eq!(status(&c, "T.exact"), Status::Match);
    let r = run_step(c.step("T.bad").unwrap(), &c, &RunConfig::default());
    assert_eq!(r.status, Status::Mismatch);
    assert!(!r.diff.is_empty());
    assert!(r.is_failure());
}

#[test]
fn derivative_with_jet_rules() {
    let c = small(&["T.d\tderive_compare\tD(lam*lam)\t2*lam*lam'\texact\tjet\t-"]);
    assert_eq!(status(&c, "T.d"), Status::Match);
}

#[test]
fn elimination_is_certified() {
    let c = small(&["T.e\teliminate_compare\telim(@C, @E, x)\tlam - y*lam'\tup_to_scalar\t-\t-"]);
    let r = run_step(c.step("T.e").unwrap(), &c, &RunConfig::default());
    assert!(r.status.is_match(), "{:?}", r.notes);
    assert!(r.certificates >= 1 && r.certificates_ok);
}

#[test]
fn zero_elimination_is_degenerate() {
    let c = small(&[
        "T.z\teliminate_compare\telim(@A - @B, @C, x)\t0\texact\t-\t-",
        "T.nc\teliminate_compare\telim(@A - @B, @C, x)\t0\texact\t-\tnegative-control",
    ]);
    let results = run_all(&c, &RunConfig::default());
    let z = results.iter().find(|r| r.id == "T.z").unwrap();
    let nc = results.iter().find(|r| r.id == "T.nc").unwrap();
    assert_eq!(z.status, Status::Degenerate);
    assert!(z.is_failure());
    assert_eq!(nc.status, Status::Degenerate);
    assert!(!nc.is_failure());
}

#[test]
fn undeclared_denominators_fail_the_ledger() {
    let c = small(&[
        "T.ok\texpand_compare\t(x*lam)/lam\tx\texact\t-\t-",
        "T.no\texpand_compare\t(x*y)/y\tx\texact\t-\t-",
    ]);
    let ok = run_step(c.step("T.ok").unwrap(), &c, &RunConfig::default());
    assert_eq!(ok.status, Status::Match);
    let no = run_step(c.step("T.no").unwrap(), &c, &RunConfig::default());
    assert_eq!(no.status, Status::Mismatch);
    assert!(!no.ledger_ok);
}

#[test]
fn real_roots() {
    let c = small(&[
        "T.r0\treal_root_check\tx^2 + 1\t-\texact\t-\troots=0",
        "T.r2\treal_root_check\tx^2 - 2\t-\texact\t-\troots=0",
    ]);
    assert!(status(&c, "T.r0").is_match());
    assert_eq!(status(&c, "T.r2"), Status::Mismatch);
}

#[test]
fn term_cap_gives_incomplete() {
    let c = small(&["T.big\texpand_compare\t(x + y + lam + 1)^30\t0\texact\t-\tterms=1000"]);
    assert_eq!(status(&c, "T.big"), Status::Incomplete);
}

#[test]
fn extended_steps_are_skipped_by_default() {
    let c = small(&["T.x\tidentity_zero\t@A - @B\t-\texact\t-\textended"]);
    let r = run_all(&c, &RunConfig::default());
    assert_eq!(r[0].status, Status::Skipped);
    let all = RunConfig {
        include_extended: true,
        ..RunConfig::default()
    };
    assert_eq!(run_all(&c, &all)[0].status, Status::Match);
}

#[test]
fn malformed_corpora_are_rejected() {
    let reg = registry(&["T.id\tidentity_zero\t@A\t-\texact\t-\t-"]);
    let unknown = corpus(&[("eq/A.poly", "x + gamma\n"), ("steps.registry", &reg)]).unwrap_err();
    assert!(matches!(unknown, CorpusError::Parse { .. }), "{unknown}");

    let division = corpus(&[("eq/A.poly", "x/y\n"), ("steps.registry", &reg)]).unwrap_err();
    assert!(matches!(division, CorpusError::Parse { .. }), "{division}");

    let fields = registry(&["T.id\tidentity_zero\t@A"]);
    assert!(corpus(&[("eq/A.poly", "x\n"), ("steps.registry", &fields)]).is_err());

    let dup = registry(&["T.id\tidentity_zero\t@A\t-\texact\t-\t-", "T.id\tidentity_zero\t@A\t-\texact\t-\t-"]);
    let e = corpus(&[("eq/A.poly", "x\n"), ("steps.registry", &dup)]).unwrap_err();
    assert_eq!(e, CorpusError::Duplicate("T.id".into()));

    let missing_ref = registry(&["T.id\tidentity_zero\t@Nope\t-\texact\t-\t-"]);
    assert!(corpus(&[("eq/A.poly", "x\n"), ("steps.registry", &missing_ref)]).is_err());

    assert!(matches!(
        Corpus::load(&MemSource(vec![])).unwrap_err(),
        CorpusError::Missing(_)
    ));
}

#[test]
fn embedded_corpus_is_complete() {
    let c = Corpus::embedded().unwrap();
    assert!(c.equations.len() >= 70);
    assert!(c.steps.len() >= 45);
    for s in &c.steps {
        for r in s.inputs.refs() {
            assert!(c.equations.contains_key(&r), "{} refers to unknown {r}", s.id);
        }
    }
    let dir = Corpus::load_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus")).unwrap();
    assert_eq!(dir.equations.len(), c.equations.len());
    assert_eq!(dir.steps.len(), c.steps.len());
}

#[test]
fn full_run_has_no_failures() {
    let c = Corpus::embedded().unwrap();
    let results = run_all(&c, &RunConfig::default());
    let failures: Vec<_> = results.iter().filter(|r| r.is_failure()).map(|r| r.id.as_str()).collect();
    assert!(failures.is_empty(), "{failures:?}");
    assert!(results.iter().all(|r| r.status != Status::Incomplete));
}
