//! Acceptance criteria, one PASS/FAIL line each. Runs as its own binary so the lines stay in order.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use formring::gens::{commutator, commutator_witness, eval, gen_matrix, split, Family, Symbol};
use formring::group::{parse_group, FGroup};
use formring::reduce::{bfs_closure, gl_correspondence, symplectic_order, BfsCaps};
use formring::ring::{El, FiniteRing};
use formring::sample::symbol_pool;
use formring::suites::{form_axiom_sweep, run_suite, SuiteConfig, SuiteReport};

struct Line {
    ok: bool,
}

fn report(k: usize, title: &str, ok: bool, detail: String, t: Duration) -> Line {
    println!("{} criterion {k:>2} {title}: {detail} ({:.1} s)", if ok { "PASS" } else { "FAIL" }, t.as_secs_f64());
    Line { ok }
}

fn group(spec: &str) -> FGroup {
    parse_group(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

fn suite(name: &str, spec: &str, cfg: SuiteConfig) -> SuiteReport {
    run_suite(name, spec, &cfg).unwrap_or_else(|e| panic!("{name} on {spec}: {e}"))
}

fn counts(r: &SuiteReport) -> String {
    format!("{} {}/{} pass, {} fail, {} unknown", r.group, r.pass, r.cases, r.fail, r.unknown)
}

fn family_of(s: &Symbol<El>) -> &'static str {
    s.family.name()
}

fn axioms() -> Line {
    let t = Instant::now();
    let rep = form_axiom_sweep().expect("catalog builds");
    let el = t.elapsed();
    let ok = rep.failures.is_empty() && el < Duration::from_secs(10);
    let mut detail = format!("{} rings, {} form parameters, {} failures", rep.rings, rep.parameters, rep.failures.len());
    if let Some(f) = rep.failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    report(1, "form-ring axioms", ok, detail, el)
}

const MEMBERSHIP: [&str; 6] = [
    "zmod:4:lambda=3/quad:3",
    "zmod:5:lambda=4/quad:3",
    "zmod:4:lambda=3/herm:4:a=0",
    "zmod:5:lambda=4/herm:4:a=0",
    "zmod:4:lambda=3/herm:4:a=0,2",
    "zmod:5:lambda=4/herm:4:a=0,1",
];

fn membership() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in MEMBERSHIP {
        let r = suite("membership", spec, SuiteConfig { seed: 11, cases: 10_000, ..Default::default() });
        let families: std::collections::BTreeSet<String> =
            r.results.iter().filter_map(|c| c.input[0]["family"].as_str().map(str::to_string)).collect();
        let g = group(spec);
        let all = Family::for_flavor(g.flavor).len();
        ok &= r.pass == r.cases && families.len() == all;
        parts.push(format!("{} {}/{} ({} families)", r.group, r.pass, r.cases, families.len()));
    }
    let el = t.elapsed();
    ok &= el < Duration::from_secs(30);
    report(2, "generator membership", ok, parts.join("; "), el)
}

fn splitting() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for spec in ["zmod:5:lambda=4/quad:3", "zmod:4:lambda=3/quad:3", "zmod:4:lambda=3/herm:4:a=0", "zmod:5:lambda=4/herm:4:a=0,1"] {
        let g = group(spec);
        let pool = symbol_pool(&g);
        for fam in Family::for_flavor(g.flavor) {
            let of: Vec<&Symbol<El>> = pool.iter().filter(|s| s.family == *fam).collect();
            let e = tally.entry(fam.name().to_string()).or_default();
            for _ in 0..1000 {
                let s = of.choose(&mut rng).unwrap();
                let same: Vec<&&Symbol<El>> = of.iter().filter(|x| (x.i, x.j) == (s.i, s.j)).collect();
                let u = same.choose(&mut rng).unwrap();
                let good = split(&g, s, u)
                    .and_then(|(l, r)| Ok(eval(&g, &l)? == eval(&g, &r)?))
                    .unwrap_or(false);
                e.0 += good as usize;
                e.1 += 1;
            }
        }
    }
    let ok = tally.values().all(|(p, n)| p == n && *n >= 1000);
    let detail = tally.iter().map(|(f, (p, n))| format!("{f} {p}/{n}")).collect::<Vec<_>>().join(", ");
    report(3, "splitting identities", ok, detail, t.elapsed())
}

fn perfectness() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in [
        "zmod:4:lambda=3/quad:3",
        "zmod:5:lambda=4/quad:3",
        "zmod:4:lambda=3/herm:4:a=0",
        "zmod:4:lambda=1/herm:4:a=0",
        "zmod:5:lambda=4/herm:4:a=0",
    ] {
        let g = group(spec);
        let elems: Vec<El> = g.ring().elements().collect();
        let pool = symbol_pool(&g);
        let mut picks: Vec<&Symbol<El>> = Vec::new();
        for fam in Family::for_flavor(g.flavor) {
            let of: Vec<&Symbol<El>> = pool.iter().filter(|s| s.family == *fam).collect();
            // every diagonal symbol, plus a sample of the rest
            picks.extend(of.iter().copied().filter(|s| s.i == s.j && !fam.is_column()));
            picks.extend(of.choose_multiple(&mut rng, 6).copied());
        }
        let total = picks.len();
        let pass = picks
            .par_iter()
            .filter(|s| {
                let good = commutator_witness(&g, s, &elems)
                    .and_then(|w| Ok(eval(&g, &commutator(&w.w1, &w.w2))? == gen_matrix(&g, s)?))
                    .unwrap_or(false);
                if !good {
                    eprintln!("no witness for {} {:?} on {spec}", family_of(s), (s.i, s.j));
                }
                good
            })
            .count();
        ok &= pass == total;
        parts.push(format!("{} {pass}/{total}", g.spec()));
    }
    report(4, "commutator witnesses", ok, parts.join("; "), t.elapsed())
}

fn suites_line(k: usize, title: &str, name: &str, runs: &[(&str, SuiteConfig)], per_case: Option<Duration>, total: Option<Duration>) -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, cfg) in runs {
        let r = suite(name, spec, cfg.clone());
        ok &= r.pass == r.cases;
        let mut p = counts(&r);
        if let Some(lim) = per_case {
            ok &= Duration::from_millis(r.max_case_ms as u64) < lim;
            p.push_str(&format!(", slowest case {} ms", r.max_case_ms));
        }
        parts.push(p);
        for c in r.results.iter().filter(|c| c.verdict != formring::suites::Verdict::Pass).take(3) {
            eprintln!("{name} case {}: {}", c.index, c.detail);
        }
    }
    let el = t.elapsed();
    if let Some(lim) = total {
        ok &= el < lim;
    }
    report(k, title, ok, parts.join("; "), el)
}

fn cfg(seed: u64, cases: usize) -> SuiteConfig {
    SuiteConfig { seed, cases, ..Default::default() }
}

fn peak_rss_mib() -> Option<f64> {
    let s = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = s.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

fn bfs() -> Line {
    let t = Instant::now();
    let g = group("zmod:2;gens=0,1/quad:3");
    let oracle = bfs_closure(&g, BfsCaps::default());
    let el = t.elapsed();
    let expect = symplectic_order(3, 2);
    let rss = peak_rss_mib();
    let ok = oracle.complete()
        && oracle.size() as u128 == expect
        && el < Duration::from_secs(600)
        && rss.is_none_or(|m| m < 2048.0);
    let detail = format!(
        "closure {} vs order formula {expect}, peak RSS {}",
        oracle.size(),
        rss.map_or("n/a".to_string(), |m| format!("{m:.0} MiB"))
    );
    report(10, "BFS oracle cross-check", ok, detail, el)
}

fn gl() -> Line {
    let t = Instant::now();
    let base = FiniteRing::zmod(2).unwrap();
    let c = gl_correspondence(&base, 3).expect("embedding builds");
    let detail = format!(
        "{}/{} GL generators map to generators, {}/{} back, products {}/{} and {}/{}",
        c.gl_to_quadratic, c.gl_generators, c.quadratic_to_gl, c.quadratic_generators, c.gl_pairs_ok, c.gl_pairs,
        c.quadratic_pairs_ok, c.quadratic_pairs
    );
    report(11, "GL embedding", c.passed(), detail, t.elapsed())
}

fn main() {
    let lines = vec![
        axioms(),
        membership(),
        splitting(),
        perfectness(),
        suites_line(5, "I+M factorization", "key5", &[("zmod:5:lambda=4/quad:3", cfg(51, 100)), ("zmod:4:lambda=3/herm:4:a=0", cfg(52, 100))], None, None),
        suites_line(
            6,
            "isotropic vector reduction",
            "swan",
            &[
                ("zmod:5:lambda=4/quad:3", cfg(61, 200)),
                ("zmod:4:lambda=3/quad:3", cfg(62, 200)),
                ("zmod:4:lambda=3/herm:4:a=0", cfg(63, 200)),
            ],
            Some(Duration::from_secs(1)),
            None,
        ),
        suites_line(7, "diagonalization mod radical", "sol3a", &[("zmod:8/quad:3", SuiteConfig { ideal: vec![2], ..cfg(71, 100) })], None, None),
        suites_line(8, "local-global patching", "lg", &[("zmod:6:lambda=5/quad:3", SuiteConfig { degree: 3, ..cfg(81, 50) })], None, Some(Duration::from_secs(300))),
        suites_line(
            9,
            "conjugation into E",
            "normality",
            &[("zmod:5:lambda=4/quad:3", cfg(91, 50)), ("zmod:4:lambda=3/herm:4:a=0", cfg(92, 50))],
            None,
            None,
        ),
        bfs(),
        gl(),
    ];
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
