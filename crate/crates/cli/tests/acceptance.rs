//! Runs every acceptance criterion over the bundled corpus and prints one
//! PASS/FAIL line per criterion.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrlab::enumeration::{all_subgroups, conjugacy_classes};
use qrlab::groupring::{delta_dimensions, dimension_series, jennings_series};
use qrlab::intlinalg::ModRing;
use qrlab::permrec::{
    change_basis, gen_perm_lift, harness_lattice, perm_recognize_modp, permutation_module,
    random_invertible, GModule, Status,
};
use qrlab::relmod::{abelianization_order, bar_h2, hopf_h2, qr_check_lattice, QrReport};
use qrlab::{todd_coxeter, Config, FiniteGroupTable, Presentation, RelationLattice};
use qrlab_cli::corpus::load_corpus;
use qrlab_cli::{check, read_presentation, Options};

struct Entry {
    id: String,
    pres: Presentation,
    lat: RelationLattice,
}

impl Entry {
    fn group(&self) -> &FiniteGroupTable {
        self.lat.group()
    }
}

fn corpus_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/corpus.toml")
}

fn load() -> Vec<Entry> {
    let cfg = Config::default();
    load_corpus(&corpus_path())
        .unwrap()
        .into_iter()
        .map(|e| {
            let pres = read_presentation(&e.path).unwrap();
            let tbl = todd_coxeter(&pres, cfg.max_cosets).unwrap();
            let lat = RelationLattice::new(&pres, Arc::new(tbl)).unwrap();
            Entry { id: e.id, pres, lat }
        })
        .collect()
}

fn entry<'a>(all: &'a [Entry], id: &str) -> &'a Entry {
    all.iter().find(|e| e.id == id).unwrap_or_else(|| panic!("corpus entry {id}"))
}

fn qr(e: &Entry, p: u64) -> QrReport {
    qr_check_lattice(&e.lat, p, &Config::default()).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

/// Multiplier by both routes, from scratch.
fn both_h2(pres: &Presentation) -> Result<(String, String, QrReport, usize), String> {
    let cfg = Config::default();
    let tbl = todd_coxeter(pres, cfg.max_cosets).map_err(|e| e.to_string())?;
    let lat = RelationLattice::new(pres, Arc::new(tbl)).map_err(|e| e.to_string())?;
    let hopf = hopf_h2(pres, &lat).map_err(|e| e.to_string())?;
    let bar = bar_h2(lat.group(), cfg.bar_bound).map_err(|e| e.to_string())?;
    let q = qr_check_lattice(&lat, pres.primes()[0], &cfg).map_err(|e| e.to_string())?;
    Ok((hopf.h2.to_string(), bar.to_string(), q, lat.group().order()))
}

fn criterion_1(all: &[Entry]) -> Outcome {
    let start = Instant::now();
    let (hopf, bar, q, order) = both_h2(&entry(all, "q8").pres)?;
    ensure(order == 8, || format!("order {order}"))?;
    ensure(hopf == "0" && bar == "0", || format!("H2 hopf {hopf}, bar {bar}"))?;
    ensure(q.verdict.is_qr(), || "verdict not QR".into())?;
    within(start, Duration::from_secs(5), "quaternion")?;
    Ok(format!("order 8, H2 = 0 by both routes, QR, {:?}", start.elapsed()))
}

fn criterion_2(all: &[Entry]) -> Outcome {
    let start = Instant::now();
    let e = entry(all, "q16");
    let (hopf, bar, q, order) = both_h2(&e.pres)?;
    ensure(e.group().is_p_group(2), || "not a 2-group".into())?;
    ensure(hopf == "0" && bar == "0", || format!("H2 hopf {hopf}, bar {bar}"))?;
    ensure(q.verdict.is_qr(), || "verdict not QR".into())?;
    let report = check(&e.pres, None, &Options::default());
    ensure(report.notes.iter().any(|n| n.contains("Q8") && n.contains("order 16")), || {
        format!("no labeling note in {:?}", report.notes)
    })?;
    within(start, Duration::from_secs(5), "two-relator presentation")?;
    Ok(format!("order {order} (labeling note present), H2 = 0, QR, {:?}", start.elapsed()))
}

fn criterion_3(all: &[Entry]) -> Outcome {
    let mut parts = Vec::new();
    for (id, p, h2) in [("c2xc2", 2, "Z/2"), ("d4", 2, "Z/2"), ("c3xc3", 3, "Z/3")] {
        let start = Instant::now();
        let (hopf, bar, q, _) = both_h2(&entry(all, id).pres)?;
        ensure(hopf == h2 && bar == h2, || format!("{id}: H2 hopf {hopf}, bar {bar}"))?;
        let qrlab::Verdict::NotQr { witness_level } = q.verdict else {
            return Err(format!("{id}: verdict QR"));
        };
        let lvl = &q.levels[witness_level - 1];
        ensure(lvl.p_torsion.iter().all(|t| t % p == 0.into()) && !lvl.p_torsion.is_empty(), || {
            format!("{id}: witness level {witness_level} without {p}-torsion")
        })?;
        ensure(q.prime == p, || format!("{id}: prime {}", q.prime))?;
        within(start, Duration::from_secs(10), id)?;
        parts.push(format!("{id} H2={h2} witness n={witness_level}"));
    }
    Ok(parts.join(", "))
}

fn criterion_4(all: &[Entry]) -> Outcome {
    let mut n = 0;
    for e in all {
        let is_cyclic_power = e.pres.arity() == 1
            && e.group().order() > 1
            && e.pres.primes().iter().any(|&p| e.group().is_p_group(p));
        if !is_cyclic_power {
            continue;
        }
        let p = e.pres.primes()[0];
        let q = qr(e, p);
        ensure(q.verdict.is_qr(), || format!("{} not QR", e.id))?;
        ensure(q.levels.iter().all(|l| l.invariants.is_torsion_free()), || {
            format!("{}: a level has torsion", e.id)
        })?;
        n += 1;
    }
    ensure(n == 6, || format!("{n} cyclic entries"))?;
    Ok(format!("{n} cyclic p-power presentations QR, all levels torsion-free"))
}

fn criterion_5(all: &[Entry]) -> Outcome {
    let mut checked = 0;
    for e in all {
        for p in [2, 3] {
            if !e.group().is_p_group(p) {
                continue;
            }
            let q = qr(e, p);
            ensure(q.equivalence_holds && q.complete, || format!("{} at p = {p}", e.id))?;
            let level_torsion = q.levels.iter().any(|l| !l.p_torsion.is_empty());
            let top = !q.coinvariants_g.p_torsion(p).is_empty();
            ensure(level_torsion == top, || format!("{} at p = {p}: discrepancy", e.id))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (entry, prime) pairs, zero discrepancies"))
}

fn criterion_6(all: &[Entry]) -> Outcome {
    let mut checked = 0;
    for e in all.iter().filter(|e| e.group().order() <= 32) {
        let hopf = hopf_h2(&e.pres, &e.lat).map_err(|x| x.to_string())?;
        let bar = bar_h2(e.group(), 32).map_err(|x| x.to_string())?;
        ensure(hopf.h2 == bar, || format!("{}: hopf {} vs bar {}", e.id, hopf.h2, bar))?;
        checked += 1;
    }
    Ok(format!("{checked} groups, exact agreement"))
}

fn criterion_7(all: &[Entry]) -> Outcome {
    let mut checked = 0;
    for e in all {
        for p in [2, 3] {
            if !e.group().is_p_group(p) {
                continue;
            }
            let d = dimension_series(e.group(), p).map_err(|x| x.to_string())?;
            let j = jennings_series(e.group(), p).map_err(|x| x.to_string())?;
            ensure(d.len() == j.len(), || format!("{} p = {p}: lengths differ", e.id))?;
            for (n, (a, b)) in d.iter().zip(&j).enumerate() {
                ensure(a.members() == b.members(), || format!("{} p = {p}: D_{}", e.id, n + 1))?;
            }
            checked += 1;
        }
    }
    let dims = delta_dimensions(entry(all, "c4").group(), 2).map_err(|x| x.to_string())?;
    ensure(dims == [3, 2, 1, 0], || format!("C4 delta dims {dims:?}"))?;
    Ok(format!("{checked} (group, prime) pairs agree; C4 delta dims 3,2,1,0"))
}

fn criterion_8(all: &[Entry]) -> Outcome {
    let cfg = Config::default();
    let mut levels = 0;
    let mut unknown = 0;
    let mut violations = 0;
    let mut runs = 0;
    for e in all {
        for &p in e.pres.primes() {
            if !e.group().is_p_group(p) || !qr(e, p).verdict.is_qr() {
                continue;
            }
            let h = harness_lattice(&e.lat, p, &cfg).map_err(|x| format!("{}: {x}", e.id))?;
            levels += h.levels.len();
            unknown += h.unknowns;
            violations += h.violations;
            runs += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    ensure(unknown == 0, || format!("{unknown} of {levels} levels undecided"))?;

    let c2 = Arc::new(todd_coxeter(&qrlab::parse_presentation("gens: a; relators: a^2; prime: 2;").unwrap(), 100).unwrap());
    let r = ModRing::new(2, cfg.precision).unwrap();
    let sign = GModule::new(c2, r, 1, vec![vec![vec![r.from_i64(-1)]]]).map_err(|x| x.to_string())?;
    let d = perm_recognize_modp(&sign.reduce(1).unwrap(), &cfg).map_err(|x| x.to_string())?;
    ensure(d.status == Status::Certified, || "sign module mod 2 not certified".into())?;
    let lift = gen_perm_lift(&sign, &d, &cfg).map_err(|x| x.to_string())?;
    ensure(lift.status == Status::Certified && lift.is_generalized_only(), || {
        format!("sign module lift: {:?}", lift.status)
    })?;
    Ok(format!(
        "{runs} QR entries, {levels} levels, 0 violations, 0 unknown; sign-twist C2 certified generalized-only"
    ))
}

fn criterion_9(all: &[Entry]) -> Outcome {
    for e in all {
        let lat = &e.lat;
        ensure(lat.rank() == e.group().order() * (e.pres.arity().max(1) - 1) + 1 || e.pres.arity() == 0, || {
            format!("{}: rank {}", e.id, lat.rank())
        })?;
        ensure(lat.rank() == lat.expected_rank(), || format!("{}: rank law", e.id))?;
        let h = hopf_h2(&e.pres, lat).map_err(|x| x.to_string())?;
        ensure(h.cokernel == h.gab, || format!("{}: coker {} vs G_ab {}", e.id, h.cokernel, h.gab))?;
        ensure(h.gab.order() == Some(abelianization_order(e.group()).into()), || {
            format!("{}: |G_ab| disagrees with the table", e.id)
        })?;
    }
    Ok(format!("{} presentations: rank law and coker = G_ab exact", all.len()))
}

fn criterion_10(all: &[Entry]) -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let groups: Vec<(&Entry, u64)> = all
        .iter()
        .filter(|e| e.group().order() > 1 && e.group().order() <= 16)
        .filter_map(|e| [2, 3].into_iter().find(|&p| e.group().is_p_group(p)).map(|p| (e, p)))
        .collect();
    for trial in 0..100 {
        let (e, p) = groups[rng.random_range(0..groups.len())];
        let tbl = e.lat.group_arc();
        let subs = all_subgroups(&tbl, cfg.subgroup_bound).unwrap();
        let classes = conjugacy_classes(&tbl, &subs);
        let class_of = |i: usize| classes.iter().position(|c| c.contains(&i)).unwrap();
        let k = rng.random_range(1..=3);
        let picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..subs.len())).collect();
        let chosen: Vec<_> = picks.iter().map(|&i| subs[i].clone()).collect();
        let f = ModRing::field(p).unwrap();
        let m = permutation_module(Arc::clone(&tbl), f, &chosen).unwrap();
        let (b, bi) = random_invertible(&f, m.dim(), &mut rng);
        let m = change_basis(&m, &b, &bi).unwrap();
        let d = perm_recognize_modp(&m, &cfg).map_err(|x| x.to_string())?;
        ensure(d.status == Status::Certified, || {
            format!("trial {trial} ({}, dim {}): {:?} {}", e.id, m.dim(), d.status, d.reason)
        })?;
        let mut want: Vec<(Vec<usize>, usize)> = Vec::new();
        for &i in &picks {
            let rep = subs[classes[class_of(i)][0]].members().to_vec();
            match want.iter_mut().find(|w| w.0 == rep) {
                Some(w) => w.1 += 1,
                None => want.push((rep, 1)),
            }
        }
        want.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        ensure(d.subgroup_multiset() == want, || format!("trial {trial} ({}): wrong multiset", e.id))?;
    }
    let c4 = entry(all, "c4").lat.group_arc();
    let j = vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]];
    let jm = GModule::new(c4, ModRing::field(2).unwrap(), 3, vec![j]).unwrap();
    let d = perm_recognize_modp(&jm, &cfg).map_err(|x| x.to_string())?;
    ensure(d.status == Status::RefutedByMarks, || format!("Jordan block: {:?}", d.status))?;
    Ok("100 disguised permutation modules certified with correct multisets; C4 Jordan block refuted by marks".into())
}

type Criterion = fn(&[Entry]) -> Outcome;

#[test]
fn acceptance() {
    let t = Instant::now();
    let all = load();
    let criteria: [(&str, Criterion); 10] = [
        ("quaternion", criterion_1),
        ("two-relator presentation", criterion_2),
        ("negative controls", criterion_3),
        ("one-relator law", criterion_4),
        ("torsion equivalence", criterion_5),
        ("multiplier oracle", criterion_6),
        ("filtration oracles", criterion_7),
        ("permutation harness", criterion_8),
        ("structural laws", criterion_9),
        ("marks soundness", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = match f(&all) {
            Ok(detail) => format!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("FAIL {:>2} {name}: {why}", i + 1)
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    writeln!(err, "acceptance total {:?}", t.elapsed()).unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
