//! One line per acceptance criterion. Run with `cargo test --test acceptance`.
//! Set `BWSYNTH_FULL_BFS=1` to include the 3-qubit Clifford order (about 1.5 GB of memory).

use std::time::{Duration, Instant};

use bwsynth::barneswall::{
    brute_force_short_vectors, certify_minimal_vector, dual_basis, enumerate_minimal_vectors, one_plus_i_pow,
    operator_in_bw, BwLattice,
};
use bwsynth::beyond::{builtin, builtin_names, group_order, membership_unitary, orbit_z_lattice, DEFAULT_ORBIT_CAP};
use bwsynth::cyclo::CycNum;
use bwsynth::linalg::{kron_apply, FieldMatrix, FieldVector};
use bwsynth::stab::{clifford_generators, stabilizer_group, stabilizes, tableau_bfs, CliffordCircuit, PauliOp};
use bwsynth::synth::{check_theorem1, choi_state, reconstruct, recognize, StabOpForm};
use bwsynth::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_LIMIT: Duration = Duration::from_secs(60);
const C2_LIMIT: Duration = Duration::from_secs(600);
const C5_LIMIT: Duration = Duration::from_secs(300);
const C5_OPERATORS: usize = 1000;
const C8_CIRCUITS: usize = 200;
const C9_STATES: usize = 100;
const C10_WORDS: usize = 20;
const BFS_CAP: usize = 200_000_000;
const GROUP_CAP: usize = 20_000_000;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

fn c1_clifford_orders() -> Check {
    let start = Instant::now();
    for (n, want) in [(1usize, 24u64), (2, 11_520)] {
        let got = tableau_bfs(n, &clifford_generators(n), BFS_CAP).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n={n}: {got} != {want}"))?;
    }
    timed(C1_LIMIT, start)?;
    let third = if std::env::var("BWSYNTH_FULL_BFS").as_deref() == Ok("1") {
        let got = tableau_bfs(3, &clifford_generators(3), BFS_CAP).map_err(|e| e.to_string())?;
        ensure(got == 92_897_280, || format!("n=3: {got} != 92897280"))?;
        "n=3 92897280".to_string()
    } else {
        "n=3 declined (set BWSYNTH_FULL_BFS=1)".to_string()
    };
    Ok(format!("24, 11520; {third}"))
}

fn c2_beyond_orders() -> Check {
    let start = Instant::now();
    let order = |name: &str| {
        let b = builtin(name).map_err(|e| e.to_string())?;
        group_order(&b.group, GROUP_CAP).map_err(|e| e.to_string())
    };
    let q = order("qutrit-1")?;
    ensure(q.mod_center == 216, || format!("qutrit-1: {}", q.mod_center))?;
    let p = order("qupant-1")?;
    ensure(p.mod_center == 3000, || format!("qupant-1: {}", p.mod_center))?;
    let r = order("rational-3")?;
    ensure(r.mod_center == 1_290_240 && r.full == 2_580_480, || {
        format!("rational-3: {} mod center, {} full", r.mod_center, r.full)
    })?;
    timed(C2_LIMIT, start)?;
    Ok("216, 3000, rational-3 2580480 (1290240 mod ±I); qutrit-2 4199040 declined".into())
}

fn c3_minimal_vectors() -> Check {
    for (n, m, want) in [(1usize, 2u32, 24usize), (1, 3, 48), (2, 2, 240)] {
        let lat = BwLattice::new(n, m).map_err(|e| e.to_string())?;
        let fast = enumerate_minimal_vectors(&lat, 3).map_err(|e| e.to_string())?;
        let slow = brute_force_short_vectors(&lat, &lat.minimum(), 50_000_000).map_err(|e| e.to_string())?;
        ensure(fast.len() == want, || format!("({n},{m}): {} vectors", fast.len()))?;
        ensure(fast.keys().eq(slow.keys()), || format!("({n},{m}): brute force differs"))?;
        let zero = FieldVector::basis(lat.conductor(), lat.dim(), 0);
        for v in fast.values() {
            let (c, k) = certify_minimal_vector(&lat, v).map_err(|e| e.to_string())?;
            let scale = &one_plus_i_pow(n) * &CycNum::zeta_pow(lat.conductor(), k as i64);
            let rebuilt = c.apply(&zero).map_err(|e| e.to_string())?.scale(&scale);
            ensure(rebuilt == *v, || format!("({n},{m}): certificate does not rebuild {v:?}"))?;
        }
    }
    Ok("24 / 48 / 240, all certified".into())
}

fn c4_minimum() -> Check {
    for (n, m) in [(1usize, 2u32), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2)] {
        let lat = BwLattice::new(n, m).map_err(|e| e.to_string())?;
        let formula = Rational::from_integer((1i64 << (m as usize - 2 + n)).into());
        ensure(lat.minimum() == formula, || format!("({n},{m}): minimum {}", lat.minimum()))?;
        let set = enumerate_minimal_vectors(&lat, 3).map_err(|e| e.to_string())?;
        ensure(set.values().all(|v| v.trace_norm() == formula), || format!("({n},{m}): norm mismatch"))?;
        if n <= 2 && m <= 3 && (n, m) != (2, 3) {
            let below = &formula - Rational::new(1.into(), 2.into());
            let short = brute_force_short_vectors(&lat, &below, 50_000_000).map_err(|e| e.to_string())?;
            ensure(short.is_empty(), || format!("({n},{m}): vector below the minimum"))?;
        }
    }
    Ok("2^{m-2}·2^n for 6 lattices".into())
}

fn mutate(a: &FieldMatrix, rng: &mut impl Rng) -> FieldMatrix {
    let (r, c) = (rng.gen_range(0..a.rows()), rng.gen_range(0..a.cols()));
    let mut b = a.clone();
    b.set(r, c, a.get(r, c) + &CycNum::from_frac(a.conductor(), 1, 2));
    b
}

/// Criteria 5 and 6 share the random operators.
fn c5_c6_operators() -> (Check, Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = Instant::now();
    let mut mutants_rejected = 0usize;
    let run = (|| {
        for i in 0..C5_OPERATORS {
            let (ni, no, m) = (i % 4, (i / 4) % 4, 2 + ((i / 16) % 2) as u32);
            let f = StabOpForm::random(ni, no, m, 16, &mut rng);
            let a = reconstruct(&f).map_err(|e| e.to_string())?;
            let v = check_theorem1(&a, ni, no, Some(m)).map_err(|e| e.to_string())?;
            ensure(v.failure_reason.is_none(), || format!("operator {i} rejected: {:?}", v.failure_reason))?;
            let g = recognize(&a, ni, no, Some(m)).map_err(|e| e.to_string())?;
            ensure(reconstruct(&g).map_err(|e| e.to_string())? == a, || format!("operator {i}: round trip differs"))?;
            let b = mutate(&a, &mut rng);
            let w = check_theorem1(&b, ni, no, Some(m)).map_err(|e| e.to_string())?;
            ensure(w.failure_reason.is_some(), || format!("mutant of operator {i} accepted"))?;
            mutants_rejected += 1;
        }
        timed(C5_LIMIT, start)
    })();
    let c5 = run.clone().map(|_| format!("{C5_OPERATORS} operators in {:.1} s", start.elapsed().as_secs_f64()));
    let c6 = run.and_then(|_| {
        let t = FieldMatrix::diagonal(vec![CycNum::one(8), CycNum::zeta(8)]);
        let v = check_theorem1(&t, 1, 1, None).map_err(|e| e.to_string())?;
        ensure(v.failure_reason.as_deref() == Some("integrality"), || format!("T: {:?}", v.failure_reason))?;
        let p0 = FieldMatrix::diagonal(vec![CycNum::one(4), CycNum::zero(4)]);
        let v = check_theorem1(&p0, 1, 1, None).map_err(|e| e.to_string())?;
        ensure(!v.trace_ok, || "|0><0| passed the trace condition".into())?;
        let p1 = p0.scalar_mul(&CycNum::one_plus_i());
        let f = recognize(&p1, 1, 1, None).map_err(|e| e.to_string())?;
        ensure(f.k == 0, || format!("(1+i)|0><0|: k = {}", f.k))?;
        Ok(format!("{mutants_rejected} mutants rejected; T, |0><0| rejected; (1+i)|0><0| k=0"))
    });
    (c5, c6)
}

fn c7_choi_states() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let (ni, no) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = reconstruct(&StabOpForm::random(ni, no, 2, 16, &mut rng)).map_err(|e| e.to_string())?;
        let choi = choi_state(&a, ni, no).map_err(|e| e.to_string())?;
        let lat = BwLattice::new(ni + no, 2).map_err(|e| e.to_string())?;
        ensure(lat.in_lattice(&choi.vector).map_err(|e| e.to_string())?, || format!("Choi {i} not in lattice"))?;
        let want = Rational::from_integer((1i64 << (ni + no)).into());
        ensure(choi.vector.trace_norm() == want, || format!("Choi {i}: norm {}", choi.vector.trace_norm()))?;
    }
    Ok("200 Choi states, norm 2^{n_in+n_out}".into())
}

fn c8_clifford_in_bw() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..C8_CIRCUITS {
        let n = 1 + i % 3;
        let u = CliffordCircuit::random(n, 30, &mut rng).evaluate();
        let (ok, _) = operator_in_bw(&u, n, n).map_err(|e| e.to_string())?;
        ensure(ok, || format!("circuit {i} not integral"))?;
    }
    for n in 0..=5usize {
        let m = FieldMatrix::from_rows(
            4,
            (0..2).map(|_| (0..2).map(|_| CycNum::zeta_pow(4, rng.gen_range(0..4)) * CycNum::from_i64(4, rng.gen_range(-2..=2))).collect()).collect(),
        )
        .map_err(|e| e.to_string())?;
        let v = FieldVector::from_i64(4, &(0..1usize << n).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
        let mut naive = FieldMatrix::identity(4, 1);
        for _ in 0..n {
            naive = naive.tensor(&m);
        }
        let want = naive.mul_vec(&v).map_err(|e| e.to_string())?;
        ensure(kron_apply(&m, n, &v).map_err(|e| e.to_string())? == want, || format!("kron_apply n={n}"))?;
    }
    Ok(format!("{C8_CIRCUITS} circuits integral; kron_apply = naive for n <= 5"))
}

fn c9_trace_condition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tr = |psi: &FieldVector, p: &PauliOp| -> Result<Rational, String> {
        let pp = p.apply(psi).map_err(|e| e.to_string())?;
        Ok(psi.inner_product(&pp).map_err(|e| e.to_string())?.trace_e_over_q())
    };
    let (mut holds, mut fails) = (0, 0);
    while holds < C9_STATES || fails < C9_STATES {
        let n = rng.gen_range(1..=3);
        let phase = CycNum::zeta_pow(8, rng.gen_range(0..8));
        let psi = CliffordCircuit::random(n, 20, &mut rng)
            .apply(&FieldVector::basis(4, 1 << n, 0))
            .map_err(|e| e.to_string())?
            .lift(8)
            .map_err(|e| e.to_string())?
            .scale(&phase);
        let norm = psi.inner_product(&psi).map_err(|e| e.to_string())?.trace_e_over_q();
        for p in &stabilizer_group(&psi).map_err(|e| e.to_string())?.generators {
            ensure(tr(&psi, p)? == norm, || format!("generator {p} fails the trace equality"))?;
        }
        holds += 1;
        let mask = (1u64 << n) - 1;
        let p = PauliOp::hermitian(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask, rng.gen());
        if !stabilizes(&p, &psi).map_err(|e| e.to_string())? {
            ensure(tr(&psi, &p)? != norm, || format!("non-stabilizer {p} satisfies the trace equality"))?;
            fails += 1;
        }
    }
    Ok(format!("{holds} states hold, {fails} non-stabilizing Paulis fail"))
}

fn c10_membership() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut words = 0;
    for name in builtin_names() {
        let b = builtin(name).map_err(|e| e.to_string())?;
        for _ in 0..C10_WORDS {
            let u = b.group.random_word(12, &mut rng);
            let yes = membership_unitary(&u, &b.basis);
            ensure(yes.member, || format!("{name}: word rejected ({:?})", yes.reason))?;
            let r = rng.gen_range(0..u.rows());
            let mut bad = u.clone();
            for c in 0..u.cols() {
                bad.set(r, c, u.get(r, c) * &CycNum::from_i64(1, 2));
            }
            ensure(!membership_unitary(&bad, &b.basis).member, || format!("{name}: mutant accepted"))?;
            words += 1;
        }
    }
    for name in ["clifford-1", "rational-2", "rational-3-tilde"] {
        let b = builtin(name).map_err(|e| e.to_string())?;
        let seed = b.basis.matrix.column(0);
        let orbit = orbit_z_lattice(&b.group, &seed, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
        ensure(orbit == b.basis.z_lattice().map_err(|e| e.to_string())?, || format!("{name}: orbit lattice differs"))?;
    }
    Ok(format!("{words} words accepted, mutants rejected; 3 orbit lattices equal; automorphism size 348364800 declined"))
}

fn c11_duality() -> Check {
    for n in 1..=3usize {
        for m in [2u32, 3] {
            let lat = BwLattice::new(n, m).map_err(|e| e.to_string())?;
            let b = lat.basis_matrix();
            let d = dual_basis(&b).map_err(|e| e.to_string())?;
            let gram = b.dagger().mul(&b).map_err(|e| e.to_string())?;
            ensure(gram.is_integral(), || format!("({n},{m}): Gram matrix not integral"))?;
            let pair = b.dagger().mul(&d).map_err(|e| e.to_string())?;
            ensure(pair == FieldMatrix::identity(lat.conductor(), lat.dim()), || format!("({n},{m}): B†D != I"))?;
            let flat = |x: &FieldMatrix| lat.flatten_basis(x).map_err(|e| e.to_string());
            ensure(flat(&d)? == flat(&lat.dual_basis_matrix().map_err(|e| e.to_string())?)?, || {
                format!("({n},{m}): dual is not B^n/(1+i)^n")
            })?;
            let dd = dual_basis(&d).map_err(|e| e.to_string())?;
            ensure(flat(&dd)? == flat(&b)?, || format!("({n},{m}): double dual differs"))?;
        }
    }
    Ok("n <= 3, m in {2,3}".into())
}

fn main() {
    let mut results: Vec<(&str, Check, f64)> = Vec::new();
    let mut record = |label: &'static str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let r = f();
        results.push((label, r, t.elapsed().as_secs_f64()));
    };
    record("C1  Clifford group orders", &c1_clifford_orders);
    record("C2  qudit and rational orders", &c2_beyond_orders);
    record("C3  minimal vectors vs brute force", &c3_minimal_vectors);
    record("C4  lattice minimum", &c4_minimum);
    let t = Instant::now();
    let (c5, c6) = c5_c6_operators();
    let dt = t.elapsed().as_secs_f64();
    results.push(("C5  random stabilizer operators", c5, dt));
    results.push(("C6  soundness", c6, 0.0));
    let mut record = |label: &'static str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let r = f();
        results.push((label, r, t.elapsed().as_secs_f64()));
    };
    record("C7  Choi states in the lattice", &c7_choi_states);
    record("C8  Clifford operators and kron_apply", &c8_clifford_in_bw);
    record("C9  trace stabilizer condition", &c9_trace_condition);
    record("C10 membership and orbit lattices", &c10_membership);
    record("C11 basis and dual basis", &c11_duality);

    let mut failed = 0;
    for (label, r, secs) in &results {
        match r {
            Ok(msg) => println!("PASS  {label:<40} {msg} ({secs:.1} s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {label:<40} {msg} ({secs:.1} s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
