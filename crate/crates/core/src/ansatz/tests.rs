use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lattice_hp::{select_instance, table_composition, Instance, INSTANCE_TABLE};
use crate::qubo::{build_qubo, QuboModel, DEFAULT_LAMBDA};
use crate::simulator::{init_state, run_circuit, Gate, Statevector};

fn model(n: usize) -> (Instance, QuboModel) {
    let n_h = table_composition(n).unwrap();
    let inst = select_instance(n, n_h).unwrap();
    let m = build_qubo(&inst.contact_map, n_h, DEFAULT_LAMBDA).unwrap();
    (inst, m)
}

fn random_params(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
}

/// Columns of the circuit unitary, by simulation on basis states.
fn unitary(c: &Circuit) -> DMatrix<C64> {
    let dim = 1 << c.n;
    let mut u = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let s = run_circuit(c, &Statevector::basis(c.n, k)).unwrap();
        for (r, a) in s.amplitudes().iter().enumerate() {
            u[(r, k)] = *a;
        }
    }
    u
}

/// `max |A - e^{i phi} B|` minimized over the global phase.
fn distance_up_to_phase(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let overlap: C64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x - y * phase).norm()).fold(0.0, f64::max)
}

fn expm_herm(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -t * l)));
    v * d * v.adjoint()
}

fn circuit_of(n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates(n, gates).unwrap()
}

#[test]
fn parameter_counts() {
    let (_, m) = model(10);
    for v in QaoaVariant::ALL {
        for p in [1, 2, 15] {
            assert_eq!(build_qaoa(&m, v, p).unwrap().num_params, 2 * p);
        }
    }
    for &(n, _, _) in INSTANCE_TABLE.iter() {
        assert_eq!(build_hea(n, 1).unwrap().num_params, 4 * n);
        assert_eq!(build_hea(n, 2).unwrap().num_params, 6 * n);
    }
    assert_eq!(build_qaoa(&m, QaoaVariant::X_UI, 0).unwrap_err(), AnsatzError::BadLayers(0));
    assert_eq!(build_hea(10, 3).unwrap_err(), AnsatzError::BadLayers(3));
}

#[test]
fn variant_one_gate_census() {
    let (_, m) = model(10);
    let pc = build_qaoa(&m, QaoaVariant::X_UI, 1).unwrap();
    let c = bind(&pc, &[0.3, 0.7]).unwrap().expanded();
    let mut counts = std::collections::BTreeMap::new();
    for g in c.gates() {
        *counts.entry(g.name()).or_insert(0usize) += 1;
    }
    let nz = m.quadratic_terms().len();
    let expected: std::collections::BTreeMap<_, _> =
        [("h", 10), ("rz", 10), ("rzz", nz), ("rx", 10)].into_iter().collect();
    assert_eq!(counts, expected);
}

#[test]
fn variant_ids_round_trip() {
    for id in ["qaoa-x-ui", "qaoa-xyfc-bi", "qaoa-xyfc-di", "qaoa-xyring-bi", "qaoa-xyring-di", "hea-1", "hea-2"] {
        assert_eq!(id.parse::<Variant>().unwrap().id(), id);
    }
    assert!("qaoa-x-bi".parse::<Variant>().is_err());
    assert!(QaoaVariant::new(Mixer::X, InitKind::Dicke).is_err());
    assert_eq!(QaoaVariant::new(Mixer::XyRing, InitKind::Basis).unwrap(), QaoaVariant::XYRING_BI);
}

#[test]
fn arity_is_checked() {
    let (_, m) = model(8);
    let pc = build_qaoa(&m, QaoaVariant::XYRING_BI, 3).unwrap();
    assert_eq!(bind(&pc, &[0.0; 5]).unwrap_err(), AnsatzError::ArityMismatch { expected: 6, got: 5 });
    let hea = build_hea(8, 1).unwrap();
    assert!(bind(&hea, &[0.0; 33]).is_err());
    assert!(hea.bind_body(&[0.0; 32]).is_ok());
}

#[test]
fn zero_angles_leave_the_prepared_state() {
    let (_, m) = model(8);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let probe = Statevector::from_amplitudes(
        (0..256).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    );
    for v in QaoaVariant::ALL {
        let pc = build_qaoa(&m, v, 2).unwrap();
        let body = pc.bind_body(&[0.0; 4]).unwrap();
        assert!(run_circuit(&body, &probe).unwrap().fidelity(&probe) > 1.0 - 1e-12, "{}", v.id());
        let full = run_circuit(&bind(&pc, &[0.0; 4]).unwrap(), &Statevector::zero(8)).unwrap();
        let init = init_state(8, v.init_spec(m.n_h)).unwrap();
        assert!(full.fidelity(&init) > 1.0 - 1e-10, "{}", v.id());
    }
    for layers in [1, 2] {
        let pc = build_hea(8, layers).unwrap();
        let s = run_circuit(&bind(&pc, &vec![0.0; pc.num_params]).unwrap(), &Statevector::zero(8)).unwrap();
        assert!((s.probability(0) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn weight_preserving_variants_stay_in_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let models: Vec<_> = [4, 8, 10, 12].iter().map(|&n| model(n).1).collect();
    for trial in 0..100 {
        let m = &models[trial % models.len()];
        let v = QaoaVariant::ALL[1 + trial % 4];
        let p = 1 + trial % 3;
        let pc = build_qaoa(m, v, p).unwrap();
        let params = random_params(&mut rng, 2 * p);
        let s = run_circuit(&bind(&pc, &params).unwrap(), &Statevector::zero(m.n)).unwrap();
        assert!(s.leakage(m.n_h) < 1e-10, "{} n={} leak {}", v.id(), m.n, s.leakage(m.n_h));
    }
}

#[test]
fn x_mixer_layer_is_exact() {
    let n = 4;
    let mut sum_x = DMatrix::<C64>::zeros(1 << n, 1 << n);
    for q in 0..n {
        for k in 0..1usize << n {
            sum_x[(k ^ (1 << q), k)] += C64::new(1.0, 0.0);
        }
    }
    for beta in [0.0, 0.37, 1.9, -2.4] {
        let c = circuit_of(n, (0..n).map(|q| Op::Rx(q, 2.0 * beta)).collect());
        let d = (unitary(&c) - expm_herm(&sum_x, beta)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(d < 1e-12, "beta {beta}: {d}");
    }
}

#[test]
fn decompositions_match_their_gates() {
    for t in [0.0, 0.4, -1.3, 2.9, PI] {
        for g in [Op::Rzz(0, 1, t), Op::RxxYy(0, 1, t), Op::Cry(0, 1, t), Op::Cry(1, 0, t), Op::RxxYy(1, 0, t)] {
            let direct = unitary(&circuit_of(2, vec![g.clone()]));
            let decomp = unitary(&circuit_of(2, basis_decomposition(&g)));
            assert!(distance_up_to_phase(&decomp, &direct) < 1e-12, "{g}");
        }
    }
}

#[test]
fn depth_of_small_circuits() {
    assert_eq!(depth(&circuit_of(2, vec![Op::Cnot(0, 1)])), 1);
    assert_eq!(depth(&circuit_of(2, vec![Op::Rzz(0, 1, 0.3)])), 3);
    assert_eq!(depth(&circuit_of(2, vec![Op::RxxYy(0, 1, 0.3)])), 5);
    assert_eq!(depth(&circuit_of(3, vec![Op::H(0), Op::H(1), Op::H(2)])), 1);
    assert_eq!(depth(&circuit_of(3, vec![Op::Barrier, Op::Cnot(0, 1), Op::Cz(1, 2)])), 2);
    let r = DepthReport::of(&circuit_of(2, vec![Op::Rzz(0, 1, 0.1), Op::Cz(0, 1)]));
    assert_eq!(r.two_qubit_gates, 3);
    assert_eq!(r.counts["rz"], 1);
}

#[test]
fn depth_grows_with_layers() {
    let (_, m) = model(10);
    let params = |k| vec![0.1; k];
    for v in QaoaVariant::ALL {
        let mut last = 0;
        for p in 1..=4 {
            let pc = build_qaoa(&m, v, p).unwrap();
            let d = depth(&bind(&pc, &params(2 * p)).unwrap());
            assert!(d > last, "{} p={p}", v.id());
            last = d;
        }
    }
    let d1 = depth(&bind(&build_hea(10, 1).unwrap(), &params(40)).unwrap());
    let d2 = depth(&bind(&build_hea(10, 2).unwrap(), &params(60)).unwrap());
    assert!(d2 > d1);
}

#[test]
fn depth_ordering_at_sixteen() {
    let (_, m) = model(16);
    let d = |v: QaoaVariant| depth(&bind(&build_qaoa(&m, v, 15).unwrap(), &[0.1; 30]).unwrap());
    let fc = d(QaoaVariant::XYFC_DI);
    let ring = d(QaoaVariant::XYRING_DI);
    let x = d(QaoaVariant::X_UI);
    let hea = depth(&bind(&build_hea(16, 1).unwrap(), &[0.1; 64]).unwrap());
    assert!(fc > 2000 && 2000 > ring && ring > x && x >= 10 * hea, "fc {fc} ring {ring} x {x} hea {hea}");
}

#[test]
fn ring_and_full_pairs() {
    assert_eq!(mixer_pairs(Mixer::XyRing, 5), vec![(0, 1), (2, 3), (1, 2), (3, 4), (4, 0)]);
    assert_eq!(mixer_pairs(Mixer::XyRing, 2), vec![(0, 1)]);
    assert_eq!(mixer_pairs(Mixer::XyFullyConnected, 3), vec![(0, 1), (0, 2), (1, 2)]);
    assert_eq!(mixer_pairs(Mixer::XyFullyConnected, 10).len(), 45);
}

#[test]
fn trotter_mixer_approaches_exact_mixer() {
    let n = 6;
    let n_h = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for (k, a) in amps.iter_mut().enumerate() {
            if k.count_ones() == n_h as u32 {
                *a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        Statevector::from_amplitudes(amps)
    };
    for mixer in [Mixer::XyRing, Mixer::XyFullyConnected] {
        let pairs = mixer_pairs(mixer, n);
        let exact = SectorMixer::new(n, n_h, &pairs);
        let mut errs = Vec::new();
        for beta in [0.02, 0.01] {
            let c = circuit_of(n, pairs.iter().map(|&(a, b)| Op::RxxYy(a, b, 2.0 * beta)).collect());
            let trotter = run_circuit(&c, &start).unwrap();
            let mut e = start.clone();
            exact.apply(&mut e, beta);
            errs.push(1.0 - trotter.fidelity(&e));
        }
        // Infidelity of a first-order product formula falls as beta^4.
        assert!(errs[0] < 1e-4 && errs[1] < errs[0] / 8.0, "{mixer:?} {errs:?}");
    }
    // One pair has nothing to commute with.
    let single = SectorMixer::new(2, 1, &[(0, 1)]);
    let s0 = Statevector::basis(2, 1);
    let mut e = s0.clone();
    single.apply(&mut e, 0.8);
    let t = run_circuit(&circuit_of(2, vec![Op::RxxYy(0, 1, 1.6)]), &s0).unwrap();
    assert!(t.fidelity(&e) > 1.0 - 1e-12);
}

#[test]
fn exact_mixer_simulation_is_normalized_and_in_sector() {
    let (_, m) = model(8);
    let s = simulate_exact_mixer(&m, QaoaVariant::XYRING_DI, &[0.3, 0.5, 0.9, 0.2]).unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-12);
    assert!(s.leakage(m.n_h) < 1e-12);
    assert!(simulate_exact_mixer(&m, QaoaVariant::X_UI, &[0.1, 0.2]).is_err());
    assert!(simulate_exact_mixer(&m, QaoaVariant::XYFC_BI, &[0.1]).is_err());
}

#[test]
fn prep_prefix_is_parameter_free() {
    let (_, m) = model(8);
    let pc = build_qaoa(&m, QaoaVariant::XYFC_DI, 2).unwrap();
    assert!(pc.prep_len > m.n_h);
    let prep = run_circuit(&pc.prep_circuit(), &Statevector::zero(8)).unwrap();
    assert!(prep.fidelity(&init_state(8, InitSpec::Dicke(m.n_h)).unwrap()) > 1.0 - 1e-10);
    let hea = build_hea(8, 2).unwrap();
    assert_eq!(hea.prep_len, 0);
    assert_eq!(hea.init, InitSpec::Basis(0));
}
