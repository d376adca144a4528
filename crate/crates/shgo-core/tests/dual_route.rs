//! End-to-end library test: parse a molecule and basis from text, build the
//! shell list, evaluate full matrices and tensors with both integral routes,
//! and persist/reload the result. This is the whole public API in one pass,
//! at the contracted, multi-shell level the unit tests don't reach.

use shgo_core::engine::{self, EngineOptions, Shell};
use shgo_core::tensor::{IntegralTensor, TensorMeta};
use shgo_core::{cgto, io};

const MOLECULE: &str = "\
3
units=bohr water-like toy geometry
O 0.0 0.0 0.2217
H 0.0 1.4309 -0.8867
H 0.0 -1.4309 -0.8867
";

const BASIS: &str = "\
# minimal toy basis with shells up to d
H
s 2
1.30 0.60
0.30 0.55
O
s 2
5.10 0.70
1.10 0.40
p 1
1.20 1.0
d 1
0.85 1.0
";

fn system() -> (Vec<Shell>, Vec<engine::Center>) {
    let mol = io::parse_molecule(MOLECULE).expect("molecule parses");
    let basis = io::parse_basis(BASIS).expect("basis parses");
    let shells = io::build_shells(&mol, &basis).expect("every element is covered");
    let nuclei = mol.nuclei();
    (shells, nuclei)
}

fn exact() -> EngineOptions {
    EngineOptions {
        screening_threshold: None,
    }
}

#[test]
fn shell_list_layout_matches_input() {
    let (shells, nuclei) = system();
    // atom-major, element shells in input order: O(s,p,d) then H(s) twice
    assert_eq!(
        shells.iter().map(|s| s.l).collect::<Vec<_>>(),
        vec![0, 1, 2, 0, 0]
    );
    assert_eq!(engine::basis_dimension(&shells), 1 + 3 + 5 + 1 + 1);
    assert_eq!(engine::shell_offsets(&shells), vec![0, 1, 4, 9, 10]);
    assert_eq!(nuclei.len(), 3);
    assert_eq!(nuclei[0].charge, 8.0);
}

#[test]
fn one_electron_matrices_agree_across_routes() {
    let (shells, nuclei) = system();
    let opts = exact();
    let n = engine::basis_dimension(&shells);
    let off = engine::shell_offsets(&shells);

    let fast_s = engine::overlap_matrix(&shells, &opts);
    let fast_v = engine::nuclear_matrix(&shells, &nuclei, &opts);

    // assemble the reference matrices block by block
    let mut ref_s = vec![vec![0.0; n]; n];
    let mut ref_v = vec![vec![0.0; n]; n];
    for i in 0..shells.len() {
        for j in 0..shells.len() {
            let bs = cgto::overlap_block(&shells[i], &shells[j]);
            let bv = cgto::nuclear_block(&shells[i], &shells[j], &nuclei);
            for (a, (rs, rv)) in bs.iter().zip(&bv).enumerate() {
                for (b, (&vs, &vv)) in rs.iter().zip(rv).enumerate() {
                    ref_s[off[i] + a][off[j] + b] = vs;
                    ref_v[off[i] + a][off[j] + b] = vv;
                }
            }
        }
    }

    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            assert!(
                (fast_s[i][j] - ref_s[i][j]).abs() < 1e-11,
                "overlap ({i},{j}): {} vs {}",
                fast_s[i][j],
                ref_s[i][j]
            );
            assert!(
                (fast_v[i][j] - ref_v[i][j]).abs() < 1e-10 * ref_v[i][j].abs().max(1.0),
                "nuclear ({i},{j}): {} vs {}",
                fast_v[i][j],
                ref_v[i][j]
            );
            worst = worst.max((fast_s[i][j] - fast_s[j][i]).abs());
            // diagonal of the overlap is exactly normalized contractions
            if i == j {
                assert!(
                    (fast_s[i][i] - 1.0).abs() < 1e-12,
                    "S[{i},{i}] = {}",
                    fast_s[i][i]
                );
            }
        }
    }
    assert!(
        worst < 1e-14,
        "overlap must be symmetric, worst asymmetry {worst}"
    );
}

#[test]
fn screening_changes_nothing_beyond_its_threshold() {
    let (shells, nuclei) = system();
    let screened = engine::nuclear_matrix(&shells, &nuclei, &EngineOptions::default());
    let unscreened = engine::nuclear_matrix(&shells, &nuclei, &exact());
    for (rs, ru) in screened.iter().zip(&unscreened) {
        for (&a, &b) in rs.iter().zip(ru) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn repulsion_tensor_mirror_equals_independent_evaluation() {
    let (shells, _) = system();
    let opts = exact();
    let mirrored = engine::eri::eri_tensor(&shells, &opts, true);
    let independent = engine::eri::eri_tensor(&shells, &opts, false);
    assert_eq!(mirrored.dim, independent.dim);
    for (a, b) in mirrored.data.iter().zip(&independent.data) {
        assert!((a - b).abs() < 1e-11, "{a} vs {b}");
    }
}

#[test]
fn tensor_file_round_trips_bitwise() {
    let (shells, nuclei) = system();
    let m = engine::nuclear_matrix(&shells, &nuclei, &exact());
    let n = m.len();
    let data: Vec<f64> = m.into_iter().flatten().collect();
    let t = IntegralTensor::new(
        vec![n, n],
        data,
        TensorMeta {
            basis: "toy".into(),
            engine: "shgo".into(),
            kind: "nuclear".into(),
            screening: None,
        },
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.tensor");
    t.write(&path).unwrap();
    let back = IntegralTensor::read(&path).unwrap();
    assert_eq!(t, back);

    // corruption cannot slip through: flip one payload byte
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x01;
    std::fs::write(&path, &bytes).unwrap();
    assert!(
        IntegralTensor::read(&path).is_err(),
        "checksum must catch the flip"
    );
}
