//! `shgo compute`: parse molecule + basis, build shells, evaluate the
//! requested integral tensor with the chosen engine, and persist it.

use crate::{ComputeArgs, EngineChoice, Kind};
use shgo_core::engine::{self, EngineOptions, Shell};
use shgo_core::error::Result;
use shgo_core::io;
use shgo_core::tensor::{IntegralTensor, TensorMeta};
use std::time::Instant;

pub fn cmd_compute(args: &ComputeArgs) -> Result<()> {
    let mol_text = std::fs::read_to_string(&args.molecule)?;
    let basis_text = std::fs::read_to_string(&args.basis)?;
    let molecule = io::parse_molecule(&mol_text)?;
    let basis = io::parse_basis(&basis_text)?;
    let shells = io::build_shells(&molecule, &basis)?;
    let nuclei = molecule.nuclei();
    let opts = EngineOptions {
        screening_threshold: if args.no_screening {
            None
        } else {
            EngineOptions::default().screening_threshold
        },
    };
    log::info!(
        "{} atoms, {} shells, basis dimension {}",
        molecule.atoms.len(),
        shells.len(),
        engine::basis_dimension(&shells)
    );

    let started = Instant::now();
    let (dims, data) = in_pool(args.threads, || -> Result<_> {
        Ok(match (args.kind, args.engine) {
            (Kind::Overlap, EngineChoice::Shgo) => {
                flatten_matrix(engine::overlap_matrix(&shells, &opts))
            }
            (Kind::Nuclear, EngineChoice::Shgo) => {
                flatten_matrix(engine::nuclear_matrix(&shells, &nuclei, &opts))
            }
            (Kind::Overlap, EngineChoice::Cgto) => {
                flatten_matrix(assemble_cgto(&shells, |a, b| {
                    shgo_core::cgto::overlap_block(a, b)
                }))
            }
            (Kind::Nuclear, EngineChoice::Cgto) => {
                flatten_matrix(assemble_cgto(&shells, |a, b| {
                    shgo_core::cgto::nuclear_block(a, b, &nuclei)
                }))
            }
            (Kind::Eri, EngineChoice::Shgo) => {
                let t = engine::eri::eri_tensor(&shells, &opts, true);
                (vec![t.dim; 4], t.data)
            }
            (Kind::Eri, EngineChoice::Cgto) => eri_tensor_cgto(&shells),
        })
    })?;
    let elapsed = started.elapsed();

    let meta = TensorMeta {
        basis: args
            .basis
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "basis".to_string()),
        engine: args.engine.as_str().to_string(),
        kind: args.kind.as_str().to_string(),
        screening: opts.screening_threshold,
    };
    let frobenius = data.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tensor = IntegralTensor::new(dims, data, meta)?;
    tensor.write(&args.out)?;

    println!(
        "kind={} engine={} dims={:?} frobenius_norm={:.12e} wall_ms={:.3}",
        args.kind.as_str(),
        args.engine.as_str(),
        tensor.dims,
        frobenius,
        elapsed.as_secs_f64() * 1e3,
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

/// Runs `work` inside a dedicated rayon pool when a thread count is given,
/// in the global pool otherwise.
pub fn in_pool<T: Send>(threads: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => work(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(work),
    }
}

fn flatten_matrix(m: Vec<Vec<f64>>) -> (Vec<usize>, Vec<f64>) {
    let n = m.len();
    let mut flat = Vec::with_capacity(n * n);
    for row in &m {
        flat.extend_from_slice(row);
    }
    (vec![n, n], flat)
}

/// Symmetric matrix assembly over Cartesian-reference blocks, mirroring the
/// block layout of the fast engine's assemblers.
fn assemble_cgto(
    shells: &[Shell],
    block: impl Fn(&Shell, &Shell) -> Vec<Vec<f64>> + Sync,
) -> Vec<Vec<f64>> {
    let n = engine::basis_dimension(shells);
    let off = engine::shell_offsets(shells);
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..shells.len() {
        for j in i..shells.len() {
            let blk = block(&shells[i], &shells[j]);
            for (a, row) in blk.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    out[off[i] + a][off[j] + b] = v;
                    out[off[j] + b][off[i] + a] = v;
                }
            }
        }
    }
    out
}

/// Full repulsion tensor through the Cartesian reference path. Every quartet
/// is evaluated independently — this is the slow, trusted route.
fn eri_tensor_cgto(shells: &[Shell]) -> (Vec<usize>, Vec<f64>) {
    let n = engine::basis_dimension(shells);
    let off = engine::shell_offsets(shells);
    let mut flat = vec![0.0; n * n * n * n];
    for a in 0..shells.len() {
        for b in 0..shells.len() {
            for c in 0..shells.len() {
                for d in 0..shells.len() {
                    let blk =
                        shgo_core::cgto::eri_block(&shells[a], &shells[b], &shells[c], &shells[d]);
                    for (ia, ba) in blk.iter().enumerate() {
                        for (ib, bb) in ba.iter().enumerate() {
                            for (ic, bc) in bb.iter().enumerate() {
                                for (id, &v) in bc.iter().enumerate() {
                                    let (i, j, k, l) =
                                        (off[a] + ia, off[b] + ib, off[c] + ic, off[d] + id);
                                    flat[((i * n + j) * n + k) * n + l] = v;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (vec![n; 4], flat)
}
