//! Loading lattices from JSON documents, evaluating norms and dual norms, and writing them back.

use lattice_lab::lattice::{lattice_from_json, lattice_to_json, sigma_apply, SymmetricSeqNorm};

fn main() -> lattice_lab::Result<()> {
    let docs = [
        r#"{"dim": 3, "norm": {"kind": "lp", "p": 2}}"#,
        r#"{"dim": 3, "norm": {"kind": "lorentz_pinfty", "p": 2, "r": 1.5, "weights": [1, 0.5, 2]}}"#,
        r#"{"dim": 3, "norm": {"kind": "example54_dual", "p": 2}}"#,
        r#"{"dim": 3, "norm": {"kind": "predual_of", "norm": {"kind": "example54_dual", "p": 2}}}"#,
    ];
    let x = [1.0, -1.0, 1.0];
    for doc in docs {
        let lattice = lattice_from_json(doc)?;
        let e = lattice.eval(&x)?;
        let d = lattice.dual_eval(&x, 2000, 0)?;
        println!("{}", serde_json::to_string(&lattice_to_json(&lattice)).unwrap_or_default());
        println!("  |x| = {:.6} ({:?}), dual |x| = {:.6}", e.value, e.side, d.value);
    }

    match lattice_from_json(r#"{"dim": 2, "norm": {"kind": "lorentz_pinfty", "p": 2, "r": 3, "weights": [1, 1]}}"#) {
        Ok(_) => println!("unexpected: accepted r >= p"),
        Err(e) => println!("rejected: {e}"),
    }

    let sigma = SymmetricSeqNorm::ell(2.0)?;
    let joined = sigma_apply(&sigma, &[vec![3.0, 0.0], vec![4.0, 1.0]])?;
    println!("l2-combination of (3,0) and (4,1): {joined:?}");
    Ok(())
}
