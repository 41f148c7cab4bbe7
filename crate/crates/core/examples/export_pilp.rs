//! The parametric system of an EF instance, and a certificate check.

use eef::pilp::{compute_phi, export_system};
use eef::{
    build_system, induced_b, solve_eef, verify_certificate, EngineConfig, Instance, SolverLimits,
};

fn main() -> Result<(), eef::Error> {
    let inst = Instance::from_numbers(&[1, 1], &[vec![1, 1], vec![1, 1]])?;
    let export = export_system(&inst)?;
    println!(
        "--- A (parametric rows shown with b = 0)\n{}",
        export.a_system
    );
    println!("--- Q\n{}", export.q_system);
    println!("--- manifest\n{}", export.manifest);

    let sys = build_system(&inst)?;
    println!(
        "rows {}, columns {}, dim Q {}, phi {}",
        sys.rows(),
        sys.columns(),
        sys.q_dimension(),
        compute_phi(&inst)
    );

    let verdict = solve_eef(&inst, &EngineConfig::default())?;
    if let Some(z) = verdict.certificate() {
        let b = induced_b(&inst, z)?;
        let ok = verify_certificate(&sys, &b, None, &SolverLimits::default())?;
        println!("certificate b = {b:?} valid: {ok}");
    }
    Ok(())
}
