use qroute::formulation::{build_hubo, build_qubo, decode, default_penalty};
use qroute::instances::canonical;
use qroute::oracle::{brute_force_min, enumerate_routes, penalty_gate};
use qroute::problem::prepare;

fn main() {
    for k in 1..=4 {
        let raw = canonical(k).unwrap();
        let prep = prepare(&raw).unwrap();
        let alpha = default_penalty(&prep.instance).unwrap();
        let hubo = build_hubo(&prep.instance, &prep.mask, alpha).unwrap();
        let qubo = build_qubo(&prep.instance, &prep.mask, alpha).unwrap();
        let routes = enumerate_routes(&prep.instance).unwrap();
        println!(
            "instance {k}: internal={} T={} alpha={} hubo_qubits={} qubo_qubits={} route_opt={} ties={} route={}",
            prep.instance.internal_count(),
            prep.instance.deadline(),
            alpha,
            hubo.qubit_count(),
            qubo.qubit_count(),
            routes.value,
            routes.tie_count,
            routes.route.as_ref().unwrap().display(&prep.instance),
        );
        println!("  hubo terms={} degree={}", hubo.poly().term_count(), hubo.poly().degree());
        println!("  qubo terms={} degree={}", qubo.poly().term_count(), qubo.poly().degree());
        let t0 = std::time::Instant::now();
        match penalty_gate(&hubo) {
            Ok(()) => {
                let b = brute_force_min(&hubo).unwrap();
                println!(
                    "  hubo gate OK in {:?}: energy={} ties={} decode={}",
                    t0.elapsed(),
                    b.value,
                    b.tie_count,
                    match decode(b.assignment, &hubo) {
                        qroute::formulation::Decoded::Feasible(r) => r.display(&prep.instance),
                        qroute::formulation::Decoded::Infeasible(rep) =>
                            format!("INFEASIBLE {rep:?}"),
                    }
                );
            }
            Err(e) => println!("  hubo gate FAILED: {e}"),
        }
        if qubo.qubit_count() <= 24 {
            let t0 = std::time::Instant::now();
            match penalty_gate(&qubo) {
                Ok(()) => {
                    let b = brute_force_min(&qubo).unwrap();
                    println!(
                        "  qubo gate OK in {:?}: energy={} ties={}",
                        t0.elapsed(),
                        b.value,
                        b.tie_count
                    );
                }
                Err(e) => println!("  qubo gate FAILED: {e}"),
            }
        } else {
            println!("  qubo too wide for brute force");
        }
    }
}
