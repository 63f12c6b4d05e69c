//! Command implementations. Each returns the process exit code:
//! 0 = success (decide: kahler), 1 = negative outcome (decide/deform:
//! not kahler, verify: failed checks), 2 = input or limit error,
//! 3 = no convergence (deform).

use crate::docs::{
    reproducible_timestamp, surd_document, CertificateDocument, CmDocument, CrossCheckDocument,
    DocError, GroupInputDocument, Provenance, StructureDocument,
};
use kahler_core::cm::{cm_complex_structure, cross_check_with_decider, CyclotomicAction};
use kahler_core::decide::{decide_kahler, verify_certificate, Decision};
use kahler_core::matgroup::FiniteMatrixGroup;
use kahler_core::siegel::{deform_to_polarisable, SiegelError};
use std::path::Path;
use std::sync::Arc;

pub const DEFAULT_MAX_ORDER: usize = 20000;

fn read_group(
    path: &Path,
    max_order_flag: Option<usize>,
) -> Result<Arc<FiniteMatrixGroup>, DocError> {
    let text = std::fs::read_to_string(path)?;
    let doc: GroupInputDocument = serde_json::from_str(&text)?;
    let max_order = max_order_flag
        .or(doc.max_order)
        .unwrap_or(DEFAULT_MAX_ORDER);
    doc.to_group(max_order)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), DocError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, DocError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn cmd_decide(
    input: &Path,
    seed: u64,
    tol: f64,
    max_order: Option<usize>,
    output: Option<&Path>,
) -> i32 {
    let group = match read_group(input, max_order) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cert = match decide_kahler(&group, seed, tol) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result: Result<(), DocError> = (|| {
        let doc = CertificateDocument::from_certificate(&cert, group.dimension())?;
        emit(output, &to_json(&doc)?)
    })();
    if let Err(e) = result {
        eprintln!("error: {e}");
        return 2;
    }
    match cert.decision {
        Decision::Kahler => 0,
        Decision::NotKahler => 1,
    }
}

pub fn cmd_verify(cert_path: &Path, input: &Path, tol: f64) -> i32 {
    let group = match read_group(input, None) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let doc: CertificateDocument = match std::fs::read_to_string(cert_path)
        .map_err(DocError::from)
        .and_then(|text| serde_json::from_str(&text).map_err(DocError::from))
    {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cert = match doc.to_certificate() {
        Ok(c) => c,
        Err(DocError::Inconsistent(msg)) => {
            println!(
                "{:<36} {:>12} {:>6} FAIL",
                "document_consistency", "-", "exact"
            );
            eprintln!("certificate inconsistent: {msg}");
            return 1;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = verify_certificate(&group, &cert, tol);
    println!("{:<36} {:>12} {:>6} result", "check", "residual", "kind");
    for check in &report.checks {
        println!(
            "{:<36} {:>12.3e} {:>6} {}",
            check.name,
            check.residual,
            if check.exact { "exact" } else { "num" },
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    if report.pass() {
        0
    } else {
        1
    }
}

pub fn cmd_deform(
    input: &Path,
    steps: usize,
    seed: u64,
    tol: f64,
    csv: Option<&Path>,
    output: Option<&Path>,
) -> i32 {
    let group = match read_group(input, None) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cert = match decide_kahler(&group, seed, tol) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if cert.decision != Decision::Kahler {
        eprintln!("group is not kahler: {:?}", cert.witness);
        return 1;
    }
    let j0 = cert.j.as_ref().expect("kahler certificate carries J");
    let omega0 = cert
        .omega
        .as_ref()
        .expect("kahler certificate carries omega");
    let path = match deform_to_polarisable(&group, j0, omega0, steps, seed) {
        Ok(p) => p,
        Err(SiegelError::NoConvergence(iters)) => {
            eprintln!("error: barycenter iteration did not converge in {iters} iterations");
            return 3;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result: Result<(), DocError> = (|| {
        if let Some(csv_path) = csv {
            std::fs::write(csv_path, path.to_csv())?;
        }
        let doc =
            CertificateDocument::from_certificate(&path.endpoint_certificate, group.dimension())?;
        emit(output, &to_json(&doc)?)
    })();
    if let Err(e) = result {
        eprintln!("error: {e}");
        return 2;
    }
    0
}

pub fn cmd_cm(order: u32, output: Option<&Path>) -> i32 {
    let action = match CyclotomicAction::new(order) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result: Result<(), DocError> = (|| {
        let cm = cm_complex_structure(&action)
            .map_err(|e| DocError::Schema(format!("structure construction failed: {e}")))?;
        let group = action.group();
        let cert = decide_kahler(&group, 0, 1e-9)
            .map_err(|e| DocError::Schema(format!("decision failed: {e}")))?;
        let report = cross_check_with_decider(&action, &cert)
            .map_err(|e| DocError::Schema(format!("cross-check failed: {e}")))?;
        let doc = CmDocument {
            order: action.order(),
            dimension: action.dimension(),
            cm_type: action.cm_type().to_vec(),
            group: GroupInputDocument::from_group(
                &group,
                Some(format!("cyclotomic_{}", action.order())),
            ),
            j: StructureDocument::from_structure(&cm.structure),
            surd_presentation: cm.exact.as_ref().map(|s| surd_document(&s.coeff, s.surd)),
            cross_check: CrossCheckDocument {
                decider_decision: match report.decider_decision {
                    Decision::Kahler => "kahler".into(),
                    Decision::NotKahler => "not_kahler".into(),
                },
                both_kahler: report.both_kahler,
                decider_signature: report.decider_signature,
                cm_signature: report.cm_signature,
                signatures_agree: report.signatures_agree,
                siegel_distance: report.siegel_distance,
            },
            provenance: Provenance {
                seed: 0,
                tool_version: env!("CARGO_PKG_VERSION").into(),
                timestamp: reproducible_timestamp(),
            },
        };
        emit(output, &to_json(&doc)?)
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
