//! Named example rings for the CLI and the test corpus.

use crate::charclass::{ci_to_ring, CompleteIntersection};
use crate::ring::{
    build_product, build_projective_space, build_six_manifold, build_sphere, CohomologyRing,
    CubicForm,
};

/// Names accepted by `--builtin`. `sixfold:b2=..,b3=..[,cubic=fermat|lefschetz]`
/// is parameterized.
pub const BUILTIN_NAMES: &[&str] = &[
    "p1",
    "p2",
    "p3",
    "p4",
    "p1xp1",
    "p1xp2",
    "s3",
    "s3xs3",
    "quintic",
    "cubic-threefold",
    "quartic-threefold",
    "u5-exterior",
    "sixfold:...",
];

/// Build a named example ring.
pub fn build(name: &str) -> Result<CohomologyRing, String> {
    match name {
        "p1" => Ok(build_projective_space(1)),
        "p2" => Ok(build_projective_space(2)),
        "p3" => Ok(build_projective_space(3)),
        "p4" => Ok(build_projective_space(4)),
        "p1xp1" => Ok(build_product(&build_projective_space(1), &build_projective_space(1))),
        "p1xp2" => Ok(build_product(&build_projective_space(1), &build_projective_space(2))),
        "s3" => Ok(build_sphere(3)),
        "s3xs3" => Ok(build_product(&build_sphere(3), &build_sphere(3))),
        "quintic" => hypersurface_ring(5),
        "cubic-threefold" => hypersurface_ring(3),
        "quartic-threefold" => hypersurface_ring(4),
        "u5-exterior" => crate::ring::build_exterior(&[1, 3, 5, 7, 9]).map_err(|e| e.to_string()),
        other => {
            if let Some(params) = other.strip_prefix("sixfold:") {
                sixfold_from_params(params)
            } else {
                Err(format!(
                    "unknown builtin `{other}`; available: {}",
                    BUILTIN_NAMES.join(", ")
                ))
            }
        }
    }
}

fn hypersurface_ring(d: u32) -> Result<CohomologyRing, String> {
    let ci = CompleteIntersection::hypersurface(3, d).map_err(|e| e.to_string())?;
    ci_to_ring(&ci).map_err(|e| e.to_string())
}

fn sixfold_from_params(params: &str) -> Result<CohomologyRing, String> {
    let mut b2 = None;
    let mut b3 = None;
    let mut cubic_name = "lefschetz";
    for part in params.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            return Err(format!("malformed sixfold parameter `{part}` (expected key=value)"));
        };
        match key.trim() {
            "b2" => b2 = Some(value.trim().parse::<usize>().map_err(|e| e.to_string())?),
            "b3" => b3 = Some(value.trim().parse::<usize>().map_err(|e| e.to_string())?),
            "cubic" => cubic_name = value.trim(),
            other => return Err(format!("unknown sixfold parameter `{other}`")),
        }
    }
    let b2 = b2.ok_or("sixfold needs b2=..")?;
    let b3 = b3.ok_or("sixfold needs b3=..")?;
    let cubic = cubic_preset(cubic_name, b2)?;
    build_six_manifold(b2, b3, &cubic, 0).map_err(|e| e.to_string())
}

/// Named cubic presets for sixfold builders.
pub fn cubic_preset(name: &str, b2: usize) -> Result<CubicForm, String> {
    match name {
        "fermat" | "diagonal" => Ok(CubicForm::diagonal(b2)),
        "lefschetz" => Ok(CubicForm::lefschetz(b2)),
        other => Err(format!("unknown cubic preset `{other}` (use fermat or lefschetz)")),
    }
}
