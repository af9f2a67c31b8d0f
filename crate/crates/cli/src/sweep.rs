//! Grid sweeps over the coordinate space.
//!
//! The grid is the cartesian product of up to three linearly spaced
//! coordinates, walked in lexicographic order with the first `vary` entry
//! slowest. Each point is a pure evaluation, so workers split the index
//! range into contiguous chunks and the rows are concatenated back in
//! index order: the CSV bytes do not depend on `--jobs`.

use serde::Deserialize;

use qmixpar_core::entangle::{part_concurrences, report_oracle};
use qmixpar_core::geometry::hs_distance;
use qmixpar_core::parametrize::{density_from_coords, ek_basis, CoordsFile};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub vary: Vec<Vary>,
    #[serde(default)]
    pub fixed: CoordsFile,
    pub outputs: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vary {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

const OUTPUTS: [&str; 11] = [
    "negativity",
    "concurrence",
    "ppt",
    "c_p",
    "c_psi1",
    "c_psi2",
    "c_psi3",
    "c_e1",
    "c_e2",
    "c_e3",
    "d2_to_pure",
];

const MAX_GRID_POINTS: usize = 10_000_000;

fn validate(spec: &SweepSpec) -> Result<(), CliError> {
    if spec.vary.is_empty() || spec.vary.len() > 3 {
        return Err(CliError::Usage(format!(
            "between 1 and 3 varying coordinates are supported, got {}",
            spec.vary.len()
        )));
    }
    for v in &spec.vary {
        if !CoordsFile::KEYS.contains(&v.name.as_str()) {
            return Err(CliError::Usage(format!("unknown coordinate '{}'", v.name)));
        }
        if v.steps < 2 {
            return Err(CliError::Usage(format!(
                "'{}' needs at least 2 steps, got {}",
                v.name, v.steps
            )));
        }
        if !v.start.is_finite() || !v.stop.is_finite() {
            return Err(CliError::Usage(format!(
                "'{}' has a non-finite bound",
                v.name
            )));
        }
    }
    for (i, a) in spec.vary.iter().enumerate() {
        if spec.vary[i + 1..].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("'{}' varies twice", a.name)));
        }
    }
    if spec.outputs.is_empty() {
        return Err(CliError::Usage("no outputs requested".into()));
    }
    for out in &spec.outputs {
        if !OUTPUTS.contains(&out.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown output '{out}'; available: {}",
                OUTPUTS.join(", ")
            )));
        }
    }
    let total: usize = spec.vary.iter().map(|v| v.steps).product();
    if total > MAX_GRID_POINTS {
        return Err(CliError::Usage(format!(
            "grid has {total} points, the limit is {MAX_GRID_POINTS}"
        )));
    }
    Ok(())
}

/// 17-significant-digit scientific notation; round-trip exact for f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn eval_row(file: &CoordsFile, values: &[f64], outputs: &[String]) -> Result<String, CliError> {
    let coords = file
        .build()
        .map_err(|e| CliError::Usage(format!("grid point {values:?} is out of range: {e}")))?;
    let parts = part_concurrences(&coords);

    let need_state = outputs.iter().any(|o| {
        matches!(
            o.as_str(),
            "negativity" | "concurrence" | "ppt" | "d2_to_pure"
        )
    });
    let (report, d2) = if need_state {
        let rho = density_from_coords(&coords);
        let rep = report_oracle(&rho).map_err(|e| CliError::Internal(e.to_string()))?;
        let d2 = hs_distance(&rho, &ek_basis(&coords)[0].projector())
            .map_err(|e| CliError::Internal(e.to_string()))?;
        (Some(rep), d2)
    } else {
        (None, 0.0)
    };

    let mut cells: Vec<String> = values.iter().map(|v| fmt(*v)).collect();
    for out in outputs {
        let cell = match out.as_str() {
            "negativity" => fmt(report.as_ref().unwrap().negativity),
            "concurrence" => fmt(report.as_ref().unwrap().concurrence),
            "ppt" => if report.as_ref().unwrap().ppt_satisfied {
                "1"
            } else {
                "0"
            }
            .to_string(),
            "c_p" => fmt(parts.c_p),
            "c_psi1" => fmt(parts.c_psi1),
            "c_psi2" => fmt(parts.c_psi2),
            "c_psi3" => fmt(parts.c_psi3),
            "c_e1" => fmt(parts.c_e1),
            "c_e2" => fmt(parts.c_e2),
            "c_e3" => fmt(parts.c_e3),
            "d2_to_pure" => fmt(d2),
            _ => unreachable!("validated above"),
        };
        cells.push(cell);
    }
    Ok(cells.join(","))
}

pub fn run(mut spec: SweepSpec, degrees: bool, jobs: usize) -> Result<String, CliError> {
    validate(&spec)?;
    if degrees {
        crate::to_radians(&mut spec.fixed);
        for v in &mut spec.vary {
            if CoordsFile::ANGLE_KEYS.contains(&v.name.as_str()) {
                v.start = v.start.to_radians();
                v.stop = v.stop.to_radians();
            }
        }
    }

    let dims: Vec<usize> = spec.vary.iter().map(|v| v.steps).collect();
    let total: usize = dims.iter().product();

    let point = |idx: usize| -> (CoordsFile, Vec<f64>) {
        let mut rem = idx;
        let mut file = spec.fixed;
        let mut values = Vec::with_capacity(spec.vary.len());
        // lexicographic: vary[0] is the slowest axis
        for (axis, v) in spec.vary.iter().enumerate() {
            let block: usize = dims[axis + 1..].iter().product();
            let i = rem / block;
            rem %= block;
            let t = i as f64 / (v.steps - 1) as f64;
            let value = v.start + (v.stop - v.start) * t;
            file.set(&v.name, value);
            values.push(value);
        }
        (file, values)
    };

    let workers = jobs.max(1).min(total);
    let chunk = total.div_ceil(workers);
    let chunks: Vec<Result<Vec<String>, CliError>> = std::thread::scope(|scope| {
        let point = &point;
        let outputs = &spec.outputs;
        (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(total);
                    (lo..hi)
                        .map(|idx| {
                            let (file, values) = point(idx);
                            eval_row(&file, &values, outputs)
                        })
                        .collect()
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut lines = Vec::with_capacity(total + 1);
    let header: Vec<&str> = spec
        .vary
        .iter()
        .map(|v| v.name.as_str())
        .chain(spec.outputs.iter().map(|s| s.as_str()))
        .collect();
    lines.push(header.join(","));
    for chunk_rows in chunks {
        lines.extend(chunk_rows?);
    }
    let mut csv = lines.join("\n");
    csv.push('\n');
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec(vary: Vec<Vary>, outputs: &[&str]) -> SweepSpec {
        SweepSpec {
            vary,
            fixed: CoordsFile::default(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn grid_is_lexicographic() {
        let spec = base_spec(
            vec![
                Vary {
                    name: "nu1".into(),
                    start: 0.0,
                    stop: 1.0,
                    steps: 3,
                },
                Vary {
                    name: "chi".into(),
                    start: 0.0,
                    stop: 0.5,
                    steps: 2,
                },
            ],
            &["c_p"],
        );
        let csv = run(spec, false, 1).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 1 + 6);
        assert_eq!(rows[0], "nu1,chi,c_p");
        // nu1 slowest: first two rows share nu1 = 0
        assert!(rows[1].starts_with(&format!("{:.16e},{:.16e}", 0.0, 0.0)));
        assert!(rows[2].starts_with(&format!("{:.16e},{:.16e}", 0.0, 0.5)));
        assert!(rows[3].starts_with(&format!("{:.16e}", 0.5)));
    }

    #[test]
    fn jobs_do_not_change_bytes() {
        let make = || {
            base_spec(
                vec![Vary {
                    name: "nu1".into(),
                    start: 0.0,
                    stop: 1.0,
                    steps: 37,
                }],
                &["negativity", "concurrence", "ppt"],
            )
        };
        let one = run(make(), false, 1).unwrap();
        let four = run(make(), false, 4).unwrap();
        let many = run(make(), false, 16).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, many);
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let err = |spec| matches!(run(spec, false, 1), Err(CliError::Usage(_)));
        assert!(err(base_spec(vec![], &["c_p"])));
        assert!(err(base_spec(
            vec![Vary {
                name: "bogus".into(),
                start: 0.0,
                stop: 1.0,
                steps: 2
            }],
            &["c_p"],
        )));
        assert!(err(base_spec(
            vec![Vary {
                name: "nu1".into(),
                start: 0.0,
                stop: 1.0,
                steps: 1
            }],
            &["c_p"],
        )));
        assert!(err(base_spec(
            vec![Vary {
                name: "nu1".into(),
                start: 0.0,
                stop: 1.0,
                steps: 2
            }],
            &["entropy"],
        )));
    }

    #[test]
    fn degrees_convert_angle_axes_only() {
        let spec = base_spec(
            vec![Vary {
                name: "chi".into(),
                start: 0.0,
                stop: 45.0,
                steps: 2,
            }],
            &["c_p"],
        );
        let csv = run(spec, true, 1).unwrap();
        let last = csv.lines().last().unwrap();
        // χ = 45° = π/4 gives the maximally entangled pure state, C_p = 1
        let c_p: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
        assert!((c_p - 1.0).abs() < 1e-12);
    }
}
