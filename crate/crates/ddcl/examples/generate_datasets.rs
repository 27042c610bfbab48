//! Regenerates the bundled synthetic evaluation datasets under `data/`.
//!
//! These CSVs are deterministic stand-ins with the same schema (row count,
//! feature count, class balance) as the public UCI datasets they are named
//! after; real downloads can be dropped in their place without code
//! changes. `breast_cancer_diagnostic.csv` is the standard WDBC data and is
//! not regenerated here.
//!
//! Each class is a Gaussian blob plus, for some datasets, a few tight
//! "satellite" clusters far from the class centroid. Satellites populate the
//! sparse outer quantiles where curriculum oversampling activates, so the
//! bundled data exercises that branch of the pipeline on every run.

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(1e-12);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_row(rng: &mut ChaCha8Rng, center: &[f64], sigma: f64) -> Vec<f64> {
    center.iter().map(|&c| c + sigma * normal(rng)).collect()
}

struct Sample {
    features: Vec<f64>,
    label: String,
}

/// A far, tight cluster of `n` points at `center + radius * direction`.
fn satellite_cluster(
    rng: &mut ChaCha8Rng,
    center: &[f64],
    direction: &[f64],
    radius: f64,
    spread: f64,
    n: usize,
    label: &str,
) -> Vec<Sample> {
    let hub: Vec<f64> = center
        .iter()
        .zip(direction.iter())
        .map(|(&c, &u)| c + radius * u)
        .collect();
    (0..n)
        .map(|_| Sample {
            features: gaussian_row(rng, &hub, spread),
            label: label.to_string(),
        })
        .collect()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

fn write_csv(path: &PathBuf, feature_names: &[&str], label_name: &str, samples: &[Sample]) {
    let mut out = String::new();
    out.push_str(&feature_names.join(","));
    out.push(',');
    out.push_str(label_name);
    out.push('\n');
    for s in samples {
        for f in &s.features {
            out.push_str(&format!("{f:.6},"));
        }
        out.push_str(&s.label);
        out.push('\n');
    }
    fs::write(path, out).unwrap();
    println!("wrote {} ({} rows)", path.display(), samples.len());
}

/// Two overlapping blobs; `flip` fraction of blob labels are swapped to set
/// the irreducible error level.
#[allow(clippy::too_many_arguments)]
fn blob_pair(
    rng: &mut ChaCha8Rng,
    d: usize,
    n_a: usize,
    n_b: usize,
    sep: f64,
    sigma: f64,
    flip: f64,
    labels: (&str, &str),
) -> Vec<Sample> {
    let center_a = vec![0.0; d];
    let mut center_b = vec![0.0; d];
    let dir = unit((0..d).map(|j| 1.0 + (j as f64 * 0.37).sin() * 0.4).collect());
    for j in 0..d {
        center_b[j] = sep * dir[j];
    }
    let mut samples = Vec::new();
    for (center, n, label, other) in [
        (&center_a, n_a, labels.0, labels.1),
        (&center_b, n_b, labels.1, labels.0),
    ] {
        for _ in 0..n {
            let features = gaussian_row(rng, center, sigma);
            let label = if rng.gen::<f64>() < flip { other } else { label };
            samples.push(Sample {
                features,
                label: label.to_string(),
            });
        }
    }
    samples
}

/// Satellite system: collinear trios of `sat_label` points at staggered
/// radii, so each trio lands alone in one outer quantile bin of its class.
/// A clump of opposite-class points contests every trio (at `opp_offset`
/// from the hub), and four same-radius "filler" points on the far side of
/// the opponent centroid keep the opponents' own quantile bins above the
/// oversampling threshold.
#[allow(clippy::too_many_arguments)]
fn satellite_system(
    rng: &mut ChaCha8Rng,
    d: usize,
    sat_center: &[f64],
    opp_center: &[f64],
    sat_label: &str,
    opp_label: &str,
    radii: &[f64],
    spread: f64,
    sat_per_cluster: usize,
    opp_local: usize,
    opp_offset: f64,
    opp_spread_mult: f64,
) -> Vec<Sample> {
    let direction = unit((0..d).map(|j| if j % 2 == 0 { 1.0 } else { 0.6 }).collect());
    let offset_dir = unit((0..d).map(|j| if j % 2 == 0 { 0.4 } else { -1.0 }).collect());
    let mut samples = Vec::new();
    for &radius in radii {
        samples.extend(satellite_cluster(
            rng, sat_center, &direction, radius, spread, sat_per_cluster, sat_label,
        ));
        let hub: Vec<f64> = sat_center
            .iter()
            .zip(direction.iter())
            .map(|(&c, &u)| c + radius * u)
            .collect();
        let opp_hub: Vec<f64> = hub
            .iter()
            .zip(offset_dir.iter())
            .map(|(&h, &o)| h + opp_offset * o)
            .collect();
        for _ in 0..opp_local {
            samples.push(Sample {
                features: gaussian_row(rng, &opp_hub, spread * opp_spread_mult),
                label: opp_label.to_string(),
            });
        }
        let opp_radius: f64 = opp_hub
            .iter()
            .zip(opp_center.iter())
            .map(|(&h, &c)| (h - c) * (h - c))
            .sum::<f64>()
            .sqrt();
        let filler_hub: Vec<f64> = opp_center
            .iter()
            .zip(direction.iter())
            .map(|(&c, &u)| c - opp_radius * u)
            .collect();
        for _ in 0..4 {
            samples.push(Sample {
                features: gaussian_row(rng, &filler_hub, spread * 2.0),
                label: opp_label.to_string(),
            });
        }
    }
    samples
}

fn blob_center(d: usize, sep: f64) -> Vec<f64> {
    let dir = unit((0..d).map(|j| 1.0 + (j as f64 * 0.37).sin() * 0.4).collect());
    dir.into_iter().map(|u| sep * u).collect()
}

fn make_liver_disorder(dir: &PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11FE2);
    let d = 6;
    let sep = 1.22;
    let flip = 0.14;
    let sat_per = 4;
    let opp_local = 5;
    let opp_off = 0.9;
    // 345 rows split between blobs and the satellite system
    let mut samples = blob_pair(
        &mut rng,
        d,
        145 - 3 * (opp_local + 4),
        200 - 3 * sat_per,
        sep,
        1.0,
        flip,
        ("1", "2"),
    );
    let center_a = vec![0.0; d];
    let center_b = blob_center(d, sep);
    samples.extend(satellite_system(
        &mut rng, d, &center_b, &center_a, "2", "1", &[5.2, 6.9, 9.0], 0.25, sat_per, opp_local,
        opp_off, 2.0,
    ));
    write_csv(
        &dir.join("liver_disorder.csv"),
        &["mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks"],
        "selector",
        &samples,
    );
}

fn make_haberman(dir: &PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4AB);
    let d = 3;
    let sep = 1.7;
    let flip = 0.10;
    let sat_per = 4;
    let opp_local = 2;
    let opp_off = 0.0;
    let radii = vec![5.2, 6.9, 9.0];
    // 306 rows split between blobs and the satellite system
    let mut samples = blob_pair(
        &mut rng,
        d,
        225 - radii.len() * (opp_local + 4),
        81 - radii.len() * sat_per,
        sep,
        1.0,
        flip,
        ("survived", "died"),
    );
    let center_survived = vec![0.0; d];
    let center_died = blob_center(d, sep);
    samples.extend(satellite_system(
        &mut rng,
        d,
        &center_died,
        &center_survived,
        "died",
        "survived",
        &radii,
        0.25,
        sat_per,
        opp_local,
        opp_off,
        1.0,
    ));
    write_csv(
        &dir.join("haberman.csv"),
        &["age", "op_year", "axillary_nodes"],
        "survival",
        &samples,
    );
}

fn make_cancer(dir: &PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCA4CE4);
    // 457 rows, 9 features, benign 294 / malignant 163, mostly separable
    let samples = blob_pair(&mut rng, 9, 294, 163, 4.8, 1.0, 0.010, ("benign", "malignant"));
    write_csv(
        &dir.join("cancer.csv"),
        &[
            "clump_thickness",
            "size_uniformity",
            "shape_uniformity",
            "adhesion",
            "epithelial_size",
            "bare_nuclei",
            "bland_chromatin",
            "normal_nucleoli",
            "mitoses",
        ],
        "class",
        &samples,
    );
}

fn make_pima(dir: &PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x414A);
    // 768 rows, 8 features, negative 500 / positive 268
    let samples = blob_pair(&mut rng, 8, 500, 268, 1.6, 1.0, 0.14, ("negative", "positive"));
    write_csv(
        &dir.join("pima_diabetes.csv"),
        &[
            "pregnancies",
            "glucose",
            "blood_pressure",
            "skin_thickness",
            "insulin",
            "bmi",
            "pedigree",
            "age",
        ],
        "outcome",
        &samples,
    );
}

fn make_new_thyroid(dir: &PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7421D);
    // 215 rows, 3 classes: normal 150, hyper 35, hypo 30
    let mut samples = Vec::new();
    let classes = [
        (vec![0.0, 0.0, 0.0, 0.0, 0.0], 150, "normal"),
        (vec![2.6, 2.2, -1.4, 0.6, 1.8], 35, "hyper"),
        (vec![-2.2, -2.6, 2.0, -1.2, 1.4], 30, "hypo"),
    ];
    for (center, n, label) in classes {
        for _ in 0..n {
            let features = gaussian_row(&mut rng, &center, 1.0);
            let label = if rng.gen::<f64>() < 0.02 { "normal" } else { label };
            samples.push(Sample {
                features,
                label: label.to_string(),
            });
        }
    }
    write_csv(
        &dir.join("new_thyroid.csv"),
        &["t3_resin", "thyroxin", "triiodothyronine", "tsh", "tsh_diff"],
        "class",
        &samples,
    );
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(ddcl::data::data_dir);
    fs::create_dir_all(&dir).unwrap();
    make_liver_disorder(&dir);
    make_haberman(&dir);
    make_cancer(&dir);
    make_pima(&dir);
    make_new_thyroid(&dir);
    println!("note: breast_cancer_diagnostic.csv is the standard WDBC table and is not regenerated");
}
