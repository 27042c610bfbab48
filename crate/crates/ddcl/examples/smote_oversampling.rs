//! Shows how sparse quantile bins are grown: a class whose two farthest
//! members sit alone in the outer bin gets one synthetic interpolation.

use ndarray::array;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ddcl::curriculum::{build_curriculum, CurriculumConfig, Scoring};
use ddcl::smote::{k_nearest, smote};

fn main() -> ddcl::Result<()> {
    // a compact cluster near the origin plus two far members
    let features = array![
        [0.00, 0.02],
        [0.03, 0.00],
        [0.05, 0.04],
        [0.02, 0.06],
        [0.06, 0.01],
        [0.90, 0.88],
        [0.95, 0.97],
    ];
    let labels = vec![0usize; 7];

    let cfg = CurriculumConfig::new(Scoring::Density, 9);
    let cur = build_curriculum(features.view(), &labels, 1, &cfg)?;
    println!(
        "bin counts after oversampling: {:?}",
        cur.partitions[0].counts()
    );
    for (i, s) in cur.synthetics.iter().enumerate() {
        println!(
            "synthetic {i}: parents rows {} and {}, lambda {:.3}, coords ({:.3}, {:.3})",
            s.parent_a, s.parent_b, s.lambda, s.coords[0], s.coords[1]
        );
        // always on the closed segment between its parents
        for j in 0..2 {
            let a = features[(s.parent_a, j)];
            let b = features[(s.parent_b, j)];
            assert!((s.coords[j] - (a + s.lambda * (b - a))).abs() < 1e-12);
        }
    }

    // the raw pieces are usable on their own
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!(
        "\nnearest neighbors of row 0: {:?}",
        k_nearest(features.view(), 0, 3)?
    );
    let direct = smote(features.view(), 0, 2, 3, &mut rng)?;
    for s in &direct {
        println!(
            "direct smote draw: parents {} and {}, lambda {:.3}",
            s.parent_a, s.parent_b, s.lambda
        );
    }
    Ok(())
}
