use torelli::adams::homotopy_ranks;
use torelli::builtins;
use torelli::lie::{lie_homology, quadratic_model_from_ring};

fn main() {
    let start = std::time::Instant::now();
    for name in ["p1", "p2", "p3", "p4", "p1xp1", "p1xp2", "s3", "s3xs3", "quintic", "cubic-threefold", "quartic-threefold", "sixfold:b2=2,b3=2", "sixfold:b2=3,b3=4,cubic=fermat"] {
        let ring = builtins::build(name).unwrap();
        let dim = ring.real_dimension();
        let t0 = std::time::Instant::now();
        let pis = homotopy_ranks(&ring, dim, None).unwrap();
        let model = quadratic_model_from_ring(&ring).unwrap().with_truncation(dim);
        let h = lie_homology(&model, dim - 1).unwrap();
        for j in 2..=dim {
            assert_eq!(pis.pi.get(&j).copied().unwrap_or(0), h[j - 1], "{name} degree {j}");
        }
        println!("{name}: ok in {:?} (pi: {:?})", t0.elapsed(), pis.pi);
    }
    println!("total: {:?}", start.elapsed());
}
