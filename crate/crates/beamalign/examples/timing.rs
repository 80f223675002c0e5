use beamalign::optimizer::{greedy_sa, OptimizerConfig};
use beamalign::pdf::AoDPdf;
use beamalign::policy::Policy;

fn main() {
    for (policy, name) in [
        (Policy::Sd, "sd"),
        (Policy::Bf, "bf"),
        (Policy::TwoSd, "2sd"),
        (Policy::TwoBf, "2bf"),
    ] {
        let cfg = OptimizerConfig::new(policy, 2, AoDPdf::uniform(), 7);
        let out = greedy_sa(&cfg, 5).unwrap();
        let mut lams: Vec<f64> = out.restarts.iter().map(|r| r.lambda_bar).collect();
        lams.sort_by(f64::total_cmp);
        println!(
            "{name}: best={:.4} worst={:.4} spread={:.5}",
            lams[0],
            lams[lams.len() - 1],
            lams[lams.len() - 1] - lams[0]
        );
    }
}
