// temporary calibration harness; deleted before finalizing
use rainbowlab::bitset::Bitset;
use rainbowlab::colorset::ColorSet;
use rainbowlab::model::{generate, ModelParams};
use rainbowlab::pipeline::{rainbow_long_path, run_pipeline, PipelineConfig};

#[test]
#[ignore]
fn below_threshold_n300_stage_tally() {
    let n = 300usize;
    let p = 0.2 * (n as f64).ln() / n as f64;
    let c = (1.2 * n as f64).ceil() as u32;
    let cfg = PipelineConfig::default();
    let mut stages = std::collections::HashMap::new();
    for seed in 0..100u64 {
        let params = ModelParams::new(n, 2, p, c, seed).unwrap();
        let (res, _) = run_pipeline(&params, &cfg);
        let key = match &res {
            Ok(_) => "done".into(),
            Err(f) => format!("{:?}", f.stage),
        };
        *stages.entry(key).or_insert(0u32) += 1;
    }
    eprintln!("n=300 below threshold stages: {stages:?}");
}

#[test]
#[ignore]
fn long_path_g300() {
    // G(300, 1.1 ln n / n, 1.2 n), all colors allowed, deficit n / ln^0.4 n
    let n = 300usize;
    let p = 1.1 * (n as f64).ln() / n as f64;
    let c = (1.2 * n as f64).ceil() as u32;
    let deficit = 60u64;
    let cfg = PipelineConfig::default();
    let mut ok = 0;
    let mut best_misses = Vec::new();
    for seed in 0..100u64 {
        let params = ModelParams::new(n, 2, p, c, seed).unwrap();
        let g = generate(&params);
        let allowed = ColorSet::from_iter_with_palette(c, 0..c);
        let forbidden = Bitset::new(n);
        match rainbow_long_path(&g, &allowed, &forbidden, deficit, &cfg, seed) {
            Ok(out) => {
                ok += 1;
                let _ = out;
            }
            Err(f) => best_misses.push(f.reason),
        }
    }
    eprintln!("long path successes: {ok}/100 (deficit {deficit})");
    for m in best_misses.iter().take(3) {
        eprintln!("  miss: {m}");
    }
}
