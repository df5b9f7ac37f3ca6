// temporary calibration harness; deleted before finalizing
use rainbowlab::graph::ColoredHypergraph;
use rainbowlab::pipeline::{run_pipeline_on, PipelineConfig, Stage};

#[test]
#[ignore]
fn calibrate_k50() {
    let g = ColoredHypergraph::complete_rainbow(50);
    let cfg = PipelineConfig {
        alpha: 0.25,
        matching_d: 3,
        path_deficit: Some(2),
        degree_slack: 0.5,
        expander_d: 6,
        partition_retries: 30,
        expander_retries: 30,
        ..PipelineConfig::default()
    };
    let mut ok = 0;
    let mut stages = std::collections::HashMap::new();
    for seed in 0..400u64 {
        let (res, trace) = run_pipeline_on(&g, &cfg, seed);
        match res {
            Ok(_) => ok += 1,
            Err(f) => {
                *stages.entry(format!("{:?}", f.stage)).or_insert(0u32) += 1;
                if stages.len() <= 3 {
                    eprintln!("seed {seed}: {} | trace: W={} C0={} C1={} elig={} path={} S={}",
                        f.reason, trace.w_size, trace.c0_size, trace.c1_size,
                        trace.eligible, trace.path_vertices, trace.s_size);
                }
            }
        }
    }
    eprintln!("successes: {ok}/400; failures by stage: {stages:?}");
    assert!(ok >= 380);
}

#[test]
#[ignore]
fn calibrate_k50_default_stagewise() {
    // how far does the DEFAULT config get on K50?
    let g = ColoredHypergraph::complete_rainbow(50);
    let cfg = PipelineConfig::default();
    let mut stages = std::collections::HashMap::new();
    for seed in 0..20u64 {
        let (res, _trace) = run_pipeline_on(&g, &cfg, seed);
        let key = match &res {
            Ok(_) => "done".to_string(),
            Err(f) => format!("{:?}: {}", f.stage, &f.reason[..f.reason.len().min(60)]),
        };
        *stages.entry(key).or_insert(0u32) += 1;
    }
    for (k, v) in &stages {
        eprintln!("{v:3} x {k}");
    }
    let _ = Stage::Done;
}
