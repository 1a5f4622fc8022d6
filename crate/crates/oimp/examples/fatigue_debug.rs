use oimp::env::{Environment, FatigueFunction};
use oimp::harness::{replication_rng, run_campaign, tiered_cascade_log, CampaignConfig, PolicyKind, TieredLogProfile, GENERATOR_STREAM};

fn eval(profile: &TieredLogProfile, gamma: FatigueFunction, runs: u64) -> (f64, f64, f64) {
    let log = tiered_cascade_log(profile, &mut replication_rng(707, GENERATOR_STREAM)).unwrap();
    let mut means = Vec::new();
    let mut ses = Vec::new();
    for policy in [PolicyKind::FatGtUcb, PolicyKind::GtUcb] {
        let mut env = Environment::replay(log.clone()).with_fatigue(gamma.clone());
        let mut config = CampaignConfig::new(policy, 300, 1);
        config.gamma = gamma.clone();
        let mut finals = Vec::new();
        for run in 0..runs {
            let mut rng = replication_rng(707, run);
            let records = run_campaign(&config, &mut env, run, &mut rng).unwrap();
            finals.push(records.last().unwrap().cumulative as f64);
        }
        let m = finals.iter().sum::<f64>() / runs as f64;
        let v = finals.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
        means.push(m);
        ses.push((v / runs as f64).sqrt());
    }
    (means[0], means[1], (ses[0].powi(2) + ses[1].powi(2)).sqrt())
}

fn main() {
    let cases: Vec<(Vec<usize>, usize, f64)> = vec![
        (vec![9000, 1800, 360, 72], 3, 0.7),
        (vec![9000, 1800, 360, 72], 4, 0.8),
        (vec![12000, 2400, 480, 96], 4, 0.7),
        (vec![12000, 3000, 750, 180], 3, 0.85),
        (vec![6000, 1500, 375, 90], 3, 0.85),
        (vec![9000, 2250, 560, 140], 5, 0.85),
        (vec![16000, 4000, 1000, 250], 4, 0.7),
        (vec![16000, 2000, 250, 30], 3, 0.85),
    ];
    for (tiers, casc, act) in cases {
        let profile = TieredLogProfile { tier_supports: tiers.clone(), per_tier: 5, cascades_each: casc, activation: act };
        let (f_i, g_i, se_i) = eval(&profile, FatigueFunction::Inverse, 200);
        let (f_s, g_s, se_s) = eval(&profile, FatigueFunction::InverseSqrt, 200);
        let gap_i = f_i - g_i;
        let gap_s = f_s - g_s;
        let ok = gap_i > 0.0 && gap_s >= 0.0 && gap_s < gap_i;
        println!("tiers {:?} casc {} act {:.2}  inv {:+8.1} (t {:+4.1})  sqr {:+8.1} (t {:+4.1})  {}",
            tiers, casc, act, gap_i, gap_i / se_i, gap_s, gap_s / se_s, if ok { "OK" } else { "--" });
    }
}
