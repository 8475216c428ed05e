use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nyquist_core::{AnalysisOptions, TimePoint, TimeSeries};
use nyquist_monitor::export::{ratio_cdf_csv, report_json, traces_csv};
use nyquist_monitor::{batch_report, write_trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

const N: usize = 4096;

// A tone on bin `bin` of an N-sample trace at 1 Hz; its 99% band ends at
// that bin, so the oversampling ratio is N / (2 * bin).
fn tone_trace(metric: &str, bin: usize) -> TimeSeries {
    let points = (0..N)
        .map(|i| {
            let t = i as f64;
            TimePoint::new(t, 3.0 + (2.0 * PI * (bin * i % N) as f64 / N as f64 + 0.4).sin())
        })
        .collect();
    TimeSeries::new(metric, "", points).unwrap()
}

fn noise_trace(metric: &str, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..N)
        .map(|i| TimePoint::new(i as f64, rng.random_range(-1.0..1.0)))
        .collect();
    TimeSeries::new(metric, "", points).unwrap()
}

fn write(dir: &Path, name: &str, ts: &TimeSeries) -> PathBuf {
    let p = dir.join(name);
    write_trace(&p, ts, name).unwrap();
    p
}

#[test]
fn planted_power_of_two_ratios_come_back_exactly() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    let mut planted = Vec::new();
    for e in 1..=10 {
        let k = 1usize << e;
        let bin = N / (2 * k);
        paths.push(write(dir.path(), &format!("t{e:02}.csv"), &tone_trace("m", bin)));
        planted.push(N as f64 / (2 * bin) as f64);
    }
    let set = batch_report(&paths, &AnalysisOptions::default()).unwrap();
    let got: Vec<f64> = set.reports.iter().map(|r| r.oversampling_ratio.unwrap()).collect();
    assert_eq!(got, planted);
    let cdf = ratio_cdf_csv(&set.ratio_cdf);
    let mut expected = String::from("ratio,cdf_fraction\n");
    for (i, r) in planted.iter().enumerate() {
        expected.push_str(&format!("{r},{}\n", (i + 1) as f64 / 10.0));
    }
    assert_eq!(cdf, expected);
}

#[test]
fn result_does_not_depend_on_input_order() {
    let dir = TempDir::new().unwrap();
    let mut paths = vec![
        write(dir.path(), "c.csv", &tone_trace("x", 7)),
        write(dir.path(), "a.csv", &tone_trace("y", 300)),
        write(dir.path(), "b.csv", &noise_trace("x", 1)),
        write(dir.path(), "d.csv", &tone_trace("y", 40)),
    ];
    let opts = AnalysisOptions::default();
    let first = batch_report(&paths, &opts).unwrap();
    paths.reverse();
    let second = batch_report(&paths, &opts).unwrap();
    paths.swap(0, 2);
    let third = batch_report(&paths, &opts).unwrap();
    assert_eq!(first, second);
    assert_eq!(first, third);
    let devices: Vec<&str> = first.reports.iter().map(|r| r.device_id.as_str()).collect();
    assert_eq!(devices, ["a.csv", "b.csv", "c.csv", "d.csv"]);
}

#[test]
fn malformed_file_is_skipped() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "good.csv", &tone_trace("m", 10));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "timestamp,value\n0,1\n1,oops\n").unwrap();
    let missing = dir.path().join("missing.csv");
    let set = batch_report(&[bad.clone(), good, missing], &AnalysisOptions::default()).unwrap();
    assert_eq!(set.reports.len(), 1);
    assert_eq!(set.skipped.len(), 2);
    assert!(set.skipped[0].source.ends_with("bad.csv"));
    assert!(set.skipped[0].reason.contains(":3:"), "{}", set.skipped[0].reason);

    let all_bad = batch_report(&[bad], &AnalysisOptions::default()).unwrap_err();
    assert!(matches!(
        all_bad,
        nyquist_monitor::Error::Core(nyquist_core::Error::AllTracesFailed { skipped: 1 })
    ));
}

#[test]
fn single_trace_has_degenerate_cdf() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "one.csv", &tone_trace("m", 64));
    let set = batch_report(&[p], &AnalysisOptions::default()).unwrap();
    assert_eq!(set.ratio_cdf.len(), 1);
    assert_eq!(set.ratio_cdf[0].value, 32.0);
    assert_eq!(set.ratio_cdf[0].fraction, 1.0);
}

#[test]
fn aliased_traces_export_minus_one() {
    let dir = TempDir::new().unwrap();
    let paths = vec![
        write(dir.path(), "a.csv", &noise_trace("m", 9)),
        write(dir.path(), "b.csv", &tone_trace("m", 128)),
    ];
    let set = batch_report(&paths, &AnalysisOptions::default()).unwrap();
    assert!(set.reports[0].nyquist.is_aliased());
    assert_eq!(ratio_cdf_csv(&set.ratio_cdf), "ratio,cdf_fraction\n-1,0.5\n16,1\n");
    let rows = traces_csv(&set.reports);
    assert!(rows.lines().nth(1).unwrap().ends_with(",-1,-1,4096"), "{rows}");
    let json: serde_json::Value = serde_json::from_str(&report_json(&set)).unwrap();
    assert_eq!(json["traces"][0]["oversampling_ratio"], -1.0);
    assert_eq!(json["traces"][0]["aliased"], true);
    assert_eq!(json["distributions"]["metrics"][0]["aliased"], 1);
}
