use std::path::Path;
use std::process::{Command, Output};

use gcseq::corpus::{self, Format};
use gcseq::oracle::{naive_count, NaiveSeq};
use tempfile::TempDir;

fn gcseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Generates a small repetitive raw8 file and returns it decoded.
fn dna(dir: &TempDir) -> (std::path::PathBuf, Vec<u32>) {
    let path = dir.path().join("dna.raw");
    let o = gcseq(&[
        "gen-dna",
        "--length",
        "3000",
        "--copies",
        "10",
        "--mutation",
        "0.001",
        "--seed",
        "4",
        "--output",
        p(&path),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let loaded = corpus::decode(&std::fs::read(&path).unwrap(), Format::Raw8).unwrap();
    (path, loaded.seq)
}

fn query(index: &Path, op: &str, args: &[String]) -> Output {
    let mut v = vec![
        "query".to_string(),
        "--index".into(),
        p(index).into(),
        "--op".into(),
        op.into(),
        "--args".into(),
    ];
    v.extend(args.iter().cloned());
    let refs: Vec<&str> = v.iter().map(String::as_str).collect();
    gcseq(&refs)
}

fn answer(index: &Path, op: &str, args: &[u64]) -> u64 {
    let o = query(
        index,
        op,
        &args.iter().map(u64::to_string).collect::<Vec<_>>(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).trim().parse().unwrap()
}

#[test]
fn gen_dna_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, s) = dna(&dir);
    assert_eq!(s.len(), 30_000);
    let b = dir.path().join("again.raw");
    let o = gcseq(&[
        "gen-dna",
        "--length",
        "3000",
        "--copies",
        "10",
        "--mutation",
        "0.001",
        "--seed",
        "4",
        "--output",
        p(&b),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn built_structures_answer_like_the_oracle() {
    let dir = TempDir::new().unwrap();
    let (input, s) = dna(&dir);
    let naive = NaiveSeq::new(s.clone(), 4);
    let builds: &[&[&str]] = &[
        &[
            "--structure",
            "GCC.N",
            "--backend",
            "gcc",
            "-s",
            "1024",
            "--delta",
            "1",
        ],
        &["--structure", "GCC.C", "-s", "64", "--delta", "2"],
        &["--structure", "WTH", "--backend", "rrr"],
        &["--structure", "WM", "--backend", "gcc"],
        &["--structure", "MWT", "--arity", "4", "--backend", "delta"],
        &["--structure", "AP.RP", "--cut", "1", "--cuto", "1"],
        &["--structure", "AP", "--cut", "1"],
    ];
    for (k, extra) in builds.iter().enumerate() {
        let out = dir.path().join(format!("idx{k}"));
        let mut args = vec!["build", "--input", p(&input), "--output", p(&out)];
        args.extend_from_slice(extra);
        let o = gcseq(&args);
        assert!(
            o.status.success(),
            "{extra:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("total_bps"));
        for i in [1usize, 777, 29_999, 30_000] {
            assert_eq!(
                answer(&out, "access", &[i as u64]),
                naive.access(i).unwrap() as u64
            );
        }
        for a in 1..=4u32 {
            assert_eq!(
                answer(&out, "rank", &[a as u64, 12_345]),
                naive.rank(a, 12_345) as u64
            );
            assert_eq!(answer(&out, "rank", &[a as u64, 0]), 0);
            assert_eq!(answer(&out, "select", &[a as u64, 0]), 0);
            assert_eq!(
                answer(&out, "select", &[a as u64, 500]),
                naive.select(a, 500).unwrap() as u64
            );
        }
        // past the last occurrence is a data error
        let o = query(&out, "select", &["1".into(), "30001".into()]);
        assert_eq!(o.status.code(), Some(1));
    }
}

#[test]
fn fm_index_counts_patterns() {
    let dir = TempDir::new().unwrap();
    let (input, s) = dna(&dir);
    for bwt in ["GCC.N", "WTH"] {
        let out = dir.path().join(format!("fm-{bwt}"));
        let o = gcseq(&[
            "build",
            "--input",
            p(&input),
            "--structure",
            "FMI",
            "--bwt",
            bwt,
            "--output",
            p(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        for start in [0usize, 100, 20_000] {
            let pat = &s[start..start + 6];
            let args: Vec<u64> = pat.iter().map(|&x| x as u64).collect();
            assert_eq!(answer(&out, "count", &args), naive_count(&s, pat) as u64);
        }
        assert_eq!(answer(&out, "count", &[9]), 0);
        // only count is available on an FM-index
        assert_eq!(
            query(&out, "rank", &["1".into(), "1".into()]).status.code(),
            Some(2)
        );
    }
}

#[test]
fn bench_emits_verified_csv() {
    let dir = TempDir::new().unwrap();
    let (input, _) = dna(&dir);
    let out = dir.path().join("gcc");
    assert!(gcseq(&[
        "build",
        "--input",
        p(&input),
        "--structure",
        "GCC.N",
        "--output",
        p(&out)
    ])
    .status
    .success());
    for op in ["access", "rank", "select"] {
        let o = gcseq(&[
            "bench",
            "--index",
            p(&out),
            "--op",
            op,
            "--queries",
            "2000",
            "--seed",
            "3",
            "--threads",
            "2",
            "--verify",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "structure,op,bits_per_symbol,avg_microseconds");
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields[0], "GCC.N");
        assert_eq!(fields[1], op);
        assert!(fields[2].parse::<f64>().unwrap() > 0.0);
        assert!(fields[3].parse::<f64>().unwrap() >= 0.0);
    }
    let o = gcseq(&[
        "bench",
        "--index",
        p(&out),
        "--op",
        "rank",
        "--queries",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_csv() {
    let dir = TempDir::new().unwrap();
    let (input, _) = dna(&dir);
    let one = dir.path().join("one.raw");
    std::fs::write(&one, vec![b'x'; 100]).unwrap();
    let o = gcseq(&["stats", "--input", p(&input), p(&one)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "dataset,n,sigma,h0,h1,h2,h3,repair_bps,bwt_runs_ratio"
    );
    assert!(lines[1].starts_with("dna,30000,4,"));
    assert!(lines[2].starts_with("one,100,1,0.000000,"));
}

#[test]
fn u32le_input_and_alphabet_limits() {
    let dir = TempDir::new().unwrap();
    let wide: Vec<u32> = (0..5000u32)
        .map(|i| i % 70_000 + 1)
        .chain(std::iter::once(70_000))
        .collect();
    let path = dir.path().join("wide.u32");
    std::fs::write(&path, corpus::encode_u32le(&wide, 70_000).unwrap()).unwrap();
    let out = dir.path().join("o");
    let gcc = gcseq(&[
        "build",
        "--input",
        p(&path),
        "--format",
        "u32le",
        "--structure",
        "GCC.N",
        "--output",
        p(&out),
    ]);
    assert_eq!(gcc.status.code(), Some(1));
    let wm = gcseq(&[
        "build",
        "--input",
        p(&path),
        "--format",
        "u32le",
        "--structure",
        "WM",
        "--output",
        p(&out),
    ]);
    assert!(
        wm.status.success(),
        "{}",
        String::from_utf8_lossy(&wm.stderr)
    );
    assert_eq!(answer(&out, "access", &[5001]), 70_000);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (input, _) = dna(&dir);
    let out = dir.path().join("o");
    // usage errors
    assert_eq!(gcseq(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        gcseq(&[
            "build",
            "--input",
            p(&input),
            "--structure",
            "WT",
            "--cut",
            "3",
            "--output",
            p(&out)
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        gcseq(&[
            "build",
            "--input",
            p(&input),
            "--structure",
            "XYZ",
            "--output",
            p(&out)
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        gcseq(&[
            "build",
            "--input",
            p(&input),
            "--structure",
            "WTH",
            "--shape",
            "balanced",
            "--output",
            p(&out)
        ])
        .status
        .code(),
        Some(2)
    );
    // data errors
    let empty = dir.path().join("empty");
    std::fs::write(&empty, b"").unwrap();
    assert_eq!(
        gcseq(&[
            "build",
            "--input",
            p(&empty),
            "--structure",
            "WT",
            "--output",
            p(&out)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        gcseq(&[
            "build",
            "--input",
            p(&input),
            "--format",
            "u32le",
            "--structure",
            "WT",
            "--output",
            p(&out)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        query(&input, "access", &["1".into()]).status.code(),
        Some(1)
    );
    // a damaged index fails its checksum
    assert!(gcseq(&[
        "build",
        "--input",
        p(&input),
        "--structure",
        "WT",
        "--output",
        p(&out)
    ])
    .status
    .success());
    let mut bytes = std::fs::read(&out).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&out, bytes).unwrap();
    let o = query(&out, "access", &["1".into()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
}
