use clap::Parser;
use dioph_cli::config::{parse_blocks, parse_config_text, parse_heights, Cli, RunConfig};
use dioph_cli::CliError;

fn resolve(args: &[&str]) -> Result<RunConfig, CliError> {
    let mut argv = vec!["dioph"];
    argv.extend(args);
    RunConfig::resolve(&Cli::try_parse_from(argv).unwrap())
}

#[test]
fn height_and_block_forms() {
    assert_eq!(parse_heights("8").unwrap(), vec![8]);
    assert_eq!(parse_heights("4,8,16").unwrap(), vec![4, 8, 16]);
    assert_eq!(parse_heights("3:6").unwrap(), vec![3, 4, 5, 6]);
    assert_eq!(parse_heights("4:64:x2").unwrap(), vec![4, 8, 16, 32, 64]);
    assert_eq!(parse_heights("1:30:x3").unwrap(), vec![1, 3, 9, 27]);
    assert!(parse_heights("0:4").is_err());
    assert!(parse_heights("4:2").is_err());
    assert!(parse_heights("4:8:+2").is_err());
    assert_eq!(parse_blocks("m=3..6").unwrap(), vec![3, 4, 5, 6]);
    assert_eq!(parse_blocks("3:6").unwrap(), vec![3, 4, 5, 6]);
    assert_eq!(parse_blocks("2,5").unwrap(), vec![2, 5]);
    assert!(parse_blocks("m=0..2").is_err());
}

#[test]
fn canonical_form_round_trips() {
    let rc = resolve(&[
        "scaling",
        "--n",
        "3",
        "--delta",
        "0.1",
        "--psi",
        "pow:c=2,w=5/2",
        "--interval",
        "0.5:2",
        "--heights",
        "4:32:x2",
        "--tol",
        "1e-12",
        "--format",
        "json",
    ])
    .unwrap();
    let text = rc.canonical();
    assert!(text.contains("delta=1/10\n"));
    assert!(text.contains("interval=1/2:2\n"));
    assert!(text.contains("heights=4,8,16,32\n"));
    let map = parse_config_text(&text).unwrap();
    let back = RunConfig::from_map(rc.command, &map).unwrap();
    assert_eq!(back.canonical(), text);
    assert_eq!(back.cache_identity(), rc.cache_identity());
}

#[test]
fn identity_ignores_workers_and_output() {
    let a = resolve(&["measure", "--H", "8", "--workers", "1", "--out", "a.csv"]).unwrap();
    let b = resolve(&["measure", "--H", "8", "--workers", "8", "--out", "b.csv", "--cache-dir", "elsewhere"]).unwrap();
    assert_eq!(a.cache_identity(), b.cache_identity());
    let c = resolve(&["measure", "--H", "8", "--tol", "1e-10"]).unwrap();
    assert_ne!(a.cache_identity(), c.cache_identity());
    let d = resolve(&["scaling", "--H", "8"]).unwrap();
    assert_ne!(a.cache_identity(), d.cache_identity());
}

#[test]
fn exit_codes_follow_error_kinds() {
    use dioph_core::Error;
    assert_eq!(CliError::Config("x".into()).exit_code(), 2);
    assert_eq!(CliError::Core(Error::InvalidInterval("x".into())).exit_code(), 2);
    assert_eq!(CliError::Core(Error::BudgetExceeded("x".into())).exit_code(), 3);
    assert_eq!(CliError::Core(Error::Certification("x".into())).exit_code(), 4);
    assert_eq!(CliError::Core(Error::RefinementBudget { bits: 4096 }).exit_code(), 4);
}
