// Driving the command-line front end in-process and reading its JSON.

use polybound::cli::{main_with_args, EXIT_OK};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["polybound", "eval", "--fn", "polygamma", "--n", "1", "--x", "1"];
    let code = main_with_args(args, &mut out, &mut err);
    assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
    let doc: serde_json::Value = serde_json::from_slice(&out)?;
    println!("psi'(1) = {}", doc["result"]["display"]);

    let mut out = Vec::new();
    let args = [
        "polybound", "verify", "--bounds", "B01,B12", "--points", "50", "--random-points", "10",
    ];
    let code = main_with_args(args, &mut out, &mut err);
    let doc: serde_json::Value = serde_json::from_slice(&out)?;
    println!("verify exit {code}: {}", doc["result"]["summary"]);
    assert_eq!(code, EXIT_OK);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
