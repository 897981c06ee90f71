use std::fs;

use anyhow::Context;
use teatkey_core::{Ledger, LedgerEntry};

use crate::args::LedgerArgs;
use crate::exit::{OrExit, Outcome, INVALID_INPUT, USAGE};
use crate::render;

pub fn run(args: &LedgerArgs) -> Outcome {
    let text = fs::read_to_string(&args.entries)
        .with_context(|| format!("reading {}", args.entries.display()))
        .or_exit(USAGE)?;
    let entries: Vec<LedgerEntry> = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.entries.display()))
        .or_exit(INVALID_INPUT)?;
    let report = Ledger::from_entries(entries).report();
    if args.json {
        print!("{}", render::to_json(&report));
    } else {
        print!("{}", report.to_table());
    }
    Ok(())
}
