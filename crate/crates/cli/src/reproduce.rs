use anyhow::Result;

use gosset::par::Execution;
use gosset::reproduce::{run_all, ReproduceOptions};

use crate::commands::load_polytope;
use crate::output::emit;
use crate::{Cli, Format, EXIT_VALIDATION};

pub fn run(cli: &Cli, skip_heavy: bool, execution: Execution) -> Result<u8> {
    let opts = ReproduceOptions {
        skip_heavy,
        execution,
        ..ReproduceOptions::default()
    };
    let human = cli.format == Format::Human;
    let outcomes = run_all(
        &opts,
        |n| {
            load_polytope(cli, n).map_err(|e| match e.downcast::<gosset::Error>() {
                Ok(g) => g,
                Err(e) => gosset::Error::Io(std::io::Error::other(format!("{e:#}"))),
            })
        },
        |o| {
            if human {
                println!("{}", o.line());
            }
        },
    )?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if human {
        println!(
            "{} of {} criteria passed{}",
            outcomes.len() - failed,
            outcomes.len(),
            if skip_heavy { " (* n = 8 skipped)" } else { "" }
        );
    } else {
        let csv = std::iter::once("criterion,title,passed,partial,seconds,detail".to_string())
            .chain(outcomes.iter().map(|o| {
                format!(
                    "{},{},{},{},{:.3},\"{}\"",
                    o.id,
                    o.title,
                    o.passed,
                    o.partial,
                    o.seconds,
                    o.detail.replace('"', "'")
                )
            }))
            .collect::<Vec<_>>()
            .join("\n");
        emit(cli.format, &outcomes, String::new, Some(csv))?;
    }
    Ok(if failed == 0 { 0 } else { EXIT_VALIDATION })
}
