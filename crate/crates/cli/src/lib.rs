pub mod args;
pub mod config;
pub mod error;
pub mod figure;
pub mod output;
pub mod query;
pub mod verify;

use args::{Cli, Command, Format};
use config::Settings;
use error::CliResult;

/// What a command produced, and whether it counts as success.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let settings = Settings::resolve(cli)?;
    let text = match &cli.command {
        Command::Noiseless(a) => query::noiseless(a, &settings)?,
        Command::Dephasing(a) => query::dephasing(a, &settings)?,
        Command::Dual(a) => query::dual(a, &settings)?,
        Command::Dc(a) => query::dc(a, &settings)?,
        Command::Figure(a) => {
            let table = figure::figure(&a.name, a.resolution, &settings)?;
            table.render(settings.format.unwrap_or(Format::Csv))?
        }
        Command::Verify(a) => {
            let checks = verify::run_suite(a.suite, &settings)?;
            let ok = checks.iter().all(|c| c.pass);
            let text = match settings.format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&checks)?),
                Format::Csv => verify_csv(&checks),
            };
            return Ok(Outcome { text, ok });
        }
    };
    Ok(Outcome { text, ok: true })
}

fn verify_csv(checks: &[verify::Check]) -> String {
    let mut s = String::from("check,expected,got,tol,pass\n");
    for c in checks {
        let expected = match &c.expected {
            verify::Expected::Value(v) => output::fixed(*v),
            verify::Expected::Text(t) => t.clone(),
        };
        s.push_str(&format!(
            "\"{}\",{},{},{:e},{}\n",
            c.check.replace('"', "\"\""),
            expected,
            output::fixed(c.got),
            c.tol,
            c.pass
        ));
    }
    s
}
