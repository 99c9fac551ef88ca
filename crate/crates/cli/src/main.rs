use std::process::ExitCode;

fn main() -> ExitCode {
    match extgini_cli::run(std::env::args_os()) {
        Ok(result) => {
            for line in &result.diagnostics {
                eprintln!("{line}");
            }
            println!("{}", serde_json::to_string_pretty(&result.payload).expect("json value"));
            ExitCode::from(result.exit_code as u8)
        }
        Err(help) => {
            print!("{help}");
            ExitCode::SUCCESS
        }
    }
}
