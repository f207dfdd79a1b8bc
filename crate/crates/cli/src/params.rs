use siqs_core::symcore::{parse_rational, Bindings, Symbol};

use crate::CliError;

/// Parses `hbar=1,alpha=-1/2` into exact bindings.
pub fn parse_params(s: &str) -> Result<Bindings, CliError> {
    let mut out = Bindings::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, got `{item}`")))?;
        let sym: Symbol = name
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown parameter `{}`", name.trim())))?;
        if !sym.is_parameter() {
            return Err(CliError::Usage(format!("`{sym}` is not a parameter")));
        }
        let value = value.trim();
        if value.contains(['.', 'e', 'E']) {
            return Err(CliError::Usage(format!(
                "`{name}={value}`: parameters are exact rationals; write e.g. 1/2 instead of 0.5"
            )));
        }
        let r = parse_rational(value).map_err(|e| CliError::Usage(format!("`{name}={value}`: {e}")))?;
        if out.insert(sym, r).is_some() {
            return Err(CliError::Usage(format!("parameter `{sym}` given twice")));
        }
    }
    Ok(out)
}
