//! `start:stop:step` grids for scalar flags. A bare value is a singleton;
//! `a:b` steps by 1; `a:b:c` steps by `c`. Stops are inclusive (within a
//! half-step tolerance for floats).

use crate::CliError;

pub fn parse_f64(raw: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = raw.split(':').collect();
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("--{flag}: '{s}' is not a number")))
    };
    match parts.as_slice() {
        [one] => Ok(vec![num(one)?]),
        [start, stop] => grid_f64(num(start)?, num(stop)?, 1.0, flag),
        [start, stop, step] => grid_f64(num(start)?, num(stop)?, num(step)?, flag),
        _ => Err(CliError::usage(format!(
            "--{flag}: expected value or start:stop[:step], got '{raw}'"
        ))),
    }
}

fn grid_f64(start: f64, stop: f64, step: f64, flag: &str) -> Result<Vec<f64>, CliError> {
    if step <= 0.0 || stop < start {
        return Err(CliError::usage(format!(
            "--{flag}: need start <= stop and step > 0"
        )));
    }
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let value = start + k as f64 * step;
        if value > stop + step * 1e-9 {
            break;
        }
        out.push(value.min(stop));
        k += 1;
        if k > 1_000_000 {
            return Err(CliError::usage(format!("--{flag}: grid too large")));
        }
    }
    Ok(out)
}

pub fn parse_u64(raw: &str, flag: &str) -> Result<Vec<u64>, CliError> {
    let parts: Vec<&str> = raw.split(':').collect();
    let num = |s: &str| -> Result<u64, CliError> {
        s.trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("--{flag}: '{s}' is not an integer")))
    };
    let (start, stop, step) = match parts.as_slice() {
        [one] => {
            let v = num(one)?;
            (v, v, 1)
        }
        [start, stop] => (num(start)?, num(stop)?, 1),
        [start, stop, step] => (num(start)?, num(stop)?, num(step)?),
        _ => {
            return Err(CliError::usage(format!(
                "--{flag}: expected value or start:stop[:step], got '{raw}'"
            )))
        }
    };
    if step == 0 || stop < start {
        return Err(CliError::usage(format!(
            "--{flag}: need start <= stop and step > 0"
        )));
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

pub fn parse_u32(raw: &str, flag: &str) -> Result<Vec<u32>, CliError> {
    parse_u64(raw, flag)?
        .into_iter()
        .map(|v| {
            u32::try_from(v).map_err(|_| CliError::usage(format!("--{flag}: {v} too large")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_and_ranges() {
        assert_eq!(parse_u32("4", "n").unwrap(), vec![4]);
        assert_eq!(parse_u32("2:6:2", "n").unwrap(), vec![2, 4, 6]);
        assert_eq!(parse_u32("3:5", "n").unwrap(), vec![3, 4, 5]);
        let grid = parse_f64("0.1:0.3:0.1", "p").unwrap();
        assert_eq!(grid.len(), 3);
        assert!((grid[2] - 0.3).abs() < 1e-12);
        assert!(parse_f64("0.5:0.1", "p").is_err());
        assert!(parse_u32("x", "n").is_err());
    }
}
