//! Thread-pool sizing from `COHSIM_THREADS`.

use anyhow::{bail, Context, Result};

pub const THREADS_VAR: &str = "COHSIM_THREADS";

/// Thread cap from the environment; `None` leaves rayon's default.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context(THREADS_VAR),
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_VAR}: not a count: {v:?}"))?;
            if n == 0 {
                bail!("{THREADS_VAR}: must be at least 1");
            }
            Ok(Some(n))
        }
    }
}

/// Installs the global pool once per process.
pub fn init() -> Result<()> {
    if let Some(n) = thread_cap()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    Ok(())
}
