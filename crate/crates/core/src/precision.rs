//! Window budgets and the retry ladder.
//!
//! Truncating operations (series inversion, substitution, branch
//! expansion) consume a [`Precision`]; callers that hit
//! `InsufficientPrecision` retry with doubled windows up to the cap.

/// Window cap: retries stop doubling here.
pub const WINDOW_CAP: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    /// Known t1-terms per level for truncating operations.
    pub t1: i64,
    /// Known t2-levels for truncating operations.
    pub t2: i64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { t1: 32, t2: 16 }
    }
}

impl Precision {
    pub fn new(t1: i64, t2: i64) -> Precision {
        assert!(t1 >= 1 && t2 >= 1);
        Precision {
            t1: t1.min(WINDOW_CAP),
            t2: t2.min(WINDOW_CAP),
        }
    }

    /// Next rung of the retry ladder, or None at the cap.
    pub fn doubled(&self) -> Option<Precision> {
        if self.t1 >= WINDOW_CAP && self.t2 >= WINDOW_CAP {
            return None;
        }
        Some(Precision {
            t1: (self.t1 * 2).min(WINDOW_CAP),
            t2: (self.t2 * 2).min(WINDOW_CAP),
        })
    }
}

/// Run `f` at increasing precision until it stops reporting
/// InsufficientPrecision or the cap is reached.
pub fn with_retry<T>(
    start: Precision,
    mut f: impl FnMut(Precision) -> crate::error::Result<T>,
) -> crate::error::Result<T> {
    let mut prec = start;
    loop {
        match f(prec) {
            Err(crate::error::Error::InsufficientPrecision(what)) => match prec.doubled() {
                Some(next) => prec = next,
                None => {
                    return Err(crate::error::Error::InsufficientPrecision(format!(
                        "{what} (window cap {WINDOW_CAP} reached)"
                    )))
                }
            },
            other => return other,
        }
    }
}
