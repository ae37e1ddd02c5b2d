//! Decibel conversions. Everything past the config layer is linear.

/// Power ratio in dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Absolute power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert_eq!(dbm_to_watts(30.0), 1.0);
        assert!((dbm_to_watts(-80.0) - 1e-11).abs() < 1e-25);
        assert!((db_to_linear(-30.0) - 1e-3).abs() < 1e-18);
        for x in [-40.0, -3.0, 0.0, 7.5, 60.0] {
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
    }
}
